"""Golay complementary array sets from 2D generalized Boolean functions, and their use
as omnidirectional precoders for uniform rectangular arrays."""

__version__ = "0.1.0"
