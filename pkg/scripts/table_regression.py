"""Compare the bundled reference tables with the arrays the constructions produce.

Prints, per table, whether the printed set is itself complementary, how many
printed arrays the construction reproduces, and per-member entry differences.
"""
import json

from gcas.tables import TABLES, compare_table


def main():
    for name in TABLES:
        print(json.dumps(compare_table(name).to_dict()))


if __name__ == "__main__":
    main()
