"""Command-line entry point: construct, verify, pattern, ber, repro.

Exit codes: 0 success, 1 verification failure, 2 bad arguments.  Every
subcommand that writes files also writes ``manifest.json`` to its output
directory.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .baselines import PRNG_NAME, random_precoders, zc_precoders
from .constructions import (Lemma3Params, ParameterError, Th1Params, Th2Params, lemma3_construct,
                            th1_construct, th1_for_length, th2_construct, validate_params)
from .correlation import verify_gcas
from .gbf import build_array, format_gbf, parse_gbf, to_unimodular
from .io import (RunManifest, fmt, read_complex_csv, read_manifest, read_zq_csv, write_complex_csv,
                 write_rows, write_zq_csv)
from .mimo import UraGeometry, flatness, pattern_grid
from .stbc import SimConfig, simulate_ber
from .tables import PARAMS_4X4X33, PARAMS_8X4X21, TABLES, compare_table


class UsageError(Exception):
    """Argument problem reported with exit code 2."""


def _ints(text: str | None) -> tuple[int, ...]:
    if text is None or text.strip() == "":
        return ()
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(args, argv, sub: str, params: dict, artifacts, **extra) -> RunManifest:
    return RunManifest(sub, params, list(argv), PRNG_NAME, args.seed, list(artifacts), __version__, extra)


# --- construct -------------------------------------------------------------

def _params_from_args(args):
    t = args.theorem
    if t == "1" and args.length is not None:
        _need(args, "n")
        try:
            return th1_for_length(args.q, args.n, args.length, args.k, _ints(args.coeffs))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    _need(args, "n", "m")
    n, m, q = args.n, args.m, args.q
    if t == "1":
        _need(args, "k", "v")
        pi = _ints(args.pi) or tuple(range(1, m + n - args.k + 1))
        return Th1Params(q, n, m, args.k, args.v, pi, _ints(args.coeffs), _ints(args.d_flags))
    if t == "2":
        _need(args, "k", "v")
        pi1 = _ints(args.pi1) or tuple(range(1, m + 1))
        pi2 = _ints(args.pi2) or tuple(range(1, n + 1))
        return Th2Params(q, n, m, args.k, args.v, pi1, pi2, _ints(args.mu), _ints(args.coeffs),
                         _ints(args.kappa), _ints(args.d_flags))
    _need(args, "v")
    pi1 = _ints(args.pi1) or tuple(range(1, m))
    pi2 = _ints(args.pi2) or tuple(range(1, n + 1))
    return Lemma3Params(q, n, m, args.v, pi1, pi2, _ints(args.coeffs), _ints(args.kappa))


def construct_to(out: Path, params) -> tuple[list[str], dict]:
    bad = validate_params(params)
    if bad:
        raise ParameterError(bad)
    builder = {Th1Params: th1_construct, Th2Params: th2_construct, Lemma3Params: lemma3_construct}
    res = builder[type(params)](params)
    names = []
    for j, a in enumerate(res.arrays):
        name = f"member_{j}.csv"
        write_zq_csv(out / name, a)
        names.append(name)
    info = res.manifest()
    info["construction_params"] = info.pop("params")
    info.update(kind="zq", gbf=format_gbf(res.base, "xy"))
    return names, info


def baseline_to(out: Path, kind: str, L1: int, L2: int, N: int, seed: int,
                row_root: int = 1, col_root: int = 1) -> tuple[list[str], dict]:
    if kind == "zc":
        pre = zc_precoders(L1, L2, N, row_root, col_root)
    else:
        pre = random_precoders(L1, L2, N, seed)
    names = []
    for j, w in enumerate(pre):
        name = f"member_{j}.csv"
        write_complex_csv(out / name, w)
        names.append(name)
    info = {"construction": kind, "kind": "complex", "N": N, "L1": L1, "L2": L2,
            "row_root": row_root, "col_root": col_root}
    return names, info


def cmd_construct(args, argv) -> int:
    modes = [x is not None for x in (args.theorem, args.baseline, args.gbf)]
    if sum(modes) != 1:
        raise UsageError("give exactly one of --theorem, --baseline, --gbf")
    out = _out_dir(args)
    if args.theorem is not None:
        names, info = construct_to(out, _params_from_args(args))
    elif args.baseline is not None:
        _need(args, "L1", "L2", "N")
        try:
            names, info = baseline_to(out, args.baseline, args.L1, args.L2, args.N, args.seed,
                                      args.row_root, args.col_root)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        _need(args, "n", "m")
        try:
            f = parse_gbf(args.gbf, args.q, args.n, args.m)
            a = build_array(f, args.length)
        except (ValueError, IndexError) as exc:
            raise UsageError(str(exc)) from None
        write_zq_csv(out / "member_0.csv", a)
        names = ["member_0.csv"]
        info = {"construction": "gbf", "kind": "zq", "gbf": format_gbf(f, "xy"), "q": a.q,
                "N": 1, "L1": a.shape[0], "L2": a.shape[1]}
    _manifest(args, argv, "construct", _echo(args), names, **info).write(out)
    print(json.dumps({"out": str(out), "N": info["N"], "L1": info["L1"], "L2": info["L2"]}))
    return 0


# --- loading array sets ----------------------------------------------------

def load_set(directory: Path) -> tuple[list[np.ndarray], dict]:
    """Unimodular arrays of a construct output directory, in member order."""
    man = read_manifest(directory)
    files = sorted((a for a in man["artifacts"] if a.startswith("member_")),
                   key=lambda s: int(s[len("member_"):-len(".csv")]))
    if man.get("kind") == "zq":
        arrays = [to_unimodular(read_zq_csv(directory / f, man["q"])) for f in files]
    else:
        arrays = [read_complex_csv(directory / f) for f in files]
    return arrays, man


def _load_for_verify(args) -> list[np.ndarray]:
    paths = [Path(p) for p in args.paths]
    if len(paths) == 1 and paths[0].is_dir():
        return load_set(paths[0])[0]
    if any(p.is_dir() for p in paths):
        raise UsageError("pass either one directory or a list of CSV files")
    missing = [str(p) for p in paths if not p.exists()]
    if missing:
        raise UsageError("no such file: " + ", ".join(missing))
    if args.complex:
        return [read_complex_csv(p) for p in paths]
    if args.q is None:
        raise UsageError("CSV files need --q (integer exponents) or --complex")
    return [to_unimodular(read_zq_csv(p, args.q)) for p in paths]


def cmd_verify(args, argv) -> int:
    try:
        arrays = _load_for_verify(args)
        rep = verify_gcas(arrays, tolerance=args.tolerance, method=args.method)
    except (ValueError, FileNotFoundError) as exc:
        raise UsageError(str(exc)) from None
    d = rep.to_dict()
    print(json.dumps(d, sort_keys=True))
    if args.out is not None:
        out = _out_dir(args)
        (out / "report.json").write_text(json.dumps(d, indent=2, sort_keys=True) + "\n")
        _manifest(args, argv, "verify", _echo(args), ["report.json"]).write(out)
    return 0 if rep.is_gcas else 1


# --- pattern ---------------------------------------------------------------

def pattern_to(out: Path, arrays, geom: UraGeometry, n_phi: int, n_theta: int) -> tuple[list[str], dict]:
    grid = pattern_grid(arrays, geom, n_phi, n_theta)
    rows = [(fmt(p), fmt(t), fmt(grid.power[a, b]))
            for a, p in enumerate(grid.phi) for b, t in enumerate(grid.theta)]
    write_rows(out / "pattern.csv", ("phi", "theta", "E"), rows)
    E = grid.power
    try:
        ratio, cv = flatness(grid)
    except ValueError:
        ratio, cv = float("inf"), float(E.std() / E.mean())
    summary = {"max_over_min": ratio, "std_over_mean": cv, "min": float(E.min()), "max": float(E.max()),
               "mean": float(E.mean()), "N_L1_L2": len(arrays) * geom.L1 * geom.L2,
               "n_phi": n_phi, "n_theta": n_theta}
    (out / "flatness.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return ["pattern.csv", "flatness.json"], summary


def _geometry(args, L1, L2) -> UraGeometry:
    try:
        return UraGeometry(L1, L2, args.dx, args.dy)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_pattern(args, argv) -> int:
    try:
        arrays, _ = load_set(Path(args.source))
    except (FileNotFoundError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot load array set from {args.source}: {exc}") from None
    L1, L2 = arrays[0].shape
    out = _out_dir(args)
    names, summary = pattern_to(out, arrays, _geometry(args, L1, L2), args.n_phi, args.n_theta)
    _manifest(args, argv, "pattern", _echo(args), names).write(out)
    print(json.dumps(summary, sort_keys=True))
    return 0


# --- ber -------------------------------------------------------------------

BER_HEADER = ("scheme", "EbN0_dB", "bits", "errors", "ber", "ci95")


def ber_to(out: Path, cfg: SimConfig) -> tuple[list[str], dict]:
    curves = simulate_ber(cfg)
    rows = []
    for name, c in curves.items():
        for x, b, e, p, ci in zip(c.ebn0_db, c.bits, c.errors, c.ber, c.ci95):
            rows.append((name, float(x), b, e, float(p), float(ci)))
    write_rows(out / "ber.csv", BER_HEADER, rows)
    return ["ber.csv"], cfg.describe()


def _setup_schemes(setup: str, seed: int, row_root=1, col_root=1) -> dict[str, list[np.ndarray]]:
    name = {"4x33": "4x4x33", "4x21": "8x4x21"}[setup]
    N, params = TABLES[name]
    res = th1_construct(params) if isinstance(params, Th1Params) else th2_construct(params)
    L1, L2 = res.L1, res.L2
    return {"gcas": res.unimodular(), "zc": zc_precoders(L1, L2, N, row_root, col_root),
            "random": random_precoders(L1, L2, N, seed)}


def cmd_ber(args, argv) -> int:
    if (args.setup is None) == (not args.scheme):
        raise UsageError("give either --setup or one or more --scheme NAME=DIR")
    if args.setup is not None:
        schemes = _setup_schemes(args.setup, args.seed, args.row_root, args.col_root)
    else:
        schemes = {}
        for item in args.scheme:
            if "=" not in item:
                raise UsageError(f"--scheme expects NAME=DIR, got {item!r}")
            name, d = item.split("=", 1)
            try:
                schemes[name] = load_set(Path(d))[0]
            except (FileNotFoundError, KeyError, ValueError) as exc:
                raise UsageError(f"cannot load scheme {name!r}: {exc}") from None
    L1, L2 = next(iter(schemes.values()))[0].shape
    try:
        cfg = SimConfig(_geometry(args, L1, L2), schemes, _floats(args.ebn0), args.max_bits,
                        args.max_errors, args.seed, None, args.trials_per_chunk, args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = _out_dir(args)
    names, desc = ber_to(out, cfg)
    _manifest(args, argv, "ber", _echo(args), names, config=desc).write(out)
    print((out / "ber.csv").read_text(), end="")
    return 0


# --- repro -----------------------------------------------------------------

def cmd_repro(args, argv) -> int:
    out = _out_dir(args)
    ok = True
    setups = [("4x33", "4x4x33", PARAMS_4X4X33, "pattern_4x33", "ber_4x33"),
              ("4x21", "8x4x21", PARAMS_8X4X21, "pattern_4x21", "ber_4x21")]
    artifacts = []
    summary = {}
    ebn0 = _floats(args.ebn0)
    for setup, table, params, pat_dir, ber_dir in setups:
        N = TABLES[table][0]
        gdir = out / f"gcas_{table}"
        gdir.mkdir(exist_ok=True)
        names, info = construct_to(gdir, params)
        _manifest(args, argv, "construct", {"table": table}, names, **info).write(gdir)
        arrays, _ = load_set(gdir)
        rep = verify_gcas(arrays)
        ok &= rep.is_gcas
        (gdir / "report.json").write_text(json.dumps(rep.to_dict(), indent=2, sort_keys=True) + "\n")
        L1, L2 = arrays[0].shape
        geom = _geometry(args, L1, L2)
        schemes = _setup_schemes(setup, args.seed, args.row_root, args.col_root)
        pat = {}
        for name, pre in schemes.items():
            pdir = out / pat_dir / name
            pdir.mkdir(parents=True, exist_ok=True)
            pnames, pat[name] = pattern_to(pdir, pre, geom, args.n_phi, args.n_theta)
            _manifest(args, argv, "pattern", {"scheme": name, "setup": setup}, pnames).write(pdir)
        bdir = out / ber_dir
        bdir.mkdir(exist_ok=True)
        cfg = SimConfig(geom, schemes, ebn0, args.max_bits, args.max_errors, args.seed, None,
                        args.trials_per_chunk, args.threads)
        bnames, desc = ber_to(bdir, cfg)
        _manifest(args, argv, "ber", {"setup": setup}, bnames, config=desc).write(bdir)
        cmp_ = compare_table(table)
        summary[table] = {"gcas": rep.to_dict(), "N": N, "L1": L1, "L2": L2,
                          "table_regression": cmp_.to_dict(),
                          "flatness": {k: v["max_over_min"] for k, v in pat.items()}}
        artifacts += [f"gcas_{table}", pat_dir, ber_dir]
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    _manifest(args, argv, "repro", _echo(args), artifacts + ["summary.json"]).write(out)
    print(json.dumps(summary, sort_keys=True))
    return 0 if ok else 1


# --- parser ----------------------------------------------------------------

def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "threads")}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker threads for Monte Carlo")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    common.add_argument("--out", default=None, help="output directory")

    geo = argparse.ArgumentParser(add_help=False)
    geo.add_argument("--dx", type=float, default=0.5, help="column spacing in wavelengths")
    geo.add_argument("--dy", type=float, default=0.5, help="row spacing in wavelengths")

    roots = argparse.ArgumentParser(add_help=False)
    roots.add_argument("--row-root", type=int, default=1, help="ZC root of the length-L1 sequence")
    roots.add_argument("--col-root", type=int, default=1, help="ZC root of the length-L2 sequence")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--n-phi", type=int, default=64)
    grid.add_argument("--n-theta", type=int, default=128)

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--ebn0", default="0,2,4,6,8,10", help="comma-separated Eb/N0 points in dB")
    sim.add_argument("--max-bits", type=int, default=10**5)
    sim.add_argument("--max-errors", type=int, default=200)
    sim.add_argument("--trials-per-chunk", type=int, default=2048)

    p = argparse.ArgumentParser(prog="gcas", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common, roots], help="build a GCAS or a baseline precoder set")
    c.add_argument("--theorem", choices=["1", "2", "lemma3"])
    c.add_argument("--baseline", choices=["zc", "random"])
    c.add_argument("--gbf", help="single array from a GBF, e.g. '1*x1*x2 + 1*y1'")
    c.add_argument("--q", type=int, default=2)
    for name in ("n", "m", "k", "v", "length", "L1", "L2", "N"):
        c.add_argument(f"--{name}", type=int)
    for name in ("pi", "pi1", "pi2", "coeffs", "mu", "kappa", "d-flags"):
        c.add_argument(f"--{name}", help="comma-separated integers")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="check the complementary property")
    v.add_argument("paths", nargs="+", help="a construct output directory or CSV files")
    v.add_argument("--q", type=int)
    v.add_argument("--complex", action="store_true", help="CSV files hold interleaved re,im columns")
    v.add_argument("--tolerance", type=float)
    v.add_argument("--method", choices=["direct", "fft"], default="direct")
    v.set_defaults(func=cmd_verify)

    pt = sub.add_parser("pattern", parents=[common, geo, grid], help="radiated power over a direction grid")
    pt.add_argument("--from", dest="source", required=True, help="construct output directory")
    pt.set_defaults(func=cmd_pattern)

    b = sub.add_parser("ber", parents=[common, geo, sim, roots], help="Monte Carlo BER of precoder sets")
    b.add_argument("--setup", choices=["4x33", "4x21"], help="reference GCAS plus ZC and random baselines")
    b.add_argument("--scheme", action="append", default=[], help="NAME=DIR, repeatable")
    b.set_defaults(func=cmd_ber)

    r = sub.add_parser("repro", parents=[common, geo, grid, sim, roots],
                       help="constructions, patterns and BER curves for both reference GCASs")
    r.set_defaults(func=cmd_repro)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.out is None and args.command not in ("verify",):
        args.out = "out"
    try:
        return args.func(args, argv)
    except ParameterError as exc:
        for v in exc.violations:
            print(f"error: {v}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
