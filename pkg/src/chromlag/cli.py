"""Command-line front end.

Results go to stdout (or ``--out``) as JSON or CSV; diagnostics go to stderr.
Exit status: 0 on success, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .chromatic import chromatic_check
from .cubicmap import CubicMap, build_named
from .faddeev import IDENTITIES, verify_identity
from .foam import DeformedFoam, build_foam, h1_presentation, phase_and_framings, tau_basis, tau_map
from .intlin import quotient_rank_and_torsion
from .qseries import XSeries
from .quiverdt import SymQuiver, disk_invariants, dt_integer_invariants, dt_series
from .seeds import FramedSeed, Mutate, path_from_json, path_to_json, standard_necklace_seed
from .wavefn import OVTable, aenv_operator, canoe_path, ov_factorize, run_path, solve_face_relations, solve_q_difference

__all__ = ["main", "run", "build_parser", "PRESET_PATHS"]


class UsageError(Exception):
    pass


# strand mutations from the necklace that land on the named graph
PRESET_PATHS = {
    "prism": (2, [Mutate("s1", 1), Mutate("s2", 1)]),
    "cube": (3, [Mutate("s1", 1), Mutate("s2", 1), Mutate("s3", 1), Mutate("s4", -1)]),
}


def _load_json(arg: str):
    """Inline JSON, or a path to a JSON file."""
    text = arg
    if not arg.lstrip().startswith(("[", "{")):
        p = Path(arg)
        if not p.exists():
            raise UsageError(f"no such file: {arg}")
        text = p.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {arg!r}: {exc}") from None


def _emit(args, payload, csv_text: str | None = None) -> None:
    if args.format == "csv":
        if csv_text is None:
            raise UsageError("this subcommand has no CSV form")
        text = csv_text
    else:
        text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _series_csv(F: XSeries) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["exp", "num", "den"])
    for t in F.to_json()["terms"]:
        wr.writerow([" ".join(map(str, t["exp"])), t["num"], t["den"]])
    return buf.getvalue()


def _order(args) -> int:
    if args.order < 1:
        raise UsageError("--order must be at least 1")
    return args.order


# ----------------------------------------------------------------------
# subcommands


def _start_seed(args) -> FramedSeed:
    if args.seed:
        return FramedSeed.from_json(_load_json(args.seed))
    return standard_necklace_seed(args.g)


def cmd_mutate(args) -> int:
    seed = _start_seed(args)
    path = path_from_json(_load_json(args.path)) if args.path else []
    for i, st in enumerate(path):
        seed, _ = seed.apply(st)
        problems = seed.validate()
        if problems:
            print(f"step {i}: {problems}", file=sys.stderr)
            return 1
    _emit(args, seed.to_json())
    return 0


def _wavefunction(args) -> XSeries:
    D = _order(args)
    if args.preset == "aenv":
        op, ctx = aenv_operator()
        F = solve_q_difference([op], 1, D, ctx)
    elif args.preset == "canoe":
        A = _load_json(args.A) if args.A else None
        _, F = run_path(canoe_path(args.g, A, args.convention), D, g=args.g)
    elif args.preset == "necklace":
        F = solve_face_relations(standard_necklace_seed(args.g), D)
    elif args.preset in PRESET_PATHS:
        g, path = PRESET_PATHS[args.preset]
        _, F = run_path(path, D, start=standard_necklace_seed(g))
    elif args.path:
        _, F = run_path(path_from_json(_load_json(args.path)), D, start=_start_seed(args))
    elif args.seed:
        F = solve_face_relations(_start_seed(args), D)
    else:
        raise UsageError("give --preset, --path or --seed")
    if not isinstance(F, XSeries):
        raise RuntimeError(f"no wavefunction: {F.reason} at degree {F.degree} {F.detail}")
    return F


def cmd_wavefunction(args) -> int:
    F = _wavefunction(args)
    _emit(args, F.to_json(), _series_csv(F))
    return 0


def cmd_ov(args) -> int:
    F = XSeries.from_json(_load_json(args.series)) if args.series else _wavefunction(args)
    t = ov_factorize(F)
    _emit(args, t.to_json(), t.to_csv())
    if not t.admissible:
        print(f"not OV-integral; witness {t.witness}", file=sys.stderr)
        return 1
    return 0


def _adjacency(args):
    if not args.adjacency:
        raise UsageError("--adjacency is required")
    A = _load_json(args.adjacency)
    if isinstance(A, int):
        A = [[A]]
    return A


def cmd_dt(args) -> int:
    try:
        Q = SymQuiver(_adjacency(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    D = _order(args)
    F = dt_series(Q, D)
    table = dt_integer_invariants(Q, D)
    _emit(args, {"adjacency": [list(r) for r in Q.A], "series": F.to_json(), "invariants": table.to_json()}, table.to_csv())
    return 0


def cmd_disk(args) -> int:
    try:
        n = disk_invariants(_adjacency(args), _order(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [{"d": list(d), "n": v} for d, v in sorted(n.items(), key=lambda t: (sum(t[0]), t[0]))]
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["d", "n"])
    for r in rows:
        wr.writerow([" ".join(map(str, r["d"])), r["n"]])
    _emit(args, {"order": args.order, "invariants": rows}, buf.getvalue())
    return 0


def cmd_foam(args) -> int:
    if args.foam:
        F = DeformedFoam.from_json(_load_json(args.foam))
    elif args.preset:
        F = build_foam(args.preset, args.g)
    else:
        raise UsageError("give --foam or --preset")
    rank, torsion = quotient_rank_and_torsion(h1_presentation(F))
    pf, frank = phase_and_framings(F)
    tau = tau_map(F)
    out = {
        "rank": rank,
        "torsion": list(torsion),
        "tau_basis": list(tau_basis(F) or []),
        "tau": {e: [tau[i, j] for i in range(tau.rows)] for j, e in enumerate(F.graph.edge_labels)},
        "edges": list(pf.edges),
        "phase": pf.phase.tolist(),
        "framing": pf.framing.tolist(),
        "framing_parameter_rank": frank,
    }
    _emit(args, out)
    return 0


def _graph(args) -> CubicMap:
    if args.graph:
        return CubicMap.from_json(_load_json(args.graph))
    if args.preset:
        return build_named(args.preset, args.g)
    raise UsageError("give --graph or --preset")


def cmd_chromatic(args) -> int:
    seed = int(args.seed) if args.seed is not None else 0
    r = chromatic_check(_graph(args), samples=args.samples, seed=seed)
    _emit(args, r)
    return 0 if r["ok"] else 1


def _complex(text: str | None):
    if text is None:
        return None
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def cmd_identities(args) -> int:
    names = IDENTITIES if args.name in (None, "all") else [args.name]
    reports = [verify_identity(n, hbar=_complex(args.hbar), seed=args.sample_seed) for n in names]
    ok = all(r["ok"] for r in reports)
    if args.report == "text":
        for r in reports:
            print(f"{'PASS' if r['ok'] else 'FAIL'} {r['name']} {r.get('residual', r.get('errors'))}")
    else:
        _emit(args, reports if len(reports) > 1 else reports[0])
    return 0 if ok else 1


def cmd_golden(args) -> int:
    from .golden import run_golden

    only = args.only.split(",") if args.only else None
    results = run_golden(only)
    for r in results:
        line = f"{'PASS' if r['ok'] else 'FAIL'} [{r['id']:>2}] {r['name']} ({r['seconds']:.2f}s)"
        print(line, file=sys.stdout)
        if not r["ok"]:
            print(f"     {r['detail']}", file=sys.stderr)
    return 0 if all(r["ok"] for r in results) else 1


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="chromlag", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--order", type=int, default=6, help="truncation order D")
    common.add_argument("--g", type=int, default=1, help="genus for presets")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mutate", parents=[common], help="apply a seed path to a framed seed")
    p.add_argument("--seed", help="seed JSON (file or inline); default: standard necklace of genus --g")
    p.add_argument("--path", help="seed path JSON (file or inline)")
    p.set_defaults(func=cmd_mutate)

    for name, helptext, fn in (
        ("wavefunction", "power-series wavefunction", cmd_wavefunction),
        ("ov-invariants", "Ooguri-Vafa exponents of a wavefunction", cmd_ov),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--preset", choices=("necklace", "canoe", "prism", "cube", "aenv"))
        p.add_argument("--A", help="framing matrix for the canoe preset, e.g. '[[1]]'")
        p.add_argument("--convention", choices=("shift", "dual", "bare"), default="shift")
        p.add_argument("--seed", help="seed JSON; solved from its face relations unless --path is given")
        p.add_argument("--path", help="seed path JSON applied to the seed (default start: necklace of genus --g)")
        if name == "ov-invariants":
            p.add_argument("--series", help="series JSON produced by `wavefunction`")
        p.set_defaults(func=fn)

    p = sub.add_parser("dt-series", parents=[common], help="DT series and integer invariants of a symmetric quiver")
    p.add_argument("--adjacency", help="adjacency matrix JSON (nonnegative)")
    p.set_defaults(func=cmd_dt)

    p = sub.add_parser("disk-invariants", parents=[common], help="disk invariants from the classical Y-system")
    p.add_argument("--adjacency", help="symmetric integer matrix JSON (negative entries allowed)")
    p.set_defaults(func=cmd_disk)

    p = sub.add_parser("foam-h1", parents=[common], help="H1 of the filling, tau, phase and framings of a foam")
    p.add_argument("--foam", help="foam JSON (file or inline)")
    p.add_argument("--preset", choices=("necklace", "prism", "tetrahedron"))
    p.set_defaults(func=cmd_foam)

    p = sub.add_parser("chromatic-check", parents=[common], help="random-coloring check of the face relations")
    p.add_argument("--graph", help="graph JSON (file or inline)")
    p.add_argument("--preset", choices=("theta", "necklace", "canoe", "tetrahedron", "prism", "cube"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_chromatic)

    p = sub.add_parser("verify-identities", parents=[common], help="numerical checks of quantum dilogarithm identities")
    p.add_argument("--name", choices=("all",) + IDENTITIES, default="all")
    p.add_argument("--hbar", help="complex hbar such as '0.8+0.6j'; default per identity")
    p.add_argument("--report", choices=("json", "text"), default="json")
    p.add_argument("--sample-seed", type=int, default=0)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("golden", help="run every acceptance check and print a pass/fail matrix")
    p.add_argument("--only", help="comma-separated check ids")
    p.set_defaults(func=cmd_golden)
    return top


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"chromlag: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        print(f"chromlag {args.command}: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
