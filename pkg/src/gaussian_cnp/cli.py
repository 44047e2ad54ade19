"""Command-line interface.

Exit codes:

    0  success
    2  parse error (unreadable/malformed file, bad op, non-symplectic raw op)
    3  invalid state (not a physical covariance matrix, bad parameter)
    4  audit failure
    5  unsupported mode count
    6  internal numerical fault (cross-check or pairing failure)
    7  mode index out of range / duplicated
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .audit import FAMILIES, KINDS, AuditConfig, run_audit
from .core import make_state, validate
from .errors import AuditFailure, CNPError
from .invariants import minor_invariants, partial_transpose, symplectic_eigenvalues
from .polarity import log_negativity, total_cnp
from .symplectic import apply

EXIT_OK = 0


def _fmt(x: float) -> str:
    return f"{x:.7g}"


def _emit(text: str, out=None) -> None:
    (out or sys.stdout).write(text)


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        _emit(text)


def cmd_state_make(args) -> int:
    params = {"r": args.r, "phi": args.phi, "n_th": args.nth}
    n = args.modes if args.modes is not None else (2 if args.kind == "tmsv" else 1)
    state = make_state(args.kind, {k: v for k, v in params.items() if v is not None}, n)
    text = io.dumps_state(state)
    if args.output:
        _write_or_print(text, args.output)
        if not args.json:
            _emit(f"wrote {args.kind} state ({state.n_modes} modes) to {args.output}\n")
    else:
        _emit(text)
    return EXIT_OK


def cmd_state_validate(args) -> int:
    matrix, _ = io.read_state_file_raw(args.state)
    report = validate(matrix)
    if args.json:
        _emit(io.dumps(report.to_dict()))
    else:
        _emit(
            f"symmetric       {report.symmetric}\n"
            f"positive        {report.positive}\n"
            f"uncertainty_ok  {report.uncertainty_ok}\n"
            f"nu_min          {_fmt(report.nu_min)}\n"
            f"valid           {report.valid}\n"
        )
    return EXIT_OK if report.valid else 3


def cmd_invariants(args) -> int:
    state = io.parse_state_file(args.state)
    matrix = state.matrix
    if args.pt is not None:
        matrix = partial_transpose(matrix, args.pt)
    inv = minor_invariants(matrix, transposed=args.pt is not None)
    nus = symplectic_eigenvalues(matrix)
    if args.json:
        doc = inv.to_dict()
        doc["pt_mode"] = args.pt
        doc["symplectic_eigenvalues"] = [float(v) for v in nus]
        _emit(io.dumps(doc))
        return EXIT_OK
    name = "I~" if args.pt is not None else "I"
    lines = [f"{name}_{k:<3d} {_fmt(v)}" for k, v in enumerate(inv.values)]
    lines.append("nu     " + " ".join(_fmt(v) for v in nus))
    _emit("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_cnp(args) -> int:
    state = io.parse_state_file(args.state)
    report = total_cnp(state)
    if args.json:
        _emit(io.dumps(report.to_dict()))
        return EXIT_OK
    lines = []
    for m, v in enumerate(report.single):
        lines.append(f"single     {m:<6} {_fmt(v)}")
    for key, v in report.pairs.items():
        lines.append(f"pair       {key:<6} {_fmt(v):<14} {report.classifications['pair/' + key]}")
    for m, v in report.bipartite.items():
        ln = log_negativity(state, m)
        lines.append(
            f"bipartite  {str(m) + ':rest':<6} {_fmt(v):<14} "
            f"{report.classifications[f'bipartite/{m}']:<10} logneg {_fmt(ln)}"
        )
    lines.append(f"total             {_fmt(report.total)}")
    lines.append(f"total (closed)    {_fmt(report.total_closed_form)}")
    _emit("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_apply(args) -> int:
    state = io.parse_state_file(args.state)
    network = io.parse_network_file(args.network, n_modes=state.n_modes)
    out = apply(state, network)
    _write_or_print(io.dumps_state(out), args.output)
    if args.output and not args.json:
        _emit(f"wrote {out.n_modes}-mode state to {args.output}\n")
    return EXIT_OK


def cmd_audit(args) -> int:
    config = AuditConfig(
        kind=args.kind,
        n_modes=args.modes if args.modes is not None else (3 if args.kind in ("theorem1", "biseparable") else 2),
        trials=args.trials,
        depth=args.depth,
        seed=args.seed,
        family=args.family,
        r_max=args.r_max,
        nth_max=args.nth_max,
        tol=args.tol,
    )
    report = run_audit(config, workers=args.workers)
    if args.json:
        _emit(io.dumps(report.to_dict()))
    else:
        _emit(
            f"audit          {report.kind} ({report.n_modes} modes, {report.family})\n"
            f"trials         {report.trials_run}\n"
            f"max_abs_drift  {_fmt(report.max_abs_drift)}\n"
            f"max_rel_drift  {_fmt(report.max_rel_drift)}\n"
            f"ppt_violations {report.ppt_violations}\n"
            f"failures       {len(report.failures)}\n"
            f"passed         {report.passed}\n"
        )
        for f in report.failures[:10]:
            _emit(f"  trial {f['trial']} seed {f['seed']} drift {_fmt(f['drift'])} {f['fingerprint']}\n")
    return EXIT_OK if report.passed else AuditFailure.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="full-precision JSON output")

    parser = argparse.ArgumentParser(
        prog="gaussian-cnp",
        description="Classical-nonclassical polarity of Gaussian states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state-make", parents=[common], help="write a standard state file")
    p.add_argument("kind", choices=["vacuum", "thermal", "squeezed_thermal", "tmsv"])
    p.add_argument("--modes", type=int, default=None)
    p.add_argument("--r", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--nth", type=float)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_state_make)

    p = sub.add_parser("state-validate", parents=[common], help="check a state file")
    p.add_argument("state")
    p.set_defaults(func=cmd_state_validate)

    p = sub.add_parser("invariants", parents=[common], help="symplectic invariants")
    p.add_argument("state")
    p.add_argument("--pt", type=int, metavar="MODE", help="partially transpose this mode first")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("cnp", parents=[common], help="polarity report")
    p.add_argument("state")
    p.set_defaults(func=cmd_cnp)

    p = sub.add_parser("apply", parents=[common], help="propagate a state through a network")
    p.add_argument("state")
    p.add_argument("network")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("audit", parents=[common], help="randomized verification")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--modes", type=int, default=None, help="2 or 3 (default depends on kind)")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--r-max", type=float, default=1.5)
    p.add_argument("--nth-max", type=float, default=2.0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CNPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
