"""Command-line front end.

Exit codes: 0 success, 1 usage / IO / parse error, 2 the state fails
validation.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .bounds import best_bound, clamp
from .criteria import k_mn
from .loo import DimMismatch, lemma1_pair
from .optimizer import OptimizerConfig, optimize_loos
from .qstate import (
    BadParams,
    DimensionMismatch,
    InvalidState,
    UnknownFamily,
    check_density,
    make_family,
    reference_schmidt,
    sci,
)
from .sweep import BadRange, UnknownParam, sweep

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_family(spec: str) -> tuple[str, dict[str, str]]:
    """``name:key=value,key=value`` -> (name, params)."""
    name, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq or not key:
            raise UsageError(f"bad family parameter {item!r} (expected key=value)")
        params[key.strip()] = value.strip()
    return name.strip(), params


def _load(args):
    if bool(args.state) == bool(args.family):
        raise UsageError("give exactly one of --state or --family")
    if args.state:
        return io.read_state(args.state), None
    name, params = parse_family(args.family)
    return make_family(name, params), (name, params)


def _strategy(rho, family, loo: str):
    if loo.startswith("file="):
        return io.read_pair(loo[len("file=") :])
    if loo == "lemma1-psi":
        if family is None:
            raise UsageError("--loo lemma1-psi needs a --family with a reference pure state")
        return lemma1_pair(reference_schmidt(*family), rho.dims)
    if loo in ("standard", "lemma1", "isotropic", "optimize"):
        return loo
    raise UsageError(f"unknown --loo strategy {loo!r}")


def _config(args) -> OptimizerConfig:
    kw = {}
    for flag, key in (("restarts", "restarts"), ("steps", "steps_per_restart"), ("seed", "seed")):
        if getattr(args, flag, None) is not None:
            kw[key] = getattr(args, flag)
    try:
        return OptimizerConfig(**kw)
    except ValueError as err:
        raise UsageError(str(err)) from err


def _verdict(flag: bool) -> str:
    return "entangled" if flag else "not detected"


def cmd_info(args) -> int:
    rho, family = _load(args)
    rep = best_bound(rho, _strategy(rho, family, args.loo), _config(args))
    m, n = rep.m, rep.n
    out = [
        f"dims: {m} x {n}" + ("  (subsystems swapped)" if rho.swapped else ""),
        "validation: ok",
        f"ppt_value ||T_A(rho)||: {rep.ppt_value:.9g}  [{_verdict(rep.ppt_value > 1 + 1e-9)}]",
        f"ccnr_value ||R(rho)||: {rep.ccnr_value:.9g}  [{_verdict(rep.ccnr_value > 1 + 1e-9)}]",
        f"cm ||T||: {rep.cm_norm:.9g}  K_MN: {k_mn(m, n):.9g}  [{_verdict(rep.cm_norm > rep.cm_threshold + 1e-9)}]",
        f"lurs value: {rep.lurs_value:.9g}  threshold: {rep.lurs_threshold:.9g}  pair: {rep.pair.name}  "
        f"[{_verdict(rep.lurs_value < rep.lurs_threshold - 1e-9)}]",
        f"caf bound:  raw {rep.caf_raw:.9g}  clamped {rep.caf:.9g}",
        f"lurs bound: raw {rep.lurs_raw:.9g}  clamped {rep.lurs:.9g}",
        f"cm bound:   raw {rep.cm_raw:.9g}  clamped {rep.cm:.9g}",
        f"best: {rep.best:.9g}",
    ]
    print("\n".join(out))
    return EXIT_OK


def cmd_sweep(args) -> int:
    name, fixed = parse_family(args.family)
    loo = args.loo
    if loo.startswith("file="):
        loo = io.read_pair(loo[len("file=") :])
    rows = sweep(name, args.param, args.start, args.stop, args.steps, loo, fixed, _config(args))
    if args.out:
        io.write_csv(args.out, rows)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        sys.stdout.write(io.rows_to_csv(rows))
    return EXIT_OK


def cmd_optimize(args) -> int:
    rho, _ = _load(args)
    cfg = _config(args)
    res = optimize_loos(rho, cfg)
    print("seed pairs: " + ", ".join(f"{k} {v:.9g}" for k, v in res.seed_bounds.items()))
    for r in res.restarts:
        print(f"restart {r.index + 1:3d} [{r.seed_name}]: start {r.start_bound:.9g} -> best {r.bound:.9g} ({r.accepted} accepted)")
    print(f"global best: raw {res.bound:.9g}  clamped {clamp(res.bound, rho.m):.9g}  pair {res.pair.name}")
    if args.out:
        io.write_pair(args.out, res.pair)
        print(f"wrote LOO pair to {args.out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    mat, dims = io.parse_state(Path(args.path).read_text(), args.path)
    checks = check_density(mat, dims)
    for c in checks:
        print(f"{c.kind:<13} {'pass' if c.ok else 'FAIL'}  {sci(c.magnitude)}  (tol {sci(c.tolerance)})")
    return EXIT_OK if all(c.ok for c in checks) else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="entbound", description="Concurrence lower bounds from separability criteria.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def state_opts(sp):
        sp.add_argument("--state", help="state file (JSON)")
        sp.add_argument("--family", help="family spec, e.g. bell:M=3 or figure1:p=0.5")

    def opt_opts(sp):
        sp.add_argument("--seed", type=int)
        sp.add_argument("--restarts", type=int)
        sp.add_argument("--steps", type=int, help="hill-climbing steps per restart")

    sp = sub.add_parser("info", help="criteria and bounds for one state")
    state_opts(sp)
    sp.add_argument("--loo", default="lemma1", help="standard|lemma1|lemma1-psi|isotropic|optimize|file=<path>")
    opt_opts(sp)
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("sweep", help="bounds over a family parameter, as CSV")
    sp.add_argument("--family", required=True)
    sp.add_argument("--param", required=True)
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--steps", type=int, default=101, help="grid points, endpoints included")
    sp.add_argument("--loo", default="lemma1")
    sp.add_argument("--out")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--restarts", type=int)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("optimize", help="search LOO pairs for the best LUR bound")
    state_opts(sp)
    opt_opts(sp)
    sp.add_argument("--out", help="write the winning LOO pair here")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("validate", help="check a state file")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidState as err:
        print(f"invalid state: {err}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, io.StateFileError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, UnknownFamily, BadParams, UnknownParam, BadRange, DimensionMismatch, DimMismatch, ValueError) as err:
        if isinstance(err, UnknownFamily):
            msg = f"unknown family {err.args[0]!r}"
        else:
            msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
