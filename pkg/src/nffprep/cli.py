"""Command-line interface: ``nffprep <command> [flags]``.

Commands print JSON to stdout (``--csv`` switches the tabular ones),
diagnostics to stderr. Exit status is 0 on success, 1 when the inputs are
outside a routine's domain and 2 on usage errors. Numeric flags accept exact
rationals such as ``1/64``.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import re
import sys
from fractions import Fraction

import numpy as np

from .bench import (
    CSV_COLUMNS,
    FAMILIES,
    SweepConfig,
    optimality_gap_table,
    sweep_details,
    table_csv,
)
from .blockenc import lcu_encode, shifted_grover_terms, validate
from .errors import NFFError
from .filters import dense_error, make_bandpass_filter, make_step_filter, odd_part
from .hamiltonians import (
    compress_to_gap,
    defect_lattice,
    defect_terms,
    grover_gap,
    grover_hamiltonian,
    grover_terms,
    quintic_map_problem,
    shift_and_scale,
)
from .prep import ROUTES, prepare_excited_state, prepare_ground_state

HELP_WIDTH = 100


class UsageError(Exception):
    """Bad flag values caught after parsing; reported with exit status 2."""


def real(text: str) -> float:
    """Parse a decimal or an exact rational like ``1/64``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number or fraction: {text!r}") from exc


def real_list(text: str) -> list[float]:
    return [real(part) for part in text.split(",") if part.strip()]


_NEGATIVE_FRACTION = re.compile(r"^-\d+(\.\d*)?/\d+$")


def _attach_negative_fractions(argv: list[str]) -> list[str]:
    """Rewrite ``--flag -1/2`` as ``--flag=-1/2``; argparse reads ``-1/2`` as an option."""
    out: list[str] = []
    for tok in argv:
        if out and _NEGATIVE_FRACTION.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


class _Formatter(argparse.ArgumentDefaultsHelpFormatter):
    """Show defaults, except for optional flags whose absence has a documented meaning."""

    def _get_help_string(self, action):
        if action.default is None:
            return action.help
        return super()._get_help_string(action)


def _formatter(prog):
    return _Formatter(prog, width=HELP_WIDTH)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_family(p: argparse.ArgumentParser, families=FAMILIES, default="grover"):
    p.add_argument("--family", choices=families, default=default, help="Hamiltonian family")
    p.add_argument("--n", type=int, default=64, help="Grover dimension N (power of two); gap 2/sqrt(N)")
    p.add_argument("--t", type=int, default=0, help="marked item index for Grover families")
    p.add_argument("--nu", type=real, default=1.0, help="quintic family: shift x0 = delta^nu (dimensionless)")
    p.add_argument("--x0", type=real, default=0.25, help="shifted_grover: ground energy placed at -1/2 + x0")
    p.add_argument("--L", type=int, default=8, help="defect_chain: number of sites")
    p.add_argument("--v", type=real, default=0.5, help="defect_chain: transverse-field strength (units of the bond)")
    p.add_argument("--defects", type=int, default=1, help="defect_chain: number of defect sites")
    p.add_argument(
        "--compress-to",
        type=real,
        default=None,
        help="defect_chain: rescale toward -1 so the gap equals this value (normalised units); omitted: no rescaling",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="nffprep",
        description="Polynomial spectral filters for ground- and excited-state preparation.",
        epilog="Exit status: 0 success, 1 domain error, 2 usage error. NFF_THREADS caps sweep parallelism.",
        formatter_class=_formatter,
    )
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    f = sub.add_parser("filter", help="build a step or band-pass filter and report its certificate", formatter_class=_formatter)
    f.add_argument("--epsilon", type=real, default=1e-3, help="target uniform error on [-1, 1]")
    f.add_argument("--delta", type=real, required=True, help="transition width (band half-width for bandpass)")
    f.add_argument("--eta", type=real, default=0.0, help="step position or band centre in [-1, 1]")
    f.add_argument("--kind", choices=("step", "bandpass"), default="step", help="filter shape")
    f.add_argument("--odd", action="store_true", help="report the odd part (p(x) - p(-x))/2")
    f.add_argument("--measure", action="store_true", help="also measure the dense-grid error")
    f.add_argument("--coefficients", action="store_true", help="include the Chebyshev coefficients")

    p = sub.add_parser("prepare", help="two-stage ground-state preparation", formatter_class=_formatter)
    _add_family(p)
    p.add_argument("--epsilon", type=real, default=1e-3, help="target infidelity")
    p.add_argument("--route", choices=ROUTES, default="eigh", help="matrix-function evaluation route")

    e = sub.add_parser("prepare-excited", help="band-pass excited-state preparation", formatter_class=_formatter)
    _add_family(e)
    e.add_argument("--level", type=int, default=1, help="target eigenvalue index when --eta is omitted")
    e.add_argument("--eta", type=real, default=None, help="band centre; omitted: the eigenvalue at --level")
    e.add_argument(
        "--delta1", type=real, default=None, help="isolation width; omitted: distance to the nearest other eigenvalue"
    )
    e.add_argument(
        "--ansatz", choices=("family", "uniform", "random"), default="uniform", help="starting state"
    )
    e.add_argument("--seed", type=int, default=0, help="seed for --ansatz random")
    e.add_argument("--epsilon", type=real, default=1e-3, help="target infidelity")
    e.add_argument("--route", choices=ROUTES, default="eigh", help="matrix-function evaluation route")

    s = sub.add_parser("sweep", help="log-log scaling sweep over a delta grid", formatter_class=_formatter)
    s.add_argument("--family", choices=FAMILIES, required=True, help="Hamiltonian family")
    s.add_argument("--deltas", type=real_list, required=True, help="comma-separated, strictly decreasing gaps in (0, 1/4)")
    s.add_argument("--nu", type=real, default=None, help="quintic family: shift x0 = delta^nu (required for quintic)")
    s.add_argument("--x0", type=real, default=0.25, help="shifted_grover: ground energy at -1/2 + x0")
    s.add_argument("--y", type=real, default=None, help="expected exponent y; omitted: the family's value")
    s.add_argument("--epsilon", type=real, default=1e-3, help="target infidelity")
    s.add_argument("--seed", type=int, default=0, help="seed for ansatz perturbations")
    s.add_argument("--noise", type=real, default=0.0, help="ansatz perturbation amplitude")
    s.add_argument("--quantity", choices=("queries", "degree"), default="queries", help="quantity fitted against delta")
    s.add_argument("--out", default=None, help="CSV path; the JSON summary goes next to it with suffix .json; omitted: no files")
    s.add_argument("--csv", action="store_true", help="print per-point rows as CSV instead of the JSON summary")

    o = sub.add_parser("optimality", help="spectrum of quintic-mapped Grover instances", formatter_class=_formatter)
    o.add_argument("--deltas", type=real_list, default=real_list("1/16,1/32,1/64,1/128,1/256"), help="Grover gaps")
    o.add_argument("--nu", type=real, default=1.0, help="shift x0 = delta^nu")
    o.add_argument("--csv", action="store_true", help="print the table as CSV")

    v = sub.add_parser("validate-encoding", help="build an LCU block encoding and check its corner", formatter_class=_formatter)
    v.add_argument("--family", choices=("grover", "shifted_grover", "defect_chain"), default="grover", help="operator")
    v.add_argument("--n", type=int, default=16, help="Grover dimension N")
    v.add_argument("--t", type=int, default=0, help="marked item index")
    v.add_argument("--x0", type=real, default=0.25, help="shifted_grover: ground energy at -1/2 + x0")
    v.add_argument("--L", type=int, default=4, help="defect_chain: number of sites")
    v.add_argument("--v", type=real, default=0.5, help="defect_chain: defect strength")
    v.add_argument("--defects", type=int, default=1, help="defect_chain: number of defects")
    v.add_argument("--tolerance", type=real, default=1e-9, help="maximum accepted corner deviation")
    return parser


def build_problem(args):
    fam = args.family
    if fam == "defect_chain":
        prob = defect_lattice(args.L, args.v, args.defects)
        if args.compress_to is not None:
            prob = compress_to_gap(prob, args.compress_to)
        return prob
    base = grover_hamiltonian(args.n, args.t)
    if fam == "grover":
        return base
    if fam == "shifted_grover":
        return shift_and_scale(base, args.x0)
    x0 = grover_gap(args.n) ** args.nu
    return quintic_map_problem(shift_and_scale(base, x0), x0)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def emit(obj, out) -> None:
    out.write(json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n")


def cmd_filter(args, out):
    if args.kind == "step":
        flt = make_step_filter(args.epsilon, args.delta, args.eta)
    else:
        flt = make_bandpass_filter(args.epsilon, args.delta, args.eta)
    if args.odd:
        flt = odd_part(flt)
    result = {
        "kind": flt.kind,
        "epsilon": flt.epsilon,
        "delta": flt.delta,
        "eta": flt.eta,
        "degree": flt.degree,
        "k": flt.k,
        "certified_error": flt.certified_error,
        "rescale": flt.rescale,
    }
    if args.measure:
        result["dense_error"] = dense_error(flt)
    if args.coefficients:
        result["coefficients"] = flt.series.coefficients
    emit(result, out)


def _problem_summary(prob):
    return {"dim": prob.dim, "mu": prob.mu, "delta": prob.delta, "y": prob.y, "alpha": prob.alpha}


def cmd_prepare(args, out):
    prob = build_problem(args)
    report = prepare_ground_state(prob, epsilon=args.epsilon, route=args.route)
    emit(dict(report.as_dict(), problem=_problem_summary(prob)), out)


def cmd_prepare_excited(args, out):
    prob = build_problem(args)
    w = prob.spectrum
    if args.eta is None:
        if not 0 <= args.level < len(w):
            raise UsageError(f"--level must lie in [0, {len(w) - 1}]")
        eta = float(w[args.level])
    else:
        eta = args.eta
    delta1 = args.delta1
    if delta1 is None:
        dist = np.abs(w - eta)
        others = dist[dist > 1e-12]
        delta1 = float(np.min(others))
    if args.ansatz == "uniform":
        ansatz = np.full(prob.dim, 1 / math.sqrt(prob.dim))
    elif args.ansatz == "random":
        ansatz = np.random.default_rng(args.seed).standard_normal(prob.dim)
    else:
        ansatz = None
    report = prepare_excited_state(prob, eta, delta1, ansatz=ansatz, epsilon=args.epsilon, route=args.route)
    emit(dict(report.as_dict(), problem=_problem_summary(prob)), out)


def cmd_sweep(args, out):
    config = SweepConfig(
        family=args.family,
        delta_grid=args.deltas,
        y=args.y,
        epsilon=args.epsilon,
        seed=args.seed,
        output_path=args.out,
        nu=args.nu,
        x0=args.x0,
        ansatz_noise=args.noise,
    )
    fit, rows, info = sweep_details(config, args.quantity)
    if args.csv:
        out.write(table_csv(rows, CSV_COLUMNS))
    else:
        emit(info, out)
    print(f"slope {fit.slope:.4f} (expected {config.expected_slope:.4f})", file=sys.stderr)


def cmd_optimality(args, out):
    rows = optimality_gap_table(args.deltas, args.nu)
    if args.csv:
        out.write(table_csv(rows))
    else:
        emit({"nu": args.nu, "rows": rows}, out)


def cmd_validate_encoding(args, out):
    if args.family == "grover":
        terms = grover_terms(args.n, args.t)
        h = grover_hamiltonian(args.n, args.t, reduced=False).operator.matrix
    elif args.family == "shifted_grover":
        terms = shifted_grover_terms(args.n, args.t, args.x0)
        h = shift_and_scale(grover_hamiltonian(args.n, args.t, reduced=False), args.x0).operator.matrix
    else:
        terms = defect_terms(args.L, args.v, args.defects)
        chain = defect_lattice(args.L, args.v, args.defects)
        h = chain.operator.matrix * chain.alpha
    # h is built independently of the LCU terms and carries the physical scale
    be = lcu_encode(terms)
    dev = validate(be, h)
    emit(
        {
            "family": args.family,
            "alpha": be.alpha,
            "m": be.m,
            "system_dim": be.system_dim,
            "encode_error": be.encode_error,
            "deviation": dev,
            "tolerance": args.tolerance,
            "passed": dev <= args.tolerance,
        },
        out,
    )
    return 0 if dev <= args.tolerance else 1


COMMANDS = {
    "filter": cmd_filter,
    "prepare": cmd_prepare,
    "prepare-excited": cmd_prepare_excited,
    "sweep": cmd_sweep,
    "optimality": cmd_optimality,
    "validate-encoding": cmd_validate_encoding,
}


def run(argv=None, out=None) -> int:
    """Parse ``argv`` and dispatch; returns the exit status."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        argv = sys.argv[1:] if argv is None else list(argv)
        # --help prints through sys.stdout; send it where results go
        with contextlib.redirect_stdout(out):
            args = parser.parse_args(_attach_negative_fractions(argv))
        status = COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (NFFError, OSError) as exc:
        print(f"nffprep: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return 0 if status is None else status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
