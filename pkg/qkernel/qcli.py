"""
Command-line entry point: python -m qkernel <command>.

Commands:
- verify <id>     run one catalog identity
- verify-all      run the whole catalog (or an --only selection)
- eval <target>   evaluate a polynomial, a phi-series or a generating-function right member
- expand <grid>   expand a Taylor grid file in a family basis

Reports are JSON Lines; a summary object ends the stdout stream. Exit codes:
0 success, 1 failed check or evaluation error, 2 unknown identity,
3 malformed config or grid file.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, List, Optional

from qkernel.catalog import IDENTITIES, UnknownIdentity, run_identities, select, summarize, unexpected_failures
from qkernel.config import ConfigError, RunConfig, load_environment, load_run_config, parse_q, truncation_from_env
from qkernel.qcore import HyperSeries, Mode, QContext, QSeriesError, phi_series
from qkernel.qexpand import GridFormatError, TaylorGrid, expand
from qkernel.qgen import GenFunKind, GenFunParams, genfun_rhs
from qkernel.qpoly import Family, FamilyParams, coefficient_table, evaluate
from utils.logger import ReportWriter, dump_json, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_UNKNOWN_IDENTITY = 2
EXIT_BAD_INPUT = 3


def _render(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    return value


def _add_logging_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Log level (default: WARNING)')
    parser.add_argument('--log-json', action='store_true', help='Emit logs as JSON on stderr')


def _add_context_flags(parser: argparse.ArgumentParser, default_mode: Optional[str]) -> None:
    parser.add_argument('--q', default=None, help='Base q in (0, 1), e.g. 1/2 or 0.5')
    parser.add_argument('--mode', choices=[m.value for m in Mode], default=default_mode,
                        help='Arithmetic backend')


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    _add_context_flags(parser, None)
    parser.add_argument('--seed', type=int, default=None, help='Sampling seed')
    parser.add_argument('--samples', type=int, default=None, help='Samples per identity')
    parser.add_argument('--tol', type=float, default=None, help='Threshold for every check')
    parser.add_argument('--out', default=None, help='Write reports to this JSON Lines file')
    parser.add_argument('--config', default=None, help='JSON run config')
    parser.add_argument('--only', action='append', default=None, metavar='PATTERN',
                        help='Restrict to identity ids matching this fnmatch pattern (repeatable)')
    parser.add_argument('--jobs', type=int, default=None, help='Worker threads')
    parser.add_argument('--progress', action='store_true', help='Progress bar on stderr')
    parser.add_argument('--timing', action='store_true', help='Record wall_time_ms in reports')
    _add_logging_flags(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qkernel',
        description='q-series and bivariate q-polynomial verification harness',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s verify pde.laguerre --mode exact
  %(prog)s verify-all --only 'gf.*' --jobs 4
  %(prog)s eval poly --family jacobi --n 2 --alpha 3 --beta 5 --q 1/2
  %(prog)s eval phi --upper 1/4 --z 1/3 --q 1/2 --mode float
  %(prog)s expand grid.json --family laguerre --alpha 1
        """,
    )
    sub = parser.add_subparsers(dest='command', required=True)

    verify = sub.add_parser('verify', help='Run one identity')
    verify.add_argument('identity_id', help=f"One of: {', '.join(IDENTITIES)}")
    _add_run_flags(verify)

    verify_all = sub.add_parser('verify-all', help='Run the identity catalog')
    _add_run_flags(verify_all)

    ev = sub.add_parser('eval', help='Evaluate a polynomial, phi-series or generating function')
    ev_sub = ev.add_subparsers(dest='target', required=True)

    poly = ev_sub.add_parser('poly', help='Bivariate polynomial coefficients and value')
    poly.add_argument('--family', choices=[f.value for f in Family], required=True)
    poly.add_argument('--n', type=int, required=True)
    poly.add_argument('--alpha', default=None)
    poly.add_argument('--beta', default=None)
    poly.add_argument('--x', default=None)
    poly.add_argument('--y', default=None)
    _add_context_flags(poly, 'exact')
    _add_logging_flags(poly)

    phi = ev_sub.add_parser('phi', help='Basic hypergeometric series')
    phi.add_argument('--upper', nargs='*', default=[])
    phi.add_argument('--lower', nargs='*', default=[])
    phi.add_argument('--z', required=True)
    phi.add_argument('--n-max', type=int, default=None)
    _add_context_flags(phi, 'float')
    _add_logging_flags(phi)

    gf = ev_sub.add_parser('genfun_rhs', help='Right member of a generating function')
    gf.add_argument('--kind', choices=[k.value for k in GenFunKind], required=True)
    defaults = GenFunParams()
    for name, value in defaults.as_dict().items():
        gf.add_argument(f'--{name}', type=float, default=value)
    gf.add_argument('--n-max', type=int, default=None)
    _add_context_flags(gf, 'float')
    _add_logging_flags(gf)

    ex = sub.add_parser('expand', help='Expand a Taylor grid JSON file in a family basis')
    ex.add_argument('grid', help='Grid JSON: {"rows", "cols", "entries"}')
    ex.add_argument('--family', choices=[f.value for f in Family], required=True)
    ex.add_argument('--alpha', default=None)
    ex.add_argument('--beta', default=None)
    ex.add_argument('--tol', default=None)
    _add_context_flags(ex, 'exact')
    _add_logging_flags(ex)
    return parser


def _context(args: argparse.Namespace) -> QContext:
    load_environment()
    trunc = truncation_from_env()
    q = parse_q(args.q) if args.q is not None else Fraction(1, 2)
    if args.mode == Mode.EXACT.value:
        return QContext.exact(q, trunc)
    return QContext.floating(q, trunc)


def _family(args: argparse.Namespace) -> FamilyParams:
    family = Family(args.family)
    if family is Family.Q_LAGUERRE:
        return FamilyParams.laguerre(args.alpha)
    if family is Family.LITTLE_Q_LEGENDRE:
        return FamilyParams.legendre()
    if family is Family.LITTLE_Q_LAGUERRE:
        return FamilyParams.wall(args.alpha)
    return FamilyParams.jacobi(args.alpha, args.beta)


def _run_config(args: argparse.Namespace) -> RunConfig:
    load_environment()
    config = load_run_config(args.config)
    return config.with_overrides(
        q=parse_q(args.q) if args.q is not None else None,
        mode=Mode(args.mode) if args.mode else None,
        seed=args.seed,
        samples=args.samples,
        tol_override=args.tol,
        out=args.out,
        only=args.only,
        jobs=args.jobs,
        progress=True if args.progress else None,
        record_timing=True if args.timing else None,
    )


def cmd_verify(args: argparse.Namespace) -> int:
    config = _run_config(args)
    try:
        chosen = select(config, [args.identity_id])
    except UnknownIdentity:
        logger.error(f"Unknown identity: {args.identity_id}")
        print(f"unknown identity {args.identity_id!r}; known: {', '.join(IDENTITIES)}", file=sys.stderr)
        return EXIT_UNKNOWN_IDENTITY
    return _verify(chosen, config)


def cmd_verify_all(args: argparse.Namespace) -> int:
    config = _run_config(args)
    return _verify(select(config), config)


def _verify(chosen: List[str], config: RunConfig) -> int:
    logger.info(f"Verifying {len(chosen)} identities at q={config.q} with seed {config.seed}")
    results = run_identities(chosen, config)
    with ReportWriter(config.out) as writer:
        for reports in results.values():
            writer.write_all(r.to_dict() for r in reports)
    summary = summarize(results, config)
    dump_json(summary)

    failed = unexpected_failures(summary)
    if failed:
        logger.error(f"Failed identities: {', '.join(failed)}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    ctx = _context(args)
    if args.target == 'poly':
        family = _family(args)
        p = family.basis(args.n, ctx)
        payload = {"family": family.family.value, "n": args.n, "coeffs": coefficient_table([p])[0]}
        if args.x is not None and args.y is not None:
            payload["value"] = _render(evaluate(p, ctx.scalar(args.x), ctx.scalar(args.y)))
    elif args.target == 'phi':
        spec = HyperSeries(tuple(args.upper), tuple(args.lower), args.z)
        result = phi_series(spec, ctx, args.n_max)
        payload = {
            "value": _render(result.value),
            "error": result.error,
            "terms": result.terms,
            "terminated": result.terminated,
        }
    else:
        kind = GenFunKind(args.kind)
        params = GenFunParams(**{name: getattr(args, name) for name in GenFunParams().as_dict()})
        result = genfun_rhs(kind, params, ctx, args.n_max)
        payload = {"kind": kind.value, "value": result.value, "error": result.error, "terms": result.terms}
    dump_json(payload)
    return EXIT_OK


def cmd_expand(args: argparse.Namespace) -> int:
    ctx = _context(args)
    try:
        with open(args.grid, 'r', encoding='utf-8') as f:
            payload = json.load(f)
    except OSError as e:
        raise GridFormatError(f"cannot read {args.grid}: {e}") from e
    except json.JSONDecodeError as e:
        raise GridFormatError(f"{args.grid} is not valid JSON: {e}") from e
    grid = TaylorGrid.from_json(payload, ctx)
    result = expand(grid, _family(args), ctx, args.tol)
    dump_json({
        "coeffs": [_render(c) for c in result.coeffs],
        "admissible": result.admissible,
        "max_violation": float(result.max_violation),
        "violation_at": list(result.violation_at) if result.violation_at else None,
    })
    return EXIT_OK


COMMANDS = {
    'verify': cmd_verify,
    'verify-all': cmd_verify_all,
    'eval': cmd_eval,
    'expand': cmd_expand,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_json)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, GridFormatError) as e:
        logger.error(f"Bad input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except QSeriesError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
