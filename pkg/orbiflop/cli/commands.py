"""
Command-line front end.

Every subcommand builds a RunReport, prints it to stdout as JSON (default)
or a table, and returns an exit code: 0 when all checks pass, 1 when a
verification fails, 2 on usage or configuration errors.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple, Type, TypeVar

from pydantic import BaseModel, ValidationError

from ..algebra.rationals import format_rational
from ..config import Settings, get_settings
from ..core.charts import assemble_chart_rings
from ..core.flop import associativity_report, local_flop_check, verify_ruan_isomorphism
from ..core.geometry import certify, dump_samples, sample_Qr
from ..core.local_model import (
    CRClass,
    cr_basis,
    gw_invariant,
    product_table,
    quantum_three_point,
    valid_weights,
    validate_model,
)
from ..core.resolution import SignPattern, resolve, sampling_oracle
from ..models.enums import CheckStatus, Command, OutputFormat, Side
from ..models.schemas import ConifoldConfig, RunReport, RuanVerifyConfig, SampleConfig
from ..utils.errors import ConfigError, OrbiflopError
from .reports import inputs_digest, render_json, render_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

ModelT = TypeVar("ModelT", bound=BaseModel)
Outcome = Tuple[bool, Dict[str, Any], Dict[str, Any]]


def load_config(path: str, model: Type[ModelT] = ConifoldConfig) -> ModelT:
    """Read and validate a JSON config document.

    Args:
        path: File to read.
        model: Pydantic model the document must satisfy.

    Returns:
        The validated model.

    Raises:
        ConfigError: If the file is unreadable, not JSON, or violates the schema.
            The message names the offending field, e.g. ``singularities.1``.
    """
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}", field="config")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON in {path}: {e}", field="config")
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or model.__name__
        raise ConfigError(f"{location}: {first['msg']}", field=location)


def _default_a(r: int) -> int:
    return 1 if r > 1 else 0


# ----------------------------------------------------------------------
# Subcommand handlers: each returns (passed, results, provenance)
# ----------------------------------------------------------------------


def _run_ring(args: argparse.Namespace, settings: Settings) -> Outcome:
    model = validate_model(args.r, args.a if args.a is not None else _default_a(args.r), Side(args.side))
    table = product_table(model)
    products = {
        f"{x}*{y}": ("undefined" if value is None else str(value))
        for (x, y), value in table.items()
    }
    results = {
        "r": model.r,
        "a": model.a,
        "side": model.side.value,
        "basis": [{"label": label, "degree": format_rational(deg)} for label, deg in cr_basis(model)],
        "products": products,
    }
    return True, results, {}


def _run_gw(args: argparse.Namespace, settings: Settings) -> Outcome:
    model = validate_model(args.r, args.a if args.a is not None else _default_a(args.r))
    value = gw_invariant(model, args.d)
    return True, {"r": model.r, "d": args.d, "gw": format_rational(value)}, {}


def _run_threepoint(args: argparse.Namespace, settings: Settings) -> Outcome:
    model = validate_model(args.r, args.a if args.a is not None else _default_a(args.r), Side(args.side))
    classes = [CRClass.basis_element(model.r, label) for label in args.inputs]
    value = quantum_three_point(model, *classes)
    series = value.quantum.series(args.order if args.order is not None else settings.series_order)
    results = {"inputs": list(args.inputs), "value": value.to_json(), "series": [format_rational(c) for c in series]}
    return True, results, {}


def _run_flop_check(args: argparse.Namespace, settings: Settings) -> Outcome:
    weights = [args.a] if args.a is not None else valid_weights(args.r)
    reports = [local_flop_check(args.r, a) for a in weights]
    passed = all(report.passed for report in reports)
    results = {
        "r": args.r,
        "weights": weights,
        "triples_checked": sum(len(report.triples) for report in reports),
        "failures": [t.model_dump() for report in reports for t in report.failures],
    }
    if args.verbose_triples:
        results["triples"] = [t.model_dump() for report in reports for t in report.triples]
    return passed, results, {}


def _run_resolve(args: argparse.Namespace, settings: Settings) -> Outcome:
    config = load_config(args.config, ConifoldConfig)
    cap = args.max_kappa if args.max_kappa is not None else settings.max_kappa
    report = resolve(config, max_kappa=cap)

    seed = args.seed if args.seed is not None else settings.default_seed
    trials = args.count if args.count is not None else settings.oracle_trials
    oracle = sampling_oracle(config.theta_matrix(), trials, seed)
    feasible = {SignPattern(tuple(v.signs)) for v in report.feasible}
    sound = oracle <= feasible
    results = {
        "config": config.model_dump(),
        "resolution": report.model_dump(),
        "oracle_patterns": sorted([list(p.signs) for p in oracle], reverse=True),
        "oracle_consistent": sound,
    }
    return sound, results, {"seed": seed, "trials": trials, "max_kappa": cap}


def _run_ruan_verify(args: argparse.Namespace, settings: Settings) -> Outcome:
    config = load_config(args.config, RuanVerifyConfig)
    if config.charts is not None:
        ring_x, ring_y, corr = assemble_chart_rings([(c.r, c.a) for c in config.charts], seed=config.seed)
    else:
        ring_x, ring_y, corr = config.ring_x, config.ring_y, config.correspondence
    report = verify_ruan_isomorphism(ring_x, ring_y, corr)
    results: Dict[str, Any] = {"isomorphism": report.model_dump()}
    if report.pairing_compatible:
        assoc = associativity_report(ring_x)
        results["associativity"] = {
            "points": assoc.points,
            "checked": assoc.checked,
            "failures": len(assoc.failures),
            "informational": True,
        }
    return report.passed, results, {"seed": config.seed}


def _run_verify_geometry(args: argparse.Namespace, settings: Settings) -> Outcome:
    cfg = SampleConfig.from_settings(settings, seed=args.seed, count=args.count, tol_eq=args.tol)
    report = certify(args.r, cfg, args.a)
    if args.dump:
        dump_samples(sample_Qr(args.r, cfg), Path(args.dump))
        logger.info(f"Wrote {cfg.count} samples to {args.dump}")
    results = {
        "checks": [c.model_dump() for c in report.checks],
        "closed_form_max_gap": report.closed_form_max_gap.model_dump(),
        "monomial_invariant": report.monomial_invariant,
    }
    provenance = cfg.model_dump()
    provenance["a"] = report.a
    return report.passed, results, provenance


HANDLERS: Dict[Command, Callable[[argparse.Namespace, Settings], Outcome]] = {
    Command.RING: _run_ring,
    Command.GW: _run_gw,
    Command.THREEPOINT: _run_threepoint,
    Command.FLOP_CHECK: _run_flop_check,
    Command.RESOLVE: _run_resolve,
    Command.RUAN_VERIFY: _run_ruan_verify,
    Command.VERIFY_GEOMETRY: _run_verify_geometry,
}


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output_format", action="store_const", const=OutputFormat.JSON.value)
    fmt.add_argument("--table", dest="output_format", action="store_const", const=OutputFormat.TABLE.value)
    common.set_defaults(output_format=OutputFormat.JSON.value)

    model_args = argparse.ArgumentParser(add_help=False)
    model_args.add_argument("--r", type=int, required=True, help="Order of the cyclic group")
    model_args.add_argument("--a", type=int, default=None, help="Action weight (default 1, or 0 when r = 1)")

    side_arg = argparse.ArgumentParser(add_help=False)
    side_arg.add_argument("--side", choices=[s.value for s in Side], default=Side.S.value)

    parser = argparse.ArgumentParser(prog="orbiflop", description="Orbi-conifold flop and resolution toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(Command.RING.value, parents=[common, model_args, side_arg], help="Chen-Ruan product table")

    gw = sub.add_parser(Command.GW.value, parents=[common, model_args], help="Genus-zero invariant of d[Gamma]")
    gw.add_argument("--d", type=int, required=True, help="Curve degree")

    tp = sub.add_parser(
        Command.THREEPOINT.value, parents=[common, model_args, side_arg], help="Local three-point function"
    )
    tp.add_argument("--inputs", nargs=3, required=True, metavar="LABEL", help="Three basis labels, e.g. H H H")
    tp.add_argument("--order", type=int, default=None, help="Series truncation order")

    fc = sub.add_parser(Command.FLOP_CHECK.value, parents=[common, model_args], help="Local flop identity")
    fc.add_argument("--verbose-triples", action="store_true", help="Include every triple in the report")

    rs = sub.add_parser(Command.RESOLVE.value, parents=[common], help="Symplectic small resolutions")
    rs.add_argument("--config", required=True, help="ConifoldConfig JSON")
    rs.add_argument("--max-kappa", type=int, default=None, help="Enumeration cap")
    rs.add_argument("--seed", type=int, default=None, help="Sampling oracle seed")
    rs.add_argument("--count", type=int, default=None, help="Sampling oracle trials")

    rv = sub.add_parser(Command.RUAN_VERIFY.value, parents=[common], help="Ruan ring isomorphism check")
    rv.add_argument("--config", required=True, help="Ring pair or chart list JSON")

    vg = sub.add_parser(Command.VERIFY_GEOMETRY.value, parents=[common, model_args], help="Numeric certification")
    vg.add_argument("--seed", type=int, default=None)
    vg.add_argument("--count", type=int, default=None)
    vg.add_argument("--tol", type=float, default=None, help="Equation residual tolerance")
    vg.add_argument("--dump", default=None, help="Write sampled points as CSV")

    return parser


def _echo(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if v is not None and k != "output_format"}


def dispatch(argv: Sequence[str], out: Optional[TextIO] = None) -> Tuple[int, Optional[RunReport]]:
    """Parse argv, run one subcommand and print its report.

    Returns:
        (exit code, report); the report is None on usage errors.
    """
    stream = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return (e.code if isinstance(e.code, int) else EXIT_USAGE), None

    settings = get_settings()
    command = Command(args.command)
    digest_inputs: Dict[str, Any] = {"args": _echo(args)}
    config_path = getattr(args, "config", None)
    if config_path and Path(config_path).is_file():
        digest_inputs["config"] = Path(config_path).read_text(encoding="utf-8")

    try:
        passed, results, provenance = HANDLERS[command](args, settings)
    except (OrbiflopError, ValueError) as e:
        message = e.message if isinstance(e, OrbiflopError) else str(e)
        field = e.field if isinstance(e, OrbiflopError) else None
        logger.error(f"{command.value} failed: {message}")
        print(json.dumps({"error": message, "field": field}, sort_keys=True), file=sys.stderr)
        return EXIT_USAGE, None

    provenance = {"version": settings.app_version, **provenance}
    report = RunReport(
        command=[str(a) for a in argv],
        inputs_digest=inputs_digest(digest_inputs),
        status=CheckStatus.PASSED if passed else CheckStatus.FAILED,
        results=results,
        provenance=provenance,
    )
    render = render_table if args.output_format == OutputFormat.TABLE.value else render_json
    print(render(report), file=stream)
    return (EXIT_OK if passed else EXIT_FAILED), report


def run(argv: Optional[List[str]] = None) -> int:
    code, _ = dispatch(sys.argv[1:] if argv is None else argv)
    return code
