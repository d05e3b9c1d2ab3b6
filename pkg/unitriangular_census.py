"""Command-line tool for conjugacy-class censuses of unitriangular groups.

Subcommands:

    census         k(U_n(q)) with the per-Jordan-type strata
    jordanize      the canonical conjugation trace of a matrix file
    lcs-verify     both sides of the block decomposition of cp(U_{a+b,k})
    lcs-cp         cp(U_{n,k}(q)) as an exact fraction
    bounds-verify  the exact inequality and constant checks
    interpolate    the polynomial through k(U_n(q)) for several q
    verify-all     the acceptance suite

JSON results go to stdout or to --out; logs go to stderr. Exit codes are 0
when every requested check passes, 1 on a verification failure, 2 on a
usage error and 3 when an enumeration is refused by the budget.
"""

import argparse
import os
import sys

from acceptance import AcceptanceContext, verify_all
from bounds import run_bounds_verification
from census import check_interpolation_size, class_count, interpolate_class_polynomial, run_census
from config import BudgetExceededError, RunConfig, get_run_config
from constants import (
    DEFAULT_FIXTURES_FILE,
    EXIT_BUDGET_REFUSED,
    EXIT_PASS,
    EXIT_USAGE_ERROR,
    EXIT_VERIFICATION_FAILURE,
    SCHEMA_VERSION,
)
from field import field_for_order
from jordan import canonical_conjugator, conjugate_level, shape
from json_writer import write_csv, write_json
from lcs import LcsParams, cp_direct, verify_lcs_identity
from logging_config import get_logger, setup_logging
from markdown_writer import write_to_markdown
from matrix import read_matrix_file, restrict

USAGE_HINT = "run 'python unitriangular_census.py <command> --help' for usage"


def build_parser() -> argparse.ArgumentParser:
    """The argparse parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="unitriangular_census",
        description="Exact conjugacy-class censuses of unitriangular groups over finite fields.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, help="worker processes (env CENSUS_WORKERS)")
    common.add_argument("--budget", type=int, help="largest enumeration run without override")
    common.add_argument("--override-budget", action="store_true", dest="override_budget")
    common.add_argument("--seed", type=int, help="seed for sampled checks (env RANDOM_SEED)")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--out", help="write the JSON result here instead of stdout")

    sub = parser.add_subparsers(dest="command", required=True)

    census = sub.add_parser("census", parents=[common], help="class count and Jordan-type strata")
    census.add_argument("--n", type=int, required=True)
    census.add_argument("--q", required=True, help="field order, e.g. 2 or q=4")
    census.add_argument("--pairs", action="store_true", help="also count comm(lambda, mu)")
    census.add_argument("--csv", help="write the per-shape table as CSV")

    jordanize = sub.add_parser("jordanize", parents=[common], help="canonical conjugation trace")
    jordanize.add_argument("--matrix", required=True, help="matrix file ('n m q=<q>' header)")
    jordanize.add_argument(
        "--level-only",
        action="store_true",
        dest="level_only",
        help="run one level on a matrix whose leading block is already a Jordan matrix",
    )

    lcs_verify = sub.add_parser("lcs-verify", parents=[common], help="block decomposition of cp")
    lcs_verify.add_argument("--a", type=int, required=True)
    lcs_verify.add_argument("--b", type=int, required=True)
    lcs_verify.add_argument("--k", type=int, required=True)
    lcs_verify.add_argument("--q", required=True)

    lcs_cp = sub.add_parser("lcs-cp", parents=[common], help="commuting probability of U_{n,k}")
    lcs_cp.add_argument("--n", type=int, required=True)
    lcs_cp.add_argument("--k", type=int, required=True)
    lcs_cp.add_argument("--q", required=True)

    bounds = sub.add_parser("bounds-verify", parents=[common], help="exact inequality checks")
    bounds.add_argument("--nmax", type=int, help="largest n for the partition sweeps")

    interpolate = sub.add_parser(
        "interpolate", parents=[common], help="class polynomial in q (degree certified for n = 2..4)"
    )
    interpolate.add_argument("--n", type=int, required=True, help="matrix size, 2 to 4")
    interpolate.add_argument("--q", required=True, help="distinct field orders, e.g. 2,3,4,5")

    verify = sub.add_parser("verify-all", parents=[common], help="the acceptance suite")
    verify.add_argument("--profile", choices=("quick", "full"), default="quick")
    verify.add_argument("--markdown", help="also write a Markdown summary")
    verify.add_argument("--fixtures", help="regression fixture file")
    return parser


def _single_field(config: RunConfig):
    if len(config.q_list) != 1:
        raise ValueError(f"--q: {config.command} takes a single field order (got {config.q_list})")
    return field_for_order(config.q_list[0])


def _budget_kwargs(config: RunConfig) -> dict:
    return {"budget": config.budget, "override": config.override_budget}


def run_census_command(config: RunConfig) -> bool:
    record = run_census(
        config.n,
        _single_field(config),
        pairs=config.pairs,
        workers=config.workers,
        **_budget_kwargs(config),
    )
    write_json(record.to_json(), config.output_path)
    if config.csv_path:
        write_csv(config.csv_path, record.csv_rows())
    return record.passed


def run_jordanize_command(config: RunConfig) -> bool:
    a = read_matrix_file(config.matrix_path)
    if config.level_only:
        mu = shape(restrict(a, a.rows - 1))
        trace = conjugate_level(a, mu)
        payload = {"schema": SCHEMA_VERSION, "q": a.spec.q, "shape": str(trace.result_shape)}
        payload["levels"] = [trace.to_json()]
    else:
        x, traces = canonical_conjugator(a)
        lam = traces[-1].result_shape if traces else shape(a)
        payload = {
            "schema": SCHEMA_VERSION,
            "q": a.spec.q,
            "shape": str(lam),
            "conjugator": x.entries.tolist(),
            "levels": [trace.to_json() for trace in traces],
        }
    write_json(payload, config.output_path)
    return True


def run_lcs_verify_command(config: RunConfig) -> bool:
    report = verify_lcs_identity(
        config.a, config.b, config.k, _single_field(config), workers=config.workers, **_budget_kwargs(config)
    )
    write_json(report.to_json(), config.output_path)
    return report.passed


def run_lcs_cp_command(config: RunConfig) -> bool:
    params = LcsParams(config.n, config.k, _single_field(config))
    value = cp_direct(params, **_budget_kwargs(config))
    payload = {
        "schema": SCHEMA_VERSION,
        "n": params.n,
        "k": params.k,
        "q": params.spec.q,
        "dim": params.dim,
        "abelian": params.is_abelian,
        "cp": str(value),
    }
    write_json(payload, config.output_path)
    return True


def run_bounds_command(config: RunConfig) -> bool:
    kwargs = {"seed": config.seed}
    if config.n_max is not None:
        kwargs["h_n_max"] = config.n_max
    reports = run_bounds_verification(**kwargs)
    passed = all(report.passed for report in reports)
    payload = {
        "schema": SCHEMA_VERSION,
        "passed": passed,
        "checks": [report.to_json() for report in reports],
    }
    write_json(payload, config.output_path)
    return passed


def run_interpolate_command(config: RunConfig) -> bool:
    check_interpolation_size(config.n)
    counts = [
        class_count(config.n, field_for_order(q), workers=config.workers, **_budget_kwargs(config)).class_count
        for q in config.q_list
    ]
    polynomial = interpolate_class_polynomial(config.n, config.q_list, counts)
    write_json(polynomial.to_json(), config.output_path)
    return polynomial.passed


def default_fixtures_path() -> str:
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), DEFAULT_FIXTURES_FILE)


def run_verify_all_command(config: RunConfig) -> bool:
    ctx = AcceptanceContext(
        profile=config.profile,
        fixtures_path=config.fixtures_path or default_fixtures_path(),
        workers=config.workers,
        seed=config.seed,
        budget=config.budget,
        override=config.override_budget,
    )
    report = verify_all(ctx)
    write_json(report.to_json(), config.output_path)
    if config.markdown_path:
        write_to_markdown(report, config.markdown_path)
    for failure in report.failures:
        get_logger().error("criterion %s failed: %s", failure.number, failure.detail)
    return report.passed


COMMAND_RUNNERS = {
    "census": run_census_command,
    "jordanize": run_jordanize_command,
    "lcs-verify": run_lcs_verify_command,
    "lcs-cp": run_lcs_cp_command,
    "bounds-verify": run_bounds_command,
    "interpolate": run_interpolate_command,
    "verify-all": run_verify_all_command,
}


def run(config: RunConfig) -> int:
    """Dispatch one command and map its outcome to an exit code."""
    logger = get_logger()
    logger.info("Starting %s: %s", config.command, config)
    try:
        passed = COMMAND_RUNNERS[config.command](config)
    except BudgetExceededError as err:
        logger.error("%s", err)
        return EXIT_BUDGET_REFUSED
    except (ValueError, OSError) as err:
        logger.error("%s; %s", err, USAGE_HINT)
        return EXIT_USAGE_ERROR
    except (RuntimeError, ArithmeticError) as err:
        logger.error("%s failed an internal check: %s", config.command, err)
        return EXIT_VERIFICATION_FAILURE
    logger.info("%s finished: %s", config.command, "pass" if passed else "FAIL")
    return EXIT_PASS if passed else EXIT_VERIFICATION_FAILURE


def main(argv: list[str] | None = None) -> int:  # pragma: no cover
    """Parse flags, build the run configuration and run the command."""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or os.getenv("LOG_LEVEL", "INFO"))
    try:
        config = get_run_config(args)
    except ValueError as err:
        get_logger().error("%s; %s", err, USAGE_HINT)
        return EXIT_USAGE_ERROR
    return run(config)


if __name__ == "__main__":
    sys.exit(main())  # pragma: no cover
