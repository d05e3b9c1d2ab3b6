"""A module for managing the run configuration of the unitriangular census tool.

This module defines a class encapsulating one run's parameters, helpers for
reading typed environment variables, and the enumeration budget guard.
Command-line flags take precedence; environment variables (optionally loaded
from a .env file beside this module) supply the defaults.

Classes:
    RunConfig: The parameters of a single command invocation.
    BudgetExceededError: Raised when an enumeration would exceed the budget.

Functions:
    get_run_config: Builds and validates a RunConfig from parsed flags and the environment.
    check_budget: Refuses enumerations larger than the configured budget.
"""

import argparse
import os
from os.path import dirname, join

from constants import DEFAULT_ENUMERATION_BUDGET, DEFAULT_SEED, DEFAULT_WORKERS
from dotenv import load_dotenv
from field import factor_prime_power
from logging_config import get_logger

COMMANDS = (
    "census",
    "jordanize",
    "lcs-verify",
    "lcs-cp",
    "bounds-verify",
    "interpolate",
    "verify-all",
)


class BudgetExceededError(ValueError):
    """An enumeration is larger than the configured budget and no override is set."""


class RunConfig:
    # pylint: disable=too-many-instance-attributes
    """
    Run configuration

    Attributes:
        command (str): One of COMMANDS
        n (int | None): Matrix size for census, lcs-cp and interpolate
        k (int | None): Lower central series index
        a (int | None): Size of the first diagonal block for lcs-verify
        b (int | None): Size of the second diagonal block for lcs-verify
        q_list (list[int]): Field orders, each a prime power
        budget (int): Largest enumeration run without override
        workers (int): Number of worker processes
        output_path (str | None): Where to write the JSON result (stdout if None)
        override_budget (bool): If True, run enumerations beyond the budget
        seed (int): Seed for pseudo-random samples
        pairs (bool): If True, the census also computes comm(lambda, mu)
        csv_path (str | None): Optional CSV export of per-shape tables
        profile (str): "quick" or "full" for verify-all
        matrix_path (str | None): Matrix file for jordanize
        n_max (int | None): Upper size for bounds-verify sweeps
        log_level (str): Logging level name
        markdown_path (str | None): Optional Markdown summary for verify-all
        fixtures_path (str | None): Regression fixture file for verify-all
        level_only (bool): If True, jordanize runs a single level on a matrix whose
            leading block is already a Jordan matrix
    """

    def __init__(
        self,
        command: str,
        n: int | None = None,
        k: int | None = None,
        a: int | None = None,
        b: int | None = None,
        q_list: list[int] | None = None,
        budget: int = DEFAULT_ENUMERATION_BUDGET,
        workers: int = DEFAULT_WORKERS,
        output_path: str | None = None,
        override_budget: bool = False,
        seed: int = DEFAULT_SEED,
        pairs: bool = False,
        csv_path: str | None = None,
        profile: str = "quick",
        matrix_path: str | None = None,
        n_max: int | None = None,
        log_level: str = "INFO",
        markdown_path: str | None = None,
        fixtures_path: str | None = None,
        level_only: bool = False,
    ):
        self.command = command
        self.n = n
        self.k = k
        self.a = a
        self.b = b
        self.q_list = q_list if q_list is not None else []
        self.budget = budget
        self.workers = workers
        self.output_path = output_path
        self.override_budget = override_budget
        self.seed = seed
        self.pairs = pairs
        self.csv_path = csv_path
        self.profile = profile
        self.matrix_path = matrix_path
        self.n_max = n_max
        self.log_level = log_level
        self.markdown_path = markdown_path
        self.fixtures_path = fixtures_path
        self.level_only = level_only

    def __repr__(self):
        return (
            f"RunConfig("
            f"{self.command},"
            f"{self.n},"
            f"{self.k},"
            f"{self.a},"
            f"{self.b},"
            f"{self.q_list},"
            f"{self.budget},"
            f"{self.workers},"
            f"{self.output_path},"
            f"{self.override_budget},"
            f"{self.seed},"
            f"{self.pairs},"
            f"{self.csv_path},"
            f"{self.profile},"
            f"{self.matrix_path},"
            f"{self.n_max},"
            f"{self.log_level},"
            f"{self.markdown_path},"
            f"{self.fixtures_path},"
            f"{self.level_only}"
            ")"
        )


def get_bool_env_var(env_var_name: str, default: bool = False) -> bool:
    """Get a boolean environment variable with proper type conversion.

    Only the string "true" (case-insensitive) is considered True; all other
    values are considered False.

    Args:
        env_var_name (str): The name of the environment variable to retrieve.
        default (bool, optional): The default value to return if the environment
                                 variable is not set or is empty. Defaults to False.

    Returns:
        bool: True if the environment variable is set to "true" (case-insensitive),
              False otherwise, or the default value if the variable is not set.
    """
    ev = os.environ.get(env_var_name, "")
    if ev == "" and default:
        return default
    return ev.strip().lower() == "true"


def get_int_env_var(env_var_name: str) -> int | None:
    """Get an integer environment variable with proper type conversion and validation.

    Args:
        env_var_name (str): The name of the environment variable to retrieve.

    Returns:
        int | None: The value of the environment variable as an integer, or None if
                   the variable is not set, empty, or cannot be converted to an integer.

    Examples:
        >>> os.environ['CENSUS_WORKERS'] = '4'
        >>> get_int_env_var('CENSUS_WORKERS')
        4
        >>> get_int_env_var('NONEXISTENT_VAR')
        None
    """
    env_var = os.environ.get(env_var_name)
    if env_var is None or not env_var.strip():
        return None
    try:
        return int(env_var)
    except ValueError:
        return None


def parse_q_list(text: str) -> list[int]:
    """Parse a comma separated list of field orders such as "2,3,4".

    A leading "q=" on each item is accepted so that the CLI field notation
    "q=4" can be used directly.

    Raises:
        ValueError: If an item is not an integer or not a prime power.
    """
    orders = []
    for item in text.split(","):
        item = item.strip()
        if item.startswith("q="):
            item = item[2:]
        if not item:
            continue
        try:
            q = int(item)
        except ValueError as err:
            raise ValueError(
                f"--q: '{item}' is not an integer; use --q 2 or --q 2,3,4"
            ) from err
        if factor_prime_power(q) is None:
            raise ValueError(f"--q: {q} is not a prime power; use e.g. --q 2,3,4,5,7")
        orders.append(q)
    if not orders:
        raise ValueError("--q: no field order given; use e.g. --q 2")
    if len(set(orders)) != len(orders):
        raise ValueError("--q: field orders must be distinct")
    return orders


def _require_positive(name: str, value: int | None) -> None:
    if value is not None and value < 1:
        raise ValueError(f"--{name} must be at least 1 (got {value})")


def get_run_config(args: argparse.Namespace, test: bool = False) -> RunConfig:
    """
    Build and validate the RunConfig for one command invocation.

    Args:
        args (argparse.Namespace): Parsed command-line flags. Missing attributes are
                                   treated as not given.
        test (bool, optional): If True, skip loading the .env file (used for testing).
                              Defaults to False.

    Returns:
        RunConfig: The validated configuration.

    Raises:
        ValueError: If a flag or environment variable is invalid. The message names
                    the offending flag.

    Environment Variables:
        - CENSUS_WORKERS: Default worker count (default: 1)
        - ENUMERATION_BUDGET: Default enumeration budget (default: 2^34)
        - OVERRIDE_BUDGET: Set to "true" to run enumerations beyond the budget
        - RANDOM_SEED: Seed for pseudo-random samples
        - LOG_LEVEL: Logging level name (default: INFO)
    """
    if not test:  # pragma: no cover
        dotenv_path = join(dirname(__file__), ".env")
        load_dotenv(dotenv_path)

    command = getattr(args, "command", None)
    if command not in COMMANDS:
        raise ValueError(f"command must be one of {', '.join(COMMANDS)}")

    workers = getattr(args, "workers", None)
    if workers is None:
        workers = get_int_env_var("CENSUS_WORKERS") or DEFAULT_WORKERS
    if workers < 1:
        raise ValueError(f"--workers must be at least 1 (got {workers})")

    budget = getattr(args, "budget", None)
    if budget is None:
        budget = get_int_env_var("ENUMERATION_BUDGET") or DEFAULT_ENUMERATION_BUDGET
    if budget < 1:
        raise ValueError(f"--budget must be positive (got {budget})")

    override_budget = bool(getattr(args, "override_budget", False)) or get_bool_env_var(
        "OVERRIDE_BUDGET"
    )

    seed = getattr(args, "seed", None)
    if seed is None:
        seed = get_int_env_var("RANDOM_SEED")
        if seed is None:
            seed = DEFAULT_SEED

    log_level = getattr(args, "log_level", None) or os.getenv("LOG_LEVEL", "INFO")

    q_text = getattr(args, "q", None)
    q_list = parse_q_list(q_text) if q_text else []

    n = getattr(args, "n", None)
    a = getattr(args, "a", None)
    b = getattr(args, "b", None)
    n_max = getattr(args, "nmax", None)
    for name, value in (("n", n), ("a", a), ("b", b), ("nmax", n_max)):
        _require_positive(name, value)

    k = getattr(args, "k", None)
    if k is not None:
        if k < 0:
            raise ValueError(f"--k must be non-negative (got {k})")
        if n is not None and k > n - 1:
            raise ValueError(f"--k must be at most n-1 = {n - 1} (got {k})")

    profile = getattr(args, "profile", None) or "quick"
    if profile not in ("quick", "full"):
        raise ValueError(f"--profile must be 'quick' or 'full' (got {profile})")

    if override_budget:
        get_logger().warning("Enumeration budget override is in effect")

    return RunConfig(
        command=command,
        n=n,
        k=k,
        a=a,
        b=b,
        q_list=q_list,
        budget=budget,
        workers=workers,
        output_path=getattr(args, "out", None),
        override_budget=override_budget,
        seed=seed,
        pairs=bool(getattr(args, "pairs", False)),
        csv_path=getattr(args, "csv", None),
        profile=profile,
        matrix_path=getattr(args, "matrix", None),
        n_max=n_max,
        log_level=log_level,
        markdown_path=getattr(args, "markdown", None),
        fixtures_path=getattr(args, "fixtures", None),
        level_only=bool(getattr(args, "level_only", False)),
    )


def check_budget(size: int, budget: int, override: bool = False, what: str = "") -> None:
    """Refuse an enumeration of `size` items when it exceeds `budget`.

    Raises:
        BudgetExceededError: If size > budget and override is False.
    """
    if size <= budget:
        return
    if override:
        get_logger().warning(
            "Running %s enumeration of %s items beyond the budget %s",
            what or "an",
            size,
            budget,
        )
        return
    raise BudgetExceededError(
        f"{what or 'enumeration'} needs {size} items, above the budget of {budget}; "
        "pass --override-budget or raise --budget"
    )
