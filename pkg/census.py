"""Exhaustive exact censuses of the strictly upper-triangular matrices over F_q.

Every A in the strictly upper-triangular space (N = C(n,2) coordinates) is
visited once. Its centralizer in that space is a nullspace, so commuting
pairs are counted as sum_A q^dim C_U(A) and Burnside gives
k(U_n(q)) = sum_A q^dim C_U(A) / q^N.

Enumeration order is row-major over the strictly-upper positions, each
entry cycling through the field encodings. The first SHARD_PREFIX_ENTRIES
entries are fixed per shard, shards are counted independently (optionally
in worker processes) and their tallies are added in shard order, so the
result does not depend on the number of workers.
"""

import itertools
import math
from collections import Counter
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from bounds import CheckReport, main_bound_exponent, rounded_bound_exponent
from config import check_budget
from constants import (
    DEFAULT_ENUMERATION_BUDGET,
    MAX_INTERPOLATION_SIZE,
    SCHEMA_VERSION,
    SHARD_PREFIX_ENTRIES,
)
from field import FieldSpec, factor_prime_power
from gaparray import g_worst, membership, subspace_dim
from jordan import canonical_conjugator, shape
from logging_config import current_level_name, get_logger, setup_logging
from matrix import Matrix, Subspace, array_rank, from_flat, inverse, nullspace, sylvester_operator
from partitions import (
    Partition,
    conjugate,
    h_value,
    hook_count,
    n_stat,
    partition_count,
    partitions_of,
)


class CensusInvariantError(RuntimeError):
    """A census total broke an identity that holds for every correct enumeration."""


# Strictly upper-triangular coordinates


def upper_positions(n: int) -> list[tuple[int, int]]:
    """0-based (i, j) with i < j in row-major order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _upper_flat_indices(n: int) -> list[int]:
    return [i * n + j for i, j in upper_positions(n)]


def _check_strictly_upper(a: Matrix) -> None:
    if not a.is_strictly_upper():
        raise ValueError(f"{a.rows}x{a.cols} matrix is not strictly upper-triangular")


def _commutator_on_upper(a: Matrix) -> Matrix:
    """X -> AX - XA on strictly upper-triangular X.

    The image of a strictly upper X is strictly upper, so rows outside the
    strictly-upper positions are zero and dropped.
    """
    idx = _upper_flat_indices(a.rows)
    operator = sylvester_operator(a, a).entries
    return Matrix(operator[np.ix_(idx, idx)], a.spec)


def centralizer_dim_u(a: Matrix) -> int:
    """dim C_U(A); the centralizer has q^dim elements.

    Raises:
        ValueError: If a is not strictly upper-triangular.
    """
    _check_strictly_upper(a)
    n_upper = math.comb(a.rows, 2)
    if n_upper == 0:
        return 0
    return n_upper - array_rank(_commutator_on_upper(a).entries, a.spec)


def centralizer_subspace_u(a: Matrix) -> Subspace:
    """C_U(A) as a subspace of the n x n matrices (row-major coordinates).

    Raises:
        ValueError: If a is not strictly upper-triangular.
    """
    _check_strictly_upper(a)
    n, spec = a.rows, a.spec
    if n < 2:
        return Subspace.zero(n * n, spec)
    kernel = nullspace(_commutator_on_upper(a))
    embedded = np.zeros((kernel.dim, n * n), dtype=np.int64)
    embedded[:, _upper_flat_indices(n)] = kernel.basis
    return Subspace.span(embedded, n * n, spec)


def upper_matrix(values: Sequence[int], n: int, spec: FieldSpec) -> Matrix:
    """The strictly upper-triangular matrix with the given row-major upper entries."""
    entries = np.zeros((n, n), dtype=np.int64)
    for (i, j), value in zip(upper_positions(n), values):
        entries[i, j] = value
    return Matrix(entries, spec)


# Sharding


@dataclass(frozen=True)
class ShardTask:
    """One block of the enumeration: every A whose first upper entries equal prefix."""

    n: int
    spec: FieldSpec
    prefix: tuple[int, ...]
    pairs: bool = False

    def matrices(self) -> Iterator[Matrix]:
        free = math.comb(self.n, 2) - len(self.prefix)
        for suffix in itertools.product(range(self.spec.q), repeat=free):
            yield upper_matrix(self.prefix + suffix, self.n, self.spec)


def shard_tasks(n: int, spec: FieldSpec, pairs: bool = False) -> list[ShardTask]:
    prefix_length = min(SHARD_PREFIX_ENTRIES, math.comb(n, 2))
    return [
        ShardTask(n, spec, prefix, pairs)
        for prefix in itertools.product(range(spec.q), repeat=prefix_length)
    ]


def map_shards(func: Callable, tasks: Sequence, workers: int = 1) -> list:
    """func over tasks, in task order, on up to `workers` processes."""
    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with ProcessPoolExecutor(
        max_workers=workers, initializer=setup_logging, initargs=(current_level_name(),)
    ) as executor:
        return list(executor.map(func, tasks))


@dataclass
class ShapeStratum:
    """Per-shape tallies: F_lambda, comm(lambda) and the largest dim C_U(A) seen."""

    count: int = 0
    comm: int = 0
    max_centralizer_dim: int = 0

    def merge(self, other: "ShapeStratum") -> None:
        self.count += other.count
        self.comm += other.comm
        self.max_centralizer_dim = max(self.max_centralizer_dim, other.max_centralizer_dim)


@dataclass
class ShardTally:
    total: int = 0
    per_shape: dict[Partition, ShapeStratum] = field(default_factory=dict)
    per_shape_pair: Counter = field(default_factory=Counter)


def census_shard(task: ShardTask) -> ShardTally:
    """Count one shard. Top level so that worker processes can import it."""
    q = task.spec.q
    tally = ShardTally()
    for a in task.matrices():
        dim = centralizer_dim_u(a)
        lam = shape(a)
        stratum = tally.per_shape.setdefault(lam, ShapeStratum())
        stratum.count += 1
        stratum.comm += q**dim
        stratum.max_centralizer_dim = max(stratum.max_centralizer_dim, dim)
        tally.total += q**dim
        if task.pairs:
            for vector in centralizer_subspace_u(a).all_vectors():
                tally.per_shape_pair[(lam, shape(from_flat(vector, task.n, task.spec)))] += 1
    get_logger().debug("census shard %s of n=%s over %s done", task.prefix, task.n, task.spec)
    return tally


# Census records


@dataclass
class CensusRecord:
    # pylint: disable=too-many-instance-attributes
    """The outcome of one census of U_n(q).

    Attributes:
        n (int): Matrix size.
        q (int): Field order.
        total_comm_pairs (int): |comm(U_n(q))|.
        class_count (int): k(U_n(q)).
        per_shape (dict[Partition, ShapeStratum]): F_lambda, comm(lambda) and
            the largest centralizer dimension per Jordan type.
        per_shape_pair (dict | None): comm(lambda, mu) when pair strata were requested.
        checks (list[CheckReport]): The class-count bounds checked on this census.
    """

    n: int
    q: int
    total_comm_pairs: int
    class_count: int
    per_shape: dict[Partition, ShapeStratum]
    per_shape_pair: dict[tuple[Partition, Partition], int] | None = None
    checks: list[CheckReport] = field(default_factory=list)

    @property
    def upper_dim(self) -> int:
        return math.comb(self.n, 2)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def shape_counts(self) -> dict[Partition, int]:
        return {lam: stratum.count for lam, stratum in self.per_shape.items()}

    def check_invariants(self) -> None:
        """Raise CensusInvariantError unless every counting identity holds."""
        group_order = self.q**self.upper_dim
        if self.class_count * group_order != self.total_comm_pairs:
            raise CensusInvariantError(
                f"k * q^{self.upper_dim} = {self.class_count * group_order} "
                f"but there are {self.total_comm_pairs} commuting pairs"
            )
        if sum(s.count for s in self.per_shape.values()) != group_order:
            raise CensusInvariantError(f"shape strata do not add up to q^{self.upper_dim}")
        if sum(s.comm for s in self.per_shape.values()) != self.total_comm_pairs:
            raise CensusInvariantError("comm(lambda) strata do not add up to |comm|")
        if self.per_shape_pair is None:
            return
        for (lam, mu), count in self.per_shape_pair.items():
            if self.per_shape_pair.get((mu, lam), 0) != count:
                raise CensusInvariantError(f"comm({lam},{mu}) != comm({mu},{lam})")
        row_sums: Counter = Counter()
        for (lam, _), count in self.per_shape_pair.items():
            row_sums[lam] += count
        for lam, stratum in self.per_shape.items():
            if row_sums[lam] != stratum.comm:
                raise CensusInvariantError(f"sum over mu of comm({lam},mu) != comm({lam})")

    def to_json(self) -> dict:
        per_shape = []
        for lam in partitions_of(self.n):
            stratum = self.per_shape.get(lam, ShapeStratum())
            per_shape.append(
                {
                    "shape": str(lam),
                    "count": str(stratum.count),
                    "comm": str(stratum.comm),
                    "max_centralizer_dim": stratum.max_centralizer_dim,
                    "worst_gap_dim": subspace_dim(g_worst(lam)),
                }
            )
        payload = {
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "q": self.q,
            "total_comm_pairs": str(self.total_comm_pairs),
            "class_count": str(self.class_count),
            "per_shape": per_shape,
            "per_shape_pair": None,
            "checks": [check.to_json() for check in self.checks],
        }
        if self.per_shape_pair is not None:
            order = {lam: idx for idx, lam in enumerate(partitions_of(self.n))}
            payload["per_shape_pair"] = [
                {"lambda": str(lam), "mu": str(mu), "count": str(count)}
                for (lam, mu), count in sorted(
                    self.per_shape_pair.items(), key=lambda item: (order[item[0][0]], order[item[0][1]])
                )
            ]
        return payload

    def csv_rows(self) -> list[list[str]]:
        """Per-shape table with a header row."""
        rows = [["shape", "count", "comm", "max_centralizer_dim", "worst_gap_dim"]]
        for entry in self.to_json()["per_shape"]:
            rows.append(
                [
                    entry["shape"],
                    entry["count"],
                    entry["comm"],
                    str(entry["max_centralizer_dim"]),
                    str(entry["worst_gap_dim"]),
                ]
            )
        return rows


def _ceil_sqrt(x: int) -> int:
    return math.isqrt(x - 1) + 1 if x > 0 else 0


def bound_checks(record: CensusRecord) -> list[CheckReport]:
    """The class-count and strata bounds, as exact integer comparisons."""
    n, q, k = record.n, record.q, record.class_count
    checks = []

    yip = CheckReport("shape_count_bound")
    comm_shape = CheckReport("comm_shape_bound")
    worst_gap = CheckReport("centralizer_worst_gap_dim")
    for lam, stratum in record.per_shape.items():
        yip.checked += 1
        if stratum.count > hook_count(lam) * q ** (record.upper_dim - n_stat(lam)):
            yip.fail({"shape": str(lam), "count": str(stratum.count)})
        comm_shape.checked += 1
        exponent = n * n + int(h_value(conjugate(lam).parts))
        if stratum.comm**2 > math.factorial(n) * q**exponent:
            comm_shape.fail({"shape": str(lam), "comm": str(stratum.comm)})
        worst_gap.checked += 1
        if stratum.max_centralizer_dim > subspace_dim(g_worst(lam)):
            worst_gap.fail({"shape": str(lam), "dim": stratum.max_centralizer_dim})
    checks.extend([yip, comm_shape, worst_gap])

    class_bounds = {
        "n_squared_sixth_bound": partition_count(n)
        * _ceil_sqrt(math.factorial(n))
        * q ** (-(-n * n // 6) + -(-n // 2)),
        "main_bound": partition_count(n) ** 2 * math.factorial(n) * q ** main_bound_exponent(n),
        "rounded_bound": partition_count(n) ** 2 * math.factorial(n) * q ** rounded_bound_exponent(n),
        "canonical_matrix_bound": math.factorial(n - 1) * 2 ** (n - 1) * q ** ((n * n + n) // 6),
    }
    for name, bound in class_bounds.items():
        report = CheckReport(name, checked=1)
        if k > bound:
            report.fail({"class_count": str(k), "bound": str(bound)})
        checks.append(report)

    if record.per_shape_pair is not None:
        pair_bound = CheckReport("pair_strata_bound")
        for (lam, mu), count in record.per_shape_pair.items():
            pair_bound.checked += 1
            if count > record.per_shape[lam].count * record.per_shape[mu].count:
                pair_bound.fail({"lambda": str(lam), "mu": str(mu), "count": str(count)})
        checks.append(pair_bound)
    return checks


def run_census(
    n: int,
    spec: FieldSpec,
    pairs: bool = False,
    workers: int = 1,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    override: bool = False,
) -> CensusRecord:
    """Census of U_n(q): class count, shape strata and optionally comm(lambda, mu).

    Raises:
        ValueError: If n < 1.
        BudgetExceededError: If q^N (or q^2N with pairs) exceeds the budget.
        CensusInvariantError: If a counting identity fails.
    """
    if n < 1:
        raise ValueError(f"--n must be at least 1 (got {n})")
    logger = get_logger()
    q = spec.q
    n_upper = math.comb(n, 2)
    check_budget(q**n_upper, budget, override, "census")
    if pairs:
        check_budget(q ** (2 * n_upper), budget, override, "commuting pair")

    tasks = shard_tasks(n, spec, pairs)
    logger.info("census n=%s over %s: %s shards on %s workers", n, spec, len(tasks), workers)
    total = 0
    per_shape: dict[Partition, ShapeStratum] = {}
    per_shape_pair: Counter = Counter()
    for tally in map_shards(census_shard, tasks, workers):
        total += tally.total
        for lam, stratum in tally.per_shape.items():
            per_shape.setdefault(lam, ShapeStratum()).merge(stratum)
        per_shape_pair.update(tally.per_shape_pair)

    class_count, remainder = divmod(total, q**n_upper)
    if remainder:
        raise CensusInvariantError(
            f"Burnside sum {total} is not divisible by q^{n_upper} = {q**n_upper}"
        )
    record = CensusRecord(
        n=n,
        q=q,
        total_comm_pairs=total,
        class_count=class_count,
        per_shape={lam: per_shape[lam] for lam in partitions_of(n) if lam in per_shape},
        per_shape_pair=dict(per_shape_pair) if pairs else None,
    )
    record.check_invariants()
    record.checks = bound_checks(record)
    logger.info("k(U_%s(%s)) = %s, %s commuting pairs", n, q, class_count, total)
    for check in record.checks:
        if not check.passed:
            logger.error("census check %s failed: %s", check.name, check.witnesses)
    return record


def class_count(n: int, spec: FieldSpec, **kwargs) -> CensusRecord:
    """The census behind k(U_n(q)); the count is record.class_count."""
    return run_census(n, spec, pairs=False, **kwargs)


def shape_census(n: int, spec: FieldSpec, **kwargs) -> dict[Partition, int]:
    """F_lambda(q) for every lambda of n."""
    return class_count(n, spec, **kwargs).shape_counts()


def comm_strata(n: int, spec: FieldSpec, pairs: bool = False, **kwargs) -> CensusRecord:
    """comm(lambda) for every lambda, and comm(lambda, mu) when pairs is set."""
    return run_census(n, spec, pairs=pairs, **kwargs)


# Worst-gap containment


@dataclass
class WorstGapReport:
    """Whether X_A C_U(A) X_A^-1 lies in C(G^lambda) for every A."""

    n: int
    q: int
    checked: int = 0
    violations: int = 0
    witnesses: list[dict] = field(default_factory=list)
    max_dim_by_shape: dict[Partition, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def merge(self, other: "WorstGapReport") -> None:
        self.checked += other.checked
        self.violations += other.violations
        self.witnesses.extend(other.witnesses)
        for lam, dim in other.max_dim_by_shape.items():
            self.max_dim_by_shape[lam] = max(self.max_dim_by_shape.get(lam, 0), dim)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "q": self.q,
            "checked": self.checked,
            "violations": self.violations,
            "witnesses": self.witnesses,
            "max_dim_by_shape": [
                {"shape": str(lam), "max_dim": dim, "worst_gap_dim": subspace_dim(g_worst(lam))}
                for lam, dim in self.max_dim_by_shape.items()
            ],
        }


def worst_gap_shard(task: ShardTask) -> WorstGapReport:
    report = WorstGapReport(n=task.n, q=task.spec.q)
    for a in task.matrices():
        x, traces = canonical_conjugator(a)
        x_inv = inverse(x)
        lam = traces[-1].result_shape if traces else Partition((1,))
        target = g_worst(lam)
        centralizer_u = centralizer_subspace_u(a)
        report.checked += 1
        report.max_dim_by_shape[lam] = max(report.max_dim_by_shape.get(lam, 0), centralizer_u.dim)
        for b in centralizer_u.matrices():
            if not membership(x @ b @ x_inv, target):
                report.violations += 1
                report.witnesses.append(
                    {
                        "a": a.entries.tolist(),
                        "shape": str(lam),
                        "conjugator": x.entries.tolist(),
                        "centralizer_element": b.entries.tolist(),
                    }
                )
                break
    return report


def verify_worst_gap(
    n: int,
    spec: FieldSpec,
    workers: int = 1,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    override: bool = False,
) -> WorstGapReport:
    """Check X_A C_U(A) X_A^-1 inside C(G^shape(A)) for every strictly upper A.

    Raises:
        BudgetExceededError: If q^N exceeds the budget.
    """
    check_budget(spec.q ** math.comb(n, 2), budget, override, "worst-gap")
    report = WorstGapReport(n=n, q=spec.q)
    for part in map_shards(worst_gap_shard, shard_tasks(n, spec), workers):
        report.merge(part)
    report.max_dim_by_shape = {
        lam: report.max_dim_by_shape[lam] for lam in partitions_of(n) if lam in report.max_dim_by_shape
    }
    get_logger().info(
        "worst-gap containment n=%s q=%s: %s matrices, %s violations",
        n,
        spec.q,
        report.checked,
        report.violations,
    )
    return report


# Interpolation


def expected_class_degree(n: int) -> int:
    """The nearest integer to (n^2 + 6n) / 12."""
    return (n * n + 6 * n + 6) // 12


def _times_linear(poly: list[Fraction], root: int) -> list[Fraction]:
    """poly * (x - root), coefficients constant term first."""
    result = [Fraction(0)] * (len(poly) + 1)
    for i, c in enumerate(poly):
        result[i + 1] += c
        result[i] -= c * root
    return result


def lagrange_coefficients(points: Sequence[tuple[int, int]]) -> list[Fraction]:
    """The interpolating polynomial through the points, constant term first, trimmed."""
    coefficients = [Fraction(0)] * len(points)
    for i, (x_i, y_i) in enumerate(points):
        numerator = [Fraction(1)]
        denominator = Fraction(1)
        for j, (x_j, _) in enumerate(points):
            if j != i:
                numerator = _times_linear(numerator, x_j)
                denominator *= x_i - x_j
        scale = Fraction(y_i) / denominator
        for d, c in enumerate(numerator):
            coefficients[d] += c * scale
    while len(coefficients) > 1 and coefficients[-1] == 0:
        coefficients.pop()
    return coefficients


def evaluate(coefficients: Sequence[Fraction], x: int) -> Fraction:
    value = Fraction(0)
    for c in reversed(coefficients):
        value = value * x + c
    return value


def format_polynomial(coefficients: Sequence[Fraction], variable: str = "q") -> str:
    terms = []
    for d in range(len(coefficients) - 1, -1, -1):
        c = coefficients[d]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        magnitude = abs(c)
        if d == 0:
            body = str(magnitude)
        else:
            power = variable if d == 1 else f"{variable}^{d}"
            body = power if magnitude == 1 else f"{magnitude}{power}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


@dataclass
class ClassPolynomial:
    """k(U_n(q)) interpolated through exact counts."""

    n: int
    points: list[tuple[int, int]]
    coefficients: list[Fraction]
    expected_degree: int

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    @property
    def passed(self) -> bool:
        return self.integral and self.degree == self.expected_degree

    def at(self, q: int) -> Fraction:
        return evaluate(self.coefficients, q)

    def __str__(self) -> str:
        return format_polynomial(self.coefficients)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "points": [{"q": q, "class_count": str(k)} for q, k in self.points],
            "coefficients": [str(c) for c in self.coefficients],
            "polynomial": str(self),
            "degree": self.degree,
            "expected_degree": self.expected_degree,
            "integral": self.integral,
            "passed": self.passed,
        }


def check_interpolation_size(n: int) -> None:
    """The degree formula matches k(U_n(q)) for 2 <= n <= MAX_INTERPOLATION_SIZE only.

    Raises:
        ValueError: For any other n.
    """
    if not 2 <= n <= MAX_INTERPOLATION_SIZE:
        raise ValueError(
            f"--n: class polynomial degrees are certified for 2 <= n <= {MAX_INTERPOLATION_SIZE}, got {n}"
        )


def interpolate_class_polynomial(n: int, q_list: Sequence[int], counts: Sequence[int]) -> ClassPolynomial:
    """Fit k(U_n(q)) exactly and certify its degree on an over-determined point set.

    With at least expected_degree + 2 points, the interpolant has the
    expected degree only if every count lies on one polynomial of that degree.

    Raises:
        ValueError: If n is outside the certified range, the field orders are
            not distinct prime powers, the lists differ in length, or there
            are too few points to certify.
    """
    check_interpolation_size(n)
    if len(q_list) != len(counts):
        raise ValueError(f"--q: {len(q_list)} field orders for {len(counts)} counts")
    if len(set(q_list)) != len(q_list):
        raise ValueError("--q: field orders must be distinct")
    for q in q_list:
        if factor_prime_power(q) is None:
            raise ValueError(f"--q: {q} is not a prime power")
    expected = expected_class_degree(n)
    if len(q_list) < expected + 2:
        raise ValueError(
            f"--q: certifying degree {expected} for n={n} needs at least {expected + 2} "
            f"field orders, got {len(q_list)}"
        )
    points = [(int(q), int(k)) for q, k in zip(q_list, counts)]
    result = ClassPolynomial(n, points, lagrange_coefficients(points), expected)
    logger = get_logger()
    if not result.integral:
        logger.warning("k(U_%s(q)) interpolant has non-integer coefficients: %s", n, result)
    logger.info(
        "k(U_%s(q)) = %s (degree %s, expected %s)", n, result, result.degree, result.expected_degree
    )
    return result
