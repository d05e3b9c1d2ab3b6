"""Lower central series terms U_{n,k}, commuting probabilities and Sylvester operators.

U_{n,k} holds the unitriangular matrices whose entries vanish at distance
1..k above the diagonal; its Lie-algebra coordinates are the strictly upper
positions (i, j) with j - i > k. U_{n,k} is abelian once 2k + 2 >= n, which
check_abelian_threshold confirms for small n.

Splitting an (a+b) x (a+b) matrix into blocks A (a x a), X (a x b) and
B (b x b), the free entries of X form the wedge space V: X_ij must vanish
when i - j >= a - k, which is the distance condition in global coordinates.
"""

import itertools
import math
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from bounds import CheckReport
from census import map_shards, shape_census
from config import check_budget
from constants import DEFAULT_ENUMERATION_BUDGET, SCHEMA_VERSION
from field import FieldSpec
from jordan import shape
from logging_config import get_logger
from matrix import Matrix, array_rank, jordan_matrix, nullspace, sylvester_operator
from partitions import conjugate, inner, n_stat, partition_count, partitions_of


class WedgeStabilityError(RuntimeError):
    """A Sylvester operator does not map the wedge space into itself."""


def lcs_dim(n: int, k: int) -> int:
    """dim U_{n,k} = C(n-k, 2)."""
    return math.comb(max(n - k, 0), 2)


@dataclass(frozen=True)
class LcsParams:
    """The group U_{n,k}(q)."""

    n: int
    k: int
    spec: FieldSpec

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"--n must be at least 1 (got {self.n})")
        if not 0 <= self.k <= self.n - 1:
            raise ValueError(f"--k must lie in 0..{self.n - 1} (got {self.k})")

    @property
    def positions(self) -> list[tuple[int, int]]:
        """0-based free positions, row-major."""
        return [(i, j) for i in range(self.n) for j in range(i + self.k + 1, self.n)]

    @property
    def dim(self) -> int:
        return lcs_dim(self.n, self.k)

    @property
    def is_abelian(self) -> bool:
        return 2 * self.k + 2 >= self.n

    def contains(self, a: Matrix) -> bool:
        """Strictly upper with zeros at distance 1..k above the diagonal."""
        if a.shape != (self.n, self.n) or not a.is_strictly_upper():
            return False
        return not any(
            a.entries[i, j] for i in range(self.n) for j in range(i + 1, min(i + self.k + 1, self.n))
        )

    def matrix(self, values) -> Matrix:
        entries = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), value in zip(self.positions, values):
            entries[i, j] = value
        return Matrix(entries, self.spec)

    def elements(self) -> Iterator[Matrix]:
        for values in itertools.product(range(self.spec.q), repeat=self.dim):
            yield self.matrix(values)

    def commutator_operator(self, a: Matrix) -> np.ndarray:
        """X -> AX - XA with X ranging over U_{n,k} coordinates."""
        flat = [i * self.n + j for i, j in self.positions]
        return sylvester_operator(a, a).entries[:, flat]

    def centralizer_dim(self, a: Matrix) -> int:
        """dim (C_M(A) meet U_{n,k})."""
        if self.dim == 0:
            return 0
        return self.dim - array_rank(self.commutator_operator(a), self.spec)

    def centralizer_elements(self, a: Matrix) -> list[Matrix]:
        """Every element of U_{n,k} commuting with A."""
        if self.dim == 0:
            return [self.matrix(())]
        kernel = nullspace(Matrix(self.commutator_operator(a), self.spec))
        return [self.matrix(vector) for vector in kernel.all_vectors()]

    def commuting_pairs(self) -> list[tuple[Matrix, Matrix]]:
        return [(a, b) for a in self.elements() for b in self.centralizer_elements(a)]


@dataclass(frozen=True)
class WedgeSpace:
    """The a x b matrices X with X_ij = 0 whenever i - j >= a - k (1-based)."""

    a: int
    b: int
    k: int

    @property
    def positions(self) -> list[tuple[int, int]]:
        """0-based free positions, row-major."""
        return [(i, j) for i in range(self.a) for j in range(self.b) if i - j < self.a - self.k]

    @property
    def dim(self) -> int:
        return len(self.positions)

    @property
    def flat_indices(self) -> list[int]:
        return [i * self.b + j for i, j in self.positions]

    def dim_identity_holds(self) -> bool:
        """dim V + dim U_{a,k} + dim U_{b,k} = dim U_{a+b,k}."""
        return self.dim + lcs_dim(self.a, self.k) + lcs_dim(self.b, self.k) == lcs_dim(
            self.a + self.b, self.k
        )


def sylvester_op(a_mat: Matrix, b_mat: Matrix, domain: WedgeSpace | None = None) -> Matrix:
    """T_{A,B}(X) = AX - XB, on all a x b matrices or restricted to a wedge space.

    Raises:
        ValueError: If A or B is not strictly upper-triangular.
        WedgeStabilityError: If T does not map the wedge space into itself.
    """
    if not (a_mat.is_strictly_upper() and b_mat.is_strictly_upper()):
        raise ValueError("sylvester_op needs strictly upper-triangular A and B")
    operator = sylvester_operator(a_mat, b_mat)
    if domain is None:
        return operator
    if (domain.a, domain.b) != (a_mat.rows, b_mat.rows):
        raise ValueError(
            f"wedge space is {domain.a}x{domain.b} but T acts on {a_mat.rows}x{b_mat.rows} matrices"
        )
    inside = domain.flat_indices
    free = set(inside)
    outside = [idx for idx in range(domain.a * domain.b) if idx not in free]
    columns = operator.entries[:, inside]
    if outside and columns[outside].any():
        raise WedgeStabilityError(
            f"T_A,B leaves the wedge space (a={domain.a}, b={domain.b}, k={domain.k}); "
            f"A={a_mat.entries.tolist()}, B={b_mat.entries.tolist()}"
        )
    return Matrix(columns[inside], a_mat.spec)


def check_jordan_kernel_dims(max_size: int, spec: FieldSpec) -> CheckReport:
    """dim ker T_{J_lambda, J_mu} = <lambda', mu'> for all lambda of a, mu of b <= max_size."""
    report = CheckReport("jordan_kernel_dims")
    for a_size, b_size in itertools.product(range(1, max_size + 1), repeat=2):
        for lam in partitions_of(a_size):
            j_lam = jordan_matrix(lam, spec)
            for mu in partitions_of(b_size):
                report.checked += 1
                operator = sylvester_operator(j_lam, jordan_matrix(mu, spec))
                kernel_dim = a_size * b_size - array_rank(operator.entries, spec)
                expected = inner(conjugate(lam).parts, conjugate(mu).parts)
                if kernel_dim != expected:
                    report.fail({"lambda": str(lam), "mu": str(mu), "dim": kernel_dim})
    return report


# Commuting probabilities


def cp_direct(
    params: LcsParams, budget: int = DEFAULT_ENUMERATION_BUDGET, override: bool = False
) -> Fraction:
    """cp(U_{n,k}(q)) = sum_A q^dim(C(A) meet U_{n,k}) / q^(2 dim U_{n,k}).

    Raises:
        BudgetExceededError: If q^(2 dim U_{n,k}) exceeds the budget.
    """
    q, dim = params.spec.q, params.dim
    check_budget(q ** (2 * dim), budget, override, "commuting probability")
    if params.is_abelian:
        get_logger().debug("U_{%s,%s} is abelian", params.n, params.k)
    total = sum(q ** params.centralizer_dim(a) for a in params.elements())
    return Fraction(total, q ** (2 * dim))


@dataclass
class DecomposedCp:
    """Both the value and the rank histogram of the block decomposition of cp(a+b, k)."""

    a: int
    b: int
    k: int
    q: int
    wedge_dim: int
    comm_a: int
    comm_b: int
    histogram: dict[int, int] = field(default_factory=dict)

    @property
    def denominator(self) -> int:
        """|U_{a,k}|^2 |U_{b,k}|^2."""
        return self.q ** (2 * (lcs_dim(self.a, self.k) + lcs_dim(self.b, self.k)))

    @property
    def value(self) -> Fraction:
        """sum_j q^-j |C(j)| / (|U_{a,k}|^2 |U_{b,k}|^2)."""
        top = max(self.histogram, default=0)
        numerator = sum(count * self.q ** (top - j) for j, count in self.histogram.items())
        return Fraction(numerator, self.q**top * self.denominator)

    def tail_counts(self) -> dict[int, int]:
        """sum_{j >= r} |C(j)| for every r in 0..dim V."""
        return {
            r: sum(count for j, count in self.histogram.items() if j >= r)
            for r in range(self.wedge_dim + 1)
        }

    def check_tail_bound(self) -> CheckReport:
        report = CheckReport("large_rank_estimate")
        for r, tail in self.tail_counts().items():
            report.checked += 1
            if tail > self.comm_a * self.comm_b:
                report.fail({"r": r, "tail": str(tail)})
        return report

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "k": self.k,
            "q": self.q,
            "wedge_dim": self.wedge_dim,
            "comm_a": str(self.comm_a),
            "comm_b": str(self.comm_b),
            "histogram": {str(j): str(count) for j, count in sorted(self.histogram.items())},
            "value": str(self.value),
        }


@dataclass(frozen=True)
class _QuadrupleTask:
    a_pair: tuple[Matrix, Matrix]
    b_pairs: tuple[tuple[Matrix, Matrix], ...]
    wedge: WedgeSpace


def _quadruple_shard(task: _QuadrupleTask) -> Counter:
    a1, a2 = task.a_pair
    histogram: Counter = Counter()
    for b1, b2 in task.b_pairs:
        t1 = sylvester_op(a1, b1, task.wedge).entries
        t2 = sylvester_op(a2, b2, task.wedge).entries
        rank = array_rank(np.hstack([t1, t2]), a1.spec) if task.wedge.dim else 0
        histogram[rank] += 1
    return histogram


def cp_decomposed(
    a: int,
    b: int,
    k: int,
    spec: FieldSpec,
    workers: int = 1,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    override: bool = False,
) -> DecomposedCp:
    """cp(a+b, k) from commuting pairs of U_{a,k} and U_{b,k}.

    For commuting (A1, A2) and (B1, B2), the block matrices with
    off-diagonal blocks X1, X2 commute iff T_{A1,B1}(X2) = T_{A2,B2}(X1), so
    the quadruple contributes q^(2 dim V - j) commuting pairs, where
    j = dim(im T_{A1,B1} + im T_{A2,B2}).

    Raises:
        ValueError: If a or b is below 1 or k is negative.
        BudgetExceededError: If the number of quadruples exceeds the budget.
        WedgeStabilityError: If some T_{A,B} leaves the wedge space.
    """
    if a < 1 or b < 1:
        raise ValueError(f"--a and --b must be at least 1 (got {a}, {b})")
    if k < 0:
        raise ValueError(f"--k must be non-negative (got {k})")
    group_a = LcsParams(a, min(k, a - 1), spec)
    group_b = LcsParams(b, min(k, b - 1), spec)
    wedge = WedgeSpace(a, b, k)
    if not wedge.dim_identity_holds():
        raise WedgeStabilityError(f"wedge dimension {wedge.dim} breaks the dimension identity")
    a_pairs = group_a.commuting_pairs()
    b_pairs = tuple(group_b.commuting_pairs())
    check_budget(len(a_pairs) * len(b_pairs), budget, override, "quadruple")
    tasks = [_QuadrupleTask(pair, b_pairs, wedge) for pair in a_pairs]
    histogram: Counter = Counter()
    for part in map_shards(_quadruple_shard, tasks, workers):
        histogram.update(part)
    result = DecomposedCp(
        a=a,
        b=b,
        k=k,
        q=spec.q,
        wedge_dim=wedge.dim,
        comm_a=len(a_pairs),
        comm_b=len(b_pairs),
        histogram=dict(sorted(histogram.items())),
    )
    get_logger().info("cp decomposed a=%s b=%s k=%s over %s: %s", a, b, k, spec, result.value)
    return result


@dataclass
class LcsIdentityReport:
    """Both sides of the block decomposition identity."""

    decomposed: DecomposedCp
    direct: Fraction

    @property
    def passed(self) -> bool:
        return self.decomposed.value == self.direct and self.decomposed.check_tail_bound().passed

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "decomposed": self.decomposed.to_json(),
            "direct": str(self.direct),
            "passed": self.passed,
        }


def verify_lcs_identity(
    a: int, b: int, k: int, spec: FieldSpec, workers: int = 1, **budget_kwargs
) -> LcsIdentityReport:
    """cp_decomposed(a, b, k) against cp_direct(a + b, k)."""
    decomposed = cp_decomposed(a, b, k, spec, workers=workers, **budget_kwargs)
    direct = cp_direct(LcsParams(a + b, min(k, a + b - 1), spec), **budget_kwargs)
    report = LcsIdentityReport(decomposed, direct)
    if not report.passed:
        get_logger().error("cp identity fails: %s != %s", decomposed.value, direct)
    return report


def check_abelian_threshold(n_max: int, spec: FieldSpec) -> CheckReport:
    """cp(n, k) = 1 whenever 2k + 2 >= n, for n <= n_max."""
    report = CheckReport("abelian_threshold")
    for n in range(1, n_max + 1):
        for k in range(n):
            params = LcsParams(n, k, spec)
            if not params.is_abelian:
                continue
            report.checked += 1
            value = cp_direct(params, override=True)
            if value != 1:
                report.fail({"n": n, "k": k, "cp": str(value)})
    return report


# Rank-stratified counts


@dataclass
class RankCensus:
    """|N_{a,b}(r)|: pairs (A, B) in U_a x U_b with rank T_{A,B} <= r."""

    a: int
    b: int
    q: int
    counts: dict[int, int]

    def bound(self, r: int) -> int:
        """p(a)^2 p(b)^2 a! b! q^((a-b)^2 + 2r), the square of the bound on |N_{a,b}(r)|."""
        return (
            partition_count(self.a) ** 2
            * partition_count(self.b) ** 2
            * math.factorial(self.a)
            * math.factorial(self.b)
            * self.q ** ((self.a - self.b) ** 2 + 2 * r)
        )

    def check_bound(self) -> CheckReport:
        report = CheckReport("rank_count_bound")
        for r, count in self.counts.items():
            report.checked += 1
            if count * count > self.bound(r):
                report.fail({"a": self.a, "b": self.b, "q": self.q, "r": r, "count": str(count)})
        return report

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "q": self.q,
            "counts": {str(r): str(c) for r, c in sorted(self.counts.items())},
        }


def _cumulative(ranks: Counter, top: int) -> dict[int, int]:
    counts, running = {}, 0
    for r in range(top + 1):
        running += ranks.get(r, 0)
        counts[r] = running
    return counts


def n_rank_census(a: int, b: int, spec: FieldSpec, **budget_kwargs) -> RankCensus:
    """|N_{a,b}(r)| for r = 0..ab from the shape strata: rank T = ab - <lambda', mu'>."""
    f_a = shape_census(a, spec, **budget_kwargs)
    f_b = shape_census(b, spec, **budget_kwargs)
    ranks: Counter = Counter()
    for lam, count_lam in f_a.items():
        for mu, count_mu in f_b.items():
            ranks[a * b - inner(conjugate(lam).parts, conjugate(mu).parts)] += count_lam * count_mu
    return RankCensus(a, b, spec.q, _cumulative(ranks, a * b))


def n_rank_census_direct(a: int, b: int, spec: FieldSpec) -> RankCensus:
    """The same counts from the rank of every operator T_{A,B}."""
    ranks: Counter = Counter()
    for x in LcsParams(a, 0, spec).elements():
        for y in LcsParams(b, 0, spec).elements():
            ranks[array_rank(sylvester_operator(x, y).entries, spec)] += 1
    return RankCensus(a, b, spec.q, _cumulative(ranks, a * b))


def check_rank_shape_invariance(a: int, b: int, spec: FieldSpec) -> CheckReport:
    """rank T_{A,B} = ab - <shape(A)', shape(B)'> for every pair."""
    report = CheckReport("rank_shape_invariance")
    group_a = list(LcsParams(a, 0, spec).elements())
    group_b = list(LcsParams(b, 0, spec).elements())
    shapes_b = [conjugate(shape(y)).parts for y in group_b]
    for x in group_a:
        lam_c = conjugate(shape(x)).parts
        for y, mu_c in zip(group_b, shapes_b):
            report.checked += 1
            rank = array_rank(sylvester_operator(x, y).entries, spec)
            if rank != a * b - inner(lam_c, mu_c):
                report.fail({"a": x.entries.tolist(), "b": y.entries.tolist(), "rank": rank})
    return report


def check_inner_product_bound(n_max: int = 8) -> CheckReport:
    """<lambda', mu'> <= (a + b)/2 + n(lambda) + n(mu) for lambda |- a, mu |- b, a, b <= n_max."""
    report = CheckReport("inner_product_bound")
    shapes = {
        a: [(lam, conjugate(lam).parts, n_stat(lam)) for lam in partitions_of(a)] for a in range(1, n_max + 1)
    }
    for a in range(1, n_max + 1):
        for b in range(1, n_max + 1):
            for lam, lam_c, n_lam in shapes[a]:
                for mu, mu_c, n_mu in shapes[b]:
                    report.checked += 1
                    if 2 * inner(lam_c, mu_c) > a + b + 2 * (n_lam + n_mu):
                        report.fail({"lambda": str(lam), "mu": str(mu)})
    return report


# The exponent sequences of the inductive bound


def beta_recurrence(m: int) -> Fraction:
    """beta_0 = 0, beta_m = (beta_{m-1} - (1 - 2^-m)^2) / 4."""
    if m < 0:
        raise ValueError(f"m must be non-negative (got {m})")
    value = Fraction(0)
    for i in range(1, m + 1):
        value = (value - (1 - Fraction(1, 2**i)) ** 2) / 4
    return value


def beta_closed(m: int) -> Fraction:
    """-1/3 - (2/3) 4^-m + 2^-m - m 4^-(m+1)."""
    if m < 0:
        raise ValueError(f"m must be non-negative (got {m})")
    return (
        Fraction(-1, 3) - Fraction(2, 3) / 4**m + Fraction(1, 2**m) - Fraction(m, 4 ** (m + 1))
    )


def beta(m: int) -> Fraction:
    """beta_m, with the recurrence and the closed form required to agree.

    Raises:
        ValueError: If m < 0.
        ArithmeticError: If the two forms differ.
    """
    value = beta_recurrence(m)
    if value != beta_closed(m):
        raise ArithmeticError(f"beta_{m}: recurrence {value} != closed form {beta_closed(m)}")
    return value


def gamma(m: int) -> Fraction:
    """gamma_m = 1/6 - (13/24) 4^-m + 2^-(m+1) - m 4^-(m+1).

    Raises:
        ValueError: If m < 0.
        ArithmeticError: If gamma_m != (1 - 2^-(m+1))^2 / 2 + beta_m.
    """
    if m < 0:
        raise ValueError(f"m must be non-negative (got {m})")
    value = (
        Fraction(1, 6)
        - Fraction(13, 24) / 4**m
        + Fraction(1, 2 ** (m + 1))
        - Fraction(m, 4 ** (m + 1))
    )
    combined = (1 - Fraction(1, 2 ** (m + 1))) ** 2 / 2 + beta(m)
    if value != combined:
        raise ArithmeticError(f"gamma_{m}: closed form {value} != combination {combined}")
    return value


def r_m(m: int, n: int) -> int:
    """The nearest integer to (beta_{m-1} + (1 - 2^-m)^2) n^2 / 4."""
    if m < 1:
        raise ValueError(f"m must be at least 1 (got {m})")
    x = (beta(m - 1) + (1 - Fraction(1, 2**m)) ** 2) * n * n / 4
    return math.floor(x + Fraction(1, 2))


def check_exponent_sequences(m_max: int = 30) -> CheckReport:
    """beta/gamma algebra for m <= m_max.

    |gamma_m - 1/6| is checked to shrink from m = 2 on; it grows over
    m = 0, 1, 2.
    """
    report = CheckReport("exponent_sequences")
    for m in range(m_max + 1):
        report.checked += 1
        try:
            gamma(m)
        except ArithmeticError as err:
            report.fail({"m": m, "error": str(err)})
            continue
        if m >= 1 and (beta(m - 1) - (1 - Fraction(1, 2**m)) ** 2) / 4 != beta(m):
            report.fail({"m": m, "identity": "beta step"})
    gaps = [abs(gamma(m) - Fraction(1, 6)) for m in range(2, m_max + 1)]
    report.checked += 1
    if any(later >= earlier for earlier, later in zip(gaps, gaps[1:])):
        report.fail({"claim": "|gamma_m - 1/6| decreasing for m >= 2"})
    if m_max >= 30:
        report.checked += 1
        if abs(gamma(30) - Fraction(1, 6)) >= Fraction(1, 2**25):
            report.fail({"claim": "|gamma_30 - 1/6| < 2^-25"})
    return report
