"""The verify-all acceptance suite.

Each criterion is a function of an AcceptanceContext returning
(passed, detail). The quick profile runs the criteria marked quick; the
full profile runs all of them. Censuses are shared between criteria through
the context so that each (n, q) is enumerated once per run.
"""

import os
import random
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from bounds import check_constants, run_bounds_verification
from census import (
    CensusRecord,
    interpolate_class_polynomial,
    run_census,
    verify_worst_gap,
)
from config import BudgetExceededError
from constants import DEFAULT_ENUMERATION_BUDGET, DEFAULT_FIXTURES_FILE, DEFAULT_SEED, SCHEMA_VERSION
from field import field_for_order
from fixtures import Fixture, load_fixtures, oracle_comm_count, oracle_shape_counts, oracle_syt
from gaparray import (
    GapArray,
    g_worst,
    g_worst_size,
    is_r_valid,
    le,
    membership,
    psi,
    psi_worst_cells,
    subspace_dim,
    verify_gap_lemma,
)
from jordan import conjugate_level
from lcs import (
    LcsParams,
    beta,
    check_exponent_sequences,
    check_inner_product_bound,
    check_jordan_kernel_dims,
    check_rank_shape_invariance,
    cp_direct,
    n_rank_census,
    verify_lcs_identity,
)
from logging_config import get_logger
from matrix import Matrix, read_matrix_file
from partitions import Partition, hook_count, parse_partition, partitions_of

PROFILES = ("quick", "full")


@dataclass
class AcceptanceContext:
    """Run parameters and caches shared by the criteria."""

    profile: str = "quick"
    fixtures_path: str = DEFAULT_FIXTURES_FILE
    workers: int = 1
    seed: int = DEFAULT_SEED
    budget: int = DEFAULT_ENUMERATION_BUDGET
    override: bool = False
    _fixtures: dict[str, Fixture] | None = None
    _censuses: dict[tuple[int, int], CensusRecord] = field(default_factory=dict)

    @property
    def full(self) -> bool:
        return self.profile == "full"

    def fixture(self, key: str):
        if self._fixtures is None:
            self._fixtures = load_fixtures(self.fixtures_path)
        return self._fixtures[key].value

    def data_file(self, name: str) -> str:
        return os.path.join(os.path.dirname(os.path.abspath(self.fixtures_path)), name)

    def census(self, n: int, q: int) -> CensusRecord:
        if (n, q) not in self._censuses:
            self._censuses[(n, q)] = run_census(
                n,
                field_for_order(q),
                workers=self.workers,
                budget=self.budget,
                override=self.override,
            )
        return self._censuses[(n, q)]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    skipped: bool = False

    @property
    def verdict(self) -> str:
        if self.skipped:
            return "skipped"
        return "pass" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "verdict": self.verdict,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    profile: str
    results: list[CriterionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if not r.skipped)

    @property
    def failures(self) -> list[CriterionResult]:
        return [r for r in self.results if not r.skipped and not r.passed]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "profile": self.profile,
            "passed": self.passed,
            "results": [r.to_json() for r in self.results],
        }


def _cells(payload) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in payload)


# Gap arrays and the conjugation procedure


def gap_array_example(ctx: AcceptanceContext) -> tuple[bool, str]:
    data = ctx.fixture("gap_array.worked_example")
    g = GapArray(Partition(tuple(data["type"])), _cells(data["cells"]))
    spec = field_for_order(data["field_order"])
    rng = random.Random(ctx.seed)
    n = g.type_partition.size
    entries = np.zeros((n, n), dtype=np.int64)
    for cells in data["template"].values():
        value = rng.randrange(1, spec.q)
        for i, j in cells:
            entries[i - 1, j - 1] = value
    dim = subspace_dim(g)
    member = membership(Matrix(entries, spec), g)
    return dim == data["dim"] and member, f"dim C(G) = {dim}, template member: {member}"


def psi_chain(ctx: AcceptanceContext) -> tuple[bool, str]:
    data = ctx.fixture("psi.worked_chain")
    g = GapArray(Partition(tuple(data["type"])), _cells(data["cells"]))
    for number, step in enumerate(data["steps"], start=1):
        g, _ = psi(g, step["r"])
        if g.type_partition != Partition(tuple(step["type"])) or g.cells != _cells(step["cells"]):
            return False, f"step {number} (psi_{step['r']}) gives type {g.type_partition}:\n{g}"
    return True, f"{len(data['steps'])} steps reproduced"


def worst_array_display(ctx: AcceptanceContext) -> tuple[bool, str]:
    data = ctx.fixture("g_worst.display")
    lam = Partition(tuple(data["type"]))
    if g_worst(lam).cells != _cells(data["cells"]):
        return False, f"G^{lam} differs from the display"
    for n in range(15):
        for mu in partitions_of(n):
            if g_worst(mu).size != g_worst_size(mu):
                return False, f"|G^{mu}| = {g_worst(mu).size} but the formula gives {g_worst_size(mu)}"
    return True, "display matches; size formula holds for n <= 14"


def conjugation_example(ctx: AcceptanceContext) -> tuple[bool, str]:
    data = ctx.fixture("conjugation.worked_example")
    mu = Partition(tuple(data["mu"]))
    final = Partition(tuple(data["final_type"]))
    for case in data["cases"]:
        trace = conjugate_level(read_matrix_file(ctx.data_file(case["file"])), mu)
        for i, (got, expected) in enumerate(zip(trace.intermediates, case["intermediates"]), start=1):
            if got.entries.tolist() != expected:
                return False, f"q={case['q']}: A^[{i}] = {got.entries.tolist()}"
        for label, step in trace.steps:
            if step.entries.tolist() != case["steps"][label]:
                return False, f"q={case['q']}: step {label} = {step.entries.tolist()}"
        if trace.result_shape != final or trace.extended_block != data["extended_block"]:
            return False, f"q={case['q']}: reached {trace.result_shape} via block {trace.extended_block}"
    return True, f"F_7 and F_11: A^[1..5] and all five step matrices match; final type {final}"


def jordan_kernel_dims(ctx: AcceptanceContext) -> tuple[bool, str]:
    report = check_jordan_kernel_dims(6, field_for_order(2))
    return report.passed, f"{report.checked} pairs (lambda, mu), {report.violations} mismatches"


# Censuses


def burnside_censuses(ctx: AcceptanceContext) -> tuple[bool, str]:
    expected = ctx.fixture("class_count")
    sizes = [n_text for n_text in expected if ctx.full or int(n_text) <= 3]
    for n_text in sizes:
        n = int(n_text)
        for q_text, k in expected[n_text].items():
            record = ctx.census(n, int(q_text))
            if record.class_count != int(k):
                return False, f"k(U_{n}({q_text})) = {record.class_count}, expected {k}"
    pairs = ctx.fixture("comm_pairs")
    for key in ("3,2", "2,3", "4,2"):
        n, q = (int(x) for x in key.split(","))
        oracle = oracle_comm_count(n, q)
        if oracle != int(pairs[key]) or ctx.census(n, q).total_comm_pairs != oracle:
            return False, f"commuting pairs for n={n}, q={q} disagree with the oracle ({oracle})"
    oracle_shapes = {str(Partition(k)): v for k, v in oracle_shape_counts(3, 2).items()}
    census_shapes = {str(lam): count for lam, count in ctx.census(3, 2).shape_counts().items()}
    fixture_shapes = {k: int(v) for k, v in ctx.fixture("shape_counts.n3.q2").items()}
    if not oracle_shapes == census_shapes == fixture_shapes:
        return False, f"F_lambda(2) for n=3: census {census_shapes}, oracle {oracle_shapes}"
    for lam_text, count in ctx.fixture("syt").items():
        lam = parse_partition(lam_text)
        if not oracle_syt(lam.parts) == hook_count(lam) == count:
            return False, f"f^{lam_text}: oracle and hook formula disagree"
    return True, f"class counts for n in {sizes} match; oracles agree; every Burnside sum divides"


def worst_gap_containment(ctx: AcceptanceContext) -> tuple[bool, str]:
    details = []
    for q in (2, 3):
        for n in range(1, 6):
            report = verify_worst_gap(
                n, field_for_order(q), workers=ctx.workers, budget=ctx.budget, override=ctx.override
            )
            if not report.passed:
                return False, f"n={n}, q={q}: {report.violations} violations, first {report.witnesses[:1]}"
            details.append(f"n={n},q={q}:{report.checked}")
    return True, "no violations (" + ", ".join(details) + ")"


def gap_lemma(ctx: AcceptanceContext) -> tuple[bool, str]:
    spec = field_for_order(2)
    total = 0
    for n in range(2, 6):
        report = verify_gap_lemma(n, spec)
        total += report.checked
        if report.sampled:
            return False, f"n={n}: gap arrays were sampled"
        if not report.passed:
            return False, f"n={n}: {len(report.failures)} failures, first {report.failures[0]}"
    return True, f"{total} (A, G) cases over F_2, n <= 5, every gap array"


def worst_array_validity(ctx: AcceptanceContext) -> tuple[bool, str]:
    checked = 0
    for n in range(13):
        for lam in partitions_of(n):
            g = g_worst(lam)
            for r in range(1, len(lam) + 2):
                checked += 1
                if r <= len(lam) and not is_r_valid(g, r):
                    return False, f"G^{lam} is not {r}-valid"
                h, _ = psi(g, r)
                if not le(g_worst(h.type_partition), h):
                    return False, f"G^phi_{r}({lam}) is not below psi_{r}(G^{lam})"
                if not psi_worst_cells(lam, r):
                    return False, f"psi_{r}(G^{lam}) differs from its cellwise description"
    return True, f"{checked} (lambda, r) pairs for n <= 12"


def _census_checks(ctx: AcceptanceContext, names: tuple[str, ...], n_max: int) -> tuple[bool, str]:
    checked = 0
    for q in (2, 3):
        for n in range(1, n_max + 1):
            for check in ctx.census(n, q).checks:
                if check.name not in names:
                    continue
                checked += check.checked
                if not check.passed:
                    return False, f"{check.name} fails for n={n}, q={q}: {check.witnesses[:1]}"
    return True, f"{', '.join(names)}: {checked} comparisons"


def shape_count_bounds(ctx: AcceptanceContext) -> tuple[bool, str]:
    return _census_checks(ctx, ("shape_count_bound",), 5 if ctx.full else 4)


def class_count_bounds(ctx: AcceptanceContext) -> tuple[bool, str]:
    names = (
        "comm_shape_bound",
        "n_squared_sixth_bound",
        "main_bound",
        "rounded_bound",
        "canonical_matrix_bound",
        "centralizer_worst_gap_dim",
    )
    return _census_checks(ctx, names, 5 if ctx.full else 4)


def class_polynomials(ctx: AcceptanceContext) -> tuple[bool, str]:
    expected = ctx.fixture("class_polynomial")
    found = []
    for n_text, data in expected.items():
        n = int(n_text)
        counts = [ctx.census(n, q).class_count for q in data["q_list"]]
        poly = interpolate_class_polynomial(n, data["q_list"], counts)
        if not poly.passed or [str(c) for c in poly.coefficients] != data["coefficients"]:
            return False, f"n={n}: {poly} (degree {poly.degree}, expected {poly.expected_degree})"
        committed = ctx.fixture("class_count").get(n_text, {})
        misses = [q for q, k in committed.items() if poly.at(int(q)) != int(k)]
        if misses:
            return False, f"n={n}: {poly} misses the committed counts at q in {misses}"
        found.append(f"k(U_{n}) = {poly}")
    return True, "; ".join(found)


def lcs_identity(ctx: AcceptanceContext) -> tuple[bool, str]:
    budget = {"budget": ctx.budget, "override": ctx.override}
    for a, b, k, q in ((2, 2, 0, 2), (2, 2, 1, 2), (2, 3, 1, 2), (3, 3, 1, 2), (2, 2, 0, 3)):
        report = verify_lcs_identity(a, b, k, field_for_order(q), workers=ctx.workers, **budget)
        if not report.passed:
            return False, f"(a,b,k,q)=({a},{b},{k},{q}): {report.decomposed.value} != {report.direct}"
    for key, value in ctx.fixture("commuting_probability").items():
        n, k, q = (int(x) for x in key.split(","))
        cp = cp_direct(LcsParams(n, k, field_for_order(q)), **budget)
        if cp != Fraction(value):
            return False, f"cp({n},{k}) over F_{q} = {cp}, expected {value}"
    return True, "decomposition identity holds on all five cases; cp fixtures match"


def rank_bounds(ctx: AcceptanceContext) -> tuple[bool, str]:
    checked = 0
    for q in (2, 3):
        spec = field_for_order(q)
        for a in range(1, 5):
            for b in range(1, 5):
                census = n_rank_census(a, b, spec, budget=ctx.budget, override=ctx.override)
                report = census.check_bound()
                checked += report.checked
                if not report.passed:
                    return False, f"a={a}, b={b}, q={q}: {report.witnesses[:1]}"
                if (a, b, q) == (2, 2, 2):
                    expected = ctx.fixture("rank_census.a2.b2.q2")
                    if any(census.counts[int(r)] != int(v) for r, v in expected.items()):
                        return False, f"N_2,2(r) over F_2 = {census.counts}"
    spec = field_for_order(2)
    for a, b in ((2, 2), (2, 3), (3, 3), (3, 4)):
        report = check_rank_shape_invariance(a, b, spec)
        if not report.passed:
            return False, f"rank T depends on more than the shapes for a={a}, b={b}"
    inner_report = check_inner_product_bound(8)
    if not inner_report.passed:
        return False, f"inner product bound fails: {inner_report.witnesses[:1]}"
    return True, f"{checked} squared bounds; rank-shape invariance on 4 size pairs; {inner_report.checked} shape pairs"


def exponent_sequences(ctx: AcceptanceContext) -> tuple[bool, str]:
    report = check_exponent_sequences(30)
    for m_text, value in ctx.fixture("beta").items():
        if beta(int(m_text)) != Fraction(value):
            return False, f"beta_{m_text} = {beta(int(m_text))}, expected {value}"
    return report.passed, f"{report.checked} checks, {report.violations} violations"


def constant_algebra(ctx: AcceptanceContext) -> tuple[bool, str]:
    report = check_constants()
    return report.passed, f"{report.checked} identities in Q(sqrt 2)"


def h_lemma(ctx: AcceptanceContext) -> tuple[bool, str]:
    reports = run_bounds_verification(seed=ctx.seed)
    failed = [r.name for r in reports if not r.passed]
    return not failed, "failed: " + ", ".join(failed) if failed else f"{len(reports)} checks pass"


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    quick: bool
    check: Callable[[AcceptanceContext], tuple[bool, str]]


CRITERIA = (
    Criterion(1, "Gap-array worked example", True, gap_array_example),
    Criterion(2, "psi worked chain", True, psi_chain),
    Criterion(3, "G^lambda display and size formula", True, worst_array_display),
    Criterion(4, "Conjugation worked example", True, conjugation_example),
    Criterion(5, "Kernel dimensions of T_{J_lambda,J_mu}", True, jordan_kernel_dims),
    Criterion(6, "Burnside censuses", True, burnside_censuses),
    Criterion(7, "Worst-gap containment", False, worst_gap_containment),
    Criterion(8, "Inductive centralizer lemma", False, gap_lemma),
    Criterion(9, "r-validity of G^lambda and psi monotonicity", True, worst_array_validity),
    Criterion(10, "Shape-count bound and strata sums", True, shape_count_bounds),
    Criterion(11, "Class-count bounds", True, class_count_bounds),
    Criterion(12, "Class polynomial interpolation", False, class_polynomials),
    Criterion(13, "Commuting probability decomposition", False, lcs_identity),
    Criterion(14, "Rank-stratified bound", True, rank_bounds),
    Criterion(15, "beta and gamma sequences", True, exponent_sequences),
    Criterion(16, "Constant algebra", True, constant_algebra),
    Criterion(17, "h-lemma suite", True, h_lemma),
)


def run_criterion(criterion: Criterion, ctx: AcceptanceContext) -> CriterionResult:
    logger = get_logger()
    if not (criterion.quick or ctx.full):
        return CriterionResult(criterion.number, criterion.title, True, "full profile only", skipped=True)
    start = time.perf_counter()
    try:
        passed, detail = criterion.check(ctx)
    except (ArithmeticError, BudgetExceededError, KeyError, OSError, RuntimeError, ValueError) as err:
        passed, detail = False, f"{type(err).__name__}: {err}"
    result = CriterionResult(
        criterion.number, criterion.title, passed, detail, time.perf_counter() - start
    )
    if passed:
        logger.info("criterion %s (%s): pass in %.1fs", criterion.number, criterion.title, result.seconds)
    else:
        logger.error("criterion %s (%s) failed: %s", criterion.number, criterion.title, detail)
    return result


def verify_all(ctx: AcceptanceContext, only: tuple[int, ...] | None = None) -> VerificationReport:
    """Run the criteria of ctx.profile (or just the numbers in `only`).

    Raises:
        ValueError: If the profile is unknown.
    """
    if ctx.profile not in PROFILES:
        raise ValueError(f"--profile must be 'quick' or 'full' (got {ctx.profile})")
    report = VerificationReport(ctx.profile)
    for criterion in CRITERIA:
        if only is not None and criterion.number not in only:
            continue
        report.results.append(run_criterion(criterion, ctx))
    get_logger().info(
        "verify-all (%s): %s, %s failures", ctx.profile, "pass" if report.passed else "FAIL", len(report.failures)
    )
    return report
