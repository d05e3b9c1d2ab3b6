"""Exact checks of the analytic inequalities behind the class-count bounds.

Everything here is exact: rationals are fractions.Fraction and the constants
of the main bound live in Q(sqrt 2) as QuadraticNumber values.
"""

import math
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from constants import DEFAULT_SEED
from gaparray import g_worst
from logging_config import get_logger
from partitions import (
    RationalVector,
    as_vector,
    conjugate,
    h_value,
    n_stat,
    norm_sq,
    partitions_of,
    shift,
    subtract,
)

MAX_WITNESSES = 10
HOMOGENEITY_SCALARS = (Fraction(-2), Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(3))


@dataclass(frozen=True)
class QuadraticNumber:
    """a + b sqrt(2) with rational a and b."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def _coerce(other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(Fraction(other))
        raise TypeError(f"cannot combine QuadraticNumber with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        return QuadraticNumber(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return QuadraticNumber(self.a * other.a + 2 * self.b * other.b, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """a^2 - 2 b^2, zero only for zero."""
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> "QuadraticNumber":
        norm = self.norm()
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt 2)")
        return QuadraticNumber(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def sign(self) -> int:
        """-1, 0 or 1, decided by comparing a^2 with 2 b^2."""
        sign_a = (self.a > 0) - (self.a < 0)
        sign_b = (self.b > 0) - (self.b < 0)
        if sign_b == 0:
            return sign_a
        if sign_a == 0 or sign_a == sign_b:
            return sign_b
        norm = self.norm()
        # a and b have opposite signs, so the larger of |a| and |b| sqrt(2) wins
        return sign_a if norm > 0 else sign_b

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadraticNumber(Fraction(other))
        if not isinstance(other, QuadraticNumber):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2)

    def floor(self) -> int:
        """The largest integer m with m <= self."""
        guess = math.floor(float(self))
        while QuadraticNumber(guess) > self:
            guess -= 1
        while QuadraticNumber(guess + 1) <= self:
            guess += 1
        return guess

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*sqrt(2)"


SQRT2 = QuadraticNumber(0, 1)
# epsilon = 2 delta = (4/21)(5 - 3 sqrt 2)
EPSILON = Fraction(4, 21) * (5 - 3 * SQRT2)
DELTA = EPSILON / 2
ALPHA = Fraction(4, 49) + Fraction(20, 49) * SQRT2
# exponent constant of the main class-count bound
C_CONSTANT = Fraction(20, 49) * SQRT2 - Fraction(41, 98)
ROUNDED_CONSTANT = Fraction(7, 44)


@dataclass
class CheckReport:
    """Pass/fail of one named check plus up to MAX_WITNESSES violations."""

    name: str
    checked: int = 0
    witnesses: list[dict] = field(default_factory=list)
    violations: int = 0

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def fail(self, witness: dict) -> None:
        self.violations += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "violations": self.violations,
            "witnesses": self.witnesses,
        }


def _entry(v: Sequence[Fraction], i: int) -> Fraction:
    return Fraction(v[i - 1]) if 1 <= i <= len(v) else Fraction(0)


def h_partials(v: Sequence, i: int) -> Fraction:
    """dh/dv_1 = 2 v_2 and dh/dv_i = 2 v_{i-1} - 2 v_i + 2 v_{i+1} for i >= 2."""
    if i < 1:
        raise ValueError(f"partial derivative index must be >= 1, got {i}")
    if i == 1:
        return 2 * _entry(v, 2)
    return 2 * _entry(v, i - 1) - 2 * _entry(v, i) + 2 * _entry(v, i + 1)


def l1_norm(v: Sequence) -> Fraction:
    return sum((Fraction(x) for x in v), Fraction(0))


def in_domain(v: Sequence) -> bool:
    """Nonnegative and weakly decreasing."""
    values = [Fraction(x) for x in v]
    return all(x >= 0 for x in values) and all(x >= y for x, y in zip(values, values[1:]))


def reduction_gap(v: Sequence) -> tuple[Fraction, Fraction]:
    """Both sides of ||v||_1 v_1 - 3/4 v_1^2 - h(w) = 1/4 (2||v||_1 - 3 v_1 - 4 v_3)^2.

    w = (v_1, ||v||_1 - v_1 - v_3, v_3).
    """
    s, v1, v3 = l1_norm(v), _entry(v, 1), _entry(v, 3)
    w = (v1, s - v1 - v3, v3)
    left = s * v1 - Fraction(3, 4) * v1 * v1 - h_value(w)
    right = Fraction(1, 4) * (2 * s - 3 * v1 - 4 * v3) ** 2
    return left, right


def check_h_lemma(samples: Iterable[Sequence]) -> list[CheckReport]:
    """The five pointwise parts of the h-lemma and the reduction identity.

    Parts 4 and 5 only apply where v_1 >= ||v||_1 / 2.

    Raises:
        ValueError: If a sample is negative or not weakly decreasing.
    """
    names = (
        "homogeneity",
        "first_partial_dominates",
        "second_coordinate_bound",
        "second_partial_dominates",
        "first_coordinate_bound",
        "reduction_identity",
    )
    reports = {name: CheckReport(f"h_lemma.{name}") for name in names}
    for sample in samples:
        if not in_domain(sample):
            raise ValueError(f"sample {list(sample)} is not a nonnegative decreasing vector")
        v = as_vector(sample)
        shown = [str(x) for x in v]
        h = h_value(v)
        s = l1_norm(v)
        v1, v2 = _entry(v, 1), _entry(v, 2)
        tail = range(3, len(v) + 2)

        report = reports["homogeneity"]
        for c in HOMOGENEITY_SCALARS:
            report.checked += 1
            if h_value([c * x for x in v]) != c * c * h:
                report.fail({"v": shown, "c": str(c)})

        report = reports["first_partial_dominates"]
        report.checked += 1
        if any(h_partials(v, 1) < h_partials(v, k) for k in tail):
            report.fail({"v": shown})

        report = reports["second_coordinate_bound"]
        report.checked += 1
        if h > 2 * s * v2 - 3 * v2 * v2:
            report.fail({"v": shown, "h": str(h)})

        report = reports["reduction_identity"]
        report.checked += 1
        left, right = reduction_gap(v)
        if left != right:
            report.fail({"v": shown, "left": str(left), "right": str(right)})

        if 2 * v1 < s:
            continue
        report = reports["second_partial_dominates"]
        report.checked += 1
        if any(h_partials(v, 2) < h_partials(v, k) for k in range(4, len(v) + 2)):
            report.fail({"v": shown})

        report = reports["first_coordinate_bound"]
        report.checked += 1
        if h > s * v1 - Fraction(3, 4) * v1 * v1:
            report.fail({"v": shown, "h": str(h)})
    return list(reports.values())


def conjugate_vectors(n_max: int) -> list[RationalVector]:
    """lambda' as a rational vector for every lambda of n <= n_max."""
    return [
        as_vector(conjugate(lam).parts) for n in range(1, n_max + 1) for lam in partitions_of(n)
    ]


def random_samples(count: int, seed: int = DEFAULT_SEED, max_length: int = 8) -> list[RationalVector]:
    """Seeded nonnegative decreasing rational vectors."""
    rng = random.Random(seed)
    samples = []
    for _ in range(count):
        length = rng.randint(1, max_length)
        denominator = rng.randint(1, 12)
        numerators = sorted((rng.randint(0, 24) for _ in range(length)), reverse=True)
        samples.append(as_vector(Fraction(x, denominator) for x in numerators))
    return samples


def _h_integer(v: Sequence[int]) -> int:
    """h on an integer vector: 2 sum v_i v_{i+1} - sum_{i>=2} v_i^2."""
    return 2 * sum(x * y for x, y in zip(v, v[1:])) - sum(x * x for x in v[1:])


def check_max_third(n_max: int) -> CheckReport:
    """3 h(lambda') <= n^2 for every lambda of n <= n_max."""
    report = CheckReport("max_third")
    for n in range(1, n_max + 1):
        for lam in partitions_of(n):
            report.checked += 1
            h = _h_integer(conjugate(lam).parts)
            if 3 * h > n * n:
                report.fail({"lambda": str(lam), "h": str(h)})
    return report


def check_constants() -> CheckReport:
    """The Q(sqrt 2) algebra fixing c = 20 sqrt(2)/49 - 41/98."""
    report = CheckReport("constants")
    two_thirds, third = Fraction(2, 3), Fraction(1, 3)
    exponents = {
        "2/3 - 3/2 delta^2": two_thirds - Fraction(3, 2) * DELTA * DELTA,
        "2/3 - 3/8 epsilon^2": two_thirds - Fraction(3, 8) * EPSILON * EPSILON,
        "1 - (2/3 - epsilon)^2 - (1/3 - delta)^2": 1
        - (two_thirds - EPSILON) * (two_thirds - EPSILON)
        - (third - DELTA) * (third - DELTA),
    }
    for label, value in exponents.items():
        report.checked += 1
        if value != ALPHA:
            report.fail({"expression": label, "value": str(value)})
    claims = {
        "c = alpha - 1/2": C_CONSTANT == ALPHA - Fraction(1, 2),
        "c < 7/44": C_CONSTANT < ROUNDED_CONSTANT,
        "0 < delta": DELTA > 0,
        "delta < epsilon": DELTA < EPSILON,
        "epsilon < 1/6": EPSILON < Fraction(1, 6),
    }
    for label, holds in claims.items():
        report.checked += 1
        if not holds:
            report.fail({"claim": label})
    return report


def g_exponent_sides(lam) -> tuple[Fraction, Fraction]:
    """n l - n/2 - n(lambda) - |G^lambda| and -l/2 + (||lambda'||^2 - ||lambda' - L lambda'||^2)/2."""
    n, ell = lam.size, len(lam)
    lam_c = conjugate(lam).parts
    left = Fraction(n * ell) - Fraction(n, 2) - n_stat(lam) - g_worst(lam).size
    right = Fraction(-ell, 2) + Fraction(norm_sq(lam_c) - norm_sq(subtract(lam_c, shift(lam_c))), 2)
    return left, right


def check_g_exponent_identity(n_max: int) -> CheckReport:
    """The exponent chain of the h-bound, as an equality and then the inequality."""
    report = CheckReport("g_exponent_identity")
    for n in range(1, n_max + 1):
        for lam in partitions_of(n):
            report.checked += 1
            left, right = g_exponent_sides(lam)
            if left != right or left > h_value(conjugate(lam).parts) / 2:
                report.fail({"lambda": str(lam), "left": str(left), "right": str(right)})
    return report


def main_bound_exponent(n: int) -> int:
    """floor(c n^2 + n/2)."""
    return (C_CONSTANT * (n * n) + Fraction(n, 2)).floor()


def rounded_bound_exponent(n: int) -> int:
    """floor(7 n^2 / 44 + n/2)."""
    return math.floor(ROUNDED_CONSTANT * n * n + Fraction(n, 2))


def run_bounds_verification(
    h_n_max: int = 16,
    third_n_max: int = 40,
    g_n_max: int = 14,
    random_count: int = 10_000,
    seed: int = DEFAULT_SEED,
) -> list[CheckReport]:
    """Every bounds check, as run by the bounds-verify command."""
    logger = get_logger()
    samples = conjugate_vectors(h_n_max) + random_samples(random_count, seed)
    reports = check_h_lemma(samples)
    reports.append(check_max_third(third_n_max))
    reports.append(check_constants())
    reports.append(check_g_exponent_identity(g_n_max))
    for report in reports:
        logger.info("%s: %s (%s checked)", report.name, "pass" if report.passed else "FAIL", report.checked)
    return reports
