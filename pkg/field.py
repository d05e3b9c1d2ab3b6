"""Exact arithmetic in the finite fields F_q, q = p^k.

Elements are encoded canonically as integers in [0, q): the base-p digits of
the encoding are the coefficients of the element in the polynomial basis
1, x, ..., x^(k-1) (constant term first). For k = 1 the encoding is the
residue itself. The encoding gives the total order used for deterministic
enumeration and for file I/O.

Extension fields use the lexicographically smallest monic irreducible
polynomial of degree k, coefficients compared from the constant term upward.

Classes:
    FieldSpec: An immutable description of F_q with cached lookup tables.
    FieldElement: A single element of a FieldSpec.
    FieldMismatchError: Raised when elements of different fields are combined.

Functions:
    make_field: The canonical FieldSpec for (p, k).
    field_for_order: The canonical FieldSpec for q.
    elements: All elements of a field in encoding order.
    add, neg, mul, inv: Scalar field operations.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import sympy.polys.galoistools as gf
from constants import MAX_EXTENSION_FIELD_ORDER, MAX_FIELD_ORDER
from sympy import factorint, isprime, mod_inverse
from sympy.polys.domains import ZZ


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


def factor_prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q = p^k, or None if q is not a prime power."""
    if q < 2:
        return None
    factors = factorint(q)
    if len(factors) != 1:
        return None
    ((p, k),) = factors.items()
    return int(p), int(k)


def _to_gf(coeffs) -> list[int]:
    """Constant-term-first coefficients to a galoistools dense polynomial."""
    return gf.gf_strip([ZZ(c) for c in reversed(coeffs)])


def _from_gf(poly, k: int) -> list[int]:
    """A galoistools polynomial of degree < k to k coefficients, constant term first."""
    digits = [int(c) for c in reversed(poly)]
    return digits + [0] * (k - len(digits))


def _monic_polynomials(degree: int, p: int):
    """Monic polynomials of the given degree, lexicographic from the constant term."""
    for lower in itertools.product(range(p), repeat=degree):
        yield lower + (1,)


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Irreducibility over F_p by trial division by monic polynomials of degree <= deg/2."""
    degree = len(poly) - 1
    if degree < 1:
        return False
    dividend = _to_gf(poly)
    for d in range(1, degree // 2 + 1):
        for divisor in _monic_polynomials(d, p):
            if not gf.gf_rem(dividend, _to_gf(divisor), p, ZZ):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """The lexicographically smallest monic irreducible polynomial of degree k over F_p."""
    for poly in _monic_polynomials(k, p):
        if is_irreducible(poly, p):
            return poly
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class FieldSpec:
    """The finite field F_q with q = p^k.

    Attributes:
        p (int): The characteristic.
        k (int): The extension degree.
        modulus (tuple[int, ...]): Coefficients of the defining polynomial, constant
            term first, monic of degree k. Empty for prime fields.
    """

    p: int
    k: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise ValueError(f"extension degree must be at least 1 (got {self.k})")
        if self.p**self.k > MAX_FIELD_ORDER:
            raise ValueError(f"field order {self.p}^{self.k} is above {MAX_FIELD_ORDER}")
        if self.k == 1:
            if self.modulus:
                raise ValueError("prime fields take an empty modulus")
            return
        if self.p**self.k > MAX_EXTENSION_FIELD_ORDER:
            raise ValueError(
                f"extension field order {self.p}^{self.k} is above {MAX_EXTENSION_FIELD_ORDER}"
            )
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise ValueError(f"modulus {self.modulus} is not monic of degree {self.k}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ValueError(f"modulus {self.modulus} has coefficients outside [0, {self.p})")
        if not is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def name(self) -> str:
        """The CLI name of the field, e.g. "q=4"."""
        return f"q={self.q}"

    def __str__(self) -> str:
        return f"F_{self.q}"

    @cached_property
    def place_values(self) -> np.ndarray:
        return np.array([self.p**i for i in range(self.k)], dtype=np.int64)

    @cached_property
    def digits(self) -> np.ndarray:
        """Row v holds the base-p digits of encoding v, least significant first."""
        values = np.arange(self.q, dtype=np.int64)
        return (values[:, None] // self.place_values[None, :]) % self.p

    @cached_property
    def add_table(self) -> np.ndarray:
        sums = (self.digits[:, None, :] + self.digits[None, :, :]) % self.p
        return sums @ self.place_values

    @cached_property
    def neg_table(self) -> np.ndarray:
        return ((-self.digits) % self.p) @ self.place_values

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.k == 1:
            values = np.arange(self.q, dtype=np.int64)
            return np.outer(values, values) % self.p
        modulus = _to_gf(self.modulus)
        polys = [_to_gf(row) for row in self.digits.tolist()]
        table = np.zeros((self.q, self.q), dtype=np.int64)
        for x, y in itertools.product(range(self.q), repeat=2):
            product = gf.gf_rem(gf.gf_mul(polys[x], polys[y], self.p, ZZ), modulus, self.p, ZZ)
            table[x, y] = int(np.dot(_from_gf(product, self.k), self.place_values))
        return table

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[v] is the inverse of v for v != 0; entry 0 is unused."""
        table = np.zeros(self.q, dtype=np.int64)
        for v in range(1, self.q):
            table[v] = self._scalar_inverse(v)
        return table

    def _scalar_inverse(self, v: int) -> int:
        if self.k == 1:
            return int(mod_inverse(int(v), self.p))
        result, base, exponent = 1, v, self.q - 2
        while exponent:
            if exponent & 1:
                result = int(self.mul_table[result, base])
            base = int(self.mul_table[base, base])
            exponent >>= 1
        return result

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, int(value))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    # Scalar operations on encodings.

    def add(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x + y) % self.p
        return int(self.add_table[x, y])

    def neg(self, x: int) -> int:
        if self.k == 1:
            return (-x) % self.p
        return int(self.neg_table[x])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x * y) % self.p
        return int(self.mul_table[x, y])

    def inv(self, x: int) -> int:
        if x % self.q == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.k == 1:
            return int(mod_inverse(int(x), self.p))
        return int(self.inv_table[x])

    # Vectorized operations on integer arrays of encodings.

    def v_add(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (x + y) % self.p
        return self.add_table[x, y]

    def v_neg(self, x: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (-x) % self.p
        return self.neg_table[x]

    def v_sub(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (x - y) % self.p
        return self.add_table[x, self.neg_table[y]]

    def v_mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (x * y) % self.p
        return self.mul_table[x, y]

    def v_sum(self, x: np.ndarray, axis: int) -> np.ndarray:
        if self.k == 1:
            return x.sum(axis=axis) % self.p
        return (self.digits[x].sum(axis=axis) % self.p) @ self.place_values

    def v_matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a @ b) % self.p
        return self.v_sum(self.mul_table[a[:, :, None], b[None, :, :]], axis=1)


@dataclass(frozen=True)
class FieldElement:
    """An element of F_q stored as its canonical encoding."""

    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise ValueError(f"encoding {self.value} is outside [0, {self.spec.q})")

    def _same_field(self, other: "FieldElement") -> None:
        if other.spec != self.spec:
            raise FieldMismatchError(f"cannot combine elements of {self.spec} and {other.spec}")

    def __add__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._same_field(other)
        return FieldElement(self.spec, self.spec.add(self.value, other.value))

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._same_field(other)
        return FieldElement(self.spec, self.spec.sub(self.value, other.value))

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._same_field(other)
        return FieldElement(self.spec, self.spec.mul(self.value, other.value))

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self * other.inverse()

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldSpec:
    """Return the canonical F_{p^k}.

    Raises:
        ValueError: If p is not prime or k < 1.
    """
    if not isprime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree must be at least 1 (got {k})")
    if k == 1:
        return FieldSpec(p)
    return FieldSpec(p, k, smallest_irreducible(p, k))


def field_for_order(q: int) -> FieldSpec:
    """Return the canonical field with q elements.

    Raises:
        ValueError: If q is not a prime power.
    """
    factors = factor_prime_power(q)
    if factors is None:
        raise ValueError(f"{q} is not a prime power")
    return make_field(*factors)


def parse_field_name(text: str) -> FieldSpec:
    """Parse the CLI field notation "q=<p^k>" (a bare integer is accepted too)."""
    text = text.strip()
    if text.startswith("q="):
        text = text[2:]
    try:
        q = int(text)
    except ValueError as err:
        raise ValueError(f"field name '{text}' is not of the form q=<p^k>") from err
    return field_for_order(q)


def elements(spec: FieldSpec) -> list[FieldElement]:
    """All q elements of the field in increasing encoding order."""
    return [FieldElement(spec, v) for v in range(spec.q)]


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse.

    Raises:
        ZeroDivisionError: If a is zero.
    """
    return a.inverse()


def multiplicative_order(a: FieldElement) -> int:
    """Order of a nonzero element in the multiplicative group."""
    if a.is_zero():
        raise ZeroDivisionError("zero has no multiplicative order")
    order, power = 1, a
    while power.value != 1:
        power = power * a
        order += 1
    return order
