"""Exact arithmetic in cyclotomic fields.

An element of Q(zeta_N) is stored in the power basis ``1, zeta, ...,
zeta^(phi(N)-1)`` reduced modulo the N-th cyclotomic polynomial.  Integer
numerators share one positive denominator, and the pair is kept coprime, so
two elements of the same order are equal exactly when their stored data
agree.

Products of long coefficient vectors go through numpy with int64 whenever a
cheap a-priori bound shows that no intermediate value can overflow; in every
other case plain Python integers are used.  Results are identical either
way.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import ParameterError

# vectors shorter than this are multiplied in pure Python, where numpy's
# call overhead would dominate
_NUMPY_MIN_DEGREE = 16
_INT64_SAFE = 2**62


def euler_phi(n: int) -> int:
    """Euler's totient function."""
    if n < 1:
        raise ParameterError(f"euler_phi needs n >= 1, got {n}")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def divisors(n: int) -> list[int]:
    """Positive divisors of n in increasing order."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _exact_poly_divide(num: list[int], den: Sequence[int]) -> list[int]:
    """Quotient of integer polynomials (low degree first) by a monic divisor."""
    num = list(num)
    deg = len(den) - 1
    quotient = [0] * (len(num) - deg)
    for k in range(len(num) - 1, deg - 1, -1):
        c = num[k]
        if c:
            quotient[k - deg] = c
            for j, dj in enumerate(den):
                num[k - deg + j] -= c * dj
    if any(num[:deg]):
        raise ArithmeticError("cyclotomic division left a remainder")
    return quotient


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d.
    """
    if n < 1:
        raise ParameterError(f"cyclotomic polynomial needs n >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly = _exact_poly_divide(poly, cyclotomic_coefficients(d))
    return tuple(poly)


class _FieldData:
    """Reduction tables for one cyclotomic order.

    ``rows[e]`` is x^e mod Phi_N for 0 <= e < N; since zeta^N = 1 this
    covers every exponent.
    """

    def __init__(self, order: int):
        self.order = order
        self.phi = euler_phi(order)
        phi_coeffs = cyclotomic_coefficients(order)
        rows = []
        cur = [1] + [0] * (self.phi - 1)
        for _ in range(order):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(self.phi):
                    cur[j] -= top * phi_coeffs[j]
        self.rows = rows
        self.sparse_rows = [[(j, v) for j, v in enumerate(r) if v] for r in rows]
        self.max_abs = max(max(abs(v) for v in r) for r in rows)
        self._matrix = None
        self._high = None

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.array(self.rows, dtype=np.int64)
        return self._matrix

    @property
    def high(self) -> np.ndarray:
        """Reduction rows for the exponents phi .. 2*phi - 2."""
        if self._high is None:
            idx = np.arange(self.phi, 2 * self.phi - 1) % self.order
            self._high = self.matrix[idx]
        return self._high


@lru_cache(maxsize=None)
def _field(order: int) -> _FieldData:
    return _FieldData(order)


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-v for v in nums]
        den = -den
    g = gcd(den, *nums)
    if g > 1:
        nums = [v // g for v in nums]
        den //= g
    return tuple(nums), den


def _combine_rows(fd: _FieldData, terms: Iterable[tuple[int, int]]) -> list[int]:
    """Sum of ``coeff * zeta^exponent`` over (exponent, coeff) pairs."""
    terms = [(e % fd.order, c) for e, c in terms if c]
    phi = fd.phi
    if not terms:
        return [0] * phi
    if phi >= _NUMPY_MIN_DEGREE and len(terms) > 2:
        bound = max(abs(c) for _, c in terms) * fd.max_abs * len(terms)
        if bound < _INT64_SAFE:
            exps = np.fromiter((e for e, _ in terms), dtype=np.int64, count=len(terms))
            coeffs = np.fromiter((c for _, c in terms), dtype=np.int64, count=len(terms))
            return (coeffs @ fd.matrix[exps]).tolist()
    out = [0] * phi
    for e, c in terms:
        if e < phi:
            out[e] += c
        else:
            for j, v in fd.sparse_rows[e]:
                out[j] += c * v
    return out


def _multiply(fd: _FieldData, a: Sequence[int], b: Sequence[int]) -> list[int]:
    phi = fd.phi
    nz_a = [(i, c) for i, c in enumerate(a) if c]
    nz_b = [(j, c) for j, c in enumerate(b) if c]
    if not nz_a or not nz_b:
        return [0] * phi
    if phi >= _NUMPY_MIN_DEGREE and len(nz_a) > 2 and len(nz_b) > 2:
        ma = max(abs(c) for _, c in nz_a)
        mb = max(abs(c) for _, c in nz_b)
        conv_bound = min(len(nz_a), len(nz_b)) * ma * mb
        if conv_bound * (1 + (phi - 1) * fd.max_abs) < _INT64_SAFE:
            conv = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
            low = conv[:phi]
            high = conv[phi:]
            if high.any():
                low = low + high @ fd.high
            return low.tolist()
    conv = [0] * (2 * phi - 1)
    for i, ca in nz_a:
        for j, cb in nz_b:
            conv[i + j] += ca * cb
    out = conv[:phi]
    for e in range(phi, 2 * phi - 1):
        c = conv[e]
        if c:
            for j, v in fd.sparse_rows[e % fd.order]:
                out[j] += c * v
    return out


class Cyclotomic:
    """An element of the cyclotomic field Q(zeta_order).

    Build elements with :meth:`from_coeffs`, :meth:`zeta` or
    :meth:`rational`.  Arithmetic between different orders lifts both
    operands to the lcm order first.

    Equality is exact and works across orders.  Hashing is only consistent
    with equality for elements of one fixed order, plus all rational
    elements (which hash like the matching :class:`Fraction`).  Mixed-order
    collections should be lifted to a common order first.
    """

    __slots__ = ("order", "_nums", "_den")

    def __init__(self, order: int, nums: Sequence[int], den: int = 1):
        """Low-level constructor: integer numerators over one denominator.

        ``nums`` may have any length; it is read as a polynomial in zeta and
        reduced modulo Phi_order.
        """
        if order < 1:
            raise ParameterError(f"cyclotomic order must be positive, got {order}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        fd = _field(order)
        if len(nums) != fd.phi:
            nums = _combine_rows(fd, enumerate(nums))
        self.order = order
        self._nums, self._den = _normalize(list(nums), den)

    # -- constructors -------------------------------------------------
    @classmethod
    def from_coeffs(cls, order: int, coeffs: Iterable) -> "Cyclotomic":
        """Element ``sum coeffs[j] * zeta^j`` with rational coefficients."""
        fracs = [Fraction(c) for c in coeffs]
        den = lcm(1, *(f.denominator for f in fracs))
        return cls(order, [int(f * den) for f in fracs], den)

    @classmethod
    def rational(cls, value, order: int = 1) -> "Cyclotomic":
        f = Fraction(value)
        return cls(order, [f.numerator] + [0] * (euler_phi(order) - 1), f.denominator)

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "Cyclotomic":
        """The root of unity exp(2*pi*i*power/order)."""
        fd = _field(order)
        return cls(order, list(fd.rows[power % order]))

    # -- accessors ----------------------------------------------------
    @property
    def numerators(self) -> tuple[int, ...]:
        return self._nums

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self._den) for v in self._nums)

    def is_zero(self) -> bool:
        return not any(self._nums)

    def is_rational(self) -> bool:
        return not any(self._nums[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._nums[0], self._den)

    def canonical_key(self) -> tuple:
        """Hashable data that identifies the element within its order."""
        return (self._nums, self._den)

    # -- order changes ------------------------------------------------
    def lift(self, order: int) -> "Cyclotomic":
        """The same number viewed in Q(zeta_order); order must be a multiple."""
        if order == self.order:
            return self
        if order % self.order:
            raise ParameterError(f"cannot lift order {self.order} into order {order}")
        step = order // self.order
        nums = _combine_rows(_field(order), ((j * step, c) for j, c in enumerate(self._nums)))
        return Cyclotomic(order, nums, self._den)

    def times_root_of_unity(self, power: int, order: int) -> "Cyclotomic":
        """``self * zeta_order^power``, lifted into Q(zeta_order) in one pass."""
        if order % self.order:
            raise ParameterError(f"cannot lift order {self.order} into order {order}")
        step = order // self.order
        nums = _combine_rows(_field(order), ((j * step + power, c) for j, c in enumerate(self._nums)))
        return Cyclotomic(order, nums, self._den)

    def restrict(self, order: int) -> "Cyclotomic | None":
        """Rewrite the element in Q(zeta_order) when it lies there, else None."""
        if self.order % order:
            raise ParameterError(f"order {order} does not divide {self.order}")
        if order == self.order:
            return self
        fd_big = _field(self.order)
        phi_small = euler_phi(order)
        step = self.order // order
        columns = [fd_big.rows[(j * step) % self.order] for j in range(phi_small)]
        rows = [[Fraction(columns[j][i]) for j in range(phi_small)] for i in range(fd_big.phi)]
        rhs = list(self.coeffs)
        sol = linalg.solve(rows, rhs)
        if sol is None:
            return None
        return Cyclotomic.from_coeffs(order, sol)

    def minimal_order(self) -> "Cyclotomic":
        """The same number in the smallest Q(zeta_d), d dividing the order."""
        for d in divisors(self.order):
            small = self.restrict(d)
            if small is not None:
                return small
        return self

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Cyclotomic | None":
        if isinstance(other, Cyclotomic):
            return other
        if isinstance(other, (int, Rational)):
            return Cyclotomic.rational(other, self.order)
        return None

    @staticmethod
    def _common(a: "Cyclotomic", b: "Cyclotomic") -> tuple["Cyclotomic", "Cyclotomic"]:
        if a.order == b.order:
            return a, b
        n = lcm(a.order, b.order)
        return a.lift(n), b.lift(n)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(self, other)
        den = lcm(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        return Cyclotomic(a.order, [x * fa + y * fb for x, y in zip(a._nums, b._nums)], den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-x for x in self._nums], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(self, other)
        if a.is_rational() or b.is_rational():
            if b.is_rational():
                a, b = b, a
            c = a._nums[0]
            return Cyclotomic(b.order, [c * x for x in b._nums], a._den * b._den)
        nums = _multiply(_field(a.order), a._nums, b._nums)
        return Cyclotomic(a.order, nums, a._den * b._den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return Cyclotomic.rational(1 / self.rational_value(), self.order)
        fd = _field(self.order)
        phi = fd.phi
        # column j of the multiplication matrix is self * zeta^j
        columns = []
        current = self
        z = Cyclotomic.zeta(self.order)
        for _ in range(phi):
            columns.append(current.coeffs)
            current = current * z
        rows = [[columns[j][i] for j in range(phi)] for i in range(phi)]
        sol = linalg.solve(rows, [Fraction(1)] + [Fraction(0)] * (phi - 1))
        if sol is None:
            raise ArithmeticError("multiplication matrix is singular")
        return Cyclotomic.from_coeffs(self.order, sol)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Cyclotomic.rational(1, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def galois(self, k: int) -> "Cyclotomic":
        """Image under the automorphism zeta -> zeta^k (k coprime to the order)."""
        if gcd(k, self.order) != 1:
            raise ParameterError(f"{k} is not a unit modulo {self.order}")
        nums = _combine_rows(_field(self.order), ((j * k, c) for j, c in enumerate(self._nums)))
        return Cyclotomic(self.order, nums, self._den)

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugate."""
        return self.galois(-1)

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.order == other.order:
            return self._nums == other._nums and self._den == other._den
        a, b = self._common(self, other)
        return a._nums == b._nums and a._den == b._den

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self._nums[0], self._den))
        return hash((self.order, self._nums, self._den))

    def __bool__(self):
        return not self.is_zero()

    # -- display ------------------------------------------------------
    def to_complex(self) -> complex:
        root = cmath.exp(2j * cmath.pi / self.order)
        return sum(complex(c) * root**j for j, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"Cyclotomic({self.order}, {list(self._nums)}, {self._den})"

    def __str__(self):
        if self.is_rational():
            return str(self.rational_value())
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if j == 0 else (f"z{self.order}" if j == 1 else f"z{self.order}^{j}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def as_cyclotomic(value, order: int = 1) -> Cyclotomic:
    """Coerce an int, Fraction or Cyclotomic into a Cyclotomic."""
    if isinstance(value, Cyclotomic):
        return value
    return Cyclotomic.rational(value, order)


def root_of_unity_exponent(value: Cyclotomic, modulus: int) -> int | None:
    """The e in [0, modulus) with value == zeta_modulus^e, or None."""
    target = lcm(value.order, modulus)
    lifted = value.lift(target)
    fd = _field(target)
    step = target // modulus
    key = lifted.canonical_key()
    if lifted.denominator != 1:
        return None
    for e in range(modulus):
        if fd.rows[e * step] == key[0]:
            return e
    return None


def common_order(values: Iterable[Cyclotomic]) -> int:
    return lcm(1, *(v.order for v in values))


def i_unit() -> Cyclotomic:
    """The imaginary unit, as zeta_4."""
    return Cyclotomic.zeta(4)


def sqrt_minus_three() -> Cyclotomic:
    """i*sqrt(3) = 1 + 2*zeta_3."""
    return Cyclotomic(3, [1, 2])


def sqrt_five() -> Cyclotomic:
    """sqrt(5) as the quadratic Gauss sum zeta - zeta^2 - zeta^3 + zeta^4 in Q(zeta_5)."""
    z = [Cyclotomic.zeta(5, k) for k in range(5)]
    return z[1] - z[2] - z[3] + z[4]
