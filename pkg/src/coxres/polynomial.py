"""Sparse multivariate (Laurent) polynomials with cyclotomic coefficients."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .cyclotomic import Cyclotomic, as_cyclotomic, cyclotomic_coefficients
from .errors import ParameterError

Exponent = tuple[int, ...]


class MultiPoly:
    """A polynomial in named variables, stored as exponent tuple -> coefficient.

    Exponent tuples are dense and follow ``variables``.  Negative exponents
    are allowed, which turns the class into a Laurent polynomial ring; this
    is how torus characters are represented.  Zero coefficients are never
    stored, so equality is a dictionary comparison.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ParameterError(f"repeated variable names in {self.variables}")
        clean: dict[Exponent, Cyclotomic] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(self.variables):
                raise ParameterError(f"exponent {exp} does not match variables {self.variables}")
            c = as_cyclotomic(coeff)
            if not c.is_zero():
                clean[exp] = clean[exp] + c if exp in clean else c
                if clean[exp].is_zero():
                    del clean[exp]
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        idx = tuple(variables).index(name)
        return cls(variables, {tuple(int(k == idx) for k in range(len(variables))): 1})

    @classmethod
    def monomial(cls, variables: Sequence[str], exponent: Sequence[int], coeff=1) -> "MultiPoly":
        return cls(variables, {tuple(exponent): coeff})

    @classmethod
    def generators(cls, variables: Sequence[str]) -> list["MultiPoly"]:
        return [cls.variable(variables, v) for v in variables]

    # -- inspection ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def total_degree(self) -> int:
        if not self.terms:
            raise ParameterError("zero polynomial has no degree")
        return max(self.degrees())

    def coefficient(self, exponent: Sequence[int]) -> Cyclotomic:
        return self.terms.get(tuple(exponent), Cyclotomic.rational(0))

    def sorted_terms(self) -> list[tuple[Exponent, Cyclotomic]]:
        """Terms in decreasing lexicographic exponent order (deterministic)."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-embed into a larger (or reordered) variable list."""
        variables = tuple(variables)
        missing = [v for v in self.variables if v not in variables]
        pos = [variables.index(v) for v in self.variables if v in variables]
        for exp in self.terms:
            for v, e in zip(self.variables, exp):
                if e and v in missing:
                    raise ParameterError(f"variable {v} is used but absent from {variables}")
        out = {}
        keep = [k for k, v in enumerate(self.variables) if v in variables]
        for exp, c in self.terms.items():
            new = [0] * len(variables)
            for k, p in zip(keep, pos):
                new[p] = exp[k]
            out[tuple(new)] = c
        return MultiPoly(variables, out)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ParameterError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Rational, Cyclotomic)):
            return MultiPoly.constant(self.variables, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return MultiPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

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
        if isinstance(other, (int, Rational, Cyclotomic)):
            c = as_cyclotomic(other)
            return MultiPoly(self.variables, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Exponent, Cyclotomic] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                out[e] = out[e] + prod if e in out else prod
        return MultiPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if not self.is_monomial():
                raise ParameterError("only monomials can be raised to negative powers")
            (e, c), = self.terms.items()
            return MultiPoly(self.variables, {tuple(k * exponent for k in e): c.inverse() ** -exponent})
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Rational, Cyclotomic)):
            other = MultiPoly.constant(self.variables, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if other.variables != self.variables:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def proportionality_constant(self, other: "MultiPoly") -> Cyclotomic | None:
        """The c with self == c * other, or None when they are not proportional."""
        if other.is_zero():
            return None if not self.is_zero() else Cyclotomic.rational(0)
        if set(self.terms) != set(other.terms):
            return None
        exp = next(iter(other.terms))
        c = self.terms[exp] / other.terms[exp]
        return c if self == other * c else None

    # -- display ------------------------------------------------------
    def __repr__(self):
        return f"MultiPoly({self.variables}, {len(self.terms)} terms)"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exp) if e
            )
            if not mono:
                pieces.append(f"({c})" if not c.is_rational() else str(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            elif c.is_rational():
                pieces.append(f"{c}*{mono}")
            else:
                pieces.append(f"({c})*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")


def poly_substitute(poly: MultiPoly, assignment: Mapping[str, MultiPoly]) -> MultiPoly:
    """Replace every variable of ``poly`` by the assigned polynomial.

    All assigned polynomials must share one variable list, which becomes the
    variable list of the result.  Coefficients from different cyclotomic
    orders are lifted to their lcm automatically.
    """
    missing = [v for v in poly.variables if v not in assignment]
    if missing:
        raise ParameterError(f"no value assigned to {missing}")
    targets = {tuple(assignment[v].variables) for v in poly.variables}
    if len(targets) > 1:
        raise ParameterError("assigned polynomials use different variable lists")
    target_vars = targets.pop() if targets else ()
    cache: dict[tuple[str, int], MultiPoly] = {}

    def power(var: str, k: int) -> MultiPoly:
        if (var, k) not in cache:
            if k in (0, 1) or k < 0:
                cache[(var, k)] = assignment[var] ** k
            else:
                half = power(var, k // 2)
                sq = half * half
                cache[(var, k)] = sq * assignment[var] if k % 2 else sq
        return cache[(var, k)]

    result = MultiPoly(target_vars)
    for exp, coeff in poly.terms.items():
        term = MultiPoly.constant(target_vars, coeff)
        for var, k in zip(poly.variables, exp):
            if k:
                term = term * power(var, k)
        result = result + term
    return result


def cyclotomic_polynomial(n: int, variable: str = "x") -> MultiPoly:
    """Phi_n as a univariate rational polynomial."""
    coeffs = cyclotomic_coefficients(n)
    return MultiPoly((variable,), {(k,): c for k, c in enumerate(coeffs) if c})


def linear_form(variables: Sequence[str], coefficients: Iterable) -> MultiPoly:
    """``sum c_k * variables[k]``."""
    terms = {}
    for k, c in enumerate(coefficients):
        terms[tuple(int(j == k) for j in range(len(variables)))] = c
    return MultiPoly(variables, terms)


def rational_poly(variables: Sequence[str], terms: Mapping[Exponent, object]) -> MultiPoly:
    """Convenience constructor for rational coefficients given as ints/Fractions."""
    return MultiPoly(variables, {e: Fraction(c) for e, c in terms.items()})
