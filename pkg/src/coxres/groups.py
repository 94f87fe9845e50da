"""Finite small subgroups of GL(2, C): construction, enumeration, structure.

Families and their sizes:

* ``C(n, q)``  cyclic, generated by diag(e_n, e_n^q), order n
* ``BD(n, m)`` binary dihedral twists, order 4nm
* ``BT(m)``    binary tetrahedral twists, order 24m
* ``BO(m)``    binary octahedral twists, order 48m
* ``BI(m)``    binary icosahedral twists, order 120m

Every non-cyclic group is a fibre product: the scalars Z_K = <e_K * I>
times an SL(2) core H2, keeping the pairs whose classes in Z_K/N1 and
H2/N2 correspond.  The elements are the products e_K^k * h with h in the
coset of N2 attached to k.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import Cyclotomic, sqrt_five
from .errors import (
    EnumerationSizeError,
    InadmissibleGroupError,
    ParameterError,
    UnsupportedFamilyError,
)
from .intmatrix import IntMatrix, smith_normal_form

DEFAULT_ENUM_CAP = 10_000
FAMILIES = ("C", "BD", "BT", "BO", "BI")
_PARAM_COUNT = {"C": 2, "BD": 2, "BT": 1, "BO": 1, "BI": 1}


def enumeration_cap() -> int:
    """Element cap for closures; the COXRES_ENUM_CAP variable overrides it."""
    raw = os.environ.get("COXRES_ENUM_CAP")
    if raw is None:
        return DEFAULT_ENUM_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ParameterError(f"COXRES_ENUM_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ParameterError("COXRES_ENUM_CAP must be positive")
    return cap


# ---------------------------------------------------------------------------
# group parameters


@dataclass(frozen=True)
class GroupSpec:
    """A family name with its positive integer parameters.

    Construction checks admissibility, so every existing spec is valid.
    """

    family: str
    params: tuple[int, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        params = tuple(int(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if len(params) != _PARAM_COUNT[self.family]:
            raise ParameterError(
                f"{self.family} takes {_PARAM_COUNT[self.family]} parameter(s), got {len(params)}"
            )
        if any(p < 1 for p in params):
            raise InadmissibleGroupError(f"{self.label}: parameters must be positive integers")
        self._check_admissible()

    def _check_admissible(self) -> None:
        p = self.params
        if self.family == "C":
            n, q = p
            if not 1 <= q < n:
                raise InadmissibleGroupError(f"{self.label}: need 1 <= q < n")
            if gcd(n, q) != 1:
                raise InadmissibleGroupError(f"{self.label}: need gcd(n, q) = 1, got {gcd(n, q)}")
        elif self.family == "BD":
            n, m = p
            if n < 2:
                raise InadmissibleGroupError(f"{self.label}: need n >= 2")
            if gcd(n, m) != 1:
                raise InadmissibleGroupError(f"{self.label}: need gcd(n, m) = 1, got {gcd(n, m)}")
        elif self.family == "BT":
            g = gcd(p[0], 6)
            if g not in (1, 3):
                raise InadmissibleGroupError(f"{self.label}: need gcd(m, 6) in {{1, 3}}, got {g}")
        elif self.family == "BO":
            g = gcd(p[0], 6)
            if g != 1:
                raise InadmissibleGroupError(f"{self.label}: need gcd(m, 6) = 1, got {g}")
        elif self.family == "BI":
            g = gcd(p[0], 30)
            if g != 1:
                raise InadmissibleGroupError(f"{self.label}: need gcd(m, 30) = 1, got {g}")

    # constructors ---------------------------------------------------
    @classmethod
    def cyclic(cls, n: int, q: int) -> "GroupSpec":
        return cls("C", (n, q))

    @classmethod
    def bd(cls, n: int, m: int) -> "GroupSpec":
        return cls("BD", (n, m))

    @classmethod
    def bt(cls, m: int) -> "GroupSpec":
        return cls("BT", (m,))

    @classmethod
    def bo(cls, m: int) -> "GroupSpec":
        return cls("BO", (m,))

    @classmethod
    def bi(cls, m: int) -> "GroupSpec":
        return cls("BI", (m,))

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse ``BD:n,m``, ``BT:m``, ``BO:m``, ``BI:m`` or ``C:n,q``."""
        family, sep, rest = text.strip().partition(":")
        family = family.strip().upper()
        if not sep or family not in FAMILIES:
            raise ParameterError(f"cannot parse group {text!r}; use e.g. BD:23,39 or C:5,2")
        try:
            params = tuple(int(x) for x in rest.split(","))
        except ValueError as exc:
            raise ParameterError(f"non-integer parameter in {text!r}") from exc
        if len(params) != _PARAM_COUNT[family]:
            raise ParameterError(f"{family} takes {_PARAM_COUNT[family]} parameter(s) in {text!r}")
        return cls(family, params)

    # accessors ------------------------------------------------------
    @property
    def label(self) -> str:
        return f"{self.family}:{','.join(str(p) for p in self.params)}"

    @property
    def m(self) -> int:
        if self.family == "C":
            raise UnsupportedFamilyError("cyclic groups have no twist parameter m")
        return self.params[-1]

    @property
    def n(self) -> int:
        if self.family not in ("C", "BD"):
            raise UnsupportedFamilyError(f"{self.family} has no parameter n")
        return self.params[0]

    @property
    def is_cyclic(self) -> bool:
        return self.family == "C"

    def expected_order(self) -> int:
        """Closed-form group order."""
        f, p = self.family, self.params
        if f == "C":
            return p[0]
        if f == "BD":
            return 4 * p[0] * p[1]
        return {"BT": 24, "BO": 48, "BI": 120}[f] * p[0]

    def __str__(self) -> str:
        return self.label


# ---------------------------------------------------------------------------
# 2x2 matrices over cyclotomic fields


class MatrixElement:
    """An invertible 2x2 matrix with entries in one cyclotomic field.

    Entries are stored row-major ``(a, b, c, d)`` and lifted to a common
    order, so equality of two elements of the same order is a comparison of
    canonical coefficient vectors.
    """

    __slots__ = ("entries", "order")

    def __init__(self, a, b, c, d, order: int | None = None):
        vals = [x if isinstance(x, Cyclotomic) else Cyclotomic.rational(x) for x in (a, b, c, d)]
        target = lcm(*(v.order for v in vals)) if order is None else order
        self.entries = tuple(v.lift(target) for v in vals)
        self.order = target

    @classmethod
    def identity(cls, order: int = 1) -> "MatrixElement":
        return cls(1, 0, 0, 1, order)

    @classmethod
    def diagonal(cls, x, y) -> "MatrixElement":
        return cls(x, 0, 0, y)

    @classmethod
    def scalar(cls, x) -> "MatrixElement":
        return cls(x, 0, 0, x)

    def __mul__(self, other: "MatrixElement") -> "MatrixElement":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return MatrixElement(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def scale(self, factor: Cyclotomic) -> "MatrixElement":
        return MatrixElement(*(factor * x for x in self.entries))

    def twisted(self, power: int, order: int) -> "MatrixElement":
        """``zeta_order^power * self``, lifted into Q(zeta_order)."""
        return MatrixElement(*(x.times_root_of_unity(power, order) for x in self.entries), order=order)

    def det(self) -> Cyclotomic:
        a, b, c, d = self.entries
        return a * d - b * c

    def trace(self) -> Cyclotomic:
        return self.entries[0] + self.entries[3]

    def inverse(self) -> "MatrixElement":
        a, b, c, d = self.entries
        inv_det = self.det().inverse()
        return MatrixElement(d * inv_det, -b * inv_det, -c * inv_det, a * inv_det)

    def lift(self, order: int) -> "MatrixElement":
        return MatrixElement(*self.entries, order=order)

    def minimal_order(self) -> "MatrixElement":
        """The same matrix over the smallest cyclotomic field holding all entries."""
        from .cyclotomic import divisors

        for d in divisors(self.order):
            small = [x.restrict(d) for x in self.entries]
            if all(s is not None for s in small):
                return MatrixElement(*small, order=d)
        return self

    def is_identity(self) -> bool:
        a, b, c, d = self.entries
        return a == 1 and b == 0 and c == 0 and d == 1

    def key(self) -> tuple:
        """Canonical hashable form (valid within one cyclotomic order)."""
        return tuple(x.canonical_key() for x in self.entries)

    def __eq__(self, other):
        if not isinstance(other, MatrixElement):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.order, self.key()))

    def __repr__(self):
        return "MatrixElement(" + ", ".join(str(x) for x in self.entries) + ")"


def _diag_root(order: int, p: int = 1, q: int = -1) -> MatrixElement:
    return MatrixElement.diagonal(Cyclotomic.zeta(order, p), Cyclotomic.zeta(order, q))


def matrix_b() -> MatrixElement:
    """B = [[0, 1], [-1, 0]]."""
    return MatrixElement(0, 1, -1, 0)


def matrix_c() -> MatrixElement:
    """C = 1/2 [[1+i, -1+i], [1+i, 1-i]], the order-6 generator of BT over BD_2."""
    i = Cyclotomic.zeta(4)
    half = Cyclotomic.rational(Fraction(1, 2))
    return MatrixElement(half * (1 + i), half * (i - 1), half * (1 + i), half * (1 - i))


def icosahedral_pair() -> tuple[MatrixElement, MatrixElement]:
    """Order-5 diagonal element and order-4 golden-ratio element generating BI.

    Both live in Q(zeta_5); sqrt(5) is the quadratic Gauss sum.
    """
    z = [Cyclotomic.zeta(5, k) for k in range(5)]
    s = MatrixElement.diagonal(z[3], z[2])
    inv_root5 = sqrt_five() * Cyclotomic.rational(Fraction(1, 5))
    t = MatrixElement(
        -(z[1] - z[4]) * inv_root5,
        (z[2] - z[3]) * inv_root5,
        (z[2] - z[3]) * inv_root5,
        (z[1] - z[4]) * inv_root5,
    )
    return s, t


# ---------------------------------------------------------------------------
# group tables


class GroupTable:
    """A finite matrix group with its full multiplication table.

    ``elements`` is sorted by canonical key; ``table[i, j]`` is the index of
    ``elements[i] * elements[j]``.
    """

    def __init__(self, elements: list[MatrixElement], table: np.ndarray, generators: Sequence[int] = ()):
        self.elements = elements
        self.table = table
        self.order_field = elements[0].order if elements else 1
        self._index = {e.key(): k for k, e in enumerate(elements)}
        ident = self._index.get(MatrixElement.identity(self.order_field).key())
        if ident is None:
            raise ParameterError("group table lacks the identity")
        self.identity = ident
        self.inverse = np.argmax(table == ident, axis=1).astype(np.int64)
        self.generators = tuple(int(g) for g in generators) or tuple(greedy_generators(self))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of(self, element: MatrixElement) -> int:
        """Position of an element (lifted to the table's field) or KeyError."""
        if self.order_field % element.order:
            element = element.minimal_order()
        return self._index[element.lift(self.order_field).key()]

    def contains(self, element: MatrixElement) -> bool:
        if self.order_field % element.order:
            return False
        return element.lift(self.order_field).key() in self._index

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def element_orders(self) -> np.ndarray:
        """Order of each element, computed from the table."""
        n = len(self)
        orders = np.zeros(n, dtype=np.int64)
        current = np.arange(n)
        idx = np.arange(n)
        for k in range(1, n + 1):
            hit = (current == self.identity) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            current = self.table[current, idx]
        return orders

    def subgroup(self, indices: Iterable[int], generators: Sequence[int] = ()) -> "GroupTable":
        """The sub-table on the given (closed) index set."""
        idx = sorted(int(i) for i in indices)
        position = np.full(len(self), -1, dtype=np.int64)
        position[idx] = np.arange(len(idx))
        sub = position[self.table[np.ix_(idx, idx)]]
        if (sub < 0).any():
            raise ParameterError("index set is not closed under multiplication")
        gens = [int(position[g]) for g in generators]
        return GroupTable([self.elements[i] for i in idx], sub, gens)


def _sorted_table(elements: list[MatrixElement], table: np.ndarray, generators: Sequence[int]) -> GroupTable:
    keys = [e.key() for e in elements]
    perm = sorted(range(len(elements)), key=keys.__getitem__)
    perm_arr = np.array(perm, dtype=np.int64)
    new_pos = np.empty(len(perm), dtype=np.int64)
    new_pos[perm_arr] = np.arange(len(perm))
    new_table = new_pos[table[np.ix_(perm_arr, perm_arr)]]
    return GroupTable([elements[p] for p in perm], new_table, [int(new_pos[g]) for g in generators])


def closure(generators: Sequence[MatrixElement], cap: int | None = None) -> GroupTable:
    """Close a generating set under multiplication (exact products).

    Builds the right Cayley action of the generators, then composes it
    along the breadth-first tree to fill the whole multiplication table.
    """
    cap = enumeration_cap() if cap is None else cap
    order = lcm(1, *(g.order for g in generators))
    gens = [g.lift(order) for g in generators]
    ident = MatrixElement.identity(order)
    elements = [ident]
    index = {ident.key(): 0}
    parent: list[tuple[int, int]] = [(-1, -1)]
    right: list[list[int]] = [[] for _ in gens]
    i = 0
    while i < len(elements):
        current = elements[i]
        for s, g in enumerate(gens):
            prod = current * g
            k = prod.key()
            j = index.get(k)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise EnumerationSizeError(f"closure exceeded the cap of {cap} elements")
                index[k] = j
                elements.append(prod)
                parent.append((i, s))
            right[s].append(j)
        i += 1
    n = len(elements)
    right_arr = [np.array(r, dtype=np.int64) for r in right]
    table = np.empty((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    for j in range(1, n):
        p, s = parent[j]
        table[:, j] = right_arr[s][table[:, p]]
    gen_idx = [index[g.key()] for g in gens]
    return _sorted_table(elements, table, gen_idx)


def subgroup_closure(group: GroupTable, generators: Iterable[int]) -> set[int]:
    """Indices of the subgroup generated by the given indices."""
    gens = [int(g) for g in generators]
    found = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            row = group.table[x]
            for g in gens:
                y = int(row[g])
                if y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return found


def greedy_generators(group: GroupTable) -> list[int]:
    """A small generating set: scan elements by decreasing order, keep new ones."""
    orders = group.element_orders()
    candidates = sorted(range(len(group)), key=lambda k: (-int(orders[k]), k))
    gens: list[int] = []
    span = {group.identity}
    for c in candidates:
        if len(span) == len(group):
            break
        if c not in span:
            gens.append(c)
            span = subgroup_closure(group, gens)
    return gens


# ---------------------------------------------------------------------------
# the SL(2) cores and the fibre-product realization


@dataclass(frozen=True)
class FibreData:
    """Data (H1, N1; H2, N2) of a fibre product with a cyclic H1 of scalars.

    ``scalar_order`` is K with H1 = <e_K * I>; ``classes`` is |H1/N1| =
    |H2/N2|; ``class_rep`` is an element of H2 whose coset corresponds to
    the class of e_K.
    """

    scalar_order: int
    n1_order: int
    core: GroupTable
    normal: frozenset[int]
    class_rep: int
    commutator_order: int

    @property
    def classes(self) -> int:
        return self.scalar_order // self.n1_order


@lru_cache(maxsize=None)
def _core_bd(n: int) -> tuple[GroupTable, frozenset[int], int]:
    rot = _diag_root(2 * n)
    core = closure([rot, matrix_b()])
    cyclic_part = frozenset(subgroup_closure(core, [core.index_of(rot)]))
    return core, cyclic_part, core.index_of(matrix_b())


@lru_cache(maxsize=None)
def _core_bt() -> tuple[GroupTable, frozenset[int], int]:
    quat = _diag_root(4)
    core = closure([quat, matrix_b(), matrix_c()])
    bd2 = frozenset(subgroup_closure(core, [core.index_of(quat), core.index_of(matrix_b())]))
    return core, bd2, core.index_of(matrix_c())


@lru_cache(maxsize=None)
def _core_bo() -> GroupTable:
    return closure([_diag_root(4), matrix_b(), matrix_c(), _diag_root(8)])


@lru_cache(maxsize=None)
def _core_bi() -> GroupTable:
    s, t = icosahedral_pair()
    return closure([s, t, matrix_b()])


def fibre_data(spec: GroupSpec) -> FibreData:
    """The fibre-product description of a non-cyclic family."""
    f = spec.family
    if f == "C":
        raise UnsupportedFamilyError("cyclic groups are not fibre products here")
    m = spec.m
    if f == "BD":
        n = spec.n
        core, cyclic_part, b_idx = _core_bd(n)
        if m % 2:
            everything = frozenset(range(len(core)))
            return FibreData(2 * m, 2 * m, core, everything, core.identity, n)
        return FibreData(4 * m, 2 * m, core, cyclic_part, b_idx, n)
    if f == "BT":
        core, bd2, c_idx = _core_bt()
        if gcd(m, 6) == 1:
            return FibreData(2 * m, 2 * m, core, frozenset(range(len(core))), core.identity, 8)
        return FibreData(6 * m, 2 * m, core, bd2, c_idx, 8)
    core = _core_bo() if f == "BO" else _core_bi()
    return FibreData(2 * m, 2 * m, core, frozenset(range(len(core))), core.identity, 24 if f == "BO" else 120)


def standard_generators(spec: GroupSpec) -> list[MatrixElement]:
    """Generating matrices of the group.

    For the twisted families this is a generating set of the SL(2) core,
    restricted to elements that belong to the group, plus the scalar-twisted
    elements that generate the abelianization.  When m = 1 the group is the
    core itself and no twisted element is added.
    """
    f = spec.family
    if f == "C":
        n, q = spec.params
        return [_diag_root(n, 1, q)]
    m = spec.m
    if f == "BD":
        rot = _diag_root(2 * spec.n)
        if m == 1:
            return [rot, matrix_b()]
        if m % 2:
            return [rot, matrix_b(), matrix_b().scale(Cyclotomic.zeta(2 * m))]
        return [rot, matrix_b().scale(Cyclotomic.zeta(4 * m))]
    if f == "BT":
        base = [_diag_root(4), matrix_b()]
        if gcd(m, 6) == 3:
            return base + [matrix_c().scale(Cyclotomic.zeta(6 * m))]
        twist = [matrix_c().scale(Cyclotomic.zeta(2 * m))] if m > 1 else []
        return base + [matrix_c()] + twist
    if f == "BO":
        base = [_diag_root(4), matrix_b(), matrix_c(), _diag_root(8)]
        return base + ([_diag_root(8).scale(Cyclotomic.zeta(2 * m))] if m > 1 else [])
    s, t = icosahedral_pair()
    base = [s, t, matrix_b()]
    return base + ([MatrixElement.scalar(Cyclotomic.zeta(m))] if m > 1 else [])


def abelianization_generators(spec: GroupSpec) -> list[MatrixElement]:
    """Elements whose classes generate G/[G, G] (one per cyclic factor)."""
    f = spec.family
    if f == "C":
        return standard_generators(spec)
    m = spec.m
    if f == "BD":
        n = spec.n
        if n % 2 == 0:
            return [matrix_b().scale(Cyclotomic.zeta(2 * m)), _diag_root(2 * n)]
        return [matrix_b().scale(Cyclotomic.zeta(4 * m if m % 2 == 0 else 2 * m))]
    if f == "BT":
        return [matrix_c().scale(Cyclotomic.zeta(6 * m if gcd(m, 6) == 3 else 2 * m))]
    if f == "BO":
        return [_diag_root(8).scale(Cyclotomic.zeta(2 * m))]
    return [MatrixElement.scalar(Cyclotomic.zeta(m))] if m > 1 else []


def fibre_pairs(spec: GroupSpec) -> list[tuple[int, int]]:
    """All pairs (k, h) with e_K^k * h in the group (two per element)."""
    data = fibre_data(spec)
    core = data.core
    pairs = []
    rep_power = core.identity
    coset_of_class = []
    for _ in range(data.classes):
        coset_of_class.append(sorted(int(core.table[rep_power, x]) for x in data.normal))
        rep_power = int(core.table[rep_power, data.class_rep])
    for k in range(data.scalar_order):
        for h in coset_of_class[k % data.classes]:
            pairs.append((k, h))
    return pairs


def enumerate_group(spec: GroupSpec) -> GroupTable:
    """Every element of the group with the full multiplication table.

    Cyclic groups are closed directly.  Fibre products are listed as
    e_K^k * h over the admissible pairs (k, h); the table follows from
    (k, h)(k', h') = (k + k', h h') and the core's own table.
    """
    cap = enumeration_cap()
    if spec.expected_order() > cap:
        raise EnumerationSizeError(
            f"{spec.label} has {spec.expected_order()} elements, above the cap of {cap}"
        )
    if spec.is_cyclic:
        return closure(standard_generators(spec), cap)
    return _cached_fibre_enumeration(spec, cap)


@lru_cache(maxsize=64)
def _cached_fibre_enumeration(spec: GroupSpec, cap: int) -> GroupTable:
    data = fibre_data(spec)
    core = data.core
    big = data.scalar_order
    order = lcm(big, core.order_field)
    pairs = fibre_pairs(spec)
    pair_index = np.full((big, len(core)), -1, dtype=np.int64)
    index: dict[tuple, int] = {}
    elements: list[MatrixElement] = []
    reps: list[tuple[int, int]] = []
    for k, h in pairs:
        element = core.elements[h].twisted(k * (order // big), order)
        key = element.key()
        j = index.get(key)
        if j is None:
            j = len(elements)
            if j >= cap:
                raise EnumerationSizeError(f"enumeration exceeded the cap of {cap} elements")
            index[key] = j
            elements.append(element)
            reps.append((k, h))
        pair_index[k, h] = j
    ks = np.array([r[0] for r in reps], dtype=np.int64)
    hs = np.array([r[1] for r in reps], dtype=np.int64)
    table = pair_index[(ks[:, None] + ks[None, :]) % big, core.table[hs[:, None], hs[None, :]]]
    if (table < 0).any():
        raise ParameterError(f"{spec.label}: fibre product is not closed; check the class data")
    gens = [index[g.lift(order).key()] for g in standard_generators(spec)]
    return _sorted_table(elements, table, gens)


# ---------------------------------------------------------------------------
# structure


def commutator_subgroup(group: GroupTable) -> GroupTable:
    """[G, G] as the normal closure of the commutators of the generators."""
    t, inv = group.table, group.inverse
    gens = list(group.generators)

    def comm(a: int, b: int) -> int:
        return int(t[t[a, b], t[inv[a], inv[b]]])

    sub_gens = sorted({comm(a, b) for a in gens for b in gens} - {group.identity})
    span = subgroup_closure(group, sub_gens)
    changed = True
    while changed:
        changed = False
        for g in gens:
            for c in list(sub_gens):
                conj = int(t[t[g, c], inv[g]])
                if conj not in span:
                    sub_gens.append(conj)
                    span = subgroup_closure(group, sub_gens)
                    changed = True
    return group.subgroup(span, [g for g in sub_gens if g in span])


@dataclass(frozen=True)
class Quotient:
    """G/N as coset labels, coset representatives and a quotient table."""

    labels: np.ndarray
    representatives: tuple[int, ...]
    table: np.ndarray


def quotient(group: GroupTable, normal: GroupTable) -> Quotient:
    members = np.array([group.index_of(e) for e in normal.elements], dtype=np.int64)
    labels = np.full(len(group), -1, dtype=np.int64)
    reps = []
    for a in range(len(group)):
        if labels[a] < 0:
            labels[group.table[a, members]] = len(reps)
            reps.append(a)
    rep_arr = np.array(reps, dtype=np.int64)
    qtable = labels[group.table[np.ix_(rep_arr, rep_arr)]]
    return Quotient(labels, tuple(reps), qtable)


def _abelian_relations(qtable: np.ndarray, identity: int, gens: Sequence[int]) -> IntMatrix:
    """Triangular relation basis of Z^k -> Q for generators of an abelian Q.

    For the i-th generator, t_i is its order modulo the span of the earlier
    ones, and t_i * s_i is written in terms of those; the resulting rows
    generate the whole relation lattice.
    """
    k = len(gens)
    span = {identity: (0,) * k}
    relations = []
    for i, s in enumerate(gens):
        t, current = 1, s
        while current not in span:
            t += 1
            current = int(qtable[current, s])
        row = [0] * k
        row[i] = t
        for j, c in enumerate(span[current]):
            row[j] -= c
        relations.append(row)
        # extend the span by multiples of s (t of them suffice for the new cosets)
        new_span = dict(span)
        power, mult = identity, 0
        for mult in range(t):
            for elt, coeffs in span.items():
                prod = int(qtable[elt, power])
                if prod not in new_span:
                    vec = list(coeffs)
                    vec[i] += mult
                    new_span[prod] = tuple(vec)
            power = int(qtable[power, s])
        span = new_span
    if len(span) != qtable.shape[0]:
        raise ParameterError("generators do not generate the quotient")
    return IntMatrix(relations)


def abelianization(group: GroupTable) -> list[int]:
    """Invariant factors (all > 1) of G/[G, G]; empty for a perfect group."""
    comm = commutator_subgroup(group)
    q = quotient(group, comm)
    if len(q.representatives) == 1:
        return []
    identity = int(q.labels[group.identity])
    gens = sorted({int(q.labels[g]) for g in group.generators} - {identity})
    rel = _abelian_relations(q.table, identity, gens)
    snf, _, _ = smith_normal_form(rel)
    return [snf[i, i] for i in range(min(snf.shape)) if snf[i, i] != 1]


@dataclass(frozen=True)
class SmallnessResult:
    small: bool
    witness: MatrixElement | None = None

    def __bool__(self) -> bool:
        return self.small


def is_pseudo_reflection(element: MatrixElement) -> bool:
    """Eigenvalue 1 with multiplicity exactly one: det(M - 1) = 0, det M != 1."""
    det = element.det()
    return (1 - element.trace() + det).is_zero() and det != 1


def is_small(group: GroupTable) -> SmallnessResult:
    for k, e in enumerate(group.elements):
        if k != group.identity and is_pseudo_reflection(e):
            return SmallnessResult(False, e)
    return SmallnessResult(True, None)


def abelianization_order_formula(spec: GroupSpec) -> int:
    """|H1| * |N2| / (2 |[G, G]|) from the fibre-product data."""
    if spec.is_cyclic:
        raise UnsupportedFamilyError("the abelianization order formula needs a fibre-product family")
    data = fibre_data(spec)
    value, rem = divmod(data.scalar_order * len(data.normal), 2 * data.commutator_order)
    if rem:
        raise ParameterError(f"{spec.label}: formula is not integral")
    return value


def expected_abelianization(spec: GroupSpec) -> list[int]:
    """Invariant factors predicted for each family (trivial factors dropped)."""
    f = spec.family
    if f == "C":
        return [spec.params[0]]
    m = spec.m
    if f == "BD":
        factors = [2, 2 * m] if spec.n % 2 == 0 else [4 * m]
    elif f == "BT":
        factors = [3 * m]
    elif f == "BO":
        factors = [2 * m]
    else:
        factors = [m]
    return [x for x in factors if x != 1]


def commutator_generators(spec: GroupSpec) -> list[MatrixElement]:
    """Closed-form generators of [G, G] (checked against the table in the tests)."""
    f = spec.family
    if f == "C":
        return []
    if f == "BD":
        return [_diag_root(spec.n)]
    if f == "BT":
        return [_diag_root(4), matrix_b()]
    if f == "BO":
        return [_diag_root(4), matrix_b(), matrix_c()]
    s, t = icosahedral_pair()
    return [s, t, matrix_b()]
