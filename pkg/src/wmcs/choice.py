"""Argmax sets, dominance relations between objectives, and wMCS witness search."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from . import config
from .errors import BudgetExceeded, EmptyDomainError, NotLatticeError
from .order import (
    FinitePoset,
    bits,
    closed_interval,
    enumerate_sublattices,
    enumerate_subintervals,
    four_point_sets,
    interval,
    set_dominates,
)


class ObjectiveTable:
    """Exact rational value for every element of a poset, indexed by element."""

    __slots__ = ("values",)

    def __init__(self, values: Sequence):
        self.values = tuple(Fraction(v) for v in values)

    @classmethod
    def from_function(cls, p: FinitePoset, fn: Callable) -> "ObjectiveTable":
        """Tabulate ``fn(label)`` over every element."""
        return cls([fn(lab) for lab in p.labels])

    @classmethod
    def from_mapping(cls, p: FinitePoset, mapping: Mapping) -> "ObjectiveTable":
        missing = [lab for lab in p.labels if lab not in mapping]
        if missing:
            raise ValueError(f"objective table is not total; missing {missing[:3]!r}")
        return cls([mapping[lab] for lab in p.labels])

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, ObjectiveTable) and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"ObjectiveTable({[str(v) for v in self.values]})"


class DominanceKind(str, Enum):
    SINGLE_CROSSING = "SingleCrossing"
    MS = "MS"
    WEAK = "Weak"
    WEAK_INTERVAL = "WeakInterval"
    INTERVAL = "Interval"
    QS_INTERVAL = "QSInterval"


def argmax(p: FinitePoset, s: Iterable[int], f: ObjectiveTable) -> frozenset[int]:
    s = list(s)
    if not s:
        raise EmptyDomainError("argmax over an empty set")
    best = max(f[x] for x in s)
    return frozenset(x for x in s if f[x] == best)


def _require_lattice(p: FinitePoset) -> None:
    if not p.is_lattice():
        raise NotLatticeError("operation needs a lattice")


def _implies(a_hi: Fraction, a_lo: Fraction, c_hi: Fraction, c_lo: Fraction) -> bool:
    # weak and strict variants of (a_hi ≥ a_lo ⇒ c_hi ≥ c_lo)
    if a_hi >= a_lo and not c_hi >= c_lo:
        return False
    if a_hi > a_lo and not c_hi > c_lo:
        return False
    return True


def _pairs(p: FinitePoset) -> Iterator[tuple[int, int]]:
    """Ordered pairs (x', x'') with x'' not below x', lexicographic."""
    n = p.size
    for a in range(n):
        for b in range(n):
            if not p.leq(b, a):
                yield a, b


def quasi_supermodular(p: FinitePoset, f: ObjectiveTable) -> bool:
    _require_lattice(p)
    for a, b in _pairs(p):
        lo, hi = p.meet(a, b), p.join(a, b)
        if not _implies(f[b], f[lo], f[hi], f[a]):
            return False
    return True


def i_quasi_supermodular(p: FinitePoset, f: ObjectiveTable) -> bool:
    _require_lattice(p)
    for a, b in _pairs(p):
        lo, hi = p.meet(a, b), p.join(a, b)
        if f[a] < max(f[x] for x in closed_interval(p, lo, a)):
            continue
        if not _implies(f[a], f[lo], f[hi], f[b]):
            return False
    return True


def supermodular(p: FinitePoset, f: ObjectiveTable) -> bool:
    _require_lattice(p)
    n = p.size
    for a in range(n):
        for b in range(a + 1, n):
            if f[p.join(a, b)] + f[p.meet(a, b)] < f[a] + f[b]:
                return False
    return True


def single_crossing(p: FinitePoset, v: ObjectiveTable, u: ObjectiveTable) -> bool:
    for a in range(p.size):
        for b in bits(p.up_mask(a) & ~(1 << a)):
            if not _implies(u[b], u[a], v[b], v[a]):
                return False
    return True


def _max_over(f: ObjectiveTable, s: Iterable[int]) -> Fraction:
    return max(f[x] for x in s)


def _interval_side_condition(p, v, u, a, b) -> bool:
    j = interval(p, a, b)
    return u[b] == _max_over(u, j) and v[a] == _max_over(v, j)


def _weak(p, v, u) -> bool:
    for a, b in _pairs(p):
        lo, hi = p.meet(a, b), p.join(a, b)
        if not _implies(u[b], max(u[lo], u[a]), max(v[b], v[hi]), v[a]):
            return False
    return True


def _weak_interval(p, v, u) -> bool:
    for a, b in _pairs(p):
        if not _interval_side_condition(p, v, u, a, b):
            continue
        lo, hi = p.meet(a, b), p.join(a, b)
        if not _implies(u[b], _max_over(u, closed_interval(p, lo, a)), _max_over(v, closed_interval(p, b, hi)), v[a]):
            return False
    return True


def _interval(p, v, u) -> bool:
    for a, b in _pairs(p):
        if not _interval_side_condition(p, v, u, a, b):
            continue
        lo, hi = p.meet(a, b), p.join(a, b)
        if not _implies(u[b], u[lo], v[hi], v[a]):
            return False
    return True


def _qs_interval(p, v, u) -> bool:
    for a in range(p.size):
        for b in bits(p.up_mask(a) & ~(1 << a)):
            if u[b] < _max_over(u, closed_interval(p, a, b)):
                continue
            if not _implies(u[b], u[a], v[b], v[a]):
                return False
    return True


def dominates(p: FinitePoset, kind: DominanceKind | str, v: ObjectiveTable, u: ObjectiveTable) -> bool:
    """Whether ``v`` dominates ``u`` in the given sense."""
    kind = DominanceKind(kind)
    if kind is DominanceKind.SINGLE_CROSSING:
        return single_crossing(p, v, u)
    if kind is DominanceKind.QS_INTERVAL:
        return _qs_interval(p, v, u)
    _require_lattice(p)
    if kind is DominanceKind.MS:
        return single_crossing(p, v, u) and quasi_supermodular(p, u) and quasi_supermodular(p, v)
    if kind is DominanceKind.WEAK:
        return _weak(p, v, u)
    if kind is DominanceKind.WEAK_INTERVAL:
        return _weak_interval(p, v, u)
    return _interval(p, v, u)


@dataclass(frozen=True)
class Witness:
    subset: frozenset[int]
    argmax_u: frozenset[int]
    argmax_v: frozenset[int]


@dataclass(frozen=True)
class SearchResult:
    witness: Witness | None
    examined: int
    exhaustive: bool


def mcs_family(p: FinitePoset, family: str) -> tuple[Iterator[frozenset[int]], bool]:
    """The constraint sets to scan and whether they cover the whole family."""
    if family == "subintervals":
        return enumerate_subintervals(p), True
    if family == "sublattices":
        if p.size <= config.MAX_EXHAUSTIVE_SUBLATTICE:
            return enumerate_sublattices(p), True
        return four_point_sets(p), False
    raise ValueError(f"unknown family {family!r}")


def wmcs_search(
    p: FinitePoset,
    v: ObjectiveTable,
    u: ObjectiveTable,
    family: str = "sublattices",
    order: str = "ws",
    budget: int | None = None,
) -> SearchResult:
    """First constraint set S where ``M_S(v)`` fails to dominate ``M_S(u)``."""
    _require_lattice(p)
    mode = {"ws": "weak", "ss": "strong"}[order]
    sets, exhaustive = mcs_family(p, family)
    examined = 0
    for s in sets:
        if budget is not None and examined >= budget:
            raise BudgetExceeded(f"examined {examined} sets before exhausting the budget", coverage=examined)
        examined += 1
        mu = argmax(p, s, u)
        mv = argmax(p, s, v)
        if not set_dominates(p, mv, mu, mode):
            return SearchResult(Witness(s, mu, mv), examined, exhaustive)
    return SearchResult(None, examined, exhaustive)


def wmcs_witness_search(p, v, u, family="sublattices", order="ws", budget=None) -> Witness | None:
    return wmcs_search(p, v, u, family, order, budget).witness


def sum_target(p: FinitePoset, t) -> ObjectiveTable:
    """``-(Σ coordinates - t)²`` on a poset whose labels are coordinate tuples."""
    t = Fraction(t)
    return ObjectiveTable.from_function(p, lambda x: -(sum(x) - t) ** 2)
