"""Finite posets, lattice operations and the weak/strong set orders.

Elements are referenced by integer index everywhere. A subset is a
``frozenset`` of indices; internally the poset keeps one bitmask per element
for its up-set and down-set so that every comparison is a single bit test.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from . import config
from .errors import (
    CycleError,
    DuplicateLabelError,
    HypothesisError,
    MissingJoinError,
    SizeLimitError,
    TheoremViolation,
)

Subset = frozenset


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def set_of(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


def canonical(s: Iterable[int]) -> tuple[int, ...]:
    """Ascending-index tuple; the reporting order for subsets."""
    return tuple(sorted(s))


class FinitePoset:
    """A finite partial order with its reflexive-transitive ``leq`` stored as bitmasks."""

    __slots__ = ("labels", "_index", "_up", "_down", "_join", "_meet", "_is_lattice")

    def __init__(
        self,
        labels: Sequence[Hashable],
        leq: Sequence[Sequence[bool]] | None = None,
        *,
        up_masks: Sequence[int] | None = None,
        cap: int | None = None,
    ):
        labels = tuple(labels)
        limit = config.max_elements() if cap is None else cap
        if len(labels) > limit:
            raise SizeLimitError(f"poset has {len(labels)} elements, cap is {limit}")
        index: dict[Hashable, int] = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise DuplicateLabelError(f"duplicate label {lab!r}")
            index[lab] = i
        n = len(labels)
        if up_masks is None:
            if leq is None:
                up_masks = [1 << i for i in range(n)]
            else:
                up_masks = [mask_of(j for j in range(n) if leq[i][j]) for i in range(n)]
        up = list(up_masks)
        if len(up) != n:
            raise ValueError("relation size does not match label count")
        for i in range(n):
            if not (up[i] >> i) & 1:
                raise ValueError(f"relation is not reflexive at {labels[i]!r}")
        closed = _closure(up)
        if closed != up:
            raise ValueError("relation is not transitive")
        _check_antisymmetric(labels, up)
        self.labels = labels
        self._index = index
        self._up = up
        down = [0] * n
        for i in range(n):
            for j in bits(up[i]):
                down[j] |= 1 << i
        self._down = down
        self._join: dict[tuple[int, int], int | None] = {}
        self._meet: dict[tuple[int, int], int | None] = {}
        self._is_lattice: bool | None = None

    @classmethod
    def from_relation(
        cls,
        labels: Sequence[Hashable],
        pairs: Iterable[tuple[Hashable, Hashable]],
        cap: int | None = None,
    ) -> "FinitePoset":
        labels = tuple(labels)
        limit = config.max_elements() if cap is None else cap
        if len(labels) > limit:
            raise SizeLimitError(f"poset has {len(labels)} elements, cap is {limit}")
        index: dict[Hashable, int] = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise DuplicateLabelError(f"duplicate label {lab!r}")
            index[lab] = i
        up = [1 << i for i in range(len(labels))]
        for a, b in pairs:
            if a not in index or b not in index:
                raise KeyError(f"unknown label in pair ({a!r}, {b!r})")
            up[index[a]] |= 1 << index[b]
        up = _closure(up)
        _check_antisymmetric(labels, up)
        return cls(labels, up_masks=up, cap=limit)

    # basic access

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FinitePoset(size={self.size})"

    def index(self, label: Hashable) -> int:
        return self._index[label]

    def indices(self, labels: Iterable[Hashable]) -> frozenset[int]:
        return frozenset(self._index[lab] for lab in labels)

    def label(self, i: int) -> Hashable:
        return self.labels[i]

    def leq(self, i: int, j: int) -> bool:
        return bool((self._up[i] >> j) & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and bool((self._up[i] >> j) & 1)

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def down_mask(self, i: int) -> int:
        return self._down[i]

    def leq_matrix(self) -> list[list[bool]]:
        n = self.size
        return [[self.leq(i, j) for j in range(n)] for i in range(n)]

    # lattice operations

    def join(self, a: int, b: int) -> int | None:
        key = (a, b) if a <= b else (b, a)
        if key in self._join:
            return self._join[key]
        ub = self._up[a] & self._up[b]
        res = None
        for k in bits(ub):
            if ub & ~self._up[k] == 0:
                res = k
                break
        self._join[key] = res
        return res

    def meet(self, a: int, b: int) -> int | None:
        key = (a, b) if a <= b else (b, a)
        if key in self._meet:
            return self._meet[key]
        lb = self._down[a] & self._down[b]
        res = None
        for k in bits(lb):
            if lb & ~self._down[k] == 0:
                res = k
                break
        self._meet[key] = res
        return res

    def join_strict(self, a: int, b: int) -> int:
        r = self.join(a, b)
        if r is None:
            raise MissingJoinError(f"no join of {self.labels[a]!r} and {self.labels[b]!r}")
        return r

    def meet_strict(self, a: int, b: int) -> int:
        r = self.meet(a, b)
        if r is None:
            raise MissingJoinError(f"no meet of {self.labels[a]!r} and {self.labels[b]!r}")
        return r

    def is_lattice(self) -> bool:
        if self._is_lattice is None:
            n = self.size
            self._is_lattice = n > 0 and all(
                self.join(a, b) is not None and self.meet(a, b) is not None
                for a in range(n)
                for b in range(a + 1, n)
            )
        return self._is_lattice

    def is_chain(self) -> bool:
        n = self.size
        return all(self.leq(a, b) or self.leq(b, a) for a in range(n) for b in range(a + 1, n))

    def all_elements(self) -> frozenset[int]:
        return frozenset(range(self.size))


def _closure(up: list[int]) -> list[int]:
    up = list(up)
    n = len(up)
    for k in range(n):
        bk = 1 << k
        uk = up[k]
        for i in range(n):
            if up[i] & bk:
                up[i] |= uk
    return up


def _check_antisymmetric(labels: Sequence[Hashable], up: Sequence[int]) -> None:
    for i in range(len(up)):
        for j in bits(up[i] & ~(1 << i)):
            if (up[j] >> i) & 1:
                raise CycleError(f"{labels[i]!r} and {labels[j]!r} are mutually below each other")


# constructors


def poset_from_relation(labels, pairs, cap: int | None = None) -> FinitePoset:
    return FinitePoset.from_relation(labels, pairs, cap=cap)


def chain(values: Sequence[Hashable], cap: int | None = None) -> FinitePoset:
    """Total order in the given sequence order."""
    n = len(values)
    up = [((1 << n) - 1) & ~((1 << i) - 1) for i in range(n)]
    return FinitePoset(values, up_masks=up, cap=cap)


def antichain(labels: Sequence[Hashable]) -> FinitePoset:
    return FinitePoset(labels)


def product_poset(p: FinitePoset, q: FinitePoset, cap: int | None = None) -> FinitePoset:
    """Product order; labels are pairs, or flattened tuples when ``p`` already has tuple labels."""
    limit = config.max_elements() if cap is None else cap
    n, m = p.size, q.size
    if n * m > limit:
        raise SizeLimitError(f"product of {n} and {m} elements exceeds cap {limit}")
    labels = []
    for a in p.labels:
        for b in q.labels:
            labels.append((a, b))
    up = []
    for i in range(n):
        for j in range(m):
            mask = 0
            qmask = q.up_mask(j)
            for k in bits(p.up_mask(i)):
                mask |= qmask << (k * m)
            up.append(mask)
    return FinitePoset(labels, up_masks=up, cap=limit)


def grid(values: Sequence[Hashable], dims: int = 2, cap: int | None = None) -> FinitePoset:
    """``values^dims`` under the product order, labels are ``dims``-tuples."""
    n = len(values)
    total = n**dims
    limit = config.max_elements() if cap is None else cap
    if total > limit:
        raise SizeLimitError(f"grid with {total} points exceeds cap {limit}")
    labels = []
    coords = []
    for k in range(total):
        c = []
        r = k
        for _ in range(dims):
            c.append(r % n)
            r //= n
        c.reverse()
        coords.append(tuple(c))
        labels.append(tuple(values[i] for i in c))
    up = []
    for c in coords:
        mask = 0
        for k, d in enumerate(coords):
            if all(x <= y for x, y in zip(c, d)):
                mask |= 1 << k
        up.append(mask)
    return FinitePoset(labels, up_masks=up, cap=limit)


# subsets


def join(p: FinitePoset, a: int, b: int) -> int | None:
    return p.join(a, b)


def meet(p: FinitePoset, a: int, b: int) -> int | None:
    return p.meet(a, b)


def is_lattice(p: FinitePoset) -> bool:
    return p.is_lattice()


def is_sublattice(p: FinitePoset, s: Iterable[int]) -> bool:
    """Closure of ``s`` under joins and meets taken in ``p``."""
    s = frozenset(s)
    items = sorted(s)
    for a, b in combinations(items, 2):
        if p.join_strict(a, b) not in s or p.meet_strict(a, b) not in s:
            return False
    return True


def closed_interval(p: FinitePoset, lo: int, hi: int) -> frozenset[int]:
    return set_of(p.up_mask(lo) & p.down_mask(hi))


def interval(p: FinitePoset, a: int, b: int) -> frozenset[int]:
    """Smallest subinterval containing ``a`` and ``b``: ``[a∧b, a∨b]``."""
    return closed_interval(p, p.meet_strict(a, b), p.join_strict(a, b))


def maximal_points(p: FinitePoset, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    m = mask_of(s)
    return frozenset(x for x in s if (p.up_mask(x) & m) == 1 << x)


def minimal_points(p: FinitePoset, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    m = mask_of(s)
    return frozenset(x for x in s if (p.down_mask(x) & m) == 1 << x)


def upper_weak(p: FinitePoset, s_hi: Iterable[int], s_lo: Iterable[int]) -> bool:
    """Every point of ``s_lo`` has a weakly larger point in ``s_hi``."""
    hi = mask_of(s_hi)
    return all(p.up_mask(x) & hi for x in s_lo)


def lower_weak(p: FinitePoset, s_hi: Iterable[int], s_lo: Iterable[int]) -> bool:
    """Every point of ``s_hi`` has a weakly smaller point in ``s_lo``."""
    lo = mask_of(s_lo)
    return all(p.down_mask(x) & lo for x in s_hi)


def strong(p: FinitePoset, s_hi: Iterable[int], s_lo: Iterable[int]) -> bool:
    hi = frozenset(s_hi)
    lo = frozenset(s_lo)
    for x in sorted(lo):
        for y in sorted(hi):
            if p.join_strict(x, y) not in hi or p.meet_strict(x, y) not in lo:
                return False
    return True


_MODES: dict[str, Callable[[FinitePoset, Iterable[int], Iterable[int]], bool]] = {
    "upper": upper_weak,
    "lower": lower_weak,
    "strong": strong,
}


def set_dominates(p: FinitePoset, s_hi: Iterable[int], s_lo: Iterable[int], mode: str = "weak") -> bool:
    """Whether ``s_hi`` dominates ``s_lo`` in the requested set order."""
    s_hi = frozenset(s_hi)
    s_lo = frozenset(s_lo)
    if mode == "weak":
        return upper_weak(p, s_hi, s_lo) and lower_weak(p, s_hi, s_lo)
    try:
        fn = _MODES[mode]
    except KeyError:
        raise ValueError(f"unknown set-order mode {mode!r}") from None
    return fn(p, s_hi, s_lo)


def sandwich(p: FinitePoset, s_hi: Iterable[int], s_lo: Iterable[int]) -> bool:
    """A point of either set lying between two points of the other belongs to the other."""
    hi = frozenset(s_hi)
    lo = frozenset(s_lo)
    return _between_closed(p, lo, hi) and _between_closed(p, hi, lo)


def _between_closed(p: FinitePoset, inner: frozenset[int], outer: frozenset[int]) -> bool:
    om = mask_of(outer)
    for x in inner:
        if x in outer:
            continue
        if p.down_mask(x) & om and p.up_mask(x) & om:
            return False
    return True


@dataclass(frozen=True)
class SetOrderReport:
    uws: bool
    lws: bool
    ws: bool
    ss: bool
    union_sublattice: bool
    sandwich: bool


def ss_decompose(p: FinitePoset, s_hi: Iterable[int], s_lo: Iterable[int]) -> SetOrderReport:
    hi = frozenset(s_hi)
    lo = frozenset(s_lo)
    uws = upper_weak(p, hi, lo)
    lws = lower_weak(p, hi, lo)
    ss = strong(p, hi, lo)
    union = is_sublattice(p, hi | lo)
    sw = sandwich(p, hi, lo)
    rep = SetOrderReport(uws, lws, uws and lws, ss, union, sw)
    if rep.ws and union and sw and not ss:
        raise TheoremViolation("ws, union sublattice and sandwich hold but ss fails")
    if ss and hi and lo and is_sublattice(p, hi) and is_sublattice(p, lo):
        if not (rep.ws and union and sw):
            raise TheoremViolation("ss holds between sublattices but a decomposition property fails")
    return rep


# images of sets under correspondences


def image(f: Mapping[int, Iterable[int]], s: Iterable[int]) -> frozenset[int]:
    out: set[int] = set()
    for x in s:
        out.update(f[x])
    return frozenset(out)


def ws_union_property(p: FinitePoset, s_hi, s_lo, t_hi, t_lo) -> bool:
    if not set_dominates(p, s_hi, s_lo, "weak") or not set_dominates(p, t_hi, t_lo, "weak"):
        raise HypothesisError("operands are not weakly ordered")
    return set_dominates(p, frozenset(s_hi) | frozenset(t_hi), frozenset(s_lo) | frozenset(t_lo), "weak")


def ss_intersection_property(p: FinitePoset, s_hi, s_lo, t_hi, t_lo) -> bool:
    if not set_dominates(p, s_hi, s_lo, "strong") or not set_dominates(p, t_hi, t_lo, "strong"):
        raise HypothesisError("operands are not strongly ordered")
    return set_dominates(p, frozenset(s_hi) & frozenset(t_hi), frozenset(s_lo) & frozenset(t_lo), "strong")


def is_weak_set_monotone(p: FinitePoset, f: Mapping[int, Iterable[int]], target: FinitePoset | None = None) -> bool:
    q = p if target is None else target
    for x in range(p.size):
        for y in bits(p.up_mask(x) & ~(1 << x)):
            if not set_dominates(q, f[y], f[x], "weak"):
                return False
    return True


def image_ws_monotone(p: FinitePoset, f: Mapping[int, Iterable[int]], s_hi, s_lo, target: FinitePoset | None = None) -> bool:
    """Whether ``f(s_hi) ≥ws f(s_lo)``, given ``s_hi ≥ws s_lo`` and weak-set-monotone ``f``."""
    q = p if target is None else target
    if not set_dominates(p, s_hi, s_lo, "weak"):
        raise HypothesisError("operands are not weakly ordered")
    if not is_weak_set_monotone(p, f, q):
        raise HypothesisError("correspondence is not weak set monotone")
    return set_dominates(q, image(f, s_hi), image(f, s_lo), "weak")


# enumeration


def enumerate_sublattices(p: FinitePoset, cap: int = config.MAX_EXHAUSTIVE_SUBLATTICE) -> Iterator[frozenset[int]]:
    """All nonempty sublattices in ascending bitmask order."""
    n = p.size
    if n > cap:
        raise SizeLimitError(f"exhaustive sublattice enumeration capped at {cap} elements")
    jt = [[p.join_strict(a, b) for b in range(n)] for a in range(n)]
    mt = [[p.meet_strict(a, b) for b in range(n)] for a in range(n)]
    for m in range(1, 1 << n):
        items = list(bits(m))
        ok = True
        for ia, a in enumerate(items):
            ja, ma = jt[a], mt[a]
            for b in items[ia + 1:]:
                if not (m >> ja[b]) & 1 or not (m >> ma[b]) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield frozenset(items)


def enumerate_subintervals(p: FinitePoset) -> Iterator[frozenset[int]]:
    """Every ``[a,b]`` with ``a ≤ b``, in lexicographic ``(a, b)`` order."""
    for a in range(p.size):
        for b in bits(p.up_mask(a)):
            yield closed_interval(p, a, b)


def four_point_sets(p: FinitePoset) -> Iterator[frozenset[int]]:
    """``{x', x'', x'∧x'', x'∨x''}`` for incomparable pairs, lexicographic, deduplicated."""
    seen: set[frozenset[int]] = set()
    n = p.size
    for a in range(n):
        for b in range(a + 1, n):
            if p.leq(a, b) or p.leq(b, a):
                continue
            s = frozenset((a, b, p.join_strict(a, b), p.meet_strict(a, b)))
            if s not in seen:
                seen.add(s)
                yield s


def longest_chain(p: FinitePoset) -> int:
    """Number of elements in a longest chain."""
    order = sorted(range(p.size), key=lambda i: bin(p.down_mask(i)).count("1"))
    depth = [1] * p.size
    for i in order:
        for j in bits(p.down_mask(i) & ~(1 << i)):
            depth[i] = max(depth[i], depth[j] + 1)
    return max(depth, default=0)
