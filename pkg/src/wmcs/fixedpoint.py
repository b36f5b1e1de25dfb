"""Fixed points of correspondences on finite orders.

Works over any order object exposing ``size``, ``leq(i, j)`` and ``label(i)``.
``FinitePoset`` is the usual one; the matching module supplies an implicit
order on pairs of contract sets so that its state space is never materialized.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Hashable, Iterable, Mapping, Protocol, Sequence

from .errors import (
    DeadEndError,
    HypothesisError,
    MissingJoinError,
    NotInXPlusError,
    TheoremViolation,
    UnknownGalleryName,
)
from .order import FinitePoset, chain, product_poset


class Order(Protocol):
    @property
    def size(self) -> int: ...

    def leq(self, i: int, j: int) -> bool: ...

    def label(self, i: int) -> Hashable: ...


class Correspondence:
    """Nonempty-set-valued self-map; images are computed lazily and cached."""

    def __init__(self, order: Order, images: Mapping[int, Iterable[int]] | Callable[[int], Iterable[int]]):
        self.order = order
        self._fn = images if callable(images) else None
        self._cache: dict[int, frozenset[int]] = {}
        if self._fn is None:
            for x in range(order.size):
                if x not in images:
                    raise ValueError(f"correspondence undefined at {order.label(x)!r}")
                self._cache[x] = self._checked(x, images[x])

    def _checked(self, x: int, img: Iterable[int]) -> frozenset[int]:
        img = frozenset(img)
        if not img:
            raise ValueError(f"empty image at {self.order.label(x)!r}")
        return img

    @classmethod
    def from_labels(cls, p: FinitePoset, mapping: Mapping[Hashable, Iterable[Hashable]]) -> "Correspondence":
        return cls(p, {p.index(k): p.indices(v) for k, v in mapping.items()})

    def __call__(self, x: int) -> frozenset[int]:
        img = self._cache.get(x)
        if img is None:
            img = self._checked(x, self._fn(x))
            self._cache[x] = img
        return img

    image = __call__

    def as_dict(self) -> dict[int, frozenset[int]]:
        return {x: self(x) for x in range(self.order.size)}


# generic order helpers


def uws(order: Order, hi: Iterable[int], lo: Iterable[int]) -> bool:
    hi = tuple(hi)
    return all(any(order.leq(x, y) for y in hi) for x in lo)


def lws(order: Order, hi: Iterable[int], lo: Iterable[int]) -> bool:
    lo = tuple(lo)
    return all(any(order.leq(x, y) for x in lo) for y in hi)


def maximal(order: Order, s: Iterable[int]) -> frozenset[int]:
    s = tuple(s)
    return frozenset(x for x in s if not any(y != x and order.leq(x, y) for y in s))


def minimal(order: Order, s: Iterable[int]) -> frozenset[int]:
    s = tuple(s)
    return frozenset(x for x in s if not any(y != x and order.leq(y, x) for y in s))


# classification


@dataclass(frozen=True)
class MonotoneClass:
    uws: bool
    lws: bool
    ss: bool | None
    x_plus_nonempty: bool
    x_minus_nonempty: bool

    @property
    def in_F_plus(self) -> bool:
        return self.uws and self.x_plus_nonempty

    @property
    def in_F_minus(self) -> bool:
        return self.lws and self.x_minus_nonempty


def x_plus(f: Correspondence) -> frozenset[int]:
    o = f.order
    return frozenset(x for x in range(o.size) if any(o.leq(x, y) for y in f(x)))


def x_minus(f: Correspondence) -> frozenset[int]:
    o = f.order
    return frozenset(x for x in range(o.size) if any(o.leq(y, x) for y in f(x)))


def is_upper_monotone(f: Correspondence) -> bool:
    o = f.order
    n = o.size
    return all(uws(o, f(b), f(a)) for a in range(n) for b in range(n) if a != b and o.leq(a, b))


def is_lower_monotone(f: Correspondence) -> bool:
    o = f.order
    n = o.size
    return all(lws(o, f(b), f(a)) for a in range(n) for b in range(n) if a != b and o.leq(a, b))


def _strong_monotone(f: Correspondence) -> bool | None:
    o = f.order
    if not isinstance(o, FinitePoset):
        return None
    from .order import strong

    try:
        return all(strong(o, f(b), f(a)) for a in range(o.size) for b in range(o.size) if a != b and o.leq(a, b))
    except MissingJoinError:
        return None


def classify(f: Correspondence) -> MonotoneClass:
    return MonotoneClass(
        uws=is_upper_monotone(f),
        lws=is_lower_monotone(f),
        ss=_strong_monotone(f),
        x_plus_nonempty=bool(x_plus(f)),
        x_minus_nonempty=bool(x_minus(f)),
    )


def fixed_points(f: Correspondence, check: bool = False) -> frozenset[int]:
    """``{x : x ∈ F(x)}``; with ``check`` the existence theorem is asserted."""
    fp = frozenset(x for x in range(f.order.size) if x in f(x))
    if check:
        cls = classify(f)
        if (cls.in_F_plus or cls.in_F_minus) and not fp:
            raise TheoremViolation("monotone correspondence without a fixed point")
        if cls.in_F_plus and not maximal(f.order, fp):
            raise TheoremViolation("no maximal fixed point")
        if cls.in_F_minus and not minimal(f.order, fp):
            raise TheoremViolation("no minimal fixed point")
    return fp


# iteration


class Policy(str, Enum):
    LEAST_INDEX = "LeastIndex"
    GREATEST_INDEX = "GreatestIndex"
    MINIMAL_POINT = "MinimalPoint"
    MAXIMAL_POINT = "MaximalPoint"


@dataclass(frozen=True)
class Scripted:
    """Follow the listed points in order; each must be a legal move when used."""

    steps: tuple[int, ...]


SelectionPolicy = Policy | Scripted


@dataclass
class IterationResult:
    trace: list[int]
    fixed_point: int | None
    dead_end: bool = False

    @property
    def steps(self) -> int:
        return len(self.trace) - 1


def candidates(f: Correspondence, x: int, direction: str = "up") -> list[int]:
    o = f.order
    if direction == "up":
        return sorted(y for y in f(x) if y != x and o.leq(x, y))
    return sorted(y for y in f(x) if y != x and o.leq(y, x))


def _select(order: Order, cands: list[int], policy: SelectionPolicy, step: int) -> int:
    if isinstance(policy, Scripted):
        if step >= len(policy.steps):
            raise ValueError("scripted policy ran out of steps")
        choice = policy.steps[step]
        if choice not in cands:
            raise ValueError(f"scripted step {step} selects an illegal point")
        return choice
    policy = Policy(policy)
    if policy is Policy.LEAST_INDEX:
        return cands[0]
    if policy is Policy.GREATEST_INDEX:
        return cands[-1]
    if policy is Policy.MINIMAL_POINT:
        return min(minimal(order, cands))
    return min(maximal(order, cands))


def iterate(
    f: Correspondence,
    x0: int,
    policy: SelectionPolicy = Policy.LEAST_INDEX,
    direction: str = "up",
    strict: bool = False,
) -> IterationResult:
    """Move to a weakly larger (smaller) point of the image until a fixed point."""
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    o = f.order
    start_ok = any(o.leq(x0, y) for y in f(x0)) if direction == "up" else any(o.leq(y, x0) for y in f(x0))
    if not start_ok:
        raise NotInXPlusError(f"{o.label(x0)!r} has no {'larger' if direction == 'up' else 'smaller'} image point")
    trace = [x0]
    x = x0
    step = 0
    while x not in f(x):
        cands = candidates(f, x, direction)
        if not cands:
            if strict:
                raise DeadEndError(f"no admissible move from {o.label(x)!r}")
            return IterationResult(trace, None, True)
        x = _select(o, cands, policy, step)
        step += 1
        trace.append(x)
    return IterationResult(trace, x)


@dataclass(frozen=True)
class Reachability:
    visited: frozenset[int]
    terminal_fixed_points: frozenset[int]
    dead_ends: frozenset[int]


def reachable(f: Correspondence, x0: int, direction: str = "up") -> Reachability:
    """Outcomes of every selection policy at once: explore all admissible moves."""
    seen = {x0}
    queue = deque([x0])
    terminals: set[int] = set()
    dead: set[int] = set()
    while queue:
        x = queue.popleft()
        if x in f(x):
            terminals.add(x)
            continue
        cands = candidates(f, x, direction)
        if not cands:
            dead.add(x)
        for y in cands:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return Reachability(frozenset(seen), frozenset(terminals), frozenset(dead))


# comparative statics


def dominates_pointwise(f_hi: Correspondence, f_lo: Correspondence, mode: str) -> bool:
    o = f_hi.order
    test = uws if mode == "upper" else lws
    return all(test(o, f_hi(x), f_lo(x)) for x in range(o.size))


def lift(f2: Correspondence, x_star: int, mode: str, policy: SelectionPolicy = Policy.LEAST_INDEX) -> int:
    """Iterate ``f2`` from ``x_star`` up (upper) or down (lower) to a fixed point."""
    res = iterate(f2, x_star, policy, "up" if mode == "upper" else "down")
    if res.fixed_point is None:
        raise TheoremViolation("iteration of a monotone correspondence hit a dead end")
    return res.fixed_point


def cs_lift(f: Correspondence, f2: Correspondence, x_star: int, mode: str = "upper", check: bool = True) -> int:
    """Fixed point of ``f2`` above (upper) or below (lower) the fixed point ``x_star`` of ``f``.

    Upper mode needs ``f2`` upper monotone and ``f2(x) ≥uws f(x)`` everywhere.
    Lower mode needs ``f2`` lower monotone and ``f(x) ≥lws f2(x)`` everywhere.
    """
    if mode not in ("upper", "lower"):
        raise ValueError("mode must be 'upper' or 'lower'")
    o = f.order
    if x_star not in f(x_star):
        raise HypothesisError("x* is not a fixed point of F")
    if check:
        cls = classify(f2)
        if mode == "upper":
            if not cls.in_F_plus:
                raise HypothesisError("F' is not upper monotone")
            if not dominates_pointwise(f2, f, "upper"):
                raise HypothesisError("F'(x) does not upper weak set dominate F(x) everywhere")
        else:
            if not cls.in_F_minus:
                raise HypothesisError("F' is not lower monotone")
            if not dominates_pointwise(f, f2, "lower"):
                raise HypothesisError("F(x) does not lower weak set dominate F'(x) everywhere")
    x2 = lift(f2, x_star, mode)
    ok = o.leq(x_star, x2) if mode == "upper" else o.leq(x2, x_star)
    if x2 not in f2(x2) or not ok:
        raise TheoremViolation("lifted point is not an ordered fixed point")
    return x2


def compare_fixed_points(f: Correspondence, f2: Correspondence, mode: str) -> bool:
    """Set-order comparison ``Fp(f2)`` over ``Fp(f)`` by brute force."""
    a, b = fixed_points(f), fixed_points(f2)
    if mode == "upper":
        return uws(f.order, b, a)
    if mode == "lower":
        return lws(f.order, b, a)
    return uws(f.order, b, a) and lws(f.order, b, a)


# gallery


@dataclass
class GalleryInstance:
    name: str
    poset: FinitePoset
    correspondence: Correspondence
    facts: dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class FactCheck:
    fact: str
    expected: object
    observed: object

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


GALLERY_NAMES = ("swap-no-xplus", "three-point-no-uws", "lws-no-minimal-discrete-analogue", "figure2", "figure3-supp")


def _labels(p: FinitePoset, s: Iterable[int]) -> tuple:
    return tuple(p.label(i) for i in sorted(s))


def gallery(name: str) -> GalleryInstance:
    if name == "swap-no-xplus":
        p = FinitePoset.from_relation([(0, 1), (1, 0)], [])
        f = Correspondence.from_labels(p, {(0, 1): [(1, 0)], (1, 0): [(0, 1)]})
        facts = {"uws": True, "lws": True, "x_plus": (), "x_minus": (), "fixed_points": ()}
    elif name == "three-point-no-uws":
        pts = [(0, 0), (0, 1), (1, 0)]
        p = FinitePoset.from_relation(pts, [((0, 0), (0, 1)), ((0, 0), (1, 0))])
        f = Correspondence.from_labels(p, {(0, 0): [(0, 1), (1, 0)], (0, 1): [(1, 0)], (1, 0): [(0, 1)]})
        facts = {"uws": False, "lws": True, "x_plus": ((0, 0),), "fixed_points": ()}
    elif name == "lws-no-minimal-discrete-analogue":
        from fractions import Fraction

        pts = [Fraction(i, 4) for i in range(5)]
        p = chain(pts)
        half = Fraction(1, 2)
        f = Correspondence(p, {i: [j for j in range(5) if pts[j] >= (pts[i] if i else half)] for i in range(5)})
        facts = {
            "uws": True,
            "lws": False,
            "in_F_plus": True,
            "fixed_points": tuple(pts[1:]),
            "maximal_fixed_points": (pts[-1],),
            "minimal_fixed_points": (pts[1],),
        }
    elif name == "figure2":
        p = _figure_domain((1, 2, 3), (1, 2))
        f = Correspondence.from_labels(
            p,
            {
                (1, 1): [(1, 2), (2, 1)],
                (2, 1): [(1, 2), (3, 2)],
                (1, 2): [(2, 1), (3, 2)],
                (2, 2): [(2, 2), (3, 2)],
                (3, 1): [(3, 2)],
                (3, 2): [(3, 2)],
            },
        )
        facts = {
            "uws": True,
            "lws": True,
            "fixed_points": ((2, 2), (3, 2)),
            "minimal_fixed_points": ((2, 2),),
            "terminal_fixed_points_from_(1,1)": ((3, 2),),
            "minimal_fixed_point_reachable_from_(1,1)": False,
        }
    elif name == "figure3-supp":
        p = _figure_domain((1, 2), (1, 2))
        f = Correspondence.from_labels(
            p,
            {(1, 1): [(1, 2), (2, 1)], (2, 1): [(2, 1), (2, 2)], (1, 2): [(2, 2)], (2, 2): [(2, 2)]},
        )
        facts = {
            "uws": True,
            "lws": True,
            "fixed_points": ((2, 1), (2, 2)),
            "minimal_fixed_points": ((2, 1),),
            "minimal_point_trace_from_(1,1)": ((1, 1), (1, 2), (2, 2)),
            "terminal_fixed_points_from_(1,1)": ((2, 1), (2, 2)),
        }
    else:
        raise UnknownGalleryName(f"unknown gallery instance {name!r}; known: {', '.join(GALLERY_NAMES)}")
    return GalleryInstance(name, p, f, facts)


def _figure_domain(xs: Sequence[int], ys: Sequence[int]) -> FinitePoset:
    return product_poset(chain(list(xs)), chain(list(ys)))


def check_gallery(inst: GalleryInstance) -> list[FactCheck]:
    """Re-derive every expected fact of a gallery instance."""
    p, f = inst.poset, inst.correspondence
    cls = classify(f)
    fp = fixed_points(f)
    observed: dict[str, object] = {
        "uws": cls.uws,
        "lws": cls.lws,
        "in_F_plus": cls.in_F_plus,
        "x_plus": _labels(p, x_plus(f)),
        "x_minus": _labels(p, x_minus(f)),
        "fixed_points": _labels(p, fp),
        "maximal_fixed_points": _labels(p, maximal(p, fp)),
        "minimal_fixed_points": _labels(p, minimal(p, fp)),
    }
    if "(1,1)" in " ".join(inst.facts):
        start = p.index((1, 1))
        reach = reachable(f, start, "up")
        observed["terminal_fixed_points_from_(1,1)"] = _labels(p, reach.terminal_fixed_points)
        observed["minimal_fixed_point_reachable_from_(1,1)"] = bool(minimal(p, fp) & reach.visited)
        res = iterate(f, start, Policy.MINIMAL_POINT, "up")
        observed["minimal_point_trace_from_(1,1)"] = tuple(p.label(i) for i in res.trace)
    return [FactCheck(k, v, observed[k]) for k, v in inst.facts.items()]
