"""Choice rules for firms and workers."""
from __future__ import annotations

from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Sequence

from .. import config
from ..errors import CycleError, InfeasibleCapacityError, RuleDomainError, SizeLimitError
from ..order import bits, mask_of
from .economy import Family, canonical_family


class ChoiceRule:
    """Base class: ``choose(m)`` returns the canonical family ``C(m ∩ domain)``."""

    domain: int = 0

    def _choose(self, m: int) -> Iterable[int]:
        raise NotImplementedError

    def choose(self, m: int) -> Family:
        m &= self.domain
        fam = canonical_family(self._choose(m))
        if not fam:
            raise RuleDomainError(f"{type(self).__name__} chose nothing from {sorted(bits(m))}")
        for y in fam:
            if y & ~m:
                raise RuleDomainError(f"{type(self).__name__} chose contracts outside the offer set")
        return fam

    def reject(self, m: int) -> Family:
        m &= self.domain
        return canonical_family(m & ~y for y in self.choose(m))


def choice(rule: ChoiceRule, offer: Iterable[int]) -> list[frozenset[int]]:
    return [frozenset(bits(y)) for y in rule.choose(mask_of(offer))]


def rejection(rule: ChoiceRule, offer: Iterable[int]) -> list[frozenset[int]]:
    return [frozenset(bits(y)) for y in rule.reject(mask_of(offer))]


class ExplicitTable(ChoiceRule):
    """Choices listed per offer set; unlisted offer sets follow ``default``.

    ``default`` is ``"empty"`` (choose nothing) or ``"all"`` (keep everything).
    """

    def __init__(self, domain: Iterable[int], table: Mapping[Iterable[int], Iterable[Iterable[int]]], default: str = "empty"):
        if default not in ("empty", "all"):
            raise RuleDomainError(f"unknown default policy {default!r}")
        self.domain = mask_of(domain)
        self.default = default
        self.table: dict[int, Family] = {}
        for key, fam in table.items():
            k = mask_of(key)
            if k & ~self.domain:
                raise RuleDomainError(f"offer set {sorted(key)} leaves the rule's domain")
            masks = [mask_of(y) for y in fam]
            if not masks:
                raise RuleDomainError(f"empty family at {sorted(key)}")
            for y in masks:
                if y & ~k:
                    raise RuleDomainError(f"chosen set {sorted(bits(y))} is not inside {sorted(key)}")
            self.table[k] = canonical_family(masks)

    def _choose(self, m: int) -> Iterable[int]:
        fam = self.table.get(m)
        if fam is not None:
            return fam
        return (0,) if self.default == "empty" else (m,)


class FunctionRule(ChoiceRule):
    """Choices computed by ``fn(frozenset) -> iterable of sets``."""

    def __init__(self, domain: Iterable[int], fn: Callable[[frozenset[int]], Iterable[Iterable[int]]]):
        self.domain = mask_of(domain)
        self.fn = fn

    def _choose(self, m: int) -> Iterable[int]:
        return [mask_of(y) for y in self.fn(frozenset(bits(m)))]


class RejectAll(ChoiceRule):
    def __init__(self, domain: Iterable[int]):
        self.domain = mask_of(domain)

    def _choose(self, m: int) -> Iterable[int]:
        return (0,)


class WorkerFromPartialOrder(ChoiceRule):
    """Unit demand: every undominated option among the offers and ``None`` (unemployment).

    ``prefers`` lists pairs ``(a, b)`` meaning ``a`` is strictly better than
    ``b``; either side may be ``None``. The relation is closed transitively.
    """

    def __init__(self, domain: Iterable[int], prefers: Iterable[tuple[int | None, int | None]]):
        self.domain = mask_of(domain)
        opts = list(bits(self.domain)) + [None]
        better = {o: set() for o in opts}
        for a, b in prefers:
            if a not in better or b not in better:
                raise RuleDomainError(f"preference pair {(a, b)} mentions an unknown option")
            better[b].add(a)
        for k in opts:
            for o in opts:
                if k in better[o]:
                    better[o] |= better[k]
        for o in opts:
            if o in better[o]:
                raise CycleError(f"preference cycle through {o!r}")
        self.better = {o: frozenset(s) for o, s in better.items()}

    @classmethod
    def from_ranking(cls, ranking: Sequence[int | None], domain: Iterable[int] | None = None) -> "WorkerFromPartialOrder":
        """Strict list, best first; ``None`` marks the outside option and
        everything after it (or missing from the list) is unacceptable."""
        if None not in ranking:
            ranking = list(ranking) + [None]
        dom = set(domain) if domain is not None else set()
        dom |= {c for c in ranking if c is not None}
        order = list(ranking) + sorted(dom - set(ranking))
        pairs = [(a, b) for i, a in enumerate(order) for b in order[i + 1:]]
        return cls(dom, pairs)

    def _choose(self, m: int) -> Iterable[int]:
        avail = set(bits(m)) | {None}
        out = []
        for o in avail:
            if not (self.better[o] & avail):
                out.append(0 if o is None else 1 << o)
        return out


class ResponsiveWithCapacity(ChoiceRule):
    """Takes the best ``capacity`` acceptable offers from a strict list."""

    def __init__(self, ranking: Sequence[int], capacity: int, domain: Iterable[int] | None = None):
        if capacity < 0:
            raise RuleDomainError("capacity must be nonnegative")
        self.ranking = tuple(ranking)
        self.capacity = capacity
        self.domain = mask_of(self.ranking) | (mask_of(domain) if domain is not None else 0)

    def _choose(self, m: int) -> Iterable[int]:
        picked = [c for c in self.ranking if m >> c & 1][: self.capacity]
        return (mask_of(picked),)


def indifferent_slots(domain: Iterable[int], slots: int = 1) -> FunctionRule:
    """Any ``slots`` offers (all of them if fewer), with no ranking among them."""

    def fn(offer):
        k = min(slots, len(offer))
        return [set(c) for c in combinations(sorted(offer), k)]

    return FunctionRule(domain, fn)


class Feasibility:
    """Monotone 0/1 map on count vectors, given by a predicate or by maximal feasible vectors."""

    def __init__(self, dims: int, predicate: Callable[[tuple[int, ...]], bool] | None = None, maximal: Sequence[Sequence[int]] | None = None):
        if (predicate is None) == (maximal is None):
            raise ValueError("give exactly one of predicate or maximal vectors")
        self.dims = dims
        self.maximal = tuple(tuple(v) for v in maximal) if maximal is not None else None
        if self.maximal is not None:
            for v in self.maximal:
                if len(v) != dims or any(c < 0 for c in v):
                    raise ValueError(f"bad maximal vector {v}")
        self._pred = predicate
        if not self(tuple([0] * dims)):
            raise ValueError("the zero vector must be feasible")

    @classmethod
    def from_maximal(cls, vectors: Sequence[Sequence[int]]) -> "Feasibility":
        vs = [tuple(v) for v in vectors]
        if not vs:
            raise ValueError("need at least one maximal vector")
        return cls(len(vs[0]), maximal=vs)

    @classmethod
    def total_at_most(cls, dims: int, bound: int, caps: Sequence[int] | None = None) -> "Feasibility":
        caps = tuple(caps) if caps is not None else None
        return cls(dims, predicate=lambda w: sum(w) <= bound and (caps is None or all(a <= q for a, q in zip(w, caps))))

    def __call__(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        if self.maximal is not None:
            return any(all(a <= b for a, b in zip(w, v)) for v in self.maximal)
        return bool(self._pred(w))

    def box(self, bounds: Sequence[int]):
        return product(*(range(b + 1) for b in bounds))

    def check_monotone(self, bounds: Sequence[int]) -> tuple | None:
        """First pair ``w ≤ w + e_i`` with ``w`` infeasible and ``w + e_i`` feasible, if any."""
        for w in self.box(bounds):
            if self(w):
                continue
            for i in range(self.dims):
                if w[i] < bounds[i]:
                    up = w[:i] + (w[i] + 1,) + w[i + 1:]
                    if self(up):
                        return w, up
        return None

    def dominated_by(self, other: "Feasibility", bounds: Sequence[int]) -> bool:
        """``self(w) ≤ other(w)`` on the box."""
        return all(other(w) or not self(w) for w in self.box(bounds))


def quasi_choice(f: Feasibility, w: Sequence[int]) -> list[tuple[int, ...]]:
    """Maximal feasible vectors below ``w``, lexicographic."""
    feas = [v for v in product(*(range(c + 1) for c in w)) if f(v)]
    fs = set(feas)
    out = []
    for v in feas:
        if not any(v[:i] + (v[i] + 1,) + v[i + 1:] in fs for i in range(len(v)) if v[i] < w[i]):
            out.append(v)
    return out


class MultidivisionInternalConstraint(ChoiceRule):
    """Divisions with strict acceptable lists under a joint feasibility constraint.

    Each division takes its top ``w_δ`` acceptable offers for some maximal
    feasible ``w`` below the vector of acceptable offer counts. By monotonicity
    (one-step improvements suffice), maximality is tested on unit steps only.
    """

    def __init__(self, rankings: Sequence[Sequence[int]], feasibility: Feasibility, domain: Iterable[int] | None = None, names: Sequence[str] | None = None):
        if len(rankings) > config.MAX_DIVISIONS:
            raise SizeLimitError(f"{len(rankings)} divisions exceed the cap of {config.MAX_DIVISIONS}")
        if feasibility.dims != len(rankings):
            raise ValueError("feasibility dimension must equal the number of divisions")
        seen: set[int] = set()
        for r in rankings:
            if len(set(r)) != len(r) or seen & set(r):
                raise RuleDomainError("each contract may appear once, in one division")
            seen |= set(r)
        self.rankings = tuple(tuple(r) for r in rankings)
        self.feasibility = feasibility
        self.names = tuple(names) if names is not None else tuple(f"d{i}" for i in range(len(rankings)))
        self.domain = mask_of(seen) | (mask_of(domain) if domain is not None else 0)
        bad = feasibility.check_monotone([len(r) for r in self.rankings])
        if bad is not None:
            raise RuleDomainError(f"feasibility is not monotone: {bad[0]} infeasible but {bad[1]} feasible")

    def counts(self, m: int) -> tuple[int, ...]:
        return tuple(sum(1 for c in r if m >> c & 1) for r in self.rankings)

    def _choose(self, m: int) -> Iterable[int]:
        acc = [[c for c in r if m >> c & 1] for r in self.rankings]
        out = []
        for v in quasi_choice(self.feasibility, [len(a) for a in acc]):
            out.append(mask_of(c for a, k in zip(acc, v) for c in a[:k]))
        return out


class HospitalSideFeasibility(MultidivisionInternalConstraint):
    """All hospitals as one agent: responsive lists, capacities and a global feasibility map."""

    def __init__(self, rankings: Sequence[Sequence[int]], capacities: Sequence[int], feasibility: Feasibility, domain: Iterable[int] | None = None, names: Sequence[str] | None = None):
        super().__init__(rankings, feasibility, domain, names)
        self.capacities = tuple(capacities)
        bounds = [max(len(r), q + 1) for r, q in zip(self.rankings, self.capacities)]
        for w in feasibility.box(bounds):
            if feasibility(w) and any(a > q for a, q in zip(w, self.capacities)):
                raise InfeasibleCapacityError(f"{w} is feasible but exceeds capacities {self.capacities}")
