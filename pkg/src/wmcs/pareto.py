"""Pareto optimal choices of a group and their comparative statics."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .choice import ObjectiveTable, argmax, single_crossing, supermodular
from .errors import HypothesisError, NotLatticeError
from .order import FinitePoset, bits, grid, mask_of


class UtilityProfile:
    """One objective table per agent over a common poset."""

    def __init__(self, poset: FinitePoset, tables: Sequence[ObjectiveTable], agents: Sequence[str] | None = None):
        if not tables:
            raise ValueError("a utility profile needs at least one agent")
        for t in tables:
            if len(t) != poset.size:
                raise ValueError("every table must be total over the poset")
        self.poset = poset
        self.tables = tuple(tables)
        self.agents = tuple(agents) if agents is not None else tuple(f"agent{i}" for i in range(len(tables)))

    @classmethod
    def from_functions(cls, poset: FinitePoset, fns: Sequence[Callable]) -> "UtilityProfile":
        return cls(poset, [ObjectiveTable.from_function(poset, f) for f in fns])

    def __len__(self) -> int:
        return len(self.tables)

    def vector(self, x: int) -> tuple[Fraction, ...]:
        return tuple(t[x] for t in self.tables)


def pareto_dominates(u: UtilityProfile, y: int, x: int) -> bool:
    """``y`` is weakly better for every agent and strictly better for one."""
    strict = False
    for t in u.tables:
        if t[y] < t[x]:
            return False
        if t[y] > t[x]:
            strict = True
    return strict


def pareto_set(u: UtilityProfile, within: Iterable[int] | None = None) -> frozenset[int]:
    dom = list(range(u.poset.size)) if within is None else sorted(within)
    if len(u) == 1:
        return argmax(u.poset, dom, u.tables[0])
    vecs = {x: u.vector(x) for x in dom}
    out = []
    for x in dom:
        vx = vecs[x]
        if not any(_dominates_vec(vecs[y], vx) for y in dom if y != x):
            out.append(x)
    return frozenset(out)


def _dominates_vec(a: tuple, b: tuple) -> bool:
    return all(p >= q for p, q in zip(a, b)) and a != b


def dominating_chain(u: UtilityProfile, x: int) -> int:
    """Pareto optimal point that weakly improves every agent on ``x``.

    Built by the sequential argmax recursion: agent i maximizes over the points
    that keep everybody at least as well off as the previous link.
    """
    n = u.poset.size
    cur = x
    for t in u.tables:
        floor = u.vector(cur)
        feasible = [y for y in range(n) if all(s[y] >= f for s, f in zip(u.tables, floor))]
        best = max(t[y] for y in feasible)
        cur = min(y for y in feasible if t[y] == best)
    return cur


def phi_membership(u: UtilityProfile, x: int) -> bool:
    """``x`` maximizes each agent's utility among points the other agents weakly prefer to ``x``."""
    n = u.poset.size
    vx = u.vector(x)
    for i, t in enumerate(u.tables):
        upper = [y for y in range(n) if all(u.tables[j][y] >= vx[j] for j in range(len(u)) if j != i)]
        if t[x] < max(t[y] for y in upper):
            return False
    return True


@dataclass(frozen=True)
class WeightSequence:
    steps: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("weight sequence is empty")
        width = len(self.steps[0])
        if len(self.steps) > width:
            raise ValueError("more steps than agents")
        for phi in self.steps:
            if len(phi) != width or any(w < 0 for w in phi) or not any(phi):
                raise ValueError("each step must be a nonzero nonnegative vector over agents")
        if any(w <= 0 for w in self.steps[-1]):
            raise ValueError("the last step must be strictly positive")

    @classmethod
    def of(cls, *steps: Sequence) -> "WeightSequence":
        return cls(tuple(tuple(Fraction(w) for w in s) for s in steps))


def sequential_weighted_max(u: UtilityProfile, w: WeightSequence) -> frozenset[int]:
    if len(w.steps[0]) != len(u):
        raise ValueError("weight vectors must have one entry per agent")
    current = list(range(u.poset.size))
    for phi in w.steps:
        score = {x: sum(c * t[x] for c, t in zip(phi, u.tables)) for x in current}
        best = max(score.values())
        current = [x for x in current if score[x] == best]
    return frozenset(current)


def increasing_differences(p: FinitePoset, v: ObjectiveTable, u: ObjectiveTable) -> bool:
    for a in range(p.size):
        for b in bits(p.up_mask(a) & ~(1 << a)):
            if v[b] - v[a] < u[b] - u[a]:
                return False
    return True


def profile_dominates(kind: str, v: UtilityProfile, u: UtilityProfile) -> bool:
    if len(v) != len(u):
        raise ValueError("profiles have different agent counts")
    p = u.poset
    if kind == "SingleCrossing":
        return all(single_crossing(p, vi, ui) for vi, ui in zip(v.tables, u.tables))
    if kind == "IncreasingDifferences":
        return all(increasing_differences(p, vi, ui) for vi, ui in zip(v.tables, u.tables))
    raise ValueError(f"unknown profile dominance {kind!r}")


def supermodular_profile(u: UtilityProfile) -> bool:
    if not u.poset.is_lattice():
        raise NotLatticeError("supermodularity needs a lattice")
    return all(supermodular(u.poset, t) for t in u.tables)


@dataclass(frozen=True)
class ParetoComparison:
    holds: bool
    pareto_u: frozenset[int]
    pareto_v: frozenset[int]
    witness: int | None
    empirical: bool


def pareto_wmcs_check(v: UtilityProfile, u: UtilityProfile, hypothesis: str = "SingleCrossing") -> ParetoComparison:
    """Whether ``P(v) ≥ws P(u)`` under a verified dominance hypothesis.

    Under single crossing the domain must be a chain. Under increasing
    differences both profiles must be supermodular; grids cannot satisfy the
    remaining convexity assumptions, so that verdict is marked empirical.
    """
    p = u.poset
    if not profile_dominates(hypothesis, v, u):
        raise HypothesisError(f"{hypothesis} dominance does not hold")
    if hypothesis == "SingleCrossing" and not p.is_chain():
        raise HypothesisError("single-crossing comparison needs a totally ordered domain")
    if hypothesis == "IncreasingDifferences" and not (supermodular_profile(u) and supermodular_profile(v)):
        raise HypothesisError("profiles are not supermodular")
    pu, pv = pareto_set(u), pareto_set(v)
    witness = None
    hv, hu = mask_of(pv), mask_of(pu)
    for x in sorted(pu):
        if not p.up_mask(x) & hv:
            witness = x
            break
    if witness is None:
        for y in sorted(pv):
            if not p.down_mask(y) & hu:
                witness = y
                break
    return ParetoComparison(witness is None, pu, pv, witness, hypothesis != "SingleCrossing")


# worked instances


def quarter_grid(n: int = 4) -> list[Fraction]:
    return [Fraction(i, n) for i in range(n + 1)]


def kinked_profiles(points: Sequence[Fraction] | None = None) -> tuple[UtilityProfile, UtilityProfile]:
    """Two-agent profiles on a chain with a jump at one half (closed version)."""
    from .order import chain

    pts = list(points) if points is not None else quarter_grid(4)
    c = chain(pts, cap=len(pts))
    half = Fraction(1, 2)
    u1 = lambda x: 2 - x if x < half else 3 - x
    u2 = lambda x: 1 - x
    quarter = Fraction(1, 4)

    def v1(x):
        if x < quarter:
            return x
        return half - x if x < half else half + x

    def v2(x):
        if x < quarter:
            return x
        return half - x if x < half else (x - half) / 4

    return UtilityProfile.from_functions(c, [u1, u2]), UtilityProfile.from_functions(c, [v1, v2])


def two_division_profile(step: Fraction, omega: tuple[Fraction, Fraction], poset: FinitePoset | None = None) -> UtilityProfile:
    """Quadratic two-division utilities on the unit-square grid, targets scaled by ``omega``."""
    if poset is None:
        n = int(1 / step)
        poset = grid([Fraction(i, n) for i in range(n + 1)], 2, cap=(n + 1) ** 2)
    wa, wb = omega
    u1 = lambda s: -(s[0] - 2 * wa) ** 2 - (s[1] - wb) ** 2
    u2 = lambda s: -(s[0] - wa) ** 2 - (s[1] - 2 * wb) ** 2
    return UtilityProfile.from_functions(poset, [u1, u2])
