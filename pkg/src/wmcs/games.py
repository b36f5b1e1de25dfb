"""Regular games given by best-response correspondences.

Profiles are tuples of per-player strategy indices. The profile space is an
implicit product order, so even 10^6 profiles are never stored as a poset.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Mapping, Sequence

from . import config
from .choice import ObjectiveTable, argmax
from .errors import DemandAxiomViolation, HypothesisError, SizeLimitError, TheoremViolation
from .fixedpoint import Correspondence, iterate, lws, uws
from .order import FinitePoset, chain, grid
from .pareto import UtilityProfile, pareto_set

Profile = tuple[int, ...]


class ProfileSpace:
    """Product order over player strategy posets, indexed in lexicographic profile order."""

    def __init__(self, posets: Sequence[FinitePoset]):
        self.posets = tuple(posets)
        self.sizes = tuple(p.size for p in posets)
        total = 1
        for s in self.sizes:
            total *= s
        self._size = total

    @property
    def size(self) -> int:
        return self._size

    def encode(self, prof: Profile) -> int:
        k = 0
        for s, n in zip(prof, self.sizes):
            k = k * n + s
        return k

    def decode(self, k: int) -> Profile:
        out = []
        for n in reversed(self.sizes):
            out.append(k % n)
            k //= n
        return tuple(reversed(out))

    def leq(self, i: int, j: int) -> bool:
        a, b = self.decode(i), self.decode(j)
        return all(p.leq(x, y) for p, x, y in zip(self.posets, a, b))

    def label(self, i: int):
        return tuple(p.label(s) for p, s in zip(self.posets, self.decode(i)))

    def profiles(self) -> Iterator[Profile]:
        return product(*(range(n) for n in self.sizes))


def _leq_profile(posets: Sequence[FinitePoset], a: Profile, b: Profile) -> bool:
    return all(p.leq(x, y) for p, x, y in zip(posets, a, b))


# best-response rules


@dataclass
class UtilityRule:
    """Maximize ``payoff(own, s_minus)``."""

    payoff: Callable[[int, Profile], Fraction]

    def best_response(self, poset: FinitePoset, s_minus: Profile) -> frozenset[int]:
        table = ObjectiveTable([self.payoff(s, s_minus) for s in range(poset.size)])
        return argmax(poset, range(poset.size), table)


@dataclass
class ParetoRule:
    """Pareto optimal choices of the sub-player profile ``profile(s_minus)``."""

    profile: Callable[[Profile], UtilityProfile]

    def best_response(self, poset: FinitePoset, s_minus: Profile) -> frozenset[int]:
        return pareto_set(self.profile(s_minus))


@dataclass
class ExplicitRule:
    table: Mapping[Profile, frozenset[int]]

    def best_response(self, poset: FinitePoset, s_minus: Profile) -> frozenset[int]:
        return frozenset(self.table[s_minus])


BRRule = UtilityRule | ParetoRule | ExplicitRule


class GameDef:
    def __init__(self, players: Sequence[str], posets: Sequence[FinitePoset], rules: Sequence[BRRule]):
        if not (len(players) == len(posets) == len(rules)) or not players:
            raise ValueError("players, strategy posets and rules must align")
        self.players = tuple(players)
        self.posets = tuple(posets)
        self.rules = tuple(rules)
        self.space = ProfileSpace(posets)
        self._br: dict[tuple[int, Profile], frozenset[int]] = {}

    @property
    def n(self) -> int:
        return len(self.players)

    def opponents(self, i: int) -> list[FinitePoset]:
        return [p for j, p in enumerate(self.posets) if j != i]

    def opponent_profiles(self, i: int) -> Iterator[Profile]:
        return product(*(range(p.size) for p in self.opponents(i)))

    def best_response(self, i: int, s_minus: Profile) -> frozenset[int]:
        key = (i, tuple(s_minus))
        br = self._br.get(key)
        if br is None:
            br = self.rules[i].best_response(self.posets[i], key[1])
            if not br:
                raise ValueError(f"empty best response for {self.players[i]}")
            self._br[key] = br
        return br

    def correspondence(self) -> Correspondence:
        """The product best-response correspondence on the profile space."""
        space = self.space

        def img(k: int):
            prof = space.decode(k)
            parts = [sorted(self.best_response(i, minus(prof, i))) for i in range(self.n)]
            return [space.encode(t) for t in product(*parts)]

        return Correspondence(space, img)


def minus(prof: Profile, i: int) -> Profile:
    return prof[:i] + prof[i + 1:]


def best_response(game: GameDef, i: int, s_minus: Profile) -> frozenset[int]:
    return game.best_response(i, s_minus)


# classification and equilibria


@dataclass(frozen=True)
class WSCReport:
    in_G_plus: bool
    in_G_minus: bool
    upper_monotone: tuple[bool, ...]
    lower_monotone: tuple[bool, ...]
    witness_plus: Profile | None
    witness_minus: Profile | None
    violation: tuple | None = None


def _br_monotone(game: GameDef, i: int, test) -> tuple | None:
    opp = game.opponents(i)
    profs = list(game.opponent_profiles(i))
    pi = game.posets[i]
    for a in profs:
        ba = game.best_response(i, a)
        for b in profs:
            if a != b and _leq_profile(opp, a, b):
                if not test(pi, game.best_response(i, b), ba):
                    return (i, a, b)
    return None


def _start_profile(game: GameDef, direction: str) -> Profile | None:
    for prof in game.space.profiles():
        ok = True
        for i in range(game.n):
            p = game.posets[i]
            br = game.best_response(i, minus(prof, i))
            if direction == "up":
                hit = any(p.leq(prof[i], y) for y in br)
            else:
                hit = any(p.leq(y, prof[i]) for y in br)
            if not hit:
                ok = False
                break
        if ok:
            return prof
    return None


def classify_wsc(game: GameDef) -> WSCReport:
    up, down = [], []
    violation = None
    for i in range(game.n):
        vu = _br_monotone(game, i, uws)
        vl = _br_monotone(game, i, lws)
        up.append(vu is None)
        down.append(vl is None)
        violation = violation or vu or vl
    wp = _start_profile(game, "up")
    wm = _start_profile(game, "down")
    return WSCReport(
        in_G_plus=all(up) and wp is not None,
        in_G_minus=all(down) and wm is not None,
        upper_monotone=tuple(up),
        lower_monotone=tuple(down),
        witness_plus=wp,
        witness_minus=wm,
        violation=violation,
    )


def nash_set(game: GameDef, check: bool = False) -> list[Profile]:
    """All pure equilibria in lexicographic profile order."""
    if game.space.size > config.MAX_PROFILES:
        raise SizeLimitError(f"{game.space.size} profiles exceed the enumeration cap {config.MAX_PROFILES}")
    eq = [
        prof
        for prof in game.space.profiles()
        if all(prof[i] in game.best_response(i, minus(prof, i)) for i in range(game.n))
    ]
    if check and not eq:
        rep = classify_wsc(game)
        if rep.in_G_plus or rep.in_G_minus:
            raise TheoremViolation("game with weak strategic complementarities has no equilibrium")
    return eq


def _profiles_dominate(posets, hi: Sequence[Profile], lo: Sequence[Profile], mode: str) -> bool:
    up = all(any(_leq_profile(posets, x, y) for y in hi) for x in lo)
    down = all(any(_leq_profile(posets, x, y) for x in lo) for y in hi)
    return {"uws": up, "lws": down, "ws": up and down}[mode]


def br_dominates(game_hi: GameDef, game_lo: GameDef, mode: str) -> bool:
    """Pointwise ``B̃_i(s_{-i})`` over ``B_i(s_{-i})`` in the upper or lower weak order."""
    test = uws if mode == "uws" else lws
    for i in range(game_lo.n):
        p = game_lo.posets[i]
        for s in game_lo.opponent_profiles(i):
            if not test(p, game_hi.best_response(i, s), game_lo.best_response(i, s)):
                return False
    return True


@dataclass
class NashComparison:
    holds: bool
    eq: list[Profile]
    eq_tilde: list[Profile]
    lifts: dict[str, dict[Profile, Profile]] = field(default_factory=dict)


def nash_compare(game: GameDef, game_t: GameDef, mode: str = "ws") -> NashComparison:
    """Compare ``Eq(game_t)`` with ``Eq(game)``; every premise is verified first.

    Lifts map each equilibrium of one game to an ordered equilibrium of the
    other, found by iterating the product best response from it.
    """
    if mode not in ("uws", "lws", "ws"):
        raise ValueError("mode must be uws, lws or ws")
    eq = nash_set(game)
    eq_t = nash_set(game_t)
    lifts: dict[str, dict[Profile, Profile]] = {}
    space = game.space
    if mode in ("uws", "ws"):
        if not eq:
            raise HypothesisError("the lower game has no equilibrium")
        if not classify_wsc(game_t).in_G_plus:
            raise HypothesisError("the higher game is not upper monotone")
        if not br_dominates(game_t, game, "uws"):
            raise HypothesisError("best responses are not upper weak set ordered")
        f_t = game_t.correspondence()
        lifts["upper"] = {e: space.decode(_lift(f_t, space.encode(e), "up")) for e in eq}
    if mode in ("lws", "ws"):
        if not eq_t:
            raise HypothesisError("the higher game has no equilibrium")
        if not classify_wsc(game).in_G_minus:
            raise HypothesisError("the lower game is not lower monotone")
        if not br_dominates(game_t, game, "lws"):
            raise HypothesisError("best responses are not lower weak set ordered")
        f = game.correspondence()
        lifts["lower"] = {e: space.decode(_lift(f, space.encode(e), "down")) for e in eq_t}
    holds = _profiles_dominate(game.posets, eq_t, eq, mode)
    eq_set, eq_t_set = set(eq), set(eq_t)
    for e, l in lifts.get("upper", {}).items():
        if l not in eq_t_set or not _leq_profile(game.posets, e, l):
            raise TheoremViolation("upper lift is not an ordered equilibrium")
    for e, l in lifts.get("lower", {}).items():
        if l not in eq_set or not _leq_profile(game.posets, l, e):
            raise TheoremViolation("lower lift is not an ordered equilibrium")
    return NashComparison(holds, eq, eq_t, lifts)


def _lift(f: Correspondence, k: int, direction: str) -> int:
    res = iterate(f, k, direction=direction)
    if res.fixed_point is None:
        raise TheoremViolation("best-response iteration hit a dead end")
    return res.fixed_point


# Bertrand


Demand = Callable[[int, tuple[Fraction, ...]], Fraction]


@dataclass
class BertrandSpec:
    price_grids: tuple[tuple[Fraction, ...], ...]
    demand: Demand
    costs: tuple[Callable[[Fraction], Fraction], ...]
    marginal_costs: tuple[Fraction, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.price_grids)

    def prices(self, prof: Profile) -> tuple[Fraction, ...]:
        return tuple(g[k] for g, k in zip(self.price_grids, prof))

    def profit(self, i: int, prices: tuple[Fraction, ...]) -> Fraction:
        q = self.demand(i, prices)
        return prices[i] * q - self.costs[i](q)


def linear_cost(c) -> Callable[[Fraction], Fraction]:
    c = Fraction(c)
    return lambda q: c * q


def pure_demand(i: int, prices: tuple[Fraction, ...]) -> Fraction:
    low = min(prices)
    if prices[i] != low:
        return Fraction(0)
    return Fraction(1, sum(1 for p in prices if p == low))


def pure_bertrand(grids: Sequence[Sequence], costs: Sequence) -> BertrandSpec:
    """Split-demand price competition with constant marginal costs ``costs``."""
    gs = tuple(tuple(sorted(Fraction(p) for p in g)) for g in grids)
    cs = tuple(Fraction(c) for c in costs)
    return BertrandSpec(gs, pure_demand, tuple(linear_cost(c) for c in cs), cs)


def linear_demand(intercept, own_slope, cross_slope) -> Demand:
    """``max(0, a - b p_i + c Σ_{j≠i} p_j)``."""
    a, b, c = Fraction(intercept), Fraction(own_slope), Fraction(cross_slope)

    def d(i: int, prices: tuple[Fraction, ...]) -> Fraction:
        others = sum(prices) - prices[i]
        return max(Fraction(0), a - b * prices[i] + c * others)

    return d


def _opp_profiles(spec: BertrandSpec, i: int) -> list[tuple[Fraction, ...]]:
    return list(product(*(g for j, g in enumerate(spec.price_grids) if j != i)))


def _with(i: int, own: Fraction, opp: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    return opp[:i] + (own,) + opp[i:]


@dataclass(frozen=True)
class DemandReport:
    d1: bool
    d2: bool
    convex_costs: bool
    witness: tuple | None

    @property
    def ok(self) -> bool:
        return self.d1 and self.d2 and self.convex_costs


def _vec_lt(a: Sequence, b: Sequence) -> bool:
    return all(x <= y for x, y in zip(a, b)) and tuple(a) != tuple(b)


def validate_demand(spec: BertrandSpec, strict: bool = False) -> DemandReport:
    d1 = d2 = True
    witness = None
    for i in range(spec.n):
        grid_i = spec.price_grids[i]
        opps = _opp_profiles(spec, i)
        for opp in opps:
            for a, b in zip(grid_i, grid_i[1:]):
                if spec.demand(i, _with(i, b, opp)) > spec.demand(i, _with(i, a, opp)):
                    d1 = False
                    witness = witness or ("D1-own", i, a, b, opp)
        for o1 in opps:
            for o2 in opps:
                if not _vec_lt(o1, o2):
                    continue
                for p in grid_i:
                    if spec.demand(i, _with(i, p, o1)) > spec.demand(i, _with(i, p, o2)):
                        d1 = False
                        witness = witness or ("D1-cross", i, p, o1, o2)
                for k, p in enumerate(grid_i):
                    base = spec.demand(i, _with(i, p, o1))
                    if base <= 0:
                        continue
                    base2 = spec.demand(i, _with(i, p, o2))
                    for p2 in grid_i[k + 1:]:
                        lhs = spec.demand(i, _with(i, p2, o1)) / base
                        if base2 <= 0:
                            d2 = False
                            witness = witness or ("D2", i, p, p2, o1, o2)
                            continue
                        if lhs > spec.demand(i, _with(i, p2, o2)) / base2:
                            d2 = False
                            witness = witness or ("D2", i, p, p2, o1, o2)
    convex = _costs_convex(spec)
    rep = DemandReport(d1, d2, convex, witness)
    if strict and not rep.ok:
        raise DemandAxiomViolation("demand or cost axioms fail", witness)
    return rep


def achievable_quantities(spec: BertrandSpec, i: int) -> list[Fraction]:
    qs = {spec.demand(i, spec.prices(prof)) for prof in product(*(range(len(g)) for g in spec.price_grids))}
    return sorted(qs)


def _costs_convex(spec: BertrandSpec) -> bool:
    for i in range(spec.n):
        qs = achievable_quantities(spec, i)
        cs = [spec.costs[i](q) for q in qs]
        if any(b < a for a, b in zip(cs, cs[1:])):
            return False
        slopes = [(c2 - c1) / (q2 - q1) for q1, q2, c1, c2 in zip(qs, qs[1:], cs, cs[1:])]
        if any(s2 < s1 for s1, s2 in zip(slopes, slopes[1:])):
            return False
    return True


def bertrand_build(spec: BertrandSpec, validate: bool = True) -> GameDef:
    if validate:
        validate_demand(spec, strict=True)
    posets = [chain(list(g), cap=len(g)) for g in spec.price_grids]
    rules = []
    for i in range(spec.n):
        def payoff(own: int, s_minus: Profile, i=i) -> Fraction:
            prof = s_minus[:i] + (own,) + s_minus[i:]
            return spec.profit(i, spec.prices(prof))

        rules.append(UtilityRule(payoff))
    return GameDef([f"firm{i + 1}" for i in range(spec.n)], posets, rules)


def bertrand_br_monotone(spec: BertrandSpec) -> bool:
    """Best responses rise in the lower weak order with rivals' prices."""
    game = bertrand_build(spec)
    return all(_br_monotone(game, i, lws) is None for i in range(game.n))


def elasticity_shift(spec: BertrandSpec, spec_t: BertrandSpec) -> bool:
    """Demand in ``spec_t`` is positive wherever ``spec``'s is, and less elastic."""
    for i in range(spec.n):
        g = spec.price_grids[i]
        for opp in _opp_profiles(spec, i):
            for k, p in enumerate(g):
                base = spec.demand(i, _with(i, p, opp))
                if base <= 0:
                    continue
                base_t = spec_t.demand(i, _with(i, p, opp))
                if base_t <= 0:
                    return False
                for p2 in g[k + 1:]:
                    if spec.demand(i, _with(i, p2, opp)) / base > spec_t.demand(i, _with(i, p2, opp)) / base_t:
                        return False
    return True


def cost_shift(spec: BertrandSpec, spec_t: BertrandSpec) -> bool:
    """Cost differences are larger in ``spec_t`` over all achievable quantities."""
    for i in range(spec.n):
        qs = sorted(set(achievable_quantities(spec, i)) | set(achievable_quantities(spec_t, i)))
        for a, b in zip(qs, qs[1:]):
            if spec.costs[i](b) - spec.costs[i](a) > spec_t.costs[i](b) - spec_t.costs[i](a):
                return False
    return True


def equilibrium_profits(spec: BertrandSpec, game: GameDef, firm: int) -> list[Fraction]:
    return sorted({spec.profit(firm, spec.prices(e)) for e in nash_set(game)})


def bertrand_payoff_compare(spec: BertrandSpec, spec_t: BertrandSpec, firm: int) -> bool:
    """Equilibrium profits of ``firm`` are lower weak set higher in ``spec_t``."""
    if spec.marginal_costs is None or spec_t.marginal_costs is None:
        raise HypothesisError("profit comparison needs constant marginal costs")
    if any(c > ct for c, ct in zip(spec.marginal_costs, spec_t.marginal_costs)):
        raise HypothesisError("marginal costs do not weakly rise")
    if spec.marginal_costs[firm] != spec_t.marginal_costs[firm]:
        raise HypothesisError("the compared firm's marginal cost changes")
    for i in range(spec.n):
        for prof in product(*(range(len(g)) for g in spec.price_grids)):
            pr = spec.prices(prof)
            if spec.demand(i, pr) > spec_t.demand(i, pr):
                raise HypothesisError("demand does not weakly rise")
    if not elasticity_shift(spec, spec_t):
        raise HypothesisError("demand does not become less elastic")
    pi = equilibrium_profits(spec, bertrand_build(spec), firm)
    pi_t = equilibrium_profits(spec_t, bertrand_build(spec_t), firm)
    if not pi or not pi_t:
        raise TheoremViolation("generalized Bertrand game without equilibrium")
    return all(any(x <= y for x in pi) for y in pi_t)


# beauty contest


@dataclass(frozen=True)
class BeautyContestSpec:
    n: int = 2
    step: Fraction = Fraction(1, 4)
    theta: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("at least two players")
        step = Fraction(self.step)
        if step <= 0 or (1 / step).denominator != 1:
            raise ValueError("grid step must divide 1")


def beauty_contest_build(spec: BeautyContestSpec) -> GameDef:
    k = int(1 / Fraction(spec.step))
    pts = [Fraction(i, k) for i in range(k + 1)]
    total = (len(pts) ** 2) ** spec.n
    if total > config.MAX_PROFILES:
        raise SizeLimitError(f"{total} profiles exceed the enumeration cap")
    s = grid(pts, 2, cap=len(pts) ** 2)
    ta, tb = (Fraction(t) for t in spec.theta)
    cache: dict[tuple[Fraction, Fraction], UtilityProfile] = {}

    def profile(s_minus: Profile) -> UtilityProfile:
        xs = [s.label(j) for j in s_minus]
        wa = sum(x for x, _ in xs) / (spec.n - 1) + ta
        wb = sum(y for _, y in xs) / (spec.n - 1) + tb
        key = (wa, wb)
        if key not in cache:
            u1 = lambda v: -(v[0] - 2 * wa) ** 2 - (v[1] - wb) ** 2
            u2 = lambda v: -(v[0] - wa) ** 2 - (v[1] - 2 * wb) ** 2
            cache[key] = UtilityProfile.from_functions(s, [u1, u2])
        return cache[key]

    return GameDef([f"player{i + 1}" for i in range(spec.n)], [s] * spec.n, [ParetoRule(profile) for _ in range(spec.n)])
