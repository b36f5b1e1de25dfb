import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from wmcs.choice import ObjectiveTable
from wmcs.errors import DemandAxiomViolation, HypothesisError
from wmcs.games import (
    BertrandSpec,
    BeautyContestSpec,
    ExplicitRule,
    GameDef,
    UtilityRule,
    beauty_contest_build,
    bertrand_br_monotone,
    bertrand_build,
    bertrand_payoff_compare,
    br_dominates,
    classify_wsc,
    cost_shift,
    elasticity_shift,
    linear_cost,
    nash_compare,
    nash_set,
    pure_bertrand,
    validate_demand,
)
from wmcs.order import chain

F = Fraction
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def nash_oracle(game):
    """Profiles where no player gains by a unilateral deviation, from the rules' payoffs."""
    out = []
    for prof in product(*(range(p.size) for p in game.posets)):
        ok = True
        for i in range(game.n):
            rest = prof[:i] + prof[i + 1:]
            if prof[i] not in game.rules[i].best_response(game.posets[i], rest):
                ok = False
        if ok:
            out.append(prof)
    return out


def bertrand_oracle(spec):
    g0, g1 = spec.price_grids
    out = []
    for a, b in product(range(len(g0)), range(len(g1))):
        pr = (g0[a], g1[b])
        if all(spec.profit(0, (d, pr[1])) <= spec.profit(0, pr) for d in g0) and all(
            spec.profit(1, (pr[0], d)) <= spec.profit(1, pr) for d in g1
        ):
            out.append((a, b))
    return out


def beauty_oracle(step, theta):
    k = int(1 / step)
    pts = [F(i, k) for i in range(k + 1)]
    acts = [(a, b) for a in pts for b in pts]
    ta, tb = theta

    def br(opp):
        wa, wb = opp[0] + ta, opp[1] + tb
        vec = [(-(s[0] - 2 * wa) ** 2 - (s[1] - wb) ** 2, -(s[0] - wa) ** 2 - (s[1] - 2 * wb) ** 2) for s in acts]
        return {acts[i] for i in oracles.pareto(vec)}

    table = {s: br(s) for s in acts}
    return sorted((a, b) for a in acts for b in acts if a in table[b] and b in table[a])


def table_game(payoffs, sizes):
    """Two-player game from a payoff dict ``(i, own, opp) -> value``."""
    posets = [chain(list(range(n))) for n in sizes]
    rules = [UtilityRule(lambda own, s, i=i: payoffs[(i, own, s[0])]) for i in range(2)]
    return GameDef(["row", "col"], posets, rules)


@pytest.fixture(scope="module")
def bertrand():
    spec = pure_bertrand([range(6), range(6)], [2, 2])
    return spec, bertrand_build(spec)


class TestBestResponse:
    """Best-response rules on finite strategy posets."""

    def test_single_player_argmax(self):
        c = chain([0, 1, 2, 3])
        t = ObjectiveTable([1, 4, 4, 2])
        game = GameDef(["solo"], [c], [UtilityRule(lambda own, s: t[own])])
        assert game.best_response(0, ()) == {1, 2}
        assert nash_set(game) == [(1,), (2,)]

    def test_bertrand_against_four(self, bertrand):
        spec, game = bertrand
        # profits at prices 0..5 against 4 are -2, -1, 0, 1, 1, 0
        profits = [spec.profit(0, (F(p), F(4))) for p in range(6)]
        assert profits == [-2, -1, 0, 1, 1, 0]
        assert game.best_response(0, (4,)) == {3, 4}

    def test_explicit_rule(self):
        c = chain([0, 1])
        rule = ExplicitRule({(0,): {0}, (1,): {1}})
        game = GameDef(["a", "b"], [c, c], [rule, rule])
        assert nash_set(game) == [(0, 0), (1, 1)]

    def test_misaligned(self):
        with pytest.raises(ValueError):
            GameDef(["a"], [], [])


class TestStrategicComplementarities:
    """Upper and lower monotone best responses."""

    def test_singleton_strategies(self):
        c = chain([0])
        game = GameDef(["a", "b"], [c, c], [ExplicitRule({(0,): {0}})] * 2)
        rep = classify_wsc(game)
        assert rep.in_G_plus and rep.in_G_minus

    def test_bertrand(self, bertrand):
        _, game = bertrand
        rep = classify_wsc(game)
        assert rep.in_G_minus and not rep.in_G_plus
        assert rep.violation is not None

    def test_beauty_contest(self):
        rep = classify_wsc(beauty_contest_build(BeautyContestSpec(2, F(1, 2))))
        assert rep.in_G_plus and rep.in_G_minus


class TestEquilibria:
    """Pure equilibria against unilateral-deviation scans."""

    def test_dominant_strategy(self):
        # row and column both strictly prefer action 1 whatever the other does
        pay = {(i, own, opp): own * 2 + opp for i in range(2) for own in range(2) for opp in range(2)}
        assert nash_set(table_game(pay, (2, 2))) == [(1, 1)]

    def test_bertrand(self, bertrand):
        spec, game = bertrand
        assert nash_set(game) == bertrand_oracle(spec) == [(2, 2), (3, 3), (4, 4)]

    def test_supermodular_toy(self):
        # coordination with complementarities: payoff own * opp minus a convex cost
        pay = {(i, a, b): a * b - F(a * a, 4) for i in range(2) for a in range(3) for b in range(3)}
        game = table_game(pay, (3, 3))
        assert nash_set(game) == nash_oracle(game) == [(0, 0), (2, 2)]

    @given(seeds)
    def test_random_tables(self, seed):
        rng = random.Random(seed)
        sizes = (rng.randint(1, 4), rng.randint(1, 4))
        pay = {(i, a, b): rng.randint(0, 3) for i in range(2) for a in range(sizes[i]) for b in range(sizes[1 - i])}
        game = table_game(pay, sizes)
        assert nash_set(game) == nash_oracle(game)

    def test_beauty_contest_half_grid(self):
        spec = BeautyContestSpec(2, F(1, 2))
        game = beauty_contest_build(spec)
        assert game.space.size == 81
        eq = sorted(game.space.label(game.space.encode(e)) for e in nash_set(game))
        assert eq == beauty_oracle(F(1, 2), (0, 0))
        assert len(eq) == 9
        assert sorted((b, a) for a, b in eq) == eq

    def test_beauty_contest_corner(self):
        game = beauty_contest_build(BeautyContestSpec(2, F(1, 2), (F(1), F(1))))
        s = game.posets[0]
        top = s.index((1, 1))
        assert all(game.best_response(0, (k,)) == {top} for k in range(s.size))
        assert nash_set(game) == [(top, top)]

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            BeautyContestSpec(2, F(2, 5))


class TestComparativeStatics:
    """Ordering equilibrium sets across parameter shifts."""

    @pytest.mark.parametrize("mode", ["uws", "lws", "ws"])
    def test_identical_games(self, mode):
        game = beauty_contest_build(BeautyContestSpec(2, F(1, 2)))
        assert nash_compare(game, game, mode).holds

    def test_bertrand_cost_shift(self):
        spec = pure_bertrand([range(6), range(6)], [2, 2])
        spec_t = pure_bertrand([range(6), range(6)], [2, 4])
        g, g_t = bertrand_build(spec), bertrand_build(spec_t)
        assert cost_shift(spec, spec_t) and elasticity_shift(spec, spec_t)
        cmp = nash_compare(g, g_t, "lws")
        assert cmp.holds
        assert cmp.eq == bertrand_oracle(spec) and cmp.eq_tilde == bertrand_oracle(spec_t)
        assert bertrand_payoff_compare(spec, spec_t, 0)
        profits = sorted({spec.profit(0, spec.prices(e)) for e in cmp.eq})
        profits_t = sorted({spec_t.profit(0, spec_t.prices(e)) for e in cmp.eq_tilde})
        assert all(any(x <= y for x in profits) for y in profits_t)

    def test_bertrand_upper_comparison_refused(self):
        spec = pure_bertrand([range(6), range(6)], [2, 2])
        g = bertrand_build(spec)
        with pytest.raises(HypothesisError):
            nash_compare(g, g, "uws")

    def test_identical_payoff_compare(self, bertrand):
        spec, _ = bertrand
        assert bertrand_payoff_compare(spec, spec, 1)

    def test_own_cost_change_refused(self, bertrand):
        spec, _ = bertrand
        with pytest.raises(HypothesisError):
            bertrand_payoff_compare(spec, pure_bertrand(spec.price_grids, [3, 2]), 0)

    def test_beauty_contest_shift(self):
        game = beauty_contest_build(BeautyContestSpec(2, F(1, 4)))
        game_t = beauty_contest_build(BeautyContestSpec(2, F(1, 4), (F(1, 4), F(1, 4))))
        assert br_dominates(game_t, game, "uws") and br_dominates(game_t, game, "lws")
        cmp = nash_compare(game, game_t, "ws")
        assert cmp.holds
        lab = game.space.label
        assert sorted(lab(game.space.encode(e)) for e in cmp.eq) == beauty_oracle(F(1, 4), (0, 0))
        assert sorted(lab(game.space.encode(e)) for e in cmp.eq_tilde) == beauty_oracle(F(1, 4), (F(1, 4), F(1, 4)))


def demand_oracle(spec):
    """Own-price decrease, cross-price increase and falling relative demand, checked pointwise."""
    g0, g1 = spec.price_grids
    grids = (g0, g1)
    d1 = d2 = True
    for i in range(2):
        own, opp = grids[i], grids[1 - i]

        def q(p, o):
            return spec.demand(i, (p, o) if i == 0 else (o, p))

        for o in opp:
            for a in own:
                for b in own:
                    if a < b and q(b, o) > q(a, o):
                        d1 = False
        for o1 in opp:
            for o2 in opp:
                if o1 >= o2:
                    continue
                for p in own:
                    if q(p, o1) > q(p, o2):
                        d1 = False
                for p in own:
                    for p2 in own:
                        if p < p2 and q(p, o1) > 0:
                            if q(p, o2) <= 0 or q(p2, o1) / q(p, o1) > q(p2, o2) / q(p, o2):
                                d2 = False
    return d1, d2


class TestDemand:
    """Demand and cost axioms for price competition."""

    def test_pure_bertrand(self, bertrand):
        spec, _ = bertrand
        rep = validate_demand(spec)
        assert rep.d1 and rep.d2 and rep.convex_costs and rep.ok

    def test_increasing_own_price_demand(self):
        grid = (F(0), F(1), F(2))
        spec = BertrandSpec((grid, grid), lambda i, p: 1 + p[i], (linear_cost(0), linear_cost(0)), (F(0), F(0)))
        rep = validate_demand(spec)
        assert not rep.d1
        assert rep.witness[0] == "D1-own"
        with pytest.raises(DemandAxiomViolation):
            bertrand_build(spec)

    @given(seeds)
    def test_tabulated_logit_like(self, seed):
        rng = random.Random(seed)
        grid = tuple(sorted({F(rng.randint(0, 6)) for _ in range(4)} | {F(0)}))[:4]
        a, b = rng.randint(1, 3), rng.randint(0, 3)
        k = rng.choice([1, 2])

        def demand(i, p):
            mine, other = p[i], p[1 - i]
            return F(a + b * other, (1 + mine) ** k + other)

        spec = BertrandSpec((grid, grid), demand, (linear_cost(1), linear_cost(1)), (F(1), F(1)))
        rep = validate_demand(spec)
        assert (rep.d1, rep.d2) == demand_oracle(spec)

    def test_lws_best_responses(self):
        for n in range(2, 8):
            assert bertrand_br_monotone(pure_bertrand([range(n), range(n)], [1, n - 1]))
