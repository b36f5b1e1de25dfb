import random
from itertools import chain as iter_chain
from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wmcs.errors import HypothesisError, RuleDomainError
from wmcs.fixedpoint import fixed_points, is_lower_monotone, is_upper_monotone
from wmcs.matching.axioms import sen_alpha, sen_beta, strong_set_monotone, warni, warp, weak_substitutable
from wmcs.matching.constraints import (
    ConstraintsMarket,
    constraints_cs,
    constraints_to_contracts,
    equivalence_check,
    weak_stable_solve,
    weakly_stable,
    weakly_stable_set,
)
from wmcs.matching.economy import ContractUniverse, Economy
from wmcs.matching.instances import (
    MATCHING_GALLERY_NAMES,
    alt_stability_economy,
    budget_economy,
    entry_pair,
    exit_pair,
    matching_gallery,
    multidivision_example,
    random_economy,
    random_market,
    regional_market,
    single_slot_economy,
    warni_counterexample,
)
from wmcs.matching.rules import (
    ExplicitTable,
    Feasibility,
    FunctionRule,
    MultidivisionInternalConstraint,
    RejectAll,
    ResponsiveWithCapacity,
    WorkerFromPartialOrder,
    choice,
    rejection,
)
from wmcs.matching.stability import (
    TStateOrder,
    blair,
    characterization_check,
    is_alt_stable,
    is_stable,
    matching_cs,
    stable_set,
    stable_solve,
    t_correspondence,
    t_monotone_check,
    upgrades,
)
from wmcs.order import mask_of

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def powerset(items):
    items = sorted(items)
    return [frozenset(c) for c in iter_chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


def fam(rule, offer):
    return {frozenset(y) for y in choice(rule, offer)}


def stable_oracle(econ):
    """Stable allocations from set operations on contract names.

    An allocation is stable when each agent keeps its part out of its own
    contracts in the allocation and every firm keeps its part when offered
    the allocation plus every contract its worker strictly prefers.
    """
    uni = econ.universe
    n = len(uni)
    agents = uni.agents
    own = {a: frozenset(i for i in range(n) if a in (uni.firm_of(i), uni.worker_of(i))) for a in agents}

    def chosen(a, y, offer):
        return mask_of(y & own[a]) in econ.rules[a].choose(mask_of(offer & own[a]))

    def prefers(w, i, z):
        mine = z & own[w]
        both = mine | {i}
        return chosen(w, {i}, both) and not chosen(w, mine, both)

    per_worker = [[frozenset()] + [frozenset({i}) for i in own[w]] for w in uni.workers]
    out = []
    for combo in product(*per_worker):
        z = frozenset().union(*combo)
        if not all(chosen(a, z, z) for a in agents):
            continue
        up = {i for i in range(n) if prefers(uni.worker_of(i), i, z)}
        if all(chosen(f, z, z | up) for f in uni.firms):
            out.append(z)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


class TestRules:
    """Choice and rejection families of the rule kinds."""

    def test_empty_offer(self):
        for rule in (ResponsiveWithCapacity([0, 1], 1), RejectAll([0, 1]), WorkerFromPartialOrder.from_ranking([0, 1])):
            assert fam(rule, []) == {frozenset()}

    def test_single_slot(self):
        rule = single_slot_economy().rules["f"]
        assert fam(rule, {0, 1}) == {frozenset({0}), frozenset({1})}
        assert {frozenset(r) for r in rejection(rule, {0, 1})} == {frozenset({1}), frozenset({0})}

    def test_multidivision_choice(self):
        uni, rule = multidivision_example()
        assert sorted(uni.names(m) for m in rule.choose(uni.full)) == [["w''@d2"], ["w@d1"]]

    def test_worker_partial_order(self):
        # 0 beats 1, 2 incomparable to both, all acceptable
        rule = WorkerFromPartialOrder([0, 1, 2], [(0, 1), (0, None), (1, None), (2, None)])
        assert fam(rule, {0, 1, 2}) == {frozenset({0}), frozenset({2})}
        assert fam(rule, {1}) == {frozenset({1})}

    def test_ranking_outside_option(self):
        rule = WorkerFromPartialOrder.from_ranking([1, None, 0])
        assert fam(rule, {0}) == {frozenset()}
        assert fam(rule, {0, 1}) == {frozenset({1})}

    def test_responsive(self):
        rule = ResponsiveWithCapacity([2, 0, 1], 2)
        assert fam(rule, {0, 1, 2}) == {frozenset({0, 2})}

    def test_explicit_table_default(self):
        rule = ExplicitTable([0, 1], {(0, 1): [{0}]}, default="all")
        assert fam(rule, {0, 1}) == {frozenset({0})}
        assert fam(rule, {1}) == {frozenset({1})}

    def test_table_outside_offer(self):
        with pytest.raises(RuleDomainError):
            ExplicitTable([0, 1], {(0,): [{1}]})

    def test_non_monotone_feasibility(self):
        f = Feasibility(2, predicate=lambda w: w != (1, 0))
        with pytest.raises(RuleDomainError):
            MultidivisionInternalConstraint([[0], [1]], f)

    def test_foreign_contracts(self):
        uni = ContractUniverse.build([("f", "w"), ("g", "w")])
        rules = {"f": ResponsiveWithCapacity([0, 1], 1), "g": RejectAll([1]), "w": WorkerFromPartialOrder.from_ranking([0, 1])}
        with pytest.raises(RuleDomainError):
            Economy(uni, rules)


class TestAxioms:
    """Revealed-preference and substitutability conditions."""

    def test_multidivision(self):
        _, rule = multidivision_example()
        assert sen_alpha(rule).holds
        assert not sen_beta(rule).holds
        assert not warp(rule).holds
        assert weak_substitutable(rule).holds

    def test_warni_cycle(self):
        rule = warni_counterexample()
        assert sen_alpha(rule).holds
        res = warni(rule)
        assert not res.holds and res.exhaustive

    def test_responsive_warp(self):
        assert warp(ResponsiveWithCapacity([3, 1, 0, 2], 2)).holds

    def test_single_slot(self):
        rule = single_slot_economy().rules["f"]
        assert weak_substitutable(rule).holds
        assert not strong_set_monotone(rule).holds

    def test_complements(self):
        # a is rejected unless b is present
        rule = FunctionRule([0, 1], lambda offer: [offer if 1 in offer else offer - {0}])
        res = weak_substitutable(rule)
        assert not res.holds and res.witness is not None

    @given(seeds)
    def test_multidivision_always_substitutable(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 6)
        ids = list(range(n))
        rng.shuffle(ids)
        cut = rng.randint(0, n)
        rankings = [ids[:cut], ids[cut:]]
        caps = [len(r) for r in rankings]
        rule = MultidivisionInternalConstraint(rankings, Feasibility.total_at_most(2, rng.randint(0, n), caps))
        assert sen_alpha(rule).holds and weak_substitutable(rule).holds

    @given(seeds)
    def test_covering_steps_suffice(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 4)
        offers = powerset(range(n))
        table = {}
        for m in offers:
            subs = powerset(m)
            table[tuple(sorted(m))] = rng.sample(subs, rng.randint(1, min(2, len(subs))))
        rule = ExplicitTable(range(n), table)

        def rej(m):
            return [m - y for y in fam(rule, m)]

        want = all(
            all(any(a <= b for b in rej(big)) for a in rej(small)) and all(any(a <= b for a in rej(small)) for b in rej(big))
            for big in offers
            for small in powerset(big)
        )
        assert weak_substitutable(rule).holds == want

    @given(seeds)
    def test_sen_alpha_oracle(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 4)
        offers = powerset(range(n))
        table = {tuple(sorted(m)): rng.sample(powerset(m), 1) for m in offers}
        rule = ExplicitTable(range(n), table)
        want = all(
            y in fam(rule, mid)
            for big in offers
            for y in fam(rule, big)
            for mid in powerset(big)
            if y <= mid
        )
        assert sen_alpha(rule).holds == want


class TestStability:
    """Stable allocations, the availability operator and its fixed points."""

    def test_everyone_rejects(self):
        uni = ContractUniverse.build([("f", "w"), ("g", "w")])
        econ = Economy(uni, {"f": RejectAll([0]), "g": RejectAll([1]), "w": RejectAll([0, 1])})
        assert is_stable(econ, frozenset())
        assert stable_set(econ) == [frozenset()]

    def test_single_pair(self):
        uni = ContractUniverse.build([("f", "w")])
        econ = Economy(uni, {"f": ResponsiveWithCapacity([0], 1), "w": WorkerFromPartialOrder.from_ranking([0])})
        assert stable_solve(econ).allocation == {0}

    def test_alt_stability_gap(self):
        econ = alt_stability_economy()
        z = econ.universe.mask(["y"])
        assert is_alt_stable(econ, z) and not is_stable(econ, z)
        assert sorted(econ.universe.names(mask_of(upgrades(econ, z)))) == ["x", "z"]
        assert [econ.universe.names(m) for m in econ.choice("f", z | mask_of(upgrades(econ, z)))] == [["x"]]

    def test_single_slot_stable_set(self):
        econ = single_slot_economy()
        stable = stable_set(econ)
        assert [econ.universe.names(mask_of(z)) for z in stable] == [["x"], ["y"], ["z"]]
        assert stable == stable_oracle(econ)
        optimal = [z for z in stable if all(blair(econ, w, z, z2) for w in econ.universe.workers for z2 in stable)]
        assert optimal == []
        assert stable_solve(econ).allocation in stable

    def test_t_operator_monotone(self):
        econ = single_slot_economy()
        assert t_monotone_check(econ).holds
        f = t_correspondence(econ)
        assert is_upper_monotone(f) and is_lower_monotone(f)

    def test_t_ascending_from_bottom(self):
        econ = single_slot_economy()
        order = TStateOrder(econ.n)
        bottom = order.encode(0, econ.universe.full)
        assert any(order.leq(bottom, y) for y in t_correspondence(econ)(bottom))

    def test_t_fixed_points_match(self):
        econ = single_slot_economy()
        f = t_correspondence(econ)
        ch = characterization_check(econ)
        assert ch.holds
        assert len(fixed_points(f)) == len(ch.fixed_points)

    def test_complements_break_monotonicity(self):
        uni = ContractUniverse.build([("f", "a"), ("f", "b")])
        comp = FunctionRule([0, 1], lambda offer: [offer if 1 in offer else offer - {0}])
        rules = {"f": comp, "a": WorkerFromPartialOrder.from_ranking([0]), "b": WorkerFromPartialOrder.from_ranking([1])}
        econ = Economy(uni, rules)
        rep = t_monotone_check(econ)
        assert not rep.holds and rep.witness is not None
        with pytest.raises(HypothesisError):
            stable_solve(econ)

    @given(seeds)
    def test_random_economies(self, seed):
        econ = random_economy(random.Random(seed))
        ch = characterization_check(econ)
        assert ch.holds and ch.stable
        assert ch.stable == stable_set(econ) == stable_oracle(econ)
        assert stable_solve(econ).allocation in ch.stable


class TestComparativeStatics:
    """Stable allocations after exits, entries and relaxed budgets."""

    def test_identity(self):
        econ = budget_economy(1)
        for w in matching_cs(econ, econ, "forward"):
            assert w.source == w.target or (w.firms_prefer_base and w.workers_prefer_shifted)

    @pytest.mark.parametrize("worker", ["w1", "w2", "w3"])
    def test_worker_exit(self, worker):
        base, shifted = exit_pair(budget_economy(1), worker)
        ws = matching_cs(base, shifted, "forward")
        assert ws and all(w.firms_prefer_base and w.workers_prefer_shifted for w in ws)

    def test_firm_entry(self):
        base, shifted = entry_pair(budget_economy(2), "g")
        ws = matching_cs(base, shifted, "backward")
        assert ws and all(w.firms_prefer_base and w.workers_prefer_shifted for w in ws)

    @pytest.mark.parametrize("direction", ["forward", "backward"])
    def test_budget_relaxation(self, direction):
        lo, hi = budget_economy(1), budget_economy(2)
        ws = matching_cs(lo, hi, direction)
        assert ws
        for w in ws:
            z_lo, z_hi = (w.source, w.target) if direction == "forward" else (w.target, w.source)
            assert all(blair(hi, wk, z_hi, z_lo) for wk in hi.universe.workers)


class TestConstraints:
    """Matching with distributional constraints through the contracts embedding."""

    def test_unconstrained_is_classical(self):
        m = ConstraintsMarket(
            ["d1", "d2"],
            ["h1", "h2"],
            {"d1": ["h1", "h2"], "d2": ["h1", "h2"]},
            {"h1": ["d2", "d1"], "h2": ["d1", "d2"]},
            {"h1": 1, "h2": 1},
            Feasibility.total_at_most(2, 2, caps=[1, 1]),
        )
        # h1 and d2 are each other's first choice, d1 then takes h2
        assert weakly_stable_set(m) == [{"d1": "h2", "d2": "h1"}]
        assert weak_stable_solve(m) == {"d1": "h2", "d2": "h1"}

    def test_regional_cap(self):
        m = regional_market(2)
        mu = weak_stable_solve(m)
        assert weakly_stable(m, mu)
        rep = equivalence_check(m)
        assert rep.holds and rep.weakly_stable
        assert sum(h is not None for h in mu.values()) <= 2

    def test_cap_relaxation(self):
        ws = constraints_cs(regional_market(2), regional_market(3), "forward")
        assert ws and all(w.doctors_weakly_better for w in ws)

    def test_tightening_refused(self):
        with pytest.raises(HypothesisError):
            constraints_cs(regional_market(3), regional_market(2))

    @given(seeds)
    def test_random_markets(self, seed):
        rng = random.Random(seed)
        m = random_market(rng, rng.randint(1, 3), rng.randint(1, 3))
        assert equivalence_check(m).holds
        assert constraints_to_contracts(m).n <= 9


class TestGallery:
    """Named matching counterexamples."""

    @pytest.mark.parametrize("name", MATCHING_GALLERY_NAMES)
    def test_facts(self, name):
        checks = matching_gallery(name)
        assert all(c.ok for c in checks), [c for c in checks if not c.ok]
