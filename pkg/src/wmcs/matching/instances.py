"""Worked matching instances and seeded random economies."""
from __future__ import annotations

import random
from itertools import combinations

from ..order import bits, mask_of
from .axioms import sen_alpha, warp, weak_substitutable
from .constraints import ConstraintsMarket
from .economy import ContractUniverse, Economy, submasks
from .rules import (
    ExplicitTable,
    Feasibility,
    FunctionRule,
    MultidivisionInternalConstraint,
    RejectAll,
    ResponsiveWithCapacity,
    WorkerFromPartialOrder,
    indifferent_slots,
)


def _eager_workers(uni: ContractUniverse) -> dict:
    """Every worker takes any of its contracts over unemployment, no other ranking."""
    rules = {}
    for w in uni.workers:
        own = list(bits(uni.agent_mask(w)))
        rules[w] = WorkerFromPartialOrder(own, [(c, None) for c in own])
    return rules


def multidivision_example():
    """Two divisions under a one-hire budget; returns (universe, firm rule).

    Contracts ``w@d1``, ``w'@d2``, ``w''@d2``; ``d2`` ranks ``w''`` over ``w'``.
    """
    uni = ContractUniverse.build([("f", "w"), ("f", "w'"), ("f", "w''")], ["w@d1", "w'@d2", "w''@d2"])
    rule = MultidivisionInternalConstraint([[0], [2, 1]], Feasibility.total_at_most(2, 1), names=["d1", "d2"])
    return uni, rule


def single_slot_economy() -> Economy:
    """One firm indifferent among three workers for one position; all workers eager."""
    uni = ContractUniverse.build([("f", "wx"), ("f", "wy"), ("f", "wz")], ["x", "y", "z"])
    rules = _eager_workers(uni)
    rules["f"] = indifferent_slots([0, 1, 2], 1)
    return Economy(uni, rules)


def warni_counterexample() -> FunctionRule:
    """Pairs beat each other cyclically; singletons are always chosen."""
    pairs = [frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5})]

    def fn(offer):
        out = [{x} for x in offer]
        for i, p in enumerate(pairs):
            beaten_by = pairs[(i + 1) % 3]
            if p <= offer and not beaten_by <= offer:
                out.append(set(p))
        return out or [set()]

    return FunctionRule(range(6), fn)


def alt_stability_economy() -> Economy:
    """One firm choosing x over z over y pairwise except x~y; eager workers."""
    uni = ContractUniverse.build([("f", "wx"), ("f", "wy"), ("f", "wz")], ["x", "y", "z"])
    x, y, z = 0, 1, 2
    table = {
        (x, y, z): [{x}],
        (x, y): [{x}, {y}],
        (x, z): [{x}],
        (y, z): [{y}],
        (x,): [{x}],
        (y,): [{y}],
        (z,): [{z}],
    }
    rules = _eager_workers(uni)
    rules["f"] = ExplicitTable([x, y, z], table)
    return Economy(uni, rules)


def exit_pair(economy: Economy, worker: str) -> tuple[Economy, Economy]:
    """(original, economy in which ``worker`` rejects everything)."""
    dom = list(bits(economy.universe.agent_mask(worker)))
    return economy, economy.replace(**{worker: RejectAll(dom)})


def entry_pair(economy: Economy, firm: str) -> tuple[Economy, Economy]:
    """(economy in which ``firm`` rejects everything, original)."""
    dom = list(bits(economy.universe.agent_mask(firm)))
    return economy.replace(**{firm: RejectAll(dom)}), economy


def budget_economy(budget: int) -> Economy:
    """A two-division firm with a hiring budget competing with a second firm for three workers."""
    pairs = [("f", "w1"), ("f", "w2"), ("f", "w3"), ("g", "w1"), ("g", "w2"), ("g", "w3")]
    names = ["w1@f.a", "w2@f.b", "w3@f.b", "w1@g", "w2@g", "w3@g"]
    uni = ContractUniverse.build(pairs, names)
    rules = {
        "f": MultidivisionInternalConstraint([[0], [2, 1]], Feasibility.total_at_most(2, budget), names=["a", "b"]),
        "g": ResponsiveWithCapacity([3, 4, 5], 1),
        "w1": WorkerFromPartialOrder.from_ranking([0, 3, None]),
        "w2": WorkerFromPartialOrder.from_ranking([1, 4, None]),
        "w3": WorkerFromPartialOrder.from_ranking([2, 5, None]),
    }
    return Economy(uni, rules)


def regional_market(cap: int) -> ConstraintsMarket:
    """Three doctors, two hospitals in one region with a joint cap."""
    return ConstraintsMarket(
        ["d1", "d2", "d3"],
        ["h1", "h2"],
        {"d1": ["h1", "h2"], "d2": ["h1", "h2"], "d3": ["h2", "h1"]},
        {"h1": ["d1", "d2", "d3"], "h2": ["d3", "d1", "d2"]},
        {"h1": 2, "h2": 2},
        Feasibility.total_at_most(2, cap, caps=[2, 2]),
    )


# random generators


def random_universe(rng: random.Random, n: int, firms: int = 2, workers: int = 3, distinct_pairs: bool = False) -> ContractUniverse:
    fs = [f"f{i}" for i in range(firms)]
    ws = [f"w{i}" for i in range(workers)]
    if distinct_pairs:
        grid = [(f, w) for f in fs for w in ws]
        rng.shuffle(grid)
        pairs = grid[:n]
    else:
        pairs = [(rng.choice(fs), rng.choice(ws)) for _ in range(n)]
    return ContractUniverse.build(pairs, [f"c{i}" for i in range(len(pairs))])


def random_worker_rule(rng: random.Random, own: list[int]) -> WorkerFromPartialOrder:
    """Random strict partial order on own contracts and unemployment."""
    opts = own + [None]
    rng.shuffle(opts)
    pairs = [(a, b) for a, b in combinations(opts, 2) if rng.random() < 0.6]
    return WorkerFromPartialOrder(own, pairs)


def random_worker_ranking(rng: random.Random, own: list[int]) -> WorkerFromPartialOrder:
    opts = own + [None]
    rng.shuffle(opts)
    return WorkerFromPartialOrder.from_ranking(opts, domain=own)


def random_firm_rule(rng: random.Random, own: list[int]):
    """A structured Sen's alpha and weakly substitutable rule, or a filtered random table."""
    kind = rng.choice(["responsive", "multidivision", "slots", "table"])
    if not own:
        return RejectAll([])
    if kind == "responsive":
        acc = [c for c in own if rng.random() < 0.8]
        rng.shuffle(acc)
        return ResponsiveWithCapacity(acc, rng.randint(1, 2), domain=own)
    if kind == "multidivision":
        k = rng.randint(1, min(3, len(own)))
        divs = [[] for _ in range(k)]
        for c in own:
            if rng.random() < 0.85:
                divs[rng.randrange(k)].append(c)
        for d in divs:
            rng.shuffle(d)
        maximal = [tuple(rng.randint(0, 2) for _ in range(k)) for _ in range(rng.randint(1, 2))]
        return MultidivisionInternalConstraint(divs, Feasibility.from_maximal(maximal), domain=own)
    if kind == "slots":
        return indifferent_slots(own, rng.randint(1, 2))
    for _ in range(50):
        rule = _random_table(rng, own)
        if sen_alpha(rule).holds and weak_substitutable(rule).holds:
            return rule
    return indifferent_slots(own, 1)


def _random_table(rng: random.Random, own: list[int]) -> ExplicitTable:
    """Choose the maximizers of a random score over subsets, sometimes with ties."""
    dom = mask_of(own)
    score = {m: rng.randint(0, 3) for m in submasks(dom)}
    table = {}
    for m in submasks(dom):
        subs = list(submasks(m))
        best = max(score[s] for s in subs)
        table[tuple(bits(m))] = [set(bits(s)) for s in subs if score[s] == best]
    return ExplicitTable(own, table)


def random_economy(rng: random.Random, n: int | None = None) -> Economy:
    """Random economy whose rules all satisfy Sen's alpha and weak substitutability."""
    n = n if n is not None else rng.randint(2, 6)
    uni = random_universe(rng, n, rng.randint(1, 2), rng.randint(2, 4))
    rules = {}
    for f in uni.firms:
        rules[f] = random_firm_rule(rng, list(bits(uni.agent_mask(f))))
    for w in uni.workers:
        rules[w] = random_worker_rule(rng, list(bits(uni.agent_mask(w))))
    return Economy(uni, rules)


def random_warp_economy(rng: random.Random, n: int | None = None) -> Economy:
    """Random economy whose firms maximize a random weak order over subsets.

    Each firm holds at most one contract per worker.
    """
    n = n if n is not None else rng.randint(2, 6)
    uni = random_universe(rng, n, rng.randint(1, 2), rng.randint(2, 4), distinct_pairs=True)
    rules = {}
    for f in uni.firms:
        own = list(bits(uni.agent_mask(f)))
        rule = _random_table(rng, own)
        assert warp(rule).holds
        rules[f] = rule
    for w in uni.workers:
        rules[w] = random_worker_ranking(rng, list(bits(uni.agent_mask(w))))
    return Economy(uni, rules)


def random_market(rng: random.Random, doctors: int = 3, hospitals: int = 2) -> ConstraintsMarket:
    ds = [f"d{i}" for i in range(doctors)]
    hs = [f"h{i}" for i in range(hospitals)]
    dp = {}
    for d in ds:
        acc = [h for h in hs if rng.random() < 0.8]
        rng.shuffle(acc)
        dp[d] = acc
    hp = {}
    for h in hs:
        acc = [d for d in ds if rng.random() < 0.8]
        rng.shuffle(acc)
        hp[h] = acc
    caps = {h: rng.randint(1, 2) for h in hs}
    q = [caps[h] for h in hs]
    maximal = []
    for _ in range(rng.randint(1, 2)):
        maximal.append(tuple(rng.randint(0, c) for c in q))
    if rng.random() < 0.3:
        maximal = [tuple(q)]
    return ConstraintsMarket(ds, hs, dp, hp, caps, Feasibility.from_maximal(maximal))


# gallery of matching counterexamples

MATCHING_GALLERY_NAMES = ("multidivision-beta", "single-slot-indifference", "warni-cycle", "alt-stability-gap")


def matching_gallery(name: str) -> list:
    """Expected facts of a named matching counterexample, each re-derived."""
    from ..fixedpoint import FactCheck
    from .axioms import sen_beta, strong_set_monotone, warni
    from .stability import is_alt_stable, is_stable, stable_set, upgrades

    if name == "multidivision-beta":
        uni, rule = multidivision_example()
        observed = {
            "choice_from_all": [uni.names(m) for m in rule.choose(uni.full)],
            "sen_alpha": sen_alpha(rule).holds,
            "sen_beta": sen_beta(rule).holds,
            "warp": warp(rule).holds,
            "weak_substitutable": weak_substitutable(rule).holds,
        }
        expected = {
            "choice_from_all": [["w@d1"], ["w''@d2"]],
            "sen_alpha": True,
            "sen_beta": False,
            "warp": False,
            "weak_substitutable": True,
        }
    elif name == "single-slot-indifference":
        econ = single_slot_economy()
        rule = econ.rules["f"]
        stable = stable_set(econ)
        worker_optimal = [
            z for z in stable
            if all(blair_all(econ, z, z2) for z2 in stable)
        ]
        observed = {
            "weak_substitutable": weak_substitutable(rule).holds,
            "strong_set_monotone": strong_set_monotone(rule).holds,
            "stable_set": [econ.universe.names(mask_of(z)) for z in stable],
            "worker_optimal": len(worker_optimal),
        }
        expected = {
            "weak_substitutable": True,
            "strong_set_monotone": False,
            "stable_set": [["x"], ["y"], ["z"]],
            "worker_optimal": 0,
        }
    elif name == "warni-cycle":
        rule = warni_counterexample()
        observed = {"sen_alpha": sen_alpha(rule).holds, "warni": warni(rule).holds}
        expected = {"sen_alpha": True, "warni": False}
    elif name == "alt-stability-gap":
        econ = alt_stability_economy()
        z = econ.universe.mask(["y"])
        u = upgrades(econ, z)
        avail = z | mask_of(u)
        observed = {
            "alt_stable": is_alt_stable(econ, z),
            "stable": is_stable(econ, z),
            "upgrades": econ.universe.names(mask_of(u)),
            "choice_from_upgrades": [econ.universe.names(m) for m in econ.choice("f", avail)],
        }
        expected = {"alt_stable": True, "stable": False, "upgrades": ["x", "z"], "choice_from_upgrades": [["x"]]}
    else:
        from ..errors import UnknownGalleryName

        raise UnknownGalleryName(f"unknown gallery instance {name!r}")
    return [FactCheck(k, v, observed[k]) for k, v in expected.items()]


def blair_all(econ: Economy, hi, lo) -> bool:
    """Every worker weakly prefers ``hi`` to ``lo``."""
    from .stability import blair

    return all(blair(econ, w, mask_of(hi), mask_of(lo)) for w in econ.universe.workers)
