"""Acceptance suite: thirteen criteria with brute-force oracles and time bounds.

Each criterion returns ``(passed, detail)``; ``detail`` holds only counts and
witnesses so that the JSON report is a pure function of the seed. Timings are
printed but never serialized.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from . import __version__
from .report import Report

# per-suite instance counts
SCALES = {
    "acceptance": {
        "lattices": 50,
        "choice": 200,
        "pareto_random": 2000,
        "pareto_chain": 500,
        "fp_existence": 500,
        "fp_lift": 500,
        "bertrand_shifts": 12,
        "economies": 100,
        "markets": 200,
    },
    "quick": {
        "lattices": 10,
        "choice": 30,
        "pareto_random": 200,
        "pareto_chain": 60,
        "fp_existence": 60,
        "fp_lift": 60,
        "bertrand_shifts": 3,
        "economies": 20,
        "markets": 40,
    },
}


@dataclass
class Criterion:
    number: int
    slug: str
    bound: float
    fn: Callable[[random.Random, dict], tuple[bool, dict]]


@dataclass
class Outcome:
    number: int
    slug: str
    passed: bool
    detail: dict
    seconds: float
    bound: float

    @property
    def key(self) -> str:
        return f"C{self.number:02d}.{self.slug}"

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.key:<40} {status}  {self.seconds:7.2f}s (bound {self.bound:g}s)"


def _fail_list(failures: list, limit: int = 5) -> list:
    return failures[:limit]


# 1: strong set order decomposition


def c01(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .generators import random_lattice
    from .order import chain, enumerate_sublattices, is_sublattice, lower_weak, sandwich, strong, upper_weak

    failures, pairs = [], 0
    for k in range(scale["lattices"]):
        p = random_lattice(rng, 6)
        subs = list(enumerate_sublattices(p))
        for hi in subs:
            for lo in subs:
                pairs += 1
                ss = strong(p, hi, lo)
                rhs = upper_weak(p, hi, lo) and lower_weak(p, hi, lo) and is_sublattice(p, hi | lo) and sandwich(p, hi, lo)
                if ss != rhs:
                    failures.append({"lattice": k, "hi": sorted(hi), "lo": sorted(lo), "ss": ss})
    c = chain([0, 1, 2, 3])
    hi, lo = frozenset({1, 3}), frozenset({0, 2})
    chain_ws = upper_weak(c, hi, lo) and lower_weak(c, hi, lo)
    chain_ss = strong(c, hi, lo)
    ok = not failures and chain_ws and not chain_ss
    return ok, {"pairs": pairs, "failures": _fail_list(failures), "chain_witness": {"ws": chain_ws, "ss": chain_ss}}


# 2: dominance versus comparative statics on constraint families


def c02(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .choice import argmax, dominates
    from .generators import random_lattice, random_pair
    from .order import enumerate_subintervals, enumerate_sublattices, lower_weak, strong, upper_weak

    def ws(p, a, b):
        return upper_weak(p, a, b) and lower_weak(p, a, b)

    failures = []
    counts = {"weak": 0, "weak_interval": 0, "interval": 0}
    for k in range(scale["choice"]):
        p = random_lattice(rng, 8)
        u, v = random_pair(rng, p)
        subl = list(enumerate_sublattices(p))
        subi = list(enumerate_subintervals(p))
        am = {s: (argmax(p, s, u), argmax(p, s, v)) for s in set(subl) | set(subi)}
        oracle_weak = all(ws(p, am[s][1], am[s][0]) for s in subl)
        oracle_wi = all(ws(p, am[s][1], am[s][0]) for s in subi)
        oracle_int = all(strong(p, am[s][1], am[s][0]) for s in subi)
        got = (dominates(p, "Weak", v, u), dominates(p, "WeakInterval", v, u), dominates(p, "Interval", v, u))
        want = (oracle_weak, oracle_wi, oracle_int)
        for name, g, w in zip(counts, got, want):
            counts[name] += w
            if g != w:
                failures.append({"instance": k, "kind": name, "dominates": g, "oracle": w})
    return not failures, {"instances": scale["choice"], "dominating_counts": counts, "failures": _fail_list(failures)}


# 3: the quarter-grid example with a four-point witness


def c03(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .choice import argmax, dominates, sum_target, wmcs_search
    from .order import grid, is_sublattice, lower_weak, strong, upper_weak

    q = [Fraction(i, 4) for i in range(5)]
    p = grid(q, 2)
    u, v = sum_target(p, Fraction(1, 4)), sum_target(p, Fraction(3, 4))
    weak_interval = dominates(p, "WeakInterval", v, u)
    weak = dominates(p, "Weak", v, u)
    w = wmcs_search(p, v, u, "sublattices", "ws").witness
    witness_ok = False
    detail: dict = {"weak_interval": weak_interval, "weak": weak}
    if w is not None and len(w.subset) == 4 and len(w.argmax_u) == 1 and len(w.argmax_v) == 1:
        (x1,), (x2,) = w.argmax_u, w.argmax_v
        incomparable = not p.leq(x1, x2) and not p.leq(x2, x1)
        shape = w.subset == frozenset({x1, x2, p.join_strict(x1, x2), p.meet_strict(x1, x2)})
        not_ordered = not (upper_weak(p, w.argmax_v, w.argmax_u) and lower_weak(p, w.argmax_v, w.argmax_u))
        witness_ok = incomparable and shape and not_ordered
        detail["witness"] = {"Z": [p.label(i) for i in sorted(w.subset)], "x'": p.label(x1), "x''": p.label(x2)}
    full = range(p.size)
    mu, mv = argmax(p, full, u), argmax(p, full, v)
    full_ws = upper_weak(p, mv, mu) and lower_weak(p, mv, mu)
    full_ss = strong(p, mv, mu)
    sub = is_sublattice(p, mu) or is_sublattice(p, mv)
    detail.update({"full_ws": full_ws, "full_ss": full_ss, "argmax_sublattice": sub, "witness_ok": witness_ok})
    ok = weak_interval and not weak and witness_ok and full_ws and not full_ss and not sub
    return ok, detail


# 4: Pareto sets of the kinked chain example


def c04(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .order import lower_weak, strong, upper_weak
    from .pareto import kinked_profiles, pareto_set

    u, v = kinked_profiles()
    p = u.poset
    pu, pv = pareto_set(u), pareto_set(v)
    lu = sorted(p.label(i) for i in pu)
    lv = sorted(p.label(i) for i in pv)
    ws = upper_weak(p, pv, pu) and lower_weak(p, pv, pu)
    ss = strong(p, pv, pu)
    ok = lu == [0, Fraction(1, 2)] and lv == [Fraction(1, 4), 1] and ws and not ss
    return ok, {"pareto_u": lu, "pareto_v": lv, "ws": ws, "ss": ss}


# 5: Pareto characterizations


def _pareto_oracle(tables, n: int) -> frozenset[int]:
    vec = [tuple(t[x] for t in tables) for x in range(n)]
    return frozenset(
        x for x in range(n)
        if not any(all(a >= b for a, b in zip(vec[y], vec[x])) and vec[y] != vec[x] for y in range(n))
    )


def c05(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .choice import ObjectiveTable
    from .generators import random_poset, random_table
    from .order import chain, lower_weak, upper_weak
    from .pareto import UtilityProfile, dominating_chain, pareto_set, pareto_wmcs_check, phi_membership, profile_dominates

    failures = []
    for k in range(scale["pareto_random"]):
        n = rng.randint(1, 8)
        p = random_poset(rng, n)
        prof = UtilityProfile(p, [random_table(rng, n) for _ in range(rng.randint(1, 3))])
        ps = pareto_set(prof)
        if ps != _pareto_oracle(prof.tables, n):
            failures.append({"instance": k, "check": "pareto_set"})
        for x in range(n):
            if phi_membership(prof, x) != (x in ps):
                failures.append({"instance": k, "check": "phi", "x": x})
            y = dominating_chain(prof, x)
            if y not in ps or any(t[y] < t[x] for t in prof.tables):
                failures.append({"instance": k, "check": "dominating_chain", "x": x})
    rejected = 0
    for k in range(scale["pareto_chain"]):
        n = rng.randint(2, 8)
        c = chain(list(range(n)))
        agents = rng.randint(1, 3)
        u = UtilityProfile(c, [random_table(rng, n) for _ in range(agents)])
        v = None
        for _ in range(30):
            cand = UtilityProfile(c, [random_table(rng, n) for _ in range(agents)])
            if profile_dominates("SingleCrossing", cand, u):
                v = cand
                break
            rejected += 1
        if v is None:
            # u plus an increasing shift always single-crosses u
            slopes = [rng.randint(0, 2) for _ in u.tables]
            v = UtilityProfile(c, [ObjectiveTable([t[i] + k * i for i in range(n)]) for t, k in zip(u.tables, slopes)])
        if not profile_dominates("SingleCrossing", v, u):
            failures.append({"chain_instance": k, "check": "generator"})
            continue
        cmp = pareto_wmcs_check(v, u, "SingleCrossing")
        pu, pv = _pareto_oracle(u.tables, n), _pareto_oracle(v.tables, n)
        oracle = upper_weak(c, pv, pu) and lower_weak(c, pv, pu)
        if not (cmp.holds and oracle):
            failures.append({"chain_instance": k, "check": "ws", "holds": cmp.holds, "oracle": oracle})
    detail = {
        "random_instances": scale["pareto_random"],
        "chain_instances": scale["pareto_chain"],
        "rejected_draws": rejected,
        "failures": _fail_list(failures),
    }
    return not failures, detail


# 6: two-division grid


def c06(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .pareto import pareto_set, profile_dominates, supermodular_profile, two_division_profile

    step = Fraction(1, 12)
    u = two_division_profile(step, (Fraction(1, 4), Fraction(1, 4)))
    v = two_division_profile(step, (Fraction(1, 3), Fraction(1, 3)), u.poset)
    p = u.poset
    idd = profile_dominates("IncreasingDifferences", v, u)
    sm = supermodular_profile(u) and supermodular_profile(v)
    pu, pv = pareto_set(u), pareto_set(v)
    if pu != _pareto_oracle(u.tables, p.size) or pv != _pareto_oracle(v.tables, p.size):
        return False, {"error": "Pareto set disagrees with the pairwise oracle"}
    # exhaustive pairwise set-order checks
    up = all(any(p.leq(x, y) for y in pv) for x in pu)
    down = all(any(p.leq(x, y) for x in pu) for y in pv)
    ss_bad = None
    for x in sorted(pu):
        for y in sorted(pv):
            if p.join_strict(x, y) not in pv or p.meet_strict(x, y) not in pu:
                ss_bad = (p.label(x), p.label(y))
                break
        if ss_bad:
            break
    ok = idd and sm and up and down and ss_bad is not None
    return ok, {
        "increasing_differences": idd,
        "supermodular": sm,
        "ws": up and down,
        "ss_witness": ss_bad,
        "pareto_sizes": [len(pu), len(pv)],
    }


# 7: fixed points of monotone correspondences


def c07(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .fixedpoint import (
        GALLERY_NAMES,
        Correspondence,
        check_gallery,
        classify,
        cs_lift,
        fixed_points,
        gallery,
        iterate,
        maximal,
        minimal,
        reachable,
    )
    from .generators import correspondence_around, random_lattice, random_monotone_map

    failures = []
    for k in range(scale["fp_existence"]):
        p = random_lattice(rng, 10)
        side = "down" if k % 2 == 0 else "up"
        f = Correspondence(p, correspondence_around(rng, p, random_monotone_map(rng, p), side))
        cls = classify(f)
        fp = frozenset(x for x in range(p.size) if x in f(x))
        if side == "down":
            ok = cls.in_F_plus and fp and maximal(p, fp)
            start = next(x for x in range(p.size) if not p.down_mask(x) & ~(1 << x))
            res = iterate(f, start, direction="up")
            ok = ok and res.fixed_point in fp and p.leq(start, res.fixed_point)
        else:
            ok = cls.in_F_minus and fp and minimal(p, fp)
            start = next(x for x in range(p.size) if not p.up_mask(x) & ~(1 << x))
            res = iterate(f, start, direction="down")
            ok = ok and res.fixed_point in fp and p.leq(res.fixed_point, start)
        if not ok or fixed_points(f, check=True) != fp:
            failures.append({"existence_instance": k, "side": side})
    lifts = 0
    for k in range(scale["fp_lift"]):
        p = random_lattice(rng, 10)
        g, h = random_monotone_map(rng, p), random_monotone_map(rng, p)
        if k % 2 == 0:
            g2 = [p.join_strict(a, b) for a, b in zip(g, h)]
            f = Correspondence(p, correspondence_around(rng, p, g, "down"))
            f2 = Correspondence(p, correspondence_around(rng, p, g2, "down"))
            mode = "upper"
        else:
            g2 = [p.meet_strict(a, b) for a, b in zip(g, h)]
            f = Correspondence(p, correspondence_around(rng, p, g, "up"))
            f2 = Correspondence(p, correspondence_around(rng, p, g2, "up"))
            mode = "lower"
        fp2 = frozenset(x for x in range(p.size) if x in f2(x))
        for x in sorted(x for x in range(p.size) if x in f(x)):
            y = cs_lift(f, f2, x, mode, check=True)
            lifts += 1
            ordered = p.leq(x, y) if mode == "upper" else p.leq(y, x)
            if y not in fp2 or not ordered:
                failures.append({"lift_instance": k, "mode": mode})
    facts = {}
    for name in GALLERY_NAMES:
        checks = check_gallery(gallery(name))
        facts[name] = all(c.ok for c in checks)
        if not facts[name]:
            failures.append({"gallery": name, "bad": [c.fact for c in checks if not c.ok]})
    fig = gallery("figure2")
    p, f = fig.poset, fig.correspondence
    reach = reachable(f, p.index((1, 1)), "up")
    fig2 = {
        "fixed_points": sorted(p.label(i) for i in fixed_points(f)),
        "terminals": sorted(p.label(i) for i in reach.terminal_fixed_points),
        "dead_ends": len(reach.dead_ends),
    }
    if fig2 != {"fixed_points": [(2, 2), (3, 2)], "terminals": [(3, 2)], "dead_ends": 0}:
        failures.append({"figure2": fig2})
    detail = {"existence": scale["fp_existence"], "lift_pairs": scale["fp_lift"], "lifts": lifts, "gallery": facts, "figure2": fig2, "failures": _fail_list(failures)}
    return not failures, detail


# 8: Bertrand competition


def _nash_oracle(spec) -> list[tuple[int, int]]:
    g0, g1 = spec.price_grids
    eq = []
    for a, b in product(range(len(g0)), range(len(g1))):
        pr = (g0[a], g1[b])
        ok0 = all(spec.profit(0, (d, pr[1])) <= spec.profit(0, pr) for d in g0)
        ok1 = all(spec.profit(1, (pr[0], d)) <= spec.profit(1, pr) for d in g1)
        if ok0 and ok1:
            eq.append((a, b))
    return eq


def c08(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .games import (
        BertrandSpec,
        bertrand_br_monotone,
        bertrand_build,
        bertrand_payoff_compare,
        linear_cost,
        nash_compare,
        nash_set,
        pure_bertrand,
        pure_demand,
        validate_demand,
    )

    failures = []
    checked_grids = 0
    for size in range(2, 12):
        grid = list(range(size))
        c = [rng.randint(0, size - 1), rng.randint(0, size - 1)]
        spec = pure_bertrand([grid, grid], c)
        rep = validate_demand(spec)
        checked_grids += 1
        if not (rep.d1 and rep.d2):
            failures.append({"grid": size, "check": "D1/D2", "witness": rep.witness})
        if not bertrand_br_monotone(spec):
            failures.append({"grid": size, "check": "lws best response"})
    grid = list(range(11))
    shifts = []
    for k in range(scale["bertrand_shifts"]):
        c1, c2 = rng.randint(0, 5), rng.randint(0, 5)
        c2t = c2 + rng.randint(0, 3)
        scale_demand = rng.choice([1, 1, 2])
        spec = pure_bertrand([grid, grid], [c1, c2])
        if scale_demand == 1:
            spec_t = pure_bertrand([grid, grid], [c1, c2t])
        else:
            cs = (Fraction(c1), Fraction(c2t))
            spec_t = BertrandSpec(spec.price_grids, lambda i, p: 2 * pure_demand(i, p), tuple(linear_cost(x) for x in cs), cs)
        game, game_t = bertrand_build(spec), bertrand_build(spec_t)
        eq, eq_t = _nash_oracle(spec), _nash_oracle(spec_t)
        if nash_set(game) != eq or nash_set(game_t) != eq_t:
            failures.append({"shift": k, "check": "nash oracle"})
            continue
        oracle_lws = all(any(a[0] <= b[0] and a[1] <= b[1] for a in eq) for b in eq_t)
        cmp = nash_compare(game, game_t, "lws")
        prof = sorted({spec.profit(0, spec.prices(e)) for e in eq})
        prof_t = sorted({spec_t.profit(0, spec_t.prices(e)) for e in eq_t})
        oracle_profit = all(any(x <= y for x in prof) for y in prof_t)
        got_profit = bertrand_payoff_compare(spec, spec_t, 0)
        shifts.append({"costs": [c1, c2], "shifted_costs": [c1, c2t], "demand_scale": scale_demand, "eq": len(eq), "eq_shifted": len(eq_t)})
        if not (cmp.holds and oracle_lws and got_profit and oracle_profit):
            failures.append({"shift": k, "lws": cmp.holds, "oracle_lws": oracle_lws, "profit": got_profit, "oracle_profit": oracle_profit})
    return not failures, {"grids": checked_grids, "shifts": shifts, "failures": _fail_list(failures)}


# 9: beauty contest between two multidivisional firms


def c09(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .games import BeautyContestSpec, beauty_contest_build, classify_wsc, nash_compare, nash_set

    step = Fraction(1, 4)
    pts = [Fraction(i, 4) for i in range(5)]
    acts = [(a, b) for a in pts for b in pts]

    def oracle(theta):
        ta, tb = theta

        def pareto(opp):
            wa, wb = opp[0] + ta, opp[1] + tb
            vec = {s: (-(s[0] - 2 * wa) ** 2 - (s[1] - wb) ** 2, -(s[0] - wa) ** 2 - (s[1] - 2 * wb) ** 2) for s in acts}
            return {s for s in acts if not any(vec[t][0] >= vec[s][0] and vec[t][1] >= vec[s][1] and vec[t] != vec[s] for t in acts)}

        br = {s: pareto(s) for s in acts}
        return sorted((a, b) for a in acts for b in acts if a in br[b] and b in br[a])

    theta, theta_t = (Fraction(0), Fraction(0)), (step, step)
    game = beauty_contest_build(BeautyContestSpec(2, step, theta))
    game_t = beauty_contest_build(BeautyContestSpec(2, step, theta_t))
    wsc = classify_wsc(game)
    eq = sorted(game.space.label(game.space.encode(e)) for e in nash_set(game))
    eq_t = sorted(game_t.space.label(game_t.space.encode(e)) for e in nash_set(game_t))
    o, o_t = oracle(theta), oracle(theta_t)

    def leq(x, y):
        return all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(x, y))

    oracle_ws = all(any(leq(x, y) for y in o_t) for x in o) and all(any(leq(x, y) for x in o) for y in o_t)
    cmp = nash_compare(game, game_t, "ws")
    ok = wsc.in_G_plus and wsc.in_G_minus and bool(eq) and eq == o and eq_t == o_t and oracle_ws and cmp.holds
    return ok, {
        "in_G_plus": wsc.in_G_plus,
        "in_G_minus": wsc.in_G_minus,
        "equilibria": len(eq),
        "equilibria_shifted": len(eq_t),
        "oracle_agrees": eq == o and eq_t == o_t,
        "ws": cmp.holds,
        "oracle_ws": oracle_ws,
    }


# 10: choice axioms and matching counterexamples


def c10(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .matching.instances import MATCHING_GALLERY_NAMES, matching_gallery

    detail, ok = {}, True
    for name in MATCHING_GALLERY_NAMES:
        checks = matching_gallery(name)
        detail[name] = {c.fact: c.ok for c in checks}
        ok = ok and all(c.ok for c in checks)
    return ok, detail


# 11: stable allocations and fixed points of T


def c11(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .matching.instances import random_economy
    from .matching.stability import characterization_check, stable_solve

    failures, sizes = [], []
    for k in range(scale["economies"]):
        econ = random_economy(rng)
        ch = characterization_check(econ)
        sol = stable_solve(econ)
        sizes.append(len(ch.stable))
        if not ch.holds or not ch.stable or sol.allocation not in ch.stable:
            failures.append({"economy": k, "failures": ch.failures[:2], "stable": len(ch.stable)})
    return not failures, {"economies": scale["economies"], "stable_set_sizes": sorted(set(sizes)), "failures": _fail_list(failures)}


# 12: comparative statics scenarios and the constraints equivalence


def c12(rng: random.Random, scale: dict) -> tuple[bool, dict]:
    from .matching.constraints import constraints_cs, equivalence_check
    from .matching.instances import budget_economy, entry_pair, exit_pair, random_market, regional_market
    from .matching.stability import matching_cs

    scenarios = {}

    def record(name, base, shifted):
        res = {}
        for direction in ("forward", "backward"):
            ws = matching_cs(base, shifted, direction)
            res[direction] = bool(ws) and all(w.firms_prefer_base and w.workers_prefer_shifted for w in ws)
        scenarios[name] = res

    for budget in (1, 2):
        econ = budget_economy(budget)
        for w in ("w1", "w2", "w3"):
            record(f"exit-{w}-budget{budget}", *exit_pair(econ, w))
        record(f"entry-g-budget{budget}", *entry_pair(econ, "g"))
    record("budget-1-to-2", budget_economy(1), budget_economy(2))
    for cap in (1, 2):
        lo, hi = regional_market(cap), regional_market(cap + 1)
        res = {}
        for direction in ("forward", "backward"):
            ws = constraints_cs(lo, hi, direction)
            res[direction] = bool(ws) and all(w.doctors_weakly_better for w in ws)
        scenarios[f"regional-cap-{cap}-to-{cap + 1}"] = res
    eq_fail = []
    for k in range(scale["markets"]):
        m = random_market(rng, rng.randint(1, 3), rng.randint(1, 3))
        if not equivalence_check(m).holds:
            eq_fail.append(k)
    ok = all(all(r.values()) for r in scenarios.values()) and not eq_fail
    return ok, {"scenarios": scenarios, "markets": scale["markets"], "equivalence_failures": eq_fail[:5]}


CRITERIA = [
    Criterion(1, "set-order-decomposition", 10, c01),
    Criterion(2, "dominance-equivalences", 60, c02),
    Criterion(3, "quarter-grid-example", 1, c03),
    Criterion(4, "kinked-chain-example", 1, c04),
    Criterion(5, "pareto-characterizations", 60, c05),
    Criterion(6, "two-division-grid", 5, c06),
    Criterion(7, "fixed-point-theory", 90, c07),
    Criterion(8, "bertrand", 60, c08),
    Criterion(9, "beauty-contest", 120, c09),
    Criterion(10, "matching-counterexamples", 5, c10),
    Criterion(11, "stability-characterization", 120, c11),
    Criterion(12, "matching-comparative-statics", 120, c12),
]

DETERMINISM_BOUND = 600.0


def run_criterion(c: Criterion, seed: int, suite: str) -> Outcome:
    rng = random.Random(f"{seed}:{c.number}")
    t0 = time.perf_counter()
    try:
        passed, detail = c.fn(rng, SCALES[suite])
    except Exception as e:  # a crash is a failed criterion, not a crashed suite
        passed, detail = False, {"error": f"{type(e).__name__}: {e}"}
    dt = time.perf_counter() - t0
    if dt > c.bound:
        passed = False
        detail = {**detail, "over_time_bound": True}
    return Outcome(c.number, c.slug, bool(passed), detail, dt, c.bound)


def _body(outcomes: list[Outcome], suite: str, seed: int) -> Report:
    rep = Report("verify", provenance={"suite": suite, "seed": seed, "tool_version": __version__})
    for o in outcomes:
        rep.add(o.key, o.passed, True)
        rep.witnesses[o.key] = o.detail
    return rep


def run_suite(suite: str = "acceptance", seed: int = 0, echo: Callable[[str], None] | None = None, only: list[int] | None = None) -> Report:
    """Run criteria 1 to 12, then run them again to check criterion 13.

    Criterion 13 passes when the second pass serializes to the same bytes as
    the first and the first pass finished within the wall-time bound.
    """
    if suite not in SCALES:
        raise ValueError(f"unknown suite {suite!r}")
    chosen = [c for c in CRITERIA if only is None or c.number in only]
    t0 = time.perf_counter()
    first = []
    for c in chosen:
        o = run_criterion(c, seed, suite)
        first.append(o)
        if echo:
            echo(o.line())
    wall = time.perf_counter() - t0
    report = _body(first, suite, seed)
    if only is None or 13 in only:
        t1 = time.perf_counter()
        second = [run_criterion(c, seed, suite) for c in chosen]
        again = _body(second, suite, seed)
        same = again.to_json() == report.to_json()
        ok = same and wall < DETERMINISM_BOUND
        o = Outcome(13, "determinism", ok, {"identical_reports": same, "within_wall_bound": wall < DETERMINISM_BOUND}, time.perf_counter() - t1, DETERMINISM_BOUND)
        report.add(o.key, o.passed, True)
        report.witnesses[o.key] = o.detail
        if echo:
            echo(o.line())
    if echo:
        n_fail = len(report.failures)
        echo(f"{suite} suite, seed {seed}: {len(report.verdicts) - n_fail}/{len(report.verdicts)} criteria pass, first pass {wall:.1f}s")
    return report
