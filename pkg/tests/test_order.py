import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from wmcs.errors import CycleError, DuplicateLabelError, HypothesisError, MissingJoinError, SizeLimitError
from wmcs.generators import random_lattice, random_poset, random_subset
from wmcs.order import (
    FinitePoset,
    antichain,
    chain,
    closed_interval,
    enumerate_subintervals,
    enumerate_sublattices,
    grid,
    image,
    image_ws_monotone,
    is_lattice,
    is_sublattice,
    lower_weak,
    maximal_points,
    minimal_points,
    poset_from_relation,
    product_poset,
    sandwich,
    set_dominates,
    ss_decompose,
    ss_intersection_property,
    strong,
    upper_weak,
    ws_union_property,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def lattice_and_sets(seed, max_size=7):
    rng = random.Random(seed)
    p = random_lattice(rng, max_size)
    return p, random_subset(rng, p.size), random_subset(rng, p.size)


class TestConstruction:
    """Building posets from relations, chains, grids and products."""

    def test_chain_is_total(self):
        c = chain([0, 1, 2, 3])
        assert c.size == 4
        assert c.is_chain()
        assert all(c.leq(i, j) == (i <= j) for i in range(4) for j in range(4))

    def test_cycle_rejected(self):
        with pytest.raises(CycleError):
            poset_from_relation(["a", "b"], [("a", "b"), ("b", "a")])

    def test_duplicate_labels_rejected(self):
        with pytest.raises(DuplicateLabelError):
            FinitePoset.from_relation(["a", "a"], [])

    def test_transitive_closure(self):
        p = poset_from_relation(["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert p.leq(p.index("a"), p.index("c"))
        assert not p.leq(p.index("c"), p.index("a"))

    def test_product_of_two_point_chains_is_diamond(self):
        d = product_poset(chain([0, 1]), chain([0, 1]))
        assert d.size == 4
        assert is_lattice(d)
        assert not d.is_chain()

    def test_figure_domains(self):
        f2 = product_poset(chain([1, 2, 3]), chain([1, 2]))
        f3 = product_poset(chain([1, 2]), chain([1, 2]))
        assert (f2.size, f3.size) == (6, 4)
        assert f2.leq(f2.index((1, 2)), f2.index((3, 2)))
        assert not f2.leq(f2.index((2, 1)), f2.index((1, 2)))

    def test_grid_labels_are_tuples(self):
        g = grid([Fraction(0), Fraction(1, 2), Fraction(1)], 2)
        assert g.size == 9
        assert g.label(0) == (0, 0)

    def test_size_cap(self):
        with pytest.raises(SizeLimitError):
            chain(list(range(10)), cap=5)

    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("WMCS_MAX_ELEMENTS", "3")
        with pytest.raises(SizeLimitError):
            chain([0, 1, 2, 3])


class TestLatticeOperations:
    """Joins, meets and sublattices against a least-upper-bound oracle."""

    @given(seeds)
    def test_join_meet_match_oracle(self, seed):
        p = random_poset(random.Random(seed), 6)
        for a in range(p.size):
            for b in range(p.size):
                assert p.join(a, b) == oracles.lub(p, a, b)
                assert p.meet(a, b) == oracles.glb(p, a, b)

    def test_missing_join_raises(self):
        a = antichain(["x", "y"])
        assert not is_lattice(a)
        with pytest.raises(MissingJoinError):
            a.join_strict(0, 1)

    def test_antidiagonal_not_sublattice(self):
        g = grid([0, 1], 2)
        assert not is_sublattice(g, g.indices([(0, 1), (1, 0)]))

    def test_interval_generated_by_incomparables(self):
        g = grid([0, 1], 2)
        j, m = g.join_strict(g.index((1, 0)), g.index((0, 1))), g.meet_strict(g.index((1, 0)), g.index((0, 1)))
        assert closed_interval(g, m, j) == frozenset(range(4))

    def test_four_point_set_on_quarter_grid(self):
        q = [Fraction(i, 4) for i in range(5)]
        g = grid(q, 2)
        x1, x2 = g.index((0, Fraction(1, 4))), g.index((Fraction(1, 4), 0))
        z = {x1, x2, g.join_strict(x1, x2), g.meet_strict(x1, x2)}
        assert is_sublattice(g, z)

    @pytest.mark.parametrize(
        "poset, sublattices, intervals",
        [(grid([0, 1], 2), 12, 9), (grid([0, 1, 2], 2), 146, 36), (chain([0, 1, 2, 3]), 15, 10)],
    )
    def test_enumeration_counts(self, poset, sublattices, intervals):
        # frozen from oracles.all_sublattices
        subs = list(enumerate_sublattices(poset))
        assert len(subs) == len(set(subs)) == sublattices
        assert set(subs) == set(oracles.all_sublattices(poset))
        assert len(list(enumerate_subintervals(poset))) == intervals

    def test_extremal_points(self):
        c = chain([0, 1, 2, 3])
        assert maximal_points(c, {0, 2, 3}) == {3}
        assert minimal_points(c, {0, 2, 3}) == {0}
        a = antichain("xyz")
        assert maximal_points(a, {0, 1, 2}) == minimal_points(a, {0, 1, 2}) == {0, 1, 2}


class TestSetOrders:
    """Weak and strong set orders against their definitions."""

    def test_chain_footnote_pair(self):
        c = chain([0, 1, 2, 3])
        hi, lo = {1, 3}, {0, 2}
        assert set_dominates(c, hi, lo, "weak")
        assert not set_dominates(c, hi, lo, "strong")
        assert not sandwich(c, hi, lo)

    def test_shifted_intervals_on_chain(self):
        c = chain(list(range(4)))
        assert not set_dominates(c, {0, 1, 2}, {1, 2, 3}, "weak")
        assert set_dominates(c, {1, 2, 3}, {0, 1, 2}, "weak")

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            set_dominates(chain([0]), {0}, {0}, "sideways")

    @given(seeds)
    def test_reflexive_weak(self, seed):
        p, s, _ = lattice_and_sets(seed)
        assert set_dominates(p, s, s, "weak")

    @given(seeds)
    def test_orders_match_oracle(self, seed):
        p, hi, lo = lattice_and_sets(seed)
        assert upper_weak(p, hi, lo) == all(any(p.leq(x, y) for y in hi) for x in lo)
        assert lower_weak(p, hi, lo) == all(any(p.leq(x, y) for x in lo) for y in hi)
        assert set_dominates(p, hi, lo, "weak") == oracles.ws(p, hi, lo)
        assert strong(p, hi, lo) == oracles.ss(p, hi, lo)

    @given(seeds)
    def test_strong_decomposition(self, seed):
        rng = random.Random(seed)
        p = random_lattice(rng, 6)
        subs = oracles.all_sublattices(p)
        hi, lo = rng.choice(subs), rng.choice(subs)
        rep = ss_decompose(p, hi, lo)
        rhs = oracles.ws(p, hi, lo) and oracles.sublattice(p, hi | lo) and sandwich(p, hi, lo)
        assert strong(p, hi, lo) == rhs
        assert rep.ss == strong(p, hi, lo)

    def test_reflexive_strong_on_sublattice(self):
        g = grid([0, 1, 2], 2)
        for s in oracles.all_sublattices(g)[:40]:
            rep = ss_decompose(g, s, s)
            assert rep.ss and rep.ws and rep.union_sublattice and rep.sandwich


class TestUnionIntersection:
    """Closure of the set orders under unions and intersections."""

    @given(seeds)
    def test_weak_union(self, seed):
        rng = random.Random(seed)
        p = random_lattice(rng, 7)
        pairs = []
        while len(pairs) < 2:
            a, b = random_subset(rng, p.size), random_subset(rng, p.size)
            if oracles.ws(p, a, b):
                pairs.append((a, b))
        (s_hi, s_lo), (t_hi, t_lo) = pairs
        assert ws_union_property(p, s_hi, s_lo, t_hi, t_lo)
        assert ws_union_property(p, s_hi, s_lo, s_hi, s_lo)

    def test_union_requires_hypothesis(self):
        c = chain([0, 1, 2])
        with pytest.raises(HypothesisError):
            ws_union_property(c, {0}, {2}, {1}, {1})

    def test_strong_intersection(self):
        c = chain([0, 1, 2, 3])
        assert ss_intersection_property(c, {2, 3}, {1, 2}, {1, 2, 3}, {0, 1, 2})

    def test_image_footnote(self):
        # F(x1, x2) = {2 x1 + x2}; S <=ss T in the grid but the images are not strongly ordered
        dom = grid([1, 2], 2)
        values = sorted({2 * a + b for a, b in dom.labels})
        tgt = chain(values)
        f = {i: {tgt.index(2 * a + b)} for i, (a, b) in enumerate(dom.labels)}
        s, t = dom.indices([(1, 1), (2, 1)]), dom.indices([(1, 2), (2, 2)])
        assert strong(dom, t, s)
        fs, ft = image(f, s), image(f, t)
        assert [tgt.label(i) for i in sorted(fs)] == [3, 5]
        assert [tgt.label(i) for i in sorted(ft)] == [4, 6]
        assert not strong(tgt, ft, fs)
        assert image_ws_monotone(dom, f, t, s, tgt)
