import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from wmcs.choice import (
    DominanceKind,
    ObjectiveTable,
    argmax,
    dominates,
    quasi_supermodular,
    single_crossing,
    sum_target,
    supermodular,
    wmcs_search,
)
from wmcs.errors import BudgetExceeded, EmptyDomainError, NotLatticeError
from wmcs.generators import random_lattice, random_pair, random_table
from wmcs.order import antichain, chain, enumerate_subintervals, enumerate_sublattices, grid, product_poset

seeds = st.integers(min_value=0, max_value=2**32 - 1)
Q = [Fraction(i, 4) for i in range(5)]


@pytest.fixture(scope="module")
def quarter():
    p = grid(Q, 2)
    return p, sum_target(p, Fraction(1, 4)), sum_target(p, Fraction(3, 4))


class TestArgmax:
    """Maximizers of exact tables over constraint sets."""

    def test_constant_table(self):
        p = grid([0, 1, 2], 2)
        f = ObjectiveTable([7] * p.size)
        s = {0, 4, 8}
        assert argmax(p, s, f) == s

    def test_antidiagonal(self):
        p = grid(Q, 2)
        f = sum_target(p, Fraction(1, 2))
        got = {p.label(i) for i in argmax(p, range(p.size), f)}
        # frozen from a scan of all 25 grid points
        assert got == {(0, Fraction(1, 2)), (Fraction(1, 4), Fraction(1, 4)), (Fraction(1, 2), 0)}
        assert got == {x for x in p.labels if sum(x) == Fraction(1, 2)}

    def test_kinked_utility_on_chain(self):
        c = chain(Q)
        half = Fraction(1, 2)
        f = ObjectiveTable.from_function(c, lambda x: 2 - x if x < half else 3 - x)
        assert {c.label(i) for i in argmax(c, range(5), f)} == {half}

    def test_empty_domain(self):
        with pytest.raises(EmptyDomainError):
            argmax(chain([0]), [], ObjectiveTable([0]))

    def test_partial_mapping_rejected(self):
        with pytest.raises(ValueError):
            ObjectiveTable.from_mapping(chain([0, 1]), {0: 1})


class TestModularity:
    """Quasi-supermodularity and supermodularity."""

    @given(seeds)
    def test_chain_always_quasi_supermodular(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 7)
        assert quasi_supermodular(chain(list(range(n))), random_table(rng, n))

    def test_supermodular_on_square(self):
        d = product_poset(chain([0, 1]), chain([0, 1]))
        f = ObjectiveTable.from_function(d, lambda x: x[0] * x[1])
        assert supermodular(d, f) and quasi_supermodular(d, f)

    def test_diamond_bump(self):
        d = product_poset(chain([0, 1]), chain([0, 1]))
        f = ObjectiveTable.from_mapping(d, {(0, 0): 0, (1, 0): 1, (0, 1): 1, (1, 1): 0})
        assert not quasi_supermodular(d, f)
        assert not supermodular(d, f)

    @given(seeds)
    def test_supermodular_matches_oracle(self, seed):
        rng = random.Random(seed)
        p = random_lattice(rng, 7)
        f = random_table(rng, p.size)
        want = all(
            f[oracles.lub(p, a, b)] + f[oracles.glb(p, a, b)] >= f[a] + f[b] for a in range(p.size) for b in range(p.size)
        )
        assert supermodular(p, f) == want

    def test_needs_lattice(self):
        a = antichain("xy")
        with pytest.raises(NotLatticeError):
            quasi_supermodular(a, ObjectiveTable([0, 0]))


class TestDominance:
    """Dominance relations against constrained-maximizer oracles."""

    @given(seeds)
    def test_reflexive_kinds(self, seed):
        rng = random.Random(seed)
        p = random_lattice(rng, 7)
        u = random_table(rng, p.size)
        for kind in ("SingleCrossing", "Weak", "WeakInterval", "QSInterval"):
            assert dominates(p, kind, u, u)
        assert dominates(p, "MS", u, u) == quasi_supermodular(p, u)
        # interval dominance of u over itself asks for sublattice maximizers on every interval
        want = all(oracles.sublattice(p, argmax(p, s, u)) for s in enumerate_subintervals(p))
        assert dominates(p, "Interval", u, u) == want

    def test_quarter_grid(self, quarter):
        p, u, v = quarter
        assert dominates(p, DominanceKind.WEAK_INTERVAL, v, u)
        assert not dominates(p, DominanceKind.WEAK, v, u)

    @given(seeds)
    def test_oracle_on_random_lattices(self, seed):
        rng = random.Random(seed)
        p = random_lattice(rng, 6)
        u, v = random_pair(rng, p)
        subl = list(enumerate_sublattices(p))
        subi = list(enumerate_subintervals(p))
        assert dominates(p, "Weak", v, u) == all(oracles.ws(p, argmax(p, s, v), argmax(p, s, u)) for s in subl)
        assert dominates(p, "WeakInterval", v, u) == all(oracles.ws(p, argmax(p, s, v), argmax(p, s, u)) for s in subi)
        assert dominates(p, "Interval", v, u) == all(oracles.ss(p, argmax(p, s, v), argmax(p, s, u)) for s in subi)

    @given(seeds)
    def test_chain_reductions(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 7)
        c = chain(list(range(n)))
        u, v = random_pair(rng, c)
        assert dominates(c, "Weak", v, u) == dominates(c, "SingleCrossing", v, u)
        assert dominates(c, "WeakInterval", v, u) == dominates(c, "Interval", v, u)

    def test_single_crossing_direct(self):
        c = chain([0, 1, 2])
        u = ObjectiveTable([0, 1, 0])
        assert single_crossing(c, ObjectiveTable([0, 1, 2]), u)
        assert not single_crossing(c, ObjectiveTable([1, 0, 0]), u)


class TestWitnessSearch:
    """Searching constraint families for a failure of comparative statics."""

    def test_quarter_grid_witness(self, quarter):
        p, u, v = quarter
        res = wmcs_search(p, v, u, "sublattices", "ws")
        w = res.witness
        assert w is not None and len(w.subset) == 4
        (x1,), (x2,) = w.argmax_u, w.argmax_v
        assert not p.leq(x1, x2) and not p.leq(x2, x1)
        assert w.subset == {x1, x2, p.join_strict(x1, x2), p.meet_strict(x1, x2)}
        assert not oracles.ws(p, w.argmax_v, w.argmax_u)

    def test_quarter_grid_intervals_clean(self, quarter):
        p, u, v = quarter
        assert wmcs_search(p, v, u, "subintervals", "ws").witness is None

    @given(seeds)
    def test_weak_dominance_leaves_no_witness(self, seed):
        rng = random.Random(seed)
        p = random_lattice(rng, 7)
        u, v = random_pair(rng, p)
        res = wmcs_search(p, v, u, "sublattices", "ws")
        assert res.exhaustive
        assert (res.witness is None) == dominates(p, "Weak", v, u)

    @given(seeds)
    def test_interval_dominance_strong_on_intervals(self, seed):
        rng = random.Random(seed)
        p = random_lattice(rng, 7)
        u, v = random_pair(rng, p)
        if dominates(p, "Interval", v, u):
            assert wmcs_search(p, v, u, "subintervals", "ss").witness is None

    def test_budget(self):
        p = grid([0, 1, 2], 2)
        u = ObjectiveTable([0] * p.size)
        with pytest.raises(BudgetExceeded):
            wmcs_search(p, u, u, "sublattices", "ws", budget=3)
