import random
from dataclasses import dataclass

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from wmcs.errors import DeadEndError, HypothesisError, NotInXPlusError, UnknownGalleryName
from wmcs.fixedpoint import (
    GALLERY_NAMES,
    Correspondence,
    Policy,
    Scripted,
    check_gallery,
    classify,
    compare_fixed_points,
    cs_lift,
    fixed_points,
    gallery,
    is_lower_monotone,
    is_upper_monotone,
    iterate,
    maximal,
    minimal,
    reachable,
    x_minus,
    x_plus,
)
from wmcs.generators import correspondence_around, random_lattice, random_monotone_map, random_subset
from wmcs.order import chain, grid

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@dataclass
class Divisibility:
    """Divisibility on 1..n, a partial order that is not a product grid."""

    n: int

    @property
    def size(self) -> int:
        return self.n

    def leq(self, i: int, j: int) -> bool:
        return (j + 1) % (i + 1) == 0

    def label(self, i: int) -> int:
        return i + 1


def uws_oracle(o, hi, lo):
    return all(any(o.leq(x, y) for y in hi) for x in lo)


def lws_oracle(o, hi, lo):
    return all(any(o.leq(x, y) for x in lo) for y in hi)


@pytest.fixture(scope="module")
def fig2():
    g = gallery("figure2")
    return g.poset, g.correspondence


@pytest.fixture(scope="module")
def fig3():
    g = gallery("figure3-supp")
    return g.poset, g.correspondence


def labels(p, s):
    return sorted(p.label(i) for i in s)


class TestMonotonicity:
    """Upper and lower monotonicity and the sets of ascending and descending points."""

    def test_identity(self):
        p = grid([0, 1, 2], 2)
        f = Correspondence(p, {x: {x} for x in range(p.size)})
        assert x_plus(f) == x_minus(f) == frozenset(range(p.size))
        assert fixed_points(f) == frozenset(range(p.size))

    def test_swap(self):
        inst = gallery("swap-no-xplus")
        assert x_plus(inst.correspondence) == frozenset()
        assert fixed_points(inst.correspondence) == frozenset()

    def test_constant(self):
        p = grid([0, 1], 2)
        f = Correspondence(p, {x: {1, 2} for x in range(4)})
        assert is_upper_monotone(f) and is_lower_monotone(f)

    def test_three_point(self):
        f = gallery("three-point-no-uws").correspondence
        assert is_lower_monotone(f) and not is_upper_monotone(f)
        assert fixed_points(f) == frozenset()

    def test_figure2(self, fig2):
        p, f = fig2
        cls = classify(f)
        assert cls.uws and cls.lws
        assert p.index((1, 1)) in x_plus(f)

    @given(seeds)
    def test_classify_matches_oracle(self, seed):
        rng = random.Random(seed)
        p = random_lattice(rng, 6)
        f = Correspondence(p, {x: random_subset(rng, p.size) for x in range(p.size)})
        pairs = [(a, b) for a in range(p.size) for b in range(p.size) if p.leq(a, b)]
        cls = classify(f)
        assert cls.uws == all(uws_oracle(p, f(b), f(a)) for a, b in pairs)
        assert cls.lws == all(lws_oracle(p, f(b), f(a)) for a, b in pairs)
        assert cls.ss == all(oracles.ss(p, f(b), f(a)) for a, b in pairs if a != b)

    def test_generic_order(self):
        o = Divisibility(12)
        # x goes to its proper multiples up to 12, or to itself when it has none
        f = Correspondence(o, lambda i: [j for j in range(12) if o.leq(i, j) and (j != i or 2 * (i + 1) > 12)])
        assert x_plus(f) == frozenset(range(12))
        pairs = [(a, b) for a in range(12) for b in range(12) if a != b and o.leq(a, b)]
        # 7 is a multiple of 1 but F(6) = {12}: frozen False from the oracle
        assert is_upper_monotone(f) is all(uws_oracle(o, f(b), f(a)) for a, b in pairs) is False
        assert sorted(o.label(i) for i in fixed_points(f)) == [7, 8, 9, 10, 11, 12]
        assert [o.label(i) for i in iterate(f, 0, Policy.LEAST_INDEX).trace] == [1, 2, 4, 8]

    def test_empty_image_rejected(self):
        with pytest.raises(ValueError):
            Correspondence(chain([0, 1]), {0: [], 1: [1]})


class TestFixedPoints:
    """Existence and extremal fixed points."""

    def test_figure2(self, fig2):
        p, f = fig2
        fp = fixed_points(f, check=True)
        assert labels(p, fp) == [(2, 2), (3, 2)]
        assert labels(p, minimal(p, fp)) == [(2, 2)]
        assert labels(p, maximal(p, fp)) == [(3, 2)]

    def test_figure3(self, fig3):
        p, f = fig3
        assert labels(p, fixed_points(f)) == [(2, 1), (2, 2)]

    @given(seeds, st.sampled_from(["down", "up"]))
    def test_existence(self, seed, side):
        rng = random.Random(seed)
        p = random_lattice(rng, 9)
        f = Correspondence(p, correspondence_around(rng, p, random_monotone_map(rng, p), side))
        fp = oracles.fixed_points(f.as_dict())
        assert fixed_points(f, check=True) == fp
        cls = classify(f)
        if side == "down":
            assert cls.in_F_plus and maximal(p, fp)
        else:
            assert cls.in_F_minus and minimal(p, fp)


class TestIteration:
    """Selections along ascending chains of the correspondence."""

    def test_identity(self):
        p = chain([0, 1, 2])
        f = Correspondence(p, {x: {x} for x in range(3)})
        res = iterate(f, 1)
        assert res.trace == [1] and res.fixed_point == 1 and res.steps == 0

    @pytest.mark.parametrize("policy", list(Policy))
    def test_figure2_every_policy(self, fig2, policy):
        p, f = fig2
        res = iterate(f, p.index((1, 1)), policy)
        assert p.label(res.fixed_point) == (3, 2)

    def test_figure2_reachability(self, fig2):
        p, f = fig2
        reach = reachable(f, p.index((1, 1)))
        assert labels(p, reach.terminal_fixed_points) == [(3, 2)]
        assert p.index((2, 2)) not in reach.visited
        assert not reach.dead_ends

    def test_figure3_scripted(self, fig3):
        p, f = fig3
        res = iterate(f, p.index((1, 1)), Scripted(tuple(p.indices([(1, 2)])) + tuple(p.indices([(2, 2)]))))
        assert [p.label(i) for i in res.trace] == [(1, 1), (1, 2), (2, 2)]
        assert p.label(res.fixed_point) == (2, 2)
        assert p.label(iterate(f, p.index((1, 1)), Policy.MINIMAL_POINT).fixed_point) == (2, 2)

    def test_figure3_reaches_both(self, fig3):
        p, f = fig3
        assert labels(p, reachable(f, p.index((1, 1))).terminal_fixed_points) == [(2, 1), (2, 2)]

    def test_not_ascending_start(self):
        f = gallery("swap-no-xplus").correspondence
        with pytest.raises(NotInXPlusError):
            iterate(f, 0)

    def test_dead_end(self):
        p = chain([0, 1, 2])
        f = Correspondence(p, {0: {1}, 1: {0}, 2: {0}})
        assert iterate(f, 0).dead_end
        with pytest.raises(DeadEndError):
            iterate(f, 0, strict=True)

    def test_illegal_script(self, fig2):
        p, f = fig2
        with pytest.raises(ValueError):
            iterate(f, p.index((1, 1)), Scripted((p.index((3, 2)),)))

    def test_descending(self, fig2):
        p, f = fig2
        res = iterate(f, p.index((3, 2)), direction="down")
        assert res.fixed_point == p.index((3, 2))


class TestComparativeStatics:
    """Lifting fixed points of one correspondence to a dominating one."""

    def test_same_correspondence(self, fig2):
        p, f = fig2
        for x in fixed_points(f):
            y = cs_lift(f, f, x)
            assert p.leq(x, y) and y in f(y)

    def test_figure2_constant_shift(self, fig2):
        p, f = fig2
        top = p.index((3, 2))
        f2 = Correspondence(p, {x: {top} for x in range(p.size)})
        assert cs_lift(f, f2, p.index((2, 2))) == top
        assert compare_fixed_points(f, f2, "upper")

    @given(seeds, st.sampled_from(["upper", "lower"]))
    def test_random_lifts(self, seed, mode):
        rng = random.Random(seed)
        p = random_lattice(rng, 9)
        g, h = random_monotone_map(rng, p), random_monotone_map(rng, p)
        side = "down" if mode == "upper" else "up"
        op = p.join_strict if mode == "upper" else p.meet_strict
        f = Correspondence(p, correspondence_around(rng, p, g, side))
        f2 = Correspondence(p, correspondence_around(rng, p, [op(a, b) for a, b in zip(g, h)], side))
        fp2 = oracles.fixed_points(f2.as_dict())
        for x in oracles.fixed_points(f.as_dict()):
            y = cs_lift(f, f2, x, mode)
            assert y in fp2
            assert p.leq(x, y) if mode == "upper" else p.leq(y, x)

    def test_hypotheses_checked(self, fig2):
        p, f = fig2
        bottom = p.index((1, 1))
        f2 = Correspondence(p, {x: {bottom} for x in range(p.size)})
        with pytest.raises(HypothesisError):
            cs_lift(f, f2, p.index((2, 2)), "upper")
        with pytest.raises(HypothesisError):
            cs_lift(f, f, bottom, "upper")
        with pytest.raises(ValueError):
            cs_lift(f, f, p.index((2, 2)), "sideways")


class TestGallery:
    """Named counterexamples re-derive their stated facts."""

    @pytest.mark.parametrize("name", GALLERY_NAMES)
    def test_facts(self, name):
        checks = check_gallery(gallery(name))
        assert checks and all(c.ok for c in checks), [c for c in checks if not c.ok]

    def test_figure2_minimal_unreachable(self):
        facts = {c.fact: c.observed for c in check_gallery(gallery("figure2"))}
        assert facts["minimal_fixed_point_reachable_from_(1,1)"] is False

    def test_unknown(self):
        with pytest.raises(UnknownGalleryName):
            gallery("nope")
