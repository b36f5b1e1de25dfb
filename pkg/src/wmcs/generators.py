"""Seeded random instance generators used by the property suites."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .choice import ObjectiveTable
from .order import FinitePoset, bits, chain, mask_of, product_poset


def random_poset(rng: random.Random, n: int, density: float = 0.35) -> FinitePoset:
    """Random order on ``n`` labels generated from a random DAG on a shuffled sequence."""
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i, j in combinations(range(n), 2) if rng.random() < density]
    return FinitePoset.from_relation(list(range(n)), pairs, cap=max(n, 1))


def macneille(p: FinitePoset) -> FinitePoset:
    """Dedekind-MacNeille completion; labels are the normal ideals as sorted tuples."""
    n = p.size
    full = (1 << n) - 1
    cuts = set()
    for m in range(1 << n):
        ub = full
        for i in bits(m):
            ub &= p.up_mask(i)
        lb = full
        for i in bits(ub):
            lb &= p.down_mask(i)
        cuts.add(lb)
    cuts = sorted(cuts, key=lambda c: (bin(c).count("1"), c))
    labels = [tuple(bits(c)) for c in cuts]
    up = [mask_of(j for j, d in enumerate(cuts) if c & ~d == 0) for c in cuts]
    return FinitePoset(labels, up_masks=up, cap=len(cuts))


def random_lattice(rng: random.Random, max_size: int = 8) -> FinitePoset:
    """Random lattice with at most ``max_size`` elements, biased away from chains."""
    if max_size >= 4 and rng.random() < 0.2:
        a = rng.randint(2, max(2, max_size // 2))
        b = rng.randint(2, max(2, max_size // a))
        return relabel(product_poset(chain(list(range(a))), chain(list(range(b))), cap=a * b))
    while True:
        k = rng.randint(2, max(2, min(6, max_size - 1)))
        lat = macneille(random_poset(rng, k, rng.choice([0.15, 0.3, 0.45])))
        if 3 <= lat.size <= max_size or (max_size < 3 and lat.size <= max_size):
            return relabel(lat)


def relabel(p: FinitePoset) -> FinitePoset:
    return FinitePoset(list(range(p.size)), up_masks=[p.up_mask(i) for i in range(p.size)], cap=p.size)


def random_chain(rng: random.Random, max_size: int = 8) -> FinitePoset:
    return chain(list(range(rng.randint(1, max_size))))


def random_table(rng: random.Random, n: int, spread: int = 3) -> ObjectiveTable:
    return ObjectiveTable([Fraction(rng.randint(0, spread)) for _ in range(n)])


def increasing_table(rng: random.Random, p: FinitePoset, spread: int = 2) -> ObjectiveTable:
    """A weakly increasing table: sum of random nonnegative weights over each down-set."""
    w = [rng.randint(0, spread) for _ in range(p.size)]
    return ObjectiveTable([sum(w[j] for j in bits(p.down_mask(i))) for i in range(p.size)])


def random_pair(rng: random.Random, p: FinitePoset, spread: int = 3) -> tuple[ObjectiveTable, ObjectiveTable]:
    """``(u, v)``; half the time ``v`` is ``u`` plus an increasing table, to create dominance."""
    u = random_table(rng, p.size, spread)
    if rng.random() < 0.5:
        inc = increasing_table(rng, p)
        v = ObjectiveTable([a + b for a, b in zip(u.values, inc.values)])
    else:
        v = random_table(rng, p.size, spread)
    return u, v


def random_subset(rng: random.Random, n: int, nonempty: bool = True) -> frozenset[int]:
    while True:
        s = frozenset(i for i in range(n) if rng.random() < 0.5)
        if s or not nonempty:
            return s


# monotone maps and correspondences on lattices


def random_monotone_map(rng: random.Random, p: FinitePoset) -> list[int]:
    """``g(x)`` is the join of random targets over the down-set of ``x``, hence monotone."""
    target = [rng.randrange(p.size) for _ in range(p.size)]
    g = []
    for x in range(p.size):
        acc = None
        for y in bits(p.down_mask(x)):
            acc = target[y] if acc is None else p.join_strict(acc, target[y])
        g.append(acc)
    return g


def correspondence_around(rng: random.Random, p: FinitePoset, g: list[int], side: str, density: float = 0.3) -> dict[int, frozenset[int]]:
    """``{g(x)}`` plus random points below (``side="down"``) or above ``g(x)``.

    Points below keep the map upper weak set monotone; points above keep it
    lower weak set monotone.
    """
    out = {}
    for x in range(p.size):
        pool = p.down_mask(g[x]) if side == "down" else p.up_mask(g[x])
        extra = {y for y in bits(pool) if rng.random() < density}
        out[x] = frozenset(extra | {g[x]})
    return out
