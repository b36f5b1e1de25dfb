"""Brute-force reference implementations used to freeze expected values.

These deliberately avoid the package's bitmask helpers and work from the
order relation alone.
"""
from itertools import combinations


def upper_bounds(p, a, b):
    return [z for z in range(p.size) if p.leq(a, z) and p.leq(b, z)]


def lub(p, a, b):
    ub = upper_bounds(p, a, b)
    least = [z for z in ub if all(p.leq(z, w) for w in ub)]
    return least[0] if least else None


def glb(p, a, b):
    lb = [z for z in range(p.size) if p.leq(z, a) and p.leq(z, b)]
    great = [z for z in lb if all(p.leq(w, z) for w in lb)]
    return great[0] if great else None


def ws(p, hi, lo):
    up = all(any(p.leq(x, y) for y in hi) for x in lo)
    down = all(any(p.leq(x, y) for x in lo) for y in hi)
    return up and down


def ss(p, hi, lo):
    return all(lub(p, x, y) in hi and glb(p, x, y) in lo for x in lo for y in hi)


def sublattice(p, s):
    return all(lub(p, a, b) in s and glb(p, a, b) in s for a in s for b in s)


def all_sublattices(p):
    out = []
    for k in range(1, p.size + 1):
        for c in combinations(range(p.size), k):
            if sublattice(p, set(c)):
                out.append(frozenset(c))
    return out


def argmax(values, s):
    best = max(values[x] for x in s)
    return frozenset(x for x in s if values[x] == best)


def pareto(vectors, s=None):
    s = range(len(vectors)) if s is None else s
    s = list(s)

    def dom(a, b):
        return all(x >= y for x, y in zip(a, b)) and a != b

    return frozenset(x for x in s if not any(dom(vectors[y], vectors[x]) for y in s))


def fixed_points(images):
    return frozenset(x for x, img in images.items() if x in img)
