"""Revealed-preference axioms and substitutability checks for a single choice rule.

Every check is exhaustive over the subsets of the rule's domain when the domain
has at most ``config.MAX_AXIOM_EXHAUSTIVE`` contracts. Larger domains are
sampled with a seeded generator and the result is marked non-exhaustive.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .. import config
from ..errors import BudgetExceeded
from ..order import bits
from .economy import submasks
from .rules import ChoiceRule


@dataclass(frozen=True)
class AxiomResult:
    holds: bool
    witness: tuple | None
    checked: int
    exhaustive: bool

    def __bool__(self) -> bool:
        return self.holds


def _sets(w) -> tuple:
    if w is None:
        return None
    return tuple(tuple(bits(m)) if isinstance(m, int) else m for m in w)


class _Counter:
    def __init__(self, budget: int | None):
        self.budget = budget
        self.n = 0

    def tick(self) -> None:
        self.n += 1
        if self.budget is not None and self.n > self.budget:
            raise BudgetExceeded(f"checked {self.n - 1} cases before exhausting the budget", coverage=self.n - 1)


def _nested_pairs(domain: int, exhaustive: bool, samples: int, seed: int) -> Iterator[tuple[int, int]]:
    """Pairs ``(small, big)`` with ``small ⊆ big ⊆ domain``."""
    if exhaustive:
        for big in submasks(domain):
            for small in submasks(big):
                yield small, big
        return
    rng = random.Random(seed)
    idx = list(bits(domain))
    for _ in range(samples):
        big = sum(1 << i for i in idx if rng.random() < 0.5)
        small = sum(1 << i for i in bits(big) if rng.random() < 0.5)
        yield small, big


def _run(rule: ChoiceRule, test: Callable[[int, int], tuple | None], budget: int | None, seed: int, samples: int = 2000) -> AxiomResult:
    exhaustive = bin(rule.domain).count("1") <= config.MAX_AXIOM_EXHAUSTIVE
    counter = _Counter(budget)
    for small, big in _nested_pairs(rule.domain, exhaustive, samples, seed):
        counter.tick()
        w = test(small, big)
        if w is not None:
            return AxiomResult(False, _sets(w), counter.n, exhaustive)
    return AxiomResult(True, None, counter.n, exhaustive)


def sen_alpha(rule: ChoiceRule, budget: int | None = None, seed: int = 0) -> AxiomResult:
    """``Y ∈ C(X'')`` and ``Y ⊆ X' ⊆ X''`` imply ``Y ∈ C(X')``. Witness ``(Y, X', X'')``."""

    def test(small, big):
        cs = rule.choose(small)
        for y in rule.choose(big):
            if y & ~small == 0 and y not in cs:
                return y, small, big
        return None

    return _run(rule, test, budget, seed)


def sen_beta(rule: ChoiceRule, budget: int | None = None, seed: int = 0) -> AxiomResult:
    """``Y, Y' ∈ C(X')``, ``Y ∈ C(X'')``, ``X' ⊆ X''`` imply ``Y' ∈ C(X'')``. Witness ``(Y, Y', X', X'')``."""

    def test(small, big):
        cs, cb = rule.choose(small), rule.choose(big)
        common = [y for y in cs if y in cb]
        if common:
            for y2 in cs:
                if y2 not in cb:
                    return common[0], y2, small, big
        return None

    return _run(rule, test, budget, seed)


def warp(rule: ChoiceRule, budget: int | None = None, seed: int = 0) -> AxiomResult:
    a = sen_alpha(rule, budget, seed)
    if not a.holds:
        return a
    b = sen_beta(rule, budget, seed)
    return AxiomResult(b.holds, b.witness, a.checked + b.checked, a.exhaustive and b.exhaustive)


def warni(rule: ChoiceRule, budget: int | None = None, seed: int = 0) -> AxiomResult:
    """If every ``Y ∈ C(X')`` sits inside some ``X''`` with ``Z ∈ C(X'')``, then ``Z ∈ C(X')``.

    Witness ``(Z, X')``.
    """
    exhaustive = bin(rule.domain).count("1") <= config.MAX_AXIOM_EXHAUSTIVE
    counter = _Counter(budget)
    if exhaustive:
        offers = list(submasks(rule.domain))
    else:
        rng = random.Random(seed)
        idx = list(bits(rule.domain))
        offers = [sum(1 << i for i in idx if rng.random() < 0.5) for _ in range(2000)]
    # where each set is revealed chosen
    chosen_in: dict[int, list[int]] = {}
    for m in offers:
        for z in rule.choose(m):
            chosen_in.setdefault(z, []).append(m)
    for xp in offers:
        cx = rule.choose(xp)
        for z, hosts in chosen_in.items():
            if z & ~xp or z in cx:
                continue
            counter.tick()
            if all(any(y & ~h == 0 for h in hosts) for y in cx):
                return AxiomResult(False, _sets((z, xp)), counter.n, exhaustive)
    return AxiomResult(True, None, counter.n, exhaustive)


AXIOMS = {"SenAlpha": sen_alpha, "SenBeta": sen_beta, "WARP": warp, "WARNI": warni}


def axiom_check(rule: ChoiceRule, axiom: str, budget: int | None = None, seed: int = 0) -> AxiomResult:
    try:
        fn = AXIOMS[axiom]
    except KeyError:
        raise ValueError(f"unknown axiom {axiom!r}; expected one of {sorted(AXIOMS)}") from None
    return fn(rule, budget, seed)


# substitutability


def _covers(a: tuple, b: tuple) -> bool:
    """Every set of ``b`` contains some set of ``a``: ``b ≥lws a`` under inclusion."""
    return all(any(x & ~y == 0 for x in a) for y in b)


def _covered(a: tuple, b: tuple) -> bool:
    """Every set of ``a`` lies inside some set of ``b``: ``b ≥uws a`` under inclusion."""
    return all(any(x & ~y == 0 for y in b) for x in a)


def weak_substitutable(rule: ChoiceRule, budget: int | None = None, seed: int = 0) -> AxiomResult:
    """Rejections are upper and lower weak set monotone in the offer set.

    Both halves of the weak set order are transitive, so it is enough to compare
    each offer set with its one-contract extensions. Witness ``(X', X'', side)``.
    """
    exhaustive = bin(rule.domain).count("1") <= config.MAX_AXIOM_EXHAUSTIVE
    counter = _Counter(budget)
    idx = list(bits(rule.domain))
    if exhaustive:
        pairs = ((m, m | 1 << i) for m in submasks(rule.domain) for i in idx if not m >> i & 1)
    else:
        rng = random.Random(seed)
        pairs = []
        for _ in range(2000):
            m = sum(1 << i for i in idx if rng.random() < 0.5)
            rest = [i for i in idx if not m >> i & 1]
            if rest:
                pairs.append((m, m | 1 << rng.choice(rest)))
    for small, big in pairs:
        counter.tick()
        rs, rb = rule.reject(small), rule.reject(big)
        if not _covered(rs, rb):
            return AxiomResult(False, _sets((small, big)) + ("upper",), counter.n, exhaustive)
        if not _covers(rs, rb):
            return AxiomResult(False, _sets((small, big)) + ("lower",), counter.n, exhaustive)
    return AxiomResult(True, None, counter.n, exhaustive)


def strong_set_monotone(rule: ChoiceRule, budget: int | None = None, seed: int = 0) -> AxiomResult:
    """Rejections increase in the strong set order. Witness ``(Y', Y'', X', X'')``."""

    def test(small, big):
        rs, rb = rule.reject(small), rule.reject(big)
        for a in rs:
            for b in rb:
                if (a | b) not in rb or (a & b) not in rs:
                    return a, b, small, big
        return None

    return _run(rule, test, budget, seed)


def more_permissive(rule_a: ChoiceRule, rule_b: ChoiceRule, budget: int | None = None, seed: int = 0) -> AxiomResult:
    """``R_a(X') ≤ws R_b(X')`` for every offer set: ``rule_a`` rejects less. Witness ``(X',)``."""
    dom = rule_a.domain | rule_b.domain
    exhaustive = bin(dom).count("1") <= config.MAX_AXIOM_EXHAUSTIVE
    counter = _Counter(budget)
    if exhaustive:
        offers = submasks(dom)
    else:
        rng = random.Random(seed)
        idx = list(bits(dom))
        offers = (sum(1 << i for i in idx if rng.random() < 0.5) for _ in range(2000))
    for m in offers:
        counter.tick()
        ra, rb = rule_a.reject(m), rule_b.reject(m)
        if not (_covered(ra, rb) and _covers(ra, rb)):
            return AxiomResult(False, _sets((m,)), counter.n, exhaustive)
    return AxiomResult(True, None, counter.n, exhaustive)
