"""Contracts, agents and economies.

Sets of contracts are bitmasks over the contract indices of a universe. A
family of sets is a tuple of masks in canonical order (by size, then by the
sorted indices), so every family has exactly one representation.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence

from ..errors import RuleDomainError
from ..order import bits, mask_of

Family = tuple[int, ...]


def mask_key(m: int) -> tuple[int, tuple[int, ...]]:
    return (bin(m).count("1"), tuple(bits(m)))


def canonical_family(masks: Iterable[int]) -> Family:
    return tuple(sorted(set(masks), key=mask_key))


def submasks(m: int):
    """Every submask of ``m``, starting from the empty set."""
    s = 0
    while True:
        yield s
        if s == m:
            return
        s = (s - m) & m


def to_sets(fam: Family) -> list[frozenset[int]]:
    return [frozenset(bits(m)) for m in fam]


@dataclass(frozen=True)
class Contract:
    name: str
    firm: str
    worker: str


class ContractUniverse:
    """Indexed contracts, each naming one firm and one worker."""

    def __init__(self, contracts: Sequence[Contract | tuple]):
        cs = [c if isinstance(c, Contract) else Contract(*c) for c in contracts]
        names = [c.name for c in cs]
        if len(set(names)) != len(names):
            raise ValueError("contract names must be unique")
        self.contracts = tuple(cs)
        self._index = {c.name: i for i, c in enumerate(cs)}
        self.firms = tuple(dict.fromkeys(c.firm for c in cs))
        self.workers = tuple(dict.fromkeys(c.worker for c in cs))
        if set(self.firms) & set(self.workers):
            raise ValueError("firm and worker names must be disjoint")
        self._agent_mask = {a: 0 for a in self.firms + self.workers}
        for i, c in enumerate(cs):
            self._agent_mask[c.firm] |= 1 << i
            self._agent_mask[c.worker] |= 1 << i
        self.full = (1 << len(cs)) - 1

    @classmethod
    def build(cls, pairs: Sequence[tuple[str, str]], names: Sequence[str] | None = None) -> "ContractUniverse":
        """Contracts from (firm, worker) pairs; default names ``firm:worker``."""
        names = names or [f"{f}:{w}" for f, w in pairs]
        return cls([Contract(n, f, w) for n, (f, w) in zip(names, pairs)])

    def __len__(self) -> int:
        return len(self.contracts)

    @property
    def agents(self) -> tuple[str, ...]:
        return self.firms + self.workers

    def index(self, name: Hashable) -> int:
        return self._index[name]

    def mask(self, items: Iterable) -> int:
        """Mask of contracts given by index or name."""
        return mask_of(i if isinstance(i, int) else self._index[i] for i in items)

    def names(self, m: int) -> list[str]:
        return [self.contracts[i].name for i in bits(m)]

    def agent_mask(self, agent: str) -> int:
        return self._agent_mask[agent]

    def firm_of(self, i: int) -> str:
        return self.contracts[i].firm

    def worker_of(self, i: int) -> str:
        return self.contracts[i].worker

    def is_firm(self, agent: str) -> bool:
        return agent in self.firms

    def is_allocation(self, m: int) -> bool:
        return all(bin(m & self._agent_mask[w]).count("1") <= 1 for w in self.workers)


class Economy:
    """A universe together with one choice rule per agent; choices are memoized."""

    def __init__(self, universe: ContractUniverse, rules: Mapping[str, object]):
        missing = [a for a in universe.agents if a not in rules]
        if missing:
            raise RuleDomainError(f"agents without a rule: {missing}")
        extra = [a for a in rules if a not in universe.agents]
        if extra:
            raise RuleDomainError(f"rules for unknown agents: {extra}")
        for a in universe.agents:
            if rules[a].domain & ~universe.agent_mask(a):
                raise RuleDomainError(f"rule of {a} mentions contracts that are not its own")
        self.universe = universe
        self.rules = dict(rules)
        self._c: dict[tuple[str, int], Family] = {}
        self._side: dict[tuple[str, int], Family] = {}

    @property
    def n(self) -> int:
        return len(self.universe)

    def replace(self, **rules) -> "Economy":
        new = dict(self.rules)
        new.update(rules)
        return Economy(self.universe, new)

    def choice(self, agent: str, m: int) -> Family:
        own = m & self.universe.agent_mask(agent)
        key = (agent, own)
        fam = self._c.get(key)
        if fam is None:
            fam = self.rules[agent].choose(own)
            self._c[key] = fam
        return fam

    def rejection(self, agent: str, m: int) -> Family:
        own = m & self.universe.agent_mask(agent)
        return canonical_family(own & ~y for y in self.choice(agent, own))

    def chooses(self, agent: str, y: int, m: int) -> bool:
        """Whether ``y`` restricted to ``agent`` is in ``C_agent(m)``."""
        return (y & self.universe.agent_mask(agent)) in self.choice(agent, m)

    def _side_family(self, side: str, m: int, reject: bool) -> Family:
        key = (side + ("R" if reject else "C"), m)
        fam = self._side.get(key)
        if fam is None:
            agents = self.universe.firms if side == "F" else self.universe.workers
            get = self.rejection if reject else self.choice
            fams = [get(a, m) for a in agents]
            out = set()
            for combo in product(*fams):
                u = 0
                for y in combo:
                    u |= y
                out.add(u)
            fam = canonical_family(out)
            self._side[key] = fam
        return fam

    def choice_side(self, side: str, m: int) -> Family:
        """``C_F`` or ``C_W``: unions of one chosen set per agent of the side."""
        return self._side_family(side, m, False)

    def rejection_side(self, side: str, m: int) -> Family:
        return self._side_family(side, m, True)
