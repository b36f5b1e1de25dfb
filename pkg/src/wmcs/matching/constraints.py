"""Doctor-hospital matching under a joint feasibility constraint on hospital counts."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from ..errors import HypothesisError, InfeasibleCapacityError, SizeLimitError
from ..order import bits
from .economy import ContractUniverse, Economy
from .rules import Feasibility, HospitalSideFeasibility, WorkerFromPartialOrder
from .stability import matching_cs, stable_set, stable_solve

HOSPITAL_SIDE = "H*"


class ConstraintsMarket:
    """Doctors with strict lists over hospitals, responsive hospitals with capacities,
    and a monotone feasibility map ``f`` over hospital count vectors."""

    def __init__(
        self,
        doctors: Sequence[str],
        hospitals: Sequence[str],
        doctor_prefs: Mapping[str, Sequence[str]],
        hospital_prefs: Mapping[str, Sequence[str]],
        capacities: Mapping[str, int],
        feasibility: Feasibility,
    ):
        self.doctors = tuple(doctors)
        self.hospitals = tuple(hospitals)
        if HOSPITAL_SIDE in self.doctors or set(self.doctors) & set(self.hospitals):
            raise ValueError("doctor and hospital names must be distinct")
        for d in self.doctors:
            if any(h not in self.hospitals for h in doctor_prefs.get(d, ())):
                raise ValueError(f"{d} ranks an unknown hospital")
        for h in self.hospitals:
            if any(d not in self.doctors for d in hospital_prefs.get(h, ())):
                raise ValueError(f"{h} ranks an unknown doctor")
            if capacities[h] < 0:
                raise ValueError(f"negative capacity at {h}")
        if feasibility.dims != len(self.hospitals):
            raise ValueError("feasibility dimension must equal the number of hospitals")
        self.doctor_prefs = {d: tuple(doctor_prefs.get(d, ())) for d in self.doctors}
        self.hospital_prefs = {h: tuple(hospital_prefs.get(h, ())) for h in self.hospitals}
        self.capacities = {h: capacities[h] for h in self.hospitals}
        self.f = feasibility
        bounds = [max(len(self.doctors), self.capacities[h] + 1) for h in self.hospitals]
        bad = feasibility.check_monotone(bounds)
        if bad is not None:
            raise ValueError(f"feasibility is not monotone: {bad[0]} infeasible but {bad[1]} feasible")
        q = [self.capacities[h] for h in self.hospitals]
        for w in feasibility.box(bounds):
            if feasibility(w) and any(a > b for a, b in zip(w, q)):
                raise InfeasibleCapacityError(f"{w} is feasible but exceeds capacities {q}")

    def with_feasibility(self, f: Feasibility) -> "ConstraintsMarket":
        return ConstraintsMarket(self.doctors, self.hospitals, self.doctor_prefs, self.hospital_prefs, self.capacities, f)

    def counts(self, mu: Mapping[str, str | None]) -> tuple[int, ...]:
        return tuple(sum(1 for d in self.doctors if mu.get(d) == h) for h in self.hospitals)

    def d_prefers(self, d: str, a: str | None, b: str | None) -> bool:
        """``a ≻_d b`` with ``None`` as the outside option."""
        lst = self.doctor_prefs[d]
        ra = lst.index(a) if a in lst else (len(lst) if a is None else len(lst) + 1)
        rb = lst.index(b) if b in lst else (len(lst) if b is None else len(lst) + 1)
        return ra < rb

    def h_rank(self, h: str, d: str) -> int | None:
        lst = self.hospital_prefs[h]
        return lst.index(d) if d in lst else None

    def matchings(self):
        options = [[None] + list(self.hospitals) for _ in self.doctors]
        for combo in product(*options):
            yield dict(zip(self.doctors, combo))


def weakly_stable(market: ConstraintsMarket, mu: Mapping[str, str | None]) -> bool:
    """Feasible, individually rational, and every blocking pair is tolerated."""
    w = market.counts(mu)
    if not market.f(w):
        return False
    for d in market.doctors:
        h = mu.get(d)
        if h is not None and (not market.d_prefers(d, h, None) or market.h_rank(h, d) is None):
            return False
    for i, h in enumerate(market.hospitals):
        if w[i] > market.capacities[h]:
            return False
    for d in market.doctors:
        for i, h in enumerate(market.hospitals):
            if not market.d_prefers(d, h, mu.get(d)):
                continue
            rd = market.h_rank(h, d)
            if rd is None:
                continue
            members = [market.h_rank(h, x) for x in market.doctors if mu.get(x) == h]
            blocks = w[i] < market.capacities[h] or any(r > rd for r in members)
            if not blocks:
                continue
            up = w[:i] + (w[i] + 1,) + w[i + 1:]
            if market.f(up) or not all(r < rd for r in members):
                return False
    return True


def weakly_stable_set(market: ConstraintsMarket) -> list[dict]:
    if len(market.doctors) * len(market.hospitals) > 10:
        raise SizeLimitError("too many doctor-hospital pairs for brute force")
    return [mu for mu in market.matchings() if weakly_stable(market, mu)]


def constraints_to_contracts(market: ConstraintsMarket) -> Economy:
    """Contracts ``D × H``; doctors are workers and all hospitals form one firm."""
    pairs = [(HOSPITAL_SIDE, d) for d in market.doctors for h in market.hospitals]
    names = [f"{d}@{h}" for d in market.doctors for h in market.hospitals]
    uni = ContractUniverse.build(pairs, names)
    idx = {(d, h): uni.index(f"{d}@{h}") for d in market.doctors for h in market.hospitals}
    rules = {}
    for d in market.doctors:
        ranking = [idx[d, h] for h in market.doctor_prefs[d]] + [None]
        rules[d] = WorkerFromPartialOrder.from_ranking(ranking, domain=[idx[d, h] for h in market.hospitals])
    rankings = [[idx[d, h] for d in market.hospital_prefs[h]] for h in market.hospitals]
    rules[HOSPITAL_SIDE] = HospitalSideFeasibility(
        rankings,
        [market.capacities[h] for h in market.hospitals],
        market.f,
        domain=range(len(uni)),
        names=market.hospitals,
    )
    econ = Economy(uni, rules)
    econ.market = market
    return econ


def matching_of(econ: Economy, z) -> dict:
    """``μ(Z)``; ``z`` must give each doctor at most one contract."""
    uni = econ.universe
    mu = {d: None for d in uni.workers}
    for i in (bits(z) if isinstance(z, int) else z):
        d, h = uni.contracts[i].name.split("@")
        if mu[d] is not None:
            raise ValueError(f"{d} holds two contracts")
        mu[d] = h
    return mu


def _key(market: ConstraintsMarket, mu: Mapping) -> tuple:
    return tuple(mu.get(d) or "" for d in market.doctors)


@dataclass(frozen=True)
class EquivalenceReport:
    holds: bool
    weakly_stable: list[dict]
    via_contracts: list[dict]


def equivalence_check(market: ConstraintsMarket) -> EquivalenceReport:
    """Weakly stable matchings versus images of stable allocations of the contracts economy."""
    econ = constraints_to_contracts(market)
    direct = sorted(weakly_stable_set(market), key=lambda m: _key(market, m))
    via = sorted((matching_of(econ, z) for z in stable_set(econ)), key=lambda m: _key(market, m))
    return EquivalenceReport([_key(market, m) for m in direct] == [_key(market, m) for m in via], direct, via)


def weak_stable_solve(market: ConstraintsMarket) -> dict:
    econ = constraints_to_contracts(market)
    mu = matching_of(econ, stable_solve(econ).allocation)
    if not weakly_stable(market, mu):
        raise HypothesisError("solver output is not weakly stable")
    return mu


@dataclass(frozen=True)
class ConstraintsWitness:
    source: dict
    target: dict
    doctors_weakly_better: bool


def constraints_cs(market: ConstraintsMarket, relaxed: ConstraintsMarket, direction: str = "forward") -> list[ConstraintsWitness]:
    """For each weakly stable matching under ``f`` (forward) or ``f′`` (backward),
    a partner under the other constraint that every doctor weakly prefers on the ``f′`` side."""
    bounds = [max(len(market.doctors), market.capacities[h] + 1) for h in market.hospitals]
    if not market.f.dominated_by(relaxed.f, bounds):
        raise HypothesisError("the relaxed constraint is not weakly more permissive")
    base, shifted = constraints_to_contracts(market), constraints_to_contracts(relaxed)
    out = []
    for w in matching_cs(base, shifted, direction):
        src_econ, dst_econ = (base, shifted) if direction == "forward" else (shifted, base)
        src, dst = matching_of(src_econ, w.source), matching_of(dst_econ, w.target)
        lo, hi = (src, dst) if direction == "forward" else (dst, src)
        better = all(not market.d_prefers(d, lo[d], hi[d]) for d in market.doctors)
        out.append(ConstraintsWitness(src, dst, better and w.workers_prefer_shifted))
    return out
