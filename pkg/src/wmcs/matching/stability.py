"""Stability, the availability operator T, and comparative statics of stable allocations."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .. import config
from ..errors import AllocationError, HypothesisError, SizeLimitError, TheoremViolation
from ..fixedpoint import Correspondence, Policy, cs_lift, iterate
from ..order import bits, mask_of
from .axioms import more_permissive, sen_alpha, weak_substitutable
from .economy import Economy, canonical_family, mask_key, submasks


def _mask(z) -> int:
    return z if isinstance(z, int) else mask_of(z)


def _sets(masks) -> list[frozenset[int]]:
    return [frozenset(bits(m)) for m in masks]


# preferences


def blair(econ: Economy, agent: str, hi, lo) -> bool:
    """``hi ⪰_agent lo``: the agent's part of ``hi`` is chosen from the union of both parts."""
    own = econ.universe.agent_mask(agent)
    h, l = _mask(hi) & own, _mask(lo) & own
    return h in econ.choice(agent, h | l)


def blair_strict(econ: Economy, agent: str, hi, lo) -> bool:
    return blair(econ, agent, hi, lo) and not blair(econ, agent, lo, hi)


def _u_mask(econ: Economy, z: int) -> int:
    uni = econ.universe
    out = 0
    for i in range(len(uni)):
        if blair_strict(econ, uni.worker_of(i), 1 << i, z):
            out |= 1 << i
    return out


def upgrades(econ: Economy, z) -> frozenset[int]:
    """``U(Z)``: contracts each worker strictly prefers to their part of ``Z``."""
    return frozenset(bits(_u_mask(econ, _mask(z))))


def _require_allocation(econ: Economy, z: int) -> None:
    if not econ.universe.is_allocation(z):
        raise AllocationError(f"{econ.universe.names(z)} gives some worker two contracts")


def individually_rational(econ: Economy, z) -> bool:
    z = _mask(z)
    return all(econ.chooses(a, z, z) for a in econ.universe.agents)


def is_stable(econ: Economy, z) -> bool:
    z = _mask(z)
    _require_allocation(econ, z)
    if not individually_rational(econ, z):
        return False
    avail = z | _u_mask(econ, z)
    return all(econ.chooses(f, z, avail) for f in econ.universe.firms)


def _allocations_within(econ: Economy, m: int):
    uni = econ.universe
    per_worker = [[0] + [1 << i for i in bits(m & uni.agent_mask(w))] for w in uni.workers]
    for combo in product(*per_worker):
        yield sum(combo)


def is_alt_stable(econ: Economy, z) -> bool:
    """Individual rationality plus: no firm has an allocation it strictly prefers whose
    new contracts each go to a worker who strictly prefers them."""
    z = _mask(z)
    _require_allocation(econ, z)
    if not individually_rational(econ, z):
        return False
    uni = econ.universe
    for f in uni.firms:
        fm = uni.agent_mask(f)
        zf = z & fm
        for y in _allocations_within(econ, fm):
            if y == zf:
                continue
            if any(not blair_strict(econ, uni.worker_of(i), 1 << i, z) for i in bits(y & ~zf)):
                continue
            if blair_strict(econ, f, y, zf):
                return False
    return True


def allocations(econ: Economy):
    return _allocations_within(econ, econ.universe.full)


def stable_set(econ: Economy) -> list[frozenset[int]]:
    """Every stable allocation, by brute force over all allocations."""
    if econ.n > config.MAX_STABLE_SET_CONTRACTS:
        raise SizeLimitError(f"{econ.n} contracts exceed the stable-set cap of {config.MAX_STABLE_SET_CONTRACTS}")
    found = [z for z in allocations(econ) if is_stable(econ, z)]
    return _sets(sorted(found, key=mask_key))


def alt_stable_set(econ: Economy) -> list[frozenset[int]]:
    if econ.n > config.MAX_STABLE_SET_CONTRACTS:
        raise SizeLimitError(f"{econ.n} contracts exceed the stable-set cap of {config.MAX_STABLE_SET_CONTRACTS}")
    found = [z for z in allocations(econ) if is_alt_stable(econ, z)]
    return _sets(sorted(found, key=mask_key))


# hypotheses


@dataclass(frozen=True)
class AgentAudit:
    agent: str
    sen_alpha: bool
    weak_substitutable: bool
    exhaustive: bool


def audit(econ: Economy) -> list[AgentAudit]:
    out = []
    for a in econ.universe.agents:
        r = econ.rules[a]
        sa, ws = sen_alpha(r), weak_substitutable(r)
        out.append(AgentAudit(a, sa.holds, ws.holds, sa.exhaustive and ws.exhaustive))
    return out


def require_hypotheses(econ: Economy) -> None:
    cached = getattr(econ, "_hyp_ok", None)
    if cached:
        return
    for row in audit(econ):
        if not row.sen_alpha:
            raise HypothesisError(f"choice rule of {row.agent} violates Sen's alpha")
        if not row.weak_substitutable:
            raise HypothesisError(f"choice rule of {row.agent} is not weakly substitutable")
    econ._hyp_ok = True


# the availability operator


@dataclass(frozen=True)
class TState:
    avail_firms: frozenset[int]
    avail_workers: frozenset[int]


class TStateOrder:
    """Pairs ``(A, B)`` of contract sets, ``(A, B) ≤ (A', B')`` iff ``A ⊆ A'`` and ``B ⊇ B'``.

    The state ``(A, B)`` has index ``A | B << n``; nothing is materialized.
    """

    def __init__(self, n: int):
        self.n = n
        self.full = (1 << n) - 1

    @property
    def size(self) -> int:
        return 1 << (2 * self.n)

    def encode(self, a: int, b: int) -> int:
        return a | b << self.n

    def decode(self, k: int) -> tuple[int, int]:
        return k & self.full, k >> self.n

    def leq(self, i: int, j: int) -> bool:
        a1, b1 = self.decode(i)
        a2, b2 = self.decode(j)
        return a1 & ~a2 == 0 and b2 & ~b1 == 0

    def label(self, i: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        a, b = self.decode(i)
        return tuple(bits(a)), tuple(bits(b))

    def state(self, i: int) -> TState:
        a, b = self.decode(i)
        return TState(frozenset(bits(a)), frozenset(bits(b)))


def t1(econ: Economy, b: int) -> tuple[int, ...]:
    """Sets left for firms once workers reject from ``b``."""
    full = econ.universe.full
    return canonical_family(full & ~y for y in econ.rejection_side("W", b))


def t2(econ: Economy, a: int) -> tuple[int, ...]:
    """Sets left for workers once firms reject from ``a``."""
    full = econ.universe.full
    return canonical_family(full & ~y for y in econ.rejection_side("F", a))


def t_correspondence(econ: Economy) -> Correspondence:
    order = TStateOrder(econ.n)

    def image(k: int):
        a, b = order.decode(k)
        return [order.encode(x, y) for x in t1(econ, b) for y in t2(econ, a)]

    return Correspondence(order, image)


def t_apply(econ: Economy, state: TState) -> list[TState]:
    a, b = mask_of(state.avail_firms), mask_of(state.avail_workers)
    return [TState(frozenset(bits(x)), frozenset(bits(y))) for x in t1(econ, b) for y in t2(econ, a)]


@dataclass(frozen=True)
class MonotoneReport:
    holds: bool
    witness: tuple | None


def t_monotone_check(econ: Economy, check_hypotheses: bool = True) -> MonotoneReport:
    """Upper and lower weak set monotonicity of T.

    The image is a product of a family depending on ``B`` only and one depending
    on ``A`` only, so each factor is scanned over one-contract steps.
    Witness ``(component, smaller input, larger input, side)``.
    """
    if check_hypotheses:
        for a in econ.universe.agents:
            if not sen_alpha(econ.rules[a]).holds:
                raise HypothesisError(f"choice rule of {a} violates Sen's alpha")
    n = econ.n
    if n > 2 * config.MAX_T_FIXPOINT_CONTRACTS:
        raise SizeLimitError(f"{n} contracts are too many for an exhaustive monotonicity scan")
    full = econ.universe.full
    for m in submasks(full):
        for i in range(n):
            if m >> i & 1:
                continue
            big = m | 1 << i
            # A grows: T2 must shrink in both halves of the weak set order
            lo, hi = t2(econ, m), t2(econ, big)
            if not all(any(y & ~x == 0 for y in hi) for x in lo):
                return MonotoneReport(False, ("T2", tuple(bits(m)), tuple(bits(big)), "upper"))
            if not all(any(y & ~x == 0 for x in lo) for y in hi):
                return MonotoneReport(False, ("T2", tuple(bits(m)), tuple(bits(big)), "lower"))
            # B shrinks from big to m: T1 must grow
            lo, hi = t1(econ, big), t1(econ, m)
            if not all(any(x & ~y == 0 for y in hi) for x in lo):
                return MonotoneReport(False, ("T1", tuple(bits(big)), tuple(bits(m)), "upper"))
            if not all(any(x & ~y == 0 for x in lo) for y in hi):
                return MonotoneReport(False, ("T1", tuple(bits(big)), tuple(bits(m)), "lower"))
    return MonotoneReport(True, None)


def t_fixed_points(econ: Economy) -> list[TState]:
    """Every ``(A, B)`` with ``A ∈ T1(B)`` and ``B ∈ T2(A)``."""
    if econ.n > config.MAX_T_FIXPOINT_CONTRACTS:
        raise SizeLimitError(f"{econ.n} contracts exceed the fixed-point scan cap of {config.MAX_T_FIXPOINT_CONTRACTS}")
    out = []
    for b in submasks(econ.universe.full):
        for a in t1(econ, b):
            if b in t2(econ, a):
                out.append((a, b))
    out.sort(key=lambda ab: (mask_key(ab[0]), mask_key(ab[1])))
    return [TState(frozenset(bits(a)), frozenset(bits(b))) for a, b in out]


def fixed_point_of(econ: Economy, z) -> TState:
    """The fixed point ``(Z ∪ U(Z), X \\ U(Z))`` attached to a stable allocation."""
    z = _mask(z)
    u = _u_mask(econ, z)
    a, b = z | u, econ.universe.full & ~u
    if a not in t1(econ, b) or b not in t2(econ, a):
        raise TheoremViolation(f"stable allocation {econ.universe.names(z)} does not induce a fixed point")
    return TState(frozenset(bits(a)), frozenset(bits(b)))


def allocation_of(state: TState) -> frozenset[int]:
    return state.avail_firms & state.avail_workers


@dataclass(frozen=True)
class CharacterizationReport:
    holds: bool
    stable: list[frozenset[int]]
    fixed_points: list[TState]
    failures: list[str]


def characterization_check(econ: Economy, check_hypotheses: bool = True) -> CharacterizationReport:
    """Both directions of the fixed-point characterization, exhaustively."""
    if check_hypotheses:
        for a in econ.universe.agents:
            if not sen_alpha(econ.rules[a]).holds:
                raise HypothesisError(f"choice rule of {a} violates Sen's alpha")
    stable = stable_set(econ)
    fps = t_fixed_points(econ)
    failures = []
    fp_masks = {(mask_of(s.avail_firms), mask_of(s.avail_workers)) for s in fps}
    for z in stable:
        zm = mask_of(z)
        u = _u_mask(econ, zm)
        if (zm | u, econ.universe.full & ~u) not in fp_masks:
            failures.append(f"stable {sorted(z)} has no matching fixed point")
    stable_masks = {mask_of(z) for z in stable}
    for s in fps:
        a, b = mask_of(s.avail_firms), mask_of(s.avail_workers)
        z = a & b
        if z not in econ.choice_side("F", a) or z not in econ.choice_side("W", b):
            failures.append(f"fixed point {sorted(s.avail_firms)}|{sorted(s.avail_workers)} does not choose A∩B")
        if z not in stable_masks:
            failures.append(f"fixed point {sorted(s.avail_firms)}|{sorted(s.avail_workers)} gives unstable {sorted(bits(z))}")
    if bool(stable) != bool(fps):
        failures.append("existence of stable allocations and of fixed points disagree")
    return CharacterizationReport(not failures, stable, fps, failures)


@dataclass(frozen=True)
class SolveResult:
    allocation: frozenset[int]
    fixed_point: TState
    steps: int


def stable_solve(econ: Economy, check_hypotheses: bool = True) -> SolveResult:
    """Iterate T upward from ``(∅, X)`` taking the least admissible state each step."""
    if check_hypotheses:
        require_hypotheses(econ)
    f = t_correspondence(econ)
    order = f.order
    res = iterate(f, order.encode(0, econ.universe.full), Policy.LEAST_INDEX, "up")
    if res.fixed_point is None:
        raise TheoremViolation("upward iteration of T hit a dead end")
    if res.steps > 2 * econ.n:
        raise TheoremViolation(f"iteration took {res.steps} steps, more than 2|X|")
    state = order.state(res.fixed_point)
    z = allocation_of(state)
    if not is_stable(econ, z):
        raise TheoremViolation(f"extracted allocation {sorted(z)} is not stable")
    return SolveResult(z, state, res.steps)


# comparative statics


@dataclass(frozen=True)
class CSWitness:
    source: frozenset[int]
    target: frozenset[int]
    firms_prefer_base: bool
    workers_prefer_shifted: bool


def _cs_hypotheses(base: Economy, shifted: Economy) -> None:
    if base.universe is not shifted.universe and base.universe.contracts != shifted.universe.contracts:
        raise HypothesisError("economies must share the contract universe")
    require_hypotheses(base)
    require_hypotheses(shifted)
    uni = base.universe
    for w in uni.workers:
        if not more_permissive(base.rules[w], shifted.rules[w]).holds:
            raise HypothesisError(f"worker {w} is not weakly more permissive in the base economy")
    for f in uni.firms:
        if not more_permissive(shifted.rules[f], base.rules[f]).holds:
            raise HypothesisError(f"firm {f} is not weakly more permissive in the shifted economy")


def _compare(base: Economy, shifted: Economy, z: int, z2: int) -> tuple[bool, bool]:
    uni = base.universe
    firms = all(blair(base, f, z, z2) for f in uni.firms)
    workers = all(blair(shifted, w, z2, z) for w in uni.workers)
    return firms, workers


def matching_cs(base: Economy, shifted: Economy, direction: str = "forward", check_hypotheses: bool = True) -> list[CSWitness]:
    """Blair-ordered partners across two economies.

    ``base`` has workers weakly more permissive and firms weakly less
    permissive than ``shifted``. ``forward`` maps each stable allocation of
    ``base`` to one of ``shifted``; ``backward`` maps the other way. In both
    cases firms weakly prefer the ``base`` side and workers (under their
    shifted rules) weakly prefer the ``shifted`` side.
    """
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    if check_hypotheses:
        _cs_hypotheses(base, shifted)
    ft, ft2 = t_correspondence(base), t_correspondence(shifted)
    order = ft.order
    out = []
    src_econ = base if direction == "forward" else shifted
    for z in stable_set(src_econ):
        zm = mask_of(z)
        fp = fixed_point_of(src_econ, zm)
        x_star = order.encode(mask_of(fp.avail_firms), mask_of(fp.avail_workers))
        if direction == "forward":
            k = cs_lift(ft, ft2, x_star, "lower", check=False)
        else:
            k = cs_lift(ft2, ft, x_star, "upper", check=False)
        target = allocation_of(order.state(k))
        tm = mask_of(target)
        target_econ = shifted if direction == "forward" else base
        if not is_stable(target_econ, tm):
            raise TheoremViolation(f"lifted allocation {sorted(target)} is not stable")
        if direction == "forward":
            firms, workers = _compare(base, shifted, zm, tm)
        else:
            firms, workers = _compare(base, shifted, tm, zm)
        out.append(CSWitness(z, target, firms, workers))
    return out
