"""JSON scenarios: schema validation and dispatch to the analysis modules.

A scenario is ``{"kind", "payload", "seed"?, "caps"?, "expect"?, "name"?}``.
Rationals are written as integers or ``"p/q"`` strings; list labels become
tuples. ``expect`` maps verdict names to the values they must take.
"""
from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import jsonschema

from . import config
from .choice import DominanceKind, ObjectiveTable, argmax, dominates, sum_target, wmcs_search
from .errors import SchemaError
from .fixedpoint import (
    Correspondence,
    Policy,
    check_gallery,
    classify,
    fixed_points,
    gallery,
    iterate,
    maximal,
    minimal,
    reachable,
    x_plus,
)
from .order import (
    FinitePoset,
    chain,
    grid,
    is_sublattice,
    product_poset,
    ss_decompose,
)
from .report import Report, Table, jsonable

KINDS = ("order", "choice", "pareto", "fixedpoint", "game", "matching", "constraints")

_RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}

_DEFS = {
    "rational": _RATIONAL,
    "label": {"oneOf": [{"type": ["integer", "string"]}, {"type": "array", "items": {"$ref": "#/$defs/label"}}]},
    "labels": {"type": "array", "items": {"$ref": "#/$defs/label"}},
    "poset": {
        "type": "object",
        "oneOf": [
            {"required": ["chain"]},
            {"required": ["grid"]},
            {"required": ["product"]},
            {"required": ["labels"]},
        ],
        "properties": {
            "chain": {"$ref": "#/$defs/labels"},
            "grid": {
                "type": "object",
                "required": ["values"],
                "properties": {"values": {"$ref": "#/$defs/labels"}, "dims": {"type": "integer", "minimum": 1}},
                "additionalProperties": False,
            },
            "product": {"type": "array", "items": {"$ref": "#/$defs/poset"}, "minItems": 2, "maxItems": 2},
            "labels": {"$ref": "#/$defs/labels"},
            "relation": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
        },
        "additionalProperties": False,
    },
    "table": {
        "oneOf": [
            {"type": "array", "items": {"$ref": "#/$defs/rational"}},
            {
                "type": "object",
                "required": ["pairs"],
                "properties": {"pairs": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}}},
                "additionalProperties": False,
            },
            {
                "type": "object",
                "required": ["sum_target"],
                "properties": {"sum_target": {"$ref": "#/$defs/rational"}},
                "additionalProperties": False,
            },
        ]
    },
    "vector": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    "feasibility": {
        "type": "object",
        "oneOf": [{"required": ["maximal"]}, {"required": ["total_at_most"]}],
        "properties": {
            "maximal": {"type": "array", "items": {"$ref": "#/$defs/vector"}, "minItems": 1},
            "total_at_most": {"type": "integer", "minimum": 0},
            "caps": {"$ref": "#/$defs/vector"},
        },
        "additionalProperties": False,
    },
    "bertrand": {
        "type": "object",
        "required": ["grids", "costs"],
        "properties": {
            "grids": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/rational"}, "minItems": 1}, "minItems": 2},
            "costs": {"type": "array", "items": {"$ref": "#/$defs/rational"}},
            "demand": {
                "oneOf": [
                    {"const": "pure"},
                    {
                        "type": "object",
                        "required": ["linear"],
                        "properties": {"linear": {"type": "array", "items": {"$ref": "#/$defs/rational"}, "minItems": 3, "maxItems": 3}},
                        "additionalProperties": False,
                    },
                ]
            },
        },
        "additionalProperties": False,
    },
    "rule": {
        "type": "object",
        "oneOf": [
            {"required": ["ranking"]},
            {"required": ["prefers"]},
            {"required": ["responsive"]},
            {"required": ["divisions"]},
            {"required": ["slots"]},
            {"required": ["table"]},
            {"required": ["reject_all"]},
        ],
        "properties": {
            "ranking": {"type": "array", "items": {"type": ["string", "null"]}},
            "prefers": {"type": "array", "items": {"type": "array", "items": {"type": ["string", "null"]}, "minItems": 2, "maxItems": 2}},
            "responsive": {"type": "array", "items": {"type": "string"}},
            "capacity": {"type": "integer", "minimum": 0},
            "divisions": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
            "feasibility": {"$ref": "#/$defs/feasibility"},
            "slots": {"type": "integer", "minimum": 0},
            "table": {
                "type": "array",
                "items": {
                    "type": "array",
                    "minItems": 2,
                    "maxItems": 2,
                    "prefixItems": [
                        {"type": "array", "items": {"type": "string"}},
                        {"type": "array", "items": {"type": "array", "items": {"type": "string"}}, "minItems": 1},
                    ],
                },
            },
            "default": {"enum": ["empty", "all"]},
            "reject_all": {"const": True},
        },
        "additionalProperties": False,
    },
    "market": {
        "type": "object",
        "required": ["doctors", "hospitals", "doctor_prefs", "hospital_prefs", "capacities", "feasibility"],
        "properties": {
            "doctors": {"type": "array", "items": {"type": "string"}},
            "hospitals": {"type": "array", "items": {"type": "string"}},
            "doctor_prefs": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "string"}}},
            "hospital_prefs": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "string"}}},
            "capacities": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
            "feasibility": {"$ref": "#/$defs/feasibility"},
        },
        "additionalProperties": False,
    },
}

_TOP = {
    "type": "object",
    "required": ["kind", "payload"],
    "properties": {
        "kind": {"enum": list(KINDS)},
        "name": {"type": "string"},
        "payload": {"type": "object"},
        "seed": {"type": "integer"},
        "caps": {
            "type": "object",
            "properties": {"max_elements": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
        "expect": {"type": "object"},
    },
    "additionalProperties": False,
}

_PAYLOADS: dict[str, dict] = {
    "order": {
        "type": "object",
        "required": ["poset", "hi", "lo"],
        "properties": {"poset": {"$ref": "#/$defs/poset"}, "hi": {"$ref": "#/$defs/labels"}, "lo": {"$ref": "#/$defs/labels"}},
        "additionalProperties": False,
    },
    "choice": {
        "type": "object",
        "required": ["poset", "u", "v"],
        "properties": {
            "poset": {"$ref": "#/$defs/poset"},
            "u": {"$ref": "#/$defs/table"},
            "v": {"$ref": "#/$defs/table"},
            "within": {"$ref": "#/$defs/labels"},
            "kinds": {"type": "array", "items": {"enum": [k.value for k in DominanceKind]}},
            "families": {"type": "array", "items": {"enum": ["sublattices", "subintervals"]}},
        },
        "additionalProperties": False,
    },
    "pareto": {
        "type": "object",
        "oneOf": [{"required": ["poset", "u", "v"]}, {"required": ["instance"]}],
        "properties": {
            "poset": {"$ref": "#/$defs/poset"},
            "u": {"type": "array", "items": {"$ref": "#/$defs/table"}, "minItems": 1},
            "v": {"type": "array", "items": {"$ref": "#/$defs/table"}, "minItems": 1},
            "instance": {"enum": ["kinked-chain", "two-division"]},
            "step": {"$ref": "#/$defs/rational"},
            "omega": {"type": "array", "items": {"$ref": "#/$defs/rational"}, "minItems": 2, "maxItems": 2},
            "omega_shifted": {"type": "array", "items": {"$ref": "#/$defs/rational"}, "minItems": 2, "maxItems": 2},
            "hypothesis": {"enum": ["SingleCrossing", "IncreasingDifferences"]},
        },
        "additionalProperties": False,
    },
    "fixedpoint": {
        "type": "object",
        "oneOf": [{"required": ["gallery"]}, {"required": ["poset", "map"]}],
        "properties": {
            "gallery": {"type": "string"},
            "poset": {"$ref": "#/$defs/poset"},
            "map": {
                "type": "array",
                "items": {"type": "array", "minItems": 2, "maxItems": 2, "prefixItems": [{"$ref": "#/$defs/label"}, {"$ref": "#/$defs/labels"}]},
            },
            "start": {"$ref": "#/$defs/label"},
            "direction": {"enum": ["up", "down"]},
            "policy": {"enum": [p.value for p in Policy]},
        },
        "additionalProperties": False,
    },
    "game": {
        "type": "object",
        "oneOf": [{"required": ["bertrand"]}, {"required": ["beauty_contest"]}],
        "properties": {
            "bertrand": {"$ref": "#/$defs/bertrand"},
            "beauty_contest": {
                "type": "object",
                "properties": {
                    "n": {"type": "integer", "minimum": 2},
                    "step": {"$ref": "#/$defs/rational"},
                    "theta": {"type": "array", "items": {"$ref": "#/$defs/rational"}, "minItems": 2, "maxItems": 2},
                },
                "additionalProperties": False,
            },
            "shifted": {"type": "object"},
            "compare": {"enum": ["uws", "lws", "ws"]},
            "profit_firm": {"type": "integer", "minimum": 0},
        },
        "additionalProperties": False,
    },
    "matching": {
        "type": "object",
        "required": ["contracts", "rules"],
        "properties": {
            "contracts": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "string"}, "minItems": 3, "maxItems": 3},
                "minItems": 1,
            },
            "rules": {"type": "object", "additionalProperties": {"$ref": "#/$defs/rule"}},
            "shifted_rules": {"type": "object", "additionalProperties": {"$ref": "#/$defs/rule"}},
        },
        "additionalProperties": False,
    },
    "constraints": {
        **_DEFS["market"],
        "properties": {**_DEFS["market"]["properties"], "relaxed_feasibility": {"$ref": "#/$defs/feasibility"}},
    },
}


def _validator(schema: dict) -> jsonschema.Draft202012Validator:
    return jsonschema.Draft202012Validator({"$defs": _DEFS, **schema})


_TOP_V = _validator(_TOP)
_PAYLOAD_V = {k: _validator(s) for k, s in _PAYLOADS.items()}
_SHIFTED_V = {
    "bertrand": _validator({"$ref": "#/$defs/bertrand"}),
    "beauty_contest": _PAYLOAD_V["game"],
}


def _check(validator, data: Any, where: str) -> None:
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        path = "/".join(str(p) for p in err.absolute_path)
        raise SchemaError(f"{where}{'/' + path if path else ''}: {err.message}")


def validate(data: Any) -> None:
    _check(_TOP_V, data, "scenario")
    _check(_PAYLOAD_V[data["kind"]], data["payload"], "payload")
    p = data["payload"]
    if data["kind"] == "game" and "shifted" in p:
        which = "bertrand" if "bertrand" in p else "beauty_contest"
        body = p["shifted"] if which == "bertrand" else {"beauty_contest": p["shifted"]}
        _check(_SHIFTED_V[which], body, "payload/shifted")


def load(path: str | Path) -> tuple[dict, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror}") from None
    return parse(raw), raw


def parse(raw: bytes) -> dict:
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SchemaError(f"not valid JSON: {e}") from None
    validate(data)
    return data


# literal conversion


def rational(v: Any) -> Fraction:
    return Fraction(v)


def label(v: Any):
    if isinstance(v, list):
        return tuple(label(x) for x in v)
    if isinstance(v, str) and re.fullmatch(r"-?\d+(/\d+)?", v):
        return Fraction(v)
    return v


def _labels_of(p: FinitePoset, s) -> list:
    return [p.label(i) for i in sorted(s)]


def _indices(p: FinitePoset, labs: list) -> frozenset[int]:
    try:
        return p.indices(label(x) for x in labs)
    except KeyError as e:
        raise SchemaError(f"unknown element {e.args[0]!r}") from None


def build_poset(spec: dict, cap: int | None) -> FinitePoset:
    try:
        if "chain" in spec:
            return chain([label(x) for x in spec["chain"]], cap=cap)
        if "grid" in spec:
            g = spec["grid"]
            return grid([label(x) for x in g["values"]], g.get("dims", 2), cap=cap)
        if "product" in spec:
            a, b = (build_poset(s, cap) for s in spec["product"])
            return product_poset(a, b, cap=cap)
        labs = [label(x) for x in spec["labels"]]
        pairs = [(label(a), label(b)) for a, b in spec.get("relation", [])]
        return FinitePoset.from_relation(labs, pairs, cap=cap)
    except (ValueError, KeyError) as e:
        raise SchemaError(f"bad poset: {e}") from None


def build_table(p: FinitePoset, spec: Any) -> ObjectiveTable:
    if isinstance(spec, list):
        if len(spec) != p.size:
            raise SchemaError(f"objective lists {len(spec)} values for {p.size} elements")
        return ObjectiveTable([rational(v) for v in spec])
    if "sum_target" in spec:
        if not all(isinstance(lab, tuple) for lab in p.labels):
            raise SchemaError("sum_target needs tuple labels")
        return sum_target(p, rational(spec["sum_target"]))
    try:
        return ObjectiveTable.from_mapping(p, {label(k): rational(v) for k, v in spec["pairs"]})
    except ValueError as e:
        raise SchemaError(str(e)) from None


# per-kind runners


def _run_order(p: dict, rep: Report, cap: int | None) -> None:
    poset = build_poset(p["poset"], cap)
    hi, lo = _indices(poset, p["hi"]), _indices(poset, p["lo"])
    rep.add("is_lattice", poset.is_lattice())
    if poset.is_lattice():
        d = ss_decompose(poset, hi, lo)
        for k in ("uws", "lws", "ws", "ss", "union_sublattice", "sandwich"):
            rep.add(k, getattr(d, k))
    else:
        from .order import lower_weak, upper_weak

        u, l = upper_weak(poset, hi, lo), lower_weak(poset, hi, lo)
        rep.add("uws", u)
        rep.add("lws", l)
        rep.add("ws", u and l)


def _run_choice(p: dict, rep: Report, cap: int | None) -> None:
    poset = build_poset(p["poset"], cap)
    u, v = build_table(poset, p["u"]), build_table(poset, p["v"])
    within = _indices(poset, p["within"]) if "within" in p else frozenset(range(poset.size))
    lattice = poset.is_lattice()
    mu, mv = argmax(poset, within, u), argmax(poset, within, v)
    rep.add("argmax_u", _labels_of(poset, mu))
    rep.add("argmax_v", _labels_of(poset, mv))
    if lattice:
        d = ss_decompose(poset, mv, mu)
        rep.add("argmax.ws", d.ws)
        rep.add("argmax.ss", d.ss)
        rep.add("argmax_u.sublattice", is_sublattice(poset, mu))
        rep.add("argmax_v.sublattice", is_sublattice(poset, mv))
    lattice_only = {DominanceKind.MS, DominanceKind.WEAK, DominanceKind.WEAK_INTERVAL, DominanceKind.INTERVAL}
    kinds = [DominanceKind(k) for k in p.get("kinds", [k.value for k in DominanceKind])]
    for k in kinds:
        if k in lattice_only and not lattice:
            continue
        rep.add(f"dominates.{k.value}", dominates(poset, k, v, u))
    if not lattice:
        return
    for fam in p.get("families", ["sublattices", "subintervals"]):
        for order in ("ws", "ss"):
            res = wmcs_search(poset, v, u, fam, order)
            rep.add(f"wmcs.{fam}.{order}", res.witness is None)
            if res.witness is not None:
                w = res.witness
                rep.witnesses[f"wmcs.{fam}.{order}"] = {
                    "subset": _labels_of(poset, w.subset),
                    "argmax_u": _labels_of(poset, w.argmax_u),
                    "argmax_v": _labels_of(poset, w.argmax_v),
                }


def _run_pareto(p: dict, rep: Report, cap: int | None) -> None:
    from .pareto import (
        UtilityProfile,
        kinked_profiles,
        pareto_set,
        pareto_wmcs_check,
        phi_membership,
        profile_dominates,
        supermodular_profile,
        two_division_profile,
    )

    if p.get("instance") == "kinked-chain":
        u, v = kinked_profiles()
    elif p.get("instance") == "two-division":
        if "step" not in p or "omega" not in p or "omega_shifted" not in p:
            raise SchemaError("two-division needs step, omega and omega_shifted")
        step = rational(p["step"])
        u = two_division_profile(step, tuple(rational(x) for x in p["omega"]))
        v = two_division_profile(step, tuple(rational(x) for x in p["omega_shifted"]), u.poset)
    else:
        poset = build_poset(p["poset"], cap)
        u = UtilityProfile(poset, [build_table(poset, t) for t in p["u"]])
        v = UtilityProfile(poset, [build_table(poset, t) for t in p["v"]])
        if len(u) != len(v):
            raise SchemaError("u and v need the same number of agents")
    poset = u.poset
    pu, pv = pareto_set(u), pareto_set(v)
    rep.add("pareto_u", _labels_of(poset, pu))
    rep.add("pareto_v", _labels_of(poset, pv))
    rep.add("phi_agrees", all(phi_membership(prof, x) == (x in ps) for prof, ps in ((u, pu), (v, pv)) for x in range(poset.size)))
    from .order import lower_weak, strong, upper_weak

    rep.add("ws", upper_weak(poset, pv, pu) and lower_weak(poset, pv, pu))
    lattice = poset.is_lattice()
    if lattice:
        rep.add("ss", strong(poset, pv, pu))
        rep.add("supermodular", supermodular_profile(u) and supermodular_profile(v))
    rep.add("profile.SingleCrossing", profile_dominates("SingleCrossing", v, u))
    rep.add("profile.IncreasingDifferences", profile_dominates("IncreasingDifferences", v, u))
    if "hypothesis" in p:
        cmp = pareto_wmcs_check(v, u, p["hypothesis"])
        rep.add("comparison.holds", cmp.holds)
        rep.add("comparison.empirical", cmp.empirical)
        if cmp.witness is not None:
            rep.witnesses["comparison"] = poset.label(cmp.witness)


def _run_fixedpoint(p: dict, rep: Report, cap: int | None) -> None:
    if "gallery" in p:
        _gallery_into(rep, p["gallery"])
        return
    poset = build_poset(p["poset"], cap)
    mapping: dict[int, frozenset[int]] = {}
    for k, img in p["map"]:
        (i,) = _indices(poset, [k])
        mapping[i] = _indices(poset, img)
    try:
        f = Correspondence(poset, mapping)
    except ValueError as e:
        raise SchemaError(str(e)) from None
    cls = classify(f)
    fp = fixed_points(f, check=True)
    rep.add("uws", cls.uws)
    rep.add("lws", cls.lws)
    rep.add("ss", cls.ss)
    rep.add("in_F_plus", cls.in_F_plus)
    rep.add("in_F_minus", cls.in_F_minus)
    rep.add("x_plus", _labels_of(poset, x_plus(f)))
    rep.add("fixed_points", _labels_of(poset, fp))
    rep.add("maximal_fixed_points", _labels_of(poset, maximal(poset, fp)))
    rep.add("minimal_fixed_points", _labels_of(poset, minimal(poset, fp)))
    rep.tables["fixed_points"] = Table(["element"], [[poset.label(i)] for i in sorted(fp)])
    if "start" in p:
        (s,) = _indices(poset, [p["start"]])
        direction = p.get("direction", "up")
        policy = Policy(p.get("policy", Policy.LEAST_INDEX.value))
        res = iterate(f, s, policy, direction)
        rep.add("trace", [poset.label(i) for i in res.trace])
        rep.add("trace.fixed_point", None if res.fixed_point is None else poset.label(res.fixed_point))
        reach = reachable(f, s, direction)
        rep.add("terminal_fixed_points", _labels_of(poset, reach.terminal_fixed_points))
        rep.add("dead_ends", _labels_of(poset, reach.dead_ends))
        ext = minimal(poset, fp) if direction == "up" else maximal(poset, fp)
        rep.add("extremal_fixed_point_reachable", bool(ext & reach.visited))


def _gallery_into(rep: Report, name: str) -> None:
    from .matching.instances import MATCHING_GALLERY_NAMES, matching_gallery

    if name in MATCHING_GALLERY_NAMES:
        facts = matching_gallery(name)
    else:
        facts = check_gallery(gallery(name))
    for fc in facts:
        rep.add(f"{name}.{fc.fact}", fc.observed, fc.expected)


def _bertrand_spec(b: dict):
    from .games import BertrandSpec, linear_cost, linear_demand, pure_bertrand

    if len(b["costs"]) != len(b["grids"]):
        raise SchemaError("one cost per firm")
    demand = b.get("demand", "pure")
    if demand == "pure":
        return pure_bertrand(b["grids"], b["costs"])
    gs = tuple(tuple(sorted(rational(x) for x in g)) for g in b["grids"])
    cs = tuple(rational(c) for c in b["costs"])
    return BertrandSpec(gs, linear_demand(*demand["linear"]), tuple(linear_cost(c) for c in cs), cs)


def _equilibria_table(rep: Report, name: str, game, eq) -> None:
    rows = rep.tables.setdefault("equilibria", Table(["game"] + list(game.players), []))
    for e in eq:
        rows.rows.append([name] + [game.posets[i].label(s) for i, s in enumerate(e)])


def _run_game(p: dict, rep: Report, cap: int | None) -> None:
    from .games import (
        BeautyContestSpec,
        bertrand_br_monotone,
        bertrand_build,
        bertrand_payoff_compare,
        beauty_contest_build,
        classify_wsc,
        cost_shift,
        elasticity_shift,
        nash_compare,
        nash_set,
        validate_demand,
    )

    spec_t = None
    if "bertrand" in p:
        spec = _bertrand_spec(p["bertrand"])
        d = validate_demand(spec)
        rep.add("demand.D1", d.d1)
        rep.add("demand.D2", d.d2)
        rep.add("demand.convex_costs", d.convex_costs)
        if d.witness is not None:
            rep.witnesses["demand"] = d.witness
        game = bertrand_build(spec)
        rep.add("br_lws_monotone", bertrand_br_monotone(spec))
        if "shifted" in p:
            spec_t = _bertrand_spec(p["shifted"])
            game_t = bertrand_build(spec_t)
            rep.add("shift.elasticity", elasticity_shift(spec, spec_t))
            rep.add("shift.cost", cost_shift(spec, spec_t))
        mode = p.get("compare", "lws")
    else:
        bc = p["beauty_contest"]

        def bc_spec(d: dict) -> BeautyContestSpec:
            return BeautyContestSpec(
                d.get("n", bc.get("n", 2)),
                rational(d.get("step", bc.get("step", "1/4"))),
                tuple(rational(x) for x in d.get("theta", bc.get("theta", [0, 0]))),
            )

        game = beauty_contest_build(bc_spec(bc))
        if "shifted" in p:
            game_t = beauty_contest_build(bc_spec(p["shifted"]))
        mode = p.get("compare", "ws")
    wsc = classify_wsc(game)
    rep.add("in_G_plus", wsc.in_G_plus)
    rep.add("in_G_minus", wsc.in_G_minus)
    eq = nash_set(game, check=True)
    rep.add("equilibria", [game.space.label(game.space.encode(e)) for e in eq])
    _equilibria_table(rep, "base", game, eq)
    if "shifted" in p:
        cmp = nash_compare(game, game_t, mode)
        rep.add("equilibria_shifted", [game_t.space.label(game_t.space.encode(e)) for e in cmp.eq_tilde])
        rep.add(f"compare.{mode}", cmp.holds)
        _equilibria_table(rep, "shifted", game_t, cmp.eq_tilde)
        lab = game.space.label
        enc = game.space.encode
        rep.witnesses["lifts"] = {
            side: [[lab(enc(a)), lab(enc(b))] for a, b in sorted(m.items())] for side, m in sorted(cmp.lifts.items())
        }
        if spec_t is not None and "profit_firm" in p:
            rep.add("profit_compare", bertrand_payoff_compare(spec, spec_t, p["profit_firm"]))


def build_economy(p: dict, rules_key: str = "rules", base=None):
    from .matching import ContractUniverse, Economy
    from .matching.rules import (
        ExplicitTable,
        Feasibility,
        MultidivisionInternalConstraint,
        RejectAll,
        ResponsiveWithCapacity,
        WorkerFromPartialOrder,
        indifferent_slots,
    )

    if base is not None:
        uni = base.universe
    else:
        names = [c[0] for c in p["contracts"]]
        if len(set(names)) != len(names):
            raise SchemaError("contract names must be unique")
        uni = ContractUniverse.build([(c[1], c[2]) for c in p["contracts"]], names)

    def idx(name):
        if name is None:
            return None
        try:
            return uni.index(name)
        except KeyError:
            raise SchemaError(f"unknown contract {name!r}") from None

    rules = dict(base.rules) if base is not None else {}
    for agent, r in p[rules_key].items():
        if agent not in uni.agents:
            raise SchemaError(f"rule for unknown agent {agent!r}")
        own = [i for i in range(len(uni)) if agent in (uni.firm_of(i), uni.worker_of(i))]
        if "ranking" in r:
            rule = WorkerFromPartialOrder.from_ranking([idx(c) for c in r["ranking"]], domain=own)
        elif "prefers" in r:
            rule = WorkerFromPartialOrder(own, [(idx(a), idx(b)) for a, b in r["prefers"]])
        elif "responsive" in r:
            rule = ResponsiveWithCapacity([idx(c) for c in r["responsive"]], r.get("capacity", 1), domain=own)
        elif "divisions" in r:
            if "feasibility" not in r:
                raise SchemaError(f"{agent}: divisions need a feasibility map")
            rankings = [[idx(c) for c in d] for d in r["divisions"]]
            rule = MultidivisionInternalConstraint(rankings, _feasibility(r["feasibility"], len(rankings), Feasibility), domain=own)
        elif "slots" in r:
            rule = indifferent_slots(own, r["slots"])
        elif "table" in r:
            table = {tuple(idx(c) for c in offer): [[idx(c) for c in y] for y in chosen] for offer, chosen in r["table"]}
            rule = ExplicitTable(own, table, r.get("default", "empty"))
        else:
            rule = RejectAll(own)
        if rule.domain & ~uni.agent_mask(agent):
            raise SchemaError(f"{agent}'s rule mentions contracts it is not party to")
        rules[agent] = rule
    missing = [a for a in uni.agents if a not in rules]
    if missing:
        raise SchemaError(f"no rule for {missing}")
    return Economy(uni, rules)


def _feasibility(spec: dict, dims: int, cls):
    if "maximal" in spec:
        if any(len(v) != dims for v in spec["maximal"]):
            raise SchemaError(f"feasibility vectors must have {dims} entries")
        return cls.from_maximal(spec["maximal"])
    return cls.total_at_most(dims, spec["total_at_most"], spec.get("caps"))


def _run_matching(p: dict, rep: Report, cap: int | None) -> None:
    from .matching.stability import (
        audit,
        blair,
        characterization_check,
        matching_cs,
        stable_set,
        stable_solve,
        t_monotone_check,
    )
    from .matching.axioms import warp
    from .order import mask_of

    econ = build_economy(p)
    uni = econ.universe
    for a in audit(econ):
        rep.add(f"audit.{a.agent}.sen_alpha", a.sen_alpha)
        rep.add(f"audit.{a.agent}.weak_substitutable", a.weak_substitutable)
        rep.add(f"audit.{a.agent}.warp", warp(econ.rules[a.agent]).holds)
    stable = stable_set(econ)
    names = [uni.names(mask_of(z)) for z in stable]
    rep.add("stable_set", names)
    rep.add("stable_set.size", len(stable))
    rep.tables["stable_set"] = Table(["allocation", "contracts"], [[k, " ".join(n)] for k, n in enumerate(names)])
    best = [
        n for z, n in zip(stable, names)
        if all(blair(econ, w, mask_of(z), mask_of(z2)) for z2 in stable for w in uni.workers)
    ]
    rep.add("worker_optimal", best)
    sol = stable_solve(econ)
    rep.add("solve.allocation", uni.names(mask_of(sol.allocation)))
    rep.add("solve.steps", sol.steps)
    if econ.n <= config.MAX_T_FIXPOINT_CONTRACTS:
        rep.add("t_monotone", t_monotone_check(econ).holds)
        ch = characterization_check(econ)
        rep.add("characterization", ch.holds)
    if "shifted_rules" in p:
        shifted = build_economy(p, "shifted_rules", base=econ)
        rep.add("stable_set_shifted", [uni.names(mask_of(z)) for z in stable_set(shifted)])
        for direction in ("forward", "backward"):
            ws = matching_cs(econ, shifted, direction)
            rep.add(f"cs.{direction}", all(w.firms_prefer_base and w.workers_prefer_shifted for w in ws))
            rep.witnesses[f"cs.{direction}"] = [
                {
                    "source": uni.names(mask_of(w.source)),
                    "target": uni.names(mask_of(w.target)),
                    "firms_prefer_base": w.firms_prefer_base,
                    "workers_prefer_shifted": w.workers_prefer_shifted,
                }
                for w in ws
            ]


def build_market(p: dict, feasibility_key: str = "feasibility"):
    from .matching.constraints import ConstraintsMarket
    from .matching.rules import Feasibility

    hs = p["hospitals"]
    for h in hs:
        if h not in p["capacities"]:
            raise SchemaError(f"no capacity for {h}")
    try:
        return ConstraintsMarket(
            p["doctors"],
            hs,
            p["doctor_prefs"],
            p["hospital_prefs"],
            p["capacities"],
            _feasibility(p[feasibility_key], len(hs), Feasibility),
        )
    except ValueError as e:
        raise SchemaError(str(e)) from None


def _run_constraints(p: dict, rep: Report, cap: int | None) -> None:
    from .matching.constraints import constraints_cs, equivalence_check, weak_stable_solve, weakly_stable_set

    market = build_market(p)

    def row(mu):
        return [mu[d] for d in market.doctors]

    ws = weakly_stable_set(market)
    rep.add("weakly_stable", ws)
    rep.add("weakly_stable.size", len(ws))
    rep.tables["weakly_stable"] = Table(list(market.doctors), [row(mu) for mu in ws])
    rep.add("solve", weak_stable_solve(market))
    rep.add("equivalence", equivalence_check(market).holds)
    if "relaxed_feasibility" in p:
        relaxed = build_market(p, "relaxed_feasibility")
        rep.add("weakly_stable_relaxed", weakly_stable_set(relaxed))
        for direction in ("forward", "backward"):
            out = constraints_cs(market, relaxed, direction)
            rep.add(f"cs.{direction}", all(w.doctors_weakly_better for w in out))
            rep.witnesses[f"cs.{direction}"] = [
                {"source": w.source, "target": w.target, "doctors_weakly_better": w.doctors_weakly_better} for w in out
            ]


RUNNERS: dict[str, Callable[[dict, Report, int | None], None]] = {
    "order": _run_order,
    "choice": _run_choice,
    "pareto": _run_pareto,
    "fixedpoint": _run_fixedpoint,
    "game": _run_game,
    "matching": _run_matching,
    "constraints": _run_constraints,
}


def run(data: dict, raw: bytes | None = None, seed: int | None = None) -> Report:
    """Validate and evaluate a scenario; the report depends only on its bytes and seed."""
    validate(data)
    if raw is None:
        raw = json.dumps(data, sort_keys=True).encode()
    caps = dict(data.get("caps", {}))
    cap = caps.get("max_elements")
    eff_seed = seed if seed is not None else data.get("seed", 0)
    rep = Report(
        data["kind"],
        provenance={
            "scenario": data.get("name"),
            "scenario_sha256": hashlib.sha256(raw).hexdigest(),
            "seed": eff_seed,
            "caps": {"max_elements": cap if cap is not None else config.max_elements()},
        },
    )
    RUNNERS[data["kind"]](data["payload"], rep, cap)
    rep.assert_values(_expect(data.get("expect", {})))
    return rep


def _expect(expect: dict) -> dict:
    # expected values are compared in their JSON form
    return {k: jsonable(v) for k, v in expect.items()}


def run_file(path: str | Path, seed: int | None = None) -> Report:
    data, raw = load(path)
    return run(data, raw, seed)
