"""JSON encodings for terms, traces, derivations, standard sequences and delta tables.

Terms::

    {"var": "x0"} | {"ct": "c"} | {"app": [t, u]} | {"lm": ["x0", t]}

Two-sorted terms use the same shapes through the unsorted embedding. Output
is deterministic: keys are sorted and separators are fixed.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .cbn.derivations import AppNode, BetaNode, DeltaLeaf, MalformedDerivation, ReflLeaf, XiNode
from .cbn.reduction import Direction, RedexKind, RedexPath, Trace
from .delta import DeltaTable
from .terms import App, ConstName, Ct, HoasTag, Lm, Term, Var, VarName

_TAGS = {tag.value: tag for tag in HoasTag}


class SchemaError(ValueError):
    pass


def _dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def const_to_str(c) -> str:
    return c.value if isinstance(c, HoasTag) else c.label


def const_from_str(s: Any):
    if not isinstance(s, str):
        raise SchemaError(f"constant label must be a string, got {s!r}")
    if s in _TAGS:
        return _TAGS[s]
    try:
        return ConstName(s)
    except ValueError as e:
        raise SchemaError(str(e)) from None


def _var_from_str(s: Any) -> VarName:
    if not isinstance(s, str):
        raise SchemaError(f"variable name must be a string, got {s!r}")
    try:
        return VarName.parse(s)
    except ValueError as e:
        raise SchemaError(str(e)) from None


# -- terms -----------------------------------------------------------------------

def _is_two_sorted(t) -> bool:
    return type(t).__module__.endswith("cbv.syntax")


def term_to_json(t) -> dict:
    if _is_two_sorted(t):
        from .cbv.syntax import to_unsorted

        t = to_unsorted(t)
    match t:
        case Var(x):
            return {"var": str(x)}
        case Ct(c):
            return {"ct": const_to_str(c)}
        case App(f, a):
            return {"app": [term_to_json(f), term_to_json(a)]}
        case Lm(x, b):
            return {"lm": [str(x), term_to_json(b)]}
    raise TypeError(f"not a term: {t!r}")


def term_from_json(obj: Any) -> Term:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise SchemaError(f"a term is a one-key object, got {obj!r}")
    (key, val), = obj.items()
    if key == "var":
        return Var(_var_from_str(val))
    if key == "ct":
        return Ct(const_from_str(val))
    if key in ("app", "lm"):
        if not isinstance(val, list) or len(val) != 2:
            raise SchemaError(f"{key!r} expects a two-element array")
        if key == "app":
            return App(term_from_json(val[0]), term_from_json(val[1]))
        return Lm(_var_from_str(val[0]), term_from_json(val[1]))
    raise SchemaError(f"unknown term constructor {key!r}")


def dumps_term(t) -> str:
    return _dumps(term_to_json(t))


def loads_term(text: str) -> Term:
    return term_from_json(json.loads(text))


# -- traces ----------------------------------------------------------------------

def path_to_json(p: RedexPath) -> list[str]:
    return [d.value for d in p.steps]


def trace_to_json(tr: Trace) -> dict:
    return {
        "start": term_to_json(tr.start),
        "steps": [
            {"path": path_to_json(p), "kind": p.kind.value, "to": term_to_json(t)} for p, t in tr.steps
        ],
    }


def trace_from_json(obj: Any, cbv: bool = False) -> Trace:
    conv = _term_conv(cbv)
    try:
        steps = tuple(
            (RedexPath(tuple(Direction(d) for d in s["path"]), RedexKind(s["kind"])), conv(term_from_json(s["to"])))
            for s in obj["steps"]
        )
        return Trace(conv(term_from_json(obj["start"])), steps)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError(f"malformed trace: {e}") from None


def _term_conv(cbv: bool):
    if not cbv:
        return lambda t: t
    from .cbv.syntax import from_unsorted

    return from_unsorted


# -- derivations -----------------------------------------------------------------

def derivation_to_json(d) -> dict:
    """Mirror of the derivation tree; every node carries its ``label``."""
    from .cbv import derivations as V

    match d:
        case ReflLeaf(t) | V.ReflLeafV(t):
            out = {"rule": "refl", "term": term_to_json(t)}
        case DeltaLeaf(c1, c2, z) | V.DeltaLeafV(c1, c2, z):
            out = {"rule": "delta", "left": const_to_str(c1), "right": const_to_str(c2), "result": term_to_json(z)}
        case BetaNode(x, b, a) | V.BetaNodeV(x, b, a):
            out = {"rule": "beta", "binder": str(x), "body": derivation_to_json(b), "arg": derivation_to_json(a)}
        case AppNode(f, a) | V.AppNodeV(f, a):
            out = {"rule": "app", "fun": derivation_to_json(f), "arg": derivation_to_json(a)}
        case XiNode(x, b) | V.XiNodeV(x, b):
            out = {"rule": "lm", "binder": str(x), "body": derivation_to_json(b)}
        case _:
            raise TypeError(f"not a derivation: {d!r}")
    out["label"] = d.label
    return out


def derivation_from_json(obj: Any, cbv: bool = False):
    """Rebuild a derivation; recorded labels must agree with the recomputed ones."""
    if cbv:
        from .cbv import derivations as V
        from .cbv.syntax import from_unsorted, value_from_unsorted

        Refl, Delta, Beta, AppN, Xi = V.ReflLeafV, V.DeltaLeafV, V.BetaNodeV, V.AppNodeV, V.XiNodeV
        term, result = from_unsorted, value_from_unsorted
    else:
        Refl, Delta, Beta, AppN, Xi = ReflLeaf, DeltaLeaf, BetaNode, AppNode, XiNode
        term = result = lambda t: t

    def go(o):
        if not isinstance(o, dict) or "rule" not in o:
            raise SchemaError(f"malformed derivation node {o!r}")
        rule = o["rule"]
        try:
            if rule == "refl":
                d = Refl(term(term_from_json(o["term"])))
            elif rule == "delta":
                d = Delta(const_from_str(o["left"]), const_from_str(o["right"]), result(term_from_json(o["result"])))
            elif rule == "beta":
                d = Beta(_var_from_str(o["binder"]), go(o["body"]), go(o["arg"]))
            elif rule == "app":
                d = AppN(go(o["fun"]), go(o["arg"]))
            elif rule == "lm":
                d = Xi(_var_from_str(o["binder"]), go(o["body"]))
            else:
                raise SchemaError(f"unknown rule {rule!r}")
        except KeyError as e:
            raise SchemaError(f"{rule} node lacks field {e}") from None
        except SchemaError:
            raise
        except ValueError as e:
            raise SchemaError(str(e)) from None
        try:
            label = d.label
        except MalformedDerivation as e:
            raise SchemaError(str(e)) from None
        if "label" in o and o["label"] != label:
            raise SchemaError(f"{rule} node records label {o['label']} but has label {label}")
        return d

    return go(obj)


# -- standard sequences ----------------------------------------------------------

def srs_to_json(terms) -> dict:
    return {"terms": [term_to_json(t) for t in terms]}


def srs_from_json(obj: Any, cbv: bool = False) -> list:
    conv = _term_conv(cbv)
    if not isinstance(obj, dict) or not isinstance(obj.get("terms"), list):
        raise SchemaError("a sequence is {\"terms\": [...]}")
    return [conv(term_from_json(t)) for t in obj["terms"]]


# -- delta tables ----------------------------------------------------------------

def delta_to_json(delta) -> list[dict]:
    return [
        {"left": const_to_str(c1), "right": const_to_str(c2), "result": term_to_json(z)}
        for (c1, c2), z in delta
    ]


def delta_from_json(obj: Any, cbv: bool = False):
    """A JSON array of ``{"left", "right", "result"}``; CBV tables need value results."""
    if not isinstance(obj, list):
        raise SchemaError("a delta table is a JSON array")
    rules: dict = {}
    for entry in obj:
        try:
            pair = (const_from_str(entry["left"]), const_from_str(entry["right"]))
            z = term_from_json(entry["result"])
        except (KeyError, TypeError):
            raise SchemaError(f"malformed delta entry {entry!r}") from None
        if pair in rules:
            raise SchemaError(f"duplicate delta rule for {pair[0]} {pair[1]}")
        rules[pair] = z
    try:
        table = DeltaTable(rules)
        if cbv:
            from .cbv.syntax import DeltaTableV

            return DeltaTableV.from_unsorted(table)
    except ValueError as e:
        raise SchemaError(str(e)) from None
    return table


def load_delta(path: Union[str, Path], cbv: bool = False):
    with open(path, encoding="utf-8") as fh:
        return delta_from_json(json.load(fh), cbv)


def dumps(obj: Any) -> str:
    """Deterministic rendering of an already JSON-shaped object."""
    return _dumps(obj)
