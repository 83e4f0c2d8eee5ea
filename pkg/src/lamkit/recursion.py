"""Binding-aware recursion over alpha-classes of terms.

A model supplies one callback per constructor plus a freshness predicate and
either a substitution-like (``FsbModel``) or a swapping-like (``FswModel``)
operation. If the model satisfies its clause set, :func:`fold_fsb` and
:func:`fold_fsw` are well defined on alpha-classes: alpha-equivalent inputs
give equal results. The clause checkers test those clauses on samples.
"""
from __future__ import annotations

import itertools
import operator
import random
from dataclasses import dataclass, field
from typing import Callable, Generic, Hashable, Iterable, NamedTuple, Optional, Sequence, TypeVar

from .terms import (
    App,
    Const,
    Ct,
    Lm,
    Term,
    Var,
    VarName,
    alpha_eq,
    alpha_key,
    free_vars,
    fresh_in,
    subst,
    swap,
    swap_var,
    unbind,
)

D = TypeVar("D")


@dataclass(frozen=True)
class ModelExtensions:
    freshness_reversing: bool = False
    constructor_injective: bool = False


@dataclass(frozen=True)
class FsbModel(Generic[D]):
    """Freshness-substitution model. Callbacks receive terms and their fold values."""

    var: Callable[[VarName], D]
    ct: Callable[[Const], D]
    app: Callable[[Term, D, Term, D], D]
    lm: Callable[[VarName, Term, D], D]
    fresh: Callable[[VarName, Term, D], bool]
    subst: Callable[[Term, D, Term, D, VarName], D]
    support: frozenset = frozenset()
    extensions: ModelExtensions = ModelExtensions()
    d_eq: Callable[[D, D], bool] = operator.eq
    # optional hashable key with d_key(a) == d_key(b) iff d_eq(a, b)
    d_key: Optional[Callable[[D], Hashable]] = None
    name: str = "fsb"


@dataclass(frozen=True)
class FswModel(Generic[D]):
    """Freshness-swapping model."""

    var: Callable[[VarName], D]
    ct: Callable[[Const], D]
    app: Callable[[Term, D, Term, D], D]
    lm: Callable[[VarName, Term, D], D]
    fresh: Callable[[VarName, Term, D], bool]
    swap: Callable[[Term, D, VarName, VarName], D]
    support: frozenset = frozenset()
    extensions: ModelExtensions = ModelExtensions()
    d_eq: Callable[[D, D], bool] = operator.eq
    d_key: Optional[Callable[[D], Hashable]] = None
    name: str = "fsw"


def _fold(model, t: Term):
    match t:
        case Var(x):
            return model.var(x)
        case Ct(c):
            return model.ct(c)
        case App(f, a):
            return model.app(f, _fold(model, f), a, _fold(model, a))
        case Lm():
            # pick a binder outside the model's support before recursing
            x, b = unbind(t, free_vars(t) | model.support)
            return model.lm(x, b, _fold(model, b))
    raise TypeError(f"not a term: {t!r}")


def fold_fsb(model: FsbModel[D], t: Term) -> D:
    return _fold(model, t)


def fold_fsw(model: FswModel[D], t: Term) -> D:
    return _fold(model, t)


# -- clause checking -------------------------------------------------------------

class ClauseSample(NamedTuple):
    """Terms ``X``, ``Y``, ``Z``, variables ``x``, ``y``, ``z`` and a constant ``c``."""

    X: Term
    Y: Term
    Z: Term
    x: VarName
    y: VarName
    z: VarName
    c: Const


@dataclass(frozen=True)
class Violation:
    clause: str
    witness: dict = field(default_factory=dict)

    def __str__(self) -> str:
        parts = ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"{self.clause}: {parts}"


def clause_samples(
    terms: Sequence[Term],
    variables: Sequence[VarName],
    constants: Sequence[Const],
    rng: Optional[random.Random] = None,
    limit: int = 400,
) -> list[ClauseSample]:
    """Random clause instances; half of them are built to meet the congruence premise.

    For those, ``Y`` is ``X`` with ``x`` renamed to ``y`` through a fresh ``z``,
    which is exactly the situation where the swapping-congruence clause bites.
    """
    if not terms or not variables or not constants:
        return []
    rng = rng if rng is not None else random.Random(0)
    out = []
    for i in range(limit):
        X, Z = rng.choice(terms), rng.choice(terms)
        x, y, z = (rng.choice(variables) for _ in range(3))
        c = rng.choice(constants)
        if i % 2 and z not in (x, y) and z not in free_vars(X) and (y == x or y not in free_vars(X)):
            Y = swap(swap(X, z, x), z, y)
        else:
            Y = rng.choice(terms)
        out.append(ClauseSample(X, Y, Z, x, y, z, c))
    return out


def _instances(model, samples: Iterable[ClauseSample]):
    for s in samples:
        yield s, _fold(model, s.X), _fold(model, s.Y), _fold(model, s.Z)


def _freshness_violations(model, s: ClauseSample, X, Y) -> list[Violation]:
    out = []
    Xp, Yp, x, z, c = s.X, s.Y, s.x, s.z, s.c
    if not model.fresh(x, Ct(c), model.ct(c)):
        out.append(Violation("F1", {"x": x, "c": c}))
    if x != z and not model.fresh(z, Var(x), model.var(x)):
        out.append(Violation("F2", {"x": x, "z": z}))
    if model.fresh(z, Xp, X) and model.fresh(z, Yp, Y):
        if not model.fresh(z, App(Xp, Yp), model.app(Xp, X, Yp, Y)):
            out.append(Violation("F3", {"z": z, "X": Xp, "Y": Yp}))
    if not model.fresh(z, Lm(z, Xp), model.lm(z, Xp, X)):
        out.append(Violation("F4", {"z": z, "X": Xp}))
    if model.fresh(z, Xp, X) and not model.fresh(z, Lm(x, Xp), model.lm(x, Xp, X)):
        out.append(Violation("F5", {"x": x, "z": z, "X": Xp}))
    return out


def check_fsb_clauses(
    model: FsbModel, samples: Iterable[ClauseSample], d_eq: Optional[Callable] = None
) -> list[Violation]:
    """Instantiate F1-F5, Sb1-Sb4 and SbRn on every sample; return the failures."""
    eq = d_eq or model.d_eq
    out: list[Violation] = []
    for s, X, Y, Z in _instances(model, samples):
        Xp, Yp, Zp, x, y, z = s.X, s.Y, s.Z, s.x, s.y, s.z
        out += _freshness_violations(model, s, X, Y)
        sub = model.subst
        if not eq(sub(Var(z), model.var(z), Zp, Z, z), Z):
            out.append(Violation("Sb1", {"z": z, "Z": Zp}))
        if x != z and not eq(sub(Var(x), model.var(x), Zp, Z, z), model.var(x)):
            out.append(Violation("Sb2", {"x": x, "z": z, "Z": Zp}))
        lhs = sub(App(Xp, Yp), model.app(Xp, X, Yp, Y), Zp, Z, z)
        rhs = model.app(subst(Xp, Zp, z), sub(Xp, X, Zp, Z, z), subst(Yp, Zp, z), sub(Yp, Y, Zp, Z, z))
        if not eq(lhs, rhs):
            out.append(Violation("Sb3", {"X": Xp, "Y": Yp, "Z": Zp, "z": z}))
        if x != z and model.fresh(x, Zp, Z):
            lhs = sub(Lm(x, Xp), model.lm(x, Xp, X), Zp, Z, z)
            rhs = model.lm(x, subst(Xp, Zp, z), sub(Xp, X, Zp, Z, z))
            if not eq(lhs, rhs):
                out.append(Violation("Sb4", {"x": x, "X": Xp, "Z": Zp, "z": z}))
        if x != y and model.fresh(y, Xp, X):
            renamed = sub(Xp, X, Var(y), model.var(y), x)
            if not eq(model.lm(y, subst(Xp, Var(y), x), renamed), model.lm(x, Xp, X)):
                out.append(Violation("SbRn", {"x": x, "y": y, "X": Xp}))
    return out


def check_fsw_clauses(
    model: FswModel, samples: Iterable[ClauseSample], d_eq: Optional[Callable] = None
) -> list[Violation]:
    """Instantiate F1-F5, Sw1-Sw4 and SwCg on every sample; return the failures."""
    eq = d_eq or model.d_eq
    out: list[Violation] = []
    for s, X, Y, _ in _instances(model, samples):
        Xp, Yp, x, y, z, c = s.X, s.Y, s.x, s.y, s.z, s.c
        out += _freshness_violations(model, s, X, Y)
        sw = model.swap
        if not eq(sw(Ct(c), model.ct(c), x, y), model.ct(c)):
            out.append(Violation("Sw1", {"c": c, "z1": x, "z2": y}))
        if not eq(sw(Var(z), model.var(z), x, y), model.var(swap_var(z, x, y))):
            out.append(Violation("Sw2", {"x": z, "z1": x, "z2": y}))
        lhs = sw(App(Xp, Yp), model.app(Xp, X, Yp, Y), x, y)
        rhs = model.app(swap(Xp, x, y), sw(Xp, X, x, y), swap(Yp, x, y), sw(Yp, Y, x, y))
        if not eq(lhs, rhs):
            out.append(Violation("Sw3", {"X": Xp, "Y": Yp, "z1": x, "z2": y}))
        lhs = sw(Lm(z, Xp), model.lm(z, Xp, X), x, y)
        rhs = model.lm(swap_var(z, x, y), swap(Xp, x, y), sw(Xp, X, x, y))
        if not eq(lhs, rhs):
            out.append(Violation("Sw4", {"x": z, "X": Xp, "z1": x, "z2": y}))
        if (
            z not in (x, y)
            and model.fresh(z, Xp, X)
            and model.fresh(z, Yp, Y)
            and eq(sw(Xp, X, z, x), sw(Yp, Y, z, y))
            and not eq(model.lm(x, Xp, X), model.lm(y, Yp, Y))
        ):
            out.append(Violation("SwCg", {"x": x, "y": y, "z": z, "X": Xp, "Y": Yp}))
    return out



def check_extensions(model, samples: Sequence[ClauseSample], d_eq: Optional[Callable] = None) -> list[Violation]:
    """Check the converse freshness clauses and constructor injectivity, as flagged.

    Injectivity is checked on the model-valued arguments, and for abstractions
    only between equal binders: alpha-variants with different binders are
    supposed to collide.
    """
    eq = d_eq or model.d_eq
    out: list[Violation] = []
    ext = model.extensions
    if ext.freshness_reversing:
        for s, X, Y, _ in _instances(model, samples):
            Xp, Yp, x, z = s.X, s.Y, s.x, s.z
            if model.fresh(z, Var(x), model.var(x)) and x == z:
                out.append(Violation("F2c", {"x": x, "z": z}))
            if model.fresh(z, App(Xp, Yp), model.app(Xp, X, Yp, Y)):
                if not (model.fresh(z, Xp, X) and model.fresh(z, Yp, Y)):
                    out.append(Violation("F3c", {"z": z, "X": Xp, "Y": Yp}))
            if model.fresh(z, Lm(x, Xp), model.lm(x, Xp, X)):
                if not (x == z or model.fresh(z, Xp, X)):
                    out.append(Violation("F4_5c", {"x": x, "z": z, "X": Xp}))
    if ext.constructor_injective:
        entries = []
        for s, X, Y, _ in _instances(model, samples):
            entries.append(("VAR", (s.x,), model.var(s.x), s))
            entries.append(("CT", (s.c,), model.ct(s.c), s))
            entries.append(("APP", (X, Y), model.app(s.X, X, s.Y, Y), s))
            entries.append(("LM", (s.x, X), model.lm(s.x, s.X, X), s))
        for (k1, a1, o1, s1), (k2, a2, o2, s2) in _colliding(entries, eq, None if d_eq else model.d_key):
            if k1 != k2:
                out.append(Violation("exclusive", {"first": k1, "second": k2, "sample": s1}))
            elif k1 in ("VAR", "CT"):
                if a1 != a2:
                    out.append(Violation(f"injective-{k1}", {"args": (a1, a2)}))
            elif k1 == "APP":
                if not (eq(a1[0], a2[0]) and eq(a1[1], a2[1])):
                    out.append(Violation("injective-APP", {"X": s1.X, "Y": s2.X}))
            elif a1[0] == a2[0] and not eq(a1[1], a2[1]):
                out.append(Violation("injective-LM", {"x": a1[0], "X": s1.X, "Y": s2.X}))
    return out


def _colliding(entries: list, eq: Callable, key: Optional[Callable]):
    """Pairs of entries whose outputs are equal; bucketed by ``key`` when there is one."""
    if key is None:
        for e1, e2 in itertools.combinations(entries, 2):
            if eq(e1[2], e2[2]):
                yield e1, e2
        return
    buckets: dict = {}
    for e in entries:
        buckets.setdefault(key(e[2]), []).append(e)
    for group in buckets.values():
        yield from itertools.combinations(group, 2)


def check_fold_alpha_invariance(model, pairs: Iterable[tuple[Term, Term]], d_eq: Optional[Callable] = None) -> list[Violation]:
    eq = d_eq or model.d_eq
    return [
        Violation("alpha-invariance", {"t": t, "u": u})
        for t, u in pairs
        if not eq(_fold(model, t), _fold(model, u))
    ]


# -- stock models ----------------------------------------------------------------

def identity_fsb() -> FsbModel[Term]:
    """Terms themselves; the fold returns an alpha-variant of its input."""
    return FsbModel(
        var=Var,
        ct=Ct,
        app=lambda Xp, X, Yp, Y: App(X, Y),
        lm=lambda x, Xp, X: Lm(x, X),
        fresh=lambda x, Xp, X: fresh_in(x, X),
        subst=lambda Xp, X, Zp, Z, z: subst(X, Z, z),
        extensions=ModelExtensions(True, True),
        d_eq=alpha_eq,
        d_key=alpha_key,
        name="identity",
    )


def identity_fsw() -> FswModel[Term]:
    return FswModel(
        var=Var,
        ct=Ct,
        app=lambda Xp, X, Yp, Y: App(X, Y),
        lm=lambda x, Xp, X: Lm(x, X),
        fresh=lambda x, Xp, X: fresh_in(x, X),
        swap=lambda Xp, X, a, b: swap(X, a, b),
        extensions=ModelExtensions(True, True),
        d_eq=alpha_eq,
        d_key=alpha_key,
        name="identity",
    )


def _occ_add(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, n in v.items():
        out[k] = out.get(k, 0) + n
    return out


def _occ_subst(u: dict, v: dict, y: VarName) -> dict:
    uy = u.get(y, 0)
    out = {}
    for k in set(u) | set(v) | {y}:
        n = uy * v.get(y, 0) if k == y else u.get(k, 0) + uy * v.get(k, 0)
        if n:
            out[k] = n
    return out


def occurrence_model() -> FsbModel[dict]:
    """Free-occurrence counts as a finite map (absent keys count 0)."""
    return FsbModel(
        var=lambda x: {x: 1},
        ct=lambda c: {},
        app=lambda Xp, X, Yp, Y: _occ_add(X, Y),
        lm=lambda x, Xp, X: {k: n for k, n in X.items() if k != x},
        fresh=lambda x, Xp, X: X.get(x, 0) == 0,
        subst=lambda Xp, X, Zp, Z, z: _occ_subst(X, Z, z),
        d_key=lambda d: frozenset(d.items()),
        name="occurrences",
    )


def depth_model() -> FswModel[int]:
    return FswModel(
        var=lambda x: 1,
        ct=lambda c: 1,
        app=lambda Xp, X, Yp, Y: 1 + max(X, Y),
        lm=lambda x, Xp, X: 1 + X,
        fresh=lambda x, Xp, X: True,
        swap=lambda Xp, X, a, b: X,
        name="depth",
    )


def fold_depth(t: Term) -> int:
    return fold_fsw(depth_model(), t)


__all__ = [
    "ClauseSample",
    "FsbModel",
    "FswModel",
    "ModelExtensions",
    "Violation",
    "check_extensions",
    "check_fold_alpha_invariance",
    "check_fsb_clauses",
    "check_fsw_clauses",
    "clause_samples",
    "depth_model",
    "fold_fsb",
    "fold_fsw",
    "identity_fsb",
    "identity_fsw",
    "occurrence_model",
]
