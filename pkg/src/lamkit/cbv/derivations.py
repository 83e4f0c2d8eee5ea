"""Labeled parallel call-by-value reduction on two-sorted terms.

The node kinds and the label formula are those of the call-by-name
derivations. The difference is in the beta node: its argument derivation must
end in a value, and that value is what gets substituted.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from ..cbn.derivations import ChainError, MalformedDerivation
from ..cbn.reduction import Direction, RedexKind, RedexPath, Trace, TraceError
from ..recursion import FswModel
from ..terms import VarName, fresh_var, swap_var
from .reduction import replay_trace_cbv, top_redex_v
from .syntax import (
    EMPTY_DELTA_V,
    AnyV,
    AppV,
    CtV,
    DeltaTableV,
    LmV,
    TermV,
    Val,
    ValueV,
    VarV,
    alpha_eq_v,
    alpha_key_v,
    count_occ_v,
    free_vars_v,
    fresh_in_v,
    subst_term_v,
    swap_v,
)


class ParDerivationV:
    """Common interface: ``source``, ``target`` and ``label`` are derived lazily."""

    @cached_property
    def _summary(self) -> tuple[TermV, TermV, int]:
        return self._compute()

    def _compute(self):  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def source(self) -> TermV:
        return self._summary[0]

    @property
    def target(self) -> TermV:
        return self._summary[1]

    @property
    def label(self) -> int:
        return self._summary[2]


@dataclass(frozen=True, eq=False)
class ReflLeafV(ParDerivationV):
    term: TermV

    def _compute(self):
        if not (isinstance(self.term, Val) and isinstance(self.term.value, (VarV, CtV))):
            raise MalformedDerivation("reflexive leaf must hold a variable or constant", self)
        return self.term, self.term, 0


@dataclass(frozen=True, eq=False)
class DeltaLeafV(ParDerivationV):
    c1: object
    c2: object
    result: ValueV

    def _compute(self):
        return AppV(Val(CtV(self.c1)), Val(CtV(self.c2))), Val(self.result), 1


@dataclass(frozen=True, eq=False)
class BetaNodeV(ParDerivationV):
    binder: VarName
    body: ParDerivationV
    arg: ParDerivationV

    def _compute(self):
        b_src, b_tgt, m = self.body._summary
        a_src, a_tgt, n = self.arg._summary
        if not isinstance(a_tgt, Val):
            raise MalformedDerivation("beta argument must reduce to a value", self)
        label = 1 + m + n * count_occ_v(b_tgt, self.binder)
        src = AppV(Val(LmV(self.binder, b_src)), a_src)
        return src, subst_term_v(b_tgt, a_tgt.value, self.binder), label


@dataclass(frozen=True, eq=False)
class AppNodeV(ParDerivationV):
    fun: ParDerivationV
    arg: ParDerivationV

    def _compute(self):
        f_src, f_tgt, m = self.fun._summary
        a_src, a_tgt, n = self.arg._summary
        return AppV(f_src, a_src), AppV(f_tgt, a_tgt), m + n


@dataclass(frozen=True, eq=False)
class XiNodeV(ParDerivationV):
    binder: VarName
    body: ParDerivationV

    def _compute(self):
        b_src, b_tgt, m = self.body._summary
        return Val(LmV(self.binder, b_src)), Val(LmV(self.binder, b_tgt)), m


# -- validation ------------------------------------------------------------------

def replay_derivation_v(d: ParDerivationV, delta: Optional[DeltaTableV] = None) -> tuple[TermV, TermV, int]:
    if delta is not None:
        stack = [d]
        while stack:
            node = stack.pop()
            if isinstance(node, DeltaLeafV):
                expected = delta.lookup(node.c1, node.c2)
                if expected is None or not alpha_eq_v(expected, node.result):
                    raise MalformedDerivation(f"no delta rule ({node.c1}, {node.c2}) with that result", node)
            elif isinstance(node, BetaNodeV):
                stack += [node.body, node.arg]
            elif isinstance(node, AppNodeV):
                stack += [node.fun, node.arg]
            elif isinstance(node, XiNodeV):
                stack.append(node.body)
    return d._summary


def is_valid_v(d: ParDerivationV, delta: Optional[DeltaTableV] = None) -> bool:
    try:
        replay_derivation_v(d, delta)
    except MalformedDerivation:
        return False
    return True


def check_chain_v(start: TermV, chain: Sequence[ParDerivationV], delta: DeltaTableV) -> TermV:
    cur = start
    for i, d in enumerate(chain):
        try:
            src, tgt, _ = replay_derivation_v(d, delta)
        except MalformedDerivation as exc:
            raise ChainError(f"derivation {i} is malformed: {exc}") from exc
        if not alpha_eq_v(src, cur):
            raise ChainError(f"derivation {i} does not start where the previous one ended")
        cur = tgt
    return cur


# -- construction ----------------------------------------------------------------

def refl_derivation_v(t: TermV) -> ParDerivationV:
    match t:
        case Val(VarV() | CtV()):
            return ReflLeafV(t)
        case Val(LmV(x, b)):
            return XiNodeV(x, refl_derivation_v(b))
        case AppV(f, a):
            return AppNodeV(refl_derivation_v(f), refl_derivation_v(a))
    raise TypeError(f"not a two-sorted term: {t!r}")


def step_par_cbv(t: TermV, delta: DeltaTableV = EMPTY_DELTA_V) -> list[ParDerivationV]:
    """Every parallel CBV derivation out of ``t``."""
    match t:
        case Val(VarV() | CtV()):
            return [ReflLeafV(t)]
        case Val(LmV(x, b)):
            return [XiNodeV(x, d) for d in step_par_cbv(b, delta)]
        case AppV(f, a):
            ds_f = step_par_cbv(f, delta)
            ds_a = step_par_cbv(a, delta)
            out: list[ParDerivationV] = [AppNodeV(df, da) for df in ds_f for da in ds_a]
            if isinstance(f, Val) and isinstance(f.value, LmV):
                # any argument derivation that ends in a value will do
                vals = [da for da in ds_a if isinstance(da.target, Val)]
                out += [BetaNodeV(f.value.binder, db, da) for db in step_par_cbv(f.value.body, delta) for da in vals]
            elif top_redex_v(t, delta) is RedexKind.DELTA:
                c1, c2 = f.value.name, a.value.name
                out.append(DeltaLeafV(c1, c2, delta.lookup(c1, c2)))
            return out
    raise TypeError(f"not a two-sorted term: {t!r}")


def dedup_targets_v(ds: Sequence[ParDerivationV]) -> list[ParDerivationV]:
    seen, out = set(), []
    for d in ds:
        k = alpha_key_v(d.target)
        if k not in seen:
            seen.add(k)
            out.append(d)
    return out


def random_derivation_v(t: TermV, delta: DeltaTableV, rng: random.Random, p_contract: float = 0.5) -> ParDerivationV:
    match t:
        case Val(VarV() | CtV()):
            return ReflLeafV(t)
        case Val(LmV(x, b)):
            return XiNodeV(x, random_derivation_v(b, delta, rng, p_contract))
        case AppV(f, a):
            df = random_derivation_v(f, delta, rng, p_contract)
            da = random_derivation_v(a, delta, rng, p_contract)
            if isinstance(f, Val) and isinstance(f.value, LmV) and isinstance(da.target, Val) and rng.random() < p_contract:
                return BetaNodeV(f.value.binder, df.body, da)
            if top_redex_v(t, delta) is RedexKind.DELTA and rng.random() < p_contract:
                c1, c2 = f.value.name, a.value.name
                return DeltaLeafV(c1, c2, delta.lookup(c1, c2))
            return AppNodeV(df, da)
    raise TypeError(f"not a two-sorted term: {t!r}")


def step_derivation_v(t: TermV, path: RedexPath, delta: DeltaTableV = EMPTY_DELTA_V) -> ParDerivationV:
    def go(u: TermV, i: int) -> ParDerivationV:
        if i == len(path.steps):
            kind = top_redex_v(u, delta)
            if kind is not path.kind:
                raise TraceError(f"no {path.kind.value} redex at {path}")
            if kind is RedexKind.BETA:
                lm = u.fun.value
                return BetaNodeV(lm.binder, refl_derivation_v(lm.body), refl_derivation_v(u.arg))
            c1, c2 = u.fun.value.name, u.arg.value.name
            return DeltaLeafV(c1, c2, delta.lookup(c1, c2))
        d = path.steps[i]
        if d is Direction.FUN and isinstance(u, AppV):
            return AppNodeV(go(u.fun, i + 1), refl_derivation_v(u.arg))
        if d is Direction.ARG and isinstance(u, AppV):
            return AppNodeV(refl_derivation_v(u.fun), go(u.arg, i + 1))
        if d is Direction.BODY and isinstance(u, Val) and isinstance(u.value, LmV):
            return XiNodeV(u.value.binder, go(u.value.body, i + 1))
        raise TraceError(f"path {path} does not fit the term")

    return go(t, 0)


def trace_to_chain_v(trace: Trace, delta: DeltaTableV = EMPTY_DELTA_V) -> list[ParDerivationV]:
    replay_trace_cbv(trace, delta)
    chain, cur = [], trace.start
    for path, target in trace.steps:
        chain.append(step_derivation_v(cur, path, delta))
        cur = target
    return chain


# -- complete development --------------------------------------------------------

def cdev_cbv(t: TermV, delta: DeltaTableV = EMPTY_DELTA_V) -> TermV:
    """Contract every CBV redex of ``t`` at once.

    A beta redex whose argument is not yet a value still counts when the
    argument's own development is a value: one parallel step can reach that
    value first, so anything less breaks the diamond, e.g. on
    ``(\\y. y) ((\\z. z) u)``. Delta results are returned as they are.
    """
    match t:
        case Val(v):
            return Val(cdev_value_cbv(v, delta))
        case AppV(f, a):
            if top_redex_v(t, delta) is RedexKind.DELTA:
                return Val(delta.lookup(f.value.name, a.value.name))
            if isinstance(f, Val) and isinstance(f.value, LmV):
                ca = cdev_cbv(a, delta)
                if isinstance(ca, Val):
                    return subst_term_v(cdev_cbv(f.value.body, delta), ca.value, f.value.binder)
                return AppV(Val(cdev_value_cbv(f.value, delta)), ca)
            return AppV(cdev_cbv(f, delta), cdev_cbv(a, delta))
    raise TypeError(f"not a two-sorted term: {t!r}")


def cdev_value_cbv(v: ValueV, delta: DeltaTableV = EMPTY_DELTA_V) -> ValueV:
    match v:
        case VarV() | CtV():
            return v
        case LmV(x, b):
            return LmV(x, cdev_cbv(b, delta))
    raise TypeError(f"not a value: {v!r}")


def cdev_derivation_v(t: TermV, delta: DeltaTableV = EMPTY_DELTA_V) -> ParDerivationV:
    """A derivation of ``t => cdev t``."""
    match t:
        case Val(VarV() | CtV()):
            return ReflLeafV(t)
        case Val(LmV(x, b)):
            return XiNodeV(x, cdev_derivation_v(b, delta))
        case AppV(f, a):
            if top_redex_v(t, delta) is RedexKind.DELTA:
                c1, c2 = f.value.name, a.value.name
                return DeltaLeafV(c1, c2, delta.lookup(c1, c2))
            da = cdev_derivation_v(a, delta)
            if isinstance(f, Val) and isinstance(f.value, LmV) and isinstance(da.target, Val):
                return BetaNodeV(f.value.binder, cdev_derivation_v(f.value.body, delta), da)
            return AppNodeV(cdev_derivation_v(f, delta), da)
    raise TypeError(f"not a two-sorted term: {t!r}")


def cdev_cbv_model(delta: DeltaTableV = EMPTY_DELTA_V) -> FswModel[AnyV]:
    """CBV complete development as a fold over the embedded unsorted term.

    Values and terms share one carrier here: the fold returns the two-sorted
    development of the subterm read in term position.
    """
    from ..terms import Ct, Lm, Term

    def app(fp: Term, f: TermV, ap: Term, a: TermV) -> TermV:
        if isinstance(fp, Ct) and isinstance(ap, Ct):
            v = delta.lookup(fp.name, ap.name)
            if v is not None:
                return Val(v)
        if isinstance(fp, Lm) and isinstance(a, Val):
            return subst_term_v(f.value.body, a.value, f.value.binder)
        return AppV(f, a)

    return FswModel(
        var=lambda x: Val(VarV(x)),
        ct=lambda c: Val(CtV(c)),
        app=app,
        lm=lambda x, bp, b: Val(LmV(x, b)),
        fresh=lambda x, bp, b: fresh_in_v(x, b),
        swap=lambda tp, t, z1, z2: swap_v(t, z1, z2),
        d_eq=alpha_eq_v,
        d_key=alpha_key_v,
        name="cdev-cbv",
    )


# -- equivariance and substitution -----------------------------------------------

def swap_derivation_v(d: ParDerivationV, z1: VarName, z2: VarName) -> ParDerivationV:
    if z1 == z2:
        return d
    match d:
        case ReflLeafV(t):
            return ReflLeafV(swap_v(t, z1, z2))
        case DeltaLeafV(c1, c2, z):
            return DeltaLeafV(c1, c2, swap_v(z, z1, z2))
        case BetaNodeV(x, b, a):
            return BetaNodeV(swap_var(x, z1, z2), swap_derivation_v(b, z1, z2), swap_derivation_v(a, z1, z2))
        case AppNodeV(f, a):
            return AppNodeV(swap_derivation_v(f, z1, z2), swap_derivation_v(a, z1, z2))
        case XiNodeV(x, b):
            return XiNodeV(swap_var(x, z1, z2), swap_derivation_v(b, z1, z2))
    raise MalformedDerivation(f"unknown derivation node {type(d).__name__}", d)


def _dfv(d: ParDerivationV) -> frozenset[VarName]:
    return free_vars_v(d.source) | free_vars_v(d.target)


def _rename_binder(x: VarName, body: ParDerivationV, avoid: frozenset) -> tuple[VarName, ParDerivationV]:
    if x not in avoid:
        return x, body
    z = fresh_var(_dfv(body) | avoid, x)
    return z, swap_derivation_v(body, x, z)


def subst_par_cbv(
    dx: ParDerivationV, dv: ParDerivationV, y: VarName, delta: Optional[DeltaTableV] = None
) -> ParDerivationV:
    """From ``X => X'`` and ``Val V => Val V'`` build ``X[V/y] => X'[V'/y]``."""
    if delta is not None:
        replay_derivation_v(dx, delta)
        replay_derivation_v(dv, delta)
    if not (isinstance(dv.source, Val) and isinstance(dv.target, Val)):
        raise ValueError("the substituted derivation must relate two values")
    return _subst_par(dx, dv, y, _dfv(dv) | {y})


def _subst_par(d: ParDerivationV, dv: ParDerivationV, y: VarName, avoid: frozenset) -> ParDerivationV:
    if y not in free_vars_v(d.source):
        return d
    match d:
        case ReflLeafV(Val(VarV(x))):
            return dv if x == y else d
        case ReflLeafV() | DeltaLeafV():
            return d
        case AppNodeV(f, a):
            return AppNodeV(_subst_par(f, dv, y, avoid), _subst_par(a, dv, y, avoid))
        case XiNodeV(x, b):
            x, b = _rename_binder(x, b, avoid)
            return XiNodeV(x, _subst_par(b, dv, y, avoid))
        case BetaNodeV(x, b, a):
            x, b = _rename_binder(x, b, avoid)
            return BetaNodeV(x, _subst_par(b, dv, y, avoid), _subst_par(a, dv, y, avoid))
    raise MalformedDerivation(f"unknown derivation node {type(d).__name__}", d)


# -- diamond and joins -----------------------------------------------------------

def complete_lemma_cbv(d: ParDerivationV, delta: DeltaTableV = EMPTY_DELTA_V) -> ParDerivationV:
    """From ``X => X'`` build ``X' => cdev X``."""
    match d:
        case ReflLeafV():
            return d
        case DeltaLeafV(_, _, v):
            return refl_derivation_v(Val(v))
        case XiNodeV(x, b):
            return XiNodeV(x, complete_lemma_cbv(b, delta))
        case BetaNodeV(x, b, a):
            return subst_par_cbv(complete_lemma_cbv(b, delta), complete_lemma_cbv(a, delta), x)
        case AppNodeV(f, a):
            src = d.source
            if top_redex_v(src, delta) is RedexKind.DELTA:
                c1, c2 = src.fun.value.name, src.arg.value.name
                return DeltaLeafV(c1, c2, delta.lookup(c1, c2))
            ea = complete_lemma_cbv(a, delta)
            if isinstance(f, XiNodeV) and isinstance(ea.target, Val):
                return BetaNodeV(f.binder, complete_lemma_cbv(f.body, delta), ea)
            return AppNodeV(complete_lemma_cbv(f, delta), ea)
    raise MalformedDerivation(f"unknown derivation node {type(d).__name__}", d)


def join_multi_cbv(
    x: TermV,
    d1s: Sequence[ParDerivationV],
    d2s: Sequence[ParDerivationV],
    delta: DeltaTableV = EMPTY_DELTA_V,
) -> tuple[TermV, list[ParDerivationV], list[ParDerivationV]]:
    """Close a span of parallel CBV chains; same grid as the call-by-name version."""
    check_chain_v(x, d1s, delta)
    check_chain_v(x, d2s, delta)
    rows, cols = len(d1s), len(d2s)
    right = [[None] * cols for _ in range(rows + 1)]
    down = [[None] * (cols + 1) for _ in range(rows)]
    right[0] = list(d2s)
    for i in range(rows):
        down[i][0] = d1s[i]
    for i in range(rows):
        for j in range(cols):
            right[i + 1][j] = complete_lemma_cbv(down[i][j], delta)
            down[i][j + 1] = complete_lemma_cbv(right[i][j], delta)
    e1s = right[rows]
    e2s = [down[i][cols] for i in range(rows)]
    if e1s:
        z = e1s[-1].target
    elif e2s:
        z = e2s[-1].target
    else:
        z = x
    return z, e1s, e2s
