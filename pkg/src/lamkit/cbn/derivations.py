"""Labeled parallel reduction as explicit derivation trees.

A derivation records which redexes a parallel step contracts. Its label
counts contracted redexes, with multiplicity for redexes inside arguments that
get duplicated by an enclosing beta step.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from ..delta import EMPTY_DELTA, DeltaTable
from ..terms import (
    App,
    Const,
    Ct,
    Lm,
    Term,
    Var,
    VarName,
    alpha_eq,
    alpha_key,
    count_occ,
    free_vars,
    fresh_in,
    fresh_var,
    subst,
    swap,
    swap_var,
)
from ..recursion import FswModel
from .reduction import Direction, RedexKind, RedexPath, Trace, TraceError, replay_trace, top_redex


class MalformedDerivation(ValueError):
    """A derivation node that does not fit its rule; ``node`` is the culprit."""

    def __init__(self, message: str, node: "ParDerivation"):
        super().__init__(message)
        self.node = node


class ParDerivation:
    """Common interface: ``source``, ``target`` and ``label`` are derived lazily."""

    @cached_property
    def _summary(self) -> tuple[Term, Term, int]:
        return self._compute()

    def _compute(self) -> tuple[Term, Term, int]:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def source(self) -> Term:
        return self._summary[0]

    @property
    def target(self) -> Term:
        return self._summary[1]

    @property
    def label(self) -> int:
        return self._summary[2]


@dataclass(frozen=True, eq=False)
class ReflLeaf(ParDerivation):
    term: Term

    def _compute(self):
        if not isinstance(self.term, (Var, Ct)):
            raise MalformedDerivation("reflexive leaf must hold a variable or constant", self)
        return self.term, self.term, 0


@dataclass(frozen=True, eq=False)
class DeltaLeaf(ParDerivation):
    c1: Const
    c2: Const
    result: Term

    def _compute(self):
        return App(Ct(self.c1), Ct(self.c2)), self.result, 1


@dataclass(frozen=True, eq=False)
class BetaNode(ParDerivation):
    binder: VarName
    body: ParDerivation
    arg: ParDerivation

    def _compute(self):
        b_src, b_tgt, m = self.body._summary
        a_src, a_tgt, n = self.arg._summary
        label = 1 + m + n * count_occ(b_tgt, self.binder)
        return App(Lm(self.binder, b_src), a_src), subst(b_tgt, a_tgt, self.binder), label


@dataclass(frozen=True, eq=False)
class AppNode(ParDerivation):
    fun: ParDerivation
    arg: ParDerivation

    def _compute(self):
        f_src, f_tgt, m = self.fun._summary
        a_src, a_tgt, n = self.arg._summary
        return App(f_src, a_src), App(f_tgt, a_tgt), m + n


@dataclass(frozen=True, eq=False)
class XiNode(ParDerivation):
    binder: VarName
    body: ParDerivation

    def _compute(self):
        b_src, b_tgt, m = self.body._summary
        return Lm(self.binder, b_src), Lm(self.binder, b_tgt), m


# -- validation ----------------------------------------------------------------

def replay_derivation(d: ParDerivation, delta: Optional[DeltaTable] = None) -> tuple[Term, Term, int]:
    """Recompute ``(source, target, label)``.

    With a table, delta leaves are also checked against it. Raises
    :class:`MalformedDerivation` naming the offending node.
    """
    if delta is not None:
        _check_delta_leaves(d, delta)
    return d._summary


def _check_delta_leaves(d: ParDerivation, delta: DeltaTable) -> None:
    stack = [d]
    while stack:
        node = stack.pop()
        if isinstance(node, DeltaLeaf):
            expected = delta.lookup(node.c1, node.c2)
            if expected is None or not alpha_eq(expected, node.result):
                raise MalformedDerivation(f"no delta rule ({node.c1}, {node.c2}) with this result", node)
        elif isinstance(node, BetaNode):
            stack += [node.body, node.arg]
        elif isinstance(node, AppNode):
            stack += [node.fun, node.arg]
        elif isinstance(node, XiNode):
            stack.append(node.body)
        elif not isinstance(node, ReflLeaf):
            raise MalformedDerivation(f"unknown derivation node {type(node).__name__}", node)


def is_valid(d: ParDerivation, delta: Optional[DeltaTable] = None) -> bool:
    try:
        replay_derivation(d, delta)
    except MalformedDerivation:
        return False
    return True


class ChainError(ValueError):
    pass


def check_chain(start: Term, chain: Sequence[ParDerivation], delta: DeltaTable) -> Term:
    """Validate a chain of derivations from ``start``; return its endpoint."""
    cur = start
    for i, d in enumerate(chain):
        try:
            src, tgt, _ = replay_derivation(d, delta)
        except MalformedDerivation as exc:
            raise ChainError(f"derivation {i} is malformed: {exc}") from exc
        if not alpha_eq(src, cur):
            raise ChainError(f"derivation {i} does not start where the previous one ended")
        cur = tgt
    return cur


# -- construction --------------------------------------------------------------

def refl_derivation(t: Term) -> ParDerivation:
    """The label-0 derivation of ``t => t``."""
    match t:
        case Var() | Ct():
            return ReflLeaf(t)
        case App(f, a):
            return AppNode(refl_derivation(f), refl_derivation(a))
        case Lm(x, b):
            return XiNode(x, refl_derivation(b))
    raise TypeError(f"not a term: {t!r}")


def step_par(t: Term, delta: DeltaTable = EMPTY_DELTA) -> list[ParDerivation]:
    """Every parallel-step derivation out of ``t`` (targets not deduplicated)."""
    match t:
        case Var() | Ct():
            return [ReflLeaf(t)]
        case Lm(x, b):
            return [XiNode(x, d) for d in step_par(b, delta)]
        case App(f, a):
            ds_f = step_par(f, delta)
            ds_a = step_par(a, delta)
            out: list[ParDerivation] = [AppNode(df, da) for df in ds_f for da in ds_a]
            if isinstance(f, Lm):
                out += [BetaNode(f.binder, db, da) for db in step_par(f.body, delta) for da in ds_a]
            elif isinstance(f, Ct) and isinstance(a, Ct):
                z = delta.lookup(f.name, a.name)
                if z is not None:
                    out.append(DeltaLeaf(f.name, a.name, z))
            return out
    raise TypeError(f"not a term: {t!r}")


def dedup_targets(ds: Sequence[ParDerivation]) -> list[ParDerivation]:
    """Keep the first derivation for each alpha-class of targets."""
    seen, out = set(), []
    for d in ds:
        k = alpha_key(d.target)
        if k not in seen:
            seen.add(k)
            out.append(d)
    return out


def random_derivation(t: Term, delta: DeltaTable, rng: random.Random, p_contract: float = 0.5) -> ParDerivation:
    """Sample one derivation out of ``t``, contracting each redex with probability ``p_contract``."""
    match t:
        case Var() | Ct():
            return ReflLeaf(t)
        case Lm(x, b):
            return XiNode(x, random_derivation(b, delta, rng, p_contract))
        case App(f, a):
            if isinstance(f, Lm) and rng.random() < p_contract:
                return BetaNode(
                    f.binder,
                    random_derivation(f.body, delta, rng, p_contract),
                    random_derivation(a, delta, rng, p_contract),
                )
            if isinstance(f, Ct) and isinstance(a, Ct):
                z = delta.lookup(f.name, a.name)
                if z is not None and rng.random() < p_contract:
                    return DeltaLeaf(f.name, a.name, z)
            return AppNode(random_derivation(f, delta, rng, p_contract), random_derivation(a, delta, rng, p_contract))
    raise TypeError(f"not a term: {t!r}")


def step_derivation(t: Term, path: RedexPath, delta: DeltaTable = EMPTY_DELTA) -> ParDerivation:
    """The derivation contracting exactly the redex at ``path``."""

    def go(u: Term, i: int) -> ParDerivation:
        if i == len(path.steps):
            kind = top_redex(u, delta)
            if kind is not path.kind:
                raise TraceError(f"no {path.kind.value} redex at {path}")
            if kind is RedexKind.BETA:
                return BetaNode(u.fun.binder, refl_derivation(u.fun.body), refl_derivation(u.arg))
            return DeltaLeaf(u.fun.name, u.arg.name, delta.lookup(u.fun.name, u.arg.name))
        d = path.steps[i]
        if d is Direction.FUN and isinstance(u, App):
            return AppNode(go(u.fun, i + 1), refl_derivation(u.arg))
        if d is Direction.ARG and isinstance(u, App):
            return AppNode(refl_derivation(u.fun), go(u.arg, i + 1))
        if d is Direction.BODY and isinstance(u, Lm):
            return XiNode(u.binder, go(u.body, i + 1))
        raise TraceError(f"path {path} does not fit the term")

    return go(t, 0)


def trace_to_chain(trace: Trace, delta: DeltaTable = EMPTY_DELTA) -> list[ParDerivation]:
    """Lift each one-step reduction of a trace to a parallel derivation."""
    replay_trace(trace, delta)
    chain, cur = [], trace.start
    for path, target in trace.steps:
        chain.append(step_derivation(cur, path, delta))
        cur = target
    return chain


# -- complete development ------------------------------------------------------

def cdev(t: Term, delta: DeltaTable = EMPTY_DELTA) -> Term:
    """Contract every redex of ``t`` at once."""
    match t:
        case Var() | Ct():
            return t
        case Lm(x, b):
            return Lm(x, cdev(b, delta))
        case App(f, a):
            if isinstance(f, Ct) and isinstance(a, Ct):
                z = delta.lookup(f.name, a.name)
                if z is not None:
                    # the rule's result itself, not its development: only that
                    # keeps one parallel step from the constant pair sufficient
                    return z
            if isinstance(f, Lm):
                return subst(cdev(f.body, delta), cdev(a, delta), f.binder)
            return App(cdev(f, delta), cdev(a, delta))
    raise TypeError(f"not a term: {t!r}")


def cdev_derivation(t: Term, delta: DeltaTable = EMPTY_DELTA) -> ParDerivation:
    """A derivation of ``t => cdev t``."""
    match t:
        case Var() | Ct():
            return ReflLeaf(t)
        case Lm(x, b):
            return XiNode(x, cdev_derivation(b, delta))
        case App(f, a):
            if isinstance(f, Ct) and isinstance(a, Ct):
                z = delta.lookup(f.name, a.name)
                if z is not None:
                    return DeltaLeaf(f.name, a.name, z)
            if isinstance(f, Lm):
                return BetaNode(f.binder, cdev_derivation(f.body, delta), cdev_derivation(a, delta))
            return AppNode(cdev_derivation(f, delta), cdev_derivation(a, delta))
    raise TypeError(f"not a term: {t!r}")


def cdev_model(delta: DeltaTable = EMPTY_DELTA) -> FswModel[Term]:
    """Complete development as a binding-aware fold.

    APP looks at the original function subterm to spot beta and delta redexes.
    Delta results are closed, so the support is empty.
    """

    def app(fp: Term, f: Term, ap: Term, a: Term) -> Term:
        if isinstance(fp, Ct) and isinstance(ap, Ct):
            z = delta.lookup(fp.name, ap.name)
            if z is not None:
                return z
        if isinstance(fp, Lm):
            return subst(f.body, a, f.binder)
        return App(f, a)

    return FswModel(
        var=Var,
        ct=Ct,
        app=app,
        lm=lambda x, bp, b: Lm(x, b),
        fresh=lambda x, bp, b: fresh_in(x, b),
        swap=lambda tp, t, z1, z2: swap(t, z1, z2),
        d_eq=alpha_eq,
        d_key=alpha_key,
        name="cdev",
    )


# -- equivariance and substitution ---------------------------------------------

def swap_derivation(d: ParDerivation, z1: VarName, z2: VarName) -> ParDerivation:
    """Transpose two variables throughout a derivation; the label is unchanged."""
    if z1 == z2:
        return d
    match d:
        case ReflLeaf(t):
            return ReflLeaf(swap(t, z1, z2))
        case DeltaLeaf(c1, c2, z):
            return DeltaLeaf(c1, c2, swap(z, z1, z2))
        case BetaNode(x, b, a):
            return BetaNode(swap_var(x, z1, z2), swap_derivation(b, z1, z2), swap_derivation(a, z1, z2))
        case AppNode(f, a):
            return AppNode(swap_derivation(f, z1, z2), swap_derivation(a, z1, z2))
        case XiNode(x, b):
            return XiNode(swap_var(x, z1, z2), swap_derivation(b, z1, z2))
    raise MalformedDerivation(f"unknown derivation node {type(d).__name__}", d)


def derivation_free_vars(d: ParDerivation) -> frozenset[VarName]:
    return free_vars(d.source) | free_vars(d.target)


def _rename_binder(x: VarName, body: ParDerivation, avoid: frozenset) -> tuple[VarName, ParDerivation]:
    if x not in avoid:
        return x, body
    z = fresh_var(derivation_free_vars(body) | avoid, x)
    return z, swap_derivation(body, x, z)


def subst_par(dx: ParDerivation, dy: ParDerivation, y: VarName, delta: Optional[DeltaTable] = None) -> ParDerivation:
    """From ``X => X'`` and ``Y => Y'`` build ``X[Y/y] => X'[Y'/y]``.

    The label is at most ``label(dx) + countOcc(X', y) * label(dy)``.
    """
    if delta is not None:
        replay_derivation(dx, delta)
        replay_derivation(dy, delta)
    avoid = derivation_free_vars(dy) | {y}
    return _subst_par(dx, dy, y, avoid)


def _subst_par(d: ParDerivation, dy: ParDerivation, y: VarName, avoid: frozenset) -> ParDerivation:
    if y not in free_vars(d.source):
        # closed delta results mean y cannot appear in the target either
        return d
    match d:
        case ReflLeaf(Var(x)):
            return dy if x == y else d
        case ReflLeaf():
            return d
        case DeltaLeaf():
            return d
        case AppNode(f, a):
            return AppNode(_subst_par(f, dy, y, avoid), _subst_par(a, dy, y, avoid))
        case XiNode(x, b):
            x, b = _rename_binder(x, b, avoid)
            return XiNode(x, _subst_par(b, dy, y, avoid))
        case BetaNode(x, b, a):
            x, b = _rename_binder(x, b, avoid)
            return BetaNode(x, _subst_par(b, dy, y, avoid), _subst_par(a, dy, y, avoid))
    raise MalformedDerivation(f"unknown derivation node {type(d).__name__}", d)


# -- diamond and joins ---------------------------------------------------------

def complete_lemma(d: ParDerivation, delta: DeltaTable = EMPTY_DELTA) -> ParDerivation:
    """From ``X => X'`` build ``X' => cdev X``."""
    match d:
        case ReflLeaf():
            return d
        case DeltaLeaf(_, _, z):
            return refl_derivation(z)
        case XiNode(x, b):
            return XiNode(x, complete_lemma(b, delta))
        case BetaNode(x, b, a):
            return subst_par(complete_lemma(b, delta), complete_lemma(a, delta), x)
        case AppNode(f, a):
            src_f, src_a = f.source, a.source
            if isinstance(src_f, Lm):
                if not isinstance(f, XiNode):
                    raise MalformedDerivation("abstraction must be reduced by a xi node", f)
                return BetaNode(f.binder, complete_lemma(f.body, delta), complete_lemma(a, delta))
            if isinstance(src_f, Ct) and isinstance(src_a, Ct):
                z = delta.lookup(src_f.name, src_a.name)
                if z is not None:
                    return DeltaLeaf(src_f.name, src_a.name, z)
            return AppNode(complete_lemma(f, delta), complete_lemma(a, delta))
    raise MalformedDerivation(f"unknown derivation node {type(d).__name__}", d)


def join_multi(
    x: Term,
    d1s: Sequence[ParDerivation],
    d2s: Sequence[ParDerivation],
    delta: DeltaTable = EMPTY_DELTA,
) -> tuple[Term, list[ParDerivation], list[ParDerivation]]:
    """Close a span of parallel-reduction chains.

    Returns ``(z, e1s, e2s)`` where ``e1s`` leads from the end of ``d1s`` to
    ``z`` and ``e2s`` from the end of ``d2s`` to ``z``. Each tile of the grid
    is closed with :func:`complete_lemma`.
    """
    check_chain(x, d1s, delta)
    check_chain(x, d2s, delta)
    rows, cols = len(d1s), len(d2s)
    # right[i][j]: step from T[i][j] to T[i][j+1]; down[i][j]: T[i][j] to T[i+1][j]
    right = [[None] * cols for _ in range(rows + 1)]
    down = [[None] * (cols + 1) for _ in range(rows)]
    right[0] = list(d2s)
    for i in range(rows):
        down[i][0] = d1s[i]
    for i in range(rows):
        for j in range(cols):
            right[i + 1][j] = complete_lemma(down[i][j], delta)
            down[i][j + 1] = complete_lemma(right[i][j], delta)
    e1s = right[rows]
    e2s = [down[i][cols] for i in range(rows)]
    if e1s:
        z = e1s[-1].target
    elif e2s:
        z = e2s[-1].target
    else:
        z = x
    return z, e1s, e2s
