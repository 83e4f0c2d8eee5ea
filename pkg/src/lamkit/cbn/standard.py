"""Standard reduction sequences and the constructive standardization pipeline.

A standard reduction sequence is represented by a proof tree built from five
rules: a single term, a left step in front of a sequence, a sequence under a
binder, and the merge of a function sequence with an argument sequence
(:func:`zip_app`). :func:`standardize` turns any chain of parallel steps into
such a proof by absorbing the steps one at a time, from the right.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

from ..delta import EMPTY_DELTA, DeltaTable
from ..terms import App, Ct, Lm, Term, Var, VarName, alpha_eq, alpha_key, free_vars, fresh_var, subst, swap, swap_var
from .derivations import (
    AppNode,
    BetaNode,
    DeltaLeaf,
    MalformedDerivation,
    ParDerivation,
    ReflLeaf,
    XiNode,
    check_chain,
    refl_derivation,
    replay_derivation,
    subst_par,
    swap_derivation,
)
from .reduction import Direction, RedexKind, RedexPath, Trace, left_path, step_left, top_redex


def zip_app(xs: Sequence[Term], ys: Sequence[Term]) -> list[Term]:
    """``[App x1 y1, ..., App xn y1, App xn y2, ..., App xn ym]``."""
    if not xs or not ys:
        raise ValueError("zip_app needs two nonempty lists")
    return [App(x, ys[0]) for x in xs] + [App(xs[-1], y) for y in ys[1:]]


# -- proofs ----------------------------------------------------------------------

class SrsProof:
    @cached_property
    def terms(self) -> list[Term]:
        return self._terms()

    def _terms(self) -> list[Term]:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class SBase(SrsProof):
    term: Term

    @property
    def head(self) -> Term:
        return self.term

    def _terms(self):
        return [self.term]


@dataclass(frozen=True, eq=False)
class SRed(SrsProof):
    """``term`` left-reduces to the head of ``rest``."""

    term: Term
    rest: SrsProof

    @property
    def head(self) -> Term:
        return self.term

    def _terms(self):
        return [self.term] + self.rest.terms


@dataclass(frozen=True, eq=False)
class SLm(SrsProof):
    binder: VarName
    sub: SrsProof

    @property
    def head(self) -> Term:
        return Lm(self.binder, self.sub.head)

    def _terms(self):
        return [Lm(self.binder, t) for t in self.sub.terms]


@dataclass(frozen=True, eq=False)
class SApp(SrsProof):
    left: SrsProof
    right: SrsProof

    @property
    def head(self) -> Term:
        return App(self.left.head, self.right.head)

    def _terms(self):
        return zip_app(self.left.terms, self.right.terms)


Proof = Union[SBase, SRed, SLm, SApp]


def check_proof(p: SrsProof, delta: DeltaTable = EMPTY_DELTA) -> bool:
    """Independent validation of a proof tree's side conditions."""
    match p:
        case SBase():
            return True
        case SRed(t, rest):
            nxt = step_left(t, delta)
            return nxt is not None and alpha_eq(nxt, rest.head) and check_proof(rest, delta)
        case SLm(_, sub):
            return check_proof(sub, delta)
        case SApp(l, r):
            return check_proof(l, delta) and check_proof(r, delta)
    return False


def swap_proof(p: SrsProof, z1: VarName, z2: VarName) -> SrsProof:
    match p:
        case SBase(t):
            return SBase(swap(t, z1, z2))
        case SRed(t, rest):
            return SRed(swap(t, z1, z2), swap_proof(rest, z1, z2))
        case SLm(x, sub):
            return SLm(swap_var(x, z1, z2), swap_proof(sub, z1, z2))
        case SApp(l, r):
            return SApp(swap_proof(l, z1, z2), swap_proof(r, z1, z2))
    raise TypeError(f"not a proof: {p!r}")


# -- deciding srs ----------------------------------------------------------------

def srs_proof(xs: Sequence[Term], delta: DeltaTable = EMPTY_DELTA) -> Optional[SrsProof]:
    """Search for a proof that ``xs`` is a standard reduction sequence.

    Rules are tried in the order base, left step, binder, application merge;
    the merge enumerates every split point. Results are memoized on the
    alpha-classes of the list.
    """
    if not xs:
        raise ValueError("a standard reduction sequence is nonempty")
    memo: dict[tuple, Optional[SrsProof]] = {}
    return _search(tuple(xs), delta, memo)


def _search(xs: tuple, delta: DeltaTable, memo: dict) -> Optional[SrsProof]:
    key = tuple(alpha_key(x) for x in xs)
    if key in memo:
        return memo[key]
    memo[key] = None
    result = _search_uncached(xs, delta, memo)
    memo[key] = result
    return result


def _search_uncached(xs: tuple, delta: DeltaTable, memo: dict) -> Optional[SrsProof]:
    head = xs[0]
    if len(xs) == 1:
        return SBase(head)
    nxt = step_left(head, delta)
    if nxt is not None and alpha_eq(nxt, xs[1]):
        rest = _search(xs[1:], delta, memo)
        if rest is not None:
            return SRed(head, rest)
    if all(isinstance(x, Lm) for x in xs):
        w, bodies = _unmap_binders(xs)
        sub = _search(bodies, delta, memo)
        if sub is not None:
            return SLm(w, sub)
    if all(isinstance(x, App) for x in xs):
        for n in range(1, len(xs) + 1):
            # xs[:n] share the first argument, xs[n-1:] share the last function
            if not all(alpha_eq(xs[i].arg, xs[0].arg) for i in range(1, n)):
                break
            if not all(alpha_eq(xs[i].fun, xs[n - 1].fun) for i in range(n, len(xs))):
                continue
            left = _search(tuple(x.fun for x in xs[:n]), delta, memo)
            if left is None:
                continue
            right = _search(tuple(x.arg for x in xs[n - 1:]), delta, memo)
            if right is not None:
                return SApp(left, right)
    return None


def _unmap_binders(xs: Sequence[Lm]) -> tuple[VarName, tuple[Term, ...]]:
    """Bodies of a list of abstractions, all opened with one common binder."""
    fv = frozenset().union(*(free_vars(x) for x in xs))
    w = xs[0].binder
    if w in fv:
        w = fresh_var(fv, w)
    bodies = tuple(x.body if x.binder == w else subst(x.body, Var(w), x.binder) for x in xs)
    return w, bodies


def is_srs(xs: Sequence[Term], delta: DeltaTable = EMPTY_DELTA) -> bool:
    return srs_proof(xs, delta) is not None


def proof_trace(p: SrsProof, delta: DeltaTable = EMPTY_DELTA) -> Trace:
    """One reduction step per consecutive pair of the proof's terms."""
    return Trace(p.head, tuple(_proof_steps(p, delta)))


def _proof_steps(p: SrsProof, delta: DeltaTable) -> list[tuple[RedexPath, Term]]:
    match p:
        case SBase():
            return []
        case SRed(t, rest):
            return [(left_path(t, delta), rest.head)] + _proof_steps(rest, delta)
        case SLm(x, sub):
            return [(path.under(Direction.BODY), Lm(x, u)) for path, u in _proof_steps(sub, delta)]
        case SApp(l, r):
            arg0 = r.head
            fun_end = l.terms[-1]
            steps = [(path.under(Direction.FUN), App(u, arg0)) for path, u in _proof_steps(l, delta)]
            steps += [(path.under(Direction.ARG), App(fun_end, u)) for path, u in _proof_steps(r, delta)]
            return steps
    raise TypeError(f"not a proof: {p!r}")


def srs_to_trace(xs: Sequence[Term], delta: DeltaTable = EMPTY_DELTA) -> Trace:
    """A one-step reduction trace visiting every element of ``xs`` in order."""
    p = srs_proof(xs, delta)
    if p is None:
        raise ValueError("not a standard reduction sequence")
    steps = _proof_steps(p, delta)
    # report the caller's own representatives
    return Trace(xs[0], tuple((path, xs[i + 1]) for i, (path, _) in enumerate(steps)))


# -- commuting a parallel step past a left step ----------------------------------

def head_contract(d: ParDerivation) -> tuple[RedexPath, Term, ParDerivation]:
    """Split a derivation with a contracted top redex into that left step plus the rest."""
    match d:
        case DeltaLeaf(_, _, z):
            return RedexPath((), RedexKind.DELTA), z, refl_derivation(z)
        case BetaNode(x, b, a):
            reduct = subst(b.source, a.source, x)
            return RedexPath((), RedexKind.BETA), reduct, subst_par(b, a, x)
    raise ValueError("derivation does not contract its top redex")


def _advance(d: AppNode, side: Direction) -> tuple[RedexPath, Term, AppNode]:
    if side is Direction.FUN:
        path, reduct, rest = head_contract(d.fun)
        return path.under(Direction.FUN), App(reduct, d.arg.source), AppNode(rest, d.arg)
    path, reduct, rest = head_contract(d.arg)
    return path.under(Direction.ARG), App(d.fun.source, reduct), AppNode(d.fun, rest)


def _commute(d: ParDerivation, delta: DeltaTable) -> tuple[list, ParDerivation]:
    """Left steps from ``d.source`` and a derivation to the left reduct of ``d.target``."""
    steps: list[tuple[RedexPath, Term]] = []
    while True:
        if isinstance(d, (BetaNode, DeltaLeaf)):
            path, reduct, d = head_contract(d)
            steps.append((path, reduct))
            continue
        if not isinstance(d, AppNode):
            raise ValueError("target has no left reduct")
        dx, dy = d.fun, d.arg
        y1, y2 = dx.target, dy.target
        if isinstance(y1, Lm):
            if isinstance(dx, XiNode):
                x = dx.binder
                steps.append((RedexPath((), RedexKind.BETA), subst(dx.body.source, dy.source, x)))
                return steps, subst_par(dx.body, dy, x)
            path, reduct, d = _advance(d, Direction.FUN)
            steps.append((path, reduct))
            continue
        if isinstance(y1, Ct) and isinstance(y2, Ct) and delta.lookup(y1.name, y2.name) is not None:
            if not isinstance(dx, ReflLeaf):
                path, reduct, d = _advance(d, Direction.FUN)
            elif not isinstance(dy, ReflLeaf):
                path, reduct, d = _advance(d, Direction.ARG)
            else:
                z = delta.lookup(y1.name, y2.name)
                steps.append((RedexPath((), RedexKind.DELTA), z))
                return steps, refl_derivation(z)
            steps.append((path, reduct))
            continue
        if left_path(y1, delta) is not None:
            sub, d1 = _commute(dx, delta)
            a_src = dy.source
            steps += [(p.under(Direction.FUN), App(u, a_src)) for p, u in sub]
            return steps, AppNode(d1, dy)
        if isinstance(y1, (Var, Ct)) and left_path(y2, delta) is not None:
            if not isinstance(dx, ReflLeaf):
                path, reduct, d = _advance(d, Direction.FUN)
                steps.append((path, reduct))
                continue
            sub, d2 = _commute(dy, delta)
            f_src = dx.source
            steps += [(p.under(Direction.ARG), App(f_src, u)) for p, u in sub]
            return steps, AppNode(dx, d2)
        raise ValueError("target has no left reduct")


def _left_contraction(d: ParDerivation, delta: DeltaTable) -> Optional[tuple[RedexPath, Term, ParDerivation]]:
    """If ``d`` contracts the left redex of its source, split that step off."""
    if isinstance(d, (BetaNode, DeltaLeaf)):
        return head_contract(d)
    if isinstance(d, AppNode):
        src = d.source
        if top_redex(src, delta) is not None:
            return None
        f_src = d.fun.source
        if left_path(f_src, delta) is not None:
            r = _left_contraction(d.fun, delta)
            if r is None:
                return None
            path, reduct, rest = r
            return path.under(Direction.FUN), App(reduct, d.arg.source), AppNode(rest, d.arg)
        if isinstance(f_src, (Var, Ct)):
            r = _left_contraction(d.arg, delta)
            if r is None:
                return None
            path, reduct, rest = r
            return path.under(Direction.ARG), App(f_src, reduct), AppNode(d.fun, rest)
    return None


def commute_par_left(d: ParDerivation, z: Term, delta: DeltaTable = EMPTY_DELTA) -> tuple[Trace, ParDerivation]:
    """From ``X => Y`` and ``Y ->L z`` build ``X ->L* Y'`` and ``Y' => z``."""
    replay_derivation(d, delta)
    nxt = step_left(d.target, delta)
    if nxt is None or not alpha_eq(nxt, z):
        raise ValueError("z is not the left reduct of the derivation's target")
    steps, rest = _commute(d, delta)
    while (r := _left_contraction(rest, delta)) is not None:
        path, reduct, rest = r
        steps.append((path, reduct))
    return Trace(d.source, tuple(steps)), rest


# -- inversion at abstractions ---------------------------------------------------

@dataclass(frozen=True)
class ReflCase:
    pass


@dataclass(frozen=True)
class XiCase:
    body: ParDerivation


def invert_lm_par(d: ParDerivation, y: VarName) -> Union[ReflCase, XiCase]:
    """Case split for a derivation out of ``Lm y Y``.

    ``XiCase`` carries a body derivation ``Y => Y'`` expressed with binder ``y``.
    """
    src = d.source
    if not isinstance(d, XiNode) or not isinstance(src, Lm):
        raise ValueError("derivation does not start at an abstraction")
    if y != d.binder and y in free_vars(src):
        raise ValueError(f"{y} is free in the source, so it cannot be its binder")
    if d.label == 0:
        return ReflCase()
    if y == d.binder:
        return XiCase(d.body)
    return XiCase(swap_derivation(d.body, d.binder, y))


# -- absorption ------------------------------------------------------------------

def _unmap_proof(p: SrsProof, y: VarName) -> SrsProof:
    """The body proof of a proof about abstractions, with binder ``y``."""
    match p:
        case SBase(Lm(w, b)):
            return SBase(b if w == y else swap(b, w, y))
        case SLm(w, sub):
            return sub if w == y else swap_proof(sub, w, y)
    raise ValueError("proof is not about abstractions")


def _absorb(d: ParDerivation, p: SrsProof, delta: DeltaTable) -> SrsProof:
    match d:
        case ReflLeaf():
            return p
        case DeltaLeaf():
            return SRed(d.source, p)
        case BetaNode():
            _, _, rest = head_contract(d)
            return SRed(d.source, _absorb(rest, p, delta))
        case XiNode(y, body):
            if d.label == 0:
                return p
            return SLm(y, _absorb(body, _unmap_proof(p, y), delta))
        case AppNode(dx, dy):
            if isinstance(p, SBase):
                if not isinstance(p.term, App):
                    raise ValueError("sequence head does not match the derivation target")
                p = SApp(SBase(p.term.fun), SBase(p.term.arg))
            if isinstance(p, SApp):
                return SApp(_absorb(dx, p.left, delta), _absorb(dy, p.right, delta))
            if isinstance(p, SRed):
                steps, rest_d = _commute(d, delta)
                q = _absorb(rest_d, p.rest, delta)
                for i in range(len(steps) - 1, -1, -1):
                    q = SRed(steps[i - 1][1] if i > 0 else d.source, q)
                return q
            raise ValueError("sequence head does not match the derivation target")
    raise MalformedDerivation(f"unknown derivation node {type(d).__name__}", d)


def absorb_into_srs(d: ParDerivation, xs: Sequence[Term], delta: DeltaTable = EMPTY_DELTA) -> list[Term]:
    """From ``X => X'`` and a standard sequence out of ``X'``, one out of ``X``."""
    replay_derivation(d, delta)
    p = srs_proof(xs, delta)
    if p is None:
        raise ValueError("not a standard reduction sequence")
    if not alpha_eq(xs[0], d.target):
        raise ValueError("sequence does not start at the derivation's target")
    return list(_absorb(d, p, delta).terms)


def standardize_proof(
    chain: Sequence[ParDerivation], delta: DeltaTable = EMPTY_DELTA, start: Optional[Term] = None
) -> SrsProof:
    if not chain:
        if start is None:
            raise ValueError("an empty chain needs an explicit start term")
        return SBase(start)
    first = chain[0].source if start is None else start
    end = check_chain(first, chain, delta)
    p: SrsProof = SBase(end)
    for d in reversed(chain):
        p = _absorb(d, p, delta)
    return p


def standardize(
    chain: Sequence[ParDerivation], delta: DeltaTable = EMPTY_DELTA, start: Optional[Term] = None
) -> list[Term]:
    """A standard reduction sequence with the same endpoints as the chain."""
    return list(standardize_proof(chain, delta, start).terms)
