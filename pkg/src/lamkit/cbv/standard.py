"""Standard CBV reduction sequences and CBV standardization.

Same proof shapes as the call-by-name module. The extra ingredient is
:func:`_to_value`: a beta node may contract a redex whose argument is not yet
a value, and before that redex becomes a left redex the argument has to be
left-reduced to a value.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

from ..cbn.derivations import MalformedDerivation
from ..cbn.reduction import Direction, RedexKind, RedexPath, Trace
from ..terms import VarName, fresh_var, swap_var
from .derivations import (
    AppNodeV,
    BetaNodeV,
    DeltaLeafV,
    ParDerivationV,
    ReflLeafV,
    XiNodeV,
    check_chain_v,
    refl_derivation_v,
    replay_derivation_v,
    subst_par_cbv,
    swap_derivation_v,
)
from .reduction import left_path_cbv, step_left_cbv, top_redex_v
from .syntax import (
    EMPTY_DELTA_V,
    AppV,
    DeltaTableV,
    LmV,
    TermV,
    Val,
    VarV,
    alpha_eq_v,
    alpha_key_v,
    free_vars_v,
    subst_term_v,
    swap_v,
)

Steps = list[tuple[RedexPath, TermV]]


def zip_app_v(xs: Sequence[TermV], ys: Sequence[TermV]) -> list[TermV]:
    if not xs or not ys:
        raise ValueError("zip_app needs two nonempty lists")
    return [AppV(x, ys[0]) for x in xs] + [AppV(xs[-1], y) for y in ys[1:]]


# -- proofs ----------------------------------------------------------------------

class SrsProofV:
    @cached_property
    def terms(self) -> list[TermV]:
        return self._terms()

    def _terms(self):  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class SBaseV(SrsProofV):
    term: TermV

    @property
    def head(self) -> TermV:
        return self.term

    def _terms(self):
        return [self.term]


@dataclass(frozen=True, eq=False)
class SRedV(SrsProofV):
    term: TermV
    rest: SrsProofV

    @property
    def head(self) -> TermV:
        return self.term

    def _terms(self):
        return [self.term] + self.rest.terms


@dataclass(frozen=True, eq=False)
class SLmV(SrsProofV):
    binder: VarName
    sub: SrsProofV

    @property
    def head(self) -> TermV:
        return Val(LmV(self.binder, self.sub.head))

    def _terms(self):
        return [Val(LmV(self.binder, t)) for t in self.sub.terms]


@dataclass(frozen=True, eq=False)
class SAppV(SrsProofV):
    left: SrsProofV
    right: SrsProofV

    @property
    def head(self) -> TermV:
        return AppV(self.left.head, self.right.head)

    def _terms(self):
        return zip_app_v(self.left.terms, self.right.terms)


def check_proof_v(p: SrsProofV, delta: DeltaTableV = EMPTY_DELTA_V) -> bool:
    match p:
        case SBaseV():
            return True
        case SRedV(t, rest):
            nxt = step_left_cbv(t, delta)
            return nxt is not None and alpha_eq_v(nxt, rest.head) and check_proof_v(rest, delta)
        case SLmV(_, sub):
            return check_proof_v(sub, delta)
        case SAppV(l, r):
            return check_proof_v(l, delta) and check_proof_v(r, delta)
    return False


def swap_proof_v(p: SrsProofV, z1: VarName, z2: VarName) -> SrsProofV:
    match p:
        case SBaseV(t):
            return SBaseV(swap_v(t, z1, z2))
        case SRedV(t, rest):
            return SRedV(swap_v(t, z1, z2), swap_proof_v(rest, z1, z2))
        case SLmV(x, sub):
            return SLmV(swap_var(x, z1, z2), swap_proof_v(sub, z1, z2))
        case SAppV(l, r):
            return SAppV(swap_proof_v(l, z1, z2), swap_proof_v(r, z1, z2))
    raise TypeError(f"not a proof: {p!r}")


# -- deciding srs ----------------------------------------------------------------

def _is_lm(t: TermV) -> bool:
    return isinstance(t, Val) and isinstance(t.value, LmV)


def srs_proof_cbv(xs: Sequence[TermV], delta: DeltaTableV = EMPTY_DELTA_V) -> Optional[SrsProofV]:
    if not xs:
        raise ValueError("a standard reduction sequence is nonempty")
    return _search(tuple(xs), delta, {})


def _search(xs: tuple, delta: DeltaTableV, memo: dict) -> Optional[SrsProofV]:
    key = tuple(alpha_key_v(x) for x in xs)
    if key in memo:
        return memo[key]
    memo[key] = None
    result = _search_uncached(xs, delta, memo)
    memo[key] = result
    return result


def _search_uncached(xs: tuple, delta: DeltaTableV, memo: dict) -> Optional[SrsProofV]:
    head = xs[0]
    if len(xs) == 1:
        return SBaseV(head)
    nxt = step_left_cbv(head, delta)
    if nxt is not None and alpha_eq_v(nxt, xs[1]):
        rest = _search(xs[1:], delta, memo)
        if rest is not None:
            return SRedV(head, rest)
    if all(_is_lm(x) for x in xs):
        w, bodies = _unmap_binders(xs)
        sub = _search(bodies, delta, memo)
        if sub is not None:
            return SLmV(w, sub)
    if all(isinstance(x, AppV) for x in xs):
        for n in range(1, len(xs) + 1):
            if not all(alpha_eq_v(xs[i].arg, xs[0].arg) for i in range(1, n)):
                break
            if not all(alpha_eq_v(xs[i].fun, xs[n - 1].fun) for i in range(n, len(xs))):
                continue
            left = _search(tuple(x.fun for x in xs[:n]), delta, memo)
            if left is None:
                continue
            right = _search(tuple(x.arg for x in xs[n - 1:]), delta, memo)
            if right is not None:
                return SAppV(left, right)
    return None


def _unmap_binders(xs: Sequence[Val]) -> tuple[VarName, tuple[TermV, ...]]:
    fv = frozenset().union(*(free_vars_v(x) for x in xs))
    w = xs[0].value.binder
    if w in fv:
        w = fresh_var(fv, w)
    bodies = tuple(
        x.value.body if x.value.binder == w else subst_term_v(x.value.body, VarV(w), x.value.binder) for x in xs
    )
    return w, bodies


def is_srs_cbv(xs: Sequence[TermV], delta: DeltaTableV = EMPTY_DELTA_V) -> bool:
    return srs_proof_cbv(xs, delta) is not None


def _proof_steps(p: SrsProofV, delta: DeltaTableV) -> Steps:
    match p:
        case SBaseV():
            return []
        case SRedV(t, rest):
            return [(left_path_cbv(t, delta), rest.head)] + _proof_steps(rest, delta)
        case SLmV(x, sub):
            return [(path.under(Direction.BODY), Val(LmV(x, u))) for path, u in _proof_steps(sub, delta)]
        case SAppV(l, r):
            arg0 = r.head
            fun_end = l.terms[-1]
            steps = [(path.under(Direction.FUN), AppV(u, arg0)) for path, u in _proof_steps(l, delta)]
            steps += [(path.under(Direction.ARG), AppV(fun_end, u)) for path, u in _proof_steps(r, delta)]
            return steps
    raise TypeError(f"not a proof: {p!r}")


def srs_to_trace_cbv(xs: Sequence[TermV], delta: DeltaTableV = EMPTY_DELTA_V) -> Trace:
    p = srs_proof_cbv(xs, delta)
    if p is None:
        raise ValueError("not a standard reduction sequence")
    steps = _proof_steps(p, delta)
    return Trace(xs[0], tuple((path, xs[i + 1]) for i, (path, _) in enumerate(steps)))


# -- commuting a parallel step past a left step ----------------------------------

def _lift(steps: Steps, side: Direction, other: TermV) -> Steps:
    if side is Direction.FUN:
        return [(p.under(Direction.FUN), AppV(u, other)) for p, u in steps]
    return [(p.under(Direction.ARG), AppV(other, u)) for p, u in steps]


def head_contract_v(d: ParDerivationV) -> tuple[RedexPath, TermV, ParDerivationV]:
    """Split off the top redex of a beta or delta node whose redex is already a left redex."""
    match d:
        case DeltaLeafV(_, _, v):
            return RedexPath((), RedexKind.DELTA), Val(v), refl_derivation_v(Val(v))
        case BetaNodeV(x, b, a):
            if not isinstance(a.source, Val):
                raise ValueError("the argument is not a value yet")
            reduct = subst_term_v(b.source, a.source.value, x)
            return RedexPath((), RedexKind.BETA), reduct, subst_par_cbv(b, a, x)
    raise ValueError("derivation does not contract its top redex")


def _to_value(d: ParDerivationV) -> tuple[Steps, ParDerivationV]:
    """For ``X => Val V``: left steps ``X ->L* Val W`` and ``Val W => Val V``."""
    steps: Steps = []
    while not isinstance(d.source, Val):
        if isinstance(d, DeltaLeafV):
            path, reduct, d = head_contract_v(d)
            steps.append((path, reduct))
        elif isinstance(d, BetaNodeV):
            if isinstance(d.arg.source, Val):
                path, reduct, d = head_contract_v(d)
                steps.append((path, reduct))
            else:
                sub, a = _to_value(d.arg)
                steps += _lift(sub, Direction.ARG, d.source.fun)
                d = BetaNodeV(d.binder, d.body, a)
        else:
            raise ValueError("derivation does not end in a value")
    return steps, d


def _fun_to_value(d: AppNodeV) -> tuple[Steps, AppNodeV]:
    sub, f = _to_value(d.fun)
    return _lift(sub, Direction.FUN, d.arg.source), AppNodeV(f, d.arg)


def _arg_to_value(d: AppNodeV) -> tuple[Steps, AppNodeV]:
    sub, a = _to_value(d.arg)
    return _lift(sub, Direction.ARG, d.fun.source), AppNodeV(d.fun, a)


def _commute(d: ParDerivationV, delta: DeltaTableV) -> tuple[Steps, ParDerivationV]:
    """Left steps from ``d.source`` and a derivation to the left reduct of ``d.target``."""
    steps: Steps = []
    while True:
        if isinstance(d, DeltaLeafV):
            path, reduct, d = head_contract_v(d)
            steps.append((path, reduct))
            continue
        if isinstance(d, BetaNodeV):
            if isinstance(d.arg.source, Val):
                path, reduct, d = head_contract_v(d)
                steps.append((path, reduct))
            else:
                sub, a = _to_value(d.arg)
                steps += _lift(sub, Direction.ARG, d.source.fun)
                d = BetaNodeV(d.binder, d.body, a)
            continue
        if not isinstance(d, AppNodeV):
            raise ValueError("target has no left reduct")
        y = d.target
        kind = top_redex_v(y, delta)
        if kind is not None:
            # both sides must become values before the redex is a left redex
            sub, d = _fun_to_value(d)
            steps += sub
            sub, d = _arg_to_value(d)
            steps += sub
            dx, dy = d.fun, d.arg
            if kind is RedexKind.BETA:
                x = dx.binder
                reduct = subst_term_v(dx.body.source, dy.source.value, x)
                steps.append((RedexPath((), RedexKind.BETA), reduct))
                return steps, subst_par_cbv(dx.body, dy, x)
            v = delta.lookup(y.fun.value.name, y.arg.value.name)
            steps.append((RedexPath((), RedexKind.DELTA), Val(v)))
            return steps, refl_derivation_v(Val(v))
        if not isinstance(y.fun, Val):
            sub, d1 = _commute(d.fun, delta)
            steps += _lift(sub, Direction.FUN, d.arg.source)
            return steps, AppNodeV(d1, d.arg)
        if left_path_cbv(y.arg, delta) is not None:
            sub, d = _fun_to_value(d)
            steps += sub
            sub, d2 = _commute(d.arg, delta)
            steps += _lift(sub, Direction.ARG, d.fun.source)
            return steps, AppNodeV(d.fun, d2)
        raise ValueError("target has no left reduct")


def _left_contraction(d: ParDerivationV, delta: DeltaTableV) -> Optional[tuple[RedexPath, TermV, ParDerivationV]]:
    """If ``d`` contracts the left redex of its source, split that step off."""
    if isinstance(d, DeltaLeafV):
        return head_contract_v(d)
    if isinstance(d, BetaNodeV):
        if isinstance(d.arg.source, Val):
            return head_contract_v(d)
        r = _left_contraction(d.arg, delta)
        if r is None:
            return None
        path, reduct, rest = r
        fun = d.source.fun
        return path.under(Direction.ARG), AppV(fun, reduct), BetaNodeV(d.binder, d.body, rest)
    if isinstance(d, AppNodeV):
        src = d.source
        if top_redex_v(src, delta) is not None:
            return None
        if not isinstance(src.fun, Val):
            r = _left_contraction(d.fun, delta)
            if r is None:
                return None
            path, reduct, rest = r
            return path.under(Direction.FUN), AppV(reduct, src.arg), AppNodeV(rest, d.arg)
        r = _left_contraction(d.arg, delta)
        if r is None:
            return None
        path, reduct, rest = r
        return path.under(Direction.ARG), AppV(src.fun, reduct), AppNodeV(d.fun, rest)
    return None


def commute_par_left_cbv(
    d: ParDerivationV, z: TermV, delta: DeltaTableV = EMPTY_DELTA_V
) -> tuple[Trace, ParDerivationV]:
    """From ``X => Y`` and ``Y ->L z`` build ``X ->L* Y'`` and ``Y' => z``."""
    replay_derivation_v(d, delta)
    nxt = step_left_cbv(d.target, delta)
    if nxt is None or not alpha_eq_v(nxt, z):
        raise ValueError("z is not the left reduct of the derivation's target")
    steps, rest = _commute(d, delta)
    while (r := _left_contraction(rest, delta)) is not None:
        path, reduct, rest = r
        steps.append((path, reduct))
    return Trace(d.source, tuple(steps)), rest


# -- inversion at abstractions ---------------------------------------------------

@dataclass(frozen=True)
class ReflCaseV:
    pass


@dataclass(frozen=True)
class XiCaseV:
    body: ParDerivationV


def invert_lm_par_cbv(d: ParDerivationV, y: VarName) -> Union[ReflCaseV, XiCaseV]:
    src = d.source
    if not isinstance(d, XiNodeV) or not _is_lm(src):
        raise ValueError("derivation does not start at an abstraction")
    if y != d.binder and y in free_vars_v(src):
        raise ValueError(f"{y} is free in the source, so it cannot be its binder")
    if d.label == 0:
        return ReflCaseV()
    if y == d.binder:
        return XiCaseV(d.body)
    return XiCaseV(swap_derivation_v(d.body, d.binder, y))


# -- absorption ------------------------------------------------------------------

def _unmap_proof(p: SrsProofV, y: VarName) -> SrsProofV:
    match p:
        case SBaseV(Val(LmV(w, b))):
            return SBaseV(b if w == y else swap_v(b, w, y))
        case SLmV(w, sub):
            return sub if w == y else swap_proof_v(sub, w, y)
    raise ValueError("proof is not about abstractions")


def _prepend(source: TermV, steps: Steps, q: SrsProofV) -> SrsProofV:
    """Put left steps ``source -> steps[0] -> ...`` in front of ``q``."""
    for i in range(len(steps) - 1, -1, -1):
        q = SRedV(steps[i - 1][1] if i > 0 else source, q)
    return q


def _absorb(d: ParDerivationV, p: SrsProofV, delta: DeltaTableV) -> SrsProofV:
    match d:
        case ReflLeafV():
            return p
        case DeltaLeafV():
            return SRedV(d.source, p)
        case BetaNodeV():
            steps, rest = _to_value(d.arg)
            steps = _lift(steps, Direction.ARG, d.source.fun)
            d2 = BetaNodeV(d.binder, d.body, rest)
            path, reduct, rest2 = head_contract_v(d2)
            q = SRedV(d2.source, _absorb(rest2, p, delta))
            return _prepend(d.source, steps, q)
        case XiNodeV(y, body):
            if d.label == 0:
                return p
            return SLmV(y, _absorb(body, _unmap_proof(p, y), delta))
        case AppNodeV(dx, dy):
            if isinstance(p, SBaseV):
                if not isinstance(p.term, AppV):
                    raise ValueError("sequence head does not match the derivation target")
                p = SAppV(SBaseV(p.term.fun), SBaseV(p.term.arg))
            if isinstance(p, SAppV):
                return SAppV(_absorb(dx, p.left, delta), _absorb(dy, p.right, delta))
            if isinstance(p, SRedV):
                steps, rest_d = _commute(d, delta)
                return _prepend(d.source, steps, _absorb(rest_d, p.rest, delta))
            raise ValueError("sequence head does not match the derivation target")
    raise MalformedDerivation(f"unknown derivation node {type(d).__name__}", d)


def absorb_into_srs_cbv(d: ParDerivationV, xs: Sequence[TermV], delta: DeltaTableV = EMPTY_DELTA_V) -> list[TermV]:
    replay_derivation_v(d, delta)
    p = srs_proof_cbv(xs, delta)
    if p is None:
        raise ValueError("not a standard reduction sequence")
    if not alpha_eq_v(xs[0], d.target):
        raise ValueError("sequence does not start at the derivation's target")
    return list(_absorb(d, p, delta).terms)


def standardize_proof_cbv(
    chain: Sequence[ParDerivationV], delta: DeltaTableV = EMPTY_DELTA_V, start: Optional[TermV] = None
) -> SrsProofV:
    if not chain:
        if start is None:
            raise ValueError("an empty chain needs an explicit start term")
        return SBaseV(start)
    first = chain[0].source if start is None else start
    end = check_chain_v(first, chain, delta)
    p: SrsProofV = SBaseV(end)
    for d in reversed(chain):
        p = _absorb(d, p, delta)
    return p


def standardize_cbv(
    chain: Sequence[ParDerivationV], delta: DeltaTableV = EMPTY_DELTA_V, start: Optional[TermV] = None
) -> list[TermV]:
    return list(standardize_proof_cbv(chain, delta, start).terms)
