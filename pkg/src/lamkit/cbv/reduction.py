"""One-step call-by-value reduction and left reduction on two-sorted terms.

Paths reuse the call-by-name addresses: ``fun``/``arg`` enter an application
and ``body`` enters an abstraction value, so a path means the same position
before and after embedding.
"""
from __future__ import annotations

from typing import Iterator, Optional

from ..cbn.reduction import Direction, RedexKind, RedexPath, Trace, TraceError
from .syntax import EMPTY_DELTA_V, AppV, CtV, DeltaTableV, LmV, TermV, Val, alpha_eq_v, alpha_key_v, subst_term_v


def top_redex_v(t: TermV, delta: DeltaTableV) -> Optional[RedexKind]:
    if isinstance(t, AppV) and isinstance(t.fun, Val) and isinstance(t.arg, Val):
        f, a = t.fun.value, t.arg.value
        if isinstance(f, LmV):
            return RedexKind.BETA
        if isinstance(f, CtV) and isinstance(a, CtV) and delta.lookup(f.name, a.name) is not None:
            return RedexKind.DELTA
    return None


def contract_top_v(t: TermV, delta: DeltaTableV) -> TermV:
    kind = top_redex_v(t, delta)
    if kind is RedexKind.BETA:
        lm = t.fun.value
        return subst_term_v(lm.body, t.arg.value, lm.binder)
    if kind is RedexKind.DELTA:
        return Val(delta.lookup(t.fun.value.name, t.arg.value.name))
    raise TraceError("no redex at this position")


def contract_v(t: TermV, path: RedexPath, delta: DeltaTableV = EMPTY_DELTA_V) -> TermV:
    def go(u: TermV, i: int) -> TermV:
        if i == len(path.steps):
            if top_redex_v(u, delta) is not path.kind:
                raise TraceError(f"no {path.kind.value} redex at {path}")
            return contract_top_v(u, delta)
        d = path.steps[i]
        if d is Direction.FUN and isinstance(u, AppV):
            return AppV(go(u.fun, i + 1), u.arg)
        if d is Direction.ARG and isinstance(u, AppV):
            return AppV(u.fun, go(u.arg, i + 1))
        if d is Direction.BODY and isinstance(u, Val) and isinstance(u.value, LmV):
            return Val(LmV(u.value.binder, go(u.value.body, i + 1)))
        raise TraceError(f"path {path} does not fit the term")

    return go(t, 0)


def redex_paths_v(t: TermV, delta: DeltaTableV = EMPTY_DELTA_V) -> Iterator[RedexPath]:
    """All CBV redex addresses, outermost first, left before right."""
    kind = top_redex_v(t, delta)
    if kind is not None:
        yield RedexPath((), kind)
    if isinstance(t, AppV):
        for p in redex_paths_v(t.fun, delta):
            yield p.under(Direction.FUN)
        for p in redex_paths_v(t.arg, delta):
            yield p.under(Direction.ARG)
    elif isinstance(t.value, LmV):
        for p in redex_paths_v(t.value.body, delta):
            yield p.under(Direction.BODY)


def step_cbv(t: TermV, delta: DeltaTableV = EMPTY_DELTA_V) -> list[tuple[RedexPath, TermV]]:
    return [(p, contract_v(t, p, delta)) for p in redex_paths_v(t, delta)]


def left_path_cbv(t: TermV, delta: DeltaTableV = EMPTY_DELTA_V) -> Optional[RedexPath]:
    """Address of the left CBV redex: never inside a value."""
    if not isinstance(t, AppV):
        return None
    kind = top_redex_v(t, delta)
    if kind is not None:
        return RedexPath((), kind)
    if not isinstance(t.fun, Val):
        p = left_path_cbv(t.fun, delta)
        return None if p is None else p.under(Direction.FUN)
    # the function is a value, so the argument is next
    p = left_path_cbv(t.arg, delta)
    return None if p is None else p.under(Direction.ARG)


def step_left_cbv(t: TermV, delta: DeltaTableV = EMPTY_DELTA_V) -> Optional[TermV]:
    p = left_path_cbv(t, delta)
    return None if p is None else contract_v(t, p, delta)


def is_normal_cbv(t: TermV, delta: DeltaTableV = EMPTY_DELTA_V) -> bool:
    return next(redex_paths_v(t, delta), None) is None


def left_trace_cbv(t: TermV, delta: DeltaTableV = EMPTY_DELTA_V, max_steps: int = 100) -> Trace:
    start, steps = t, []
    for _ in range(max_steps):
        p = left_path_cbv(t, delta)
        if p is None:
            break
        t = contract_v(t, p, delta)
        steps.append((p, t))
    return Trace(start, tuple(steps))


def replay_trace_cbv(trace: Trace, delta: DeltaTableV = EMPTY_DELTA_V) -> None:
    cur = trace.start
    for i, (path, target) in enumerate(trace.steps):
        got = contract_v(cur, path, delta)
        if not alpha_eq_v(got, target):
            raise TraceError(f"step {i} at {path} does not produce the recorded term")
        cur = target


def is_valid_trace_cbv(trace: Trace, delta: DeltaTableV = EMPTY_DELTA_V, left: bool = False) -> bool:
    try:
        replay_trace_cbv(trace, delta)
    except TraceError:
        return False
    if left:
        cur = trace.start
        for path, target in trace.steps:
            if left_path_cbv(cur, delta) != path:
                return False
            cur = target
    return True


def reachable_within_cbv(source: TermV, target: TermV, bound: int, delta: DeltaTableV = EMPTY_DELTA_V) -> Optional[int]:
    goal = alpha_key_v(target)
    frontier = {alpha_key_v(source): source}
    seen = set(frontier)
    for n in range(bound + 1):
        if goal in frontier:
            return n
        if n == bound:
            break
        nxt = {}
        for t in frontier.values():
            for _, u in step_cbv(t, delta):
                k = alpha_key_v(u)
                if k not in seen:
                    seen.add(k)
                    nxt[k] = u
        frontier = nxt
    return None
