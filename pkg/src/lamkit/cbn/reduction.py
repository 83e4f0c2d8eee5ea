"""One-step call-by-name reduction, left reduction and addressed traces."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from ..delta import EMPTY_DELTA, DeltaTable
from ..terms import App, Ct, Lm, Term, Var, alpha_eq, alpha_key, subst


class Direction(Enum):
    FUN = "fun"
    ARG = "arg"
    BODY = "body"


class RedexKind(Enum):
    BETA = "beta"
    DELTA = "delta"


@dataclass(frozen=True)
class RedexPath:
    """Address of a redex: directions from the root, plus the redex kind."""

    steps: tuple[Direction, ...]
    kind: RedexKind

    def under(self, d: Direction) -> "RedexPath":
        return RedexPath((d,) + self.steps, self.kind)

    def __str__(self) -> str:
        where = "/".join(s.value for s in self.steps) or "top"
        return f"{self.kind.value}@{where}"


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class Trace:
    """A start term and a list of ``(path, reduct)`` steps."""

    start: Term
    steps: tuple[tuple[RedexPath, Term], ...] = field(default=())

    @property
    def terms(self) -> list[Term]:
        return [self.start] + [t for _, t in self.steps]

    @property
    def end(self) -> Term:
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)


def top_redex(t: Term, delta: DeltaTable) -> Optional[RedexKind]:
    if isinstance(t, App):
        if isinstance(t.fun, Lm):
            return RedexKind.BETA
        if isinstance(t.fun, Ct) and isinstance(t.arg, Ct):
            if delta.lookup(t.fun.name, t.arg.name) is not None:
                return RedexKind.DELTA
    return None


def contract_top(t: Term, delta: DeltaTable) -> Term:
    kind = top_redex(t, delta)
    if kind is RedexKind.BETA:
        return subst(t.fun.body, t.arg, t.fun.binder)
    if kind is RedexKind.DELTA:
        return delta.lookup(t.fun.name, t.arg.name)
    raise TraceError("no redex at this position")


def contract(t: Term, path: RedexPath, delta: DeltaTable = EMPTY_DELTA) -> Term:
    """Contract the redex at ``path``; raises :class:`TraceError` if there is none."""

    def go(u: Term, i: int) -> Term:
        if i == len(path.steps):
            if top_redex(u, delta) is not path.kind:
                raise TraceError(f"no {path.kind.value} redex at {path}")
            return contract_top(u, delta)
        d = path.steps[i]
        if d is Direction.FUN and isinstance(u, App):
            return App(go(u.fun, i + 1), u.arg)
        if d is Direction.ARG and isinstance(u, App):
            return App(u.fun, go(u.arg, i + 1))
        if d is Direction.BODY and isinstance(u, Lm):
            return Lm(u.binder, go(u.body, i + 1))
        raise TraceError(f"path {path} does not fit the term")

    return go(t, 0)


def redex_paths(t: Term, delta: DeltaTable = EMPTY_DELTA) -> Iterator[RedexPath]:
    """All redex addresses, outermost first, left before right."""
    kind = top_redex(t, delta)
    if kind is not None:
        yield RedexPath((), kind)
    if isinstance(t, App):
        for p in redex_paths(t.fun, delta):
            yield p.under(Direction.FUN)
        for p in redex_paths(t.arg, delta):
            yield p.under(Direction.ARG)
    elif isinstance(t, Lm):
        for p in redex_paths(t.body, delta):
            yield p.under(Direction.BODY)


def step_cbn(t: Term, delta: DeltaTable = EMPTY_DELTA) -> list[tuple[RedexPath, Term]]:
    """Every one-step reduct, with the address of the contracted redex."""
    return [(p, contract(t, p, delta)) for p in redex_paths(t, delta)]


def left_path(t: Term, delta: DeltaTable = EMPTY_DELTA) -> Optional[RedexPath]:
    """Address of the left-reduction redex, never under a binder."""
    kind = top_redex(t, delta)
    if kind is not None:
        return RedexPath((), kind)
    if isinstance(t, App):
        p = left_path(t.fun, delta)
        if p is not None:
            return p.under(Direction.FUN)
        # the argument is only entered once the function is a variable or constant
        if isinstance(t.fun, (Var, Ct)):
            p = left_path(t.arg, delta)
            if p is not None:
                return p.under(Direction.ARG)
    return None


def step_left(t: Term, delta: DeltaTable = EMPTY_DELTA) -> Optional[Term]:
    p = left_path(t, delta)
    return None if p is None else contract(t, p, delta)


def normal_order_path(t: Term, delta: DeltaTable = EMPTY_DELTA) -> Optional[RedexPath]:
    """Leftmost-outermost redex, descending under binders."""
    return next(redex_paths(t, delta), None)


def is_normal(t: Term, delta: DeltaTable = EMPTY_DELTA) -> bool:
    return normal_order_path(t, delta) is None


def normalize_bounded(t: Term, delta: DeltaTable = EMPTY_DELTA, max_steps: int = 1000) -> Optional[Term]:
    """Normal-order normalization; ``None`` if no normal form within the bound."""
    for _ in range(max_steps + 1):
        p = normal_order_path(t, delta)
        if p is None:
            return t
        t = contract(t, p, delta)
    return None


def left_trace(t: Term, delta: DeltaTable = EMPTY_DELTA, max_steps: int = 100) -> Trace:
    """Follow left reduction from ``t`` for at most ``max_steps`` steps."""
    start, steps = t, []
    for _ in range(max_steps):
        p = left_path(t, delta)
        if p is None:
            break
        t = contract(t, p, delta)
        steps.append((p, t))
    return Trace(start, tuple(steps))


def replay_trace(trace: Trace, delta: DeltaTable = EMPTY_DELTA) -> None:
    """Check every step of ``trace``; raise :class:`TraceError` on the first bad one."""
    cur = trace.start
    for i, (path, target) in enumerate(trace.steps):
        got = contract(cur, path, delta)
        if not alpha_eq(got, target):
            raise TraceError(f"step {i} at {path} does not produce the recorded term")
        cur = target


def is_valid_trace(trace: Trace, delta: DeltaTable = EMPTY_DELTA, left: bool = False) -> bool:
    try:
        replay_trace(trace, delta)
    except TraceError:
        return False
    if left:
        cur = trace.start
        for path, target in trace.steps:
            if left_path(cur, delta) != path:
                return False
            cur = target
    return True


def reachable_within(source: Term, target: Term, bound: int, delta: DeltaTable = EMPTY_DELTA) -> Optional[int]:
    """Fewest one-step reductions from ``source`` to ``target``, if at most ``bound``."""
    goal = alpha_key(target)
    frontier = {alpha_key(source): source}
    seen = set(frontier)
    for n in range(bound + 1):
        if goal in frontier:
            return n
        if n == bound:
            break
        nxt = {}
        for t in frontier.values():
            for _, u in step_cbn(t, delta):
                k = alpha_key(u)
                if k not in seen:
                    seen.add(k)
                    nxt[k] = u
        frontier = nxt
    return None
