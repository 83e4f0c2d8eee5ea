"""Exhaustive and random term corpora for the property suites."""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .delta import EMPTY_DELTA, DeltaTable
from .terms import App, ConstName, Ct, Lm, Term, Var, VarName, free_vars, subst

_CONST_LABELS = "cdefgh"


@dataclass(frozen=True)
class CorpusSpec:
    """Bounds for a corpus.

    ``max_nodes`` bounds exhaustive enumeration; ``random_max_nodes`` and
    ``samples`` drive the random cases. A ``max_nodes`` of 0 is an empty
    corpus and switches the random cases off too.
    """

    max_nodes: int = 7
    n_vars: int = 2
    n_consts: int = 1
    calculus: str = "cbn"
    delta: DeltaTable = field(default=EMPTY_DELTA)
    seed: int = 0
    samples: int = 500
    random_max_nodes: int = 12

    def __post_init__(self) -> None:
        if self.max_nodes < 0 or self.n_vars < 0 or self.n_consts < 0:
            raise ValueError("corpus bounds must be natural numbers")
        if self.calculus not in ("cbn", "cbv"):
            raise ValueError(f"unknown calculus {self.calculus!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit natural number")

    def with_(self, **changes) -> "CorpusSpec":
        return replace(self, **changes)

    @property
    def empty(self) -> bool:
        return self.max_nodes == 0

    def variables(self) -> list[VarName]:
        return [VarName("x", i) for i in range(self.n_vars)]

    def constants(self) -> list[ConstName]:
        """The ``n_consts`` generic constants followed by those the delta table mentions."""
        out = [ConstName(const_label(i)) for i in range(self.n_consts)]
        for c in self.delta.constants():
            if c not in out:
                out.append(c)
        return out

    def rng(self, salt: int = 0) -> random.Random:
        return random.Random(self.seed * 1_000_003 + salt)


def const_label(i: int) -> str:
    return _CONST_LABELS[i] if i < len(_CONST_LABELS) else f"c{i}"


def binder_name(level: int) -> VarName:
    """Binder used by the enumerator at nesting depth ``level``."""
    return VarName("y", level)


def enum_terms(spec: CorpusSpec) -> list[Term]:
    """One representative per alpha-class with at most ``spec.max_nodes`` nodes.

    Ordered by size, then leaves before abstractions before applications.
    """
    fvars = tuple(spec.variables())
    consts = tuple(spec.constants())
    out: list[Term] = []
    for n in range(1, spec.max_nodes + 1):
        out.extend(_exact(n, 0, fvars, consts))
    return out


def iter_terms(spec: CorpusSpec) -> Iterator[Term]:
    fvars = tuple(spec.variables())
    consts = tuple(spec.constants())
    for n in range(1, spec.max_nodes + 1):
        yield from _exact(n, 0, fvars, consts)


@lru_cache(maxsize=None)
def _exact(n: int, level: int, fvars: tuple, consts: tuple) -> tuple[Term, ...]:
    if n == 1:
        leaves: list[Term] = [Var(v) for v in fvars]
        leaves += [Ct(c) for c in consts]
        leaves += [Var(binder_name(j)) for j in range(level)]
        return tuple(leaves)
    out: list[Term] = [Lm(binder_name(level), b) for b in _exact(n - 1, level + 1, fvars, consts)]
    for a in range(1, n - 1):
        funs = _exact(a, level, fvars, consts)
        args = _exact(n - 1 - a, level, fvars, consts)
        out += [App(f, x) for f in funs for x in args]
    return tuple(out)


def count_terms(max_nodes: int, n_vars: int, n_consts: int) -> int:
    return sum(len(_exact(n, 0, tuple(VarName("x", i) for i in range(n_vars)),
                          tuple(ConstName(const_label(i)) for i in range(n_consts))))
               for n in range(1, max_nodes + 1))


# -- random generation ---------------------------------------------------------

def random_term(
    spec: CorpusSpec,
    rng: Optional[random.Random] = None,
    max_nodes: Optional[int] = None,
    p_lambda: float = 0.3,
) -> Term:
    """A random term with at most ``max_nodes`` nodes (default ``random_max_nodes``).

    Binders are drawn from a small pool that overlaps the free variables, so
    shadowing and capture-prone shapes show up regularly.
    """
    rng = rng if rng is not None else random.Random(spec.seed)
    bound = max_nodes if max_nodes is not None else spec.random_max_nodes
    if bound < 1:
        raise ValueError("max_nodes must be at least 1")
    fvars = spec.variables()
    consts = spec.constants()
    binders = fvars + [VarName("y", 0), VarName("y", 1)]
    n = rng.randint(1, bound)
    return _gen(n, (), rng, fvars, consts, binders, p_lambda)


def _gen(n: int, scope: tuple, rng: random.Random, fvars, consts, binders, p_lambda) -> Term:
    if n == 1:
        options = len(fvars) + len(consts)
        if scope and (options == 0 or rng.random() < 0.5):
            return Var(rng.choice(scope))
        if options == 0:
            return Var(binders[0])
        i = rng.randrange(options)
        return Var(fvars[i]) if i < len(fvars) else Ct(consts[i - len(fvars)])
    if n == 2 or rng.random() < p_lambda:
        x = rng.choice(binders)
        return Lm(x, _gen(n - 1, scope + (x,), rng, fvars, consts, binders, p_lambda))
    a = rng.randint(1, n - 2)
    return App(_gen(a, scope, rng, fvars, consts, binders, p_lambda),
               _gen(n - 1 - a, scope, rng, fvars, consts, binders, p_lambda))


def alpha_variant(t: Term, rng: random.Random, pool: Sequence[VarName]) -> Term:
    """Rename binders at random to names from ``pool`` where that is admissible."""
    match t:
        case Var() | Ct():
            return t
        case App(f, a):
            return App(alpha_variant(f, rng, pool), alpha_variant(a, rng, pool))
        case Lm(x, b):
            fvb = free_vars(b)
            choices = [z for z in pool if z == x or z not in fvb]
            z = rng.choice(choices) if choices else x
            body = b if z == x else subst(b, Var(z), x)
            return Lm(z, alpha_variant(body, rng, pool))
    raise TypeError(f"not a term: {t!r}")


def default_pool(t: Term, extra: int = 3) -> list[VarName]:
    from .terms import all_vars

    return sorted(all_vars(t)) + [VarName("z", i) for i in range(extra)]
