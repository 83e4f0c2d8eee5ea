"""Two-sorted terms: values (variables, constants, abstractions) and terms.

Every unsorted term has exactly one two-sorted reading, so
:func:`to_unsorted` and :func:`from_unsorted` are mutually inverse. The
operators here work on the two-sorted trees directly; the embedding is kept
for printing and as a test oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from ..delta import DeltaTable
from ..terms import App, Const, Ct, Lm, Term, Var, VarName, fresh_var, swap_var


@dataclass(frozen=True, slots=True)
class VarV:
    name: VarName


@dataclass(frozen=True, slots=True)
class CtV:
    name: Const


@dataclass(frozen=True, slots=True)
class LmV:
    binder: VarName
    body: "TermV"


ValueV = Union[VarV, CtV, LmV]


@dataclass(frozen=True, slots=True)
class Val:
    value: ValueV


@dataclass(frozen=True, slots=True)
class AppV:
    fun: "TermV"
    arg: "TermV"


TermV = Union[Val, AppV]
AnyV = Union[ValueV, TermV]


# -- embedding -------------------------------------------------------------------

def to_unsorted(t: AnyV) -> Term:
    match t:
        case Val(v):
            return to_unsorted(v)
        case AppV(f, a):
            return App(to_unsorted(f), to_unsorted(a))
        case VarV(x):
            return Var(x)
        case CtV(c):
            return Ct(c)
        case LmV(x, b):
            return Lm(x, to_unsorted(b))
    raise TypeError(f"not a two-sorted term: {t!r}")


def from_unsorted(t: Term) -> TermV:
    """The unique two-sorted term whose embedding is ``t``."""
    if isinstance(t, App):
        return AppV(from_unsorted(t.fun), from_unsorted(t.arg))
    return Val(value_from_unsorted(t))


def value_from_unsorted(t: Term) -> ValueV:
    match t:
        case Var(x):
            return VarV(x)
        case Ct(c):
            return CtV(c)
        case Lm(x, b):
            return LmV(x, from_unsorted(b))
    raise ValueError("an application is not a value")


# -- smart constructors ----------------------------------------------------------

def vvar(name: Union[str, VarName]) -> Val:
    return Val(VarV(name if isinstance(name, VarName) else VarName.parse(name)))


def vct(label: Union[str, Const]) -> Val:
    from ..terms import ConstName

    return Val(CtV(label if not isinstance(label, str) else ConstName(label)))


def vlam(binder: Union[str, VarName], body: TermV) -> Val:
    return Val(LmV(binder if isinstance(binder, VarName) else VarName.parse(binder), body))


def vapp(fun: TermV, *args: TermV) -> TermV:
    for a in args:
        fun = AppV(fun, a)
    return fun


# -- alpha-equivalence and free variables ----------------------------------------

def alpha_key_v(t: AnyV, _scope: tuple = ()) -> tuple:
    """Locally nameless key; two-sorted terms are alpha-equivalent iff keys are equal."""
    match t:
        case Val(v):
            return ("Val", alpha_key_v(v, _scope))
        case AppV(f, a):
            return ("A", alpha_key_v(f, _scope), alpha_key_v(a, _scope))
        case VarV(x):
            for i in range(len(_scope) - 1, -1, -1):
                if _scope[i] == x:
                    return ("B", len(_scope) - 1 - i)
            return ("V", x)
        case CtV(c):
            return ("C", c)
        case LmV(x, b):
            return ("L", alpha_key_v(b, _scope + (x,)))
    raise TypeError(f"not a two-sorted term: {t!r}")


def alpha_eq_v(t: AnyV, u: AnyV) -> bool:
    return t is u or alpha_key_v(t) == alpha_key_v(u)


def free_vars_v(t: AnyV) -> frozenset[VarName]:
    match t:
        case Val(v):
            return free_vars_v(v)
        case AppV(f, a):
            return free_vars_v(f) | free_vars_v(a)
        case VarV(x):
            return frozenset((x,))
        case CtV():
            return frozenset()
        case LmV(x, b):
            return free_vars_v(b) - {x}
    raise TypeError(f"not a two-sorted term: {t!r}")


def fresh_in_v(x: VarName, t: AnyV) -> bool:
    return x not in free_vars_v(t)


def is_val(t: TermV) -> bool:
    return isinstance(t, Val)


# -- swapping and substitution ---------------------------------------------------

def swap_v(t: AnyV, z1: VarName, z2: VarName) -> AnyV:
    """Transpose two names everywhere, binders included, in either sort."""
    if z1 == z2:
        return t
    match t:
        case Val(v):
            return Val(swap_v(v, z1, z2))
        case AppV(f, a):
            return AppV(swap_v(f, z1, z2), swap_v(a, z1, z2))
        case VarV(x):
            return VarV(swap_var(x, z1, z2))
        case CtV():
            return t
        case LmV(x, b):
            return LmV(swap_var(x, z1, z2), swap_v(b, z1, z2))
    raise TypeError(f"not a two-sorted term: {t!r}")


def subst_term_v(t: TermV, v: ValueV, y: VarName) -> TermV:
    """``t[v/y]`` on terms."""
    return _subst(t, v, y, free_vars_v(v))


def subst_value_v(w: ValueV, v: ValueV, y: VarName) -> ValueV:
    """``w[v/y]`` on values."""
    return _subst(w, v, y, free_vars_v(v))


def _subst(t: AnyV, v: ValueV, y: VarName, fvv: frozenset) -> AnyV:
    match t:
        case Val(w):
            return Val(_subst(w, v, y, fvv))
        case AppV(f, a):
            return AppV(_subst(f, v, y, fvv), _subst(a, v, y, fvv))
        case VarV(x):
            return v if x == y else t
        case CtV():
            return t
        case LmV(x, b):
            if x == y:
                return t
            fvb = free_vars_v(b)
            if y not in fvb:
                return t
            if x in fvv:
                z = fresh_var(fvb | fvv | {y}, x)
                b = _subst(b, VarV(z), x, frozenset((z,)))
                x = z
            return LmV(x, _subst(b, v, y, fvv))
    raise TypeError(f"not a two-sorted term: {t!r}")


def count_occ_v(t: AnyV, x: VarName) -> int:
    match t:
        case Val(v):
            return count_occ_v(v, x)
        case AppV(f, a):
            return count_occ_v(f, x) + count_occ_v(a, x)
        case VarV(z):
            return 1 if z == x else 0
        case CtV():
            return 0
        case LmV(z, b):
            return 0 if z == x else count_occ_v(b, x)
    raise TypeError(f"not a two-sorted term: {t!r}")


def depth_v(t: AnyV) -> int:
    """Depth of the embedded unsorted tree; the ``Val`` wrapper adds nothing."""
    match t:
        case Val(v):
            return depth_v(v)
        case AppV(f, a):
            return 1 + max(depth_v(f), depth_v(a))
        case VarV() | CtV():
            return 1
        case LmV(_, b):
            return 1 + depth_v(b)
    raise TypeError(f"not a two-sorted term: {t!r}")


# -- delta tables with value results --------------------------------------------

class DeltaTableV:
    """Finite partial map ``(c1, c2) -> closed value``."""

    __slots__ = ("_rules",)

    def __init__(self, rules: Optional[Mapping[tuple[Const, Const], ValueV]] = None):
        table: dict = {}
        for (c1, c2), result in (rules or {}).items():
            if isinstance(result, (Val, AppV)):
                raise ValueError(f"delta result for ({c1}, {c2}) must be a value")
            if free_vars_v(result):
                raise ValueError(f"delta result for ({c1}, {c2}) must be closed")
            table[(c1, c2)] = result
        self._rules = table

    @classmethod
    def from_unsorted(cls, delta: DeltaTable) -> "DeltaTableV":
        """Read every result of an unsorted table as a value; applications are rejected."""
        return cls({pair: value_from_unsorted(z) for pair, z in delta})

    def to_unsorted(self) -> DeltaTable:
        return DeltaTable({pair: to_unsorted(v) for pair, v in self._rules.items()})

    def lookup(self, c1: Const, c2: Const) -> Optional[ValueV]:
        return self._rules.get((c1, c2))

    def __iter__(self) -> Iterator:
        return iter(self._rules.items())

    def __len__(self) -> int:
        return len(self._rules)

    def __bool__(self) -> bool:
        return bool(self._rules)

    def __repr__(self) -> str:
        return f"DeltaTableV({len(self._rules)} rules)"

    def constants(self) -> list[Const]:
        return self.to_unsorted().constants()


EMPTY_DELTA_V = DeltaTableV()
