"""Named lambda-terms with constants, and the binding-aware operators on them.

Terms are plain immutable trees. Library equality is alpha-equivalence
(:func:`alpha_eq`), never structural ``==`` on representatives.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Union

_BASE_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_LABEL_RE = re.compile(r"[A-Za-z0-9_:]+\Z")
# "x1_3" style (base ends in a digit or underscore) and "x3" style
_SPLIT_SEP = re.compile(r"(?P<base>[A-Za-z][A-Za-z0-9_]*[0-9_])_(?P<index>[0-9]+)\Z")
_SPLIT_PLAIN = re.compile(r"(?P<base>[A-Za-z](?:[A-Za-z0-9_]*[A-Za-z])?)(?P<index>[0-9]+)\Z")


@dataclass(frozen=True, order=True, slots=True)
class VarName:
    """A variable: identifier base plus a natural-number index."""

    base: str
    index: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.base, str) or not _BASE_RE.match(self.base):
            raise ValueError(f"invalid variable base {self.base!r}")
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"invalid variable index {self.index!r}")

    def __str__(self) -> str:
        awkward = self.base[-1].isdigit() or self.base[-1] == "_"
        if self.index == 0 and not awkward:
            return self.base
        return f"{self.base}{'_' if awkward else ''}{self.index}"

    def __repr__(self) -> str:
        return f"VarName({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "VarName":
        """Inverse of ``str``. Identifiers without trailing digits get index 0, so ``x`` and ``x0`` agree."""
        m = _SPLIT_SEP.match(text) or _SPLIT_PLAIN.match(text)
        if m:
            return cls(m.group("base"), int(m.group("index")))
        return cls(text, 0)


@dataclass(frozen=True, order=True, slots=True)
class ConstName:
    label: str

    def __post_init__(self) -> None:
        if not isinstance(self.label, str) or not _LABEL_RE.match(self.label):
            raise ValueError(f"invalid constant label {self.label!r}")

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"ConstName({self.label!r})"


class HoasTag(Enum):
    """The two extra constants of the encoding language (see :mod:`lamkit.hoas`)."""

    CTAPP = "ctapp"
    CTLM = "ctlm"

    def __str__(self) -> str:
        return self.value


Const = Union[ConstName, HoasTag]


@dataclass(frozen=True, slots=True)
class Var:
    name: VarName


@dataclass(frozen=True, slots=True)
class Ct:
    name: Const


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Lm:
    binder: VarName
    body: "Term"


Term = Union[Var, Ct, App, Lm]
AvoidSet = Iterable[VarName]


def var(text: str) -> Var:
    """Shorthand: ``var("x")`` is ``Var(VarName("x", 0))``."""
    return Var(VarName.parse(text))


def ct(label: str) -> Ct:
    return Ct(ConstName(label))


def lam(binder: str, body: Term) -> Lm:
    return Lm(VarName.parse(binder), body)


def app(fun: Term, *args: Term) -> Term:
    """Left-nested application ``fun a1 a2 ...``."""
    for a in args:
        fun = App(fun, a)
    return fun


# -- alpha-equivalence via locally nameless keys -------------------------------

def alpha_key(t: Term, _scope: tuple = ()) -> tuple:
    """Canonical locally nameless image: bound variables become indices.

    Two terms are alpha-equivalent iff their keys are equal, so keys double as
    hash keys for alpha-classes.
    """
    match t:
        case Var(x):
            for i in range(len(_scope) - 1, -1, -1):
                if _scope[i] == x:
                    return ("B", len(_scope) - 1 - i)
            return ("V", x)
        case Ct(c):
            return ("C", c)
        case App(f, a):
            return ("A", alpha_key(f, _scope), alpha_key(a, _scope))
        case Lm(x, b):
            return ("L", alpha_key(b, _scope + (x,)))
    raise TypeError(f"not a term: {t!r}")


def alpha_eq(t: Term, u: Term) -> bool:
    if t is u:
        return True
    return alpha_key(t) == alpha_key(u)


# -- freshness -----------------------------------------------------------------

def free_vars(t: Term) -> frozenset[VarName]:
    match t:
        case Var(x):
            return frozenset((x,))
        case Ct():
            return frozenset()
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Lm(x, b):
            return free_vars(b) - {x}
    raise TypeError(f"not a term: {t!r}")


def fresh_in(x: VarName, t: Term) -> bool:
    match t:
        case Var(y):
            return x != y
        case Ct():
            return True
        case App(f, a):
            return fresh_in(x, f) and fresh_in(x, a)
        case Lm(y, b):
            return x == y or fresh_in(x, b)
    raise TypeError(f"not a term: {t!r}")


def all_vars(t: Term) -> frozenset[VarName]:
    """Every variable name in ``t``, free or bound (binders included)."""
    match t:
        case Var(x):
            return frozenset((x,))
        case Ct():
            return frozenset()
        case App(f, a):
            return all_vars(f) | all_vars(a)
        case Lm(x, b):
            return all_vars(b) | {x}
    raise TypeError(f"not a term: {t!r}")


def fresh_var(avoid: AvoidSet, hint: Union[str, VarName] = "x") -> VarName:
    """Smallest-index variable with the hint's base that is not in ``avoid``."""
    base = hint.base if isinstance(hint, VarName) else hint
    avoid = avoid if isinstance(avoid, (set, frozenset)) else set(avoid)
    i = 0
    while VarName(base, i) in avoid:
        i += 1
    return VarName(base, i)


# -- swapping ------------------------------------------------------------------

def swap_var(x: VarName, z1: VarName, z2: VarName) -> VarName:
    if x == z1:
        return z2
    if x == z2:
        return z1
    return x


def swap(t: Term, z1: VarName, z2: VarName) -> Term:
    """Transpose ``z1`` and ``z2`` everywhere, binders included."""
    if z1 == z2:
        return t
    match t:
        case Var(x):
            return Var(swap_var(x, z1, z2))
        case Ct():
            return t
        case App(f, a):
            return App(swap(f, z1, z2), swap(a, z1, z2))
        case Lm(x, b):
            return Lm(swap_var(x, z1, z2), swap(b, z1, z2))
    raise TypeError(f"not a term: {t!r}")


# -- substitution --------------------------------------------------------------

def subst(t: Term, u: Term, y: VarName) -> Term:
    """Capture-avoiding ``t[u/y]``.

    Binders are renamed lazily: only when they would capture a free variable
    of ``u``.
    """
    return _subst(t, u, y, free_vars(u))


def _subst(t: Term, u: Term, y: VarName, fvu: frozenset) -> Term:
    match t:
        case Var(x):
            return u if x == y else t
        case Ct():
            return t
        case App(f, a):
            f2 = _subst(f, u, y, fvu)
            a2 = _subst(a, u, y, fvu)
            return t if f2 is f and a2 is a else App(f2, a2)
        case Lm(x, b):
            if x == y:
                return t
            fvb = free_vars(b)
            if y not in fvb:
                return t
            if x in fvu:
                z = fresh_var(fvb | fvu | {y}, x)
                b = _subst(b, Var(z), x, frozenset((z,)))
                x = z
            return Lm(x, _subst(b, u, y, fvu))
    raise TypeError(f"not a term: {t!r}")


def psubst(t: Term, sigma: Mapping[VarName, Optional[Term]]) -> Term:
    """Simultaneous capture-avoiding substitution.

    Variables outside the map, or mapped to ``None``, are left alone.
    """
    sigma = {k: v for k, v in sigma.items() if v is not None}
    if not sigma:
        return t
    return _psubst(t, sigma)


def _psubst(t: Term, sigma: dict) -> Term:
    match t:
        case Var(x):
            return sigma.get(x, t)
        case Ct():
            return t
        case App(f, a):
            return App(_psubst(f, sigma), _psubst(a, sigma))
        case Lm(x, b):
            fvb = free_vars(b)
            inner = {k: v for k, v in sigma.items() if k != x and k in fvb}
            if not inner:
                return t
            range_fv = frozenset().union(*(free_vars(v) for v in inner.values()))
            if x in range_fv:
                z = fresh_var(fvb | range_fv | set(inner), x)
                b = subst(b, Var(z), x)
                x = z
            return Lm(x, _psubst(b, inner))
    raise TypeError(f"not a term: {t!r}")


# -- measures ------------------------------------------------------------------

def depth(t: Term) -> int:
    """Height of the tree; leaves have depth 1."""
    match t:
        case Var() | Ct():
            return 1
        case App(f, a):
            return 1 + max(depth(f), depth(a))
        case Lm(_, b):
            return 1 + depth(b)
    raise TypeError(f"not a term: {t!r}")


def size(t: Term) -> int:
    """Number of constructor nodes."""
    match t:
        case Var() | Ct():
            return 1
        case App(f, a):
            return 1 + size(f) + size(a)
        case Lm(_, b):
            return 1 + size(b)
    raise TypeError(f"not a term: {t!r}")


def count_occ(t: Term, x: VarName) -> int:
    """Number of free occurrences of ``x`` in ``t``."""
    match t:
        case Var(y):
            return 1 if x == y else 0
        case Ct():
            return 0
        case App(f, a):
            return count_occ(f, x) + count_occ(a, x)
        case Lm(y, b):
            return 0 if x == y else count_occ(b, x)
    raise TypeError(f"not a term: {t!r}")


# -- binder destructor ---------------------------------------------------------

def unbind(t: Term, avoid: AvoidSet) -> tuple[VarName, Term]:
    """Open an abstraction with a binder outside ``avoid``.

    Returns ``(y, B)`` with ``Lm y B`` alpha-equivalent to ``t``. The original
    binder is kept whenever it is already outside ``avoid``.
    """
    if not isinstance(t, Lm):
        raise TypeError(f"unbind expects an abstraction, got {type(t).__name__}")
    avoid = avoid if isinstance(avoid, (set, frozenset)) else frozenset(avoid)
    if t.binder not in avoid:
        return t.binder, t.body
    y = fresh_var(set(avoid) | free_vars(t), t.binder)
    return y, subst(t.body, Var(y), t.binder)


def is_value(t: Term) -> bool:
    return isinstance(t, (Var, Ct, Lm))
