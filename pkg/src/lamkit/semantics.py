"""Interpretation of terms in semantic domains, and normalization by evaluation.

:func:`sem` interprets a term in any domain that provides constants,
application and a way to turn a host function into an element. The NbE part
is one concrete environment model. Its closures are defunctionalized, so
applying an abstraction is just evaluating the body in an extended
environment. Evaluation runs on explicit fuel. Running out is reported as
:data:`INDETERMINATE`, never as an answer.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Generic, Mapping, Optional, TypeVar, Union

from .delta import EMPTY_DELTA, DeltaTable
from .terms import App, Const, Ct, Lm, Term, Var, VarName, alpha_eq, free_vars, fresh_var, unbind

S = TypeVar("S")


@dataclass(frozen=True)
class SemDomain(Generic[S]):
    ct: Callable[[Const], S]
    app: Callable[[S, S], S]
    lm: Callable[[Callable[[S], S]], S]
    s_eq: Callable[[S, S], bool] = lambda a, b: a == b
    name: str = "domain"


class Valuation(Generic[S]):
    """A total map from variables: finitely many overrides over a fallback."""

    __slots__ = ("_fallback", "_overrides")

    def __init__(self, fallback: Callable[[VarName], S], overrides: Optional[Mapping[VarName, S]] = None):
        self._fallback = fallback
        self._overrides = dict(overrides or {})

    def __call__(self, x: VarName) -> S:
        if x in self._overrides:
            return self._overrides[x]
        return self._fallback(x)

    def update(self, x: VarName, s: S) -> "Valuation[S]":
        """``rho[x <- s]``; the receiver is left unchanged."""
        ov = dict(self._overrides)
        ov[x] = s
        return Valuation(self._fallback, ov)

    @property
    def overridden(self) -> frozenset[VarName]:
        return frozenset(self._overrides)

    @classmethod
    def constant(cls, s: S) -> "Valuation[S]":
        return cls(lambda _x: s)


def sem(domain: SemDomain[S], t: Term, rho: Valuation[S]) -> S:
    match t:
        case Var(x):
            return rho(x)
        case Ct(c):
            return domain.ct(c)
        case App(f, a):
            return domain.app(sem(domain, f, rho), sem(domain, a, rho))
        case Lm():
            x, body = unbind(t, free_vars(t) | rho.overridden)
            return domain.lm(lambda s: sem(domain, body, rho.update(x, s)))
    raise TypeError(f"not a term: {t!r}")


def one_point_domain() -> SemDomain[tuple]:
    return SemDomain(ct=lambda c: (), app=lambda a, b: (), lm=lambda f: (), name="one-point")


def syntax_domain() -> SemDomain[Callable[[int], tuple]]:
    """Elements are functions from binder depth to locally nameless keys.

    ``sem`` in this domain under :func:`syntax_valuation` gives ``alpha_key``
    of the term at depth 0, so equality is exactly alpha-equivalence. It is a
    sharp probe for the substitution and irrelevance properties.
    """

    def lm(f):
        def at(n: int) -> tuple:
            bound = lambda m: ("B", m - n - 1)  # noqa: E731
            return ("L", f(bound)(n + 1))

        return at

    return SemDomain(
        ct=lambda c: (lambda n: ("C", c)),
        app=lambda s1, s2: (lambda n: ("A", s1(n), s2(n))),
        lm=lm,
        s_eq=lambda s1, s2: s1(0) == s2(0),
        name="syntax",
    )


def syntax_valuation() -> Valuation:
    return Valuation(lambda x: (lambda n: ("V", x)))


# -- normalization by evaluation -------------------------------------------------

class _Indeterminate:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INDETERMINATE"

    def __bool__(self) -> bool:
        return False


INDETERMINATE = _Indeterminate()


class _OutOfFuel(Exception):
    pass


@dataclass
class Fuel:
    remaining: int

    def __post_init__(self) -> None:
        if self.remaining <= 0:
            raise ValueError("fuel must be positive")

    def burn(self) -> None:
        if self.remaining <= 0:
            raise _OutOfFuel
        self.remaining -= 1


def _fuel(fuel: Union[Fuel, int]) -> Fuel:
    return Fuel(fuel) if isinstance(fuel, int) else fuel


@dataclass(frozen=True)
class NVar:
    name: VarName


@dataclass(frozen=True)
class NCt:
    name: Const


@dataclass(frozen=True)
class NApp:
    fun: "Neutral"
    arg: "NbeValue"


NeutralTerm = Union[NVar, NCt, NApp]


@dataclass(frozen=True)
class Neutral:
    term: NeutralTerm


@dataclass(frozen=True)
class Closure:
    binder: VarName
    body: Term
    env: Valuation = field(compare=False)


NbeValue = Union[Neutral, Closure]


def identity_valuation() -> Valuation:
    """Every variable denotes itself as a neutral value."""
    return Valuation(lambda x: Neutral(NVar(x)))


def _eval(t: Term, rho: Valuation, delta: DeltaTable, fuel: Fuel) -> NbeValue:
    fuel.burn()
    match t:
        case Var(x):
            return rho(x)
        case Ct(c):
            return Neutral(NCt(c))
        case App(f, a):
            return _apply(_eval(f, rho, delta, fuel), _eval(a, rho, delta, fuel), delta, fuel)
        case Lm(x, b):
            return Closure(x, b, rho)
    raise TypeError(f"not a term: {t!r}")


def _apply(f: NbeValue, a: NbeValue, delta: DeltaTable, fuel: Fuel) -> NbeValue:
    fuel.burn()
    if isinstance(f, Closure):
        return _eval(f.body, f.env.update(f.binder, a), delta, fuel)
    n = f.term
    if isinstance(n, NCt) and isinstance(a, Neutral) and isinstance(a.term, NCt):
        z = delta.lookup(n.name, a.term.name)
        if z is not None:
            # results are closed, so the environment is irrelevant
            return _eval(z, identity_valuation(), delta, fuel)
    return Neutral(NApp(f, a))


def _reify(v: NbeValue, avoid: frozenset, delta: DeltaTable, fuel: Fuel) -> Term:
    fuel.burn()
    if isinstance(v, Closure):
        y = v.binder if v.binder not in avoid else fresh_var(avoid, v.binder)
        body = _apply(v, Neutral(NVar(y)), delta, fuel)
        return Lm(y, _reify(body, avoid | {y}, delta, fuel))
    n = v.term
    match n:
        case NVar(x):
            return Var(x)
        case NCt(c):
            return Ct(c)
        case NApp(f, a):
            return App(_reify(f, avoid, delta, fuel), _reify(a, avoid, delta, fuel))
    raise TypeError(f"not a value: {v!r}")


def nbe_eval(t: Term, rho: Optional[Valuation] = None, delta: DeltaTable = EMPTY_DELTA, fuel: Union[Fuel, int] = 256):
    """Evaluate ``t``; returns a value or :data:`INDETERMINATE` if fuel runs out."""
    rho = rho if rho is not None else identity_valuation()
    try:
        return _eval(t, rho, delta, _fuel(fuel))
    except (_OutOfFuel, RecursionError):
        return INDETERMINATE


def reify(v: NbeValue, avoid: frozenset = frozenset(), delta: DeltaTable = EMPTY_DELTA, fuel: Union[Fuel, int] = 256):
    """Read a value back as a term, choosing binders outside ``avoid``.

    ``avoid`` must contain every variable the value can mention freely,
    otherwise a binder may capture it.
    """
    try:
        return _reify(v, frozenset(avoid), delta, _fuel(fuel))
    except (_OutOfFuel, RecursionError):
        return INDETERMINATE


def normalize_nbe(t: Term, delta: DeltaTable = EMPTY_DELTA, fuel: Union[Fuel, int] = 256):
    """Beta-delta normal form of ``t``, or :data:`INDETERMINATE`."""
    f = _fuel(fuel)
    try:
        v = _eval(t, identity_valuation(), delta, f)
        return _reify(v, free_vars(t), delta, f)
    except (_OutOfFuel, RecursionError):
        return INDETERMINATE


class Verdict(enum.Enum):
    CONFIRMED = "confirmed"
    REFUTED = "refuted"
    INDETERMINATE = "indeterminate"


def check_soundness(X: Term, Y: Term, delta: DeltaTable = EMPTY_DELTA, fuel: Union[Fuel, int] = 256) -> Verdict:
    """Compare the NbE denotations of two terms (each gets its own fuel)."""
    budget = fuel.remaining if isinstance(fuel, Fuel) else fuel
    nx = normalize_nbe(X, delta, budget)
    ny = normalize_nbe(Y, delta, budget)
    if nx is INDETERMINATE or ny is INDETERMINATE:
        return Verdict.INDETERMINATE
    return Verdict.CONFIRMED if alpha_eq(nx, ny) else Verdict.REFUTED


# -- two-sorted interpretation ---------------------------------------------------

@dataclass(frozen=True)
class SemDomain2(Generic[S]):
    """Carriers for terms and values: ``val`` injects values into terms."""

    val: Callable
    app: Callable
    ct: Callable
    lm: Callable
    s_eq: Callable = lambda a, b: a == b
    name: str = "domain2"


def sem_two_sorted(domain: SemDomain2, t, rho: Valuation):
    """Interpret a two-sorted term (or value) under a valuation into the value carrier."""
    from .cbv.syntax import AppV, CtV, LmV, Val, VarV, free_vars_v

    match t:
        case VarV(x):
            return rho(x)
        case CtV(c):
            return domain.ct(c)
        case LmV(x, b):
            avoid = free_vars_v(t) | rho.overridden
            if x in avoid:
                from .cbv.syntax import subst_term_v

                z = fresh_var(avoid | free_vars_v(b), x)
                b, x = subst_term_v(b, VarV(z), x), z
            return domain.lm(lambda s: sem_two_sorted(domain, b, rho.update(x, s)))
        case Val(v):
            return domain.val(sem_two_sorted(domain, v, rho))
        case AppV(f, a):
            return domain.app(sem_two_sorted(domain, f, rho), sem_two_sorted(domain, a, rho))
    raise TypeError(f"not a two-sorted term: {t!r}")


def one_point_domain2() -> SemDomain2:
    return SemDomain2(val=lambda s: (), app=lambda a, b: (), ct=lambda c: (), lm=lambda f: (), name="one-point")


def syntax_domain2() -> SemDomain2:
    """Two-sorted analogue of :func:`syntax_domain`, producing two-sorted keys."""

    def lm(f):
        def at(n: int) -> tuple:
            bound = lambda m: ("B", m - n - 1)  # noqa: E731
            return ("L", f(bound)(n + 1))

        return at

    return SemDomain2(
        val=lambda s: (lambda n: ("Val", s(n))),
        app=lambda s1, s2: (lambda n: ("A", s1(n), s2(n))),
        ct=lambda c: (lambda n: ("C", c)),
        lm=lm,
        s_eq=lambda s1, s2: s1(0) == s2(0),
        name="syntax",
    )
