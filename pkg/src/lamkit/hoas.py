"""Encoding lambda-terms into lambda-terms with two extra tag constants.

Object-level application becomes ``ctapp X Y`` and object-level abstraction
becomes ``ctlm (\\x. X)``, reusing the host binder. Left reduction is encoded
as a small relation on encoded terms. A beta step of the object term is
matched by one tag step followed by ordinary host beta steps.
"""
from __future__ import annotations

from typing import Optional

from .cbn.reduction import normalize_bounded, step_cbn
from .delta import EMPTY_DELTA, DeltaTable
from .recursion import FsbModel, ModelExtensions, fold_fsb
from .semantics import Verdict
from .terms import App, Ct, HoasTag, Lm, Term, Var, alpha_eq, alpha_key, fresh_in, subst

CTAPP = Ct(HoasTag.CTAPP)
CTLM = Ct(HoasTag.CTLM)
_TAG_LABELS = {tag.value for tag in HoasTag}


def _check_base(c) -> None:
    if isinstance(c, HoasTag):
        raise ValueError("tag constants cannot occur in an object term")
    if c.label in _TAG_LABELS:
        raise ValueError(f"base constant {c.label!r} would print like a tag")


def enc(t: Term) -> Term:
    match t:
        case Var():
            return t
        case Ct(c):
            _check_base(c)
            return t
        case App(f, a):
            return App(App(CTAPP, enc(f)), enc(a))
        case Lm(x, b):
            return App(CTLM, Lm(x, enc(b)))
    raise TypeError(f"not a term: {t!r}")


def dec(t: Term) -> Optional[Term]:
    """Inverse of :func:`enc` on its image, ``None`` elsewhere."""
    match t:
        case Var():
            return t
        case Ct(c):
            return None if isinstance(c, HoasTag) or c.label in _TAG_LABELS else t
        case App(App(Ct(HoasTag.CTAPP), f), a):
            df, da = dec(f), dec(a)
            return None if df is None or da is None else App(df, da)
        case App(Ct(HoasTag.CTLM), Lm(x, b)):
            db = dec(b)
            return None if db is None else Lm(x, db)
    return None


def encoder_model() -> FsbModel[Term]:
    """:func:`enc` as a binding-aware fold; it only iterates, ignoring the original subterms."""

    def ct(c):
        _check_base(c)
        return Ct(c)

    return FsbModel(
        var=Var,
        ct=ct,
        app=lambda Xp, X, Yp, Y: App(App(CTAPP, X), Y),
        lm=lambda x, Xp, X: App(CTLM, Lm(x, X)),
        fresh=lambda x, Xp, X: fresh_in(x, X),
        subst=lambda Xp, X, Zp, Z, z: subst(X, Z, z),
        extensions=ModelExtensions(freshness_reversing=True, constructor_injective=True),
        d_eq=alpha_eq,
        d_key=alpha_key,
        name="hoas-encoder",
    )


def fold_enc(t: Term) -> Term:
    return fold_fsb(encoder_model(), t)


def extend_delta(delta: DeltaTable) -> DeltaTable:
    """The table for encoded terms: base pairs map to encoded results, tags never fire."""
    for (c1, c2), _ in delta:
        _check_base(c1)
        _check_base(c2)
    return DeltaTable({pair: enc(z) for pair, z in delta})


def step_hoas_core(t: Term, delta_prime: DeltaTable = EMPTY_DELTA) -> list[Term]:
    """Successors of ``t`` under the encoded left-reduction rules, without the equivalence closure.

    Besides the literal constant-pair rule, an encoded constant pair
    ``ctapp c1 c2`` also fires: that is the shape the encoding produces.
    """
    out: list[Term] = []
    match t:
        case App(App(Ct(HoasTag.CTAPP), App(Ct(HoasTag.CTLM), F)), Y):
            out.append(App(F, Y))
        case App(App(Ct(HoasTag.CTAPP), Ct(c1)), Ct(c2)):
            z = delta_prime.lookup(c1, c2)
            if z is not None:
                out.append(z)
        case App(Ct(c1), Ct(c2)):
            z = delta_prime.lookup(c1, c2)
            if z is not None:
                out.append(z)
    if isinstance(t, App) and isinstance(t.fun, App) and t.fun.fun == CTAPP:
        X, Y = t.fun.arg, t.arg
        out += [App(App(CTAPP, X2), Y) for X2 in step_hoas_core(X, delta_prime)]
        if isinstance(X, (Var, Ct)):
            out += [App(App(CTAPP, X), Y2) for Y2 in step_hoas_core(Y, delta_prime)]
    return out


def is_normal_term_prime(t: Term, delta_prime: DeltaTable = EMPTY_DELTA) -> bool:
    """No one-step beta/delta successor in the encoded calculus."""
    return not step_cbn(t, delta_prime)


def hoas_left_related(X: Term, Y: Term, delta: DeltaTable = EMPTY_DELTA, fuel: int = 64) -> Verdict:
    """Does ``enc X`` step to ``enc Y`` in the encoded relation?

    Witnesses are searched constructively: each core successor of ``enc X``
    is normalized in normal order for at most ``fuel`` steps. ``enc Y`` is a
    normal form, so by confluence a core successor equivalent to it must
    normalize to it.
    """
    dp = extend_delta(delta)
    target = enc(Y)
    undecided = False
    for z in step_hoas_core(enc(X), dp):
        nf = normalize_bounded(z, dp, fuel)
        if nf is None:
            undecided = True
        elif alpha_eq(nf, target):
            return Verdict.CONFIRMED
    return Verdict.INDETERMINATE if undecided else Verdict.REFUTED


def check_adequacy_step(X: Term, Y: Term, delta: DeltaTable = EMPTY_DELTA, fuel: int = 64) -> Verdict:
    """Check that the left step ``X -> Y`` is matched on encodings; ``Y`` must be the left reduct of ``X``."""
    from .cbn.reduction import step_left

    nxt = step_left(X, delta)
    if nxt is None:
        raise ValueError("the first term has no left reduct")
    if not alpha_eq(nxt, Y):
        raise ValueError("the second term is not the left reduct of the first")
    return hoas_left_related(X, Y, delta, fuel)


def check_inversion(X: Term, delta: DeltaTable = EMPTY_DELTA, fuel: int = 64) -> Verdict:
    """Every core successor of ``enc X`` normalizes to ``enc Y`` for the left reduct ``Y`` of ``X``.

    This is the inversion direction restricted to the encoded term itself
    rather than to arbitrary equivalent terms.
    """
    from .cbn.reduction import step_left

    dp = extend_delta(delta)
    succs = step_hoas_core(enc(X), dp)
    Y = step_left(X, delta)
    if Y is None:
        return Verdict.CONFIRMED if not succs else Verdict.REFUTED
    if not succs:
        return Verdict.REFUTED
    target = enc(Y)
    verdict = Verdict.CONFIRMED
    for z in succs:
        nf = normalize_bounded(z, dp, fuel)
        if nf is None:
            verdict = Verdict.INDETERMINATE
        elif not alpha_eq(nf, target):
            return Verdict.REFUTED
    return verdict


__all__ = [
    "CTAPP",
    "CTLM",
    "check_adequacy_step",
    "check_inversion",
    "dec",
    "enc",
    "encoder_model",
    "extend_delta",
    "fold_enc",
    "hoas_left_related",
    "is_normal_term_prime",
    "step_hoas_core",
]
