import pytest
from hypothesis import given

from lamkit.cbn import step_left
from lamkit.delta import DeltaTable, sample_delta
from lamkit.hoas import (
    CTAPP,
    CTLM,
    check_adequacy_step,
    check_inversion,
    dec,
    enc,
    extend_delta,
    fold_enc,
    is_normal_term_prime,
    step_hoas_core,
)
from lamkit.notation import parse_term
from lamkit.semantics import Verdict
from lamkit.terms import App, ConstName, Ct, HoasTag, Lm, Var, VarName, alpha_eq, alpha_key, fresh_in, subst
from strategies import delta_terms, terms, var_names

x, y = VarName("x"), VarName("y")
I = Lm(x, Var(x))
DELTA = sample_delta(4)


def test_enc_clauses():
    assert enc(Var(x)) == Var(x)
    assert enc(Ct(ConstName("c"))) == Ct(ConstName("c"))
    X, Y = Var(x), Var(y)
    assert enc(App(X, Y)) == App(App(CTAPP, X), Y)
    assert enc(I) == App(CTLM, I)


def test_enc_worked_example():
    t = App(I, Var(y))
    assert enc(t) == App(App(CTAPP, App(CTLM, I)), Var(y))
    assert enc(t) == parse_term(r"#ctapp (#ctlm \x. x) y")


def test_enc_rejects_tag_like_constants():
    with pytest.raises(ValueError):
        enc(Ct(HoasTag.CTAPP))
    with pytest.raises(ValueError):
        enc(Ct(ConstName("ctlm")))
    with pytest.raises(ValueError):
        extend_delta(DeltaTable({(ConstName("ctapp"), ConstName("c")): Ct(ConstName("c"))}))


def test_dec_examples():
    assert dec(enc(I)) == I
    assert dec(Var(x)) == Var(x)
    assert dec(App(CTAPP, Var(x))) is None
    assert dec(CTLM) is None
    assert dec(App(Var(x), Var(y))) is None
    assert dec(App(CTLM, Var(x))) is None


@given(terms())
def test_dec_inverts_enc(t):
    assert dec(enc(t)) == t


@given(terms(), terms())
def test_enc_is_injective(a, b):
    if not alpha_eq(a, b):
        assert not alpha_eq(enc(a), enc(b))


@given(terms(), var_names)
def test_enc_preserves_and_reflects_freshness(t, v):
    assert fresh_in(v, t) == fresh_in(v, enc(t))


@given(terms(6), terms(4), var_names)
def test_enc_is_compositional(t, u, v):
    assert alpha_eq(enc(subst(t, u, v)), subst(enc(t), enc(u), v))


@given(terms())
def test_fold_matches_direct_encoding(t):
    assert alpha_eq(fold_enc(t), enc(t))


@given(delta_terms(DELTA, 8))
def test_encodings_are_normal(t):
    assert is_normal_term_prime(enc(t), extend_delta(DELTA))


def test_normality_examples():
    assert not is_normal_term_prime(App(I, Var(y)))
    assert is_normal_term_prime(CTLM)


def test_step_hoas_core_examples():
    F, Y = I, Var(y)
    assert step_hoas_core(App(App(CTAPP, App(CTLM, F)), Y)) == [App(F, Y)]
    assert step_hoas_core(enc(App(I, Var(y)))) == [App(Lm(x, Var(x)), Var(y))]
    assert step_hoas_core(Var(x)) == []


def test_step_hoas_core_delta_on_encoded_pair():
    t = App(Ct(ConstName("succ")), Ct(ConstName("num:1")))
    dp = extend_delta(DELTA)
    assert step_hoas_core(enc(t), dp) == [Ct(ConstName("num:2"))]
    # tags never fire as delta constants
    assert step_hoas_core(App(CTAPP, CTLM), dp) == []


def test_check_adequacy_step_examples():
    t = App(I, Var(y))
    assert check_adequacy_step(t, Var(y)) is Verdict.CONFIRMED
    succ = App(Ct(ConstName("succ")), Ct(ConstName("num:0")))
    assert check_adequacy_step(succ, Ct(ConstName("num:1")), DELTA) is Verdict.CONFIRMED
    with pytest.raises(ValueError):
        check_adequacy_step(Var(x), Var(x))
    with pytest.raises(ValueError):
        check_adequacy_step(t, Var(x))


def test_adequacy_on_nested_redexes():
    t = parse_term(r"(\f. f (f #c)) (\z. z)")
    while (u := step_left(t)) is not None:
        assert check_adequacy_step(t, u) is Verdict.CONFIRMED
        t = u


@given(delta_terms(DELTA, 7))
def test_adequacy_for_every_left_step(t):
    u = step_left(t, DELTA)
    if u is not None:
        assert check_adequacy_step(t, u, DELTA, fuel=64) is Verdict.CONFIRMED


@given(delta_terms(DELTA, 7))
def test_inversion_on_encodings(t):
    assert check_inversion(t, DELTA) is not Verdict.REFUTED


def test_inversion_for_stuck_terms():
    assert check_inversion(Lm(x, App(I, Var(x)))) is Verdict.CONFIRMED


def test_encoding_key_is_stable_under_alpha():
    a, b = Lm(x, Var(x)), Lm(y, Var(y))
    assert alpha_key(enc(a)) == alpha_key(enc(b))
