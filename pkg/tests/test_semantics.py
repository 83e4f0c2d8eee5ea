from hypothesis import assume, given, settings

from lamkit.cbn import normalize_bounded
from lamkit.cbv import from_unsorted, to_unsorted
from lamkit.cbv.syntax import AppV, CtV, LmV, Val, VarV
from lamkit.delta import sample_delta
from lamkit.notation import parse_term
from lamkit.semantics import (
    INDETERMINATE,
    Closure,
    Fuel,
    NCt,
    Neutral,
    NVar,
    Valuation,
    Verdict,
    check_soundness,
    identity_valuation,
    nbe_eval,
    normalize_nbe,
    one_point_domain,
    one_point_domain2,
    reify,
    sem,
    sem_two_sorted,
    syntax_domain,
    syntax_domain2,
    syntax_valuation,
)
from lamkit.terms import App, ConstName, Ct, Lm, Var, VarName, alpha_eq, alpha_key, free_vars, subst
from strategies import delta_terms, terms, var_names

x, y = VarName("x"), VarName("y")
c = Ct(ConstName("c"))
I = Lm(x, Var(x))
W = Lm(x, App(Var(x), Var(x)))
OMEGA = App(W, W)
DELTA = sample_delta(4)


# -- the generic interpretation --------------------------------------------------

def test_sem_on_leaves():
    dom = syntax_domain()
    rho = syntax_valuation().update(x, lambda n: ("C", "marker"))
    assert sem(dom, Var(x), rho)(0) == ("C", "marker")
    assert sem(dom, c, rho)(0) == ("C", ConstName("c"))


@given(terms())
def test_one_point_domain_is_constant(t):
    assert sem(one_point_domain(), t, Valuation.constant(())) == ()


@given(terms())
def test_syntax_domain_computes_alpha_keys(t):
    assert sem(syntax_domain(), t, syntax_valuation())(0) == alpha_key(t)


@given(terms(), terms(5), var_names)
def test_substitution_lemma_in_syntax_domain(t, u, v):
    dom, rho = syntax_domain(), syntax_valuation()
    lhs = sem(dom, subst(t, u, v), rho)
    rhs = sem(dom, t, rho.update(v, sem(dom, u, rho)))
    assert dom.s_eq(lhs, rhs)


@given(terms(), var_names)
def test_irrelevance_of_fresh_variables(t, v):
    assume(v not in free_vars(t))
    dom, rho = syntax_domain(), syntax_valuation()
    other = rho.update(v, lambda n: ("C", "junk"))
    assert dom.s_eq(sem(dom, t, rho), sem(dom, t, other))


@given(terms())
def test_alpha_variants_share_a_denotation(t):
    from lamkit.nameless import from_nameless

    dom, rho = syntax_domain(), syntax_valuation()
    assert dom.s_eq(sem(dom, t, rho), sem(dom, from_nameless(alpha_key(t)), rho))


def test_valuation_update_is_persistent():
    rho = Valuation.constant(0)
    rho2 = rho.update(x, 1)
    assert rho(x) == 0 and rho2(x) == 1 and rho2(y) == 0
    assert rho2.overridden == {x}


# -- normalization by evaluation -------------------------------------------------

def test_nbe_eval_examples():
    assert nbe_eval(App(I, c)) == Neutral(NCt(ConstName("c")))
    assert nbe_eval(OMEGA, fuel=50) is INDETERMINATE
    succ = App(Ct(ConstName("succ")), Ct(ConstName("num:2")))
    assert nbe_eval(succ, delta=DELTA) == Neutral(NCt(ConstName("num:3")))
    assert isinstance(nbe_eval(I), Closure)


def test_reify_examples():
    assert reify(Neutral(NVar(x))) == Var(x)
    assert reify(Neutral(NCt(ConstName("c")))) == c
    assert alpha_eq(reify(nbe_eval(I)), I)


def test_normalize_nbe_examples():
    assert normalize_nbe(App(I, c)) == c
    assert alpha_eq(normalize_nbe(parse_term(r"\x. (\y. y) x")), I)
    assert normalize_nbe(OMEGA) is INDETERMINATE
    assert normalize_nbe(OMEGA, fuel=Fuel(10)) is INDETERMINATE
    # normalizes under binders and avoids capture on readback
    t = parse_term(r"\y. (\x. \y. x) y")
    assert alpha_eq(normalize_nbe(t), parse_term(r"\y. \z. y"))


def test_indeterminate_is_falsy_singleton():
    assert not INDETERMINATE
    assert repr(INDETERMINATE) == "INDETERMINATE"


@settings(max_examples=200)
@given(delta_terms(DELTA, 8))
def test_nbe_agrees_with_bounded_normalization(t):
    n = normalize_bounded(t, DELTA, 200)
    if n is None:
        return
    m = normalize_nbe(t, DELTA, 2000)
    if m is not INDETERMINATE:
        assert alpha_eq(m, n)


@given(terms(6), terms(3), var_names)
def test_substitution_lemma_for_nbe(t, u, v):
    lhs = normalize_nbe(subst(t, u, v), fuel=500)
    val = nbe_eval(u, fuel=500)
    if lhs is INDETERMINATE or val is INDETERMINATE:
        return
    rhs_v = nbe_eval(t, identity_valuation().update(v, val), fuel=500)
    if rhs_v is INDETERMINATE:
        return
    rhs = reify(rhs_v, free_vars(t) | free_vars(u), fuel=500)
    if rhs is not INDETERMINATE:
        assert alpha_eq(lhs, rhs)


def test_check_soundness_examples():
    assert check_soundness(App(I, c), c) is Verdict.CONFIRMED
    t = parse_term(r"\x. (\y. y) x")
    assert check_soundness(t, t) is Verdict.CONFIRMED
    assert check_soundness(OMEGA, OMEGA) is Verdict.INDETERMINATE
    assert check_soundness(c, Ct(ConstName("d"))) is Verdict.REFUTED


# -- two-sorted interpretation ---------------------------------------------------

def test_sem_two_sorted_clauses():
    dom = syntax_domain2()
    marker = lambda n: ("C", "marker")  # noqa: E731
    rho = syntax_valuation().update(x, marker)
    assert sem_two_sorted(dom, VarV(x), rho) is marker
    v = LmV(x, Val(VarV(x)))
    inner = sem_two_sorted(dom, v, rho)
    assert sem_two_sorted(dom, Val(v), rho)(0) == ("Val", inner(0))


@given(terms())
def test_sem_two_sorted_one_point(t):
    assert sem_two_sorted(one_point_domain2(), from_unsorted(t), Valuation.constant(())) == ()


@given(terms())
def test_sem_two_sorted_is_alpha_invariant(t):
    from lamkit.nameless import from_nameless

    dom, rho = syntax_domain2(), syntax_valuation()
    a = sem_two_sorted(dom, from_unsorted(t), rho)
    b = sem_two_sorted(dom, from_unsorted(from_nameless(alpha_key(t))), rho)
    assert dom.s_eq(a, b)


def test_sem_two_sorted_distinguishes_capture():
    dom, rho = syntax_domain2(), syntax_valuation()
    a = from_unsorted(Lm(x, App(Var(x), Var(y))))
    b = from_unsorted(Lm(y, App(Var(y), Var(y))))
    assert not dom.s_eq(sem_two_sorted(dom, a, rho), sem_two_sorted(dom, b, rho))
    assert to_unsorted(AppV(Val(CtV(ConstName("c"))), Val(VarV(x)))) == App(c, Var(x))
