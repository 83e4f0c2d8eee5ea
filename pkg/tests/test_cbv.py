import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lamkit.cbn import RedexKind, RedexPath, step_cbn, step_par
from lamkit.cbv import (
    AppV,
    CtV,
    DeltaTableV,
    LmV,
    Val,
    VarV,
    alpha_eq_v,
    alpha_key_v,
    cdev_cbv,
    cdev_cbv_model,
    cdev_derivation_v,
    cdev_value_cbv,
    commute_par_left_cbv,
    complete_lemma_cbv,
    count_occ_v,
    from_unsorted,
    fresh_in_v,
    is_srs_cbv,
    is_valid_v,
    join_multi_cbv,
    left_trace_cbv,
    random_derivation_v,
    refl_derivation_v,
    replay_trace_cbv,
    srs_to_trace_cbv,
    standardize_cbv,
    step_cbv,
    step_left_cbv,
    step_par_cbv,
    subst_par_cbv,
    subst_term_v,
    subst_value_v,
    swap_derivation_v,
    to_unsorted,
    vapp,
    vct,
    vlam,
    vvar,
)
from lamkit.delta import sample_delta
from lamkit.recursion import fold_fsw
from lamkit.terms import ConstName, VarName, alpha_eq, subst
from strategies import delta_terms, terms, var_names

y, z = VarName("y"), VarName("z")
c = ConstName("c")
DELTA = sample_delta(4)
DELTA_V = DeltaTableV.from_unsorted(DELTA)
ID_Y = vlam("y", vvar("y"))


def terms_v(max_leaves=8):
    return delta_terms(DELTA, max_leaves).map(from_unsorted)


# -- syntax and the embedding ----------------------------------------------------

@given(terms())
def test_embedding_round_trip(t):
    assert to_unsorted(from_unsorted(t)) == t


def test_application_is_not_a_value():
    from lamkit.cbv import value_from_unsorted
    from lamkit.notation import parse_term

    with pytest.raises(ValueError):
        value_from_unsorted(parse_term("f x"))


def test_subst_examples():
    assert subst_term_v(vvar("y"), CtV(c), y) == vct("c")
    w = LmV(y, vvar("y"))
    assert subst_value_v(w, CtV(c), y) == w


@given(terms(), terms(5), var_names)
def test_subst_commutes_with_embedding(t, u, v):
    val = from_unsorted(u)
    if not isinstance(val, Val):
        return
    lhs = to_unsorted(subst_term_v(from_unsorted(t), val.value, v))
    assert alpha_eq(lhs, subst(t, u, v))


@given(terms(), var_names)
def test_count_and_freshness_follow_embedding(t, v):
    tv = from_unsorted(t)
    from lamkit.terms import count_occ, fresh_in

    assert count_occ_v(tv, v) == count_occ(t, v)
    assert fresh_in_v(v, tv) == fresh_in(v, t)


def test_delta_table_requires_values():
    with pytest.raises(ValueError):
        DeltaTableV({(c, c): vct("c")})
    with pytest.raises(ValueError):
        DeltaTableV({(c, c): VarV(y)})
    assert DeltaTableV({(c, c): CtV(c)}).lookup(c, c) == CtV(c)


# -- one-step reduction ----------------------------------------------------------

def test_beta_needs_a_value_argument():
    assert step_cbv(AppV(ID_Y, vct("c"))) == [(RedexPath((), RedexKind.BETA), vct("c"))]
    inner = AppV(ID_Y, vct("d"))
    t = AppV(ID_Y, inner)
    paths = [str(p) for p, _ in step_cbv(t)]
    assert paths == ["beta@arg"]


def test_delta_step():
    t = AppV(vct("succ"), vct("num:0"))
    assert step_cbv(t, DELTA_V) == [(RedexPath((), RedexKind.DELTA), vct("num:1"))]


def test_step_left_cbv():
    assert step_left_cbv(vvar("x")) is None
    assert step_left_cbv(ID_Y) is None
    body = AppV(vvar("y"), vvar("y"))
    assert step_left_cbv(AppV(vlam("y", body), vct("c"))) == AppV(vct("c"), vct("c"))
    # AppR under a value head
    t = AppV(vvar("f"), AppV(ID_Y, vct("c")))
    assert step_left_cbv(t) == AppV(vvar("f"), vct("c"))


@given(terms_v(10))
def test_cbv_steps_are_cbn_steps(t):
    cbn = [u for _, u in step_cbn(to_unsorted(t), DELTA)]
    for _, u in step_cbv(t, DELTA_V):
        assert any(alpha_eq(to_unsorted(u), w) for w in cbn)
    left = step_left_cbv(t, DELTA_V)
    if left is not None:
        assert any(alpha_eq_v(left, u) for _, u in step_cbv(t, DELTA_V))


def test_left_trace_cbv():
    t = AppV(ID_Y, AppV(ID_Y, vct("c")))
    tr = left_trace_cbv(t)
    assert tr.end == vct("c") and len(tr) == 2
    replay_trace_cbv(tr)


# -- parallel derivations --------------------------------------------------------

@given(terms_v(9))
def test_step_par_cbv_contains_refl_and_embeds(t):
    ds = step_par_cbv(t, DELTA_V)
    assert any(d.label == 0 and d.target == t for d in ds)
    cbn_targets = {alpha_key_v(from_unsorted(d.target)) for d in step_par(to_unsorted(t), DELTA)}
    for d in ds:
        assert is_valid_v(d, DELTA_V)
        assert alpha_key_v(d.target) in cbn_targets
        if isinstance(t, Val):
            assert isinstance(d.target, Val)


def test_cdev_examples():
    assert cdev_value_cbv(VarV(VarName("x"))) == VarV(VarName("x"))
    assert cdev_cbv(AppV(ID_Y, vct("c"))) == vct("c")
    # argument that is not (and does not become) a value
    stuck = AppV(vvar("f"), vvar("g"))
    t = AppV(ID_Y, stuck)
    assert cdev_cbv(t) == AppV(ID_Y, stuck)
    assert cdev_cbv(AppV(vct("succ"), vct("num:2")), DELTA_V) == vct("num:3")


def test_cdev_develops_an_argument_into_a_value():
    # the development of the argument is a value, so the outer redex fires as well
    t = AppV(ID_Y, AppV(vlam("z", vvar("z")), vvar("u")))
    assert cdev_cbv(t) == vvar("u")
    d = cdev_derivation_v(t)
    assert is_valid_v(d) and d.target == vvar("u")


@given(terms_v(8))
def test_cdev_fold_matches_direct(t):
    assert alpha_key_v(fold_fsw(cdev_cbv_model(DELTA_V), to_unsorted(t))) == alpha_key_v(cdev_cbv(t, DELTA_V))


@given(terms_v(9))
def test_cdev_of_a_normal_term_is_itself(t):
    if not step_cbv(t, DELTA_V):
        assert alpha_eq_v(cdev_cbv(t, DELTA_V), t)


@settings(max_examples=100)
@given(terms_v(9), st.randoms(use_true_random=False))
def test_cbv_diamond(t, rng):
    d = random_derivation_v(t, DELTA_V, rng)
    e = complete_lemma_cbv(d, DELTA_V)
    assert is_valid_v(e, DELTA_V)
    assert alpha_eq_v(e.source, d.target)
    assert alpha_eq_v(e.target, cdev_cbv(t, DELTA_V))


@settings(max_examples=60)
@given(terms_v(8), st.randoms(use_true_random=False), st.integers(0, 3), st.integers(0, 3))
def test_join_multi_cbv(t, rng, n1, n2):
    def chain(n):
        out, cur = [], t
        for _ in range(n):
            d = random_derivation_v(cur, DELTA_V, rng)
            out.append(d)
            cur = d.target
        return out, cur

    d1s, end1 = chain(n1)
    d2s, end2 = chain(n2)
    zz, e1s, e2s = join_multi_cbv(t, d1s, d2s, DELTA_V)
    for start, es in ((end1, e1s), (end2, e2s)):
        cur = start
        for e in es:
            assert alpha_eq_v(e.source, cur)
            cur = e.target
        assert alpha_eq_v(cur, zz)


@settings(max_examples=100)
@given(terms_v(7), terms_v(4), var_names, st.randoms(use_true_random=False))
def test_cbv_label_bound(tx, tv, v, rng):
    if not isinstance(tv, Val):
        return
    dx = random_derivation_v(tx, DELTA_V, rng)
    dv = random_derivation_v(tv, DELTA_V, rng)
    k = subst_par_cbv(dx, dv, v, DELTA_V)
    assert is_valid_v(k, DELTA_V)
    assert k.label <= dx.label + count_occ_v(dx.target, v) * dv.label


def test_subst_par_needs_value_derivation():
    app = AppV(vvar("f"), vvar("g"))
    with pytest.raises(ValueError):
        subst_par_cbv(refl_derivation_v(vvar("y")), refl_derivation_v(app), y)


@given(terms_v(9), var_names, var_names, st.randoms(use_true_random=False))
def test_cbv_equivariance_and_freshness(t, a, b, rng):
    d = random_derivation_v(t, DELTA_V, rng)
    s = swap_derivation_v(d, a, b)
    assert is_valid_v(s, DELTA_V) and s.label == d.label
    for v in (a, b):
        if fresh_in_v(v, d.source):
            assert fresh_in_v(v, d.target)


# -- commutation and standardization ---------------------------------------------

@settings(max_examples=100)
@given(terms_v(9), st.randoms(use_true_random=False))
def test_commute_cbv(t, rng):
    d = random_derivation_v(t, DELTA_V, rng)
    nxt = step_left_cbv(d.target, DELTA_V)
    if nxt is None:
        return
    tr, rest = commute_par_left_cbv(d, nxt, DELTA_V)
    replay_trace_cbv(tr, DELTA_V)
    assert alpha_eq_v(tr.end, rest.source) and alpha_eq_v(rest.target, nxt)


def test_standardize_cbv_examples():
    t = AppV(ID_Y, AppV(ID_Y, vct("c")))
    assert standardize_cbv([], start=t) == [t]
    d = cdev_derivation_v(t)
    xs = standardize_cbv([d])
    assert is_srs_cbv(xs) and xs[0] == t and xs[-1] == vct("c")


@settings(max_examples=80)
@given(terms_v(7), st.randoms(use_true_random=False), st.integers(1, 3))
def test_standardize_cbv_round_trip(t, rng, n):
    chain, cur = [], t
    for _ in range(n):
        d = random_derivation_v(cur, DELTA_V, rng)
        chain.append(d)
        cur = d.target
    xs = standardize_cbv(chain, DELTA_V)
    assert is_srs_cbv(xs, DELTA_V)
    tr = srs_to_trace_cbv(xs, DELTA_V)
    replay_trace_cbv(tr, DELTA_V)
    assert alpha_eq_v(tr.start, t) and alpha_eq_v(tr.end, cur)


def test_vapp_builder():
    assert vapp(vvar("f"), vvar("a"), vvar("b")) == AppV(AppV(vvar("f"), vvar("a")), vvar("b"))
