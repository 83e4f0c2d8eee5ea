import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lamkit.cbn import (
    BetaNode,
    DeltaLeaf,
    Direction,
    MalformedDerivation,
    RedexKind,
    RedexPath,
    ReflCase,
    ReflLeaf,
    Trace,
    XiCase,
    XiNode,
    absorb_into_srs,
    cdev,
    cdev_derivation,
    cdev_model,
    commute_par_left,
    complete_lemma,
    invert_lm_par,
    is_srs,
    is_valid,
    is_valid_trace,
    join_multi,
    left_trace,
    random_derivation,
    reachable_within,
    refl_derivation,
    replay_derivation,
    replay_trace,
    srs_to_trace,
    standardize,
    step_cbn,
    step_derivation,
    step_left,
    step_par,
    subst_par,
    swap_derivation,
    trace_to_chain,
    zip_app,
)
from lamkit.delta import DeltaTable, sample_delta
from lamkit.notation import parse_term
from lamkit.recursion import fold_fsw
from lamkit.terms import App, ConstName, Ct, Lm, Var, VarName, alpha_eq, count_occ, fresh_in
from strategies import delta_terms, terms, var_names

x, x1, y, z = VarName("x"), VarName("x", 1), VarName("y"), VarName("z")
c, d = Ct(ConstName("c")), Ct(ConstName("d"))
I = Lm(x, Var(x))
X1 = App(I, c)
# the running example: a top redex duplicating an inner one
X = App(Lm(x1, App(Var(x1), Var(x1))), X1)
Y1 = App(X1, X1)
Y2 = App(Lm(x1, App(Var(x1), Var(x1))), c)
OMEGA = App(Lm(x, App(Var(x), Var(x))), Lm(x, App(Var(x), Var(x))))
DELTA = sample_delta(4)


def P(text):
    return parse_term(text)


# -- one-step reduction ----------------------------------------------------------

def test_step_cbn_running_example():
    got = {str(p): t for p, t in step_cbn(X)}
    assert set(got) == {"beta@top", "beta@arg"}
    assert got["beta@top"] == Y1
    assert got["beta@arg"] == Y2
    assert step_cbn(Var(x)) == []


def test_step_cbn_delta():
    t = App(Ct(ConstName("succ")), Ct(ConstName("num:1")))
    assert step_cbn(t, DELTA) == [(RedexPath((), RedexKind.DELTA), Ct(ConstName("num:2")))]
    assert step_cbn(t) == []


def test_step_left_examples():
    assert step_left(Var(x)) is None
    assert step_left(X) == Y1
    assert step_left(App(c, App(I, d))) == App(c, d)
    # no reduction under binders
    assert step_left(Lm(y, X1)) is None
    # AppR only fires under a variable or constant head
    assert step_left(App(App(Var(y), c), X1)) is None
    assert step_left(App(App(Var(y), X1), X1)) == App(App(Var(y), c), X1)


@given(delta_terms(DELTA, 10))
def test_left_step_is_a_filtered_step(t):
    r = step_left(t, DELTA)
    succ = [u for _, u in step_cbn(t, DELTA)]
    if r is not None:
        assert any(alpha_eq(r, u) for u in succ)
    elif succ:
        # every remaining redex sits under a binder or beside a stuck head
        assert not any(str(p) == "beta@top" or str(p) == "delta@top" for p, _ in step_cbn(t, DELTA))


def test_left_trace_and_replay():
    tr = left_trace(X)
    assert tr.end == App(c, c)
    assert len(tr) == 3
    replay_trace(tr)
    assert is_valid_trace(tr, left=True)
    bad = Trace(X, ((RedexPath((), RedexKind.BETA), c),))
    assert not is_valid_trace(bad)


def test_reachable_within():
    assert reachable_within(X, App(c, c), 5) == 2
    assert reachable_within(X, App(c, c), 1) is None
    assert reachable_within(X, X, 0) == 0


def test_redex_path_str():
    assert str(RedexPath((Direction.FUN, Direction.ARG), RedexKind.BETA)) == "beta@fun/arg"


# -- parallel derivations --------------------------------------------------------

def test_refl_leaf_replay():
    assert replay_derivation(ReflLeaf(Var(x))) == (Var(x), Var(x), 0)
    assert [str(s.label) for s in step_par(Var(x))] == ["0"]
    with pytest.raises(MalformedDerivation):
        replay_derivation(ReflLeaf(X1))


def test_delta_leaf_replay():
    succ, n1, n2 = ConstName("succ"), ConstName("num:1"), ConstName("num:2")
    leaf = DeltaLeaf(succ, n1, Ct(n2))
    assert replay_derivation(leaf, DELTA) == (App(Ct(succ), Ct(n1)), Ct(n2), 1)
    assert not is_valid(DeltaLeaf(succ, n1, Ct(n1)), DELTA)


def test_step_par_running_example():
    ds = step_par(X)
    assert all(is_valid(e) for e in ds)
    by_target = {}
    for e in ds:
        by_target.setdefault(e.target, []).append(e.label)
    assert by_target[X] == [0]
    assert set(by_target[Y1]) == {1}
    assert App(c, c) in by_target and 3 in by_target[App(c, c)]


def test_step_par_includes_one_steps():
    for t in [X, OMEGA, App(c, App(I, d))]:
        targets = [e.target for e in step_par(t)]
        for _, u in step_cbn(t):
            assert any(alpha_eq(u, v) for v in targets)


def test_label_three_example():
    e = cdev_derivation(X)
    assert isinstance(e, BetaNode)
    assert e.label == 3 and e.target == App(c, c)
    assert replay_derivation(e)[2] == 3


def test_cdev_examples():
    assert cdev(Var(x)) == Var(x)
    assert cdev(X) == App(c, c)
    assert alpha_eq(cdev(OMEGA), OMEGA)
    succ = App(Ct(ConstName("succ")), Ct(ConstName("num:0")))
    assert cdev(succ, DELTA) == Ct(ConstName("num:1"))


def test_cdev_fold_matches_direct():
    model = cdev_model(DELTA)
    for t in [X, OMEGA, P(r"\y. (\x. x y) #succ #num:0"), P(r"(\x. \y. x) y")]:
        assert alpha_eq(fold_fsw(model, t), cdev(t, DELTA))


def test_complete_lemma_examples():
    assert complete_lemma(ReflLeaf(Var(x))).target == Var(x)
    d1 = step_derivation(X, RedexPath((), RedexKind.BETA))
    assert d1.target == Y1
    e = complete_lemma(d1)
    assert is_valid(e) and e.source == Y1 and e.target == App(c, c)
    full = cdev_derivation(X)
    back = complete_lemma(full)
    assert back.source == App(c, c) and back.label == 0


@settings(max_examples=100)
@given(delta_terms(DELTA, 9), st.randoms(use_true_random=False))
def test_diamond_property(t, rng):
    e = random_derivation(t, DELTA, rng)
    f = complete_lemma(e, DELTA)
    assert is_valid(f, DELTA)
    assert alpha_eq(f.source, e.target)
    assert alpha_eq(f.target, cdev(t, DELTA))


def test_join_multi_examples():
    assert join_multi(X, [], []) == (X, [], [])
    d1 = step_derivation(X, RedexPath((), RedexKind.BETA))
    d2 = step_derivation(X, RedexPath((Direction.ARG,), RedexKind.BETA))
    zz, e1s, e2s = join_multi(X, [d1], [d2])
    assert alpha_eq(zz, App(c, c))
    assert alpha_eq(e2s[0].source, Y2) and alpha_eq(e2s[0].target, zz)
    assert alpha_eq(e1s[0].source, Y1)


@settings(max_examples=60)
@given(delta_terms(DELTA, 8), st.randoms(use_true_random=False), st.integers(0, 3), st.integers(0, 3))
def test_join_multi_random_spans(t, rng, n1, n2):
    def chain(n):
        out, cur = [], t
        for _ in range(n):
            e = random_derivation(cur, DELTA, rng)
            out.append(e)
            cur = e.target
        return out, cur

    d1s, end1 = chain(n1)
    d2s, end2 = chain(n2)
    zz, e1s, e2s = join_multi(t, d1s, d2s, DELTA)
    for start, es in ((end1, e1s), (end2, e2s)):
        cur = start
        for e in es:
            assert is_valid(e, DELTA) and alpha_eq(e.source, cur)
            cur = e.target
        assert alpha_eq(cur, zz)


# -- label bound, equivariance, freshness ----------------------------------------

def test_subst_par_boundary_cases():
    dy = cdev_derivation(X)
    out = subst_par(ReflLeaf(Var(y)), dy, y)
    assert out.label == dy.label and out.target == dy.target
    r = subst_par(ReflLeaf(Var(x)), ReflLeaf(c), y)
    assert r.label == 0


@settings(max_examples=100)
@given(delta_terms(DELTA, 7), delta_terms(DELTA, 5), var_names, st.randoms(use_true_random=False))
def test_label_bound(tx, ty, v, rng):
    dx = random_derivation(tx, DELTA, rng)
    dy = random_derivation(ty, DELTA, rng)
    k = subst_par(dx, dy, v, DELTA)
    assert is_valid(k, DELTA)
    assert k.label <= dx.label + count_occ(dx.target, v) * dy.label


@given(delta_terms(DELTA, 9), var_names, var_names, st.randoms(use_true_random=False))
def test_swap_derivation(t, a, b, rng):
    e = random_derivation(t, DELTA, rng)
    s = swap_derivation(e, a, b)
    assert is_valid(s, DELTA)
    assert s.label == e.label
    assert alpha_eq(swap_derivation(s, a, b).target, e.target)


def test_swap_derivation_leaf():
    assert swap_derivation(ReflLeaf(Var(y)), y, z).source == Var(z)


@given(delta_terms(DELTA, 9), var_names, st.randoms(use_true_random=False))
def test_freshness_preserved(t, v, rng):
    e = random_derivation(t, DELTA, rng)
    if fresh_in(v, e.source):
        assert fresh_in(v, e.target)


# -- commutation and inversion ---------------------------------------------------

def test_commute_example():
    t = App(Lm(y, Var(y)), X1)
    d1 = step_derivation(t, RedexPath((Direction.ARG,), RedexKind.BETA))
    assert d1.target == App(Lm(y, Var(y)), c)
    tr, rest = commute_par_left(d1, c)
    assert [u for u in tr.terms] == [t, X1, c]
    assert is_valid_trace(tr, left=True)
    assert rest.source == c and rest.target == c and rest.label == 0


def test_commute_rejects_wrong_target():
    with pytest.raises(ValueError):
        commute_par_left(refl_derivation(X), c)


@settings(max_examples=100)
@given(delta_terms(DELTA, 9), st.randoms(use_true_random=False))
def test_commute_random(t, rng):
    e = random_derivation(t, DELTA, rng)
    nxt = step_left(e.target, DELTA)
    if nxt is None:
        return
    tr, rest = commute_par_left(e, nxt, DELTA)
    assert is_valid_trace(tr, DELTA, left=True)
    assert alpha_eq(tr.start, t) and alpha_eq(tr.end, rest.source)
    assert is_valid(rest, DELTA) and alpha_eq(rest.target, nxt)


def test_invert_lm_par():
    t = Lm(z, X1)
    assert isinstance(invert_lm_par(refl_derivation(t), z), ReflCase)
    e = cdev_derivation(t)
    assert isinstance(e, XiNode)
    case = invert_lm_par(e, z)
    assert isinstance(case, XiCase) and case.body is e.body
    case = invert_lm_par(e, y)
    assert isinstance(case, XiCase)
    assert alpha_eq(Lm(y, case.body.source), t)
    with pytest.raises(ValueError):
        invert_lm_par(refl_derivation(X1), y)


# -- standard reduction sequences ------------------------------------------------

def test_zip_app():
    a1, a2, b1, b2 = (Var(VarName(n)) for n in ("a", "b", "u", "v"))
    assert zip_app([a1, a2], [b1, b2]) == [App(a1, b1), App(a2, b1), App(a2, b2)]
    assert zip_app([a1], [b1]) == [App(a1, b1)]
    with pytest.raises(ValueError):
        zip_app([], [b1])


@given(st.lists(terms(3), min_size=1, max_size=4), st.lists(terms(3), min_size=1, max_size=4))
def test_zip_app_length(xs, ys):
    assert len(zip_app(xs, ys)) == len(xs) + len(ys) - 1


def test_is_srs_examples():
    assert is_srs([Var(x)])
    assert is_srs([X, step_left(X)])
    assert not is_srs([App(c, c), Var(x)])
    assert is_srs(left_trace(X).terms)
    # reduce inside the argument, then the head: not standard
    assert not is_srs([X, Y2, App(c, c)])


def test_srs_to_trace():
    assert len(srs_to_trace([X])) == 0
    xs = [X, Y1, App(c, X1), App(c, c)]
    tr = srs_to_trace(xs)
    replay_trace(tr)
    assert tr.terms == xs
    with pytest.raises(ValueError):
        srs_to_trace([App(c, c), Var(x)])


def test_absorb_into_srs_example():
    xs = absorb_into_srs(cdev_derivation(X), [App(c, c)])
    assert is_srs(xs)
    assert alpha_eq(xs[0], X) and alpha_eq(xs[-1], App(c, c))
    same = absorb_into_srs(refl_derivation(App(c, c)), [App(c, c)])
    assert same == [App(c, c)]


def test_standardize_examples():
    assert standardize([], start=X) == [X]
    d1 = step_derivation(X, RedexPath((), RedexKind.BETA))
    d2 = complete_lemma(d1)
    xs = standardize([d1, d2])
    assert is_srs(xs) and xs[0] == X and alpha_eq(xs[-1], App(c, c))
    # the non-standard order gets repaired
    e1 = step_derivation(X, RedexPath((Direction.ARG,), RedexKind.BETA))
    e2 = step_derivation(Y2, RedexPath((), RedexKind.BETA))
    ys = standardize([e1, e2])
    assert is_srs(ys) and alpha_eq(ys[-1], App(c, c))
    with pytest.raises(ValueError):
        standardize([])


@settings(max_examples=80)
@given(delta_terms(DELTA, 8), st.randoms(use_true_random=False), st.integers(1, 3))
def test_standardize_round_trip(t, rng, n):
    chain, cur = [], t
    for _ in range(n):
        e = random_derivation(cur, DELTA, rng)
        chain.append(e)
        cur = e.target
    xs = standardize(chain, DELTA)
    assert is_srs(xs, DELTA)
    tr = srs_to_trace(xs, DELTA)
    replay_trace(tr, DELTA)
    assert alpha_eq(tr.start, t) and alpha_eq(tr.end, cur)


def test_trace_to_chain():
    tr = left_trace(X)
    chain = trace_to_chain(tr)
    assert [e.label for e in chain] == [1, 1, 1]
    assert alpha_eq(chain[-1].target, App(c, c))


def test_step_derivation_labels_one():
    for p, u in step_cbn(X):
        e = step_derivation(X, p)
        assert e.label == 1 and alpha_eq(e.target, u)


def test_custom_delta_with_open_result_rejected():
    with pytest.raises(ValueError):
        DeltaTable({(ConstName("a"), ConstName("b")): Var(x)})
