import dataclasses
import operator
import random

import pytest
from hypothesis import given

from lamkit.cbn import cdev, cdev_model
from lamkit.corpus import CorpusSpec, alpha_variant, default_pool, enum_terms
from lamkit.delta import sample_delta
from lamkit.hoas import encoder_model, enc
from lamkit.recursion import (
    ModelExtensions,
    check_extensions,
    check_fold_alpha_invariance,
    check_fsb_clauses,
    check_fsw_clauses,
    clause_samples,
    depth_model,
    fold_depth,
    fold_fsb,
    fold_fsw,
    identity_fsb,
    identity_fsw,
    occurrence_model,
)
from lamkit.terms import ConstName, Lm, Var, VarName, alpha_eq, count_occ, depth, swap
from strategies import VARS, terms

CORPUS = enum_terms(CorpusSpec(max_nodes=5, n_vars=2, n_consts=1))
CONSTS = [ConstName("c")]


def samples(limit=300, seed=0):
    return clause_samples(CORPUS, VARS, CONSTS, random.Random(seed), limit)


def alpha_pairs(seed=0):
    rng = random.Random(seed)
    return [(t, alpha_variant(t, rng, default_pool(t))) for t in CORPUS]


# -- stock models are clean ------------------------------------------------------

@pytest.mark.parametrize("make", [identity_fsb, occurrence_model, encoder_model])
def test_fsb_models_pass(make):
    model = make()
    ss = samples()
    assert check_fsb_clauses(model, ss) == []
    assert check_extensions(model, ss) == []
    assert check_fold_alpha_invariance(model, alpha_pairs()) == []


@pytest.mark.parametrize("make", [identity_fsw, depth_model, lambda: cdev_model(sample_delta(2))])
def test_fsw_models_pass(make):
    model = make()
    ss = samples()
    assert check_fsw_clauses(model, ss) == []
    assert check_extensions(model, ss) == []
    assert check_fold_alpha_invariance(model, alpha_pairs()) == []


def test_samples_meet_the_congruence_premise():
    ss = samples()
    hits = [s for s in ss if s.z not in (s.x, s.y) and s.x != s.y and alpha_eq(Lm(s.x, s.X), Lm(s.y, s.Y))]
    assert hits


def test_empty_samples_pass_vacuously():
    assert clause_samples([], VARS, CONSTS) == []
    assert check_fsb_clauses(identity_fsb(), []) == []
    assert check_fsw_clauses(identity_fsw(), []) == []
    assert check_extensions(identity_fsb(), []) == []


def test_samples_are_deterministic():
    assert samples(seed=5) == samples(seed=5)


# -- folds against direct definitions --------------------------------------------

@given(terms())
def test_identity_folds_are_alpha_variants(t):
    assert alpha_eq(fold_fsb(identity_fsb(), t), t)
    assert alpha_eq(fold_fsw(identity_fsw(), t), t)


def test_occurrence_fold_matches_count_occ():
    for t in enum_terms(CorpusSpec(max_nodes=6, n_vars=2, n_consts=1)):
        counts = fold_fsb(occurrence_model(), t)
        for v in VARS:
            assert counts.get(v, 0) == count_occ(t, v)


def test_depth_fold_matches_depth():
    for t in enum_terms(CorpusSpec(max_nodes=7, n_vars=1, n_consts=1)):
        assert fold_depth(t) == depth(t)


def test_cdev_fold_matches_cdev():
    delta = sample_delta(2)
    for t in enum_terms(CorpusSpec(max_nodes=6, n_vars=2, n_consts=1, delta=delta)):
        assert alpha_eq(fold_fsw(cdev_model(delta), t), cdev(t, delta))


@given(terms())
def test_encoder_fold_matches_enc(t):
    assert alpha_eq(fold_fsb(encoder_model(), t), enc(t))


# -- broken models are caught ----------------------------------------------------

def test_structural_equality_breaks_renaming():
    # alpha-variant abstractions differ structurally, so the renaming clause fails
    broken = dataclasses.replace(identity_fsb(), d_eq=operator.eq, d_key=None)
    found = check_fsb_clauses(broken, samples())
    assert any(v.clause == "SbRn" for v in found)
    w = next(v for v in found if v.clause == "SbRn")
    assert {"x", "y", "X"} <= set(w.witness)
    assert "SbRn" in str(w)


def test_swap_ignoring_abstractions_is_caught():
    base = identity_fsw()

    def bad_swap(Xp, X, a, b):
        return X if isinstance(X, Lm) else swap(X, a, b)

    broken = dataclasses.replace(base, swap=bad_swap)
    clauses = {v.clause for v in check_fsw_clauses(broken, samples())}
    assert "Sw4" in clauses


def test_wrong_substitution_is_caught():
    broken = dataclasses.replace(identity_fsb(), subst=lambda Xp, X, Zp, Z, z: X)
    clauses = {v.clause for v in check_fsb_clauses(broken, samples())}
    assert "Sb1" in clauses


def test_bad_freshness_is_caught():
    broken = dataclasses.replace(identity_fsb(), fresh=lambda x, Xp, X: False)
    clauses = {v.clause for v in check_fsb_clauses(broken, samples())}
    assert {"F1", "F2", "F4"} <= clauses


def test_non_injective_model_is_caught():
    # depth, claimed injective, collapses many terms
    broken = dataclasses.replace(depth_model(), extensions=ModelExtensions(constructor_injective=True))
    found = check_extensions(broken, samples(100))
    assert found


def test_alpha_invariance_failure_is_reported():
    x, y = VarName("x"), VarName("y")
    t, u = Lm(x, Var(x)), Lm(y, Var(y))
    assert check_fold_alpha_invariance(identity_fsb(), [(t, u)]) == []
    # a model that leaks the binder name is not a function on alpha-classes
    leaky = dataclasses.replace(depth_model(), lm=lambda v, Xp, X: str(v), d_eq=operator.eq)
    found = check_fold_alpha_invariance(leaky, [(t, u)])
    assert [v.clause for v in found] == ["alpha-invariance"]
