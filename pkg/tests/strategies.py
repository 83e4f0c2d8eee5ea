"""Hypothesis strategies for terms and derivations."""
from hypothesis import strategies as st

from lamkit.terms import App, ConstName, Ct, Lm, Var, VarName

VARS = [VarName("x"), VarName("y"), VarName("z"), VarName("x", 1)]
CONSTS = [ConstName("c"), ConstName("d")]

var_names = st.sampled_from(VARS)
leaves = st.one_of(var_names.map(Var), st.sampled_from(CONSTS).map(Ct))


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda p: App(*p)),
        st.tuples(var_names, children).map(lambda p: Lm(*p)),
    )


def terms(max_leaves: int = 8):
    return st.recursive(leaves, _extend, max_leaves=max_leaves)


def delta_terms(delta, max_leaves: int = 8):
    """Terms over the generic constants plus those of ``delta``."""
    consts = CONSTS + [c for c in delta.constants() if c not in CONSTS]
    lv = st.one_of(var_names.map(Var), st.sampled_from(consts).map(Ct))
    return st.recursive(lv, _extend, max_leaves=max_leaves)
