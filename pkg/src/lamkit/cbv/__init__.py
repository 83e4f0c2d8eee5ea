"""Call-by-value reduction on two-sorted terms, mirroring :mod:`lamkit.cbn`."""
from .derivations import (
    AppNodeV,
    BetaNodeV,
    DeltaLeafV,
    ParDerivationV,
    ReflLeafV,
    XiNodeV,
    cdev_cbv,
    cdev_cbv_model,
    cdev_derivation_v,
    cdev_value_cbv,
    check_chain_v,
    complete_lemma_cbv,
    dedup_targets_v,
    is_valid_v,
    join_multi_cbv,
    random_derivation_v,
    refl_derivation_v,
    replay_derivation_v,
    step_derivation_v,
    step_par_cbv,
    subst_par_cbv,
    swap_derivation_v,
    trace_to_chain_v,
)
from .reduction import (
    contract_v,
    is_normal_cbv,
    is_valid_trace_cbv,
    left_path_cbv,
    left_trace_cbv,
    reachable_within_cbv,
    redex_paths_v,
    replay_trace_cbv,
    step_cbv,
    step_left_cbv,
    top_redex_v,
)
from .standard import (
    ReflCaseV,
    SAppV,
    SBaseV,
    SLmV,
    SRedV,
    SrsProofV,
    XiCaseV,
    absorb_into_srs_cbv,
    check_proof_v,
    commute_par_left_cbv,
    invert_lm_par_cbv,
    is_srs_cbv,
    srs_proof_cbv,
    srs_to_trace_cbv,
    standardize_cbv,
    standardize_proof_cbv,
    zip_app_v,
)
from .syntax import (
    EMPTY_DELTA_V,
    AppV,
    CtV,
    DeltaTableV,
    LmV,
    TermV,
    Val,
    ValueV,
    VarV,
    alpha_eq_v,
    alpha_key_v,
    count_occ_v,
    depth_v,
    free_vars_v,
    fresh_in_v,
    from_unsorted,
    subst_term_v,
    subst_value_v,
    swap_v,
    to_unsorted,
    value_from_unsorted,
    vapp,
    vct,
    vlam,
    vvar,
)
