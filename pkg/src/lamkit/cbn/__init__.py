"""Call-by-name reduction: one-step relations, parallel derivations and standardization."""
from .derivations import (
    AppNode,
    BetaNode,
    ChainError,
    DeltaLeaf,
    MalformedDerivation,
    ParDerivation,
    ReflLeaf,
    XiNode,
    cdev,
    cdev_derivation,
    cdev_model,
    check_chain,
    complete_lemma,
    dedup_targets,
    is_valid,
    join_multi,
    random_derivation,
    refl_derivation,
    replay_derivation,
    step_derivation,
    step_par,
    subst_par,
    swap_derivation,
    trace_to_chain,
)
from .reduction import (
    Direction,
    RedexKind,
    RedexPath,
    Trace,
    TraceError,
    contract,
    is_normal,
    is_valid_trace,
    left_path,
    left_trace,
    normal_order_path,
    normalize_bounded,
    reachable_within,
    redex_paths,
    replay_trace,
    step_cbn,
    step_left,
    top_redex,
)
from .standard import (
    ReflCase,
    SApp,
    SBase,
    SLm,
    SRed,
    SrsProof,
    XiCase,
    absorb_into_srs,
    check_proof,
    commute_par_left,
    head_contract,
    invert_lm_par,
    is_srs,
    proof_trace,
    srs_proof,
    srs_to_trace,
    standardize,
    standardize_proof,
    zip_app,
)
