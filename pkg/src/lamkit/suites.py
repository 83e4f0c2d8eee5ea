"""Property suites: each one checks a family of laws over a corpus of terms.

A suite returns a :class:`SuiteReport`. It passes exactly when no case
failed. Every suite is deterministic given its :class:`CorpusSpec`. Random
cases draw from ``spec.rng(salt)`` with a fixed salt per suite.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Optional

from .cbn import (
    cdev,
    check_chain,
    commute_par_left,
    complete_lemma,
    is_srs,
    is_valid,
    is_valid_trace,
    join_multi,
    normalize_bounded,
    random_derivation,
    reachable_within,
    srs_to_trace,
    standardize,
    step_cbn,
    step_derivation,
    step_left,
    step_par,
    subst_par,
    swap_derivation,
    trace_to_chain,
)
from .cbn.reduction import Trace
from .corpus import CorpusSpec, alpha_variant, default_pool, enum_terms, random_term
from .delta import DeltaTable, sample_delta
from .hoas import check_adequacy_step, check_inversion, dec, enc, extend_delta, fold_enc, encoder_model, is_normal_term_prime
from .nameless import (
    from_nameless,
    nameless_count,
    nameless_depth,
    nameless_free_vars,
    nameless_psubst,
    nameless_subst,
    nameless_swap,
    to_nameless,
)
from .recursion import (
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
from .semantics import INDETERMINATE, Verdict, check_soundness, identity_valuation, nbe_eval, normalize_nbe, reify
from .terms import (
    App,
    ConstName,
    Lm,
    Term,
    Var,
    VarName,
    alpha_eq,
    alpha_key,
    count_occ,
    depth,
    free_vars,
    fresh_in,
    psubst,
    size,
    subst,
    swap,
)

# spans and chains stop growing past this many nodes
TERM_CAP = 60


@dataclass(frozen=True)
class Failure:
    inputs: str
    law: str
    witness: str = ""

    def __str__(self) -> str:
        return f"[{self.law}] {self.inputs}" + (f" :: {self.witness}" if self.witness else "")


@dataclass
class SuiteReport:
    name: str
    cases: int = 0
    failures: list[Failure] = field(default_factory=list)
    wall_time: float = 0.0
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures, {self.wall_time:.2f}s"

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "wall_time": round(self.wall_time, 3),
            "failures": [{"inputs": f.inputs, "law": f.law, "witness": f.witness} for f in self.failures],
            "notes": self.notes,
        }


class _Run:
    """Collects cases and failures for one suite."""

    MAX_FAILURES = 200

    def __init__(self, report: SuiteReport):
        self.report = report
        self.dropped = 0

    def case(self) -> None:
        self.report.cases += 1

    def check(self, ok: bool, law: str, inputs: Any, witness: Any = "") -> bool:
        if not ok:
            self.fail(law, inputs, witness)
        return ok

    def fail(self, law: str, inputs: Any, witness: Any = "") -> None:
        if len(self.report.failures) < self.MAX_FAILURES:
            self.report.failures.append(Failure(_show(inputs), law, _show(witness)))
        else:
            self.dropped += 1

    def guard(self, law: str, inputs: Any, fn: Callable[[], Any]) -> Any:
        """Run ``fn``; an exception counts as a failure of ``law`` and yields ``None``."""
        try:
            return fn()
        except Exception as e:  # noqa: BLE001 - every crash is a reported failure
            self.fail(law, inputs, f"{type(e).__name__}: {e}")
            return None


def _show(x: Any) -> str:
    if isinstance(x, str):
        return x
    from .notation import print_term

    def one(v):
        try:
            return print_term(v)
        except (TypeError, AttributeError):
            pass
        if hasattr(v, "source") and hasattr(v, "target"):
            try:
                return f"{print_term(v.source)} => {print_term(v.target)}"
            except Exception:  # noqa: BLE001
                return repr(v)
        return str(v)

    if isinstance(x, dict):
        return ", ".join(f"{k}={one(v)}" for k, v in x.items())
    if isinstance(x, (list, tuple)):
        return "; ".join(one(v) for v in x)
    return one(x)


# -- helpers ---------------------------------------------------------------------

def _random_chain(x: Term, length: int, delta, rng, step=random_derivation):
    chain, cur = [], x
    for _ in range(length):
        if size(cur) > TERM_CAP:
            break
        d = step(cur, delta, rng)
        chain.append(d)
        cur = d.target
    return chain


def _traces(t: Term, max_len: int, delta, step=step_cbn):
    """Every trace out of ``t`` with at most ``max_len`` steps (the empty one included)."""
    out = []

    def go(cur: Term, steps: tuple) -> None:
        out.append(Trace(t, steps))
        if len(steps) == max_len:
            return
        for path, u in step(cur, delta):
            go(u, steps + ((path, u),))

    go(t, ())
    return out


# -- 1. diamond ------------------------------------------------------------------

def _diamond_cbn(spec: CorpusSpec, run: _Run) -> None:
    delta = spec.delta
    n_derivs = 0
    for X in enum_terms(spec):
        target = cdev(X, delta)
        for d in step_par(X, delta):
            run.case()
            n_derivs += 1
            e = run.guard("complete-lemma", {"X": X, "d": d}, lambda: complete_lemma(d, delta))
            if e is None:
                continue
            if not run.check(is_valid(e, delta), "complete-lemma replays", {"X": X, "d": d}):
                continue
            run.check(alpha_eq(e.source, d.target), "complete-lemma source", {"X": X, "d": d}, e)
            run.check(alpha_eq(e.target, target), "complete-lemma reaches cdev", {"X": X, "d": d}, e)
    rng = spec.rng(1)
    for _ in range(spec.samples):
        run.case()
        X = random_term(spec, rng)
        c1 = _random_chain(X, rng.randint(0, 4), delta, rng)
        c2 = _random_chain(X, rng.randint(0, 4), delta, rng)
        res = run.guard("join", {"X": X}, lambda: join_multi(X, c1, c2, delta))
        if res is None:
            continue
        z, e1s, e2s = res
        end1 = c1[-1].target if c1 else X
        end2 = c2[-1].target if c2 else X
        for end, es, side in ((end1, e1s, "left"), (end2, e2s, "right")):
            got = run.guard(f"join {side} replays", {"X": X}, lambda: check_chain(end, es, delta))
            if got is not None:
                run.check(alpha_eq(got, z), f"join {side} meets", {"X": X}, got)
    run.report.notes["derivations"] = n_derivs


# -- 2. parallel versus sequential ----------------------------------------------

def _par_vs_seq(spec: CorpusSpec, run: _Run) -> None:
    delta = spec.delta
    for X in enum_terms(spec):
        for path, Y in step_cbn(X, delta):
            run.case()
            d = run.guard("single step as derivation", {"X": X, "path": str(path)}, lambda: step_derivation(X, path, delta))
            if d is None:
                continue
            ok = is_valid(d, delta) and alpha_eq(d.source, X) and alpha_eq(d.target, Y) and d.label == 1
            run.check(ok, "single step as derivation", {"X": X, "path": str(path)}, d)
        # the smallest label per target bounds the search for all of them
        best: dict = {}
        for d in step_par(X, delta):
            run.case()
            k = alpha_key(d.target)
            if k not in best or d.label < best[k].label:
                best[k] = d
        for d in best.values():
            n = reachable_within(X, d.target, d.label, delta)
            run.check(n is not None, "target reachable within label", {"X": X, "d": d}, f"label {d.label}")


# -- 3. standardization ----------------------------------------------------------

def _standardization_cbn(spec: CorpusSpec, run: _Run, max_len: int = 3) -> None:
    delta = spec.delta
    for X in enum_terms(spec):
        for tr in _traces(X, max_len, delta):
            run.case()
            inputs = {"trace": list(tr.terms)}
            chain = trace_to_chain(tr, delta)
            xs = run.guard("standardize", inputs, lambda: standardize(chain, delta, start=X))
            if xs is None:
                continue
            run.check(alpha_eq(xs[0], X) and alpha_eq(xs[-1], tr.end), "standard sequence endpoints", inputs, xs)
            if not run.check(is_srs(xs, delta), "output is a standard sequence", inputs, xs):
                continue
            back = run.guard("sequence to trace", inputs, lambda: srs_to_trace(xs, delta))
            if back is not None:
                run.check(is_valid_trace(back, delta) and alpha_eq(back.end, tr.end), "sequence trace replays", inputs, xs)


# -- 4. label bound --------------------------------------------------------------

def _label_bound(spec: CorpusSpec, run: _Run) -> None:
    delta = spec.delta
    rng = spec.rng(4)
    variables = spec.variables() or [VarName("x", 0)]
    for _ in range(spec.samples):
        run.case()
        X = random_term(spec, rng)
        Y = random_term(spec, rng, max_nodes=max(1, spec.random_max_nodes // 2))
        y = rng.choice(sorted(free_vars(X)) or variables)
        dx = random_derivation(X, delta, rng)
        dy = random_derivation(Y, delta, rng)
        inputs = {"dx": dx, "dy": dy, "y": str(y)}
        d = run.guard("substitution of derivations", inputs, lambda: subst_par(dx, dy, y, delta))
        if d is None or not run.check(is_valid(d, delta), "result replays", inputs):
            continue
        run.check(alpha_eq(d.source, subst(X, Y, y)), "source is the substituted source", inputs, d)
        run.check(alpha_eq(d.target, subst(dx.target, dy.target, y)), "target is the substituted target", inputs, d)
        bound = dx.label + count_occ(dx.target, y) * dy.label
        run.check(d.label <= bound, "label bound", inputs, f"{d.label} > {bound}")


# -- 5. commutation with a left step ---------------------------------------------

def _commute(spec: CorpusSpec, run: _Run) -> None:
    delta = spec.delta
    rng = spec.rng(5)
    tries = 0
    while run.report.cases < spec.samples and tries < 50 * spec.samples:
        tries += 1
        X = random_term(spec, rng)
        d = random_derivation(X, delta, rng)
        if size(d.target) > TERM_CAP:
            continue
        z = step_left(d.target, delta)
        if z is None:
            continue
        run.case()
        inputs = {"d": d, "z": z}
        res = run.guard("commute", inputs, lambda: commute_par_left(d, z, delta))
        if res is None:
            continue
        tr, rest = res
        run.check(is_valid_trace(tr, delta, left=True), "left trace replays", inputs, list(tr.terms))
        run.check(alpha_eq(tr.start, X), "left trace starts at the source", inputs)
        ok = is_valid(rest, delta) and alpha_eq(rest.source, tr.end) and alpha_eq(rest.target, z)
        run.check(ok, "residual derivation closes the square", inputs, rest)


# -- 6. equivariance and freshness -------------------------------------------------

def _equivariance_freshness(spec: CorpusSpec, run: _Run) -> None:
    delta = spec.delta
    rng = spec.rng(6)
    pool = spec.variables() + [VarName("y", 0), VarName("y", 1), VarName("z", 0)]
    for _ in range(spec.samples):
        run.case()
        X = random_term(spec, rng)
        d = random_derivation(X, delta, rng)
        z1, z2 = rng.choice(pool), rng.choice(pool)
        inputs = {"d": d, "z1": str(z1), "z2": str(z2)}
        sd = run.guard("swap derivation", inputs, lambda: swap_derivation(d, z1, z2))
        if sd is None or not run.check(is_valid(sd, delta), "swapped derivation replays", inputs):
            continue
        run.check(sd.label == d.label, "swapping keeps the label", inputs, f"{sd.label} vs {d.label}")
        run.check(alpha_eq(sd.source, swap(d.source, z1, z2)), "swapped source", inputs, sd)
        run.check(alpha_eq(sd.target, swap(d.target, z1, z2)), "swapped target", inputs, sd)
        for v in pool:
            if fresh_in(v, d.source):
                run.check(fresh_in(v, d.target), "reduction preserves freshness", inputs, str(v))


# -- 7. soundness of reduction for the environment model --------------------------

def _soundness_nbe(spec: CorpusSpec, run: _Run, fuel: int = 256, ratio: float = 0.9) -> None:
    delta = spec.delta
    rng = spec.rng(7)
    counts = {v.value: 0 for v in Verdict}
    tries = 0
    while run.report.cases < spec.samples and tries < 50 * spec.samples:
        tries += 1
        X = random_term(spec, rng)
        if normalize_bounded(X, delta, 200) is None:
            continue
        Y = X
        for _ in range(rng.randint(0, 4)):
            succ = step_cbn(Y, delta)
            if not succ:
                break
            Y = rng.choice(succ)[1]
        run.case()
        v = check_soundness(X, Y, delta, fuel)
        counts[v.value] += 1
        run.check(v is not Verdict.REFUTED, "reduction preserves the denotation", {"X": X, "Y": Y})
    run.report.notes.update(counts)
    if run.report.cases:
        share = counts[Verdict.CONFIRMED.value] / run.report.cases
        run.report.notes["confirmed_share"] = round(share, 4)
        run.check(share >= ratio, "confirmed share", f"{share:.3f} < {ratio}")


# -- 8. substitution lemma for the environment model -----------------------------

def _subst_lemma_nbe(spec: CorpusSpec, run: _Run, small: int = 3, fuel: int = 256) -> None:
    delta = spec.delta
    xs = enum_terms(spec)
    ys = enum_terms(spec.with_(max_nodes=min(small, spec.max_nodes)))
    variables = spec.variables()
    defined = 0
    for X, Y, y in product(xs, ys, variables):
        run.case()
        lhs = normalize_nbe(subst(X, Y, y), delta, fuel)
        vy = nbe_eval(Y, None, delta, fuel)
        if lhs is INDETERMINATE or vy is INDETERMINATE:
            continue
        v = nbe_eval(X, identity_valuation().update(y, vy), delta, fuel)
        rhs = INDETERMINATE if v is INDETERMINATE else reify(v, free_vars(X) | free_vars(Y), delta, fuel)
        if rhs is INDETERMINATE:
            continue
        defined += 1
        run.check(alpha_eq(lhs, rhs), "substitution lemma", {"X": X, "Y": Y, "y": str(y)}, {"lhs": lhs, "rhs": rhs})
    run.report.notes["defined"] = defined


# -- 9. adequacy of the encoding -------------------------------------------------

def _hoas_adequacy(spec: CorpusSpec, run: _Run, small: tuple = (5, 3), fuel: int = 64) -> None:
    delta = spec.delta
    dp = extend_delta(delta)
    pool = spec.variables() + [VarName("y", 0)]
    steps = 0
    for X in enum_terms(spec):
        run.case()
        eX = enc(X)
        back = dec(eX)
        run.check(back is not None and alpha_eq(back, X), "decoding inverts encoding", X, back or "none")
        for v in pool:
            run.check(fresh_in(v, X) == fresh_in(v, eX), "freshness is preserved and reflected", {"X": X, "v": str(v)})
        run.check(is_normal_term_prime(eX, dp), "encodings are normal", X, eX)
        Y = step_left(X, delta)
        if Y is not None:
            steps += 1
            v = run.guard("adequacy step", {"X": X, "Y": Y}, lambda: check_adequacy_step(X, Y, delta, fuel))
            if v is not None:
                run.check(v is Verdict.CONFIRMED, "left step is matched on encodings", {"X": X, "Y": Y}, v.value)
        v = run.guard("inversion", X, lambda: check_inversion(X, delta, fuel))
        if v is not None:
            run.check(v is Verdict.CONFIRMED, "encoded steps come from left steps", X, v.value)
    xs = enum_terms(spec.with_(max_nodes=min(small[0], spec.max_nodes)))
    ys = enum_terms(spec.with_(max_nodes=min(small[1], spec.max_nodes)))
    for X, Y, y in product(xs, ys, spec.variables()):
        run.case()
        run.check(
            alpha_eq(enc(subst(X, Y, y)), subst(enc(X), enc(Y), y)),
            "encoding commutes with substitution",
            {"X": X, "Y": Y, "y": str(y)},
        )
    run.report.notes["left_steps"] = steps


# -- 10. call-by-value mirror ----------------------------------------------------

def _cbv_mirror(spec: CorpusSpec, run: _Run, std_nodes: int = 6, std_len: int = 2) -> None:
    from . import cbv
    from .cbv.syntax import DeltaTableV, alpha_key_v, count_occ_v, free_vars_v, from_unsorted, subst_term_v, to_unsorted, value_from_unsorted

    delta = DeltaTableV.from_unsorted(spec.delta)
    terms = enum_terms(spec)
    model = cbv.cdev_cbv_model(delta)
    for t in terms:
        X = from_unsorted(t)
        run.case()
        # embedding coherence
        run.check(to_unsorted(X) == t, "embedding round trip", t)
        run.check(free_vars_v(X) == free_vars(t), "embedding keeps free variables", t)
        run.check(alpha_key(to_unsorted(X)) == alpha_key(t), "embedding respects alpha", t)
        for _, Y in cbv.step_cbv(X, delta):
            hit = any(alpha_eq(u, to_unsorted(Y)) for _, u in step_cbn(t, delta.to_unsorted()))
            run.check(hit, "value steps are name steps", {"X": t, "Y": Y})
        run.check(alpha_key_v(fold_fsw(model, t)) == alpha_key_v(cbv.cdev_cbv(X, delta)), "complete development as a fold", t)
        # diamond
        target = cbv.cdev_cbv(X, delta)
        for d in cbv.step_par_cbv(X, delta):
            run.case()
            e = run.guard("value complete-lemma", {"X": t, "d": d}, lambda: cbv.complete_lemma_cbv(d, delta))
            if e is None:
                continue
            ok = cbv.is_valid_v(e, delta) and alpha_key_v(e.source) == alpha_key_v(d.target)
            run.check(ok and alpha_key_v(e.target) == alpha_key_v(target), "value complete-lemma", {"X": t, "d": d}, e)
    # substitution coherence with value payloads
    vals = [t for t in enum_terms(spec.with_(max_nodes=min(3, spec.max_nodes))) if not isinstance(t, App)]
    for t, v, y in product(enum_terms(spec.with_(max_nodes=min(5, spec.max_nodes))), vals, spec.variables()):
        run.case()
        got = to_unsorted(subst_term_v(from_unsorted(t), value_from_unsorted(v), y))
        run.check(alpha_eq(got, subst(t, v, y)), "embedding commutes with substitution", {"t": t, "v": v, "y": str(y)})
    # standardization
    for t in enum_terms(spec.with_(max_nodes=min(std_nodes, spec.max_nodes))):
        X = from_unsorted(t)
        for tr in _traces(X, std_len, delta, step=cbv.step_cbv):
            run.case()
            inputs = {"trace": [to_unsorted(u) for u in tr.terms]}
            chain = cbv.trace_to_chain_v(tr, delta)
            xs = run.guard("value standardize", inputs, lambda: cbv.standardize_cbv(chain, delta, start=X))
            if xs is None:
                continue
            ends = alpha_key_v(xs[0]) == alpha_key_v(X) and alpha_key_v(xs[-1]) == alpha_key_v(tr.end)
            run.check(ends, "value standard sequence endpoints", inputs)
            if run.check(cbv.is_srs_cbv(xs, delta), "value standard sequence", inputs):
                back = run.guard("value sequence to trace", inputs, lambda: cbv.srs_to_trace_cbv(xs, delta))
                if back is not None:
                    run.check(cbv.is_valid_trace_cbv(back, delta), "value sequence trace replays", inputs)
    # label bound
    rng = spec.rng(10)
    variables = spec.variables() or [VarName("x", 0)]
    done = 0
    while done < spec.samples:
        X = from_unsorted(random_term(spec, rng))
        Vt = random_term(spec, rng, max_nodes=max(1, spec.random_max_nodes // 2))
        if isinstance(Vt, App):
            continue
        V = from_unsorted(Vt)
        done += 1
        run.case()
        y = rng.choice(sorted(free_vars_v(X)) or variables)
        dx = cbv.random_derivation_v(X, delta, rng)
        dv = cbv.random_derivation_v(V, delta, rng)
        inputs = {"X": to_unsorted(X), "V": Vt, "y": str(y)}
        d = run.guard("value substitution of derivations", inputs, lambda: cbv.subst_par_cbv(dx, dv, y, delta))
        if d is None or not run.check(cbv.is_valid_v(d, delta), "value result replays", inputs):
            continue
        src_ok = alpha_key_v(d.source) == alpha_key_v(subst_term_v(X, V.value, y))
        tgt_ok = alpha_key_v(d.target) == alpha_key_v(subst_term_v(dx.target, dv.target.value, y))
        run.check(src_ok and tgt_ok, "value substitution endpoints", inputs)
        bound = dx.label + count_occ_v(dx.target, y) * dv.label
        run.check(d.label <= bound, "value label bound", inputs, f"{d.label} > {bound}")


# -- 11. operators ---------------------------------------------------------------

def _operators(spec: CorpusSpec, run: _Run) -> None:
    terms = enum_terms(spec)
    variables = spec.variables() + [VarName("y", 0)]
    payloads = enum_terms(spec.with_(max_nodes=min(3, spec.max_nodes)))
    if payloads:
        # payloads mentioning the enumerator's binder names, so capture can arise
        b0, b1 = VarName("y", 0), VarName("y", 1)
        payloads += [Var(b0), Var(b1), App(Var(b0), Var(b1)), Lm(variables[0], Var(b0))]
    rng = spec.rng(11)
    for t in terms:
        run.case()
        k = to_nameless(t)
        run.check(alpha_eq(from_nameless(k), t), "nameless round trip", t)
        run.check(free_vars(t) == nameless_free_vars(k), "free variables", t)
        run.check(depth(t) == nameless_depth(k), "depth", t)
        u = alpha_variant(t, rng, default_pool(t))
        run.check(alpha_eq(t, u) and alpha_key(u) == k, "renaming binders keeps the class", {"t": t, "u": u})
        for y in variables:
            run.check(count_occ(t, y) == nameless_count(k, y), "occurrence count", {"t": t, "y": str(y)})
        for z1, z2 in product(variables, repeat=2):
            s = swap(t, z1, z2)
            run.check(swap(s, z1, z2) == t, "swap is an involution", {"t": t, "z1": str(z1), "z2": str(z2)})
            run.check(alpha_key(s) == nameless_swap(k, z1, z2), "swap agrees with the oracle", {"t": t})
            if fresh_in(z1, t) and fresh_in(z2, t):
                run.check(alpha_eq(s, t), "swapping fresh names is trivial", {"t": t})
        for y in variables:
            for u in payloads:
                s = subst(t, u, y)
                run.check(alpha_key(s) == nameless_subst(k, alpha_key(u), y), "substitution agrees with the oracle",
                          {"t": t, "u": u, "y": str(y)})
                if fresh_in(y, t):
                    run.check(alpha_eq(s, t), "substituting a fresh name is trivial", {"t": t, "y": str(y)})
                run.check(alpha_key(subst(t, Var(y), y)) == k, "substituting a name for itself", {"t": t})
        # simultaneity: a simultaneous exchange is a swap, never two sequential substitutions
        a, b = variables[0], variables[1 % len(variables)]
        ps = psubst(t, {a: Var(b), b: Var(a)})
        run.check(alpha_eq(ps, swap(t, a, b)), "simultaneous exchange is a swap", {"t": t})
        sigma = {v: p for v, p in zip(variables, rng.sample(payloads, min(len(variables), len(payloads))))}
        run.check(
            alpha_key(psubst(t, sigma)) == nameless_psubst(k, {v: alpha_key(p) for v, p in sigma.items()}),
            "simultaneous substitution agrees with the oracle",
            {"t": t},
        )


# -- 12. fold coherence ----------------------------------------------------------

def _fold_coherence(spec: CorpusSpec, run: _Run, limit: int = 400) -> None:
    from .cbn.derivations import cdev_model as _cdev_model

    delta = spec.delta
    terms = enum_terms(spec)
    rng = spec.rng(12)
    variables = spec.variables() + [VarName("y", 0), VarName("y", 1)]
    constants = spec.constants() or [ConstName("c")]
    samples = clause_samples(terms, variables, constants, rng, limit)
    models = [
        ("identity-fsb", identity_fsb(), check_fsb_clauses),
        ("identity-fsw", identity_fsw(), check_fsw_clauses),
        ("occurrences", occurrence_model(), check_fsb_clauses),
        ("depth", depth_model(), check_fsw_clauses),
        ("cdev", _cdev_model(delta), check_fsw_clauses),
        ("encoder", encoder_model(), check_fsb_clauses),
    ]
    for name, model, checker in models:
        for v in checker(model, samples) + check_extensions(model, samples):
            run.fail(f"{name} {v.clause}", name, str(v))
        run.report.cases += len(samples)
    pairs = [(t, alpha_variant(t, rng, default_pool(t))) for t in terms]
    for name, model, _ in models:
        for v in check_fold_alpha_invariance(model, pairs):
            run.fail(f"{name} alpha-invariance", name, str(v))
        run.report.cases += len(pairs)
    occ = occurrence_model()
    cd = _cdev_model(delta)
    for t in terms:
        run.case()
        run.check(alpha_eq(fold_fsb(identity_fsb(), t), t), "identity fold", t)
        counts = {x: count_occ(t, x) for x in free_vars(t)}
        run.check(fold_fsb(occ, t) == counts, "occurrence fold", t)
        run.check(fold_depth(t) == depth(t), "depth fold", t)
        run.check(alpha_eq(fold_fsw(cd, t), cdev(t, delta)), "complete development fold", t)
        run.check(alpha_eq(fold_enc(t), enc(t)), "encoder fold", t)


# -- registry --------------------------------------------------------------------

_DIAMOND = CorpusSpec(max_nodes=7, n_vars=2, n_consts=1, samples=500, random_max_nodes=12)
_SMALL_DELTA = sample_delta(3)
_HOAS_DELTA = DeltaTable({(ConstName("c"), ConstName("c")): Lm(VarName("y", 0), Var(VarName("y", 0)))})

SUITES: dict[str, tuple[Callable[[CorpusSpec, _Run], None], CorpusSpec, str]] = {
    "diamond-cbn": (_diamond_cbn, _DIAMOND, "complete developments close every parallel step; spans join"),
    "par-vs-seq": (_par_vs_seq, _DIAMOND, "single steps and parallel steps simulate each other"),
    "standardization-cbn": (
        _standardization_cbn,
        CorpusSpec(max_nodes=6, n_vars=2, n_consts=1),
        "every short reduction has a standard sequence",
    ),
    "label-bound": (
        _label_bound,
        CorpusSpec(n_vars=2, n_consts=1, delta=_SMALL_DELTA, samples=1000, random_max_nodes=12),
        "substituting derivations respects the label bound",
    ),
    "commute": (
        _commute,
        CorpusSpec(n_vars=2, n_consts=1, delta=_SMALL_DELTA, samples=500, random_max_nodes=12),
        "parallel steps commute with left steps",
    ),
    "equivariance-freshness": (
        _equivariance_freshness,
        CorpusSpec(n_vars=2, n_consts=1, delta=_SMALL_DELTA, samples=1000, random_max_nodes=12),
        "derivations are equivariant and preserve freshness",
    ),
    "soundness-nbe": (
        _soundness_nbe,
        CorpusSpec(n_vars=2, n_consts=1, delta=_SMALL_DELTA, samples=200, random_max_nodes=12),
        "reduction preserves the normalization-by-evaluation denotation",
    ),
    "subst-lemma-nbe": (
        _subst_lemma_nbe,
        CorpusSpec(max_nodes=5, n_vars=2, n_consts=1),
        "denotation of a substitution is the updated denotation",
    ),
    "hoas-adequacy": (
        _hoas_adequacy,
        CorpusSpec(max_nodes=8, n_vars=2, n_consts=1, delta=_HOAS_DELTA),
        "the tagged encoding is adequate for left reduction",
    ),
    "cbv-mirror": (
        _cbv_mirror,
        CorpusSpec(max_nodes=7, n_vars=2, n_consts=1, calculus="cbv", samples=500, random_max_nodes=10),
        "call-by-value diamond, standardization, label bound and embedding",
    ),
    "operators": (_operators, CorpusSpec(max_nodes=6, n_vars=2, n_consts=1), "syntax operators against the nameless oracle"),
    "fold-coherence": (
        _fold_coherence,
        CorpusSpec(max_nodes=6, n_vars=2, n_consts=1, delta=_HOAS_DELTA),
        "stock models satisfy their clauses and folds match direct code",
    ),
}


class UnknownSuite(KeyError):
    pass


def suite_names() -> list[str]:
    return list(SUITES)


def default_spec(name: str) -> CorpusSpec:
    if name not in SUITES:
        raise UnknownSuite(name)
    return SUITES[name][1]


def run_suite(name: str, spec: Optional[CorpusSpec] = None) -> SuiteReport:
    """Run one suite; ``spec`` defaults to the suite's own corpus."""
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    fn, default, _ = SUITES[name]
    spec = spec if spec is not None else default
    report = SuiteReport(name)
    start = time.perf_counter()
    if not spec.empty:
        run = _Run(report)
        fn(spec, run)
        if run.dropped:
            report.notes["failures_not_recorded"] = run.dropped
    report.wall_time = time.perf_counter() - start
    return report


__all__ = ["Failure", "SUITES", "SuiteReport", "UnknownSuite", "default_spec", "run_suite", "suite_names"]
