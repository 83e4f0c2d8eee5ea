"""A short tour: confluence, standardization, NbE and the tagged encoding.

Run with ``python3 demos/walkthrough.py``.
"""
from lamkit import normalize_nbe, parse_term, print_term, sample_delta
from lamkit.cbn import cdev, complete_lemma, join_multi, left_trace, standardize, step_par, trace_to_chain
from lamkit.hoas import check_adequacy_step, dec, enc

X = parse_term(r"(\x1. x1 x1) ((\x. x) #c)")


def show(label, t):
    print(f"{label:>12}: {print_term(t)}")


def diamond():
    print("== parallel steps and complete development")
    show("start", X)
    show("cdev", cdev(X))
    ds = step_par(X)
    for d in ds:
        c = complete_lemma(d)
        print(f"  {print_term(d.target)}  ={c.label}=>  {print_term(c.target)}")
    # close a span made of two different single steps
    a, b = ds[1], ds[-1]
    z, _, _ = join_multi(X, [a], [b])
    show("join", z)


def standard():
    print("== standardization")
    tr = left_trace(X)
    for t in standardize(trace_to_chain(tr), start=X):
        show("", t)


def nbe():
    print("== normalization by evaluation")
    for src in [r"\y. (\x. \y. x) y", r"(\f. \x. f (f x)) (\z. z)"]:
        show("in", parse_term(src))
        show("normal", normalize_nbe(parse_term(src)))
    delta = sample_delta(3)
    show("delta", normalize_nbe(parse_term("#succ (#succ #num:0)"), delta))


def encoding():
    print("== tagged encoding")
    t = parse_term(r"(\x. x) y")
    e = enc(t)
    show("term", t)
    show("encoded", e)
    show("decoded", dec(e))
    print(f"{'adequacy':>12}: {check_adequacy_step(t, parse_term('y')).value}")


if __name__ == "__main__":
    diamond()
    standard()
    nbe()
    encoding()
