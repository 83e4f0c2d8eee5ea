"""Locally nameless images of terms, with their own substitution and swapping.

These functions work purely on the keys returned by :func:`alpha_key`, where
bound variables are de Bruijn indices and free variables keep their names.
They never call the named operators, which makes them an independent oracle
for capture avoidance: substituting a locally closed key needs no shifting and
cannot capture anything.
"""
from __future__ import annotations

from typing import Mapping

from .terms import App, Ct, Lm, Term, Var, VarName, alpha_key, fresh_var


def to_nameless(t: Term) -> tuple:
    return alpha_key(t)


def from_nameless(key: tuple, hint: str = "b") -> Term:
    """A named representative, with binders chosen apart from free names."""
    free = nameless_free_vars(key)

    def go(k: tuple, scope: tuple) -> Term:
        tag = k[0]
        if tag == "V":
            return Var(k[1])
        if tag == "B":
            return Var(scope[len(scope) - 1 - k[1]])
        if tag == "C":
            return Ct(k[1])
        if tag == "A":
            return App(go(k[1], scope), go(k[2], scope))
        binder = fresh_var(set(free) | set(scope), hint)
        return Lm(binder, go(k[1], scope + (binder,)))

    return go(key, ())


def nameless_free_vars(key: tuple) -> frozenset[VarName]:
    tag = key[0]
    if tag == "V":
        return frozenset((key[1],))
    if tag in ("B", "C"):
        return frozenset()
    if tag == "A":
        return nameless_free_vars(key[1]) | nameless_free_vars(key[2])
    return nameless_free_vars(key[1])


def nameless_subst(key: tuple, u: tuple, y: VarName) -> tuple:
    return nameless_psubst(key, {y: u})


def nameless_psubst(key: tuple, sigma: Mapping[VarName, tuple]) -> tuple:
    tag = key[0]
    if tag == "V":
        return sigma.get(key[1], key)
    if tag in ("B", "C"):
        return key
    if tag == "A":
        return ("A", nameless_psubst(key[1], sigma), nameless_psubst(key[2], sigma))
    return ("L", nameless_psubst(key[1], sigma))


def nameless_swap(key: tuple, z1: VarName, z2: VarName) -> tuple:
    # on alpha-classes swapping only touches free names
    tag = key[0]
    if tag == "V":
        x = key[1]
        return ("V", z2 if x == z1 else z1 if x == z2 else x)
    if tag in ("B", "C"):
        return key
    if tag == "A":
        return ("A", nameless_swap(key[1], z1, z2), nameless_swap(key[2], z1, z2))
    return ("L", nameless_swap(key[1], z1, z2))


def nameless_count(key: tuple, x: VarName) -> int:
    tag = key[0]
    if tag == "V":
        return 1 if key[1] == x else 0
    if tag in ("B", "C"):
        return 0
    if tag == "A":
        return nameless_count(key[1], x) + nameless_count(key[2], x)
    return nameless_count(key[1], x)


def nameless_depth(key: tuple) -> int:
    tag = key[0]
    if tag in ("V", "B", "C"):
        return 1
    if tag == "A":
        return 1 + max(nameless_depth(key[1]), nameless_depth(key[2]))
    return 1 + nameless_depth(key[1])


def nameless_beta(body: tuple, arg: tuple) -> tuple:
    """Instantiate index 0 of an abstraction body with a locally closed key."""

    def go(k: tuple, level: int) -> tuple:
        tag = k[0]
        if tag == "B":
            return arg if k[1] == level else k
        if tag in ("V", "C"):
            return k
        if tag == "A":
            return ("A", go(k[1], level), go(k[2], level))
        return ("L", go(k[1], level + 1))

    return go(body, 0)
