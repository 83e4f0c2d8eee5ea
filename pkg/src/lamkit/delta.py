"""Finite tables of delta rules: what a pair of applied constants reduces to."""
from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Optional

from .terms import Const, ConstName, Ct, Term, free_vars


class DeltaTable:
    """Finite partial map ``(c1, c2) -> result``.

    Results must be closed. Reduction is then equivariant and never invents
    free variables, which several of the derivation operators rely on.
    """

    __slots__ = ("_rules",)

    def __init__(self, rules: Optional[Mapping[tuple[Const, Const], Term]] = None):
        table: dict[tuple[Const, Const], Term] = {}
        for (c1, c2), result in (rules or {}).items():
            if free_vars(result):
                raise ValueError(f"delta result for ({c1}, {c2}) must be closed")
            table[(c1, c2)] = result
        self._rules = table

    def lookup(self, c1: Const, c2: Const) -> Optional[Term]:
        return self._rules.get((c1, c2))

    def __contains__(self, pair: object) -> bool:
        return pair in self._rules

    def __iter__(self) -> Iterator[tuple[tuple[Const, Const], Term]]:
        return iter(self._rules.items())

    def __len__(self) -> int:
        return len(self._rules)

    def __bool__(self) -> bool:
        return bool(self._rules)

    def __repr__(self) -> str:
        return f"DeltaTable({len(self._rules)} rules)"

    def constants(self) -> list[Const]:
        seen: dict = {}
        for (c1, c2), result in self._rules.items():
            seen.setdefault(c1, None)
            seen.setdefault(c2, None)
            if isinstance(result, Ct):
                seen.setdefault(result.name, None)
        return list(seen)


EMPTY_DELTA = DeltaTable()


def sample_delta(limit: int = 8) -> DeltaTable:
    """``succ`` applied to ``num:k`` gives ``num:k+1``, for ``k < limit``."""
    succ = ConstName("succ")
    return DeltaTable(
        {(succ, ConstName(f"num:{k}")): Ct(ConstName(f"num:{k + 1}")) for k in range(limit)}
    )


def delta_from_pairs(pairs: Iterable[tuple[Const, Const, Term]]) -> DeltaTable:
    return DeltaTable({(c1, c2): z for c1, c2, z in pairs})
