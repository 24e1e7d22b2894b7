"""Toda's realization criteria as Ext vanishing checks, and the realization count."""
from __future__ import annotations

from dataclasses import dataclass, field

from .modules import FiniteModule
from .resolve import ExtChart, RangeError, ext_chart, ext_self

S_CAP = 10


class HypothesisError(ValueError):
    """The vanishing hypothesis behind the realization count fails."""


@dataclass
class CriterionReport:
    verdict: bool
    witnesses: list[tuple[tuple[int, int], int]] = field(default_factory=list)
    s_cap: int = S_CAP
    criterion: int = 1

    def __post_init__(self):
        if self.verdict != (not self.witnesses):
            raise ValueError("verdict must be false exactly when there are witnesses")

    def __str__(self) -> str:
        head = f"criterion {self.criterion}: {'holds' if self.verdict else 'fails'} up to s={self.s_cap}"
        if not self.witnesses:
            return head
        wit = ", ".join(f"({s},{t}) dim {d}" for (s, t), d in self.witnesses)
        return f"{head}; nonzero at {wit}"


def _require(chart: ExtChart, s: int, t: int):
    if not chart.in_range(s, t):
        raise RangeError(f"chart does not cover (s,t)=({s},{t}); extend it before checking")


def toda_criterion_one(m: FiniteModule, chart: ExtChart, s_cap: int = S_CAP) -> CriterionReport:
    """Ext_A^{s,n+s-2}(M, F2) = 0 for s >= 3 whenever M is nonzero in degree n."""
    witnesses = []
    for n in sorted(m.by_degree):
        for s in range(3, s_cap + 1):
            t = n + s - 2
            _require(chart, s, t)
            d = chart(s, t)
            if d:
                witnesses.append(((s, t), d))
    return CriterionReport(not witnesses, sorted(set(witnesses)), s_cap, 1)


def criterion_one_chart(m: FiniteModule, s_cap: int = S_CAP) -> ExtChart:
    """The Ext_A(M, F2) chart covering everything criterion one reads."""
    return ext_chart(m, s_cap, max(m.by_degree) + s_cap - 2)


def toda_criterion_two(m: FiniteModule, s_cap: int = S_CAP, chart: ExtChart | None = None) -> CriterionReport:
    """Ext_A^{s,s-2}(M, M) = 0 for s >= 3."""
    if chart is None:
        chart = ext_self(m, s_cap, s_cap - 2, t_min=1)
    witnesses = []
    for s in range(3, s_cap + 1):
        _require(chart, s, s - 2)
        d = chart(s, s - 2)
        if d:
            witnesses.append(((s, s - 2), d))
    return CriterionReport(not witnesses, witnesses, s_cap, 2)


def realization_count(m: FiniteModule, s_cap: int = 8, chart: ExtChart | None = None) -> int:
    """2^dim Ext_A^{2,1}(M, M), valid when Ext_A^{s,s-1}(M, M) = 0 for 3 <= s <= s_cap."""
    if chart is None:
        chart = ext_self(m, s_cap, s_cap - 1, t_min=1)
    for s in range(3, s_cap + 1):
        _require(chart, s, s - 1)
        if chart(s, s - 1):
            raise HypothesisError(f"Ext^{{{s},{s - 1}}}(M,M) has dimension {chart(s, s - 1)}; "
                                  "the count 2^dim Ext^{2,1} does not apply")
    _require(chart, 2, 1)
    return 1 << chart(2, 1)
