"""Modules over E(Q_n) as sums of free and trivial summands, and their Ext."""
from __future__ import annotations

from dataclasses import dataclass, field

from .f2core import Echelon, bits
from .modules import FiniteModule
from .resolve import ExtChart


@dataclass(frozen=True)
class Summand:
    kind: str  # "free" or "trivial"
    shift: int
    label: str = ""
    top_label: str = ""  # label of the Q-image of the bottom class (free only)


@dataclass(frozen=True)
class EQ2Decomposition:
    summands: tuple[Summand, ...]
    qdeg: int = 7

    @property
    def free_shifts(self) -> list[int]:
        return sorted(x.shift for x in self.summands if x.kind == "free")

    @property
    def trivial_shifts(self) -> list[int]:
        return sorted(x.shift for x in self.summands if x.kind == "trivial")

    def graded_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for x in self.summands:
            out[x.shift] = out.get(x.shift, 0) + 1
            if x.kind == "free":
                out[x.shift + self.qdeg] = out.get(x.shift + self.qdeg, 0) + 1
        return dict(sorted(out.items()))

    @property
    def dim(self) -> int:
        return 2 * len(self.free_shifts) + len(self.trivial_shifts)

    def shifted(self, k: int) -> "EQ2Decomposition":
        return EQ2Decomposition(tuple(Summand(x.kind, x.shift + k, x.label, x.top_label)
                                      for x in self.summands), self.qdeg)

    def __str__(self) -> str:
        parts = []
        for x in sorted(self.summands, key=lambda y: (y.kind != "free", y.shift)):
            base = "E(Q2)" if x.kind == "free" else "F2"
            parts.append(base if x.shift == 0 else f"S^{x.shift}{base}")
        return " + ".join(parts) if parts else "0"

    def same_multisets(self, other: "EQ2Decomposition") -> bool:
        return self.free_shifts == other.free_shifts and self.trivial_shifts == other.trivial_shifts


def _vec_label(m: FiniteModule, v: int) -> str:
    return " + ".join(m.names[i] for i in bits(v))


def decompose(m: FiniteModule, n: int = 2) -> EQ2Decomposition:
    """Split a module with a Q_n action into free and trivial E(Q_n) summands.

    Free summands start on basis generators whose Q_n images are independent
    (greedy in basis order); trivial summands are represented by single
    generators where possible.
    """
    qdeg = (1 << (n + 1)) - 1
    summands = []
    q = {i: m.q_action(n, 1 << i) for i in range(m.dim)}
    images: dict[int, Echelon] = {}
    for d, gens in m.by_degree.items():
        ech = Echelon()
        for i in gens:
            if ech.add(q[i]):
                summands.append(Summand("free", d, m.names[i], _vec_label(m, q[i])))
        images[d + qdeg] = ech
    for d, gens in m.by_degree.items():
        # kernel of Q in degree d, then a complement of the image inside it
        kern = Echelon(track=True)
        kernel_vecs = []
        for i in gens:
            v, combo = kern.add_tracked(q[i])
            if not v:
                w = 0
                for j in bits(combo):
                    w ^= 1 << gens[j]
                kernel_vecs.append(w)
        ims = images.get(d, Echelon())
        singles = [1 << i for i in gens if not q[i]]
        # representatives are the kernel vectors independent of the image
        span = Echelon()
        for v in ims.basis():
            span.add(v)
        for v in singles + kernel_vecs:
            if span.add(v):
                summands.append(Summand("trivial", d, _vec_label(m, v)))
    return EQ2Decomposition(tuple(summands), qdeg)


def _join(a: str, b: str) -> str:
    if not a:
        return b
    if not b:
        return a
    return f"{a}|{b}"


def tensor_decomp(a: EQ2Decomposition, b: EQ2Decomposition) -> EQ2Decomposition:
    """Decomposition of a tensor product from the decompositions of the factors.

    F2 (x) F2 = F2, F2 (x) E = E, E (x) E = E + S^q E.
    """
    if a.qdeg != b.qdeg:
        raise ValueError("decompositions over different E(Q_n)")
    q = a.qdeg
    out = []
    for x in a.summands:
        for y in b.summands:
            shift = x.shift + y.shift
            label = _join(x.label, y.label)
            if x.kind == "trivial" and y.kind == "trivial":
                out.append(Summand("trivial", shift, label))
            elif x.kind == "trivial" or y.kind == "trivial":
                out.append(Summand("free", shift, label))
            else:
                out.append(Summand("free", shift, label))
                out.append(Summand("free", shift + q, _join(x.top_label, y.label)))
    return EQ2Decomposition(tuple(out), q)


@dataclass(frozen=True)
class ExtClass:
    s: int
    t: int
    summand: int  # index into the decomposition
    height: int  # power of v2
    on_tower: bool


@dataclass
class EQ2Ext:
    classes: list[ExtClass]
    s_max: int
    decomposition: EQ2Decomposition
    towers: list[list[int]] = field(default_factory=list)  # class indices linked by v2

    def chart(self, t_min: int | None = None, t_max: int | None = None) -> ExtChart:
        dims: dict[tuple[int, int], int] = {}
        for c in self.classes:
            dims[(c.s, c.t)] = dims.get((c.s, c.t), 0) + 1
        ts = [c.t for c in self.classes] or [0]
        lo = min(ts) if t_min is None else t_min
        hi = max(ts) if t_max is None else t_max
        dims = {k: v for k, v in dims.items() if lo <= k[1] <= hi}
        return ExtChart(dims, self.s_max, lo, hi)


def ext_from_decomp(d: EQ2Decomposition, s_max: int) -> EQ2Ext:
    classes: list[ExtClass] = []
    towers = []
    for idx, x in enumerate(d.summands):
        if x.kind == "free":
            classes.append(ExtClass(0, x.shift, idx, 0, False))
        else:
            tower = []
            for s in range(s_max + 1):
                tower.append(len(classes))
                classes.append(ExtClass(s, d.qdeg * s + x.shift, idx, s, True))
            towers.append(tower)
    return EQ2Ext(classes, s_max, d, towers)


def ext_chart_from_decomp(d: EQ2Decomposition, s_max: int, t_min: int | None = None,
                          t_max: int | None = None) -> ExtChart:
    """Ext over E(Q_n): a v_n tower per trivial summand, one class per free summand."""
    return ext_from_decomp(d, s_max).chart(t_min, t_max)
