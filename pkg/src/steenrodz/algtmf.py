"""E_1-page of the algebraic tmf spectral sequence.

For a module whose underlying A(2)-module is B(2) = A(2)//E(Q_2), change of
rings gives

    E_1^{s,t,n} = sum over compositions (j_1..j_n) of
                  Ext_{E(Q_2)}^{s-n, t-8(j_1+...+j_n)}(N_1(j_1) (x) ... (x) N_1(j_n)).

Classes are produced from E(Q_2)-decompositions of the Brown-Gitler modules.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .brown_gitler import MAX_J, bg_module
from .eq2ext import EQ2Decomposition, decompose, tensor_decomp

QDEG = 7


@dataclass(frozen=True)
class E1Class:
    s: int
    t: int
    n: int
    composition: tuple[int, ...]
    shift: int  # internal degree of the summand before the 8*sum(j) suspension
    height: int  # power of v2
    kind: str  # "free" or "trivial" summand
    provenance: str  # tensor of BG basis labels
    label: str = ""
    dual_translate: str = ""  # DG generator for pages of D(M) (x) M
    translate_degree: int = 0
    killed: bool = False

    @property
    def stem(self) -> int:
        return self.t - self.s

    @property
    def on_tower(self) -> bool:
        return self.kind == "trivial"

    def display(self) -> str:
        base = self.label or f"[{self.provenance}]"
        if self.dual_translate:
            return f"{base}.g({self.dual_translate})"
        return base

    def sort_key(self):
        return (self.s, self.t, self.n, self.translate_degree, self.dual_translate,
                self.composition, self.shift, self.provenance, self.height)


@dataclass
class E1Page:
    classes: list[E1Class]
    max_stem: int
    max_s: int
    min_stem: int = -2
    differentials: list[tuple[int, int]] = field(default_factory=list)  # class indices

    def at(self, s: int, t: int, n: int | None = None) -> list[E1Class]:
        return [c for c in self.classes if c.s == s and c.t == t and (n is None or c.n == n)]

    def dims(self) -> dict[tuple[int, int], int]:
        out: Counter = Counter((c.s, c.t) for c in self.classes)
        return dict(sorted(out.items()))

    def to_tsv(self) -> str:
        lines = ["s\tt\tn\tdim\tlabel\tkilled"]
        for c in self.classes:
            lines.append(f"{c.s}\t{c.t}\t{c.n}\t1\t{c.display()}\t{int(c.killed)}")
        return "\n".join(lines) + "\n"


def compositions(total_bound, n_max: int | None = None):
    """Compositions (j_1, ..., j_n), j_i >= 1, with 8*sum - n <= total_bound."""
    out = [()]

    def rec(prefix: tuple[int, ...]):
        n = len(prefix) + 1
        j = 1
        while 8 * (sum(prefix) + j) - n <= total_bound:
            comp = prefix + (j,)
            out.append(comp)
            rec(comp)
            j += 1

    rec(())
    return sorted(out, key=lambda c: (len(c), c))


@lru_cache(maxsize=None)
def bg_decomposition(j: int) -> EQ2Decomposition:
    return decompose(bg_module(j), 2)


@lru_cache(maxsize=None)
def composition_decomposition(comp: tuple[int, ...]) -> EQ2Decomposition:
    if not comp:
        return decompose(_f2(), 2)
    d = bg_decomposition(comp[0])
    for j in comp[1:]:
        d = tensor_decomp(d, bg_decomposition(j))
    return d


def _f2():
    from .modules import trivial_module
    from .steenrod.profile import Profile

    return trivial_module(Profile.a(2))


def _composition_classes(comp: tuple[int, ...], max_s: int, max_t: int, max_j: int) -> list[E1Class]:
    if any(j > max_j for j in comp):
        raise ValueError(f"composition {comp} needs N_1(j) with j > {max_j}; raise max_j")
    dec = composition_decomposition(comp)
    n = len(comp)
    susp = 8 * sum(comp)
    out = []
    for x in dec.summands:
        heights = [0] if x.kind == "free" else range(0, max_s - n + 1)
        for h in heights:
            s = n + h
            t = susp + x.shift + QDEG * h
            if s > max_s or t > max_t:
                break
            out.append(E1Class(s, t, n, comp, x.shift, h, x.kind, x.label or "1"))
    return out


def assemble_e1(max_stem: int, max_s: int, max_j: int = 3, min_stem: int = -2,
                workers: int = 1) -> E1Page:
    """E_1-page for B_2 in stems min_stem..max_stem and filtrations s <= max_s."""
    return _assemble(max_stem, max_s, max_j, min_stem, workers, extra=0)


def _assemble(max_stem, max_s, max_j, min_stem, workers, extra) -> E1Page:
    comps = compositions(max_stem + 1 + extra)
    max_t = max_stem + extra + max_s
    jobs = [(c, max_s, max_t, max_j) for c in comps]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_job, jobs))
    else:
        parts = [_job(j) for j in jobs]
    classes = [c for part in parts for c in part if min_stem <= c.stem <= max_stem + extra]
    classes = [_name(c) for c in classes]
    classes.sort(key=E1Class.sort_key)
    return E1Page(classes, max_stem, max_s, min_stem)


def _job(args):
    return _composition_classes(*args)


# ---------------------------------------------------------------------------
# May names

_ZETA_POWER = re.compile(r"zeta(\d+)(?:\^(\d+))?")


def may_factor(label: str) -> tuple[int, int] | None:
    """(i, j) if ``label`` is a single zeta_i^{2^j}, else None."""
    m = _ZETA_POWER.fullmatch(label.strip())
    if not m:
        return None
    e = int(m.group(2) or 1)
    if e & (e - 1):
        return None
    return int(m.group(1)), e.bit_length() - 1


def may_name(factors: list[tuple[int, int]]) -> str:
    counts = Counter(factors)
    parts = []
    for (i, j), k in sorted(counts.items(), key=lambda x: (x[0][1] if x[0][0] == 1 else 99, x[0])):
        base = f"h_{j}" if i == 1 else f"h_{{{i},{j}}}"
        parts.append(base if k == 1 else f"{base}^{k}")
    return " ".join(parts)


def _v2_prefix(h: int) -> str:
    return "" if h == 0 else ("v2." if h == 1 else f"v2^{h}.")


def _name(c: E1Class) -> E1Class:
    if c.n == 0:
        return replace(c, label="1" if c.height == 0 else ("v2" if c.height == 1 else f"v2^{c.height}"))
    factors = [may_factor(x) for x in c.provenance.split("|")]
    if len(factors) != c.n or any(f is None for f in factors):
        base = f"[{c.provenance}]"
    else:
        base = may_name(factors)
    return replace(c, label=_v2_prefix(c.height) + base)


def assign_may_names(page: E1Page) -> E1Page:
    """May names for classes that are pure tensors of single generators zeta_i^{2^j},
    with a v2^h prefix along towers."""
    return replace(page, classes=[_name(replace(c, label="")) for c in page.classes])


# ---------------------------------------------------------------------------
# the D(B_2) (x) B_2 page


def dual_generators() -> list[tuple[str, int]]:
    """The 32 classes xi_1^{i1} xi_2^{i2} (i1 <= 7, i2 <= 3) with their degrees."""
    out = []
    for i2 in range(4):
        for i1 in range(8):
            parts = []
            if i1:
                parts.append("xi1" + (f"^{i1}" if i1 > 1 else ""))
            if i2:
                parts.append("xi2" + (f"^{i2}" if i2 > 1 else ""))
            out.append((" ".join(parts) or "1", i1 + 3 * i2))
    out.sort(key=lambda x: (x[1], x[0]))
    return out


def assemble_e1_self(max_stem: int, max_s: int, max_j: int = 4, min_stem: int = -16,
                     workers: int = 1) -> E1Page:
    """E_1-page for D(B_2) (x) B_2: 32 translates of the B_2 page, t -> t - |c|."""
    gens = dual_generators()
    top = max(d for _, d in gens)
    base = _assemble(max_stem, max_s, max_j, min_stem - top, workers, extra=top)
    classes = []
    for name, deg in gens:
        for c in base.classes:
            t = c.t - deg
            if min_stem <= t - c.s <= max_stem:
                classes.append(replace(c, t=t, dual_translate=name, translate_degree=deg))
    classes.sort(key=E1Class.sort_key)
    return E1Page(classes, max_stem, max_s, min_stem)


# ---------------------------------------------------------------------------
# the tabled differential d_2(h_{2,2}^2) = h_3^3

SOURCE = ("h_{2,2}^2", 2, 24, 2)
TARGET = ("h_3^3", 3, 24, 3)


def apply_known_differentials(page: E1Page) -> E1Page:
    """Pair h_{2,2}^2 at (2,24,2) with h_3^3 at (3,24,3) in every translate."""
    classes = list(page.classes)
    diffs = []
    shifts = sorted({(c.dual_translate, c.translate_degree) for c in classes} or {("", 0)})
    if not any(c.dual_translate for c in classes):
        shifts = [("", 0)]
    index = {}
    for i, c in enumerate(classes):
        index.setdefault((c.label, c.s, c.t, c.n, c.dual_translate), []).append(i)
    for name, deg in shifts:
        src_key = (SOURCE[0], SOURCE[1], SOURCE[2] - deg, SOURCE[3], name)
        tgt_key = (TARGET[0], TARGET[1], TARGET[2] - deg, TARGET[3], name)
        src_stem = SOURCE[2] - deg - SOURCE[1]
        tgt_stem = TARGET[2] - deg - TARGET[1]
        in_range = (page.min_stem <= src_stem <= page.max_stem and page.min_stem <= tgt_stem <= page.max_stem
                    and TARGET[1] <= page.max_s)
        if not in_range:
            continue
        srcs, tgts = index.get(src_key, []), index.get(tgt_key, [])
        if len(srcs) != 1 or len(tgts) != 1:
            raise ValueError(f"chart inconsistency: expected one {SOURCE[0]} and one {TARGET[0]} "
                             f"in translate {name or '1'}, found {len(srcs)} and {len(tgts)}")
        a, b = srcs[0], tgts[0]
        if classes[a].n == 0 or classes[b].n == 0:
            raise AssertionError("filtration 0 classes cannot support or receive the differential")
        classes[a] = replace(classes[a], killed=True)
        classes[b] = replace(classes[b], killed=True)
        diffs.append((a, b))
    return replace(page, classes=classes, differentials=diffs)


def max_j_needed(max_stem: int, extra: int = 0) -> int:
    comps = compositions(max_stem + 1 + extra)
    return max((max(c) for c in comps if c), default=0)


__all__ = [
    "E1Class",
    "E1Page",
    "MAX_J",
    "assemble_e1",
    "assemble_e1_self",
    "assign_may_names",
    "apply_known_differentials",
    "compositions",
    "dual_generators",
]
