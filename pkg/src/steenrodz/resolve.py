"""Minimal free resolutions and Ext charts.

Free modules are described by their generators; the basis of F_s in degree
t is the list of pairs (generator, Milnor basis element of the profile) with
generators in creation order.  Differentials store d(g) as a set of such
pairs in F_{s-1} (or, for s = 0, a vector of the module being resolved).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .f2core import Echelon, bits
from .modules import FiniteModule, dual, restrict, tensor
from .steenrod.milnor import milnor_product
from .steenrod.profile import Profile

DEFAULT_CAP = 20000


class ResourceLimitError(RuntimeError):
    pass


class RangeError(ValueError):
    pass


@dataclass
class Level:
    degrees: list[int] = field(default_factory=list)
    # d(g): for s = 0 a module vector, otherwise a frozenset of (h, R) in F_{s-1}
    boundaries: list = field(default_factory=list)


class Resolution:
    """Minimal free resolution of ``module`` over ``profile`` for s <= s_max, t <= t_max."""

    def __init__(self, module: FiniteModule, profile: Profile | None = None, s_max: int = 4,
                 t_max: int = 20, cap: int = DEFAULT_CAP):
        self.module = module
        self.profile = profile or module.profile
        if not module.profile.contains_profile(self.profile):
            raise ValueError(f"cannot resolve a {module.profile}-module over {self.profile}")
        self.cap = cap
        self.levels: list[Level] = []
        self.s_max = -1
        self.t_min = module.bottom
        self.t_max = self.t_min - 1
        self._basis_cache: dict = {}
        self.extend(s_max, t_max)

    # ------------------------------------------------------------------
    def basis(self, s: int, t: int) -> list[tuple[int, tuple[int, ...]]]:
        key = (s, t, len(self.levels[s].degrees))
        hit = self._basis_cache.get(key)
        if hit is None:
            hit = []
            for g, d in enumerate(self.levels[s].degrees):
                if d <= t:
                    hit.extend((g, r) for r in self.profile.basis(t - d))
            self._basis_cache[key] = hit
        return hit

    def _image(self, s: int, g: int, r: tuple[int, ...], index: dict) -> int:
        bd = self.levels[s].boundaries[g]
        if s == 0:
            return self.module.apply_milnor(r, bd)
        v = 0
        for h, q in bd:
            for p in milnor_product(r, q):
                v ^= 1 << index[(h, p)]
        return v

    def extend(self, s_max: int, t_max: int) -> "Resolution":
        """Grow the computed range.  Existing generators are never changed."""
        if s_max <= self.s_max and t_max <= self.t_max:
            return self
        s_max = max(s_max, self.s_max)
        t_max = max(t_max, self.t_max)
        if s_max > self.s_max and self.s_max >= 0:
            # new levels need all earlier internal degrees: rebuild from scratch
            fresh = Resolution(self.module, self.profile, s_max, t_max, self.cap)
            self.__dict__.update(fresh.__dict__)
            return self
        while len(self.levels) <= s_max:
            self.levels.append(Level())
        for t in range(self.t_max + 1, t_max + 1):
            self._step_degree(t, s_max)
        self.s_max = s_max
        self.t_max = t_max
        return self

    def _step_degree(self, t: int, s_max: int):
        m = self.module
        # the subspace to hit at level s: all of M_t for s = 0, then ker d_{s-1}
        target = [1 << i for i in m.basis_in_degree(t)]
        for s in range(s_max + 1):
            lvl = self.levels[s]
            src = self.basis(s, t)
            if len(src) > self.cap:
                raise ResourceLimitError(
                    f"free module F_{s} has {len(src)} basis elements in degree {t} (cap {self.cap})")
            if s == 0:
                index = None
            else:
                tgt = self.basis(s - 1, t)
                index = {b: i for i, b in enumerate(tgt)}
            ech = Echelon(track=True)
            kernel = []
            for g, r in src:
                v, combo = ech.add_tracked(self._image(s, g, r, index))
                if not v:
                    kernel.append(combo)
            # adjoin generators for whatever part of the target is not yet hit
            for v in target:
                w = ech.reduce(v)
                if w:
                    lvl.degrees.append(t)
                    if s == 0:
                        lvl.boundaries.append(w)
                    else:
                        tgt = self.basis(s - 1, t)
                        lvl.boundaries.append(frozenset(tgt[j] for j in bits(w)))
                    ech.add(w)
            target = kernel

    # ------------------------------------------------------------------
    def generators(self, s: int) -> list[int]:
        return list(self.levels[s].degrees)

    def ext_dims(self) -> "ExtChart":
        dims = {}
        for s in range(self.s_max + 1):
            for d in self.levels[s].degrees:
                dims[(s, d)] = dims.get((s, d), 0) + 1
        return ExtChart(dims, self.s_max, self.t_min, self.t_max)

    def boundary_vector(self, s: int, g: int) -> int:
        """d(g) as a vector in the basis of F_{s-1} in degree |g| (s >= 1)."""
        t = self.levels[s].degrees[g]
        index = {b: i for i, b in enumerate(self.basis(s - 1, t))}
        v = 0
        for b in self.levels[s].boundaries[g]:
            v ^= 1 << index[b]
        return v

    def check_dd(self) -> list[tuple[int, int]]:
        """Bidegrees (s, g) where d(d(g)) != 0."""
        bad = []
        for s in range(1, self.s_max + 1):
            lvl = self.levels[s]
            for g, t in enumerate(lvl.degrees):
                if s == 1:
                    acc = 0
                    for h, r in lvl.boundaries[g]:
                        acc ^= self._image(0, h, r, None)
                else:
                    index = {b: i for i, b in enumerate(self.basis(s - 2, t))}
                    acc = 0
                    for h, r in lvl.boundaries[g]:
                        acc ^= self._image(s - 1, h, r, index)
                if acc:
                    bad.append((s, g))
        return bad

    def is_minimal(self) -> bool:
        """No d(g) has a component with a unit coefficient."""
        for s in range(1, self.s_max + 1):
            for bd in self.levels[s].boundaries:
                if any(r == () for _, r in bd):
                    return False
        return True


def minimal_resolution(m: FiniteModule, s_max: int, t_max: int, profile: Profile | None = None,
                       cap: int = DEFAULT_CAP) -> Resolution:
    if s_max < 0:
        raise ValueError("s_max must be nonnegative")
    return Resolution(m, profile, s_max, t_max, cap)


# ---------------------------------------------------------------------------


class ExtChart:
    """Dimensions of Ext^{s,t} over a recorded range.

    Queries outside ``0 <= s <= s_max`` and ``t_min <= t <= t_max`` raise
    :class:`RangeError` rather than answering zero.
    """

    def __init__(self, dims: dict[tuple[int, int], int], s_max: int, t_min: int, t_max: int,
                 labels: dict | None = None):
        self.dims = {k: v for k, v in sorted(dims.items()) if v}
        self.s_max = s_max
        self.t_min = t_min
        self.t_max = t_max
        self.labels = labels or {}

    def in_range(self, s: int, t: int) -> bool:
        return 0 <= s <= self.s_max and self.t_min <= t <= self.t_max

    def __call__(self, s: int, t: int) -> int:
        if not self.in_range(s, t):
            raise RangeError(f"(s,t)=({s},{t}) is outside the computed range "
                             f"s<={self.s_max}, {self.t_min}<=t<={self.t_max}")
        return self.dims.get((s, t), 0)

    dim = __call__

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(self.dims.items())

    def restricted(self, s_max: int, t_max: int) -> "ExtChart":
        return ExtChart({k: v for k, v in self.dims.items() if k[0] <= s_max and k[1] <= t_max},
                        min(s_max, self.s_max), self.t_min, min(t_max, self.t_max))

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtChart) and self.dims == other.dims

    def __repr__(self) -> str:
        return f"ExtChart({len(self.dims)} nonzero bidegrees, s<={self.s_max}, {self.t_min}<=t<={self.t_max})"

    def to_tsv(self) -> str:
        lines = ["s\tt\tdim"]
        lines += [f"{s}\t{t}\t{d}" for (s, t), d in self.dims.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "ExtChart":
        rows = [line.split("\t") for line in text.strip().splitlines()[1:] if line.strip()]
        dims = {(int(r[0]), int(r[1])): int(r[2]) for r in rows}
        s_max = max((k[0] for k in dims), default=0)
        ts = [k[1] for k in dims] or [0]
        return cls(dims, s_max, min(ts), max(ts))


def ext_dims(r: Resolution) -> ExtChart:
    return r.ext_dims()


def ext_chart(m: FiniteModule, s_max: int, t_max: int, profile: Profile | None = None,
              cap: int = DEFAULT_CAP) -> ExtChart:
    return minimal_resolution(m, s_max, t_max, profile, cap).ext_dims()


# ---------------------------------------------------------------------------
# Ext(M, N) by the cochain complex Hom(F_*, N)


def ext_hom(res: Resolution, n: FiniteModule, s_max: int, t_min: int, t_max: int) -> ExtChart:
    """Ext^{s,t}(M, N) from a resolution of M, for s <= s_max, t_min <= t <= t_max.

    A cochain of degree t on F_s sends each generator g to N in degree |g| - t.
    The resolution must reach level s_max + 1 and internal degree t_max + top(N).
    """
    prof = res.profile
    if not n.profile.contains_profile(prof):
        raise ValueError(f"{n.profile}-module cannot be a target over {prof}")
    if res.s_max < s_max + 1 or res.t_max < t_max + n.top:
        raise RangeError("resolution does not cover the requested Hom range")

    def coords(s: int, t: int) -> list[tuple[int, int]]:
        # cochain basis: (generator g of F_s, basis element x of N in degree |g|-t)
        out = []
        for g, d in enumerate(res.levels[s].degrees):
            for x in n.basis_in_degree(d - t):
                out.append((g, x))
        return out

    def coboundary_rank_and_kernel(s: int, t: int) -> tuple[int, int]:
        src = coords(s, t)
        if not src:
            return 0, 0
        tgt = coords(s + 1, t)
        index = {c: i for i, c in enumerate(tgt)}
        # (delta f)(g') = sum over (h, R) in d(g') of Sq(R) f(h)
        contrib: dict[int, list[tuple[int, tuple]]] = {}
        for gp, bd in enumerate(res.levels[s + 1].boundaries):
            if res.levels[s + 1].degrees[gp] - t < n.bottom or res.levels[s + 1].degrees[gp] - t > n.top:
                continue
            for h, r in bd:
                contrib.setdefault(h, []).append((gp, r))
        ech = Echelon()
        for g, x in src:
            v = 0
            for gp, r in contrib.get(g, ()):
                for y in bits(n.apply_milnor(r, 1 << x)):
                    v ^= 1 << index[(gp, y)]
            ech.add(v)
        return len(ech), len(src)

    dims = {}
    ranks: dict[tuple[int, int], tuple[int, int]] = {}
    for t in range(t_min, t_max + 1):
        for s in range(s_max + 1):
            ranks[(s, t)] = coboundary_rank_and_kernel(s, t)
    for t in range(t_min, t_max + 1):
        for s in range(s_max + 1):
            rank, size = ranks[(s, t)]
            prev = ranks[(s - 1, t)][0] if s > 0 else 0
            d = size - rank - prev
            if d:
                dims[(s, t)] = d
    return ExtChart(dims, s_max, t_min, t_max)


def ext_self(m: FiniteModule, s_max: int, t_max: int, profile: Profile | None = None,
             method: str = "hom", t_min: int | None = None, cap: int = DEFAULT_CAP) -> ExtChart:
    """Ext^{s,t}(M, M) over ``profile`` (default: the module's own).

    ``method="tensor"`` resolves D(M) (x) M and reads off generators;
    ``method="hom"`` resolves M and takes cohomology of Hom(F_*, M).  Both
    compute the same groups; the second is much smaller.
    """
    prof = profile or m.profile
    if t_min is None:
        t_min = -m.span
    if method == "tensor":
        dm = tensor(dual(restrict(m, prof)), restrict(m, prof))
        res = Resolution(dm, prof, s_max, t_max, cap)
        chart = res.ext_dims()
        return ExtChart({k: v for k, v in chart.dims.items() if k[1] >= t_min}, s_max, max(t_min, chart.t_min), t_max)
    if method != "hom":
        raise ValueError("method must be 'hom' or 'tensor'")
    res = Resolution(m, prof, s_max + 1, t_max + m.top, cap)
    return ext_hom(res, m, s_max, t_min, t_max)


def a2_b2_self_formula(s: int, t: int) -> int:
    """#{(i1, i2) : i1 + 3 i2 = 7s - t, 0 <= i1 <= 7, 0 <= i2 <= 3}."""
    if s < 0:
        return 0
    k = 7 * s - t
    return sum(1 for i2 in range(4) if 0 <= k - 3 * i2 <= 7)

