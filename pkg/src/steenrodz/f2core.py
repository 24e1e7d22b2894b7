"""Linear algebra over the field with two elements.

Vectors are Python ints used as bitsets: bit ``j`` holds coordinate ``j``.
Matrices store one int per row. Pivots are always the lowest set bit, which
keeps every reduction deterministic and independent of dict ordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


def bits(v: int) -> Iterable[int]:
    """Yield the indices of the set bits of ``v`` in increasing order."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


def vector(entries: Sequence[int]) -> int:
    out = 0
    for j, e in enumerate(entries):
        if e & 1:
            out |= 1 << j
    return out


def unpack(v: int, length: int) -> list[int]:
    return [(v >> j) & 1 for j in range(length)]


@dataclass(frozen=True)
class F2Matrix:
    """Dense matrix over F2, one bitset per row."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 0:
            raise ValueError("ncols must be nonnegative")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the column range")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> "F2Matrix":
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls(tuple(vector(r) for r in entries), ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [unpack(r, self.ncols) for r in self.rows]

    def transpose(self) -> "F2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in bits(r):
                cols[j] |= 1 << i
        return F2Matrix(tuple(cols), self.nrows)

    def apply(self, v: int) -> int:
        """Return ``self @ v`` as a bitset of length ``nrows``."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.rows:
            acc = 0
            for j in bits(r):
                acc ^= other.rows[j]
            out.append(acc)
        return F2Matrix(tuple(out), other.ncols)

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return F2Matrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.ncols)

    def hstack(self, column: int) -> "F2Matrix":
        """Append one column, given as a bitset over the rows."""
        return F2Matrix(
            tuple(r | (((column >> i) & 1) << self.ncols) for i, r in enumerate(self.rows)),
            self.ncols + 1,
        )

    def rank(self) -> int:
        return rref(self)[0]


class Echelon:
    """Incrementally maintained echelon basis of a subspace.

    Each stored row has a distinct pivot (its lowest bit) and no other stored
    row has that bit set, so ``reduce`` is a single pass.  When ``track`` is
    set, every row carries the combination of inserted vectors producing it.
    """

    def __init__(self, track: bool = False):
        self.pivots: dict[int, int] = {}
        self.combos: dict[int, int] | None = {} if track else None
        self.mask = 0
        self._n_inserted = 0

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, v: int) -> int:
        piv = self.pivots
        hit = v & self.mask
        while hit:
            low = hit & -hit
            v ^= piv[low.bit_length() - 1]
            hit ^= low
        return v

    def _reduce(self, v: int, c: int) -> tuple[int, int]:
        piv = self.pivots
        combos = self.combos
        hit = v & self.mask
        while hit:
            low = hit & -hit
            p = low.bit_length() - 1
            v ^= piv[p]
            if combos is not None:
                c ^= combos[p]
            hit ^= low
        return v, c

    def add(self, v: int) -> int:
        """Insert ``v``; return its reduced form (0 if it was dependent)."""
        return self.add_tracked(v)[0]

    def add_tracked(self, v: int) -> tuple[int, int]:
        """Insert ``v``; return ``(reduced, combo)``.

        ``combo`` is a bitset over insertion order.  If ``reduced`` is zero the
        combo is a linear relation among inserted vectors.
        """
        idx = self._n_inserted
        self._n_inserted += 1
        v, c = self._reduce(v, 1 << idx)
        if v:
            p = lowbit(v)
            low = 1 << p
            piv = self.pivots
            combos = self.combos
            for q, row in piv.items():
                if row & low:
                    piv[q] = row ^ v
                    if combos is not None:
                        combos[q] ^= c
            piv[p] = v
            self.mask |= low
            if combos is not None:
                combos[p] = c
        return v, c

    def decompose(self, v: int) -> tuple[int, int]:
        """Return ``(remainder, combo)`` with ``v = remainder + sum of inserted vectors in combo``.

        Requires tracking.
        """
        if self.combos is None:
            raise ValueError("decompose needs an Echelon built with track=True")
        return self._reduce(v, 0)

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def basis(self) -> list[int]:
        return [self.pivots[p] for p in sorted(self.pivots)]


def rref(m: F2Matrix) -> tuple[int, F2Matrix, list[int]]:
    """Reduced row-echelon form.

    Returns ``(rank, reduced, pivot_columns)``; nonzero rows come first,
    ordered by pivot column, followed by zero rows.
    """
    ech = Echelon()
    for r in m.rows:
        ech.add(r)
    pivots = sorted(ech.pivots)
    rows = [ech.pivots[p] for p in pivots]
    rows.extend([0] * (m.nrows - len(rows)))
    return len(pivots), F2Matrix(tuple(rows), m.ncols), pivots


def kernel_basis(m: F2Matrix) -> list[int]:
    """Basis of ``{x : m @ x = 0}`` as bitsets of length ``m.ncols``."""
    rank, reduced, pivots = rref(m)
    pivot_set = set(pivots)
    out = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        x = 1 << free
        for i, p in enumerate(pivots):
            if (reduced.rows[i] >> free) & 1:
                x |= 1 << p
        out.append(x)
    return out


def solve(m: F2Matrix, b: int) -> int | None:
    """Some ``x`` with ``m @ x = b``, or ``None`` if ``b`` is not in the column space."""
    if b >> m.nrows:
        raise ValueError("right-hand side longer than the row count")
    aug = m.hstack(b)
    rank, reduced, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = 0
    for i, p in enumerate(pivots):
        if (reduced.rows[i] >> m.ncols) & 1:
            x |= 1 << p
    return x


def quotient_coordinates(
    subspace_basis: Sequence[int],
    ambient_dim: int,
    prefer: Sequence[int] | None = None,
) -> tuple[list[int], Callable[[int], int]]:
    """Complement of a subspace by standard basis vectors, plus the projection.

    ``prefer`` lists coordinates in the order they should be tried as pivots
    of the subspace (so that the *remaining* coordinates form the complement).
    By default pivots are the lowest available coordinates.
    """
    for v in subspace_basis:
        if v >> ambient_dim:
            raise ValueError("subspace vector longer than the ambient dimension")
    order = list(prefer) if prefer is not None else list(range(ambient_dim))
    if sorted(order) != list(range(ambient_dim)):
        raise ValueError("prefer must be a permutation of the coordinates")
    # relabel so that preferred pivot coordinates become the low bits
    rank_of = {c: i for i, c in enumerate(order)}

    def relabel(v: int) -> int:
        out = 0
        for j in bits(v):
            out |= 1 << rank_of[j]
        return out

    ech = Echelon()
    for v in subspace_basis:
        ech.add(relabel(v))
    pivot_coords = {order[p] for p in ech.pivots}
    complement = [j for j in range(ambient_dim) if j not in pivot_coords]
    position = {c: i for i, c in enumerate(complement)}

    def project(v: int) -> int:
        r = ech.reduce(relabel(v))
        out = 0
        for p in bits(r):
            out |= 1 << position[order[p]]
        return out

    return [1 << j for j in complement], project


def span_closure(seeds: Iterable[int], operators: Sequence[Callable[[int], int]]) -> Echelon:
    """Smallest subspace containing ``seeds`` and stable under ``operators``."""
    ech = Echelon()
    queue = []
    for v in seeds:
        if ech.add(v):
            queue.append(v)
    while queue:
        v = queue.pop()
        for op in operators:
            w = op(v)
            if w and ech.add(w):
                queue.append(w)
    return ech
