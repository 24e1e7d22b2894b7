"""Milnor basis of the mod 2 Steenrod algebra.

A Milnor basis element Sq(r1, r2, ...) is a tuple with trailing zeros removed;
the empty tuple is the unit.  Products are returned as frozensets (mod 2 sums).
"""
from __future__ import annotations

from functools import lru_cache


def milnor_degree(r: tuple[int, ...]) -> int:
    return sum(x * ((1 << (i + 1)) - 1) for i, x in enumerate(r))


def _strip(r) -> tuple[int, ...]:
    r = list(r)
    while r and r[-1] == 0:
        r.pop()
    return tuple(r)


@lru_cache(maxsize=None)
def milnor_basis(degree: int, bounds: tuple[int, ...] | None = None) -> tuple[tuple[int, ...], ...]:
    """All Milnor basis elements of ``degree``.

    ``bounds[i]`` (if given) is an exclusive upper bound for ``r_{i+1}``;
    positions past the end of ``bounds`` must be zero.  ``None`` means the
    whole algebra.  Order: lexicographic on the reversed tuple, so elements
    with more weight in high ``r_i`` come later.
    """
    if degree < 0:
        return ()
    if degree == 0:
        return ((),)
    out = []
    top = 1
    while (1 << (top + 1)) - 1 <= degree:
        top += 1
    if bounds is not None:
        top = min(top, len(bounds))

    def rec(i: int, remaining: int, tail: list[int]):
        # i: 1-based index currently being chosen (descending)
        if i == 0:
            if remaining == 0:
                out.append(_strip(tail[::-1]))
            return
        w = (1 << i) - 1
        cap = remaining // w
        if bounds is not None:
            cap = min(cap, bounds[i - 1] - 1)
        if i == 1:
            if remaining <= cap:
                rec(0, 0, tail + [remaining])
            return
        for x in range(cap + 1):
            rec(i - 1, remaining - x * w, tail + [x])

    rec(top, degree, [])
    out.sort(key=lambda r: tuple(reversed(r + (0,) * (top - len(r)))))
    return tuple(out)


@lru_cache(maxsize=None)
def milnor_product(r: tuple[int, ...], s: tuple[int, ...]) -> frozenset:
    """Sq(r) * Sq(s) in the Milnor basis, mod 2."""
    if not r:
        return frozenset([s])
    if not s:
        return frozenset([r])
    rows = len(r)
    cols = len(s)
    result: set[tuple[int, ...]] = set()
    # x[i][j] for i in 1..rows, j in 1..cols; x[i][0], x[0][j] are determined
    x = [[0] * (cols + 1) for _ in range(rows + 1)]

    def finish():
        for j in range(1, cols + 1):
            used = sum(x[i][j] for i in range(1, rows + 1))
            if used > s[j - 1]:
                return
            x[0][j] = s[j - 1] - used
        ndiag = rows + cols
        t = []
        for n in range(1, ndiag + 1):
            acc = 0
            for i in range(max(0, n - cols), min(n, rows) + 1):
                v = x[i][n - i]
                if acc & v:
                    return
                acc |= v
            t.append(acc)
        key = _strip(t)
        if key in result:
            result.remove(key)
        else:
            result.add(key)

    def row(i: int):
        if i > rows:
            finish()
            return
        ri = r[i - 1]

        def col(j: int, remaining: int):
            if j > cols:
                x[i][0] = remaining
                row(i + 1)
                return
            w = 1 << j
            cap = min(remaining // w, s[j - 1])
            for v in range(cap + 1):
                x[i][j] = v
                col(j + 1, remaining - v * w)
            x[i][j] = 0

        col(1, ri)

    row(1)
    return frozenset(result)


def multiply_sums(a, b) -> frozenset:
    """Product of two mod 2 sums of Milnor basis elements."""
    out: set = set()
    for r in a:
        for s in b:
            out ^= milnor_product(r, s)
    return frozenset(out)


def format_milnor(r: tuple[int, ...]) -> str:
    return "Sq(" + ",".join(map(str, r)) + ")" if r else "1"
