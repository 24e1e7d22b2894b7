"""The dual Steenrod algebra A_* = F2[xi_1, xi_2, ...].

A monomial is a tuple of exponents ``(e1, e2, ...)`` with trailing zeros
stripped.  Sums are frozensets of monomials.
"""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import product
from typing import Iterable

DEGREE_CAP = 48

Mono = tuple[int, ...]

A2_BOX = (8, 4, 2)


def _strip(e) -> Mono:
    e = list(e)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


def mono_degree(m: Mono) -> int:
    return sum(x * ((1 << (i + 1)) - 1) for i, x in enumerate(m))


def mono_mul(a: Mono, b: Mono) -> Mono:
    if len(a) < len(b):
        a, b = b, a
    return _strip(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))


def xi(i: int, power: int = 1) -> Mono:
    if i == 0 or power == 0:
        return ()
    return (0,) * (i - 1) + (power,)


def mul_sums(a: Iterable[Mono], b: Iterable[Mono]) -> frozenset:
    out: set = set()
    b = list(b)
    for x in a:
        for y in b:
            out ^= {mono_mul(x, y)}
    return frozenset(out)


def format_mono(m: Mono, name: str = "xi") -> str:
    parts = [f"{name}{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e]
    return " ".join(parts) if parts else "1"


def parse_mono(text: str, name: str = "xi") -> Mono:
    text = text.strip()
    if text == "1":
        return ()
    exps: dict[int, int] = {}
    for tok in text.split():
        m = re.fullmatch(rf"{name}(\d+)(?:\^(\d+))?", tok)
        if not m or int(m.group(1)) < 1:
            raise ValueError(f"cannot parse factor {tok!r}")
        i = int(m.group(1))
        exps[i] = exps.get(i, 0) + int(m.group(2) or 1)
    top = max(exps)
    return _strip(exps.get(i, 0) for i in range(1, top + 1))


class DualElement:
    """A homogeneous mod 2 sum of monomials in the xi_i."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable = ()):
        acc: set = set()
        for t in terms:
            acc ^= {_strip(t)}
        if len({mono_degree(t) for t in acc}) > 1:
            raise ValueError("inhomogeneous dual element")
        self.terms = frozenset(acc)

    @property
    def degree(self) -> int | None:
        for t in self.terms:
            return mono_degree(t)
        return None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, DualElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __add__(self, other: "DualElement") -> "DualElement":
        return DualElement(self.terms ^ other.terms)

    def __mul__(self, other: "DualElement") -> "DualElement":
        return DualElement(mul_sums(self.terms, other.terms))

    def __pow__(self, k: int) -> "DualElement":
        out = DualElement([()])
        for _ in range(k):
            out = out * self
        return out

    def sorted_terms(self) -> list[Mono]:
        return sorted(self.terms, key=_lex_key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(format_mono(t) for t in self.sorted_terms())

    def __repr__(self) -> str:
        return f"DualElement({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "DualElement":
        text = text.strip()
        if text == "0":
            return cls()
        return cls(parse_mono(p) for p in text.split("+"))


def _lex_key(m: Mono, width: int = 8):
    # descending lexicographic on (e1, e2, ...), then by length
    padded = m + (0,) * (width - len(m))
    return tuple(-x for x in padded), len(m)


@lru_cache(maxsize=None)
def _psi_power(i: int, k: int) -> frozenset:
    """psi(xi_i^{2^k}) = sum_j xi_{i-j}^{2^{j+k}} (x) xi_j^{2^k}."""
    return frozenset((xi(i - j, 1 << (j + k)), xi(j, 1 << k)) for j in range(i + 1))


def _pair_mul(a: frozenset, b: frozenset) -> frozenset:
    out: set = set()
    for l1, r1 in a:
        for l2, r2 in b:
            out ^= {(mono_mul(l1, l2), mono_mul(r1, r2))}
    return frozenset(out)


@lru_cache(maxsize=None)
def coproduct(m: Mono) -> frozenset:
    """Milnor coproduct of a monomial as a set of (left, right) pairs."""
    m = _strip(m)
    if not m:
        return frozenset([((), ())])
    for i, e in enumerate(m):
        if e:
            k = (e & -e).bit_length() - 1
            rest = list(m)
            rest[i] -= 1 << k
            return _pair_mul(_psi_power(i + 1, k), coproduct(_strip(rest)))
    raise AssertionError


def coproduct_element(x: DualElement) -> frozenset:
    out: set = set()
    for t in x.terms:
        out ^= coproduct(t)
    return frozenset(out)


@lru_cache(maxsize=None)
def _zeta(i: int) -> frozenset:
    if i == 0:
        return frozenset([()])
    out: set = set()
    for k in range(i):
        out ^= mul_sums([xi(i - k, 1 << k)], _zeta(k))
    return frozenset(out)


def conjugate_generator(i: int) -> DualElement:
    """zeta_i, the conjugate of xi_i, in the xi basis."""
    if i < 1:
        raise ValueError("i must be at least 1")
    return DualElement(_zeta(i))


@lru_cache(maxsize=None)
def zeta_power(i: int, k: int) -> frozenset:
    """zeta_i^{2^k} in the xi basis (Frobenius)."""
    return frozenset(tuple(x << k for x in t) for t in _zeta(i))


@lru_cache(maxsize=None)
def zeta_monomial(e: Mono) -> frozenset:
    """The product prod zeta_i^{e_i}, expanded in the xi basis."""
    acc = frozenset([()])
    for i, x in enumerate(e):
        k = 0
        while x:
            if x & 1:
                acc = mul_sums(acc, zeta_power(i + 1, k))
            x >>= 1
            k += 1
    return acc


@lru_cache(maxsize=None)
def _total_sq_mono(m: Mono) -> dict:
    """All components of (m)Sq: map lowering -> frozenset of monomials."""
    # each xi_n^{e} maps to (xi_n + xi_{n-1})^e; choose sub-exponent c with C(e,c) odd
    factors = []
    for i, e in enumerate(m):
        n = i + 1
        opts = []
        c = e
        while True:
            # xi_n^{e-c} xi_{n-1}^c, lowering c * 2^{n-1}
            opts.append((c, n))
            if c == 0:
                break
            c = (c - 1) & e
        factors.append((e, opts))
    out: dict[int, set] = {}
    for choice in product(*(opts for _, opts in factors)):
        exps = list(m)
        low = 0
        for (e, _), (c, n) in zip(factors, choice):
            exps[n - 1] -= c
            if n >= 2:
                exps[n - 2] += c
            low += c << (n - 1)
        out.setdefault(low, set()).symmetric_difference_update({_strip(exps)})
    return {k: frozenset(v) for k, v in out.items() if v}


def right_total_sq_terms(terms: Iterable[Mono], i: int) -> frozenset:
    out: set = set()
    for t in terms:
        out ^= _total_sq_mono(t).get(i, frozenset())
    return frozenset(out)


def right_total_sq(x: DualElement, i: int) -> DualElement:
    """Component (x)Sq^i of the right total square action; lowers degree by i."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    return DualElement(right_total_sq_terms(x.terms, i))


def in_a2_box(m: Mono) -> bool:
    return len(m) <= 3 and all(x < b for x, b in zip(m, A2_BOX))


def project_a2(terms: Iterable[Mono]) -> frozenset:
    """The projection A_* -> A(2)_*."""
    return frozenset(t for t in terms if in_a2_box(t))


@lru_cache(maxsize=None)
def monomials(degree: int, width: int | None = None) -> tuple[Mono, ...]:
    """All xi monomials of ``degree`` (descending lex order)."""
    if degree < 0:
        return ()
    if width is None:
        width = max(1, (degree + 1).bit_length() - 1)
    out = []

    def rec(i: int, remaining: int, acc: list[int]):
        if i == 0:
            if remaining == 0:
                out.append(_strip(acc[::-1]))
            return
        w = (1 << i) - 1
        for x in range(remaining // w, -1, -1):
            rec(i - 1, remaining - x * w, acc + [x])

    rec(width, degree, [])
    out.sort(key=_lex_key)
    return tuple(out)


WHICH = ("A(2)_*", "(A//A(2))_*", "A_*")


def dual_quotient_basis(degree: int, which: str = "A(2)_*") -> list[Mono]:
    if which not in WHICH:
        raise ValueError(f"which must be one of {WHICH}")
    if degree > DEGREE_CAP:
        raise ValueError(f"degree {degree} exceeds the cap {DEGREE_CAP}")
    ms = monomials(degree)
    if which == "A_*":
        return list(ms)
    if which == "A(2)_*":
        return [m for m in ms if in_a2_box(m)]
    # (A//A(2))_* = F2[xi1^8, xi2^4, xi3^2, xi4, ...]
    return [m for m in ms if all(x % b == 0 for x, b in zip(m, A2_BOX))]
