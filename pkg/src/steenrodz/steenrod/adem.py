"""Admissible monomials, Adem relations and the antipode."""
from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable

from ..f2core import Echelon, bits
from .milnor import milnor_basis, milnor_degree, multiply_sums

Word = tuple[int, ...]


def binom_odd(n: int, k: int) -> bool:
    """C(n, k) mod 2 by Lucas' theorem (zero outside 0 <= k <= n)."""
    return 0 <= k <= n and (k & ~n) == 0


def is_admissible(word: Word) -> bool:
    return all(w > 0 for w in word) and all(word[i] >= 2 * word[i + 1] for i in range(len(word) - 1))


@lru_cache(maxsize=None)
def _reduce(word: Word) -> frozenset:
    word = tuple(w for w in word if w)
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a < 2 * b:
            out: set = set()
            head, tail = word[:i], word[i + 2:]
            for c in range(a // 2 + 1):
                if binom_odd(b - c - 1, a - 2 * c):
                    mid = (a + b - c, c) if c else (a + b,)
                    out ^= _reduce(head + mid + tail)
            return frozenset(out)
    return frozenset([word])


class AlgebraElement:
    """A mod 2 sum of admissible monomials, all of one degree."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Word] = ()):
        acc: set = set()
        for t in terms:
            t = tuple(t)
            if not is_admissible(t):
                acc ^= _reduce(t)
            else:
                acc ^= {t}
        degrees = {sum(t) for t in acc}
        if len(degrees) > 1:
            raise ValueError(f"inhomogeneous element with degrees {sorted(degrees)}")
        self.terms = frozenset(acc)

    @classmethod
    def _raw(cls, terms) -> "AlgebraElement":
        obj = cls.__new__(cls)
        obj.terms = frozenset(terms)
        return obj

    @classmethod
    def unit(cls) -> "AlgebraElement":
        return cls._raw([()])

    @classmethod
    def sq(cls, k: int) -> "AlgebraElement":
        return cls._raw([(k,)] if k else [()])

    @property
    def degree(self) -> int | None:
        for t in self.terms:
            return sum(t)
        return None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if self and other and self.degree != other.degree:
            raise ValueError("cannot add elements of different degrees")
        return AlgebraElement._raw(self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def sorted_terms(self) -> list[Word]:
        return sorted(self.terms, key=lambda t: (len(t), tuple(-x for x in t)))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(" ".join(f"Sq{i}" for i in t) if t else "1" for t in self.sorted_terms())

    def __repr__(self) -> str:
        return f"AlgebraElement({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "AlgebraElement":
        """Inverse of ``str``: ``"Sq4 Sq2 Sq1 + Sq7"``, ``"1"``, ``"0"``."""
        text = text.strip()
        if text == "0":
            return cls()
        terms = []
        for part in text.split("+"):
            part = part.strip()
            if part == "1":
                terms.append(())
                continue
            toks = part.split()
            if not toks or not all(re.fullmatch(r"Sq\d+", t) for t in toks):
                raise ValueError(f"cannot parse monomial {part!r}")
            terms.append(tuple(int(t[2:]) for t in toks))
        return cls(terms)

    def to_milnor(self) -> frozenset:
        out: set = set()
        for t in self.terms:
            out ^= admissible_to_milnor(t)
        return frozenset(out)

    @classmethod
    def from_milnor(cls, terms: Iterable[tuple[int, ...]]) -> "AlgebraElement":
        out: set = set()
        for r in terms:
            out ^= milnor_to_admissible(r)
        return cls._raw(out)


def adem_reduce(word: Iterable[int]) -> AlgebraElement:
    """Rewrite ``Sq^{w1} ... Sq^{wk}`` as a sum of admissible monomials."""
    return AlgebraElement._raw(_reduce(tuple(word)))


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    out: set = set()
    for s in a.terms:
        for t in b.terms:
            out ^= _reduce(s + t)
    return AlgebraElement._raw(out)


@lru_cache(maxsize=None)
def _admissible_all(degree: int, bound: int) -> tuple[Word, ...]:
    # admissible words of ``degree`` whose first letter is <= bound
    if degree == 0:
        return ((),)
    out = []
    for first in range(min(degree, bound), 0, -1):
        for rest in _admissible_all(degree - first, first // 2):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def admissible_to_milnor(word: Word) -> frozenset:
    acc = frozenset([()])
    for k in word:
        acc = multiply_sums(acc, [(k,)])
    return acc


@lru_cache(maxsize=None)
def _conversion(degree: int):
    """Echelon of admissibles of ``degree`` in Milnor coordinates, with tracking."""
    mb = milnor_basis(degree)
    index = {r: i for i, r in enumerate(mb)}
    words = _admissible_all(degree, degree)
    ech = Echelon(track=True)
    for w in words:
        v = 0
        for r in admissible_to_milnor(w):
            v ^= 1 << index[r]
        ech.add_tracked(v)
    if len(ech) != len(mb):
        raise AssertionError("admissible and Milnor bases disagree in size")
    return index, words, ech


@lru_cache(maxsize=None)
def milnor_to_admissible(r: tuple[int, ...]) -> frozenset:
    index, words, ech = _conversion(milnor_degree(r))
    rem, combo = ech.decompose(1 << index[r])
    assert rem == 0
    return frozenset(words[j] for j in bits(combo))


def admissible_basis(degree: int, profile=None) -> list:
    """Basis of the degree ``degree`` part of the algebra.

    For the whole algebra (``profile`` None or full A) this is the admissible
    monomials.  For a finite profile the admissible monomials do not in general
    lie in the subalgebra, so the basis returned is the Milnor profile basis,
    each element written out as an :class:`AlgebraElement`.
    """
    if degree < 0:
        return []
    if profile is None or profile.is_full:
        return list(_admissible_all(degree, degree))
    return [AlgebraElement.from_milnor([r]) for r in profile.basis(degree)]


@lru_cache(maxsize=None)
def _chi_sq(n: int) -> frozenset:
    if n == 0:
        return frozenset([()])
    out: set = set()
    for i in range(1, n + 1):
        for t in _chi_sq(n - i):
            out ^= _reduce((i,) + t)
    return frozenset(out)


@lru_cache(maxsize=None)
def _chi_word(word: Word) -> frozenset:
    acc = frozenset([()])
    for k in word:
        # chi reverses products
        nxt: set = set()
        for s in _chi_sq(k):
            for t in acc:
                nxt ^= _reduce(s + t)
        acc = frozenset(nxt)
    return acc


def antipode(a: AlgebraElement) -> AlgebraElement:
    out: set = set()
    for t in a.terms:
        out ^= _chi_word(t)
    return AlgebraElement._raw(out)


@lru_cache(maxsize=None)
def milnor_primitive(n: int) -> AlgebraElement:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return AlgebraElement.sq(1)
    prev = milnor_primitive(n - 1)
    s = AlgebraElement.sq(1 << n)
    return s * prev + prev * s


def milnor_primitive_milnor(n: int) -> tuple[int, ...]:
    """Q_n in the Milnor basis: Sq(0, ..., 0, 1)."""
    return (0,) * n + (1,)

