"""Sub-Hopf-algebra profiles: the whole algebra A, A(n), and E(Q_n)."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from ..f2core import Echelon, bits
from .adem import milnor_to_admissible
from .milnor import milnor_basis, milnor_degree, multiply_sums

FULL, AN, EQ = "A", "A(n)", "E(Qn)"


@dataclass(frozen=True, order=True)
class Profile:
    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in (FULL, AN, EQ):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    @classmethod
    def full(cls) -> "Profile":
        return cls(FULL)

    @classmethod
    def a(cls, n: int) -> "Profile":
        return cls(AN, n)

    @classmethod
    def e(cls, n: int) -> "Profile":
        return cls(EQ, n)

    @classmethod
    def parse(cls, text: str) -> "Profile":
        t = text.strip().replace(" ", "")
        if t == "A":
            return cls.full()
        m = re.fullmatch(r"A\(?(\d+)\)?", t)
        if m:
            return cls.a(int(m.group(1)))
        m = re.fullmatch(r"E\(?Q_?(\d+)\)?|EQ(\d+)", t)
        if m:
            return cls.e(int(m.group(1) or m.group(2)))
        raise ValueError(f"cannot parse profile {text!r}")

    def __str__(self) -> str:
        if self.kind == FULL:
            return "A"
        if self.kind == AN:
            return f"A({self.n})"
        return f"E(Q{self.n})"

    @property
    def is_full(self) -> bool:
        return self.kind == FULL

    @property
    def qdeg(self) -> int:
        """Degree of Q_n (only meaningful for E(Q_n))."""
        return (1 << (self.n + 1)) - 1

    @property
    def bounds(self) -> tuple[int, ...] | None:
        if self.kind == AN:
            return tuple(1 << (self.n + 2 - i) for i in range(1, self.n + 2))
        return None

    @property
    def top_degree(self) -> int | None:
        if self.kind == FULL:
            return None
        if self.kind == EQ:
            return self.qdeg
        return sum((b - 1) * ((1 << (i + 1)) - 1) for i, b in enumerate(self.bounds))

    def basis(self, degree: int) -> tuple[tuple[int, ...], ...]:
        """Milnor basis of the profile in ``degree``."""
        if self.kind == EQ:
            if degree == 0:
                return ((),)
            if degree == self.qdeg:
                return ((0,) * self.n + (1,),)
            return ()
        if self.kind == AN and degree > self.top_degree:
            return ()
        return milnor_basis(degree, self.bounds)

    def contains(self, r: tuple[int, ...]) -> bool:
        if self.kind == FULL:
            return True
        if self.kind == EQ:
            return r == () or r == (0,) * self.n + (1,)
        b = self.bounds
        return len(r) <= len(b) and all(x < bb for x, bb in zip(r, b))

    def dimension(self) -> int | None:
        if self.kind == FULL:
            return None
        return sum(len(self.basis(d)) for d in range(self.top_degree + 1))

    def admits_sq(self, k: int) -> bool:
        """Whether a module over this profile may carry a stored Sq^k action key."""
        if self.kind == FULL:
            return k >= 1
        if self.kind == EQ:
            return k == self.qdeg
        return 1 <= k <= self.top_degree and (k,) in set(self.basis(k))

    def meet(self, other: "Profile") -> "Profile":
        """Largest profile contained in both (for the cases used here)."""
        if self == other or other.is_full:
            return self
        if self.is_full:
            return other
        if self.kind == AN and other.kind == AN:
            return self if self.n <= other.n else other
        if self.kind == EQ and other.kind == EQ:
            if self.n != other.n:
                raise ValueError(f"no common profile for {self} and {other}")
            return self
        e, a = (self, other) if self.kind == EQ else (other, self)
        if e.n <= a.n:
            return e
        raise ValueError(f"no common profile for {self} and {other}")

    def contains_profile(self, other: "Profile") -> bool:
        try:
            return self.meet(other) == other
        except ValueError:
            return False

    def words(self, r: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        """Express Milnor ``Sq(r)`` as a sum of words in the stored action keys.

        A module over this profile stores Sq^k matrices; applying the returned
        words (rightmost letter first) and summing gives the action of Sq(r).
        """
        if not self.contains(r):
            raise ValueError(f"Sq{r} is not in {self}")
        if r == ():
            return ((),)
        if self.kind == FULL:
            return tuple(sorted(milnor_to_admissible(r)))
        if self.kind == EQ:
            return ((self.qdeg,),)
        return tree_words(self.n, r)


def _letters(n: int | None, degree: int) -> tuple[int, ...]:
    out = []
    g = 1
    while g <= degree and (n is None or g <= 1 << n):
        out.append(g)
        g <<= 1
    return tuple(out)


def _profile_basis(n: int | None, degree: int):
    return milnor_basis(degree) if n is None else Profile.a(n).basis(degree)


@lru_cache(maxsize=None)
def _tree(n: int | None, degree: int):
    """Words in Sq^1, Sq^2, Sq^4, ... forming a basis of A(n) (A if ``n`` is None) in ``degree``.

    Returns ``(words, index, echelon, values)``; ``echelon`` tracks how Milnor
    coordinates decompose over ``words``.
    """
    mb = _profile_basis(n, degree)
    index = {r: i for i, r in enumerate(mb)}
    if degree == 0:
        words = [()]
        values = [frozenset([()])]
    else:
        words, values = [], []
        ech0 = Echelon()
        for g in _letters(n, degree):
            sub_words, _, _, sub_values = _tree(n, degree - g)
            for w, val in zip(sub_words, sub_values):
                prod = multiply_sums([(g,)], val)
                v = 0
                for r in prod:
                    v ^= 1 << index[r]
                if ech0.add(v):
                    words.append((g,) + w)
                    values.append(prod)
                    if len(words) == len(mb):
                        break
            if len(words) == len(mb):
                break
        if len(words) != len(mb):
            raise AssertionError(f"generators fail to span degree {degree}")
    ech = Echelon(track=True)
    for val in values:
        v = 0
        for r in val:
            v ^= 1 << index[r]
        ech.add_tracked(v)
    return tuple(words), index, ech, tuple(values)


@lru_cache(maxsize=None)
def tree_words(n: int | None, r: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Sq(r) as a sum of words in the generators Sq^{2^i} (of A(n), or of A if ``n`` is None)."""
    words, index, ech, _ = _tree(n, milnor_degree(r))
    rem, combo = ech.decompose(1 << index[r])
    assert rem == 0
    return tuple(words[j] for j in bits(combo))


def tree_basis(n: int | None, degree: int) -> tuple[tuple[int, ...], ...]:
    return _tree(n, degree)[0]


def tree_values(n: int | None, degree: int) -> tuple[frozenset, ...]:
    return _tree(n, degree)[3]
