"""Brown-Gitler modules N_1(j) for tmf, as A(2)-modules.

(A//A(2))_* = F2[zeta_1^8, zeta_2^4, zeta_3^2, zeta_4, ...] splits by weight,
with wt(zeta_i) = 2^{i-1}.  N_1(j) is the dual of the weight 8j part,
desuspended by 8j.  Monomials are exponent tuples in the zeta_i.
"""
from __future__ import annotations

from functools import lru_cache

from .modules import FiniteModule
from .steenrod.dual import _lex_key, coproduct, format_mono, mono_degree, zeta_monomial
from .steenrod.profile import Profile

MAX_J = 4
_STEP = (8, 4, 2)  # zeta_1, zeta_2, zeta_3 exponents come in these steps


def weight(m: tuple[int, ...]) -> int:
    return sum(e << i for i, e in enumerate(m))


def format_zeta(m: tuple[int, ...]) -> str:
    return format_mono(m, "zeta")


@lru_cache(maxsize=None)
def bg_basis(j: int) -> tuple[tuple[int, ...], ...]:
    """Monomials of (A//A(2))_* of weight 8j, ordered by degree then descending lex."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    w = 8 * j
    out = []

    def rec(i: int, remaining: int, acc: list[int]):
        # i is the 0-based zeta index; weights 2^i
        wt = 1 << i
        if wt > remaining:
            if remaining == 0:
                e = list(acc)
                while e and e[-1] == 0:
                    e.pop()
                out.append(tuple(e))
            return
        step = _STEP[i] if i < len(_STEP) else 1
        for e in range(0, remaining // wt + 1, step):
            rec(i + 1, remaining - e * wt, acc + [e])

    rec(0, w, [])
    out = sorted(set(out), key=lambda m: (mono_degree(m), _lex_key(m)))
    return tuple(out)


def _zeta_coproduct(m: tuple[int, ...]) -> frozenset:
    # psi(zeta_n) = sum zeta_i (x) zeta_{n-i}^{2^i}: the xi formula with factors swapped
    return frozenset((r, l) for l, r in coproduct(m))


@lru_cache(maxsize=None)
def bg_module(j: int) -> FiniteModule:
    """N_1(j) as an A(2)-module on the basis dual to :func:`bg_basis`.

    Sq^k(x_m) has coefficient on x_y equal to the number (mod 2) of terms
    l (x) m in psi(y) whose left factor l, written in the xi basis, contains
    xi_1^k (the dual of Sq^k).
    """
    if j > MAX_J:
        raise ValueError(f"N_1({j}) is beyond the supported range j <= {MAX_J}")
    basis = bg_basis(j)
    index = {m: i for i, m in enumerate(basis)}
    degrees = [mono_degree(m) - 8 * j for m in basis]
    prof = Profile.a(2)
    actions: dict[tuple[int, int], int] = {}
    for yi, y in enumerate(basis):
        for left, right in _zeta_coproduct(y):
            xi_idx = index.get(right)
            if xi_idx is None or not left:
                continue
            k = mono_degree(left)
            if not prof.admits_sq(k):
                continue
            if (k,) in zeta_monomial(left):
                actions[(xi_idx, k)] = actions.get((xi_idx, k), 0) ^ (1 << yi)
    return FiniteModule(prof, degrees, actions, [format_zeta(m) for m in basis])
