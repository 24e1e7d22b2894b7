"""Roth's s-maps, the j-map, and A-module structures on A(2).

An s-map is a 22-bit vector.  Bit k says whether the k-th slot monomial of
A(2)_* (degrees 8, 12, 14, 15, 16, 20, 22, 23) is sent to the unique generator
of (A//A(2))_* in its degree.  Everything else is sent to zero.  Degree 16
(xi1^16) is a genuine slot: the four bits there are free in every valid map.

The criterion asks that (sbar (x) sbar) psi j vanish on all of A(2)_*.
Two routes compute it.  The direct route evaluates the j-map for one s-map
over F2.  The symbolic route carries the 22 bits as Boolean
variables (polynomials in algebraic normal form, a set of variable masks),
and then evaluates the resulting polynomials on all 2^22 assignments at once.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .f2core import bits, quotient_coordinates, span_closure
from .modules import FiniteModule, validate
from .steenrod.adem import AlgebraElement, milnor_primitive
from .steenrod.dual import (
    A2_BOX,
    _total_sq_mono,
    coproduct,
    dual_quotient_basis,
    in_a2_box,
    mono_degree,
    mono_mul,
)
from .steenrod.profile import Profile

SLOT_DEGREES = (8, 12, 14, 15, 16, 20, 22, 23)
NSLOTS = 22
TOP = (7, 3, 1)  # xi1^7 xi2^3 xi3
EXPECTED_COUNT = 1600

Mono = tuple[int, ...]


@lru_cache(maxsize=None)
def a2_dual_basis() -> tuple[Mono, ...]:
    """The 64 monomials of A(2)_*, by degree then descending lex."""
    out = []
    for d in range(24):
        out.extend(dual_quotient_basis(d, "A(2)_*"))
    return tuple(out)


@lru_cache(maxsize=None)
def smap_slots() -> tuple[tuple[int, Mono], ...]:
    out = []
    for d in SLOT_DEGREES:
        out.extend((d, m) for m in dual_quotient_basis(d, "A(2)_*"))
    assert len(out) == NSLOTS
    return tuple(out)


@lru_cache(maxsize=None)
def codomain_generator(degree: int) -> Mono:
    gens = dual_quotient_basis(degree, "(A//A(2))_*")
    if len(gens) != 1:
        raise ValueError(f"(A//A(2))_* has {len(gens)} monomials in degree {degree}")
    return gens[0]


@lru_cache(maxsize=None)
def _slot_index() -> dict[Mono, int]:
    return {m: k for k, (_, m) in enumerate(smap_slots())}


@dataclass(frozen=True)
class SMap:
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != NSLOTS or any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"an s-map is {NSLOTS} bits")

    @classmethod
    def from_int(cls, k: int) -> "SMap":
        if not 0 <= k < 1 << NSLOTS:
            raise ValueError("s-map index out of range")
        return cls(tuple((k >> i) & 1 for i in range(NSLOTS)))

    @classmethod
    def parse(cls, text: str) -> "SMap":
        text = text.strip()
        if len(text) != NSLOTS or set(text) - {"0", "1"}:
            raise ValueError(f"expected {NSLOTS} characters of 0/1")
        return cls(tuple(int(c) for c in text))

    def __int__(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def value(self, m: Mono) -> frozenset:
        """s(m) as a set of xi monomials."""
        k = _slot_index().get(m)
        if k is None or not self.bits[k]:
            return frozenset()
        return frozenset([codomain_generator(mono_degree(m))])


def split_low_high(m: Mono) -> tuple[Mono, Mono]:
    """xi^E = xi^{E_low} * xi^{E_high} with xi^{E_low} in the A(2)_* box."""
    low = []
    high = []
    for i, e in enumerate(m):
        b = A2_BOX[i] if i < len(A2_BOX) else 1
        low.append(e % b)
        high.append(e - e % b)
    return _strip(low), _strip(high)


def _strip(e) -> Mono:
    e = list(e)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


# extension rules for sbar on monomials xi^{E_low} xi^{E_high} with E_low = 0
RULES = ("identity", "zero")
DEFAULT_RULE = "identity"


def sbar(s: SMap, m: Mono, rule: str = DEFAULT_RULE) -> frozenset:
    low, high = split_low_high(m)
    if low:
        return frozenset(mono_mul(x, high) for x in s.value(low))
    if rule == "identity" and high:
        return frozenset([high])
    return frozenset()


def _reduced_coproduct(m: Mono):
    for left, right in coproduct(m):
        if left and right:
            yield left, right


# ---------------------------------------------------------------------------
# direct route


def j_table(s: SMap, rule: str = DEFAULT_RULE) -> dict[Mono, frozenset]:
    """j(a) for all 64 basis monomials a of A(2)_*, by induction on degree."""
    table: dict[Mono, frozenset] = {}
    for a in a2_dual_basis():
        acc = {a} ^ set(s.value(a))
        for left, right in _reduced_coproduct(a):
            if not in_a2_box(left):
                continue
            tail = sbar(s, right, rule)
            if not tail:
                continue
            for x in table[left]:
                for y in tail:
                    acc ^= {mono_mul(x, y)}
        table[a] = frozenset(acc)
    return table


def criterion_value(s: SMap, rule: str = DEFAULT_RULE, only_top: bool = False) -> dict[Mono, frozenset]:
    """(sbar (x) sbar) psi j(a) for basis monomials a, as sets of monomial pairs.

    Only nonzero values are returned.  ``only_top`` restricts to xi1^7 xi2^3 xi3.
    """
    jt = j_table(s, rule)
    out: dict[Mono, frozenset] = {}
    for a in ([TOP] if only_top else a2_dual_basis()):
        acc: set = set()
        for m in jt[a]:
            for left, right in coproduct(m):
                sl = sbar(s, left, rule)
                if not sl:
                    continue
                for x in sl:
                    for y in sbar(s, right, rule):
                        acc ^= {(x, y)}
        if acc:
            out[a] = frozenset(acc)
    return out


def roth_criterion(s: SMap, rule: str = DEFAULT_RULE) -> bool:
    return not criterion_value(s, rule)


# ---------------------------------------------------------------------------
# symbolic route: coefficients are Boolean polynomials (frozensets of variable masks)


def _pmul(p: frozenset, q: frozenset) -> frozenset:
    out: set = set()
    for a in p:
        for b in q:
            out ^= {a | b}
    return frozenset(out)


def _padd(acc: dict, key, p: frozenset):
    cur = acc.get(key, frozenset()) ^ p
    if cur:
        acc[key] = cur
    else:
        acc.pop(key, None)


_ONE = frozenset([0])


def _sym_s(m: Mono) -> dict:
    k = _slot_index().get(m)
    if k is None:
        return {}
    return {codomain_generator(mono_degree(m)): frozenset([1 << k])}


def _sym_sbar(m: Mono, rule: str) -> dict:
    low, high = split_low_high(m)
    if low:
        return {mono_mul(x, high): p for x, p in _sym_s(low).items()}
    if rule == "identity" and high:
        return {high: _ONE}
    return {}


@lru_cache(maxsize=None)
def symbolic_j_table(rule: str = DEFAULT_RULE) -> dict[Mono, dict]:
    table: dict[Mono, dict] = {}
    for a in a2_dual_basis():
        acc: dict = {a: _ONE}
        for x, p in _sym_s(a).items():
            _padd(acc, x, p)
        for left, right in _reduced_coproduct(a):
            if not in_a2_box(left):
                continue
            tail = _sym_sbar(right, rule)
            for x, p in table[left].items():
                for y, q in tail.items():
                    _padd(acc, mono_mul(x, y), _pmul(p, q))
        table[a] = acc
    return table


@lru_cache(maxsize=None)
def symbolic_criterion(rule: str = DEFAULT_RULE, only_top: bool = False) -> dict:
    """Map (a, x, y) -> Boolean polynomial giving the coefficient of x (x) y at a."""
    jt = symbolic_j_table(rule)
    out: dict = {}
    for a in ([TOP] if only_top else a2_dual_basis()):
        for m, p in jt[a].items():
            for left, right in coproduct(m):
                sl = _sym_sbar(left, rule)
                if not sl:
                    continue
                sr = _sym_sbar(right, rule)
                for x, q in sl.items():
                    for y, r in sr.items():
                        _padd(out, (a, x, y), _pmul(p, _pmul(q, r)))
    return out


def evaluate_polynomial(poly: Iterable[int], lo: int, hi: int) -> np.ndarray:
    """Values of a Boolean polynomial on the assignments lo..hi-1 (bit i = variable i)."""
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.zeros(hi - lo, dtype=bool)
    for mask in poly:
        term = np.ones(hi - lo, dtype=bool)
        for i in bits(mask):
            term &= ((idx >> i) & 1).astype(bool)
        out ^= term
    return out


def _scan_chunk(args) -> list[int]:
    lo, hi, rule, only_top = args
    polys = list(symbolic_criterion(rule, only_top).values())
    bad = np.zeros(hi - lo, dtype=bool)
    for p in polys:
        bad |= evaluate_polynomial(p, lo, hi)
    return (np.nonzero(~bad)[0] + lo).tolist()


def enumerate_valid(workers: int = 1, rule: str = DEFAULT_RULE, chunks: int | None = None,
                    only_top: bool = False) -> list[int]:
    """All s-map indices (see :meth:`SMap.from_int`) satisfying the criterion."""
    total = 1 << NSLOTS
    chunks = chunks or max(1, workers) * 4
    step = -(-total // chunks)
    jobs = [(lo, min(total, lo + step), rule, only_top) for lo in range(0, total, step)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(j) for j in jobs]
    return sorted(k for part in parts for k in part)


def count_valid(workers: int = 1, rule: str = DEFAULT_RULE) -> int:
    return len(enumerate_valid(workers, rule))


# ---------------------------------------------------------------------------
# modules


@lru_cache(maxsize=None)
def _a2_milnor_basis() -> tuple[Mono, ...]:
    """Basis of A(2) dual to :func:`a2_dual_basis` (Sq(E) dual to xi^E), in the
    order of the canonical A(2)-module: by degree, then Milnor basis order."""
    prof = Profile.a(2)
    return tuple(r for d in range(prof.top_degree + 1) for r in prof.basis(d))


class CriterionError(ValueError):
    pass


def module_from_smap(s: SMap, rule: str = DEFAULT_RULE, check: bool = True) -> FiniteModule:
    """The A-module structure on A(2) determined by ``s``.

    Sq^i(x) has coefficient on y equal to the coefficient of x_* in
    pi((j(y_*)) Sq^i), where x_* is the dual monomial of x.
    """
    if check and not roth_criterion(s, rule):
        raise CriterionError(f"s-map {s} fails the criterion")
    jt = j_table(s, rule)
    basis = _a2_milnor_basis()
    index = {m: i for i, m in enumerate(basis)}
    degrees = [mono_degree(m) for m in basis]
    actions: dict[tuple[int, int], int] = {}
    for yi, y in enumerate(basis):
        comps: dict[int, set] = {}
        for m in jt[y]:
            for k, terms in _total_sq_mono(m).items():
                if k:
                    comps.setdefault(k, set()).symmetric_difference_update(terms)
        for k, terms in comps.items():
            for x in terms:
                xi_ = index.get(x) if in_a2_box(x) else None
                if xi_ is not None:
                    actions[(xi_, k)] = actions.get((xi_, k), 0) ^ (1 << yi)
    names = ["Sq(" + ",".join(map(str, r)) + ")" if r else "1" for r in basis]
    return FiniteModule(Profile.full(), degrees, actions, names)


@lru_cache(maxsize=None)
def condition_element() -> AlgebraElement:
    q2 = milnor_primitive(2)
    return q2 * AlgebraElement.sq(8) * q2


def satisfies_condition(m: FiniteModule) -> bool:
    """Q_2 Sq^8 Q_2 acting on the degree 0 generator is zero."""
    iota = 1 << m.basis_in_degree(0)[0]
    return m.apply_element(condition_element(), iota) == 0


def b2_from_a2(m: FiniteModule) -> FiniteModule:
    """Quotient of an A-module structure on A(2) by the submodule generated by Q_2 iota."""
    if not satisfies_condition(m):
        raise CriterionError("Q2 Sq8 Q2 does not annihilate the bottom class; "
                             "the quotient need not be B(2)")
    iota = 1 << m.basis_in_degree(0)[0]
    seed = m.apply_element(milnor_primitive(2), iota)
    ops = [lambda v, k=k: m.sq(k, v) for k in range(1, m.span + 1)]
    sub = span_closure([seed], ops)
    basis = _a2_milnor_basis()
    has_q = [i for i, r in enumerate(basis) if len(r) > 2 and r[2]]
    rest = [i for i in range(m.dim) if i not in set(has_q)]
    complement, project = quotient_coordinates(sub.basis(), m.dim, prefer=has_q + rest)
    comp_idx = [c.bit_length() - 1 for c in complement]
    actions = {}
    for a, i in enumerate(comp_idx):
        for k in range(1, m.span + 1):
            w = project(m.sq(k, 1 << i))
            if w:
                actions[(a, k)] = w
    return FiniteModule(Profile.full(), [m.degrees[i] for i in comp_idx], actions,
                        [m.names[i] for i in comp_idx])


@dataclass
class EmittedModule:
    index: int
    smap: SMap
    a2: FiniteModule
    condition: bool
    b2: FiniteModule | None
    violations: list[str]


def emit(index: int, rule: str = DEFAULT_RULE) -> EmittedModule:
    s = SMap.from_int(index)
    a2 = module_from_smap(s, rule, check=False)
    bad = validate(a2)
    cond = satisfies_condition(a2)
    b2 = b2_from_a2(a2) if cond else None
    return EmittedModule(index, s, a2, cond, b2, bad)


def _emit_job(args):
    return emit(*args)


def emit_all(indices: Iterable[int], workers: int = 1, rule: str = DEFAULT_RULE) -> list[EmittedModule]:
    jobs = [(k, rule) for k in indices]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_emit_job, jobs, chunksize=16))
    return [_emit_job(j) for j in jobs]
