"""Finite graded modules over a profile of the Steenrod algebra.

A module has a homogeneous basis ``g_0, ..., g_{n-1}`` with given degrees.
Vectors are bitmasks over this basis.  The action is stored the way the
Bruner file format lists it: ``actions[(i, k)]`` is the bitmask of
``Sq^k(g_i)``, present only when nonzero.  Over ``E(Q_n)`` the key
``2^{n+1}-1`` holds the action of ``Q_n`` itself.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Iterable, Mapping

from .f2core import Echelon, F2Matrix, bits, quotient_coordinates
from .steenrod.adem import AlgebraElement, antipode, binom_odd
from .steenrod.milnor import milnor_basis, milnor_degree, milnor_product
from .steenrod.profile import Profile, tree_basis, tree_values, tree_words

Vector = int


class BrunerFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class FiniteModule:
    def __init__(
        self,
        profile: Profile,
        degrees: Iterable[int],
        actions: Mapping[tuple[int, int], Vector],
        names: Iterable[str] | None = None,
    ):
        self.profile = profile
        self.degrees = tuple(degrees)
        n = len(self.degrees)
        clean = {}
        for (i, k), v in actions.items():
            if not 0 <= i < n:
                raise ValueError(f"generator index {i} out of range")
            if k <= 0:
                raise ValueError(f"Sq^{k} cannot be stored")
            if v >> n:
                raise ValueError(f"Sq^{k}(g{i}) has targets out of range")
            for j in bits(v):
                if self.degrees[j] != self.degrees[i] + k:
                    raise ValueError(f"Sq^{k}(g{i}) hits g{j} in the wrong degree")
            if v:
                clean[(i, k)] = v
        self.actions = dict(sorted(clean.items()))
        self.names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(n))
        self._milnor_cache: dict = {}

    # basic shape ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.degrees)

    @cached_property
    def by_degree(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = defaultdict(list)
        for i, d in enumerate(self.degrees):
            out[d].append(i)
        return dict(sorted(out.items()))

    def basis_in_degree(self, d: int) -> list[int]:
        return self.by_degree.get(d, [])

    def degree_mask(self, d: int) -> Vector:
        v = 0
        for i in self.basis_in_degree(d):
            v |= 1 << i
        return v

    @property
    def bottom(self) -> int:
        return min(self.degrees) if self.degrees else 0

    @property
    def top(self) -> int:
        return max(self.degrees) if self.degrees else 0

    @property
    def span(self) -> int:
        return self.top - self.bottom

    def graded_dims(self) -> dict[int, int]:
        return {d: len(v) for d, v in self.by_degree.items()}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteModule)
            and self.profile == other.profile
            and self.degrees == other.degrees
            and self.actions == other.actions
        )

    def __repr__(self) -> str:
        return f"FiniteModule({self.profile}, dim={self.dim}, degrees {self.bottom}..{self.top})"

    def keys(self) -> list[int]:
        """Action keys this module may store."""
        if self.profile.kind == "E(Qn)":
            return [self.profile.qdeg] if self.profile.qdeg <= self.span else []
        return [k for k in range(1, self.span + 1) if self.profile.admits_sq(k)]

    # actions -------------------------------------------------------------
    def sq(self, k: int, v: Vector) -> Vector:
        if k == 0:
            return v
        out = 0
        acts = self.actions
        for i in bits(v):
            out ^= acts.get((i, k), 0)
        return out

    def apply_word(self, word: Iterable[int], v: Vector) -> Vector:
        """Apply ``Sq^{w1} ... Sq^{wk}`` (rightmost first)."""
        for k in reversed(tuple(word)):
            if not v:
                break
            v = self.sq(k, v)
        return v

    def _milnor_on_gen(self, r: tuple[int, ...], i: int) -> Vector:
        key = (r, i)
        hit = self._milnor_cache.get(key)
        if hit is None:
            hit = 0
            if self.degrees[i] + milnor_degree(r) <= self.top:
                for w in self.profile.words(r):
                    hit ^= self.apply_word(w, 1 << i)
            self._milnor_cache[key] = hit
        return hit

    def apply_milnor(self, r: tuple[int, ...], v: Vector) -> Vector:
        """Action of the Milnor basis element Sq(r), which must lie in the profile."""
        if not r:
            return v
        out = 0
        for i in bits(v):
            out ^= self._milnor_on_gen(r, i)
        return out

    def apply_element(self, a: AlgebraElement, v: Vector) -> Vector:
        if self.profile.is_full:
            out = 0
            for t in a.terms:
                out ^= self.apply_word(t, v)
            return out
        out = 0
        for r in a.to_milnor():
            out ^= self.apply_milnor(r, v)
        return out

    def action_matrix(self, k: int) -> F2Matrix:
        """Matrix of Sq^k on the whole module (column i is Sq^k(g_i))."""
        rows = [0] * self.dim
        for (i, kk), v in self.actions.items():
            if kk == k:
                for j in bits(v):
                    rows[j] |= 1 << i
        return F2Matrix(tuple(rows), self.dim)

    def q_action(self, n: int, v: Vector) -> Vector:
        """Action of the Milnor primitive Q_n."""
        if self.profile.kind == "E(Qn)":
            if self.profile.n != n:
                raise ValueError(f"Q{n} is not in {self.profile}")
            return self.sq(self.profile.qdeg, v)
        return self.apply_milnor((0,) * n + (1,), v)


# ---------------------------------------------------------------------------
# Bruner format


def parse_bruner(text: str, profile: Profile | None = None) -> FiniteModule:
    profile = profile or Profile.full()
    lines = text.splitlines()
    pos = 0

    def next_nonblank():
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            return None, None
        pos += 1
        return pos, lines[pos - 1]

    lineno, line = next_nonblank()
    if line is None:
        raise BrunerFormatError(1, "empty module file")
    try:
        n = int(line.split()[0])
        if len(line.split()) != 1 or n < 0:
            raise ValueError
    except ValueError:
        raise BrunerFormatError(lineno, "first line must be the generator count") from None
    degrees: list[int] = []
    while len(degrees) < n:
        lineno, line = next_nonblank()
        if line is None:
            raise BrunerFormatError(len(lines), f"expected {n} degrees, found {len(degrees)}")
        try:
            degrees.extend(int(x) for x in line.split())
        except ValueError:
            raise BrunerFormatError(lineno, "malformed degree line") from None
        if len(degrees) > n:
            raise BrunerFormatError(lineno, f"more than {n} degrees")
    actions: dict[tuple[int, int], int] = {}
    while True:
        lineno, line = next_nonblank()
        if line is None:
            break
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise BrunerFormatError(lineno, "non-integer token in action line") from None
        if len(nums) < 3 or len(nums) != 3 + nums[2]:
            raise BrunerFormatError(lineno, "action line must read 'i k l j1 ... jl'")
        i, k, _, *targets = nums
        if not 0 <= i < n or any(not 0 <= j < n for j in targets):
            raise BrunerFormatError(lineno, "generator index out of range")
        if k <= 0:
            raise BrunerFormatError(lineno, "operation index must be positive")
        if (i, k) in actions:
            raise BrunerFormatError(lineno, f"duplicate action for generator {i}, Sq{k}")
        v = 0
        for j in targets:
            if degrees[j] != degrees[i] + k:
                raise BrunerFormatError(lineno, f"Sq{k} on g{i} cannot reach g{j} (degree mismatch)")
            v ^= 1 << j
        actions[(i, k)] = v
    return FiniteModule(profile, degrees, actions)


def write_bruner(m: FiniteModule) -> str:
    out = [str(m.dim), "", " ".join(map(str, m.degrees))]
    prev = None
    for (i, k), v in m.actions.items():
        if i != prev:
            out.append("")
            prev = i
        targets = list(bits(v))
        out.append(" ".join(map(str, [i, k, len(targets), *targets])))
    return "\n".join(out) + "\n"


def load_module(path: str, profile: Profile | None = None) -> FiniteModule:
    with open(path) as fh:
        return parse_bruner(fh.read(), profile)


def sample_module_z() -> FiniteModule:
    """The 32-dimensional A-module structure on B(2) from the package data."""
    text = resources.files("steenrodz").joinpath("data/Z").read_text()
    return parse_bruner(text, Profile.full())


def trivial_module(profile: Profile | None = None, degree: int = 0) -> FiniteModule:
    return FiniteModule(profile or Profile.full(), [degree], {})


# ---------------------------------------------------------------------------
# validation


def validate(m: FiniteModule, profile: Profile | None = None) -> list[str]:
    """Violations of the module axioms (empty list means valid).

    ``profile`` (default: the module's own) may be smaller than the module's
    profile, in which case the restricted structure is checked.
    """
    if profile is not None and profile != m.profile:
        m = restrict(m, profile)
    prof = m.profile
    out = []
    allowed = set(m.keys())
    for (i, k) in m.actions:
        if k not in allowed:
            out.append(f"g{i}: Sq{k} is not an operation of {prof}")
    if prof.kind == "E(Qn)":
        q = prof.qdeg
        for i in range(m.dim):
            if m.sq(q, m.sq(q, 1 << i)):
                out.append(f"Q{prof.n}Q{prof.n} g{i} != 0")
        return out
    if prof.is_full:
        span = m.span
        for b in range(1, span + 1):
            for a in range(1, min(2 * b, span - b + 1)):
                for i in range(m.dim):
                    x = 1 << i
                    lhs = m.sq(a, m.sq(b, x))
                    rhs = 0
                    for c in range(a // 2 + 1):
                        if binom_odd(b - 1 - c, a - 2 * c):
                            rhs ^= m.sq(a + b - c, m.sq(c, x))
                    if lhs != rhs:
                        out.append(f"Adem relation Sq{a}Sq{b} fails on g{i}")
        return out
    # A(n): the action of the generators must factor through A(n)
    n = prof.n
    top = min(m.span, prof.top_degree)
    letters = [1 << i for i in range(n + 1)]
    for d in range(top + 1):
        words = tree_basis(n, d)
        values = tree_values(n, d)
        for g in letters:
            if d + g > top:
                continue
            for w, val in zip(words, values):
                target: set = set()
                for r in val:
                    target ^= milnor_product((g,), r)
                expansion: set = set()
                for r in target:
                    expansion ^= set(tree_words(n, r))
                for i in range(m.dim):
                    x = 1 << i
                    lhs = m.sq(g, m.apply_word(w, x))
                    rhs = 0
                    for w2 in expansion:
                        rhs ^= m.apply_word(w2, x)
                    if lhs != rhs:
                        out.append(f"relation Sq{g}*{_word_str(w)} fails on g{i}")
    for k in sorted(allowed):
        if k & (k - 1) == 0:
            continue
        for i in range(m.dim):
            rhs = 0
            for w in tree_words(n, (k,)):
                rhs ^= m.apply_word(w, 1 << i)
            if m.sq(k, 1 << i) != rhs:
                out.append(f"stored Sq{k} on g{i} disagrees with its expression in Sq1, Sq2, Sq4, ...")
    return out


def _word_str(w) -> str:
    return " ".join(f"Sq{k}" for k in w) or "1"


# ---------------------------------------------------------------------------
# constructions


def from_generator_actions(
    profile: Profile,
    degrees: Iterable[int],
    gen_actions: Mapping[tuple[int, int], Vector],
    names: Iterable[str] | None = None,
) -> FiniteModule:
    """Build a module from the actions of Sq^{2^i} alone (or Q_n over E(Q_n)).

    The remaining Sq^k are derived from their expressions in the Sq^{2^i}.
    """
    seed = FiniteModule(profile, degrees, gen_actions, names)
    if profile.kind == "E(Qn)":
        return seed
    n = None if profile.is_full else profile.n
    actions = {}
    for k in seed.keys():
        words = tree_words(n, (k,))
        for i in range(seed.dim):
            v = 0
            for w in words:
                v ^= seed.apply_word(w, 1 << i)
            if v:
                actions[(i, k)] = v
    return FiniteModule(profile, degrees, actions, seed.names)


def restrict(m: FiniteModule, profile: Profile) -> FiniteModule:
    """The same vector space regarded as a module over a smaller profile."""
    if profile == m.profile:
        return m
    if not m.profile.contains_profile(profile):
        raise ValueError(f"{profile} is not contained in {m.profile}")
    if profile.kind == "E(Qn)":
        q = profile.qdeg
        actions = {(i, q): m.q_action(profile.n, 1 << i) for i in range(m.dim)}
        return FiniteModule(profile, m.degrees, actions, m.names)
    keep = {(i, k): v for (i, k), v in m.actions.items() if profile.admits_sq(k)}
    return FiniteModule(profile, m.degrees, keep, m.names)


def suspend(m: FiniteModule, k: int) -> FiniteModule:
    return FiniteModule(m.profile, [d + k for d in m.degrees], m.actions, m.names)


def tensor(m: FiniteModule, n: FiniteModule) -> FiniteModule:
    """Tensor product with the diagonal (Cartan) action, over the smaller profile."""
    prof = m.profile.meet(n.profile)
    dn = n.dim
    degrees = [a + b for a in m.degrees for b in n.degrees]
    names = [f"{x}*{y}" for x in m.names for y in n.names]
    span = (m.top + n.top) - (m.bottom + n.bottom)
    actions: dict[tuple[int, int], int] = {}

    def pair(u: Vector, w: Vector) -> Vector:
        out = 0
        for i in bits(u):
            out |= w << (i * dn)
        return out

    if prof.kind == "E(Qn)":
        q = prof.qdeg
        if q <= span:
            for i in range(m.dim):
                qi = m.q_action(prof.n, 1 << i)
                for j in range(dn):
                    qj = n.q_action(prof.n, 1 << j)
                    v = pair(qi, 1 << j) ^ pair(1 << i, qj)
                    if v:
                        actions[(i * dn + j, q)] = v
        return FiniteModule(prof, degrees, actions, names)
    ks = [k for k in range(1, span + 1) if prof.admits_sq(k)]
    for i in range(m.dim):
        for j in range(dn):
            for k in ks:
                v = 0
                for a in range(k + 1):
                    u = m.sq(a, 1 << i)
                    if not u:
                        continue
                    w = n.sq(k - a, 1 << j)
                    if w:
                        v ^= pair(u, w)
                if v:
                    actions[(i * dn + j, k)] = v
    return FiniteModule(prof, degrees, actions, names)


def dual(m: FiniteModule) -> FiniteModule:
    """Linear dual with the action twisted by the antipode; degrees negated."""
    prof = m.profile
    actions: dict[tuple[int, int], int] = {}
    names = [f"D{x}" for x in m.names]
    if prof.kind == "E(Qn)":
        q = prof.qdeg
        for j in range(m.dim):
            for i in bits(m.sq(q, 1 << j)):
                actions[(i, q)] = actions.get((i, q), 0) ^ (1 << j)
        return FiniteModule(prof, [-d for d in m.degrees], actions, names)
    for k in m.keys():
        chi = antipode(AlgebraElement.sq(k))
        for j in range(m.dim):
            # <Sq^k phi, x> = <phi, chi(Sq^k) x>: g_i^* picks up g_j^* when g_i occurs in chi(Sq^k) g_j
            for i in bits(m.apply_element(chi, 1 << j)):
                actions[(i, k)] = actions.get((i, k), 0) ^ (1 << j)
    return FiniteModule(prof, [-d for d in m.degrees], actions, names)


def direct_sum(*ms: FiniteModule) -> FiniteModule:
    prof = ms[0].profile
    for x in ms[1:]:
        prof = prof.meet(x.profile)
    ms = tuple(restrict(x, prof) for x in ms)
    degrees, names, actions = [], [], {}
    offset = 0
    for x in ms:
        degrees.extend(x.degrees)
        names.extend(x.names)
        for (i, k), v in x.actions.items():
            actions[(i + offset, k)] = v << offset
        offset += x.dim
    return FiniteModule(prof, degrees, actions, names)


# ---------------------------------------------------------------------------
# the algebra as a module, and the Q_n sequence


def canonical_algebra_module(profile: Profile) -> FiniteModule:
    """A(n) (or E(Q_n)) as a left module over itself, on its Milnor basis."""
    if profile.is_full:
        raise ValueError("the whole algebra is not finite")
    if profile.kind == "A(n)" and profile.n > 2:
        raise ValueError("canonical_algebra_module is limited to A(n) with n <= 2")
    basis = [r for d in range(profile.top_degree + 1) for r in profile.basis(d)]
    index = {r: i for i, r in enumerate(basis)}
    degrees = [milnor_degree(r) for r in basis]
    actions = {}
    keys = [profile.qdeg] if profile.kind == "E(Qn)" else [
        k for k in range(1, profile.top_degree + 1) if profile.admits_sq(k)
    ]
    for i, r in enumerate(basis):
        for k in keys:
            op = (0,) * profile.n + (1,) if profile.kind == "E(Qn)" else (k,)
            v = 0
            for t in milnor_product(op, r):
                v ^= 1 << index[t]
            if v:
                actions[(i, k)] = v
    return FiniteModule(profile, degrees, actions, [_milnor_name(r) for r in basis])


def _milnor_name(r) -> str:
    return "Sq(" + ",".join(map(str, r)) + ")" if r else "1"


@dataclass
class ModuleMap:
    source: FiniteModule
    target: FiniteModule
    images: tuple[Vector, ...]  # image of each source generator
    degree: int = 0

    def __call__(self, v: Vector) -> Vector:
        out = 0
        for i in bits(v):
            out ^= self.images[i]
        return out

    def violations(self) -> list[str]:
        out = []
        for i, v in enumerate(self.images):
            for j in bits(v):
                if self.target.degrees[j] != self.source.degrees[i] + self.degree:
                    out.append(f"g{i} maps to g{j} in the wrong degree")
        prof = self.source.profile.meet(self.target.profile)
        if prof.kind == "E(Qn)":
            for i in range(self.source.dim):
                if self(self.source.q_action(prof.n, 1 << i)) != self.target.q_action(prof.n, self.images[i]):
                    out.append(f"map does not commute with Q{prof.n} on g{i}")
            return out
        span = max(self.source.span, self.target.span)
        for k in range(1, span + 1):
            if not prof.admits_sq(k):
                continue
            for i in range(self.source.dim):
                if self(self.source.sq(k, 1 << i)) != self.target.sq(k, self.images[i]):
                    out.append(f"map does not commute with Sq{k} on g{i}")
        return out

    def matrix(self) -> F2Matrix:
        rows = [0] * self.target.dim
        for i, v in enumerate(self.images):
            for j in bits(v):
                rows[j] |= 1 << i
        return F2Matrix(tuple(rows), self.source.dim)


@dataclass
class QSequence:
    sub: FiniteModule
    total: FiniteModule
    quot: FiniteModule
    inclusion: ModuleMap
    projection: ModuleMap
    q_shift: int = field(default=0)


def q_right_ses(n: int) -> QSequence:
    """0 -> Sigma^{2^{n+1}-1} B(n) -> A(n) -> B(n) -> 0, via right multiplication by Q_n."""
    if not 0 <= n <= 2:
        raise ValueError("q_right_ses needs 0 <= n <= 2")
    prof = Profile.a(n)
    total = canonical_algebra_module(prof)
    basis = [r for d in range(prof.top_degree + 1) for r in prof.basis(d)]
    index = {r: i for i, r in enumerate(basis)}
    q = (0,) * n + (1,)
    qdeg = milnor_degree(q)

    def right_q(i: int) -> Vector:
        v = 0
        for t in milnor_product(basis[i], q):
            v ^= 1 << index[t]
        return v

    image = [right_q(i) for i in range(total.dim)]
    # pivots on basis elements with r_{n+1} = 1, so the complement is Sq(r_1..r_n)
    has_q = [i for i, r in enumerate(basis) if len(r) > n and r[n]]
    rest = [i for i in range(total.dim) if i not in set(has_q)]
    complement, project = quotient_coordinates([v for v in image if v], total.dim, prefer=has_q + rest)
    comp_idx = [c.bit_length() - 1 for c in complement]

    quot_actions = {}
    for a, i in enumerate(comp_idx):
        for (ii, k), v in total.actions.items():
            if ii == i:
                w = project(v)
                if w:
                    quot_actions[(a, k)] = w
    quot = FiniteModule(prof, [total.degrees[i] for i in comp_idx], quot_actions,
                        [total.names[i] for i in comp_idx])
    sub = suspend(quot, qdeg)
    sub = FiniteModule(prof, sub.degrees, sub.actions, [f"{x}Q{n}" for x in quot.names])
    inclusion = ModuleMap(sub, total, tuple(image[i] for i in comp_idx))
    projection = ModuleMap(total, quot, tuple(project(1 << i) for i in range(total.dim)))
    return QSequence(sub, total, quot, inclusion, projection, qdeg)


def margolis_homology(m: FiniteModule, n: int) -> dict[int, int]:
    """Per-degree dimension of ker Q_n / im Q_n for the left action."""
    qdeg = (1 << (n + 1)) - 1
    prof = m.profile
    if not (prof.is_full or (prof.kind == "A(n)" and prof.n >= n) or (prof.kind == "E(Qn)" and prof.n == n)):
        raise ValueError(f"Q{n} is not in {prof}")
    rank: dict[int, int] = {}
    for d in m.by_degree:
        ech = Echelon()
        for i in m.basis_in_degree(d):
            ech.add(m.q_action(n, 1 << i))
        rank[d] = len(ech)
    out = {}
    for d, gens in m.by_degree.items():
        h = len(gens) - rank[d] - rank.get(d - qdeg, 0)
        if h:
            out[d] = h
    return out


# ---------------------------------------------------------------------------
# comparison up to reordering generators within each degree


def find_reordering(a: FiniteModule, b: FiniteModule) -> list[int] | None:
    """A permutation ``p`` with ``a.g_i -> b.g_{p[i]}`` preserving degrees and actions.

    Searches permutations inside each degree block, pruning on every action
    between already-assigned generators.  Returns None if none exists.
    """
    if sorted(a.degrees) != sorted(b.degrees):
        return None
    blocks = [(d, a.basis_in_degree(d), b.basis_in_degree(d)) for d in a.by_degree]
    perm: dict[int, int] = {}

    def mapped(v: Vector) -> Vector | None:
        out = 0
        for i in bits(v):
            if i not in perm:
                return None
            out |= 1 << perm[i]
        return out

    def consistent(d: int) -> bool:
        # every action landing in degree d is now fully determined on both sides
        for i, j in perm.items():
            k = d - a.degrees[i]
            if k <= 0:
                continue
            if mapped(a.actions.get((i, k), 0)) != b.actions.get((j, k), 0):
                return False
        return True

    def search(bi: int) -> bool:
        if bi == len(blocks):
            return True
        d, src, dst = blocks[bi]
        for p in itertools.permutations(dst):
            for i, j in zip(src, p):
                perm[i] = j
            if consistent(d) and search(bi + 1):
                return True
            for i in src:
                del perm[i]
        return False

    if search(0):
        return [perm[i] for i in range(a.dim)]
    return None


def reorder(m: FiniteModule, perm: list[int]) -> FiniteModule:
    """Relabel g_i as g_{perm[i]}."""
    degrees = [0] * m.dim
    names = [""] * m.dim
    for i, j in enumerate(perm):
        degrees[j] = m.degrees[i]
        names[j] = m.names[i]
    actions = {}
    for (i, k), v in m.actions.items():
        w = 0
        for j in bits(v):
            w |= 1 << perm[j]
        actions[(perm[i], k)] = w
    return FiniteModule(m.profile, degrees, actions, names)
