"""The reproduction checks, shared by ``steenrodz reproduce`` and the test suite."""
from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import roth
from .algtmf import apply_known_differentials, assemble_e1, assemble_e1_self
from .brown_gitler import bg_module
from .eq2ext import decompose, ext_chart_from_decomp
from .modules import (
    FiniteModule,
    canonical_algebra_module,
    find_reordering,
    from_generator_actions,
    margolis_homology,
    parse_bruner,
    q_right_ses,
    reorder,
    restrict,
    sample_module_z,
    validate,
    write_bruner,
)
from .resolve import a2_b2_self_formula, ext_chart, ext_self
from .steenrod.adem import milnor_primitive
from .steenrod.profile import Profile
from .toda import criterion_one_chart, realization_count, toda_criterion_one, toda_criterion_two


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:>2} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def default_workers() -> int:
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# helpers


def example_a1_module() -> FiniteModule:
    """The eight-generator module g0..g3, h3..h6 with its Sq^1, Sq^2, Sq^4 action."""
    names = ["g0", "g1", "g2", "g3", "h3", "h4", "h5", "h6"]
    at = {x: i for i, x in enumerate(names)}
    degrees = [0, 1, 2, 3, 3, 4, 5, 6]
    table = {
        1: [("g0", "g1"), ("g2", "g3"), ("h3", "h4"), ("h5", "h6")],
        2: [("g0", "g2"), ("g1", "h3"), ("g2", "h4"), ("g3", "h5"), ("h4", "h6")],
        4: [("g1", "h5")],
    }
    acts = {}
    for k, pairs in table.items():
        for a, b in pairs:
            acts[(at[a], k)] = acts.get((at[a], k), 0) ^ (1 << at[b])
    return from_generator_actions(Profile.full(), degrees, acts, names)


def random_eq2_module(rng: random.Random, max_dim: int = 24, max_degree: int = 20) -> FiniteModule:
    """A random E(Q2)-module: random summands, then a random graded change of basis."""
    degrees: list[int] = []
    pairs = []
    while True:
        room = max_dim - len(degrees)
        if room <= 0 or (degrees and rng.random() < 0.15):
            break
        d = rng.randint(0, max_degree)
        if room >= 2 and d + 7 <= max_degree + 7 and rng.random() < 0.5:
            pairs.append((len(degrees), len(degrees) + 1))
            degrees += [d, d + 7]
        else:
            degrees.append(d)
    order = sorted(range(len(degrees)), key=lambda i: (degrees[i], i))
    pos = {old: new for new, old in enumerate(order)}
    degs = [degrees[i] for i in order]
    q = {pos[a]: 1 << pos[b] for a, b in pairs}
    # random invertible change of basis inside each degree: x -> x + (random earlier vectors)
    basis = [1 << i for i in range(len(degs))]
    by_deg: dict[int, list[int]] = {}
    for i, d in enumerate(degs):
        by_deg.setdefault(d, []).append(i)
    for idx in by_deg.values():
        for a in idx:
            for b in idx:
                if b < a and rng.random() < 0.5:
                    basis[a] ^= basis[b]
    # express Q on the new basis: Q(new_a) = sum over old bits
    inv = _invert(basis)
    acts = {}
    for a, v in enumerate(basis):
        img = 0
        for i in range(len(degs)):
            if v >> i & 1:
                img ^= q.get(i, 0)
        img = _apply(inv, img)
        if img:
            acts[(a, 7)] = img
    return FiniteModule(Profile.e(2), degs, acts)


def _invert(basis: list[int]) -> list[int]:
    # columns of the inverse, by Gauss-Jordan on [basis | I]
    n = len(basis)
    rows = [(basis[i], 1 << i) for i in range(n)]
    done: list[tuple[int, int]] = []
    for col in range(n):
        piv = next((r for r in rows if r[0] >> col & 1), None)
        rows.remove(piv)
        rows = [(r[0] ^ piv[0], r[1] ^ piv[1]) if r[0] >> col & 1 else r for r in rows]
        done = [(r[0] ^ piv[0], r[1] ^ piv[1]) if r[0] >> col & 1 else r for r in done]
        done.append(piv)
    # done[k] has first entry 1 << k; the second entry says which basis vectors sum to e_k
    return [d[1] for d in sorted(done, key=lambda r: r[0])]


def _apply(inv: list[int], v: int) -> int:
    out = 0
    for i in range(len(inv)):
        if v >> i & 1:
            out ^= inv[i]
    return out


def distinct_roth_b2(count: int, workers: int = 1) -> list[tuple[int, FiniteModule]]:
    """``count`` pairwise different B_2's from valid s-maps, spread over the enumeration."""
    valid = roth.enumerate_valid(workers)
    step = max(1, len(valid) // (4 * count))
    seen = set()
    out = []
    for offset in range(step):
        for k in valid[offset::step]:
            e = roth.emit(k)
            if not e.condition:
                continue
            key = frozenset(e.b2.actions.items())
            if key in seen:
                continue
            seen.add(key)
            out.append((k, e.b2))
            if len(out) == count:
                return out
    return out


# ---------------------------------------------------------------------------
# the checks


def check_bruner_fixture(workers: int) -> tuple[bool, str]:
    z = sample_module_z()
    bad = validate(z)
    text = write_bruner(z)
    again = write_bruner(parse_bruner(text))
    ok = not bad and text == again and parse_bruner(text) == z
    return ok, f"dim {z.dim}, {len(bad)} Adem violations, round trip {'stable' if text == again else 'unstable'}"


def check_roth_count(workers: int) -> tuple[bool, str]:
    valid = roth.enumerate_valid(workers)
    emitted = roth.emit_all(valid, workers)
    invalid = [e.index for e in emitted if e.violations]
    cond = sum(1 for e in emitted if e.condition)
    ok = len(valid) == roth.EXPECTED_COUNT and not invalid
    return ok, (f"{len(valid)} valid of 2^{roth.NSLOTS} s-maps, {len(invalid)} emitted A2 fail validation, "
                f"{cond} satisfy Q2 Sq8 Q2 = 0")


def check_z_provenance(workers: int) -> tuple[bool, str]:
    z = sample_module_z()
    for k in roth.enumerate_valid(workers):
        e = roth.emit(k)
        if not e.condition:
            continue
        perm = find_reordering(e.b2, z)
        if perm is not None and reorder(e.b2, perm) == z:
            return True, f"s-map {e.smap} reproduces Z"
    return False, "no valid s-map reproduces Z"


def check_a2_closed_form(workers: int) -> tuple[bool, str]:
    b2 = q_right_ses(2).quot
    chart = ext_self(b2, 8, 72, Profile.a(2), t_min=-b2.span)
    bad = [(s, t) for s in range(9) for t in range(-b2.span, 73) if chart(s, t) != a2_b2_self_formula(s, t)]
    return not bad, f"{len(bad)} mismatches over s <= 8, t <= 72"


def check_eq2_oracle(workers: int) -> tuple[bool, str]:
    rng = random.Random(20240501)
    bad = 0
    for _ in range(50):
        m = random_eq2_module(rng)
        if validate(m):
            return False, "generated an invalid E(Q2)-module"
        t_max = max(m.degrees) + 7 * 6 + 1
        res = ext_chart(m, 6, t_max)
        dec = ext_chart_from_decomp(decompose(m), 6, res.t_min, t_max)
        if res.dims != dec.dims:
            bad += 1
    return bad == 0, f"{bad} of 50 random modules disagree"


def check_brown_gitler(workers: int) -> tuple[bool, str]:
    d1 = decompose(bg_module(1))
    d2 = decompose(bg_module(2))
    ok = (d1.free_shifts == [0] and d1.trivial_shifts == [4, 6]
          and d2.free_shifts == [0, 4, 6, 8] and d2.trivial_shifts == [10, 12, 14])
    return ok, f"N1(1) = {d1}; N1(2) = {d2}"


def check_toda_window(workers: int) -> tuple[bool, str]:
    z = sample_module_z()
    chart = criterion_one_chart(z, 10)
    window = [(s, t) for s in range(3, 11) for t in range(s - 2, s + 15) if chart(s, t)]
    one = toda_criterion_one(z, chart, 10)
    two = toda_criterion_two(z, 10)
    ok = not window and one.verdict and two.verdict
    return ok, f"{len(window)} nonzero groups in the window; {one}; {two}"


def check_uniqueness(workers: int) -> tuple[bool, str]:
    z = sample_module_z()
    chart = ext_self(z, 8, 7, t_min=1)
    e21 = chart(2, 1)
    tail = [s for s in range(3, 9) if chart(s, s - 1)]
    count = realization_count(z)
    sample = distinct_roth_b2(10, workers)
    counts = [realization_count(b) for _, b in sample]
    ok = e21 == 2 and not tail and count == 4 and len(sample) >= 10 and all(c in (4, 8) for c in counts)
    return ok, (f"dim Ext^(2,1)(Z,Z) = {e21}, nonzero Ext^(s,s-1) at s in {tail}, count {count}; "
                f"{len(sample)} Roth B2 give {sorted(set(counts))}")


def check_self_map(workers: int) -> tuple[bool, str]:
    z = sample_module_z()
    chart = ext_self(z, 8, 13, t_min=9)
    bad = [s for s in range(4, 9) if chart(s, s + 5)]
    return not bad, f"Ext^(s,s+5)(Z,Z) nonzero for s in {bad}"


def check_e1_spots(workers: int) -> tuple[bool, str]:
    want38 = {"v2^3.g(xi1^7 xi2^2)", "v2^3.g(xi1^4 xi2^3)", "h_3^3.g(xi1^7 xi2^3)"}
    page = assemble_e1_self(15, 8)
    at38 = [c.display() for c in page.at(3, 8)]
    at21 = page.at(2, 1)
    ok21 = (sorted(c.n for c in at21) == [0, 0, 2]
            and "h_3^2.g(xi1^6 xi2^3)" in {c.display() for c in at21})
    b2 = apply_known_differentials(assemble_e1(25, 8))
    src = [c for c in b2.at(2, 24, 2) if c.label == "h_{2,2}^2"]
    tgt = [c for c in b2.at(3, 24, 3) if c.label == "h_3^3"]
    paired = len(src) == 1 and len(tgt) == 1 and src[0].killed and tgt[0].killed and len(b2.differentials) == 1
    ok = sorted(at38) == sorted(want38) and len(at38) == 3 and ok21 and paired
    return ok, (f"(3,8): {sorted(at38)}; (2,1): {sorted(c.display() for c in at21)}; "
                f"d2 pairs h_{{2,2}}^2 with h_3^3: {paired}")


def check_algebra_sanity(workers: int) -> tuple[bool, str]:
    q2 = milnor_primitive(2)
    square_zero = not (q2 * q2).terms
    h = margolis_homology(canonical_algebra_module(Profile.a(2)), 2)
    ex = example_a1_module()
    ex1 = restrict(ex, Profile.a(1))
    ok = (q2.degree == 7 and square_zero and not any(h.values()) and not validate(ex)
          and not validate(ex1) and not any(margolis_homology(ex1, 0).values()))
    return ok, (f"|Q2| = {q2.degree}, Q2^2 = 0: {square_zero}, H(A(2);Q2) = {h or 0}, "
                f"example validates, H(M;Q0) = {margolis_homology(ex1, 0) or 0}")


CHECKS: list[tuple[int, str, Callable[[int], tuple[bool, str]]]] = [
    (1, "bruner-fixture", check_bruner_fixture),
    (2, "roth-count", check_roth_count),
    (3, "z-provenance", check_z_provenance),
    (4, "a2-closed-form", check_a2_closed_form),
    (5, "eq2-oracle", check_eq2_oracle),
    (6, "brown-gitler", check_brown_gitler),
    (7, "toda-window", check_toda_window),
    (8, "uniqueness", check_uniqueness),
    (9, "self-map", check_self_map),
    (10, "e1-spots", check_e1_spots),
    (11, "algebra-sanity", check_algebra_sanity),
]


def run_check(number_or_name, workers: int | None = None) -> CheckResult:
    workers = workers or default_workers()
    for number, name, fn in CHECKS:
        if number_or_name in (number, name, str(number)):
            t = time.perf_counter()
            try:
                ok, detail = fn(workers)
            except Exception as e:  # a crash is a failed check, reported with its cause
                ok, detail = False, f"error: {type(e).__name__}: {e}"
            return CheckResult(number, name, ok, detail, time.perf_counter() - t)
    raise KeyError(f"unknown check {number_or_name!r}")


def run_all(only: list[str] | None = None, workers: int | None = None) -> list[CheckResult]:
    picked = [n for n, name, _ in CHECKS if not only or name in only or str(n) in only]
    return [run_check(n, workers) for n in picked]
