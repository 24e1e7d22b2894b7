import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from steenrodz.acceptance import example_a1_module
from steenrodz.brown_gitler import bg_module
from steenrodz.modules import (
    BrunerFormatError,
    FiniteModule,
    ModuleMap,
    canonical_algebra_module,
    direct_sum,
    dual,
    find_reordering,
    margolis_homology,
    parse_bruner,
    q_right_ses,
    reorder,
    restrict,
    sample_module_z,
    suspend,
    tensor,
    trivial_module,
    validate,
    write_bruner,
)
from steenrodz.steenrod import AlgebraElement, Profile, milnor_primitive

Z_DEGREES = [int(x) for x in "0 1 2 3 3 4 4 5 5 6 6 6 7 7 7 8 8 9 9 9 10 10 10 11 11 12 12 13 13 14 15 16".split()]
A, A1, A2, EQ2 = Profile.full(), Profile.a(1), Profile.a(2), Profile.e(2)


def free_eq2(shift=0):
    return FiniteModule(EQ2, [shift, shift + 7], {(0, 7): 0b10})


def poincare(m):
    return Counter(m.degrees)


def poincare_product(a, b):
    out = Counter()
    for x, i in a.items():
        for y, j in b.items():
            out[x + y] += i * j
    return out


def test_parse_trivial():
    m = parse_bruner("1\n\n0\n")
    assert m.dim == 1 and m.degrees == (0,) and not m.actions
    assert m == trivial_module()
    assert write_bruner(trivial_module()) == "1\n\n0\n"


def test_parse_accepts_any_blank_spacing():
    assert parse_bruner("1\n0\n") == parse_bruner("\n1\n\n\n0\n\n")


def test_parse_errors_carry_line_numbers():
    with pytest.raises(BrunerFormatError) as e:
        parse_bruner("2\n\n0 1\n0 1 1 5\n")
    assert e.value.line == 4
    with pytest.raises(BrunerFormatError):
        parse_bruner("2\n\n0\n")
    with pytest.raises(BrunerFormatError):
        parse_bruner("2\n\n0 2\n0 1 1 1\n")


def test_z_file():
    z = sample_module_z()
    assert z.dim == 32
    assert list(z.degrees) == Z_DEGREES
    assert z.sq(1, 1) == 0b10
    assert z.apply_element(milnor_primitive(0), 1) == 0b10
    assert z.apply_element(AlgebraElement.unit(), 1 << 5) == 1 << 5
    assert validate(z) == []


def test_z_round_trip():
    z = sample_module_z()
    text = write_bruner(z)
    assert parse_bruner(text) == z
    assert write_bruner(parse_bruner(text)) == text


def test_z_with_deleted_line_fails():
    text = write_bruner(sample_module_z())
    lines = text.splitlines()
    assert "0 1 1 1" in lines
    lines.remove("0 1 1 1")
    broken = parse_bruner("\n".join(lines) + "\n")
    assert validate(broken)


def test_example_module():
    m = example_a1_module()
    assert validate(m) == []
    assert validate(restrict(m, A1)) == []
    assert validate(m, A1) == []
    assert not any(margolis_homology(restrict(m, A1), 0).values())
    assert restrict(m, A1).action_matrix(1).rank() == 4


def test_validate_rejects_bad_eq2():
    m = FiniteModule(EQ2, [0, 7, 14], {(0, 7): 0b10, (1, 7): 0b100})
    assert validate(m)
    assert validate(free_eq2()) == []


def test_wrong_degree_rejected():
    with pytest.raises(ValueError):
        FiniteModule(A, [0, 2], {(0, 1): 0b10})


def test_tensor_unit():
    z = sample_module_z()
    t = tensor(trivial_module(), z)
    assert t.degrees == z.degrees and t.actions == z.actions


def test_tensor_z_dz():
    z = sample_module_z()
    dz = dual(z)
    t = tensor(dz, z)
    assert t.dim == 1024
    assert poincare(t) == poincare_product(poincare(dz), poincare(z))


def test_dual_examples():
    f2 = trivial_module()
    assert dual(f2) == f2
    z = sample_module_z()
    dz = dual(z)
    assert list(dz.degrees) == [-d for d in Z_DEGREES]
    assert validate(dz) == []
    assert dual(dz) == z


def test_suspend_examples():
    z = sample_module_z()
    assert suspend(z, 0) == z
    assert suspend(suspend(z, 3), -3) == z
    assert suspend(trivial_module(), 7).degrees == (7,)


def test_canonical_algebra_modules():
    a1 = canonical_algebra_module(A1)
    a2 = canonical_algebra_module(A2)
    assert a1.dim == 8 and a2.dim == 64
    assert a2.graded_dims()[0] == 1
    assert validate(a1) == [] and validate(a2) == []
    with pytest.raises(ValueError):
        canonical_algebra_module(A)


def test_q_right_ses_two():
    q = q_right_ses(2)
    assert list(q.quot.degrees) == Z_DEGREES
    assert sorted(q.sub.degrees) == sorted(d + 7 for d in Z_DEGREES)
    assert q.inclusion.violations() == [] and q.projection.violations() == []
    for i in range(q.sub.dim):
        assert q.projection(q.inclusion(1 << i)) == 0
    assert (q.projection.matrix() @ q.inclusion.matrix()).rank() == 0
    assert q.projection.matrix().rank() == 32 and q.inclusion.matrix().rank() == 32
    assert validate(q.quot) == []


def test_q_right_ses_one():
    assert q_right_ses(1).quot.dim == 4
    assert q_right_ses(0).quot.dim == 1


def test_margolis_examples():
    assert margolis_homology(trivial_module(A2), 2) == {0: 1}
    assert margolis_homology(canonical_algebra_module(A2), 2) == {}
    assert margolis_homology(free_eq2(3), 2) == {}
    with pytest.raises(ValueError):
        margolis_homology(canonical_algebra_module(A1), 2)


def test_reordering_recovers_z():
    z = sample_module_z()
    rng = random.Random(7)
    perm = list(range(z.dim))
    for idx in z.by_degree.values():
        shuffled = idx[:]
        rng.shuffle(shuffled)
        for a, b in zip(idx, shuffled):
            perm[a] = b
    shuffled = reorder(z, perm)
    back = find_reordering(shuffled, z)
    assert back is not None and reorder(shuffled, back) == z
    assert find_reordering(z, suspend(z, 1)) is None


def test_module_map_checks_commutation():
    z = sample_module_z()
    ident = ModuleMap(z, z, tuple(1 << i for i in range(z.dim)))
    assert ident.violations() == []
    bad = ModuleMap(z, z, tuple((1 << i) if i else 0 for i in range(z.dim)))
    assert bad.violations()


POOL = {
    "F2": lambda: trivial_module(A1),
    "example": lambda: restrict(example_a1_module(), A1),
    "A1": lambda: canonical_algebra_module(A1),
    "B1": lambda: q_right_ses(1).quot,
    "N1": lambda: restrict(bg_module(1), A1),
    "Z": lambda: restrict(sample_module_z(), A1),
}
names = st.sampled_from(sorted(POOL))
shifts = st.integers(-3, 3)


@given(names, names, shifts)
def test_tensor_and_dual_stay_valid(a, b, k):
    m, n = suspend(POOL[a](), k), POOL[b]()
    if m.dim * n.dim > 400:
        return
    assert validate(tensor(m, n)) == []
    assert validate(dual(m)) == []


@given(names, names)
def test_dual_of_tensor_dims(a, b):
    m, n = POOL[a](), POOL[b]()
    if m.dim * n.dim > 400:
        return
    assert poincare(dual(tensor(m, n))) == poincare(tensor(dual(n), dual(m)))


@given(names, names, names)
def test_tensor_associative(a, b, c):
    x, y, z = POOL[a](), POOL[b](), POOL[c]()
    if x.dim * y.dim * z.dim > 600:
        return
    left, right = tensor(tensor(x, y), z), tensor(x, tensor(y, z))
    assert left.degrees == right.degrees and left.actions == right.actions


@given(names, shifts)
def test_margolis_shifts_with_suspension(a, k):
    m = POOL[a]()
    h = margolis_homology(m, 0)
    assert margolis_homology(suspend(m, k), 0) == {d + k: v for d, v in h.items()}


@given(names)
def test_write_parse_round_trip(a):
    m = POOL[a]()
    assert parse_bruner(write_bruner(m), A1) == m


def test_direct_sum_of_free_eq2_has_no_homology():
    m = direct_sum(free_eq2(0), free_eq2(2), free_eq2(2))
    assert margolis_homology(m, 2) == {}
    assert validate(m) == []
