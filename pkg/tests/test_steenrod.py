from math import comb

import pytest
from hypothesis import given, strategies as st

from steenrodz.steenrod import (
    AlgebraElement,
    DualElement,
    Profile,
    adem_reduce,
    admissible_basis,
    antipode,
    conjugate_generator,
    coproduct,
    dual_quotient_basis,
    milnor_primitive,
    multiply,
    right_total_sq,
)
from steenrodz.steenrod.dual import (
    mono_degree,
    monomials,
    mul_sums,
    right_total_sq_terms,
    xi,
)
from steenrodz.steenrod.milnor import milnor_basis, milnor_product, multiply_sums

E = AlgebraElement.parse


def adem_oracle(a: int, b: int) -> AlgebraElement:
    # Sq^a Sq^b = sum_c C(b-c-1, a-2c) Sq^{a+b-c} Sq^c for a < 2b
    terms = []
    for c in range(a // 2 + 1):
        if comb(b - c - 1, a - 2 * c) % 2:
            terms.append((a + b - c, c) if c else (a + b,))
    return AlgebraElement(terms)


def test_adem_examples():
    assert not adem_reduce((1, 1))
    assert adem_reduce((2, 2)) == E("Sq3 Sq1") == adem_oracle(2, 2)
    assert adem_reduce((2, 3)) == E("Sq5 + Sq4 Sq1") == adem_oracle(2, 3)
    assert adem_reduce(()) == AlgebraElement.unit()


@pytest.mark.parametrize("a,b", [(a, b) for b in range(1, 9) for a in range(1, 2 * b)])
def test_adem_matches_binomial_formula(a, b):
    assert adem_reduce((a, b)) == adem_oracle(a, b)


def test_multiply_examples():
    x = E("Sq4 Sq2 Sq1")
    assert multiply(AlgebraElement.unit(), x) == x
    assert not multiply(E("Sq1"), E("Sq1"))
    assert E("Sq2") * E("Sq2") == E("Sq3 Sq1")


def test_parse_and_print():
    for text in ("Sq4 Sq2 Sq1", "Sq3 + Sq2 Sq1", "1", "0"):
        assert str(E(text)) == text
    with pytest.raises(ValueError):
        E("Sq")


def test_antipode_examples():
    assert antipode(E("Sq1")) == E("Sq1")
    assert antipode(E("Sq2")) == E("Sq2")
    assert antipode(E("Sq3")) == E("Sq2 Sq1")


@pytest.mark.parametrize("n", range(1, 13))
def test_antipode_recursion(n):
    acc = AlgebraElement()
    for i in range(n + 1):
        acc = acc + AlgebraElement.sq(i) * antipode(AlgebraElement.sq(n - i))
    assert not acc


def test_milnor_primitives():
    assert milnor_primitive(0) == E("Sq1")
    assert milnor_primitive(1) == E("Sq3 + Sq2 Sq1")
    for n in range(4):
        q = milnor_primitive(n)
        assert q.degree == (1 << (n + 1)) - 1
        assert not (q * q)
        assert q.to_milnor() == frozenset([(0,) * n + (1,)])


@pytest.mark.parametrize("n", [0, 1, 2])
def test_qn_is_central_in_an(n):
    q = milnor_primitive(n)
    prof = Profile.a(n)
    for d in range(prof.top_degree + 1):
        for a in admissible_basis(d, prof):
            assert q * a == a * q


def test_subalgebra_dimensions():
    assert Profile.a(1).dimension() == 8
    assert Profile.a(2).dimension() == 64
    assert Profile.a(2).top_degree == 23
    assert admissible_basis(24, Profile.a(2)) == []
    assert admissible_basis(0, Profile.a(2)) == [AlgebraElement.unit()]
    assert admissible_basis(0) == [()]
    assert Profile.a(2).bounds == (8, 4, 2)
    assert Profile.e(2).qdeg == 7


def test_profile_parse():
    assert Profile.parse("A") == Profile.full()
    assert Profile.parse("A(2)") == Profile.a(2) == Profile.parse("A2")
    assert Profile.parse("E(Q2)") == Profile.e(2) == Profile.parse("EQ2")
    with pytest.raises(ValueError):
        Profile.parse("B")


def test_coproduct_examples():
    assert coproduct(xi(1)) == {(xi(1), ()), ((), xi(1))}
    assert coproduct(xi(2)) == {(xi(2), ()), (xi(1, 2), xi(1)), ((), xi(2))}
    assert coproduct(xi(1, 2)) == {(xi(1, 2), ()), ((), xi(1, 2))}


def _psi_left(pairs):
    out = set()
    for a, b in pairs:
        for a1, a2 in coproduct(a):
            out ^= {(a1, a2, b)}
    return out


def _psi_right(pairs):
    out = set()
    for a, b in pairs:
        for b1, b2 in coproduct(b):
            out ^= {(a, b1, b2)}
    return out


@pytest.mark.parametrize("d", range(1, 24))
def test_coassociative(d):
    for m in monomials(d):
        pairs = coproduct(m)
        assert _psi_left(pairs) == _psi_right(pairs)
        assert all(mono_degree(a) + mono_degree(b) == d for a, b in pairs)


def test_conjugates():
    assert conjugate_generator(1) == DualElement.parse("xi1")
    assert conjugate_generator(2) == DualElement.parse("xi2 + xi1^3")
    assert conjugate_generator(3).degree == 7
    with pytest.raises(ValueError):
        conjugate_generator(0)


@pytest.mark.parametrize("n", range(1, 5))
def test_conjugate_recursion(n):
    # sum_k xi_{n-k}^{2^k} zeta_k = 0
    acc: set = set()
    for k in range(n + 1):
        z = conjugate_generator(k).terms if k else frozenset([()])
        acc ^= set(mul_sums([xi(n - k, 1 << k)], z))
    assert not acc


def test_right_total_sq_examples():
    one = DualElement([()])
    assert right_total_sq(DualElement.parse("xi1"), 1) == one
    assert right_total_sq(DualElement.parse("xi2"), 2) == DualElement.parse("xi1")
    x = DualElement.parse("xi1^3 xi2 + xi1^6")
    assert right_total_sq(x, 0) == x
    with pytest.raises(ValueError):
        right_total_sq(x, -1)


def _substituted(m):
    # the total square as the ring map xi_n -> xi_n + xi_{n-1}, expanded by DualElement arithmetic
    acc = {(): 1}
    out = [frozenset([()])]
    for i, e in enumerate(m):
        base = frozenset([xi(i + 1), xi(i)])
        for _ in range(e):
            out = [mul_sums(x, base) for x in out]
    result: dict = {}
    for x in out:
        for t in x:
            result[t] = result.get(t, 0) ^ 1
    return {t for t, c in result.items() if c}


@pytest.mark.parametrize("d", range(1, 16))
def test_right_total_sq_is_substitution(d):
    for m in monomials(d):
        want = _substituted(m)
        got = set()
        for i in range(d + 1):
            got ^= set(right_total_sq_terms([m], i))
        assert got == want


@pytest.mark.parametrize("d", range(1, 14))
def test_right_total_sq_pairs_with_left_multiplication(d):
    # coefficient of xi^S in (xi^R)Sq^i equals coefficient of Sq(R) in Sq^i Sq(S)
    for r in monomials(d):
        for i in range(1, d + 1):
            got = right_total_sq_terms([r], i)
            for s in milnor_basis(d - i):
                assert (s in got) == (r in milnor_product((i,), s))


monos = st.sampled_from([m for d in range(1, 12) for m in monomials(d)])


@given(monos, monos)
def test_right_total_sq_cartan(a, b):
    ab = mul_sums([a], [b])
    for k in range(mono_degree(a) + mono_degree(b) + 1):
        conv: set = set()
        for i in range(k + 1):
            conv ^= set(mul_sums(right_total_sq_terms([a], i), right_total_sq_terms([b], k - i)))
        assert set(right_total_sq_terms(ab, k)) == conv


def test_dual_quotient_sizes():
    degs = (8, 12, 14, 15, 20, 22, 23)
    assert [len(dual_quotient_basis(d)) for d in degs] == [3, 4, 4, 3, 2, 1, 1]
    assert [len(dual_quotient_basis(d, "(A//A(2))_*")) for d in degs] == [1] * 7
    assert dual_quotient_basis(24) == []
    assert sum(len(dual_quotient_basis(d)) for d in range(24)) == 64
    # xi1^16 is the only quotient generator in degree 16, next to four A(2)_* monomials
    assert len(dual_quotient_basis(16)) == 4
    assert dual_quotient_basis(16, "(A//A(2))_*") == [xi(1, 16)]
    with pytest.raises(ValueError):
        dual_quotient_basis(4, "B")


def test_dual_quotient_order_is_stable():
    assert dual_quotient_basis(8) == [(5, 1), (2, 2), (1, 0, 1)]
    assert dual_quotient_basis(22) == [(6, 3, 1)]
    assert dual_quotient_basis(23) == [(7, 3, 1)]


def test_dual_parse_print():
    x = DualElement.parse("xi1^8 xi2^4 + xi1^20")
    assert DualElement.parse(str(x)) == x
    assert str(DualElement()) == "0"


small = st.sampled_from([w for d in range(0, 9) for w in admissible_basis(d)])


@given(small, small, small)
def test_associative(a, b, c):
    x, y, z = AlgebraElement([a]), AlgebraElement([b]), AlgebraElement([c])
    assert (x * y) * z == x * (y * z)


@given(small, small)
def test_adem_against_milnor_product(a, b):
    x, y = AlgebraElement([a]), AlgebraElement([b])
    assert (x * y).to_milnor() == multiply_sums(x.to_milnor(), y.to_milnor())


@given(small, small)
def test_antipode_anti_homomorphism(a, b):
    x, y = AlgebraElement([a]), AlgebraElement([b])
    assert antipode(x * y) == antipode(y) * antipode(x)


@pytest.mark.parametrize("d", range(0, 17))
def test_antipode_involution(d):
    for w in admissible_basis(d):
        x = AlgebraElement([w])
        assert antipode(antipode(x)) == x


def test_milnor_admissible_round_trip():
    for d in range(12):
        for r in milnor_basis(d):
            assert AlgebraElement.from_milnor([r]).to_milnor() == frozenset([r])
