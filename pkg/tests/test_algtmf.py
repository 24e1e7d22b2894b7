from collections import Counter
from dataclasses import replace

import pytest

from steenrodz.algtmf import (
    E1Page,
    apply_known_differentials,
    assemble_e1,
    assemble_e1_self,
    assign_may_names,
    compositions,
    dual_generators,
    may_name,
)
from steenrodz.brown_gitler import bg_module
from steenrodz.eq2ext import decompose, ext_chart_from_decomp, tensor_decomp
from steenrodz.modules import q_right_ses, tensor
from steenrodz.resolve import ext_chart
from steenrodz.steenrod import Profile


@pytest.fixture(scope="module")
def b2_page():
    return assemble_e1(25, 10)


@pytest.fixture(scope="module")
def self_page():
    return assemble_e1_self(15, 8)


def test_tower_row(b2_page):
    row = [c for c in b2_page.classes if c.n == 0]
    assert [(c.s, c.t) for c in row] == [(s, 7 * s) for s in range(len(row))]
    assert [c.label for c in row[:3]] == ["1", "v2", "v2^2"]
    assert all(c.on_tower for c in row)


def test_invariants(b2_page):
    for c in b2_page.classes:
        assert c.s >= c.n
        assert c.height == c.s - c.n


def test_window_vanishes(b2_page):
    bad = [c for c in b2_page.classes if c.s >= 3 and -2 <= c.stem <= 14]
    assert bad == []


def test_may_names(b2_page):
    at = lambda s, t, n: [c.label for c in b2_page.at(s, t, n)]
    assert "h_{2,2}^2" in at(2, 24, 2)
    assert "h_3^3" in at(3, 24, 3)
    h = [c for c in b2_page.at(2, 24, 2) if c.label == "h_{2,2}^2"][0]
    assert h.composition == (1, 1)
    assert may_name([(2, 2), (2, 2)]) == "h_{2,2}^2"
    assert may_name([(1, 3)] * 3) == "h_3^3"


def test_assign_may_names_is_idempotent(b2_page):
    assert assign_may_names(b2_page).classes == b2_page.classes


def test_known_differential(b2_page):
    page = apply_known_differentials(b2_page)
    assert len(page.differentials) == 1
    a, b = page.differentials[0]
    src, tgt = page.classes[a], page.classes[b]
    assert (src.label, src.s, src.t, src.n) == ("h_{2,2}^2", 2, 24, 2)
    assert (tgt.label, tgt.s, tgt.t, tgt.n) == ("h_3^3", 3, 24, 3)
    assert (tgt.s - src.s, tgt.t - src.t) == (1, 0) and tgt.n > src.n
    assert sum(c.killed for c in page.classes) == 2
    assert not any(c.killed for c in page.classes if c.n == 0)


def test_no_differentials_below_stem_21():
    page = apply_known_differentials(assemble_e1(20, 8))
    assert page.differentials == [] and not any(c.killed for c in page.classes)


def test_missing_target_is_an_error(b2_page):
    broken = replace(b2_page, classes=[c for c in b2_page.classes if c.label != "h_3^3"])
    with pytest.raises(ValueError):
        apply_known_differentials(broken)


def test_dual_generators():
    gens = dual_generators()
    assert len(gens) == 32
    assert gens[0] == ("1", 0) and gens[-1] == ("xi1^7 xi2^3", 16)


def test_self_page_spots(self_page):
    at38 = sorted(c.display() for c in self_page.at(3, 8))
    assert at38 == sorted(["v2^3.g(xi1^7 xi2^2)", "v2^3.g(xi1^4 xi2^3)", "h_3^3.g(xi1^7 xi2^3)"])
    at21 = self_page.at(2, 1)
    assert sorted(c.display() for c in at21 if c.n == 0) == ["v2^2.g(xi1^4 xi2^3)", "v2^2.g(xi1^7 xi2^2)"]
    assert [c.display() for c in at21 if c.n == 2] == ["h_3^2.g(xi1^6 xi2^3)"]
    assert self_page.at(3, 1) == []


def test_self_page_differential_kills_h3_cubed(self_page):
    page = apply_known_differentials(self_page)
    killed = [c.display() for c in page.at(3, 8) if c.killed]
    assert killed == ["h_3^3.g(xi1^7 xi2^3)"]
    assert not any(c.killed for c in page.classes if c.n == 0)


def test_self_page_is_sum_of_translates():
    lo, hi, s_max = -6, 6, 5
    page = assemble_e1_self(hi, s_max, min_stem=lo)
    base = assemble_e1(hi + 16, s_max, max_j=4, min_stem=lo)
    want: Counter = Counter()
    for _, deg in dual_generators():
        for c in base.classes:
            if lo <= c.stem - deg <= hi:
                want[(c.s, c.t - deg)] += 1
    assert Counter((c.s, c.t) for c in page.classes) == want


def test_compositions():
    comps = compositions(16)
    assert () in comps and (1,) in comps and (1, 1) in comps and (2,) in comps
    assert all(8 * sum(c) - len(c) <= 16 for c in comps)
    with pytest.raises(ValueError):
        assemble_e1(40, 4, max_j=1)


@pytest.mark.parametrize("comp", [(1,), (2,), (1, 1)])
def test_change_of_rings(comp):
    # Ext_A(2)(N1(j1) (x) ... (x) B(2)) by resolution against the E(Q2) decomposition of the N1's
    b2 = q_right_ses(2).quot
    m = b2
    d = None
    for j in comp:
        m = tensor(bg_module(j), m)
        d = decompose(bg_module(j)) if d is None else tensor_decomp(d, decompose(bg_module(j)))
    s_max, t_max = 3, 24
    res = ext_chart(m, s_max, t_max, Profile.a(2))
    assert res.dims and m.dim == 32 * d.dim
    assert ext_chart_from_decomp(d, s_max, res.t_min, t_max).dims == res.dims


def test_tsv(b2_page):
    text = b2_page.to_tsv()
    assert text.splitlines()[0] == "s\tt\tn\tdim\tlabel\tkilled"
    assert len(text.splitlines()) == len(b2_page.classes) + 1


def test_empty_page():
    assert E1Page([], 0, 0).dims() == {}
