import pytest

from steenrodz.algtmf import apply_known_differentials, assemble_e1
from steenrodz.charts import (
    HEADER,
    ChartFormatError,
    Row,
    _positions,
    differential_pairs,
    parse_tsv,
    render,
    render_tsv,
    rows_from_ext,
    rows_from_page,
    rows_to_tsv,
    v2_links,
)
from steenrodz.modules import q_right_ses
from steenrodz.resolve import ext_chart


@pytest.fixture(scope="module")
def b2_rows():
    return rows_from_page(apply_known_differentials(assemble_e1(25, 8)))


def test_render_is_deterministic(tmp_path, b2_rows):
    a = render(b2_rows, tmp_path / "a.svg", title="E1")
    b = render(b2_rows, tmp_path / "b.svg", title="E1")
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.tsv").read_text() == (tmp_path / "b.tsv").read_text()


def test_empty_chart(tmp_path):
    path = render([], tmp_path / "empty.svg")
    text = path.read_text()
    assert text.lstrip().startswith("<?xml") and "</svg>" in text
    assert (tmp_path / "empty.tsv").read_text() == HEADER + "\n"


def test_single_dot_at_origin(tmp_path):
    rows = [Row(0, 0)]
    assert _positions(rows) == [(0.0, 0.0)]
    path = render(rows, tmp_path / "one.svg", tsv=False)
    assert "#000000" in path.read_text()
    assert not (tmp_path / "one.tsv").exists()


def test_tsv_round_trip(b2_rows):
    assert parse_tsv(rows_to_tsv(b2_rows)) == b2_rows


def test_three_column_tsv():
    chart = ext_chart(q_right_ses(2).quot, 2, 20)
    rows = parse_tsv(chart.to_tsv())
    assert {(r.s, r.t): r.dim for r in rows} == chart.dims
    assert rows == rows_from_ext(chart)


@pytest.mark.parametrize("text,line", [
    ("", None),
    ("a\tb\n1\t2\n", 1),
    ("s\tt\tdim\n1\t2\n", 2),
    (HEADER + "\n0\t0\t0\t1\tx\t0\n1\tx\t0\t1\t\t0\n", 3),
])
def test_malformed_tsv(text, line):
    with pytest.raises(ChartFormatError) as e:
        parse_tsv(text)
    if line is not None:
        assert f"line {line}" in str(e.value)


def test_b2_page_positions(b2_rows):
    # tower classes on the line of slope 1/6, and the two classes paired by d2 in stems 22 and 21
    pos = dict(zip(range(len(b2_rows)), _positions(b2_rows)))
    for i, r in enumerate(b2_rows):
        x, y = pos[i]
        assert abs(x - r.stem) < 0.5 and abs(y - r.s) < 0.5
    tower = [(r.stem, r.s) for r in b2_rows if r.n == 0]
    assert tower == [(6 * s, s) for s in range(len(tower))]
    where = {r.label: (r.stem, r.s) for r in b2_rows if r.label in ("h_{2,2}^2", "h_3^3")}
    assert where == {"h_{2,2}^2": (22, 2), "h_3^3": (21, 3)}


def test_links_and_arrows(b2_rows):
    links = v2_links(b2_rows)
    for a, b in links:
        ra, rb = b2_rows[a], b2_rows[b]
        assert (rb.s - ra.s, rb.t - ra.t, rb.n) == (1, 7, ra.n)
    tower = [i for i, r in enumerate(b2_rows) if r.n == 0]
    assert list(zip(tower, tower[1:])) == [p for p in links if p[0] in tower]
    arrows = differential_pairs(b2_rows)
    assert len(arrows) == 1
    a, b = arrows[0]
    assert (b2_rows[a].label, b2_rows[b].label) == ("h_{2,2}^2", "h_3^3")


def test_render_tsv(tmp_path, b2_rows):
    out = render_tsv(rows_to_tsv(b2_rows), tmp_path / "x.svg", stems=(0, 10), s_max=3)
    kept = parse_tsv((tmp_path / "x.tsv").read_text())
    assert out.exists() and kept
    assert all(0 <= r.stem <= 10 and r.s <= 3 for r in kept)
