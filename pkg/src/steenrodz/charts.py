"""Deterministic SVG charts in (t-s, s) coordinates, with a TSV beside each SVG.

Colors encode the tmf-filtration n (black, blue, red, green for n = 0..3).
Filled dots carry a nontrivial v2 action, open dots do not.  Dotted lines
join v2 multiples and arrows mark differentials.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .algtmf import E1Page  # noqa: E402
from .resolve import ExtChart  # noqa: E402

COLORS = ("black", "blue", "red", "green", "orange", "purple")
HEADER = "s\tt\tn\tdim\tlabel\tkilled"


class ChartFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Row:
    s: int
    t: int
    n: int = 0
    dim: int = 1
    label: str = ""
    killed: bool = False

    @property
    def stem(self) -> int:
        return self.t - self.s


def rows_to_tsv(rows: list[Row]) -> str:
    lines = [HEADER]
    for r in rows:
        lines.append(f"{r.s}\t{r.t}\t{r.n}\t{r.dim}\t{r.label}\t{int(r.killed)}")
    return "\n".join(lines) + "\n"


def parse_tsv(text: str) -> list[Row]:
    """Read the six-column chart format; the three-column s/t/dim format is also accepted."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ChartFormatError("empty chart file")
    head = lines[0].split("\t")
    rows = []
    for no, ln in enumerate(lines[1:], start=2):
        cols = ln.split("\t")
        try:
            if head == HEADER.split("\t"):
                if len(cols) != 6:
                    raise ValueError("expected 6 columns")
                rows.append(Row(int(cols[0]), int(cols[1]), int(cols[2]), int(cols[3]), cols[4],
                                cols[5].strip() == "1"))
            elif head == ["s", "t", "dim"]:
                if len(cols) != 3:
                    raise ValueError("expected 3 columns")
                rows.append(Row(int(cols[0]), int(cols[1]), 0, int(cols[2])))
            else:
                raise ChartFormatError(f"line 1: unknown header {lines[0]!r}")
        except ValueError as e:
            if isinstance(e, ChartFormatError):
                raise
            raise ChartFormatError(f"line {no}: {e}") from None
    return rows


def rows_from_ext(chart: ExtChart) -> list[Row]:
    return [Row(s, t, 0, d) for (s, t), d in chart.items()]


def rows_from_page(page: E1Page) -> list[Row]:
    return [Row(c.s, c.t, c.n, 1, c.display(), c.killed) for c in page.classes]


_V2 = re.compile(r"^v2(?:\^(\d+))?(?:\.(.*))?$")


def _v2_split(label: str) -> tuple[int, str]:
    m = _V2.match(label)
    if not m:
        return 0, label
    power = int(m.group(1) or 1)
    rest = m.group(2)
    if rest is None:
        return power, "1"
    if rest.startswith("g("):
        return power, "1." + rest
    return power, rest


def v2_links(rows: list[Row]) -> list[tuple[int, int]]:
    """Pairs (i, j) with row j = v2 * row i, read off the labels."""
    where = {}
    for i, r in enumerate(rows):
        if r.label:
            p, base = _v2_split(r.label)
            where.setdefault((base, r.n, p, r.s, r.t), []).append(i)
    out = []
    for (base, n, p, s, t), idx in sorted(where.items()):
        nxt = where.get((base, n, p + 1, s + 1, t + 7), [])
        for a, b in zip(idx, nxt):
            out.append((a, b))
    return out


def differential_pairs(rows: list[Row]) -> list[tuple[int, int]]:
    """Killed rows paired as (s,t,n) -> (s+1,t,n') with n' > n."""
    killed = [i for i, r in enumerate(rows) if r.killed]
    used: set[int] = set()
    out = []
    for i in killed:
        if i in used:
            continue
        a = rows[i]
        for j in killed:
            b = rows[j]
            if j not in used and j != i and b.s == a.s + 1 and b.t == a.t and b.n > a.n:
                out.append((i, j))
                used.update((i, j))
                break
    return out


def _positions(rows: list[Row]) -> list[tuple[float, float]]:
    groups: dict[tuple[int, int], list[int]] = {}
    for i, r in enumerate(rows):
        groups.setdefault((r.stem, r.s), []).append(i)
    pos = [(0.0, 0.0)] * len(rows)
    for (x, y), idx in groups.items():
        k = sum(rows[i].dim for i in idx)
        slot = 0
        for i in idx:
            # one dot per class when labels are known; one dot per unit of dimension otherwise
            for _ in range(max(1, rows[i].dim) if not rows[i].label else 1):
                off = (slot - (k - 1) / 2) * 0.18
                pos[i] = (x + off, y + off * 0.3)
                slot += 1
    return pos


def render(rows: list[Row], path: str | Path, title: str = "", stems: tuple[int, int] | None = None,
           s_max: int | None = None, links: list[tuple[int, int]] | None = None,
           arrows: list[tuple[int, int]] | None = None, tsv: bool = True) -> Path:
    """Write ``path`` (SVG) and, unless ``tsv`` is false, the TSV beside it."""
    path = Path(path)
    if stems is not None:
        rows = [r for r in rows if stems[0] <= r.stem <= stems[1]]
    if s_max is not None:
        rows = [r for r in rows if r.s <= s_max]
    links = v2_links(rows) if links is None else links
    arrows = differential_pairs(rows) if arrows is None else arrows
    on_tower = {i for pair in links for i in pair}
    lo, hi = stems if stems is not None else (min([r.stem for r in rows] + [0]), max([r.stem for r in rows] + [1]))
    top = s_max if s_max is not None else max([r.s for r in rows] + [1])
    with plt.rc_context({"svg.hashsalt": "steenrodz", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.35 * (hi - lo + 2)), max(3.0, 0.5 * (top + 2))))
        ax.set_xlim(lo - 0.7, hi + 0.7)
        ax.set_ylim(-0.7, top + 0.7)
        ax.set_xticks(range(lo, hi + 1))
        ax.set_yticks(range(0, top + 1))
        ax.grid(True, color="0.88", linewidth=0.5)
        ax.set_xlabel("t - s")
        ax.set_ylabel("s")
        if title:
            ax.set_title(title)
        pos = _positions(rows)
        for a, b in links:
            ax.plot([pos[a][0], pos[b][0]], [pos[a][1], pos[b][1]], linestyle=":", color="0.4", linewidth=0.8)
        for a, b in arrows:
            ax.annotate("", xy=pos[b], xytext=pos[a],
                        arrowprops={"arrowstyle": "->", "color": "0.2", "linewidth": 0.8})
        for i, r in enumerate(rows):
            color = COLORS[min(r.n, len(COLORS) - 1)]
            filled = i in on_tower or not r.label
            ax.plot([pos[i][0]], [pos[i][1]], marker="o", markersize=4.5, linestyle="none",
                    markeredgecolor=color, markerfacecolor=color if filled else "white")
            if r.label and r.label.startswith("h_"):
                ax.annotate(r.label, pos[i], xytext=(3, 3), textcoords="offset points", fontsize=5, color=color)
            elif not r.label and r.dim > 1:
                ax.annotate(str(r.dim), pos[i], xytext=(3, 3), textcoords="offset points", fontsize=6)
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    if tsv:
        path.with_suffix(".tsv").write_text(rows_to_tsv(rows))
    return path


def render_tsv(text: str, path: str | Path, **kw) -> Path:
    return render(parse_tsv(text), path, **kw)
