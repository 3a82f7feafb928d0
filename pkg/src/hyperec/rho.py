"""Hyperedge density inside maximal cliques, per (clique size n, subset size k).

For a cell (n, k) the table records the size-k hyperedges lying inside some
size-n maximal clique and the number of (k-subset, size-n clique) pairs one
could draw.  Their ratio is the probability that a uniformly drawn size-n
maximal clique and a uniformly drawn k-subset of it hit a hyperedge.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path

from .core import Hypergraph, MaximalCliqueSet

CSV_HEADER = ("n", "k", "count_E", "count_Q", "rho")


@dataclass(frozen=True)
class RhoCell:
    n: int
    k: int
    sample_space: int
    hyperedges: frozenset | None = None
    count: int | None = None

    def __post_init__(self):
        if self.count is None:
            object.__setattr__(self, "count", len(self.hyperedges or ()))
        if not 1 <= self.k <= self.n:
            raise ValueError(f"invalid cell ({self.n}, {self.k})")
        if self.sample_space <= 0 or not 0 <= self.count <= self.sample_space:
            raise ValueError(f"cell ({self.n}, {self.k}): need 0 <= count <= sample space > 0")

    @property
    def rho(self) -> Fraction:
        return Fraction(self.count, self.sample_space)


@dataclass(frozen=True)
class RhoTable:
    max_clique_size: int
    cells: dict = field(default_factory=dict)
    n_hyperedges: int = 0

    def rho(self, n: int, k: int) -> Fraction:
        cell = self.cells.get((n, k))
        return cell.rho if cell is not None else Fraction(0)

    def column(self, k: int) -> list[RhoCell]:
        return [c for (n, kk), c in sorted(self.cells.items()) if kk == k]

    @property
    def total_sample_space(self) -> int:
        return sum(c.sample_space for c in self.cells.values())

    def __iter__(self):
        return iter(sorted(self.cells))


def estimate_rho(h: Hypergraph, cliques: MaximalCliqueSet) -> RhoTable:
    """Build the (n, k) table from a hypergraph and its projection's maximal cliques.

    Hyperedges inside a clique are found through node incidence lists, so each
    clique only inspects hyperedges touching its own nodes.
    """
    inc = h.incidence
    found: dict[tuple[int, int], set] = {}
    for c in cliques:
        n = len(c)
        seen: set[int] = set()
        for v in c:
            for j in inc.get(v, ()):
                if j in seen:
                    continue
                seen.add(j)
                e = h.hyperedges[j]
                if len(e) <= n and e <= c:
                    found.setdefault((n, len(e)), set()).add(e)
    cells = {}
    for n, ix in cliques.size_index.items():
        for k in range(1, n + 1):
            cells[(n, k)] = RhoCell(n, k, len(ix) * comb(n, k), frozenset(found.get((n, k), ())))
    return RhoTable(cliques.max_size, cells, h.m)


def _grid(a: RhoTable, b: RhoTable):
    N = max(a.max_clique_size, b.max_clique_size)
    return [(n, k) for n in range(1, N + 1) for k in range(1, n + 1)]


def rho_distance(a: RhoTable, b: RhoTable) -> float:
    """Mean squared difference over the full triangular grid, absent cells as 0."""
    grid = _grid(a, b)
    if not grid:
        return 0.0
    return float(sum((a.rho(*nk) - b.rho(*nk)) ** 2 for nk in grid) / len(grid))


def rho_to_csv(t: RhoTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for n, k in sorted(t.cells):
        c = t.cells[(n, k)]
        w.writerow([n, k, c.count, c.sample_space, f"{float(c.rho):.10f}"])
    return buf.getvalue()


def export_rho(t: RhoTable, path) -> None:
    Path(path).write_text(rho_to_csv(t), encoding="utf-8", newline="\n")


def load_rho(path) -> RhoTable:
    """Reload an exported table; hyperedge sets are not stored, only counts."""
    text = Path(path).read_text(encoding="utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
    cells = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            n, k, ce, cq = (int(x) for x in row[:4])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: malformed row {row!r}") from exc
        cells[(n, k)] = RhoCell(n, k, cq, None, ce)
    N = max((n for n, _ in cells), default=0)
    return RhoTable(N, cells)
