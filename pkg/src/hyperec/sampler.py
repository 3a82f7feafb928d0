"""Budgeted clique sampler.

The sampler assigns a ratio r(n, k) to every (n, k) cell and then draws
r(n, k) * |Q(n, k)| size-k subsets of size-n maximal cliques.  Ratios are
chosen greedily on a training hypergraph to maximize the expected number of
distinct hyperedges collected under a budget of (subset, clique) draws.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path

import numpy as np

from .core import Graph, MaximalCliqueSet
from .rho import RhoTable

BRUTE_FORCE_CELL_LIMIT = 12


@dataclass(frozen=True)
class SamplerPlan:
    budget: int
    ratios: dict = field(default_factory=dict)

    def ratio(self, n: int, k: int) -> Fraction:
        return self.ratios.get((n, k), Fraction(0))

    def active(self):
        return [(nk, r) for nk, r in sorted(self.ratios.items()) if r > 0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "r"])
        for (n, k), r in sorted(self.ratios.items()):
            w.writerow([n, k, f"{float(r):.10f}"])
        return buf.getvalue()

    def save(self, path) -> None:
        exact = "".join(f"# exact {n},{k}={r.numerator}/{r.denominator}\n"
                        for (n, k), r in sorted(self.ratios.items()) if 0 < r < 1)
        text = f"# budget={self.budget}\n" + exact + self.to_csv()
        Path(path).write_text(text, encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path) -> "SamplerPlan":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        budget = 0
        exact: dict[tuple[int, int], Fraction] = {}
        if lines and lines[0].startswith("# budget="):
            budget = int(lines.pop(0).split("=", 1)[1])
        while lines and lines[0].startswith("# exact "):
            cell, r = lines.pop(0)[len("# exact "):].split("=")
            n, k = (int(x) for x in cell.split(","))
            exact[(n, k)] = Fraction(r)
        rows = list(csv.reader(lines))
        if not rows or rows[0] != ["n", "k", "r"]:
            raise ValueError(f"{path}: expected header n,k,r")
        ratios = {}
        for row in rows[1:]:
            if row:
                nk = (int(row[0]), int(row[1]))
                ratios[nk] = exact.get(nk, Fraction(row[2]))
        return cls(budget, ratios)


@dataclass
class GreedyState:
    gamma: dict = field(default_factory=dict)
    omega: dict = field(default_factory=dict)
    delta: dict = field(default_factory=dict)
    argmax: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    k: int
    n: int
    r: Fraction
    delta: Fraction
    q: Fraction


@dataclass(frozen=True)
class CoverageReport:
    expected_hits: Fraction
    n_hyperedges: int
    budget: int
    optimal_hits: Fraction | None = None

    @property
    def expected_recall(self) -> float:
        return float(self.expected_hits) / self.n_hyperedges if self.n_hyperedges else 0.0

    @property
    def expected_precision(self) -> float:
        return float(self.expected_hits) / self.budget if self.budget else 0.0


def update_column(k: int, omega: set, gamma: set, column: dict) -> tuple[Fraction, int]:
    """Best marginal coverage per unit of sample space among unpicked rows.

    ``column`` maps row n to a cell carrying ``hyperedges`` and
    ``sample_space``.  Ties go to the smallest n.  Returns ``(0, 0)`` when
    no row is left.
    """
    best, best_n = Fraction(0), 0
    for n in sorted(omega):
        cell = column[n]
        gain = len(cell.hyperedges - gamma)
        eff = Fraction(gain, cell.sample_space)
        if best_n == 0 or eff > best:
            best, best_n = eff, n
    return best, best_n


def _coverage(ratios: dict, t: RhoTable) -> Fraction:
    miss: dict = {}
    for (n, k), r in ratios.items():
        if r <= 0:
            continue
        for s in t.cells[(n, k)].hyperedges:
            miss[s] = miss.get(s, Fraction(1)) * (1 - r)
    return sum((1 - p for p in miss.values()), Fraction(0))


def optimize_sampler(t: RhoTable, beta: int) -> tuple[SamplerPlan, list[TraceStep], GreedyState]:
    """Greedy budgeted coverage over the cells of ``t``.

    Repeatedly takes the column whose best remaining cell adds the most new
    hyperedges per unit of sample space (ties: smallest k), samples that cell
    fully or with the leftover fraction of the budget, and refreshes only
    that column.  Stops when the budget is spent or nothing new can be won.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    for c in t.cells.values():
        if c.hyperedges is None:
            raise ValueError("rho table lacks hyperedge sets (was it loaded from CSV?)")
    columns: dict[int, dict[int, object]] = {}
    for (n, k), cell in t.cells.items():
        columns.setdefault(k, {})[n] = cell
    state = GreedyState()
    ratios = {nk: Fraction(0) for nk in t.cells}
    for k in sorted(columns):
        state.gamma[k] = set()
        state.omega[k] = set(columns[k])
        state.delta[k], state.argmax[k] = update_column(k, state.omega[k], state.gamma[k], columns[k])
    trace: list[TraceStep] = []
    remaining = beta
    it = 0
    q = Fraction(0)
    while remaining > 0 and state.delta:
        k = max(sorted(state.delta), key=lambda kk: state.delta[kk])
        if state.delta[k] == 0:
            break
        n = state.argmax[k]
        cell = columns[k][n]
        r = min(Fraction(1), Fraction(remaining, cell.sample_space))
        ratios[(n, k)] = r
        delta = state.delta[k]
        # every earlier pick is fully sampled, so the gain is exact
        q += r * len(cell.hyperedges - state.gamma[k])
        state.gamma[k] |= cell.hyperedges
        state.omega[k].discard(n)
        remaining -= cell.sample_space
        state.delta[k], state.argmax[k] = update_column(k, state.omega[k], state.gamma[k], columns[k])
        it += 1
        trace.append(TraceStep(it, k, n, r, delta, q))
    return SamplerPlan(beta, ratios), trace, state


def expected_coverage(plan: SamplerPlan, t: RhoTable, with_optimum: bool = False) -> CoverageReport:
    """Expected number of distinct hyperedges collected under set sampling."""
    q = _coverage(plan.ratios, t)
    q_star = brute_force_optimum(t, plan.budget) if with_optimum else None
    return CoverageReport(q, t.n_hyperedges, plan.budget, q_star)


def brute_force_optimum(t: RhoTable, beta: int, limit: int = BRUTE_FORCE_CELL_LIMIT) -> Fraction:
    """Exact optimum over plans with at most one partially sampled cell.

    The objective is linear in each ratio separately, so an optimum sits at a
    vertex of the budget polytope; such vertices have at most one fractional
    coordinate.  Enumerates every set of fully sampled cells plus one
    optional fractional cell.
    """
    keys = sorted(t.cells)
    if len(keys) > limit:
        raise ValueError(f"brute force limited to {limit} cells, got {len(keys)}")
    best = Fraction(0)
    q_of = {nk: t.cells[nk].sample_space for nk in keys}
    for size in range(len(keys) + 1):
        for full in combinations(keys, size):
            used = sum(q_of[nk] for nk in full)
            if used > beta:
                continue
            base = {nk: Fraction(1) for nk in full}
            cand = _coverage(base, t)
            best = max(best, cand)
            left = beta - used
            if left <= 0:
                continue
            for f in keys:
                if f in base:
                    continue
                r = min(Fraction(1), Fraction(left, q_of[f]))
                best = max(best, _coverage({**base, f: r}, t))
    return best


def _unrank_combination(idx: int, n: int, k: int) -> tuple[int, ...]:
    """The idx-th k-subset of range(n) in lexicographic order."""
    out = []
    x = 0
    for slots in range(k, 0, -1):
        while True:
            c = comb(n - x - 1, slots - 1)
            if idx < c:
                break
            idx -= c
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def _draw_subsets(rng: np.random.Generator, n: int, k: int, count: int) -> list[tuple[int, ...]]:
    total = comb(n, k)
    if count >= total:
        return list(combinations(range(n), k))
    if total <= 10**7:
        picks = rng.choice(total, size=count, replace=False)
        return [_unrank_combination(int(i), n, k) for i in sorted(picks)]
    seen: set[tuple[int, ...]] = set()
    out = []
    while len(out) < count:
        s = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


@dataclass
class CandidateSet:
    """Deduplicated candidate cliques with the (n, k) cell that first produced them."""

    cliques: list
    provenance: list
    graph: Graph
    max_cliques: MaximalCliqueSet
    labels: np.ndarray | None = None

    def __len__(self):
        return len(self.cliques)

    def label_against(self, edge_set: frozenset) -> np.ndarray:
        self.labels = np.array([c in edge_set for c in self.cliques], dtype=np.int64)
        return self.labels


def sample_candidates(plan: SamplerPlan, g: Graph, cliques: MaximalCliqueSet,
                      seed: int | None = None) -> CandidateSet:
    """Draw k-subsets of size-n maximal cliques according to the plan.

    With r = 1 every subset is enumerated; otherwise each maximal clique
    contributes Binomial(C(n, k), r) distinct uniform subsets.
    """
    rng = np.random.default_rng(seed)
    out: dict[frozenset, tuple[int, int]] = {}
    for (n, k), r in plan.active():
        members = cliques.of_size(n)
        if not members:
            continue
        total = comb(n, k)
        rf = float(r)
        for c in members:
            nodes = sorted(c)
            if r >= 1:
                subsets = combinations(range(n), k)
            else:
                cnt = int(rng.binomial(total, rf)) if total < 2**62 else int(round(total * rf))
                if cnt == 0:
                    continue
                subsets = _draw_subsets(rng, n, k, cnt)
            for s in subsets:
                fs = frozenset(nodes[i] for i in s)
                if fs not in out:
                    out[fs] = (n, k)
    return CandidateSet(list(out), list(out.values()), g, cliques)


@dataclass(frozen=True)
class BetaPoint:
    beta: int
    recall: float
    precision: float
    in_range: bool


def beta_grid(t: RhoTable, per_decade: int = 4) -> list[int]:
    hi = max(t.total_sample_space, 1)
    steps = int(math.ceil(math.log10(hi) * per_decade)) if hi > 1 else 0
    grid = sorted({max(1, int(round(10 ** (i / per_decade)))) for i in range(steps + 1)} | {hi})
    return grid


def tune_beta(t: RhoTable, recall_range: tuple[float, float] = (0.6, 0.95),
              grid: list[int] | None = None) -> list[BetaPoint]:
    """Expected recall / precision of the greedy plan over a geometric grid of budgets."""
    if not t.cells:
        raise ValueError("empty rho table")
    lo, hi = recall_range
    out = []
    for beta in grid or beta_grid(t):
        plan, _, _ = optimize_sampler(t, beta)
        rep = expected_coverage(plan, t)
        out.append(BetaPoint(beta, rep.expected_recall, rep.expected_precision,
                             lo <= rep.expected_recall <= hi))
    return out


def trace_to_csv(trace: list[TraceStep]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iter", "k", "n", "r", "delta", "q"])
    for s in trace:
        w.writerow([s.iteration, s.k, s.n, f"{float(s.r):.10f}", f"{float(s.delta):.10f}",
                    f"{float(s.q):.10f}"])
    return buf.getvalue()
