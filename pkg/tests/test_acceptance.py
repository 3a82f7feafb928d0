"""Acceptance criteria: one PASS / FAIL / SKIP line per criterion.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.

Dataset criteria read normalized hypergraph files from ``$HYPEREC_DATA``
(default: ``data/`` next to ``tests/``).  For a dataset ``name`` the harness
uses ``name.train.txt`` / ``name.query.txt`` when present, otherwise splits
``name.txt`` (Enron by timestamp at 2001-02-27 23:59 UTC, the rest randomly
in halves with seed 0).  A criterion whose file is missing is reported SKIP.
"""
from __future__ import annotations

import math
import os
import random
import sys
import time
from itertools import combinations
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hyperec import (Hypergraph, ReconstructionConfig, check_conformal_direct,  # noqa: E402
                     check_conformal_triangle, check_sperner, enumerate_maximal_cliques,
                     estimate_rho, expected_coverage, jaccard_score, maximal_clique_baseline,
                     multiplicity_reconstruct, optimize_sampler, project,
                     project_with_multiplicity, projection_error_profile, reconstruct)
from hyperec.cli import run_cli  # noqa: E402
from hyperec.io import SplitSpec, parse_cutoff, parse_hypergraph, split_dataset, write_hypergraph  # noqa: E402
from oracles import mc_rho_hit_rate, random_hypergraph_edges, random_rho_table  # noqa: E402

DATA = Path(os.environ.get("HYPEREC_DATA", Path(__file__).resolve().parent.parent / "data"))
ENRON_CUTOFF = "2001-02-27T23:59:00"
# best budgets per dataset, tuned on held-out training data
BETA = {"enron": 1000, "dblp": 1_000_000, "hschool": 60_000, "hosts-virus": 6000,
        "directors": 800, "crimes": 1000, "pschool": 350_000, "foursquare": 20_000}

RESULTS: list[tuple[str, str, str]] = []


class Skip(Exception):
    pass


def _line(status, name, detail):
    return f"{status:<7} {name:<56} {detail}"


def _record(name, fn):
    try:
        status, detail = fn()
    except Skip as exc:
        status, detail = "SKIP", str(exc)
    RESULTS.append((status, name, detail))
    print(_line(status, name, detail))
    if status == "FAIL":
        pytest.fail(detail)
    if status == "SKIP":
        pytest.skip(detail)


def load_split(name: str) -> tuple[Hypergraph, Hypergraph]:
    tr, q = DATA / f"{name}.train.txt", DATA / f"{name}.query.txt"
    if tr.exists() and q.exists():
        return parse_hypergraph(tr), parse_hypergraph(q)
    full = DATA / f"{name}.txt"
    if not full.exists():
        raise Skip(f"no {name} data under {DATA}")
    h = parse_hypergraph(full)
    if name == "enron" and h.timestamps is not None:
        spec = SplitSpec("timestamp", cutoff=parse_cutoff(ENRON_CUTOFF), reindex=True, seed=0)
    else:
        spec = SplitSpec("random", seed=0, reindex=True)
    return split_dataset(h, spec)


def load_query(name: str) -> Hypergraph:
    return load_split(name)[1]


# ---------------------------------------------------------------- theory

def small_family():
    subsets = [frozenset(s) for r in range(1, 6) for s in combinations(range(5), r)]
    for m in range(5):
        for edges in combinations(subsets, m):
            yield Hypergraph.from_edges(edges)


def crit_clique_equality():
    t0 = time.perf_counter()
    bad = n = 0
    for h in small_family():
        n += 1
        m = enumerate_maximal_cliques(project(h))
        lhs = set(m.cliques) == set(h.hyperedges)
        rhs = check_sperner(h)[0] and check_conformal_direct(h, m)[0]
        bad += lhs != rhs
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 60
    return ("PASS" if ok else "FAIL"), f"{n} hypergraphs, {bad} counterexamples, {dt:.1f}s (limit 60s)"


def crit_triangle_check():
    bad = n = 0
    for h in small_family():
        n += 1
        bad += check_conformal_triangle(h) != check_conformal_direct(h)[0]
    rng = random.Random(2024)
    for _ in range(1000):
        nodes = rng.randint(1, 8)
        h = Hypergraph.from_edges(random_hypergraph_edges(rng, nodes, rng.randint(1, 8), max_size=nodes))
        n += 1
        bad += check_conformal_triangle(h) != check_conformal_direct(h)[0]
    return ("PASS" if bad == 0 else "FAIL"), f"{n} hypergraphs, {bad} disagreements"


def crit_enron_profile():
    h = load_query("enron")
    t0 = time.perf_counter()
    p = projection_error_profile(h)
    dt = time.perf_counter() - t0
    ok = (p.n_non_nested == 300 and p.n_max_cliques == 362 and abs(100 * p.error_i - 42.5) <= 0.5
          and abs(100 * p.error_ii - 53.3) <= 0.5 and dt < 10)
    detail = (f"|E|={h.m} |E'|={p.n_non_nested} (300) |M|={p.n_max_cliques} (362) "
              f"I={100 * p.error_i:.1f}% (42.5±0.5) II={100 * p.error_ii:.1f}% (53.3±0.5) {dt:.1f}s")
    return ("PASS" if ok else "FAIL"), detail


def crit_greedy_bound():
    rng = random.Random(4)
    worst = 1.0
    good = 0
    for _ in range(100):
        t = random_rho_table(rng, max_cells=4)
        beta = rng.randint(1, t.total_sample_space)
        plan, _, _ = optimize_sampler(t, beta)
        rep = expected_coverage(plan, t, with_optimum=True)
        ratio = 1.0 if rep.optimal_hits == 0 else float(rep.expected_hits / rep.optimal_hits)
        worst = min(worst, ratio)
        good += ratio >= 0.95
    ok = worst >= 0.63
    return ("PASS" if ok else "FAIL"), (f"min q/q*={worst:.3f} (>=0.63); q/q*>=0.95 on {good}/100 "
                                        f"(informational target 90)")


def crit_rho_unbiased():
    rng = random.Random(99)
    h = Hypergraph.from_edges(random_hypergraph_edges(rng, 14, 18, max_size=4))
    m = enumerate_maximal_cliques(project(h))
    t = estimate_rho(h, m)
    draws = 100_000
    worst = 0.0
    bad = []
    for (n, k), cell in sorted(t.cells.items()):
        p = float(cell.rho)
        rate = mc_rho_hit_rate(h.hyperedges, m.cliques, n, k, draws, rng)
        if p in (0.0, 1.0):
            z = 0.0 if rate == p else math.inf
        else:
            z = abs(rate - p) / math.sqrt(p * (1 - p) / draws)
        worst = max(worst, z)
        if z > 3:
            bad.append((n, k))
    return ("PASS" if not bad else "FAIL"), f"{len(t.cells)} cells, max |z|={worst:.2f} (<=3), off={bad}"


# ---------------------------------------------------------------- end to end

E2E = [("directors", "count", 100.0, 100.0), ("enron", "count", 10.5, 16.5),
       ("hosts-virus", "count", 44.0, 54.0), ("hschool", "count", 49.0, 60.0)]


def crit_end_to_end():
    parts, ok, missing = [], True, []
    for name, feats, lo, hi in E2E:
        try:
            train, query = load_split(name)
        except Skip:
            missing.append(name)
            continue
        scores, slowest = [], 0.0
        for seed in range(10):
            t0 = time.perf_counter()
            cfg = ReconstructionConfig(beta=BETA[name], features=feats, seed=seed)
            scores.append(100 * reconstruct(train, query, cfg, truth=query).jaccard)
            slowest = max(slowest, time.perf_counter() - t0)
        mean = sum(scores) / len(scores)
        hit = lo <= mean <= hi and slowest < 300
        ok &= hit
        parts.append(f"{name}={mean:.2f} [{lo},{hi}] {slowest:.0f}s/run")
    if not parts:
        raise Skip(f"no data for {', '.join(missing)} under {DATA}")
    detail = "; ".join(parts) + (f"; missing {','.join(missing)}" if missing else "")
    if not ok:
        return "FAIL", detail
    return ("PASS" if not missing else "PARTIAL"), detail


def crit_maxclique():
    parts, ok, missing = [], True, []
    for name, want in (("dblp", 79.13), ("crimes", 78.76)):
        try:
            query = load_query(name)
        except Skip:
            missing.append(name)
            continue
        t0 = time.perf_counter()
        j = 100 * jaccard_score(query, maximal_clique_baseline(project(query)))
        dt = time.perf_counter() - t0
        ok &= abs(j - want) <= 0.1 and dt < 600
        parts.append(f"{name}={j:.2f} ({want}±0.1) {dt:.0f}s")
    if not parts:
        raise Skip(f"no data for {', '.join(missing)} under {DATA}")
    detail = "; ".join(parts) + (f"; missing {','.join(missing)}" if missing else "")
    return ("FAIL" if not ok else "PASS" if not missing else "PARTIAL"), detail


def crit_multiplicity():
    h = Hypergraph.from_edges([[10 * i + j for j in range(i % 5 + 1)] for i in range(60)])
    j_syn = jaccard_score(h, multiplicity_reconstruct(project_with_multiplicity(h)))
    parts = [f"disjoint synthetic={j_syn:.3f} (1.0)"]
    ok = j_syn == 1.0
    try:
        q = load_query("enron")
    except Skip as exc:
        parts.append(f"Enron: {exc}")
        return ("PARTIAL" if ok else "FAIL"), "; ".join(parts)
    j = 100 * jaccard_score(q, multiplicity_reconstruct(project_with_multiplicity(q)))
    ok &= 17 <= j <= 23
    parts.append(f"Enron={j:.2f} [17,23]")
    return ("PASS" if ok else "FAIL"), "; ".join(parts)


def crit_properties(tmp_dir: Path):
    import test_classifier
    import test_features
    import test_sampler
    checks = {
        "feature oracles (count)": test_features.test_count_features_oracle,
        "feature oracles (motif)": test_features.test_motif_features_oracle,
        "gradient finite differences": test_classifier.test_gradient_matches_finite_differences,
        "plan feasibility, 1000 tables": test_sampler.test_plan_feasibility_and_single_fraction,
    }
    failed = []
    for label, fn in checks.items():
        try:
            fn()
        except AssertionError:
            failed.append(label)
    rng = random.Random(17)
    train = Hypergraph.from_edges(random_hypergraph_edges(rng, 80, 60, max_size=5))
    query = Hypergraph.from_edges(random_hypergraph_edges(rng, 80, 60, max_size=5))
    write_hypergraph(train, tmp_dir / "tr.txt")
    write_hypergraph(query, tmp_dir / "q.txt")
    outs = []
    for i in range(2):
        run_cli(["reconstruct", str(tmp_dir / "tr.txt"), str(tmp_dir / "q.txt"), "--seed", "7",
                 "--epochs", "300", "--out", str(tmp_dir / f"r{i}.txt")])
        outs.append((tmp_dir / f"r{i}.txt").read_bytes())
    if outs[0] != outs[1]:
        failed.append("end-to-end determinism")
    n = len(checks) + 1
    return ("PASS" if not failed else "FAIL"), f"{n - len(failed)}/{n} suites green" + (
        f"; failed: {', '.join(failed)}" if failed else "")


# ---------------------------------------------------------------- entry points

CRITERIA = [
    ("Clique/hyperedge equality iff nesting-free and conformal", lambda _: crit_clique_equality()),
    ("Triangle conformality check agrees with direct check", lambda _: crit_triangle_check()),
    ("Enron projection error profile", lambda _: crit_enron_profile()),
    ("Greedy sampler vs brute-force optimum", lambda _: crit_greedy_bound()),
    ("rho estimator unbiasedness (1e5 draws)", lambda _: crit_rho_unbiased()),
    ("End-to-end Jaccard bands (10 seeds)", lambda _: crit_end_to_end()),
    ("Maximal-clique baseline Jaccard", lambda _: crit_maxclique()),
    ("Multiplicity baseline", lambda _: crit_multiplicity()),
    ("Property suites", crit_properties),
]


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, fn, tmp_path):
    _record(name, lambda: fn(tmp_path))


if __name__ == "__main__":
    import tempfile
    fails = 0
    with tempfile.TemporaryDirectory() as d:
        for name, fn in CRITERIA:
            try:
                status, detail = fn(Path(d))
            except Skip as exc:
                status, detail = "SKIP", str(exc)
            fails += status == "FAIL"
            print(_line(status, name, detail), flush=True)
    sys.exit(1 if fails else 0)
