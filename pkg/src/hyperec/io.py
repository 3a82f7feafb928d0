"""Text formats and train/query splitting.

Hypergraph files hold one hyperedge per line as whitespace-separated
non-negative integer node IDs.  A timestamped line is ``t<TAB>ids...`` with
``t`` in integer epoch seconds.  ``#`` starts a comment; the directive
``#@isolated ids...`` declares nodes that belong to no hyperedge.

Graph files hold one edge ``u v`` per line; a line with a single ID declares
an isolated node.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from .core import Graph, Hypergraph
from .multiplicity import WeightedGraph

log = logging.getLogger(__name__)

ISOLATED_DIRECTIVE = "#@isolated"


class DataFormatError(ValueError):
    """Malformed input file; message carries the path and line number."""


def _ids(tokens, path, lineno) -> list[int]:
    out = []
    for tok in tokens:
        try:
            v = int(tok)
        except ValueError:
            raise DataFormatError(f"{path}:{lineno}: invalid node id {tok!r}") from None
        if v < 0:
            raise DataFormatError(f"{path}:{lineno}: negative node id {v}")
        out.append(v)
    return out


def parse_hypergraph_text(text: str, path: str = "<string>") -> Hypergraph:
    edges: list[frozenset] = []
    stamps: list[int] = []
    index: dict[frozenset, int] = {}
    isolated: list[int] = []
    timestamped = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if line.startswith(ISOLATED_DIRECTIVE):
            isolated += _ids(line[len(ISOLATED_DIRECTIVE):].split(), path, lineno)
            continue
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        has_ts = "\t" in line.strip(" ")
        if timestamped is None:
            timestamped = has_ts
        elif has_ts != timestamped:
            raise DataFormatError(f"{path}:{lineno}: mixes timestamped and plain lines")
        if has_ts:
            ts_tok, rest = line.strip(" ").split("\t", 1)
            try:
                ts = int(ts_tok)
            except ValueError:
                raise DataFormatError(f"{path}:{lineno}: invalid timestamp {ts_tok!r}") from None
        else:
            ts, rest = None, line
        ids = _ids(rest.split(), path, lineno)
        if not ids:
            raise DataFormatError(f"{path}:{lineno}: empty hyperedge")
        e = frozenset(ids)
        if e in index:
            log.warning("%s:%d: duplicate hyperedge %s collapsed", path, lineno, sorted(e))
            continue
        index[e] = len(edges)
        edges.append(e)
        if ts is not None:
            stamps.append(ts)
    return Hypergraph.from_edges(edges, isolated, stamps if timestamped else None)


def parse_hypergraph(path) -> Hypergraph:
    return parse_hypergraph_text(Path(path).read_text(encoding="utf-8"), str(path))


def format_hypergraph(h: Hypergraph) -> str:
    h = h.canonical()
    lines = []
    covered = frozenset().union(*h.hyperedges) if h.hyperedges else frozenset()
    iso = sorted(h.nodes - covered)
    if iso:
        lines.append(ISOLATED_DIRECTIVE + " " + " ".join(map(str, iso)))
    for i, e in enumerate(h.hyperedges):
        ids = " ".join(map(str, sorted(e)))
        lines.append(f"{h.timestamps[i]}\t{ids}" if h.timestamps is not None else ids)
    return "".join(ln + "\n" for ln in lines)


def write_hypergraph(h: Hypergraph, path) -> None:
    Path(path).write_text(format_hypergraph(h), encoding="utf-8", newline="\n")


def parse_graph(path) -> Graph:
    edges, nodes = [], []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        ids = _ids(line.split(), path, lineno)
        if len(ids) == 1:
            nodes.append(ids[0])
        elif len(ids) == 2:
            if ids[0] == ids[1]:
                raise DataFormatError(f"{path}:{lineno}: self-loop")
            edges.append(tuple(ids))
        else:
            raise DataFormatError(f"{path}:{lineno}: expected 'u v' or 'u'")
    return Graph.from_edges(edges, nodes)


def format_graph(g: Graph) -> str:
    lines = [f"{v}" for v in sorted(g.nodes) if not g.adj[v]]
    lines += [f"{u} {v}" for u, v in sorted(tuple(sorted(e)) for e in g.edges)]
    return "".join(ln + "\n" for ln in lines)


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8", newline="\n")


def format_weighted_graph(wg: WeightedGraph) -> str:
    """``# weight: multiplicity`` (integers) or ``# weight: real`` (decimals)."""
    integral = all(Fraction(w).denominator == 1 for w in wg.weights.values())
    lines = ["# weight: multiplicity" if integral else "# weight: real"]
    covered = {v for e in wg.weights for v in e}
    lines += [f"{v}" for v in sorted(wg.nodes - covered)]
    for e in sorted(wg.weights, key=lambda e: tuple(sorted(e))):
        u, v = sorted(e)
        w = wg.weights[e]
        lines.append(f"{u} {v} {int(w)}" if integral else f"{u} {v} {float(w):.17g}")
    return "".join(ln + "\n" for ln in lines)


def write_weighted_graph(wg: WeightedGraph, path) -> None:
    Path(path).write_text(format_weighted_graph(wg), encoding="utf-8", newline="\n")


def parse_weighted_graph(path) -> WeightedGraph:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("# weight:"):
        raise DataFormatError(f"{path}:1: missing '# weight: multiplicity|real' header")
    kind = lines[0].split(":", 1)[1].strip()
    if kind not in ("multiplicity", "real"):
        raise DataFormatError(f"{path}:1: unknown weight kind {kind!r}")
    nodes, weights = set(), {}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) == 1:
            nodes.update(_ids(line, path, lineno))
            continue
        if len(line) != 3:
            raise DataFormatError(f"{path}:{lineno}: expected 'u v weight'")
        u, v = _ids(line[:2], path, lineno)
        try:
            w = int(line[2]) if kind == "multiplicity" else Fraction(line[2])
        except ValueError:
            raise DataFormatError(f"{path}:{lineno}: invalid weight {line[2]!r}") from None
        if w <= 0 or u == v:
            raise DataFormatError(f"{path}:{lineno}: weights must be positive on distinct nodes")
        nodes.update((u, v))
        weights[frozenset((u, v))] = w
    return WeightedGraph(frozenset(nodes), weights)


@dataclass(frozen=True)
class SplitSpec:
    mode: str = "random"  # "random" or "timestamp"
    seed: int | None = 0
    cutoff: int | None = None
    reindex: bool = True

    def __post_init__(self):
        if self.mode not in ("random", "timestamp"):
            raise ValueError(f"unknown split mode {self.mode!r}")
        if self.mode == "timestamp" and self.cutoff is None:
            raise ValueError("timestamp split needs a cutoff")


def parse_cutoff(value: str) -> int:
    """Epoch seconds, or an ISO-8601 datetime (UTC when no zone given)."""
    try:
        return int(value)
    except ValueError:
        pass
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def _reindexed(edges: list[frozenset], rng: random.Random) -> Hypergraph:
    nodes = sorted(frozenset().union(*edges)) if edges else []
    perm = list(range(len(nodes)))
    rng.shuffle(perm)
    mapping = dict(zip(nodes, perm))
    return Hypergraph.from_edges([[mapping[v] for v in e] for e in edges])


def split_dataset(h: Hypergraph, spec: SplitSpec) -> tuple[Hypergraph, Hypergraph]:
    """Split hyperedges into (train, query).

    Timestamp mode puts hyperedges at or before the cutoff in train.  Random
    mode shuffles with the seed and gives train the first half (rounded
    down).  With ``reindex`` each split's nodes are independently relabelled
    0..n-1 in random order.
    """
    rng = random.Random(spec.seed)
    if spec.mode == "timestamp":
        if h.timestamps is None:
            raise ValueError("timestamp split requires timestamped hyperedges")
        lo, hi = min(h.timestamps), max(h.timestamps)
        if not lo <= spec.cutoff <= hi:
            raise ValueError(f"cutoff {spec.cutoff} outside timestamp range [{lo}, {hi}]")
        train = [e for e, t in zip(h.hyperedges, h.timestamps) if t <= spec.cutoff]
        query = [e for e, t in zip(h.hyperedges, h.timestamps) if t > spec.cutoff]
    else:
        order = list(range(h.m))
        rng.shuffle(order)
        half = h.m // 2
        train = [h.hyperedges[i] for i in order[:half]]
        query = [h.hyperedges[i] for i in order[half:]]
    if spec.reindex:
        return _reindexed(train, rng), _reindexed(query, rng)
    return Hypergraph.from_edges(train), Hypergraph.from_edges(query)


def write_manifest(values: dict, path) -> None:
    lines = [f"{k}={values[k]}" for k in sorted(values)]
    Path(path).write_text("".join(ln + "\n" for ln in lines), encoding="utf-8", newline="\n")


def read_manifest(path) -> dict:
    out = {}
    for ln in Path(path).read_text(encoding="utf-8").splitlines():
        if ln.strip() and not ln.startswith("#"):
            k, v = ln.split("=", 1)
            out[k.strip()] = v.strip()
    return out
