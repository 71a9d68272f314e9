"""Signed directed graphs: edge-list loading, validation, splitting, sampling.

A graph is a node count plus two disjoint sets of ordered pairs, one per edge
sign. At most one sign per ordered pair; reciprocal edges of any sign
combination are two distinct directed edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

POS = 1
NEG = -1


class GraphError(ValueError):
    """Invalid graph structure (sign conflict, bad index, self-loop)."""


class EdgeListParseError(GraphError):
    """Unparseable or inconsistent edge-list line; carries the line number."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


class EdgeRecord(NamedTuple):
    src: int
    dst: int
    sign: int


@dataclass(frozen=True)
class SignedDiGraph:
    """Immutable signed directed graph over nodes 0..num_nodes-1."""

    num_nodes: int
    pos_edges: frozenset[tuple[int, int]]
    neg_edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.pos_edges & self.neg_edges:
            both = sorted(self.pos_edges & self.neg_edges)[0]
            raise GraphError(f"ordered pair {both} carries both signs")
        for u, v in self.pos_edges | self.neg_edges:
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
                raise GraphError(
                    f"edge ({u},{v}) outside node range [0,{self.num_nodes})"
                )

    @property
    def num_edges(self) -> int:
        return len(self.pos_edges) + len(self.neg_edges)

    @cached_property
    def pos_list(self) -> tuple[tuple[int, int], ...]:
        """Positive edges in canonical (sorted) order."""
        return tuple(sorted(self.pos_edges))

    @cached_property
    def neg_list(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.neg_edges))

    def edge_records(self) -> list[EdgeRecord]:
        """All edges in canonical order, positives first."""
        return [EdgeRecord(u, v, POS) for u, v in self.pos_list] + [
            EdgeRecord(u, v, NEG) for u, v in self.neg_list
        ]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.pos_edges or (u, v) in self.neg_edges


@dataclass(frozen=True)
class DataSplit:
    """60/20/20 edge partition used for training/validation/testing."""

    train: tuple[EdgeRecord, ...]
    valid: tuple[EdgeRecord, ...]
    test: tuple[EdgeRecord, ...]
    seed: int

    @property
    def all_edges(self) -> tuple[EdgeRecord, ...]:
        return self.train + self.valid + self.test


@dataclass(frozen=True)
class LoadedEdgeList:
    """A loaded graph plus the map from dense index to original node id."""

    graph: SignedDiGraph
    original_ids: tuple[str, ...]


def graph_from_edges(num_nodes: int, edges: Iterable[EdgeRecord]) -> SignedDiGraph:
    """Build a validated graph; rejects sign conflicts and bad indices."""
    pos, neg = set(), set()
    for rec in edges:
        u, v, sign = rec
        if not (0 <= u < num_nodes and 0 <= v < num_nodes):
            raise GraphError(f"edge ({u},{v}) outside node range [0,{num_nodes})")
        pair = (u, v)
        if sign == POS:
            if pair in neg:
                raise GraphError(f"ordered pair {pair} carries both signs")
            pos.add(pair)
        elif sign == NEG:
            if pair in pos:
                raise GraphError(f"ordered pair {pair} carries both signs")
            neg.add(pair)
        else:
            raise GraphError(f"sign must be +1 or -1, got {sign}")
    return SignedDiGraph(num_nodes, frozenset(pos), frozenset(neg))


def _parse_line(path, lineno, line, fmt):
    """Return (src_token, dst_token, sign) or None for skippable lines."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    if fmt == "three-column":
        parts = stripped.split()
        if len(parts) != 3:
            raise EdgeListParseError(
                path, lineno, f"expected 'src dst sign', got {len(parts)} fields"
            )
        src, dst, sign_tok = parts
        if sign_tok not in ("1", "+1", "-1"):
            raise EdgeListParseError(path, lineno, f"sign must be 1 or -1, got {sign_tok!r}")
        return src, dst, POS if sign_tok in ("1", "+1") else NEG
    if fmt == "snap-rating":
        parts = stripped.split(",")
        if len(parts) not in (3, 4):
            raise EdgeListParseError(
                path, lineno, f"expected 'src,dst,rating[,time]', got {len(parts)} fields"
            )
        src, dst, rating_tok = parts[0], parts[1], parts[2]
        try:
            rating = float(rating_tok)
        except ValueError:
            raise EdgeListParseError(path, lineno, f"bad rating {rating_tok!r}") from None
        if rating == 0:
            raise EdgeListParseError(path, lineno, "rating 0 has no defined sign")
        return src, dst, POS if rating > 0 else NEG
    raise ValueError(f"unknown edge-list format {fmt!r}")


def load_edge_list(path, fmt: str = "snap-rating") -> LoadedEdgeList:
    """Load a signed directed graph from an edge-list file.

    Node ids are re-indexed densely in order of first appearance; ids that
    already form 0..n-1 are kept as-is so that serialize/load round-trips.
    Duplicate ordered pairs keep the first occurrence; the same pair with
    both signs is an error.
    """
    path = Path(path)
    index: dict[str, int] = {}
    seen: dict[tuple[int, int], int] = {}
    records: list[EdgeRecord] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parsed = _parse_line(path, lineno, line, fmt)
            if parsed is None:
                continue
            src_tok, dst_tok, sign = parsed
            if src_tok == dst_tok:
                raise EdgeListParseError(path, lineno, f"self-loop at node {src_tok!r}")
            u = index.setdefault(src_tok, len(index))
            v = index.setdefault(dst_tok, len(index))
            prev = seen.get((u, v))
            if prev is None:
                seen[(u, v)] = sign
                records.append(EdgeRecord(u, v, sign))
            elif prev != sign:
                raise EdgeListParseError(
                    path, lineno, f"ordered pair ({src_tok},{dst_tok}) carries both signs"
                )
            # duplicate with same sign: keep first occurrence

    original_ids = tuple(index.keys())
    identity = _ids_already_dense(original_ids)
    if identity is not None:
        records = [EdgeRecord(identity[u], identity[v], s) for u, v, s in records]
        original_ids = tuple(str(i) for i in range(len(index)))
    graph = graph_from_edges(len(index), records)
    return LoadedEdgeList(graph, original_ids)


def _ids_already_dense(tokens):
    """If tokens are exactly the integers 0..n-1, return old-index -> int map."""
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        return None
    if sorted(values) != list(range(len(values))):
        return None
    return values


def write_edge_list(graph: SignedDiGraph, path) -> None:
    """Serialize as three-column 'src dst sign' lines in canonical order."""
    with open(path, "w") as fh:
        for u, v, s in graph.edge_records():
            fh.write(f"{u} {v} {s}\n")


def split_edges(g: SignedDiGraph, seed: int) -> DataSplit:
    """Partition all edges 60/20/20 by a seeded uniform permutation."""
    records = g.edge_records()
    n = len(records)
    if n < 5:
        raise GraphError(f"need at least 5 edges to split, got {n}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    n_train = int(round(0.6 * n))
    n_valid = int(round(0.2 * n))
    shuffled = [records[i] for i in order]
    return DataSplit(
        train=tuple(shuffled[:n_train]),
        valid=tuple(shuffled[n_train : n_train + n_valid]),
        test=tuple(shuffled[n_train + n_valid :]),
        seed=seed,
    )


def sample_training_edges(
    train: Iterable[EdgeRecord], ratio: float, seed: int
) -> list[EdgeRecord]:
    """All negative edges plus a seeded sample of positives, ratio:1 at most."""
    train = list(train)
    pos = [e for e in train if e.sign == POS]
    neg = [e for e in train if e.sign == NEG]
    if not neg:
        raise GraphError("training set has no negative edges")
    k = min(int(ratio * len(neg)), len(pos))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(pos), size=k, replace=False)
    return [pos[i] for i in chosen] + neg


def write_split(split: DataSplit, out_dir) -> None:
    """Write train/valid/test three-column files plus a JSON sidecar."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in ("train", "valid", "test"):
        edges = getattr(split, name)
        with open(out_dir / f"{name}.edges", "w") as fh:
            for u, v, s in edges:
                fh.write(f"{u} {v} {s}\n")
    sidecar = {
        "seed": split.seed,
        "counts": {
            "train": len(split.train),
            "valid": len(split.valid),
            "test": len(split.test),
        },
    }
    with open(out_dir / "split.json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_split(in_dir) -> DataSplit:
    in_dir = Path(in_dir)
    with open(in_dir / "split.json") as fh:
        sidecar = json.load(fh)
    parts = {}
    for name in ("train", "valid", "test"):
        edges = []
        with open(in_dir / f"{name}.edges") as fh:
            for line in fh:
                u, v, s = line.split()
                edges.append(EdgeRecord(int(u), int(v), int(s)))
        if len(edges) != sidecar["counts"][name]:
            raise GraphError(
                f"{name} split has {len(edges)} edges, sidecar says "
                f"{sidecar['counts'][name]}"
            )
        parts[name] = tuple(edges)
    return DataSplit(seed=sidecar["seed"], **parts)
