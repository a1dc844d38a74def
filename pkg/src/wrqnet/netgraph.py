"""Undirected spatial network model with commonality (neighbour-sharing) queries.

A network is a finite undirected graph whose nodes carry planar coordinates
(in km) and whose edges carry a physical length and an optional capacity in
bits per channel use.  The commonality machinery quantifies weak regularity:
for a k-regular node x, the adjacent commonality multiset collects the number
of common neighbours shared with each neighbour, and the family of such
multisets determines the characteristic quantities delta and omega.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Edge",
    "Network",
    "UserPair",
    "neighborhood",
    "edge_neighborhood",
    "adjacent_commonality",
    "nonadjacent_commonality",
    "commonality_multiset",
    "commonality_superset",
    "min_commonality_multiset",
    "delta",
    "omega",
    "network_to_json",
    "network_from_json",
    "dump_network",
    "load_network",
]


@dataclass(frozen=True)
class Edge:
    """Undirected edge between node indices u < v.

    capacity is in bits per channel use; None means "derive from length"
    (e.g. via the lossy-fibre bound in :mod:`wrqnet.capacity`).
    """

    u: int
    v: int
    length_km: float
    capacity: Optional[float] = None

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise ValueError(f"node {x} is not an endpoint of edge ({self.u},{self.v})")

    def key(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class UserPair:
    """An end-user pair (a, b), a != b."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError("end-users must be distinct nodes")


class Network:
    """Immutable undirected spatial graph.

    Parameters
    ----------
    positions : (n, 2) array-like of node coordinates in km.
    edges : iterable of Edge (or (u, v, length_km[, capacity]) tuples).
    boundary : optional boolean sequence; True marks a boundary node.
    """

    def __init__(self, positions, edges: Iterable, boundary=None):
        pos = np.asarray(positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError("positions must be an (n, 2) array")
        if not np.all(np.isfinite(pos)):
            raise ValueError("node positions must be finite")
        self._pos = pos
        self._pos.setflags(write=False)
        n = len(pos)

        norm_edges: list[Edge] = []
        seen: set[tuple[int, int]] = set()
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            u, v = (e.u, e.v) if e.u < e.v else (e.v, e.u)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({e.u},{e.v}) references unknown node")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            if not (e.length_km > 0) or not math.isfinite(e.length_km):
                raise ValueError(f"edge ({u},{v}) must have positive finite length")
            if e.capacity is not None and e.capacity < 0:
                raise ValueError(f"edge ({u},{v}) has negative capacity")
            seen.add((u, v))
            norm_edges.append(Edge(u, v, float(e.length_km), e.capacity))
        self._edges = tuple(norm_edges)

        if boundary is None:
            bnd = np.zeros(n, dtype=bool)
        else:
            bnd = np.asarray(boundary, dtype=bool)
            if bnd.shape != (n,):
                raise ValueError("boundary flags must have one entry per node")
        self._boundary = bnd
        self._boundary.setflags(write=False)

        nbrs: list[list[int]] = [[] for _ in range(n)]
        idx: dict[tuple[int, int], int] = {}
        for i, e in enumerate(self._edges):
            nbrs[e.u].append(e.v)
            nbrs[e.v].append(e.u)
            idx[(e.u, e.v)] = i
        self._neighbors = tuple(tuple(sorted(ns)) for ns in nbrs)
        self._nbr_sets = tuple(frozenset(ns) for ns in self._neighbors)
        self._edge_index = idx

    # -- basic accessors -------------------------------------------------
    @property
    def n_nodes(self) -> int:
        return len(self._pos)

    @property
    def positions(self) -> np.ndarray:
        return self._pos

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def boundary(self) -> np.ndarray:
        return self._boundary

    def internal_nodes(self) -> list[int]:
        return [i for i in range(self.n_nodes) if not self._boundary[i]]

    def degree(self, x: int) -> int:
        return len(self._neighbors[self._check(x)])

    def neighbors(self, x: int) -> tuple[int, ...]:
        return self._neighbors[self._check(x)]

    def neighbor_set(self, x: int) -> frozenset[int]:
        return self._nbr_sets[self._check(x)]

    def has_edge(self, x: int, y: int) -> bool:
        u, v = (x, y) if x < y else (y, x)
        return (u, v) in self._edge_index

    def edge_between(self, x: int, y: int) -> Edge:
        u, v = (x, y) if x < y else (y, x)
        try:
            return self._edges[self._edge_index[(u, v)]]
        except KeyError:
            raise KeyError(f"no edge between {x} and {y}") from None

    def with_boundary(self, boundary) -> "Network":
        """Copy of this network with replaced boundary flags."""
        return Network(self._pos, self._edges, boundary)

    def with_capacities(self, capacities: Sequence[float]) -> "Network":
        """Copy with per-edge capacities (aligned with self.edges)."""
        if len(capacities) != len(self._edges):
            raise ValueError("one capacity per edge required")
        new = [Edge(e.u, e.v, e.length_km, float(c))
               for e, c in zip(self._edges, capacities)]
        return Network(self._pos, new, self._boundary)

    def _check(self, x: int) -> int:
        if not isinstance(x, (int, np.integer)) or not (0 <= x < self.n_nodes):
            raise ValueError(f"invalid node id {x!r}")
        return int(x)


# -- neighbourhood and commonality queries ------------------------------

def neighborhood(net: Network, x: int) -> set[int]:
    """Set of nodes adjacent to x."""
    return set(net.neighbors(x))


def edge_neighborhood(net: Network, x: int) -> set[Edge]:
    """Set of edges incident to x."""
    return {net.edge_between(x, y) for y in net.neighbors(x)}


def adjacent_commonality(net: Network, x: int, y: int) -> int:
    """Number of common neighbours of an *adjacent* pair (x, y)."""
    if not net.has_edge(x, y):
        raise ValueError(f"nodes {x} and {y} are not adjacent; "
                         "use nonadjacent_commonality")
    return len(net.neighbor_set(x) & net.neighbor_set(y))


def nonadjacent_commonality(net: Network, x: int, y: int) -> int:
    """Number of common neighbours of a *non-adjacent* distinct pair."""
    if x == y:
        raise ValueError("nodes must be distinct")
    if net.has_edge(x, y):
        raise ValueError(f"nodes {x} and {y} are adjacent; "
                         "use adjacent_commonality")
    return len(net.neighbor_set(x) & net.neighbor_set(y))


def commonality_multiset(net: Network, x: int) -> tuple[int, ...]:
    """Sorted multiset of adjacent commonalities of x with each neighbour."""
    nx = net.neighbor_set(x)
    return tuple(sorted(len(nx & net.neighbor_set(y)) for y in net.neighbors(x)))


def commonality_superset(net: Network, nodes=None) -> set[tuple[int, ...]]:
    """Set of distinct commonality multisets over a node subset.

    By default only internal (non-boundary) nodes contribute, since weak
    regularity is a property of the network interior.
    """
    if nodes is None:
        nodes = net.internal_nodes()
    nodes = list(nodes)
    if not nodes:
        raise ValueError("empty node subset")
    return {commonality_multiset(net, x) for x in nodes}


def min_commonality_multiset(superset, k: int) -> tuple[int, ...]:
    """The multiset minimising sum(k - lam - 1); ties break lexicographically."""
    cands = [tuple(sorted(m)) for m in superset]
    if not cands:
        raise ValueError("empty superset")
    for m in cands:
        if len(m) != k:
            raise ValueError(f"multiset {m} has cardinality {len(m)} != k={k}")
    return min(cands, key=lambda m: (sum(k - lam - 1 for lam in m), m))


def delta(k: int, lambda_star) -> int:
    """Characteristic cut-growth quantity: sum over lambda* of (k - lam - 1)."""
    lam = tuple(lambda_star)
    if len(lam) != k:
        raise ValueError(f"lambda* must have cardinality k={k}")
    if any(l >= k for l in lam):
        raise ValueError("every commonality must be < k")
    return sum(k - l - 1 for l in lam)


def omega(k: int, delta_value: int) -> Fraction:
    """Worst-case performance confidence factor, 2(k-1)/delta, exact."""
    if delta_value <= 0:
        raise ValueError("delta must be positive")
    return Fraction(2 * (k - 1), delta_value)


# -- graph JSON schema ---------------------------------------------------
# {"nodes":[{"id","x","y","boundary"}],
#  "edges":[{"u","v","length_km","capacity"}]}  capacity null => derive.

def network_to_json(net: Network) -> dict:
    return {
        "nodes": [
            {"id": i, "x": float(net.positions[i, 0]),
             "y": float(net.positions[i, 1]),
             "boundary": bool(net.boundary[i])}
            for i in range(net.n_nodes)
        ],
        "edges": [
            {"u": e.u, "v": e.v, "length_km": e.length_km,
             "capacity": e.capacity}
            for e in net.edges
        ],
    }


def network_from_json(doc: dict) -> Network:
    nodes = sorted(doc["nodes"], key=lambda d: d["id"])
    ids = [d["id"] for d in nodes]
    if ids != list(range(len(ids))):
        raise ValueError("node ids must be contiguous integers from 0")
    pos = [(d["x"], d["y"]) for d in nodes]
    bnd = [bool(d.get("boundary", False)) for d in nodes]
    edges = [Edge(d["u"], d["v"], d["length_km"], d.get("capacity"))
             for d in doc["edges"]]
    return Network(pos, edges, bnd)


def dump_network(net: Network) -> str:
    """Deterministic JSON serialization (byte-stable for fixed input)."""
    return json.dumps(network_to_json(net), sort_keys=True,
                      separators=(",", ":")) + "\n"


def load_network(text: str) -> Network:
    return network_from_json(json.loads(text))
