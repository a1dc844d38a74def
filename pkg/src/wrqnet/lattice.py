"""Deterministic generators for four weakly-regular lattice families.

Families and their characteristic quantities (degree k, minimum commonality
multiset lambda*, cut growth delta, confidence factor omega, density constant
xi, and the minimum node count n_min admitting deeply-embedded users):

======================  ===  ==================  =====  ======  =========  =====
family                   k    lambda*            delta  omega   xi         n_min
======================  ===  ==================  =====  ======  =========  =====
honeycomb                3    {0}^3                  6   2/3    4/(3*V3)     54
hexagonal                6    {2}^6                 18   5/9    2/V3         89
manhattan8               8    {2,4}^4               32   7/16   2           110
manhattan16             16    {4,8,8,8}^4          128   15/64  6           197
======================  ===  ==================  =====  ======  =========  =====

The honeycomb is built as r concentric rings of unit hexagons; the hexagonal
lattice adds a centre node inside every hexagon (centres connect to the six
surrounding corners but not to each other).  manhattan8 is the king graph on
an (r+1) x (r+1) grid with diagonals as the longest edge class.  manhattan16
is realised on a quarter-subdivided square grid with class-dependent
adjacency rules; its geometry is accepted via validate_wrn (internal degree,
commonality multisets and the node-count law), not via a prescribed figure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .netgraph import (Edge, Network, UserPair, commonality_multiset,
                       min_commonality_multiset)

__all__ = [
    "LatticeFamily",
    "LatticeSpec",
    "WrnCharacteristics",
    "NoDeepPair",
    "ValidationReport",
    "characteristics",
    "build",
    "build_lattice",
    "node_count",
    "classify_boundary",
    "deep_pair_search",
    "select_deep_users",
    "validate_wrn",
    "reference_area",
    "nodal_density",
]

_SQRT3 = math.sqrt(3.0)


class LatticeFamily(str, enum.Enum):
    HONEYCOMB = "honeycomb"
    HEXAGONAL = "hexagonal"
    MANHATTAN8 = "manhattan8"
    MANHATTAN16 = "manhattan16"


@dataclass(frozen=True)
class WrnCharacteristics:
    k: int
    lambda_star: tuple[int, ...]
    delta: int
    omega: Fraction
    xi: float
    n_min: int
    # every commonality multiset realised by internal nodes of the family
    lambda_family: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self) -> None:
        assert self.delta == sum(self.k - l - 1 for l in self.lambda_star)
        assert self.omega == Fraction(2 * (self.k - 1), self.delta)


def _mset(*runs: tuple[int, int]) -> tuple[int, ...]:
    out: list[int] = []
    for value, count in runs:
        out.extend([value] * count)
    return tuple(sorted(out))


_CHARS = {
    LatticeFamily.HONEYCOMB: WrnCharacteristics(
        k=3, lambda_star=_mset((0, 3)), delta=6, omega=Fraction(2, 3),
        xi=4.0 / (3.0 * _SQRT3), n_min=54,
        lambda_family=(_mset((0, 3)),)),
    LatticeFamily.HEXAGONAL: WrnCharacteristics(
        k=6, lambda_star=_mset((2, 6)), delta=18, omega=Fraction(5, 9),
        xi=2.0 / _SQRT3, n_min=89,
        lambda_family=(_mset((2, 6)),)),
    LatticeFamily.MANHATTAN8: WrnCharacteristics(
        k=8, lambda_star=_mset((2, 4), (4, 4)), delta=32, omega=Fraction(7, 16),
        xi=2.0, n_min=110,
        lambda_family=(_mset((2, 4), (4, 4)),)),
    LatticeFamily.MANHATTAN16: WrnCharacteristics(
        k=16, lambda_star=_mset((4, 4), (8, 12)), delta=128,
        omega=Fraction(15, 64), xi=6.0, n_min=197,
        lambda_family=(
            _mset((4, 4), (8, 12)),                       # cell centres
            _mset((2, 8), (4, 8)),                        # grid corners
            _mset((3, 12), (6, 2), (8, 2)),               # side midpoints
            _mset((2, 2), (3, 6), (4, 1), (6, 5), (8, 2)),  # quarter nodes
        )),
}


@dataclass(frozen=True)
class LatticeSpec:
    family: LatticeFamily
    rings: int
    edge_scale: float = 1.0  # length (km) of the family's longest edge class

    def __post_init__(self) -> None:
        if self.rings < 1:
            raise ValueError("rings must be at least 1")
        if self.edge_scale <= 0:
            raise ValueError("edge_scale must be positive")


class NoDeepPair(Exception):
    """No deeply-embedded user pair exists in the given network."""

    def __init__(self, message: str, n_min: int):
        super().__init__(message)
        self.n_min = n_min


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    n_internal: int
    degree_violations: tuple[int, ...]
    commonality_violations: tuple[int, ...]
    warning: Optional[str] = None


def characteristics(family: LatticeFamily) -> WrnCharacteristics:
    return _CHARS[LatticeFamily(family)]


def node_count(family: LatticeFamily, r: int) -> int:
    """Closed-form node count of an r-ring lattice."""
    if r < 1:
        raise ValueError("rings must be at least 1")
    family = LatticeFamily(family)
    if family is LatticeFamily.HONEYCOMB:
        return 6 * r * r
    if family is LatticeFamily.HEXAGONAL:
        return 1 + 3 * r * (3 * r - 1)
    if family is LatticeFamily.MANHATTAN8:
        return (r + 1) ** 2
    return (7 * r + 1) * (r + 1) + r * r


# -- geometry helpers ----------------------------------------------------

def _hexagon_centers(r: int) -> list[tuple[float, float]]:
    """Centres of the hexagons in an r-ring flower, unit edge length."""
    cs = []
    for q in range(-r + 1, r):
        for s in range(-r + 1, r):
            if abs(q + s) <= r - 1:
                cs.append((_SQRT3 * (q + s / 2.0), 1.5 * s))
    return cs


def _honeycomb_vertices(r: int) -> list[tuple[float, float]]:
    verts: dict[tuple[float, float], tuple[float, float]] = {}
    for cx, cy in _hexagon_centers(r):
        for t in range(6):
            ang = math.pi / 6.0 + t * math.pi / 3.0
            v = (cx + math.cos(ang), cy + math.sin(ang))
            verts.setdefault((round(v[0], 6), round(v[1], 6)), v)
    return [verts[k] for k in sorted(verts)]


def _unit_distance_edges(pts: np.ndarray) -> list[tuple[int, int]]:
    tree = cKDTree(pts)
    return sorted((min(a, b), max(a, b))
                  for a, b in tree.query_pairs(1.0 + 1e-6))


def _build_honeycomb(r: int, d: float, with_centers: bool) -> Network:
    pts = _honeycomb_vertices(r)
    if with_centers:
        pts = pts + sorted(_hexagon_centers(r))
    arr = np.asarray(pts)
    order = np.lexsort((np.round(arr[:, 1], 6), np.round(arr[:, 0], 6)))
    arr = arr[order]
    pairs = _unit_distance_edges(arr)
    pos = arr * d
    edges = [Edge(a, b, d) for a, b in pairs]
    return Network(pos, edges)


# manhattan16 node classes on the quarter-subdivided grid (quarter units):
#   G: grid corners (x%4==0, y%4==0)   O: cell centres (x%4==2, y%4==2)
#   M: side midpoints (x%4==2 xor y%4==2, excluding O)   Q: quarter nodes
# Adjacency rule atoms (classA, classB, squared quarter-distance):
_MH16_ATOMS = (
    ("G", "O", 8), ("G", "Q", 1), ("G", "Q", 17), ("M", "O", 4),
    ("M", "Q", 1), ("M", "Q", 5), ("M", "Q", 13), ("M", "Q", 17),
    ("O", "Q", 5), ("Q", "Q", 10),
)
_MH16_MAX_D2 = max(a[2] for a in _MH16_ATOMS)


def _mh16_class(x: int, y: int) -> str:
    xm, ym = x % 4, y % 4
    if xm == 0 and ym == 0:
        return "G"
    if xm == 2 and ym == 2:
        return "O"
    if xm == 2 or ym == 2:
        return "M"
    return "Q"


def _mh16_points(r: int) -> list[tuple[int, int]]:
    pts = set()
    for j in range(r + 1):
        for m in range(4 * r + 1):
            pts.add((m, 4 * j))          # horizontal rows
    for i in range(r + 1):
        for m in range(4 * r + 1):
            if m % 4 != 0:
                pts.add((4 * i, m))      # vertical line interiors
    for i in range(r):
        for j in range(r):
            pts.add((4 * i + 2, 4 * j + 2))  # cell centres
    return sorted(pts)


def _build_manhattan16(r: int, d: float) -> Network:
    rules: dict[tuple[str, str], set[int]] = {}
    for a, b, d2 in _MH16_ATOMS:
        rules.setdefault((a, b), set()).add(d2)
        rules.setdefault((b, a), set()).add(d2)
    pts = _mh16_points(r)
    index = {p: i for i, p in enumerate(pts)}
    quarter = d / math.sqrt(_MH16_MAX_D2)  # longest edge class == edge_scale
    offsets = [(dx, dy)
               for dx in range(-4, 5) for dy in range(-4, 5)
               if 0 < dx * dx + dy * dy <= _MH16_MAX_D2
               and (dx, dy) > (0, 0)]
    edges = []
    for (x, y), i in index.items():
        ca = _mh16_class(x, y)
        for dx, dy in offsets:
            j = index.get((x + dx, y + dy))
            if j is None:
                continue
            d2 = dx * dx + dy * dy
            if d2 in rules.get((ca, _mh16_class(x + dx, y + dy)), ()):
                a, b = (i, j) if i < j else (j, i)
                edges.append((a, b, math.sqrt(d2) * quarter))
    edges.sort()
    pos = (np.asarray(pts, dtype=float) - 2.0 * r) * quarter
    return Network(pos, [Edge(*e) for e in edges])


def _build_manhattan8(r: int, d: float) -> Network:
    s = d / math.sqrt(2.0)
    pts = [(i, j) for i in range(r + 1) for j in range(r + 1)]
    index = {p: i for i, p in enumerate(pts)}
    edges = []
    for (x, y), i in index.items():
        for dx, dy, ln in ((1, 0, s), (0, 1, s), (1, 1, d), (1, -1, d)):
            j = index.get((x + dx, y + dy))
            if j is not None:
                a, b = (i, j) if i < j else (j, i)
                edges.append((a, b, ln))
    edges.sort()
    pos = (np.asarray(pts, dtype=float) - r / 2.0) * s
    return Network(pos, [Edge(*e) for e in edges])


def build(spec: LatticeSpec) -> Network:
    """Generate the lattice and flag boundary nodes."""
    family = LatticeFamily(spec.family)
    if family is LatticeFamily.HONEYCOMB:
        net = _build_honeycomb(spec.rings, spec.edge_scale, with_centers=False)
    elif family is LatticeFamily.HEXAGONAL:
        net = _build_honeycomb(spec.rings, spec.edge_scale, with_centers=True)
    elif family is LatticeFamily.MANHATTAN8:
        net = _build_manhattan8(spec.rings, spec.edge_scale)
    else:
        net = _build_manhattan16(spec.rings, spec.edge_scale)
    return classify_boundary(net, family)


def build_lattice(family: LatticeFamily, rings: int,
                  edge_scale: float = 1.0) -> Network:
    return build(LatticeSpec(LatticeFamily(family), rings, edge_scale))


def classify_boundary(net: Network, family: LatticeFamily) -> Network:
    """Flag nodes whose degree or commonality multiset deviates from the
    family's internal values."""
    chars = characteristics(family)
    allowed = set(chars.lambda_family)
    flags = np.ones(net.n_nodes, dtype=bool)
    for x in range(net.n_nodes):
        if net.degree(x) != chars.k:
            continue
        if commonality_multiset(net, x) in allowed:
            flags[x] = False
    return net.with_boundary(flags)


def validate_wrn(net: Network, chars: WrnCharacteristics) -> ValidationReport:
    """Check that all internal nodes are k-regular with permitted multisets."""
    internal = net.internal_nodes()
    if net.n_nodes == 0:
        return ValidationReport(True, 0, (), (),
                                warning="empty network: vacuously valid")
    allowed = set(chars.lambda_family)
    bad_deg, bad_lam = [], []
    for x in internal:
        if net.degree(x) != chars.k:
            bad_deg.append(x)
        elif commonality_multiset(net, x) not in allowed:
            bad_lam.append(x)
    return ValidationReport(not bad_deg and not bad_lam, len(internal),
                            tuple(bad_deg), tuple(bad_lam))


def deep_pair_search(net: Network, k: int, delta: int,
                     candidates, max_candidates: int = 48
                     ) -> Optional[UserPair]:
    """Scan candidate nodes (centre outwards) for a deeply-embedded pair.

    The pair shares no edge and no common neighbour, supports k edge-disjoint
    paths, and its minimum network-bulk cut collects at least delta edges,
    i.e. the bulk-cut cardinality bound is not compromised by the boundary.
    Returns None when no candidate pair qualifies.
    """
    from . import flow  # deferred to avoid a module cycle

    centroid = net.positions.mean(axis=0)
    dist2 = ((net.positions - centroid) ** 2).sum(axis=1)
    cand = sorted(candidates, key=lambda i: (dist2[i], i))
    cand = cand[:max_candidates]
    rank = {x: i for i, x in enumerate(cand)}

    def pair_key(ab):
        a, b = ab
        sep2 = ((net.positions[a] - net.positions[b]) ** 2).sum()
        return (max(rank[a], rank[b]), -sep2, a, b)

    pairs = sorted(((a, b) for i, a in enumerate(cand) for b in cand[i + 1:]),
                   key=pair_key)
    for a, b in pairs:
        if net.has_edge(a, b):
            continue
        if net.neighbor_set(a) & net.neighbor_set(b):
            continue
        users = UserPair(a, b)
        if flow.menger_cardinality(net, users) != k:
            continue
        if flow.bulk_cut_size(net, users) >= delta:
            return users
    return None


def select_deep_users(net: Network, family: LatticeFamily,
                      max_candidates: int = 48) -> UserPair:
    """A deterministic deeply-embedded user pair for a lattice family."""
    chars = characteristics(family)
    if net.n_nodes < chars.n_min:
        raise NoDeepPair(
            f"{net.n_nodes} nodes < n_min={chars.n_min} for {family}",
            chars.n_min)
    users = deep_pair_search(net, chars.k, chars.delta, net.internal_nodes(),
                             max_candidates)
    if users is None:
        raise NoDeepPair(
            f"no boundary-unaffected user pair found among the "
            f"{max_candidates} most central internal nodes of {family}",
            chars.n_min)
    return users


# -- reference areas and densities ---------------------------------------

def reference_area(family: LatticeFamily, r: int, edge_scale: float) -> float:
    """Tiling area (km^2) attributed to an r-ring lattice.

    Closed forms with a half-cell boundary margin, chosen so that
    node_count / reference_area converges to xi / edge_scale**2.
    """
    if r < 1:
        raise ValueError("rings must be at least 1")
    d2 = edge_scale ** 2
    family = LatticeFamily(family)
    if family in (LatticeFamily.HONEYCOMB, LatticeFamily.HEXAGONAL):
        return 1.5 * _SQRT3 * (3 * r * r + 1) * d2
    if family is LatticeFamily.MANHATTAN8:
        return (r + 1) ** 2 * d2 / 2.0
    return (4.0 / 3.0) * (r + 0.5) ** 2 * d2


def nodal_density(family: LatticeFamily, r: int, edge_scale: float) -> float:
    """Nodes per km^2 of the r-ring lattice at the given edge scale."""
    return node_count(family, r) / reference_area(family, r, edge_scale)
