"""Exact max-flow/min-cut engine and cut-theoretic verifiers.

Flooding routes every network edge once per protocol use, so the optimal
end-to-end rate between an end-user pair equals the minimum multi-edge cut
separating them.  The solver is a blocking-flow (shortest augmenting path)
method over real capacities; undirected edges are modelled as paired
anti-parallel arcs sharing residual capacity.  Capacities are compared with
relative tolerance 1e-9 and absolute floor 1e-15.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import capacity as cap_mod
from .netgraph import Edge, Network, UserPair, network_to_json

__all__ = [
    "REL_TOL",
    "ABS_TOL",
    "CutResult",
    "FlowProblem",
    "BulkCutInfeasible",
    "MaxFlowSolver",
    "flooding_capacity",
    "min_neighborhood_capacity",
    "isolation_cut",
    "menger_cardinality",
    "bulk_cut_cardinality",
    "bulk_min_cut",
    "bulk_cut_size",
    "brute_force_min_cut",
    "verify_threshold_theorem",
    "VerificationReport",
]

REL_TOL = 1e-9
ABS_TOL = 1e-15


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= max(ABS_TOL, REL_TOL * max(abs(x), abs(y)))


@dataclass(frozen=True)
class CutResult:
    """Minimum cut: its multi-edge capacity, cut-set and node bipartition."""

    value: float
    cut_set: tuple[Edge, ...]
    partition: tuple[frozenset[int], frozenset[int]]


@dataclass(frozen=True)
class FlowProblem:
    """A max-flow instance.

    fibre is None for explicit per-edge capacities; otherwise missing
    capacities are derived from edge lengths via the lossy-fibre bound.
    """

    net: Network
    users: UserPair
    fibre: Optional[cap_mod.FibreParams] = None

    def capacities(self) -> list[float]:
        caps = []
        for e in self.net.edges:
            if e.capacity is not None:
                caps.append(e.capacity)
            elif self.fibre is not None:
                caps.append(cap_mod.plob_capacity(e.length_km, self.fibre))
            else:
                raise ValueError(
                    f"edge ({e.u},{e.v}) has no capacity and no fibre "
                    "parameters were given")
        return caps


class BulkCutInfeasible(Exception):
    """The network bulk cannot partition the users (they share a neighbour,
    are adjacent, or there is no bulk at all)."""


class MaxFlowSolver:
    """Blocking-flow max-flow over a fixed undirected arc structure.

    The arc structure is built once; each solve supplies per-edge capacities,
    so repeated randomized assignments over one topology are cheap.
    """

    def __init__(self, n: int, edge_list: list[tuple[int, int]]):
        self.n = n
        self.m = len(edge_list)
        self.frm = [0] * (2 * self.m)
        self.to = [0] * (2 * self.m)
        self.adj: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(edge_list):
            a, b = 2 * i, 2 * i + 1
            self.frm[a], self.to[a] = u, v
            self.frm[b], self.to[b] = v, u
            self.adj[u].append(a)
            self.adj[v].append(b)

    def max_flow(self, capacities, s: int, t: int) -> tuple[float, list[float]]:
        """Returns (flow value, residual arc capacities)."""
        cap = [0.0] * (2 * self.m)
        for i, c in enumerate(capacities):
            cap[2 * i] = cap[2 * i + 1] = float(c)
        finite = [c for c in cap if math.isfinite(c)]
        eps = 1e-12 * max(1.0, max(finite, default=1.0))
        adj, to, frm = self.adj, self.to, self.frm
        total = 0.0
        while True:
            # BFS level graph over residual arcs
            level = [-1] * self.n
            level[s] = 0
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for a in adj[v]:
                    w = to[a]
                    if level[w] < 0 and cap[a] > eps:
                        level[w] = level[v] + 1
                        queue.append(w)
            if level[t] < 0:
                break
            it = [0] * self.n
            while True:
                # iterative DFS for one augmenting path in the level graph
                path: list[int] = []
                v = s
                aborted = False
                while v != t:
                    advanced = False
                    while it[v] < len(adj[v]):
                        a = adj[v][it[v]]
                        w = to[a]
                        if cap[a] > eps and level[w] == level[v] + 1:
                            path.append(a)
                            v = w
                            advanced = True
                            break
                        it[v] += 1
                    if advanced:
                        continue
                    if v == s:
                        aborted = True
                        break
                    level[v] = -2          # dead end within this phase
                    a = path.pop()
                    v = frm[a]
                    it[v] += 1
                if aborted:
                    break
                bottleneck = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= bottleneck
                    cap[a ^ 1] += bottleneck
                total += bottleneck
        return total, cap

    def source_side(self, residual, s: int) -> set[int]:
        """Nodes reachable from s in the residual graph."""
        finite = [c for c in residual if math.isfinite(c)]
        eps = 1e-12 * max(1.0, max(finite, default=1.0))
        seen = {s}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for a in self.adj[v]:
                w = self.to[a]
                if w not in seen and residual[a] > eps:
                    seen.add(w)
                    queue.append(w)
        return seen


def _solve_min_cut(net: Network, users: UserPair,
                   caps, cut_values=None) -> CutResult:
    """Max-flow then source-side min-cut extraction.

    cut_values optionally overrides the capacities used when *summing* the
    cut (e.g. true capacities while the solve used inflated user edges).
    """
    solver = MaxFlowSolver(net.n_nodes, [(e.u, e.v) for e in net.edges])
    flow, residual = solver.max_flow(caps, users.a, users.b)
    side = solver.source_side(residual, users.a)
    values = caps if cut_values is None else cut_values
    cut, total = [], 0.0
    for e, c in zip(net.edges, values):
        if (e.u in side) != (e.v in side):
            cut.append(e)
            total += c
    if cut_values is None and not _close(flow, total):
        raise AssertionError(
            f"max-flow/min-cut duality violated: flow={flow!r} cut={total!r}")
    partition = (frozenset(side), frozenset(range(net.n_nodes)) - side)
    return CutResult(total, tuple(cut), partition)


def flooding_capacity(prob: FlowProblem) -> CutResult:
    """Exact flooding capacity: the minimum multi-edge cut between the users."""
    return _solve_min_cut(prob.net, prob.users, prob.capacities())


def min_neighborhood_capacity(prob: FlowProblem) -> tuple[float, int]:
    """Multi-edge capacity of the weaker user's edge neighbourhood.

    Returns (value, user); ties resolve to user a.
    """
    caps = prob.capacities()
    by_edge = {e.key(): c for e, c in zip(prob.net.edges, caps)}
    sums = []
    for u in (prob.users.a, prob.users.b):
        sums.append(sum(by_edge[prob.net.edge_between(u, y).key()]
                        for y in prob.net.neighbors(u)))
    if sums[0] <= sums[1]:
        return sums[0], prob.users.a
    return sums[1], prob.users.b


def isolation_cut(prob: FlowProblem, user: int) -> CutResult:
    """The cut collecting exactly the given user's incident edges."""
    if user not in (prob.users.a, prob.users.b):
        raise ValueError("user must be one of the end-users")
    caps = prob.capacities()
    by_edge = {e.key(): (e, c) for e, c in zip(prob.net.edges, caps)}
    cut, total = [], 0.0
    for y in prob.net.neighbors(user):
        e, c = by_edge[prob.net.edge_between(user, y).key()]
        cut.append(e)
        total += c
    part_a = frozenset({user})
    part_b = frozenset(range(prob.net.n_nodes)) - part_a
    if user == prob.users.b:
        part_a, part_b = part_b, part_a
    return CutResult(total, tuple(sorted(cut, key=Edge.key)), (part_a, part_b))


def menger_cardinality(net: Network, users: UserPair) -> int:
    """Minimum cut-set cardinality = number of edge-disjoint user paths."""
    if net.has_edge(users.a, users.b):
        raise ValueError("end-users must not be adjacent")
    solver = MaxFlowSolver(net.n_nodes, [(e.u, e.v) for e in net.edges])
    flow, _ = solver.max_flow([1.0] * len(net.edges), users.a, users.b)
    return round(flow)


def bulk_cut_cardinality(chars) -> int:
    """Predicted minimum cardinality of cuts restricted to the network bulk."""
    return chars.delta


def _check_bulk_feasible(net: Network, users: UserPair) -> None:
    if net.n_nodes <= 2:
        raise BulkCutInfeasible("network has no bulk")
    if net.has_edge(users.a, users.b):
        raise BulkCutInfeasible("end-users are adjacent")
    if net.neighbor_set(users.a) & net.neighbor_set(users.b):
        raise BulkCutInfeasible("end-users share a neighbour: no cut "
                                "restricted to the bulk can separate them")


def _user_edge_mask(net: Network, users: UserPair) -> list[bool]:
    return [e.u in (users.a, users.b) or e.v in (users.a, users.b)
            for e in net.edges]


def bulk_min_cut(net: Network, users: UserPair,
                 fibre: Optional[cap_mod.FibreParams] = None) -> CutResult:
    """Minimum cut restricted to network-bulk edges.

    User-neighbourhood edges are assigned effectively infinite capacity so
    the optimal cut avoids them; the reported value sums true capacities.
    """
    _check_bulk_feasible(net, users)
    caps = FlowProblem(net, users, fibre).capacities()
    mask = _user_edge_mask(net, users)
    big = (sum(caps) + 1.0) * 4.0
    inflated = [big if m else c for c, m in zip(caps, mask)]
    return _solve_min_cut(net, users, inflated, cut_values=caps)


def bulk_cut_size(net: Network, users: UserPair) -> int:
    """Cardinality of the minimum bulk cut under unit capacities."""
    _check_bulk_feasible(net, users)
    mask = _user_edge_mask(net, users)
    big = 4.0 * (len(net.edges) + 1)
    caps = [big if m else 1.0 for m in mask]
    solver = MaxFlowSolver(net.n_nodes, [(e.u, e.v) for e in net.edges])
    flow, _ = solver.max_flow(caps, users.a, users.b)
    return round(flow)


def brute_force_min_cut(net: Network, users: UserPair,
                        fibre: Optional[cap_mod.FibreParams] = None) -> CutResult:
    """Exhaustive min-cut over all bipartitions (test oracle, <= 20 nodes)."""
    n = net.n_nodes
    if n > 20:
        raise ValueError("brute force oracle limited to 20 nodes")
    caps = np.asarray(FlowProblem(net, users, fibre).capacities())
    others = [x for x in range(n) if x not in (users.a, users.b)]
    bit = {x: i for i, x in enumerate(others)}
    masks = np.arange(1 << len(others), dtype=np.uint32)

    def side(x: int) -> np.ndarray:
        if x == users.a:
            return np.ones_like(masks, dtype=bool)
        if x == users.b:
            return np.zeros_like(masks, dtype=bool)
        return (masks >> bit[x]) & 1 == 1

    values = np.zeros(len(masks))
    crossing = []
    for e, c in zip(net.edges, caps):
        cross = side(e.u) != side(e.v)
        crossing.append(cross)
        values += c * cross
    best = int(values.argmin())
    cut = tuple(e for e, cross in zip(net.edges, crossing) if cross[best])
    part_a = frozenset(x for x in range(n) if bool(side(x)[best]))
    return CutResult(float(values[best]), cut,
                     (part_a, frozenset(range(n)) - part_a))


# -- threshold-theorem verification ---------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    family: str
    rings: int
    target: float
    mode: str
    trials: int
    seed: int
    users: tuple[int, int]
    failures: tuple[int, ...]
    flooding_values: tuple[float, ...] = field(repr=False)
    neighborhood_values: tuple[float, ...] = field(repr=False)
    saturation_fraction: float = 0.0
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "family": self.family,
            "rings": self.rings,
            "target": self.target,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "users": list(self.users),
            "failures": list(self.failures),
            "flooding_values": list(self.flooding_values),
            "neighborhood_values": list(self.neighborhood_values),
            "saturation_fraction": self.saturation_fraction,
            "counterexample": self.counterexample,
        }


def verify_threshold_theorem(family, rings: int, target: float, mode: str,
                             trials: int = 500, seed: int = 0,
                             fibre: Optional[cap_mod.FibreParams] = None,
                             users: Optional[UserPair] = None
                             ) -> VerificationReport:
    """Property-check the threshold guarantees with randomized edge lengths.

    mode="bounds":   all links get lengths in [d(C/k), d_max]; the flooding
                     capacity must land in [omega * Cm, Cm] where Cm is the
                     realized min-neighbourhood capacity.
    mode="equality": user-neighbourhood links are drawn from
                     [d(C/k), d_max_i] instead; the flooding capacity must
                     equal Cm.

    The lower end of each band is the length whose single-edge capacity is
    C/k: this caps the realized Cm at C, so every drawn capacity provably
    satisfies its threshold relative to Cm and the guarantees apply to every
    trial (wider bands can break the hypotheses with small probability).
    """
    from . import lattice  # deferred to avoid a module cycle

    if mode not in ("bounds", "equality"):
        raise ValueError("mode must be 'bounds' or 'equality'")
    p = fibre or cap_mod.DEFAULT_FIBRE
    fam = lattice.LatticeFamily(family)
    chars = lattice.characteristics(fam)
    net = lattice.build_lattice(fam, rings)
    if users is None:
        users = lattice.select_deep_users(net, fam)

    d_hi = cap_mod.max_link_length(target, chars.delta, p)
    d_lo = cap_mod.inverse_plob_length(target / chars.k, p)
    d_hi_user = (cap_mod.neighborhood_max_link_length(target, chars.k,
                                                      chars.delta, p)
                 if mode == "equality" else d_hi)
    user_mask = np.asarray(_user_edge_mask(net, users))
    m = len(net.edges)
    solver = MaxFlowSolver(net.n_nodes, [(e.u, e.v) for e in net.edges])
    user_edge_ids = [i for i in range(m) if user_mask[i]]
    a_ids = [i for i in user_edge_ids
             if users.a in (net.edges[i].u, net.edges[i].v)]
    b_ids = [i for i in user_edge_ids
             if users.b in (net.edges[i].u, net.edges[i].v)]

    rng = np.random.default_rng(seed)
    omega_f = float(chars.omega)
    failures: list[int] = []
    flood_vals: list[float] = []
    neigh_vals: list[float] = []
    saturated = 0
    counterexample = None
    for trial in range(trials):
        lengths = rng.uniform(d_lo, d_hi, size=m)
        if mode == "equality":
            # the band degenerates to a point when 1/(k-1) - 1/delta == 1/k
            lo_user = min(d_lo, d_hi_user)
            lengths[user_mask] = rng.uniform(lo_user, d_hi_user,
                                             size=len(user_edge_ids))
        caps = -np.log2(1.0 - 10.0 ** (-p.gamma * lengths))
        cm = min(caps[a_ids].sum(), caps[b_ids].sum())
        flow, _ = solver.max_flow(caps, users.a, users.b)
        tol = max(ABS_TOL, REL_TOL * cm)
        if abs(flow - cm) <= tol:
            saturated += 1
        if mode == "bounds":
            ok = (omega_f * cm - tol <= flow <= cm + tol)
        else:
            ok = abs(flow - cm) <= tol
        flood_vals.append(flow)
        neigh_vals.append(cm)
        if not ok:
            failures.append(trial)
            if counterexample is None:
                bad = net.with_capacities(caps.tolist())
                counterexample = {
                    "trial": trial,
                    "flooding": flow,
                    "min_neighborhood": cm,
                    "users": [users.a, users.b],
                    "graph": network_to_json(bad),
                }
    return VerificationReport(
        passed=not failures, family=fam.value, rings=rings, target=target,
        mode=mode, trials=trials, seed=seed, users=(users.a, users.b),
        failures=tuple(failures), flooding_values=tuple(flood_vals),
        neighborhood_values=tuple(neigh_vals),
        saturation_fraction=saturated / trials if trials else 0.0,
        counterexample=counterexample)
