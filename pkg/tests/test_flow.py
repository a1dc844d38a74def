"""Max-flow/min-cut engine, cut quantities and theorem verification."""

import numpy as np
import pytest

from wrqnet import flow
from wrqnet.flow import (BulkCutInfeasible, FlowProblem, MaxFlowSolver,
                         brute_force_min_cut, bulk_cut_cardinality,
                         bulk_cut_size, bulk_min_cut, flooding_capacity,
                         isolation_cut, menger_cardinality,
                         min_neighborhood_capacity, verify_threshold_theorem)
from wrqnet.lattice import (LatticeFamily, build_lattice, characteristics,
                            select_deep_users)
from wrqnet.netgraph import Network, UserPair


def capnet(pos, triples):
    return Network(pos, [(u, v, 1.0, c) for u, v, c in triples])


def test_path_flooding_is_bottleneck():
    net = capnet([(0, 0), (1, 0), (2, 0)], [(0, 1, 2.0), (1, 2, 3.0)])
    cut = flooding_capacity(FlowProblem(net, UserPair(0, 2)))
    assert cut.value == pytest.approx(2.0)
    assert [e.key() for e in cut.cut_set] == [(0, 1)]
    assert 0 in cut.partition[0] and 2 in cut.partition[1]


def test_parallel_paths_add_up():
    # diamond: two disjoint routes of capacity 1 and 2
    net = capnet([(0, 0), (1, 1), (1, -1), (2, 0)],
                 [(0, 1, 1.0), (1, 3, 1.5), (0, 2, 2.0), (2, 3, 2.0)])
    cut = flooding_capacity(FlowProblem(net, UserPair(0, 3)))
    assert cut.value == pytest.approx(3.0)
    assert {e.key() for e in cut.cut_set} == {(0, 1), (0, 2)}


def test_disconnected_users_have_zero_capacity():
    net = capnet([(0, 0), (1, 0), (5, 0), (6, 0)],
                 [(0, 1, 1.0), (2, 3, 1.0)])
    cut = flooding_capacity(FlowProblem(net, UserPair(0, 3)))
    assert cut.value == 0.0
    assert cut.cut_set == ()


def test_capacities_from_lengths_when_requested():
    from wrqnet.capacity import DEFAULT_FIBRE, plob_capacity

    net = Network([(0, 0), (50, 0)], [(0, 1, 50.0)])
    with pytest.raises(ValueError):
        FlowProblem(net, UserPair(0, 1)).capacities()
    caps = FlowProblem(net, UserPair(0, 1), DEFAULT_FIBRE).capacities()
    assert caps == [pytest.approx(plob_capacity(50.0))]


def test_min_neighborhood_capacity_ties_to_first_user():
    net = capnet([(0, 0), (1, 0), (2, 0)], [(0, 1, 2.0), (1, 2, 2.0)])
    value, user = min_neighborhood_capacity(FlowProblem(net, UserPair(0, 2)))
    assert value == pytest.approx(2.0)
    assert user == 0


def test_isolation_cut():
    net = capnet([(0, 0), (1, 1), (1, -1), (2, 0)],
                 [(0, 1, 1.0), (1, 3, 1.5), (0, 2, 2.0), (2, 3, 2.0)])
    prob = FlowProblem(net, UserPair(0, 3))
    cut = isolation_cut(prob, 0)
    assert cut.value == pytest.approx(3.0)
    assert {e.key() for e in cut.cut_set} == {(0, 1), (0, 2)}
    assert cut.partition[0] == frozenset({0})
    cut_b = isolation_cut(prob, 3)
    assert cut_b.value == pytest.approx(3.5)
    with pytest.raises(ValueError):
        isolation_cut(prob, 1)


def test_menger_on_cycle():
    n = 6
    pos = [(np.cos(t), np.sin(t)) for t in np.linspace(0, 2 * np.pi, n,
                                                       endpoint=False)]
    net = Network(pos, [(i, (i + 1) % n, 1.0) for i in range(n)])
    assert menger_cardinality(net, UserPair(0, 3)) == 2
    with pytest.raises(ValueError):
        menger_cardinality(net, UserPair(0, 1))


def test_bulk_cut_feasibility_checks():
    tri = capnet([(0, 0), (1, 0), (0.5, 1)],
                 [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    with pytest.raises(BulkCutInfeasible):
        bulk_min_cut(tri, UserPair(0, 1))       # adjacent users
    square = capnet([(0, 0), (1, 0), (1, 1), (0, 1)],
                    [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
    with pytest.raises(BulkCutInfeasible):
        bulk_min_cut(square, UserPair(0, 2))    # shared neighbours only


def test_bulk_cut_avoids_user_edges():
    # 0 - 1 - 2 - 3 - 4 path: only bulk edge between users 0 and 4 is (2,3)
    # after excluding the neighbourhoods of 0 and 4... the middle pair.
    net = capnet([(i, 0) for i in range(5)],
                 [(0, 1, 5.0), (1, 2, 0.5), (2, 3, 0.25), (3, 4, 5.0)])
    cut = bulk_min_cut(net, UserPair(0, 4))
    assert cut.value == pytest.approx(0.25)
    assert [e.key() for e in cut.cut_set] == [(2, 3)]
    assert bulk_cut_size(net, UserPair(0, 4)) == 1


def test_bulk_cut_cardinality_prediction():
    for family in LatticeFamily:
        chars = characteristics(family)
        assert bulk_cut_cardinality(chars) == chars.delta


def test_deep_lattice_cut_quantities():
    family = LatticeFamily.HONEYCOMB
    chars = characteristics(family)
    net = build_lattice(family, 3)
    users = select_deep_users(net, family)
    assert menger_cardinality(net, users) == chars.k
    assert bulk_cut_size(net, users) >= chars.delta


def test_brute_force_matches_solver_on_random_graphs():
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = int(rng.integers(4, 11))
        pos = rng.uniform(0, 10, size=(n, 2))
        edges = []
        for u in range(n - 1):   # random connected graph: spine + extras
            edges.append((u, u + 1, 1.0, float(rng.uniform(0.1, 3.0))))
        for u in range(n):
            for v in range(u + 2, n):
                if rng.random() < 0.3:
                    edges.append((u, v, 1.0, float(rng.uniform(0.1, 3.0))))
        net = Network(pos, edges)
        users = UserPair(0, n - 1)
        exact = flooding_capacity(FlowProblem(net, users))
        oracle = brute_force_min_cut(net, users)
        assert exact.value == pytest.approx(oracle.value, rel=1e-9)


def test_brute_force_size_limit():
    net = capnet([(i, 0) for i in range(21)],
                 [(i, i + 1, 1.0) for i in range(20)])
    with pytest.raises(ValueError):
        brute_force_min_cut(net, UserPair(0, 20))


def test_solver_handles_repeated_assignments():
    net = capnet([(0, 0), (1, 0), (2, 0)], [(0, 1, 1.0), (1, 2, 1.0)])
    solver = MaxFlowSolver(3, [(0, 1), (1, 2)])
    for caps, expect in ([(2.0, 3.0), 2.0], [(5.0, 1.0), 1.0],
                         [(0.0, 1.0), 0.0]):
        value, _ = solver.max_flow(list(caps), 0, 2)
        assert value == pytest.approx(expect)


@pytest.mark.parametrize("mode", ["bounds", "equality"])
def test_verify_threshold_theorem_passes(mode):
    report = verify_threshold_theorem(LatticeFamily.HONEYCOMB, 3, 1.0, mode,
                                      trials=50, seed=11)
    assert report.passed
    assert report.failures == ()
    assert report.counterexample is None
    assert len(report.flooding_values) == 50
    lo = [float(report.neighborhood_values[i]) * 2.0 / 3.0
          for i in range(50)]
    for i, f in enumerate(report.flooding_values):
        assert lo[i] - 1e-9 <= f <= report.neighborhood_values[i] + 1e-9
    if mode == "equality":
        assert report.saturation_fraction == 1.0


def test_verify_threshold_theorem_is_deterministic():
    a = verify_threshold_theorem(LatticeFamily.HONEYCOMB, 3, 1.0, "bounds",
                                 trials=10, seed=3)
    b = verify_threshold_theorem(LatticeFamily.HONEYCOMB, 3, 1.0, "bounds",
                                 trials=10, seed=3)
    assert a.flooding_values == b.flooding_values
    assert a.users == b.users


def test_verify_threshold_theorem_report_json():
    report = verify_threshold_theorem(LatticeFamily.HONEYCOMB, 3, 0.5,
                                      "equality", trials=5, seed=0)
    doc = report.to_json()
    assert doc["passed"] is True
    assert doc["mode"] == "equality"
    assert doc["trials"] == 5
    assert len(doc["neighborhood_values"]) == 5


def test_verify_threshold_theorem_rejects_bad_mode():
    with pytest.raises(ValueError):
        verify_threshold_theorem(LatticeFamily.HONEYCOMB, 3, 1.0, "exact")
