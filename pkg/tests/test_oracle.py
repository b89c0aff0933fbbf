import numpy as np
import pytest

from chimera_ising.graph import build_chimera
from chimera_ising.hamiltonian import ChimeraInstance, evaluate
from chimera_ising.oracle import ORACLE_MAX_VERTICES, SmallProblem, brute_force


def direct_minimum(problem):
    """Independent reference: enumerate every assignment with numpy."""
    n = problem.n
    masks = np.arange(1 << n, dtype=np.int64)
    # column u holds the spin of vertex u under each mask, bit set = +1
    spins = np.where((masks[:, None] >> np.arange(n)) & 1 == 1, 1, -1)
    e = spins @ problem.fields
    for u, v, w in zip(problem.edges_u, problem.edges_v, problem.weights):
        e = e + w * spins[:, u] * spins[:, v]
    return float(e.min())


def test_single_vertex_field():
    p = SmallProblem.from_edges(1, [], fields=[-3.0])
    energy, spins = brute_force(p)
    assert energy == -3.0
    assert spins.tolist() == [1]


def test_two_vertex_coupling_tie_rule():
    p = SmallProblem.from_edges(2, [(0, 1, 2.0)])
    energy, spins = brute_force(p)
    assert energy == -2.0
    # both (-1,+1) and (+1,-1) reach -2; ties keep -1 at the lowest
    # differing vertex, so vertex 0 stays down
    assert spins.tolist() == [-1, 1]


def test_zero_problem_prefers_all_minus():
    p = SmallProblem.from_edges(3, [])
    energy, spins = brute_force(p)
    assert energy == 0.0
    assert spins.tolist() == [-1, -1, -1]


def test_matches_direct_enumeration():
    rng = np.random.default_rng(21)
    for _ in range(25):
        n = int(rng.integers(1, 13))
        m = int(rng.integers(0, n * (n - 1) // 2 + 1))
        pairs = set()
        while len(pairs) < m:
            u, v = rng.integers(0, n, size=2)
            if u != v:
                pairs.add((min(int(u), int(v)), max(int(u), int(v))))
        w = rng.integers(-64, 65, size=len(pairs)).astype(np.float64) / 32.0
        d = rng.integers(-64, 65, size=n).astype(np.float64) / 32.0
        p = SmallProblem.from_edges(
            n, [(u, v, float(x)) for (u, v), x in zip(sorted(pairs), w)],
            fields=d)
        energy, spins = brute_force(p)
        ref_e = direct_minimum(p)
        assert energy == ref_e
        # returned assignment really achieves the reported energy
        check = float(spins @ p.fields)
        for u, v, x in zip(p.edges_u, p.edges_v, p.weights):
            check += x * spins[u] * spins[v]
        assert check == energy


def test_chimera_cell_against_enumeration():
    rng = np.random.default_rng(22)
    for _ in range(10):
        g = build_chimera(1)
        c = rng.integers(-64, 65, size=g.num_edges).astype(np.float64) / 32.0
        d = rng.integers(-64, 65, size=g.n).astype(np.float64) / 32.0
        inst = ChimeraInstance(g, c, d)
        p = SmallProblem.from_instance(inst)
        energy, spins = brute_force(p)
        ref_e = direct_minimum(p)
        assert energy == ref_e
        assert evaluate(inst, spins).total == energy


def test_minimum_is_never_positive():
    # the all-assignment mean is zero, so the minimum cannot exceed it
    rng = np.random.default_rng(23)
    for _ in range(30):
        n = int(rng.integers(2, 15))
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.3]
        p = SmallProblem.from_edges(
            n, [(u, v, float(rng.standard_normal())) for u, v in pairs],
            fields=rng.standard_normal(n))
        energy, _ = brute_force(p)
        assert energy <= 0.0


def test_deterministic():
    rng = np.random.default_rng(24)
    p = SmallProblem.from_edges(
        6, [(0, 1, 1.0), (2, 3, -0.5), (4, 5, 0.25), (0, 5, -2.0)],
        fields=rng.standard_normal(6))
    e1, s1 = brute_force(p)
    e2, s2 = brute_force(p)
    assert e1 == e2
    assert np.array_equal(s1, s2)


def test_size_budget():
    assert ORACLE_MAX_VERTICES == 25
    with pytest.raises(ValueError):
        SmallProblem.from_edges(26, [])
    # 25 is allowed at construction time
    SmallProblem.from_edges(25, [])


def test_input_validation():
    with pytest.raises(ValueError):
        SmallProblem.from_edges(0, [])
    with pytest.raises(ValueError):
        SmallProblem.from_edges(3, [(0, 0, 1.0)])
    with pytest.raises(ValueError):
        SmallProblem.from_edges(3, [(0, 3, 1.0)])
    with pytest.raises(ValueError):
        SmallProblem.from_edges(3, [(-1, 2, 1.0)])
    with pytest.raises(ValueError):
        SmallProblem.from_edges(3, [(0, 1, np.nan)])
    with pytest.raises(ValueError):
        SmallProblem.from_edges(2, [(0, 1, 1.0)], fields=[0.0, np.inf])


def test_instance_too_large_rejected():
    inst = ChimeraInstance.zeros(2)  # 32 vertices
    with pytest.raises(ValueError):
        SmallProblem.from_instance(inst)
