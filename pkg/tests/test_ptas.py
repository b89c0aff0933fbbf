import math

import numpy as np
import pytest

from chimera_ising.graph import EdgeClass, build_chimera, id_to_coord
from chimera_ising.hamiltonian import (
    ChimeraInstance,
    evaluate,
    magnitude_sums,
    transpose_instance,
)
from chimera_ising.oracle import SmallProblem, brute_force
from chimera_ising.ptas import (
    Decomposition,
    PtasParams,
    choose_cut,
    choose_kstar,
    class_edges,
    class_weights,
    column_edge_group,
    decompose,
    predicted_runtime,
    ptas_solve,
)
from chimera_ising.strip_dp import WidthBudgetError, extract_strips, solve_strip


def rand_instance(rng, r, dyadic=False):
    g = build_chimera(r)
    if dyadic:
        c = rng.integers(-64, 65, size=g.num_edges).astype(np.float64) / 32.0
        d = rng.integers(-64, 65, size=g.n).astype(np.float64) / 32.0
    else:
        c = rng.standard_normal(g.num_edges)
        d = rng.standard_normal(g.n)
    return ChimeraInstance(g, c, d)


def whole_graph_optimum(inst):
    """Exact optimum via the DP on the uncut instance (no edges removed)."""
    strips = extract_strips(inst, [])
    assert len(strips) == 1
    return solve_strip(strips[0]).energy


def test_params_from_epsilon():
    assert PtasParams.from_epsilon(0.5).t == 4
    assert PtasParams.from_epsilon(2.0 / 3.0).t == 3
    assert PtasParams.from_epsilon(0.9).t == 3
    assert PtasParams.from_epsilon(0.4).t == 5
    assert PtasParams.from_epsilon(0.999).t == 3
    for bad in (0.0, -0.5, 1.0, 1.5):
        with pytest.raises(ValueError):
            PtasParams.from_epsilon(bad)


def test_params_from_t():
    p = PtasParams.from_t(2)
    assert p.epsilon == 1.0
    assert p.guarantee == 0.0
    assert PtasParams.from_t(3).guarantee == pytest.approx(1.0 / 3.0)
    assert PtasParams.from_t(10).epsilon == 0.2
    with pytest.raises(ValueError):
        PtasParams.from_t(1)
    # direct construction admits the epsilon = 1 endpoint
    assert PtasParams(1.0, 2).t == 2
    with pytest.raises(ValueError):
        PtasParams(1.2, 3)
    with pytest.raises(ValueError):
        PtasParams(0.5, 1)


def test_column_edge_group_counts():
    rng = np.random.default_rng(71)
    inst = rand_instance(rng, 3)
    # interior columns touch chain edges on both sides: 8 per cell row
    interior = column_edge_group(inst, 0, 2)
    assert len(interior) == 8 * 3
    for edge_pos in interior:
        u = int(inst.topology.edges_u[edge_pos])
        c = id_to_coord(u, 3)
        assert c.i in (1, 2)  # lower endpoint sits in column 1 or 2
    boundary = column_edge_group(inst, 0, 1)
    assert len(boundary) == 4 * 3
    assert len(column_edge_group(inst, 0, 3)) == 4 * 3
    # restricted to one cell row the counts are 8 interior, 4 boundary
    g = inst.topology
    row1 = [p for p in interior if id_to_coord(int(g.edges_u[p]), 3).j == 1]
    assert len(row1) == 8


def test_column_edge_group_r1_empty():
    inst = ChimeraInstance.zeros(1)
    assert len(column_edge_group(inst, 0, 1)) == 0
    assert len(column_edge_group(inst, 1, 1)) == 0


def test_column_edge_group_errors():
    inst = ChimeraInstance.zeros(2)
    with pytest.raises(ValueError):
        column_edge_group(inst, 2, 1)
    with pytest.raises(ValueError):
        column_edge_group(inst, 0, 0)
    with pytest.raises(ValueError):
        column_edge_group(inst, 0, 3)


def test_every_chain_edge_in_exactly_two_classes():
    for r in (2, 3, 5):
        g = build_chimera(r)
        for t in (2, 3, 4, 7):
            counts = np.zeros(g.num_edges, dtype=np.int64)
            for k in range(t):
                counts[class_edges(g, 0, t, k)] += 1
            chain = np.zeros(g.num_edges, dtype=bool)
            chain[g.class_positions[EdgeClass.LAYER0]] = True
            assert np.all(counts[chain] == 2)
            assert np.all(counts[~chain] == 0)


def test_class_weight_partition_identity():
    rng = np.random.default_rng(72)
    for _ in range(50):
        r = int(rng.integers(2, 7))
        inst = rand_instance(rng, r, dyadic=True)
        sums = magnitude_sums(inst)
        for t in (2, 3, 4):
            w = class_weights(inst, t, 0)
            assert math.fsum(w) == 2.0 * sums.a0
    # gaussian coefficients land within float noise
    inst = rand_instance(rng, 4)
    sums = magnitude_sums(inst)
    w = class_weights(inst, 3, 0)
    assert math.fsum(w) == pytest.approx(2.0 * sums.a0, rel=1e-12)


def test_choose_cut():
    g = build_chimera(2)
    c = np.zeros(g.num_edges)
    c[g.class_positions[EdgeClass.LAYER0]] = 0.5
    c[g.class_positions[EdgeClass.LAYER1]] = 1.0
    inst = ChimeraInstance(g, c, np.zeros(g.n))
    assert choose_cut(inst) == 0
    c2 = np.zeros(g.num_edges)
    c2[g.class_positions[EdgeClass.LAYER0]] = -1.0  # now layer 0 heavier
    c2[g.class_positions[EdgeClass.LAYER1]] = 0.5
    assert choose_cut(ChimeraInstance(g, c2, np.zeros(g.n))) == 1
    # exact tie keeps layer 0
    c421 = np.zeros(g.num_edges)
    c421[g.class_positions[EdgeClass.LAYER0]] = 1.0
    c421[g.class_positions[EdgeClass.LAYER1]] = -1.0
    assert choose_cut(ChimeraInstance(g, c421, np.zeros(g.n))) == 0


def test_choose_kstar_bound():
    rng = np.random.default_rng(73)
    for _ in range(100):
        r = int(rng.integers(2, 7))
        inst = rand_instance(rng, r, dyadic=True)
        sums = magnitude_sums(inst)
        for t in (2, 3, 4):
            k, wk = choose_kstar(inst, t, 0)
            assert 0 <= k < t
            assert wk == class_weights(inst, t, 0)[k]
            assert wk <= (2.0 * sums.a0) / t


def test_choose_kstar_zero_couplings():
    inst = ChimeraInstance.zeros(3)
    assert choose_kstar(inst, 3, 0) == (0, 0.0)


def test_choose_kstar_empty_class():
    # r=2 under t=3: no column is congruent to 0, class 0 is free to cut
    rng = np.random.default_rng(74)
    inst = rand_instance(rng, 2)
    k, wk = choose_kstar(inst, 3, 0)
    assert (k, wk) == (0, 0.0)


def test_decompose_fields():
    rng = np.random.default_rng(75)
    inst = rand_instance(rng, 4, dyadic=True)
    dec = decompose(inst, 2, 0)
    assert isinstance(dec, Decomposition)
    assert dec.cut_layer == 0 and dec.k == 0
    assert dec.removed_weight == float(
        np.sum(np.abs(inst.couplings[dec.removed_edges])))
    assert [s.max_width for s in dec.strips] == [8, 8, 8, 8]


def test_ptas_exact_on_single_cell():
    rng = np.random.default_rng(76)
    for eps in (1.0, 0.9, 0.51, 0.34):
        inst = rand_instance(rng, 1, dyadic=True)
        res = ptas_solve(inst, PtasParams(eps, max(2, math.ceil(2 / eps - 1e-9))))
        opt, _ = brute_force(SmallProblem.from_instance(inst))
        assert res.energy == opt
        assert evaluate(inst, res.assignment).total == res.energy


def test_ptas_exact_when_a_class_is_empty():
    # r=2 with three classes: the empty class makes one pass exact
    rng = np.random.default_rng(77)
    for _ in range(10):
        inst = rand_instance(rng, 2, dyadic=True)
        res = ptas_solve(inst, PtasParams.from_t(3))
        assert res.energy == whole_graph_optimum(inst)


def test_ptas_guarantee_vs_known_optimum():
    rng = np.random.default_rng(78)
    for _ in range(10):
        inst = rand_instance(rng, 2, dyadic=True)
        opt = whole_graph_optimum(inst)
        for t in (2, 3):
            res = ptas_solve(inst, PtasParams.from_t(t))
            assert res.energy >= opt - 1e-12
            assert res.energy <= (1.0 - 2.0 / t) * opt


def test_ptas_unconditional_bounds():
    rng = np.random.default_rng(79)
    for _ in range(15):
        r = int(rng.integers(1, 5))
        inst = rand_instance(rng, r, dyadic=True)
        sums = magnitude_sums(inst)
        for t in (2, 3):
            res = ptas_solve(inst, PtasParams.from_t(t))
            assert res.energy <= -(sums.a0 + sums.a1)
            assert res.energy <= -(1.0 - 2.0 / t) * (sums.a0 + sums.a1)


def test_ptas_result_consistency():
    rng = np.random.default_rng(80)
    inst = rand_instance(rng, 3, dyadic=True)
    res = ptas_solve(inst, PtasParams.from_t(3))
    assert evaluate(inst, res.assignment).total == res.energy
    assert res.energy <= res.candidate_energy
    # dropping the cut edges moves the energy by at most their weight
    assert abs(res.candidate_energy - res.h_sub_energy) <= res.removed_weight + 1e-9
    assert len(res.class_weights) == 3
    assert res.k_star == int(np.argmin(res.class_weights))
    assert res.strip_count >= 1
    assert res.max_width <= 8 * (res.params.t - 1)


def test_ptas_choosing_beyond_kstar_never_hurts():
    # the scheme tries every class; the winner is at least as good as k*
    rng = np.random.default_rng(81)
    for _ in range(5):
        inst = rand_instance(rng, 3, dyadic=True)
        res = ptas_solve(inst, PtasParams.from_t(2))
        dec = decompose(inst, 2, res.k_star, 0) if res.cut_layer == 0 else None
        assert res.candidate_energy <= res.h_sub_energy + res.removed_weight + 1e-9
        if dec is not None and res.k_chosen == res.k_star:
            assert res.removed_weight == dec.removed_weight


def test_ptas_transposed_cut():
    # layer 1 lighter: solver must transpose, solve, and pull back
    rng = np.random.default_rng(82)
    g = build_chimera(3)
    c = rng.integers(-64, 65, size=g.num_edges).astype(np.float64) / 32.0
    c[g.class_positions[EdgeClass.LAYER0]] *= 8.0  # layer 0 heavy
    inst = ChimeraInstance(g, c, rng.standard_normal(g.n))
    assert choose_cut(inst) == 1
    res = ptas_solve(inst, PtasParams.from_t(2))
    assert res.cut_layer == 1
    assert evaluate(inst, res.assignment).total == res.energy
    sums = magnitude_sums(inst)
    assert res.energy <= -(sums.a0 + sums.a1) + 1e-9


def test_ptas_energy_matches_transposed_run():
    rng = np.random.default_rng(83)
    inst = rand_instance(rng, 2, dyadic=True)
    res = ptas_solve(inst, PtasParams.from_t(3))
    res_t = ptas_solve(transpose_instance(inst), PtasParams.from_t(3))
    # T=3 leaves an empty class at r=2, so both runs are exact
    assert res.energy == res_t.energy


def test_ptas_width_budget():
    inst = ChimeraInstance.zeros(5)
    with pytest.raises(WidthBudgetError):
        ptas_solve(inst, PtasParams.from_t(5))
    # t=2 keeps strips at a single column
    res = ptas_solve(inst, PtasParams.from_t(2))
    assert res.max_width == 8


def test_ptas_witness_floor():
    # couplings only on chains, strongly ferromagnetic: witness matches DP
    g = build_chimera(2)
    c = np.zeros(g.num_edges)
    for cls in (EdgeClass.LAYER0, EdgeClass.LAYER1):
        c[g.class_positions[cls]] = -1.0
    inst = ChimeraInstance(g, c, np.zeros(g.n))
    res = ptas_solve(inst, PtasParams.from_t(2))
    sums = magnitude_sums(inst)
    assert res.energy == -(sums.a0 + sums.a1)


def test_predicted_runtime_examples():
    est = predicted_runtime(8, 1.0)
    assert est.t == 2
    assert est.width_bound == 16
    assert est.bound_ops == 8.0 * 2.0 ** 32
    assert est.log2_bound_ops == pytest.approx(3.0 + 32.0)
    assert est.dp_cells == 2.0 * 8 * 16 * 2.0 ** 16

    # linear in n
    a = predicted_runtime(100, 0.5)
    b = predicted_runtime(200, 0.5)
    assert b.bound_ops == 2.0 * a.bound_ops

    # decreasing epsilon only makes the bound larger
    xs = [predicted_runtime(64, e).bound_ops for e in (1.0, 0.8, 0.5, 0.4)]
    assert all(x < y for x, y in zip(xs, xs[1:]))


def test_predicted_runtime_overflow():
    est = predicted_runtime(1000, 1e-3)
    assert est.bound_ops == math.inf
    assert est.dp_cells == math.inf
    assert math.isfinite(est.log2_bound_ops)
    assert est.log2_bound_ops == pytest.approx(math.log2(1000) + 32000.0)


def test_predicted_runtime_errors():
    with pytest.raises(ValueError):
        predicted_runtime(0, 0.5)
    with pytest.raises(ValueError):
        predicted_runtime(8, 0.0)
    with pytest.raises(ValueError):
        predicted_runtime(8, -1.0)
