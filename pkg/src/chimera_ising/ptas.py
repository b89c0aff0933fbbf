"""(1 - eps) approximation of the ground state by strip decomposition.

The scheme cuts the lighter chain family (layer 0 after transposing if
needed) into T = ceil(2/eps) residue classes by grid column.  Every chain
edge touches two columns, so it lands in exactly two classes and the
lightest class k* weighs at most (2/T) of the family total.  Removing one
class splits the graph into strips of width at most 8T which the strip DP
solves exactly.  All T classes are tried, each stitched assignment is
scored on the true Hamiltonian, and the best one is returned (or the
chain-alignment witness, if that happens to beat them all).

Guarantee sketch for the class k*: the strip optimum is within A^k* of
the true optimum, evaluating it on the full Hamiltonian costs at most
A^k* again, and 2*A^k* <= (4/T)*A_cut <= (2/T)*(A0+A1) <= -(2/T)*H*, so
the returned energy is at most (1 - 2/T)*H*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import path_witness
from .hamiltonian import (ChimeraInstance, evaluate, magnitude_sums,
                          transpose_instance)
from .graph import transpose_perm
from .strip_dp import (WIDTH_BUDGET, WidthBudgetError, extract_strips,
                       scatter_spins, solve_strip)


def _class_count(epsilon: float) -> int:
    """Smallest T >= 2 with T >= 2/epsilon, absorbing float representation
    error for fractions like 2/3 (whose stored value is a hair below the
    real number, pushing 2/eps a hair above an integer)."""
    return max(2, math.ceil(2.0 / epsilon - 1e-9))


@dataclass(frozen=True)
class PtasParams:
    epsilon: float
    t: int

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon {self.epsilon} outside (0, 1]")
        if self.t < 2:
            raise ValueError(f"class count t={self.t} must be >= 2")

    @classmethod
    def from_epsilon(cls, epsilon: float) -> "PtasParams":
        if not 0.0 < epsilon < 1.0:
            raise ValueError(f"epsilon {epsilon} outside (0, 1)")
        return cls(float(epsilon), _class_count(epsilon))

    @classmethod
    def from_t(cls, t: int) -> "PtasParams":
        """Pin the class count directly; epsilon is the implied 2/t."""
        if int(t) < 2:
            raise ValueError(f"class count t={t} must be >= 2")
        return cls(2.0 / int(t), int(t))

    @property
    def guarantee(self) -> float:
        """The proven approximation factor 1 - 2/t."""
        return 1.0 - 2.0 / self.t


@dataclass(frozen=True)
class Decomposition:
    """One cut class and the strips that removing it leaves behind."""

    cut_layer: int
    k: int
    removed_edges: np.ndarray
    removed_weight: float
    strips: list


def _chain_columns(topology, layer):
    """(positions, lower columns) of the chain family; an edge spans
    columns (col, col+1), 1-based along its chain axis."""
    pos = topology.class_positions[layer]
    cell = topology.edges_u[pos] >> 3
    col = (cell // topology.r if layer == 0 else cell % topology.r) + 1
    return pos, col


def column_edge_group(inst: ChimeraInstance, layer: int, i: int) -> np.ndarray:
    """Positions of the layer's chain edges incident on grid column i."""
    if layer not in (0, 1):
        raise ValueError("layer must be 0 or 1")
    if not 1 <= i <= inst.r:
        raise ValueError(f"column {i} outside 1..{inst.r}")
    pos, col = _chain_columns(inst.topology, layer)
    return pos[(col == i) | (col + 1 == i)]

def class_edges(topology, layer: int, t_classes: int, k: int) -> np.ndarray:
    """Positions of the residue class: chain edges touching any column
    congruent to k mod t_classes."""
    pos, col = _chain_columns(topology, layer)
    return pos[(col % t_classes == k) | ((col + 1) % t_classes == k)]


def class_weights(inst: ChimeraInstance, t_classes: int, layer: int) -> np.ndarray:
    absc = np.abs(inst.couplings)
    return np.array([
        float(np.sum(absc[class_edges(inst.topology, layer, t_classes, k)]))
        for k in range(t_classes)
    ])


def choose_cut(inst: ChimeraInstance) -> int:
    """Cut the chain family with the smaller magnitude sum; ties pick 0."""
    sums = magnitude_sums(inst)
    return 0 if sums.a0 <= sums.a1 else 1


def choose_kstar(inst: ChimeraInstance, t_classes: int, cut_layer: int):
    """(k*, its weight): the lightest residue class, ties to smaller k.

    The weight never exceeds (2/t) of the cut family's magnitude sum,
    because every chain edge is counted in exactly two classes.
    """
    if t_classes < 2:
        raise ValueError("need at least 2 classes")
    weights = class_weights(inst, t_classes, cut_layer)
    k = int(np.argmin(weights))
    return k, float(weights[k])


def decompose(inst: ChimeraInstance, t_classes: int, k: int,
              cut_layer: int = 0) -> Decomposition:
    removed = class_edges(inst.topology, cut_layer, t_classes, k)
    weight = float(np.sum(np.abs(inst.couplings[removed])))
    strips = extract_strips(inst, removed, cut_layer)
    return Decomposition(cut_layer, k, removed, weight, strips)


@dataclass(frozen=True)
class PtasResult:
    assignment: np.ndarray
    energy: float
    h_sub_energy: float
    params: PtasParams
    cut_layer: int
    k_star: int
    k_chosen: int
    candidate_energy: float
    removed_weight: float
    class_weights: tuple
    strip_count: int
    max_width: int
    used_witness: bool


def ptas_solve(inst: ChimeraInstance, params: PtasParams) -> PtasResult:
    """Solve every residue class exactly and keep the best assignment.

    The result's energy is the true Hamiltonian value of the returned
    assignment, at most (1 - 2/t) times the optimum and never above
    -(A0 + A1) thanks to the chain-alignment witness in the pool.
    """
    t_classes = params.t
    cut = choose_cut(inst)
    if cut == 1:
        work = transpose_instance(inst)
        perm = transpose_perm(inst.r)
    else:
        work, perm = inst, None

    weights = class_weights(work, t_classes, 0)
    k_star = int(np.argmin(weights))
    decomps = [decompose(work, t_classes, k, 0) for k in range(t_classes)]
    widest = max(s.max_width for d in decomps for s in d.strips)
    if widest > WIDTH_BUDGET:
        raise WidthBudgetError(
            f"decomposition at t={t_classes} produces strips of width "
            f"{widest} > {WIDTH_BUDGET}; increase epsilon or shrink r")

    best = None
    for dec in decomps:
        sols = [solve_strip(s) for s in dec.strips]
        h_sub = float(sum(s.energy for s in sols))
        spins = scatter_spins(work.n, dec.strips, sols)
        if perm is not None:
            # spins are indexed by transposed ids; pull back to original
            spins = spins[perm]
        energy = evaluate(inst, spins).total
        if best is None or energy < best[0]:
            best = (energy, spins, h_sub, dec)

    energy, spins, h_sub, dec = best
    wit = path_witness(inst)
    wit_energy = evaluate(inst, wit).total
    used_witness = wit_energy < energy
    return PtasResult(
        assignment=wit if used_witness else spins,
        energy=wit_energy if used_witness else energy,
        h_sub_energy=h_sub,
        params=params,
        cut_layer=cut,
        k_star=k_star,
        k_chosen=dec.k,
        candidate_energy=energy,
        removed_weight=dec.removed_weight,
        class_weights=tuple(float(w) for w in weights),
        strip_count=len(dec.strips),
        max_width=max(s.max_width for s in dec.strips),
        used_witness=used_witness,
    )


@dataclass(frozen=True)
class RuntimeEstimate:
    n: int
    epsilon: float
    t: int
    width_bound: int
    bound_ops: float
    log2_bound_ops: float
    dp_cells: float


def predicted_runtime(n: int, epsilon: float) -> RuntimeEstimate:
    """Closed-form operation counts for reporting, no wall-clock claim.

    ``bound_ops`` is the scheme's n * 2^(32/epsilon) operation bound
    (inf when it overflows a double; the log2 field is always finite).
    ``dp_cells`` estimates the boundary DP's table cells across all t
    classes at the worst-case width bound b = 8t: t * n * b * 2^b.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not epsilon > 0.0:
        raise ValueError("epsilon must be positive")
    t = _class_count(epsilon)
    b = 8 * t
    log2_ops = math.log2(n) + 32.0 / epsilon
    try:
        ops = n * 2.0 ** (32.0 / epsilon)
    except OverflowError:
        ops = math.inf
    try:
        dp = float(t) * n * b * 2.0 ** b
    except OverflowError:
        dp = math.inf
    return RuntimeEstimate(n, float(epsilon), t, b, ops, log2_ops, dp)
