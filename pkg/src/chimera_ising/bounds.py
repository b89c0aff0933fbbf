"""Constructive energy bounds and optimality certificates.

Every bound here is achieved by an explicit spin assignment, so each one
doubles as a starting point and as a certificate that the optimum lies at
or below it.  Three witnesses are built:

* path witness: walk every chain in both in-layer families and pick each
  next spin against its coupling sign, so both chain sums hit their floor
  -A0 and -A1 at once (the two families share no vertices in a common
  chain, and the cross and field terms are repaired afterwards by a layer
  flip and a global flip, which leave the chain sums untouched).
* K4,4 witness: solve each 8-vertex cell block exactly by enumeration.
  Each block's minimum is at most -C * (sum |c| over the block), where
  C = ln(1+sqrt(2))/pi; that constant comes from the rounding argument
  behind the half-sum vector construction below.
* field witness: set every spin against its field sign.

The three witness energies satisfy, in order,

    E_path  <= -(A0 + A1)
    E_k44   <=   A0 + A1 - C*A01
    E_field <=   A0 + A1 + A01 - B

and the minimum of the three satisfies all of them at once.  A fixed
convex combination of the right-hand sides (weights proportional to
2(C+1), 2, C) collapses to -(C/(3C+4)) * (A0+A1+A01+B), so the best
witness always certifies the optimum at or below that level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import coord_to_id
from .hamiltonian import (ChimeraInstance, MagnitudeSums, evaluate, flip_all,
                          flip_layer, magnitude_sums)

#: C = ln(1+sqrt(2))/pi, the guaranteed per-block gain of the K4,4 witness.
C_LOWER = math.log(1.0 + math.sqrt(2.0)) / math.pi

#: Rounding constant K = pi / (2 ln(1+sqrt(2))) = 1/(2C); unit-vector
#: bilinear optima exceed sign optima by at most this factor.
K_UPPER = math.pi / (2.0 * math.log(1.0 + math.sqrt(2.0)))

#: The combined certificate covers a (C/(3C+4)) fraction of the total
#: coefficient magnitude; its reciprocal is below 17.26.
CERT_FACTOR = (3.0 * C_LOWER + 4.0) / C_LOWER


@dataclass(frozen=True)
class GrothendieckConstants:
    c_lower: float
    k_upper: float
    factor: float


KRIVINE = GrothendieckConstants(C_LOWER, K_UPPER, CERT_FACTOR)


@dataclass(frozen=True)
class BoundReport:
    sums: MagnitudeSums
    trivial_bound: float
    certificate_bound: float
    witness_energies: dict
    best_witness: np.ndarray
    best_witness_name: str
    best_energy: float


def path_witness(inst: ChimeraInstance) -> np.ndarray:
    """Assignment with chain terms at -A0 and -A1, cross term and field
    term nonpositive.  Hence its energy is at most -(A0 + A1)."""
    t = inst.topology
    r = t.r
    spins = np.ones(t.n, dtype=np.int8)
    for chain_layer in (0, 1):
        for a in range(1, r + 1):
            for k in range(1, 5):
                if chain_layer == 0:
                    prev = coord_to_id((1, a, k, 0), r)
                else:
                    prev = coord_to_id((a, 1, k, 1), r)
                for step in range(1, r):
                    if chain_layer == 0:
                        cur = coord_to_id((step + 1, a, k, 0), r)
                    else:
                        cur = coord_to_id((a, step + 1, k, 1), r)
                    c = inst.couplings[t.edge_index(prev, cur)]
                    # align the edge: S_next = -sign(c) * S_prev, sign(0) = +1
                    spins[cur] = spins[prev] if c < 0 else -spins[prev]
                    prev = cur
    if evaluate(inst, spins).m01 > 0:
        spins = flip_layer(spins, 0)
    if evaluate(inst, spins).d > 0:
        spins = flip_all(spins)
    return spins


# all 128 sign patterns of a cell block with the first row spin fixed to
# +1 (safe: the block has no field terms, so global flips tie)
_PAT = np.arange(128, dtype=np.int64)
_ROW = np.column_stack([np.ones(128, dtype=np.int8)] +
                       [np.where((_PAT >> b) & 1 == 1, 1, -1).astype(np.int8)
                        for b in range(3)])
_COL = np.column_stack([np.where((_PAT >> b) & 1 == 1, 1, -1).astype(np.int8)
                        for b in range(3, 7)])


def k44_exhaustive_min(cell: np.ndarray):
    """Exact minimum of sum_ij c[i,j] u_i v_j over sign vectors u, v.

    Returns (value, spins) with spins the 8-vector (u_1..u_4, v_1..v_4).
    Ties resolve to the smallest enumeration pattern, which prefers -1 on
    later rows and all columns; u_1 is fixed to +1 by symmetry.
    """
    c = np.asarray(cell, dtype=np.float64)
    if c.shape != (4, 4):
        raise ValueError(f"cell must be 4x4, got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("cell values must be finite")
    vals = ((_ROW.astype(np.float64) @ c) * _COL).sum(axis=1)
    best = int(np.argmin(vals))
    spins = np.concatenate([_ROW[best], _COL[best]])
    return float(vals[best]), spins


def half_sum_unit_vectors(cell: np.ndarray):
    """Unit-vector pair family certifying the bilinear optimum >= sum|c|/2.

    Rows get the standard basis, x_i = e_i; columns get the half-sum of
    signed rows, y_j = (1/2) * sum_i sign(c_ij) x_i, which has norm 1.
    Then <x_i, y_j> = sign(c_ij)/2, and the bilinear value is exactly
    half the total magnitude.  Returns (xs, ys, value) with vectors in
    columns of 4x4 arrays.
    """
    c = np.asarray(cell, dtype=np.float64)
    if c.shape != (4, 4):
        raise ValueError(f"cell must be 4x4, got {c.shape}")
    sg = np.where(c >= 0.0, 1.0, -1.0)
    xs = np.eye(4)
    ys = 0.5 * sg
    value = float(np.sum(c * ys))
    return xs, ys, value


def k44_witness(inst: ChimeraInstance) -> np.ndarray:
    """Assignment minimizing every cell block independently.

    Block minima sum to at most -C_LOWER * A01 in total; a final global
    flip keeps the field term nonpositive without touching block values.
    """
    t = inst.topology
    r = t.r
    spins = np.ones(t.n, dtype=np.int8)
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            base = ((i - 1) * r + (j - 1)) * 8
            cell = np.empty((4, 4))
            for k0 in range(4):
                for k1 in range(4):
                    u, v = base + 2 * k0, base + 2 * k1 + 1
                    cell[k0, k1] = inst.couplings[t.edge_index(u, v)]
            _, s8 = k44_exhaustive_min(cell)
            spins[base:base + 8:2] = s8[:4]
            spins[base + 1:base + 8:2] = s8[4:]
    if evaluate(inst, spins).d > 0:
        spins = flip_all(spins)
    return spins


def field_witness(inst: ChimeraInstance) -> np.ndarray:
    """Every spin against its field; zero fields take +1."""
    return np.where(inst.fields > 0.0, -1, 1).astype(np.int8)


_WITNESS_ORDER = ("path", "k44", "field")


def certificate(inst: ChimeraInstance) -> BoundReport:
    """Build all witnesses and report the bounds they certify.

    The best witness energy is guaranteed to be at most the certificate
    bound -(C/(3C+4)) * (A0+A1+A01+B) as well as the trivial bound
    -(A0+A1) (via the path witness), so the report's numbers are honest
    statements about the optimum, not heuristics.
    """
    sums = magnitude_sums(inst)
    builders = {"path": path_witness, "k44": k44_witness, "field": field_witness}
    spins = {name: builders[name](inst) for name in _WITNESS_ORDER}
    energies = {name: evaluate(inst, s).total for name, s in spins.items()}
    best = _WITNESS_ORDER[int(np.argmin([energies[n] for n in _WITNESS_ORDER]))]
    total = sums.a0 + sums.a1 + sums.a01 + sums.b
    return BoundReport(
        sums=sums,
        trivial_bound=-(sums.a0 + sums.a1),
        certificate_bound=-(C_LOWER / (3.0 * C_LOWER + 4.0)) * total,
        witness_energies=energies,
        best_witness=spins[best],
        best_witness_name=best,
        best_energy=energies[best],
    )
