"""Exhaustive ground-state search for small spin systems.

Works on arbitrary graphs (not just Chimera) so strip subproblems and whole
small instances can both be checked against it.  The search walks all 2^n
assignments in Gray-code order, updating the energy with the O(deg) delta
of the single flipped spin, so the scan costs O(2^n * avg_deg) instead of
O(2^n * m).  Capped at n <= 25.

Tie rule: among assignments with minimal energy the lexicographically
smallest spin vector wins, comparing -1 < +1 from vertex 0 upward.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

ORACLE_MAX_VERTICES = 25


@dataclass(frozen=True)
class SmallProblem:
    """A dense-enumerable Ising problem: n vertices, explicit edge list."""

    n: int
    edges_u: np.ndarray
    edges_v: np.ndarray
    weights: np.ndarray
    fields: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= ORACLE_MAX_VERTICES:
            raise ValueError(f"n={self.n} outside 1..{ORACLE_MAX_VERTICES}")
        eu = np.ascontiguousarray(self.edges_u, dtype=np.int64)
        ev = np.ascontiguousarray(self.edges_v, dtype=np.int64)
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        d = np.ascontiguousarray(self.fields, dtype=np.float64)
        if not (eu.shape == ev.shape == w.shape and eu.ndim == 1):
            raise ValueError("edge arrays must be 1-d and equal length")
        if d.shape != (self.n,):
            raise ValueError(f"fields has shape {d.shape}, expected ({self.n},)")
        if len(eu) and (eu.min() < 0 or ev.min() < 0
                        or eu.max() >= self.n or ev.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        if np.any(eu == ev):
            raise ValueError("self-loops are not allowed")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(d))):
            raise ValueError("weights and fields must be finite")
        for name, arr in (("edges_u", eu), ("edges_v", ev),
                          ("weights", w), ("fields", d)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_edges(cls, n, edges, fields=None):
        """edges: iterable of (u, v, weight)."""
        eu, ev, w = [], [], []
        for u, v, c in edges:
            eu.append(u)
            ev.append(v)
            w.append(c)
        d = np.zeros(n) if fields is None else np.asarray(fields, dtype=np.float64)
        return cls(n, np.array(eu, dtype=np.int64), np.array(ev, dtype=np.int64),
                   np.array(w, dtype=np.float64), d)

    @classmethod
    def from_instance(cls, inst):
        t = inst.topology
        return cls(t.n, t.edges_u, t.edges_v, inst.couplings, inst.fields)


def _csr(p: SmallProblem):
    """Symmetric CSR adjacency: each edge appears from both endpoints."""
    src = np.concatenate([p.edges_u, p.edges_v])
    dst = np.concatenate([p.edges_v, p.edges_u])
    w = np.concatenate([p.weights, p.weights])
    order = np.argsort(src, kind="stable")
    src, dst, w = src[order], dst[order], w[order]
    indptr = np.zeros(p.n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst, w


@njit(cache=True)
def _gray_scan(n, indptr, neighbors, weights, fields, e0):
    # bit u of a mask set <=> spin u is +1, so mask order is lex order
    spins = np.full(n, -1, dtype=np.int8)
    e = e0
    best_e = e0
    mask = np.int64(0)
    best_mask = np.int64(0)
    total = np.int64(1) << n
    t = np.int64(1)
    while t < total:
        u = 0
        tt = t
        while tt & 1 == 0:
            tt >>= 1
            u += 1
        local = fields[u]
        for idx in range(indptr[u], indptr[u + 1]):
            local += weights[idx] * spins[neighbors[idx]]
        e += -2.0 * spins[u] * local
        spins[u] = -spins[u]
        mask ^= np.int64(1) << u
        if e < best_e:
            best_e = e
            best_mask = mask
        elif e == best_e:
            diff = mask ^ best_mask
            if diff != 0 and (mask & (diff & -diff)) == 0:
                # masks first differ at diff's low bit; the candidate has
                # spin -1 there, hence is lexicographically smaller
                best_mask = mask
        t += 1
    return best_mask, best_e


def brute_force(problem: SmallProblem):
    """Exact minimum energy and its tie-broken optimal assignment.

    Returns (energy, spins).  The energy is recomputed from the winning
    assignment by direct summation, so it carries no drift from the 2^n
    incremental updates.
    """
    indptr, neighbors, weights = _csr(problem)
    e0 = float(np.sum(problem.weights) - np.sum(problem.fields))
    best_mask, _ = _gray_scan(problem.n, indptr, neighbors, weights,
                              problem.fields, e0)
    bits = (int(best_mask) >> np.arange(problem.n)) & 1
    spins = np.where(bits == 1, 1, -1).astype(np.int8)
    su = spins[problem.edges_u].astype(np.float64)
    sv = spins[problem.edges_v].astype(np.float64)
    energy = float(np.dot(problem.weights, su * sv)
                   + np.dot(problem.fields, spins.astype(np.float64)))
    return energy, spins
