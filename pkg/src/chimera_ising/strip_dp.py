"""Exact minimization over strip graphs by dynamic programming.

A strip graph arranges its vertices in m consecutive levels so that every
edge is either inside one level or between two adjacent levels.  Chimera
subgraphs obtained by cutting one chain family fall in this class, with
grid columns as levels, but nothing here assumes Chimera structure.

Two solvers:

* ``solve_strip_reference`` enumerates whole level states and does a
  table-to-table transition per level pair, O(m * 4^b) for width b.  It is
  the clarity-first implementation, capped at width 16.
* ``solve_strip`` sweeps vertices one at a time in level order, keeping a
  table over the live boundary only.  A vertex joins the boundary when
  added and is minimized out right after its last neighbor arrives, so on
  matching-like inter-level edges the table never exceeds 2^(b+1) states.
  Capped at width 24 with a hard runtime cap of 25 boundary vertices.

State encoding in both solvers: bit p of a state integer set means the
p-th live/local vertex takes spin +1.  All ties prefer the smaller state,
i.e. spin -1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

REFERENCE_WIDTH_BUDGET = 16
WIDTH_BUDGET = 24
WINDOW_BUDGET = 25

# cap on transition-block cells held at once by the reference solver
_CHUNK_CELLS = 1 << 22


class WidthBudgetError(ValueError):
    """Strip is too wide for the requested solver."""


@dataclass(frozen=True)
class StripGraph:
    """Leveled graph in flat level-major layout.

    ``vertex_ids`` carries arbitrary global labels (original Chimera ids
    when the strip came out of a decomposition); all edge arrays use flat
    local indices.  Intra edges join vertices on one level, inter edges a
    vertex on level t to one on level t+1, stored smaller index first.
    """

    widths: np.ndarray
    offsets: np.ndarray
    vertex_ids: np.ndarray
    fields: np.ndarray
    intra_u: np.ndarray
    intra_v: np.ndarray
    intra_w: np.ndarray
    inter_u: np.ndarray
    inter_v: np.ndarray
    inter_w: np.ndarray

    @property
    def m(self) -> int:
        return len(self.widths)

    @property
    def n_vertices(self) -> int:
        return int(self.offsets[-1])

    @property
    def max_width(self) -> int:
        return int(self.widths.max())

    def level_of(self, flat):
        return np.searchsorted(self.offsets, flat, side="right") - 1


@dataclass(frozen=True)
class StripSolution:
    energy: float
    spins: np.ndarray
    stats: dict | None = None


def make_strip(widths, edges, fields, vertex_ids=None) -> StripGraph:
    """Validate and pack a strip graph.

    ``edges`` is an iterable of (u, v, weight) in flat indices; each edge
    is classified as intra or inter by the levels of its endpoints and
    rejected if the levels are further than one apart.
    """
    w = np.asarray(widths, dtype=np.int64)
    if w.ndim != 1 or len(w) == 0 or np.any(w < 1):
        raise ValueError("widths must be a nonempty sequence of positive ints")
    offsets = np.concatenate(([0], np.cumsum(w)))
    n = int(offsets[-1])
    d = np.ascontiguousarray(fields, dtype=np.float64)
    if d.shape != (n,):
        raise ValueError(f"fields has shape {d.shape}, expected ({n},)")
    if not np.all(np.isfinite(d)):
        raise ValueError("fields must be finite")
    if vertex_ids is None:
        vids = np.arange(n, dtype=np.int64)
    else:
        vids = np.ascontiguousarray(vertex_ids, dtype=np.int64)
        if vids.shape != (n,) or len(np.unique(vids)) != n:
            raise ValueError("vertex_ids must be n unique labels")

    intra, inter = [], []
    seen = set()
    for u, v, c in edges:
        u, v, c = int(u), int(v), float(c)
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ValueError(f"bad edge endpoints ({u}, {v})")
        if not np.isfinite(c):
            raise ValueError("edge weights must be finite")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            raise ValueError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        lu = int(np.searchsorted(offsets, u, side="right")) - 1
        lv = int(np.searchsorted(offsets, v, side="right")) - 1
        if lu == lv:
            intra.append((u, v, c))
        elif lv - lu == 1:
            inter.append((u, v, c))
        else:
            raise ValueError(f"edge ({u}, {v}) spans non-adjacent levels {lu}, {lv}")

    def cols(rows, dtype):
        return np.array(rows, dtype=dtype)

    iu, iv, iw = (cols([e[i] for e in intra], t)
                  for i, t in ((0, np.int64), (1, np.int64), (2, np.float64)))
    ju, jv, jw = (cols([e[i] for e in inter], t)
                  for i, t in ((0, np.int64), (1, np.int64), (2, np.float64)))
    return StripGraph(w, offsets, vids, d, iu, iv, iw, ju, jv, jw)


def strip_energy(g: StripGraph, spins) -> float:
    """Direct energy of a flat spin assignment on the strip."""
    s = np.asarray(spins, dtype=np.int8)
    if s.shape != (g.n_vertices,) or not np.all(np.abs(s) == 1):
        raise ValueError("spins must be +-1 and match the strip size")
    f = s.astype(np.float64)
    e = float(np.dot(g.intra_w, f[g.intra_u] * f[g.intra_v]))
    e += float(np.dot(g.inter_w, f[g.inter_u] * f[g.inter_v]))
    e += float(np.dot(g.fields, f))
    return e


def _spin_matrix(w: int) -> np.ndarray:
    """(2^w, w) matrix of level states; bit p of the row index = spin p."""
    states = np.arange(1 << w, dtype=np.int64)
    bits = (states[:, None] >> np.arange(w)) & 1
    return (2.0 * bits - 1.0)


def solve_strip_reference(g: StripGraph) -> StripSolution:
    """Level-table DP: exact but O(m * 4^b), for cross-checking."""
    if g.max_width > REFERENCE_WIDTH_BUDGET:
        raise WidthBudgetError(
            f"width {g.max_width} exceeds reference budget {REFERENCE_WIDTH_BUDGET}")
    m, off = g.m, g.offsets
    widths = [int(x) for x in g.widths]

    intra_by = [[] for _ in range(m)]
    for e, lu in enumerate(g.level_of(g.intra_u)):
        intra_by[lu].append(e)
    inter_by = [[] for _ in range(m)]
    for e, lu in enumerate(g.level_of(g.inter_u)):
        inter_by[lu].append(e)

    smat = {w: _spin_matrix(w) for w in set(widths)}
    cost = []
    for t in range(m):
        S = smat[widths[t]]
        c = S @ g.fields[off[t]:off[t + 1]]
        for e in intra_by[t]:
            a, b = g.intra_u[e] - off[t], g.intra_v[e] - off[t]
            c = c + g.intra_w[e] * (S[:, a] * S[:, b])
        cost.append(c)

    best = cost[0]
    parents = []
    for t in range(m - 1):
        W = np.zeros((widths[t], widths[t + 1]))
        for e in inter_by[t]:
            W[g.inter_u[e] - off[t], g.inter_v[e] - off[t + 1]] += g.inter_w[e]
        P = smat[widths[t]] @ W
        nxt = 1 << widths[t + 1]
        parent = np.empty(nxt, dtype=np.int64)
        incoming = np.empty(nxt)
        chunk = max(1, _CHUNK_CELLS // len(best))
        for s0 in range(0, nxt, chunk):
            block = smat[widths[t + 1]][s0:s0 + chunk]
            vals = P @ block.T
            vals += best[:, None]
            am = np.argmin(vals, axis=0)
            parent[s0:s0 + chunk] = am
            incoming[s0:s0 + chunk] = vals[am, np.arange(vals.shape[1])]
        best = incoming + cost[t + 1]
        parents.append(parent)

    state = int(np.argmin(best))
    energy = float(best[state])
    states = [state]
    for parent in reversed(parents):
        state = int(parent[state])
        states.append(state)
    states.reverse()
    spins = np.concatenate([
        ((states[t] >> np.arange(widths[t])) & 1) * 2 - 1 for t in range(m)
    ]).astype(np.int8)
    return StripSolution(energy, spins, None)


def solve_strip(g: StripGraph) -> StripSolution:
    """Boundary DP: exact, O over vertices of the live-window table size.

    Returns a solution whose ``stats`` record the table work done:
    ``cell_writes`` counts every cell written into a boundary table,
    ``level_table_states`` sums each level's peak table size, and
    ``peak_window`` is the largest live-vertex count reached.
    """
    if g.max_width > WIDTH_BUDGET:
        raise WidthBudgetError(f"width {g.max_width} exceeds budget {WIDTH_BUDGET}")
    n = g.n_vertices

    back = [[] for _ in range(n)]
    last_use = np.arange(n, dtype=np.int64)
    for eu, ev, ew in ((g.intra_u, g.intra_v, g.intra_w),
                       (g.inter_u, g.inter_v, g.inter_w)):
        for a, b, c in zip(eu, ev, ew):
            a, b = int(a), int(b)
            back[b].append((a, float(c)))
            if b > last_use[a]:
                last_use[a] = b
    retire_at = [[] for _ in range(n)]
    for u in range(n):
        retire_at[int(last_use[u])].append(u)

    levels = g.level_of(np.arange(n))
    pos = np.full(n, -1, dtype=np.int64)
    live: list[int] = []
    table = np.zeros(1)
    events = []
    cell_writes = 0
    peak_window = 0
    level_peak = np.ones(g.m, dtype=np.int64)

    for v in range(n):
        k = len(live)
        if k + 1 > WINDOW_BUDGET:
            raise WidthBudgetError(
                f"boundary window {k + 1} exceeds cap {WINDOW_BUDGET}")
        # vec[state] = energy delta if v takes +1 against that boundary state
        vec = np.full(1 << k, g.fields[v])
        for u, c in back[v]:
            view = vec.reshape(-1, 2, 1 << pos[u])
            view[:, 0, :] -= c
            view[:, 1, :] += c
        table = np.concatenate((table - vec, table + vec))
        pos[v] = k
        live.append(v)
        cell_writes += table.size
        peak_window = max(peak_window, k + 1)
        lv = levels[v]
        if table.size > level_peak[lv]:
            level_peak[lv] = table.size
        for u in retire_at[v]:
            p = int(pos[u])
            t3 = table.reshape(-1, 2, 1 << p)
            lo_half = t3[:, 0, :]
            hi_half = t3[:, 1, :]
            take_hi = hi_half < lo_half
            table = np.where(take_hi, hi_half, lo_half).reshape(-1)
            cell_writes += table.size
            live.pop(p)
            for q in live[p:]:
                pos[q] -= 1
            pos[u] = -1
            events.append((u, tuple(live),
                           np.packbits(take_hi.reshape(-1), bitorder="little")))

    if live or table.size != 1:
        raise AssertionError("boundary not fully retired")
    energy = float(table[0])

    spins = np.zeros(n, dtype=np.int8)
    for u, members, packed in reversed(events):
        idx = 0
        for b, q in enumerate(members):
            if spins[q] > 0:
                idx |= 1 << b
        bit = (packed[idx >> 3] >> (idx & 7)) & 1
        spins[u] = 1 if bit else -1

    stats = {
        "peak_window": peak_window,
        "cell_writes": int(cell_writes),
        "level_table_states": int(level_peak.sum()),
        "levels": g.m,
        "vertices": n,
    }
    return StripSolution(energy, spins, stats)


def extract_strips(inst, removed, cut_layer: int = 0) -> list[StripGraph]:
    """Split an instance into strip graphs after deleting chain edges.

    ``removed`` lists canonical edge positions; they must all belong to
    the chain family ``cut_layer``.  Each connected component of what is
    left becomes one StripGraph, leveled along the grid axis that the cut
    chains ran along's perpendicular: cutting layer-0 chains (which run
    over i) leaves components spanning contiguous i-ranges, leveled by j.
    Strips come back ordered by their smallest vertex id; level order
    inside a strip is ascending id.
    """
    if cut_layer not in (0, 1):
        raise ValueError("cut_layer must be 0 or 1")
    t = inst.topology
    if not isinstance(removed, np.ndarray):
        removed = list(removed)
    removed = np.unique(np.asarray(removed, dtype=np.int64))
    if removed.size:
        if removed.min() < 0 or removed.max() >= t.num_edges:
            raise ValueError("removed edge position out of range")
        if np.any(t.edge_class[removed] != cut_layer):
            raise ValueError("removed edges must all belong to the cut chain family")

    keep = np.ones(t.num_edges, dtype=bool)
    keep[removed] = False
    kp = np.flatnonzero(keep)
    adj = coo_matrix((np.ones(kp.size), (t.edges_u[kp], t.edges_v[kp])),
                     shape=(t.n, t.n))
    ncomp, labels = connected_components(adj, directed=False)

    first = np.full(ncomp, t.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(t.n))
    comp_order = np.argsort(first)

    ids = np.arange(t.n)
    cell = ids >> 3
    # levels run along the axis the cut chains did not: j for a layer-0 cut
    axis = (cell % t.r) if cut_layer == 0 else (cell // t.r)
    elab = labels[t.edges_u[kp]]

    strips = []
    for ci in comp_order:
        verts = np.flatnonzero(labels == ci)
        keys = axis[verts]
        kmin = int(keys.min())
        nlev = int(keys.max()) - kmin + 1
        if not np.array_equal(np.unique(keys), np.arange(kmin, kmin + nlev)):
            raise AssertionError("component levels are not contiguous")
        order = np.argsort(keys - kmin, kind="stable")
        flat_ids = verts[order]
        widths = np.bincount(keys - kmin, minlength=nlev)
        inv = np.full(t.n, -1, dtype=np.int64)
        inv[flat_ids] = np.arange(len(flat_ids))
        epos = kp[elab == ci]
        edge_list = [(int(a), int(b), float(c)) for a, b, c in
                     zip(inv[t.edges_u[epos]], inv[t.edges_v[epos]],
                         inst.couplings[epos])]
        strips.append(make_strip(widths, edge_list, inst.fields[flat_ids],
                                 vertex_ids=flat_ids))
    return strips


def scatter_spins(n: int, strips, solutions) -> np.ndarray:
    """Merge per-strip solutions into one global assignment of length n."""
    out = np.zeros(n, dtype=np.int8)
    for g, sol in zip(strips, solutions):
        out[g.vertex_ids] = sol.spins
    if not np.all(np.abs(out) == 1):
        raise ValueError("strips do not cover all vertices")
    return out
