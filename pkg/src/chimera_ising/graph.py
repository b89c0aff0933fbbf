"""Chimera graph construction and indexing.

The Chimera graph of order ``r`` is an ``r x r`` grid of unit cells.  Each
cell holds eight vertices split into two layers of four.  Within a cell the
layers are fully connected to each other (a K4,4 block).  Layer-0 vertices
chain to the same position in the cell one step along the first grid axis,
layer-1 vertices chain along the second axis.  So the whole graph has
``n = 8 r^2`` vertices and three edge families:

* ``LAYER0``: (i, j, k, 0) -- (i+1, j, k, 0), a set of 4r disjoint paths,
  4r(r-1) edges total
* ``LAYER1``: (i, j, k, 1) -- (i, j+1, k, 1), same count by symmetry
* ``CROSS``: (i, j, k0, 0) -- (i, j, k1, 1) for all 16 pairs per cell,
  16 r^2 edges total

Vertices are addressed either by coordinate ``(i, j, k, l)`` with
``1 <= i, j <= r``, ``1 <= k <= 4``, ``l in {0, 1}``, or by a 0-based
linear id::

    id = (((i - 1) * r + (j - 1)) * 4 + (k - 1)) * 2 + l

Ids order vertices by cell (row-major), then spot ``k``, then layer, so
spin vectors can be plain arrays.  Edges are stored with the smaller id
first, sorted lexicographically; that order is the canonical edge order
used for coupling vectors and serialization everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np


class EdgeClass(IntEnum):
    LAYER0 = 0
    LAYER1 = 1
    CROSS = 2


@dataclass(frozen=True)
class ChimeraCoord:
    """1-based cell coordinates plus spot index and layer."""

    i: int
    j: int
    k: int
    l: int

    def validate(self, r: int) -> None:
        if not (1 <= self.i <= r and 1 <= self.j <= r):
            raise ValueError(f"cell ({self.i},{self.j}) outside 1..{r}")
        if not 1 <= self.k <= 4:
            raise ValueError(f"spot index k={self.k} outside 1..4")
        if self.l not in (0, 1):
            raise ValueError(f"layer l={self.l} not in {{0,1}}")


def coord_to_id(coord, r: int) -> int:
    """Linear id of a coordinate (accepts ChimeraCoord or a 4-tuple)."""
    if not isinstance(coord, ChimeraCoord):
        coord = ChimeraCoord(*coord)
    coord.validate(r)
    return (((coord.i - 1) * r + (coord.j - 1)) * 4 + (coord.k - 1)) * 2 + coord.l


def id_to_coord(vid: int, r: int) -> ChimeraCoord:
    if not 0 <= vid < 8 * r * r:
        raise ValueError(f"vertex id {vid} outside 0..{8 * r * r - 1}")
    cell, rest = divmod(vid, 8)
    i0, j0 = divmod(cell, r)
    return ChimeraCoord(i0 + 1, j0 + 1, rest // 2 + 1, rest & 1)


def vertex_layer(vid) -> int:
    """Layer bit of a vertex id; works elementwise on arrays too."""
    return vid & 1


@dataclass(frozen=True)
class ChimeraTopology:
    """Immutable edge structure of one Chimera graph.

    ``edges_u``/``edges_v`` hold endpoint ids with ``edges_u < edges_v``
    rowwise, rows sorted lexicographically.  ``edge_class`` tags each row
    with an EdgeClass value.  ``class_positions[c]`` lists the row indices
    of class ``c`` in ascending order.
    """

    r: int
    n: int
    edges_u: np.ndarray
    edges_v: np.ndarray
    edge_class: np.ndarray
    class_positions: tuple = field(repr=False)
    _keys: np.ndarray = field(repr=False)
    _index: dict = field(repr=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges_u)

    def edge_index(self, u: int, v: int) -> int:
        """Row index of the edge {u, v}; raises KeyError if absent."""
        if u > v:
            u, v = v, u
        return self._index[(int(u), int(v))]

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (int(u), int(v)) in self._index

    def edge_positions(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Vectorized edge_index over arrays with lo < hi elementwise."""
        keys = lo.astype(np.int64) * self.n + hi
        pos = np.searchsorted(self._keys, keys)
        if np.any(pos >= len(self._keys)) or np.any(self._keys[pos] != keys):
            raise KeyError("some (lo, hi) pair is not an edge")
        return pos


def build_chimera(r: int) -> ChimeraTopology:
    """Construct the order-r Chimera topology in canonical edge order."""
    if not isinstance(r, int) or r < 1:
        raise ValueError(f"order r must be a positive integer, got {r!r}")
    n = 8 * r * r

    def vid(i, j, k, l):
        return (((i - 1) * r + (j - 1)) * 4 + (k - 1)) * 2 + l

    us, vs, cls = [], [], []
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            for k0 in range(1, 5):
                a = vid(i, j, k0, 0)
                # cross edges inside the cell
                for k1 in range(1, 5):
                    b = vid(i, j, k1, 1)
                    us.append(min(a, b))
                    vs.append(max(a, b))
                    cls.append(EdgeClass.CROSS)
                # chain edges to the next cell in each direction
                if i < r:
                    us.append(a)
                    vs.append(vid(i + 1, j, k0, 0))
                    cls.append(EdgeClass.LAYER0)
                if j < r:
                    us.append(vid(i, j, k0, 1))
                    vs.append(vid(i, j + 1, k0, 1))
                    cls.append(EdgeClass.LAYER1)

    eu = np.asarray(us, dtype=np.int64)
    ev = np.asarray(vs, dtype=np.int64)
    ec = np.asarray(cls, dtype=np.uint8)
    order = np.lexsort((ev, eu))
    eu, ev, ec = eu[order], ev[order], ec[order]

    keys = eu * n + ev
    index = {(int(a), int(b)): p for p, (a, b) in enumerate(zip(eu, ev))}
    positions = tuple(np.flatnonzero(ec == c) for c in (0, 1, 2))
    for arr in (eu, ev, ec, keys):
        arr.setflags(write=False)
    return ChimeraTopology(r, n, eu, ev, ec, positions, keys, index)


def transpose_perm(r: int) -> np.ndarray:
    """Vertex relabeling (old id -> new id) for the grid transpose.

    The map (i, j, k, l) -> (j, i, k, 1-l) carries LAYER0 edges onto
    LAYER1 edges and back and fixes the CROSS family setwise.  It is an
    involution: perm[perm] is the identity.
    """
    ids = np.arange(8 * r * r, dtype=np.int64)
    cell, rest = ids >> 3, ids & 7
    i0, j0 = cell // r, cell % r
    return (j0 * r + i0) * 8 + (rest ^ 1)


def transpose(topology: ChimeraTopology):
    """Return (topology, perm) for the grid-transpose symmetry.

    The relabeling is an automorphism, so the topology object itself is
    unchanged; only the permutation distinguishes the transposed frame.
    """
    return topology, transpose_perm(topology.r)
