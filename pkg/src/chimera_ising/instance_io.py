"""Instance and assignment files, plus seeded instance generation.

Instance format (JSON, tag "chimera-ising/v1")::

    {"format": "chimera-ising/v1",
     "r": 2,
     "couplings": [{"u": [i,j,k,l], "v": [i,j,k,l], "c": -1.25}, ...],
     "fields":    [{"u": [i,j,k,l], "d": 0.5}, ...]}

Endpoints are coordinates, not ids, so files are auditable by eye.
Entries may appear in any order; omitted edges and vertices default to
coefficient 0; duplicate entries are rejected.  Values are serialized by
Python's shortest round-trip float repr, so save/load is bit-exact.

Assignment format (tag "spin-assignment/v1")::

    {"format": "spin-assignment/v1", "r": 2, "spins": [1, -1, ...]}

with spins listed in vertex id order, id = (((i-1)r + (j-1))*4 + (k-1))*2 + l.

Generation draws couplings in canonical edge order, then fields in vertex
id order, from one splitmix64 stream seeded by the user's seed, making
instances reproducible across platforms.  The "zero" distribution
consumes no draws.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .graph import build_chimera, coord_to_id, id_to_coord
from .hamiltonian import ChimeraInstance, check_spins
from .rng import SplitMix64

INSTANCE_TAG = "chimera-ising/v1"
ASSIGNMENT_TAG = "spin-assignment/v1"


class InstanceFormatError(ValueError):
    pass


def _coord4(entry, key, r):
    raw = entry.get(key)
    if (not isinstance(raw, list) or len(raw) != 4
            or not all(isinstance(x, int) for x in raw)):
        raise InstanceFormatError(f"'{key}' must be a 4-int coordinate, got {raw!r}")
    try:
        return coord_to_id(tuple(raw), r)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc


def _finite(entry, key):
    val = entry.get(key)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise InstanceFormatError(f"'{key}' must be a number, got {val!r}")
    val = float(val)
    if not np.isfinite(val):
        raise InstanceFormatError(f"'{key}' must be finite")
    return val


def load_instance(text: str) -> ChimeraInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != INSTANCE_TAG:
        raise InstanceFormatError(f"expected format tag {INSTANCE_TAG!r}")
    r = doc.get("r")
    if not isinstance(r, int) or r < 1:
        raise InstanceFormatError(f"'r' must be a positive integer, got {r!r}")
    topo = build_chimera(r)
    couplings = np.zeros(topo.num_edges)
    fields = np.zeros(topo.n)
    seen_edges = set()
    for entry in doc.get("couplings", []):
        u = _coord4(entry, "u", r)
        v = _coord4(entry, "v", r)
        try:
            pos = topo.edge_index(u, v)
        except KeyError:
            raise InstanceFormatError(
                f"({entry['u']}, {entry['v']}) is not an edge of the order-{r} graph")
        if pos in seen_edges:
            raise InstanceFormatError(f"duplicate coupling for edge {entry['u']}-{entry['v']}")
        seen_edges.add(pos)
        couplings[pos] = _finite(entry, "c")
    seen_fields = set()
    for entry in doc.get("fields", []):
        u = _coord4(entry, "u", r)
        if u in seen_fields:
            raise InstanceFormatError(f"duplicate field for vertex {entry['u']}")
        seen_fields.add(u)
        fields[u] = _finite(entry, "d")
    return ChimeraInstance(topo, couplings, fields)


def save_instance(inst: ChimeraInstance) -> str:
    """Serialize nonzero coefficients in canonical order, full precision."""
    t = inst.topology
    r = t.r

    def coord_list(vid):
        c = id_to_coord(int(vid), r)
        return [c.i, c.j, c.k, c.l]

    couplings = [
        {"u": coord_list(t.edges_u[p]), "v": coord_list(t.edges_v[p]),
         "c": float(inst.couplings[p])}
        for p in range(t.num_edges) if inst.couplings[p] != 0.0
    ]
    fields = [
        {"u": coord_list(u), "d": float(inst.fields[u])}
        for u in range(t.n) if inst.fields[u] != 0.0
    ]
    doc = {"format": INSTANCE_TAG, "r": r,
           "couplings": couplings, "fields": fields}
    return json.dumps(doc, indent=1)


def save_assignment(spins, r: int) -> str:
    s = check_spins(spins, 8 * r * r)
    doc = {"format": ASSIGNMENT_TAG, "r": r,
           "spins": [int(x) for x in s]}
    return json.dumps(doc, indent=1)


def load_assignment(text: str):
    """Returns (spins, r)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != ASSIGNMENT_TAG:
        raise InstanceFormatError(f"expected format tag {ASSIGNMENT_TAG!r}")
    r = doc.get("r")
    if not isinstance(r, int) or r < 1:
        raise InstanceFormatError(f"'r' must be a positive integer, got {r!r}")
    spins = doc.get("spins")
    if (not isinstance(spins, list) or len(spins) != 8 * r * r
            or not all(isinstance(x, int) and x in (-1, 1) for x in spins)):
        raise InstanceFormatError(f"'spins' must list 8*r^2 values in {{-1, 1}}")
    return np.array(spins, dtype=np.int8), r


@dataclass(frozen=True)
class Distribution:
    """One of uniform-pm1, gaussian(mean, sd), uniform(lo, hi), zero."""

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind in ("uniform-pm1", "zero"):
            if self.params:
                raise ValueError(f"{self.kind} takes no parameters")
        elif self.kind == "gaussian":
            if len(self.params) != 2 or self.params[1] < 0:
                raise ValueError("gaussian needs (mean, sd >= 0)")
        elif self.kind == "uniform":
            if len(self.params) != 2 or not self.params[0] < self.params[1]:
                raise ValueError("uniform needs (lo, hi) with lo < hi")
        else:
            raise ValueError(f"unknown distribution {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "Distribution":
        text = text.strip()
        m = re.fullmatch(r"([a-z0-9-]+)(?:\(([^)]*)\))?", text)
        if not m:
            raise ValueError(f"cannot parse distribution {text!r}")
        kind, args = m.group(1), m.group(2)
        params = ()
        if args is not None and args.strip():
            params = tuple(float(x) for x in args.split(","))
        return cls(kind, params)

    def draw(self, rng: SplitMix64) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "uniform-pm1":
            return rng.next_sign()
        if self.kind == "uniform":
            return rng.next_uniform(*self.params)
        return rng.next_gaussian(*self.params)


@dataclass(frozen=True)
class GeneratorSpec:
    couplings: Distribution
    fields: Distribution
    seed: int


def generate(r: int, spec: GeneratorSpec) -> ChimeraInstance:
    """Fill every coefficient from one seeded stream: all couplings in
    canonical edge order first, then all fields in vertex id order."""
    topo = build_chimera(r)
    rng = SplitMix64(spec.seed)
    couplings = np.array([spec.couplings.draw(rng) for _ in range(topo.num_edges)])
    fields = np.array([spec.fields.draw(rng) for _ in range(topo.n)])
    return ChimeraInstance(topo, couplings, fields)
