"""Graph metrics on constructed maps and the corner pseudo-metric.

Alongside plain BFS distances this module carries the corner-label upper
bound: for contour positions i and j,

    upper(i, j) = V_i + V_j - 2 min(V over [i^j .. ivj]) + 2

which dominates the graph distance between the corners' vertices (each side
descends to the interval minimum by successor chords). verify_lemma31 checks
that inequality exhaustively or by sampling; discrete_dstar tightens the
bound by closing it under shortest paths over a grid of contour positions,
staying sandwiched between the graph distance and the one-hop bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import shortest_path

from . import _kernels
from .bdg import PlanarMap, as_planar
from .mobile_core import ContourPair, scaling_constants
from .sampler import RngStream


@dataclass(frozen=True)
class DistanceField:
    """Single-source graph distances; dist[v] for every vertex id v."""

    source: int
    dist: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dist", np.ascontiguousarray(self.dist, dtype=np.int64))
        self.dist.setflags(write=False)


@dataclass(frozen=True)
class GridSample:
    """Scaled grid restriction of a map metric.

    indices[k] = floor(pn * k / m) for k in 0..m; dist_matrix[j, k] is the
    rescaled graph distance c_V * n^(-1/4) * d(vertex at indices[j], vertex
    at indices[k]).
    """

    m: int
    indices: np.ndarray
    dist_matrix: np.ndarray


def bfs(m, source: int) -> DistanceField:
    """Exact graph distances from one vertex, O(V + E)."""
    planar = as_planar(m)
    if not 0 <= int(source) < planar.n_vertices:
        raise ValueError(f"vertex id {source} outside 0..{planar.n_vertices - 1}")
    indptr, indices = planar.adjacency
    dist = _kernels.bfs_distances(indptr, indices, int(source), planar.n_vertices)
    return DistanceField(source=int(source), dist=dist)


def ball_count(m, center: int, r: int) -> int:
    """Number of vertices within graph distance r of center."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    field = bfs(m, center)
    return int((field.dist <= r).sum())


class RangeMinTable:
    """Sparse table for O(1) range-minimum queries over a fixed sequence.

    Keeps the input dtype (integer label tracks stay integer; real-valued
    sequences work too).
    """

    def __init__(self, values):
        v = np.ascontiguousarray(values)
        if v.dtype.kind not in "if":
            v = v.astype(np.int64)
        if v.ndim != 1 or v.shape[0] == 0:
            raise ValueError("need a nonempty 1-d sequence")
        levels = max(1, int(np.log2(v.shape[0])) + 1)
        table = np.empty((levels, v.shape[0]), dtype=v.dtype)
        table[0] = v
        span = 1
        for k in range(1, levels):
            nxt = table[k - 1].copy()
            nxt[: v.shape[0] - span] = np.minimum(
                table[k - 1][: v.shape[0] - span], table[k - 1][span:]
            )
            table[k] = nxt
            span *= 2
        self._table = table
        self._values = v
        # log2 lookup for interval lengths 1..len(v)
        self._log = np.zeros(v.shape[0] + 1, dtype=np.int64)
        for i in range(2, v.shape[0] + 1):
            self._log[i] = self._log[i // 2] + 1

    def __len__(self) -> int:
        return self._values.shape[0]

    def query(self, i: int, j: int) -> int:
        """min(values[i..j]) inclusive; i and j may come in either order."""
        return int(self.query_many(np.asarray([i]), np.asarray([j]))[0])

    def query_many(self, i, j) -> np.ndarray:
        lo = np.minimum(i, j).astype(np.int64)
        hi = np.maximum(i, j).astype(np.int64)
        if lo.min(initial=0) < 0 or hi.max(initial=-1) >= len(self):
            raise ValueError("range endpoint outside the sequence")
        k = self._log[hi - lo + 1]
        left = self._table[k, lo]
        right = self._table[k, hi + 1 - (1 << k)]
        return np.minimum(left, right)


def d_circ(V, i: int, j: int) -> int:
    """Corner-label distance bound V_i + V_j - 2 min(V[i..j]) + 2."""
    v = np.ascontiguousarray(V, dtype=np.int64)
    for idx in (i, j):
        if not 0 <= idx < v.shape[0]:
            raise ValueError(f"index {idx} outside 0..{v.shape[0] - 1}")
    lo, hi = min(i, j), max(i, j)
    return int(v[i] + v[j] - 2 * int(v[lo : hi + 1].min()) + 2)


def _d_circ_matrix(table: RangeMinTable, idx: np.ndarray) -> np.ndarray:
    v = table._values[idx]
    ii = np.repeat(idx, idx.shape[0])
    jj = np.tile(idx, idx.shape[0])
    mins = table.query_many(ii, jj).reshape(idx.shape[0], idx.shape[0])
    return v[:, None] + v[None, :] - 2 * mins + 2


def _distances_from_vertices(planar: PlanarMap, vertices: np.ndarray) -> dict:
    """BFS fields for each distinct vertex id, keyed by id."""
    indptr, indices = planar.adjacency
    out = {}
    for v in np.unique(vertices):
        out[int(v)] = _kernels.bfs_distances(indptr, indices, int(v), planar.n_vertices)
    return out


@dataclass(frozen=True)
class Lemma31Report:
    pairs_checked: int
    violations: int
    exhaustive: bool

    @property
    def ok(self) -> bool:
        return self.violations == 0


def verify_lemma31(m, c: ContourPair, pair_budget: int, rng: RngStream | None = None) -> Lemma31Report:
    """Check graph distance <= corner bound over contour-position pairs.

    Runs over all (pn+1)^2 pairs when that fits the budget, otherwise over
    pair_budget sampled pairs grouped by source position so one BFS serves
    many targets.
    """
    planar = as_planar(m)
    if pair_budget < 1:
        raise ValueError("pair_budget must be positive")
    pn = planar.n_edges
    length = pn + 1
    table = RangeMinTable(c.V)
    corner_vertex = planar.vertex_of_index(np.arange(length))

    if length * length <= pair_budget:
        fields = _distances_from_vertices(planar, corner_vertex)
        dist = np.stack([fields[int(v)] for v in corner_vertex])[:, corner_vertex]
        idx = np.arange(length)
        bound = _d_circ_matrix(table, idx)
        violations = int((dist > bound).sum())
        return Lemma31Report(pairs_checked=length * length, violations=violations, exhaustive=True)

    gen = (rng or RngStream(0)).generator
    n_src = max(1, int(np.sqrt(pair_budget)))
    per_src = -(-pair_budget // n_src)
    sources = gen.integers(0, length, size=n_src)
    violations = 0
    checked = 0
    fields = _distances_from_vertices(planar, corner_vertex[sources])
    for s in sources:
        remaining = pair_budget - checked
        if remaining <= 0:
            break
        targets = gen.integers(0, length, size=min(per_src, remaining))
        d = fields[int(corner_vertex[s])][corner_vertex[targets]]
        bound = (
            c.V[s]
            + c.V[targets]
            - 2 * table.query_many(np.full(targets.shape[0], s), targets)
            + 2
        )
        violations += int((d > bound).sum())
        checked += targets.shape[0]
    return Lemma31Report(pairs_checked=checked, violations=violations, exhaustive=False)


def grid_sample(m, c: ContourPair, grid_m: int) -> GridSample:
    """Rescaled graph distances over m+1 evenly spaced contour positions."""
    planar = as_planar(m)
    if grid_m < 1:
        raise ValueError("grid resolution must be >= 1")
    pn = planar.n_edges
    idx = (pn * np.arange(grid_m + 1, dtype=np.int64)) // grid_m
    verts = planar.vertex_of_index(idx)
    fields = _distances_from_vertices(planar, verts)
    dist = np.stack([fields[int(v)] for v in verts])[:, verts]
    scale = scaling_constants(planar.p).c_V * float(planar.n) ** -0.25
    return GridSample(m=grid_m, indices=idx, dist_matrix=scale * dist)


def discrete_dstar(c: ContourPair, grid_indices) -> np.ndarray:
    """Shortest-path closure of the corner bound over grid positions.

    Nodes are the given contour positions; every pair is joined by an edge
    weighted by the corner bound, the diagonal is forced to zero (an empty
    chain costs nothing), and the all-pairs closure is returned. Entrywise it
    is <= the one-hop bound and >= the graph distance.
    """
    idx = np.ascontiguousarray(grid_indices, dtype=np.int64)
    if idx.min(initial=0) < 0 or idx.max(initial=-1) > c.p * c.n:
        raise ValueError("grid index outside the contour range")
    table = RangeMinTable(c.V)
    w = _d_circ_matrix(table, idx).astype(np.float64)
    np.fill_diagonal(w, 0.0)
    return shortest_path(w, method="FW", directed=False)


def cross_distortion(map_a, c_a: ContourPair, map_b, c_b: ContourPair, m: int) -> float:
    """Sup difference of rescaled grid metrics of two maps of the same p.

    Both maps are sampled at contour positions floor(pn * k / m); the value
    is the largest absolute difference of the rescaled distances over all
    grid pairs. Identical maps give exactly 0.
    """
    pa, pb = as_planar(map_a).p, as_planar(map_b).p
    if pa != pb:
        raise ValueError(f"maps disagree on p: {pa} vs {pb}")
    if m < 2:
        raise ValueError("need m >= 2 grid cells")
    ga = grid_sample(map_a, c_a, m)
    gb = grid_sample(map_b, c_b, m)
    return float(np.abs(ga.dist_matrix - gb.dist_matrix).max())


def two_point_samples(m, rng: RngStream, k: int) -> list:
    """Distances between all pairs of k uniform random vertices."""
    planar = as_planar(m)
    if k < 2:
        raise ValueError("need at least two draws")
    draws = rng.generator.integers(0, planar.n_vertices, size=k)
    fields = _distances_from_vertices(planar, draws)
    out = []
    for a in range(k):
        da = fields[int(draws[a])]
        for b in range(a + 1, k):
            out.append(int(da[draws[b]]))
    return out
