"""Mobile-to-map construction via corner chords.

A valid mobile with n black vertices encodes a rooted planar map with n faces
of degree 2p on the white vertices plus one extra base vertex. Walking the
tree corner by corner, every corner either connects to the base vertex (label
1) or to its successor: the next corner, cyclically, whose label is one less.
The black vertices and tree edges are then discarded; what remains are the
pn chord edges.

Graph distance to the base vertex equals the (shifted) label: each chord
changes the label by exactly one, and following successors from any corner
descends to the base one unit at a time.

The embedding is recorded as a rotation system. Around a white vertex,
edge ends are grouped by corner in reverse walk order; within a corner the
outgoing chord comes first, then the incoming chords ordered by how far back
on the cyclic walk their source corner sits. Around the base vertex, ends
are ordered by source corner. Face traversal of that rotation system yields
exactly n faces of degree 2p, which validate_map checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .mobile_core import (
    FREE,
    ROOTED,
    ContourPair,
    Mobile,
    ValidationError,
    contour,
)

BASE_VERTEX = 0


@dataclass(eq=False)
class PlanarMap:
    """Rooted bipartite map produced by the chord construction.

    Vertices are numbered with 0 for the base vertex and 1 + w for white
    vertex w of the source mobile. Edge i is the chord drawn at corner i, so
    the edge list doubles as the corner log. ``corner_vertex[i]`` is the
    vertex visited at walk position i (taken mod pn, position pn wraps to the
    root). The rotation system is stored flat: ``rot_half[rot_indptr[v] :
    rot_indptr[v+1]]`` lists half-edge ids (2*i outgoing at corner i, 2*i+1
    its twin) in cyclic order around vertex v.
    """

    p: int
    n: int
    edge_src: np.ndarray
    edge_dst: np.ndarray
    corner_vertex: np.ndarray
    rot_indptr: np.ndarray
    rot_half: np.ndarray

    root_edge = (BASE_VERTEX, 1)

    @property
    def n_vertices(self) -> int:
        return (self.p - 1) * self.n + 2

    @property
    def n_edges(self) -> int:
        return self.p * self.n

    @property
    def corner_log(self) -> np.ndarray:
        return np.arange(self.n_edges, dtype=np.int64)

    def vertex_of_index(self, i) -> np.ndarray:
        """Map contour indices (0..pn, scalar or array) to vertex ids."""
        return self.corner_vertex[np.asarray(i) % self.n_edges]

    @cached_property
    def adjacency(self):
        """CSR adjacency (indptr, indices) with both edge directions."""
        heads = np.concatenate([self.edge_src, self.edge_dst])
        tails = np.concatenate([self.edge_dst, self.edge_src])
        order = np.argsort(heads, kind="stable")
        indices = tails[order]
        counts = np.bincount(heads, minlength=self.n_vertices)
        indptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return indptr, indices

    @cached_property
    def _face_orbits(self):
        # next half-edge around the face: rotation successor of the twin
        m2 = 2 * self.n_edges
        owner = np.repeat(
            np.arange(self.n_vertices, dtype=np.int64), np.diff(self.rot_indptr)
        )
        nxt = np.arange(1, m2 + 1, dtype=np.int64)
        at_end = nxt == self.rot_indptr[owner + 1]
        nxt[at_end] = self.rot_indptr[owner[at_end]]
        rot_next = np.empty(m2, dtype=np.int64)
        rot_next[self.rot_half] = self.rot_half[nxt]
        twin = np.arange(m2, dtype=np.int64) ^ 1
        perm = rot_next[twin]
        ids, count = _kernels.orbit_ids(perm)
        return perm, ids, count

    def face_count(self) -> int:
        return self._face_orbits[2]

    def face_degrees(self) -> np.ndarray:
        _, ids, count = self._face_orbits
        return np.bincount(ids, minlength=count)


def faces(m) -> list:
    """Face boundaries as vertex-id sequences (one entry per edge side)."""
    m = as_planar(m)
    perm, ids, count = m._face_orbits
    he_vertex = np.empty(2 * m.n_edges, dtype=np.int64)
    he_vertex[0::2] = m.edge_src
    he_vertex[1::2] = m.edge_dst
    out = []
    seen = np.zeros(2 * m.n_edges, dtype=bool)
    for start in range(2 * m.n_edges):
        if seen[start]:
            continue
        cycle = []
        h = start
        while not seen[h]:
            seen[h] = True
            cycle.append(int(he_vertex[h]))
            h = int(perm[h])
        out.append(tuple(cycle))
    assert len(out) == count
    return out


@dataclass(eq=False)
class PointedMap:
    """Map built from a free mobile; distances are measured from the base.

    ``label_shift`` is the offset that was added to all labels so the minimum
    became 1; distance from the base vertex to white vertex w is
    ``labels[w] + label_shift``.
    """

    planar: PlanarMap
    label_shift: int
    pointed_vertex: int = BASE_VERTEX


def as_planar(m) -> PlanarMap:
    return m.planar if isinstance(m, PointedMap) else m


def map_contour(m, mobile: Mobile) -> ContourPair:
    """Contour of the mobile with labels as the map's metric sees them.

    For a pointed map the label track is shifted so its minimum is 1 and
    matches distances from the base vertex; rooted maps pass through.
    """
    c = contour(mobile)
    if isinstance(m, PointedMap):
        return ContourPair(p=c.p, n=c.n, H=c.H, V=c.V + m.label_shift)
    return c


def _assemble(p: int, n: int, walk_vertex: np.ndarray, corner_label: np.ndarray) -> PlanarMap:
    """Chords plus rotation system from walk vertices and corner labels.

    ``walk_vertex`` has pn+1 entries (vertex ids per walk position, already
    offset so the base vertex is 0); ``corner_label`` has pn entries with
    minimum exactly 1.
    """
    pn = p * n
    if int(corner_label.min()) != 1:
        raise ValidationError("corner labels must attain minimum 1")
    succ = _kernels.corner_successors(corner_label, int(corner_label.max()))
    src = walk_vertex[:pn]
    dst = np.where(succ < 0, BASE_VERTEX, walk_vertex[np.maximum(succ, 0)])

    corners = np.arange(pn, dtype=np.int64)
    # anchor of each half-edge: (vertex, corner block, within-block rank);
    # white corner blocks run in reverse walk order, outgoing end first in
    # its block, incoming ends by cyclic walk distance back to their source;
    # base-vertex ends in source corner order. This is the unique assignment
    # (up to reading direction) under which every face closes with degree 2p.
    anchor_vertex = np.empty(2 * pn, dtype=np.int64)
    anchor_corner = np.empty(2 * pn, dtype=np.int64)
    anchor_rank = np.empty(2 * pn, dtype=np.int64)

    anchor_vertex[0::2] = src
    anchor_corner[0::2] = pn - 1 - corners
    anchor_rank[0::2] = 0

    to_base = succ < 0
    anchor_vertex[1::2] = np.where(to_base, BASE_VERTEX, dst)
    anchor_corner[1::2] = np.where(to_base, corners, pn - 1 - succ)
    anchor_rank[1::2] = np.where(to_base, 0, 1 + (corners - succ) % pn)

    order = np.lexsort((anchor_rank, anchor_corner, anchor_vertex))
    rot_half = order.astype(np.int64)
    counts = np.bincount(anchor_vertex, minlength=(p - 1) * n + 2)
    rot_indptr = np.zeros((p - 1) * n + 3, dtype=np.int64)
    np.cumsum(counts, out=rot_indptr[1:])

    return PlanarMap(
        p=p,
        n=n,
        edge_src=src.copy(),
        edge_dst=dst,
        corner_vertex=walk_vertex[:pn].copy(),
        rot_indptr=rot_indptr,
        rot_half=rot_half,
    )


def build_map(mobile: Mobile) -> PlanarMap:
    """Rooted map of a rooted mobile. Root edge: corner 0 chord, base first."""
    if mobile.variant != ROOTED:
        raise ValidationError("build_map expects a rooted mobile")
    c = contour(mobile)
    idx, _, _, _ = mobile.tree.walk()
    walk_vertex = idx + 1
    return _assemble(mobile.p, mobile.n, walk_vertex, c.V[:-1])


def build_pointed_map(mobile: Mobile) -> PointedMap:
    """Map of a free mobile after shifting labels so the minimum is 1."""
    if mobile.variant != FREE:
        raise ValidationError("build_pointed_map expects a free mobile")
    c = contour(mobile)
    shift = 1 - int(mobile.labels.min())
    idx, _, _, _ = mobile.tree.walk()
    walk_vertex = idx + 1
    planar = _assemble(mobile.p, mobile.n, walk_vertex, c.V[:-1] + shift)
    return PointedMap(planar=planar, label_shift=shift)


# ---------------------------------------------------------------------------
# validation


@dataclass
class MapValidation:
    checks: dict
    details: list

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def validate_map(m, mobile: Mobile) -> MapValidation:
    """Structural and metric checks of a constructed map against its mobile.

    Covers the counting identities (pn edges, (p-1)n + 2 vertices, n faces of
    degree 2p), connectivity, the one-step label change across every edge,
    and the distance identity from the base vertex.
    """
    planar = as_planar(m)
    shift = m.label_shift if isinstance(m, PointedMap) else 0
    p, n = planar.p, planar.n
    checks = {}
    details = []

    checks["edge_count"] = planar.edge_src.shape[0] == p * n
    distinct = np.unique(np.concatenate([planar.edge_src, planar.edge_dst]))
    checks["vertex_count"] = distinct.shape[0] == planar.n_vertices and bool(
        (distinct >= 0).all() and (distinct < planar.n_vertices).all()
    )
    if not checks["vertex_count"]:
        details.append(
            f"{distinct.shape[0]} distinct endpoint ids, expected {planar.n_vertices}"
        )

    dist_to_vertex = np.empty(planar.n_vertices, dtype=np.int64)
    dist_to_vertex[BASE_VERTEX] = 0
    dist_to_vertex[1:] = mobile.labels + shift

    du = dist_to_vertex[planar.edge_src]
    dv = dist_to_vertex[planar.edge_dst]
    checks["edges_step_one"] = bool((np.abs(du - dv) == 1).all())
    if not checks["edges_step_one"]:
        bad = int(np.argmax(np.abs(du - dv) != 1))
        details.append(
            f"edge {bad} joins labels {int(du[bad])} and {int(dv[bad])}"
        )

    indptr, indices = planar.adjacency
    dist = _kernels.bfs_distances(indptr, indices, BASE_VERTEX, planar.n_vertices)
    checks["connected"] = bool((dist >= 0).all())
    checks["base_distance_identity"] = checks["connected"] and bool(
        (dist == dist_to_vertex).all()
    )
    if checks["connected"] and not checks["base_distance_identity"]:
        bad = int(np.argmax(dist != dist_to_vertex))
        details.append(
            f"vertex {bad}: graph distance {int(dist[bad])}, label says "
            f"{int(dist_to_vertex[bad])}"
        )

    degs = planar.face_degrees()
    checks["face_count"] = planar.face_count() == n
    checks["face_degrees"] = bool((degs == 2 * p).all())
    if not checks["face_count"]:
        details.append(f"{planar.face_count()} faces, expected {n}")
    if not checks["face_degrees"]:
        details.append(f"face degrees {sorted(set(degs.tolist()))}, expected {{{2 * p}}}")

    if shift == 0:
        checks["root_edge"] = (
            int(planar.edge_src[0]) == 1 and int(planar.edge_dst[0]) == BASE_VERTEX
        )
    return MapValidation(checks=checks, details=details)
