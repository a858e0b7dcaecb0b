"""Continuum-limit approximations built from rescaled large mobiles.

The scaled height and label tracks of a large random mobile converge jointly
to a universal excursion-with-labels pair, and the label track re-rooted at
its minimum is the natural parameterization of the limit
object. This module samples that pair by rescaling an actual mobile (which
is exact in law in the limit and keeps the whole pipeline self-testing),
re-roots it, and computes the label pseudo-metric, its shortest-path
closure over a grid, occupation and ball-mass statistics, and a box-count
style dimension estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import (
    connected_components,
    csgraph_from_dense,
    shortest_path,
)

from . import _fit
from .map_metric import RangeMinTable
from .mobile_core import contour, scaling_constants
from .sampler import RngStream, sample_free_mobile

DEFAULT_APSP_BUDGET = 1025


@dataclass(frozen=True)
class LabeledExcursion:
    """Re-rooted scaled (contour, label) pair on a uniform grid.

    e_vals and z_vals have m+1 entries for grid times k/m; provenance is
    (p, n, seed) of the generating mobile.
    """

    m: int
    e_vals: np.ndarray
    z_vals: np.ndarray
    provenance: tuple

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.m + 1) / self.m


@dataclass(frozen=True)
class GridMetric:
    """Label pseudo-metric and its shortest-path closure on grid times."""

    m: int
    points: np.ndarray
    d_circ_matrix: np.ndarray
    d_star_matrix: np.ndarray


def reroot_at_min(e, z) -> tuple:
    """Cyclically re-root a (contour, label) grid pair at the label argmin.

    With s* the first index attaining min(z), the new label track is
    z[s* (+) t] - z[s*] and the new contour track measures tree distance
    from the new origin: e[s*] + e[s* (+) t] - 2 min(e over [s*, s* (+) t]),
    where (+) wraps cyclically. The output pair again has endpoints 0 and
    the label minimum sits at the origin.
    """
    e = np.ascontiguousarray(e, dtype=np.float64)
    z = np.ascontiguousarray(z, dtype=np.float64)
    if e.shape != z.shape or e.ndim != 1 or e.shape[0] < 2:
        raise ValueError("need two equal-length 1-d grids of length >= 2")
    if e[0] != 0.0 or e[-1] != 0.0 or (e < 0).any():
        raise ValueError("contour track must be a nonnegative excursion")
    last = e.shape[0] - 1
    s = int(np.argmin(z))
    if s == 0:
        return e.copy(), z - z[0]
    fwd_min = np.minimum.accumulate(e[s:])
    bwd_min = np.minimum.accumulate(e[: s + 1][::-1])[::-1]
    ebar = np.empty_like(e)
    ebar[: last - s + 1] = e[s] + e[s:] - 2.0 * fwd_min
    ebar[last - s + 1 :] = e[s] + e[1 : s + 1] - 2.0 * bwd_min[1:]
    zbar = np.empty_like(z)
    zbar[: last - s + 1] = z[s:] - z[s]
    zbar[last - s + 1 :] = z[1 : s + 1] - z[s]
    return ebar, zbar


def sample_labeled_excursion(m: int, rng: RngStream, generator_n: int | None = None) -> LabeledExcursion:
    """Scaled re-rooted (contour, label) pair on an m+1 point grid.

    A free mobile with p = 2 and generator_n (default m) black vertices is
    sampled, its height and label tracks rescaled by n^(-1/2) and n^(-1/4)
    with the standard constants, re-rooted at the label minimum, and read
    off at grid positions floor(pn * k / m).
    """
    if m < 2:
        raise ValueError("need grid resolution m >= 2")
    n = int(generator_n) if generator_n is not None else int(m)
    if n < 1:
        raise ValueError("generator size must be positive")
    p = 2
    mobile = sample_free_mobile(p, n, rng)
    c = contour(mobile)
    consts = scaling_constants(p)
    e = consts.c_C * float(n) ** -0.5 * c.H
    z = consts.c_V * float(n) ** -0.25 * c.V
    ebar, zbar = reroot_at_min(e, z)
    idx = (p * n * np.arange(m + 1, dtype=np.int64)) // m
    return LabeledExcursion(
        m=m,
        e_vals=ebar[idx],
        z_vals=zbar[idx],
        provenance=(p, n, (rng.master_seed, rng.stream_index)),
    )


def tree_pseudo_metric(g, s: int, t: int) -> float:
    """g(s) + g(t) - 2 min(g over [s^t .. svt])."""
    arr = np.ascontiguousarray(g, dtype=np.float64)
    for idx in (s, t):
        if not 0 <= idx < arr.shape[0]:
            raise ValueError(f"index {idx} outside 0..{arr.shape[0] - 1}")
    lo, hi = min(s, t), max(s, t)
    return float(arr[s] + arr[t] - 2.0 * arr[lo : hi + 1].min())


def d_circ_cont(zbar, s: int, t: int) -> float:
    """Label pseudo-metric between grid positions (same form as the tree one)."""
    return tree_pseudo_metric(zbar, s, t)


def _pairwise_tree_dist(values: np.ndarray) -> np.ndarray:
    table = RangeMinTable(values)
    k = values.shape[0]
    idx = np.arange(k, dtype=np.int64)
    ii = np.repeat(idx, k)
    jj = np.tile(idx, k)
    mins = table.query_many(ii, jj).reshape(k, k)
    return values[:, None] + values[None, :] - 2.0 * mins


def grid_dstar(zbar, budget: int = DEFAULT_APSP_BUDGET) -> GridMetric:
    """One-hop label metric and its all-pairs shortest-path closure.

    Refuses grids larger than the budget (closure is cubic in the grid
    size); shrink the grid rather than raising the budget casually.
    """
    z = np.ascontiguousarray(zbar, dtype=np.float64)
    if z.ndim != 1 or z.shape[0] < 2:
        raise ValueError("need a 1-d grid of length >= 2")
    if z.shape[0] > budget:
        raise ValueError(
            f"grid has {z.shape[0]} points, over the closure budget {budget}; "
            "use a coarser grid"
        )
    d_circ = _pairwise_tree_dist(z)
    # zero-weight pairs are real edges (near-identified points), so convert
    # with an explicit null value instead of letting dense zeros mean "no edge"
    graph = csgraph_from_dense(d_circ, null_value=np.inf)
    d_star = shortest_path(graph, method="FW", directed=False)
    return GridMetric(
        m=z.shape[0] - 1,
        points=np.arange(z.shape[0]) / (z.shape[0] - 1),
        d_circ_matrix=d_circ,
        d_star_matrix=d_star,
    )


@dataclass(frozen=True)
class ClusterReport:
    """Connected components of grid points under a closure tolerance."""

    n_clusters: int
    labels: np.ndarray
    sizes: np.ndarray
    exemplars: np.ndarray

    def size_histogram(self) -> dict:
        vals, counts = np.unique(self.sizes, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}


def equivalence_clusters(gm: GridMetric, tol: float) -> ClusterReport:
    """Partition grid points by closeness in the closed metric.

    Points with d_star <= tol are joined; the report carries component
    labels, sizes, and one exemplar index per component.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    adj = csr_matrix(gm.d_star_matrix <= tol)
    n_comp, labels = connected_components(adj, directed=False)
    sizes = np.bincount(labels, minlength=n_comp)
    exemplars = np.empty(n_comp, dtype=np.int64)
    # first index per component; reversed scan leaves the smallest index
    for i in range(labels.shape[0] - 1, -1, -1):
        exemplars[labels[i]] = i
    return ClusterReport(n_clusters=n_comp, labels=labels, sizes=sizes, exemplars=exemplars)


def occupation_measure(zbar, eps: float) -> float:
    """Fraction of grid time the label track spends at height <= eps."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    z = np.ascontiguousarray(zbar, dtype=np.float64)
    return float((z <= eps).mean())


@dataclass(frozen=True)
class BallMassProfile:
    """Mean ball mass per radius under the closed metric and the one-hop bound."""

    radii: np.ndarray
    mass: np.ndarray
    mass_one_hop: np.ndarray


def ball_mass_profile(gm: GridMetric, zbar, radii) -> BallMassProfile:
    """Average fraction of grid points within distance r of a grid center.

    mass uses the closure matrix (the tighter metric upper bound, so a mass
    lower bound is recorded alongside the one-hop variant for comparison).
    """
    r = np.ascontiguousarray(radii, dtype=np.float64)
    if r.ndim != 1 or r.shape[0] == 0 or (r <= 0).any():
        raise ValueError("radii must be positive")
    z = np.ascontiguousarray(zbar, dtype=np.float64)
    if z.shape[0] != gm.d_star_matrix.shape[0]:
        raise ValueError("grid length mismatch between zbar and the metric")
    mass = np.array([(gm.d_star_matrix < rr).mean() for rr in r])
    mass_hop = np.array([(gm.d_circ_matrix < rr).mean() for rr in r])
    return BallMassProfile(radii=r, mass=mass, mass_one_hop=mass_hop)


@dataclass(frozen=True)
class DimensionEstimate:
    slope: float
    ci_low: float
    ci_high: float
    n_points: int


def estimate_dimension(profile, n_boot: int = 500, rng: RngStream | None = None) -> DimensionEstimate:
    """Log-log slope of mass against radius, with a bootstrap interval.

    Accepts a BallMassProfile or a (radii, masses) pair. Exact power laws
    come back with the planted exponent; constant masses raise FitError.
    """
    if isinstance(profile, BallMassProfile):
        radii, mass = profile.radii, profile.mass
    else:
        radii, mass = profile
    slope, _ = _fit.loglog_slope(radii, mass)
    gen = (rng or RngStream(0)).generator
    lo, hi = _fit.bootstrap_slope_interval(radii, mass, n_boot=n_boot, generator=gen)
    return DimensionEstimate(slope=slope, ci_low=lo, ci_high=hi, n_points=len(radii))
