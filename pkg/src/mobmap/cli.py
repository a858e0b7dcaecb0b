"""Command-line entry point: sampling, validation, experiments, file formats.

Text formats are line-oriented ASCII. A mobile file is four lines
(PMOBILE 1 header, parameters, H row, V row); a map file is a header,
parameter and root lines followed by one ``e u v`` line per corner. All
writers emit LF newlines and repr() floats so identical invocations
produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import deque
from dataclasses import dataclass

import numpy as np

from ._fit import FitError
from .bdg import BASE_VERTEX, as_planar, build_map, build_pointed_map, map_contour
from .continuum import sample_labeled_excursion
from .experiments import (
    POINTED_CUTOFF,
    ExperimentConfig,
    exp_ball_volume,
    exp_conjecture_gap,
    exp_invariant_suite,
    exp_ise_tail,
    exp_profile_universality,
    exp_two_point_scaling,
)
from .map_metric import discrete_dstar, grid_sample, verify_lemma31
from .mobile_core import (
    FREE,
    ROOTED,
    ContourPair,
    DecodeError,
    ValidationError,
    contour,
    enumerate_mobiles,
    mobile_from_contour,
    scaling_constants,
)
from .sampler import (
    RejectionBudgetError,
    RngStream,
    sample_free_mobile,
    sample_rooted_mobile,
)

EXPERIMENTS = {
    "invariant-suite": exp_invariant_suite,
    "profile-universality": exp_profile_universality,
    "two-point-scaling": exp_two_point_scaling,
    "ball-volume": exp_ball_volume,
    "ise-tail": exp_ise_tail,
    "conjecture-gap": exp_conjecture_gap,
}

USAGE_ERROR = 2
CHECK_FAILED = 1


def format_mobile_text(mobile) -> str:
    c = contour(mobile)
    return (
        "PMOBILE 1\n"
        f"p {c.p} n {c.n} variant {mobile.variant}\n"
        f"H {' '.join(str(int(x)) for x in c.H)}\n"
        f"V {' '.join(str(int(x)) for x in c.V)}\n"
    )


def _int_fields(parts, line, where):
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise DecodeError(f"non-integer field in {line!r}", where) from None


def parse_mobile_text(text: str):
    lines = text.splitlines()
    if len(lines) < 4 or lines[0] != "PMOBILE 1":
        raise DecodeError("not a PMOBILE 1 file", 0)
    fields = lines[1].split()
    if len(fields) != 6 or fields[0] != "p" or fields[2] != "n" or fields[4] != "variant":
        raise DecodeError(f"bad parameter line {lines[1]!r}", 1)
    p, n = _int_fields([fields[1], fields[3]], lines[1], 1)
    variant = fields[5]
    if variant not in (ROOTED, FREE):
        raise DecodeError(f"unknown variant {variant!r}", 1)

    def row(line, tag, where):
        parts = line.split()
        if not parts or parts[0] != tag:
            raise DecodeError(f"expected {tag} row, got {line!r}", where)
        return np.array(_int_fields(parts[1:], line, where), dtype=np.int64)

    c = ContourPair(p, n, row(lines[2], "H", 2), row(lines[3], "V", 3))
    m = mobile_from_contour(c)
    if m.variant != variant:
        m = type(m)(m.tree, m.labels, variant)
    return m


def format_map_text(m) -> str:
    pm = as_planar(m)
    head = (
        "PMAP 1\n"
        f"p {pm.p} n {pm.n} vertices {pm.n_vertices} edges {pm.n_edges}\n"
        f"root {pm.root_edge[0]} {pm.root_edge[1]}\n"
    )
    body = "".join(
        f"e {int(u)} {int(v)}\n" for u, v in zip(pm.edge_src, pm.edge_dst)
    )
    return head + body


@dataclass(frozen=True)
class MapFile:
    """Parsed PMAP record: counts plus the corner-ordered edge list."""

    p: int
    n: int
    n_vertices: int
    n_edges: int
    root_vertex: int
    src: np.ndarray
    dst: np.ndarray


def parse_map_text(text: str) -> MapFile:
    lines = text.splitlines()
    if len(lines) < 3 or lines[0] != "PMAP 1":
        raise DecodeError("not a PMAP 1 file", 0)
    f = lines[1].split()
    ok = len(f) == 8 and f[0] == "p" and f[2] == "n" and f[4] == "vertices" and f[6] == "edges"
    if not ok:
        raise DecodeError(f"bad parameter line {lines[1]!r}", 1)
    p, n, nv, ne = _int_fields([f[1], f[3], f[5], f[7]], lines[1], 1)
    r = lines[2].split()
    if len(r) != 3 or r[0] != "root":
        raise DecodeError(f"bad root line {lines[2]!r}", 2)
    base, root_v = _int_fields(r[1:], lines[2], 2)
    if base != BASE_VERTEX:
        raise DecodeError(f"bad root line {lines[2]!r}", 2)
    edges = []
    for where, line in enumerate(lines[3:], start=3):
        if not line:
            continue
        e = line.split()
        if len(e) != 3 or e[0] != "e":
            raise DecodeError(f"bad edge line {line!r}", where)
        edges.append(tuple(_int_fields(e[1:], line, where)))
    src = np.array([u for u, _ in edges], dtype=np.int64)
    dst = np.array([v for _, v in edges], dtype=np.int64)
    return MapFile(p, n, nv, ne, root_v, src, dst)


def validate_map_file(mf: MapFile) -> dict:
    """Checks runnable on the serialized form (no rotation system on disk)."""
    checks = {}
    checks["edge_count"] = mf.n_edges == mf.p * mf.n == len(mf.src)
    checks["vertex_count"] = mf.n_vertices == (mf.p - 1) * mf.n + 2
    ids = np.concatenate([mf.src, mf.dst]) if len(mf.src) else np.array([], dtype=np.int64)
    in_range = bool(len(ids) == 0 or (ids.min() >= 0 and ids.max() < mf.n_vertices))
    checks["vertex_ids_in_range"] = in_range
    checks["root_vertex"] = 0 < mf.root_vertex < mf.n_vertices

    if not in_range:
        checks["connected"] = False
        checks["edges_step_one"] = False
        return checks

    adj = [[] for _ in range(mf.n_vertices)]
    for u, v in zip(mf.src, mf.dst):
        adj[u].append(v)
        adj[v].append(u)
    dist = np.full(mf.n_vertices, -1, dtype=np.int64)
    dist[BASE_VERTEX] = 0
    queue = deque([BASE_VERTEX])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    checks["connected"] = bool((dist >= 0).all())
    # connected + bipartite forces every edge to step one BFS level
    steps = np.abs(dist[mf.src] - dist[mf.dst])
    checks["edges_step_one"] = checks["connected"] and bool((steps == 1).all())
    return checks


def _write_text(path: str, text: str):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        _write_text(out, text)
        print(out)


def _int_list(raw: str):
    return tuple(int(x) for x in raw.split(",") if x)


def _float_list(raw: str):
    return tuple(float(x) for x in raw.split(",") if x)


def _sample_mobile(p: int, n: int, variant: str, rng: RngStream):
    if variant == "auto":
        variant = ROOTED if n < POINTED_CUTOFF else FREE
    if variant == ROOTED:
        return sample_rooted_mobile(p, n, rng)
    return sample_free_mobile(p, n, rng)


def cmd_sample_mobile(args) -> int:
    mobile = _sample_mobile(args.p, args.faces, args.variant, RngStream(args.seed, 0))
    _emit(format_mobile_text(mobile), args.out)
    return 0


def cmd_sample_map(args) -> int:
    mobile = _sample_mobile(args.p, args.faces, args.variant, RngStream(args.seed, 0))
    built = build_map(mobile) if mobile.variant == ROOTED else build_pointed_map(mobile)
    _emit(format_map_text(built), args.out)
    return 0


def cmd_validate(args) -> int:
    with open(args.path, encoding="ascii") as fh:
        mf = parse_map_text(fh.read())
    checks = validate_map_file(mf)
    for name, ok in checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    failing = [name for name, ok in checks.items() if not ok]
    if failing:
        print(f"invalid map: {', '.join(failing)}", file=sys.stderr)
        return CHECK_FAILED
    return 0


def cmd_enumerate(args) -> int:
    mobiles = enumerate_mobiles(args.p, args.faces, args.variant)
    _emit("".join(format_mobile_text(m) for m in mobiles), args.out)
    return 0


def cmd_metric(args) -> int:
    p, n = args.p, args.faces
    rng = RngStream(args.seed, 0)
    mobile = _sample_mobile(p, n, args.variant, rng)
    built = build_map(mobile) if mobile.variant == ROOTED else build_pointed_map(mobile)
    c = map_contour(built, mobile)
    gs = grid_sample(built, c, min(args.grid, p * n))
    closure = discrete_dstar(c, gs.indices)
    scale = scaling_constants(p).c_V * n ** -0.25
    gap = scale * closure - gs.dist_matrix
    pool = gap[np.triu_indices_from(gap, k=1)]
    lemma = verify_lemma31(built, c, args.samples, rng=RngStream(args.seed, 1))

    pm = as_planar(built)
    stats = {
        "vertices": float(pm.n_vertices),
        "edges": float(pm.n_edges),
        "faces": float(pm.face_count()),
        "gap_min": float(pool.min()),
        "gap_median": float(np.median(pool)),
        "gap_max": float(pool.max()),
        "lemma31_pairs": float(lemma.pairs_checked),
        "lemma31_violations": float(lemma.violations),
    }
    if args.format == "json":
        text = json.dumps(stats, indent=2, sort_keys=True) + "\n"
    else:
        text = "stat,value\n" + "".join(f"{k},{v!r}\n" for k, v in sorted(stats.items()))
    _emit(text, args.out)

    failing = []
    if stats["gap_min"] < -1e-9:
        failing.append("gap_nonnegative")
    if lemma.violations:
        failing.append("lemma31")
    for name in failing:
        print(f"FAIL {name}", file=sys.stderr)
    return CHECK_FAILED if failing else 0


def cmd_excursion(args) -> int:
    ex = sample_labeled_excursion(args.grid, RngStream(args.seed, 0), generator_n=args.faces)
    rows = "".join(
        f"{float(t)!r},{float(e)!r},{float(z)!r}\n"
        for t, e, z in zip(ex.times, ex.e_vals, ex.z_vals)
    )
    _emit("t,e,z\n" + rows, args.out)
    return 0


def _experiment_config(args) -> ExperimentConfig:
    mapping = {}
    if args.config is not None:
        with open(args.config, encoding="utf-8") as fh:
            mapping = json.load(fh)
        if not isinstance(mapping, dict):
            raise ValidationError("config file must hold a JSON object")
    mapping["name"] = args.name
    # explicit flags override the config file
    if args.p is not None:
        mapping["p_values"] = _int_list(args.p)
    if args.faces is not None:
        mapping["n_values"] = _int_list(args.faces)
    if args.samples is not None:
        mapping["samples"] = args.samples
    if args.grid is not None:
        mapping["grid_m"] = args.grid
    if args.seed is not None:
        mapping["seed"] = args.seed
    if args.radii is not None:
        mapping["radii"] = _float_list(args.radii)
    if args.out is not None:
        mapping["out"] = args.out
    if "seed" not in mapping:
        raise ValidationError("experiments need an explicit seed (--seed or config)")
    return ExperimentConfig.from_mapping(mapping)


def cmd_experiment(args) -> int:
    cfg = _experiment_config(args)
    report = EXPERIMENTS[args.name](cfg)
    for r in report.rows:
        if r.passed is None:
            continue
        print(f"{'PASS' if r.passed else 'FAIL'} {r.stat} p={r.p} n={r.n} value={r.value:.6g}")
    if cfg.out is None:
        text = report.json_text() if args.format == "json" else report.csv_text()
        sys.stdout.write(text)
    if report.ok is False:
        failing = [r.stat for r in report.rows if r.passed is False]
        print(f"failed checks: {', '.join(sorted(set(failing)))}", file=sys.stderr)
        return CHECK_FAILED
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mobmap",
        description="Sample and check random bipartite planar maps.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp, *, seed=False, variant=None, grid=None, samples=None):
        sp.add_argument("--p", type=int, default=2, help="half face degree (>= 2)")
        sp.add_argument("--faces", type=int, default=1, help="number of faces n")
        if seed:
            sp.add_argument("--seed", type=int, required=True,
                            help="master seed (required: runs must be reproducible)")
        if variant is not None:
            sp.add_argument("--variant", choices=variant, default=variant[0])
        if grid is not None:
            sp.add_argument("--grid", type=int, default=grid, help="grid resolution")
        if samples is not None:
            sp.add_argument("--samples", type=int, default=samples)
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("sample-mobile", help="draw one labeled mobile")
    common(sp, seed=True, variant=("auto", "rooted", "free"))
    sp.set_defaults(run=cmd_sample_mobile)

    sp = sub.add_parser("sample-map", help="draw one mobile and build its map")
    common(sp, seed=True, variant=("auto", "rooted", "free"))
    sp.set_defaults(run=cmd_sample_map)

    sp = sub.add_parser("validate", help="check a PMAP file")
    sp.add_argument("path", help="map file to check")
    sp.set_defaults(run=cmd_validate)

    sp = sub.add_parser("enumerate", help="list all mobiles at (p, n)")
    common(sp, variant=("rooted", "free"))
    sp.set_defaults(run=cmd_enumerate)

    sp = sub.add_parser("metric", help="distance closure report for one sampled map")
    common(sp, seed=True, variant=("auto", "rooted", "free"), grid=64, samples=1024)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(run=cmd_metric)

    sp = sub.add_parser("excursion", help="sample a rescaled labeled excursion")
    sp.add_argument("--faces", type=int, default=None,
                    help="generator size (default: --grid)")
    sp.add_argument("--grid", type=int, default=512)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_excursion)

    sp = sub.add_parser("experiment", help="run a Monte Carlo campaign")
    sp.add_argument("name", choices=sorted(EXPERIMENTS))
    sp.add_argument("--config", help="JSON config; explicit flags override it")
    sp.add_argument("--p", help="comma-separated p values")
    sp.add_argument("--faces", help="comma-separated n values")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--radii", help="comma-separated radii/ladder values")
    sp.add_argument("--out", help="directory for CSV + JSON artifacts")
    sp.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="stdout format when --out is absent")
    sp.set_defaults(run=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (ValidationError, DecodeError, RejectionBudgetError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
