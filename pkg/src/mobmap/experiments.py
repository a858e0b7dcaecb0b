"""Monte Carlo campaigns over sampled maps.

Each ``exp_*`` function consumes an :class:`ExperimentConfig` and returns a
:class:`StatReport` whose rows are canonically sorted, so a fixed (config,
seed) pair always serializes to byte-identical CSV and JSON. Thresholds are
artifact-chosen defaults that ``config.tolerances`` may override; rows only
carry a pass flag where a threshold applies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._fit import FitError, bootstrap_slope_interval, loglog_slope
from .bdg import BASE_VERTEX, as_planar, build_map, build_pointed_map, map_contour, validate_map
from .continuum import occupation_measure, sample_labeled_excursion
from .map_metric import bfs, discrete_dstar, grid_sample, two_point_samples, verify_lemma31
from .mobile_core import ValidationError, scaling_constants
from .sampler import RngStream, sample_free_mobile, sample_rooted_mobile

# Rejection sampling of rooted mobiles has acceptance rate ~1/n; above this
# size experiments switch to the pointed construction and say so per row.
POINTED_CUTOFF = 10_000

BOOTSTRAP_RESAMPLES = 1000
LEMMA31_PAIR_BUDGET = 4096

DEFAULT_THRESHOLDS = {
    "invariant-suite": {"violations": 0.0},
    "profile-universality": {"ks": 0.05},
    "two-point-scaling": {"slope_low": 0.22, "slope_high": 0.28},
    "ball-volume": {"slope_low": 3.5, "slope_high": 4.5},
    "ise-tail": {"trend": 0.0},
    "conjecture-gap": {},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared knobs for one campaign.

    ``grid_m`` doubles as the discretization size of whichever lattice the
    experiment uses: metric grid resolution for the gap experiment, excursion
    generator size for the continuum ones. ``tolerances`` overrides the
    experiment's default thresholds and may carry named knobs such as
    ``pair_budget`` or ``alpha``.
    """

    name: str
    p_values: tuple = (2,)
    n_values: tuple = (500,)
    samples: int = 20
    grid_m: int = 512
    seed: int = 0
    radii: tuple = (0.05, 0.1, 0.15, 0.2, 0.3)
    out: str | None = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "p_values", tuple(int(p) for p in self.p_values))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        object.__setattr__(self, "tolerances", dict(self.tolerances))
        if not self.name:
            raise ValidationError("experiment name must be nonempty")
        if not self.p_values or min(self.p_values) < 2:
            raise ValidationError("p_values must be nonempty with every p >= 2")
        if not self.n_values or min(self.n_values) < 1:
            raise ValidationError("n_values must be nonempty and positive")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValidationError("n_values must be strictly increasing")
        if self.samples < 1:
            raise ValidationError("need samples >= 1")
        if self.grid_m < 2:
            raise ValidationError("grid_m must be >= 2")
        if not self.radii or min(self.radii) <= 0:
            raise ValidationError("radii must be nonempty and positive")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValidationError("radii must be strictly increasing")
        if self.seed < 0:
            raise ValidationError("seed must be nonnegative")

    def thresholds(self, experiment: str) -> dict:
        merged = dict(DEFAULT_THRESHOLDS[experiment])
        merged.update(self.tolerances)
        return merged

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValidationError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def to_mapping(self) -> dict:
        # `out` is where artifacts land, not part of the experiment identity,
        # so it is omitted and reruns into different directories compare equal.
        return {
            "name": self.name,
            "p_values": list(self.p_values),
            "n_values": list(self.n_values),
            "samples": self.samples,
            "grid_m": self.grid_m,
            "seed": self.seed,
            "radii": list(self.radii),
            "tolerances": dict(sorted(self.tolerances.items())),
        }


@dataclass(frozen=True)
class StatRow:
    """One summary statistic with its sampling provenance.

    ``p = 0`` or ``n = 0`` marks a row aggregated across that axis; ``passed``
    stays None when no threshold governs the statistic.
    """

    p: int
    n: int
    samples: int
    seed: int
    variant: str
    stat: str
    value: float
    passed: bool | None = None


@dataclass(frozen=True)
class StatReport:
    experiment: str
    config: ExperimentConfig
    rows: tuple

    def __post_init__(self):
        ordered = tuple(sorted(self.rows, key=lambda r: (r.stat, r.p, r.n, r.variant)))
        object.__setattr__(self, "rows", ordered)

    @property
    def ok(self) -> bool | None:
        gated = [r.passed for r in self.rows if r.passed is not None]
        return all(gated) if gated else None

    def csv_text(self) -> str:
        lines = ["experiment,p,n,samples,seed,variant,stat,value,passed"]
        for r in self.rows:
            flag = "" if r.passed is None else str(int(r.passed))
            lines.append(
                f"{self.experiment},{r.p},{r.n},{r.samples},{r.seed},"
                f"{r.variant},{r.stat},{float(r.value)!r},{flag}"
            )
        return "\n".join(lines) + "\n"

    def json_text(self) -> str:
        payload = {
            "experiment": self.experiment,
            "config": self.config.to_mapping(),
            "passed": self.ok,
            "rows": [
                {
                    "p": r.p,
                    "n": r.n,
                    "samples": r.samples,
                    "seed": r.seed,
                    "variant": r.variant,
                    "stat": r.stat,
                    "value": float(r.value),
                    "passed": r.passed,
                }
                for r in self.rows
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def write(self, out: str | None = None) -> tuple:
        """Write <name>.csv and <name>.json under ``out`` (or config.out)."""
        target = out if out is not None else self.config.out
        if target is None:
            raise ValueError("no output directory configured")
        root = Path(target)
        root.mkdir(parents=True, exist_ok=True)
        csv_path = root / f"{self.config.name}.csv"
        json_path = root / f"{self.config.name}.json"
        csv_path.write_text(self.csv_text())
        json_path.write_text(self.json_text())
        return csv_path, json_path


def _finish(report: StatReport) -> StatReport:
    if report.config.out is not None:
        report.write()
    return report


def _replica_stream(cfg: ExperimentConfig, phase: int, replica: int) -> RngStream:
    # phase isolates (p, n) cells and experiment stages from one another, so
    # aggregation order and cell additions cannot shift any replica's draws
    return RngStream(cfg.seed, (phase << 24) | replica)


def _draw_map(p: int, n: int, rng: RngStream):
    """Sample one uniform map, rooted below POINTED_CUTOFF, pointed above."""
    if n <= POINTED_CUTOFF:
        mobile = sample_rooted_mobile(p, n, rng)
        return build_map(mobile), mobile, "rooted"
    mobile = sample_free_mobile(p, n, rng)
    return build_pointed_map(mobile), mobile, "pointed"


# ---------------------------------------------------------------------------
# plumbing statistics


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    ci_low: float
    ci_high: float


def fit_power_law(xs, ys, n_boot: int = BOOTSTRAP_RESAMPLES, rng: RngStream | None = None) -> PowerLawFit:
    """OLS fit of log y against log x with a pairs-bootstrap interval."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if xs.shape[0] < 3:
        raise FitError("need at least three points for a power-law fit")
    generator = (rng if rng is not None else RngStream(0)).generator
    slope, intercept = loglog_slope(xs, ys)
    lo, hi = bootstrap_slope_interval(xs, ys, n_boot=n_boot, generator=generator)
    return PowerLawFit(slope=slope, intercept=intercept, ci_low=lo, ci_high=hi)


def ks_distance(sample_a, sample_b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic, exact sup over jump points."""
    a = np.sort(np.ascontiguousarray(sample_a, dtype=np.float64))
    b = np.sort(np.ascontiguousarray(sample_b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_distance needs two nonempty samples")
    support = np.concatenate([a, b])
    fa = np.searchsorted(a, support, side="right") / a.size
    fb = np.searchsorted(b, support, side="right") / b.size
    return float(np.abs(fa - fb).max())


# ---------------------------------------------------------------------------
# campaigns


def exp_invariant_suite(cfg: ExperimentConfig, tamper=None) -> StatReport:
    """Structural validation plus corner-bound sweep; zero violations to pass.

    ``tamper``, when given, maps each constructed map to a corrupted copy
    before validation. It exists for fault-injection tests of the reporting
    path and must stay None in real campaigns.
    """
    thr = cfg.thresholds("invariant-suite")
    budget = int(thr.pop("pair_budget", LEMMA31_PAIR_BUDGET))
    rows = []
    for pi, p in enumerate(cfg.p_values):
        for ni, n in enumerate(cfg.n_values):
            phase = pi * len(cfg.n_values) + ni
            bad_checks = 0
            bad_pairs = 0
            pairs = 0
            variant = ""
            for k in range(cfg.samples):
                rng = _replica_stream(cfg, phase, k)
                built, mobile, variant = _draw_map(p, n, rng)
                if tamper is not None:
                    built = tamper(built)
                verdict = validate_map(built, mobile)
                bad_checks += sum(1 for okay in verdict.checks.values() if not okay)
                lemma = verify_lemma31(built, map_contour(built, mobile), budget, rng=rng)
                bad_pairs += lemma.violations
                pairs += lemma.pairs_checked
            limit = thr.get("violations")
            rows.extend(
                [
                    StatRow(p, n, cfg.samples, cfg.seed, variant, "maps_checked", float(cfg.samples)),
                    StatRow(
                        p, n, cfg.samples, cfg.seed, variant, "validation_violations",
                        float(bad_checks),
                        None if limit is None else bad_checks <= limit,
                    ),
                    StatRow(
                        p, n, cfg.samples, cfg.seed, variant, "lemma31_violations",
                        float(bad_pairs),
                        None if limit is None else bad_pairs <= limit,
                    ),
                    StatRow(p, n, cfg.samples, cfg.seed, variant, "lemma31_pairs", float(pairs)),
                ]
            )
    return _finish(StatReport("invariant-suite", cfg, tuple(rows)))


def _root_distance_samples(cfg: ExperimentConfig, p: int, n: int, phase: int):
    """Graph distances from the base vertex to one uniform vertex per map."""
    dists = np.empty(cfg.samples, dtype=np.int64)
    variant = ""
    for k in range(cfg.samples):
        rng = _replica_stream(cfg, phase, k)
        built, _, variant = _draw_map(p, n, rng)
        planar = as_planar(built)
        field_ = bfs(built, BASE_VERTEX)
        u = int(rng.generator.integers(1, planar.n_vertices))
        dists[k] = field_.dist[u]
    return dists, variant


def exp_profile_universality(cfg: ExperimentConfig) -> StatReport:
    """KS comparison of scaled root-distance laws across p.

    After multiplying by c_V(p) * n^(-1/4) the distance from the base vertex
    to a uniform vertex has a p-independent limit law; dropping the constant
    is the control and must look worse. ``ks_resolution`` rows expose the
    two-sample resolution sqrt((s_a + s_b)/(s_a s_b)) so an undersized run
    is visible in the report.
    """
    thr = cfg.thresholds("profile-universality")
    ks_limit = thr.get("ks")
    rows = []
    for ni, n in enumerate(cfg.n_values):
        scaled = {}
        plain = {}
        for pi, p in enumerate(cfg.p_values):
            phase = pi * len(cfg.n_values) + ni
            dists, variant = _root_distance_samples(cfg, p, n, phase)
            plain[p] = dists * float(n) ** -0.25
            scaled[p] = scaling_constants(p).c_V * plain[p]
            rows.append(
                StatRow(
                    p, n, cfg.samples, cfg.seed, variant,
                    "root_distance_mean_scaled", float(scaled[p].mean()),
                )
            )
        for i, pa in enumerate(cfg.p_values):
            for pb in cfg.p_values[i + 1 :]:
                ks_scaled = ks_distance(scaled[pa], scaled[pb])
                ks_plain = ks_distance(plain[pa], plain[pb])
                resolution = np.sqrt(2.0 / cfg.samples)
                rows.extend(
                    [
                        StatRow(
                            0, n, cfg.samples, cfg.seed, "", f"ks_scaled_p{pa}_p{pb}",
                            ks_scaled,
                            None if ks_limit is None else ks_scaled < ks_limit,
                        ),
                        StatRow(0, n, cfg.samples, cfg.seed, "", f"ks_plain_p{pa}_p{pb}", ks_plain),
                        StatRow(
                            0, n, cfg.samples, cfg.seed, "", f"ks_control_excess_p{pa}_p{pb}",
                            ks_plain - ks_scaled,
                            None if ks_limit is None else ks_plain > ks_scaled,
                        ),
                        StatRow(
                            0, n, cfg.samples, cfg.seed, "", f"ks_resolution_p{pa}_p{pb}",
                            float(resolution),
                        ),
                    ]
                )
    return _finish(StatReport("profile-universality", cfg, tuple(rows)))


def exp_two_point_scaling(cfg: ExperimentConfig) -> StatReport:
    """Log-log growth rate of the mean distance between two uniform vertices."""
    if cfg.n_values[-1] < 16 * cfg.n_values[0]:
        raise ValidationError("n_values must span at least four doublings")
    thr = cfg.thresholds("two-point-scaling")
    lo, hi = thr.get("slope_low"), thr.get("slope_high")
    rows = []
    for pi, p in enumerate(cfg.p_values):
        means = np.empty(len(cfg.n_values))
        variant = ""
        for ni, n in enumerate(cfg.n_values):
            phase = pi * len(cfg.n_values) + ni
            total = 0
            for k in range(cfg.samples):
                rng = _replica_stream(cfg, phase, k)
                built, _, variant = _draw_map(p, n, rng)
                total += two_point_samples(built, rng, 2)[0]
            means[ni] = total / cfg.samples
            rows.append(
                StatRow(p, n, cfg.samples, cfg.seed, variant, "two_point_mean", float(means[ni]))
            )
        fit = fit_power_law(
            cfg.n_values, means,
            rng=_replica_stream(cfg, len(cfg.p_values) * len(cfg.n_values), pi),
        )
        passed = None
        if lo is not None and hi is not None:
            passed = lo <= fit.slope <= hi
        rows.extend(
            [
                StatRow(p, 0, cfg.samples, cfg.seed, variant, "two_point_slope", fit.slope, passed),
                StatRow(p, 0, cfg.samples, cfg.seed, variant, "two_point_slope_ci_low", fit.ci_low),
                StatRow(p, 0, cfg.samples, cfg.seed, variant, "two_point_slope_ci_high", fit.ci_high),
                StatRow(p, 0, cfg.samples, cfg.seed, variant, "two_point_intercept", fit.intercept),
            ]
        )
    return _finish(StatReport("two-point-scaling", cfg, tuple(rows)))


def exp_ball_volume(cfg: ExperimentConfig) -> StatReport:
    """Ball-mass growth exponents, discrete and continuum sides in one report.

    Discrete: normalized vertex count of balls around a uniform center, radii
    taken as cfg.radii fractions of the center's eccentricity, averaged over
    maps, slope fitted in log-log. Continuum: mean near-minimum label mass
    occupation(z, r) over excursion replicas of generator size cfg.grid_m at
    the same ladder. Both slopes estimate the same dimension (4 in the limit).
    """
    thr = cfg.thresholds("ball-volume")
    lo, hi = thr.get("slope_low"), thr.get("slope_high")
    fracs = np.asarray(cfg.radii)
    cells = len(cfg.p_values) * len(cfg.n_values)
    rows = []

    def slope_rows(tag, p, n, variant, masses, fit_phase):
        # fit phases live above every replica phase so bootstrap draws never
        # replay a map replica's stream
        fit = fit_power_law(fracs, masses, rng=_replica_stream(cfg, fit_phase, 0))
        passed = None
        if lo is not None and hi is not None:
            passed = lo <= fit.slope <= hi
        return [
            StatRow(p, n, cfg.samples, cfg.seed, variant, f"ball_slope_{tag}", fit.slope, passed),
            StatRow(p, n, cfg.samples, cfg.seed, variant, f"ball_slope_{tag}_ci_low", fit.ci_low),
            StatRow(p, n, cfg.samples, cfg.seed, variant, f"ball_slope_{tag}_ci_high", fit.ci_high),
        ]

    for pi, p in enumerate(cfg.p_values):
        for ni, n in enumerate(cfg.n_values):
            phase = pi * len(cfg.n_values) + ni
            mass = np.zeros(fracs.shape[0])
            variant = ""
            for k in range(cfg.samples):
                rng = _replica_stream(cfg, phase, k)
                built, _, variant = _draw_map(p, n, rng)
                planar = as_planar(built)
                center = int(rng.generator.integers(0, planar.n_vertices))
                dist = bfs(built, center).dist
                cutoffs = fracs * int(dist.max())
                mass += (dist[None, :] <= cutoffs[:, None]).sum(axis=1) / ((p - 1) * n)
            mass /= cfg.samples
            for frac, m_r in zip(cfg.radii, mass):
                rows.append(
                    StatRow(p, n, cfg.samples, cfg.seed, variant, f"ball_mass_r{frac:g}", float(m_r))
                )
            rows.extend(slope_rows("discrete", p, n, variant, mass, cells + 1 + phase))

    generator_n = cfg.grid_m
    occ = np.zeros(fracs.shape[0])
    for k in range(cfg.samples):
        rng = _replica_stream(cfg, cells, k)
        ex = sample_labeled_excursion(2 * generator_n, rng, generator_n=generator_n)
        occ += [occupation_measure(ex.z_vals, r) for r in cfg.radii]
    occ /= cfg.samples
    for frac, m_r in zip(cfg.radii, occ):
        rows.append(
            StatRow(
                2, generator_n, cfg.samples, cfg.seed, "continuum", f"ise_mass_r{frac:g}", float(m_r)
            )
        )
    rows.extend(slope_rows("continuum", 2, generator_n, "continuum", occ, 2 * cells + 1))
    return _finish(StatReport("ball-volume", cfg, tuple(rows)))


def exp_ise_tail(cfg: ExperimentConfig) -> StatReport:
    """Tail statistic eps^(-2) P(occupation([0,eps]) >= alpha eps^2).

    The limit sends the statistic to 0 as eps shrinks, so the trend row
    (smallest-eps value minus largest-eps value) must be strictly negative
    for the default threshold. Hit counts are reported per rung because the
    smallest eps is the first to starve.
    """
    if len(cfg.radii) < 2:
        raise ValidationError("ise tail needs at least two ladder rungs")
    thr = cfg.thresholds("ise-tail")
    alpha = float(thr.get("alpha", 1.0))
    trend_limit = thr.get("trend")
    ladder = np.asarray(sorted(cfg.radii, reverse=True))
    generator_n = cfg.grid_m
    hits = np.zeros(ladder.shape[0], dtype=np.int64)
    for k in range(cfg.samples):
        rng = _replica_stream(cfg, 0, k)
        ex = sample_labeled_excursion(2 * generator_n, rng, generator_n=generator_n)
        for j, eps in enumerate(ladder):
            if occupation_measure(ex.z_vals, float(eps)) >= alpha * eps * eps:
                hits[j] += 1
    stats = hits / cfg.samples / ladder**2
    rows = []
    for eps, stat, count in zip(ladder, stats, hits):
        rows.append(
            StatRow(
                2, generator_n, cfg.samples, cfg.seed, "continuum",
                f"ise_tail_eps{eps:g}", float(stat),
            )
        )
        rows.append(
            StatRow(
                2, generator_n, cfg.samples, cfg.seed, "continuum",
                f"ise_tail_hits_eps{eps:g}", float(count),
            )
        )
    trend = float(stats[-1] - stats[0])
    rows.extend(
        [
            StatRow(
                2, generator_n, cfg.samples, cfg.seed, "continuum", "ise_tail_trend",
                trend, None if trend_limit is None else trend < trend_limit,
            ),
            StatRow(
                2, generator_n, cfg.samples, cfg.seed, "continuum", "ise_tail_underpowered",
                float(int(hits[-1]) < 10),
            ),
        ]
    )
    return _finish(StatReport("ise-tail", cfg, tuple(rows)))


def exp_conjecture_gap(cfg: ExperimentConfig) -> StatReport:
    """Distribution of the chain-closure excess over true graph distances.

    Per map, the corner-bound closure over a grid of cfg.grid_m + 1 contour
    positions is compared with BFS distances; the rescaled differences pool
    across samples into quantile rows. Exploratory only, no thresholds.
    """
    rows = []
    for pi, p in enumerate(cfg.p_values):
        scale_const = scaling_constants(p).c_V
        for ni, n in enumerate(cfg.n_values):
            phase = pi * len(cfg.n_values) + ni
            pooled = []
            root_pooled = []
            variant = ""
            for k in range(cfg.samples):
                rng = _replica_stream(cfg, phase, k)
                built, mobile, variant = _draw_map(p, n, rng)
                c = map_contour(built, mobile)
                gs = grid_sample(built, c, cfg.grid_m)
                closure = discrete_dstar(c, gs.indices)
                gap = scale_const * float(n) ** -0.25 * closure - gs.dist_matrix
                iu = np.triu_indices_from(gap, k=1)
                pooled.append(gap[iu])
                root_pooled.append(gap[0, 1:])
            pooled = np.concatenate(pooled)
            root_pooled = np.concatenate(root_pooled)
            stats = {
                "gap_min": float(pooled.min()),
                "gap_median": float(np.median(pooled)),
                "gap_p90": float(np.quantile(pooled, 0.9)),
                "gap_max": float(pooled.max()),
                "root_gap_max": float(root_pooled.max()),
            }
            rows.extend(
                StatRow(p, n, cfg.samples, cfg.seed, variant, stat, value)
                for stat, value in stats.items()
            )
    return _finish(StatReport("conjecture-gap", cfg, tuple(rows)))
