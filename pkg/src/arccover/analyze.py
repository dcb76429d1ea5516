"""Statistics over trials: phase scans and box-dimension estimates.

The phase scan sweeps the constant c in ell(n) = c ln(n)/n and measures
the empirical probability that the target is eventually covered, next to
the two analytic thresholds: no covering below the target's Hausdorff
dimension, covering above its upper box dimension plus one.  The band in
between is reported as "theorem-silent": the scan still shows fractions
there but asserts nothing.

Box-counting dimension is used as a numerical proxy for Hausdorff
dimension.  Box >= Hausdorff always, so an estimate clearly BELOW the
analytic floor dim_H - delta is a red flag, while an estimate above it is
merely consistent.  The slope is fitted through the origin (the model is
ln N = d * ln(1/eps), i.e. N = eps^-d): with an intercept the fit would
measure only the increment of ln N across the window, which for a finite
union of tiny pieces saturates and says nothing about the scaling law.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .lengths import LogOverN
from .simulate import TrialConfig, _run_trial_impl
from .targets import TargetSet, make_circle
from .torus import IntervalUnion, measure

_SNAP = 1e-9  # cell-index snap, in units of one cell


def run_trial_with_tail(cfg: TrialConfig, tail_checkpoints: int):
    """One pass returning both the trace and the tail uncovered union."""
    n_cp = cfg.checkpoints().size
    tail = max(1, min(int(tail_checkpoints), n_cp))
    return _run_trial_impl(cfg, collect_tail=tail)


def occupied_cell_count(u: IntervalUnion, eps: float) -> int:
    """Number of grid cells [j*eps, (j+1)*eps) meeting the closed set u.

    Cell indices are snapped by 1e-9 of a cell so that endpoints sitting
    on a cell boundary up to float rounding do not spill into a spurious
    neighbor cell.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError(f"scale must be in (0, 1), got {eps}")
    total = 0
    j0 = j1 = None
    if u.los.size:
        j0 = np.floor(u.los / eps + _SNAP).astype(np.int64)
        j1 = np.floor(u.his / eps - _SNAP).astype(np.int64)
        j1 = np.maximum(j1, j0)  # a piece always occupies at least one cell
        prev = np.concatenate(([-1], j1[:-1]))
        contrib = j1 - np.maximum(j0, prev + 1) + 1
        total += int(np.clip(contrib, 0, None).sum())
    if u.points.size:
        pc = np.unique(np.floor(u.points / eps + _SNAP).astype(np.int64))
        if j0 is not None:
            idx = np.searchsorted(j0, pc, side="right") - 1
            inside = (idx >= 0) & (pc <= j1[np.maximum(idx, 0)])
            pc = pc[~inside]
        total += int(pc.size)
    return total


@dataclass(frozen=True)
class DimensionEstimate:
    """Box counts over a decreasing scale ladder and the fitted exponent."""

    scales: np.ndarray
    counts: np.ndarray
    slope: float
    r_squared: float
    degenerate: bool = False

    def __post_init__(self):
        if np.any(np.diff(self.scales) >= 0):
            raise ValueError("scales must be strictly decreasing")
        if np.any(np.diff(self.counts) < 0):
            raise ValueError("box counts must be non-decreasing as the scale shrinks")


def box_dimension(u: IntervalUnion, scales) -> DimensionEstimate:
    """Grid box-counting estimate of the dimension of u.

    Fits ln N = slope * ln(1/eps) by least squares through the origin;
    r_squared is the uncentered coefficient for that model.  An empty set
    yields slope 0 flagged degenerate rather than an error.  Use nested
    scales (each a multiple of the next) so counts are provably monotone.
    """
    eps = np.asarray(sorted(set(float(s) for s in scales), reverse=True))
    if eps.size < 3:
        raise ValueError(f"need at least 3 distinct scales, got {eps.size}")
    if np.any(eps <= 0.0) or np.any(eps >= 1.0):
        raise ValueError("scales must lie in (0, 1)")
    if u.is_empty():
        return DimensionEstimate(scales=eps, counts=np.zeros(eps.size, dtype=np.int64),
                                 slope=0.0, r_squared=0.0, degenerate=True)
    counts = np.array([occupied_cell_count(u, e) for e in eps], dtype=np.int64)
    x = np.log(1.0 / eps)
    y = np.log(counts.astype(np.float64))
    slope = float(np.dot(x, y) / np.dot(x, x))
    ss_res = float(np.sum((y - slope * x) ** 2))
    ss_tot = float(np.sum(y ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DimensionEstimate(scales=eps, counts=counts, slope=slope, r_squared=r2)


def nested_scales(eps_fine: float, eps_coarse: float, factor: int = 2) -> np.ndarray:
    """Decreasing ladder eps_fine * factor**k staying <= eps_coarse.

    Anchored at the fine end, which is the informative resolution of the
    window.  Integer subdivision keeps the grids nested, so box counts
    cannot wobble downward between consecutive scales.
    """
    if not (0.0 < eps_fine < eps_coarse < 1.0):
        raise ValueError("need 0 < eps_fine < eps_coarse < 1")
    if factor < 2:
        raise ValueError("factor must be >= 2")
    k_max = int(math.floor(math.log(eps_coarse / eps_fine) / math.log(factor)))
    if k_max < 2:
        raise ValueError("scale window too narrow for 3 nested scales")
    return eps_fine * np.power(float(factor), np.arange(k_max, -1, -1))


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple:
    """Wilson score interval for a binomial fraction."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class ScanRow:
    c: float
    trials: int
    eventually_covered_fraction: float
    wilson_low: float
    wilson_high: float
    mean_last_failure_n: float | None
    mean_tail_uncovered_measure: float
    regime: str


@dataclass(frozen=True)
class ScanResult:
    """Phase-scan output: per-c coverage statistics plus full provenance.

    `failed` maps c-values whose trials could not run (e.g. a scale-guard
    violation at small c) to the error message; `rows` holds the cells
    that completed, so a partially valid scan still yields its results.
    """

    rows: tuple
    failed: dict
    target_description: str
    dim_H: float | None
    dim_B_upper: float
    cover_threshold: float  # dim_B_upper + 1
    n_max: int
    seed0: int
    trials_per_c: int
    checkpoint_ratio: float
    n_first_checkpoint: int
    tail_checkpoints: int
    c_star: float | None
    c_star_uncertainty: float | None
    monotone_fractions: bool

    def fractions(self) -> np.ndarray:
        return np.array([r.eventually_covered_fraction for r in self.rows])

    def checkpoints(self) -> np.ndarray:
        from .simulate import checkpoint_grid
        return checkpoint_grid(self.n_first_checkpoint, self.checkpoint_ratio,
                               self.n_max)

    def to_dict(self) -> dict:
        return {
            "rows": [asdict(r) for r in self.rows],
            "failed": dict(self.failed),
            "checkpoints": self.checkpoints().tolist(),
            "target": self.target_description,
            "dim_H": self.dim_H,
            "dim_B_upper": self.dim_B_upper,
            "cover_threshold": self.cover_threshold,
            "n_max": self.n_max,
            "seed0": self.seed0,
            "trials_per_c": self.trials_per_c,
            "checkpoint_ratio": self.checkpoint_ratio,
            "n_first_checkpoint": self.n_first_checkpoint,
            "tail_checkpoints": self.tail_checkpoints,
            "c_star": self.c_star,
            "c_star_uncertainty": self.c_star_uncertainty,
            "monotone_fractions": self.monotone_fractions,
        }


def classify_regime(c: float, target: TargetSet) -> str:
    """Which side of the analytic thresholds a given c falls on."""
    if c > target.dim_B_upper + 1.0:
        return "cover"
    if target.dim_H is not None and c < target.dim_H:
        return "no-cover"
    return "theorem-silent"


def _scan_cell(args):
    cfg, tail = args
    c = float(cfg.lengths.c)
    try:
        trace, tail_union = _run_trial_impl(cfg, collect_tail=tail)
    except ValueError as exc:
        # e.g. the pre-fractal scale guard, which depends on c through
        # ell(n_max): report per cell so the scan can emit partial results
        return (c, cfg.seed, "error", str(exc), None, None)
    return (c, cfg.seed, "ok", trace.eventually_covered,
            trace.last_failure_n, measure(tail_union))


def phase_scan(c_grid, base_cfg: TrialConfig, trials_per_c: int, *,
               jobs: int = 1, tail_checkpoints: int = 5) -> ScanResult:
    """Coverage-probability curve over c for lengths logn:c.

    Runs trials_per_c trials per c with seeds base_cfg.seed + 0, 1, ...;
    base_cfg supplies the target, horizon and checkpoint grid (its
    `lengths` is replaced per cell).  Cells are independent, so they can
    run in any number of worker processes; results are reduced by key and
    sorted, which makes the output independent of `jobs`.
    """
    cs = [float(c) for c in c_grid]
    if len(cs) == 0 or any(b <= a for a, b in zip(cs, cs[1:])) or cs[0] <= 0:
        raise ValueError("c_grid must be positive and strictly increasing")
    if trials_per_c < 1:
        raise ValueError("trials_per_c must be >= 1")
    n_cp = base_cfg.checkpoints().size
    tail = max(1, min(int(tail_checkpoints), n_cp))
    seed0 = int(base_cfg.seed)

    cells = [(replace(base_cfg, seed=seed0 + t, lengths=LogOverN(c)), tail)
             for c in cs for t in range(trials_per_c)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_scan_cell, cells, chunksize=8))
    else:
        raw = [_scan_cell(cell) for cell in cells]
    raw.sort(key=lambda rec: (rec[0], rec[1]))

    target = base_cfg.target
    rows = []
    failed = {}
    for i, c in enumerate(cs):
        recs = raw[i * trials_per_c:(i + 1) * trials_per_c]
        errors = [r for r in recs if r[2] == "error"]
        if errors:
            failed[c] = errors[0][3]
            continue
        cov = [r[3] for r in recs]
        fails = [r[4] for r in recs if r[4] is not None]
        tails = [r[5] for r in recs]
        frac = sum(cov) / len(cov)
        lo, hi = wilson_interval(sum(cov), len(cov))
        rows.append(ScanRow(
            c=c,
            trials=len(recs),
            eventually_covered_fraction=frac,
            wilson_low=lo,
            wilson_high=hi,
            mean_last_failure_n=float(np.mean(fails)) if fails else None,
            mean_tail_uncovered_measure=float(np.mean(tails)),
            regime=classify_regime(c, target),
        ))
    if not rows:
        raise ValueError(f"every scan cell failed; first error: "
                         f"{next(iter(failed.values()))}")

    ok_cs = [r.c for r in rows]
    fracs = np.array([r.eventually_covered_fraction for r in rows])
    c_star = c_star_unc = None
    if len(ok_cs) >= 2:
        jumps = np.diff(fracs)
        if np.any(jumps != 0.0):
            j = int(np.argmax(jumps))
            c_star = 0.5 * (ok_cs[j] + ok_cs[j + 1])
            c_star_unc = ok_cs[j + 1] - ok_cs[j]
    return ScanResult(
        rows=tuple(rows),
        failed=failed,
        target_description=target.description,
        dim_H=target.dim_H,
        dim_B_upper=target.dim_B_upper,
        cover_threshold=target.dim_B_upper + 1.0,
        n_max=base_cfg.n_max,
        seed0=seed0,
        trials_per_c=trials_per_c,
        checkpoint_ratio=base_cfg.checkpoint_ratio,
        n_first_checkpoint=base_cfg.n_first_checkpoint,
        tail_checkpoints=tail,
        c_star=c_star,
        c_star_uncertainty=c_star_unc,
        monotone_fractions=bool(np.all(np.diff(fracs) >= 0.0)),
    )


@dataclass(frozen=True)
class DimensionScan:
    """Per-seed dimension estimates of the tail uncovered set."""

    c: float
    n_max: int
    seeds: tuple
    estimates: tuple
    analytic_floor: float | None  # dim_H(target) - c, when dim_H is known
    floor_vacuous: bool
    mean_slope: float
    n_degenerate: int


def _dims_cell(args):
    cfg, tail, scales = args
    _, tail_union = _run_trial_impl(cfg, collect_tail=tail)
    return cfg.seed, box_dimension(tail_union, scales)


def uncovered_dimension_experiment(c: float, n_max: int, seeds, *,
                                   target: TargetSet | None = None,
                                   tail_checkpoints: int = 1,
                                   checkpoint_ratio: float = 1.1,
                                   n_first_checkpoint: int = 64,
                                   jobs: int = 1) -> DimensionScan:
    """Box-dimension estimates of what stays uncovered at the horizon.

    Scales span [ell(n_max), sqrt(ell(n_max))]: below ell(n_max) each
    uncovered piece resolves into an interval (slope drifts to 1), above
    the square root the counts saturate.  The analytic floor dim_H - c is
    reported for comparison; when it is <= 0 the bound is vacuous and the
    experiment is exploratory only.  Seeds with nothing uncovered in the
    tail window produce degenerate slope-0 estimates, not errors.
    """
    if target is None:
        target = make_circle()
    rule = LogOverN(c)
    eps_fine = float(rule.ell(n_max))
    scales = nested_scales(eps_fine, math.sqrt(eps_fine))
    seeds = [int(s) for s in seeds]
    cells = [(TrialConfig(seed=s, lengths=rule, target=target, n_max=int(n_max),
                          checkpoint_ratio=checkpoint_ratio,
                          n_first_checkpoint=n_first_checkpoint), tail_checkpoints, scales)
             for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_dims_cell, cells))
    else:
        raw = [_dims_cell(cell) for cell in cells]
    raw.sort(key=lambda rec: rec[0])
    estimates = tuple(est for _, est in raw)
    floor = None if target.dim_H is None else target.dim_H - c
    return DimensionScan(
        c=float(c),
        n_max=int(n_max),
        seeds=tuple(s for s, _ in raw),
        estimates=estimates,
        analytic_floor=floor,
        floor_vacuous=(floor is None or floor <= 0.0),
        mean_slope=float(np.mean([e.slope for e in estimates])),
        n_degenerate=sum(1 for e in estimates if e.degenerate),
    )
