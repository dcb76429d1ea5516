"""Seeded trials of the shrinking-radius random covering process.

One trial drops i.i.d. uniform centers w_1, w_2, ... on the circle and,
at geometrically spaced checkpoints n, asks whether the target is inside
E_n = union of the n arcs of CURRENT half-width ell(n)/2 centered at
w_1..w_n.  Because the radius shrinks with n, E_n is not nested in n: a
point covered at one checkpoint can be exposed later.  "Eventually
covered" therefore means covered at every checkpoint from a tail-start
index (default: the checkpoint nearest sqrt(n_max)) up to the horizon,
and is an irreducible finite-horizon proxy for the almost-sure event,
which quantifies over all n beyond some N.  The checkpoint grid is part
of the trace so results are interpretable on the grid they were checked
on; checking every n would cost Theta(n_max^2).

Coverage at a checkpoint is decided exactly through the sorted-gap
characterization: with the n centers sorted, a circular gap g between
consecutive centers leaves the middle piece of length g - ell uncovered
iff g > ell.  This equals complement(arcs_to_union(...)) piece for piece
(same float arithmetic), but costs O(n) per checkpoint.

Randomness comes from numpy's counter-based Philox generator, one stream
per 64-bit seed, so trials are reproducible, prefix-stable (the first m
draws do not depend on how many are requested) and embarrassingly
parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lengths import LengthSequence
from .targets import TargetSet
from .torus import EMPTY, MERGE_EPS, IntervalUnion, intersect, measure, union

PRNG_NAME = "numpy.random.Philox"
PRNG_VERSION = np.__version__


class ConfigError(ValueError):
    """Invalid experiment configuration; `field` names the offender."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def sample_centers(seed: int, n: int) -> np.ndarray:
    """The first n uniform centers of the stream keyed by `seed`.

    Deterministic, and prefix-stable: sample_centers(seed, m) is a prefix
    of sample_centers(seed, n) for m <= n.
    """
    if not (0 <= int(seed) < 2 ** 64):
        raise ConfigError("seed", f"must be a 64-bit unsigned integer, got {seed}")
    if n < 1:
        raise ConfigError("n", f"must be >= 1, got {n}")
    gen = np.random.Generator(np.random.Philox(key=int(seed)))
    return gen.random(int(n))


def checkpoint_grid(n_first: int, ratio: float, n_max: int) -> np.ndarray:
    """Geometric checkpoint grid from n_first to n_max inclusive."""
    grid = [n_first]
    cur = n_first
    while cur < n_max:
        cur = min(max(cur + 1, int(round(cur * ratio))), n_max)
        grid.append(cur)
    return np.asarray(grid, dtype=np.int64)


def max_circular_gap(centers: np.ndarray) -> float:
    """Largest spacing between circularly consecutive centers."""
    cs = np.sort(np.asarray(centers, dtype=np.float64))
    wrap = cs[0] + 1.0 - cs[-1]
    if cs.size == 1:
        return float(wrap)
    return float(max(np.max(np.diff(cs)), wrap))


def uncovered_at(centers_sorted, ell: float) -> IntervalUnion:
    """Complement of the union of arcs of length `ell` at the given centers.

    Centers must be sorted ascending.  Exactly mirrors the arithmetic of
    complement(arcs_to_union(...)) so the two routes agree bitwise away
    from merge-tolerance ties.
    """
    cs = np.asarray(centers_sorted, dtype=np.float64)
    if cs.size < 1:
        raise ValueError("uncovered_at needs at least one center")
    if not (0.0 < ell < 1.0):
        raise ValueError(f"arc length must be in (0, 1), got {ell}")
    r = 0.5 * ell
    ends = cs[:-1] + r
    starts = cs[1:] - r
    keep = starts > ends + MERGE_EPS
    los = [ends[keep]]
    his = [starts[keep]]
    pre_lo = pre_hi = post_lo = post_hi = None
    if (cs[0] + 1.0 - cs[-1]) - ell > MERGE_EPS:
        l = cs[0] - r
        h = cs[-1] + r
        if l < 0.0:
            post_lo, post_hi = h, l + 1.0
        elif h > 1.0:
            pre_lo, pre_hi = h - 1.0, l
        else:
            if l > 0.0:
                pre_lo, pre_hi = 0.0, l
            if h < 1.0:
                post_lo, post_hi = h, 1.0
    if pre_lo is not None:
        los.insert(0, np.array([pre_lo]))
        his.insert(0, np.array([pre_hi]))
    if post_lo is not None:
        los.append(np.array([post_lo]))
        his.append(np.array([post_hi]))
    return IntervalUnion._from_sorted(np.concatenate(los), np.concatenate(his))


@dataclass(frozen=True)
class TrialConfig:
    """Everything one trial needs; identical configs give identical traces."""

    seed: int
    lengths: LengthSequence | None
    target: TargetSet
    n_max: int
    checkpoint_ratio: float = 1.1
    n_first_checkpoint: int = 64
    n_tail_start: int | None = None  # default: nearest checkpoint to sqrt(n_max)

    def __post_init__(self):
        if not (0 <= int(self.seed) < 2 ** 64):
            raise ConfigError("seed", f"must be a 64-bit unsigned integer, got {self.seed}")
        if self.n_first_checkpoint < 1:
            raise ConfigError("n_first_checkpoint", f"must be >= 1, got {self.n_first_checkpoint}")
        if self.n_max < self.n_first_checkpoint:
            raise ConfigError("n_max", f"must be >= n_first_checkpoint, got "
                              f"{self.n_max} < {self.n_first_checkpoint}")
        if not self.checkpoint_ratio > 1.0:
            raise ConfigError("checkpoint_ratio", f"must be > 1, got {self.checkpoint_ratio}")
        if self.n_tail_start is not None and not (
                self.n_first_checkpoint <= self.n_tail_start <= self.n_max):
            raise ConfigError("n_tail_start", "must lie between n_first_checkpoint and n_max")

    def checkpoints(self) -> np.ndarray:
        return checkpoint_grid(self.n_first_checkpoint, self.checkpoint_ratio, self.n_max)

    def validate_scales(self) -> None:
        """Pre-fractal guard: the horizon arc length must stay well above
        the target's finest constructed scale."""
        if self.lengths is None:
            raise ConfigError("lengths", "no length sequence configured")
        if self.target.finest_scale > 0.0:
            ell_end = float(self.lengths.ell(self.n_max))
            bound = 10.0 * self.target.finest_scale
            if ell_end <= bound:
                raise ConfigError(
                    "target",
                    f"pre-fractal too coarse for this horizon: ell(n_max)="
                    f"{ell_end:.3g} <= 10 * finest_scale = {bound:.3g}; "
                    "reduce n_max or increase depth")


@dataclass(frozen=True)
class CoverageTrace:
    """Per-checkpoint record of one trial plus tail summary."""

    seed: int
    n_max: int
    checkpoints: np.ndarray
    ells: np.ndarray
    covered: np.ndarray
    uncovered_measure: np.ndarray
    piece_count: np.ndarray
    n_tail_start: int
    last_failure_n: int | None
    eventually_covered: bool

    def __eq__(self, other):
        if not isinstance(other, CoverageTrace):
            return NotImplemented
        return (self.seed == other.seed and self.n_max == other.n_max
                and np.array_equal(self.checkpoints, other.checkpoints)
                and np.array_equal(self.ells, other.ells)
                and np.array_equal(self.covered, other.covered)
                and np.array_equal(self.uncovered_measure, other.uncovered_measure)
                and np.array_equal(self.piece_count, other.piece_count)
                and self.n_tail_start == other.n_tail_start
                and self.last_failure_n == other.last_failure_n
                and self.eventually_covered == other.eventually_covered)


def run_trial(cfg: TrialConfig) -> CoverageTrace:
    trace, _ = _run_trial_impl(cfg, collect_tail=0)
    return trace


def tail_uncovered(cfg: TrialConfig, tail_checkpoints: int) -> IntervalUnion:
    """Union of the target's uncovered residues over the last checkpoints.

    With tail_checkpoints = 1 this is exactly (target minus E_{n_max}).
    The union grows with the window, and is a one-sided finite-horizon
    approximation (from below) of the never-eventually-covered set, which
    the process only defines through all n at once.
    """
    n_checkpoints = cfg.checkpoints().size
    if not (1 <= tail_checkpoints <= n_checkpoints):
        raise ConfigError("tail_checkpoints",
                          f"must be in [1, {n_checkpoints}], got {tail_checkpoints}")
    _, tail = _run_trial_impl(cfg, collect_tail=tail_checkpoints)
    return tail


def _run_trial_impl(cfg: TrialConfig, collect_tail: int):
    cfg.validate_scales()
    grid = cfg.checkpoints()
    ells = cfg.lengths.ell(grid.astype(np.float64))
    ells = np.atleast_1d(ells)
    centers = sample_centers(cfg.seed, cfg.n_max)

    target = cfg.target
    t_approx = target.approx
    is_circle = target.kind == "circle"

    covered = np.zeros(grid.size, dtype=bool)
    unc_measure = np.zeros(grid.size, dtype=np.float64)
    pieces = np.zeros(grid.size, dtype=np.int64)
    tail_residues = []

    sorted_prefix = np.sort(centers[:grid[0]])
    prev = int(grid[0])
    for i, n in enumerate(grid):
        n = int(n)
        if n > prev:
            fresh = np.sort(centers[prev:n])
            at = np.searchsorted(sorted_prefix, fresh)
            sorted_prefix = np.insert(sorted_prefix, at, fresh)
            prev = n
        gaps = uncovered_at(sorted_prefix, float(ells[i]))
        # intersect keeps target points only when strictly inside a gap,
        # so an empty residue is exactly "target inside the closed E_n"
        resid = gaps if is_circle else intersect(t_approx, gaps)
        covered[i] = resid.los.size == 0 and resid.points.size == 0
        unc_measure[i] = measure(resid)
        pieces[i] = resid.component_count()
        if collect_tail and i >= grid.size - collect_tail:
            tail_residues.append(resid)

    if cfg.n_tail_start is None:
        tail_target = math.sqrt(cfg.n_max)
    else:
        tail_target = float(cfg.n_tail_start)
    tail_idx = int(np.argmin(np.abs(grid.astype(np.float64) - tail_target)))
    failures = grid[~covered]
    trace = CoverageTrace(
        seed=int(cfg.seed),
        n_max=int(cfg.n_max),
        checkpoints=grid,
        ells=ells,
        covered=covered,
        uncovered_measure=unc_measure,
        piece_count=pieces,
        n_tail_start=int(grid[tail_idx]),
        last_failure_n=int(failures[-1]) if failures.size else None,
        eventually_covered=bool(np.all(covered[tail_idx:])),
    )
    tail_union = EMPTY
    for resid in tail_residues:
        tail_union = union(tail_union, resid)
    return trace, tail_union
