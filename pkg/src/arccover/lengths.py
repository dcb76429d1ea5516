"""Arc-length sequences and their covering diagnostics.

A length sequence assigns each placement index n an arc length ell(n) in
(0, 1), non-increasing in n.  The diagnostics computed here are finite
proxies for asymptotic quantities and every result is tied to the range
it was sampled on:

* delta  = liminf of n * ell(n) / ln n, approximated by the minimum over
  a log-spaced sample of a finite range;
* the covering exponent = limsup of (sum_{s<=N} ell(s)) / ln N, with the
  partial sum accumulated term by term (never sampled), approximated by
  the maximum over a log-spaced set of N;
* partial sums of the covering series (1/ell_n)^beta * exp(-n d ell_n)
  and of the classical Shepp series n^-2 * exp(ell_1 + ... + ell_n),
  with three-valued convergence verdicts (convergent / divergent /
  inconclusive) so we never overclaim near a boundary.

Block sequences freeze the length on blocks (n_k, n_{k+1}] at the value
taken at the block end; their partial sums are evaluated in closed form
so schedules reaching 1e15 stay cheap and exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CLAMP_MAX = 1.0 - 1e-9
MAX_EXACT_N = 2 ** 53  # beyond this, integer indices are not float-exact
_CHUNK = 1_000_000


class LengthSequenceError(ValueError):
    pass


class ScheduleError(RuntimeError):
    """Raised when no admissible schedule index exists below the cap."""


class LengthSequence:
    """Base class: a rule n -> ell(n), vectorized over integer arrays."""

    clamped = False

    def ell(self, n):
        ns, scalar = _as_index_array(n)
        out = self._ell(ns)
        return float(out[0]) if scalar else out

    def _ell(self, ns: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def partial_sums(self, ns) -> np.ndarray:
        """Exact prefix sums sum_{s<=n} ell(s) at the given sorted indices."""
        ns, scalar = _as_index_array(ns)
        if np.any(np.diff(ns) <= 0):
            raise LengthSequenceError("partial_sums wants strictly increasing indices")
        out = self._partial_sums(ns)
        return float(out[0]) if scalar else out

    def _partial_sums(self, ns: np.ndarray) -> np.ndarray:
        top = int(ns[-1])
        if top > 100_000_000:
            raise LengthSequenceError(
                f"term-by-term prefix sum to N={top} is too large; "
                "use a block sequence (closed form) or a smaller range")
        sums = np.empty(ns.size, dtype=np.float64)
        total = 0.0
        filled = 0
        for start in range(1, top + 1, _CHUNK):
            stop = min(start + _CHUNK - 1, top)
            chunk = self._ell(np.arange(start, stop + 1, dtype=np.float64))
            csum = np.cumsum(chunk)
            while filled < ns.size and ns[filled] <= stop:
                sums[filled] = total + csum[int(ns[filled]) - start]
                filled += 1
            total += float(csum[-1])
        return sums

    def describe(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.describe()})"


def _as_index_array(n):
    scalar = np.isscalar(n) or getattr(n, "ndim", 1) == 0
    ns = np.asarray(n, dtype=np.float64).reshape(-1)
    if ns.size == 0:
        return ns, False
    if np.any(ns < 1):
        raise LengthSequenceError("length sequence index must be >= 1")
    if np.any(ns > MAX_EXACT_N):
        raise LengthSequenceError(
            "index exceeds the float-exact integer range (2**53); refusing to "
            "evaluate silently")
    return ns, scalar


@dataclass(frozen=True, repr=False)
class LogOverN(LengthSequence):
    """ell(n) = c * ln(n) / n for n >= 2, with ell(1) = ell(2).

    Values are clamped below 1 (flagged via `clamped`) so large c stays
    admissible.  Note ln(n)/n rises from n=2 to n=3 before decaying; the
    sequence is non-increasing from n=3 on.
    """

    c: float

    def __post_init__(self):
        if self.c <= 0:
            raise LengthSequenceError(f"logn rule needs c > 0, got {self.c}")

    @property
    def clamped(self) -> bool:
        return self.c * math.log(3.0) / 3.0 >= CLAMP_MAX

    def _ell(self, ns):
        m = np.maximum(ns, 2.0)
        return np.minimum(self.c * np.log(m) / m, CLAMP_MAX)

    def describe(self):
        return f"logn:{self.c:g}"


@dataclass(frozen=True, repr=False)
class Harmonic(LengthSequence):
    """ell(n) = c / n, clamped below 1 so c >= 1 is usable."""

    c: float

    def __post_init__(self):
        if self.c <= 0:
            raise LengthSequenceError(f"harmonic rule needs c > 0, got {self.c}")

    @property
    def clamped(self) -> bool:
        return self.c >= CLAMP_MAX

    def _ell(self, ns):
        return np.minimum(self.c / ns, CLAMP_MAX)

    def describe(self):
        return f"harmonic:{self.c:g}"


@dataclass(frozen=True, repr=False)
class PowerLaw(LengthSequence):
    """ell(n) = c * n**(-gamma) with gamma > 0, clamped below 1."""

    c: float
    gamma: float

    def __post_init__(self):
        if self.c <= 0:
            raise LengthSequenceError(f"power rule needs c > 0, got {self.c}")
        if self.gamma <= 0:
            raise LengthSequenceError(
                f"power rule needs gamma > 0 to be non-increasing, got {self.gamma}")

    @property
    def clamped(self) -> bool:
        return self.c >= CLAMP_MAX

    def _ell(self, ns):
        return np.minimum(self.c * ns ** (-self.gamma), CLAMP_MAX)

    def describe(self):
        return f"power:{self.c:g}:{self.gamma:g}"


@dataclass(frozen=True, repr=False)
class TableSequence(LengthSequence):
    """Explicit table of lengths; defined for 1 <= n <= len(values)."""

    values: tuple

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.size == 0:
            raise LengthSequenceError("table sequence needs at least one value")
        if np.any(vals <= 0.0) or np.any(vals >= 1.0):
            raise LengthSequenceError("table values must lie in (0, 1)")
        if np.any(np.diff(vals) > 0.0):
            raise LengthSequenceError("table values must be non-increasing")
        object.__setattr__(self, "values", tuple(float(v) for v in vals))

    def _ell(self, ns):
        if np.any(ns > len(self.values)):
            raise LengthSequenceError(
                f"table sequence defined only up to n={len(self.values)}")
        vals = np.asarray(self.values)
        return vals[ns.astype(np.int64) - 1]

    def describe(self):
        return f"table[{len(self.values)}]"


@dataclass(frozen=True)
class Schedule:
    """Strictly increasing block boundaries n_1 < n_2 < ..., n_1 >= 2."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(idx) == 0:
            raise LengthSequenceError("schedule needs at least one index")
        if idx[0] < 2:
            raise LengthSequenceError("schedule must start at n_1 >= 2")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise LengthSequenceError("schedule indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True, repr=False)
class BlockSequence(LengthSequence):
    """Blockwise-constant sequence: ell'(s) = base.ell(n_{k+1}) on (n_k, n_{k+1}].

    The convention n_0 = 0 makes the first block (0, n_1].  Beyond the last
    scheduled index the base sequence is used unchanged, which keeps
    ell'(s) <= ell(s) everywhere.
    """

    base: LengthSequence
    schedule: Schedule

    def _ell(self, ns):
        idx = np.asarray(self.schedule.indices, dtype=np.float64)
        pos = np.searchsorted(idx, ns, side="left")
        out = np.empty(ns.size, dtype=np.float64)
        inside = pos < idx.size
        if np.any(inside):
            out[inside] = self.base._ell(idx[pos[inside]])
        if np.any(~inside):
            out[~inside] = self.base._ell(ns[~inside])
        return out

    def _partial_sums(self, ns):
        idx = np.asarray(self.schedule.indices, dtype=np.float64)
        ends = self.base._ell(idx)
        widths = np.diff(np.concatenate(([0.0], idx)))
        block_cum = np.concatenate(([0.0], np.cumsum(widths * ends)))
        pos = np.searchsorted(idx, ns, side="left")
        out = np.empty(ns.size, dtype=np.float64)
        inside = pos < idx.size
        if np.any(inside):
            p = pos[inside]
            prev_end = np.concatenate(([0.0], idx))[p]
            out[inside] = block_cum[p] + (ns[inside] - prev_end) * ends[p]
        if np.any(~inside):
            # beyond the schedule: closed form up to n_K, then term-by-term
            tail_ns = ns[~inside]
            base_tail = LengthSequence._partial_sums(self.base, tail_ns)
            base_at_end = LengthSequence._partial_sums(
                self.base, np.asarray([idx[-1]]))[0]
            out[~inside] = block_cum[-1] + (base_tail - base_at_end)
        return out

    def describe(self):
        return f"block({self.base.describe()}, K={len(self.schedule)})"


def block_sequence(base: LengthSequence, schedule: Schedule) -> BlockSequence:
    return BlockSequence(base, schedule)


def eval_length(rule: LengthSequence, n):
    """ell(n) for one index or an array of indices."""
    return rule.ell(n)


def _log_sample(n_lo: int, n_hi: int, count: int) -> np.ndarray:
    grid = np.geomspace(n_lo, n_hi, num=count)
    grid = np.unique(np.round(grid).astype(np.int64))
    grid = grid[(grid >= n_lo) & (grid <= n_hi)]
    if grid.size == 0 or grid[0] != n_lo:
        grid = np.concatenate(([n_lo], grid))
    if grid[-1] != n_hi:
        grid = np.concatenate((grid, [n_hi]))
    return grid


def estimate_delta(rule: LengthSequence, n_range: tuple, samples: int = 512) -> float:
    """Minimum of n * ell(n) / ln n over a log-spaced sample of [n_lo, n_hi].

    A finite proxy for the liminf; exact for rules whose ratio is
    eventually monotone, since both endpoints are always sampled.
    """
    n_lo, n_hi = int(n_range[0]), int(n_range[1])
    if not (2 <= n_lo < n_hi):
        raise LengthSequenceError(f"need 2 <= n_lo < n_hi, got {n_range}")
    grid = _log_sample(n_lo, n_hi, samples)
    ns = grid.astype(np.float64)
    ratios = ns * rule._ell(ns) / np.log(ns)
    return float(ratios.min())


def estimate_covering_exponent(rule: LengthSequence, n_range: tuple,
                               samples: int = 64) -> float:
    """Maximum of (sum_{s<=N} ell(s)) / ln N over a log-spaced sample.

    A finite proxy for the limsup; the prefix sums are accumulated term by
    term (closed form for block sequences).  For block sequences the block
    boundaries inside the range are always included in the sample, because
    the ratio peaks at block ends.
    """
    n_lo, n_hi = int(n_range[0]), int(n_range[1])
    if not (2 <= n_lo < n_hi):
        raise LengthSequenceError(f"need 2 <= n_lo < n_hi, got {n_range}")
    grid = _log_sample(n_lo, n_hi, samples)
    if isinstance(rule, BlockSequence):
        ends = np.asarray(rule.schedule.indices, dtype=np.int64)
        ends = ends[(ends >= n_lo) & (ends <= n_hi)]
        grid = np.unique(np.concatenate((grid, ends)))
    ns = grid.astype(np.float64)
    ratios = rule.partial_sums(ns) / np.log(ns)
    return float(np.max(ratios))


def choose_schedule(rule: LengthSequence, alpha: float, K: int,
                    delta_hat: float | None = None,
                    cap: int = 10 ** 15) -> Schedule:
    """Greedy block schedule n_1 < ... < n_K for the block decomposition.

    Each n_k is the smallest admissible index satisfying, with margin
    2**-k:

      (a) n_{k-1} * ell(n_k)**alpha <= 2**-k, so the rare-block sum
          sum_k n_{k-1} * ell(n_k)**alpha stays below 1; and
      (b) when delta_hat > 0,
          (sum_{s<=n_{k-1}} ell'(s)) / ln n_k <= delta_hat + 2**-k,
          the dilution condition on the accumulated block mass.

    Raises ScheduleError naming the failing k if no index below `cap`
    works.  delta_hat defaults to estimate_delta over [3, 10**6].
    """
    if not (0.0 < alpha < 1.0):
        raise LengthSequenceError(f"alpha must be in (0, 1), got {alpha}")
    if K < 1:
        raise LengthSequenceError(f"K must be >= 1, got {K}")
    if delta_hat is None:
        delta_hat = estimate_delta(rule, (3, 10 ** 6))

    indices = []
    n_prev = 0
    accum = 0.0  # sum_{s <= n_prev} ell'(s) for the schedule built so far

    def admissible(n: int, k: int) -> bool:
        budget = 2.0 ** (-k)
        if n_prev * float(rule.ell(n)) ** alpha > budget:
            return False
        if delta_hat > 0.0 and accum / math.log(n) > delta_hat + budget:
            return False
        return True

    for k in range(1, K + 1):
        lo = max(n_prev + 1, 2)
        if admissible(lo, k):
            n_k = lo
        else:
            # gallop out to a power-of-two bracket, then bisect
            hi = lo
            while hi < cap and not admissible(hi, k):
                hi = min(cap, hi * 2)
            if not admissible(hi, k):
                raise ScheduleError(
                    f"no admissible n_{k} below cap {cap:.0e} for "
                    f"{rule.describe()} (alpha={alpha:g}, margin 2^-{k}, "
                    f"accumulated block mass {accum:.3f})")
            bad, good = lo, hi
            while good - bad > 1:
                mid = (bad + good) // 2
                if admissible(mid, k):
                    good = mid
                else:
                    bad = mid
            n_k = good
        accum += (n_k - n_prev) * float(rule.ell(n_k))
        indices.append(n_k)
        n_prev = n_k
    return Schedule(tuple(indices))


def rare_block_sum(rule: LengthSequence, schedule: Schedule, alpha: float) -> float:
    """Direct evaluation of sum_k n_{k-1} * ell(n_k)**alpha (n_0 = 0)."""
    idx = np.asarray(schedule.indices, dtype=np.float64)
    prev = np.concatenate(([0.0], idx[:-1]))
    return float(np.sum(prev * rule._ell(idx) ** alpha))


# ---------------------------------------------------------------------------
# series diagnostics


@dataclass(frozen=True)
class SeriesResult:
    """Partial sums at log-spaced checkpoints plus a heuristic verdict.

    The verdict is a finite-sample heuristic, not a proof: `divergent`
    when the last decade still contributes at least 5% of the total or
    the terms decay no faster than 1/n; `convergent` when the last decade
    contributes at most 1% and the terms decay strictly faster than 1/n
    (log-log slope below -1.1); `inconclusive` otherwise.
    """

    checkpoints: np.ndarray
    partial_sums: np.ndarray
    log_partial_sums: np.ndarray
    verdict: str
    tail_fraction: float
    term_slope: float
    n_terms: int

    def __repr__(self):
        return (f"SeriesResult(N={self.n_terms}, verdict={self.verdict!r}, "
                f"tail_fraction={self.tail_fraction:.3g}, "
                f"term_slope={self.term_slope:.3f})")


_TAIL_CONVERGENT = 1e-2
_TAIL_DIVERGENT = 5e-2
_SLOPE_TOL = 0.1


def _series_verdict(tail_fraction: float, term_slope: float) -> str:
    if tail_fraction >= _TAIL_DIVERGENT or term_slope >= -1.0 + _SLOPE_TOL:
        return "divergent"
    if tail_fraction <= _TAIL_CONVERGENT and term_slope <= -1.0 - _SLOPE_TOL:
        return "convergent"
    return "inconclusive"


def _scan_series(log_term_at, N: int, checkpoints: int = 80) -> SeriesResult:
    """Accumulate every term 1..N in log space; judge the tail."""
    if N < 10:
        raise LengthSequenceError(f"series scan needs N >= 10, got {N}")
    marks = _log_sample(1, N, checkpoints)
    log_sums = np.empty(marks.size, dtype=np.float64)
    running = -math.inf
    filled = 0
    for start in range(1, N + 1, _CHUNK):
        stop = min(start + _CHUNK - 1, N)
        ns = np.arange(start, stop + 1, dtype=np.float64)
        logs = log_term_at(ns)
        csum = np.logaddexp.accumulate(logs)
        while filled < marks.size and marks[filled] <= stop:
            log_sums[filled] = np.logaddexp(running, csum[int(marks[filled]) - start])
            filled += 1
        running = float(np.logaddexp(running, csum[-1]))

    # tail diagnostics over the last decade [N/10, N]
    n_tail_lo = max(2, N // 10)
    i_lo = int(np.searchsorted(marks, n_tail_lo))
    i_lo = min(i_lo, marks.size - 2)
    tail_fraction = float(-np.expm1(log_sums[i_lo] - log_sums[-1]))
    fit_ns = _log_sample(n_tail_lo, N, 40).astype(np.float64)
    fit_logs = log_term_at(fit_ns)
    good = np.isfinite(fit_logs)
    if good.sum() >= 2:
        slope = float(np.polyfit(np.log(fit_ns[good]), fit_logs[good], 1)[0])
    else:
        slope = -math.inf  # tail terms underflow: decisively summable
    verdict = _series_verdict(tail_fraction, slope)
    with np.errstate(over="ignore"):
        sums = np.exp(log_sums)
    return SeriesResult(
        checkpoints=marks,
        partial_sums=sums,
        log_partial_sums=log_sums,
        verdict=verdict,
        tail_fraction=tail_fraction,
        term_slope=slope,
        n_terms=N,
    )


def covering_series(rule: LengthSequence, beta: float, d: float, N: int) -> SeriesResult:
    """Partial sums of sum_n (1/ell_n)**beta * exp(-n d ell_n).

    Convergence of this series (for a target whose eps-covering number is
    at most eps**-beta and some d in (0, 1)) is the sufficient condition
    for almost-sure eventual covering.  For ell_n = c ln n / n the terms
    are ~ n**(beta - c d) / (c ln n)**beta, so the series converges
    exactly when c d - beta > 1.
    """
    if not (0.0 < d < 1.0):
        raise LengthSequenceError(f"d must be in (0, 1), got {d}")
    if beta < 0.0:
        raise LengthSequenceError(f"beta must be >= 0, got {beta}")

    def log_term(ns):
        ell = rule._ell(ns)
        return -beta * np.log(ell) - ns * d * ell

    return _scan_series(log_term, int(N))


def shepp_series(rule: LengthSequence, N: int) -> SeriesResult:
    """Partial sums of the classical criterion sum_n n**-2 exp(ell_1+...+ell_n).

    Divergence characterizes almost-sure covering of the full circle in
    the classical (fixed-radius-per-arc) model: harmonic c > 1 diverges
    (covering), c < 1 converges (non-covering), c = 1 diverges.
    Terms are handled in log space since exp(prefix) overflows quickly.
    """
    N = int(N)
    if N < 2:
        raise LengthSequenceError(f"shepp series needs N >= 2, got {N}")
    if N > 10_000_000:
        raise LengthSequenceError(f"shepp series materializes the length prefix; "
                                  f"N={N} is too large")
    prefix = np.cumsum(rule._ell(np.arange(1, N + 1, dtype=np.float64)))

    def log_term(ns):
        return prefix[ns.astype(np.int64) - 1] - 2.0 * np.log(ns)

    return _scan_series(log_term, N)


def parse_lengths(spec: str) -> LengthSequence:
    """Parse a length-rule string.

    Accepted forms:
      logn:<c>        ell(n) = c ln(n)/n
      harmonic:<c>    ell(n) = c/n
      power:<c>:<gamma>
      table:<file.csv>  one length per line, non-increasing, in (0, 1)
    """
    head, _, rest = spec.partition(":")
    try:
        if head == "logn":
            return LogOverN(float(rest))
        if head == "harmonic":
            return Harmonic(float(rest))
        if head == "power":
            c_str, _, g_str = rest.partition(":")
            return PowerLaw(float(c_str), float(g_str))
        if head == "table":
            values = np.loadtxt(rest, delimiter=",", ndmin=1)
            return TableSequence(tuple(np.atleast_1d(values).ravel()))
    except (OSError, ValueError) as exc:
        if isinstance(exc, LengthSequenceError):
            raise
        raise LengthSequenceError(f"lengths: cannot parse {spec!r}: {exc}") from exc
    raise LengthSequenceError(f"lengths: unknown rule {spec!r}")
