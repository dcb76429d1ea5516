"""Target sets on the circle with known dimensions and covering numbers.

A target couples an interval-union approximation with the analytic data
the covering experiments need: its Hausdorff dimension when known, an
upper bound beta on its box dimension, and a covering-number function
N(eps) = number of length-eps intervals needed to cover it ("size" of a
covering ball is read as its length/diameter; the radius reading only
shifts constants).

A depth-k pre-fractal stands in for a true Cantor set.  That is valid
only while the simulation never probes scales near the pre-fractal's
finest resolution: experiment constructors must check that the smallest
arc length used stays above 10 * ratio**depth (below that the
pre-fractal, a finite union of intervals, behaves one-dimensionally and
is strictly harder to cover than the fractal it approximates).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .torus import FULL_CIRCLE, IntervalUnion

_COVERING_CHECK_EPS = (0.5, 0.2, 0.1, 0.03, 0.01, 0.003, 0.001)


@dataclass(frozen=True)
class TargetSet:
    """Immutable target: kind tag, parameters, approximation, dimensions."""

    kind: str
    approx: IntervalUnion
    dim_H: float | None
    dim_B_upper: float
    description: str
    # cantor pre-fractal resolution ratio**depth; 0.0 when no scale guard applies
    finest_scale: float = 0.0
    params: dict = field(default_factory=dict)
    box_constant: float = 1.0

    def covering_number(self, eps: float) -> int:
        """Minimal-ish number of length-eps intervals covering the target."""
        if eps <= 0.0:
            raise ValueError("eps must be positive")
        if eps >= 1.0:
            return 1
        if self.kind == "circle":
            return math.ceil(1.0 / eps)
        if self.kind == "cantor":
            ratio = self.params["ratio"]
            depth = self.params["depth"]
            j = max(0, math.ceil(math.log(eps) / math.log(ratio) - 1e-9))
            if j <= depth:
                return 2 ** j
            # below pre-fractal resolution: chop each level-depth interval
            return 2 ** depth * math.ceil(ratio ** depth / eps)
        return greedy_covering_number(self.approx, eps)

    def __post_init__(self):
        if self.dim_H is not None and self.dim_H > self.dim_B_upper + 1e-12:
            raise ValueError("dim_H must not exceed dim_B_upper")
        beta = self.dim_B_upper
        worst = 1.0
        for eps in _COVERING_CHECK_EPS:
            worst = max(worst, self.covering_number(eps) * eps ** beta)
        object.__setattr__(self, "box_constant", worst)


def greedy_covering_number(u: IntervalUnion, eps: float) -> int:
    """Left-to-right greedy covering by length-eps intervals.

    Within a factor 2 of the minimal covering on the torus, which only
    shifts constants in any exponent estimate.
    """
    count = 0
    pos = -math.inf
    events = sorted(
        [(lo, hi) for lo, hi in zip(u.los, u.his)]
        + [(p, p) for p in u.points]
    )
    for lo, hi in events:
        if lo >= pos:
            count += 1
            pos = lo + eps
        while hi > pos:
            count += 1
            pos += eps
    return count


def make_circle() -> TargetSet:
    return TargetSet(
        kind="circle",
        approx=FULL_CIRCLE,
        dim_H=1.0,
        dim_B_upper=1.0,
        description="circle",
    )


def make_cantor(ratio: float, depth: int) -> TargetSet:
    """Depth-k pre-fractal of the self-similar Cantor set with given ratio.

    Starting from [0, 1], each step keeps the left and right sub-blocks of
    relative length `ratio`.  The result is 2**depth intervals of length
    ratio**depth; both dimensions equal ln 2 / ln(1/ratio).
    """
    if not (0.0 < ratio < 0.5):
        raise ValueError(f"cantor ratio must be in (0, 1/2), got {ratio}")
    if not isinstance(depth, (int, np.integer)) or depth < 1:
        raise ValueError(f"cantor depth must be an integer >= 1, got {depth}")
    if depth > 22:
        raise ValueError(
            "cantor depth > 22 would materialize more than 4M pieces; the "
            "horizon guard (ell(n_max) > 10 * ratio**depth) makes such depths "
            "unusable in any experiment this package can run")
    los = np.array([0.0])
    his = np.array([1.0])
    width = 1.0
    for _ in range(depth):
        width *= ratio
        left = los
        right = his - width
        los = np.stack([left, right], axis=1).reshape(-1)
        his = los + width
    approx = IntervalUnion._from_sorted(los, his)
    dim = math.log(2.0) / math.log(1.0 / ratio)
    return TargetSet(
        kind="cantor",
        approx=approx,
        dim_H=dim,
        dim_B_upper=dim,
        description=f"cantor(ratio={ratio:g}, depth={depth})",
        finest_scale=ratio ** depth,
        params={"ratio": float(ratio), "depth": int(depth)},
    )


def make_finite(points) -> TargetSet:
    """Finite point target; dimension 0, covered iff every point is hit."""
    pts = np.asarray(list(points), dtype=np.float64)
    if pts.size == 0:
        raise ValueError("finite target needs at least one point")
    if np.unique(pts).size != pts.size:
        raise ValueError("finite target points must be distinct")
    if np.any(pts < 0.0) or np.any(pts >= 1.0):
        raise ValueError("points must lie in [0, 1)")
    return TargetSet(
        kind="finite",
        approx=IntervalUnion(points=pts),
        dim_H=0.0,
        dim_B_upper=0.0,
        description=f"points({pts.size})",
        params={"points": [float(p) for p in np.sort(pts)]},
    )


def make_custom(u: IntervalUnion, beta: float, description: str = "custom") -> TargetSet:
    """Arbitrary interval-union target with a caller-supplied box bound beta."""
    if not (0.0 <= beta <= 1.0):
        raise ValueError(f"beta must be in [0, 1], got {beta}")
    if u.is_empty():
        raise ValueError("custom target must be nonempty")
    return TargetSet(
        kind="custom",
        approx=u,
        dim_H=None,
        dim_B_upper=float(beta),
        description=description,
        params={"beta": float(beta)},
    )


def parse_target(spec: str) -> TargetSet:
    """Parse a target specification string.

    Accepted forms:
      circle
      cantor:<ratio>:<depth>
      points:<p1,p2,...>
      custom:<file.json>   (JSON with "intervals": [[lo, hi], ...] and "beta")
    """
    if spec == "circle":
        return make_circle()
    head, _, rest = spec.partition(":")
    if head == "cantor":
        parts = rest.split(":")
        if len(parts) != 2:
            raise ValueError(f"target: expected cantor:<ratio>:<depth>, got {spec!r}")
        try:
            ratio = float(parts[0])
            depth = int(parts[1])
        except ValueError as exc:
            raise ValueError(f"target: bad cantor parameters in {spec!r}") from exc
        return make_cantor(ratio, depth)
    if head == "points":
        try:
            pts = [float(p) for p in rest.split(",") if p != ""]
        except ValueError as exc:
            raise ValueError(f"target: bad point list in {spec!r}") from exc
        return make_finite(pts)
    if head == "custom":
        try:
            with open(rest) as f:
                data = json.load(f)
        except OSError as exc:
            raise ValueError(f"target: cannot read custom target file {rest!r}: {exc}") from exc
        if "intervals" not in data or "beta" not in data:
            raise ValueError("target: custom file needs 'intervals' and 'beta'")
        u = IntervalUnion(pieces=[tuple(p) for p in data["intervals"]])
        return make_custom(u, float(data["beta"]), description=f"custom({rest})")
    raise ValueError(f"target: unknown specification {spec!r}")
