"""Horizontally discretised fuzzy numbers and level-wise interval arithmetic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fuzzfta.fuzzy import DiscreteFuzzy, FuzzyNumber, Interval, alpha_grid


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AlphaCutSeries:
    """Rows ``(alpha_k, lower_k, upper_k)`` for ``alpha_k = k / n_cuts``, ascending."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower, upper = _frozen(self.lower), _frozen(self.upper)
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size == 0:
            raise ValueError("lower and upper must be non-empty 1-d arrays of equal length")
        if not np.all(lower <= upper):
            bad = int(np.flatnonzero(~(lower <= upper))[0])
            raise ValueError(f"row {bad}: lower {lower[bad]!r} exceeds upper {upper[bad]!r}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def constant(cls, value, n_cuts):
        return cls(np.full(n_cuts, float(value)), np.full(n_cuts, float(value)))

    @property
    def n_cuts(self) -> int:
        return self.lower.size

    @property
    def alphas(self) -> np.ndarray:
        return alpha_grid(self.n_cuts)

    def __len__(self):
        return self.n_cuts

    def __eq__(self, other):
        if not isinstance(other, AlphaCutSeries):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    __hash__ = None

    def rows(self):
        return list(zip(self.alphas.tolist(), self.lower.tolist(), self.upper.tolist()))

    def cut(self, k) -> Interval:
        """Interval of the ``k``-th row (0-based, so ``alpha = (k + 1) / n_cuts``)."""
        return Interval(float(self.lower[k]), float(self.upper[k]))

    def at_alpha(self, alpha) -> Interval:
        k = int(round(alpha * self.n_cuts)) - 1
        if k < 0 or not np.isclose(self.alphas[k], alpha, rtol=0, atol=1e-12):
            raise KeyError(f"alpha {alpha!r} is not on the grid of {self.n_cuts} cuts")
        return self.cut(k)

    def is_nested(self, tol=0.0):
        return bool(
            np.all(self.lower[1:] >= self.lower[:-1] - tol)
            and np.all(self.upper[1:] <= self.upper[:-1] + tol)
        )

    def within_unit(self):
        return bool(np.all(self.lower >= 0.0) and np.all(self.upper <= 1.0))

    def membership(self, x):
        """Largest grid level whose cut contains ``x`` (0 when none does)."""
        xs = np.asarray(x, dtype=float)
        inside = (xs[..., None] >= self.lower) & (xs[..., None] <= self.upper)
        levels = np.where(inside, self.alphas, 0.0).max(axis=-1)
        return float(levels) if np.ndim(x) == 0 else levels

    def to_membership_samples(self):
        return to_membership_samples(self)


def _as_series_input(f):
    if isinstance(f, DiscreteFuzzy):
        raise TypeError(
            "discrete fuzzy numbers are not interval-valued; use the exact discrete path"
        )
    if not isinstance(f, FuzzyNumber):
        raise TypeError(f"cannot discretise {type(f).__name__}")
    return f


def discretize(f: FuzzyNumber, n_cuts: int = 100, clamp_to_unit: bool = False) -> AlphaCutSeries:
    _as_series_input(f)
    alphas = alpha_grid(n_cuts)
    cuts = [f.alpha_cut(float(a)) for a in alphas]
    if clamp_to_unit:
        cuts = [c.clamp(0.0, 1.0) for c in cuts]
    return AlphaCutSeries(np.array([c.lo for c in cuts]), np.array([c.hi for c in cuts]))


def series_op(op: str, x: AlphaCutSeries, y: AlphaCutSeries) -> AlphaCutSeries:
    if x.n_cuts != y.n_cuts:
        raise ValueError(
            f"alpha grids differ ({x.n_cuts} vs {y.n_cuts} cuts); series are never resampled"
        )
    if op == "add":
        return AlphaCutSeries(x.lower + y.lower, x.upper + y.upper)
    if op == "sub":
        return AlphaCutSeries(x.lower - y.upper, x.upper - y.lower)
    if op == "mul":
        corners = np.stack(
            (x.lower * y.lower, x.lower * y.upper, x.upper * y.lower, x.upper * y.upper)
        )
        return AlphaCutSeries(corners.min(axis=0), corners.max(axis=0))
    raise ValueError(f"unknown operation {op!r}")


def complement(x: AlphaCutSeries) -> AlphaCutSeries:
    return AlphaCutSeries(1.0 - x.upper, 1.0 - x.lower)


def to_membership_samples(x: AlphaCutSeries):
    """Membership polyline: lower ends bottom-up, then upper ends top-down."""
    alphas = x.alphas.tolist()
    rising = list(zip(x.lower.tolist(), alphas))
    falling = list(zip(x.upper.tolist()[::-1], alphas[::-1]))
    return rising + falling
