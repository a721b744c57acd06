"""Fuzzy numbers: parametric shapes, closed-form alpha-cuts, interval
arithmetic and the exact extension principle over finite supports.

Corner conventions for trapezoids: membership is 0 at ``a`` and ``d`` and 1 on
the closed plateau ``[b, c]``.  A shape whose ramp has zero width simply has no
ramp, so ``tri(p, p, p)`` is the indicator of ``p``.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

import numpy as np

from fuzzfta import _backend

#: Absolute tolerance under which values of a discrete support are merged.
MERGE_TOL = 1e-9

OPS: dict[str, Callable] = {"add": operator.add, "sub": operator.sub, "mul": operator.mul}
OP_CODES = {"add": 0, "sub": 1, "mul": 2}


def _check_op(op):
    if op not in OPS:
        raise ValueError(f"unknown operation {op!r}; expected one of {sorted(OPS)}")


def _check_alpha(alpha, allow_zero=True):
    if not (0.0 <= alpha <= 1.0) or (alpha == 0.0 and not allow_zero):
        raise ValueError(f"alpha must lie in {'[0' if allow_zero else '(0'}, 1], got {alpha!r}")


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval lower end {self.lo!r} exceeds upper end {self.hi!r}")

    def __add__(self, other):
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other):
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other):
        corners = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(corners), max(corners))

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def clamp(self, lo=0.0, hi=1.0):
        """Intersect with ``[lo, hi]``; a disjoint interval collapses onto the nearer bound."""
        new_lo = min(max(self.lo, lo), hi)
        new_hi = max(min(self.hi, hi), lo)
        return Interval(new_lo, new_hi)

    def issubset(self, other):
        return other.lo <= self.lo and self.hi <= other.hi


def interval_op(op: str, x: Interval, y: Interval) -> Interval:
    _check_op(op)
    return OPS[op](x, y)


class FuzzyNumber:
    """Common surface of the convex parametric shapes."""

    def membership(self, x):
        raise NotImplementedError

    def alpha_cut(self, alpha: float) -> Interval:
        raise NotImplementedError

    def support_hint(self) -> Interval:
        """A finite interval holding (practically) all of the membership mass."""
        raise NotImplementedError


def _as_output(x, result):
    return float(result) if np.ndim(x) == 0 else result


@dataclass(frozen=True)
class TrapezoidalFuzzy(FuzzyNumber):
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(
                f"trapezoid corners must satisfy a <= b <= c <= d, got "
                f"{(self.a, self.b, self.c, self.d)}"
            )

    def membership(self, x):
        a, b, c, d = self.a, self.b, self.c, self.d
        xs = np.asarray(x, dtype=float)
        out = np.zeros_like(xs)
        out[(xs >= b) & (xs <= c)] = 1.0
        if b > a:
            rising = (xs > a) & (xs < b)
            out[rising] = (xs[rising] - a) / (b - a)
        if d > c:
            falling = (xs > c) & (xs < d)
            out[falling] = (d - xs[falling]) / (d - c)
        return _as_output(x, out)

    def alpha_cut(self, alpha):
        _check_alpha(alpha)
        # Same line as (b - a) * alpha + a, anchored at the plateau so alpha = 1
        # yields exactly [b, c] and lo <= hi survives rounding.
        slack = 1.0 - alpha
        return Interval(self.b - (self.b - self.a) * slack, self.c + (self.d - self.c) * slack)

    def support_hint(self):
        return Interval(self.a, self.d)


@dataclass(frozen=True)
class TriangularFuzzy(FuzzyNumber):
    a: float
    b: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.d):
            raise ValueError(
                f"triangle corners must satisfy a <= b <= d, got {(self.a, self.b, self.d)}"
            )

    def as_trapezoid(self):
        return TrapezoidalFuzzy(self.a, self.b, self.b, self.d)

    def membership(self, x):
        return self.as_trapezoid().membership(x)

    def alpha_cut(self, alpha):
        return self.as_trapezoid().alpha_cut(alpha)

    def support_hint(self):
        return Interval(self.a, self.d)


@dataclass(frozen=True)
class GaussianFuzzy(FuzzyNumber):
    m: float
    d: float

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError(
                f"gaussian spread must be positive, got {self.d!r}; "
                "model a crisp value as tri(p, p, p) or a singleton discrete number"
            )

    def membership(self, x):
        xs = np.asarray(x, dtype=float)
        return _as_output(x, np.exp(-((xs - self.m) ** 2) / (2.0 * self.d**2)))

    def alpha_cut(self, alpha):
        _check_alpha(alpha, allow_zero=False)
        half = self.d * math.sqrt(-2.0 * math.log(alpha))
        return Interval(self.m - half, self.m + half)

    def support_hint(self, floor=1e-6):
        return self.alpha_cut(floor)


def _merge(values, memberships, tol):
    """Sort, then merge runs of values whose consecutive gaps are within ``tol``.

    Each run keeps its smallest value and its largest membership.
    """
    values = np.asarray(values, dtype=float).ravel()
    memberships = np.asarray(memberships, dtype=float).ravel()
    keep = memberships > 0.0
    values, memberships = values[keep], memberships[keep]
    if values.size == 0:
        return values, memberships
    order = np.argsort(values, kind="stable")
    values, memberships = values[order], memberships[order]
    starts = np.flatnonzero(np.concatenate(([True], np.diff(values) > tol)))
    return values[starts], np.maximum.reduceat(memberships, starts)


class DiscreteFuzzy:
    """Fuzzy number with finite support, stored as sorted ``value -> membership``."""

    __slots__ = ("_values", "_memberships")

    def __init__(self, support: Union[Mapping[float, float], Iterable[tuple]], tol=MERGE_TOL):
        pairs = list(support.items()) if isinstance(support, Mapping) else list(support)
        if not pairs:
            raise ValueError("a discrete fuzzy number needs at least one support point")
        values = np.array([float(v) for v, _ in pairs])
        memberships = np.array([float(m) for _, m in pairs])
        if np.any(memberships < 0.0) or np.any(memberships > 1.0) or np.any(np.isnan(memberships)):
            raise ValueError("memberships must lie in [0, 1]")
        if not np.all(np.isfinite(values)):
            raise ValueError("support values must be finite")
        values, memberships = _merge(values, memberships, tol)
        if values.size == 0:
            raise ValueError("all memberships are zero")
        self._set(values, memberships)

    def _set(self, values, memberships):
        values.setflags(write=False)
        memberships.setflags(write=False)
        self._values = values
        self._memberships = memberships

    @classmethod
    def _from_merged(cls, values, memberships):
        obj = cls.__new__(cls)
        obj._set(values, memberships)
        return obj

    @classmethod
    def singleton(cls, value):
        return cls({value: 1.0})

    @property
    def values(self):
        return self._values

    @property
    def memberships(self):
        return self._memberships

    def items(self):
        return list(zip(self._values.tolist(), self._memberships.tolist()))

    def to_dict(self):
        return dict(self.items())

    def __len__(self):
        return self._values.size

    def __iter__(self):
        return iter(self.items())

    def __repr__(self):
        body = ", ".join(f"{v:.12g} ↦ {m:.12g}" for v, m in self.items())
        return f"DiscreteFuzzy({{{body}}})"

    def membership(self, x, tol=MERGE_TOL):
        xs = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(self._values, xs), 0, len(self) - 1)
        out = np.zeros_like(xs)
        for shift in (0, -1):
            j = np.clip(idx + shift, 0, len(self) - 1)
            hit = np.abs(self._values[j] - xs) <= tol
            out = np.where(hit, np.maximum(out, self._memberships[j]), out)
        return _as_output(x, out)

    def isclose(self, other, tol=MERGE_TOL):
        """Same support within ``tol`` and identical memberships."""
        return (
            len(self) == len(other)
            and bool(np.all(np.abs(self._values - other._values) <= tol))
            and bool(np.array_equal(self._memberships, other._memberships))
        )

    def height(self):
        return float(self._memberships.max())

    def level_hulls(self, n_cuts):
        """Smallest interval containing each alpha-cut on the grid ``k / n_cuts``.

        Levels above the height of the number are empty and reported as NaN.
        """
        alphas = alpha_grid(n_cuts)
        lo = np.full(n_cuts, np.nan)
        hi = np.full(n_cuts, np.nan)
        for k, alpha in enumerate(alphas):
            inside = self._values[self._memberships >= alpha]
            if inside.size:
                lo[k], hi[k] = inside.min(), inside.max()
        return lo, hi


def alpha_grid(n_cuts: int) -> np.ndarray:
    """The uniform grid ``1/n, 2/n, ..., 1`` (zero excluded)."""
    if int(n_cuts) != n_cuts or n_cuts < 1:
        raise ValueError(f"n_cuts must be a positive integer, got {n_cuts!r}")
    n_cuts = int(n_cuts)
    return np.arange(1, n_cuts + 1, dtype=float) / n_cuts


def zadeh_extend(func: Callable, *args: DiscreteFuzzy, tol=MERGE_TOL) -> DiscreteFuzzy:
    """Sup-min extension of ``func`` to finite fuzzy arguments.

    ``func`` is applied to broadcast numpy arrays holding every combination of
    support points, so it must be written with array arithmetic.
    """
    if not args:
        raise ValueError("at least one argument is required")
    grids = np.meshgrid(*(a.values for a in args), indexing="ij")
    mgrids = np.meshgrid(*(a.memberships for a in args), indexing="ij")
    values = np.asarray(func(*grids), dtype=float)
    memberships = np.minimum.reduce(mgrids) if len(mgrids) > 1 else mgrids[0]
    values, memberships = _merge(values, memberships, tol)
    return DiscreteFuzzy._from_merged(values, memberships)


def zadeh_extend_binary(op, x: DiscreteFuzzy, y: DiscreteFuzzy, tol=MERGE_TOL) -> DiscreteFuzzy:
    if isinstance(op, str):
        _check_op(op)
        op = OPS[op]
    return zadeh_extend(op, x, y, tol=tol)


def zadeh_complement(x: DiscreteFuzzy, tol=MERGE_TOL) -> DiscreteFuzzy:
    """Extension of ``p -> 1 - p``."""
    return zadeh_extend(lambda p: 1.0 - p, x, tol=tol)


def membership(f, x):
    return f.membership(x)


def alpha_cut(f, alpha: float) -> Interval:
    if isinstance(f, DiscreteFuzzy):
        raise TypeError(
            "discrete fuzzy numbers have no interval-valued cuts; use the exact discrete path"
        )
    return f.alpha_cut(alpha)


def level_buckets(memberships, n_cuts):
    """Number of grid levels ``k / n_cuts`` that each membership reaches."""
    return np.searchsorted(alpha_grid(n_cuts), np.asarray(memberships, dtype=float), side="right")


def extension_level_extremes(op: str, x: DiscreteFuzzy, y: DiscreteFuzzy, n_cuts: int):
    """Alpha-cut hulls of ``zadeh_extend_binary(op, x, y)`` without materialising it.

    Every support pair is visited; no interval shortcut is taken, which is what
    makes this usable as a brute-force reference for level-wise arithmetic.
    Empty levels come back as NaN.
    """
    _check_op(op)
    return _backend.kernels.level_extremes(
        x.values,
        level_buckets(x.memberships, n_cuts).astype(np.int64),
        y.values,
        level_buckets(y.memberships, n_cuts).astype(np.int64),
        OP_CODES[op],
        int(n_cuts),
    )
