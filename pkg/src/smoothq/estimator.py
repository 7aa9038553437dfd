"""Empirical smoothed quantiles.

For a sample ``Y_1..Y_n`` and parameters ``(z, h)`` the estimator minimises

    M(q) = mean(|Y_i - q| - z (Y_i - q) + h/2 (Y_i - q)**2)

whose right derivative is ``2 F_n(q) - 1 + z + h (q - mean(Y))``.  The
minimiser is the generalized inverse of ``G(q) = F_n(q) + h q / 2`` at level
``t = (1 - z + h mean(Y)) / 2`` and is computed exactly by a binary search
over the order statistics.  ``h = 0`` gives the type-1 empirical quantile of
order ``(1 - z) / 2``; large ``h`` pulls the estimate to the sample mean.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError

# below this h the linear extension 2t/h overflows; such h are treated as 0
TINY_H = 1e-300


@dataclass(frozen=True)
class SmoothingParams:
    z: float
    h: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.z) and math.isfinite(self.h)):
            raise DomainError("z and h must be finite")
        if self.h < 0:
            raise DomainError(f"smoothing parameter h must be >= 0, got {self.h!r}")
        if self.h < TINY_H and not -1.0 < self.z < 1.0:
            raise DomainError(f"h = 0 requires z in (-1, 1), got z = {self.z!r}")

    @property
    def level(self):
        """Quantile order ``(1 - z) / 2`` targeted when ``h = 0``."""
        return (1.0 - self.z) / 2.0


class Sample:
    """Immutable sorted sample with its mean cached.

    Parameters
    ----------
    values : array_like
        Observations in any order; at least one, all finite.
    """

    __slots__ = ("values", "mean")

    def __init__(self, values):
        values = np.sort(np.asarray(values, dtype=float).ravel())
        if values.size == 0:
            raise DomainError("a sample needs at least one observation")
        if not np.all(np.isfinite(values)):
            raise DomainError("sample values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mean", float(np.mean(values)))

    def __setattr__(self, name, value):
        raise AttributeError("Sample is immutable")

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return f"Sample(n={len(self)}, mean={self.mean!r})"

    def ecdf(self, q):
        """Right-continuous empirical cdf, ties counted with multiplicity."""
        return np.searchsorted(self.values, q, side="right") / self.values.size


def _as_params(p):
    return p if isinstance(p, SmoothingParams) else SmoothingParams(*p)


def objective(s, q, p):
    """Average loss ``M(q; z, h)`` at ``q``."""
    p = _as_params(p)
    r = s.values - q
    return float(np.mean(np.abs(r) - p.z * r + 0.5 * p.h * r * r))


def score(s, q, p):
    """Right derivative of :func:`objective`: ``2 F_n(q) - 1 + z + h (q - mean)``."""
    p = _as_params(p)
    return 2.0 * s.ecdf(q) - 1.0 + p.z + p.h * (q - s.mean)


def _target(p, mean):
    return (1.0 - p.z + p.h * mean) / 2.0


def estimate(s, p):
    """Exact minimiser of :func:`objective` over ``q``.

    Returns ``inf{q : F_n(q) + h q / 2 >= t}`` with ``t = (1 - z + h mean) / 2``.
    Along the order statistics ``y_(0) <= ... <= y_(n-1)`` the value
    ``H(i) = (i + 1)/n + h y_(i) / 2`` of the map at ``y_(i)`` is nondecreasing,
    so a binary search finds the first ``i`` with ``H(i) >= t``.  The crossing
    is either the jump at ``y_(i)`` or the linear piece just left of it.
    """
    p = _as_params(p)
    y = s.values
    n = y.size
    h = p.h if p.h >= TINY_H else 0.0
    t = _target(p, s.mean) if h else p.level

    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi) // 2
        if (mid + 1) / n + h * float(y[mid]) / 2 >= t:
            hi = mid
        else:
            lo = mid + 1
    i = lo
    if i == n:
        # above the data: solve 1 + h q / 2 = t
        return 2.0 * (t - 1.0) / h
    yi = float(y[i])
    if h and i / n + h * yi / 2 >= t:
        return 2.0 * (t - i / n) / h
    return yi


def estimate_path(s, z, h_grid):
    """:func:`estimate` at ``(z, h)`` for every ``h`` in ``h_grid``."""
    h_grid = list(h_grid)
    if not h_grid:
        raise DomainError("h_grid must be nonempty")
    return [estimate(s, SmoothingParams(z, h)) for h in h_grid]


def estimate_many(sorted_rows, means, p):
    """Vectorised :func:`estimate` over the rows of a matrix of sorted samples.

    ``sorted_rows`` has one sample per row, each sorted ascending, and
    ``means`` holds their means.  The result matches :func:`estimate` on
    ``Sample(row)`` bit for bit.
    """
    p = _as_params(p)
    y = np.asarray(sorted_rows, dtype=float)
    means = np.asarray(means, dtype=float)
    n = y.shape[1]
    h = p.h if p.h >= TINY_H else 0.0
    if h:
        t = (1.0 - p.z + h * means) / 2.0
    else:
        t = np.full(y.shape[0], p.level)
    ranks = np.arange(1, n + 1) / n
    reached = ranks + h * y / 2 >= t[:, None]
    found = reached.any(axis=1)
    i = reached.argmax(axis=1)
    yi = y[np.arange(y.shape[0]), i]
    out = yi.copy()
    if h:
        left = i / n
        gap = found & (left + h * yi / 2 >= t)
        out[gap] = 2.0 * (t[gap] - left[gap]) / h
        out[~found] = 2.0 * (t[~found] - 1.0) / h
    return out
