"""Unit-mass bump functions supported in (0, width).

Every bump carries total mass one, so a damping bump contributes its
matrix exactly once per full sweep regardless of the bump's shape.  The
cumulative integral is what the cocycle machinery consumes; it is
tabulated once per mollifier to near machine precision.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .errors import InvalidInput

_TABLE_SIZE = 16385


class Mollifier:
    """Base class: a nonnegative density on (0, width) with unit mass."""

    def __init__(self, width: float):
        if not (width > 0):
            raise InvalidInput(f"mollifier width must be positive, got {width}")
        self.width = float(width)

    def density(self, s):
        raise NotImplementedError

    def cumulative(self, s):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(width={self.width!r})"


class SmoothBump(Mollifier):
    """The C-infinity bump c * exp(-1/(s (width - s))), normalized.

    No closed-form antiderivative exists; the cumulative integral is
    tabulated on a dense grid and interpolated with a cubic spline.
    """

    def __init__(self, width: float):
        super().__init__(width)
        s = np.linspace(0.0, width, _TABLE_SIZE)
        raw = self._raw(s)
        cum = np.concatenate([[0.0], cumulative_simpson(raw, x=s)])
        self._mass = cum[-1]
        self._spline = CubicSpline(s, cum / self._mass)

    def _raw(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        inside = (s > 0) & (s < self.width)
        si = s[inside]
        out[inside] = np.exp(-1.0 / (si * (self.width - si)))
        return out

    def density(self, s):
        return self._raw(s) / self._mass

    def cumulative(self, s):
        s = np.asarray(s, dtype=float)
        out = np.clip(self._spline(np.clip(s, 0.0, self.width)), 0.0, 1.0)
        return out if out.ndim else float(out)


class CosineBump(Mollifier):
    """The C^1 bump (1 - cos(2 pi s / width)) / width, closed-form cumulative.

    Provided as an alternative shape for mollifier-independence checks.
    """

    def density(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        inside = (s > 0) & (s < self.width)
        out[inside] = (1.0 - np.cos(2.0 * np.pi * s[inside] / self.width)) / self.width
        return out

    def cumulative(self, s):
        s = np.asarray(s, dtype=float)
        z = np.clip(s, 0.0, self.width) / self.width
        out = z - np.sin(2.0 * np.pi * z) / (2.0 * np.pi)
        return out if out.ndim else float(out)


@lru_cache(maxsize=64)
def default_smooth_bump(width: float) -> SmoothBump:
    """Shared SmoothBump instances; tabulating one is not free."""
    return SmoothBump(width)
