"""Exact segment decomposition of damping along circle geodesics.

Along a unit-speed geodesic x_t = x0 + direction * t the damping of a
constant, piecewise-constant or bumps profile reads a(x_t) = M_j * r(t)
on each structural segment, with a fixed Hermitian matrix M_j and a
scalar rate r(t).  Since M_j commutes with itself, the cocycle factor
across the segment is the exact exponential exp(-M_j * W) with W the
swept scalar mass.  Profiles without this structure (projector, sampled)
are integrated with a fourth-order Magnus scheme instead.
"""

from __future__ import annotations

import copy

import numpy as np
import scipy.linalg

from .damping import (
    TWO_PI,
    BumpsProfile,
    ConstantProfile,
    PiecewiseConstantProfile,
)
from .matrix_kernel import expm_2x2


class _Piece:
    """One structural segment [t0, t1] of a planned period.

    ``matrix`` is None on undamped stretches.  ``weight(t)`` is the
    swept scalar mass on [t0, t], increasing, with weight(t0) = 0.
    """

    __slots__ = ("t0", "t1", "matrix", "_eig")

    def __init__(self, t0, t1, matrix):
        self.t0 = float(t0)
        self.t1 = float(t1)
        self.matrix = matrix
        self._eig = None

    def weight(self, t):
        raise NotImplementedError

    @property
    def total(self):
        return self.weight(self.t1)

    def eig(self):
        if self._eig is None:
            self._eig = np.linalg.eigh(self.matrix)
        return self._eig

    def shifted(self, dt: float):
        """Clone of this piece translated in time (same matrix and shape)."""
        clone = copy.copy(self)
        clone.t0 = self.t0 + dt
        clone.t1 = self.t1 + dt
        return clone

    def factor(self, t):
        """exp(-matrix * weight(t)), exact through the eigendecomposition."""
        if self.matrix is None:
            n = 1
            return None
        w, V = self.eig()
        wt = self.weight(t)
        return (V * np.exp(-w * wt)) @ V.conj().T

    def factors_at(self, ts):
        """Batched factor for an array of times inside the piece."""
        w, V = self.eig()
        wt = np.asarray(self.weight(ts))[..., None]
        expd = np.exp(-w * wt)  # (m, n)
        return np.einsum("ij,mj,kj->mik", V, expd, V.conj())


class _GapPiece(_Piece):
    def __init__(self, t0, t1):
        super().__init__(t0, t1, None)

    def weight(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))


class _LinearPiece(_Piece):
    def weight(self, t):
        return np.asarray(t, dtype=float) - self.t0


class _BumpPiece(_Piece):
    """Partial sweep across a mollified bump.

    xi(t) = xi0 + slope * (t - t0) is the position inside the bump's
    local coordinate [0, width]; slope is -1 when the geodesic crosses
    the bump against its orientation.
    """

    __slots__ = ("moll", "xi0", "slope")

    def __init__(self, t0, t1, matrix, moll, xi0, slope):
        super().__init__(t0, t1, matrix)
        self.moll = moll
        self.xi0 = float(xi0)
        self.slope = float(slope)

    def weight(self, t):
        xi = self.xi0 + self.slope * (np.asarray(t, dtype=float) - self.t0)
        return self.slope * (self.moll.cumulative(xi) - self.moll.cumulative(self.xi0))


def has_exact_plan(p) -> bool:
    return isinstance(p, (ConstantProfile, PiecewiseConstantProfile, BumpsProfile))


def plan_period(p, x0: float, direction: int):
    """Contiguous pieces covering one full period t in [0, 2 pi]."""
    if isinstance(p, ConstantProfile):
        return [_LinearPiece(0.0, TWO_PI, p.matrix)]
    if isinstance(p, PiecewiseConstantProfile):
        return _plan_piecewise(p, x0, direction)
    if isinstance(p, BumpsProfile):
        return _plan_bumps(p, x0, direction)
    raise TypeError(f"no exact segment plan for {type(p).__name__}")


def _plan_piecewise(p, x0, direction):
    # arc boundaries in time units along the traversal
    events = np.sort(np.mod(direction * (p.breakpoints - x0), TWO_PI))
    cuts = np.concatenate([[0.0], events[events > 1e-15], [TWO_PI]])
    cuts = np.unique(np.clip(cuts, 0.0, TWO_PI))
    pieces = []
    for ta, tb in zip(cuts[:-1], cuts[1:]):
        if tb - ta < 1e-15:
            continue
        mid = np.mod(x0 + direction * 0.5 * (ta + tb), TWO_PI)
        idx = int(p._arc_index(np.asarray(mid)))
        pieces.append(_LinearPiece(ta, tb, p.values[idx]))
    return pieces


def _plan_bumps(p, x0, direction):
    w = p.width
    sweeps = []  # (t_enter, t_exit, matrix, xi at t_enter, slope)
    for (left, _), (_, M) in zip(p.supports(), p.bumps):
        if direction > 0:
            xi_start = np.mod(x0 - left, TWO_PI)  # position inside bump at t = 0
            if xi_start < w:
                sweeps.append((0.0, w - xi_start, M, xi_start, 1.0))
                t_enter = TWO_PI - xi_start
                sweeps.append((t_enter, min(t_enter + w, TWO_PI), M, 0.0, 1.0))
            else:
                t_enter = TWO_PI - xi_start
                sweeps.append((t_enter, min(t_enter + w, TWO_PI), M, 0.0, 1.0))
        else:
            xi_start = np.mod(x0 - left, TWO_PI)
            if xi_start < w:
                sweeps.append((0.0, xi_start, M, xi_start, -1.0))
                t_enter = xi_start + (TWO_PI - w)
                sweeps.append((t_enter, min(t_enter + w, TWO_PI), M, w, -1.0))
            else:
                t_enter = xi_start - w
                sweeps.append((t_enter, min(t_enter + w, TWO_PI), M, w, -1.0))
    sweeps = [s for s in sweeps if s[1] - s[0] > 1e-15]
    sweeps.sort(key=lambda s: s[0])
    pieces = []
    cursor = 0.0
    for t_enter, t_exit, M, xi0, slope in sweeps:
        if t_enter > cursor + 1e-15:
            pieces.append(_GapPiece(cursor, t_enter))
        pieces.append(_BumpPiece(t_enter, t_exit, M, p.mollifier, xi0, slope))
        cursor = t_exit
    if cursor < TWO_PI - 1e-15:
        pieces.append(_GapPiece(cursor, TWO_PI))
    return pieces


def product_full(pieces, n: int) -> np.ndarray:
    """Time-ordered product of all piece factors (later factors left)."""
    G = np.eye(n, dtype=complex)
    for piece in pieces:
        if piece.matrix is None:
            continue
        G = piece.factor(piece.t1) @ G
    return G


def product_until(pieces, t: float, n: int) -> np.ndarray:
    """Time-ordered product over [0, t] with t inside the planned span."""
    G = np.eye(n, dtype=complex)
    for piece in pieces:
        if piece.t1 <= t + 1e-15:
            if piece.matrix is not None:
                G = piece.factor(piece.t1) @ G
        elif piece.t0 < t:
            if piece.matrix is not None:
                G = piece.factor(t) @ G
            break
        else:
            break
    return G


def sample_path(pieces, times, n: int) -> np.ndarray:
    """G at each requested time (sorted, within the planned span)."""
    out = np.empty((len(times), n, n), dtype=complex)
    G_entry = np.eye(n, dtype=complex)
    idx = 0
    for piece in pieces:
        hi = np.searchsorted(times, piece.t1, side="right" if piece is pieces[-1] else "left")
        inside = times[idx:hi]
        if len(inside):
            if piece.matrix is None:
                out[idx:hi] = G_entry
            else:
                out[idx:hi] = piece.factors_at(inside) @ G_entry
            idx = hi
        if piece.matrix is not None:
            G_entry = piece.factor(piece.t1) @ G_entry
    out[idx:] = G_entry
    return out


# ---------------------------------------------------------------------------
# Fourth-order Magnus integrator for profiles without segment structure.

_GAUSS_OFFSETS = (0.5 - np.sqrt(3.0) / 6.0, 0.5 + np.sqrt(3.0) / 6.0)


def _expm(M):
    if M.shape == (2, 2):
        return expm_2x2(M)
    return scipy.linalg.expm(M)


def magnus_path(p, x0: float, direction: int, T: float, step: float):
    """Integrate dG/dt = -a(x_t) G with a two-node Gauss Magnus scheme.

    The Hermitian part of every Magnus increment is negative
    semidefinite, so each step factor is a contraction and the norm
    monotonicity of the exact flow is preserved.  Returns (times, G).
    """
    nsteps = max(1, int(np.ceil(T / step)))
    h = T / nsteps
    times = np.linspace(0.0, T, nsteps + 1)
    n = p.n
    nodes = np.concatenate(
        [times[:-1] + _GAUSS_OFFSETS[0] * h, times[:-1] + _GAUSS_OFFSETS[1] * h]
    )
    avals = p.evaluate(np.mod(x0 + direction * nodes, TWO_PI))
    a1, a2 = avals[:nsteps], avals[nsteps:]
    out = np.empty((nsteps + 1, n, n), dtype=complex)
    G = np.eye(n, dtype=complex)
    out[0] = G
    c2 = np.sqrt(3.0) * h * h / 12.0
    for i in range(nsteps):
        s = a1[i] + a2[i]
        comm = a2[i] @ a1[i] - a1[i] @ a2[i]
        omega = (-0.5 * h) * s + c2 * comm
        G = _expm(omega) @ G
        out[i + 1] = G
    return times, out
