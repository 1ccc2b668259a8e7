"""Asymptotic slopes of the long-time rate under damping rescaling.

For segment-structured profiles the rescaled rate C_infinity(lam * a)
is computed exactly at every lam through eigenvalue powers of the
segment factors, so the limits of C_infinity(lam a) / lam as lam grows
or vanishes can be extrapolated reliably.  Large-lam products are
accumulated in log scale to dodge underflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _segments
from .cocycle import convention_factor
from .damping import TWO_PI, BumpsProfile, ConstantProfile, DampingProfile, PiecewiseConstantProfile
from .errors import InvalidInput

ORDERING_SLACK = 1e-6


@dataclass(frozen=True)
class SlopeReport:
    slope_infinity: float
    slope_zero: float
    lambda_schedule: np.ndarray
    residuals: np.ndarray  # convergence diagnostics, one per schedule point
    ordering_observed: bool
    underflow: bool = False

    def to_dict(self) -> dict:
        return {
            "slope_infinity": self.slope_infinity,
            "slope_zero": self.slope_zero,
            "lambda_schedule": [float(v) for v in self.lambda_schedule],
            "residuals": [float(v) for v in self.residuals],
            "ordering_observed": self.ordering_observed,
            "underflow": self.underflow,
        }


def _segment_factors(p: DampingProfile):
    """(matrix, weight) pairs of one period at base point 0, direction +1."""
    if not isinstance(p, (ConstantProfile, PiecewiseConstantProfile, BumpsProfile)):
        raise InvalidInput("slope extraction needs a segment-structured profile")
    pieces = [
        (piece.matrix, float(piece.total))
        for piece in _segments.plan_period(p, 0.0, 1)
        if piece.matrix is not None and piece.total > 0
    ]
    if not pieces:  # identically zero damping
        return []
    return [(np.linalg.eigh(M * w)) for M, w in pieces]


def _log_rho(factors, lam: float):
    """ln rho of the time-ordered product of exp(-lam * M_j w_j).

    Each factor is rescaled by its dominant eigenvalue so the running
    product stays O(1); the pulled-out exponents accumulate exactly.
    Returns (value, underflowed).
    """
    if not factors:
        return 0.0, False
    n = factors[0][1].shape[0]
    G = np.eye(n, dtype=complex)
    shift = 0.0
    for w, V in factors:
        scaled = (V * np.exp(-lam * (w - w[0]))) @ V.conj().T
        G = scaled @ G
        shift += -lam * w[0]
    rho = np.abs(np.linalg.eigvals(G)).max()
    if rho <= 0.0:
        return -np.inf, True
    return float(np.log(rho) + shift), False


def rate_at_scale(p: DampingProfile, lam: float, convention: str = "sec1") -> float:
    """C_infinity(lam * a) through exact segment-factor powers."""
    if lam < 0:
        raise InvalidInput("scaling factors are nonnegative")
    if lam == 0:
        return 0.0
    factor = convention_factor(convention)
    val, underflow = _log_rho(_segment_factors(p), lam)
    if underflow:
        raise InvalidInput("rate underflowed; use slope_infinity for large factors")
    return factor * max(0.0, -val / TWO_PI)


def slope_infinity(
    p: DampingProfile,
    schedule=None,
    convention: str = "sec1",
) -> SlopeReport:
    """Extrapolate lim of C_infinity(lam a) / lam as lam grows.

    s(lam) behaves like slope + c / lam up to exponentially small terms,
    so one Richardson step on consecutive schedule points converges
    fast.  The report carries per-point diagnostics and an underflow
    flag when the trailing schedule points fell out of double range.
    """
    if schedule is None:
        schedule = np.geomspace(50.0, 400.0, 8)
    schedule = np.asarray(schedule, dtype=float)
    if len(schedule) < 6 or np.any(np.diff(schedule) <= 0) or schedule.max() < 50:
        raise InvalidInput("schedule must be increasing, >= 6 points, max >= 50")
    factor = convention_factor(convention)
    factors = _segment_factors(p)

    logs = []
    underflow = False
    for lam in schedule:
        val, bad = _log_rho(factors, lam)
        if bad:
            underflow = True
            break
        logs.append(val)
    lams = schedule[: len(logs)]
    if len(logs) < 2:
        raise InvalidInput("schedule underflowed before two usable points")
    logs = np.asarray(logs)
    # lam * s(lam) = -log rho / (2 pi); pairwise slopes eliminate the 1/lam term
    tls = -logs / TWO_PI
    exts = np.concatenate([[tls[0] / lams[0]], np.diff(tls) / np.diff(lams)])
    slope = float(max(0.0, exts[-1]))
    residuals = np.abs(exts - exts[-1])
    if len(lams) < len(schedule):
        residuals = np.concatenate([residuals, np.full(len(schedule) - len(lams), np.nan)])

    s_zero = slope_zero(p, convention=convention)
    return SlopeReport(
        slope_infinity=factor * slope,
        slope_zero=s_zero,
        lambda_schedule=schedule,
        residuals=residuals,
        ordering_observed=bool(factor * slope <= s_zero + ORDERING_SLACK),
        underflow=underflow,
    )


def slope_zero(p: DampingProfile, levels: int = 10, convention: str = "sec1") -> float:
    """Extrapolate lim of C_infinity(lam a) / lam as lam -> 0+.

    s(lam) is smooth in lam near zero, so two Richardson levels over a
    halving schedule remove the linear and quadratic terms.
    """
    factors = _segment_factors(p)
    lams = 1.0 / 2.0 ** np.arange(levels)
    s = np.array([-_log_rho(factors, lam)[0] / (TWO_PI * lam) for lam in lams])
    r1 = 2.0 * s[1:] - s[:-1]
    r2 = (4.0 * r1[1:] - r1[:-1]) / 3.0
    return convention_factor(convention) * float(max(0.0, r2[-1]))


def ordering_probe(p: DampingProfile) -> bool:
    """Record whether slope at infinity <= slope at zero (observation only)."""
    return slope_infinity(p).ordering_observed


def exact_gamma(matrices, separation: float = 0.02, coeff_tol: float = 1e-8):
    """Growth base of rho(prod A_j^lam) from the factor eigenstructure.

    For 2 x 2 Hermitian positive definite factors with eigenvalues in
    (0, 1], the trace of the lam-powered product expands into terms
    c_sigma * p_sigma^lam over all eigenvalue selections sigma, with
    c_sigma a trace of spectral-projector products.  The decisive bases
    are the determinant product and the largest p_sigma whose grouped
    coefficient survives cancellation.  Returns gamma >= 1, or None when
    the leading bases are too close to certify (within ``separation``).
    """
    mats = [np.asarray(M, dtype=complex) for M in matrices]
    if any(M.shape != (2, 2) for M in mats):
        raise InvalidInput("exact_gamma supports 2 x 2 factors only")
    eigs = [np.linalg.eigh(M) for M in mats]
    for w, _ in eigs:
        if w[0] <= 0 or w[1] > 1 + 1e-12:
            raise InvalidInput("factors must be positive definite with eigenvalues <= 1")

    beta0 = float(np.prod([w[0] * w[1] for w, _ in eigs]))

    m = len(mats)
    terms = []
    for code in range(2**m):
        p_sigma = 1.0
        prod = np.eye(2, dtype=complex)
        for j in range(m):
            i = (code >> j) & 1
            w, V = eigs[j]
            p_sigma *= w[i]
            proj = np.outer(V[:, i], V[:, i].conj())
            prod = prod @ proj  # same order as the factor product
        terms.append((p_sigma, np.trace(prod)))
    terms.sort(key=lambda t: -t[0])

    # group near-equal bases and keep those with non-cancelling coefficients
    grouped = []
    for p_sigma, c in terms:
        if grouped and abs(grouped[-1][0] - p_sigma) <= 1e-9 * p_sigma:
            grouped[-1] = (grouped[-1][0], grouped[-1][1] + c)
        else:
            grouped.append((p_sigma, c))
    surviving = [(pv, c) for pv, c in grouped if abs(c) > coeff_tol]
    if not surviving:
        return None
    beta1, _ = surviving[0]
    runner = next((pv for pv, _ in grouped if pv < beta1 * (1.0 - 1e-12)), None)
    if runner is not None and runner > beta1 / (1.0 + separation):
        return None  # leading bases too close to certify numerically
    return float(min(beta0 ** (-0.5), 1.0 / beta1))


def slope_from_gamma(gamma: float, convention: str = "sec1") -> float:
    """Slope value implied by a growth base gamma."""
    return convention_factor(convention) * float(np.log(gamma)) / TWO_PI
