"""Damping cocycle along circle geodesics and its contraction rates.

The cocycle G_t solves dG/dt = -a(x_t) G, G_0 = Id, along the unit
speed path x_t = x0 + direction * t.  A positive-semidefinite damping
makes every G_t a contraction, and the worst-case contraction rate

    C(t) = -(1/t) sup over (x0, direction) of ln ||G_t||_2

admits a limit C_infinity realized by the spectral radius of the period
map G at t = 2 pi.  Two reporting conventions are supported: "sec1"
rates measure ln ||G||_2 while "sec4" rates measure ln ||G||_2^2 and
are exactly twice as large.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _segments
from .damping import TWO_PI, DampingProfile
from .errors import InvalidInput, NumericalFailure

DEFAULT_STEP = TWO_PI / 4096

CONVENTIONS = ("sec1", "sec4")


def convention_factor(convention: str) -> float:
    if convention not in CONVENTIONS:
        raise InvalidInput(f"unknown convention {convention!r}, expected one of {CONVENTIONS}")
    return 2.0 if convention == "sec4" else 1.0


@dataclass(frozen=True)
class PhasePoint:
    """Base point and travel direction on the unit cotangent circle."""

    x0: float
    direction: int

    def __post_init__(self):
        if self.direction not in (-1, 1):
            raise InvalidInput(f"direction must be +1 or -1, got {self.direction}")
        object.__setattr__(self, "x0", float(self.x0))


@dataclass(frozen=True, eq=False)
class CocyclePath:
    """Sampled trajectory t -> G_t starting from a phase point."""

    point: PhasePoint
    times: np.ndarray
    G: np.ndarray  # shape (len(times), n, n); G[0] = Id exactly
    step: float

    def norms(self) -> np.ndarray:
        """Spectral norm of G at each sample."""
        return np.linalg.svd(self.G, compute_uv=False)[:, 0]


def _tiled_plan(p, x0: float, direction: int, T: float):
    base = _segments.plan_period(p, x0, direction)
    periods = int(np.ceil(T / TWO_PI - 1e-12)) or 1
    return [piece.shifted(j * TWO_PI) for j in range(periods) for piece in base]


def propagate(
    p: DampingProfile, pt: PhasePoint, T: float, step: float = DEFAULT_STEP
) -> CocyclePath:
    """Sample G_t on a uniform grid over [0, T].

    Profiles with segment structure use exact per-segment exponentials;
    the rest are integrated with the fourth-order Magnus scheme, whose
    step factors are contractions by construction.
    """
    if not (T > 0):
        raise InvalidInput("propagation horizon T must be positive")
    if not (0 < step <= T):
        raise InvalidInput("step must lie in (0, T]")
    if _segments.has_exact_plan(p):
        nsteps = max(1, int(np.ceil(T / step - 1e-12)))
        times = np.linspace(0.0, T, nsteps + 1)
        plan = _tiled_plan(p, pt.x0, pt.direction, T)
        G = _segments.sample_path(plan, times, p.n)
    else:
        times, G = _segments.magnus_path(p, pt.x0, pt.direction, T, step)
    G[0] = np.eye(p.n)
    if not np.all(np.isfinite(G)):
        raise NumericalFailure("cocycle integration produced non-finite values")
    return CocyclePath(pt, times, G, step)


def cocycle_matrix(
    p: DampingProfile, pt: PhasePoint, t: float, step: float = DEFAULT_STEP
) -> np.ndarray:
    """G_t at a single time, using period powers for t beyond one loop."""
    if t == 0:
        return np.eye(p.n, dtype=complex)
    if t < 0:
        raise InvalidInput("cocycle times are nonnegative")
    q, r = divmod(t, TWO_PI)
    q = int(q)
    if _segments.has_exact_plan(p):
        plan = _segments.plan_period(p, pt.x0, pt.direction)
        G = _segments.product_until(plan, r, p.n) if r > 1e-15 else np.eye(p.n, dtype=complex)
        if q:
            G = G @ np.linalg.matrix_power(_segments.product_full(plan, p.n), q)
        return G
    G = np.eye(p.n, dtype=complex)
    if r > 1e-15:
        G = _segments.magnus_path(p, pt.x0, pt.direction, r, step)[1][-1]
    if q:
        P = _segments.magnus_path(p, pt.x0, pt.direction, TWO_PI, step)[1][-1]
        G = G @ np.linalg.matrix_power(P, q)
    return G


def period_map(p: DampingProfile, direction: int, step: float = DEFAULT_STEP) -> np.ndarray:
    """G at time 2 pi from base point 0, the monodromy of the damping."""
    return cocycle_matrix(p, PhasePoint(0.0, direction), TWO_PI, step)


def c_of_t(
    p: DampingProfile,
    t: float,
    base_grid: int = 256,
    step: float = DEFAULT_STEP,
) -> float:
    """Worst-case finite-time contraction rate over a base-point grid.

    Unlike its long-time limit, C(t) genuinely depends on the base
    point; base_grid controls the resolution of the sup.
    """
    if base_grid < 32:
        raise InvalidInput("base_grid must be at least 32")
    if not (t > 0):
        raise InvalidInput("t must be positive")
    worst = -np.inf
    for x0 in np.linspace(0.0, TWO_PI, base_grid, endpoint=False):
        for direction in (1, -1):
            G = cocycle_matrix(p, PhasePoint(x0, direction), t, step)
            sigma = np.linalg.svd(G, compute_uv=False)[0]
            worst = max(worst, np.log(sigma))
    return float(-worst / t)


def c_infinity(
    p: DampingProfile, convention: str = "sec1", step: float = DEFAULT_STEP
) -> float:
    """Long-time contraction rate from the period map's spectral radius."""
    factor = convention_factor(convention)
    rho = float(np.abs(np.linalg.eigvals(period_map(p, 1, step))).max())
    if rho <= 0.0:
        raise NumericalFailure("period map spectral radius underflowed to zero")
    value = -np.log(rho) / TWO_PI
    if value < 0.0:
        if value < -1e-10:
            raise NumericalFailure(f"contraction rate came out negative: {value}")
        value = 0.0
    return factor * value + 0.0  # normalize -0.0


def _adaptive_panel(f, a, fa, m, fm, b, fb, whole, tol, depth):
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return _adaptive_panel(
        f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1
    ) + _adaptive_panel(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)


def gamma_norm_check(
    p: DampingProfile, pt: PhasePoint, T: float, step: float = 1e-3, quad_tol: float = 1e-7
) -> float:
    """Defect of the norm identity ||G G*|| = exp(-2 int <a y, y>).

    y_s is a unit top eigenvector of G_s G_s*; at eigenvalue crossings
    any choice is admissible since the identity constrains the norm
    only.  The top branch can switch or vary sharply where the two
    eigenvalues of G G* nearly touch, so panels whose embedded Simpson
    error estimate exceeds the budget are refined adaptively with
    pointwise cocycle evaluations.  Returns the max over samples of the
    absolute defect.
    """
    path = propagate(p, pt, T, step / 4.0)
    times, G = path.times, path.G
    gamma = G @ G.conj().transpose(0, 2, 1)
    w, V = np.linalg.eigh(gamma)
    norms = w[:, -1]
    y = V[:, :, -1]
    avals = p.evaluate(np.mod(pt.x0 + pt.direction * times, TWO_PI))
    f = np.einsum("mi,mij,mj->m", y.conj(), avals, y).real

    exact = _segments.has_exact_plan(p)
    plan = _segments.plan_period(p, pt.x0, pt.direction) if exact else None
    h4 = times[1] - times[0]

    def f_at(s):
        if exact:
            q, r = divmod(s, TWO_PI)
            Gs = _segments.product_until(plan, r, p.n)
            if q:
                Gs = Gs @ np.linalg.matrix_power(_segments.product_full(plan, p.n), int(q))
        else:
            i = min(int(s / h4), len(times) - 2)
            if s - times[i] < 1e-14:
                Gs = G[i]
            else:
                _, tail = _segments.magnus_path(
                    p, pt.x0 + pt.direction * times[i], pt.direction, s - times[i], h4
                )
                Gs = tail[-1] @ G[i]
        gg = Gs @ Gs.conj().T
        _, Vs = np.linalg.eigh(gg)
        yv = Vs[:, -1]
        a_s = p.evaluate(np.mod(pt.x0 + pt.direction * s, TWO_PI))
        return float(np.real(yv.conj() @ a_s @ yv))

    # composite Simpson on coarse panels (four fine intervals each); the
    # half-panel discrepancy over 15 estimates the panel error
    npanels = (len(times) - 1) // 4
    tol_panel = quad_tol / max(npanels, 1)
    increments = np.zeros(npanels)
    hcoarse = 4.0 * h4
    for i in range(npanels):
        j = 4 * i
        fa, f1, fm, f3, fb = f[j : j + 5]
        whole = hcoarse / 6.0 * (fa + 4.0 * fm + fb)
        halves = hcoarse / 12.0 * (fa + 4.0 * f1 + 2.0 * fm + 4.0 * f3 + fb)
        if abs(halves - whole) <= 15.0 * tol_panel:
            increments[i] = halves + (halves - whole) / 15.0
        else:
            a_t, m_t, b_t = times[j], times[j + 2], times[j + 4]
            increments[i] = _adaptive_panel(
                f_at, a_t, fa, m_t, fm, b_t, fb, whole, tol_panel, 40
            )
    integral = np.concatenate([[0.0], np.cumsum(increments)])
    defects = np.abs(norms[::4][: len(integral)] - np.exp(-2.0 * integral))
    return float(defects.max())
