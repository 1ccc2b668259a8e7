"""Damping profiles: Hermitian PSD matrix-valued functions on the circle.

A profile assigns to every angle x a Hermitian positive-semidefinite
n x n matrix a(x), 2 pi periodic.  Four parametric families are
provided (constant, piecewise constant on arcs, disjoint mollified
bumps, and a rank-deficient projector family) plus a generic sampled
wrapper used for sums and scalings that leave the families.

Profiles are immutable after construction and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateProfile, InvalidInput
from .matrix_kernel import as_matrix, hermitian_defect, hermitize
from .mollifier import Mollifier, default_smooth_bump

TWO_PI = 2.0 * np.pi

# Validation thresholds (see ValidationReport.ok).
HERMITIAN_OK = 1e-10
PSD_OK = -1e-8
GCC_TOL = 1e-10


def _check_stored_matrix(M, n=None) -> np.ndarray:
    A = as_matrix(M)
    if n is not None and A.shape[0] != n:
        raise InvalidInput(f"matrix dimension {A.shape[0]} != profile dimension {n}")
    if hermitian_defect(A) > 1e-6 * (1.0 + np.abs(A).max()):
        raise InvalidInput("stored damping matrix is not Hermitian")
    return A


@dataclass(frozen=True, eq=False)
class ConstantProfile:
    """a(x) = A for a fixed Hermitian PSD matrix A."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _check_stored_matrix(self.matrix))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return self.matrix.copy()
        return np.broadcast_to(self.matrix, x.shape + self.matrix.shape).copy()


@dataclass(frozen=True, eq=False)
class PiecewiseConstantProfile:
    """a(x) constant on the arcs between consecutive breakpoints.

    values[i] holds on [breakpoints[i], breakpoints[i+1]) and values[-1]
    on the wrap-around arc [breakpoints[-1], breakpoints[0] + 2 pi).
    """

    breakpoints: np.ndarray
    values: np.ndarray  # shape (arcs, n, n)

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        if bp.ndim != 1 or len(bp) < 1:
            raise InvalidInput("breakpoints must be a non-empty 1-d sequence")
        if np.any(bp < 0) or np.any(bp >= TWO_PI) or np.any(np.diff(bp) <= 0):
            raise InvalidInput("breakpoints must be strictly increasing in [0, 2 pi)")
        if vals.ndim != 3 or vals.shape[0] != len(bp) or vals.shape[1] != vals.shape[2]:
            raise InvalidInput("values must have shape (len(breakpoints), n, n)")
        for V in vals:
            _check_stored_matrix(V, vals.shape[1])
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def _arc_index(self, x):
        # searchsorted over [bp_0, ..., bp_last]; angles below bp_0 belong
        # to the wrap-around arc started at bp_last.
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return np.where(idx < 0, len(self.breakpoints) - 1, idx)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        xr = np.mod(x, TWO_PI)
        idx = self._arc_index(xr)
        out = self.values[idx]
        return out.copy() if x.ndim else out.copy()


@dataclass(frozen=True, eq=False)
class BumpsProfile:
    """Sum of disjoint mollified bumps a_j * psi(x - left edge of bump j).

    Each bump has unit mass, so a full sweep across bump j contributes
    the factor exp(-a_j) to the cocycle no matter the mollifier shape.
    """

    bumps: tuple  # of (center angle, (n, n) Hermitian matrix)
    width: float
    mollifier: Mollifier | None = None

    def __post_init__(self):
        bumps = []
        n = None
        for center, M in self.bumps:
            A = _check_stored_matrix(M, n)
            n = A.shape[0]
            bumps.append((float(center) % TWO_PI, A))
        if not bumps:
            raise InvalidInput("a bumps profile needs at least one bump")
        if not (0 < self.width < TWO_PI / len(bumps)):
            raise InvalidInput(
                f"width must lie in (0, 2 pi / {len(bumps)}), got {self.width}"
            )
        centers = sorted(c for c, _ in bumps)
        gaps = np.diff(centers + [centers[0] + TWO_PI])
        if len(centers) > 1 and gaps.min() < self.width:
            raise InvalidInput("bump supports overlap on the circle")
        moll = self.mollifier if self.mollifier is not None else default_smooth_bump(float(self.width))
        if abs(moll.width - self.width) > 1e-12:
            raise InvalidInput("mollifier width does not match bump width")
        object.__setattr__(self, "bumps", tuple(bumps))
        object.__setattr__(self, "width", float(self.width))
        object.__setattr__(self, "mollifier", moll)

    @property
    def n(self) -> int:
        return self.bumps[0][1].shape[0]

    def supports(self):
        """(left, right) edges of each bump, left in [0, 2 pi)."""
        half = 0.5 * self.width
        return [((c - half) % TWO_PI, (c - half) % TWO_PI + self.width) for c, _ in self.bumps]

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        xr = np.atleast_1d(np.mod(x, TWO_PI))
        out = np.zeros(xr.shape + (self.n, self.n), dtype=complex)
        for (left, _), (_, M) in zip(self.supports(), self.bumps):
            s = np.mod(xr - left, TWO_PI)
            w = self.mollifier.density(s)
            out += w[..., None, None] * M
        return out[0] if x.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class ProjectorProfile:
    """a(x) = Id - v v* / |v|^2 with v(x) = (sin(k x), sin(k x + phase)).

    The pointwise kernel of a(x) is the line spanned by v(x); it rotates
    with x, so the averaged matrix is positive definite although a(x) is
    singular everywhere.  Requires phase away from multiples of pi, else
    v vanishes somewhere on the circle.
    """

    k: int
    phase: float

    def __post_init__(self):
        if int(self.k) < 1:
            raise InvalidInput("projector frequency k must be a positive integer")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "phase", float(self.phase))
        # |v|^2 = 1 - cos(phase) cos(2kx + phase) >= 1 - |cos(phase)|
        grid = np.linspace(0.0, TWO_PI, 4096, endpoint=False)
        v1 = np.sin(self.k * grid)
        v2 = np.sin(self.k * grid + self.phase)
        if (v1 * v1 + v2 * v2).min() < 1e-12:
            raise InvalidInput("projector profile degenerate: v(x) vanishes (phase near a multiple of pi)")

    @property
    def n(self) -> int:
        return 2

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.atleast_1d(np.mod(x, TWO_PI))
        v1 = np.sin(self.k * xs)
        v2 = np.sin(self.k * xs + self.phase)
        nv = v1 * v1 + v2 * v2
        if np.any(nv < 1e-24):
            raise DegenerateProfile("projector profile evaluated where |v| < 1e-12")
        out = np.empty(xs.shape + (2, 2), dtype=complex)
        out[..., 0, 0] = 1.0 - v1 * v1 / nv
        out[..., 0, 1] = -v1 * v2 / nv
        out[..., 1, 0] = -v1 * v2 / nv
        out[..., 1, 1] = 1.0 - v2 * v2 / nv
        return out[0] if x.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class SampledProfile:
    """Generic profile backed by a vectorized evaluation callable.

    Used for combinations that leave the parametric families (sums with
    overlapping supports, scaled projectors).  Closed-form shortcuts are
    unavailable; downstream modules fall back to quadrature and ODE
    integration.
    """

    func: Callable[[np.ndarray], np.ndarray]
    dim: int
    description: str = ""

    @property
    def n(self) -> int:
        return self.dim

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        xs = np.atleast_1d(np.mod(x, TWO_PI))
        out = np.asarray(self.func(xs), dtype=complex)
        if out.shape != xs.shape + (self.dim, self.dim):
            raise InvalidInput("sampled profile callable returned a wrong shape")
        return out[0] if x.ndim == 0 else out


DampingProfile = (
    ConstantProfile | PiecewiseConstantProfile | BumpsProfile | ProjectorProfile | SampledProfile
)


def zero_profile(n: int) -> ConstantProfile:
    return ConstantProfile(np.zeros((n, n)))


def evaluate(p: DampingProfile, x):
    """a(x); Hermitian, 2 pi periodic in x.  Vectorized over x."""
    return p.evaluate(x)


@dataclass(frozen=True)
class ValidationReport:
    hermitian_defect: float
    min_eigenvalue_over_grid: float
    grid_size: int
    ok: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "ok",
            self.hermitian_defect <= HERMITIAN_OK and self.min_eigenvalue_over_grid >= PSD_OK,
        )


def validate(p: DampingProfile, grid: int = 256) -> ValidationReport:
    """Sample the profile uniformly and report worst Hermitian/PSD defects."""
    if grid < 16:
        raise InvalidInput("validation grid must have at least 16 points")
    x = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    vals = p.evaluate(x)
    defect = float(np.abs(vals - vals.conj().transpose(0, 2, 1)).max())
    w = np.linalg.eigvalsh(0.5 * (vals + vals.conj().transpose(0, 2, 1)))
    return ValidationReport(defect, float(w.min()), grid)


def average_matrix(p: DampingProfile) -> np.ndarray:
    """(1 / 2 pi) integral of a(x) over the circle.

    Closed form for the parametric families; spectrally convergent
    trapezoid quadrature (exact for band-limited integrands) otherwise.
    """
    if isinstance(p, ConstantProfile):
        return p.matrix.copy()
    if isinstance(p, PiecewiseConstantProfile):
        bp = p.breakpoints
        lengths = np.diff(np.concatenate([bp, [bp[0] + TWO_PI]]))
        return hermitize(np.tensordot(lengths, p.values, axes=1) / TWO_PI)
    if isinstance(p, BumpsProfile):
        # each bump has unit mass, contributing a_j / (2 pi)
        return hermitize(sum(M for _, M in p.bumps) / TWO_PI)
    grid = 4096
    x = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    return hermitize(p.evaluate(x).mean(axis=0))


def gcc_check(p: DampingProfile, tol: float = GCC_TOL):
    """Geometric control on the circle: is the averaged matrix definite?

    For PSD a, a vector y lies in every kernel ker a(x) exactly when
    the average of <a(x) y, y> vanishes, and on the circle each maximal
    geodesic sweeps every x.  So control holds iff the average is
    positive definite.  Returns (holds, smallest eigenvalue of the
    average).
    """
    lam_min = float(np.linalg.eigvalsh(average_matrix(p))[0])
    return lam_min > tol, lam_min


def scale(p: DampingProfile, lam: float) -> DampingProfile:
    """Profile x -> lam * a(x), lam >= 0."""
    if lam < 0:
        raise InvalidInput("damping profiles scale by nonnegative factors only")
    if lam == 0:
        return zero_profile(p.n)
    if isinstance(p, ConstantProfile):
        return ConstantProfile(lam * p.matrix)
    if isinstance(p, PiecewiseConstantProfile):
        return PiecewiseConstantProfile(p.breakpoints, lam * p.values)
    if isinstance(p, BumpsProfile):
        return BumpsProfile(
            tuple((c, lam * M) for c, M in p.bumps), p.width, p.mollifier
        )
    if lam == 1.0:
        return p
    return SampledProfile(
        lambda x, _p=p, _l=lam: _l * _p.evaluate(x),
        p.n,
        description=f"{lam} * {type(p).__name__}",
    )


def add(p: DampingProfile, q: DampingProfile) -> DampingProfile:
    """Pointwise sum of two profiles of the same dimension.

    Stays inside the parametric families when possible (equal-width
    bumps with pairwise disjoint supports merge into one bumps profile);
    otherwise returns a sampled wrapper over the two summands.
    """
    if p.n != q.n:
        raise InvalidInput(f"profile dimensions differ: {p.n} != {q.n}")
    if isinstance(p, ConstantProfile) and isinstance(q, ConstantProfile):
        return ConstantProfile(p.matrix + q.matrix)
    if isinstance(p, BumpsProfile) and isinstance(q, BumpsProfile):
        if abs(p.width - q.width) < 1e-12 and type(p.mollifier) is type(q.mollifier):
            try:
                return BumpsProfile(p.bumps + q.bumps, p.width, p.mollifier)
            except InvalidInput:
                pass  # overlapping supports: fall through to the sampled wrapper
    return SampledProfile(
        lambda x, _p=p, _q=q: _p.evaluate(x) + _q.evaluate(x),
        p.n,
        description=f"{type(p).__name__} + {type(q).__name__}",
    )


# ---------------------------------------------------------------------------
# JSON profile configuration

_COMMON_KEYS = {"n", "kind"}
_KIND_KEYS = {
    "constant": {"matrices"},
    "piecewise": {"matrices", "breakpoints"},
    "bumps": {"matrices", "centers", "width"},
    "projector": {"k", "phase"},
}


def _matrix_from_pairs(rows, n: int) -> np.ndarray:
    A = np.asarray(rows, dtype=float)
    if A.shape != (n, n, 2):
        raise InvalidInput(f"matrix entries must be [re, im] pairs forming {n} x {n} rows")
    return A[..., 0] + 1j * A[..., 1]


def parse_profile_config(doc: dict) -> DampingProfile:
    """Build a profile from a parsed JSON document.

    Schema: {"n": int, "kind": "constant"|"piecewise"|"bumps"|"projector",
    "matrices": [[[re, im], ...] rows, ...] per matrix, "breakpoints"
    (piecewise), "centers"/"width" (bumps), "k"/"phase" (projector)}.
    Angles are radians.  Unknown fields are rejected.
    """
    if not isinstance(doc, dict):
        raise InvalidInput("profile config must be a JSON object")
    kind = doc.get("kind")
    if kind not in _KIND_KEYS:
        raise InvalidInput(f"unknown profile kind {kind!r}")
    allowed = _COMMON_KEYS | _KIND_KEYS[kind]
    extra = set(doc) - allowed
    if extra:
        raise InvalidInput(f"unknown config fields: {sorted(extra)}")
    missing = allowed - set(doc)
    if missing:
        raise InvalidInput(f"missing config fields: {sorted(missing)}")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise InvalidInput("n must be a positive integer")

    if kind == "projector":
        if n != 2:
            raise InvalidInput("projector profiles require n = 2")
        return ProjectorProfile(doc["k"], doc["phase"])

    mats = [_matrix_from_pairs(m, n) for m in doc["matrices"]]
    if kind == "constant":
        if len(mats) != 1:
            raise InvalidInput("constant profiles take exactly one matrix")
        profile = ConstantProfile(mats[0])
    elif kind == "piecewise":
        profile = PiecewiseConstantProfile(doc["breakpoints"], np.stack(mats))
    else:
        centers = doc["centers"]
        if len(centers) != len(mats):
            raise InvalidInput("bumps config needs one matrix per center")
        profile = BumpsProfile(tuple(zip(centers, mats)), doc["width"])

    report = validate(profile, 256)
    if not report.ok:
        raise InvalidInput(
            "profile config rejected: hermitian defect "
            f"{report.hermitian_defect:.2e}, min eigenvalue {report.min_eigenvalue_over_grid:.2e}"
        )
    return profile


def load_profile(path) -> DampingProfile:
    """Read a JSON profile configuration from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"profile config is not valid JSON: {exc}") from exc
    return parse_profile_config(doc)


def _matrix_to_pairs(M) -> list:
    A = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def profile_to_config(p: DampingProfile) -> dict:
    """JSON-serializable configuration document for a parametric profile."""
    if isinstance(p, ConstantProfile):
        return {"n": p.n, "kind": "constant", "matrices": [_matrix_to_pairs(p.matrix)]}
    if isinstance(p, PiecewiseConstantProfile):
        return {
            "n": p.n,
            "kind": "piecewise",
            "breakpoints": [float(b) for b in p.breakpoints],
            "matrices": [_matrix_to_pairs(V) for V in p.values],
        }
    if isinstance(p, BumpsProfile):
        return {
            "n": p.n,
            "kind": "bumps",
            "centers": [float(c) for c, _ in p.bumps],
            "width": p.width,
            "matrices": [_matrix_to_pairs(M) for _, M in p.bumps],
        }
    if isinstance(p, ProjectorProfile):
        return {"n": 2, "kind": "projector", "k": p.k, "phase": p.phase}
    raise InvalidInput(f"{type(p).__name__} has no configuration form")


def save_profile(p: DampingProfile, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(profile_to_config(p), fh, indent=2, sort_keys=True)
        fh.write("\n")
