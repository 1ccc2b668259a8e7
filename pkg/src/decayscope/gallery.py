"""Reference damping profiles with anomalous rate behavior.

The long-time rate of a bump profile is decided by the ordered product
of per-bump contraction factors A_j = exp(-a_j).  The builders here
place bumps so that the period map from base point 0 in the +1
direction equals the given factor product literally, which makes the
witnesses below easy to verify by hand:

  - SUPERLINEAR_TRIPLE: doubling the damping more than doubles the rate.
  - NONMONOTONE_TRIPLE: doubling the damping lowers the rate outright.
  - SUBADDITIVE_PAIR: the combined rate falls short of the sum of rates.
  - SUPERADDITIVE_PAIR: the combined rate exceeds the sum of rates.

The witness matrices are rounded to two decimals, which can push an
eigenvalue epsilon-negative; factors are lifted back to positive
definite before their logarithms are taken.
"""

from __future__ import annotations

import numpy as np

from .damping import TWO_PI, BumpsProfile
from .errors import InvalidInput
from .matrix_kernel import nearest_hpd, principal_log_hpd
from .mollifier import Mollifier

EIG_FLOOR = 1e-8

SUPERLINEAR_TRIPLE = (
    np.array([[0.87, 0.21 + 0.09j], [0.21 - 0.09j, 0.51]]),
    np.array([[0.35, -0.23 + 0.08j], [-0.23 - 0.08j, 0.61]]),
    np.array([[0.23, 0.11 - 0.21j], [0.11 + 0.21j, 0.25]]),
)

NONMONOTONE_TRIPLE = (
    np.array([[0.49, 0.46 - 0.11j], [0.46 + 0.11j, 0.52]]),
    np.array([[0.49, -0.02 + 0.3j], [-0.02 - 0.3j, 0.58]]),
    np.array([[0.52, -0.3 - 0.33j], [-0.3 + 0.33j, 0.37]]),
)

SUBADDITIVE_PAIR = (
    (
        np.array([[0.27, -0.15 - 0.15j], [-0.15 + 0.15j, 0.18]]),
        np.array([[0.31, 0.25 + 0.3j], [0.25 - 0.3j, 0.54]]),
    ),
    (
        np.array([[0.65, 0.35 - 0.28j], [0.35 + 0.28j, 0.38]]),
        np.array([[0.05, -0.04 + 0.05j], [-0.04 - 0.05j, 0.08]]),
    ),
)

SUPERADDITIVE_PAIR = (
    (
        np.array([[0.17, 0.07 - 0.11j], [0.07 + 0.11j, 0.12]]),
        np.array([[0.32, -0.09 - 0.35j], [-0.09 + 0.35j, 0.61]]),
    ),
    (
        np.array([[0.13, -0.19 + 0.04j], [-0.19 - 0.04j, 0.4]]),
        np.array([[0.18, 0.01 + 0.13j], [0.01 - 0.13j, 0.23]]),
    ),
)


def _damping_log(factor, floor):
    return -principal_log_hpd(nearest_hpd(factor, floor))


def bump_cycle_profile(
    factors,
    width: float | None = None,
    mollifier: Mollifier | None = None,
    floor: float = EIG_FLOOR,
) -> BumpsProfile:
    """Bumps profile whose period map G at (0, +1) is factors[0] @ ... @ factors[-1].

    The circle is split into equal arcs and the factor crossed last is
    listed first, matching the time ordering of the cocycle product.
    Factors must be Hermitian with eigenvalues in (0, 1] up to rounding.
    """
    m = len(factors)
    if m < 1:
        raise InvalidInput("need at least one factor matrix")
    arc = TWO_PI / m
    if width is None:
        width = 0.75 * arc
    if not (0 < width < arc):
        raise InvalidInput(f"bump width must lie in (0, {arc:.4f})")
    bumps = tuple(
        ((i + 0.5) * arc, _damping_log(factors[m - 1 - i], floor)) for i in range(m)
    )
    return BumpsProfile(bumps, width, mollifier)


def interleaved_bump_pair(
    a_factors,
    b_factors,
    width: float | None = None,
    floor: float = EIG_FLOOR,
):
    """Two antipodal two-bump profiles interleaved at quarter turns.

    Returns (a, b) with period maps A1 @ A2 and B1 @ B2, while their sum
    has period map A1 @ B1 @ A2 @ B2; the quarter-arc layout makes all
    three products literal.
    """
    if len(a_factors) != 2 or len(b_factors) != 2:
        raise InvalidInput("interleaved pairs take exactly two factors each")
    arc = TWO_PI / 4.0
    if width is None:
        width = 0.75 * arc
    if not (0 < width < arc):
        raise InvalidInput(f"bump width must lie in (0, {arc:.4f})")
    (A1, A2), (B1, B2) = a_factors, b_factors
    centers = [(i + 0.5) * arc for i in range(4)]
    a = BumpsProfile(
        ((centers[1], _damping_log(A2, floor)), (centers[3], _damping_log(A1, floor))),
        width,
    )
    b = BumpsProfile(
        ((centers[0], _damping_log(B2, floor)), (centers[2], _damping_log(B1, floor))),
        width,
    )
    return a, b


def reference_profile(name: str):
    """Build a named gallery profile (pairs return the two summands)."""
    if name == "scaling-super":
        return bump_cycle_profile(SUPERLINEAR_TRIPLE)
    if name == "scaling-sub":
        return bump_cycle_profile(NONMONOTONE_TRIPLE)
    if name == "additivity-sub":
        return interleaved_bump_pair(*SUBADDITIVE_PAIR)
    if name == "additivity-super":
        return interleaved_bump_pair(*SUPERADDITIVE_PAIR)
    raise InvalidInput(f"unknown gallery profile {name!r}")
