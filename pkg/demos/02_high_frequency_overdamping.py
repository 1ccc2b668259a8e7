# # High-frequency overdamping: rates that refuse to scale
#
# With matrix-valued damping the cocycle factors along a loop no longer
# commute, and the long-time rate C_infinity(lam * a) can behave very
# strangely as the damping is rescaled: it can grow faster than
# linearly, or outright *decrease* while the damping increases.  On the
# circle everything reduces to the spectral radius of a product of
# per-bump contraction factors, so these effects are cheap to map out.

# +
import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from decayscope import rate_at_scale, slope_infinity, slope_zero
from decayscope.gallery import (
    NONMONOTONE_TRIPLE,
    SUPERLINEAR_TRIPLE,
    bump_cycle_profile,
)

# -

# Two three-bump profiles built from reference factor triples: the
# first doubles its rate more than twice under doubled damping, the
# second loses rate when doubled.

# +
p_super = bump_cycle_profile(SUPERLINEAR_TRIPLE)
p_nonmono = bump_cycle_profile(NONMONOTONE_TRIPLE)

for name, p in [("superlinear", p_super), ("non-monotone", p_nonmono)]:
    c1, c2 = rate_at_scale(p, 1.0), rate_at_scale(p, 2.0)
    print(f"{name}: C(a) = {c1:.4f}, C(2a) = {c2:.4f}, ratio = {c2 / c1:.3f}")
# -

# The full scaling curves.  Rates are reported in the ln||G|| convention;
# double them for the ln||G||^2 convention.

# +
lams = np.linspace(0.01, 6.0, 240)
fig, ax = plt.subplots(figsize=(7, 4))
for name, p, style in [("superlinear triple", p_super, "-"), ("non-monotone triple", p_nonmono, "--")]:
    ax.plot(lams, [rate_at_scale(p, lam) for lam in lams], style, lw=2, label=name)
ax.set_xlabel("damping scale lam")
ax.set_ylabel("C_infinity(lam a)")
ax.legend()
fig.tight_layout()
fig.savefig("demo02_scaling_curves.png", dpi=120)
print("wrote demo02_scaling_curves.png")
# -

# Despite the wild mid-range behavior, C_infinity(lam a)/lam settles to
# finite limits at both ends, extracted here by Richardson extrapolation
# on exact factor powers.

# +
for name, p in [("superlinear", p_super), ("non-monotone", p_nonmono)]:
    rep = slope_infinity(p)
    print(
        f"{name}: slope at infinity = {rep.slope_infinity:.6f}, "
        f"slope at zero = {rep.slope_zero:.6f}, "
        f"ordering (inf <= zero): {rep.ordering_observed}"
    )
# -

# The same slopes for a five-bump random profile, where the scaled
# ratio lam -> C_infinity(lam a)/lam need not be monotone either.

# +
rng = np.random.default_rng(7)


def haar_factor():
    Z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    w = rng.uniform(0.05, 1.0, 2)
    return (Q * w) @ Q.conj().T


five = bump_cycle_profile([haar_factor() for _ in range(5)])
lams = np.geomspace(0.05, 120.0, 200)
ratio = [rate_at_scale(five, lam) / lam for lam in lams]

fig, ax = plt.subplots(figsize=(7, 4))
ax.semilogx(lams, ratio, lw=2)
ax.axhline(slope_zero(five), color="gray", ls=":", label="limit at 0")
ax.axhline(slope_infinity(five).slope_infinity, color="k", ls="--", label="limit at infinity")
ax.set_xlabel("damping scale lam")
ax.set_ylabel("C_infinity(lam a) / lam")
ax.legend()
fig.tight_layout()
fig.savefig("demo02_slope_ratio.png", dpi=120)
print("wrote demo02_slope_ratio.png")
# -
