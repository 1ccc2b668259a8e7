import numpy as np
import pytest

from decayscope import (
    ConstantProfile,
    InvalidInput,
    ProjectorProfile,
    c_infinity,
    d_of_r,
    dinf_estimate,
    evaluate,
    zero_profile,
)
from decayscope.gallery import SUPERLINEAR_TRIPLE, bump_cycle_profile
from decayscope.spectrum import alpha, assemble, default_zero_tol, spectrum
from tests.conftest import random_bumps_profile


def constant_oracle(a0, K):
    """Per-mode quadratic roots lambda^2 + 2 a0 lambda + k^2 = 0."""
    out = []
    for k in range(0, K + 1):
        disc = complex(a0 * a0 - k * k)
        root = np.sqrt(disc)
        out.extend([-a0 + root, -a0 - root])
    return np.array(out)


class TestAssemble:
    def test_constant_coefficients(self):
        A = 0.5 * np.eye(2)
        op = assemble(ConstantProfile(A), 8)
        assert np.abs(op.coeff(0) - A).max() < 1e-14
        for m in (1, -3, 16):
            assert np.abs(op.coeff(m)).max() < 1e-14
        with pytest.raises(InvalidInput):
            op.coeff(17)

    def test_constant_modes_decouple(self):
        # no convolution off the diagonal: each mode k carries its own
        # 2n x 2n block [[0, I], [-k^2 I, -2 A]]
        a0, K, n = 0.5, 4, 2
        op = assemble(ConstantProfile(a0 * np.eye(n)), K)
        N = n * (2 * K + 1)
        damp = op.matrix[N:, N:]
        stiff = op.matrix[N:, :N]
        for i in range(2 * K + 1):
            for j in range(2 * K + 1):
                block = damp[i * n : (i + 1) * n, j * n : (j + 1) * n]
                expect = -2.0 * a0 * np.eye(n) if i == j else 0.0
                assert np.abs(block - expect).max() < 1e-14
        k = np.arange(-K, K + 1)
        assert np.abs(stiff - np.kron(np.diag(-(k.astype(float) ** 2)), np.eye(n))).max() < 1e-14

    def test_zero_damping_free_spectrum(self):
        # every signed mode k contributes the pair {+ik, -ik} with
        # multiplicity n, so the value ik carries total multiplicity 2n
        K, n = 8, 2
        op = assemble(zero_profile(n), K)
        w = np.linalg.eigvals(op.matrix)
        expected = np.array(
            [s * 1j * k for k in range(-K, K + 1) for s in (1, -1) for _ in range(n)]
        )
        # sort by imaginary part; real parts are pure eigensolver noise here
        w = w[np.lexsort((w.real, w.imag))]
        expected = expected[np.lexsort((expected.real, expected.imag))]
        assert np.abs(w - expected).max() < 1e-8

    def test_projector_quarter_phase_band_limited(self):
        # at phase pi/2 the projector entries are trig polynomials in 2 k x,
        # so only modes 0 and +-2k survive
        k = 5
        op = assemble(ProjectorProfile(k, np.pi / 2), 12)
        for m in range(-24, 25):
            mag = np.abs(op.coeff(m)).max()
            if m in (0, 2 * k, -2 * k):
                assert mag > 1e-3
            else:
                assert mag < 1e-12

    def test_projector_generic_phase_decays(self):
        # generic phase spreads the content over multiples of 2k with
        # geometric decay; verify concentration on those modes
        k = 5
        op = assemble(ProjectorProfile(k, 1.0), 12)
        assert np.abs(op.coeff(10)).max() > 1e-2
        assert np.abs(op.coeff(20)).max() < np.abs(op.coeff(10)).max()
        for m in range(1, 10):
            assert np.abs(op.coeff(m)).max() < 1e-12

    def test_hermitian_coefficient_symmetry(self, rng):
        op = assemble(random_bumps_profile(rng), 10)
        for m in range(-20, 21):
            assert np.abs(op.coeff(-m) - op.coeff(m).conj().T).max() < 1e-14

    def test_min_cutoff(self):
        with pytest.raises(InvalidInput):
            assemble(zero_profile(2), 3)


class TestSpectrum:
    def test_constant_half_matches_oracle(self):
        K, a0 = 32, 0.5
        rep = spectrum(assemble(ConstantProfile(a0 * np.eye(2)), K))
        oracle = constant_oracle(a0, K)
        nonzero = rep.eigenvalues[np.abs(rep.eigenvalues) > rep.zero_tol]
        for lam in nonzero:
            assert np.abs(lam - oracle).min() < 1e-8
        assert rep.d0 == pytest.approx(-0.5, abs=1e-8)
        assert rep.weak_stab

    def test_overdamped_constant(self):
        rep = spectrum(assemble(ConstantProfile(2.0 * np.eye(2)), 32))
        assert rep.d0 == pytest.approx(-2.0 + np.sqrt(3.0), abs=1e-8)

    def test_projector_imaginary_eigenvalue(self):
        rep = spectrum(assemble(ProjectorProfile(5, 1.0), 48))
        assert np.abs(rep.eigenvalues - 5j).min() < 5e-6
        assert not rep.weak_stab
        assert abs(rep.d0) < 1e-6

    def test_zero_damping_not_weakly_stable(self):
        rep = spectrum(assemble(zero_profile(2), 16))
        assert not rep.weak_stab

    def test_conjugation_closure(self, rng):
        rep = spectrum(assemble(random_bumps_profile(rng), 16))
        assert rep.conjugation_defect < 1e-6

    def test_real_part_band(self, rng):
        p = random_bumps_profile(rng)
        sup_norm = max(
            np.linalg.norm(evaluate(p, x), 2) for x in np.linspace(0, 2 * np.pi, 512)
        )
        rep = spectrum(assemble(p, 16))
        assert rep.eigenvalues.real.max() <= 1e-6
        assert rep.eigenvalues.real.min() >= -2.0 * sup_norm - 1e-6

    def test_kernel_multiplicity(self, rng):
        p = random_bumps_profile(rng, n=3)
        rep = spectrum(assemble(p, 12))
        assert (np.abs(rep.eigenvalues) <= rep.zero_tol).sum() >= 3

    def test_d0_refinement(self):
        for p in (
            ConstantProfile(0.7 * np.eye(2)),
            ProjectorProfile(3, 1.0),
            bump_cycle_profile(SUPERLINEAR_TRIPLE),
        ):
            d_coarse = spectrum(assemble(p, 24)).d0
            d_fine = spectrum(assemble(p, 48)).d0
            assert abs(d_coarse - d_fine) < 1e-6

    def test_zero_tol_scales_with_operator(self):
        small = default_zero_tol(assemble(zero_profile(2), 8))
        large = default_zero_tol(assemble(zero_profile(2), 64))
        assert large > small


class TestDerivedQuantities:
    def test_d_of_r_zero_damping(self):
        rep = spectrum(assemble(zero_profile(2), 16))
        assert d_of_r(rep, 0.5) == pytest.approx(0.0, abs=1e-10)

    def test_d_of_r_constant(self):
        rep = spectrum(assemble(ConstantProfile(0.5 * np.eye(2)), 16))
        assert d_of_r(rep, rep.zero_tol) == pytest.approx(-0.5, abs=1e-8)

    def test_d_of_r_beyond_spectrum(self):
        rep = spectrum(assemble(zero_profile(2), 8))
        assert d_of_r(rep, 1e6) is None
        with pytest.raises(InvalidInput):
            d_of_r(rep, -1.0)

    def test_dinf_constant(self):
        rep = spectrum(assemble(ConstantProfile(0.5 * np.eye(2)), 32))
        assert dinf_estimate(rep) == pytest.approx(-0.5, abs=1e-6)

    def test_dinf_zero_damping(self):
        rep = spectrum(assemble(zero_profile(2), 32))
        assert dinf_estimate(rep) == pytest.approx(0.0, abs=1e-10)

    def test_dinf_projector_consistency(self):
        p = ProjectorProfile(5, 1.0)
        rep = spectrum(assemble(p, 48))
        assert dinf_estimate(rep) <= -c_infinity(p) + 1e-2

    def test_dinf_requires_enough_eigenvalues(self):
        rep = spectrum(assemble(zero_profile(1), 4))
        with pytest.raises(InvalidInput):
            dinf_estimate(rep)
        rep32 = spectrum(assemble(zero_profile(2), 32))
        with pytest.raises(InvalidInput):
            dinf_estimate(rep32, fraction=1.5)

    def test_dinf_trend_for_strong_damping(self):
        # strongly damped profiles approach the high-frequency regime only
        # at large K; check the banded estimate moves toward the cocycle
        # rate rather than asserting the desk-scale inequality
        p = bump_cycle_profile(SUPERLINEAR_TRIPLE)
        cinf = c_infinity(p)
        gaps = []
        for K in (24, 48):
            est = spectrum(assemble(p, K)).dinf_estimate
            gaps.append(abs(-est - cinf))
        assert gaps[1] <= gaps[0] + 1e-9


class TestAlpha:
    def test_balanced_constant(self):
        rep = alpha(ConstantProfile(0.5 * np.eye(2)), K=32)
        assert rep.alpha == pytest.approx(1.0, abs=1e-8)
        assert rep.c_infinity_sec4 == pytest.approx(2 * rep.c_infinity_sec1, rel=1e-14)
        assert rep.gcc and rep.weak_stab

    def test_low_frequency_overdamping(self):
        rep = alpha(ConstantProfile(2.0 * np.eye(2)), K=32)
        assert rep.alpha == pytest.approx(2.0 * (2.0 - np.sqrt(3.0)), abs=1e-6)
        # spectral branch binds: the cocycle rate is far larger
        assert rep.c_infinity_sec1 > -rep.d0 + 1.0

    def test_projector_alpha_zero_with_positive_cocycle_rate(self):
        rep = alpha(ProjectorProfile(5, 1.0), K=48)
        assert abs(rep.alpha) <= 1e-6
        assert rep.c_infinity_sec1 > 1e-2
        assert rep.gcc and not rep.weak_stab

    def test_report_fields(self):
        rep = alpha(ConstantProfile(0.3 * np.eye(2)), K=16)
        doc = rep.to_dict()
        assert doc["K"] == 16
        assert set(doc["timings_ms"]) == {"assemble", "eigensolve", "cocycle"}
        assert doc["alpha"] == pytest.approx(2.0 * min(-doc["d0"], doc["c_infinity"]["sec1"]))
