import numpy as np
import pytest

from decayscope import (
    BeamSpec,
    ConstantProfile,
    InvalidInput,
    ProjectorProfile,
    WaveState,
    beam_transport_check,
    default_beam_cutoff,
    dissipation_integral,
    eigenfunction_state,
    energy,
    energy_outside_ball,
    energy_trace,
    evolution_residual,
    evolve,
    fit_decay_rate,
    gaussian_beam_initial,
    generic_state,
    second_moment,
    trace_to_csv,
    zero_profile,
)
from decayscope.gallery import SUPERLINEAR_TRIPLE, bump_cycle_profile
from decayscope.spectrum import assemble
from decayscope.wave_sim import EnergyTrace
from tests.conftest import random_bumps_profile


def asymmetric_profile():
    from decayscope import BumpsProfile

    M1 = np.array([[1.1, 0.2], [0.2, 0.5]])
    M2 = np.array([[0.3, -0.1j], [0.1j, 0.8]])
    return BumpsProfile(((0.9, M1), (3.6, M2)), 1.2)


def single_mode_state(K, n, k, comp=0, travelling=True):
    u = np.zeros((2 * K + 1, n), dtype=complex)
    v = np.zeros((2 * K + 1, n), dtype=complex)
    u[K + k, comp] = 1.0
    if travelling:
        v[K + k, comp] = 1j * k
    return WaveState(K, n, u, v)


@pytest.fixture
def triple_profile():
    return bump_cycle_profile(SUPERLINEAR_TRIPLE)


class TestEnergy:
    def test_zero_state(self):
        assert energy(WaveState(4, 2, np.zeros((9, 2)), np.zeros((9, 2)))) == 0.0

    def test_constants_carry_no_energy(self):
        u = np.zeros((9, 2), dtype=complex)
        u[4] = [3.0, -1.0j]  # mode zero only
        assert energy(WaveState(4, 2, u, np.zeros((9, 2)))) == 0.0

    def test_single_mode_parseval(self):
        # mode 1, unit coefficient, no velocity: E = pi * 1^2
        st = single_mode_state(4, 2, 1, travelling=False)
        assert energy(st) == pytest.approx(np.pi, rel=1e-14)


class TestEvolve:
    def test_free_single_mode_phase(self):
        st = single_mode_state(8, 2, 3)
        states = evolve(zero_profile(2), st, 2.0, 0.05)
        for s in states:
            expect = np.exp(3j * s.t)
            assert s.u_hat[8 + 3, 0] == pytest.approx(expect, abs=1e-12)
            assert abs(energy(s) - energy(st)) < 1e-9 * energy(st)

    def test_free_conservation_long_run(self):
        st = generic_state(2, 12)
        states = evolve(zero_profile(2), st, 100.0, 1.0 / 32, stride=64)
        E0 = energy(states[0])
        drift = max(abs(energy(s) - E0) for s in states)
        assert drift < 1e-9 * E0

    def test_modewise_matches_eig(self):
        p = ConstantProfile(np.array([[0.5, 0.1], [0.1, 0.3]]))
        st = generic_state(2, 10, seed=4)
        out = evolve(p, st, 3.0, 0.02, method="modewise")[-1]
        ref = evolve(p, st, 3.0, 0.02, method="eig")[-1]
        assert np.abs(out.u_hat - ref.u_hat).max() < 1e-10
        assert np.abs(out.v_hat - ref.v_hat).max() < 1e-10

    def test_split_fourth_order_self_convergence(self, triple_profile):
        st = generic_state(2, 16, seed=7)
        ref = evolve(triple_profile, st, 1.0, 0.0005, method="split")[-1]
        errs = []
        for dt in (0.004, 0.002):
            s = evolve(triple_profile, st, 1.0, dt, method="split")[-1]
            errs.append(np.abs(s.u_hat - ref.u_hat).max())
        assert errs[0] / errs[1] > 10.0  # ~16 for a fourth-order scheme

    def test_split_matches_eig_at_resolved_cutoff(self, triple_profile):
        st = generic_state(2, 48, seed=3)
        a = evolve(triple_profile, st, 1.0, 0.002, method="split")[-1]
        b = evolve(triple_profile, st, 1.0, 0.005, method="eig")[-1]
        # residual difference is the spatial truncation gap at K = 48
        assert np.abs(a.u_hat - b.u_hat).max() < 2e-4

    def test_energy_monotone_under_damping(self, rng):
        p = random_bumps_profile(rng)
        tr = energy_trace(p, generic_state(2, 16, seed=11), 5.0, 0.01)
        assert np.all(np.diff(tr.energies) <= 1e-9 * tr.energies[0])

    def test_projector_special_solution_undamped(self):
        # u = (sin kx, sin(kx + phase)) travelling at speed k lies in the
        # pointwise kernel of the damping, so its energy is conserved
        k, phase, K = 5, 1.0, 48
        u = np.zeros((2 * K + 1, 2), dtype=complex)
        u[K + k, 0] = 1 / 2j
        u[K - k, 0] = -1 / 2j
        u[K + k, 1] = np.exp(1j * phase) / 2j
        u[K - k, 1] = -np.exp(-1j * phase) / 2j
        st = WaveState(K, 2, u, 1j * k * u)
        p = ProjectorProfile(k, phase)
        tr = energy_trace(p, st, 20.0, 0.01, stride=20)
        drift = np.abs(tr.energies - tr.energies[0]).max()
        assert drift < 1e-6 * tr.energies[0]
        assert abs(fit_decay_rate(tr, (0.0, 20.0))) < 1e-6

    def test_eigenfunction_envelope(self, triple_profile):
        op = assemble(triple_profile, 16)
        st, lam = eigenfunction_state(op, near=2j)
        states = evolve(triple_profile, st, 10.0, 0.01, method="eig", stride=100)
        for s in states:
            expect = np.exp(2.0 * lam.real * s.t)
            assert abs(energy(s) - expect) < 1e-6 * expect

    def test_energy_balance(self, triple_profile):
        st = generic_state(2, 20, seed=9)
        states = evolve(triple_profile, st, 2.0, 0.002, method="eig", stride=5)
        dE = energy(states[0]) - energy(states[-1])
        diss = dissipation_integral(triple_profile, states)
        assert abs(diss - dE) < 1e-4 * dE

    def test_residual_contract(self, triple_profile):
        st = generic_state(2, 16, seed=2)
        assert evolution_residual(triple_profile, st, 5.0) < 1e-6

    def test_dt_precondition(self):
        st = generic_state(2, 16)
        with pytest.raises(InvalidInput):
            evolve(zero_profile(2), st, 1.0, 0.2)  # dt > 0.5/K

    def test_unknown_method(self):
        st = generic_state(2, 8)
        with pytest.raises(InvalidInput):
            evolve(zero_profile(2), st, 1.0, 0.01, method="leapfrog")


class TestRateFitting:
    def test_exact_exponential(self):
        ts = np.linspace(0.0, 10.0, 200)
        tr = EnergyTrace(times=ts, energies=np.exp(-1.3 * ts))
        assert fit_decay_rate(tr, (0.0, 10.0)) == pytest.approx(1.3, abs=1e-9)
        assert tr.fit_residual < 1e-12

    def test_constant_damping_rate(self):
        p = ConstantProfile(0.3 * np.eye(2))
        tr = energy_trace(p, generic_state(2, 24), 40.0, 0.02)
        rate = fit_decay_rate(tr, (20.0, 40.0))
        assert 0.57 <= rate <= 0.63

    def test_window_validation(self):
        ts = np.linspace(0.0, 1.0, 50)
        tr = EnergyTrace(times=ts, energies=np.exp(-ts))
        with pytest.raises(InvalidInput):
            fit_decay_rate(tr, (0.9, 1.0))  # too few samples
        tr2 = EnergyTrace(times=ts, energies=np.full(50, 1e-40))
        with pytest.raises(InvalidInput):
            fit_decay_rate(tr2, (0.0, 1.0))

    def test_csv_roundtrip(self, tmp_path):
        ts = np.linspace(0.0, 1.0, 5)
        tr = EnergyTrace(times=ts, energies=np.exp(-0.7 * ts))
        path = tmp_path / "trace.csv"
        trace_to_csv(tr, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,E,logE"
        t0, e0, log0 = lines[2].split(",")
        assert float(t0) == ts[1]
        assert float(e0) == tr.energies[1]
        assert float(log0) == np.log(tr.energies[1])


class TestBeams:
    def test_normalized_energy(self):
        p = ConstantProfile(0.5 * np.eye(2))
        st = gaussian_beam_initial(p, BeamSpec(k=32, x0=1.0, direction=1))
        assert energy(st) == pytest.approx(1.0, abs=1e-3)

    def test_free_beam_keeps_unit_energy(self):
        st = gaussian_beam_initial(zero_profile(2), BeamSpec(k=32, x0=0.5, direction=-1))
        states = evolve(zero_profile(2), st, 3.0, min(0.5 / st.K, 2e-3), stride=10**9)
        assert abs(energy(states[-1]) - 1.0) < 1e-6

    def test_width_halves_when_k_doubles(self):
        p = ConstantProfile(0.5 * np.eye(2))
        m64 = second_moment(gaussian_beam_initial(p, BeamSpec(k=64, x0=1.0, direction=1)), 1.0)
        m128 = second_moment(gaussian_beam_initial(p, BeamSpec(k=128, x0=1.0, direction=1)), 1.0)
        assert m128 / m64 == pytest.approx(0.5, abs=0.02)

    def test_localization_order(self):
        # energy outside a k^(-1/4) arc around the transported center must
        # decay at least like k^(-1/2); the slope here is far steeper
        p = ConstantProfile(0.5 * np.eye(2))
        ks = [32, 64, 128]
        masses = []
        for k in ks:
            spec = BeamSpec(k=k, x0=1.0, direction=1)
            st = gaussian_beam_initial(p, spec)
            states = evolve(p, st, np.pi, min(0.5 / st.K, 2e-3), stride=10**9)
            out = energy_outside_ball(states[-1], 1.0 + np.pi, k ** (-0.25))
            masses.append(out / energy(states[-1]))
        slope = np.polyfit(np.log(ks), np.log(masses), 1)[0]
        assert slope <= -0.5

    def test_transport_constant_profile(self):
        p = ConstantProfile(0.5 * np.eye(2))
        ratio, predicted, gap = beam_transport_check(p, BeamSpec(k=128, x0=1.0, direction=1), np.pi)
        assert predicted == pytest.approx(np.exp(-np.pi), rel=1e-10)
        assert abs(ratio - predicted) <= 0.1 * predicted
        gaps = [
            beam_transport_check(p, BeamSpec(k=k, x0=1.0, direction=1), np.pi)[2]
            for k in (32, 64, 128)
        ]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_transport_zero_damping(self):
        ratio, predicted, gap = beam_transport_check(
            zero_profile(2), BeamSpec(k=32, x0=0.0, direction=1), 2.0
        )
        assert predicted == 1.0
        assert gap < 1e-6

    def test_transport_asymmetric_profile_both_directions(self):
        # bump order matters here, so shrinking gaps in k validate the
        # direction convention end to end
        p = asymmetric_profile()
        for direction in (1, -1):
            gaps = [
                beam_transport_check(p, BeamSpec(k=k, x0=0.2, direction=direction), np.pi)[2]
                for k in (32, 64, 128)
            ]
            assert gaps[0] > gaps[1] > gaps[2]

    def test_wraparound_guard(self):
        with pytest.raises(InvalidInput, match="wraps"):
            gaussian_beam_initial(
                zero_profile(2), BeamSpec(k=8, x0=0.0, direction=1, sigma=0.01)
            )

    def test_cutoff_guard(self):
        with pytest.raises(InvalidInput, match="cutoff"):
            gaussian_beam_initial(zero_profile(2), BeamSpec(k=64, x0=0.0, direction=1), K=70)

    def test_spec_validation(self):
        with pytest.raises(InvalidInput):
            BeamSpec(k=4, x0=0.0, direction=1)
        with pytest.raises(InvalidInput):
            BeamSpec(k=16, x0=0.0, direction=0)
        with pytest.raises(InvalidInput):
            BeamSpec(k=16, x0=0.0, direction=1, sigma=-1.0)
        assert default_beam_cutoff(BeamSpec(k=16, x0=0.0, direction=1)) > 16
