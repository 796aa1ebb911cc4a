"""Boosts, the de Broglie map, lattice energy-momentum, total differences."""

import math
from fractions import Fraction

import numpy as np
import pytest

from latticewave import (
    DomainError,
    GridSpec,
    INFINITE,
    LatticeStep,
    ParticleState,
    boost_matrix,
    debroglie_map,
    discrete_energy_momentum,
    energy_momentum_squared_exact,
    four_difference_invariant,
    phase_velocity,
    printed_momentum_magnitude,
    printed_wave_number_magnitude,
    step_velocity,
    total_difference_mass_shell,
    transform_particle,
    transform_particle_scalar,
    transform_wave,
    transform_wave_scalar,
)

ETA = np.diag([1.0, -1.0, -1.0, -1.0])


class TestBoostMatrix:
    def test_zero_velocity_is_identity(self):
        np.testing.assert_array_equal(boost_matrix([0, 0, 0], 1.0), np.eye(4))

    def test_standard_entries_at_0p6c(self):
        # gamma = (1 - 0.36)^(-1/2) = 1.25 by hand
        L = boost_matrix([0.6, 0, 0], 1.0)
        assert L[0, 0] == pytest.approx(1.25, abs=1e-15)
        assert L[0, 1] == pytest.approx(-0.75, abs=1e-15)

    def test_metric_preservation(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            v = rng.uniform(-0.5, 0.5, 3)
            L = boost_matrix(v, 1.0)
            np.testing.assert_allclose(L.T @ ETA @ L, ETA, rtol=0, atol=1e-13)

    def test_inverse_boost(self):
        v = np.array([0.3, -0.4, 0.5])
        L = boost_matrix(v, 1.0) @ boost_matrix(-v, 1.0)
        np.testing.assert_allclose(L, np.eye(4), rtol=0, atol=1e-12)

    def test_superluminal_rejected(self):
        with pytest.raises(DomainError):
            boost_matrix([1.0, 0, 0], 1.0)
        with pytest.raises(DomainError):
            boost_matrix([2.0, 1.0, 0], 2.0)


class TestTransformWave:
    def test_zero_boost_identity(self):
        w, k = transform_wave(1.7, [0.3, 0.2, -0.1], [0, 0, 0], 1.0)
        assert w == pytest.approx(1.7)
        np.testing.assert_allclose(k, [0.3, 0.2, -0.1])

    def test_light_wave_doppler(self):
        # gamma (w - v k) = 1.25 * 0.4 = 0.5
        w, k = transform_wave(1.0, [1.0, 0, 0], [0.6, 0, 0], 1.0)
        assert w == pytest.approx(0.5, abs=1e-14)
        np.testing.assert_allclose(k, [0.5, 0, 0], atol=1e-14)

    def test_boost_into_matching_rest_frame(self):
        w, k = transform_wave(1.25, [0.75, 0, 0], [0.6, 0, 0], 1.0)
        assert w == pytest.approx(1.0, abs=1e-14)
        np.testing.assert_allclose(k, [0, 0, 0], atol=1e-14)

    def test_scalar_form_matches_matrix(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            k = rng.uniform(-2, 2, 3)
            if np.linalg.norm(k) < 1e-3:
                continue
            w = rng.uniform(0.5, 3.0)
            v = rng.uniform(-0.55, 0.55, 3)
            w_matrix, _ = transform_wave(w, k, v, 1.0)
            w_scalar = transform_wave_scalar(w, k, v, 1.0)
            assert w_matrix == pytest.approx(w_scalar, rel=1e-12, abs=1e-12)

    def test_zero_wavenumber_scalar_form_rejected(self):
        with pytest.raises(DomainError):
            transform_wave_scalar(1.0, [0, 0, 0], [0.5, 0, 0], 1.0)

    def test_printed_magnitude_parallel_and_perpendicular(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            k_mag = rng.uniform(0.1, 2.0)
            w = rng.uniform(1.0, 3.0) * k_mag
            k = np.array([k_mag, 0, 0])
            v_par = np.array([rng.uniform(-0.9, 0.9), 0, 0])
            v_perp = np.array([0, rng.uniform(-0.9, 0.9), 0])
            for v in (v_par, v_perp):
                _, kp = transform_wave(w, k, v, 1.0)
                printed = printed_wave_number_magnitude(w, k, v, 1.0)
                assert np.linalg.norm(kp) == pytest.approx(printed, rel=1e-10, abs=1e-10)

    def test_printed_magnitude_oblique_recorded(self):
        """Oblique deviations are recorded, not asserted; print the observed worst case."""
        rng = np.random.default_rng(4)
        worst = 0.0
        for _ in range(200):
            k = np.array([rng.uniform(0.1, 2.0), 0, 0])
            w = rng.uniform(1.0, 3.0) * k[0]
            v = rng.uniform(-0.5, 0.5, 3)
            _, kp = transform_wave(w, k, v, 1.0)
            printed = printed_wave_number_magnitude(w, k, v, 1.0)
            worst = max(worst, abs(float(np.linalg.norm(kp)) - printed))
        print(f"printed |k'| oblique worst deviation: {worst:.3e}")


class TestTransformParticle:
    def test_zero_boost_identity(self):
        s = ParticleState.from_momentum([0.4, -0.2, 0.1], 1.5, 1.0)
        out = transform_particle(s, [0, 0, 0], 1.0)
        assert out.E == pytest.approx(s.E)
        np.testing.assert_allclose(out.p, s.p)

    def test_boost_to_rest_frame(self):
        # E = sqrt(1 + 0.75^2) = 1.25, u = 0.6; boosting by u lands at rest
        s = ParticleState.from_momentum([0.75, 0, 0], 1.0, 1.0)
        out = transform_particle(s, [0.6, 0, 0], 1.0)
        assert out.E == pytest.approx(1.0, abs=1e-14)
        np.testing.assert_allclose(out.p, [0, 0, 0], atol=1e-14)

    def test_massless_stays_lightlike(self):
        rng = np.random.default_rng(5)
        s = ParticleState.from_momentum([1.0, 0.5, -0.3], 0.0, 1.0)
        for _ in range(10):
            s = transform_particle(s, rng.uniform(-0.5, 0.5, 3), 1.0)
            assert s.E == pytest.approx(s.momentum_magnitude(), rel=1e-12)

    def test_scalar_form_matches_matrix(self):
        s = ParticleState.from_momentum([0.3, 0.4, 0.0], 1.2, 1.0)
        v = [0.2, -0.3, 0.4]
        out = transform_particle(s, v, 1.0)
        assert out.E == pytest.approx(transform_particle_scalar(s, v, 1.0), rel=1e-13)

    def test_printed_momentum_magnitude_parallel_perpendicular(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            p = np.array([rng.uniform(0.1, 2.0), 0, 0])
            s = ParticleState.from_momentum(p, rng.uniform(0.1, 2.0), 1.0)
            for v in (np.array([rng.uniform(-0.9, 0.9), 0, 0]), np.array([0, rng.uniform(-0.9, 0.9), 0])):
                out = transform_particle(s, v, 1.0)
                printed = printed_momentum_magnitude(s, v, 1.0)
                assert out.momentum_magnitude() == pytest.approx(printed, rel=1e-10, abs=1e-10)

    def test_mass_shell_preserved_under_boost_chains(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            s = ParticleState.from_momentum(rng.uniform(-2, 2, 3), rng.uniform(0.1, 3.0), 1.0)
            for _ in range(5):
                v = rng.uniform(-0.55, 0.55, 3)
                s = transform_particle(s, v, 1.0)
            assert s.mass_shell_residual(1.0) <= 1e-10

    def test_invalid_state_rejected(self):
        bad = ParticleState(E=1.0, p=np.array([5.0, 0, 0]), m0=1.0, u=np.array([0.1, 0, 0]))
        with pytest.raises(DomainError):
            transform_particle(bad, [0.1, 0, 0], 1.0)


class TestDeBroglie:
    def test_map_and_velocity_product(self):
        s = ParticleState.from_momentum([0.75, 0, 0], 1.0, 1.0)
        w, k = debroglie_map(s, 1.0)
        assert w == pytest.approx(1.25)
        np.testing.assert_allclose(k, [0.75, 0, 0])
        vphi = phase_velocity(w, k)
        assert vphi == pytest.approx(5.0 / 3.0)
        assert s.speed() == pytest.approx(0.6)
        assert vphi * s.speed() == pytest.approx(1.0, rel=1e-14)  # v_phi u = c^2

    def test_rest_state_has_symbolic_infinite_phase_velocity(self):
        s = ParticleState.at_rest(2.0, 1.0)
        w, k = debroglie_map(s, 1.0)
        assert phase_velocity(w, k) is INFINITE

    def test_photon_phase_velocity_is_c(self):
        s = ParticleState.from_momentum([2.0, 0, 0], 0.0, 1.0)
        w, k = debroglie_map(s, 1.0)
        assert phase_velocity(w, k) == pytest.approx(1.0)

    def test_group_velocity_is_particle_speed(self):
        """dE/dp by central finite differences equals |u| on the shell."""
        for p, m0 in [(0.75, 1.0), (2.0, 0.5), (0.1, 3.0)]:
            s = ParticleState.from_momentum([p, 0, 0], m0, 1.0)
            h = 1e-6
            e_plus = ParticleState.from_momentum([p + h, 0, 0], m0, 1.0).E
            e_minus = ParticleState.from_momentum([p - h, 0, 0], m0, 1.0).E
            assert (e_plus - e_minus) / (2 * h) == pytest.approx(s.speed(), rel=1e-8)


class TestDiscreteEnergyMomentum:
    def test_rest_step(self):
        s = discrete_energy_momentum(1.5, LatticeStep(dn=3), GridSpec())
        assert s.E == pytest.approx(1.5)
        np.testing.assert_array_equal(s.p, [0, 0, 0])

    def test_hand_example_5_3(self):
        # sqrt(25 - 9) = 4, so E = 5/4, p = 3/4, u = 3/5
        s = discrete_energy_momentum(1.0, LatticeStep(dn=5, dj=(3, 0, 0)), GridSpec())
        assert s.E == pytest.approx(1.25, abs=1e-15)
        assert s.p[0] == pytest.approx(0.75, abs=1e-15)
        assert s.u[0] == pytest.approx(0.6, abs=1e-15)

    def test_mass_shell_on_random_timelike_steps(self):
        rng = np.random.default_rng(8)
        grid = GridSpec(tau=0.7, eps=0.3, c=1.9)
        checked = 0
        while checked < 300:
            dn = int(rng.integers(1, 40))
            dj = tuple(int(x) for x in rng.integers(-15, 16, 3))
            cdt2 = (grid.c * dn * grid.tau) ** 2
            dx2 = sum((d * grid.eps) ** 2 for d in dj)
            if cdt2 <= dx2:
                continue
            m0 = float(rng.uniform(0.05, 5.0))
            s = discrete_energy_momentum(m0, LatticeStep(dn=dn, dj=dj), grid)
            assert s.mass_shell_residual(grid.c) <= 1e-12
            checked += 1

    def test_spacelike_and_lightlike_rejected(self):
        with pytest.raises(DomainError):
            discrete_energy_momentum(1.0, LatticeStep(dn=1, dj=(2, 0, 0)), GridSpec())
        with pytest.raises(DomainError):
            discrete_energy_momentum(1.0, LatticeStep(dn=1, dj=(1, 0, 0)), GridSpec())

    def test_velocity_exact_in_rational_arithmetic(self):
        """u from the step ratio equals |p| c^2 / E exactly, Fractions throughout."""
        rng = np.random.default_rng(9)
        grid = GridSpec(tau=0.625, eps=0.25, c=3.0)  # exact binary floats
        checked = 0
        while checked < 200:
            dn = int(rng.integers(1, 30))
            dj = tuple(int(x) for x in rng.integers(-8, 9, 3))
            if (Fraction(grid.c) * dn * Fraction(grid.tau)) ** 2 <= sum(
                (Fraction(d) * Fraction(grid.eps)) ** 2 for d in dj
            ):
                continue
            step = LatticeStep(dn=dn, dj=dj)
            m0 = Fraction(7, 3)
            E2, p2, u2 = energy_momentum_squared_exact(m0, step, grid)
            c = Fraction(grid.c)
            assert E2 - p2 * c * c == m0 * m0 * c**4
            if p2 > 0:
                assert u2 == p2 * c**4 / E2
            u = step_velocity(step, grid)
            expected = tuple(Fraction(d) * Fraction(grid.eps) / (dn * Fraction(grid.tau)) for d in dj)
            assert u == expected
            checked += 1


class TestTotalDifference:
    def test_equal_states_give_exact_zeros(self):
        s = ParticleState.from_momentum([0.75, 0, 0], 1.0, 1.0)
        r23, r24 = total_difference_mass_shell(s, s, 1.0)
        assert r23 == 0.0
        assert r24 == 0.0
        assert four_difference_invariant(s, s, 1.0) == 0.0

    def test_hand_pair_residuals(self):
        # E(0.75) = 1.25, E(1.0) = sqrt(2); both on the m0 = 1 shell
        a = ParticleState.from_momentum([0.75, 0, 0], 1.0, 1.0)
        b = ParticleState.from_momentum([1.0, 0, 0], 1.0, 1.0)
        r23, r24 = total_difference_mass_shell(a, b, 1.0)
        assert abs(r23) <= 1e-12
        assert abs(r24) <= 1e-12

    def test_invariant_vanishes_for_consecutive_free_particle_events(self):
        """A free particle carries one momentum through consecutive events, so the
        difference four-vector is zero and its Minkowski square vanishes exactly."""
        grid = GridSpec()
        step = LatticeStep(dn=5, dj=(3, 0, 0))
        s_event1 = discrete_energy_momentum(1.0, step, grid)
        s_event2 = discrete_energy_momentum(1.0, step, grid)
        assert four_difference_invariant(s_event1, s_event2, grid.c) == 0.0

    def test_invariant_for_distinct_momenta_is_negative_documented(self):
        """For distinct on-shell momenta the difference four-vector is spacelike:
        the invariant equals 3.5 - 2.5 sqrt(2) (about -0.0355) for the hand pair,
        not zero. Documented deviation from the idealized frame argument, which
        applies only when the momentum is unchanged between events."""
        a = ParticleState.from_momentum([0.75, 0, 0], 1.0, 1.0)
        b = ParticleState.from_momentum([1.0, 0, 0], 1.0, 1.0)
        value = four_difference_invariant(a, b, 1.0)
        assert value == pytest.approx(3.5 - 2.5 * math.sqrt(2.0), rel=1e-12)
        assert value < -1e-3

    def test_average_velocity_relation_on_random_pairs(self):
        rng = np.random.default_rng(10)
        for _ in range(300):
            m0 = rng.uniform(0.1, 3.0)
            a = ParticleState.from_momentum([rng.uniform(-3, 3), 0, 0], m0, 1.0)
            b = ParticleState.from_momentum([rng.uniform(-3, 3), 0, 0], m0, 1.0)
            r23, r24 = total_difference_mass_shell(a, b, 1.0)
            assert abs(r23) <= 1e-10 * max(a.E, b.E) ** 2
            assert abs(r24) <= 1e-10 * max(a.E, b.E)

    def test_different_shells_rejected(self):
        a = ParticleState.from_momentum([0.5, 0, 0], 1.0, 1.0)
        b = ParticleState.from_momentum([0.5, 0, 0], 2.0, 1.0)
        with pytest.raises(DomainError):
            total_difference_mass_shell(a, b, 1.0)


def test_transform_equivalence_of_wave_and_particle_pairs():
    """Boosting (E, p)/hbar as a wave or boosting the particle then dividing by
    hbar gives the same numbers: the two four-vectors are proportional."""
    rng = np.random.default_rng(12)
    hbar = 1.0
    for _ in range(500):
        s = ParticleState.from_momentum([rng.uniform(-3, 3), 0, 0], rng.uniform(0.05, 5.0), 1.0)
        w, k = debroglie_map(s, hbar)
        v = [rng.uniform(-0.9, 0.9), 0, 0]
        wp, kp = transform_wave(w, k, v, 1.0)
        sp = transform_particle(s, v, 1.0)
        scale = max(abs(sp.E), float(np.max(np.abs(sp.p))))
        assert abs(wp - sp.E / hbar) <= 1e-12 * scale
        assert float(np.max(np.abs(kp - sp.p / hbar))) <= 1e-12 * scale
