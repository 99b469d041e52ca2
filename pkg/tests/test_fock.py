"""Single-mode kernel tests.

Expected values are frozen from independent oracles: exact rational Laguerre
sums, float series summation for exponentials, Poisson tails, and the
matrix-exponential oracle for displacement entries.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import poisson

from fockgraph import (
    coherent_overlap,
    coherent_state,
    displacement_compose_phase,
    displacement_matrix,
    expm_displacement_oracle,
    laguerre_sequence,
    min_oracle_buffer,
    trusted_cutoff,
)

# e^{-1/2} by direct series summation, independent of any exp() call path.
EXP_MINUS_HALF = math.fsum((-0.5) ** k / math.factorial(k) for k in range(40))


def laguerre_direct(n, order, x):
    """Exact-rational associated Laguerre polynomial evaluation."""
    xf = Fraction(x)
    total = sum(
        Fraction((-1) ** i * math.comb(n + order, n - i), math.factorial(i)) * xf**i
        for i in range(n + 1)
    )
    return float(total)


class TestCoherentState:
    def test_vacuum(self):
        state = coherent_state(0.0, 4)
        assert np.array_equal(state, np.array([1, 0, 0, 0, 0], dtype=complex))

    def test_ground_amplitude_series_oracle(self):
        state = coherent_state(1.0, 6)
        assert state[0] == pytest.approx(EXP_MINUS_HALF, abs=1e-14)
        assert state[0].real == pytest.approx(0.6065306597, abs=1e-10)

    def test_norm_deficit_is_poisson_tail(self):
        for alpha, cutoff in ((1.0, 12), (1.5, 14), (0.5 + 1.2j, 17)):
            state = coherent_state(alpha, cutoff)
            rate = abs(alpha) ** 2
            tail = math.fsum(
                math.exp(-rate) * rate**n / math.factorial(n) for n in range(cutoff + 1, 90)
            )
            deficit = 1.0 - float(np.sum(np.abs(state) ** 2))
            assert deficit == pytest.approx(tail, abs=1e-13)

    def test_unit_alpha_norm_nearly_one(self):
        # Poisson(1) tail beyond 12 is 6.4e-11; beyond 14 it is 2.8e-13, so
        # the 1e-12 bound needs cutoff 14.
        state = coherent_state(1.0, 14)
        assert np.sum(np.abs(state) ** 2) >= 1.0 - 1e-12

    def test_amplitudes_match_poisson_pmf(self):
        alpha = 1.3 - 0.7j
        state = coherent_state(alpha, 20)
        pmf = poisson.pmf(np.arange(21), abs(alpha) ** 2)
        assert np.abs(np.abs(state) ** 2 - pmf).max() < 1e-14

    def test_rejects_bad_cutoff(self):
        with pytest.raises(ValueError, match="cutoff"):
            coherent_state(1.0, 0)


class TestLaguerre:
    @pytest.mark.parametrize("x", [0.3, 1.0, 5.0, 12.5, 25.0])
    def test_recurrence_matches_direct_sum(self, x):
        for order in range(13):
            seq = laguerre_sequence(12, order, x)
            for n in range(13):
                exact = laguerre_direct(n, order, x)
                assert seq[n] == pytest.approx(exact, rel=1e-10, abs=1e-12)

    def test_large_argument_stability(self):
        # Quadrature nodes reach s ~ 235 at the largest radial order.
        seq = laguerre_sequence(30, 10, 120.0)
        exact = laguerre_direct(30, 10, 120.0)
        assert seq[30] == pytest.approx(exact, rel=1e-12)


class TestDisplacementMatrix:
    def test_identity_at_zero(self):
        assert np.array_equal(displacement_matrix(0.0, 5), np.eye(6, dtype=complex))

    @pytest.mark.parametrize("alpha", [0.7, 1.5j, -0.8 + 0.6j, 2.0])
    def test_column_zero_is_coherent_state(self, alpha):
        mat = displacement_matrix(alpha, 14)
        assert np.abs(mat[:, 0] - coherent_state(alpha, 14)).max() < 1e-12

    def test_vacuum_element_against_oracle(self):
        oracle = expm_displacement_oracle(1.0, 8, 24)
        assert displacement_matrix(1.0, 8)[0, 0] == pytest.approx(oracle[0, 0], abs=1e-12)
        assert displacement_matrix(1.0, 8)[0, 0].real == pytest.approx(0.6065306597, abs=1e-10)

    @pytest.mark.parametrize("alpha", [0.7 + 0.3j, 1.5 - 2.2j, -0.4 + 1.9j])
    def test_adjoint_is_negated_argument_exactly(self, alpha):
        # Bitwise, forced by the closed form and conjugation-covariant powers.
        left = displacement_matrix(alpha, 18).conj().T
        right = displacement_matrix(-alpha, 18)
        assert np.array_equal(left, right)

    def test_gaussian_factoring(self):
        alpha = 1.1 - 0.4j
        bare = displacement_matrix(alpha, 10, include_gaussian=False)
        full = displacement_matrix(alpha, 10)
        assert np.abs(full - bare * math.exp(-0.5 * abs(alpha) ** 2)).max() < 1e-15

    def test_unitarity_where_column_mass_is_retained(self):
        # D^dag D deviates from I at (m, m) by exactly the column mass lost
        # past the cutoff; displacement reach from level m scales like
        # |alpha|*sqrt(m), so the clean block sits well below the naive
        # mean-plus-spread heuristic.  Frozen from measured decay.
        mat = displacement_matrix(1.0, 32)
        product = mat.conj().T @ mat
        sub = product[:13, :13] - np.eye(13)
        assert np.abs(sub).max() < 1e-8

    def test_unitarity_deficit_decays_with_cutoff(self):
        devs = []
        for cutoff in (16, 24, 32):
            mat = displacement_matrix(1.0, cutoff)
            product = mat.conj().T @ mat
            devs.append(np.abs(product[:9, :9] - np.eye(9)).max())
        assert devs[0] > devs[1] > devs[2]
        assert devs[2] < 1e-12


class TestComposePhase:
    def test_trivial_cases(self):
        assert displacement_compose_phase(0.9 + 0.2j, 0.0) == pytest.approx(1.0)
        assert displacement_compose_phase(1.2, -0.7) == pytest.approx(1.0)

    def test_quarter_turn_pair(self):
        value = displacement_compose_phase(1.0, 1.0j)
        assert value.real == pytest.approx(0.5403023059, abs=1e-10)
        assert value.imag == pytest.approx(-0.8414709848, abs=1e-10)

    def test_composition_law_on_matrices(self):
        # Product of truncated matrices vs phase * D(a+b), compared where the
        # intermediate sums retain their mass (small amplitudes, low block).
        alpha, beta = 0.35 + 0.1j, -0.25j
        cutoff = 24
        product = displacement_matrix(alpha, cutoff) @ displacement_matrix(beta, cutoff)
        target = displacement_compose_phase(alpha, beta) * displacement_matrix(alpha + beta, cutoff)
        assert np.abs((product - target)[:11, :11]).max() < 1e-8


class TestCoherentOverlap:
    def test_self_overlap_is_unimodular(self):
        assert abs(coherent_overlap(0.8 + 0.4j, 0.8 + 0.4j)) == pytest.approx(1.0)

    def test_vacuum_against_unit(self):
        value = coherent_overlap(0.0, 1.0)
        expected = math.fsum((-1.0) ** k / math.factorial(k) for k in range(40))
        assert abs(value) ** 2 == pytest.approx(expected, abs=1e-13)
        assert abs(value) ** 2 == pytest.approx(0.3678794412, abs=1e-10)

    def test_squared_modulus_is_gaussian_in_distance(self):
        rng = np.random.default_rng(9)
        for _ in range(25):
            alpha, beta = (rng.uniform(-2, 2, 4) * [1, 1j, 1, 1j]).reshape(2, 2).sum(axis=1)
            got = abs(coherent_overlap(alpha, beta)) ** 2
            assert got == pytest.approx(math.exp(-abs(alpha - beta) ** 2), rel=1e-12)

    def test_against_truncated_dot_product_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            alpha = rng.uniform(0, 2) * np.exp(2j * math.pi * rng.uniform())
            beta = rng.uniform(0, 2) * np.exp(2j * math.pi * rng.uniform())
            numeric = np.vdot(coherent_state(beta, 40), coherent_state(alpha, 40))
            assert abs(coherent_overlap(alpha, beta) - numeric) < 1e-12


class TestExpmOracle:
    def test_identity_at_zero(self):
        assert np.abs(expm_displacement_oracle(0.0, 6, 12) - np.eye(7)).max() < 1e-15

    def test_agrees_with_closed_form(self):
        delta = expm_displacement_oracle(1.0, 8, 16) - displacement_matrix(1.0, 8)
        assert np.abs(delta).max() < 1e-10

    def test_column_zero_matches_coherent_state(self):
        oracle = expm_displacement_oracle(2.0j, 6, 24)
        assert np.abs(oracle[:, 0] - coherent_state(2.0j, 6)).max() < 1e-10

    def test_rejects_small_buffer(self):
        assert min_oracle_buffer(2.0j) == 24
        with pytest.raises(ValueError, match="buffer"):
            expm_displacement_oracle(2.0j, 6, 23)


class TestTrustedCutoff:
    def test_values(self):
        assert trusted_cutoff(20, 1.0) == 16
        assert trusted_cutoff(20, 2.0) == 10
        assert trusted_cutoff(4, 2.0) == 0

    def test_rejects_negative_amplitude(self):
        with pytest.raises(ValueError):
            trusted_cutoff(10, -0.5)
