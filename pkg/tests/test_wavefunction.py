import math

import numpy as np
import pytest

from oracles import PRINTED_GAMMA_3P32, TABLE2_CONVERGED, TABLE3_A, TABLE3_B, frobenius_confined
from diracaim.coulomb import coulomb_phi, coulomb_radial, coulomb_state
from diracaim.models import (ConfinedProblem, CoulombProblem, LinearConfined, PureCoulomb,
                             asymptotic_factor, channel_from_k)
from diracaim.shooting import radial_solution
from diracaim.wavefunction import (alpha_ratio, generate_phi1, generate_phi2,
                                   generate_wavefunction, ode_residual, reconstruct)

CONFINED = LinearConfined(0.5, 0.1, 0.2, 1.0)
E_3P32 = TABLE2_CONVERGED[(-2, 1)]


def confined(k, n):
    return ConfinedProblem(channel_from_k(k, n), CONFINED)


def coulomb(k, n, A=0.5):
    return CoulombProblem(channel_from_k(k, n), PureCoulomb(A, 1.0))


@pytest.fixture(scope="module")
def gen_3p32():
    return generate_wavefunction(confined(-2, 1), E_3P32, order=15)


class TestCoulombGenerator:
    def test_n0_constant(self):
        p = coulomb(-1, 0)
        E = coulomb_state(p.channel, 0.5).energy
        np.testing.assert_allclose(generate_phi2(p, E, order=6), [1, 0, 0, 0, 0, 0, 0], atol=1e-12)
        alpha, _ = alpha_ratio(p, E, 6)
        phi1 = generate_phi1(generate_phi2(p, E, order=6), alpha, 6)
        np.testing.assert_allclose(phi1, 0, atol=1e-12)

    def test_n2_hypergeometric_shape(self):
        p = coulomb(-1, 2)
        st = coulomb_state(p.channel, 0.5)
        c = 2 * st.gamma + 1
        phi2 = generate_phi2(p, st.energy, order=8)
        np.testing.assert_allclose(phi2[:3], [1, -2 / c, 1 / (c * (c + 1))], rtol=1e-10)
        np.testing.assert_allclose(phi2[3:], 0, atol=1e-10)

    def test_n1_phi1_constant(self):
        p = coulomb(-1, 1)
        st = coulomb_state(p.channel, 0.5)
        gen = generate_wavefunction(p, st.energy, order=8, normalize=False)
        # phi2(0) = 1 here, while the closed form has phi2(0) = -(2 gamma + 1)
        np.testing.assert_allclose(gen.phi1[0] * -(2 * st.gamma + 1), st.channel.k + st.b, rtol=1e-10)
        np.testing.assert_allclose(gen.phi1[1:], 0, atol=1e-10)

    @pytest.mark.parametrize("k,n", [(-1, 0), (-1, 1), (1, 1), (-2, 2), (2, 3), (-1, 3)])
    def test_matches_closed_form(self, k, n):
        p = coulomb(k, n)
        st = coulomb_state(p.channel, 0.5)
        gen = generate_wavefunction(p, st.energy, order=n + 4, normalize=False)
        phi1, phi2 = coulomb_phi(st)
        s = 1 / phi2[0]
        np.testing.assert_allclose(gen.phi2[: n + 1], phi2 * s, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(gen.phi2[n + 1:], 0, atol=1e-10)
        ref1 = np.zeros(n + 1)
        ref1[: len(phi1)] = phi1 * s
        np.testing.assert_allclose(gen.phi1[: n + 1], ref1, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(gen.phi1[n + 1:], 0, atol=1e-10)

    @pytest.mark.parametrize("k,n", [(-1, 1), (2, 2)])
    def test_samples_match_closed_form(self, k, n):
        p = coulomb(k, n)
        st = coulomb_state(p.channel, 0.5)
        gen = generate_wavefunction(p, st.energy, order=n + 4)
        r = np.linspace(0.1, 30, 200)
        G, F = reconstruct(gen, r)
        Gc, Fc = coulomb_radial(p.channel, 0.5, 1.0, r)
        sign = np.sign(G[0] * Gc[0])
        np.testing.assert_allclose(sign * G, Gc, atol=1e-9)
        np.testing.assert_allclose(sign * F, Fc, atol=1e-9)

    def test_decay_beyond_turning_points(self):
        p = coulomb(-1, 2)
        st = coulomb_state(p.channel, 0.5)
        gen = generate_wavefunction(p, st.energy, order=8)
        # classical turning point: E - m + A/r = 0
        rt = 0.5 / (1 - st.energy)
        r = np.linspace(1e-3, 12 * rt, 4000)
        G, F = reconstruct(gen, r)
        tail = r > 5 * rt
        assert np.abs(G[tail]).max() < 1e-6 * np.abs(G).max()
        assert np.abs(F[tail]).max() < 1e-6 * np.abs(F).max()


class TestTable3:
    def test_leading_coefficients(self, gen_3p32):
        a, b = gen_3p32.scaled_coefficients(1.7746)
        np.testing.assert_allclose(a[1:3], [3.34842, 2.58401], rtol=1e-3)
        np.testing.assert_allclose(b[:2], [-0.22540, -0.87777], rtol=1e-3)
        np.testing.assert_allclose(a[1:6], TABLE3_A[1:6], rtol=1e-3)
        np.testing.assert_allclose(b[:6], TABLE3_B[:6], rtol=1e-3)

    def test_channel_gamma_beats_printed_exponent(self, gen_3p32):
        a, b = gen_3p32.scaled_coefficients(1.7746)
        errs = {}
        for g in (None, PRINTED_GAMMA_3P32):
            fa, fb = frobenius_confined(E_3P32, -2, 0.5, 0.1, 0.2, gamma=g)
            s = 1.7746 / fa[0]
            errs[g] = max(np.max(np.abs(fa[1:6] * s / TABLE3_A[1:6] - 1)),
                          np.max(np.abs(fb[:6] * s / TABLE3_B[:6] - 1)))
        assert errs[None] < 1e-3 < errs[PRINTED_GAMMA_3P32]
        assert gen_3p32.factor.gamma == pytest.approx(math.sqrt(3.75), rel=1e-14)

    def test_independent_frobenius(self, gen_3p32):
        fa, fb = frobenius_confined(E_3P32, -2, 0.5, 0.1, 0.2, order=15)
        a, b = gen_3p32.scaled_coefficients(fa[0])
        np.testing.assert_allclose(a, fa, rtol=1e-6, atol=1e-12)
        np.testing.assert_allclose(b, fb, rtol=1e-6, atol=1e-12)

    def test_printed_exponents(self, gen_3p32):
        f = asymptotic_factor(CONFINED, channel_from_k(-2, 1), 2.19096)
        assert f.alpha_lin == pytest.approx(2.41965, abs=1e-5)
        assert f.beta_lin / 2 == pytest.approx(0.0866025, abs=1e-7)
        # the printed power is sqrt(1 - A^2), not the channel's sqrt(k^2 - A^2)
        assert math.sqrt(1 - 0.25) == pytest.approx(PRINTED_GAMMA_3P32, abs=1e-6)


class TestStability:
    def test_k12_to_k15(self):
        a12 = generate_wavefunction(confined(-2, 1), E_3P32, order=12, normalize=False).poly_g
        a15 = generate_wavefunction(confined(-2, 1), E_3P32, order=15, normalize=False).poly_g
        np.testing.assert_allclose(a15[:9] / a15[0], a12[:9] / a12[0], rtol=1e-6)


class TestReconstruction:
    def test_residual_band(self, gen_3p32):
        assert ode_residual(gen_3p32, np.linspace(0.2, 4, 200)) < 1e-3

    def test_origin_limit(self, gen_3p32):
        G, F = reconstruct(gen_3p32, [1e-10, 1e-6])
        assert abs(G[0]) < 1e-7 and abs(G[0]) < abs(G[1])

    def test_rejects_nonpositive(self, gen_3p32):
        with pytest.raises(ValueError):
            reconstruct(gen_3p32, [0.0])

    def test_against_shooting(self):
        gen = generate_wavefunction(confined(-1, 1), TABLE2_CONVERGED[(-1, 1)], order=80)
        r = np.linspace(0.1, 6, 60)
        G, F = reconstruct(gen, r)
        Gs, Fs = radial_solution(CONFINED, channel_from_k(-1, 1), TABLE2_CONVERGED[(-1, 1)], r)
        sign = np.sign(G[0] * Gs[0])
        np.testing.assert_allclose(sign * G, Gs, atol=2e-5)
        np.testing.assert_allclose(sign * F, Fs, atol=2e-5)

    def test_coefficients_finite(self, gen_3p32):
        assert gen_3p32.order == 15 >= 1
        assert np.all(np.isfinite(gen_3p32.poly_g)) and np.all(np.isfinite(gen_3p32.poly_f))
        assert gen_3p32.norm > 0

    @pytest.mark.xfail(strict=True, reason="truncated generator polynomial is only accurate to r ~ 10; "
                                           "five classical turning radii lie far outside it")
    def test_confined_decay_beyond_turning_points(self):
        gen = generate_wavefunction(confined(-2, 1), E_3P32, order=100)
        # E - m - V - U = 0 for V = -A/r + B1 r, U = B2 r
        c = np.roots([-(0.1 + 0.2), E_3P32 - 1, 0.5])
        rt = c[c > 0].max()
        r = np.linspace(1e-3, 8 * rt, 2000)
        G, F = reconstruct(gen, r)
        assert np.abs(G[r > 5 * rt]).max() < 1e-6 * np.abs(G).max()
