"""Mollifier profiles, dissipation functionals, and the coefficient algebra."""

import numpy as np
import pytest

from exactlaws.geometry import direction_set_icosa
from exactlaws.grid import VectorField3, curl, make_grid
from exactlaws.laws import LawKind, dr_fourthirds, raw_combos
from exactlaws.mollifier import (
    bump_mollifier,
    coefficient_oracle,
    d_ball,
    d_shell,
    dr_dissipation,
    dr_dissipation_profile,
    extrapolate_to_zero,
    mollifier_moments,
    phi_L,
    phi_T,
    sweep_dissipation,
)
from exactlaws.synth import SpectrumSpec, abc_flow, random_solenoidal

MOL = bump_mollifier()
DIRS12 = direction_set_icosa(0)


class TestMollifierProfile:
    def test_unit_mass(self):
        m2, _ = mollifier_moments(MOL)
        assert abs(m2 - 1.0) <= 1e-10

    def test_third_moment(self):
        _, m3 = mollifier_moments(MOL)
        assert abs(m3 + 3.0) <= 1e-8

    def test_moments_scale_invariant(self):
        for eps in (0.1, 0.5, 2.0):
            m2, m3 = mollifier_moments(MOL, eps=eps)
            assert abs(m2 - 1.0) <= 1e-8
            assert abs(m3 + 3.0) <= 1e-8

    def test_support_and_smoothness(self):
        assert MOL.phi(1.0) == 0.0
        assert MOL.phi(1.5) == 0.0
        assert MOL.dphi(0.0) == 0.0
        assert MOL.phi(0.0) > 0.0

    def test_phi_T_outside_support(self):
        assert phi_T(MOL, 1.0) == 0.0
        assert phi_T(MOL, 2.3) == 0.0

    def test_phi_T_singular_at_zero(self):
        with pytest.raises(ValueError, match="singular"):
            phi_T(MOL, 0.0)

    def test_longitudinal_gradient_identity(self):
        # d/dr phi_L = phi' + 2 phi / r
        h = 1e-6
        for r in (0.3, 0.5, 0.8):
            grad = (phi_L(MOL, r + h) - phi_L(MOL, r - h)) / (2 * h)
            expected = MOL.dphi(r) + 2.0 * MOL.phi(r) / r
            assert abs(grad - expected) <= 1e-7

    def test_decomposition_consistency(self):
        r = 0.5
        assert abs(phi_L(MOL, r) + phi_T(MOL, r) - MOL.phi(r)) <= 1e-10


class TestShellConstants:
    """Shell quadrature of constant unit profiles reproduces the fixed rows."""

    CASES = {
        LawKind.HELICITY: {"L": (-2.25, 1.5, 1.5), "T": (0.0, -1.875, -0.75)},
        LawKind.MHD_ENERGY: {"L": (-2.25, 1.5, -3.0), "T": (0.0, -1.875, 1.5)},
        LawKind.CROSS_HELICITY: {"L": (-2.25, 1.5, 3.0), "T": (0.0, -1.875, -1.5)},
    }

    @pytest.mark.parametrize("law", list(CASES))
    def test_rows(self, law):
        basis = {(1.0, 0.0, 0.0): 0, (0.0, 1.0, 0.0): 1, (0.0, 0.0, 1.0): 2}
        for profile, idx in basis.items():
            for part in ("L", "T"):
                got = d_shell(law, part, lambda r, p=profile: p, MOL, 1.0, radial_nodes=64)
                assert abs(got - self.CASES[law][part][idx]) <= 1e-8

    def test_oracle_solutions(self):
        expected_flux = {
            LawKind.HELICITY: (-0.4, 0.4),
            LawKind.MHD_ENERGY: (0.8, -0.8),
            LawKind.CROSS_HELICITY: (-0.8, 0.8),
        }
        for law, (c_l, c_t) in expected_flux.items():
            sol = coefficient_oracle(law)["solution"]
            assert abs(sol["factor_L"] + 1.25) <= 1e-8
            assert abs(sol["factor_T"] + 1.875) <= 1e-8
            assert abs(sol["flux_coeff_L"] - c_l) <= 1e-8
            assert abs(sol["flux_coeff_T"] - c_t) <= 1e-8
            assert abs(sol["ratio_L"] + 0.8) <= 1e-8
            assert abs(sol["ratio_T"] + 8.0 / 15.0) <= 1e-8


def small_random(n=16, kmax=4, seed=3):
    g = make_grid(n)
    return g, random_solenoidal(g, SpectrumSpec(-5.0 / 3.0, 1, kmax, 1.0, seed))


class TestBallShell:
    def test_zero_field(self):
        g = make_grid(8)
        zero = VectorField3(g, np.zeros((3, 8, 8, 8)))
        assert d_ball(LawKind.HYDRO_ENERGY, "L", zero, None, MOL, 0.4, 8, DIRS12) == 0.0

    def test_ball_matches_shell_at_matched_nodes(self):
        g, v = small_random()
        h = random_solenoidal(g, SpectrumSpec(-5.0 / 3.0, 1, 4, 1.0, 5))
        for law, fields in (
            (LawKind.HELICITY, (v, None)),
            (LawKind.MHD_ENERGY, (v, h)),
            (LawKind.CROSS_HELICITY, (v, h)),
        ):
            for part in ("L", "T"):
                report = sweep_dissipation(law, part, fields, MOL, [0.3, 0.6], 12, DIRS12)
                for b, s in zip(report.d_ball, report.d_shell):
                    assert abs(b - s) <= 1e-10 * (abs(b) + 1e-30)

    def test_shell_from_independent_profiles(self):
        # Shell evaluated through raw_combos directly (fresh engine per radius)
        # agrees with the ball quadrature at matched nodes.
        g, v = small_random(n=8, kmax=2)
        ball = d_ball(LawKind.HYDRO_ENERGY, "L", v, None, MOL, 0.5, 8, DIRS12)
        profiles = lambda r: raw_combos(LawKind.HYDRO_ENERGY, v, None, r, DIRS12)
        shell = d_shell(LawKind.HYDRO_ENERGY, "L", profiles, MOL, 0.5, 8)
        assert abs(ball - shell) <= 1e-10 * (abs(ball) + 1e-30)

    def test_alignment_degeneracy(self):
        g, v = small_random()
        for law in (LawKind.MHD_ENERGY, LawKind.CROSS_HELICITY):
            for part in ("L", "T"):
                val = d_ball(law, part, v, v, MOL, 0.4, 8, DIRS12)
                assert abs(val) <= 1e-12 * v.rms() ** 3

    def test_beltrami_halving(self):
        g, v = small_random()
        zero = VectorField3(g, np.zeros((3, g.n, g.n, g.n)))
        for part in ("L", "T"):
            hel = d_ball(LawKind.HELICITY, part, v, v, MOL, 0.4, 8, DIRS12)
            hyd = d_ball(LawKind.MHD_ENERGY, part, v, zero, MOL, 0.4, 8, DIRS12)
            assert abs(hel - 0.5 * hyd) <= 1e-12 * max(abs(hyd), 1e-30)

    def test_cross_helicity_zero_field(self):
        g, v = small_random()
        zero = VectorField3(g, np.zeros((3, g.n, g.n, g.n)))
        for part in ("L", "T"):
            assert d_ball(LawKind.CROSS_HELICITY, part, v, zero, MOL, 0.4, 8, DIRS12) == 0.0

    def test_eps_too_large(self):
        g, v = small_random(n=8, kmax=2)
        with pytest.raises(ValueError, match="length/4"):
            d_ball(LawKind.HYDRO_ENERGY, "L", v, None, MOL, 2.0, 8, DIRS12)

    def test_too_few_nodes(self):
        g, v = small_random(n=8, kmax=2)
        with pytest.raises(ValueError, match="radial nodes"):
            d_ball(LawKind.HYDRO_ENERGY, "L", v, None, MOL, 0.4, 1, DIRS12)

    def test_bad_part(self):
        g, v = small_random(n=8, kmax=2)
        with pytest.raises(ValueError, match="part"):
            d_ball(LawKind.HYDRO_ENERGY, "X", v, None, MOL, 0.4, 8, DIRS12)


class TestThirdOrderEnergyFunctional:
    def test_zero_field(self):
        g = make_grid(8)
        zero = VectorField3(g, np.zeros((3, 8, 8, 8)))
        assert dr_dissipation(zero, MOL, 0.4, "full", 8, DIRS12) == 0.0

    def test_constant_profile_oracle(self):
        got = dr_dissipation_profile(lambda r: 1.0, MOL, 1.0, radial_nodes=64)
        assert abs(got + 0.75) <= 1e-8

    def test_full_kernel_matches_profile_form(self):
        g, v = small_random(n=16, kmax=4)
        eps = 0.5
        ball = dr_dissipation(v, MOL, eps, "full", 12, DIRS12)
        shell = dr_dissipation_profile(
            lambda r: dr_fourthirds(v, r, DIRS12), MOL, eps, radial_nodes=12
        )
        assert abs(ball - shell) <= 1e-10 * (abs(ball) + 1e-30)

    def test_long_kernel_differs_from_full(self):
        g, v = small_random(n=16, kmax=4)
        long_val = dr_dissipation(v, MOL, 0.5, "long", 8, DIRS12)
        full_val = dr_dissipation(v, MOL, 0.5, "full", 8, DIRS12)
        assert long_val != full_val

    def test_bad_kernel_name(self):
        g, v = small_random(n=8, kmax=2)
        with pytest.raises(ValueError, match="kernel"):
            dr_dissipation(v, MOL, 0.4, "other", 8, DIRS12)


class TestSweepDissipation:
    def test_report_fields(self):
        g, v = small_random()
        report = sweep_dissipation(LawKind.HELICITY, "L", (v, None), MOL, [0.2, 0.4, 0.8], 8, DIRS12)
        assert report.epsilons == (0.2, 0.4, 0.8)
        assert len(report.d_ball) == 3
        assert len(report.d_shell) == 3
        assert report.mollifier == "bump"
        assert "value" in report.extrapolation

    def test_smooth_field_order(self):
        # Quadratic vanishing of the functionals for a smooth random field.
        g = make_grid(32)
        v = random_solenoidal(g, SpectrumSpec(-5.0 / 3.0, 2, 5, 1.0, 7))
        ladder = list(np.geomspace(0.025, 0.1, 4))
        report = sweep_dissipation(
            LawKind.HELICITY, "L", (v, None), MOL, ladder, 12, direction_set_icosa(1)
        )
        assert report.extrapolation["order"] >= 1.9

    def test_epsilons_must_ascend(self):
        g, v = small_random(n=8, kmax=2)
        with pytest.raises(ValueError, match="ascending"):
            sweep_dissipation(LawKind.HELICITY, "L", (v, None), MOL, [0.4, 0.2], 8, DIRS12)

    def test_zero_field_all_zero(self):
        g = make_grid(8)
        zero = VectorField3(g, np.zeros((3, 8, 8, 8)))
        report = sweep_dissipation(LawKind.HYDRO_ENERGY, "L", zero, MOL, [0.2, 0.4], 8, DIRS12)
        assert all(b == 0.0 for b in report.d_ball)
        assert all(s == 0.0 for s in report.d_shell)


class TestExtrapolation:
    def test_exact_quadratic(self):
        eps = np.array([0.1, 0.2, 0.4])
        vals = 5.0 + 2.0 * eps**2
        ext = extrapolate_to_zero(eps, vals)
        assert abs(ext["value"] - 5.0) <= 1e-12
        assert abs(ext["curvature"] - 2.0) <= 1e-10

    def test_order_fit(self):
        eps = np.geomspace(0.05, 0.4, 5)
        ext = extrapolate_to_zero(eps, -3.0 * eps**2)
        assert abs(ext["order"] - 2.0) <= 1e-8
