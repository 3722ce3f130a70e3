"""Generator tests: solenoidality, determinism, spectra."""

import numpy as np
import pytest

from exactlaws.grid import curl, divergence, inner_mean, make_grid
from exactlaws.synth import (
    SpectrumSpec,
    abc_flow,
    mhd_test_pair,
    random_solenoidal,
    taylor_green,
)


class TestAbcFlow:
    def test_solenoidal(self):
        v = abc_flow(make_grid(16))
        assert np.max(np.abs(divergence(v).values)) <= 1e-12

    def test_beltrami(self):
        v = abc_flow(make_grid(16))
        assert np.max(np.abs(curl(v).values - v.values)) <= 1e-10

    def test_zero_coefficients(self):
        v = abc_flow(make_grid(8), 0.0, 0.0, 0.0)
        assert np.max(np.abs(v.values)) == 0.0


class TestTaylorGreen:
    def test_solenoidal(self):
        v = taylor_green(make_grid(16))
        assert np.max(np.abs(divergence(v).values)) <= 1e-12

    def test_zero_helicity(self):
        v = taylor_green(make_grid(16))
        assert abs(inner_mean(v, curl(v))) <= 1e-12

    def test_third_component_zero(self):
        v = taylor_green(make_grid(8))
        assert np.max(np.abs(v.values[2])) == 0.0


def measured_shell_energies(v, kmax):
    """Shell spectrum straight from a full FFT (independent of the generator)."""
    n = v.grid.n
    vh = np.fft.fftn(v.values, axes=(1, 2, 3)) / n**3
    m = np.fft.fftfreq(n, 1.0 / n)
    kk = np.sqrt(
        m[:, None, None] ** 2 + m[None, :, None] ** 2 + m[None, None, :] ** 2
    )
    shell = np.rint(kk).astype(int)
    e_mode = 0.5 * np.sum(np.abs(vh) ** 2, axis=0)
    out = np.zeros(kmax + 1)
    mask = shell <= kmax
    np.add.at(out, shell[mask], e_mode[mask])
    return out


class TestRandomSolenoidal:
    def test_solenoidal(self):
        spec = SpectrumSpec(-5.0 / 3.0, 2, 8, 1.5, 11)
        v = random_solenoidal(make_grid(32), spec)
        assert np.max(np.abs(divergence(v).values)) <= 1e-11 * spec.rms

    def test_deterministic(self):
        g = make_grid(16)
        spec = SpectrumSpec(-2.0, 1, 5, 1.0, 42)
        a = random_solenoidal(g, spec)
        b = random_solenoidal(g, spec)
        assert np.array_equal(a.values, b.values)

    def test_shell_spectrum_slope(self):
        g = make_grid(64)
        spec = SpectrumSpec(-5.0 / 3.0, 2, 16, 1.0, 7)
        v = random_solenoidal(g, spec)
        energies = measured_shell_energies(v, 16)
        shells = np.arange(2, 17)
        slope, _ = np.polyfit(np.log(shells), np.log(energies[2:]), 1)
        assert abs(slope + 5.0 / 3.0) <= 0.2

    def test_rms_normalization(self):
        v = random_solenoidal(make_grid(16), SpectrumSpec(-1.0, 1, 4, 2.5, 3))
        assert abs(v.rms() - 2.5) <= 1e-12

    def test_band_outside_resolved(self):
        with pytest.raises(ValueError, match="band exceeds"):
            random_solenoidal(make_grid(16), SpectrumSpec(-1.0, 2, 6, 1.0, 0))

    def test_band_is_sharp(self):
        v = random_solenoidal(make_grid(32), SpectrumSpec(-2.0, 3, 7, 1.0, 5))
        energies = measured_shell_energies(v, 10)
        assert energies[:3].max() <= 1e-28
        assert energies[8:].max() <= 1e-28
        assert energies[3:8].min() > 0


class TestMhdTestPair:
    def test_seed_zero_deterministic_and_solenoidal(self):
        g = make_grid(16)
        v1, h1 = mhd_test_pair(g, 0)
        v2, h2 = mhd_test_pair(g, 0)
        assert np.array_equal(v1.values, v2.values)
        assert np.array_equal(h1.values, h2.values)
        assert np.max(np.abs(divergence(v1).values)) <= 1e-12
        assert np.max(np.abs(divergence(h1).values)) <= 1e-12

    def test_fields_differ(self):
        g = make_grid(16)
        v, h = mhd_test_pair(g, 0)
        assert np.max(np.abs(v.values - h.values)) > 0.1 * v.rms()

    def test_random_pair(self):
        g = make_grid(16)
        v, h = mhd_test_pair(g, 9)
        assert np.max(np.abs(divergence(v).values)) <= 1e-11
        assert np.max(np.abs(v.values - h.values)) > 0.1 * v.rms()
        v2, h2 = mhd_test_pair(g, 9)
        assert np.array_equal(v.values, v2.values)
        assert np.array_equal(h.values, h2.values)
