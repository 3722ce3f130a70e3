"""Shared engine for direction-resolved third-order increment statistics.

All law evaluations reduce to volume means of cubic increment kernels at
separations r*nhat.  Because the kernels are cubic, their volume mean is
alias-free on any grid with more than 3*kmax points per axis, where kmax is
the largest active wavenumber of the input fields.  The engine therefore
restricts each field to its spectral support and evaluates the means on the
smallest such grid; for low-wavenumber fields this cuts the cost of a shift
from O(n^3 log n) to a few dozen modes without changing the result beyond
round-off.

The per-law term means kept here are the building blocks shared by the
structure-function combinations (raw combos), the ball quadrature of the
dissipation functionals, and the radial shell form; keeping one source for
the kernel algebra makes the exact degeneracies (equal-field cancellations,
halving identities) hold to the last bit.
"""

from __future__ import annotations

from enum import Enum

import numpy as np
from scipy import fft as _fft

from .grid import Grid3, VectorField3

__all__ = [
    "LawKind",
    "StatsEngine",
    "term_means",
    "raw_from_terms",
    "ball_node",
    "shell_node",
    "COMBINE_COEFFS",
    "SHELL_WEIGHTS",
]


class LawKind(str, Enum):
    """The four exact-law families."""

    HYDRO_ENERGY = "hydro-energy"
    HELICITY = "helicity"
    MHD_ENERGY = "mhd-energy"
    CROSS_HELICITY = "cross-helicity"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# Flux coefficients (c_L, c_T) entering the combined values
# S_L = raw_L + c_L * raw_flux, S_T = raw_T + c_T * raw_flux.
COMBINE_COEFFS: dict[LawKind, tuple[float, float]] = {
    LawKind.HELICITY: (-0.4, 0.4),
    LawKind.MHD_ENERGY: (0.8, -0.8),
    LawKind.CROSS_HELICITY: (-0.8, 0.8),
    LawKind.HYDRO_ENERGY: (0.8, -0.8),
}

# Radial shell weights (a, b_T, b_F): the shell form of each dissipation
# functional is the quadrature of
#   4*pi * [ a * r^3 * dphi_eps(r) * S_main(r)
#            + r^2 * phi_eps(r) * (b_T * S_T(r) + b_F * S_flux(r)) ]
# where S_main is S_L for the L part and S_T for the T part.
SHELL_WEIGHTS: dict[LawKind, dict[str, tuple[float, float, float]]] = {
    LawKind.HELICITY: {"L": (0.75, 1.5, 1.5), "T": (0.375, -0.75, -0.75)},
    LawKind.MHD_ENERGY: {"L": (0.75, 1.5, -3.0), "T": (0.375, -0.75, 1.5)},
    LawKind.CROSS_HELICITY: {"L": (0.75, 1.5, 3.0), "T": (0.375, -0.75, -1.5)},
    LawKind.HYDRO_ENERGY: {"L": (0.75, 1.5, -3.0), "T": (0.375, -0.75, 1.5)},
}

_SUPPORT_RTOL = 1e-13  # spectral amplitudes below this (relative) count as empty


def _support_radius(spec: np.ndarray, n: int) -> int:
    """Largest active |wavenumber index| along any axis of an rfftn spectrum."""
    amp = np.abs(spec).max(axis=0)
    peak = amp.max()
    if peak == 0.0:
        return 0
    active = amp > _SUPPORT_RTOL * peak
    signed = np.rint(np.fft.fftfreq(n, 1.0 / n)).astype(int)
    k = 0
    ax0 = active.any(axis=(1, 2))
    if ax0.any():
        k = max(k, int(np.abs(signed[ax0]).max()))
    ax1 = active.any(axis=(0, 2))
    if ax1.any():
        k = max(k, int(np.abs(signed[ax1]).max()))
    ax2 = active.any(axis=(0, 1))
    if ax2.any():
        k = max(k, int(np.nonzero(ax2)[0].max()))
    return k


def _reduced_size(kmax: int, n: int) -> int:
    """Smallest even fast FFT length m > 3*kmax (cubic products alias-free)."""
    target = 3 * kmax + 1
    if target >= n:
        return n
    m = max(target, 4)
    while True:
        fast = _fft.next_fast_len(m, real=True)
        if fast >= n:
            return n
        if fast % 2 == 0:
            return fast
        m = fast + 1


def _extract_spectrum(spec: np.ndarray, n: int, m: int) -> np.ndarray:
    """Restrict an rfftn spectrum from an n-grid to an m-grid (m even, m < n)."""
    half = m // 2
    out = np.zeros(spec.shape[:-3] + (m, m, half + 1), dtype=complex)
    pos = slice(0, half)
    neg_t = slice(half + 1, m)
    neg_s = slice(n - half + 1, n)
    cols = slice(0, half)
    out[..., pos, pos, cols] = spec[..., pos, pos, cols]
    out[..., pos, neg_t, cols] = spec[..., pos, neg_s, cols]
    out[..., neg_t, pos, cols] = spec[..., neg_s, pos, cols]
    out[..., neg_t, neg_t, cols] = spec[..., neg_s, neg_s, cols]
    out *= (m / n) ** 3
    return out


class StatsEngine:
    """Increment statistics for a named set of fields on one grid.

    ``fields`` maps names to VectorField3 (or raw (3, n, n, n) arrays); a
    None entry stands for the zero field.  All fields are restricted to the
    union of their spectral supports once, after which ``increments`` costs
    one small batched inverse transform per separation vector.
    """

    def __init__(self, grid: Grid3, fields: dict):
        self.grid = grid
        self.names = list(fields)
        arrays = {}
        for name, fld in fields.items():
            if fld is None:
                arrays[name] = None
                continue
            values = fld.values if isinstance(fld, VectorField3) else np.asarray(fld)
            if values.shape != (3, grid.n, grid.n, grid.n):
                raise ValueError(f"field {name!r} does not match the grid")
            arrays[name] = values

        n = grid.n
        kmax = 0
        spectra = {}
        for name, values in arrays.items():
            if values is None:
                continue
            spec = _fft.rfftn(values, axes=(1, 2, 3))
            spectra[name] = spec
            kmax = max(kmax, _support_radius(spec, n))
        self.kmax = kmax
        m = _reduced_size(kmax, n)
        self.m = m
        self.npoints = m**3

        stacked = []
        self._slices = {}
        for name in self.names:
            if arrays[name] is None:
                self._slices[name] = None
                continue
            spec = spectra[name] if m == n else _extract_spectrum(spectra[name], n, m)
            self._slices[name] = slice(3 * len(stacked), 3 * len(stacked) + 3)
            stacked.append(spec)
        if stacked:
            self._spectra = np.concatenate(stacked, axis=0)
            base = _fft.irfftn(self._spectra, s=(m, m, m), axes=(1, 2, 3))
            self._base = np.ascontiguousarray(base.reshape(base.shape[0], -1))
        else:
            self._spectra = np.zeros((0, m, m, m // 2 + 1), dtype=complex)
            self._base = np.zeros((0, self.npoints))
        self._zero = np.zeros((3, self.npoints))
        self._zero.setflags(write=False)

        k1 = 2.0 * np.pi * np.fft.fftfreq(m, d=grid.length / m)
        kz = 2.0 * np.pi * np.fft.rfftfreq(m, d=grid.length / m)
        self._kx = k1
        self._ky = k1
        self._kz = kz

    def increments(self, ell) -> dict[str, np.ndarray]:
        """Flat (3, m**3) increment arrays u(x + ell) - u(x) per field name."""
        m = self.m
        half = m // 2
        px = np.exp(1j * self._kx * ell[0])
        px[half] = np.cos(self._kx[half] * ell[0])
        py = np.exp(1j * self._ky * ell[1])
        py[half] = np.cos(self._ky[half] * ell[1])
        pz = np.exp(1j * self._kz * ell[2])
        pz[-1] = np.cos(self._kz[-1] * ell[2])
        phase = px[:, None, None] * (py[:, None] * pz[None, :])[None]
        shifted = _fft.irfftn(self._spectra * phase, s=(m, m, m), axes=(1, 2, 3))
        delta = shifted.reshape(shifted.shape[0], -1) - self._base
        out = {}
        for name, sl in self._slices.items():
            out[name] = self._zero if sl is None else delta[sl]
        return out


def _dot3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("cm,cm->m", a, b)


def term_means(law: LawKind, da, db, nhat) -> tuple[float, float, float, float, float]:
    """Angular means (L1, L2, T1, T2, flux) of the law's kernel pieces.

    ``da`` is the increment of the primary (velocity-like) field, ``db`` of
    the paired field, both flat (3, M).  The five numbers are volume means of
      L1: n.da times the longitudinal scalar pair of the first kernel,
      L2:          ... of the second kernel,
      T1, T2: their transverse counterparts,
      flux: the lagged triple product, via the BAC-CAB expansion.
    """
    nd_a = nhat @ da
    nd_b = nhat @ db
    aa = _dot3(da, da)
    ab = _dot3(da, db)
    if law is LawKind.HELICITY:
        l1 = nd_a * (nd_a * nd_b)
        l2 = nd_b * (nd_a * nd_a)
        t1 = nd_a * (ab - nd_a * nd_b)
        t2 = nd_b * (aa - nd_a * nd_a)
        fx = nd_b * aa - nd_a * ab
    elif law in (LawKind.MHD_ENERGY, LawKind.HYDRO_ENERGY):
        bb = _dot3(db, db)
        l1 = nd_a * (nd_a * nd_a + nd_b * nd_b)
        l2 = nd_b * (nd_a * nd_b)
        t1 = nd_a * ((aa - nd_a * nd_a) + (bb - nd_b * nd_b))
        t2 = nd_b * (ab - nd_a * nd_b)
        fx = nd_a * bb - nd_b * ab
    elif law is LawKind.CROSS_HELICITY:
        bb = _dot3(db, db)
        l1 = nd_a * (nd_b * nd_a)
        l2 = nd_b * (nd_b * nd_b + nd_a * nd_a)
        t1 = nd_a * (ab - nd_b * nd_a)
        t2 = nd_b * ((bb - nd_b * nd_b) + (aa - nd_a * nd_a))
        fx = nd_b * aa - nd_a * ab
    else:  # pragma: no cover - enum is exhaustive
        raise ValueError(f"unknown law {law}")
    return (
        float(np.mean(l1)),
        float(np.mean(l2)),
        float(np.mean(t1)),
        float(np.mean(t2)),
        float(np.mean(fx)),
    )


def angular_term_sums(engine: StatsEngine, requests, r: float, dirs):
    """Direction-weighted term means at separation r for several laws at once.

    ``requests`` maps labels to (law, first_name, second_name) triples; the
    increments are computed once per direction and shared.  Accumulation
    order is fixed for bit-reproducibility.
    """
    sums = {label: (0.0, 0.0, 0.0, 0.0, 0.0) for label in requests}
    for nhat, w in zip(dirs.directions, dirs.weights):
        deltas = engine.increments(r * nhat)
        for label, (law, name_a, name_b) in requests.items():
            tm = term_means(law, deltas[name_a], deltas[name_b], nhat)
            acc = sums[label]
            sums[label] = (
                acc[0] + w * tm[0],
                acc[1] + w * tm[1],
                acc[2] + w * tm[2],
                acc[3] + w * tm[3],
                acc[4] + w * tm[4],
            )
    return sums


def raw_from_terms(law: LawKind, terms, r: float) -> tuple[float, float, float]:
    """Assemble (raw_L, raw_T, raw_flux) from direction-summed term means."""
    l1, l2, t1, t2, fx = terms
    if law is LawKind.HELICITY:
        raw_l = (l1 - 0.5 * l2) / r
        raw_t = (t1 - 0.5 * t2) / r
    elif law in (LawKind.MHD_ENERGY, LawKind.HYDRO_ENERGY):
        raw_l = (l1 - 2.0 * l2) / r
        raw_t = (t1 - 2.0 * t2) / r
    else:
        raw_l = (2.0 * l1 - l2) / r
        raw_t = (2.0 * t1 - t2) / r
    return raw_l, raw_t, fx / r


def ball_node(law: LawKind, part: str, terms, phi: float, dphi: float, r: float) -> float:
    """Angular content of the ball integrand at radius r, as displayed.

    Multiplied by 4*pi*r^2 and the radial weight this yields the ball
    quadrature of the dissipation functional.  The groupings mirror the
    functional definitions term by term, so equal-field cancellations are
    exact in floating point.
    """
    l1, l2, t1, t2, fx = terms
    g = 2.0 * phi / r
    if law is LawKind.HELICITY:
        if part == "L":
            return 0.75 * (dphi * l1 + g * (t1 + fx)) - 0.375 * (dphi * l2 + g * t2)
        return 0.375 * (dphi * t1 - g * (t1 + fx)) - 0.1875 * (dphi * t2 - g * t2)
    if law in (LawKind.MHD_ENERGY, LawKind.HYDRO_ENERGY):
        if part == "L":
            return (
                0.75 * (dphi * l1 + g * t1)
                - 1.5 * (dphi * l2 + g * t2)
                - 3.0 * (phi / r) * fx
            )
        return (
            0.375 * (dphi * t1 - g * t1)
            - 0.75 * (dphi * t2 - g * t2)
            + 1.5 * (phi / r) * fx
        )
    if part == "L":
        return 1.5 * (dphi * l1 + g * (t1 + fx)) - 0.75 * (dphi * l2 + g * t2)
    return 0.75 * (dphi * t1 - g * (t1 + fx)) - 0.375 * (dphi * t2 - g * t2)


def shell_node(
    law: LawKind,
    part: str,
    raw_l: float,
    raw_t: float,
    raw_flux: float,
    phi: float,
    dphi: float,
    r: float,
) -> float:
    """Radial shell integrand (without the 4*pi and the radial weight)."""
    a, b_t, b_f = SHELL_WEIGHTS[law][part]
    main = raw_l if part == "L" else raw_t
    return a * r**3 * dphi * main + r * r * phi * (b_t * raw_t + b_f * raw_flux)


def check_part(part: str) -> str:
    if part not in ("L", "T"):
        raise ValueError("part must be 'L' or 'T'")
    return part
