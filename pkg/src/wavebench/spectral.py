"""Pulse spectra by trapezoidal quadrature, power spectra and leakage curves.

Frequencies are angular (rad/s) throughout the library; the normalized
frequency used at the CLI is fT = omega T / (2 pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import CZT

from .errors import DomainError, PrecisionError
from .psf import PulseShape, eval_pulse

# defaults in units of T
DT_PER_T = 1 / 4096
DOMEGA_T = 2 * math.pi * 0.005
WMAX_T = 200 * math.pi

_SINGULAR_GUARD = 1e-6
_DIRECT_BLOCK = 1 << 22
_CZT_BLOCK = 1024


@dataclass(frozen=True)
class SpectrumSamples:
    omega: np.ndarray
    values: np.ndarray
    max_imag_residual: float
    dt_used: float

    def __len__(self):
        return self.omega.size


@dataclass(frozen=True)
class LeakageCurve:
    bandwidth: np.ndarray
    leakage: np.ndarray
    w_max: float
    total_energy: float
    snap_distance: np.ndarray
    dt_used: float
    domega: float


def default_dt(T: float = 1.0) -> float:
    return T * DT_PER_T


def default_domega(T: float = 1.0) -> float:
    return DOMEGA_T / T


def default_wmax(T: float = 1.0) -> float:
    return WMAX_T / T


def _is_uniform(x: np.ndarray) -> bool:
    if x.size < 3:
        return False
    step = (x[-1] - x[0]) / (x.size - 1)
    return step > 0 and np.allclose(np.diff(x), step, rtol=1e-9, atol=0)


def _time_grid(shape: PulseShape, dt: float):
    T = shape.T
    if not (dt > 0 and math.isfinite(dt)):
        raise PrecisionError(f"dt must be positive, got {dt}")
    if dt > T / 64 * (1 + 1e-12):
        raise PrecisionError(f"dt={dt:g} is coarser than T/64={T / 64:g}")
    n = int(math.ceil(2 * T / dt - 1e-9))
    if n % 2:
        n += 1
    t = T * (np.arange(n + 1) * (2.0 / n) - 1.0)
    w = np.full(n + 1, 2 * T / n)
    w[0] = w[-1] = T / n
    return t, w, 2 * T / n


def _direct(x: np.ndarray, t: np.ndarray, omega: np.ndarray) -> np.ndarray:
    out = np.empty(omega.size, dtype=complex)
    rows = max(1, _DIRECT_BLOCK // t.size)
    for i in range(0, omega.size, rows):
        ph = np.outer(omega[i:i + rows], t)
        out[i:i + rows] = np.cos(ph) @ x - 1j * (np.sin(ph) @ x)
    return out


def _chirp_z(x: np.ndarray, t0: float, dt: float, omega: np.ndarray) -> np.ndarray:
    # sum_n x_n exp(-j w_k (t0 + n dt)) with w_k = w_0 + k dw, in blocks of
    # _CZT_BLOCK frequencies: the chirp phase error grows with k^2
    dw = (omega[-1] - omega[0]) / (omega.size - 1)
    out = np.empty(omega.size, dtype=complex)
    for i in range(0, omega.size, _CZT_BLOCK):
        m = min(_CZT_BLOCK, omega.size - i)
        w0 = omega[0] + i * dw
        czt = CZT(x.size, m, w=np.exp(-1j * dw * dt), a=np.exp(1j * w0 * dt))
        out[i:i + m] = czt(x) * np.exp(-1j * (w0 + np.arange(m) * dw) * t0)
    return out


def transform(shape: PulseShape, omega_grid, dt: float | None = None,
              method: str = "auto") -> SpectrumSamples:
    """H(omega) = trapezoid of h(t) exp(-j omega t) over [-T, T] with step dt.

    Returns the real part; the imaginary part of the sum only measures how far
    the sampled pulse is from even symmetry and is reported as a residual.
    ``method`` picks the evaluation of the same trapezoidal sum: a direct
    matrix product, or a chirp-z transform for uniform frequency grids.
    """
    omega = np.asarray(omega_grid, dtype=float)
    if omega.ndim != 1 or omega.size == 0 or not np.all(np.isfinite(omega)):
        raise DomainError("omega grid must be a finite 1-D sequence")
    if dt is None:
        dt = default_dt(shape.T)
    t, w, dt_used = _time_grid(shape, dt)
    x = eval_pulse(shape, t) * w

    if method == "auto":
        method = "czt" if _is_uniform(omega) and omega.size * t.size > _DIRECT_BLOCK else "direct"
    if method == "czt":
        if not _is_uniform(omega):
            raise DomainError("chirp-z evaluation needs a uniform omega grid")
        H = _chirp_z(x, t[0], dt_used, omega)
    elif method == "direct":
        H = _direct(x, t, omega)
    else:
        raise ValueError(f"unknown method {method!r}")

    return SpectrumSamples(omega, H.real.copy(), float(np.max(np.abs(H.imag))), dt_used)


def half_sine_spectrum_closed_form(omega, T: float = 1.0):
    """Closed-form spectrum of the half-sine pulse.

    Near the removable singularity |omega| = pi/(2T) a two-term Taylor
    expansion replaces the 0/0 quotient.
    """
    om, scalar = np.asarray(omega, dtype=float), np.ndim(omega) == 0
    om = np.atleast_1d(om)
    w0 = np.pi / (2 * T)
    delta = np.abs(om) - w0
    near = np.abs(delta) < _SINGULAR_GUARD / T
    out = np.empty_like(om)
    far = ~near
    out[far] = (np.pi / T) * np.cos(om[far] * T) / (w0 ** 2 - om[far] ** 2)
    # H(w0 + d) = T - d T^2 / pi + O(d^2)
    out[near] = T - delta[near] * T ** 2 / np.pi
    return float(out[0]) if scalar else out


def power_spectrum(spec: SpectrumSamples) -> np.ndarray:
    return np.asarray(spec.values) ** 2


def _check_symmetric_uniform(spec: SpectrumSamples):
    om = spec.omega
    if not _is_uniform(om):
        raise DomainError("band energy needs a uniform omega grid")
    if not np.isclose(om[0], -om[-1], rtol=0, atol=1e-9 * max(1.0, abs(om[-1]))):
        raise DomainError("band energy needs an omega grid symmetric about 0")
    if om.size % 2 == 0:
        raise DomainError("symmetric omega grid must contain omega = 0")


def _cumulative_band(spec: SpectrumSamples):
    """Energies over [-W_i, W_i] for every non-negative grid point W_i."""
    _check_symmetric_uniform(spec)
    P = power_spectrum(spec)
    c = spec.omega.size // 2
    dw = (spec.omega[-1] - spec.omega[0]) / (spec.omega.size - 1)
    right, left = P[c:], P[c::-1]
    seg = 0.5 * dw * ((right[1:] + right[:-1]) + (left[1:] + left[:-1]))
    energy = np.concatenate(([0.0], np.cumsum(seg)))
    return spec.omega[c:] - spec.omega[c], energy, dw


def _snap(grid: np.ndarray, dw: float, W: np.ndarray):
    if np.any(W > grid[-1] + dw / 2):
        raise DomainError(f"bandwidth {W.max():g} exceeds the omega grid ({grid[-1]:g})")
    idx = np.minimum(np.rint(W / dw).astype(int), grid.size - 1)
    return idx, np.abs(grid[idx] - W)


def band_energy(spec: SpectrumSamples, W: float) -> float:
    """Trapezoidal energy of |H|^2 over [-W, W], W snapped to the grid."""
    if not W >= 0:
        raise DomainError(f"bandwidth must be non-negative, got {W}")
    grid, energy, dw = _cumulative_band(spec)
    idx, _ = _snap(grid, dw, np.array([float(W)]))
    return float(energy[idx[0]])


def symmetric_grid(w_max: float, domega: float) -> np.ndarray:
    m = int(round(w_max / domega))
    if not math.isclose(m * domega, w_max, rel_tol=1e-9):
        raise DomainError(f"w_max={w_max:g} is not a multiple of domega={domega:g}")
    return np.arange(-m, m + 1) * domega


def leakage_curve(shape: PulseShape, W_grid, w_max: float | None = None,
                  dt: float | None = None, domega: float | None = None) -> LeakageCurve:
    """Out-of-band fraction 1 - E(W)/E(w_max) for each W in `W_grid`."""
    T = shape.T
    w_max = default_wmax(T) if w_max is None else float(w_max)
    domega = default_domega(T) if domega is None else float(domega)
    W = np.asarray(W_grid, dtype=float)
    if W.ndim != 1 or W.size == 0:
        raise DomainError("bandwidth grid must be a non-empty 1-D sequence")
    if np.any(np.diff(W) <= 0):
        raise DomainError("bandwidth grid must be strictly increasing")
    if W[0] < 0 or W[-1] > w_max * (1 + 1e-12):
        raise DomainError(f"bandwidths must lie in [0, w_max={w_max:g}]")

    spec = transform(shape, symmetric_grid(w_max, domega), dt)
    grid, energy, dw = _cumulative_band(spec)
    idx, snap = _snap(grid, dw, W)
    total = energy[-1]
    leak = 1.0 - energy[idx] / total
    return LeakageCurve(W, leak, w_max, float(total), snap, spec.dt_used, domega)


def to_normalized(omega, T: float = 1.0):
    """Angular frequency to normalized frequency fT."""
    return np.asarray(omega) * T / (2 * np.pi)


def from_normalized(f, T: float = 1.0):
    return 2 * np.pi * np.asarray(f, dtype=float) / T


def power_db(P, floor_db: float = -160.0) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    with np.errstate(divide="ignore"):
        db = 10 * np.log10(P)
    return np.maximum(db, floor_db)
