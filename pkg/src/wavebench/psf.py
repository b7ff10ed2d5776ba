"""Constant-envelope pulse shaping filters of the form h(t) = cos g(t).

Three built-in shapes are provided (half-sine, SFSK and the power-law
alpha-half-sine), together with numerical checks of the constant-envelope
identity h(t)^2 + h(t - T)^2 = 1 and of the edge smoothness of a pulse.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError

CE_TOLERANCE = 1e-9
SMOOTH_TOLERANCE = 1e-6
PARITY_TOLERANCE = 1e-6


class Kind(str, enum.Enum):
    HALF_SINE = "half-sine"
    SFSK = "sfsk"
    ALPHA_HALF_SINE = "alpha-half-sine"


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"
    UNKNOWN = "unknown"


class Smoothness(str, enum.Enum):
    SMOOTH = "smooth"
    CORNER_AT_EDGE = "corner-at-edge"
    DIVERGENT = "divergent"


@dataclass(frozen=True)
class PulseShape:
    """One pulse shaping filter supported on (-T, T)."""

    kind: Kind
    alpha: Optional[float] = None
    T: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not (math.isfinite(self.T) and self.T > 0):
            raise DomainError(f"half support T must be positive, got {self.T}")
        if self.kind is Kind.ALPHA_HALF_SINE:
            if self.alpha is None or not (math.isfinite(self.alpha) and self.alpha > 0):
                raise DomainError(f"alpha-half-sine needs a positive alpha, got {self.alpha}")
            object.__setattr__(self, "alpha", float(self.alpha))
        elif self.alpha is not None:
            raise DomainError(f"{self.kind.value} takes no alpha")

    @classmethod
    def half_sine(cls, T: float = 1.0) -> "PulseShape":
        return cls(Kind.HALF_SINE, None, T)

    @classmethod
    def sfsk(cls, T: float = 1.0) -> "PulseShape":
        return cls(Kind.SFSK, None, T)

    @classmethod
    def alpha_half_sine(cls, alpha: float, T: float = 1.0) -> "PulseShape":
        return cls(Kind.ALPHA_HALF_SINE, alpha, T)

    @property
    def label(self) -> str:
        if self.kind is Kind.ALPHA_HALF_SINE:
            return f"{self.kind.value}(alpha={self.alpha:g})"
        return self.kind.value

    def describe(self) -> dict:
        return {"kind": self.kind.value, "alpha": self.alpha, "T": self.T}


def beta_of_alpha(alpha: float) -> float:
    """Scale constant making the two alpha-half-sine branches meet at T/2."""
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be positive and finite, got {alpha}")
    return (math.pi / 2) * (4 / math.pi) ** (1 / alpha)


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def _phase_unchecked(shape: PulseShape, t: np.ndarray) -> np.ndarray:
    T = shape.T
    if shape.kind is Kind.HALF_SINE:
        return np.pi * t / (2 * T)
    if shape.kind is Kind.SFSK:
        return np.pi * t / (2 * T) - 0.25 * np.sin(2 * np.pi * t / T)
    a = shape.alpha
    beta = beta_of_alpha(a)
    at = np.abs(t)
    inner = (np.pi * np.minimum(at, T / 2) / (beta * T)) ** a
    outer = np.pi / 2 - (np.pi * np.maximum(T - at, 0.0) / (beta * T)) ** a
    return np.where(at <= T / 2, inner, outer)


def eval_phase(shape: PulseShape, t):
    """Phase function g(t) of `shape`; `t` must lie strictly inside (-T, T)."""
    arr, scalar = _as_array(t)
    if np.any(~np.isfinite(arr)) or np.any(np.abs(arr) >= shape.T):
        raise DomainError(f"phase of {shape.label} is only defined on |t| < T={shape.T}")
    g = _phase_unchecked(shape, arr)
    return float(g) if scalar else g


def eval_pulse(shape: PulseShape, t):
    """Pulse value h(t); zero for |t| >= T, including both endpoints."""
    arr, scalar = _as_array(t)
    inside = np.abs(arr) < shape.T
    h = np.zeros_like(arr)
    h[inside] = np.cos(_phase_unchecked(shape, arr[inside]))
    return float(h) if scalar else h


def sample_pulse(shape: PulseShape, interp_N: int) -> np.ndarray:
    """N taps of the pulse at t_m = -T + 2mT/N, m = 0..N-1."""
    if int(interp_N) != interp_N or interp_N < 2:
        raise DomainError(f"interpolation multiple must be an integer >= 2, got {interp_N}")
    N = int(interp_N)
    t = shape.T * (-1.0 + 2.0 * np.arange(N) / N)
    return eval_pulse(shape, t)


@dataclass(frozen=True)
class PhaseFunction:
    """A phase function g on (-T, T) with a declared parity.

    ``covers_negative`` is False for tables that only list t >= 0; the
    declared parity is then trusted to reach negative arguments.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    parity: Parity
    T: float = 1.0
    covers_negative: bool = True
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity(self.parity))
        if not (math.isfinite(self.T) and self.T > 0):
            raise DomainError(f"half support T must be positive, got {self.T}")

    def __call__(self, t):
        return np.asarray(self.evaluator(np.asarray(t, dtype=float)), dtype=float)

    @classmethod
    def from_shape(cls, shape: PulseShape) -> "PhaseFunction":
        parity = Parity.EVEN if shape.kind is Kind.ALPHA_HALF_SINE else Parity.ODD
        return cls(lambda t: _phase_unchecked(shape, t), parity, shape.T, True, shape.label)

    @classmethod
    def from_table(cls, t, g, parity, T: float = 1.0, name: str = "table") -> "PhaseFunction":
        t = np.asarray(t, dtype=float)
        g = np.asarray(g, dtype=float)
        if t.shape != g.shape or t.ndim != 1 or t.size < 4:
            raise DomainError("phase table needs at least 4 (t, g) rows")
        order = np.argsort(t)
        t, g = t[order], g[order]
        if np.any(np.diff(t) <= 0):
            raise DomainError("phase table has repeated t values")
        if np.any(~np.isfinite(g)):
            raise DomainError("phase table contains non-finite g values")
        spline = CubicSpline(t, g)
        return cls(spline, parity, T, bool(t[0] < 0), name)

    @classmethod
    def from_csv(cls, path, parity, T: float = 1.0) -> "PhaseFunction":
        """Load a two-column (t, g) CSV; a non-numeric first row is a header."""
        rows = []
        with open(path, newline="") as fh:
            for i, row in enumerate(csv.reader(fh)):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if i == 0:
                        continue
                    raise DomainError(f"{path}: malformed row {i + 1}: {row!r}")
        if not rows:
            raise DomainError(f"{path}: no data rows")
        t, g = zip(*rows)
        return cls.from_table(t, g, parity, T, name=Path(path).name)


@dataclass(frozen=True)
class CeReport:
    max_deviation: float
    detected_k: Optional[int]
    endpoint_ok: bool
    passed: bool
    endpoint_value: float = float("nan")
    parity_used: Optional[Parity] = None
    reason: Optional[str] = None


def _aitken(seq) -> float:
    a, b, c = seq[-3:]
    den = (c - b) - (b - a)
    if den == 0 or not math.isfinite(den):
        return c
    return c - (c - b) ** 2 / den


def _resolve_parity(phase: PhaseFunction, t, g_pos, tol):
    """Return (parity, reason); reason is set when parity cannot be trusted."""
    if not phase.covers_negative:
        if phase.parity is Parity.UNKNOWN:
            return None, "parity unknown and g is not given for negative t"
        return phase.parity, None
    g_neg = phase(-t)
    if not np.all(np.isfinite(g_neg)):
        return None, "g is not finite on (-T, 0)"
    scale = max(1.0, float(np.max(np.abs(g_pos))))
    even_err = float(np.max(np.abs(g_neg - g_pos)))
    odd_err = float(np.max(np.abs(g_neg + g_pos)))
    is_even = even_err <= tol * scale
    is_odd = odd_err <= tol * scale
    if phase.parity is Parity.EVEN and not is_even:
        return None, f"declared even but max|g(-t) - g(t)| = {even_err:.3g}"
    if phase.parity is Parity.ODD and not is_odd:
        return None, f"declared odd but max|g(-t) + g(t)| = {odd_err:.3g}"
    if phase.parity is Parity.UNKNOWN:
        if is_even:
            return Parity.EVEN, None
        if is_odd:
            return Parity.ODD, None
        return None, "g is neither even nor odd on the grid"
    return phase.parity, None


def verify_ce(
    phase: Union[PhaseFunction, PulseShape],
    grid_points: int = 2048,
    ce_tolerance: float = CE_TOLERANCE,
    parity_tolerance: float = PARITY_TOLERANCE,
) -> CeReport:
    """Check h(t)^2 + h(t - T)^2 = 1 on a uniform grid of (0, T).

    Also reports the integer k with g(t) + g(T - t) = (2k + 1) pi / 2 when
    that sum is constant on the grid, and whether cos g vanishes at T-.
    ``passed`` depends on the envelope identity alone.
    """
    if isinstance(phase, PulseShape):
        phase = PhaseFunction.from_shape(phase)
    if grid_points < 16:
        raise DomainError(f"grid_points must be >= 16, got {grid_points}")
    T = phase.T
    t = np.linspace(0.0, T, grid_points + 2)[1:-1]
    g_pos = phase(t)
    g_mirror = phase(T - t)
    if not (np.all(np.isfinite(g_pos)) and np.all(np.isfinite(g_mirror))):
        return CeReport(math.inf, None, False, False, reason="g is not finite on (0, T)")

    parity, reason = _resolve_parity(phase, t, g_pos, parity_tolerance)
    if parity is None:
        return CeReport(math.inf, None, False, False, reason=reason)

    # g(t - T) = g(-(T - t)) by parity
    g_shift = g_mirror if parity is Parity.EVEN else -g_mirror
    dev = np.abs(np.cos(g_pos) ** 2 + np.cos(g_shift) ** 2 - 1.0)
    max_dev = float(np.max(dev))

    s = (g_pos + g_mirror) * (2 / np.pi)
    odd = 2 * round((float(np.mean(s)) - 1) / 2) + 1
    detected_k = (odd - 1) // 2 if float(np.max(np.abs(s - odd))) <= ce_tolerance else None

    # cos g(T-) by Aitken extrapolation over T(1 - 1e-6), T(1 - 1e-7), T(1 - 1e-8)
    edge = np.cos(phase(T * (1 - np.array([1e-6, 1e-7, 1e-8]))))
    endpoint_value = _aitken(edge)
    if abs(endpoint_value) > abs(edge[-1]):
        endpoint_value = float(edge[-1])
    endpoint_ok = abs(endpoint_value) <= ce_tolerance

    return CeReport(
        max_deviation=max_dev,
        detected_k=detected_k,
        endpoint_ok=bool(endpoint_ok),
        passed=bool(max_dev <= ce_tolerance),
        endpoint_value=float(endpoint_value),
        parity_used=parity,
    )


@dataclass(frozen=True)
class SmoothnessVerdict:
    verdict: Smoothness
    edge_derivative_limit: float
    estimates: tuple = field(default=(), repr=False)


def classify_smoothness(
    shape: Union[PulseShape, PhaseFunction],
    smooth_tolerance: float = SMOOTH_TOLERANCE,
) -> SmoothnessVerdict:
    """Classify lim g'(t) as t -> T- as zero, finite, or divergent.

    g' is estimated by central differences at T - eps_j, eps_j = T 10^(-3-j),
    j = 0..5. Estimates drowned in rounding noise are dropped; the trend of
    the rest on a log-log scale decides the class. A decaying trend is
    extrapolated to the limit with Aitken's delta-squared step.
    """
    phase = PhaseFunction.from_shape(shape) if isinstance(shape, PulseShape) else shape
    T = phase.T
    eps = T * 10.0 ** -(3 + np.arange(6))
    step = eps / 2
    centre = T - eps
    d = (phase(centre + step) - phase(centre - step)) / (2 * step)
    scale = max(1.0, float(np.max(np.abs(phase(centre)))))
    noise = 4 * np.finfo(float).eps * scale / step
    mag = np.abs(d)
    reliable = mag > 10 * noise

    if reliable.sum() < 2:
        # every estimate is at the rounding floor: numerically zero
        limit = float(mag.min())
        verdict = Smoothness.SMOOTH if limit <= smooth_tolerance else Smoothness.CORNER_AT_EDGE
        return SmoothnessVerdict(verdict, limit, tuple(d))

    x = np.log10(eps[reliable])
    y = np.log10(mag[reliable])
    slope = float(np.polyfit(x, y, 1)[0])
    # growth by a factor >= 2 over the five decades
    growth_slope = math.log10(2) / 5
    if slope < -growth_slope:
        return SmoothnessVerdict(Smoothness.DIVERGENT, math.inf, tuple(d))
    if slope > growth_slope:
        seq = d[reliable]
        limit = _aitken(seq) if seq.size >= 3 else float(seq[-1])
        if abs(limit) > mag.min():
            limit = float(mag.min())
    else:
        limit = float(d[reliable][-1])
    verdict = Smoothness.SMOOTH if abs(limit) <= smooth_tolerance else Smoothness.CORNER_AT_EDGE
    return SmoothnessVerdict(verdict, float(limit), tuple(d))
