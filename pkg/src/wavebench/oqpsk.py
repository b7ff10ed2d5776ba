"""OQPSK complex-baseband modulation, interpolating low-pass filter and PAPR."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.signal import upfirdn

from .errors import DomainError
from .psf import PulseShape, sample_pulse

BIT_GENERATOR = "numpy.random.PCG64"
DEFAULT_SEED = 42
DEFAULT_PAIRS = 4096
DEFAULT_N_VALUES = (4, 6, 8, 12, 16, 24, 32)
DEFAULT_N0 = 5
DEFAULT_K = 50
MIN_PAPR_SAMPLES = 1000


@dataclass(frozen=True)
class LpfParams:
    interp_N0: int
    half_length_K: int
    taps: np.ndarray = field(repr=False)

    def describe(self) -> dict:
        return {"N0": self.interp_N0, "K": self.half_length_K}


@dataclass(frozen=True)
class BasebandSignal:
    samples: np.ndarray
    samples_per_2T: int
    provenance: dict

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True)
class PaprReport:
    papr_db: float
    peak_power: float
    mean_power: float
    discarded_edge_samples: int
    provenance: dict


def random_bits(count: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Deterministic i.i.d. bits from PCG64 seeded with `seed`."""
    if count < 0:
        raise DomainError(f"bit count must be non-negative, got {count}")
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.integers(0, 2, size=count, dtype=np.uint8)


def write_bits(path, bits) -> None:
    bits = np.asarray(bits)
    if np.any((bits != 0) & (bits != 1)):
        raise DomainError("bits must be 0 or 1")
    Path(path).write_text("".join("1" if b else "0" for b in bits) + "\n")


def read_bits(path) -> np.ndarray:
    text = Path(path).read_text()
    if not text.endswith("\n"):
        raise DomainError(f"{path}: bit file must end with a newline")
    body = text[:-1]
    if set(body) - {"0", "1"}:
        raise DomainError(f"{path}: bit file may only contain '0' and '1'")
    return np.frombuffer(body.encode(), dtype=np.uint8) - ord("0")


def map_bits(bits):
    """Bit 0 -> +1, bit 1 -> -1; even-indexed bits feed I, odd-indexed feed Q."""
    b = np.asarray(bits)
    if b.ndim != 1 or b.size % 2:
        raise DomainError(f"need an even number of bits, got {b.size}")
    if np.any((b != 0) & (b != 1)):
        raise DomainError("bits must be 0 or 1")
    sym = 1.0 - 2.0 * b.astype(float)
    return sym[0::2], sym[1::2]


def lpf_taps(interp_N0: int = DEFAULT_N0, half_length_K: int = DEFAULT_K) -> LpfParams:
    """Taps h_i = (pi/N0) sinc(i/(2 N0)) for i = -K..K (numpy's normalized sinc)."""
    if int(interp_N0) != interp_N0 or interp_N0 < 2:
        raise DomainError(f"N0 must be an integer >= 2, got {interp_N0}")
    if int(half_length_K) != half_length_K or half_length_K < 1:
        raise DomainError(f"K must be an integer >= 1, got {half_length_K}")
    N0, K = int(interp_N0), int(half_length_K)
    i = np.arange(-K, K + 1)
    taps = (np.pi / N0) * np.sinc(i / (2 * N0))
    # np.sinc is symmetric up to rounding of i/(2 N0); mirror to make it exact
    taps[:K] = taps[:K:-1]
    return LpfParams(N0, K, taps)


def modulate(bits, shape: PulseShape, interp_N: int, seed: Optional[int] = None) -> BasebandSignal:
    """OQPSK baseband at N samples per pulse support 2T.

    Pulses on one branch are N samples long and spaced N samples apart, so a
    branch is the concatenation of symbol-scaled copies of the sampled pulse.
    The Q branch is delayed by N/2 samples (one T).
    """
    if int(interp_N) != interp_N or interp_N < 4 or interp_N % 2:
        raise DomainError(
            f"interp_N must be an even integer >= 4, got {interp_N}: the Q branch "
            "is offset by T = N/2 samples, which must be a whole number"
        )
    N = int(interp_N)
    a, b = map_bits(bits)
    if a.size == 0:
        raise DomainError("need at least one symbol pair")
    p = sample_pulse(shape, N)
    half = N // 2
    out = np.zeros(a.size * N + half, dtype=complex)
    out[: a.size * N] += np.outer(a, p).ravel()
    out[half:] += 1j * np.outer(b, p).ravel()
    provenance = {
        "seed": seed,
        "bit_generator": BIT_GENERATOR if seed is not None else None,
        "bits": int(np.asarray(bits).size),
        "shape": shape.describe(),
        "N": N,
        "lpf": None,
    }
    return BasebandSignal(out, N, provenance)


def upsample_filter(signal: BasebandSignal, lpf: LpfParams) -> BasebandSignal:
    """Zero-stuff by N0 and convolve with the LPF taps, keeping both transients."""
    y = upfirdn(lpf.taps, signal.samples, up=lpf.interp_N0)
    provenance = dict(signal.provenance, lpf=lpf.describe())
    return BasebandSignal(y, signal.samples_per_2T * lpf.interp_N0, provenance)


def default_discard(signal: BasebandSignal) -> int:
    lpf = signal.provenance.get("lpf")
    K = lpf["K"] if lpf else 0
    return 2 * (K + signal.samples_per_2T)


def papr(signal: BasebandSignal, discard_each_end: Optional[int] = None) -> PaprReport:
    """Peak over mean of |s|^2 after dropping `discard_each_end` samples per end."""
    if discard_each_end is None:
        discard_each_end = default_discard(signal)
    d = int(discard_each_end)
    if d < 0:
        raise DomainError("discard count must be non-negative")
    kept = signal.samples[d: signal.samples.size - d]
    if kept.size < MIN_PAPR_SAMPLES:
        raise DomainError(
            f"only {kept.size} samples remain after discarding {d} per end; "
            f"need at least {MIN_PAPR_SAMPLES}"
        )
    power = kept.real ** 2 + kept.imag ** 2
    peak = float(power.max())
    mean = float(power.mean())
    if not mean > 0:
        raise DomainError("signal has zero power in the retained region")
    return PaprReport(10 * math.log10(peak / mean), peak, mean, d, dict(signal.provenance))


@dataclass(frozen=True)
class SweepRow:
    shape: PulseShape
    N: int
    report: PaprReport


def papr_sweep(
    shapes: Sequence[PulseShape],
    N_values: Sequence[int] = DEFAULT_N_VALUES,
    lpf: Optional[LpfParams] = None,
    bit_count: int = 2 * DEFAULT_PAIRS,
    seed: int = DEFAULT_SEED,
    bits=None,
) -> list[SweepRow]:
    """PAPR for every (shape, N) cell, shape-major, sharing one bit sequence.

    Pass ``lpf=None`` to get the default N0=5, K=50 filter; explicit ``bits``
    override the seeded generator.
    """
    for N in N_values:
        if int(N) != N or N < 4 or N % 2:
            raise DomainError(f"N={N} must be an even integer >= 4 (Q offset is N/2 samples)")
    lpf = lpf_taps() if lpf is None else lpf
    bits = random_bits(bit_count, seed) if bits is None else np.asarray(bits)
    rows = []
    for shape in shapes:
        for N in N_values:
            sig = upsample_filter(modulate(bits, shape, int(N), seed), lpf)
            rows.append(SweepRow(shape, int(N), papr(sig)))
    return rows
