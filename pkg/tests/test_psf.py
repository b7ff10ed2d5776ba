import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wavebench.errors import DomainError
from wavebench.psf import (
    Kind,
    Parity,
    PhaseFunction,
    PulseShape,
    Smoothness,
    beta_of_alpha,
    classify_smoothness,
    eval_phase,
    eval_pulse,
    sample_pulse,
    verify_ce,
)

CE_ALPHAS = (1, 1.25, 1.5, 2, 3, 5)
BUILTIN = [PulseShape.half_sine(), PulseShape.sfsk()] + [
    PulseShape.alpha_half_sine(a) for a in CE_ALPHAS
]


def test_beta_alpha_one_is_two():
    assert beta_of_alpha(1) == pytest.approx(2.0, abs=1e-15)


def test_beta_alpha_two_is_sqrt_pi():
    mpmath.mp.dps = 40
    ref = mpmath.pi / 2 * (4 / mpmath.pi) ** mpmath.mpf("0.5")
    assert abs(beta_of_alpha(2) - float(ref)) < 1e-15
    assert beta_of_alpha(2) == pytest.approx(1.7724539, abs=1e-7)


def test_beta_large_alpha_limit():
    assert beta_of_alpha(1e6) == pytest.approx(math.pi / 2, abs=1e-5)


@pytest.mark.parametrize("bad", [0, -1, math.inf, math.nan])
def test_beta_rejects(bad):
    with pytest.raises(DomainError):
        beta_of_alpha(bad)


def test_shape_validation():
    with pytest.raises(DomainError):
        PulseShape.half_sine(T=0)
    with pytest.raises(DomainError):
        PulseShape(Kind.ALPHA_HALF_SINE)
    with pytest.raises(DomainError):
        PulseShape(Kind.SFSK, alpha=2)
    # non-smooth alphas are allowed for study
    assert PulseShape.alpha_half_sine(0.5).alpha == 0.5


def test_phase_examples():
    a2 = PulseShape.alpha_half_sine(2)
    assert eval_phase(a2, 0.0) == 0.0
    assert eval_phase(PulseShape.sfsk(), 0.5) == pytest.approx(math.pi / 4, abs=1e-15)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1, 1.25, 2, 3, 5, 17.5])
def test_phase_at_half_support(alpha):
    shape = PulseShape.alpha_half_sine(alpha)
    assert eval_phase(shape, 0.5) == pytest.approx(math.pi / 4, abs=1e-12)
    # both branch formulas at T/2
    beta = beta_of_alpha(alpha)
    inner = (math.pi * 0.5 / beta) ** alpha
    outer = math.pi / 2 - (math.pi * 0.5 / beta) ** alpha
    assert abs(inner - outer) <= 1e-12


@pytest.mark.parametrize("t", [1.0, -1.0, 1.5, math.nan])
def test_phase_outside_support(t):
    with pytest.raises(DomainError):
        eval_phase(PulseShape.half_sine(), t)


def test_pulse_examples():
    hs = PulseShape.half_sine()
    assert eval_pulse(hs, 0.0) == 1.0
    assert eval_pulse(hs, 0.5) == pytest.approx(math.sqrt(2) / 2, abs=1e-15)
    assert eval_pulse(hs, 1.0) == 0.0
    assert abs(eval_pulse(hs, 1 - 1e-9)) < 1e-8
    a1 = PulseShape.alpha_half_sine(1)
    assert eval_pulse(a1, 0.3) == pytest.approx(math.cos(0.3 * math.pi / 2), abs=1e-15)
    assert eval_pulse(a1, 0.3) == pytest.approx(0.8910065, abs=1e-7)


def test_sample_pulse_examples():
    hs = PulseShape.half_sine()
    taps = sample_pulse(hs, 5)
    c3, c1 = math.cos(0.3 * math.pi), math.cos(0.1 * math.pi)
    np.testing.assert_allclose(taps, [0, c3, c1, c1, c3], atol=1e-15)
    for shape in BUILTIN:
        np.testing.assert_array_equal(sample_pulse(shape, 2), [0.0, 1.0])
    r = math.sqrt(2) / 2
    np.testing.assert_allclose(sample_pulse(PulseShape.alpha_half_sine(2), 4), [0, r, 1, r], atol=1e-15)
    with pytest.raises(DomainError):
        sample_pulse(hs, 1)


@pytest.mark.parametrize("shape", BUILTIN, ids=lambda s: s.label)
@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_evenness(shape, seed):
    t = np.random.default_rng(seed).uniform(0, shape.T, 1024)
    assert np.max(np.abs(eval_pulse(shape, t) - eval_pulse(shape, -t))) <= 1e-12


@given(t=st.floats(1.0, 1e6) | st.floats(-1e6, -1.0))
def test_support(t):
    for shape in BUILTIN:
        assert eval_pulse(shape, t) == 0.0


@pytest.mark.parametrize("shape", BUILTIN, ids=lambda s: s.label)
def test_ce_identity(shape):
    t = np.linspace(0, 1, 2050)[1:-1]
    dev = eval_pulse(shape, t) ** 2 + eval_pulse(shape, t - 1) ** 2 - 1
    assert np.max(np.abs(dev)) <= 1e-12


def test_alpha_one_reduces_to_half_sine():
    t = np.linspace(-1.2, 1.2, 4096)
    diff = eval_pulse(PulseShape.alpha_half_sine(1), t) - eval_pulse(PulseShape.half_sine(), t)
    assert np.max(np.abs(diff)) <= 1e-12


@pytest.mark.parametrize("shape", BUILTIN, ids=lambda s: s.label)
def test_energy_equals_T(shape):
    t = np.linspace(-shape.T, shape.T, 8193)
    energy = np.trapezoid(eval_pulse(shape, t) ** 2, t)
    assert energy == pytest.approx(shape.T, rel=1e-6)


@pytest.mark.parametrize("T", [0.25, 1.0, 3.0])
def test_non_unit_support(T):
    shape = PulseShape.alpha_half_sine(2, T=T)
    assert eval_phase(shape, T / 2) == pytest.approx(math.pi / 4, abs=1e-12)
    assert verify_ce(shape).passed


@pytest.mark.parametrize("shape", [PulseShape.half_sine(), PulseShape.sfsk()], ids=lambda s: s.label)
def test_verify_builtin_odd(shape):
    rep = verify_ce(PhaseFunction.from_shape(shape))
    assert rep.passed and rep.detected_k == 0 and rep.endpoint_ok
    assert rep.max_deviation <= 1e-12
    assert rep.parity_used is Parity.ODD


def test_verify_failing_linear_phase():
    g = PhaseFunction(lambda t: np.pi * t / 3, Parity.ODD)
    rep = verify_ce(g)
    assert not rep.passed
    assert rep.detected_k is None
    assert rep.max_deviation >= 0.49
    # an odd grid_points puts T/2 on the grid, where the hand value is 0.5
    assert verify_ce(g, grid_points=2047).max_deviation == pytest.approx(0.5, abs=1e-12)


def test_verify_detects_nonzero_k():
    # g(t) = 3 pi t / 2T: g(t) + g(T - t) = 3 pi / 2, k = 1, and CE holds
    g = PhaseFunction(lambda t: 3 * np.pi * t / 2, Parity.ODD)
    rep = verify_ce(g)
    assert rep.passed and rep.detected_k == 1


def test_verify_parity_handling():
    odd_g = lambda t: np.pi * t / 2
    rep = verify_ce(PhaseFunction(odd_g, Parity.EVEN))
    assert not rep.passed and "declared even" in rep.reason
    rep = verify_ce(PhaseFunction(odd_g, Parity.UNKNOWN))
    assert rep.passed and rep.parity_used is Parity.ODD
    lopsided = lambda t: np.pi * t / 2 + 0.1 * t ** 2
    rep = verify_ce(PhaseFunction(lopsided, Parity.UNKNOWN))
    assert not rep.passed and "neither" in rep.reason
    half = PhaseFunction(odd_g, Parity.UNKNOWN, covers_negative=False)
    assert not verify_ce(half).passed


def test_verify_rejects_small_grid():
    with pytest.raises(DomainError):
        verify_ce(PulseShape.half_sine(), grid_points=8)


@settings(max_examples=50, deadline=None)
@given(
    amp=st.floats(1e-3, 0.5),
    freq=st.integers(1, 6),
    centre=st.floats(0.05, 0.95),
)
def test_verifier_soundness(amp, freq, centre):
    # a bump that breaks g(t) + g(T - t) = pi/2 must break the envelope
    def g(t):
        return np.pi * t / 2 + amp * np.sin(np.pi * freq * t) ** 2 * np.exp(-((np.abs(t) - centre) / 0.1) ** 2) * np.sign(t)

    rep = verify_ce(PhaseFunction(g, Parity.ODD), grid_points=512)
    t = np.linspace(0, 1, 514)[1:-1]
    direct = np.max(np.abs(np.cos(g(t)) ** 2 + np.cos(g(t - 1)) ** 2 - 1))
    assert rep.max_deviation == pytest.approx(direct, abs=1e-15)
    assert rep.passed == (direct <= 1e-9)


def test_phase_from_csv(tmp_path):
    t = np.linspace(0, 1, 2001)
    path = tmp_path / "sfsk.csv"
    rows = "\n".join(f"{float(a)!r},{float(b)!r}" for a, b in zip(t, np.pi * t / 2 - 0.25 * np.sin(2 * np.pi * t)))
    path.write_text("t,g\n" + rows + "\n")
    phase = PhaseFunction.from_csv(path, "odd")
    assert not phase.covers_negative
    rep = verify_ce(phase)
    assert rep.passed and rep.detected_k == 0
    assert classify_smoothness(phase).verdict is Smoothness.SMOOTH


def test_phase_from_csv_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,g\n0,0\n0.5,x\n")
    with pytest.raises(DomainError):
        PhaseFunction.from_csv(bad, "odd")
    short = tmp_path / "short.csv"
    short.write_text("0,0\n1,1\n")
    with pytest.raises(DomainError):
        PhaseFunction.from_csv(short, "odd")


@pytest.mark.parametrize(
    "alpha, verdict",
    [(0.5, Smoothness.DIVERGENT), (0.9, Smoothness.DIVERGENT), (1, Smoothness.CORNER_AT_EDGE),
     (1.25, Smoothness.SMOOTH), (1.5, Smoothness.SMOOTH), (2, Smoothness.SMOOTH),
     (3, Smoothness.SMOOTH), (5, Smoothness.SMOOTH)],
)
def test_smoothness_alpha(alpha, verdict):
    v = classify_smoothness(PulseShape.alpha_half_sine(alpha))
    assert v.verdict is verdict
    if verdict is Smoothness.SMOOTH:
        assert abs(v.edge_derivative_limit) <= 1e-6
    if verdict is Smoothness.DIVERGENT:
        assert v.edge_derivative_limit == math.inf


@pytest.mark.parametrize("T", [0.5, 1.0, 2.0])
def test_half_sine_corner_limit(T):
    v = classify_smoothness(PulseShape.half_sine(T))
    assert v.verdict is Smoothness.CORNER_AT_EDGE
    assert v.edge_derivative_limit == pytest.approx(math.pi / (2 * T), abs=1e-6)


def test_sfsk_smooth():
    assert classify_smoothness(PulseShape.sfsk()).verdict is Smoothness.SMOOTH
