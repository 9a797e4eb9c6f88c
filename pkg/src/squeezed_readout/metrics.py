"""Analytic readout figures of merit.

The measurement integrates the leaked output field for a time t and
projects it onto the local-oscillator quadrature at angle phi.  For a
qubit eigenvalue sigma = ±1 the outcome is Gaussian with

    mean      A·⟨Q'⟩ + σ·B·⟨P'⟩
    variance  A²·Var(Q') + B²·Var(P') + 2σAB·Cov(Q',P')
              + u·(κ/2)(F² + G²)

where primes denote the input quadratures rotated by phi, A, B, F, G are
the response coefficients of cavity_dynamics, and u is the vacuum-noise
weight from SystemParams.  The cross term vanishes whenever the
measurement frame is aligned with the squeezing ellipse, i.e. when
Δθ = φ − θξ/2 is a multiple of π/2.

All functions here accept (t, params) in any consistent unit system and
rescale to χs = 1 internally, so results depend only on χs·t and κ/χs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .dynamics import coefficient_set, signal_coefficients
from .errors import NumericalError, UndefinedPointError, ValidationError
from .params import SystemParams, wrap_angle
from .probe import (
    SQRT2,
    ProbeState,
    input_means,
    rotated_quadrature_covariance,
    rotated_quadrature_variance,
)

_PHASE_TOL = 1e-9


def _check_sigma(sigma: int) -> None:
    if sigma not in (1, -1):
        raise ValidationError(f"sigma must be +1 or -1, got {sigma!r}")


def _internal(t: float, params: SystemParams) -> tuple[float, SystemParams]:
    """Rescale (t, params) to the χs = 1 convention."""
    return t * params.chi_s, params.as_internal()


def integrated_signal_mean(
    t: float, probe: ProbeState, params: SystemParams, sigma: int
) -> float:
    """Mean outcome A·⟨P⟩ − σ·B·⟨Q⟩ of the phi = π/2 homodyne measurement."""
    _check_sigma(sigma)
    ti, pi_ = _internal(t, params)
    a_coef, b_coef = signal_coefficients(ti, pi_)
    mq, mp = input_means(probe)
    return a_coef * mp - sigma * b_coef * mq


def measurement_mean(
    t: float, probe: ProbeState, params: SystemParams, phi: float, sigma: int
) -> float:
    """Mean outcome for a homodyne measurement at LO angle phi."""
    _check_sigma(sigma)
    ti, pi_ = _internal(t, params)
    a_coef, b_coef = signal_coefficients(ti, pi_)
    mq, mp = input_means(probe)
    c, s = math.cos(phi), math.sin(phi)
    return a_coef * (mq * c + mp * s) + sigma * b_coef * (-mq * s + mp * c)


def contrast(t: float, probe: ProbeState, params: SystemParams, phi: float) -> float:
    """Separation |mean₊ − mean₋| = 2√2·α·|B|·|sin(θα − φ)|."""
    ti, pi_ = _internal(t, params)
    _, b_coef = signal_coefficients(ti, pi_)
    return 2.0 * SQRT2 * probe.alpha * abs(b_coef) * abs(
        math.sin(probe.theta_alpha - phi)
    )


def integrated_variance(
    t: float, probe: ProbeState, params: SystemParams, phi: float, sigma: int
) -> float:
    """Outcome variance for qubit eigenvalue sigma at LO angle phi.

    Exact Gaussian propagation of the probe covariance through the
    coefficients (A, σB), plus the resonator-vacuum term
    u·(κ/2)(F² + G²), which is invariant under phi.
    """
    _check_sigma(sigma)
    ti, pi_ = _internal(t, params)
    coeff = coefficient_set(ti, pi_)
    a_coef, b_coef = coeff.a_coef, coeff.b_coef
    var_q_rot = rotated_quadrature_variance(probe, phi)
    var_p_rot = rotated_quadrature_variance(probe, phi + 0.5 * math.pi)
    cov_rot = rotated_quadrature_covariance(probe, phi)
    vacuum = pi_.vacuum_weight * 0.5 * pi_.kappa * (coeff.big_f**2 + coeff.big_g**2)
    return (
        a_coef**2 * var_q_rot
        + b_coef**2 * var_p_rot
        + 2.0 * sigma * a_coef * b_coef * cov_rot
        + vacuum
    )


def snr(t: float, probe: ProbeState, params: SystemParams, phi: float) -> float:
    """Contrast over the summed standard deviations of the two outcomes."""
    if t <= 0.0:
        raise UndefinedPointError(f"snr is undefined at t={t!r}; requires t > 0")
    vp = integrated_variance(t, probe, params, phi, +1)
    vm = integrated_variance(t, probe, params, phi, -1)
    if vp <= 0.0 or vm <= 0.0:
        raise NumericalError(
            f"outcome variances must be positive, got {vp!r} and {vm!r}"
        )
    return contrast(t, probe, params, phi) / (math.sqrt(vp) + math.sqrt(vm))


_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def erf(x: float) -> float:
    """Error function (2/√π)∫₀ˣe^{−s²}ds to 1e-12 absolute accuracy.

    |x| ≤ 2 uses the positive-term series
    erf(x) = (2/√π)·e^{−x²}·Σₙ (2x²)ⁿ·x/(2n+1)!!, which has no
    cancellation; |x| > 2 evaluates the continued fraction for erfc,
    erfc(x) = (e^{−x²}/√π)/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
    by the modified Lentz algorithm, then extends oddly.
    """
    if not math.isfinite(x):
        raise ValidationError(f"erf requires finite input, got {x!r}")
    if x == 0.0:
        return 0.0
    ax = abs(x)
    if ax <= 2.0:
        two_x2 = 2.0 * ax * ax
        term = ax
        total = ax
        n = 0
        while True:
            n += 1
            term *= two_x2 / (2.0 * n + 1.0)
            new_total = total + term
            if new_total == total:
                break
            total = new_total
            if n > 200:  # series at |x| <= 2 converges in < 40 terms
                raise NumericalError(f"erf series failed to converge at x={x!r}")
        result = _TWO_OVER_SQRT_PI * math.exp(-ax * ax) * total
    else:
        # Modified Lentz on b0 = x, a_n = n/2, b_n = x.
        tiny = 1e-300
        f = ax
        c = ax
        d = 0.0
        for n in range(1, 300):
            an = 0.5 * n
            d = ax + an * d
            if d == 0.0:
                d = tiny
            c = ax + an / c
            if c == 0.0:
                c = tiny
            d = 1.0 / d
            delta = c * d
            f *= delta
            if abs(delta - 1.0) < 1e-17:
                break
        else:
            raise NumericalError(
                f"erfc continued fraction failed to converge at x={x!r}"
            )
        erfc = math.exp(-ax * ax) / (math.sqrt(math.pi) * f)
        result = 1.0 - erfc
    return result if x > 0.0 else -result


def fidelity(t: float, snr_value: float, t1_total: float) -> float:
    """Readout fidelity exp(−t/2T₁)·erf(SNR/√2).

    t and t1_total must share one time unit.  The exponential prefactor
    is the probability that the qubit survives half the integration
    window; the formula assumes t ≪ T₁ and a warning is emitted past
    t/T₁ = 0.1.
    """
    if not math.isfinite(t) or t < 0.0:
        raise ValidationError(f"t must be nonnegative and finite, got {t!r}")
    if not math.isfinite(t1_total) or t1_total <= 0.0:
        raise ValidationError(f"t1_total must be positive, got {t1_total!r}")
    if not math.isfinite(snr_value):
        raise ValidationError(f"snr_value must be finite, got {snr_value!r}")
    if t / t1_total > 0.1:
        warnings.warn(
            f"fidelity formula assumes t << T1; got t/T1 = {t / t1_total:.3g}",
            stacklevel=2,
        )
    return math.exp(-0.5 * t / t1_total) * erf(snr_value / math.sqrt(2.0))


def optimal_time_estimate(r: float, params: SystemParams) -> float:
    """Estimated best integration time e^{−r}·√(6/(κχs))."""
    if not math.isfinite(r) or r < 0.0:
        raise ValidationError(f"r must be nonnegative and finite, got {r!r}")
    return math.exp(-r) * math.sqrt(6.0 / (params.kappa * params.chi_s))


def optimal_squeezing(t: float, params: SystemParams) -> float | None:
    """Squeezing r* = ½·ln(A(t)/B(t)) that minimizes the matched-phase noise.

    Balances the squeezed A² term against the anti-squeezed B² term;
    independent of the probe amplitude and of the vacuum weight.  Returns
    None when A/B ≤ 0 (past the first zero crossing of either
    coefficient) since no interior optimum exists there.
    """
    if t <= 0.0:
        raise UndefinedPointError(
            f"optimal_squeezing is undefined at t={t!r}; requires t > 0"
        )
    ti, pi_ = _internal(t, params)
    a_coef, b_coef = signal_coefficients(ti, pi_)
    if b_coef == 0.0 or a_coef / b_coef <= 0.0:
        return None
    return 0.5 * math.log(a_coef / b_coef)


def phase_matching_residual(
    theta_alpha: float, theta_xi: float, phi: float
) -> tuple[float, float, bool]:
    """Distances of the two phase conditions from exact matching.

    Condition 1: θα − φ ≡ π/2 (mod π) makes the contrast maximal.
    Condition 2: φ − θξ/2 ≡ 0 (mod π) aligns the LO with the squeezed
    quadrature.  Both residuals are circular distances in [0, π/2];
    matched when each is below 1e-9.  Jointly the two conditions are
    equivalent to 2θα − θξ ≡ π (mod 2π).
    """
    residual_1 = abs(math.remainder(theta_alpha - phi - 0.5 * math.pi, math.pi))
    residual_2 = abs(math.remainder(phi - 0.5 * theta_xi, math.pi))
    matched = residual_1 < _PHASE_TOL and residual_2 < _PHASE_TOL
    return residual_1, residual_2, matched


@dataclass(frozen=True)
class ReadoutPoint:
    """Bundle of every analytic figure of merit at one operating point."""

    t: float
    lo_phase: float
    contrast: float
    variance_plus: float
    variance_minus: float
    snr: float
    fidelity: float


def readout_point(
    t: float,
    probe: ProbeState,
    params: SystemParams,
    phi: float,
    t1_total: float | None = None,
) -> ReadoutPoint:
    """Evaluate contrast, variances, SNR and fidelity together at time t.

    t1_total overrides the relaxation time used in the fidelity factor
    (same unit as t); default is the intrinsic T1 from params.
    """
    ti, pi_ = _internal(t, params)
    if t1_total is None:
        t1_internal = pi_.t1_intrinsic
    else:
        t1_internal = t1_total * params.chi_s
    snr_value = snr(t, probe, params, phi)
    return ReadoutPoint(
        t=t,
        lo_phase=wrap_angle(phi),
        contrast=contrast(t, probe, params, phi),
        variance_plus=integrated_variance(t, probe, params, phi, +1),
        variance_minus=integrated_variance(t, probe, params, phi, -1),
        snr=snr_value,
        fidelity=fidelity(ti, snr_value, t1_internal),
    )
