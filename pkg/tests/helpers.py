"""Shared oracles for the test suite.

Everything here recomputes model quantities through an independent
route (adaptive quadrature, arbitrary precision) so the closed forms in
the package are checked against something they were not derived from.
"""

from __future__ import annotations

import math

from scipy.integrate import quad

_QUAD_OPTS = {"epsabs": 1e-14, "epsrel": 1e-13, "limit": 200}


def quad_first_integrals(a: float, b: float, t: float) -> tuple[float, float]:
    """(F, G) = integrals of e^{-as}cos(bs), e^{-as}sin(bs) over [0, t]."""
    big_f, _ = quad(lambda s: math.exp(-a * s) * math.cos(b * s), 0.0, t, **_QUAD_OPTS)
    big_g, _ = quad(lambda s: math.exp(-a * s) * math.sin(b * s), 0.0, t, **_QUAD_OPTS)
    return big_f, big_g


def quad_double_integrals(a: float, b: float, t: float) -> tuple[float, float]:
    """(∫₀ᵗF, ∫₀ᵗG) via the swap ∫₀ᵗF(s)ds = ∫₀ᵗ(t−s)f(s)ds."""
    int_f, _ = quad(
        lambda s: (t - s) * math.exp(-a * s) * math.cos(b * s), 0.0, t, **_QUAD_OPTS
    )
    int_g, _ = quad(
        lambda s: (t - s) * math.exp(-a * s) * math.sin(b * s), 0.0, t, **_QUAD_OPTS
    )
    return int_f, int_g


def quad_signal_coefficients(kappa: float, chi: float, t: float) -> tuple[float, float]:
    """(A, B) from the quadrature oracle for the double integrals."""
    int_f, int_g = quad_double_integrals(0.5 * kappa, chi, t)
    return t - kappa * int_f, kappa * int_g


def mp_integrals(a: float, b: float, t: float, dps: int = 50):
    """(F, G, ∫F, ∫G) from the closed forms in mpmath arbitrary precision."""
    import mpmath as mp

    with mp.workdps(dps):
        am, bm, tm = mp.mpf(a), mp.mpf(b), mp.mpf(t)
        d = am * am + bm * bm
        e = mp.e ** (-am * tm)
        cb, sb = mp.cos(bm * tm), mp.sin(bm * tm)
        big_f = (am - e * (am * cb - bm * sb)) / d
        big_g = (bm - e * (am * sb + bm * cb)) / d
        int_f = (am * tm - am * big_f + bm * big_g) / d
        int_g = (bm * tm - am * big_g - bm * big_f) / d
        return float(big_f), float(big_g), float(int_f), float(int_g)


def rel_err(value: float, reference: float, floor: float = 1e-300) -> float:
    return abs(value - reference) / max(abs(reference), floor)
