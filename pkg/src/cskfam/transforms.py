"""The analytic transform stack: G, M, Psi, chi, S, Sigma, R and K.

Point evaluation works for atomic and named-density measures through
edge-stable adaptive quadrature; moment-sequence measures get truncated
Laurent/power-series evaluation with an explicit trust region.  The series
dictionary between moments and the S-transform lives here as well, since
the convolution layer and the limit-law layer both need it.

All real-line inversions (chi, the S-transform, R) work on intervals where
the underlying transform is strictly monotone, so roots are found by
bracket expansion followed by Brent's method.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import optimize

from .errors import (
    DomainError,
    InsufficientDataError,
    NumericError,
    SingularityError,
    TruncationAccuracyWarning,
)
from .measure import (
    AtomicMeasure,
    DensityMeasure,
    Measure,
    MomentSeq,
    MomentSequenceMeasure,
    integrate_pieces,
    mean,
)
from .series import TruncatedSeries, ps_compose, ps_mul, ps_reciprocal, ps_revert

#: Brent tolerances for all monotone 1-D inversions in this module.
ROOT_RTOL = 4.0 * np.finfo(float).eps
ROOT_XTOL = 1e-14
ROOT_MAXITER = 200


def bracketed_root(f, lo: float, hi: float) -> float:
    """Brent root of ``f`` on a bracket with a sign change."""
    return float(
        optimize.brentq(f, lo, hi, xtol=ROOT_XTOL, rtol=ROOT_RTOL, maxiter=ROOT_MAXITER)
    )


# ---------------------------------------------------------------------------
# support-derived parameter bounds


def support_bounds(nu: Measure) -> tuple[float, float]:
    """``b = min(0, inf supp)`` and ``B = max(0, sup supp)``."""
    lo, hi = nu.support()
    return min(0.0, lo), max(0.0, hi)


def theta_range(nu: Measure) -> tuple[float, float]:
    """Admissible open interval of the kernel parameter theta."""
    b, big = support_bounds(nu)
    theta_plus = math.inf if big == 0.0 else 1.0 / big
    theta_minus = -math.inf if b == 0.0 else 1.0 / b
    return theta_minus, theta_plus


# ---------------------------------------------------------------------------
# Cauchy transform


def _edge_points_hint(dz_of_piece):
    def hint(piece):
        dz = dz_of_piece(piece)
        if 0.0 < abs(dz) < 0.5:
            s = math.sqrt(abs(dz))
            return (s, 10.0 * s, 100.0 * s)
        return ()

    return hint


def _cauchy_density(nu: DensityMeasure, z: complex) -> complex:
    # x = anchor + sign*u**2, so z - x = (z - anchor) - sign*u**2 without
    # cancellation even when z sits on a support edge.
    if z.imag == 0.0:
        zr = z.real
        hint = _edge_points_hint(lambda p: zr - p.anchor)
        val = integrate_pieces(
            nu, lambda p, u, x: p.weight(u) / ((zr - p.anchor) - p.sign * u * u), hint
        )
        return complex(val, 0.0)
    re = integrate_pieces(
        nu, lambda p, u, x: p.weight(u) * ((z - p.anchor) - p.sign * u * u).real
        / abs((z - p.anchor) - p.sign * u * u) ** 2
    )
    im = integrate_pieces(
        nu, lambda p, u, x: -p.weight(u) * ((z - p.anchor) - p.sign * u * u).imag
        / abs((z - p.anchor) - p.sign * u * u) ** 2
    )
    return complex(re, im)


def laurent_trust_radius(m: MomentSeq) -> float:
    """Radius outside which the truncated Laurent sum of G is trusted."""
    growth = max(abs(v) ** (1.0 / n) for n, v in enumerate(m.values, start=1))
    return 2.0 * (1.0 + growth)


def _cauchy_moment_seq(m: MomentSeq, z: complex) -> complex:
    if abs(z) <= laurent_trust_radius(m):
        warnings.warn(
            f"|z| = {abs(z):.3g} inside the Laurent trust radius "
            f"{laurent_trust_radius(m):.3g}; truncated G is unreliable here",
            TruncationAccuracyWarning,
            stacklevel=3,
        )
    theta = 1.0 / z
    coeffs = (1.0,) + m.values  # m0..mK
    acc = 0.0 + 0.0j
    for c in reversed(coeffs):
        acc = acc * theta + c
    return theta * acc


def cauchy_transform(nu: Measure, z: complex) -> complex:
    """Cauchy transform ``G(z) = integral of 1/(z - x)``.

    ``z`` must avoid the support.  For moment-sequence measures the value is
    the truncated Laurent sum, trusted only for ``|z|`` beyond
    :func:`laurent_trust_radius`; evaluation inside that disk emits a
    :class:`TruncationAccuracyWarning`.
    """
    z = complex(z)
    if isinstance(nu, AtomicMeasure):
        if any(z == complex(a) for a in nu.atoms):
            raise SingularityError(f"z = {z} is an atom of the measure")
        return sum(w / (z - a) for a, w in zip(nu.atoms, nu.weights))
    if isinstance(nu, MomentSequenceMeasure):
        return _cauchy_moment_seq(nu.moment_seq(), z)
    if isinstance(nu, DensityMeasure):
        lo, hi = nu.support()
        if z.imag == 0.0 and lo < z.real < hi:
            raise SingularityError(f"z = {z.real:g} lies inside the support ({lo:g}, {hi:g})")
        value = _cauchy_density(nu, z)
        return value.real if z.imag == 0.0 else value
    raise TypeError(f"unsupported measure type {type(nu).__name__}")


# ---------------------------------------------------------------------------
# M and Psi


def _check_theta(nu: Measure, theta: float):
    t_lo, t_hi = theta_range(nu)
    if not t_lo < theta < t_hi:
        raise DomainError(f"theta = {theta:g} outside admissible range ({t_lo:g}, {t_hi:g})")


def psi_integral(nu: Measure, theta: float) -> float:
    """``integral of theta*x / (1 - theta*x)`` for any compactly known measure.

    This is M - 1 computed without cancellation near theta = 0; the kernel
    positivity requirement of the public Psi transform does not apply here.
    """
    if theta == 0.0:
        return 0.0
    if isinstance(nu, AtomicMeasure):
        return sum(w * theta * a / (1.0 - theta * a) for a, w in zip(nu.atoms, nu.weights))
    if isinstance(nu, DensityMeasure):
        hint = _edge_points_hint(lambda p: 1.0 / theta - p.anchor)

        def g(p, u, x):
            # theta*x/(1-theta*x) = x / (1/theta - x), stable at edges
            return p.weight(u) * x / ((1.0 / theta - p.anchor) - p.sign * u * u)

        return integrate_pieces(nu, g, hint)
    if isinstance(nu, MomentSequenceMeasure):
        m = nu.moment_seq()
        radius = laurent_trust_radius(m)
        if abs(theta) >= 1.0 / radius:
            warnings.warn(
                f"|theta| = {abs(theta):.3g} outside the trust region "
                f"(< {1.0 / radius:.3g}) of the truncated moment series",
                TruncationAccuracyWarning,
                stacklevel=3,
            )
        acc = 0.0
        for v in reversed(m.values):
            acc = acc * theta + v
        return theta * acc
    raise TypeError(f"unsupported measure type {type(nu).__name__}")


def m_transform(nu: Measure, theta: float) -> float:
    """``M(theta) = integral of 1/(1 - theta*x)``; equals ``G(1/theta)/theta``."""
    if theta == 0.0:
        return 1.0
    if not isinstance(nu, MomentSequenceMeasure):
        _check_theta(nu, theta)
    return 1.0 + psi_integral(nu, theta)


def _require_positive(nu: Measure, what: str):
    if not nu.is_positive:
        raise DomainError(f"{what} requires a measure supported on [0, inf)")


def psi_transform(nu: Measure, z: complex) -> complex:
    """``Psi(z) = integral of z*x / (1 - z*x)`` for positive measures."""
    _require_positive(nu, "the Psi transform")
    z = complex(z)
    if z == 0.0:
        return 0.0
    if z.imag == 0.0:
        zr = z.real
        lo, hi = nu.support()
        if zr != 0.0 and lo <= 1.0 / zr <= hi:
            raise SingularityError(f"1/z = {1.0 / zr:g} lies in the support")
        return complex(psi_integral(nu, zr), 0.0)
    if isinstance(nu, AtomicMeasure):
        return sum(w * z * a / (1.0 - z * a) for a, w in zip(nu.atoms, nu.weights))
    # zx/(1-zx) = -1 + (1/z)/(1/z - x) pointwise; reuse the stable G kernel
    g_val = _cauchy_density(nu, 1.0 / z)
    return g_val / z - 1.0


def chi_inverse(nu: Measure, w: float) -> float:
    """The unique ``z < 0`` with ``Psi(z) = w``, for ``w in (delta - 1, 0)``.

    ``delta`` is the mass of the measure at 0; Psi is strictly increasing on
    the negative half-line, so a sign-change bracket always exists inside
    the admissible interval.
    """
    _require_positive(nu, "the chi inverse")
    delta = nu.zero_mass
    if delta >= 1.0:
        raise DomainError("the measure is concentrated at 0; chi is undefined")
    if not delta - 1.0 < w < 0.0:
        raise DomainError(f"w = {w:g} outside ({delta - 1.0:g}, 0)")
    f = lambda z: psi_integral(nu, z) - w
    lo = -1.0
    for _ in range(200):
        if f(lo) < 0.0:
            break
        lo *= 2.0
    else:
        raise NumericError("no bracket for the chi inverse; Psi did not cross w")
    hi = -1e-300
    return bracketed_root(f, lo, hi)


def s_transform(nu: Measure, w: float) -> float:
    """``S(w) = chi(w) * (1 + w) / w``; positive and strictly decreasing."""
    return chi_inverse(nu, w) * (1.0 + w) / w


def sigma_transform(nu: Measure, z: float) -> float:
    """``Sigma(z) = S(z / (1 - z))`` where the inner point is admissible."""
    if z == 1.0:
        raise DomainError("z = 1 is outside the Sigma domain")
    return s_transform(nu, z / (1.0 - z))


# ---------------------------------------------------------------------------
# R and K


def r_transform(nu: Measure, z: float) -> float:
    """``R(z) = G^{-1}(z) - 1/z`` with the inverse taken on the real axis.

    The preimage is searched outside the support: above it for ``z > 0``,
    below it for ``z < 0``.
    """
    if z == 0.0:
        raise DomainError("R is evaluated at nonzero arguments only")
    if isinstance(nu, MomentSequenceMeasure):
        raise InsufficientDataError(
            "R for a moment-sequence measure needs its cumulant series, not point inversion"
        )
    lo, hi = nu.support()
    f = lambda y: cauchy_transform(nu, y).real - z
    if z > 0.0:
        start = hi + max(1e-9, 1e-9 * abs(hi))
        if f(start) < 0.0:
            raise DomainError(f"z = {z:g} exceeds G just above the support; no real preimage")
        y = start + 1.0
        for _ in range(200):
            if f(y) < 0.0:
                break
            y = hi + 2.0 * (y - hi)
        else:
            raise NumericError("no bracket found for the inverse Cauchy transform")
        root = bracketed_root(f, start, y)
    else:
        start = lo - max(1e-9, 1e-9 * abs(lo))
        if f(start) > 0.0:
            raise DomainError(f"z = {z:g} is below G just under the support; no real preimage")
        y = start - 1.0
        for _ in range(200):
            if f(y) > 0.0:
                break
            y = lo - 2.0 * (lo - y)
        else:
            raise NumericError("no bracket found for the inverse Cauchy transform")
        root = bracketed_root(f, y, start)
    return root - 1.0 / z


def k_transform(nu: Measure, z: complex) -> complex:
    """Self-energy ``K(z) = z - 1/G(z)``; additive under Boolean convolution."""
    g = cauchy_transform(nu, z)
    if g == 0.0:
        raise SingularityError(f"G vanishes at z = {z}")
    return z - 1.0 / g


# ---------------------------------------------------------------------------
# series dictionary: moments <-> S


def psi_series(m: MomentSeq) -> TruncatedSeries:
    """Power series of Psi: coefficients ``(0, m1, ..., mK)``."""
    return TruncatedSeries((0.0,) + m.values)


def s_series(m: MomentSeq) -> TruncatedSeries:
    """S-transform power series around 0, at order ``K - 1``.

    Reverts the Psi series to chi and multiplies by ``(1 + w) / w``.
    Requires ``m1 != 0``.
    """
    if m.values[0] == 0.0:
        raise DomainError("the S series needs a nonzero first moment")
    chi = ps_revert(psi_series(m))
    chi_over_w = TruncatedSeries(chi.coeffs[1:])  # order K-1
    one_plus_w = TruncatedSeries((1.0, 1.0) + (0.0,) * max(0, chi_over_w.order - 1))
    return ps_mul(chi_over_w, one_plus_w)


def s_series_to_moments(s: TruncatedSeries, order: int) -> MomentSeq:
    """Invert :func:`s_series`: recover ``order`` moments from an S series.

    Needs ``s`` through order ``order - 1`` and a nonzero constant term.
    """
    if s.order < order - 1:
        raise InsufficientDataError(
            f"S series order {s.order} cannot produce {order} moments"
        )
    if s.coeffs[0] == 0.0:
        raise DomainError("S series must have a nonzero constant term")
    head = s.truncate(order - 1)
    one_plus_w = TruncatedSeries((1.0, 1.0) + (0.0,) * max(0, order - 2))
    ratio = ps_mul(head, ps_reciprocal(one_plus_w))  # S/(1+w), order-1
    chi = TruncatedSeries((0.0,) + ratio.coeffs)  # w*S/(1+w), order
    psi = ps_revert(chi)
    return MomentSeq(psi.coeffs[1:])


def sigma_series_to_s_series(sigma: TruncatedSeries) -> TruncatedSeries:
    """Convert a Sigma series to an S series via ``S(w) = Sigma(w/(1+w))``."""
    n = sigma.order
    inner = TruncatedSeries(tuple(0.0 if k == 0 else (-1.0) ** (k + 1) for k in range(n + 1)))
    return ps_compose(sigma, inner)
