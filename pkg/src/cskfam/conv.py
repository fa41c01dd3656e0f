"""Moment-level convolution calculus.

Free cumulants (additive under the free convolution), Boolean cumulants
(additive under the Boolean convolution), the multiplicative convolution
through S-series products, real convolution powers, dilation, affine
images and the Boolean-to-free interpolation map.

Everything operates on truncated moment sequences.  The moment/cumulant
dictionaries are triangular, so results are exact in the stored orders up
to roundoff; there is no truncation error beyond the order cut itself.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormalPowerWarning
from .measure import MomentSeq
from .series import (
    TruncatedSeries,
    ps_mul,
    ps_pow_int,
    ps_pow_real,
    ps_reciprocal,
    ps_revert,
)
from .transforms import s_series, s_series_to_moments


@dataclass(frozen=True)
class FreeCumulants:
    """Free cumulants ``k1..kK``: coefficients of the R-transform series."""

    values: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class BooleanCumulants:
    """Boolean cumulants ``b1..bK``: coefficients of the self-energy series."""

    values: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.values)


# ---------------------------------------------------------------------------
# moment <-> cumulant dictionaries


def moments_to_free_cumulants(m: MomentSeq) -> FreeCumulants:
    """Extract free cumulants by reverting the Cauchy-transform series.

    In the variable ``theta = 1/z`` the Cauchy transform is the power series
    ``theta*(1 + m1*theta + ...)``; its compositional inverse gives the
    inverse Cauchy transform, whose regular part carries the cumulants.
    """
    k = m.order
    g_hat = TruncatedSeries((0.0, 1.0) + m.values)  # order K+1
    theta_of_w = ps_revert(g_hat)
    h = TruncatedSeries(theta_of_w.coeffs[1:])  # theta(w)/w, constant term 1
    r = ps_reciprocal(h)  # 1/h = w * G^{-1}(w) = 1 + k1*w + k2*w^2 + ...
    return FreeCumulants(r.coeffs[1 : k + 1])


def free_cumulants_to_moments(k: FreeCumulants) -> MomentSeq:
    """Inverse of :func:`moments_to_free_cumulants`."""
    n = k.order
    r = TruncatedSeries((1.0,) + k.values)
    theta_of_w = TruncatedSeries((0.0,) + ps_reciprocal(r).coeffs)  # w/r(w), order K+1
    g_hat = ps_revert(theta_of_w)
    return MomentSeq(g_hat.coeffs[2 : n + 2])


def moments_to_boolean_cumulants(m: MomentSeq) -> BooleanCumulants:
    """Boolean cumulants via series division: ``(M - 1) / M`` in ``theta``."""
    k = m.order
    big_m = TruncatedSeries((1.0,) + m.values)
    numer = TruncatedSeries((0.0,) + m.values)
    e = ps_mul(numer, ps_reciprocal(big_m))
    return BooleanCumulants(e.coeffs[1 : k + 1])


def boolean_cumulants_to_moments(b: BooleanCumulants) -> MomentSeq:
    """Inverse map: ``M = 1 / (1 - E)``."""
    n = b.order
    one_minus_e = TruncatedSeries((1.0,) + tuple(-v for v in b.values))
    big_m = ps_reciprocal(one_minus_e)
    return MomentSeq(big_m.coeffs[1 : n + 1])


# ---------------------------------------------------------------------------
# additive convolutions


def _check_orders(mu: MomentSeq, nu: MomentSeq, op: str):
    if mu.order != nu.order:
        raise DomainError(f"{op} requires equal moment orders, got {mu.order} and {nu.order}")


def boxplus(mu: MomentSeq, nu: MomentSeq) -> MomentSeq:
    """Free additive convolution: free cumulants add."""
    _check_orders(mu, nu, "boxplus")
    ka = np.asarray(moments_to_free_cumulants(mu).values)
    kb = np.asarray(moments_to_free_cumulants(nu).values)
    return free_cumulants_to_moments(FreeCumulants(tuple(ka + kb)))


def boxplus_power(nu: MomentSeq, alpha: float) -> MomentSeq:
    """Free convolution power: free cumulants scale by ``alpha``.

    Defined for ``alpha >= 1``; values in (0, 1) are computed formally and
    flagged with :class:`FormalPowerWarning`.
    """
    if alpha <= 0.0:
        raise DomainError("free convolution power requires alpha > 0")
    if alpha < 1.0:
        warnings.warn(
            f"free convolution power alpha = {alpha:g} < 1 is a formal moment "
            "sequence; it may not be a probability measure",
            FormalPowerWarning,
            stacklevel=2,
        )
    k = np.asarray(moments_to_free_cumulants(nu).values)
    return free_cumulants_to_moments(FreeCumulants(tuple(alpha * k)))


def uplus(mu: MomentSeq, nu: MomentSeq) -> MomentSeq:
    """Boolean additive convolution: Boolean cumulants add."""
    _check_orders(mu, nu, "uplus")
    ba = np.asarray(moments_to_boolean_cumulants(mu).values)
    bb = np.asarray(moments_to_boolean_cumulants(nu).values)
    return boolean_cumulants_to_moments(BooleanCumulants(tuple(ba + bb)))


def uplus_power(nu: MomentSeq, alpha: float) -> MomentSeq:
    """Boolean convolution power, defined for every ``alpha > 0``."""
    if alpha <= 0.0:
        raise DomainError("Boolean convolution power requires alpha > 0")
    b = np.asarray(moments_to_boolean_cumulants(nu).values)
    return boolean_cumulants_to_moments(BooleanCumulants(tuple(alpha * b)))


# ---------------------------------------------------------------------------
# multiplicative convolution


def boxtimes(mu: MomentSeq, nu: MomentSeq) -> MomentSeq:
    """Free multiplicative convolution: S-series multiply.

    Both first moments must be nonzero.  Positivity of the underlying
    measures cannot be verified from truncated moments and is the caller's
    responsibility.
    """
    _check_orders(mu, nu, "boxtimes")
    if mu.values[0] == 0.0 or nu.values[0] == 0.0:
        raise DomainError("boxtimes requires nonzero first moments")
    product = ps_mul(s_series(mu), s_series(nu))
    return s_series_to_moments(product, mu.order)


def _is_integral(alpha: float) -> bool:
    return abs(alpha - round(alpha)) <= 1e-12


def boxtimes_power(nu: MomentSeq, alpha: float) -> MomentSeq:
    """Free multiplicative convolution power via ``S**alpha``.

    ``alpha >= 1`` is the guaranteed regime; (0, 1) computes formally with a
    :class:`FormalPowerWarning`.  Non-integer powers need a positive first
    moment so the S-series power stays on the real branch; integer powers
    fall back to repeated multiplication and carry no sign restriction.
    """
    if alpha <= 0.0:
        raise DomainError("multiplicative convolution power requires alpha > 0")
    if nu.values[0] == 0.0:
        raise DomainError("multiplicative power requires a nonzero first moment")
    if alpha < 1.0:
        warnings.warn(
            f"multiplicative power alpha = {alpha:g} < 1 is a formal moment "
            "sequence; it may not be a probability measure",
            FormalPowerWarning,
            stacklevel=2,
        )
    s = s_series(nu)
    if _is_integral(alpha):
        powered = ps_pow_int(s, int(round(alpha)))
    else:
        if s.coeffs[0] <= 0.0:
            raise DomainError(
                "non-integer multiplicative power of a negative-mean sequence "
                "would leave the real branch"
            )
        powered = ps_pow_real(s, alpha)
    return s_series_to_moments(powered, nu.order)


# ---------------------------------------------------------------------------
# pushforwards and the Boolean-to-free map


def dilate(nu: MomentSeq, r: float) -> MomentSeq:
    """Moments of the dilation ``x -> r*x``: ``m_n -> r**n * m_n``."""
    if r == 0.0:
        raise DomainError("dilation factor must be nonzero")
    scale = np.power(r, np.arange(1, nu.order + 1, dtype=float))
    return MomentSeq(tuple(scale * np.asarray(nu.values)))


def affine_image(nu: MomentSeq, beta: float, lam: float) -> MomentSeq:
    """Moments of the image under ``x -> (x - lam) / beta``."""
    if beta == 0.0:
        raise DomainError("affine image requires beta != 0")
    k = nu.order
    m = [1.0] + list(nu.values)
    out = []
    for n in range(1, k + 1):
        acc = sum(math.comb(n, j) * m[j] * (-lam) ** (n - j) for j in range(n + 1))
        out.append(acc / beta**n)
    return MomentSeq(tuple(out))


def bp_transform(nu: MomentSeq, t: float) -> MomentSeq:
    """Boolean-to-free interpolation: free power ``1+t`` then Boolean power ``1/(1+t)``.

    Forms a semigroup in ``t``; ``t = 0`` is the identity and ``t = 1`` is the
    Boolean Bercovici-Pata bijection.
    """
    if t < 0.0:
        raise DomainError("the interpolation parameter t must be nonnegative")
    if t == 0.0:
        return nu
    return uplus_power(boxplus_power(nu, 1.0 + t), 1.0 / (1.0 + t))
