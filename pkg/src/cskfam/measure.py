"""Probability-measure representations, their moments, and ingestion.

Three concrete representations are supported:

* atomic measures (finitely many weighted point masses),
* named densities with compact support: a semicircle law, the centered
  Marchenko-Pastur family, and the free Poisson law,
* truncated moment sequences, which only participate in moment-level
  arithmetic.

Densities with an inverse-square-root edge (free Poisson at 0, the
centered Marchenko-Pastur law at |a| = 1) are integrated after the
substitution ``x = edge +/- u**2``, which turns every integrand built from
the density into a smooth one.  Each density therefore exposes a list of
:class:`QuadPiece` objects; all quadrature in the package runs over those
pieces.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import (
    AccuracyError,
    DomainError,
    InsufficientDataError,
    MeasureSpecError,
)

#: Absolute tolerance targeted by adaptive quadrature for order-unity
#: integrands.  Larger integrals are resolved to ~1e-12 relative accuracy.
QUAD_ABS_TOL = 1e-10

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MomentSeq:
    """Raw moments ``m1..mK`` of a probability measure (``m0 = 1`` implicit)."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("a moment sequence needs at least m1")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def order(self) -> int:
        return len(self.values)

    def moment(self, n: int) -> float:
        """Return ``m_n``; ``n = 0`` gives the total mass 1."""
        if n == 0:
            return 1.0
        if n > self.order:
            raise InsufficientDataError(f"moment m_{n} beyond stored order {self.order}")
        return self.values[n - 1]

    def truncate(self, order: int) -> "MomentSeq":
        if order > self.order:
            raise InsufficientDataError(f"cannot extend order {self.order} to {order}")
        return MomentSeq(self.values[:order])

    @property
    def mean(self) -> float:
        return self.values[0]

    @property
    def variance(self) -> float:
        if self.order < 2:
            raise InsufficientDataError("variance needs the first two moments")
        return self.values[1] - self.values[0] ** 2


@dataclass(frozen=True)
class QuadPiece:
    """One edge-regularized integration piece of a density.

    Integration runs over ``u`` in ``(0, umax)`` with ``x = anchor + sign*u**2``,
    and ``weight(u)`` already contains the density times ``|dx/du|``.
    """

    anchor: float
    sign: int
    umax: float
    weight: Callable[[np.ndarray], np.ndarray]


class Measure:
    """Base class for all measure representations."""

    @property
    def is_positive(self) -> bool:
        """True when the support is certified to lie in ``[0, inf)``."""
        raise NotImplementedError

    @property
    def zero_mass(self) -> float:
        """The mass of the single point 0."""
        raise NotImplementedError

    def support(self) -> tuple[float, float]:
        """The (closed) convex hull of the support."""
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class AtomicMeasure(Measure):
    """Finitely many atoms with positive weights summing to one."""

    atoms: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        atoms = tuple(float(a) for a in self.atoms)
        weights = tuple(float(w) for w in self.weights)
        if len(atoms) != len(weights) or not atoms:
            raise DomainError("atoms and weights must be nonempty parallel lists")
        if len(set(atoms)) != len(atoms):
            raise DomainError("atoms must be distinct")
        if any(w <= 0.0 for w in weights):
            raise DomainError("weights must be strictly positive")
        if abs(sum(weights) - 1.0) > 1e-12:
            raise DomainError(f"weights sum to {sum(weights)!r}, expected 1")
        order = np.argsort(atoms)
        object.__setattr__(self, "atoms", tuple(atoms[i] for i in order))
        object.__setattr__(self, "weights", tuple(weights[i] for i in order))

    @property
    def is_positive(self) -> bool:
        return self.atoms[0] >= 0.0

    @property
    def zero_mass(self) -> float:
        for a, w in zip(self.atoms, self.weights):
            if a == 0.0:
                return w
        return 0.0

    def support(self) -> tuple[float, float]:
        return self.atoms[0], self.atoms[-1]

    def describe(self) -> str:
        pairs = ";".join(f"{a:g}:{w:g}" for a, w in zip(self.atoms, self.weights))
        return f"atomic({pairs})"


class DensityMeasure(Measure):
    """Base for the named absolutely continuous laws."""

    @property
    def zero_mass(self) -> float:
        return 0.0

    def density(self, x: float) -> float:
        raise NotImplementedError

    def pieces(self) -> list[QuadPiece]:
        raise NotImplementedError

    def edge_exponents(self) -> tuple[float, float]:
        """Power of the density at the lower/upper support edge.

        ``+0.5`` marks a square-root zero, ``-0.5`` an integrable
        inverse-square-root blowup.
        """
        raise NotImplementedError

    def free_cumulants(self, order: int) -> tuple[float, ...]:
        """Exact free cumulants ``k1..k_order``; the moment source."""
        raise NotImplementedError


@dataclass(frozen=True)
class Semicircle(DensityMeasure):
    """Semicircle law with the given center and variance (radius ``2*sqrt(v)``)."""

    center: float = 0.0
    variance: float = 1.0

    def __post_init__(self):
        if self.variance <= 0.0:
            raise DomainError("semicircle variance must be positive")

    @property
    def radius(self) -> float:
        return 2.0 * math.sqrt(self.variance)

    @property
    def is_positive(self) -> bool:
        return self.center - self.radius >= 0.0

    def support(self) -> tuple[float, float]:
        return self.center - self.radius, self.center + self.radius

    def density(self, x: float) -> float:
        r = self.radius
        d = r * r - (x - self.center) ** 2
        return math.sqrt(d) / (2.0 * math.pi * self.variance) if d > 0.0 else 0.0

    def pieces(self) -> list[QuadPiece]:
        r, v = self.radius, self.variance
        umax = math.sqrt(r)

        def w(u):
            return u * u * np.sqrt(2.0 * r - u * u) / (math.pi * v)

        lo, hi = self.support()
        return [QuadPiece(lo, +1, umax, w), QuadPiece(hi, -1, umax, w)]

    def edge_exponents(self) -> tuple[float, float]:
        return 0.5, 0.5

    def free_cumulants(self, order: int) -> tuple[float, ...]:
        out = [0.0] * order
        out[0] = self.center
        if order >= 2:
            out[1] = self.variance
        return tuple(out)

    def describe(self) -> str:
        return f"semicircle(center={self.center:g},variance={self.variance:g})"


@dataclass(frozen=True)
class MarchenkoPasturCentered(DensityMeasure):
    """Centered Marchenko-Pastur law with parameter ``a``, ``0 < a**2 <= 1``.

    Density ``sqrt(4 - (x-a)**2) / (2*pi*(1+a*x))`` on ``(a-2, a+2)``; mean 0,
    unit variance.  At ``|a| = 1`` one support edge carries an integrable
    inverse-square-root singularity.
    """

    a: float

    def __post_init__(self):
        if not 0.0 < self.a * self.a <= 1.0:
            raise DomainError("marchenko_pastur_centered requires 0 < a**2 <= 1")

    @property
    def is_positive(self) -> bool:
        return False  # support (a-2, a+2) always reaches below 0

    def support(self) -> tuple[float, float]:
        return self.a - 2.0, self.a + 2.0

    def density(self, x: float) -> float:
        lo, hi = self.support()
        if not lo < x < hi:
            return 0.0
        return math.sqrt((x - lo) * (hi - x)) / (2.0 * math.pi * (1.0 + self.a * x))

    def pieces(self) -> list[QuadPiece]:
        a = self.a
        lo, hi = self.support()
        # 1 + a*x at x = lo + u**2 is (1-a)**2 + a*u**2; at x = hi - u**2 it is
        # (1+a)**2 - a*u**2.  Both forms are exact where the naive expression
        # cancels catastrophically (|a| = 1 near the singular edge).

        def w_lo(u):
            return u * u * np.sqrt(4.0 - u * u) / (math.pi * ((1.0 - a) ** 2 + a * u * u))

        def w_hi(u):
            return u * u * np.sqrt(4.0 - u * u) / (math.pi * ((1.0 + a) ** 2 - a * u * u))

        return [QuadPiece(lo, +1, _SQRT2, w_lo), QuadPiece(hi, -1, _SQRT2, w_hi)]

    def edge_exponents(self) -> tuple[float, float]:
        return (-0.5 if self.a == 1.0 else 0.5), (-0.5 if self.a == -1.0 else 0.5)

    def free_cumulants(self, order: int) -> tuple[float, ...]:
        # centered free Poisson type: k1 = 0, k2 = 1, k_n = a**(n-2)
        out = [0.0] * order
        for n in range(2, order + 1):
            out[n - 1] = self.a ** (n - 2)
        return tuple(out)

    def describe(self) -> str:
        return f"marchenko_pastur_centered(a={self.a:g})"


@dataclass(frozen=True)
class FreePoisson(DensityMeasure):
    """Free Poisson law: density ``sqrt((4-x)/x) / (2*pi)`` on ``(0, 4)``."""

    @property
    def is_positive(self) -> bool:
        return True

    def support(self) -> tuple[float, float]:
        return 0.0, 4.0

    def density(self, x: float) -> float:
        if not 0.0 < x < 4.0:
            return 0.0
        return math.sqrt((4.0 - x) / x) / (2.0 * math.pi)

    def pieces(self) -> list[QuadPiece]:
        def w_lo(u):
            return np.sqrt(4.0 - u * u) / math.pi

        def w_hi(u):
            return u * u / (math.pi * np.sqrt(4.0 - u * u))

        return [QuadPiece(0.0, +1, _SQRT2, w_lo), QuadPiece(4.0, -1, _SQRT2, w_hi)]

    def edge_exponents(self) -> tuple[float, float]:
        return -0.5, 0.5

    def free_cumulants(self, order: int) -> tuple[float, ...]:
        return (1.0,) * order

    def describe(self) -> str:
        return "free_poisson"


@dataclass(frozen=True)
class MomentSequenceMeasure(Measure):
    """A measure known only through finitely many moments.

    Integration against arbitrary functions and support queries are not
    available: a finite moment list does not determine the measure.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise DomainError("a moment-sequence measure needs at least m1")

    @property
    def is_positive(self) -> bool:
        return False  # positivity is not certifiable from a truncated list

    @property
    def zero_mass(self) -> float:
        return 0.0

    def support(self) -> tuple[float, float]:
        raise InsufficientDataError("support of a moment-sequence measure is unknown")

    def moment_seq(self) -> MomentSeq:
        return MomentSeq(self.values)

    def describe(self) -> str:
        return f"moments(order={len(self.values)})"


# ---------------------------------------------------------------------------
# quadrature


def _quad(f, lo: float, hi: float, points=None) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, estimate = integrate.quad(
            f, lo, hi, epsabs=QUAD_ABS_TOL * 1e-2, epsrel=1e-12, limit=400, points=points
        )
    if estimate > max(QUAD_ABS_TOL, 1e-9 * abs(value)):
        raise AccuracyError(
            f"quadrature error estimate {estimate:.3e} exceeds tolerance", best_estimate=value
        )
    return value


def integrate_pieces(nu: DensityMeasure, g, points_hint=None) -> float:
    """Integrate ``g(u, x)`` over the density pieces of ``nu``.

    ``g`` receives the substitution variable ``u`` and the original
    coordinate ``x = anchor + sign*u**2``; it must already include the piece
    weight.  This is the edge-stable entry point used by the transform layer.
    """
    total = 0.0
    for piece in nu.pieces():
        anchor, sign, umax = piece.anchor, piece.sign, piece.umax
        pts = None
        if points_hint is not None:
            pts = [p for p in points_hint(piece) if 0.0 < p < umax] or None
        total += _quad(lambda u: g(piece, u, anchor + sign * u * u), 0.0, umax, points=pts)
    return total


def quadrature_integrate(nu: Measure, f) -> float | complex:
    """Integrate ``f`` against ``nu``.

    Exact weighted sums for atomic measures; adaptive edge-regularized
    quadrature for densities.  Absolute tolerance ``1e-10`` for order-unity
    results, ~1e-12 relative accuracy for large ones.  Complex-valued
    integrands are handled componentwise.  Raises
    :class:`InsufficientDataError` for moment-sequence measures and
    :class:`AccuracyError` when the quadrature cannot reach its tolerance.
    """
    if isinstance(nu, AtomicMeasure):
        return sum(w * f(a) for a, w in zip(nu.atoms, nu.weights))
    if isinstance(nu, MomentSequenceMeasure):
        raise InsufficientDataError(
            "cannot integrate an arbitrary function against a moment-sequence measure"
        )
    if not isinstance(nu, DensityMeasure):
        raise TypeError(f"unsupported measure type {type(nu).__name__}")

    lo, hi = nu.support()
    probe = f(0.5 * (lo + hi))
    if isinstance(probe, complex):
        re = integrate_pieces(nu, lambda p, u, x: p.weight(u) * f(x).real)
        im = integrate_pieces(nu, lambda p, u, x: p.weight(u) * f(x).imag)
        return complex(re, im)
    return integrate_pieces(nu, lambda p, u, x: p.weight(u) * f(x))


# ---------------------------------------------------------------------------
# moments


@lru_cache(maxsize=256)
def _density_moments(nu: DensityMeasure, order: int) -> tuple[float, ...]:
    # The named densities have exact closed-form free cumulants, so their
    # moments come from the cumulant dictionary; quadrature of x**n is the
    # independent cross-check exercised by the test suite.
    from .conv import FreeCumulants, free_cumulants_to_moments

    return free_cumulants_to_moments(FreeCumulants(nu.free_cumulants(order))).values


def moments(nu: Measure, order: int) -> MomentSeq:
    """First ``order`` raw moments of ``nu``.

    Exact power sums for atomic measures, adaptive quadrature for the named
    densities.  A moment-sequence measure must already store at least
    ``order`` moments.
    """
    if order < 1:
        raise DomainError("moment order must be at least 1")
    if isinstance(nu, AtomicMeasure):
        a = np.asarray(nu.atoms)
        w = np.asarray(nu.weights)
        return MomentSeq(tuple(float(np.dot(w, a**n)) for n in range(1, order + 1)))
    if isinstance(nu, MomentSequenceMeasure):
        if len(nu.values) < order:
            raise InsufficientDataError(
                f"measure stores {len(nu.values)} moments, {order} requested"
            )
        return MomentSeq(nu.values[:order])
    if isinstance(nu, DensityMeasure):
        return MomentSeq(_density_moments(nu, order))
    raise TypeError(f"unsupported measure type {type(nu).__name__}")


def mean(nu: Measure) -> float:
    return moments(nu, 1).values[0]


def variance_of(nu: Measure) -> float:
    return moments(nu, 2).variance


# ---------------------------------------------------------------------------
# measure-spec parsing

_NAMED = {"semicircle", "marchenko_pastur_centered", "free_poisson"}


def _require(cond: bool, message: str, location: str):
    if not cond:
        raise MeasureSpecError(message, location)


def _number_list(obj, location: str) -> list[float]:
    _require(isinstance(obj, list) and obj, "expected a nonempty array of numbers", location)
    out = []
    for i, v in enumerate(obj):
        _require(isinstance(v, (int, float)) and not isinstance(v, bool),
                 "expected a number", f"{location}[{i}]")
        out.append(float(v))
    return out


def parse_measure_spec(text: str) -> Measure:
    """Parse a measure-spec document (JSON object notation, UTF-8).

    Top-level field ``type`` selects the representation:

    * ``{"type": "atomic", "atoms": [...], "weights": [...]}``
    * ``{"type": "named", "name": "...", "params": {...}}``
    * ``{"type": "moments", "values": [...]}``

    Malformed documents raise :class:`MeasureSpecError` annotated with the
    position of the offending field.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureSpecError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc

    _require(isinstance(doc, dict), "top level must be an object", "$")
    kind = doc.get("type")
    _require(kind in {"atomic", "named", "moments"},
             f"unknown type {kind!r}; expected atomic, named or moments", "$.type")

    if kind == "atomic":
        atoms = _number_list(doc.get("atoms"), "$.atoms")
        weights = _number_list(doc.get("weights"), "$.weights")
        _require(len(atoms) == len(weights), "atoms and weights must have equal length",
                 "$.weights")
        _require(len(set(atoms)) == len(atoms), "atoms must be distinct", "$.atoms")
        _require(all(w > 0 for w in weights), "weights must be positive", "$.weights")
        _require(abs(sum(weights) - 1.0) <= 1e-12,
                 f"weights sum to {sum(weights)!r}, expected 1", "$.weights")
        return AtomicMeasure(tuple(atoms), tuple(weights))

    if kind == "named":
        name = doc.get("name")
        _require(name in _NAMED, f"unknown density name {name!r}", "$.name")
        params = doc.get("params", {})
        _require(isinstance(params, dict), "params must be an object", "$.params")
        if name == "free_poisson":
            _require(not params, "free_poisson takes no parameters", "$.params")
            return FreePoisson()
        if name == "semicircle":
            extra = set(params) - {"center", "variance"}
            _require(not extra, f"unknown parameters {sorted(extra)}", "$.params")
            center = float(params.get("center", 0.0))
            var = float(params.get("variance", 1.0))
            _require(var > 0.0, "variance must be positive", "$.params.variance")
            return Semicircle(center, var)
        extra = set(params) - {"a"}
        _require(not extra, f"unknown parameters {sorted(extra)}", "$.params")
        _require("a" in params, "marchenko_pastur_centered requires parameter a", "$.params.a")
        a = float(params["a"])
        _require(0.0 < a * a <= 1.0, "parameter a must satisfy 0 < a**2 <= 1", "$.params.a")
        return MarchenkoPasturCentered(a)

    values = _number_list(doc.get("values"), "$.values")
    return MomentSequenceMeasure(tuple(values))
