"""Quadrature helpers: adaptive wrappers, oscillatory integrals, sphere rules.

Adaptive integration is delegated to QUADPACK through ``scipy.integrate``
(Gauss-Kronrod panels with global adaptivity); this module adds the error
handling contract used across the library, Fourier integrals on the
half-line, a cycle-summed Bessel transform, and fixed quadrature rules on
the unit sphere for d in {1, 2, 3}.
"""

import math
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import DomainError, NumericError, UnsupportedConfigurationError

ABS_TOL = 1e-10
REL_TOL = 1e-8


def adaptive_quad(f, a, b, points=None, epsabs=ABS_TOL, epsrel=REL_TOL, limit=200):
    """Adaptive quadrature of f on [a, b], raising NumericError on failure.

    ``points`` marks interior singularities/breaks (ignored for infinite
    intervals, where QUADPACK does not accept them).
    """
    kwargs = dict(epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1)
    finite = np.isfinite(a) and np.isfinite(b)
    if points is not None and finite:
        pts = [p for p in points if a < p < b]
        kwargs["points"] = pts or None
    out = integrate.quad(f, a, b, **kwargs)
    value, abserr = out[0], out[1]
    if len(out) == 4:
        # QUADPACK flags are often roundoff/subdivision warnings on results
        # that already meet a usable accuracy: trust the reported abserr and
        # only fail when it is far off the request.
        acceptable = max(100.0 * epsabs, 100.0 * epsrel * abs(value))
        if abserr > acceptable:
            raise NumericError(
                f"quadrature on [{a}, {b}] did not converge: {out[3]}",
                partial=value,
                error_estimate=abserr,
            )
    return value, abserr


def fourier_integral(f, w, kind="cos", epsabs=1e-12, max_cycles=400):
    """Compute int_0^inf f(x) * cos(w x) dx (or sin) with tail acceleration.

    Uses QUADPACK's Fourier transform path, which integrates between the
    zeros of the weight and extrapolates the cycle sums.
    """
    if w <= 0:
        raise DomainError("fourier_integral requires w > 0")
    out = integrate.quad(
        f, 0.0, np.inf, weight=kind, wvar=w,
        epsabs=epsabs, limlst=max_cycles, limit=400, full_output=1,
    )
    value, abserr = out[0], out[1]
    if len(out) > 3:
        # bad-behavior failures can report a tiny abserr next to a garbage
        # value, so the finiteness check comes first
        if not np.isfinite(value) or abs(value) > 1e300 \
                or abserr > 100.0 * epsabs:
            raise NumericError(
                f"oscillatory integral (w={w}) failed: {out[3]}",
                partial=value, error_estimate=abserr,
            )
    return value, abserr


@lru_cache(maxsize=None)
def _bessel_zeros(nu, count):
    if nu == 0.0:
        return tuple(special.jn_zeros(0, count))
    if nu == 0.5:
        return tuple(np.arange(1, count + 1) * math.pi)
    if nu == -0.5:
        return tuple((np.arange(1, count + 1) - 0.5) * math.pi)
    # McMahon approximation; boundaries need only be near the true zeros
    # for the alternating cycle sums to accelerate.
    return tuple((np.arange(1, count + 1) + nu / 2.0 - 0.25) * math.pi)


def bessel_transform(f, w, nu, tol=1e-12, max_cycles=400):
    """Compute int_0^inf f(r) * J_nu(r w) dr by cycle sums + epsilon algorithm.

    f must be smooth and absolutely integrable against the decaying Bessel
    envelope.  Cycles are bounded by (approximate) zeros of J_nu(r w); the
    alternating cycle integrals are summed with Wynn's epsilon algorithm,
    stopping once the accelerated tail stabilises below tol relative to
    the accumulated value.
    """
    from .extrapolate import accelerated_sum

    if w <= 0:
        raise DomainError("bessel_transform requires w > 0")
    zeros = np.asarray(_bessel_zeros(float(nu), max_cycles)) / w
    bounds = np.concatenate([[0.0], zeros])
    kernel = lambda r: f(r) * special.jv(nu, r * w)
    cycles = []
    scale = None
    best = (0.0, math.inf)
    for i in range(len(bounds) - 1):
        v, _ = integrate.quad(kernel, bounds[i], bounds[i + 1],
                              epsabs=1e-14 if scale is None else 1e-15 * scale,
                              epsrel=1e-12, limit=200)
        cycles.append(v)
        if scale is None:
            scale = max(abs(v), 1e-300)
        if i >= 12 and i % 4 == 0:
            val, err = accelerated_sum(cycles)
            best = (val, err)
            if err < tol * max(abs(val), scale * 1e-3):
                return val, err
    val, err = accelerated_sum(cycles)
    if err > 1e-6 * max(abs(val), scale):
        raise NumericError(
            f"bessel transform did not stabilise after {len(cycles)} cycles",
            partial=val, error_estimate=err,
        )
    return val, err


@lru_cache(maxsize=None)
def sphere_rule(d, resolution=2048):
    """Quadrature nodes and weights on the unit sphere S^{d-1}.

    Weights sum to the surface measure of S^{d-1}.  d=1 is the exact
    two-point rule, d=2 a trapezoidal rule on ``resolution`` angles
    (spectrally accurate for smooth integrands), d=3 a product
    Gauss-Legendre x uniform rule of order (resolution//16, resolution//8).
    """
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        theta = 2.0 * math.pi * np.arange(resolution) / resolution
        pts = np.column_stack([np.cos(theta), np.sin(theta)])
        w = np.full(resolution, 2.0 * math.pi / resolution)
        return pts, w
    if d == 3:
        n_mu, n_phi = max(resolution // 16, 32), max(resolution // 8, 64)
        mu, wmu = np.polynomial.legendre.leggauss(n_mu)
        phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
        sin_t = np.sqrt(1.0 - mu ** 2)
        pts = np.empty((n_mu * n_phi, 3))
        w = np.empty(n_mu * n_phi)
        for i in range(n_mu):
            sl = slice(i * n_phi, (i + 1) * n_phi)
            pts[sl, 0] = sin_t[i] * np.cos(phi)
            pts[sl, 1] = sin_t[i] * np.sin(phi)
            pts[sl, 2] = mu[i]
            w[sl] = wmu[i] * (2.0 * math.pi / n_phi)
        return pts, w
    raise UnsupportedConfigurationError(f"sphere quadrature not provided for d={d}")


def sphere_integral(fn, d):
    """Integrate fn(u) over S^{d-1}; fn takes an (m, d) array of unit vectors."""
    pts, w = sphere_rule(d)
    vals = fn(pts)
    return float(np.dot(w, vals))


def sphere_surface(d):
    """Surface measure of the unit sphere S^{d-1} in R^d."""
    return 2.0 * math.pi ** (d / 2.0) / special.gamma(d / 2.0)


def unit_ball_volume(d):
    return math.pi ** (d / 2.0) / special.gamma(d / 2.0 + 1.0)
