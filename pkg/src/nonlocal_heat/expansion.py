"""Small-time expansion series for H(t) and the limit-verification harness.

The stable heat content admits, for alpha < 1,

    H(t) = sum_{k>=1} ((-1)^{k-1} / k!) Per_{nu^(k alpha)}(Omega) t^k
           + (fractional term at t^{1/alpha}),

with integer terms up to k < 1/alpha.  The t^{1/alpha} term depends on
whether 1/alpha is an integer: if not, its coefficient is

    pi^{(d-1)/2}/Gamma((d+1)/2) * Per(Omega)
        * (int_0^1 r^d p_1(r e_d) dr - sum_n a_n / (1 - n alpha)),

and if 1/alpha = N the term becomes t^N log(1/t) with coefficient
((-1)^{N-1} / ((N-1)! pi)) Per(Omega) plus a pure t^N companion.  The
1-d interval case has the fully explicit form implemented by
``prop_expansion_1d``, including the skewed laws and the alpha > 1
regime whose leading term is E|X| t^{1/alpha}.

``verify_limit`` reproduces each of these limits numerically from a heat
content engine, extrapolates, and compares against the constants, which
are always recomputed from the density/geometry primitives rather than
hard-coded.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

from .errors import DomainError, UnsupportedConfigurationError
from .extrapolate import (
    aitken_limit,
    fit_log_limit,
    loglog_slope,
    sequence_limit,
)
from .geometry import CovarianceFn, Interval, covariance, perimeter
from .heat import heat_content_exact_1d, heat_content_quadrature, nonlocal_perimeter, HeatContentRequest
from .levy import IsotropicStable, OneDimStable
from .quadrature import adaptive_quad, sphere_rule
from .reports import EvalReport
from .stable import (
    IsotropicStableParams,
    SkewedStableParams,
    coeff_a,
    coeff_d,
    density,
    mean_abs,
    radial_moment_integral,
    tail_probability,
)

__all__ = [
    "Term",
    "ExpansionSeries",
    "stable_expansion",
    "prop_expansion_1d",
    "verify_limit",
    "m_omega_diag",
    "coefficient_sum_a",
    "fractional_order_constant",
    "log_order_constant",
    "expected_min_abs_one",
]


@dataclass(frozen=True)
class Term:
    """One expansion term: coefficient * t^order * log(1/t)^log_power."""

    order: object          # int, Fraction, or float
    log_power: int
    coefficient: float
    provenance: str

    def value(self, t):
        v = self.coefficient * float(t) ** float(self.order)
        if self.log_power:
            v *= math.log(1.0 / t) ** self.log_power
        return v


@dataclass
class ExpansionSeries:
    """Ordered expansion terms with a validity hint.

    Orders are exact rationals whenever alpha is recognisably rational
    (so term ordering is exact); otherwise floats compared with epsilon
    1e-12.  log_power is only ever 1, and only on the t^{1/alpha} term.
    """

    terms: list
    t_max: float = math.inf

    def __post_init__(self):
        orders = [float(tm.order) for tm in self.terms]
        if any(b - a < -1e-12 for a, b in zip(orders, orders[1:])):
            raise DomainError("expansion terms must have increasing orders")

    def partial_sum(self, t, n_terms=None):
        use = self.terms if n_terms is None else self.terms[:n_terms]
        return sum(tm.value(t) for tm in use)

    def coefficient_of(self, order, log_power=0):
        for tm in self.terms:
            if abs(float(tm.order) - float(order)) < 1e-12 and tm.log_power == log_power:
                return tm.coefficient
        raise KeyError(f"no term of order {order} (log_power={log_power})")

    def to_dict(self):
        return {
            "t_max": self.t_max,
            "terms": [
                {
                    "order": str(tm.order) if isinstance(tm.order, Fraction)
                    else float(tm.order),
                    "log_power": tm.log_power,
                    "coefficient": tm.coefficient,
                    "provenance": tm.provenance,
                }
                for tm in self.terms
            ],
        }


def _as_rational(x, max_den=1000):
    fr = Fraction(x).limit_denominator(max_den)
    if abs(float(fr) - x) < 1e-12:
        return fr
    return None


def _order(value):
    fr = _as_rational(value)
    return fr if fr is not None else float(value)


def coefficient_sum_a(d, alpha, tol=1e-14, n_max=500):
    """sum_{n>=1} a_n / (1 - n alpha), with the first omitted term as bound.

    The terms decay factorially, so the smallest-term/tolerance rule
    terminates quickly; returns (value, remainder_bound).
    """
    total = 0.0
    bound = math.inf
    small = 0
    for n in range(1, n_max + 1):
        if abs(1.0 - n * alpha) < 1e-13:
            raise DomainError("sum undefined when n*alpha = 1; use the log branch")
        term = coeff_a(n, d, alpha) / (1.0 - n * alpha)
        total += term
        if abs(term) > 0:
            bound = abs(term)
        small = small + 1 if abs(term) < tol * max(abs(total), 1e-300) else 0
        if small >= 3 and n > 3:
            break
    return total, bound


def fractional_order_constant(body, d, alpha):
    """Coefficient of t^{1/alpha} when 1/alpha is not an integer.

    pi^{(d-1)/2}/Gamma((d+1)/2) * Per(Omega) * (radial moment - a_n sum).
    """
    params = IsotropicStableParams(alpha, d)
    moment = radial_moment_integral(params)
    asum, _ = coefficient_sum_a(d, alpha)
    pref = math.pi ** ((d - 1) / 2.0) / special.gamma((d + 1) / 2.0)
    return pref * perimeter(body) * (moment - asum)


def log_order_constant(body, alpha):
    """Coefficient of t^{1/alpha} log(1/t) when N = 1/alpha is an integer."""
    n_inv = round(1.0 / alpha)
    if abs(n_inv - 1.0 / alpha) > 1e-12:
        raise DomainError("log-order constant requires integer 1/alpha")
    sign = (-1.0) ** (n_inv - 1)
    return sign / (math.factorial(n_inv - 1) * math.pi) * perimeter(body)


def stable_expansion(body, d, alpha, depth):
    """Expansion of H(t) for the isotropic stable driver, alpha < 1.

    Emits integer-order terms with nonlocal-perimeter coefficients up to
    min(depth, ceil(1/alpha) - 1), then the t^{1/alpha} term: a
    t^{1/alpha} log(1/t) term when 1/alpha is an integer, otherwise a
    pure t^{1/alpha} term with the fractional-order constant.  Deeper
    orders are not known and the depth is clamped accordingly.
    """
    if not 0.0 < alpha < 1.0:
        raise UnsupportedConfigurationError("stable expansion requires alpha in (0,1)")
    if body.dimension != d:
        raise DomainError("body dimension mismatch")
    inv = 1.0 / alpha
    inv_int = round(inv)
    is_integer = abs(inv - inv_int) < 1e-12
    n_integer_terms = (inv_int - 1) if is_integer else math.floor(inv)
    terms = []
    for k in range(1, min(depth, n_integer_terms) + 1):
        per_k = nonlocal_perimeter(body, IsotropicStable(k * alpha, d))
        coef = (-1.0) ** (k - 1) / math.factorial(k) * per_k
        terms.append(Term(k, 0, coef, f"order-{k} nonlocal perimeter"))
    if depth > n_integer_terms:
        if is_integer:
            terms.append(Term(
                _order(inv), 1, log_order_constant(body, alpha),
                "log-order term (thm4)",
            ))
        else:
            terms.append(Term(
                _order(inv), 0, fractional_order_constant(body, d, alpha),
                "fractional-order term (thm3)",
            ))
    return ExpansionSeries(terms=terms, t_max=math.exp(-1.0))


def expected_min_abs_one(params):
    """E[|X| /\\ 1] = int (|x| /\\ 1) p_1(x) dx for a 1-d stable law."""
    total = 0.0
    for side in (params, params.reflected()):
        core, _ = adaptive_quad(lambda x: x * density(side, x), 0.0, 1.0,
                                epsabs=1e-13, epsrel=1e-11)
        total += core + tail_probability(side, 1.0)
    return total


def _d_sum(alpha, beta, skip=None, tol=1e-14, n_max=400):
    """sum_n d_n / (n alpha (1 - n alpha)), optionally skipping one index."""
    total = 0.0
    small = 0
    for n in range(1, n_max + 1):
        if skip is not None and n == skip:
            continue
        denom = n * alpha * (1.0 - n * alpha)
        term = coeff_d(n, alpha, beta) / denom
        total += term
        small = small + 1 if abs(term) < tol * max(abs(total), 1e-300) else 0
        if small >= 3 and n > 3:
            break
    return total


def prop_expansion_1d(interval, params, depth=None):
    """Fully explicit interval expansion for a 1-d stable driver.

    alpha < 1, 1/alpha not integer:
        H(t) = sum_{n<=[1/a]} d_n/(n a (1-n a)) L^{1-n a} t^n
               + C_alpha t^{1/alpha} + O(t^{[1/a]+1}),
        C_alpha = E[|X| /\\ 1] - sum_n d_n/(n a (1-n a)).
    alpha = 1/N:
        the n = N term degenerates into N d_N t^N log(1/t) plus
        C_N(Omega) t^N with C_N = E[|X| /\\ 1] + d_N log L
        - sum_{n != N} d_n/(n a (1-n a)).
    alpha > 1 (|beta| != 1):
        H(t) = E|X| t^{1/alpha} + sum_{n<=N} d_n/(n a (1-n a)) L^{1-n a} t^n
               + O(t^{N+1}).
    """
    if not isinstance(interval, Interval):
        raise DomainError("prop_expansion_1d requires an interval body")
    alpha, beta = params.alpha, params.beta
    length = interval.volume
    terms = []
    if alpha < 1.0:
        inv = 1.0 / alpha
        inv_int = round(inv)
        is_integer = abs(inv - inv_int) < 1e-12
        n_terms = (inv_int - 1) if is_integer else math.floor(inv)
        if depth is not None:
            n_terms = min(n_terms, depth)
        for n in range(1, n_terms + 1):
            coef = coeff_d(n, alpha, beta) / (n * alpha * (1.0 - n * alpha)) \
                * length ** (1.0 - n * alpha)
            terms.append(Term(n, 0, coef, f"order-{n} interval term"))
        if is_integer:
            n_big = inv_int
            d_big = coeff_d(n_big, alpha, beta)
            terms.append(Term(
                _order(inv), 1, n_big * d_big, "log-order interval term"))
            c_n = expected_min_abs_one(params) + d_big * math.log(length) \
                - _d_sum(alpha, beta, skip=n_big)
            terms.append(Term(
                _order(inv), 0, c_n, "companion t^N term"))
        else:
            c_alpha = expected_min_abs_one(params) - _d_sum(alpha, beta)
            terms.append(Term(
                _order(inv), 0, c_alpha, "fractional-order interval term"))
        t_max = min(length ** alpha, math.exp(-1.0))
        return ExpansionSeries(terms=terms, t_max=t_max)
    if abs(beta) == 1.0:
        raise UnsupportedConfigurationError(
            "alpha > 1 expansion requires |beta| != 1")
    n_terms = depth if depth is not None else 3
    terms.append(Term(
        _order(1.0 / alpha), 0, mean_abs(params), "leading mean-|X| term"))
    for n in range(1, n_terms + 1):
        coef = coeff_d(n, alpha, beta) / (n * alpha * (1.0 - n * alpha)) \
            * length ** (1.0 - n * alpha)
        terms.append(Term(n, 0, coef, f"order-{n} interval term"))
    return ExpansionSeries(terms=terms, t_max=math.exp(-1.0))


# ---------------------------------------------------------------------------
# limit verification
# ---------------------------------------------------------------------------

def _measure_for(params):
    if isinstance(params, IsotropicStableParams):
        return IsotropicStable(params.alpha, params.d)
    return OneDimStable(params.alpha, params.beta)


def _consistent_interval_perimeter(params, length):
    """First-order coefficient of H for the interval, from the density side.

    The Levy measure of the polar-normalised law is the gamma-scaled
    skewed measure; since the covariance gap is even, only the sum of
    the one-sided intensities enters, and that sum is exactly
    gamma * (c_+ + c_-) = 2 A_{1,-alpha} gamma for every beta.  Hence

        Per = 2 A_{1,-alpha} gamma L^{1-alpha} / (alpha (1-alpha)),

    which reduces to the symmetric nonlocal perimeter at beta = 0.
    """
    from .levy import stable_norm_const

    alpha = params.alpha
    gamma = params.gamma if isinstance(params, SkewedStableParams) else 1.0
    return (2.0 * stable_norm_const(1, alpha) * gamma
            * length ** (1.0 - alpha) / (alpha * (1.0 - alpha)))


def _h_engine(body, params, engine, tol):
    if engine == "exact_1d":
        if not isinstance(body, Interval):
            raise DomainError("exact_1d engine requires an interval body")
        return lambda t: heat_content_exact_1d(body, params, t)
    if engine == "quadrature":
        def h(t):
            req = HeatContentRequest(body=body, driver=params, t_grid=(t,), tol=tol)
            return float(heat_content_quadrature(req).values[0])
        return h
    if callable(engine):
        return engine
    raise DomainError(f"unknown engine {engine!r}")


def verify_limit(theorem, body, params, t_grid, engine="exact_1d", order=None,
                 tol=None, tol_default=0.05):
    """Numerically verify one of the small-time limit statements.

    ``theorem`` selects the check:
      - "first-order": H(t)/t -> Per_nu(Omega).
      - "cor34": t^{-n} (H - lower terms) -> (-1)^{n-1} Per_{nu^(n a)}/n!,
        with n given by ``order`` (n alpha < 1 required).
      - "thm3": t^{-1/alpha} (H - integer terms) -> fractional constant
        (1/alpha not an integer).
      - "thm4": two-parameter fit A t^{1/a} log(1/t) + B t^{1/a} of the
        residual; A -> log-order constant (1/alpha integer).
      - "prop-ii": alpha > 1; (H - E|X| t^{1/a})/t -> order-1 interval
        coefficient, plus a log-log slope-2 diagnostic of the remainder.

    The theoretical constant is recomputed from the primitives on every
    call.  The verdict is PASS only when the extrapolated limit lands
    within tolerance of the constant and the extrapolation error bar is
    itself below tolerance; a noisy residual yields INCONCLUSIVE rather
    than a spurious PASS or FAIL.
    """
    tol = tol_default if tol is None else tol
    t_grid = np.asarray(sorted(t_grid), dtype=float)
    alpha = params.alpha
    if theorem in ("cor34", "thm3", "thm4") and isinstance(params, SkewedStableParams) \
            and params.beta != 0.0:
        raise DomainError(f"{theorem} is stated for the symmetric/isotropic driver")
    h_of = _h_engine(body, params, engine, tol=1e-11)
    h_vals = np.array([h_of(t) for t in t_grid])

    details = {}
    slope = None
    if theorem in ("first-order", "eq222"):
        target = (_consistent_interval_perimeter(params, body.volume)
                  if isinstance(body, Interval)
                  else nonlocal_perimeter(body, _measure_for(params)))
        norm = h_vals / t_grid
        residuals = h_vals - target * t_grid
        extrap, err = aitken_limit(norm[::-1])
        method = "aitken"
    elif theorem == "cor34":
        n = order or 2
        if n * alpha >= 1.0:
            raise DomainError("cor34 requires n*alpha < 1")
        series = stable_expansion(body, body.dimension, alpha, depth=n - 1)
        target = ((-1.0) ** (n - 1) / math.factorial(n)
                  * nonlocal_perimeter(body, IsotropicStable(n * alpha, body.dimension)))
        partial = np.array([series.partial_sum(t, n - 1) for t in t_grid])
        residuals = h_vals - partial
        norm = residuals / t_grid ** n
        gap = 1.0 / alpha - n
        extrap, err = sequence_limit(t_grid[::-1], norm[::-1], exponent=gap)
        method = f"richardson(t^{gap:.3g})"
    elif theorem == "thm3":
        inv = 1.0 / alpha
        if abs(inv - round(inv)) < 1e-9:
            raise DomainError("thm3 requires non-integer 1/alpha")
        n_int = math.floor(inv)
        series = stable_expansion(body, body.dimension, alpha, depth=n_int)
        target = fractional_order_constant(body, body.dimension, alpha)
        partial = np.array([series.partial_sum(t, n_int) for t in t_grid])
        residuals = h_vals - partial
        norm = residuals / t_grid ** inv
        gap = (n_int + 1) - inv
        extrap, err = sequence_limit(t_grid[::-1], norm[::-1], exponent=gap)
        method = f"richardson(t^{gap:.3g})"
    elif theorem == "thm4":
        inv = 1.0 / alpha
        n_inv = round(inv)
        if abs(inv - n_inv) > 1e-9:
            raise DomainError("thm4 requires integer 1/alpha")
        series = stable_expansion(body, body.dimension, alpha, depth=n_inv - 1)
        target = log_order_constant(body, alpha)
        partial = np.array([series.partial_sum(t, n_inv - 1) for t in t_grid])
        residuals = h_vals - partial
        norm = residuals / (t_grid ** inv * np.log(1.0 / t_grid))
        a_fit, b_fit = fit_log_limit(t_grid, residuals, inv)
        # stability estimate: refit on the finer half of the grid
        half = len(t_grid) // 2
        a_half, _ = fit_log_limit(t_grid[:max(half, 3)], residuals[:max(half, 3)], inv)
        extrap, err = a_fit, abs(a_fit - a_half)
        details["pure_power_coefficient"] = b_fit
        method = "two-parameter log fit"
    elif theorem == "prop-ii":
        if alpha <= 1.0:
            raise DomainError("prop-ii requires alpha > 1")
        series = prop_expansion_1d(body, params, depth=2)
        lead = mean_abs(params)
        target = series.coefficient_of(1)
        residuals = h_vals - lead * t_grid ** (1.0 / alpha)
        norm = residuals / t_grid
        gap = 1.0
        extrap, err = sequence_limit(t_grid[::-1], norm[::-1], exponent=gap)
        rem = residuals - target * t_grid
        if np.all(np.abs(rem) > 0):
            slope = loglog_slope(t_grid, rem)
            details["remainder_loglog_slope"] = slope
        method = f"richardson(t^{gap:.3g})"
    else:
        raise DomainError(f"unknown theorem id {theorem!r}")

    rel = abs(extrap - target) / abs(target) if target != 0 else abs(extrap)
    err_rel = err / abs(target) if target != 0 else err
    if rel <= tol and err_rel <= max(tol, 1e-12):
        verdict = "PASS"
    elif err_rel > max(2.0 * tol, 4.0 * rel):
        verdict = "INCONCLUSIVE"
    else:
        verdict = "FAIL" if rel > tol else "INCONCLUSIVE"
    details["extrapolation"] = method
    return EvalReport(
        t_grid=t_grid,
        values=h_vals,
        errors=np.zeros_like(h_vals),
        stderr=np.zeros_like(h_vals),
        method=engine if isinstance(engine, str) else "custom",
        volume=body.volume,
        residuals=residuals,
        normalized_residuals=norm,
        extrapolated=float(extrap),
        extrapolation_error=float(err),
        target=float(target),
        tolerance=float(tol),
        verdict=verdict,
        details=details,
    )


def m_omega_diag(body, alpha, t, r):
    """Angular mean-slope diagnostic M(t, r) of the covariance gap.

    M(t, r) = int_{S^{d-1}} (g(0) - g(r t^{1/alpha} u)) / (r t^{1/alpha})
    sigma(du); bounded by Per(Omega) sigma(S^{d-1}) / 2 and converging,
    as t -> 0, to pi^{(d-1)/2}/Gamma((d+1)/2) * Per(Omega).
    """
    if r <= 0 or t <= 0:
        raise DomainError("m_omega_diag requires r > 0 and t > 0")
    cov = CovarianceFn(body)
    s = r * t ** (1.0 / alpha)
    pts, w = sphere_rule(body.dimension)
    vals = np.array([(cov.volume - covariance(body, s * u)) / s for u in pts])
    return float(np.dot(w, vals))
