"""Sequence acceleration: Aitken, Richardson, Wynn epsilon, and limit fits.

All routines take plain sequences of floats.  They are used to extract
t -> 0 limits from values computed on geometric t-grids and to sum
alternating cycle integrals of oscillatory integrands.
"""

import math

import numpy as np


def aitken(seq):
    """One Aitken delta-squared sweep.  Returns a shorter, faster sequence.

    Entries whose second difference is at float-noise level are treated
    as converged and passed through unchanged.
    """
    s = np.asarray(seq, dtype=float)
    if len(s) < 3:
        return s.copy()
    d1 = s[1:-1] - s[:-2]
    d2 = s[2:] - 2.0 * s[1:-1] + s[:-2]
    scale = np.maximum(np.abs(s[2:]), 1e-300)
    noisy = np.abs(d2) <= 1e-14 * scale
    safe = np.where(noisy, 1.0, d2)
    return np.where(noisy, s[2:], s[:-2] - d1 * d1 / safe)


def aitken_limit(seq, max_sweeps=6):
    """Iterated Aitken extrapolation.

    Returns the sweep estimate whose sweep-to-sweep change is smallest
    (raw values are only used when no sweep is possible); the change is
    the error estimate.
    """
    cur = np.asarray(seq, dtype=float)
    if len(cur) == 1:
        return float(cur[0]), float("nan")
    prev_est = float(cur[-1])
    raw_err = abs(float(cur[-1] - cur[-2]))
    best = None
    for _ in range(max_sweeps):
        if len(cur) < 3:
            break
        cur = aitken(cur)
        if not np.all(np.isfinite(cur)):
            break
        est = float(cur[-1])
        change = abs(est - prev_est)
        if best is None or change <= best[1]:
            best = (est, change)
        prev_est = est
    if best is None:
        return float(seq[-1]), raw_err
    return best


def richardson_limit(seq, ratio, exponent):
    """Eliminate a known error term C*h^exponent from a sequence.

    ``seq[k]`` is assumed computed at step h0 * ratio**(-k) with error
    C*h^exponent + higher order.  Returns (limit, error_estimate).
    """
    s = np.asarray(seq, dtype=float)
    if len(s) < 2:
        return float(s[-1]), float("nan")
    m = ratio ** exponent
    ref = (m * s[1:] - s[:-1]) / (m - 1.0)
    err = abs(ref[-1] - ref[-2]) if len(ref) >= 2 else abs(ref[-1] - s[-1])
    return float(ref[-1]), float(err)


def wynn_epsilon(partial_sums):
    """Wynn's epsilon algorithm on a sequence of partial sums.

    Returns the list of even-column diagonal estimates, ordered by
    increasing acceleration depth; the last entry is usually the best.
    """
    prev = [0.0] * (len(partial_sums) + 1)
    cur = [float(s) for s in partial_sums]
    out = [cur[-1]]
    k = 0
    while len(cur) >= 2:
        nxt = []
        for j in range(len(cur) - 1):
            d = cur[j + 1] - cur[j]
            if d == 0.0:
                nxt.append(prev[j + 1])
            else:
                nxt.append(prev[j + 1] + 1.0 / d)
        prev, cur = cur, nxt
        k += 1
        if k % 2 == 0 and cur:
            out.append(cur[-1])
    return out


def accelerated_sum(terms, tol=1e-13):
    """Sum an (eventually alternating) series of cycle integrals.

    Returns (value, error_estimate).  The error estimate is the spread of
    the deepest epsilon-table entries.
    """
    sums = np.cumsum(np.asarray(terms, dtype=float))
    est = wynn_epsilon(sums)
    if len(est) >= 3:
        err = max(abs(est[-1] - est[-2]), 0.1 * abs(est[-2] - est[-3]))
    elif len(est) == 2:
        err = abs(est[-1] - est[-2])
    else:
        err = abs(terms[-1]) if len(terms) else 0.0
    return float(est[-1]), float(err)


def fit_log_limit(ts, residuals, exponent):
    """Least-squares fit residual(t) = A * t^p * log(1/t) + B * t^p.

    Used for limits where the leading correction carries a logarithm; the
    companion pure power makes a two-parameter fit converge much faster
    than ratio extrapolation.  Returns (A, B).
    """
    t = np.asarray(ts, dtype=float)
    r = np.asarray(residuals, dtype=float)
    design = np.column_stack([t ** exponent * np.log(1.0 / t), t ** exponent])
    coef, *_ = np.linalg.lstsq(design, r, rcond=None)
    return float(coef[0]), float(coef[1])


def loglog_slope(ts, values):
    """Slope of log|values| against log t (least squares)."""
    t = np.asarray(ts, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    if np.any(v <= 0.0):
        raise ValueError("values must be nonzero for a log-log slope")
    slope = np.polyfit(np.log(t), np.log(v), 1)[0]
    return float(slope)


def sequence_limit(ts, seq, exponent=None):
    """Extrapolate a sequence computed on a geometric t-grid to t -> 0.

    If the order of the leading correction is known, pass it as
    ``exponent`` and a Richardson sweep is used; otherwise iterated
    Aitken.  Returns (limit, error_estimate).
    """
    ts = np.asarray(ts, dtype=float)
    if len(ts) >= 2:
        ratios = ts[:-1] / ts[1:]
        ratio = float(np.median(ratios))
    else:
        ratio = math.nan
    if exponent is not None and len(ts) >= 3 and np.allclose(ratios, ratio, rtol=1e-9):
        return richardson_limit(seq, ratio, exponent)
    return aitken_limit(seq)
