"""Report containers shared by the heat and expansion modules."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class EvalReport:
    """Values of H on a t grid plus error/verdict metadata.

    ``values`` holds H(t); the complement |Omega| - H(t) is available via
    ``complement()``.  Verification runs additionally populate the
    residual fields and the verdict.
    """

    t_grid: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    stderr: np.ndarray
    method: str
    volume: float = float("nan")
    partial_sums: np.ndarray = None
    residuals: np.ndarray = None
    normalized_residuals: np.ndarray = None
    extrapolated: float = float("nan")
    extrapolation_error: float = float("nan")
    target: float = float("nan")
    tolerance: float = float("nan")
    verdict: str = ""
    details: dict = field(default_factory=dict)

    def complement(self):
        """H_Omega(t) = |Omega| - H(t)."""
        return self.volume - self.values

    @property
    def achieved_relative_error(self):
        if not np.isfinite(self.target) or self.target == 0.0:
            return float("nan")
        return abs(self.extrapolated - self.target) / abs(self.target)

    def rows(self):
        """Per-t rows (t, H, H/t, stderr, method) for delimited output."""
        for t, v, s in zip(self.t_grid, self.values, self.stderr):
            yield t, v, v / t, s, self.method

    def to_dict(self):
        out = {
            "t_grid": list(map(float, self.t_grid)),
            "values": list(map(float, self.values)),
            "errors": list(map(float, self.errors)),
            "stderr": list(map(float, self.stderr)),
            "method": self.method,
            "volume": float(self.volume),
            "extrapolated": float(self.extrapolated),
            "extrapolation_error": float(self.extrapolation_error),
            "target": float(self.target),
            "tolerance": float(self.tolerance),
            "achieved_relative_error": float(self.achieved_relative_error)
            if np.isfinite(self.target) else None,
            "verdict": self.verdict,
            "details": self.details,
        }
        if self.residuals is not None:
            out["residuals"] = list(map(float, self.residuals))
        if self.normalized_residuals is not None:
            out["normalized_residuals"] = list(map(float, self.normalized_residuals))
        return out
