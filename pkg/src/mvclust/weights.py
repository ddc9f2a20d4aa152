"""Closed-form view weighting.

Views that agree with the consensus graph (small Frobenius divergence) earn
larger weight; the exponent r > 1 smooths the distribution. Minimizing
sum_v w_v^r D_v over the simplex gives w_v proportional to D_v^(1/(1-r)).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError

ZERO_DIVERGENCE = 1e-12


@dataclass
class ViewWeights:
    """Simplex-constrained importance of each view, with its exponent."""

    w: np.ndarray
    r: float

    @property
    def contributions(self):
        """w_v ** r, the coefficients entering the fusion terms."""
        return self.w ** self.r


def update_weights(divergences, r):
    """Optimal simplex weights for the given per-view divergences.

    Views with divergence below 1e-12 take all the weight, split uniformly
    among themselves; this is the limit of the closed form as D_v -> 0
    (the exponent 1/(1-r) is negative).
    """
    if r <= 1:
        raise ConfigurationError(f"weight exponent r={r} must be > 1")
    d = np.asarray(divergences, dtype=np.float64)
    if d.ndim != 1 or d.size < 1:
        raise ValidationError("divergences must be a nonempty vector")
    if (d < 0).any() or not np.isfinite(d).all():
        raise ValidationError("divergences must be finite and >= 0")
    zero = d < ZERO_DIVERGENCE
    if zero.any():
        w = zero / zero.sum()
    else:
        w = d ** (1.0 / (1.0 - r))
        w = w / w.sum()
    return ViewWeights(w=w, r=float(r))


def fusion_divergences(views, s_star):
    """Frobenius divergence ||S* - S^v||_F^2 for every view.

    Uses the K-sparse storage: expanding the square needs only the consensus
    entries on each view's support.
    """
    s_star = np.asarray(s_star, dtype=np.float64)
    total = float((s_star * s_star).sum())
    n = s_star.shape[0]
    rows = np.arange(n)[:, None]
    out = np.empty(len(views))
    for idx, view in enumerate(views):
        star_sup = s_star[rows, view.indices]
        cross = float((star_sup * view.values).sum())
        own = float((view.values * view.values).sum())
        out[idx] = total - 2.0 * cross + own
    return np.maximum(out, 0.0)
