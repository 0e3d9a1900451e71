"""The two auxiliary lemmas behind the witness construction.

``sigma_bound`` makes the strict inequality ``2 phi(u/2) < phi(u)`` uniform on
a compact interval past the linear piece; ``renorming_bounds`` is the
two-point ``l_1^2`` estimate for nearly diametral pairs.
"""
import math
from dataclasses import dataclass

import numpy as np

from .. import _numeric as num
from ..errors import PreconditionError

SIGMA_GRID = 1024
SIGMA_CEILING = 1.0 - 1e-9


def _ratio(f, u):
    u = np.asarray(u, dtype=float)
    return 2.0 * np.asarray(f(0.5 * u), dtype=float) / np.asarray(f(u), dtype=float)


def sigma_bound(f, interval):
    """``sup 2 phi(u/2) / phi(u)`` over ``[a, d]``.

    The interval must sit inside ``(d_phi, b_phi)``; the right end may touch
    ``b_phi`` when ``phi(b_phi)`` is finite. A value at or above ``1 - 1e-9``
    means the linear piece was misdetected and raises.
    """
    a, d = map(float, interval)
    k = f.constants()
    if not a <= d:
        raise PreconditionError("interval must satisfy a <= d")
    if not a > k.d:
        raise PreconditionError(f"interval touches the linear region (d_phi = {k.d:g})")
    if d > k.b or (d == k.b and not math.isfinite(f._scalar(d))):
        raise PreconditionError("interval leaves the finite range of phi")
    if not f._scalar(a) > 0:
        raise PreconditionError("phi(a) must be positive")
    grid = np.linspace(a, d, SIGMA_GRID) if d > a else np.array([a])
    r = _ratio(f, grid)
    i = int(np.argmax(r))
    sigma = float(r[i])
    if d > a:
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        _, refined = num.golden_max(lambda u: float(_ratio(f, u)), lo, hi, tol=1e-12)
        sigma = max(sigma, refined)
    if sigma >= SIGMA_CEILING:
        raise PreconditionError(
            f"2 phi(u/2)/phi(u) reaches {sigma:.12g} on [{a:g}, {d:g}]; d_phi is probably misdetected")
    return sigma


@dataclass(frozen=True)
class RenormingCheck:
    lower: float  # per unit of |alpha| + |beta|
    trials: int
    violations: int
    worst_lower_slack: float  # min over trials of norm - lower bound, divided by |alpha| + |beta|
    worst_upper_slack: float  # min over trials of upper bound - norm, same scaling


def renorming_bounds(x_norm_plus, x_norm_minus, delta, alpha, beta):
    """Interval ``((1 - delta)(|alpha| + |beta|), |alpha| + |beta|]`` for ``||alpha x +- beta y||``.

    The caller attests unit ``x, y`` with ``||x + y||`` and ``||x - y||``
    both above ``2 - delta``.
    """
    if not (x_norm_plus > 2.0 - delta and x_norm_minus > 2.0 - delta):
        raise PreconditionError("attestation fails: need ||x + y||, ||x - y|| > 2 - delta")
    s = abs(alpha) + abs(beta)
    return (1.0 - delta) * s, s


def check_renorming(norm, x, y, delta, alphas, betas, rtol=1e-12):
    """Evaluate ``norm`` on ``alpha x +- beta y`` and count interval violations.

    ``norm`` maps a 2-D array of row vectors to their norms. The upper end
    carries a relative slack ``rtol`` for round-off in the norm itself.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx, ny, plus, minus = norm(np.stack([x, y, x + y, x - y]))
    if abs(nx - 1) > 1e-8 or abs(ny - 1) > 1e-8:
        raise PreconditionError("x and y must be unit vectors")
    lo_unit, _ = renorming_bounds(plus, minus, delta, 1.0, 0.0)
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    rows = np.concatenate([alphas[:, None] * x + betas[:, None] * y,
                           alphas[:, None] * x - betas[:, None] * y])
    vals = norm(rows)
    s = np.tile(np.abs(alphas) + np.abs(betas), 2)
    lower = (1.0 - delta) * s
    lower_slack = (vals - lower) / s
    upper_slack = (s - vals) / s
    bad = (lower_slack <= 0) | (upper_slack < -rtol)
    return RenormingCheck(lo_unit, len(alphas), int(bad.sum()),
                          float(lower_slack.min()), float(upper_slack.min()))


__all__ = ["RenormingCheck", "check_renorming", "renorming_bounds", "sigma_bound"]
