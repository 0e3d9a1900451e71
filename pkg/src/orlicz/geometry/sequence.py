"""Finite-dimensional ``l_phi^n``: Luxemburg norm and its dual norm on row vectors."""
import math
from dataclasses import dataclass

import numpy as np

from ..conjugation import conjugate
from ..functions import Linear, OrliczFunction, Power
from ..spaces import luxemburg_rows


GOLDEN_STEPS = 120
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _amemiya_rows(g, rows):
    """Row-wise ``inf_k (1 + sum g(k |v|)) / k`` by one batched golden search on ``log k``.

    The minimizer lies in ``[1 / (2 L), 2^40 / L]`` with ``L`` the Luxemburg
    norm, since ``h(k) >= 1 / k`` and ``h(1 / L) <= 2 L``. At the upper end the
    search returns ``h`` there, which is within ``2^-40`` of a non-attained limit.
    """
    absv = np.abs(rows)
    out = np.zeros(len(rows))
    live = absv.max(axis=1) > 0
    if not live.any():
        return out
    absv = absv[live]
    lux = luxemburg_rows(g, absv, np.ones_like(absv))

    def h(t):
        k = np.exp(t)
        with np.errstate(over="ignore", invalid="ignore"):
            mod = np.asarray(g(k[:, None] * absv), dtype=float).sum(axis=1)
        return np.where(np.isfinite(mod), (1.0 + mod) / k, np.inf)

    a = -np.log(2.0 * lux)
    b = -np.log(lux) + 40.0 * math.log(2.0)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    hc, hd = h(c), h(d)
    for _ in range(GOLDEN_STEPS):
        left = hc <= hd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        nc = np.where(left, b - INV_PHI * (b - a), d)
        nd = np.where(left, c, a + INV_PHI * (b - a))
        hnew = h(np.where(left, nc, nd))
        hc, hd = np.where(left, hnew, hd), np.where(left, hc, hnew)
        c, d = nc, nd
    best = np.minimum(np.minimum(hc, hd), np.minimum(h(b), h(-np.log(lux))))
    out[live] = best
    return out


@dataclass(frozen=True)
class SequenceSpace:
    """``l_phi^n`` with the Luxemburg norm; the dual carries the Amemiya norm of ``phi_*``.

    Power and linear functions use the exact ``l_p`` formulas; everything
    else goes through the generic root-finders.
    """

    f: OrliczFunction

    def _power(self):
        f = self.f
        if isinstance(f, Linear):
            return 1.0, f.k
        if isinstance(f, Power):
            return f.p, f.k
        return None

    def norm(self, rows):
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        pk = self._power()
        if pk is not None:
            p, k = pk
            if p == 1.0:
                return k * np.abs(rows).sum(axis=1)
            return k ** (1.0 / p) * (np.abs(rows) ** p).sum(axis=1) ** (1.0 / p)
        return luxemburg_rows(self.f, rows, np.ones_like(rows), rtol=1e-13)

    def dual_norm(self, rows):
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        pk = self._power()
        if pk is not None:
            p, k = pk
            if p == 1.0:
                return np.abs(rows).max(axis=1) / k
            q = p / (p - 1.0)
            return k ** (-1.0 / p) * (np.abs(rows) ** q).sum(axis=1) ** (1.0 / q)
        return _amemiya_rows(conjugate(self.f).conjugate, rows)

    def ball_norm(self, side):
        return self.dual_norm if side == "weak_star_slice" else self.norm

    def functional_norm(self, side):
        # the slicing functional lives in the space dual to the ball
        return self.norm if side == "weak_star_slice" else self.dual_norm


__all__ = ["SequenceSpace"]
