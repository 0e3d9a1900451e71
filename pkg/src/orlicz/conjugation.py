"""Complementary functions (Legendre-Fenchel conjugates) of Orlicz functions.

``phi_*(v) = sup_{u >= 0} (u v - phi(u))``. Closed-form pairs are used where
they exist; otherwise the supremum is taken numerically by golden-section
search on the concave map ``u -> u v - phi(u)``.
"""
import functools
from dataclasses import dataclass, field
from typing import ClassVar, Optional

import numpy as np

from . import _numeric as num
from .errors import DomainError, PreconditionError
from .functions import (
    INF,
    Capped,
    Dilated,
    ExpConjugate,
    ExpMinusOne,
    Indicator,
    Linear,
    OrliczFunction,
    PiecewiseLinear,
    Power,
)

GOLDEN_TOL = 1e-12
GRID_POINTS = 1024
GRID_RANGE = (1e-8, 1e8)
# infinity is decided by the slope gate, so the bracket may run far past 2^64
SEARCH_CAP = 2.0 ** 1000


@functools.lru_cache(maxsize=256)
def _slope_at_zero(primal):
    try:
        return primal.derivative(0.0)
    except DomainError:
        return INF


@functools.lru_cache(maxsize=200_000)
def _sup_transform(primal, v):
    """``sup_u (u v - primal(u))`` with the conventions described in NumericConjugate."""
    if v == 0.0 or v <= _slope_at_zero(primal):
        return 0.0  # u v - phi(u) is nonincreasing
    phi = primal._scalar
    bp = primal.domain_bound

    def g(u):
        val = phi(u)
        return -INF if val == INF else u * v - val

    if bp < INF:
        top = bp
    else:
        slope = primal.asymptotic_slope()
        if v > slope:
            return INF
        # doubling bracket; stop at the last finite value if u*v leaves float range
        t, prev = 1.0, 0.0
        while True:
            cur = g(t)
            if cur != cur or cur == INF:
                return max(prev, 0.0)
            if cur < prev:
                break
            if t >= SEARCH_CAP:
                if v == slope and cur > prev:
                    return INF
                return max(cur, 0.0)
            prev, t = cur, 2.0 * t
        top = t
    # shrink to the maximizer's scale so the absolute line-search tolerance is harmless
    while top > 1e-300 and g(0.5 * top) >= g(top) and g(0.25 * top) >= g(0.5 * top):
        top *= 0.5
    _, best = num.golden_max(g, 0.0, top, tol=GOLDEN_TOL)
    return max(best, 0.0)


@dataclass(frozen=True)
class NumericConjugate(OrliczFunction):
    """The complementary function of ``primal`` computed pointwise.

    Each value is an independent golden-section maximization (cached), so the
    descriptor is exact up to the line-search tolerance at every argument. A
    log-spaced sample on ``GRID_RANGE`` is available through :meth:`samples`
    for serialization. ``+inf`` is returned past the primal's asymptotic
    slope; when the maximizer escapes float range the value at the bracket
    cap is returned as a finite lower bound.
    """

    primal: OrliczFunction
    family: ClassVar[str] = "numeric_conjugate"
    closed_form: ClassVar[bool] = False

    def _scalar(self, v):
        return _sup_transform(self.primal, float(v))

    def _eval(self, v):
        flat = np.asarray(v, dtype=float)
        out = np.array([_sup_transform(self.primal, float(x)) for x in flat.ravel()])
        return out.reshape(flat.shape)

    @property
    def domain_bound(self):
        if self.primal.domain_bound < INF:
            return INF
        return self.constants().b

    def asymptotic_slope(self):
        return self.primal.domain_bound

    def samples(self, npoints=GRID_POINTS, lo=GRID_RANGE[0], hi=GRID_RANGE[1]):
        v = np.geomspace(lo, hi, npoints)
        return v, self(v)

    def to_dict(self):
        return {"family": "numeric_conjugate", "primal": self.primal.to_dict()}

    def label(self):
        return f"({self.primal.label()})_*"


def closed_conjugate(f) -> Optional[OrliczFunction]:
    """Closed-form complementary function, or ``None`` when none is tabulated."""
    if isinstance(f, Power):
        if f.linear:
            return Indicator(f.k)
        q = f.p / (f.p - 1.0)
        return Power(q, (f.k * f.p) ** (-(q - 1.0)) / q)
    if isinstance(f, Linear):
        return Indicator(f.k)
    if isinstance(f, Indicator):
        return Linear(f.b)
    if isinstance(f, ExpMinusOne):
        return ExpConjugate()
    if isinstance(f, ExpConjugate):
        return ExpMinusOne()
    if isinstance(f, PiecewiseLinear):
        return _pl_conjugate(f)
    if isinstance(f, Dilated):
        inner = closed_conjugate(f.inner)
        return None if inner is None else Dilated(inner, 1.0 / f.c)
    return None


def _pl_conjugate(f):
    us, vs = f._us, f._vs
    slopes = np.unique(np.concatenate([[0.0], f.slopes]))
    vals = np.max(np.outer(slopes, us) - vs[None, :], axis=1)
    vals = np.maximum(vals, 0.0)
    if np.all(vals == 0.0):
        return Indicator(float(slopes[-1]))
    return Capped(PiecewiseLinear(tuple(zip(slopes.tolist(), vals.tolist()))), float(slopes[-1]))


@dataclass(frozen=True)
class ConjugatePair:
    primal: OrliczFunction
    conjugate: OrliczFunction
    mode: str  # "closed_form" or "numeric_grid"
    tolerance: float = 0.0
    grid: Optional[tuple] = field(default=None, compare=False)

    def to_dict(self, with_samples=False):
        out = {
            "primal": self.primal.to_dict(),
            "conjugate": self.conjugate.to_dict(),
            "mode": self.mode,
            "tolerance": self.tolerance,
        }
        if with_samples and self.mode == "numeric_grid":
            v, vals = self.conjugate.samples()
            out["samples"] = [[float(a), "inf" if b == INF else float(b)] for a, b in zip(v, vals)]
        return out


def conjugate(f, numeric=False):
    """Complementary function of ``f`` wrapped in a :class:`ConjugatePair`."""
    if not numeric:
        closed = closed_conjugate(f)
        if closed is not None:
            return ConjugatePair(f, closed, "closed_form", 0.0)
    return ConjugatePair(f, NumericConjugate(f), "numeric_grid", GOLDEN_TOL,
                         (GRID_RANGE[0], GRID_RANGE[1], GRID_POINTS))


def young_gap(pair, u, v):
    """``phi(u) + phi_*(v) - u v``; nonnegative, zero when ``v`` is a subgradient at ``u``."""
    if u < 0 or v < 0:
        raise DomainError("Young gap needs u, v >= 0")
    pu = pair.primal._scalar(u)
    qv = pair.conjugate._scalar(v)
    if pu == INF or qv == INF:
        raise DomainError("Young gap is undefined for infinite operands")
    return pu + qv - u * v


@dataclass(frozen=True)
class BiconjugateReport:
    max_error: float
    worst_u: float
    npoints: int


def biconjugate_check(f, grid):
    """Two numeric conjugations; max of ``|phi_**(u) - phi(u)| / max(1, phi(u))`` on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    b = f.domain_bound
    if np.any(grid < 0) or (b < INF and np.any(grid >= b)):
        raise DomainError("grid must lie in [0, b_phi)")
    once = NumericConjugate(f)
    twice = NumericConjugate(once)
    vals = np.array([f._scalar(u) for u in grid])
    back = np.array([twice._scalar(u) for u in grid])
    err = np.abs(back - vals) / np.maximum(1.0, vals)
    i = int(np.argmax(err))
    return BiconjugateReport(float(err[i]), float(grid[i]), len(grid))


@dataclass(frozen=True)
class FinitenessDuality:
    n_at_infinity: bool
    conjugate_finite: bool

    @property
    def consistent(self):
        return self.n_at_infinity == self.conjugate_finite


def finiteness_duality(f):
    """A finite ``phi`` is an N-function at infinity iff its conjugate is finite.

    Both sides are computed independently: the growth of ``phi(u)/u`` on one
    side and ``b`` of the conjugate's critical constants on the other.
    """
    if f.domain_bound < INF:
        raise PreconditionError("finiteness duality is stated for finite phi")
    n_inf = f.n_function_class()[1]
    conj = conjugate(f).conjugate
    return FinitenessDuality(bool(n_inf), conj.constants().b == INF)


__all__ = [
    "ConjugatePair",
    "NumericConjugate",
    "BiconjugateReport",
    "FinitenessDuality",
    "biconjugate_check",
    "closed_conjugate",
    "conjugate",
    "finiteness_duality",
    "young_gap",
]
