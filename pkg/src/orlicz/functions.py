"""Orlicz functions: evaluation, inverses, critical constants and growth tests.

An Orlicz function is a convex, left-continuous ``phi: [0, inf) -> [0, inf]``
with ``phi(0) = 0`` that is neither identically zero nor identically infinite
on ``(0, inf)``. Each family below is an immutable descriptor; families with a
closed form override the generic numeric routines of :class:`OrliczFunction`.

>>> phi = Power(2.0)
>>> phi(3.0)
9.0
>>> critical_constants(phi)
CriticalConstants(a=0.0, d=0.0, c=1.0, b=inf, d_plus=0.0)
"""
import bisect
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar, Optional

import numpy as np

from . import _numeric as num
from .errors import ConstructionError, DegenerateInputError, DomainError
from .measures import MeasureDescriptor

INF = math.inf

LINEAR_RTOL = 1e-10
DELTA2_GRID_POINTS = 512
DELTA2_CEILING = 1e6
DELTA2_RANGE = (1e-8, 1e8)


class Condition(str, Enum):
    DELTA2 = "delta2"
    DELTA2_INF = "delta2_infinity"
    DELTA2_ZERO = "delta2_zero"


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    EMPIRICAL_HOLDS = "empirical-holds"
    EMPIRICAL_FAILS = "empirical-fails"

    @property
    def positive(self):
        return self in (Verdict.HOLDS, Verdict.EMPIRICAL_HOLDS)

    @property
    def exact(self):
        return self in (Verdict.HOLDS, Verdict.FAILS)


@dataclass(frozen=True)
class CriticalConstants:
    """The quadruple ``(a, d, c, b)`` plus the strict-linearity variant ``d_plus``.

    ``a = sup{u: phi(u) = 0}``, ``d = sup{u: phi = k*u on [0, u], k >= 0}``,
    ``c = sup{u: phi(u) <= 1}``, ``b = sup{u: phi(u) < inf}``. ``d_plus`` is
    the same supremum restricted to ``k > 0`` (0 when no such u exists); it
    is reported but never used by the geometric routines.
    """

    a: float
    d: float
    c: float
    b: float
    d_plus: float = 0.0


@dataclass(frozen=True)
class GrowthVerdict:
    condition: Condition
    verdict: Verdict
    constant_K: Optional[float] = None
    threshold_u0: Optional[float] = None
    witness_u: Optional[float] = None
    note: str = ""
    grid: Optional[tuple] = None  # (lo, hi, npoints) for empirical verdicts

    @property
    def holds(self):
        return self.verdict.positive

    @property
    def exact(self):
        return self.verdict.exact

    def label(self):
        return self.verdict.value

    def to_dict(self):
        return {
            "condition": self.condition.value,
            "verdict": self.verdict.value,
            "constant_K": self.constant_K,
            "threshold_u0": self.threshold_u0,
            "witness_u": self.witness_u,
            "note": self.note,
            "grid": list(self.grid) if self.grid is not None else None,
        }


def _fmt(x):
    return "inf" if x == INF else f"{x:g}"


def _as_array(u):
    arr = np.asarray(u, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("Orlicz functions are defined on [0, inf)")
    return arr


class OrliczFunction:
    """Base class: generic numeric implementations of every query.

    Subclasses implement ``_eval`` on float arrays and may override any of the
    ``_closed_*`` hooks. ``closed_form`` marks descriptors whose growth
    verdicts are exact.
    """

    family: ClassVar[str] = "abstract"
    closed_form: ClassVar[bool] = False

    # -- evaluation -------------------------------------------------------
    def _eval(self, u):
        raise NotImplementedError

    def __call__(self, u):
        arr = _as_array(u)
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.asarray(self._eval(arr), dtype=float)
        out = np.where(np.isnan(out), INF, out)
        if out.ndim == 0:
            return float(out)
        return out

    # -- domain -------------------------------------------------------------
    @property
    def domain_bound(self):
        return self.constants().b

    @property
    def is_finite(self):
        return self.domain_bound == INF

    # -- queries with generic fallbacks ------------------------------------
    def derivative(self, u):
        b = self.domain_bound
        if u < 0 or u >= b:
            raise DomainError(f"right derivative needs 0 <= u < b_phi = {_fmt(b)}")
        g = self._closed_derivative(u)
        if g is not None:
            return g
        return num.forward_derivative(self, u, h0=min(1e-3, 0.25 * (b - u)) if b < INF else 1e-3)

    def inverse(self, y):
        if y < 0 or math.isnan(y):
            raise DomainError("generalized inverse needs y >= 0")
        r = self._closed_inverse(y)
        if r is not None:
            return r
        return self._generic_inverse(y)

    def constants(self):
        cached = self.__dict__.get("_constants_cache")
        if cached is None:
            cached = self._closed_constants() or self._generic_constants()
            object.__setattr__(self, "_constants_cache", cached)
        return cached

    def n_function_class(self):
        r = self._closed_n_class()
        if r is not None:
            return r
        return self._generic_n_class()

    def asymptotic_slope(self):
        """``lim phi(u)/u`` as ``u -> inf`` (``inf`` when ``b_phi`` is finite)."""
        r = self._closed_slope()
        if r is not None:
            return r
        return self._generic_slope()

    # hooks; returning None selects the generic path
    def _closed_derivative(self, u):
        return None

    def _closed_inverse(self, y):
        return None

    def _closed_constants(self):
        return None

    def _closed_n_class(self):
        return None

    def _closed_slope(self):
        return None

    def _delta2_exact(self, condition):
        return None

    # -- generic numerics -------------------------------------------------
    def _scalar(self, u):
        """Fast float path; subclasses override with ``math`` versions."""
        return float(self(u))

    def _generic_bound(self):
        if math.isfinite(self._scalar(num.BRACKET_CAP)):
            return INF
        t = 1.0
        if not math.isfinite(self._scalar(t)):
            lo, hi = 0.0, t
        else:
            while math.isfinite(self._scalar(2.0 * t)):
                t *= 2.0
            lo, hi = t, 2.0 * t
        lo, _ = num.bisect_predicate(lambda s: math.isfinite(self._scalar(s)), lo, hi, rtol=1e-13)
        return lo

    def _generic_constants(self):
        b = self._generic_bound()
        top = b if b < INF else num.BRACKET_CAP
        phi = self._scalar
        # a: end of the zero set
        if phi(top) == 0.0 and b < INF:
            a = b
        elif phi(top) == 0.0:
            raise ConstructionError("phi is identically zero")
        else:
            a, _ = num.bisect_predicate(lambda s: phi(s) == 0.0, 0.0, top, rtol=1e-13, atol=1e-15)
        # c: level-1 crossing
        if phi(top) <= 1.0:
            c = top if b < INF else INF
        else:
            c, _ = num.bisect_predicate(lambda s: phi(s) <= 1.0, a, top, rtol=1e-13)
        # d: end of the initial linear piece (k >= 0 convention)
        if a > 0:
            d, d_plus = a, 0.0
        else:
            def linear_up_to(s):
                v = phi(s)
                if not math.isfinite(v):
                    return False
                return abs(2.0 * phi(0.5 * s) - v) <= LINEAR_RTOL * v

            probe = 1e-9 * min(1.0, top)
            if not linear_up_to(probe):
                d = 0.0
            elif linear_up_to(top) and b == INF:
                d = INF
            else:
                d, _ = num.bisect_predicate(linear_up_to, probe, top, rtol=1e-13)
            d_plus = d
        return CriticalConstants(a, d, c, b, d_plus)

    def _generic_inverse(self, y):
        if y == 0.0:
            return 0.0
        b = self.domain_bound
        phi = self._scalar
        if b < INF:
            if phi(b) < y:
                return b
            hi = b
        else:
            hi = 1.0
            while phi(hi) < y:
                hi *= 2.0
                if hi > num.BRACKET_CAP:
                    return INF
        _, hi = num.bisect_predicate(lambda s: phi(s) < y, 0.0, hi, rtol=1e-13)
        return hi

    def _generic_n_class(self):
        b = self.domain_bound
        ks = range(1, 13)
        small = [self._scalar(10.0 ** -k) / 10.0 ** -k for k in ks]
        at_zero = all(x >= y for x, y in zip(small, small[1:])) and small[-1] <= 1e-9
        if b < INF:
            return at_zero, True
        large = [self._scalar(10.0 ** k) / 10.0 ** k for k in ks]
        at_inf = all(y >= x for x, y in zip(large, large[1:])) and large[-1] >= 1e9
        return at_zero, at_inf

    def _generic_slope(self):
        if self.domain_bound < INF:
            return INF
        ratios = [self._scalar(10.0 ** k) / 10.0 ** k for k in range(1, 13)]
        if ratios[-1] >= 1e9 or not math.isfinite(ratios[-1]):
            return INF
        return ratios[-1]

    # -- serialization ------------------------------------------------------
    def to_dict(self):
        raise NotImplementedError

    def __str__(self):
        return self.label()

    def label(self):
        return self.family


# ---------------------------------------------------------------------------
# closed-form families
# ---------------------------------------------------------------------------


def _holds(condition, K, u0=None, note=""):
    if K is not None and K <= 2.0 + 1e-15:
        return GrowthVerdict(condition, Verdict.HOLDS, None, u0, None,
                             note or "phi(2u) = 2 phi(u): every K > 2 works (boundary case K = 2)")
    return GrowthVerdict(condition, Verdict.HOLDS, K, u0, None, note)


def _fails(condition, witness, note=""):
    return GrowthVerdict(condition, Verdict.FAILS, None, None, witness, note)


@dataclass(frozen=True)
class Power(OrliczFunction):
    """``phi(u) = k * u**p`` with ``p >= 1``."""

    p: float
    k: float = 1.0
    family: ClassVar[str] = "power"
    closed_form: ClassVar[bool] = True

    def __post_init__(self):
        if not (self.p >= 1.0 and math.isfinite(self.p)):
            raise ConstructionError(f"power: p must be >= 1, got {self.p}")
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ConstructionError(f"power: k must be positive, got {self.k}")

    @property
    def linear(self):
        return self.p == 1.0

    def _eval(self, u):
        return self.k * u ** self.p

    def _scalar(self, u):
        return self.k * u ** self.p

    @property
    def domain_bound(self):
        return INF

    def _closed_derivative(self, u):
        if self.linear:
            return self.k
        return self.k * self.p * u ** (self.p - 1.0)

    def _closed_inverse(self, y):
        return (y / self.k) ** (1.0 / self.p)

    def _closed_constants(self):
        c = self.k ** (-1.0 / self.p)
        if self.linear:
            return CriticalConstants(0.0, INF, c, INF, INF)
        return CriticalConstants(0.0, 0.0, c, INF, 0.0)

    def _closed_n_class(self):
        return (not self.linear, not self.linear)

    def _closed_slope(self):
        return self.k if self.linear else INF

    def _delta2_exact(self, condition):
        u0 = None
        if condition == Condition.DELTA2_ZERO:
            u0 = self.constants().c
        elif condition == Condition.DELTA2_INF:
            u0 = 0.0
        return _holds(condition, 2.0 ** self.p, u0)

    def to_dict(self):
        return {"family": "power", "p": self.p, "k": self.k}

    def label(self):
        base = f"u^{self.p:g}"
        return base if self.k == 1.0 else f"{self.k:g}*{base}"


@dataclass(frozen=True)
class Linear(OrliczFunction):
    """``phi(u) = k * u``; generates ``L_1`` with norm ``k * ||.||_1``."""

    k: float = 1.0
    family: ClassVar[str] = "linear"
    closed_form: ClassVar[bool] = True

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ConstructionError(f"linear: k must be positive, got {self.k}")

    def _eval(self, u):
        return self.k * u

    def _scalar(self, u):
        return self.k * u

    @property
    def domain_bound(self):
        return INF

    def _closed_derivative(self, u):
        return self.k

    def _closed_inverse(self, y):
        return y / self.k

    def _closed_constants(self):
        return CriticalConstants(0.0, INF, 1.0 / self.k, INF, INF)

    def _closed_n_class(self):
        return (False, False)

    def _closed_slope(self):
        return self.k

    def _delta2_exact(self, condition):
        u0 = {Condition.DELTA2: None, Condition.DELTA2_INF: 0.0,
              Condition.DELTA2_ZERO: 1.0 / self.k}[condition]
        return _holds(condition, 2.0, u0)

    def to_dict(self):
        return {"family": "linear", "k": self.k}

    def label(self):
        return "u" if self.k == 1.0 else f"{self.k:g}*u"


@dataclass(frozen=True)
class ExpMinusOne(OrliczFunction):
    """``phi(u) = exp(u) - 1``."""

    family: ClassVar[str] = "exp_minus_one"
    closed_form: ClassVar[bool] = True

    def _eval(self, u):
        return np.expm1(u)

    def _scalar(self, u):
        try:
            return math.expm1(u)
        except OverflowError:
            return INF

    @property
    def domain_bound(self):
        return INF

    def _closed_derivative(self, u):
        return math.exp(u)

    def _closed_inverse(self, y):
        return math.log1p(y)

    def _closed_constants(self):
        return CriticalConstants(0.0, 0.0, math.log(2.0), INF, 0.0)

    def _closed_n_class(self):
        return (False, True)

    def _closed_slope(self):
        return INF

    def _delta2_exact(self, condition):
        # phi(2u)/phi(u) = e^u + 1: bounded near 0, unbounded at infinity
        if condition == Condition.DELTA2_ZERO:
            return _holds(condition, math.e + 1.0, 1.0, "sup of e^u + 1 over (0, 1]")
        return _fails(condition, math.log(DELTA2_CEILING) + 1.0,
                      "phi(2u)/phi(u) = e^u + 1 is unbounded")

    def to_dict(self):
        return {"family": "exp_minus_one"}

    def label(self):
        return "e^u-1"


@dataclass(frozen=True)
class ULogU(OrliczFunction):
    """``phi(u) = u * log(1 + u)``."""

    family: ClassVar[str] = "u_log_u"
    closed_form: ClassVar[bool] = True

    def _eval(self, u):
        return u * np.log1p(u)

    def _scalar(self, u):
        return u * math.log1p(u)

    @property
    def domain_bound(self):
        return INF

    def _closed_derivative(self, u):
        return math.log1p(u) + u / (1.0 + u)

    def _closed_constants(self):
        c = self._generic_inverse(1.0)
        return CriticalConstants(0.0, 0.0, c, INF, 0.0)

    def _closed_n_class(self):
        return (True, True)

    def _closed_slope(self):
        return INF

    def _delta2_exact(self, condition):
        # log(1 + 2u) <= 2 log(1 + u), so phi(2u) <= 4 phi(u) everywhere
        u0 = {Condition.DELTA2: None, Condition.DELTA2_INF: 0.0,
              Condition.DELTA2_ZERO: self.constants().c}[condition]
        return _holds(condition, 4.0, u0, "ratio decreases from 4 (at 0+) to 2 (at infinity)")

    def to_dict(self):
        return {"family": "u_log_u"}

    def label(self):
        return "u*log(1+u)"


@dataclass(frozen=True)
class Indicator(OrliczFunction):
    """``phi = 0`` on ``[0, b]`` and ``+inf`` beyond; the conjugate of ``b * u``."""

    b: float
    family: ClassVar[str] = "indicator"
    closed_form: ClassVar[bool] = True

    def __post_init__(self):
        if not (self.b > 0 and math.isfinite(self.b)):
            raise ConstructionError(f"indicator: b must be positive and finite, got {self.b}")

    def _eval(self, u):
        return np.where(u <= self.b, 0.0, INF)

    def _scalar(self, u):
        return 0.0 if u <= self.b else INF

    @property
    def domain_bound(self):
        return self.b

    def _closed_derivative(self, u):
        return 0.0

    def _closed_inverse(self, y):
        return 0.0 if y == 0.0 else self.b

    def _closed_constants(self):
        return CriticalConstants(self.b, self.b, self.b, self.b, 0.0)

    def _closed_n_class(self):
        return (True, True)

    def _closed_slope(self):
        return INF

    def _delta2_exact(self, condition):
        if condition == Condition.DELTA2_ZERO:
            raise DegenerateInputError("Delta2^0 undefined: phi vanishes up to a_phi = c_phi")
        return _fails(condition, 0.75 * self.b, "phi(2u) = inf while phi(u) = 0")

    def to_dict(self):
        return {"family": "indicator", "b": self.b}

    def label(self):
        return f"0|inf@{self.b:g}"


@dataclass(frozen=True)
class ExpConjugate(OrliczFunction):
    """``phi(v) = v log v - v + 1`` for ``v >= 1`` and 0 below; conjugate of ``e^u - 1``."""

    family: ClassVar[str] = "exp_conjugate"
    closed_form: ClassVar[bool] = True

    def _eval(self, v):
        vv = np.maximum(v, 1.0)
        return np.where(v >= 1.0, vv * np.log(vv) - vv + 1.0, 0.0)

    def _scalar(self, v):
        return v * math.log(v) - v + 1.0 if v >= 1.0 else 0.0

    @property
    def domain_bound(self):
        return INF

    def _closed_derivative(self, v):
        return math.log(v) if v >= 1.0 else 0.0

    def _closed_constants(self):
        return CriticalConstants(1.0, 1.0, math.e, INF, 0.0)

    def _closed_n_class(self):
        return (True, True)

    def _closed_slope(self):
        return INF

    def _delta2_exact(self, condition):
        if condition != Condition.DELTA2_INF:
            return _fails(condition, 1.0, "phi(1) = 0 < phi(2)")
        u = np.geomspace(math.e, 1e8, 4096)
        K = float(np.max(self(2 * u) / self(u)))
        return _holds(condition, K, math.e, "ratio decreases to 2 at infinity")

    def to_dict(self):
        return {"family": "exp_conjugate"}

    def label(self):
        return "vlogv-v+1"


@dataclass(frozen=True)
class PiecewiseLinear(OrliczFunction):
    """Convex piecewise-linear data ``[(0, 0), (u1, phi1), ...]``.

    Beyond the last breakpoint the last slope continues. Non-convex data is
    rejected, never repaired.
    """

    points: tuple
    family: ClassVar[str] = "piecewise_linear"
    closed_form: ClassVar[bool] = True

    def __post_init__(self):
        pts = tuple((float(u), float(v)) for u, v in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ConstructionError("piecewise_linear: need at least two points")
        if pts[0] != (0.0, 0.0):
            raise ConstructionError("piecewise_linear: first point must be (0, 0)")
        us = np.array([p[0] for p in pts])
        vs = np.array([p[1] for p in pts])
        if not np.all(np.isfinite(us)) or not np.all(np.isfinite(vs)):
            raise ConstructionError("piecewise_linear: breakpoints must be finite")
        if np.any(np.diff(us) <= 0):
            raise ConstructionError("piecewise_linear: abscissae must be strictly increasing")
        slopes = np.diff(vs) / np.diff(us)
        if np.any(slopes < 0):
            raise ConstructionError("piecewise_linear: phi must be nondecreasing")
        if np.any(np.diff(slopes) < -1e-12 * np.maximum(1.0, np.abs(slopes[1:]))):
            raise ConstructionError("piecewise_linear: data is not convex")
        if slopes[-1] <= 0:
            raise ConstructionError("piecewise_linear: phi is identically zero")

    @property
    def _knots(self):
        return [p[0] for p in self.points]

    @property
    def _us(self):
        return np.array([p[0] for p in self.points])

    @property
    def _vs(self):
        return np.array([p[1] for p in self.points])

    @property
    def slopes(self):
        return np.diff(self._vs) / np.diff(self._us)

    def _eval(self, u):
        us, vs = self._us, self._vs
        inside = np.interp(u, us, vs)
        tail = vs[-1] + self.slopes[-1] * (u - us[-1])
        return np.where(u <= us[-1], inside, tail)

    def _scalar(self, u):
        pts = self.points
        i = bisect.bisect_right(self._knots, u) - 1
        i = min(max(i, 0), len(pts) - 2)
        (u0, v0), (u1, v1) = pts[i], pts[i + 1]
        return v0 + (v1 - v0) / (u1 - u0) * (u - u0)

    @property
    def domain_bound(self):
        return INF

    def _closed_derivative(self, u):
        us, s = self._us, self.slopes
        i = int(np.searchsorted(us, u, side="right")) - 1
        return float(s[min(i, len(s) - 1)])

    def _closed_inverse(self, y):
        if y == 0.0:
            return 0.0
        us, vs, s = self._us, self._vs, self.slopes
        if y > vs[-1]:
            return float(us[-1] + (y - vs[-1]) / s[-1])
        i = int(np.searchsorted(vs, y, side="left"))
        # vs[i-1] < y <= vs[i]; segment i-1 has positive slope
        return float(us[i - 1] + (y - vs[i - 1]) / s[i - 1])

    def _closed_constants(self):
        us, vs, s = self._us, self._vs, self.slopes
        zero = np.nonzero(vs == 0.0)[0]
        a = float(us[zero[-1]])
        if s[0] == 0.0:
            d, d_plus = a, 0.0
        else:
            same = np.nonzero(np.abs(s - s[0]) > LINEAR_RTOL * s[0])[0]
            d = INF if len(same) == 0 else float(us[same[0]])
            d_plus = d
        # phi is strictly increasing past a, so sup{phi <= 1} is the inverse at 1
        c = self._closed_inverse(1.0)
        return CriticalConstants(a, d, c, INF, d_plus)

    def _closed_n_class(self):
        return (bool(self.slopes[0] == 0.0), False)

    def _closed_slope(self):
        return float(self.slopes[-1])

    def _ratio_sup(self, lo, hi):
        """Exact sup of phi(2u)/phi(u) over ``[lo, hi]`` (``hi`` may be inf)."""
        us = self._us
        cands = {lo}
        for x in np.concatenate([us, us / 2.0]):
            if lo < x < hi:
                cands.add(float(x))
        if hi < INF:
            cands.add(hi)
        pts = np.array(sorted(cands))
        vals = self(2 * pts) / self(pts)
        sup = float(np.max(vals))
        if hi == INF:
            sup = max(sup, 2.0)
        if lo == 0.0:
            sup = max(sup, 2.0)
        return sup

    def _delta2_exact(self, condition):
        cc = self.constants()
        if condition == Condition.DELTA2_INF:
            return _holds(condition, self._ratio_sup(cc.c, INF), cc.c)
        if cc.a > 0:
            return _fails(condition, cc.a, "phi(a_phi) = 0 < phi(2 a_phi)")
        if condition == Condition.DELTA2:
            eps = float(self._us[1]) * 1e-3
            return _holds(condition, self._ratio_sup(eps, INF))
        return _holds(condition, self._ratio_sup(float(self._us[1]) * 1e-3, cc.c), cc.c)

    def to_dict(self):
        return {"family": "piecewise_linear", "points": [list(p) for p in self.points]}

    def label(self):
        if self.points == ((0.0, 0.0), (1.0, 0.0), (2.0, 1.0)):
            return "max(0,u-1)"
        return "PL[" + ",".join(f"({u:g},{v:g})" for u, v in self.points) + "]"


@dataclass(frozen=True)
class Capped(OrliczFunction):
    """``inner`` on ``[0, b]`` and ``+inf`` beyond (left-continuous at ``b``)."""

    inner: OrliczFunction
    b: float
    family: ClassVar[str] = "capped"

    def __post_init__(self):
        if not (self.b > 0 and math.isfinite(self.b)):
            raise ConstructionError(f"capped: b must be positive and finite, got {self.b}")
        if self.inner.domain_bound <= self.b:
            raise ConstructionError("capped: b must lie inside the domain of the inner function")

    @property
    def closed_form(self):
        return self.inner.closed_form

    def _eval(self, u):
        inner = np.asarray(self.inner(np.minimum(u, self.b)), dtype=float)
        return np.where(u <= self.b, inner, INF)

    def _scalar(self, u):
        return self.inner._scalar(u) if u <= self.b else INF

    @property
    def domain_bound(self):
        return self.b

    def _closed_derivative(self, u):
        return self.inner.derivative(u)

    def _closed_inverse(self, y):
        return min(self.inner.inverse(y), self.b)

    def _closed_constants(self):
        ic = self.inner.constants()
        return CriticalConstants(min(ic.a, self.b), min(ic.d, self.b), min(ic.c, self.b),
                                 self.b, min(ic.d_plus, self.b))

    def _closed_n_class(self):
        return (self.inner.n_function_class()[0], True)

    def _closed_slope(self):
        return INF

    def _delta2_exact(self, condition):
        if condition != Condition.DELTA2_ZERO:
            return _fails(condition, 0.75 * self.b, "phi(2u) = inf while phi(u) < inf")
        cc = self.constants()
        if cc.a >= 0.5 * self.b:
            if cc.a >= cc.c:
                raise DegenerateInputError("Delta2^0 undefined: phi vanishes up to a_phi = c_phi")
            return _fails(condition, cc.a, "no u0 <= b/2 with phi(u0) > 0")
        if not self.inner.closed_form:
            return None
        inner = check_delta2(self.inner, condition)
        if not inner.holds:
            return inner
        u0 = min(inner.threshold_u0 or 0.5 * self.b, 0.5 * self.b)
        return GrowthVerdict(condition, inner.verdict, inner.constant_K, u0, None, inner.note)

    def to_dict(self):
        return {"family": "capped", "inner": self.inner.to_dict(), "b": self.b}

    def label(self):
        return f"{self.inner.label()}|<= {self.b:g}"


@dataclass(frozen=True)
class Dilated(OrliczFunction):
    """``phi(u) = inner(c * u)``."""

    inner: OrliczFunction
    c: float
    family: ClassVar[str] = "dilated"

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ConstructionError(f"dilated: c must be positive, got {self.c}")

    @property
    def closed_form(self):
        return self.inner.closed_form

    def _eval(self, u):
        return self.inner(self.c * u)

    def _scalar(self, u):
        return self.inner._scalar(self.c * u)

    @property
    def domain_bound(self):
        return self.inner.domain_bound / self.c

    def _closed_derivative(self, u):
        return self.c * self.inner.derivative(self.c * u)

    def _closed_inverse(self, y):
        return self.inner.inverse(y) / self.c

    def _closed_constants(self):
        ic = self.inner.constants()
        return CriticalConstants(ic.a / self.c, ic.d / self.c, ic.c / self.c, ic.b / self.c,
                                 ic.d_plus / self.c)

    def _closed_n_class(self):
        return self.inner.n_function_class()

    def _closed_slope(self):
        return self.c * self.inner.asymptotic_slope()

    def _delta2_exact(self, condition):
        if not self.inner.closed_form:
            return None
        v = check_delta2(self.inner, condition)

        def sc(x):
            return None if x is None else x / self.c

        return GrowthVerdict(condition, v.verdict, v.constant_K, sc(v.threshold_u0),
                             sc(v.witness_u), v.note, v.grid)

    def to_dict(self):
        return {"family": "dilated", "inner": self.inner.to_dict(), "c": self.c}

    def label(self):
        return f"{self.inner.label()}({self.c:g}u)"


@dataclass(frozen=True)
class PiecewiseAnalytic(OrliczFunction):
    """Pieces of other families glued continuously.

    ``segments = ((0, f0), (u1, f1), ...)``: on ``[u_i, u_{i+1})`` the function
    is ``f_i(u) + offset_i``, offsets chosen for continuity. ``bound`` cuts the
    domain (``+inf`` beyond, left-continuous). Convexity is validated by
    sampled second differences and the slopes at each join.
    """

    segments: tuple
    bound: float = INF
    offsets: tuple = field(default=(), compare=False, repr=False)
    family: ClassVar[str] = "piecewise_analytic"

    def __post_init__(self):
        segs = tuple((float(s), f) for s, f in self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs or segs[0][0] != 0.0:
            raise ConstructionError("piecewise_analytic: first segment must start at 0")
        starts = [s for s, _ in segs]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ConstructionError("piecewise_analytic: segment starts must increase")
        if not self.bound > starts[-1]:
            raise ConstructionError("piecewise_analytic: bound must exceed the last start")
        offsets = [0.0]
        for i in range(1, len(segs)):
            s = segs[i][0]
            prev = float(segs[i - 1][1](s)) + offsets[-1]
            offsets.append(prev - float(segs[i][1](s)))
        object.__setattr__(self, "offsets", tuple(offsets))
        self._validate()

    def _validate(self):
        hi = self.bound if self.bound < INF else 2.0 * self.segments[-1][0] + 10.0
        u = np.linspace(0.0, hi, 4001)
        v = self(u)
        if not np.all(np.isfinite(v)):
            raise ConstructionError("piecewise_analytic: infinite value inside the domain")
        if np.any(np.diff(v) < -1e-12 * np.maximum(1.0, np.abs(v[1:]))):
            raise ConstructionError("piecewise_analytic: phi must be nondecreasing")
        second = v[2:] - 2 * v[1:-1] + v[:-2]
        if np.any(second < -1e-10 * np.maximum(1.0, np.abs(v[1:-1]))):
            raise ConstructionError("piecewise_analytic: pieces are not convex together")
        if v[-1] <= 0:
            raise ConstructionError("piecewise_analytic: phi is identically zero on the sample")

    def _eval(self, u):
        out = np.zeros_like(u, dtype=float)
        starts = [s for s, _ in self.segments] + [INF]
        for i, (s, f) in enumerate(self.segments):
            mask = (u >= s) & (u < starts[i + 1])
            if np.any(mask):
                out = np.where(mask, np.asarray(f(np.where(mask, u, s)), dtype=float) + self.offsets[i], out)
        if self.bound < INF:
            out = np.where(u > self.bound, INF, out)
        return out

    def _scalar(self, u):
        if u > self.bound:
            return INF
        i = bisect.bisect_right([s for s, _ in self.segments], u) - 1
        return self.segments[i][1]._scalar(u) + self.offsets[i]

    @property
    def domain_bound(self):
        return self.bound

    def to_dict(self):
        return {
            "family": "piecewise_analytic",
            "segments": [[s, f.to_dict()] for s, f in self.segments],
            "bound": "inf" if self.bound == INF else self.bound,
        }

    def label(self):
        return "PA[" + ";".join(f"{s:g}:{f.label()}" for s, f in self.segments) + "]"


# ---------------------------------------------------------------------------
# module-level API
# ---------------------------------------------------------------------------


def evaluate(f, u):
    """``phi(u)`` as an extended nonnegative real."""
    return f(u)


def right_derivative(f, u):
    return f.derivative(u)


def generalized_inverse(f, y):
    """``inf{u >= 0 : phi(u) >= y}``; ``b_phi`` if never reached below a finite cap."""
    return f.inverse(y)


def critical_constants(f):
    return f.constants()


def n_function_class(f):
    """``(at_zero, at_infinity)``: whether ``phi(u)/u`` tends to 0 at 0+ and to inf at inf."""
    return f.n_function_class()


def check_delta2(f, condition, empirical=False, npoints=DELTA2_GRID_POINTS,
                 ceiling=DELTA2_CEILING):
    """Decide a doubling condition.

    Closed-form families get an exact verdict with an explicit constant.
    Everything else, or any family when ``empirical=True``, is decided on a
    log-spaced grid of ``phi(2u)/phi(u)``.
    """
    condition = Condition(condition)
    if not empirical:
        exact = f._delta2_exact(condition)
        if exact is not None:
            return exact
    return _delta2_empirical(f, condition, npoints, ceiling)


def _delta2_empirical(f, condition, npoints, ceiling):
    cc = f.constants()
    if condition == Condition.DELTA2_ZERO and cc.a > 0 and cc.a >= cc.c:
        raise DegenerateInputError("Delta2^0 undefined: phi vanishes up to a_phi = c_phi")
    lo_all, hi_all = DELTA2_RANGE
    if cc.a > 0:
        lo_all = max(lo_all, cc.a * (1 + 1e-6))
    if cc.b < INF:
        hi_all = min(hi_all, cc.b / 2.0)
    if condition == Condition.DELTA2:
        lo, hi, u0 = lo_all, hi_all, None
    elif condition == Condition.DELTA2_INF:
        lo, hi = max(lo_all, min(max(cc.c, 1.0), hi_all / 10.0)), hi_all
        u0 = lo
    else:
        lo, hi = lo_all, min(max(cc.c, 1.0), hi_all)
        u0 = hi
    grid = (lo, hi, npoints)
    if cc.a > 0 and condition != Condition.DELTA2_INF:
        return GrowthVerdict(condition, Verdict.EMPIRICAL_FAILS, None, None, cc.a,
                             "phi(a_phi) = 0 < phi(2 a_phi)", grid)
    if cc.b < INF and condition != Condition.DELTA2_ZERO:
        return GrowthVerdict(condition, Verdict.EMPIRICAL_FAILS, None, None, 0.75 * cc.b,
                             "phi(2u) = inf while phi(u) < inf", grid)
    u = np.geomspace(lo, hi, npoints)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        num_ = np.asarray(f(2.0 * u), dtype=float)
        den = np.asarray(f(u), dtype=float)
        ratio = np.where(den > 0, num_ / den, INF)
    bad = np.nonzero(~(ratio <= ceiling))[0]
    if len(bad):
        return GrowthVerdict(condition, Verdict.EMPIRICAL_FAILS, None, None, float(u[bad[0]]),
                             f"ratio exceeded {ceiling:g}", grid)
    sup = float(np.max(ratio))
    return GrowthVerdict(condition, Verdict.EMPIRICAL_HOLDS, 1.05 * max(sup, 2.0), u0, None,
                         f"observed sup {sup:.6g}", grid)


def appropriate_condition(m: MeasureDescriptor):
    if m.is_counting:
        return Condition.DELTA2_ZERO
    return Condition.DELTA2_INF if m.is_finite else Condition.DELTA2


def appropriate_delta2(f, m, empirical=False):
    """Delta2 for infinite non-atomic, Delta2^inf for finite non-atomic, Delta2^0 for counting."""
    return check_delta2(f, appropriate_condition(m), empirical=empirical)


# ---------------------------------------------------------------------------
# descriptor schema
# ---------------------------------------------------------------------------

_FIELDS = {
    "power": {"p", "k"},
    "linear": {"k"},
    "exp_minus_one": set(),
    "u_log_u": set(),
    "piecewise_linear": {"points"},
    "piecewise_analytic": {"segments", "bound"},
    "capped": {"inner", "b"},
    "dilated": {"inner", "c"},
    "indicator": {"b"},
    "exp_conjugate": set(),
    "numeric_conjugate": {"primal"},
}


def _num(x, path):
    if x == "inf":
        return INF
    try:
        return float(x)
    except (TypeError, ValueError):
        raise ConstructionError(f"{path}: expected a number, got {x!r}") from None


def from_descriptor(data, path="function"):
    """Build an :class:`OrliczFunction` from its tagged-record form."""
    if isinstance(data, OrliczFunction):
        return data
    if not isinstance(data, dict) or "family" not in data:
        raise ConstructionError(f"{path}: expected an object with a 'family' field")
    fam = data["family"]
    if fam not in _FIELDS:
        raise ConstructionError(f"{path}.family: unknown family {fam!r}")
    extra = set(data) - _FIELDS[fam] - {"family"}
    if extra:
        raise ConstructionError(f"{path}: unknown field(s) {sorted(extra)} for family {fam!r}")
    try:
        if fam == "power":
            return Power(_num(data["p"], f"{path}.p"), _num(data.get("k", 1.0), f"{path}.k"))
        if fam == "linear":
            return Linear(_num(data.get("k", 1.0), f"{path}.k"))
        if fam == "exp_minus_one":
            return ExpMinusOne()
        if fam == "u_log_u":
            return ULogU()
        if fam == "exp_conjugate":
            return ExpConjugate()
        if fam == "indicator":
            return Indicator(_num(data["b"], f"{path}.b"))
        if fam == "piecewise_linear":
            pts = data["points"]
            return PiecewiseLinear(tuple((_num(u, f"{path}.points"), _num(v, f"{path}.points"))
                                         for u, v in pts))
        if fam == "capped":
            return Capped(from_descriptor(data["inner"], f"{path}.inner"), _num(data["b"], f"{path}.b"))
        if fam == "dilated":
            return Dilated(from_descriptor(data["inner"], f"{path}.inner"), _num(data["c"], f"{path}.c"))
        if fam == "piecewise_analytic":
            segs = tuple((_num(s, f"{path}.segments[{i}]"),
                          from_descriptor(d, f"{path}.segments[{i}]"))
                         for i, (s, d) in enumerate(data["segments"]))
            return PiecewiseAnalytic(segs, _num(data.get("bound", "inf"), f"{path}.bound"))
        if fam == "numeric_conjugate":
            from .conjugation import NumericConjugate

            return NumericConjugate(from_descriptor(data["primal"], f"{path}.primal"))
    except KeyError as e:
        raise ConstructionError(f"{path}: missing field {e.args[0]!r}") from None
    raise ConstructionError(f"{path}: unhandled family {fam!r}")  # pragma: no cover
