"""Desk-scale Orlicz spaces: step functions, the modular and the two norms.

A :class:`StepFunction` over ``NonAtomic(total)`` is a list of ``(value, mass)``
levels laid out consecutively on ``[0, total)``; over ``Counting`` it is a
finite sequence. Both share one modular kernel, so every norm below works on
either kind.

>>> x = StepFunction.nonatomic([(2.0, 0.25)])
>>> round(luxemburg_norm(Power(2.0), x), 12)
1.0
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _numeric as num
from .conjugation import conjugate
from .errors import ConstructionError, DomainError, NotInSpaceError, PreconditionError
from .functions import INF, Power  # noqa: F401  (Power is used in the doctest)
from .measures import Counting, MeasureDescriptor, NonAtomic

# tighter than 1e-10 so that the absolute 1e-8 sandwich slack survives norms in the hundreds
LUX_RTOL = 1e-13
AMEMIYA_TOL = 1e-10
AMEMIYA_CEILING = 2.0 ** 40
DUAL_BUDGET = 200
GAP_TOLERANCE = 1e-4
MODULAR_RTOL = 1e-9

_MAX_DOUBLINGS = 2100


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Finitely-valued function with support of finite measure.

    ``values`` and ``masses`` are parallel float arrays in layout order. For
    the counting measure every mass is 1 and zero entries are kept, so that
    coordinates line up under addition.
    """

    measure: MeasureDescriptor
    values: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).reshape(-1)
        m = np.asarray(self.masses, dtype=float).reshape(-1)
        if v.shape != m.shape:
            raise ConstructionError("values and masses must have the same length")
        if not np.all(np.isfinite(v)):
            raise ConstructionError("level values must be finite")
        if self.measure.is_counting:
            if not np.all(m == 1.0):
                raise ConstructionError("counting-measure atoms carry mass 1")
        else:
            if not np.all(m > 0) or not np.all(np.isfinite(m)):
                raise ConstructionError("masses must be positive and finite")
            if m.sum() > self.measure.total * (1 + 1e-12):
                raise ConstructionError(
                    f"total mass {m.sum():g} exceeds the measure's total {self.measure.total:g}")
        v.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "masses", m)

    # -- constructors -----------------------------------------------------
    @classmethod
    def nonatomic(cls, levels, measure=None):
        measure = NonAtomic() if measure is None else measure
        if measure.is_counting:
            raise ConstructionError("use StepFunction.sequence for the counting measure")
        levels = list(levels)
        if not levels:
            return cls(measure, np.zeros(0), np.zeros(0))
        arr = np.asarray(levels, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ConstructionError("levels must be (value, mass) pairs")
        return cls(measure, arr[:, 0], arr[:, 1])

    @classmethod
    def sequence(cls, values):
        v = np.asarray(values, dtype=float).reshape(-1)
        return cls(Counting(), v, np.ones_like(v))

    @classmethod
    def indicator(cls, value, mass, measure=None):
        return cls.nonatomic([(value, mass)], measure)

    # -- views --------------------------------------------------------------
    @property
    def is_zero(self):
        return not np.any(self.values != 0.0)

    @property
    def support_mass(self):
        return float(self.masses[self.values != 0.0].sum())

    def canonical(self):
        """Levels merged by value, sorted by ``|value|`` descending, zeros dropped."""
        merged = {}
        for v, m in zip(self.values.tolist(), self.masses.tolist()):
            if v != 0.0:
                merged[v] = merged.get(v, 0.0) + m
        return tuple(sorted(merged.items(), key=lambda vm: (-abs(vm[0]), -vm[0])))

    def l1(self):
        return float(np.sum(np.abs(self.values) * self.masses))

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        if self.measure != other.measure:
            return False
        if self.measure.is_counting:
            n = max(len(self.values), len(other.values))
            return np.array_equal(_pad(self.values, n), _pad(other.values, n))
        return (self - other).is_zero

    def __hash__(self):
        return hash((self.measure, self.canonical()))

    def __repr__(self):
        if self.measure.is_counting:
            return f"StepFunction.sequence({self.values.tolist()})"
        pairs = list(zip(self.values.tolist(), self.masses.tolist()))
        return f"StepFunction.nonatomic({pairs}, {self.measure})"

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self):
        return StepFunction(self.measure, -self.values, self.masses)

    def __mul__(self, c):
        c = float(c)
        return StepFunction(self.measure, c * self.values, self.masses)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / float(c))

    def __abs__(self):
        return StepFunction(self.measure, np.abs(self.values), self.masses)

    def __add__(self, other):
        return _combine(self, other, 1.0)

    def __sub__(self, other):
        return _combine(self, other, -1.0)

    # -- serialization ------------------------------------------------------
    def to_dict(self):
        if self.measure.is_counting:
            return {"measure": self.measure.to_dict(), "values": self.values.tolist()}
        return {"measure": self.measure.to_dict(),
                "levels": [[v, m] for v, m in zip(self.values.tolist(), self.masses.tolist())]}

    @classmethod
    def from_dict(cls, data, path="step_function"):
        if not isinstance(data, dict):
            raise ConstructionError(f"{path}: expected an object")
        data = dict(data)
        try:
            measure = MeasureDescriptor.from_dict(data.pop("measure", {"kind": "nonatomic"}))
        except ConstructionError as exc:
            raise ConstructionError(f"{path}.{exc}") from None
        if measure.is_counting:
            values = data.pop("values", None)
            if values is None:
                raise ConstructionError(f"{path}.values: required for the counting measure")
            if data:
                raise ConstructionError(f"{path}: unknown fields {sorted(data)}")
            return cls.sequence(values)
        levels = data.pop("levels", None)
        if levels is None:
            raise ConstructionError(f"{path}.levels: required for a non-atomic measure")
        if data:
            raise ConstructionError(f"{path}: unknown fields {sorted(data)}")
        for i, lv in enumerate(levels):
            if not isinstance(lv, (list, tuple)) or len(lv) != 2:
                raise ConstructionError(f"{path}.levels[{i}]: expected [value, mass]")
        return cls.nonatomic(levels, measure)


def _pad(v, n):
    return np.concatenate([v, np.zeros(n - len(v))])


def _combine(x, y, sign):
    if not isinstance(y, StepFunction):
        return NotImplemented
    if x.measure != y.measure:
        raise ConstructionError("step functions live on different measures")
    if x.measure.is_counting:
        n = max(len(x.values), len(y.values))
        return StepFunction.sequence(_pad(x.values, n) + sign * _pad(y.values, n))
    # common refinement of the two consecutive layouts
    ex, ey = np.cumsum(x.masses), np.cumsum(y.masses)
    edges = np.union1d(ex, ey)
    starts = np.concatenate([[0.0], edges[:-1]])
    widths = edges - starts
    keep = widths > 0
    starts, edges, widths = starts[keep], edges[keep], widths[keep]
    mid = 0.5 * (starts + edges)
    vx = _value_at(x.values, ex, mid)
    vy = _value_at(y.values, ey, mid)
    return StepFunction(x.measure, vx + sign * vy, widths)


def _value_at(values, edges, points):
    idx = np.searchsorted(edges, points, side="right")
    out = np.zeros_like(points)
    inside = idx < len(values)
    out[inside] = values[idx[inside]]
    return out


# -- modular ----------------------------------------------------------------
def _raw(f, arr):
    """``f`` on a validated nonnegative array, skipping the public checks."""
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.asarray(f._eval(arr), dtype=float)
    return np.where(np.isnan(out), INF, out)


def _modular_arrays(f, absv, masses):
    """Row-wise modular of ``|values|`` with the convention ``0 * inf = 0``."""
    phi = _raw(f, np.asarray(absv, dtype=float))
    terms = np.where(masses > 0, phi * np.where(masses > 0, masses, 1.0), 0.0)
    return terms.sum(axis=-1)


def modular(f, x):
    """``I_phi(x) = sum phi(|v_i|) m_i``; ``inf`` as soon as one term is."""
    if len(x.values) == 0:
        return 0.0
    return float(_modular_arrays(f, np.abs(x.values), x.masses))


# -- Luxemburg norm ----------------------------------------------------------
def _initial_upper(f, absv, masses):
    total = masses.sum(axis=-1)
    top = absv.max(axis=-1)
    out = np.empty_like(top)
    for i, (t, mtot) in enumerate(zip(top.tolist(), total.tolist())):
        if t == 0.0:
            out[i] = 1.0
            continue
        inv = f.inverse(1.0 / mtot) if mtot > 0 else INF
        out[i] = t / inv if 0.0 < inv < INF else t
    return out


def luxemburg_rows(f, values, masses, rtol=LUX_RTOL):
    """Luxemburg norms of many step functions at once.

    ``values`` and ``masses`` are 2-D arrays of equal shape; pad unused slots
    with mass 0. Bisection runs on all rows in lockstep and returns the left
    endpoint of each final bracket, so the result never exceeds the true gauge.
    """
    absv = np.abs(np.asarray(values, dtype=float))
    masses = np.asarray(masses, dtype=float)
    if absv.ndim == 1:
        absv, masses = absv[None, :], masses[None, :]
    absv = np.where(masses > 0, absv, 0.0)
    n = absv.shape[0]
    result = np.zeros(n)
    live = np.any(absv > 0, axis=1)
    if not np.any(live):
        return result
    av, ms = absv[live], masses[live]
    # scale each row to max 1 so the bracket cannot underflow on subnormal levels
    scale = av.max(axis=1)
    av = av / scale[:, None]

    def feasible(eps, rows=slice(None)):
        return _modular_arrays(f, av[rows] / eps[:, None], ms[rows]) <= 1.0

    hi = _initial_upper(f, av, ms)
    ok = feasible(hi)
    for _ in range(_MAX_DOUBLINGS):
        if ok.all():
            break
        bad = ~ok
        with np.errstate(over="ignore"):
            hi[bad] *= 2.0
        ok[bad] = feasible(hi[bad], bad)
    else:
        raise NotInSpaceError("modular is infinite for every scaling")
    lo = 0.5 * hi
    ok = feasible(lo)
    for _ in range(_MAX_DOUBLINGS):
        if not ok.any():
            break
        hi[ok] = lo[ok]
        lo[ok] *= 0.5
        ok[ok] = feasible(lo[ok], ok)
    else:
        raise NotInSpaceError("modular stays below 1 for every scaling")
    for _ in range(400):
        open_ = hi - lo > rtol * hi
        if not open_.any():
            break
        mid = 0.5 * (lo + hi)
        fz = feasible(mid)
        hi = np.where(open_ & fz, mid, hi)
        lo = np.where(open_ & ~fz, mid, lo)
    result[live] = lo * scale
    return result


def luxemburg_norm(f, x, rtol=LUX_RTOL):
    """``inf{eps > 0: I_phi(x / eps) <= 1}``; 0 for the zero function."""
    if x.is_zero:
        return 0.0
    return float(luxemburg_rows(f, x.values[None, :], x.masses[None, :], rtol)[0])


def sequence_norm(f, vec, rtol=LUX_RTOL):
    """Luxemburg norm of a vector of ``l_phi^n`` (counting measure on n points)."""
    vec = np.asarray(vec, dtype=float)
    return float(luxemburg_rows(f, vec[None, :], np.ones((1, vec.size)), rtol)[0])


# -- Amemiya norm --------------------------------------------------------------
@dataclass(frozen=True)
class AmemiyaResult:
    value: float
    k: float
    attained: bool


def amemiya_minimize(f, x, tol=AMEMIYA_TOL, ceiling=AMEMIYA_CEILING, lux=None):
    """Minimize ``h(k) = (1 + I_phi(k x)) / k`` over ``k > 0``.

    Golden-section search on ``log k`` after a doubling bracket around
    ``1 / ||x||``. If ``h`` is still decreasing at ``ceiling`` times that
    scale the infimum is not attained; the limit of ``h`` is then extrapolated
    from its ``L + C/k`` tail as ``2 h(2K) - h(K)``. A known Luxemburg norm
    may be passed as ``lux`` to skip recomputing it.
    """
    if x.is_zero:
        return AmemiyaResult(0.0, INF, False)
    lux = luxemburg_norm(f, x) if lux is None else lux
    absv, ms = np.abs(x.values), x.masses

    def h(t):
        k = math.exp(t)
        mod = float(_modular_arrays(f, k * absv, ms))
        return (1.0 + mod) / k if mod < INF else INF

    c = -math.log(lux)
    hc = h(c)
    t_max = c + math.log(ceiling)
    step = 1.0
    # move left while decreasing (h -> inf as k -> 0, so this stops)
    while h(c - step) < hc:
        c -= step
        hc = h(c)
        step *= 2.0
    lo = c - step
    step = 1.0
    while True:
        nxt = c + step
        if nxt >= t_max:
            hn = h(t_max)
            if hn < hc:
                tail = 2.0 * h(t_max + math.log(2.0)) - hn
                value = min(hn, max(tail, lux))
                return AmemiyaResult(value, INF, False)
            hi = t_max
            break
        hn = h(nxt)
        if hn < hc:
            lo = c
            c, hc = nxt, hn
            step *= 2.0
        else:
            hi = nxt
            break
    t, val = num.golden_min(h, lo, hi, tol=tol)
    # h(1/||x||) <= 2 ||x|| is always available as a candidate
    if val > hc:
        t, val = c, hc
    return AmemiyaResult(val, math.exp(t), True)


def amemiya_norm(f, x, tol=AMEMIYA_TOL):
    """Orlicz norm in Amemiya form ``inf_k (1 + I_phi(k x)) / k``."""
    return amemiya_minimize(f, x, tol).value


# -- Orlicz norm via the dual supremum --------------------------------------
def _argmax_rows(conj, weights, lam, top, rtol=1e-11):
    """Per-coordinate argmax of ``w g - lam conj(g)`` on ``[0, top]`` (vectorized golden)."""
    def G(g):
        vals = _raw(conj, g)
        return np.where(np.isinf(vals), -INF, weights * g - lam * vals)

    a = np.zeros_like(weights)
    b = top.copy()
    c = b - num.INV_PHI * (b - a)
    d = a + num.INV_PHI * (b - a)
    gc, gd = G(c), G(d)
    for _ in range(200):
        if np.all(b - a <= rtol * np.maximum(1.0, b)):
            break
        left = gc >= gd
        # keep [a, d] when the left probe wins, else [c, b]; one new probe per row
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new = np.where(left, b - num.INV_PHI * (b - a), a + num.INV_PHI * (b - a))
        g_new = G(new)
        c, d, gc, gd = (np.where(left, new, d), np.where(left, c, new),
                        np.where(left, g_new, gd), np.where(left, gc, g_new))
    g = np.where(gc >= gd, c, d)
    best = np.maximum(gc, gd)
    for end in (np.zeros_like(top), top):
        g_end = G(end)
        better = g_end > best
        g = np.where(better, end, g)
        best = np.where(better, g_end, best)
    return g


def _g_bracket(conj, weights, lam):
    b = conj.domain_bound
    if b < INF:
        return np.full_like(weights, b)
    top = np.ones_like(weights)
    for _ in range(_MAX_DOUBLINGS):
        vals_hi = np.asarray(conj(2.0 * top), dtype=float)
        vals_lo = np.asarray(conj(top), dtype=float)
        grow = weights * 2.0 * top - lam * vals_hi >= weights * top - lam * vals_lo
        grow &= np.isfinite(vals_hi) & (top < 2.0 ** 1000)
        if not grow.any():
            break
        top = np.where(grow, 2.0 * top, top)
    return 2.0 * top


def orlicz_norm_dual(f, x, budget=DUAL_BUDGET, conj=None):
    """Lower bound for ``sup{ sum |v_i| g_i m_i : sum conj(g_i) m_i <= 1 }``.

    For a multiplier ``lam`` each dual level solves a scalar concave problem;
    ``lam`` is bisected on the budget constraint and the two final iterates are
    mixed so the constraint holds with equality. Only ``phi_*`` is evaluated.
    """
    if x.is_zero:
        return 0.0
    if conj is None:
        conj = conjugate(f).conjugate
    keep = x.values != 0.0
    w = np.abs(x.values[keep])
    m = x.masses[keep]

    def solve(lam):
        g = _argmax_rows(conj, w, lam, _g_bracket(conj, w, lam))
        cost = float(np.sum(np.asarray(conj(g), dtype=float) * m))
        return g, cost

    if conj.domain_bound < INF:
        # lam -> 0 limit: every level at the end of the conjugate's domain
        g_top = np.full_like(w, conj.domain_bound)
        if float(np.sum(np.asarray(conj(g_top), dtype=float) * m)) <= 1.0:
            return float(np.sum(w * g_top * m))
    lam_hi = 1.0
    g_hi, c_hi = solve(lam_hi)
    while c_hi > 1.0:
        lam_hi *= 2.0
        g_hi, c_hi = solve(lam_hi)
    lam_lo = lam_hi / 2.0
    g_lo, c_lo = solve(lam_lo)
    while c_lo <= 1.0 and lam_lo > 1e-150:
        lam_hi, g_hi, c_hi = lam_lo, g_lo, c_lo
        lam_lo /= 2.0
        g_lo, c_lo = solve(lam_lo)
    if c_lo <= 1.0:
        return float(np.sum(w * g_lo * m))
    for _ in range(budget):
        if lam_hi - lam_lo <= 1e-11 * lam_hi:
            break
        mid = 0.5 * (lam_lo + lam_hi)
        g_mid, c_mid = solve(mid)
        if c_mid <= 1.0:
            lam_hi, g_hi, c_hi = mid, g_mid, c_mid
        else:
            lam_lo, g_lo, c_lo = mid, g_mid, c_mid
    pay_hi = float(np.sum(w * g_hi * m))
    if c_lo == INF:
        return pay_hi
    theta = (1.0 - c_hi) / (c_lo - c_hi)  # convexity keeps the mix feasible
    g = theta * g_lo + (1.0 - theta) * g_hi
    cost = float(np.sum(np.asarray(conj(g), dtype=float) * m))
    pay = float(np.sum(w * g * m))
    return max(pay, pay_hi) if cost <= 1.0 + 1e-12 else pay_hi


# -- reports and derived quantities -----------------------------------------
@dataclass(frozen=True)
class NormReport:
    luxemburg: float
    amemiya: float
    orlicz_sup: float
    duality_gap: float
    amemiya_attained: bool = True
    tolerances: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "luxemburg": self.luxemburg,
            "amemiya": self.amemiya,
            "orlicz_sup": self.orlicz_sup,
            "duality_gap": self.duality_gap,
            "amemiya_attained": self.amemiya_attained,
            **{f"tol_{k}": v for k, v in self.tolerances.items()},
        }


def norm_report(f, x, budget=DUAL_BUDGET):
    lux = luxemburg_norm(f, x)
    am = amemiya_minimize(f, x, lux=lux)
    dual = orlicz_norm_dual(f, x, budget)
    return NormReport(
        lux, am.value, dual, abs(am.value - dual), am.attained or x.is_zero,
        {"luxemburg_rtol": LUX_RTOL, "amemiya_tol": AMEMIYA_TOL,
         "duality_gap": GAP_TOLERANCE, "modular_rtol": MODULAR_RTOL, "dual_budget": budget},
    )


def fundamental_function(f, t):
    """``||chi_A||`` for ``mu(A) = t`` in closed form: ``1 / phi^{-1}(1/t)``."""
    if not t > 0:
        raise DomainError("fundamental function needs t > 0")
    inv = f.inverse(1.0 / t)
    if inv == 0.0:
        return INF
    return 1.0 / inv


@dataclass(frozen=True)
class L1Constants:
    """``M ||x||_1 <= ||x||_phi <= K ||x||_1`` for x supported in mass ``<= A_mass``."""

    M: float
    K: float
    A_mass: float
    u0: float


def l1_equivalence_constants(f, m):
    """Equivalence constants with ``L_1`` on small sets, or ``None`` when not applicable.

    Only functions that are not N-functions at infinity qualify. ``u0 = c_phi``
    (so ``phi(u0) = 1``), ``M = phi(u0) / u0`` bounds ``phi(u)/u`` from below
    past ``u0``, and ``K`` is the asymptotic slope.
    """
    if m.is_counting:
        raise PreconditionError("L1 equivalence is stated for non-atomic measures")
    if not f.is_finite:
        raise PreconditionError("L1 equivalence needs a finite phi")
    if f.n_function_class()[1]:
        return None
    u0 = f.constants().c
    phi_u0 = f._scalar(u0)
    M = phi_u0 / u0
    K = f.asymptotic_slope()
    return L1Constants(M, K, min(m.total, 1.0 / (M * u0)), u0)


__all__ = [
    "AmemiyaResult",
    "L1Constants",
    "NormReport",
    "StepFunction",
    "amemiya_minimize",
    "amemiya_norm",
    "fundamental_function",
    "l1_equivalence_constants",
    "luxemburg_norm",
    "luxemburg_rows",
    "modular",
    "norm_report",
    "orlicz_norm_dual",
    "sequence_norm",
]
