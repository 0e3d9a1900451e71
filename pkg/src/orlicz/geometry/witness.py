"""Uniformly non-l_1^2 witness points ``x = a chi_A`` and their certificates.

``construct_witness`` picks ``a`` and ``A`` with ``phi(a) mu(A) = 1``.
``challenge_witness`` replays the proof for one unit challenger ``y``: it
picks ``d`` and ``B``, computes ``gamma``, ``sigma``, ``delta`` and the
largest admissible ``epsilon``, and checks the resulting bound
``2 - epsilon / (1 + epsilon)`` against the directly computed
``min(||x + y||, ||x - y||)``.
"""
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import _numeric as num
from ..errors import OrliczError
from ..functions import INF
from ..measures import MeasureDescriptor
from ..spaces import StepFunction, luxemburg_rows
from .lemmas import sigma_bound

EPS0 = 1.0
LEVEL_CEILING = 1e6
REGION_FRACTION = 0.10
BOUND_SLACK = 1e-9
EPSILON_FLOOR = 1e-12
NORMALIZE_RTOL = 1e-13


class DegenerateWitnessWarning(UserWarning):
    """The epsilon search collapsed; the reported bound is the vacuous 2."""


@dataclass(frozen=True)
class Witness:
    f: object
    measure: MeasureDescriptor
    a: float
    mass: float  # mu(A); the number of atoms for the counting measure
    rule: str = ""

    @property
    def atoms(self):
        return int(round(self.mass)) if self.measure.is_counting else None

    def step(self):
        if self.measure.is_counting:
            return StepFunction.sequence([self.a] * self.atoms)
        return StepFunction.nonatomic([(self.a, self.mass)], self.measure)

    def to_dict(self):
        return {"a": self.a, "mass": self.mass, "measure": self.measure.to_dict(),
                "phi": self.f.to_dict(), "rule": self.rule}


def _phi_at_b(f, b):
    return INF if b == INF else f._scalar(b)


def construct_witness(f, m):
    """Witness ``(a, mass)`` or ``None`` when the hypotheses fail.

    Non-atomic measures need ``phi(b_phi) mu(Omega) > 1`` and
    ``d_phi < b_phi``; the counting measure needs ``d_phi < c_phi`` and
    ``phi(c_phi) = 1``.
    """
    k = f.constants()
    if m.is_counting:
        return _counting_witness(f, m, k)
    if not (_phi_at_b(f, k.b) * m.total > 1.0 and k.d < k.b):
        return None
    phi_c = f._scalar(k.c) if k.c < INF else INF
    if k.d < k.c < k.b and 0 < phi_c < INF and 1.0 / phi_c <= m.total:
        a, rule = k.c, "a = c_phi"
    else:
        lo = max(k.d, EPS0)
        hi = min(k.b, LEVEL_CEILING)
        a = math.sqrt(lo * hi)
        if not k.d < a < k.b:
            a = 0.5 * (k.d + k.b) if k.b < INF else k.d + 1.0
        rule = "geometric midpoint of (d_phi, b_phi)"
        if f._scalar(a) * m.total < 1.0:
            a = max(a, f.inverse(1.0 / m.total))
            for _ in range(200):
                if f._scalar(a) * m.total >= 1.0:
                    break
                a = float(np.nextafter(a, INF)) * (1 + 1e-15)
            rule += ", raised so that phi(a) >= 1/mu(Omega)"
        if not (k.d < a < k.b):
            return None
    mass = 1.0 / f._scalar(a)
    return Witness(f, m, float(a), float(min(mass, m.total)), rule)


def _counting_witness(f, m, k):
    if not (k.d < k.c and abs(f._scalar(k.c) - 1.0) <= 1e-12):
        return None
    for n in range(1, 1_000_001):
        a = f.inverse(1.0 / n)
        if a <= k.d:
            return None
        if a <= k.c and a < k.b and abs(f._scalar(a) * n - 1.0) <= 1e-9:
            return Witness(f, m, float(a), float(n), f"smallest m with phi^-1(1/m) in (d_phi, c_phi], m = {n}")
    return None


# -- challenges ------------------------------------------------------------------
@dataclass(frozen=True)
class ChallengeRecord:
    challenger: int
    observed_min: float
    certified_bound: float
    epsilon: float
    sigma: float
    gamma: float
    delta: float
    d: float
    b_mass: float  # mu(A intersect B)
    degenerate: bool = False

    @property
    def certified(self):
        return self.observed_min <= self.certified_bound + BOUND_SLACK and (
            self.certified_bound < 2.0 or self.degenerate)


def _restrict(y, w):
    """``|y|`` on the pieces of ``A``: arrays of values and masses."""
    if w.measure.is_counting:
        n = w.atoms
        v = np.zeros(n)
        take = min(n, len(y.values))
        v[:take] = y.values[:take]
        return np.abs(v), np.ones(n)
    edges = np.cumsum(y.masses)
    starts = edges - y.masses
    cut_hi = np.minimum(edges, w.mass)
    inside = np.clip(cut_hi - starts, 0.0, None)
    vals, masses = np.abs(y.values[inside > 0]), inside[inside > 0]
    covered = masses.sum()
    if covered < w.mass:  # y vanishes on the rest of A
        vals = np.append(vals, 0.0)
        masses = np.append(masses, w.mass - covered)
    return vals, masses


def _choose_d(w, vals, masses, b):
    """Smallest admissible ``d`` whose region ``{|y| <= d} cap A`` holds 10% of A."""
    a = w.a
    base = 2.0 * a + 1.0 if b == INF else a + 0.5 * (b - a)
    cands = np.unique(np.maximum(base, np.concatenate([[base], vals])))
    first_positive = None
    for d in cands:
        if not (a < d < b):
            continue
        region = float(masses[vals <= d].sum())
        if region <= 0:
            continue
        if first_positive is None:
            first_positive = (float(d), region)
        if region >= REGION_FRACTION * w.mass:
            return float(d), region
    if first_positive is not None:
        return first_positive
    # the proof's own schedule
    for j in range(1, 10_000):
        d = (math.floor(2 * a) + j) if b == INF else b - 1.0 / j
        if a < d < b:
            region = float(masses[vals <= d].sum())
            if region > 0:
                return float(d), region
    raise OrliczError("no admissible d: the challenger is not a unit vector")


def _largest_epsilon(f, w, delta, d):
    def ok(eps):
        t = (1.0 + eps) * w.a
        return t < d and f._scalar(t) * w.mass <= 1.0 + delta

    if ok(1.0):
        return 1.0
    lo, _ = num.bisect_predicate(ok, 0.0, 1.0, rtol=0.0, atol=1e-15)
    return lo


def challenge_witness(f, w, y, observed_min=None, sigma_cache=None, challenger=0):
    """Certified bound for one unit challenger ``y``.

    ``observed_min`` may be supplied when the two norms were computed in a
    batch; otherwise it is computed here.
    """
    if observed_min is None:
        x = w.step()
        rows = [x + y, x - y]
        n = max(len(r.values) for r in rows)
        vals = np.zeros((2, n))
        ms = np.zeros((2, n))
        for i, r in enumerate(rows):
            vals[i, :len(r.values)] = r.values
            ms[i, :len(r.masses)] = r.masses
        observed_min = float(luxemburg_rows(f, vals, ms, rtol=NORMALIZE_RTOL).min())
    b = f.constants().b
    vals, masses = _restrict(y, w)
    d, region = _choose_d(w, vals, masses, b)
    phi_a = f._scalar(w.a)
    gamma = max(0.0, phi_a * (w.mass - region))
    if sigma_cache is not None and d in sigma_cache:
        sigma = sigma_cache[d]
    else:
        sigma = sigma_bound(f, (w.a, d))
        if sigma_cache is not None:
            sigma_cache[d] = sigma
    delta = (1.0 - sigma) * (1.0 - gamma) / 4.0
    eps = _largest_epsilon(f, w, delta, d)
    degenerate = eps < EPSILON_FLOOR
    if degenerate:
        warnings.warn("epsilon search collapsed; bound reported as 2", DegenerateWitnessWarning)
        bound = 2.0
    else:
        bound = 2.0 - eps / (1.0 + eps)
    return ChallengeRecord(challenger, observed_min, bound, eps, sigma, gamma, delta, d,
                           region, degenerate)


@dataclass(frozen=True)
class WitnessCertificate:
    a: float
    mass: float
    measure: MeasureDescriptor
    per_challenger: tuple = field(default_factory=tuple)

    @property
    def violations(self):
        return sum(1 for r in self.per_challenger if not r.certified)

    @property
    def max_bound(self):
        return max((r.certified_bound for r in self.per_challenger), default=float("nan"))

    def to_dict(self, records=True):
        out = {"a": self.a, "mass": self.mass, "measure": self.measure.to_dict(),
               "challengers": len(self.per_challenger), "violations": self.violations,
               "max_certified_bound": self.max_bound}
        if records:
            out["per_challenger"] = [asdict(r) for r in self.per_challenger]
        return out


def _pad_rows(funcs):
    n = max(len(s.values) for s in funcs)
    vals = np.zeros((len(funcs), n))
    ms = np.zeros((len(funcs), n))
    for i, s in enumerate(funcs):
        vals[i, :len(s.values)] = s.values
        ms[i, :len(s.masses)] = s.masses
    return vals, ms


def normalize(f, funcs):
    """Scale each step function to unit Luxemburg norm (zero functions are dropped)."""
    funcs = [s for s in funcs if not s.is_zero]
    if not funcs:
        return []
    vals, ms = _pad_rows(funcs)
    norms = luxemburg_rows(f, vals, ms, rtol=NORMALIZE_RTOL)
    return [s / n for s, n in zip(funcs, norms)]


def special_challengers(w):
    """Deterministic challengers: ``+-x`` and a unit bump disjoint from ``A``."""
    f, m = w.f, w.measure
    x = w.step()
    out = [x, -x]
    c = f.constants().c
    if m.is_counting:
        out.append(StepFunction.sequence([0.0] * w.atoms + [c]))
    else:
        phi_c = f._scalar(c)
        if 0 < phi_c < INF and w.mass + 1.0 / phi_c <= m.total:
            out.append(_disjoint_bump(w, c, 1.0 / phi_c))
    return out


def _disjoint_bump(w, value, mass):
    # zero on A, then ``value`` on the next ``mass`` units
    return StepFunction(w.measure, np.array([0.0, value]), np.array([w.mass, mass]))


def random_challengers(w, count, rng, max_levels=6):
    """Random step functions near ``A`` (unnormalized)."""
    m = w.measure
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_levels + 1))
        scale = 10.0 ** rng.uniform(-1, 1)
        vals = rng.normal(size=k) * scale
        if m.is_counting:
            n = int(rng.integers(1, 9))
            seq = np.zeros(n)
            idx = rng.choice(n, size=min(k, n), replace=False)
            seq[idx] = vals[:len(idx)]
            out.append(StepFunction.sequence(seq))
        else:
            span = w.mass * rng.uniform(0.2, 2.0)
            if m.is_finite:
                span = min(span, m.total)
            masses = rng.dirichlet(np.ones(k)) * span
            keep = masses > 0
            out.append(StepFunction(m, vals[keep], masses[keep]))
    return out


def certify_witness(f, w, count, seed, challengers=None, include_special=True):
    """Challenge ``w`` with ``count`` random unit step functions (plus the specials)."""
    rng = np.random.default_rng(seed)
    raw = (special_challengers(w) if include_special else []) + random_challengers(w, count, rng)
    if challengers is not None:
        raw = list(challengers) + raw
    ys = normalize(f, raw)
    x = w.step()
    sums = [x + y for y in ys] + [x - y for y in ys]
    vals, ms = _pad_rows(sums)
    norms = luxemburg_rows(f, vals, ms, rtol=NORMALIZE_RTOL)
    n = len(ys)
    observed = np.minimum(norms[:n], norms[n:])
    cache = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateWitnessWarning)
        records = tuple(challenge_witness(f, w, y, float(o), cache, i)
                        for i, (y, o) in enumerate(zip(ys, observed)))
    return WitnessCertificate(w.a, w.mass, w.measure, records)


__all__ = [
    "ChallengeRecord",
    "DegenerateWitnessWarning",
    "Witness",
    "WitnessCertificate",
    "certify_witness",
    "challenge_witness",
    "construct_witness",
    "normalize",
    "random_challengers",
    "special_challengers",
]
