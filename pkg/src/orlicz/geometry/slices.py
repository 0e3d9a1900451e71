"""Slices of finite-dimensional ``l_phi^n`` balls and the non-l_1^2 gap.

Everything here is a sampler: diameters are lower bounds and gaps are upper
bounds (over-estimates of the true delta), both deterministic given a seed.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ConstructionError, DomainError
from .sequence import SequenceSpace

SLICE_OF_BALL = "slice_of_ball"
WEAK_STAR_SLICE = "weak_star_slice"
SIDES = (SLICE_OF_BALL, WEAK_STAR_SLICE)

INTERIOR = 1.0 - 1e-9  # radial shrink that keeps sampled points strictly inside the ball
ASCENT_STEP = 0.05
ASCENT_STEPS = 200
RESTART_UNIT = 1000
MAX_DIMENSION = 64


@dataclass(frozen=True)
class SliceSpec:
    """``S(functional, epsilon)`` in ``l_phi^n`` (or in its dual ball for weak*-slices)."""

    dimension: int
    functional: tuple
    epsilon: float
    side: str = SLICE_OF_BALL

    def __post_init__(self):
        fun = tuple(float(v) for v in np.asarray(self.functional, dtype=float).reshape(-1))
        object.__setattr__(self, "functional", fun)
        if len(fun) != self.dimension:
            raise ConstructionError("functional length must equal the dimension")
        if not 0 < self.epsilon < 1:
            raise ConstructionError("epsilon must lie in (0, 1)")
        if self.side not in SIDES:
            raise ConstructionError(f"side must be one of {SIDES}")

    def validate(self, f, tol=1e-8):
        norm = SequenceSpace(f).functional_norm(self.side)(np.array([self.functional]))[0]
        if abs(norm - 1.0) > tol:
            raise ConstructionError(f"slicing functional has norm {norm:.12g}, expected 1")

    def to_dict(self):
        return {"dimension": self.dimension, "functional": list(self.functional),
                "epsilon": self.epsilon, "side": self.side}


def _members(space, s, pts):
    pts = np.atleast_2d(pts)
    norms = space.ball_norm(s.side)(pts)
    pairing = pts @ np.asarray(s.functional)
    return (norms <= 1.0) & (pairing > 1.0 - s.epsilon)


def slice_membership(f, s, point):
    """``||point|| <= 1`` (primal or dual ball per ``s.side``) and pairing above ``1 - epsilon``."""
    point = np.asarray(point, dtype=float).reshape(-1)
    if point.size != s.dimension:
        raise DomainError("point dimension does not match the slice")
    return bool(_members(SequenceSpace(f), s, point)[0])


@dataclass(frozen=True)
class DiameterEstimate:
    lower_bound: float
    samples_used: int
    best_pair: Optional[tuple] = None
    empty: bool = False

    def to_dict(self):
        return {"lower_bound": self.lower_bound, "samples_used": self.samples_used,
                "best_pair": None if self.best_pair is None else [list(map(float, p)) for p in self.best_pair],
                "empty": self.empty}


def _to_ball(norm, pts):
    n = norm(pts)
    scale = np.where(n > 0, INTERIOR / np.maximum(n, 1e-300), 1.0)
    return pts * np.minimum(scale, 1.0)[:, None]


def _anchor(space, s):
    """A point of the ball with large pairing: the normalized functional or its sign pattern."""
    norm = space.ball_norm(s.side)
    fun = np.asarray(s.functional)
    cands = np.stack([fun, np.sign(fun), (np.abs(fun) == np.abs(fun).max()) * np.sign(fun)])
    cands = cands / np.maximum(norm(cands), 1e-300)[:, None] * INTERIOR
    return cands[int(np.argmax(cands @ fun))]


def slice_diameter_lower_bound(f, s, budget=20_000, seed=0):
    """Lower bound on ``diam S`` by sampling plus coordinate ascent on pairs.

    Candidates are the anchor point perturbed along Gaussian directions with
    log-uniform radii, pulled radially into the ball and kept when they lie
    in the slice. The best pairs are then pushed apart one coordinate at a
    time, rejecting moves that leave the slice.
    """
    if s.dimension > MAX_DIMENSION:
        raise DomainError(f"dimension above {MAX_DIMENSION}")
    space = SequenceSpace(f)
    norm = space.ball_norm(s.side)
    rng = np.random.default_rng(seed)
    n = s.dimension
    x0 = _anchor(space, s)
    z = rng.normal(size=(budget, n))
    z /= np.linalg.norm(z, axis=1)[:, None]
    r = 10.0 ** rng.uniform(-3, np.log10(2.0), size=budget)
    pts = _to_ball(norm, x0 + r[:, None] * z)
    # sign patterns agreeing with the functional's dominant coordinate reach the ball's vertices
    signs = rng.choice([-1.0, 1.0], size=(min(budget, 64 * n), n))
    top = int(np.argmax(np.abs(s.functional)))
    signs[:, top] = np.sign(s.functional[top])
    pts = np.vstack([_to_ball(norm, signs), pts])
    keep = _members(space, s, pts)
    pts = pts[keep]
    if _members(space, s, x0)[0]:
        pts = np.vstack([x0, pts])
    if len(pts) == 0:
        return DiameterEstimate(0.0, budget, None, True)
    # best pairs among a bounded pool
    pool = pts[:min(len(pts), 400)]
    diffs = (pool[:, None, :] - pool[None, :, :]).reshape(-1, n)
    dist = norm(diffs).reshape(len(pool), len(pool))
    order = np.argsort(dist, axis=None)[::-1]
    restarts = max(1, budget // RESTART_UNIT)
    best = (0.0, pool[0], pool[0])
    seen = set()
    starts = []
    for flat in order:
        i, j = divmod(int(flat), len(pool))
        if i == j or (j, i) in seen:
            continue
        seen.add((i, j))
        starts.append((pool[i].copy(), pool[j].copy()))
        if len(starts) >= restarts:
            break
    if not starts:
        starts = [(pool[0].copy(), pool[0].copy())]
    for p, q in starts:
        dcur = float(norm(p - q)[0])
        step = ASCENT_STEP
        for _ in range(ASCENT_STEPS):
            which = rng.integers(2)
            i = rng.integers(n)
            sign = 1.0 if rng.random() < 0.5 else -1.0
            moved = (p if which == 0 else q).copy()
            moved[i] += sign * step
            moved = _to_ball(norm, moved[None, :])[0]
            if not _members(space, s, moved)[0]:
                step *= 0.5
                continue
            trial = float(norm((moved - q) if which == 0 else (p - moved))[0])
            if trial > dcur:
                if which == 0:
                    p = moved
                else:
                    q = moved
                dcur = trial
            else:
                step *= 0.5
            if step < 1e-12:
                step = ASCENT_STEP
        if dcur > best[0]:
            best = (dcur, p, q)
    return DiameterEstimate(float(best[0]), budget, (tuple(best[1]), tuple(best[2])), False)


def explicit_pair_diameter(f, s, p, q):
    """Distance of a user-supplied pair after checking both lie in the slice."""
    space = SequenceSpace(f)
    pts = np.array([p, q], dtype=float)
    if not _members(space, s, pts).all():
        raise DomainError("explicit pair is not inside the slice")
    dist = float(space.ball_norm(s.side)((pts[0] - pts[1])[None, :])[0])
    return DiameterEstimate(dist, 0, (tuple(pts[0]), tuple(pts[1])), False)


# -- uniformly non-l_1^2 gap ------------------------------------------------------
@dataclass(frozen=True)
class GapEstimate:
    gap: float
    best_y: tuple
    evaluations: int
    exhaustive: bool = False

    def to_dict(self):
        return {"gap": self.gap, "best_y": list(self.best_y), "evaluations": self.evaluations,
                "exhaustive": self.exhaustive}


def _sphere_grid(n, step):
    """Cube-surface grid radially projected later; points with one coordinate at +-1."""
    ticks = np.arange(-1.0, 1.0 + step / 2, step)
    mesh = np.stack(np.meshgrid(*([ticks] * (n - 1)), indexing="ij"), -1).reshape(-1, n - 1)
    faces = []
    for k in range(n):
        for sgn in (-1.0, 1.0):
            face = np.insert(mesh, k, sgn, axis=1)
            faces.append(face)
    return np.vstack(faces)


def uniformly_non_l12_estimate(f, x, n=None, budget=5000, seed=0, exhaustive=None, grid_step=1e-2):
    """``2 - sup_y min(||x + y||, ||x - y||)`` over sampled unit ``y``.

    The supremum is under-sampled, so the gap is an over-estimate of the true
    delta. Restarts start from the basis vectors and Gaussian directions and
    climb by coordinate moves (including zeroing a coordinate). For ``n <= 3``
    the exhaustive mode scans a cube-surface grid instead.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size if n is None else n
    if x.size != n:
        raise DomainError("x must have length n")
    space = SequenceSpace(f)
    norm = space.norm
    if abs(norm(x[None, :])[0] - 1.0) > 1e-8:
        raise DomainError("x must have unit norm")

    def score(ys):
        ys = ys / norm(ys)[:, None]
        return np.minimum(norm(x + ys), norm(x - ys)), ys

    if exhaustive is None:
        exhaustive = n <= 3 and budget >= 10_000
    if exhaustive:
        if n > 3:
            raise DomainError("exhaustive mode is limited to n <= 3")
        grid = _sphere_grid(n, grid_step)
        vals, ys = score(grid)
        i = int(np.argmax(vals))
        return GapEstimate(float(2.0 - vals[i]), tuple(ys[i]), len(grid), True)
    rng = np.random.default_rng(seed)
    eye = np.eye(n)
    starts = np.vstack([eye, -eye, rng.normal(size=(max(1, budget // 500), n))])
    vals, ys = score(starts)
    evals = len(starts)
    best_v, best_y = float(vals.max()), ys[int(np.argmax(vals))]
    steps_per = max(1, (budget - evals) // (len(starts) * 3))
    for y0, v0 in zip(ys, vals):
        y, v, step = y0.copy(), float(v0), 0.25
        for _ in range(steps_per):
            i = rng.integers(n)
            moves = np.repeat(y[None, :], 3, axis=0)
            moves[0, i] += step
            moves[1, i] -= step
            moves[2, i] = 0.0
            ok = np.linalg.norm(moves, axis=1) > 0
            mv, my = score(moves[ok])
            evals += int(ok.sum())
            j = int(np.argmax(mv))
            if mv[j] > v:
                y, v = my[j], float(mv[j])
            else:
                step *= 0.5
                if step < 1e-9:
                    step = 0.25
        if v > best_v:
            best_v, best_y = v, y
    return GapEstimate(float(max(0.0, 2.0 - best_v)), tuple(best_y), evals, False)


def uniformly_non_l12_gap(f, x, n=None, budget=5000, seed=0, exhaustive=None):
    """Estimated delta; see :func:`uniformly_non_l12_estimate`."""
    return uniformly_non_l12_estimate(f, x, n, budget, seed, exhaustive).gap


__all__ = [
    "DiameterEstimate",
    "GapEstimate",
    "SliceSpec",
    "explicit_pair_diameter",
    "slice_diameter_lower_bound",
    "slice_membership",
    "uniformly_non_l12_estimate",
    "uniformly_non_l12_gap",
]
