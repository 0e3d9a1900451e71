"""Scalar root-finding and line-search kernels.

Everything here works on extended reals: ``inf`` is a legal function value and
never turns into ``nan`` on the way out.
"""
import math

INF = math.inf
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/golden ratio

BRACKET_CAP = 2.0 ** 64


def is_inf(x):
    return x == INF


def ext_mul(a, b):
    """Product with the measure-theoretic convention ``0 * inf = 0``."""
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def bisect_predicate(pred, lo, hi, rtol=1e-12, atol=0.0, maxiter=400):
    """Locate the switch point of a monotone predicate.

    ``pred(lo)`` is assumed true and ``pred(hi)`` false. Returns ``(lo, hi)``
    after shrinking the bracket until ``hi - lo <= rtol * hi + atol``.
    """
    for _ in range(maxiter):
        if hi - lo <= rtol * abs(hi) + atol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def golden_max(g, lo, hi, tol=1e-12, maxiter=500):
    """Maximize a unimodal function on ``[lo, hi]`` by golden-section search.

    The endpoints are compared with the interior optimum, so boundary maxima
    (common for concave objectives with flat pieces) are found exactly.
    ``-inf`` values are allowed. Returns ``(argmax, max)``.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(maxiter):
        if b - a <= tol * max(1.0, abs(a), abs(b)):
            break
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + INV_PHI * (b - a)
            gd = g(d)
    best_x, best = (c, gc) if gc >= gd else (d, gd)
    for x in (lo, hi):
        gx = g(x)
        if gx > best:
            best_x, best = x, gx
    return best_x, best


def golden_min(h, lo, hi, tol=1e-12, maxiter=500):
    x, v = golden_max(lambda t: -h(t), lo, hi, tol=tol, maxiter=maxiter)
    return x, -v


def expand_upper(g, start=1.0, cap=BRACKET_CAP):
    """Double ``start`` until the concave ``g`` stops increasing.

    Returns the first point ``t`` with ``g(t) < g(t / 2)``, or ``None`` when the
    function is still increasing at ``cap``.
    """
    t = start
    prev = g(0.0)
    while t <= cap:
        cur = g(t)
        if cur < prev:
            return t
        prev = cur
        t *= 2.0
    return None


def forward_derivative(f, u, h0=1e-3, rtol=1e-9, max_halvings=40):
    """Right derivative by forward differences with step halving.

    Successive one-sided quotients are Richardson-combined to cancel the
    first-order truncation term; iteration stops once two extrapolated
    estimates agree to ``rtol``.
    """
    fu = f(u)
    h = h0 * max(1.0, abs(u))
    q_prev = (f(u + h) - fu) / h
    est_prev = q_prev
    for _ in range(max_halvings):
        h *= 0.5
        q = (f(u + h) - fu) / h
        est = 2.0 * q - q_prev
        if abs(est - est_prev) <= rtol * max(1.0, abs(est)):
            return est
        q_prev, est_prev = q, est
    return est_prev
