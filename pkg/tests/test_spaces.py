import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orlicz import (
    Capped,
    ConstructionError,
    Counting,
    ExpMinusOne,
    Linear,
    NonAtomic,
    PiecewiseLinear,
    Power,
    ULogU,
)
from orlicz.conjugation import conjugate
from orlicz.spaces import (
    StepFunction,
    amemiya_minimize,
    amemiya_norm,
    fundamental_function,
    l1_equivalence_constants,
    luxemburg_norm,
    modular,
    norm_report,
    orlicz_norm_dual,
    sequence_norm,
)

import oracles

INF = math.inf
SHIFTED = PiecewiseLinear(((0.0, 0.0), (1.0, 0.0), (2.0, 1.0)))
SQRT5 = 2.23606797749979  # oracles.luxemburg_bisect(u^2, [1, 2], [1, 1])
FAMILIES = [Power(2.0), Power(1.5), Power(4.0), Linear(1.0), ExpMinusOne(), ULogU(), SHIFTED]
step = StepFunction.nonatomic


def test_modular_examples():
    assert modular(Power(2.0), step([(2, 0.25)])) == 1.0
    assert modular(Linear(1.0), step([(1, 1), (-3, 2)])) == 7.0
    assert modular(Capped(Power(2.0), 1.0), step([(2, 0.1)])) == INF


def test_luxemburg_examples():
    assert luxemburg_norm(Power(2.0), step([(2, 0.25)])) == pytest.approx(1.0, rel=1e-10)
    assert luxemburg_norm(Power(2.0), step([(1, 1), (2, 1)])) == pytest.approx(SQRT5, rel=1e-10)
    assert luxemburg_norm(Linear(1.0), step([(-3, 2)])) == pytest.approx(6.0, rel=1e-10)
    assert luxemburg_norm(Power(2.0), step([])) == 0.0


def test_luxemburg_matches_bisection_oracle():
    rng = np.random.default_rng(3)
    for f, phi in ((ExpMinusOne(), np.expm1), (Power(3.0), lambda u: u ** 3)):
        for _ in range(10):
            vals = rng.normal(size=3)
            masses = rng.uniform(0.1, 1, size=3)
            got = luxemburg_norm(f, step(list(zip(vals, masses))))
            assert got == pytest.approx(oracles.luxemburg_bisect(phi, vals, masses), rel=1e-9)


def test_amemiya_examples():
    assert amemiya_norm(Power(2.0), step([(1, 1)])) == pytest.approx(2.0, rel=1e-10)
    assert amemiya_norm(Power(2.0), step([(2, 0.25)])) == pytest.approx(2.0, rel=1e-10)
    res = amemiya_minimize(Linear(1.0), step([(-3, 2)]))
    assert not res.attained
    assert res.value == pytest.approx(6.0, rel=1e-8)


def test_amemiya_matches_grid_oracle():
    x = step([(1.0, 0.5), (-2.0, 0.3)])
    got = amemiya_norm(ExpMinusOne(), x)
    ref = oracles.amemiya_grid(np.expm1, [1.0, -2.0], [0.5, 0.3], n=200_001)
    assert got <= ref + 1e-9 and got == pytest.approx(ref, rel=1e-6)


def test_dual_examples():
    assert orlicz_norm_dual(Power(2.0), step([(1, 1)])) == pytest.approx(2.0, abs=1e-4)
    assert orlicz_norm_dual(Linear(1.0), step([(-3, 2)])) == pytest.approx(6.0, abs=1e-4)
    assert orlicz_norm_dual(Power(2.0), step([])) == 0.0


def test_norm_report_gap():
    rep = norm_report(Power(2.0), step([(1, 1), (2, 1)]))
    assert rep.luxemburg == pytest.approx(SQRT5, rel=1e-10)
    assert rep.amemiya == pytest.approx(2 * SQRT5, rel=1e-9)
    assert rep.duality_gap <= 1e-4
    assert rep.to_dict()["tol_duality_gap"] == 1e-4


def test_fundamental_function_examples():
    assert fundamental_function(Power(2.0), 4.0) == pytest.approx(2.0, rel=1e-15)
    for t in (0.01, 1.0, 30.0):
        assert fundamental_function(Linear(1.0), t) == pytest.approx(t, rel=1e-12)
    vals = [fundamental_function(Power(2.0), 10.0 ** -k) for k in range(1, 9)]
    assert all(a > b for a, b in zip(vals, vals[1:])) and vals[-1] < 1e-3


@pytest.mark.parametrize("f", FAMILIES, ids=lambda f: f.label())
def test_fundamental_function_matches_indicator_norm(f):
    for t in np.geomspace(1e-3, 1e3, 7):
        direct = luxemburg_norm(f, step([(1.0, t)]))
        assert fundamental_function(f, t) == pytest.approx(direct, rel=1e-9)


def test_l1_constants_examples():
    c = l1_equivalence_constants(Linear(1.0), NonAtomic())
    assert (c.M, c.K, c.A_mass, c.u0) == (1.0, 1.0, 1.0, 1.0)
    c = l1_equivalence_constants(SHIFTED, NonAtomic())
    assert (c.M, c.K, c.A_mass, c.u0) == (0.5, 1.0, 1.0, 2.0)
    assert l1_equivalence_constants(Power(2.0), NonAtomic()) is None


def test_l1_constants_bound_random_steps():
    c = l1_equivalence_constants(SHIFTED, NonAtomic())
    rng = np.random.default_rng(11)
    for _ in range(100):
        k = rng.integers(1, 5)
        masses = rng.dirichlet(np.ones(k)) * c.A_mass * rng.uniform(0.1, 1)
        x = step(list(zip(rng.normal(scale=5, size=k), masses)))
        n = luxemburg_norm(SHIFTED, x)
        assert c.M * x.l1() <= n * (1 + 1e-9) and n <= c.K * x.l1() * (1 + 1e-9)


def test_step_function_validation():
    with pytest.raises(ConstructionError):
        step([(1, -1)])
    with pytest.raises(ConstructionError):
        step([(1, 2)], NonAtomic(1.0))
    with pytest.raises(ConstructionError):
        step([(math.nan, 1)])
    with pytest.raises(ConstructionError, match="x.levels"):
        StepFunction.from_dict({"levels": [[1, 2, 3]]}, "x")


def test_canonical_form_and_round_trip():
    x = step([(1, 0.5), (-3, 0.2), (0, 1), (1, 0.25)])
    assert x.canonical() == ((-3.0, 0.2), (1.0, 0.75))
    assert StepFunction.from_dict(x.to_dict()) == x
    s = StepFunction.sequence([1, 0, 2])
    assert StepFunction.from_dict(s.to_dict()) == s
    assert s.measure == Counting()


def test_sequence_norm_matches_counting_path():
    v = [3.0, -4.0]
    assert sequence_norm(Power(2.0), v) == pytest.approx(5.0, rel=1e-10)
    assert luxemburg_norm(Power(2.0), StepFunction.sequence(v)) == pytest.approx(5.0, rel=1e-10)


def test_capped_left_endpoint():
    # I(x/eps) jumps from inf to phi(b) = 1 at eps = 2: the infimum of the feasible set is 2
    f = Capped(Power(2.0), 1.0)
    assert luxemburg_norm(f, step([(2.0, 0.5)])) == pytest.approx(2.0, rel=1e-10)


levels = st.lists(st.tuples(st.floats(-10, 10).filter(lambda v: abs(v) > 1e-3), st.floats(0.01, 3)),
                  min_size=1, max_size=6)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(FAMILIES), levels)
def test_norm_sandwich(f, lv):
    x = step(lv)
    lux = luxemburg_norm(f, x)
    am = amemiya_norm(f, x)
    assert lux <= am * (1 + 1e-10) + 1e-12
    assert am <= 2 * lux + 1e-8 * max(1.0, lux)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([Power(2.0), Power(4.0), Linear(1.0)]),
       st.lists(st.tuples(st.floats(-5, 5).filter(lambda v: abs(v) > 1e-2), st.floats(0.05, 2)),
                min_size=1, max_size=4))
def test_duality_closed_conjugate(f, lv):
    x = step(lv)
    assert abs(amemiya_norm(f, x) - orlicz_norm_dual(f, x)) <= 1e-4 * max(1.0, amemiya_norm(f, x))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FAMILIES), levels, st.floats(-5, 5).filter(lambda c: abs(c) > 1e-3))
def test_homogeneity(f, lv, c):
    x = step(lv)
    assert luxemburg_norm(f, x * c) == pytest.approx(abs(c) * luxemburg_norm(f, x), rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FAMILIES), levels, st.floats(0, 1))
def test_lattice_monotone(f, lv, shrink):
    x = step(lv)
    y = step([(v * shrink, m) for v, m in lv])
    assert luxemburg_norm(f, y) <= luxemburg_norm(f, x) * (1 + 1e-10) + 1e-10


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FAMILIES), levels)
def test_unit_ball_law(f, lv):
    x = step(lv)
    n = luxemburg_norm(f, x)
    assert modular(f, x / n) <= 1 + 1e-8
    if n <= 1:
        assert modular(f, x) <= 1 + 1e-8


def test_holder():
    rng = np.random.default_rng(5)
    for f in (Power(2.0), Power(3.0), ExpMinusOne()):
        star = conjugate(f).conjugate
        for _ in range(30):
            m = rng.uniform(0.1, 1, size=3)
            xv, gv = rng.normal(size=3), rng.normal(size=3)
            pairing = float(np.sum(np.abs(xv * gv) * m))
            bound = luxemburg_norm(f, step(list(zip(xv, m)))) * amemiya_norm(star, step(list(zip(gv, m))))
            assert pairing <= bound + 1e-6


def test_module_doctests():
    import doctest

    import orlicz.functions
    import orlicz.spaces
    for mod in (orlicz.functions, orlicz.spaces):
        assert doctest.testmod(mod).failed == 0


def test_luxemburg_extreme_scales():
    f = Power(2.0)
    assert sequence_norm(f, [5e-324]) == 5e-324
    assert sequence_norm(f, [1e300, 1e300]) == pytest.approx(math.sqrt(2) * 1e300, rel=1e-12)
