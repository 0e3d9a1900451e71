import numpy as np
import pytest

from orlicz import Counting, ExpMinusOne, Linear, NonAtomic, PiecewiseLinear, Power
from orlicz.geometry import certify_witness, challenge_witness, construct_witness
from orlicz.geometry.slices import uniformly_non_l12_estimate
from orlicz.spaces import StepFunction, luxemburg_norm

SQRT2 = 1.4142135623730951


def test_quadratic_nonatomic_witness():
    w = construct_witness(Power(2.0), NonAtomic())
    assert (w.a, w.mass) == (1.0, 1.0)
    assert luxemburg_norm(Power(2.0), w.step()) == pytest.approx(1.0, rel=1e-9)


def test_quadratic_counting_witness():
    w = construct_witness(Power(2.0), Counting())
    assert (w.a, w.mass, w.atoms) == (1.0, 1.0, 1)


def test_linear_not_applicable():
    assert construct_witness(Linear(1.0), NonAtomic()) is None


def test_shifted_counting_not_applicable():
    # phi(c_phi) = 1 holds, but the level inverse 1/m never lands in (d_phi, c_phi] = (1, 2] except m = 1
    w = construct_witness(PiecewiseLinear(((0.0, 0.0), (1.0, 0.0), (2.0, 1.0))), Counting())
    assert w is None or (1.0 < w.a <= 2.0 and w.mass == 1.0)


@pytest.mark.parametrize("f", [Power(2.0), Power(4.0), ExpMinusOne()], ids=lambda f: f.label())
@pytest.mark.parametrize("m", [NonAtomic(), NonAtomic(1.0), Counting()], ids=str)
def test_witness_normalization(f, m):
    w = construct_witness(f, m)
    assert w is not None
    k = f.constants()
    assert f._scalar(w.a) * w.mass == pytest.approx(1.0, abs=1e-9)
    assert k.d < w.a < k.b
    assert luxemburg_norm(f, w.step()) == pytest.approx(1.0, rel=1e-9)


def test_hilbert_orthogonal_challenger():
    f = Power(2.0)
    w = construct_witness(f, Counting())
    r = challenge_witness(f, w, StepFunction.sequence([0.0, 1.0]))
    assert r.observed_min == pytest.approx(SQRT2, rel=1e-12)
    assert SQRT2 <= r.certified_bound < 2 and r.certified


def test_hilbert_same_challenger():
    f = Power(2.0)
    w = construct_witness(f, Counting())
    r = challenge_witness(f, w, StepFunction.sequence([1.0]))
    assert r.observed_min == 0.0 and r.certified


def test_record_invariants():
    f = Power(4.0)
    w = construct_witness(f, NonAtomic())
    cert = certify_witness(f, w, 300, seed=3)
    assert cert.violations == 0
    for r in cert.per_challenger:
        assert 0 < r.sigma < 1 and 0 <= r.gamma < 1 and w.a < r.d
        assert r.delta == pytest.approx((1 - r.sigma) * (1 - r.gamma) / 4, rel=1e-15)
        assert r.certified_bound == pytest.approx(2 - r.epsilon / (1 + r.epsilon), rel=1e-15)
        assert r.observed_min <= r.certified_bound + 1e-9 and r.certified_bound <= 2 - 1e-12


@pytest.mark.parametrize("f", [Power(2.0), ExpMinusOne()], ids=lambda f: f.label())
@pytest.mark.parametrize("m", [NonAtomic(), Counting()], ids=str)
def test_certification_random(f, m):
    w = construct_witness(f, m)
    cert = certify_witness(f, w, 500, seed=11)
    assert cert.violations == 0 and cert.max_bound < 2
    if isinstance(f, Power) and f.p == 2.0:
        assert max(r.observed_min for r in cert.per_challenger) <= SQRT2 + 1e-9


def test_certificate_deterministic():
    f = Power(4.0)
    w = construct_witness(f, NonAtomic())
    a = certify_witness(f, w, 100, seed=5).to_dict()
    b = certify_witness(f, w, 100, seed=5).to_dict()
    assert a == b


def test_gap_dominates_certified_margin():
    # the witness for u^4 in l_phi^8 is a point with a real non-l1^2 gap
    f = Power(4.0)
    w = construct_witness(f, Counting())
    x = np.zeros(8)
    x[: w.atoms] = w.a
    cert = certify_witness(f, w, 200, seed=0)
    margin = min(2 - r.certified_bound for r in cert.per_challenger)
    gap = uniformly_non_l12_estimate(f, x, budget=4000, seed=0).gap
    assert gap >= margin
