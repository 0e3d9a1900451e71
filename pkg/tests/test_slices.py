import math

import numpy as np
import pytest

from orlicz import ConstructionError, DomainError, ExpMinusOne, Linear, Power
from orlicz.geometry import (
    SequenceSpace,
    SliceSpec,
    explicit_pair_diameter,
    slice_diameter_lower_bound,
    slice_membership,
    uniformly_non_l12_estimate,
    uniformly_non_l12_gap,
)

CAP_DIAMETER = 0.39665786236327427  # oracles.cap_diameter_pairs(0.02): 1,124,250 sampled pairs
L1, L2 = Linear(1.0), Power(2.0)


def test_membership_examples():
    s = SliceSpec(3, (1, 0, 0), 0.1)
    assert slice_membership(L1, s, [1, 0, 0])
    assert not slice_membership(L1, s, [0.85, 0.1, 0])
    ws = SliceSpec(3, (1, 0, 0), 0.05, "weak_star_slice")
    assert slice_membership(L2, ws, [0.97, 0.24, 0])
    with pytest.raises(DomainError):
        slice_membership(L1, s, [1, 0])


def test_spec_validation():
    with pytest.raises(ConstructionError):
        SliceSpec(2, (1, 0, 0), 0.1)
    with pytest.raises(ConstructionError):
        SliceSpec(2, (1, 0), 1.0)
    with pytest.raises(ConstructionError):
        SliceSpec(2, (1, 0), 0.1, "sideways")
    with pytest.raises(ConstructionError):
        SliceSpec(2, (2, 0), 0.1).validate(L2)
    SliceSpec(2, (1, 1), 0.1).validate(L1)  # the l_inf norm of (1, 1) is 1


def test_l1_weak_star_explicit_pair():
    s = SliceSpec(4, (1, 0, 0, 0), 0.05, "weak_star_slice")
    est = explicit_pair_diameter(L1, s, [1, 1, 1, 1], [1, -1, -1, -1])
    assert est.lower_bound == 2.0
    with pytest.raises(DomainError):
        explicit_pair_diameter(L1, s, [0.5, 0, 0, 0], [1, 0, 0, 0])


def test_l1_weak_star_sampler():
    s = SliceSpec(4, (1, 0, 0, 0), 0.05, "weak_star_slice")
    est = slice_diameter_lower_bound(L1, s, budget=20000, seed=0)
    assert est.lower_bound >= 1.99


def test_l2_cap():
    s = SliceSpec(4, (1, 0, 0, 0), 0.02)
    est = slice_diameter_lower_bound(L2, s, budget=20000, seed=0)
    cap = 2 * math.sqrt(2 * 0.02 - 0.02 ** 2)
    assert 0.9 * cap <= est.lower_bound <= cap + 1e-9
    assert abs(est.lower_bound - CAP_DIAMETER) / CAP_DIAMETER <= 0.02


def test_estimate_pair_is_consistent():
    s = SliceSpec(4, (1, 0, 0, 0), 0.02)
    est = slice_diameter_lower_bound(L2, s, budget=5000, seed=2)
    p, q = map(np.asarray, est.best_pair)
    assert slice_membership(L2, s, p) and slice_membership(L2, s, q)
    assert np.linalg.norm(p - q) == pytest.approx(est.lower_bound, abs=1e-10)
    assert est.lower_bound <= 2 + 1e-9


@pytest.mark.parametrize("f", [L1, L2, Power(4.0)], ids=lambda f: f.label())
def test_nearly_whole_ball(f):
    s = SliceSpec(3, (1, 0, 0), 0.999)
    assert slice_diameter_lower_bound(f, s, budget=5000, seed=0).lower_bound >= 1.8


def test_determinism():
    s = SliceSpec(4, (1, 0, 0, 0), 0.02)
    a = slice_diameter_lower_bound(L2, s, budget=3000, seed=9).to_dict()
    b = slice_diameter_lower_bound(L2, s, budget=3000, seed=9).to_dict()
    assert a == b
    x = np.eye(5)[0]
    assert uniformly_non_l12_gap(Power(3.0), x, budget=2000, seed=4) == \
        uniformly_non_l12_gap(Power(3.0), x, budget=2000, seed=4)


def test_gap_examples():
    x = np.eye(8)[0]
    assert uniformly_non_l12_gap(L2, x, budget=5000, seed=0) == pytest.approx(2 - math.sqrt(2), abs=1e-2)
    assert uniformly_non_l12_gap(L1, x, budget=5000, seed=0) <= 1e-9


def test_gap_exhaustive():
    est = uniformly_non_l12_estimate(L2, np.eye(3)[0], budget=10_000)
    assert est.exhaustive
    assert 2 - math.sqrt(2) - 1e-9 <= est.gap <= 2 - math.sqrt(2) + 1e-3
    with pytest.raises(DomainError):
        uniformly_non_l12_estimate(L2, np.eye(4)[0], exhaustive=True)


def test_gap_rejects_non_unit():
    with pytest.raises(DomainError):
        uniformly_non_l12_gap(L2, [2.0, 0.0])


@pytest.mark.parametrize("f", [L2, Power(4.0), Power(1.5), ExpMinusOne()], ids=lambda f: f.label())
def test_slice_point_duality(f):
    # a certified gap at x forbids the weak*-slice at x from reaching diameter 2
    x = np.eye(3)[0]
    x = x / SequenceSpace(f).norm([x])[0]
    d0 = uniformly_non_l12_estimate(f, x, budget=10_000).gap
    assert d0 > 0
    fun = x / SequenceSpace(f).norm([x])[0]
    s = SliceSpec(3, fun, d0 / 4, "weak_star_slice")
    # the generic dual norm is slow, so the non-power case gets a smaller budget
    budget = 5000 if isinstance(f, (Linear, Power)) else 1000
    est = slice_diameter_lower_bound(f, s, budget=budget, seed=0)
    assert est.lower_bound <= 2 - d0 / 2
