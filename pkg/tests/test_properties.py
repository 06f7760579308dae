"""Randomized structural inequalities.

The shared suites live in property_suites; here each runs at a moderate
trial count, plus a few bracket constants that are cheap enough to check
directly.
"""

import numpy as np
import pytest

import orlicz_lab as ol

import property_suites as ps
from conftest import random_zero_trace

TRIALS = 2000


@pytest.mark.parametrize("suite", ps.ALL_SUITES,
                         ids=lambda s: s.__name__)
def test_suite_has_zero_violations(suite):
    assert suite(TRIALS, seed=101) == 0


def test_value_doubling_constant(rng):
    # Phi(a + b) <= 2**m (Phi(a) + Phi(b)) for every doubling member
    for phi in ps.delta2_members():
        _, m = ol.simonenko_indices(phi)
        a = 10.0 ** rng.uniform(-2, 2, size=400)
        b = 10.0 ** rng.uniform(-2, 2, size=400)
        lhs = np.asarray(phi.value(a + b), dtype=float)
        rhs = 2.0 ** m * (np.asarray(phi.value(a), dtype=float)
                          + np.asarray(phi.value(b), dtype=float))
        assert ps._count_exceeding(lhs, rhs) == 0


def test_conjugate_doubling_constant(rng):
    # conj(Phi)(a + b) <= 2**(l/(l-1)) (conj(Phi)(a) + conj(Phi)(b))
    for phi in ps.delta2_members():
        l, _ = ol.simonenko_indices(phi)
        conj = phi.conjugate()
        a = 10.0 ** rng.uniform(-2, 2, size=400)
        b = 10.0 ** rng.uniform(-2, 2, size=400)
        lhs = np.asarray(conj.value(a + b), dtype=float)
        rhs = 2.0 ** (l / (l - 1.0)) * (
            np.asarray(conj.value(a), dtype=float)
            + np.asarray(conj.value(b), dtype=float))
        assert ps._count_exceeding(lhs, rhs) == 0


def test_lipschitz_on_compacts(rng):
    # |Phi(a) - Phi(b)| <= phi(T) |a - b| for a, b <= T; T small enough
    # that even exp growth stays inside float range
    T = 20.0
    for _, phi in ol.catalog():
        slope = float(phi.derivative(T))
        a = T * rng.random(400)
        b = T * rng.random(400)
        gap = np.abs(np.asarray(phi.value(a), dtype=float)
                     - np.asarray(phi.value(b), dtype=float))
        assert ps._count_exceeding(gap, slope * np.abs(a - b)) == 0


def test_luxemburg_axioms(rng):
    dom = ol.domain_from_config({"shape": "interval", "n": 48,
                                 "extent": [0.0, 1.0]})
    w = ol.WeightField(dom, 1.0 + rng.random(48))
    phi = ol.PowerSum(2.0, 4.0)
    for _ in range(20):
        u = random_zero_trace(dom, rng, scale=10.0 ** rng.uniform(-1, 1))
        v = random_zero_trace(dom, rng, scale=10.0 ** rng.uniform(-1, 1))
        s = rng.uniform(-3.0, 3.0)
        nu = ol.luxemburg_norm(phi, w, u)
        nv = ol.luxemburg_norm(phi, w, v)
        assert ol.luxemburg_norm(phi, w, u.scaled(s)) == pytest.approx(
            abs(s) * nu, rel=1e-8, abs=1e-12)
        both = ol.GridFunction(dom, u.values + v.values)
        assert ol.luxemburg_norm(phi, w, both) <= nu + nv + 1e-9 * (nu + nv)
        assert nu > 0


def test_doubling_check_agrees_with_indices():
    for _, phi in ol.catalog():
        _, m = ol.simonenko_indices(phi)
        assert ol.check_delta2(phi).satisfied == bool(np.isfinite(m))
