"""Shared fixtures and small builders for the test suite."""

import numpy as np
import pytest

import orlicz_lab as ol


def build_setup(phi, psi, cfg, w_values=None, w1_values=None):
    """Assemble an EnergySetup on the domain described by ``cfg``.

    Weights default to the unit field; pass nodal arrays to override.
    """
    dom = ol.domain_from_config(cfg)
    w = ol.WeightField(dom, w_values) if w_values is not None \
        else ol.WeightField.constant(dom)
    w1 = ol.WeightField(dom, w1_values) if w1_values is not None \
        else ol.WeightField.constant(dom)
    return ol.EnergySetup(phi, psi, w, w1, dom)


def random_zero_trace(dom, rng, scale=1.0):
    """Random nodal field forced to zero trace."""
    vals = scale * rng.normal(size=dom.node_shape)
    return ol.GridFunction(dom, vals)


@pytest.fixture(scope="session")
def interval_p2():
    # Phi = Psi = t^2/2 on (0,1), the classical Laplacian instance
    return build_setup(ol.Power(2.0), ol.Power(2.0),
                       {"shape": "interval", "n": 257, "extent": [0.0, 1.0]})


@pytest.fixture(scope="session")
def interval_p3():
    return build_setup(ol.Power(3.0), ol.Power(3.0),
                       {"shape": "interval", "n": 257, "extent": [0.0, 1.0]})


@pytest.fixture(scope="session")
def disc_reference():
    # Phi = t^3/3, Psi = t^2/2, unit weights on the unit disc
    return build_setup(ol.Power(3.0), ol.Power(2.0),
                       {"shape": "disc", "n": 81, "extent": [1.0]})


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
