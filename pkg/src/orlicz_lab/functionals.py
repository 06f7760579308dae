"""Energies of the weighted eigenvalue problem and their derivatives.

``I(u) = int w Phi(|grad u|)`` drives the diffusion side and
``J(u) = int w1 Psi(|u|)`` the reaction side.  Both are C1; their Gateaux
derivatives are assembled in discrete weak form as densities paired against
test functions through the nodal quadrature, so a critical point of ``I``
restricted to a level set of ``J`` satisfies the discrete Euler-Lagrange
system exactly.

The dual norm of such a density is evaluated against the finite zero-trace
nodal basis; each basis hat touches at most three cells, so its Sobolev norm
follows from the inverses of the Young functions (closed form in 1D, a short
bracketed bisection in 2D).  That turns the residual check into one
vectorized pass.
"""

from __future__ import annotations

import numpy as np

from .errors import ConditionFailure, DomainError
from .norms import (GridDomain, GridFunction, WeightField,
                    gradient_adjoint, gradient_components, luxemburg_values,
                    modular_values)
from .util import bisect_decreasing
from .young import YoungFunction, dominates_essentially, simonenko_indices

__all__ = [
    "EnergySetup",
    "DualGridFunction",
    "energy_I",
    "energy_J",
    "gateaux_I",
    "gateaux_J",
    "project_to_level",
    "scale_to_energy_level",
    "dual_norm",
]


class DualGridFunction:
    """A linear functional on zero-trace grid functions.

    Stored as a nodal density ``f``; the pairing is the quadrature sum
    ``<F, v> = sum qw * f * v``.  Boundary and exterior nodes carry zero
    coefficient, matching the zero-trace test space.
    """

    def __init__(self, domain: GridDomain, density):
        density = np.asarray(density, dtype=float)
        if density.shape != domain.node_shape:
            raise DomainError("density must match the node layout")
        self.domain = domain
        self.density = np.where(domain.interior, density, 0.0)
        self.density.setflags(write=False)

    def pairing(self, v) -> float:
        vals = v.values if isinstance(v, GridFunction) else np.asarray(v)
        return float(np.sum(self.domain.node_qw * self.density * vals))

    def combine(self, other: "DualGridFunction", scale: float
                ) -> "DualGridFunction":
        """The functional ``self + scale * other``."""
        return DualGridFunction(self.domain,
                                self.density + scale * other.density)

    def __repr__(self):  # pragma: no cover - cosmetic
        return (f"<DualGridFunction max|f|="
                f"{np.max(np.abs(self.density)):.3g}>")


class EnergySetup:
    """Problem data: Young pair, weight pair, and the grid.

    Construction verifies the two-sided index bounds on both Young
    functions (the growth assumptions behind every estimate used here) and
    records whether the reaction function grows essentially slower than the
    diffusion one, which is the compactness route when the stronger growth
    is not doubling.  Basis Sobolev norms for the dual-norm evaluation are
    precomputed once.
    """

    def __init__(self, phi: YoungFunction, psi: YoungFunction,
                 w: WeightField, w1: WeightField, dom: GridDomain,
                 require_domination: bool = False):
        if w.domain is not dom or w1.domain is not dom:
            raise DomainError("weights and domain must be the same objects")
        self.phi, self.psi = phi, psi
        self.w, self.w1 = w, w1
        self.dom = dom
        self.phi_l, self.phi_m = simonenko_indices(phi)
        self.psi_l, self.psi_m = simonenko_indices(psi)
        if not (1.0 < self.phi_l <= self.phi_m < np.inf):
            raise ConditionFailure(
                "phi1", f"{phi.label()} has indices "
                f"({self.phi_l:g}, {self.phi_m:g}), need 1 < l <= m < inf")
        if not (1.0 < self.psi_l <= self.psi_m < np.inf):
            raise ConditionFailure(
                "psi1", f"{psi.label()} has indices "
                f"({self.psi_l:g}, {self.psi_m:g}), need 1 < l <= m < inf")
        self.dominated = dominates_essentially(psi, phi)
        if require_domination and not self.dominated:
            raise ConditionFailure(
                "psi2", f"{psi.label()} does not grow essentially slower "
                f"than {phi.label()}")
        self.w_cells = w.cell_values()
        self._basis_w = self._basis_norms()

    # -- basis Sobolev norms ----------------------------------------------
    def _basis_norms(self) -> np.ndarray:
        dom = self.dom
        qw = dom.node_qw
        inter = dom.interior
        # State part: the hat is 1 at one node, so the modular of e/xi is
        # qw * w1 * Psi(1/xi) and the norm inverts Psi directly.
        tiny = np.where(inter, qw * self.w1.values, 1.0)
        xi_state = np.zeros(dom.node_shape)
        xi_state[inter] = 1.0 / np.asarray(
            self.psi.inverse(1.0 / tiny[inter]), dtype=float)
        # Gradient part.  In 1D the hat meets 2 cells with magnitude 1/h, so
        # Phi inverts in closed form.  In 2D the base-corner stencil sees the
        # hat in 3 cells (sqrt(2)/h once, 1/h twice); that mixed modular is
        # inverted by batched bisection between closed-form brackets.
        h = dom.h
        wc = self.w_cells
        xi_grad = np.zeros(dom.node_shape)
        if dom.ndim == 1:
            ssum = np.zeros(dom.node_shape)
            ssum[1:-1] = h * (wc[:-1] + wc[1:])
            xi_grad[inter] = 1.0 / (h * np.asarray(
                self.phi.inverse(1.0 / ssum[inter]), dtype=float))
        else:
            cq = dom.h ** dom.ndim
            own = np.zeros(dom.node_shape)
            own[:-1, :-1] = wc
            left = np.zeros(dom.node_shape)
            left[1:, :-1] = wc
            below = np.zeros(dom.node_shape)
            below[:-1, 1:] = wc
            a = cq * own[inter]
            b = cq * (left[inter] + below[inter])
            root2 = np.sqrt(2.0)
            fat = np.asarray(self.phi.inverse(1.0 / (a + b)), dtype=float)
            lo = 0.5 / (h * fat)
            hi = 2.0 * root2 / (h * fat)
            phi = self.phi

            def gap(xi):
                return (a * phi(root2 / (h * xi))
                        + b * phi(1.0 / (h * xi)) - 1.0)

            xi_grad[inter] = bisect_decreasing(gap, lo, hi, iters=160,
                                               target_tol=1e-13)
        return np.where(inter, xi_state + xi_grad, np.inf)

    def __repr__(self):  # pragma: no cover - cosmetic
        return (f"<EnergySetup {self.phi.label()} / {self.psi.label()} "
                f"on {self.dom.kind} n={self.dom.n}>")


def _check_member(setup: EnergySetup, u: GridFunction):
    if u.domain is not setup.dom:
        raise DomainError("grid function lives on a different domain")
    return u


def energy_I(setup: EnergySetup, u: GridFunction) -> float:
    """Diffusion energy: cell quadrature of ``w Phi(|grad u|)``."""
    _check_member(setup, u)
    mag = np.hypot(*gradient_components(setup.dom, u.values)) \
        if setup.dom.ndim == 2 else \
        np.abs(gradient_components(setup.dom, u.values)[0])
    return float(modular_values(setup.phi, setup.w_cells,
                                setup.dom.cell_qw, mag[None, ...])[0])


def energy_J(setup: EnergySetup, u: GridFunction) -> float:
    """Reaction energy: nodal quadrature of ``w1 Psi(|u|)``."""
    _check_member(setup, u)
    return float(modular_values(setup.psi, setup.w1.values,
                                setup.dom.node_qw, u.values[None, ...])[0])


def gateaux_I(setup: EnergySetup, u: GridFunction) -> DualGridFunction:
    """Weak form of the weighted phi-Laplacian at ``u``.

    Pairs as ``int w phi(|grad u|)/|grad u| grad u . grad v``; cells with a
    vanishing gradient contribute the limit value 0 because the density of
    the Young function vanishes at 0.
    """
    _check_member(setup, u)
    dom = setup.dom
    comps = gradient_components(dom, u.values)
    mag = np.abs(comps[0]) if dom.ndim == 1 else np.hypot(*comps)
    with np.errstate(invalid="ignore", divide="ignore"):
        factor = np.asarray(setup.phi.derivative(mag), dtype=float) / mag
    factor = np.where(mag > 0, factor, 0.0) * setup.w_cells * dom.cell_qw
    nodal = gradient_adjoint(dom, tuple(factor * g for g in comps))
    density = np.divide(nodal, dom.node_qw,
                        out=np.zeros(dom.node_shape),
                        where=dom.node_qw > 0)
    return DualGridFunction(dom, density)


def gateaux_J(setup: EnergySetup, u: GridFunction) -> DualGridFunction:
    """Weak form of the reaction term: pairs as ``int w1 psi(|u|) sgn(u) v``."""
    _check_member(setup, u)
    vals = u.values
    density = setup.w1.values * np.asarray(
        setup.psi.derivative(np.abs(vals)), dtype=float) * np.sign(vals)
    return DualGridFunction(setup.dom, density)


def _scale_to_level(setup: EnergySetup, u: GridFunction, target: float,
                    energy, l_idx: float, m_idx: float) -> GridFunction:
    if target <= 0:
        raise DomainError("level must be positive")
    base = energy(setup, u)
    if base <= 0.0:
        raise DomainError("cannot project the zero function onto a level set")
    ratio = target / base
    # Two-sided homogeneity brackets the scaling factor.
    lo = 0.999 * min(ratio ** (1.0 / l_idx), ratio ** (1.0 / m_idx))
    hi = 1.001 * max(ratio ** (1.0 / l_idx), ratio ** (1.0 / m_idx))
    for _ in range(40):  # the bracket is tight; widen only if needed
        if energy(setup, u.scaled(hi)) >= target:
            break
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = energy(setup, u.scaled(mid))
        if abs(val - target) <= 1e-12 * target:
            lo = hi = mid
            break
        if val < target:
            lo = mid
        else:
            hi = mid
        if (hi - lo) <= 1e-16 * hi:
            break
    return u.scaled(0.5 * (lo + hi))


def project_to_level(setup: EnergySetup, u: GridFunction,
                     alpha: float) -> GridFunction:
    """Scale ``u`` onto the constraint set ``J = alpha``.

    The scaling factor exists and is unique: ``s -> J(su)`` is continuous,
    strictly increasing, 0 at 0 and unbounded, and the two-sided growth
    bounds ``min(s^l1, s^m1) J(u) <= J(su) <= max(s^l1, s^m1) J(u)``
    bracket it.  The returned level matches to 1e-10 relative.
    """
    return _scale_to_level(setup, u, alpha, energy_J,
                           setup.psi_l, setup.psi_m)


def scale_to_energy_level(setup: EnergySetup, u: GridFunction,
                          level: float) -> GridFunction:
    """Scale ``u`` so the diffusion energy ``I`` hits ``level`` exactly."""
    return _scale_to_level(setup, u, level, energy_I,
                           setup.phi_l, setup.phi_m)


def dual_norm(setup: EnergySetup, functional: DualGridFunction) -> float:
    """Dual norm against the finite zero-trace basis.

    ``max_i |<F, e_i>| / ||e_i||_W`` over interior nodal hats; a computable
    surrogate for the operator norm that vanishes exactly when the density
    does.
    """
    if functional.domain is not setup.dom:
        raise DomainError("functional lives on a different domain")
    inter = setup.dom.interior
    pairings = np.abs(setup.dom.node_qw * functional.density)[inter]
    return float(np.max(pairings / setup._basis_w[inter], initial=0.0))
