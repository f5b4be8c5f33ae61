"""Conformal change of the ambient product metric.

For gbar = phi^-2 (g + dt^2) the shape operator of a hypersurface transforms
as Abar = phi A + nu(phi) I and the mean curvature as Hbar = phi H + n nu(phi),
where nu(phi) is the derivative of phi along the (product-metric) upward unit
normal. For a level slice Sigma inside N x {eps} the same shift with the
slice normal eta gives Abar_Sigma = phi A_Sigma + eta(phi) I, and splitting
nu into its eta and d_t parts turns the exact minor relation into

    phi (A|1) + nu(phi) I = <nu, eta> Abar_Sigma + <nu, d_t> phi_t I.

The distinguished factor phi = (1 + |X|^2)/2 on R^{n+1} produces the round
unit sphere; for graphs over R^n its mean curvature operator evaluates as

    H(u) = (1 + |x|^2 + u^2)/2 * (flat mean curvature) + n (u - x . Du)/W.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConformalFactorError
from .fields import ScalarField, eval_jet
from .graphgeom import ExtrinsicPoint, SliceFrame, extrinsic_point
from .metrics import AmbientSpec, PhiJet
from .util import as_point, maxabs


def spherical_phi(point) -> tuple[float, np.ndarray]:
    """phi = (1 + |X|^2)/2 and its ambient gradient X, for X in R^{n+1}."""
    x = np.asarray(point, dtype=float)
    return (1.0 + float(x @ x)) / 2.0, x.copy()


def conformal_shape(point: ExtrinsicPoint, phi: float, dphi_nu: float) -> np.ndarray:
    """Abar = phi A + nu(phi) I for the factor value and normal derivative."""
    if phi <= 0:
        raise ConformalFactorError(f"conformal factor {phi} must be positive")
    n = point.dim
    return phi * point.shape_operator + dphi_nu * np.eye(n)


def normal_derivative(point: ExtrinsicPoint, phi_jet: PhiJet) -> float:
    """nu(phi) = dphi(nu), pairing the factor differential with the upward
    normal's contravariant components (metric independent)."""
    return float(phi_jet.grad_x @ point.nu[:-1] + phi_jet.dt * point.nu[-1])


@dataclass(frozen=True)
class ConformalPoint:
    """Extrinsic data of the same graph point after the conformal change."""

    point: ExtrinsicPoint
    phi: float
    dphi_nu: float
    shape_operator: np.ndarray
    mean_curvature: float
    norm_a2: float
    principal: np.ndarray
    scalar_curvature: float | None  # via the round Gauss relation; spherical only

    @property
    def dim(self) -> int:
        return self.point.dim


def conformal_point(field: ScalarField, ambient: AmbientSpec, x) -> ConformalPoint:
    """Evaluate graph geometry at x in the conformally rescaled ambient."""
    pt = extrinsic_point(field, ambient.base, x)
    pj = ambient.phi(pt.x, pt.u)
    mu = normal_derivative(pt, pj)
    abar = conformal_shape(pt, pj.value, mu)
    n = pt.dim
    principal = np.sort(pj.value * pt.principal + mu)
    hbar = pj.value * pt.mean_curvature + n * mu
    norm2 = float(np.sum(principal**2))
    # the Gauss relation R = n(n-1) + Hbar^2 - |Abar|^2 needs the rescaled
    # ambient to be the unit round sphere; leave R unset otherwise
    scalar = None
    if ambient.name == "spherical":
        scalar = float(n * (n - 1) + hbar * hbar - norm2)
    return ConformalPoint(
        point=pt,
        phi=pj.value,
        dphi_nu=mu,
        shape_operator=abar,
        mean_curvature=float(hbar),
        norm_a2=norm2,
        principal=principal,
        scalar_curvature=scalar,
    )


def mean_curvature_euclid(field: ScalarField, x) -> float:
    """Flat-base graph mean curvature: trace of the graph shape operator,
    equal to minus the divergence of the upward unit normal."""
    x = as_point(x, field.dim)
    jet = eval_jet(field, x)
    g = np.asarray(jet.gradient, dtype=float)
    w2 = 1.0 + float(g @ g)
    w = float(np.sqrt(w2))
    proj = np.eye(field.dim) - np.outer(g, g) / w2
    return float(np.trace(proj @ jet.hessian)) / w


def mean_curvature_spherical(field: ScalarField, x) -> float:
    """Direct evaluation of the spherical graph mean curvature operator

        H(u) = (1 + |x|^2 + u^2)/2 * H_flat(u) + n (u - x . Du) / W.

    Written independently of the conformal_point route so the two can serve
    as mutual oracles.
    """
    x = as_point(x, field.dim)
    jet = eval_jet(field, x)
    g = np.asarray(jet.gradient, dtype=float)
    n = field.dim
    w2 = 1.0 + float(g @ g)
    w = float(np.sqrt(w2))
    phi = (1.0 + float(x @ x) + jet.value**2) / 2.0
    flat = float(np.trace((np.eye(n) - np.outer(g, g) / w2) @ jet.hessian)) / w
    return phi * flat + n * (jet.value - float(x @ g)) / w


@dataclass(frozen=True)
class SliceTrace:
    """Both sides of the conformal minor relation at a slice point."""

    minor_bar: np.ndarray  # phi (A|1) + nu(phi) I
    rhs: np.ndarray  # cos * Abar_Sigma + <nu, d_t> phi_t I
    abar_sigma: np.ndarray
    hbar_sigma: float
    trace_lhs: float
    trace_rhs: float

    @property
    def residual(self) -> float:
        return maxabs(self.minor_bar - self.rhs)

    @property
    def trace_residual(self) -> float:
        return abs(self.trace_lhs - self.trace_rhs)


def conformal_slice_trace(
    frame: SliceFrame,
    point: ExtrinsicPoint,
    phi: float,
    dphi_eta: float,
    phi_t: float,
    dphi_nu: float | None = None,
) -> SliceTrace:
    """Evaluate the conformal minor relation.

    The left side uses nu(phi) computed from the ambient factor data; the
    right side decomposes nu into <nu,eta> eta + <nu,d_t> d_t, so the two
    sides exercise independent code paths. When dphi_nu is not given it is
    assembled from the decomposition (the identity is then exact by
    construction and only tests the matrix plumbing).
    """
    if phi <= 0:
        raise ConformalFactorError(f"conformal factor {phi} must be positive")
    if frame.dim != point.dim:
        raise ValueError("frame and point dimensions differ")
    n = point.dim
    eye = np.eye(n - 1)
    nu_t = point.nu[-1]
    if dphi_nu is None:
        dphi_nu = frame.cos_angle * dphi_eta + nu_t * phi_t
    minor_bar = phi * frame.minor + dphi_nu * eye
    abar_sigma = phi * frame.a_sigma + dphi_eta * eye
    rhs = frame.cos_angle * abar_sigma + nu_t * phi_t * eye
    hbar_sigma = float(np.trace(abar_sigma))
    return SliceTrace(
        minor_bar=minor_bar,
        rhs=rhs,
        abar_sigma=abar_sigma,
        hbar_sigma=hbar_sigma,
        trace_lhs=float(np.trace(minor_bar)),
        trace_rhs=frame.cos_angle * hbar_sigma + (n - 1) * nu_t * phi_t,
    )


def slice_trace_from_ambient(frame: SliceFrame, point: ExtrinsicPoint, ambient: AmbientSpec) -> SliceTrace:
    """conformal_slice_trace with all factor data drawn from the ambient spec;
    nu(phi) comes from the ambient gradient directly, so both sides are
    genuinely independent evaluations."""
    pj = ambient.phi(point.x, point.u)
    dphi_eta = float(pj.grad_x @ frame.eta)
    dphi_nu = normal_derivative(point, pj)
    return conformal_slice_trace(frame, point, pj.value, dphi_eta, pj.dt, dphi_nu=dphi_nu)
