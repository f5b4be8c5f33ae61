"""Base metrics on R^n and their curvature jets.

Supported kinds:

* flat (identity components, zero curvature),
* conformally flat g = phi^-2 delta with closed-form Christoffel symbols and
  Ricci/scalar curvature assembled from the jets of w = -log(phi),
* general component callables with curvature from fourth-order central
  finite differences on the components.

The ambient product space is N x R with metric g + dt^2, optionally rescaled
by a conformal factor phi(x, t)^-2; `AmbientSpec` bundles the base with the
factor's first-order jet.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConformalFactorError, MetricNotPositiveError
from .util import as_point


@dataclass(frozen=True)
class MetricJet:
    """Metric data at a point: components, inverse, Christoffel symbols
    gamma[k, i, j] = Gamma^k_ij, Ricci tensor, and scalar curvature."""

    g: np.ndarray
    ginv: np.ndarray
    gamma: np.ndarray
    ricci: np.ndarray
    scalar: float


class FlatMetric:
    kind = "flat"

    def __init__(self, dim: int):
        self.dim = dim
        self.name = "flat"

    def components(self, x) -> np.ndarray:
        return np.eye(self.dim)

    def jet(self, x) -> MetricJet:
        n = self.dim
        eye = np.eye(n)
        return MetricJet(eye, eye, np.zeros((n, n, n)), np.zeros((n, n)), 0.0)


class ConformalMetric:
    """g = phi(x)^-2 delta with closed-form curvature.

    factor_jet(x) must return (phi, grad phi, hess phi); phi must be positive.
    """

    kind = "conformal"

    def __init__(self, dim: int, factor_jet: Callable[[np.ndarray], tuple], name="conformal"):
        self.dim = dim
        self.factor_jet = factor_jet
        self.name = name

    def components(self, x) -> np.ndarray:
        phi, _, _ = self.factor_jet(as_point(x, self.dim))
        if phi <= 0:
            raise ConformalFactorError(f"conformal factor {phi} is not positive at {x}")
        return np.eye(self.dim) / phi**2

    def jet(self, x) -> MetricJet:
        x = as_point(x, self.dim)
        n = self.dim
        phi, dphi, ddphi = self.factor_jet(x)
        if phi <= 0:
            raise ConformalFactorError(f"conformal factor {phi} is not positive at {x}")
        dphi = np.asarray(dphi, dtype=float)
        ddphi = np.asarray(ddphi, dtype=float)
        # g = e^{2w} delta with w = -log(phi)
        w1 = -dphi / phi
        w2 = -ddphi / phi + np.outer(dphi, dphi) / phi**2
        lap_w = float(np.trace(w2))
        grad2 = float(w1 @ w1)
        eye = np.eye(n)
        # Gamma^k_ij = delta_ki w_j + delta_kj w_i - delta_ij w_k
        gamma = (
            np.einsum("ki,j->kij", eye, w1)
            + np.einsum("kj,i->kij", eye, w1)
            - np.einsum("ij,k->kij", eye, w1)
        )
        ricci = -(n - 2) * (w2 - np.outer(w1, w1)) - (lap_w + (n - 2) * grad2) * eye
        scalar = phi**2 * (-2.0 * (n - 1) * lap_w - (n - 1) * (n - 2) * grad2)
        g = eye / phi**2
        ginv = eye * phi**2
        return MetricJet(g, ginv, gamma, ricci, float(scalar))


class GeneralMetric:
    """Metric from a component callable; curvature via fourth-order stencils."""

    kind = "general"

    def __init__(self, dim: int, components: Callable[[np.ndarray], np.ndarray],
                 step: float = 1e-3, name="general"):
        self.dim = dim
        self._components = components
        self.step = float(step)
        self.name = name

    def components(self, x) -> np.ndarray:
        g = np.asarray(self._components(np.asarray(x, dtype=float)), dtype=float)
        if g.shape != (self.dim, self.dim):
            raise ValueError(f"metric components must be {self.dim}x{self.dim}")
        return g

    def _check_spd(self, g: np.ndarray, x) -> None:
        ev = np.linalg.eigvalsh(0.5 * (g + g.T))
        if ev.min() <= 0:
            raise MetricNotPositiveError(
                f"metric {self.name} not positive definite at {np.asarray(x).tolist()}"
            )

    def jet(self, x) -> MetricJet:
        x = as_point(x, self.dim)
        n, h = self.dim, self.step
        g0 = self.components(x)
        self._check_spd(g0, x)

        def comp(y):
            return self.components(y)

        # fourth-order first derivatives dg[k] = d_k g
        dg = np.zeros((n, n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            dg[k] = (
                -comp(x + 2 * e) + 8 * comp(x + e) - 8 * comp(x - e) + comp(x - 2 * e)
            ) / (12 * h)
        # fourth-order second derivatives ddg[k, l] = d_k d_l g
        ddg = np.zeros((n, n, n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            ddg[k, k] = (
                -comp(x + 2 * e) + 16 * comp(x + e) - 30 * g0 + 16 * comp(x - e) - comp(x - 2 * e)
            ) / (12 * h * h)
        coef = {1: 8.0 / 12.0, 2: -1.0 / 12.0, -1: -8.0 / 12.0, -2: 1.0 / 12.0}
        for k in range(n):
            for l in range(k + 1, n):
                acc = np.zeros((n, n))
                for sk, ck in coef.items():
                    for sl, cl in coef.items():
                        y = x.copy()
                        y[k] += sk * h
                        y[l] += sl * h
                        acc += ck * cl * comp(y)
                ddg[k, l] = ddg[l, k] = acc / (h * h)

        return _assemble_curvature(g0, dg, ddg)


def _assemble_curvature(g: np.ndarray, dg: np.ndarray, ddg: np.ndarray) -> MetricJet:
    """Christoffel, Ricci, scalar from g, d_k g_ij, d_k d_l g_ij."""
    ginv = np.linalg.inv(g)
    # Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    bracket = (
        np.einsum("ijl->lij", dg)  # d_i g_jl  (dg[i][j,l])
        + np.einsum("jil->lij", dg)  # d_j g_il
        - np.einsum("lij->lij", dg)  # d_l g_ij
    )
    gamma = 0.5 * np.einsum("kl,lij->kij", ginv, bracket)
    # d_m Gamma^k_ij needs d(g^{-1}) = -ginv dg ginv
    dginv = -np.einsum("ab,mbc,cd->mad", ginv, dg, ginv)
    dbracket = (
        np.einsum("mijl->mlij", ddg)
        + np.einsum("mjil->mlij", ddg)
        - np.einsum("mlij->mlij", ddg)
    )
    dgamma = 0.5 * (
        np.einsum("mkl,lij->mkij", dginv, bracket)
        + np.einsum("kl,mlij->mkij", ginv, dbracket)
    )
    # Ric_ij = d_k Gamma^k_ij - d_i Gamma^k_kj + Gamma^k_kp Gamma^p_ij - Gamma^k_ip Gamma^p_kj
    ricci = (
        np.einsum("kkij->ij", dgamma)
        - np.einsum("ikkj->ij", dgamma)
        + np.einsum("kkp,pij->ij", gamma, gamma)
        - np.einsum("kip,pkj->ij", gamma, gamma)
    )
    ricci = 0.5 * (ricci + ricci.T)
    scalar = float(np.einsum("ij,ij->", ginv, ricci))
    return MetricJet(g, ginv, gamma, ricci, scalar)


def metric_jet(metric, x) -> MetricJet:
    """Metric data at x for any of the metric kinds."""
    return metric.jet(as_point(x, metric.dim))


def as_general(metric, step: float = 1e-3) -> GeneralMetric:
    """Wrap any metric as a component callable with FD curvature (cross-checks)."""
    return GeneralMetric(metric.dim, metric.components, step=step, name=f"fd({metric.name})")


def round_sphere_factor(x):
    """phi = (1 + |x|^2)/2, the factor whose metric phi^-2 delta is the round
    unit sphere (less a point)."""
    x = np.asarray(x, dtype=float)
    return (1.0 + float(x @ x)) / 2.0, x.copy(), np.eye(x.size)


def round_sphere_base(dim: int) -> ConformalMetric:
    return ConformalMetric(dim, round_sphere_factor, name="round-sphere")


# ---------------------------------------------------------------------------
# ambient product space


@dataclass(frozen=True)
class PhiJet:
    value: float
    grad_x: np.ndarray
    dt: float


@dataclass(frozen=True)
class AmbientSpec:
    """Base metric g on N plus the conformal factor phi(x, t) of the ambient
    metric phi^-2 (g + dt^2); phi_jet is None for the plain product metric."""

    base: object
    phi_jet: Callable[[np.ndarray, float], PhiJet] | None = None
    name: str = "product"

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def is_conformal(self) -> bool:
        return self.phi_jet is not None

    def phi(self, x, t: float) -> PhiJet:
        if self.phi_jet is None:
            return PhiJet(1.0, np.zeros(self.base.dim), 0.0)
        out = self.phi_jet(np.asarray(x, dtype=float), float(t))
        if out.value <= 0:
            raise ConformalFactorError(f"ambient factor {out.value} not positive at ({x}, {t})")
        return out


def product_ambient(dim: int, base=None) -> AmbientSpec:
    return AmbientSpec(base if base is not None else FlatMetric(dim), None, "product")


def spherical_ambient(dim: int) -> AmbientSpec:
    """Flat base with phi = (1 + |x|^2 + t^2)/2: the round (n+1)-sphere."""

    def jet(x, t):
        x = np.asarray(x, dtype=float)
        return PhiJet((1.0 + float(x @ x) + t * t) / 2.0, x.copy(), t)

    return AmbientSpec(FlatMetric(dim), jet, "spherical")


def constant_ambient(dim: int, value: float = 1.0) -> AmbientSpec:
    """Constant conformal factor; rescales the product metric rigidly."""
    if value <= 0:
        raise ConformalFactorError("constant factor must be positive")

    def jet(x, t):
        return PhiJet(float(value), np.zeros(dim), 0.0)

    return AmbientSpec(FlatMetric(dim), jet, f"constant({value})")
