"""Extrinsic geometry of graph hypersurfaces M = graph(u) in (N x R, g + dt^2).

Conventions. The upward unit normal is nu = (-grad u + d_t)/W with
W = sqrt(1 + |grad u|_g^2), where grad u = g^{ij} u_j d_i. The shape operator
in graph coordinates is

    A^i_j = (g^{ik} - u^i u^k / W^2) (Hess u)_{kj} / W,

with the covariant Hessian (Hess u)_{kj} = u_{kj} - Gamma^m_{kj} u_m. A is
self-adjoint for the induced metric gM_ij = g_ij + u_i u_j, so its
eigenvalues (the principal curvatures) are real. The scalar curvature of M
follows from the ambient curvature decomposition:

    R_M = H^2 - |A|^2 + R_g - 2 Ric_g(nu', nu'),

nu' being the horizontal part of nu.

A level slice Sigma = M cap {t = eps} projects to {u = eps} in N. Its unit
normal inside N x {eps} is eta = -grad u / |grad u|_g, which makes
cos = <nu, eta> = |grad u|/W nonnegative, and its shape operator is
A_Sigma = Hess u restricted to T Sigma / |grad u|. In any g-orthonormal frame
adapted to grad u (first vector along grad u), the lower-right minor of A
satisfies (A|1) = cos * A_Sigma exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NonRegularPointError, NotOnLevelError
from .fields import FiniteDifferenceField, ScalarField, eval_jet
from .metrics import FlatMetric, GeneralMetric, MetricJet, metric_jet
from .util import as_point, maxabs

#: default regularity threshold for slice frames
DELTA_REG = 1e-6


@dataclass(frozen=True)
class ExtrinsicPoint:
    """Second-order extrinsic data of graph(u) above the base point x."""

    x: np.ndarray
    u: float
    nu: np.ndarray  # n+1 contravariant components, upward
    shape_operator: np.ndarray  # A^i_j in graph coordinates
    induced_metric: np.ndarray  # gM_ij = g_ij + u_i u_j
    mean_curvature: float
    norm_a2: float
    principal: np.ndarray  # eigenvalues of A, ascending
    scalar_curvature: float  # R_M
    w: float
    grad: np.ndarray  # covariant u_i
    grad_up: np.ndarray  # contravariant u^i
    cov_hessian: np.ndarray
    base_jet: MetricJet

    @property
    def dim(self) -> int:
        return self.x.size

    def flipped(self) -> "ExtrinsicPoint":
        """Same surface with the downward normal: A and H flip sign, R_M does not."""
        return ExtrinsicPoint(
            x=self.x,
            u=self.u,
            nu=-self.nu,
            shape_operator=-self.shape_operator,
            induced_metric=self.induced_metric,
            mean_curvature=-self.mean_curvature,
            norm_a2=self.norm_a2,
            principal=np.sort(-self.principal),
            scalar_curvature=self.scalar_curvature,
            w=self.w,
            grad=self.grad,
            grad_up=self.grad_up,
            cov_hessian=self.cov_hessian,
            base_jet=self.base_jet,
        )


def extrinsic_point(field: ScalarField, base, x) -> ExtrinsicPoint:
    """Evaluate the full extrinsic package of graph(field) at base point x."""
    x = as_point(x, field.dim)
    jet = eval_jet(field, x)
    mj = metric_jet(base, x)
    n = field.dim

    grad = np.asarray(jet.gradient, dtype=float)
    grad_up = mj.ginv @ grad
    w2 = 1.0 + float(grad @ grad_up)
    w = float(np.sqrt(w2))

    hess_cov = jet.hessian - np.einsum("mkj,m->kj", mj.gamma, grad)
    proj = mj.ginv - np.outer(grad_up, grad_up) / w2
    a = proj @ hess_cov / w

    gm = mj.g + np.outer(grad, grad)
    h_form = gm @ a
    h_form = 0.5 * (h_form + h_form.T)
    principal = scipy.linalg.eigh(h_form, gm, eigvals_only=True)

    mean = float(np.trace(a))
    norm_a2 = float(np.trace(a @ a))

    nu_h = -grad_up / w  # horizontal contravariant components of nu
    ric_nn = float(nu_h @ mj.ricci @ nu_h)
    r_m = mean * mean - norm_a2 + mj.scalar - 2.0 * ric_nn

    nu = np.concatenate([nu_h, [1.0 / w]])
    return ExtrinsicPoint(
        x=x,
        u=float(jet.value),
        nu=nu,
        shape_operator=a,
        induced_metric=gm,
        mean_curvature=mean,
        norm_a2=norm_a2,
        principal=np.asarray(principal, dtype=float),
        scalar_curvature=float(r_m),
        w=w,
        grad=grad,
        grad_up=grad_up,
        cov_hessian=hess_cov,
        base_jet=mj,
    )


# ---------------------------------------------------------------------------
# adapted frames and level slices


def adapted_frame(grad_up: np.ndarray, g: np.ndarray) -> np.ndarray:
    """g-orthonormal frame with first column along grad_up.

    Remaining columns come from Gram-Schmidt over the coordinate axes taken
    in index order (the smallest-index axis wins ties), which makes the frame
    deterministic.
    """
    n = grad_up.size
    norm = float(np.sqrt(grad_up @ g @ grad_up))
    if norm == 0.0:
        raise ValueError("adapted frame needs a nonzero gradient")
    cols = [grad_up / norm]
    for k in range(n):
        if len(cols) == n:
            break
        v = np.zeros(n)
        v[k] = 1.0
        for e in cols:
            v = v - (e @ g @ v) * e
        vn = float(np.sqrt(v @ g @ v))
        if vn > 1e-10:
            cols.append(v / vn)
    if len(cols) != n:
        raise ValueError("failed to complete the adapted frame")
    return np.stack(cols, axis=1)


@dataclass(frozen=True)
class SliceFrame:
    """Level-slice data of Sigma = {u = eps} inside N x {eps}."""

    eps: float
    x: np.ndarray
    eta: np.ndarray  # contravariant, eta = -grad u/|grad u|
    a_sigma: np.ndarray  # shape operator of Sigma in the orthonormal frame E_2..E_n
    h_sigma: float
    cos_angle: float  # <nu, eta> = |grad u|/W in [0, 1]
    minor: np.ndarray  # (A|1) of the graph shape operator in the adapted frame
    frame: np.ndarray  # columns E_1 = grad u/|grad u|, E_2, ..., E_n
    grad_norm: float

    @property
    def dim(self) -> int:
        return self.x.size


def level_slice(
    field: ScalarField,
    base,
    eps: float,
    x,
    delta_reg: float = DELTA_REG,
    level_tol: float = 1e-8,
) -> SliceFrame:
    """Slice frame at a point of {u = eps}.

    Raises NotOnLevelError if u(x) != eps (up to level_tol) and
    NonRegularPointError when |grad u|_g < delta_reg; an exactly vanishing
    gradient is reported on the error as the distinct exact_zero outcome.
    """
    x = as_point(x, field.dim)
    point = extrinsic_point(field, base, x)
    if abs(point.u - eps) > level_tol * max(1.0, abs(eps)):
        raise NotOnLevelError(f"u(x) = {point.u} is not on the level {eps}")
    return slice_frame_of_point(point, eps, delta_reg=delta_reg)


def slice_frame_of_point(point: ExtrinsicPoint, eps: float, delta_reg: float = DELTA_REG) -> SliceFrame:
    """Build the slice frame from already-computed extrinsic data."""
    g = point.base_jet.g
    grad_norm = float(np.sqrt(point.grad @ point.grad_up))
    if grad_norm < delta_reg:
        raise NonRegularPointError(
            f"|grad u| = {grad_norm:.3e} below the regularity threshold {delta_reg:.3e}",
            grad_norm=grad_norm,
            exact_zero=(grad_norm == 0.0),
        )
    frame = adapted_frame(point.grad_up, g)
    # P^-1 = P^T g for a g-orthonormal frame
    a_adapted = frame.T @ g @ point.shape_operator @ frame
    minor = a_adapted[1:, 1:]
    tangent = frame[:, 1:]
    a_sigma = tangent.T @ point.cov_hessian @ tangent / grad_norm
    a_sigma = 0.5 * (a_sigma + a_sigma.T)
    eta = -point.grad_up / grad_norm
    return SliceFrame(
        eps=float(eps),
        x=point.x,
        eta=eta,
        a_sigma=a_sigma,
        h_sigma=float(np.trace(a_sigma)),
        cos_angle=grad_norm / point.w,
        minor=minor,
        frame=frame,
        grad_norm=grad_norm,
    )


def minor_relation_residual(frame: SliceFrame, point: ExtrinsicPoint) -> float:
    """Max-norm of (A|1) - <nu, eta> A_Sigma, recomputing the minor from the
    supplied extrinsic point in the frame's adapted basis."""
    if frame.dim != point.dim:
        raise ValueError("frame and point dimensions differ")
    if not np.allclose(frame.x, point.x, atol=1e-12):
        raise ValueError("frame and point sit at different base points")
    g = point.base_jet.g
    a_adapted = frame.frame.T @ g @ point.shape_operator @ frame.frame
    minor = a_adapted[1:, 1:]
    return maxabs(minor - frame.cos_angle * frame.a_sigma)


# ---------------------------------------------------------------------------
# independent oracles


def intrinsic_scalar_curvature(field: ScalarField, base, x, step: float = 1e-3) -> float:
    """Scalar curvature of the induced metric gM = g + du (x) du, computed by
    finite differences on the metric components. Independent of the
    Gauss-relation route inside extrinsic_point."""
    x = as_point(x, field.dim)

    def components(y):
        gy = base.components(y)
        dy = field.gradient(y)
        return gy + np.outer(dy, dy)

    induced = GeneralMetric(field.dim, components, step=step, name="induced")
    return metric_jet(induced, x).scalar


def slice_shape_sampled(
    field: ScalarField,
    eps: float,
    x,
    step: float = 1e-3,
    root_tol: float = 1e-12,
) -> np.ndarray:
    """Shape operator of the slice {u = eps} over a flat base, estimated from
    the level set itself.

    The level set is written locally as a graph over its tangent plane at x:
    points x + s E + tau(s) m with m = grad u/|grad u| are traced by 1-D root
    finding in tau, and the second fundamental form for eta = -m is the
    negated second difference of tau. Order-2 accurate in `step`; entirely
    independent of the Hessian of u.
    """
    from scipy.optimize import brentq

    x = as_point(x, field.dim)
    n = field.dim
    grad = field.gradient(x)
    gn = float(np.linalg.norm(grad))
    if gn < DELTA_REG:
        raise NonRegularPointError("sampled slice operator needs a regular point", grad_norm=gn)
    m = grad / gn
    frame = adapted_frame(grad, np.eye(n))
    tangent = frame[:, 1:]

    span = 10.0 * step + 10.0 * abs(field.value(x) - eps) / gn

    def tau(offset: np.ndarray) -> float:
        def f(t):
            return field.value(x + offset + t * m) - eps

        lo, hi = -span, span
        flo, fhi = f(lo), f(hi)
        if flo * fhi > 0:
            raise ValueError("level set left the sampling corridor")
        return brentq(f, lo, hi, xtol=root_tol)

    t0 = tau(np.zeros(n))
    out = np.zeros((n - 1, n - 1))
    for a in range(n - 1):
        tp = tau(step * tangent[:, a])
        tm = tau(-step * tangent[:, a])
        out[a, a] = (tp - 2.0 * t0 + tm) / step**2
    for a in range(n - 1):
        for b in range(a + 1, n - 1):
            tpp = tau(step * (tangent[:, a] + tangent[:, b]))
            tpm = tau(step * (tangent[:, a] - tangent[:, b]))
            tmp = tau(step * (-tangent[:, a] + tangent[:, b]))
            tmm = tau(step * (-tangent[:, a] - tangent[:, b]))
            out[a, b] = out[b, a] = (tpp - tpm - tmp + tmm) / (4.0 * step**2)
    return -out  # second form for eta = -m


def fd_mode(field: ScalarField, step: float | None = None) -> FiniteDifferenceField:
    """The same field with jets recomputed by central differences."""
    return FiniteDifferenceField(field, field.dim, step=step)


def gauss_oracle_residual(field: ScalarField, base, x, step: float = 1e-3) -> float:
    """|R_M(extrinsic route) - R(induced metric, FD route)| at x."""
    pt = extrinsic_point(field, base, x)
    return abs(pt.scalar_curvature - intrinsic_scalar_curvature(field, base, x, step=step))


def flat_base(dim: int) -> FlatMetric:
    return FlatMetric(dim)
