"""Sliding cone barrier on an annulus.

The barrier family is psi_lambda(x) = lambda (1 - |x|), the cone over the
unit sphere. Starting from a dominating lambda and decreasing it, the first
value at which psi_lambda touches u from above on the sampled shrunken
annulus is lambda_star. At an interior touching point x0 the gradient bound

    |Du|(x0) >= |D_r u|(x0) >= lambda_star

holds (the touch is a stationary point of u - psi); a touch on the outermost
sampled ring carries no such bound and is flagged instead. The slice
comparison at the touch uses the ring mean curvature

    ((n-1)/rho) (1 + eps^2 - rho^2)/2

of the sphere of radius rho at height eps, taken with the inward normal, in
the round-sphere-factor ambient.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NoTouchError, NonRegularPointError
from .fields import Annulus, RadialField, ScalarField
from .graphgeom import extrinsic_point, slice_frame_of_point
from .metrics import spherical_ambient
from .util import as_point, unit_directions

TOUCH_TOL = 1e-8
BISECT_TOL = 1e-10


def barrier_value(lam: float, x) -> float:
    """psi_lambda(x) = lambda (1 - |x|)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return float(lam * (1.0 - np.linalg.norm(x)))


def ring_mean_curvature(radius: float, eps: float, dim: int) -> float:
    """Mean curvature (inward normal, round-sphere factor) of the radius
    sphere in the slice at height eps."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    return (dim - 1.0) / radius * (1.0 + eps * eps - radius * radius) / 2.0


def ring_mean_curvature_via_slices(radius: float, eps: float, dim: int) -> float:
    """Same ring value, but through the generic slice/conformal pipeline on a
    radial cone field; serves as an independent cross-check."""
    from .conformal import slice_trace_from_ambient

    def cone(r):
        return r - radius + eps, 1.0, 0.0

    field = RadialField(
        dim,
        cone,
        Annulus(dim, radius / 2.0, min(2.0 * radius, radius + 0.5)),
        name="cone",
    )
    x0 = np.zeros(dim)
    x0[0] = radius
    pt = extrinsic_point(field, spherical_ambient(dim).base, x0)
    fr = slice_frame_of_point(pt, eps)
    trace = slice_trace_from_ambient(fr, pt, spherical_ambient(dim))
    return trace.hbar_sigma


# ---------------------------------------------------------------------------
# sampling


def sample_annulus(
    dim: int, inner: float, outer: float, radial: int = 512, angular: int = 128, seed: int = 0
) -> np.ndarray:
    """Deterministic sample points of the annulus inner <= |x| <= outer: a
    radial grid crossed with golden-angle directions (2-D) or seeded unit
    vectors (higher dimensions)."""
    radii = np.linspace(inner, outer, radial)
    dirs = unit_directions(dim, angular, seed)
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, dim)


# ---------------------------------------------------------------------------
# the slide


@dataclass(frozen=True)
class BarrierRun:
    dim: int
    annulus: tuple[float, float]
    a_prime: float
    r_out: float
    lam_max: float
    lam_star: float
    x0: tuple[float, ...]
    u0: float
    grad_norm: float
    radial_derivative: float
    touch_gap: float  # max_u (u - psi_{lam_star}) over the samples
    interior_touch: bool
    boundary_touch: bool
    degenerate: bool
    radial: int
    angular: int
    seed: int

    @property
    def successful(self) -> bool:
        """A slide whose touching point is interior; Eq-style gradient bound applies."""
        return (not self.degenerate) and self.interior_touch


def _newton_refine_ratio(field: ScalarField, x: np.ndarray, inner: float, outer: float,
                         cell: float, iters: int = 30) -> np.ndarray | None:
    """Newton ascent on q(x) = u(x)/(1 - |x|) from x; None when it leaves the
    trust region or fails to converge."""
    x = x.copy()
    start = x.copy()
    for _ in range(iters):
        r = float(np.linalg.norm(x))
        if not (inner < r < outer):
            return None
        s = 1.0 - r
        xhat = x / r
        u = field.value(x)
        du = field.gradient(x)
        hu = field.hessian(x)
        grad_q = du / s + u * xhat / s**2
        proj = (np.eye(x.size) - np.outer(xhat, xhat)) / r
        hess_q = (
            hu / s
            + (np.outer(du, xhat) + np.outer(xhat, du)) / s**2
            + u * proj / s**2
            + 2.0 * u * np.outer(xhat, xhat) / s**3
        )
        try:
            step = np.linalg.solve(hess_q, -grad_q)
        except np.linalg.LinAlgError:
            return None
        if np.linalg.norm(step) > cell:
            return None
        x = x + step
        if np.linalg.norm(x - start) > 2.5 * cell:
            return None
        if np.linalg.norm(step) < 1e-13 * max(1.0, np.linalg.norm(x)):
            r = float(np.linalg.norm(x))
            if inner < r < outer:
                return x
            return None
    return None


def _radial_polish(field: ScalarField, x: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Maximize q along the ray through x over |x| in [lo, hi]."""
    d = x / np.linalg.norm(x)

    def neg_q(r):
        return -field.value(r * d) / (1.0 - r)

    res = minimize_scalar(neg_q, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13})
    return float(res.x) * d


def slide(
    field: ScalarField,
    annulus: tuple[float, float],
    a_prime: float,
    lam_max: float,
    radial: int = 512,
    angular: int = 128,
    seed: int = 0,
    outer_margin: float | None = None,
    touch_tol: float = TOUCH_TOL,
) -> BarrierRun:
    """Slide psi_lambda down onto u over the shrunken annulus (a_prime, outer).

    Bisection on lambda over the sample grid locates the touching value; the
    touching point is then polished (Newton on the touching ratio for
    interior candidates, 1-D radial refinement otherwise). Outcomes: a normal
    run when max u > touch_tol; the degenerate lambda_star = 0 when
    |max u| <= touch_tol; NoTouchError when u < -touch_tol everywhere.
    """
    a, outer = float(annulus[0]), float(annulus[1])
    if not (a < a_prime < outer):
        raise ValueError(f"need a < a_prime < outer, got {a}, {a_prime}, {outer}")
    if outer_margin is None:
        outer_margin = (outer - a_prime) / radial
    r_out = outer - outer_margin
    if r_out <= a_prime:
        raise ValueError("outer margin leaves an empty radial range")

    pts = sample_annulus(field.dim, a_prime, r_out, radial=radial, angular=angular, seed=seed)
    vals = np.array([field.value(p) for p in pts])
    norms = np.linalg.norm(pts, axis=1)
    umax = float(vals.max())

    if umax < -touch_tol:
        raise NoTouchError(f"field is below {-touch_tol} everywhere on the sampled annulus")

    if umax <= touch_tol:
        i = int(vals.argmax())
        x0 = pts[i]
        du = field.gradient(x0)
        return BarrierRun(
            dim=field.dim, annulus=(a, outer), a_prime=a_prime, r_out=r_out,
            lam_max=lam_max, lam_star=0.0, x0=tuple(float(v) for v in x0),
            u0=float(vals[i]), grad_norm=float(np.linalg.norm(du)),
            radial_derivative=float(du @ (x0 / norms[i])),
            touch_gap=umax, interior_touch=False, boundary_touch=False,
            degenerate=True, radial=radial, angular=angular, seed=seed,
        )

    slack = 1.0 - norms  # positive on the sampled range

    def excess(lam: float) -> float:
        return float((vals - lam * slack).max())

    if excess(lam_max) > 0.0:
        raise ValueError(
            f"lam_max = {lam_max} does not dominate the field on the sampled annulus"
        )
    lo, hi = 0.0, float(lam_max)
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    lam_grid = hi
    i0 = int((vals - lam_grid * slack).argmax())
    x_grid = pts[i0]

    spacing = (r_out - a_prime) / max(radial - 1, 1)
    on_rim = norms[i0] >= r_out - 0.5 * spacing
    x0 = None
    if not on_rim:
        x0 = _newton_refine_ratio(field, x_grid, a_prime, r_out, cell=4.0 * spacing)
    if x0 is None:
        lo_r = max(a_prime, norms[i0] - spacing)
        hi_r = min(r_out, norms[i0] + spacing)
        x0 = _radial_polish(field, x_grid, lo_r, hi_r)

    r0 = float(np.linalg.norm(x0))
    u0 = float(field.value(x0))
    lam_star = u0 / (1.0 - r0)
    if lam_star < lam_grid:  # polish must not lose the grid certificate
        x0, r0, u0, lam_star = x_grid, float(norms[i0]), float(vals[i0]), lam_grid
    du = field.gradient(x0)
    boundary = r0 >= r_out - 1.5 * spacing
    return BarrierRun(
        dim=field.dim, annulus=(a, outer), a_prime=a_prime, r_out=r_out,
        lam_max=lam_max, lam_star=float(lam_star), x0=tuple(float(v) for v in x0),
        u0=u0, grad_norm=float(np.linalg.norm(du)),
        radial_derivative=float(du @ (x0 / r0)),
        touch_gap=float((vals - lam_star * slack).max()),
        interior_touch=not boundary, boundary_touch=boundary,
        degenerate=False, radial=radial, angular=angular, seed=seed,
    )


# ---------------------------------------------------------------------------
# comparison bounds at the touching point


@dataclass(frozen=True)
class ComparisonBounds:
    upper: float  # (n-1) u(x0) / |Du|(x0)
    cap: float  # (n-1) (1 - |x0|)
    lower: float  # ring mean curvature at (|x0|, u(x0))
    upper_le_cap: bool
    cap_lt_lower: bool
    ordering_skipped: bool


def comparison_bounds(run: BarrierRun, dim: int | None = None, edge_margin: float = 1e-3) -> ComparisonBounds:
    """Bound pair at the touching point; the ordering check is skipped within
    edge_margin of |x0| = 1 where both sides collapse."""
    n = run.dim if dim is None else dim
    rho = float(np.linalg.norm(run.x0))
    if run.grad_norm < 1e-12:
        raise NonRegularPointError("comparison bounds need |Du|(x0) > 0", grad_norm=run.grad_norm)
    upper = (n - 1.0) * run.u0 / run.grad_norm
    cap = (n - 1.0) * (1.0 - rho)
    lower = ring_mean_curvature(rho, run.u0, n)
    skipped = rho > 1.0 - edge_margin
    return ComparisonBounds(
        upper=float(upper),
        cap=float(cap),
        lower=float(lower),
        upper_le_cap=bool(upper <= cap + 1e-12),
        cap_lt_lower=bool(cap < lower) if not skipped else False,
        ordering_skipped=bool(skipped),
    )


def gradient_bound_margin(run: BarrierRun) -> float:
    """min(|Du| - |D_r u|, |D_r u| - lambda_star) at the touching point; both
    must be >= -1e-6 for a successful slide."""
    return float(
        min(run.grad_norm - abs(run.radial_derivative), abs(run.radial_derivative) - run.lam_star)
    )
