"""Elementary symmetric invariants of square matrices.

For a real n x n matrix A (n >= 2) with first row/column singled out, the
product sigma1(A) * sigma1(A|1) splits exactly as

    sigma2(A) + n/(2(n-1)) * sigma1(A|1)^2
             + sum_{i<j} a_ij a_ji
             + 1/(2(n-1)) * sum_{2<=i<j} (a_ii - a_jj)^2

where (A|1) is the lower-right (n-1) x (n-1) minor. When every off-diagonal
product a_ij a_ji is nonnegative the last two groups are nonnegative, giving
the Newton-type bound

    sigma1(A) * sigma1(A|1) >= sigma2(A) + n/(2(n-1)) * sigma1(A|1)^2

with equality exactly when the minor diagonal is constant and all
off-diagonal products vanish.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SignConditionError
from .util import maxabs

#: relative tolerance for the equality diagnostics and the sign precondition
DEFAULT_EQUALITY_TOL = 1e-8


def _checked(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 2:
        raise ValueError("matrix order must be at least 2")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def sigma1(a) -> float:
    """Trace of A."""
    return float(np.trace(_checked(a)))


def sigma1_minor(a) -> float:
    """Trace of the minor (A|1): the diagonal sum skipping the first entry."""
    a = _checked(a)
    return float(np.trace(a) - a[0, 0])


def sigma2(a) -> float:
    """Second elementary symmetric invariant, sum_{i<j} (a_ii a_jj - a_ij a_ji).

    Computed definitionally; tests cross-check against (sigma1^2 - tr A^2)/2.
    """
    a = _checked(a)
    d = np.diagonal(a)
    i, j = np.triu_indices(a.shape[0], k=1)
    return float(np.sum(d[i] * d[j] - a[i, j] * a[j, i]))


def _decomposition(a: np.ndarray) -> tuple[float, float]:
    """(lhs, rhs) of the exact splitting above."""
    n = a.shape[0]
    d = np.diagonal(a)
    s1 = float(d.sum())
    s1m = s1 - float(a[0, 0])
    i, j = np.triu_indices(n, k=1)
    offdiag = float(np.sum(a[i, j] * a[j, i]))
    s2 = float(np.sum(d[i] * d[j])) - offdiag
    dm = d[1:]
    # sum_{i<j} (d_i - d_j)^2 over the minor diagonal
    m = n - 1
    spread = m * float(np.sum(dm * dm)) - float(dm.sum()) ** 2
    lhs = s1 * s1m
    rhs = s2 + n / (2.0 * (n - 1.0)) * s1m**2 + offdiag + spread / (2.0 * (n - 1.0))
    return lhs, rhs


def identity_residual(a) -> float:
    """lhs - rhs of the exact splitting; zero up to roundoff for every matrix."""
    lhs, rhs = _decomposition(_checked(a))
    return lhs - rhs


@dataclass(frozen=True)
class NewtonGap:
    """Gap of the Newton-type bound plus its equality diagnostics."""

    gap: float
    minor_diag_spread: float
    max_offdiag_product: float
    minor_diag_equal: bool
    offdiag_products_zero: bool

    @property
    def equality(self) -> bool:
        return self.minor_diag_equal and self.offdiag_products_zero


def newton_gap(a, tol: float = DEFAULT_EQUALITY_TOL) -> NewtonGap:
    """Evaluate sigma1*sigma1_minor - sigma2 - n/(2(n-1))*sigma1_minor^2.

    Requires a_ij a_ji >= 0 for all i != j (up to tol, relative to the squared
    max-norm); raises SignConditionError otherwise. Under that condition the
    gap is nonnegative up to roundoff. Equality flags use tol relative to the
    matrix max-norm.
    """
    a = _checked(a)
    n = a.shape[0]
    scale = max(1.0, maxabs(a))
    i, j = np.triu_indices(n, k=1)
    products = a[i, j] * a[j, i]
    if products.size and float(products.min()) < -tol * scale * scale:
        raise SignConditionError(
            f"off-diagonal product a_ij*a_ji = {products.min():.3e} violates the sign condition"
        )
    d = np.diagonal(a)
    s1 = float(d.sum())
    s1m = s1 - float(a[0, 0])
    s2 = float(np.sum(d[i] * d[j] - products))
    gap = s1 * s1m - s2 - n / (2.0 * (n - 1.0)) * s1m**2
    dm = d[1:]
    spread = float(dm.max() - dm.min()) if dm.size else 0.0
    max_prod = float(np.max(np.abs(products))) if products.size else 0.0
    return NewtonGap(
        gap=float(gap),
        minor_diag_spread=spread,
        max_offdiag_product=max_prod,
        minor_diag_equal=spread <= tol * scale,
        offdiag_products_zero=max_prod <= tol * scale * scale,
    )


def identity_residual_batch(a: np.ndarray) -> np.ndarray:
    """Residuals for a stack of matrices, shape (m, n, n) -> (m,).

    Vectorized version of identity_residual for large randomized suites.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 3 or a.shape[1] != a.shape[2] or a.shape[1] < 2:
        raise ValueError(f"expected shape (m, n, n) with n >= 2, got {a.shape}")
    n = a.shape[1]
    d = np.diagonal(a, axis1=1, axis2=2)
    s1 = d.sum(axis=1)
    s1m = s1 - a[:, 0, 0]
    tr_sq = np.einsum("mij,mji->m", a, a)
    diag_sq = np.sum(d * d, axis=1)
    offdiag = 0.5 * (tr_sq - diag_sq)
    s2 = 0.5 * (s1 * s1 - tr_sq)
    dm = d[:, 1:]
    spread = (n - 1) * np.sum(dm * dm, axis=1) - dm.sum(axis=1) ** 2
    lhs = s1 * s1m
    rhs = s2 + n / (2.0 * (n - 1.0)) * s1m**2 + offdiag + spread / (2.0 * (n - 1.0))
    return lhs - rhs


@dataclass(frozen=True)
class IdentitySuiteResult:
    seed: int
    orders: tuple[int, ...]
    trials: int
    max_rel_residual: float
    worst_order: int

    @property
    def passed(self) -> bool:
        return self.max_rel_residual <= 1e-10


def randomized_identity_suite(
    orders=(2, 3, 4, 5, 6, 7, 8), trials: int = 100_000, seed: int = 0, batch: int = 20_000
) -> IdentitySuiteResult:
    """Check the splitting on `trials` matrices with i.i.d. U(-1,1) entries.

    Trials are distributed round-robin over the requested orders; the residual
    is measured relative to max(1, |lhs|).
    """
    orders = tuple(int(n) for n in orders)
    if not orders or min(orders) < 2:
        raise ValueError("orders must be integers >= 2")
    rng = np.random.default_rng(seed)
    counts = {n: trials // len(orders) for n in orders}
    for k in range(trials - sum(counts.values())):
        counts[orders[k % len(orders)]] += 1
    worst = 0.0
    worst_n = orders[0]
    for n in orders:
        left = counts[n]
        while left > 0:
            m = min(batch, left)
            left -= m
            a = rng.uniform(-1.0, 1.0, size=(m, n, n))
            res = identity_residual_batch(a)
            lhs = np.trace(a, axis1=1, axis2=2) * (
                np.trace(a, axis1=1, axis2=2) - a[:, 0, 0]
            )
            rel = np.abs(res) / np.maximum(1.0, np.abs(lhs))
            r = float(rel.max())
            if r > worst:
                worst, worst_n = r, n
    return IdentitySuiteResult(
        seed=seed,
        orders=orders,
        trials=trials,
        max_rel_residual=worst,
        worst_order=worst_n,
    )
