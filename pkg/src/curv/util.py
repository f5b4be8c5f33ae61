"""Small numeric helpers used across modules."""
from __future__ import annotations

import numpy as np

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def as_point(x, dim: int | None = None) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D point, got shape {x.shape}")
    if dim is not None and x.size != dim:
        raise ValueError(f"expected a point of dimension {dim}, got {x.size}")
    return x


def maxabs(a) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def ring_directions(count: int) -> np.ndarray:
    """count unit vectors in the plane, golden-angle spaced (no axis bias)."""
    k = np.arange(count)
    th = np.mod(k * GOLDEN_ANGLE, 2.0 * np.pi)
    return np.stack([np.cos(th), np.sin(th)], axis=1)


def unit_directions(dim: int, count: int, seed: int) -> np.ndarray:
    """Deterministic unit vectors: golden-angle ring in 2-D, seeded Gaussian higher."""
    if dim == 2:
        return ring_directions(count)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def richardson_limit(s: np.ndarray, y: np.ndarray) -> float:
    """Limit of y(s) as s -> 0 assuming y = y0 + c*s + O(s^2).

    Uses the two smallest s samples (first-order elimination).
    """
    order = np.argsort(s)
    s0, s1 = s[order[0]], s[order[1]]
    y0, y1 = y[order[0]], y[order[1]]
    return float((y0 * s1 - y1 * s0) / (s1 - s0))


def convergence_slopes(h: np.ndarray, err: np.ndarray) -> np.ndarray:
    """log2 error-reduction rates for a step sequence h, h/2, h/4, ..."""
    h = np.asarray(h, dtype=float)
    err = np.asarray(err, dtype=float)
    order = np.argsort(-h)
    e = np.maximum(err[order], 1e-300)
    hh = h[order]
    return np.log(e[:-1] / e[1:]) / np.log(hh[:-1] / hh[1:])
