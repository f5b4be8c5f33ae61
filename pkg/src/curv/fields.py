"""Scalar fields u: R^n -> R with second-order jets.

Three evaluation modes are supported:

* analytic built-ins with closed-form gradient and Hessian,
* finite differences on any value callable (central stencils, order 2),
* gridded samples with local quadratic tensor interpolation.

A field carries its domain; `eval_jet` refuses points outside it (including
any finite-difference or interpolation margin) and refuses non-finite output.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NonFiniteJetError, OutOfDomainError
from .util import as_point

_EPS = float(np.finfo(float).eps)


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class Box:
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, x: np.ndarray, margin: float = 0.0) -> bool:
        lo = np.asarray(self.lo) + margin
        hi = np.asarray(self.hi) - margin
        return bool(np.all(x >= lo) and np.all(x <= hi))

    def ray_extent(self, center: np.ndarray, direction: np.ndarray, margin: float = 0.0) -> float:
        lo = np.asarray(self.lo) + margin
        hi = np.asarray(self.hi) - margin
        t = np.inf
        for k in range(len(direction)):
            d = direction[k]
            if d > 0:
                t = min(t, (hi[k] - center[k]) / d)
            elif d < 0:
                t = min(t, (lo[k] - center[k]) / d)
        return max(t, 0.0)


@dataclass(frozen=True)
class Ball:
    dim_: int
    radius: float
    center: tuple[float, ...] | None = None

    @property
    def dim(self) -> int:
        return self.dim_

    def _center(self) -> np.ndarray:
        return np.zeros(self.dim_) if self.center is None else np.asarray(self.center)

    def contains(self, x: np.ndarray, margin: float = 0.0) -> bool:
        return bool(np.linalg.norm(x - self._center()) <= self.radius - margin)

    def ray_extent(self, center: np.ndarray, direction: np.ndarray, margin: float = 0.0) -> float:
        # largest t with |center + t d - c| <= radius - margin
        c = center - self._center()
        r = self.radius - margin
        b = float(c @ direction)
        disc = b * b - (c @ c - r * r)
        if disc < 0:
            return 0.0
        return max(-b + np.sqrt(disc), 0.0)


@dataclass(frozen=True)
class Annulus:
    dim_: int
    inner: float
    outer: float
    center: tuple[float, ...] | None = None

    @property
    def dim(self) -> int:
        return self.dim_

    def _center(self) -> np.ndarray:
        return np.zeros(self.dim_) if self.center is None else np.asarray(self.center)

    def contains(self, x: np.ndarray, margin: float = 0.0) -> bool:
        r = float(np.linalg.norm(x - self._center()))
        return self.inner + margin <= r <= self.outer - margin

    def ray_extent(self, center: np.ndarray, direction: np.ndarray, margin: float = 0.0) -> float:
        c = center - self._center()
        r = self.outer - margin
        b = float(c @ direction)
        disc = b * b - (c @ c - r * r)
        if disc < 0:
            return 0.0
        return max(-b + np.sqrt(disc), 0.0)


def whole_space(dim: int) -> Ball:
    return Ball(dim, np.inf)


# ---------------------------------------------------------------------------
# jets and the field base class


@dataclass(frozen=True)
class Jet:
    value: float
    gradient: np.ndarray
    hessian: np.ndarray


class ScalarField:
    """Base class. Subclasses implement value/gradient/hessian."""

    dim: int
    domain: Box | Ball | Annulus
    name: str = "field"

    def value(self, x: np.ndarray) -> float:  # pragma: no cover - abstract
        raise NotImplementedError

    def gradient(self, x: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def hessian(self, x: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def jet(self, x: np.ndarray) -> Jet:
        return Jet(self.value(x), self.gradient(x), self.hessian(x))

    def margin(self, x: np.ndarray) -> float:
        """Boundary band the evaluation needs around x (0 for analytic)."""
        return 0.0


def eval_jet(field: ScalarField, x) -> Jet:
    """Evaluate (u, Du, D^2u) at x with domain and finiteness checks."""
    x = as_point(x, field.dim)
    if not field.domain.contains(x, margin=field.margin(x)):
        raise OutOfDomainError(f"point {x.tolist()} outside domain of {field.name}")
    jet = field.jet(x)
    if not (
        np.isfinite(jet.value)
        and np.all(np.isfinite(jet.gradient))
        and np.all(np.isfinite(jet.hessian))
    ):
        raise NonFiniteJetError(f"non-finite jet of {field.name} at {x.tolist()}")
    return jet


# ---------------------------------------------------------------------------
# analytic built-ins


class Paraboloid(ScalarField):
    """u = scale * |x|^2 / 2."""

    def __init__(self, dim: int, scale: float = 1.0):
        self.dim = dim
        self.scale = float(scale)
        self.domain = whole_space(dim)
        self.name = f"paraboloid(scale={scale})" if scale != 1.0 else "paraboloid"

    def value(self, x):
        return 0.5 * self.scale * float(x @ x)

    def gradient(self, x):
        return self.scale * np.asarray(x, dtype=float)

    def hessian(self, x):
        return self.scale * np.eye(self.dim)


class QuadraticCup(ScalarField):
    """u = sum_k c_k x_k^2 / 2 (anisotropic paraboloid)."""

    def __init__(self, coeffs: Sequence[float]):
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.dim = self.coeffs.size
        self.domain = whole_space(self.dim)
        self.name = f"cup({','.join(repr(float(c)) for c in coeffs)})"

    def value(self, x):
        return 0.5 * float(self.coeffs @ (x * x))

    def gradient(self, x):
        return self.coeffs * x

    def hessian(self, x):
        return np.diag(self.coeffs)


class Plane(ScalarField):
    """u = c . x"""

    def __init__(self, coeffs: Sequence[float]):
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.dim = self.coeffs.size
        self.domain = whole_space(self.dim)
        self.name = "plane"

    def value(self, x):
        return float(self.coeffs @ x)

    def gradient(self, x):
        return self.coeffs.copy()

    def hessian(self, x):
        return np.zeros((self.dim, self.dim))


class Constant(ScalarField):
    def __init__(self, dim: int, c: float = 0.0):
        self.dim = dim
        self.c = float(c)
        self.domain = whole_space(dim)
        self.name = f"constant({c})"

    def value(self, x):
        return self.c

    def gradient(self, x):
        return np.zeros(self.dim)

    def hessian(self, x):
        return np.zeros((self.dim, self.dim))


class SphereCap(ScalarField):
    """u = height + sqrt(radius^2 - |x|^2): the upper cap of a round sphere.

    The domain stops a small relative margin short of the equator, where the
    gradient blows up.
    """

    def __init__(self, dim: int, radius: float, height: float = 0.0, rim_margin: float = 1e-8):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.dim = dim
        self.radius = float(radius)
        self.height = float(height)
        self.domain = Ball(dim, radius * (1.0 - rim_margin))
        self.name = f"spherecap(radius={radius},height={height})"

    def _s(self, x) -> float:
        s2 = self.radius**2 - float(x @ x)
        if s2 <= 0:
            raise OutOfDomainError(f"point at or beyond the rim of {self.name}")
        return float(np.sqrt(s2))

    def value(self, x):
        return self.height + self._s(x)

    def gradient(self, x):
        return -np.asarray(x, dtype=float) / self._s(x)

    def hessian(self, x):
        s = self._s(x)
        x = np.asarray(x, dtype=float)
        return -np.eye(self.dim) / s - np.outer(x, x) / s**3


class PolynomialField(ScalarField):
    """u = sum of coeff * x^alpha over multi-indices alpha."""

    def __init__(self, dim: int, terms: Sequence[tuple[float, tuple[int, ...]]]):
        self.dim = dim
        self.terms = [(float(c), tuple(int(e) for e in a)) for c, a in terms]
        for _, a in self.terms:
            if len(a) != dim or any(e < 0 for e in a):
                raise ValueError(f"bad exponent tuple {a} for dimension {dim}")
        self.domain = whole_space(dim)
        self.name = "poly"

    @staticmethod
    def _mono(x, a):
        v = 1.0
        for xk, ek in zip(x, a):
            v *= xk**ek
        return v

    def value(self, x):
        return float(sum(c * self._mono(x, a) for c, a in self.terms))

    def gradient(self, x):
        g = np.zeros(self.dim)
        for c, a in self.terms:
            for k, ek in enumerate(a):
                if ek == 0:
                    continue
                aa = list(a)
                aa[k] -= 1
                g[k] += c * ek * self._mono(x, aa)
        return g

    def hessian(self, x):
        h = np.zeros((self.dim, self.dim))
        for c, a in self.terms:
            for k, ek in enumerate(a):
                if ek == 0:
                    continue
                for l, el_ in enumerate(a):
                    aa = list(a)
                    aa[k] -= 1
                    mult = ek
                    if l == k:
                        if aa[k] == 0:
                            continue
                        mult *= aa[k]
                    else:
                        if el_ == 0:
                            continue
                        mult *= el_
                    aa[l] -= 1
                    h[k, l] += c * mult * self._mono(x, aa)
        return h


class TrigField(ScalarField):
    """u = sum_k amp_k sin(freq_k . x + phase_k): smooth with bounded jets."""

    def __init__(self, amps, freqs, phases, domain=None, name="trig"):
        self.amps = np.asarray(amps, dtype=float)
        self.freqs = np.asarray(freqs, dtype=float)
        self.phases = np.asarray(phases, dtype=float)
        self.dim = self.freqs.shape[1]
        self.domain = domain if domain is not None else Ball(self.dim, 2.0)
        self.name = name

    def _args(self, x):
        return self.freqs @ x + self.phases

    def value(self, x):
        return float(self.amps @ np.sin(self._args(x)))

    def gradient(self, x):
        return (self.amps * np.cos(self._args(x))) @ self.freqs

    def hessian(self, x):
        w = -self.amps * np.sin(self._args(x))
        return np.einsum("k,ki,kj->ij", w, self.freqs, self.freqs)


def random_trig_field(
    dim: int,
    seed: int,
    modes: int = 4,
    amplitude: float = 0.6,
    freq_scale: float = 1.7,
    domain=None,
) -> TrigField:
    """Seeded random superposition of sinusoids; the suites' generic field."""
    rng = np.random.default_rng(seed)
    freqs = rng.uniform(-freq_scale, freq_scale, size=(modes, dim))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=modes)
    amps = rng.uniform(0.3, 1.0, size=modes)
    amps *= amplitude / amps.sum()
    return TrigField(amps, freqs, phases, domain=domain, name=f"trig(seed={seed})")


class RadialField(ScalarField):
    """u(x) = p(|x|) for a radial profile jet p, p', p''."""

    def __init__(
        self,
        dim: int,
        profile_jet: Callable[[float], tuple[float, float, float]],
        domain,
        name: str = "radial",
    ):
        self.dim = dim
        self.profile_jet = profile_jet
        self.domain = domain
        self.name = name

    def jet(self, x) -> Jet:
        r = float(np.linalg.norm(x))
        if r < 1e-12:
            # smooth at the origin only when p'(0) = 0; use the symmetric limit
            p, dp, ddp = self.profile_jet(max(r, 1e-12))
            return Jet(p, np.zeros(self.dim), ddp * np.eye(self.dim))
        p, dp, ddp = self.profile_jet(r)
        xu = np.asarray(x, dtype=float) / r
        grad = dp * xu
        hess = ddp * np.outer(xu, xu) + dp / r * (np.eye(self.dim) - np.outer(xu, xu))
        return Jet(p, grad, hess)

    def value(self, x):
        return self.jet(x).value

    def gradient(self, x):
        return self.jet(x).gradient

    def hessian(self, x):
        return self.jet(x).hessian


class RotatedField(ScalarField):
    """u_Q(x) = u(Q x) for orthogonal Q; used by isometry-invariance tests."""

    def __init__(self, base: ScalarField, q: np.ndarray):
        self.base = base
        self.q = np.asarray(q, dtype=float)
        self.dim = base.dim
        self.domain = base.domain if isinstance(base.domain, (Ball, Annulus)) else whole_space(base.dim)
        self.name = f"rotated({base.name})"

    def value(self, x):
        return self.base.value(self.q @ x)

    def gradient(self, x):
        return self.q.T @ self.base.gradient(self.q @ x)

    def hessian(self, x):
        return self.q.T @ self.base.hessian(self.q @ x) @ self.q


class NegatedField(ScalarField):
    def __init__(self, base: ScalarField):
        self.base = base
        self.dim = base.dim
        self.domain = base.domain
        self.name = f"neg({base.name})"

    def value(self, x):
        return -self.base.value(x)

    def gradient(self, x):
        return -self.base.gradient(x)

    def hessian(self, x):
        return -self.base.hessian(x)

    def margin(self, x):
        return self.base.margin(x)


class ScaledField(ScalarField):
    def __init__(self, base: ScalarField, factor: float):
        self.base = base
        self.factor = float(factor)
        self.dim = base.dim
        self.domain = base.domain
        self.name = f"scaled({base.name},{factor})"

    def value(self, x):
        return self.factor * self.base.value(x)

    def gradient(self, x):
        return self.factor * self.base.gradient(x)

    def hessian(self, x):
        return self.factor * self.base.hessian(x)

    def margin(self, x):
        return self.base.margin(x)


# ---------------------------------------------------------------------------
# finite-difference mode


class FiniteDifferenceField(ScalarField):
    """Jets by central differences on a value callable.

    With no explicit step, first derivatives use eps^(1/3) * max(1, |x|) and
    second derivatives eps^(1/4) * max(1, |x|); an explicit step is used for
    both (that is what convergence studies vary).
    """

    def __init__(self, func, dim: int, domain=None, step: float | None = None, name="fd"):
        self._func = func.value if isinstance(func, ScalarField) else func
        self.dim = dim
        self.domain = domain if domain is not None else (
            func.domain if isinstance(func, ScalarField) else whole_space(dim)
        )
        self.step = None if step is None else float(step)
        self.name = name if not isinstance(func, ScalarField) else f"fd({func.name})"

    def _steps(self, x) -> tuple[float, float]:
        if self.step is not None:
            return self.step, self.step
        s = max(1.0, float(np.linalg.norm(x)))
        return _EPS ** (1.0 / 3.0) * s, _EPS**0.25 * s

    def margin(self, x) -> float:
        h1, h2 = self._steps(x)
        return 2.0 * max(h1, h2)

    def value(self, x):
        return float(self._func(np.asarray(x, dtype=float)))

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        h, _ = self._steps(x)
        g = np.zeros(self.dim)
        for k in range(self.dim):
            e = np.zeros(self.dim)
            e[k] = h
            g[k] = (self._func(x + e) - self._func(x - e)) / (2.0 * h)
        return g

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        _, h = self._steps(x)
        n = self.dim
        out = np.zeros((n, n))
        f0 = self._func(x)
        for k in range(n):
            ek = np.zeros(n)
            ek[k] = h
            out[k, k] = (self._func(x + ek) - 2.0 * f0 + self._func(x - ek)) / (h * h)
        for k in range(n):
            for l in range(k + 1, n):
                ek = np.zeros(n)
                ek[k] = h
                el = np.zeros(n)
                el[l] = h
                v = (
                    self._func(x + ek + el)
                    - self._func(x + ek - el)
                    - self._func(x - ek + el)
                    + self._func(x - ek - el)
                ) / (4.0 * h * h)
                out[k, l] = out[l, k] = v
        return out


# ---------------------------------------------------------------------------
# gridded mode

GRID_MIN_SAMPLES = 5


class GridField(ScalarField):
    """Uniform tensor grid with local quadratic (3-point per axis) interpolation.

    Queries within a 2h band of the grid boundary are out of domain.
    """

    def __init__(self, origin, h: float, values: np.ndarray, name="grid"):
        self.origin = np.asarray(origin, dtype=float)
        self.h = float(h)
        self.values = np.asarray(values, dtype=float)
        self.dim = self.values.ndim
        if self.origin.size != self.dim:
            raise ValueError("origin dimension does not match sample array rank")
        if self.h <= 0:
            raise ValueError("grid spacing must be positive")
        if min(self.values.shape) < GRID_MIN_SAMPLES:
            raise ValueError(f"need at least {GRID_MIN_SAMPLES} samples per axis")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid samples must be finite")
        lo = self.origin
        hi = self.origin + self.h * (np.asarray(self.values.shape) - 1)
        self.domain = Box(tuple(lo), tuple(hi))
        self.name = name

    def margin(self, x) -> float:
        return 2.0 * self.h

    # quadratic basis on the node offsets {-1, 0, +1}
    @staticmethod
    def _basis(t: float):
        n = np.array([0.5 * t * (t - 1.0), 1.0 - t * t, 0.5 * t * (t + 1.0)])
        dn = np.array([t - 0.5, -2.0 * t, t + 0.5])
        ddn = np.array([1.0, -2.0, 1.0])
        return n, dn, ddn

    def _local(self, x):
        idx = np.rint((x - self.origin) / self.h).astype(int)
        idx = np.clip(idx, 1, np.asarray(self.values.shape) - 2)
        t = (x - (self.origin + idx * self.h)) / self.h
        return idx, t

    def jet(self, x) -> Jet:
        x = np.asarray(x, dtype=float)
        idx, t = self._local(x)
        basis = [self._basis(tk) for tk in t]
        value = 0.0
        grad = np.zeros(self.dim)
        hess = np.zeros((self.dim, self.dim))
        for offsets in itertools.product((-1, 0, 1), repeat=self.dim):
            v = float(self.values[tuple(idx + np.asarray(offsets))])
            w = 1.0
            for k, o in enumerate(offsets):
                w *= basis[k][0][o + 1]
            value += v * w
            for k in range(self.dim):
                wk = 1.0
                for m, o in enumerate(offsets):
                    wk *= basis[m][1][o + 1] if m == k else basis[m][0][o + 1]
                grad[k] += v * wk
                for l in range(k, self.dim):
                    wkl = 1.0
                    for m, o in enumerate(offsets):
                        if m == k and m == l:
                            wkl *= basis[m][2][o + 1]
                        elif m == k:
                            wkl *= basis[m][1][o + 1]
                        elif m == l:
                            wkl *= basis[m][1][o + 1]
                        else:
                            wkl *= basis[m][0][o + 1]
                    hess[k, l] += v * wkl
        for k in range(self.dim):
            for l in range(k):
                hess[k, l] = hess[l, k]
        grad /= self.h
        hess /= self.h * self.h
        return Jet(value, grad, hess)

    def value(self, x):
        return self.jet(x).value

    def gradient(self, x):
        return self.jet(x).gradient

    def hessian(self, x):
        return self.jet(x).hessian

    # ---- file round trip: header "n,h,origin...,counts...", then one sample
    # per line in row-major (C) order.

    def write(self, path) -> None:
        header = [repr(self.dim), repr(self.h)]
        header += [repr(float(v)) for v in self.origin]
        header += [repr(int(c)) for c in self.values.shape]
        lines = [",".join(header)]
        lines += [repr(float(v)) for v in self.values.ravel(order="C")]
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def read(cls, path) -> "GridField":
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        head = lines[0].split(",")
        dim = int(float(head[0]))
        if len(head) != 2 + 2 * dim:
            raise ValueError(f"grid header needs {2 + 2 * dim} entries, got {len(head)}")
        h = float(head[1])
        origin = [float(v) for v in head[2 : 2 + dim]]
        counts = [int(float(v)) for v in head[2 + dim :]]
        expected = int(np.prod(counts))
        if len(lines) - 1 != expected:
            raise ValueError(f"grid body has {len(lines) - 1} samples, expected {expected}")
        values = np.array([float(v) for v in lines[1:]], dtype=float).reshape(counts, order="C")
        return cls(origin, h, values, name=f"grid({path})")


def sample_to_grid(field: ScalarField, origin, h: float, counts) -> GridField:
    """Sample an analytic field onto a uniform grid."""
    origin = np.asarray(origin, dtype=float)
    counts = tuple(int(c) for c in counts)
    values = np.empty(counts)
    for idx in itertools.product(*(range(c) for c in counts)):
        values[idx] = field.value(origin + h * np.asarray(idx, dtype=float))
    return GridField(origin, h, values, name=f"gridded({field.name})")
