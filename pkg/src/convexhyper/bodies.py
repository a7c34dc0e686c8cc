"""Convex-body representations and support-function evaluation.

A body is a symbolic expression tree: explicit leaves (``Polytope``,
``Ball``, ``Ellipsoid``, ``Sampled``) combined by ``Sum`` (Minkowski sum),
``Scaled`` and ``Rotated`` nodes.  Everything is evaluated lazily through
its support function h(x) = sup { <p, x> : p in body }, extended
positively homogeneously off the unit sphere.

All values are immutable; operations are pure functions and safe to call
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import (
    DimensionMismatchError,
    InvalidArgumentError,
    InvalidBodyError,
)
from .quadrature import SphericalGrid

# Rows-per-block cap for (directions x vertices) intermediates.
_BLOCK_ENTRIES = 16_000_000


def unit_vector(x) -> np.ndarray:
    """Validate that x is a unit vector and return it as a float array."""
    u = np.asarray(x, dtype=float)
    if u.ndim != 1:
        raise InvalidArgumentError("direction must be a 1-D vector")
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise InvalidArgumentError(f"direction must be unit length, got {u!r}")
    return u


@dataclass(frozen=True)
class Rotation:
    """Element of O(n): an orthogonal matrix with det +-1."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(np.asarray(self.matrix, dtype=float))
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError("rotation matrix must be square")
        n = m.shape[0]
        if not np.allclose(m.T @ m, np.eye(n), atol=1e-10):
            raise InvalidArgumentError("matrix is not orthogonal")
        if abs(abs(np.linalg.det(m)) - 1.0) > 1e-10:
            raise InvalidArgumentError("matrix determinant must be +-1")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def compose(self, other: "Rotation") -> "Rotation":
        return Rotation(self.matrix @ other.matrix)

    def inverse(self) -> "Rotation":
        return Rotation(self.matrix.T)

    @staticmethod
    def identity(n: int) -> "Rotation":
        return Rotation(np.eye(n))


@dataclass(frozen=True)
class SupportSamples:
    """Support-function values on a spherical grid (the map u -> h(u))."""

    grid: SphericalGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        object.__setattr__(self, "values", v)
        if v.shape != (len(self.grid),):
            raise InvalidArgumentError("values must match grid node count")


class Body:
    """Marker base class for body representation nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Polytope(Body):
    """Convex hull of a finite vertex set (redundant vertices allowed).

    Lower-dimensional compacta (segments, points) are permitted; use
    ``is_full_dimensional`` to distinguish them.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.atleast_2d(np.asarray(self.vertices, dtype=float)))
        object.__setattr__(self, "vertices", v)
        if v.size == 0:
            raise InvalidBodyError("polytope needs at least one vertex")
        if v.ndim != 2:
            raise InvalidBodyError("vertices must be a 2-D array")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def is_full_dimensional(self) -> bool:
        centered = self.vertices - self.vertices.mean(axis=0)
        return np.linalg.matrix_rank(centered, tol=1e-10) == self.dim


@dataclass(frozen=True)
class Ball(Body):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.center, dtype=float))
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if c.ndim != 1:
            raise InvalidBodyError("ball center must be a vector")
        if self.radius <= 0:
            raise InvalidBodyError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.shape[0]


@dataclass(frozen=True)
class Ellipsoid(Body):
    """Image of the unit ball: center + A * B^n with A symmetric positive-definite."""

    center: np.ndarray
    matrix: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.center, dtype=float))
        a = np.ascontiguousarray(np.asarray(self.matrix, dtype=float))
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "matrix", a)
        n = c.shape[0]
        if a.shape != (n, n):
            raise InvalidBodyError("ellipsoid matrix must be n x n")
        if not np.allclose(a, a.T, atol=1e-10 * max(1.0, np.abs(a).max())):
            raise InvalidBodyError("ellipsoid matrix must be symmetric")
        if np.linalg.eigvalsh(a).min() <= 0:
            raise InvalidBodyError("ellipsoid matrix must be positive definite")

    @property
    def dim(self) -> int:
        return self.center.shape[0]


@dataclass(frozen=True)
class Sum(Body):
    """Minkowski sum of two bodies."""

    left: Body
    right: Body

    def __post_init__(self):
        if body_dim(self.left) != body_dim(self.right):
            raise DimensionMismatchError(
                "cannot sum bodies of different dimensions"
            )

    @property
    def dim(self) -> int:
        return body_dim(self.left)


@dataclass(frozen=True)
class Scaled(Body):
    factor: float
    inner: Body

    def __post_init__(self):
        object.__setattr__(self, "factor", float(self.factor))
        if self.factor < 0:
            raise InvalidArgumentError("scale factor must be nonnegative")

    @property
    def dim(self) -> int:
        return body_dim(self.inner)


@dataclass(frozen=True)
class Rotated(Body):
    rotation: Rotation
    inner: Body

    def __post_init__(self):
        if self.rotation.dim != body_dim(self.inner):
            raise DimensionMismatchError("rotation dimension mismatch")

    @property
    def dim(self) -> int:
        return body_dim(self.inner)


@dataclass(frozen=True)
class Sampled(Body):
    """Body reconstructed from support samples on a grid.

    Off-node directions are interpolated: piecewise linear in angle for
    2-D uniform grids, bilinear in (theta, phi) on 3-D product grids
    (clamped at the polar caps), nearest node otherwise.  The error is
    O(cell^2) for smooth bodies.
    """

    samples: SupportSamples

    @property
    def grid(self) -> SphericalGrid:
        return self.samples.grid

    @property
    def values(self) -> np.ndarray:
        return self.samples.values

    @property
    def dim(self) -> int:
        return self.samples.grid.dim


def body_dim(body: Body) -> int:
    return body.dim


def contains_sampled(body: Body) -> bool:
    """True when the expression tree has a Sampled leaf (interpolated eval)."""
    if isinstance(body, Sampled):
        return True
    if isinstance(body, Sum):
        return contains_sampled(body.left) or contains_sampled(body.right)
    if isinstance(body, (Scaled, Rotated)):
        return contains_sampled(body.inner)
    return False


def sampled_cell_angle(body: Body) -> float:
    """Largest interpolation cell angle among Sampled leaves (0 if none)."""
    if isinstance(body, Sampled):
        return body.grid.max_cell_angle
    if isinstance(body, Sum):
        return max(sampled_cell_angle(body.left), sampled_cell_angle(body.right))
    if isinstance(body, (Scaled, Rotated)):
        return sampled_cell_angle(body.inner)
    return 0.0


def _polytope_support(vertices: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    n_dirs = dirs.shape[0]
    n_vert = vertices.shape[0]
    if n_dirs * n_vert <= _BLOCK_ENTRIES:
        return (dirs @ vertices.T).max(axis=1)
    out = np.empty(n_dirs)
    block = max(1, _BLOCK_ENTRIES // n_vert)
    for start in range(0, n_dirs, block):
        stop = min(start + block, n_dirs)
        out[start:stop] = (dirs[start:stop] @ vertices.T).max(axis=1)
    return out


def _interp_uniform_2d(grid: SphericalGrid, values: np.ndarray, units: np.ndarray) -> np.ndarray:
    m = len(grid.angles)
    theta = np.mod(np.arctan2(units[:, 1], units[:, 0]), 2.0 * math.pi)
    pos = theta * m / (2.0 * math.pi)
    k0 = np.floor(pos).astype(int) % m
    frac = pos - np.floor(pos)
    k1 = (k0 + 1) % m
    return (1.0 - frac) * values[k0] + frac * values[k1]


def _interp_lonlat_3d(grid: SphericalGrid, values: np.ndarray, units: np.ndarray) -> np.ndarray:
    thetas = grid.thetas
    n_lat = len(thetas)
    n_lon = len(grid.phis)
    table = values.reshape(n_lat, n_lon)

    theta = np.arccos(np.clip(units[:, 2], -1.0, 1.0))
    phi = np.mod(np.arctan2(units[:, 1], units[:, 0]), 2.0 * math.pi)

    pos_p = phi * n_lon / (2.0 * math.pi)
    j0 = np.floor(pos_p).astype(int) % n_lon
    fp = pos_p - np.floor(pos_p)
    j1 = (j0 + 1) % n_lon

    i1 = np.searchsorted(thetas, theta)
    # clamp polar caps onto the extreme rings
    i1 = np.clip(i1, 1, n_lat - 1)
    i0 = i1 - 1
    span = thetas[i1] - thetas[i0]
    ft = np.clip((theta - thetas[i0]) / span, 0.0, 1.0)

    v00 = table[i0, j0]
    v01 = table[i0, j1]
    v10 = table[i1, j0]
    v11 = table[i1, j1]
    return (1.0 - ft) * ((1.0 - fp) * v00 + fp * v01) + ft * ((1.0 - fp) * v10 + fp * v11)


def _interp_nearest(grid: SphericalGrid, values: np.ndarray, units: np.ndarray) -> np.ndarray:
    out = np.empty(units.shape[0])
    block = max(1, _BLOCK_ENTRIES // max(len(grid), 1))
    for start in range(0, units.shape[0], block):
        stop = min(start + block, units.shape[0])
        idx = np.argmax(units[start:stop] @ grid.nodes.T, axis=1)
        out[start:stop] = values[idx]
    return out


def _sampled_support(body: Sampled, dirs: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(dirs, axis=1)
    out = np.zeros(dirs.shape[0])
    nz = norms > 0
    if not np.any(nz):
        return out
    units = dirs[nz] / norms[nz, None]
    grid = body.grid
    if grid.kind == "uniform-2d":
        vals = _interp_uniform_2d(grid, body.values, units)
    elif grid.kind == "gauss-lonlat-3d":
        vals = _interp_lonlat_3d(grid, body.values, units)
    else:
        vals = _interp_nearest(grid, body.values, units)
    out[nz] = vals * norms[nz]
    return out


def support_values(body: Body, dirs: np.ndarray) -> np.ndarray:
    """Vectorized support function: h(body) at each row of ``dirs``.

    Directions need not be unit vectors; the positively homogeneous
    extension is used.  Exact for every representation except ``Sampled``,
    which interpolates.
    """
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    if dirs.shape[1] != body_dim(body):
        raise DimensionMismatchError(
            f"directions have dim {dirs.shape[1]}, body has dim {body_dim(body)}"
        )
    if isinstance(body, Polytope):
        return _polytope_support(body.vertices, dirs)
    if isinstance(body, Ball):
        return dirs @ body.center + body.radius * np.linalg.norm(dirs, axis=1)
    if isinstance(body, Ellipsoid):
        return dirs @ body.center + np.linalg.norm(dirs @ body.matrix, axis=1)
    if isinstance(body, Sum):
        return support_values(body.left, dirs) + support_values(body.right, dirs)
    if isinstance(body, Scaled):
        if body.factor == 0.0:
            return np.zeros(dirs.shape[0])
        return body.factor * support_values(body.inner, dirs)
    if isinstance(body, Rotated):
        return support_values(body.inner, dirs @ body.rotation.matrix)
    if isinstance(body, Sampled):
        return _sampled_support(body, dirs)
    raise InvalidBodyError(f"unknown body representation {type(body).__name__}")


def eval_support(body: Body, x) -> float:
    """Support function h(body) at a single point x."""
    return float(support_values(body, np.asarray(x, dtype=float)[None, :])[0])


def sample_support(body: Body, grid: SphericalGrid) -> SupportSamples:
    """Evaluate the support function at every grid node."""
    if grid.dim != body_dim(body):
        raise DimensionMismatchError("grid dimension does not match body")
    return SupportSamples(grid, support_values(body, grid.nodes))


def as_sampled(body: Body, grid: SphericalGrid) -> Sampled:
    return Sampled(sample_support(body, grid))


def minkowski_sum(a: Body, b: Body) -> Sum:
    """Symbolic Minkowski sum; support functions add exactly."""
    return Sum(a, b)


def scale(factor: float, body: Body) -> Scaled:
    """Symbolic nonnegative scaling; support is positively homogeneous."""
    return Scaled(factor, body)


def rotate_body(rotation: Rotation, body: Body) -> Rotated:
    return Rotated(rotation, body)


def translate(body: Body, shift) -> Body:
    """Exact translate: h(u) picks up <u, shift> with no quadrature involved."""
    w = np.asarray(shift, dtype=float)
    if w.shape != (body_dim(body),):
        raise DimensionMismatchError("shift dimension does not match body")
    if isinstance(body, Polytope):
        return Polytope(body.vertices + w)
    if isinstance(body, Ball):
        return Ball(body.center + w, body.radius)
    if isinstance(body, Ellipsoid):
        return Ellipsoid(body.center + w, body.matrix)
    if isinstance(body, Sampled):
        return Sampled(
            SupportSamples(body.grid, body.values + body.grid.nodes @ w)
        )
    if isinstance(body, Sum):
        return Sum(translate(body.left, w), body.right)
    if isinstance(body, Scaled):
        if body.factor == 0.0:
            return Polytope(w[None, :])
        return Scaled(body.factor, translate(body.inner, w / body.factor))
    if isinstance(body, Rotated):
        return Rotated(
            body.rotation, translate(body.inner, body.rotation.matrix.T @ w)
        )
    raise InvalidBodyError(f"unknown body representation {type(body).__name__}")


def convex_hull_vertices(points: np.ndarray) -> np.ndarray:
    """Extreme points of a finite point set, robust to degenerate input.

    Falls back to affine-subspace handling when the set is not
    full-dimensional (segments, points, planar sets in R^3).
    """
    pts = np.unique(np.round(np.asarray(points, dtype=float), 12), axis=0)
    if pts.shape[0] <= pts.shape[1] + 1:
        return pts
    try:
        hull = ConvexHull(pts)
        return pts[np.sort(hull.vertices)]
    except QhullError:
        pass
    center = pts.mean(axis=0)
    centered = pts - center
    u, s, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(s > 1e-12 * max(s.max(), 1.0)))
    if rank == 0:
        return center[None, :]
    basis = vt[:rank]
    coords = centered @ basis.T
    if rank == 1:
        lo, hi = coords[:, 0].argmin(), coords[:, 0].argmax()
        return pts[sorted({lo, hi})]
    try:
        sub = ConvexHull(coords)
        return pts[np.sort(sub.vertices)]
    except QhullError:
        return pts


def polytope_sum(a: Polytope, b: Polytope) -> Polytope:
    """Explicit vertex representation of a Minkowski sum of polytopes.

    Convex hull of all pairwise vertex sums; equivalent to ``Sum(a, b)``
    but with the vertices materialized.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError("cannot sum polytopes of different dims")
    sums = (a.vertices[:, None, :] + b.vertices[None, :, :]).reshape(-1, a.dim)
    return Polytope(convex_hull_vertices(sums))


def as_polytope(body: Body) -> Polytope | None:
    """Flatten an expression tree to an explicit Polytope when possible.

    Returns None for trees containing Ball, Ellipsoid or Sampled leaves.
    """
    if isinstance(body, Polytope):
        return body
    if isinstance(body, Scaled):
        inner = as_polytope(body.inner)
        if inner is None:
            return None
        if body.factor == 0.0:
            return Polytope(np.zeros((1, inner.dim)))
        return Polytope(inner.vertices * body.factor)
    if isinstance(body, Rotated):
        inner = as_polytope(body.inner)
        if inner is None:
            return None
        return Polytope(inner.vertices @ body.rotation.matrix.T)
    if isinstance(body, Sum):
        left = as_polytope(body.left)
        right = as_polytope(body.right)
        if left is None or right is None:
            return None
        return polytope_sum(left, right)
    return None


def sublinearity_violation(
    samples: SupportSamples, n_trials: int = 64, seed: int = 0
) -> float:
    """Largest observed  h(u+v) - h(u) - h(v)  over random node pairs.

    Nonpositive (up to interpolation error) for genuine support samples.
    """
    body = Sampled(samples)
    rng = np.random.default_rng(seed)
    n = len(samples.grid)
    i = rng.integers(0, n, size=n_trials)
    j = rng.integers(0, n, size=n_trials)
    u = samples.grid.nodes[i]
    v = samples.grid.nodes[j]
    lhs = support_values(body, u + v)
    rhs = samples.values[i] + samples.values[j]
    return float(np.max(lhs - rhs))
