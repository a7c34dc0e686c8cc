"""Support-function smoothing: mollification plus ball addition.

``mollify`` convolves the support function with a radial bump supported
on the shell t <= ||z|| <= 2t, producing a smooth support function;
``regularize`` adds a ball of radius t on top and re-centers, which makes
the boundary curvature strictly positive while staying Hausdorff-close to
the input (distance -> 0 as t -> 0, with t = 0 the identity).

The convolution kernel is normalized to unit mass so that linear support
functions (point bodies) are reproduced exactly.  Kernel directions are
expressed in a body-intrinsic orthonormal frame built from the exact
second moment of the support function; this makes the smoothing map
O(n)-equivariant to floating-point accuracy even at modest quadrature
resolution.  The frame is degenerate for highly symmetric bodies (ball,
cube), which then fall back to the ambient frame; for those the residual
is governed by the quadrature error instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .bodies import (
    Body,
    Ball,
    Sampled,
    Sum,
    SupportSamples,
    body_dim,
    support_values,
)
from .errors import InvalidArgumentError
from .metrics import recenter, support_moment_matrix
from .quadrature import SphericalGrid, default_grid, make_grid_2d, make_grid_3d

_BLOCK = 4_000_000  # direction rows per evaluation block


def _bump_raw(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 1.0) & (s < 2.0)
    si = s[inside]
    out[inside] = np.exp(-1.0 / ((si - 1.0) * (2.0 - si)))
    return out


@dataclass(frozen=True)
class MollifierSpec:
    """Radial bump with support in [1, 2] and unit line integral."""

    bump: object
    support: tuple = (1.0, 2.0)
    line_integral: float = 1.0

    def __post_init__(self):
        lo, hi = self.support
        total, _ = quad(self.bump, lo, hi, limit=200)
        if abs(total - self.line_integral) > 1e-8:
            raise InvalidArgumentError(
                f"bump integrates to {total!r}, expected {self.line_integral!r}"
            )
        probe = np.linspace(lo - 1.0, hi + 1.0, 97)
        vals = np.asarray([float(self.bump(s)) for s in probe])
        if np.any(vals < -1e-15):
            raise InvalidArgumentError("bump must be nonnegative")
        outside = (probe <= lo) | (probe >= hi)
        if np.any(np.abs(vals[outside]) > 1e-15):
            raise InvalidArgumentError("bump must vanish outside its support")


def default_mollifier() -> MollifierSpec:
    """C * exp(-1/((s-1)(2-s))) on (1, 2), normalized to unit integral."""
    raw_total, _ = quad(_bump_raw, 1.0, 2.0, limit=200)
    c = 1.0 / raw_total

    def bump(s):
        return c * _bump_raw(s)

    return MollifierSpec(bump=bump)


@dataclass(frozen=True)
class RegularizationParams:
    """Smoothing scale t plus convolution quadrature resolution.

    ``t`` in [0, 1]; t = 0 means the identity map (no integral involved).
    ``angular_nodes`` is the size of the kernel's spherical rule: a node
    count for n=2, and a total budget split into a lat x lon product for
    n=3 (2048 -> 32 x 64).
    """

    t: float
    mollifier: MollifierSpec = field(default_factory=default_mollifier)
    radial_nodes: int = 16
    angular_nodes: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise InvalidArgumentError("t must lie in [0, 1]")
        if self.radial_nodes < 4:
            raise InvalidArgumentError("need at least 4 radial nodes")
        if self.angular_nodes is not None and self.angular_nodes < 8:
            raise InvalidArgumentError("need at least 8 angular nodes")

    def angular_grid(self, dim: int) -> SphericalGrid:
        target = self.angular_nodes
        if dim == 2:
            return make_grid_2d(target or 512)
        if dim == 3:
            n_lat = max(4, math.isqrt((target or 2048) // 2))
            return make_grid_3d(n_lat, 2 * n_lat)
        return default_grid(dim)


def kernel_rule(params: RegularizationParams, dim: int):
    """Unit-mass product rule for the shell convolution.

    Returns (offsets, weights): offsets are points of the shell
    1 <= ||z|| <= 2 (to be scaled by t), weights sum to one.
    """
    s, glw = np.polynomial.legendre.leggauss(params.radial_nodes)
    s = 1.5 + 0.5 * s
    glw = 0.5 * glw
    psi = np.asarray([float(params.mollifier.bump(v)) for v in s])
    radial = glw * psi * s ** (dim - 1)
    ang = params.angular_grid(dim)
    weights = np.outer(radial, ang.weights).ravel()
    weights /= weights.sum()
    offsets = (s[:, None, None] * ang.nodes[None, :, :]).reshape(-1, dim)
    return offsets, weights


def canonical_frame(body: Body) -> np.ndarray:
    """Body-intrinsic orthonormal frame from support-moment diagonalization.

    Columns are eigenvectors of the exact second moment of h, ordered by
    descending eigenvalue, signs fixed by third moments.  Covariant under
    O(n) for bodies with simple moment spectrum; identity fallback when
    the spectrum or a sign functional degenerates.
    """
    n = body_dim(body)
    m = support_moment_matrix(body)
    evals, evecs = np.linalg.eigh(m)
    evals = evals[::-1]
    evecs = evecs[:, ::-1]
    scale = max(abs(evals[0]), 1.0)
    gaps = np.diff(evals)
    if np.any(np.abs(gaps) < 1e-9 * scale):
        return np.eye(n)
    ref = default_grid(n)
    h = support_values(body, ref.nodes)
    wh = ref.weights * h
    for i in range(n):
        third = float(wh @ (ref.nodes @ evecs[:, i]) ** 3)
        if abs(third) < 1e-9 * scale:
            return np.eye(n)
        if third < 0:
            evecs[:, i] = -evecs[:, i]
    return evecs


def mollified_support_values(
    body: Body,
    params: RegularizationParams,
    directions: np.ndarray,
    frame: np.ndarray | None = None,
) -> np.ndarray:
    """Smoothed support values at the given unit directions.

    T(D)(u) = sum_ij  c_ij h_D(u + t s_i v_j)  with the kernel directions
    v_j expressed in the body's canonical frame.
    """
    if params.t == 0.0:
        return support_values(body, directions)
    n = body_dim(body)
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    if frame is None:
        frame = canonical_frame(body)
    offsets, weights = kernel_rule(params, n)
    offsets = params.t * (offsets @ frame.T)
    k = offsets.shape[0]
    out = np.empty(dirs.shape[0])
    block = max(1, _BLOCK // k)
    for start in range(0, dirs.shape[0], block):
        stop = min(start + block, dirs.shape[0])
        pts = (dirs[start:stop, None, :] + offsets[None, :, :]).reshape(-1, n)
        vals = support_values(body, pts).reshape(stop - start, k)
        out[start:stop] = vals @ weights
    return out


def mollify(
    body: Body,
    params: RegularizationParams,
    grid: SphericalGrid,
) -> Sampled:
    """Smooth the support function; result sampled on the given grid."""
    values = mollified_support_values(body, params, grid.nodes)
    return Sampled(SupportSamples(grid, values))


def _check_full_dimensional(body: Body, grid: SphericalGrid):
    from .bodies import Polytope, as_polytope

    poly = as_polytope(body)
    if isinstance(poly, Polytope):
        if not poly.is_full_dimensional:
            raise InvalidArgumentError(
                "regularize needs a full-dimensional body"
            )
        return
    vals = support_values(body, grid.nodes) + support_values(body, -grid.nodes)
    if float(vals.min()) <= 1e-12:
        raise InvalidArgumentError("regularize needs a full-dimensional body")


def regularize(
    body: Body,
    params: RegularizationParams,
    grid: SphericalGrid,
) -> Body:
    """Smooth, add a ball of radius t, and re-center.

    The output is Sum(sampled smooth part, Ball(o, t)) translated so its
    Steiner point is at the origin; it passes the curvature positivity
    test with margin scaling like t and converges to recenter(body) in
    Hausdorff distance as t -> 0.
    """
    if params.t == 0.0:
        return recenter(body, grid)
    _check_full_dimensional(body, grid)
    smooth = mollify(body, params, grid)
    fat = Sum(smooth, Ball(np.zeros(body_dim(body)), params.t))
    return recenter(fat, grid)
