"""Hausdorff metric, Steiner point and re-centering.

The Hausdorff distance between convex bodies equals the sup-norm distance
of their support functions on the unit sphere, so both metrics here are
computed in support-function space.

The Steiner point  s(D) = (1/vol B^n) * integral over S^{n-1} of u h_D(u)
is evaluated exactly for polytopes by integrating over the normal fan
(closed forms on circular arcs for n=2, per-vertex spherical-polygon
quadrature for n=3).  Grid quadrature is the fallback for sampled bodies.
The fan route keeps rigid-motion equivariance at floating-point level,
which plain grid quadrature cannot do for kinked integrands.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError

from .bodies import (
    Ball,
    Body,
    Ellipsoid,
    Polytope,
    Rotated,
    Sampled,
    Scaled,
    Sum,
    as_polytope,
    body_dim,
    contains_sampled,
    support_values,
    translate,
)
from .errors import DimensionMismatchError, InvalidBodyError
from .quadrature import SphericalGrid, ball_volume, default_grid

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# polygon helpers (n = 2)
# ---------------------------------------------------------------------------

def ordered_polygon(poly: Polytope) -> np.ndarray:
    """Hull vertices of a 2-D polytope in counterclockwise order."""
    pts = np.unique(np.round(poly.vertices, 12), axis=0)
    if pts.shape[0] <= 2:
        return pts
    try:
        hull = ConvexHull(pts)
        return pts[hull.vertices]
    except QhullError:
        # collinear: order along the segment
        d = pts - pts.mean(axis=0)
        axis = d[np.argmax(np.linalg.norm(d, axis=1))]
        order = np.argsort(d @ axis)
        return pts[[order[0], order[-1]]]


def _edge_normal_angles(verts_ccw: np.ndarray) -> np.ndarray:
    """Outward-normal angle of each edge k -> k+1 of a CCW polygon."""
    edges = np.roll(verts_ccw, -1, axis=0) - verts_ccw
    return np.mod(np.arctan2(-edges[:, 0], edges[:, 1]), _TWO_PI)


def _arc_moment_1(a: float, b: float) -> np.ndarray:
    """integral over [a,b] of u(t) u(t)^T dt, closed form (2x2)."""
    def f_cc(t):
        return 0.5 * t + 0.25 * math.sin(2.0 * t)

    def f_cs(t):
        return -0.25 * math.cos(2.0 * t)

    def f_ss(t):
        return 0.5 * t - 0.25 * math.sin(2.0 * t)

    return np.array(
        [
            [f_cc(b) - f_cc(a), f_cs(b) - f_cs(a)],
            [f_cs(b) - f_cs(a), f_ss(b) - f_ss(a)],
        ]
    )


def _polygon_fan_arcs(poly: Polytope):
    """(vertex, arc start, arc end) for each normal cone of a 2-D polytope."""
    verts = ordered_polygon(poly)
    if verts.shape[0] == 1:
        return [(verts[0], 0.0, _TWO_PI)]
    if verts.shape[0] == 2:
        # segment: two half-circle cones split by the segment normal
        d = verts[1] - verts[0]
        alpha = math.atan2(d[1], d[0])
        return [
            (verts[1], alpha - math.pi / 2.0, alpha + math.pi / 2.0),
            (verts[0], alpha + math.pi / 2.0, alpha + 3.0 * math.pi / 2.0),
        ]
    normals = _edge_normal_angles(verts)
    arcs = []
    for k in range(verts.shape[0]):
        a = normals[k - 1]
        b = normals[k]
        if b < a:
            b += _TWO_PI
        arcs.append((verts[k], a, b))
    return arcs


def _steiner_polygon(poly: Polytope) -> np.ndarray:
    s = np.zeros(2)
    for p, a, b in _polygon_fan_arcs(poly):
        s += _arc_moment_1(a, b) @ p
    return s / ball_volume(2)


# ---------------------------------------------------------------------------
# normal-fan quadrature (n = 3)
# ---------------------------------------------------------------------------

_GL_TRI = 12  # tensor Gauss-Legendre order per spherical-triangle chart


@lru_cache(maxsize=1)
def _tri_rule():
    x, w = np.polynomial.legendre.leggauss(_GL_TRI)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    xi, eta = np.meshgrid(x, x, indexing="ij")
    wq = np.outer(w, w).ravel()
    return xi.ravel(), eta.ravel(), wq


_SPLIT_ANGLE = 0.45  # subdivide spherical triangles wider than this (radians)


def _spherical_triangle_rule(a, b, c, depth: int = 0):
    """Quadrature points/weights for surface integrals over the spherical
    triangle with vertices a, b, c (unit vectors, assumed within an open
    hemisphere).  Integrates f via the radial projection of the flat
    triangle: dOmega = dist(0, plane) / ||x||^3 dA.  Wide triangles are
    subdivided at normalized edge midpoints to keep the chart mild.
    """
    span = max(
        math.acos(np.clip(a @ b, -1.0, 1.0)),
        math.acos(np.clip(b @ c, -1.0, 1.0)),
        math.acos(np.clip(c @ a, -1.0, 1.0)),
    )
    if span > _SPLIT_ANGLE and depth < 4:
        mab = a + b
        mbc = b + c
        mca = c + a
        mab /= np.linalg.norm(mab)
        mbc /= np.linalg.norm(mbc)
        mca /= np.linalg.norm(mca)
        parts = [
            _spherical_triangle_rule(a, mab, mca, depth + 1),
            _spherical_triangle_rule(mab, b, mbc, depth + 1),
            _spherical_triangle_rule(mca, mbc, c, depth + 1),
            _spherical_triangle_rule(mab, mbc, mca, depth + 1),
        ]
        parts = [p for p in parts if p is not None]
        if not parts:
            return None
        return (
            np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]),
        )
    xi, eta, wq = _tri_rule()
    ab = b - a
    bc = c - b
    cross = np.cross(ab, bc)
    two_area = np.linalg.norm(cross)
    if two_area < 1e-14:
        return None
    n_hat = cross / two_area
    dist = abs(float(n_hat @ a))
    if dist < 1e-14:
        return None
    pts = a[None, :] + np.outer(xi, ab) + np.outer(xi * eta, bc)
    norms = np.linalg.norm(pts, axis=1)
    weights = wq * xi * two_area * dist / norms**3
    return pts / norms[:, None], weights


def _hull_3d(poly: Polytope):
    pts = np.unique(np.round(poly.vertices, 12), axis=0)
    if pts.shape[0] < 4:
        return None
    try:
        return pts, ConvexHull(pts)
    except QhullError:
        return None


def _vertex_cone_normals(pts, hull):
    """Deduplicated incident facet normals for each hull vertex."""
    normals = hull.equations[:, :3]
    incident = {v: [] for v in hull.vertices}
    for simplex, nrm in zip(hull.simplices, normals):
        for v in simplex:
            incident[v].append(nrm)
    cones = {}
    for v, ns in incident.items():
        ns = np.asarray(ns)
        keep = []
        for n in ns:
            if not any(float(n @ k) > 1.0 - 1e-12 for k in keep):
                keep.append(n / np.linalg.norm(n))
        cones[v] = np.asarray(keep)
    return cones


def _normal_fan_rule_3d(poly: Polytope):
    """List of (vertex point, quadrature dirs, weights) over the normal fan.

    The quadrature nodes are built from the cone geometry itself, so they
    co-rotate with the body and fan integrals are equivariant to rounding.
    """
    packed = _hull_3d(poly)
    if packed is None:
        return None
    pts, hull = packed
    cones = _vertex_cone_normals(pts, hull)
    rules = []
    for v, normals in cones.items():
        if normals.shape[0] < 3:
            continue
        axis = normals.sum(axis=0)
        axis_norm = np.linalg.norm(axis)
        if axis_norm < 1e-12:
            continue
        axis = axis / axis_norm
        # order the cone's boundary directions around the axis
        ref = np.eye(3)[np.argmin(np.abs(axis))]
        t1 = np.cross(axis, ref)
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(axis, t1)
        ang = np.arctan2(normals @ t2, normals @ t1)
        normals = normals[np.argsort(ang)]
        m = normals.shape[0]
        dirs_list, w_list = [], []
        for i in range(m):
            rule = _spherical_triangle_rule(axis, normals[i], normals[(i + 1) % m])
            if rule is not None:
                dirs_list.append(rule[0])
                w_list.append(rule[1])
        if dirs_list:
            rules.append(
                (pts[v], np.concatenate(dirs_list), np.concatenate(w_list))
            )
    return rules


def _steiner_polytope_3d(poly: Polytope) -> np.ndarray | None:
    rules = _normal_fan_rule_3d(poly)
    if rules is None:
        return None
    s = np.zeros(3)
    for p, dirs, w in rules:
        s += (w * (dirs @ p)) @ dirs
    return s / ball_volume(3)


def _steiner_segment(poly: Polytope) -> np.ndarray | None:
    """Steiner point of a point or segment: the midpoint, by symmetry."""
    pts = np.unique(np.round(poly.vertices, 12), axis=0)
    centered = pts - pts.mean(axis=0)
    rank = np.linalg.matrix_rank(centered, tol=1e-12) if pts.shape[0] > 1 else 0
    if rank == 0:
        return pts.mean(axis=0)
    if rank == 1:
        axis = centered[np.argmax(np.linalg.norm(centered, axis=1))]
        proj = centered @ axis
        return 0.5 * (pts[np.argmin(proj)] + pts[np.argmax(proj)])
    return None


# ---------------------------------------------------------------------------
# Steiner point and re-centering
# ---------------------------------------------------------------------------

def steiner_quadrature(body: Body, grid: SphericalGrid) -> np.ndarray:
    """Grid-quadrature Steiner point: sum_k w_k u_k h(u_k) / vol(B^n)."""
    values = support_values(body, grid.nodes)
    return (grid.weights * values) @ grid.nodes / ball_volume(grid.dim)


def steiner(body: Body, grid: SphericalGrid | None = None) -> np.ndarray:
    """Steiner point of a body.

    Exact for balls, ellipsoids and (n <= 3) polytopes; Minkowski-linear
    recursion over Sum/Scaled/Rotated nodes; grid quadrature for sampled
    bodies (on their own grid) and anything else.
    """
    if isinstance(body, Ball):
        return body.center.copy()
    if isinstance(body, Ellipsoid):
        return body.center.copy()
    if isinstance(body, Sum):
        return steiner(body.left, grid) + steiner(body.right, grid)
    if isinstance(body, Scaled):
        if body.factor == 0.0:
            return np.zeros(body.dim)
        return body.factor * steiner(body.inner, grid)
    if isinstance(body, Rotated):
        return body.rotation.matrix @ steiner(body.inner, grid)
    if isinstance(body, Sampled):
        return (body.grid.weights * body.values) @ body.grid.nodes / ball_volume(
            body.dim
        )
    if isinstance(body, Polytope):
        if body.dim == 2:
            mid = _steiner_segment(body)
            return mid if mid is not None else _steiner_polygon(body)
        if body.dim == 3:
            mid = _steiner_segment(body)
            if mid is not None:
                return mid
            s = _steiner_polytope_3d(body)
            if s is not None:
                return s
        return steiner_quadrature(body, grid or default_grid(body.dim))
    raise InvalidBodyError(f"unknown body representation {type(body).__name__}")


def recenter(body: Body, grid: SphericalGrid | None = None) -> Body:
    """Translate the body so its Steiner point sits at the origin."""
    return translate(body, -steiner(body, grid))


def support_moment_matrix(body: Body, grid: SphericalGrid | None = None) -> np.ndarray:
    """Second moment  integral of u u^T h(u) dOmega, computed like steiner.

    Exact for polytopes/balls via the normal fan; used to build
    body-intrinsic orthonormal frames.
    """
    n = body_dim(body)
    if isinstance(body, Ball):
        from .quadrature import sphere_area

        return body.radius * (sphere_area(n) / n) * np.eye(n)
    if isinstance(body, Sum):
        return support_moment_matrix(body.left, grid) + support_moment_matrix(
            body.right, grid
        )
    if isinstance(body, Scaled):
        if body.factor == 0.0:
            return np.zeros((n, n))
        return body.factor * support_moment_matrix(body.inner, grid)
    if isinstance(body, Rotated):
        g = body.rotation.matrix
        return g @ support_moment_matrix(body.inner, grid) @ g.T
    if isinstance(body, Sampled):
        wv = body.grid.weights * body.values
        return (body.grid.nodes * wv[:, None]).T @ body.grid.nodes
    if isinstance(body, Polytope) and n == 2 and _steiner_segment(body) is None:
        m = np.zeros((2, 2))
        for p, a, b in _polygon_fan_arcs(body):
            m += _arc_moment_2(a, b, p)
        return m
    if isinstance(body, Polytope) and n == 3 and _steiner_segment(body) is None:
        rules = _normal_fan_rule_3d(body)
        if rules is not None:
            m = np.zeros((3, 3))
            for p, dirs, w in rules:
                wv = w * (dirs @ p)
                m += (dirs * wv[:, None]).T @ dirs
            return m
    g = grid or default_grid(n)
    values = support_values(body, g.nodes)
    wv = g.weights * values
    return (g.nodes * wv[:, None]).T @ g.nodes


def _arc_moment_2(a: float, b: float, p: np.ndarray) -> np.ndarray:
    """integral over [a,b] of u u^T <p, u> dt for constant support vertex p."""

    def f_ccc(t):  # cos^3
        return math.sin(t) - math.sin(t) ** 3 / 3.0

    def f_ccs(t):  # cos^2 sin
        return -math.cos(t) ** 3 / 3.0

    def f_css(t):  # cos sin^2
        return math.sin(t) ** 3 / 3.0

    def f_sss(t):  # sin^3
        return -math.cos(t) + math.cos(t) ** 3 / 3.0

    ccc = f_ccc(b) - f_ccc(a)
    ccs = f_ccs(b) - f_ccs(a)
    css = f_css(b) - f_css(a)
    sss = f_sss(b) - f_sss(a)
    px, py = float(p[0]), float(p[1])
    m_cc = px * ccc + py * ccs
    m_cs = px * ccs + py * css
    m_ss = px * css + py * sss
    return np.array([[m_cc, m_cs], [m_cs, m_ss]])


# ---------------------------------------------------------------------------
# Hausdorff distance
# ---------------------------------------------------------------------------

def _golden_max(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Golden-section maximization of a scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    best = max(fc, fd)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        best = max(best, fc, fd)
    return best


def _hausdorff_2d_polygons(pa: Polytope, pb: Polytope) -> float:
    """Exact sup of |h_A - h_B| for two polygons via arc decomposition."""
    va = ordered_polygon(pa)
    vb = ordered_polygon(pb)
    breaks = set()
    for verts in (va, vb):
        if verts.shape[0] >= 3:
            breaks.update(_edge_normal_angles(verts).tolist())
        elif verts.shape[0] == 2:
            d = verts[1] - verts[0]
            alpha = math.atan2(d[1], d[0])
            breaks.update(
                np.mod([alpha - math.pi / 2.0, alpha + math.pi / 2.0], _TWO_PI).tolist()
            )
    if not breaks:
        return float(np.linalg.norm(va[0] - vb[0]))
    angles = np.sort(np.asarray(sorted(breaks)))
    best = 0.0
    for i in range(angles.shape[0]):
        a = angles[i]
        b = angles[(i + 1) % angles.shape[0]]
        if b <= a:
            b += _TWO_PI
        mid = 0.5 * (a + b)
        u_mid = np.array([math.cos(mid), math.sin(mid)])
        pa_v = pa.vertices[np.argmax(pa.vertices @ u_mid)]
        pb_v = pb.vertices[np.argmax(pb.vertices @ u_mid)]
        diff = pa_v - pb_v
        # |<diff, u(t)>| = R|cos(t - phi)| is extremal at arc ends or at phi mod pi
        cands = [a, b]
        phi = math.atan2(diff[1], diff[0])
        for cand in (phi, phi + math.pi, phi - math.pi, phi + _TWO_PI):
            if a <= cand <= b:
                cands.append(cand)
        for t in cands:
            u = np.array([math.cos(t), math.sin(t)])
            best = max(best, abs(float(diff @ u)))
    return best


def _hausdorff_2d_poly_ball(poly: Polytope, ball: Ball) -> float:
    """Exact sup of |h_P - h_B| for a polygon against a ball."""
    verts = ordered_polygon(poly)
    c, r = ball.center, ball.radius
    if verts.shape[0] == 1:
        return float(np.linalg.norm(verts[0] - c) + r)
    arcs = _polygon_fan_arcs(poly)
    best = 0.0
    for v, a, b in arcs:
        w = v - c
        cands = [a, b]
        phi = math.atan2(w[1], w[0])
        for cand in (phi, phi + math.pi, phi - math.pi, phi + _TWO_PI):
            if a <= cand <= b:
                cands.append(cand)
        for t in cands:
            u = np.array([math.cos(t), math.sin(t)])
            best = max(best, abs(float(w @ u) - r))
    return best


def _hull_edge_data(poly: Polytope):
    """Hull vertex array plus edge index pairs and outward facet normals."""
    packed = _hull_3d(poly)
    if packed is None:
        return None
    pts, hull = packed
    edges = set()
    for simplex in hull.simplices:
        for i in range(3):
            edges.add(tuple(sorted((simplex[i], simplex[(i + 1) % 3]))))
    normals = hull.equations[:, :3]
    normals = normals / np.linalg.norm(normals, axis=1, keepdims=True)
    return pts, np.asarray(sorted(edges)), normals


def _append_unit(cands: list, vecs: np.ndarray):
    norms = np.linalg.norm(vecs, axis=1)
    good = vecs[norms > 1e-12] / norms[norms > 1e-12, None]
    if good.size:
        cands.append(good)
        cands.append(-good)


def _ridge_criticals(pts, edges, targets):
    """Critical directions of <p - b, u> on edge-normal great circles."""
    p = pts[edges[:, 0]]
    q = pts[edges[:, 1]]
    e_hat = p - q
    e_hat = e_hat / np.linalg.norm(e_hat, axis=1, keepdims=True)
    w = p[:, None, :] - targets[None, :, :]
    proj = w - (w * e_hat[:, None, :]).sum(axis=2, keepdims=True) * e_hat[:, None, :]
    return proj.reshape(-1, 3)


def _pair_candidates_3d(data_a, data_b) -> np.ndarray:
    pts_a, edges_a, normals_a = data_a
    cands: list = [normals_a, -normals_a]
    if data_b is not None:
        pts_b, edges_b, normals_b = data_b
        cands.extend([normals_b, -normals_b])
        diff = (pts_a[:, None, :] - pts_b[None, :, :]).reshape(-1, 3)
        _append_unit(cands, diff)
        ea = pts_a[edges_a[:, 0]] - pts_a[edges_a[:, 1]]
        eb = pts_b[edges_b[:, 0]] - pts_b[edges_b[:, 1]]
        crossings = np.cross(ea[:, None, :], eb[None, :, :]).reshape(-1, 3)
        _append_unit(cands, crossings)
        _append_unit(cands, _ridge_criticals(pts_a, edges_a, pts_b))
        _append_unit(cands, _ridge_criticals(pts_b, edges_b, pts_a))
    else:
        _append_unit(cands, pts_a)
    return np.vstack(cands)


def _hausdorff_3d_exact(a: Body, b: Body) -> float | None:
    """Exact sup of |h_A - h_B| for 3-D polytope/ball pairs.

    The sup of a difference of piecewise-linear support functions is
    attained at a normal-fan cell's interior critical direction, on a
    ridge, or at a fan corner; all of these are enumerable from vertices,
    hull edges and facet normals.  Returns None when the pair is not of
    this shape (or too large to enumerate cheaply).
    """
    pa, pb = as_polytope(a), as_polytope(b)
    ball_a = a if isinstance(a, Ball) else None
    ball_b = b if isinstance(b, Ball) else None
    if pa is None and ball_a is None:
        return None
    if pb is None and ball_b is None:
        return None
    if ball_a is not None and ball_b is not None:
        return float(
            np.linalg.norm(ball_a.center - ball_b.center)
            + abs(ball_a.radius - ball_b.radius)
        )
    if pa is not None and pb is not None:
        if pa.vertices.shape[0] + pb.vertices.shape[0] > 120:
            return None
        data_a = _hull_edge_data(pa)
        data_b = _hull_edge_data(pb)
        if data_a is None or data_b is None:
            return None
        dirs = _pair_candidates_3d(data_a, data_b)
    else:
        poly = pa if pa is not None else pb
        ball = ball_a if ball_a is not None else ball_b
        if poly.vertices.shape[0] > 600:
            return None
        data = _hull_edge_data(poly)
        if data is None:
            return None
        pts, edges, normals = data
        cands: list = [normals, -normals]
        _append_unit(cands, pts - ball.center)
        _append_unit(cands, _ridge_criticals(pts, edges, ball.center[None, :]))
        dirs = np.vstack(cands)
    vals = np.abs(support_values(a, dirs) - support_values(b, dirs))
    return float(vals.max())


def exact_hausdorff(a: Body, b: Body) -> float | None:
    """Exact Hausdorff distance for polytope/ball pairs, else None."""
    dim = body_dim(a)
    if dim == 2:
        pa, pb = as_polytope(a), as_polytope(b)
        ball_a = a if isinstance(a, Ball) else None
        ball_b = b if isinstance(b, Ball) else None
        if pa is not None and pb is not None:
            return _hausdorff_2d_polygons(pa, pb)
        if pa is not None and ball_b is not None:
            return _hausdorff_2d_poly_ball(pa, ball_b)
        if ball_a is not None and pb is not None:
            return _hausdorff_2d_poly_ball(pb, ball_a)
        if ball_a is not None and ball_b is not None:
            return float(
                np.linalg.norm(ball_a.center - ball_b.center)
                + abs(ball_a.radius - ball_b.radius)
            )
        return None
    if dim == 3:
        return _hausdorff_3d_exact(a, b)
    return None


def _refine_candidates(body: Body, dim: int) -> np.ndarray | None:
    """Kink directions of a flattenable polytope: facet normals and
    normalized vertices, useful starting points for sup refinement."""
    poly = as_polytope(body)
    if poly is None:
        return None
    dirs = []
    verts = poly.vertices
    norms = np.linalg.norm(verts, axis=1)
    good = norms > 1e-12
    dirs.append(verts[good] / norms[good, None])
    packed = _hull_3d(poly) if dim == 3 else None
    if packed is not None:
        eq = packed[1].equations[:, :3]
        dirs.append(eq / np.linalg.norm(eq, axis=1, keepdims=True))
    if dim == 2 and verts.shape[0] >= 3:
        ang = _edge_normal_angles(ordered_polygon(poly))
        dirs.append(np.column_stack([np.cos(ang), np.sin(ang)]))
    if not dirs:
        return None
    out = np.vstack(dirs)
    return out[:512]


def _tangent_frame(u: np.ndarray):
    ref = np.eye(3)[np.argmin(np.abs(u))]
    e1 = np.cross(u, ref)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    return e1, e2


def hausdorff(
    a: Body,
    b: Body,
    grid: SphericalGrid | None = None,
    refine: bool = True,
    n_starts: int = 5,
) -> float:
    """Hausdorff distance via the sup-norm of the support difference.

    The grid maximum is always a lower bound; for exactly evaluable
    representations the sup is refined by local maximization (exact arc
    search for polygon pairs, golden section / Nelder-Mead otherwise), so
    the reported value is >= the grid maximum.
    """
    if body_dim(a) != body_dim(b):
        raise DimensionMismatchError("bodies live in different dimensions")
    dim = body_dim(a)
    grid = grid or default_grid(dim)
    va = support_values(a, grid.nodes)
    vb = support_values(b, grid.nodes)
    diffs = np.abs(va - vb)
    best = float(diffs.max())
    if not refine or contains_sampled(a) or contains_sampled(b):
        return best

    exact = exact_hausdorff(a, b)
    if exact is not None:
        return max(best, exact)

    order = np.argsort(diffs)[::-1]
    starts = grid.nodes[order[:n_starts]]
    for extra in (_refine_candidates(a, dim), _refine_candidates(b, dim)):
        if extra is not None and extra.size:
            vals = np.abs(
                support_values(a, extra) - support_values(b, extra)
            )
            best = max(best, float(vals.max()))
            starts = np.vstack([starts, extra[np.argsort(vals)[::-1][:2]]])

    if dim == 2:
        spacing = grid.max_cell_angle

        def f(theta):
            u = np.array([[math.cos(theta), math.sin(theta)]])
            return abs(float(support_values(a, u)[0] - support_values(b, u)[0]))

        for u0 in starts:
            t0 = math.atan2(u0[1], u0[0])
            best = max(best, _golden_max(f, t0 - spacing, t0 + spacing))
        return best

    if dim == 3:
        spacing = grid.max_cell_angle

        for u0 in starts:
            e1, e2 = _tangent_frame(u0)

            def neg(st):
                u = u0 + st[0] * e1 + st[1] * e2
                u = (u / np.linalg.norm(u))[None, :]
                return -abs(float(support_values(a, u)[0] - support_values(b, u)[0]))

            res = minimize(
                neg,
                np.zeros(2),
                method="Nelder-Mead",
                options={
                    "xatol": 1e-10,
                    "fatol": 1e-14,
                    "initial_simplex": np.array(
                        [[0.0, 0.0], [spacing, 0.0], [0.0, spacing]]
                    ),
                    "maxiter": 400,
                },
            )
            best = max(best, -float(res.fun))
        return best

    return best


def width(body: Body, u: np.ndarray) -> float:
    """Extent of the body along direction u: h(u) + h(-u)."""
    u = np.asarray(u, dtype=float)
    vals = support_values(body, np.vstack([u, -u]))
    return float(vals[0] + vals[1])
