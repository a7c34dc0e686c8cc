"""Slab truncation and symmetry destruction.

``truncate`` removes the open eps-slab below the support hyperplane with
normal u (an exact halfspace clip of a polytope) and re-centers at the
Steiner point.  ``desymmetrize`` applies one truncation per coordinate
axis with strictly decreasing fresh-face diameters and mutually disjoint
cut regions; a body whose flat faces all have different diameters admits
no nontrivial orthogonal symmetry, which ``isotropy_estimate`` verifies
over a finite candidate scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import (
    Body,
    Polytope,
    Rotation,
    as_polytope,
    body_dim,
    convex_hull_vertices,
    support_values,
    unit_vector,
)
from .curvature import support_point
from .errors import (
    EmptyResultError,
    InfeasibleBudgetError,
    InvalidArgumentError,
    RepresentationError,
)
from .metrics import (
    _hull_3d,
    _vertex_cone_normals,
    _edge_normal_angles,
    hausdorff,
    ordered_polygon,
    recenter,
    steiner,
)
from .quadrature import SphericalGrid, default_grid, make_grid_2d, make_grid_3d
from .rotations import default_candidates

_FACE_TOL = 1e-9


@dataclass(frozen=True)
class TruncationSpec:
    """Cut parameters: outward normal u and slab depth eps >= 0."""

    u: np.ndarray
    eps: float

    def __post_init__(self):
        object.__setattr__(self, "u", unit_vector(self.u))
        object.__setattr__(self, "eps", float(self.eps))
        if self.eps < 0:
            raise InvalidArgumentError("eps must be nonnegative")


@dataclass(frozen=True)
class FaceRecord:
    """A flat face created by truncation."""

    normal: np.ndarray
    diameter: float
    vertex_set: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=float))
        object.__setattr__(
            self, "vertex_set", np.asarray(self.vertex_set, dtype=float)
        )


def _pairwise_diameter(points: np.ndarray) -> float:
    if points.shape[0] < 2:
        return 0.0
    diffs = points[:, None, :] - points[None, :, :]
    return float(np.sqrt((diffs**2).sum(axis=2)).max())


def _polytope_edges(verts: np.ndarray) -> list[tuple[int, int]]:
    n, dim = verts.shape
    if dim == 2:
        ordered = ordered_polygon(Polytope(verts))
        index = {tuple(np.round(v, 12)): i for i, v in enumerate(verts)}
        ids = [index[tuple(np.round(v, 12))] for v in ordered]
        return [(ids[i], ids[(i + 1) % len(ids)]) for i in range(len(ids))]
    if n <= 48:
        # all chords: non-edges cut interior points that hull pruning removes
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    packed = _hull_3d(Polytope(verts))
    if packed is None:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    pts, hull = packed
    lookup = {tuple(np.round(p, 12)): i for i, p in enumerate(verts)}
    edges = set()
    for simplex in hull.simplices:
        for a in range(len(simplex)):
            p = tuple(np.round(pts[simplex[a]], 12))
            q = tuple(np.round(pts[simplex[(a + 1) % len(simplex)]], 12))
            if p in lookup and q in lookup:
                edges.add(tuple(sorted((lookup[p], lookup[q]))))
    return sorted(edges)


def _clip_vertices(verts: np.ndarray, u: np.ndarray, cut: float) -> np.ndarray:
    """Vertices of the polytope intersected with {<x,u> <= cut}."""
    d = verts @ u - cut
    scale = 1.0 + float(np.abs(verts).max())
    keep = verts[d <= _FACE_TOL * scale]
    if keep.shape[0] == verts.shape[0]:
        return verts
    if keep.shape[0] == 0:
        raise EmptyResultError("cut removes the whole body")
    new_pts = []
    for i, j in _polytope_edges(verts):
        di, dj = d[i], d[j]
        if (di > 0) != (dj > 0) and abs(di - dj) > 1e-15:
            t = di / (di - dj)
            if 0.0 <= t <= 1.0:
                new_pts.append(verts[i] + t * (verts[j] - verts[i]))
    pts = np.vstack([keep] + ([np.asarray(new_pts)] if new_pts else []))
    return convex_hull_vertices(pts)


def _require_polytope(body: Body) -> Polytope:
    poly = as_polytope(body)
    if poly is None:
        raise RepresentationError(
            "truncation needs a polytope representation; approximate smooth "
            "bodies first (polytope_approximation)"
        )
    if poly.dim not in (2, 3):
        raise RepresentationError("exact clipping implemented for n = 2, 3")
    if not poly.is_full_dimensional:
        raise RepresentationError(
            "truncation rejects lower-dimensional bodies (segments, points)"
        )
    return poly


def truncate(body: Body, spec: TruncationSpec, grid: SphericalGrid | None = None) -> Polytope:
    """Clip the eps-slab below the support plane with normal u, re-center.

    eps = 0 returns the re-centered body unchanged; eps >= width along u
    raises EmptyResultError.
    """
    poly = _require_polytope(body)
    u = spec.u
    h_u = float(support_values(poly, u[None, :])[0])
    w = h_u + float(support_values(poly, -u[None, :])[0])
    if spec.eps >= w:
        raise EmptyResultError(
            f"eps={spec.eps} is not smaller than the width {w} along u"
        )
    if spec.eps == 0.0:
        return recenter(poly, grid)
    clipped = Polytope(_clip_vertices(poly.vertices, u, h_u - spec.eps))
    return recenter(clipped, grid)


def cut_face(poly: Polytope, u: np.ndarray, tol: float = 1e-9) -> FaceRecord:
    """Face of the polytope exposed in direction u."""
    dots = poly.vertices @ u
    top = dots.max()
    verts = poly.vertices[dots >= top - tol * (1.0 + abs(top))]
    return FaceRecord(normal=u, diameter=_pairwise_diameter(verts), vertex_set=verts)


def is_c1_violated(body: Body, tol_angle: float) -> bool:
    """True iff some vertex has a normal cone of angular width > tol_angle."""
    poly = _require_polytope(body)
    if poly.dim == 2:
        verts = ordered_polygon(poly)
        if verts.shape[0] < 3:
            return True
        ang = _edge_normal_angles(verts)
        ext = np.mod(ang - np.roll(ang, 1), 2.0 * math.pi)
        return bool(np.any(ext > tol_angle))
    packed = _hull_3d(poly)
    if packed is None:
        return True
    pts, hull = packed
    for normals in _vertex_cone_normals(pts, hull).values():
        if normals.shape[0] < 2:
            continue
        gram = np.clip(normals @ normals.T, -1.0, 1.0)
        if math.acos(float(gram.min())) > tol_angle:
            return True
    return False


def polytope_approximation(body: Body, n_dirs: int = 512) -> Polytope:
    """Inner polytope approximation: hull of support points.

    Directions come from a structured grid; the approximation error is the
    caller's to measure (e.g. via hausdorff against the original).
    """
    n = body_dim(body)
    if n == 2:
        grid = make_grid_2d(max(16, n_dirs))
    elif n == 3:
        lat = max(8, math.isqrt(n_dirs // 2))
        grid = make_grid_3d(lat, 2 * lat)
    else:
        grid = default_grid(n)
    pts = np.asarray([support_point(body, u) for u in grid.nodes])
    return Polytope(convex_hull_vertices(pts))


def _vertex_cone_direction(poly: Polytope, vertex: np.ndarray) -> np.ndarray | None:
    """A direction in the interior of the normal cone at the given vertex."""
    if poly.dim == 2:
        verts = ordered_polygon(poly)
        normals_ang = _edge_normal_angles(verts)
        for i, v in enumerate(verts):
            if np.allclose(v, vertex, atol=1e-12):
                a = normals_ang[i - 1]
                b = normals_ang[i]
                if b < a:
                    b += 2.0 * math.pi
                mid = 0.5 * (a + b)
                return np.array([math.cos(mid), math.sin(mid)])
        return None
    packed = _hull_3d(poly)
    if packed is None:
        return None
    pts, hull = packed
    for idx, normals in _vertex_cone_normals(pts, hull).items():
        if np.allclose(pts[idx], vertex, atol=1e-12):
            mean = normals.sum(axis=0)
            nrm = np.linalg.norm(mean)
            return mean / nrm if nrm > 1e-12 else None
    return None


def _uniquely_exposes(verts: np.ndarray, u: np.ndarray, idx: int, scale: float) -> bool:
    dots = verts @ u
    exposed = np.flatnonzero(dots >= dots.max() - _FACE_TOL * scale)
    return exposed.size == 1 and exposed[0] == idx


def _plan_cuts(poly: Polytope, axes: np.ndarray, margin: float):
    """Assign each requested axis a cut direction exposing a unique vertex.

    Slab cuts only shrink to a point when the cut direction's support set
    is a single vertex; flat faces normal to a requested axis (cube,
    square) make that impossible, so such axes fall back to the
    normal-cone center of a not-yet-used vertex with maximal support.
    The chosen vertices must additionally sit several margins inside each
    other's cut halfspaces, otherwise a fresh face near one vertex would
    unavoidably invade a later cap (two near-co-maximal vertices).
    """
    verts = poly.vertices
    scale = 1.0 + float(np.abs(verts).max())
    gap = 8.0 * margin
    plan: list = []

    def separated(u: np.ndarray, v: np.ndarray) -> bool:
        h_u = float((verts @ u).max())
        for u_j, v_j in plan:
            if float(v_j @ u) > h_u - gap:
                return False
            if float(v @ u_j) > float((verts @ u_j).max()) - gap:
                return False
        return True

    for e in axes:
        e = e / np.linalg.norm(e)
        order = np.argsort(-(verts @ e), kind="stable")
        choice = None
        for idx in order:
            v = verts[idx]
            if any(np.allclose(v, v_j, atol=1e-12) for _, v_j in plan):
                continue
            options = []
            if _uniquely_exposes(verts, e, idx, scale):
                options.append(e)
            cone = _vertex_cone_direction(poly, v)
            if cone is not None and _uniquely_exposes(verts, cone, idx, scale):
                options.append(cone)
            for u in options:
                if separated(u, v):
                    choice = (u, v)
                    break
            if choice is not None:
                break
        if choice is None:
            raise InfeasibleBudgetError(
                "could not find cut directions exposing distinct separated vertices"
            )
        plan.append(choice)
    return plan


def desymmetrize(
    body: Body,
    budget: float,
    grid: SphericalGrid | None = None,
    axes: np.ndarray | None = None,
    separation: float = 1e-3,
    shrink: float = 0.9,
) -> tuple[Polytope, list[FaceRecord]]:
    """Destroy all orthogonal symmetries by n successive truncations.

    Cuts near the given axes (default: standard basis, nudged into vertex
    normal cones when an axis exposes a whole face) with depths chosen by
    halving so that (a) fresh-face diameters strictly decrease, (b) cut
    regions stay separated from earlier faces and from the later cut
    vertices by a positive margin, and (c) the total Hausdorff
    displacement from the re-centered input stays within ``budget``.
    When a later cut cannot satisfy the separation no matter how shallow
    (an earlier face reaches into its cap), the whole cut sequence is
    retried at half the starting depths; small enough depths always admit
    a solution for the separated vertex plan.
    """
    if budget <= 0:
        raise InvalidArgumentError("budget must be positive")
    n = body_dim(body)
    grid = grid or default_grid(n)
    if axes is None:
        axes = np.eye(n)
    axes = np.asarray(axes, dtype=float)

    target = recenter(body, grid)
    poly = as_polytope(body)
    if poly is None:
        poly = polytope_approximation(body)
    start = recenter(poly, grid)
    if not start.is_full_dimensional:
        raise InvalidArgumentError("desymmetrize needs a full-dimensional body")

    diam = _pairwise_diameter(start.vertices)
    margin = separation * diam
    plan = _plan_cuts(start, axes, margin)

    base_disp = hausdorff(start, target, grid)
    if base_disp > budget:
        raise InfeasibleBudgetError(
            "polytope approximation alone exceeds the budget",
            min_displacement=base_disp,
        )

    last_error = None
    for trial in range(8):
        try:
            return _run_cut_sequence(
                start, plan, 0.5**trial, margin, shrink, target, budget, grid
            )
        except InfeasibleBudgetError as exc:
            last_error = exc
    raise InfeasibleBudgetError(
        f"no feasible cut sequence within budget {budget}",
        min_displacement=getattr(last_error, "min_displacement", base_disp),
    )


def _run_cut_sequence(
    start: Polytope,
    plan: list,
    depth_scale: float,
    margin: float,
    shrink: float,
    target: Body,
    budget: float,
    grid: SphericalGrid,
) -> tuple[Polytope, list[FaceRecord]]:
    current = start
    cut_verts = [v.copy() for _, v in plan]
    faces: list[np.ndarray] = []
    records: list[FaceRecord] = []
    prev_diam = math.inf
    best_disp = hausdorff(current, target, grid)

    for k, (u, _) in enumerate(plan):
        h_u = float(support_values(current, u[None, :])[0])
        w = h_u + float(support_values(current, -u[None, :])[0])
        eps = min(w / 4.0, budget) * depth_scale
        accepted = None
        for _ in range(60):
            try:
                cand = _feasible_cut(
                    current, u, eps, cut_verts[k + 1:], faces,
                    prev_diam * shrink, margin, target, budget, grid,
                )
            except EmptyResultError:
                cand = None
            if cand is not None:
                accepted = cand
                break
            eps *= 0.5
        if accepted is None:
            raise InfeasibleBudgetError(
                f"no feasible cut depth along axis {k}",
                min_displacement=best_disp,
            )
        current, shift, face_verts, face_diam, best_disp = accepted
        faces = [f - shift for f in faces]
        faces.append(face_verts)
        cut_verts = [v - shift for v in cut_verts]
        records.append(
            FaceRecord(normal=u.copy(), diameter=face_diam, vertex_set=face_verts)
        )
        prev_diam = face_diam

    return current, records


def _feasible_cut(
    current: Polytope,
    u: np.ndarray,
    eps: float,
    later_vertices: list[np.ndarray],
    faces: list[np.ndarray],
    max_diam: float,
    margin: float,
    target: Body,
    budget: float,
    grid: SphericalGrid,
):
    h_u = float(support_values(current, u[None, :])[0])
    w = h_u + float(support_values(current, -u[None, :])[0])
    if eps <= 0 or eps >= w / 2.0:
        return None
    cut = h_u - eps
    # separation: earlier faces and later cut vertices stay clear
    for f in faces:
        if np.any(f @ u >= cut - margin):
            return None
    for p in later_vertices:
        if float(p @ u) >= cut - margin:
            return None
    clipped = Polytope(_clip_vertices(current.vertices, u, cut))
    if not clipped.is_full_dimensional:
        return None
    face = clipped.vertices[clipped.vertices @ u >= cut - _FACE_TOL * (1 + abs(cut))]
    face_diam = _pairwise_diameter(face)
    if face_diam <= 0 or face_diam > max_diam:
        return None
    shift = steiner(clipped, grid)
    centered = Polytope(clipped.vertices - shift)
    disp = hausdorff(centered, target, grid)
    if disp > budget:
        return None
    return centered, shift, face - shift, face_diam, disp


def isotropy_estimate(
    body: Body,
    candidates: np.ndarray | None = None,
    tol: float = 1e-6,
    grid: SphericalGrid | None = None,
) -> list[Rotation]:
    """Candidates g with hausdorff(gD, D) below tol (body assumed centered).

    The scan certifies symmetry only over the finite candidate set; the
    default sets are dense circles (n=2) and an SO(3) spiral plus platonic
    groups (n=3), both doubled into the improper coset.
    """
    n = body_dim(body)
    grid = grid or default_grid(n)
    if candidates is None:
        candidates = default_candidates(n)
    base = support_values(body, grid.nodes)
    kept = []
    for g in candidates:
        vals = support_values(body, grid.nodes @ g)
        if float(np.abs(vals - base).max()) < tol:
            kept.append(Rotation(g))
    return kept
