"""Umbrella command-line interface.

Exit codes: 0 success, 2 validation/parse error, 3 infeasible request
(empty truncation, impossible budget), 4 I/O failure.  All numbers print
with 17 significant digits.  Grid resolution resolves flag > env var
CONVEXHYPER_GRID ("M", "LATxLON", or "M,LATxLON") > library default.
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click
import numpy as np

from . import congruence as congruence_mod
from .bodies import Sum, body_dim, sample_support, Sampled
from .corpus import Corpus
from .curvature import curvature_report
from .errors import (
    ConvexHyperError,
    EmptyResultError,
    InfeasibleBudgetError,
    InvalidArgumentError,
)
from .metrics import hausdorff as hausdorff_fn
from .metrics import recenter as recenter_fn
from .metrics import steiner as steiner_fn
from .plotting import atomic_write_text, plot_svg_2d
from .quadrature import (
    DEFAULT_LAT_3D,
    DEFAULT_LON_3D,
    DEFAULT_NODES_2D,
    make_grid_2d,
    make_grid_3d,
    make_grid_nd,
)
from .regularization import RegularizationParams, regularize as regularize_fn
from .serialization import BodyDocument, parse_body, serialize_body
from .truncation import (
    TruncationSpec,
    desymmetrize as desymmetrize_fn,
    isotropy_estimate,
    truncate as truncate_fn,
)

_NUM = "{:.17g}"


def _fmt(x: float) -> str:
    return _NUM.format(float(x))


def _parse_grid_env():
    raw = os.environ.get("CONVEXHYPER_GRID", "")
    m2, lat3, lon3 = None, None, None
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if "x" in part:
            a, b = part.split("x", 1)
            lat3, lon3 = int(a), int(b)
        else:
            m2 = int(part)
    return m2, lat3, lon3


def _resolve_grid(dim: int, grid_2d: int | None, grid_3d: str | None):
    env_m2, env_lat, env_lon = _parse_grid_env()
    if dim == 2:
        m = grid_2d or env_m2 or DEFAULT_NODES_2D
        return make_grid_2d(m)
    if dim == 3:
        if grid_3d:
            lat, lon = (int(v) for v in grid_3d.lower().split("x", 1))
        elif env_lat:
            lat, lon = env_lat, env_lon
        else:
            lat, lon = DEFAULT_LAT_3D, DEFAULT_LON_3D
        return make_grid_3d(lat, lon)
    return make_grid_nd(dim, 4096)


def _read_doc(path: str) -> BodyDocument:
    with open(path, "r") as fh:
        return parse_body(fh.read())


def _write_doc(path: str, doc: BodyDocument):
    atomic_write_text(path, serialize_body(doc) + "\n")


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.asarray([float(v) for v in text.split(",")], dtype=float)
    except ValueError as exc:
        raise InvalidArgumentError(f"bad vector {text!r}: {exc}") from None


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (EmptyResultError, InfeasibleBudgetError) as exc:
            click.echo(f"infeasible: {exc}", err=True)
            sys.exit(3)
        except ConvexHyperError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except OSError as exc:
            click.echo(f"i/o error: {exc}", err=True)
            sys.exit(4)

    return wrapper


def _grid_options(fn):
    fn = click.option("--grid-2d", type=int, default=None, help="2-D node count")(fn)
    fn = click.option(
        "--grid-3d", type=str, default=None, metavar="LATxLON", help="3-D grid size"
    )(fn)
    return fn


@click.group()
def main():
    """Convex bodies via support functions: metrics, smoothing, symmetry."""


@main.command()
@click.argument("body", type=click.Path(exists=True, dir_okay=False))
@click.option("--dir", "direction", required=True, help="direction X,Y[,Z,...]")
@_handle_errors
def support(body, direction):
    """Print the support value h(body) at a direction."""
    doc = _read_doc(body)
    x = _parse_vector(direction)
    from .bodies import eval_support

    click.echo(_fmt(eval_support(doc.body, x)))


@main.command()
@click.argument("body", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@_grid_options
@_handle_errors
def sample(body, out, grid_2d, grid_3d):
    """Sample the support function on a grid; write a sampled body."""
    doc = _read_doc(body)
    grid = _resolve_grid(body_dim(doc.body), grid_2d, grid_3d)
    sampled = Sampled(sample_support(doc.body, grid))
    _write_doc(out, BodyDocument(body=sampled, metadata=doc.metadata))


@main.command()
@click.argument("body_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("body_b", type=click.Path(exists=True, dir_okay=False))
@_grid_options
@_handle_errors
def hausdorff(body_a, body_b, grid_2d, grid_3d):
    """Hausdorff distance between two bodies."""
    a = _read_doc(body_a).body
    b = _read_doc(body_b).body
    grid = _resolve_grid(body_dim(a), grid_2d, grid_3d)
    click.echo(_fmt(hausdorff_fn(a, b, grid)))


@main.command()
@click.argument("body", type=click.Path(exists=True, dir_okay=False))
@_grid_options
@_handle_errors
def steiner(body, grid_2d, grid_3d):
    """Steiner point coordinates."""
    doc = _read_doc(body)
    grid = _resolve_grid(body_dim(doc.body), grid_2d, grid_3d)
    s = steiner_fn(doc.body, grid)
    click.echo(" ".join(_fmt(v) for v in s))


@main.command()
@click.argument("body", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@_grid_options
@_handle_errors
def recenter(body, out, grid_2d, grid_3d):
    """Translate the body so its Steiner point is the origin."""
    doc = _read_doc(body)
    grid = _resolve_grid(body_dim(doc.body), grid_2d, grid_3d)
    _write_doc(out, BodyDocument(body=recenter_fn(doc.body, grid), metadata=doc.metadata))


@main.command()
@click.argument("body_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("body_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--explicit", is_flag=True, help="materialize the vertex-sum polytope")
@_handle_errors
def minkowski(body_a, body_b, out, explicit):
    """Minkowski sum of two bodies."""
    a = _read_doc(body_a).body
    b = _read_doc(body_b).body
    if explicit:
        from .bodies import as_polytope, polytope_sum

        pa, pb = as_polytope(a), as_polytope(b)
        if pa is None or pb is None:
            raise InvalidArgumentError("--explicit needs polytope inputs")
        result = polytope_sum(pa, pb)
    else:
        result = Sum(a, b)
    _write_doc(out, BodyDocument(body=result))


@main.command()
@click.option("--t", "t_value", type=float, required=True)
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--radial", type=int, default=16, show_default=True)
@click.option("--angular", type=int, default=None, help="kernel angular nodes")
@_grid_options
@_handle_errors
def regularize(t_value, in_path, out, radial, angular, grid_2d, grid_3d):
    """Smooth a body: mollify its support function and add a t-ball."""
    doc = _read_doc(in_path)
    grid = _resolve_grid(body_dim(doc.body), grid_2d, grid_3d)
    params = RegularizationParams(t=t_value, radial_nodes=radial, angular_nodes=angular)
    _write_doc(out, BodyDocument(body=regularize_fn(doc.body, params, grid)))


@main.command()
@click.option("--u", "direction", required=True, help="outward normal X,Y[,Z]")
@click.option("--eps", type=float, required=True)
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@_grid_options
@_handle_errors
def truncate(direction, eps, in_path, out, grid_2d, grid_3d):
    """Cut the eps-slab below the support plane with normal u, re-center."""
    doc = _read_doc(in_path)
    grid = _resolve_grid(body_dim(doc.body), grid_2d, grid_3d)
    u = _parse_vector(direction)
    u = u / np.linalg.norm(u)
    result = truncate_fn(doc.body, TruncationSpec(u, eps), grid)
    _write_doc(out, BodyDocument(body=result))


@main.command()
@click.option("--budget", type=float, required=True)
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@_grid_options
@_handle_errors
def desymmetrize(budget, in_path, out, grid_2d, grid_3d):
    """Destroy all orthogonal symmetries within a Hausdorff budget."""
    doc = _read_doc(in_path)
    grid = _resolve_grid(body_dim(doc.body), grid_2d, grid_3d)
    result, faces = desymmetrize_fn(doc.body, budget, grid)
    _write_doc(out, BodyDocument(body=result))
    for rec in faces:
        click.echo(
            "face normal=("
            + ",".join(_fmt(v) for v in rec.normal)
            + ") diameter="
            + _fmt(rec.diameter)
        )


@main.command()
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@_grid_options
@_handle_errors
def symmetries(tol, in_path, grid_2d, grid_3d):
    """Scan the default O(n) candidates for symmetries of a centered body."""
    doc = _read_doc(in_path)
    grid = _resolve_grid(body_dim(doc.body), grid_2d, grid_3d)
    kept = isotropy_estimate(doc.body, tol=tol, grid=grid)
    click.echo(
        json.dumps(
            {
                "count": len(kept),
                "elements": [r.matrix.tolist() for r in kept],
            }
        )
    )


@main.command()
@click.argument("body_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("body_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--tol", type=float, default=None, help="also report same-class verdict")
@click.option("--so-n", "proper_only", is_flag=True, help="restrict to SO(n)")
@click.option("--coarse", type=int, default=None)
@_grid_options
@_handle_errors
def congruence(body_a, body_b, tol, proper_only, coarse, grid_2d, grid_3d):
    """Distance between congruence classes, minimized over O(n)."""
    a = _read_doc(body_a).body
    b = _read_doc(body_b).body
    grid = _resolve_grid(body_dim(a), grid_2d, grid_3d)
    params = congruence_mod.SearchParams(
        coarse=coarse, include_reflections=not proper_only
    )
    result = congruence_mod.congruence_distance(a, b, grid, params)
    payload = {
        "distance": result.distance,
        "rotation_matrix": result.optimizer.matrix.tolist(),
        "certificate_size": result.certificate_size,
    }
    if tol is not None:
        payload["same_class"] = bool(result.distance < tol)
    click.echo(json.dumps(payload))


@main.command()
@click.argument("out", type=click.Path(dir_okay=False))
@click.argument("bodies", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@_handle_errors
def plot(out, bodies):
    """Write an SVG overlay of planar bodies."""
    plot_svg_2d([_read_doc(p).body for p in bodies], out)


@main.command()
@click.option("--seed", type=int, required=True)
@click.option("--spec", "spec_str", required=True, help="e.g. poly:n=2,verts=12,count=8")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@_handle_errors
def corpus(seed, spec_str, out_dir):
    """Generate a reproducible corpus of random bodies."""
    made = Corpus.generate(seed, spec_str)
    os.makedirs(out_dir, exist_ok=True)
    for i, doc in enumerate(made.bodies):
        _write_doc(os.path.join(out_dir, f"body_{i:04d}.json"), doc)
    click.echo(f"wrote {len(made.bodies)} bodies to {out_dir}")


@main.command("curvature")
@click.argument("body", type=click.Path(exists=True, dir_okay=False))
@click.option("--step", type=float, default=1e-3, show_default=True)
@click.option("--margin", type=float, default=1e-6, show_default=True)
@_grid_options
@_handle_errors
def curvature_cmd(body, step, margin, grid_2d, grid_3d):
    """Check positive curvature of the boundary via the support Hessian."""
    doc = _read_doc(body)
    grid = _resolve_grid(body_dim(doc.body), grid_2d, grid_3d)
    rep = curvature_report(doc.body, grid, step=step, margin=margin)
    payload = {"positive": rep.ok, "min_value": rep.min_value}
    if not rep.ok:
        payload["failing_node"] = rep.failing_node.tolist()
    click.echo(json.dumps(payload))


if __name__ == "__main__":
    main()
