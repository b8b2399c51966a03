"""Convex bodies in ℝ³: polytopes, balls, ellipsoids; projection bodies,
central sections and sphere quadrature."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import geom2d
from ._numerics import convex_hull_2d, cross2
from .errors import DegenerateBodyError, DomainError, NumericalError, PreconditionError
from .geom2d import Ellipse2D, Polygon2D

BALL_VOLUME = 4.0 * np.pi / 3.0
PETTY_BOUND = 64.0 / 27.0
CAUCHY_TOL = 1e-9


# ---------------------------------------------------------------------------
# sphere quadrature


def fibonacci_nodes(n):
    """Fibonacci lattice on S²: z at equal-area band midpoints, longitude
    advancing by 2π/φ per node index."""
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    lon = np.pi * (np.sqrt(5.0) - 1.0) * i
    r = np.sqrt(1.0 - z * z)
    return np.column_stack([r * np.cos(lon), r * np.sin(lon), z])


@dataclass(frozen=True, eq=False)
class SphereGrid:
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def fibonacci(cls, n=2562):
        return cls(fibonacci_nodes(n), np.full(n, 4.0 * np.pi / n))

    @classmethod
    def hemisphere(cls, n=1281):
        """Upper half (z > 0) of the 2n-node Fibonacci grid."""
        full = fibonacci_nodes(2 * n)
        keep = full[:, 2] > 0
        return cls(full[keep], np.full(int(keep.sum()), 2.0 * np.pi / n))

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values):
        return float(np.dot(self.weights, values))


def polar_volume_radial(support_fn, grid=None):
    """|L°| = (1/3)∫ h_L(u)^{-3} dσ(u), by quadrature on ``grid``."""
    grid = grid or SphereGrid.fibonacci(2562)
    return grid.integrate(support_fn(grid.nodes) ** -3.0) / 3.0


def polar_volume_report(support_fn, sizes=(2562, 10242)):
    coarse, fine = (polar_volume_radial(support_fn, SphereGrid.fibonacci(n)) for n in sizes)
    return {"coarse": coarse, "fine": fine, "relative_difference": abs(fine - coarse) / fine}


# ---------------------------------------------------------------------------
# bodies


def frame(h):
    """Orthonormal basis (e1, e2) of h⊥, as the columns of a 3x2 matrix."""
    h = np.asarray(h, dtype=float)
    h = h / np.linalg.norm(h)
    k = int(np.argmin(np.abs(h)))
    ek = np.zeros(3)
    ek[k] = 1.0
    e1 = np.cross(ek, h)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(h, e1)
    return np.column_stack([e1, e2])


@dataclass(frozen=True, eq=False)
class Polytope3:
    """Convex polytope: hull vertices and an outward-oriented triangulation."""

    vertices: np.ndarray
    triangles: np.ndarray

    @classmethod
    def hull(cls, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 4:
            raise DegenerateBodyError("need at least 4 points in ℝ³")
        try:
            qh = ConvexHull(pts)
        except QhullError as exc:
            raise DegenerateBodyError("points are coplanar or degenerate") from exc
        scale = np.abs(pts).max()
        if qh.volume <= 1e-12 * scale ** 3:
            raise DegenerateBodyError("hull has (near) zero volume")
        used = np.unique(qh.simplices)
        remap = np.full(len(pts), -1)
        remap[used] = np.arange(len(used))
        verts = pts[used]
        tris = remap[qh.simplices]
        a, b, c = verts[tris[:, 0]], verts[tris[:, 1]], verts[tris[:, 2]]
        flip = np.einsum("ij,ij->i", np.cross(b - a, c - a), qh.equations[:, :3]) < 0
        tris[flip] = tris[flip][:, [0, 2, 1]]
        return cls(verts, tris)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        t = np.array(self.triangles, dtype=int)
        edges = np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
        _, counts = np.unique(edges, axis=0, return_counts=True)
        if np.any(counts != 2):
            raise DegenerateBodyError("triangulation is not a closed surface")
        v.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)

    @property
    def scale(self):
        return float(np.abs(self.vertices).max())

    @cached_property
    def _facets(self):
        v, t = self.vertices, self.triangles
        a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
        cr = np.cross(b - a, c - a)
        areas = 0.5 * np.linalg.norm(cr, axis=1)
        normals = cr / (2.0 * areas[:, None])
        offsets = np.einsum("ij,ij->i", normals, a)
        return normals, offsets, areas

    @property
    def normals(self):
        return self._facets[0]

    @property
    def offsets(self):
        return self._facets[1]

    @property
    def areas(self):
        return self._facets[2]

    @cached_property
    def edges(self):
        t = self.triangles
        e = np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
        return np.unique(e, axis=0)

    @cached_property
    def centroid(self):
        return self.vertices.mean(axis=0)

    @property
    def origin_interior(self):
        return bool(np.all(self.offsets > 1e-12 * self.scale))

    @cached_property
    def symmetric(self):
        v = self.vertices
        tol = 1e-9 * self.scale
        d = np.linalg.norm(v[:, None, :] + v[None, :, :], axis=2)
        return bool(np.all(d.min(axis=1) <= tol))

    @property
    def circumradius(self):
        return float(np.linalg.norm(self.vertices, axis=1).max())

    @cached_property
    def _planes(self):
        """Distinct facet planes (n, c), merging triangles of one face."""
        n, c = self.normals, self.offsets
        key = np.round(np.column_stack([n, c / self.scale]) * 1e8).astype(np.int64)
        _, first = np.unique(key, axis=0, return_index=True)
        first = np.sort(first)
        return n[first], c[first]

    def support(self, u):
        return (np.asarray(u, dtype=float) @ self.vertices.T).max(axis=-1)

    def gauge(self, x):
        if not self.origin_interior:
            raise PreconditionError("origin is not interior to the polytope")
        n, c = self._planes
        return (np.asarray(x, dtype=float) @ (n / c[:, None]).T).max(axis=-1)

    def volume(self):
        v, t = self.vertices, self.triangles
        c0 = self.centroid
        a, b, c = v[t[:, 0]] - c0, v[t[:, 1]] - c0, v[t[:, 2]] - c0
        return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)

    def polar(self):
        if not self.origin_interior:
            raise PreconditionError("origin is not interior to the polytope")
        n, c = self._planes
        return Polytope3.hull(n / c[:, None])

    def scaled(self, factor):
        if factor <= 0:
            raise DomainError("scale factor must be positive")
        return Polytope3(self.vertices * factor, self.triangles)

    def difference_body(self):
        if self.symmetric:
            return self
        v = self.vertices
        return Polytope3.hull(0.5 * (v[:, None, :] - v[None, :, :]).reshape(-1, 3))

    def projection_body(self):
        """Π P as a zonotope: generators ½ area(F) n_F, merged per face plane."""
        n = self.normals
        key = np.round(n * 1e9).astype(np.int64)
        _, inv = np.unique(key, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        g = np.zeros((inv.max() + 1, 3))
        np.add.at(g, inv, 0.5 * self.areas[:, None] * n)
        return Zonotope3(g)

    def projected_area(self, u):
        """|Pr_{u⊥} P| via the Cauchy sum and via the hull of the shadow."""
        u = np.asarray(u, dtype=float)
        u = u / np.linalg.norm(u)
        cauchy = 0.5 * float(np.dot(self.areas, np.abs(self.normals @ u)))
        shadow = self.vertices @ frame(u)
        hull = convex_hull_2d(shadow)
        direct = 0.5 * float(cross2(hull, np.roll(hull, -1, axis=0)).sum())
        if abs(cauchy - direct) > CAUCHY_TOL * max(direct, 1e-300):
            raise NumericalError(f"Cauchy formula {cauchy} disagrees with shadow area {direct}")
        return direct

    def central_section(self, h):
        """P ∩ h⊥ as a polygon in the frame of :func:`frame`."""
        h = np.asarray(h, dtype=float)
        h = h / np.linalg.norm(h)
        if not self.origin_interior:
            raise PreconditionError("origin is not interior to the polytope")
        v = self.vertices
        s = v @ h
        tol = 1e-12 * self.scale
        on = np.abs(s) <= tol
        i, j = self.edges[:, 0], self.edges[:, 1]
        cross = (s[i] > tol) & (s[j] < -tol) | (s[i] < -tol) & (s[j] > tol)
        i, j = i[cross], j[cross]
        lam = s[i] / (s[i] - s[j])
        pts = np.concatenate([v[on], v[i] + lam[:, None] * (v[j] - v[i])])
        return Polygon2D.hull(pts @ frame(h))

    def to_dict(self):
        return {"type": "polytope3d", "vertices": self.vertices.tolist()}


@dataclass(frozen=True, eq=False)
class Ellipsoid3:
    """Axis-aligned centred ellipsoid with semi-axes a, b, c."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.c > 0):
            raise DegenerateBodyError("ellipsoid semi-axes must be positive")
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, float(getattr(self, name)))

    symmetric = True
    origin_interior = True

    @property
    def axes(self):
        return np.array([self.a, self.b, self.c])

    @property
    def scale(self):
        return float(self.axes.max())

    @property
    def circumradius(self):
        return float(self.axes.max())

    def support(self, u):
        return np.linalg.norm(np.asarray(u, dtype=float) * self.axes, axis=-1)

    def gauge(self, x):
        return np.linalg.norm(np.asarray(x, dtype=float) / self.axes, axis=-1)

    def volume(self):
        return float(BALL_VOLUME * self.a * self.b * self.c)

    def polar(self):
        return Ellipsoid3(1.0 / self.a, 1.0 / self.b, 1.0 / self.c)

    def scaled(self, factor):
        return Ellipsoid3(self.a * factor, self.b * factor, self.c * factor)

    def difference_body(self):
        return self

    def projection_body(self):
        a, b, c = self.a, self.b, self.c
        return Ellipsoid3(np.pi * b * c, np.pi * a * c, np.pi * a * b)

    def projected_area(self, u):
        u = np.asarray(u, dtype=float)
        u = u / np.linalg.norm(u)
        return float(np.pi * self.a * self.b * self.c * np.linalg.norm(u / self.axes))

    def central_section(self, h):
        e = frame(h)
        q = e.T @ np.diag(self.axes ** -2.0) @ e
        w, vecs = np.linalg.eigh(q)
        phi = float(np.arctan2(vecs[1, 0], vecs[0, 0]))
        return Ellipse2D(1.0 / np.sqrt(w[0]), 1.0 / np.sqrt(w[1]), phi)

    def to_polytope(self, n=2562):
        return Polytope3.hull(fibonacci_nodes(n) * self.axes)

    def to_dict(self):
        if self.a == self.b == self.c:
            return {"type": "ball3d", "r": self.a}
        return {"type": "ellipsoid3d", "a": self.a, "b": self.b, "c": self.c}


def Ball3(r=1.0):
    return Ellipsoid3(r, r, r)


@dataclass(frozen=True, eq=False)
class Zonotope3:
    """Centred zonotope Σ[-g, g]; support u ↦ Σ|<g, u>|."""

    generators: np.ndarray

    def __post_init__(self):
        g = np.array(self.generators, dtype=float).reshape(-1, 3)
        g.setflags(write=False)
        object.__setattr__(self, "generators", g)

    def support(self, u):
        u = np.asarray(u, dtype=float)
        flat = u.reshape(-1, 3)
        out = np.empty(len(flat))
        # bound the (directions x generators) temporary to ~2**22 entries
        step = max(1, (1 << 22) // max(len(self.generators), 1))
        for i in range(0, len(flat), step):
            out[i:i + step] = np.abs(flat[i:i + step] @ self.generators.T).sum(axis=1)
        return out.reshape(u.shape[:-1])


Body3D = Polytope3 | Ellipsoid3


# ---------------------------------------------------------------------------
# module-level operations


def convex_hull3(points):
    return Polytope3.hull(points)


def volume3(body):
    return body.volume()


def polar3(body):
    return body.polar()


def projection_body(body):
    return body.projection_body()


def projected_area(body, u):
    return body.projected_area(u)


def central_section(body, h):
    return body.central_section(h)


def hausdorff_2d(a, b, directions=4096):
    """Hausdorff distance of planar convex bodies via sup |h_a - h_b|."""
    theta = 2.0 * np.pi * np.arange(directions) / directions
    u = np.column_stack([np.cos(theta), np.sin(theta)])
    extra = [body.normals for body in (a, b) if isinstance(body, Polygon2D)]
    if extra:
        u = np.concatenate([u, *extra])
    return float(np.abs(a.support(u) - b.support(u)).max())


def section_projection_gap(body, h):
    """Hausdorff gap between (P°) ∩ h⊥ and (Pr_{h⊥} P)°; zero in exact arithmetic."""
    section = central_section(polar3(body), h)
    if isinstance(body, Polytope3):
        shadow = Polygon2D.hull(body.vertices @ frame(h))
    else:
        shadow = central_section(body.polar(), h).polar()
    return hausdorff_2d(section, geom2d.polar(shadow))


def santalo_product3(body):
    return body.volume() * body.polar().volume()


@dataclass(frozen=True)
class PettyReport:
    polar_projection_volume: float
    quadrature: dict
    volume: float
    value: float
    bound: float = PETTY_BOUND

    @property
    def ratio(self):
        return self.value / self.bound

    @property
    def passed(self):
        return self.value <= self.bound * (1 + 1e-3)


def petty_check(body, sizes=(2562, 10242)):
    """|(ΠK)°| |K|² against its ellipsoid value 64/27."""
    pi_body = projection_body(body)
    if isinstance(pi_body, Ellipsoid3):
        pv = pi_body.polar().volume()
        quad = {"coarse": pv, "fine": pv, "relative_difference": 0.0}
    else:
        quad = polar_volume_report(pi_body.support, sizes)
        pv = quad["fine"]
    vol = body.volume()
    return PettyReport(pv, quad, vol, pv * vol * vol)


def body_from_dict(data):
    kind = data.get("type")
    if kind == "polytope3d":
        return Polytope3.hull(data["vertices"])
    if kind == "ball3d":
        return Ball3(data.get("r", 1.0))
    if kind == "ellipsoid3d":
        return Ellipsoid3(data["a"], data["b"], data["c"])
    raise DomainError(f"unknown 3D body type {kind!r}")
