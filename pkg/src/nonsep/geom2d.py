"""Planar convex bodies.

Three representations share one interface:

* :class:`Polygon2D` -- vertices in counterclockwise order (exact path),
* :class:`SupportSampled2D` -- support function sampled on a uniform angular
  grid (smooth path; Fourier calculus),
* :class:`Ellipse2D` -- centred ellipse (analytic path).

Every body implements ``support``, ``gauge``, ``area``, ``polar``,
``difference_body``, ``boundary_point``, ``rotate90`` and ``scaled``; the
module-level functions of the same names are thin wrappers that add argument
checking.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from ._numerics import (
    TWO_PI,
    TrigInterpolant,
    angle_grid,
    convex_hull_2d,
    cross2,
    periodic_trapezoid,
    spectral_derivative,
    unit,
)
from .errors import DegenerateBodyError, DomainError, GeometryError, PreconditionError

EXACT_TOL = 1e-9
QUADRATURE_TOL = 1e-6
DEFAULT_SAMPLES = 1024

_ROT90 = np.array([[0.0, -1.0], [1.0, 0.0]])


def _as_points(x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise DomainError(f"expected 2-vectors, got shape {x.shape}")
    return x


def _check_directions(u):
    u = _as_points(u)
    if np.any(np.all(u == 0.0, axis=-1)):
        raise DomainError("support of the zero direction is undefined")
    return u


@dataclass(frozen=True)
class BoundaryPoint2D:
    """Point γ(x) of the boundary whose outer normal is (cos x, sin x)."""

    x: float
    point: np.ndarray
    tangent: np.ndarray


# ---------------------------------------------------------------------------
# polygons


@dataclass(frozen=True, eq=False)
class Polygon2D:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise DegenerateBodyError("a polygon needs at least 3 vertices")
        scale = np.abs(v).max()
        if scale == 0.0:
            raise DegenerateBodyError("all vertices at the origin")
        edges = np.roll(v, -1, axis=0) - v
        if np.any(np.hypot(edges[:, 0], edges[:, 1]) <= 1e-12 * scale):
            raise DegenerateBodyError("repeated vertices")
        turns = cross2(edges, np.roll(edges, -1, axis=0))
        if np.any(turns <= 1e-12 * scale * scale):
            raise DegenerateBodyError(
                "vertices are not in strictly convex counterclockwise order")
        area = 0.5 * cross2(v, np.roll(v, -1, axis=0)).sum()
        if area < 1e-12 * scale * scale:
            raise DegenerateBodyError("polygon has (near) zero area")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def hull(cls, points):
        """Polygon spanned by the convex hull of ``points``."""
        return cls(convex_hull_2d(points))

    @property
    def scale(self):
        return float(np.abs(self.vertices).max())

    @cached_property
    def _edges(self):
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(e[:, 0], e[:, 1])
        normals = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]
        offsets = np.einsum("ij,ij->i", normals, v)
        return e, lengths, normals, offsets

    @property
    def normals(self):
        """Outer unit normals of the edges v_i -> v_{i+1}."""
        return self._edges[2]

    @property
    def offsets(self):
        """Support values c_i of the edge lines <n_i, x> = c_i."""
        return self._edges[3]

    @property
    def origin_interior(self):
        return bool(np.all(self.offsets > 1e-12 * self.scale))

    @cached_property
    def _gauge_rows(self):
        if not self.origin_interior:
            raise PreconditionError("origin is not interior to the polygon")
        return self.normals / self.offsets[:, None]

    @cached_property
    def symmetric(self):
        v = self.vertices
        if len(v) % 2:
            return False
        tol = 1e-12 * self.scale
        half = len(v) // 2
        return bool(np.all(np.abs(v + np.roll(v, -half, axis=0)) <= tol))

    @property
    def circumradius(self):
        return float(np.hypot(self.vertices[:, 0], self.vertices[:, 1]).max())

    def support(self, u):
        return (np.asarray(u, dtype=float) @ self.vertices.T).max(axis=-1)

    def gauge(self, x):
        return (np.asarray(x, dtype=float) @ self._gauge_rows.T).max(axis=-1)

    def area(self):
        v = self.vertices
        return float(0.5 * cross2(v, np.roll(v, -1, axis=0)).sum())

    def polar(self):
        return Polygon2D(self._gauge_rows)

    def difference_body(self):
        if self.symmetric:
            return self
        v = self.vertices
        diffs = (v[:, None, :] - v[None, :, :]).reshape(-1, 2)
        return Polygon2D.hull(0.5 * diffs)

    def boundary_point(self, x):
        u = unit(x)
        vals = self.vertices @ u
        top = vals.max()
        ties = np.nonzero(vals >= top - 1e-12 * self.scale)[0]
        if len(ties) == 1:
            p = self.vertices[ties[0]]
        else:
            p = self.vertices[ties].mean(axis=0)
        return BoundaryPoint2D(float(x), p.copy(), np.array([-u[1], u[0]]))

    def rotate90(self):
        return Polygon2D(self.vertices @ _ROT90.T)

    def scaled(self, factor):
        if factor <= 0:
            raise DomainError("scale factor must be positive")
        return Polygon2D(self.vertices * factor)

    def linear_image(self, matrix):
        m = np.asarray(matrix, dtype=float)
        v = self.vertices @ m.T
        if np.linalg.det(m) < 0:
            v = v[::-1]
        return Polygon2D(v)

    def to_dict(self):
        return {"type": "polygon2d", "vertices": self.vertices.tolist()}


# ---------------------------------------------------------------------------
# sampled support functions


def _discrete_curvature(h):
    n = h.size
    step = TWO_PI / n
    return np.roll(h, 1) + np.roll(h, -1) - 2.0 * h + step * step * h


@dataclass(frozen=True, eq=False)
class SupportSampled2D:
    """Support function sampled at h_k = h(2πk/n), n a power of two.

    Between the nodes the body is the trigonometric interpolant of the
    samples. The gauge is evaluated from a cubic Hermite model of the radial
    function built on a 4x finer grid of boundary points. A body produced by
    :meth:`polar` keeps its source in ``dual`` and evaluates gauge and
    radial function exactly through it (gauge of K° is h_K).
    """

    h: np.ndarray
    dual: SupportSampled2D | None = field(default=None, repr=False)

    def __post_init__(self):
        h = np.array(self.h, dtype=float).reshape(-1)
        n = h.size
        if n < 8 or n & (n - 1):
            raise GeometryError(f"sample count must be a power of two >= 8, got {n}")
        if not np.all(np.isfinite(h)) or np.any(h <= 0):
            raise PreconditionError("support samples must be positive (origin interior)")
        if _discrete_curvature(h).min() < -1e-8 * h.max():
            raise GeometryError("support samples violate discrete convexity h + h'' >= 0")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @classmethod
    def from_function(cls, fn, n=DEFAULT_SAMPLES):
        return cls(fn(angle_grid(n)))

    @classmethod
    def from_body(cls, body, n=DEFAULT_SAMPLES):
        """Sample the support function of any planar body."""
        return cls(body.support(unit(angle_grid(n))))

    @property
    def n(self):
        return self.h.size

    @property
    def scale(self):
        return float(self.h.max())

    @cached_property
    def symmetric(self):
        return bool(np.all(np.abs(self.h - np.roll(self.h, self.n // 2)) <= 1e-12 * self.scale))

    @cached_property
    def _series(self):
        return TrigInterpolant(self.h)

    def h_at(self, theta, deriv=0):
        return self._series(theta, deriv)

    def support(self, u):
        u = np.asarray(u, dtype=float)
        r = np.hypot(u[..., 0], u[..., 1])
        return r * self._series(np.arctan2(u[..., 1], u[..., 0]))

    def area(self):
        dh = spectral_derivative(self.h)
        return float(0.5 * periodic_trapezoid(self.h ** 2 - dh ** 2))

    def polar_area(self):
        """Area of the polar body, ½∫ h^{-2}."""
        return float(0.5 * periodic_trapezoid(self.h ** -2.0))

    def boundary_points(self, theta):
        theta = np.asarray(theta, dtype=float)
        h = self._series(theta)
        dh = self._series(theta, 1)
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([h * c - dh * s, h * s + dh * c], axis=-1)

    def boundary_point(self, x):
        p = self.boundary_points(np.array([x]))[0]
        return BoundaryPoint2D(float(x), p, np.array([-np.sin(x), np.cos(x)]))

    @cached_property
    def _radial(self):
        """(spline, phi0): radial function ρ(φ) as a periodic Hermite spline."""
        m = 4 * self.n
        theta = angle_grid(m)
        pts = self.boundary_points(theta)
        phi = np.unwrap(np.arctan2(pts[:, 1], pts[:, 0]))
        rho = np.hypot(pts[:, 0], pts[:, 1])
        drho = -rho * np.tan(theta - phi)
        # corners of non-smooth bodies make φ stall; keep a strictly increasing subset
        running = np.maximum.accumulate(phi)
        keep = np.ones(m, dtype=bool)
        keep[1:] = phi[1:] > running[:-1] + 1e-13
        keep &= phi < phi[0] + TWO_PI - 1e-13
        phi, rho, drho = phi[keep], rho[keep], drho[keep]
        spline = CubicHermiteSpline(
            np.append(phi, phi[0] + TWO_PI), np.append(rho, rho[0]), np.append(drho, drho[0]))
        return spline, phi[0], float(rho.max())

    def radial(self, phi):
        if self.dual is not None:
            return 1.0 / self.dual.h_at(phi)
        spline, phi0, _ = self._radial
        return spline(phi0 + np.mod(np.asarray(phi, dtype=float) - phi0, TWO_PI))

    @property
    def circumradius(self):
        if self.dual is not None:
            return float(1.0 / self.dual.h_at(angle_grid(4 * self.n)).min())
        return self._radial[2]

    def gauge(self, x):
        if self.dual is not None:
            return self.dual.support(x)
        x = np.asarray(x, dtype=float)
        r = np.hypot(x[..., 0], x[..., 1])
        return r / self.radial(np.arctan2(x[..., 1], x[..., 0]))

    def polar(self):
        if self.dual is not None:
            return self.dual
        theta = angle_grid(self.n)
        exact = 1.0 / self.radial(theta)
        # support of the inscribed polygon through boundary points u_ψ / h(ψ)
        # of the polar; never exceeds the true value, so this only repairs
        # interpolation error near corners
        psi = angle_grid(2 * self.n)
        pts = unit(psi) / self._series(psi)[:, None]
        inscribed = (unit(theta) @ pts.T).max(axis=1)
        return SupportSampled2D(np.maximum(exact, inscribed), dual=self)

    def difference_body(self):
        if self.symmetric:
            return self
        return SupportSampled2D(0.5 * (self.h + np.roll(self.h, -self.n // 2)))

    def rotate90(self):
        if self.n % 4:
            raise GeometryError("rotate90 needs a sample count divisible by 4")
        return SupportSampled2D(np.roll(self.h, self.n // 4))

    def scaled(self, factor):
        if factor <= 0:
            raise DomainError("scale factor must be positive")
        return SupportSampled2D(self.h * factor)

    def to_dict(self):
        return {"type": "support2d", "n": self.n, "h": self.h.tolist(), "symmetric": self.symmetric}


# ---------------------------------------------------------------------------
# ellipses


@dataclass(frozen=True, eq=False)
class Ellipse2D:
    """Centred ellipse with semi-axes a, b; axis a along angle phi."""

    a: float
    b: float
    phi: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DegenerateBodyError("ellipse semi-axes must be positive")
        for name in ("a", "b", "phi"):
            object.__setattr__(self, name, float(getattr(self, name)))

    symmetric = True
    origin_interior = True

    @cached_property
    def matrix(self):
        """M with ellipse = M · unit disk."""
        c, s = np.cos(self.phi), np.sin(self.phi)
        return np.array([[c, -s], [s, c]]) @ np.diag([self.a, self.b])

    @property
    def scale(self):
        return max(self.a, self.b)

    @property
    def circumradius(self):
        return max(self.a, self.b)

    def support(self, u):
        return np.linalg.norm(np.asarray(u, dtype=float) @ self.matrix, axis=-1)

    def gauge(self, x):
        return np.linalg.norm(np.asarray(x, dtype=float) @ np.linalg.inv(self.matrix).T, axis=-1)

    def area(self):
        return float(np.pi * self.a * self.b)

    def polar(self):
        return Ellipse2D(1.0 / self.a, 1.0 / self.b, self.phi)

    def difference_body(self):
        return self

    def boundary_points(self, theta):
        u = unit(theta)
        mt = u @ self.matrix
        return (mt @ self.matrix.T) / np.linalg.norm(mt, axis=-1, keepdims=True)

    def boundary_point(self, x):
        u = unit(x)
        return BoundaryPoint2D(float(x), self.boundary_points(np.array([x]))[0], np.array([-u[1], u[0]]))

    def rotate90(self):
        return Ellipse2D(self.a, self.b, self.phi + np.pi / 2)

    def scaled(self, factor):
        if factor <= 0:
            raise DomainError("scale factor must be positive")
        return Ellipse2D(self.a * factor, self.b * factor, self.phi)

    def to_dict(self):
        return {"type": "ellipse2d", "a": self.a, "b": self.b, "phi": self.phi}


Body2D = Polygon2D | SupportSampled2D | Ellipse2D


# ---------------------------------------------------------------------------
# module-level operations


def support(body, u):
    """Support function h_K(u) = max_{x in K} <u, x>; 1-homogeneous in u."""
    u = _check_directions(u)
    out = body.support(u)
    return float(out) if np.ndim(out) == 0 else out


def gauge(body, x):
    """Minkowski functional: min{t >= 0 : x in tK}. Requires 0 in int K."""
    x = _as_points(x)
    out = body.gauge(x)
    return float(out) if np.ndim(out) == 0 else out


def area(body):
    return body.area()


def polar(body):
    """K° = {x : <x, y> <= 1 for all y in K}. Requires 0 in int K."""
    if isinstance(body, Polygon2D) and not body.origin_interior:
        raise PreconditionError("origin is not interior to the polygon")
    return body.polar()


def difference_body(body):
    """Central symmetral (K - K)/2."""
    return body.difference_body()


def boundary_param(body, x):
    return body.boundary_point(float(x))


def rotate90(body):
    return body.rotate90()


def is_symmetric(body):
    return bool(body.symmetric)


def body_from_dict(data):
    """Decode the JSON object form of a planar body."""
    kind = data.get("type")
    if kind == "polygon2d":
        return Polygon2D(data["vertices"])
    if kind == "support2d":
        h = data["h"]
        if "n" in data and int(data["n"]) != len(h):
            raise GeometryError(f"n = {data['n']} disagrees with {len(h)} samples")
        body = SupportSampled2D(h)
        if "symmetric" in data and bool(data["symmetric"]) != body.symmetric:
            raise GeometryError("symmetric flag disagrees with the samples")
        return body
    if kind == "ellipse2d":
        return Ellipse2D(data["a"], data["b"], data.get("phi", 0.0))
    raise GeometryError(f"unknown planar body type {kind!r}")


def body_to_dict(body):
    return body.to_dict()


def santalo_product(body):
    """|K| |K°|, bounded by π² for symmetric K."""
    return area(body) * area(polar(body))
