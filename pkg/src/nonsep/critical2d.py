"""Critical lattices of centrally symmetric planar bodies and d_{2,1}.

For a symmetric body K with boundary C, every triple p1, p2, p3 = p1 + p2 on C
spans a K-admissible lattice, and some critical lattice arises this way. For
each boundary point p1 the partner p2 is unique up to the symmetry of the
inscribed affine regular hexagon ±p1, ±p2, ±p3, so Δ(K) is the minimum of the
one-variable function p1 ↦ |det(p1, p2(p1))|. We scan it on a uniform grid
and refine the best local minima by golden-section search.

Partners are found exactly on polygons (the gauge is piecewise linear along
each boundary segment) and by bisection on smooth bodies.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geom2d
from ._numerics import TWO_PI, bisect, cross2, golden_section, unit
from .errors import NumericalError, PreconditionError
from .geom2d import Ellipse2D, Polygon2D, SupportSampled2D
from .lattice import Lattice, WidthCertificate, is_nonseparable

DEFAULT_RESOLUTION = 2048
REFINE_TOL = 1e-10
_CANDIDATES = 8


@dataclass(frozen=True)
class CriticalCertificate:
    delta: float
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    residuals: np.ndarray
    scan_resolution: int
    method: str = "scan"

    @property
    def lattice(self):
        return Lattice.from_vectors(self.p1, self.p2)

    @property
    def hexagon(self):
        """Vertices ±p1, ±p2, ±p3 in counterclockwise order."""
        p1, p2, p3 = self.p1, self.p2, self.p3
        return np.array([p1, p3, p2, -p1, -p3, -p2])

    def to_dict(self):
        return {
            "delta": self.delta,
            "p1": self.p1.tolist(),
            "p2": self.p2.tolist(),
            "p3": self.p3.tolist(),
            "residuals": self.residuals.tolist(),
            "scanResolution": self.scan_resolution,
            "method": self.method,
        }


@dataclass(frozen=True)
class CentralTriangle:
    vertices: np.ndarray

    @property
    def area(self):
        a, b, c = self.vertices
        return 0.5 * abs(float(cross2(b - a, c - a)))

    @property
    def barycenter(self):
        return self.vertices.mean(axis=0)

    def to_dict(self):
        return {"vertices": self.vertices.tolist(), "area": self.area}


# ---------------------------------------------------------------------------
# boundary curves


class _PolygonCurve:
    """Arc-length parameterization of a polygon boundary."""

    def __init__(self, poly):
        v = poly.vertices
        e = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(e[:, 0], e[:, 1])
        self.vertices = v
        self.edges = e
        self.lengths = lengths
        self.cum = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
        self.period = float(lengths.sum())
        self.rows = poly.normals / poly.offsets[:, None]
        self.gauge = poly.gauge

    def point(self, t):
        t = np.mod(t, self.period)
        idx = np.clip(np.searchsorted(self.cum, t, side="right") - 1, 0, len(self.cum) - 1)
        frac = (t - self.cum[idx]) / self.lengths[idx]
        return self.vertices[idx] + frac[:, None] * self.edges[idx]

    def partner(self, t, p1):
        half = 0.5 * self.period
        r = np.mod(self.cum[None, :] - t[:, None], self.period)
        in_arc = (r > 0) & (r < half)
        base = (p1 @ self.rows.T)[:, None, :] + (self.vertices @ self.rows.T)[None, :, :]
        g = base.max(axis=2)
        r_first = np.where(in_arc & (g <= 1.0), r, half).min(axis=1)
        r_prev = np.where(in_arc & (r < r_first[:, None]), r, 0.0).max(axis=1)
        q0 = self.point(t + r_prev)
        q1 = self.point(t + r_first)
        # gauge along p1 + q0 + λ(q1 - q0) is max_i(a_i + λ b_i); first λ with value <= 1
        a = (p1 + q0) @ self.rows.T
        b = (q1 - q0) @ self.rows.T
        with np.errstate(divide="ignore", invalid="ignore"):
            bounds = np.where(b < 0, (a - 1.0) / -b, -np.inf)
        lam = np.clip(bounds.max(axis=1), 0.0, 1.0)
        return q0 + lam[:, None] * (q1 - q0)


class _SmoothCurve:
    """Boundary parameterized by polar angle (sampled) or ellipse parameter."""

    period = TWO_PI

    def __init__(self, body, iterations=64):
        self.body = body
        self.gauge = body.gauge
        self.iterations = iterations
        if isinstance(body, Ellipse2D):
            m = body.matrix
            self.point = lambda t: unit(t) @ m.T
        else:
            self.point = lambda t: body.radial(t)[:, None] * unit(t)

    def partner(self, t, p1):
        def f(s):
            return self.gauge(p1 + self.point(t + s)) - 1.0

        s = bisect(f, np.zeros_like(t), np.full_like(t, np.pi), self.iterations)
        return self.point(t + s)


def _curve(body):
    if isinstance(body, Polygon2D):
        return _PolygonCurve(body)
    if isinstance(body, (SupportSampled2D, Ellipse2D)):
        return _SmoothCurve(body)
    raise TypeError(f"unsupported body {type(body).__name__}")


# ---------------------------------------------------------------------------
# critical lattices


def _ellipse_certificate(ell):
    m = ell.matrix
    p1 = m @ np.array([1.0, 0.0])
    p2 = m @ np.array([-0.5, np.sqrt(3.0) / 2])
    p3 = p1 + p2
    res = ell.gauge(np.array([p1, p2, p3])) - 1.0
    return CriticalCertificate(float(np.sqrt(3.0) / 2 * ell.a * ell.b), p1, p2, p3, res, 0, "analytic")


def critical_lattice(body, resolution=DEFAULT_RESOLUTION, method="auto", rel_tol=REFINE_TOL,
                     candidates=_CANDIDATES):
    """Critical determinant Δ(K) and a critical basis of a symmetric body.

    Parameters
    ----------
    body : Body2D
        Centrally symmetric, origin in the interior.
    resolution : int
        Number of scan nodes over half the boundary.
    method : {"auto", "scan"}
        ``"auto"`` uses the closed form for ellipses; ``"scan"`` forces the
        numerical search for every representation.
    rel_tol : float
        Golden-section stopping tolerance relative to the boundary period.
    candidates : int
        Number of scan minima refined.

    Returns
    -------
    CriticalCertificate
    """
    if not body.symmetric:
        raise PreconditionError("critical lattices are computed for symmetric bodies only")
    if isinstance(body, Ellipse2D) and method == "auto":
        return _ellipse_certificate(body)
    curve = _curve(body)

    def objective(t):
        p1 = curve.point(t)
        return np.abs(cross2(p1, curve.partner(t, p1)))

    step = 0.5 * curve.period / resolution
    nodes = np.arange(resolution) * step
    g = objective(nodes)
    local = np.nonzero((g <= np.roll(g, 1)) & (g <= np.roll(g, -1)))[0]
    local = local[np.argsort(g[local], kind="stable")][:candidates]
    t_ref, g_ref = golden_section(objective, nodes[local] - step, nodes[local] + step,
                                  rel_tol=rel_tol, scale=curve.period)
    best = int(np.argmin(g_ref))
    t_best = t_ref[best] if g_ref[best] <= g.min() else nodes[int(np.argmin(g))]

    t_arr = np.array([t_best])
    p1 = curve.point(t_arr)
    p2 = curve.partner(t_arr, p1)
    p1, p2 = p1[0], p2[0]
    p3 = p1 + p2
    res = body.gauge(np.array([p1, p2, p3])) - 1.0
    if np.abs(res).max() > 1e-6:
        raise NumericalError(f"critical triple left the boundary (residuals {res})")
    return CriticalCertificate(float(abs(cross2(p1, p2))), p1, p2, p3, res, resolution, "scan")


def critical_determinant(body, **kw):
    return critical_lattice(body, **kw).delta


def minimal_central_triangle(body, **kw):
    """Minimal-area central triangle inscribed in a symmetric body: (p1, p2, -p3)."""
    cert = critical_lattice(body, **kw)
    return CentralTriangle(np.array([cert.p1, cert.p2, -cert.p3]))


# ---------------------------------------------------------------------------
# d_{2,1}


@dataclass(frozen=True)
class D21Result:
    value: float
    area: float
    symmetral: object
    polar_certificate: CriticalCertificate

    @property
    def star_critical(self):
        return _star_from_polar_certificate(self.polar_certificate)


def d21_details(body, **kw):
    ks = geom2d.difference_body(body)
    cert = critical_lattice(geom2d.polar(ks), **kw)
    a = geom2d.area(body)
    return D21Result(a * cert.delta / 4.0, a, ks, cert)


def d21(body, **kw):
    """d_{2,1}(K) = |K| Δ(((K - K)/2)°) / 4."""
    return d21_details(body, **kw).value


def _star_from_polar_certificate(cert):
    q = 0.5 * np.column_stack([cert.p1, cert.p2])
    return Lattice(np.linalg.inv(q).T)


def star_critical_lattice(body, **kw):
    """Non-separable lattice of maximal determinant Δ*(K) = 4/Δ(K_s°).

    Asymmetric bodies are replaced by their central symmetral, which has the
    same lattice widths.
    """
    ks = geom2d.difference_body(body)
    return _star_from_polar_certificate(critical_lattice(geom2d.polar(ks), **kw))


# ---------------------------------------------------------------------------
# the triangle construction


@dataclass(frozen=True)
class NonsepConstruction:
    lattice: Lattice
    certificate: WidthCertificate
    triangle: np.ndarray
    triangle_area: float
    polar_triangle_area: float

    def __iter__(self):
        return iter((self.lattice, self.certificate))


def construct_nonsep_lattice(body, tpolar):
    """Non-separable lattice from a central triangle inscribed in the polar.

    The polar triangle T = (T°)° circumscribes ``body``; its vertices A, B, C
    give generators ⅔(C - A), ⅔(B - A), so d(Λ) = (8/9)|T|.
    """
    q = np.asarray(tpolar.vertices if isinstance(tpolar, CentralTriangle) else tpolar, dtype=float)
    scale = np.abs(q).max()
    if np.abs(q.sum(axis=0)).max() > 1e-9 * scale:
        raise PreconditionError("triangle barycenter is not the origin")
    if np.abs(body.support(q) - 1.0).max() > 1e-7:
        raise PreconditionError("triangle vertices are not on the boundary of the polar body")
    ones = np.ones(2)
    a = np.linalg.solve(q[[1, 2]], ones)
    b = np.linalg.solve(q[[2, 0]], ones)
    c = np.linalg.solve(q[[0, 1]], ones)
    tri = np.array([a, b, c])
    t_area = 0.5 * abs(float(cross2(b - a, c - a)))
    tp_area = CentralTriangle(q).area
    lat = Lattice.from_vectors(2.0 / 3.0 * (c - a), 2.0 / 3.0 * (b - a))
    if abs(lat.det - 8.0 / 9.0 * t_area) > 1e-9 * t_area:
        raise NumericalError("lattice determinant differs from 8|T|/9")
    if abs(t_area * tp_area - 27.0 / 4.0) > 1e-9 * 27.0 / 4.0:
        raise NumericalError("|T||T°| differs from 27/4")
    return NonsepConstruction(lat, is_nonseparable(body, lat), tri, t_area, tp_area)
