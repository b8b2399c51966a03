"""Seeded random bodies and lattices.

The generator is SplitMix64 so that every derived test value can be
reproduced bit-for-bit by another implementation:

    state <- state + 0x9E3779B97F4A7C15   (mod 2**64)
    z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

Uniform doubles are (out >> 11) * 2**-53; normals use Box-Muller on two
consecutive uniforms (cosine branch only).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateBodyError, DomainError
from ..geom2d import Ellipse2D, Polygon2D, SupportSampled2D
from ..geom3d import Ellipsoid3, Polytope3
from ..lattice import Lattice
from .._numerics import angle_grid

_MASK = (1 << 64) - 1
MAX_RETRIES = 100


class SplitMix64:
    def __init__(self, seed=0):
        self.state = int(seed) & _MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo=0.0, hi=1.0, size=None):
        if size is None:
            return lo + (hi - lo) * (self.next_u64() >> 11) * 2.0 ** -53
        return np.array([self.uniform(lo, hi) for _ in range(int(np.prod(size)))]).reshape(size)

    def normal(self, size=None):
        if size is None:
            u1 = 1.0 - self.uniform()
            u2 = self.uniform()
            return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        return np.array([self.normal() for _ in range(int(np.prod(size)))]).reshape(size)

    def integers(self, lo, hi):
        """Uniform integer in [lo, hi)."""
        span = hi - lo
        if span <= 0:
            raise DomainError("empty integer range")
        return lo + self.next_u64() % span

    def sphere(self, k, dim=3):
        out = np.empty((k, dim))
        for i in range(k):
            v = self.normal(dim)
            while np.linalg.norm(v) < 1e-12:
                v = self.normal(dim)
            out[i] = v / np.linalg.norm(v)
        return out


@dataclass(frozen=True)
class RandomBodySpec:
    kind: str
    seed: int = 0
    k: int = 6
    m: int = 3
    amplitude: float = 0.2
    n: int = 1024


def _annulus_points(rng, k, r_min=0.5):
    theta = rng.uniform(0.0, 2.0 * math.pi, size=k)
    r = np.sqrt(rng.uniform(r_min ** 2, 1.0, size=k))
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def _retry(make, rng):
    for _ in range(MAX_RETRIES):
        try:
            return make(rng)
        except DegenerateBodyError:
            continue
    raise DegenerateBodyError("random body generator exhausted its retries")


def symmetric_polygon(rng, k=6):
    """Hull of ±(k points drawn in the annulus 1/2 <= |x| <= 1)."""
    if k < 2:
        raise DomainError("a symmetric polygon needs at least 2 point pairs")

    def make(rng):
        p = _annulus_points(rng, k)
        return Polygon2D.hull(np.vstack([p, -p]))

    return _retry(make, rng)


def polygon(rng, k=6):
    """Hull of k annulus points; asymmetric with probability one."""
    if k < 3:
        raise DomainError("a polygon needs at least 3 points")

    def make(rng):
        poly = Polygon2D.hull(_annulus_points(rng, k))
        if poly.symmetric or len(poly.vertices) < 3:
            raise DegenerateBodyError("symmetric draw")
        return poly

    return _retry(make, rng)


def smooth_trig(rng, m=3, amplitude=0.2, n=1024, min_curvature=0.05):
    """h(θ) = 1 + a Σ_{j<=m} (α_j cos 2jθ + β_j sin 2jθ), even harmonics only.

    Coefficients are normal draws; a is lowered when needed so that
    h + h'' >= ``min_curvature`` on a 16x finer grid.
    """
    if m == 0:
        return SupportSampled2D(np.ones(n))
    coef = rng.normal(size=(m, 2))
    j = np.arange(1, m + 1)[:, None]
    fine = angle_grid(16 * n)[None, :]
    p = (coef[:, :1] * np.cos(2 * j * fine) + coef[:, 1:] * np.sin(2 * j * fine))
    curv = ((1.0 - 4.0 * j ** 2) * p).sum(axis=0)
    a = float(amplitude)
    if curv.min() < 0:
        a = min(a, (1.0 - min_curvature) / -curv.min())
    theta = angle_grid(n)[None, :]
    h = 1.0 + a * (coef[:, :1] * np.cos(2 * j * theta) + coef[:, 1:] * np.sin(2 * j * theta)).sum(axis=0)
    return SupportSampled2D(h)


def ellipse(rng, n=None):
    """Random ellipse; returned as support samples when ``n`` is given."""
    a = rng.uniform(0.5, 2.0)
    b = rng.uniform(0.5, 2.0)
    e = Ellipse2D(a, b, rng.uniform(0.0, math.pi))
    return e if n is None else SupportSampled2D.from_body(e, n)


def polytope3(rng, k=8):
    """Hull of ±(k uniform points on the unit sphere)."""
    if k < 3:
        raise DomainError("a symmetric polytope needs at least 3 point pairs")

    def make(rng):
        p = rng.sphere(k)
        return Polytope3.hull(np.vstack([p, -p]))

    return _retry(make, rng)


def polytope3_asymmetric(rng, k=10):
    def make(rng):
        return Polytope3.hull(rng.sphere(k))

    return _retry(make, rng)


def ellipsoid(rng):
    return Ellipsoid3(*(rng.uniform(0.5, 2.0) for _ in range(3)))


def random_unimodular(rng, dim=2, steps=6):
    """Product of random elementary integer shears."""
    m = np.eye(dim, dtype=np.int64)
    for _ in range(steps):
        i = rng.integers(0, dim)
        j = (i + 1 + rng.integers(0, dim - 1)) % dim
        c = rng.integers(-2, 3)
        m[i] += c * m[j]
    return m


def random_lattice(rng, dim=2, scale=1.0):
    a = np.eye(dim) + 0.3 * rng.normal(size=(dim, dim))
    while abs(np.linalg.det(a)) < 0.2:
        a = np.eye(dim) + 0.3 * rng.normal(size=(dim, dim))
    return Lattice(scale * a)


def random_body(spec: RandomBodySpec):
    """Body from a :class:`RandomBodySpec`; identical specs give identical bodies."""
    rng = SplitMix64(spec.seed)
    kinds = {
        "symmetric-polygon": lambda: symmetric_polygon(rng, spec.k),
        "polygon": lambda: polygon(rng, spec.k),
        "smooth-trig": lambda: smooth_trig(rng, spec.m, spec.amplitude, spec.n),
        "ellipse": lambda: ellipse(rng, spec.n),
        "polytope3": lambda: polytope3(rng, spec.k),
        "ellipsoid": lambda: ellipsoid(rng),
    }
    if spec.kind not in kinds:
        raise DomainError(f"unknown random body kind {spec.kind!r}")
    return kinds[spec.kind]()
