"""Small numerical kernels: Fourier calculus on periodic grids, vectorized
bracketing root finders and a 2D hull."""
import numpy as np

from .errors import DegenerateBodyError, NumericalError

TWO_PI = 2.0 * np.pi


def angle_grid(n):
    return TWO_PI * np.arange(n) / n


def unit(theta):
    """Unit vectors (cos, sin) for an array of angles, shape (..., 2)."""
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def spectral_derivative(samples, order=1):
    """Derivative of uniformly sampled 2π-periodic data along axis 0.

    The Nyquist mode is dropped for odd orders so that real data stays real.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[0]
    coeffs = np.fft.rfft(samples, axis=0)
    k = np.arange(coeffs.shape[0], dtype=float)
    factor = (1j * k) ** order
    if order % 2 == 1 and n % 2 == 0:
        factor[-1] = 0.0
    factor = factor.reshape((-1,) + (1,) * (samples.ndim - 1))
    return np.fft.irfft(coeffs * factor, n=n, axis=0)


def periodic_trapezoid(values):
    """∫_0^{2π} f for samples on the uniform grid (spectrally accurate for smooth f)."""
    values = np.asarray(values, dtype=float)
    return TWO_PI * values.sum(axis=0) / values.shape[0]


class TrigInterpolant:
    """Trigonometric interpolant of samples on the uniform grid of [0, 2π).

    Modes whose amplitude is below ``1e-15`` of the largest one are dropped,
    which keeps low-order trigonometric bodies cheap to evaluate.
    """

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        c = np.fft.rfft(samples) / n
        weight = np.full(c.size, 2.0)
        weight[0] = 1.0
        if n % 2 == 0:
            weight[-1] = 1.0
        c = c * weight
        keep = np.abs(c) > 1e-15 * np.abs(c).max()
        keep[0] = True
        self.n = n
        self.modes = np.nonzero(keep)[0].astype(float)
        self.coeffs = c[keep]

    def __call__(self, theta, deriv=0):
        theta = np.asarray(theta, dtype=float)
        flat = theta.reshape(-1)
        phase = np.exp(1j * np.outer(flat, self.modes))
        out = np.real(phase @ (self.coeffs * (1j * self.modes) ** deriv))
        return out.reshape(theta.shape)


def bisect(fn, lo, hi, iterations=64):
    """Vectorized bisection for fn(lo) > 0 >= fn(hi) (elementwise brackets)."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        positive = fn(mid) > 0
        lo = np.where(positive, mid, lo)
        hi = np.where(positive, hi, mid)
    return 0.5 * (lo + hi)


_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_section(fn, a, b, rel_tol=1e-10, scale=1.0, max_iter=200):
    """Vectorized golden-section minimization of ``fn`` on brackets [a, b].

    Stops when every bracket is shorter than ``rel_tol * scale``. Returns the
    best abscissae and values found (including the bracket interior probes).
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = fn(c)
    fd = fn(d)
    for _ in range(max_iter):
        if np.all(b - a <= rel_tol * scale):
            break
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        # the surviving probe moves into the slot of the discarded one
        c_new = np.where(left, b - _INV_PHI * (b - a), d)
        d_new = np.where(left, c, a + _INV_PHI * (b - a))
        f_keep = np.where(left, fc, fd)
        probe = np.where(left, c_new, d_new)
        f_probe = fn(probe)
        fc = np.where(left, f_probe, f_keep)
        fd = np.where(left, f_keep, f_probe)
        c, d = c_new, d_new
    else:
        raise NumericalError("golden-section search did not converge")
    pick_c = fc <= fd
    return np.where(pick_c, c, d), np.where(pick_c, fc, fd)


def convex_hull_2d(points, tol=1e-12):
    """Counterclockwise hull vertices (Andrew's monotone chain).

    Collinear and duplicate points are removed; ``tol`` is relative to the
    squared point-cloud scale.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 3:
        raise DegenerateBodyError("need at least 3 points for a planar hull")
    scale = max(np.abs(pts).max(), np.ptp(pts, axis=0).max())
    if scale == 0.0:
        raise DegenerateBodyError("all points coincide")
    eps = tol * scale * scale
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= eps:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        raise DegenerateBodyError("points are collinear")
    return hull
