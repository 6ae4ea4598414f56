"""Quadrature, contour integration and dense linear algebra helpers.

Everything downstream (contour integral solutions, Nystrom determinants,
conformal-map coefficient extraction) goes through this module.
"""
from dataclasses import dataclass
import heapq
import warnings
from functools import lru_cache

import numpy as np
import scipy.linalg


class SingularMatrixError(ArithmeticError):
    """Raised when a matrix is numerically singular."""


class ContourError(RuntimeError):
    """Raised when adaptive contour integration cannot reach its tolerance.

    ``estimate`` and ``error`` hold the best value and its error estimate
    when the panel budget ran out (None for other failures).
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@lru_cache(maxsize=64)
def _gauss_legendre_cached(n):
    # Newton iteration on P_n starting from the Tricomi approximation.
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (4 * k - 1) / (4 * n + 2)) * (1 - (n - 1) / (8.0 * n**3))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = n * (x * p1 - p0) / (x * x - 1)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    # recompute the derivative at the converged nodes for the weights
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, n + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = n * (x * p1 - p0) / (x * x - 1)
    w = 2.0 / ((1 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n):
    """Gauss-Legendre nodes and weights on [-1, 1].

    Parameters
    ----------
    n : int
        Number of nodes, 1 <= n <= 4096.

    Returns
    -------
    x, w : ndarray
        Ascending nodes and the matching positive weights.
    """
    n = int(n)
    if n < 1 or n > 4096:
        raise ValueError("gauss_legendre needs 1 <= n <= 4096, got %d" % n)
    x, w = _gauss_legendre_cached(n)
    return x.copy(), w.copy()


def gauss_legendre_interval(n, a, b):
    """Gauss-Legendre rule mapped to the real interval [a, b]."""
    x, w = gauss_legendre(n)
    h = 0.5 * (b - a)
    return a + h * (x + 1), h * w


# --------------------------------------------------------------------------
# contour segments

@dataclass(frozen=True)
class Line:
    """Straight segment from ``a`` to ``b``."""
    a: complex
    b: complex

    def point(self, u):
        return self.a + (self.b - self.a) * u

    def deriv(self, u):
        return np.full(np.shape(u), self.b - self.a, dtype=complex)

    def reversed(self):
        return Line(self.b, self.a)


@dataclass(frozen=True)
class Arc:
    """Circular arc ``center + radius * exp(i*phi)`` for phi from ``phi0`` to ``phi1``."""
    center: complex
    radius: float
    phi0: float
    phi1: float

    def point(self, u):
        phi = self.phi0 + (self.phi1 - self.phi0) * u
        return self.center + self.radius * np.exp(1j * phi)

    def deriv(self, u):
        phi = self.phi0 + (self.phi1 - self.phi0) * u
        return 1j * self.radius * (self.phi1 - self.phi0) * np.exp(1j * phi)

    def reversed(self):
        return Arc(self.center, self.radius, self.phi1, self.phi0)


@dataclass(frozen=True)
class Ray:
    """Half-line ``origin + r * direction`` for r >= 0 (direction normalised).

    With ``inward=True`` the ray is traversed from infinity to the origin.
    """
    origin: complex
    direction: complex
    inward: bool = False

    def unit(self):
        return self.direction / abs(self.direction)

    def reversed(self):
        return Ray(self.origin, self.direction, not self.inward)


def circle(center, radius, ccw=True):
    """Full circle as a single arc starting at angle -pi."""
    if ccw:
        return Arc(center, radius, -np.pi, np.pi)
    return Arc(center, radius, np.pi, -np.pi)


# --------------------------------------------------------------------------
# adaptive integration

_NLOW = 16
_NHIGH = 32


def _panel_rule(seg, u0, u1):
    """Nodes, and weights including dt/du, of the low and high rules on a panel."""
    out = []
    for n in (_NLOW, _NHIGH):
        x, w = _gauss_legendre_cached(n)
        u = u0 + 0.5 * (u1 - u0) * (x + 1)
        out.append((seg.point(u), 0.5 * (u1 - u0) * w * seg.deriv(u)))
    return out


def _ray_rule(seg, r0, r1):
    d = seg.unit()
    out = []
    for n in (_NLOW, _NHIGH):
        x, w = _gauss_legendre_cached(n)
        r = r0 + 0.5 * (r1 - r0) * (x + 1)
        sgn = -1.0 if seg.inward else 1.0
        out.append((seg.origin + r * d, sgn * 0.5 * (r1 - r0) * w * d))
    return out


class _Panel:
    __slots__ = ("seg", "a", "b", "ray", "value", "err", "fmax", "length")

    def __init__(self, seg, a, b, ray, f):
        self.seg, self.a, self.b, self.ray = seg, a, b, ray
        (tl, wl), (th, wh) = (_ray_rule if ray else _panel_rule)(seg, a, b)
        fl = np.asarray(f(tl), dtype=complex)
        fh = np.asarray(f(th), dtype=complex)
        lo = np.sum(wl * fl, axis=-1)
        self.value = np.sum(wh * fh, axis=-1)
        self.err = float(np.max(np.abs(self.value - lo)))
        self.fmax = max(np.max(np.abs(fl)), np.max(np.abs(fh)))
        self.length = np.sum(np.abs(wh))
        if not np.all(np.isfinite(self.value)):
            raise ContourError("non-finite integrand on contour near %r" % (th[0],))

    def split(self, f):
        m = 0.5 * (self.a + self.b)
        return (_Panel(self.seg, self.a, m, self.ray, f),
                _Panel(self.seg, m, self.b, self.ray, f))


def _ray_panels(seg, f, r_scale, drop):
    """March outward along a ray with geometrically growing panels until the
    integrand is negligible."""
    panels = []
    r0, h = 0.0, r_scale
    peak = 0.0
    for _ in range(200):
        p = _Panel(seg, r0, r0 + h, True, f)
        panels.append(p)
        peak = max(peak, p.fmax)
        if p.fmax * p.length <= drop * max(peak, 1e-300) and len(panels) > 2:
            break
        r0, h = r0 + h, h * 1.6
    else:
        raise ContourError("integrand does not decay along ray from %r" % (seg.origin,))
    return panels


def integrate_contour(f, segments, tol=1e-12, *, abs_scale=1.0, init_panels=8,
                      ray_scale=1.0, max_panels=4000, return_error=False):
    """Adaptive integral of ``f`` along a piecewise contour.

    Each segment is split into panels; every panel is integrated with 16 and
    32 Gauss-Legendre points and the difference serves as its error estimate.
    The panel with the largest estimate is bisected until the summed estimate
    falls below ``tol * max(abs_scale, |I|)``.  Panels whose contribution bound
    (sup |f| times length) is below ``tol`` times the global sup of the
    integrand are considered converged.

    Parameters
    ----------
    f : callable
        Vectorised integrand, complex array in, complex array out.  The
        output may carry leading axes (several integrands sharing one
        contour); the node axis must be last and errors use the max norm.
    segments : sequence of Line, Arc or Ray
        Consecutive pieces of the contour, traversed in the given order.
    tol : float
        Relative tolerance.
    abs_scale : float
        Floor for the magnitude in the stopping test.  Use a small value to
        request relative accuracy for exponentially small integrals.
    ray_scale : float
        Length of the first panel on each ray.

    Returns
    -------
    complex, or (complex, float) when ``return_error`` is set.
    """
    panels = []
    for seg in segments:
        if isinstance(seg, Ray):
            panels.extend(_ray_panels(seg, f, ray_scale, tol * 1e-3))
        else:
            edges = np.linspace(0.0, 1.0, init_panels + 1)
            panels.extend(_Panel(seg, a, b, False, f) for a, b in zip(edges[:-1], edges[1:]))
    gmax = max(p.fmax for p in panels)
    heap = []
    for i, p in enumerate(panels):
        heapq.heappush(heap, (-p.err, i, p))
    counter = len(panels)
    total = sum(p.value for p in panels)
    err = sum(p.err for p in panels)
    while True:
        scale = max(abs_scale, float(np.max(np.abs(total))))
        if err <= tol * scale:
            break
        if counter > max_panels:
            best = sum(item[2].value for item in heap)
            raise ContourError("panel budget exhausted: error %.3g > %.3g" % (err, tol * scale),
                               estimate=best, error=float(err))
        negerr, _, p = heapq.heappop(heap)
        if p.fmax * p.length <= 1e-3 * tol * gmax * max(abs_scale, 1e-300) and p.err <= 1e-2 * tol * scale:
            # negligible panel that cannot be the reason we are not converged
            heapq.heappush(heap, (0.0, counter, p))
            counter += 1
            err -= p.err
            continue
        c1, c2 = p.split(f)
        total += c1.value + c2.value - p.value
        err += c1.err + c2.err - p.err
        gmax = max(gmax, c1.fmax, c2.fmax)
        for c in (c1, c2):
            heapq.heappush(heap, (-c.err, counter, c))
            counter += 1
    # recompute the sum from the leaves to avoid drift from running updates
    total = sum(item[2].value for item in heap)
    total = complex(total) if np.ndim(total) == 0 else np.asarray(total, dtype=complex)
    if return_error:
        return total, float(err)
    return total


def contour_rule(segments, panels_per_segment=8, n=32, ray_length=None):
    """Fixed composite Gauss rule (points, weights) along a contour.

    Used when the same contour serves many integrands.  Rays are truncated at
    ``ray_length``.
    """
    pts, wts = [], []
    x, w = _gauss_legendre_cached(n)
    for seg in segments:
        if isinstance(seg, Ray):
            if ray_length is None:
                raise ValueError("ray_length is required for rays")
            edges = ray_length * (np.geomspace(1.0, 65.0, panels_per_segment + 1) - 1.0) / 64.0
            d = seg.unit()
            sgn = -1.0 if seg.inward else 1.0
            for a, b in zip(edges[:-1], edges[1:]):
                r = a + 0.5 * (b - a) * (x + 1)
                pts.append(seg.origin + r * d)
                wts.append(sgn * 0.5 * (b - a) * w * d)
        else:
            edges = np.linspace(0.0, 1.0, panels_per_segment + 1)
            for a, b in zip(edges[:-1], edges[1:]):
                u = a + 0.5 * (b - a) * (x + 1)
                pts.append(seg.point(u))
                wts.append(0.5 * (b - a) * w * seg.deriv(u))
    return np.concatenate(pts), np.concatenate(wts)


def trapezoid_circle(center, radius, n, offset=0.5):
    """Equispaced counterclockwise nodes and weights on a circle.

    ``offset`` shifts the nodes by a fraction of the spacing so no node lands
    on the negative or positive real direction from the centre.
    """
    phi = -np.pi + 2 * np.pi * (np.arange(n) + offset) / n
    t = center + radius * np.exp(1j * phi)
    w = 2j * np.pi * radius * np.exp(1j * phi) / n
    return t, w


def laurent_coefficients(func, center, radius, kmin, kmax, n=128):
    """Laurent coefficients ``c_k`` for kmin <= k <= kmax of a function
    analytic in a punctured disc, by the trapezoid rule on a circle.

    ``func`` may return arrays; the leading axis of its output must match
    the node axis.
    """
    t, w = trapezoid_circle(center, radius, n)
    vals = np.asarray(func(t))
    out = {}
    for k in range(kmin, kmax + 1):
        fac = w / (2j * np.pi) / (t - center) ** (k + 1)
        out[k] = np.tensordot(fac, vals, axes=(0, 0))
    return out


# --------------------------------------------------------------------------
# linear algebra

def logdet(A):
    """Complex log-determinant by LU with partial pivoting.

    Returns ``log|det A| + i*arg(det A)`` with the phase reduced to
    (-pi, pi].  Raises SingularMatrixError for an exactly or numerically
    singular matrix.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("logdet needs a square matrix")
    if A.shape[0] == 0:
        return 0.0 + 0.0j
    with warnings.catch_warnings():
        # singularity is reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    d = np.diag(lu)
    amax = np.max(np.abs(A))
    if np.any(d == 0) or np.min(np.abs(d)) <= A.shape[0] * np.finfo(float).eps * amax * 1e-3:
        raise SingularMatrixError("matrix is singular to working precision")
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    logabs = np.sum(np.log(np.abs(d)))
    phase = np.sum(np.angle(d.astype(complex))) + np.pi * swaps
    phase = np.angle(np.exp(1j * phase))
    return complex(logabs, phase)


def solve_linear(A, b, refine=True):
    """Solve ``A x = b`` with row equilibration and one refinement step."""
    A = np.asarray(A)
    b = np.asarray(b)
    r = np.max(np.abs(A), axis=1)
    if np.any(r == 0):
        raise SingularMatrixError("matrix has a zero row")
    As = A / r[:, None]
    bs = (b.T / r).T
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(As, check_finite=True)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise SingularMatrixError(str(exc)) from exc
    if np.any(np.diag(lu[0]) == 0):
        raise SingularMatrixError("matrix is singular to working precision")
    x = scipy.linalg.lu_solve(lu, bs)
    if refine:
        x = x + scipy.linalg.lu_solve(lu, bs - As @ x)
    return x


def extrapolate_to_zero(h, values, order=None):
    """Polynomial (Richardson) extrapolation of ``values(h)`` to h = 0.

    Parameters
    ----------
    h : sequence of float
        Distinct step sizes.
    values : array_like
        Samples, with the step axis first; trailing axes are extrapolated
        independently.
    order : int, optional
        Polynomial degree; defaults to ``len(h) - 1`` (interpolation).
    """
    h = np.asarray(h, dtype=float)
    v = np.asarray(values)
    if order is None:
        order = len(h) - 1
    if order >= len(h):
        raise ValueError("need more samples than the extrapolation order")
    V = np.vander(h, order + 1, increasing=True)
    flat = v.reshape(len(h), -1)
    coef, *_ = np.linalg.lstsq(V.astype(complex) if np.iscomplexobj(flat) else V, flat, rcond=None)
    return coef[0].reshape(v.shape[1:]) if v.ndim > 1 else coef[0, 0]
