"""Gap probability of the hard edge Pearcey process by Nystrom discretization.

F(s) = ln det(I - gamma K_s) where K_s acts on L^2(0, s).  With Gauss-Legendre
nodes x_i and weights w_i on (0, s) the operator becomes the m x m matrix

    Khat_ij = sqrt(w_i w_j) K(x_i, x_j),

whose determinant converges exponentially fast in m for an analytic kernel.
Off the diagonal the kernel is assembled from the f/h vectors of each node,
on the diagonal from the derivative frame, so the expensive contour integrals
are done once per node.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernel as _k
from .numerics import gauss_legendre_interval, logdet, solve_linear, SingularMatrixError

S_MAX = 30.0
M_START = 32
M_MAX = 512
# largest |Im Khat_ij| tolerated before the assembly is declared broken
IMAG_LEAK_MAX = 1e-6


class GapError(ArithmeticError):
    """The discretized determinant is unusable (kernel failure or eigenvalue >= 1)."""


class ConvergenceError(ArithmeticError):
    """Node doubling did not reach the requested tolerance.

    ``result`` holds the last GapResult so callers can still inspect it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


def default_threads():
    try:
        return max(1, int(os.environ.get("PEARCEY_THREADS", "1")))
    except ValueError:
        return 1


def node_frames(nodes, alpha, rho, threads=None):
    """Psi~ frames at every node, optionally computed in a thread pool."""
    threads = default_threads() if threads is None else threads
    work = lambda x: _k.psi_tilde(float(x), alpha, rho)
    if threads <= 1 or len(nodes) < 8:
        return [work(x) for x in nodes]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, nodes))


@dataclass(frozen=True)
class NystromSystem:
    s: float
    m: int
    alpha: float
    rho: float
    gamma: float
    nodes: np.ndarray
    weights: np.ndarray
    khat: np.ndarray
    f: np.ndarray = field(repr=False)
    h: np.ndarray = field(repr=False)
    imag_leak: float = 0.0

    def log_det(self):
        """Real part of ln det(I - khat)."""
        return logdet(np.eye(self.m) - self.khat)

    def max_eigenvalue(self):
        return float(np.max(np.real(np.linalg.eigvals(self.khat))))


def kernel_matrix(nodes, frames):
    """K(x_i, x_j) as a complex matrix from precomputed frames."""
    m = len(nodes)
    f = np.array([fr.M[:, 0] for fr in frames])
    h = np.array([_k.fh_vectors(x, fr.alpha, fr.rho, frame=fr)[1]
                  for x, fr in zip(nodes, frames)])
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    K = (f @ h.T) / diff
    for i, fr in enumerate(frames):
        K[i, i] = _k.kernel_diag(nodes[i], fr.alpha, fr.rho, frame=fr, check_real=False)
    return K, f, h


def build_nystrom(s, m, alpha, rho, gamma=1.0, threads=None):
    """Discretize gamma * K on (0, s) with m Gauss-Legendre nodes."""
    if not s > 0:
        raise ValueError("s must be positive")
    if m < 8:
        raise ValueError("need at least 8 nodes")
    x, w = gauss_legendre_interval(m, 0.0, s)
    frames = node_frames(x, alpha, rho, threads)
    K, f, h = kernel_matrix(x, frames)
    sw = np.sqrt(w)
    khat = gamma * sw[:, None] * K * sw[None, :]
    if not np.all(np.isfinite(khat)):
        raise GapError("kernel evaluation produced non-finite entries at s = %g" % s)
    leak = float(np.max(np.abs(khat.imag)))
    if leak > IMAG_LEAK_MAX:
        raise GapError("kernel matrix has imaginary part %.3g" % leak)
    return NystromSystem(float(s), m, alpha, rho, gamma, x, w, khat.real.copy(), f, h, leak)


@dataclass
class GapResult:
    F: float
    m_used: int
    est_error: float
    history: list
    imag_leak: float
    system: NystromSystem = field(repr=False, default=None)


def gap_log_prob(s, alpha, rho, tol=1e-10, gamma=1.0, m_start=M_START, m_max=M_MAX,
                 threads=None, check_spectrum=True):
    """ln det(I - gamma K_s), doubling the node count until two successive
    values differ by less than ``tol``.

    Raises ConvergenceError if m_max is reached first and GapError if the
    discretized operator has an eigenvalue >= 1.
    """
    if not 0 < s <= S_MAX:
        raise ValueError("s must lie in (0, %g]" % S_MAX)
    history = []
    prev = None
    m = m_start
    while True:
        sysm = build_nystrom(s, m, alpha, rho, gamma, threads)
        ld = sysm.log_det()
        if abs(ld.imag) > 1e-6:
            raise GapError("det(I - K) is not positive at s = %g (phase %.3g)" % (s, ld.imag))
        history.append((m, ld.real))
        if prev is not None:
            diff = abs(ld.real - prev)
            res = GapResult(ld.real, m, diff, history, sysm.imag_leak, sysm)
            if diff < tol:
                break
            if 2 * m > m_max:
                raise ConvergenceError("no convergence to %.3g by m = %d (last change %.3g)"
                                       % (tol, m, diff), res)
        prev = ld.real
        m *= 2
    if check_spectrum and sysm.max_eigenvalue() >= 1.0:
        raise GapError("discretized kernel has an eigenvalue >= 1 at s = %g" % s)
    return res


def log_det_fixed(s, alpha, rho, m, gamma=1.0, threads=None):
    """ln det(I - gamma K_s) at a fixed node count.

    Finite differences use a fixed m so that the discretization error is a
    smooth function of the parameters.
    """
    ld = build_nystrom(s, m, alpha, rho, gamma, threads).log_det()
    return ld.real


def resolvent_y1(s, alpha, rho, m=None, tol=1e-10, threads=None, system=None):
    """Y_1 = int_0^s F(x) h(x)^T dx where (I - K_s) F = f on (0, s).

    Without ``m`` the node count is the one at which the gap probability
    converged to ``tol``.  Returns a complex 3 x 3 array.
    """
    if system is None:
        if m is None:
            m = gap_log_prob(s, alpha, rho, tol=tol, threads=threads).m_used
        system = build_nystrom(s, m, alpha, rho, 1.0, threads)
    sw = np.sqrt(system.weights)
    A = np.eye(system.m) - system.khat
    try:
        Fhat = solve_linear(A.astype(complex), sw[:, None] * system.f)
    except SingularMatrixError as exc:
        raise GapError("I - K_s is singular at s = %g" % s) from exc
    return (sw[:, None] * Fhat).T @ system.h


@dataclass(frozen=True)
class Derivative:
    value: float
    error: float


def _richardson_diff(g, x0, h):
    d1 = (g(x0 + h) - g(x0 - h)) / (2 * h)
    d2 = (g(x0 + h / 2) - g(x0 - h / 2)) / h
    value = (4 * d2 - d1) / 3
    return Derivative(value, abs(value - d2))


def dF(s, alpha, rho, which="s", h=1e-3, m=None, gamma=1.0, tol=1e-10, threads=None):
    """Central difference of F in s or rho with one Richardson step.

    The node count is fixed over all evaluations (by default the converged
    count at the centre point).
    """
    if which not in ("s", "rho"):
        raise ValueError("which must be 's' or 'rho'")
    if m is None:
        m = gap_log_prob(s, alpha, rho, tol=tol, gamma=gamma, threads=threads).m_used
    if which == "s":
        if h >= s:
            raise ValueError("step too large for s = %g" % s)
        g = lambda v: log_det_fixed(v, alpha, rho, m, gamma, threads)
        return _richardson_diff(g, s, h)
    g = lambda v: log_det_fixed(s, alpha, v, m, gamma, threads)
    return _richardson_diff(g, rho, h)


def dF_drho_from_y1(s, alpha, rho, **kw):
    """d F / d rho through the resolvent: -(Y_1)_31, real part."""
    y = resolvent_y1(s, alpha, rho, **kw)
    return float(-y[2, 0].real)


def x1_31(s, alpha, rho, **kw):
    """(X_1)_31 = pi_3 + 2 rho / 3 + (Y_1)_31."""
    y = resolvent_y1(s, alpha, rho, **kw)
    return float((_k.pi3(alpha, rho) + 2 * rho / 3 + y[2, 0]).real)
