"""Named invariant checks grouped into suites for ``pearcey verify``.

Each check returns a measured residual and the threshold it must stay
below.  Checks of lower bounds (a failure that must be visible) are stored
with ``kind="min"``.
"""
from dataclasses import dataclass

import numpy as np

from . import fredholm as fh
from . import kernel as K
from . import parametrix as P
from . import surface as S
from .asymptotics import Theorem1Expansion, dFds_coefficients, dFds_expansion


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    residual: float
    threshold: float
    kind: str = "max"

    @property
    def passed(self):
        if not np.isfinite(self.residual):
            return False
        if self.kind == "min":
            return self.residual > self.threshold
        return self.residual <= self.threshold

    def row(self):
        return {"suite": self.suite, "check": self.name, "residual": self.residual,
                "threshold": self.threshold, "passed": self.passed}


def _points(n, seed=0):
    rng = np.random.default_rng(seed)
    r = 10 ** rng.uniform(-3, 3, n)
    z = r * np.exp(1j * rng.uniform(-np.pi, np.pi, n))
    return z[np.abs(z.imag) > 1e-9 * r]


def _order_gap(got, printed):
    return abs(got - printed)


def suite_w():
    z = _points(10_000)
    w1, w2, w3 = S.w_triple(z)
    sc = np.maximum(1, np.abs(z))
    vieta = max(np.max(np.abs(w1 + w2 + w3 - 1.5) / sc),
                np.max(np.abs(w1 * w2 + w1 * w3 + w2 * w3) / sc),
                np.max(np.abs(w1 * w2 * w3 + z / 2) / sc))
    p, m = S.w_boundary(-1.0, +1), S.w_boundary(-1.0, -1)
    g0 = max(abs(p[1] - m[2]), abs(m[1] - p[2]))
    p, m = S.w_boundary(4.0, +1), S.w_boundary(4.0, -1)
    g1 = max(abs(p[1] - m[0]), abs(m[1] - p[0]))
    out = [CheckResult("w", "vieta", float(vieta), 1e-11),
           CheckResult("w", "gluing_negative_axis", float(g0), 1e-8),
           CheckResult("w", "gluing_beyond_one", float(g1), 1e-8)]
    for loc, sheet, r1, r2 in (("inf", 2, 1e3, 1e4), ("1", 1, 1e-3, 1e-2)):
        got, printed = S.observed_order(loc, "w", sheet, r1, r2)
        out.append(CheckResult("w", "order_w%d_at_%s" % (sheet, loc), _order_gap(got, printed), 0.1))
    got, printed = S.observed_order("0", "w", 2, 1e-3, 1e-2, corrected=True)
    out.append(CheckResult("w", "order_w2_at_0_with_square_term", _order_gap(got, printed), 0.1))
    return out


def suite_lambda():
    out = []
    for loc, sheet, r1, r2, corr in (("0", 2, 1e-3, 1e-2, False), ("0", 3, 1e-3, 1e-2, False),
                                     ("1", 1, 1e-3, 1e-2, True), ("1", 2, 1e-3, 1e-2, True)):
        got, printed = S.observed_order(loc, "lambda", sheet, r1, r2, rho=1.0, corrected=corr)
        out.append(CheckResult("lambda", "order_lambda%d_at_%s" % (sheet, loc),
                               _order_gap(got, printed), 0.1))
    got, printed = S.observed_order("inf", "lambda", 2, 1e3, 1e4, rho=1.0)
    out.append(CheckResult("lambda", "bound_lambda2_at_inf", max(0.0, got - printed), 0.1))
    th = abs(sum(S.theta(k, 3 + 4j, 0.7) for k in (1, 2, 3)))
    out.append(CheckResult("lambda", "theta_sum", float(th), 1e-13))
    return out


def suite_kernel():
    out = []
    a = K.kernel_psi(0.7, 1.3, 2, 0.0)
    b = K.kernel_double(0.7, 1.3, 2, 0.0)
    out.append(CheckResult("kernel", "psi_vs_double", abs(a - b) / abs(b), 1e-8))
    ref = K.kernel_double(1.0, 2.0, 3, 0.5)
    for conv in K.Q_CONVENTIONS:
        dev = abs(K.kernel_pq(1.0, 2.0, 3, 0.5, conv) - ref) / abs(ref)
        ok = conv == "t^(-alpha)"
        out.append(CheckResult("kernel", "pq_%s" % conv, dev, 1e-7 if ok else 1e-3,
                               "max" if ok else "min"))
    out.append(CheckResult("kernel", "q_ode", K.q_ode_residual(1.5, 3, 0.5, "t^(-alpha)"), 1e-8))
    out.append(CheckResult("kernel", "p_ode", K.p_ode_residual(1.5, 3, 0.5), 1e-9))
    lem = max(abs(K.lemma_identity_residual(a_, r_)) for a_ in (0.5, 2, 3) for r_ in (-1, 0.3, 2))
    out.append(CheckResult("kernel", "pi3_identity", float(lem), 1e-14))
    return out


def suite_bessel():
    out = []
    for ray in (1, 2, 3):
        res = max(P.bessel_jump_residual(ray, r, 1.3) for r in (0.5, 2.0, 6.0))
        out.append(CheckResult("bessel", "jump_ray%d" % ray, res, 1e-8))
    det = max(abs(np.linalg.det(P.bessel_parametrix(z, 1.7).M) + 1) for z in (0.3 + 0.1j, -2 + 1j, 5j))
    out.append(CheckResult("bessel", "det_minus_one", float(det), 1e-12))
    z = 1600 * np.exp(0.5j)
    M = P.bessel_parametrix(z, 1.3).M
    err = np.abs(M @ np.linalg.inv(P.bessel_large_z(z, 1.3)) - np.eye(2)).max() * abs(z)
    out.append(CheckResult("bessel", "large_z_scaled", float(err), 5.0))
    return out


def suite_parametrix():
    s, a, r = 8.0, 2.5, 1.0
    out = []
    res = max(P.n_alpha_jump_residual(x, a) for x in (-2.0, 4.0))
    out.append(CheckResult("parametrix", "global_jumps", res, 1e-8))
    for which in ("0", "1"):
        got, claimed = P.series_n_order(which, a, *((1e-4, 1e-6) if which == "0" else (1e-2, 1e-3)),
                                        corrected=True)
        out.append(CheckResult("parametrix", "order_n_at_%s" % which, abs(got - claimed), 0.1))
    for which, names in (("0", ("sigma2", "sigma3", "sigma4")), ("1", ("sigma1", "sigma0", "sigma5"))):
        res = max(P.local_jump_residual(which, nm, 0.1, s, a, r) for nm in names)
        out.append(CheckResult("parametrix", "local_jumps_%s" % which, res, 1e-8))
    res = max(P.prefactor_jump_residual("0", -0.1, s, a, r), P.prefactor_jump_residual("1", 1.1, s, a, r))
    out.append(CheckResult("parametrix", "prefactor_analytic", res, 1e-8))
    q = P.res0_j1_quadrature(s, a, r)
    out.append(CheckResult("parametrix", "residue_at_zero",
                           float(np.abs(q - P.res0_j1_closed_form(s, a, r, corrected=True)).max()), 1e-8))
    E, Ep = P.e1_at_1_numeric(s, a, r)
    dev = max(np.abs(E - P.e1_at_1_closed_form(s, a, r)).max(),
              np.abs(Ep - P.e1_prime_at_1_closed_form(s, a, r)).max())
    out.append(CheckResult("parametrix", "e_tilde_at_one", float(dev), 1e-6))
    corr = P.correction_matrices(s, a, r)
    res = max(P.r1_jump_residual(w, 1.0, s, a, r, corr) for w in ("0", "1"))
    out.append(CheckResult("parametrix", "r1_jumps", res, 1e-8))
    m = [P.matching_norm("0", v, a, r) for v in (1e2, 1e4)]
    out.append(CheckResult("parametrix", "matching_slope_0",
                           abs(np.log(m[1] / m[0]) / np.log(100) + 2 / 3), 0.05))
    return out


def suite_identities():
    out = []
    worst = 0.0
    for a, r in ((0.0, 0.0), (2.0, 0.5), (1.3, -2.0)):
        x = Theorem1Expansion(a, r).ds_coefficients()
        y = dFds_coefficients(a, r)
        worst = max(worst, max(abs(x[k] - y[k]) for k in x))
    out.append(CheckResult("identities", "expansion_derivative_termwise", worst, 1e-14))
    dev = max(abs(P.dFds_from_rh(v, 2.0, 0.5) - dFds_expansion(v, 2.0, 0.5)) for v in (8.0, 20.0))
    out.append(CheckResult("identities", "rh_assembly_vs_expansion", float(dev), 1e-12))
    t1 = abs(P.term1_numeric(8.0, 2.5, 1.0) - P.term1_closed_form(8.0, 2.5, 1.0, corrected=True))
    out.append(CheckResult("identities", "term1_numeric_vs_closed", t1, 1e-8))
    fd = fh.dF(5.0, 2.0, 0.5, which="rho").value
    y1 = fh.resolvent_y1(5.0, 2.0, 0.5)[2, 0].real
    out.append(CheckResult("identities", "drho_F_plus_Y1_31", abs(fd + y1), 1e-5))
    return out


SUITES = {"w": suite_w, "lambda": suite_lambda, "kernel": suite_kernel, "bessel": suite_bessel,
          "parametrix": suite_parametrix, "identities": suite_identities}


def run_suite(name):
    if name == "all":
        return [c for key in SUITES for c in SUITES[key]()]
    if name not in SUITES:
        raise KeyError("unknown suite %r; choose from %s" % (name, ", ".join(list(SUITES) + ["all"])))
    return SUITES[name]()
