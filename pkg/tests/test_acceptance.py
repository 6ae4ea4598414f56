"""Acceptance suite: one group of tests per criterion, each line reported as
PASS or FAIL (printed live with -s and summarised at the end of the run).

Criteria that cannot hold as stated are implemented at their stated
tolerance and marked xfail(strict=True); they are listed as "FAIL (known)".
"""
import numpy as np
import pytest

from conftest import ACCEPTANCE_LOG
from pearcey import asymptotics as A
from pearcey import fredholm as fh
from pearcey import kernel as K
from pearcey import parametrix as P
from pearcey import surface as S


def record(crit, label, ok, detail="", expected_fail=False):
    ok = bool(ok)
    ACCEPTANCE_LOG.append((crit, label, ok, detail, expected_fail))
    print("criterion %d %s: %s %s" % (crit, label, "PASS" if ok else "FAIL", detail))
    return ok


def known(reason):
    return pytest.mark.xfail(strict=True, reason=reason)


# ------------------------------------------------------------------ 1 algebraic

def test_c1_vieta():
    rng = np.random.default_rng(1)
    r = 10 ** rng.uniform(-3, 3, 10_000)
    z = r * np.exp(1j * rng.uniform(-np.pi, np.pi, 10_000))
    z = z[np.abs(z.imag) > 1e-9 * r]
    w1, w2, w3 = S.w_triple(z)
    sc = np.maximum(1, np.abs(z))
    worst = max(np.max(np.abs(w1 + w2 + w3 - 1.5) / sc),
                np.max(np.abs(w1 * w2 + w1 * w3 + w2 * w3) / sc),
                np.max(np.abs(w1 * w2 * w3 + z / 2) / sc))
    assert record(1, "vieta (10^4 points)", worst <= 1e-11, "%.2e" % worst)


def test_c1_gluing():
    worst = 0.0
    for x in (-5.0, -1.0, -0.2):
        p, m = S.w_boundary(x, +1), S.w_boundary(x, -1)
        worst = max(worst, abs(p[1] - m[2]), abs(m[1] - p[2]))
    for x in (1.3, 4.0, 20.0):
        p, m = S.w_boundary(x, +1), S.w_boundary(x, -1)
        worst = max(worst, abs(p[1] - m[0]), abs(m[1] - p[0]))
    assert record(1, "sheet gluing", worst <= 1e-8, "%.2e" % worst)


def test_c1_pi3_identity():
    rng = np.random.default_rng(5)
    worst = max(abs(K.lemma_identity_residual(a, r))
                for a, r in zip(rng.uniform(-0.9, 6, 20), rng.uniform(-3, 3, 20)))
    assert record(1, "pi_3 scalar identity (20 random)", worst <= 1e-14, "%.2e" % worst)


# ------------------------------------------------------------------ 2 expansion orders

SURFACE_SERIES = [
    ("inf", "eta", 0, 10.0, 100.0), ("0", "eta", 0, 1e-3, 1e-2),
    ("inf", "w", 2, 1e3, 1e4), ("inf", "w", 3, 1e3, 1e4),
    ("1", "w", 1, 1e-3, 1e-2), ("1", "w", 2, 1e-3, 1e-2),
    ("0", "lambda", 2, 1e-3, 1e-2), ("0", "lambda", 3, 1e-3, 1e-2),
]


@pytest.mark.parametrize("loc,obj,sheet,r1,r2", SURFACE_SERIES)
def test_c2_surface_series(loc, obj, sheet, r1, r2):
    gaps = []
    for half in (1, -1):
        got, printed = S.observed_order(loc, obj, sheet, r1, r2, half=half, rho=1.0)
        gaps.append(abs(got - printed))
    label = "%s%s at %s" % (obj, sheet or "", loc)
    assert record(2, label, max(gaps) <= 0.1, "max |observed - printed| %.3f" % max(gaps))


@pytest.mark.parametrize("sheet", [2, 3])
def test_c2_lambda_at_infinity(sheet):
    # the printed remainder is an upper bound; the observed decay is faster
    got, printed = S.observed_order("inf", "lambda", sheet, 1e3, 1e4, rho=1.0)
    assert record(2, "lambda%d at inf (bound)" % sheet, got <= printed + 0.1,
                  "observed %.3f, printed %.3f" % (got, printed))


@known("the w_2, w_3 expansions at 0 omit a z^2 term; observed order 2.0")
@pytest.mark.parametrize("sheet", [2, 3])
def test_c2_w_at_zero_as_printed(sheet):
    got, printed = S.observed_order("0", "w", sheet, 1e-3, 1e-2)
    assert record(2, "w%d at 0 as printed" % sheet, abs(got - printed) <= 0.1,
                  "observed %.3f, printed %.3f" % (got, printed), expected_fail=True)


@known("the printed sign of the (z-1) coefficient c~2 is reversed; observed order 1.0")
@pytest.mark.parametrize("sheet", [1, 2])
def test_c2_lambda_at_one_as_printed(sheet):
    got, printed = S.observed_order("1", "lambda", sheet, 1e-3, 1e-2, rho=1.0)
    assert record(2, "lambda%d at 1 as printed" % sheet, abs(got - printed) <= 0.1,
                  "observed %.3f, printed %.3f" % (got, printed), expected_fail=True)


@known("the printed z^(1/4) row is the alpha = 0 value; observed order 0.25")
def test_c2_n_at_zero_as_printed():
    got, claimed = P.series_n_order("0", 2.5, 1e-4, 1e-6)
    assert record(2, "N_alpha at 0 as printed (alpha=2.5)", abs(got - claimed) <= 0.1,
                  "observed %.3f, printed %.3f" % (got, claimed), expected_fail=True)


@known("the printed (z-1)^(3/4) row has the wrong alpha-coefficient and sign")
def test_c2_n_at_one_as_printed():
    got, claimed = P.series_n_order("1", 2.5, 1e-2, 1e-3)
    assert record(2, "N_alpha at 1 as printed (alpha=2.5)", abs(got - claimed) <= 0.1,
                  "observed %.3f, printed %.3f" % (got, claimed), expected_fail=True)


def test_c2_bessel_at_infinity():
    errs = []
    for R in (1e3, 1e4):
        z = R * np.exp(0.5j)
        M = P.bessel_parametrix(z, 1.3).M
        errs.append(np.abs(M @ np.linalg.inv(P.bessel_large_z(z, 1.3)) - np.eye(2)).max())
    got = np.log(errs[1] / errs[0]) / np.log(10)
    assert record(2, "Bessel parametrix at inf", abs(got + 1) <= 0.1, "observed %.3f, printed -1" % got)


# ------------------------------------------------------------------ 3 RH conditions

def test_c3_bessel_jumps():
    worst = max(P.bessel_jump_residual(ray, r, a)
                for ray in (1, 2, 3) for r in (0.5, 2.0, 6.0) for a in (0.0, 1.3, 2.5))
    assert record(3, "Bessel jumps", worst <= 1e-8, "%.2e" % worst)


def test_c3_global_jumps():
    worst = max(P.n_alpha_jump_residual(x, a) for x in (-5.0, -0.4, 1.3, 4.0) for a in (0.0, 2.5))
    assert record(3, "N_alpha jumps", worst <= 1e-8, "%.2e" % worst)


@pytest.mark.parametrize("which", ["0", "1"])
def test_c3_local_jumps(which):
    names = ("sigma2", "sigma3", "sigma4") if which == "0" else ("sigma1", "sigma0", "sigma5")
    worst = max(P.local_jump_residual(which, nm, r, 8.0, a, rho)
                for nm in names for r in (0.05, 0.1, 0.2) for a, rho in ((0.0, 0.0), (2.5, 1.0)))
    assert record(3, "P%s jumps" % which, worst <= 1e-8, "%.2e" % worst)


def test_c3_prefactors_analytic():
    worst = max([P.prefactor_jump_residual("0", x, 8.0, 2.5, 1.0) for x in (-0.05, -0.1, -0.2)]
                + [P.prefactor_jump_residual("1", x, 8.0, 2.5, 1.0) for x in (1.05, 1.1, 1.2)])
    assert record(3, "E and E~ analytic", worst <= 1e-8, "%.2e" % worst)


@known("det of the Bessel parametrix is -1 (Wronskian -1/z times a det -1 factor)")
def test_c3_bessel_determinant():
    worst = max(abs(np.linalg.det(P.bessel_parametrix(z, a).M) - 1)
                for z in (0.3 + 0.1j, -2 + 1j, -2 - 1j, 5j, 4.0) for a in (0.0, 1.7))
    assert record(3, "det Phi^Bes = 1", worst <= 1e-9, "max |det - 1| %.3f" % worst,
                  expected_fail=True)


# ------------------------------------------------------------------ 4 matching and scaling

@pytest.mark.parametrize("which", ["0", "1"])
def test_c4_matching_slope(which):
    a = P.matching_norm(which, 1e2, 2.5, 1.0)
    b = P.matching_norm(which, 1e4, 2.5, 1.0)
    slope = np.log(b / a) / np.log(100)
    assert record(4, "matching on disc %s" % which, abs(slope + 2 / 3) <= 0.05, "slope %.3f" % slope)


def test_c4_lens_jump_decay():
    ok, details = True, []
    ss = np.array([20.0, 40.0, 80.0, 160.0])
    for name in ("sigma1", "sigma2", "sigma4", "sigma5"):
        for rho in (0.0, 1.0):
            d = np.array([P.js_deviation(name, 0.3, s, 2.0, rho) for s in ss])
            sl = np.diff(np.log(d)) / np.diff(ss ** (2 / 3))
            ok &= bool(np.all(sl < 0) and np.ptp(sl) <= 0.1 * abs(sl.mean()))
            details.append("%.3f" % sl.mean())
    assert record(4, "J_S decay in s^(2/3)", ok, "rates " + " ".join(details))


@known("the printed residue carries 1/|c_1|; the residue has 1/c_1 and c_1 < 0")
def test_c4_residue_closed_form():
    q = P.res0_j1_quadrature(8.0, 2.5, 1.0)
    dev = np.abs(q - P.res0_j1_closed_form(8.0, 2.5, 1.0)).max()
    assert record(4, "Res_0 J_1 closed form", dev <= 1e-8, "%.2e" % dev, expected_fail=True)


def test_c4_residue_with_signed_c1():
    q = P.res0_j1_quadrature(8.0, 2.5, 1.0)
    dev = np.abs(q - P.res0_j1_closed_form(8.0, 2.5, 1.0, corrected=True)).max()
    assert record(4, "Res_0 J_1 with c_1 in place of |c_1|", dev <= 1e-8, "%.2e" % dev)


@pytest.mark.parametrize("method", ["cauchy", "difference"])
def test_c4_e_tilde_at_one(method):
    worst = 0.0
    for s, a, r in ((8.0, 2.5, 1.0), (20.0, 2.0, 0.0)):
        E, Ep = P.e1_at_1_numeric(s, a, r, method=method)
        worst = max(worst, np.abs(E - P.e1_at_1_closed_form(s, a, r)).max(),
                    np.abs(Ep - P.e1_prime_at_1_closed_form(s, a, r)).max())
    assert record(4, "E~(1), E~'(1) (%s)" % method, worst <= 1e-6, "%.2e" % worst)


# ------------------------------------------------------------------ 5 kernel triangle

@pytest.mark.parametrize("alpha", [2, 3])
@pytest.mark.parametrize("rho", [0.0, 0.5, 1.0])
def test_c5_kernel_triangle(alpha, rho):
    worst = 0.0
    for x in (0.5, 1.5, 2.5, 3.5):
        for y in (1.0, 2.0, 3.0, 4.0):
            a = K.kernel_psi(x, y, alpha, rho)
            b = K.kernel_double(x, y, alpha, rho)
            c = K.kernel_pq(x, y, alpha, rho, "t^(-alpha)")
            sc = max(abs(a), abs(b), abs(c))
            worst = max(worst, abs(a - b) / sc, abs(a - c) / sc, abs(b - c) / sc)
    assert record(5, "triangle alpha=%d rho=%.1f" % (alpha, rho), worst <= 1e-7, "%.2e" % worst)


def test_c5_q_convention():
    passes = {}
    for conv in K.Q_CONVENTIONS:
        worst = 0.0
        for x, y in ((0.5, 2.0), (1.5, 3.0), (3.5, 1.0)):
            ref = K.kernel_double(x, y, 3, 0.5)
            worst = max(worst, abs(K.kernel_pq(x, y, 3, 0.5, conv) - ref) / abs(ref))
        passes[conv] = worst <= 1e-7
    ok = sum(passes.values()) == 1 and passes["t^(-alpha)"]
    assert record(5, "Q convention (alpha=3)", ok,
                  "passing: %s" % ", ".join(k for k, v in passes.items() if v))


# ------------------------------------------------------------------ 6 derivative identities

def test_c6_rho_derivative_vs_resolvent():
    fd = fh.dF(5.0, 2.0, 0.5, which="rho").value
    y = fh.resolvent_y1(5.0, 2.0, 0.5)[2, 0].real
    assert record(6, "dF/drho + (Y_1)_31 at (5,2,0.5)", abs(fd + y) <= 1e-5, "%.2e" % abs(fd + y))


@pytest.mark.parametrize("rho", [0.0, 0.5])
def test_c6_s_derivative_at_20(rho):
    fd = fh.dF(20.0, 2.0, rho, which="s").value
    dev = abs(fd - A.dFds_expansion(20.0, 2.0, rho))
    assert record(6, "dF/ds at s=20 rho=%.1f" % rho, dev <= 0.05, "%.4f" % dev)


@known("the O(s^(-1/3)) remainder of dF/drho is about 1.05 s^(-1/3) = 0.38 at s = 20")
@pytest.mark.parametrize("rho", [0.0, 0.5])
def test_c6_rho_derivative_at_20(rho):
    fd = fh.dF(20.0, 2.0, rho, which="rho").value
    dev = abs(fd - A.dFdrho_expansion(20.0, 2.0, rho))
    assert record(6, "dF/drho at s=20 rho=%.1f" % rho, dev <= 0.2, "%.4f" % dev,
                  expected_fail=True)


# ------------------------------------------------------------------ 7 large-gap reproduction

S7 = [8.0, 10.0, 12.5, 16.0, 20.0, 25.0]


@pytest.fixture(scope="module")
def gap_data():
    out = {}
    for rho in (0.0, 0.5):
        out[rho] = []
        for s in S7:
            g = fh.gap_log_prob(s, 2.0, rho)
            out[rho].append((s, g.F, g.est_error))
    return out


def test_c7_fit_rms(gap_data):
    r = A.fit_constant(gap_data[0.0], 2.0, 0.0)
    ok = r.rms <= 2e-2
    print("C_hat = %.6f +- %.6f (measurement), a = %.4f" % (r.C_hat, r.C_err, r.a))
    assert record(7, "fit rms (alpha=2, rho=0)", ok, "rms %.4f, C_hat %.4f" % (r.rms, r.C_hat))


def test_c7_rho_independence(gap_data):
    r0 = A.fit_constant(gap_data[0.0], 2.0, 0.0)
    r5 = A.fit_constant(gap_data[0.5], 2.0, 0.5)
    sigma = np.hypot(r0.C_err, r5.C_err)
    diff = abs(r0.C_hat - r5.C_hat)
    assert record(7, "C_hat(rho=0.5) vs C_hat(rho=0)", diff <= 3 * sigma,
                  "diff %.4f, 3 sigma %.4f" % (diff, 3 * sigma))


def test_c7_fcet(gap_data):
    e = A.fcet_exponent(gap_data[0.0], 2.0, 0.0)
    assert record(7, "fcet exponent", abs(e - 4 / 3) <= 0.05, "%.4f" % e)


@known("the log coefficient is -1/18 for every alpha, and on s in [8, 25] ln s and "
       "s^(-1/3) are nearly collinear; the freed coefficient comes out positive")
def test_c7_free_log(gap_data):
    r = A.fit_constant(gap_data[0.0], 2.0, 0.0, free_log=True)
    target = -49 / 72
    ok = r.log_coeff < 0 and abs(r.log_coeff - target) <= 0.5 * abs(target)
    assert record(7, "freed log coefficient", ok, "%.4f +- %.4f" % (r.log_coeff, r.log_err),
                  expected_fail=True)


# ------------------------------------------------------------------ 8 degenerate limits

def test_c8_empty_interval():
    F = fh.gap_log_prob(1e-8, 2.0, 0.0).F
    assert record(8, "F(s -> 0) = 0", abs(F) <= 1e-10, "%.2e" % abs(F))


def test_c8_trace_bound():
    from scipy.integrate import quad
    tk = quad(lambda x: K.kernel_diag(x, 2.0, 0.0), 0, 0.1, epsabs=1e-15, epsrel=1e-12)[0]
    F = fh.gap_log_prob(0.1, 2.0, 0.0).F
    assert record(8, "trace bound at s = 0.1", abs(F + tk) <= tk ** 2,
                  "|F + tr| %.2e, tr^2 %.2e" % (abs(F + tk), tk ** 2))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
