import pytest
from mpmath import mp, mpf, mpc

from zetalab.precision import Precision
from zetalab.numeric import DomainError
from zetalab.xi import (XiEvaluator, e_map, get_xi_evaluator, hermite_combo_h,
                        hermite_combo_tail, k_theta, reference_zeros,
                        theta_kernel_nmax, xi_eval, zero_count_estimate)
from zetalab.numeric import hermite_function, integrate

P40 = Precision(40)
P50 = Precision(50)


def xi_zeta_oracle(t, dps=80):
    """Independent oracle: Xi(t) = xi(1/2 + it) straight from zeta."""
    with mp.workdps(dps):
        s = mpc(mpf(1) / 2, 0) + mpc(0, 1) * mpc(t)
        return (s * (s - 1) / 2) * mp.pi ** (-s / 2) * mp.gamma(s / 2) * mp.zeta(s)


# ----------------------------------------------------------------------
# theta kernel
# ----------------------------------------------------------------------

def test_kernel_poisson_symmetry_grid():
    # raw series on both sides of 1; the identity is the Poisson formula
    with mp.workdps(55):
        for i in range(50):
            u = mp.exp(mp.log(5) * i / 49)  # log-uniform in [1, 5]
            lhs = k_theta(u, P40, fold=False)
            rhs = k_theta(1 / u, P40, fold=False)
            assert abs(lhs - rhs) < mpf("1e-30")


def test_kernel_small_at_3():
    # dominated by the n = 1 term sqrt(3) (pi/2) 9 (18 pi - 3) e^{-9 pi}
    val = k_theta(3, P40)
    assert abs(val) < mpf("1e-9")
    with mp.workdps(50):
        lead = mp.sqrt(3) * mp.pi / 2 * 9 * (18 * mp.pi - 3) * mp.exp(-9 * mp.pi)
        assert abs(val - lead) < mpf("1e-19")
        assert mp.nstr(val, 10) == "6.891035699e-10"


def test_kernel_terms_decrease():
    with mp.workdps(45):
        u = mpf(1)
        terms = []
        for n in range(1, 8):
            x = mp.pi * n * n * u * u
            terms.append(abs(n * n * u * u * (2 * x - 3) * mp.exp(-x)))
        for a, b in zip(terms[1:], terms[2:]):
            assert b < a


def test_kernel_truncation_certificate():
    n = theta_kernel_nmax(P40)
    with mp.workdps(60):
        # the next term beyond nmax is indeed below the certified bound
        m = n + 1
        term = 2 * mp.pi * m ** 4 * mp.exp(-mp.pi * m * m)
        assert term < mpf(10) ** (-(40 + 10))


# ----------------------------------------------------------------------
# the Gaussian bump and the summation map
# ----------------------------------------------------------------------

def test_h_vanishing_integral():
    # the tail beyond |x| = 8 is below e^{-2 pi 64}; split at the bump center
    val = integrate(lambda x: hermite_combo_h(x, P50), -8, 8, P50, points=[0])
    assert abs(val) < mpf("1e-40")


def test_h_l2_norm():
    with mp.workdps(60):
        val = integrate(lambda x: hermite_combo_h(x, P50) ** 2, -8, 8, P50,
                        points=[0])
        assert abs(mp.sqrt(val) - mp.sqrt(33) / mpf(2) ** (mpf(17) / 4)) < mpf("1e-39")


def test_h_is_hermite_combination():
    with mp.workdps(60):
        alpha = mp.sqrt(3) / (4 * mpf(2) ** mpf("0.75"))
        beta = 3 / mpf(2) ** (mpf(17) / 4)
        for x in (mpf(0), mpf("0.5"), mpf(2)):
            combo = (alpha * hermite_function(4, x, P50)
                     - beta * hermite_function(0, x, P50))
            assert abs(hermite_combo_h(x, P50) - combo) < mpf("1e-45")


def test_e_map_compact_support_vanishes():
    f = lambda x: mpf(1)
    assert e_map(f, mpf(3), P40, support_radius=2) == 0


def test_e_map_equals_kernel():
    with mp.workdps(55):
        for u in (mpf(1), mpf("1.5"), mpf("2.5")):
            val = e_map(lambda x: hermite_combo_h(x, P40), u, P40,
                        tail_bound=hermite_combo_tail)
            assert abs(val - k_theta(u, P40)) < mpf("1e-35")


def test_e_map_fourier_self_duality():
    # h is Fourier-invariant, so E(h)(x) = E(hhat)(x) = E(h)(1/x)
    with mp.workdps(55):
        x = mpf("1.3")
        a = e_map(lambda v: hermite_combo_h(v, P40), x, P40,
                  tail_bound=hermite_combo_tail)
        b = e_map(lambda v: hermite_combo_h(v, P40), 1 / x, P40,
                  tail_bound=hermite_combo_tail)
        assert abs(a - b) < mpf("1e-32")


def test_e_map_requires_tail_information():
    with pytest.raises(DomainError):
        e_map(lambda x: mp.exp(-x), mpf(1), P40)


# ----------------------------------------------------------------------
# Xi evaluation
# ----------------------------------------------------------------------

def test_xi_at_zero_six_digits():
    val = xi_eval(0, P50)
    assert abs(val - mpf("0.497121")) < mpf("5e-7")
    with mp.workdps(60):
        closed = -mp.zeta(mpf(1) / 2) * mp.gamma(mpf(5) / 4) / (2 * mp.pi ** mpf("0.25"))
        assert abs(val - closed) < mpf("1e-40")


def test_xi_matches_zeta_oracle_on_grid():
    ev = get_xi_evaluator(P50, tmax=20)
    with mp.workdps(70):
        for t in (mpf(2), mpf(10), mpf("14.5"), mpf(19)):
            assert abs(ev(t) - xi_zeta_oracle(t).real) < mpf("1e-40")


def test_xi_even_and_real():
    ev = get_xi_evaluator(P40, tmax=5)
    v1, v2 = ev(mpf("3.7")), ev(mpf("-3.7"))
    assert v1 == v2
    assert isinstance(v1, mpf)


def test_xi_complex_strip():
    with mp.workdps(60):
        z = mpc(1, "0.3")
        val = xi_eval(z, P40)
        oracle = xi_zeta_oracle(z)
        assert abs(val - oracle) < mpf("1e-30")
    with pytest.raises(DomainError):
        xi_eval(mpc(1, "0.6"), P40)


def test_xi_scheme_cross_validation():
    # tanh-sinh and Gauss-Legendre agree to 10^-(digits-10)
    p = Precision(40)
    gl = get_xi_evaluator(p, tmax=16)
    ts = XiEvaluator(p, tmax=16, scheme="tanh-sinh")
    with mp.workdps(60):
        for t in (mpf(0), mpf("14.2")):
            assert abs(gl(t) - ts(t)) < mpf(10) ** (-(40 - 10))


# ----------------------------------------------------------------------
# reference zeros
# ----------------------------------------------------------------------

def test_first_three_zeros_forty_digits(head_zeros):
    zl = reference_zeros(3, P50)
    with mp.workdps(60):
        for mine, ref in zip(zl, head_zeros.ordinates[:3]):
            assert abs(mine - ref) < mpf("1e-40")
    assert zl.source == "xi-reference"
    assert zl.ordinates == sorted(zl.ordinates)


def test_zero_counting_estimate():
    # the estimate is within 2 of the true count at moderate heights
    with mp.workdps(30):
        assert abs(zero_count_estimate(mpf(50)) - 10) <= 2
        assert abs(zero_count_estimate(mpf(100)) - 29) <= 2


def test_fifty_zeros_match_imported_table(ref_zeros_50, head_zeros):
    with mp.workdps(70):
        worst = max(abs(mpf(a) - mpf(b))
                    for a, b in zip(ref_zeros_50, head_zeros.ordinates[:50]))
        assert worst < mpf("1e-30")
