import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf, mpc

from zetalab.precision import Precision, PrecisionError
from zetalab.numeric import (DomainError, bernoulli_number, ei_complex,
                             euler_number, hermite_function, integrate,
                             smallest_eigenpair, symmetric_spectrum)

P40 = Precision(40)
P50 = Precision(50)


# ----------------------------------------------------------------------
# oracles
# ----------------------------------------------------------------------

def akiyama_tanigawa(n):
    """Independent Bernoulli oracle (B_1 = +1/2 convention; even n unaffected)."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def secant_series_euler(nmax):
    """|E_2n| from 1/cos as an exact power-series inverse (independent oracle)."""
    # cos series coefficients c_k = (-1)^k/(2k)!
    cos_c = [Fraction((-1) ** k, 1) / Fraction(_fact(2 * k)) for k in range(nmax + 1)]
    sec = [Fraction(1)]
    for k in range(1, nmax + 1):
        acc = Fraction(0)
        for j in range(1, k + 1):
            acc += cos_c[j] * sec[k - j]
        sec.append(-acc)
    return [sec[k] * _fact(2 * k) for k in range(nmax + 1)]


def _fact(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def ei_series(z, dps=60):
    """Power-series oracle gamma + log z + sum z^k/(k k!)."""
    with mp.workdps(dps):
        z = mpc(z)
        total = mp.euler + mp.log(z)
        term = mpc(1)
        for k in range(1, 500):
            term *= z / k
            total += term / k
            if abs(term) < mpf(10) ** (-dps - 5):
                break
        return total


# ----------------------------------------------------------------------
# hermite functions
# ----------------------------------------------------------------------

def test_hermite_ground_state_value():
    # solving -h'' + 4 pi^2 x^2 h = 2 pi h gives h0 = 2^(1/4) exp(-pi x^2)
    with mp.workdps(50):
        assert abs(hermite_function(0, 0, P40) - mpf(2) ** mpf("0.25")) < mpf("1e-39")
        x = mpf("0.7")
        expect = mpf(2) ** mpf("0.25") * mp.exp(-mp.pi * x * x)
        assert abs(hermite_function(0, x, P40) - expect) < mpf("1e-39")


def test_hermite_odd_parity_at_origin():
    assert hermite_function(1, 0, P40) == 0
    assert hermite_function(7, 0, P40) == 0


def test_hermite_eigenfunction_residual():
    # H h4 = 18 pi h4, residual via high-order central differences
    prec = Precision(60)
    with mp.workdps(80):
        h = mpf("1e-6")
        for x in (mpf("0.3"), mpf("1.1"), mpf("2.4")):
            vals = [hermite_function(4, x + i * h, prec) for i in range(-4, 5)]
            # 8th-order second derivative stencil
            coeffs = [mpf(c) / 5040 for c in
                      (-9, 128, -1008, 8064, -14350, 8064, -1008, 128, -9)]
            second = mp.fsum(c * v for c, v in zip(coeffs, vals)) / (h * h)
            lhs = -second + 4 * mp.pi ** 2 * x * x * vals[4]
            assert abs(lhs - 18 * mp.pi * vals[4]) < mpf("1e-28")


def test_hermite_orthonormality_by_quadrature():
    prec = Precision(40)
    with mp.workdps(55):
        for m, n in [(0, 0), (2, 2), (0, 2), (1, 3), (4, 4), (3, 5)]:
            val = integrate(lambda x: hermite_function(m, x, prec)
                            * hermite_function(n, x, prec), -10, 10, prec,
                            points=[0])
            target = 1 if m == n else 0
            assert abs(val - target) < mpf("1e-25")


def test_hermite_domain():
    with pytest.raises(DomainError):
        hermite_function(65, 0, P40)
    with pytest.raises(DomainError):
        hermite_function(-1, 0, P40)


# ----------------------------------------------------------------------
# exponential integral
# ----------------------------------------------------------------------

def test_ei_against_series_oracle():
    with mp.workdps(60):
        for z in (mpf(1), mp.log(2), mpc(2, 3), mpc(-1, "0.5")):
            assert abs(ei_complex(z, P50) - ei_series(z)) < mpf("1e-45")


def test_ei_known_values():
    with mp.workdps(60):
        assert abs(ei_complex(1, P50).real
                   - mpf("1.8951178163559367554665209343316342690170")) < mpf("1e-38")
        assert abs(ei_complex(mp.log(2), P50).real
                   - mpf("1.0451637801174927848445888891946131365226")) < mpf("1e-38")


def test_ei_branch_jump_is_two_pi():
    with mp.workdps(60):
        for x in (mpf(-2), mpf("-0.5")):
            up = ei_complex(x, P50, side=+1)
            dn = ei_complex(x, P50, side=-1)
            assert abs((up.imag - dn.imag) - 2 * mp.pi) < mpf("1e-45")
            pv = ei_complex(x, P50, side=0)
            assert pv.imag == 0
            assert abs(up.real - pv.real) < mpf("1e-45")


def test_ei_domain_errors():
    with pytest.raises(DomainError):
        ei_complex(0, P40)
    with pytest.raises(DomainError):
        ei_complex(-1, P40)  # on the cut without a side


# ----------------------------------------------------------------------
# bernoulli / euler numbers
# ----------------------------------------------------------------------

def test_bernoulli_small_and_oracle():
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(4) == Fraction(-1, 30)
    for n in range(2, 42, 2):
        assert bernoulli_number(n) == akiyama_tanigawa(n)


def test_bernoulli_domain():
    for bad in (3, 0, -2, 202):
        with pytest.raises(DomainError):
            bernoulli_number(bad)


def test_euler_small_values():
    assert euler_number(2) == -1
    assert euler_number(4) == 5
    assert euler_number(6) == -61
    assert euler_number(8) == 1385


def test_euler_matches_secant_series():
    sec = secant_series_euler(10)
    for n in range(1, 11):
        assert abs(euler_number(2 * n)) == sec[n]
        assert euler_number(2 * n) == (-1) ** n * sec[n]


def test_euler_ratio_alternates():
    with mp.workdps(40):
        for k in range(1, 11):
            ratio = mpf(euler_number(2 * k)) / mp.factorial(2 * k)
            assert (ratio > 0) == (k % 2 == 0)


# ----------------------------------------------------------------------
# quadrature
# ----------------------------------------------------------------------

def test_integrate_polynomial():
    with mp.workdps(50):
        assert abs(integrate(lambda x: x, 0, 1, P40) - mpf("0.5")) < mpf("1e-35")


def test_integrate_endpoint_singularity():
    with mp.workdps(60):
        val = integrate(lambda x: (1 - x * x) ** mpf("-0.5"), -1, 1, P50)
        assert abs(val - mp.pi) < mpf("1e-40")


def test_integrate_gaussian_normalization():
    with mp.workdps(60):
        val = integrate(lambda x: mp.exp(-mp.pi * x * x), -25, 25, P50)
        assert abs(val - 1) < mpf("1e-40")


def test_integrate_with_breakpoint():
    with mp.workdps(50):
        val = integrate(lambda x: abs(x), -1, 2, P40, points=[0])
        assert abs(val - mpf("2.5")) < mpf("1e-30")


# ----------------------------------------------------------------------
# smallest eigenpair
# ----------------------------------------------------------------------

def test_eigen_identity():
    pair = smallest_eigenpair([[1, 0, 0], [0, 1, 0], [0, 0, 1]], P40)
    assert abs(pair.epsilon - 1) < mpf("1e-30")


def test_eigen_2x2_analytic():
    pair = smallest_eigenpair([[2, 1], [1, 2]], P40)
    with mp.workdps(50):
        assert abs(pair.epsilon - 1) < mpf("1e-35")
        # eigenvector accurate to the residual contract 10^-(digits/2+5)
        ratio = pair.coeffs[0] / pair.coeffs[1]
        assert abs(ratio + 1) < mpf("1e-22")
        assert abs(pair.second - 3) < mpf("1e-25")


def hilbert_min_eig_oracle(n, dps=60):
    """Characteristic-polynomial root oracle for the Hilbert matrix."""
    with mp.workdps(dps):
        # exact rational characteristic polynomial by Leverrier-Faddeev
        a = [[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)]
        coeffs = [Fraction(1)]
        mat = [row[:] for row in a]
        for k in range(1, n + 1):
            tr = sum(mat[i][i] for i in range(n))
            ck = -tr / k
            coeffs.append(ck)
            if k == n:
                break
            for i in range(n):
                mat[i][i] += ck
            mat = [[sum(a[i][l] * mat[l][j] for l in range(n)) for j in range(n)]
                   for i in range(n)]
        poly = [mpf(c.numerator) / c.denominator for c in coeffs]
        roots = mp.polyroots(poly, maxsteps=200, extraprec=120)
        return min(r.real for r in roots)


def test_eigen_hilbert4_vs_charpoly_oracle():
    n = 4
    with mp.workdps(60):
        h = [[mpf(1) / (i + j + 1) for j in range(n)] for i in range(n)]
        pair = smallest_eigenpair(h, P50)
        oracle = hilbert_min_eig_oracle(n)
        assert abs(pair.epsilon - oracle) < mpf("1e-40")
        assert mp.nstr(pair.epsilon, 5) == "9.6702e-5"


def test_eigen_residual_contract_random():
    rng = random.Random(12345)
    p = Precision(30)
    with mp.workdps(45):
        for trial in range(100):
            n = rng.randint(2, 30)
            m = [[mpf(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1):
                    v = mpf(rng.uniform(-1, 1))
                    m[i][j] = m[j][i] = v
            pair = smallest_eigenpair(m, p)
            # residual contract: ||Mc - eps c|| <= 10^-(digits/2)
            mv = [mp.fsum(m[i][j] * pair.coeffs[j] for j in range(n))
                  for i in range(n)]
            res = mp.sqrt(mp.fsum((a - pair.epsilon * b) ** 2
                                  for a, b in zip(mv, pair.coeffs)))
            assert res <= mpf(10) ** (-15)
            assert pair.second >= pair.epsilon - mpf("1e-20")


def test_eigen_cross_check_full_spectrum():
    rng = random.Random(7)
    with mp.workdps(45):
        for _ in range(5):
            n = rng.randint(2, 10)
            m = [[mpf(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1):
                    v = mpf(rng.uniform(-2, 2))
                    m[i][j] = m[j][i] = v
            pair = smallest_eigenpair(m, Precision(30))
            spectrum = symmetric_spectrum(m, Precision(30))
            assert abs(pair.epsilon - min(spectrum)) < mpf("1e-20")


def test_eigen_determinism():
    m = [[2, 1, 0], [1, 2, 1], [0, 1, 2]]
    a = smallest_eigenpair(m, P40)
    b = smallest_eigenpair(m, P40)
    assert a.epsilon == b.epsilon
    assert all(x == y for x, y in zip(a.coeffs, b.coeffs))


def test_precision_floor():
    with pytest.raises(PrecisionError):
        Precision(29)
