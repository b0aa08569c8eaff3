import pytest
from mpmath import mp, mpf

from zetalab.precision import Precision
from zetalab.numeric import DomainError
from zetalab.explicit import MultiplicativeTestFunction, w_arch, w_prime
from zetalab.weilform import (LogInterval, TrigTestFunction, assemble_matrix,
                              autocorrelation_eval, basis_correlation,
                              constrained_minimal_mode, matrix_cache_key,
                              minimal_mode, odd_block_mode, read_matrix_cache,
                              write_matrix_cache)

P40 = Precision(40)
P50 = Precision(50)


def _interval(lam2, prec=P40):
    return LogInterval.from_pmax(lam2, prec)


def _basis_fn(interval, k, N, digits=40):
    coeffs = [mpf(0)] * (N + 1)
    coeffs[k] = mpf(1)
    return TrigTestFunction(interval=interval, coeffs=coeffs, digits=digits)


# ----------------------------------------------------------------------
# correlations
# ----------------------------------------------------------------------

def test_correlation_constant_mode_is_tent():
    iv = _interval(5)
    f = _basis_fn(iv, 0, 4)
    with mp.workdps(50):
        L = iv.length
        for t in (mpf(0), mpf("0.4"), L / 2, -L / 3):
            expect = (L - abs(t)) / L
            assert abs(autocorrelation_eval(f, f, t) - expect) < mpf("1e-30")


def test_correlation_disjoint_supports():
    iv = _interval(5)
    f = _basis_fn(iv, 2, 4)
    with mp.workdps(50):
        assert autocorrelation_eval(f, f, iv.length + mpf("0.1")) == 0


def test_correlation_transpose_symmetry():
    iv = _interval(5)
    f = _basis_fn(iv, 1, 4)
    g = _basis_fn(iv, 3, 4)
    with mp.workdps(50):
        t = mpf("0.3")
        assert abs(autocorrelation_eval(f, g, t)
                   - autocorrelation_eval(g, f, -t)) < mpf("1e-30")


def test_correlation_closed_form_vs_quadrature():
    iv = _interval(5, P50)
    with mp.workdps(60):
        L = iv.length
        cases = [(0, 0, "0.3"), (0, 3, "0.5"), (2, 2, "0.7"), (1, 4, "0.2"),
                 (3, 5, "1.1")]
        for (j, k, t) in cases:
            t = mpf(t)
            f = _basis_fn(iv, j, 6, 50)
            g = _basis_fn(iv, k, 6, 50)
            num = mp.quad(lambda s: f(s) * g(s + t), [-L / 2, L / 2 - t])
            assert abs(basis_correlation(j, k, t, iv) - num) < mpf("1e-40")


def test_correlation_translation_invariance():
    # correlations depend only on the difference variable: translating both
    # arguments inside a larger window leaves the value unchanged
    iv = _interval(5, P50)
    with mp.workdps(60):
        L = iv.length
        c = mpf("0.17")
        for (j, k) in [(0, 2), (1, 1), (2, 4)]:
            f = _basis_fn(iv, j, 5, 50)
            g = _basis_fn(iv, k, 5, 50)
            t = mpf("0.4")
            direct = mp.quad(lambda s: f(s) * g(s + t), [-L / 2, L / 2 - t])
            shifted = mp.quad(lambda s: f(s - c) * g(s - c + t),
                              [-L / 2 + c, L / 2 - t + c])
            assert abs(direct - shifted) < mpf("1e-40")


# ----------------------------------------------------------------------
# matrix assembly
# ----------------------------------------------------------------------

def test_matrix_symmetry_and_prime_grid():
    iv = _interval(13)
    m = assemble_matrix(iv, 12, P40)
    assert m.symmetry_defect() == 0
    assert m.prime_grid.values() == [2, 3, 4, 5, 7, 8, 9, 11, 13]


def test_single_entry_against_2d_quadrature():
    """N=0 at lambda=sqrt(2): the only entry from brute-force integrals."""
    prec = Precision(40)
    iv = _interval(2, prec)
    m = assemble_matrix(iv, 0, prec)
    with mp.workdps(60):
        L = iv.length
        rootL = mp.sqrt(L)

        def psi00(tau):
            t = abs(tau)
            return (L - t) / L if t < L else mpf(0)

        # pole terms: (int e0 e^{s/2})^2 + (int e0 e^{-s/2})^2 via quadrature
        pole_p = mp.quad(lambda s: mp.exp(s / 2) / rootL, [-L / 2, L / 2])
        pole_m = mp.quad(lambda s: mp.exp(-s / 2) / rootL, [-L / 2, L / 2])
        pole = 2 * pole_p * pole_m
        # at lambda^2 = 2 the only prime power is 2 itself, at the support edge
        prime = mp.log(2) * 2 ** mpf("-0.5") * 2 * psi00(mp.log(2))
        arch = ((mp.log(4 * mp.pi) + mp.euler) * psi00(0)
                + mp.quad(lambda t: (2 * psi00(t) - 2 * mp.exp(-t / 2))
                          * mp.exp(t / 2) / (2 * mp.sinh(t)), [0, L])
                + mp.log(mp.tanh(L / 2)))
        oracle = pole - prime - arch
        assert abs(m.entries[0][0] - oracle) < mpf("1e-32")


def test_entries_against_explicit_module():
    """Cross-module route: each entry recomputed by feeding the closed-form
    correlation to the explicit-formula distributions."""
    prec = Precision(40)
    iv = _interval(5, prec)
    N = 3
    m = assemble_matrix(iv, N, prec)
    with mp.workdps(55):
        L = iv.length
        lam = iv.lam
        for (j, k) in [(0, 0), (0, 2), (1, 3), (2, 2), (3, 3)]:
            corr = MultiplicativeTestFunction(
                evaluator=lambda u, j=j, k=k: basis_correlation(
                    j, k, mp.log(u), iv),
                support_lo=1 / (lam * lam), support_hi=lam * lam,
                breakpoints=(mpf(1),))
            place = w_arch(corr, prec)
            for p in (2, 3, 5):
                place += w_prime(corr, p, prec)
            pole = (corr.hat(mp.mpc(0, "0.5"), prec)
                    + corr.hat(mp.mpc(0, "-0.5"), prec)).real
            oracle = pole - place
            assert abs(m.entries[j][k] - oracle) < mpf("1e-25")


def test_minimal_mode_positive_and_gapped():
    for lam2 in (2, 3, 5):
        iv = _interval(lam2)
        mode = minimal_mode(assemble_matrix(iv, 16, P40))
        assert mode.epsilon > 0
        assert mode.verified
        assert mode.even
        # residual contract
        assert mode.pair.residual < mpf(10) ** (-20)


def test_epsilon_decreases_with_lambda():
    eps = []
    for lam2 in (2, 3, 5):
        iv = _interval(lam2)
        eps.append(minimal_mode(assemble_matrix(iv, 16, P40)).epsilon)
    assert eps[0] > eps[1] > eps[2]


def test_epsilon_decreases_with_truncation_order():
    # enlarging the trial space can only lower the minimum; successive
    # truncations agree in order of magnitude (the two-N cross-check)
    iv = _interval(5, P50)
    e12 = minimal_mode(assemble_matrix(iv, 12, P50)).epsilon
    e16 = minimal_mode(assemble_matrix(iv, 16, P50)).epsilon
    e22 = minimal_mode(assemble_matrix(iv, 22, P50)).epsilon
    assert e22 <= e16 <= e12
    assert e12 < 3 * e22


def test_log_epsilon_roughly_linear_in_x():
    xs = (2, 3, 5, 8)
    lo = []
    for lam2 in xs:
        iv = LogInterval.from_pmax(lam2, Precision(60))
        mode = minimal_mode(assemble_matrix(iv, 20, Precision(60)))
        with mp.workdps(60):
            lo.append(float(mp.log(mode.epsilon)))
    slopes = [(lo[i + 1] - lo[i]) / (xs[i + 1] - xs[i]) for i in range(3)]
    assert all(s < -4 for s in slopes)          # strong exponential decay
    spread = max(slopes) - min(slopes)
    assert spread < 0.5 * abs(sum(slopes) / 3)  # approximately linear


def test_odd_block_above_even_block():
    iv = _interval(5)
    even = minimal_mode(assemble_matrix(iv, 16, P40))
    odd = odd_block_mode(iv, 16, P40)
    assert odd.pair.epsilon > even.pair.epsilon
    assert not odd.even
    # sanity: the blocks are genuinely different operators
    modd = odd.matrix.entries
    meven = even.matrix.entries
    assert abs(modd[0][0] - meven[1][1]) > mpf("1e-12")


def test_yoshida_regime_nonnegative():
    # lambda < sqrt(2): no prime terms; positivity of the archimedean form
    prec = Precision(40)
    iv = LogInterval.from_lambda(mpf("1.2"), prec)
    m = assemble_matrix(iv, 10, prec)
    assert len(m.prime_grid) == 0
    mode = minimal_mode(m)
    assert mode.epsilon > -mpf("1e-30")


def test_constrained_variant_runs():
    iv = _interval(5)
    mode = constrained_minimal_mode(iv, 10, P40)
    assert mode.even
    assert mode.pair.epsilon > -mpf("1e-30")
    # the pole direction has been projected out
    from zetalab.weilform import _pole_vector
    with mp.workdps(50):
        P = _pole_vector(iv, 10, "even")
        dot = mp.fsum(a * b for a, b in zip(P, mode.pair.coeffs))
        assert abs(dot) < mpf("1e-18")


# ----------------------------------------------------------------------
# cache
# ----------------------------------------------------------------------

def test_matrix_cache_roundtrip(tmp_path):
    iv = _interval(5)
    m = assemble_matrix(iv, 6, P40)
    path = tmp_path / ("weilmatrix_%s.txt" % matrix_cache_key("x", 6, 40))
    write_matrix_cache(m, path)
    header = path.read_text().splitlines()[0]
    assert header.startswith("weilmatrix v1 lambda=")
    assert "N=6" in header and "digits=40" in header
    m2 = read_matrix_cache(path)
    for r1, r2 in zip(m.entries, m2.entries):
        for a, b in zip(r1, r2):
            assert a == b  # bit-identical after the text round-trip
    pair1 = minimal_mode(m).pair
    pair2 = minimal_mode(m2).pair
    assert pair1.epsilon == pair2.epsilon
    assert all(x == y for x, y in zip(pair1.coeffs, pair2.coeffs))


def test_cache_digit_mismatch(tmp_path):
    iv = _interval(5)
    m = assemble_matrix(iv, 4, P40)
    path = tmp_path / "m.txt"
    write_matrix_cache(m, path)
    with pytest.raises(DomainError):
        read_matrix_cache(path, Precision(50))
