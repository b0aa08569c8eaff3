"""Prolate spheroidal wave functions on [-lambda, lambda] and the localized
approximation of the theta kernel.

The differential operator -d/dx((lambda^2 - x^2) d/dx) + (2 pi lambda x)^2
becomes, in the rescaled variable y = x/lambda, the classical prolate
operator  -d/dy((1 - y^2) d/dy) + c^2 y^2  with bandwidth c = 2 pi lambda^2.
A Galerkin discretization in normalized Legendre polynomials is tridiagonal
on each parity block (y^2 couples n with n +- 2), so eigenvalues come from
Sturm bisection and eigenvectors from tridiagonal inverse iteration, with the
dimension grown until the trailing coefficients are negligible.

The compressed Fourier transform F f(y) = int_-lambda^lambda f(x) e^{2 pi i x y} dx
acts on the even eigenfunctions as multiplication by the angle eigenvalue
chi_m (sign (-1)^m, chi_m^2 = nu_m strictly decreasing from just below 1);
it is evaluated through spherical Bessel expansions of the Legendre basis.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf, mpc

from .numeric import DomainError, EigenError, IntegrationError, hermite_function
from .precision import GUARD_DIGITS, Precision, as_precision, round_to
from .xi import _legendre_nodes, get_xi_evaluator, hermite_combo_h

MAX_PROLATE_INDEX = 32


# ----------------------------------------------------------------------
# symmetric tridiagonal eigensolver
# ----------------------------------------------------------------------

def _sturm_count(diag, off, x):
    """Number of eigenvalues below x (LDL^T sign count)."""
    count = 0
    d = diag[0] - x
    tiny = mpf(10) ** (-mp.dps)
    if d < 0:
        count += 1
    for i in range(1, len(diag)):
        if d == 0:
            d = tiny
        d = diag[i] - x - off[i - 1] ** 2 / d
        if d < 0:
            count += 1
    return count


def _tridiag_solve(diag, off, shift, rhs):
    """Solve (T - shift I) x = rhs with partial pivoting (one fill diagonal)."""
    n = len(diag)
    a = [off[i - 1] if i > 0 else mpf(0) for i in range(n)]       # sub
    b = [diag[i] - shift for i in range(n)]                       # main
    c = [off[i] if i < n - 1 else mpf(0) for i in range(n)]       # super
    d = [mpf(0)] * n                                              # fill
    r = list(rhs)
    for i in range(n - 1):
        if abs(a[i + 1]) > abs(b[i]):
            b[i], a[i + 1] = a[i + 1], b[i]
            c[i], b[i + 1] = b[i + 1], c[i]
            d[i], c[i + 1] = c[i + 1], d[i]
            r[i], r[i + 1] = r[i + 1], r[i]
        if b[i] == 0:
            b[i] = mpf(10) ** (-mp.dps)
        m = a[i + 1] / b[i]
        b[i + 1] -= m * c[i]
        c[i + 1] -= m * d[i]
        r[i + 1] -= m * r[i]
    x = [mpf(0)] * n
    for i in range(n - 1, -1, -1):
        s = r[i]
        if i + 1 < n:
            s -= c[i] * x[i + 1]
        if i + 2 < n:
            s -= d[i] * x[i + 2]
        if b[i] == 0:
            b[i] = mpf(10) ** (-mp.dps)
        x[i] = s / b[i]
    return x


def tridiag_lowest_eigenpairs(diag, off, count, prec):
    """Lowest ``count`` eigenpairs of a symmetric tridiagonal matrix."""
    prec = as_precision(prec)
    with prec.work():
        n = len(diag)
        if count > n:
            raise EigenError("asked for %d eigenpairs of a %d matrix" % (count, n))
        rad = [abs(off[i - 1] if i > 0 else 0) + abs(off[i] if i < n - 1 else 0)
               for i in range(n)]
        lo = min(diag[i] - rad[i] for i in range(n))
        hi = max(diag[i] + rad[i] for i in range(n))
        tol = (hi - lo) * mpf(10) ** (-(prec.digits + 5))
        pairs = []
        for idx in range(count):
            a, b = lo, hi
            # bisection on the Sturm count for the (idx+1)-th eigenvalue
            while b - a > tol:
                m = (a + b) / 2
                if _sturm_count(diag, off, m) >= idx + 1:
                    b = m
                else:
                    a = m
            lam = (a + b) / 2
            # inverse iteration; the shift is accurate so two passes suffice
            v = [mpf(1)] * n
            for _ in range(3):
                v = _tridiag_solve(diag, off, lam + tol, v)
                norm = mp.sqrt(mp.fsum(x * x for x in v))
                v = [x / norm for x in v]
            # Rayleigh polish
            tv = [diag[i] * v[i]
                  + (off[i - 1] * v[i - 1] if i > 0 else 0)
                  + (off[i] * v[i + 1] if i < n - 1 else 0) for i in range(n)]
            lam = mp.fsum(a * b_ for a, b_ in zip(tv, v))
            lead = next((x for x in v if abs(x) > mpf(10) ** (-prec.digits)), mpf(1))
            if lead < 0:
                v = [-x for x in v]
            pairs.append((lam, v))
        return pairs


# ----------------------------------------------------------------------
# prolate eigensystem
# ----------------------------------------------------------------------

@dataclass
class ProlateFunction:
    """Eigenfunction h_{n,lambda}, unit L2 norm on [-lambda, lambda].

    ``legendre_coeffs[m]`` multiplies the normalized Legendre polynomial of
    degree ``parity + 2 m`` in x/lambda; ``chi`` is the Fourier angle
    eigenvalue (even n only, filled in by :func:`chi_eigenvalue`).
    """

    lam: mpf
    index: int
    legendre_coeffs: list
    diff_eigenvalue: mpf
    digits: int
    chi: mpf | None = None
    chi_residual: mpf | None = None

    @property
    def parity(self) -> int:
        return self.index % 2

    def degrees(self):
        return range(self.parity, self.parity + 2 * len(self.legendre_coeffs), 2)

    def __call__(self, x):
        with mp.workdps(self.digits + GUARD_DIGITS):
            x = mpf(x)
            if abs(x) > self.lam:
                return mpf(0)
            u = x / self.lam
            nmax = self.parity + 2 * (len(self.legendre_coeffs) - 1)
            vals = _legendre_values(nmax, u)
            total = mpf(0)
            for c, n in zip(self.legendre_coeffs, self.degrees()):
                total += c * mp.sqrt(mpf(2 * n + 1) / 2) * vals[n]
            return total / mp.sqrt(self.lam)

    def integral(self) -> mpf:
        """int_-lambda^lambda h dx (only the constant Legendre mode survives)."""
        with mp.workdps(self.digits + GUARD_DIGITS):
            if self.parity == 1:
                return mpf(0)
            return mp.sqrt(self.lam) * self.legendre_coeffs[0] * mp.sqrt(2)


def _legendre_values(nmax, u):
    vals = [mpf(1), u]
    for n in range(1, nmax + 1):
        vals.append(((2 * n + 1) * u * vals[n] - n * vals[n - 1]) / (n + 1))
    return vals


def _galerkin_block(lam, parity, dim):
    """Tridiagonal Galerkin block of the prolate operator, c = 2 pi lambda^2."""
    c2 = (2 * mp.pi * lam * lam) ** 2

    def alpha(n):
        return mpf(n + 1) / mp.sqrt(mpf(2 * n + 1) * (2 * n + 3))

    diag, off = [], []
    for ii in range(dim):
        n = parity + 2 * ii
        a_lo = alpha(n - 1) ** 2 if n >= 1 else mpf(0)
        diag.append(n * (n + 1) + c2 * (a_lo + alpha(n) ** 2))
        if ii + 1 < dim:
            off.append(c2 * alpha(n) * alpha(n + 1))
    return diag, off


def prolate_eigensystem(lam, nmax: int, prec) -> list:
    """First nmax+1 eigenfunctions of the prolate operator on [-lam, lam],
    ascending differential eigenvalues (parities interleave)."""
    prec = as_precision(prec)
    if not (0 <= nmax <= MAX_PROLATE_INDEX):
        raise DomainError("prolate index bounded by %d" % MAX_PROLATE_INDEX)
    with prec.work():
        lam = mpf(lam)
        if lam <= 1:
            raise DomainError("lambda must exceed 1")
        out = {}
        for parity in (0, 1):
            count = (nmax - parity) // 2 + 1 if nmax >= parity else 0
            if count == 0:
                continue
            c = 2 * mp.pi * lam * lam
            dim = max(count + 8, int(float(c) / 2) + 10, 24)
            drop = mpf(10) ** (-(prec.digits + 5))
            for _ in range(8):
                diag, off = _galerkin_block(lam, parity, dim)
                pairs = tridiag_lowest_eigenpairs(diag, off, count, prec)
                if all(max(abs(x) for x in v[-3:]) < drop for (_, v) in pairs):
                    break
                dim = int(dim * 1.5) + 4
            else:
                raise IntegrationError("Galerkin expansion did not converge")
            for m, (ev, vec) in enumerate(pairs):
                idx = parity + 2 * m
                out[idx] = ProlateFunction(
                    lam=round_to(lam, prec), index=idx,
                    legendre_coeffs=[round_to(x, prec) for x in vec],
                    diff_eigenvalue=round_to(ev, prec), digits=prec.digits)
        funcs = [out[i] for i in range(nmax + 1)]
        evs = [f.diff_eigenvalue for f in funcs]
        if any(b <= a for a, b in zip(evs, evs[1:])):
            raise EigenError("prolate eigenvalues failed to interleave")
        return funcs


# ----------------------------------------------------------------------
# Fourier angle eigenvalues
# ----------------------------------------------------------------------

def _spherical_jn_upto(nmax, z):
    """j_0..j_nmax by Miller's downward recurrence (stable for all n, z)."""
    if z == 0:
        return [mpf(1)] + [mpf(0)] * nmax
    start = nmax + int(abs(z)) + mp.dps + 20
    jp = mpf(0)
    jc = mpf(10) ** (-mp.dps)
    vals = [mpf(0)] * (nmax + 1)
    for n in range(start, -1, -1):
        jm = (2 * n + 3) / z * jc - jp
        jp, jc = jc, jm
        if n <= nmax:
            vals[n] = jm
    scale = (mp.sin(z) / z) / vals[0]
    return [v * scale for v in vals]


def compressed_fourier(h: ProlateFunction, y):
    """F h(y) = int h(x) e^{2 pi i x y} dx through the Legendre-Bessel series;
    real for even h (i^n = (-1)^(n/2) on even degrees)."""
    with mp.workdps(h.digits + GUARD_DIGITS):
        y = mpf(y)
        z = 2 * mp.pi * h.lam * y
        nmax = h.parity + 2 * (len(h.legendre_coeffs) - 1)
        jn = _spherical_jn_upto(nmax, z)
        total = mpf(0)
        for c, n in zip(h.legendre_coeffs, h.degrees()):
            phase = (-1) ** (n // 2) if n % 2 == 0 else (-1) ** ((n - 1) // 2)
            total += c * mp.sqrt(mpf(2 * n + 1) / 2) * 2 * phase * jn[n]
        total *= mp.sqrt(h.lam)
        return total  # imaginary unit stripped for odd parity (phase table)


def chi_eigenvalue(h: ProlateFunction, prec, nodes: int | None = None):
    """Angle eigenvalue chi = <h, F h> with the L2 residual ||F h - chi h||
    on [-lambda, lambda]; raises if the residual exceeds 10**-(digits/3)."""
    prec = as_precision(prec)
    if h.parity != 0:
        raise DomainError("angle eigenvalues are defined for even indices")
    with prec.work():
        lam = h.lam
        dim = len(h.legendre_coeffs)
        if nodes is None:
            nodes = max(2 * (h.parity + 2 * dim) + 32, int(8 * float(lam) ** 2) + 32)
        pts = _legendre_nodes(nodes)
        hv, fv, ws = [], [], []
        for (x, w) in pts:
            y = lam * x
            hv.append(h(y))
            fv.append(compressed_fourier(h, y))
            ws.append(w * lam)
        chi = mp.fsum(w * a * b for w, a, b in zip(ws, hv, fv))
        res2 = mp.fsum(w * (b - chi * a) ** 2 for w, a, b in zip(ws, hv, fv))
        residual = mp.sqrt(abs(res2))
        if residual > mpf(10) ** (-(prec.digits // 3)):
            raise IntegrationError(
                "angle-eigenvalue residual %s too large" % mp.nstr(residual, 5))
        h.chi = round_to(chi, prec)
        h.chi_residual = round_to(residual, prec)
        return h.chi, h.chi_residual


def chi2_asymptotic_formula(lam, prec):
    """Leading asymptotic of 1 - chi_2: (2^14/3) sqrt(2) pi^5 e^{-4 pi e^L + (9/2) L}
    with L = 2 log lambda (so e^L = lambda^2)."""
    prec = as_precision(prec)
    with prec.work():
        L = 2 * mp.log(mpf(lam))
        return round_to(mpf(2) ** 14 / 3 * mp.sqrt(2) * mp.pi ** 5
                        * mp.exp(-4 * mp.pi * mp.exp(L) + mpf(9) / 2 * L), prec)


def chi2_asymptotic_check(lambda_grid, prec) -> list:
    """Ratios (1 - chi_2)/formula over the grid; guarded to lambda^2 in
    [2.5, 8] where the quantity neither dominates nor underflows."""
    prec = as_precision(prec)
    out = []
    for lam in lambda_grid:
        lam_f = float(lam) ** 2
        if not (2.5 <= lam_f <= 8.0):
            raise DomainError("lambda^2 = %g outside the guarded window [2.5, 8]"
                              % lam_f)
        digits = max(prec.digits, int(4 * 3.1416 * lam_f / 2.302) + 30)
        wprec = Precision(digits)
        funcs = prolate_eigensystem(lam, 4, wprec)
        chi2, _ = chi_eigenvalue(funcs[4], wprec)
        with wprec.work():
            ratio = (1 - chi2) / chi2_asymptotic_formula(lam, wprec)
        out.append(round_to(ratio, prec))
    return out


# ----------------------------------------------------------------------
# the localized combination and its summation image
# ----------------------------------------------------------------------

@dataclass
class HLambda:
    """h_lambda = a h_{4,lambda} + b h_{0,lambda}, the unique (up to scale)
    combination with vanishing integral, normalized to ||h|| = sqrt(33)/2^(17/4)
    and positive overlap with the Gaussian bump it localizes."""

    lam: mpf
    h0: ProlateFunction
    h4: ProlateFunction
    a: mpf
    b: mpf
    digits: int

    def __call__(self, x):
        return self.a * self.h4(x) + self.b * self.h0(x)

    def norm(self) -> mpf:
        with mp.workdps(self.digits + GUARD_DIGITS):
            return mp.sqrt(self.a ** 2 + self.b ** 2)

    def integral(self) -> mpf:
        with mp.workdps(self.digits + GUARD_DIGITS):
            return self.a * self.h4.integral() + self.b * self.h0.integral()


def h_lambda(lam, prec, system=None) -> HLambda:
    prec = as_precision(prec)
    with prec.work():
        funcs = system if system is not None else prolate_eigensystem(lam, 4, prec)
        h0, h4 = funcs[0], funcs[4]
        i0, i4 = h0.integral(), h4.integral()
        if i0 == 0 and i4 == 0:
            raise EigenError("both prolate integrals vanish; cannot normalize")
        a, b = i0, -i4
        scale = mp.sqrt(mpf(33)) / mpf(2) ** (mpf(17) / 4) / mp.sqrt(a * a + b * b)
        a, b = a * scale, b * scale
        # orient along the Gaussian bump combination
        overlap = mpf(0)
        for (x, w) in _legendre_nodes(80):
            y = h0.lam * x
            overlap += w * h0.lam * ((a * h4(y) + b * h0(y))
                                     * hermite_combo_h(y, prec))
        if overlap < 0:
            a, b = -a, -b
        return HLambda(lam=h0.lam, h0=h0, h4=h4, a=round_to(a, prec),
                       b=round_to(b, prec), digits=prec.digits)


def k_lambda(hl: HLambda, u, prec) -> mpf:
    """Finite summation image u^(1/2) sum_{n <= lambda/u} h_lambda(n u),
    defined for u in [1/lambda, lambda] (at most floor(lambda^2) terms)."""
    prec = as_precision(prec)
    with prec.work():
        u = mpf(u)
        lam = hl.lam
        if u < 1 / lam or u > lam:
            raise DomainError("argument outside [1/lambda, lambda]")
        nmax = int(mp.floor(lam / u + mpf(10) ** (-prec.digits)))
        total = mp.fsum(hl(n * u) for n in range(1, nmax + 1))
        return round_to(mp.sqrt(u) * total, prec)


def k_lambda_hat(hl: HLambda, z, prec) -> mpc:
    """Multiplicative transform 2 int_{1/lambda}^{lambda} k_lambda(u) u^{iz} du/u,
    normalized like the Xi oracle (which it approximates as lambda grows).

    The integrand has kinks where the summation count changes (u = lambda/n),
    so the quadrature is split there.  Values of k_lambda at the nodes are
    cached on the HLambda object for reuse across z.
    """
    prec = as_precision(prec)
    with prec.work():
        lam = hl.lam
        z = mpc(z)
        cache = getattr(hl, "_hat_nodes", None)
        if cache is None or cache[0] != prec.digits:
            breaks = [mp.log(lam / n) for n in range(1, int(mp.floor(lam ** 2)) + 1)]
            breaks = sorted(set([-mp.log(lam)] + breaks + [mp.log(lam)]))
            pts = _legendre_nodes(max(30, prec.digits // 2 + 16))
            nodes = []
            for a, b in zip(breaks[:-1], breaks[1:]):
                half, mid = (b - a) / 2, (a + b) / 2
                for (x, w) in pts:
                    s = mid + half * x
                    nodes.append((s, w * half * k_lambda(hl, mp.exp(s),
                                                         Precision(prec.digits + GUARD_DIGITS))))
            cache = (prec.digits, nodes)
            hl._hat_nodes = cache
        total = mp.fsum(kw * mp.exp(mpc(0, 1) * z * s) for (s, kw) in cache[1])
        return round_to(2 * total, prec)


def k_lambda_hat_vs_xi(lam, tgrid, alpha, prec, hl=None):
    """sup over the grid of |khat_lambda(t + i alpha) - Xi(t + i alpha)|."""
    prec = as_precision(prec)
    with prec.work():
        alpha = mpf(alpha)
        if not abs(alpha) < mpf("0.5"):
            raise DomainError("alpha must lie in (-1/2, 1/2)")
        if hl is None:
            hl = h_lambda(lam, prec)
        xi = get_xi_evaluator(prec, tmax=float(max(tgrid)) + 1)
        sup = mpf(0)
        for t in tgrid:
            zz = mpc(mpf(t), alpha)
            diff = abs(k_lambda_hat(hl, zz, prec) - xi(zz))
            sup = max(sup, diff)
        return round_to(sup, prec)


def hermite_overlap(h: ProlateFunction, n: int, prec) -> mpf:
    """<h_{n,lambda}, h_n> against the oscillator eigenfunction, by quadrature."""
    prec = as_precision(prec)
    with prec.work():
        lam = h.lam
        nodes = max(64, 2 * (h.parity + 2 * len(h.legendre_coeffs)) + 16,
                    prec.digits)
        total = mpf(0)
        for (x, w) in _legendre_nodes(nodes):
            y = lam * x
            total += w * lam * h(y) * hermite_function(n, y, prec)
        return round_to(total, prec)


def theta_vs_klambda(mode, hl: HLambda, prec) -> mpf:
    """Cosine similarity |<theta, k_lambda>| / (||theta|| ||k_lambda||) in
    L2 of the multiplicative interval, theta being a minimal-mode test
    function; quadrature split at the summation breakpoints."""
    prec = as_precision(prec)
    theta = mode.test_function()
    with prec.work():
        lam = hl.lam
        breaks = [mp.log(lam / n) for n in range(1, int(mp.floor(lam ** 2)) + 1)]
        breaks = sorted(set([-mp.log(lam)] + breaks + [mp.log(lam)]))
        # the mode oscillates at frequencies up to 2 pi N / L; resolve them
        pts = _legendre_nodes(max(40, prec.digits // 2 + 16, 3 * theta.order))
        dot = nk = nt = mpf(0)
        for a, b in zip(breaks[:-1], breaks[1:]):
            half, mid = (b - a) / 2, (a + b) / 2
            for (x, w) in pts:
                s = mid + half * x
                kv = k_lambda(hl, mp.exp(s), prec)
                tv = theta(s)
                dot += w * half * kv * tv
                nk += w * half * kv * kv
                nt += w * half * tv * tv
        return round_to(abs(dot) / mp.sqrt(nk * nt), prec)
