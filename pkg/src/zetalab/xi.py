"""Riemann's Xi function through the theta-series kernel, and reference zeros.

The kernel is

    k(u) = u**(1/2) * (pi/2) * sum_{n>=1} n^2 u^2 (2 pi n^2 u^2 - 3) exp(-pi n^2 u^2)

with the Poisson-formula symmetry k(u) = k(1/u).  It is the image k = E(h) of
the Gaussian bump h(u) = (pi/2) u^2 (2 pi u^2 - 3) exp(-pi u^2) under the
summation map E(f)(u) = u**(1/2) sum_{n>=1} f(n u).  Xi is recovered as its
multiplicative Fourier transform,

    Xi(t) = 2 * int_0^inf k(u) u^{it} du/u = 8 * int_1^inf k(u) cos(t log u) du/u,

normalized so that Xi(0) = -zeta(1/2) Gamma(5/4) / (2 pi**(1/4)) = 0.497120...
(the prefactor is pinned against this closed form; see the package notes).

Zeros of Xi on the real axis are located by a sign-change scan with step
control from the counting estimate N(T) ~ (T/2pi) log(T/2pi) - T/2pi + 7/8,
then refined by bracketed derivative-free iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf, mpc

from .numeric import DomainError, IntegrationError
from .precision import GUARD_DIGITS, Precision, as_precision, round_to
from .zeros_io import ZeroList

MAX_ZERO_COUNT = 10_000
_SCAN_DIGITS = 30


# ----------------------------------------------------------------------
# kernel and summation map
# ----------------------------------------------------------------------

def hermite_combo_h(x, prec):
    """The even Gaussian bump h(x) = (pi/2) x^2 (2 pi x^2 - 3) exp(-pi x^2).

    Equals (sqrt(3)/(4*2**(3/4))) h_4 - (3/2**(17/4)) h_0 pointwise, has
    vanishing integral and L2 norm sqrt(33)/2**(17/4).
    """
    prec = as_precision(prec)
    with prec.work():
        x = mpf(x)
        x2 = x * x
        return round_to((mp.pi / 2) * x2 * (2 * mp.pi * x2 - 3) * mp.exp(-mp.pi * x2),
                        prec)


def hermite_combo_tail(n: int, u, dps: int):
    """Certified bound on sum_{m>n} |h(m u)|, or None if not yet geometric."""
    u = mpf(u)
    m = n + 1
    if (m * u) ** 2 < 1:
        return None
    ratio = (mpf(m + 1) / m) ** 4 * mp.exp(-mp.pi * (2 * m + 1) * u * u)
    if ratio > mpf("0.5"):
        return None
    lead = mp.pi ** 2 * (m * u) ** 4 * mp.exp(-mp.pi * (m * u) ** 2)
    return lead / (1 - ratio)


def e_map(f, u, prec, support_radius=None, tail_bound=None):
    """Summation map E(f)(u) = u**(1/2) * sum_{n>=1} f(n u).

    For f with declared support radius the sum is finite (n <= radius/u).
    Otherwise a certified tail bound ``tail_bound(n, u, dps) -> bound|None``
    must be supplied; the sum stops once the bound drops below
    10**-(digits+10).
    """
    prec = as_precision(prec)
    with prec.work():
        u = mpf(u)
        if u <= 0:
            raise DomainError("e_map argument must be positive")
        target = mpf(10) ** (-(prec.digits + 10))
        total = mpf(0)
        if support_radius is not None:
            nmax = int(mp.floor(mpf(support_radius) / u + mpf(10) ** (-prec.digits)))
            for n in range(1, nmax + 1):
                total += f(n * u)
        elif tail_bound is not None:
            n = 0
            while True:
                n += 1
                total += f(n * u)
                bound = tail_bound(n, u, prec.digits)
                if bound is not None and bound < target:
                    break
                if n > 100_000:
                    raise IntegrationError("summation map tail bound never certified")
        else:
            raise DomainError("e_map needs a support radius or a certified tail bound")
        return round_to(mp.sqrt(u) * total, prec)


def k_theta(u, prec, fold: bool = True):
    """Theta-series kernel k(u); for u < 1 evaluated via k(u) = k(1/u).

    With ``fold=False`` the defining series is summed at u itself, which is
    how the Poisson symmetry is verified rather than assumed.
    """
    prec = as_precision(prec)
    with prec.work():
        u = mpf(u)
        if u <= 0:
            raise DomainError("kernel argument must be positive")
        if fold and u < 1:
            u = 1 / u
        target = mpf(10) ** (-(prec.digits + 10))
        total = mpf(0)
        n = 0
        while True:
            n += 1
            x = mp.pi * (n * u) ** 2
            total += n * n * u * u * (2 * x - 3) * mp.exp(-x)
            # monotone tail bound once terms decay geometrically
            m = n + 1
            ratio = (mpf(m + 1) / m) ** 4 * mp.exp(-mp.pi * (2 * m + 1) * u * u)
            if ratio < mpf("0.5"):
                lead = 2 * mp.pi * (m * u) ** 4 * mp.exp(-mp.pi * (m * u) ** 2)
                if lead / (1 - ratio) < target:
                    break
            if n > 100_000:
                raise IntegrationError("theta series tail bound never certified")
        return round_to(mp.sqrt(u) * (mp.pi / 2) * total, prec)


def theta_kernel_nmax(prec) -> int:
    """Series truncation certified for all u >= 1 at the given precision."""
    prec = as_precision(prec)
    with prec.work():
        target = mpf(10) ** (-(prec.digits + 10))
        n = 1
        while True:
            m = n + 1
            lead = 2 * mp.pi * m ** 4 * mp.exp(-mp.pi * m * m)
            if lead < target / 2:
                return n
            n += 1


# ----------------------------------------------------------------------
# Xi evaluation
# ----------------------------------------------------------------------

def _xi_upper_limit(digits: int):
    """U with 80 U^3 exp(-pi U^2) < 10**-(digits+10), covering |Im t| <= 1/2."""
    target = (digits + 12) * mp.log(10)
    u = mp.sqrt(target / mp.pi) + 1
    for _ in range(4):
        u = mp.sqrt((target + 3 * mp.log(u) + mp.log(80)) / mp.pi)
    return u + mpf(1) / 4


def _legendre_nodes(m: int):
    """Gauss-Legendre nodes/weights on (-1, 1) at current precision."""
    nodes = []
    for i in range(1, m + 1):
        # Newton from the Chebyshev-like initial guess
        x = mp.cos(mp.pi * (i - mpf(1) / 4) / (m + mpf(1) / 2))
        for _ in range(200):
            p0, p1 = mpf(1), x
            for k in range(1, m):
                p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
            dp = m * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mpf(10) ** (-(mp.dps - 3)):
                break
        p0, p1 = mpf(1), x
        for k in range(1, m):
            p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
        dp = m * (x * p1 - p0) / (x * x - 1)
        w = 2 / ((1 - x * x) * dp * dp)
        nodes.append((x, w))
    return nodes


# |Xi(t)| decays like exp(-pi t/4); resolving its sign through the O(1)
# oscillatory integrand costs that many digits of cancellation
_DECAY_DIGITS_PER_T = 0.3411  # pi / (4 log 10)
_MAX_WORK_DIGITS = 1500


def xi_work_digits(digits: int, tmax: float) -> int:
    need = digits + GUARD_DIGITS + int(_DECAY_DIGITS_PER_T * max(tmax, 0)) + 5
    if need > _MAX_WORK_DIGITS:
        raise IntegrationError(
            "theta-kernel evaluation needs %d working digits at t=%.0f; "
            "import an external zero table for this scale" % (need, tmax))
    return need


class XiEvaluator:
    """Reusable evaluator of Xi(t) = 8 int_0^S k(e^s) cos(t s) ds, S = log U.

    A composite Gauss-Legendre rule resolving oscillations up to ``tmax`` is
    built once (panel count scales with tmax, per-panel order with the working
    precision) and validated against a refined rule; the kernel values at the
    nodes are cached so each evaluation costs one cosine per node.  The
    working precision grows with tmax to absorb the exp(-pi t/4) cancellation.
    """

    def __init__(self, prec, tmax=160, scheme: str = "gauss-legendre"):
        self.prec = as_precision(prec)
        self.scheme = scheme
        self.tmax = float(tmax)
        self.work_digits = xi_work_digits(self.prec.digits, self.tmax)
        with mp.workdps(self.work_digits):
            self._upper = _xi_upper_limit(self.work_digits)
            self._span = mp.log(self._upper)
            if scheme == "gauss-legendre":
                self._build_rule()
            elif scheme != "tanh-sinh":
                raise DomainError("unknown scheme %r" % scheme)

    def _panelization(self, panels: int, order: int):
        span = self._span
        nodes = _legendre_nodes(order)
        kernel_prec = Precision(max(self.work_digits, 30))
        rule = []
        for p in range(panels):
            a = span * p / panels
            b = span * (p + 1) / panels
            half = (b - a) / 2
            mid = (a + b) / 2
            for (x, w) in nodes:
                s = mid + half * x
                rule.append((s, w * half * k_theta(mp.exp(s), kernel_prec)))
        return rule

    def _build_rule(self):
        periods = self.tmax * float(self._span) / (2 * 3.14159) + 1
        panels = max(8, int(periods * 3) + 1)
        order = max(12, int(0.45 * self.work_digits) + 1)
        tol = mpf(10) ** (-(self.work_digits - 10))
        rule = self._panelization(panels, order)
        for _ in range(6):
            check = self._panelization(panels + max(4, panels // 3), order + 8)
            worst = mpf(0)
            for t in (mpf(self.tmax), mpf(self.tmax) / 3, mpf(0)):
                a = _rule_sum(rule, t)
                b = _rule_sum(check, t)
                worst = max(worst, abs(a - b))
            if worst < tol:
                break
            rule = check
            panels, order = panels + max(4, panels // 3), order + 8
        else:
            raise IntegrationError("Xi quadrature rule failed to stabilize")
        self._rule = rule

    def __call__(self, t):
        with mp.workdps(self.work_digits):
            if isinstance(t, mpc) or (hasattr(t, "imag") and t.imag != 0):
                t = mpc(t)
                if abs(t.imag) >= mpf("0.5"):
                    raise DomainError("Xi evaluator restricted to |Im t| < 1/2")
            else:
                t = mpf(t)
            if self.scheme == "tanh-sinh":
                val = 8 * mp.quad(
                    lambda s: k_theta(mp.exp(s), Precision(self.work_digits))
                    * mp.cos(t * s),
                    [0, self._span])
            else:
                if abs(mpc(t).real) > self.tmax + 1e-9:
                    raise DomainError("t=%s beyond the rule's band %s"
                                      % (t, self.tmax))
                val = _rule_sum(self._rule, t)
            return round_to(val, self.prec)


def _rule_sum(rule, t):
    if t == 0:
        return 8 * mp.fsum(kw for (_, kw) in rule)
    return 8 * mp.fsum(kw * mp.cos(t * s) for (s, kw) in rule)


_EVALUATOR_CACHE: dict = {}


def get_xi_evaluator(prec, tmax=160, scheme="gauss-legendre") -> XiEvaluator:
    prec = as_precision(prec)
    band = 40.0
    while band < tmax:
        band *= 2
    key = (prec.digits, band, scheme)
    if key not in _EVALUATOR_CACHE:
        _EVALUATOR_CACHE[key] = XiEvaluator(prec, tmax=band, scheme=scheme)
    return _EVALUATOR_CACHE[key]


def xi_eval(t, prec, scheme: str = "gauss-legendre"):
    """Xi(t) for real or complex t with |Im t| < 1/2."""
    prec = as_precision(prec)
    with prec.work():
        tm = abs(mpc(t).real)
    ev = get_xi_evaluator(prec, tmax=float(tm) + 1, scheme=scheme)
    return ev(t)


# ----------------------------------------------------------------------
# reference zeros
# ----------------------------------------------------------------------

def zero_count_estimate(t):
    """Smoothed counting estimate N(t) ~ (t/2pi) log(t/2pi) - t/2pi + 7/8."""
    if t <= 2 * mp.pi:
        return mpf(0)
    x = t / (2 * mp.pi)
    return x * mp.log(x) - x + mpf(7) / 8


def _upper_ordinate_for(count: int):
    t = mpf(20)
    while zero_count_estimate(t) < count + 2:
        t *= mpf("1.05")
    return t


@dataclass
class ZeroBracket:
    lo: mpf
    hi: mpf


def _refine_bracket(f, lo, hi, flo, fhi, width):
    """Illinois (modified regula falsi) refinement of a sign-change bracket.

    Halving the retained endpoint's function value whenever the same side is
    kept twice guarantees convergence; the bracket property is preserved at
    every step.
    """
    side = 0
    for _ in range(80 + 4 * mp.dps):
        if hi - lo <= width:
            break
        mid = (lo * fhi - hi * flo) / (fhi - flo)
        if not (lo < mid < hi):
            mid = (lo + hi) / 2
        fmid = f(mid)
        if fmid == 0:
            eps = width / 4
            lo, hi = mid - eps, mid + eps
            flo, fhi = f(lo), f(hi)
            break
        if flo * fmid < 0:
            hi, fhi = mid, fmid
            if side == -1:
                flo /= 2
            side = -1
        else:
            lo, flo = mid, fmid
            if side == 1:
                fhi /= 2
            side = 1
    return lo, hi, flo, fhi


def reference_zeros(count: int, prec, scheme: str = "gauss-legendre",
                    workers: int = 1) -> ZeroList:
    """First ``count`` positive ordinates of Xi, each certified by a sign
    change in a bracket of width <= 10**-(digits-8).

    The scan walks band by band (the evaluator's working precision grows with
    the ordinate to absorb the kernel transform's exp(-pi t/4) decay); if a
    band shows fewer sign changes than the counting estimate predicts, it is
    re-scanned at half the step.
    """
    prec = as_precision(prec)
    if not (1 <= count <= MAX_ZERO_COUNT):
        raise DomainError("count must be in [1, %d]" % MAX_ZERO_COUNT)

    scan_prec = Precision(_SCAN_DIGITS)
    with scan_prec.work():
        t_hi = _upper_ordinate_for(count)
        xi_work_digits(prec.digits, float(t_hi))  # feasibility guard up front
        brackets = []
        band_lo = mpf(4)
        while band_lo < t_hi and len(brackets) < count:
            band_hi = min(max(band_lo * 2, mpf(40)), t_hi)
            scanner = get_xi_evaluator(scan_prec, tmax=float(band_hi),
                                       scheme=scheme)
            gap = 2 * mp.pi / mp.log(max(band_hi, mpf(20)) / (2 * mp.pi))
            step = gap / 4
            for _ in range(5):
                found = []
                t = band_lo
                prev = scanner(t)
                while t < band_hi:
                    t2 = min(t + step, band_hi)
                    cur = scanner(t2)
                    if prev * cur < 0:
                        found.append(ZeroBracket(t, t2))
                    prev, t = cur, t2
                expected = (zero_count_estimate(band_hi)
                            - zero_count_estimate(band_lo))
                if len(found) >= int(mp.floor(expected)) - 1:
                    break
                step /= 2
            brackets.extend(found)
            band_lo = band_hi
        if len(brackets) < count:
            raise IntegrationError(
                "scan found only %d sign changes, need %d" % (len(brackets), count))
        brackets = brackets[:count]

    def refine(br: ZeroBracket):
        with prec.work():
            evaluator = get_xi_evaluator(prec, tmax=float(br.hi) + 1,
                                         scheme=scheme)
            width = mpf(10) ** (-(prec.digits - 8))
            lo, hi = mpf(br.lo), mpf(br.hi)
            flo, fhi = evaluator(lo), evaluator(hi)
            if flo * fhi >= 0:
                raise IntegrationError("lost sign change while refining bracket")
            lo, hi, flo, fhi = _refine_bracket(evaluator, lo, hi, flo, fhi, width)
            if flo * fhi >= 0 or hi - lo > width:
                raise IntegrationError("bracket refinement failed to certify")
            return round_to((lo + hi) / 2, prec)

    if workers > 1:
        from ._parallel import pmap
        ordinates = pmap(refine, brackets, workers)
    else:
        ordinates = [refine(b) for b in brackets]
    return ZeroList(ordinates, digits=prec.digits, source="xi-reference")
