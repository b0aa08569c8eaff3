"""Zeros of the Fourier transform of an even trigonometric test function.

For coefficients c_0..c_N on [-L/2, L/2] the transform

    etahat(z) = sum_k c_k int e_k(s) exp(-i s z) ds

is entire, real and even on the real axis, and reduces to the stable form

    etahat(z) = c_0 * 2 sinc_like(z) / sqrt(L)
              + sum_{k>=1} c_k sqrt(2/L) sin((z - w_k) L/2)/(z - w_k) * 2z/(z + w_k)

where each apparent pole at z = +-w_k = +-2 pi k/L is removable; writing the
numerator as sin((z - w_k) L/2) keeps every term well conditioned and a short
series takes over inside a tiny disk around each lattice point.

Real zeros are found by a sign-change scan at the local zeta-zero density and
Illinois refinement; the count inside rectangles is verified independently by
the argument principle along the contour, which is the computable form of the
statement that all zeros of the transform of a gap-certified even minimal
mode are real.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from mpmath import mp, mpf, mpc

from .numeric import DomainError, IntegrationError
from .precision import GUARD_DIGITS, Precision, as_precision, round_to
from .weilform import MinimalMode, TrigTestFunction
from .xi import _refine_bracket, zero_count_estimate
from .zeros_io import ZeroList


@dataclass
class EntireEvaluator:
    """Closed-form evaluator of the transform of a trigonometric mode."""

    interval: object
    coeffs: list
    digits: int
    verified: bool = True

    @classmethod
    def from_mode(cls, mode: MinimalMode) -> "EntireEvaluator":
        f = mode.test_function()
        return cls(interval=f.interval, coeffs=f.coeffs, digits=f.digits,
                   verified=mode.verified)

    @classmethod
    def from_test_function(cls, f: TrigTestFunction, verified: bool = True):
        return cls(interval=f.interval, coeffs=f.coeffs, digits=f.digits,
                   verified=verified)

    def _sinc(self, x):
        """sin(x L/2)/x with the removable singularity filled by series."""
        L = self.interval.length
        if abs(x) < mpf(10) ** (-(self.digits // 4)):
            y = x * L / 2
            y2 = y * y
            return (L / 2) * (1 - y2 / 6 + y2 * y2 / 120)
        return mp.sin(x * L / 2) / x

    def __call__(self, z):
        with mp.workdps(self.digits + GUARD_DIGITS):
            L = self.interval.length
            real_input = not isinstance(z, mpc) and getattr(z, "imag", 0) == 0
            z = mpc(z) if not real_input else mpf(z)
            total = self.coeffs[0] * 2 * self._sinc(z) / mp.sqrt(L)
            root = mp.sqrt(2 / L)
            for k in range(1, len(self.coeffs)):
                ck = self.coeffs[k]
                if not ck:
                    continue
                w = self.interval.omega(k)
                # sin((z -+ w)L/2) = (-1)^k sin(zL/2): one sinc factor per term,
                # written against whichever lattice point is farther away
                if abs(z - w) <= abs(z + w):
                    term = 2 * z * self._sinc(z - w) / (z + w)
                else:
                    term = 2 * z * self._sinc(z + w) / (z - w)
                total += ck * root * term
            return total


def eta_hat(e: EntireEvaluator, z):
    """Transform value at a real or complex argument."""
    prec = Precision(e.digits)
    with prec.work():
        return round_to(e(z), prec)


def find_real_zeros(e: EntireEvaluator, tmax, prec,
                    source: str = "weil-approx") -> ZeroList:
    """All sign-change zeros in (0, tmax], refined to width 10**-(digits-8).

    The scan step follows the local zeta-zero density (the approximant tracks
    it); if fewer zeros than the density heuristic predicts are found the scan
    is repeated at half the step.
    """
    prec = as_precision(prec)
    with prec.work():
        tmax = mpf(tmax)
        if tmax <= 0:
            raise DomainError("tmax must be positive")
        gap_hi = 2 * mp.pi / mp.log(max(tmax, mpf(20)) / (2 * mp.pi))
        step = gap_hi / 4
        expected = zero_count_estimate(tmax)
        brackets = []
        for _ in range(5):
            brackets = []
            t = step / 7  # avoid starting exactly at the origin zero of odd parts
            prev = e(t)
            while t < tmax:
                t2 = min(t + step, tmax)
                cur = e(t2)
                if prev * cur < 0:
                    brackets.append((t, t2, prev, cur))
                prev, t = cur, t2
            if len(brackets) >= int(mp.floor(expected)) - 1:
                break
            step /= 2
        else:
            raise IntegrationError(
                "scan density failure: %d sign changes against an estimate of %s"
                % (len(brackets), mp.nstr(expected, 6)))
        width = mpf(10) ** (-(prec.digits - 8))
        ordinates = []
        for (lo, hi, flo, fhi) in brackets:
            lo, hi, flo, fhi = _refine_bracket(e, lo, hi, flo, fhi, width)
            if flo * fhi >= 0 or hi - lo > width:
                raise IntegrationError("bracket refinement failed to certify")
            ordinates.append(round_to((lo + hi) / 2, prec))
    return ZeroList(ordinates, digits=prec.digits, source=source)


def argument_count(e: EntireEvaluator, rect, prec, max_retries: int = 3) -> int:
    """Number of zeros inside the rectangle (x0, x1, y0, y1) by the winding
    number of the boundary image, tracked with adaptive phase steps.

    If the function nearly vanishes on the contour the rectangle is perturbed
    outward by 1e-6 and the walk retried.
    """
    prec = as_precision(prec)
    with prec.work():
        x0, x1, y0, y1 = (mpf(v) for v in rect)
        if not (x0 < x1 and y0 < y1):
            raise DomainError("degenerate rectangle")
        bump = mpf(10) ** -6
        for attempt in range(max_retries):
            corners = [mpc(x0, y0), mpc(x1, y0), mpc(x1, y1), mpc(x0, y1),
                       mpc(x0, y0)]
            # pre-split edges well below the zero spacing so no segment can
            # hide a full phase turn from the principal-value test
            pieces = []
            for a, b in zip(corners[:-1], corners[1:]):
                steps = max(1, int(mp.ceil(abs(b - a) / mpf("0.5"))))
                for i in range(steps):
                    pieces.append((a + (b - a) * i / steps,
                                   a + (b - a) * (i + 1) / steps))
            try:
                total = mpf(0)
                for a, b in pieces:
                    total += _phase_change(e, a, b, prec)
                winding = total / (2 * mp.pi)
                rounded = int(mp.nint(winding))
                if abs(winding - rounded) > mpf("0.25"):
                    raise IntegrationError("winding number %s far from integral"
                                           % mp.nstr(winding, 8))
                return rounded
            except _ContourZero:
                x0 -= bump
                x1 += bump
                y0 -= bump
                y1 += bump
        raise IntegrationError("zero persists on the contour after %d retries"
                               % max_retries)


class _ContourZero(Exception):
    pass


def _phase_change(e: EntireEvaluator, a: mpc, b: mpc, prec: Precision,
                  max_depth: int = 40) -> mpf:
    """Total change of arg e(z) along the segment [a, b], by bisection until
    each step turns by less than pi/2."""
    floor = mpf(10) ** (-(prec.digits + 5))

    def val(z):
        v = e(z)
        if abs(v) < floor:
            raise _ContourZero()
        return v

    total = mpf(0)
    stack = [(a, val(a), b, val(b), 0)]
    while stack:
        za, fa, zb, fb, depth = stack.pop()
        dphi = mp.arg(fb / fa)
        if abs(dphi) <= mp.pi / 2:
            total += dphi
            continue
        if depth >= max_depth:
            raise IntegrationError("phase tracking failed to resolve the contour")
        zm = (za + zb) / 2
        fm = val(zm)
        stack.append((zm, fm, zb, fb, depth + 1))
        stack.append((za, fa, zm, fm, depth + 1))
    return total


# ----------------------------------------------------------------------
# difference table and reports
# ----------------------------------------------------------------------

@dataclass
class DifferenceTable:
    diffs: list
    first: mpf
    last: mpf
    largest: mpf
    median_head: mpf   # median of the first ten differences
    median_tail: mpf   # median of the last ten differences

    def row(self, i: int):
        return self.diffs[i]


def _median(vals):
    vals = sorted(vals)
    n = len(vals)
    return vals[n // 2] if n % 2 else (vals[n // 2 - 1] + vals[n // 2]) / 2


def difference_table(approx: ZeroList, reference: ZeroList,
                     count: int) -> DifferenceTable:
    """|approx_i - reference_i| for i = 1..count with summary statistics."""
    if len(approx) < count or len(reference) < count:
        raise DomainError("need %d entries, have %d and %d"
                          % (count, len(approx), len(reference)))
    digits = min(approx.digits, reference.digits)
    with mp.workdps(digits + GUARD_DIGITS):
        diffs = [abs(mpf(a) - mpf(r))
                 for a, r in zip(approx.ordinates[:count], reference.ordinates[:count])]
        head = diffs[:max(1, min(10, count))]
        tail = diffs[-max(1, min(10, count)):]
        return DifferenceTable(diffs=diffs, first=diffs[0], last=diffs[-1],
                               largest=max(diffs), median_head=_median(head),
                               median_tail=_median(tail))


def approximation_report(mode: MinimalMode, zeros: ZeroList,
                         table: DifferenceTable | None) -> dict:
    """JSON-ready record for a minimal-mode zero approximation run."""
    digits = mode.matrix.digits
    with mp.workdps(digits + GUARD_DIGITS):
        lam = mp.nstr(mode.matrix.interval.lam, min(digits, 30))
    rec = {
        "lambda": lam,
        "N": mode.matrix.order,
        "digits": digits,
        "epsilon": mp.nstr(mode.pair.epsilon, 12),
        "gap": mp.nstr(mode.pair.gap, 8) if mode.pair.gap != mp.inf else "inf",
        "even": mode.even,
        "verified": mode.verified,
        "zeros": [mp.nstr(g, digits) for g in zeros],
    }
    if table is not None:
        rec["diffs"] = [mp.nstr(d, 8) for d in table.diffs]
    return rec


def write_report_json(rec: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(rec, fh, indent=1)
        fh.write("\n")


def write_report_csv(rec: dict, path) -> None:
    """CSV variant, one row per zero."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "zero", "diff"])
        diffs = rec.get("diffs", [])
        for i, z in enumerate(rec["zeros"]):
            writer.writerow([i + 1, z, diffs[i] if i < len(diffs) else ""])
