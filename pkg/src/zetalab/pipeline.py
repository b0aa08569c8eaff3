"""End-to-end runs combining the core modules, with on-disk caching.

The central pipeline assembles the truncated Weil form, takes its minimal
mode, locates the real zeros of the mode's transform, and compares them with
the reference zeros of the Xi oracle.  Expensive intermediates (the matrix
and the reference list) are cached as portable text keyed by their defining
parameters.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from mpmath import mp, mpf

from .precision import Precision, as_precision, mpf_to_text
from .numeric import DomainError
from .weilform import (LogInterval, MinimalMode, WeilMatrix, assemble_matrix,
                       constrained_minimal_mode, matrix_cache_key, minimal_mode,
                       read_matrix_cache, write_matrix_cache)
from .xi import reference_zeros, zero_count_estimate
from .zeroapprox import (DifferenceTable, EntireEvaluator, approximation_report,
                         argument_count, difference_table, find_real_zeros)
from .zeros_io import ZeroList, read_zero_list, write_zero_list

REFERENCE_DIGITS_CAP = 100


def cached_reference_zeros(count: int, prec, cache_dir=None,
                           scheme: str = "gauss-legendre") -> ZeroList:
    prec = as_precision(prec)
    if cache_dir is None:
        return reference_zeros(count, prec, scheme=scheme)
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, "xizeros_%d_d%d_%s.txt"
                        % (count, prec.digits, scheme))
    if os.path.exists(path):
        zl = read_zero_list(path, digits=prec.digits, source="xi-reference")
        if len(zl) >= count:
            return zl.head(count)
    zl = reference_zeros(count, prec, scheme=scheme)
    write_zero_list(zl, path, comment="Xi-oracle reference ordinates")
    return zl


def cached_weil_matrix(interval: LogInterval, N: int, prec, cache_dir=None,
                       workers: int = 1) -> WeilMatrix:
    prec = as_precision(prec)
    if cache_dir is None:
        return assemble_matrix(interval, N, prec, workers=workers)
    os.makedirs(cache_dir, exist_ok=True)
    lam_text = mpf_to_text(interval.lam, prec)
    key = matrix_cache_key(lam_text, N, prec.digits)
    path = os.path.join(cache_dir, "weilmatrix_%s.txt" % key)
    if os.path.exists(path):
        return read_matrix_cache(path, prec)
    matrix = assemble_matrix(interval, N, prec, workers=workers)
    write_matrix_cache(matrix, path)
    return matrix


@dataclass
class WeilApproxResult:
    mode: MinimalMode
    zeros: ZeroList
    reference: ZeroList | None
    table: DifferenceTable | None
    rectangle_count: int | None = None
    rectangle_real_count: int | None = None

    def report(self) -> dict:
        rec = approximation_report(self.mode, self.zeros, self.table)
        if self.rectangle_count is not None:
            rec["rectangle_zero_count"] = self.rectangle_count
            rec["rectangle_real_zero_count"] = self.rectangle_real_count
        return rec


def weil_approx_run(prec, pmax=None, lam=None, N: int = 60, tmax=None,
                    count: int | None = None, cache_dir=None, workers: int = 1,
                    constrained: bool = False, compare: bool = True,
                    check_rectangle: bool = True) -> WeilApproxResult:
    """Assemble, minimize, transform, locate zeros, compare with references.

    Exactly one of ``pmax`` (support [1, pmax], the multiplicative recentring
    gives lambda = sqrt(pmax)) and ``lam`` must be given.
    """
    prec = as_precision(prec)
    if (pmax is None) == (lam is None):
        raise DomainError("give exactly one of pmax and lambda")
    interval = (LogInterval.from_pmax(pmax, prec) if pmax is not None
                else LogInterval.from_lambda(lam, prec))
    if constrained:
        mode = constrained_minimal_mode(interval, N, prec, workers=workers)
    else:
        matrix = cached_weil_matrix(interval, N, prec, cache_dir=cache_dir,
                                    workers=workers)
        mode = minimal_mode(matrix)
    evaluator = EntireEvaluator.from_mode(mode)
    with prec.work():
        if tmax is None:
            if count is None:
                count = 10
            t = mpf(30)
            while zero_count_estimate(t) < count + 1:
                t *= mpf("1.05")
            tmax = t
        tmax = mpf(tmax)
    zeros = find_real_zeros(evaluator, tmax, prec)
    rect = rect_real = None
    if check_rectangle:
        hi = float(min(mpf(50), tmax))
        rect = argument_count(evaluator, (0, hi, -1, 1), prec)
        # equality with the count of located real zeros is the computable
        # form of the reality property for gap-certified even modes
        rect_real = sum(1 for g in zeros if float(g) <= hi)
    if count is not None:
        zeros = zeros.head(min(count, len(zeros)))
    reference = table = None
    if compare and len(zeros):
        ref_prec = Precision(min(prec.digits, REFERENCE_DIGITS_CAP))
        reference = cached_reference_zeros(len(zeros), ref_prec,
                                           cache_dir=cache_dir)
        table = difference_table(zeros, reference, len(zeros))
    return WeilApproxResult(mode=mode, zeros=zeros, reference=reference,
                            table=table, rectangle_count=rect,
                            rectangle_real_count=rect_real)
