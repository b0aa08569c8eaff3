#!/usr/bin/env python3
"""Generate the imported zeta-zero tables shipped under data/.

Two independent mpmath facilities are used, neither of which shares any code
with the package's own theta-kernel oracle:

* ``mp.zetazero`` (Riemann-Siegel + Gram/Rosser bookkeeping) for a short,
  high-precision table used as an import-comparison oracle in tests;
* a float-precision ``fp.siegelz`` sign-change scan, validated blockwise
  against ``mp.nzeros`` so no zero is missed (close pairs re-scanned at
  finer steps), for the bulk statistics tables.

Usage: python tools/make_zero_tables.py [--bulk N] [--head N] [--out DIR]
"""

import argparse
import math
import sys
import time

from mpmath import fp, mp


def head_table(count, dps, path):
    mp.dps = dps + 10
    rows = []
    t0 = time.time()
    for n in range(1, count + 1):
        rows.append(mp.nstr(mp.zetazero(n).imag, dps, strip_zeros=True))
        if n % 20 == 0:
            print("  zetazero %d/%d (%.0fs)" % (n, count, time.time() - t0), flush=True)
    with open(path, "w") as fh:
        fh.write("# first %d nontrivial zeta zero ordinates, %d digits\n" % (count, dps))
        fh.write("# generated by mpmath.zetazero (Riemann-Siegel)\n")
        fh.write("\n".join(rows) + "\n")
    print("wrote %s" % path)


def _refine(a, b, fa):
    for _ in range(80):
        m = 0.5 * (a + b)
        fm = fp.siegelz(m)
        if fm == 0:
            return m
        if fa * fm < 0:
            b = m
        else:
            a, fa = m, fm
        if b - a < 1e-11:
            break
    return 0.5 * (a + b)


def bulk_table(count, path):
    """Scan Z(t) sign changes; every block is validated against mp.nzeros.

    Progress is flushed per block to ``path.partial`` so an interrupted run
    can resume from the last certified block.
    """
    t0 = time.time()
    zeros = []
    t = 10.0
    block_target = 2000
    mp.dps = 15
    base_count = 0  # zeros below current t, certified
    partial = path + ".partial"
    if __import__("os").path.exists(partial):
        with open(partial) as fh:
            for line in fh:
                if not line.startswith("#"):
                    zeros.append(float(line))
        if zeros:
            base_count = len(zeros)
            t = zeros[-1] + 1e-9
            print("  resuming from %d zeros (t=%.2f)" % (base_count, t), flush=True)
    while len(zeros) < count:
        # pick the block end so it contains about block_target zeros
        t_end = t
        dens_step = 50.0
        need = base_count + min(block_target, count - len(zeros)) + 5
        while fp.siegeltheta(t_end) / math.pi + 1 < need:  # N(t) ~ theta/pi + 1
            t_end += dens_step
        found = []
        step = 2 * math.pi / math.log(t_end / (2 * math.pi)) / 8
        while True:
            found.clear()
            tt = t
            prev = fp.siegelz(tt)
            while tt < t_end:
                nxt = min(tt + step, t_end)
                cur = fp.siegelz(nxt)
                if prev * cur < 0:
                    found.append(_refine(tt, nxt, prev))
                prev, tt = cur, nxt
            expected = int(mp.nzeros(t_end)) - base_count
            if len(found) == expected:
                break
            if len(found) > expected:
                raise RuntimeError("scan found %d > expected %d in (%g, %g)"
                                   % (len(found), expected, t, t_end))
            step /= 4
            if step < 1e-6:
                raise RuntimeError("cannot separate zeros in (%g, %g)" % (t, t_end))
        zeros.extend(found)
        base_count += len(found)
        t = t_end
        with open(partial, "a") as fh:
            fh.write("\n".join("%.11f" % z for z in found) + "\n")
        print("  %d zeros to t=%.1f (%.0fs)" % (len(zeros), t, time.time() - t0),
              flush=True)
    zeros = zeros[:count]
    with open(path, "w") as fh:
        fh.write("# first %d nontrivial zeta zero ordinates (float precision)\n" % count)
        fh.write("# generated by an fp.siegelz scan validated against mp.nzeros\n")
        fh.write("\n".join("%.11f" % z for z in zeros) + "\n")
    print("wrote %s" % path)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--head", type=int, default=0, help="high-precision head table size")
    ap.add_argument("--head-dps", type=int, default=50)
    ap.add_argument("--bulk", type=int, default=0, help="float-precision bulk table size")
    ap.add_argument("--out", default="data")
    args = ap.parse_args()
    if args.head:
        head_table(args.head, args.head_dps,
                   "%s/zeta_zeros_head_%d_d%d.txt" % (args.out, args.head, args.head_dps))
    if args.bulk:
        bulk_table(args.bulk, "%s/zeta_zeros_%d.txt" % (args.out, args.bulk))


if __name__ == "__main__":
    sys.exit(main())
