"""Generate src/rational/exp_table.rs: best-uniform rational approximants of exp(-x) on [0, inf).

Poles come from the Caratheodory-Fejer construction on the transplanted Chebyshev
expansion of exp(x) on (-inf, 0]; residues are then refined by a Lawson iteration in
extended precision (linear minimax with the poles fixed).

    python3 gen_exp_table.py                 # full computation (several minutes)
    python3 gen_exp_table.py --from-json t   # re-emit Rust from a cached table
"""
import argparse
import json
import sys

import mpmath as mp
import numpy as np
from scipy.linalg import hankel, svd

SCALE = 9.0


def cf_poles(n, nterms=75, nfft=1024):
    w = np.exp(2j * np.pi * np.arange(nfft) / nfft)
    t = w.real
    F = np.exp(SCALE * (t - 1) / (t + 1 + 1e-16))
    c = np.real(np.fft.fft(F)) / nfft
    _, _, vh = svd(hankel(c[1 : nterms + 1]))
    roots = np.roots(vh[n, :])
    q = roots[np.abs(roots) > 1]
    assert len(q) == n, (n, len(q))
    return SCALE * (q - 1) ** 2 / (q + 1) ** 2


def sample_x(npts):
    th = [mp.pi * (j + 0.5) / npts for j in range(npts)]
    xs = [SCALE * (mp.cos(a) - 1) / (mp.cos(a) + 1) for a in th]
    xs += [-8 * mp.mpf(j) / 160 for j in range(161)]
    return xs


def lawson(zk, npts=260, iters=50):
    reps = sorted([complex(z) for z in zk if z.imag > 0], key=lambda z: z.real)
    xs = sample_x(npts)
    m = len(xs)
    rows = []
    for x in xs:
        row = [mp.mpf(1)]
        for z in reps:
            g = 1 / (x - mp.mpc(z.real, z.imag))
            row += [2 * g.real, -2 * g.imag]
        rows.append(row)
    A = mp.matrix(rows)
    b = mp.matrix([mp.exp(x) for x in xs])
    wts = [mp.mpf(1) / m] * m
    for _ in range(iters):
        Aw = mp.matrix(m, A.cols)
        bw = mp.matrix(m, 1)
        for i in range(m):
            s = mp.sqrt(wts[i])
            for j in range(A.cols):
                Aw[i, j] = A[i, j] * s
            bw[i] = b[i] * s
        coef, _ = mp.qr_solve(Aw, bw)
        err = [b[i] - sum(A[i, j] * coef[j] for j in range(A.cols)) for i in range(m)]
        tot = sum(wts[i] * abs(err[i]) for i in range(m))
        wts = [wts[i] * abs(err[i]) / tot for i in range(m)]
    e = max(abs(v) for v in err)
    cs = [mp.mpc(coef[1 + 2 * k], coef[2 + 2 * k]) for k in range(len(reps))]
    return reps, cs, coef[0], e


def compute(kmax):
    mp.mp.dps = 24
    out = {}
    for k in range(1, kmax + 1):
        reps, cs, const, e = lawson(cf_poles(2 * k))
        # exp(-x): negate poles and residues, keep one pole per conjugate pair with doubled residue.
        out[str(k)] = dict(
            poles=[(-z.real, -z.imag) for z in reps],
            coeffs=[(float(-2 * c.real), float(-2 * c.imag)) for c in cs],
            minimax=float(e),
            dropped_constant=float(const),
        )
        print(k, float(e), file=sys.stderr)
    return out


def emit(table):
    lines = [
        "// Generated by tools/gen_exp_table.py; do not edit.",
        "",
        "pub(crate) type Pairs = &'static [(f64, f64)];",
        "",
        "/// (poles, halved coefficients) per K, as (re, im) pairs.",
        "pub(crate) const EXP_NEG: &[(Pairs, Pairs)] = &[",
    ]
    for k in sorted(table, key=int):
        row = table[k]
        fmt = lambda ps: ", ".join(f"({a!r}, {b!r})" for a, b in ps)
        lines.append(f"    // K = {k}")
        lines.append(f"    (&[{fmt(row['poles'])}],")
        lines.append(f"     &[{fmt(row['coeffs'])}]),")
    lines.append("];")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--kmax", type=int, default=8)
    ap.add_argument("--from-json")
    ap.add_argument("--dump-json")
    ap.add_argument("--out", default="src/rational/exp_table.rs")
    args = ap.parse_args()
    if args.from_json:
        table = json.load(open(args.from_json))
    else:
        table = compute(args.kmax)
    if args.dump_json:
        json.dump(table, open(args.dump_json, "w"), indent=1)
    open(args.out, "w").write(emit(table))
