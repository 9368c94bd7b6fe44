#!/usr/bin/env python3
"""Benchmark: pure-Python vs compiled term kernels on the hot workloads.

Runs each workload against both kernel implementations (when the compiled
extension is available) and prints a timing table.  Workloads mirror the
package's real hot paths: symbolic determinants, determinant powers, the
alternating sandwich with its exact divisions, and a mod-p determinant.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import sys
import time

from adjkit import _termkernels_py as kpy
from adjkit.polyring import PolyRing, Polynomial, packed_safe_det

try:
    from adjkit import _termkernels_c as kc
except ImportError:
    kc = None


def generic_rows(n, ring):
    return [[ring.var(f"x_{i}_{j}").terms for j in range(1, n + 1)]
            for i in range(1, n + 1)]


def det_terms(impl, rows, nvars, packed):
    if packed:
        return impl.packed_det_laplace(rows, nvars)
    return impl.det_laplace_terms(rows, nvars)


def bench(label, fn, repeat=1):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def workloads(quick):
    R4 = PolyRing.generic(4)
    R5 = PolyRing.generic(5)
    rows4 = generic_rows(4, R4)
    rows5 = generic_rows(5, R5)

    def w_det4(impl):
        return det_terms(impl, rows4, R4.nvars, packed=True)

    def w_det5(impl):
        return det_terms(impl, rows5, R5.nvars, packed=True)

    def w_det5_tuple(impl):
        return impl.det_laplace_terms(rows5, R5.nvars)

    d5 = Polynomial(R5, kpy.det_laplace_terms(rows5, R5.nvars))
    d5_sq = (d5 * d5).terms

    def w_pow(impl):
        # det5^3 via det5^2 * det5: 745k monomial pairs
        return impl.packed_mul_terms(d5_sq, d5.terms, R5.nvars)

    # adjugate-determinant workload: 4x4 matrix of 6-term cofactors
    from adjkit import GenericContext
    ctx4 = GenericContext(4)
    adj_rows = [[e.terms for e in ctx4.adjX.row_list(i)] for i in range(4)]

    def w_det_adj4(impl):
        return det_terms(impl, adj_rows, ctx4.ring.nvars, packed=True)

    def w_division(impl):
        # the n=4 symplectic sandwich: 16 exact divisions by det(X)
        import adjkit.kernels as K
        saved = (K.sub_scaled_terms, K.fma_terms)
        K.sub_scaled_terms = impl.sub_scaled_terms
        K.fma_terms = impl.fma_terms
        try:
            from adjkit import quotient_matrix, standard_symplectic
            return quotient_matrix(ctx4, standard_symplectic(4))
        finally:
            K.sub_scaled_terms, K.fma_terms = saved

    Rp = PolyRing.generic(4, p=2_147_483_647)
    rows_p = generic_rows(4, Rp)

    def w_det4_modp(impl):
        return impl.packed_det_laplace(rows_p, Rp.nvars, Rp.p)

    out = [
        ("det(X) n=4 (packed)", w_det4, 3),
        ("det(X) n=5 (packed)", w_det5, 3),
        ("det(X) n=5 (tuple kernels)", w_det5_tuple, 3),
        ("det(adj X) n=4 = det^3, 2008 terms", w_det_adj4, 3),
        ("det5^2 * det5 (745k pairs)", w_pow, 1),
        ("sandwich quotient n=4 (16 divisions)", w_division, 1),
        ("det(X) n=4 mod p (packed)", w_det4_modp, 3),
    ]
    if not quick:
        d5_cube = Polynomial(R5, kpy.packed_mul_terms(d5_sq, d5.terms, R5.nvars))

        def w_pow4(impl):
            # det5^4: 15.2M pairs, 2.2M-term result
            return impl.packed_mul_terms(d5_cube.terms, d5.terms, R5.nvars)

        out.append(("det5^3 * det5 (15.2M pairs)", w_pow4, 1))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="skip the 15M-pair multiply")
    args = ap.parse_args()

    impls = [("py", kpy)]
    if kc is not None:
        impls.append(("c", kc))
    else:
        print("compiled kernels not available; benchmarking pure Python only",
              file=sys.stderr)

    rows = []
    for label, fn, repeat in workloads(args.quick):
        times = {}
        ref = None
        for name, impl in impls:
            dt, result = bench(label, lambda impl=impl: fn(impl), repeat)
            times[name] = dt
            if ref is None:
                ref = result
            elif isinstance(ref, dict):
                assert result == ref, f"kernel mismatch in {label}"
        rows.append((label, times))

    width = max(len(r[0]) for r in rows) + 2
    header = f"{'workload':<{width}}" + "".join(f"{name:>12}" for name, _ in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, times in rows:
        line = f"{label:<{width}}"
        for name, _ in impls:
            line += f"{times[name] * 1000:>10.1f}ms"
        if len(impls) == 2 and times["c"] > 0:
            line += f"{times['py'] / times['c']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
