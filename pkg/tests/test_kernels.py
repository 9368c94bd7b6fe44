"""Pure-Python and compiled term kernels must agree bit for bit."""

import random

import pytest

from adjkit import _termkernels_py as py
from adjkit import kernels

try:
    from adjkit import _termkernels_c as ck
except ImportError:
    ck = None

needs_compiled = pytest.mark.skipif(ck is None,
                                    reason="compiled kernels not built")


def rand_terms(rng, nv, max_terms, deg=3, cmax=50):
    out = {}
    for _ in range(rng.randint(0, max_terms)):
        e = tuple(rng.randint(0, deg) for _ in range(nv))
        out[e] = rng.randint(-cmax, cmax) or 1
    return out


def mod_terms(t, p):
    return {e: c % p for e, c in t.items() if c % p}


@needs_compiled
def test_basic_kernels_agree():
    rng = random.Random(0)
    for _ in range(120):
        nv = rng.randint(1, 8)
        a = rand_terms(rng, nv, 12)
        b = rand_terms(rng, nv, 12)
        assert py.add_terms(a, b) == ck.add_terms(a, b)
        assert py.neg_terms(a) == ck.neg_terms(a)
        assert py.scale_terms(a, 7) == ck.scale_terms(a, 7)
        assert py.mul_terms(a, b) == ck.mul_terms(a, b)
        acc1, acc2 = dict(a), dict(a)
        py.fma_terms(acc1, a, b, True)
        ck.fma_terms(acc2, a, b, True)
        assert acc1 == acc2


@needs_compiled
def test_mod_kernels_agree():
    rng = random.Random(1)
    for p in (2, 3, 31, 2_147_483_647):
        for _ in range(40):
            nv = rng.randint(1, 6)
            a = mod_terms(rand_terms(rng, nv, 10), p)
            b = mod_terms(rand_terms(rng, nv, 10), p)
            assert py.add_terms_mod(a, b, p) == ck.add_terms_mod(a, b, p)
            assert py.mul_terms_mod(a, b, p) == ck.mul_terms_mod(a, b, p)
            acc1, acc2 = dict(a), dict(a)
            py.fma_terms_mod(acc1, a, b, False, p)
            ck.fma_terms_mod(acc2, a, b, False, p)
            assert acc1 == acc2


@needs_compiled
def test_division_step_agrees():
    rng = random.Random(2)
    for _ in range(60):
        nv = rng.randint(1, 6)
        rem1 = rand_terms(rng, nv, 10)
        b = rand_terms(rng, nv, 6)
        if not b:
            continue
        rem2 = dict(rem1)
        exps = tuple(rng.randint(0, 2) for _ in range(nv))
        n1 = py.sub_scaled_terms(rem1, exps, 3, b)
        n2 = ck.sub_scaled_terms(rem2, exps, 3, b)
        assert rem1 == rem2
        assert sorted(n1) == sorted(n2)


@needs_compiled
def test_det_engines_agree():
    rng = random.Random(3)
    for n in (2, 3, 4, 5):
        grid = [[rand_terms(rng, 6, 3, 2, 9) for _ in range(n)]
                for _ in range(n)]
        reference = py.det_laplace_terms(grid, 6)
        assert ck.det_laplace_terms(grid, 6) == reference
        assert py.packed_det_laplace(grid, 6) == reference
        assert ck.packed_det_laplace(grid, 6) == reference
        p = 31
        gm = [[mod_terms(t, p) for t in row] for row in grid]
        ref_mod = py.det_laplace_terms_mod(gm, 6, p)
        assert ck.det_laplace_terms_mod(gm, 6, p) == ref_mod
        assert py.packed_det_laplace(gm, 6, p) == ref_mod
        assert ck.packed_det_laplace(gm, 6, p) == ref_mod


@needs_compiled
def test_packed_multiply_agrees():
    rng = random.Random(4)
    for _ in range(40):
        a = rand_terms(rng, 5, 20, 3, 9)
        b = rand_terms(rng, 5, 20, 3, 9)
        assert py.packed_mul_terms(a, b, 5) == ck.packed_mul_terms(a, b, 5)
        assert ck.packed_mul_terms(a, b, 5) == py.mul_terms(a, b)


@needs_compiled
def test_packed_rejects_out_of_range_exponents():
    with pytest.raises((OverflowError, ValueError)):
        ck.packed_mul_terms({(300,): 1}, {(1,): 1}, 1)


def test_dispatcher_exposes_an_impl():
    assert kernels.IMPL in ("py", "c")
    # the packed safety gate must match the active implementation
    if kernels.IMPL == "c":
        assert kernels.PACKED_COEFF_LIMIT == 1 << 62
    else:
        assert kernels.PACKED_COEFF_LIMIT is None


def test_results_independent_of_kernel_choice():
    # polynomials built with the dispatcher match a pure-python rebuild
    from adjkit import PolyRing
    from adjkit.polyring import Polynomial
    R = PolyRing.generic(3)
    rows = [[R.var(f"x_{i}_{j}").terms for j in range(1, 4)]
            for i in range(1, 4)]
    via_dispatcher = Polynomial(R, kernels.det_laplace_terms(rows, R.nvars))
    via_pure = Polynomial(R, py.det_laplace_terms(rows, R.nvars))
    assert via_dispatcher == via_pure
    assert str(via_dispatcher) == str(via_pure)
