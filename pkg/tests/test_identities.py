"""Identity registry, the route-aware compound determinant checks, and the
verification suites that back the CLI."""

import random

import pytest

from adjkit.identities import (REGISTRY, SUITE, compound_det_check,
                               complement_reindexing, rand_gfp_singular,
                               run_modp_suite, run_symbolic_suite)
from adjkit.matrix import index_subsets


def test_registry_covers_the_required_identities():
    for name in ("fundamental", "multiplicativity", "conjugation",
                 "sandwich_divisibility", "factor_product", "compound_det"):
        assert name in REGISTRY
        assert REGISTRY[name].modp is not None
    assert REGISTRY["corrupted_adj_det"].expected_failure


def test_symbolic_suite_passes_n2_to_n4():
    for n in (2, 3, 4):
        report = run_symbolic_suite(n, seed=0)
        assert report["passed"], report


def test_symbolic_suite_detects_corruption():
    report = run_symbolic_suite(3, seed=0, include_corrupted=True)
    assert not report["passed"]
    bad = [r for r in report["reports"] if r["identity"] == "corrupted_adj_det"]
    assert bad and not bad[0]["passed"] and bad[0]["expected_failure"]


def test_modp_suite_small():
    report = run_modp_suite(5, 31, trials=10, seed=1)
    assert report["passed"], report


def test_modp_suite_odd_n_skips_factor():
    report = run_modp_suite(5, 31, trials=5, seed=2)
    names = [r["identity"] for r in report["reports"]]
    assert "factor_product" not in names


def test_compound_routes(ctx4):
    rep = compound_det_check(ctx4, 2)
    assert rep["route"] == "direct" and rep["passed"]


def test_compound_route_selection():
    from adjkit.identities import _compound_direct_feasible
    assert _compound_direct_feasible(4, 2)
    assert _compound_direct_feasible(5, 2)
    assert _compound_direct_feasible(5, 4)
    assert not _compound_direct_feasible(5, 3)  # det^6 is ~1.6e8 terms
    assert not _compound_direct_feasible(6, 2)


def test_complement_reindexing_is_a_signed_permutation():
    for n, m in ((4, 2), (5, 2), (5, 3)):
        perm, signs = complement_reindexing(n, m)
        assert sorted(perm) == list(range(len(index_subsets(n, m))))
        assert set(signs) <= {1, -1}


def test_reindexing_ties_complement_to_compound(ctx4):
    # D_m = diag(s) P cmp_{n-m} P^T diag(s) entrywise
    for m in (1, 2, 3):
        d = ctx4.X.complementary_compound(m)
        cmp_c = ctx4.X.compound(4 - m)
        perm, signs = complement_reindexing(4, m)
        for i in range(d.rows):
            for j in range(d.cols):
                expect = cmp_c[perm[i], perm[j]]
                if signs[i] * signs[j] < 0:
                    expect = -expect
                assert d[i, j] == expect


def test_singular_sampler_has_corank_one():
    rng = random.Random(3)
    for _ in range(5):
        m = rand_gfp_singular(rng, 6, 31)
        assert m.rank() == 5


def test_suite_is_deterministic():
    a = run_symbolic_suite(3, seed=5)
    b = run_symbolic_suite(3, seed=5)
    assert a == b
