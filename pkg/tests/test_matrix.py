"""Matrix layer: products, determinants (both routes), adjugates,
compounds, rank, characteristic polynomials, JSON round trips."""

import json
import random
from fractions import Fraction
from math import comb

import pytest

from adjkit import GF, QQ, ZZ, Matrix, PolyRing, PolynomialDomain
from adjkit.factor import random_unimodular


def rand_int_matrix(rng, n, lo=-9, hi=9):
    return Matrix.from_rows(ZZ, [[rng.randint(lo, hi) for _ in range(n)]
                                 for _ in range(n)])


# ---------------------------------------------------------------------------
# products and transpose
# ---------------------------------------------------------------------------

def test_identity_multiplication():
    rng = random.Random(0)
    m = rand_int_matrix(rng, 3)
    assert Matrix.identity(ZZ, 3) * m == m
    assert m * Matrix.identity(ZZ, 3) == m


def test_hand_multiplication():
    a = Matrix.from_rows(ZZ, [[1, 2], [3, 4]])
    b = Matrix.from_rows(ZZ, [[0, 1], [1, 1]])
    assert (a * b).to_rows() == [[2, 3], [4, 7]]


def test_generic_product_identity(ctx2):
    det_i = ctx2.identity.scale(ctx2.detX)
    assert ctx2.X * ctx2.adjX == det_i


def test_dimension_mismatch():
    a = Matrix.from_rows(ZZ, [[1, 2], [3, 4]])
    b = Matrix.from_rows(ZZ, [[1, 2, 3]])
    with pytest.raises(ValueError):
        a * b


def test_domain_mismatch():
    a = Matrix.from_rows(ZZ, [[1]])
    b = Matrix.from_rows(QQ, [[Fraction(1)]])
    with pytest.raises(ValueError):
        a * b


def test_transpose_involution():
    rng = random.Random(1)
    m = rand_int_matrix(rng, 4)
    assert m.transpose().transpose() == m
    assert Matrix.identity(ZZ, 4).transpose() == Matrix.identity(ZZ, 4)
    skew = Matrix.from_rows(ZZ, [[0, 1], [-1, 0]])
    assert skew.transpose().to_rows() == [[0, -1], [1, 0]]


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------

def test_det_identity_and_leibniz(ctx2, ctx3):
    for n in (1, 2, 3, 4):
        assert Matrix.identity(ZZ, n).det_laplace() == 1
    assert str(ctx2.detX) == "x_1_1*x_2_2 - x_1_2*x_2_1"
    assert len(ctx3.detX.terms) == 6


def test_bareiss_agrees_with_laplace_on_200_random():
    rng = random.Random(2)
    for _ in range(200):
        m = rand_int_matrix(rng, 5)
        assert m.det_bareiss() == m.det_laplace()


def test_bareiss_diag_and_singular():
    assert Matrix.diagonal(ZZ, [2, 3, 5]).det_bareiss() == 30
    rank1 = Matrix.from_rows(ZZ, [[1, 2], [2, 4]])
    assert rank1.det_bareiss() == 0


def test_bareiss_agrees_symbolically(ctx3):
    assert ctx3.X.det_bareiss() == ctx3.detX
    rng = random.Random(3)
    pd = ctx3.domain
    ring = ctx3.ring
    for _ in range(5):
        m = Matrix.from_rows(pd, [
            [ring.var(f"x_{1 + rng.randrange(3)}_{1 + rng.randrange(3)}")
             + ring.const(rng.randint(-2, 2)) for _ in range(3)]
            for _ in range(3)])
        assert m.det_bareiss() == m.det_laplace()


def test_bareiss_agrees_on_generic_n5():
    # bare ring, no context: just the two determinant routes on X_5
    ring = PolyRing.generic(5)
    pd = PolynomialDomain(ring)
    x = Matrix.from_rows(pd, [[ring.var(f"x_{i}_{j}") for j in range(1, 6)]
                              for i in range(1, 6)])
    assert x.det_bareiss() == x.det_laplace()


def test_gauss_det_agrees_with_bareiss():
    rng = random.Random(4)
    dom = GF(97)
    for _ in range(40):
        m = Matrix.from_rows(dom, [[rng.randrange(97) for _ in range(5)]
                                   for _ in range(5)])
        assert m._det_gauss() == m.det_bareiss()


def test_non_square_det_rejected():
    m = Matrix.from_rows(ZZ, [[1, 2, 3], [4, 5, 6]])
    with pytest.raises(ValueError):
        m.det_laplace()
    with pytest.raises(ValueError):
        m.det_bareiss()


# ---------------------------------------------------------------------------
# adjugate
# ---------------------------------------------------------------------------

def test_adjugate_2x2_formula():
    a = Matrix.from_rows(ZZ, [[7, 3], [2, 5]])
    assert a.adjugate().to_rows() == [[5, -3], [-2, 7]]


def test_adjugate_identity_and_1x1():
    assert Matrix.identity(ZZ, 4).adjugate() == Matrix.identity(ZZ, 4)
    one = Matrix.from_rows(ZZ, [[17]])
    assert one.adjugate().to_rows() == [[1]]
    assert (one * one.adjugate()).to_rows() == [[17]]


def test_adjugate_fundamental_identity_random():
    rng = random.Random(5)
    for n in (2, 3, 4, 5):
        for _ in range(10):
            a = rand_int_matrix(rng, n)
            adj = a.adjugate()
            det_i = Matrix.identity(ZZ, n).scale(a.det_bareiss())
            assert a * adj == det_i
            assert adj * a == det_i


def test_det_adjugate_power_law(ctx3):
    assert ctx3.adjX.det_laplace() == ctx3.detX * ctx3.detX
    rng = random.Random(6)
    for n in (2, 3, 4):
        a = rand_int_matrix(rng, n)
        assert a.adjugate().det_bareiss() == a.det_bareiss() ** (n - 1)


def test_adjugate_multiplicativity_random():
    rng = random.Random(7)
    for n in (2, 3, 4, 5):
        for _ in range(8):
            a, b = rand_int_matrix(rng, n), rand_int_matrix(rng, n)
            assert (a * b).adjugate() == b.adjugate() * a.adjugate()


def test_adjugate_conjugation_random():
    rng = random.Random(8)
    for n in (2, 3, 4):
        for _ in range(8):
            a = rand_int_matrix(rng, n)
            u = random_unimodular(n, rng)
            u_inv = u.adjugate()  # det(u) = 1
            assert u * u_inv == Matrix.identity(ZZ, n)
            assert (u * a * u_inv).adjugate() == u * a.adjugate() * u_inv


def test_field_adjugate_rank_deficient():
    dom = GF(31)
    # rank n-2: adjugate vanishes
    u = Matrix.from_rows(dom, [[1, 2], [3, 4], [5, 6], [7, 8]])
    v = Matrix.from_rows(dom, [[1, 0, 1, 0], [0, 1, 0, 1]])
    m = u * v
    assert m.adjugate() == Matrix.zeros(dom, 4, 4)


# ---------------------------------------------------------------------------
# compound matrices
# ---------------------------------------------------------------------------

def test_compound_edge_orders(ctx3):
    assert ctx3.X.compound(1) == ctx3.X
    top = ctx3.X.compound(3)
    assert (top.rows, top.cols) == (1, 1)
    assert top[0, 0] == ctx3.detX
    with pytest.raises(ValueError):
        ctx3.X.compound(0)
    with pytest.raises(ValueError):
        ctx3.X.compound(4)


def test_compound_of_identity():
    for n, m in ((3, 2), (4, 2), (5, 3)):
        eye = Matrix.identity(ZZ, n)
        assert eye.compound(m) == Matrix.identity(ZZ, comb(n, m))


def test_sylvester_franke_small(ctx3, ctx4):
    for ctx in (ctx3, ctx4):
        for m in range(1, ctx.n + 1):
            e = comb(ctx.n - 1, m - 1)
            assert ctx.X.compound(m).det_laplace() == ctx.det_power(e)


def test_compound_multiplicativity_numeric():
    rng = random.Random(9)
    for n, m in ((4, 2), (5, 2), (5, 3)):
        a = rand_int_matrix(rng, n, -4, 4)
        b = rand_int_matrix(rng, n, -4, 4)
        assert (a * b).compound(m) == a.compound(m) * b.compound(m)


def test_complementary_compound_product(ctx3, ctx4):
    for ctx in (ctx3, ctx4):
        for m in range(1, ctx.n + 1):
            cmp_m = ctx.X.compound(m)
            d = ctx.X.complementary_compound(m)
            big_n = comb(ctx.n, m)
            ident = Matrix.identity(ctx.domain, big_n).scale(ctx.detX)
            assert cmp_m * d.transpose() == ident


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------

def test_rank_basics():
    assert Matrix.identity(QQ, 4).rank() == 4
    diag = Matrix.diagonal(QQ, [Fraction(0), Fraction(1), Fraction(1), Fraction(1)])
    assert diag.rank() == 3


def test_rank_of_adjugate_at_corank_one():
    rng = random.Random(10)
    dom = GF(101)
    for n in (3, 4, 5):
        u = Matrix.from_rows(dom, [[rng.randrange(101) for _ in range(n - 1)]
                                   for _ in range(n)])
        v = Matrix.from_rows(dom, [[rng.randrange(101) for _ in range(n)]
                                   for _ in range(n - 1)])
        a = u * v
        if a.rank() != n - 1:
            continue
        assert a.adjugate().rank() == 1


def test_rank_of_adjugate_rational_singular():
    rng = random.Random(20)
    for n in (3, 4):
        found = 0
        while found < 3:
            u = Matrix.from_rows(QQ, [[Fraction(rng.randint(-3, 3))
                                       for _ in range(n - 1)] for _ in range(n)])
            v = Matrix.from_rows(QQ, [[Fraction(rng.randint(-3, 3))
                                       for _ in range(n)] for _ in range(n - 1)])
            a = u * v
            if a.rank() != n - 1:
                continue
            assert a.det() == 0
            assert a.adjugate().rank() == 1
            found += 1


def test_rank_rejects_polynomial_matrices(ctx2):
    with pytest.raises(TypeError):
        ctx2.X.rank()


# ---------------------------------------------------------------------------
# characteristic polynomial det(tI + A)
# ---------------------------------------------------------------------------

def test_char_poly_zero_matrix():
    cp = Matrix.zeros(ZZ, 3, 3).char_poly_shifted()
    ring = cp.ring
    assert cp == ring.var("t") ** 3


def test_char_poly_diag_0111():
    a = Matrix.diagonal(ZZ, [0, 1, 1, 1])
    cp = a.char_poly_shifted()
    t = cp.ring.var("t")
    assert cp == t * (t + 1) ** 3
    assert cp.t_valuation() == 1


def test_char_poly_valuation_counts_zero_eigenvalues():
    for diag, mult in (([0, 0, 2], 2), ([1, 2, 3], 0), ([0, 5, 0], 2)):
        a = Matrix.diagonal(ZZ, diag)
        assert a.char_poly_shifted().t_valuation() == mult


def test_char_poly_monic_with_det_constant_term():
    rng = random.Random(11)
    for n in (2, 3, 4):
        a = rand_int_matrix(rng, n)
        cp = a.char_poly_shifted()
        assert cp.total_degree() == n
        lead_e, lead_c = cp.leading()
        assert lead_c == 1 and lead_e == (n,)
        assert cp.constant_term() == a.det_bareiss()


# ---------------------------------------------------------------------------
# JSON round trips
# ---------------------------------------------------------------------------

def test_json_round_trip_integer():
    rng = random.Random(12)
    m = rand_int_matrix(rng, 3)
    obj = json.loads(json.dumps(m.to_json()))
    assert Matrix.from_json(obj, ZZ) == m
    assert Matrix.from_json(obj, ZZ).to_json() == m.to_json()


def test_json_round_trip_rational():
    m = Matrix.from_rows(QQ, [[Fraction(1, 2), Fraction(-3)],
                              [Fraction(0), Fraction(7, 5)]])
    obj = json.loads(json.dumps(m.to_json()))
    back = Matrix.from_json(obj, QQ)
    assert back == m
    assert back.to_json() == m.to_json()
    assert obj["entries"][0][0] == "1/2"
    assert obj["entries"][0][1] == -3  # integral rationals stay ints


def test_json_round_trip_polynomial(ctx2):
    obj = json.loads(json.dumps(ctx2.adjX.to_json()))
    back = Matrix.from_json(obj, ctx2.domain)
    assert back == ctx2.adjX
    assert back.to_json() == ctx2.adjX.to_json()


def test_json_shape_validation():
    with pytest.raises(ValueError):
        Matrix.from_json({"rows": 2, "cols": 2, "entries": [[1, 2]]}, ZZ)
