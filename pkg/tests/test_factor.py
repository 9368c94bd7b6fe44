"""Factorization core: generic contexts, the feasibility guard, alternating
matrices, sandwich divisibility, both factorization sides, the diagonal
factorization, and the common-refinement solver."""

import json
import random

import pytest

from adjkit import (AlternatingMatrix, ExactDivisionError,
                    FactorizationCertificate, GenericContext, Matrix, QQ, ZZ,
                    diagonal_factorization, factor_left, factor_right,
                    make_generic, quotient_matrix, random_alternating,
                    reverify_certificate, sandwich, solve_common_refinement,
                    standard_symplectic, theorem_main_guard,
                    verify_fundamental, zero_alternating)
from adjkit.factor import FEASIBLE, INFEASIBLE_EXPONENT, INFEASIBLE_ODD
from adjkit.polyring import PolyRing


# ---------------------------------------------------------------------------
# generic context and fundamental identities
# ---------------------------------------------------------------------------

def test_make_generic_n2(ctx2):
    assert str(ctx2.detX) == "x_1_1*x_2_2 - x_1_2*x_2_1"
    adj = ctx2.adjX
    r = ctx2.ring
    assert adj.to_rows() == [
        [r.var("x_2_2"), -r.var("x_1_2")],
        [-r.var("x_2_1"), r.var("x_1_1")],
    ]


def test_make_generic_n1():
    ctx = make_generic(1)
    assert ctx.detX == ctx.ring.var("x_1_1")
    assert ctx.adjX.to_rows() == [[ctx.ring.one]]


def test_make_generic_n3_adj_det(ctx3):
    assert ctx3.adjX.det_laplace() == ctx3.det_power(2)


def test_make_generic_cap():
    with pytest.raises(ValueError):
        make_generic(7)


def test_verify_fundamental(ctx2, ctx3, ctx4):
    for ctx in (ctx2, ctx3, ctx4):
        report = verify_fundamental(ctx)
        assert report["passed"], report


def test_entries_are_the_named_variables(ctx3):
    for i in range(3):
        for j in range(3):
            assert ctx3.X[i, j] == ctx3.ring.var(f"x_{i + 1}_{j + 1}")


# ---------------------------------------------------------------------------
# feasibility guard
# ---------------------------------------------------------------------------

def test_guard_examples():
    assert theorem_main_guard(3, 1) == INFEASIBLE_ODD
    assert theorem_main_guard(4, 2) == FEASIBLE
    assert theorem_main_guard(6, 3) == INFEASIBLE_EXPONENT


def test_guard_table_up_to_8():
    for n in range(2, 9):
        for d in range(-1, n + 2):
            got = theorem_main_guard(n, d)
            if not 0 < d < n - 1:
                assert got == INFEASIBLE_EXPONENT, (n, d)
            elif n % 2:
                assert got == INFEASIBLE_ODD, (n, d)
            elif d in (1, n - 2):
                assert got == FEASIBLE, (n, d)
            else:
                assert got == INFEASIBLE_EXPONENT, (n, d)


def test_guard_rejects_tiny_n():
    with pytest.raises(ValueError):
        theorem_main_guard(1, 0)


# ---------------------------------------------------------------------------
# alternating matrices
# ---------------------------------------------------------------------------

def test_standard_symplectic():
    j2 = standard_symplectic(2)
    assert j2.matrix.to_rows() == [[0, 1], [-1, 0]]
    j4 = standard_symplectic(4)
    assert j4.det == 1
    jm = j4.matrix
    assert jm.transpose() == -jm
    assert jm * jm == Matrix.identity(ZZ, 4).scale(-1)
    with pytest.raises(ValueError):
        standard_symplectic(3)


def test_alternating_validation():
    with pytest.raises(ValueError):
        AlternatingMatrix.from_rows([[1, 0], [0, -1]])
    with pytest.raises(ValueError):
        AlternatingMatrix.from_rows([[0, 1], [1, 0]])
    zero = zero_alternating(3)
    assert not zero.invertible


def test_random_alternating_deterministic():
    a1 = random_alternating(4, seed=7)
    a2 = random_alternating(4, seed=7)
    assert a1.matrix == a2.matrix
    assert a1.matrix.to_json() == a2.matrix.to_json()
    b = random_alternating(4, seed=8)
    assert b.matrix != a1.matrix


def test_random_alternating_properties():
    for seed in range(6):
        a = random_alternating(4, seed=seed)
        m = a.matrix
        assert m.transpose() == -m
        assert all(m[i, i] == 0 for i in range(4))
        assert m.det_bareiss() == 1  # S^T J S with unimodular S


# ---------------------------------------------------------------------------
# sandwich and quotient
# ---------------------------------------------------------------------------

def test_sandwich_n2_is_det_times_j(ctx2):
    # oracle: M J M^T = det(M) J for any 2x2 M, applied to M = adj(X)
    j = standard_symplectic(2)
    s = sandwich(ctx2, j)
    assert s == ctx2.lift(j.matrix).scale(ctx2.detX)
    d = ctx2.detX
    assert s.to_rows() == [[ctx2.ring.zero, d], [-d, ctx2.ring.zero]]


def test_sandwich_singular_alternating_n3(ctx3):
    a = AlternatingMatrix.from_rows([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    q = quotient_matrix(ctx3, a)  # raises if any entry fails to divide
    assert q.scale(ctx3.detX) == sandwich(ctx3, a)


def test_sandwich_zero_matrix(ctx4):
    z = zero_alternating(4)
    s = sandwich(ctx4, z)
    assert all(e.is_zero() for e in s.entries)
    assert quotient_matrix(ctx4, z) == Matrix.zeros(ctx4.domain, 4, 4)


def test_sandwich_divisibility_random_alternating(ctx3, ctx4):
    rng = random.Random(13)
    for ctx in (ctx3, ctx4):
        n = ctx.n
        for _ in range(4):
            m = Matrix.zeros(ZZ, n, n)
            for i in range(n):
                for j in range(i + 1, n):
                    c = rng.randint(-5, 5)
                    m.entries[i * n + j] = c
                    m.entries[j * n + i] = -c
            quotient_matrix(ctx, AlternatingMatrix(m))


def test_quotient_n2_is_j(ctx2):
    j = standard_symplectic(2)
    assert quotient_matrix(ctx2, j) == ctx2.lift(j.matrix)


def test_quotient_specializes_to_scaled_inverse_sandwich(ctx4):
    # at B with det(B) != 0: Q(B) = det(B) * B^-1 * A * B^-T, exact rationals
    from fractions import Fraction

    from adjkit import SpecPoint, phi_apply
    j = standard_symplectic(4)
    q = quotient_matrix(ctx4, j)
    rng = random.Random(14)
    for _ in range(5):
        b = Matrix.from_rows(QQ, [[Fraction(rng.randint(-4, 4)) for _ in range(4)]
                                  for _ in range(4)])
        det = b.det()
        if det == 0:
            continue
        jq = j.matrix.map_entries(Fraction, QQ)
        binv = b.inverse()
        expect = (binv * jq * binv.transpose()).scale(det)
        assert phi_apply(q, SpecPoint(b)) == expect


# ---------------------------------------------------------------------------
# factorization certificates
# ---------------------------------------------------------------------------

def test_factor_right_n2_yields_minus_j(ctx2):
    j = standard_symplectic(2)
    cert = factor_right(ctx2, j)
    neg_j = ctx2.lift(j.matrix).scale(ctx2.ring.const(-1))
    assert cert.Y == neg_j
    assert cert.Z == ctx2.X.transpose() * ctx2.lift(j.matrix)
    assert cert.d == 0
    assert cert.passed


def test_factor_left_n2(ctx2):
    j = standard_symplectic(2)
    cert = factor_left(ctx2, j)
    assert cert.Y == ctx2.lift(j.matrix) * ctx2.X.transpose()
    assert cert.Y * cert.Z == ctx2.adjX
    assert cert.d == 1


def test_factor_right_n4_exponents(ctx4):
    j = standard_symplectic(4)
    cert = factor_right(ctx4, j)
    assert cert.d == 2
    assert cert.Y.det_laplace() == ctx4.det_power(2)   # det(A) = 1
    assert cert.Z.det_laplace() == ctx4.detX
    assert cert.checks == {"product": True, "det_y_exponent": True,
                           "det_z": True}


def test_factor_left_n4(ctx4):
    j = standard_symplectic(4)
    cert = factor_left(ctx4, j)
    assert cert.d == 1
    assert cert.Y * cert.Z == ctx4.adjX
    assert cert.Y.det_laplace() == ctx4.detX
    assert cert.Z.det_laplace() == ctx4.det_power(2)


def test_factor_random_alternating_n4(ctx4):
    for seed in (1, 2, 3):
        alt = random_alternating(4, seed=seed)
        for side in (factor_right, factor_left):
            cert = side(ctx4, alt)
            assert cert.passed
            assert cert.Y * cert.Z == ctx4.adjX


def test_factor_exponent_law_combines(ctx4):
    # det(Y) * det(Z) = det(X)^(n-1), consistent with det(adj X)
    j = standard_symplectic(4)
    cert = factor_right(ctx4, j)
    assert cert.Y.det_laplace() * cert.Z.det_laplace() == ctx4.det_power(3)


def test_factor_guard_consistency(ctx4):
    # nontrivial certificates (n >= 4) land in the guard's feasible cell
    j = standard_symplectic(4)
    for cert in (factor_right(ctx4, j), factor_left(ctx4, j)):
        assert theorem_main_guard(cert.n, cert.d) == FEASIBLE


def test_factor_rejects_bad_inputs(ctx3, ctx4):
    j4 = standard_symplectic(4)
    with pytest.raises(ValueError):
        factor_right(ctx3, j4)
    with pytest.raises(ValueError):
        factor_right(ctx4, zero_alternating(4))


def test_transpose_duality(ctx4):
    # relabeling x_ij -> x_ji turns a right certificate into the left
    # certificate of -A: transpose adj(X) = Y (X^T A), apply the swap, and
    # the leading factor becomes (-A) X^T
    j = standard_symplectic(4)
    cert_r = factor_right(ctx4, j)
    ring = ctx4.ring
    swap = {f"x_{i}_{j_}": ring.var(f"x_{j_}_{i}")
            for i in range(1, 5) for j_ in range(1, 5)}
    tau = lambda poly: poly.substitute(swap, ring)
    y_t = cert_r.Y.map_entries(tau).transpose()
    neg_alt = AlternatingMatrix(-j.matrix)
    cert_l = factor_left(ctx4, neg_alt)
    assert cert_l.Z == y_t
    assert cert_l.Y * y_t == ctx4.adjX


def test_certificate_json_round_trip(ctx4):
    j = standard_symplectic(4)
    cert = factor_right(ctx4, j)
    blob = json.dumps(cert.to_json(), sort_keys=True)
    loaded = FactorizationCertificate.from_json(json.loads(blob), ctx4)
    assert loaded.Y == cert.Y and loaded.Z == cert.Z
    assert loaded.d == cert.d and loaded.side == cert.side
    report = reverify_certificate(loaded, ctx4)
    assert report["passed"], report


def test_tampered_certificate_detected(ctx4):
    j = standard_symplectic(4)
    cert = factor_right(ctx4, j)
    obj = cert.to_json()
    obj["Y"]["entries"][0][0] = "x_1_1^2"
    loaded = FactorizationCertificate.from_json(obj, ctx4)
    assert not reverify_certificate(loaded, ctx4)["passed"]


# ---------------------------------------------------------------------------
# diagonal factorization
# ---------------------------------------------------------------------------

def test_diagonal_factorization(ctx2, ctx3):
    for ctx in (ctx2, ctx3):
        mats = diagonal_factorization(ctx)
        assert len(mats) == ctx.n
        prod = mats[0]
        for m in mats[1:]:
            prod = prod * m
        assert prod == ctx.identity.scale(ctx.detX)
        for m in mats:
            assert m.det_laplace() == ctx.detX


# ---------------------------------------------------------------------------
# common refinement
# ---------------------------------------------------------------------------

def test_refinement_n2_j(ctx2):
    j = standard_symplectic(2)
    w = solve_common_refinement(ctx2, j, j)
    assert w is not None
    assert w.r == w.r.ring.const(-1)
    assert all(e.is_zero() for e in w.W.entries)
    assert w.passed


def test_refinement_n2_sign_cancellation(ctx2):
    j = standard_symplectic(2)
    neg_j = AlternatingMatrix(-j.matrix)
    w = solve_common_refinement(ctx2, neg_j, neg_j)
    assert w is not None
    assert w.r == w.r.ring.const(-1)  # (-J) M (-J) = J M J


def test_refinement_n4_back_multiplies(ctx4):
    j = standard_symplectic(4)
    w = solve_common_refinement(ctx4, j, j)
    assert w is not None
    assert w.passed, w.checks
    assert w.checks["back_multiplication"]
    assert w.r.is_homogeneous(2)
    assert all(e.is_zero() or e.is_homogeneous(1) for e in w.W.entries)


def test_refinement_mixed_alternating(ctx4):
    a = standard_symplectic(4)
    b = random_alternating(4, seed=4)
    w = solve_common_refinement(ctx4, a, b)
    assert w is not None and w.passed


def test_refinement_witness_json_round_trip(ctx4):
    j = standard_symplectic(4)
    w = solve_common_refinement(ctx4, j, j)
    blob = json.dumps(w.to_json(), sort_keys=True)
    from adjkit import RefinementWitness
    loaded = RefinementWitness.from_json(json.loads(blob))
    assert loaded.r == w.r
    assert loaded.W == w.W
    assert loaded.solution_space_dim == w.solution_space_dim


# ---------------------------------------------------------------------------
# mod-p transfer of the certificate identities
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 31, 2_147_483_647])
def test_certificates_transfer_mod_p(p):
    ctx = GenericContext(4, p=p)
    j = standard_symplectic(4)
    cert = factor_right(ctx, j)
    assert cert.passed
    cert_l = factor_left(ctx, j)
    assert cert_l.passed
    rep = verify_fundamental(ctx)
    assert rep["passed"]
    a = AlternatingMatrix.from_rows(
        [[0, 2, 0, 1], [-2, 0, 3, 0], [0, -3, 0, 1], [-1, 0, -1, 0]])
    quotient_matrix(ctx, a)  # raises on any divisibility failure
