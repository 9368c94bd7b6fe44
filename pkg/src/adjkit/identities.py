"""Registered identity suite: symbolic verification and mod-p trials.

Each registered identity knows how to verify itself symbolically on the
generic matrix (exactly, at small n) and how to run one randomized GF(p)
trial (for dimensions far beyond symbolic reach).  A deliberately corrupted
identity is registered as a negative control; it must fail.

Compound determinant checks are route-aware: the Sylvester-Franke
determinant law det(compound(X, m)) = det(X)^C(n-1, m-1) is expanded
directly when both sides fit in memory, and otherwise certified through
the complementary-compound product identity
compound(X, m) * D^T = det(X) * I together with the signed-permutation
correspondence between D and compound(X, n-m) (all verified exactly);
multiplicativity of determinants then pins the remaining exponent, with
exact rational spot checks on top.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

from .domains import GF, QQ, ZZ
from .factor import (AlternatingMatrix, GenericContext, factor_left,
                     factor_right, diagonal_factorization, quotient_matrix,
                     random_unimodular, standard_symplectic, verify_fundamental,
                     zero_alternating)
from .matrix import Matrix, index_subsets


# ---------------------------------------------------------------------------
# random instance helpers (entries uniform in [-5, 5] unless stated)
# ---------------------------------------------------------------------------

def rand_int_matrix(rng: random.Random, n: int, lo: int = -5, hi: int = 5) -> Matrix:
    return Matrix.from_rows(ZZ, [[rng.randint(lo, hi) for _ in range(n)]
                                 for _ in range(n)])


def rand_gfp_matrix(rng: random.Random, n: int, p: int) -> Matrix:
    dom = GF(p)
    return Matrix.from_rows(dom, [[rng.randrange(p) for _ in range(n)]
                                  for _ in range(n)])


def rand_gfp_invertible(rng: random.Random, n: int, p: int) -> Matrix:
    while True:
        m = rand_gfp_matrix(rng, n, p)
        if m.det() != 0:
            return m


def rand_gfp_singular(rng: random.Random, n: int, p: int) -> Matrix:
    """Random rank-(n-1) matrix over GF(p)."""
    dom = GF(p)
    while True:
        u = [[rng.randrange(p) for _ in range(n - 1)] for _ in range(n)]
        v = [[rng.randrange(p) for _ in range(n)] for _ in range(n - 1)]
        m = Matrix.from_rows(dom, u) * Matrix.from_rows(dom, v)
        if m.rank() == n - 1:
            return m


def rand_gfp_alternating(rng: random.Random, n: int, p: int) -> Matrix:
    dom = GF(p)
    m = Matrix.zeros(dom, n, n)
    for i in range(n):
        for j in range(i + 1, n):
            c = rng.randrange(p)
            m.entries[i * n + j] = c
            m.entries[j * n + i] = (-c) % p
    return m


def rand_alternating_int(rng: random.Random, n: int, lo: int = -5,
                         hi: int = 5) -> AlternatingMatrix:
    m = Matrix.zeros(ZZ, n, n)
    for i in range(n):
        for j in range(i + 1, n):
            c = rng.randint(lo, hi)
            m.entries[i * n + j] = c
            m.entries[j * n + i] = -c
    return AlternatingMatrix(m)


def _reduce_mod(m: Matrix, p: int) -> Matrix:
    dom = GF(p)
    return m.map_entries(lambda v: int(v) % p, dom)


# ---------------------------------------------------------------------------
# compound determinant routes
# ---------------------------------------------------------------------------

def _compound_direct_feasible(n: int, m: int) -> bool:
    # determined by the expanded size of det(X)^C(n-1, m-1); the n = 5
    # exponent-6 case has ~1.6e8 terms and is out of reach anywhere
    if m in (1, n):
        return True
    if n <= 4:
        return True
    if n == 5:
        return comb(4, m - 1) <= 4
    return False


def complement_reindexing(n: int, m: int):
    """Position map and signs tying D_m to compound(X, n-m).

    D_m[S, T] = sign(S)*sign(T) * compound(X, n-m)[pos(comp S), pos(comp T)]
    with sign(S) = (-1)^(1-based index sum of S).
    """
    subs_m = index_subsets(n, m)
    subs_c = index_subsets(n, n - m)
    pos_c = {s: i for i, s in enumerate(subs_c)}
    full = set(range(n))
    perm = []
    signs = []
    for s in subs_m:
        comp = tuple(sorted(full - set(s)))
        perm.append(pos_c[comp])
        signs.append(-1 if (sum(s) + m) % 2 else 1)
    return perm, signs


def compound_det_check(ctx: GenericContext, m: int,
                       rng: random.Random | None = None) -> dict:
    """Verify det(compound(X, m)) = det(X)^C(n-1, m-1), route-aware."""
    n = ctx.n
    e = comb(n - 1, m - 1)
    big_n = comb(n, m)
    cmp_m = ctx.X.compound(m)
    checks: dict = {}
    verified = getattr(ctx, "_compound_verified", None)
    if verified is None:
        verified = ctx._compound_verified = {}
    if _compound_direct_feasible(n, m):
        route = "direct"
        ok = verified.get(m)
        if ok is None:
            ok = verified[m] = cmp_m.det_equals(ctx.det_power(e))
        checks["det_equals_power"] = ok
    else:
        d = ctx.X.complementary_compound(m)
        ident = Matrix.identity(ctx.domain, big_n).scale(ctx.detX)
        checks["complement_product"] = cmp_m * d.transpose() == ident
        perm, signs = complement_reindexing(n, m)
        cmp_c = ctx.X.compound(n - m)
        checks["complement_reindexing"] = all(
            d[i, j] == (cmp_c[perm[i], perm[j]] if signs[i] * signs[j] > 0
                        else -cmp_c[perm[i], perm[j]])
            for i in range(big_n) for j in range(big_n))
        ec = comb(n - 1, n - m - 1)
        checks["exponent_arithmetic"] = e + ec == big_n
        if _compound_direct_feasible(n, n - m):
            route = "chain"
            # complementary exponent law expanded directly; with the product
            # and reindexing identities plus det multiplicativity this pins
            # det(compound(X, m)) = det(X)^e exactly
            ok = verified.get(n - m)
            if ok is None:
                ok = verified[n - m] = cmp_c.det_equals(ctx.det_power(ec))
            checks["complement_det_equals_power"] = ok
        elif m == n - m:
            route = "chain_self"
            # D is compound(X, m) itself up to signed permutation, so the
            # product identity squares it; the sign is pinned at X = I
            eye = Matrix.identity(QQ, n)
            cmp_eye = eye.compound(m)
            checks["sign_at_identity"] = cmp_eye.det() == 1
        else:
            route = "paired"
            # only the product of the two complementary determinants is
            # pinned symbolically; spot checks carry the split
        if rng is None:
            rng = random.Random(20_000 + 101 * n + m)
        spot_ok = True
        for _ in range(3):
            a = rand_int_matrix(rng, n, -3, 3).map_entries(Fraction, QQ)
            spot_ok = spot_ok and \
                a.compound(m).det() == a.det() ** e
        checks["rational_spot_checks"] = spot_ok
    return {
        "identity": "compound_det",
        "n": n,
        "m": m,
        "exponent": e,
        "route": route,
        "checks": checks,
        "passed": all(checks.values()),
    }


# ---------------------------------------------------------------------------
# symbolic suite runners: (ctx, seed) -> report dict
# ---------------------------------------------------------------------------

def _sym_fundamental(ctx: GenericContext, seed: int) -> dict:
    rep = verify_fundamental(ctx)
    rep["identity"] = "fundamental"
    return rep


def _sym_multiplicativity(ctx: GenericContext, seed: int) -> dict:
    rng = random.Random(seed)
    n = ctx.n
    ok = True
    for _ in range(20):
        a = rand_int_matrix(rng, n)
        b = rand_int_matrix(rng, n)
        if (a * b).adjugate() != b.adjugate() * a.adjugate():
            ok = False
            break
    return {"identity": "multiplicativity", "n": n,
            "checks": {"adj_reverses_products": ok}, "passed": ok}


def _sym_conjugation(ctx: GenericContext, seed: int) -> dict:
    rng = random.Random(seed)
    n = ctx.n
    ok = True
    for _ in range(10):
        a = rand_int_matrix(rng, n)
        u = random_unimodular(n, rng)
        u_inv = u.adjugate()  # det(u) = 1
        if (u * a * u_inv).adjugate() != u * a.adjugate() * u_inv:
            ok = False
            break
    return {"identity": "conjugation", "n": n,
            "checks": {"adj_commutes_with_conjugation": ok}, "passed": ok}


def _sym_sandwich(ctx: GenericContext, seed: int) -> dict:
    rng = random.Random(seed)
    n = ctx.n
    alts = [zero_alternating(n), rand_alternating_int(rng, n),
            rand_alternating_int(rng, n)]
    if n % 2 == 0:
        alts.append(standard_symplectic(n))
    checks = {}
    for idx, alt in enumerate(alts):
        try:
            quotient_matrix(ctx, alt)
            checks[f"divisible_{idx}"] = True
        except ArithmeticError:
            checks[f"divisible_{idx}"] = False
    return {"identity": "sandwich_divisibility", "n": n,
            "checks": checks, "passed": all(checks.values())}


def _sym_factor_product(ctx: GenericContext, seed: int) -> dict:
    n = ctx.n
    if n % 2:
        return {"identity": "factor_product", "n": n, "checks": {},
                "passed": True, "skipped": "odd n admits no factorization"}
    j = standard_symplectic(n)
    checks = {}
    cert_r = factor_right(ctx, j)
    checks["right_certificate"] = cert_r.passed
    cert_l = factor_left(ctx, j)
    checks["left_certificate"] = cert_l.passed
    return {"identity": "factor_product", "n": n,
            "checks": checks, "passed": all(checks.values())}


def _sym_diagonal(ctx: GenericContext, seed: int) -> dict:
    mats = diagonal_factorization(ctx)
    prod = mats[0]
    for m in mats[1:]:
        prod = prod * m
    ok_prod = prod == ctx.identity.scale(ctx.detX)
    ok_dets = all(m.det_laplace() == ctx.detX for m in mats)
    checks = {"product_is_det_identity": ok_prod, "factor_dets": ok_dets}
    return {"identity": "diagonal_factorization", "n": ctx.n,
            "checks": checks, "passed": all(checks.values())}


def _sym_compound(ctx: GenericContext, seed: int) -> dict:
    reports = [compound_det_check(ctx, m) for m in range(1, ctx.n + 1)]
    checks = {f"m_{rep['m']}_{rep['route']}": rep["passed"] for rep in reports}
    return {"identity": "compound_det", "n": ctx.n, "checks": checks,
            "reports": reports, "passed": all(checks.values())}


def _sym_complementary(ctx: GenericContext, seed: int) -> dict:
    checks = {}
    ident_scale = {}
    for m in range(1, ctx.n + 1):
        cmp_m = ctx.X.compound(m)
        d = ctx.X.complementary_compound(m)
        big_n = cmp_m.rows
        ident = Matrix.identity(ctx.domain, big_n).scale(ctx.detX)
        checks[f"m_{m}"] = cmp_m * d.transpose() == ident
        ident_scale[m] = big_n
    return {"identity": "complementary_compound", "n": ctx.n,
            "checks": checks, "passed": all(checks.values())}


def _sym_corrupted(ctx: GenericContext, seed: int) -> dict:
    # deliberately wrong exponent: det(adj X) = det(X)^n; true value is n-1
    wrong = ctx.adjX.det_laplace() == ctx.det_power(ctx.n)
    return {"identity": "corrupted_adj_det", "n": ctx.n,
            "checks": {"wrong_exponent_holds": wrong}, "passed": wrong,
            "expected_failure": True}


# ---------------------------------------------------------------------------
# mod-p trial runners: (n, p, rng, **kw) -> (ok, note)
# ---------------------------------------------------------------------------

def _modp_fundamental(n, p, rng, **kw):
    b = rand_gfp_matrix(rng, n, p)
    dom = GF(p)
    adj = b.adjugate()
    det = b.det()
    det_i = Matrix.identity(dom, n).scale(det)
    ok = (b * adj == det_i and adj * b == det_i
          and adj.det() == pow(det, n - 1, p))
    return ok, None


def _modp_multiplicativity(n, p, rng, **kw):
    a = rand_gfp_matrix(rng, n, p)
    b = rand_gfp_matrix(rng, n, p)
    return (a * b).adjugate() == b.adjugate() * a.adjugate(), None


def _modp_conjugation(n, p, rng, **kw):
    a = rand_gfp_matrix(rng, n, p)
    u = _reduce_mod(random_unimodular(n, rng), p)
    u_inv = u.adjugate()  # det = 1 mod p
    ok = (u * a * u_inv).adjugate() == u * a.adjugate() * u_inv
    return ok, None


def _modp_sandwich(n, p, rng, **kw):
    # finite-field content of the sandwich lemma: for singular B the
    # alternating sandwich vanishes identically
    b = rand_gfp_singular(rng, n, p)
    alt = rand_gfp_alternating(rng, n, p)
    adj = b.adjugate()
    prod = adj * alt * adj.transpose()
    ok = all(v == 0 for v in prod.entries)
    return ok, None


def _modp_factor_product(n, p, rng, **kw):
    if n % 2:
        raise ValueError("factor identities need even n")
    alt = standard_symplectic(n)
    a_p = _reduce_mod(alt.matrix, p)
    a_inv = _reduce_mod(alt.matrix.adjugate(), p)  # det = 1
    b = rand_gfp_invertible(rng, n, p)
    adj = b.adjugate()
    det_inv = GF(p).inv(b.det())
    y = (adj * a_inv * adj.transpose()).scale(det_inv)
    ok = y * (b.transpose() * a_p) == adj
    return ok, None


def _modp_compound_det(n, p, rng, m=2, **kw):
    b = rand_gfp_matrix(rng, n, p)
    e = comb(n - 1, m - 1)
    ok = b.compound(m).det() == pow(b.det(), e, p)
    return ok, None


def _modp_complementary(n, p, rng, m=2, **kw):
    b = rand_gfp_matrix(rng, n, p)
    dom = GF(p)
    big_n = comb(n, m)
    ident = Matrix.identity(dom, big_n).scale(b.det())
    ok = b.compound(m) * b.complementary_compound(m).transpose() == ident
    return ok, None


def _modp_corrupted(n, p, rng, **kw):
    b = rand_gfp_matrix(rng, n, p)
    adj = b.adjugate()
    ok = adj.det_bareiss() == pow(b.det_bareiss(), n, p)
    return ok, None


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    symbolic: Callable | None
    modp: Callable | None
    expected_failure: bool = False


REGISTRY: dict[str, IdentitySpec] = {
    spec.name: spec for spec in [
        IdentitySpec("fundamental", _sym_fundamental, _modp_fundamental),
        IdentitySpec("multiplicativity", _sym_multiplicativity,
                     _modp_multiplicativity),
        IdentitySpec("conjugation", _sym_conjugation, _modp_conjugation),
        IdentitySpec("sandwich_divisibility", _sym_sandwich, _modp_sandwich),
        IdentitySpec("factor_product", _sym_factor_product,
                     _modp_factor_product),
        IdentitySpec("diagonal_factorization", _sym_diagonal, None),
        IdentitySpec("compound_det", _sym_compound, _modp_compound_det),
        IdentitySpec("complementary_compound", _sym_complementary,
                     _modp_complementary),
        IdentitySpec("corrupted_adj_det", _sym_corrupted, _modp_corrupted,
                     expected_failure=True),
    ]
}

# the order the CLI runs the full suite in
SUITE = ["fundamental", "multiplicativity", "conjugation",
         "sandwich_divisibility", "factor_product", "diagonal_factorization",
         "compound_det", "complementary_compound"]


def run_symbolic_suite(n: int, seed: int = 0,
                       include_corrupted: bool = False,
                       allow_large: bool = False) -> dict:
    """Run every registered symbolic identity on the generic n-by-n matrix."""
    ctx = GenericContext(n, allow_large=allow_large)
    names = list(SUITE) + (["corrupted_adj_det"] if include_corrupted else [])
    reports = []
    for name in names:
        spec = REGISTRY[name]
        rep = spec.symbolic(ctx, seed)
        rep.setdefault("expected_failure", spec.expected_failure)
        reports.append(rep)
    # a corrupted identity is supposed to fail, and its failure must surface
    # as a failing suite: that is what the negative control demonstrates
    passed = all(rep["passed"] for rep in reports)
    return {"mode": "symbolic", "n": n, "seed": seed,
            "reports": reports, "passed": passed}


def run_modp_suite(n: int, p: int, trials: int, seed: int,
                   include_corrupted: bool = False) -> dict:
    """Run the registered mod-p trials; identity order is fixed."""
    from .specialize import sz_check
    names = [name for name in SUITE if REGISTRY[name].modp is not None]
    if n % 2:
        names.remove("factor_product")
    if include_corrupted:
        names.append("corrupted_adj_det")
    reports = []
    for i, name in enumerate(names):
        reports.append(sz_check(name, n, p, trials, seed + i))
    passed = all(rep["passed"] for rep in reports)
    return {"mode": "mod-p", "n": n, "p": p, "trials": trials, "seed": seed,
            "reports": reports, "passed": passed}
