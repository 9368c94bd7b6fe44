"""Exact dense matrices over a pluggable scalar domain.

Determinants come in two independent flavors (subset-memoized Laplace and
fraction-free Bareiss) so each can serve as an oracle for the other.
Polynomial matrices route their determinant and product inner loops through
the term kernels; numeric domains use plain scalar loops.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Sequence

from . import kernels
from .domains import GF, QQ, ZZ, PolynomialDomain, PrimeFieldDomain, RationalDomain
from .polyring import PolyRing, Polynomial, _packed_safe, packed_safe_det


def index_subsets(n: int, m: int) -> list[tuple[int, ...]]:
    """All m-element subsets of {0..n-1} in lexicographic order.

    The list position of a subset is its canonical index for compound
    matrix rows/columns.
    """
    return list(combinations(range(n), m))


class Matrix:
    __slots__ = ("domain", "rows", "cols", "entries")

    def __init__(self, domain, rows: int, cols: int, entries: list):
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match the shape")
        self.domain = domain
        self.rows = rows
        self.cols = cols
        self.entries = entries

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, domain, rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(row)
        return cls(domain, r, c, flat)

    @classmethod
    def identity(cls, domain, n: int) -> "Matrix":
        e = [domain.zero] * (n * n)
        for i in range(n):
            e[i * n + i] = domain.one
        return cls(domain, n, n, e)

    @classmethod
    def zeros(cls, domain, rows: int, cols: int) -> "Matrix":
        return cls(domain, rows, cols, [domain.zero] * (rows * cols))

    @classmethod
    def diagonal(cls, domain, values: Sequence) -> "Matrix":
        n = len(values)
        m = cls.zeros(domain, n, n)
        for i, v in enumerate(values):
            m.entries[i * n + i] = v
        return m

    # -- access ----------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row_list(self, i: int) -> list:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [self.row_list(i) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __repr__(self):
        return f"Matrix({self.domain.name}, {self.rows}x{self.cols})"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            all(a == b for a, b in zip(self.entries, other.entries))

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def _check_domain(self, other: "Matrix"):
        if self.domain.name != other.domain.name:
            raise ValueError(
                f"domain mismatch: {self.domain.name} vs {other.domain.name}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_domain(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        add = self.domain.add
        return Matrix(self.domain, self.rows, self.cols,
                      [add(a, b) for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_domain(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        sub = self.domain.sub
        return Matrix(self.domain, self.rows, self.cols,
                      [sub(a, b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        neg = self.domain.neg
        return Matrix(self.domain, self.rows, self.cols,
                      [neg(a) for a in self.entries])

    def scale(self, c) -> "Matrix":
        mul = self.domain.mul
        return Matrix(self.domain, self.rows, self.cols,
                      [mul(a, c) for a in self.entries])

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_domain(other)
        if self.cols != other.rows:
            raise ValueError("inner dimensions disagree")
        if isinstance(self.domain, PolynomialDomain):
            return self._mul_poly(other)
        dom = self.domain
        n, k, m = self.rows, self.cols, other.cols
        out = []
        for i in range(n):
            arow = self.entries[i * k:(i + 1) * k]
            for j in range(m):
                acc = dom.zero
                for l in range(k):
                    acc = dom.add(acc, dom.mul(arow[l], other.entries[l * m + j]))
                out.append(acc)
        return Matrix(dom, n, m, out)

    def _mul_poly(self, other: "Matrix") -> "Matrix":
        ring = self.domain.ring
        p = ring.p
        n, k, m = self.rows, self.cols, other.cols
        out = []
        for i in range(n):
            arow = self.entries[i * k:(i + 1) * k]
            for j in range(m):
                acc: dict = {}
                for l in range(k):
                    a, b = arow[l].terms, other.entries[l * m + j].terms
                    if a and b:
                        if p is None:
                            kernels.fma_terms(acc, a, b, False)
                        else:
                            kernels.fma_terms_mod(acc, a, b, False, p)
                out.append(Polynomial(ring, acc))
        return Matrix(self.domain, n, m, out)

    def transpose(self) -> "Matrix":
        out = [None] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out[j * self.rows + i] = self.entries[i * self.cols + j]
        return Matrix(self.domain, self.cols, self.rows, out)

    def map_entries(self, f: Callable, domain=None) -> "Matrix":
        return Matrix(domain if domain is not None else self.domain,
                      self.rows, self.cols, [f(a) for a in self.entries])

    def submatrix(self, keep_rows: Sequence[int], keep_cols: Sequence[int]) -> "Matrix":
        out = []
        for i in keep_rows:
            base = i * self.cols
            for j in keep_cols:
                out.append(self.entries[base + j])
        return Matrix(self.domain, len(keep_rows), len(keep_cols), out)

    # -- determinants ------------------------------------------------------

    def det_laplace(self):
        """Determinant by column-subset-memoized Laplace expansion."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return self.domain.one
        if isinstance(self.domain, PolynomialDomain):
            return self._det_laplace_poly()
        dom = self.domain
        level = {0: dom.one}
        for k in range(1, n + 1):
            row = self.row_list(k - 1)
            nxt = {}
            for subset in combinations(range(n), k):
                mask = 0
                for j in subset:
                    mask |= 1 << j
                acc = dom.zero
                for pos in range(k):
                    j = subset[pos]
                    e = row[j]
                    if not dom.is_zero(e):
                        term = dom.mul(e, level[mask & ~(1 << j)])
                        acc = dom.sub(acc, term) if (k - 1 + pos) % 2 else dom.add(acc, term)
                nxt[mask] = acc
            level = nxt
        return level[(1 << n) - 1]

    def _det_laplace_poly(self):
        ring = self.domain.ring
        grid = self.to_rows()
        rows_terms = [[e.terms for e in row] for row in grid]
        # the packed engine pays off once the term volume is nontrivial;
        # tiny determinants are faster on the tuple kernels
        volume = sum(len(t) for row in rows_terms for t in row)
        if (volume >= 128 or self.rows >= 7) and packed_safe_det(grid, ring):
            terms = kernels.packed_det_laplace(rows_terms, ring.nvars, ring.p or 0)
        elif ring.p is None:
            terms = kernels.det_laplace_terms(rows_terms, ring.nvars)
        else:
            terms = kernels.det_laplace_terms_mod(rows_terms, ring.nvars, ring.p)
        return Polynomial(ring, terms)

    def det_equals(self, expected: Polynomial) -> bool:
        """Exact test det(self) == expected for polynomial matrices."""
        if not isinstance(self.domain, PolynomialDomain):
            raise TypeError("det_equals expects a polynomial matrix")
        if not self.domain.ring.compatible(expected.ring):
            raise ValueError("polynomial rings/modes differ")
        return self.det_laplace() == expected

    def det_bareiss(self):
        """Fraction-free determinant; needs exact division in the domain."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return self.domain.one
        dom = self.domain
        m = [row[:] for row in self.to_rows()]
        sign = 1
        prev = dom.one
        for k in range(n - 1):
            if dom.is_zero(m[k][k]):
                for i in range(k + 1, n):
                    if not dom.is_zero(m[i][k]):
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return dom.zero
            pivot = m[k][k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = dom.sub(dom.mul(pivot, m[i][j]),
                                  dom.mul(m[i][k], m[k][j]))
                    m[i][j] = dom.exact_div(num, prev)
            prev = pivot
        det = m[n - 1][n - 1]
        return dom.neg(det) if sign < 0 else det

    def _det_gauss(self):
        """Determinant by Gaussian elimination; field domains only."""
        dom = self.domain
        n = self.rows
        work = [row[:] for row in self.to_rows()]
        sign = False
        det = dom.one
        for col in range(n):
            pivot = None
            for i in range(col, n):
                if not dom.is_zero(work[i][col]):
                    pivot = i
                    break
            if pivot is None:
                return dom.zero
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                sign = not sign
            pval = work[col][col]
            det = dom.mul(det, pval)
            inv = dom.inv(pval)
            for i in range(col + 1, n):
                if not dom.is_zero(work[i][col]):
                    factor = dom.mul(work[i][col], inv)
                    work[i] = [dom.sub(a, dom.mul(factor, b))
                               for a, b in zip(work[i], work[col])]
        return dom.neg(det) if sign else det

    def det(self):
        """Default determinant: Laplace for polynomial entries, Gaussian
        for fields, fraction-free Bareiss for the integers."""
        if isinstance(self.domain, PolynomialDomain):
            return self.det_laplace()
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        if getattr(self.domain, "is_field", False) and self.rows >= 3:
            return self._det_gauss()
        return self.det_bareiss()

    # -- adjugate and compounds ---------------------------------------------

    def minor(self, drop_row: int, drop_col: int):
        keep_r = [i for i in range(self.rows) if i != drop_row]
        keep_c = [j for j in range(self.cols) if j != drop_col]
        return self.submatrix(keep_r, keep_c).det()

    def inverse(self) -> "Matrix":
        """Exact inverse by Gauss-Jordan; field domains only."""
        dom = self.domain
        if not getattr(dom, "is_field", False):
            raise TypeError(f"inverse needs a field domain, not {dom.name}")
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        work = [row[:] + [dom.one if j == i else dom.zero for j in range(n)]
                for i, row in enumerate(self.to_rows())]
        for col in range(n):
            pivot = None
            for i in range(col, n):
                if not dom.is_zero(work[i][col]):
                    pivot = i
                    break
            if pivot is None:
                raise ZeroDivisionError("matrix is singular")
            work[col], work[pivot] = work[pivot], work[col]
            inv = dom.inv(work[col][col])
            work[col] = [dom.mul(v, inv) for v in work[col]]
            for i in range(n):
                if i != col and not dom.is_zero(work[i][col]):
                    factor = work[i][col]
                    work[i] = [dom.sub(a, dom.mul(factor, b))
                               for a, b in zip(work[i], work[col])]
        return Matrix(dom, n, n, [work[i][n + j]
                                  for i in range(n) for j in range(n)])

    def _kernel_vector(self) -> list:
        """A nonzero kernel vector of a singular square matrix over a field."""
        dom = self.domain
        n = self.rows
        work = [row[:] for row in self.to_rows()]
        pivots = []
        rank = 0
        for col in range(n):
            pivot_row = None
            for i in range(rank, n):
                if not dom.is_zero(work[i][col]):
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            work[rank], work[pivot_row] = work[pivot_row], work[rank]
            inv = dom.inv(work[rank][col])
            work[rank] = [dom.mul(v, inv) for v in work[rank]]
            for i in range(n):
                if i != rank and not dom.is_zero(work[i][col]):
                    factor = work[i][col]
                    work[i] = [dom.sub(a, dom.mul(factor, b))
                               for a, b in zip(work[i], work[rank])]
            pivots.append(col)
            rank += 1
        free = next(c for c in range(n) if c not in pivots)
        vec = [dom.zero] * n
        vec[free] = dom.one
        for r, c in enumerate(pivots):
            vec[c] = dom.neg(work[r][free])
        return vec

    def adjugate(self) -> "Matrix":
        """Transposed cofactor matrix; adj(A)*A = A*adj(A) = det(A)*I.

        The 1x1 adjugate is [[1]] so the identity holds at n = 1.  Field
        domains get O(n^3) paths (inverse when nonsingular, kernel outer
        product at rank n-1); other domains use the cofactor minors.
        """
        if not self.is_square:
            raise ValueError("adjugate of a non-square matrix")
        n = self.rows
        dom = self.domain
        if n == 0:
            raise ValueError("adjugate of an empty matrix")
        if n == 1:
            return Matrix(dom, 1, 1, [dom.one])
        if getattr(dom, "is_field", False) and n >= 3:
            det = self.det()
            if not dom.is_zero(det):
                return self.inverse().scale(det)
            rank = self.rank()
            if rank < n - 1:
                return Matrix.zeros(dom, n, n)
            # adj has rank one: columns span ker(A), rows span ker(A^T);
            # one explicit cofactor calibrates the scale
            u = self._kernel_vector()
            v = self.transpose()._kernel_vector()
            i = next(k for k in range(n) if not dom.is_zero(u[k]))
            j = next(k for k in range(n) if not dom.is_zero(v[k]))
            c = self.minor(j, i)
            if (i + j) % 2:
                c = dom.neg(c)
            scale = dom.mul(c, dom.inv(dom.mul(u[i], v[j])))
            return Matrix(dom, n, n,
                          [dom.mul(scale, dom.mul(u[a], v[b]))
                           for a in range(n) for b in range(n)])
        out = [dom.zero] * (n * n)
        for i in range(n):
            for j in range(n):
                c = self.minor(j, i)
                out[i * n + j] = dom.neg(c) if (i + j) % 2 else c
        return Matrix(dom, n, n, out)

    def compound(self, m: int) -> "Matrix":
        """The matrix of all m-by-m minors, subsets ordered lexicographically."""
        if not self.is_square:
            raise ValueError("compound of a non-square matrix")
        n = self.rows
        if not 1 <= m <= n:
            raise ValueError(f"compound order {m} out of range 1..{n}")
        subs = index_subsets(n, m)
        out = []
        for S in subs:
            for T in subs:
                out.append(self.submatrix(S, T).det())
        return Matrix(self.domain, len(subs), len(subs), out)

    def complementary_compound(self, m: int) -> "Matrix":
        """(S,T) entry: (-1)^(sum S + sum T) times the complementary minor.

        Signs use 1-based index sums; with this convention
        compound(A, m) * complementary_compound(A, m)^T = det(A) * I.
        """
        if not self.is_square:
            raise ValueError("compound of a non-square matrix")
        n = self.rows
        if not 1 <= m <= n:
            raise ValueError(f"compound order {m} out of range 1..{n}")
        subs = index_subsets(n, m)
        full = set(range(n))
        dom = self.domain
        out = []
        for S in subs:
            Sc = sorted(full - set(S))
            sig_s = sum(S) + m  # 1-based sum = 0-based sum + m
            for T in subs:
                Tc = sorted(full - set(T))
                minor = self.submatrix(Sc, Tc).det() if Sc else dom.one
                sig = sig_s + sum(T) + m
                out.append(dom.neg(minor) if sig % 2 else minor)
        return Matrix(dom, len(subs), len(subs), out)

    # -- rank and characteristic polynomial ----------------------------------

    def rank(self) -> int:
        """Exact rank by Gaussian elimination; field domains only."""
        dom = self.domain
        if not getattr(dom, "is_field", False):
            raise TypeError(
                f"exact rank needs a field domain, not {dom.name}; "
                "specialize polynomial matrices first")
        m = [row[:] for row in self.to_rows()]
        rank = 0
        for col in range(self.cols):
            pivot_row = None
            for i in range(rank, self.rows):
                if not dom.is_zero(m[i][col]):
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            m[rank], m[pivot_row] = m[pivot_row], m[rank]
            inv = dom.inv(m[rank][col])
            for i in range(rank + 1, self.rows):
                factor = dom.mul(m[i][col], inv)
                if not dom.is_zero(factor):
                    for j in range(col, self.cols):
                        m[i][j] = dom.sub(m[i][j], dom.mul(factor, m[rank][j]))
            rank += 1
            if rank == self.rows:
                break
        return rank

    def nullity(self) -> int:
        return self.cols - self.rank()

    def char_poly_shifted(self) -> Polynomial:
        """det(tI + A) as a polynomial in t (monic of degree n)."""
        if not self.is_square:
            raise ValueError("characteristic polynomial of a non-square matrix")
        dom = self.domain
        if isinstance(dom, PolynomialDomain):
            raise TypeError("char_poly_shifted expects a numeric matrix")
        if isinstance(dom, PrimeFieldDomain):
            tring = PolyRing(("t",), p=dom.p)
        elif isinstance(dom, RationalDomain):
            tring = PolyRing(("t",), rational=True)
        else:
            tring = PolyRing(("t",))
        pd = PolynomialDomain(tring)
        t = tring.var("t")
        n = self.rows
        entries = []
        for i in range(n):
            for j in range(n):
                c = tring.const(self.entries[i * n + j])
                entries.append(t + c if i == j else c)
        return Matrix(pd, n, n, entries).det_laplace()

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        to = self.domain.to_json
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[to(self.entries[i * self.cols + j])
                         for j in range(self.cols)] for i in range(self.rows)],
        }

    @classmethod
    def from_json(cls, obj: dict, domain) -> "Matrix":
        rows, cols = obj["rows"], obj["cols"]
        grid = obj["entries"]
        if len(grid) != rows or any(len(r) != cols for r in grid):
            raise ValueError("entry grid does not match the declared shape")
        frm = domain.from_json
        return cls(domain, rows, cols, [frm(v) for row in grid for v in row])


# Functional aliases used throughout the test-suite and CLI.

def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a * b


def transpose(a: Matrix) -> Matrix:
    return a.transpose()


def det_laplace(a: Matrix):
    return a.det_laplace()


def det_bareiss(a: Matrix):
    return a.det_bareiss()


def adjugate(a: Matrix) -> Matrix:
    return a.adjugate()


def compound(a: Matrix, m: int) -> Matrix:
    return a.compound(m)


def rank_exact(a: Matrix) -> int:
    return a.rank()


def char_poly_shifted(a: Matrix) -> Polynomial:
    return a.char_poly_shifted()


def lift_int_matrix(a: Matrix, ring: PolyRing) -> Matrix:
    """Integer matrix -> the same matrix over the polynomial ring."""
    pd = PolynomialDomain(ring)
    return a.map_entries(lambda c: ring.const(c), pd)
