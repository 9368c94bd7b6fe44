"""Pure-Python term-arithmetic kernels.

A polynomial is carried around as a plain dict mapping an exponent vector
(a tuple of non-negative ints, one slot per ring variable) to a nonzero
coefficient.  Coefficients are Python ints or Fractions in characteristic
zero, or ints in ``[0, p)`` when a prime ``p`` is passed to the ``*_mod``
variants.  Every function here returns canonical dicts: no zero
coefficients are ever stored.

The ``packed_*`` family is the hot path used by the determinant engine.
There the exponent vector is packed into a single Python int (one byte per
variable, big-endian), so that multiplying two monomials is a single
integer addition.  Callers must certify that no per-variable exponent sum
can exceed 255 before entering the packed representation; see
``polyring.Polynomial`` for the bound bookkeeping.

``adjkit._termkernels_c`` implements the same surface in Cython/C++; the
dispatcher in ``adjkit.kernels`` picks whichever is importable.
"""

from __future__ import annotations

from itertools import combinations

IMPL = "py"


# ---------------------------------------------------------------------------
# dict-of-tuples kernels (general coefficients)
# ---------------------------------------------------------------------------

def add_terms(a, b):
    """Return the term dict of a + b."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    get = out.get
    for e, c in b.items():
        v = get(e)
        if v is None:
            out[e] = c
        else:
            v = v + c
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def neg_terms(a):
    return {e: -c for e, c in a.items()}


def scale_terms(a, c):
    """Multiply every coefficient by the nonzero scalar c."""
    return {e: c * v for e, v in a.items()}


def mul_terms(a, b):
    """Return the term dict of a * b."""
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    bitems = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bitems:
            e = tuple(map(int.__add__, ea, eb))
            v = get(e)
            if v is None:
                out[e] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[e] = v
                else:
                    del out[e]
    return out


def fma_terms(acc, a, b, negate):
    """acc += a*b (or -= when negate), in place on the dict acc."""
    if not a or not b:
        return
    if len(a) < len(b):
        a, b = b, a
    get = acc.get
    bitems = list(b.items())
    for ea, ca in a.items():
        if negate:
            ca = -ca
        for eb, cb in bitems:
            e = tuple(map(int.__add__, ea, eb))
            v = get(e)
            if v is None:
                acc[e] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    acc[e] = v
                else:
                    del acc[e]


def sub_scaled_terms(rem, exps, coeff, b):
    """rem -= (coeff * x^exps) * b, in place; return the keys newly created.

    Used by the exact-division loop, which tracks fresh monomials in a heap.
    """
    new_keys = []
    get = rem.get
    for eb, cb in b.items():
        e = tuple(map(int.__add__, exps, eb))
        v = get(e)
        if v is None:
            rem[e] = -coeff * cb
            new_keys.append(e)
        else:
            v = v - coeff * cb
            if v:
                rem[e] = v
            else:
                del rem[e]
    return new_keys


# ---------------------------------------------------------------------------
# dict-of-tuples kernels, coefficients mod p
# ---------------------------------------------------------------------------

def add_terms_mod(a, b, p):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    get = out.get
    for e, c in b.items():
        v = get(e)
        if v is None:
            out[e] = c
        else:
            v = (v + c) % p
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def neg_terms_mod(a, p):
    return {e: p - c for e, c in a.items()}


def scale_terms_mod(a, c, p):
    out = {}
    for e, v in a.items():
        w = (c * v) % p
        if w:
            out[e] = w
    return out


def mul_terms_mod(a, b, p):
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    bitems = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bitems:
            e = tuple(map(int.__add__, ea, eb))
            v = get(e)
            if v is None:
                v = (ca * cb) % p
                if v:
                    out[e] = v
            else:
                v = (v + ca * cb) % p
                if v:
                    out[e] = v
                else:
                    del out[e]
    return out


def fma_terms_mod(acc, a, b, negate, p):
    if not a or not b:
        return
    if len(a) < len(b):
        a, b = b, a
    get = acc.get
    bitems = list(b.items())
    for ea, ca in a.items():
        if negate:
            ca = p - ca
        for eb, cb in bitems:
            e = tuple(map(int.__add__, ea, eb))
            v = get(e)
            if v is None:
                v = (ca * cb) % p
                if v:
                    acc[e] = v
            else:
                v = (v + ca * cb) % p
                if v:
                    acc[e] = v
                else:
                    del acc[e]


def sub_scaled_terms_mod(rem, exps, coeff, b, p):
    new_keys = []
    get = rem.get
    nc = p - coeff
    for eb, cb in b.items():
        e = tuple(map(int.__add__, exps, eb))
        v = get(e)
        if v is None:
            v = (nc * cb) % p
            if v:
                rem[e] = v
                new_keys.append(e)
        else:
            v = (v + nc * cb) % p
            if v:
                rem[e] = v
            else:
                del rem[e]
    return new_keys


# ---------------------------------------------------------------------------
# packed fast path: exponent vector packed into one int, one byte per slot
# ---------------------------------------------------------------------------

def pack_terms(terms, width):
    """Convert tuple-keyed terms to packed-int keys (big-endian bytes)."""
    return {int.from_bytes(bytes(e), "big"): c for e, c in terms.items()}


def unpack_terms(packed, width):
    """Inverse of pack_terms."""
    return {tuple(k.to_bytes(width, "big")): c for k, c in packed.items()}


def packed_fma(acc, a, b, negate, p):
    """acc += (-)a*b on packed dicts; p=0 means characteristic zero."""
    if not a or not b:
        return
    if len(a) < len(b):
        a, b = b, a
    get = acc.get
    bitems = list(b.items())
    if p:
        for ea, ca in a.items():
            if negate:
                ca = p - ca
            for eb, cb in bitems:
                e = ea + eb
                v = get(e)
                if v is None:
                    v = (ca * cb) % p
                    if v:
                        acc[e] = v
                else:
                    v = (v + ca * cb) % p
                    if v:
                        acc[e] = v
                    else:
                        del acc[e]
    else:
        for ea, ca in a.items():
            if negate:
                ca = -ca
            for eb, cb in bitems:
                e = ea + eb
                v = get(e)
                if v is None:
                    acc[e] = ca * cb
                else:
                    v = v + ca * cb
                    if v:
                        acc[e] = v
                    else:
                        del acc[e]


def packed_mul_terms(a, b, width, p=0):
    """Tuple-keyed product computed through the packed representation."""
    pa = pack_terms(a, width)
    pb = pack_terms(b, width)
    out = {}
    packed_fma(out, pa, pb, False, p)
    return unpack_terms(out, width)


def det_laplace_terms(rows, nvars):
    """Determinant of a square grid of tuple-keyed term dicts.

    Same subset-memoized Laplace scheme as packed_det_laplace, but on the
    general tuple representation (any coefficient type).  Two memo levels
    are alive at once.
    """
    n = len(rows)
    level = {0: {(0,) * nvars: 1}}
    cols = list(range(n))
    for k in range(1, n + 1):
        row_entries = rows[k - 1]
        nxt = {}
        for subset in combinations(cols, k):
            acc = {}
            mask = 0
            for j in subset:
                mask |= 1 << j
            for pos in range(k):
                j = subset[pos]
                entry = row_entries[j]
                if entry:
                    prev = level[mask & ~(1 << j)]
                    if prev:
                        fma_terms(acc, entry, prev, (k - 1 + pos) % 2 == 1)
            nxt[mask] = acc
        level = nxt
    return level[(1 << n) - 1]


def det_laplace_terms_mod(rows, nvars, p):
    """det_laplace_terms with coefficients in GF(p)."""
    n = len(rows)
    level = {0: {(0,) * nvars: 1 % p}}
    cols = list(range(n))
    for k in range(1, n + 1):
        row_entries = rows[k - 1]
        nxt = {}
        for subset in combinations(cols, k):
            acc = {}
            mask = 0
            for j in subset:
                mask |= 1 << j
            for pos in range(k):
                j = subset[pos]
                entry = row_entries[j]
                if entry:
                    prev = level[mask & ~(1 << j)]
                    if prev:
                        fma_terms_mod(acc, entry, prev, (k - 1 + pos) % 2 == 1, p)
            nxt[mask] = acc
        level = nxt
    return level[(1 << n) - 1]


def packed_det_laplace(rows, width, p=0):
    """Determinant of a square grid of tuple-keyed term dicts.

    Subset-memoized Laplace expansion over column subsets: level k holds the
    minors on rows 0..k-1, indexed by a bitmask of k columns.  Only two
    levels are alive at once, which keeps the memory footprint at the two
    largest minor layers.  Returns a tuple-keyed dict.
    """
    n = len(rows)
    packed_rows = [[pack_terms(e, width) for e in row] for row in rows]
    level = {0: {0: 1 if not p else 1 % p}}  # empty minor = 1
    cols = list(range(n))
    for k in range(1, n + 1):
        row_entries = packed_rows[k - 1]
        nxt = {}
        for subset in combinations(cols, k):
            acc = {}
            mask = 0
            for j in subset:
                mask |= 1 << j
            # expand along row k-1: entry at submatrix position (k-1, pos)
            # carries the cofactor sign (-1)^(k-1+pos)
            for pos in range(k):
                j = subset[pos]
                entry = row_entries[j]
                if entry:
                    prev = level[mask & ~(1 << j)]
                    if prev:
                        packed_fma(acc, entry, prev, (k - 1 + pos) % 2 == 1, p)
            nxt[mask] = acc
        level = nxt
    full = (1 << n) - 1
    return unpack_terms(level[full], width)

