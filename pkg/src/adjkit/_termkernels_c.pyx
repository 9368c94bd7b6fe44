# distutils: language = c++
"""Compiled term-arithmetic kernels (Cython/C++).

Mirror of ``_termkernels_py``: dict-of-exponent-tuple polynomial kernels,
plus a packed fast path where a monomial is 40 raw bytes (one per variable,
zero-padded) and coefficients are int64.  The packed inner loops run on a
C++ open hash map with no Python objects in sight; callers certify the
exponent/coefficient bounds before entering (see ``polyring``).
"""

from itertools import combinations

from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_FromStringAndSize
from cpython.dict cimport PyDict_DelItem, PyDict_GetItem, PyDict_SetItem
from cpython.ref cimport Py_INCREF, PyObject
from cpython.tuple cimport (PyTuple_GET_ITEM, PyTuple_GET_SIZE, PyTuple_New,
                            PyTuple_SET_ITEM)

IMPL = "c"

PACKED_WIDTH = 40

cdef extern from *:
    """
    #include <cstdint>
    #include <cstdlib>
    #include <cstring>
    #ifdef __linux__
    #include <sys/mman.h>
    #endif

    /* Flat open-addressing hash map: 5x uint64 key (40 packed exponent
       bytes), int64 value.  Linear probing, power-of-two capacity, grown at
       ~0.7 load.  No per-entry allocation; entries are never deleted (zero
       values are dropped when the table is flattened).  Tables are backed
       by 2MB-aligned, hugepage-advised memory: the accumulation pattern is
       random access over hundreds of MB and 4K TLB misses dominate
       otherwise. */

    static void* big_alloc(size_t size) {
        const size_t align = 1 << 21;
        if (size < align / 2)  /* hugepages only pay off for large tables */
            return malloc(size);
        size = (size + align - 1) & ~(align - 1);
        void* ptr = aligned_alloc(align, size);
        if (!ptr) return NULL;
    #ifdef __linux__
        madvise(ptr, size, MADV_HUGEPAGE);
    #endif
        return ptr;
    }

    struct PMap {
        uint64_t* keys;     /* 5 words per slot */
        long long* vals;
        uint8_t* used;
        size_t cap;         /* power of two */
        size_t count;
    };

    static inline uint64_t pkey_hash(const uint64_t* w) {
        uint64_t h = 0x9E3779B97F4A7C15ULL;
        for (int i = 0; i < 5; ++i) {
            uint64_t x = w[i] * 0x9E3779B185EBCA87ULL;
            x = (x << 31) | (x >> 33);
            x *= 0xC2B2AE3D27D4EB4FULL;
            h ^= x;
            h = ((h << 27) | (h >> 37)) * 5ULL + 0x52DCE729ULL;
        }
        h ^= h >> 33;
        h *= 0xFF51AFD7ED558CCDULL;
        h ^= h >> 33;
        return h;
    }

    static void pmap_alloc(PMap* m, size_t cap) {
        m->keys = (uint64_t*)big_alloc(cap * 5 * sizeof(uint64_t));
        m->vals = (long long*)big_alloc(cap * sizeof(long long));
        m->used = (uint8_t*)big_alloc(cap);
        std::memset(m->used, 0, cap);
        m->cap = cap;
        m->count = 0;
    }

    static void* pmap_new(size_t reserve) {
        size_t cap = 64;
        while (cap * 7 < reserve * 10) cap <<= 1;
        PMap* m = (PMap*)malloc(sizeof(PMap));
        pmap_alloc(m, cap);
        return (void*)m;
    }

    static void pmap_free(void* h) {
        PMap* m = (PMap*)h;
        free(m->keys); free(m->vals); free(m->used); free(m);
    }

    static size_t pmap_size(void* h) { return ((PMap*)h)->count; }

    static void pmap_grow(PMap* m) {
        PMap old = *m;
        pmap_alloc(m, old.cap << 1);
        size_t mask = m->cap - 1;
        for (size_t i = 0; i < old.cap; ++i) {
            if (!old.used[i]) continue;
            const uint64_t* w = old.keys + 5 * i;
            size_t idx = pkey_hash(w) & mask;
            while (m->used[idx]) idx = (idx + 1) & mask;
            std::memcpy(m->keys + 5 * idx, w, 40);
            m->vals[idx] = old.vals[i];
            m->used[idx] = 1;
            ++m->count;
        }
        free(old.keys); free(old.vals); free(old.used);
    }

    static inline void pmap_accum(PMap* m, const uint64_t* w, long long delta,
                                  long long p) {
        size_t mask = m->cap - 1;
        size_t idx = pkey_hash(w) & mask;
        while (m->used[idx]) {
            const uint64_t* kw = m->keys + 5 * idx;
            if (kw[0] == w[0] && kw[1] == w[1] && kw[2] == w[2]
                && kw[3] == w[3] && kw[4] == w[4]) {
                long long v = m->vals[idx] + delta;
                if (p) v %= p;
                m->vals[idx] = v;
                return;
            }
            idx = (idx + 1) & mask;
        }
        std::memcpy(m->keys + 5 * idx, w, 40);
        m->vals[idx] = delta;
        m->used[idx] = 1;
        if (++m->count * 10 >= m->cap * 7) pmap_grow(m);
    }

    static inline void pmap_accum_h(PMap* m, const uint64_t* w, uint64_t h,
                                    long long delta, long long p) {
        size_t mask = m->cap - 1;
        size_t idx = h & mask;
        while (m->used[idx]) {
            const uint64_t* kw = m->keys + 5 * idx;
            if (kw[0] == w[0] && kw[1] == w[1] && kw[2] == w[2]
                && kw[3] == w[3] && kw[4] == w[4]) {
                long long v = m->vals[idx] + delta;
                if (p) v %= p;
                m->vals[idx] = v;
                return;
            }
            idx = (idx + 1) & mask;
        }
        std::memcpy(m->keys + 5 * idx, w, 40);
        m->vals[idx] = delta;
        m->used[idx] = 1;
        if (++m->count * 10 >= m->cap * 7) pmap_grow(m);
    }

    /* acc += (-1)^negate * a * b, coefficients mod p when p > 0.
       Pairs are staged through a small ring so the hash slot for each key
       is prefetched well before it is touched; the accumulation is memory
       latency bound on large tables otherwise. */
    #define FMA_LOOKAHEAD 16
    static void pmap_fma_raw(void* h,
                             const char* ak, const long long* ac, size_t na,
                             const char* bk, const long long* bc, size_t nb,
                             int negate, long long p) {
        PMap* m = (PMap*)h;
        uint64_t ka[5];
        uint64_t kbuf[FMA_LOOKAHEAD][5];
        uint64_t hbuf[FMA_LOOKAHEAD];
        long long dbuf[FMA_LOOKAHEAD];
        int fill = 0;
        for (size_t i = 0; i < na; ++i) {
            std::memcpy(ka, ak + 40 * i, 40);
            long long ca = ac[i];
            if (negate) ca = p ? p - ca : -ca;
            const char* brow = bk;
            for (size_t j = 0; j < nb; ++j, brow += 40) {
                uint64_t* k = kbuf[fill];
                std::memcpy(k, brow, 40);
                k[0] += ka[0]; k[1] += ka[1]; k[2] += ka[2];
                k[3] += ka[3]; k[4] += ka[4];
                long long prod = ca * bc[j];
                if (p) prod %= p;
                dbuf[fill] = prod;
                uint64_t hv = pkey_hash(k);
                hbuf[fill] = hv;
                size_t idx = hv & (m->cap - 1);
                __builtin_prefetch(&m->used[idx]);
                __builtin_prefetch(&m->keys[5 * idx]);
                if (++fill == FMA_LOOKAHEAD) {
                    for (int q = 0; q < FMA_LOOKAHEAD; ++q)
                        pmap_accum_h(m, kbuf[q], hbuf[q], dbuf[q], p);
                    fill = 0;
                }
            }
        }
        for (int q = 0; q < fill; ++q)
            pmap_accum_h(m, kbuf[q], hbuf[q], dbuf[q], p);
    }

    /* Write the nonzero entries out; returns how many were written. */
    static size_t pmap_flatten(void* h, char* keys_out, long long* coefs_out) {
        PMap* m = (PMap*)h;
        size_t n = 0;
        for (size_t i = 0; i < m->cap; ++i) {
            if (m->used[i] && m->vals[i] != 0) {
                std::memcpy(keys_out + 40 * n, m->keys + 5 * i, 40);
                coefs_out[n] = m->vals[i];
                ++n;
            }
        }
        return n;
    }
    """
    void* pmap_new(size_t reserve)
    void pmap_free(void* h)
    size_t pmap_size(void* h)
    void pmap_fma_raw(void* h, const char* ak, const long long* ac, size_t na,
                      const char* bk, const long long* bc, size_t nb,
                      int negate, long long p)
    size_t pmap_flatten(void* h, char* keys_out, long long* coefs_out)


# ---------------------------------------------------------------------------
# dict-of-tuples kernels
# ---------------------------------------------------------------------------

cdef inline tuple tuple_add(tuple ea, tuple eb):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(ea)
    cdef tuple out = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = (<object>PyTuple_GET_ITEM(ea, i)) + (<object>PyTuple_GET_ITEM(eb, i))
        Py_INCREF(v)
        PyTuple_SET_ITEM(out, i, v)
    return out


def add_terms(dict a, dict b):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    cdef PyObject* ptr
    cdef object e, c, v
    for e, c in b.items():
        ptr = PyDict_GetItem(out, e)
        if ptr == NULL:
            PyDict_SetItem(out, e, c)
        else:
            v = (<object>ptr) + c
            if v:
                PyDict_SetItem(out, e, v)
            else:
                PyDict_DelItem(out, e)
    return out


def neg_terms(dict a):
    cdef dict out = {}
    cdef object e, c
    for e, c in a.items():
        PyDict_SetItem(out, e, -c)
    return out


def scale_terms(dict a, c):
    cdef dict out = {}
    cdef object e, v
    for e, v in a.items():
        PyDict_SetItem(out, e, c * v)
    return out


def mul_terms(dict a, dict b):
    cdef dict out = {}
    fma_terms(out, a, b, False)
    return out


def fma_terms(dict acc, dict a, dict b, bint negate):
    if not a or not b:
        return
    if len(a) < len(b):
        a, b = b, a
    cdef list bitems = list(b.items())
    cdef PyObject* ptr
    cdef object ea, ca, eb, cb, e, v
    cdef Py_ssize_t j, nb = len(bitems)
    for ea, ca in a.items():
        if negate:
            ca = -ca
        for j in range(nb):
            eb = <object>PyTuple_GET_ITEM(<tuple>bitems[j], 0)
            cb = <object>PyTuple_GET_ITEM(<tuple>bitems[j], 1)
            e = tuple_add(<tuple>ea, <tuple>eb)
            ptr = PyDict_GetItem(acc, e)
            if ptr == NULL:
                PyDict_SetItem(acc, e, ca * cb)
            else:
                v = (<object>ptr) + ca * cb
                if v:
                    PyDict_SetItem(acc, e, v)
                else:
                    PyDict_DelItem(acc, e)


def sub_scaled_terms(dict rem, tuple exps, coeff, dict b):
    cdef list new_keys = []
    cdef PyObject* ptr
    cdef object eb, cb, e, v
    for eb, cb in b.items():
        e = tuple_add(exps, <tuple>eb)
        ptr = PyDict_GetItem(rem, e)
        if ptr == NULL:
            PyDict_SetItem(rem, e, -coeff * cb)
            new_keys.append(e)
        else:
            v = (<object>ptr) - coeff * cb
            if v:
                PyDict_SetItem(rem, e, v)
            else:
                PyDict_DelItem(rem, e)
    return new_keys


# ---------------------------------------------------------------------------
# dict-of-tuples kernels, coefficients mod p
# ---------------------------------------------------------------------------

def add_terms_mod(dict a, dict b, p):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    cdef PyObject* ptr
    cdef object e, c, v
    for e, c in b.items():
        ptr = PyDict_GetItem(out, e)
        if ptr == NULL:
            PyDict_SetItem(out, e, c)
        else:
            v = ((<object>ptr) + c) % p
            if v:
                PyDict_SetItem(out, e, v)
            else:
                PyDict_DelItem(out, e)
    return out


def neg_terms_mod(dict a, p):
    cdef dict out = {}
    cdef object e, c
    for e, c in a.items():
        PyDict_SetItem(out, e, p - c)
    return out


def scale_terms_mod(dict a, c, p):
    cdef dict out = {}
    cdef object e, v, w
    for e, v in a.items():
        w = (c * v) % p
        if w:
            PyDict_SetItem(out, e, w)
    return out


def mul_terms_mod(dict a, dict b, p):
    cdef dict out = {}
    fma_terms_mod(out, a, b, False, p)
    return out


def fma_terms_mod(dict acc, dict a, dict b, bint negate, p):
    if not a or not b:
        return
    if len(a) < len(b):
        a, b = b, a
    cdef list bitems = list(b.items())
    cdef PyObject* ptr
    cdef object ea, ca, eb, cb, e, v
    cdef Py_ssize_t j, nb = len(bitems)
    for ea, ca in a.items():
        if negate:
            ca = p - ca
        for j in range(nb):
            eb = <object>PyTuple_GET_ITEM(<tuple>bitems[j], 0)
            cb = <object>PyTuple_GET_ITEM(<tuple>bitems[j], 1)
            e = tuple_add(<tuple>ea, <tuple>eb)
            ptr = PyDict_GetItem(acc, e)
            if ptr == NULL:
                v = (ca * cb) % p
                if v:
                    PyDict_SetItem(acc, e, v)
            else:
                v = ((<object>ptr) + ca * cb) % p
                if v:
                    PyDict_SetItem(acc, e, v)
                else:
                    PyDict_DelItem(acc, e)


def sub_scaled_terms_mod(dict rem, tuple exps, coeff, dict b, p):
    cdef list new_keys = []
    cdef PyObject* ptr
    cdef object eb, cb, e, v
    cdef object nc = p - coeff
    for eb, cb in b.items():
        e = tuple_add(exps, <tuple>eb)
        ptr = PyDict_GetItem(rem, e)
        if ptr == NULL:
            v = (nc * cb) % p
            if v:
                PyDict_SetItem(rem, e, v)
                new_keys.append(e)
        else:
            v = ((<object>ptr) + nc * cb) % p
            if v:
                PyDict_SetItem(rem, e, v)
            else:
                PyDict_DelItem(rem, e)
    return new_keys


# ---------------------------------------------------------------------------
# generic laplace determinant on tuple-keyed dicts
# ---------------------------------------------------------------------------

def det_laplace_terms(list rows, int nvars):
    cdef int n = len(rows)
    cdef dict level = {0: {(0,) * nvars: 1}}
    cdef dict nxt, acc, entry, prev
    cdef int k, pos, j, mask
    for k in range(1, n + 1):
        row_entries = rows[k - 1]
        nxt = {}
        for subset in combinations(range(n), k):
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


def det_laplace_terms_mod(list rows, int nvars, p):
    cdef int n = len(rows)
    cdef dict level = {0: {(0,) * nvars: 1 % p}}
    cdef dict nxt, acc, entry, prev
    cdef int k, pos, j, mask
    for k in range(1, n + 1):
        row_entries = rows[k - 1]
        nxt = {}
        for subset in combinations(range(n), k):
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


# ---------------------------------------------------------------------------
# packed fast path
# ---------------------------------------------------------------------------

cdef _flat_from_dict(dict terms, int width):
    """tuple-keyed dict -> (keys bytes blob, coefs bytes blob, count)."""
    if width > PACKED_WIDTH:
        raise ValueError("too many variables for the packed representation")
    cdef Py_ssize_t cnt = len(terms)
    cdef bytes kb = PyBytes_FromStringAndSize(NULL, 40 * cnt)
    cdef bytes cb = PyBytes_FromStringAndSize(NULL, 8 * cnt)
    cdef char* kp = PyBytes_AS_STRING(kb)
    cdef long long* cp = <long long*>PyBytes_AS_STRING(cb)
    cdef Py_ssize_t idx = 0, i
    cdef long long cval
    cdef int v
    cdef tuple e
    for e, c in terms.items():
        for i in range(40):
            kp[40 * idx + i] = 0
        for i in range(width):
            v = <object>PyTuple_GET_ITEM(e, i)
            if v > 255 or v < 0:
                raise OverflowError("exponent out of packed range")
            kp[40 * idx + i] = <char>v
        cval = c  # raises OverflowError beyond int64, certification failed
        cp[idx] = cval
        idx += 1
    return kb, cb, cnt


cdef dict _flat_to_dict(bytes kb, bytes cb, Py_ssize_t cnt, int width):
    cdef dict out = {}
    cdef const char* kp = PyBytes_AS_STRING(kb)
    cdef const long long* cp = <const long long*>PyBytes_AS_STRING(cb)
    cdef Py_ssize_t idx, i
    cdef tuple e
    cdef object v
    for idx in range(cnt):
        e = PyTuple_New(width)
        for i in range(width):
            v = <int>(<unsigned char>kp[40 * idx + i])
            Py_INCREF(v)
            PyTuple_SET_ITEM(e, i, v)
        PyDict_SetItem(out, e, cp[idx])
    return out


cdef _flatten_pmap(void* m):
    cdef size_t cnt = pmap_size(m)
    cdef bytes kb = PyBytes_FromStringAndSize(NULL, 40 * cnt)
    cdef bytes cb = PyBytes_FromStringAndSize(NULL, 8 * cnt)
    cdef size_t real = pmap_flatten(m, PyBytes_AS_STRING(kb),
                                    <long long*>PyBytes_AS_STRING(cb))
    if real != cnt:
        kb = kb[:40 * real]
        cb = cb[:8 * real]
    return kb, cb, <Py_ssize_t>real


def packed_mul_terms(dict a, dict b, int width, p=0):
    cdef long long pp = p
    ak, ac, na = _flat_from_dict(a, width)
    bk, bc, nb = _flat_from_dict(b, width)
    cdef void* m = pmap_new(<size_t>min(na * nb, 4 * max(na, nb) + 16))
    try:
        pmap_fma_raw(m, PyBytes_AS_STRING(<bytes>ak),
                     <const long long*>PyBytes_AS_STRING(<bytes>ac), <size_t>na,
                     PyBytes_AS_STRING(<bytes>bk),
                     <const long long*>PyBytes_AS_STRING(<bytes>bc), <size_t>nb,
                     0, pp)
        rk, rc, cnt = _flatten_pmap(m)
    finally:
        pmap_free(m)
    return _flat_to_dict(rk, rc, cnt, width)


cdef _det_engine(list rows, int width, long long pp):
    """Subset-memoized Laplace over packed flats.

    Returns the final (keys, coefs, count) flat; only two memo levels are
    alive at once.
    """
    cdef int n = len(rows)
    cdef list flat_rows = []
    cdef Py_ssize_t biggest = 1
    for row in rows:
        flat_row = []
        for terms in row:
            flat = _flat_from_dict(terms, width)
            flat_row.append(flat)
        flat_rows.append(flat_row)
    one = 1 % pp if pp else 1
    level = {0: _flat_from_dict({(0,) * width: one}, width)}
    cdef int k, pos, j, mask, full = (1 << n) - 1
    cdef void* m
    for k in range(1, n + 1):
        row_entries = flat_rows[k - 1]
        nxt = {}
        for subset in combinations(range(n), k):
            mask = 0
            for j in subset:
                mask |= 1 << j
            biggest = 1
            for pos in range(k):
                prev_cnt = level[mask & ~(1 << subset[pos])][2]
                if prev_cnt > biggest:
                    biggest = prev_cnt
            m = pmap_new(<size_t>(2 * biggest))
            try:
                for pos in range(k):
                    j = subset[pos]
                    ek, ec, ecnt = row_entries[j]
                    if ecnt == 0:
                        continue
                    pk, pc, pcnt = level[mask & ~(1 << j)]
                    if pcnt == 0:
                        continue
                    pmap_fma_raw(m, PyBytes_AS_STRING(<bytes>ek),
                                 <const long long*>PyBytes_AS_STRING(<bytes>ec),
                                 <size_t>ecnt,
                                 PyBytes_AS_STRING(<bytes>pk),
                                 <const long long*>PyBytes_AS_STRING(<bytes>pc),
                                 <size_t>pcnt,
                                 (k - 1 + pos) % 2, pp)
                nxt[mask] = _flatten_pmap(m)
            finally:
                pmap_free(m)
        level = nxt
    return level[full]


def packed_det_laplace(list rows, int width, p=0):
    rk, rc, cnt = _det_engine(rows, width, <long long>p)
    return _flat_to_dict(rk, rc, cnt, width)
