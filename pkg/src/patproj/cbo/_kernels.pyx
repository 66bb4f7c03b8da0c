# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Close-by-One kernels for interval and attribute-set data.

Both walk the canonical CbO tree iteratively with an explicit stack and
release the GIL except while handing a concept back to Python. Extents are
multi-word object bitsets; results are ``(extent_mask, intent...)`` tuples
in discovery order.

An interval intent is stored as ``lo``/``hi`` arrays; the adjoined top is
encoded as the empty interval ``[+inf, -inf]``, which is neutral for the
convex hull and is subsumed by no real interval.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

cdef extern from "math.h" nogil:
    double INFINITY


cdef object _mask(const uint64_t* w, Py_ssize_t nw):
    cdef Py_ssize_t i
    r = 0
    for i in range(nw - 1, -1, -1):
        r = (r << 64) | w[i]
    return r


cdef object _floats(const double* v, Py_ssize_t k):
    return tuple([v[i] for i in range(k)])


cdef inline bint _iv_subsumed(const double* ilo, const double* ihi,
                              const double[:, ::1] lo, const double[:, ::1] hi,
                              Py_ssize_t g, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t c
    for c in range(k):
        if ilo[c] > lo[g, c] or hi[g, c] > ihi[c]:
            return False
    return True


def cbo_intervals(const double[:, ::1] lo, const double[:, ::1] hi,
                  Py_ssize_t first, Py_ssize_t last, bint emit_root):
    """Concepts of interval data ``lo[g, c] <= hi[g, c]``.

    Explores the root's generators ``first <= j < last`` (and everything
    below them); the root itself is returned only when ``emit_root``.
    """
    cdef Py_ssize_t n = lo.shape[0]
    cdef Py_ssize_t k = lo.shape[1]
    cdef Py_ssize_t nw = (n + 63) // 64
    cdef Py_ssize_t levels = n + 1
    cdef Py_ssize_t depth, j, g, c, w, lim
    cdef uint64_t bit
    cdef uint64_t* cur
    cdef uint64_t* nxt
    cdef double* plo
    cdef double* phi
    cdef double* clo
    cdef double* chi
    cdef bint ok
    if n == 0 or k == 0:
        raise ValueError("interval kernel needs at least one object and one attribute")
    cdef uint64_t* ext = <uint64_t*> malloc(levels * nw * sizeof(uint64_t))
    cdef double* ilo = <double*> malloc(levels * k * sizeof(double))
    cdef double* ihi = <double*> malloc(levels * k * sizeof(double))
    cdef Py_ssize_t* nextj = <Py_ssize_t*> malloc(levels * sizeof(Py_ssize_t))
    if ext == NULL or ilo == NULL or ihi == NULL or nextj == NULL:
        free(ext); free(ilo); free(ihi); free(nextj)
        raise MemoryError()
    out = []
    try:
        with nogil:
            for c in range(k):
                ilo[c] = INFINITY
                ihi[c] = -INFINITY
            for w in range(nw):
                ext[w] = 0
            for g in range(n):
                if _iv_subsumed(ilo, ihi, lo, hi, g, k):
                    ext[g >> 6] |= (<uint64_t> 1) << (g & 63)
            if emit_root:
                with gil:
                    out.append((_mask(ext, nw), _floats(ilo, k), _floats(ihi, k)))
            nextj[0] = first
            depth = 0
            while depth >= 0:
                lim = last if depth == 0 else n
                j = nextj[depth]
                if j >= lim:
                    depth -= 1
                    continue
                nextj[depth] = j + 1
                cur = ext + depth * nw
                bit = (<uint64_t> 1) << (j & 63)
                if cur[j >> 6] & bit:
                    continue
                nxt = cur + nw
                plo = ilo + depth * k
                phi = ihi + depth * k
                clo = plo + k
                chi = phi + k
                for c in range(k):
                    clo[c] = plo[c] if plo[c] < lo[j, c] else lo[j, c]
                    chi[c] = phi[c] if phi[c] > hi[j, c] else hi[j, c]
                memcpy(nxt, cur, nw * sizeof(uint64_t))
                nxt[j >> 6] |= bit
                ok = True
                for g in range(n):
                    if g == j or (cur[g >> 6] >> (g & 63)) & 1:
                        continue
                    if _iv_subsumed(clo, chi, lo, hi, g, k):
                        if g < j:
                            ok = False
                            break
                        nxt[g >> 6] |= (<uint64_t> 1) << (g & 63)
                if ok:
                    with gil:
                        out.append((_mask(nxt, nw), _floats(clo, k), _floats(chi, k)))
                    depth += 1
                    nextj[depth] = j + 1
    finally:
        free(ext)
        free(ilo)
        free(ihi)
        free(nextj)
    return out


cdef inline bint _bits_subsumed(const uint64_t* intent, const uint64_t[:, ::1] rows,
                                Py_ssize_t g, Py_ssize_t mw) noexcept nogil:
    cdef Py_ssize_t w
    for w in range(mw):
        if intent[w] & ~rows[g, w]:
            return False
    return True


def cbo_binary(const uint64_t[:, ::1] rows, Py_ssize_t nattrs,
               Py_ssize_t first, Py_ssize_t last, bint emit_root):
    """Concepts of a binary context given as attribute bit rows.

    Returns ``(extent_mask, intent_mask)`` pairs; same traversal contract
    as :func:`cbo_intervals`.
    """
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t mw = rows.shape[1]
    cdef Py_ssize_t nw = (n + 63) // 64
    cdef Py_ssize_t levels = n + 1
    cdef Py_ssize_t depth, j, g, w, lim
    cdef uint64_t bit
    cdef uint64_t* cur
    cdef uint64_t* nxt
    cdef uint64_t* pint
    cdef uint64_t* cint
    cdef bint ok
    if n == 0 or mw == 0:
        raise ValueError("binary kernel needs at least one object and one word")
    cdef uint64_t* ext = <uint64_t*> malloc(levels * nw * sizeof(uint64_t))
    cdef uint64_t* itn = <uint64_t*> malloc(levels * mw * sizeof(uint64_t))
    cdef Py_ssize_t* nextj = <Py_ssize_t*> malloc(levels * sizeof(Py_ssize_t))
    if ext == NULL or itn == NULL or nextj == NULL:
        free(ext); free(itn); free(nextj)
        raise MemoryError()
    out = []
    try:
        with nogil:
            for w in range(mw):
                if (w + 1) * 64 <= nattrs:
                    itn[w] = ~(<uint64_t> 0)
                elif w * 64 < nattrs:
                    itn[w] = ((<uint64_t> 1) << (nattrs - w * 64)) - 1
                else:
                    itn[w] = 0
            for w in range(nw):
                ext[w] = 0
            for g in range(n):
                if _bits_subsumed(itn, rows, g, mw):
                    ext[g >> 6] |= (<uint64_t> 1) << (g & 63)
            if emit_root:
                with gil:
                    out.append((_mask(ext, nw), _mask(itn, mw)))
            nextj[0] = first
            depth = 0
            while depth >= 0:
                lim = last if depth == 0 else n
                j = nextj[depth]
                if j >= lim:
                    depth -= 1
                    continue
                nextj[depth] = j + 1
                cur = ext + depth * nw
                bit = (<uint64_t> 1) << (j & 63)
                if cur[j >> 6] & bit:
                    continue
                nxt = cur + nw
                pint = itn + depth * mw
                cint = pint + mw
                for w in range(mw):
                    cint[w] = pint[w] & rows[j, w]
                memcpy(nxt, cur, nw * sizeof(uint64_t))
                nxt[j >> 6] |= bit
                ok = True
                for g in range(n):
                    if g == j or (cur[g >> 6] >> (g & 63)) & 1:
                        continue
                    if _bits_subsumed(cint, rows, g, mw):
                        if g < j:
                            ok = False
                            break
                        nxt[g >> 6] |= (<uint64_t> 1) << (g & 63)
                if ok:
                    with gil:
                        out.append((_mask(nxt, nw), _mask(cint, mw)))
                    depth += 1
                    nextj[depth] = j + 1
    finally:
        free(ext)
        free(itn)
        free(nextj)
    return out
