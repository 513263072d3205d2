# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts as ``_kernels_py``."""

from libc.stdlib cimport malloc, free, calloc
from libc.stdint cimport int64_t, uint64_t
from math import gcd

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

IMPLEMENTATION = "cython"


cdef tuple _primitive(list cols, list vals):
    cdef object g = 0
    cdef Py_ssize_t i, n = len(vals)
    for i in range(n):
        g = gcd(g, vals[i])
        if g == 1:
            break
    if vals[0] < 0:
        g = -g
    if g != 1:
        vals = [v // g for v in vals]
    return cols, vals


cdef tuple _combine(object a, list rc, list rv, object b, list pc, list pv):
    cdef list oc = []
    cdef list ov = []
    cdef Py_ssize_t i = 0, j = 0
    cdef Py_ssize_t nr = len(rc), np_ = len(pc)
    cdef long ci, cj
    cdef object v
    cdef bint a_one = (a == 1)
    while i < nr and j < np_:
        ci = rc[i]
        cj = pc[j]
        if ci < cj:
            oc.append(ci)
            ov.append(rv[i] if a_one else a * rv[i])
            i += 1
        elif cj < ci:
            oc.append(cj)
            ov.append(-b * pv[j])
            j += 1
        else:
            v = (rv[i] if a_one else a * rv[i]) - b * pv[j]
            if v:
                oc.append(ci)
                ov.append(v)
            i += 1
            j += 1
    while i < nr:
        oc.append(rc[i])
        ov.append(rv[i] if a_one else a * rv[i])
        i += 1
    while j < np_:
        oc.append(pc[j])
        ov.append(-b * pv[j])
        j += 1
    return oc, ov


def echelon(rows, Py_ssize_t ncols):
    cdef dict pivots = {}
    cdef list rc, rv, pc, pv
    cdef object a, b, g, piv
    cdef long lead
    for cols, vals in rows:
        if not cols:
            continue
        rc, rv = _primitive(list(cols), list(vals))
        while rc:
            lead = rc[0]
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = _primitive(rc, rv)
                break
            pc, pv = piv
            a = pv[0]
            b = rv[0]
            g = gcd(a, b)
            rc, rv = _combine(a // g, rc, rv, b // g, pc, pv)
            if rc:
                rc, rv = _primitive(rc, rv)
    return [pivots[c] for c in sorted(pivots)]


def back_substitute(pivot_rows):
    cdef Py_ssize_t k, idx, npiv = len(pivot_rows)
    cdef dict lead_pos = {}
    cdef list done = [None] * npiv
    cdef list leads = [], rc, rv, oc, ov, cols
    cdef dict acc
    cdef bint hit
    cdef object a, b, c, g, mul_self, mul_other, v
    for k in range(npiv):
        leads.append(pivot_rows[k][0][0])
        lead_pos[pivot_rows[k][0][0]] = k
    for k in range(npiv - 1, -1, -1):
        rc, rv = pivot_rows[k]
        hit = False
        for idx in range(1, len(rc)):
            if rc[idx] in lead_pos:
                hit = True
                break
        if not hit:
            done[k] = (rc, rv)
            continue
        acc = dict(zip(rc, rv))
        for c in leads[k + 1:]:
            b = acc.get(c)
            if not b:
                continue
            oc, ov = done[lead_pos[c]]
            a = ov[0]
            g = gcd(a, b)
            mul_self = a // g
            mul_other = b // g
            if mul_self != 1:
                for key in acc:
                    acc[key] *= mul_self
            for c2, v2 in zip(oc, ov):
                v = acc.get(c2, 0) - mul_other * v2
                if v:
                    acc[c2] = v
                else:
                    acc.pop(c2, None)
        cols = sorted(acc)
        done[k] = _primitive(cols, [acc[c] for c in cols])
    return done


cdef inline uint64_t _mulmod(uint64_t a, uint64_t b, uint64_t p) nogil:
    return <uint64_t>((<u128>a * b) % p)


cdef uint64_t _powmod(uint64_t a, uint64_t e, uint64_t p) nogil:
    cdef uint64_t r = 1
    while e:
        if e & 1:
            r = _mulmod(r, a, p)
        a = _mulmod(a, a, p)
        e >>= 1
    return r


def rank_mod_p(rows, Py_ssize_t ncols, uint64_t p):
    """Dense-accumulator sparse elimination with C arithmetic modulo ``p``."""
    cdef dict pivots = {}        # lead -> (cols list, vals list) normalised, lead value 1
    cdef uint64_t *work = <uint64_t *> calloc(ncols if ncols > 0 else 1, sizeof(uint64_t))
    cdef char *mark = <char *> calloc(ncols if ncols > 0 else 1, sizeof(char))
    cdef list support, pc, pv, newc, newv
    cdef Py_ssize_t t, c, lead, n_pc
    cdef uint64_t b, inv, w, v
    cdef object vv
    if work == NULL or mark == NULL:
        free(work)
        free(mark)
        raise MemoryError()
    try:
        for cols, vals in rows:
            support = []
            for c, vv in zip(cols, vals):
                v = <uint64_t>(vv % p)
                if v:
                    work[c] = v
                    mark[c] = 1
                    support.append(c)
            while True:
                lead = -1
                support.sort()
                for c in support:
                    if work[c]:
                        lead = c
                        break
                if lead < 0:
                    break
                piv = pivots.get(lead)
                if piv is None:
                    inv = _powmod(work[lead], p - 2, p)
                    newc = []
                    newv = []
                    for c in support:
                        if work[c]:
                            newc.append(c)
                            newv.append(_mulmod(work[c], inv, p))
                    pivots[lead] = (newc, newv)
                    break
                pc, pv = piv
                b = work[lead]
                n_pc = len(pc)
                for t in range(n_pc):
                    c = pc[t]
                    w = _mulmod(b, <uint64_t>pv[t], p)
                    v = work[c]
                    work[c] = v - w if v >= w else v + p - w
                    if not mark[c]:
                        mark[c] = 1
                        support.append(c)
            for c in support:
                work[c] = 0
                mark[c] = 0
    finally:
        free(work)
        free(mark)
    return len(pivots)


def assoc_scan(ptr, idx, val, Py_ssize_t dim, trace, Py_ssize_t lo=0, hi=None):
    """int64 version; the caller guarantees no overflow is possible."""
    cdef Py_ssize_t i_hi = dim if hi is None else hi
    cdef Py_ssize_t nnz = len(idx)
    cdef Py_ssize_t npairs = dim * dim
    cdef int64_t *P = <int64_t *> malloc((npairs + 1) * sizeof(int64_t))
    cdef int64_t *I = <int64_t *> malloc((nnz if nnz else 1) * sizeof(int64_t))
    cdef int64_t *V = <int64_t *> malloc((nnz if nnz else 1) * sizeof(int64_t))
    cdef int64_t *T = <int64_t *> malloc((dim if dim else 1) * sizeof(int64_t))
    cdef int64_t *L = <int64_t *> calloc(dim if dim else 1, sizeof(int64_t))
    cdef int64_t *R = <int64_t *> calloc(dim if dim else 1, sizeof(int64_t))
    cdef char *F = <char *> calloc(dim if dim else 1, sizeof(char))
    cdef int64_t *TOUCH = <int64_t *> malloc((dim if dim else 1) * sizeof(int64_t))
    cdef Py_ssize_t ntouch
    cdef Py_ssize_t i, j, k, t, s, l, m
    cdef int64_t c, tl, tr
    cdef long bad = 0
    cdef Py_ssize_t fi = -1, fj = -1, fk = -1
    cdef bint differ
    if not (P and I and V and T and L and R and F and TOUCH):
        free(P); free(I); free(V); free(T); free(L); free(R); free(F); free(TOUCH)
        raise MemoryError()
    try:
        for t in range(npairs + 1):
            P[t] = ptr[t]
        for t in range(nnz):
            I[t] = idx[t]
            V[t] = val[t]
        for t in range(dim):
            T[t] = trace[t]
        with nogil:
            for i in range(lo, i_hi):
                for j in range(dim):
                    for k in range(dim):
                        if P[i * dim + j] == P[i * dim + j + 1] and P[j * dim + k] == P[j * dim + k + 1]:
                            continue
                        ntouch = 0
                        for t in range(P[i * dim + j], P[i * dim + j + 1]):
                            l = I[t]
                            c = V[t]
                            for s in range(P[l * dim + k], P[l * dim + k + 1]):
                                m = I[s]
                                L[m] += c * V[s]
                                if not F[m]:
                                    F[m] = 1
                                    TOUCH[ntouch] = m
                                    ntouch += 1
                        for t in range(P[j * dim + k], P[j * dim + k + 1]):
                            l = I[t]
                            c = V[t]
                            for s in range(P[i * dim + l], P[i * dim + l + 1]):
                                m = I[s]
                                R[m] += c * V[s]
                                if not F[m]:
                                    F[m] = 1
                                    TOUCH[ntouch] = m
                                    ntouch += 1
                        differ = False
                        tl = 0
                        tr = 0
                        for t in range(ntouch):
                            m = TOUCH[t]
                            F[m] = 0
                            if L[m] != R[m]:
                                differ = True
                            tl += L[m] * T[m]
                            tr += R[m] * T[m]
                            L[m] = 0
                            R[m] = 0
                        if differ or tl != tr:
                            bad += 1
                            if fi < 0:
                                fi = i
                                fj = j
                                fk = k
    finally:
        free(P); free(I); free(V); free(T); free(L); free(R); free(F); free(TOUCH)
    return bad, ((fi, fj, fk) if fi >= 0 else None)
