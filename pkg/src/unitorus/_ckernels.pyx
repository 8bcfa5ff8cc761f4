# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; same contracts as ``_kernels_py``."""

from math import gcd


cdef list _primitive(list row):
    d = gcd(*row)
    if d > 1:
        return [x // d for x in row]
    return row


def rref_int(rows, Py_ssize_t ncols):
    cdef list a = [list(x) for x in rows if any(x)]
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t r = 0, c, i, j, p, n
    cdef list pivots = []
    cdef list pr, row, new
    for c in range(ncols):
        if r == m:
            break
        p = -1
        best = 0
        for i in range(r, m):
            v = (<list>a[i])[c]
            if v:
                av = v if v > 0 else -v
                if p < 0 or av < best:
                    p = i
                    best = av
                    if av == 1:
                        break
        if p < 0:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        pr = <list>a[r]
        pv = pr[c]
        n = len(pr)
        for i in range(m):
            if i == r:
                continue
            row = <list>a[i]
            v = row[c]
            if v:
                g = gcd(pv, v)
                mp = pv // g
                mv = v // g
                new = [None] * n
                for j in range(n):
                    new[j] = mp * row[j] - mv * pr[j]
                a[i] = _primitive(new)
        pivots.append(c)
        r += 1
    cdef list out = []
    for i in range(r):
        row = _primitive(<list>a[i])
        if row[pivots[i]] < 0:
            row = [-x for x in row]
        out.append(row)
    return pivots, out


def rank_int(rows, Py_ssize_t ncols):
    cdef list a = [list(x) for x in rows if any(x)]
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t r = 0, c, i, j, p, n
    cdef list pr, row, new
    for c in range(ncols):
        if r == m:
            break
        p = -1
        for i in range(r, m):
            if (<list>a[i])[c]:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        pr = <list>a[r]
        pv = pr[c]
        n = len(pr)
        for i in range(r + 1, m):
            row = <list>a[i]
            v = row[c]
            if v:
                g = gcd(pv, v)
                mp = pv // g
                mv = v // g
                new = [None] * n
                for j in range(n):
                    new[j] = mp * row[j] - mv * pr[j]
                a[i] = _primitive(new)
        r += 1
    return r


def matmul_int(a, b):
    cdef Py_ssize_t m = len(a)
    if m == 0:
        return []
    cdef Py_ssize_t k = len(b)
    if k == 0:
        return [[] for _ in range(m)]
    cdef Py_ssize_t n = len(b[0])
    cdef Py_ssize_t i, j, t
    cdef list out = []
    cdef list row, arow, brow
    for i in range(m):
        arow = <list>a[i] if type(a[i]) is list else list(a[i])
        row = [0] * n
        for t in range(k):
            x = arow[t]
            if not x:
                continue
            brow = <list>b[t] if type(b[t]) is list else list(b[t])
            for j in range(n):
                y = brow[j]
                if y:
                    row[j] = row[j] + x * y
        out.append(row)
    return out


def wedge_int(table, a_re, a_im, b_re, b_im, Py_ssize_t out_len):
    cdef list o_re = [0] * out_len
    cdef list o_im = [0] * out_len
    cdef Py_ssize_t ia, na = len(table), io
    for ia in range(na):
        ar = a_re[ia]
        ai = a_im[ia]
        if not ar and not ai:
            continue
        for ib, io, s in table[ia]:
            br = b_re[ib]
            bi = b_im[ib]
            if not br and not bi:
                continue
            if s > 0:
                o_re[io] = o_re[io] + (ar * br - ai * bi)
                o_im[io] = o_im[io] + (ar * bi + ai * br)
            else:
                o_re[io] = o_re[io] - (ar * br - ai * bi)
                o_im[io] = o_im[io] - (ar * bi + ai * br)
    return o_re, o_im
