"""Pure-Python hot kernels. ``_ckernels.pyx`` mirrors these function by function."""

from math import gcd


def _primitive(row):
    d = gcd(*row)
    if d > 1:
        return [x // d for x in row]
    return row


def rref_int(rows, ncols):
    """Integer Gauss-Jordan elimination with primitive rows.

    Returns ``(pivots, rows)`` where every returned row is primitive, has a
    positive pivot, and is zero in every other row's pivot column.
    """
    a = [list(r) for r in rows if any(r)]
    m = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = -1
        best = 0
        for i in range(r, m):
            v = a[i][c]
            if v:
                av = v if v > 0 else -v
                if p < 0 or av < best:
                    p, best = i, av
                    if av == 1:
                        break
        if p < 0:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        pr = a[r]
        pv = pr[c]
        for i in range(m):
            if i == r:
                continue
            row = a[i]
            v = row[c]
            if v:
                g = gcd(pv, v)
                mp, mv = pv // g, v // g
                a[i] = _primitive([mp * x - mv * y for x, y in zip(row, pr)])
        pivots.append(c)
        r += 1
    out = []
    for row, c in zip(a[:r], pivots):
        row = _primitive(row)
        if row[c] < 0:
            row = [-x for x in row]
        out.append(row)
    return pivots, out


def rank_int(rows, ncols):
    """Rank of an integer matrix by fraction-free forward elimination."""
    a = [list(r) for r in rows if any(r)]
    m = len(a)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = -1
        for i in range(r, m):
            if a[i][c]:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        pr = a[r]
        pv = pr[c]
        for i in range(r + 1, m):
            row = a[i]
            v = row[c]
            if v:
                g = gcd(pv, v)
                mp, mv = pv // g, v // g
                a[i] = _primitive([mp * x - mv * y for x, y in zip(row, pr)])
        r += 1
    return r


def matmul_int(a, b):
    """Product of integer matrices given as lists of rows."""
    if not a:
        return []
    cols = list(zip(*b)) if b else []
    if not cols:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def wedge_int(table, a_re, a_im, b_re, b_im, out_len):
    """Bilinear accumulation ``out[io] += sign * a[ia] * b[ib]`` over Z[i].

    ``table[ia]`` is a list of ``(ib, io, sign)`` triples.
    """
    o_re = [0] * out_len
    o_im = [0] * out_len
    for ia in range(len(table)):
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
                o_re[io] += ar * br - ai * bi
                o_im[io] += ar * bi + ai * br
            else:
                o_re[io] -= ar * br - ai * bi
                o_im[io] -= ar * bi + ai * br
    return o_re, o_im
