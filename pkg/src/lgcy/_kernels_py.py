"""Pure-Python hot kernels.  ``_ckernels.pyx`` mirrors this module exactly.

Sparse rows are pairs ``(cols, vals)`` of equal-length lists with ``cols``
strictly increasing and every value a nonzero Python int.
"""

from __future__ import annotations

from math import gcd

IMPLEMENTATION = "python"


def _primitive(cols: list, vals: list) -> tuple[list, list]:
    g = 0
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            break
    if vals[0] < 0:
        g = -g
    if g != 1:
        vals = [v // g for v in vals]
    return cols, vals


def _combine(a, rc, rv, b, pc, pv):
    """Return a*r - b*p as a sparse row (zeros dropped)."""
    oc: list = []
    ov: list = []
    i = j = 0
    nr, np_ = len(rc), len(pc)
    while i < nr and j < np_:
        ci, cj = rc[i], pc[j]
        if ci < cj:
            oc.append(ci)
            ov.append(a * rv[i])
            i += 1
        elif cj < ci:
            oc.append(cj)
            ov.append(-b * pv[j])
            j += 1
        else:
            v = a * rv[i] - b * pv[j]
            if v:
                oc.append(ci)
                ov.append(v)
            i += 1
            j += 1
    while i < nr:
        oc.append(rc[i])
        ov.append(a * rv[i])
        i += 1
    while j < np_:
        oc.append(pc[j])
        ov.append(-b * pv[j])
        j += 1
    return oc, ov


def echelon(rows, ncols):
    """Fraction-free forward elimination of integer sparse rows.

    Returns the pivot rows sorted by leading column.  Each pivot row is
    primitive with a positive leading entry; leading columns are distinct.
    """
    pivots: dict = {}
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
            a, b = pv[0], rv[0]
            g = gcd(a, b)
            rc, rv = _combine(a // g, rc, rv, b // g, pc, pv)
            if rc:
                rc, rv = _primitive(rc, rv)
    return [pivots[c] for c in sorted(pivots)]


def back_substitute(pivot_rows):
    """Clear every pivot column above and below its pivot (integer RREF)."""
    leads = [r[0][0] for r in pivot_rows]
    lead_pos = {c: k for k, c in enumerate(leads)}
    done: list = [None] * len(pivot_rows)
    for k in range(len(pivot_rows) - 1, -1, -1):
        rc, rv = pivot_rows[k]
        if not any(c in lead_pos for c in rc[1:]):
            done[k] = (rc, rv)
            continue
        acc = {c: v for c, v in zip(rc, rv)}
        # later rows are already reduced, so clearing their leads in order
        # never reintroduces an earlier one; read the live coefficient each time
        for c in leads[k + 1:]:
            b = acc.get(c)
            if not b:
                continue
            oc, ov = done[lead_pos[c]]
            a = ov[0]
            g = gcd(a, b)
            mul_self, mul_other = a // g, b // g
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


def rank_mod_p(rows, ncols, p):
    """Rank of an integer sparse matrix reduced modulo the prime ``p``."""
    pivots: dict = {}
    for cols, vals in rows:
        row = {}
        for c, v in zip(cols, vals):
            v %= p
            if v:
                row[c] = v
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(row[lead], p - 2, p)
                pivots[lead] = {c: v * inv % p for c, v in row.items()}
                break
            b = row[lead]
            for c, v in piv.items():
                w = (row.get(c, 0) - b * v) % p
                if w:
                    row[c] = w
                else:
                    row.pop(c, None)
    return len(pivots)


def assoc_scan(ptr, idx, val, dim, trace, lo=0, hi=None):
    """Check (b_i b_j) b_k == b_i (b_j b_k) and trace agreement on all triples.

    The multiplication table is CSR-like: products of basis elements i, j are
    ``sum(val[t] * b[idx[t]] for t in range(ptr[i*dim+j], ptr[i*dim+j+1]))``
    with integer ``val`` (a common denominator divides out on both sides).
    Only first indices ``lo <= i < hi`` are scanned, so callers can split
    the work.  Returns ``(violations, first_triple_or_None)`` in
    lexicographic order.
    """
    table = []
    for ij in range(dim * dim):
        table.append([(idx[t], val[t]) for t in range(ptr[ij], ptr[ij + 1])])
    bad = 0
    first = None
    for i in range(lo, dim if hi is None else hi):
        row_i = i * dim
        for j in range(dim):
            ij = table[row_i + j]
            row_j = j * dim
            for k in range(dim):
                jk = table[row_j + k]
                if not ij and not jk:
                    continue
                left: dict = {}
                for l, c in ij:
                    for m, d in table[l * dim + k]:
                        left[m] = left.get(m, 0) + c * d
                right: dict = {}
                for l, c in jk:
                    for m, d in table[row_i + l]:
                        right[m] = right.get(m, 0) + c * d
                left = {m: v for m, v in left.items() if v}
                right = {m: v for m, v in right.items() if v}
                tl = sum(v * trace[m] for m, v in left.items())
                tr = sum(v * trace[m] for m, v in right.items())
                if left != right or tl != tr:
                    bad += 1
                    if first is None:
                        first = (i, j, k)
    return bad, first
