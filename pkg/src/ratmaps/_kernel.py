"""Compiled enumeration core for the brute-force stratum histograms.

Same membership algorithm as the pure-Python path (squarefree decomposition
with p-th roots, then gcds of multiplicity filters), run over table-driven
arithmetic on integer element encodings.  Polynomials are int64 arrays, low
degree first, paired with an explicit degree (-1 for zero).

For a tuple let C_s = gcd_i filter_s(f_i).  Each C_s is squarefree and
C_{s+1} | C_s, so the stratum index for n is sum_{r>=1} deg C_{rn}; one
pass over the tuples therefore fills the histogram for every n at once.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ratmaps.gf import FieldCtx

# Fields up to this size get dense q x q tables.
MAX_TABLE_Q = 1024


def supports(ctx: FieldCtx) -> bool:
    return ctx.q <= MAX_TABLE_Q


def _tables(ctx: FieldCtx):
    add, mul, neg, inv, proot = ctx.tables()
    return (
        np.asarray(add, dtype=np.int64),
        np.asarray(mul, dtype=np.int64),
        np.asarray(neg, dtype=np.int64),
        np.asarray(inv, dtype=np.int64),
        np.asarray(proot, dtype=np.int64),
    )


@njit(cache=True)
def _deg(a, hint):
    d = hint
    while d >= 0 and a[d] == 0:
        d -= 1
    return d


@njit(cache=True)
def _make_monic(a, da, MUL, INV):
    if da < 0 or a[da] == 1:
        return
    c = INV[a[da]]
    for i in range(da + 1):
        a[i] = MUL[c, a[i]]


@njit(cache=True)
def _rem_inplace(r, dr, b, db, ADD, MUL, NEG, INV):
    """r <- r mod b; returns new degree of r."""
    if db < 0:
        return dr
    inv_lead = INV[b[db]]
    i = dr
    while i >= db:
        c = r[i]
        if c != 0:
            c = MUL[c, inv_lead]
            nc = NEG[c]
            base = i - db
            for j in range(db + 1):
                if b[j] != 0:
                    r[base + j] = ADD[r[base + j], MUL[nc, b[j]]]
        i -= 1
    return _deg(r, min(dr, db - 1))


@njit(cache=True)
def _divexact(a, da, b, db, out, ADD, MUL, NEG, INV, r):
    """out <- a / b (exact division assumed); returns degree of out.

    r is a scratch buffer of length >= da + 1.
    """
    for i in range(da + 1):
        r[i] = a[i]
    inv_lead = INV[b[db]]
    dq = da - db
    for k in range(dq + 1):
        out[k] = 0
    i = da
    while i >= db:
        c = r[i]
        if c != 0:
            c = MUL[c, inv_lead]
            out[i - db] = c
            nc = NEG[c]
            base = i - db
            for j in range(db + 1):
                if b[j] != 0:
                    r[base + j] = ADD[r[base + j], MUL[nc, b[j]]]
        i -= 1
    return dq


@njit(cache=True)
def _gcd(a, da, b, db, out, ADD, MUL, NEG, INV, wx, wy):
    """out <- monic gcd(a, b); returns its degree.

    a and b are not modified; wx and wy are scratch buffers of length
    >= max(da, db) + 1.
    """
    x = wx
    y = wy
    for i in range(da + 1):
        x[i] = a[i]
    for i in range(db + 1):
        y[i] = b[i]
    dx, dy = da, db
    while dy >= 0:
        if dy == 0:
            out[0] = 1
            return 0
        dx = _rem_inplace(x, dx, y, dy, ADD, MUL, NEG, INV)
        x, y = y, x
        dx, dy = dy, dx
    for i in range(dx + 1):
        out[i] = x[i]
    _make_monic(out, dx, MUL, INV)
    return dx


@njit(cache=True)
def _mul(a, da, b, db, out, ADD, MUL):
    for k in range(da + db + 1):
        out[k] = 0
    for i in range(da + 1):
        if a[i] != 0:
            for j in range(db + 1):
                if b[j] != 0:
                    out[i + j] = ADD[out[i + j], MUL[a[i], b[j]]]
    return da + db


@njit(cache=True)
def _workspace(d):
    return np.zeros((9, d + 2), dtype=np.int64)


@njit(cache=True)
def _squarefree_parts(f, df, p, parts, pdeg, ADD, MUL, NEG, INV, PROOT, ws):
    """Fill parts[j] (degree pdeg[j]) with the multiplicity-j squarefree factor.

    pdeg[j] = 0 (parts[j] = 1) when no root has multiplicity exactly j.
    ws is a workspace from _workspace(df).
    """
    size = df + 1
    for j in range(size):
        pdeg[j] = 0
        parts[j, 0] = 1
    cur, deriv, c, w, y, tmp = ws[0], ws[1], ws[2], ws[3], ws[4], ws[5]
    s1, s2, s3 = ws[6], ws[7], ws[8]
    for i in range(size):
        cur[i] = f[i]
    dcur = df
    scale = 1
    while dcur > 0:
        for i in range(size):
            deriv[i] = 0
        for i in range(1, dcur + 1):
            deriv[i - 1] = MUL[i % p, cur[i]]
        dd = _deg(deriv, dcur - 1)
        if dd < 0:
            dc = dcur
            for i in range(dc + 1):
                c[i] = cur[i]
        else:
            dc = _gcd(cur, dcur, deriv, dd, c, ADD, MUL, NEG, INV, s1, s2)
        if dc == 0 and scale == 1:
            # squarefree: a single part of multiplicity one
            for k in range(dcur + 1):
                parts[1, k] = cur[k]
            pdeg[1] = dcur
            return
        dw = _divexact(cur, dcur, c, dc, w, ADD, MUL, NEG, INV, s3)
        i = 1
        while dw > 0:
            dy = _gcd(w, dw, c, dc, y, ADD, MUL, NEG, INV, s1, s2)
            dfac = _divexact(w, dw, y, dy, tmp, ADD, MUL, NEG, INV, s3)
            if dfac > 0:
                j = i * scale
                for k in range(dfac + 1):
                    parts[j, k] = tmp[k]
                pdeg[j] = dfac
            for k in range(dy + 1):
                w[k] = y[k]
            dw = dy
            dc = _divexact(c, dc, y, dy, tmp, ADD, MUL, NEG, INV, s3)
            for k in range(dc + 1):
                c[k] = tmp[k]
            i += 1
        if dc <= 0:
            break
        # c(z) = g(z^p): replace by the coefficient-wise p-th root of g
        dnew = dc // p
        for k in range(size):
            cur[k] = 0
        for k in range(dnew + 1):
            cur[k] = PROOT[c[k * p]]
        dcur = dnew
        scale *= p


@njit(cache=True)
def _index_to_poly(idx, d, q, out):
    for i in range(d):
        out[i] = idx % q
        idx //= q
    out[d] = 1


@njit(cache=True)
def _hist_single(d, q, p, start, stop, ADD, MUL, NEG, INV, PROOT):
    hist = np.zeros((d + 1, d + 1), dtype=np.int64)
    f = np.zeros(d + 1, dtype=np.int64)
    parts = np.zeros((d + 1, d + 1), dtype=np.int64)
    pdeg = np.zeros(d + 1, dtype=np.int64)
    filt = np.zeros(d + 2, dtype=np.int64)
    ws = _workspace(d)
    for idx in range(start, stop):
        _index_to_poly(idx, d, q, f)
        _squarefree_parts(f, d, p, parts, pdeg, ADD, MUL, NEG, INV, PROOT, ws)
        # filt[s] = deg filter_s(f) = sum_{j >= s} deg s_j
        filt[d + 1] = 0
        for s in range(d, 0, -1):
            filt[s] = filt[s + 1] + pdeg[s]
        for n in range(1, d + 1):
            s_idx = 0
            s = n
            while s <= d:
                s_idx += filt[s]
                s += n
            hist[n, s_idx] += 1
    return hist


@njit(cache=True)
def _filters_table(d, q, p, ADD, MUL, NEG, INV, PROOT):
    """F[idx, s] = filter_s(f_idx) coefficients, FD[idx, s] its degree."""
    npoly = q**d
    F = np.zeros((npoly, d + 1, d + 1), dtype=np.int64)
    FD = np.zeros((npoly, d + 1), dtype=np.int64)
    f = np.zeros(d + 1, dtype=np.int64)
    parts = np.zeros((d + 1, d + 1), dtype=np.int64)
    pdeg = np.zeros(d + 1, dtype=np.int64)
    acc = np.zeros(d + 1, dtype=np.int64)
    tmp = np.zeros(2 * d + 2, dtype=np.int64)
    ws = _workspace(d)
    for idx in range(npoly):
        _index_to_poly(idx, d, q, f)
        _squarefree_parts(f, d, p, parts, pdeg, ADD, MUL, NEG, INV, PROOT, ws)
        for k in range(d + 1):
            acc[k] = 0
        acc[0] = 1
        dacc = 0
        for s in range(d, 0, -1):
            if pdeg[s] > 0:
                dacc = _mul(acc, dacc, parts[s], pdeg[s], tmp, ADD, MUL)
                for k in range(dacc + 1):
                    acc[k] = tmp[k]
            for k in range(dacc + 1):
                F[idx, s, k] = acc[k]
            FD[idx, s] = dacc
        F[idx, 0, 0] = 1
    return F, FD


@njit(cache=True)
def _hist_multi(d, m, q, start, stop, F, FD, ADD, MUL, NEG, INV):
    npoly = q**d
    hist = np.zeros((d + 1, d + 1), dtype=np.int64)
    # P[level, s] = gcd over entries 0..level of filter_s; PD its degree
    P = np.zeros((m, d + 1, d + 1), dtype=np.int64)
    PD = np.zeros((m, d + 1), dtype=np.int64)
    idx = np.zeros(m, dtype=np.int64)
    prof = np.zeros(d + 2, dtype=np.int64)
    wx = np.zeros(d + 1, dtype=np.int64)
    wy = np.zeros(d + 1, dtype=np.int64)
    # subtree sizes: number of completions below each level
    below = np.ones(m, dtype=np.int64)
    for lvl in range(m - 2, -1, -1):
        below[lvl] = below[lvl + 1] * npoly
    for first in range(start, stop):
        for s in range(1, d + 1):
            for k in range(d + 1):
                P[0, s, k] = F[first, s, k]
            PD[0, s] = FD[first, s]
        idx[0] = first
        lvl = 1
        idx[1] = 0
        while lvl >= 1:
            if idx[lvl] >= npoly:
                lvl -= 1
                if lvl >= 1:
                    idx[lvl] += 1
                continue
            cur = idx[lvl]
            s_top = 0
            for s in range(1, d + 1):
                if s > 1 and PD[lvl, s - 1] == 0:
                    PD[lvl, s] = 0
                    P[lvl, s, 0] = 1
                    continue
                if PD[lvl - 1, s] == 0 or FD[cur, s] == 0:
                    PD[lvl, s] = 0
                    P[lvl, s, 0] = 1
                else:
                    PD[lvl, s] = _gcd(
                        P[lvl - 1, s], PD[lvl - 1, s], F[cur, s], FD[cur, s],
                        P[lvl, s], ADD, MUL, NEG, INV, wx, wy,
                    )
                if PD[lvl, s] > 0:
                    s_top = s
            if lvl == m - 1 or s_top == 0:
                weight = below[lvl]
                if s_top == 0:
                    hist[1:, 0] += weight
                else:
                    prof[d + 1] = 0
                    for s in range(1, d + 1):
                        prof[s] = PD[lvl, s]
                    for n in range(1, d + 1):
                        s_idx = 0
                        s = n
                        while s <= d:
                            s_idx += prof[s]
                            s += n
                        hist[n, s_idx] += weight
                idx[lvl] += 1
            else:
                lvl += 1
                idx[lvl] = 0
    return hist


def profile_histogram(ctx: FieldCtx, d: int, m: int, start: int, stop: int) -> np.ndarray:
    """hist[n, s]: tuples with first-entry index in [start, stop) and stratum index s."""
    if not supports(ctx):
        raise ValueError(f"compiled kernel needs q <= {MAX_TABLE_Q}, got {ctx.q}")
    ADD, MUL, NEG, INV, PROOT = _tables(ctx)
    if m == 1:
        return _hist_single(d, ctx.q, ctx.p, start, stop, ADD, MUL, NEG, INV, PROOT)
    F, FD = _filters_table(d, ctx.q, ctx.p, ADD, MUL, NEG, INV, PROOT)
    return _hist_multi(d, m, ctx.q, start, stop, F, FD, ADD, MUL, NEG, INV)
