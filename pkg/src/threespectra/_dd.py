"""Double-double arithmetic kernels.

A value is an unevaluated sum ``hi + lo`` of two doubles with
``|lo| <= ulp(hi)/2``, giving roughly 32 significant digits. Only what the
eigenvalue refinement and the residue products need is implemented.
"""

import math

import numpy as np
from numba import njit

_SPLITTER = 134217729.0  # 2**27 + 1


@njit(cache=True, inline="always")
def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(cache=True, inline="always")
def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


@njit(cache=True, inline="always")
def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


@njit(cache=True, inline="always")
def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@njit(cache=True, inline="always")
def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e += t
    s, e = quick_two_sum(s, e)
    e += f
    return quick_two_sum(s, e)


@njit(cache=True, inline="always")
def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -bh, -bl)


@njit(cache=True, inline="always")
def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e += ah * bl + al * bh
    return quick_two_sum(p, e)


@njit(cache=True, inline="always")
def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = dd_mul(bh, bl, q1, 0.0)
    rh, rl = dd_sub(ah, al, ph, pl)
    q2 = rh / bh
    ph, pl = dd_mul(bh, bl, q2, 0.0)
    rh, rl = dd_sub(rh, rl, ph, pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add(q1, q2, q3, 0.0)


@njit(cache=True)
def dd_sturm(b, a2h, a2l, xh, xl, pivmin):
    """Eigenvalues strictly below ``xh + xl``; pivots carried in double-double."""
    count = 0
    qh, ql = dd_sub(b[0], 0.0, xh, xl)
    if abs(qh) < pivmin:
        qh, ql = pivmin, 0.0
    if qh < 0.0:
        count += 1
    for i in range(1, b.size):
        th, tl = dd_div(a2h[i - 1], a2l[i - 1], qh, ql)
        dh, dl = dd_sub(b[i], 0.0, xh, xl)
        qh, ql = dd_sub(dh, dl, th, tl)
        if abs(qh) < pivmin:
            qh, ql = pivmin, 0.0
        if qh < 0.0:
            count += 1
    return count


@njit(cache=True)
def dd_det(b, a2h, a2l, xh, xl, pivmin):
    """det(J - x) as ``(mantissa_hi, mantissa_lo, exponent)``; the mantissa
    is renormalized into [0.5, 1) after every pivot."""
    qh, ql = dd_sub(b[0], 0.0, xh, xl)
    if abs(qh) < pivmin:
        qh, ql = pivmin, 0.0
    ph, pl = qh, ql
    e = math.frexp(ph)[1]
    ph, pl = math.ldexp(ph, -e), math.ldexp(pl, -e)
    expo = e
    for i in range(1, b.size):
        th, tl = dd_div(a2h[i - 1], a2l[i - 1], qh, ql)
        dh, dl = dd_sub(b[i], 0.0, xh, xl)
        qh, ql = dd_sub(dh, dl, th, tl)
        if abs(qh) < pivmin:
            qh, ql = pivmin, 0.0
        ph, pl = dd_mul(ph, pl, qh, ql)
        e = math.frexp(ph)[1]
        ph, pl = math.ldexp(ph, -e), math.ldexp(pl, -e)
        expo += e
    return ph, pl, expo


@njit(cache=True)
def _abs_ratio(ah, ae, bh, be):
    """|a| / |b| for mantissa/exponent pairs, clipped to avoid overflow."""
    d = ae - be
    if d > 1000:
        d = 1000
    elif d < -1000:
        d = -1000
    return math.ldexp(abs(ah) / abs(bh), d)


@njit(cache=True)
def dd_refine(b, a, approx, width, lo_bound, hi_bound, rtol, scale, pivmin):
    """Refine every eigenvalue to double-double accuracy.

    Each ``approx[k]`` gets a bracket of half-width ``width``, widened until
    Sturm counts in double-double confirm it holds the k-th eigenvalue. A
    bracket holding several eigenvalues is bisected until the k-th is
    isolated; the isolated root of det(J - x) is then polished by the
    Illinois variant of false position. Returns ``(hi, lo)`` arrays.
    """
    n = b.size
    a2h = np.empty(max(n - 1, 0))
    a2l = np.empty(max(n - 1, 0))
    for i in range(n - 1):
        a2h[i], a2l[i] = two_prod(a[i], a[i])
    out_h = np.empty(n)
    out_l = np.empty(n)
    atol = rtol * scale
    for k in range(n):
        w = width
        while True:
            lh = max(approx[k] - w, lo_bound)
            rh = min(approx[k] + w, hi_bound)
            cl = dd_sturm(b, a2h, a2l, lh, 0.0, pivmin)
            cr = dd_sturm(b, a2h, a2l, rh, 0.0, pivmin)
            if cl <= k < cr:
                break
            if lh == lo_bound and rh == hi_bound:
                break
            w *= 16.0
        ll = 0.0
        rl = 0.0
        # bisect until the k-th eigenvalue is alone in the bracket
        while cr - cl > 1:
            wh, wl = dd_sub(rh, rl, lh, ll)
            if wh <= atol:
                break
            mh, ml = dd_add(lh, ll, rh, rl)
            mh *= 0.5
            ml *= 0.5
            if (mh == lh and ml == ll) or (mh == rh and ml == rl):
                break
            c = dd_sturm(b, a2h, a2l, mh, ml, pivmin)
            if c > k:
                rh, rl, cr = mh, ml, c
            else:
                lh, ll, cl = mh, ml, c

        if cr - cl == 1:
            flh, fll, fle = dd_det(b, a2h, a2l, lh, ll, pivmin)
            frh, frl, fre = dd_det(b, a2h, a2l, rh, rl, pivmin)
            side = 0
            have_prev = False
            ph, pl = 0.0, 0.0
            for _ in range(200):
                wh, wl = dd_sub(rh, rl, lh, ll)
                if wh <= atol:
                    break
                # step from the end with smaller |f| so the fraction stays accurate
                rho = _abs_ratio(frh, fre, flh, fle)
                if rho <= 1.0:
                    dh, dl = dd_mul(wh, wl, rho / (1.0 + rho), 0.0)
                    xh, xl = dd_sub(rh, rl, dh, dl)
                else:
                    rho = 1.0 / rho
                    dh, dl = dd_mul(wh, wl, rho / (1.0 + rho), 0.0)
                    xh, xl = dd_add(lh, ll, dh, dl)
                # a secant point rounding onto an end means |f| there is
                # negligible next to the other end: that end is the root
                if not (xh > lh or (xh == lh and xl > ll)):
                    rh, rl = lh, ll
                    break
                if not (xh < rh or (xh == rh and xl < rl)):
                    lh, ll = rh, rl
                    break
                fxh, fxl, fxe = dd_det(b, a2h, a2l, xh, xl, pivmin)
                if fxh == 0.0:
                    lh, ll, rh, rl = xh, xl, xh, xl
                    break
                if have_prev:
                    sh, sl = dd_sub(xh, xl, ph, pl)
                    if abs(sh) <= atol:
                        # superlinear phase: the last step bounds the error
                        lh, ll, rh, rl = xh, xl, xh, xl
                        break
                ph, pl, have_prev = xh, xl, True
                if (fxh < 0.0) == (flh < 0.0):
                    lh, ll, flh, fll, fle = xh, xl, fxh, fxl, fxe
                    if side == -1:
                        fre -= 1  # Illinois: halve the stale end
                    side = -1
                else:
                    rh, rl, frh, frl, fre = xh, xl, fxh, fxl, fxe
                    if side == 1:
                        fle -= 1
                    side = 1
        mh, ml = dd_add(lh, ll, rh, rl)
        out_h[k], out_l[k] = quick_two_sum(0.5 * mh, 0.5 * ml)
    return out_h, out_l


@njit(cache=True)
def dd_residue(xh, xl, num_h, num_l, den_h, den_l):
    """``-prod(x - num) / prod(x - den)`` with double-double factors.

    The running product is kept as a double-double mantissa in [0.5, 1)
    times a power of two, so no intermediate overflows or underflows.
    Returns a double; 0.0 if any factor vanishes.
    """
    ph, pl = -1.0, 0.0
    expo = 0
    m = max(num_h.size, den_h.size)
    for i in range(m):
        if i < num_h.size:
            fh, fl = dd_sub(xh, xl, num_h[i], num_l[i])
            if fh == 0.0:
                return 0.0
            ph, pl = dd_mul(ph, pl, fh, fl)
        if i < den_h.size:
            fh, fl = dd_sub(xh, xl, den_h[i], den_l[i])
            if fh == 0.0:
                return 0.0
            ph, pl = dd_div(ph, pl, fh, fl)
        e = math.frexp(ph)[1]
        ph = math.ldexp(ph, -e)
        pl = math.ldexp(pl, -e)
        expo += e
    return math.ldexp(ph + pl, expo)


@njit(cache=True)
def dd_sum(h, l):
    sh, sl = 0.0, 0.0
    for i in range(h.size):
        sh, sl = dd_add(sh, sl, h[i], l[i])
    return sh, sl
