# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse polynomial kernels; same contract as ``_kernels_py``.

Coefficients stay arbitrary-precision Python ints; the speed-up comes from
C-level loops, typed dict access and skipping the imaginary accumulator when
both factors are real.
"""

from math import gcd

BITS = 16
MASK = (1 << BITS) - 1


def mul(dict a, dict b):
    cdef dict acc_re = {}
    cdef dict acc_im = {}
    cdef dict out = {}
    cdef list bitems
    cdef object ka, kb, k, ar, ai, br, bi, r, i, old
    cdef tuple ca, cb
    cdef bint a_real, b_real
    if len(a) < len(b):
        a, b = b, a
    bitems = list(b.items())
    for ka, ca in a.items():
        ar = ca[0]
        ai = ca[1]
        a_real = ai == 0
        for kb, cb in bitems:
            br = cb[0]
            bi = cb[1]
            k = ka + kb
            old = acc_re.get(k)
            if a_real and bi == 0:
                acc_re[k] = ar * br if old is None else old + ar * br
            else:
                acc_re[k] = (ar * br - ai * bi) if old is None else old + ar * br - ai * bi
                old = acc_im.get(k)
                acc_im[k] = (ar * bi + ai * br) if old is None else old + ar * bi + ai * br
    for k, r in acc_re.items():
        i = acc_im.pop(k, 0)
        if r or i:
            out[k] = (r, i)
    for k, i in acc_im.items():
        if i:
            out[k] = (0, i)
    return out


def lincomb(dict a, ca, dict b, cb):
    cdef dict out = {}
    cdef object k, r, i, nr, ni
    cdef tuple c, old
    if ca:
        for k, c in a.items():
            out[k] = (c[0] * ca, c[1] * ca)
    if cb:
        for k, c in b.items():
            r = c[0] * cb
            i = c[1] * cb
            old = out.get(k)
            if old is None:
                out[k] = (r, i)
            else:
                nr = old[0] + r
                ni = old[1] + i
                if nr or ni:
                    out[k] = (nr, ni)
                else:
                    del out[k]
    return out


def scale(dict a, cr, ci):
    cdef dict out = {}
    cdef object k, r, i
    cdef tuple c
    if ci == 0:
        if cr == 0:
            return out
        for k, c in a.items():
            out[k] = (c[0] * cr, c[1] * cr)
        return out
    for k, c in a.items():
        r = c[0]
        i = c[1]
        out[k] = (r * cr - i * ci, r * ci + i * cr)
    return out


def diff(dict a, int shift):
    cdef dict out = {}
    cdef object k, one = (<object>1) << shift, mask = MASK
    cdef object e
    cdef tuple c
    for k, c in a.items():
        e = (k >> shift) & mask
        if e:
            out[k - one] = (c[0] * e, c[1] * e)
    return out


def content(dict a):
    cdef object g = 0
    cdef tuple c
    for c in a.values():
        g = gcd(g, c[0], c[1])
        if g == 1:
            return 1
    return g


def divide_int(dict a, g):
    cdef dict out = {}
    cdef object k
    cdef tuple c
    for k, c in a.items():
        out[k] = (c[0] // g, c[1] // g)
    return out
