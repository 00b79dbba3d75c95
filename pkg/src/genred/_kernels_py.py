"""Pure-Python sparse polynomial kernels (reference implementation).

A polynomial body is a dict ``{key: (re, im)}``: ``key`` packs the exponent
vector with ``BITS`` bits per variable (so multiplying monomials is adding
keys) and ``(re, im)`` is a Gaussian integer coefficient, never ``(0, 0)``.
The compiled module ``_kernels`` implements the same functions.
"""

from math import gcd

BITS = 16
MASK = (1 << BITS) - 1


def mul(a, b):
    """Product of two bodies."""
    if len(a) < len(b):
        a, b = b, a
    acc_re = {}
    acc_im = {}
    bitems = list(b.items())
    for ka, (ar, ai) in a.items():
        for kb, (br, bi) in bitems:
            k = ka + kb
            if ai == 0 and bi == 0:
                acc_re[k] = acc_re.get(k, 0) + ar * br
            else:
                acc_re[k] = acc_re.get(k, 0) + ar * br - ai * bi
                acc_im[k] = acc_im.get(k, 0) + ar * bi + ai * br
    out = {}
    for k, r in acc_re.items():
        i = acc_im.pop(k, 0)
        if r or i:
            out[k] = (r, i)
    for k, i in acc_im.items():
        if i:
            out[k] = (0, i)
    return out


def lincomb(a, ca, b, cb):
    """``ca*a + cb*b`` for integer scalars ``ca``, ``cb``."""
    out = {}
    if ca:
        for k, (r, i) in a.items():
            out[k] = (r * ca, i * ca)
    if cb:
        for k, (r, i) in b.items():
            old = out.get(k)
            if old is None:
                out[k] = (r * cb, i * cb)
            else:
                nr = old[0] + r * cb
                ni = old[1] + i * cb
                if nr or ni:
                    out[k] = (nr, ni)
                else:
                    del out[k]
    return out


def scale(a, cr, ci):
    """Multiply every coefficient by the Gaussian integer ``cr + i*ci``."""
    if ci == 0:
        if cr == 0:
            return {}
        return {k: (r * cr, i * cr) for k, (r, i) in a.items()}
    return {k: (r * cr - i * ci, r * ci + i * cr) for k, (r, i) in a.items()}


def diff(a, shift):
    """Partial derivative with respect to the variable stored at bit offset ``shift``."""
    out = {}
    one = 1 << shift
    for k, (r, i) in a.items():
        e = (k >> shift) & MASK
        if e:
            out[k - one] = (r * e, i * e)
    return out


def content(a):
    """Non-negative gcd of all integer parts of all coefficients."""
    g = 0
    for r, i in a.values():
        g = gcd(g, r, i)
        if g == 1:
            return 1
    return g


def divide_int(a, g):
    """Exact division of every coefficient by the integer ``g``."""
    return {k: (r // g, i // g) for k, (r, i) in a.items()}
