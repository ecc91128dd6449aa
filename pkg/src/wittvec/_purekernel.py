"""Pure-Python kernels for sparse polynomials with integer coefficients.

A polynomial is a dict mapping packed monomial keys to nonzero ints. Keys
pack one exponent per 16-bit field, so multiplying monomials is integer
addition of keys; callers guarantee exponents stay below 2**15 so fields
never carry. The compiled twin in _speedups.pyx implements the same API.

deadline is an absolute time.monotonic() value; 0.0 disables the check.
"""
from time import monotonic

from .errors import SynthesisBudgetExceeded


def padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for k, c in b.items():
        v = out.get(k)
        if v is None:
            out[k] = c
        else:
            v += c
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def psub(a, b):
    out = dict(a)
    for k, c in b.items():
        v = out.get(k)
        if v is None:
            out[k] = -c
        else:
            v -= c
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def pneg(a):
    return {k: -c for k, c in a.items()}


def pscale(a, c):
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


def pmul(a, b, deadline=0.0):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ka, ca in a.items():
        if deadline and monotonic() > deadline:
            raise SynthesisBudgetExceeded(
                f"polynomial product ({len(a)}x{len(b)} terms) exceeded its deadline"
            )
        for kb, cb in b.items():
            k = ka + kb
            v = get(k)
            if v is None:
                out[k] = ca * cb
            else:
                v += ca * cb
                if v:
                    out[k] = v
                else:
                    del out[k]
    return out


def ppow(a, e, deadline=0.0):
    if e == 0:
        return {0: 1}
    result = None
    base = a
    while True:
        if e & 1:
            result = base if result is None else pmul(result, base, deadline)
        e >>= 1
        if not e:
            return result
        base = pmul(base, base, deadline)
