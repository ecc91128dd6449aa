# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels for sparse integer-coefficient polynomials.

Same API and dict representation as _purekernel; coefficients stay Python
ints (they grow into bignums), the win is loop and dispatch overhead.
"""
from time import monotonic

from .errors import SynthesisBudgetExceeded


def padd(dict a, dict b):
    if len(a) < len(b):
        a, b = b, a
    cdef dict out = dict(a)
    for k, c in b.items():
        v = out.get(k)
        if v is None:
            out[k] = c
        else:
            v = v + c
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def psub(dict a, dict b):
    cdef dict out = dict(a)
    for k, c in b.items():
        v = out.get(k)
        if v is None:
            out[k] = -c
        else:
            v = v - c
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def pneg(dict a):
    cdef dict out = {}
    for k, c in a.items():
        out[k] = -c
    return out


def pscale(dict a, c):
    cdef dict out = {}
    if not c:
        return out
    for k, v in a.items():
        out[k] = c * v
    return out


def pmul(dict a, dict b, double deadline=0.0):
    cdef dict out = {}
    if not a or not b:
        return out
    if len(a) > len(b):
        a, b = b, a
    for ka, ca in a.items():
        if deadline != 0.0 and monotonic() > deadline:
            raise SynthesisBudgetExceeded(
                f"polynomial product ({len(a)}x{len(b)} terms) exceeded its deadline"
            )
        for kb, cb in b.items():
            k = ka + kb
            v = out.get(k)
            if v is None:
                out[k] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[k] = v
                else:
                    del out[k]
    return out


def ppow(dict a, e, double deadline=0.0):
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
