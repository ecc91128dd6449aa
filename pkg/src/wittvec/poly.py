"""Sparse multivariate polynomials over the coefficient rings.

Representation: dict mapping packed monomial key -> nonzero coefficient raw.
A key packs one exponent per 16-bit field in variable order, so monomial
multiplication is integer addition of keys. Exponents must stay below 2**15
(checked at construction boundaries); every computation here keeps them far
below that. Canonical form bans zero coefficients, making dict equality
polynomial equality. Term listings use graded lexicographic order.

Integer-coefficient arithmetic dispatches to a kernel: the compiled
extension _speedups when importable, else _purekernel. Set WITT_PURE=1 to
force the pure kernel.
"""
from __future__ import annotations

import os
from functools import cache

from .errors import DivisionInexact, ExprSyntaxError
from .rings import Integers, Ring, _is_prime_int, _PolyTextParser, _tokenize

if os.environ.get("WITT_PURE"):
    from . import _purekernel as _kernel

    KERNEL = "pure"
else:
    try:
        from . import _speedups as _kernel

        KERNEL = "compiled"
    except ImportError:
        from . import _purekernel as _kernel

        KERNEL = "pure"

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
MAX_EXPONENT = 1 << 15


def pack(exps):
    key = 0
    for i, e in enumerate(exps):
        key |= e << (FIELD_BITS * i)
    return key


def unpack(key, nvars):
    exps = []
    for _ in range(nvars):
        exps.append(key & FIELD_MASK)
        key >>= FIELD_BITS
    return tuple(exps)


def _check_exponent(e):
    if not 0 <= e < MAX_EXPONENT:
        raise ExprSyntaxError(f"exponent {e} out of range [0, {MAX_EXPONENT})")
    return e


class MultiPoly(Ring):
    """R[v_1, ..., v_k] for a coefficient ring R and ordered variables."""

    def __init__(self, coeff: Ring, variables):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        self.coeff = coeff
        self.variables = variables
        self.nvars = len(variables)
        self.name = f"{coeff}[{', '.join(variables)}]"
        self.char = coeff.char
        self.zero = {}
        self.one = {0: coeff.one}
        self._int_coeffs = isinstance(coeff, Integers)
        if getattr(coeff, "t", None) is not None:
            self.t = {0: coeff.t}
            self.variable = getattr(coeff, "variable", None)

    # -- construction -------------------------------------------------------

    def const(self, c):
        return {} if self.coeff.is_zero(c) else {0: c}

    def from_int(self, k):
        return self.const(self.coeff.from_int(k))

    def gen(self, i, e=1):
        _check_exponent(e)
        return {e << (FIELD_BITS * i): self.coeff.one}

    def term(self, c, exps):
        if self.coeff.is_zero(c):
            return {}
        return {pack(_check_exponent(e) for e in exps): c}

    # -- arithmetic ---------------------------------------------------------

    def add(self, a, b):
        if self._int_coeffs:
            return _kernel.padd(a, b)
        radd, rzero = self.coeff.add, self.coeff.is_zero
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for k, c in b.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = radd(v, c)
                if rzero(v):
                    del out[k]
                else:
                    out[k] = v
        return out

    def sub(self, a, b):
        if self._int_coeffs:
            return _kernel.psub(a, b)
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self._int_coeffs:
            return _kernel.pneg(a)
        rneg = self.coeff.neg
        return {k: rneg(c) for k, c in a.items()}

    def mul(self, a, b, deadline=0.0):
        if self._int_coeffs:
            return _kernel.pmul(a, b, deadline)
        rmul, radd, rzero = self.coeff.mul, self.coeff.add, self.coeff.is_zero
        if not a or not b:
            return {}
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                v = out.get(k)
                if v is None:
                    v = rmul(ca, cb)
                else:
                    v = radd(v, rmul(ca, cb))
                if rzero(v):
                    out.pop(k, None)
                else:
                    out[k] = v
        return out

    def scale(self, a, c):
        """Multiply by a coefficient-ring scalar."""
        if self._int_coeffs:
            return _kernel.pscale(a, c)
        if self.coeff.is_zero(c):
            return {}
        rmul, rzero = self.coeff.mul, self.coeff.is_zero
        return {k: v2 for k, v in a.items() if not rzero(v2 := rmul(c, v))}

    def pow(self, a, e, deadline=0.0):
        if e < 0:
            raise ValueError("negative exponent")
        p = self.char
        if p and _is_prime_int(p):
            # freshman's dream: in char p, f^p has the p-th power coefficients
            # on p-times-scaled keys
            rpow = self.coeff.pow
            while e >= p and e % p == 0:
                a = {k * p: rpow(c, p) for k, c in a.items()}
                e //= p
        if self._int_coeffs:
            return _kernel.ppow(a, e, deadline)
        if e == 0:
            return dict(self.one)
        result = None
        base = a
        while True:
            if e & 1:
                result = base if result is None else self.mul(result, base, deadline)
            e >>= 1
            if not e:
                return result
            base = self.mul(base, base, deadline)

    def exact_div(self, a, b):
        """Divide by an embedded coefficient c (single constant term)."""
        if len(b) == 1 and 0 in b:
            c = b[0]
            rdiv = self.coeff.exact_div
            return {k: rdiv(v, c) for k, v in a.items()}
        raise DivisionInexact(f"only scalar divisors supported in {self.name}")

    # -- evaluation and substitution ----------------------------------------

    def eval_into(self, a, ring, values, embed):
        """Image of a under coeff -> ring (embed) and v_i -> values[i]."""
        pow_cache = [dict() for _ in range(self.nvars)]
        acc = ring.zero
        for key, c in a.items():
            term = embed(c)
            i = 0
            k = key
            while k:
                e = k & FIELD_MASK
                if e:
                    pc = pow_cache[i]
                    v = pc.get(e)
                    if v is None:
                        v = pc[e] = ring.pow(values[i], e)
                    term = ring.mul(term, v)
                k >>= FIELD_BITS
                i += 1
            acc = ring.add(acc, term)
        return acc

    def substitute(self, a, target: "MultiPoly", values):
        """Substitute polynomials for the variables; coefficient rings match."""
        return self.eval_into(a, target, values, target.const)

    def rename_into(self, a, target: "MultiPoly", var_map):
        """Reindex variables by position: new position var_map[i] for old i."""
        out = {}
        for key, c in a.items():
            exps = unpack(key, self.nvars)
            new = [0] * target.nvars
            for i, e in enumerate(exps):
                if e:
                    new[var_map[i]] = e
            out[pack(new)] = c
        return out

    # -- canonical ordering, text, parsing ----------------------------------

    def sorted_terms(self, a):
        """(exponent tuple, coefficient) pairs in graded-lex descending order."""
        items = [(unpack(k, self.nvars), c) for k, c in a.items()]
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return items

    def show(self, a):
        if not a:
            return "0"
        parts = []
        for exps, c in self.sorted_terms(a):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, exps)
                if e
            )
            cs = self.coeff.show(c)
            if not mono:
                piece = f"({cs})" if ("+" in cs or cs.count("-") > 1) else cs
            elif c == self.coeff.one:
                piece = mono
            elif cs == "-1":
                piece = f"-{mono}"
            elif "+" in cs or "-" in cs[1:] or "*" in cs:
                piece = f"({cs})*{mono}"
            else:
                piece = f"{cs}*{mono}"
            parts.append(piece)
        out = parts[0]
        for piece in parts[1:]:
            if piece.startswith("-"):
                out += f" - {piece[1:]}"
            else:
                out += f" + {piece}"
        return out

    def parse(self, text):
        index = {v: i for i, v in enumerate(self.variables)}

        def var(name):
            i = index.get(name)
            if i is not None:
                return self.gen(i)
            if name == getattr(self, "variable", None):
                return dict(self.t)
            raise ExprSyntaxError(f"unknown name {name!r} in {self.name}")

        parser = _PolyTextParser(
            _tokenize(text),
            const=self.from_int,
            var=var,
            add=self.add,
            neg=self.neg,
            mul=self.mul,
            powi=lambda a, e: self.pow(a, _check_exponent(e)),
        )
        return parser.parse()


@cache
def polyring(coeff: Ring, variables: tuple) -> MultiPoly:
    return MultiPoly(coeff, variables)
