"""Exact coefficient rings.

Every ring is a descriptor object operating on raw, hashable, canonical
representations:

  Integers          -> int
  IntegersMod(m)    -> int in [0, m)
  PrimeField(p)     -> int in [0, p)
  FpPolynomials(p)  -> tuple of coefficients, lowest degree first, trimmed
  FpPolyQuotient    -> trimmed tuple of degree < deg(modulus)
  IntPolyQuotient   -> tuple of ints of length deg(modulus), monic modulus
  Rationals         -> fractions.Fraction

Canonical representation means raw equality decides ring equality, so raws
can key dicts and sets directly. Multivariate polynomial rings live in
poly.py on top of these.
"""
from __future__ import annotations

import re as _re
from fractions import Fraction
from functools import cache

from .errors import (
    DivisionInexact,
    ExprSyntaxError,
    NotAUnit,
    NotPrimeElement,
    TorsionNotSupported,
)


class Ring:
    """Descriptor base; subclasses define the raw representation."""

    char = 0
    cardinality = None  # None means infinite
    is_field = False

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a):
        return a == self.zero

    def pow(self, a, e):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def sum(self, items):
        acc = self.zero
        for x in items:
            acc = self.add(acc, x)
        return acc

    def inv(self, a):
        raise NotAUnit(f"{self.show(a)} is not a unit in {self}")

    def is_unit(self, a):
        try:
            self.inv(a)
            return True
        except NotAUnit:
            return False

    def elements(self):
        raise ValueError(f"{self} is not finite")

    def parse(self, text):
        return parse_element(self, text)

    def __repr__(self):
        return self.name


class Integers(Ring):
    name = "Z"
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, e):
        return a**e

    def from_int(self, k):
        return k

    def exact_div(self, a, b):
        if b == 0:
            raise DivisionInexact("division by zero")
        q, r = divmod(a, b)
        if r:
            raise DivisionInexact(f"{a} is not divisible by {b}")
        return q

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not a unit in Z")

    def show(self, a):
        return str(a)


class Rationals(Ring):
    """Internal ring for symbolic checks; not a context base."""

    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)
    is_field = True

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, k):
        return Fraction(k)

    def exact_div(self, a, b):
        if b == 0:
            raise DivisionInexact("division by zero")
        return a / b

    def inv(self, a):
        if a == 0:
            raise NotAUnit("0 is not a unit")
        return 1 / a

    def show(self, a):
        return str(a)


class IntegersMod(Ring):
    def __init__(self, modulus):
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        self.modulus = modulus
        self.name = f"Z/{modulus}"
        self.cardinality = modulus
        self.char = modulus
        self.zero = 0
        self.one = 1 % modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def pow(self, a, e):
        return pow(a, e, self.modulus)

    def from_int(self, k):
        return k % self.modulus

    def exact_div(self, a, b):
        # Quotients exist iff gcd(b, m) | a but are unique only for unit b.
        try:
            return (a * pow(b, -1, self.modulus)) % self.modulus
        except ValueError:
            raise DivisionInexact(
                f"{b} is a zero divisor in {self.name}; quotient not unique"
            ) from None

    def inv(self, a):
        try:
            return pow(a, -1, self.modulus)
        except ValueError:
            raise NotAUnit(f"{a} is not a unit in {self.name}") from None

    def elements(self):
        return range(self.modulus)

    def show(self, a):
        return str(a)


class PrimeField(IntegersMod):
    def __init__(self, p):
        if not _is_prime_int(p):
            raise ValueError(f"{p} is not prime")
        super().__init__(p)
        self.p = p
        self.name = f"F{p}"
        self.is_field = True


def _is_prime_int(m):
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def _trim(coeffs):
    i = len(coeffs)
    while i and coeffs[i - 1] == 0:
        i -= 1
    return tuple(coeffs[:i])


class FpPolynomials(Ring):
    """F_p[t] on trimmed low-first coefficient tuples."""

    def __init__(self, p, variable="t"):
        if not _is_prime_int(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.variable = variable
        self.name = f"F{p}[{variable}]"
        self.char = p
        self.zero = ()
        self.one = (1,)
        self.t = (0, 1)

    def degree(self, a):
        return len(a) - 1  # -1 for the zero polynomial

    def add(self, a, b):
        p = self.p
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return _trim(out)

    def neg(self, a):
        p = self.p
        return tuple(-c % p for c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        p = self.p
        if min(len(a), len(b)) >= 32:
            return self._mul_packed(a, b)
        out = [0] * (len(a) + len(b) - 1)
        for i, c in enumerate(a):
            if c:
                for j, d in enumerate(b):
                    out[i + j] = (out[i + j] + c * d) % p
        return _trim(out)

    def _mul_packed(self, a, b):
        # Kronecker substitution: with slot width above the largest possible
        # convolution sum, one integer product recovers the coefficient
        # convolution exactly. Slots are byte-aligned so packing is a strided
        # byte write and unpacking a strided byte read.
        p = self.p
        width = (min(len(a), len(b)) * (p - 1) * (p - 1)).bit_length() // 8 + 1
        ba = bytearray(len(a) * width)
        ba[0::width] = bytes(a)
        bb = bytearray(len(b) * width)
        bb[0::width] = bytes(b)
        prod = int.from_bytes(ba, "little") * int.from_bytes(bb, "little")
        buf = prod.to_bytes((len(a) + len(b)) * width, "little")
        out = [
            int.from_bytes(buf[k : k + width], "little") % p
            for k in range(0, (len(a) + len(b) - 1) * width, width)
        ]
        return _trim(out)

    def from_int(self, k):
        return _trim([k % self.p])

    def divmod(self, a, b):
        if not b:
            raise DivisionInexact("division by zero")
        p = self.p
        inv_lead = pow(b[-1], -1, p)
        rem = list(a)
        quo = [0] * max(0, len(a) - len(b) + 1)
        while len(rem) >= len(b):
            if rem[-1] == 0:
                rem.pop()
                continue
            shift = len(rem) - len(b)
            c = (rem[-1] * inv_lead) % p
            quo[shift] = c
            for i, d in enumerate(b):
                rem[shift + i] = (rem[shift + i] - c * d) % p
            while rem and rem[-1] == 0:
                rem.pop()
        return _trim(quo), _trim(rem)

    def exact_div(self, a, b):
        q, r = self.divmod(a, b)
        if r:
            raise DivisionInexact(f"{self.show(a)} not divisible by {self.show(b)}")
        return q

    def inv(self, a):
        if len(a) == 1:
            return (pow(a[0], -1, self.p),)
        raise NotAUnit(f"{self.show(a)} is not a unit in {self.name}")

    def gcd(self, a, b):
        while b:
            a, b = b, self.divmod(a, b)[1]
        if a and a[-1] != 1:
            a = self.mul(a, self.inv((a[-1],)))
        return a

    def is_irreducible(self, a):
        # Trial division by all monic polynomials of degree <= deg/2.
        d = self.degree(a)
        if d < 1:
            return False
        for deg in range(1, d // 2 + 1):
            for g in self.monic_of_degree(deg):
                if not self.divmod(a, g)[1]:
                    return False
        return True

    def monic_of_degree(self, deg):
        p = self.p
        for lower in range(p**deg):
            coeffs, m = [], lower
            for _ in range(deg):
                coeffs.append(m % p)
                m //= p
            yield tuple(coeffs) + (1,)

    def residues_mod(self, g):
        """Canonical representatives modulo g."""
        p, d = self.p, self.degree(g)
        for k in range(p**d):
            coeffs, m = [], k
            for _ in range(d):
                coeffs.append(m % p)
                m //= p
            yield _trim(coeffs)

    def show(self, a):
        if not a:
            return "0"
        parts = []
        for i in range(len(a) - 1, -1, -1):
            c = a[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                v = self.variable if i == 1 else f"{self.variable}^{i}"
                parts.append(v if c == 1 else f"{c}*{v}")
        return " + ".join(parts)


class FpPolyQuotient(Ring):
    """F_p[t]/(g) on representatives of degree < deg(g)."""

    def __init__(self, base: FpPolynomials, modulus):
        if base.degree(modulus) < 1:
            raise ValueError("modulus must be nonconstant")
        self.base = base
        self.modulus = modulus
        self.p = base.p
        self.variable = base.variable
        self.name = f"{base.name}/({base.show(modulus)})"
        self.char = base.p
        self.cardinality = base.p ** base.degree(modulus)
        self.is_field = base.is_irreducible(modulus)
        self.zero = ()
        self.one = (1,) if base.degree(modulus) > 0 else ()
        self.t = self.reduce(base.t)

    def reduce(self, a):
        return self.base.divmod(a, self.modulus)[1]

    def add(self, a, b):
        return self.base.add(a, b)

    def neg(self, a):
        return self.base.neg(a)

    def mul(self, a, b):
        return self.reduce(self.base.mul(a, b))

    def from_int(self, k):
        return self.base.from_int(k)

    def exact_div(self, a, b):
        try:
            return self.mul(a, self.inv(b))
        except NotAUnit:
            raise DivisionInexact(
                f"{self.base.show(b)} is a zero divisor in {self.name}"
            ) from None

    def inv(self, a):
        # Extended Euclid in F_p[t].
        b = self.base
        r0, r1 = self.modulus, a
        s0, s1 = b.zero, b.one
        while r1:
            q, r = b.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, b.sub(s0, b.mul(q, s1))
        if b.degree(r0) != 0:
            raise NotAUnit(f"{b.show(a)} is not a unit in {self.name}")
        return self.reduce(b.mul(s0, b.inv(r0)))

    def elements(self):
        return self.base.residues_mod(self.modulus)

    def show(self, a):
        return self.base.show(a)


class IntPolyQuotient(Ring):
    """Z[t]/(g) for monic g, on fixed-length integer coefficient tuples.

    Torsion-free cover of F_p[t]/(g mod p) viewed as a Z-algebra; not a
    context base, so only integer-scalar exact division is supported.
    """

    def __init__(self, modulus, variable="t"):
        if not modulus or modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        self.modulus = tuple(modulus)
        self.deg = len(modulus) - 1
        self.variable = variable
        self.name = f"Z[{variable}]/({self._show_mod()})"
        self.zero = (0,) * self.deg
        self.one = ((1,) + (0,) * (self.deg - 1)) if self.deg else ()
        self.t = ((0, 1) + (0,) * (self.deg - 2)) if self.deg >= 2 else ((-modulus[0],) if self.deg == 1 else ())

    def _show_mod(self):
        return _show_int_poly(self.modulus, self.variable)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        full = [0] * (2 * self.deg - 1 if self.deg else 1)
        for i, c in enumerate(a):
            if c:
                for j, d in enumerate(b):
                    full[i + j] += c * d
        # reduce by the monic modulus
        for i in range(len(full) - 1, self.deg - 1, -1):
            c = full[i]
            if c:
                full[i] = 0
                for j in range(self.deg + 1):
                    full[i - self.deg + j] -= c * self.modulus[j]
        return tuple(full[: self.deg])

    def from_int(self, k):
        return ((k,) + (0,) * (self.deg - 1)) if self.deg else ()

    def exact_div(self, a, b):
        if b == self.one:
            return a
        # scalar divisor only; enough for unghosting over this cover
        if any(b[1:]):
            raise DivisionInexact(f"only scalar divisors supported in {self.name}")
        d = b[0]
        if d == 0:
            raise DivisionInexact("division by zero")
        out = []
        for c in a:
            q, r = divmod(c, d)
            if r:
                raise DivisionInexact(f"coefficient {c} not divisible by {d}")
            out.append(q)
        return tuple(out)

    def show(self, a):
        return _show_int_poly(a, self.variable)


def _show_int_poly(coeffs, variable):
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            v = variable if i == 1 else f"{variable}^{i}"
            parts.append(v if c == 1 else f"{c}*{v}")
    return " + ".join(parts) if parts else "0"


ZZ = Integers()
QQ = Rationals()


@cache
def Zmod(m):
    return IntegersMod(m)


@cache
def GF(p):
    return PrimeField(p)


@cache
def FpT(p, variable="t"):
    return FpPolynomials(p, variable)


# ---------------------------------------------------------------------------
# base-ring predicates used by Witt contexts
# ---------------------------------------------------------------------------

def is_prime_element(base: Ring, pi) -> bool:
    """True iff (pi) is maximal with finite residue field."""
    if isinstance(base, Integers):
        return _is_prime_int(abs(pi))
    if isinstance(base, FpPolynomials):
        return base.is_irreducible(pi)
    return False


def residue_cardinality(base: Ring, pi) -> int:
    if not is_prime_element(base, pi):
        raise NotPrimeElement(f"{base.show(pi)} is not a prime element of {base}")
    if isinstance(base, Integers):
        return abs(pi)
    return base.p ** base.degree(pi)


def reduce_mod_power(a, pi, k: int, alg: "Algebra") -> object:
    """Canonical representative of a modulo pi^k in the algebra."""
    return alg.reduce_mod_power(a, pi, k)


def base_from_text(text: str) -> Ring:
    """Parse a base ring name: Z, F<p>[t], or Fp[t]:<p>."""
    text = text.strip()
    if text == "Z":
        return ZZ
    m = _re.fullmatch(r"F(\d+)\[t\]", text) or _re.fullmatch(r"Fp\[t\]:(\d+)", text)
    if m and _is_prime_int(int(m.group(1))):
        return FpT(int(m.group(1)))
    raise ExprSyntaxError(f"unknown base ring {text!r} (expected Z or Fp[t]:p)")


def base_to_text(base: Ring) -> str:
    return "Z" if isinstance(base, Integers) else f"F{base.p}[t]"


# ---------------------------------------------------------------------------
# R0-algebra structure
# ---------------------------------------------------------------------------

def _int_gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class Algebra:
    """A ring A together with its structure map from the base R0.

    For base Z the map is implicit (from_int); for base F_p[t] it is
    determined by t_image, the image of t in A. torsion_free is set exactly
    when exact division by base elements is total on their multiples, which
    is what ghost inversion needs; quotient rings always report False and
    route concrete arithmetic through cover().
    """

    def __init__(self, base: Ring, ring: Ring, t_image=None):
        if isinstance(base, FpPolynomials):
            if ring.char != base.p:
                raise ValueError(f"{ring} is not an {base}-algebra: char mismatch")
            if t_image is None:
                t_image = getattr(ring, "t", None)
                if t_image is None:
                    raise ValueError(f"image of t in {ring} required")
        elif not isinstance(base, Integers):
            raise ValueError(f"unsupported base ring {base}")
        self.base = base
        self.ring = ring
        self.t_image = t_image
        self.torsion_free = self._torsion_free()

    def _torsion_free(self):
        r = self.ring
        coeff = getattr(r, "coeff", None)  # multivariate polynomial rings
        if isinstance(self.base, Integers):
            if isinstance(r, (Integers, Rationals, IntPolyQuotient)):
                return True
            if getattr(r, "z_torsion_free", False):  # nested Witt rings
                return True
            return isinstance(coeff, (Integers, Rationals))
        if isinstance(r, FpPolynomials) and r.p == self.base.p:
            return True
        return isinstance(coeff, FpPolynomials) and coeff.p == self.base.p

    def __repr__(self):
        if isinstance(self.base, Integers):
            return f"{self.ring} over Z"
        return f"{self.ring} over {self.base}"

    def __eq__(self, other):
        return (
            isinstance(other, Algebra)
            and self.base is other.base
            and type(self.ring) is type(other.ring)
            and repr(self.ring) == repr(other.ring)
            and self.t_image == other.t_image
        )

    def __hash__(self):
        return hash((repr(self.ring), self.t_image, repr(self.base)))

    def embed(self, r):
        """Apply the structure map to a base-ring element."""
        if isinstance(self.base, Integers):
            return self.ring.from_int(r)
        acc = self.ring.zero
        for c in reversed(r):
            acc = self.ring.add(self.ring.mul(acc, self.t_image), self.ring.from_int(c))
        return acc

    def embed_pow(self, r, k):
        return self.ring.pow(self.embed(r), k)

    def exact_div_base(self, a, pi, k=1):
        """Divide a by the image of pi^k, exactly."""
        if k == 0:
            return a
        return self.ring.exact_div(a, self.embed_pow(pi, k))

    def elements(self):
        return self.ring.elements()

    def reduce_mod_power(self, a, pi, k):
        """Canonical representative of a modulo pi^k * A."""
        if k == 0:
            return self.ring.zero
        r = self.ring
        if isinstance(self.base, Integers):
            n = self.base.pow(pi, k)
            if isinstance(r, Integers):
                return a % n
            if isinstance(r, IntegersMod):
                return a % _int_gcd(n, r.modulus)
            if isinstance(r, IntPolyQuotient):
                return tuple(c % n for c in a)
            if isinstance(r, (FpPolynomials, FpPolyQuotient)):
                # char p divides pi^k, so pi^k * A = 0
                return a if n % r.char == 0 else r.zero
            raise ValueError(f"no canonical reduction mod {n} in {r}")
        # base F_p[t]
        b = self.base
        d = b.pow(pi, k)
        if isinstance(r, FpPolynomials):
            return r.divmod(a, d)[1]
        if isinstance(r, FpPolyQuotient):
            g = b.gcd(d, r.modulus)
            return r.base.divmod(a, g)[1]
        if isinstance(r, PrimeField):
            image = self.embed_pow(pi, k)
            return r.zero if image else a
        raise ValueError(f"no canonical reduction mod {b.show(d)} in {r}")

    def cover(self):
        """Torsion-free cover: (cover algebra, lift, project).

        project is a base-algebra surjection, lift a set-theoretic section;
        concrete Witt arithmetic on torsion algebras lifts, computes by
        ghost transport upstairs, and projects back.
        """
        if self.torsion_free:
            ident = lambda a: a
            return self, ident, ident
        r = self.ring
        if isinstance(self.base, Integers):
            if isinstance(r, IntegersMod):
                return Algebra(ZZ, ZZ), (lambda a: a), r.from_int
            if isinstance(r, FpPolyQuotient):
                p = r.p
                monic = r.base.mul(r.modulus, r.base.inv((r.modulus[-1],)))
                cover_ring = IntPolyQuotient(tuple(int(c) for c in monic), r.variable)
                deg = cover_ring.deg

                def lift(a):
                    return tuple(a) + (0,) * (deg - len(a))

                def project(a):
                    return _trim([c % p for c in a])

                return Algebra(ZZ, cover_ring), lift, project
        else:
            b = self.base
            if isinstance(r, FpPolyQuotient) and r.p == b.p:
                g = r.modulus

                def project(a):
                    return r.base.divmod(a, g)[1]

                return Algebra(b, b, t_image=self.t_image), (lambda a: a), project
            if isinstance(r, PrimeField) and r.p == b.p:
                c = self.t_image

                def project_eval(a):
                    acc = 0
                    for coeff in reversed(a):
                        acc = (acc * c + coeff) % r.p
                    return acc

                return (
                    Algebra(b, b, t_image=(c,) if c else ()),
                    lambda a: (a,) if a else (),
                    project_eval,
                )
        raise TorsionNotSupported(
            f"no torsion-free cover implemented for {self}"
        )


# ---------------------------------------------------------------------------
# element text parsing: integers, `3*t^2 + 1`, multivariate monomial sums
# ---------------------------------------------------------------------------

def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        elif c in "+-*^()":
            tokens.append((c, c))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {c!r} at position {i}")
    tokens.append(("end", None))
    return tokens


class _PolyTextParser:
    """Precedence-climbing parser over ring callbacks."""

    def __init__(self, tokens, const, var, add, neg, mul, powi):
        self.toks = tokens
        self.pos = 0
        self.const, self.var = const, var
        self.add_, self.neg_, self.mul_, self.pow_ = add, neg, mul, powi

    def peek(self):
        return self.toks[self.pos][0]

    def next(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def parse(self):
        v = self.expr()
        if self.peek() != "end":
            raise ExprSyntaxError(f"trailing input at token {self.pos}")
        return v

    def expr(self):
        if self.peek() == "-":
            self.next()
            v = self.neg_(self.term())
        else:
            if self.peek() == "+":
                self.next()
            v = self.term()
        while self.peek() in "+-":
            op = self.next()[0]
            rhs = self.term()
            v = self.add_(v, self.neg_(rhs) if op == "-" else rhs)
        return v

    def term(self):
        v = self.power()
        while self.peek() == "*":
            self.next()
            v = self.mul_(v, self.power())
        return v

    def power(self):
        v = self.atom()
        if self.peek() == "^":
            self.next()
            kind, val = self.next()
            if kind != "int":
                raise ExprSyntaxError("exponent must be a nonnegative integer")
            v = self.pow_(v, val)
        return v

    def atom(self):
        kind, val = self.next()
        if kind == "int":
            return self.const(val)
        if kind == "name":
            return self.var(val)
        if kind == "(":
            v = self.expr()
            if self.next()[0] != ")":
                raise ExprSyntaxError("expected )")
            return v
        if kind == "-":
            return self.neg_(self.atom())
        raise ExprSyntaxError(f"unexpected token {val!r}")


def parse_element(ring: Ring, text: str):
    """Parse canonical element text in the given ring."""
    def var(name):
        v = getattr(ring, "variable", None)
        if name == v:
            return ring.t
        raise ExprSyntaxError(f"unknown name {name!r} in {ring}")

    parser = _PolyTextParser(
        _tokenize(text),
        const=ring.from_int,
        var=var,
        add=ring.add,
        neg=ring.neg,
        mul=ring.mul,
        powi=ring.pow,
    )
    return parser.parse()
