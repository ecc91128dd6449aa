"""Single-prime truncated Witt vectors W_{R0,(pi),n}.

Normalized indexing throughout: W_n has n+1 components, so this W_n is
traditionally denoted W_{n+1}.

Ring operations have two evaluation routes, cross-checked by tests:
  structural - evaluate the synthesized universal polynomials componentwise
               (total, works for every algebra);
  ghost      - transport through ghost coordinates in a torsion-free cover
               of the algebra and invert (usually faster).

Structural polynomial sets are synthesized by symbolic ghost inversion over
R0[a0..an, b0..bn], memoized per (op, base, pi, n) and optionally persisted
as versioned JSON under WITT_CACHE_DIR.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from time import monotonic

from .errors import (
    CongruenceViolation,
    ContextMismatch,
    DivisionInexact,
    IndexOutOfRange,
    InternalIntegrityError,
    LengthZero,
    NotAUnit,
    NotPrimeElement,
    TorsionNotSupported,
)
from .poly import MultiPoly, polyring
from .rings import Algebra, FpPolynomials, Integers, is_prime_element, residue_cardinality

OPS = ("sum", "product", "negation", "frobenius")


@dataclass(frozen=True)
class WittContext:
    """(base ring R0, uniformizer pi, residue cardinality q, length n)."""

    base: object
    pi: object
    q: int
    n: int

    def __init__(self, base, pi, n):
        if n < 0:
            raise LengthZero("truncation length must be nonnegative")
        if not is_prime_element(base, pi):
            raise NotPrimeElement(f"{base.show(pi)} is not a prime element of {base}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "q", residue_cardinality(base, pi))
        object.__setattr__(self, "n", n)

    def with_length(self, m):
        return WittContext(self.base, self.pi, m)

    def describe(self):
        return (
            f"W_{self.n}({self.base}, pi={self.base.show(self.pi)}, q={self.q})"
        )

    def __repr__(self):
        return self.describe()


@dataclass(frozen=True)
class WittVector:
    ctx: WittContext
    alg: Algebra
    components: tuple

    def __post_init__(self):
        if len(self.components) != self.ctx.n + 1:
            raise ContextMismatch(
                f"expected {self.ctx.n + 1} components, got {len(self.components)}"
            )
        if self.alg.base is not self.ctx.base:
            raise ContextMismatch("algebra base does not match context base")

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        return add(self, negate(other))

    def show(self):
        r = self.alg.ring
        return "(" + ", ".join(r.show(c) for c in self.components) + ")"


@dataclass(frozen=True)
class GhostVector:
    ctx: WittContext
    alg: Algebra
    entries: tuple

    def show(self):
        r = self.alg.ring
        return "<" + ", ".join(r.show(c) for c in self.entries) + ">"


def witt_zero(ctx, alg):
    return WittVector(ctx, alg, (alg.ring.zero,) * (ctx.n + 1))


def witt_one(ctx, alg):
    return teichmuller(alg.ring.one, ctx, alg)


# ---------------------------------------------------------------------------
# ghost transforms
# ---------------------------------------------------------------------------

def ghost(w: WittVector) -> GhostVector:
    entries = _ghost_entries(w.ctx, w.alg, w.components)
    return GhostVector(w.ctx, w.alg, tuple(entries))


def _ghost_entries(ctx, alg, comps, length=None):
    """Entries gh_k = sum_{i<=k} pi^i comps_i^(q^(k-i)) for k <= length."""
    ring = alg.ring
    n = len(comps) - 1 if length is None else length
    pipow = [alg.embed_pow(ctx.pi, i) for i in range(n + 1)]
    chain = list(comps)
    out = []
    for k in range(n + 1):
        for i in range(k):
            chain[i] = ring.pow(chain[i], ctx.q)
        acc = ring.zero
        for i in range(k + 1):
            acc = ring.add(acc, ring.mul(pipow[i], chain[i]))
        out.append(acc)
    return out


def unghost(g: GhostVector, alg: Algebra | None = None) -> WittVector:
    """Unique Witt vector with the given ghost entries, over torsion-free alg."""
    alg = alg or g.alg
    if not alg.torsion_free:
        from .errors import TorsionNotSupported

        raise TorsionNotSupported(f"unghost requires a torsion-free algebra, got {alg}")
    comps = _unghost_raw(g.ctx, alg, g.entries)
    return WittVector(g.ctx, alg, tuple(comps))


def _unghost_raw(ctx, alg, entries):
    ring = alg.ring
    n = len(entries) - 1
    pipow = [alg.embed_pow(ctx.pi, i) for i in range(n + 1)]
    comps = []
    chain = []
    for k in range(n + 1):
        for i in range(k):
            chain[i] = ring.pow(chain[i], ctx.q)
        rem = entries[k]
        for i in range(k):
            rem = ring.sub(rem, ring.mul(pipow[i], chain[i]))
        try:
            x = ring.exact_div(rem, pipow[k]) if k else rem
        except DivisionInexact as e:
            raise CongruenceViolation(
                f"ghost entries are not in the image of the ghost map: "
                f"entry {k} leaves remainder ({e})"
            ) from None
        comps.append(x)
        chain.append(x)
    return comps


# ---------------------------------------------------------------------------
# structural polynomial synthesis
# ---------------------------------------------------------------------------

class StructuralPolynomialSet:
    """Universal polynomials over R0[a..,b..] for one ring operation."""

    def __init__(self, op, ctx, ring, polys, arity):
        self.op = op
        self.ctx = ctx
        self.ring = ring  # MultiPoly over ctx.base
        self.polys = polys
        self.arity = arity

    def evaluate(self, alg, comps_a, comps_b=None):
        values = list(comps_a) + (list(comps_b) if self.arity == 2 else [])
        return [
            self.ring.eval_into(s, alg.ring, values, alg.embed) for s in self.polys
        ]

    def term_count(self):
        return sum(len(s) for s in self.polys)


_MEMO: dict = {}


def _sym_ring(ctx, arity):
    names = tuple(f"a{i}" for i in range(ctx.n + 1))
    if arity == 2:
        names += tuple(f"b{i}" for i in range(ctx.n + 1))
    return polyring(ctx.base, names)


def _sym_ghost(ring, ctx, offset, upto):
    """Ghost polynomials of the generic vector at variable offset."""
    pi_c = ring.const(ctx.pi) if not isinstance(ctx.base, Integers) else ring.from_int(ctx.pi)
    pipow = [ring.pow(pi_c, i) for i in range(upto + 1)]
    chain = [ring.gen(offset + i) for i in range(upto + 1)]
    out = []
    for k in range(upto + 1):
        for i in range(k):
            chain[i] = ring.pow(chain[i], ctx.q)
        acc = ring.zero
        for i in range(k + 1):
            acc = ring.add(acc, ring.mul(pipow[i], chain[i]))
        out.append(acc)
    return out, pipow


def _targets(ring, ctx, op, deadline):
    """Ghost-space targets the structural polynomials must unghost."""
    if op == "sum":
        ga, _ = _sym_ghost(ring, ctx, 0, ctx.n)
        gb, _ = _sym_ghost(ring, ctx, ctx.n + 1, ctx.n)
        return [ring.add(a, b) for a, b in zip(ga, gb)]
    if op == "product":
        ga, _ = _sym_ghost(ring, ctx, 0, ctx.n)
        gb, _ = _sym_ghost(ring, ctx, ctx.n + 1, ctx.n)
        return [ring.mul(a, b, deadline) for a, b in zip(ga, gb)]
    if op == "negation":
        ga, _ = _sym_ghost(ring, ctx, 0, ctx.n)
        return [ring.neg(a) for a in ga]
    if op == "frobenius":
        ga, _ = _sym_ghost(ring, ctx, 0, ctx.n)
        return ga[1:]
    raise ValueError(f"unknown operation {op!r}")


def structural_polys(ctx: WittContext, op: str, deadline: float = 0.0) -> StructuralPolynomialSet:
    """Synthesize (or recall) the universal polynomials for op in ctx."""
    if op not in OPS:
        raise ValueError(f"op must be one of {OPS}")
    if op == "frobenius" and ctx.n == 0:
        raise LengthZero("frobenius needs length n >= 1")
    key = (op, repr(ctx.base), ctx.pi, ctx.n)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    arity = 2 if op in ("sum", "product") else 1
    ring = _sym_ring(ctx, arity)
    sps = _disk_load(ctx, op, ring, arity)
    if sps is None:
        polys = _synthesize(ring, ctx, op, deadline)
        sps = StructuralPolynomialSet(op, ctx, ring, polys, arity)
        _disk_save(sps)
    _MEMO[key] = sps
    return sps


def _synthesize(ring, ctx, op, deadline):
    targets = _targets(ring, ctx, op, deadline)
    pi_c = ring.const(ctx.pi) if not isinstance(ctx.base, Integers) else ring.from_int(ctx.pi)
    pipow = [ring.pow(pi_c, i) for i in range(len(targets))]
    polys = []
    chain = []
    for k, target in enumerate(targets):
        for i in range(k):
            chain[i] = ring.pow(chain[i], ctx.q, deadline)
        rem = target
        for i in range(k):
            rem = ring.sub(rem, ring.mul(pipow[i], chain[i], deadline))
        try:
            s = ring.exact_div(rem, pipow[k]) if k else rem
        except DivisionInexact as e:
            raise InternalIntegrityError(
                f"structural synthesis for {op} in {ctx.describe()} hit an "
                f"inexact division at component {k}: {e}"
            ) from None
        polys.append(s)
        chain.append(s)
    return polys


def verify_ghost_compat(sps: StructuralPolynomialSet, deadline: float = 0.0) -> bool:
    """Check gh(result polys) == ghost-space target, symbolically."""
    ring, ctx = sps.ring, sps.ctx
    targets = _targets(ring, ctx, sps.op, deadline)
    pi_c = ring.const(ctx.pi) if not isinstance(ctx.base, Integers) else ring.from_int(ctx.pi)
    pipow = [ring.pow(pi_c, i) for i in range(len(targets))]
    chain = []
    for k, target in enumerate(targets):
        for i in range(k):
            chain[i] = ring.pow(chain[i], ctx.q, deadline)
        chain.append(sps.polys[k])
        acc = ring.zero
        for i in range(k + 1):
            acc = ring.add(acc, ring.mul(pipow[i], chain[i], deadline))
        if acc != target:
            return False
    return True


# -- optional on-disk cache --------------------------------------------------

_CACHE_FORMAT = "wittvec-structpoly-v1"


def _cache_path(ctx, op):
    root = os.environ.get("WITT_CACHE_DIR")
    if not root:
        return None
    pi_tag = (
        str(ctx.pi)
        if isinstance(ctx.base, Integers)
        else "p" + "_".join(str(c) for c in ctx.pi)
    )
    name = f"{op}-{repr(ctx.base).replace('[', '').replace(']', '')}-{pi_tag}-n{ctx.n}.json"
    return os.path.join(root, name)


def _fingerprint(ctx, op):
    return {
        "format": _CACHE_FORMAT,
        "op": op,
        "base": repr(ctx.base),
        "pi": ctx.pi if isinstance(ctx.base, Integers) else list(ctx.pi),
        "q": ctx.q,
        "n": ctx.n,
    }


def _coeff_to_json(base, c):
    return str(c) if isinstance(base, Integers) else list(c)


def _coeff_from_json(base, j):
    return int(j) if isinstance(base, Integers) else tuple(j)


def _disk_load(ctx, op, ring, arity):
    path = _cache_path(ctx, op)
    if not path or not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            doc = json.load(fh)
        if doc.get("fingerprint") != _fingerprint(ctx, op):
            return None
        polys = [
            {int(k): _coeff_from_json(ctx.base, c) for k, c in entries}
            for entries in doc["polys"]
        ]
    except (OSError, ValueError, KeyError, TypeError):
        return None
    return StructuralPolynomialSet(op, ctx, ring, polys, arity)


def _disk_save(sps):
    path = _cache_path(sps.ctx, sps.op)
    if not path:
        return
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    doc = {
        "fingerprint": _fingerprint(sps.ctx, sps.op),
        "polys": [
            [[str(k), _coeff_to_json(sps.ctx.base, c)] for k, c in sorted(p.items())]
            for p in sps.polys
        ],
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def _check_pair(w1, w2):
    if w1.ctx != w2.ctx:
        raise ContextMismatch(f"contexts differ: {w1.ctx} vs {w2.ctx}")
    if w1.alg != w2.alg:
        raise ContextMismatch("algebras differ")


def _ghost_route_binary(op, w1, w2):
    ctx, alg = w1.ctx, w1.alg
    cover, lift, project = alg.cover()
    ring = cover.ring
    ga = _ghost_entries(ctx, cover, [lift(c) for c in w1.components])
    gb = _ghost_entries(ctx, cover, [lift(c) for c in w2.components])
    combine = ring.add if op == "sum" else ring.mul
    gz = [combine(a, b) for a, b in zip(ga, gb)]
    comps = _unghost_raw(ctx, cover, gz)
    return WittVector(ctx, alg, tuple(project(c) for c in comps))


def _structural_route_binary(op, w1, w2):
    ctx, alg = w1.ctx, w1.alg
    sps = structural_polys(ctx, op)
    comps = sps.evaluate(alg, w1.components, w2.components)
    return WittVector(ctx, alg, tuple(comps))


def add(w1: WittVector, w2: WittVector, route: str = "auto") -> WittVector:
    _check_pair(w1, w2)
    if route == "structural":
        return _structural_route_binary("sum", w1, w2)
    try:
        return _ghost_route_binary("sum", w1, w2)
    except TorsionNotSupported:
        if route != "auto":
            raise
        return _structural_route_binary("sum", w1, w2)


def mul(w1: WittVector, w2: WittVector, route: str = "auto") -> WittVector:
    _check_pair(w1, w2)
    if route == "structural":
        return _structural_route_binary("product", w1, w2)
    try:
        return _ghost_route_binary("product", w1, w2)
    except TorsionNotSupported:
        if route != "auto":
            raise
        return _structural_route_binary("product", w1, w2)


def negate(w: WittVector, route: str = "auto") -> WittVector:
    ctx, alg = w.ctx, w.alg
    if route != "structural":
        try:
            cover, lift, project = alg.cover()
        except TorsionNotSupported:
            if route != "auto":
                raise
        else:
            ga = _ghost_entries(ctx, cover, [lift(c) for c in w.components])
            comps = _unghost_raw(ctx, cover, [cover.ring.neg(a) for a in ga])
            return WittVector(ctx, alg, tuple(project(c) for c in comps))
    sps = structural_polys(ctx, "negation")
    return WittVector(ctx, alg, tuple(sps.evaluate(alg, w.components)))


def frobenius(w: WittVector, route: str = "auto") -> WittVector:
    """The Frobenius psi: W_n -> W_{n-1} (ghost shift by one)."""
    ctx, alg = w.ctx, w.alg
    if ctx.n == 0:
        raise LengthZero("frobenius needs length n >= 1")
    out_ctx = ctx.with_length(ctx.n - 1)
    if route != "structural":
        try:
            cover, lift, project = alg.cover()
        except TorsionNotSupported:
            if route != "auto":
                raise
        else:
            ga = _ghost_entries(ctx, cover, [lift(c) for c in w.components])
            comps = _unghost_raw(out_ctx, cover, ga[1:])
            return WittVector(out_ctx, alg, tuple(project(c) for c in comps))
    sps = structural_polys(ctx, "frobenius")
    return WittVector(out_ctx, alg, tuple(sps.evaluate(alg, w.components)))


def int_mul(k: int, w: WittVector) -> WittVector:
    """k-fold sum of w (double-and-add)."""
    if k < 0:
        return int_mul(-k, negate(w))
    acc = witt_zero(w.ctx, w.alg)
    base = w
    while k:
        if k & 1:
            acc = add(acc, base)
        k >>= 1
        if k:
            base = add(base, base)
    return acc


def scalar_vector(r, ctx: WittContext) -> WittVector:
    """The image of base scalar r in W_n(R0): constant ghost (r, ..., r).

    This is the structure map making W_n an R0-algebra with ghost R0-linear;
    it differs from the coaction of the canonical lift away from base Z.
    """
    alg = Algebra(ctx.base, ctx.base)
    return unghost(GhostVector(ctx, alg, (r,) * (ctx.n + 1)))


def base_scale(r, w: WittVector) -> WittVector:
    """r*w for a base scalar r: scales every ghost entry by r.

    The scaled ghost is the ghost of lambda(r)*w, so the divisions below are
    exact whenever the algebra has a torsion-free cover.
    """
    ctx, alg = w.ctx, w.alg
    try:
        cover, lift, project = alg.cover()
    except TorsionNotSupported:
        lam = scalar_vector(r, ctx)
        lifted = WittVector(ctx, alg, tuple(alg.embed(c) for c in lam.components))
        return mul(lifted, w)
    rc = cover.embed(r)
    ring = cover.ring
    entries = _ghost_entries(ctx, cover, [lift(c) for c in w.components])
    comps = _unghost_raw(ctx, cover, [ring.mul(rc, e) for e in entries])
    return WittVector(ctx, alg, tuple(project(c) for c in comps))


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def teichmuller(a, ctx: WittContext, alg: Algebra) -> WittVector:
    return WittVector(ctx, alg, (a,) + (alg.ring.zero,) * ctx.n)


def teich_scale(a, w: WittVector) -> WittVector:
    """[a] * w componentwise: component i becomes a^(q^i) * w_i."""
    ring = w.alg.ring
    comps = []
    apow = a
    for i, c in enumerate(w.components):
        if i:
            apow = ring.pow(apow, w.ctx.q)
        comps.append(ring.mul(apow, c))
    return WittVector(w.ctx, w.alg, tuple(comps))


def verschiebung(w: WittVector, j: int = 1) -> WittVector:
    """V^j: prepend j zeros, landing in length n + j."""
    if j < 0:
        raise IndexOutOfRange("verschiebung exponent must be nonnegative")
    ctx = w.ctx.with_length(w.ctx.n + j)
    return WittVector(ctx, w.alg, (w.alg.ring.zero,) * j + w.components)


def truncate(w: WittVector, j: int) -> WittVector:
    """Project W_n -> W_j by dropping trailing components."""
    if not 0 <= j <= w.ctx.n:
        raise IndexOutOfRange(f"truncation length {j} not in [0, {w.ctx.n}]")
    return WittVector(w.ctx.with_length(j), w.alg, w.components[: j + 1])


def ghost_component(w: WittVector, i: int, reduced: bool = False):
    """gh_i(w), or the reduced ghost component rgh_i = gh_i mod pi^(n+1).

    The reduced form extends the components by zeros when i > n; the result
    does not depend on the extension chosen.
    """
    ctx, alg = w.ctx, w.alg
    if not reduced:
        if i > ctx.n:
            raise IndexOutOfRange(f"ghost index {i} exceeds length {ctx.n}")
        return _ghost_entries(ctx, alg, w.components[: i + 1])[i]
    comps = list(w.components) + [alg.ring.zero] * max(0, i - ctx.n)
    entry = _ghost_entries(ctx, alg, comps[: i + 1])[i]
    return alg.reduce_mod_power(entry, ctx.pi, ctx.n + 1)


def rebase_uniformizer(w: WittVector, u) -> WittVector:
    """Coordinates of the same element with respect to uniformizer u*pi."""
    ctx, alg = w.ctx, w.alg
    base = ctx.base
    if not base.is_unit(u):
        raise NotAUnit(f"{base.show(u)} is not a unit of {base}")
    new_ctx = WittContext(base, base.mul(u, ctx.pi), ctx.n)
    cover, lift, project = alg.cover()
    entries = _ghost_entries(ctx, cover, [lift(c) for c in w.components])
    comps = _unghost_raw(new_ctx, cover, entries)
    return WittVector(new_ctx, alg, tuple(project(c) for c in comps))


# ---------------------------------------------------------------------------
# generic symbolic vectors
# ---------------------------------------------------------------------------

def generic_vector(ctx: WittContext, prefix: str = "x", extra_vars=()):
    """The generic Witt vector over R0[prefix0..prefixn, *extra_vars]."""
    names = tuple(f"{prefix}{i}" for i in range(ctx.n + 1)) + tuple(extra_vars)
    ring = polyring(ctx.base, names)
    alg = Algebra(ctx.base, ring)
    comps = tuple(ring.gen(i) for i in range(ctx.n + 1))
    return WittVector(ctx, alg, comps), ring
