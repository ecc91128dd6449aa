"""Multi-prime Witt vectors by composition, and big-Witt truncation sets.

W_{E,n}(A) for a finite coprime family E is realized literally as the
composite W_{pi_r,n_r}(...W_{pi_1,n_1}(A)...): a WittRing descriptor makes
each truncated Witt ring a coefficient ring in its own right, so the outer
functor reuses the single-prime machinery unchanged. Values are stored as
the nested component tuples of the outermost level.

Multi-indices are always expressed in the canonical family order (ascending
primes), independent of the nesting order, so ghost maps of differently
nested vectors are directly comparable.

Base ring for families is Z; that covers every truncation-set and
composition statement exercised here.
"""
from __future__ import annotations

from functools import cache

from .errors import (
    CongruenceViolation,
    ContextMismatch,
    DivisionInexact,
    NotDivisorClosed,
    NotPrimeElement,
    NotRectangular,
)
from .poly import polyring
from .rings import ZZ, Algebra, Integers, Ring, is_prime_element
from .witt import (
    GhostVector,
    WittContext,
    WittVector,
    add as w_add,
    frobenius as w_frobenius,
    ghost as w_ghost,
    int_mul,
    mul as w_mul,
    negate as w_negate,
    teichmuller as w_teichmuller,
    unghost as w_unghost,
    verschiebung as w_verschiebung,
    witt_one,
    witt_zero,
)


class WittRing(Ring):
    """W_n(A) for a fixed single-prime context, as a Ring descriptor."""

    def __init__(self, ctx: WittContext, alg: Algebra):
        self.ctx = ctx
        self.alg = alg
        self.name = f"W_{ctx.n}({alg.ring}; pi={ctx.base.show(ctx.pi)})"
        self.char = 0  # not used: WittRing only ever carries Z-algebras
        self.zero = witt_zero(ctx, alg).components
        self.one = witt_one(ctx, alg).components
        card = alg.ring.cardinality
        self.cardinality = None if card is None else card ** (ctx.n + 1)
        # exact division by integers transports through ghost coordinates,
        # so it is total on multiples exactly when the inner algebra is
        self.z_torsion_free = alg.torsion_free and isinstance(alg.base, Integers)
        self._int_images = {}

    def wrap(self, raw):
        return WittVector(self.ctx, self.alg, raw)

    def add(self, a, b):
        return w_add(self.wrap(a), self.wrap(b)).components

    def neg(self, a):
        return w_negate(self.wrap(a)).components

    def mul(self, a, b):
        return w_mul(self.wrap(a), self.wrap(b)).components

    def from_int(self, k):
        hit = self._int_images.get(k)
        if hit is None:
            hit = self._int_images[k] = int_mul(k, self.wrap(self.one)).components
        return hit

    def exact_div(self, a, b):
        ga = w_ghost(self.wrap(a)).entries
        gb = w_ghost(self.wrap(b)).entries
        ring = self.alg.ring
        try:
            q = GhostVector(
                self.ctx,
                self.alg,
                tuple(ring.exact_div(x, y) for x, y in zip(ga, gb)),
            )
            return w_unghost(q).components
        except (DivisionInexact, CongruenceViolation) as e:
            raise DivisionInexact(f"not divisible in {self.name}: {e}") from None

    def elements(self):
        def vectors(length):
            if length == 0:
                yield ()
                return
            for rest in vectors(length - 1):
                for c in self.alg.ring.elements():
                    yield (c,) + rest

        return vectors(self.ctx.n + 1)

    def show(self, a):
        inner = self.alg.ring
        return "(" + ", ".join(inner.show(c) for c in a) + ")"


class PrimeFamily:
    """Pairwise coprime prime elements of Z, canonically ordered ascending."""

    def __init__(self, primes):
        primes = tuple(primes)
        for p in primes:
            if not is_prime_element(ZZ, p):
                raise NotPrimeElement(f"{p} is not a prime element of Z")
        norm = tuple(sorted(abs(p) for p in primes))
        if len(set(norm)) != len(norm):
            raise ContextMismatch(f"family members must be pairwise coprime: {primes}")
        self.primes = norm

    def __len__(self):
        return len(self.primes)

    def __eq__(self, other):
        return isinstance(other, PrimeFamily) and self.primes == other.primes

    def __hash__(self):
        return hash(self.primes)

    def __repr__(self):
        return f"E{{{', '.join(str(p) for p in self.primes)}}}"


@cache
def _witt_ring(ctx, alg):
    return WittRing(ctx, alg)


def _level_algebras(family: PrimeFamily, index, order, alg: Algebra):
    """Algebras climbing the nesting: level k is W of everything below."""
    if sorted(order) != list(range(len(family))):
        raise ContextMismatch(f"invalid nesting order {order}")
    if len(index) != len(family):
        raise ContextMismatch("multi-index length must match family size")
    algs = [alg]
    ctxs = []
    for pos in order:
        ctx = WittContext(ZZ, family.primes[pos], index[pos])
        ctxs.append(ctx)
        algs.append(Algebra(ZZ, _witt_ring(ctx, algs[-1])))
    return ctxs, algs


class MultiWittVector:
    """Element of the nested ring; order[k] names the family position of
    nesting level k, innermost first."""

    def __init__(self, family, index, alg, value, order=None):
        self.family = family
        self.index = tuple(index)
        self.alg = alg
        self.order = tuple(order) if order is not None else tuple(range(len(family)))
        self.ctxs, self.algs = _level_algebras(family, self.index, self.order, alg)
        self.value = value
        top = self.algs[-1].ring
        if not isinstance(top, WittRing):
            raise ContextMismatch("empty prime family")
        top.wrap(value)  # validates the component tree shape

    def top_ring(self) -> WittRing:
        return self.algs[-1].ring

    def _like(self, value):
        return MultiWittVector(self.family, self.index, self.alg, value, self.order)

    def __add__(self, other):
        _check_multi_pair(self, other)
        return self._like(self.top_ring().add(self.value, other.value))

    def __mul__(self, other):
        _check_multi_pair(self, other)
        return self._like(self.top_ring().mul(self.value, other.value))

    def __neg__(self):
        return self._like(self.top_ring().neg(self.value))

    def __eq__(self, other):
        return (
            isinstance(other, MultiWittVector)
            and self.family == other.family
            and self.index == other.index
            and self.order == other.order
            and self.alg == other.alg
            and self.value == other.value
        )

    def show(self):
        return self.top_ring().show(self.value)


def _check_multi_pair(a, b):
    if (
        a.family != b.family
        or a.index != b.index
        or a.order != b.order
        or a.alg != b.alg
    ):
        raise ContextMismatch("multi-prime operands live in different rings")


def multi_add(w1, w2):
    return w1 + w2


def multi_mul(w1, w2):
    return w1 * w2


def multi_neg(w):
    return -w


def multi_teichmuller(a, family, index, alg, order=None):
    order = tuple(order) if order is not None else tuple(range(len(family)))
    ctxs, algs = _level_algebras(family, index, order, alg)
    value = a
    for ctx, lower in zip(ctxs, algs):
        value = w_teichmuller(value, ctx, lower).components
    return MultiWittVector(family, index, alg, value, order)


def multi_zero(family, index, alg, order=None):
    order = tuple(order) if order is not None else tuple(range(len(family)))
    _, algs = _level_algebras(family, index, order, alg)
    return MultiWittVector(family, index, alg, algs[-1].ring.zero, order)


# ---------------------------------------------------------------------------
# ghost, unghost, reorder
# ---------------------------------------------------------------------------

def multi_ghost(w: MultiWittVector) -> dict:
    """Map from multi-indices (canonical family order) to base elements."""

    def rec(level, value):
        if level < 0:
            return {(): value}
        ctx, lower = w.ctxs[level], w.algs[level]
        entries = w_ghost(WittVector(ctx, lower, value)).entries
        pos = w.order[level]
        out = {}
        for j, entry in enumerate(entries):
            for idx, v in rec(level - 1, entry).items():
                out[_insert_index(idx, pos, j, w.order[:level])] = v
        return out

    return rec(len(w.order) - 1, w.value)


def _insert_index(partial, pos, j, inner_positions):
    """Merge axis pos=j into a canonical-order index over inner_positions."""
    pairs = sorted(zip(sorted(inner_positions), partial)) + [(pos, j)]
    pairs.sort()
    return tuple(v for _, v in pairs)


def multi_unghost(gmap: dict, family, index, alg, order=None) -> MultiWittVector:
    """Invert multi_ghost (torsion-free base algebra)."""
    order = tuple(order) if order is not None else tuple(range(len(family)))
    ctxs, algs = _level_algebras(family, index, order, alg)

    def rec(level, sub, positions):
        # sub: map from canonical-order indices restricted to `positions`
        if level < 0:
            return sub[()]
        ctx, lower = ctxs[level], algs[level]
        pos = order[level]
        axis = sorted(positions).index(pos)
        inner_positions = [p for p in positions if p != pos]
        entries = []
        for j in range(index[pos] + 1):
            restricted = {
                idx[:axis] + idx[axis + 1 :]: v
                for idx, v in sub.items()
                if idx[axis] == j
            }
            entries.append(rec(level - 1, restricted, inner_positions))
        g = GhostVector(ctx, lower, tuple(entries))
        return w_unghost(g).components

    value = rec(len(order) - 1, gmap, list(range(len(family))))
    return MultiWittVector(family, index, alg, value, order)


def reorder(w: MultiWittVector, new_order) -> MultiWittVector:
    """Same element in a different nesting order (equal multi_ghost)."""
    new_order = tuple(new_order)
    if new_order == w.order:
        return w
    return multi_unghost(multi_ghost(w), w.family, w.index, w.alg, new_order)


# ---------------------------------------------------------------------------
# per-prime operators
# ---------------------------------------------------------------------------

def _map_at_level(w, level, fn, new_index):
    def rec(k, value):
        if k == level:
            ctx, lower = w.ctxs[k], w.algs[k]
            return fn(WittVector(ctx, lower, value)).components
        # ring homomorphisms pass through outer levels componentwise
        return tuple(rec(k - 1, c) for c in value)

    value = rec(len(w.order) - 1, w.value)
    return MultiWittVector(w.family, new_index, w.alg, value, w.order)


def multi_frobenius(w: MultiWittVector, pos: int) -> MultiWittVector:
    """Frobenius at one prime: index drops by one at that position."""
    level = w.order.index(pos)
    new_index = list(w.index)
    new_index[pos] -= 1
    return _map_at_level(w, level, w_frobenius, tuple(new_index))


def multi_verschiebung(w: MultiWittVector, pos: int, j: int = 1) -> MultiWittVector:
    """Verschiebung at one prime. V is additive but not a ring map, so it
    cannot act componentwise at inner levels; the prime is moved outermost
    (ghost transport), shifted there, and moved back."""
    new_index = list(w.index)
    new_index[pos] += j
    new_index = tuple(new_index)
    if w.order[-1] == pos:
        inner_zero = w.algs[-2].ring.zero
        value = (inner_zero,) * j + w.value
        return MultiWittVector(w.family, new_index, w.alg, value, w.order)
    moved = tuple([p for p in w.order if p != pos] + [pos])
    shifted = multi_verschiebung(reorder(w, moved), pos, j)
    return reorder(shifted, w.order)


# ---------------------------------------------------------------------------
# big-Witt truncation sets over Z
# ---------------------------------------------------------------------------

def _factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(n):
    out = [1]
    for p, e in _factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def truncation_set_context(T):
    """Family and multi-index for a rectangular divisor-closed set T."""
    T = set(T)
    if not T or any(t < 1 for t in T):
        raise NotDivisorClosed("T must be a nonempty set of positive integers")
    for t in T:
        for d in _divisors(t):
            if d not in T:
                raise NotDivisorClosed(f"{t} is in T but its divisor {d} is not")
    exps = {}
    for t in T:
        for p, e in _factorize(t).items():
            exps[p] = max(exps.get(p, 0), e)
    box = 1
    for p, e in exps.items():
        box *= p**e
    if T != set(_divisors(box)):
        missing = sorted(set(_divisors(box)) - T)
        raise NotRectangular(
            f"T is not a full divisor box: expected divisors of {box}, missing {missing}"
        )
    primes = sorted(exps)
    family = PrimeFamily(primes)
    index = tuple(exps[p] for p in family.primes)
    return family, index


def index_of_divisor(family: PrimeFamily, d: int):
    fac = _factorize(d) if d > 1 else {}
    return tuple(fac.get(p, 0) for p in family.primes)


def divisor_of_index(family: PrimeFamily, idx):
    d = 1
    for p, e in zip(family.primes, idx):
        d *= p**e
    return d


def classical_big_ghost(comps: dict, T) -> dict:
    """w_m = sum_{d|m} d * x_d^(m/d) on divisor-indexed components over Z."""
    truncation_set_context(T)  # validates T
    out = {}
    for m in sorted(T):
        out[m] = sum(d * comps[d] ** (m // d) for d in _divisors(m))
    return out


def classical_to_nested(T):
    """Symbolic coordinate change from classical big-Witt coordinates x_d to
    nested coordinates, computed by unghosting the classical ghost through
    the nested system."""
    family, index = truncation_set_context(T)
    divisors = sorted(T)
    ring = polyring(ZZ, tuple(f"x{d}" for d in divisors))
    alg = Algebra(ZZ, ring)
    xs = {d: ring.gen(i) for i, d in enumerate(divisors)}
    gmap_classical = {
        m: ring.sum(
            ring.scale(ring.pow(xs[d], m // d), d) for d in _divisors(m)
        )
        for m in divisors
    }
    gmap = {index_of_divisor(family, m): g for m, g in gmap_classical.items()}
    nested = multi_unghost(gmap, family, index, alg)
    return nested, ring, divisors


def big_ghost_congruences_ok(entries: dict) -> bool:
    """a_j = a_{pj} mod p^(1+ord_p(j)) for all applicable prime/index pairs."""
    for m, am in entries.items():
        for p in _factorize(m):
            j = m // p
            if j in entries:
                e = _ord_p(m, p)  # = 1 + ord_p(j)
                if (am - entries[j]) % p**e:
                    return False
    return True


def _ord_p(n, p):
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e
