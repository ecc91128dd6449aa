"""Commuting Frobenius lifts, delta-operators, and the coaction A -> W_n(A).

A lift family on a torsion-free algebra A (the base ring itself, or a free
polynomial algebra over it) is a set of commuting ring endomorphisms
psi_alpha with psi_alpha(a) = a^{q_alpha} mod pi_alpha. Each determines
delta_alpha(a) = (psi_alpha(a) - a^{q_alpha}) / pi_alpha, and the family
determines a ring map A -> W_n(A) whose ghost components are psi^m(a).

Base scalars always move canonically: the identity on Z, the q-power map on
F_p[t] (which is literal there, so base deltas vanish in characteristic p).
Only generator images vary between specs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from .errors import (
    CongruenceViolation,
    ContextMismatch,
    DivisionInexact,
    ExprSyntaxError,
    LiftViolation,
    NotPrimeElement,
    UnsupportedPresentation,
)
from .multi import MultiWittVector, PrimeFamily, multi_unghost
from .poly import MultiPoly, polyring
from .report import Claim, Report
from .rings import (
    ZZ,
    Algebra,
    FpPolynomials,
    FpT,
    Integers,
    base_from_text,
    base_to_text,
    is_prime_element,
    residue_cardinality,
)
from .witt import GhostVector, WittContext, WittVector, unghost


class FrobeniusLiftSpec:
    """Commuting Frobenius lifts given by generator images; immutable.

    alg.ring must be alg.base itself or a free polynomial algebra over it;
    anything with relations is rejected. images holds one tuple of generator
    images per prime (empty tuples when the algebra is the base ring).
    """

    def __init__(self, alg: Algebra, primes, images):
        ring = alg.ring
        if isinstance(ring, MultiPoly) and ring.coeff is alg.base:
            self.nvars = ring.nvars
        elif ring is alg.base:
            self.nvars = 0
        else:
            raise UnsupportedPresentation(
                f"lift specs need {alg.base} or a free polynomial algebra over it, not {ring}"
            )
        primes = tuple(primes)
        if not primes:
            raise ContextMismatch("at least one prime required")
        for pi in primes:
            if not is_prime_element(alg.base, pi):
                raise NotPrimeElement(
                    f"{alg.base.show(pi)} is not a prime element of {alg.base}"
                )
        for i in range(len(primes)):
            for j in range(i + 1, len(primes)):
                if not _coprime(alg.base, primes[i], primes[j]):
                    raise ContextMismatch(
                        f"family members must be pairwise coprime: "
                        f"{alg.base.show(primes[i])}, {alg.base.show(primes[j])}"
                    )
        images = tuple(tuple(im) for im in images)
        if len(images) != len(primes) or any(len(im) != self.nvars for im in images):
            raise ContextMismatch(
                "one image tuple per prime, one image per generator required"
            )
        self.alg = alg
        self.base = alg.base
        self.ring = ring
        self.primes = primes
        self.images = images
        self.qs = tuple(residue_cardinality(alg.base, pi) for pi in primes)

    def base_lift(self, i, c):
        """Canonical lift on scalars: id over Z, q-power over F_p[t]."""
        if isinstance(self.base, Integers):
            return c
        return self.base.pow(c, self.qs[i])

    def psi(self, i, a):
        """Apply psi_i to an algebra element."""
        if self.nvars == 0:
            return self.base_lift(i, a)
        ring = self.ring
        return ring.eval_into(
            a, ring, self.images[i], lambda c: ring.const(self.base_lift(i, c))
        )

    def psi_word(self, exps, a):
        """Composite prod_i psi_i^{exps[i]}; commutativity makes the
        application order immaterial."""
        for i, e in enumerate(exps):
            for _ in range(e):
                a = self.psi(i, a)
        return a

    def show(self, a) -> str:
        return self.ring.show(a)


def _coprime(base, a, b):
    if isinstance(base, Integers):
        return abs(a) != abs(b)
    return len(base.gcd(a, b)) == 1  # gcd is monic; length 1 means a unit


def _embed_scalar(spec, c):
    return spec.ring.const(c) if spec.nvars else c


def _scale_base(spec, a, c):
    return spec.ring.scale(a, c) if spec.nvars else spec.base.mul(a, c)


def _div_prime(spec, a, i):
    if spec.nvars:
        return spec.ring.exact_div(a, spec.ring.const(spec.primes[i]))
    return spec.base.exact_div(a, spec.primes[i])


def delta_apply(spec: FrobeniusLiftSpec, i: int, a):
    """delta_i(a) = (psi_i(a) - a^{q_i}) / pi_i."""
    ring = spec.ring
    d = ring.sub(spec.psi(i, a), ring.pow(a, spec.qs[i]))
    try:
        return _div_prime(spec, d, i)
    except DivisionInexact:
        raise LiftViolation(
            f"psi is not a Frobenius lift for {spec.base.show(spec.primes[i])} "
            f"on {spec.show(a)}"
        ) from None


def base_delta(base, pi, a):
    """delta of the canonical lift on the base ring itself."""
    q = residue_cardinality(base, pi)
    lifted = a if isinstance(base, Integers) else base.pow(a, q)
    return base.exact_div(base.sub(lifted, base.pow(a, q)), pi)


# ---------------------------------------------------------------------------
# C-polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CPolynomials:
    """Universal carry polynomials: c[i] lives in base[x, y] and measures the
    additivity defect of delta_i; cross[(i, j)] lives in base[x, y, z] and
    measures the commutator delta_i delta_j - delta_j delta_i."""

    ring2: MultiPoly
    ring3: MultiPoly
    c: tuple
    cross: dict


def c_poly(base, pi):
    """C(x,y) = (x^q + y^q - (x+y)^q) / pi over base[x, y]."""
    q = residue_cardinality(base, pi)
    ring = polyring(base, ("x", "y"))
    x, y = ring.gen(0), ring.gen(1)
    num = ring.sub(ring.add(ring.pow(x, q), ring.pow(y, q)), ring.pow(ring.add(x, y), q))
    return ring, ring.exact_div(num, ring.const(pi))


def c_cross_poly(base, pi_a, pi_b):
    """C_{a,b}(x, y, z) with y, z standing for delta_a(x), delta_b(x)."""
    qa = residue_cardinality(base, pi_a)
    qb = residue_cardinality(base, pi_b)
    ring = polyring(base, ("x", "y", "z"))
    x, y, z = ring.gen(0), ring.gen(1), ring.gen(2)
    ring2, ca = c_poly(base, pi_a)
    _, cb = c_poly(base, pi_b)
    t1 = ring2.eval_into(
        cb, ring, (ring.pow(x, qa), ring.scale(y, pi_a)), ring.const
    )
    t1 = ring.exact_div(t1, ring.const(pi_a))
    t2 = ring2.eval_into(
        ca, ring, (ring.pow(x, qb), ring.scale(z, pi_b)), ring.const
    )
    t2 = ring.exact_div(t2, ring.const(pi_b))
    # delta_a(pi_b) is divisible by pi_b (and symmetrically): the scalar
    # coefficients below are exact
    da_b = base.exact_div(base_delta(base, pi_a, pi_b), pi_b)
    db_a = base.exact_div(base_delta(base, pi_b, pi_a), pi_a)
    out = ring.sub(t1, t2)
    out = ring.sub(out, ring.scale(ring.pow(z, qa), da_b))
    return ring.add(out, ring.scale(ring.pow(y, qb), db_a))


def c_polynomials(base, primes) -> CPolynomials:
    primes = tuple(primes)
    ring2 = polyring(base, ("x", "y"))
    ring3 = polyring(base, ("x", "y", "z"))
    c = tuple(c_poly(base, pi)[1] for pi in primes)
    cross = {
        (i, j): c_cross_poly(base, primes[i], primes[j])
        for i in range(len(primes))
        for j in range(len(primes))
        if i != j
    }
    return CPolynomials(ring2, ring3, c, cross)


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------

def check_frobenius_lift(spec: FrobeniusLiftSpec) -> Report:
    """The three lift-family invariants, with the first failure named."""
    claims = []
    base, ring = spec.base, spec.ring
    for i, pi in enumerate(spec.primes):
        label = base.show(pi)
        # scalars: q-power is a homomorphism mod pi, so residues suffice
        if isinstance(base, Integers):
            p = abs(pi)
            bad = next(
                (a for a in range(p) if (pow(a, spec.qs[i], p) - a) % p), None
            )
        else:
            t = base.t
            bad = next(
                (
                    base.show(c)
                    for c in (t, base.add(t, base.one))
                    if spec.base_lift(i, c) != base.pow(c, spec.qs[i])
                ),
                None,
            )
        detail = "" if bad is None else f"scalar {bad} not lifted"
        failing = None
        if bad is None:
            for v in range(spec.nvars):
                d = ring.sub(spec.psi(i, ring.gen(v)), ring.gen(v, spec.qs[i]))
                if not _divides_prime(spec, d, i):
                    failing = ring.variables[v]
                    break
            if failing is not None:
                detail = f"psi({failing}) != {failing}^{spec.qs[i]} mod {label}"
        claims.append(Claim(f"frobenius-property[{label}]", not detail, detail))
    for i in range(len(spec.primes)):
        for j in range(i + 1, len(spec.primes)):
            li, lj = base.show(spec.primes[i]), base.show(spec.primes[j])
            detail = ""
            for v in range(spec.nvars):
                x = ring.gen(v)
                if spec.psi(i, spec.psi(j, x)) != spec.psi(j, spec.psi(i, x)):
                    detail = f"psi disagree on {ring.variables[v]}"
                    break
            claims.append(Claim(f"lifts-commute[{li},{lj}]", not detail, detail))
    return Report(tuple(claims))


def _divides_prime(spec, a, i):
    try:
        _div_prime(spec, a, i)
        return True
    except DivisionInexact:
        return False


def _symbolic_elements(spec):
    """Deterministic low-degree inputs; with q-th powers the identities stay
    within degree 2q."""
    base, ring = spec.base, spec.ring
    if spec.nvars == 0:
        if isinstance(base, Integers):
            return [base.from_int(k) for k in (-3, -1, 0, 1, 2, 6)]
        t = base.t
        return [base.zero, base.one, t, base.add(t, base.one), base.mul(t, t)]
    out = [ring.zero, ring.one, ring.from_int(2)]
    for v in range(min(spec.nvars, 2)):
        x = ring.gen(v)
        out += [
            x,
            ring.add(x, ring.one),
            ring.add(ring.scale(x, base.from_int(2)), ring.from_int(3)),
            ring.pow(x, 2),
            ring.add(ring.pow(x, 2), ring.sub(x, ring.one)),
        ]
    if isinstance(base, FpPolynomials):
        out.append(ring.scale(ring.gen(0), base.t))
    return out


def _random_scalar(base, rng):
    if isinstance(base, Integers):
        return rng.randint(-99, 99)
    acc = base.zero
    for i in range(3):
        acc = base.add(
            acc, base.mul(base.from_int(rng.randrange(base.p)), base.pow(base.t, i))
        )
    return acc


def _random_element(spec, rng):
    ring, base = spec.ring, spec.base
    if spec.nvars == 0:
        return _random_scalar(base, rng)
    acc = ring.zero
    for _ in range(3):
        exps = [0] * spec.nvars
        exps[rng.randrange(spec.nvars)] = rng.randint(0, 2)
        if isinstance(base, Integers):
            c = rng.randint(-9, 9)
        else:
            c = base.add(
                base.from_int(rng.randrange(base.p)),
                base.mul(base.from_int(rng.randrange(base.p)), base.t),
            )
        acc = ring.add(acc, ring.term(c, exps))
    return acc


def _clip(s, limit=120):
    return s if len(s) <= limit else s[: limit - 3] + "..."


def check_delta_axioms(spec: FrobeniusLiftSpec, samples: int = 200, seed: int = 0) -> Report:
    """Axioms (1)-(4) on the deterministic symbolic inputs plus seeded random
    samples; the first violated identity is reported with its witnesses."""
    cp = c_polynomials(spec.base, spec.primes)
    ring = spec.ring
    rng = random.Random(seed)
    sym = _symbolic_elements(spec)
    elems = sym + [_random_element(spec, rng) for _ in range(samples)]
    pairs = [(a, b) for a in sym for b in sym] + [
        (_random_element(spec, rng), _random_element(spec, rng))
        for _ in range(samples)
    ]
    claims = []

    def run(name, cases):
        try:
            for ok, witness in cases:
                if not ok:
                    return Claim(name, False, witness)
        except LiftViolation as e:
            return Claim(name, False, _clip(str(e)))
        return Claim(name, True)

    def scalar_cases(i):
        scalars = (
            [spec.base.from_int(k) for k in (-3, -1, 0, 1, 2, 5)]
            if isinstance(spec.base, Integers)
            else [spec.base.one, spec.base.t, spec.base.add(spec.base.t, spec.base.one)]
        )
        for r in scalars:
            want = _embed_scalar(spec, base_delta(spec.base, spec.primes[i], r))
            got = delta_apply(spec, i, _embed_scalar(spec, r))
            yield got == want, f"delta({spec.base.show(r)}) != (sigma(r) - r^q)/pi"

    def psi_cases(i):
        for a in elems:
            lhs = spec.psi(i, a)
            rhs = ring.add(
                ring.pow(a, spec.qs[i]),
                _scale_base(spec, delta_apply(spec, i, a), spec.primes[i]),
            )
            yield lhs == rhs, f"psi(a) != a^q + pi*delta(a) at a={_clip(spec.show(a))}"

    def axiom2_cases(i):
        for a, b in pairs:
            lhs = delta_apply(spec, i, ring.add(a, b))
            rhs = ring.add(
                ring.add(delta_apply(spec, i, a), delta_apply(spec, i, b)),
                cp.ring2.eval_into(cp.c[i], ring, (a, b), lambda c: _embed_scalar(spec, c)),
            )
            if lhs != rhs:
                yield False, f"a={_clip(spec.show(a))}, b={_clip(spec.show(b))}"
            else:
                yield True, ""

    def axiom3_cases(i):
        q, pi = spec.qs[i], spec.primes[i]
        for a, b in pairs:
            da, db = delta_apply(spec, i, a), delta_apply(spec, i, b)
            lhs = delta_apply(spec, i, ring.mul(a, b))
            rhs = ring.add(
                ring.add(ring.mul(da, ring.pow(b, q)), ring.mul(ring.pow(a, q), db)),
                _scale_base(spec, ring.mul(da, db), pi),
            )
            if lhs != rhs:
                yield False, f"a={_clip(spec.show(a))}, b={_clip(spec.show(b))}"
            else:
                yield True, ""

    def axiom4_cases(i, j):
        for a in elems:
            di, dj = delta_apply(spec, i, a), delta_apply(spec, j, a)
            lhs = ring.sub(delta_apply(spec, i, dj), delta_apply(spec, j, di))
            rhs = cp.ring3.eval_into(
                cp.cross[(i, j)], ring, (a, di, dj), lambda c: _embed_scalar(spec, c)
            )
            if lhs != rhs:
                yield False, f"a={_clip(spec.show(a))}"
            else:
                yield True, ""

    for i, pi in enumerate(spec.primes):
        label = spec.base.show(pi)
        claims.append(run(f"axiom1-scalars[{label}]", scalar_cases(i)))
        claims.append(run(f"psi-reconstruction[{label}]", psi_cases(i)))
        claims.append(run(f"axiom2-sum[{label}]", axiom2_cases(i)))
        claims.append(run(f"axiom3-product[{label}]", axiom3_cases(i)))
    for i in range(len(spec.primes)):
        for j in range(i + 1, len(spec.primes)):
            li, lj = spec.base.show(spec.primes[i]), spec.base.show(spec.primes[j])
            claims.append(run(f"axiom4-commutator[{li},{lj}]", axiom4_cases(i, j)))
    return Report(tuple(claims))


# ---------------------------------------------------------------------------
# the coaction A -> W_n(A)
# ---------------------------------------------------------------------------

def coaction(spec: FrobeniusLiftSpec, a, n):
    """The unique vector whose ghost entry at index m is psi^m(a).

    Single-prime specs take an integer length and return a WittVector;
    families take a multi-index in canonical (ascending prime) order and
    return a MultiWittVector.
    """
    if isinstance(n, int):
        n = (n,) * len(spec.primes) if len(spec.primes) == 1 else None
        if n is None:
            raise ContextMismatch("multi-prime lift families need a multi-index")
    n = tuple(n)
    if len(n) != len(spec.primes):
        raise ContextMismatch("multi-index length must match the prime family")
    if len(n) == 1:
        return _coaction_single(spec, a, n[0])
    return _coaction_multi(spec, a, n)


def _coaction_single(spec, a, n):
    ctx = WittContext(spec.base, spec.primes[0], n)
    entries = [a]
    for _ in range(n):
        entries.append(spec.psi(0, entries[-1]))
    try:
        return unghost(GhostVector(ctx, spec.alg, tuple(entries)))
    except (CongruenceViolation, DivisionInexact) as e:
        raise LiftViolation(f"psi fails the lift congruences on {spec.show(a)}: {e}") from None


def _coaction_multi(spec, a, index):
    if not isinstance(spec.base, Integers):
        raise ContextMismatch("multi-prime composition is implemented over base Z")
    fam = PrimeFamily(spec.primes)
    spec_pos = {abs(pi): i for i, pi in enumerate(spec.primes)}
    gmap = {}
    for idx in product(*[range(e + 1) for e in index]):
        exps = [0] * len(spec.primes)
        for k, e in enumerate(idx):
            exps[spec_pos[fam.primes[k]]] = e
        gmap[idx] = spec.psi_word(exps, a)
    try:
        return multi_unghost(gmap, fam, index, spec.alg)
    except (CongruenceViolation, DivisionInexact) as e:
        raise LiftViolation(f"psi fails the lift congruences on {spec.show(a)}: {e}") from None


def canonical_base_spec(base, primes) -> FrobeniusLiftSpec:
    """The canonical lift family on the base ring itself."""
    return FrobeniusLiftSpec(Algebra(base, base), tuple(primes), tuple(() for _ in primes))


def axiom_battery():
    """The standard delta-axiom suite: (label, spec) pairs."""
    out = []
    for p in (2, 3, 5):
        out.append((f"Z, psi=id, p={p}", canonical_base_spec(ZZ, (p,))))
    zx = polyring(ZZ, ("x",))
    for p in (2, 3, 5):
        for label, img in (
            (f"x^{p}", zx.gen(0, p)),
            (f"x^{p}+{p}", zx.add(zx.gen(0, p), zx.from_int(p))),
        ):
            out.append(
                (
                    f"Z[x], psi(x)={label}",
                    FrobeniusLiftSpec(Algebra(ZZ, zx), (p,), ((img,),)),
                )
            )
    f3t = FpT(3)
    r3 = polyring(f3t, ("x",))
    out.append(
        (
            "F3[t][x], pi=t, psi(x)=x^3",
            FrobeniusLiftSpec(Algebra(f3t, r3), (f3t.t,), ((r3.gen(0, 3),),)),
        )
    )
    out.append(("Z, psi2=psi3=id", canonical_base_spec(ZZ, (2, 3))))
    return out


# ---------------------------------------------------------------------------
# JSON spec documents
# ---------------------------------------------------------------------------

def lift_spec_from_json(doc: dict) -> FrobeniusLiftSpec:
    """{base, primes, generators, psi: {prime: {generator: polynomial}}}."""
    try:
        base = base_from_text(doc["base"])
        prime_texts = list(doc["primes"])
        generators = tuple(doc.get("generators", ()))
        psi_doc = doc.get("psi", {})
    except (KeyError, TypeError) as e:
        raise ExprSyntaxError(f"malformed lift spec document: {e}") from None
    from .rings import parse_element

    primes = tuple(parse_element(base, s) for s in prime_texts)
    ring = polyring(base, generators) if generators else base
    images = []
    for text, pi in zip(prime_texts, primes):
        entry = psi_doc.get(text)
        if entry is None:
            entry = next(
                (v for k, v in psi_doc.items() if parse_element(base, k) == pi), None
            )
        if entry is None and generators:
            raise ContextMismatch(f"psi images missing for prime {text}")
        images.append(
            tuple(ring.parse(entry[g]) for g in generators) if generators else ()
        )
    return FrobeniusLiftSpec(Algebra(base, ring), primes, tuple(images))


def lift_spec_to_json(spec: FrobeniusLiftSpec) -> dict:
    generators = list(spec.ring.variables) if spec.nvars else []
    return {
        "base": base_to_text(spec.base),
        "primes": [spec.base.show(pi) for pi in spec.primes],
        "generators": generators,
        "psi": {
            spec.base.show(pi): {
                g: spec.ring.show(img) for g, img in zip(generators, spec.images[i])
            }
            for i, pi in enumerate(spec.primes)
        },
    }
