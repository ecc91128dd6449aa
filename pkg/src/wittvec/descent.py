"""Finite-ring verifiers for truncation descent.

Element-level checks, by exhaustive enumeration, of the comparison map
alpha_n: W_n(A) -> W_{n-1}(A) x A: its kernel shape and square-zero
property, the equalizer description of its image, exactness of the
Verschiebung sequences, and surjectivity of W_n on surjections.

Reports are data: each claim carries an id, an anchor string, the size of
the enumerated universe, and witnesses for any failed assertion.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .errors import (
    ContextMismatch,
    InternalIntegrityError,
    LengthZero,
    NotSurjective,
)
from .report import Report
from .rings import ZZ, Algebra, FpPolyQuotient, FpT, GF, Zmod
from .witt import (
    WittContext,
    WittVector,
    add,
    ghost_component,
    mul,
    truncate,
    verschiebung,
    witt_one,
)

MAX_WITNESSES = 10


@dataclass(frozen=True)
class DescentClaim:
    claim_id: str
    paper_ref: str
    universe_size: int
    failures: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        head = f"{'PASS' if self.ok else 'FAIL'} {self.claim_id} (universe {self.universe_size})"
        return head if self.ok else f"{head}: {self.failures[0]}"

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "paper_ref": self.paper_ref,
            "universe_size": self.universe_size,
            "failures": list(self.failures),
        }


def finite_elements(alg: Algebra):
    """Exhaustive duplicate-free element list of a finite algebra."""
    ring = alg.ring
    if ring.cardinality is None:
        raise ContextMismatch(f"{ring} is not finite")
    elems = list(ring.elements())
    if len(elems) != ring.cardinality or len(set(elems)) != len(elems):
        raise InternalIntegrityError(
            f"enumeration of {ring} is not exhaustive and duplicate-free"
        )
    return elems


def witt_elements(ctx, alg, elems=None):
    if elems is None:
        elems = finite_elements(alg)
    for comps in iproduct(elems, repeat=ctx.n + 1):
        yield WittVector(ctx, alg, comps)


def _is_zero_vector(w) -> bool:
    ring = w.alg.ring
    return all(ring.is_zero(c) for c in w.components)


def alpha_map(w: WittVector):
    """(truncate(w, n-1), gh_n(w)): the descent comparison map."""
    if w.ctx.n < 1:
        raise LengthZero("alpha needs length n >= 1")
    return truncate(w, w.ctx.n - 1), ghost_component(w, w.ctx.n)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def kernel_report(alg: Algebra, ctx: WittContext) -> Report:
    """ker(alpha_n) = {(0,...,0,a) : pi^n a = 0}, and it squares to zero."""
    if ctx.n < 1:
        raise LengthZero("alpha needs length n >= 1")
    elems = finite_elements(alg)
    ring = alg.ring
    n = ctx.n
    pin = alg.embed_pow(ctx.pi, n)
    expected = {
        (ring.zero,) * n + (a,) for a in elems if ring.is_zero(ring.mul(pin, a))
    }
    kernel = []
    for w in witt_elements(ctx, alg, elems):
        tr, gh = alpha_map(w)
        if _is_zero_vector(tr) and ring.is_zero(gh):
            kernel.append(w)
    got = {w.components for w in kernel}
    shape_failures = []
    for comps in got - expected:
        shape_failures.append(f"in kernel, not of torsion shape: {comps}")
    for comps in expected - got:
        shape_failures.append(f"of torsion shape, not in kernel: {comps}")
    claims = [
        DescentClaim(
            "kernel-shape",
            "§8 I_n(A)",
            len(elems) ** (n + 1),
            tuple(shape_failures[:MAX_WITNESSES]),
        )
    ]
    prod_failures = []
    for w1 in kernel:
        for w2 in kernel:
            if not _is_zero_vector(mul(w1, w2)):
                prod_failures.append(f"{w1.show()} * {w2.show()} != 0")
    claims.append(
        DescentClaim(
            "kernel-square-zero",
            "§8 (b)",
            len(kernel) ** 2,
            tuple(prod_failures[:MAX_WITNESSES]),
        )
    )
    return Report(tuple(claims))


def equalizer_report(alg: Algebra, ctx: WittContext) -> Report:
    """im(alpha_n) = {(v, b) : rgh_n(v) = b mod pi^n}, both inclusions."""
    if ctx.n < 1:
        raise LengthZero("alpha needs length n >= 1")
    elems = finite_elements(alg)
    n = ctx.n
    sub = ctx.with_length(n - 1)
    image = set()
    for w in witt_elements(ctx, alg, elems):
        tr, gh = alpha_map(w)
        image.add((tr.components, gh))
    equalizer = set()
    for vcomps in iproduct(elems, repeat=n):
        v = WittVector(sub, alg, vcomps)
        r = ghost_component(v, n, reduced=True)
        for b in elems:
            if alg.reduce_mod_power(b, ctx.pi, n) == r:
                equalizer.add((vcomps, b))
    failures = []
    for pair in image - equalizer:
        failures.append(f"in image, not in equalizer: {pair}")
    for pair in equalizer - image:
        failures.append(f"in equalizer, not in image: {pair}")
    return Report(
        (
            DescentClaim(
                "image-equalizer",
                "§8 (f)",
                len(elems) ** (n + 1),
                tuple(failures[:MAX_WITNESSES]),
            ),
        )
    )


def alpha_hom_report(alg: Algebra, ctx: WittContext) -> Report:
    """alpha_n is a ring homomorphism into W_{n-1}(A) x A, on all pairs."""
    if ctx.n < 1:
        raise LengthZero("alpha needs length n >= 1")
    elems = finite_elements(alg)
    ring = alg.ring
    vectors = list(witt_elements(ctx, alg, elems))
    alpha = {w.components: alpha_map(w) for w in vectors}
    failures = []
    t_one, g_one = alpha[witt_one(ctx, alg).components]
    if t_one.components != witt_one(ctx.with_length(ctx.n - 1), alg).components or (
        g_one != ring.one
    ):
        failures.append("alpha(1) != 1")
    sub_add, sub_mul = {}, {}
    pair_count = 0
    for i, w1 in enumerate(vectors):
        t1, g1 = alpha[w1.components]
        for w2 in vectors[i:]:
            pair_count += 1
            t2, g2 = alpha[w2.components]
            key = (t1.components, t2.components)
            hit = sub_add.get(key)
            if hit is None:
                hit = sub_add[key] = add(t1, t2).components
                sub_mul[key] = mul(t1, t2).components
            ts, gs = alpha[add(w1, w2).components]
            if ts.components != hit or gs != ring.add(g1, g2):
                failures.append(f"additivity fails at {w1.show()}, {w2.show()}")
            tp, gp = alpha[mul(w1, w2).components]
            if tp.components != sub_mul[key] or gp != ring.mul(g1, g2):
                failures.append(f"multiplicativity fails at {w1.show()}, {w2.show()}")
            if len(failures) >= MAX_WITNESSES:
                return Report(
                    (
                        DescentClaim(
                            "alpha-ring-hom", "§8", pair_count, tuple(failures)
                        ),
                    )
                )
    return Report(
        (DescentClaim("alpha-ring-hom", "§8", pair_count, tuple(failures)),)
    )


def ghost_congruence_report(alg: Algebra, ctx: WittContext) -> Report:
    """gh_i(w) = w_0^{q^i} mod pi*A for every enumerated w and i <= n."""
    elems = finite_elements(alg)
    ring = alg.ring
    failures = []
    count = 0
    for w in witt_elements(ctx, alg, elems):
        for i in range(ctx.n + 1):
            count += 1
            diff = ring.sub(
                ghost_component(w, i), ring.pow(w.components[0], ctx.q**i)
            )
            if not ring.is_zero(alg.reduce_mod_power(diff, ctx.pi, 1)):
                failures.append(f"gh_{i}({w.show()}) != head power mod pi")
    return Report(
        (
            DescentClaim(
                "ghost-head-congruence", "§6", count, tuple(failures[:MAX_WITNESSES])
            ),
        )
    )


def v_sequence_report(alg: Algebra, ctx: WittContext, j: int) -> Report:
    """V^j injective; ker(W_{n+j} -> W_{j-1}) = im(V^j); truncation onto;
    graded pieces ker(W_i -> W_{i-1}) have size |A|."""
    elems = finite_elements(alg)
    ring = alg.ring
    n = ctx.n
    if j == 0:
        failures = tuple(
            f"V^0({w.show()}) != identity"
            for w in witt_elements(ctx, alg, elems)
            if verschiebung(w, 0).components != w.components
        )
        return Report(
            (
                DescentClaim(
                    "v0-identity", "§4", len(elems) ** (n + 1), failures[:MAX_WITNESSES]
                ),
            )
        )
    claims = []
    seen = {}
    inj_failures = []
    for w in witt_elements(ctx, alg, elems):
        img = verschiebung(w, j).components
        if img in seen:
            inj_failures.append(f"V^{j} merges {seen[img]} and {w.components}")
        seen[img] = w.components
    claims.append(
        DescentClaim(
            "v-injective",
            "§4",
            len(elems) ** (n + 1),
            tuple(inj_failures[:MAX_WITNESSES]),
        )
    )
    image = set(seen)
    kernel = set()
    truncations = set()
    for comps in iproduct(elems, repeat=n + j + 1):
        if all(ring.is_zero(c) for c in comps[:j]):
            kernel.add(comps)
        truncations.add(comps[:j])
    exact_failures = [f"in kernel, not V^{j}-image: {c}" for c in kernel - image]
    exact_failures += [f"in V^{j}-image, not kernel: {c}" for c in image - kernel]
    claims.append(
        DescentClaim(
            "v-kernel-image",
            "§4",
            len(elems) ** (n + j + 1),
            tuple(exact_failures[:MAX_WITNESSES]),
        )
    )
    onto_failures = []
    if len(truncations) != len(elems) ** j:
        onto_failures.append(
            f"truncation hits {len(truncations)} of {len(elems) ** j} elements"
        )
    claims.append(
        DescentClaim(
            "truncation-onto",
            "§4",
            len(elems) ** (n + j + 1),
            tuple(onto_failures),
        )
    )
    graded_failures = []
    total = 0
    for i in range(1, n + j + 1):
        count = 0
        for comps in iproduct(elems, repeat=i + 1):
            total += 1
            if all(ring.is_zero(c) for c in comps[:i]):
                count += 1
        if count != len(elems):
            graded_failures.append(
                f"|ker(W_{i} -> W_{i - 1})| = {count}, expected {len(elems)}"
            )
    claims.append(
        DescentClaim("graded-pieces", "§4 gr_V", total, tuple(graded_failures))
    )
    return Report(tuple(claims))


def surjectivity_report(phi, src: Algebra, dst: Algebra, ctx: WittContext) -> Report:
    """W_n(phi) is surjective when phi is; phi itself is validated first."""
    A = finite_elements(src)
    B = finite_elements(dst)
    bring = dst.ring
    image0 = {phi(a) for a in A}
    if image0 != set(B):
        raise NotSurjective(
            f"map hits {len(image0)} of {len(B)} elements of {bring}"
        )
    hom_failures = []
    if phi(src.ring.one) != bring.one:
        hom_failures.append("phi(1) != 1")
    for a in A:
        for b in A:
            if phi(src.ring.add(a, b)) != bring.add(phi(a), phi(b)):
                hom_failures.append(f"phi not additive at {a}, {b}")
            if phi(src.ring.mul(a, b)) != bring.mul(phi(a), phi(b)):
                hom_failures.append(f"phi not multiplicative at {a}, {b}")
    claims = [
        DescentClaim(
            "phi-ring-hom", "§6", len(A) ** 2, tuple(hom_failures[:MAX_WITNESSES])
        )
    ]
    seen = {
        tuple(phi(c) for c in comps) for comps in iproduct(A, repeat=ctx.n + 1)
    }
    missing = []
    if len(seen) != len(B) ** (ctx.n + 1):
        for comps in iproduct(B, repeat=ctx.n + 1):
            if comps not in seen:
                missing.append(f"not hit: {comps}")
                if len(missing) >= MAX_WITNESSES:
                    break
    claims.append(
        DescentClaim("wn-surjective", "§6", len(A) ** (ctx.n + 1), tuple(missing))
    )
    return Report(tuple(claims))


# ---------------------------------------------------------------------------
# the standard battery
# ---------------------------------------------------------------------------

def standard_battery():
    """(label, algebra, base, pi) for the finite verifier battery."""
    f2t = FpT(2)
    return [
        ("Z/4 p=2", Algebra(ZZ, Zmod(4)), ZZ, 2),
        ("Z/8 p=2", Algebra(ZZ, Zmod(8)), ZZ, 2),
        ("Z/9 p=3", Algebra(ZZ, Zmod(9)), ZZ, 3),
        ("F2 p=2", Algebra(ZZ, GF(2)), ZZ, 2),
        ("F3 p=3", Algebra(ZZ, GF(3)), ZZ, 3),
        (
            "F2[t]/(t^2) pi=t",
            Algebra(f2t, FpPolyQuotient(f2t, (0, 0, 1))),
            f2t,
            f2t.t,
        ),
    ]


def run_battery(max_n: int = 2, max_j: int = 2):
    """Every report over the standard battery; (label, Report) pairs."""
    out = []
    for label, alg, base, pi in standard_battery():
        for n in range(1, max_n + 1):
            ctx = WittContext(base, pi, n)
            out.append((f"{label} n={n} kernel", kernel_report(alg, ctx)))
            out.append((f"{label} n={n} equalizer", equalizer_report(alg, ctx)))
            out.append((f"{label} n={n} alpha-hom", alpha_hom_report(alg, ctx)))
            out.append(
                (f"{label} n={n} ghost-congruence", ghost_congruence_report(alg, ctx))
            )
        for n in range(max_n + 1):
            ctx = WittContext(base, pi, n)
            for j in range(max_j + 1):
                out.append(
                    (f"{label} n={n} j={j} v-sequence", v_sequence_report(alg, ctx, j))
                )
    return out
