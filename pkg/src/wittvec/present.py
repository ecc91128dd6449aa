"""Presentations of the free construction in theta- and delta-coordinates.

A presentation R0[x_1..x_r]/(f_1..f_s) of an algebra induces one of its
length-n free cover on (n+1)*r generators: either the Witt components
theta_i(x_j) of the canonical images, with relations theta-expanded, or the
operator iterates delta^i(x_j), with relations expanded by the sum and
product laws. The two generator families are related by an invertible
triangular coordinate change.
"""
from __future__ import annotations

from dataclasses import dataclass

from .delta import base_delta, c_poly, canonical_base_spec, coaction
from .errors import (
    ContextMismatch,
    InternalIntegrityError,
    LengthZero,
    SynthesisBudgetExceeded,
)
from .poly import MAX_EXPONENT, MultiPoly, polyring
from .report import Claim, Report
from .rings import Algebra
from .witt import (
    WittContext,
    WittVector,
    _ghost_entries,
    _unghost_raw,
    add,
    base_scale,
    frobenius,
    mul,
    negate,
    teichmuller,
    truncate,
    verschiebung,
    witt_zero,
)


def _degree(src: MultiPoly, f) -> int:
    terms = src.sorted_terms(f)
    return sum(terms[0][0]) if terms else 0


def _budget_check(src: MultiPoly, f, ctx) -> None:
    need = _degree(src, f) * ctx.q**ctx.n
    if need >= MAX_EXPONENT:
        raise SynthesisBudgetExceeded(
            f"expansion exponent {need} exceeds the kernel bound {MAX_EXPONENT}"
        )


def generator_names(variables, n: int, style: str):
    """(n+1)*r generator names, generator-major: all levels of x_1 first."""
    if style == "theta":
        return tuple(f"theta_{i}({v})" for v in variables for i in range(n + 1))
    if style == "delta":
        return tuple(f"delta^{i}({v})" for v in variables for i in range(n + 1))
    raise ContextMismatch(f"unknown coordinate style {style!r}")


# ---------------------------------------------------------------------------
# theta expansion: evaluate at generic vectors
# ---------------------------------------------------------------------------

def theta_expand(src: MultiPoly, f, ctx: WittContext):
    """Witt components of f's canonical image, as polynomials in theta_i(x_j).

    f is evaluated at the generic vectors X_j = (theta_0(x_j),...,theta_n(x_j))
    with ring operations of the length-n Witt ring; base constants embed via
    the coaction of the canonical lift. Returns (ring, n+1 components).
    """
    if src.coeff is not ctx.base:
        raise ContextMismatch(f"{src.name} is not over {ctx.base}")
    _budget_check(src, f, ctx)
    n = ctx.n
    ring = polyring(ctx.base, generator_names(src.variables, n, "theta"))
    alg = Algebra(ctx.base, ring)
    gens = [
        WittVector(
            ctx, alg, tuple(ring.gen(j * (n + 1) + i) for i in range(n + 1))
        )
        for j in range(src.nvars)
    ]
    spec = canonical_base_spec(ctx.base, (ctx.pi,))

    def embed_const(c):
        w = coaction(spec, c, n)
        return WittVector(ctx, alg, tuple(ring.const(x) for x in w.components))

    acc = witt_zero(ctx, alg)
    for exps, c in src.sorted_terms(f):
        term = embed_const(c)
        for j, e in enumerate(exps):
            for _ in range(e):
                term = mul(term, gens[j])
        acc = add(acc, term)
    return ring, acc.components


# ---------------------------------------------------------------------------
# delta expansion: the sum and product laws, iterated
# ---------------------------------------------------------------------------

def delta_expand(src: MultiPoly, f, ctx: WittContext):
    """Operator iterates delta^0(f)..delta^n(f) over the delta generators.

    delta^0 renames x_j to delta^0(x_j); each further level applies the
    constant, sum, and product laws structurally. Returns (ring, n+1 polys).
    """
    if src.coeff is not ctx.base:
        raise ContextMismatch(f"{src.name} is not over {ctx.base}")
    _budget_check(src, f, ctx)
    n = ctx.n
    ring = polyring(ctx.base, generator_names(src.variables, n, "delta"))
    var_map = [j * (n + 1) for j in range(src.nvars)]
    levels = [src.rename_into(f, ring, var_map)]
    for _ in range(n):
        levels.append(_delta_step(ring, levels[-1], ctx))
    return ring, tuple(levels)


def _delta_step(ring: MultiPoly, g, ctx: WittContext):
    """delta of a polynomial in the operator generators, one level up."""
    base, pi, q, n = ctx.base, ctx.pi, ctx.q, ctx.n
    ring2, cpol = c_poly(base, pi)

    def dvar(k):
        j, i = divmod(k, n + 1)
        if i >= n:
            raise InternalIntegrityError("operator level exceeds the truncation")
        return ring.gen(k + 1)

    def dterm(exps, c):
        # seed with the constant law, fold factors with the product law
        u, du = ring.const(c), ring.const(base_delta(base, pi, c))
        for k, e in enumerate(exps):
            if not e:
                continue
            v, dv = ring.gen(k), dvar(k)
            vq = ring.pow(v, q)
            for _ in range(e):
                ndu = ring.add(ring.mul(du, vq), ring.mul(ring.pow(u, q), dv))
                ndu = ring.add(ndu, ring.scale(ring.mul(du, dv), pi))
                u, du = ring.mul(u, v), ndu
        return u, du

    acc, dacc = ring.zero, ring.zero
    for exps, c in ring.sorted_terms(g):
        t, dt = dterm(exps, c)
        correction = ring2.eval_into(cpol, ring, (acc, t), ring.const)
        dacc = ring.add(ring.add(dacc, dt), correction)
        acc = ring.add(acc, t)
    return dacc


# ---------------------------------------------------------------------------
# coordinate change
# ---------------------------------------------------------------------------

def _witt_delta(w: WittVector) -> WittVector:
    """The operator on Witt vectors: F(w) = w^q + pi.delta(w) in length n-1.

    pi acts by the base scalar action (every ghost entry scales by pi), the
    same division delta_apply performs by the embedded image of pi; the
    division is exact because the Frobenius lifts the q-power map modulo pi.
    The Teichmuller image of pi is not a usable divisor here: already at
    length 2 the generic F(w) - w^q fails to be divisible by it.
    """
    ctx = w.ctx
    if ctx.n < 1:
        raise LengthZero("the operator drops one length step")
    t = truncate(w, ctx.n - 1)
    tq = t
    for _ in range(ctx.q - 1):
        tq = mul(tq, t)
    d = add(frobenius(w), negate(tq))
    cover, lift, project = w.alg.cover()
    entries = _ghost_entries(d.ctx, cover, [lift(c) for c in d.components])
    divided = [cover.exact_div_base(e, ctx.pi, 1) for e in entries]
    comps = _unghost_raw(d.ctx, cover, divided)
    return WittVector(d.ctx, w.alg, tuple(project(c) for c in comps))


def coord_change(ctx: WittContext, direction: str):
    """Polynomial maps between the theta- and delta-coordinate families.

    "theta-to-delta": delta^i of the generic vector as polynomials in
    theta_0..theta_n, computed by iterating the operator on the symbolic
    Witt ring. "delta-to-theta": the inverse, by back-substitution of the
    triangular system. Returns (ring, n+1 polynomials).

    Over base Z this tower transports delta_expand to theta_expand exactly.
    Away from Z the operator above and the canonical q-power scalar lift of
    delta_expand are different delta-calculi, and only the first two levels
    agree with the expansion styles.
    """
    if direction not in ("theta-to-delta", "delta-to-theta"):
        raise ContextMismatch(f"unknown direction {direction!r}")
    n = ctx.n
    theta_ring = polyring(ctx.base, tuple(f"theta_{i}" for i in range(n + 1)))
    alg = Algebra(ctx.base, theta_ring)
    w = WittVector(ctx, alg, tuple(theta_ring.gen(i) for i in range(n + 1)))
    deltas = []
    for i in range(n + 1):
        deltas.append(w.components[0])
        if i < n:
            w = _witt_delta(w)
    for i, d in enumerate(deltas):
        head = theta_ring.sub(d, theta_ring.gen(i))
        if any(
            e for exps, _ in theta_ring.sorted_terms(head) for e in exps[i:]
        ):
            raise InternalIntegrityError("coordinate change is not triangular")
    if direction == "theta-to-delta":
        return theta_ring, tuple(deltas)
    delta_ring = polyring(ctx.base, tuple(f"delta^{i}" for i in range(n + 1)))
    thetas = []
    for i, d in enumerate(deltas):
        tail = theta_ring.sub(d, theta_ring.gen(i))
        correction = theta_ring.eval_into(
            tail, delta_ring, tuple(thetas) + (delta_ring.zero,) * (n + 1 - i),
            delta_ring.const,
        )
        thetas.append(delta_ring.sub(delta_ring.gen(i), correction))
    return delta_ring, tuple(thetas)


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RingPresentation:
    """R0[x_1..x_r]/(f_1..f_s): named variables and relation polynomials."""

    base: object
    variables: tuple
    relations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "relations", tuple(self.relations))

    @property
    def ring(self) -> MultiPoly:
        return polyring(self.base, self.variables)


@dataclass(frozen=True)
class LambdaPresentation:
    """Generators g_i(x_j) and expanded relations of the length-n free cover."""

    style: str
    ring: MultiPoly
    generators: tuple
    relations: tuple

    def text(self) -> str:
        lines = [f"style: {self.style}"]
        lines.append(f"generators ({len(self.generators)}): " + ", ".join(self.generators))
        if self.relations:
            lines.append(f"relations ({len(self.relations)}):")
            lines.extend(f"  {self.ring.show(r)}" for r in self.relations)
        else:
            lines.append("relations (0): free")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [self.ring.show(r) for r in self.relations],
        }


def lambda_presentation(P: RingPresentation, ctx: WittContext, style: str) -> LambdaPresentation:
    """Presentation of the length-n free cover: (n+1)*r generators carrying
    each level of each variable, (n+1)*s relations expanding each f_k."""
    names = generator_names(P.variables, ctx.n, style)
    expand = theta_expand if style == "theta" else delta_expand
    src = P.ring
    ring = polyring(ctx.base, names)
    relations = []
    for f in P.relations:
        out_ring, polys = expand(src, f, ctx)
        if out_ring is not ring:
            raise InternalIntegrityError("expansion landed in the wrong ring")
        relations.extend(polys)
    return LambdaPresentation(style, ring, names, tuple(relations))


# ---------------------------------------------------------------------------
# the module presentation of W_n(R0)
# ---------------------------------------------------------------------------

def verify_wn_presentation(base, pi, n: int) -> Report:
    """x_i = V^i([1]) satisfy x_i*x_j = pi^i*x_j for 1 <= i <= j <= n.

    pi^i acts by the base scalar action. n = 0 is vacuous.
    """
    ctx = WittContext(base, pi, n)
    alg = Algebra(base, base)
    xs = {
        i: verschiebung(teichmuller(base.one, ctx.with_length(n - i), alg), i)
        for i in range(1, n + 1)
    }
    claims = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            lhs = mul(xs[i], xs[j])
            rhs = base_scale(base.pow(pi, i), xs[j])
            ok = lhs.components == rhs.components
            detail = "" if ok else f"{lhs.show()} != {rhs.show()}"
            claims.append(Claim(f"x{i}*x{j} = pi^{i}*x{j}", ok, detail))
    return Report(tuple(claims))
