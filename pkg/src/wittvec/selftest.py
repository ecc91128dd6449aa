"""Deterministic claim suites behind `witt selftest`.

A suite is a list of jobs; each job seeds its own random stream from the
run seed and its job id, so the merged report does not depend on worker
scheduling and is byte-identical across runs.  Every claim carries the
paper_ref anchor of the statement it exercises.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from random import Random

from wittvec.delta import (
    axiom_battery,
    canonical_base_spec,
    check_delta_axioms,
    check_frobenius_lift,
    coaction,
)
from wittvec.descent import (
    alpha_hom_report,
    equalizer_report,
    ghost_congruence_report,
    kernel_report,
    standard_battery,
    v_sequence_report,
)
from wittvec.errors import (
    CongruenceViolation,
    ExprSyntaxError,
    InternalIntegrityError,
)
from wittvec.multi import (
    MultiWittVector,
    PrimeFamily,
    WittRing,
    big_ghost_congruences_ok,
    classical_big_ghost,
    multi_frobenius,
    multi_ghost,
    multi_teichmuller,
    multi_unghost,
    multi_verschiebung,
    multi_zero,
    reorder,
)
from wittvec.poly import polyring
from wittvec.present import (
    RingPresentation,
    coord_change,
    delta_expand,
    lambda_presentation,
    theta_expand,
    verify_wn_presentation,
)
from wittvec.rings import (
    ZZ,
    Algebra,
    FpPolyQuotient,
    FpPolynomials,
    FpT,
    GF,
    Integers,
    Zmod,
)
from wittvec.witt import (
    GhostVector,
    WittContext,
    WittVector,
    add,
    base_scale,
    frobenius,
    ghost,
    ghost_component,
    mul,
    negate,
    structural_polys,
    teich_scale,
    teichmuller,
    unghost,
    verify_ghost_compat,
    verschiebung,
    witt_one,
    witt_zero,
)

SUITE_NAMES = (
    "ring-axioms",
    "ghost",
    "verschiebung",
    "frobenius",
    "teichmuller",
    "delta-axioms",
    "descent",
    "multi-prime",
    "presentations",
    "all",
)

SIZES = ("small", "medium")

_PARAMS = {
    "small": {
        "samples": 4,
        "n": 2,
        "delta_samples": 40,
        "descent_n": 1,
        "descent_j": 1,
        "wn_z": 2,
        "wn_t": 1,
        "coord": ((ZZ, 2, 2),),
        "sym": ((2, 2), (3, 1)),
        "sym_ops": ("sum", "product"),
        "lattice": 60,
    },
    "medium": {
        "samples": 10,
        "n": 3,
        "delta_samples": 150,
        "descent_n": 2,
        "descent_j": 2,
        "wn_z": 4,
        "wn_t": 3,
        "coord": ((ZZ, 2, 3), (ZZ, 3, 2), ("F3T", "t", 2)),
        "sym": ((2, 3), (3, 2), (4, 2), (5, 1)),
        "sym_ops": ("sum", "product", "negation", "frobenius"),
        "lattice": 400,
    },
}

_RING_REF = '§1/§3 "generate Λ_n freely as an R-algebra"'
_GHOST_RING_REF = '§1 "angle brackets ⟨a_0,a_1,…⟩"'
_GHOST_HOM_REF = '§3 Prop. "Then the ghost map"'
_HEAD_REF = "§6"
_LATTICE_REF = '§1 exercise "a_n ≡ a_{n+1} mod p^{n+1}"'
_STRUCT_REF = '§3 "recursively by the generalized Witt polynomials"'
_V_REF = '§ "Verschiebung" "V_π((y₀,y₁,…)_π) = (0,y₀,y₁,…)_π"'
_FV_REF = '§ "Verschiebung" "V^j: m^j ⊗_R W_n(A)_(j) → W_{n+j}(A)"'
_F_HOM_REF = '§2 "ψ_n … is a ring homomorphism"'
_F_LIFT_REF = '§1 "agrees with the Frobenius map x ↦ x^{q_α}"'
_TEICH_REF = '§teich-2 "[a] = (a,0,0,…)_π"'
_TEICH_SCALE_REF = '§teich-2 "[a](…,b_i,…)_π = (…,a^{q^i}b_i,…)_π"'
_DELTA_AXIOM_REF = 'axioms (1)–(4) "definition 2.1"'
_COACTION_REF = 'Prop. §1 "the right adjoint of the forgetful functor"'
_MULTI_ISO_REF = 'Cor. §5 "are isomorphisms, where n, n′, n″"'
_MULTI_GHOST_REF = '§2/§5 "gh_{≤n}: W_{R,E,n}(A) → A^{[0,n]}"'
_REORDER_REF = '§5 Remark "independent of the ordering of the m_i"'
_BIGWITT_REF = '"finite set T of positive integers closed under divisibility"'
_WN_REF = '§3 Example "R[x₁,…,x_r]/(x_i x_j − π^i x_j)"'
_THETA_REF = 'Eq. "ℤ[θ_i(x_j)]/(θ_i(f_k))"'
_DELTA_PRES_REF = 'Eq. "ℤ[δ^i(x_j)]/(δ^i(f_k))"'
_COORD_REF = '"δ⁰ = θ₀ and δ¹ = θ₁, but δ² ≠ θ₂"'


@dataclass(frozen=True)
class SelftestClaim:
    claim_id: str
    suite: str
    ok: bool
    paper_ref: str
    detail: str = ""

    def line(self) -> str:
        tail = f": {self.detail}" if self.detail else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.claim_id}{tail}"

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "suite": self.suite,
            "ok": self.ok,
            "paper_ref": self.paper_ref,
            "detail": self.detail,
        }


# ---------------------------------------------------------------------------
# deterministic samplers
# ---------------------------------------------------------------------------

def _rand_elt(ring, rng):
    if isinstance(ring, Integers):
        return rng.randrange(-9, 10)
    if isinstance(ring, FpPolynomials):
        a = ring.zero
        tk = ring.one
        for _ in range(3):
            a = ring.add(a, ring.mul(ring.from_int(rng.randrange(ring.p)), tk))
            tk = ring.mul(tk, ring.t)
        return a
    pool = list(ring.elements())
    return pool[rng.randrange(len(pool))]


def _rand_vec(ctx, alg, rng):
    return WittVector(
        ctx, alg, tuple(_rand_elt(alg.ring, rng) for _ in range(ctx.n + 1))
    )


def _pool(params):
    """The single-prime contexts every operator suite runs over."""
    n = params["n"]
    f2t, f3t = FpT(2), FpT(3)
    return [
        ("Z-p2", WittContext(ZZ, 2, n), Algebra(ZZ, ZZ)),
        ("Z-p3", WittContext(ZZ, 3, n), Algebra(ZZ, ZZ)),
        ("Z8-p2", WittContext(ZZ, 2, n), Algebra(ZZ, Zmod(8))),
        ("Z9-p3", WittContext(ZZ, 3, 1), Algebra(ZZ, Zmod(9))),
        ("F2-p2", WittContext(ZZ, 2, n), Algebra(ZZ, GF(2))),
        ("F3t-t", WittContext(f3t, f3t.t, n), Algebra(f3t, f3t)),
        (
            "F2t2-t",
            WittContext(f2t, f2t.t, n),
            Algebra(f2t, FpPolyQuotient(f2t, (0, 0, 1))),
        ),
    ]


def _pool_labels():
    return [label for label, _, _ in _pool(_PARAMS["small"])]


def _torsion_free_labels():
    return ["Z-p2", "Z-p3", "F3t-t"]


def _context(label, params):
    for lab, ctx, alg in _pool(params):
        if lab == label:
            return ctx, alg
    raise ExprSyntaxError(f"unknown sample context {label!r}")


# ---------------------------------------------------------------------------
# job registry
# ---------------------------------------------------------------------------

_REGISTRY: dict = {name: [] for name in SUITE_NAMES if name != "all"}


def _job(suite, name, paper_ref):
    def deco(fn):
        _REGISTRY[suite].append((f"{suite}/{name}", paper_ref, fn))
        return fn

    return deco


def _register_per_label(suite, name, paper_ref, maker, labels=None):
    for label in labels if labels is not None else _pool_labels():
        _REGISTRY[suite].append(
            (f"{suite}/{name}-{label}", paper_ref, maker(label))
        )


# ---------------------------------------------------------------------------
# ring-axioms
# ---------------------------------------------------------------------------

def _ring_axiom_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        zero, one = witt_zero(ctx, alg), witt_one(ctx, alg)
        for i in range(params["samples"]):
            a, b, c = (_rand_vec(ctx, alg, rng) for _ in range(3))
            checks = (
                ("add-assoc", add(add(a, b), c) == add(a, add(b, c))),
                ("add-comm", add(a, b) == add(b, a)),
                ("mul-assoc", mul(mul(a, b), c) == mul(a, mul(b, c))),
                ("mul-comm", mul(a, b) == mul(b, a)),
                ("distrib", mul(a, add(b, c)) == add(mul(a, b), mul(a, c))),
                ("neg", add(a, negate(a)) == zero),
                ("one", mul(a, one) == a),
                ("zero", add(a, zero) == a),
            )
            for tag, ok in checks:
                if not ok:
                    return False, f"{tag} failed at sample {i} in W_{ctx.n}"
        return True, ""

    return run


_register_per_label("ring-axioms", "laws", _RING_REF, _ring_axiom_job)


# ---------------------------------------------------------------------------
# ghost
# ---------------------------------------------------------------------------

def _ghost_roundtrip_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        for i in range(params["samples"]):
            w = _rand_vec(ctx, alg, rng)
            g = ghost(w)
            if unghost(g) != w:
                return False, f"unghost(ghost(w)) != w at sample {i}"
            if ghost(unghost(g)).entries != g.entries:
                return False, f"ghost(unghost(g)) != g at sample {i}"
        return True, ""

    return run


def _ghost_hom_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        ring = alg.ring
        for i in range(params["samples"]):
            a, b = _rand_vec(ctx, alg, rng), _rand_vec(ctx, alg, rng)
            ga, gb = ghost(a).entries, ghost(b).entries
            if ghost(add(a, b)).entries != tuple(map(ring.add, ga, gb)):
                return False, f"ghost not additive at sample {i}"
            if ghost(mul(a, b)).entries != tuple(map(ring.mul, ga, gb)):
                return False, f"ghost not multiplicative at sample {i}"
        return True, ""

    return run


def _ghost_head_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        ring = alg.ring
        for i in range(params["samples"]):
            w = _rand_vec(ctx, alg, rng)
            for k in range(ctx.n + 1):
                lhs = alg.reduce_mod_power(ghost_component(w, k), ctx.pi, 1)
                rhs = alg.reduce_mod_power(
                    ring.pow(w.components[0], ctx.q**k), ctx.pi, 1
                )
                if lhs != rhs:
                    return False, f"gh_{k} != w_0^(q^{k}) mod pi at sample {i}"
        return True, ""

    return run


@_job("ghost", "congruence-lattice-p2", _LATTICE_REF)
def _ghost_lattice(rng, params):
    ctx = WittContext(ZZ, 2, 2)
    alg = Algebra(ZZ, ZZ)
    for i in range(params["lattice"]):
        entries = tuple(rng.randrange(-8, 9) for _ in range(3))
        admissible = entries[0] % 2 == entries[1] % 2 and entries[1] % 4 == entries[2] % 4
        try:
            unghost(GhostVector(ctx, alg, entries))
            seen = True
        except CongruenceViolation:
            seen = False
        if seen != admissible:
            return False, f"congruence lattice wrong at {entries}"
    return True, ""


def _ghost_compat_job(q, n):
    def run(rng, params):
        base = ZZ if q in (2, 3, 5) else FpT(2)
        pi = q if q in (2, 3, 5) else base.t
        ctx = WittContext(base, pi, n)
        for op in params["sym_ops"]:
            if not verify_ghost_compat(structural_polys(ctx, op)):
                return False, f"{op} polynomials fail ghost compatibility"
        return True, ""

    return run


_register_per_label(
    "ghost", "roundtrip", _GHOST_RING_REF, _ghost_roundtrip_job, _torsion_free_labels()
)
_register_per_label(
    "ghost", "ring-hom", _GHOST_HOM_REF, _ghost_hom_job, _torsion_free_labels()
)
_register_per_label(
    "ghost", "head-congruence", _HEAD_REF, _ghost_head_job, ["Z8-p2", "Z9-p3", "F2t2-t"]
)
for _q, _n in ((2, 2), (3, 1), (4, 1)):
    _REGISTRY["ghost"].append(
        (f"ghost/structural-compat-q{_q}-n{_n}", _STRUCT_REF, _ghost_compat_job(_q, _n))
    )


# ---------------------------------------------------------------------------
# verschiebung
# ---------------------------------------------------------------------------

def _versch_shift_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        ring = alg.ring
        for i in range(params["samples"]):
            a, b = _rand_vec(ctx, alg, rng), _rand_vec(ctx, alg, rng)
            va = verschiebung(a)
            if va.components != (ring.zero,) + a.components:
                return False, f"V is not the shift at sample {i}"
            if verschiebung(add(a, b)) != add(va, verschiebung(b)):
                return False, f"V not additive at sample {i}"
        return True, ""

    return run


def _versch_fv_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        for i in range(params["samples"]):
            a = _rand_vec(ctx, alg, rng)
            if frobenius(verschiebung(a)) != base_scale(ctx.pi, a):
                return False, f"psi(V(a)) != pi*a at sample {i}"
        return True, ""

    return run


def _versch_projection_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        up = ctx.with_length(ctx.n + 1)
        for i in range(params["samples"]):
            x = _rand_vec(ctx, alg, rng)
            z = _rand_vec(up, alg, rng)
            if mul(verschiebung(x), z) != verschiebung(mul(x, frobenius(z))):
                return False, f"V(x)z != V(x psi(z)) at sample {i}"
        return True, ""

    return run


def _versch_product_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        for i in range(params["samples"]):
            x, y = _rand_vec(ctx, alg, rng), _rand_vec(ctx, alg, rng)
            lhs = mul(verschiebung(x), verschiebung(y))
            rhs = base_scale(ctx.pi, verschiebung(mul(x, y)))
            if lhs != rhs:
                return False, f"V(x)V(y) != pi*V(xy) at sample {i}"
        return True, ""

    return run


_register_per_label("verschiebung", "shift-additive", _V_REF, _versch_shift_job)
_register_per_label("verschiebung", "fv-is-pi", _FV_REF, _versch_fv_job)
_register_per_label("verschiebung", "projection", _FV_REF, _versch_projection_job)
_register_per_label("verschiebung", "product", _FV_REF, _versch_product_job)


# ---------------------------------------------------------------------------
# frobenius
# ---------------------------------------------------------------------------

def _frob_hom_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        for i in range(params["samples"]):
            a, b = _rand_vec(ctx, alg, rng), _rand_vec(ctx, alg, rng)
            if frobenius(add(a, b)) != add(frobenius(a), frobenius(b)):
                return False, f"psi not additive at sample {i}"
            if frobenius(mul(a, b)) != mul(frobenius(a), frobenius(b)):
                return False, f"psi not multiplicative at sample {i}"
        return True, ""

    return run


def _frob_shift_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        for i in range(params["samples"]):
            w = _rand_vec(ctx, alg, rng)
            if ghost(frobenius(w)).entries != ghost(w).entries[1:]:
                return False, f"ghost shift fails at sample {i}"
        return True, ""

    return run


def _frob_teich_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        ring = alg.ring
        down = ctx.with_length(ctx.n - 1)
        for i in range(params["samples"]):
            a = _rand_elt(ring, rng)
            lhs = frobenius(teichmuller(a, ctx, alg))
            if lhs != teichmuller(ring.pow(a, ctx.q), down, alg):
                return False, f"psi[a] != [a^q] at {ring.show(a)}"
        return True, ""

    return run


_register_per_label("frobenius", "ring-hom", _F_HOM_REF, _frob_hom_job)
_register_per_label(
    "frobenius", "ghost-shift", _F_HOM_REF, _frob_shift_job, _torsion_free_labels()
)
_register_per_label("frobenius", "teichmuller-lift", _F_LIFT_REF, _frob_teich_job)


# ---------------------------------------------------------------------------
# teichmuller
# ---------------------------------------------------------------------------

def _teich_mult_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        ring = alg.ring
        for i in range(params["samples"]):
            a, b = _rand_elt(ring, rng), _rand_elt(ring, rng)
            lhs = mul(teichmuller(a, ctx, alg), teichmuller(b, ctx, alg))
            if lhs != teichmuller(ring.mul(a, b), ctx, alg):
                return False, f"[a][b] != [ab] at sample {i}"
        return True, ""

    return run


def _teich_scale_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        for i in range(params["samples"]):
            a = _rand_elt(alg.ring, rng)
            w = _rand_vec(ctx, alg, rng)
            if teich_scale(a, w) != mul(teichmuller(a, ctx, alg), w):
                return False, f"teich_scale != mul by [a] at sample {i}"
        return True, ""

    return run


def _teich_ghost_job(label):
    def run(rng, params):
        ctx, alg = _context(label, params)
        ring = alg.ring
        for i in range(params["samples"]):
            a = _rand_elt(ring, rng)
            want = tuple(ring.pow(a, ctx.q**k) for k in range(ctx.n + 1))
            if ghost(teichmuller(a, ctx, alg)).entries != want:
                return False, f"ghost([a]) != (a^(q^k)) at {ring.show(a)}"
        return True, ""

    return run


_register_per_label("teichmuller", "multiplicative", _TEICH_REF, _teich_mult_job)
_register_per_label("teichmuller", "scaling", _TEICH_SCALE_REF, _teich_scale_job)
_register_per_label(
    "teichmuller", "ghost", _TEICH_REF, _teich_ghost_job, _torsion_free_labels()
)


# ---------------------------------------------------------------------------
# delta-axioms
# ---------------------------------------------------------------------------

def _delta_slug(label):
    out = []
    for ch in label:
        out.append(ch if ch.isalnum() else "-")
    slug = "".join(out)
    while "--" in slug:
        slug = slug.replace("--", "-")
    return slug.strip("-")


def _delta_job(spec):
    def run(rng, params):
        lift = check_frobenius_lift(spec)
        if not lift.ok:
            return False, lift.first_failure().line()
        axioms = check_delta_axioms(
            spec, samples=params["delta_samples"], seed=rng.randrange(2**32)
        )
        if not axioms.ok:
            return False, axioms.first_failure().line()
        return True, ""

    return run


for _label, _spec in axiom_battery():
    _REGISTRY["delta-axioms"].append(
        (f"delta-axioms/{_delta_slug(_label)}", _DELTA_AXIOM_REF, _delta_job(_spec))
    )


@_job("delta-axioms", "coaction-constant-ghost-Z", _COACTION_REF)
def _delta_coaction_z(rng, params):
    spec = canonical_base_spec(ZZ, (2,))
    for i in range(params["samples"]):
        a = rng.randrange(-9, 10)
        w = coaction(spec, a, 2)
        if ghost(w).entries != (a, a, a):
            return False, f"ghost(coaction({a})) is not constant"
    return True, ""


@_job("delta-axioms", "coaction-teichmuller-F3t", _COACTION_REF)
def _delta_coaction_f3t(rng, params):
    f3t = FpT(3)
    spec = canonical_base_spec(f3t, (f3t.t,))
    ctx = WittContext(f3t, f3t.t, 2)
    alg = Algebra(f3t, f3t)
    for i in range(params["samples"]):
        a = _rand_elt(f3t, rng)
        if coaction(spec, a, 2) != teichmuller(a, ctx, alg):
            return False, f"coaction != Teichmuller at {f3t.show(a)}"
    return True, ""


# ---------------------------------------------------------------------------
# descent
# ---------------------------------------------------------------------------

def _descent_job(alg, base, pi):
    def run(rng, params):
        claims = []
        for n in range(1, params["descent_n"] + 1):
            ctx = WittContext(base, pi, n)
            for kind, rep in (
                ("kernel", kernel_report(alg, ctx)),
                ("equalizer", equalizer_report(alg, ctx)),
                ("alpha-hom", alpha_hom_report(alg, ctx)),
                ("ghost-congruence", ghost_congruence_report(alg, ctx)),
            ):
                claims.append((f"n{n}-{kind}", rep))
        for n in range(params["descent_n"] + 1):
            ctx = WittContext(base, pi, n)
            for j in range(params["descent_j"] + 1):
                claims.append((f"n{n}-j{j}", v_sequence_report(alg, ctx, j)))
        return claims

    return run


for _label, _alg, _base, _pi in standard_battery():
    _REGISTRY["descent"].append(
        (
            f"descent/{_delta_slug(_label)}",
            "§8",
            _descent_job(_alg, _base, _pi),
        )
    )


# ---------------------------------------------------------------------------
# multi-prime
# ---------------------------------------------------------------------------

def _rand_tree(ring, rng):
    if isinstance(ring, WittRing):
        return tuple(
            _rand_tree(ring.alg.ring, rng) for _ in range(ring.ctx.n + 1)
        )
    return _rand_elt(ring, rng)


def _rand_multi(rng, index=(1, 1)):
    family = PrimeFamily((2, 3))
    alg = Algebra(ZZ, ZZ)
    z = multi_zero(family, index, alg)
    return z._like(_rand_tree(z.top_ring(), rng))


@_job("multi-prime", "ghost-ring-hom", _MULTI_GHOST_REF)
def _multi_hom(rng, params):
    for i in range(params["samples"]):
        a, b = _rand_multi(rng), _rand_multi(rng)
        ga, gb = multi_ghost(a), multi_ghost(b)
        gsum, gprod = multi_ghost(a + b), multi_ghost(a * b)
        for key in ga:
            if gsum[key] != ga[key] + gb[key] or gprod[key] != ga[key] * gb[key]:
                return False, f"multi ghost not a hom at index {key}"
    return True, ""


@_job("multi-prime", "ghost-roundtrip", _MULTI_ISO_REF)
def _multi_roundtrip(rng, params):
    family = PrimeFamily((2, 3))
    alg = Algebra(ZZ, ZZ)
    for i in range(params["samples"]):
        w = _rand_multi(rng)
        if multi_unghost(multi_ghost(w), family, (1, 1), alg) != w:
            return False, f"multi unghost roundtrip fails at sample {i}"
    return True, ""


@_job("multi-prime", "reorder", _REORDER_REF)
def _multi_reorder(rng, params):
    for i in range(params["samples"]):
        a, b = _rand_multi(rng), _rand_multi(rng)
        ra = reorder(a, (1, 0))
        if multi_ghost(ra) != multi_ghost(a):
            return False, f"reorder changed the ghost at sample {i}"
        if reorder(ra, (0, 1)) != a:
            return False, f"reorder is not an involution at sample {i}"
        if reorder(a + b, (1, 0)) != ra + reorder(b, (1, 0)):
            return False, f"reorder not additive at sample {i}"
        if reorder(a * b, (1, 0)) != ra * reorder(b, (1, 0)):
            return False, f"reorder not multiplicative at sample {i}"
    return True, ""


@_job("multi-prime", "fv-inner", _MULTI_ISO_REF)
def _multi_fv(rng, params):
    family = PrimeFamily((2, 3))
    for i in range(params["samples"]):
        for pos in (0, 1):
            w = _rand_multi(rng)
            p = family.primes[pos]
            got = multi_frobenius(multi_verschiebung(w, pos), pos)
            want = w
            for _ in range(p - 1):
                want = want + w
            if got != want:
                return False, f"psi_{p}(V_{p}(w)) != {p}w at sample {i}"
    return True, ""


@_job("multi-prime", "teichmuller-ghost", _MULTI_GHOST_REF)
def _multi_teich(rng, params):
    family = PrimeFamily((2, 3))
    alg = Algebra(ZZ, ZZ)
    for i in range(params["samples"]):
        a = rng.randrange(-5, 6)
        g = multi_ghost(multi_teichmuller(a, family, (1, 1), alg))
        for (i2, i3), val in g.items():
            if val != a ** (2**i2 * 3**i3):
                return False, f"teichmuller ghost wrong at index ({i2},{i3})"
    return True, ""


@_job("multi-prime", "bigwitt-congruences", _BIGWITT_REF)
def _multi_bigwitt(rng, params):
    T = (1, 2, 3, 6)
    for i in range(params["samples"]):
        comps = {d: rng.randrange(-6, 7) for d in T}
        entries = classical_big_ghost(comps, T)
        if not big_ghost_congruences_ok(entries):
            return False, f"ghost of components {comps} fails the congruences"
        tampered = dict(entries)
        tampered[2] += 1
        if big_ghost_congruences_ok(tampered):
            return False, "tampered ghost passed the congruences"
    return True, ""


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

@_job("presentations", "wn-relations-Z-p2", _WN_REF)
def _pres_wn_z2(rng, params):
    rep = verify_wn_presentation(ZZ, 2, params["wn_z"])
    return rep.ok, "" if rep.ok else rep.first_failure().line()


@_job("presentations", "wn-relations-Z-p3", _WN_REF)
def _pres_wn_z3(rng, params):
    rep = verify_wn_presentation(ZZ, 3, params["wn_z"])
    return rep.ok, "" if rep.ok else rep.first_failure().line()


@_job("presentations", "wn-relations-F3t", _WN_REF)
def _pres_wn_f3t(rng, params):
    f3t = FpT(3)
    rep = verify_wn_presentation(f3t, f3t.t, params["wn_t"])
    return rep.ok, "" if rep.ok else rep.first_failure().line()


@_job("presentations", "coord-roundtrip", _COORD_REF)
def _pres_coord(rng, params):
    for base, pi, n in params["coord"]:
        if base == "F3T":
            base = FpT(3)
            pi = base.t
        ctx = WittContext(base, pi, n)
        tring, ds = coord_change(ctx, "theta-to-delta")
        dring, ts = coord_change(ctx, "delta-to-theta")
        for i in range(n + 1):
            if tring.eval_into(ds[i], dring, ts, dring.const) != dring.gen(i):
                return False, f"delta o inverse != id at level {i}"
            if dring.eval_into(ts[i], tring, ds, tring.const) != tring.gen(i):
                return False, f"inverse o delta != id at level {i}"
    return True, ""


@_job("presentations", "delta2-differs-p2", _COORD_REF)
def _pres_delta2(rng, params):
    ctx = WittContext(ZZ, 2, 2)
    ring, ds = coord_change(ctx, "theta-to-delta")
    if ds[0] != ring.gen(0) or ds[1] != ring.gen(1):
        return False, "first two levels are not the identity"
    if ds[2] == ring.gen(2):
        return False, "delta^2 collapsed to theta_2"
    want = "-theta_0^2*theta_1 - theta_1^2 + theta_2"
    got = ring.show(ds[2])
    return got == want, "" if got == want else f"delta^2 = {got}"


def _transport_ok(base, pi, n, src, f):
    ctx = WittContext(base, pi, n)
    tring, theta = theta_expand(src, f, ctx)
    dring, delta = delta_expand(src, f, ctx)
    cring, ds = coord_change(ctx, "theta-to-delta")
    dsub = []
    for j in range(src.nvars):
        vals = tuple(tring.gen(j * (n + 1) + i) for i in range(n + 1))
        dsub.extend(
            cring.eval_into(ds[k], tring, vals, tring.const) for k in range(n + 1)
        )
    lhs = [dring.eval_into(delta[i], tring, tuple(dsub), tring.const) for i in range(n + 1)]
    rhs = [cring.eval_into(ds[i], tring, theta, tring.const) for i in range(n + 1)]
    return lhs == rhs


@_job("presentations", "style-transport-Z", _DELTA_PRES_REF)
def _pres_transport(rng, params):
    zxy = polyring(ZZ, ("x", "y"))
    f = zxy.add(zxy.mul(zxy.gen(0), zxy.gen(1)), zxy.gen(0))
    for p in (2, 3):
        if not _transport_ok(ZZ, p, 2, zxy, f):
            return False, f"delta expansion disagrees with transported theta (p={p})"
    return True, ""


@_job("presentations", "lambda-generators", _THETA_REF)
def _pres_lambda(rng, params):
    zx = polyring(ZZ, ("x",))
    ctx = WittContext(ZZ, 2, 2)
    free = lambda_presentation(RingPresentation(ZZ, ("x",)), ctx, "theta")
    if free.relations or len(free.generators) != 3:
        return False, "free presentation has the wrong shape"
    rel = RingPresentation(ZZ, ("x",), (zx.gen(0, 2),))
    for style in ("theta", "delta"):
        pres = lambda_presentation(rel, ctx, style)
        if len(pres.generators) != 3 or len(pres.relations) != 3:
            return False, f"{style} presentation has the wrong counts"
    return True, ""


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

def _jobs_for(suite):
    if suite == "all":
        out = []
        for name in SUITE_NAMES:
            if name != "all":
                out.extend((name, *row) for row in _REGISTRY[name])
        return out
    if suite not in _REGISTRY:
        raise ExprSyntaxError(
            f"unknown selftest suite {suite!r} (choose from {', '.join(SUITE_NAMES)})"
        )
    return [(suite, *row) for row in _REGISTRY[suite]]


def _run_job(suite, job_id, paper_ref, fn, seed, params):
    rng = Random(f"{seed}:{job_id}")
    try:
        out = fn(rng, params)
    except Exception as e:  # a crashed probe is a failed claim
        return [
            SelftestClaim(job_id, suite, False, paper_ref, f"{type(e).__name__}: {e}")
        ]
    if isinstance(out, list):
        claims = []
        for suffix, rep in out:
            for c in rep.claims:
                claims.append(
                    SelftestClaim(
                        f"{job_id}/{suffix}/{c.claim_id}",
                        suite,
                        c.ok,
                        c.paper_ref,
                        "" if c.ok else str(c.failures[0]),
                    )
                )
        return claims
    ok, detail = out
    return [SelftestClaim(job_id, suite, bool(ok), paper_ref, detail)]


def run_selftest(suite: str, size: str, seed: int = 0, workers: int = 4):
    """Run a suite; returns (claims sorted by id, all_ok)."""
    if size not in SIZES:
        raise ExprSyntaxError(f"unknown size {size!r} (choose small or medium)")
    params = _PARAMS[size]
    jobs = _jobs_for(suite)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        chunks = pool.map(
            lambda row: _run_job(row[0], row[1], row[2], row[3], seed, params), jobs
        )
        claims = [c for chunk in chunks for c in chunk]
    claims.sort(key=lambda c: c.claim_id)
    ids = [c.claim_id for c in claims]
    if len(set(ids)) != len(ids):
        raise InternalIntegrityError("duplicate claim ids in suite registry")
    return claims, all(c.ok for c in claims)


def report_json(claims) -> str:
    doc = {"claims": [c.to_dict() for c in claims]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
