"""Frobenius lifts, delta-operators, C-polynomials, and the coaction."""
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

import oracles
from wittvec.delta import (
    FrobeniusLiftSpec,
    axiom_battery,
    base_delta,
    c_cross_poly,
    c_poly,
    c_polynomials,
    canonical_base_spec,
    check_delta_axioms,
    check_frobenius_lift,
    coaction,
    delta_apply,
    lift_spec_from_json,
    lift_spec_to_json,
)
from wittvec.errors import (
    ContextMismatch,
    LiftViolation,
    NotPrimeElement,
    UnsupportedPresentation,
)
from wittvec.multi import multi_ghost
from wittvec.poly import polyring
from wittvec.rings import ZZ, Algebra, FpT, Zmod
from wittvec.witt import ghost

ZX = polyring(ZZ, ("x",))
X = ZX.gen(0)
F3T = FpT(3)

small_ints = st.integers(-30, 30)


def zx_spec(image, primes=(2,)):
    return FrobeniusLiftSpec(Algebra(ZZ, ZX), primes, tuple((image,) for _ in primes))


class TestSpecValidation:
    def test_rejects_non_prime(self):
        with pytest.raises(NotPrimeElement):
            canonical_base_spec(ZZ, (6,))

    def test_rejects_repeated_primes(self):
        with pytest.raises(ContextMismatch):
            canonical_base_spec(ZZ, (2, -2))

    def test_rejects_quotient_algebras(self):
        with pytest.raises(UnsupportedPresentation):
            FrobeniusLiftSpec(Algebra(ZZ, Zmod(4)), (2,), ((),))

    def test_image_shape_checked(self):
        with pytest.raises(ContextMismatch):
            FrobeniusLiftSpec(Algebra(ZZ, ZX), (2,), ((),))


class TestCheckFrobeniusLift:
    def test_identity_on_z_is_a_lift(self):
        for p in (2, 3, 5):
            assert check_frobenius_lift(canonical_base_spec(ZZ, (p,))).ok

    def test_odd_constant_breaks_parity(self):
        bad = zx_spec(ZX.add(ZX.gen(0, 2), ZX.from_int(5)))
        rep = check_frobenius_lift(bad)
        assert not rep.ok
        assert "x" in rep.first_failure().detail

    def test_power_lifts_commute(self):
        two = FrobeniusLiftSpec(
            Algebra(ZZ, ZX), (2, 3), ((ZX.gen(0, 2),), (ZX.gen(0, 3),))
        )
        rep = check_frobenius_lift(two)
        assert rep.ok
        assert any(c.name.startswith("lifts-commute") for c in rep.claims)

    def test_noncommuting_pair_named(self):
        two = FrobeniusLiftSpec(
            Algebra(ZZ, ZX),
            (2, 3),
            ((ZX.gen(0, 2),), (ZX.add(ZX.gen(0, 3), ZX.from_int(3)),)),
        )
        rep = check_frobenius_lift(two)
        bad = [c for c in rep.claims if not c.ok]
        assert bad and bad[0].name.startswith("lifts-commute")


class TestDeltaApply:
    def test_scalar_values(self):
        spec = canonical_base_spec(ZZ, (2,))
        assert delta_apply(spec, 0, 2) == -1
        assert delta_apply(spec, 0, 1) == 0
        assert delta_apply(spec, 0, 0) == 0

    @given(small_ints)
    @settings(max_examples=30, deadline=None)
    def test_matches_base_delta_over_z(self, a):
        for p in (2, 3):
            spec = canonical_base_spec(ZZ, (p,))
            assert delta_apply(spec, 0, a) == base_delta(ZZ, p, a)
            # psi(a) = a^q + pi*delta(a) reconstructs the lift
            assert a == a**p + p * delta_apply(spec, 0, a)

    def test_exact_power_lift_has_delta_zero(self):
        spec = zx_spec(ZX.gen(0, 2))
        assert delta_apply(spec, 0, X) == ZX.zero

    def test_char_p_base_delta_vanishes(self):
        assert base_delta(F3T, F3T.t, F3T.add(F3T.t, F3T.one)) == F3T.zero

    def test_lift_violation_raised(self):
        bad = zx_spec(ZX.add(ZX.gen(0, 2), ZX.from_int(5)))
        with pytest.raises(LiftViolation):
            delta_apply(bad, 0, X)


class TestCPolynomials:
    def test_frozen_small_cases(self):
        r2, c2 = c_poly(ZZ, 2)
        assert r2.show(c2) == "-x*y"
        r3, c3 = c_poly(ZZ, 3)
        assert r3.show(c3) == "-x^2*y - x*y^2"

    @given(st.sampled_from([2, 3, 5]))
    @settings(max_examples=3, deadline=None)
    def test_matches_sympy_oracle(self, p):
        ring, c = c_poly(ZZ, p)
        got = sp.sympify(ring.show(c).replace("^", "**"))
        assert sp.expand(got - oracles.c_poly_sympy(p, p)) == 0

    def test_vanishes_at_zero_and_symmetric(self):
        for p in (2, 3, 5):
            ring, c = c_poly(ZZ, p)
            assert ring.eval_into(c, ring, (ring.gen(0), ring.zero), ring.const) == ring.zero
            swapped = ring.eval_into(c, ring, (ring.gen(1), ring.gen(0)), ring.const)
            assert swapped == c

    def test_char_p_c_is_zero(self):
        ring, c = c_poly(F3T, F3T.t)
        assert c == ring.zero

    def test_cross_23_frozen_and_oracle(self):
        cr = c_cross_poly(ZZ, 2, 3)
        ring = polyring(ZZ, ("x", "y", "z"))
        assert ring.show(cr) == "-x^4*y + x^3*z - 2*x^2*y^2 - y^3 + z^2"
        got = sp.sympify(ring.show(cr).replace("^", "**"))
        assert sp.expand(got - oracles.c_cross_23_sympy()) == 0

    def test_bundle_indexes_both_orientations(self):
        cp = c_polynomials(ZZ, (2, 3))
        assert set(cp.cross) == {(0, 1), (1, 0)}
        assert len(cp.c) == 2

    def test_binomial_form(self):
        # C = -sum_{0<i<q} (binom(q,i)/pi) x^{q-i} y^i
        from math import comb

        for p in (2, 3, 5):
            ring, c = c_poly(ZZ, p)
            want = ring.zero
            for i in range(1, p):
                want = ring.sub(
                    want,
                    ring.term(comb(p, i) // p, (p - i, i)),
                )
            assert c == want


class TestDeltaAxioms:
    def test_battery_passes(self):
        for label, spec in axiom_battery():
            rep = check_delta_axioms(spec, samples=40, seed=3)
            assert rep.ok, (label, rep.lines())

    def test_axiom4_oracle_identity(self):
        assert oracles.delta_axiom4_check_z_identity_lifts()

    def test_axiom4_two_prime_witness(self):
        # delta2(delta3(6)) and delta3(delta2(6)) against direct arithmetic
        spec = canonical_base_spec(ZZ, (2, 3))
        d2 = lambda a: (a - a**2) // 2
        d3 = lambda a: (a - a**3) // 3
        assert delta_apply(spec, 0, 6) == d2(6) == -15
        assert delta_apply(spec, 1, 6) == d3(6) == -70
        lhs = d2(d3(6)) - d3(d2(6))
        cr = c_cross_poly(ZZ, 2, 3)
        ring = polyring(ZZ, ("x", "y", "z"))
        rhs = ring.eval_into(cr, ZZ, (6, d2(6), d3(6)), lambda c: c)
        assert lhs == rhs == -3605

    def test_violation_reported_not_raised(self):
        bad = zx_spec(ZX.add(ZX.gen(0, 2), ZX.from_int(5)))
        rep = check_delta_axioms(bad, samples=5, seed=0)
        assert not rep.ok
        assert rep.first_failure() is not None


class TestCoaction:
    def test_spec_examples(self):
        spec = canonical_base_spec(ZZ, (2,))
        assert coaction(spec, 2, 1).components == (2, -1)
        wx = coaction(
            zx_spec(ZX.add(ZX.gen(0, 2), ZX.from_int(2))), X, 1
        )
        assert wx.components == (X, ZX.one)
        teich = coaction(zx_spec(ZX.gen(0, 2)), X, 3)
        assert teich.components == (X, ZX.zero, ZX.zero, ZX.zero)

    @given(small_ints, st.integers(0, 3))
    @settings(max_examples=30, deadline=None)
    def test_matches_identity_oracle(self, a, n):
        spec = canonical_base_spec(ZZ, (2,))
        w = coaction(spec, a, n)
        assert w.components == tuple(oracles.coaction_z_identity(a, 2, n))
        assert ghost(w).entries == (a,) * (n + 1)

    def test_matches_sympy_oracle_on_zx(self):
        spec = zx_spec(ZX.add(ZX.gen(0, 2), ZX.from_int(2)))
        a = ZX.parse("x^2 + 3*x + 1")
        w = coaction(spec, a, 2)
        xs = sp.symbols("x")
        want = oracles.coaction_zx_sympy(xs**2 + 2, xs**2 + 3 * xs + 1, 2, 2)
        for comp, expect in zip(w.components, want):
            got = sp.sympify(ZX.show(comp).replace("^", "**"))
            assert sp.expand(got - expect) == 0

    @given(small_ints, small_ints)
    @settings(max_examples=25, deadline=None)
    def test_ring_homomorphism_over_z(self, a, b):
        spec = canonical_base_spec(ZZ, (3,))
        ca, cb = coaction(spec, a, 2), coaction(spec, b, 2)
        assert ca + cb == coaction(spec, a + b, 2)
        assert ca * cb == coaction(spec, a * b, 2)

    def test_ring_homomorphism_over_zx(self):
        spec = zx_spec(ZX.add(ZX.gen(0, 2), ZX.from_int(2)))
        a, b = ZX.parse("x + 1"), ZX.parse("2*x^2 - x")
        ca, cb = coaction(spec, a, 2), coaction(spec, b, 2)
        assert ca + cb == coaction(spec, ZX.add(a, b), 2)
        assert ca * cb == coaction(spec, ZX.mul(a, b), 2)

    def test_ghost_entries_are_lift_iterates(self):
        spec = zx_spec(ZX.add(ZX.gen(0, 2), ZX.from_int(2)))
        a = ZX.parse("x + 1")
        w = coaction(spec, a, 2)
        entries = ghost(w).entries
        assert entries[0] == a
        assert entries[1] == spec.psi(0, a)
        assert entries[2] == spec.psi(0, spec.psi(0, a))

    def test_multi_prime_identity_lift(self):
        spec = canonical_base_spec(ZZ, (2, 3))
        m = coaction(spec, 5, (1, 1))
        assert multi_ghost(m) == {idx: 5 for idx in ((0, 0), (1, 0), (0, 1), (1, 1))}

    def test_multi_prime_needs_multi_index(self):
        spec = canonical_base_spec(ZZ, (2, 3))
        with pytest.raises(ContextMismatch):
            coaction(spec, 5, 1)

    def test_lift_violation(self):
        bad = zx_spec(ZX.add(ZX.gen(0, 2), ZX.from_int(5)))
        with pytest.raises(LiftViolation):
            coaction(bad, X, 1)

    def test_f3t_coaction(self):
        f3x = polyring(F3T, ("x",))
        spec = FrobeniusLiftSpec(
            Algebra(F3T, f3x), (F3T.t,), ((f3x.gen(0, 3),),)
        )
        w = coaction(spec, f3x.gen(0), 2)
        assert w.components == (f3x.gen(0), f3x.zero, f3x.zero)


class TestJsonSpecs:
    def test_round_trip(self):
        two = FrobeniusLiftSpec(
            Algebra(ZZ, ZX), (2, 3), ((ZX.gen(0, 2),), (ZX.gen(0, 3),))
        )
        back = lift_spec_from_json(lift_spec_to_json(two))
        assert back.primes == two.primes and back.images == two.images

    def test_parse_document(self):
        doc = {
            "base": "F3[t]",
            "primes": ["t"],
            "generators": ["x"],
            "psi": {"t": {"x": "x^3"}},
        }
        spec = lift_spec_from_json(doc)
        assert check_frobenius_lift(spec).ok
        assert spec.qs == (3,)

    def test_missing_psi_rejected(self):
        doc = {"base": "Z", "primes": ["2"], "generators": ["x"], "psi": {}}
        with pytest.raises(ContextMismatch):
            lift_spec_from_json(doc)
