"""Command-line front end: grammar, exit codes, JSON schemas, determinism."""
import json

import pytest

from wittvec.cli import main
from wittvec.rings import ZZ, Algebra
from wittvec.selftest import SUITE_NAMES, run_selftest
from wittvec.witt import WittContext, WittVector, ghost_component


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


class TestEval:
    def test_sum_in_z4(self, capsys):
        code, out, _ = run(
            capsys, "eval", "--base", "Z", "--pi", "2", "--len", "1",
            "--alg", "Z/4", "--expr", "(1,0)+(1,0)",
        )
        assert code == 0
        assert out == "(2,3)\n"

    def test_teichmuller_literal(self, capsys):
        code, out, _ = run(
            capsys, "eval", "--base", "Z", "--pi", "2", "--len", "1",
            "--alg", "Z/4", "--expr", "[1]",
        )
        assert code == 0
        assert out == "(1,0)\n"

    def test_ghost_literal_congruence_violation(self, capsys):
        code, _, err = run(capsys, "eval", "--expr", "gh <1,2>")
        assert code == 4
        assert "ghost" in err

    def test_ghost_literal_unghosts(self, capsys):
        code, out, _ = run(capsys, "eval", "--expr", "gh <1,3>")
        assert code == 0
        assert out == "(1,1)\n<1,3>\n"

    def test_torsion_free_prints_ghost(self, capsys):
        code, out, _ = run(capsys, "eval", "--expr", "(1,2)")
        assert code == 0
        assert out == "(1,2)\n<1,5>\n"

    def test_torsion_algebra_hides_ghost(self, capsys):
        code, out, _ = run(capsys, "eval", "--alg", "Z/4", "--expr", "(1,2)")
        assert code == 0
        assert out == "(1,2)\n"

    def test_verschiebung_frobenius_words(self, capsys):
        # psi(V(w)) = 2w = w + w, computed through ghost (2, 10)
        code, out, _ = run(capsys, "eval", "--expr", "F V (1,2)")
        assert code == 0
        assert out == "(2,3)\n<2,10>\n"
        code, out, _ = run(capsys, "eval", "--expr", "(1,2)+(1,2)")
        assert out == "(2,3)\n<2,10>\n"

    def test_scalar_ghost_component(self, capsys):
        code, out, _ = run(capsys, "eval", "--expr", "gh_1 (1,2)")
        assert code == 0
        assert out == "5\n"

    def test_reduced_ghost_component(self, capsys):
        ctx = WittContext(ZZ, 2, 1)
        w = WittVector(ctx, Algebra(ZZ, ZZ), (1, 2))
        want = ghost_component(w, 3, reduced=True)
        code, out, _ = run(capsys, "eval", "--expr", "rgh_3 (1,2)")
        assert code == 0
        assert out == f"{want}\n"

    def test_unary_minus_and_single_component(self, capsys):
        code, out, _ = run(capsys, "eval", "--expr=-(3,)")
        assert code == 0
        assert out.splitlines()[0] == "(-3,)"

    def test_grouping_parentheses(self, capsys):
        code, out, _ = run(capsys, "eval", "--expr", "((1,0) + (0,1)) * (2,0)")
        assert code == 0
        assert out.splitlines()[0] == "(2,4)"

    def test_fpt_base(self, capsys):
        code, out, _ = run(
            capsys, "eval", "--base", "Fp[t]:3", "--pi", "t",
            "--expr", "(t,1)*(t,1)",
        )
        assert code == 0
        assert out.splitlines()[0] == "(t^2,2*t^3 + t)"

    def test_json_schema(self, capsys):
        code, doc, _ = run_json(capsys, "eval", "--expr", "(1,2)")
        assert code == 0
        assert set(doc) == {"context", "components", "ghost", "convention_note"}
        assert doc["components"] == ["1", "2"]
        assert doc["ghost"] == ["1", "5"]
        assert doc["context"] == {
            "base": "Z",
            "pi": "2",
            "len": "1",
            "traditional_len": "2",
            "alg": "Z",
        }
        assert "W_1" in doc["convention_note"]
        assert "W_2" in doc["convention_note"]

    def test_json_omits_ghost_on_torsion(self, capsys):
        code, doc, _ = run_json(capsys, "eval", "--alg", "Z/4", "--expr", "(1,2)")
        assert code == 0
        assert "ghost" not in doc
        assert doc["context"]["alg"] == "Z/4"


class TestEvalErrors:
    def test_parse_error_exit_2(self, capsys):
        code, _, err = run(capsys, "eval", "--expr", "(1,0) @ (0,1)")
        assert code == 2 and "unexpected character" in err

    def test_unbalanced_literal(self, capsys):
        code, _, _ = run(capsys, "eval", "--expr", "(1,0")
        assert code == 2

    def test_unknown_operator_word(self, capsys):
        code, _, err = run(capsys, "eval", "--expr", "Q (1,0)")
        assert code == 2 and "unknown operator" in err

    def test_unknown_base_exit_2(self, capsys):
        code, _, _ = run(capsys, "eval", "--base", "Q", "--expr", "(1,0)")
        assert code == 2

    def test_unknown_algebra_exit_2(self, capsys):
        code, _, _ = run(capsys, "eval", "--alg", "Z/banana", "--expr", "(1,0)")
        assert code == 2

    def test_nonprime_pi_exit_3(self, capsys):
        code, _, err = run(capsys, "eval", "--pi", "4", "--expr", "(1,0)")
        assert code == 3 and "prime" in err

    def test_length_mismatch_exit_3(self, capsys):
        code, _, _ = run(capsys, "eval", "--expr", "(1,0)+(1,0,0)")
        assert code == 3

    def test_teichmuller_needs_len(self, capsys):
        code, _, err = run(capsys, "eval", "--expr", "[2]")
        assert code == 3 and "--len" in err

    def test_frobenius_needs_positive_length(self, capsys):
        code, _, _ = run(capsys, "eval", "--expr", "F (1,)")
        assert code == 3

    def test_ghost_result_cannot_be_added(self, capsys):
        code, _, _ = run(capsys, "eval", "--expr", "gh (1,0) + gh (1,0)")
        assert code == 3

    def test_empty_component_rejected(self, capsys):
        code, _, _ = run(capsys, "eval", "--expr", "(1,,2)")
        assert code == 2


class TestGhostUnghost:
    def test_ghost_forces_entries_on_torsion(self, capsys):
        code, out, _ = run(capsys, "ghost", "--alg", "Z/4", "--expr", "(1,2)")
        assert code == 0
        assert out == "(1,2)\n<1,1>\n"

    def test_unghost_roundtrip(self, capsys):
        code, out, _ = run(capsys, "unghost", "--entries", "1, 3, 11")
        assert code == 0
        assert out.splitlines()[0] == "(1,1,2)"

    def test_unghost_violation_exit_4(self, capsys):
        code, _, _ = run(capsys, "unghost", "--entries", "1,2")
        assert code == 4

    def test_unghost_fpt(self, capsys):
        code, out, _ = run(
            capsys, "unghost", "--base", "F3[t]", "--pi", "t",
            "--entries", "t, t^3+t",
        )
        assert code == 0
        assert out.splitlines()[0] == "(t,1)"


class TestStructpoly:
    def test_sum_p2_n1(self, capsys):
        code, out, _ = run(
            capsys, "structpoly", "--base", "Z", "--pi", "2", "--len", "1",
            "--op", "sum",
        )
        assert code == 0
        assert out.splitlines() == ["S_0 = a0 + b0", "S_1 = -a0*b0 + a1 + b1"]

    def test_negation_char2_is_identity(self, capsys):
        code, out, _ = run(
            capsys, "structpoly", "--base", "F2[t]", "--pi", "t", "--len", "1",
            "--op", "negation",
        )
        assert code == 0
        assert out.splitlines() == ["N_0 = a0", "N_1 = a1"]

    def test_product_head(self, capsys):
        code, doc, _ = run_json(
            capsys, "structpoly", "--base", "Z", "--pi", "3", "--len", "1",
            "--op", "product",
        )
        assert code == 0
        assert doc["components"][0] == "a0*b0"
        assert doc["variables"] == ["a0", "a1", "b0", "b1"]

    def test_len_required(self, capsys):
        code, _, _ = run(capsys, "structpoly", "--op", "sum")
        assert code == 3


class TestPresent:
    def test_free_presentation(self, capsys):
        code, doc, _ = run_json(
            capsys, "present", "--base", "Z", "--pi", "2", "--len", "2",
            "--vars", "x", "--style", "theta",
        )
        assert code == 0
        assert doc["generators"] == ["theta_0(x)", "theta_1(x)", "theta_2(x)"]
        assert doc["relations"] == []
        assert doc["style"] == "theta"

    def test_relation_expansion_counts(self, capsys):
        code, doc, _ = run_json(
            capsys, "present", "--base", "Z", "--pi", "2", "--len", "1",
            "--vars", "x,y", "--rel", "x*y-1", "--style", "delta",
        )
        assert code == 0
        assert len(doc["generators"]) == 4
        assert len(doc["relations"]) == 2

    def test_text_mode(self, capsys):
        code, out, _ = run(
            capsys, "present", "--base", "Z", "--pi", "2", "--len", "1",
            "--vars", "x", "--rel", "x^2",
        )
        assert code == 0
        assert out.startswith("style: theta\ngenerators (2): theta_0(x), theta_1(x)")


class TestCoaction:
    def test_canonical_over_z_has_constant_ghost(self, capsys):
        code, doc, _ = run_json(
            capsys, "coaction", "--base", "Z", "--pi", "2", "--len", "2",
            "--element", "5",
        )
        assert code == 0
        assert doc["ghost"] == ["5", "5", "5"]

    def test_canonical_over_fpt_is_teichmuller(self, capsys):
        code, out, _ = run(
            capsys, "coaction", "--base", "F3[t]", "--pi", "t", "--len", "2",
            "--element", "t^2+1",
        )
        assert code == 0
        assert out.splitlines()[0] == "(t^2 + 1,0,0)"

    def test_inline_spec(self, capsys):
        spec = json.dumps(
            {
                "base": "Z",
                "primes": ["2"],
                "generators": ["x"],
                "psi": {"2": {"x": "x^2 + 2"}},
            }
        )
        code, doc, _ = run_json(
            capsys, "coaction", "--len", "1", "--element", "x", "--spec", spec,
        )
        assert code == 0
        assert doc["components"][0] == "x"


class TestBigwitt:
    def test_set_context(self, capsys):
        code, doc, _ = run_json(capsys, "bigwitt", "--set", "1,2,3,6")
        assert code == 0
        assert doc["primes"] == ["2", "3"]
        assert doc["index"] == ["1", "1"]

    def test_not_divisor_closed_exit_3(self, capsys):
        code, _, _ = run(capsys, "bigwitt", "--set", "1,2,6")
        assert code == 3

    def test_components_ghost_and_congruences(self, capsys):
        code, doc, _ = run_json(
            capsys, "bigwitt", "--set", "1,2", "--components", "1:3,2:-1",
        )
        assert code == 0
        assert doc["ghost"] == [
            {"index": "1", "value": "3"},
            {"index": "2", "value": "7"},
        ]
        assert doc["congruences_ok"] is True

    def test_components_must_cover_set(self, capsys):
        code, _, _ = run(capsys, "bigwitt", "--set", "1,2", "--components", "1:3")
        assert code == 3


class TestVerify:
    def test_wn_presentation(self, capsys):
        code, doc, _ = run_json(
            capsys, "verify", "--target", "wn-presentation", "--base", "Z",
            "--pi", "2", "--len", "2",
        )
        assert code == 0
        assert [c["name"] for c in doc["claims"]] == [
            "x1*x1 = pi^1*x1",
            "x1*x2 = pi^1*x2",
            "x2*x2 = pi^2*x2",
        ]

    def test_descent_single_algebra(self, capsys):
        code, doc, _ = run_json(
            capsys, "verify", "--target", "descent", "--base", "Z", "--pi", "2",
            "--len", "1", "--alg", "Z/4", "--j", "1",
        )
        assert code == 0
        claims = doc["claims"]
        assert all("paper_ref" in c for c in claims)
        assert all(not c["failures"] for c in claims)
        assert any(c["claim_id"] == "kernel-shape" for c in claims)

    def test_descent_battery_small(self, capsys):
        code, doc, _ = run_json(
            capsys, "verify", "--target", "descent-battery",
            "--max-n", "1", "--max-j", "0",
        )
        assert code == 0
        assert all(not c["failures"] for c in doc["claims"])


class TestSelftest:
    def test_ghost_suite_passes(self, capsys):
        code, doc, _ = run_json(
            capsys, "selftest", "--suite", "ghost", "--size", "small",
            "--seed", "7",
        )
        assert code == 0
        assert all(c["ok"] for c in doc["claims"])

    def test_unknown_suite_exit_2(self, capsys):
        code, _, err = run(capsys, "selftest", "--suite", "banana")
        assert code == 2 and "unknown selftest suite" in err

    def test_byte_identical_reruns(self, capsys):
        args = ("selftest", "--suite", "teichmuller", "--size", "small", "--seed", "3")
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_claims_sorted_and_annotated(self, capsys):
        code, doc, _ = run_json(
            capsys, "selftest", "--suite", "verschiebung", "--seed", "1",
        )
        assert code == 0
        ids = [c["claim_id"] for c in doc["claims"]]
        assert ids == sorted(ids)
        assert all(c["paper_ref"] for c in doc["claims"])
        assert all(c["suite"] == "verschiebung" for c in doc["claims"])

    def test_text_format(self, capsys):
        code, out, _ = run(
            capsys, "selftest", "--suite", "presentations", "--format", "text",
        )
        assert code == 0
        assert out.splitlines()[-1].endswith("claims pass")

    def test_registry_covers_every_suite(self):
        for suite in SUITE_NAMES:
            if suite == "all":
                continue
            claims, ok = run_selftest(suite, "small", seed=11, workers=2)
            assert claims and ok, suite
