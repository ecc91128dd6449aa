"""Command-line front end for truncated Witt vector arithmetic.

`witt` evaluates expressions over a chosen context, emits structural
polynomials and presentations, checks big-Witt ghost data, runs the finite
verifiers, and drives the selftest suites.

Exit codes: 0 success, 1 failed verification claims, 2 expression or flag
parse errors, 3 context errors, 4 arithmetic errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from wittvec.delta import canonical_base_spec, coaction, lift_spec_from_json
from wittvec.descent import (
    alpha_hom_report,
    equalizer_report,
    ghost_congruence_report,
    kernel_report,
    run_battery,
    v_sequence_report,
)
from wittvec.errors import (
    ArithmeticFailure,
    ContextError,
    ContextMismatch,
    ExprSyntaxError,
    SynthesisBudgetExceeded,
)
from wittvec.multi import (
    big_ghost_congruences_ok,
    classical_big_ghost,
    truncation_set_context,
)
from wittvec.poly import polyring
from wittvec.present import (
    RingPresentation,
    lambda_presentation,
    verify_wn_presentation,
)
from wittvec.rings import (
    ZZ,
    Algebra,
    FpPolyQuotient,
    FpPolynomials,
    FpT,
    GF,
    PrimeField,
    Zmod,
    base_from_text,
    base_to_text,
    parse_element,
)
from wittvec.selftest import report_json, run_selftest
from wittvec.witt import (
    GhostVector,
    WittContext,
    WittVector,
    frobenius,
    ghost,
    ghost_component,
    negate,
    structural_polys,
    teichmuller,
    unghost,
    verschiebung,
)

_OP_LETTER = {"sum": "S", "product": "P", "negation": "N", "frobenius": "F"}


# ---------------------------------------------------------------------------
# flag parsing: base, uniformizer, coefficient algebra
# ---------------------------------------------------------------------------

def alg_from_text(base, text):
    """Parse an algebra name: Z, Z/m, Fp, Fp[t], or Fp[t]/(g)."""
    text = (text or "").strip() or base_to_text(base)
    try:
        if text == "Z":
            ring = ZZ
        elif m := re.fullmatch(r"Z/(\d+)", text):
            ring = Zmod(int(m.group(1)))
        elif m := re.fullmatch(r"F(\d+)", text):
            ring = GF(int(m.group(1)))
        elif m := re.fullmatch(r"F(\d+)\[t\]", text):
            ring = FpT(int(m.group(1)))
        elif m := re.fullmatch(r"F(\d+)\[t\]/\((.+)\)", text):
            poly = FpT(int(m.group(1)))
            ring = FpPolyQuotient(poly, parse_element(poly, m.group(2)))
        else:
            raise ExprSyntaxError(
                f"unknown algebra {text!r} (expected Z, Z/m, Fp, Fp[t], or Fp[t]/(g))"
            )
    except ValueError as e:
        raise ExprSyntaxError(f"bad algebra {text!r}: {e}") from None
    if isinstance(base, FpPolynomials) and isinstance(ring, PrimeField):
        if ring.p != base.p:
            raise ContextMismatch(f"{text} is not an algebra over {base}")
        return Algebra(base, ring, t_image=ring.zero)
    return Algebra(base, ring)


def _load_context(args):
    base = base_from_text(args.base)
    pi = parse_element(base, args.pi)
    WittContext(base, pi, 0)  # validates that pi is prime
    alg = alg_from_text(base, args.alg)
    alg_text = (args.alg or "").strip() or base_to_text(base)
    return base, pi, alg, alg_text


# ---------------------------------------------------------------------------
# expression grammar
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_GH_RE = re.compile(r"(r?)gh_(\d+)")


def _match_bracket(text, i, open_ch, close_ch):
    depth = 0
    for j in range(i, len(text)):
        if text[j] == open_ch:
            depth += 1
        elif text[j] == close_ch:
            depth -= 1
            if depth == 0:
                return j
    raise ExprSyntaxError(f"unbalanced {open_ch!r} at position {i}")


def _split_top(inner):
    parts, depth, cur = [], 0, []
    for ch in inner:
        if ch in "([<":
            depth += 1
        elif ch in ")]>":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _has_top_comma(inner):
    depth = 0
    for ch in inner:
        if ch in "([<":
            depth += 1
        elif ch in ")]>":
            depth -= 1
        elif ch == "," and depth == 0:
            return True
    return False


def _literal_parts(text, i, span_end, allow_trailing):
    parts = [p.strip() for p in _split_top(text[i + 1 : span_end])]
    if allow_trailing and len(parts) > 1 and parts[-1] == "":
        parts = parts[:-1]  # single-component literal "(a,)"
    if not parts or any(p == "" for p in parts):
        raise ExprSyntaxError(f"empty component in literal at position {i}")
    return parts


def _tokenize_expr(text):
    toks, i, n = [], 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*":
            toks.append(("op", ch))
            i += 1
        elif ch == "(":
            j = _match_bracket(text, i, "(", ")")
            if _has_top_comma(text[i + 1 : j]):
                toks.append(("witt", _literal_parts(text, i, j, True)))
                i = j + 1
            else:
                toks.append(("lparen", None))
                i += 1
        elif ch == ")":
            toks.append(("rparen", None))
            i += 1
        elif ch == "<":
            j = _match_bracket(text, i, "<", ">")
            toks.append(("ghost", _literal_parts(text, i, j, False)))
            i = j + 1
        elif ch == "[":
            j = _match_bracket(text, i, "[", "]")
            word = text[i + 1 : j].strip()
            if not word:
                raise ExprSyntaxError(f"empty Teichmuller literal at position {i}")
            toks.append(("teich", word))
            i = j + 1
        elif m := _NAME_RE.match(text, i):
            toks.append(("name", m.group()))
            i = m.end()
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r} at position {i}")
    return toks


class _Evaluator:
    """Recursive-descent evaluation over tokenized Witt expressions.

    Values are tagged: ("w", WittVector), ("g", (GhostVector, WittVector)),
    or ("s", (scalar, ctx)) from ghost-component operators.
    """

    def __init__(self, text, base, pi, alg, length):
        self.toks = _tokenize_expr(text)
        self.i = 0
        self.base, self.pi, self.alg = base, pi, alg
        self.length = length

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def run(self):
        if not self.toks:
            raise ExprSyntaxError("empty expression")
        v = self.expr()
        if self.peek()[0] is not None:
            raise ExprSyntaxError(f"trailing input at token {self.i}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = self._add(v, self._neg(w) if op == "-" else w)
        return v

    def term(self):
        v = self.unary()
        while self.peek() == ("op", "*"):
            self.take()
            v = self._mul(v, self.unary())
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return self._neg(self.unary())
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.prefix()

    def prefix(self):
        kind, val = self.peek()
        if kind == "name":
            self.take()
            return self._apply(val, self.prefix())
        return self.atom()

    def atom(self):
        kind, val = self.take()
        if kind == "witt":
            ctx = WittContext(self.base, self.pi, len(val) - 1)
            comps = tuple(parse_element(self.alg.ring, p) for p in val)
            return ("w", WittVector(ctx, self.alg, comps))
        if kind == "ghost":
            ctx = WittContext(self.base, self.pi, len(val) - 1)
            entries = tuple(parse_element(self.alg.ring, p) for p in val)
            return ("w", unghost(GhostVector(ctx, self.alg, entries)))
        if kind == "teich":
            if self.length is None:
                raise ContextMismatch("--len is required for Teichmuller literals")
            ctx = WittContext(self.base, self.pi, self.length)
            return ("w", teichmuller(parse_element(self.alg.ring, val), ctx, self.alg))
        if kind == "lparen":
            v = self.expr()
            if self.take()[0] != "rparen":
                raise ExprSyntaxError("expected )")
            return v
        raise ExprSyntaxError(f"unexpected token at position {self.i - 1}")

    def _need_vector(self, v, opname):
        if v[0] != "w":
            raise ContextMismatch(f"operator {opname} needs a Witt vector operand")
        return v[1]

    def _apply(self, name, v):
        if name == "V":
            return ("w", verschiebung(self._need_vector(v, name)))
        if name == "F":
            return ("w", frobenius(self._need_vector(v, name)))
        if name == "gh":
            w = self._need_vector(v, name)
            return ("g", (ghost(w), w))
        if m := _GH_RE.fullmatch(name):
            w = self._need_vector(v, name)
            value = ghost_component(w, int(m.group(2)), reduced=bool(m.group(1)))
            return ("s", (value, w.ctx))
        raise ExprSyntaxError(f"unknown operator {name!r}")

    def _add(self, a, b):
        if a[0] == "w" and b[0] == "w":
            return ("w", a[1] + b[1])
        if a[0] == "s" and b[0] == "s":
            return ("s", (self.alg.ring.add(a[1][0], b[1][0]), a[1][1]))
        raise ContextMismatch("cannot mix ghost results with vector arithmetic")

    def _mul(self, a, b):
        if a[0] == "w" and b[0] == "w":
            return ("w", a[1] * b[1])
        if a[0] == "s" and b[0] == "s":
            return ("s", (self.alg.ring.mul(a[1][0], b[1][0]), a[1][1]))
        raise ContextMismatch("cannot mix ghost results with vector arithmetic")

    def _neg(self, a):
        if a[0] == "w":
            return ("w", negate(a[1]))
        if a[0] == "s":
            return ("s", (self.alg.ring.neg(a[1][0]), a[1][1]))
        raise ContextMismatch("cannot mix ghost results with vector arithmetic")


# ---------------------------------------------------------------------------
# result documents
# ---------------------------------------------------------------------------

def _note(n):
    return (
        f"normalized length n = {n}; this W_{n} is traditionally denoted "
        f"W_{n + 1} (components are indexed 0..{n})"
    )


def _context_doc(ctx, alg_text):
    return {
        "base": base_to_text(ctx.base),
        "pi": ctx.base.show(ctx.pi),
        "len": str(ctx.n),
        "traditional_len": str(ctx.n + 1),
        "alg": alg_text,
    }


def _print_doc(doc, fmt, text_lines):
    if fmt == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _emit_value(value, alg_text, fmt, force_ghost=False):
    kind, payload = value
    if kind == "g":
        gvec, w = payload
        force_ghost, vec = True, w
        gentries = gvec.entries
    else:
        vec = payload
        gentries = None
    ring = vec.alg.ring
    doc = {
        "context": _context_doc(vec.ctx, alg_text),
        "components": [ring.show(c) for c in vec.components],
        "convention_note": _note(vec.ctx.n),
    }
    # a single-component vector keeps its trailing comma so the text output
    # re-parses as a literal rather than a grouping
    body = ",".join(doc["components"]) + ("," if len(doc["components"]) == 1 else "")
    lines = ["(" + body + ")"]
    if force_ghost or vec.alg.torsion_free:
        if gentries is None:
            gentries = ghost(vec).entries
        doc["ghost"] = [ring.show(e) for e in gentries]
        lines.append("<" + ",".join(doc["ghost"]) + ">")
    _print_doc(doc, fmt, lines)
    return 0


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args):
    base, pi, alg, alg_text = _load_context(args)
    value = _Evaluator(args.expr, base, pi, alg, args.length).run()
    if value[0] == "s":
        scalar, ctx = value[1]
        doc = {
            "context": _context_doc(ctx, alg_text),
            "value": alg.ring.show(scalar),
            "convention_note": _note(ctx.n),
        }
        _print_doc(doc, args.format, [alg.ring.show(scalar)])
        return 0
    return _emit_value(value, alg_text, args.format)


def cmd_ghost(args):
    base, pi, alg, alg_text = _load_context(args)
    value = _Evaluator(args.expr, base, pi, alg, args.length).run()
    if value[0] == "s":
        raise ContextMismatch("ghost output needs a Witt vector expression")
    return _emit_value(value, alg_text, args.format, force_ghost=True)


def cmd_unghost(args):
    base, pi, alg, alg_text = _load_context(args)
    parts = [p.strip() for p in _split_top(args.entries)]
    if not parts or any(p == "" for p in parts):
        raise ExprSyntaxError("--entries wants a comma-separated ghost list")
    ctx = WittContext(base, pi, len(parts) - 1)
    entries = tuple(parse_element(alg.ring, p) for p in parts)
    w = unghost(GhostVector(ctx, alg, entries))
    return _emit_value(("w", w), alg_text, args.format)


def cmd_structpoly(args):
    base, pi, _alg, _alg_text = _load_context(args)
    if args.length is None:
        raise ContextMismatch("--len is required for structpoly")
    ctx = WittContext(base, pi, args.length)
    sps = structural_polys(ctx, args.op)
    letter = _OP_LETTER[args.op]
    shown = [sps.ring.show(s) for s in sps.polys]
    doc = {
        "op": args.op,
        "context": _context_doc(ctx, base_to_text(base)),
        "variables": list(sps.ring.variables),
        "components": shown,
        "convention_note": _note(ctx.n),
    }
    lines = [f"{letter}_{i} = {s}" for i, s in enumerate(shown)]
    _print_doc(doc, args.format, lines)
    return 0


def cmd_present(args):
    base, pi, _alg, _alg_text = _load_context(args)
    if args.length is None:
        raise ContextMismatch("--len is required for present")
    ctx = WittContext(base, pi, args.length)
    variables = tuple(v.strip() for v in args.vars.split(","))
    if any(not v for v in variables):
        raise ExprSyntaxError("--vars wants a comma-separated name list")
    src = polyring(base, variables)
    relations = tuple(src.parse(r) for r in args.rel)
    pres = lambda_presentation(
        RingPresentation(base, variables, relations), ctx, args.style
    )
    doc = pres.to_dict()
    doc["style"] = pres.style
    doc["context"] = _context_doc(ctx, base_to_text(base))
    doc["convention_note"] = _note(ctx.n)
    _print_doc(doc, args.format, pres.text().splitlines())
    return 0


def cmd_coaction(args):
    base, pi, _alg, _alg_text = _load_context(args)
    if args.length is None:
        raise ContextMismatch("--len is required for coaction")
    if args.spec is None:
        spec = canonical_base_spec(base, (pi,))
    else:
        text = args.spec
        if text.startswith("@"):
            with open(text[1:], "r", encoding="utf-8") as fh:
                text = fh.read()
        spec = lift_spec_from_json(json.loads(text))
    ring = spec.alg.ring
    a = ring.parse(args.element)
    w = coaction(spec, a, args.length)
    if hasattr(w, "components"):
        return _emit_value(("w", w), str(ring), args.format)
    doc = {
        "primes": [str(p) for p in spec.primes],
        "value": w.show(),
        "convention_note": _note(args.length),
    }
    _print_doc(doc, args.format, [w.show()])
    return 0


def cmd_bigwitt(args):
    T = tuple(int(d) for d in args.set.split(","))
    family, index = truncation_set_context(T)
    doc = {
        "set": [str(d) for d in sorted(T)],
        "primes": [str(p) for p in family.primes],
        "index": [str(i) for i in index],
    }
    lines = [
        f"truncation set {{{', '.join(doc['set'])}}}",
        f"primes {{{', '.join(doc['primes'])}}} with multi-index ({', '.join(doc['index'])})",
    ]
    if args.components:
        comps = {}
        for piece in args.components.split(","):
            d, _, v = piece.partition(":")
            if not _:
                raise ExprSyntaxError("--components entries look like d:value")
            comps[int(d.strip())] = int(v.strip())
        if sorted(comps) != sorted(T):
            raise ContextMismatch("--components must cover the truncation set")
        entries = classical_big_ghost(comps, T)
        ok = big_ghost_congruences_ok(entries)
        doc["ghost"] = [
            {"index": str(m), "value": str(entries[m])} for m in sorted(entries)
        ]
        doc["congruences_ok"] = ok
        lines.append(
            "ghost " + ", ".join(f"w_{m} = {entries[m]}" for m in sorted(entries))
        )
        lines.append(f"congruences_ok {str(ok).lower()}")
    _print_doc(doc, args.format, lines)
    return 0


def _claim_ok(c):
    return c["ok"] if "ok" in c else not c.get("failures")


def _emit_claim_report(claims, fmt):
    doc = {"claims": claims}
    ok = all(_claim_ok(c) for c in claims)
    lines = []
    for c in claims:
        name = c.get("claim_id", c.get("name", "?"))
        head = f"{'PASS' if _claim_ok(c) else 'FAIL'} {name}"
        where = c.get("report", "")
        if where:
            head += f" [{where}]"
        detail = c.get("detail") or (c.get("failures") or [""])[0]
        lines.append(head + (f": {detail}" if detail and not _claim_ok(c) else ""))
    lines.append(f"{'all claims pass' if ok else 'FAILURES present'}")
    _print_doc(doc, fmt, lines)
    return 0 if ok else 1


def cmd_verify(args):
    if args.target == "descent-battery":
        claims = []
        for label, rep in run_battery(args.max_n, args.max_j):
            for c in rep.claims:
                d = c.to_dict()
                d["report"] = label
                claims.append(d)
        return _emit_claim_report(claims, args.format)
    if args.target == "descent":
        base, pi, alg, _alg_text = _load_context(args)
        if args.length is None:
            raise ContextMismatch("--len is required for verify --target descent")
        ctx = WittContext(base, pi, args.length)
        named = []
        if ctx.n >= 1:
            named = [
                ("kernel", kernel_report(alg, ctx)),
                ("equalizer", equalizer_report(alg, ctx)),
                ("alpha-hom", alpha_hom_report(alg, ctx)),
                ("ghost-congruence", ghost_congruence_report(alg, ctx)),
            ]
        for j in range(args.j + 1):
            named.append((f"v-sequence j={j}", v_sequence_report(alg, ctx, j)))
        claims = []
        for label, rep in named:
            for c in rep.claims:
                d = c.to_dict()
                d["report"] = label
                claims.append(d)
        return _emit_claim_report(claims, args.format)
    if args.target == "wn-presentation":
        base, pi, _alg, _alg_text = _load_context(args)
        if args.length is None:
            raise ContextMismatch("--len is required for verify --target wn-presentation")
        rep = verify_wn_presentation(base, pi, args.length)
        return _emit_claim_report([c.to_dict() for c in rep.claims], args.format)
    raise ExprSyntaxError(f"unknown verify target {args.target!r}")


def cmd_selftest(args):
    claims, ok = run_selftest(args.suite, args.size, args.seed, args.workers)
    if args.format == "text":
        for c in claims:
            print(c.line())
        print(f"{sum(c.ok for c in claims)}/{len(claims)} claims pass")
    else:
        sys.stdout.write(report_json(claims))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def build_parser():
    top = argparse.ArgumentParser(
        prog="witt", description="exact truncated Witt vector calculator"
    )
    sub = top.add_subparsers(dest="subcommand", required=True)

    def ctx_flags(p, fmt_default="text"):
        p.add_argument("--base", default="Z", help="base ring: Z or Fp[t]:p")
        p.add_argument("--pi", default="2", help="uniformizer, an element of the base")
        p.add_argument(
            "--len",
            dest="length",
            type=int,
            default=None,
            help="truncation length n (components 0..n)",
        )
        p.add_argument(
            "--alg", default=None, help="coefficient algebra: Z, Z/m, Fp, Fp[t], Fp[t]/(g)"
        )
        p.add_argument("--format", choices=("text", "json"), default=fmt_default)

    p = sub.add_parser("eval", help="evaluate a Witt expression")
    ctx_flags(p)
    p.add_argument("--expr", required=True, help="expression over (..) <..> [..] + - * V F gh_i rgh_i")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ghost", help="evaluate and print ghost entries")
    ctx_flags(p)
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_ghost)

    p = sub.add_parser("unghost", help="solve components from ghost entries")
    ctx_flags(p)
    p.add_argument("--entries", required=True, help="comma-separated ghost entries")
    p.set_defaults(func=cmd_unghost)

    p = sub.add_parser("structpoly", help="emit structural polynomials")
    ctx_flags(p)
    p.add_argument("--op", choices=tuple(_OP_LETTER), required=True)
    p.set_defaults(func=cmd_structpoly)

    p = sub.add_parser("present", help="theta or delta presentation of a quotient")
    ctx_flags(p)
    p.add_argument("--vars", required=True, help="comma-separated variable names")
    p.add_argument("--rel", action="append", default=[], help="relation polynomial (repeatable)")
    p.add_argument("--style", choices=("theta", "delta"), default="theta")
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("coaction", help="canonical coaction of a Frobenius lift family")
    ctx_flags(p)
    p.add_argument("--element", required=True, help="element of the lift's ring")
    p.add_argument("--spec", default=None, help="lift family as JSON text or @file")
    p.set_defaults(func=cmd_coaction)

    p = sub.add_parser("bigwitt", help="truncation sets and classical ghost data")
    p.add_argument("--set", required=True, help="comma-separated divisor-closed set")
    p.add_argument("--components", default=None, help="d:value list over the set")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_bigwitt)

    p = sub.add_parser("verify", help="run the finite verifiers")
    ctx_flags(p)
    p.add_argument(
        "--target",
        choices=("descent", "descent-battery", "wn-presentation"),
        required=True,
    )
    p.add_argument("--j", type=int, default=1, help="max Verschiebung twist for descent")
    p.add_argument("--max-n", type=int, default=2, help="battery length bound")
    p.add_argument("--max-j", type=int, default=2, help="battery twist bound")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="run a deterministic claim suite")
    p.add_argument("--suite", default="all")
    p.add_argument("--size", choices=("small", "medium"), default="small")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.set_defaults(func=cmd_selftest)

    return top


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ExprSyntaxError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ContextError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ArithmeticFailure, SynthesisBudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
