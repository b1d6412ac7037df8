"""Command line front end: ``realterm classify|link|companion|verify``."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import __version__
from .errors import (GradingError, NotCDV, NotTerminalQuotient, ParseError, RealTermError,
                     TruncationInconclusive, UnknownVariable)
from .jet import DEFAULT_ORDER, VARS, Jet

SCHEMA_VERSION = "v1"

EXIT_OK, EXIT_ERROR, EXIT_NOT_TERMINAL, EXIT_INCONCLUSIVE, EXIT_PARSE = 0, 1, 2, 3, 4


# --------------------------------------------------------------------------
# parsing


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg, pos=None, cls=ParseError):
        line, col = self.where(pos)
        return cls(msg, line, col)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        if self.pos >= len(self.text):
            return ""
        if self.text.startswith("**", self.pos):
            return "^"
        return self.text[self.pos]

    def take(self):
        ch = self.peek()
        self.pos += 2 if self.text.startswith("**", self.pos) else 1
        return ch


class _Parser:
    """expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
    unary := ('+'|'-') unary | power ; power := atom ('^' integer)? ;
    atom := number | variable | '(' expr ')'"""

    def __init__(self, text: str, order: int):
        self.lx = _Lexer(text)
        self.order = order

    def parse(self) -> Jet:
        e = self.expr()
        if self.lx.peek():
            raise self.lx.error(f"unexpected {self.lx.peek()!r}")
        return e

    def expr(self):
        v = self.term()
        while self.lx.peek() in ("+", "-"):
            op = self.lx.take()
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.unary()
        while self.lx.peek() in ("*", "/"):
            op = self.lx.take()
            start = self.lx.pos
            rhs = self.unary()
            if op == "*":
                v = v * rhs
            else:
                if rhs.degree() > 0 or rhs.is_zero():
                    raise self.lx.error("division only by nonzero constants", start)
                v = v / rhs.constant_term()
        return v

    def unary(self):
        if self.lx.peek() in ("+", "-"):
            op = self.lx.take()
            v = self.unary()
            return -v if op == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        if self.lx.peek() == "^":
            self.lx.take()
            self.lx.skip()
            start = self.lx.pos
            digits = self._digits()
            if not digits:
                raise self.lx.error("expected a nonnegative integer exponent", start)
            return base ** int(digits)
        return base

    def _digits(self):
        start = self.lx.pos
        while self.lx.pos < len(self.lx.text) and self.lx.text[self.lx.pos].isdigit():
            self.lx.pos += 1
        return self.lx.text[start:self.lx.pos]

    def atom(self):
        ch = self.lx.peek()
        start = self.lx.pos
        if ch == "(":
            self.lx.take()
            v = self.expr()
            if self.lx.peek() != ")":
                raise self.lx.error("expected ')'")
            self.lx.take()
            return v
        if ch.isdigit():
            digits = self._digits()
            return Jet.constant(Fraction(int(digits)), self.order)
        if ch.isalpha():
            while self.lx.pos < len(self.lx.text) and (self.lx.text[self.lx.pos].isalnum()
                                                       or self.lx.text[self.lx.pos] == "_"):
                self.lx.pos += 1
            name = self.lx.text[start:self.lx.pos]
            if name not in VARS:
                raise self.lx.error(f"unknown variable {name!r}", start, UnknownVariable)
            return Jet.var(name, self.order)
        if not ch:
            raise self.lx.error("unexpected end of input")
        raise self.lx.error(f"unexpected {ch!r}")


def parse_polynomial(text: str, order: int = DEFAULT_ORDER) -> Jet:
    """Parse a polynomial in x, y, z, t; the jet order grows to the polynomial's degree."""
    # a first pass at a large order keeps every term of the input
    F = _Parser(text, 10 ** 6).parse()
    return F.with_order(max(order, F.degree(), 1))


@dataclass
class InputSpec:
    text: str
    polynomial: Jet
    action: object = None
    truncation: int = DEFAULT_ORDER
    epsilon: Fraction = Fraction(1, 2)
    resolution: int = 64
    numeric: bool = False


def parse_input(text: str, truncation: int = DEFAULT_ORDER, quotient: str | None = None) -> InputSpec:
    """Polynomial with an optional trailing ``quotient: 1/n(a,b,c,d)`` clause."""
    from .quotient import GradedAction
    poly_text, action = text, None
    idx = text.find("quotient:")
    if idx >= 0:
        poly_text = text[:idx]
        clause = text[idx + len("quotient:"):]
        try:
            action = GradedAction.parse(clause)
        except ValueError as exc:
            lx = _Lexer(text)
            raise lx.error(f"bad quotient clause: {exc}", idx)
    if quotient is not None:
        if action is not None:
            raise ParseError("quotient given twice", 1, 1)
        try:
            action = GradedAction.parse(quotient)
        except ValueError as exc:
            raise ParseError(str(exc), 1, 1)
    F = parse_polynomial(poly_text, truncation)
    return InputSpec(text.strip(), F, action, truncation)


# --------------------------------------------------------------------------
# pipeline


def _log_digest(log) -> dict:
    desc = [st.describe() for st in log]
    h = hashlib.sha256("\n".join(desc).encode()).hexdigest()[:16]
    return {"steps": len(desc), "sha256_16": h, "notes": [st.note for st in log if st.note]}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (NotCDV, NotTerminalQuotient, GradingError)):
        return EXIT_NOT_TERMINAL
    if isinstance(exc, TruncationInconclusive):
        return EXIT_INCONCLUSIVE
    return EXIT_ERROR


def run_pipeline(spec: InputSpec, command: str = "link", mesh_out: str | None = None) -> tuple:
    """Run the requested stages; returns ``(report dict, exit code)``."""
    from .link_topology import assemble_link, cone_weights
    from .normal_form import classify
    from .quotient import companion, not_isolated_check, quotient_link, validate_action

    report = {"version": SCHEMA_VERSION, "tool": __version__, "command": command,
              "input": spec.text, "polynomial": spec.polynomial.to_str(),
              "quotient": str(spec.action) if spec.action else None, "diagnostics": {}}
    code = EXIT_OK
    try:
        cls = classify(spec.polynomial)
        report["classification"] = cls.to_dict()
        report["transform_log"] = _log_digest(cls.log)
        report["diagnostics"]["truncation_order"] = cls.order
        if cls.branch is not None:
            report["diagnostics"]["stability"] = [list(h) for h in cls.branch.history]
        if spec.action is not None:
            qc = validate_action(spec.polynomial, spec.action)
            report["quotient_class"] = {"row": qc.row, "action": str(qc.action), "grade": qc.grade,
                                        "conditions": list(qc.conditions)}
            if command == "companion" or qc.action.n % 2 == 0:
                if qc.action.n % 2 == 0:
                    pair = companion(spec.polynomial, qc.action)
                    report["companion"] = {"polynomial": pair.Fc.to_str(), "grade": pair.d}
        elif command == "companion":
            raise ParseError("companion needs a quotient clause", 1, 1)
        if command in ("link", "verify"):
            if spec.action is not None:
                lr = quotient_link(spec.polynomial, spec.action, resolution=spec.resolution)
                report["diagnostics"]["not_isolated_check"] = not_isolated_check(qc, lr)
            else:
                lr = assemble_link(cls)
            report["link"] = lr.to_dict()
            if not lr.exact:
                code = EXIT_INCONCLUSIVE
        if command == "verify" and spec.action is None:
            from .numeric_oracle import GridConfig, sample_link, write_off
            weights = None if cls.family in ("cA0", "cA1", "cA") else cone_weights(cls.family, cls.params)
            cfg = GridConfig(resolution=spec.resolution, eps=spec.epsilon, weights=weights)
            sampled = sample_link(spec.polynomial, cfg)
            oracle = sampled.summary()
            if lr.exact:
                oracle["agrees"] = (sampled.n_components == len(lr.descriptor)
                                    and sampled.chis == lr.descriptor.euler())
                if not oracle["agrees"]:
                    oracle["discrepancy"] = "flagged for review; the symbolic result stands"
            report["oracle"] = oracle
            if mesh_out:
                write_off(sampled, mesh_out)
    except RealTermError as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        code = exit_code_for(exc)
    return report, code


# --------------------------------------------------------------------------
# output


def format_text(report: dict) -> str:
    lines = [f"input: {report['input']}"]
    if "error" in report:
        lines.append(f"error [{report['error']['code']}]: {report['error']['message']}")
    c = report.get("classification")
    if c:
        lines.append(f"family: {c['family']}  n={c['n']}  case={c['case']}")
        lines.append(f"witness: {c['witness']}")
        if c.get("quadratic_signature"):
            lines.append(f"quadratic signature: {tuple(c['quadratic_signature'])}")
    q = report.get("quotient_class")
    if q:
        lines.append(f"quotient row: {q['row']} {q['action']} (grade {q['grade']})")
    if report.get("companion"):
        lines.append(f"companion: {report['companion']['polynomial']}")
    lk = report.get("link")
    if lk:
        if lk["status"] == "exact":
            lines.append(f"link: {lk['link']['name']}  [{lk['method']}: {lk['provenance']}]")
        else:
            red = lk.get("reduction")
            lines.append("link: partial")
            if red:
                lines.append(f"  tangent cone: {red['cone']}  weights {tuple(red['weights'])}")
                for loc in red["singular_loci"]:
                    lines.append(f"  singular locus: {loc}")
        for n in lk.get("notes", []):
            lines.append(f"  note: {n}")
    o = report.get("oracle")
    if o:
        lines.append(f"oracle: {o['components']} component(s), euler {o['euler']} at res {o['resolution']}"
                     + (f", agrees={o['agrees']}" if "agrees" in o else ""))
    return "\n".join(lines)


def _process(args_tuple):
    text, opts = args_tuple
    try:
        spec = parse_input(text, opts["truncation"], opts["quotient"])
    except ParseError as exc:
        return ({"version": SCHEMA_VERSION, "input": text.strip(),
                 "error": {"code": exc.code, "message": str(exc)}}, EXIT_PARSE)
    spec = replace(spec, epsilon=opts["epsilon"], resolution=opts["resolution"])
    return run_pipeline(spec, opts["command"], opts.get("mesh_out"))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="realterm", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, hlp in (("classify", "family, subtype and normal form"),
                      ("link", "topology of the real link"),
                      ("companion", "companion equation of a graded input"),
                      ("verify", "link plus numeric oracle comparison")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("polynomial", nargs="?", help="e.g. 'x^2+y^2-z^2-t^2'")
        sp.add_argument("--quotient", help="grading 1/n(a,b,c,d)")
        sp.add_argument("--truncation", type=int, default=DEFAULT_ORDER)
        sp.add_argument("--epsilon", type=Fraction, default=Fraction(1, 2))
        sp.add_argument("--resolution", type=int, default=64)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--batch", help="file with one input per line")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--mesh-out", help="write the sampled mesh (4OFF)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = {"command": args.command, "truncation": args.truncation, "quotient": args.quotient,
            "epsilon": args.epsilon, "resolution": args.resolution, "mesh_out": args.mesh_out}
    if args.batch:
        with open(args.batch) as fh:
            texts = [ln for ln in fh.read().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    elif args.polynomial is not None:
        texts = [args.polynomial]
    else:
        print("error: give a polynomial or --batch FILE", file=sys.stderr)
        return EXIT_PARSE
    jobs = [(t, opts) for t in texts]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_process, jobs))
    else:
        results = [_process(j) for j in jobs]
    for report, _ in results:
        if args.json:
            print(json.dumps(report, sort_keys=True))
        else:
            print(format_text(report))
            if len(results) > 1:
                print()
    return max(code for _, code in results)


if __name__ == "__main__":
    sys.exit(main())
