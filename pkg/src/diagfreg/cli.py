"""Command-line front end: ``diagfreg --input session.txt --command ustp``.

Each run reads one session file, runs one command and writes a report as
JSON lines: one record per sub-result followed by a summary object.  The
exit code is 0 for pass, 1 for fail, 2 for inconclusive and 3 for errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from typing import Callable, Optional

from diagfreg import __version__
from diagfreg.cartier import DEFAULT_CAP, CapExceeded, cartier_apply, compatibility_witness, frobenius_trace
from diagfreg.diagonal import (
    DEFAULT_UNKNOWN_CAP,
    BasisExponent,
    Tensor,
    dn_regularity_witness,
    lala_check,
    lift_basis_image,
    psi_eval,
    verify_lift,
    verify_witness,
)
from diagfreg.polynomial import format_tensor
from diagfreg.segre import SegreContext
from diagfreg.session import SessionError, SessionSpec, parse_session
from diagfreg.testideal import (
    RationalExponent,
    briancon_skoda_check,
    subadditivity_check,
    test_ideal_bms,
)
from diagfreg.ustp import PrimeSpec, QuotientRingSpec, symbolic_power, ustp_containment_report

EXIT_CODES = {"pass": 0, "fail": 1, "inconclusive": 2, "error": 3}


class Report:
    """Structured result of one command."""

    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.records: list = []
        self.caveats: list = []
        self.verdict = "inconclusive"
        self.counterexamples: list = []
        self.started = time.perf_counter()
        self.seconds = 0.0

    def record(self, **fields):
        self.records.append({"type": "record", **fields})

    def summary(self) -> dict:
        return {
            "type": "summary",
            "command": self.command,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "counterexamples": self.counterexamples,
            "caveats": self.caveats,
            "seconds": round(self.seconds, 6),
            "version": __version__,
        }

    def lines(self) -> list:
        return [json.dumps(r, ensure_ascii=False, sort_keys=True) for r in self.records + [self.summary()]]


def _verdict(flag: Optional[bool]) -> str:
    return "inconclusive" if flag is None else ("pass" if flag else "fail")


def _segre(spec: SessionSpec, e: int = 1) -> SegreContext:
    if spec.segre is None:
        raise SessionError("this command needs a 'segre' declaration")
    return SegreContext(spec.segre[0], spec.segre[1], spec.p, e)


def _exponent(spec: SessionSpec, key: str, default) -> RationalExponent:
    try:
        return RationalExponent.of(spec.param(key, default))
    except (ValueError, ZeroDivisionError):
        raise SessionError(f"param {key} must be a nonnegative rational") from None


def cmd_trace_eval(spec, opts, rep):
    f = spec.poly_param("f")
    if f is None:
        raise SessionError("trace-eval needs 'param f = <polynomial>'")
    if spec.maps:
        m = spec.cartier_map(spec.param("map"))
        out = cartier_apply(m, f)
        rep.inputs["map"] = str(m)
    else:
        e = spec.int_param("e", 1)
        out = frobenius_trace(f, e)
        rep.inputs["map"] = f"Phi^{e}"
    rep.record(name="value", value=str(out))
    rep.verdict = "pass"


def cmd_lala_check(spec, opts, rep):
    ctx = _segre(spec, spec.int_param("e", 1))
    n = spec.int_param("n", 2)
    ten = Tensor(ctx.ring, n)
    text = spec.param("g")
    if text is None:
        raise SessionError("lala-check needs 'param g = <monomial in x0_1, ..., y{s}_{n}>'")
    g = ten.ring.parse(text)
    if not g.is_monomial():
        raise SessionError("param g must be a monomial")
    (exp,) = g.terms
    b = BasisExponent.from_exp(exp, ctx, n)
    ok = lala_check(b)
    img = lift_basis_image(b, ctx, spec.int_param("residual_factor"))
    rep.record(name="lala", value=ok)
    rep.record(name="psi", value=str(psi_eval(b, ctx)))
    rep.record(name="lift", value=format_tensor(img.value), case=img.case)
    rep.verdict = _verdict(ok)


def cmd_lift_verify(spec, opts, rep):
    ctx = _segre(spec, spec.int_param("e", 1))
    n = opts.n_max or spec.int_param("n", 2)
    D = opts.degree_bound if opts.degree_bound is not None else spec.int_param("degree_bound", 3)
    r = verify_lift(ctx, n, D, spec.int_param("residual_factor"), opts.cap)
    rep.record(name="basis", checked=r.basis_checked, cases=r.case_counts)
    rep.record(name="generator_images", checked=r.generators_checked, degree_bound=D)
    if r.counterexample:
        rep.counterexamples.append(r.counterexample)
    rep.verdict = _verdict(r.passed)


def cmd_dn_witness(spec, opts, rep):
    ctx = _segre(spec) if spec.segre else None
    f = spec.poly_param("f")
    if f is None:
        if ctx is None:
            raise SessionError("dn-witness needs 'param f = <polynomial>'")
        f = ctx.ring.parse("x0*y0")
    n = opts.n_max or spec.int_param("n", 2)
    e_max = opts.e_max or spec.int_param("e_max", 2)
    found = dn_regularity_witness(f, n, e_max, ctx, spec.int_param("unknown_cap", DEFAULT_UNKNOWN_CAP))
    rep.inputs.update(f=str(f), n=n, e_max=e_max)
    if found is None:
        rep.caveats.append(f"no witness with e <= {e_max} at the default degree bound; not a proof of absence")
        rep.verdict = "inconclusive"
        return
    e, w = found
    chk = verify_witness(w, f=f, ctx=ctx, cap=opts.cap)
    rep.record(name="witness", e=e, induced=str(w.induced), lift=str(w.lift), unknowns=w.unknowns, nullity=w.nullity)
    rep.record(name="reverification", compatible=chk.compatible, induces=chk.induces,
               restricts=chk.restricts, evaluates_to_one=chk.evaluates_to_one)
    rep.verdict = _verdict(chk.ok)


def cmd_compat_check(spec, opts, rep):
    m = spec.cartier_map(spec.param("map"))
    I = spec.ideal(spec.param("ideal"))
    bad = compatibility_witness(m, I, opts.cap)
    rep.inputs.update(map=str(m), ideal=[str(g) for g in I.generators])
    if bad is not None:
        rep.counterexamples.append({"element": str(bad[0]), "image": str(bad[1])})
    rep.verdict = _verdict(bad is None)


def cmd_testideal(spec, opts, rep):
    a = spec.ideal(spec.param("ideal"))
    t = _exponent(spec, "t", 1)
    e_max = opts.e_max or spec.int_param("e_max", 4)
    res = test_ideal_bms(a, t, e_max, opts.cap)
    for e, level in enumerate(res.chain, 1):
        rep.record(name="level", e=e, basis=[str(g) for g in level.basis])
    rep.record(name="test_ideal", t=str(t), basis=[str(g) for g in res.ideal.basis], stabilized_at_e=res.stabilized_at_e)
    rep.caveats.extend(res.flags)
    rep.verdict = "pass" if res.stabilized else "inconclusive"


def cmd_subadd_check(spec, opts, rep):
    a = spec.ideal(spec.param("ideal"))
    t = _exponent(spec, "t", 1)
    n = opts.n_max or spec.int_param("n", 2)
    e_max = opts.e_max or spec.int_param("e_max", 4)
    ok = subadditivity_check(a, t, n, e_max)
    rep.record(name="subadditivity", t=str(t), n=n, holds=ok)
    if ok is None:
        rep.caveats.append(f"a test-ideal chain did not stabilize by e = {e_max}")
    rep.verdict = _verdict(ok)


def cmd_bs_check(spec, opts, rep):
    q = spec.ideal(spec.param("ideal"))
    h = spec.int_param("h", len(q.generators))
    e_max = opts.e_max or spec.int_param("e_max", 4)
    ok = briancon_skoda_check(q, h, e_max)
    rep.record(name="briancon_skoda", h=h, holds=ok)
    if ok is None:
        rep.caveats.append(f"test-ideal chain did not stabilize by e = {e_max}")
    rep.verdict = _verdict(ok)


def _prime(spec: SessionSpec):
    quotient = QuotientRingSpec(spec.ring, spec.quotient)
    name = spec.param("prime", "P")
    P_ideal = spec.ideal(name)
    s = spec.poly_param("s")
    if s is None:
        raise SessionError("need 'param s = <saturating element>'")
    height = spec.int_param("height", 1)
    P = PrimeSpec(tuple(P_ideal.generators), height, s, spec.param("certificate", ""))
    return quotient, P


def cmd_symbolic(spec, opts, rep):
    quotient, P = _prime(spec)
    m = spec.int_param("m", 2)
    sym = symbolic_power(P, m, quotient)
    rep.record(name="symbolic_power", m=m, generators=[str(g) for g in sym.generators])
    rep.caveats.append(f"computed as (P^{m} + I : ({P.s})^∞); equality with the symbolic power rests on the saturating element")
    rep.verdict = "pass"


def cmd_ustp(spec, opts, rep):
    quotient, P = _prime(spec)
    n_max = opts.n_max or spec.int_param("n_max", 3)
    report = ustp_containment_report(quotient, P, spec.int_param("h", 2), n_max, spec.int_param("oracle_degree"))
    for e in report.entries:
        rep.record(name="containment", n=e.n, verdict=e.verdict, symbolic_generators=e.symbolic_generators,
                   ordinary_generators=e.ordinary_generators, oracle_confirmed=e.oracle_confirmed,
                   seconds=round(e.seconds, 6))
        if e.counterexample:
            rep.counterexamples.append({"n": e.n, "element": e.counterexample})
    rep.caveats.extend(report.caveats)
    rep.verdict = report.verdict


COMMANDS: dict = {
    "trace-eval": cmd_trace_eval,
    "lala-check": cmd_lala_check,
    "lift-verify": cmd_lift_verify,
    "dn-witness": cmd_dn_witness,
    "compat-check": cmd_compat_check,
    "testideal": cmd_testideal,
    "subadd-check": cmd_subadd_check,
    "bs-check": cmd_bs_check,
    "symbolic": cmd_symbolic,
    "ustp": cmd_ustp,
}


def run_command(spec: SessionSpec, command: str, opts=None) -> Report:
    """Run one command; errors become an ``error`` verdict, never an exception."""
    opts = opts or build_parser().parse_args(["--command", command])
    rep = Report(command, {"p": spec.p, "ring": list(spec.ring.names), "params": dict(spec.params)})
    handler: Optional[Callable] = COMMANDS.get(command)
    try:
        if handler is None:
            raise SessionError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
        handler(spec, opts, rep)
    except CapExceeded as exc:
        rep.verdict = "error"
        rep.caveats.append(f"enumeration cap exceeded: {exc}; raise --cap to continue")
    except (ValueError, ArithmeticError) as exc:
        rep.verdict = "error"
        rep.caveats.append(f"{type(exc).__name__}: {exc}")
    rep.seconds = time.perf_counter() - rep.started
    return rep


def _write_atomic(path: str, text: str):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".report-")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diagfreg", description=__doc__.splitlines()[0])
    ap.add_argument("--input", help="session file ('-' for stdin)")
    ap.add_argument("--command", required=True, help=f"one of: {', '.join(COMMANDS)}")
    ap.add_argument("--e-max", type=int, default=None, help="largest Frobenius level to try")
    ap.add_argument("--n-max", type=int, default=None, help="tensor power n, or largest n for ustp")
    ap.add_argument("--degree-bound", type=int, default=None, help="outer degree bound for lift-verify")
    ap.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap (default 10^6)")
    ap.add_argument("--report", help="write the report here instead of stdout")
    ap.add_argument("--threads", type=int, default=1,
                    help="accepted for interface compatibility; computations run sequentially")
    return ap


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    try:
        if opts.input in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(opts.input, encoding="utf-8") as fh:
                text = fh.read()
        spec = parse_session(text)
    except (OSError, SessionError) as exc:
        rep = Report(opts.command, {"input": opts.input})
        rep.verdict = "error"
        rep.caveats.append(str(exc))
        out = "\n".join(rep.lines()) + "\n"
        print(str(exc), file=sys.stderr)
    else:
        rep = run_command(spec, opts.command, opts)
        out = "\n".join(rep.lines()) + "\n"
    if opts.report:
        _write_atomic(opts.report, out)
    else:
        sys.stdout.write(out)
    return EXIT_CODES[rep.verdict]


if __name__ == "__main__":
    sys.exit(main())
