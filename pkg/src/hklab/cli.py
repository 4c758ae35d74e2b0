"""Command line interface: ``hklab <subcommand> ...``.

Exit codes: 0 success (and every verified point passed), 1 a verification
failure, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import List, Optional

from . import bracket as br
from . import formulas as fm
from .field import FieldElement, artin_schreier, build_field, degree_representatives
from .harness import predicted_en, reconcile, sweep, verify_lemmas
from .hk_engine import hk_number, hk_power_sequence, hk_smoothed
from .pairs import curve_csv, sample_curve
from .polynomial import construct


@dataclass
class RunConfig:
    max_n: int = 4
    max_degree: int = 4
    direct_mode_ceiling: int = 2
    worker_count: int = 1
    output_format: str = "json"
    extended_j0: bool = False

    def __post_init__(self):
        for name in ("max_n", "max_degree", "direct_mode_ceiling", "worker_count"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")


def load_config(path: Optional[str]) -> RunConfig:
    """Read key=value lines (``#`` comments allowed); HKLAB_WORKERS overrides."""
    values = {}
    types = {f.name: f.type for f in fields(RunConfig)}
    if path:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, val = line.partition("=")
                key, val = key.strip(), val.strip()
                if not sep or key not in types:
                    raise ValueError(f"{path}:{lineno}: bad config line {line!r}")
                if types[key] in ("int", int):
                    values[key] = int(val)
                elif types[key] in ("bool", bool):
                    values[key] = val.lower() in ("1", "true", "yes", "on")
                else:
                    values[key] = val
    env = os.environ.get("HKLAB_WORKERS")
    if env:
        values["worker_count"] = int(env)
    return RunConfig(**values)


def _alpha_from_args(args) -> FieldElement:
    if getattr(args, "alpha", None):
        return FieldElement.parse(args.alpha)
    m = getattr(args, "m", None) or 1
    return degree_representatives(build_field(m), m)[0]


def _fmt(x: Fraction, digits: Optional[int]) -> str:
    s = f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if digits is not None:
        s += f" ~ {fm.to_decimal(x, digits)}"
    return s


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_field(args, cfg, out) -> int:
    if args.alpha:
        a = FieldElement.parse(args.alpha)
        prof = artin_schreier(a)
        rec = {
            "alpha": a.serialize(), "m_alpha": prof.m_alpha, "m_lambda": prof.m_lambda,
            "case_equal": prof.case_equal, "lambda": prof.lam.serialize(),
        }
        out.write(json.dumps(rec, sort_keys=True) + "\n")
        return 0
    if args.reps:
        ctx = build_field(args.degree or args.reps)
        for e in degree_representatives(ctx, args.reps, not args.all_elements):
            out.write(e.serialize() + "\n")
        return 0
    ctx = build_field(args.degree or 1)
    out.write(json.dumps({"degree": ctx.degree, "modulus": hex(ctx.modulus)}) + "\n")
    return 0


def _hk_record(task: dict) -> dict:
    a = FieldElement.parse(task["alpha"])
    n = int(task["n"])
    j = int(task.get("j", 1))
    variant = task.get("variant", "quartic")
    if variant == "smoothed":
        e = hk_smoothed(a, n, task.get("mode", "lemma_sum"))
    elif j == 0:
        e = 0
    else:
        e = hk_power_sequence(a, n, j)[-1]
    prof = artin_schreier(a)
    rec = {"alpha": a.serialize(), "m_alpha": prof.m_alpha, "n": n, "j": j, "e": e}
    if variant != "quartic":
        rec["variant"] = variant
    return rec


def cmd_hk(args, cfg, out) -> int:
    if args.batch:
        with open(args.batch) if args.batch != "-" else sys.stdin as fh:
            tasks = json.load(fh)
        if not isinstance(tasks, list):
            raise ValueError("batch input must be a JSON list of tasks")
    else:
        a = _alpha_from_args(args)
        if args.smoothed:
            tasks = [{"alpha": a.serialize(), "n": args.n, "j": 1, "variant": "smoothed",
                      "mode": args.mode}]
        else:
            js = range(1, args.jmax + 1) if args.jmax else [args.j]
            tasks = [{"alpha": a.serialize(), "n": args.n, "j": j} for j in js]
    for t in tasks:
        if t.get("variant") == "smoothed" and t.get("mode") == "direct" and t["n"] > cfg.direct_mode_ceiling:
            raise ValueError(f"direct mode limited to n <= {cfg.direct_mode_ceiling}")
        out.write(json.dumps(_hk_record(t), sort_keys=True) + "\n")
    return 0


def cmd_bracket(args, cfg, out) -> int:
    params = br.SigmaParams(args.m, args.case_equal)
    rows = []
    if args.sum:
        for n in range(args.n + 1) if args.all_levels else [args.n]:
            rows.append({"n": n, "sum": br.bracket_sum(n, params)})
    elif args.table:
        lo, _, hi = args.table.partition(":")
        lo, hi = int(lo), int(hi or lo)
        dist = br.level_distribution(args.n, params)
        for t in range(lo, hi + 1):
            rows.append({"n": args.n, "t": t, "a": dist.a_count(t), "b": dist.b_count(t)})
    else:
        js = [args.j] if args.j is not None else range(1 << args.n)
        for j in js:
            s = br.state(args.n, j, params)
            rows.append({"n": args.n, "j": j, "state": str(s), "bracket": s.value()})
    fmt = args.format or ("json" if cfg.output_format == "json" else "text")
    for r in rows:
        if fmt == "json":
            out.write(json.dumps(r, sort_keys=True) + "\n")
        else:
            out.write("  ".join(f"{k}={v}" for k, v in r.items()) + "\n")
    return 0


def cmd_formulas(args, cfg, out) -> int:
    d = args.decimal
    what = args.what
    if what == "ehk":
        out.write(_fmt(fm.ehk_s(args.m)[0], d) + "\n")
    elif what == "s":
        out.write(_fmt(fm.ehk_s(args.m)[1], d) + "\n")
    elif what == "gf":
        out.write(_fmt(fm.gf_eval(Fraction(args.w), args.m), d) + "\n")
    elif what == "en":
        if args.predicted:
            alpha = degree_representatives(build_field(args.m), args.m)[0]
            out.write(str(predicted_en(alpha, args.n)) + "\n")
        else:
            out.write(str(fm.closed_en_G(args.n, args.m)) + "\n")
    elif what == "d":
        out.write(str(fm.bracket_sum_formula(args.n, args.m)) + "\n")
    elif what == "multi":
        ms = [int(v) for v in args.ms.split(",")]
        e, s = fm.multi_param(ms)
        out.write(f"{_fmt(e, d)}\n{_fmt(s, d)}\n")
    elif what == "pi":
        ms = [int(v) for v in args.ms.split(",")]
        out.write(str(fm.pi_coeff(ms, args.n)) + "\n")
    elif what == "monsky":
        out.write(_fmt(fm.monsky_reference(args.m_lambda), d) + "\n")
    return 0


def cmd_verify(args, cfg, out) -> int:
    max_n = args.max_n or cfg.max_n
    max_degree = args.max_degree or cfg.max_degree
    workers = args.workers or cfg.worker_count
    extended = args.extended or cfg.extended_j0
    res = sweep(max_n, max_degree, orbits_only=not args.all_elements, extended=extended,
                workers=workers, time_budget=args.time_budget)
    for r in res.reports:
        out.write(r.to_json(args.timing) + "\n")
    out.write(json.dumps({"summary": res.summary()}, sort_keys=True) + "\n")
    ok = res.all_passed
    if args.lemmas:
        for a in (FieldElement.parse(s) for s in res.alphas):
            lem = verify_lemmas(a, min(max_n, 3), cfg.direct_mode_ceiling)
            rec = reconcile(a, min(max_n + 1, 4))
            out.write(json.dumps({"alpha": a.serialize(), "lemmas": lem.passed,
                                  "reconcile": rec.rows}, sort_keys=True) + "\n")
            ok = ok and lem.passed and rec.passed
    return 0 if ok else 1


def cmd_pairs(args, cfg, out) -> int:
    alpha = _alpha_from_args(args)
    samples = sample_curve(alpha, args.c, args.a_max)
    if args.json:
        for s in samples:
            out.write(json.dumps({
                "a": s.a, "c": s.c, "t": str(s.t), "s": str(s.s_value),
                "deriv": None if s.deriv_estimate is None else str(s.deriv_estimate),
            }) + "\n")
    else:
        out.write(curve_csv(alpha, samples, args.digits))
    return 0


def _load_coeffs(text: str) -> List[int]:
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(v, int) for v in data):
        raise ValueError("expected a JSON list of integers")
    return data


def cmd_hadamard(args, cfg, out) -> int:
    out.write(json.dumps(fm.hadamard(_load_coeffs(args.first), _load_coeffs(args.second))) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hklab", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value configuration file")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("field", help="field contexts, degrees, Artin-Schreier data")
    f.add_argument("--degree", type=int)
    f.add_argument("--alpha", help='element such as "gf2^4:0x9"')
    f.add_argument("--reps", type=int, metavar="M", help="list degree-M representatives")
    f.add_argument("--all-elements", action="store_true", help="do not deduplicate orbits")
    f.set_defaults(fn=cmd_field)

    h = sub.add_parser("hk", help="Hilbert-Kunz numbers of powers of g_a (JSON lines)")
    h.add_argument("--alpha")
    h.add_argument("--m", type=int, help="use the first degree-m representative")
    h.add_argument("--n", type=int, default=1)
    h.add_argument("--j", type=int, default=1)
    h.add_argument("--jmax", type=int)
    h.add_argument("--smoothed", action="store_true", help="e_n(uv + g_a) instead")
    h.add_argument("--mode", choices=["lemma_sum", "direct"], default="lemma_sum")
    h.add_argument("--batch", help="JSON list of tasks {alpha, n, j[, variant, mode]}")
    h.set_defaults(fn=cmd_hk)

    b = sub.add_parser("bracket", help="the bracket dynamical system")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--case-equal", action="store_true")
    b.add_argument("--n", type=int, required=True)
    g = b.add_mutually_exclusive_group()
    g.add_argument("--j", type=int)
    g.add_argument("--sum", action="store_true")
    g.add_argument("--table", metavar="T1:T2")
    b.add_argument("--all-levels", action="store_true", help="with --sum: levels 0..n")
    b.add_argument("--format", choices=["json", "text"])
    b.set_defaults(fn=cmd_bracket)

    fo = sub.add_parser("formulas", help="exact closed forms")
    fo.add_argument("what", choices=["ehk", "s", "gf", "en", "d", "multi", "pi", "monsky"])
    fo.add_argument("--m", type=int, default=2)
    fo.add_argument("--n", type=int, default=1)
    fo.add_argument("--w", default="1/16")
    fo.add_argument("--ms", default="2,2")
    fo.add_argument("--m-lambda", type=int, default=2)
    fo.add_argument("--predicted", action="store_true", help="en: iterate the recurrence")
    fo.add_argument("--decimal", type=int, metavar="DIGITS")
    fo.set_defaults(fn=cmd_formulas)

    v = sub.add_parser("verify", help="sweep the bracket identity (JSON lines)")
    v.add_argument("--max-n", type=int)
    v.add_argument("--max-degree", type=int)
    v.add_argument("--all-elements", action="store_true", help="every element, not one per orbit")
    v.add_argument("--extended", action="store_true", help="also check j = 0")
    v.add_argument("--workers", type=int)
    v.add_argument("--time-budget", type=float, metavar="SECONDS")
    v.add_argument("--lemmas", action="store_true", help="also check lemmas and reconcile e_n")
    v.add_argument("--timing", action="store_true", help="include per-point elapsed time")
    v.set_defaults(fn=cmd_verify)

    pa = sub.add_parser("pairs", help="F-signature of pairs samples")
    pa.add_argument("--alpha")
    pa.add_argument("--m", type=int)
    pa.add_argument("--c", type=int, required=True)
    pa.add_argument("--a-max", type=int)
    pa.add_argument("--csv", action="store_true", help="CSV output (the default)")
    pa.add_argument("--json", action="store_true")
    pa.add_argument("--digits", type=int, default=6)
    pa.set_defaults(fn=cmd_pairs)

    ha = sub.add_parser("hadamard", help="termwise product of two coefficient lists")
    ha.add_argument("first", help="JSON list or path to one")
    ha.add_argument("second")
    ha.set_defaults(fn=cmd_hadamard)
    return p


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        return args.fn(args, cfg, out)
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"hklab: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
