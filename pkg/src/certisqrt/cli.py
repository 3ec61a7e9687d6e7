"""Command-line front end: profile management, table building, square-root
evaluation with oracle verdicts, verification suites, and sweep reports.

Exit status contract: 0 all checks pass, 1 domain or verification
failure, 2 usage or parse failure.  All outputs are deterministic given
the arguments (and --seed); structured artifacts are JSON, sweeps CSV.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .errors import CertisqrtError, DomainError
from .exact import rat_str, sqrt_abs_err_lt, within_of_sqrt
from .fixarith import FixProfile, FixVal, check_profile_assumptions
from .floatmodel import (
    FloatProfile,
    check_float_profile,
    encode_rational,
    value_of,
)
from .lut import RootTable, StepConfig, build_root_table, validate_step
from .newton import (
    Trace,
    derive_eps_for_ulp,
    fix_sqr,
    flt_sqr,
    mix_sqr,
    sqr_exact,
)
from .report import VerifyReport
from .verify import (
    approx_abs_err,
    balance_sweep,
    check_table_properties,
    grid_values,
    monotonicity_probe,
    run_adjust_suite,
    run_fsqr_suite,
    run_sqr_suite,
    sample_rationals,
)


class FileFormatError(Exception):
    """Unreadable or malformed input file; maps to exit status 2."""


# ---------------------------------------------------------------------------
# profile and table files
# ---------------------------------------------------------------------------

def _require(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise FileFormatError(f"{where}: missing field {key!r}")
    return doc[key]


def _require_int(doc: dict, key: str, where: str) -> int:
    value = _require(doc, key, where)
    if isinstance(value, bool) or not isinstance(value, int):
        raise FileFormatError(f"{where}.{key}: expected an integer, "
                              f"got {value!r}")
    return value


def _require_rational(doc: dict, key: str, where: str) -> Fraction:
    value = _require(doc, key, where)
    if isinstance(value, bool):
        raise FileFormatError(f"{where}.{key}: expected a rational, "
                              f"got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise FileFormatError(f"{where}.{key}: not a rational: "
                                  f"{value!r}") from exc
    raise FileFormatError(f"{where}.{key}: expected a rational, got {value!r}")


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: expected a JSON object")
    return doc


def load_profile(path: str) -> tuple[FixProfile, FloatProfile, StepConfig]:
    doc = _read_json(path)
    fix_doc = _require(doc, "fix", "profile")
    fix = FixProfile(
        _require_int(fix_doc, "delta_den", "profile.fix"),
        _require_int(fix_doc, "inf_count", "profile.fix"),
        _require_int(fix_doc, "sup_count", "profile.fix"),
    )
    float_doc = _require(doc, "float", "profile")
    fprof = FloatProfile(
        _require_int(float_doc, "base", "profile.float"),
        fix,
        _require_rational(float_doc, "inf_F", "profile.float"),
        _require_rational(float_doc, "sup_F", "profile.float"),
    )
    step_doc = _require(doc, "step", "profile")
    stp = fix.val(_require_int(step_doc, "stp_count", "profile.step"))
    eps = fix.val(_require_int(step_doc, "eps_count", "profile.step"))
    return fix, fprof, StepConfig(stp, eps)


def canonical_profile_doc(fix: FixProfile, fprof: FloatProfile,
                          step: StepConfig) -> dict:
    return {
        "fix": {"delta_den": fix.delta_den, "inf_count": fix.inf_count,
                "sup_count": fix.sup_count},
        "float": {"base": fprof.base, "inf_F": rat_str(fprof.inf_f),
                  "sup_F": rat_str(fprof.sup_f)},
        "step": {"stp_count": step.stp.count, "eps_count": step.eps.count},
    }


def profile_digest(fix: FixProfile, fprof: FloatProfile,
                   step: StepConfig) -> str:
    blob = json.dumps(canonical_profile_doc(fix, fprof, step),
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def table_file_bytes(table: RootTable, profile_hash: str) -> bytes:
    doc = {
        "profile_hash": profile_hash,
        "delta_den": table.profile.delta_den,
        "sup_count": table.profile.sup_count,
        "stp_count": table.stp.count,
        "roots": list(table.roots),
    }
    return (json.dumps(doc, sort_keys=True, separators=(",", ":")) +
            "\n").encode()


def load_table(path: str, fix: FixProfile, profile_hash: str,
               revalidate: bool = True) -> RootTable:
    doc = _read_json(path)
    stored_hash = _require(doc, "profile_hash", "table")
    if stored_hash != profile_hash:
        raise DomainError(f"table {path} was built for a different profile")
    d = _require_int(doc, "delta_den", "table")
    sup = _require_int(doc, "sup_count", "table")
    stp_count = _require_int(doc, "stp_count", "table")
    if d != fix.delta_den or sup != fix.sup_count:
        raise DomainError(f"table {path} grid does not match the profile")
    roots = _require(doc, "roots", "table")
    if not isinstance(roots, list) or \
            any(isinstance(r, bool) or not isinstance(r, int) for r in roots):
        raise FileFormatError("table.roots: expected a list of integers")
    k_min = d // stp_count + 1
    k_max = fix.sup_count // stp_count
    if len(roots) != k_max - k_min + 1:
        raise DomainError(f"table {path} has {len(roots)} entries, "
                          f"expected {k_max - k_min + 1}")
    table = RootTable(fix, fix.val(stp_count), k_min, tuple(roots))
    if revalidate:
        for k, count in enumerate(roots, start=k_min):
            target = k * stp_count * d
            if not (count * count >= target
                    and (count - 1) * (count - 1) < target):
                raise DomainError(
                    f"table {path} failed revalidation at index {k}")
    return table


# ---------------------------------------------------------------------------
# trace serialization
# ---------------------------------------------------------------------------

def trace_rows(trace: Trace) -> list[dict]:
    rows = []

    def value_cols(x) -> dict:
        if isinstance(x, FixVal):
            return {"x_num": "", "x_den": "", "x_count": x.count}
        return {"x_num": x.numerator, "x_den": x.denominator, "x_count": ""}

    exact = not isinstance(trace.final_x, FixVal)
    for s in trace.steps:
        rows.append({"algorithm": trace.algorithm, "k": s.k,
                     **value_cols(s.x_before),
                     "correction": rat_str(s.correction),
                     "exact_flag": str(exact).lower()})
    if trace.final_x is not None:
        rows.append({"algorithm": trace.algorithm, "k": len(trace.steps),
                     **value_cols(trace.final_x), "correction": "",
                     "exact_flag": str(exact).lower()})
    return rows


TRACE_COLUMNS = ["algorithm", "k", "x_num", "x_den", "x_count",
                 "correction", "exact_flag"]


def write_trace(path: str, trace: Trace) -> None:
    rows = trace_rows(trace)
    if path.endswith(".json"):
        Path(path).write_text(
            json.dumps(rows, sort_keys=True, indent=2) + "\n")
        return
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=TRACE_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_profile_check(args: argparse.Namespace) -> int:
    fix, fprof, step = load_profile(args.profile)
    budget = "exhaustive" if args.exhaustive else args.samples
    reports = [
        check_profile_assumptions(fix, budget=budget, seed=args.seed),
        check_float_profile(fprof),
        validate_step(step.stp, step.eps, fix),
    ]
    overall = all(r.overall for r in reports)
    doc = {"overall": overall, "reports": [r.as_dict() for r in reports]}
    print(json.dumps(doc, sort_keys=True, indent=2))
    return 0 if overall else 1


def cmd_table_build(args: argparse.Namespace) -> int:
    fix, fprof, step = load_profile(args.profile)
    table = build_root_table(fix, step.stp)
    payload = table_file_bytes(table, profile_digest(fix, fprof, step))
    Path(args.out).write_bytes(payload)
    print(f"wrote {args.out}: {len(table)} entries, stp={step.stp}")
    return 0


def _display(q: Fraction) -> str:
    """Best-effort decimal rendering; never used in a verdict."""
    try:
        return f"{float(q):.6g}"
    except OverflowError:
        return "out-of-float-range"


def _grid_exact(value: Fraction, profile: FixProfile) -> FixVal:
    scaled = value * profile.delta_den
    if scaled.denominator != 1:
        raise DomainError(f"{value} is not a grid value on a "
                          f"1/{profile.delta_den} grid")
    return profile.val(int(scaled))


def cmd_sqrt(args: argparse.Namespace) -> int:
    fix, fprof, step = load_profile(args.profile)
    need_table = args.mode in ("fix", "mix", "float")
    table = None
    if need_table:
        if args.table is None:
            print("error: modes fix/mix/float require a table file",
                  file=sys.stderr)
            return 2
        table = load_table(args.table, fix,
                           profile_digest(fix, fprof, step),
                           revalidate=not args.no_revalidate)
    if args.ulp is not None:
        eps_fix = derive_eps_for_ulp(args.ulp, fprof, step.stp)
    elif args.eps is not None:
        eps_fix = _grid_exact(args.eps, fix) if need_table else None
    else:
        print("error: provide --eps or --ulp", file=sys.stderr)
        return 2
    lines = [f"mode = {args.mode}"]
    if args.mode == "exact":
        eps_frac = args.eps if args.ulp is None else eps_fix.value
        x, trace = sqr_exact(args.value, eps_frac)
        ok = within_of_sqrt(x, args.value, eps_frac)
        lines.append(f"x = {rat_str(x)} ({_display(x)})")
        lines.append(f"bound = {rat_str(eps_frac)}")
    elif args.mode in ("fix", "mix"):
        y = _grid_exact(args.value, fix)
        if args.mode == "fix":
            if args.n is None:
                print("error: mode fix requires --n", file=sys.stderr)
                return 2
            x, trace = fix_sqr(y, eps_fix, table, args.n)
            bound = eps_fix.value / 2 + args.n * fix.delta
        else:
            x, trace = mix_sqr(y, eps_fix, table)
            bound = eps_fix.value
        ok = within_of_sqrt(x.value, y.value, bound, strict=True)
        err = approx_abs_err(x.value, y.value)
        lines.append(f"x = {rat_str(x.value)} ({_display(x.value)})")
        lines.append(f"bound = {rat_str(bound)}")
        lines.append(f"err_display = {err:.6g}")
    else:  # float
        a, enc_exact = encode_rational(args.value, fprof)
        b, trace = flt_sqr(a, eps_fix, fprof, table)
        if b.is_zero:
            lines.append("b = 0")
            ok = args.value == 0
        else:
            a_val = value_of(a)
            b_val = value_of(b)
            half_exp = a.exp // 2
            beta = Fraction(fprof.base)
            c1 = eps_fix.value * beta ** half_exp
            c2 = (fix.delta / 2) * beta ** (half_exp - 1)
            ok = sqrt_abs_err_lt(b_val, a_val, c1, c2, beta)
            lines.append(f"a = {rat_str(a_val)} "
                         f"(encoded exactly: {str(enc_exact).lower()})")
            lines.append(f"b = {rat_str(b.man.value)} * {fprof.base}^{b.exp} "
                         f"= {rat_str(b_val)} ({_display(b_val)})")
            lines.append(f"bound = {rat_str(c1)} + {rat_str(c2)}*sqrt({fprof.base}) "
                         f"(~{float(c1) + float(c2) * fprof.base ** 0.5:.6g})")
    lines.append(f"check = {'PASS' if ok else 'FAIL'}")
    print("\n".join(lines))
    if args.trace_out is not None:
        write_trace(args.trace_out, trace)
    return 0 if ok else 1


def cmd_verify(args: argparse.Namespace) -> int:
    fix, fprof, step = load_profile(args.profile)
    table = load_table(args.table, fix, profile_digest(fix, fprof, step),
                       revalidate=not args.no_revalidate)
    eps = step.eps
    reports: list[VerifyReport] = []
    suites = ("table", "sqr", "fsqr", "adjust") if args.suite == "all" \
        else (args.suite,)
    rng = random.Random(args.seed)
    if args.exhaustive:
        sqr_inputs = [(y.value, eps.value)
                      for y in grid_values(fix, fix.sup_value)]
        scan_ys = grid_values(fix, fix.sup_value / 2)
    else:
        sqr_inputs = sample_rationals(args.samples, args.seed)
        pool = grid_values(fix, fix.sup_value / 2)
        count = min(args.samples, len(pool))
        scan_ys = sorted(rng.sample(pool, count), key=lambda v: v.count)
    for suite in suites:
        if suite == "table":
            reports.append(check_table_properties(table, fix, step.stp, eps))
        elif suite == "sqr":
            reports.append(run_sqr_suite(sqr_inputs))
        elif suite == "fsqr":
            reports.append(run_fsqr_suite(table, eps, scan_ys))
        elif suite == "adjust":
            reports.append(run_adjust_suite(table, eps, scan_ys))
    overall = all(r.overall for r in reports)
    doc = {"overall": overall, "reports": [r.as_dict() for r in reports]}
    print(json.dumps(doc, sort_keys=True, indent=2))
    return 0 if overall else 1


def cmd_sweep(args: argparse.Namespace) -> int:
    fix, fprof, step = load_profile(args.profile)
    if args.kind == "more-worse":
        if args.y is None:
            print("error: kind more-worse requires --y", file=sys.stderr)
            return 2
        table = build_root_table(fix, step.stp)
        y = _grid_exact(args.y, fix)
        rows = monotonicity_probe(y, step.eps, table, args.n_min, args.n_max)
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "x_count", "x_value", "err_display",
                             "bound", "within_bound", "error_increased"])
            for r in rows:
                writer.writerow([r.n, r.x.count, rat_str(r.x.value),
                                 f"{r.err_display:.12g}", rat_str(r.bound),
                                 str(r.within_bound).lower(),
                                 str(r.error_increased).lower()])
        bad = [r.n for r in rows if not r.within_bound]
        print(f"wrote {args.out}: {len(rows)} rows, "
              f"increases at n={[r.n for r in rows if r.error_increased]}")
        return 0 if not bad else 1
    # balance
    if not args.stp:
        print("error: kind balance requires a non-empty --stp list",
              file=sys.stderr)
        return 1
    candidates = [_grid_exact(v, fix) for v in args.stp]
    rows = balance_sweep(fix, step.eps, candidates)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["stp", "valid", "table_size", "n",
                         "predicted_bound", "worst_err_display",
                         "all_within_predicted"])
        for r in rows:
            writer.writerow([rat_str(r.stp.value), str(r.valid).lower(),
                             r.table_size, r.n, rat_str(r.predicted_bound),
                             f"{r.worst_err_display:.12g}",
                             str(r.all_within_predicted).lower()])
    ok = all(r.all_within_predicted for r in rows if r.valid)
    print(f"wrote {args.out}: {len(rows)} rows")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _rational_list(text: str) -> list[Fraction]:
    items = [part.strip() for part in text.split(",") if part.strip()]
    return [Fraction(part) for part in items]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="certisqrt",
        description="Verified table-seeded Newton square roots over "
                    "simulated machine arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile-check",
                       help="validate a profile file's assumptions")
    p.add_argument("profile")
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_profile_check)

    p = sub.add_parser("table-build", help="pre-compute the root table")
    p.add_argument("profile")
    p.add_argument("out")
    p.set_defaults(func=cmd_table_build)

    p = sub.add_parser("sqrt", help="evaluate a square root with an "
                                    "oracle-checked bound")
    p.add_argument("profile")
    p.add_argument("table", nargs="?")
    p.add_argument("--mode", required=True,
                   choices=["exact", "fix", "mix", "float"])
    p.add_argument("--value", type=Fraction, required=True)
    p.add_argument("--eps", type=Fraction)
    p.add_argument("--ulp", type=Fraction)
    p.add_argument("--n", type=int)
    p.add_argument("--trace", dest="trace_out")
    p.add_argument("--no-revalidate", action="store_true")
    p.set_defaults(func=cmd_sqrt)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("profile")
    p.add_argument("table")
    p.add_argument("--suite", required=True,
                   choices=["table", "sqr", "fsqr", "adjust", "all"])
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-revalidate", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="write a sweep report CSV")
    p.add_argument("profile")
    p.add_argument("out")
    p.add_argument("--kind", required=True, choices=["more-worse", "balance"])
    p.add_argument("--y", type=Fraction)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--stp", type=_rational_list, default=[])
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CertisqrtError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
