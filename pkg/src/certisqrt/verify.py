"""Runtime verification of algorithm runs against the exact oracle.

Every function here consumes finished traces (or tables) and produces a
VerifyReport whose verdicts are decided exactly; floating-point numbers
appear only in display fields.  Deliberately corrupted inputs fail the
corresponding rule and no other, which the test suite exercises as
negative controls.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, UsageError
from .exact import (
    Ordering,
    cmp_sqrt,
    rat_str,
    sqrt_enclosure,
    within_of_sqrt,
)
from .fixarith import FixProfile, FixVal
from .lut import RootTable, build_root_table, round_up_to_step, sup_fn, validate_step
from .newton import (
    Trace,
    _pow2,
    fix_sqr,
    fsqr_exact,
    min_iterations_for_step,
    min_legal_iterations,
    sqr_exact,
)
from .report import CheckResult, VerifyReport, failed, passed


def approx_abs_err(q: Fraction, y: Fraction) -> float:
    """Display-only magnitude of |q - sqrt(y)| from a 64-bit enclosure."""
    mid = sqrt_enclosure(y, 64).midpoint
    return float(abs(q - mid))


def cmp_abs_err(a: Fraction, b: Fraction, y: Fraction) -> Ordering:
    """Order |a - sqrt(y)| against |b - sqrt(y)| exactly.

    Uses err(a)**2 - err(b)**2 = (a - b) * (a + b - 2*sqrt(y)).
    """
    if a == b:
        return Ordering.EQUAL
    mid_cmp = cmp_sqrt((a + b) / 2, y)
    if mid_cmp is Ordering.EQUAL:
        return Ordering.EQUAL
    sign = 1 if a > b else -1
    sign *= 1 if mid_cmp is Ordering.GREATER else -1
    return Ordering.GREATER if sign > 0 else Ordering.LESS


def iteration_cap(y: Fraction, eps: Fraction) -> int:
    """max(0, 1 + ceil(log2((y - sqrt(y))/eps))) decided exactly, y > 1.

    ceil(log2(gap/eps)) is the least c with y - eps*2**c <= sqrt(y), found
    by exponential search over exact comparisons.
    """
    if y <= 1:
        raise DomainError(f"iteration cap defined for y > 1, got {y}")
    if eps <= 0:
        raise DomainError(f"accuracy must be positive, got {eps}")

    def holds(c: int) -> bool:
        return cmp_sqrt(y - eps * _pow2(c), y) is not Ordering.GREATER

    c = 0
    if holds(0):
        step = 1
        while holds(c - step):
            c -= step
            step *= 2
        lo, hi = c - step, c  # holds(hi), not holds(lo)
    else:
        step = 1
        while not holds(c + step):
            c += step
            step *= 2
        lo, hi = c, c + step  # not holds(lo), holds(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return max(0, 1 + hi)


def applied_corrections(trace: Trace) -> int:
    """Number of x-changing passes; the exit pass of an until-loop trace
    leaves x unchanged and is not counted."""
    return sum(1 for s in trace.steps if s.x_after != s.x_before)


def check_sqr_annotations(trace: Trace, y: Fraction,
                          eps: Fraction) -> VerifyReport:
    """Check a sqr_exact trace: loop invariant, correction halving, final
    error bound, and the iteration-count cap."""
    if trace.algorithm != "sqr_exact":
        raise UsageError(f"expected a sqr_exact trace, got {trace.algorithm}")
    checks: list[CheckResult] = []

    inv_ok, inv_witness = True, {}
    boundary = [(s.k, s.x_before) for s in trace.steps]
    boundary.append((len(trace.steps), trace.final_x))
    for k, x in boundary:
        if cmp_sqrt(x, y) is Ordering.LESS or x > y:
            inv_ok, inv_witness = False, {"k": k, "x": x}
            break
    checks.append(
        passed("sqrt(y) <= x <= y at every boundary", "sqr.loop-invariant",
               {"boundaries": len(boundary)})
        if inv_ok else
        failed("sqrt(y) <= x <= y at every boundary", "sqr.loop-invariant",
               inv_witness))

    halv_ok, halv_witness = True, {}
    corrections = [s.correction for s in trace.steps]
    for i in range(len(corrections) - 1):
        prev, cur = corrections[i], corrections[i + 1]
        if prev == 0 or 2 * abs(cur) >= abs(prev):
            halv_ok = False
            halv_witness = {"i": i, "d_i": prev, "d_next": cur}
            break
    checks.append(
        passed("each correction below half its predecessor", "sqr.halving",
               {"pairs": max(0, len(corrections) - 1)})
        if halv_ok else
        failed("each correction below half its predecessor", "sqr.halving",
               halv_witness))

    final = trace.final_x
    post_ok = within_of_sqrt(final, y, eps)
    post_strict = post_ok and within_of_sqrt(final, y, eps, strict=True)
    checks.append(CheckResult(
        "final error within the accuracy", "sqr.final-error", post_ok,
        {"x": final, "eps": eps, "err_display": approx_abs_err(final, y)},
        strict=post_strict))

    if y > 1:
        cap = iteration_cap(y, eps)
        applied = applied_corrections(trace)
        checks.append(CheckResult(
            "applied corrections within the logarithmic cap",
            "sqr.iteration-cap", applied <= cap,
            {"applied": applied, "cap": cap,
             "loop_passes": len(trace.steps)}))
    else:
        checks.append(passed("applied corrections within the logarithmic cap",
                             "sqr.iteration-cap", {"vacuous": True}))

    subject = f"sqr_exact y={rat_str(y)} eps={rat_str(eps)}"
    return VerifyReport(subject, tuple(checks))


def check_fsqr_annotations(trace: Trace, y: Fraction, eps: Fraction,
                           sup_y: Fraction) -> VerifyReport:
    """Check an fsqr_exact trace: the per-iteration progress bound
    x_k - sqrt(y) <= (sup_y - sqrt(y))/2**k and the final eps/2 bound."""
    if trace.algorithm != "fsqr_exact":
        raise UsageError(f"expected an fsqr_exact trace, got {trace.algorithm}")
    if trace.seed is None:
        raise UsageError("trace carries no seed value")
    checks: list[CheckResult] = []

    seq: list[Fraction] = [trace.seed] + [s.x_after for s in trace.steps]
    prog_ok, prog_witness = True, {}
    if seq[0] > sup_y:
        prog_ok, prog_witness = False, {"k": 0, "x": seq[0], "seed": sup_y}
    else:
        for k in range(1, len(seq)):
            # x_k - sup_y/2**k <= (1 - 2**-k) * sqrt(y)
            shrink = 1 - _pow2(-k)
            lhs = (seq[k] - sup_y * _pow2(-k)) / shrink
            if cmp_sqrt(lhs, y) is Ordering.GREATER:
                prog_ok, prog_witness = False, {"k": k, "x": seq[k]}
                break
    checks.append(
        passed("progress bound holds at every boundary", "fsqr.progress",
               {"boundaries": len(seq)})
        if prog_ok else
        failed("progress bound holds at every boundary", "fsqr.progress",
               prog_witness))

    final = trace.final_x
    bound = eps / 2
    post_ok = within_of_sqrt(final, y, bound)
    post_strict = post_ok and within_of_sqrt(final, y, bound, strict=True)
    checks.append(CheckResult(
        "final error within half the accuracy", "fsqr.final-error", post_ok,
        {"x": final, "bound": bound,
         "err_display": approx_abs_err(final, y)},
        strict=post_strict))

    subject = f"fsqr_exact y={rat_str(y)} eps={rat_str(eps)} " \
              f"n={trace.n_planned}"
    return VerifyReport(subject, tuple(checks))


@dataclass(frozen=True)
class AdjustmentRecord:
    """Lockstep comparison of the exact and grid runs at iteration k."""

    k: int
    x_exact: Fraction
    x_fix: FixVal
    gap: Fraction
    bound: Fraction


def adjust_runs(y: FixVal, eps: FixVal, table: RootTable,
                n: int) -> tuple[tuple[AdjustmentRecord, ...], VerifyReport]:
    """Run the exact and grid for-loop algorithms in lockstep from the
    same seed and check |x_exact_k - x_fix_k| <= k * step_of_grid for all
    k, plus the combined final bound of the grid run."""
    profile = y.profile
    x0 = sup_fn(y, table)
    seed_value = x0.value
    _, exact_trace = fsqr_exact(y.value, eps.value,
                                lambda _u: seed_value, n)
    x_fix, fix_trace = fix_sqr(y, eps, table, n)
    exact_seq = [seed_value] + [s.x_after for s in exact_trace.steps]
    fix_seq = [x0] + [s.x_after for s in fix_trace.steps]
    delta = profile.delta
    records = []
    gap_ok, gap_witness = True, {}
    for k, (xe, xf) in enumerate(zip(exact_seq, fix_seq)):
        gap = abs(xe - xf.value)
        bound = k * delta
        records.append(AdjustmentRecord(k, xe, xf, gap, bound))
        if gap_ok and gap > bound:
            gap_ok = False
            gap_witness = {"k": k, "gap": gap, "bound": bound}
    checks = [
        passed("runs stay within k grid steps of each other",
               "adjust.gap-bound", {"iterations": n})
        if gap_ok else
        failed("runs stay within k grid steps of each other",
               "adjust.gap-bound", gap_witness)
    ]
    final_bound = eps.value / 2 + n * delta
    final_ok = within_of_sqrt(x_fix.value, y.value, final_bound, strict=True)
    checks.append(CheckResult(
        "grid result within eps/2 + n*step of the root",
        "adjust.final-error", final_ok,
        {"x": str(x_fix), "bound": final_bound,
         "err_display": approx_abs_err(x_fix.value, y.value)},
        strict=final_ok))
    subject = f"adjust y={y} eps={eps} n={n}"
    return tuple(records), VerifyReport(subject, tuple(checks))


@dataclass(frozen=True)
class ProbeRow:
    """One iteration-count setting of the grid run for a fixed input."""

    n: int
    x: FixVal
    err_display: float
    bound: Fraction
    within_bound: bool
    error_increased: bool


def monotonicity_probe(y: FixVal, eps: FixVal, table: RootTable,
                       n_min: int, n_max: int) -> tuple[ProbeRow, ...]:
    """Sweep the iteration count and report, per n, the exact bound
    verdict and whether the error grew relative to n-1.

    No monotonicity is asserted: with grid rounding, more iterations may
    be worse, and the increase flag marks exactly where.
    """
    if n_min > n_max:
        raise DomainError(f"empty sweep range [{n_min}, {n_max}]")
    delta = y.profile.delta
    rows: list[ProbeRow] = []
    prev_x: FixVal | None = None
    for n in range(n_min, n_max + 1):
        x, _ = fix_sqr(y, eps, table, n)
        bound = eps.value / 2 + n * delta
        within = within_of_sqrt(x.value, y.value, bound, strict=True)
        increased = (prev_x is not None
                     and cmp_abs_err(x.value, prev_x.value, y.value)
                     is Ordering.GREATER)
        rows.append(ProbeRow(n, x, approx_abs_err(x.value, y.value),
                             bound, within, increased))
        prev_x = x
    return tuple(rows)


def check_table_properties(table: RootTable, profile: FixProfile,
                           stp: FixVal, eps: FixVal) -> VerifyReport:
    """Exhaustively re-check the table: the step rules, every root entry
    (least grid upper bound of the exact root), and the rounding-up
    function over every grid value in (1, sup]."""
    checks: list[CheckResult] = list(validate_step(stp, eps, profile).checks)

    consistent = table.profile == profile and table.stp == stp
    checks.append(
        passed("table matches the profile and step", "table.consistent", {})
        if consistent else
        failed("table matches the profile and step", "table.consistent",
               {"table_stp": str(table.stp), "stp": str(stp)}))

    if consistent:
        delta = profile.delta
        root_ok, root_witness = True, {}
        for v, root in table.items():
            if cmp_sqrt(root.value, v.value) is Ordering.LESS \
                    or cmp_sqrt(root.value - delta, v.value) \
                    is not Ordering.LESS:
                root_ok = False
                root_witness = {"index": str(v), "root": str(root)}
                break
        checks.append(
            passed("every entry is the least grid upper root", "table.root",
                   {"entries": len(table)})
            if root_ok else
            failed("every entry is the least grid upper root", "table.root",
                   root_witness))

        round_ok, round_witness = True, {}
        for count in range(profile.delta_den + 1, profile.sup_count + 1):
            u = FixVal(count, profile)
            r = round_up_to_step(u, stp)
            in_index_set = (r.count % stp.count == 0
                            and r.count > profile.delta_den
                            and r.count <= profile.sup_count)
            if not (in_index_set and r.value - stp.value < u.value <= r.value):
                round_ok = False
                round_witness = {"u": str(u), "rounded": str(r)}
                break
        checks.append(
            passed("rounding up lands on the next index", "table.round-up",
                   {"grid_values": profile.sup_count - profile.delta_den})
            if round_ok else
            failed("rounding up lands on the next index", "table.round-up",
                   round_witness))

    subject = f"table stp={stp} entries={len(table)}"
    return VerifyReport(subject, tuple(checks))


@dataclass(frozen=True)
class BalanceRow:
    """Table-size / iteration-count / accuracy trade-off for one step."""

    stp: FixVal
    valid: bool
    table_size: int
    n: int
    predicted_bound: Fraction
    worst_err_display: float
    all_within_predicted: bool


def _sample_grid_values(profile: FixProfile, hi_count: int,
                        limit: int = 64) -> list[FixVal]:
    """Deterministic spread of grid values in (1, hi_count/d]."""
    lo = profile.delta_den + 1
    if hi_count < lo:
        return []
    span = hi_count - lo
    if span < limit:
        counts = range(lo, hi_count + 1)
    else:
        counts = sorted({lo + (span * i) // (limit - 1)
                         for i in range(limit)})
    return [FixVal(c, profile) for c in counts]


def balance_sweep(profile: FixProfile, eps: FixVal,
                  stp_candidates: Sequence[FixVal],
                  sample_limit: int = 64) -> tuple[BalanceRow, ...]:
    """For each candidate step: table size, minimal iteration count, the
    predicted bound stp/2**n + n*step_of_grid, and the worst observed
    error of the grid run over a deterministic sample of inputs."""
    rows: list[BalanceRow] = []
    delta = profile.delta
    for stp in stp_candidates:
        if not validate_step(stp, eps, profile).overall:
            rows.append(BalanceRow(stp, False, 0, 0, Fraction(0),
                                   float("nan"), False))
            continue
        table = build_root_table(profile, stp)
        n = min_iterations_for_step(stp, eps)
        predicted = stp.value / _pow2(n) + n * delta
        worst = 0.0
        all_within = True
        for y in _sample_grid_values(profile, profile.sup_count // 2,
                                     sample_limit):
            x, _ = fix_sqr(y, eps, table, n)
            if not within_of_sqrt(x.value, y.value, predicted):
                all_within = False
            worst = max(worst, approx_abs_err(x.value, y.value))
        rows.append(BalanceRow(stp, True, profile.sup_count // stp.count,
                               n, predicted, worst, all_within))
    return tuple(rows)


def sample_rationals(count: int, seed: int,
                     y_hi: int = 10 ** 6,
                     eps_den: int = 10 ** 6) -> list[tuple[Fraction, Fraction]]:
    """Seeded corpus of (y, eps) pairs with y in (1, y_hi) and
    eps in (1/eps_den, 1)."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        den = rng.randint(1, 1000)
        num = rng.randint(den + 1, y_hi * den - 1)
        eps = Fraction(rng.randint(2, eps_den - 1), eps_den)
        out.append((Fraction(num, den), eps))
    return out


def grid_values(profile: FixProfile, hi: Fraction) -> list[FixVal]:
    """All grid values in (1, hi], ascending."""
    hi_count = int(hi * profile.delta_den)
    return [FixVal(c, profile)
            for c in range(profile.delta_den + 1, hi_count + 1)]


def _suite_report(subject: str, results: Iterable[tuple[str, bool, dict]],
                  rule: str) -> VerifyReport:
    checks = tuple(
        CheckResult(name, rule, ok, witness) for name, ok, witness in results)
    return VerifyReport(subject, checks)


def run_sqr_suite(inputs: Sequence[tuple[Fraction, Fraction]]) -> VerifyReport:
    """sqr_exact over a corpus; one aggregated verdict per input."""
    results = []
    for y, eps in inputs:
        _, trace = sqr_exact(y, eps)
        rep = check_sqr_annotations(trace, y, eps)
        witness = {} if rep.overall else \
            {"failed": [c.rule for c in rep.failures()]}
        results.append((f"y={rat_str(y)} eps={rat_str(eps)}",
                        rep.overall, witness))
    return _suite_report(f"sqr suite ({len(inputs)} inputs)", results,
                         "suite.sqr")


def run_fsqr_suite(table: RootTable, eps: FixVal,
                   ys: Sequence[FixVal]) -> VerifyReport:
    """fsqr_exact with table-derived seeds and minimal legal iteration
    counts over grid inputs."""
    results = []
    for y in ys:
        y_val = y.value
        seed_value = sup_fn(y, table).value
        n = min_legal_iterations(y_val, eps.value, seed_value)
        _, trace = fsqr_exact(y_val, eps.value, lambda _u: seed_value, n)
        rep = check_fsqr_annotations(trace, y_val, eps.value, seed_value)
        witness = {} if rep.overall else \
            {"failed": [c.rule for c in rep.failures()]}
        results.append((f"y={y} n={n}", rep.overall, witness))
    return _suite_report(f"fsqr suite ({len(ys)} inputs)", results,
                         "suite.fsqr")


def run_adjust_suite(table: RootTable, eps: FixVal, ys: Sequence[FixVal],
                     ns: Sequence[int] = (1, 2, 3, 4, 5, 6)) -> VerifyReport:
    """Lockstep adjustment over grid inputs and iteration counts."""
    results = []
    for y in ys:
        for n in ns:
            _, rep = adjust_runs(y, eps, table, n)
            witness = {} if rep.overall else \
                {"failed": [c.rule for c in rep.failures()]}
            results.append((f"y={y} n={n}", rep.overall, witness))
    return _suite_report(
        f"adjust suite ({len(ys)} inputs x {len(list(ns))} counts)",
        results, "suite.adjust")
