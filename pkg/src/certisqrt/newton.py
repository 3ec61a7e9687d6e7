"""Newton square-root algorithms over exact, grid, and float arithmetic.

Six variants share the iteration x -> (x + y/x)/2:

* sqr_exact    - exact rationals, seed y, until-loop on the correction;
* isqr_exact   - exact rationals, seeded, loop on the non-negative
                 correction computed directly;
* fsqr_exact   - exact rationals, seeded, fixed iteration count;
* fix_sqr      - grid arithmetic, table seed, fixed iteration count;
* mix_sqr      - fix_sqr with the minimal sufficient iteration count;
* flt_sqr      - mantissa/exponent wrapper around mix_sqr.

Every run returns the result together with a complete per-iteration
trace; all correctness checks live in the verify module and operate on
those traces after the fact.

The exact variants iterate on raw integer pairs kept in lowest terms by
stripping common factors of 2*num(y)*den(y) each step (the only primes a
common factor can contain), because a full gcd at the sizes reached by
long runs is quadratic and would dominate the runtime.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

from .errors import (
    DomainError,
    EpsTooSmall,
    InternalInvariantError,
    IterationBudgetError,
    NoFeasibleEps,
    ProfileMismatch,
    SeedContractError,
)
from .exact import Ordering, cmp_sqrt, decide_radical_lt, fraction_from_coprime
from .fixarith import FixVal, fix_add, fix_div, fix_mul
from .floatmodel import FloatProfile, FloatVal, compose, decompose
from .lut import RootTable, sup_fn, validate_step

SeedFn = Callable[[Fraction], Fraction]


@dataclass(frozen=True)
class TraceStep:
    """One loop pass: value before, the computed correction, value after.

    For until-loop runs the final pass records the correction that met the
    exit test with x_after == x_before.  sqr_exact corrections are signed;
    the seeded variants record the directly computed non-negative
    correction, applied by subtraction.
    """

    k: int
    x_before: Fraction | FixVal
    correction: Fraction
    x_after: Fraction | FixVal


@dataclass(frozen=True)
class Trace:
    algorithm: str
    y: Fraction | FixVal | None
    eps: Fraction | FixVal | None
    final_x: Fraction | FixVal | None
    steps: tuple[TraceStep, ...] = ()
    stp: FixVal | None = None
    n_planned: int | None = None
    seed: Fraction | FixVal | None = None
    notes: dict = field(default_factory=dict)


def _strip_small(p: int, q: int, small: int) -> tuple[int, int]:
    """Divide out every common factor of p, q whose primes divide small."""
    while True:
        g = math.gcd(small, p)
        if g > 1:
            g = math.gcd(g, q)
        if g <= 1:
            return p, q
        p //= g
        q //= g


def _reduced(num: int, den: int, small: int) -> Fraction:
    """Fraction num/den (den > 0) whose common primes all divide small."""
    if num == 0:
        return Fraction(0)
    p, q = _strip_small(num, den, small)
    return fraction_from_coprime(p, q)


def _check_seed(s: Fraction, y: Fraction) -> None:
    if cmp_sqrt(s, y) is Ordering.LESS or s > y:
        raise SeedContractError(
            f"seed {s} violates sqrt({y}) <= seed <= {y}")


def _pow2(k: int) -> Fraction:
    return Fraction(2) ** k


def sqr_exact(y: Fraction, eps: Fraction,
              c_style: bool = False) -> tuple[Fraction, Trace]:
    """Until-loop Newton square root in exact rational arithmetic.

    Semantics: x := y; repeat { d := (y - x*x)/(2x); exit when
    |d| < eps/2; x := x + d }.  The default exit leaves the final
    correction unapplied; c_style=True applies the correction before
    testing (compatibility behaviour with no accuracy claim attached).
    Defined for y >= 1, eps > 0; the result satisfies |x - sqrt(y)| <= eps.
    """
    if y < 1:
        raise DomainError(f"sqr_exact requires y >= 1, got {y}")
    if eps <= 0:
        raise DomainError(f"accuracy must be positive, got {eps}")
    a, b = y.numerator, y.denominator
    en, ed = eps.numerator, eps.denominator
    small = 2 * a * b
    p, q = a, b
    steps: list[TraceStep] = []
    k = 0
    guard = (a * ed).bit_length() + 64
    while True:
        if p <= 0:
            raise InternalInvariantError("iterate left the positive half-line")
        qq = q * q
        d_num = a * qq - b * p * p
        d_den = 2 * b * p * q
        x_now = fraction_from_coprime(p, q)
        d_frac = _reduced(d_num, d_den, small)
        stop = 2 * ed * abs(d_num) < en * d_den
        if stop and not c_style:
            steps.append(TraceStep(k, x_now, d_frac, x_now))
            final = x_now
            break
        p, q = _strip_small(b * p * p + a * qq, d_den, small)
        x_after = fraction_from_coprime(p, q)
        steps.append(TraceStep(k, x_now, d_frac, x_after))
        if stop:
            final = x_after
            break
        k += 1
        if k > guard:
            raise InternalInvariantError("iteration guard exceeded")
    trace = Trace("sqr_exact", y=y, eps=eps, final_x=final,
                  steps=tuple(steps), seed=y,
                  notes={"exit_style": "c" if c_style else "flowchart"})
    return final, trace


def isqr_exact(y: Fraction, eps: Fraction,
               seed: SeedFn) -> tuple[Fraction, Trace]:
    """Seeded until-loop variant computing the correction magnitude
    directly: x := seed(y); repeat { ad := (x*x - y)/(2x); exit when
    ad < eps/2; x := x - ad }.

    The seed must satisfy sqrt(y) <= seed(y) <= y; this is enforced per
    call through the exact oracle.
    """
    if y <= 1:
        raise DomainError(f"isqr_exact requires y > 1, got {y}")
    if eps <= 0:
        raise DomainError(f"accuracy must be positive, got {eps}")
    s = seed(y)
    _check_seed(s, y)
    a, b = y.numerator, y.denominator
    en, ed = eps.numerator, eps.denominator
    small = 2 * a * b
    p, q = s.numerator, s.denominator
    steps: list[TraceStep] = []
    k = 0
    guard = (a * ed).bit_length() + 64
    while True:
        if p <= 0:
            raise InternalInvariantError("iterate left the positive half-line")
        qq = q * q
        ad_num = b * p * p - a * qq
        ad_den = 2 * b * p * q
        x_now = fraction_from_coprime(p, q)
        ad_frac = _reduced(ad_num, ad_den, small)
        if 2 * ed * ad_num < en * ad_den:
            steps.append(TraceStep(k, x_now, ad_frac, x_now))
            final = x_now
            break
        p, q = _strip_small(b * p * p + a * qq, ad_den, small)
        x_after = fraction_from_coprime(p, q)
        steps.append(TraceStep(k, x_now, ad_frac, x_after))
        k += 1
        if k > guard:
            raise InternalInvariantError("iteration guard exceeded")
    trace = Trace("isqr_exact", y=y, eps=eps, final_x=final,
                  steps=tuple(steps), seed=s)
    return final, trace


def _ceil_log2_ratio(num: int, den: int) -> int:
    """ceil(log2(num/den)) for integers num >= den >= 1."""
    t = -((-num) // den)
    return (t - 1).bit_length()


def min_iterations_for_step(stp: FixVal, eps: FixVal) -> int:
    """Smallest n >= 1 with 2**(n-1) * eps >= stp; requires stp >= eps > 0."""
    if stp.profile != eps.profile:
        raise ProfileMismatch("step and accuracy from different grids")
    if eps.count <= 0:
        raise DomainError(f"accuracy must be positive, got {eps}")
    if stp.count < eps.count:
        raise DomainError(f"step {stp} must be at least the accuracy {eps}")
    return 1 + _ceil_log2_ratio(stp.count, eps.count)


def min_legal_iterations(y: Fraction, eps: Fraction,
                         seed_value: Fraction) -> int:
    """Smallest n >= 0 with 2**(n-1) * eps >= seed_value - sqrt(y),
    decided exactly; 0 whenever the seed is already within eps/2."""
    if eps <= 0:
        raise DomainError(f"accuracy must be positive, got {eps}")
    n = 0
    guard = (seed_value.numerator * eps.denominator).bit_length() + 64
    while cmp_sqrt(seed_value - eps * _pow2(n - 1), y) is Ordering.GREATER:
        n += 1
        if n > guard:
            raise InternalInvariantError("iteration-count search diverged")
    return n


def fsqr_exact(y: Fraction, eps: Fraction, seed: SeedFn,
               n: int) -> tuple[Fraction, Trace]:
    """For-loop Newton square root in exact rational arithmetic.

    Runs exactly n iterations from the checked seed.  n is legal when
    2**(n-1) * eps >= seed(y) - sqrt(y) (any larger count is also legal);
    an illegal count raises IterationBudgetError.  The result satisfies
    |x - sqrt(y)| <= eps/2.
    """
    if y <= 1:
        raise DomainError(f"fsqr_exact requires y > 1, got {y}")
    if eps <= 0:
        raise DomainError(f"accuracy must be positive, got {eps}")
    if n < 0:
        raise DomainError(f"iteration count must be >= 0, got {n}")
    s = seed(y)
    _check_seed(s, y)
    if cmp_sqrt(s - eps * _pow2(n - 1), y) is Ordering.GREATER:
        raise IterationBudgetError(
            f"n={n} below the legal minimum for seed {s}")
    a, b = y.numerator, y.denominator
    small = 2 * a * b
    p, q = s.numerator, s.denominator
    steps: list[TraceStep] = []
    for k in range(n):
        if p <= 0:
            raise InternalInvariantError("iterate left the positive half-line")
        qq = q * q
        ad_num = b * p * p - a * qq
        ad_den = 2 * b * p * q
        x_now = fraction_from_coprime(p, q)
        ad_frac = _reduced(ad_num, ad_den, small)
        p, q = _strip_small(b * p * p + a * qq, ad_den, small)
        x_after = fraction_from_coprime(p, q)
        steps.append(TraceStep(k, x_now, ad_frac, x_after))
    final = fraction_from_coprime(p, q)
    trace = Trace("fsqr_exact", y=y, eps=eps, final_x=final,
                  steps=tuple(steps), n_planned=n, seed=s)
    return final, trace


def fix_sqr(y: FixVal, eps: FixVal, table: RootTable,
            n: int) -> tuple[FixVal, Trace]:
    """For-loop Newton square root in grid arithmetic.

    x := seed(y); then exactly n iterations of
    x := (x / 2) + (y / (x + x)) with correctly rounded grid division and
    exact addition.  Requires 1 < y <= sup/2 (so x + x cannot overflow), a
    step configuration valid for eps, and n at least
    min_iterations_for_step(stp, eps).  The result satisfies
    |x - sqrt(y)| < eps/2 + n*step_of_grid.
    """
    profile = y.profile
    if eps.profile != profile or table.profile != profile:
        raise ProfileMismatch("inputs belong to different grids")
    profile.validate()
    d = profile.delta_den
    if y.count <= d:
        raise DomainError(f"fix_sqr requires y > 1, got {y}")
    if 2 * y.count > profile.sup_count:
        raise DomainError(f"fix_sqr requires y <= {profile.sup_value}/2 "
                          f"so the loop's x + x stays in range, got {y}")
    if eps.count <= 0:
        raise DomainError(f"accuracy must be positive, got {eps}")
    step_report = validate_step(table.stp, eps, profile)
    if not step_report.overall:
        names = ", ".join(c.rule for c in step_report.failures())
        raise DomainError(f"step configuration invalid: {names}")
    n_min = min_iterations_for_step(table.stp, eps)
    if n < n_min:
        raise IterationBudgetError(f"n={n} below the minimum {n_min} for "
                                   f"stp={table.stp}, eps={eps}")
    x = sup_fn(y, table)
    x0 = x
    two = profile.from_int(2)
    steps: list[TraceStep] = []
    for k in range(n):
        if x.count <= 0:
            raise InternalInvariantError("iterate left the positive half-line")
        half = fix_div(x, two)
        twice = fix_add(x, x)
        quot = fix_div(y, twice)
        x_new = fix_add(half, quot)
        steps.append(TraceStep(k, x, x_new.value - x.value, x_new))
        x = x_new
    trace = Trace("fix_sqr", y=y, eps=eps, final_x=x, steps=tuple(steps),
                  stp=table.stp, n_planned=n, seed=x0)
    return x, trace


def mix_sqr(y: FixVal, eps: FixVal, table: RootTable) -> tuple[FixVal, Trace]:
    """fix_sqr with the minimal sufficient iteration count.

    Additionally requires eps >= 2*step_of_grid*(2 + ceil(log2(stp/eps)));
    when that fails no iteration count can meet both the convergence and
    the rounding-error budget, and EpsTooSmall is raised.  The result
    satisfies |x - sqrt(y)| < eps.
    """
    profile = y.profile
    if eps.profile != profile or table.profile != profile:
        raise ProfileMismatch("inputs belong to different grids")
    if eps.count <= 0:
        raise DomainError(f"accuracy must be positive, got {eps}")
    step_report = validate_step(table.stp, eps, profile)
    if not step_report.overall:
        names = ", ".join(c.rule for c in step_report.failures())
        raise DomainError(f"step configuration invalid: {names}")
    log_term = _ceil_log2_ratio(table.stp.count, eps.count)
    if eps.count < 2 * (2 + log_term):
        raise EpsTooSmall(
            f"eps={eps} below 2*delta*(2 + ceil(log2(stp/eps))) = "
            f"{Fraction(2 * (2 + log_term), profile.delta_den)}")
    n = min_iterations_for_step(table.stp, eps)
    x, trace = fix_sqr(y, eps, table, n)
    return x, replace(trace, algorithm="mix_sqr")


def flt_sqr(a: FloatVal, eps: FixVal, profile: FloatProfile,
            table: RootTable) -> tuple[FloatVal, Trace]:
    """Square root in the float model: extract the mantissa, even out the
    exponent, run mix_sqr on the adjusted mantissa, halve the exponent.

    Zero maps to zero.  The result satisfies
    |b - sqrt(a)| < (eps + step_of_grid/(2*sqrt(base))) * base**floor(e/2).
    """
    profile.validate()
    if eps.profile != profile.fix:
        raise ProfileMismatch("accuracy belongs to a different grid")
    if table.profile != profile.fix:
        raise ProfileMismatch("table belongs to a different grid")
    if a.is_zero:
        return FloatVal.zero(), Trace("flt_sqr", y=None, eps=eps,
                                      final_x=None, notes={"zero": True})
    man, e = decompose(a)
    if man.profile != profile.fix:
        raise ProfileMismatch("input belongs to a different grid")
    if e % 2 != 0:
        y_fix = fix_mul(man, profile.base_fix)
        z = e - 1
    else:
        y_fix = man
        z = e
    x, inner = mix_sqr(y_fix, eps, table)
    b = compose(x, z // 2, profile)
    notes = dict(inner.notes)
    notes.update({"input": {"man": str(man), "exp": e},
                  "radicand": str(y_fix),
                  "result": {"man": str(b.man), "exp": b.exp}})
    trace = replace(inner, algorithm="flt_sqr", notes=notes)
    return b, trace


def _divisors_descending(n: int) -> list[int]:
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return sorted(out, reverse=True)


def derive_eps_for_ulp(ulp: Fraction, profile: FloatProfile,
                       stp: FixVal) -> FixVal:
    """Largest grid accuracy eps compatible with a half-ulp target.

    Constraints: eps + step_of_grid/(2*sqrt(base)) < ulp/2 (decided
    exactly), eps divides stp, and the mix_sqr iteration-budget
    precondition holds.  Raises NoFeasibleEps when the set is empty.
    """
    profile.validate()
    if ulp <= 0:
        raise DomainError(f"ulp must be positive, got {ulp}")
    if stp.profile != profile.fix:
        raise ProfileMismatch("step belongs to a different grid")
    if stp.count < 2 or profile.fix.sup_count % stp.count != 0:
        raise DomainError(f"step {stp} is not a legal table step")
    d = profile.fix.delta_den
    beta = profile.base
    half_ulp = ulp / 2
    radical_coeff = Fraction(-1, 2 * d * beta)  # -delta/(2*base) as sqrt coeff
    for count in _divisors_descending(stp.count):
        eps_value = Fraction(count, d)
        if not decide_radical_lt(eps_value, half_ulp, radical_coeff,
                                 Fraction(beta)):
            continue
        if count < 2 * (2 + _ceil_log2_ratio(stp.count, count)):
            continue
        return FixVal(count, profile.fix)
    raise NoFeasibleEps(f"no grid accuracy below ulp/2 = {half_ulp} "
                        f"with step {stp} on a 1/{d} grid")
