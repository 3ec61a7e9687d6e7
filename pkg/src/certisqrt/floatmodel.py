"""Software model of a floating-point type over the fix-point grid.

A positive value is an exact pair (mantissa, exponent) with value
mantissa * base**exponent; the mantissa is a grid value in the open
interval (1, sup/base) and the exponent an integer whose admissible range
depends on the grid bounds.  Zero is modeled; negative values are not.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DomainError,
    ExponentRange,
    MantissaRange,
    ProfileMismatch,
    RangeOverflow,
)
from .fixarith import FixProfile, FixVal, quantize
from .report import CheckResult, VerifyReport, failed, passed


@dataclass(frozen=True)
class FloatProfile:
    """Exponent base plus the underlying grid and outer range bounds."""

    base: int
    fix: FixProfile
    inf_f: Fraction
    sup_f: Fraction

    def is_valid(self) -> bool:
        try:
            self.validate()
        except DomainError:
            return False
        return True

    def validate(self) -> None:
        self.fix.validate()
        if self.base < 2:
            raise DomainError(f"base must be an integer >= 2, got {self.base}")
        if Fraction(self.base) > self.fix.sup_value:
            raise DomainError(
                f"base {self.base} is not an integer of the grid range")
        if self.fix.sup_value <= self.base * self.base:
            raise DomainError(
                f"grid upper bound {self.fix.sup_value} must exceed "
                f"base**2 = {self.base * self.base}")
        if self.inf_f <= 2 or self.sup_f <= 2:
            raise DomainError("float range bounds must exceed 2")

    @property
    def exp_min(self) -> int:
        """Smallest admissible exponent.

        When the grid's lower bound is an odd integer the bound is strict,
        which keeps exponent-parity adjustment (subtracting 1 from an odd
        exponent) inside the admissible range.
        """
        fix = self.fix
        inf_is_odd_integer = (fix.inf_count % fix.delta_den == 0
                              and (fix.inf_count // fix.delta_den) % 2 == 1)
        if inf_is_odd_integer:
            return -(fix.inf_count // fix.delta_den) + 1
        return -(fix.inf_count // fix.delta_den)

    @property
    def exp_max(self) -> int:
        return self.fix.sup_count // self.fix.delta_den

    @property
    def base_fix(self) -> FixVal:
        return self.fix.from_int(self.base)


@dataclass(frozen=True)
class FloatVal:
    """Zero, or a positive (mantissa, exponent) pair with its base."""

    man: FixVal | None = None
    exp: int = 0
    base: int = 2

    @property
    def is_zero(self) -> bool:
        return self.man is None

    @staticmethod
    def zero() -> "FloatVal":
        return FloatVal(None, 0)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"{self.man}*{self.base}^{self.exp}"


def compose(man: FixVal, exp: int, profile: FloatProfile) -> FloatVal:
    """Couple a mantissa and an exponent into a positive value."""
    if man.profile != profile.fix:
        raise ProfileMismatch("mantissa belongs to a different grid")
    d = profile.fix.delta_den
    if not (man.count > d and man.count * profile.base < profile.fix.sup_count):
        raise MantissaRange(
            f"mantissa {man} outside (1, "
            f"{profile.fix.sup_value}/{profile.base})")
    if not (profile.exp_min <= exp <= profile.exp_max):
        raise ExponentRange(
            f"exponent {exp} outside [{profile.exp_min}, {profile.exp_max}]")
    return FloatVal(man, exp, profile.base)


def decompose(a: FloatVal) -> tuple[FixVal, int]:
    """Extract the stored (mantissa, exponent) pair of a positive value."""
    if a.is_zero:
        raise DomainError("zero has no mantissa/exponent decomposition")
    assert a.man is not None
    return a.man, a.exp


def value_of(a: FloatVal) -> Fraction:
    """Exact rational value: mantissa * base**exponent, or 0 for zero."""
    if a.is_zero:
        return Fraction(0)
    assert a.man is not None
    return a.man.value * Fraction(a.base) ** a.exp


def encode_rational(q: Fraction, profile: FloatProfile) -> tuple[FloatVal, bool]:
    """Normalize a non-negative rational into the model.

    Picks the unique exponent e with q/base**e in (1, base], quantizes the
    mantissa to the grid (nearest, nudged up if that collapses onto the
    excluded endpoint 1), and reports whether the encoding is exact.
    """
    profile.validate()
    if q < 0:
        raise DomainError(f"only non-negative values are modeled, got {q}")
    if q == 0:
        return FloatVal.zero(), True
    big = Fraction(profile.base)
    # unique e with base**e < q <= base**(e+1)
    bits = q.numerator.bit_length() - q.denominator.bit_length()
    e = int(math.floor(bits / math.log2(profile.base)))
    while big ** e >= q:
        e -= 1
    while big ** (e + 1) < q:
        e += 1
    if e > profile.exp_max or e < profile.exp_min:
        raise RangeOverflow(f"{q} needs exponent {e}, outside "
                            f"[{profile.exp_min}, {profile.exp_max}]")
    man_exact = q / big ** e
    man = quantize(man_exact, profile.fix, "nearest")
    if man.count <= profile.fix.delta_den:
        # nearest rounding collapsed onto the excluded endpoint 1
        man = quantize(man_exact, profile.fix, "up")
    encoded = compose(man, e, profile)
    return encoded, man.value == man_exact


def check_float_profile(profile: FloatProfile) -> VerifyReport:
    """Reportable version of the float-profile validity rules."""
    checks: list[CheckResult] = []

    def rule(name: str, rule_id: str, ok: bool, witness: dict) -> None:
        checks.append(passed(name, rule_id, witness) if ok
                      else failed(name, rule_id, witness))

    rule("underlying grid valid", "float.fix-valid", profile.fix.is_valid(), {})
    rule("base at least two", "float.base-min",
         profile.base >= 2, {"base": profile.base})
    rule("base inside the grid integers", "float.base-in-grid",
         Fraction(profile.base) <= profile.fix.sup_value,
         {"base": profile.base, "sup": profile.fix.sup_value})
    rule("grid bound exceeds base squared", "float.sup-over-base-squared",
         profile.fix.sup_value > profile.base * profile.base,
         {"sup": profile.fix.sup_value, "base_squared": profile.base ** 2})
    rule("float range bounds above two", "float.range-min",
         profile.inf_f > 2 and profile.sup_f > 2,
         {"inf_f": profile.inf_f, "sup_f": profile.sup_f})
    subject = f"float-profile base={profile.base}"
    return VerifyReport(subject, tuple(checks))
