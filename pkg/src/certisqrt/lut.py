"""Step configuration, the pre-computed root table, and the seed function.

The table stores, for every step multiple v in (1, sup], the least grid
value g with g**2 >= v, so g - step_of_grid < sqrt(v) <= g.  The seed of
the table-backed square-root algorithms is min(u, root[round_up(u)]),
which is sandwiched between sqrt(u) and u and lies within one table step
of sqrt(u).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DomainError,
    InternalInvariantError,
    ProfileMismatch,
    RangeOverflow,
    ResourceLimit,
)
from .exact import Ordering, cmp_sqrt
from .fixarith import FixProfile, FixVal
from .report import CheckResult, VerifyReport, failed, passed

ENV_MAX_TABLE = "CERTISQRT_MAX_TABLE"
DEFAULT_MAX_TABLE = 1_000_000


@dataclass(frozen=True)
class StepConfig:
    """Table step and target accuracy, both grid values."""

    stp: FixVal
    eps: FixVal


@dataclass(frozen=True)
class RootTable:
    """Root counts for index values k*stp, k in [k_min, k_min+len-1]."""

    profile: FixProfile
    stp: FixVal
    k_min: int
    roots: tuple[int, ...]

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.roots) - 1

    def __len__(self) -> int:
        return len(self.roots)

    def index_value(self, k: int) -> FixVal:
        return FixVal(k * self.stp.count, self.profile)

    def root_at(self, k: int) -> FixVal:
        if not self.k_min <= k <= self.k_max:
            raise DomainError(f"table index {k} outside "
                              f"[{self.k_min}, {self.k_max}]")
        return FixVal(self.roots[k - self.k_min], self.profile)

    def items(self):
        for offset, count in enumerate(self.roots):
            k = self.k_min + offset
            yield self.index_value(k), FixVal(count, self.profile)


def validate_step(stp: FixVal, eps: FixVal, profile: FixProfile) -> VerifyReport:
    """Report whether (stp, eps) is a legal step configuration."""
    checks: list[CheckResult] = []

    def rule(name: str, rule_id: str, ok: bool, witness: dict) -> None:
        checks.append(passed(name, rule_id, witness) if ok
                      else failed(name, rule_id, witness))

    rule("step positive", "step.positive", stp.count > 0, {"stp": str(stp)})
    rule("accuracy positive", "step.eps-positive",
         eps.count > 0, {"eps": str(eps)})
    rule("step is a multiple of the accuracy", "step.multiple-of-eps",
         eps.count > 0 and stp.count % eps.count == 0,
         {"stp": str(stp), "eps": str(eps)})
    rule("step divides the range bound", "step.divides-sup",
         stp.count > 0 and profile.sup_count % stp.count == 0,
         {"stp": str(stp), "sup": profile.sup_value})
    rule("step spans at least two grid units", "step.min-two-units",
         stp.count >= 2, {"stp_count": stp.count})
    subject = f"step stp={stp} eps={eps}"
    return VerifyReport(subject, tuple(checks))


def table_size_limit() -> int:
    raw = os.environ.get(ENV_MAX_TABLE)
    if raw is None:
        return DEFAULT_MAX_TABLE
    try:
        return int(raw)
    except ValueError as exc:
        raise DomainError(f"{ENV_MAX_TABLE} must be an integer, "
                          f"got {raw!r}") from exc


def build_root_table(profile: FixProfile, stp: FixVal,
                     max_entries: int | None = None) -> RootTable:
    """Pre-compute least-upper-root entries for every step multiple.

    For index value v = count_v/d the entry is ceil(sqrt(count_v*d)) in
    grid counts: the least count g with (g/d)**2 >= v.
    """
    profile.validate()
    if stp.profile != profile:
        raise ProfileMismatch("step value belongs to a different grid")
    if stp.count <= 0:
        raise DomainError("step must be positive")
    if profile.sup_count % stp.count != 0:
        raise DomainError(f"step {stp} does not divide the range bound "
                          f"{profile.sup_value}")
    if stp.count < 2:
        raise DomainError("step must span at least two grid units")
    d = profile.delta_den
    k_min = d // stp.count + 1
    k_max = profile.sup_count // stp.count
    size = k_max - k_min + 1
    limit = table_size_limit() if max_entries is None else max_entries
    if size > limit:
        raise ResourceLimit(f"table would need {size} entries, cap {limit}")
    roots = []
    for k in range(k_min, k_max + 1):
        target = k * stp.count * d  # g*g >= target in counts
        g = math.isqrt(target)
        if g * g < target:
            g += 1
        if not (g * g >= target and (g - 1) * (g - 1) < target):
            raise InternalInvariantError(f"root entry for index {k} broken")
        roots.append(g)
    return RootTable(profile, stp, k_min, tuple(roots))


def round_up_to_step(u: FixVal, stp: FixVal) -> FixVal:
    """Smallest step multiple >= u; defined for u > 1."""
    profile = u.profile
    if stp.profile != profile:
        raise ProfileMismatch("step value belongs to a different grid")
    if u.count <= profile.delta_den:
        raise DomainError(f"round up to step requires u > 1, got {u}")
    k = -((-u.count) // stp.count)
    count = k * stp.count
    if count > profile.sup_count:
        raise RangeOverflow(f"rounded value {count}/{profile.delta_den} "
                            f"exceeds the range bound")
    return FixVal(count, profile)


def sup_fn(u: FixVal, table: RootTable) -> FixVal:
    """Seed value min(u, root[round_up(u)]) for 1 < u <= sup.

    The result s satisfies sqrt(u) <= s <= u and s - sqrt(u) <= stp; both
    are re-asserted on every call through the exact oracle.
    """
    profile = u.profile
    if table.profile != profile:
        raise ProfileMismatch("table belongs to a different grid")
    if not profile.delta_den < u.count <= profile.sup_count:
        raise DomainError(f"seed function requires 1 < u <= "
                          f"{profile.sup_value}, got {u}")
    v = round_up_to_step(u, table.stp)
    root = table.root_at(v.count // table.stp.count)
    result = u if u.count < root.count else root
    if cmp_sqrt(result.value, u.value) is Ordering.LESS:
        raise InternalInvariantError(f"seed {result} fell below sqrt({u})")
    if cmp_sqrt(result.value - table.stp.value, u.value) is Ordering.GREATER:
        raise InternalInvariantError(f"seed {result} more than one step "
                                     f"above sqrt({u})")
    return result


def sup_rational(u: Fraction, table: RootTable) -> Fraction:
    """Seed for exact-arithmetic runs: table-backed inside (1, sup],
    identity above the table range."""
    if u <= 1:
        raise DomainError(f"seed function requires u > 1, got {u}")
    profile = table.profile
    if u > profile.sup_value:
        return u
    stp_value = table.stp.value
    k = math.ceil(u / stp_value)
    root = table.root_at(k)
    return min(u, root.value)
