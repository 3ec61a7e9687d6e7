import dataclasses
from fractions import Fraction as F

import pytest

from certisqrt.errors import UsageError
from certisqrt.exact import Ordering
from certisqrt.lut import sup_fn
from certisqrt.newton import Trace, fsqr_exact, sqr_exact
from certisqrt.verify import (
    adjust_runs,
    applied_corrections,
    balance_sweep,
    check_fsqr_annotations,
    check_sqr_annotations,
    check_table_properties,
    cmp_abs_err,
    grid_values,
    iteration_cap,
    monotonicity_probe,
    run_adjust_suite,
    run_fsqr_suite,
    run_sqr_suite,
    sample_rationals,
)


class TestIterationCap:
    def test_reference_value(self):
        # 1 + ceil(log2((2 - sqrt(2)) / (1/100))) = 7
        assert iteration_cap(F(2), F(1, 100)) == 7

    def test_perfect_square_boundary(self):
        # (4 - 2)/2 = 1 exactly: ceil(log2 1) = 0
        assert iteration_cap(F(4), F(2)) == 1

    def test_huge_eps_clamps_to_zero(self):
        assert iteration_cap(F(4), F(100)) == 0

    def test_matches_float_estimate(self):
        import math
        for y, eps in [(F(3), F(1, 7)), (F(10), F(1, 64)),
                       (F(100001, 100), F(3, 1000))]:
            cap = iteration_cap(y, eps)
            est = 1 + math.ceil(math.log2((float(y) - math.sqrt(float(y)))
                                          / float(eps)))
            assert abs(cap - est) <= 1


class TestCheckSqr:
    def test_reference_run(self):
        y, eps = F(2), F(1, 100)
        _, trace = sqr_exact(y, eps)
        report = check_sqr_annotations(trace, y, eps)
        assert report.overall
        by_rule = {c.rule: c for c in report.checks}
        assert by_rule["sqr.iteration-cap"].witness["cap"] == 7
        assert by_rule["sqr.iteration-cap"].witness["applied"] == 2
        assert by_rule["sqr.iteration-cap"].witness["loop_passes"] == 3

    def test_trivial_one(self):
        _, trace = sqr_exact(F(1), F(1))
        report = check_sqr_annotations(trace, F(1), F(1))
        assert report.overall

    def test_applied_corrections_counts_changes(self):
        _, trace = sqr_exact(F(4), F(1, 2))
        assert applied_corrections(trace) == 2

    def test_tampered_invariant_fails_only_invariant(self):
        y, eps = F(2), F(1, 100)
        _, trace = sqr_exact(y, eps)
        bad_step = dataclasses.replace(trace.steps[1], x_before=F(1))
        bad = dataclasses.replace(
            trace, steps=(trace.steps[0], bad_step) + trace.steps[2:])
        report = check_sqr_annotations(bad, y, eps)
        assert {c.rule for c in report.failures()} == {"sqr.loop-invariant"}
        assert report.failures()[0].witness["k"] == 1

    def test_wrong_algorithm_rejected(self):
        _, trace = fsqr_exact(F(3), F(1, 4), lambda _y: F(174, 100), 1)
        with pytest.raises(UsageError):
            check_sqr_annotations(trace, F(3), F(1, 4))


class TestCheckFsqr:
    def test_single_step_pass(self):
        y, eps, s = F(3), F(1, 4), F(174, 100)
        _, trace = fsqr_exact(y, eps, lambda _y: s, 1)
        report = check_fsqr_annotations(trace, y, eps, s)
        assert report.overall

    def test_zero_steps_vacuous(self):
        y, eps, s = F(4), F(1, 4), F(2)
        _, trace = fsqr_exact(y, eps, lambda _y: s, 0)
        report = check_fsqr_annotations(trace, y, eps, s)
        assert report.overall

    def test_forced_low_n_fails_postcondition(self):
        # hand-build a run that stopped far from the root: the checker
        # must flag the final bound and nothing else
        y, eps, s = F(3), F(1, 100), F(3)
        trace = Trace("fsqr_exact", y=y, eps=eps, final_x=s, steps=(),
                      n_planned=0, seed=s)
        report = check_fsqr_annotations(trace, y, eps, s)
        assert {c.rule for c in report.failures()} == {"fsqr.final-error"}
        assert "err_display" in report.failures()[0].witness


class TestAdjustRuns:
    def test_reference_gap(self, demo_profile, demo_table, demo_eps):
        records, report = adjust_runs(demo_profile.val(300), demo_eps,
                                      demo_table, 1)
        assert report.overall
        assert records[0].gap == 0
        assert records[1].gap == F(3, 1450)  # |5023/2900 - 173/100|
        assert records[1].bound == F(1, 100)

    def test_exact_square_all_zero(self, demo_profile, demo_table, demo_eps):
        records, report = adjust_runs(demo_profile.val(400), demo_eps,
                                      demo_table, 4)
        assert report.overall
        assert all(r.gap == 0 for r in records)

    def test_seeds_agree(self, demo_profile, demo_table, demo_eps):
        y = demo_profile.val(613)
        records, _ = adjust_runs(y, demo_eps, demo_table, 3)
        assert records[0].x_exact == sup_fn(y, demo_table).value

    def test_random_slice(self, demo_profile, demo_table, demo_eps):
        for count in range(101, 800, 37):
            for n in (1, 2, 4):
                _, report = adjust_runs(demo_profile.val(count), demo_eps,
                                        demo_table, n)
                assert report.overall, (count, n)

    def test_finer_accuracy_slice(self, demo_profile, demo_table):
        # 1/20 divides the 1/4 step on the 1/100 grid; minimum n is 4
        eps = demo_profile.val(5)
        for count in range(101, 800, 23):
            for n in (4, 5, 6):
                _, report = adjust_runs(demo_profile.val(count), eps,
                                        demo_table, n)
                assert report.overall, (count, n)


class TestMonotonicityProbe:
    def test_witness_fixture(self, demo_profile, demo_table, demo_eps,
                             fixtures_dir):
        import json
        doc = json.loads((fixtures_dir / "more_worse_witness.json")
                         .read_text())
        rows = monotonicity_probe(demo_profile.val(doc["y_count"]), demo_eps,
                                  demo_table, doc["n_min"], doc["n_max"])
        increases = [r.n for r in rows if r.error_increased]
        assert increases == doc["expect_increase_at"]
        assert all(r.within_bound for r in rows)

    def test_exact_square_never_increases(self, demo_profile, demo_table,
                                          demo_eps):
        rows = monotonicity_probe(demo_profile.val(400), demo_eps,
                                  demo_table, 1, 6)
        assert not any(r.error_increased for r in rows)
        assert all(r.err_display == 0 for r in rows)


class TestCmpAbsErr:
    def test_ordering(self):
        assert cmp_abs_err(F(3, 2), F(7, 5), F(2), ) is Ordering.GREATER
        assert cmp_abs_err(F(7, 5), F(3, 2), F(2)) is Ordering.LESS
        assert cmp_abs_err(F(3, 2), F(3, 2), F(2)) is Ordering.EQUAL

    def test_symmetric_pair(self):
        # 1.3 and 1.5 straddle sqrt(2) = 1.41421...
        assert cmp_abs_err(F(13, 10), F(3, 2), F(2)) is Ordering.GREATER


class TestTableProperties:
    def test_demo_passes(self, demo_table, demo_profile, demo_stp, demo_eps):
        report = check_table_properties(demo_table, demo_profile, demo_stp,
                                        demo_eps)
        assert report.overall

    def test_single_entry_corruption(self, demo_table, demo_profile,
                                     demo_stp, demo_eps):
        roots = list(demo_table.roots)
        roots[7] -= 1  # one grid step down breaks the upper-root rule
        bad = dataclasses.replace(demo_table, roots=tuple(roots))
        report = check_table_properties(bad, demo_profile, demo_stp, demo_eps)
        assert {c.rule for c in report.failures()} == {"table.root"}

    def test_step_mismatch_detected(self, demo_table, demo_profile,
                                    demo_eps):
        report = check_table_properties(demo_table, demo_profile,
                                        demo_profile.val(50), demo_eps)
        failed_rules = {c.rule for c in report.failures()}
        assert "table.consistent" in failed_rules


class TestBalanceSweep:
    def test_demo_three_candidates(self, demo_profile, demo_eps):
        rows = balance_sweep(demo_profile, demo_eps,
                             [demo_profile.val(25), demo_profile.val(50),
                              demo_profile.val(100)])
        assert [r.table_size for r in rows] == [64, 32, 16]
        assert [r.n for r in rows] == [1, 2, 3]
        assert rows[0].predicted_bound == F(1, 8) + F(1, 100)
        assert all(r.all_within_predicted for r in rows)

    def test_single_candidate_equal_to_eps(self, demo_profile, demo_eps):
        rows = balance_sweep(demo_profile, demo_eps, [demo_profile.val(25)])
        assert len(rows) == 1 and rows[0].n == 1

    def test_invalid_candidate_marked(self, demo_profile, demo_eps):
        rows = balance_sweep(demo_profile, demo_eps, [demo_profile.val(30)])
        assert not rows[0].valid


class TestSuites:
    def test_sqr_suite_samples(self):
        report = run_sqr_suite(sample_rationals(25, seed=7))
        assert report.overall
        assert len(report.checks) == 25

    def test_sample_rationals_deterministic(self):
        assert sample_rationals(10, seed=3) == sample_rationals(10, seed=3)
        assert sample_rationals(10, seed=3) != sample_rationals(10, seed=4)

    def test_sample_rationals_ranges(self):
        for y, eps in sample_rationals(200, seed=1):
            assert 1 < y < 10 ** 6
            assert F(1, 10 ** 6) < eps < 1

    def test_fsqr_suite_slice(self, demo_profile, demo_table, demo_eps):
        ys = grid_values(demo_profile, F(3))[:50]
        report = run_fsqr_suite(demo_table, demo_eps, ys)
        assert report.overall

    def test_adjust_suite_slice(self, demo_profile, demo_table, demo_eps):
        ys = grid_values(demo_profile, F(2))[:20]
        report = run_adjust_suite(demo_table, demo_eps, ys, ns=(1, 2))
        assert report.overall

    def test_grid_values_range(self, demo_profile):
        vals = grid_values(demo_profile, F(8))
        assert len(vals) == 700
        assert vals[0].count == 101 and vals[-1].count == 800


def test_report_serialization_deterministic(demo_profile, demo_table,
                                            demo_stp, demo_eps):
    a = check_table_properties(demo_table, demo_profile, demo_stp, demo_eps)
    b = check_table_properties(demo_table, demo_profile, demo_stp, demo_eps)
    assert a.to_json() == b.to_json()


def test_trace_step_sequence_contiguous(demo_profile, demo_table, demo_eps):
    from certisqrt.newton import fix_sqr
    _, trace = fix_sqr(demo_profile.val(523), demo_eps, demo_table, 5)
    assert [s.k for s in trace.steps] == list(range(5))
