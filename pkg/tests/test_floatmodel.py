from fractions import Fraction as F

import pytest

from certisqrt.errors import (
    DomainError,
    ExponentRange,
    MantissaRange,
    RangeOverflow,
)
from certisqrt.fixarith import FixProfile
from certisqrt.floatmodel import (
    FloatProfile,
    FloatVal,
    check_float_profile,
    compose,
    decompose,
    encode_rational,
    value_of,
)


@pytest.fixture
def prof(demo_profile, demo_float_profile):
    return demo_float_profile


class TestProfile:
    def test_demo_valid(self, prof):
        prof.validate()
        assert prof.exp_min == -16
        assert prof.exp_max == 16

    def test_sup_must_exceed_base_squared(self):
        fix = FixProfile(10, 40, 40)  # sup = 4 = base**2
        with pytest.raises(DomainError):
            FloatProfile(2, fix, F(8), F(8)).validate()

    def test_odd_inf_shrinks_exponent_range(self):
        fix = FixProfile(10, 30, 90)  # inf = 3, an odd integer
        fprof = FloatProfile(2, fix, F(8), F(8))
        assert fprof.exp_min == -2
        assert fprof.exp_max == 9

    def test_fractional_inf_uses_floor(self):
        fix = FixProfile(10, 35, 90)  # inf = 3.5
        fprof = FloatProfile(2, fix, F(8), F(8))
        assert fprof.exp_min == -3

    def test_report_flags_failures(self):
        fix = FixProfile(10, 40, 40)
        report = check_float_profile(FloatProfile(2, fix, F(8), F(8)))
        assert not report.overall
        assert {c.rule for c in report.failures()} == \
            {"float.sup-over-base-squared"}


class TestComposeDecompose:
    def test_accessor(self, demo_profile, prof):
        a = compose(demo_profile.val(150), 3, prof)
        man, exp = decompose(a)
        assert man.count == 150 and exp == 3

    def test_value(self, demo_profile, prof):
        assert value_of(compose(demo_profile.val(150), 3, prof)) == 12
        assert value_of(compose(demo_profile.val(173), 1, prof)) == F(173, 50)
        assert value_of(compose(demo_profile.val(150), -2, prof)) == F(3, 8)

    def test_zero(self):
        assert value_of(FloatVal.zero()) == 0
        with pytest.raises(DomainError):
            decompose(FloatVal.zero())

    def test_mantissa_range(self, demo_profile, prof):
        with pytest.raises(MantissaRange):
            compose(demo_profile.val(90), 1, prof)   # 0.9 <= 1
        with pytest.raises(MantissaRange):
            compose(demo_profile.val(100), 0, prof)  # exactly 1 excluded
        with pytest.raises(MantissaRange):
            compose(demo_profile.val(800), 0, prof)  # 8 = sup/base excluded

    def test_exponent_range(self, demo_profile, prof):
        with pytest.raises(ExponentRange):
            compose(demo_profile.val(150), 17, prof)
        with pytest.raises(ExponentRange):
            compose(demo_profile.val(150), -17, prof)


class TestEncode:
    def test_twelve_exact(self, prof):
        val, exact = encode_rational(F(12), prof)
        assert exact and val.man.count == 150 and val.exp == 3

    def test_power_of_base_normalizes_down(self, prof):
        val, exact = encode_rational(F(2), prof)
        assert exact and val.man.count == 200 and val.exp == 0

    def test_third_rounds(self, prof):
        val, exact = encode_rational(F(1, 3), prof)
        assert not exact
        assert val.man.count == 133 and val.exp == -2

    def test_zero_trivial_path(self, prof):
        val, exact = encode_rational(F(0), prof)
        assert exact and val.is_zero

    def test_negative_rejected(self, prof):
        with pytest.raises(DomainError):
            encode_rational(F(-1), prof)

    def test_out_of_range(self, prof):
        with pytest.raises(RangeOverflow):
            encode_rational(F(2) ** 40, prof)
        with pytest.raises(RangeOverflow):
            encode_rational(F(1, 2 ** 40), prof)

    def test_exact_flag_iff_value_roundtrips(self, prof):
        for q in [F(3), F(7, 2), F(12), F(1, 3), F(5, 7), F(101, 100)]:
            val, exact = encode_rational(q, prof)
            assert exact == (value_of(val) == q)

    def test_near_one_mantissa_nudged_up(self, prof):
        # 1 + 1/1000 scales to a mantissa that nearest-rounds onto the
        # excluded endpoint; encoding must keep the mantissa above 1
        val, exact = encode_rational(F(1001, 1000), prof)
        assert not exact
        assert val.man.count > prof.fix.delta_den


class TestRoundTrip:
    def test_exhaustive_small_grid(self):
        fix = FixProfile(10, 90, 90)
        fprof = FloatProfile(2, fix, F(8), F(8))
        seen = {}
        for count in range(11, 45):  # mantissa in (1, 4.5); 4.5 = sup/base
            for exp in range(fprof.exp_min, fprof.exp_max + 1):
                try:
                    a = compose(fix.val(count), exp, fprof)
                except MantissaRange:
                    continue
                man, e = decompose(a)
                assert compose(man, e, fprof) == a
                v = value_of(a)
                assert v == F(count, 10) * F(2) ** exp
                # normalized pairs with mantissa in (1, base] are unique
                if F(1) < man.value <= 2:
                    assert v not in seen, (seen[v], (count, exp))
                    seen[v] = (count, exp)

    def test_encode_reproduces_composed_values(self):
        fix = FixProfile(10, 90, 90)
        fprof = FloatProfile(2, fix, F(8), F(8))
        for count in range(11, 21):  # mantissa in (1, 2]
            for exp in (-2, 0, 3):
                a = compose(fix.val(count), exp, fprof)
                back, exact = encode_rational(value_of(a), fprof)
                assert exact
                assert back == a
