from fractions import Fraction
from pathlib import Path

import pytest

from certisqrt.fixarith import FixProfile
from certisqrt.floatmodel import FloatProfile
from certisqrt.lut import build_root_table

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def demo_profile() -> FixProfile:
    # 1/100 grid on [-16, 16]
    return FixProfile(100, 1600, 1600)


@pytest.fixture(scope="session")
def demo_stp(demo_profile):
    return demo_profile.val(25)


@pytest.fixture(scope="session")
def demo_eps(demo_profile):
    return demo_profile.val(25)


@pytest.fixture(scope="session")
def demo_table(demo_profile, demo_stp):
    return build_root_table(demo_profile, demo_stp)


@pytest.fixture(scope="session")
def demo_float_profile(demo_profile) -> FloatProfile:
    return FloatProfile(2, demo_profile, Fraction(65536), Fraction(65536))


@pytest.fixture(scope="session")
def micro_profile() -> FixProfile:
    # 1/10 grid on [-4, 4]
    return FixProfile(10, 40, 40)
