import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from conjforge.liealg import chevalley_basis
from conjforge.rootsys import RootSystemKind, build_root_system, builtin_order

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SMALL_KINDS = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2"]

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE = {}


def setup(kind: str):
    rs = build_root_system(RootSystemKind.parse(kind))
    return chevalley_basis(rs), builtin_order(rs)


def rationals(bound=4, den=8, nonzero=False):
    s = st.fractions(min_value=-bound, max_value=bound, max_denominator=den)
    return s.filter(bool) if nonzero else s


@st.composite
def simple_case(draw, rs, bound=3):
    """A unipotent with every simple entry nonzero."""
    from conjforge.unipotent import UnipotentCoords
    coords = {}
    for r in rs.positives:
        coords[r] = draw(rationals(bound, nonzero=rs.is_simple(r)))
    return UnipotentCoords(coords)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
