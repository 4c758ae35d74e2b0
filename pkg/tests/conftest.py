import pytest

from hklab.field import FieldElement, build_field, degree_representatives

_ACCEPTANCE_LINES = []


def record_acceptance(line: str):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def rep(m: int) -> FieldElement:
    """First orbit representative of degree m inside GF(2^m)."""
    return degree_representatives(build_field(m), m)[0]


@pytest.fixture(scope="session")
def gf4():
    return build_field(2)


@pytest.fixture(scope="session")
def omega(gf4):
    return FieldElement(gf4, 0b10)
