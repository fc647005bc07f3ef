from __future__ import annotations

import pytest

from muwm.bincode import binary_pipeline
from muwm.lattice import d_frames_family, weight4_maximum
from muwm.z4code import z4_pipeline

# acceptance lines collected by tests/test_acceptance.py, printed at the end
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def binary3():
    return binary_pipeline(3)


@pytest.fixture(scope="session")
def binary5():
    return binary_pipeline(5)


@pytest.fixture(scope="session")
def z4_2():
    return z4_pipeline(2)


@pytest.fixture(scope="session")
def z4_3():
    return z4_pipeline(3)


@pytest.fixture(scope="session")
def constructed(binary3, binary5, z4_2, z4_3):
    """Every constructed family, keyed by a short label."""
    fams = {
        "binary-m3": binary3.family,
        "binary-m5": binary5.family,
        "z4-m2": z4_2.family,
        "z4-m3": z4_3.family,
    }
    for d in (4, 6, 10):
        fams[f"d-frames-d{d}"] = d_frames_family(d)[0]
    for d in (4, 7, 8, 11):
        fams[f"weight4-d{d}"] = weight4_maximum(d).family
    return fams


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
