"""Shared fields and graphs; building tables is the expensive part, so they live for the session"""
import os

import pytest

from app.gf_engine import build_field
from builders import catalog
from builders.colored_graphs import g3_11, g3_5, gp_k

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


@pytest.fixture(scope="session")
def f9():
    return build_field(3, 2)


@pytest.fixture(scope="session")
def f16():
    return build_field(2, 4)


@pytest.fixture(scope="session")
def f25():
    return catalog.field_5_2()


@pytest.fixture(scope="session")
def f81():
    return build_field(3, 4)


@pytest.fixture(scope="session")
def f121():
    return catalog.field_11_2()


@pytest.fixture(scope="session")
def gp3_16(f16):
    return gp_k(f16, 3)


@pytest.fixture(scope="session")
def gp5_81(f81):
    return gp_k(f81, 5)


@pytest.fixture(scope="session")
def gp4_81(f81):
    return gp_k(f81, 4)


@pytest.fixture(scope="session")
def g35():
    return g3_5()


@pytest.fixture(scope="session")
def g311():
    return g3_11()


@pytest.fixture
def correspondence_fixture_path():
    return os.path.join(FIXTURES, 'line_correspondence_g3_11.json')
