import pytest

from repcount import build, parse_spec


@pytest.fixture(scope="session")
def g12():
    return build(parse_spec("g12"))


@pytest.fixture(scope="session")
def g24():
    return build(parse_spec("g24"))


@pytest.fixture(scope="session")
def g29():
    return build(parse_spec("g29"))


@pytest.fixture(scope="session")
def g31():
    return build(parse_spec("g31"))


@pytest.fixture(scope="session")
def exceptional_groups(g12, g24, g29, g31):
    return {"g12": g12, "g24": g24, "g29": g29, "g31": g31}
