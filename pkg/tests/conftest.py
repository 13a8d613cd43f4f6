import pytest

from selogic.parsing import parse_signature


@pytest.fixture(scope="session")
def sig():
    """Two bounded labels under one unbounded top, enough for every rule."""
    return parse_signature(
        "labels: u v inf\nunbounded: inf\norder: u <= inf, v <= inf"
    )
