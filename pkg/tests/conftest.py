import pytest

from urnsolitaire.urnproc import build_table


@pytest.fixture(scope="session")
def e_table_40():
    return build_table("expected_rounds", 40, 40)
