import pytest

from vfactor.builder import build_example_n4, build_third_family


@pytest.fixture(scope="session")
def n4_bundle():
    """(model, tmap, closed_form) for the 4-variable fixture."""
    return build_example_n4()


@pytest.fixture(scope="session")
def third7():
    """(model, tmap) for the deterministic third-family n=7 build."""
    return build_third_family(7, seed=0)
