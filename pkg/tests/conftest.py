import hypothesis
import pytest

from hypoell import SU2, Torus1

# Deterministic property runs: the suite doubles as an acceptance artifact,
# so derandomize and drop the per-example deadline (grid solves vary).
hypothesis.settings.register_profile(
    "suite", deadline=None, derandomize=True, max_examples=100)
hypothesis.settings.load_profile("suite")


@pytest.fixture(scope="session")
def su2():
    return SU2()


@pytest.fixture(scope="session")
def torus():
    return Torus1()
