import os
import sys

import pytest

TESTS_DIR = os.path.dirname(__file__)
FIXTURES = os.path.join(TESTS_DIR, "..", "fixtures")

sys.path.insert(0, TESTS_DIR)


def fixture_path(*parts: str) -> str:
    return os.path.join(FIXTURES, *parts)


@pytest.fixture
def reference_model():
    from qmadapt.fixtures import embedded_reference_model

    return embedded_reference_model()


@pytest.fixture
def target_goal():
    from qmadapt.fixtures import target_goal

    return target_goal()


@pytest.fixture
def walkthrough():
    from qmadapt.fixtures import walkthrough_model

    return walkthrough_model()
