import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from radcoulomb.profiles import gaussian_mixture, load_profile, make_tent  # noqa: E402


@pytest.fixture
def gaussian():
    return load_profile("builtin:gaussian")


@pytest.fixture
def tent():
    return make_tent(1.0, 2.0, 1.0)


@pytest.fixture
def mixture2():
    return gaussian_mixture([1.0, -0.6], [0.5, 2.0])


@pytest.fixture
def ball():
    return load_profile("builtin:ball")


@pytest.fixture
def zero():
    return load_profile("builtin:zero")


@pytest.fixture(params=["gaussian", "tent", "mixture2"])
def fixture_profile(request):
    return request.getfixturevalue(request.param)
