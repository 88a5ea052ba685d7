import pytest

from stablehit import StableIndex


@pytest.fixture(params=[1.2, 1.5, 1.8], ids=lambda a: f"alpha={a}")
def a(request):
    return StableIndex(request.param)
