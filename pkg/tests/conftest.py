import pytest

from hqe.field import Field


@pytest.fixture
def laurent():
    return Field.laurent()


@pytest.fixture
def padic7():
    return Field.padic(7)


@pytest.fixture
def padic2():
    return Field.padic(2)


@pytest.fixture(params=["laurent-q", "padic-7", "padic-2"])
def any_field(request):
    if request.param == "laurent-q":
        return Field.laurent()
    return Field.padic(int(request.param.split("-")[1]))
