import pytest

from qdouble.groups import make_group

Q8 = "permgen:8;(1,2,3,4)(5,6,7,8);(1,5,3,7)(2,8,4,6)"
D8 = "permgen:4;(1,2,3,4);(1,3)"


@pytest.fixture(scope="session")
def group():
    cache = {}

    def get(spec):
        if spec not in cache:
            cache[spec] = make_group(spec)
        return cache[spec]

    return get
