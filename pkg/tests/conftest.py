import functools

import pytest

from drgibbs import oracle

# Graph construction is the slow part of the suite; share instances per process.
oracle.battery_instance = functools.lru_cache(maxsize=None)(oracle.battery_instance)


@pytest.fixture(scope="session")
def j2_4_2():
    return oracle.battery_instance("j2_4_2")
