import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mrapriori import kernels
from mrapriori.candidate_store import StoreKind
from mrapriori.core import TransactionDatabase

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ALL_KINDS = list(StoreKind)


@pytest.fixture(params=kernels.available())
def backend(request):
    with kernels.use(request.param) as mod:
        yield mod


@pytest.fixture(params=ALL_KINDS, ids=[k.value for k in ALL_KINDS])
def kind(request):
    return request.param


itemsets = st.lists(st.integers(0, 11), max_size=8).map(lambda xs: tuple(sorted(set(xs))))

databases = st.lists(st.lists(st.integers(0, 11), max_size=8), min_size=1, max_size=25).map(
    TransactionDatabase)


def random_db(rng: random.Random, n_tx=25, n_items=12, max_len=8) -> TransactionDatabase:
    rows = []
    for _ in range(rng.randint(1, n_tx)):
        size = rng.randint(0, min(max_len, n_items))
        rows.append(rng.sample(range(n_items), size))
    return TransactionDatabase(rows)
