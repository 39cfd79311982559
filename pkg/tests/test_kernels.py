"""The compiled and pure-Python kernels must agree on counts and op counters."""
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mrapriori import kernels
from mrapriori.candidate_store import HashTreeParams, StoreKind, new_store

needs_compiled = pytest.mark.skipif("compiled" not in kernels.available(),
                                    reason="compiled kernels not built")


def _run(kind, params, cands, rows, backend):
    with kernels.use(backend):
        store = new_store(kind, len(cands[0]), params)
        for c in cands:
            store.insert(c)
        ops = store.count(rows)
        return store.extract_counted(), ops


@needs_compiled
@pytest.mark.parametrize("kind", list(StoreKind))
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(1, 4),
       width=st.integers(2, 7), leaf=st.sampled_from([None, 1, 2, 5]))
def test_backends_agree(kind, seed, k, width, leaf):
    rng = random.Random(seed)
    universe = range(rng.randint(k, 15))
    cands = sorted({tuple(sorted(rng.sample(universe, k))) for _ in range(rng.randint(1, 40))})
    rows = [sorted(rng.sample(universe, rng.randint(0, len(universe)))) for _ in range(20)]
    params = HashTreeParams(width, leaf)
    assert _run(kind, params, cands, rows, "python") == _run(kind, params, cands, rows, "compiled")


def test_active_backend_prefers_compiled():
    if "compiled" in kernels.available():
        assert kernels.active().NAME in ("compiled", "python")  # env may force fallback
    else:
        assert kernels.active().NAME == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get("fortran")


def test_use_restores_previous():
    before = kernels.active()
    with kernels.use("python"):
        assert kernels.active().NAME == "python"
    assert kernels.active() is before
