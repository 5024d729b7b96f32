from __future__ import annotations

import pytest

from filled_groups import build_group
from filled_groups.elemset import bits_to_indices, indices_to_bits
from filled_groups.kernels import (
    MODE_ALL,
    MODE_FIRST,
    MODE_NONFILLING,
    available_backends,
    kernel_for,
    stream_state,
)
from filled_groups._purepy import GOLDEN, mix64

import oracles

GROUPS = ["C(4)", "C(7)", "D(8)", "Q(8)", "D(10)", "C(3)xC(3)", "D(8)xC(2)", "ESC4(16)", "D(18)", "Q(8)xC(3)", "D(22)"]

needs_compiled = pytest.mark.skipif("compiled" not in available_backends(), reason="extension not built")


def test_splitmix_reference_value():
    # first output of the reference splitmix64 generator seeded with 0
    assert mix64(GOLDEN) == 0xE220A8397B1DCDAF


def test_stream_states_differ():
    states = {stream_state(seed, r) for seed in range(5) for r in range(200)}
    assert len(states) == 1000


@pytest.mark.parametrize("backend", available_backends())
@pytest.mark.parametrize("spec", GROUPS)
def test_analyze_matches_oracle(backend, spec):
    g = build_group(spec)
    k = kernel_for(g, backend)
    for members in oracles.random_product_free_sets(g.table, 60, seed=3):
        cover, block = k.analyze(members)
        assert set(bits_to_indices(cover)) == {0} | set(members) | oracles.products(g.table, members)
        assert set(bits_to_indices(((1 << g.order) - 1) & ~block)) == oracles.addable(g.table, members)


@pytest.mark.parametrize("backend", available_backends())
@pytest.mark.parametrize("spec", GROUPS)
def test_greedy_results_are_locally_maximal(backend, spec):
    g = build_group(spec)
    k = kernel_for(g, backend)
    for r in range(30):
        members, does_fill = k.greedy([], stream_state(1, r))
        assert oracles.is_locally_maximal(g.table, members)
        assert does_fill == oracles.fills(g.table, members)


@needs_compiled
@pytest.mark.parametrize("spec", GROUPS)
def test_backend_parity(spec):
    g = build_group(spec)
    py, cc = kernel_for(g, "python"), kernel_for(g, "compiled")
    for r in range(50):
        state = stream_state(9, r)
        assert py.greedy([], state) == cc.greedy([], state)
    for members in oracles.random_product_free_sets(g.table, 50, seed=5):
        assert py.analyze(members) == cc.analyze(members)
    starts = [list(s) for s in oracles.random_product_free_sets(g.table, 20, seed=6) if len(s) >= 1][:8]
    invols = indices_to_bits(i for i in range(1, g.order) if g.elem_order[i] == 2)
    for start in starts:
        for mode in (MODE_FIRST, MODE_NONFILLING, MODE_ALL):
            assert py.extend(start, mode) == cc.extend(start, mode)
            assert py.extend(start, mode, invols) == cc.extend(start, mode, invols)


@pytest.mark.parametrize("backend", available_backends())
@pytest.mark.parametrize("spec", ["C(4)", "D(8)", "Q(8)", "C(7)", "D(10)"])
def test_extend_all_reaches_every_lmpfs_through_a_triple(backend, spec):
    g = build_group(spec)
    k = kernel_for(g, backend)
    expected = {s for s in oracles.all_product_free_sets(g.table) if len(s) >= 3 and oracles.is_locally_maximal(g.table, s)}
    found = set()
    for s in oracles.all_product_free_sets(g.table):
        if len(s) == 3:
            _, records, *_ = k.extend(list(s), MODE_ALL)
            found |= {m for m, _ in records}
    assert found == expected


@needs_compiled
@pytest.mark.parametrize("spec", ["C(4)", "D(18)", "D(22)", "ESC4(16)", "D(8)xC(2)"])
def test_search_is_backend_independent(spec):
    from filled_groups.search import SearchConfig, exhaustive_filled_check, random_nonfilling_lmpfs

    g = build_group(spec)
    a = exhaustive_filled_check(g, SearchConfig(backend="python"))
    b = exhaustive_filled_check(g, SearchConfig(backend="compiled"))
    assert (a.filled, a.witness, a.rule_chain) == (b.filled, b.witness, b.rule_chain)
    cfg_py, cfg_c = SearchConfig(backend="python", max_restarts=200), SearchConfig(backend="compiled", max_restarts=200)
    assert random_nonfilling_lmpfs(g, cfg_py) == random_nonfilling_lmpfs(g, cfg_c)
