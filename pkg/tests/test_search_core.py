from itertools import product

import numpy as np
import pytest

from app.exceptions import ImpossibleTarget, InvalidSearchConfig
from app.models import ColorPermutation, Outcome, SearchConfig
from analyzers.search_core import (ShardResult, column_candidates, cyclic_search, merge_shards, pair_sum_prune,
                                   run_search, stabilizer_count, transposition_search)
from analyzers.symmetry import induced_color_perm_matrix
from builders import catalog
from builders.colored_graphs import gp_k


def swap_12(k):
    return ColorPermutation.from_cycles(k, [(1, 2)])


def test_gp5_81_transposition_is_exhausted(gp5_81):
    certificate = transposition_search(gp5_81, SearchConfig(target=swap_12(5)))
    assert certificate.outcome == Outcome.EXHAUSTED
    assert certificate.witness is None
    assert certificate.leaf_space == 4096
    assert certificate.candidates_enumerated + certificate.candidates_pruned == 4096


def test_pruning_does_not_change_the_outcome(gp5_81):
    pruned = transposition_search(gp5_81, SearchConfig(target=swap_12(5)))
    plain = transposition_search(gp5_81, SearchConfig(target=swap_12(5), prune_pair_sums=False))
    assert plain.outcome == pruned.outcome
    assert plain.candidates_enumerated == 4096
    assert plain.candidates_pruned == 0


def test_pruning_neutral_on_gp3_16(gp3_16):
    target = ColorPermutation.from_cycles(3, [(0, 1)])
    with_prune = cyclic_search(gp3_16, SearchConfig(target=target))
    without = cyclic_search(gp3_16, SearchConfig(target=target, prune_pair_sums=False))
    assert with_prune.found and without.found


def test_sharded_search_agrees(gp5_81):
    single = transposition_search(gp5_81, SearchConfig(target=swap_12(5)))
    sharded = transposition_search(gp5_81, SearchConfig(target=swap_12(5), thread_count=2))
    assert sharded.outcome == single.outcome
    assert sharded.candidates_enumerated == single.candidates_enumerated
    assert sharded.candidates_pruned == single.candidates_pruned
    assert sharded.shards > 1
    assert sharded.to_dict(include_timing=False)['config']['thread_count'] == 2


def test_sharded_witness_search_matches_one_worker(gp5_81):
    target = ColorPermutation.from_cycles(5, [(0, 1, 2, 3, 4)])
    single = cyclic_search(gp5_81, SearchConfig(target=target))
    for threads in (2, 3):
        sharded = cyclic_search(gp5_81, SearchConfig(target=target, thread_count=threads))
        assert sharded.outcome == single.outcome == Outcome.WITNESS_FOUND
        assert sharded.witness == single.witness
        assert sharded.candidates_enumerated == single.candidates_enumerated
        assert sharded.candidates_pruned == single.candidates_pruned


def test_merge_stops_at_the_first_witness_shard():
    shards = [
        ShardResult(enumerated=10, pruned=6, root_pruned=2),
        ShardResult(enumerated=3, pruned=1, witnesses=[(1, 2)], witness_count=1, root_pruned=1),
        ShardResult(enumerated=7, pruned=9, witnesses=[(3, 4)], witness_count=1, root_pruned=4),
        ShardResult(enumerated=5, pruned=0, root_enumerated=2),
    ]
    merged = merge_shards(shards, counting=False)
    assert (merged.enumerated, merged.pruned) == (10 + 3 + 0 + 2, 6 + 1 + 4 + 0)
    assert merged.witnesses == [(1, 2)]
    counted = merge_shards(shards, counting=True)
    assert (counted.enumerated, counted.pruned, counted.witness_count) == (25, 16, 2)


def test_cyclic_witness_on_gp5_81(gp5_81):
    target = ColorPermutation.from_cycles(5, [(0, 1, 2, 3, 4)])
    certificate = cyclic_search(gp5_81, SearchConfig(target=target))
    assert certificate.found
    assert induced_color_perm_matrix(certificate.witness, gp5_81) == target
    assert certificate.config['fix_first_column'] is False


def _brute_force_count(graph, target):
    """Every 4x4 matrix over F_2, checked directly"""
    field = graph.field
    coords = field.coords_table
    total = 0
    expected = np.asarray(target.images)[graph.colors[1:]]
    for bits in product([0, 1], repeat=16):
        matrix = np.array(bits, dtype=np.int64).reshape(4, 4)
        images = field.index_of(coords @ matrix.T)
        if np.unique(images).size != 16:
            continue
        if np.array_equal(graph.colors[images[1:]], expected):
            total += 1
    return total


def test_gp3_16_transposition_cross_validated(gp3_16):
    target = ColorPermutation.from_cycles(3, [(0, 1)])
    counted = run_search(gp3_16, SearchConfig(target=target, fix_first_column=False, counting=True))
    assert counted.found
    assert counted.witness_count == _brute_force_count(gp3_16, target)
    assert counted.witness_count == stabilizer_count(gp3_16).witness_count


def test_stabilizer_count_of_gp5_81(gp5_81):
    certificate = stabilizer_count(gp5_81)
    assert certificate.leaf_space == 16 ** 4
    assert certificate.witness_count == 16


def test_stabilizer_collects_witnesses(g35):
    certificate = stabilizer_count(g35, collect=True)
    assert certificate.witness_count == 16
    assert len(certificate.witnesses) == 16


def test_candidate_plan(gp5_81):
    plan = column_candidates(gp5_81, swap_12(5))
    assert [len(c) for c in plan.candidates] == [1, 16, 16, 16]
    assert plan.below(0) == 4096
    assert plan.first_free == 1


def test_target_errors(gp5_81):
    with pytest.raises(ImpossibleTarget):
        column_candidates(gp5_81, swap_12(3))
    with pytest.raises(InvalidSearchConfig):
        transposition_search(gp5_81, SearchConfig(target=ColorPermutation.from_cycles(5, [(0, 1)])))
    with pytest.raises(InvalidSearchConfig):
        transposition_search(gp5_81, SearchConfig(target=swap_12(5), thread_count=0))


def test_pair_sums_of_identity_basis(gp5_81, f81):
    identity = [f81.p ** i for i in range(f81.r)]
    assert pair_sum_prune(gp5_81, identity, ColorPermutation.identity(5))


@pytest.mark.slow
def test_gp5_7_4_transposition_is_exhausted():
    graph = gp_k(catalog.field_7_4(), 5)
    certificate = transposition_search(graph, SearchConfig(target=swap_12(5), thread_count=4))
    assert certificate.outcome == Outcome.EXHAUSTED
    assert certificate.leaf_space == 480 ** 3
    assert certificate.candidates_enumerated + certificate.candidates_pruned == 480 ** 3


@pytest.mark.slow
def test_cyclic_witness_on_gp5_7_4():
    graph = gp_k(catalog.field_7_4(), 5)
    target = ColorPermutation.from_cycles(5, [(0, 1, 2, 3, 4)])
    assert cyclic_search(graph, SearchConfig(target=target)).found


@pytest.mark.long
def test_cyclic_witness_on_gp5_2_8():
    graph = gp_k(catalog.preset_field(2, 8), 5)
    target = ColorPermutation.from_cycles(5, [(0, 1, 2, 3, 4)])
    certificate = cyclic_search(graph, SearchConfig(target=target, thread_count=8, fast_gf2=True))
    assert certificate.found
    assert induced_color_perm_matrix(certificate.witness, graph) == target


@pytest.mark.long
def test_gp5_2_8_transposition_on_the_binary_path():
    graph = gp_k(catalog.preset_field(2, 8), 5)
    certificate = transposition_search(graph, SearchConfig(target=swap_12(5), thread_count=8, fast_gf2=True))
    assert certificate.fast_path
    assert certificate.leaf_space == 51 ** 7
    assert certificate.outcome == Outcome.EXHAUSTED
