import pytest

from app.exceptions import EnumerationTooLarge, SingularGenerator
from app.linear import LinearMap
from app.models import ColorPermutation, SearchConfig
from analyzers.search_core import transposition_search
from analyzers.semilinear import FoulserTriple, gamma
from analyzers.symmetry import (TscVerdict, WitnessSet, color_symmetry_group, exchange_witnesses,
                                induced_color_perm_matrix, lines_monochromatic, linear_stabilizer,
                                monochromatic_lines_report, verify_arc_transitive, verify_tsc)
from builders import catalog
from builders.colored_graphs import gp_k


def _g311_stabilizer(field):
    return [gamma(field, e, s) for e, s in catalog.G3_11_STABILIZER_GENERATORS]


def test_g3_11_exchange_matrices(g311):
    swap_12 = LinearMap([[1, 0], [0, -1]], 11)
    swap_01 = LinearMap([[2, 1], [1, 4]], 11)
    assert induced_color_perm_matrix(swap_12, g311) == ColorPermutation.from_cycles(3, [(1, 2)])
    assert induced_color_perm_matrix(swap_01, g311) == ColorPermutation.from_cycles(3, [(0, 1)])
    group = color_symmetry_group(g311, [swap_12, swap_01])
    assert group.order == 6 and group.is_symmetric


def test_g3_11_is_totally_symmetric(g311, f121):
    matrices = [LinearMap(m, 11) for m in catalog.G3_11_EXCHANGE_MATRICES.values()]
    report = verify_tsc(g311, _g311_stabilizer(f121), matrices)
    assert report.arc.arc_transitive
    assert report.verdict == TscVerdict.TOTALLY_SYMMETRIC
    assert report.to_dict()['color_group_order'] == 6


def test_partial_stabilizer_is_not_arc_transitive(g311, f121):
    report = verify_arc_transitive(g311, [gamma(f121, 6)])
    assert not report.arc_transitive
    assert report.orbit_count == 6
    assert report.split_color is not None


def test_arc_transitivity_from_triple(gp3_16):
    report = verify_arc_transitive(gp3_16, FoulserTriple(3, 0, 2))
    assert report.arc_transitive and report.orbit_count == 3


def test_g3_5_linear_stabilizer(g35):
    stabilizer = linear_stabilizer(g35)
    assert len(stabilizer) == 16
    for entries in catalog.G3_5_STABILIZER_GENERATORS:
        assert LinearMap(entries, 5) in stabilizer


def test_g3_5_is_totally_symmetric(g35):
    stabilizer = linear_stabilizer(g35)
    witnesses = exchange_witnesses(g35)
    assert len(witnesses.pairs) == 2
    assert witnesses.summary.is_symmetric
    assert witnesses.verify(g35)
    report = verify_tsc(g35, stabilizer, witnesses.maps)
    assert report.verdict == TscVerdict.TOTALLY_SYMMETRIC


def test_printed_pairing_has_smaller_stabilizer():
    from builders.colored_graphs import g3_5
    graph = g3_5(catalog.G3_5_ALTERNATIVES['pair_1_1_with_2_1'])
    assert len(linear_stabilizer(graph)) == 8


def test_witness_set_records_permutations(g311):
    matrices = [LinearMap(m, 11) for m in catalog.G3_11_EXCHANGE_MATRICES.values()]
    witnesses = WitnessSet.from_maps(g311, matrices)
    assert [str(perm) for _, perm in witnesses.pairs] == [str(ColorPermutation.from_cycles(3, [(0, 1)])),
                                                          str(ColorPermutation.from_cycles(3, [(1, 2)]))]
    assert witnesses.to_dict()['color_group']['is_symmetric']


def test_lines(g311, f25):
    assert lines_monochromatic(g311).monochromatic
    rows = monochromatic_lines_report(g311)
    assert len(rows) == 12
    assert all(len(row['colors']) == 1 for row in rows)
    assert rows[0]['vector'] == [1, 0]

    report = lines_monochromatic(gp_k(f25, 4))
    assert not report.monochromatic
    assert report.violating_line == (1, 0)
    assert report.colors_on_line == [0, 2]


def test_singular_matrix_rejected(g311):
    with pytest.raises(SingularGenerator):
        induced_color_perm_matrix(LinearMap([[1, 2], [2, 4]], 11), g311)


def test_large_linear_groups_are_refused(gp5_81):
    with pytest.raises(EnumerationTooLarge):
        linear_stabilizer(gp5_81)


def test_exhaustion_rules_out_total_symmetry(gp5_81, f81):
    certificate = transposition_search(gp5_81, SearchConfig(target=ColorPermutation.from_cycles(5, [(1, 2)])))
    witnesses = [gamma(f81, 1), gamma(f81, 0, 1)]
    report = verify_tsc(gp5_81, FoulserTriple(5, 0, 4), witnesses, exhaustion=certificate)
    assert report.arc.arc_transitive
    assert report.color_group.order == 20
    assert report.verdict == TscVerdict.NOT_TOTALLY_SYMMETRIC


def test_without_exhaustion_the_verdict_stays_open(gp5_81, f81):
    report = verify_tsc(gp5_81, FoulserTriple(5, 0, 4), [gamma(f81, 1)])
    assert report.verdict == TscVerdict.UNRESOLVED


@pytest.mark.parametrize("p,r,k", [(2, 4, 3), (2, 6, 3), (3, 4, 4), (3, 4, 5), (5, 2, 3), (11, 2, 3), (7, 4, 5)])
def test_powers_of_omega_are_arc_transitive_on_gp(p, r, k):
    field = catalog.preset_field(p, r)
    report = verify_arc_transitive(gp_k(field, k), [gamma(field, k)])
    assert report.arc_transitive
    assert report.orbit_count == k


def test_induced_permutations_compose(g311):
    a, b = [LinearMap(m, 11) for m in catalog.G3_11_EXCHANGE_MATRICES.values()]
    for x, y in [(a, b), (b, a), (a, a), (a @ b, b)]:
        product = induced_color_perm_matrix(x @ y, g311)
        assert product == induced_color_perm_matrix(x, g311).compose(induced_color_perm_matrix(y, g311))


def test_every_direction_partition_has_monochromatic_lines(g35, g311):
    from builders.colored_graphs import f_direction, g3_5
    graphs = [g35, g311, f_direction(3, 1, 2), f_direction(5, 1, 2)]
    graphs += [g3_5(blocks) for blocks in catalog.G3_5_ALTERNATIVES.values()]
    for graph in graphs:
        assert lines_monochromatic(graph).monochromatic, graph.label
