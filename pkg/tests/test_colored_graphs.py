import numpy as np
import pytest

from app.exceptions import BadPartition, BadRecoloring, NotColorPermuting, NotEdgeWellDefined, NotPrimitive, ParseError
from app.gf_engine import build_field
from app.linear import AffineMap, LinearMap
from app.models import ColorPermutation
from builders import catalog
from builders.colored_graphs import (ColoredCayleyGraph, DirectionPartition, color_class_sizes, color_classes,
                                     direction_graph, f_direction, g3_5, generator_images, gp_k,
                                     induced_color_permutation, merge_colors, orbital_graph, paley,
                                     partition_direction_graph, peisert)


def test_gp3_16_classes(gp3_16, f16):
    assert gp3_16.k == 3
    assert color_class_sizes(gp3_16) == [5, 5, 5]
    assert gp3_16.label == "GP_3(2^4)"
    # omega^j has color j mod 3
    assert [gp3_16.color(f16.power(j)) for j in range(6)] == [0, 1, 2, 0, 1, 2]


def test_paley_and_peisert_on_nine(f9):
    assert color_class_sizes(paley(f9)) == [4, 4]
    assert color_class_sizes(peisert(f9)) == [4, 4]
    assert paley(f9).label == "PG(9)"
    assert peisert(f9).label == "PG*(9)"


def test_family_preconditions():
    with pytest.raises(NotEdgeWellDefined):
        gp_k(build_field(7, 1), 2)
    with pytest.raises(NotEdgeWellDefined):
        paley(build_field(7, 1))
    with pytest.raises(NotEdgeWellDefined):
        peisert(build_field(5, 2))


def test_every_constructed_graph_is_edge_symmetric(gp3_16, gp5_81, gp4_81, g35, g311, f81):
    for graph in [gp3_16, gp5_81, gp4_81, g35, g311, paley(f81), peisert(f81), f_direction(3, 1, 2)]:
        assert graph.negation_closed()
        assert np.array_equal(graph.colors, graph.colors[graph.field.neg_table])


def test_merges_of_gp4_81(gp4_81, f81):
    assert merge_colors(gp4_81, [0, 1, 0, 1]).same_coloring(paley(f81))
    assert merge_colors(gp4_81, [0, 0, 1, 1]).same_coloring(peisert(f81))


def test_merge_needs_a_surjection(gp3_16):
    with pytest.raises(BadRecoloring):
        merge_colors(gp3_16, [0, 2, 2])
    with pytest.raises(BadRecoloring):
        merge_colors(gp3_16, [0, 1])


def test_primitive_root_does_not_change_the_partition(f16):
    # omega^2 is primitive in GF(16) since gcd(2, 15) = 1
    other = gp_k(f16, 3, omega=f16.coords(f16.power(2)))
    base = gp_k(f16, 3)
    assert sorted(map(tuple, map(sorted, color_classes(other)))) == sorted(map(tuple, map(sorted, color_classes(base))))
    with pytest.raises(NotPrimitive):
        gp_k(f16, 3, omega=f16.coords(f16.power(3)))


def test_named_direction_graphs(g35, g311):
    assert g35.k == 3 and color_class_sizes(g35) == [8, 8, 8]
    assert g311.k == 3 and color_class_sizes(g311) == [40, 40, 40]
    assert g35.label == "G_3(5^2)"


def test_g3_11_blocks_become_colors(g311, f121):
    for color, block in enumerate(catalog.G3_11_BLOCKS):
        for a, b in block:
            assert g311.color(f121.element([a, b])) == color


def test_direction_graph_colors_each_line():
    graph = f_direction(3, 1, 2)
    assert graph.k == 4
    assert color_class_sizes(graph) == [2, 2, 2, 2]
    assert f_direction(2, 2, 2).k == 5
    with pytest.raises(ParseError):
        direction_graph(build_field(3, 1), 1)


def test_partition_errors():
    f5 = build_field(5, 1)
    repeated = DirectionPartition(2, [[(1, 0), (2, 0)], [(1, 1), (4, 1)], [(2, 1), (3, 1)]])
    with pytest.raises(BadPartition):
        partition_direction_graph(f5, 2, repeated, catalog.field_5_2())
    with pytest.raises(BadPartition):
        partition_direction_graph(f5, 3, DirectionPartition(2, catalog.G3_5_BLOCKS))


def test_alternative_partitions_build():
    for blocks in catalog.G3_5_ALTERNATIVES.values():
        graph = g3_5(blocks)
        assert color_class_sizes(graph) == [8, 8, 8]


def test_asymmetric_coloring_is_rejected():
    f5 = build_field(5, 1)
    with pytest.raises(NotEdgeWellDefined):
        ColoredCayleyGraph(f5, np.array([-1, 0, 0, 1, 1]), 2)
    with pytest.raises(BadRecoloring):
        ColoredCayleyGraph(f5, np.array([-1, 0, 0, 0, 0]), 2)


def test_record_round_trip(g311):
    rebuilt = ColoredCayleyGraph.from_dict(g311.to_dict())
    assert rebuilt.same_coloring(g311)
    assert rebuilt.label == g311.label
    with pytest.raises(ParseError):
        ColoredCayleyGraph.from_dict({'p': 5})


def test_scalar_orbits_are_lines(f25):
    graph = orbital_graph(5, 2, [LinearMap([[2, 0], [0, 2]], 5)], f25)
    assert graph.k == 6
    assert color_class_sizes(graph) == [4] * 6


def test_translation_part_is_ignored(f25):
    shifted = AffineMap(LinearMap([[2, 0], [0, 2]], 5), [1, 3])
    assert orbital_graph(5, 2, [shifted], f25).same_coloring(orbital_graph(5, 2, [shifted.linear], f25))


def test_listed_stabilizer_generators_give_g3_5(g35, f25):
    gens = [LinearMap(m, 5) for m in catalog.G3_5_STABILIZER_GENERATORS]
    graph = orbital_graph(5, 2, gens, f25)
    assert graph.k == 3
    classes = {tuple(sorted(c.tolist())) for c in color_classes(graph)}
    assert classes == {tuple(sorted(c.tolist())) for c in color_classes(g35)}


def test_singular_generator_rejected(f25):
    from app.exceptions import SingularGenerator
    with pytest.raises(SingularGenerator):
        generator_images(LinearMap([[1, 2], [2, 4]], 5), f25)


def test_induced_permutation_of_frobenius_matrix(gp3_16, f16):
    squaring = np.array([f16.mul(x, x) for x in range(16)])
    assert induced_color_permutation(gp3_16, squaring) == ColorPermutation.from_cycles(3, [(1, 2)])


def test_coordinate_swap_breaks_gp3_16(gp3_16, f16):
    swap = LinearMap([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 2)
    with pytest.raises(NotColorPermuting) as info:
        induced_color_permutation(gp3_16, swap.images(f16))
    assert info.value.witness is not None


@pytest.mark.parametrize("graph_name", ["g35", "g311"])
def test_direction_graphs_keep_colors_under_translations_and_scalars(graph_name, request):
    graph = request.getfixturevalue(graph_name)
    field = graph.field
    matrix = graph.color_matrix()
    for t in range(0, field.q, 7):
        shifted = field.add_many(np.arange(field.q, dtype=np.int64), np.full(field.q, t, dtype=np.int64))
        assert np.array_equal(matrix[np.ix_(shifted, shifted)], matrix)
    for scalar in range(1, field.p):
        scaled = field.index_of(field.coords_table * scalar)
        assert np.array_equal(graph.colors[scaled[1:]], graph.colors[1:])


def test_direction_graph_on_nine_points_keeps_colors_under_scalars():
    graph = f_direction(3, 1, 2)
    field = graph.field
    doubled = field.index_of(field.coords_table * 2)
    assert np.array_equal(graph.colors[doubled], graph.colors)


def test_semilinear_generators_give_g3_11(g311, f121):
    from analyzers.isomorphism import iso_colored
    from analyzers.semilinear import gamma
    generators = [gamma(f121, e, s) for e, s in catalog.G3_11_STABILIZER_GENERATORS]
    graph = orbital_graph(11, 2, generators, f121)
    assert graph.k == 3
    assert color_class_sizes(graph) == [40, 40, 40]
    assert iso_colored(graph, g311, permute_colors=True) is not None
