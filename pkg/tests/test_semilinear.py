import numpy as np
import pytest

from app.exceptions import NotStandardForm
from app.gf_engine import build_field
from app.linear import LinearMap
from app.models import ColorPermutation
from analyzers.semilinear import (FoulserTriple, GammaElem, embed_semilinear_as_matrix,
                                  enumerate_color_transitive_overgroups, enumerate_k_equal_orbit_subgroups,
                                  full_stabilizer, gamma, gamma_apply, gamma_compose, gamma_order,
                                  induced_color_perm, is_closed, orbit_graph, orbit_partition, standard_form,
                                  subgroup_closure, subgroup_elements, valid_triples)
from builders import catalog
from builders.colored_graphs import gp_k


def _all_elements(field):
    return [GammaElem(e, s) for s in range(field.r) for e in range(field.n)]


@pytest.mark.parametrize("p,r", [(2, 4), (5, 2)])
def test_compose_matches_pointwise_composition(p, r):
    field = build_field(p, r)
    elements = _all_elements(field)
    images = {g: g.images(field) for g in elements}
    for a in elements:
        for b in elements:
            assert np.array_equal(images[gamma_compose(a, b, field)], images[a][images[b]])


def test_apply_and_order(f16):
    alpha = gamma(f16, 0, 1)
    x = f16.power(1)
    assert gamma_apply(alpha, x, f16) == f16.mul(x, x)
    assert gamma_apply(alpha, 0, f16) == 0
    assert gamma_order(alpha, f16) == 4
    assert gamma_order(gamma(f16, 5), f16) == 3


@pytest.mark.parametrize("p,r", [(2, 4), (3, 4), (2, 6)])
def test_order_formula_matches_closure(p, r):
    field = build_field(p, r)
    for triple in valid_triples(field):
        closure = subgroup_closure(triple.generators(field), field)
        assert len(closure) == triple.order(field), triple
        assert sorted(closure) == sorted(subgroup_elements(triple, field))


def test_standard_form_of_generators(f16):
    assert standard_form([gamma(f16, 3), gamma(f16, 0, 2)], f16) == FoulserTriple(3, 0, 2)
    assert standard_form([gamma(f16, 6)], f16) == FoulserTriple(3, 0, 4)


def test_triple_validation(f16):
    with pytest.raises(NotStandardForm):
        FoulserTriple(4, 0, 2).validate(f16)
    with pytest.raises(NotStandardForm):
        FoulserTriple(3, 0, 3).validate(f16)


@pytest.mark.parametrize("p,r,k,expected", [
    (2, 4, 3, [(3, 0, 2)]),
    (2, 6, 3, [(3, 0, 2)]),
    (3, 4, 4, [(4, 0, 2)]),
    (3, 4, 5, [(5, 0, 4)]),
    (7, 4, 5, [(5, 0, 4)]),
    (2, 8, 5, [(5, 0, 4)]),
    (17, 2, 3, [(3, 0, 2)]),
])
def test_surviving_stabilizers(p, r, k, expected):
    field = catalog.preset_field(p, r)
    assert [t.as_tuple() for t in enumerate_k_equal_orbit_subgroups(field, k)] == expected


def test_unfiltered_enumeration_is_a_superset(f81):
    filtered = enumerate_k_equal_orbit_subgroups(f81, 5)
    closed = enumerate_k_equal_orbit_subgroups(f81, 5, overgroup_filter=False)
    assert set(filtered) <= set(closed)
    assert all(is_closed(t, f81) for t in closed)


def test_orbits_of_gp3_16_stabilizer(f16, gp3_16):
    triple = FoulserTriple(3, 0, 2)
    orbits = orbit_partition(triple, f16)
    assert [len(o) for o in orbits] == [5, 5, 5]
    assert orbit_graph(triple, f16).same_coloring(gp3_16)
    assert full_stabilizer(gp3_16, f16) == triple


def test_overgroups_of_gp3_16(f16):
    candidates = enumerate_color_transitive_overgroups(FoulserTriple(3, 0, 2), f16, 3)
    by_triple = {c.triple.as_tuple(): c for c in candidates}
    assert (1, 0, 2) in by_triple
    cyclic = by_triple[(1, 0, 2)]
    assert cyclic.permutes_colors
    assert cyclic.color_group.order == 3 and cyclic.color_group.is_transitive
    assert all(c.triple.order(f16) == 3 * FoulserTriple(3, 0, 2).order(f16) for c in candidates)


def test_induced_permutations_on_gp5_81(gp5_81, f81):
    assert induced_color_perm(gamma(f81, 1), gp5_81) == ColorPermutation.from_cycles(5, [(0, 1, 2, 3, 4)])
    # alpha multiplies exponents by 3
    assert induced_color_perm(gamma(f81, 0, 1), gp5_81) == ColorPermutation([0, 3, 1, 4, 2])
    assert induced_color_perm(gamma(f81, 5), gp5_81).is_identity()


def test_embedding_in_gl2_5(f25):
    assert embed_semilinear_as_matrix(gamma(f25, 1), f25) == LinearMap(catalog.EMBEDDING_5_2['omega'], 5)
    assert embed_semilinear_as_matrix(gamma(f25, 0, 1), f25) == LinearMap(catalog.EMBEDDING_5_2['alpha'], 5)


def test_embedding_agrees_with_action(f81):
    g = gamma(f81, 7, 1)
    matrix = embed_semilinear_as_matrix(g, f81)
    assert np.array_equal(matrix.images(f81), g.images(f81))


def test_g3_11_stabilizer_preserves_colors(g311, f121):
    for e, s in catalog.G3_11_STABILIZER_GENERATORS:
        assert induced_color_perm(gamma(f121, e, s), g311).is_identity()
    assert gp_k(f121, 3).k == 3


@pytest.mark.parametrize("p,r", [(2, 4), (3, 4), (5, 2), (2, 6)])
def test_standard_form_recovers_every_valid_triple(p, r):
    field = build_field(p, r)
    for triple in valid_triples(field):
        assert standard_form(triple.generators(field), field) == triple, triple
