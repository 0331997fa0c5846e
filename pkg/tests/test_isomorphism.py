import numpy as np
import pytest

from app.config import config
from app.exceptions import EnumerationTooLarge, ParseError
from app.gf_engine import build_field
from analyzers.isomorphism import iso_colored, to_networkx
from builders import catalog
from builders.colored_graphs import f_direction, g3_5, gp_k, paley, peisert


def _is_isomorphism(a, b, result):
    mapping = np.array(result.vertex_map)
    recolor = np.array(list(result.color_map.images) + [-1])
    return np.array_equal(b.color_matrix()[np.ix_(mapping, mapping)], recolor[a.color_matrix()])


def test_paley_nine_is_peisert_nine(f9):
    a, b = gp_k(f9, 2), peisert(f9)
    result = iso_colored(a, b, permute_colors=True)
    assert result is not None
    assert result.vertex_map[0] == 0
    assert _is_isomorphism(a, b, result)


def test_paley_81_is_not_peisert_81(f81):
    assert iso_colored(paley(f81), peisert(f81), permute_colors=True) is None


def test_graph_is_isomorphic_to_itself(g35):
    result = iso_colored(g35, g35)
    assert result is not None
    assert result.color_map.is_identity()
    assert _is_isomorphism(g35, g35, result)


def test_printed_pairing_is_a_relabeled_gp3_25(f25, g35):
    printed = g3_5(catalog.G3_5_ALTERNATIVES['pair_1_1_with_2_1'])
    gp = gp_k(f25, 3)
    result = iso_colored(printed, gp, permute_colors=True)
    assert result is not None
    assert _is_isomorphism(printed, gp, result)
    assert iso_colored(g35, gp, permute_colors=True) is None


def test_direction_graph_on_four_points():
    small = f_direction(2, 1, 2)
    assert iso_colored(small, gp_k(build_field(2, 2), 3), permute_colors=True) is not None
    # 4 vertices against 16
    assert iso_colored(small, gp_k(build_field(2, 4), 3), permute_colors=True) is None


def test_color_counts_must_agree(f9, f16):
    assert iso_colored(paley(f9), f_direction(3, 1, 2)) is None


def test_vertex_guard(monkeypatch, gp3_16):
    monkeypatch.setattr(config, 'ISO_MAX_VERTICES', 10)
    with pytest.raises(EnumerationTooLarge):
        iso_colored(gp3_16, gp3_16)


def test_vf2_agrees_on_small_graphs(f9):
    a, b = gp_k(f9, 2), peisert(f9)
    result = iso_colored(a, b, permute_colors=True, method="vf2")
    assert result is not None
    assert _is_isomorphism(a, b, result)
    small = f_direction(2, 1, 2)
    assert iso_colored(small, gp_k(build_field(2, 2), 3), permute_colors=True, method="vf2") is not None


def test_networkx_export(gp3_16):
    g = to_networkx(gp3_16)
    assert g.number_of_nodes() == 16
    assert g.number_of_edges() == 120
    assert g.edges[0, 1]['color'] == gp3_16.color(1)


def test_unknown_method(f9):
    with pytest.raises(ParseError):
        iso_colored(paley(f9), paley(f9), method="nauty")


def test_isomorphism_is_symmetric(f9, f25, g35):
    printed = g3_5(catalog.G3_5_ALTERNATIVES['pair_1_1_with_2_1'])
    for a, b in [(paley(f9), peisert(f9)), (printed, gp_k(f25, 3)), (g35, gp_k(f25, 3))]:
        forward = iso_colored(a, b, permute_colors=True)
        backward = iso_colored(b, a, permute_colors=True)
        assert (forward is None) == (backward is None)
        if backward is not None:
            assert _is_isomorphism(b, a, backward)


@pytest.mark.parametrize("p,r,k,t", [(2, 4, 3, 2), (5, 2, 3, 5), (2, 6, 7, 5)])
def test_choice_of_primitive_root_gives_isomorphic_graphs(p, r, k, t):
    field = build_field(p, r)
    base = gp_k(field, k)
    other = gp_k(field, k, omega=field.coords(field.power(t)))
    result = iso_colored(other, base, permute_colors=True)
    assert result is not None
    assert _is_isomorphism(other, base, result)
