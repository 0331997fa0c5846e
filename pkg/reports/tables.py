"""
Tabular views: the exponent / line / color correspondence and pandas summaries
"""
import logging
from typing import Any, Dict, List

import pandas as pd

from analyzers.symmetry import line_representatives
from builders.colored_graphs import ColoredCayleyGraph, color_class_sizes
from reports.exporters import read_json

logger = logging.getLogger(__name__)


def line_correspondence(graph: ColoredCayleyGraph) -> List[Dict[str, Any]]:
    """Row i: omega^i, the line it spans (last nonzero coordinate 1) and its color

    omega^0 .. omega^((q-1)/(p-1) - 1) meet every line exactly once.
    """
    field = graph.field
    reps = line_representatives(graph)
    rows = []
    for i in range(field.n // (field.p - 1)):
        elem = int(field.exp[i])
        rows.append({
            'i': i,
            'vector': list(field.coords(int(reps[elem]))),
            'color': graph.color(elem)
        })
    return rows


def load_fixture(path: str) -> List[Dict[str, Any]]:
    data = read_json(path)
    return data['rows'] if isinstance(data, dict) else data


def compare_with_fixture(rows: List[Dict[str, Any]], fixture: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Field-by-field differences; an empty list means the tables agree"""
    mismatches = []
    expected = {row['i']: row for row in fixture}
    actual = {row['i']: row for row in rows}
    for i in sorted(set(expected) | set(actual)):
        if i not in actual or i not in expected:
            mismatches.append({'i': i, 'field': 'row', 'expected': expected.get(i), 'actual': actual.get(i)})
            continue
        for key in ('vector', 'color'):
            want = list(expected[i][key]) if key == 'vector' else expected[i][key]
            have = list(actual[i][key]) if key == 'vector' else actual[i][key]
            if want != have:
                mismatches.append({'i': i, 'field': key, 'expected': want, 'actual': have})
    if mismatches:
        logger.warning("%d correspondence rows differ from the fixture", len(mismatches))
    return mismatches


def correspondence_frame(graph: ColoredCayleyGraph) -> pd.DataFrame:
    df = pd.DataFrame(line_correspondence(graph))
    df['vector'] = df['vector'].apply(tuple)
    return df


def color_class_frame(graph: ColoredCayleyGraph) -> pd.DataFrame:
    sizes = color_class_sizes(graph)
    return pd.DataFrame({'color': list(range(graph.k)), 'size': sizes})


def classification_frame(report: Dict[str, Any]) -> pd.DataFrame:
    """One row per graph examined in a classification report"""
    rows = []
    for case in report.get('cases', []):
        graphs = case.get('graphs') or [{}]
        for graph in graphs:
            certificate = graph.get('certificate') or {}
            rows.append({
                'p': case['p'],
                'r': case['r'],
                'k': case['k'],
                'graph': graph.get('label', ''),
                'color_group_order': graph.get('color_group_order'),
                'search': certificate.get('outcome'),
                'graph_verdict': graph.get('verdict'),
                'case_verdict': case['verdict']
            })
    return pd.DataFrame(rows)
