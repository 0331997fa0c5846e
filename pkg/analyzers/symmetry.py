"""
Total-symmetry checks for colored Cayley graphs
Arc-transitivity from a 0-stabilizer, color permutations induced by matrices,
monochromatic lines and the linear stabilizer
"""
import logging
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.config import config
from app.exceptions import EnumerationTooLarge, SingularGenerator
from app.linear import LinearMap, general_linear_order
from app.models import ColorGroupSummary, ColorPermutation, SearchCertificate, SearchConfig
from analyzers.search_core import cyclic_search, stabilizer_count
from analyzers.semilinear import FoulserTriple, SemilinearSubgroup
from builders.colored_graphs import (ColoredCayleyGraph, generator_images, induced_color_permutation,
                                     orbit_coloring)

logger = logging.getLogger(__name__)

Stabilizer = Union[SemilinearSubgroup, FoulserTriple, Sequence[Any]]


class TscVerdict(str, Enum):
    TOTALLY_SYMMETRIC = "TOTALLY_SYMMETRIC"
    NOT_TOTALLY_SYMMETRIC = "NOT_TOTALLY_SYMMETRIC"
    UNRESOLVED = "UNRESOLVED"


def _stabilizer_generators(stabilizer: Stabilizer, graph: ColoredCayleyGraph) -> List[Any]:
    if isinstance(stabilizer, SemilinearSubgroup):
        stabilizer = stabilizer.triple
    if isinstance(stabilizer, FoulserTriple):
        return stabilizer.validate(graph.field).generators(graph.field)
    return list(stabilizer)


@dataclass
class ArcTransitivityReport:
    arc_transitive: bool
    orbit_count: int
    color_count: int
    split_color: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'arc_transitive': self.arc_transitive,
            'orbit_count': self.orbit_count,
            'color_count': self.color_count,
            'split_color': self.split_color
        }


def verify_arc_transitive(graph: ColoredCayleyGraph, stabilizer: Stabilizer) -> ArcTransitivityReport:
    """Stabilizer orbits on nonzero elements must be exactly the color classes"""
    field = graph.field
    perms = [generator_images(g, field) for g in _stabilizer_generators(stabilizer, graph)]
    orbits = orbit_coloring(field, perms)
    orbit_count = int(orbits.max()) + 1 if field.q > 1 else 0

    split_color = None
    for c in range(graph.k):
        if np.unique(orbits[graph.colors == c]).size > 1:
            split_color = c
            break
    report = ArcTransitivityReport(split_color is None and orbit_count == graph.k,
                                   orbit_count, graph.k, split_color)
    logger.debug("%s: %d stabilizer orbits for %d colors", graph.label, orbit_count, graph.k)
    return report


# Lines

def _line_members(graph: ColoredCayleyGraph) -> np.ndarray:
    """Row x holds lambda x for lambda = 1..p-1"""
    field = graph.field
    coords = field.coords_table
    return np.stack([field.index_of(coords * lam) for lam in range(1, field.p)], axis=1)


def line_representatives(graph: ColoredCayleyGraph) -> np.ndarray:
    """Multiple of each element whose last nonzero coordinate is 1"""
    field = graph.field
    coords = field.coords_table
    last = field.r - 1 - np.argmax(coords[:, ::-1] != 0, axis=1)
    lead = coords[np.arange(field.q), last]
    inverse = np.array([pow(int(a), field.p - 2, field.p) if a else 0 for a in range(field.p)])
    return field.index_of(coords * inverse[lead][:, None])


@dataclass
class LineReport:
    monochromatic: bool
    violating_line: Optional[Tuple[int, ...]] = None
    colors_on_line: List[int] = dataclass_field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'monochromatic': self.monochromatic,
            'violating_line': list(self.violating_line) if self.violating_line else None,
            'colors_on_line': self.colors_on_line
        }


def lines_monochromatic(graph: ColoredCayleyGraph, p: Optional[int] = None,
                        r: Optional[int] = None) -> LineReport:
    """Every one-dimensional subspace minus 0 carries a single color"""
    field = graph.field
    if (p is not None and p != field.p) or (r is not None and r != field.r):
        logger.warning("%s lives on F_%d^%d, not F_%s^%s", graph.label, field.p, field.r, p, r)
    members = _line_members(graph)
    colors = graph.colors[members]
    bad = np.nonzero(np.any(colors[1:] != colors[1:, :1], axis=1))[0]
    if not bad.size:
        return LineReport(True)

    # report the offending line with the smallest discrete log
    offenders = bad + 1
    x = int(offenders[np.argmin(field.log[offenders])])
    rep = int(line_representatives(graph)[x])
    return LineReport(False, field.coords(rep), sorted({int(c) for c in colors[x]}))


def monochromatic_lines_report(graph: ColoredCayleyGraph) -> List[Dict[str, Any]]:
    """Every line with its representative, smallest exponent and colors, by smallest exponent"""
    field = graph.field
    members = _line_members(graph)
    reps = line_representatives(graph)
    rows = []
    for rep in np.unique(reps[1:]):
        line = members[rep]
        rows.append({
            'vector': list(field.coords(int(rep))),
            'min_dlog': int(field.log[line].min()),
            'colors': sorted({int(c) for c in graph.colors[line]})
        })
    return sorted(rows, key=lambda row: row['min_dlog'])


# Matrices and color permutations

def induced_color_perm_matrix(matrix: LinearMap, graph: ColoredCayleyGraph) -> ColorPermutation:
    if not matrix.is_invertible():
        raise SingularGenerator(f"{matrix!r} is singular", matrix=matrix.entries.tolist())
    return induced_color_permutation(graph, generator_images(matrix, graph.field))


def color_symmetry_group(graph: ColoredCayleyGraph, witnesses: Sequence[Any]) -> ColorGroupSummary:
    """Subgroup of S_k generated by the color permutations of the witnesses"""
    perms = [induced_color_permutation(graph, generator_images(w, graph.field)) for w in witnesses]
    return ColorGroupSummary.from_generators(perms, graph.k)


def _check_group_size(graph: ColoredCayleyGraph):
    order = general_linear_order(graph.field.r, graph.field.p)
    if order > config.MAX_GROUP_ORDER:
        raise EnumerationTooLarge(f"|GL_{graph.field.r}({graph.field.p})| = {order} exceeds "
                                  f"{config.MAX_GROUP_ORDER}; use a column search instead", order=order)


def linear_stabilizer(graph: ColoredCayleyGraph) -> List[LinearMap]:
    """Every invertible matrix inducing the identity color permutation"""
    _check_group_size(graph)
    certificate = stabilizer_count(graph, collect=True)
    return sorted(certificate.witnesses, key=LinearMap.key)


@dataclass
class WitnessSet:
    """Maps paired with the color permutations they induce"""
    pairs: List[Tuple[Any, ColorPermutation]]
    summary: ColorGroupSummary

    @classmethod
    def from_maps(cls, graph: ColoredCayleyGraph, maps: Sequence[Any]) -> 'WitnessSet':
        pairs = [(m, induced_color_permutation(graph, generator_images(m, graph.field))) for m in maps]
        return cls(pairs, ColorGroupSummary.from_generators([perm for _, perm in pairs], graph.k))

    def verify(self, graph: ColoredCayleyGraph) -> bool:
        return all(induced_color_permutation(graph, generator_images(m, graph.field)) == perm
                   for m, perm in self.pairs)

    @property
    def maps(self) -> List[Any]:
        return [m for m, _ in self.pairs]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'witnesses': [{'map': m.to_dict(), 'induces': str(perm)} for m, perm in self.pairs],
            'color_group': self.summary.to_dict()
        }


def exchange_witnesses(graph: ColoredCayleyGraph, thread_count: int = 1) -> WitnessSet:
    """Search GL_r(p) for a matrix exchanging each pair of neighbouring colors"""
    _check_group_size(graph)
    found = []
    for i in range(graph.k - 1):
        target = ColorPermutation.from_cycles(graph.k, [(i, i + 1)])
        certificate = cyclic_search(graph, SearchConfig(target=target, thread_count=thread_count))
        if certificate.found:
            found.append(certificate.witness)
        else:
            logger.info("%s: no matrix induces %s", graph.label, target)
    return WitnessSet.from_maps(graph, found)


@dataclass
class TscReport:
    label: str
    arc: ArcTransitivityReport
    color_group: ColorGroupSummary
    verdict: TscVerdict
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'arc_transitive': self.arc.arc_transitive,
            'orbit_count': self.arc.orbit_count,
            'color_group_order': self.color_group.order,
            'is_symmetric': self.color_group.is_symmetric,
            'color_group': self.color_group.to_dict(),
            'verdict': self.verdict.value,
            'reason': self.reason
        }


def verify_tsc(graph: ColoredCayleyGraph, stabilizer: Stabilizer, witnesses: Sequence[Any] = (),
               exhaustion: Optional[SearchCertificate] = None) -> TscReport:
    """Arc-transitivity plus the color group of the witnesses

    An exhausted transposition search rules total symmetry out; without one a
    missing symmetric group leaves the question open.
    """
    arc = verify_arc_transitive(graph, stabilizer)
    group = color_symmetry_group(graph, witnesses)

    if graph.k == 1:
        verdict, reason = TscVerdict.TOTALLY_SYMMETRIC, "single color"
    elif exhaustion is not None and not exhaustion.found:
        verdict = TscVerdict.NOT_TOTALLY_SYMMETRIC
        reason = f"no matrix induces {exhaustion.config.get('target_cycles')}"
    elif arc.arc_transitive and group.is_symmetric:
        verdict, reason = TscVerdict.TOTALLY_SYMMETRIC, "stabilizer orbits are the colors, witnesses generate S_k"
    elif not arc.arc_transitive:
        verdict, reason = TscVerdict.UNRESOLVED, "stabilizer orbits differ from the color classes"
    else:
        verdict, reason = TscVerdict.UNRESOLVED, f"witnesses generate a group of order {group.order}"
    return TscReport(graph.label, arc, group, verdict, reason)
