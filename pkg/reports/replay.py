"""
Classification replay
Runs standard-form enumeration, overgroup analysis, graph construction, witness
verification and the transposition searches for each (p, r, k) case, recording
failures per case and moving on
"""
import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import config
from app.database import CertificateCache, cache_key
from app.exceptions import NotColorPermuting, TscError, UnknownCase
from app.gf_engine import FieldTable
from app.linear import LinearMap
from app.models import ColorPermutation, SearchCertificate, SearchConfig, Verdict
from analyzers.isomorphism import iso_colored
from analyzers.search_core import column_candidates, transposition_search
from analyzers.semilinear import (FoulserTriple, GammaElem, OvergroupCandidate, embed_semilinear_as_matrix,
                                  enumerate_color_transitive_overgroups, enumerate_k_equal_orbit_subgroups,
                                  gamma, induced_color_perm, orbit_graph)
from analyzers.symmetry import (TscReport, TscVerdict, exchange_witnesses, induced_color_perm_matrix,
                                linear_stabilizer, verify_tsc)
from builders import catalog
from builders.colored_graphs import ColoredCayleyGraph, g3_11, g3_5, gp_k, merge_colors
from reports.tables import line_correspondence

logger = logging.getLogger(__name__)

Case = Tuple[int, int, int]

_VERDICTS = {
    TscVerdict.TOTALLY_SYMMETRIC: Verdict.TSC,
    TscVerdict.NOT_TOTALLY_SYMMETRIC: Verdict.NOT_TSC,
    TscVerdict.UNRESOLVED: Verdict.UNRESOLVED,
}


@dataclass
class GraphRecord:
    label: str
    stabilizer: Dict[str, Any]
    tsc: TscReport
    witnesses: List[Dict[str, Any]] = dataclass_field(default_factory=list)
    certificate: Optional[SearchCertificate] = None
    extra: Dict[str, Any] = dataclass_field(default_factory=dict)

    @property
    def verdict(self) -> Verdict:
        return _VERDICTS[self.tsc.verdict]

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'label': self.label,
            'stabilizer': self.stabilizer,
            'arc_transitive': self.tsc.arc.arc_transitive,
            'color_group_order': self.tsc.color_group.order,
            'color_group': self.tsc.color_group.to_dict(),
            'witnesses': self.witnesses,
            'certificate': self.certificate.to_dict(include_timing=False) if self.certificate else None,
            'verdict': self.verdict.value,
            'reason': self.tsc.reason
        }
        data.update(self.extra)
        return data


@dataclass
class CaseRecord:
    p: int
    r: int
    k: int
    candidates: List[FoulserTriple] = dataclass_field(default_factory=list)
    closed: List[FoulserTriple] = dataclass_field(default_factory=list)
    overgroups: Dict[str, List[OvergroupCandidate]] = dataclass_field(default_factory=dict)
    graphs: List[GraphRecord] = dataclass_field(default_factory=list)
    verdict: Verdict = Verdict.UNRESOLVED
    filtered: List[Dict[str, Any]] = dataclass_field(default_factory=list)
    notes: List[str] = dataclass_field(default_factory=list)
    error: Optional[Dict[str, Any]] = None

    def decide(self):
        verdicts = [g.verdict for g in self.graphs]
        if not self.graphs:
            self.verdict = Verdict.NOT_TSC
            self.notes.append("no standard form survives enumeration")
        elif Verdict.TSC in verdicts:
            self.verdict = Verdict.TSC
        elif all(v == Verdict.NOT_TSC for v in verdicts):
            self.verdict = Verdict.NOT_TSC
        else:
            self.verdict = Verdict.UNRESOLVED

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p': self.p,
            'r': self.r,
            'k': self.k,
            'candidates': [t.to_dict() for t in self.candidates],
            'closed_triples': [t.to_dict() for t in self.closed],
            'filtered': self.filtered,
            'overgroups': {key: [c.to_dict() for c in value] for key, value in self.overgroups.items()},
            'graphs': [g.to_dict() for g in self.graphs],
            'verdict': self.verdict.value,
            'notes': self.notes,
            'error': self.error
        }


@dataclass
class ClassificationReport:
    cases: List[CaseRecord]
    manifest_id: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'manifest_id': self.manifest_id,
            'cases': [c.to_dict() for c in self.cases],
            'summary': {v.value: sum(1 for c in self.cases if c.verdict == v) for v in Verdict}
        }


def known_cases() -> List[Case]:
    return list(config.DEFAULT_CASES) + list(config.LONG_CASES)


def check_cases(cases: Sequence[Case]) -> List[Case]:
    allowed = set(known_cases())
    checked = []
    for case in cases:
        case = tuple(int(v) for v in case)
        if case not in allowed:
            raise UnknownCase(f"No classification case {case}; known cases: {sorted(allowed)}", case=list(case))
        checked.append(case)
    return checked


def _same_classes(a: ColoredCayleyGraph, b: ColoredCayleyGraph) -> bool:
    """Equal color classes on the same field, up to renaming the colors"""
    if a.k != b.k or a.field.spec != b.field.spec or a.field.omega != b.field.omega:
        return False
    pairs = np.unique(np.stack([a.colors[1:], b.colors[1:]]), axis=1)
    return pairs.shape[1] == a.k


def derive_from_closed(graph: ColoredCayleyGraph, closed: Sequence[FoulserTriple],
                       dropped: Sequence[FoulserTriple] = ()) -> Optional[Dict[str, Any]]:
    """First closed standard form whose orbit graph is isomorphic to graph, dropped triples tried first"""
    field = graph.field
    ordered = list(dropped) + [t for t in closed if t not in dropped]
    for triple in ordered:
        derived = orbit_graph(triple, field)
        if derived.k != graph.k:
            continue
        if _same_classes(derived, graph):
            match = 'same classes'
        elif field.q <= config.ISO_MAX_VERTICES and iso_colored(derived, graph, permute_colors=True) is not None:
            match = 'isomorphic'
        else:
            continue
        return {'triple': triple.to_dict(), 'label': str(triple), 'match': match,
                'filtered_out': triple in dropped}
    return None


def _witness_entry(g: Any, perm: ColorPermutation, field: FieldTable) -> Dict[str, Any]:
    if isinstance(g, GammaElem):
        return {'semilinear': g.to_dict(), 'matrix': embed_semilinear_as_matrix(g, field).to_dict(),
                'induces': str(perm)}
    return {'matrix': g.to_dict(), 'induces': str(perm)}


class ClassificationReplay:
    """Sequential replay of the classification cases"""

    def __init__(self, include_long: bool = False, with_big_searches: bool = False,
                 thread_count: int = 1, cache: Optional[CertificateCache] = None):
        self.include_long = include_long
        self.with_big_searches = with_big_searches
        self.thread_count = thread_count
        self.cache = cache
        self.replay_stats = {
            'cases': 0,
            'completed': 0,
            'failed': 0,
            'searches_run': 0,
            'cache_hits': 0
        }

    def run(self, cases: Optional[Sequence[Case]] = None) -> ClassificationReport:
        if cases is None:
            cases = list(config.DEFAULT_CASES) + (list(config.LONG_CASES) if self.include_long else [])
        records = []
        for p, r, k in check_cases(cases):
            self.replay_stats['cases'] += 1
            try:
                record = self.replay_case(p, r, k)
                self.replay_stats['completed'] += 1
            except TscError as e:
                logger.error("Case (%d,%d,%d) failed: %s", p, r, k, e.message)
                record = CaseRecord(p, r, k, error=e.to_dict(), notes=[e.message])
                self.replay_stats['failed'] += 1
            logger.info("Case (%d,%d,%d): %s", p, r, k, record.verdict.value)
            records.append(record)
        return ClassificationReport(records)

    def replay_case(self, p: int, r: int, k: int) -> CaseRecord:
        field = catalog.preset_field(p, r)
        record = CaseRecord(p, r, k)
        record.closed = enumerate_k_equal_orbit_subgroups(field, k, overgroup_filter=False)
        record.candidates = enumerate_k_equal_orbit_subgroups(field, k)
        logger.info("(%d,%d,%d): %d closed standard forms, %d survive the overgroup filter",
                    p, r, k, len(record.closed), len(record.candidates))

        for triple in record.candidates:
            overgroups = enumerate_color_transitive_overgroups(triple, field, k)
            record.overgroups[str(triple)] = overgroups
            record.graphs.append(self._orbit_record(triple, field, k, overgroups, (p, r, k)))

        dropped = [t for t in record.closed if t not in record.candidates]
        for triple in dropped:
            graph = orbit_graph(triple, field)
            record.filtered.append({'triple': triple.to_dict(), 'order': triple.order(field), 'label': graph.label})

        named = []
        if (p, r) == (5, 2) and k == 3:
            named.append(self._g3_5_record())
        if (p, r) == (11, 2) and k == 3:
            named.append(self._g3_11_record())
        for graph_record, graph in named:
            derived = derive_from_closed(graph, record.closed, dropped)
            graph_record.extra['derived_from'] = derived
            if derived is None:
                record.notes.append(f"{graph.label} is not the orbit graph of any closed standard form")
            elif derived['filtered_out']:
                record.notes.append(f"{graph.label} is the orbit graph of {derived['label']}, "
                                    f"which the overgroup filter drops")
            record.graphs.append(graph_record)

        record.decide()
        return record

    # Graph records

    def _orbit_record(self, triple: FoulserTriple, field: FieldTable, k: int,
                      overgroups: List[OvergroupCandidate], case: Case) -> GraphRecord:
        if triple.e == 0 and triple.d == k:
            graph = gp_k(field, k)
        else:
            graph = orbit_graph(triple, field)

        candidates = [gamma(field, 1), gamma(field, 0, 1)]
        for overgroup in overgroups:
            if overgroup.permutes_colors:
                candidates.extend(overgroup.triple.generators(field))
        witnesses, entries = [], []
        for g in dict.fromkeys(candidates):
            try:
                perm = induced_color_perm(g, graph)
            except NotColorPermuting:
                continue
            if not perm.is_identity():
                witnesses.append(g)
                entries.append(_witness_entry(g, perm, field))

        report = verify_tsc(graph, triple, witnesses)
        certificate = None
        extra: Dict[str, Any] = {}
        if report.verdict != TscVerdict.TOTALLY_SYMMETRIC:
            if k == 4:
                extra['merge_check'] = self._merge_check(graph)
            certificate, reason = self._transposition_certificate(graph, case)
            if certificate is None:
                report.reason = reason
            elif certificate.found:
                witnesses.append(certificate.witness)
                entries.append(_witness_entry(certificate.witness,
                                              induced_color_perm_matrix(certificate.witness, graph), field))
                report = verify_tsc(graph, triple, witnesses)
            else:
                report = verify_tsc(graph, triple, witnesses, exhaustion=certificate)

        return GraphRecord(graph.label, {'triple': triple.to_dict(), 'order': triple.order(field)},
                           report, entries, certificate, extra)

    def _g3_5_record(self) -> Tuple[GraphRecord, ColoredCayleyGraph]:
        graph = g3_5()
        stabilizer = linear_stabilizer(graph)
        witness_set = exchange_witnesses(graph, self.thread_count)
        report = verify_tsc(graph, stabilizer, witness_set.maps)
        entries = [_witness_entry(m, perm, graph.field) for m, perm in witness_set.pairs]
        listed = [LinearMap(m, 5) for m in catalog.G3_5_STABILIZER_GENERATORS]
        record = GraphRecord(graph.label, {'order': len(stabilizer),
                                           'contains_listed_generators': all(m in stabilizer for m in listed)},
                             report, entries)
        return record, graph

    def _g3_11_record(self) -> Tuple[GraphRecord, ColoredCayleyGraph]:
        graph = g3_11()
        field = graph.field
        stabilizer = [gamma(field, e, s) for e, s in catalog.G3_11_STABILIZER_GENERATORS]
        matrices = [LinearMap(m, 11) for m in catalog.G3_11_EXCHANGE_MATRICES.values()]
        report = verify_tsc(graph, stabilizer, matrices)
        entries = [_witness_entry(m, perm, field) for m, perm in zip(matrices, report.color_group.generators)]
        record = GraphRecord(graph.label, {'generators': [str(g) for g in stabilizer]}, report, entries,
                             extra={'correspondence': line_correspondence(graph)})
        return record, graph

    # Searches

    def _merge_check(self, graph: ColoredCayleyGraph) -> Dict[str, Any]:
        """Merging opposite and adjacent color pairs must give isomorphic graphs if all colors are alike"""
        opposite = merge_colors(graph, [0, 1, 0, 1], label="merge {0,2}/{1,3}")
        adjacent = merge_colors(graph, [0, 0, 1, 1], label="merge {0,1}/{2,3}")
        iso = iso_colored(opposite, adjacent, permute_colors=True)
        return {'merged': [opposite.label, adjacent.label], 'isomorphic': iso is not None}

    def _transposition_certificate(self, graph: ColoredCayleyGraph,
                                   case: Case) -> Tuple[Optional[SearchCertificate], str]:
        target = ColorPermutation.from_cycles(graph.k, [(1, 2)])
        search_config = SearchConfig(target=target, thread_count=self.thread_count,
                                     progress_interval=config.PROGRESS_INTERVAL,
                                     fast_gf2=graph.field.p == 2)
        key = cache_key(graph.to_dict(), search_config)
        if self.cache is not None:
            cached = self.cache.get(key)
            if cached is not None:
                self.replay_stats['cache_hits'] += 1
                return cached, "cached"

        leaf_space = column_candidates(graph, target).leaf_space
        long_case = case in config.LONG_CASES
        allowed = (leaf_space <= config.MAX_GROUP_ORDER
                   or (self.include_long if long_case else self.with_big_searches))
        if not allowed:
            flag = "--include-long" if long_case else "--with-big-searches"
            return None, f"transposition search over {leaf_space} leaves skipped; rerun with {flag}"

        certificate = transposition_search(graph, search_config)
        self.replay_stats['searches_run'] += 1
        if self.cache is not None:
            self.cache.put(key, certificate)
        return certificate, "searched"


def replay_classification(cases: Optional[Sequence[Case]] = None, include_long: bool = False,
                          with_big_searches: bool = False, thread_count: int = 1,
                          cache: Optional[CertificateCache] = None) -> ClassificationReport:
    replay = ClassificationReplay(include_long, with_big_searches, thread_count, cache)
    return replay.run(cases)
