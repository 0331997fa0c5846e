"""
The one-dimensional semilinear group GammaL_1(p^r) and Foulser standard forms
omega^e alpha^s sends omega^i to omega^(p^s i + e); all orbit work is exponent arithmetic
"""
import logging
from dataclasses import dataclass, field as dataclass_field
from math import gcd
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.config import config
from app.exceptions import EnumerationTooLarge, NotColorPermuting, NotStandardForm, SingularGenerator
from app.gf_engine import FieldTable, divisors
from app.linear import LinearMap
from app.models import ColorGroupSummary, ColorPermutation
from builders.colored_graphs import ColoredCayleyGraph, induced_color_permutation

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class GammaElem:
    """omega^e alpha^s with e mod q-1 and s mod r"""
    e: int
    s: int = 0

    def images(self, field: FieldTable) -> np.ndarray:
        """Image of every field element, indexed by element"""
        step = pow(field.p, self.s % field.r, field.n)
        images = np.zeros(field.q, dtype=np.int64)
        exponents = np.arange(field.n, dtype=np.int64)
        images[field.exp] = field.exp[(step * exponents + self.e) % field.n]
        return images

    def to_dict(self) -> Dict[str, int]:
        return {'e': self.e, 's': self.s}

    def __str__(self) -> str:
        parts = []
        if self.e:
            parts.append(f"w^{self.e}")
        if self.s:
            parts.append(f"a^{self.s}")
        return "".join(parts) or "1"


def gamma(field: FieldTable, e: int, s: int = 0) -> GammaElem:
    return GammaElem(e % field.n, s % field.r)


def gamma_compose(a: GammaElem, b: GammaElem, field: FieldTable) -> GammaElem:
    """a after b, using alpha omega = omega^p alpha"""
    step = pow(field.p, a.s % field.r, field.n)
    return GammaElem((a.e + step * b.e) % field.n, (a.s + b.s) % field.r)


def gamma_apply(g: GammaElem, elem: int, field: FieldTable) -> int:
    if elem == 0:
        return 0
    step = pow(field.p, g.s % field.r, field.n)
    return int(field.exp[(step * int(field.log[elem]) + g.e) % field.n])


def gamma_order(g: GammaElem, field: FieldTable) -> int:
    identity = GammaElem(0, 0)
    current, order = gamma(field, g.e, g.s), 1
    while current != identity:
        current = gamma_compose(g, current, field)
        order += 1
    return order


# Foulser triples

@dataclass(frozen=True, order=True)
class FoulserTriple:
    """H = <omega^d, omega^e alpha^s>; s = r means H has no Frobenius part"""
    d: int
    e: int
    s: int

    def problems(self, field: FieldTable) -> List[str]:
        p, r, n = field.p, field.r, field.n
        found = []
        if not 1 <= self.s <= r or r % self.s:
            found.append(f"s={self.s} must divide r={r}")
        if self.d < 1 or n % self.d:
            found.append(f"d={self.d} must divide q-1={n}")
        if not 0 <= self.e < max(self.d, 1):
            found.append(f"e={self.e} must lie in [0, d)")
        if not found and (self.e * (n // (p ** self.s - 1))) % self.d:
            found.append(f"d={self.d} must divide e(q-1)/(p^s-1)")
        return found

    def validate(self, field: FieldTable) -> 'FoulserTriple':
        problems = self.problems(field)
        if problems:
            raise NotStandardForm(f"{self} is not a standard form in {field.spec.label()}: "
                                  f"{'; '.join(problems)}", triple=self.as_tuple())
        return self

    def order(self, field: FieldTable) -> int:
        return field.n * field.r // (self.d * self.s)

    def generators(self, field: FieldTable) -> List[GammaElem]:
        gens = [gamma(field, self.d), gamma(field, self.e, self.s)]
        return [g for g in gens if g != GammaElem(0, 0)]

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.d, self.e, self.s)

    def to_dict(self) -> Dict[str, int]:
        return {'d': self.d, 'e': self.e, 's': self.s}

    def __str__(self) -> str:
        return f"({self.d},{self.e},{self.s})"


@dataclass
class SemilinearSubgroup:
    triple: FoulserTriple
    elements: Optional[List[GammaElem]] = None

    @classmethod
    def from_triple(cls, triple: FoulserTriple, field: FieldTable,
                    materialize: bool = False) -> 'SemilinearSubgroup':
        triple.validate(field)
        return cls(triple, subgroup_elements(triple, field) if materialize else None)

    def generators(self, field: FieldTable) -> List[GammaElem]:
        return self.triple.generators(field)

    def to_dict(self, field: FieldTable) -> Dict[str, Any]:
        return {
            'triple': self.triple.to_dict(),
            'order': self.triple.order(field),
            'generators': [str(g) for g in self.generators(field)]
        }


def _frobenius_sum(p: int, s: int, m: int, modulus: int) -> int:
    """1 + p^s + ... + p^(s(m-1)) mod modulus"""
    total, term = 0, 1 % modulus
    for _ in range(m):
        total = (total + term) % modulus
        term = (term * pow(p, s, modulus)) % modulus
    return total


def valid_triples(field: FieldTable) -> Iterator[FoulserTriple]:
    p, r, n = field.p, field.r, field.n
    for s in divisors(r):
        span = n // (p ** s - 1)
        for d in divisors(n):
            step = d // gcd(d, span)
            for e in range(0, d, step):
                yield FoulserTriple(d, e, s)


def subgroup_elements(triple: FoulserTriple, field: FieldTable) -> List[GammaElem]:
    """All (d j + e(1 + p^s + ... + p^(s(m-1))), s m), sorted"""
    triple.validate(field)
    p, r, n = field.p, field.r, field.n
    d, e, s = triple.as_tuple()
    step = pow(p, s, n)
    base = np.arange(n // d, dtype=np.int64) * d

    elements, offset = [], 0
    for m in range(r // s):
        frob = (s * m) % r
        elements.extend(GammaElem(int(x), frob) for x in (base + offset) % n)
        offset = (offset * step + e) % n
    return sorted(elements)


def subgroup_closure(generators: Sequence[GammaElem], field: FieldTable) -> List[GammaElem]:
    """Breadth-first closure of the generators inside GammaL_1, sorted"""
    n, r = field.n, field.r
    total = n * r
    if total > config.MAX_GROUP_ORDER:
        raise EnumerationTooLarge(f"|GammaL_1({field.q})| = {total} exceeds {config.MAX_GROUP_ORDER}",
                                  order=total)
    powers = np.array([pow(field.p, s, n) for s in range(r)], dtype=np.int64)
    gens = [(g.e % n, g.s % r) for g in generators]

    seen = np.zeros(total, dtype=bool)
    seen[0] = True
    frontier_e = np.zeros(1, dtype=np.int64)
    frontier_s = np.zeros(1, dtype=np.int64)
    while frontier_e.size and gens:
        keys = np.concatenate([((frontier_e + powers[frontier_s] * ge) % n) * r + (frontier_s + gs) % r
                               for ge, gs in gens])
        keys = np.unique(keys[~seen[keys]])
        seen[keys] = True
        frontier_e, frontier_s = keys // r, keys % r

    return [GammaElem(int(k // r), int(k % r)) for k in np.nonzero(seen)[0]]


def standard_form(generators: Sequence[GammaElem], field: FieldTable) -> FoulserTriple:
    elements = subgroup_closure(generators, field)
    d = field.n
    for g in elements:
        if g.s == 0:
            d = gcd(d, g.e)
    frobenius_parts = [g.s for g in elements if g.s]
    s = min(frobenius_parts) if frobenius_parts else field.r
    e = 0 if s == field.r else next(g.e for g in elements if g.s == s) % d
    return FoulserTriple(d, e, s)


# Orbits, computed on residues mod d

def _residue_cycles(triple: FoulserTriple, p: int) -> List[List[int]]:
    """Cycles of c -> p^s c + e on Z_d, each sorted, ordered by smallest residue"""
    d, e, s = triple.as_tuple()
    step = pow(p, s, d)
    seen = [False] * d
    cycles = []
    for start in range(d):
        if seen[start]:
            continue
        cycle, c = [], start
        while not seen[c]:
            seen[c] = True
            cycle.append(c)
            c = (step * c + e) % d
        cycles.append(sorted(cycle))
    return cycles


def _cycle_labels(cycles: List[List[int]], d: int) -> np.ndarray:
    labels = np.empty(d, dtype=np.int64)
    for index, cycle in enumerate(cycles):
        labels[cycle] = index
    return labels


def orbit_labels(triple: FoulserTriple, field: FieldTable) -> np.ndarray:
    """Orbit index of omega^j for j = 0..q-2"""
    triple.validate(field)
    labels = _cycle_labels(_residue_cycles(triple, field.p), triple.d)
    return labels[np.arange(field.n) % triple.d]


def orbit_partition(triple: FoulserTriple, field: FieldTable) -> List[np.ndarray]:
    """Orbits as sorted exponent arrays, ordered by smallest exponent"""
    labels = orbit_labels(triple, field)
    return [np.nonzero(labels == i)[0] for i in range(int(labels.max()) + 1)]


def orbit_graph(triple: FoulserTriple, field: FieldTable, label: str = "") -> ColoredCayleyGraph:
    labels = orbit_labels(triple, field)
    colors = np.full(field.q, -1, dtype=np.int64)
    colors[field.exp] = labels
    return ColoredCayleyGraph(field, colors, int(labels.max()) + 1,
                              label or f"Orb{triple}({field.spec.label()})")


def _has_equal_orbits(cycles: List[List[int]], k: int) -> bool:
    return len(cycles) == k and len({len(c) for c in cycles}) == 1


def _stabilizer_triple(labels: np.ndarray, p: int, r: int) -> FoulserTriple:
    """Standard form of every omega^e alpha^s preserving each class of a labelling of Z_m"""
    m = len(labels)
    c = np.arange(m, dtype=np.int64)
    d = next(t for t in divisors(m) if np.array_equal(labels[(c + t) % m], labels))
    for s in range(1, r + 1):
        step = pow(p, s, m)
        for lo in range(0, d, 256):
            shifts = np.arange(lo, min(d, lo + 256), dtype=np.int64)
            moved = labels[(step * c[None, :] + shifts[:, None]) % m]
            ok = np.all(moved == labels[None, :], axis=1)
            if ok.any():
                return FoulserTriple(d, int(shifts[np.argmax(ok)]), s)
    raise NotStandardForm("Identity does not stabilize the labelling")


def full_stabilizer(coloring: Union[ColoredCayleyGraph, np.ndarray], field: FieldTable) -> FoulserTriple:
    """Largest subgroup of GammaL_1 preserving every color class

    coloring is a graph on field or the color of omega^j for j = 0..q-2.
    """
    if isinstance(coloring, ColoredCayleyGraph):
        coloring = coloring.colors_by_dlog()
    return _stabilizer_triple(np.asarray(coloring, dtype=np.int64), field.p, field.r)


def is_closed(triple: FoulserTriple, field: FieldTable) -> bool:
    """True when the triple is the whole GammaL_1 stabilizer of its own orbits"""
    triple.validate(field)
    labels = _cycle_labels(_residue_cycles(triple, field.p), triple.d)
    return _stabilizer_triple(labels, field.p, field.r) == triple


def _induced_on_cycles(g: GammaElem, cycles: List[List[int]], d: int, p: int) -> ColorPermutation:
    labels = _cycle_labels(cycles, d)
    step = pow(p, g.s, d)
    mapping = []
    for cycle in cycles:
        images = labels[(step * np.asarray(cycle, dtype=np.int64) + g.e) % d]
        bad = np.nonzero(images != images[0])[0]
        if bad.size:
            raise NotColorPermuting(f"{g} splits the orbit of residue {cycle[0]} mod {d}",
                                    witness=(cycle[0], cycle[int(bad[0])]))
        mapping.append(int(images[0]))
    return ColorPermutation(mapping)


def _orbit_permuting_elements(triple: FoulserTriple, field: FieldTable) -> List[ColorPermutation]:
    """Color permutations induced by all of GammaL_1 that permute the triple's orbits"""
    cycles = _residue_cycles(triple, field.p)
    perms = set()
    for s in range(field.r):
        for e in range(triple.d):
            try:
                perms.add(_induced_on_cycles(GammaElem(e, s), cycles, triple.d, field.p))
            except NotColorPermuting:
                continue
    return sorted(perms, key=lambda g: g.images)


def _closed_triples_with_equal_orbits(field: FieldTable, k: int) -> Iterator[FoulserTriple]:
    for triple in valid_triples(field):
        # an orbit on Z_d closes up after at most r / s steps
        if triple.d % k or triple.d // k > field.r // triple.s:
            continue
        if _has_equal_orbits(_residue_cycles(triple, field.p), k) and is_closed(triple, field):
            yield triple


def surviving_stabilizers(field: FieldTable, k: int) -> List[FoulserTriple]:
    """Closed triples with k equal orbits whose orbits GammaL_1 can permute transitively"""
    survivors = []
    for triple in _closed_triples_with_equal_orbits(field, k):
        summary = ColorGroupSummary.from_generators(_orbit_permuting_elements(triple, field), k)
        if summary.is_transitive:
            survivors.append(triple)
        else:
            logger.debug("%s in %s has no color-transitive overgroup", triple, field.spec.label())
    return sorted(survivors)


def enumerate_k_equal_orbit_subgroups(field: FieldTable, k: int,
                                      overgroup_filter: bool = True) -> List[FoulserTriple]:
    """Standard forms whose orbits on nonzero elements are k classes of equal size

    Only triples equal to the full stabilizer of their own orbits are kept. With
    overgroup_filter, triples whose orbits no element of GammaL_1 can move
    transitively are dropped as well.
    """
    if overgroup_filter:
        return surviving_stabilizers(field, k)
    return sorted(_closed_triples_with_equal_orbits(field, k))


# Overgroups

def triple_contains(triple: FoulserTriple, g: GammaElem, field: FieldTable) -> bool:
    s = g.s % field.r
    if s % triple.s:
        return False
    steps = s // triple.s
    return (g.e - triple.e * _frobenius_sum(field.p, triple.s, steps, field.n)) % triple.d == 0


@dataclass
class OvergroupCandidate:
    triple: FoulserTriple
    permutes_colors: bool
    color_group: Optional[ColorGroupSummary] = None
    induced: List[ColorPermutation] = dataclass_field(default_factory=list)
    rejection: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'triple': self.triple.to_dict(),
            'permutes_colors': self.permutes_colors,
            'color_group': self.color_group.to_dict() if self.color_group else None,
            'induced': [str(g) for g in self.induced],
            'rejection': self.rejection
        }


def enumerate_color_transitive_overgroups(subgroup: FoulserTriple, field: FieldTable,
                                          k: int) -> List[OvergroupCandidate]:
    """Standard forms containing the subgroup with index k, and how they act on its orbits"""
    subgroup.validate(field)
    cycles = _residue_cycles(subgroup, field.p)
    if not _has_equal_orbits(cycles, k):
        logger.warning("%s does not have %d equal orbits in %s", subgroup, k, field.spec.label())
        return []

    wanted = subgroup.order(field) * k
    inner = subgroup.generators(field)
    candidates = []
    for triple in valid_triples(field):
        if triple.order(field) != wanted or not all(triple_contains(triple, g, field) for g in inner):
            continue
        try:
            induced = [_induced_on_cycles(g, cycles, subgroup.d, field.p)
                       for g in triple.generators(field)]
        except NotColorPermuting as e:
            candidates.append(OvergroupCandidate(triple, False, rejection=e.message))
            continue
        candidates.append(OvergroupCandidate(triple, True, ColorGroupSummary.from_generators(induced, k),
                                             induced))
    return candidates


# Graph and matrix views

def induced_color_perm(g: GammaElem, graph: ColoredCayleyGraph) -> ColorPermutation:
    return induced_color_permutation(graph, g.images(graph.field))


def embed_semilinear_as_matrix(g: GammaElem, field: FieldTable,
                               basis: Optional[Sequence[int]] = None) -> LinearMap:
    """Matrix of g on coordinates over the basis (default 1, x, ..., x^(r-1))"""
    if basis is None:
        basis = [field.element([0] * j + [1]) for j in range(field.r)]
    change = LinearMap.from_column_indices(basis, field)
    if not change.is_invertible():
        raise SingularGenerator(f"{list(basis)} is not a basis of {field.spec.label()}")
    images = LinearMap.from_column_indices([gamma_apply(g, b, field) for b in basis], field)
    return change.inverse() @ images
