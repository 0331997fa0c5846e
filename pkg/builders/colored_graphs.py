"""
Colored Cayley graphs on finite fields
Every graph is a translation-invariant coloring of K_q stored as the color of each difference
"""
import logging
from dataclasses import dataclass, field as dataclass_field
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.exceptions import (BadPartition, BadRecoloring, NotColorPermuting, NotEdgeWellDefined,
                            NotPrimitive, ParseError, SingularGenerator)
from app.gf_engine import FieldTable, build_field, field_from_dict
from app.linear import AffineMap, LinearMap
from app.models import ColorPermutation
from builders import catalog

logger = logging.getLogger(__name__)


class ColoredCayleyGraph:
    """k-coloring of the complete graph on a field, color(u, v) = colors[u - v]

    colors is indexed by element; colors[0] is -1 since 0 is not an edge difference.
    """

    def __init__(self, field: FieldTable, colors: np.ndarray, k: int, label: str = ""):
        colors = np.asarray(colors, dtype=np.int64).copy()
        if colors.shape != (field.q,):
            raise ParseError(f"Color table must have {field.q} entries, got {colors.shape}")
        colors[0] = -1
        self.field = field
        self.k = int(k)
        self.label = label or f"Cayley({field.spec.label()})"

        nonzero = colors[1:]
        if nonzero.size and (nonzero.min() < 0 or nonzero.max() >= self.k):
            raise BadRecoloring(f"{self.label}: colors must lie in [0, {self.k - 1}]")
        missing = sorted(set(range(self.k)) - set(np.unique(nonzero).tolist()))
        if missing:
            raise BadRecoloring(f"{self.label}: colors {missing} are never attained", missing=missing)

        asymmetric = np.nonzero(colors != colors[field.neg_table])[0]
        if asymmetric.size:
            x = int(asymmetric[0])
            raise NotEdgeWellDefined(
                f"{self.label}: color({x}) != color(-{x}), the coloring does not descend to edges",
                element=list(field.coords(x)))

        colors.setflags(write=False)
        self.colors = colors

    # Basic views

    @property
    def vertex_count(self) -> int:
        return self.field.q

    def color(self, elem: int) -> int:
        return int(self.colors[elem])

    def edge_color(self, u: int, v: int) -> int:
        return int(self.colors[self.field.sub(u, v)])

    def colors_by_dlog(self) -> np.ndarray:
        """Entry j is the color of omega^j"""
        return self.colors[self.field.exp]

    def negation_closed(self) -> bool:
        return bool(np.array_equal(self.colors, self.colors[self.field.neg_table]))

    def color_matrix(self) -> np.ndarray:
        """q x q matrix of edge colors, -1 on the diagonal"""
        coords = self.field.coords_table
        diff = (coords[:, None, :] - coords[None, :, :]) % self.field.p
        return self.colors[diff @ self.field.weights]

    def same_coloring(self, other: 'ColoredCayleyGraph') -> bool:
        return (self.field.spec == other.field.spec and self.field.omega == other.field.omega
                and self.k == other.k and bool(np.array_equal(self.colors, other.colors)))

    def relabeled(self, label: str) -> 'ColoredCayleyGraph':
        return ColoredCayleyGraph(self.field, self.colors, self.k, label)

    # Serialization

    def to_dict(self) -> Dict[str, Any]:
        field_info = self.field.to_dict()
        return {
            'label': self.label,
            'p': self.field.p,
            'r': self.field.r,
            'k': self.k,
            'poly': field_info['poly'],
            'omega': field_info['omega'],
            'colors': self.colors_by_dlog().tolist()
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ColoredCayleyGraph':
        try:
            field = field_from_dict(data)
            by_dlog = np.asarray(data['colors'], dtype=np.int64)
            k = int(data['k'])
            label = data.get('label', '')
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed graph record: {e}")

        if by_dlog.shape != (field.n,):
            raise ParseError(f"Graph record needs {field.n} colors, got {by_dlog.size}")
        colors = np.full(field.q, -1, dtype=np.int64)
        colors[field.exp] = by_dlog
        return cls(field, colors, k, label)

    def __repr__(self) -> str:
        return f"ColoredCayleyGraph({self.label}, k={self.k}, q={self.field.q})"


@dataclass
class DirectionPartition:
    """Partition of the directions of F_q^d into equally sized blocks of lines"""
    d: int
    blocks: List[List[Tuple[int, ...]]] = dataclass_field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {'d': self.d, 'blocks': [[list(v) for v in block] for block in self.blocks]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DirectionPartition':
        try:
            return cls(int(data['d']), [[tuple(int(c) for c in v) for v in block]
                                        for block in data['blocks']])
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed direction partition: {e}")


# Cyclotomic families

def cyclotomic_coset_graph(field: FieldTable, classes: Sequence[int], label: str,
                           omega: Optional[Sequence[int]] = None) -> ColoredCayleyGraph:
    """Color omega^j by classes[j mod m], with m = len(classes)

    When omega is given, exponents are taken relative to that primitive root instead.
    """
    m = len(classes)
    if m < 1 or field.n % m:
        raise NotEdgeWellDefined(f"{m} does not divide {field.n}", modulus=m, order=field.n)

    exponents = np.arange(field.n, dtype=np.int64)
    if omega is not None:
        root = field.element(omega)
        t = field.dlog(root) if root else 0
        if root == 0 or gcd(t, field.n) != 1:
            raise NotPrimitive(f"{list(omega)} is not a primitive root of {field.spec.label()}",
                               omega=list(omega))
        # omega^i = root^(i * t^-1)
        exponents = (exponents * pow(t, -1, field.n)) % field.n

    table = np.asarray(classes, dtype=np.int64)
    colors = np.full(field.q, -1, dtype=np.int64)
    colors[field.exp] = table[exponents % m]
    return ColoredCayleyGraph(field, colors, int(table.max()) + 1, label)


def gp_k(field: FieldTable, k: int, omega: Optional[Sequence[int]] = None) -> ColoredCayleyGraph:
    """Generalized Paley graph GP_k(q): color(omega^j) = j mod k"""
    if k < 1 or field.n % k:
        raise NotEdgeWellDefined(f"k={k} does not divide q-1={field.n}", k=k, q=field.q)
    if field.p != 2 and (field.n // k) % 2:
        raise NotEdgeWellDefined(f"(q-1)/k = {field.n // k} is odd, so -1 is not in the color 0 class",
                                 k=k, q=field.q)
    return cyclotomic_coset_graph(field, list(range(k)), f"GP_{k}({_power_label(field)})", omega)


def paley(field: FieldTable) -> ColoredCayleyGraph:
    """Squares are color 0"""
    if field.q % 4 != 1:
        raise NotEdgeWellDefined(f"Paley graph needs q = 1 mod 4, got q = {field.q}", q=field.q)
    return cyclotomic_coset_graph(field, [0, 1], f"PG({field.q})")


def peisert(field: FieldTable) -> ColoredCayleyGraph:
    """Exponents 0, 1 mod 4 are color 0"""
    if field.p % 4 != 3 or field.r % 2:
        raise NotEdgeWellDefined(f"Peisert graph needs p = 3 mod 4 and r even, got {field.p}^{field.r}",
                                 p=field.p, r=field.r)
    return cyclotomic_coset_graph(field, [0, 0, 1, 1], f"PG*({field.q})")


# Direction graphs

def _ambient_for(field_q: FieldTable, d: int, ambient: Optional[FieldTable]) -> FieldTable:
    if ambient is None:
        return build_field(field_q.p, field_q.r * d)
    if ambient.p != field_q.p or ambient.r != field_q.r * d:
        raise ParseError(f"Ambient field {ambient.spec.label()} does not match F_{field_q.q}^{d}")
    return ambient


def _projective_representatives(field_q: FieldTable, d: int, q_total: int) -> np.ndarray:
    """Flattened index of the canonical representative of every vector's direction

    The representative has its first nonzero coordinate scaled to 1; entry 0 is -1.
    """
    q = field_q.q
    place = q ** np.arange(d, dtype=np.int64)
    idx = np.arange(q_total, dtype=np.int64)
    comps = (idx[:, None] // place[None, :]) % q

    lead_pos = np.argmax(comps != 0, axis=1)
    lead = comps[idx, lead_pos]
    inv_log = (-field_q.log[lead]) % field_q.n
    scaled = np.where(comps == 0, 0,
                      field_q.exp[(field_q.log[comps] + inv_log[:, None]) % field_q.n])
    reps = scaled @ place
    reps[0] = -1
    return reps


def _flatten(vector: Sequence[int], q: int) -> int:
    return int(sum(int(c) * q ** i for i, c in enumerate(vector)))


def direction_graph(field_q: FieldTable, d: int,
                    ambient: Optional[FieldTable] = None) -> ColoredCayleyGraph:
    """F_k(q^d): one color per direction of F_q^d"""
    if d < 2:
        raise ParseError(f"Direction graphs need d > 1, got {d}")
    ambient = _ambient_for(field_q, d, ambient)
    reps = _projective_representatives(field_q, d, ambient.q)

    points, inverse = np.unique(reps[1:], return_inverse=True)
    colors = np.full(ambient.q, -1, dtype=np.int64)
    colors[1:] = inverse
    k = len(points)
    logger.debug("Direction graph on F_%d^%d has %d colors", field_q.q, d, k)
    return ColoredCayleyGraph(ambient, colors, k, f"F_{k}({field_q.q}^{d})")


def partition_direction_graph(field_q: FieldTable, d: int, partition: DirectionPartition,
                              ambient: Optional[FieldTable] = None,
                              label: str = "") -> ColoredCayleyGraph:
    """Color every difference by the block containing its direction"""
    if partition.d != d:
        raise BadPartition(f"Partition is for d={partition.d}, graph for d={d}")
    ambient = _ambient_for(field_q, d, ambient)
    q = field_q.q
    reps = _projective_representatives(field_q, d, ambient.q)
    all_points = set(np.unique(reps[1:]).tolist())

    block_of: Dict[int, int] = {}
    for b, block in enumerate(partition.blocks):
        for vector in block:
            if len(vector) != d or any(not 0 <= int(c) < q for c in vector) or not any(vector):
                raise BadPartition(f"{tuple(vector)} is not a nonzero vector of F_{q}^{d}",
                                   vector=list(vector))
            point = int(reps[_flatten(vector, q)])
            if point in block_of:
                raise BadPartition(f"Direction of {tuple(vector)} appears twice", vector=list(vector))
            block_of[point] = b

    if set(block_of) != all_points:
        raise BadPartition(f"Blocks cover {len(block_of)} of {len(all_points)} directions",
                           covered=len(block_of), total=len(all_points))
    sizes = {len(block) for block in partition.blocks}
    if len(sizes) != 1:
        raise BadPartition(f"Blocks have unequal sizes {sorted(sizes)}")

    lookup = np.full(q ** d, -1, dtype=np.int64)
    for point, b in block_of.items():
        lookup[point] = b
    colors = np.full(ambient.q, -1, dtype=np.int64)
    colors[1:] = lookup[reps[1:]]
    return ColoredCayleyGraph(ambient, colors, len(partition.blocks),
                              label or f"G_{len(partition.blocks)}({q}^{d})")


# Orbital graphs

def generator_images(generator: Any, field: FieldTable) -> np.ndarray:
    """Permutation of field elements induced by the linear part of a generator"""
    if isinstance(generator, AffineMap):
        generator = generator.linear
    if isinstance(generator, LinearMap):
        if generator.p != field.p or generator.r != field.r:
            raise ParseError(f"{generator!r} does not act on {field.spec.label()}")
        if not generator.is_invertible():
            raise SingularGenerator(f"{generator!r} is singular", matrix=generator.entries.tolist())
    images = np.asarray(generator.images(field), dtype=np.int64)
    if images[0] != 0 or np.unique(images).size != field.q:
        raise SingularGenerator(f"{generator!r} is not an invertible linear map of {field.spec.label()}")
    return images


def orbit_coloring(field: FieldTable, perms: Sequence[np.ndarray]) -> np.ndarray:
    """Breadth-first orbits of the group generated by perms on nonzero elements

    Orbits are numbered in order of their smallest discrete log.
    """
    colors = np.full(field.q, -1, dtype=np.int64)
    next_color = 0
    for start in field.exp:
        if colors[start] >= 0:
            continue
        colors[start] = next_color
        frontier = np.array([start], dtype=np.int64)
        while frontier.size and perms:
            images = np.concatenate([perm[frontier] for perm in perms])
            frontier = np.unique(images[colors[images] < 0])
            colors[frontier] = next_color
        next_color += 1
    return colors


def orbital_graph(p: int, r: int, generators: Sequence[Any], field: Optional[FieldTable] = None,
                  label: str = "") -> ColoredCayleyGraph:
    """Colors are the orbits of the 0-stabilizer on nonzero elements

    Translations are always adjoined, so only the linear parts of the generators
    matter. Generators may be LinearMap, AffineMap or anything with images(field).
    Colors are numbered by the smallest discrete log in each orbit.
    """
    field = field or build_field(p, r)
    if field.p != p or field.r != r:
        raise ParseError(f"Field {field.spec.label()} does not match {p}^{r}")
    colors = orbit_coloring(field, [generator_images(g, field) for g in generators])
    next_color = int(colors.max()) + 1

    logger.debug("Orbital coloring of %s has %d orbits", field.spec.label(), next_color)
    return ColoredCayleyGraph(field, colors, next_color, label or f"Orb({field.spec.label()})")


# Recoloring

def merge_colors(graph: ColoredCayleyGraph, surjection: Sequence[int],
                 label: str = "") -> ColoredCayleyGraph:
    """Recolor through old color -> surjection[old]"""
    mapping = [int(c) for c in surjection]
    if len(mapping) != graph.k:
        raise BadRecoloring(f"Recoloring needs {graph.k} entries, got {len(mapping)}")
    if not mapping or min(mapping) < 0 or set(mapping) != set(range(max(mapping) + 1)):
        raise BadRecoloring(f"{mapping} is not a surjection onto an initial range of colors",
                            surjection=mapping)

    table = np.asarray(mapping, dtype=np.int64)
    colors = np.full(graph.field.q, -1, dtype=np.int64)
    colors[1:] = table[graph.colors[1:]]
    return ColoredCayleyGraph(graph.field, colors, max(mapping) + 1,
                              label or f"{graph.label}/{mapping}")


def color_class_sizes(graph: ColoredCayleyGraph) -> List[int]:
    return np.bincount(graph.colors[1:], minlength=graph.k).tolist()


def color_classes(graph: ColoredCayleyGraph) -> List[np.ndarray]:
    """Elements of each color, in increasing discrete log"""
    by_dlog = graph.colors_by_dlog()
    return [graph.field.exp[by_dlog == c] for c in range(graph.k)]


def _power_label(field: FieldTable) -> str:
    return f"{field.p}^{field.r}" if field.r > 1 else str(field.p)


# Named graphs

def g3_5(blocks: Optional[Sequence[Sequence[Tuple[int, int]]]] = None) -> ColoredCayleyGraph:
    """G_3(5^2) realized inside F_25 mod 2+x^2 with omega = 1+x"""
    ambient = catalog.field_5_2()
    partition = DirectionPartition(2, [list(b) for b in (blocks or catalog.G3_5_BLOCKS)])
    return partition_direction_graph(build_field(5, 1), 2, partition, ambient,
                                     label="G_3(5^2)" if blocks is None else "")


def g3_11() -> ColoredCayleyGraph:
    """G_3(11^2) realized inside F_121 mod 1+x^2 with omega = 6+2x"""
    partition = DirectionPartition(2, [list(b) for b in catalog.G3_11_BLOCKS])
    return partition_direction_graph(build_field(11, 1), 2, partition, catalog.field_11_2(),
                                     label="G_3(11^2)")


def f_direction(p: int, m: int, d: int) -> ColoredCayleyGraph:
    """F_k(q^d) with q = p^m"""
    return direction_graph(build_field(p, m), d)


def induced_color_permutation(graph: ColoredCayleyGraph, images: np.ndarray) -> ColorPermutation:
    """Color permutation induced by a vertex permutation fixing 0

    Raises NotColorPermuting with a pair of same-colored elements whose images differ in color.
    """
    images = np.asarray(images, dtype=np.int64)
    mapped = graph.colors[images]
    result = []
    for members in color_classes(graph):
        targets = mapped[members]
        bad = np.nonzero(targets != targets[0])[0]
        if bad.size:
            x, y = int(members[0]), int(members[bad[0]])
            raise NotColorPermuting(
                f"{x} and {y} share a color but their images do not",
                witness=(graph.field.coords(x), graph.field.coords(y)))
        result.append(int(targets[0]))
    return ColorPermutation(result)
