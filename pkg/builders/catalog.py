"""
Fixed data of the named graphs: moduli, primitive roots, direction partitions,
exchange matrices and stabilizer generators
"""
from typing import Dict, List, Optional, Tuple

from app.gf_engine import FieldTable, build_field

# Moduli as [c_0, ..., c_r], primitive roots as [a_0, ..., a_{r-1}]
MODULUS_5_2 = (2, 0, 1)
OMEGA_5_2 = (1, 1)
MODULUS_11_2 = (1, 0, 1)
OMEGA_11_2 = (6, 2)
MODULUS_7_4 = (3, 0, 1, 1, 1)

FIELD_PRESETS: Dict[Tuple[int, int], Tuple[Tuple[int, ...], Optional[Tuple[int, ...]]]] = {
    (5, 2): (MODULUS_5_2, OMEGA_5_2),
    (11, 2): (MODULUS_11_2, OMEGA_11_2),
    (7, 4): (MODULUS_7_4, None),
}

# Lines of F_5^2 named by a spanning vector (a, b) = a + b x.
# The order-16 stabilizer below preserves this pairing of (1,1) with (4,1).
G3_5_BLOCKS: List[List[Tuple[int, int]]] = [
    [(1, 0), (0, 1)],
    [(1, 1), (4, 1)],
    [(2, 1), (3, 1)],
]

# The other two ways to pair the line of (1,1) once (1,0) and (0,1) share a color
G3_5_ALTERNATIVES: Dict[str, List[List[Tuple[int, int]]]] = {
    'pair_1_1_with_3_1': [[(1, 0), (0, 1)], [(1, 1), (3, 1)], [(2, 1), (4, 1)]],
    'pair_1_1_with_2_1': [[(1, 0), (0, 1)], [(1, 1), (2, 1)], [(3, 1), (4, 1)]],
}

G3_5_STABILIZER_GENERATORS = [
    [[2, 0], [0, 2]],
    [[0, 1], [1, 0]],
    [[-1, 0], [0, 1]],
]

G3_11_BLOCKS: List[List[Tuple[int, int]]] = [
    [(1, 0), (0, 1), (1, 1), (10, 1)],
    [(2, 1), (3, 1), (5, 1), (7, 1)],
    [(4, 1), (6, 1), (8, 1), (9, 1)],
]

# Color transposition -> matrix realizing it on G_3(11^2)
G3_11_EXCHANGE_MATRICES: Dict[Tuple[int, int], List[List[int]]] = {
    (0, 1): [[2, 1], [1, 4]],
    (1, 2): [[1, 0], [0, -1]],
}

# omega^e alpha^s as (e, s)
G3_11_STABILIZER_GENERATORS = [(6, 0), (3, 1)]

# Images of omega and alpha in GL_2(5) for F_25 mod 2+x^2, omega = 1+x
EMBEDDING_5_2 = {'omega': [[1, 3], [1, 1]], 'alpha': [[1, 0], [0, -1]]}


def preset_field(p: int, r: int) -> FieldTable:
    """Field with the named modulus when one is fixed for (p, r), else the default"""
    if (p, r) in FIELD_PRESETS:
        poly, omega = FIELD_PRESETS[(p, r)]
        return build_field(p, r, poly, omega)
    return build_field(p, r)


def field_5_2() -> FieldTable:
    return preset_field(5, 2)


def field_11_2() -> FieldTable:
    return preset_field(11, 2)


def field_7_4() -> FieldTable:
    return preset_field(7, 4)
