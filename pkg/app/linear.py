"""
Linear maps over F_p acting on the coordinate space of a realized field
Matrices act on column vectors: the j-th column is the image of the j-th basis vector x^j
"""
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from app.exceptions import ParseError, SingularGenerator
from app.gf_engine import FieldTable


class LinearMap:
    """r x r matrix over F_p"""

    def __init__(self, entries: Sequence[Sequence[int]], p: int):
        matrix = np.array(entries, dtype=np.int64) % p
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ParseError(f"Matrix must be square, got shape {matrix.shape}")
        matrix.setflags(write=False)
        self.entries = matrix
        self.p = p
        self.r = matrix.shape[0]

    @classmethod
    def identity(cls, r: int, p: int) -> 'LinearMap':
        return cls(np.eye(r, dtype=np.int64), p)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], p: int) -> 'LinearMap':
        return cls(np.array(columns, dtype=np.int64).T, p)

    @classmethod
    def from_column_indices(cls, columns: Sequence[int], field: FieldTable) -> 'LinearMap':
        """Matrix whose columns are the coordinate vectors of the given elements"""
        return cls.from_columns([field.coords(int(c)) for c in columns], field.p)

    @property
    def columns(self) -> List[Tuple[int, ...]]:
        return [tuple(int(v) for v in self.entries[:, j]) for j in range(self.r)]

    def column_indices(self, field: FieldTable) -> List[int]:
        return [field.element(col) for col in self.columns]

    # Action

    def apply_coords(self, coords: np.ndarray) -> np.ndarray:
        """Rows of coordinates in, rows of image coordinates out"""
        return (np.asarray(coords, dtype=np.int64) @ self.entries.T) % self.p

    def apply(self, field: FieldTable, elems: np.ndarray) -> np.ndarray:
        return field.index_of(self.apply_coords(field.coords_table[elems]))

    def images(self, field: FieldTable) -> np.ndarray:
        """Image index of every field element, indexed by element"""
        return field.index_of(self.apply_coords(field.coords_table))

    # Algebra

    def compose(self, other: 'LinearMap') -> 'LinearMap':
        """self after other"""
        return LinearMap(self.entries @ other.entries, self.p)

    def __matmul__(self, other: 'LinearMap') -> 'LinearMap':
        return self.compose(other)

    def determinant(self) -> int:
        """Gaussian elimination over F_p"""
        a = [[int(v) for v in row] for row in self.entries]
        p, n = self.p, self.r
        det = 1
        for col in range(n):
            pivot = next((row for row in range(col, n) if a[row][col] % p), None)
            if pivot is None:
                return 0
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det = (det * a[col][col]) % p
            inv = pow(a[col][col], p - 2, p)
            for row in range(col + 1, n):
                factor = (a[row][col] * inv) % p
                if factor:
                    a[row] = [(x - factor * y) % p for x, y in zip(a[row], a[col])]
        return det % p

    def is_invertible(self) -> bool:
        return self.determinant() != 0

    def inverse(self) -> 'LinearMap':
        """Gauss-Jordan over F_p"""
        p, n = self.p, self.r
        a = [[int(v) for v in row] + [int(i == j) for j in range(n)]
             for i, row in enumerate(self.entries)]
        for col in range(n):
            pivot = next((row for row in range(col, n) if a[row][col] % p), None)
            if pivot is None:
                raise SingularGenerator(f"{self!r} is singular", matrix=self.entries.tolist())
            a[col], a[pivot] = a[pivot], a[col]
            inv = pow(a[col][col], p - 2, p)
            a[col] = [(x * inv) % p for x in a[col]]
            for row in range(n):
                factor = a[row][col] % p
                if row != col and factor:
                    a[row] = [(x - factor * y) % p for x, y in zip(a[row], a[col])]
        return LinearMap([row[n:] for row in a], p)

    # Serialization

    def to_dict(self) -> Dict[str, Any]:
        return {'p': self.p, 'entries': self.entries.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LinearMap':
        try:
            return cls(data['entries'], int(data['p']))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed matrix record: {e}")

    def key(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.entries.flatten())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearMap) and self.p == other.p and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.p, self.key()))

    def __repr__(self) -> str:
        return f"LinearMap({self.entries.tolist()}, p={self.p})"


def general_linear_order(r: int, p: int) -> int:
    """|GL_r(p)|"""
    order = 1
    for i in range(r):
        order *= p ** r - p ** i
    return order


class AffineMap:
    """x -> A x + b; only the linear part matters once translations are adjoined"""

    def __init__(self, linear: LinearMap, translation: Sequence[int] = None):
        self.linear = linear
        r = linear.r
        self.translation = tuple(int(t) % linear.p for t in (translation or [0] * r))
        if len(self.translation) != r:
            raise ParseError(f"Translation must have {r} coordinates")

    def images(self, field: FieldTable) -> np.ndarray:
        moved = self.linear.apply_coords(field.coords_table) + np.array(self.translation, dtype=np.int64)
        return field.index_of(moved)

    def to_dict(self) -> Dict[str, Any]:
        return {'linear': self.linear.to_dict(), 'translation': list(self.translation)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AffineMap':
        try:
            if 'linear' not in data:
                return cls(LinearMap.from_dict(data))
            return cls(LinearMap.from_dict(data['linear']), data.get('translation'))
        except (KeyError, TypeError) as e:
            raise ParseError(f"Malformed affine map record: {e}")

    def __repr__(self) -> str:
        return f"AffineMap({self.linear.entries.tolist()}, b={list(self.translation)})"
