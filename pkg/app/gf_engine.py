"""
Finite field engine for TSC Graphs
Realizes GF(p^r) with dense log/antilog tables over integer-coded elements

An element a_0 + a_1 x + ... + a_{r-1} x^{r-1} is stored as the integer
a_0 + a_1 p + ... + a_{r-1} p^{r-1}. Nonzero elements are handled through
their discrete logarithm with respect to the chosen primitive root.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Any

import numpy as np

from app.config import config
from app.exceptions import (
    DivisionByZero, FieldTooLarge, ModulusReducible, NotBinaryField,
    NotPrime, NotPrimitive, ParseError, ZeroHasNoLog,
)

logger = logging.getLogger(__name__)

Poly = List[int]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> List[int]:
    """Distinct prime factors of n, increasing"""
    factors = []
    i = 2
    while i * i <= n:
        if n % i:
            i += 1
        else:
            n //= i
            if not factors or factors[-1] != i:
                factors.append(i)
    if n > 1 and (not factors or factors[-1] != n):
        factors.append(n)
    return factors


def divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# Polynomials over F_p, lowest degree first

def _trim(a: Poly) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Poly, f: Poly, p: int) -> Poly:
    a = [c % p for c in a]
    a = _trim(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df and a:
        coef = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - df
        for i, c in enumerate(f):
            a[shift + i] = (a[shift + i] - coef * c) % p
        a = _trim(a)
    return a


def poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_mulmod(a: Poly, b: Poly, f: Poly, p: int) -> Poly:
    return poly_mod(poly_mul(a, b, p), f, p)


def poly_powmod(base: Poly, exp: int, f: Poly, p: int) -> Poly:
    result = [1]
    base = poly_mod(base, f, p)
    while exp > 0:
        if exp & 1:
            result = poly_mulmod(result, base, f, p)
        base = poly_mulmod(base, base, f, p)
        exp >>= 1
    return poly_mod(result, f, p)


def poly_sub(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def poly_gcd(a: Poly, b: Poly, p: int) -> Poly:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_mod(a, b, p)
    if not a:
        return a
    inv_lead = pow(a[-1], p - 2, p)
    return [(c * inv_lead) % p for c in a]


def is_irreducible(p: int, poly: Sequence[int]) -> bool:
    """Ben-Or test: gcd(x^{p^i} - x, f) = 1 for every i <= deg(f)/2"""
    f = _trim([c % p for c in poly])
    degree = len(f) - 1
    if degree < 1:
        return False
    if degree == 1:
        return True
    h = [0, 1]
    for _ in range(degree // 2):
        h = poly_powmod(h, p, f, p)
        g = poly_gcd(f, poly_sub(h, [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


def default_modulus(p: int, r: int) -> Poly:
    """Smallest monic irreducible of degree r in increasing index order"""
    for m in range(p ** r):
        lower = [(m // p ** i) % p for i in range(r)]
        candidate = lower + [1]
        if is_irreducible(p, candidate):
            return candidate
    raise ModulusReducible(f"No irreducible polynomial of degree {r} over F_{p}", p=p, r=r)


@dataclass(frozen=True)
class FieldSpec:
    """Characteristic, degree and modulus of a realized field"""
    p: int
    r: int
    poly: Tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.r

    def label(self) -> str:
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"


class FieldTable:
    """Dense realization of GF(p^r); immutable once built"""

    def __init__(self, spec: FieldSpec, omega: int, exp: np.ndarray):
        self.spec = spec
        self.p = spec.p
        self.r = spec.r
        self.q = spec.q
        self.n = self.q - 1
        self.omega = int(omega)
        self.weights = self.p ** np.arange(self.r, dtype=np.int64)

        self.exp = exp.astype(np.int64)
        self.exp.setflags(write=False)
        log = np.full(self.q, -1, dtype=np.int64)
        log[self.exp] = np.arange(self.n, dtype=np.int64)
        self.log = log
        self.log.setflags(write=False)

        idx = np.arange(self.q, dtype=np.int64)
        self.coords_table = (idx[:, None] // self.weights[None, :]) % self.p
        self.coords_table.setflags(write=False)
        self.neg_table = self.index_of((-self.coords_table) % self.p)
        self.neg_table.setflags(write=False)

    # Encoding

    @property
    def is_binary(self) -> bool:
        return self.p == 2

    def element(self, coeffs: Sequence[int]) -> int:
        """Index of a_0 + a_1 x + ... given as a coefficient vector"""
        coeffs = list(coeffs) + [0] * (self.r - len(coeffs))
        if len(coeffs) > self.r:
            coeffs = poly_mod(coeffs, list(self.spec.poly), self.p) + [0] * self.r
            coeffs = coeffs[:self.r]
        return int(sum((c % self.p) * self.p ** i for i, c in enumerate(coeffs[:self.r])))

    def coords(self, elem: int) -> Tuple[int, ...]:
        return tuple(int(c) for c in self.coords_table[elem])

    def index_of(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized coordinate rows (mod p) to element indices"""
        return (np.asarray(coords, dtype=np.int64) % self.p) @ self.weights

    # Logarithms

    def dlog(self, elem: int) -> int:
        if not 0 <= elem < self.q:
            raise ParseError(f"{elem} is not an element index of {self.spec.label()}", elem=elem)
        if elem == 0:
            raise ZeroHasNoLog("Zero has no discrete logarithm")
        return int(self.log[elem])

    def power(self, i: int) -> int:
        """omega^i"""
        return int(self.exp[i % self.n])

    # Arithmetic

    def add(self, a: int, b: int) -> int:
        if self.is_binary:
            return a ^ b
        return int(self.index_of(self.coords_table[a] + self.coords_table[b]))

    def add_many(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.is_binary:
            return np.bitwise_xor(a, b)
        return self.index_of(self.coords_table[a] + self.coords_table[b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale(self, a: int, c: int) -> int:
        """Multiplication by the prime-field scalar c"""
        return int(self.index_of(self.coords_table[a] * c))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % self.n])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("Zero has no inverse")
        return int(self.exp[(-self.log[a]) % self.n])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return int(self.exp[(self.log[a] * k) % self.n])

    def frobenius(self, elem: int, s: int = 1) -> int:
        """elem^(p^s)"""
        if elem == 0:
            return 0
        return int(self.exp[(int(self.log[elem]) * pow(self.p, s % self.r, self.n)) % self.n])

    def order(self, elem: int) -> int:
        if elem == 0:
            raise ZeroHasNoLog("Zero has no multiplicative order")
        i = int(self.log[elem])
        return self.n // gcd(i, self.n)

    # GF(2^r) byte view

    def byte_elements(self) -> np.ndarray:
        """Powers of omega as machine words; addition of words is exclusive-or"""
        if not self.is_binary:
            raise NotBinaryField(f"{self.spec.label()} is not a binary field", p=self.p)
        return self.exp.astype(np.uint32)

    # Serialization

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p': self.p,
            'r': self.r,
            'poly': list(self.spec.poly),
            'omega': list(self.coords(self.omega))
        }

    def __repr__(self) -> str:
        return f"FieldTable({self.spec.label()}, poly={list(self.spec.poly)}, omega={self.coords(self.omega)})"


def _has_full_order(elem: Poly, spec: FieldSpec) -> bool:
    n = spec.q - 1
    f = list(spec.poly)
    if not poly_mod(elem, f, spec.p):
        return False
    if poly_powmod(elem, n, f, spec.p) != [1]:
        return False
    for ell in prime_factors(n):
        if poly_powmod(elem, n // ell, f, spec.p) == [1]:
            return False
    return True


def primitive_root(spec: FieldSpec) -> Poly:
    """Smallest element (increasing index order) of multiplicative order q - 1"""
    p, r = spec.p, spec.r
    if spec.q == 2:
        return [1]
    for m in range(1, spec.q):
        candidate = _trim([(m // p ** i) % p for i in range(r)])
        if _has_full_order(candidate, spec):
            return candidate
    raise NotPrimitive(f"{spec.label()} has no primitive root under {list(spec.poly)}")


@lru_cache(maxsize=64)
def _build(p: int, r: int, poly: Tuple[int, ...], omega: Optional[Tuple[int, ...]]) -> FieldTable:
    spec = FieldSpec(p, r, poly)
    f = list(poly)

    if omega is not None:
        omega_poly = poly_mod(list(omega), f, p)
        if not _has_full_order(omega_poly, spec):
            raise NotPrimitive(f"{list(omega)} is not a primitive root of {spec.label()}",
                               omega=list(omega))
    elif _has_full_order([0, 1], spec):
        omega_poly = poly_mod([0, 1], f, p)
    else:
        omega_poly = primitive_root(spec)

    n = spec.q - 1
    exp = np.zeros(n, dtype=np.int64)
    weights = [p ** i for i in range(r)]
    current = [1]
    for i in range(n):
        exp[i] = sum(c * w for c, w in zip(current, weights))
        current = poly_mulmod(current, omega_poly, f, p)

    omega_index = int(sum(c * w for c, w in zip(omega_poly, weights)))
    logger.debug("Built %s with omega index %d", spec.label(), omega_index)
    return FieldTable(spec, omega_index, exp)


def build_field(p: int, r: int, poly: Optional[Sequence[int]] = None,
                omega: Optional[Sequence[int]] = None) -> FieldTable:
    """Construct GF(p^r)

    poly is the monic modulus as [c_0, ..., c_r]; when absent the smallest
    irreducible is used. omega optionally pins the primitive root; otherwise x
    is used when primitive, else the smallest primitive element.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime", p=p)
    if r < 1:
        raise ModulusReducible(f"Extension degree must be positive, got {r}", r=r)
    if p ** r > config.MAX_FIELD_ORDER:
        raise FieldTooLarge(f"Field order {p}^{r} exceeds {config.MAX_FIELD_ORDER}",
                            p=p, r=r, bound=config.MAX_FIELD_ORDER)

    if poly is None:
        modulus = default_modulus(p, r)
    else:
        modulus = [int(c) % p for c in poly]
        if len(_trim(modulus)) != r + 1 or modulus[-1] != 1:
            raise ModulusReducible(f"Modulus {list(poly)} is not monic of degree {r}",
                                   poly=list(poly), r=r)
        if not is_irreducible(p, modulus):
            raise ModulusReducible(f"Modulus {list(poly)} is reducible over F_{p}",
                                   poly=list(poly), p=p)

    omega_key = None if omega is None else tuple(int(c) % p for c in omega)
    return _build(p, r, tuple(modulus), omega_key)


def field_from_dict(data: Dict[str, Any]) -> FieldTable:
    return build_field(int(data['p']), int(data['r']), data.get('poly'), data.get('omega'))
