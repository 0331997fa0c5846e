import numpy as np
import pytest

from app.exceptions import (DivisionByZero, FieldTooLarge, ModulusReducible, NotBinaryField, NotPrime,
                            NotPrimitive, ParseError, ZeroHasNoLog)
from app.gf_engine import build_field, default_modulus, divisors, field_from_dict, is_irreducible
from builders import catalog


def test_gf16_uses_smallest_modulus_and_x(f16):
    assert list(f16.spec.poly) == [1, 1, 0, 0, 1]
    assert f16.omega == 2
    assert f16.exp[:5].tolist() == [1, 2, 4, 8, 3]


def test_gf256_defaults_to_rijndael_modulus():
    field = build_field(2, 8)
    assert list(field.spec.poly) == [1, 1, 0, 1, 1, 0, 0, 0, 1]
    # x has order 51 under this modulus, so x + 1 is chosen
    assert field.coords(field.omega) == (1, 1, 0, 0, 0, 0, 0, 0)


def test_named_moduli_and_roots(f25, f121):
    assert f25.coords(f25.omega) == (1, 1)
    assert f121.coords(f121.omega) == (6, 2)
    assert f121.order(f121.omega) == 120


def test_construction_errors():
    with pytest.raises(NotPrime):
        build_field(4, 1)
    with pytest.raises(ModulusReducible):
        build_field(2, 2, [1, 0, 1])
    with pytest.raises(NotPrimitive):
        build_field(5, 2, catalog.MODULUS_5_2, [0, 1])
    with pytest.raises(FieldTooLarge):
        build_field(2, 25)


def test_zero_has_no_log_or_inverse(f16):
    with pytest.raises(ZeroHasNoLog):
        f16.dlog(0)
    with pytest.raises(DivisionByZero):
        f16.inv(0)


def test_tables_are_inverse(f81):
    assert np.array_equal(f81.log[f81.exp], np.arange(f81.n))
    assert sorted(f81.exp.tolist()) == list(range(1, 81))


def test_every_nonzero_element_has_an_inverse(f16):
    for a in range(1, 16):
        assert f16.mul(a, f16.inv(a)) == 1


def test_distributivity_in_gf9(f9):
    for a in range(9):
        for b in range(9):
            for c in range(9):
                assert f9.mul(a, f9.add(b, c)) == f9.add(f9.mul(a, b), f9.mul(a, c))


def test_frobenius_is_additive(f81):
    for a in range(0, 81, 7):
        for b in range(0, 81, 5):
            assert f81.frobenius(f81.add(a, b)) == f81.add(f81.frobenius(a), f81.frobenius(b))


def test_negation_table(f25):
    for a in range(25):
        assert f25.add(a, f25.neg(a)) == 0


def test_byte_elements_add_by_xor():
    field = build_field(2, 8)
    words = field.byte_elements()
    assert words.dtype == np.uint32
    for a, b in [(1, 2), (3, 200), (77, 77)]:
        assert int(words[a]) ^ int(words[b]) == field.add(int(field.exp[a]), int(field.exp[b]))
    with pytest.raises(NotBinaryField):
        build_field(3, 2).byte_elements()


def test_record_rebuilds_same_tables(f121):
    rebuilt = field_from_dict(f121.to_dict())
    assert np.array_equal(rebuilt.exp, f121.exp)


def test_small_helpers():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert is_irreducible(2, [1, 1, 1])
    assert not is_irreducible(3, [1, 0, 1, 1])
    assert default_modulus(2, 8) == [1, 1, 0, 1, 1, 0, 0, 0, 1]


def test_frobenius_r_times_is_the_identity(f81, f121):
    for field in (f81, f121):
        for a in range(field.q):
            image = a
            for _ in range(field.r):
                image = field.frobenius(image)
            assert image == a


def test_frobenius_is_multiplicative(f81):
    for a in range(0, 81, 4):
        for b in range(0, 81, 3):
            assert f81.frobenius(f81.mul(a, b)) == f81.mul(f81.frobenius(a), f81.frobenius(b))


def test_dlog_turns_products_into_sums(f25):
    for a in range(1, 25):
        for b in range(1, 25):
            assert f25.dlog(f25.mul(a, b)) == (f25.dlog(a) + f25.dlog(b)) % f25.n


def test_dlog_rejects_indices_outside_the_field(f16):
    with pytest.raises(ParseError):
        f16.dlog(16)
    with pytest.raises(ParseError):
        f16.dlog(-1)
