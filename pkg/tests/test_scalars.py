import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qci.errors import FieldMismatch, NoPrimitiveRoot
from qci.scalars import Cyclotomic, PrimeField, parse_field, primitive_root_of_unity, sample_scalar

PRIMES = [2, 3, 5, 7, 11, 13, 101]


def test_root_f5_order2():
    assert primitive_root_of_unity(PrimeField(5), 2) == PrimeField(5)(4)


def test_root_cyclo3_is_generator():
    z = primitive_root_of_unity(Cyclotomic(3), 3)
    assert z.coefficients() == (Fraction(0), Fraction(1))


def test_no_root_f7_order4():
    with pytest.raises(NoPrimitiveRoot):
        primitive_root_of_unity(PrimeField(7), 4)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 31])
def test_prime_roots_have_exact_order(p):
    F = PrimeField(p)
    for a in range(2, p):
        if (p - 1) % a:
            continue
        z = F.primitive_root_of_unity(a)
        assert z**a == F.one
        assert all(z**j != F.one for j in range(1, a))


@pytest.mark.parametrize("a", [2, 3, 4, 5, 6, 8, 12])
def test_cyclotomic_roots_have_exact_order(a):
    F = Cyclotomic(a)
    z = F.primitive_root_of_unity(a)
    assert z**a == F.one
    assert all(z**j != F.one for j in range(1, a))


def test_sampling_is_seeded():
    F = PrimeField(5)
    xs = [sample_scalar(F, random.Random(9)) for _ in range(3)]
    assert len(set(xs)) == 1


def test_f2_samples_in_range():
    F = PrimeField(2)
    rng = random.Random(0)
    assert {int(F.sample(rng)) for _ in range(200)} <= {0, 1}


def test_f5_sampling_uniform():
    F = PrimeField(5)
    rng = random.Random(1)
    counts = Counter(int(F.sample(rng)) for _ in range(10_000))
    # binomial(10^4, 1/5): sd = 40
    assert all(abs(counts[r] - 2000) <= 5 * 40 for r in range(5))


def test_parse_field():
    assert parse_field("p:5") == PrimeField(5)
    assert parse_field("cyclo:3") == Cyclotomic(3)
    for bad in ("q:5", "p:x", "p:4"):
        with pytest.raises(ValueError):
            parse_field(bad)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        PrimeField(5)(PrimeField(7)(1))


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_prime_field_axioms(p, x, y, z):
    F = PrimeField(p)
    a, b, c = F(x), F(y), F(z)
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert int(a * b) == (x * y) % p
    if a:
        assert a * a.inverse() == F.one


cyclo_coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=6, max_size=6)


@given(st.sampled_from([3, 4, 5, 8]), cyclo_coeffs, cyclo_coeffs, cyclo_coeffs)
def test_cyclotomic_field_axioms(a, u, v, w):
    F = Cyclotomic(a)
    d = F.degree
    x, y, z = F(u[:d]), F(v[:d]), F(w[:d])
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    if x:
        assert x * x.inverse() == F.one
        assert (y / x) * x == y


@given(st.sampled_from([3, 4, 5, 8]), cyclo_coeffs)
def test_cyclotomic_parse_roundtrip(a, u):
    F = Cyclotomic(a)
    x = F(u[: F.degree])
    assert F.parse(str(x)) == x
