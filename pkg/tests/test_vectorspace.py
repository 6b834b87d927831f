import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from normdom import FinVector, Flag, IndexSet, combine, restrict, support
from normdom.vectorspace import as_scalar, random_vector

e = FinVector.basis

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
vectors = st.dictionaries(st.integers(0, 8), rationals, max_size=5).map(FinVector)


def test_support_examples():
    assert support(FinVector()) == IndexSet()
    assert support(e(3)) == IndexSet([3])
    assert support(2 * e(0) - e(5)) == IndexSet([0, 5])


def test_combine_examples():
    assert combine(1, e(0), 1, e(0)) == 2 * e(0)
    zero = combine(1, e(0), -1, e(0))
    assert zero == FinVector() and support(zero) == ()
    assert combine(2, e(1) + e(2), 3, e(2)) == 2 * e(1) + 5 * e(2)


def test_restrict_examples():
    v = e(0) + e(1)
    assert restrict(v, {0}) == e(0)
    assert restrict(v, support(v)) == v
    assert restrict(v, {7}) == FinVector()


def test_zero_coordinates_are_dropped():
    v = FinVector({0: 0, 1: Q(1, 2), 4: 0})
    assert v.items == ((1, Q(1, 2)),)
    assert v[4] == 0


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_scalar(0.5)
    with pytest.raises(TypeError):
        FinVector({0: 0.25})


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        FinVector({-1: 1})


def test_flag_slices_and_levels():
    flag = Flag([0, 2], [5, 1])
    assert flag.depth == 2
    assert flag.slice(0) == IndexSet([0, 2])
    assert flag.slice(2) == IndexSet([0, 1, 2, 5])
    assert flag.level_of(e(2)) == 0
    assert flag.level_of(e(0) + e(5)) == 1
    assert flag.level_of(e(1)) == 2
    assert flag.level_of(e(3)) is None


def test_flag_rejects_repeats():
    with pytest.raises(ValueError):
        Flag([0], [1, 1])
    with pytest.raises(ValueError):
        Flag([0], [0])


def test_random_vector_is_reproducible():
    a = random_vector(random.Random(3), range(6))
    b = random_vector(random.Random(3), range(6))
    assert a == b
    assert set(support(a)) <= set(range(6))


@given(vectors, vectors, vectors)
def test_addition_is_associative_and_commutative(u, v, w):
    assert (u + v) + w == u + (v + w)
    assert u + v == v + u


@given(vectors, rationals, rationals)
def test_scalar_distributes(v, a, b):
    assert (a + b) * v == a * v + b * v
    assert combine(a, v, b, v) == (a + b) * v


@given(vectors)
def test_subtraction_cancels(v):
    assert v - v == FinVector()
    assert -(-v) == v


@given(vectors, st.sets(st.integers(0, 8)))
def test_restrict_is_a_projection(v, J):
    r = restrict(v, J)
    assert restrict(r, J) == r
    assert set(support(r)) <= J
    assert r + restrict(v, set(range(9)) - J) == v
