from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from normdom import (
    Diagonal,
    Extension,
    FinVector,
    Flag,
    MaxOf,
    Scale,
    SupFamily,
    WeightSchema,
    ball_box,
    check_norm_axioms,
    eval_norm,
    schema_norms,
)
from normdom.boxes import Interval
from normdom.errors import DomainViolationError, InvalidNormError
from normdom.norms import WeightFunction

e = FinVector.basis

positive = st.fractions(min_value=Q(1, 8), max_value=8, max_denominator=8).filter(lambda q: q > 0)
rationals = st.fractions(min_value=-10, max_value=10, max_denominator=9)
vectors = st.dictionaries(st.integers(0, 6), rationals, max_size=5).map(FinVector)

diagonals = st.builds(
    lambda w, d: Diagonal.of(w, d),
    st.dictionaries(st.integers(0, 6), positive, max_size=4),
    positive,
)


def _extend(inner):
    return st.one_of(
        st.builds(Scale, positive, inner),
        st.lists(inner, min_size=1, max_size=3).map(MaxOf),
        st.lists(st.tuples(inner, positive), min_size=1, max_size=3).map(SupFamily),
    )


norms = st.recursive(diagonals, _extend, max_leaves=6)


def test_supremum_norm_at_basis_vectors():
    for k in range(5):
        assert eval_norm(Diagonal.sup(), e(k)) == 1


def test_schema_weight_at_basis_vector():
    schema = WeightSchema(3, 4, [(2, 3, 5)])
    assert eval_norm(schema_norms(schema)[2], e(3)) == 6


def test_zero_weight_is_rejected_at_construction():
    with pytest.raises(InvalidNormError):
        Diagonal.of({0: 0})
    with pytest.raises(InvalidNormError):
        Scale(Q(0), Diagonal.sup())
    with pytest.raises(InvalidNormError):
        WeightFunction({}, -1)


def test_axioms_on_small_examples():
    samples = [e(0), e(1), e(0) + e(1)]
    assert check_norm_axioms(Diagonal.sup(), samples).ok
    both = MaxOf([Diagonal.of({0: 2}), Diagonal.of({1: 3}, Q(1, 2))])
    assert check_norm_axioms(both, samples + [e(0) - 3 * e(2)]).ok


def test_ball_box_examples():
    box = ball_box(Diagonal.sup(), [0], 1, FinVector())
    assert box.intervals == (Interval(Q(-1), Q(1)),)
    box = ball_box(Diagonal.of({0: 2}), [0], 1, FinVector())
    assert box.intervals == (Interval(Q(-1, 2), Q(1, 2)),)
    ext = Extension(Diagonal.sup(), Flag([0], [1]), [Q(1, 2)])
    box = ball_box(ext, [0, 1], 1, FinVector())
    assert box.intervals == (Interval(Q(-1), Q(1)), Interval(Q(-1, 2), Q(1, 2)))


def test_extension_is_undefined_off_its_slice():
    ext = Extension(Diagonal.sup(), Flag([0], [1]), [Q(1, 2)])
    assert eval_norm(ext, e(0) + e(1)) == 2
    with pytest.raises(DomainViolationError):
        eval_norm(ext, e(2))
    with pytest.raises(DomainViolationError):
        ext.weight(2)


def test_extension_chain_grows_one_step_at_a_time():
    ext = Extension(Diagonal.sup(), Flag([0], [1]), [Q(1, 2)]).extended(2, Q(1, 4))
    assert ext.flag == Flag([0], [1, 2])
    assert [ext.weight(k) for k in range(3)] == [1, 2, 4]


def test_extension_needs_one_epsilon_per_step():
    with pytest.raises(InvalidNormError):
        Extension(Diagonal.sup(), Flag([0], [1, 2]), [Q(1, 2)])


@given(norms, vectors)
def test_closed_form_matches_recursive_evaluation(N, v):
    closed = max((N.weight(k) * abs(x) for k, x in v), default=Q(0))
    assert eval_norm(N, v) == closed


@given(norms, st.lists(vectors, min_size=1, max_size=5))
def test_every_expression_is_a_norm(N, samples):
    report = check_norm_axioms(N, samples)
    assert report.ok, report


@given(norms, vectors, positive)
def test_ball_box_is_the_ball(N, center, r):
    J = sorted(set(k for k, _ in center) | {0, 1})
    box = ball_box(N, J, r, center)
    for p in box.vertices():
        assert eval_norm(N, p - center) == r
    assert center in box
