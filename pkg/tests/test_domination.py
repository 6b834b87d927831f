import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from normdom import (
    Diagonal,
    FinVector,
    FuncTable,
    Scale,
    SepDomCert,
    WeightSchema,
    check_domcert,
    check_schema_cert,
    check_sepdom,
    dominate_family,
    dominate_schema,
    equivalence_constant,
    equivalence_oracle,
    eval_norm,
    max_to_product,
    product_to_max,
    schema_norms,
    solve_sepdom_table,
)
from normdom.domination import covering_slice
from normdom.errors import DimensionMismatchError, SliceCoverageError

from helpers import random_vector

e = FinVector.basis

tables = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 8).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 50), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def square_max(entries, n):
    """Brute force: the largest entry with both coordinates <= n."""
    return max((v for x, row in enumerate(entries) for y, v in enumerate(row)
                if x <= n and y <= n), default=0)


def test_zero_table():
    cert = solve_sepdom_table(FuncTable.from_function(10, 10, lambda k, l: 0))
    assert cert.form == "max" and set(cert.G) == set(cert.H) == {0}


def test_sum_table_gives_twice_the_index():
    f = FuncTable.from_function(10, 10, lambda k, l: k + l)
    cert = solve_sepdom_table(f)
    assert list(cert.G) == [2 * n for n in range(10)]
    assert check_sepdom(f, cert) == (True, None)


def test_product_table_gives_squares():
    f = FuncTable.from_function(8, 8, lambda k, l: k * l)
    cert = solve_sepdom_table(f)
    assert list(cert.G) == [n * n for n in range(8)]
    assert check_sepdom(f, cert)[0]


def test_check_reports_first_violation():
    f = FuncTable([[5, 0], [0, 0]])
    assert check_sepdom(f, SepDomCert("max", [0, 0], [0, 0])) == (False, (0, 0))


def test_check_rejects_wrong_shape():
    with pytest.raises(DimensionMismatchError):
        check_sepdom(FuncTable([[1, 2]]), SepDomCert("max", [1], [1]))


def test_max_to_product_examples():
    assert max_to_product(SepDomCert("max", [0, 0], [0, 0])) == SepDomCert("product", [1, 1], [1, 1])
    f = FuncTable.from_function(10, 10, lambda k, l: k + l)
    prod = max_to_product(solve_sepdom_table(f))
    assert prod.bound(3, 4) == 7 * 9
    assert check_sepdom(f, prod)[0]
    single = max_to_product(SepDomCert("max", [3], [4]))
    assert single.bound(0, 0) == 20 >= 4


def test_product_to_max_examples():
    assert product_to_max([0, 0], [0, 0]) == SepDomCert("max", [0, 0], [0, 0])
    cert = product_to_max([Q(3, 2)], [2])
    assert (cert.G, cert.H) == ((3,), (4,))
    assert product_to_max([1, 1], [1]) == SepDomCert("max", [1, 1], [1])


@given(tables)
def test_solver_matches_brute_force(entries):
    f = FuncTable(entries)
    cert = solve_sepdom_table(f)
    assert list(cert.G) == [square_max(entries, n) for n in range(f.rows)]
    assert list(cert.H) == [square_max(entries, n) for n in range(f.cols)]
    assert all(a <= b for a, b in zip(cert.G, cert.G[1:]))
    assert check_sepdom(f, cert)[0]


@given(tables)
def test_conversions_keep_the_bound(entries):
    f = FuncTable(entries)
    prod = max_to_product(solve_sepdom_table(f))
    back = product_to_max(prod.G, prod.H)
    assert check_sepdom(f, prod)[0] and check_sepdom(f, back)[0]


def test_equivalence_constant_examples():
    N = Diagonal.of({0: 2, 1: 3})
    assert equivalence_constant(N, N, [0, 1]) == 1
    assert equivalence_constant(N, Diagonal.sup(), [0, 1]) == 3
    assert equivalence_constant(Scale(Q(5), N), N, [0, 1]) == 5


@given(st.integers(0, 10**6), st.integers(0, 8))
def test_equivalence_constant_is_tight(seed, size):
    rng = random.Random(seed)
    J = sorted(rng.sample(range(12), size))
    Na = Diagonal.of({k: Q(rng.randint(1, 30), rng.randint(1, 5)) for k in J})
    Nb = Diagonal.of({k: Q(rng.randint(1, 30), rng.randint(1, 5)) for k in J})
    c = equivalence_constant(Na, Nb, J)
    brute, witness = equivalence_oracle(Na, Nb, J)
    assert c == brute
    if J:
        assert eval_norm(Na, witness) == c * eval_norm(Nb, witness)
        for _ in range(20):
            v = random_vector(rng, J)
            assert eval_norm(Na, v) <= c * eval_norm(Nb, v)


def test_single_member_family():
    N = Diagonal.of({0: 2})
    cert = dominate_family([N])
    assert cert.constants == {0: 1}
    assert all(eval_norm(cert.dominating, v) == eval_norm(N, v) for v in [e(0), e(3), e(0) - e(1)])


def test_two_diagonals_take_the_coordinatewise_max():
    cert = dominate_family([Diagonal.of({0: 1, 1: 4}), Diagonal.of({0: 3, 1: 2})], [1, 1])
    assert eval_norm(cert.dominating, e(0)) == 3
    assert eval_norm(cert.dominating, e(1)) == 4


def test_scaled_family_is_tight():
    base = Diagonal.of({0: 2, 3: Q(1, 2)})
    members = [Scale(Q(i + 1), base) for i in range(10)]
    samples = [e(0), e(3), e(0) - 4 * e(3), e(7)]
    cert = dominate_family(members, [i + 1 for i in range(10)], samples)
    for i, N in enumerate(members):
        for v in samples:
            assert eval_norm(N, v) == (i + 1) * eval_norm(cert.dominating, v)


def test_schema_norms_examples():
    for N in schema_norms(WeightSchema(3, 4)):
        assert all(N.weight(k) == 1 for k in range(6))
    assert schema_norms(WeightSchema.from_function(5, 5, lambda i, k: i + k))[2].weight(3) == 6
    assert schema_norms(WeightSchema(1, 1, [(0, 0, 7)]))[0].weight(0) == 8


def test_zero_schema_is_dominated_with_constant_one():
    cert = dominate_schema(WeightSchema(3, 4), Diagonal.sup(), [[0, 1], [2, 3]])
    assert set(cert.c.values()) == {1}
    assert set(cert.product_cert.G) == set(cert.product_cert.H) == {1}
    assert set(cert.constants.values()) == {1}


def test_product_schema_pipeline():
    schema = WeightSchema.from_function(4, 4, lambda i, k: i * k)
    slices = [[0], [0, 1], [1, 2], [2, 3], [0, 1, 2, 3]]
    rng = random.Random(7)
    samples = [random_vector(rng, rng.choice(slices)) for _ in range(100)]
    cert = dominate_schema(schema, Diagonal.sup(), slices, samples)
    for (i, j), c in cert.c.items():
        assert c == max(i * k + 1 for k in slices[j])
    assert check_sepdom(cert.table, cert.max_cert)[0]
    assert check_schema_cert(schema_norms(schema), cert)[0]


def test_single_norm_single_slice():
    schema = WeightSchema(1, 2, [(0, 1, 3)])
    N = schema_norms(schema)[0]
    cert = dominate_schema(schema, N, [[0, 1]])
    assert cert.constants == {0: 1}
    assert eval_norm(cert.dominating, e(1)) == eval_norm(N, e(1))


def test_uncovered_sample_is_reported():
    with pytest.raises(SliceCoverageError):
        covering_slice(e(0) + e(5), [[0, 1], [5]])


def test_check_domcert_finds_a_violation():
    cert = dominate_family([Diagonal.of({0: 2})])
    cert.constants[0] = Q(1, 2)
    ok, (i, v) = check_domcert([Diagonal.of({0: 2})], cert)
    assert not ok and i == 0
