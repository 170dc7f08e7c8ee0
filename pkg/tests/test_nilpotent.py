import pytest

from twisted_glue import fq
from twisted_glue.nilpotent import (
    JordanType,
    jm_data,
    jordan_matrix,
    jordan_type_of,
    partitions,
    reference_flag,
    tri_partition,
    w_prime,
)
from twisted_glue.root_weyl import Parabolic, WeylPerm, bruhat_leq, enumerate_weyl, parabolic_subgroup


def test_partitions():
    assert [p.parts for p in partitions(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert JordanType.parse("2, 1").parts == (2, 1)
    for bad in ("1,2", "0", "", "a"):
        with pytest.raises(ValueError):
            JordanType.parse(bad)


def test_jm_examples():
    d = jm_data(JordanType((1, 1, 1)))
    assert d.h_weights == (0, 0, 0) and d.J0 == {1, 2} and d.P0 == Parabolic.whole(3)
    d = jm_data(JordanType((4,)))
    assert d.h_weights == (3, 1, -1, -3) and d.J0 == frozenset() and d.P0 == Parabolic.borel(4)
    d = jm_data(JordanType((2, 2)))
    assert d.h_weights == (1, 1, -1, -1) and d.J0 == {1, 3} and d.ref_flag_dims == (2,)


@pytest.mark.parametrize("n", range(1, 7))
def test_weights_balanced(n):
    for lam in partitions(n):
        h = jm_data(lam).h_weights
        assert sum(h) == 0 and list(h) == sorted(h, reverse=True)


@pytest.mark.parametrize("n", range(1, 6))
def test_w_prime_structure(n):
    for lam in partitions(n):
        J0 = jm_data(lam).J0
        wp = w_prime(n, J0)
        assert len(wp.elements) * len(parabolic_subgroup(n, J0)) == len(enumerate_weyl(n))
        assert WeylPerm.identity(n) in wp.elements
        assert wp.length_max_unique and wp.bruhat_max_unique
        assert all(bruhat_leq(w, wp.w0_prime) for w in wp.elements)


def test_w_prime_extremes():
    assert w_prime(3, ()).w0_prime == WeylPerm.longest(3)
    assert len(w_prime(3, ()).elements) == 6
    assert w_prime(3, (1, 2)).elements == (WeylPerm.identity(3),)


def test_tri_partition_examples():
    t = tri_partition(WeylPerm.simple_reflection(3, 1), ())
    assert (t.I0, t.Iplus, t.Iminus) == (frozenset(), {2}, {1})
    t = tri_partition(WeylPerm.identity(3), (1, 2))
    assert t.I0 == {1, 2}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tri_partition_covers(n):
    for lam in partitions(n):
        J0 = jm_data(lam).J0
        for w in enumerate_weyl(n):
            t = tri_partition(w, J0)
            assert t.I0 | t.Iplus | t.Iminus == set(range(1, n))
            assert not (t.I0 & t.Iplus or t.I0 & t.Iminus or t.Iplus & t.Iminus)


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("q", [2, 5])
def test_jordan_matrix_type_and_filtration(n, q):
    for lam in partitions(n):
        A = jordan_matrix(lam, q)
        assert jordan_type_of(A, q) == lam
        h = jm_data(lam).h_weights
        # A raises the weight by exactly 2
        for i in range(n):
            for j in range(n):
                if A[i][j]:
                    assert h[i] == h[j] + 2
        ref = reference_flag(lam, q)
        for V in ref.bases:
            assert fq.contains(V, fq.apply(A, V, q), q)


def test_subregular_matrix():
    A = jordan_matrix(JordanType((2, 1)), 3)
    assert fq.rank(A, 3) == 1 and not any(any(r) for r in fq.mat_mul(A, A, 3))
    assert reference_flag(JordanType((2, 1)), 3).dims == (1, 2)
    assert reference_flag(JordanType((1, 1, 1)), 3).dims == ()
