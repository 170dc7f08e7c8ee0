import pytest
from hypothesis import given, strategies as st

from twisted_glue import fq
from twisted_glue.fq import FlagFq, PrimeFieldElem


def test_prime_checks():
    assert fq.check_prime(31) == 31
    for bad in (1, 4, 37, 0):
        with pytest.raises(ValueError):
            fq.check_prime(bad)


@given(st.integers(0, 100), st.integers(1, 100), st.sampled_from([2, 3, 5, 7, 31]))
def test_field_arithmetic(a, b, q):
    x, y = PrimeFieldElem(a % q, q), PrimeFieldElem(b % q, q)
    assert (x + y).value == (a + b) % q
    assert (x * y).value == (a * b) % q
    if y.value:
        assert ((x / y) * y).value == x.value


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [2, 3, 5])
def test_subspace_enumeration_matches_gaussian_binomial(n, q):
    for d in range(n + 1):
        spaces = list(fq.iter_subspaces(n, d, q))
        assert len(spaces) == fq.gaussian_binomial(n, d, q)
        assert len(set(spaces)) == len(spaces)
        assert all(fq.rref(s, q) == s for s in spaces)


def test_subspaces_between():
    q = 3
    lower = fq.standard_span(4, 1)
    upper = fq.standard_span(4, 3)
    found = list(fq.iter_subspaces_between(lower, upper, 2, q))
    # lines in the 2-dimensional quotient
    assert len(found) == fq.gaussian_binomial(2, 1, q)
    assert all(fq.contains(W, lower, q) and fq.contains(upper, W, q) for W in found)


def test_kernel_image_preimage():
    q = 5
    A = ((0, 1, 0), (0, 0, 1), (0, 0, 0))
    assert fq.kernel(A, q) == fq.standard_span(3, 1)
    assert fq.image(A, q) == fq.standard_span(3, 2)
    assert fq.preimage(A, fq.standard_span(3, 1), q) == fq.standard_span(3, 2)
    assert fq.preimage(A, (), q) == fq.standard_span(3, 1)


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_full_flag_count(n, q):
    from twisted_glue.flags import all_flags

    dims = tuple(range(1, n))
    assert sum(1 for _ in all_flags(n, q, dims)) == fq.gaussian_multinomial([1] * n, q)


def test_flag_validation_and_coarsening():
    q = 3
    f = FlagFq.from_subspaces(q, 3, [((1, 1, 0),), fq.standard_span(3, 2)])
    assert f.dims == (1, 2)
    assert f.coarsen((2,)).bases == (fq.standard_span(3, 2),)
    with pytest.raises(ValueError):
        FlagFq.from_subspaces(q, 3, [((0, 0, 1),), fq.standard_span(3, 2)])
    full = FlagFq.from_subspaces(q, 3, [fq.standard_span(3, 2)]).complete()
    assert full.bases == (fq.standard_span(3, 1), fq.standard_span(3, 2))


def test_partition_from_ranks():
    assert fq.partition_from_ranks([3, 1, 0]) == (2, 1)
    assert fq.partition_from_ranks([4, 2, 0]) == (2, 2)
    assert fq.partition_from_ranks([3, 0]) == (1, 1, 1)
