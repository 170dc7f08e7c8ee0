import pytest

from twisted_glue import fq
from twisted_glue.flags import (
    PARABOLIC,
    UNIPOTENT,
    BudgetExceeded,
    all_flags,
    count_polynomial,
    count_springer,
    count_springer_unpruned,
    flag_type_of,
    iter_completions,
    relpos,
    satisfies,
    springer_flags,
    stratum_counts,
    _incidence_permutation,
)
from twisted_glue.fq import FlagFq
from twisted_glue.nilpotent import JordanType, jm_data, jordan_matrix, partitions, reference_flag, w_prime
from twisted_glue.polynomial import Q
from twisted_glue.posets import tw_poset
from twisted_glue.root_weyl import Parabolic, WeylPerm, all_parabolics, min_double_coset_rep

SUB = JordanType((2, 1))
B3, P1, P2, G3 = Parabolic(3, ()), Parabolic(3, [1]), Parabolic(3, [2]), Parabolic.whole(3)


def test_flag_type_of():
    assert flag_type_of(Parabolic.borel(4), 4) == (1, 2, 3)
    assert flag_type_of(Parabolic.whole(4), 4) == ()
    assert flag_type_of(P1, 3) == (2,)


def test_count_examples():
    for n in (2, 3, 4):
        for lam in partitions(n):
            if not lam.is_zero:
                G, B = Parabolic.whole(n), Parabolic.borel(n)
                assert count_springer(G, B, lam, 3, UNIPOTENT) == 0
        regular = JordanType((n,))
        assert count_springer(Parabolic.borel(n), Parabolic.borel(n), regular, 5, UNIPOTENT) == 1
    assert [count_springer(B3, B3, SUB, q, UNIPOTENT) for q in (2, 3, 5)] == [5, 7, 11]
    assert count_springer(P1, B3, SUB, 3, UNIPOTENT) == 4


def test_subregular_cell_polynomials():
    primes = (2, 3, 5, 7)
    expected = {
        (G3, G3): 0, (G3, P1): 0, (G3, P2): 0, (G3, B3): 0,
        (P1, P1): 1, (P2, P2): 1, (P1, B3): Q + 1, (P2, B3): Q + 1, (B3, B3): 2 * Q + 1,
    }
    for (P, Qp), poly in expected.items():
        assert count_polynomial(P, Qp, SUB, primes, UNIPOTENT) == poly


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("q", [2, 3])
def test_pruned_matches_unpruned(n, q):
    for lam in partitions(n):
        for cell in tw_poset(n):
            oracle = count_springer_unpruned(cell.P, cell.Q, lam, q, UNIPOTENT)
            assert count_springer(cell.P, cell.Q, lam, q, UNIPOTENT, method="dfs") == oracle
            assert count_springer(cell.P, cell.Q, lam, q, UNIPOTENT) == oracle
        for R in all_parabolics(n):
            oracle = count_springer_unpruned(R, R, lam, q, PARABOLIC)
            assert count_springer(R, R, lam, q, PARABOLIC, method="dfs") == oracle
            assert count_springer(R, R, lam, q, PARABOLIC) == oracle


def test_grouped_matches_dfs_rank_three():
    for lam in partitions(4):
        for cell in tw_poset(4):
            assert count_springer(cell.P, cell.Q, lam, 2, UNIPOTENT) == count_springer(
                cell.P, cell.Q, lam, 2, UNIPOTENT, method="dfs"
            )


def test_budget_is_enforced():
    A = jordan_matrix(JordanType((1, 1, 1)), 3)
    with pytest.raises(BudgetExceeded):
        list(springer_flags(A, 3, (1, 2), (1, 2), PARABOLIC, budget=10))


def test_invalid_pairs():
    with pytest.raises(ValueError):
        count_springer(B3, P1, SUB, 2, UNIPOTENT)
    with pytest.raises(ValueError):
        count_springer(P1, B3, SUB, 2, PARABOLIC)
    with pytest.raises(ValueError):
        count_springer(B3, B3, SUB, 4, UNIPOTENT)


@pytest.mark.parametrize("q", [2, 3])
def test_coarsening_along_tw_morphisms_lands_in_target(q):
    tw = tw_poset(3)
    for lam in partitions(3):
        A = jordan_matrix(lam, q)
        for x in tw:
            points = list(springer_flags(A, q, flag_type_of(x.Q, 3), flag_type_of(x.P, 3), UNIPOTENT))
            for y in tw:
                if x != y and tw.le(x, y):
                    target_q, target_p = flag_type_of(y.Q, 3), flag_type_of(y.P, 3)
                    for f in points:
                        assert satisfies(f.coarsen(target_q), A, target_p, UNIPOTENT)


def test_relpos_examples():
    q = 3
    ref = FlagFq.from_subspaces(q, 2, [fq.standard_span(2, 1)])
    assert relpos(ref, ref) == WeylPerm.identity(2)
    f = FlagFq.from_subspaces(q, 2, [((1, 1),)])
    assert relpos(f, ref) == WeylPerm.simple_reflection(2, 1)


@pytest.mark.parametrize("lam", partitions(3), ids=str)
def test_relpos_is_min_rep_and_independent_of_completion(lam):
    q = 2
    ref = reference_flag(lam, q)
    J_ref = jm_data(lam).J0
    for P in all_parabolics(3):
        for f in all_flags(3, q, flag_type_of(P, 3)):
            label = relpos(f, ref)
            assert not (label.left_descents() & P.J) and not (label.right_descents() & J_ref)
            for full in iter_completions(f):
                u = _incidence_permutation(full, ref.complete())
                assert min_double_coset_rep(P.J, u, J_ref) == label


def test_subregular_strata():
    # points of the parabolic fibers split by label as 1 + q + q over the two P^1's
    s1, s2 = WeylPerm.simple_reflection(3, 1), WeylPerm.simple_reflection(3, 2)
    e = WeylPerm.identity(3)
    one = Q**0
    expected = {B3: {e: one, s1: Q, s2: Q}, P1: {e: one, s2: Q}, P2: {e: one, s1: Q}}
    for P, table in expected.items():
        for q in (2, 3, 5):
            sc = stratum_counts(P, SUB, q)
            assert {w: c for w, c in sc.count_eq.items() if c} == {w: p(q) for w, p in table.items()}


@pytest.mark.parametrize("n", [2, 3])
def test_strata_partition_fiber(n):
    for lam in partitions(n):
        wp = w_prime(n, jm_data(lam).J0)
        for P in all_parabolics(n):
            sc = stratum_counts(P, lam, 3)
            assert sum(sc.count_eq.values()) == sc.total == count_springer(P, P, lam, 3, PARABOLIC)
            assert sc.count_leq[wp.w0_prime] == sc.total
            if lam.is_regular and not P.J:
                assert sc.count_eq == {w: int(w.is_identity()) for w in wp.elements}
            if lam.is_zero:
                assert list(sc.count_eq) == [WeylPerm.identity(n)]
