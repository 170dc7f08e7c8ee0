import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twisted_glue.glue import (
    WORKERS_ENV,
    PosetDiagram,
    PreconditionError,
    blowup_demo,
    excision_check,
    glued_par_check,
    glued_springer_check,
    leq_w_checks,
    levi_fiber_check,
    mixed_check,
    nilcone_check,
    strata_tables,
    virtual_count,
)
from twisted_glue.nilpotent import JordanType, jm_data, partitions, w_prime
from twisted_glue.polynomial import Q
from twisted_glue.posets import FinitePoset, TwArrow, par_prime_poset, sequence_poset, tw_poset
from twisted_glue.root_weyl import Parabolic, WeylPerm

PRIMES = (2, 3, 5, 7, 11, 13, 17)
SUB = JordanType((2, 1))


def pushout_poset():
    # c < a, c < b
    leq = np.eye(3, dtype=bool)
    leq[2, 0] = leq[2, 1] = True
    return FinitePoset(("a", "b", "c"), leq)


def test_virtual_count_examples():
    assert virtual_count(PosetDiagram(sequence_poset(["x"]), {"x": 1})) == 1
    A, B, C = 7, 5, 3
    assert virtual_count(PosetDiagram(pushout_poset(), {"a": A, "b": B, "c": C})) == A + B - C
    B2, G2 = Parabolic.borel(2), Parabolic.whole(2)
    values = {TwArrow(B2, B2): Q + 1, TwArrow(G2, B2): Q + 1, TwArrow(G2, G2): Q**0}
    assert virtual_count(PosetDiagram(tw_poset(2), values)) == 1


def test_diagram_needs_every_value():
    with pytest.raises(ValueError):
        PosetDiagram(pushout_poset(), {"a": 1})


def disjoint_union(p1, p2):
    n1, n2 = len(p1), len(p2)
    leq = np.zeros((n1 + n2, n1 + n2), dtype=bool)
    leq[:n1, :n1] = p1.leq
    leq[n1:, n1:] = p2.leq
    els = tuple(("L", x) for x in p1.elements) + tuple(("R", x) for x in p2.elements)
    return FinitePoset(els, leq)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=9, max_size=9), st.lists(st.integers(-50, 50), min_size=3, max_size=3))
def test_virtual_count_additive(left_vals, right_vals):
    p1, p2 = tw_poset(3), pushout_poset()
    d1 = dict(zip(p1.elements, left_vals))
    d2 = dict(zip(p2.elements, right_vals))
    union = disjoint_union(p1, p2)
    merged = {("L", k): v for k, v in d1.items()} | {("R", k): v for k, v in d2.items()}
    total = virtual_count(PosetDiagram(union, merged))
    assert total == virtual_count(PosetDiagram(p1, d1)) + virtual_count(PosetDiagram(p2, d2))


@pytest.mark.parametrize(
    "poset", [tw_poset(2), tw_poset(3), tw_poset(4), tw_poset(5), par_prime_poset(3), par_prime_poset(4)]
)
def test_constant_point_diagram_with_minimum(poset):
    assert poset.minimum() is not None
    assert virtual_count(PosetDiagram(poset, {x: 1 for x in poset})) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_glued_springer_is_one(n):
    for lam in partitions(n):
        assert glued_springer_check(n, lam, PRIMES[: n * (n - 1) // 2 + 2]).polynomial == 1


def test_glued_springer_subregular_cells():
    r = glued_springer_check(3, SUB, PRIMES)
    assert r.holds
    assert r.cells["[B>=B]"] == 2 * Q + 1 and r.cells["[P{1}>=B]"] == Q + 1 and r.cells["[G>=G]"] == 0


def test_glued_springer_input_checks():
    with pytest.raises(ValueError):
        glued_springer_check(3, JordanType((2,)), PRIMES)
    with pytest.raises(ValueError):
        glued_springer_check(3, SUB, (2, 3))
    with pytest.raises(ValueError):
        glued_springer_check(3, SUB, (2, 3, 4, 5))


def test_glued_par_examples():
    r = glued_par_check(2, JordanType((2,)), PRIMES)
    assert r.holds and r.cells == {"B": 1}
    r = glued_par_check(3, SUB, PRIMES)
    assert r.holds and r.cells["B"] == 2 * Q + 1
    with pytest.raises(PreconditionError):
        glued_par_check(2, JordanType((1, 1)), PRIMES)
    assert glued_par_check(2, JordanType((1, 1)), PRIMES, allow_zero=True).polynomial == Q + 1


def test_mixed_nonzero():
    for lam in (JordanType((2,)), JordanType((3,)), SUB):
        assert mixed_check(lam.n, lam, PRIMES).equal


def test_mixed_zero_nilpotent_differs():
    # the Tw gluing uses the cells over G, which TwTr' leaves out
    r = mixed_check(2, JordanType((1, 1)), PRIMES)
    assert (r.tw_total, r.twtr_total) == (Q**0, Q + 1)
    r = mixed_check(3, JordanType((1, 1, 1)), PRIMES)
    assert r.tw_total == 1 and r.twtr_total == 1 - Q**3


@pytest.mark.parametrize("lam", [JordanType((2,)), JordanType((3,)), SUB], ids=str)
def test_leq_w_all_one(lam):
    reports = leq_w_checks(lam.n, lam, PRIMES)
    assert all(r.global_holds and r.bookkeeping_holds for r in reports.values())
    e = WeylPerm.identity(lam.n)
    assert reports[e].leq == 1 and reports[e].lt == 0
    w0 = w_prime(lam.n, jm_data(lam).J0).w0_prime
    assert reports[w0].leq == glued_par_check(lam.n, lam, PRIMES).polynomial


def test_leq_w_requires_nonzero():
    with pytest.raises(PreconditionError):
        leq_w_checks(2, JordanType((1, 1)), PRIMES)


@pytest.mark.parametrize("lam", [JordanType((3,)), SUB], ids=str)
def test_excision(lam):
    wp = w_prime(3, jm_data(lam).J0)
    tables = strata_tables(3, lam, (2, 3, 5))
    inner = [w for w in wp.elements if not w.is_identity() and w != wp.w0_prime]
    assert inner
    for w in inner:
        rep = excision_check(3, lam, w, (2, 3, 5), tables=tables)
        assert rep.holds
        assert {row[1] for row in rep.rows} == {"B", "P{1}", "P{2}"}


def test_excision_vacuous_for_rank_one():
    for lam in partitions(2):
        wp = w_prime(2, jm_data(lam).J0)
        assert [w for w in wp.elements if not w.is_identity() and w != wp.w0_prime] == []
    with pytest.raises(PreconditionError):
        excision_check(3, SUB, WeylPerm.identity(3), (2,))


def test_levi_examples():
    for R in (Parabolic(3, [1]), Parabolic(3, [2])):
        assert levi_fiber_check(3, SUB, R, 2).holds
    rep = levi_fiber_check(2, JordanType((1, 1)), Parabolic.borel(2), 2)
    assert rep.holds and len(rep.rows) == 3 and all(r[2] == r[3] == 1 for r in rep.rows)
    rep = levi_fiber_check(3, JordanType((3,)), Parabolic.borel(3), 3)
    assert rep.holds and all(r[3] == 1 for r in rep.rows)
    with pytest.raises(PreconditionError):
        levi_fiber_check(3, SUB, Parabolic.whole(3), 2)


def test_nilcone():
    assert nilcone_check(1).total == 1
    r = nilcone_check(2)
    assert r.total == Q**2
    assert r.cells["[G>=B]"] == Q + 1 and r.cells["[B>=B]"] == Q**2 + Q
    for n in (3, 4, 5):
        assert nilcone_check(n, PRIMES).holds


def test_blowup():
    assert blowup_demo(1).total == Q
    assert blowup_demo(2).total == Q**2
    assert all(blowup_demo(m, PRIMES).holds for m in range(1, 9))
    with pytest.raises(ValueError):
        blowup_demo(9)


def test_worker_pool_gives_same_result(monkeypatch):
    serial = glued_springer_check(3, SUB, PRIMES)
    monkeypatch.setenv(WORKERS_ENV, "3")
    parallel = glued_springer_check(3, SUB, PRIMES)
    assert parallel.polynomial == serial.polynomial and parallel.per_prime == serial.per_prime
