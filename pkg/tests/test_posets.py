import itertools

import networkx as nx
import numpy as np
import pytest

from twisted_glue.nilpotent import jm_data, partitions, w_prime
from twisted_glue.posets import (
    FinitePoset,
    TwArrow,
    adjoint_report,
    chain_weights,
    emit_dot,
    hasse_edges,
    par_prime_poset,
    par_w,
    psi,
    sequence_poset,
    strict_chains,
    tw_poset,
    twtr_poset,
    verify_right_adjoint,
)
from twisted_glue.root_weyl import Parabolic, WeylPerm

B2, G2 = Parabolic.borel(2), Parabolic.whole(2)


@pytest.mark.parametrize("n", range(1, 7))
def test_tw_size(n):
    assert len(tw_poset(n)) == 3 ** (n - 1)


def test_rank_one_shape():
    tw = tw_poset(2)
    assert set(hasse_edges(tw)) == {(TwArrow(G2, B2), TwArrow(B2, B2)), (TwArrow(G2, B2), TwArrow(G2, G2))}
    assert tw.minimum() == TwArrow(G2, B2)


def test_rank_two_hasse_is_grid_graph():
    tw = tw_poset(3)
    edges = hasse_edges(tw)
    assert len(edges) == 12
    g = nx.Graph()
    g.add_edges_from((str(a), str(b)) for a, b in edges)
    assert nx.is_isomorphic(g, nx.grid_2d_graph(3, 3))


def test_hasse_small_posets():
    assert len(hasse_edges(sequence_poset("abc"))) == 2
    anti = FinitePoset(("a", "b", "c"), np.eye(3, dtype=bool))
    assert hasse_edges(anti) == []


def test_poset_axioms_checked():
    with pytest.raises(ValueError):
        FinitePoset(("a", "b"), np.ones((2, 2), dtype=bool))


def test_dot_output():
    dot = emit_dot(tw_poset(2))
    assert dot.count("[label=") == 3 and dot.count("->") == 2
    single = emit_dot(tw_poset(1))
    assert single.count("[label=") == 1 and "->" not in single
    dot3 = emit_dot(tw_poset(3))
    assert dot3.count("[label=") == 9 and dot3.count("->") == 12
    assert emit_dot(tw_poset(3)) == dot3


def count_triples(n):
    # chains J_Q <= J_P <= J_R with J_R a proper subset of I
    I = range(1, n)
    subsets = [frozenset(c) for k in range(n) for c in itertools.combinations(I, k)]
    proper = [s for s in subsets if len(s) < n - 1]
    return sum(1 for R in proper for P in subsets for Q in subsets if Q <= P <= R)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_twtr_size(n):
    data = twtr_poset(n)
    assert len(data.poset) == count_triples(n) == 4 ** (n - 1) - 3 ** (n - 1)


def test_twtr_small():
    assert len(twtr_poset(2).poset) == 1
    assert len(twtr_poset(3).poset) == 7


def test_par_w_examples():
    s1 = WeylPerm.simple_reflection(3, 1)
    assert {str(P) for P in par_w(3, (), s1)} == {"B", "P{1}"}
    assert [str(P) for P in par_w(2, (), WeylPerm.simple_reflection(2, 1))] == ["B"]
    assert len(par_w(3, (1, 2), WeylPerm.identity(3))) == len(par_prime_poset(3))
    with pytest.raises(ValueError):
        par_w(3, (1,), s1)


def test_psi_examples():
    s1 = WeylPerm.simple_reflection(3, 1)
    assert psi(Parabolic(3, [2]), s1, ()) == Parabolic.borel(3)
    assert psi(Parabolic(3, [1]), s1, ()) == Parabolic(3, [1])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_adjunction_exhaustive(n):
    for lam in partitions(n):
        J0 = jm_data(lam).J0
        for w in w_prime(n, J0).elements:
            assert verify_right_adjoint(n, J0, w)
            sub = par_w(n, J0, w)
            assert all(psi(P, w, J0) in sub for P in par_prime_poset(n))


def test_printed_psi_formula_fails_somewhere():
    failures = [
        (lam, w)
        for lam in partitions(3)
        for w in w_prime(3, jm_data(lam).J0).elements
        if not adjoint_report(3, jm_data(lam).J0, w)["J_P0 - I+"]
    ]
    assert failures


def test_strict_chain_examples():
    assert len(strict_chains(sequence_poset(["a"]))) == 1
    assert len(strict_chains(sequence_poset(["a", "b"]))) == 3
    assert len(strict_chains(tw_poset(2))) == 5
    with pytest.raises(ValueError):
        strict_chains(tw_poset(6))


@pytest.mark.parametrize("poset", [tw_poset(2), tw_poset(3), tw_poset(4), par_prime_poset(4), twtr_poset(3).poset])
def test_chain_weights_match_enumeration(poset):
    expected = {x: 0 for x in poset}
    for ch in strict_chains(poset):
        expected[ch[0]] += (-1) ** (len(ch) - 1)
    assert chain_weights(poset) == [expected[x] for x in poset.elements]
