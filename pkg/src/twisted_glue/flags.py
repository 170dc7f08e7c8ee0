"""Springer fibers over F_q: enumeration, point counts, relative position, strata.

A flag of type Q is a chain of subspaces whose dimensions are the simple
indices not in J_Q. Two membership conditions are used, both phrased on the
coarsening of the flag to P-level steps 0 = U_0 < U_1 < ... < U_m = V:

* unipotent: A U_k <= U_{k-1}, i.e. A lies in the nilradical of P;
* parabolic: A U_k <= U_k, i.e. A lies in the parabolic P (here Q = P).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from . import fq
from .fq import FlagFq, Matrix, Subspace
from .nilpotent import JordanType, in_w_prime, jm_data, jordan_matrix, reference_flag, w_prime
from .polynomial import CountPolynomial, interpolate_count_polynomial
from .root_weyl import Parabolic, WeylPerm, bruhat_leq, min_double_coset_rep

__all__ = [
    "PARABOLIC", "UNIPOTENT", "DEFAULT_BUDGET", "BudgetExceeded", "ConventionError",
    "SpringerCondition", "flag_type_of", "springer_flags", "all_flags", "satisfies",
    "count_springer", "count_springer_unpruned", "count_polynomial", "interpolate_count_polynomial",
    "relpos", "stratum_label", "StrataCounts", "stratum_counts",
]

PARABOLIC = "parabolic"
UNIPOTENT = "unipotent"
KINDS = (PARABOLIC, UNIPOTENT)
DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """The enumeration visited more partial chains than allowed."""


class ConventionError(ArithmeticError):
    """A computed stratum label fell outside W'."""


@dataclass(frozen=True)
class SpringerCondition:
    kind: str
    P_type: Parabolic

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def flag_type_of(J: Parabolic | Sequence[int], n: int) -> tuple[int, ...]:
    """Dimensions of the flag stabilized by the standard parabolic with simple set J."""
    J = frozenset(J)
    return tuple(i for i in range(1, n) if i not in J)


class _Budget:
    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.visited = 0

    def tick(self) -> None:
        self.visited += 1
        if self.visited > self.limit:
            raise BudgetExceeded(f"visited more than {self.limit} partial chains")


def _check_pair(P: Parabolic, Q: Parabolic, lam: JordanType, kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if not Q.J <= P.J:
        raise ValueError(f"need Q <= P, got P={P}, Q={Q}")
    if P.n != lam.n or Q.n != lam.n:
        raise ValueError("parabolics and partition disagree on n")
    if kind == PARABOLIC and P != Q:
        raise ValueError("the parabolic condition is used with Q = P")


def satisfies(flag: FlagFq, A: Matrix, p_dims: Sequence[int], kind: str) -> bool:
    """Check the membership condition on the full flag at once."""
    q = flag.q
    levels = [()] + [flag.step(d) for d in p_dims] + [fq.standard_span(flag.n, flag.n)]
    for k in range(1, len(levels)):
        target = levels[k - 1] if kind == UNIPOTENT else levels[k]
        if not fq.contains(target, fq.apply(A, levels[k], q), q):
            return False
    return True


def springer_flags(
    A: Matrix, q: int, q_dims: Sequence[int], p_dims: Sequence[int], kind: str, budget: int = DEFAULT_BUDGET
) -> Iterator[FlagFq]:
    """Flags of type q_dims satisfying the condition, by pruned depth-first search.

    Each step is chosen between the previous step and the largest subspace
    still compatible with the condition, so violating partial chains are
    never extended.
    """
    n = len(A)
    q_dims = tuple(q_dims)
    p_set = set(p_dims)
    if not p_set <= set(q_dims):
        raise ValueError("P-level dims must be among the flag dims")
    whole = fq.standard_span(n, n)
    im_A = fq.image(A, q)
    last_p = max(p_dims) if p_dims else None
    counter = _Budget(budget)

    def grow(chain: list[Subspace], last_p_space: Subspace) -> Iterator[FlagFq]:
        t = len(chain)
        if t == len(q_dims):
            if kind == UNIPOTENT and not fq.contains(last_p_space, im_A, q):
                return
            yield FlagFq(q, n, q_dims, tuple(chain))
            return
        d = q_dims[t]
        lower = chain[-1] if chain else ()
        if kind == UNIPOTENT:
            # every step up to the next P-level lies in A^{-1}(last P-level step)
            upper = fq.preimage(A, last_p_space, q)
            if d == last_p:
                lower = fq.span_sum(lower, im_A, q)
                if len(lower) > d:
                    return
            if not fq.contains(upper, lower, q):
                return
            candidates = fq.iter_subspaces_between(lower, upper, d, q)
        else:
            candidates = fq.iter_subspaces_between(lower, whole, d, q)
        for W in candidates:
            counter.tick()
            if kind == PARABOLIC and not fq.contains(W, fq.apply(A, W, q), q):
                continue
            chain.append(W)
            yield from grow(chain, W if d in p_set else last_p_space)
            chain.pop()

    if kind == UNIPOTENT and not p_dims and any(any(r) for r in A):
        return
    yield from grow([], ())


def all_flags(n: int, q: int, dims: Sequence[int], budget: int = DEFAULT_BUDGET) -> Iterator[FlagFq]:
    """Every flag of the given type, with no condition imposed."""
    whole = fq.standard_span(n, n)
    counter = _Budget(budget)

    def grow(chain: list[Subspace]) -> Iterator[FlagFq]:
        if len(chain) == len(dims):
            yield FlagFq(q, n, tuple(dims), tuple(chain))
            return
        lower = chain[-1] if chain else ()
        for W in fq.iter_subspaces_between(lower, whole, dims[len(chain)], q):
            counter.tick()
            chain.append(W)
            yield from grow(chain)
            chain.pop()

    yield from grow([])


def count_springer_unpruned(
    P: Parabolic, Q: Parabolic, lam: JordanType, q: int, kind: str, budget: int = DEFAULT_BUDGET
) -> int:
    """Oracle: enumerate every flag of type Q and test the condition afterwards."""
    _check_pair(P, Q, lam, kind)
    A = jordan_matrix(lam, q)
    p_dims = flag_type_of(P, lam.n)
    return sum(1 for f in all_flags(lam.n, q, flag_type_of(Q, lam.n), budget) if satisfies(f, A, p_dims, kind))


# -- counting by recursion on the first P-level step -------------------------
#
# Once the first P-level step U is fixed, the remaining condition only sees
# the map induced by A on V/U, so the number of completions depends on U only
# through that map's Jordan type. Grouping the choices of U by Jordan type
# turns the search into a short recursion over partitions.


def _quotient_type(A: Matrix, U: Subspace, q: int) -> tuple[int, ...]:
    return fq.partition_from_ranks(fq.quotient_ranks(A, U, q))


@lru_cache(maxsize=None)
def _kernel_histogram(parts: tuple[int, ...], d: int, q: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    # subspaces U <= ker A of dim d, by Jordan type of A on V/U
    lam = JordanType(parts)
    n = lam.n
    if lam.is_zero:
        return (((1,) * (n - d), fq.gaussian_binomial(n, d, q)),) if d < n else (((), 1),)
    A = jordan_matrix(lam, q)
    hist: Counter = Counter()
    for U in fq.iter_subspaces_between((), fq.kernel(A, q), d, q):
        hist[_quotient_type(A, U, q)] += 1
    return tuple(sorted(hist.items()))


@lru_cache(maxsize=None)
def _stable_histogram(parts: tuple[int, ...], d: int, q: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    # A-stable subspaces U of dim d, by Jordan type of A on V/U
    lam = JordanType(parts)
    n = lam.n
    if lam.is_zero:
        return (((1,) * (n - d), fq.gaussian_binomial(n, d, q)),) if d < n else (((), 1),)
    A = jordan_matrix(lam, q)
    hist: Counter = Counter()
    for U in fq.iter_subspaces(n, d, q):
        if fq.contains(U, fq.apply(A, U, q), q):
            hist[_quotient_type(A, U, q)] += 1
    return tuple(sorted(hist.items()))


@lru_cache(maxsize=None)
def _count_unipotent(parts: tuple[int, ...], blocks: tuple[tuple[int, ...], ...], q: int) -> int:
    # blocks: successive P-level blocks, each split into its Q-level step sizes
    first = blocks[0]
    free = fq.gaussian_multinomial(first, q)
    if len(blocks) == 1:
        return free if all(p == 1 for p in parts) else 0
    total = 0
    for mu, mult in _kernel_histogram(parts, sum(first), q):
        total += mult * _count_unipotent(mu, blocks[1:], q)
    return free * total


@lru_cache(maxsize=None)
def _count_parabolic(parts: tuple[int, ...], steps: tuple[int, ...], q: int) -> int:
    if len(steps) == 1:
        return 1
    total = 0
    for mu, mult in _stable_histogram(parts, steps[0], q):
        total += mult * _count_parabolic(mu, steps[1:], q)
    return total


def _blocks(n: int, q_dims: Sequence[int], p_dims: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    cuts = [0] + list(p_dims) + [n]
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        inner = [lo] + [d for d in q_dims if lo < d < hi] + [hi]
        out.append(tuple(b - a for a, b in zip(inner, inner[1:])))
    return tuple(out)


def count_springer(
    P: Parabolic,
    Q: Parabolic,
    lam: JordanType,
    q: int,
    kind: str,
    budget: int = DEFAULT_BUDGET,
    method: str = "grouped",
) -> int:
    """Number of F_q-points of the Springer fiber of lam for the pair (P, Q).

    ``method="dfs"`` walks the pruned search tree flag by flag;
    ``method="grouped"`` performs the same search but merges subtrees whose
    remaining problem has the same Jordan type. Both give identical counts.
    """
    fq.check_prime(q)
    _check_pair(P, Q, lam, kind)
    n = lam.n
    q_dims, p_dims = flag_type_of(Q, n), flag_type_of(P, n)
    if method == "dfs":
        A = jordan_matrix(lam, q)
        return sum(1 for _ in springer_flags(A, q, q_dims, p_dims, kind, budget))
    if method != "grouped":
        raise ValueError(f"unknown method {method!r}")
    if kind == UNIPOTENT:
        return _count_unipotent(lam.parts, _blocks(n, q_dims, p_dims), q)
    steps = tuple(b - a for a, b in zip([0, *p_dims], [*p_dims, n]))
    return _count_parabolic(lam.parts, steps, q)


def count_polynomial(
    P: Parabolic, Q: Parabolic, lam: JordanType, primes: Sequence[int], kind: str, **kwargs
) -> CountPolynomial:
    samples = [(p, count_springer(P, Q, lam, p, kind, **kwargs)) for p in primes]
    return interpolate_count_polynomial(samples, lam.n * (lam.n - 1) // 2)


# -- relative position -------------------------------------------------------


def _incidence_permutation(f: FlagFq, ref: FlagFq) -> WeylPerm:
    # d[i][j] = dim(f_i cap ref_j); the second difference of d is a
    # permutation matrix M, read with the column convention M[u(j)][j] = 1
    n, q = f.n, f.q
    fc = f.full_chain()
    rc = ref.full_chain()
    d = [[len(fc[i]) + len(rc[j]) - len(fq.span_sum(fc[i], rc[j], q)) for j in range(n + 1)] for i in range(n + 1)]
    images = [0] * n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1] == 1:
                images[j - 1] = i
    return WeylPerm(tuple(images))


def relpos(f: FlagFq, ref: FlagFq) -> WeylPerm:
    """Relative position of f with respect to ref, as a minimal double coset representative.

    Both flags are completed to full flags, the incidence permutation u is
    read off, and the result is the shortest element of W_{J_f} u W_{J_ref}.
    """
    if (f.n, f.q) != (ref.n, ref.q):
        raise ValueError("flags live in different spaces")
    u = _incidence_permutation(f.complete(), ref.complete())
    J_f = frozenset(range(1, f.n)) - set(f.dims)
    J_ref = frozenset(range(1, f.n)) - set(ref.dims)
    return min_double_coset_rep(J_f, u, J_ref)


def stratum_label(f: FlagFq, ref: FlagFq) -> WeylPerm:
    """The W' label of f: the shortest element of W_{J0} w W_{J_f} where f lies in P0 w P."""
    return relpos(f, ref).inverse()


@dataclass(frozen=True)
class StrataCounts:
    P: Parabolic
    q: int
    count_eq: dict[WeylPerm, int]
    count_leq: dict[WeylPerm, int]
    count_lt: dict[WeylPerm, int]
    total: int


def stratum_counts(
    P: Parabolic, lam: JordanType, q: int, kind: str = PARABOLIC, budget: int = DEFAULT_BUDGET
) -> StrataCounts:
    """Split the Springer fiber of P by relative position to the reference flag."""
    fq.check_prime(q)
    _check_pair(P, P, lam, kind)
    n = lam.n
    data = jm_data(lam)
    wp = w_prime(n, data.J0).elements
    A = jordan_matrix(lam, q)
    ref = reference_flag(lam, q)
    dims = flag_type_of(P, n)
    eq: dict[WeylPerm, int] = {w: 0 for w in wp}
    total = 0
    for f in springer_flags(A, q, dims, dims, kind, budget):
        label = stratum_label(f, ref)
        if not in_w_prime(label, data.J0):
            raise ConventionError(f"label {label} of a point of Spr_{P} is not in W'")
        eq[label] += 1
        total += 1
    leq = {w: sum(c for u, c in eq.items() if bruhat_leq(u, w)) for w in wp}
    lt = {w: leq[w] - eq[w] for w in wp}
    return StrataCounts(P, q, eq, leq, lt, total)


def coarsening_lands(flag: FlagFq, A: Matrix, target_q_dims: Sequence[int], target_p_dims: Sequence[int]) -> bool:
    """Whether forgetting steps of flag gives a point of the target unipotent fiber."""
    return satisfies(flag.coarsen(target_q_dims), A, target_p_dims, UNIPOTENT)


def _refinements(lo: Subspace, hi: Subspace, q: int) -> Iterator[list[Subspace]]:
    if len(hi) - len(lo) <= 1:
        yield []
        return
    for W in fq.iter_subspaces_between(lo, hi, len(lo) + 1, q):
        for rest in _refinements(W, hi, q):
            yield [W] + rest


def iter_completions(f: FlagFq) -> Iterator[FlagFq]:
    """Every full flag refining f (small n only)."""
    chain = f.full_chain()
    segments = [list(_refinements(lo, hi, f.q)) for lo, hi in zip(chain, chain[1:])]
    for choice in itertools.product(*segments):
        spaces: list[Subspace] = []
        for k, inner in enumerate(choice):
            spaces.extend(inner)
            if k + 1 < len(chain) - 1:
                spaces.append(chain[k + 1])
        yield FlagFq.from_subspaces(f.q, f.n, spaces)
