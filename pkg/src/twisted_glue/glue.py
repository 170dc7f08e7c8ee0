"""Virtual point counts of glued diagrams and the count-level gluing checks.

For a covariant diagram F on a finite poset, the virtual count is

    sum over strict chains x0 < x1 < ... < xk of (-1)^k #F(x0),

the Euler characteristic shadow of the homotopy colimit computed on its
simplicial replacement. A contractible gluing of affinely paved pieces has
virtual count 1.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Generic, Mapping, Sequence, TypeVar

from . import fq
from .flags import (
    DEFAULT_BUDGET,
    PARABOLIC,
    UNIPOTENT,
    StrataCounts,
    count_springer,
    flag_type_of,
    springer_flags,
    stratum_counts,
)
from .nilpotent import JordanType, jm_data, jordan_matrix, w_prime
from .polynomial import Q, CountPolynomial, interpolate_count_polynomial
from .posets import (
    MAX_CHAIN_POSET,
    FinitePoset,
    TwArrow,
    chain_weights,
    par_prime_poset,
    par_w,
    psi,
    tw_poset,
    tw_r_poset,
    twtr_poset,
)
from .root_weyl import Parabolic, WeylPerm

V = TypeVar("V")

WORKERS_ENV = "TWISTED_GLUE_WORKERS"


class PreconditionError(ValueError):
    """The check is not defined for this input (e.g. A = 0 where A != 0 is required)."""


@dataclass(frozen=True)
class PosetDiagram(Generic[V]):
    index: FinitePoset
    values: Mapping[object, V]

    def __post_init__(self) -> None:
        missing = [x for x in self.index if x not in self.values]
        if missing:
            raise ValueError(f"diagram has no value at {missing[0]}")


def virtual_count(d: PosetDiagram, max_size: int = MAX_CHAIN_POSET):
    """Alternating chain sum of the values at chain minima.

    Works for any value type with + and integer scaling (ints, CountPolynomial).
    """
    weights = chain_weights(d.index, max_size)
    total = 0
    for x, g in zip(d.index.elements, weights):
        if g:
            total = total + d.values[x] * g
    return total


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def per_prime(func: Callable[[int], V], primes: Sequence[int]) -> dict[int, V]:
    """Evaluate func at each prime, possibly in a process pool; merged by key."""
    primes = list(primes)
    workers = min(_workers(), len(primes))
    if workers <= 1:
        return {p: func(p) for p in primes}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(func, primes))
    return dict(zip(primes, results))


def degree_bound(n: int) -> int:
    return n * (n - 1) // 2


def _check_primes(n: int, primes: Sequence[int]) -> list[int]:
    primes = [fq.check_prime(p) for p in primes]
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    if len(primes) < degree_bound(n) + 1:
        raise ValueError(f"need at least {degree_bound(n) + 1} primes for n={n}, got {len(primes)}")
    return sorted(primes)


@dataclass
class GlueResult:
    name: str
    polynomial: CountPolynomial
    per_prime: dict[int, int]
    cells: dict[str, CountPolynomial] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.polynomial == 1


# -- glued unipotent Springer fibers over Tw ---------------------------------


def tw_unipotent_diagram(lam: JordanType, q: int, budget: int = DEFAULT_BUDGET) -> PosetDiagram[int]:
    tw = tw_poset(lam.n)
    return PosetDiagram(tw, {c: count_springer(c.P, c.Q, lam, q, UNIPOTENT, budget) for c in tw})


def glued_unipotent_count(lam: JordanType, q: int, budget: int = DEFAULT_BUDGET) -> int:
    return virtual_count(tw_unipotent_diagram(lam, q, budget))


class _GluedAtPrime:
    # picklable per-prime task for the process pool
    def __init__(self, lam: JordanType, budget: int) -> None:
        self.lam, self.budget = lam, budget

    def __call__(self, q: int) -> dict[TwArrow, int]:
        return dict(tw_unipotent_diagram(self.lam, q, self.budget).values)


def glued_springer_check(
    n: int, lam: JordanType, primes: Sequence[int], budget: int = DEFAULT_BUDGET
) -> GlueResult:
    """Virtual count over Tw of the unipotent Springer fibers, as a polynomial in q."""
    if lam.n != n:
        raise ValueError(f"partition {lam} is not a partition of {n}")
    primes = _check_primes(n, primes)
    tw = tw_poset(n)
    tables = per_prime(_GluedAtPrime(lam, budget), primes)
    per = {p: virtual_count(PosetDiagram(tw, tables[p])) for p in primes}
    cells = {
        str(c): interpolate_count_polynomial([(p, tables[p][c]) for p in primes], degree_bound(n)) for c in tw
    }
    poly = interpolate_count_polynomial(sorted(per.items()), degree_bound(n))
    return GlueResult(f"glued{lam}", poly, per, cells)


# -- gluing over Par' ---------------------------------------------------------


def _require_nonzero(lam: JordanType) -> None:
    if lam.is_zero:
        raise PreconditionError("requires A != 0")


def glued_par_check(
    n: int, lam: JordanType, primes: Sequence[int], budget: int = DEFAULT_BUDGET, allow_zero: bool = False
) -> GlueResult:
    """Virtual count over Par' of the parabolic Springer fibers Spr_R.

    For A = 0 the result is #G/B rather than 1; pass ``allow_zero`` to see it.
    """
    if lam.n != n:
        raise ValueError(f"partition {lam} is not a partition of {n}")
    if not allow_zero:
        _require_nonzero(lam)
    primes = _check_primes(n, primes)
    par = par_prime_poset(n)
    tables = {p: {R: count_springer(R, R, lam, p, PARABOLIC, budget) for R in par} for p in primes}
    per = {p: virtual_count(PosetDiagram(par, tables[p])) for p in primes}
    cells = {
        str(R): interpolate_count_polynomial([(p, tables[p][R]) for p in primes], degree_bound(n)) for R in par
    }
    return GlueResult(
        f"glued-par{lam}", interpolate_count_polynomial(sorted(per.items()), degree_bound(n)), per, cells
    )


# -- mixed comparison ---------------------------------------------------------


@dataclass
class MixedResult:
    tw_total: CountPolynomial
    twtr_total: CountPolynomial

    @property
    def equal(self) -> bool:
        return self.tw_total == self.twtr_total


def mixed_check(n: int, lam: JordanType, primes: Sequence[int], budget: int = DEFAULT_BUDGET) -> MixedResult:
    """Compare the TwTr' gluing of Spr_{P>=Q,unip} (pulled back along phi1) with the Tw gluing."""
    primes = _check_primes(n, primes)
    data = twtr_poset(n)
    tw = tw_poset(n)
    tw_vals, twtr_vals = [], []
    for p in primes:
        cell = {c: count_springer(c.P, c.Q, lam, p, UNIPOTENT, budget) for c in tw}
        tw_vals.append((p, virtual_count(PosetDiagram(tw, cell))))
        pulled = {t: cell[data.phi1[t]] for t in data.poset}
        twtr_vals.append((p, virtual_count(PosetDiagram(data.poset, pulled), max_size=max(MAX_CHAIN_POSET, len(data.poset)))))
    return MixedResult(
        interpolate_count_polynomial(tw_vals, degree_bound(n)),
        interpolate_count_polynomial(twtr_vals, degree_bound(n)),
    )


# -- W' stratification ----------------------------------------------------------


def strata_tables(
    n: int, lam: JordanType, primes: Sequence[int], budget: int = DEFAULT_BUDGET
) -> dict[int, dict[Parabolic, StrataCounts]]:
    par = par_prime_poset(n)
    return {p: {P: stratum_counts(P, lam, p, PARABOLIC, budget) for P in par} for p in primes}


@dataclass
class StratumReport:
    w: WeylPerm
    leq: CountPolynomial
    lt: CountPolynomial
    quotient: CountPolynomial
    restricted_quotient: CountPolynomial

    @property
    def global_holds(self) -> bool:
        """Robust part: the glued closed union up to w has virtual count 1."""
        return self.leq == 1

    @property
    def bookkeeping_holds(self) -> bool:
        """Convention-sensitive part: the quotient by the smaller strata is point-like.

        For w = 1 there is nothing smaller and only the global count is asked for.
        """
        if self.w.is_identity():
            return self.lt == 0
        return self.lt == 1 and self.quotient == 1 and self.restricted_quotient == 1


def _quotient_count(poset: FinitePoset, eq: Mapping[Parabolic, int]) -> int:
    # X_P / Y_P = X_P with the closed part Y_P collapsed to a point: #(X - Y) + 1
    return virtual_count(PosetDiagram(poset, {P: eq[P] + 1 for P in poset}))


def leq_w_checks(
    n: int, lam: JordanType, primes: Sequence[int], budget: int = DEFAULT_BUDGET
) -> dict[WeylPerm, StratumReport]:
    """For every w in W': glued counts of the closed unions up to w and of their quotients."""
    _require_nonzero(lam)
    primes = _check_primes(n, primes)
    data = jm_data(lam)
    wp = w_prime(n, data.J0).elements
    tables = strata_tables(n, lam, primes, budget)
    par = par_prime_poset(n)
    bound = degree_bound(n)
    out = {}
    for w in wp:
        sub = par_w(n, data.J0, w)
        leq, lt, quo, rquo = [], [], [], []
        for p in primes:
            t = tables[p]
            leq.append((p, virtual_count(PosetDiagram(par, {P: t[P].count_leq[w] for P in par}))))
            lt.append((p, virtual_count(PosetDiagram(par, {P: t[P].count_lt[w] for P in par}))))
            eq = {P: t[P].count_eq[w] for P in par}
            quo.append((p, _quotient_count(par, eq)))
            rquo.append((p, _quotient_count(sub, eq)))
        out[w] = StratumReport(
            w,
            interpolate_count_polynomial(leq, bound),
            interpolate_count_polynomial(lt, bound),
            interpolate_count_polynomial(quo, bound),
            interpolate_count_polynomial(rquo, bound),
        )
    return out


@dataclass
class ExcisionReport:
    w: WeylPerm
    rows: list[tuple[int, str, str, int, int]]  # (q, P, psi(P), open count at psi(P), open count at P)

    @property
    def holds(self) -> bool:
        return all(a == b for *_, a, b in self.rows)


def excision_check(
    n: int,
    lam: JordanType,
    w: WeylPerm,
    primes: Sequence[int],
    budget: int = DEFAULT_BUDGET,
    tables: dict[int, dict[Parabolic, StrataCounts]] | None = None,
) -> ExcisionReport:
    """Open strata at w have equal size over psi(P) and over P, for every proper P."""
    _require_nonzero(lam)
    data = jm_data(lam)
    W = w_prime(n, data.J0)
    if w not in W.elements or w.is_identity() or w == W.w0_prime:
        raise PreconditionError(f"{w} must lie in W' - {{1, w0'}}")
    if tables is None:
        tables = strata_tables(n, lam, primes, budget)
    rows = []
    for p in primes:
        for P in par_prime_poset(n):
            Pt = psi(P, w, data.J0)
            t, tt = tables[p][P], tables[p][Pt]
            rows.append((p, str(P), str(Pt), tt.count_leq[w] - tt.count_lt[w], t.count_leq[w] - t.count_lt[w]))
    return ExcisionReport(w, rows)


# -- Levi recursion -------------------------------------------------------------


@dataclass
class LeviReport:
    R: Parabolic
    q: int
    rows: list[tuple[str, tuple[str, ...], int, int]]  # (flag, block types, fiber count, Levi count)

    @property
    def holds(self) -> bool:
        return all(a == b for *_, a, b in self.rows)


def levi_fiber_check(
    n: int, lam: JordanType, R: Parabolic, q: int, budget: int = DEFAULT_BUDGET
) -> LeviReport:
    """Fiberwise comparison of the Tw_R gluing over Spr_R with the glued fiber of the Levi."""
    if not R.is_proper:
        raise PreconditionError("R must be a proper parabolic")
    fq.check_prime(q)
    A = jordan_matrix(lam, q)
    r_dims = flag_type_of(R, n)
    tw_r = tw_r_poset(R)
    weights = dict(zip(tw_r.elements, chain_weights(tw_r)))

    fibers: dict[tuple, dict[TwArrow, int]] = {}
    for cell in tw_r:
        for f in springer_flags(A, q, flag_type_of(cell.Q, n), flag_type_of(cell.P, n), UNIPOTENT, budget):
            key = f.coarsen(r_dims).bases
            fibers.setdefault(key, {}).setdefault(cell, 0)
            fibers[key][cell] += 1

    rows = []
    for f in springer_flags(A, q, r_dims, r_dims, PARABOLIC, budget):
        chain = f.full_chain()
        types = []
        levi = 1
        for lo, hi in zip(chain, chain[1:]):
            mu = JordanType(fq.partition_from_ranks(fq.subquotient_ranks(A, lo, hi, q)))
            types.append(str(mu))
            levi *= glued_unipotent_count(mu, q, budget)
        counts = fibers.get(f.bases, {})
        lhs = sum(weights[c] * counts.get(c, 0) for c in tw_r)
        rows.append((str([list(map(list, b)) for b in f.bases]), tuple(types), lhs, levi))
    return LeviReport(R, q, rows)


# -- closed-form identities ----------------------------------------------------


def gaussian_binomial_poly(n: int, k: int) -> CountPolynomial:
    if k < 0 or k > n:
        return CountPolynomial()
    if k == 0 or k == n:
        return CountPolynomial.constant(1)
    return gaussian_binomial_poly(n - 1, k - 1) + Q**k * gaussian_binomial_poly(n - 1, k)


def partial_flag_count_poly(n: int, dims: Sequence[int]) -> CountPolynomial:
    """#(G/Q)(F_q) for a flag type, as a polynomial."""
    out = CountPolynomial.constant(1)
    cuts = [0] + list(dims) + [n]
    for lo, hi in zip(cuts[1:], cuts[2:]):
        out = out * gaussian_binomial_poly(hi, lo)
    return out


def nilradical_dim(n: int, dims: Sequence[int]) -> int:
    cuts = [0] + list(dims) + [n]
    blocks = [b - a for a, b in zip(cuts, cuts[1:])]
    return (n * n - sum(b * b for b in blocks)) // 2


@dataclass
class NilconeResult:
    n: int
    total: CountPolynomial
    expected: CountPolynomial
    cells: dict[str, CountPolynomial]

    @property
    def holds(self) -> bool:
        return self.total == self.expected


def nilcone_check(n: int, primes: Sequence[int] = ()) -> NilconeResult:
    """Glue #N_{P>=Q} = #(G/Q) q^{dim u_P} over Tw and compare with #N = q^{n(n-1)}."""
    if not 1 <= n <= 5:
        raise ValueError(f"n must lie in 1..5, got {n}")
    tw = tw_poset(n)
    values = {
        c: partial_flag_count_poly(n, flag_type_of(c.Q, n)) * Q ** nilradical_dim(n, flag_type_of(c.P, n))
        for c in tw
    }
    total = virtual_count(PosetDiagram(tw, values))
    expected = Q ** (n * (n - 1))
    for p in primes:
        if total(p) != expected(p):
            raise AssertionError(f"evaluation mismatch at q={p}")
    return NilconeResult(n, total, expected, {str(c): v for c, v in values.items()})


@dataclass
class BlowupResult:
    m: int
    total: CountPolynomial

    @property
    def holds(self) -> bool:
        return self.total == Q**self.m


def blowup_demo(m: int, primes: Sequence[int] = ()) -> BlowupResult:
    """pt glued to the blow-up of A^m along the exceptional divisor: 1 + #B - #E = q^m."""
    if not 1 <= m <= 8:
        raise ValueError(f"m must lie in 1..8, got {m}")
    proj = gaussian_binomial_poly(m, 1)  # #P^{m-1}
    total = 1 + Q * proj - proj
    for p in primes:
        if total(p) != p**m:
            raise AssertionError(f"evaluation mismatch at q={p}")
    return BlowupResult(m, total)
