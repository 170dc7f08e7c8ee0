"""Gluing posets of standard parabolics.

Conventions:

* ``Par`` is ordered by inclusion of J.
* ``Tw`` has elements [P >= Q], and [P >= Q] <= [P' >= Q'] iff
  J_P' <= J_P and J_Q <= J_Q', so along a morphism P shrinks and Q grows.
  In rank one this is [B>=B] <- [G>=B] -> [G>=G].
* ``TwTr'`` has triples (R, P, Q) of proper parabolics with Q <= P <= R,
  and (R, P, Q) <= (R', P', Q') iff R <= R', P' <= P, Q <= Q'.

Diagrams over these posets are covariant: x <= y gives a map F(x) -> F(y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Generic, Hashable, Iterable, Iterator, Sequence, TypeVar

import numpy as np

from .nilpotent import in_w_prime, tri_partition
from .root_weyl import MAX_WEYL_RANK, Parabolic, WeylPerm, all_parabolics

__all__ = [
    "Parabolic", "TwArrow", "TwTriple", "FinitePoset", "TwTrData",
    "par_poset", "par_prime_poset", "tw_poset", "tw_r_poset", "twtr_poset",
    "hasse_edges", "emit_dot", "par_w", "psi", "psi_printed", "verify_right_adjoint",
    "adjoint_report", "strict_chains",
]

T = TypeVar("T", bound=Hashable)

MAX_CHAIN_POSET = 100
MAX_VERIFIED_POSET = 10_000


@dataclass(frozen=True)
class TwArrow:
    P: Parabolic
    Q: Parabolic

    def __post_init__(self) -> None:
        if self.P.n != self.Q.n or not self.Q.J <= self.P.J:
            raise ValueError(f"[{self.P} >= {self.Q}] is not a valid pair")

    def leq(self, other: TwArrow) -> bool:
        return other.P.J <= self.P.J and self.Q.J <= other.Q.J

    def __str__(self) -> str:
        return f"[{self.P}>={self.Q}]"


@dataclass(frozen=True)
class TwTriple:
    R: Parabolic
    P: Parabolic
    Q: Parabolic

    def __post_init__(self) -> None:
        if not (self.Q.J <= self.P.J <= self.R.J) or not self.R.is_proper:
            raise ValueError(f"({self.R},{self.P},{self.Q}) is not a twisted triple of proper parabolics")

    def leq(self, other: TwTriple) -> bool:
        return self.R.J <= other.R.J and other.P.J <= self.P.J and self.Q.J <= other.Q.J

    def __str__(self) -> str:
        return f"[{self.R}>={self.P}>={self.Q}]"


@dataclass(frozen=True, eq=False)
class FinitePoset(Generic[T]):
    """Finite poset stored extensionally as a boolean relation matrix."""

    elements: tuple[T, ...]
    leq: np.ndarray
    index: dict[T, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.elements)
        object.__setattr__(self, "index", {x: i for i, x in enumerate(self.elements)})
        if len(self.index) != n:
            raise ValueError("duplicate elements")
        leq = np.asarray(self.leq, dtype=bool)
        leq.setflags(write=False)
        object.__setattr__(self, "leq", leq)
        if leq.shape != (n, n):
            raise ValueError("relation matrix has the wrong shape")
        if n <= MAX_VERIFIED_POSET:
            self._check_axioms()

    def _check_axioms(self) -> None:
        leq = self.leq
        if not leq.diagonal().all():
            raise ValueError("relation is not reflexive")
        if (leq & leq.T & ~np.eye(len(self), dtype=bool)).any():
            raise ValueError("relation is not antisymmetric")
        li = leq.astype(np.int64)
        if ((li @ li > 0) & ~leq).any():
            raise ValueError("relation is not transitive")

    @classmethod
    def from_relation(cls, elements: Iterable[T], leq: Callable[[T, T], bool]) -> FinitePoset[T]:
        elements = tuple(elements)
        mat = np.array([[leq(a, b) for b in elements] for a in elements], dtype=bool).reshape(
            len(elements), len(elements)
        )
        return cls(elements, mat)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[T]:
        return iter(self.elements)

    def le(self, a: T, b: T) -> bool:
        return bool(self.leq[self.index[a], self.index[b]])

    def lt(self, a: T, b: T) -> bool:
        return a != b and self.le(a, b)

    def subposet(self, keep: Callable[[T], bool]) -> FinitePoset[T]:
        idx = [i for i, x in enumerate(self.elements) if keep(x)]
        return FinitePoset(tuple(self.elements[i] for i in idx), self.leq[np.ix_(idx, idx)])

    def minimum(self) -> T | None:
        for i, x in enumerate(self.elements):
            if self.leq[i].all():
                return x
        return None

    def covers(self) -> np.ndarray:
        lt = self.leq & ~np.eye(len(self), dtype=bool)
        li = lt.astype(np.int64)
        return lt & ~(li @ li > 0)


def product_poset(a: FinitePoset, b: FinitePoset) -> FinitePoset:
    elements = tuple((x, y) for x in a.elements for y in b.elements)
    return FinitePoset(elements, np.kron(a.leq, b.leq).astype(bool))


def par_poset(n: int) -> FinitePoset[Parabolic]:
    return FinitePoset.from_relation(all_parabolics(n), lambda a, b: a.J <= b.J)


def par_prime_poset(n: int) -> FinitePoset[Parabolic]:
    """Par' = Par - {G}, the proper parabolics."""
    return FinitePoset.from_relation((p for p in all_parabolics(n) if p.is_proper), lambda a, b: a.J <= b.J)


def _check_rank(n: int, cap: int = MAX_WEYL_RANK) -> None:
    if not 1 <= n <= cap:
        raise ValueError(f"n must lie in 1..{cap}, got {n}")


def tw_poset(n: int) -> FinitePoset[TwArrow]:
    """Tw(Par^op): all pairs [P >= Q], 3^(n-1) of them."""
    _check_rank(n)
    pars = all_parabolics(n)
    arrows = [TwArrow(P, Q) for P in reversed(pars) for Q in pars if Q.J <= P.J]
    return FinitePoset.from_relation(arrows, TwArrow.leq)


def tw_r_poset(R: Parabolic) -> FinitePoset[TwArrow]:
    """The subposet Tw_R of pairs [P >= Q] with P <= R."""
    return tw_poset(R.n).subposet(lambda a: a.P.J <= R.J)


@dataclass(frozen=True)
class TwTrData:
    poset: FinitePoset[TwTriple]
    phi1: dict[TwTriple, TwArrow]
    phi2: dict[TwTriple, Parabolic]


def twtr_poset(n: int) -> TwTrData:
    """TwTr' with phi1: (R,P,Q) -> [P>=Q] and phi2: (R,P,Q) -> R, both checked monotone."""
    _check_rank(n, 5)
    proper = [p for p in all_parabolics(n) if p.is_proper]
    triples = [TwTriple(R, P, Q) for R in proper for P in proper for Q in proper if Q.J <= P.J <= R.J]
    poset = FinitePoset.from_relation(triples, TwTriple.leq)
    phi1 = {t: TwArrow(t.P, t.Q) for t in triples}
    phi2 = {t: t.R for t in triples}
    for a in triples:
        for b in triples:
            if poset.le(a, b):
                if not phi1[a].leq(phi1[b]):
                    raise AssertionError(f"phi1 not monotone on {a} <= {b}")
                if not phi2[a].J <= phi2[b].J:
                    raise AssertionError(f"phi2 not monotone on {a} <= {b}")
    return TwTrData(poset, phi1, phi2)


def hasse_edges(poset: FinitePoset[T]) -> list[tuple[T, T]]:
    """Covering pairs (a, b), a covered by b, in element order."""
    cov = poset.covers()
    els = poset.elements
    return [(els[i], els[j]) for i in range(len(els)) for j in range(len(els)) if cov[i, j]]


def emit_dot(poset: FinitePoset, name: str = "poset") -> str:
    """DOT digraph with one node per element and one edge per cover, smaller to larger."""
    lines = [f"digraph {name} {{"]
    for i, x in enumerate(poset.elements):
        label = str(x).replace('"', '\\"')
        lines.append(f'  n{i} [label="{label}"];')
    cov = poset.covers()
    for i in range(len(poset)):
        for j in range(len(poset)):
            if cov[i, j]:
                lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _require_w_prime(w: WeylPerm, J0: Iterable[int]) -> None:
    if not in_w_prime(w, J0):
        raise ValueError(f"{w} is not in W' for J0={sorted(J0)}")


def par_w(n: int, J0: Iterable[int], w: WeylPerm) -> FinitePoset[Parabolic]:
    """Par'_w = {P proper : J_P <= I0_w | I-_w}."""
    J0 = frozenset(J0)
    _require_w_prime(w, J0)
    parts = tri_partition(w, J0)
    allowed = parts.I0 | parts.Iminus
    return par_prime_poset(n).subposet(lambda P: P.J <= allowed)


def psi(P: Parabolic, w: WeylPerm, J0: Iterable[int]) -> Parabolic:
    """Right adjoint to Par'_w -> Par': J_P minus I+_w."""
    return Parabolic(P.n, P.J - tri_partition(w, frozenset(J0)).Iplus)


def psi_printed(P: Parabolic, w: WeylPerm, J0: Iterable[int]) -> Parabolic:
    """The literal alternative J_{P0} - I+_w, constant in P; kept for comparison only."""
    J0 = frozenset(J0)
    return Parabolic(P.n, J0 - tri_partition(w, J0).Iplus)


def _adjoint_holds(n: int, J0: frozenset[int], w: WeylPerm, right: Callable[[Parabolic], Parabolic]) -> bool:
    sub = par_w(n, J0, w)
    for P in par_prime_poset(n):
        image = right(P)
        if image not in sub.index:
            return False
        for Pp in sub:
            if (Pp.J <= image.J) != (Pp.J <= P.J):
                return False
    return True


def verify_right_adjoint(n: int, J0: Iterable[int], w: WeylPerm) -> bool:
    """Check P' <= psi(P) <=> P' <= P for all P' in Par'_w, P in Par'."""
    J0 = frozenset(J0)
    return _adjoint_holds(n, J0, w, lambda P: psi(P, w, J0))


def adjoint_report(n: int, J0: Iterable[int], w: WeylPerm) -> dict[str, bool]:
    """Which candidate formula for psi satisfies the adjunction law."""
    J0 = frozenset(J0)
    return {
        "J_P - I+": _adjoint_holds(n, J0, w, lambda P: psi(P, w, J0)),
        "J_P0 - I+": _adjoint_holds(n, J0, w, lambda P: psi_printed(P, w, J0)),
    }


def strict_chains(
    poset: FinitePoset[T], max_len: int | None = None, max_size: int = MAX_CHAIN_POSET
) -> list[tuple[T, ...]]:
    """All chains x0 < x1 < ... < xk (k <= max_len), depth first in element order."""
    if len(poset) > max_size:
        raise ValueError(f"poset has {len(poset)} elements, more than the chain guard {max_size}")
    lt = poset.leq & ~np.eye(len(poset), dtype=bool)
    above = [np.flatnonzero(lt[i]).tolist() for i in range(len(poset))]
    els = poset.elements
    out: list[tuple[T, ...]] = []

    def grow(chain: list[int]) -> None:
        out.append(tuple(els[i] for i in chain))
        if max_len is not None and len(chain) - 1 >= max_len:
            return
        for j in above[chain[-1]]:
            chain.append(j)
            grow(chain)
            chain.pop()

    for i in range(len(poset)):
        grow([i])
    return out


def chain_weights(poset: FinitePoset, max_size: int = MAX_CHAIN_POSET) -> list[int]:
    """For each x, the signed number of strict chains starting at x: sum over x=x0<...<xk of (-1)^k.

    Computed by the recursion g(x) = 1 - sum_{y > x} g(y), which avoids listing chains.
    """
    if len(poset) > max_size:
        raise ValueError(f"poset has {len(poset)} elements, more than the chain guard {max_size}")
    lt = poset.leq & ~np.eye(len(poset), dtype=bool)
    # process elements with the most elements above them last-in, i.e. maximal first
    order = sorted(range(len(poset)), key=lambda i: int(lt[i].sum()))
    g = [0] * len(poset)
    for i in order:
        g[i] = 1 - sum(g[j] for j in np.flatnonzero(lt[i]))
    return g


def sequence_poset(labels: Sequence[T]) -> FinitePoset[T]:
    """Chain poset labels[0] < labels[1] < ..."""
    return FinitePoset(tuple(labels), np.triu(np.ones((len(labels), len(labels)), dtype=bool)))
