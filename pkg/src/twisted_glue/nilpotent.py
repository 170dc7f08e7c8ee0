"""Nilpotent orbits of gl_n: Jordan types, Jacobson-Morozov data and W'.

The local system is trivial throughout, so a nilpotent is just a matrix and
is represented up to conjugacy by its Jordan type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from . import fq
from .root_weyl import (
    Parabolic,
    WeylPerm,
    act_on_simple,
    bruhat_leq,
    enumerate_weyl,
    in_levi_span,
)

MAX_JM_RANK = 6


@dataclass(frozen=True)
class JordanType:
    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]) -> None:
        parts = tuple(int(p) for p in parts)
        if not parts or any(p <= 0 for p in parts):
            raise ValueError(f"a partition needs positive parts, got {parts}")
        if list(parts) != sorted(parts, reverse=True):
            raise ValueError(f"parts must be weakly decreasing, got {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> JordanType:
        """Parse '2,1' or '2 1'."""
        try:
            parts = [int(t) for t in text.replace(",", " ").split()]
        except ValueError as exc:
            raise ValueError(f"malformed partition {text!r}") from exc
        return cls(parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def is_zero(self) -> bool:
        """Jordan type of the zero matrix."""
        return all(p == 1 for p in self.parts)

    @property
    def is_regular(self) -> bool:
        return len(self.parts) == 1

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions(n: int) -> list[JordanType]:
    """Partitions of n in reverse lexicographic order, (n) first."""

    def gen(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return [JordanType(p) for p in gen(n, n)]


@dataclass(frozen=True)
class JMData:
    lam: JordanType
    h_weights: tuple[int, ...]
    J0: frozenset[int]
    P0: Parabolic
    ref_flag_dims: tuple[int, ...]


def _weights_with_blocks(lam: JordanType) -> list[tuple[int, int, int]]:
    # (weight, block index, position in block); position 0 is the top of the
    # Jordan chain, i.e. the highest weight and killed by A
    out = []
    for b, size in enumerate(lam.parts):
        for k in range(size):
            out.append((size - 1 - 2 * k, b, k))
    out.sort(key=lambda t: (-t[0], t[1]))
    return out


def jm_data(lam: JordanType) -> JMData:
    n = lam.n
    if n > MAX_JM_RANK:
        raise ValueError(f"n must be at most {MAX_JM_RANK}, got {n}")
    h = tuple(w for w, _, _ in _weights_with_blocks(lam))
    J0 = frozenset(i for i in range(1, n) if h[i - 1] == h[i])
    dims = tuple(i for i in range(1, n) if h[i - 1] > h[i])
    return JMData(lam, h, J0, Parabolic(n, J0), dims)


def in_w_prime(w: WeylPerm, J0: Iterable[int]) -> bool:
    """w^{-1}(alpha_j) > 0 for every j in J0."""
    winv = w.inverse()
    return all(act_on_simple(winv, j).positive for j in J0)


@dataclass(frozen=True)
class WPrime:
    elements: tuple[WeylPerm, ...]
    w0_prime: WeylPerm
    length_max_unique: bool
    bruhat_max_unique: bool


def w_prime(n: int, J0: Iterable[int]) -> WPrime:
    """W' = {w : w^{-1}(alpha_j) > 0 for j in J0} together with its maximum w0'.

    Raises if the maximum is not unique, in length or in Bruhat order, since
    that would mean the conventions here disagree with the expected structure.
    """
    J0 = frozenset(J0)
    elements = tuple(w for w in enumerate_weyl(n) if in_w_prime(w, J0))
    top = max(w.length for w in elements)
    longest = [w for w in elements if w.length == top]
    bruhat_max = [w for w in elements if all(bruhat_leq(u, w) for u in elements)]
    result = WPrime(elements, longest[0], len(longest) == 1, bruhat_max == longest[:1])
    if not (result.length_max_unique and result.bruhat_max_unique):
        raise ArithmeticError(f"W' for J0={sorted(J0)} has no unique maximal element")
    return result


@dataclass(frozen=True)
class TriPartition:
    I0: frozenset[int]
    Iplus: frozenset[int]
    Iminus: frozenset[int]


def tri_partition(w: WeylPerm, J0: Iterable[int]) -> TriPartition:
    """Split I according to where w sends each simple root: into R_J0, R+ - R_J0 or R- - R_J0."""
    J0 = frozenset(J0)
    zero, plus, minus = set(), set(), set()
    for i in range(1, w.n):
        r = act_on_simple(w, i)
        if in_levi_span(r, J0):
            zero.add(i)
        elif r.positive:
            plus.add(i)
        else:
            minus.add(i)
    return TriPartition(frozenset(zero), frozenset(plus), frozenset(minus))


def jordan_matrix(lam: JordanType, q: int) -> fq.Matrix:
    """Nilpotent of type lam in the Jordan basis sorted by descending weight.

    Each block's chain v_0 <- v_1 <- ... raises the weight by 2, so the matrix
    is strictly upper triangular and lies in the nilradical of P0.
    """
    fq.check_prime(q)
    basis = _weights_with_blocks(lam)
    pos = {(b, k): i for i, (_, b, k) in enumerate(basis)}
    n = lam.n
    A = [[0] * n for _ in range(n)]
    for (b, k), col in pos.items():
        if k > 0:
            A[pos[(b, k - 1)]][col] = 1
    return tuple(tuple(r) for r in A)


def reference_flag(lam: JordanType, q: int) -> fq.FlagFq:
    """Weight filtration V_{>=t} of the Jordan basis: a flag of type J0."""
    data = jm_data(lam)
    n = lam.n
    return fq.FlagFq(q, n, data.ref_flag_dims, tuple(fq.standard_span(n, d) for d in data.ref_flag_dims))


def jordan_type_of(A: fq.Matrix, q: int) -> JordanType:
    n = len(A)
    ranks = [n]
    power = A
    while ranks[-1] > 0:
        ranks.append(fq.rank(power, q))
        if ranks[-1] == ranks[-2]:
            raise ValueError("matrix is not nilpotent")
        power = fq.mat_mul(power, A, q)
    return JordanType(fq.partition_from_ranks(ranks))
