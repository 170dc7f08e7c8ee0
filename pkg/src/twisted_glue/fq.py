"""Linear algebra over small prime fields F_q.

Vectors are tuples of ints in [0, q). A subspace is stored as its reduced
row-echelon basis (a tuple of row tuples), which is unique, so two
subspaces are equal iff their representations are equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_PRIME = 31

Vector = tuple[int, ...]
Subspace = tuple[Vector, ...]
Matrix = tuple[tuple[int, ...], ...]


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q**0.5) + 1))


def check_prime(q: int) -> int:
    if not is_prime(q) or q > MAX_PRIME:
        raise ValueError(f"q must be a prime <= {MAX_PRIME}, got {q}")
    return q


@dataclass(frozen=True)
class PrimeFieldElem:
    value: int
    q: int

    def __post_init__(self) -> None:
        check_prime(self.q)
        object.__setattr__(self, "value", self.value % self.q)

    def _coerce(self, other: PrimeFieldElem | int) -> int:
        if isinstance(other, PrimeFieldElem):
            if other.q != self.q:
                raise ValueError("elements of different fields")
            return other.value
        return other

    def __add__(self, other: PrimeFieldElem | int) -> PrimeFieldElem:
        return PrimeFieldElem(self.value + self._coerce(other), self.q)

    __radd__ = __add__

    def __sub__(self, other: PrimeFieldElem | int) -> PrimeFieldElem:
        return PrimeFieldElem(self.value - self._coerce(other), self.q)

    def __neg__(self) -> PrimeFieldElem:
        return PrimeFieldElem(-self.value, self.q)

    def __mul__(self, other: PrimeFieldElem | int) -> PrimeFieldElem:
        return PrimeFieldElem(self.value * self._coerce(other), self.q)

    __rmul__ = __mul__

    def inverse(self) -> PrimeFieldElem:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return PrimeFieldElem(pow(self.value, -1, self.q), self.q)

    def __truediv__(self, other: PrimeFieldElem | int) -> PrimeFieldElem:
        return self * PrimeFieldElem(self._coerce(other), self.q).inverse()


def rref(rows: Iterable[Sequence[int]], q: int) -> Subspace:
    """Reduced row-echelon form, zero rows dropped."""
    m = [[x % q for x in r] for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((r for r in range(pivot_row, len(m)) if m[r][col]), None)
        if pr is None:
            continue
        m[pivot_row], m[pr] = m[pr], m[pivot_row]
        inv = pow(m[pivot_row][col], -1, q)
        m[pivot_row] = [(x * inv) % q for x in m[pivot_row]]
        prow = m[pivot_row]
        for r in range(len(m)):
            if r != pivot_row and m[r][col]:
                f = m[r][col]
                m[r] = [(a - f * b) % q for a, b in zip(m[r], prow)]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return tuple(tuple(r) for r in m[:pivot_row])


def rank(rows: Iterable[Sequence[int]], q: int) -> int:
    return len(rref(rows, q))


def pivots(space: Subspace) -> tuple[int, ...]:
    return tuple(next(i for i, x in enumerate(row) if x) for row in space)


def span_sum(a: Subspace, b: Iterable[Sequence[int]], q: int) -> Subspace:
    return rref(list(a) + list(b), q)


def contains(space: Subspace, vectors: Iterable[Sequence[int]], q: int) -> bool:
    d = len(space)
    return all(len(rref(list(space) + [v], q)) == d for v in vectors)


def nullspace(rows: Sequence[Sequence[int]], ncols: int, q: int) -> Subspace:
    """Basis (in RREF) of {x : M x = 0}."""
    red = rref(rows, q)
    piv = pivots(red)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, p in zip(red, piv):
            x[p] = (-row[f]) % q
        basis.append(x)
    return rref(basis, q)


def mat_vec(A: Matrix, v: Sequence[int], q: int) -> Vector:
    return tuple(sum(a * x for a, x in zip(row, v)) % q for row in A)


def mat_mul(A: Matrix, B: Matrix, q: int) -> Matrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) % q for col in cols) for row in A)


def mat_pow(A: Matrix, k: int, q: int) -> Matrix:
    n = len(A)
    out: Matrix = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    for _ in range(k):
        out = mat_mul(out, A, q)
    return out


def image(A: Matrix, q: int) -> Subspace:
    """Column space of A."""
    return rref(list(zip(*A)), q)


def kernel(A: Matrix, q: int) -> Subspace:
    return nullspace(A, len(A), q)


def apply(A: Matrix, space: Subspace, q: int) -> list[Vector]:
    return [mat_vec(A, v, q) for v in space]


def preimage(A: Matrix, target: Subspace, q: int) -> Subspace:
    """{v : A v in target}."""
    n = len(A)
    annihilator = nullspace(target, n, q)
    if not annihilator:
        return standard_span(n, n)
    # rows y^T A for y in the annihilator
    YA = [tuple(sum(y[k] * A[k][c] for k in range(n)) % q for c in range(n)) for y in annihilator]
    return nullspace(YA, n, q)


def standard_span(n: int, m: int) -> Subspace:
    """span(e_1, ..., e_m)."""
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(m))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def gaussian_multinomial(parts: Sequence[int], q: int) -> int:
    """Number of flags in F_q^(sum parts) with successive quotient dims ``parts``."""
    total, out = 0, 1
    for p in parts:
        total += p
        out *= gaussian_binomial(total, p, q)
    return out


def iter_subspaces(n: int, d: int, q: int) -> Iterator[Subspace]:
    """Every d-dimensional subspace of F_q^n, once, as its RREF basis."""
    if not 0 <= d <= n:
        return
    for piv in itertools.combinations(range(n), d):
        free_slots = [(r, c) for r, p in enumerate(piv) for c in range(p + 1, n) if c not in piv]
        for values in itertools.product(range(q), repeat=len(free_slots)):
            rows = [[0] * n for _ in range(d)]
            for r, p in enumerate(piv):
                rows[r][p] = 1
            for (r, c), x in zip(free_slots, values):
                rows[r][c] = x
            yield tuple(tuple(r) for r in rows)


def complement_basis(lower: Subspace, upper: Subspace, q: int) -> list[Vector]:
    """Vectors of ``upper``'s basis spanning a complement of ``lower`` in it."""
    chosen: list[Vector] = []
    current = lower
    for v in upper:
        bigger = span_sum(current, [v], q)
        if len(bigger) > len(current):
            chosen.append(v)
            current = bigger
    if len(current) != len(upper):
        raise ValueError("lower is not contained in upper")
    return chosen


def iter_subspaces_between(lower: Subspace, upper: Subspace, d: int, q: int) -> Iterator[Subspace]:
    """Every W with lower <= W <= upper and dim W = d, once each."""
    k = d - len(lower)
    if k < 0 or d > len(upper):
        return
    comp = complement_basis(lower, upper, q)
    n = len(upper[0]) if upper else 0
    for coeffs in iter_subspaces(len(comp), k, q):
        lifts = [tuple(sum(c * v[i] for c, v in zip(row, comp)) % q for i in range(n)) for row in coeffs]
        yield span_sum(lower, lifts, q)


def quotient_ranks(A: Matrix, sub: Subspace, q: int) -> list[int]:
    """Ranks of powers of the map induced by A on V/sub (sub must be A-stable)."""
    n = len(A)
    ranks = [n - len(sub)]
    power = A
    while ranks[-1] > 0:
        ranks.append(len(span_sum(sub, image(power, q), q)) - len(sub))
        if ranks[-1] == ranks[-2]:
            raise ValueError("induced map is not nilpotent")
        power = mat_mul(power, A, q)
    return ranks


def subquotient_ranks(A: Matrix, lower: Subspace, upper: Subspace, q: int) -> list[int]:
    """Ranks of powers of the map induced by A on upper/lower."""
    ranks = [len(upper) - len(lower)]
    vecs: list[Vector] = list(upper)
    while ranks[-1] > 0:
        vecs = [mat_vec(A, v, q) for v in vecs]
        ranks.append(len(span_sum(lower, vecs, q)) - len(lower))
        if ranks[-1] == ranks[-2]:
            raise ValueError("induced map is not nilpotent")
    return ranks


def partition_from_ranks(ranks: Sequence[int]) -> tuple[int, ...]:
    """Jordan type from r_k = rank(N^k), k = 0, 1, ... ending at 0."""
    ge = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]  # number of parts >= k
    parts = []
    for k, count in enumerate(ge, start=1):
        nxt = ge[k] if k < len(ge) else 0
        parts.extend([k] * (count - nxt))
    return tuple(sorted(parts, reverse=True))


@dataclass(frozen=True)
class FlagFq:
    """Partial flag 0 < V_1 < ... < V_r < F_q^n of the given dimensions."""

    q: int
    n: int
    dims: tuple[int, ...]
    bases: tuple[Subspace, ...]

    def __post_init__(self) -> None:
        if len(self.dims) != len(self.bases):
            raise ValueError("one basis per step required")
        if any(not 0 < d < self.n for d in self.dims) or list(self.dims) != sorted(set(self.dims)):
            raise ValueError(f"dims must be strictly increasing in 1..{self.n - 1}: {self.dims}")
        for d, b in zip(self.dims, self.bases):
            if len(b) != d or rref(b, self.q) != b:
                raise ValueError("each step must be a canonical basis of the stated dimension")
        for small, big in zip(self.bases, self.bases[1:]):
            if not contains(big, small, self.q):
                raise ValueError("steps are not nested")

    @classmethod
    def from_subspaces(cls, q: int, n: int, spaces: Sequence[Subspace]) -> FlagFq:
        spaces = [rref(s, q) for s in spaces]
        return cls(q, n, tuple(len(s) for s in spaces), tuple(spaces))

    def step(self, d: int) -> Subspace:
        """The step of dimension d (0 and n give the trivial subspaces)."""
        if d == 0:
            return ()
        if d == self.n:
            return standard_span(self.n, self.n)
        return self.bases[self.dims.index(d)]

    def coarsen(self, dims: Sequence[int]) -> FlagFq:
        dims = tuple(dims)
        if not set(dims) <= set(self.dims):
            raise ValueError(f"{dims} does not coarsen {self.dims}")
        return FlagFq(self.q, self.n, dims, tuple(self.step(d) for d in dims))

    def full_chain(self) -> list[Subspace]:
        return [()] + list(self.bases) + [standard_span(self.n, self.n)]

    def complete(self) -> FlagFq:
        """Refine to a full flag, adjoining the next step's echelon rows in order."""
        chain = [()]
        for target in self.full_chain()[1:]:
            while len(chain[-1]) < len(target):
                cur = chain[-1]
                for v in target:
                    bigger = span_sum(cur, [v], self.q)
                    if len(bigger) > len(cur):
                        chain.append(bigger)
                        break
        return FlagFq.from_subspaces(self.q, self.n, chain[1:-1])
