"""Type A root data and the Weyl group S_n as permutations.

Permutations are one-indexed in image form: ``w.images[k - 1] == w(k)``.
Composition is ``(u * w)(k) == u(w(k))``, so ``s_i * w`` swaps the *values*
i and i+1 of ``w`` while ``w * s_i`` swaps the *positions* i and i+1.

The simple root alpha_i = e_i - e_{i+1} is indexed by i in I = {1, ..., n-1};
the root e_i - e_j is positive iff i < j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

MAX_WEYL_RANK = 6


@dataclass(frozen=True)
class RootDatumA:
    """Root datum of GL_n."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")

    @property
    def simple_indices(self) -> tuple[int, ...]:
        return tuple(range(1, self.n))

    @property
    def positive_roots(self) -> tuple[Root, ...]:
        return tuple(Root(i, j) for i in range(1, self.n + 1) for j in range(i + 1, self.n + 1))

    @property
    def negative_roots(self) -> tuple[Root, ...]:
        return tuple(r.negate() for r in self.positive_roots)


@dataclass(frozen=True, order=True)
class Root:
    """The root e_i - e_j."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise ValueError("e_i - e_i is not a root")

    @property
    def positive(self) -> bool:
        return self.i < self.j

    def negate(self) -> Root:
        return Root(self.j, self.i)

    def __str__(self) -> str:
        return f"e{self.i}-e{self.j}"


@dataclass(frozen=True)
class Parabolic:
    """Standard parabolic of GL_n, named by its subset J of simple indices.

    J = {} is the Borel B and J = I is G itself.
    """

    n: int
    J: frozenset[int]

    def __init__(self, n: int, J: Iterable[int] = ()) -> None:
        J = frozenset(J)
        if not J <= set(range(1, n)):
            raise ValueError(f"{sorted(J)} is not a subset of the simple indices of GL_{n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "J", J)

    @classmethod
    def borel(cls, n: int) -> Parabolic:
        return cls(n, ())

    @classmethod
    def whole(cls, n: int) -> Parabolic:
        return cls(n, range(1, n))

    @property
    def is_proper(self) -> bool:
        return len(self.J) < self.n - 1

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.J))

    def __contains__(self, i: object) -> bool:
        return i in self.J

    def __len__(self) -> int:
        return len(self.J)

    def __le__(self, other: Parabolic) -> bool:
        return self.J <= other.J

    def __lt__(self, other: Parabolic) -> bool:
        return self.J < other.J

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.J), tuple(sorted(self.J)))

    def __str__(self) -> str:
        if not self.is_proper:
            return "G"
        if not self.J:
            return "B"
        return "P{" + ",".join(map(str, sorted(self.J))) + "}"


def all_parabolics(n: int) -> list[Parabolic]:
    """All 2^(n-1) standard parabolics, by size of J then lexicographically."""
    simple = range(1, n)
    return [Parabolic(n, J) for k in range(n) for J in itertools.combinations(simple, k)]


@dataclass(frozen=True, order=True)
class WeylPerm:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of 1..n: {self.images}")

    @classmethod
    def identity(cls, n: int) -> WeylPerm:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def simple_reflection(cls, n: int, i: int) -> WeylPerm:
        if not 1 <= i < n:
            raise ValueError(f"simple index {i} out of range for n={n}")
        images = list(range(1, n + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        return cls(tuple(images))

    @classmethod
    def longest(cls, n: int) -> WeylPerm:
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def from_word(cls, n: int, word: Iterable[int]) -> WeylPerm:
        """Product s_{i1} s_{i2} ... of simple reflections, left to right."""
        w = cls.identity(n)
        for i in word:
            w = w * cls.simple_reflection(n, i)
        return w

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def __mul__(self, other: WeylPerm) -> WeylPerm:
        if other.n != self.n:
            raise ValueError("cannot compose permutations of different size")
        return WeylPerm(tuple(self.images[k - 1] for k in other.images))

    def inverse(self) -> WeylPerm:
        inv = [0] * self.n
        for pos, val in enumerate(self.images, start=1):
            inv[val - 1] = pos
        return WeylPerm(tuple(inv))

    @cached_property
    def length(self) -> int:
        return length(self)

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def right_descents(self) -> frozenset[int]:
        """{i : w * s_i < w}, equivalently w(alpha_i) < 0."""
        return frozenset(i for i in range(1, self.n) if self(i) > self(i + 1))

    def left_descents(self) -> frozenset[int]:
        """{i : s_i * w < w}, equivalently w^{-1}(alpha_i) < 0."""
        return self.inverse().right_descents()

    def reduced_word(self) -> tuple[int, ...]:
        word: list[int] = []
        w = self
        while not w.is_identity():
            i = min(w.right_descents())
            word.append(i)
            w = w * WeylPerm.simple_reflection(self.n, i)
        return tuple(reversed(word))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"


def enumerate_weyl(n: int) -> list[WeylPerm]:
    """All n! permutations in lexicographic order of their images."""
    if not 1 <= n <= MAX_WEYL_RANK:
        raise ValueError(f"n must lie in 1..{MAX_WEYL_RANK}, got {n}")
    return [WeylPerm(p) for p in itertools.permutations(range(1, n + 1))]


def length(w: WeylPerm) -> int:
    """Number of inversions."""
    im = w.images
    return sum(1 for a in range(len(im)) for b in range(a + 1, len(im)) if im[a] > im[b])


def act_on_simple(w: WeylPerm, i: int) -> Root:
    """w(alpha_i) = e_{w(i)} - e_{w(i+1)}."""
    if not 1 <= i < w.n:
        raise ValueError(f"simple index {i} out of range for n={w.n}")
    return Root(w(i), w(i + 1))


def act_on_root(w: WeylPerm, r: Root) -> Root:
    return Root(w(r.i), w(r.j))


def in_levi_span(r: Root, J: Iterable[int]) -> bool:
    """Whether e_i - e_j lies in the root subsystem R_J.

    R_J consists of the roots whose indices lie in one block of the
    composition cut out by J, i.e. every node strictly between them is in J.
    """
    J = frozenset(J)
    lo, hi = min(r.i, r.j), max(r.i, r.j)
    return all(k in J for k in range(lo, hi))


def _dominance_table(w: WeylPerm) -> list[list[int]]:
    # table[i][j] = #{a <= i : w(a) >= j}, for 1 <= i, j <= n
    n = w.n
    table = [[0] * (n + 2) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            table[i][j] = table[i - 1][j] + (1 if w(i) >= j else 0)
    return table


def bruhat_leq(u: WeylPerm, w: WeylPerm) -> bool:
    """Bruhat order by the rank-matrix dominance criterion."""
    if u.n != w.n:
        raise ValueError("permutations of different size")
    tu, tw = _dominance_table(u), _dominance_table(w)
    n = u.n
    return all(tu[i][j] <= tw[i][j] for i in range(1, n + 1) for j in range(1, n + 1))


def parabolic_subgroup(n: int, J: Iterable[int]) -> list[WeylPerm]:
    """Elements of W_J, i.e. permutations preserving each block of J."""
    J = frozenset(J)
    return [w for w in enumerate_weyl(n) if all(in_levi_span(Root(k, w(k)), J) for k in range(1, n + 1) if w(k) != k)]


def min_double_coset_rep(J_left: Iterable[int], w: WeylPerm, J_right: Iterable[int]) -> WeylPerm:
    """Minimal-length element of W_{J_left} w W_{J_right}, by descent stripping."""
    J_left, J_right = frozenset(J_left), frozenset(J_right)
    n = w.n
    changed = True
    while changed:
        changed = False
        for i in sorted(J_left & w.left_descents()):
            w = WeylPerm.simple_reflection(n, i) * w
            changed = True
            break
        else:
            for i in sorted(J_right & w.right_descents()):
                w = w * WeylPerm.simple_reflection(n, i)
                changed = True
                break
    return w

