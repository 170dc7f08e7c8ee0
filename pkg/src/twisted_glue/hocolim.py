"""Rational homology of homotopy colimits of diagrams of simplicial complexes.

The homotopy colimit over a finite poset is modelled by its simplicial
replacement. In total degree m the generators are pairs (c, s) with c a strict
chain x0 < ... < xk and s an oriented (m - k)-simplex of F(x0). The differential is

    D(c, s) = sum_i (-1)^i (d_i c, s_i) + (-1)^k (c, ds)

where d_0 drops x0 and pushes s forward along F(x0 -> x1), the other d_i drop
x_i and leave s alone, and ds is the simplicial boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .posets import FinitePoset, chain_weights, hasse_edges, strict_chains, tw_poset

MAX_SIMPLICES = 10_000
MAX_TOTAL_GENERATORS = 100_000

Vertex = Hashable
Simplex = tuple  # vertices in sorted order


def _key(v: Vertex) -> tuple[str, str]:
    # total order on heterogeneous labels
    return (type(v).__name__, repr(v))


def _sorted(vs: Iterable[Vertex]) -> tuple:
    return tuple(sorted(vs, key=_key))


class SimplicialComplex:
    """A finite simplicial complex given by its facets."""

    def __init__(self, vertices: Iterable[Vertex], facets: Iterable[Iterable[Vertex]]) -> None:
        self.vertices = frozenset(vertices)
        self.facets = tuple(frozenset(f) for f in facets)
        for f in self.facets:
            if not f:
                raise ValueError("facets must be nonempty")
            if not f <= self.vertices:
                raise ValueError(f"facet {set(f)} uses vertices outside the vertex set")
        faces: set[Simplex] = {(v,) for v in self.vertices}
        for f in self.facets:
            ordered = _sorted(f)
            for k in range(1, len(ordered) + 1):
                faces.update(itertools.combinations(ordered, k))
        if len(faces) > MAX_SIMPLICES:
            raise ValueError(f"complex has {len(faces)} simplices, more than {MAX_SIMPLICES}")
        self._by_dim: dict[int, list[Simplex]] = {}
        for s in faces:
            self._by_dim.setdefault(len(s) - 1, []).append(s)
        for lst in self._by_dim.values():
            lst.sort(key=lambda s: tuple(_key(v) for v in s))
        self._faces = frozenset(faces)

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def simplices(self, k: int) -> list[Simplex]:
        return self._by_dim.get(k, [])

    def __contains__(self, simplex: Iterable[Vertex]) -> bool:
        return _sorted(simplex) in self._faces

    def __len__(self) -> int:
        return len(self._faces)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(v) for k, v in self._by_dim.items())

    # model library

    @classmethod
    def empty(cls) -> SimplicialComplex:
        return cls((), ())

    @classmethod
    def point(cls, label: Vertex = "p") -> SimplicialComplex:
        return cls((label,), ((label,),))

    @classmethod
    def sphere2(cls, labels: Sequence[Vertex] = ("s0", "s1", "s2", "s3")) -> SimplicialComplex:
        """Boundary of the 3-simplex."""
        if len(set(labels)) != 4:
            raise ValueError("need four distinct labels")
        return cls(labels, itertools.combinations(labels, 3))

    @classmethod
    def union(cls, parts: Iterable[SimplicialComplex]) -> SimplicialComplex:
        """Union inside a common vertex set; shared labels are identified."""
        parts = list(parts)
        return cls(
            itertools.chain.from_iterable(p.vertices for p in parts),
            itertools.chain.from_iterable(p.facets for p in parts),
        )


class SimplicialMap:
    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, mapping: Mapping[Vertex, Vertex]):
        if set(mapping) != set(source.vertices):
            raise ValueError("vertex map must be defined exactly on the source vertices")
        for f in source.facets:
            if {mapping[v] for v in f} not in target:
                raise ValueError(f"image of facet {set(f)} is not a simplex of the target")
        self.source, self.target = source, target
        self.mapping = dict(mapping)

    def push(self, simplex: Simplex) -> tuple[int, Simplex] | None:
        """Image of an oriented simplex as (sign, sorted simplex), or None if degenerate."""
        img = [self.mapping[v] for v in simplex]
        if len(set(img)) < len(img):
            return None
        order = sorted(range(len(img)), key=lambda i: _key(img[i]))
        return _perm_sign(order), tuple(img[i] for i in order)

    def then(self, other: SimplicialMap) -> SimplicialMap:
        return SimplicialMap(self.source, other.target, {v: other.mapping[w] for v, w in self.mapping.items()})


def _perm_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def collapse(source: SimplicialComplex, target: SimplicialComplex) -> SimplicialMap:
    """Constant map onto the single vertex of a point."""
    (p,) = target.vertices
    return SimplicialMap(source, target, {v: p for v in source.vertices})


class ComplexDiagram:
    """Covariant diagram of complexes on a poset, given on covering pairs."""

    def __init__(
        self,
        index: FinitePoset,
        objects: Mapping[object, SimplicialComplex],
        arrows: Mapping[tuple[object, object], SimplicialMap],
    ) -> None:
        self.index = index
        self.objects = dict(objects)
        covers = set(hasse_edges(index))
        if set(arrows) != covers:
            raise ValueError("arrows must be given on exactly the covering pairs")
        for (x, y), f in arrows.items():
            if f.source is not self.objects[x] or f.target is not self.objects[y]:
                raise ValueError(f"arrow {x} -> {y} has the wrong source or target")
        self.arrows = dict(arrows)
        self._maps = self._compose_all()

    def _compose_all(self) -> dict[tuple[object, object], SimplicialMap]:
        # compose along every saturated path; all paths must agree on vertices
        out: dict[tuple[object, object], SimplicialMap] = {}
        succ: dict[object, list[object]] = {}
        for x, y in self.arrows:
            succ.setdefault(x, []).append(y)

        def walk(start: object, node: object, f: SimplicialMap) -> None:
            for y in succ.get(node, []):
                g = f.then(self.arrows[(node, y)])
                prev = out.get((start, y))
                if prev is not None and prev.mapping != g.mapping:
                    raise ValueError(f"diagram does not commute between {start} and {y}")
                out[(start, y)] = g
                walk(start, y, g)

        for x in self.index:
            walk(x, x, SimplicialMap(self.objects[x], self.objects[x], {v: v for v in self.objects[x].vertices}))
        return out

    def map(self, x: object, y: object) -> SimplicialMap:
        return self._maps[(x, y)]


# -- linear algebra over Q ------------------------------------------------------


def rank_q(columns: Sequence[Mapping[int, int]], nrows: int) -> int:
    """Rank over Q of a sparse matrix given by columns, by exact elimination."""
    pivots: dict[int, dict[int, Fraction]] = {}
    rank = 0
    for col in columns:
        v = {r: Fraction(c) for r, c in col.items() if c}
        while v:
            lead = min(v)
            if lead not in pivots:
                pivots[lead] = v
                rank += 1
                break
            p = pivots[lead]
            factor = v[lead] / p[lead]
            for r, c in p.items():
                nv = v.get(r, 0) - factor * c
                if nv:
                    v[r] = nv
                else:
                    v.pop(r, None)
    return rank


@dataclass
class ChainComplex:
    """Boundary maps in sparse column form: boundaries[m][j] is the boundary of generator j of degree m."""

    dims: list[int]
    boundaries: list[list[dict[int, int]]]

    def betti(self) -> tuple[int, ...]:
        ranks = [rank_q(self.boundaries[m], self.dims[m - 1] if m else 0) for m in range(len(self.dims))]
        ranks.append(0)
        return tuple(self.dims[m] - ranks[m] - ranks[m + 1] for m in range(len(self.dims)))

    def euler_characteristic(self) -> int:
        return sum((-1) ** m * d for m, d in enumerate(self.dims))

    def check_square_zero(self) -> None:
        for m in range(2, len(self.dims)):
            for j, col in enumerate(self.boundaries[m]):
                acc: dict[int, int] = {}
                for i, c in col.items():
                    for r, e in self.boundaries[m - 1][i].items():
                        acc[r] = acc.get(r, 0) + c * e
                if any(acc.values()):
                    raise ArithmeticError(f"differential does not square to zero at degree {m}, generator {j}")


def _simplicial_boundary(s: Simplex) -> list[tuple[int, Simplex]]:
    if len(s) == 1:
        return []
    return [((-1) ** i, s[:i] + s[i + 1 :]) for i in range(len(s))]


def simplicial_chain_complex(c: SimplicialComplex) -> ChainComplex:
    gens = [c.simplices(k) for k in range(c.dim + 1)]
    index = [{s: j for j, s in enumerate(g)} for g in gens]
    bounds = []
    for k, g in enumerate(gens):
        cols = []
        for s in g:
            cols.append({index[k - 1][f]: e for e, f in _simplicial_boundary(s)} if k else {})
        bounds.append(cols)
    return ChainComplex([len(g) for g in gens], bounds)


def betti(c: SimplicialComplex) -> tuple[int, ...]:
    """Rational Betti numbers b_0, ..., b_dim; the empty complex gives ()."""
    return simplicial_chain_complex(c).betti()


def hocolim_chain_complex(d: ComplexDiagram) -> ChainComplex:
    chains = [tuple(ch) for ch in strict_chains(d.index)]
    top = max((len(ch) - 1 + d.objects[ch[0]].dim for ch in chains), default=-1)
    gens: list[list[tuple[tuple, Simplex]]] = [[] for _ in range(top + 1)]
    for ch in chains:
        k = len(ch) - 1
        obj = d.objects[ch[0]]
        for j in range(obj.dim + 1):
            for s in obj.simplices(j):
                gens[k + j].append((ch, s))
    total = sum(len(g) for g in gens)
    if total > MAX_TOTAL_GENERATORS:
        raise ValueError(f"total complex has {total} generators, more than {MAX_TOTAL_GENERATORS}")
    index = [{g: j for j, g in enumerate(level)} for level in gens]

    bounds: list[list[dict[int, int]]] = []
    for m, level in enumerate(gens):
        cols = []
        for ch, s in level:
            col: dict[int, int] = {}

            def add(key: tuple[tuple, Simplex], coeff: int) -> None:
                j = index[m - 1][key]
                col[j] = col.get(j, 0) + coeff
                if not col[j]:
                    del col[j]

            k = len(ch) - 1
            if k:
                pushed = d.map(ch[0], ch[1]).push(s)
                if pushed is not None:
                    sign, t = pushed
                    add((ch[1:], t), sign)
                for i in range(1, k + 1):
                    add((ch[:i] + ch[i + 1 :], s), (-1) ** i)
            for e, f in _simplicial_boundary(s):
                add((ch, f), (-1) ** k * e)
            cols.append(col)
        bounds.append(cols)
    cx = ChainComplex([len(g) for g in gens], bounds)
    cx.check_square_zero()
    return cx


def hocolim_euler_from_chains(d: ComplexDiagram) -> int:
    """Sum over strict chains of (-1)^k chi(F(x0)), via the chain weights."""
    weights = chain_weights(d.index)
    return sum(g * d.objects[x].euler_characteristic() for x, g in zip(d.index.elements, weights))


# -- the worked examples ----------------------------------------------------------


def _sphere(tag: str, shared: Vertex | None = None) -> SimplicialComplex:
    labels = [shared if shared is not None else f"{tag}0"] + [f"{tag}{i}" for i in (1, 2, 3)]
    return SimplicialComplex.sphere2(labels)


def _onto(source: SimplicialComplex, target: SimplicialComplex) -> SimplicialMap:
    # sphere-to-sphere inclusion matching vertices in sorted order
    return SimplicialMap(source, target, dict(zip(_sorted(source.vertices), _sorted(target.vertices))))


def gl2_zero_diagram() -> ComplexDiagram:
    """Rank-1 Tw: the P^1 over [G>=B] maps identically to [B>=B] and collapses to [G>=G]."""
    tw = tw_poset(2)
    by_name = {str(c): c for c in tw}
    gb, bb, gg = by_name["[G>=B]"], by_name["[B>=B]"], by_name["[G>=G]"]
    s_gb, s_bb, pt = _sphere("a"), _sphere("b"), SimplicialComplex.point()
    objects = {gb: s_gb, bb: s_bb, gg: pt}
    arrows = {(gb, bb): _onto(s_gb, s_bb), (gb, gg): collapse(s_gb, pt)}
    return ComplexDiagram(tw, objects, arrows)


def gl3_subregular_diagram() -> ComplexDiagram:
    """Rank-2 Tw: empty over [G>=.], points over [Pi>=Pi], P^1 over [Pi>=B], P^1 v P^1 over [B>=B]."""
    tw = tw_poset(3)
    objects: dict[object, SimplicialComplex] = {}
    wedge_parts = {1: _sphere("u", shared="w"), 2: _sphere("v", shared="w")}
    wedge = SimplicialComplex.union(wedge_parts.values())
    for c in tw:
        if not c.P.is_proper:
            objects[c] = SimplicialComplex.empty()
        elif not c.P.J:
            objects[c] = wedge
        elif c.P == c.Q:
            objects[c] = SimplicialComplex.point(f"pt{c.P}")
        else:
            (i,) = tuple(c.P)
            objects[c] = _sphere(f"s{i}")
    arrows = {}
    for x, y in hasse_edges(tw):
        src, dst = objects[x], objects[y]
        if not src.vertices:
            arrows[(x, y)] = SimplicialMap(src, dst, {})
        elif len(dst.vertices) == 1:
            arrows[(x, y)] = collapse(src, dst)
        else:
            (i,) = tuple(x.P)
            part = wedge_parts[i]
            arrows[(x, y)] = SimplicialMap(src, dst, dict(zip(_sorted(src.vertices), _sorted(part.vertices))))
    return ComplexDiagram(tw, objects, arrows)


@dataclass
class HomologyExample:
    name: str
    betti: tuple[int, ...]
    euler: int
    virtual_count_at_1: int

    @property
    def contractible(self) -> bool:
        return bool(self.betti) and self.betti[0] == 1 and not any(self.betti[1:])

    @property
    def euler_matches(self) -> bool:
        return self.euler == self.virtual_count_at_1


def verify_worked_examples(primes: Sequence[int] = (2, 3, 5, 7)) -> list[HomologyExample]:
    """Homology of the two worked hocolim models, cross-checked against the glued counts at q = 1."""
    from .glue import glued_springer_check
    from .nilpotent import JordanType

    out = []
    for name, diagram, n, lam in (
        ("GL2 A=0", gl2_zero_diagram(), 2, JordanType((1, 1))),
        ("GL3 subregular", gl3_subregular_diagram(), 3, JordanType((2, 1))),
    ):
        cx = hocolim_chain_complex(diagram)
        chi = cx.euler_characteristic()
        if chi != hocolim_euler_from_chains(diagram):
            raise ArithmeticError(f"{name}: Euler characteristic disagrees with the chain sum")
        count = glued_springer_check(n, lam, primes).polynomial(1)
        out.append(HomologyExample(name, cx.betti(), chi, count))
    return out
