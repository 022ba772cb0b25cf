"""Polygon combinatorics: even dissections of a 2N-gon, cyclic ratios and term templates.

Vertices are labelled 1..2N in cyclic order and double as variable indices.
A cell's argument is the cyclic ratio of its vertices read in polygon order
starting at the cell's anchor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import BadIndexList, DecorationMismatch, InfeasibleMultiset, NoQuadrangulation
from .mpl import Expression, FunctionTerm
from .poly import MultiPoly
from .ratfunc import RatFunc

SYMMETRIZE = ("none", "cyclic", "signed")


def cyclic_ratio(indices, n):
    """(-1)^m (x_i1 - x_i2)(x_i3 - x_i4)... / ((x_i2 - x_i3)...(x_i2m - x_i1))."""
    idx = list(indices)
    if len(idx) < 4 or len(idx) % 2 or len(set(idx)) != len(idx) or any(not 1 <= i <= n for i in idx):
        raise BadIndexList(f"need an even number >= 4 of distinct indices in 1..{n}, got {idx}")
    m = len(idx) // 2
    num = MultiPoly.const(n, (-1) ** m)
    den = MultiPoly.const(n, 1)
    for k in range(0, 2 * m, 2):
        num = num * MultiPoly.diff(n, idx[k], idx[k + 1])
        den = den * MultiPoly.diff(n, idx[k + 1], idx[(k + 2) % (2 * m)])
    return RatFunc(num, den)


def fuss_catalan(m):
    """Number of quadrangulations of a (2m+2)-gon."""
    return comb(3 * m, m) // (2 * m + 1)


# -- dissections ------------------------------------------------------------------


@dataclass(frozen=True)
class Dissection:
    size: int
    diagonals: frozenset

    @property
    def cells(self):
        return cells_of(tuple(range(1, self.size + 1)), self.diagonals)

    def shifted(self, j):
        return Dissection(self.size, frozenset(_norm_pair(_shift(a, j, self.size), _shift(b, j, self.size)) for a, b in self.diagonals))

    def __str__(self):
        return " ".join(f"{a}-{b}" for a, b in sorted(self.diagonals)) or "(none)"


def _norm_pair(a, b):
    return (a, b) if a < b else (b, a)


def _shift(v, j, n):
    return (v - 1 + j) % n + 1


def cells_of(poly, diagonals):
    """Split the polygon (cyclic vertex tuple) along the diagonals into cells."""
    pos = {v: i for i, v in enumerate(poly)}
    for a, b in sorted(diagonals):
        if a in pos and b in pos:
            i, j = sorted((pos[a], pos[b]))
            if j - i > 1 and not (i == 0 and j == len(poly) - 1):
                left = poly[i:j + 1]
                right = poly[j:] + poly[:i + 1]
                rest = diagonals - {(a, b)}
                return cells_of(left, rest) + cells_of(right, rest)
    return [tuple(sorted(poly, key=lambda v: pos[v]))]


def _dissect(verts, sizes):
    """All dissections of the convex polygon ``verts`` into cells with sizes in ``sizes``.

    Yields sets of diagonals.  The edge (verts[0], verts[-1]) lies in exactly one
    cell; choose that cell's remaining vertices and recurse on the pockets.
    """
    n = len(verts)
    if n < 3:
        yield frozenset()
        return
    for k in sizes:
        if k > n:
            continue
        inner = k - 2
        for picks in itertools.combinations(range(1, n - 1), inner):
            corners = (0,) + picks + (n - 1,)
            pockets = []
            ok = True
            for a, b in zip(corners, corners[1:]):
                if b - a > 1:
                    if b - a + 1 < min(sizes):
                        ok = False
                        break
                    pockets.append((a, b))
            if not ok:
                continue
            base = frozenset(_norm_pair(verts[a], verts[b]) for a, b in pockets)
            subs = [list(_dissect(verts[a:b + 1], sizes)) for a, b in pockets]
            for combo in itertools.product(*subs):
                yield base.union(*combo)


def enumerate_even_dissections(size, cell_sizes=None, multiset=None):
    """Non-crossing dissections of the ``size``-gon into even cells.

    ``multiset`` fixes the exact cell sizes (e.g. (4, 4, 4)); ``cell_sizes`` only
    restricts which sizes may occur.
    """
    if size < 4 or size % 2:
        raise InfeasibleMultiset(f"polygon size {size} must be even and >= 4")
    if multiset is not None:
        ms = sorted(multiset)
        if any(c < 4 or c % 2 for c in ms) or sum(c - 2 for c in ms) != size - 2:
            raise InfeasibleMultiset(f"cells {ms} cannot tile a {size}-gon")
        allowed = sorted(set(ms))
    else:
        allowed = sorted(cell_sizes) if cell_sizes else list(range(4, size + 1, 2))
    out = []
    for diags in _dissect(tuple(range(1, size + 1)), allowed):
        d = Dissection(size, diags)
        if multiset is not None and sorted(len(c) for c in d.cells) != sorted(multiset):
            continue
        out.append(d)
    out.sort(key=lambda d: sorted(d.diagonals))
    return out


def enumerate_quadrangulations(size):
    if size < 4 or size % 2:
        raise NoQuadrangulation(f"a {size}-gon has no quadrangulation")
    return enumerate_even_dissections(size, cell_sizes=(4,))


def _dissect_subpolygon(verts, ncells, allowed):
    """Dissections of the sub-polygon on ``verts`` into exactly ``ncells`` cells."""
    for diags in _dissect(tuple(verts), allowed):
        cells = cells_of(tuple(verts), diags)
        if len(cells) == ncells:
            yield cells


# -- templates --------------------------------------------------------------------


@dataclass(frozen=True)
class DecoratedCell:
    vertices: tuple
    anchor: int
    order: int

    @property
    def pie(self):
        """The alternating vertex class containing the anchor."""
        k = self.vertices.index(self.anchor)
        return tuple(self.vertices[(k + 2 * i) % len(self.vertices)] for i in range(len(self.vertices) // 2))

    def reading(self):
        k = self.vertices.index(self.anchor)
        return self.vertices[k:] + self.vertices[:k]


@dataclass(frozen=True)
class TermTemplate:
    coeff: Fraction
    kind: str
    comp: tuple
    cells: tuple
    symmetrize: str = "cyclic"
    polygon: int = 8

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "comp", tuple(self.comp))
        cells = tuple(sorted(self.cells, key=lambda c: c.order))
        object.__setattr__(self, "cells", cells)
        if self.symmetrize not in SYMMETRIZE:
            raise ValueError(f"symmetrize must be one of {SYMMETRIZE}")
        if len(cells) != len(self.comp):
            raise DecorationMismatch(f"{len(cells)} cells for a depth-{len(self.comp)} function")
        if [c.order for c in cells] != list(range(1, len(cells) + 1)):
            raise DecorationMismatch("cell orders must be 1..d")
        for c in cells:
            if c.anchor not in c.vertices:
                raise DecorationMismatch(f"anchor {c.anchor} is not a vertex of cell {c.vertices}")
            if len(c.vertices) < 4 or len(c.vertices) % 2:
                raise DecorationMismatch(f"cell {c.vertices} is not an even polygon")
            if any(not 1 <= v <= self.polygon for v in c.vertices):
                raise DecorationMismatch(f"cell {c.vertices} does not fit a {self.polygon}-gon")

    def shifted(self, j):
        n = self.polygon
        cells = []
        for c in self.cells:
            vs = tuple(_shift(v, j, n) for v in c.vertices)
            cells.append(DecoratedCell(_cyclic_sorted(vs), _shift(c.anchor, j, n), c.order))
        return TermTemplate(self.coeff, self.kind, self.comp, tuple(cells), self.symmetrize, n)

    def key(self):
        return (self.kind, self.comp, tuple((c.vertices, c.anchor) for c in self.cells))

    def base_term(self, nvars=None):
        n = nvars or self.polygon
        args = tuple(cyclic_ratio(c.reading(), n) for c in self.cells)
        return FunctionTerm(self.coeff, self.kind, self.comp, args)


def fan_template(size=8, comp=(3, 1, 1), coeff=-4, kind="IN", symmetrize="cyclic"):
    """Quadrangulation fanning out from vertex 1, every cell anchored at 1.

    Cell k has vertices (1, 2k, 2k+1, 2k+2), so the arguments of the orbit's
    j-th term are [x_{j+1}, x_{j+2k}, x_{j+2k+1}, x_{j+2k+2}].
    """
    d = len(comp)
    if size != 2 * d + 2:
        raise DecorationMismatch(f"a depth-{d} fan needs a {2 * d + 2}-gon, not {size}")
    cells = tuple(DecoratedCell((1, 2 * k, 2 * k + 1, 2 * k + 2), 1, k) for k in range(1, d + 1))
    return TermTemplate(coeff, kind, comp, cells, symmetrize, size)


def _cyclic_sorted(vs):
    """Vertices in polygon order starting from the smallest label."""
    return tuple(sorted(vs))


def instantiate(tpl, size=None):
    """Expand a template into its (signed) cyclic orbit over the polygon's labels."""
    n = size or tpl.polygon
    if n != tpl.polygon:
        raise DecorationMismatch(f"template is for a {tpl.polygon}-gon, not {n}")
    if tpl.symmetrize == "none":
        return Expression([tpl.base_term()])
    terms = []
    for j in range(1, n + 1):
        sign = (-1) ** j if tpl.symmetrize == "signed" else 1
        t = tpl.shifted(j).base_term()
        terms.append(t.with_coeff(t.coeff * sign))
    return merge_in_order(terms)


def merge_in_order(terms):
    """Merge repeated terms by adding coefficients, keeping first-occurrence order."""
    acc, proto = {}, {}
    for t in terms:
        k = t.key()
        acc[k] = acc.get(k, 0) + t.coeff
        proto.setdefault(k, t)
    return Expression([proto[k].with_coeff(c) for k, c in acc.items() if c])


def canonical_rotation(tpl):
    n = tpl.polygon
    return min((tpl.shifted(j) for j in range(n)), key=lambda t: repr(t.key()))


def generate_ansatz(size, weight, comps, symmetrize="cyclic", kind="IN", cell_sizes=None):
    """Templates whose cells form a complete even polyangulation of a sub-polygon.

    Every anchor and every ordering of the cells is produced; templates are
    deduplicated up to rotation unless ``symmetrize`` is "none".
    """
    out = {}
    for comp in comps:
        comp = tuple(comp)
        if sum(comp) != weight:
            continue
        d = len(comp)
        allowed = sorted(cell_sizes) if cell_sizes else list(range(4, size + 1, 2))
        for s in range(4, size + 1, 2):
            if s - 2 < 2 * d or s - 2 > d * (max(allowed) - 2):
                continue
            for sub in itertools.combinations(range(1, size + 1), s):
                for cells in _dissect_subpolygon(sub, d, allowed):
                    for anchors in itertools.product(*cells):
                        for perm in itertools.permutations(range(d)):
                            dec = tuple(
                                DecoratedCell(_cyclic_sorted(cells[i]), anchors[i], perm[i] + 1) for i in range(d)
                            )
                            tpl = TermTemplate(1, kind, comp, dec, symmetrize, size)
                            if symmetrize != "none":
                                tpl = canonical_rotation(tpl)
                            out.setdefault(tpl.key(), tpl)
    return [out[k] for k in sorted(out, key=repr)]
