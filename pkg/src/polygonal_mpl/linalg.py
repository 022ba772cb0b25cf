"""Exact sparse linear algebra over Q.

Rows are dicts ``column -> value``.  Elimination runs on primitive integer
rows (fraction-free: ``r <- p[c]*r - r[c]*p`` followed by removal of the row
content), which keeps coefficient growth in check without modular machinery.
Rows are fed shortest first, a cheap stand-in for Markowitz pivoting.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce


@dataclass
class SparseMatQ:
    rows: list = field(default_factory=list)
    ncols: int = 0

    def __post_init__(self):
        clean = []
        for r in self.rows:
            d = {}
            for c, v in r.items():
                if not 0 <= c < self.ncols:
                    raise IndexError(f"column {c} outside 0..{self.ncols - 1}")
                if v:
                    d[c] = Fraction(v)
            clean.append(d)
        self.rows = clean

    @classmethod
    def from_dense(cls, rows):
        ncols = len(rows[0]) if rows else 0
        return cls([{j: v for j, v in enumerate(r) if v} for r in rows], ncols)

    @property
    def nrows(self):
        return len(self.rows)

    def apply(self, vec):
        return [sum((v * vec[c] for c, v in r.items()), Fraction(0)) for r in self.rows]

    def to_csv(self):
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["row", "col", "value"])
        for i, r in enumerate(self.rows):
            for c in sorted(r):
                w.writerow([i, c, str(r[c])])
        return out.getvalue()

    @classmethod
    def from_csv(cls, text, nrows=None, ncols=None):
        rd = csv.reader(io.StringIO(text))
        header = next(rd, None)
        if header != ["row", "col", "value"]:
            raise ValueError("expected a 'row,col,value' header")
        trip = [(int(a), int(b), Fraction(c)) for a, b, c in rd]
        nr = nrows if nrows is not None else (max((t[0] for t in trip), default=-1) + 1)
        nc = ncols if ncols is not None else (max((t[1] for t in trip), default=-1) + 1)
        rows = [dict() for _ in range(nr)]
        for i, j, v in trip:
            rows[i][j] = v
        return cls(rows, nc)


@dataclass
class KernelBasis:
    vectors: list

    def __len__(self):
        return len(self.vectors)


def _primitive(row):
    """Scale a Fraction/int row to coprime integers with positive leading entry."""
    lcm = 1
    for v in row.values():
        d = Fraction(v).denominator
        lcm = lcm * d // math.gcd(lcm, d)
    ints = {c: int(Fraction(v) * lcm) for c, v in row.items()}
    g = reduce(math.gcd, ints.values(), 0)
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def _echelon(rows):
    """Incremental fraction-free echelon form.  Returns {pivot_col: int_row}."""
    pivots = {}
    for r in sorted((r for r in rows if r), key=len):
        r = _primitive(r)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            a, b = p[c], r[c]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            new = {k: a * v for k, v in r.items()}
            for k, v in p.items():
                s = new.get(k, 0) - b * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            r = _primitive(new) if new else new
    return pivots


def _reduce_back(pivots):
    cols = sorted(pivots)
    for c in reversed(cols):
        p = pivots[c]
        for c2 in cols:
            if c2 >= c:
                break
            r = pivots[c2]
            if c in r:
                a, b = p[c], r[c]
                g = math.gcd(a, b)
                a, b = a // g, b // g
                new = {k: a * v for k, v in r.items()}
                for k, v in p.items():
                    s = new.get(k, 0) - b * v
                    if s:
                        new[k] = s
                    else:
                        new.pop(k, None)
                pivots[c2] = _primitive(new)
    out = {}
    for c in cols:
        r = pivots[c]
        lead = r[c]
        out[c] = {k: Fraction(v, lead) for k, v in r.items()}
    return out


def rref(m):
    """Reduced row-echelon form over Q.  Returns (SparseMatQ, rank)."""
    piv = _reduce_back(_echelon(m.rows))
    rows = [piv[c] for c in sorted(piv)]
    return SparseMatQ(rows, m.ncols), len(rows)


def rank(m):
    return len(_echelon(m.rows))


def kernel(m):
    """Basis of {v : M v = 0}, one vector per non-pivot column, in column order."""
    piv = _reduce_back(_echelon(m.rows))
    free = [c for c in range(m.ncols) if c not in piv]
    vecs = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for c, r in piv.items():
            if f in r:
                v[c] = -r[f]
        vecs.append(v)
    return KernelBasis(vecs)


def solve_affine(m, rhs):
    """One solution x of M x = rhs (free variables zero), or None if inconsistent."""
    n = m.ncols
    aug = []
    for r, b in zip(m.rows, rhs):
        row = dict(r)
        if b:
            row[n] = Fraction(b)
        aug.append(row)
    piv = _reduce_back(_echelon(aug))
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for c, r in piv.items():
        x[c] = r.get(n, Fraction(0))
    return x


class Reducer:
    """Incremental echelon basis used to reduce vectors modulo a row space.

    Pivot rows are primitive integer rows; a vector being reduced is carried as
    an integer row together with the rational factor relating it to the input.
    """

    def __init__(self):
        self.pivots = {}

    def add(self, row):
        r = self._reduce_int(row)
        if r is None:
            return False
        ints, _ = r
        c = min(ints)
        if ints[c] < 0:
            ints = {k: -v for k, v in ints.items()}
        self.pivots[c] = ints
        return True

    def reduce(self, row):
        r = self._reduce_int(row)
        if r is None:
            return {}
        ints, scale = r
        return {k: Fraction(v) / scale for k, v in ints.items()}

    def _reduce_int(self, row):
        row = {k: v for k, v in row.items() if v}
        if not row:
            return None
        r = _primitive(row)
        k0 = next(iter(row))
        scale = Fraction(r[k0]) / Fraction(row[k0])
        num, den = 1, 1
        heap = [k for k in r if k in self.pivots]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            if c not in r:
                continue
            p = self.pivots[c]
            g = math.gcd(p[c], r[c])
            a, b = p[c] // g, r[c] // g
            if a != 1:
                r = {k: a * v for k, v in r.items()}
                num *= a
            for k, v in p.items():
                t = r.get(k, 0) - b * v
                if t:
                    if k not in r and k in self.pivots:
                        heapq.heappush(heap, k)
                    r[k] = t
                else:
                    r.pop(k, None)
            if r and a != 1:
                g = reduce(math.gcd, r.values(), 0)
                if g > 1:
                    r = {k: v // g for k, v in r.items()}
                    den *= g
        return (r, scale * num / den) if r else None
