"""Exact sparse linear algebra over Q.

Vectors are dicts ``index -> rational``.  Coefficients are carried as
``gmpy2.mpq`` for speed; conversion from ``Fraction`` is exact.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Mapping

from gmpy2 import mpq

SparseVec = dict


def to_mpq(c) -> mpq:
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    return mpq(c)


class Echelon:
    """Incrementally maintained row echelon form.

    Each stored row is normalized so that its largest index (the pivot)
    has coefficient 1.
    """

    def __init__(self):
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        v = {k: to_mpq(c) for k, c in vec.items() if c}
        rows = self.rows
        heap = [-k for k in v if k in rows]
        heapq.heapify(heap)
        while heap:
            k = -heapq.heappop(heap)
            c = v.get(k)
            if not c:
                continue
            for j, a in rows[k].items():
                s = v.get(j, 0) - c * a
                if s:
                    if j not in v and j in rows and j != k:
                        heapq.heappush(heap, -j)
                    v[j] = s
                else:
                    v.pop(j, None)
        return v

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; returns False if it was already in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = max(v)
        inv = 1 / v[piv]
        self.rows[piv] = {k: c * inv for k, c in v.items()}
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def reduced_rows(self) -> dict[int, dict]:
        """Fully reduced echelon form (no pivot index appears off its own row)."""
        out: dict[int, dict] = {}
        for piv in sorted(self.rows):
            row = dict(self.rows[piv])
            for j in sorted((j for j in row if j != piv and j in out), reverse=True):
                c = row.get(j)
                if not c:
                    continue
                for k, a in out[j].items():
                    s = row.get(k, 0) - c * a
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
            out[piv] = row
        return out


def rank(vectors: Iterable[Mapping]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def nullspace(rows: Iterable[Mapping], unknowns: Iterable[int]) -> list[dict]:
    """Basis of ``{x : <row, x> = 0 for every row}`` over the given unknowns."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    red = ech.reduced_rows()
    basis = []
    for free in sorted(set(unknowns) - set(red)):
        x = {free: mpq(1)}
        for piv, row in red.items():
            c = row.get(free)
            if c:
                x[piv] = -c
        basis.append(x)
    return basis


def transpose(columns: Mapping[int, Mapping]) -> dict[int, dict]:
    rows: dict[int, dict] = {}
    for c, col in columns.items():
        for r, a in col.items():
            rows.setdefault(r, {})[c] = a
    return rows
