"""Exact row-echelon utilities over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class Echelon:
    """Incrementally maintained reduced row-echelon basis of a row space."""

    def __init__(self, ncols: int, rows: Iterable[Sequence] = ()):
        self.ncols = ncols
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []
        for r in rows:
            self.add(r)

    def __len__(self):
        return len(self.rows)

    def reduce(self, row: Sequence) -> list[Fraction]:
        v = [Fraction(x) for x in row]
        for r, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                for k in range(self.ncols):
                    if r[k]:
                        v[k] -= f * r[k]
        return v

    def contains(self, row: Sequence) -> bool:
        return not any(self.reduce(row))

    def add(self, row: Sequence) -> bool:
        """Add ``row``; returns False when it was already in the span."""
        v = self.reduce(row)
        c = next((k for k, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = 1 / v[c]
        v = [x * inv for x in v]
        for r in self.rows:
            f = r[c]
            if f:
                for k in range(self.ncols):
                    if v[k]:
                        r[k] -= f * v[k]
        self.rows.append(v)
        self.pivots.append(c)
        return True


def rank(rows: Iterable[Sequence], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return len(Echelon(ncols if ncols is not None else len(rows[0]), rows))


def nullspace(rows: Iterable[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : r . x = 0 for every row r}``."""
    ech = Echelon(ncols, rows)
    free = [k for k in range(ncols) if k not in ech.pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, c in zip(ech.rows, ech.pivots):
            x[c] = -r[f]
        basis.append(x)
    return basis


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))
