"""Exact nullspaces and the linear space of algebraic Kaehler curvature tensors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Optional, Sequence

import numpy as np

from .curvature import CurvatureTensor, combination, model_tensor, validate_symmetries
from .linalg import Space

RationalMatrix = list[list[Fraction]]


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {c: v // g for c, v in row.items()}


def _integer_row(row) -> dict[int, int]:
    """Sparse integer multiple of a dense or sparse rational row."""
    items = row.items() if isinstance(row, dict) else enumerate(row)
    items = [(c, Fraction(v)) for c, v in items if v]
    if not items:
        return {}
    den = lcm(*(v.denominator for _, v in items))
    return _primitive({c: int(v * den) for c, v in items})


class Echelon:
    """Incremental reduced row echelon form over the integers.

    Rows are sparse ``{column: int}`` dicts kept primitive (content divided out)
    after every combination step, which keeps coefficient growth in check
    without ever forming fractions.  ``priority[c]`` ranks columns for pivot
    selection; the lowest-ranked column of a new row becomes its pivot.
    """

    def __init__(self, ncols: int, column_order: Optional[Sequence[int]] = None):
        self.ncols = ncols
        order = list(range(ncols)) if column_order is None else list(column_order)
        if sorted(order) != list(range(ncols)):
            raise ValueError("column_order must be a permutation of the columns")
        self.priority = {c: rank for rank, c in enumerate(order)}
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        row = dict(row)
        for p in [c for c in row if c in self.pivots]:
            a = row.get(p)
            if not a:
                continue
            prow = self.pivots[p]
            b = prow[p]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {c: v * fa for c, v in row.items()}
            for c, v in prow.items():
                w = new.get(c, 0) - v * fb
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            row = _primitive(new) if new else new
        return row

    def add(self, row) -> bool:
        """Insert a row; return True if it increased the rank."""
        row = self.reduce(_integer_row(row))
        if not row:
            return False
        p = min(row, key=self.priority.__getitem__)
        if row[p] < 0:
            row = {c: -v for c, v in row.items()}
        for q, qrow in self.pivots.items():
            a = qrow.get(p)
            if not a:
                continue
            b = row[p]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {c: v * fa for c, v in qrow.items()}
            for c, v in row.items():
                w = new.get(c, 0) - v * fb
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            self.pivots[q] = _primitive(new)
        self.pivots[p] = row
        return True

    def free_columns(self) -> list[int]:
        return sorted((c for c in range(self.ncols) if c not in self.pivots), key=self.priority.__getitem__)

    def nullspace(self) -> list[list[Fraction]]:
        basis = []
        for f in self.free_columns():
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for p, prow in self.pivots.items():
                a = prow.get(f)
                if a:
                    v[p] = Fraction(-a, prow[p])
            den = lcm(*(x.denominator for x in v if x))
            basis.append([x * den for x in v])
        return basis


def echelon(M, column_order=None, ncols=None) -> Echelon:
    if ncols is None:
        ncols = len(M[0]) if M else 0
    ech = Echelon(ncols, column_order)
    for row in M:
        ech.add(row)
    return ech


def rank(M: RationalMatrix, ncols: Optional[int] = None) -> int:
    return echelon(M, ncols=ncols).rank


def nullspace(M: RationalMatrix, ncols: Optional[int] = None, column_order=None) -> list[list[Fraction]]:
    """Exact basis of ``{v : M v = 0}``, one vector per free column, integer-scaled."""
    return echelon(M, column_order=column_order, ncols=ncols).nullspace()


# --- Kaehler curvature tensors -------------------------------------------------


def flat_index(n: int, i: int, j: int, k: int, l: int) -> int:
    return ((i * n + j) * n + k) * n + l


def kaehler_constraints(space: Space) -> list[dict[int, int]]:
    """One sparse row per index instance of the five symmetry identities."""
    n = space.dim
    J = [space.j_image(k) for k in range(n)]
    rows = []

    def emit(terms):
        row: dict[int, int] = {}
        for c, v in terms:
            row[c] = row.get(c, 0) + v
        row = {c: v for c, v in row.items() if v}
        if row:
            rows.append(row)

    for i, j, k, l in itertools.product(range(n), repeat=4):
        ix = flat_index(n, i, j, k, l)
        emit([(ix, 1), (flat_index(n, j, i, k, l), 1)])
        emit([(ix, 1), (flat_index(n, j, k, i, l), 1), (flat_index(n, k, i, j, l), 1)])
        emit([(ix, 1), (flat_index(n, i, j, l, k), 1)])
        (jk, sk), (jl, sl) = J[k], J[l]
        emit([(ix, 1), (flat_index(n, i, j, jk, jl), -sk * sl)])
        emit([(ix, 1), (flat_index(n, k, l, i, j), -1)])
    return rows


@dataclass
class TensorBasis:
    space: Space
    elements: list[CurvatureTensor]
    free_columns: list[int]

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def combine(self, coeffs) -> CurvatureTensor:
        return combination(self.space, coeffs, self.elements)

    def coordinate_matrix(self) -> np.ndarray:
        return np.array([T.flat() for T in self.elements], dtype=object)


def _basis_from(space: Space, ech: Echelon) -> TensorBasis:
    vecs = ech.nullspace()
    elements = [CurvatureTensor.from_flat(space, v) for v in vecs]
    return TensorBasis(space, elements, ech.free_columns())


def kaehler_echelon(space: Space, column_order=None, reverse_rows: bool = False) -> Echelon:
    rows = kaehler_constraints(space)
    if reverse_rows:
        rows = rows[::-1]
    return echelon(rows, column_order=column_order, ncols=space.dim**4)


@lru_cache(maxsize=None)
def kaehler_basis(space: Space) -> TensorBasis:
    """Exact basis of the algebraic Kaehler curvature tensors on ``space``."""
    return _basis_from(space, kaehler_echelon(space))


def kaehler_basis_reordered(space: Space) -> TensorBasis:
    """Same space computed with reversed pivot priority and row order."""
    order = list(range(space.dim**4))[::-1]
    return _basis_from(space, kaehler_echelon(space, column_order=order, reverse_rows=True))


def float_rank_oracle(space: Space) -> int:
    """Floating-point rank of the constraint matrix, used as an independent check."""
    rows = {tuple(sorted(r.items())) for r in kaehler_constraints(space)}
    M = np.zeros((len(rows), space.dim**4))
    for r, row in enumerate(rows):
        for c, v in row:
            M[r, c] = v
    return int(np.linalg.matrix_rank(M))


def coordinates(basis: TensorBasis, R: CurvatureTensor) -> Optional[list[Fraction]]:
    """Exact coordinates of ``R`` in ``basis``, or ``None`` when ``R`` is not in the span.

    Basis element ``k`` is the only one nonzero on free column ``free_columns[k]``,
    so coordinates are read off there and confirmed by reconstruction.
    """
    if R.space != basis.space:
        raise ValueError("tensor and basis live on different spaces")
    flat = R.flat()
    coeffs = []
    for B, col in zip(basis.elements, basis.free_columns):
        coeffs.append(flat[col] / B.flat()[col])
    if basis.combine(coeffs) != R:
        return None
    return coeffs


def model_coordinates(basis: TensorBasis) -> list[Fraction]:
    """Coordinates of ``pi1 + pi2`` (the model tensor with ``mu = 4``)."""
    coords = coordinates(basis, model_tensor(basis.space, 4))
    if coords is None:
        raise AssertionError("pi1 + pi2 is not in the Kaehler span")
    return coords


def span_contains(basis: TensorBasis, others: Sequence[CurvatureTensor]) -> bool:
    return all(coordinates(basis, T) is not None for T in others)


def check_basis(basis: TensorBasis) -> bool:
    """Every element is Kaehler and the elements are linearly independent."""
    if any(not validate_symmetries(B).passed for B in basis.elements):
        return False
    if not basis.elements:
        return True
    return rank([B.flat() for B in basis.elements]) == len(basis.elements)
