"""Integer-coded matrix spaces for vectorized exhaustive sweeps.

A matrix in F_q^{r x c} is coded by reading its row-major entries as the
digits of a base-q number, most significant first.  That code is also the
matrix's position in :func:`ffmat.mat_enumerate` order, so a numpy array
indexed by code is a lookup table over the whole space.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .budget import check_budget
from .ffmat import Field, Matrix, all_matrices


class MatrixSpace:
    def __init__(self, field: Field, rows: int, cols: int):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.length = rows * cols
        self.size = field.q**self.length
        check_budget(self.size, f"coded space of {rows}x{cols} matrices over GF({field.q})")
        self._weights = np.array([field.q ** (self.length - 1 - i) for i in range(self.length)], dtype=np.int64)
        self._digits: np.ndarray | None = None
        self._ranks: np.ndarray | None = None

    def code(self, m: Matrix) -> int:
        v = 0
        q = self.field.q
        for e in m.entries:
            v = v * q + e
        return v

    def matrix(self, code: int) -> Matrix:
        q = self.field.q
        ent = [0] * self.length
        for i in range(self.length - 1, -1, -1):
            ent[i] = code % q
            code //= q
        return Matrix(self.field, self.rows, self.cols, tuple(ent))

    @property
    def digits(self) -> np.ndarray:
        if self._digits is None:
            codes = np.arange(self.size, dtype=np.int64)
            self._digits = ((codes[:, None] // self._weights[None, :]) % self.field.q).astype(np.int64)
        return self._digits

    @property
    def ranks(self) -> np.ndarray:
        if self._ranks is None:
            self._ranks = np.array([m.rank() for m in all_matrices(self.field, self.rows, self.cols)], dtype=np.int64)
        return self._ranks

    def codes_with_rank_at_most(self, t: int) -> np.ndarray:
        return np.flatnonzero(self.ranks <= t)

    def _combine(self, a: np.ndarray, b: np.ndarray, table: list[list[int]]) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        tab = np.asarray(table, dtype=np.int64)
        da = self.digits[a]
        db = self.digits[b]
        return tab[da, db] @ self._weights

    def add(self, a, b) -> np.ndarray:
        if self.field.q == 2:
            return np.bitwise_xor(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return self._combine(a, b, self.field.add)

    def sub(self, a, b) -> np.ndarray:
        if self.field.q == 2:
            return np.bitwise_xor(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return self._combine(a, b, self.field.sub)


@lru_cache(maxsize=None)
def matrix_space(field: Field, rows: int, cols: int) -> MatrixSpace:
    return MatrixSpace(field, rows, cols)


@lru_cache(maxsize=4096)
def left_multiplier(a: Matrix, cols: int) -> np.ndarray:
    """Array mapping the code of X (n x cols) to the code of A @ X."""
    matrix_space(a.field, a.cols, cols)  # budget check on the source space
    dst = matrix_space(a.field, a.rows, cols)
    return np.array([dst.code(a @ x) for x in all_matrices(a.field, a.cols, cols)], dtype=np.int64)
