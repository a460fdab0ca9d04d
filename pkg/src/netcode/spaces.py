"""Subspaces of F_q^m in canonical reduced row-echelon form."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from .budget import check_budget
from .errors import AmbientMismatch, ParseError
from .ffmat import Field, Matrix, format_matrix, left_kernel, parse_matrix_list, vstack


@dataclass(frozen=True, order=False)
class Subspace:
    """A subspace stored as its RREF basis with no zero rows.

    Because the basis is canonical, dataclass equality and hashing coincide
    with equality of subspaces.
    """

    field: Field
    ambient: int
    basis: Matrix

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, Matrix.zeros(field, 0, ambient))

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, Matrix.identity(field, ambient))

    @classmethod
    def span(cls, field: Field, vectors: Sequence[Sequence[int]], ambient: int | None = None) -> "Subspace":
        if ambient is None:
            ambient = len(vectors[0])
        return row_space(Matrix.from_rows(field, vectors, ambient))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def sort_key(self) -> tuple:
        return (self.dim, self.basis.entries)

    def contains(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return space_sum(self, other).dim == self.dim

    def contains_vector(self, v: Sequence[int]) -> bool:
        return self.contains(Subspace.span(self.field, [v], self.ambient))

    def __str__(self) -> str:
        return format_matrix(self.basis)


def _check_ambient(u: Subspace, v: Subspace) -> None:
    if u.ambient != v.ambient or u.field != v.field:
        raise AmbientMismatch(
            f"F_{u.field.q}^{u.ambient} vs F_{v.field.q}^{v.ambient}"
        )


def row_space(x: Matrix) -> Subspace:
    return Subspace(x.field, x.cols, x.row_basis())


def space_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    if v.dim == 0:
        return u
    if u.dim == 0:
        return v
    return row_space(vstack(u.basis, v.basis))


def space_intersect(u: Subspace, v: Subspace) -> Subspace:
    """U ∩ V from the left kernel of the stacked bases.

    A kernel vector ``(a, b)`` of ``[U; V]`` satisfies ``a U = -b V``; the
    vectors ``a U`` span the intersection.
    """
    _check_ambient(u, v)
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.field, u.ambient)
    k = left_kernel(vstack(u.basis, v.basis))
    if k.rows == 0:
        return Subspace.zero(u.field, u.ambient)
    return row_space(k.take_cols(range(u.dim)) @ u.basis)


def intersection_dim(u: Subspace, v: Subspace) -> int:
    """dim(U ∩ V) via the modular law, cheaper than building the intersection."""
    return u.dim + v.dim - space_sum(u, v).dim


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^m."""
    if k < 0 or k > m:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def space_count(m: int, q: int, dims: Sequence[int] | None = None) -> int:
    dims = range(m + 1) if dims is None else dims
    return sum(gaussian_binomial(m, k, q) for k in dims)


def space_enumerate(field: Field, m: int, dims: int | Sequence[int] | None = None) -> Iterator[Subspace]:
    """Every subspace of F_q^m, by dimension, then pivot set, then free entries."""
    if isinstance(dims, int):
        dims = [dims]
    dims = list(range(m + 1)) if dims is None else sorted(set(dims))
    check_budget(space_count(m, field.q, dims), f"subspaces of F_{field.q}^{m}")
    return _enumerate(field, m, dims)


def _enumerate(field: Field, m: int, dims: Sequence[int]) -> Iterator[Subspace]:
    q = field.q
    for k in dims:
        if k < 0 or k > m:
            continue
        for pivots in itertools.combinations(range(m), k):
            pset = set(pivots)
            free = [(r, j) for r, p in enumerate(pivots) for j in range(p + 1, m) if j not in pset]
            base = [0] * (k * m)
            for r, p in enumerate(pivots):
                base[r * m + p] = 1
            for vals in itertools.product(range(q), repeat=len(free)):
                ent = list(base)
                for (r, j), v in zip(free, vals):
                    ent[r * m + j] = v
                yield Subspace(field, m, Matrix(field, k, m, tuple(ent)))


def format_subspace(u: Subspace) -> str:
    return format_matrix(u.basis)


def parse_subspace(text: str) -> Subspace:
    mats = parse_matrix_list(text)
    if len(mats) != 1:
        raise ParseError(f"expected one subspace basis, found {len(mats)}")
    return row_space(mats[0])


def read_subspace(path: str | Path) -> Subspace:
    return parse_subspace(Path(path).read_text())
