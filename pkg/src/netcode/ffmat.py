"""Finite-field scalars and dense matrices over GF(q) for small prime powers.

Field elements are integer codes in ``[0, q)``: the code of the residue
``a_0 + a_1 x + ... + a_{e-1} x^{e-1}`` is ``sum(a_i * p**i)``.  Arithmetic
goes through precomputed tables (addition digit-wise, multiplication through
log/antilog tables of a primitive element), which is what keeps the
exhaustive sweeps fast.

Matrices are immutable row-major tuples of codes.  Matrices with zero rows
or zero columns are ordinary values of rank 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .budget import check_budget
from .errors import (
    DivisionByZero,
    FieldMismatch,
    FieldTooLarge,
    NonPrimeCharacteristic,
    ParseError,
    ReducibleModulus,
    ShapeMismatch,
    SplitOutOfRange,
)

DEFAULT_MAX_ORDER = 16


# ---------------------------------------------------------------------------
# Polynomials over GF(p), coefficient lists low -> high
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = _trim(list(m))
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        coef = (a[-1] * inv_lead) % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _poly_rem(prod, m, p)


def _monic_polys(p: int, degree: int) -> Iterator[tuple[int, ...]]:
    """Monic polynomials of exact degree, in increasing base-p code order."""
    for low in itertools.product(range(p), repeat=degree):
        yield tuple(reversed(low)) + (1,)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    e = len(modulus) - 1
    if e < 1 or modulus[-1] % p == 0:
        return False
    if e == 1:
        return True
    for deg in range(1, e // 2 + 1):
        for g in _monic_polys(p, deg):
            if not _poly_rem(modulus, g, p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    for cand in _monic_polys(p, e):
        if is_irreducible(cand, p):
            return cand
    raise ReducibleModulus(f"no irreducible polynomial of degree {e} over GF({p})")


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------


class Field:
    """GF(p^e) with an explicit monic irreducible modulus.

    Build instances with :func:`field_make`, which validates the inputs and
    returns one shared object per distinct ``(p, e, modulus)``.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.modulus = modulus
        self.q = p**e
        self._hash = hash(("GF", p, e, modulus))
        self._build_tables()

    def _digits(self, v: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(v % self.p)
            v //= self.p
        return out

    def _code(self, digits: Sequence[int]) -> int:
        v = 0
        for c in reversed(list(digits)):
            v = v * self.p + c
        return v

    def poly_mul(self, a: int, b: int) -> int:
        """Multiply two codes by polynomial arithmetic (slow reference path)."""
        prod = _poly_mulmod(self._digits(a), self._digits(b), self.modulus, self.p)
        return self._code(prod + [0] * (self.e - len(prod)))

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        digits = [self._digits(v) for v in range(q)]
        self.add = [
            [self._code([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q)]
            for a in range(q)
        ]
        self.sub = [
            [self._code([(x - y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q)]
            for a in range(q)
        ]
        self.neg = [self.sub[0][a] for a in range(q)]

        # Antilog table from the first element of multiplicative order q - 1.
        for g in range(1, q):
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self.poly_mul(x, g)
                exp.append(x)
            if len(set(exp)) == q - 1:
                break
        else:  # pragma: no cover - irreducible modulus guarantees a generator
            raise ReducibleModulus(f"no primitive element in GF({q})")
        self.generator = g
        self.exp = exp
        self.log = [0] * q
        for i, v in enumerate(exp):
            self.log[v] = i
        order = q - 1
        self.mul = [[0] * q for _ in range(q)]
        for a in range(1, q):
            la = self.log[a]
            row = self.mul[a]
            for b in range(1, q):
                row[b] = exp[(la + self.log[b]) % order]
        self.inv = [0] + [exp[(-self.log[a]) % order] for a in range(1, q)]

    def inverse(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"zero has no inverse in {self}")
        return self.inv[a]

    def element(self, value: int) -> "FieldElement":
        if not 0 <= value < self.q:
            raise ValueError(f"code {value} outside [0, {self.q})")
        return FieldElement(self, value)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, v) for v in range(self.q)]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if self.e == 1:
            return f"GF({self.q})"
        return f"GF({self.q}; modulus={list(self.modulus)})"

    def __reduce__(self):
        return (field_make, (self.p, self.e, self.modulus, self.q))


@lru_cache(maxsize=None)
def _field_cached(p: int, e: int, modulus: tuple[int, ...]) -> Field:
    return Field(p, e, modulus)


def field_make(
    p: int,
    e: int = 1,
    modulus: Sequence[int] | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> Field:
    """Build GF(p^e).

    ``modulus`` lists coefficients from low to high degree and must be monic
    of degree ``e``.  When omitted, the irreducible with the smallest base-p
    code is used, which makes construction deterministic.
    """
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e}")
    if p**e > max_order:
        raise FieldTooLarge(f"GF({p}^{e}) has {p**e} elements; bound is {max_order}")
    if modulus is None:
        mod = smallest_irreducible(p, e)
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != e + 1 or mod[-1] != 1:
            raise ReducibleModulus(f"modulus {list(modulus)} is not monic of degree {e}")
        if not is_irreducible(mod, p):
            raise ReducibleModulus(f"modulus {list(modulus)} is reducible over GF({p})")
    return _field_cached(p, e, mod)


def field_from_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> Field:
    """GF(q) with the default modulus, for a prime power q."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    else:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return field_make(p, e, max_order=max_order)


GF2 = field_make(2)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    def _other(self, other: "FieldElement") -> int:
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other.value

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.add[self.value][self._other(other)])

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.sub[self.value][self._other(other)])

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.mul[self.value][self._other(other)])

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        b = self._other(other)
        return FieldElement(self.field, self.field.mul[self.value][self.field.inverse(b)])

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg[self.value])

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inverse(self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value}@GF({self.field.q})"


# ---------------------------------------------------------------------------
# Elimination kernel
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1 << 18)
def _rref(
    field: Field, rows: int, cols: int, entries: tuple[int, ...]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    mul, sub, inv = field.mul, field.sub, field.inv
    m = [list(entries[i * cols : (i + 1) * cols]) for i in range(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            scale = mul[inv[lead]]
            m[r] = [scale[v] for v in m[r]]
        prow = m[r]
        for i in range(rows):
            f = m[i][c]
            if i != r and f:
                mf = mul[f]
                m[i] = [sub[x][mf[y]] for x, y in zip(m[i], prow)]
        pivots.append(c)
        r += 1
    return tuple(v for row in m for v in row), tuple(pivots)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


def _same_field(a: "Matrix", b: "Matrix") -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")


@dataclass(frozen=True)
class Matrix:
    """Dense immutable matrix over a :class:`Field`."""

    field: Field
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    # -- construction -------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(
        cls, field: Field, rows: Sequence[Sequence[int]], cols: int | None = None
    ) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat: list[int] = []
        for r in rows:
            if len(r) != cols:
                raise ShapeMismatch("ragged rows")
            for v in r:
                if not 0 <= int(v) < field.q:
                    raise ValueError(f"entry {v} outside [0, {field.q})")
                flat.append(int(v))
        return cls(field, len(rows), cols, tuple(flat))

    @classmethod
    def diag(cls, field: Field, values: Sequence[int]) -> "Matrix":
        n = len(values)
        return cls(field, n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    # -- views --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def take_rows(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        c = self.cols
        flat = tuple(v for i in idx for v in self.entries[i * c : (i + 1) * c])
        return Matrix(self.field, len(idx), c, flat)

    def take_cols(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        c = self.cols
        flat = tuple(self.entries[i * c + j] for i in range(self.rows) for j in idx)
        return Matrix(self.field, self.rows, len(idx), flat)

    @property
    def T(self) -> "Matrix":
        r, c = self.rows, self.cols
        return Matrix(self.field, c, r, tuple(self.entries[i * c + j] for j in range(c) for i in range(r)))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def weight(self) -> int:
        """Number of nonzero rows."""
        c = self.cols
        return sum(1 for i in range(self.rows) if any(self.entries[i * c : (i + 1) * c]))

    # -- arithmetic ---------------------------------------------------------

    def _check_same_shape(self, other: "Matrix") -> None:
        _same_field(self, other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        add = self.field.add
        return Matrix(self.field, self.rows, self.cols, tuple(add[a][b] for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        sub = self.field.sub
        return Matrix(self.field, self.rows, self.cols, tuple(sub[a][b] for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.rows, self.cols, tuple(neg[a] for a in self.entries))

    def scale(self, c: int) -> "Matrix":
        row = self.field.mul[c]
        return Matrix(self.field, self.rows, self.cols, tuple(row[a] for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _same_field(self, other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        mul, add = f.mul, f.add
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out: list[int] = []
        for i in range(n):
            arow = a[i * k : (i + 1) * k]
            for j in range(m):
                s = 0
                for t in range(k):
                    x = arow[t]
                    if x:
                        y = b[t * m + j]
                        if y:
                            s = add[s][mul[x][y]]
                out.append(s)
        return Matrix(f, n, m, tuple(out))

    # -- elimination --------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row-echelon form (same shape) and its pivot columns."""
        ent, piv = _rref(self.field, self.rows, self.cols, self.entries)
        return Matrix(self.field, self.rows, self.cols, ent), piv

    def rank(self) -> int:
        return len(_rref(self.field, self.rows, self.cols, self.entries)[1])

    def row_basis(self) -> "Matrix":
        """Nonzero rows of the RREF: the canonical basis of the row space."""
        ent, piv = _rref(self.field, self.rows, self.cols, self.entries)
        return Matrix(self.field, len(piv), self.cols, ent[: len(piv) * self.cols])

    def __str__(self) -> str:
        return format_matrix(self)


def mat_rank(x: Matrix) -> int:
    return x.rank()


def hstack(*mats: Matrix) -> Matrix:
    if not mats:
        raise ShapeMismatch("nothing to stack")
    rows = mats[0].rows
    for m in mats:
        _same_field(mats[0], m)
        if m.rows != rows:
            raise ShapeMismatch("hstack needs equal row counts")
    flat = tuple(v for i in range(rows) for m in mats for v in m.row(i))
    return Matrix(mats[0].field, rows, sum(m.cols for m in mats), flat)


def vstack(*mats: Matrix) -> Matrix:
    if not mats:
        raise ShapeMismatch("nothing to stack")
    cols = mats[0].cols
    for m in mats:
        _same_field(mats[0], m)
        if m.cols != cols:
            raise ShapeMismatch("vstack needs equal column counts")
    flat = tuple(v for m in mats for v in m.entries)
    return Matrix(mats[0].field, sum(m.rows for m in mats), cols, flat)


def full_rank_decomposition(x: Matrix) -> tuple[Matrix, Matrix]:
    """Factor ``x = P @ Q`` with ``P`` the pivot columns of ``x`` and ``Q`` its RREF rows."""
    ent, piv = _rref(x.field, x.rows, x.cols, x.entries)
    r = len(piv)
    q = Matrix(x.field, r, x.cols, ent[: r * x.cols])
    p = x.take_cols(piv)
    return p, q


def decomposition_split(x: Matrix, i: int) -> tuple[Matrix, Matrix]:
    """Split ``x = W + W2`` with ``rank W = i`` and ``rank W2 = rank x - i``."""
    p, q = full_rank_decomposition(x)
    r = q.rows
    if not 0 <= i <= r:
        raise SplitOutOfRange(f"split index {i} outside [0, {r}]")
    w = p.take_cols(range(i)) @ q.take_rows(range(i))
    w2 = p.take_cols(range(i, r)) @ q.take_rows(range(i, r))
    return w, w2


def nullspace(a: Matrix) -> Matrix:
    """Basis (as rows) of the right kernel ``{v : a v = 0}``."""
    f = a.field
    ent, piv = _rref(f, a.rows, a.cols, a.entries)
    free = [c for c in range(a.cols) if c not in piv]
    basis = []
    for fc in free:
        v = [0] * a.cols
        v[fc] = 1
        for r, pc in enumerate(piv):
            v[pc] = f.neg[ent[r * a.cols + fc]]
        basis.append(v)
    return Matrix(f, len(basis), a.cols, tuple(x for v in basis for x in v))


def left_kernel(a: Matrix) -> Matrix:
    """Basis (as rows) of ``{u : u a = 0}``."""
    return nullspace(a.T)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """One solution ``x`` of ``a @ x = b``, or ``None`` if inconsistent."""
    _same_field(a, b)
    if a.rows != b.rows:
        raise ShapeMismatch(f"cannot solve {a.shape} x = {b.shape}")
    aug = hstack(a, b) if a.cols else b
    ent, piv = _rref(aug.field, aug.rows, aug.cols, aug.entries)
    if any(c >= a.cols for c in piv):
        return None
    w = aug.cols
    out = [0] * (a.cols * b.cols)
    for r, pc in enumerate(piv):
        for j in range(b.cols):
            out[pc * b.cols + j] = ent[r * w + a.cols + j]
    return Matrix(a.field, a.cols, b.cols, tuple(out))


def mat_enumerate(
    field: Field,
    rows: int,
    cols: int,
    min_rank: int | None = None,
    max_rank: int | None = None,
) -> Iterator[Matrix]:
    """Every ``rows x cols`` matrix once, in lexicographic row-major order.

    Optional rank bounds filter the stream.  The full space is checked against
    the enumeration budget before the first matrix is produced.
    """
    check_budget(field.q ** (rows * cols), f"matrices {rows}x{cols} over GF({field.q})")
    return _enumerate(field, rows, cols, min_rank, max_rank)


def _enumerate(field, rows, cols, min_rank, max_rank):
    for ent in itertools.product(range(field.q), repeat=rows * cols):
        if min_rank is None and max_rank is None:
            yield Matrix(field, rows, cols, ent)
            continue
        r = len(_rref(field, rows, cols, ent)[1])
        if (min_rank is None or r >= min_rank) and (max_rank is None or r <= max_rank):
            yield Matrix(field, rows, cols, ent)


@lru_cache(maxsize=64)
def all_matrices(field: Field, rows: int, cols: int) -> tuple[Matrix, ...]:
    """Cached tuple form of :func:`mat_enumerate` for repeated sweeps."""
    return tuple(mat_enumerate(field, rows, cols))


@lru_cache(maxsize=256)
def matrices_with_rank_at_least(field: Field, rows: int, cols: int, r: int) -> tuple[Matrix, ...]:
    return tuple(m for m in all_matrices(field, rows, cols) if m.rank() >= r)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def format_matrix(m: Matrix) -> str:
    lines = [f"{m.field.q} {m.rows} {m.cols}"]
    if m.cols:
        lines.extend(" ".join(str(v) for v in row) for row in m.to_rows())
    return "\n".join(lines) + "\n"


def format_matrix_list(mats: Iterable[Matrix]) -> str:
    return "\n".join(format_matrix(m) for m in mats)


def parse_matrix_list(text: str, field: Field | None = None) -> list[Matrix]:
    """Parse blank-line-separated matrix blocks.

    Each block is a header ``q rows cols`` followed by ``rows`` lines of
    ``cols`` integer codes.  A block with zero columns has no row lines.
    ``field`` selects a non-default modulus for the given ``q``.
    """
    lines = text.splitlines()
    out: list[Matrix] = []
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        head = lines[i].split()
        if len(head) != 3:
            raise ParseError(f"line {i + 1}: expected 'q rows cols', got {lines[i]!r}")
        try:
            q, rows, cols = (int(t) for t in head)
        except ValueError as exc:
            raise ParseError(f"line {i + 1}: non-integer header {lines[i]!r}") from exc
        if rows < 0 or cols < 0:
            raise ParseError(f"line {i + 1}: negative dimension")
        try:
            f = field if field is not None and field.q == q else field_from_order(q)
        except Exception as exc:
            raise ParseError(f"line {i + 1}: unsupported field size {q}") from exc
        i += 1
        flat: list[int] = []
        if cols:
            for r in range(rows):
                if i >= len(lines):
                    raise ParseError(f"matrix truncated after {r} of {rows} rows")
                toks = lines[i].split()
                if len(toks) != cols:
                    raise ParseError(f"line {i + 1}: expected {cols} entries, got {len(toks)}")
                try:
                    vals = [int(t) for t in toks]
                except ValueError as exc:
                    raise ParseError(f"line {i + 1}: non-integer entry") from exc
                if any(not 0 <= v < q for v in vals):
                    raise ParseError(f"line {i + 1}: entry outside [0, {q})")
                flat.extend(vals)
                i += 1
        out.append(Matrix(f, rows, cols, tuple(flat)))
    return out


def parse_matrix(text: str, field: Field | None = None) -> Matrix:
    mats = parse_matrix_list(text, field)
    if len(mats) != 1:
        raise ParseError(f"expected exactly one matrix, found {len(mats)}")
    return mats[0]


def read_matrix(path: str | Path) -> Matrix:
    return parse_matrix(Path(path).read_text())


def read_matrix_list(path: str | Path) -> list[Matrix]:
    return parse_matrix_list(Path(path).read_text())


def write_matrix(path: str | Path, m: Matrix) -> None:
    Path(path).write_text(format_matrix(m))


def write_matrix_list(path: str | Path, mats: Iterable[Matrix]) -> None:
    Path(path).write_text(format_matrix_list(mats))
