"""Matrix codes, Gabidulin codes, Singleton-type bounds and subspace lifting."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .budget import check_budget
from .errors import InvalidD, InvalidParameters, ParseError, SingletonCode
from .ffmat import Field, Matrix, field_from_order, hstack, parse_matrix_list, format_matrix_list
from .netmetrics import injection_distance
from .spaces import Subspace, row_space


# ---------------------------------------------------------------------------
# Extension field GF(q^m) over a base field GF(q)
# ---------------------------------------------------------------------------


class ExtField:
    """GF(q^m) built as polynomials of degree < m over a base :class:`Field`.

    Elements are integer codes whose base-q digits are the coordinates in the
    polynomial basis 1, x, ..., x^{m-1}.  This lets the extension exceed the
    size bound placed on the base field.
    """

    def __init__(self, base: Field, m: int, modulus: Sequence[int] | None = None):
        if m < 1:
            raise InvalidParameters(f"extension degree must be >= 1, got {m}")
        self.base = base
        self.m = m
        self.q = base.q
        self.order = self.q**m
        check_budget(self.order * self.order, f"multiplication table of GF({self.q}^{m})")
        self.modulus = tuple(modulus) if modulus is not None else self._smallest_irreducible()
        if not self._irreducible(self.modulus):
            raise InvalidParameters(f"modulus {self.modulus} is reducible over {base}")
        self._build()

    # polynomial helpers over the base field, coefficient lists low -> high
    def _trim(self, a: list[int]) -> list[int]:
        while a and a[-1] == 0:
            a.pop()
        return a

    def _rem(self, a: Sequence[int], mod: Sequence[int]) -> list[int]:
        b = self.base
        a = self._trim(list(a))
        mod = self._trim(list(mod))
        inv_lead = b.inverse(mod[-1])
        while len(a) >= len(mod):
            coef = b.mul[a[-1]][inv_lead]
            shift = len(a) - len(mod)
            for i, c in enumerate(mod):
                a[shift + i] = b.sub[a[shift + i]][b.mul[coef][c]]
            self._trim(a)
        return a

    def _pmul(self, a: Sequence[int], c: Sequence[int]) -> list[int]:
        b = self.base
        out = [0] * (len(a) + len(c) - 1) if a and c else []
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(c):
                    out[i + j] = b.add[out[i + j]][b.mul[x][y]]
        return out

    def _monic(self, degree: int):
        for low in itertools.product(range(self.q), repeat=degree):
            yield tuple(reversed(low)) + (1,)

    def _irreducible(self, mod: Sequence[int]) -> bool:
        e = len(mod) - 1
        if e != self.m or mod[-1] != 1:
            return False
        for deg in range(1, e // 2 + 1):
            for g in self._monic(deg):
                if not self._rem(mod, g):
                    return False
        return True

    def _smallest_irreducible(self) -> tuple[int, ...]:
        for cand in self._monic(self.m):
            if self._irreducible(cand):
                return cand
        raise InvalidParameters(f"no irreducible of degree {self.m}")  # pragma: no cover

    def to_vector(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.q)
            a //= self.q
        return out

    def from_vector(self, v: Sequence[int]) -> int:
        a = 0
        for c in reversed(list(v)):
            a = a * self.q + c
        return a

    def _build(self) -> None:
        n = self.order
        vecs = [self.to_vector(a) for a in range(n)]
        badd = self.base.add
        self.add = [[self.from_vector([badd[x][y] for x, y in zip(vecs[a], vecs[c])]) for c in range(n)] for a in range(n)]
        self.mul = [[0] * n for _ in range(n)]
        for a in range(1, n):
            for c in range(a, n):
                r = self._rem(self._pmul(vecs[a], vecs[c]), self.modulus)
                v = self.from_vector(r + [0] * (self.m - len(r)))
                self.mul[a][c] = self.mul[c][a] = v

    @property
    def x(self) -> int:
        """The class of the polynomial variable."""
        return self.q if self.m > 1 else 1

    def power(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self.mul[r][a]
        return r

    def frobenius(self, a: int, i: int) -> int:
        """a^(q^i)."""
        for _ in range(i):
            a = self.power(a, self.q)
        return a

    def __repr__(self) -> str:
        return f"GF({self.q}^{self.m})"


# ---------------------------------------------------------------------------
# Codes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixCode:
    field: Field
    n: int
    m: int
    codewords: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        for c in self.codewords:
            if c.shape != (self.n, self.m) or c.field != self.field:
                raise InvalidParameters(f"codeword {c.shape} over {c.field} in a {self.n}x{self.m} code")
        if len(set(self.codewords)) != len(self.codewords):
            raise InvalidParameters("duplicate codewords")

    @classmethod
    def of(cls, codewords: Sequence[Matrix]) -> "MatrixCode":
        if not codewords:
            raise InvalidParameters("a code needs at least one codeword")
        c0 = codewords[0]
        return cls(c0.field, c0.rows, c0.cols, tuple(codewords))

    def __len__(self) -> int:
        return len(self.codewords)

    def __iter__(self):
        return iter(self.codewords)

    def is_linear(self) -> bool:
        s = set(self.codewords)
        return all(a + b in s for a in self.codewords for b in self.codewords)


@dataclass(frozen=True)
class GabidulinSpec:
    q: int
    m: int
    n: int
    k: int
    points: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.n <= self.m:
            raise InvalidParameters(f"need 1 <= n <= m, got n={self.n}, m={self.m}")
        if not 1 <= self.k <= self.n:
            raise InvalidParameters(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.points is not None and len(self.points) != self.n:
            raise InvalidParameters(f"{len(self.points)} evaluation points for length {self.n}")

    @property
    def d(self) -> int:
        return self.n - self.k + 1

    def descriptor(self) -> dict:
        out = {"kind": "gabidulin", "q": self.q, "m": self.m, "n": self.n, "k": self.k}
        if self.points is not None:
            out["points"] = list(self.points)
        return out


def gabidulin_generate(gs: GabidulinSpec) -> MatrixCode:
    """All evaluations of q-linearized polynomials of q-degree < k.

    The message f = (f_0, ..., f_{k-1}) maps to the matrix whose row j is the
    coordinate vector of sum_i f_i g_j^(q^i) in the polynomial basis.
    """
    try:
        base = field_from_order(gs.q)
    except Exception as exc:
        raise InvalidParameters(str(exc)) from exc
    check_budget(gs.q ** (gs.m * gs.k), f"Gabidulin code with q^(mk) = {gs.q}^{gs.m * gs.k} codewords")
    ext = ExtField(base, gs.m)
    if gs.points is None:
        alpha = ext.x
        points = [ext.power(alpha, j) for j in range(gs.n)]
    else:
        points = list(gs.points)
        if any(not 0 <= g < ext.order for g in points):
            raise InvalidParameters("evaluation point out of range")
    expansion = Matrix.from_rows(base, [ext.to_vector(g) for g in points], gs.m)
    if expansion.rank() != gs.n:
        raise InvalidParameters("evaluation points are linearly dependent over the base field")
    frob = [[ext.frobenius(g, i) for i in range(gs.k)] for g in points]
    add, mul = ext.add, ext.mul
    words = []
    for f in itertools.product(range(ext.order), repeat=gs.k):
        rows = []
        for j in range(gs.n):
            s = 0
            for fi, gp in zip(f, frob[j]):
                if fi:
                    s = add[s][mul[fi][gp]]
            rows.extend(ext.to_vector(s))
        words.append(Matrix(base, gs.n, gs.m, tuple(rows)))
    return MatrixCode(base, gs.n, gs.m, tuple(words))


def min_rank_distance(code: MatrixCode) -> int:
    if len(code) < 2:
        raise SingletonCode("minimum distance of a one-codeword code is undefined")
    return min((b - a).rank() for a, b in itertools.combinations(code.codewords, 2))


def singleton_rank_bound(q: int, n: int, m: int, d: int) -> int:
    """q^(max(n,m) (min(n,m) − d + 1))."""
    if not 1 <= d <= min(n, m):
        raise InvalidD(f"d = {d} outside [1, {min(n, m)}]")
    return q ** (max(n, m) * (min(n, m) - d + 1))


@dataclass(frozen=True)
class NetworkBounds:
    bound14: int | Fraction
    bound15: int | Fraction
    achieved14: bool
    achieved15: bool
    degenerate: bool

    @property
    def achieved(self) -> bool:
        return self.achieved14 and self.achieved15


def _power(base: int, e: int) -> int | Fraction:
    return base**e if e >= 0 else Fraction(1, base ** (-e))


def singleton_network_bounds(
    code: MatrixCode | int,
    ddist_value: int,
    n: int,
    rho: int,
    Q: int,
    ddist_yeung_value: int | None = None,
) -> NetworkBounds:
    """Q^(n − ρ − δ + 1), once with the Yeung Δ-distance and once with δ_A.

    When no Yeung value is supplied, ``ddist_value`` is used for both.  A
    bound below 2 is flagged as degenerate: it admits at most one codeword.
    """
    size = code if isinstance(code, int) else len(code)
    dy = ddist_value if ddist_yeung_value is None else ddist_yeung_value
    b14 = _power(Q, n - rho - dy + 1)
    b15 = _power(Q, n - rho - ddist_value + 1)
    return NetworkBounds(b14, b15, size == b14, size == b15, min(b14, b15) < 2)


# ---------------------------------------------------------------------------
# Subspace codes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubspaceCode:
    field: Field
    ambient: int
    members: tuple[Subspace, ...]

    def __post_init__(self) -> None:
        if len(set(self.members)) != len(self.members):
            raise InvalidParameters("duplicate subspaces")
        for s in self.members:
            if s.ambient != self.ambient or s.field != self.field:
                raise InvalidParameters("member outside the ambient space")

    @classmethod
    def of(cls, members: Sequence[Subspace]) -> "SubspaceCode":
        s0 = members[0]
        return cls(s0.field, s0.ambient, tuple(members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def lift_to_subspaces(code: MatrixCode) -> tuple[SubspaceCode, bool]:
    """Row spaces of the codewords, deduplicated in order, and whether no two coincide."""
    seen: dict[Subspace, None] = {}
    for c in code.codewords:
        seen.setdefault(row_space(c), None)
    return SubspaceCode(code.field, code.m, tuple(seen)), len(seen) == len(code)


def identity_lift(code: MatrixCode) -> MatrixCode:
    """The code {[I | X] : X in C}, whose row spaces are always distinct."""
    eye = Matrix.identity(code.field, code.n)
    return MatrixCode(code.field, code.n, code.n + code.m, tuple(hstack(eye, c) for c in code.codewords))


def min_injection_distance(s: SubspaceCode) -> int:
    if len(s) < 2:
        raise SingletonCode("minimum distance of a one-member code is undefined")
    return min(injection_distance(a, b) for a, b in itertools.combinations(s.members, 2))


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------


def code_from_descriptor(desc: dict) -> tuple[MatrixCode, GabidulinSpec]:
    if desc.get("kind") != "gabidulin":
        raise ParseError(f"unsupported code kind {desc.get('kind')!r}")
    try:
        gs = GabidulinSpec(
            int(desc["q"]), int(desc["m"]), int(desc["n"]), int(desc["k"]),
            tuple(desc["points"]) if desc.get("points") is not None else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad descriptor: {exc}") from exc
    return gabidulin_generate(gs), gs


def load_code(path: str | Path) -> MatrixCode:
    """A code from a JSON descriptor or a matrix-list file."""
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        try:
            desc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        return code_from_descriptor(desc)[0]
    mats = parse_matrix_list(text)
    if not mats:
        raise ParseError(f"{path}: no codewords")
    try:
        return MatrixCode.of(mats)
    except InvalidParameters as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_code(path: str | Path, code: Iterable[Matrix]) -> None:
    Path(path).write_text(format_matrix_list(code))
