"""Exhaustive scan of injection-distance balls in F_2^m.

Every subspace U with d_I(V, U) <= R is visited exactly once through the
parametrization

    U ∩ V = W,   proj_C(U) = S,   U = W + {s + φ(s) : s ∈ S}

where C is a fixed complement of V and φ ranges over linear maps from S to a
fixed complement of W inside V.  Vectors are int bitmasks.  For each U the
kernel records dim U and dim(U ∩ V_k) for every codeword V_k; both decoders
only depend on that profile, so a histogram of profiles is enough to decide
decoding success over the whole ball.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .budget import check_budget
from .errors import InvalidParameters
from .ffmat import GF2
from .spaces import Subspace, gaussian_binomial, space_enumerate


def to_masks(s: Subspace) -> list[int]:
    """Basis vectors as ints, bit i standing for coordinate i."""
    m = s.ambient
    return [sum(1 << i for i in range(m) if row[i]) for row in s.basis.to_rows()]


def _coefficient_tables(dim: int, dims: range) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Subspaces of F_2^dim as coefficient masks, plus non-pivot positions."""
    width = max(dim, 1)
    rows, sizes, comps = [], [], []
    for sub in space_enumerate(GF2, dim, list(dims)):
        basis = sub.basis.to_rows()
        row = [sum(1 << i for i in range(dim) if r[i]) for r in basis]
        pivots = [r.index(1) for r in basis]
        comp = [i for i in range(dim) if i not in pivots]
        rows.append(row + [0] * (width - len(row)))
        comps.append(comp + [0] * (width - len(comp)))
        sizes.append(len(row))
    return (
        np.array(rows, dtype=np.int64).reshape(len(rows), width),
        np.array(sizes, dtype=np.int64),
        np.array(comps, dtype=np.int64).reshape(len(comps), width),
    )


@njit(cache=True)
def _expand(coef, basis, n):
    v = 0
    for b in range(n):
        if (coef >> b) & 1:
            v ^= basis[b]
    return v


@njit(cache=True)
def _rank(vecs, n, m, piv):
    for b in range(m):
        piv[b] = 0
    r = 0
    for i in range(n):
        v = vecs[i]
        for b in range(m - 1, -1, -1):
            if (v >> b) & 1:
                if piv[b] == 0:
                    piv[b] = v
                    r += 1
                    break
                v ^= piv[b]
    return r


@njit(cache=True)
def _scan(m, a, vb, cb, wsub, wdim, wcomp, ssub, sdim, others, odims, radius, hist):
    nc = m - a
    buf = np.zeros(2 * m + 2, dtype=np.int64)
    piv = np.zeros(m, dtype=np.int64)
    wv = np.zeros(max(a, 1), dtype=np.int64)
    kv = np.zeros(max(a, 1), dtype=np.int64)
    sv = np.zeros(max(nc, 1), dtype=np.int64)
    uv = np.zeros(m + 1, dtype=np.int64)
    prof = np.zeros(others.shape[0], dtype=np.int64)
    count = 0
    for wi in range(wsub.shape[0]):
        j = wdim[wi]
        for r in range(j):
            wv[r] = _expand(wsub[wi, r], vb, a)
        nk = a - j
        for l in range(nk):
            kv[l] = vb[wcomp[wi, l]]
        for si in range(ssub.shape[0]):
            s = sdim[si]
            u = j + s
            if max(a, u) - j > radius:
                continue
            for r in range(s):
                sv[r] = _expand(ssub[si, r], cb, nc)
            nphi = 1 << (s * nk)
            for phi in range(nphi):
                for r in range(j):
                    uv[r] = wv[r]
                for r in range(s):
                    v = sv[r]
                    for l in range(nk):
                        if (phi >> (r * nk + l)) & 1:
                            v ^= kv[l]
                    uv[j + r] = v
                for k in range(others.shape[0]):
                    dk = odims[k]
                    for r in range(u):
                        buf[r] = uv[r]
                    for r in range(dk):
                        buf[u + r] = others[k, r]
                    prof[k] = u + dk - _rank(buf, u + dk, m, piv)
                if others.shape[0] == 2:
                    hist[u, j, prof[0], prof[1]] += 1
                else:
                    hist[u, j, prof[0], 0] += 1
                count += 1
    return count


def ball_size(a: int, m: int, radius: int) -> int:
    """Number of subspaces U of F_2^m with d_I(V, U) <= radius for dim V = a."""
    total = 0
    for j in range(a + 1):
        for s in range(m - a + 1):
            if max(a, j + s) - j <= radius:
                total += gaussian_binomial(a, j, 2) * gaussian_binomial(m - a, s, 2) * 2 ** (s * (a - j))
    return total


def scan_ball(center: Subspace, others: list[Subspace], radius: int) -> tuple[np.ndarray, int]:
    """Profile histogram over the injection ball of ``center``.

    Entry ``[u, j, j1, j2]`` counts subspaces U in the ball with dim U = u,
    dim(U ∩ center) = j and dim(U ∩ others[k]) = j_{k+1}.  At most two
    other codewords are supported.
    """
    if center.field != GF2:
        raise InvalidParameters("the ball scan works over GF(2) only")
    if not 1 <= len(others) <= 2:
        raise InvalidParameters("one or two other codewords are supported")
    m, a = center.ambient, center.dim
    check_budget(ball_size(a, m, radius), f"injection ball of radius {radius} in F_2^{m}")
    vb = np.array(to_masks(center) or [0], dtype=np.int64)
    pivots = [row.index(1) for row in center.basis.to_rows()]
    cb = np.array([1 << i for i in range(m) if i not in pivots] or [0], dtype=np.int64)
    wsub, wdim, wcomp = _coefficient_tables(a, range(a + 1))
    ssub, sdim, _ = _coefficient_tables(m - a, range(min(radius, m - a) + 1))
    width = max(o.dim for o in others) or 1
    omat = np.zeros((len(others), width), dtype=np.int64)
    for k, o in enumerate(others):
        masks = to_masks(o)
        omat[k, : len(masks)] = masks
    odims = np.array([o.dim for o in others], dtype=np.int64)
    hist = np.zeros((m + 1, m + 1, m + 1, m + 1), dtype=np.int64)
    count = _scan(m, a, vb, cb, wsub, wdim, wcomp, ssub, sdim, omat, odims, radius, hist)
    return hist, count
