"""Dense rank over GF(2^m).

Two kernels compiled with numba carry the heavy work: a bit-packed one for
GF(2) and an exp/log-table one for GF(2^m), m <= 16. ``rank_reference``
and ``nullspace_reference`` are slow pure-Python versions kept as
independent oracles for the tests.
"""

from __future__ import annotations

from typing import List, Sequence

import numpy as np
from numba import njit

from .field import FieldContext


@njit(cache=True)
def _rank_gf2_packed(mat):
    """Rank of a GF(2) matrix whose rows are packed into uint64 words."""
    nrows, nwords = mat.shape
    ncols = nwords * 64
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for r in range(rank, nrows):
            if mat[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(w, nwords):
                tmp = mat[piv, k]
                mat[piv, k] = mat[rank, k]
                mat[rank, k] = tmp
        for r in range(rank + 1, nrows):
            if mat[r, w] & bit:
                for k in range(w, nwords):
                    mat[r, k] ^= mat[rank, k]
        rank += 1
    return rank


@njit(cache=True)
def _rank_gf2m(mat, exp, log, order_minus_one):
    """Rank over GF(2^m) by row reduction; entries are field ints."""
    nrows, ncols = mat.shape
    rank = 0
    logp = np.empty(ncols, dtype=np.int64)
    for col in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for r in range(rank, nrows):
            if mat[r, col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(col, ncols):
                tmp = mat[piv, k]
                mat[piv, k] = mat[rank, k]
                mat[rank, k] = tmp
        # normalise the pivot row and cache its logs
        inv_log = (order_minus_one - log[mat[rank, col]]) % order_minus_one
        for k in range(col, ncols):
            v = mat[rank, k]
            if v != 0:
                lv = log[v] + inv_log
                if lv >= order_minus_one:
                    lv -= order_minus_one
                logp[k] = lv
                mat[rank, k] = exp[lv]
            else:
                logp[k] = -1
        for r in range(rank + 1, nrows):
            v = mat[r, col]
            if v == 0:
                continue
            lf = log[v]
            for k in range(col, ncols):
                lp = logp[k]
                if lp >= 0:
                    mat[r, k] ^= exp[lf + lp]
        rank += 1
    return rank


def pack_gf2(mat: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into rows of uint64 words (bit k of word w = column 64w+k)."""
    nrows, ncols = mat.shape
    nwords = max(1, (ncols + 63) // 64)
    padded = np.zeros((nrows, nwords * 64), dtype=np.uint8)
    padded[:, :ncols] = mat
    bits = np.packbits(padded, axis=1, bitorder="little")
    return bits.view(np.uint64).reshape(nrows, nwords).copy()


class RankKernel:
    """Rank over one field; holds the tables in numba-friendly arrays."""

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        if ctx.degree > 1:
            exp, log = ctx.tables()
            self._exp = np.asarray(exp, dtype=np.int64)
            self._log = np.asarray(log, dtype=np.int64)
            self._om1 = ctx.order - 1

    def rank(self, mat: np.ndarray) -> int:
        """Rank of ``mat`` (entries are field ints). ``mat`` may be modified."""
        if mat.size == 0:
            return 0
        if self.ctx.degree == 1:
            return int(_rank_gf2_packed(pack_gf2(mat.astype(np.uint8))))
        if mat.dtype != np.int64:
            mat = mat.astype(np.int64)
        # eliminate along the shorter dimension
        if mat.shape[1] > mat.shape[0]:
            mat = np.ascontiguousarray(mat.T)
        return int(_rank_gf2m(mat, self._exp, self._log, self._om1))


def _reduce_rows(ctx: FieldContext, rows: List[List[int]], ncols: int):
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ctx.inv(rows[rank][col])
        rows[rank] = [ctx.mul(v, inv) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a ^ ctx.mul(f, b) for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    return rows[:rank], pivots


def rank_reference(ctx: FieldContext, rows: Sequence[Sequence[int]]) -> int:
    """Pure-Python Gauss-Jordan rank; the oracle for the compiled kernels."""
    if not rows:
        return 0
    reduced, _ = _reduce_rows(ctx, rows, len(rows[0]))
    return len(reduced)


def nullspace_reference(ctx: FieldContext, rows: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Basis of {v : A v = 0} for the matrix with the given rows."""
    reduced, pivots = _reduce_rows(ctx, rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(reduced, pivots):
            # char 2: v[pc] = -row[fc] = row[fc]
            v[pc] = row[fc]
        basis.append(v)
    return basis
