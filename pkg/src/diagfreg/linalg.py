"""Dense exact linear algebra over F_p.

Matrices are numpy int64 arrays with entries in [0, p).  Since p <= 2^31,
every product of two entries fits in 62 bits, so row operations never
overflow before reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from diagfreg.fields import check_characteristic, inv_mod


class Inconsistent(ArithmeticError):
    """The linear system has no solution."""


class DimensionMismatch(ValueError):
    pass


class FpMatrix:
    """Rectangular matrix over F_p."""

    def __init__(self, p: int, entries):
        self.p = check_characteristic(p)
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError("matrix entries must form a rectangular 2-d grid")
        self.data = arr % p

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        m = cls.__new__(cls)
        m.p = check_characteristic(p)
        m.data = np.zeros((rows, cols), dtype=np.int64)
        return m

    @classmethod
    def from_sparse_rows(cls, p: int, rows: Sequence[Mapping[int, int]], cols: int) -> "FpMatrix":
        m = cls.zeros(p, len(rows), cols)
        for i, row in enumerate(rows):
            for j, v in row.items():
                m.data[i, j] = (m.data[i, j] + v) % p
        return m

    @property
    def shape(self):
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __matmul__(self, vec):
        v = np.asarray(vec, dtype=np.int64) % self.p
        if v.shape[0] != self.cols:
            raise DimensionMismatch(f"matrix has {self.cols} columns, vector has {v.shape[0]} entries")
        out = np.zeros(self.rows, dtype=np.int64)
        # accumulate column by column to stay inside int64
        for j in np.nonzero(v)[0]:
            out = (out + self.data[:, j] * v[j]) % self.p
        return out

    def __repr__(self):
        return f"FpMatrix(p={self.p}, shape={self.shape})"


@dataclass
class Solution:
    """Result of :func:`solve_linear`.  ``particular`` is None when the
    system is inconsistent; ``nullspace`` always spans the kernel of A."""

    particular: Optional[np.ndarray]
    nullspace: list
    rank: int

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    def require(self) -> np.ndarray:
        if self.particular is None:
            raise Inconsistent("A x = b has no solution over F_p")
        return self.particular


def rref(data: np.ndarray, p: int, ncols: Optional[int] = None):
    """Row reduce ``data`` in place over F_p, pivoting only in the first
    ``ncols`` columns.  Returns the pivot column list."""
    nrows, total = data.shape
    ncols = total if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(data[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            data[[r, piv]] = data[[piv, r]]
        data[r] = data[r] * inv_mod(int(data[r, c]), p) % p
        col = data[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            data[hit] = (data[hit] - col[hit, None] * data[r]) % p
        pivots.append(c)
        r += 1
    return pivots


def solve_linear(A: FpMatrix, b=None) -> Solution:
    """Solve ``A x = b`` by Gaussian elimination over F_p.

    Returns one particular solution (free variables set to 0) together with
    a basis of the nullspace of A.  With ``b=None`` only the nullspace is
    computed and the particular solution is the zero vector.
    """
    p = A.p
    m, n = A.shape
    if b is None:
        rhs = np.zeros(m, dtype=np.int64)
    else:
        rhs = np.asarray(b, dtype=np.int64) % p
        if rhs.shape != (m,):
            raise DimensionMismatch(f"right-hand side has shape {rhs.shape}, expected ({m},)")
    aug = np.concatenate([A.data.copy(), rhs.reshape(m, 1)], axis=1)
    pivots = rref(aug, p, n)
    rank = len(pivots)
    consistent = not np.any(aug[rank:, n])
    particular = None
    if consistent:
        particular = np.zeros(n, dtype=np.int64)
        for i, c in enumerate(pivots):
            particular[c] = aug[i, n]
    pivot_set = set(pivots)
    nullspace = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-aug[i, f]) % p
        nullspace.append(v)
    return Solution(particular, nullspace, rank)
