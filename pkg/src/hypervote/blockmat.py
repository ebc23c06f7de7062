"""Dense block-matrix algebra: face products and restricted face powers.

Everything here materializes full matrices, so it is intended for small
instances; the production model builder enumerates the same structure
sparsely (see :mod:`hypervote.model`) and uses this module as its
ground-truth reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import prod

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True)
class BlockMatrix:
    """A dense matrix with a concordant partition of its columns into blocks."""

    matrix: np.ndarray
    block_widths: tuple[int, ...]

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        widths = tuple(int(w) for w in self.block_widths)
        if matrix.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        if not widths:
            raise ValueError("at least one block is required")
        if any(w < 1 for w in widths):
            raise ValueError("every block width must be >= 1")
        if sum(widths) != matrix.shape[1]:
            raise DimensionError(
                f"block widths sum to {sum(widths)} but the matrix has "
                f"{matrix.shape[1]} columns"
            )
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "block_widths", widths)

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_blocks(self) -> int:
        return len(self.block_widths)

    def block(self, i: int) -> np.ndarray:
        """Return block `i` (0-based) as an array view."""
        start = sum(self.block_widths[:i])
        return self.matrix[:, start : start + self.block_widths[i]]


def face_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pair every column of `a` with every column of `b` by element-wise product.

    The result has ``a.cols * b.cols`` columns; the pair (ja, jb) lands in
    column ``ja * b.cols + jb``, i.e. `a`'s column index is the major one.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("face_product expects two-dimensional arrays")
    if a.shape[0] != b.shape[0]:
        raise DimensionError(
            f"row counts differ: {a.shape[0]} vs {b.shape[0]}"
        )
    n = a.shape[0]
    return (a[:, :, None] * b[:, None, :]).reshape(n, a.shape[1] * b.shape[1])


def face_product_chain(ms) -> np.ndarray:
    """Left fold of :func:`face_product` over a non-empty list of matrices."""
    ms = list(ms)
    if not ms:
        raise ValueError("face_product_chain requires at least one matrix")
    out = np.asarray(ms[0], dtype=float)
    for m in ms[1:]:
        out = face_product(out, m)
    return out


def restricted_face_power(a: BlockMatrix, n: int) -> BlockMatrix:
    """Face-product chains over all strictly increasing block n-subsets of `a`.

    Subsets are enumerated in lexicographic order on block indices; `n=1`
    returns `a` unchanged.
    """
    p = a.n_blocks
    if not 1 <= n <= p:
        raise ValueError(f"order {n} out of range for {p} blocks")
    if n == 1:
        return a
    pieces = []
    widths = []
    for combo in combinations(range(p), n):
        pieces.append(face_product_chain([a.block(i) for i in combo]))
        widths.append(prod(a.block_widths[i] for i in combo))
    return BlockMatrix(np.hstack(pieces), tuple(widths))
