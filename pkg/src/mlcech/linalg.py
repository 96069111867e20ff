"""Exact linear algebra over ℚ(i).

Matrices are `numpy` object arrays of `GaussianRational`. Elimination works on
sparse rows (column → entry dicts) so that rows with a zero in the pivot column
are never touched.
"""

from logging import getLogger
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from mlcech.exact import ONE, ZERO, GaussianRational, Scalar

logger = getLogger(__name__)

GaussInt = Tuple[int, int]


def zeros(m: int, n: int) -> np.ndarray:
    return np.full((m, n), ZERO, dtype=object)


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for k in range(n):
        out[k, k] = ONE
    return out


def as_matrix(rows: Sequence[Sequence[Scalar]], n_cols: Optional[int] = None) -> np.ndarray:
    """Builds an exact matrix from nested sequences of scalars.

    Args:
        rows (Sequence[Sequence[Scalar]]): The entries, row by row.
        n_cols (Optional[int]): The column count, only needed when there are no
            rows.

    Raises:
        ValueError: If the rows are ragged.

    Returns:
        A[n] `np.ndarray` of dtype object.
    """
    if not rows:
        return zeros(0, n_cols or 0)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("Matrix rows have different lengths")
    out = zeros(len(rows), width)
    for i, r in enumerate(rows):
        for j, c in enumerate(r):
            out[i, j] = GaussianRational.coerce(c)
    return out


def as_vector(values: Sequence[Scalar]) -> np.ndarray:
    out = np.full(len(values), ZERO, dtype=object)
    for k, c in enumerate(values):
        out[k] = GaussianRational.coerce(c)
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product; also handles empty inner dimensions."""
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"Cannot multiply shapes {a.shape} and {b.shape}")
    if a.shape[-1] == 0:
        shape = a.shape[:-1] + b.shape[1:]
        return np.full(shape, ZERO, dtype=object)
    return np.dot(a, b)


def is_zero(a: np.ndarray) -> bool:
    return all(not x for x in a.flat)


def _sparse_rows(a: np.ndarray) -> List[Dict[int, GaussianRational]]:
    return [{j: x for j, x in enumerate(row) if x} for row in a]


def _integer_row(row: Dict[int, GaussianRational]) -> Dict[int, GaussInt]:
    """Scales a row by the lcm of its denominators."""
    den = 1
    for x in row.values():
        den = lcm(den, x.re.denominator, x.im.denominator)
    return _primitive(
        {j: (int(x.re * den), int(x.im * den)) for j, x in row.items()}
    )


def _primitive(row: Dict[int, GaussInt]) -> Dict[int, GaussInt]:
    g = 0
    for re, im in row.values():
        g = gcd(g, re, im)
        if g == 1:
            return row
    if g <= 1:
        return row
    return {j: (re // g, im // g) for j, (re, im) in row.items()}


def _gmul(a: GaussInt, b: GaussInt) -> GaussInt:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _size(row: Dict[int, GaussInt]) -> Tuple[int, int]:
    return len(row), max(abs(re) + abs(im) for re, im in row.values())


def rank(a: np.ndarray) -> int:
    """The rank over ℚ(i), by fraction-free elimination.

    Rows are scaled to Gaussian integers. For a pivot entry p and an entry a
    below it, row_i ← p·row_i − a·row_pivot, then row_i is divided by the gcd of
    its integer parts.

    Args:
        a (np.ndarray): An exact matrix.

    Returns:
        A[n] `int`, the rank.
    """
    if a.size == 0:
        return 0
    rows = [_integer_row(r) for r in _sparse_rows(a) if r]
    r = 0
    while rows:
        # sparsest row first
        pivot_idx = min(range(len(rows)), key=lambda k: _size(rows[k]))
        pivot = rows.pop(pivot_idx)
        col = min(pivot)
        p = pivot[col]
        reduced = []
        for row in rows:
            if col not in row:
                reduced.append(row)
                continue
            x = row.pop(col)
            new = {j: _gmul(p, v) for j, v in row.items()}
            for j, v in pivot.items():
                if j == col:
                    continue
                w = _gmul(x, v)
                re, im = new.get(j, (0, 0))
                re, im = re - w[0], im - w[1]
                if re or im:
                    new[j] = (re, im)
                else:
                    new.pop(j, None)
            if new:
                reduced.append(_primitive(new))
        rows = reduced
        r += 1
    logger.debug(f"rank of {a.shape[0]}x{a.shape[1]} matrix is {r}")
    return r


def rref(
    a: np.ndarray, order: Optional[Sequence[int]] = None
) -> Tuple[np.ndarray, List[int]]:
    """The reduced row echelon form and its pivot columns.

    Args:
        a (np.ndarray): An exact matrix.
        order (Optional[Sequence[int]]): The order in which columns are tried as
            pivots, left to right if absent.

    Returns:
        A[n] `Tuple[np.ndarray, List[int]]`, row i of the form has its pivot in
        column `pivots[i]`.
    """
    m, n = a.shape
    rows = _sparse_rows(a)
    pivots: List[int] = []
    done: List[Dict[int, GaussianRational]] = []
    for col in range(n) if order is None else order:
        candidates = [k for k, row in enumerate(rows) if col in row]
        if not candidates:
            continue
        idx = min(candidates, key=lambda k: len(rows[k]))
        pivot = rows.pop(idx)
        inv = ONE / pivot[col]
        pivot = {j: v * inv for j, v in pivot.items()}
        for group in (rows, done):
            for k, row in enumerate(group):
                x = row.get(col)
                if x is None:
                    continue
                new = dict(row)
                for j, v in pivot.items():
                    y = new.get(j, ZERO) - x * v
                    if y:
                        new[j] = y
                    else:
                        new.pop(j, None)
                group[k] = new
        rows = [row for row in rows if row]
        done.append(pivot)
        pivots.append(col)
    out = zeros(m, n)
    for i, row in enumerate(done):
        for j, v in row.items():
            out[i, j] = v
    return out, pivots


def nullspace(a: np.ndarray) -> List[np.ndarray]:
    """A basis of {x : a·x = 0}."""
    n = a.shape[1]
    reduced, pivots = rref(a, _sparse_order(a))
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = np.full(n, ZERO, dtype=object)
        x[f] = ONE
        for i, pc in enumerate(pivots):
            x[pc] = -reduced[i, f]
        basis.append(x)
    return basis


def solve(a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """An exact particular solution of a·x = b, or `None` if there is none."""
    m, n = a.shape
    if b.shape != (m,):
        raise ValueError(f"Right-hand side of shape {b.shape} for a {m}x{n} system")
    augmented = np.concatenate([a, b.reshape(m, 1)], axis=1)
    reduced, pivots = rref(augmented, _sparse_order(a) + [n])
    if n in pivots:
        return None
    x = np.full(n, ZERO, dtype=object)
    for i, pc in enumerate(pivots):
        x[pc] = reduced[i, n]
    return x


def _sparse_order(a: np.ndarray) -> List[int]:
    """Columns by increasing number of nonzeros."""
    counts = [sum(1 for x in a[:, j] if x) for j in range(a.shape[1])]
    return sorted(range(a.shape[1]), key=lambda j: (counts[j], j))
