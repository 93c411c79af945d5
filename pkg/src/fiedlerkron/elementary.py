"""Elementary matrices ``M_i(B)`` and their products over index tuples.

Block indices are 0-based internally; positions reported to users (for
example by :func:`column_structure`) are 1-based.
"""
from __future__ import annotations

import numpy as np

from .core import MatrixPolynomial, block_transpose
from .tuples import NEG_ZERO, csf_with_permutation, heads, rev


def _check_index(i, k: int) -> None:
    if i is NEG_ZERO:
        return
    if not isinstance(i, (int, np.integer)) or not -k <= i <= k:
        raise ValueError(f"index {i!r} outside -{k}:{k}")


def elementary(k: int, n: int, index, B) -> np.ndarray:
    """The ``kn x kn`` elementary matrix ``M_index(B)``.

    ``index`` may be :data:`NEG_ZERO`; ``M_{-0}(B)`` and ``M_k(B)`` are the
    inverses of ``M_0(B)`` and ``M_{-k}(B)`` and need ``B`` nonsingular.
    """
    if k < 1:
        raise ValueError("elementary matrices need k >= 1")
    _check_index(index, k)
    B = np.asarray(B)
    if B.shape != (n, n):
        raise ValueError(f"payload must be {n}x{n}, got {B.shape}")
    M = np.eye(k * n, dtype=np.result_type(B.dtype, float))

    def put(bi, bj, block):
        M[bi * n:(bi + 1) * n, bj * n:(bj + 1) * n] = block

    if index is NEG_ZERO or index == k:
        try:
            Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as exc:
            raise ValueError(f"M_{index!r}(B) needs B nonsingular") from exc
        put(k - 1 if index is NEG_ZERO else 0, k - 1 if index is NEG_ZERO else 0, Binv)
    elif index == 0:
        put(k - 1, k - 1, B)
    elif index == -k:
        put(0, 0, B)
    else:
        i = abs(index)
        top = k - i - 1
        eye, zero = np.eye(n), np.zeros((n, n))
        if index > 0:
            window = ((B, eye), (eye, zero))
        else:
            window = ((zero, eye), (eye, B))
        for r in range(2):
            for c in range(2):
                put(top + r, top + c, window[r][c])
    return M


def product(t, X, k: int, n: int) -> np.ndarray:
    """``M_t(X) = M_{t_1}(X_1) ... M_{t_r}(X_r)``; the empty product is ``I_{kn}``."""
    t, X = tuple(t), list(X)
    if len(t) != len(X):
        raise ValueError(f"assignment has {len(X)} matrices for {len(t)} indices")
    dtype = np.result_type(float, *[np.asarray(x).dtype for x in X]) if X else float
    acc = np.eye(k * n, dtype=dtype)
    for i, B in zip(t, X):
        acc = acc @ elementary(k, n, i, B)
    return acc


def trivial_assignment(P: MatrixPolynomial, t) -> list:
    """Payloads turning each ``M_i(X_i)`` into ``M_i^P``.

    ``i`` in ``0:k-1`` gets ``-A_i``, ``-i`` gets ``A_i``, ``-0`` gets ``-A_0``
    and ``k`` gets ``A_k`` (so ``M_{-0}^P = (M_0^P)^{-1}`` and
    ``M_k^P = (M_{-k}^P)^{-1}``).
    """
    k = P.grade
    out = []
    for i in t:
        _check_index(i, k)
        if i is NEG_ZERO:
            out.append(-P[0])
        elif i == k:
            out.append(P[k])
        elif i >= 0:
            out.append(-P[i])
        else:
            out.append(P[-i])
    return out


def trivial_product(P: MatrixPolynomial, t) -> np.ndarray:
    """``M_t^P``."""
    return product(t, trivial_assignment(P, t), P.grade, P.n)


def string_product_fast(a: int, b: int, X, k: int, n: int) -> np.ndarray:
    """``M_{(a:b)}(X)`` written down from its block pattern, with no arithmetic.

    ``X = (X_a, ..., X_b)``. The active window starts at block ``k-b-1``; its
    first block column holds ``X_b, ..., X_a`` (then ``I`` when ``a > 0``) and
    its superdiagonal holds identities.
    """
    if not 0 <= a <= b <= k - 1:
        raise ValueError(f"need 0 <= a <= b <= k-1, got a={a}, b={b}, k={k}")
    X = list(X)
    if len(X) != b - a + 1:
        raise ValueError("assignment length does not match the string")
    dtype = np.result_type(float, *[np.asarray(x).dtype for x in X])
    M = np.eye(k * n, dtype=dtype)
    start = k - b - 1
    size = b - a + 2 if a > 0 else b + 1
    w = np.s_[start * n:(start + size) * n]
    M[w, w] = 0
    eye = np.eye(n)
    for r in range(size):
        row = (start + r) * n
        if r <= b - a:
            M[row:row + n, start * n:(start + 1) * n] = X[b - a - r]
        else:
            M[row:row + n, start * n:(start + 1) * n] = eye
        if r + 1 < size:
            M[row:row + n, (start + r + 1) * n:(start + r + 2) * n] = eye
    return M


def block_transpose_law_check(t, X, k: int, n: int) -> bool:
    """``M_t(X)^B == M_{rev t}(rev X)``, compared exactly.

    The identity holds for SIP tuples; without the SIP two payloads can meet
    in one block and their product order shows.
    """
    lhs = block_transpose(product(t, X, k, n), n)
    rhs = product(rev(t), list(reversed(list(X))), k, n)
    return bool(np.array_equal(lhs, rhs))


def _is_unit_block_column(col: np.ndarray, n: int) -> bool:
    blocks = col.reshape(-1, n, n)
    eye = np.eye(n)
    nonzero = [i for i, b in enumerate(blocks) if np.any(b)]
    return len(nonzero) == 1 and np.array_equal(blocks[nonzero[0]], eye)


def column_structure(t, X, k: int, n: int) -> tuple[frozenset, frozenset]:
    """1-based positions of the block columns and rows of ``M_t(X)`` not of the form ``e_i (x) I``.

    The prediction from heads is checked against the materialized product;
    a mismatch raises ``AssertionError``.
    """
    t = tuple(t)
    if not t:
        return frozenset(), frozenset()
    cols = frozenset(k - h for h in heads(t))
    rows = frozenset(k - h for h in heads(rev(t)))
    M = product(t, X, k, n)
    for j in range(1, k + 1):
        if j not in cols:
            col = M[:, (j - 1) * n:j * n]
            assert _is_unit_block_column(col, n), f"block column {j} is not of the form e_i (x) I"
        if j not in rows:
            row = M[(j - 1) * n:j * n, :].T
            assert _is_unit_block_column(row, n), f"block row {j} is not of the form e_i^T (x) I"
    return cols, rows


def csf_assignment(t, X) -> tuple[tuple, list]:
    """``csf(t)`` as a plain tuple with the assignment reordered to match."""
    c, perm = csf_with_permutation(t)
    X = list(X)
    return c.tuple, [X[i] for i in perm]
