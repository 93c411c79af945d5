"""Dense substrate: matrix polynomials, block pencils, block permutations.

All matrices are plain numpy arrays. Block indices are 0-based in code;
permutations exchanged with users (``BlockPermutation.perm``) are 1-based to
match the usual notation ``Pi_c`` with ``c`` a permutation of ``{1:k}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

DEFAULT_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    a = np.array(a)
    if not np.issubdtype(a.dtype, np.number):
        raise ValueError("matrix entries must be numeric")
    if np.issubdtype(a.dtype, np.integer) or a.dtype == bool:
        a = a.astype(float)
    a.setflags(write=False)
    return a


def inf_norm(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a), axis=-1)))


def matrices_equal(a, b, tol: float | None = None) -> bool:
    """Exact equality when ``tol`` is None, else ``|a-b| <= tol*max(1, ||a||, ||b||)``."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    if tol is None:
        return bool(np.array_equal(a, b))
    if a.size == 0:
        return True
    scale = max(1.0, inf_norm(a), inf_norm(b))
    return bool(np.max(np.abs(a - b)) <= tol * scale)


def direct_sum(*blocks) -> np.ndarray:
    """Block-diagonal matrix; zero-sized blocks are allowed and skipped."""
    blocks = [np.atleast_2d(np.asarray(b)) for b in blocks if np.asarray(b).size]
    if not blocks:
        return np.zeros((0, 0))
    return block_diag(*blocks)


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """``P(lam) = sum_i coeffs[i] * lam**i`` with declared grade ``len(coeffs)-1``."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(_frozen(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a matrix polynomial needs at least one coefficient")
        shape = coeffs[0].shape
        if len(shape) != 2 or any(c.shape != shape for c in coeffs):
            raise ValueError("all coefficients must be matrices of the same size")
        if not all(np.all(np.isfinite(c)) for c in coeffs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def grade(self) -> int:
        return len(self.coeffs) - 1

    @property
    def n(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def m(self) -> int:
        return self.coeffs[0].shape[1]

    @property
    def dtype(self):
        return np.result_type(*self.coeffs)

    @property
    def degree(self) -> int:
        """Largest index with a nonzero coefficient; -1 for the zero polynomial."""
        for i in range(self.grade, -1, -1):
            if np.any(self.coeffs[i]):
                return i
        return -1

    def __getitem__(self, i: int) -> np.ndarray:
        return self.coeffs[i]

    def __call__(self, lam) -> np.ndarray:
        return evaluate(self, lam)

    def reversal(self, k: int | None = None) -> "MatrixPolynomial":
        return reversal(self, self.grade if k is None else k)

    def transpose(self) -> "MatrixPolynomial":
        return MatrixPolynomial(tuple(c.T for c in self.coeffs))

    def equals(self, other: "MatrixPolynomial", tol: float | None = None) -> bool:
        return self.grade == other.grade and all(
            matrices_equal(a, b, tol) for a, b in zip(self.coeffs, other.coeffs)
        )

    @classmethod
    def random(cls, n: int, k: int, rng: np.random.Generator, *,
               complex_: bool = True, m: int | None = None) -> "MatrixPolynomial":
        """Entries i.i.d. standard normal (complex: real and imaginary parts scaled by 1/sqrt 2)."""
        m = n if m is None else m
        if complex_:
            draw = lambda: (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)
        else:
            draw = lambda: rng.standard_normal((n, m))
        return cls(tuple(draw() for _ in range(k + 1)))

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "grade": self.grade,
                "coeffs": [matrix_to_json(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "MatrixPolynomial":
        coeffs = tuple(matrix_from_json(c) for c in data["coeffs"])
        poly = cls(coeffs)
        if poly.grade != data.get("grade", poly.grade) or poly.n != data.get("n", poly.n):
            raise ValueError("polynomial header does not match its coefficients")
        return poly


def evaluate(P: MatrixPolynomial, lam) -> np.ndarray:
    """Horner evaluation of ``P`` at the scalar ``lam``."""
    acc = np.array(P.coeffs[-1], dtype=np.result_type(P.dtype, type(lam)))
    for c in reversed(P.coeffs[:-1]):
        acc = acc * lam + c
    return acc


def reversal(P: MatrixPolynomial, k: int) -> MatrixPolynomial:
    """``rev_k P(lam) = lam^k P(1/lam)``; requires ``k >= degree(P)``."""
    if k < P.degree:
        raise ValueError(f"grade {k} is smaller than the degree {P.degree}")
    zero = np.zeros_like(P.coeffs[0])
    padded = list(P.coeffs[: k + 1]) + [zero] * (k + 1 - len(P.coeffs))
    return MatrixPolynomial(tuple(reversed(padded)))


@dataclass(frozen=True, eq=False)
class BlockPencil:
    """``lam*B1 + B0`` viewed as a grid of ``n x n`` blocks."""

    B1: np.ndarray
    B0: np.ndarray
    n: int

    def __post_init__(self):
        B1, B0 = _frozen(self.B1), _frozen(self.B0)
        if B1.ndim != 2 or B1.shape != B0.shape:
            raise ValueError("pencil coefficients must be matrices of the same size")
        if self.n < 1 or B1.shape[0] % self.n or B1.shape[1] % self.n:
            raise ValueError(f"pencil of size {B1.shape} is not a grid of {self.n}x{self.n} blocks")
        object.__setattr__(self, "B1", B1)
        object.__setattr__(self, "B0", B0)

    @classmethod
    def zeros(cls, rows: int, cols: int, n: int, dtype=float) -> "BlockPencil":
        z = np.zeros((rows * n, cols * n), dtype=dtype)
        return cls(z, z, n)

    @property
    def grid_rows(self) -> int:
        return self.B1.shape[0] // self.n

    @property
    def grid_cols(self) -> int:
        return self.B1.shape[1] // self.n

    @property
    def shape(self) -> tuple[int, int]:
        return self.grid_rows, self.grid_cols

    def block(self, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        s = np.s_[i * n:(i + 1) * n, j * n:(j + 1) * n]
        return self.B1[s], self.B0[s]

    def blocks(self, rows, cols) -> "BlockPencil":
        """Sub-pencil made of the listed block rows and columns, in that order."""
        ri = _expand(rows, self.n)
        ci = _expand(cols, self.n)
        return BlockPencil(self.B1[np.ix_(ri, ci)], self.B0[np.ix_(ri, ci)], self.n)

    def __call__(self, lam) -> np.ndarray:
        return lam * self.B1 + self.B0

    def __neg__(self) -> "BlockPencil":
        return BlockPencil(-self.B1, -self.B0, self.n)

    def __add__(self, other: "BlockPencil") -> "BlockPencil":
        return BlockPencil(self.B1 + other.B1, self.B0 + other.B0, self.n)

    def __sub__(self, other: "BlockPencil") -> "BlockPencil":
        return BlockPencil(self.B1 - other.B1, self.B0 - other.B0, self.n)

    def lmul(self, A) -> "BlockPencil":
        return BlockPencil(A @ self.B1, A @ self.B0, self.n)

    def rmul(self, A) -> "BlockPencil":
        return BlockPencil(self.B1 @ A, self.B0 @ A, self.n)

    def reversal(self) -> "BlockPencil":
        """``rev_1``: swap the two coefficients."""
        return BlockPencil(self.B0, self.B1, self.n)

    def block_transpose(self) -> "BlockPencil":
        return BlockPencil(block_transpose(self.B1, self.n), block_transpose(self.B0, self.n), self.n)

    def as_polynomial(self) -> MatrixPolynomial:
        return MatrixPolynomial((self.B0, self.B1))

    def equals(self, other: "BlockPencil", tol: float | None = None) -> bool:
        return (self.n == other.n and matrices_equal(self.B1, other.B1, tol)
                and matrices_equal(self.B0, other.B0, tol))

    def to_json(self) -> dict:
        return {"n": self.n, "gridRows": self.grid_rows, "gridCols": self.grid_cols,
                "B1": matrix_to_json(self.B1), "B0": matrix_to_json(self.B0)}

    @classmethod
    def from_json(cls, data: dict) -> "BlockPencil":
        B1 = matrix_from_json(data["B1"], data["gridRows"] * data["n"], data["gridCols"] * data["n"])
        B0 = matrix_from_json(data["B0"], data["gridRows"] * data["n"], data["gridCols"] * data["n"])
        return cls(B1, B0, data["n"])


def _expand(block_indices, n: int) -> np.ndarray:
    block_indices = np.asarray(list(block_indices), dtype=int)
    return (block_indices[:, None] * n + np.arange(n)[None, :]).ravel()


@dataclass(frozen=True)
class BlockPermutation:
    """Permutation ``c`` of ``{1:k}`` (1-based) with block size ``n``."""

    perm: tuple
    n: int

    def __post_init__(self):
        perm = tuple(int(c) for c in self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError(f"{perm} is not a permutation of 1:{len(perm)}")
        object.__setattr__(self, "perm", perm)

    @property
    def k(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        return block_permutation_matrix(self)

    def compose(self, other: "BlockPermutation") -> "BlockPermutation":
        """Permutation whose matrix is ``self.matrix() @ other.matrix()``."""
        if self.n != other.n or self.k != other.k:
            raise ValueError("incompatible block permutations")
        return BlockPermutation(tuple(self.perm[c - 1] for c in other.perm), self.n)

    def inverse(self) -> "BlockPermutation":
        inv = [0] * self.k
        for i, c in enumerate(self.perm, start=1):
            inv[c - 1] = i
        return BlockPermutation(tuple(inv), self.n)


def block_permutation_matrix(c: BlockPermutation) -> np.ndarray:
    """``Pi_c^n``: the (c_i, i) block is ``I_n``, every other block is zero."""
    k, n = c.k, c.n
    out = np.zeros((k * n, k * n))
    eye = np.eye(n)
    for i, ci in enumerate(c.perm):
        out[(ci - 1) * n:ci * n, i * n:(i + 1) * n] = eye
    return out


def block_sip(s: int, n: int) -> np.ndarray:
    """Block anti-identity ``R_{s,n}``."""
    if s < 1:
        raise ValueError("s must be positive")
    return np.kron(np.fliplr(np.eye(s)), np.eye(n))


def block_transpose(M, n: int) -> np.ndarray:
    """Swap block (i, j) with block (j, i) without transposing the blocks themselves."""
    M = np.asarray(M)
    r, c = M.shape
    if r % n or c % n:
        raise ValueError(f"a {r}x{c} matrix is not a grid of {n}x{n} blocks")
    return M.reshape(r // n, n, c // n, n).transpose(2, 1, 0, 3).reshape(c, r)


def matrix_to_json(M) -> list:
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return [[float(x) for x in row] for row in M]


def matrix_from_json(rows, nrows: int | None = None, ncols: int | None = None) -> np.ndarray:
    if not rows:
        return np.zeros((nrows or 0, ncols or 0))
    is_complex = any(isinstance(x, list) for row in rows for x in row)
    if is_complex:
        M = np.array([[complex(*x) if isinstance(x, list) else complex(x) for x in row] for row in rows])
    else:
        M = np.array(rows, dtype=float)
    if M.ndim != 2:
        raise ValueError("matrix rows must all have the same length")
    return M


def integer_fixture(k: int, n: int = 2, seed: int = 7) -> MatrixPolynomial:
    """Grade-``k`` polynomial with small, distinct, nonsingular integer coefficients.

    Stands in for symbolic coefficients: every structural identity checked on
    it is exact in floating point.
    """
    rng = np.random.default_rng([seed, k, n])
    coeffs: list[np.ndarray] = []
    while len(coeffs) < k + 1:
        A = rng.integers(-9, 10, size=(n, n)).astype(float)
        if abs(np.linalg.det(A)) < 0.5 or any(np.array_equal(A, B) or np.array_equal(A, -B) for B in coeffs):
            continue
        coeffs.append(A)
    return MatrixPolynomial(tuple(coeffs))


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
