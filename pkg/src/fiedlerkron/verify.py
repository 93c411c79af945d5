"""Numerical certification of linearizations.

Spectra are compared against the first Frobenius companion pencil; minimal
indices come from nullities of block Toeplitz (convolution) matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .core import BlockPencil, MatrixPolynomial

INF_TOL = 1e-10
ROUND = 1e-10


class SingularPolynomialError(ValueError):
    """The polynomial is (numerically) singular where a regular one is needed."""


@dataclass(frozen=True)
class SpectrumReport:
    finite: np.ndarray
    inf_count: int
    matched_against: str = ""
    max_rel_error: float = 0.0

    def to_json(self) -> dict:
        return {"finiteEigs": [[float(z.real), float(z.imag)] for z in self.finite],
                "infCount": self.inf_count, "matchedAgainst": self.matched_against,
                "maxRelError": self.max_rel_error}


def canonical_sort(eigs) -> np.ndarray:
    """Sort by (Re, Im) after rounding to a ``1e-10`` grid."""
    eigs = np.asarray(eigs, dtype=complex)
    key = np.round(eigs / ROUND) * ROUND
    order = np.lexsort((key.imag, key.real))
    return eigs[order]


def pencil_eigs(L: BlockPencil, inf_tol: float = INF_TOL) -> SpectrumReport:
    """Eigenvalues of ``lam*B1 + B0`` by QZ; ``|beta| <= inf_tol*|(alpha, beta)|`` counts as infinite."""
    if L.B1.shape[0] != L.B1.shape[1]:
        raise ValueError("pencil is not square")
    w = scipy.linalg.eig(-L.B0, L.B1, right=False, homogeneous_eigvals=True)
    alpha, beta = w
    size = np.hypot(np.abs(alpha), np.abs(beta))
    inf = np.abs(beta) <= inf_tol * size
    finite = alpha[~inf] / beta[~inf]
    return SpectrumReport(canonical_sort(finite), int(inf.sum()))


def companion(P: MatrixPolynomial) -> BlockPencil:
    """First Frobenius companion ``lam diag(A_k, I, ..., I) + [[A_{k-1} ... A_0], [-I 0 ...], ...]``."""
    k, n = P.grade, P.n
    dtype = np.result_type(P.dtype, float)
    B1 = np.eye(k * n, dtype=dtype)
    B1[:n, :n] = P[k]
    B0 = np.zeros((k * n, k * n), dtype=dtype)
    for j in range(k):
        B0[:n, j * n:(j + 1) * n] = P[k - 1 - j]
    for i in range(1, k):
        B0[i * n:(i + 1) * n, (i - 1) * n:i * n] = -np.eye(n)
    return BlockPencil(B1, B0, n)


def is_regular(P: MatrixPolynomial, samples: int = 3, rng=None) -> bool:
    rng = rng if rng is not None else np.random.default_rng(12345)
    for _ in range(samples):
        lam = complex(*rng.normal(size=2))
        sv = np.linalg.svd(P(lam), compute_uv=False)
        if sv[-1] > P.n * np.finfo(float).eps * max(sv[0], 1.0) * 1e3:
            return True
    return False


def polyeig_reference(P: MatrixPolynomial, inf_tol: float = INF_TOL) -> SpectrumReport:
    if P.n != P.m:
        raise ValueError("polynomial is not square")
    if not is_regular(P):
        raise SingularPolynomialError("polynomial is numerically singular")
    rep = pencil_eigs(companion(P), inf_tol)
    return SpectrumReport(rep.finite, rep.inf_count, "frobenius-companion-1")


def eig_condition(L: BlockPencil) -> float:
    """Largest eigenvalue condition number of ``lam*B1 + B0`` in the homogeneous sense."""
    A, B = -L.B0, L.B1
    w, vl, vr = scipy.linalg.eig(A, B, left=True, right=True, homogeneous_eigvals=True)
    scale = np.linalg.norm(np.hstack([A, B]), 2)
    worst = 0.0
    for i in range(vr.shape[1]):
        x, y = vr[:, i], vl[:, i]
        denom = np.hypot(abs(y.conj() @ A @ x), abs(y.conj() @ B @ x))
        worst = max(worst, np.inf if denom == 0 else np.linalg.norm(x) * np.linalg.norm(y) * scale / denom)
    return worst


def match_spectra(got, ref) -> tuple[float, int]:
    """Pair two multisets of finite eigenvalues; return the worst relative error and its index in ``ref``.

    Sorted pairing is tried first; if it leaves a large error an optimal
    assignment is used instead, so near-ties in the sort key cannot cause a
    false mismatch.
    """
    got, ref = canonical_sort(got), canonical_sort(ref)
    if got.size != ref.size:
        return np.inf, -1
    if got.size == 0:
        return 0.0, -1
    denom = np.maximum(1.0, np.abs(ref))
    err = np.abs(got - ref) / denom
    if err.max() > 1e-8:
        cost = np.abs(got[:, None] - ref[None, :]) / denom[None, :]
        r, c = linear_sum_assignment(cost)
        err_opt = np.zeros(ref.size)
        err_opt[c] = cost[r, c]
        if err_opt.max() < err.max():
            err = err_opt
    i = int(np.argmax(err))
    return float(err[i]), i


@dataclass
class LinearizationReport:
    status: str  # "pass", "fail" or "ineligible"
    max_rel_error: float = 0.0
    inf_counts: tuple = (0, 0)
    rev_max_rel_error: float = 0.0
    rev_inf_counts: tuple = (0, 0)
    worst: complex | None = None
    messages: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"status": self.status, "maxRelError": self.max_rel_error,
                "infCounts": list(self.inf_counts), "revMaxRelError": self.rev_max_rel_error,
                "revInfCounts": list(self.rev_inf_counts),
                "worst": None if self.worst is None else [self.worst.real, self.worst.imag],
                "messages": list(self.messages)}


def strong_linearization_check(L: BlockPencil, P: MatrixPolynomial, tol: float = 1e-8,
                               eligible: bool | None = None,
                               inf_tol: float = INF_TOL) -> LinearizationReport:
    """Finite spectra and infinite counts of ``L`` and ``rev_1 L`` against the companion references."""
    if eligible is False:
        return LinearizationReport("ineligible", messages=["a wing factor is singular"])
    if L.B1.shape != (P.grade * P.n, P.grade * P.n):
        raise ValueError("pencil size does not match k*n")
    rep = LinearizationReport("pass")
    for label, pencil, poly in (("", L, P), ("rev ", L.reversal(), P.reversal(P.grade))):
        got = pencil_eigs(pencil, inf_tol)
        ref = polyeig_reference(poly, inf_tol)
        err, i = match_spectra(got.finite, ref.finite)
        counts = (got.inf_count, ref.inf_count)
        if label:
            rep.rev_max_rel_error, rep.rev_inf_counts = err, counts
        else:
            rep.max_rel_error, rep.inf_counts = err, counts
        if got.finite.size != ref.finite.size or counts[0] != counts[1]:
            rep.status = "fail"
            rep.messages.append(f"{label}infinite eigenvalue count {counts[0]} != {counts[1]}")
        elif err > tol:
            rep.status = "fail"
            rep.worst = complex(canonical_sort(ref.finite)[i])
            rep.messages.append(f"{label}eigenvalue near {rep.worst:.6g} off by {err:.3g} (relative)")
    return rep


# ----------------------------------------------------------- minimal indices

@dataclass(frozen=True)
class MinimalIndexReport:
    right: tuple
    left: tuple


def _toeplitz(P: MatrixPolynomial, d: int) -> np.ndarray:
    """Matrix of ``x -> P x`` on coefficient vectors of degree-``d`` vector polynomials."""
    k, n, m = P.grade, P.n, P.m
    T = np.zeros(((k + d + 1) * n, (d + 1) * m), dtype=np.result_type(P.dtype, float))
    for j in range(d + 1):
        for i, A in enumerate(P.coeffs):
            T[(i + j) * n:(i + j + 1) * n, j * m:(j + 1) * m] = A
    return T


def _rank(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(sv > max(A.shape) * np.finfo(float).eps * max(sv[0], 1e-300))) if sv[0] > 0 else 0


def normal_rank(P: MatrixPolynomial, rng=None) -> int:
    rng = rng if rng is not None else np.random.default_rng(2024)
    return max(_rank(P(complex(*rng.normal(size=2)))) for _ in range(3))


def _right_indices(P: MatrixPolynomial, d_max: int) -> tuple:
    expected = P.m - normal_rank(P)
    nu = [((d + 1) * P.m - _rank(_toeplitz(P, d))) for d in range(d_max + 1)]
    nu_at = lambda d: nu[d] if d >= 0 else 0
    out = []
    for d in range(d_max + 1):
        count = nu_at(d) - 2 * nu_at(d - 1) + nu_at(d - 2)
        if count < 0:
            raise ArithmeticError("nullities are not consistent with a set of minimal indices")
        out.extend([d] * count)
    if len(out) != expected:
        raise ValueError(f"d_max = {d_max} is too small: found {len(out)} of {expected} minimal indices")
    # Once every index is found, nu grows affinely with slope equal to their number.
    if d_max >= 1 and nu[-1] - nu[-2] != expected:
        raise ValueError(f"d_max = {d_max} is too small: nullity is not yet affine")
    return tuple(out)


def minimal_indices_oracle(P: MatrixPolynomial, d_max: int) -> MinimalIndexReport:
    """Right and left minimal indices, counted from second differences of Toeplitz nullities."""
    return MinimalIndexReport(_right_indices(P, d_max), _right_indices(P.transpose(), d_max))


def minimal_index_shift_check(view, P: MatrixPolynomial, d_max: int) -> tuple[bool, dict]:
    """Right indices of the pencil equal those of ``P`` plus ``p``; left ones plus ``q``."""
    poly = minimal_indices_oracle(P, d_max)
    pen = minimal_indices_oracle(view.C.as_polynomial(), d_max + max(view.p, view.q))
    want_r = tuple(sorted(e + view.p for e in poly.right))
    want_l = tuple(sorted(e + view.q for e in poly.left))
    ok = pen.right == want_r and pen.left == want_l
    return ok, {"polynomial": poly, "pencil": pen, "expectedRight": want_r, "expectedLeft": want_l}
