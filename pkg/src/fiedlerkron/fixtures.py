"""Reference block matrices of the grade-6 and grade-3 examples in a compact symbolic form.

Each block is a string of signed terms such as ``"lA6+A5"``, ``"-I"``,
``"lI"``, ``"-lA0"`` or ``"0"``; a leading ``l`` marks the coefficient of
lambda. :func:`grid` instantiates one with the coefficients of a polynomial.
"""
from __future__ import annotations

import re

import numpy as np

from .core import BlockPencil, MatrixPolynomial

_TERM = re.compile(r"([+-]?)(l?)(I|A(\d+))")


def _block(text: str, P: MatrixPolynomial):
    n = P.n
    one, zero = np.zeros((n, n)), np.zeros((n, n))
    text = text.replace(" ", "")
    if text == "0":
        return one, zero
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise ValueError(f"cannot parse block {text!r}")
        pos = m.end()
        sign = -1.0 if m.group(1) == "-" else 1.0
        mat = np.eye(n) if m.group(3) == "I" else P[int(m.group(4))]
        if m.group(2):
            one = one + sign * mat
        else:
            zero = zero + sign * mat
    if pos != len(text):
        raise ValueError(f"cannot parse block {text!r}")
    return one, zero


def grid(P: MatrixPolynomial, rows) -> BlockPencil:
    blocks = [[_block(b, P) for b in row] for row in rows]
    B1 = np.block([[b[0] for b in row] for row in blocks])
    B0 = np.block([[b[1] for b in row] for row in blocks])
    return BlockPencil(B1, B0, P.n)


def matrix(P: MatrixPolynomial, rows) -> np.ndarray:
    """A constant block matrix (no lambda terms allowed)."""
    pencil = grid(P, rows)
    assert not np.any(pencil.B1)
    return pencil.B0


FIEDLER = [
    ["lA6+A5", "-I", "0", "0", "0", "0"],
    ["A4", "lI", "A3", "-I", "0", "0"],
    ["-I", "0", "lI", "0", "0", "0"],
    ["0", "0", "A2", "lI", "A1", "-I"],
    ["0", "0", "-I", "0", "lI", "0"],
    ["0", "0", "0", "0", "A0", "lI"],
]

FIEDLER_EBK = [
    ["lA6+A5", "0", "0", "-I", "0", "0"],
    ["A4", "A3", "0", "lI", "-I", "0"],
    ["0", "A2", "A1", "0", "lI", "-I"],
    ["0", "0", "A0", "0", "0", "lI"],
    ["-I", "lI", "0", "0", "0", "0"],
    ["0", "-I", "lI", "0", "0", "0"],
]

GFP = [
    ["-I", "lA6", "0", "0", "0", "0"],
    ["lI", "lA5+A4", "-I", "0", "0", "0"],
    ["0", "A3", "lI", "A2", "-I", "0"],
    ["0", "-I", "0", "lI", "0", "0"],
    ["0", "0", "0", "-I", "0", "lI"],
    ["0", "0", "0", "0", "lI", "lA1+A0"],
]

GFP_EBK = [
    ["lA6", "0", "0", "-I", "0", "0"],
    ["lA5+A4", "0", "0", "lI", "-I", "0"],
    ["A3", "A2", "0", "0", "lI", "-I"],
    ["0", "0", "lA1+A0", "0", "0", "lI"],
    ["-I", "lI", "0", "0", "0", "0"],
    ["0", "-I", "lI", "0", "0", "0"],
]

FPR = [
    ["0", "0", "0", "0", "-A6", "lA6"],
    ["0", "0", "0", "-A6", "lA6-A5", "lA5"],
    ["0", "0", "-A6", "lA6-A5", "lA5-A4", "lA4"],
    ["0", "-A6", "lA6-A5", "lA5-A4", "lA4-A3", "lA3"],
    ["-A6", "lA6-A5", "lA5-A4", "lA4-A3", "lA3-A2", "lA2"],
    ["lA6", "lA5", "lA4", "lA3", "lA2", "lA1+A0"],
]

# Extended form at (p, q) = (2, 3). The second row of K1 is [0, -A6, lA6], as
# the unpermuted FPR above dictates.
FPR_EBK = [
    ["lA6-A5", "lA5-A4", "lA4", "-A6", "0", "0"],
    ["lA5-A4", "lA4-A3", "lA3", "lA6-A5", "-A6", "0"],
    ["lA4-A3", "lA3-A2", "lA2", "lA5-A4", "lA6-A5", "-A6"],
    ["lA3", "lA2", "lA1+A0", "lA4", "lA5", "lA6"],
    ["-A6", "lA6-A5", "lA5", "0", "0", "0"],
    ["0", "-A6", "lA6", "0", "0", "0"],
]

FPR_K1_FACTOR = [["A6", "A5"], ["0", "A6"]]
FPR_K2_FACTOR = [["A6", "0", "0"], ["A5", "A6", "0"], ["A4", "A5", "A6"]]

D1 = [
    ["lA3+A2", "A1", "A0"],
    ["A1", "-lA1+A0", "-lA0"],
    ["A0", "-lA0", "0"],
]

D2 = [
    ["-A3", "lA3", "0"],
    ["lA3", "lA2+A1", "A0"],
    ["0", "A0", "-lA0"],
]

D3 = [
    ["0", "-A3", "lA3"],
    ["-A3", "lA3-A2", "lA2"],
    ["lA3", "lA2", "lA1+A0"],
]

# Golden block permutations (1-based) of the three permuted forms above.
FIEDLER_PERMS = ((1, 2, 4, 6, 3, 5), (1, 3, 5, 2, 4, 6))
GFP_PERMS = ((1, 2, 3, 6, 4, 5), (2, 4, 6, 1, 3, 5))
FPR_PERMS = ((3, 4, 5, 6, 2, 1), (4, 5, 6, 3, 2, 1))

# Grade-3 pencil that is an extended block Kronecker pencil at (1,1), (0,2) and (2,0) in place.
MULTI_PARTITION = [
    ["lA3+A2", "A1", "A0"],
    ["A1", "-lA1+A0", "-lA0"],
    ["A0", "-lA0", "0"],
]

FPR_RZ = (-6, -5, -4, -3, -2, -6, -5, -4, -3, -6, -5, -4, -6, -5, -6)


def fpr_spec(P: MatrixPolynomial):
    from .pencils import GfprSpec
    return GfprSpec(P, 0, (0,), tuple(range(-6, 0)), rz=FPR_RZ)


# Another factorization of the same FPR whose predicted partition is (2,3), the displayed one.
FPR_23_Z = (-5, -3, -2, -1, -4, -6)
FPR_23_LZ = (-6, -5, -4, -6)
FPR_23_RZ = (-5, -3, -2, -6, -4, -5, -3, -4, -6, -5, -6)


def fpr_spec_23(P: MatrixPolynomial):
    from .pencils import GfprSpec
    return GfprSpec(P, 0, (0,), FPR_23_Z, lz=FPR_23_LZ, rz=FPR_23_RZ)


def golden_checks(n: int = 2) -> list[tuple[str, bool]]:
    """Reproduce every reference matrix and permuted form with integer stand-in coefficients."""
    from .core import integer_fixture
    from .kronecker import fiedler_ebk, gfp_ebk, gfpr_ebk
    from .pencils import dl_specs, fiedler, gfp, gfpr

    P = integer_fixture(6, n)
    P3 = integer_fixture(3, n)
    out = []
    out.append(("Fiedler pencil q=(0,2,4,1,3,5)", fiedler(P, (0, 2, 4, 1, 3, 5)).equals(grid(P, FIEDLER))))
    out.append(("proper GFP q=(3,4,2,0), z=(-1,-6,-5)", gfp(P, (3, 4, 2, 0), (-1, -6, -5)).equals(grid(P, GFP))))
    L = gfpr(fpr_spec(P))
    out.append(("FPR z=(-6:-1), q=(0), rz", L.equals(grid(P, FPR))))
    for name, specs in dl_specs(P3).items():
        target = grid(P3, globals()[name])
        out.append((f"{name} factorizations", all(gfpr(s).equals(target) for s in specs)))
    v = fiedler_ebk(P, (0, 2, 4, 1, 3, 5))
    out.append(("Fiedler block Kronecker form", v.C.equals(grid(P, FIEDLER_EBK))
                and (v.permL.perm, v.permR.perm) == FIEDLER_PERMS))
    v = gfp_ebk(P, (3, 4, 2, 0), (-1, -6, -5))
    out.append(("GFP block Kronecker form", v.C.equals(grid(P, GFP_EBK))
                and (v.permL.perm, v.permR.perm) == GFP_PERMS))
    spec23 = fpr_spec_23(P)
    v = gfpr_ebk(spec23)
    out.append(("FPR extended block Kronecker form", gfpr(spec23).equals(L) and (v.p, v.q) == (2, 3)
                and v.C.equals(grid(P, FPR_EBK))
                and (v.permL.perm, v.permR.perm) == FPR_PERMS
                and np.array_equal(v.factorB1, matrix(P, FPR_K1_FACTOR))
                and np.array_equal(v.factorB2, matrix(P, FPR_K2_FACTOR))))
    return out
