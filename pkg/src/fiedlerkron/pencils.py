"""Constructors for the Fiedler-like families.

* Fiedler pencils ``lam*M_{-k}^P - M_q^P``
* generalized Fiedler pencils (GFP) ``lam*M_z^P - M_q^P``
* GFP with repetition (GFPR), ``M_{lq,lz}(X,Z) (lam*M_z^P - M_q^P) M_{rz,rq}(W,Y)``;
  with trivial assignments these are the Fiedler pencils with repetition (FPR).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import BlockPencil, MatrixPolynomial, matrices_equal, matrix_from_json, matrix_to_json
from .elementary import product, trivial_assignment, trivial_product
from .tuples import (NEG_ZERO, abs_index, concat, format_tuple, is_permutation_of, parse_tuple,
                     rev, satisfies_sip, shift, string, tuple_equivalent)

STRUCT_TOL = 1e-12


def same(a, b) -> bool:
    """Exact equality, falling back to the structural tolerance for genuine products."""
    return bool(np.array_equal(a, b)) or matrices_equal(a, b, STRUCT_TOL)


def _pencil(P: MatrixPolynomial, B1, B0) -> BlockPencil:
    return BlockPencil(B1, B0, P.n)


def fiedler(P: MatrixPolynomial, q) -> BlockPencil:
    """``F_q(lam) = lam*M_{-k}^P - M_q^P``."""
    k = P.grade
    q = tuple(q)
    if not is_permutation_of(q, range(k)):
        raise ValueError(f"{q} is not a permutation of 0:{k - 1}")
    return _pencil(P, trivial_product(P, (-k,)), -trivial_product(P, q))


def _gfp_check(k: int, q, z) -> None:
    if any(i is NEG_ZERO or not 0 <= i <= k for i in q):
        raise ValueError(f"q = {q} must hold indices from 0:{k}")
    if any(not (i is NEG_ZERO or -k <= i < 0) for i in z):
        raise ValueError(f"z = {z} must hold indices from -{k}:-1 or -0")
    c0 = list(q)
    c1 = [abs_index(i) for i in z]
    if len(set(c0)) != len(c0) or len(set(c1)) != len(c1) or sorted(c0 + c1) != list(range(k + 1)):
        raise ValueError(f"q = {q} and -z do not partition 0:{k}")


def is_proper(k: int, q, z) -> bool:
    return 0 in tuple(q) and -k in tuple(z)


def gfp(P: MatrixPolynomial, q, z) -> BlockPencil:
    """``K_{q,z}(lam) = lam*M_z^P - M_q^P``; ``z`` may contain ``-0`` and ``q`` may contain ``k``."""
    q, z = tuple(q), tuple(z)
    _gfp_check(P.grade, q, z)
    return _pencil(P, trivial_product(P, z), -trivial_product(P, q))


@dataclass(frozen=True)
class SimplePair:
    """``K_{q,z} = lam*M^P_{(m, -k:-h-1)} - M^P_q`` with ``qhat = (-rev(m), q)`` a permutation of ``0:h``."""

    qhat: tuple
    h: int
    m: tuple


def simple_pair(P: MatrixPolynomial, q, z) -> SimplePair:
    """Simple pair of a proper GFP; the decomposition with the largest ``h`` is returned."""
    k = P.grade
    q, z = tuple(q), tuple(z)
    _gfp_check(k, q, z)
    if not is_proper(k, q, z):
        raise ValueError("the pencil is not a proper GFP")
    K = gfp(P, q, z)
    for h in range(k - 1, -1, -1):
        tail = string(-k, -h - 1)
        if not set(tail) <= set(z):
            continue
        m = tuple(i for i in z if i not in tail)
        if not tuple_equivalent(shift(z, k), shift(m + tail, k)):
            continue
        qhat = negate_rev(m) + q
        if not is_permutation_of(qhat, range(h + 1)):
            continue
        Mm = trivial_product(P, m)
        rebuilt = _pencil(P, Mm @ trivial_product(P, tail), -Mm @ trivial_product(P, qhat))
        if same(rebuilt.B1, K.B1) and same(rebuilt.B0, K.B0):
            return SimplePair(qhat, h, m)
    raise ValueError("no simple pair found")  # unreachable for proper GFP


def negate_rev(t) -> tuple:
    return tuple(-i for i in reversed(tuple(t)))


@dataclass(frozen=True)
class GfprSpec:
    """Parameters of a GFPR; an assignment left as ``None`` means the trivial one."""

    P: MatrixPolynomial
    h: int
    q: tuple
    z: tuple
    lq: tuple = ()
    rq: tuple = ()
    lz: tuple = ()
    rz: tuple = ()
    X: tuple | None = None
    Y: tuple | None = None
    Z: tuple | None = None
    W: tuple | None = None

    def __post_init__(self):
        for name in ("q", "z", "lq", "rq", "lz", "rz"):
            object.__setattr__(self, name, tuple(int(i) for i in getattr(self, name)))
        for name in ("X", "Y", "Z", "W"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, tuple(np.asarray(x) for x in val))
        self.validate()

    @property
    def k(self) -> int:
        return self.P.grade

    def validate(self) -> None:
        k, h = self.k, self.h
        if not 0 <= h <= k - 1:
            raise ValueError(f"h = {h} outside 0:{k - 1}")
        if not is_permutation_of(self.q, range(h + 1)):
            raise ValueError(f"q = {self.q} is not a permutation of 0:{h}")
        if not is_permutation_of(self.z, range(-k, -h)):
            raise ValueError(f"z = {self.z} is not a permutation of -{k}:-{h + 1}")
        if any(not 0 <= i <= h - 1 for i in self.lq + self.rq):
            raise ValueError(f"lq, rq must hold indices from 0:{h - 1}")
        if any(not -k <= i <= -h - 2 for i in self.lz + self.rz):
            raise ValueError(f"lz, rz must hold indices from -{k}:-{h + 2}")
        if not satisfies_sip(self.lq + self.q + self.rq):
            raise ValueError("(lq, q, rq) does not satisfy the SIP")
        if not satisfies_sip(self.lz + self.z + self.rz):
            raise ValueError("(lz, z, rz) does not satisfy the SIP")
        for tname, aname in (("lq", "X"), ("rq", "Y"), ("lz", "Z"), ("rz", "W")):
            val = getattr(self, aname)
            if val is not None:
                if len(val) != len(getattr(self, tname)):
                    raise ValueError(f"assignment {aname} does not match {tname}")
                if any(x.shape != (self.P.n, self.P.n) for x in val):
                    raise ValueError(f"assignment {aname} must hold {self.P.n}x{self.P.n} matrices")

    def assignment(self, name: str) -> list:
        """Assignment ``X``, ``Y``, ``Z`` or ``W`` with ``None`` expanded to the trivial one."""
        t = {"X": self.lq, "Y": self.rq, "Z": self.lz, "W": self.rz}[name]
        val = getattr(self, name)
        return list(val) if val is not None else trivial_assignment(self.P, t)

    @property
    def is_fpr(self) -> bool:
        return all(getattr(self, a) is None for a in "XYZW")

    @property
    def outer_empty(self) -> bool:
        return not (self.lq or self.rq or self.lz or self.rz)

    @classmethod
    def parse(cls, P: MatrixPolynomial, *, q: str, z: str, lq: str = "", rq: str = "",
              lz: str = "", rz: str = "", h: int | None = None) -> "GfprSpec":
        qt = parse_tuple(q)
        if h is None:
            h = len(qt) - 1
        return cls(P, h, qt, parse_tuple(z), parse_tuple(lq), parse_tuple(rq),
                   parse_tuple(lz), parse_tuple(rz))

    def to_json(self) -> dict:
        out = {"P": self.P.to_json(), "h": self.h}
        for name in ("q", "z", "lq", "rq", "lz", "rz"):
            out[name] = format_tuple(getattr(self, name))
        for name in ("X", "Y", "Z", "W"):
            val = getattr(self, name)
            out[name] = "trivial" if val is None else [matrix_to_json(x) for x in val]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GfprSpec":
        P = MatrixPolynomial.from_json(data["P"])
        kw = {name: parse_tuple(data.get(name, "")) for name in ("q", "z", "lq", "rq", "lz", "rz")}
        for name in ("X", "Y", "Z", "W"):
            val = data.get(name, "trivial")
            kw[name] = None if val == "trivial" else tuple(matrix_from_json(x) for x in val)
        return cls(P, int(data["h"]), **kw)


def gfpr(spec: GfprSpec) -> BlockPencil:
    """``M_{lq,lz}(X,Z) (lam*M_z^P - M_q^P) M_{rz,rq}(W,Y)``."""
    P, k, n = spec.P, spec.k, spec.P.n
    left = product(spec.lq + spec.lz, spec.assignment("X") + spec.assignment("Z"), k, n)
    right = product(spec.rz + spec.rq, spec.assignment("W") + spec.assignment("Y"), k, n)
    B1 = left @ trivial_product(P, spec.z) @ right
    B0 = -(left @ trivial_product(P, spec.q) @ right)
    return _pencil(P, B1, B0)


def fiedler_spec(P: MatrixPolynomial, q) -> GfprSpec:
    """A Fiedler pencil viewed as a GFPR (``h = k-1``, ``z = (-k)``)."""
    return GfprSpec(P, P.grade - 1, tuple(q), (-P.grade,))


@dataclass(frozen=True)
class GfprSplit:
    """Three-by-three partition of a GFPR around the block ``c`` at 0-based index ``k-h-1``.

    ``F`` is the lower-right ``(h+1)``-block GFPR for ``Q = A_0 + ... + lam^{h+1} A_{h+1}``
    and ``G`` the upper-left ``(k-h)``-block GFPR for ``Z = A_h + ... + lam^{k-h} A_k``.
    """

    Dz: BlockPencil
    yz: BlockPencil
    xz: BlockPencil
    c: BlockPencil
    xq: BlockPencil
    yq: BlockPencil
    Dq: BlockPencil
    F: BlockPencil
    G: BlockPencil
    Q: MatrixPolynomial
    Zpoly: MatrixPolynomial
    center: int = field(default=0)


def gfpr_split(spec: GfprSpec) -> GfprSplit:
    k, h, n = spec.k, spec.h, spec.P.n
    L = gfpr(spec)
    c = k - h - 1
    top, mid, bot = range(0, c), [c], range(c + 1, k)
    for rows, cols in ((top, bot), (bot, top)):
        block = L.blocks(rows, cols)
        if np.any(block.B1) or np.any(block.B0):
            raise AssertionError("GFPR corner blocks are not zero")
    A = spec.P.coeffs
    Q = MatrixPolynomial(A[:h + 2])
    Zpoly = MatrixPolynomial(A[h:])
    F = _pencil(spec.P,
                product(spec.lq, spec.assignment("X"), h + 1, n) @ trivial_product(Q, (-h - 1,))
                @ product(spec.rq, spec.assignment("Y"), h + 1, n),
                -(product(spec.lq, spec.assignment("X"), h + 1, n) @ trivial_product(Q, spec.q)
                  @ product(spec.rq, spec.assignment("Y"), h + 1, n)))
    lz, rz = shift(spec.lz, h), shift(spec.rz, h)
    Ml = product(lz, spec.assignment("Z"), k - h, n)
    Mr = product(rz, spec.assignment("W"), k - h, n)
    G = _pencil(spec.P, Ml @ trivial_product(Zpoly, shift(spec.z, h)) @ Mr,
                -(Ml @ trivial_product(Zpoly, (0,)) @ Mr))
    lower = list(mid) + list(bot)
    upper = list(top) + list(mid)
    Fsub, Gsub = L.blocks(lower, lower), L.blocks(upper, upper)
    if not (same(F.B1, Fsub.B1) and same(F.B0, Fsub.B0)):
        raise AssertionError("F does not match the lower-right part of the GFPR")
    if not (same(G.B1, Gsub.B1) and same(G.B0, Gsub.B0)):
        raise AssertionError("G does not match the upper-left part of the GFPR")
    return GfprSplit(
        Dz=L.blocks(top, top), yz=L.blocks(top, mid), xz=L.blocks(mid, top), c=L.blocks(mid, mid),
        xq=L.blocks(mid, bot), yq=L.blocks(bot, mid), Dq=L.blocks(bot, bot),
        F=F, G=G, Q=Q, Zpoly=Zpoly, center=c)


def reassemble_split(s: GfprSplit, k: int) -> BlockPencil:
    """Embed ``F`` and ``G`` back into a ``k x k`` block pencil (the center block is shared)."""
    n = s.c.n
    c = s.center
    out1 = np.zeros((k * n, k * n), dtype=np.result_type(s.F.B1, s.G.B1))
    out0 = np.zeros_like(out1)
    g = slice(0, (c + 1) * n)
    f = slice(c * n, k * n)
    out1[g, g] = s.G.B1
    out0[g, g] = s.G.B0
    out1[f, f] = s.F.B1
    out0[f, f] = s.F.B0
    return BlockPencil(out1, out0, n)


def block_structure_check(spec: GfprSpec) -> bool:
    """Zero off-diagonal corners of the four factors, with the stated block sizes."""
    k, h, n = spec.k, spec.h, spec.P.n
    X, Y, Z, W = (spec.assignment(a) for a in "XYZW")
    P = spec.P

    def splits(M, first, identity_first):
        s = first * n
        off = np.any(M[:s, s:]) or np.any(M[s:, :s])
        ident = M[:s, :s] if identity_first else M[s:, s:]
        return not off and np.array_equal(ident, np.eye(ident.shape[0]))

    return (splits(product(spec.lq + spec.rq, X + Y, k, n), k - h, True)
            and splits(product(spec.lz, Z, k, n) @ trivial_product(P, spec.z) @ product(spec.rz, W, k, n),
                       k - h, False)
            and splits(product(spec.lq, X, k, n) @ trivial_product(P, spec.q) @ product(spec.rq, Y, k, n),
                       k - h - 1, True)
            and splits(product(spec.lz + spec.rz, Z + W, k, n), k - h - 1, False))


def dl_specs(P: MatrixPolynomial) -> dict[str, list[GfprSpec]]:
    """Factorizations of the three standard-basis pencils of DL(P) for grade 3.

    Each entry lists alternative GFPR factorizations of the same pencil, one
    per extended block Kronecker partition they induce.
    """
    if P.grade != 3:
        raise ValueError("the DL fixtures are defined for grade 3")
    S = lambda **kw: GfprSpec(P, **kw)
    return {
        "D1": [S(h=2, q=(1, 2, 0), z=(-3,), lq=(0,), rq=(1, 0)),
               S(h=2, q=(0, 1, 2), z=(-3,), rq=(0, 1, 0)),
               S(h=2, q=(2, 1, 0), z=(-3,), lq=(0, 1, 0))],
        "D2": [S(h=1, q=(0, 1), z=(-2, -3), lz=(-3,), rq=(0,)),
               S(h=1, q=(0, 1), z=(-3, -2), rz=(-3,), rq=(0,))],
        "D3": [S(h=0, q=(0,), z=(-2, -1, -3), lz=(-3,), rz=(-2, -3)),
               S(h=0, q=(0,), z=(-3, -2, -1), rz=(-3, -2, -3))],
    }


def with_assignments(spec: GfprSpec, **kw) -> GfprSpec:
    return replace(spec, **kw)
