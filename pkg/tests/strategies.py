"""Random generators shared by the property and acceptance suites."""
from __future__ import annotations

import numpy as np

from fiedlerkron.core import MatrixPolynomial
from fiedlerkron.pencils import GfprSpec
from fiedlerkron.tuples import NEG_ZERO, satisfies_sip


def integer_polynomial(rng, n: int, k: int, lo: int = -4, hi: int = 4) -> MatrixPolynomial:
    """Integer-valued coefficients: every structural identity then holds in exact float arithmetic."""
    return MatrixPolynomial(tuple(rng.integers(lo, hi + 1, size=(n, n)).astype(float) for _ in range(k + 1)))


def complex_polynomial(rng, n: int, k: int) -> MatrixPolynomial:
    return MatrixPolynomial.random(n, k, rng)


def random_sip_tuple(rng, k: int, length: int, low: int = 0) -> tuple:
    """Grow a tuple over ``low:k-1`` one index at a time, keeping the SIP by a direct scan."""
    t: tuple = ()
    for _ in range(length):
        choices = [x for x in range(low, k) if satisfies_sip(t + (x,))]
        if not choices:
            break
        t += (int(rng.choice(choices)),)
    return t


def _extend(rng, core: tuple, values, length: int, side: str) -> tuple:
    """Random outer tuple over ``values`` placed on one side of ``core`` without breaking the SIP."""
    out: tuple = ()
    values = list(values)
    if not values:
        return out
    for _ in range(length):
        if side == "right":
            choices = [x for x in values if satisfies_sip(core + out + (x,))]
        else:
            choices = [x for x in values if satisfies_sip((x,) + out + core)]
        if not choices:
            break
        x = int(rng.choice(choices))
        out = out + (x,) if side == "right" else (x,) + out
    return out


def random_fiedler_q(rng, k: int) -> tuple:
    return tuple(int(i) for i in rng.permutation(k))


def random_gfp(rng, k: int, proper: bool = True) -> tuple[tuple, tuple]:
    """Random ``(q, z)`` with ``q`` and ``-z`` partitioning ``0:k``."""
    while True:
        side = rng.integers(0, 2, size=k + 1).astype(bool)  # True: index goes to q
        if proper:
            side[0], side[k] = True, False
        q = [i for i in range(k + 1) if side[i]]
        z = [NEG_ZERO if i == 0 else -i for i in range(k + 1) if not side[i]]
        nonproper = (not side[0]) or side[k]
        if proper or nonproper:
            break
    rng.shuffle(q)
    order = rng.permutation(len(z))
    return tuple(int(i) for i in q), tuple(z[i] for i in order)


def random_gfpr(rng, P: MatrixPolynomial, *, outer: int = 3, assignments: bool = False) -> GfprSpec:
    k, n = P.grade, P.n
    h = int(rng.integers(0, k))
    q = tuple(int(i) for i in rng.permutation(h + 1))
    z = tuple(int(-i) for i in rng.permutation(np.arange(h + 1, k + 1)))
    qvals, zvals = range(0, h), range(-k, -h - 1)
    lq = _extend(rng, q, qvals, int(rng.integers(0, outer + 1)), "left")
    rq = _extend(rng, lq + q, qvals, int(rng.integers(0, outer + 1)), "right")
    lz = _extend(rng, z, zvals, int(rng.integers(0, outer + 1)), "left")
    rz = _extend(rng, lz + z, zvals, int(rng.integers(0, outer + 1)), "right")
    kw = {}
    if assignments:
        def mats(t):
            return tuple(rng.integers(-3, 4, size=(n, n)).astype(float) for _ in t)
        kw = dict(X=mats(lq), Y=mats(rq), Z=mats(lz), W=mats(rz))
    return GfprSpec(P, h, q, z, lq, rq, lz, rz, **kw)
