"""Index tuples: SIP, commutation equivalence, column standard form, heads.

Tuples are plain Python tuples of ints. The index ``-0`` (distinct from ``0``
for elementary matrices) is represented by the :data:`NEG_ZERO` sentinel and
only appears in generalized Fiedler tuples; the SIP machinery rejects it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class _NegZero:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-0"

    def __reduce__(self):
        return (_NegZero, ())


NEG_ZERO = _NegZero()


def abs_index(i) -> int:
    return 0 if i is NEG_ZERO else abs(i)


def is_negative(i) -> bool:
    return i is NEG_ZERO or i < 0


# ---------------------------------------------------------------- text syntax

_ENTRY = re.compile(r"^\s*(-?\d+)\s*(?::\s*(-?\d+)\s*(?::\s*(-?\d+)\s*)?)?$")


def parse_tuple(text: str) -> tuple:
    """Parse ``"3:5,2,0:1"`` style text; ``a:b`` is ascending, ``a:s:b`` has step ``s``.

    ``a:b`` with ``a > b`` is the empty string, following the usual convention.
    The literal ``-0`` yields :data:`NEG_ZERO`.
    """
    text = text.strip().strip("()")
    if not text:
        return ()
    out: list = []
    for part in text.split(","):
        m = _ENTRY.match(part)
        if not m:
            raise ValueError(f"bad tuple entry {part!r}")
        a, b, c = m.groups()
        if b is None:
            out.append(NEG_ZERO if a.strip() == "-0" else int(a))
            continue
        if c is None:
            start, step, stop = int(a), 1, int(b)
        else:
            start, step, stop = int(a), int(b), int(c)
            if step == 0:
                raise ValueError(f"zero step in {part!r}")
        out.extend(range(start, stop + (1 if step > 0 else -1), step))
    return tuple(out)


def format_tuple(t) -> str:
    """Inverse of :func:`parse_tuple`, collapsing ascending runs into ``a:b``."""
    parts: list[str] = []
    i = 0
    t = list(t)
    while i < len(t):
        if t[i] is NEG_ZERO:
            parts.append("-0")
            i += 1
            continue
        j = i
        while j + 1 < len(t) and t[j + 1] is not NEG_ZERO and t[j + 1] == t[j] + 1:
            j += 1
        parts.append(str(t[i]) if j == i else f"{t[i]}:{t[j]}")
        i = j + 1
    return ",".join(parts)


def string(a: int, b: int) -> tuple:
    """The string ``(a:b)``; empty when ``a > b``."""
    return tuple(range(a, b + 1))


# ------------------------------------------------------------------ utilities

def rev(t) -> tuple:
    return tuple(reversed(tuple(t)))


def shift(t, a: int) -> tuple:
    """``a + t``."""
    return tuple(a + i for i in t)


def negate(t) -> tuple:
    return tuple(-i for i in t)


def concat(*ts) -> tuple:
    return tuple(i for t in ts for i in t)


def _check_plain(t) -> tuple:
    t = tuple(t)
    if any(i is NEG_ZERO for i in t):
        raise ValueError("-0 has no place in a SIP tuple")
    if t and not (all(i >= 0 for i in t) or all(i < 0 for i in t)):
        raise ValueError(f"tuple {t} mixes signs")
    return t


def _nonneg(t) -> tuple[tuple, int]:
    """Shift a negative tuple so its minimum becomes 0; return the shift."""
    t = _check_plain(t)
    if t and t[0] < 0:
        a = min(t)
        return shift(t, -a), -a
    return t, 0


def commute(i: int, j: int) -> bool:
    """Adjacent indices may be swapped iff ``||i|-|j|| != 1`` and ``|i| != |j|``."""
    ai, aj = abs_index(i), abs_index(j)
    return abs(ai - aj) != 1 and ai != aj


# ------------------------------------------------------------------------ SIP

def satisfies_sip(t) -> bool:
    """Between any two equal indices there is an index one larger."""
    t = _check_plain(t)
    last_seen: dict[int, int] = {}
    for pos, i in enumerate(t):
        if i in last_seen:
            start = last_seen[i]
            if (i + 1) not in t[start + 1:pos]:
                return False
        last_seen[i] = pos
    return True


@dataclass(frozen=True)
class Csf:
    """Column standard form ``(a_s:b_s, ..., a_1:b_1)`` with ``b_s > ... > b_1``."""

    strings: tuple  # ((a_s, b_s), ..., (a_1, b_1))

    def __post_init__(self):
        heads = [b for _, b in self.strings]
        if any(x <= y for x, y in zip(heads, heads[1:])):
            raise ValueError(f"heads {heads} are not strictly decreasing")
        if any(a > b for a, b in self.strings):
            raise ValueError("every string needs a <= b")

    @property
    def tuple(self) -> tuple:
        return concat(*(string(a, b) for a, b in self.strings))

    @property
    def heads(self) -> frozenset:
        return frozenset(b for _, b in self.strings)

    def __len__(self):
        return len(self.strings)


def csf_with_permutation(t) -> tuple[Csf, tuple]:
    """Column standard form of a nonnegative SIP tuple and the reordering used.

    Returns ``(c, perm)`` with ``c.tuple == tuple(t[i] for i in perm)``. The
    reordering only ever moves an index left past indices it commutes with,
    so any matrix assignment reordered by ``perm`` yields the same product.
    """
    t = _check_plain(t)
    if t and t[0] < 0:
        raise ValueError("csf needs nonnegative indices; shift the tuple first")
    if not satisfies_sip(t):
        raise ValueError(f"tuple {t} does not satisfy the SIP")
    remaining = list(enumerate(t))
    strings: list[tuple[int, int]] = []
    perm: list[int] = []

    def minimal_position(value):
        # Leftmost occurrence of ``value`` that commutes with everything before it.
        for idx, (_, v) in enumerate(remaining):
            if v == value:
                if all(commute(v, w) for _, w in remaining[:idx]):
                    return idx
                return None
        return None

    while remaining:
        minimal = [v for idx, (_, v) in enumerate(remaining)
                   if all(commute(v, w) for _, w in remaining[:idx])]
        v = max(minimal)
        a = v
        while True:
            idx = minimal_position(v)
            if idx is None:
                break
            perm.append(remaining.pop(idx)[0])
            v += 1
        strings.append((a, v - 1))
    c = Csf(tuple(strings))
    assert c.tuple == tuple(t[i] for i in perm)
    return c, tuple(perm)


def csf(t) -> Csf:
    """Column standard form; negative tuples are shifted, processed and shifted back."""
    t, a = _nonneg(t)
    c, _ = csf_with_permutation(t)
    if a:
        return Csf(tuple((x - a, y - a) for x, y in c.strings))
    return c


def heads(t) -> frozenset:
    return csf(t).heads


def h_count(t) -> int:
    """Number of strings in ``csf(t)``."""
    return len(csf(t)) if tuple(t) else 0


def tuple_equivalent(t1, t2) -> bool:
    t1, t2 = tuple(t1), tuple(t2)
    if sorted(t1) != sorted(t2):
        return False
    return csf(t1) == csf(t2) if t1 else True


class IndexType(Enum):
    TYPE_I = "I"
    TYPE_II = "II"


def index_type(t, x: int) -> tuple[IndexType, frozenset]:
    """Type of ``x`` relative to ``t`` plus ``heads(t, x)``.

    Type I iff ``x - 1`` is a head of ``t``; then the head ``x - 1`` is replaced
    by ``x``. Type II adds ``x`` as a new head.
    """
    t = _check_plain(t)
    if not satisfies_sip(t + (x,)):
        raise ValueError(f"({t}, {x}) does not satisfy the SIP")
    old = heads(t) if t else frozenset()
    new = heads(t + (x,))
    kind = IndexType.TYPE_I if len(new) == len(old) else IndexType.TYPE_II
    return kind, new


def sip_append_check(t, a: int, b: int) -> bool:
    """Fast predicate for ``(t, a:b)`` satisfying the SIP when ``t`` does."""
    if not tuple(t):
        return True
    hs = heads(t)
    return not any(c in hs for c in range(a, b + 1))


def is_permutation_of(t, values) -> bool:
    t = tuple(t)
    return len(t) == len(set(t)) and set(t) == set(values)
