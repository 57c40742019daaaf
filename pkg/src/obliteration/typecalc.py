"""Types and degree vectors of intersections of hypersurfaces.

A *type* ``(m1, m2, ..., mn)`` counts how many defining forms have each
degree; a *degree vector* ``(d1, ..., dr)`` lists the degrees of the forms in
order.  Types form a monoid under entrywise addition, degree vectors under
concatenation, and :func:`type_of` is the homomorphism between them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb
from typing import Iterable

__all__ = [
    "TypeVector",
    "DegreeVector",
    "type_add",
    "deg_concat",
    "type_of",
    "raise_type",
    "raise_type_once_iterated",
    "raise_deg",
    "norm1",
    "parse_vector",
]


@dataclass(frozen=True)
class TypeVector:
    """Compactly supported sequence; ``entries[i-1]`` counts degree-``i`` forms."""

    entries: tuple[int, ...] = ()

    def __init__(self, entries: Iterable[int] = ()):
        vals = tuple(int(e) for e in entries)
        if any(v < 0 for v in vals):
            raise ValueError(f"type entries must be non-negative: {vals}")
        n = len(vals)
        while n and vals[n - 1] == 0:
            n -= 1
        object.__setattr__(self, "entries", vals[:n])

    def __getitem__(self, degree: int) -> int:
        """Count of forms of the given degree (1-based, zero past the support)."""
        if degree < 1:
            raise IndexError("degrees start at 1")
        return self.entries[degree - 1] if degree <= len(self.entries) else 0

    def __len__(self) -> int:
        return len(self.entries)

    def __add__(self, other: TypeVector) -> TypeVector:
        return type_add(self, other)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.entries)) + ")"


@dataclass(frozen=True)
class DegreeVector:
    """Ordered degrees of defining forms; zeros are dropped on construction."""

    entries: tuple[int, ...] = ()

    def __init__(self, entries: Iterable[int] = ()):
        vals = tuple(int(e) for e in entries)
        if any(v < 0 for v in vals):
            raise ValueError(f"degrees must be non-negative: {vals}")
        object.__setattr__(self, "entries", tuple(v for v in vals if v))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: DegreeVector) -> DegreeVector:
        return deg_concat(self, other)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.entries)) + ")"


def type_add(a: TypeVector, b: TypeVector) -> TypeVector:
    n = max(len(a.entries), len(b.entries))
    return TypeVector(a[i] + b[i] for i in range(1, n + 1))


def deg_concat(a: DegreeVector, b: DegreeVector) -> DegreeVector:
    return DegreeVector(a.entries + b.entries)


def type_of(d: DegreeVector) -> TypeVector:
    if not d.entries:
        return TypeVector()
    counts = [0] * max(d.entries)
    for deg in d.entries:
        counts[deg - 1] += 1
    return TypeVector(counts)


def raise_type(m: TypeVector, j: int) -> TypeVector:
    """Closed form of the j-fold raise: entry l is sum_i C(j+i-l-1, i-l) m_i."""
    if j < 0:
        raise ValueError("j must be non-negative")
    if j == 0:
        return m
    n = len(m.entries)
    return TypeVector(
        sum(comb(j + i - l - 1, i - l) * m[i] for i in range(l, n + 1))
        for l in range(1, n + 1)
    )


def raise_type_once_iterated(m: TypeVector, j: int) -> TypeVector:
    """Apply the suffix-sum operator ``j`` times (no binomials involved)."""
    if j < 0:
        raise ValueError("j must be non-negative")
    vals = list(m.entries)
    for _ in range(j):
        acc = 0
        for i in range(len(vals) - 1, -1, -1):
            acc += vals[i]
            vals[i] = acc
    return TypeVector(vals)


def raise_deg(d: DegreeVector, j: int) -> DegreeVector:
    """Replace each degree ``k`` by the block ``1, 2, ..., k``, ``j`` times."""
    if j < 0:
        raise ValueError("j must be non-negative")
    vals = d.entries
    for _ in range(j):
        vals = tuple(i for k in vals for i in range(1, k + 1))
    return DegreeVector(vals)


def norm1(m: TypeVector) -> int:
    return sum(m.entries)


_VECTOR_RE = re.compile(r"^\s*\(?\s*(\d+(\s*,\s*\d+)*)?\s*,?\s*\)?\s*$")


def parse_vector(text: str) -> tuple[int, ...]:
    """Parse ``"(1,2,3)"``, ``"1,2,3"`` or ``"()"`` into a tuple of naturals."""
    if not _VECTOR_RE.match(text):
        raise ValueError(f"cannot parse vector {text!r}; expected e.g. (0,2,1)")
    body = text.strip().strip("()").strip()
    if not body:
        return ()
    return tuple(int(tok) for tok in body.split(",") if tok.strip())
