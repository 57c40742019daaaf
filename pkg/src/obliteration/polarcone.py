"""Polar cones of systems of homogeneous forms.

The polar cone of ``X = V(f_1, ..., f_n)`` at a point ``x0`` of ``X`` is cut
out by all polars of all forms at ``x0``; its points ``y`` are exactly those
for which the line through ``x0`` and ``y`` lies in ``X``.  Iterating the
construction along a tuple of points gives the cone of planes containing
their span, and cutting it with a complementary coordinate plane models the
space of such planes as a system of smaller type.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .linalg import kernel_basis, rank, rref
from .polyring import MultiPoly, is_zero, poly_parse, polarize, variables
from .typecalc import DegreeVector, TypeVector, raise_deg, type_of

__all__ = [
    "PolarConeError",
    "FormSystem",
    "SpanningTuple",
    "polar_system",
    "iterated_polar",
    "restrict_to_complement",
    "eliminate_linear",
    "line_in_variety_check",
    "plane_in_variety_check",
    "parse_points",
]


class PolarConeError(ValueError):
    pass


@dataclass(frozen=True)
class FormSystem:
    """Homogeneous forms in ``ambient_dim + 1`` variables with their degrees.

    Zero forms are allowed (they record equations that happen to vanish).
    ``ambient_dim == -1`` denotes the empty projective space.  ``embedding``
    maps this system's coordinates into those of the system it was derived
    from: parent point = ``embedding @ point``.
    """

    ambient_dim: int
    forms: tuple[MultiPoly, ...]
    degrees: DegreeVector
    embedding: tuple[tuple[Any, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.forms) != len(self.degrees):
            raise PolarConeError("one degree per form is required")
        n = self.ambient_dim + 1
        for f, d in zip(self.forms, self.degrees):
            if len(f.vars) != n:
                raise PolarConeError(f"form {f} has {len(f.vars)} variables, ambient needs {n}")
            if not f.is_zero() and f.degrees() != {d}:
                raise PolarConeError(f"form {f} is not homogeneous of degree {d}")

    @classmethod
    def build(cls, ambient_dim: int, forms: Sequence[MultiPoly], degrees: Sequence[int] | None = None) -> FormSystem:
        if degrees is None:
            degrees = []
            for f in forms:
                if f.is_zero():
                    raise PolarConeError("zero form needs an explicit degree")
                degrees.append(f.total_degree())
        pairs = [(f, d) for f, d in zip(forms, degrees) if d > 0]
        for f, d in zip(forms, degrees):
            if d == 0 and not f.is_zero():
                raise PolarConeError("nonzero constant form: the system has no points")
        return cls(ambient_dim, tuple(f for f, _ in pairs), DegreeVector(d for _, d in pairs))

    @property
    def vars(self) -> tuple[str, ...]:
        return variables("z", self.ambient_dim + 1)

    @property
    def type(self) -> TypeVector:
        return type_of(self.degrees)

    @property
    def is_empty_space(self) -> bool:
        return self.ambient_dim < 0

    def nonzero(self) -> list[tuple[MultiPoly, int]]:
        return [(f, d) for f, d in zip(self.forms, self.degrees) if not f.is_zero()]

    def over(self, field) -> FormSystem:
        """Same system with coefficients coerced into ``field``."""
        return FormSystem(
            self.ambient_dim,
            tuple(f.map_coeffs(field) for f in self.forms),
            self.degrees,
            self.embedding,
        )

    def vanishes_at(self, point: Sequence[Any]) -> bool:
        return all(is_zero(f.evaluate(point)) for f in self.forms)

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "vars": list(self.vars),
            "degrees": list(self.degrees.entries),
            "forms": [{"terms": f.to_json()["terms"]} for f in self.forms],
        }

    @classmethod
    def from_json(cls, data: dict) -> FormSystem:
        n = int(data["ambient_dim"])
        vars = tuple(data.get("vars") or variables("z", n + 1))
        if len(vars) != n + 1:
            raise PolarConeError(f"ambient_dim {n} needs {n + 1} variables, got {len(vars)}")
        forms = []
        for item in data["forms"]:
            if isinstance(item, str):
                f = poly_parse(item, vars)
            else:
                f = MultiPoly.from_json({"vars": vars, "terms": item["terms"]})
            forms.append(MultiPoly(variables("z", n + 1), f.terms))
        degrees = data.get("degrees")
        return cls.build(n, forms, degrees)

    @classmethod
    def load(cls, path: str) -> FormSystem:
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class SpanningTuple:
    """``span_dim + 1`` linearly independent points spanning a plane."""

    points: tuple[tuple[Any, ...], ...]
    span_dim: int

    def __post_init__(self):
        if len(self.points) != self.span_dim + 1:
            raise PolarConeError(f"{len(self.points)} points cannot span a {self.span_dim}-plane")
        if len({len(p) for p in self.points}) > 1:
            raise PolarConeError("points have different numbers of coordinates")
        if rank(self.points) != len(self.points):
            raise PolarConeError("points are linearly dependent")

    @classmethod
    def of(cls, points: Sequence[Sequence[Any]]) -> SpanningTuple:
        pts = tuple(tuple(p) for p in points)
        return cls(pts, len(pts) - 1)


def parse_points(text: str) -> list[tuple[Fraction, ...]]:
    """``"1,0,0,0; 0,1,0,0"`` -> list of rational points."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip().strip("()")
        if chunk:
            out.append(tuple(Fraction(tok.strip()) for tok in chunk.split(",")))
    return out


# ---------------------------------------------------------------------------
# polar cones


def _check_point(S: FormSystem, x: Sequence[Any]):
    if len(x) != S.ambient_dim + 1:
        raise PolarConeError(f"point has {len(x)} coordinates, expected {S.ambient_dim + 1}")
    if all(is_zero(c) for c in x):
        raise PolarConeError("the zero vector is not a projective point")
    for f in S.forms:
        if not is_zero(f.evaluate(x)):
            raise PolarConeError(f"point does not lie on the form {f}")


def polar_system(S: FormSystem, x0: Sequence[Any]) -> FormSystem:
    """All polars of degree >= 1 of all forms at ``x0`` (zero polars kept)."""
    _check_point(S, x0)
    forms: list[MultiPoly] = []
    degrees: list[int] = []
    for f, d in zip(S.forms, S.degrees):
        pc = polarize(f, x0, degree=d)
        for i in range(1, d + 1):
            forms.append(pc.entries[i])
            degrees.append(i)
    return FormSystem(S.ambient_dim, tuple(forms), DegreeVector(degrees))


def iterated_polar(S: FormSystem, pts: Sequence[Sequence[Any]]) -> FormSystem:
    """Fold :func:`polar_system` along ``pts``; each point must lie on the
    current cone and outside the span of its predecessors."""
    cur = S
    for i, x in enumerate(pts):
        if i and rank([*pts[:i], x]) != i + 1:
            raise PolarConeError(f"point {i} lies in the span of the previous points")
        cur = polar_system(cur, x)
    return cur


def eliminate_linear(S: FormSystem) -> FormSystem:
    """Solve the linear forms and substitute a kernel parametrization.

    The result has no degree-1 forms, ``ambient_dim`` lowered by the rank of
    the linear part (``-1`` if only the zero vector survives), and an
    ``embedding`` back to the coordinates of ``S``.
    """
    n = S.ambient_dim + 1
    lin_rows = []
    others = []
    for f, d in zip(S.forms, S.degrees):
        if d == 1:
            if not f.is_zero():
                lin_rows.append([f.coeff(tuple(int(k == i) for k in range(n))) for i in range(n)])
        else:
            others.append((f, d))
    if not lin_rows:
        return S
    one, zero = _unit(S)
    basis, free = kernel_basis(lin_rows, n, one=one, zero=zero)
    new_n = len(free)
    if new_n == 0:
        return FormSystem(-1, (), DegreeVector(), tuple(tuple() for _ in range(n)))
    new_vars = variables("z", new_n)
    forms = tuple(f.substitute_linear(basis, new_vars) for f, _ in others)
    forms = tuple(MultiPoly(new_vars, f.terms) for f in forms)
    return FormSystem(new_n - 1, forms, DegreeVector(d for _, d in others), tuple(tuple(r) for r in basis))


def _unit(S: FormSystem):
    """Field one and zero matching the coefficients of ``S``."""
    for f in S.forms:
        for c in f.terms.values():
            if isinstance(c, (int, Fraction)):
                return Fraction(1), Fraction(0)
            return c * 0 + 1, c * 0
    return Fraction(1), Fraction(0)


def restrict_to_complement(S_cone: FormSystem, tup: SpanningTuple, eliminate: bool = True) -> FormSystem:
    """Cut ``S_cone`` with the coordinate plane complementary to the span of
    ``tup`` (pivot coordinates of its row-reduced matrix set to zero), then
    optionally eliminate linear forms.  The returned system's ``embedding``
    maps its points into the coordinates of ``S_cone``."""
    n = S_cone.ambient_dim + 1
    if len(tup.points[0]) != n:
        raise PolarConeError("tuple and system live in different ambient spaces")
    _, pivots = rref(tup.points)
    keep = [c for c in range(n) if c not in pivots]
    if not keep:
        raise PolarConeError("the tuple already spans the whole space")
    one, zero = _unit(S_cone)
    matrix = [[one if keep[k] == i else zero for k in range(len(keep))] for i in range(n)]
    new_vars = variables("z", len(keep))
    forms = tuple(MultiPoly(new_vars, f.substitute_linear(matrix, new_vars).terms) for f in S_cone.forms)
    cut = FormSystem(len(keep) - 1, forms, S_cone.degrees, tuple(tuple(r) for r in matrix))
    if not eliminate:
        return cut
    reduced = eliminate_linear(cut)
    if reduced is cut:
        return cut
    return FormSystem(reduced.ambient_dim, reduced.forms, reduced.degrees, _compose(matrix, reduced.embedding))


def _compose(outer: Sequence[Sequence[Any]], inner: Sequence[Sequence[Any]]):
    """Matrix product ``outer @ inner`` for embeddings."""
    if not inner or not inner[0]:
        return tuple(tuple() for _ in outer)
    cols = len(inner[0])
    out = []
    for row in outer:
        new = []
        for c in range(cols):
            acc = 0
            for a, r in zip(row, inner):
                if not is_zero(a) and not is_zero(r[c]):
                    acc = acc + a * r[c]
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def embed_point(embedding: Sequence[Sequence[Any]], point: Sequence[Any]) -> tuple:
    out = []
    for row in embedding:
        acc = 0
        for a, x in zip(row, point):
            if not is_zero(a):
                acc = acc + a * x
        out.append(acc)
    return tuple(out)


# ---------------------------------------------------------------------------
# containment checks


def _restrict_to_span(S: FormSystem, points: Sequence[Sequence[Any]]) -> list[MultiPoly]:
    tvars = variables("t", len(points))
    n = S.ambient_dim + 1
    images = []
    for i in range(n):
        terms = {}
        for k, p in enumerate(points):
            if not is_zero(p[i]):
                terms[tuple(int(m == k) for m in range(len(points)))] = p[i]
        images.append(MultiPoly(tvars, terms))
    return [f.compose(images, tvars) for f in S.forms]


def line_in_variety_check(S: FormSystem, x: Sequence[Any], y: Sequence[Any]) -> bool:
    """True iff every form vanishes identically on the line through x and y."""
    if rank([list(x), list(y)]) != 2:
        raise PolarConeError("x and y must be linearly independent")
    return all(g.is_zero() for g in _restrict_to_span(S, [x, y]))


def plane_in_variety_check(S: FormSystem, tup: SpanningTuple) -> bool:
    """True iff every form vanishes identically on the span of the tuple."""
    return all(g.is_zero() for g in _restrict_to_span(S, tup.points))
