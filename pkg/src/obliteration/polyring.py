"""Sparse multivariate polynomials with exact coefficients, and polars.

Coefficients may be ints, :class:`fractions.Fraction`, or any field element
implementing the arithmetic dunders plus ``is_zero()`` (finite-field tower
elements and certified numbers both qualify).  Terms are stored in a dict
keyed by exponent tuples; zero coefficients are never stored, so two
polynomials over the same variables are equal iff their dicts are equal.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Iterable, Mapping, Sequence

__all__ = [
    "PolySyntaxError",
    "MultiPoly",
    "PolarCoefficients",
    "is_zero",
    "poly_parse",
    "poly_format",
    "polarize",
    "polarize_via_derivatives",
    "variables",
]


class PolySyntaxError(ValueError):
    """Raised by :func:`poly_parse`; ``position`` is the offending offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def is_zero(c: Any) -> bool:
    test = getattr(c, "is_zero", None)
    if test is not None:
        return test()
    return c == 0


def _grlex_key(exp: tuple[int, ...]):
    return (-sum(exp), tuple(-e for e in exp))


class MultiPoly:
    """Immutable sparse polynomial over an ordered tuple of variable names."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple[int, ...], Any] | None = None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match {n} variables")
            if not is_zero(c):
                clean[exp] = c
        self.terms = clean

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str]) -> MultiPoly:
        return cls(vars)

    @classmethod
    def constant(cls, vars: Sequence[str], c: Any) -> MultiPoly:
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars: Sequence[str], name: str | int) -> MultiPoly:
        vars = tuple(vars)
        idx = vars.index(name) if isinstance(name, str) else name
        exp = [0] * len(vars)
        exp[idx] = 1
        return cls(vars, {tuple(exp): 1})

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict) -> MultiPoly:
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        return obj

    # basic queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if not self.terms:
            return other == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Any]]:
        """Terms in graded lexicographic order (highest degree first)."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def coeff(self, exp: Sequence[int]) -> Any:
        return self.terms.get(tuple(exp), 0)

    def degree_in(self, var: str | int) -> int:
        idx = self.vars.index(var) if isinstance(var, str) else var
        return max((e[idx] for e in self.terms), default=-1)

    # arithmetic -------------------------------------------------------------
    def _check(self, other: MultiPoly):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _lift(self, other: Any) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.vars, other)

    def __add__(self, other: Any) -> MultiPoly:
        other = self._lift(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            if exp in out:
                s = out[exp] + c
                if is_zero(s):
                    del out[exp]
                else:
                    out[exp] = s
            else:
                out[exp] = c
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Any) -> MultiPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> MultiPoly:
        return self._lift(other) - self

    def scale(self, c: Any) -> MultiPoly:
        if is_zero(c):
            return MultiPoly.zero(self.vars)
        return MultiPoly(self.vars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: Any) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                if e in out:
                    out[e] = out[e] + p
                else:
                    out[e] = p
        return MultiPoly(self.vars, out)

    def __rmul__(self, other: Any) -> MultiPoly:
        return self.scale(other)

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_coeffs(self, fn) -> MultiPoly:
        return MultiPoly(self.vars, {e: fn(c) for e, c in self.terms.items()})

    # evaluation and substitution -------------------------------------------
    def evaluate(self, point: Sequence[Any]) -> Any:
        if len(point) != len(self.vars):
            raise ValueError(f"point has {len(point)} coordinates, expected {len(self.vars)}")
        powers: list[list[Any]] = [[1] for _ in point]
        total: Any = 0
        for exp, c in self.terms.items():
            term = c
            for i, e in enumerate(exp):
                if e:
                    pw = powers[i]
                    while len(pw) <= e:
                        pw.append(pw[-1] * point[i])
                    term = term * pw[e]
            total = total + term
        return total

    __call__ = evaluate

    def compose(self, images: Sequence[MultiPoly], target_vars: Sequence[str] | None = None) -> MultiPoly:
        """Substitute ``images[i]`` for the i-th variable (all images share a ring)."""
        if len(images) != len(self.vars):
            raise ValueError(f"expected {len(self.vars)} images, got {len(images)}")
        if target_vars is None:
            if not images:
                raise ValueError("target_vars required when there are no variables")
            target_vars = images[0].vars
        target_vars = tuple(target_vars)
        for im in images:
            if im.vars != target_vars:
                raise ValueError("all images must live in the target ring")
        powers: list[list[MultiPoly]] = [[MultiPoly.constant(target_vars, 1)] for _ in images]
        acc: dict = {}
        for exp, c in self.terms.items():
            prod = MultiPoly.constant(target_vars, c)
            for i, e in enumerate(exp):
                if e:
                    pw = powers[i]
                    while len(pw) <= e:
                        pw.append(pw[-1] * images[i])
                    prod = prod * pw[e]
            for e2, c2 in prod.terms.items():
                acc[e2] = acc[e2] + c2 if e2 in acc else c2
        return MultiPoly(target_vars, acc)

    def substitute(self, mapping: Mapping[str, Any]) -> MultiPoly:
        """Replace some variables by constants or polynomials in the same ring."""
        images = []
        for i, name in enumerate(self.vars):
            if name in mapping:
                images.append(self._lift(mapping[name]))
            else:
                images.append(MultiPoly.var(self.vars, i))
        return self.compose(images, self.vars)

    def substitute_linear(self, matrix: Sequence[Sequence[Any]], new_vars: Sequence[str]) -> MultiPoly:
        """Apply ``z_i -> sum_k matrix[i][k] * w_k``.

        ``matrix`` has one row per current variable and one column per new
        variable.
        """
        new_vars = tuple(new_vars)
        if len(matrix) != len(self.vars) or any(len(row) != len(new_vars) for row in matrix):
            raise ValueError(
                f"substitution matrix must be {len(self.vars)}x{len(new_vars)}"
            )
        images = [
            MultiPoly(new_vars, {tuple(int(k == i) for k in range(len(new_vars))): a for i, a in enumerate(row)})
            for row in matrix
        ]
        return self.compose(images, new_vars)

    def derivative(self, var: str | int) -> MultiPoly:
        idx = self.vars.index(var) if isinstance(var, str) else var
        out = {}
        for exp, c in self.terms.items():
            e = exp[idx]
            if e:
                new = list(exp)
                new[idx] -= 1
                out[tuple(new)] = c * e
        return MultiPoly(self.vars, out)

    def homogeneous_part(self, degree: int) -> MultiPoly:
        return MultiPoly._raw(self.vars, {e: c for e, c in self.terms.items() if sum(e) == degree})

    # text and json ------------------------------------------------------------
    def __str__(self) -> str:
        return poly_format(self)

    def __repr__(self) -> str:
        return f"MultiPoly({poly_format(self)!r}, vars={self.vars})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"exp": list(e), "coeff": _coeff_text(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any], coerce=Fraction) -> MultiPoly:
        vars = tuple(data["vars"])
        terms: dict = {}
        for t in data["terms"]:
            exp = tuple(t["exp"])
            c = coerce(Fraction(t["coeff"]))
            terms[exp] = terms[exp] + c if exp in terms else c
        return cls(vars, terms)


def variables(prefix: str, count: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(count))


def _coeff_text(c: Any) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


# ---------------------------------------------------------------------------
# parsing and formatting

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def poly_parse(text: str, vars: Sequence[str]) -> MultiPoly:
    """Parse a sum of monomials such as ``"x0*x3 - 3/2*x1^2"``.

    Coefficients are integers or ``a/b`` rationals; powers use ``^`` or
    ``**``.  Raises :class:`PolySyntaxError` with a position for malformed
    input and for names that are not among ``vars``.
    """
    vars = tuple(vars)
    index = {v: i for i, v in enumerate(vars)}
    toks = _tokenize(text)
    k = 0
    terms: dict = {}

    def peek():
        return toks[k]

    first = True
    while True:
        kind, val, pos = peek()
        sign = 1
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            k += 1
        elif not first:
            if kind == "end":
                break
            raise PolySyntaxError(f"expected '+' or '-' but found {val!r}", pos)
        elif kind == "end":
            raise PolySyntaxError("empty polynomial", pos)
        first = False
        coeff = Fraction(sign)
        exp = [0] * len(vars)
        expect_factor = True
        seen_factor = False
        while expect_factor:
            kind, val, pos = peek()
            if kind == "num":
                frac = Fraction(val)
                if frac.denominator == 0:
                    raise PolySyntaxError("zero denominator", pos)
                coeff *= frac
                k += 1
            elif kind == "name":
                if val not in index:
                    raise PolySyntaxError(f"unknown variable {val!r}", pos)
                k += 1
                power = 1
                kind2, val2, pos2 = peek()
                if kind2 == "op" and val2 in ("^", "**"):
                    k += 1
                    kind3, val3, pos3 = peek()
                    if kind3 != "num" or "/" in val3:
                        raise PolySyntaxError("expected integer exponent", pos3)
                    power = int(val3)
                    k += 1
                exp[index[val]] += power
            else:
                raise PolySyntaxError(f"expected coefficient or variable, found {val or 'end of input'!r}", pos)
            seen_factor = True
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                k += 1
            else:
                expect_factor = False
        assert seen_factor
        e = tuple(exp)
        terms[e] = terms.get(e, 0) + coeff
    return MultiPoly(vars, terms)


def poly_format(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for exp, c in p.sorted_terms():
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(p.vars, exp) if e
        )
        negative = False
        if isinstance(c, (int, Fraction)):
            negative = c < 0
            mag = -c if negative else c
            ctext = _coeff_text(Fraction(mag))
        else:
            ctext = f"({c})"
        if mono:
            body = mono if ctext == "1" else f"{ctext}*{mono}"
        else:
            body = ctext
        if not parts:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append(("- " if negative else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# polars


@dataclass(frozen=True)
class PolarCoefficients:
    """Polars of a degree-``d`` form at a point.

    ``entries[i]`` is homogeneous of degree ``i`` in the point variable y and
    satisfies ``f(lam*x + mu*y) = sum_i entries[i](y) * lam^(d-i) * mu^i / i!``.
    Hence ``entries[0]`` is the constant ``f(x)``, ``entries[1]`` is the
    tangent hyperplane, and ``entries[d]`` is ``d! * f``.
    """

    degree: int
    entries: tuple[MultiPoly, ...]

    def cone_forms(self) -> list[MultiPoly]:
        """The polars of degrees ``1..d`` that cut out the polar cone."""
        return list(self.entries[1:])


def _homogeneous_degree(f: MultiPoly) -> int:
    degs = f.degrees()
    if len(degs) > 1:
        raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degs)})")
    if not degs:
        raise ValueError("cannot polarize the zero polynomial without a degree")
    return degs.pop()


def polarize(f: MultiPoly, x: Sequence[Any], degree: int | None = None) -> PolarCoefficients:
    """Polars of ``f`` at ``x`` by expanding ``f(lam*x + mu*y)``.

    ``degree`` is only needed for the zero form, whose polars are all zero.
    """
    if len(x) != len(f.vars):
        raise ValueError(f"point has {len(x)} coordinates, expected {len(f.vars)}")
    if f.is_zero():
        if degree is None:
            raise ValueError("degree required for the zero form")
        z = MultiPoly.zero(f.vars)
        return PolarCoefficients(degree, tuple(z for _ in range(degree + 1)))
    d = _homogeneous_degree(f)
    if degree is not None and degree != d:
        raise ValueError(f"form has degree {d}, not {degree}")
    n = len(f.vars)
    ring = ("_lam", "_mu") + f.vars
    images = []
    for i, xi in enumerate(x):
        terms = {}
        mu_e = [0, 1] + [0] * n
        mu_e[2 + i] = 1
        terms[tuple(mu_e)] = 1
        if not is_zero(xi):
            lam_e = [1, 0] + [0] * n
            terms[tuple(lam_e)] = xi
        images.append(MultiPoly(ring, terms))
    expanded = f.compose(images, ring)
    buckets: list[dict] = [dict() for _ in range(d + 1)]
    for exp, c in expanded.terms.items():
        i = exp[1]
        buckets[i][exp[2:]] = c * factorial(i)
    return PolarCoefficients(d, tuple(MultiPoly(f.vars, b) for b in buckets))


def polarize_via_derivatives(f: MultiPoly, x: Sequence[Any], degree: int | None = None) -> PolarCoefficients:
    """Independent path: ``entries[i](y) = sum_{|a|=i} i!/a! * (d^a f)(x) * y^a``."""
    if len(x) != len(f.vars):
        raise ValueError(f"point has {len(x)} coordinates, expected {len(f.vars)}")
    if f.is_zero():
        if degree is None:
            raise ValueError("degree required for the zero form")
        z = MultiPoly.zero(f.vars)
        return PolarCoefficients(degree, tuple(z for _ in range(degree + 1)))
    d = _homogeneous_degree(f)
    n = len(f.vars)
    cache: dict[tuple[int, ...], MultiPoly] = {(0,) * n: f}

    def deriv(alpha: tuple[int, ...]) -> MultiPoly:
        if alpha in cache:
            return cache[alpha]
        k = next(i for i, a in enumerate(alpha) if a)
        lower = list(alpha)
        lower[k] -= 1
        out = deriv(tuple(lower)).derivative(k)
        cache[alpha] = out
        return out

    entries = []
    for i in range(d + 1):
        terms = {}
        for combo in itertools.combinations_with_replacement(range(n), i):
            alpha = [0] * n
            for v in combo:
                alpha[v] += 1
            alpha = tuple(alpha)
            val = deriv(alpha).evaluate(x)
            if is_zero(val):
                continue
            weight = factorial(i)
            for a in alpha:
                weight //= factorial(a)
            terms[alpha] = val * weight
        entries.append(MultiPoly(f.vars, terms))
    return PolarCoefficients(d, tuple(entries))
