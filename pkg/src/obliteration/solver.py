"""Constructive point and plane finding by obliteration.

To find a point on ``Y ∩ Z`` with ``Y`` a form of top degree, find a line on
``Z`` and cut it with ``Y``: one univariate equation of degree at most 4.  A
line on ``Z`` comes from a point ``x0`` on ``Z`` plus a point on the polar
cone of ``Z`` at ``x0``, cut down to a complementary plane.  Two quadrics
are handled together: find a 2-plane on the rest and intersect two conics.

Every coordinate produced is either exact or carries a radical certificate
(numeric mode) or lives in an explicit finite-field tower (finite mode).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import mpmath

from .bounds import BoundQuery, fj_bound
from .polarcone import (
    FormSystem,
    PolarConeError,
    SpanningTuple,
    eliminate_linear,
    embed_point,
    polar_system,
    restrict_to_complement,
)
from .linalg import rank
from .polyring import MultiPoly, is_zero, polarize
from .solvfield import (
    CertificateError,
    CNum,
    IdenticallyZero,
    NumericField,
    TowerCapExceeded,
    certificate_depth,
    eval_certificate,
    root_degrees,
)

__all__ = [
    "SolveFailure",
    "NoPoints",
    "SolveOutcome",
    "VerifyReport",
    "eliminate_linear",
    "find_point",
    "find_linear_subspace",
    "verify_point",
    "guaranteed_bound",
]

log = logging.getLogger(__name__)

MAX_DEGREE = 4
DEFAULT_RETRIES = 10


class SolveFailure(RuntimeError):
    """No point was produced within the retry budget."""


class NoPoints(SolveFailure):
    """The system has no points at all (e.g. the linear forms leave only the
    zero vector)."""


class _Exhausted(SolveFailure):
    """The overall retry allowance of a search is used up."""


_RETRYABLE = (SolveFailure, PolarConeError, ZeroDivisionError, IdenticallyZero, CertificateError)


@dataclass
class SolveOutcome:
    """Points found on a system; one point, or ``j + 1`` spanning a j-plane."""

    points: list[tuple[Any, ...]]
    field: Any
    strategy_log: list[dict]
    j: int = 0
    guaranteed: int | None = None
    outside_guaranteed_range: bool = False
    retries: int = 0

    @property
    def point(self) -> tuple[Any, ...]:
        return self.points[0]

    @property
    def type_sequence(self) -> list[list[int]]:
        return [e["type"] for e in self.strategy_log if e["step"] == "system"]

    def coordinate_nodes(self) -> list[int]:
        return [c.node for p in self.points for c in p]

    def certificate(self) -> dict | None:
        if self.field.kind != "numeric":
            return None
        return self.field.store.to_json(self.coordinate_nodes())

    def max_depth(self) -> int:
        if self.field.kind != "numeric":
            return 0
        return max((certificate_depth(self.field.store, n) for n in self.coordinate_nodes()), default=0)

    def adjunction_degrees(self) -> list[int]:
        if self.field.kind != "numeric":
            return []
        return root_degrees(self.field.store, self.coordinate_nodes())

    def _coord_json(self, c) -> Any:
        if self.field.kind == "numeric":
            c = self.field(c)
            return {"node": c.node, "approx": mpmath.nstr(c.value, 20)}
        return list(self.field(c).coeffs_top())

    def to_json(self) -> dict:
        out = {
            "mode": self.field.kind,
            "field": self.field.describe(),
            "j": self.j,
            "points": [[self._coord_json(c) for c in p] for p in self.points],
            "strategy_log": self.strategy_log,
            "type_sequence": self.type_sequence,
            "guaranteed_bound": self.guaranteed,
            "outside_guaranteed_range": self.outside_guaranteed_range,
            "retries": self.retries,
        }
        cert = self.certificate()
        if cert is not None:
            # outputs are the coordinates in row-major order
            out["certificate"] = cert
            out["shape"] = [len(self.points), len(self.points[0])]
            # node ids in "points" refer to the live store; rewrite them to
            # positions in the exported certificate
            for i, p in enumerate(out["points"]):
                for k, c in enumerate(p):
                    c["node"] = cert["outputs"][i * len(p) + k]
        return out


def guaranteed_bound(S: FormSystem, j: int = 0) -> int:
    """Ambient dimension from which the closed-form bound guarantees success:
    ``f_j(m2, m3, m4) + m1``."""
    m = S.type
    if len(m) > MAX_DEGREE:
        raise ValueError(f"forms of degree {len(m)} are outside the solvable range (max {MAX_DEGREE})")
    return fj_bound(BoundQuery(j, m[2], m[3], m[4])).value + m[1]


# ---------------------------------------------------------------------------
# the recursive search


class _Search:
    def __init__(self, field, seed: int, retries: int):
        self.field = field
        self.rng = random.Random(seed)
        self.retries = retries
        self.log: list[dict] = []
        self.retry_count = 0
        # nested steps each get ``retries`` attempts; this caps the product
        self.total_budget = retries * 20

    # helpers ---------------------------------------------------------------
    def _rand(self):
        return self.field.random_element(self.rng)

    def _rand_point(self, n: int) -> tuple:
        while True:
            p = tuple(self._rand() for _ in range(n))
            if not all(is_zero(c) for c in p):
                return p

    def _rand_line(self, n: int) -> tuple[tuple, tuple]:
        while True:
            a, b = self._rand_point(n), self._rand_point(n)
            if rank([a, b]) == 2:
                return a, b

    def _note(self, step: str, S: FormSystem | None = None, **extra):
        entry: dict = {"step": step}
        if S is not None:
            entry["ambient_dim"] = S.ambient_dim
            entry["type"] = list(S.type.entries)
        entry.update(extra)
        self.log.append(entry)

    def _one_root(self, coeffs: Sequence[Any]):
        """A root of a univariate polynomial (raises IdenticallyZero)."""
        cs = list(coeffs)
        while cs and is_zero(cs[-1]):
            cs.pop()
        if not cs:
            raise IdenticallyZero("polynomial vanishes identically")
        if len(cs) == 1:
            return None
        if len(cs) == 2:
            return -self.field(cs[0]) / self.field(cs[1])
        return self.field.adjoin_root(cs, 0)

    def _binary_root(self, coeffs: Sequence[Any]) -> tuple:
        """Root ``(s, t)`` of ``sum coeffs[k] s^(d-k) t^k``; ``(0, 1)`` when
        the root sits at infinity."""
        t = self._one_root(coeffs)
        if t is None:
            return self.field.zero, self.field.one
        return self.field.one, t

    def _restrict_to_line(self, f: MultiPoly, a: Sequence[Any], b: Sequence[Any]) -> list:
        tv = ("t",)
        images = [MultiPoly(tv, {(0,): ai, (1,): bi}) for ai, bi in zip(a, b)]
        g = f.compose(images, tv)
        return [g.coeff((k,)) for k in range(f.total_degree() + 1)]

    def _cut_line(self, f: MultiPoly, a: Sequence[Any], b: Sequence[Any]) -> tuple:
        """A point of ``V(f)`` on the line through ``a`` and ``b``."""
        try:
            s, t = self._binary_root(self._restrict_to_line(f, a, b))
        except IdenticallyZero:
            self._note("line-contained")
            return tuple(a)
        x = tuple(s * ai + t * bi for ai, bi in zip(a, b))
        if all(is_zero(c) for c in x):
            raise SolveFailure("line cut collapsed to the zero vector")
        return x

    # points ----------------------------------------------------------------
    def point(self, S: FormSystem) -> tuple:
        last: Exception | None = None
        for attempt in range(self.retries):
            try:
                return self._point_once(S)
            except _Exhausted:
                raise
            except NoPoints as exc:
                # hopeless at this level; the caller retries with new choices
                raise SolveFailure(str(exc)) from exc
            except _RETRYABLE as exc:
                last = exc
                self.retry_count += 1
                if self.retry_count > self.total_budget:
                    raise _Exhausted(f"overall retry allowance of {self.total_budget} used up: {exc}") from exc
                self._note("retry", S, attempt=attempt + 1, reason=str(exc)[:120])
        raise SolveFailure(f"retry budget of {self.retries} exhausted: {last}")

    def _point_once(self, S: FormSystem) -> tuple:
        R = eliminate_linear(S)
        emb = None if R is S else R.embedding
        if R.ambient_dim < 0:
            raise NoPoints("linear forms cut out the empty set")
        self._note("system", R)
        x = self._point_reduced(R)
        return embed_point(emb, x) if emb is not None else x

    def _point_reduced(self, S: FormSystem) -> tuple:
        n = S.ambient_dim + 1
        forms = sorted(S.nonzero(), key=lambda fd: -fd[1])
        if not forms:
            return self._rand_point(n)
        if forms[0][1] > MAX_DEGREE:
            raise ValueError(f"degree {forms[0][1]} exceeds {MAX_DEGREE}")
        if n == 1:
            raise NoPoints("a nonzero form has no zeros on a point")
        if len(forms) == 1:
            f, d = forms[0]
            self._note("cut-random-line", degree=d)
            return self._cut_line(f, *self._rand_line(n))
        if forms[0][1] == 2 and forms[1][1] == 2:
            return self._quadric_pair(S, forms)
        (f, d), rest = forms[0], forms[1:]
        self._note("obliterate", degree=d, via="line")
        Z = FormSystem(S.ambient_dim, tuple(g for g, _ in rest), type(S.degrees)(e for _, e in rest))
        a, b = self.subspace(Z, 1)
        return self._cut_line(f, a, b)

    def _quadric_pair(self, S: FormSystem, forms) -> tuple:
        (q1, _), (q2, _), rest = forms[0], forms[1], forms[2:]
        self._note("obliterate", degree=2, via="plane", count=2)
        if S.ambient_dim < 2:
            raise SolveFailure("two quadrics need at least a plane")
        Z = FormSystem(S.ambient_dim, tuple(g for g, _ in rest), type(S.degrees)(e for _, e in rest))
        plane = self.subspace(Z, 2)
        pv = ("w0", "w1", "w2")
        basis = [MultiPoly(pv, {tuple(int(k == i) for k in range(3)): 1}) for i in range(3)]
        images = []
        for c in range(S.ambient_dim + 1):
            acc = MultiPoly.zero(pv)
            for i in range(3):
                if not is_zero(plane[i][c]):
                    acc = acc + basis[i].scale(plane[i][c])
            images.append(acc)
        c1, c2 = q1.compose(images, pv), q2.compose(images, pv)
        u = self._conic_pair(c1, c2)
        return tuple(sum((u[i] * plane[i][c] for i in range(3)), self.field.zero) for c in range(S.ambient_dim + 1))

    def _conic_pair(self, c1: MultiPoly, c2: MultiPoly) -> tuple:
        """A common zero of two ternary quadratic forms."""
        if c1.is_zero():
            c1, c2 = c2, c1
        if c1.is_zero():
            return self._rand_point(3)
        p = self._cut_line(c1, *self._rand_line(3))
        if all(is_zero(x) for x in p):
            raise SolveFailure("degenerate point on the first conic")
        if c2.is_zero() or is_zero(c2.evaluate(p)):
            return p
        # lines through p meet c1 again at r(q) = -c1(q) p + L(q) q, where
        # c1(s p + t q) = s t L(q) + t^2 c1(q)
        lin = polarize(c1, p, degree=2).entries[1]
        a, b = self._rand_line(3)
        uv = ("u",)
        q = [MultiPoly(uv, {(0,): ai, (1,): bi}) for ai, bi in zip(a, b)]
        c1q = c1.compose(q, uv)
        lq = lin.compose(q, uv)
        r = [lq * qi - c1q.scale(pi) for qi, pi in zip(q, p)]
        if all(ri.is_zero() for ri in r):
            raise SolveFailure("conic parametrization collapsed")
        h = c2.compose(r, uv)
        try:
            s, t = self._binary_root([h.coeff((k,)) for k in range(5)])
        except IdenticallyZero:
            self._note("conic-component-shared")
            s, t = self.field.one, self.field.zero
        qs = [s * ai + t * bi for ai, bi in zip(a, b)]
        c1v = c1.evaluate(qs)
        lv = lin.evaluate(qs)
        pt = tuple(lv * qi - c1v * pi for qi, pi in zip(qs, p))
        if all(is_zero(x) for x in pt):
            raise SolveFailure("conic intersection landed on the zero vector")
        return pt

    # planes ----------------------------------------------------------------
    def subspace(self, S: FormSystem, j: int, x0: Sequence[Any] | None = None) -> list[tuple]:
        pts = [tuple(x0) if x0 is not None else self.point(S)]
        cone = S
        for i in range(1, j + 1):
            cone = polar_system(cone, pts[-1])
            chart = restrict_to_complement(cone, SpanningTuple.of(pts))
            self._note("extend", chart, index=i, cone_type=list(cone.type.entries))
            y = self.point(chart)
            pts.append(embed_point(chart.embedding, y))
        return pts


# ---------------------------------------------------------------------------
# public entry points


def _prepare(S: FormSystem, field) -> FormSystem:
    if S.degrees.entries and max(S.degrees) > MAX_DEGREE:
        raise ValueError(f"forms of degree > {MAX_DEGREE} are not solvable in radicals")
    return S.over(field)


def _finish(search: _Search, S: FormSystem, pts: list[tuple], j: int) -> SolveOutcome:
    try:
        bound = guaranteed_bound(S, j)
    except ValueError:
        bound = None
    return SolveOutcome(
        points=[tuple(search.field(c) for c in p) for p in pts],
        field=search.field,
        strategy_log=search.log,
        j=j,
        guaranteed=bound,
        outside_guaranteed_range=bound is not None and S.ambient_dim < bound,
        retries=search.retry_count,
    )


def find_point(S: FormSystem, field, seed: int = 0, retries: int = DEFAULT_RETRIES) -> SolveOutcome:
    """One point on ``S`` over ``field`` (a :class:`NumericField` or
    :class:`FiniteField`).  Raises :class:`SolveFailure` when the retry
    budget runs out and :class:`NoPoints` when the linear forms leave
    nothing.  Below the guaranteed ambient dimension the search still runs
    and the outcome is flagged."""
    search = _Search(field, seed, retries)
    T = _prepare(S, field)
    if eliminate_linear(T).ambient_dim < 0:
        raise NoPoints("linear forms cut out the empty set")
    pt = search.point(T)
    return _finish(search, S, [pt], 0)


def find_linear_subspace(
    S: FormSystem,
    j: int,
    field,
    seed: int = 0,
    retries: int = DEFAULT_RETRIES,
    x0: Sequence[Any] | None = None,
) -> SolveOutcome:
    """``j + 1`` points spanning a j-plane inside ``S``.  If ``x0`` is given
    it is used as the first point and only the extension steps run."""
    if j < 0:
        raise ValueError("j must be non-negative")
    search = _Search(field, seed, retries)
    T = _prepare(S, field)
    if x0 is not None:
        x0 = tuple(field(c) for c in x0)
    pts = search.subspace(T, j, x0)
    return _finish(search, S, pts, j)


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    passed: bool
    mode: str
    tolerance: float | None
    residuals: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "mode": self.mode, "tolerance": self.tolerance, "residuals": self.residuals}


def _l1(f: MultiPoly, ctx) -> Any:
    total = ctx.mpf(0)
    for c in f.terms.values():
        c = Fraction(c)
        total += abs(ctx.mpf(c.numerator) / c.denominator)
    return total


def verify_point(
    S: FormSystem,
    outcome: SolveOutcome,
    tolerance: float = 1e-50,
    precision_digits: int | None = None,
) -> VerifyReport:
    """Check that every form of ``S`` vanishes on the outcome.

    For several points the form is restricted to their span and every
    coefficient of the restriction is checked, so a plane is verified as an
    identity rather than by sampling.  Numeric mode re-derives coordinates
    from the certificates alone and reports, per form, the largest
    coefficient of the restriction relative to ``||f||_1 * ||x||^deg``.
    Finite mode demands exact zeros.
    """
    fld = outcome.field
    k = len(outcome.points)
    tv = tuple(f"t{i}" for i in range(k))
    if fld.kind == "finite":
        T = S.over(fld)
        rows = []
        ok = True
        for idx, f in enumerate(T.forms):
            g = _restrict_span(f, outcome.points, tv)
            nz = len(g.terms)
            ok = ok and nz == 0
            rows.append({"form": idx, "nonzero_coefficients": nz})
        return VerifyReport(ok, "finite", None, rows)

    prec = precision_digits or fld.precision_digits
    ctx = mpmath.MPContext()
    ctx.dps = prec + 20
    nodes = outcome.coordinate_nodes()
    vals = eval_certificate(fld.store, nodes, prec)
    n = len(outcome.points[0])
    pts = [[ctx.mpc(vals[i * n + c]) for c in range(n)] for i in range(k)]
    xnorm = max(abs(v) for p in pts for v in p)
    rows = []
    ok = True
    tol = ctx.mpf(tolerance)
    for idx, (f, d) in enumerate(zip(S.forms, S.degrees)):
        if f.is_zero():
            rows.append({"form": idx, "residual": "0"})
            continue
        fm = f.map_coeffs(lambda c: ctx.mpf(Fraction(c).numerator) / Fraction(c).denominator)
        g = _restrict_span(fm, pts, tv)
        worst = max((abs(c) for c in g.terms.values()), default=ctx.mpf(0))
        rel = worst / (_l1(f, ctx) * xnorm**d)
        ok = ok and rel <= tol
        rows.append({"form": idx, "residual": mpmath.nstr(rel, 5)})
    return VerifyReport(bool(ok), "numeric", tolerance, rows)


def _restrict_span(f: MultiPoly, points: Sequence[Sequence[Any]], tv: tuple[str, ...]) -> MultiPoly:
    k = len(points)
    images = []
    for c in range(len(f.vars)):
        terms = {}
        for i in range(k):
            if not is_zero(points[i][c]):
                terms[tuple(int(m == i) for m in range(k))] = points[i][c]
        images.append(MultiPoly(tv, terms))
    return f.compose(images, tv)
