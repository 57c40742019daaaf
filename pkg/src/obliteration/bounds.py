"""Upper bounds on f_j(m2, m3, m4), the ambient dimension past which every
intersection of m2 quadrics, m3 cubics and m4 quartics has dense solvable
j-planes.

Two routes are provided.  :func:`fj_bound` composes the closed forms and is
what the published tables contain.  :func:`fj_search` explores obliteration
moves (trade a form for a line or plane on the rest) and never does worse.
Both return a :class:`BoundResult` whose trace sums back to the value.
"""

from __future__ import annotations

import csv
import io
import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Literal

from .polyring import MultiPoly, poly_parse
from . import _appendix

__all__ = [
    "BoundQuery",
    "TraceStep",
    "BoundResult",
    "f0_quadrics",
    "f0_quadrics_cubics",
    "f0_full",
    "fj_bound",
    "fj_search",
    "planes_offset",
    "raised_query",
    "q_polynomial",
    "p_polynomial",
    "printed_q_polynomial",
    "compare_with_printed",
    "comparison_bounds",
    "emit_table",
    "table_values",
    "Q_VARS",
]

Q_VARS = ("j", "m2", "m3", "m4")
KINDS = ("quadric", "cubic", "quartic")


@dataclass(frozen=True)
class BoundQuery:
    j: int = 0
    m2: int = 0
    m3: int = 0
    m4: int = 0

    def __post_init__(self):
        for name in ("j", "m2", "m3", "m4"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def as_dict(self) -> dict:
        return {"j": self.j, "m2": self.m2, "m3": self.m3, "m4": self.m4}

    def __str__(self) -> str:
        return f"f_{self.j}({self.m2},{self.m3},{self.m4})"


@dataclass(frozen=True)
class TraceStep:
    """One derivation step: ``query`` is bounded by ``offset`` plus whatever
    bounds ``reduces_to`` (``None`` when the step is terminal)."""

    rule: str
    query: BoundQuery
    offset: int
    reduces_to: BoundQuery | None = None

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "query": self.query.as_dict(),
            "offset": self.offset,
            "reduces_to": None if self.reduces_to is None else self.reduces_to.as_dict(),
        }


@dataclass(frozen=True)
class BoundResult:
    query: BoundQuery
    value: int
    trace: tuple[TraceStep, ...] = field(default=())

    def replay(self) -> int:
        """Recompute the value from the trace, checking the chain links up."""
        expected = self.query
        total = 0
        for step in self.trace:
            if step.query != expected:
                raise ValueError(f"trace breaks at {step.rule}: {step.query} != {expected}")
            total += step.offset
            expected = step.reduces_to
        if expected is not None:
            raise ValueError(f"trace ends at non-terminal {expected}")
        return total

    def as_dict(self) -> dict:
        return {
            "query": self.query.as_dict(),
            "value": self.value,
            "trace": [s.as_dict() for s in self.trace],
        }


# ---------------------------------------------------------------------------
# closed forms


def f0_quadrics(m2: int) -> int:
    return ((m2 + 1) // 2) ** 2 + (m2 // 2) ** 2


def _cubic_term(m2: int, m3: int) -> int:
    num = m3 * (3 * m2 + m3 * m3 + 2)
    q, r = divmod(num, 3)
    assert r == 0, (m2, m3)
    return q


def _quartic_term(m4: int) -> int:
    num = m4 * (m4 + 3) * (m4 * m4 - m4 + 2)
    q, r = divmod(num, 8)
    assert r == 0, m4
    return q


def f0_quadrics_cubics(m2: int, m3: int) -> int:
    return f0_quadrics(m2 + comb(m3, 2)) + _cubic_term(m2, m3)


def _quartic_reduction(m2: int, m3: int, m4: int) -> tuple[int, int, int]:
    """(new m2, new m3, offset) after collapsing all quartics."""
    a = m2 + m3 * m4 + 2 * comb(m4 + 1, 3)
    b = m3 + comb(m4, 2)
    offset = m2 * m4 + m3 * comb(m4 + 1, 2) + _quartic_term(m4)
    return a, b, offset


def f0_full(m2: int, m3: int, m4: int) -> int:
    a, b, offset = _quartic_reduction(m2, m3, m4)
    return f0_quadrics_cubics(a, b) + offset


def planes_offset(j: int, m2: int, m3: int, m4: int) -> int:
    """Dimension spent realizing j-planes through a polar-cone tower."""
    return j + j * m2 + comb(j + 1, 2) * m3 + comb(j + 2, 3) * m4


def raised_query(j: int, m2: int, m3: int, m4: int) -> tuple[int, int, int]:
    """Type of the point problem whose solutions extend a (j-1)-plane to a j-plane."""
    return m2 + j * m3 + comb(j + 1, 2) * m4, m3 + j * m4, m4


def fj_bound(q: BoundQuery) -> BoundResult:
    """Closed-form bound; reproduces every cell of the published tables."""
    steps: list[TraceStep] = []
    cur = q
    if q.j:
        a, b, c = raised_query(q.j, q.m2, q.m3, q.m4)
        nxt = BoundQuery(0, a, b, c)
        steps.append(TraceStep("planes-from-points", cur, planes_offset(q.j, q.m2, q.m3, q.m4), nxt))
        cur = nxt
    if cur.m4:
        a, b, off = _quartic_reduction(cur.m2, cur.m3, cur.m4)
        nxt = BoundQuery(0, a, b, 0)
        steps.append(TraceStep("quartics-closed-form", cur, off, nxt))
        cur = nxt
    if cur.m3:
        nxt = BoundQuery(0, cur.m2 + comb(cur.m3, 2), 0, 0)
        steps.append(TraceStep("cubics-closed-form", cur, _cubic_term(cur.m2, cur.m3), nxt))
        cur = nxt
    steps.append(TraceStep("quadrics-closed-form", cur, f0_quadrics(cur.m2), None))
    value = sum(s.offset for s in steps)
    return BoundResult(q, value, tuple(steps))


# ---------------------------------------------------------------------------
# obliteration search

# (rule, forms removed as (d2, d3, d4), plane dimension needed on the rest)
_MOVES = (
    ("obliterate-quadric", (1, 0, 0), 1),
    ("obliterate-quadric-pair", (2, 0, 0), 2),
    ("obliterate-cubic", (0, 1, 0), 1),
    ("obliterate-quartic", (0, 0, 1), 1),
)

_memo: dict[tuple[int, int, int], tuple[int, tuple | None]] = {}
_memo_lock = threading.Lock()


def _moves_from(state: tuple[int, int, int]):
    m2, m3, m4 = state
    key = (m4, m3, m2)
    for rule, (r2, r3, r4), jj in _MOVES:
        rest = (m2 - r2, m3 - r3, m4 - r4)
        if min(rest) < 0:
            continue
        nxt = raised_query(jj, *rest)
        # only moves that shrink (m4, m3, m2) lexicographically; this keeps the
        # recursion well founded
        if (nxt[2], nxt[1], nxt[0]) >= key:
            continue
        yield rule, rest, jj, nxt, planes_offset(jj, *rest)


def _search0(state: tuple[int, int, int]) -> int:
    """Best value for the point problem at ``state``; fills ``_memo``."""
    with _memo_lock:
        if state in _memo:
            return _memo[state][0]
    stack = [state]
    local: dict = {}
    while stack:
        s = stack[-1]
        if s in local or s in _memo:
            stack.pop()
            continue
        if s == (0, 0, 0):
            local[s] = (0, None)
            stack.pop()
            continue
        pending = [n for _, _, _, n, _ in _moves_from(s) if n not in local and n not in _memo]
        if pending:
            stack.extend(pending)
            continue
        best = None
        for rule, rest, jj, nxt, off in _moves_from(s):
            val = (local.get(nxt) or _memo[nxt])[0] + off
            if best is None or val < best[0]:
                best = (val, (rule, rest, jj, nxt, off))
        if best is None:
            raise RuntimeError(f"no admissible move from {s}")
        local[s] = best
        stack.pop()
    with _memo_lock:
        _memo.update(local)
        return _memo[state][0]


def fj_search(q: BoundQuery) -> BoundResult:
    """Minimum over obliteration strategies, each move collapsed back to points.

    A move removes one quadric (needs a line on the rest), two quadrics (a
    plane), one cubic or one quartic (a line), and the line/plane problem is
    turned back into a point problem of raised type.
    """
    steps: list[TraceStep] = []
    if q.j:
        a, b, c = raised_query(q.j, q.m2, q.m3, q.m4)
        nxt = BoundQuery(0, a, b, c)
        steps.append(TraceStep("planes-from-points", q, planes_offset(q.j, q.m2, q.m3, q.m4), nxt))
        state = (a, b, c)
    else:
        state = (q.m2, q.m3, q.m4)
    _search0(state)
    while state != (0, 0, 0):
        _, move = _memo[state]
        rule, rest, jj, nxt, off = move
        cur = BoundQuery(0, *state)
        steps.append(TraceStep(rule, cur, off, BoundQuery(0, *nxt)))
        state = nxt
    steps.append(TraceStep("base", BoundQuery(0, 0, 0, 0), 0, None))
    return BoundResult(q, sum(s.offset for s in steps), tuple(steps))


# ---------------------------------------------------------------------------
# bounding polynomials


def _ring_consts():
    one = MultiPoly.constant(Q_VARS, Fraction(1))
    j, m2, m3, m4 = (MultiPoly.var(Q_VARS, v) for v in Q_VARS)
    return one, j, m2, m3, m4


def _choose2(x: MultiPoly) -> MultiPoly:
    return x * (x - 1) * Fraction(1, 2)


def _choose3(x: MultiPoly) -> MultiPoly:
    return x * (x - 1) * (x - 2) * Fraction(1, 6)


def q_polynomial() -> MultiPoly:
    """Floor-free composition of the closed forms, expanded in (j, m2, m3, m4)."""
    one, j, m2, m3, m4 = _ring_consts()

    def quad(x):
        return ((x + 1) * Fraction(1, 2)) ** 2 + (x * Fraction(1, 2)) ** 2

    def quad_cubic(a, b):
        return quad(a + _choose2(b)) + b * (a * 3 + b * b + 2) * Fraction(1, 3)

    def full(a, b, c):
        return (
            quad_cubic(a + b * c + _choose3(c + 1) * 2, b + _choose2(c))
            + a * c
            + b * _choose2(c + 1)
            + c * (c + 3) * (c * c - c + 2) * Fraction(1, 8)
        )

    a = m2 + j * m3 + _choose2(j + 1) * m4
    b = m3 + j * m4
    offset = j + j * m2 + _choose2(j + 1) * m3 + _choose3(j + 2) * m4
    return full(a, b, m4) + offset


def p_polynomial() -> MultiPoly:
    """``q`` at j = 0, as a polynomial in (m2, m3, m4)."""
    q = q_polynomial()
    terms = {e[1:]: c for e, c in q.terms.items() if e[0] == 0}
    return MultiPoly(Q_VARS[1:], terms)


def printed_q_polynomial() -> MultiPoly:
    return poly_parse(_appendix.PRINTED_Q, Q_VARS)


def compare_with_printed() -> list[dict]:
    """Monomials where the composed and printed polynomials differ (empty if none)."""
    composed = q_polynomial()
    printed = printed_q_polynomial()
    diffs = []
    for exp in sorted(set(composed.terms) | set(printed.terms)):
        a = composed.coeff(exp)
        b = printed.coeff(exp)
        if a != b:
            diffs.append({"exp": exp, "composed": Fraction(a), "printed": Fraction(b)})
    return diffs


# ---------------------------------------------------------------------------
# comparisons and tables


def _pure_query(d: int, m: int, j: int = 0) -> BoundQuery:
    counts = {2: (m, 0, 0), 3: (0, m, 0), 4: (0, 0, m)}[d]
    return BoundQuery(j, *counts)


def comparison_bounds(d: int, m: int) -> dict:
    """Earlier radical bound, the tidy corollary threshold, and our closed form
    for ``m`` forms all of degree ``d``."""
    if d not in (2, 3, 4):
        raise ValueError(f"degree must be 2, 3 or 4, got {d}")
    if m < 1:
        raise ValueError("m must be at least 1")
    e = 2 ** (d - 1)
    return {
        "wooley": (2 * m * m) ** (2 ** (d - 2)),
        "corollary": -(-((m + 1) ** e) // 2 ** (e - 1)),
        "ours": fj_bound(_pure_query(d, m)).value,
    }


def table_values(kind: Literal["quadric", "cubic", "quartic"], j_max: int = 8, m_max: int = 8) -> list[list[int]]:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    d = KINDS.index(kind) + 2
    return [[fj_bound(_pure_query(d, m, j)).value for j in range(j_max + 1)] for m in range(1, m_max + 1)]


def emit_table(kind: str, j_max: int = 8, m_max: int = 8, format: str = "markdown") -> str:
    values = table_values(kind, j_max, m_max)
    d = KINDS.index(kind) + 2
    label = f"m{d}"
    header = [label, "degree"] + [f"j={j}" for j in range(j_max + 1)]
    rows = [[m, d ** m] + row for m, row in enumerate(values, start=1)]
    if format == "json":
        return json.dumps(
            {
                "kind": kind,
                "rows": [
                    {label: r[0], "degree": r[1], "bounds": r[2:]} for r in rows
                ],
            }
        )
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    if format == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(map(str, r)) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")
