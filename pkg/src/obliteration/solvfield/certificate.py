"""Radical certificates: expression DAGs over the rationals.

Every node is a rational constant, one of ``+ - * /`` applied to earlier
nodes, or ``root_of`` selecting a root of a univariate polynomial of degree
2..4 whose coefficients are earlier nodes.  Node ids are list positions, so
the list order is a topological order and cycles cannot occur.

:class:`CNum` is a number that carries both its value at working precision
and the node that defines it; arithmetic on ``CNum`` records the DAG as a
side effect.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import mpmath

from .radicals import radical_roots, sort_roots

__all__ = [
    "CertificateError",
    "Node",
    "CertStore",
    "CNum",
    "eval_certificate",
    "certificate_depth",
]

MAX_ROOT_DEGREE = 4
_BINOPS = {"add", "sub", "mul", "div"}


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    op: str
    args: tuple[int, ...] = ()
    value: Fraction | None = None
    index: int = 0

    def as_json(self) -> dict:
        if self.op == "const":
            return {"const": _frac_text(self.value)}
        if self.op == "root_of":
            return {"root_of": {"coeffs": list(self.args), "index": self.index}}
        return {"op": self.op, "args": list(self.args)}


def _frac_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class CertStore:
    """Append-only node table shared by the numbers of one computation."""

    def __init__(self):
        self.nodes: list[Node] = []
        self._consts: dict[Fraction, int] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.nodes)

    def _append(self, node: Node) -> int:
        with self._lock:
            self.nodes.append(node)
            return len(self.nodes) - 1

    def const(self, v: Fraction) -> int:
        v = Fraction(v)
        with self._lock:
            if v in self._consts:
                return self._consts[v]
            self.nodes.append(Node("const", value=v))
            idx = len(self.nodes) - 1
            self._consts[v] = idx
            return idx

    def binop(self, op: str, a: int, b: int) -> int:
        if op not in _BINOPS:
            raise CertificateError(f"unknown operation {op!r}")
        return self._append(Node(op, (a, b)))

    def root_of(self, coeffs: Sequence[int], index: int) -> int:
        deg = len(coeffs) - 1
        if not 2 <= deg <= MAX_ROOT_DEGREE:
            raise CertificateError(f"root_of needs degree 2..{MAX_ROOT_DEGREE}, got {deg}")
        if not 0 <= index < deg:
            raise CertificateError(f"root index {index} out of range for degree {deg}")
        return self._append(Node("root_of", tuple(coeffs), index=index))

    # serialization ----------------------------------------------------------
    def subgraph(self, outputs: Iterable[int]) -> list[int]:
        """Sorted ids of every node reachable from ``outputs``."""
        seen: set[int] = set()
        stack = list(outputs)
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            stack.extend(self.nodes[n].args)
        return sorted(seen)

    def to_json(self, outputs: Sequence[int]) -> dict:
        """Compact DAG form: renumbered reachable nodes plus output ids."""
        keep = self.subgraph(outputs)
        remap = {old: new for new, old in enumerate(keep)}
        nodes = []
        for old in keep:
            node = self.nodes[old]
            js = node.as_json()
            if node.op == "root_of":
                js["root_of"]["coeffs"] = [remap[a] for a in node.args]
            elif node.op != "const":
                js["args"] = [remap[a] for a in node.args]
            nodes.append(js)
        return {"nodes": nodes, "outputs": [remap[o] for o in outputs]}

    @classmethod
    def from_json(cls, data: Any) -> tuple[CertStore, list[int]]:
        """Inverse of :meth:`to_json`.  Also accepts a single nested expression
        such as ``{"root_of": {"coeffs": ["-2", 0, 1], "index": 0}}`` in which
        arguments are inline nodes or rational strings/numbers."""
        store = cls()
        if isinstance(data, dict) and "nodes" in data:
            ids: list[int] = []
            for js in data["nodes"]:
                ids.append(store._load_flat(js, ids))
            return store, [ids[o] for o in data.get("outputs", [len(ids) - 1])]
        return store, [store._load_nested(data)]

    def _load_flat(self, js: dict, ids: list[int]) -> int:
        if "const" in js:
            return self.const(Fraction(js["const"]))
        if "root_of" in js:
            spec = js["root_of"]
            return self.root_of([ids[a] for a in spec["coeffs"]], int(spec.get("index", 0)))
        op = js.get("op")
        args = js.get("args", [])
        if len(args) != 2:
            raise CertificateError(f"operation {op!r} needs two arguments")
        return self.binop(op, ids[args[0]], ids[args[1]])

    def _load_nested(self, js: Any) -> int:
        if isinstance(js, (int, str)):
            return self.const(Fraction(js))
        if "const" in js:
            return self.const(Fraction(js["const"]))
        if "root_of" in js:
            spec = js["root_of"]
            return self.root_of([self._load_nested(c) for c in spec["coeffs"]], int(spec.get("index", 0)))
        args = js.get("args", [])
        if len(args) != 2:
            raise CertificateError(f"operation {js.get('op')!r} needs two arguments")
        return self.binop(js["op"], self._load_nested(args[0]), self._load_nested(args[1]))


# ---------------------------------------------------------------------------
# evaluation


def _evaluate_once(store: CertStore, outputs: Sequence[int], dps: int) -> list:
    ctx = mpmath.MPContext()
    ctx.dps = dps
    vals: dict[int, Any] = {}
    for n in store.subgraph(outputs):
        node = store.nodes[n]
        if node.op == "const":
            v = node.value
            vals[n] = ctx.mpc(ctx.mpf(v.numerator) / v.denominator)
        elif node.op == "root_of":
            coeffs = [vals[a] for a in node.args]
            if coeffs[-1] == 0:
                raise CertificateError(f"node {n}: leading coefficient vanishes")
            roots = sort_roots(ctx, radical_roots(ctx, coeffs), digits=dps // 2)
            vals[n] = roots[node.index]
        else:
            a, b = (vals[x] for x in node.args)
            if node.op == "add":
                vals[n] = a + b
            elif node.op == "sub":
                vals[n] = a - b
            elif node.op == "mul":
                vals[n] = a * b
            else:
                if b == 0:
                    raise CertificateError(f"node {n}: division by zero")
                vals[n] = a / b
    return [vals[o] for o in outputs]


def eval_certificate(
    store: CertStore,
    outputs: int | Sequence[int],
    precision_digits: int = 50,
    guard: int = 20,
    max_attempts: int = 5,
):
    """Evaluate certificate outputs to ``precision_digits`` correct digits.

    The DAG is evaluated at two working precisions; if they disagree beyond
    the requested digits (usually because nearby roots were ordered
    differently), the guard is doubled and evaluation repeated.  Returns mpmath
    complex numbers at ``precision_digits`` (a single value when ``outputs``
    is an int).
    """
    single = isinstance(outputs, int)
    outs = [outputs] if single else list(outputs)
    for _ in range(max_attempts):
        lo = _evaluate_once(store, outs, precision_digits + guard)
        hi = _evaluate_once(store, outs, 2 * precision_digits + 2 * guard)
        ctx = mpmath.MPContext()
        ctx.dps = precision_digits
        tol = ctx.mpf(10) ** (-precision_digits)
        ok = all(abs(a - b) <= tol * max(1, abs(b)) for a, b in zip(lo, hi))
        if ok:
            result = [ctx.mpc(b) for b in hi]
            return result[0] if single else result
        guard *= 2
    raise CertificateError(
        f"could not stabilize certificate to {precision_digits} digits after {max_attempts} attempts"
    )


def certificate_depth(store: CertStore, node: int) -> int:
    """Longest chain of nested ``root_of`` nodes below (and including) ``node``."""
    depth: dict[int, int] = {}
    for n in store.subgraph([node]):
        nd = store.nodes[n]
        below = max((depth[a] for a in nd.args), default=0)
        depth[n] = below + (1 if nd.op == "root_of" else 0)
    return depth[node]


def root_degrees(store: CertStore, outputs: Sequence[int]) -> list[int]:
    return [len(store.nodes[n].args) - 1 for n in store.subgraph(outputs) if store.nodes[n].op == "root_of"]


# ---------------------------------------------------------------------------
# certified numbers


class CNum:
    """A complex number with a certificate node.

    Exact rationals are kept as ``Fraction`` (``node`` is created lazily), so
    arithmetic on constants never grows the DAG.
    """

    __slots__ = ("field", "value", "exact", "_node")

    def __init__(self, field, value, exact: Fraction | None = None, node: int | None = None):
        self.field = field
        self.value = value
        self.exact = exact
        self._node = node

    @property
    def node(self) -> int:
        if self._node is None:
            self._node = self.field.store.const(self.exact)
        return self._node

    def _coerce(self, other) -> CNum:
        if isinstance(other, CNum):
            return other
        return self.field(other)

    def _binop(self, op: str, other, swap: bool = False) -> CNum:
        other = self._coerce(other)
        a, b = (other, self) if swap else (self, other)
        if a.exact is not None and b.exact is not None:
            if op == "add":
                return self.field(a.exact + b.exact)
            if op == "sub":
                return self.field(a.exact - b.exact)
            if op == "mul":
                return self.field(a.exact * b.exact)
            if b.exact == 0:
                raise ZeroDivisionError("division by exact zero")
            return self.field(a.exact / b.exact)
        # cheap identities keep the DAG small
        if op == "mul":
            if a.exact == 0 or b.exact == 0:
                return self.field(0)
            if a.exact == 1:
                return b
            if b.exact == 1:
                return a
        elif op == "add":
            if a.exact == 0:
                return b
            if b.exact == 0:
                return a
        elif op == "sub" and b.exact == 0:
            return a
        elif op == "div" and b.exact == 1:
            return a
        if op == "add":
            v = a.value + b.value
        elif op == "sub":
            v = a.value - b.value
        elif op == "mul":
            v = a.value * b.value
        else:
            if b.exact == 0:
                raise ZeroDivisionError("division by exact zero")
            v = a.value / b.value
        node = self.field.store.binop(op, a.node, b.node)
        return CNum(self.field, v, None, node)

    def __add__(self, o):
        return self._binop("add", o)

    def __radd__(self, o):
        return self._binop("add", o, swap=True)

    def __sub__(self, o):
        return self._binop("sub", o)

    def __rsub__(self, o):
        return self._binop("sub", o, swap=True)

    def __mul__(self, o):
        return self._binop("mul", o)

    def __rmul__(self, o):
        return self._binop("mul", o, swap=True)

    def __truediv__(self, o):
        return self._binop("div", o)

    def __rtruediv__(self, o):
        return self._binop("div", o, swap=True)

    def __neg__(self):
        if self.exact is not None:
            return self.field(-self.exact)
        return self.field(0) - self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = self.field(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __abs__(self):
        return abs(self.value)

    def is_zero(self) -> bool:
        if self.exact is not None:
            return self.exact == 0
        return self.field.numerically_zero(self.value)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) or isinstance(other, CNum):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"CNum({self.exact})"
        return f"CNum({mpmath.nstr(self.value, 12)}, node={self._node})"

    __str__ = __repr__
