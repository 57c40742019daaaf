"""Characteristic-zero backend: rationals extended by certified radicals."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any, Sequence

import mpmath

from .certificate import CertStore, CNum, eval_certificate
from .radicals import horner, radical_roots, sort_roots

__all__ = ["NumericField", "IdenticallyZero"]


class IdenticallyZero(ValueError):
    """The polynomial handed to a root finder is the zero polynomial."""


class NumericField:
    """Field context for points over the solvable closure of Q.

    Values are carried at ``precision_digits + guard`` digits; every number
    that is not an exact rational owns a node in ``store``.
    """

    kind = "numeric"
    characteristic = 0

    def __init__(self, precision_digits: int = 50, guard: int = 30, store: CertStore | None = None):
        if precision_digits < 10:
            raise ValueError("precision must be at least 10 digits")
        self.precision_digits = precision_digits
        self.guard = guard
        self.mp = mpmath.MPContext()
        self.mp.dps = precision_digits + guard
        self.store = store if store is not None else CertStore()
        self._zero_tol = self.mp.mpf(10) ** (-(precision_digits + guard) * 3 // 5)

    # elements -----------------------------------------------------------------
    def __call__(self, x: Any) -> CNum:
        if isinstance(x, CNum):
            return x
        if isinstance(x, (int, Fraction)):
            f = Fraction(x)
            return CNum(self, self.mp.mpc(self.mp.mpf(f.numerator) / f.denominator), f)
        raise TypeError(f"cannot coerce {type(x).__name__} into the numeric field")

    @property
    def zero(self) -> CNum:
        return self(0)

    @property
    def one(self) -> CNum:
        return self(1)

    def numerically_zero(self, v) -> bool:
        return abs(v) < self._zero_tol

    def is_zero(self, x: Any) -> bool:
        return self(x).is_zero()

    def random_element(self, rng: random.Random, bound: int = 9) -> CNum:
        """Random small nonzero integer; keeps random choices exact."""
        v = 0
        while v == 0:
            v = rng.randint(-bound, bound)
        return self(v)

    def describe(self) -> dict:
        return {"backend": "numeric", "precision_digits": self.precision_digits}

    # roots --------------------------------------------------------------------
    def _trim(self, coeffs: Sequence[Any]) -> list[CNum]:
        cs = [self(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        return cs

    def _sorted_values(self, cs: list[CNum]) -> list:
        vals = radical_roots(self.mp, [c.value for c in cs])
        return sort_roots(self.mp, vals, digits=self.mp.dps // 2)

    def adjoin_root(self, coeffs: Sequence[Any], root_index: int = 0) -> CNum:
        """Root number ``root_index`` (in real-then-imaginary order) of
        ``sum coeffs[i] t^i``; degree must be 2..4."""
        cs = [self(c) for c in coeffs]
        if not cs or cs[-1].is_zero():
            raise ValueError("leading coefficient is zero")
        deg = len(cs) - 1
        if deg > 4:
            raise ValueError(f"degree {deg} exceeds 4; no radical formula")
        if deg < 2:
            raise ValueError("adjoin_root needs degree at least 2")
        roots = self._sorted_values(cs)
        node = self.store.root_of([c.node for c in cs], root_index)
        return CNum(self, roots[root_index], None, node)

    def solve_univariate(self, coeffs: Sequence[Any]) -> list[CNum]:
        """All roots with multiplicity, as certified numbers.

        A nonzero constant has no roots; the zero polynomial raises
        :class:`IdenticallyZero`.
        """
        cs = self._trim(coeffs)
        if not cs:
            raise IdenticallyZero("polynomial vanishes identically")
        deg = len(cs) - 1
        if deg == 0:
            return []
        if deg > 4:
            raise ValueError(f"degree {deg} exceeds 4; no radical formula")
        if deg == 1:
            return [-cs[0] / cs[1]]
        roots = self._sorted_values(cs)
        out = []
        for i, v in enumerate(roots):
            node = self.store.root_of([c.node for c in cs], i)
            out.append(CNum(self, v, None, node))
        return out

    def residual(self, coeffs: Sequence[Any], root: CNum):
        return abs(horner([self(c).value for c in coeffs], root.value))

    def evaluate(self, x: CNum, precision_digits: int | None = None):
        """Re-derive ``x`` from its certificate alone."""
        x = self(x)
        if x.exact is not None:
            return self.mp.mpc(self.mp.mpf(x.exact.numerator) / x.exact.denominator)
        return eval_certificate(self.store, x.node, precision_digits or self.precision_digits)
