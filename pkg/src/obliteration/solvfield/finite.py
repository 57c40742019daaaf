"""Finite-field backend: a growing tower F_p = K_0 c K_1 c ... .

Each level is a flat field ``F_p[t]/(h)`` with ``h`` irreducible.  Adjoining
a root of an irreducible ``phi`` over the top level builds ``K[s]/(phi)``,
finds a primitive element ``alpha`` of it over F_p by linear algebra, and
takes the minimal polynomial of ``alpha`` as the next modulus.  The change of
basis doubles as the embedding of the old level, so elements created before
an extension stay valid and are lifted on demand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .numeric import IdenticallyZero

__all__ = [
    "FiniteField",
    "GFElem",
    "TowerCapExceeded",
    "is_irreducible_fp",
    "is_prime",
]

MAX_TOWER_DEGREE = 256


class TowerCapExceeded(RuntimeError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p as int lists, low -> high


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = np.convolve(np.array(a, dtype=object), np.array(b, dtype=object)) % p
    return _trim([int(x) for x in out])


def _fp_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return _trim(q), a


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def _fp_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _fp_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _fp_divmod(_fp_mul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = _fp_divmod(_fp_mul(base, base, p), mod, p)[1]
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_fp(h: Sequence[int], p: int) -> bool:
    """Rabin's test for a polynomial over F_p (coefficients low -> high)."""
    h = _trim([int(c) % p for c in h])
    n = len(h) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _fp_powmod(x, p ** n, h, p) != _fp_divmod(x, h, p)[1]:
        return False
    for r in _prime_factors(n):
        xp = _fp_powmod(x, p ** (n // r), h, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_fp_gcd(h, _trim(diff), p)) > 1:
            return False
    return True


def _inverse_mod_p(m: np.ndarray, p: int) -> np.ndarray | None:
    """Inverse of a square matrix over F_p, or None when singular."""
    n = m.shape[0]
    aug = np.concatenate([m % p, np.eye(n, dtype=np.int64)], axis=1).astype(np.int64)
    for col in range(n):
        nz = np.nonzero(aug[col:, col])[0]
        if nz.size == 0:
            return None
        piv = col + int(nz[0])
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] * pow(int(aug[col, col]), p - 2, p) % p
        factors = aug[:, col].copy()
        factors[col] = 0
        aug = (aug - np.outer(factors, aug[col])) % p
    return aug[:, n:]


# ---------------------------------------------------------------------------
# tower levels and elements


@dataclass
class _Level:
    degree: int
    modulus: list[int]
    reducer: np.ndarray | None
    embed: np.ndarray | None  # rows: images of t^a of the previous level


def _reducer(h: list[int], p: int) -> np.ndarray | None:
    k = len(h) - 1
    if k < 2:
        return None
    rows = []
    cur = np.array([(-c) % p for c in h[:k]], dtype=np.int64)  # t^k
    for _ in range(k - 1):
        rows.append(cur.copy())
        top = cur[-1]
        cur = np.concatenate([[0], cur[:-1]])
        cur = (cur - top * np.array(h[:k], dtype=np.int64)) % p
    return np.array(rows, dtype=np.int64)


class GFElem:
    __slots__ = ("field", "level", "c")

    def __init__(self, field: FiniteField, level: int, c: np.ndarray):
        self.field = field
        self.level = level
        self.c = c

    # coercion ------------------------------------------------------------------
    def _pair(self, other) -> tuple[np.ndarray, np.ndarray, int]:
        if not isinstance(other, GFElem):
            other = self.field(other)
        elif other.field is not self.field:
            raise ValueError("elements of different finite fields")
        lvl = max(self.level, other.level)
        return self.field._lift(self, lvl), self.field._lift(other, lvl), lvl

    def _new(self, c: np.ndarray, level: int) -> GFElem:
        return GFElem(self.field, level, c)

    # arithmetic ----------------------------------------------------------------
    def __add__(self, other):
        a, b, lvl = self._pair(other)
        return self._new((a + b) % self.field.p, lvl)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, lvl = self._pair(other)
        return self._new((a - b) % self.field.p, lvl)

    def __rsub__(self, other):
        a, b, lvl = self._pair(other)
        return self._new((b - a) % self.field.p, lvl)

    def __neg__(self):
        return self._new((-self.c) % self.field.p, self.level)

    def __mul__(self, other):
        a, b, lvl = self._pair(other)
        return self._new(self.field._mul(a, b, lvl), lvl)

    __rmul__ = __mul__

    def inverse(self) -> GFElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        f = self.field
        lvl = f.levels[self.level]
        if lvl.degree == 1:
            return self._new(np.array([pow(int(self.c[0]), f.p - 2, f.p)], dtype=np.int64), self.level)
        # extended Euclid in F_p[t]
        r0, r1 = list(lvl.modulus), _trim([int(x) for x in self.c])
        s0, s1 = [], [1]
        while r1:
            q, r = _fp_divmod(r0, r1, f.p)
            r0, r1 = r1, r
            qs = _fp_mul(q, s1, f.p)
            s_new = [(a - b) % f.p for a, b in _zip_pad(s0, qs)]
            s0, s1 = s1, _trim(s_new)
        inv_lead = pow(r0[0], f.p - 2, f.p)  # r0 is a nonzero constant
        out = np.zeros(lvl.degree, dtype=np.int64)
        for i, v in enumerate(s0):
            out[i] = v * inv_lead % f.p
        return self._new(out, self.level)

    def __truediv__(self, other):
        if not isinstance(other, GFElem):
            other = self.field(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # predicates ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.c.any()

    def in_prime_field(self) -> bool:
        return not self.c[1:].any()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) or isinstance(other, GFElem):
            try:
                a, b, _ = self._pair(other)
            except ZeroDivisionError:
                return False
            return bool(np.array_equal(a, b))
        return NotImplemented

    def __hash__(self):
        if self.in_prime_field():
            return hash(int(self.c[0]))
        top = self.field._lift(self, len(self.field.levels) - 1)
        return hash(("gf", tuple(int(x) for x in top)))

    def __int__(self) -> int:
        if not self.in_prime_field():
            raise ValueError("element is not in the prime field")
        return int(self.c[0])

    def coeffs_top(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.field._lift(self, len(self.field.levels) - 1))

    def __repr__(self) -> str:
        if self.in_prime_field():
            return f"{int(self.c[0])} mod {self.field.p}"
        return f"GF({self.field.p}^{self.field.levels[self.level].degree}){[int(x) for x in self.c]}"

    __str__ = __repr__


def _zip_pad(a: list[int], b: list[int]):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


# univariate polynomials over the tower: lists of GFElem, low -> high


def _ptrim(a: list) -> list:
    while a and a[-1].is_zero():
        a.pop()
    return a


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            t = x * y
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    zero = a[0].field.zero
    return _ptrim([zero if v is None else v for v in out])


def _pdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    b = _ptrim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = b[-1].inverse()
    zero = b[0].field.zero
    q = [zero] * max(len(a) - len(b) + 1, 0)
    _ptrim(a)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - c * bi
        a.pop()
        _ptrim(a)
    return _ptrim(q), a


def _pmonic(a: list) -> list:
    inv = a[-1].inverse()
    return [x * inv for x in a]


def _pgcd(a: list, b: list) -> list:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a) if a else a


def _ppowmod(base: list, e: int, mod: list) -> list:
    one = mod[0].field.one
    result = [one]
    base = _pdivmod(base, mod)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base), mod)[1]
        e >>= 1
        if e:
            base = _pdivmod(_pmul(base, base), mod)[1]
    return result


def _psub(a: list, b: list) -> list:
    f = (a or b)[0].field
    n = max(len(a), len(b))
    a = a + [f.zero] * (n - len(a))
    b = b + [f.zero] * (n - len(b))
    return _ptrim([x - y for x, y in zip(a, b)])


def _pderiv(a: list) -> list:
    return _ptrim([a[i] * i for i in range(1, len(a))])


class FiniteField:
    """Field context over a finite field of characteristic ``p >= 5``."""

    kind = "finite"

    def __init__(self, p: int, seed: int = 0):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p in (2, 3):
            raise ValueError("characteristic 2 and 3 are not supported")
        self.p = p
        self.characteristic = p
        self.rng = random.Random(seed)
        self.levels: list[_Level] = [_Level(1, [0, 1], None, None)]

    # elements -------------------------------------------------------------------
    def __call__(self, x: Any) -> GFElem:
        if isinstance(x, GFElem):
            if x.field is not self:
                raise ValueError("element of a different finite field")
            return x
        if isinstance(x, int):
            return GFElem(self, 0, np.array([x % self.p], dtype=np.int64))
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image mod {self.p}")
            v = x.numerator * pow(x.denominator, self.p - 2, self.p) % self.p
            return GFElem(self, 0, np.array([v], dtype=np.int64))
        raise TypeError(f"cannot coerce {type(x).__name__} into GF({self.p})")

    @property
    def zero(self) -> GFElem:
        return self(0)

    @property
    def one(self) -> GFElem:
        return self(1)

    @property
    def degree(self) -> int:
        """Degree of the current top level over F_p."""
        return self.levels[-1].degree

    @property
    def order(self) -> int:
        return self.p ** self.degree

    @property
    def modulus(self) -> list[int]:
        return list(self.levels[-1].modulus)

    def is_zero(self, x: Any) -> bool:
        return self(x).is_zero()

    def element(self, coeffs: Sequence[int]) -> GFElem:
        """Top-level element with the given coefficients in the power basis."""
        k = self.degree
        c = np.zeros(k, dtype=np.int64)
        for i, v in enumerate(coeffs):
            c[i] = v % self.p
        return GFElem(self, len(self.levels) - 1, c)

    def random_element(self, rng: random.Random | None = None) -> GFElem:
        rng = rng or self.rng
        return self.element([rng.randrange(self.p) for _ in range(self.degree)])

    def describe(self) -> dict:
        return {"backend": "finite", "p": self.p, "degree": self.degree, "modulus": self.modulus}

    def _lift(self, x: GFElem, level: int) -> np.ndarray:
        c = x.c
        for lv in range(x.level + 1, level + 1):
            c = (c @ self.levels[lv].embed) % self.p
        return c

    def lift(self, x: GFElem, level: int | None = None) -> GFElem:
        level = len(self.levels) - 1 if level is None else level
        return GFElem(self, level, self._lift(x, level))

    def _mul(self, a: np.ndarray, b: np.ndarray, level: int) -> np.ndarray:
        lv = self.levels[level]
        if lv.degree == 1:
            return (a * b) % self.p
        full = np.convolve(a, b) % self.p
        k = lv.degree
        return (full[:k] + full[k:] @ lv.reducer) % self.p

    # root finding -----------------------------------------------------------------
    def _poly(self, coeffs: Sequence[Any]) -> list[GFElem]:
        return _ptrim([self(c) for c in coeffs])

    def _x_power_q(self, mod: list, e: int = 1) -> list:
        """x^(q^e) mod ``mod`` with q the current field order."""
        x = [self.zero, self.one]
        result = _pdivmod(x, mod)[1]
        for _ in range(e):
            result = _ppowmod_poly(result, self.order, mod)
        return result

    def _equal_degree_split(self, g: list, e: int) -> list[list]:
        """Split monic ``g`` whose irreducible factors all have degree ``e``."""
        n = len(g) - 1
        if n == e:
            return [g]
        exponent = (self.order ** e - 1) // 2
        for _ in range(200):
            r = [self.random_element() for _ in range(n)]
            r = _ptrim(r)
            if len(r) < 2:
                continue
            w = _ppowmod(r, exponent, g)
            d = _pgcd(g, _psub(w, [self.one]))
            if 0 < len(d) - 1 < n:
                other = _pmonic(_pdivmod(g, d)[0])
                return self._equal_degree_split(d, e) + self._equal_degree_split(other, e)
        raise RuntimeError("equal-degree splitting failed to converge")

    def factor_squarefree_part(self, coeffs: Sequence[Any]) -> dict[int, list[list]]:
        """Distinct monic irreducible factors of ``coeffs``, grouped by degree."""
        g = self._poly(coeffs)
        if not g:
            raise IdenticallyZero("polynomial vanishes identically")
        if len(g) == 1:
            return {}
        g = _pmonic(g)
        d = _pgcd(g, _pderiv(g))
        s = _pmonic(_pdivmod(g, d)[0]) if len(d) > 1 else g
        out: dict[int, list[list]] = {}
        e = 1
        while len(s) > 1:
            if 2 * e > len(s) - 1:
                out.setdefault(len(s) - 1, []).append(s)
                break
            xq = self._x_power_q(s, e)
            part = _pgcd(s, _psub(xq, [self.zero, self.one]))
            if len(part) > 1:
                out[e] = self._equal_degree_split(part, e)
                s = _pmonic(_pdivmod(s, part)[0])
            e += 1
        return out

    def roots_in_field(self, coeffs: Sequence[Any]) -> list[GFElem]:
        """Distinct roots lying in the current top field, in sorted order."""
        g = self._poly(coeffs)
        if not g:
            raise IdenticallyZero("polynomial vanishes identically")
        if len(g) == 1:
            return []
        g = _pmonic(g)
        xq = self._x_power_q(g)
        lin = _pgcd(g, _psub(xq, [self.zero, self.one]))
        if len(lin) <= 1:
            return []
        roots = [-f[0] for f in self._equal_degree_split(lin, 1)]
        return self.sort(roots)

    def sort(self, elems: Sequence[GFElem]) -> list[GFElem]:
        return sorted(elems, key=lambda x: x.coeffs_top())

    def adjoin_irreducible(self, phi: Sequence[Any]) -> GFElem:
        """Extend the tower by a root of ``phi`` (irreducible over the top level)."""
        phi = _pmonic(self._poly(phi))
        e = len(phi) - 1
        if e < 2:
            return -phi[0]
        k = self.degree
        n = k * e
        if n > MAX_TOWER_DEGREE:
            raise TowerCapExceeded(f"tower degree {n} exceeds cap {MAX_TOWER_DEGREE}")
        top = len(self.levels) - 1
        phi = [self.lift(c, top) for c in phi]
        gen = self.element([0, 1]) if k > 1 else self.one

        def flat(rel: list) -> np.ndarray:
            v = np.zeros(n, dtype=np.int64)
            for b, x in enumerate(rel):
                v[b * k:(b + 1) * k] = self._lift(x, top)
            return v

        for attempt in range(64):
            shift = self.zero if attempt == 0 else gen * self.rng.randrange(1, self.p) + self.rng.randrange(self.p)
            alpha = _ptrim([shift, self.one])
            powers = [[self.one]]
            for _ in range(n):
                nxt = _pdivmod(_pmul(powers[-1], alpha), phi)[1]
                powers.append(nxt)
            m = np.array([flat(pw) for pw in powers[:n]], dtype=np.int64)
            minv = _inverse_mod_p(m, self.p)
            if minv is None:
                continue
            coords = (flat(powers[n]) @ minv) % self.p
            modulus = [int((-c) % self.p) for c in coords] + [1]
            level = _Level(n, modulus, _reducer(modulus, self.p), minv[:k, :].copy())
            self.levels.append(level)
            return GFElem(self, len(self.levels) - 1, minv[k].copy())
        raise RuntimeError("no primitive element found for the extension")

    def adjoin_root(self, coeffs: Sequence[Any], root_index: int = 0) -> GFElem:
        """A root of ``coeffs`` (degree 1..4), growing the tower only if no
        root exists yet; the smallest-degree irreducible factor is used."""
        g = self._poly(coeffs)
        if not g:
            raise IdenticallyZero("polynomial vanishes identically")
        deg = len(g) - 1
        if deg < 1:
            raise ValueError("constant polynomial has no roots")
        if deg > 4:
            raise ValueError(f"degree {deg} exceeds 4")
        roots = self.roots_in_field(g)
        if not roots:
            factors = self.factor_squarefree_part(g)
            e = min(factors)
            self.adjoin_irreducible(factors[e][0])
            roots = self.roots_in_field(g)
        return roots[root_index]

    def solve_univariate(self, coeffs: Sequence[Any]) -> list[GFElem]:
        """All roots with multiplicity; extends the tower until ``coeffs`` splits."""
        g = self._poly(coeffs)
        if not g:
            raise IdenticallyZero("polynomial vanishes identically")
        deg = len(g) - 1
        if deg == 0:
            return []
        if deg > 4:
            raise ValueError(f"degree {deg} exceeds 4")
        while True:
            rest = _pmonic(list(g))
            found = []
            for r in self.roots_in_field(g):
                while True:
                    q, rem = _pdivmod(rest, [-r, self.one])
                    if rem:
                        break
                    found.append(r)
                    rest = q
            if len(rest) <= 1:
                return self.sort(found)
            factors = self.factor_squarefree_part(rest)
            e = min(factors)
            self.adjoin_irreducible(factors[e][0])


def _ppowmod_poly(base: list, e: int, mod: list) -> list:
    """Raise a polynomial to an integer power modulo ``mod``."""
    return _ppowmod(base, e, mod)
