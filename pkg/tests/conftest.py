from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement, product

import pytest
from hypothesis import HealthCheck, settings

from obliteration.polarcone import FormSystem
from obliteration.polyring import MultiPoly, variables

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def monomials(n: int, d: int):
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for c in combo:
            e[c] += 1
        yield tuple(e)


def random_form(rng: random.Random, n: int, d: int, bound: int = 9, density: float = 1.0, prefix: str = "z") -> MultiPoly:
    """Dense-ish random homogeneous form with small integer coefficients."""
    vs = variables(prefix, n)
    terms = {}
    for e in monomials(n, d):
        if rng.random() <= density:
            terms[e] = Fraction(rng.randint(-bound, bound))
    f = MultiPoly(vs, terms)
    if f.is_zero():
        f = MultiPoly(vs, {tuple([d] + [0] * (n - 1)): Fraction(1)})
    return f


def random_system(rng: random.Random, N: int, degrees) -> FormSystem:
    return FormSystem.build(N, [random_form(rng, N + 1, d) for d in degrees])


def projective_points(p: int, n: int):
    """Normalized representatives of P^(n-1)(F_p): first nonzero entry 1."""
    for v in product(range(p), repeat=n):
        nz = next((x for x in v if x), None)
        if nz == 1:
            yield v


def eval_mod(f: MultiPoly, pt, p: int) -> int:
    """Evaluate an integer-coefficient polynomial at an integer point mod p."""
    total = 0
    for exp, c in f.terms.items():
        c = Fraction(c)
        term = c.numerator * pow(c.denominator, -1, p)
        for x, e in zip(pt, exp):
            term = term * pow(x, e, p)
        total += term
    return total % p


_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _LINES


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)


def invertible_matrix(rng: random.Random, n: int):
    """Random integer matrix with rational inverse, returned as (B, B^-1)."""
    from obliteration.linalg import rref

    while True:
        b = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        aug = [row + [Fraction(int(i == k)) for k in range(n)] for i, row in enumerate(b)]
        red, piv = rref(aug)
        if piv[:n] == list(range(n)):
            return b, [row[n:] for row in red[:n]]


def form_vanishing_on(rng: random.Random, n: int, d: int, k: int, change=None, prefix: str = "z") -> MultiPoly:
    """Random degree-d form in n variables vanishing on the span of the first
    k coordinate vectors, then composed with the linear change ``change``."""
    vs = variables(prefix, n)
    terms = {}
    for e in monomials(n, d):
        if any(e[i] for i in range(k, n)):
            terms[e] = Fraction(rng.randint(-9, 9))
    if not terms or all(c == 0 for c in terms.values()):
        terms[tuple([d - 1] + [0] * (n - 2) + [1])] = Fraction(1)
    f = MultiPoly(vs, terms)
    if change is None:
        return f
    images = [MultiPoly(vs, {tuple(int(c == i) for c in range(n)): change[r][i] for i in range(n) if change[r][i]}) for r in range(n)]
    return f.compose(images, vs)


def cone_and_lines_mod_p(S: FormSystem, x0, p: int):
    """Brute force over P^N(F_p): the zero set of the polar cone at x0 and the
    union of the F_p-lines through x0 lying in the variety.  Both returned as
    sets of normalized points."""
    from obliteration.polarcone import polar_system
    from obliteration.solvfield import FiniteField

    K = FiniteField(p)
    n = S.ambient_dim + 1
    cone = polar_system(S.over(K), tuple(K(c) for c in x0))
    pts = list(projective_points(p, n))
    on_x = {y for y in pts if all(eval_mod(f, y, p) == 0 for f in S.forms)}

    def norm(v):
        lead = next(c for c in v if c % p)
        inv = pow(lead, -1, p)
        return tuple(c * inv % p for c in v)

    x0n = norm(x0)
    in_cone = set()
    for y in pts:
        ky = tuple(K(c) for c in y)
        if all(f.evaluate(ky) == K.zero for f in cone.forms):
            in_cone.add(y)
    lines = {x0n}
    for y in pts:
        if y == x0n:
            continue
        line = {y} | {norm(tuple((a + t * b) % p for a, b in zip(x0n, y))) for t in range(p)}
        if line <= on_x:
            lines |= line
    return in_cone, lines
