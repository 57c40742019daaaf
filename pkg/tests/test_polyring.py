import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import monomials, random_form
from obliteration.polyring import (
    MultiPoly,
    PolySyntaxError,
    poly_format,
    poly_parse,
    polarize,
    polarize_via_derivatives,
    variables,
)

V3 = variables("x", 3)
X4 = variables("x", 4)

coeffs = st.fractions(min_value=-100, max_value=100, max_denominator=7)


@st.composite
def polys(draw, vars=V3, max_deg=3):
    n = len(vars)
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, max_deg) for _ in range(n)]),
            coeffs,
            max_size=6,
        )
    )
    return MultiPoly(vars, terms)


@st.composite
def forms(draw, n_max=6, d_max=4):
    n = draw(st.integers(1, n_max))
    d = draw(st.integers(1, d_max))
    vars = variables("x", n)
    mons = list(monomials(n, d))
    chosen = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=6, unique=True))
    terms = {m: Fraction(draw(st.integers(-100, 100)) or 1) for m in chosen}
    pt = tuple(draw(st.lists(st.fractions(-5, 5, max_denominator=3), min_size=n, max_size=n)))
    return MultiPoly(vars, terms), pt


def test_parse_examples():
    p = poly_parse("x0*x3 - x1*x2", X4)
    assert len(p.terms) == 2
    assert p.coeff((1, 0, 0, 1)) == 1 and p.coeff((0, 1, 1, 0)) == -1
    assert poly_parse("0", X4).terms == {}
    q = poly_parse("x0^2 + 2*x0*x1", X4)
    assert poly_parse(poly_format(q), X4) == q
    assert poly_parse("3/2*x0**2 - x1 + 1/4", X4).coeff((0, 0, 0, 0)) == Fraction(1, 4)


def test_parse_errors_report_position():
    with pytest.raises(PolySyntaxError) as info:
        poly_parse("x0 + * x1", X4)
    assert info.value.position == 5
    with pytest.raises(PolySyntaxError) as info:
        poly_parse("x0 + y7", X4)
    assert "y7" in str(info.value)
    assert info.value.position == 5


def test_format_shapes():
    assert poly_format(poly_parse("x0^2 + 2*x0*x1", V3)) == "x0^2 + 2*x0*x1"
    assert poly_format(poly_parse("-x1*x2", V3)) == "-x1*x2"
    assert poly_format(MultiPoly.zero(V3)) == "0"


def test_basic_arithmetic():
    a = poly_parse("x0^2", V3)
    b = poly_parse("x1", V3)
    assert a * b == poly_parse("x0^2*x1", V3)
    assert (a + b) - b == a
    assert (a + b) ** 2 == a * a + 2 * a * b + b * b
    assert a.scale(Fraction(1, 2)).coeff((2, 0, 0)) == Fraction(1, 2)


def test_substitute_linear_examples():
    f = poly_parse("x0*x3 - x1*x2", X4)
    new = variables("w", 3)
    drop_x3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert f.substitute_linear(drop_x3, new) == poly_parse("-w1*w2", new)
    with pytest.raises(ValueError):
        f.substitute_linear([[1, 0]], new)


def test_json_round_trip():
    f = poly_parse("3/2*x0^2 - x1*x2 + 7", V3)
    data = f.to_json()
    assert data["terms"][0] == {"exp": [2, 0, 0], "coeff": "3/2"}
    assert MultiPoly.from_json(data) == f


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == MultiPoly.zero(V3)


@given(polys())
def test_format_round_trip(p):
    assert poly_parse(poly_format(p), V3) == p


@given(polys(max_deg=2))
def test_no_zero_coefficients_stored(p):
    assert all(c != 0 for c in p.terms.values())
    assert all(len(e) == 3 for e in p.terms)


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_invertible_substitution_keeps_degree(d, seed):
    rng = random.Random(seed)
    f = random_form(rng, 3, d, prefix="x")
    while True:
        a = [[Fraction(rng.randint(-3, 3)) for _ in range(3)] for _ in range(3)]
        det = (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )
        if det:
            break
    g = f.substitute_linear(a, variables("w", 3))
    assert g.is_homogeneous() and g.total_degree() == d


def _identity_holds(f: MultiPoly, x, pc) -> bool:
    n = len(f.vars)
    ring = ("lam", "mu") + f.vars
    lam = MultiPoly.var(ring, "lam")
    mu = MultiPoly.var(ring, "mu")
    lift = lambda p: MultiPoly(ring, {(0, 0) + e: c for e, c in p.terms.items()})
    ys = [MultiPoly.var(ring, v) for v in f.vars]
    lhs = f.compose([lam.scale(x[i]) + mu * ys[i] for i in range(n)], ring)
    d = pc.degree
    rhs = MultiPoly.zero(ring)
    for i, e in enumerate(pc.entries):
        rhs = rhs + (lift(e) * lam ** (d - i) * mu**i).scale(Fraction(1, factorial(i)))
    return lhs == rhs


def test_polarize_quadric_example():
    f = poly_parse("x0*x3 - x1*x2", X4)
    pc = polarize(f, (1, 0, 0, 0))
    assert pc.entries[0].is_zero()
    assert pc.entries[1] == poly_parse("x3", X4)
    assert pc.entries[2] == f.scale(2)
    assert polarize_via_derivatives(f, (1, 0, 0, 0)) == pc


def test_polarize_power():
    f = poly_parse("x0^3", V3)
    pc = polarize(f, (1, 0, 0))
    for i in range(4):
        assert pc.entries[i] == poly_parse(f"x0^{i}", V3).scale(factorial(3) // factorial(3 - i))


def test_polarize_linear_and_errors():
    f = poly_parse("2*x0 - x2", V3)
    pc = polarize(f, (1, 1, 1))
    assert pc.entries[1] == f
    with pytest.raises(ValueError):
        polarize(poly_parse("x0^2 + x1", V3), (1, 0, 0))
    with pytest.raises(ValueError):
        polarize(MultiPoly.zero(V3), (1, 0, 0))
    assert polarize(MultiPoly.zero(V3), (1, 0, 0), degree=2).entries[2].is_zero()


@given(forms())
def test_polarization_identity(fx):
    f, x = fx
    pc = polarize(f, x)
    assert _identity_holds(f, x, pc)
    for i, e in enumerate(pc.entries):
        assert e.is_zero() or (e.is_homogeneous() and e.total_degree() == i)


@given(forms())
def test_polarize_matches_derivative_oracle(fx):
    f, x = fx
    assert polarize(f, x) == polarize_via_derivatives(f, x)


@given(forms(n_max=4, d_max=3), st.fractions(-4, 4, max_denominator=3).filter(bool), st.fractions(-4, 4, max_denominator=3).filter(bool))
def test_bihomogeneity(fx, s, t):
    f, x = fx
    d = f.total_degree()
    base = polarize(f, x)
    scaled_x = polarize(f, tuple(s * c for c in x))
    for i in range(d + 1):
        assert scaled_x.entries[i] == base.entries[i].scale(s ** (d - i))
        y = tuple(Fraction(k + 1) for k in range(len(x)))
        ty = tuple(t * c for c in y)
        assert base.entries[i].evaluate(ty) == t**i * base.entries[i].evaluate(y)


def test_polarize_matches_on_random_cubics():
    rng = random.Random(7)
    for _ in range(200):
        f = random_form(rng, 4, 3, density=0.5, prefix="x")
        x = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4))
        assert polarize(f, x) == polarize_via_derivatives(f, x)
