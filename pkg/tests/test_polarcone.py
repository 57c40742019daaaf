import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cone_and_lines_mod_p, eval_mod, form_vanishing_on, invertible_matrix, projective_points, random_form
from obliteration.polarcone import (
    FormSystem,
    PolarConeError,
    SpanningTuple,
    eliminate_linear,
    embed_point,
    iterated_polar,
    line_in_variety_check,
    parse_points,
    plane_in_variety_check,
    polar_system,
    restrict_to_complement,
)
from obliteration.polyring import MultiPoly, poly_parse, variables
from obliteration.solvfield import FiniteField
from obliteration.typecalc import DegreeVector, raise_deg, raise_type, type_of

Z4 = variables("z", 4)
E = [tuple(Fraction(int(i == k)) for k in range(4)) for i in range(4)]


def quadric():
    return FormSystem.build(3, [poly_parse("z0*z3 - z1*z2", Z4)])


def planted_system(rng, N, degrees, k):
    """Random system in P^N containing a known (k-1)-plane, in random
    coordinates; returns the system and k points spanning the plane."""
    b, binv = invertible_matrix(rng, N + 1)
    forms = [form_vanishing_on(rng, N + 1, d, k, change=b) for d in degrees]
    pts = [tuple(binv[r][i] for r in range(N + 1)) for i in range(k)]
    return FormSystem.build(N, forms, list(degrees)), pts


# construction and JSON ------------------------------------------------------


def test_form_system_validation():
    with pytest.raises(PolarConeError):
        FormSystem.build(3, [poly_parse("z0^2 + z1", Z4)])
    with pytest.raises(PolarConeError):
        FormSystem.build(2, [poly_parse("z0^2", Z4)])
    with pytest.raises(PolarConeError):
        FormSystem.build(3, [MultiPoly(Z4, {(0, 0, 0, 0): Fraction(1)})], [0])
    S = FormSystem.build(3, [MultiPoly.zero(Z4), poly_parse("z0^2", Z4)], [0, 2])
    assert S.degrees.entries == (2,)


def test_json_round_trip():
    S = FormSystem.build(3, [poly_parse("z0*z3 - z1*z2", Z4), poly_parse("z0^3 - 2*z1*z2*z3", Z4)])
    data = json.loads(json.dumps(S.to_json()))
    assert data["ambient_dim"] == 3 and data["degrees"] == [2, 3]
    assert FormSystem.from_json(data) == S
    text = {"ambient_dim": 3, "forms": ["z0*z3 - z1*z2", "z0^3 - 2*z1*z2*z3"]}
    assert FormSystem.from_json(text) == S


def test_spanning_tuple_rank():
    assert SpanningTuple.of([E[0], E[1]]).span_dim == 1
    with pytest.raises(PolarConeError):
        SpanningTuple.of([E[0], E[0]])
    assert parse_points("1,0,0,0; 0,1,0,0") == [E[0], E[1]]


# polar_system ---------------------------------------------------------------


def test_polar_system_quadric_example():
    C = polar_system(quadric(), E[0])
    assert C.degrees.entries == (1, 2)
    assert C.forms[0] == poly_parse("z3", Z4)
    # the top polar is d! f
    assert C.forms[1] == poly_parse("2*z0*z3 - 2*z1*z2", Z4)


def test_polar_system_cubic_type():
    S = FormSystem.build(3, [poly_parse("z1^3 + z2^3 + z3^3 - z0*z1*z2", Z4)])
    C = polar_system(S, E[0])
    assert C.degrees.entries == (1, 2, 3)
    assert C.type == raise_type(S.type, 1) == type_of(DegreeVector([1, 2, 3]))


def test_polar_system_errors():
    with pytest.raises(PolarConeError):
        polar_system(quadric(), (1, 0, 0, 1))
    with pytest.raises(PolarConeError):
        polar_system(quadric(), (0, 0, 0, 0))
    with pytest.raises(PolarConeError):
        polar_system(quadric(), (1, 0, 0))


def test_zero_polars_are_kept():
    S = FormSystem.build(3, [poly_parse("z1^2", Z4)])
    C = polar_system(S, E[0])
    assert C.degrees.entries == (1, 2)
    assert C.forms[0].is_zero()


# iterated_polar -------------------------------------------------------------


def test_iterated_polar_identity_and_quartic():
    S = quadric()
    assert iterated_polar(S, []) == S
    rng = random.Random(1)
    Q, pts = planted_system(rng, 4, [4], 2)
    C = iterated_polar(Q, pts)
    assert C.degrees.entries == (1, 1, 2, 1, 2, 3, 1, 2, 3, 4)
    assert C.degrees.entries == raise_deg(DegreeVector([4]), 2).entries


def test_iterated_polar_ruling():
    C = iterated_polar(quadric(), [E[0], E[1]])
    assert all(f.evaluate(p) == 0 for f in C.forms for p in (E[0], E[1], (1, 5, 0, 0)))
    assert line_in_variety_check(quadric(), E[0], E[1])


def test_iterated_polar_rejects_dependent_points():
    with pytest.raises(PolarConeError):
        iterated_polar(quadric(), [E[0], (2, 0, 0, 0)])
    with pytest.raises(PolarConeError):
        iterated_polar(quadric(), [E[0], E[3]])  # not on the cone


@given(st.integers(0, 10**6))
def test_degree_and_type_contract(seed):
    rng = random.Random(seed)
    N = rng.randint(2, 6)
    j = rng.randint(0, min(2, N - 1))
    degrees = [rng.randint(1, 4) for _ in range(rng.randint(1, 3))]
    S, pts = planted_system(rng, N, degrees, j + 1)
    C = iterated_polar(S, pts[:j])
    assert C.degrees.entries == raise_deg(S.degrees, j).entries
    assert C.type == raise_type(S.type, j)
    for f, d in zip(C.forms, C.degrees):
        assert f.is_zero() or (f.is_homogeneous() and f.total_degree() == d)


@given(st.integers(0, 10**6))
def test_span_containment_and_nesting(seed):
    rng = random.Random(seed)
    N = rng.randint(3, 5)
    j = rng.randint(1, 2)
    S, pts = planted_system(rng, N, [rng.randint(2, 3) for _ in range(2)], j + 1)
    assert plane_in_variety_check(S, SpanningTuple.of(pts))
    prev = S
    for i in range(1, j + 1):
        cone = iterated_polar(S, pts[:i])
        # the span of the base points lies on the cone
        assert plane_in_variety_check(cone, SpanningTuple.of(pts[: i + 1]))
        # points sampled on the deeper cone satisfy the shallower one
        for t in range(3):
            combo = tuple(sum(Fraction(t + k + 1) * p[c] for k, p in enumerate(pts)) for c in range(N + 1))
            assert cone.vanishes_at(combo) and prev.vanishes_at(combo)
        prev = cone


def test_cone_nesting_mod_p():
    p = 7
    K = FiniteField(p)
    rng = random.Random(4)
    S = FormSystem.build(3, [form_vanishing_on(rng, 4, d, 1) for d in (2, 3)])
    x0 = tuple(K(int(i == 0)) for i in range(4))
    SK = S.over(K)
    C1 = polar_system(SK, x0)
    for y in projective_points(p, 4):
        ky = tuple(K(c) for c in y)
        if C1.vanishes_at(ky):
            assert SK.vanishes_at(ky)


# restrict_to_complement -----------------------------------------------------


def test_restrict_example():
    C = polar_system(quadric(), E[0])
    R = restrict_to_complement(C, SpanningTuple.of([E[0]]))
    assert R.ambient_dim == 1 and R.degrees.entries == (2,)
    z = variables("z", 2)
    assert R.forms[0] == poly_parse("-2*z0*z1", z)
    # chart points map back into the cone and span a line with x0
    y = embed_point(R.embedding, (1, 0))
    assert C.vanishes_at(y) and line_in_variety_check(quadric(), E[0], y)


def test_restrict_without_elimination():
    C = polar_system(quadric(), E[0])
    R = restrict_to_complement(C, SpanningTuple.of([E[0]]), eliminate=False)
    assert R.ambient_dim == 2 and R.degrees.entries == (1, 2)


def test_single_linear_form_eliminates_to_smaller_space():
    S = FormSystem.build(3, [poly_parse("z0 + z2", Z4)])
    R = eliminate_linear(S)
    assert R.ambient_dim == 2 and R.forms == ()
    full = FormSystem.build(1, [poly_parse("z0", variables("z", 2)), poly_parse("z1", variables("z", 2))])
    assert eliminate_linear(full).ambient_dim == -1


def test_restrict_errors():
    with pytest.raises(PolarConeError):
        restrict_to_complement(quadric(), SpanningTuple.of([E[0], E[1], E[2], E[3]]))
    with pytest.raises(PolarConeError):
        restrict_to_complement(quadric(), SpanningTuple.of([(1, 0)]))


@given(st.integers(0, 10**6))
def test_restrict_type_bookkeeping(seed):
    rng = random.Random(seed)
    N = rng.randint(3, 6)
    j = rng.randint(0, 1)
    degrees = [rng.randint(2, 4) for _ in range(rng.randint(1, 2))]
    S, pts = planted_system(rng, N, degrees, j + 2)
    cone = iterated_polar(S, pts[: j + 1])
    R = restrict_to_complement(cone, SpanningTuple.of(pts[: j + 1]))
    raised = raise_deg(S.degrees, j + 1).entries
    assert R.degrees.entries == tuple(d for d in raised if d != 1)
    m1 = raise_type(S.type, j + 1)[1]
    assert N - (j + 1) - m1 <= R.ambient_dim <= N - (j + 1)
    # every chart point extends the tuple to a plane on S
    y = pts[j + 1]
    assert cone.vanishes_at(y)


# containment checks ---------------------------------------------------------


def test_line_checks():
    S = quadric()
    assert line_in_variety_check(S, E[0], E[1])
    assert not line_in_variety_check(S, E[0], E[3])
    with pytest.raises(PolarConeError):
        line_in_variety_check(S, E[0], (3, 0, 0, 0))


def test_plane_checks():
    S = quadric()
    assert plane_in_variety_check(S, SpanningTuple.of([E[0], E[1]]))
    assert plane_in_variety_check(S, SpanningTuple.of([E[0]]))
    assert not plane_in_variety_check(S, SpanningTuple.of([(1, 0, 0, 1)]))


@pytest.mark.parametrize("p", [5, 7])
def test_cone_equals_union_of_lines_small(p):
    rng = random.Random(p)
    for d in (2, 3):
        # a surface through x0 = (0,0,1,0) containing the line z0 = z1 = 0
        S = FormSystem.build(3, [poly_parse(f"z0*z2^{d - 1} + z1*z3^{d - 1} + z0*z1*z2^{d - 2}", Z4)])
        cone, lines = cone_and_lines_mod_p(S, (0, 0, 1, 0), p)
        assert cone == lines and len(lines) > 1
    f = random_form(rng, 4, 2)
    f = MultiPoly(Z4, {e: c for e, c in f.terms.items() if e != (2, 0, 0, 0)})
    S = FormSystem.build(3, [f])
    cone, lines = cone_and_lines_mod_p(S, (1, 0, 0, 0), p)
    assert cone == lines
    assert all(eval_mod(f, y, p) == 0 for y in cone)
