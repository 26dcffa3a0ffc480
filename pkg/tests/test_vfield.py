import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import MODEL_SUITE, WEIGHT_SYSTEMS, field_weights, random_field, random_real_homogeneous
from modeldomain.dsl import parse_field, parse_poly
from modeldomain.exactalg import ExactMatrix, GaussQ
from modeldomain.vfield import (
    HoloVectorField,
    annihilator_space,
    apply,
    commutator,
    dilation_field,
    field_graded_parts,
    field_weight,
    is_tangent,
    model_field_half,
    model_field_one,
    straighten_negative_field,
    tangency_residual,
    tangent_field_space,
)
from modeldomain.wpoly import WeightSystem, z

EXAMPLE_P = "2*Re((z1^3*z2^2)*conj(z1*z2))"
EXAMPLE_Q = "(i*z1^2*z2*2*z1) d/dz1 + (-3*i*z1^2*z2*z2) d/dz2"


def suite_models():
    return [(parse_poly(t, WeightSystem(m)), WeightSystem(m)) for t, m in MODEL_SUITE]


def test_field_weight():
    ws = WeightSystem((4, 3))
    Q = parse_field(EXAMPLE_Q, ws)
    assert field_weight(Q, ws) == Fraction(5, 12)
    assert field_weight(HoloVectorField.zero(2), ws) == float("inf")
    mixed = parse_field("(1) d/dw + (w^2) d/dw", ws)
    assert field_weight(mixed, ws) == -1
    assert sorted(field_graded_parts(mixed, ws)) == [-1, 1]


def test_example_tangent():
    ws = WeightSystem((4, 3))
    p = parse_poly(EXAMPLE_P, ws)
    Q = parse_field(EXAMPLE_Q, ws)
    f = parse_poly("z1^3*z2^2", ws)
    assert apply(Q, p) == -GaussQ(0, 1) * f * f.conj()
    assert tangency_residual(p, Q, ws).residual.is_zero()


def test_non_tangent_has_witness():
    ws = WeightSystem((1,))
    rep = tangency_residual(parse_poly("z1*zb1", ws), parse_field("d/dz1", ws), ws)
    assert not rep.is_tangent and rep.witness is not None


def test_residual_rejects_bad_p():
    ws = WeightSystem((1,))
    with pytest.raises(ValueError):
        tangency_residual(parse_poly("i*z1*zb1", ws), parse_field("d/dz1", ws), ws)


def test_dilation():
    ws = WeightSystem((1,))
    D = dilation_field(ws)
    assert D == parse_field("(w) d/dw + (1/2*z1) d/dz1", ws)
    dw = parse_field("(1) d/dw", ws)
    assert commutator(D, dw) == -dw
    ws2 = WeightSystem((1, 2))
    assert is_tangent(parse_poly("z1*zb1 + z2^2*zb2^2", ws2), dilation_field(ws2), ws2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(WEIGHT_SYSTEMS), st.sampled_from(["-1", "-1/4", "0", "1/8", "1/2", "1"]))
def test_grading_commutator(seed, ws, mu):
    Q = random_field(random.Random(seed), ws, mu)
    assert commutator(dilation_field(ws), Q) == Q * Fraction(mu)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(WEIGHT_SYSTEMS))
def test_residual_linearity(seed, ws):
    rng = random.Random(seed)
    p = random_real_homogeneous(rng, ws)
    X = random_field(rng, ws, "1/2")
    Y = random_field(rng, ws, "0")
    a, b = Fraction(rng.randint(-5, 5), 3), Fraction(rng.randint(-5, 5), 7)
    lhs = tangency_residual(p, X * a + Y * b, ws).residual
    rhs = tangency_residual(p, X, ws).residual * a + tangency_residual(p, Y, ws).residual * b
    assert lhs == rhs


def test_commutator_antisymmetric_and_jacobi():
    ws = WeightSystem((1, 2))
    rng = random.Random(7)
    X, Y, Z = (random_field(rng, ws, mu) for mu in ("1/4", "-1/2", "0"))
    assert commutator(X, Y) == -commutator(Y, X)
    jac = commutator(X, commutator(Y, Z)) + commutator(Y, commutator(Z, X)) + commutator(Z, commutator(X, Y))
    assert jac.is_zero()


# -- model fields


def test_model_field_one_examples():
    ws = WeightSystem((1,))
    assert model_field_one(ws) == parse_field("(w^2) d/dw + (w*z1) d/dz1", ws)
    ws43 = WeightSystem((4, 3))
    assert model_field_one(ws43) == parse_field("(w^2) d/dw + (1/4*w*z1) d/dz1 + (1/3*w*z2) d/dz2", ws43)
    assert model_field_one(ws, 0).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(WEIGHT_SYSTEMS))
def test_model_field_one_tangent_to_balanced(seed, ws):
    p = random_real_homogeneous(random.Random(seed), ws, terms=4)
    from modeldomain.wpoly import balanced_part

    bp = balanced_part(p, ws)
    assert is_tangent(bp, model_field_one(ws, Fraction(3, 2)), ws)


def test_model_field_half():
    ws = WeightSystem((1,))
    assert model_field_half(ws) == parse_field("(-2i*w*z1) d/dw + (w - 2i*z1^2) d/dz1", ws)
    assert model_field_half(ws, 0).is_zero()
    ws2 = WeightSystem((1, 1))
    H = model_field_half(ws2)
    assert H.q[2] == parse_poly("-2i*z1*z2", 2)
    assert is_tangent(parse_poly("z1*zb1 + z2*zb2", ws2), H, ws2)
    # the balanced z1-free part may have other weights
    ws3 = WeightSystem((1, 2))
    assert is_tangent(parse_poly("z1*zb1 + z2^2*zb2^2", ws3), model_field_half(ws3), ws3)
    with pytest.raises(ValueError):
        model_field_half(WeightSystem((2,)))


def test_printed_half_coefficient_not_tangent():
    ws = WeightSystem((1,))
    assert not is_tangent(parse_poly("z1*zb1", ws), model_field_half(ws, printed=True), ws)


# -- solver


BALL_DIMS = {Fraction(-2): 0, Fraction(-3, 2): 0, Fraction(-1): 1, Fraction(-1, 2): 2,
             Fraction(0): 2, Fraction(1, 2): 2, Fraction(1): 1, Fraction(3, 2): 0}


@pytest.mark.parametrize("mu, dim", sorted(BALL_DIMS.items()))
def test_ball_dimensions(mu, dim):
    ws = WeightSystem((1,))
    assert tangent_field_space(parse_poly("z1*zb1", ws), ws, mu).real_dimension == dim


def test_ball_members():
    ws = WeightSystem((1,))
    p = parse_poly("z1*zb1", ws)
    assert tangent_field_space(p, ws, -1).basis == (parse_field("(1) d/dw", ws),)
    assert tangent_field_space(p, ws, Fraction(-1, 2)).contains(parse_field("(2i*z1) d/dw - d/dz1", ws))
    assert tangent_field_space(p, ws, 1).contains(parse_field("(w^2) d/dw + (w*z1) d/dz1", ws))
    assert tangent_field_space(p, ws, Fraction(1, 2)).contains(model_field_half(ws))
    assert not tangent_field_space(p, ws, 0).contains(parse_field("(w) d/dw", ws))


def test_basis_is_deterministic_and_normalized():
    ws = WeightSystem((1, 1))
    p = parse_poly("z1*zb1 + z2*zb2", ws)
    a = tangent_field_space(p, ws, 0)
    b = tangent_field_space(p, ws, Fraction(0))
    assert a.basis == b.basis
    for H in a.basis:
        first = H.terms()[0][2]
        assert first in (GaussQ(1), GaussQ(0, 1)) or first.re == 1 or first.im == 1


def test_unbalanced_has_no_positive_fields():
    ws = WeightSystem((2,))
    p = parse_poly("z1^2*zb1^2 + 1/2*(z1^3*zb1 + z1*zb1^3)", ws)
    for mu in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
        assert tangent_field_space(p, ws, mu).real_dimension == 0


def test_tangent_space_rejects_inhomogeneous():
    ws = WeightSystem((1,))
    with pytest.raises(ValueError):
        tangent_field_space(parse_poly("z1*zb1 + z1^2*zb1^2", ws), ws, 0)


@pytest.mark.parametrize("p, ws", suite_models())
def test_solver_soundness(p, ws):
    for mu in field_weights(ws):
        space = tangent_field_space(p, ws, mu)
        assert space.real_dimension == len(space.basis)
        for H in space.basis:
            assert is_tangent(p, H, ws)
            assert field_weight(H, ws) == mu
        # independence over R
        if space.basis:
            assert _real_rank(space.basis) == len(space.basis)


def _coeff_rows(fields, only_w=False):
    keys = sorted({(k, m) for H in fields for k, m, _ in H.terms() if not only_w or k == 0},
                  key=lambda t: (t[0], t[1].sort_key()))
    rows = []
    for H in fields:
        row = []
        for k, m in keys:
            c = H.q[k].coeff(m)
            row += [c.re, c.im]
        rows.append(row)
    return rows, 2 * len(keys)


def _real_rank(fields, only_w=False):
    rows, cols = _coeff_rows(fields, only_w)
    if cols == 0:
        return 0
    return ExactMatrix.from_rows(rows, cols, "real").rank()


@pytest.mark.parametrize("p, ws", suite_models())
def test_tangent_fields_vanish_at_origin_for_nonnegative_weight(p, ws):
    for mu in field_weights(ws, 0, 1):
        for H in tangent_field_space(p, ws, mu).basis:
            assert all(not c for c in H.value_at_origin())


@pytest.mark.parametrize("p, ws", suite_models())
def test_w_component_divisible_by_w(p, ws):
    for mu in field_weights(ws, 0, 1):
        for H in tangent_field_space(p, ws, mu).basis:
            # zero counts as divisible: rotations at weight 0 have q_0 = 0
            assert all(m.a >= 1 for m in H.q[0].support)
            if mu > 0:
                assert not H.q[0].is_zero()


@pytest.mark.parametrize("p, ws", suite_models())
def test_no_nonzero_field_without_w_component(p, ws):
    # the map H -> q_0 is injective on each space of nonzero weight
    for mu in field_weights(ws):
        if mu == 0:
            continue
        basis = tangent_field_space(p, ws, mu).basis
        assert _real_rank(basis, only_w=True) == len(basis)


@pytest.mark.parametrize("p, ws", suite_models())
def test_positive_weights_below_one_are_half(p, ws):
    for mu in field_weights(ws, 0, 1):
        if 0 < mu < 1 and mu != Fraction(1, 2):
            assert tangent_field_space(p, ws, mu).real_dimension == 0


# -- annihilators


def test_annihilator_example():
    ws = WeightSystem((4, 3))
    spaces = annihilator_space(parse_poly("z1^3*z2^2", ws), ws, Fraction(1, 2))
    at = {s.weight: s for s in spaces}
    assert at[Fraction(5, 12)].contains(parse_field(EXAMPLE_Q, ws))
    assert all(s.weight <= Fraction(1, 2) for s in spaces)


def test_annihilator_empty_and_rejects():
    ws = WeightSystem((1,))
    assert annihilator_space(parse_poly("z1^2", ws), ws, 1) == []
    with pytest.raises(ValueError):
        annihilator_space(parse_poly("z1*zb1", ws), ws, 1)


def test_annihilator_soundness():
    ws = WeightSystem((2, 1))
    phi = parse_poly("z1^2*z2 + z2^2", ws)
    for s in annihilator_space(phi, ws, 1):
        for R in s.basis:
            assert apply(R, phi).is_zero()
            assert R.q[0].is_zero()


# -- straightening


def test_straighten_ball():
    ws = WeightSystem((1,))
    p = parse_poly("z1*zb1", ws)
    r = straighten_negative_field(p, parse_field("(-2i*z1) d/dw + d/dz1", ws), ws)
    assert r.ok, r.checks
    assert r.S == parse_poly("-i*z1^2", 1)
    assert r.p_hat == parse_poly("-1/2*(z1 - zb1)^2", 1)
    assert (r.c, r.m) == (2, 2)
    assert r.s0 == parse_poly("-2i*z1", 1)
    assert r.field == parse_field("d/dz1", 1)


def test_straighten_scaled_field():
    ws = WeightSystem((1,))
    p = parse_poly("z1*zb1", ws)
    r = straighten_negative_field(p, parse_field("(2i*z1) d/dw - d/dz1", ws), ws)
    assert r.ok and r.field_scale == -1 and r.p_hat == parse_poly("-1/2*(z1 - zb1)^2", 1)


def test_straighten_leaves_other_variables():
    ws = WeightSystem((1, 1))
    p = parse_poly("z1*zb1 + z2*zb2", ws)
    r = straighten_negative_field(p, parse_field("(-2i*z1) d/dw + d/dz1", ws), ws)
    assert r.ok and r.change[2] == z(2, 2)
    assert r.p_hat == parse_poly("-1/2*(z1 - zb1)^2 + z2*zb2", 2)


def test_straighten_nonlinear_flow():
    # built from y1^4 + |z2|^2 by z2 -> z2 + z1^2 and w -> w + i z1^4/8
    ws = WeightSystem((2, 1))
    p = parse_poly("3/8*z1^2*zb1^2 - 1/4*(z1^3*zb1 + z1*zb1^3) + (z2 + z1^2)*(zb2 + zb1^2)", ws)
    Q = parse_field("(1/2i*z1^3) d/dw + d/dz1 + (-2*z1) d/dz2", ws)
    r = straighten_negative_field(p, Q, ws)
    assert r.ok, r.checks
    assert r.change[2] == parse_poly("z2 - z1^2", 2)
    assert r.S == parse_poly("1/8i*z1^4", 2)
    assert r.p_hat == parse_poly("((z1 - zb1)/(2i))^4 + z2*zb2", 2)
    assert (r.c, r.m) == (1, 4)


def test_straighten_relabels_variables():
    ws = WeightSystem((1, 2))
    p = parse_poly("3/8*z2^2*zb2^2 - 1/4*(z2^3*zb2 + z2*zb2^3) + (z1 + z2^2)*(zb1 + zb2^2)", ws)
    Q = parse_field("(1/2i*z2^3) d/dw + d/dz2 + (-2*z2) d/dz1", ws)
    r = straighten_negative_field(p, Q, ws)
    assert r.ok and r.permutation == (2, 1)


def test_straighten_flags_pure_terms():
    # the axis identities need p without pure terms; the report says so
    ws = WeightSystem((2, 1))
    p = parse_poly("((z1 - zb1)/(2i))^4 + (z2 + z1^2)*(zb2 + zb1^2)", ws)
    r = straighten_negative_field(p, parse_field("d/dz1 + (-2*z1) d/dz2", ws), ws)
    assert r.checks["independent_of_re_z1"] and not r.ok


def test_straighten_complex_constant():
    # leading coefficient i: straightened by rescaling z1 instead of the field
    ws = WeightSystem((1,))
    p = parse_poly("z1*zb1", ws)
    Q = parse_field("(-2*z1) d/dw + (i) d/dz1", ws)
    assert is_tangent(p, Q, ws)
    r = straighten_negative_field(p, Q, ws)
    assert r.ok and r.coordinate_scale == GaussQ(0, 1)


@pytest.mark.parametrize("text, m, field", [
    ("z1*zb1", (1,), "(1) d/dw"),
    ("z1*zb1", (1,), "(w) d/dw"),
    ("z1*zb1", (1,), "d/dz1"),
    ("z1*zb1 + z2^2*zb2^2", (1, 2), "(z2) d/dz1"),
])
def test_straighten_rejects(text, m, field):
    ws = WeightSystem(m)
    with pytest.raises(ValueError):
        straighten_negative_field(parse_poly(text, ws), parse_field(field, ws), ws)
