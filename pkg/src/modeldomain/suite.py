"""Reproduction suite: named fixtures checked concurrently.

Each fixture is a pure function returning ``(passed, detail)``.  A fixture
that raises is recorded as failed; the others are unaffected.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .dsl import parse_field, parse_poly
from .exactalg import GaussQ
from .models import (
    MP,
    NumericPoint,
    SingularPointError,
    assign_weights_adapted,
    cayley_forward,
    cayley_identity_residual,
    cayley_inverse,
    homogeneous_model_extract,
    order_along_direction,
    zero_set_checks,
)
from .vfield import (
    annihilator_space,
    apply,
    commutator,
    dilation_field,
    is_tangent,
    model_field_half,
    model_field_one,
    straighten_negative_field,
    tangency_residual,
    tangent_field_space,
)
from .wpoly import WeightSystem, balanced_part, signature_decompose


@dataclass(frozen=True)
class Fixture:
    tag: str
    name: str
    run: Callable[[], tuple]


@dataclass(frozen=True)
class FixtureResult:
    tag: str
    name: str
    passed: bool
    detail: str


# ---------------------------------------------------------------------------
# fixture bodies

EXAMPLE_P = "2*Re((z1^3*z2^2)*conj(z1*z2))"
EXAMPLE_Q = "(i*z1^2*z2*2*z1) d/dz1 + (-3*i*z1^2*z2*z2) d/dz2"
BALL = "z1*zb1"


def _example_field():
    ws = WeightSystem((4, 3))
    p = parse_poly(EXAMPLE_P, ws)
    Q = parse_field(EXAMPLE_Q, ws)
    f = parse_poly("z1^3*z2^2", ws)
    qp = apply(Q, p)
    expected = -GaussQ(0, 1) * f * f.conj()
    res = tangency_residual(p, Q, ws)
    return qp == expected and res.residual.is_zero(), f"Qp = {qp}"


def _ball_dimensions():
    ws = WeightSystem((1,))
    p = parse_poly(BALL, ws)
    mus = [Fraction(k, 2) for k in range(-4, 3)]
    dims = [tangent_field_space(p, ws, mu).real_dimension for mu in mus]
    return dims == [0, 0, 1, 2, 2, 2, 1], f"dims {dims}"


def _ball_negative_half():
    ws = WeightSystem((1,))
    p = parse_poly(BALL, ws)
    space = tangent_field_space(p, ws, Fraction(-1, 2))
    return space.contains(parse_field("(2i*z1) d/dw + (-1) d/dz1", ws)), "2iz1 d/dw - d/dz1 in span"


def _ball_weight_one():
    ws = WeightSystem((1,))
    p = parse_poly(BALL, ws)
    space = tangent_field_space(p, ws, 1)
    return space.real_dimension == 1 and space.contains(model_field_one(ws)), str(space.basis[0])


def _dilation():
    ws = WeightSystem((1, 2))
    p = parse_poly("z1*zb1 + z2^2*zb2^2", ws)
    D = dilation_field(ws)
    ok = is_tangent(p, D, ws) and commutator(D, parse_field("(1) d/dw", ws)) == -parse_field("(1) d/dw", ws)
    return ok, str(D)


def _weight_one_models():
    out = []
    for text, m in (("z1*zb1", (1,)), ("z1*zb1 + z2*zb2", (1, 1)), ("z1*zb1 + z2^2*zb2^2", (1, 2))):
        ws = WeightSystem(m)
        out.append(is_tangent(parse_poly(text, ws), model_field_one(ws), ws))
    return all(out), f"tangent: {out}"


def _weight_half_models():
    out = []
    for text, m in (("z1*zb1", (1,)), ("z1*zb1 + z2*zb2", (1, 1))):
        ws = WeightSystem(m)
        out.append(is_tangent(parse_poly(text, ws), model_field_half(ws), ws))
    return all(out), f"tangent: {out}"


def _weight_half_printed_fails():
    ws = WeightSystem((1,))
    bad = model_field_half(ws, printed=True)
    return not is_tangent(parse_poly(BALL, ws), bad, ws), "printed coefficient is not tangent"


def _unbalanced_no_fields():
    ws = WeightSystem((2,))
    p = parse_poly("z1^2*zb1^2 + 1/2*(z1^3*zb1 + z1*zb1^3)", ws)
    dims = [tangent_field_space(p, ws, Fraction(k, 4)).real_dimension for k in range(1, 5)]
    return dims == [0, 0, 0, 0], f"dims {dims}"


def _straighten_ball():
    ws = WeightSystem((1,))
    p = parse_poly(BALL, ws)
    r = straighten_negative_field(p, parse_field("(2i*z1) d/dw + (-1) d/dz1", ws), ws)
    two_y2 = parse_poly("-1/2*(z1 - zb1)^2", 1)
    s0 = parse_poly("-2i*z1", 1)
    ok = r.ok and r.p_hat == two_y2 and r.c == 2 and r.m == 2 and r.s0 == s0
    return ok, f"p_hat = {r.p_hat}, c = {r.c}, m = {r.m}, s0 = {r.s0}"


def _straighten_two_balls():
    ws = WeightSystem((1, 1))
    p = parse_poly("z1*zb1 + z2*zb2", ws)
    r = straighten_negative_field(p, parse_field("(-2i*z1) d/dw + d/dz1", ws), ws)
    ok = r.ok and r.p_hat == parse_poly("-1/2*(z1 - zb1)^2 + z2*zb2", 2) and r.change[2] == parse_poly("z2", 2)
    return ok, f"p_hat = {r.p_hat}"


def _random_point(rng: random.Random, n: int) -> NumericPoint:
    while True:
        wstar = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(wstar) <= 2:
            break
    zs = []
    for _ in range(n):
        while True:
            c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            if abs(c) <= 1:
                zs.append(c)
                break
    return NumericPoint(wstar, zs)


def cayley_sweep(text: str, m: Sequence[int], samples: int = 1000, seed: int = 0):
    """Largest identity residual and round-trip error over random points."""
    ws = WeightSystem(m)
    p = parse_poly(text, ws)
    rng = random.Random(seed)
    worst_identity = MP.mpf(0)
    worst_roundtrip = MP.mpf(0)
    for _ in range(samples):
        q = _random_point(rng, ws.n)
        try:
            back = cayley_inverse(cayley_forward(q, ws), ws)
        except SingularPointError:
            continue
        worst_identity = max(worst_identity, abs(cayley_identity_residual(q, p, ws)))
        err = max([abs(back.w - q.w)] + [abs(a - b) for a, b in zip(back.z, q.z)])
        worst_roundtrip = max(worst_roundtrip, err)
    return worst_identity, worst_roundtrip


def _cayley(text, m):
    def run():
        ident, trip = cayley_sweep(text, m, samples=200)
        return ident < 1e-12 and trip < 1e-12, f"identity {MP.nstr(ident, 3)}, round trip {MP.nstr(trip, 3)}"
    return run


def _cayley_value():
    w = cayley_forward(NumericPoint(-1j, [0]), WeightSystem((1,))).w
    return abs(w - MP.mpf(3) / 5) < 1e-40, f"w = {MP.nstr(w, 10)}"


def _weights():
    rep = assign_weights_adapted(parse_poly("z1*zb1 + z2^2*zb2^2 + z2^3*zb2^3"))
    ok = rep.m == (1, 2) and rep.admissible and rep.p == parse_poly("z1*zb1 + z2^2*zb2^2", 2)
    return ok, f"m = {rep.m}, p = {rep.p}"


def _no_weight_one():
    ws = WeightSystem((1,))
    rep = homogeneous_model_extract(parse_poly("z1^2*zb1^2", ws), ws)
    return (not rep.admissible) and rep.p.is_zero(), rep.message


def _orders():
    f = parse_poly("z1*zb1 + z2^2*zb2^2")
    got = (order_along_direction(f, [1, 0]), order_along_direction(f, [0, 1]),
           order_along_direction(parse_poly("z1*zb1", 2), [0, 1]))
    return got == (2, 4, float("inf")), f"orders {got}"


def _signature_example():
    ws = WeightSystem((4, 3))
    dec = signature_decompose(parse_poly(EXAMPLE_P, ws), ws)
    sigs = sorted(dec.signatures)
    return sigs == [Fraction(-5, 12), Fraction(5, 12)] and not dec.is_balanced, f"signatures {[str(s) for s in sigs]}"


def _balanced_part_ball():
    ws = WeightSystem((1,))
    p = parse_poly("z1*zb1 + Re(z1^2)", ws)
    bp = balanced_part(p, ws)
    return bp == parse_poly("z1*zb1", ws), f"balanced part {bp}"


def _annihilator_example():
    ws = WeightSystem((4, 3))
    spaces = annihilator_space(parse_poly("z1^3*z2^2", ws), ws, Fraction(1, 2))
    Q = parse_field(EXAMPLE_Q, ws)
    hit = [s for s in spaces if s.weight == Fraction(5, 12)]
    return bool(hit) and hit[0].contains(Q), f"weights {[str(s.weight) for s in spaces]}"


def _annihilator_empty():
    ws = WeightSystem((1,))
    spaces = annihilator_space(parse_poly("z1^2", ws), ws, 1)
    return spaces == [], "no annihilating field up to weight 1"


def _zero_set():
    ws = WeightSystem((1, 2))
    good = zero_set_checks(parse_poly("z1*zb1 + z2^2*zb2^2", ws), ws, samples=300)
    ws2 = WeightSystem((4, 3))
    bad = zero_set_checks(parse_poly(EXAMPLE_P, ws2), ws2, samples=50)
    ok = good.positivity == "supported" and good.axis == "supported" and bad.axis == "refuted"
    return ok, f"{good.positivity}/{good.axis}; example {bad.axis}"


FIXTURES: tuple[Fixture, ...] = (
    Fixture("tangency-example", "example field gives Qp = -i f conj(f)", _example_field),
    Fixture("signature", "example polynomial has signatures +-5/12", _signature_example),
    Fixture("balanced-part", "balanced part of |z1|^2 + Re z1^2", _balanced_part_ball),
    Fixture("tangent-space ball", "ball dimensions by weight", _ball_dimensions),
    Fixture("tangent-space ball", "weight -1/2 contains 2iz1 d/dw - d/dz1", _ball_negative_half),
    Fixture("tangent-space ball weight-one", "weight-1 space is spanned by the model field", _ball_weight_one),
    Fixture("dilation", "dilation field is tangent and grades d/dw", _dilation),
    Fixture("weight-one-field", "w^2 d/dw model field is tangent", _weight_one_models),
    Fixture("weight-half-field", "corrected weight-1/2 field is tangent", _weight_half_models),
    Fixture("weight-half-field printed", "printed weight-1/2 coefficient fails", _weight_half_printed_fails),
    Fixture("unbalanced", "unbalanced model has no positive-weight fields", _unbalanced_no_fields),
    Fixture("straighten", "ball field straightens to d/dz1", _straighten_ball),
    Fixture("straighten", "second variable is untouched", _straighten_two_balls),
    Fixture("annihilator", "example field annihilates z1^3 z2^2", _annihilator_example),
    Fixture("annihilator", "nothing annihilates z1^2", _annihilator_empty),
    Fixture("cayley", "transform value at w* = -i", _cayley_value),
    Fixture("cayley", "identity and round trip, ball", _cayley("z1*zb1", (1,))),
    Fixture("cayley", "identity and round trip, |z1|^2 + |z2|^4", _cayley("z1*zb1 + z2^2*zb2^2", (1, 2))),
    Fixture("weights", "axis orders", _orders),
    Fixture("weights", "adapted weight assignment", _weights),
    Fixture("weights", "no weight-one part", _no_weight_one),
    Fixture("zero-set", "positivity and coordinate-line checks", _zero_set),
)


def _run_one(fx: Fixture) -> FixtureResult:
    try:
        passed, detail = fx.run()
        return FixtureResult(fx.tag, fx.name, bool(passed), str(detail))
    except Exception as exc:  # a broken fixture is a failed row, not a crash
        return FixtureResult(fx.tag, fx.name, False, f"{type(exc).__name__}: {exc}")


def select(fixtures: Sequence[Fixture], pattern: str | None) -> list[Fixture]:
    if not pattern:
        return list(fixtures)
    pat = pattern.lower()
    return [fx for fx in fixtures if pat in fx.tag.lower() or pat in fx.name.lower()]


def run_suite(pattern: str | None = None, fixtures: Sequence[Fixture] | None = None,
              jobs: int = 4) -> list[FixtureResult]:
    """Run the selected fixtures; results come back in fixture order."""
    chosen = select(FIXTURES if fixtures is None else fixtures, pattern)
    if jobs <= 1:
        return [_run_one(fx) for fx in chosen]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, chosen))


def format_table(results: Sequence[FixtureResult]) -> str:
    if not results:
        return "no fixtures selected"
    tw = max(len(r.tag) for r in results)
    nw = max(len(r.name) for r in results)
    lines = [f"{'tag':<{tw}}  {'fixture':<{nw}}  result"]
    for r in results:
        lines.append(f"{r.tag:<{tw}}  {r.name:<{nw}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}")
    npass = sum(r.passed for r in results)
    lines.append(f"{npass}/{len(results)} passed")
    return "\n".join(lines)
