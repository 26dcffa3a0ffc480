"""Holomorphic polynomial vector fields and tangency to ``{v + p < 0}``.

A field ``H = q_0 d/dw + sum_j q_j d/dz_j`` is stored as the tuple
``(q_0, q_1, ..., q_n)``.  The monomial field ``w^a z^J d/dz_k`` has weight
``a + wt(J) - delta_k`` with ``delta_0 = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactalg import (
    ONE,
    ZERO,
    ExactMatrix,
    GaussQ,
    I,
    LinearConstraint,
    as_fraction,
    complexify,
    nullspace,
    real_linearize,
    row_reduce,
)
from .wpoly import (
    MixedPoly,
    Monomial,
    WeightSystem,
    check_reality,
    exponents_of_weight,
    im_part,
    is_weighted_homogeneous,
    monomial_weight,
    re_part,
    substitute_boundary,
    weighted_substitution,
    z,
    zb,
)


class HoloVectorField:
    __slots__ = ("q",)

    def __init__(self, q: Sequence[MixedPoly]):
        q = list(q)
        if not q:
            raise ValueError("a field needs at least the d/dw component")
        n = len(q) - 1
        comps = []
        for k, c in enumerate(q):
            if not isinstance(c, MixedPoly):
                c = MixedPoly.const(c, n)
            if not c.is_holomorphic() or any(m.c for m in c.support):
                raise ValueError(f"component {k} is not holomorphic in (w, z)")
            if c.n > n and any(m.J[i] for m in c.support for i in range(n, c.n)):
                raise ValueError(f"component {k} uses a variable beyond z_{n}")
            comps.append(c.lift(n))
        object.__setattr__(self, "q", tuple(comps))

    def __setattr__(self, name, value):
        raise AttributeError("HoloVectorField is immutable")

    @property
    def n(self) -> int:
        return len(self.q) - 1

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> HoloVectorField:
        return cls([MixedPoly.zero(n) for _ in range(n + 1)])

    @classmethod
    def basis_field(cls, k: int, coef: MixedPoly, n: int) -> HoloVectorField:
        """``coef * d/dz_k`` (``k = 0`` is ``d/dw``)."""
        comps = [MixedPoly.zero(n) for _ in range(n + 1)]
        comps[k] = coef.lift(n)
        return cls(comps)

    @classmethod
    def d_dw(cls, n: int) -> HoloVectorField:
        return cls.basis_field(0, MixedPoly.const(1, n), n)

    @classmethod
    def d_dz(cls, j: int, n: int) -> HoloVectorField:
        return cls.basis_field(j, MixedPoly.const(1, n), n)

    # algebra --------------------------------------------------------------
    def lift(self, n: int) -> HoloVectorField:
        if n == self.n:
            return self
        if n < self.n:
            raise ValueError("cannot drop components")
        return HoloVectorField([c.lift(n) for c in self.q] + [MixedPoly.zero(n)] * (n - self.n))

    def _align(self, other: HoloVectorField):
        n = max(self.n, other.n)
        return self.lift(n), other.lift(n)

    def __add__(self, other: HoloVectorField) -> HoloVectorField:
        a, b = self._align(other)
        return HoloVectorField([x + y for x, y in zip(a.q, b.q)])

    def __neg__(self):
        return HoloVectorField([-x for x in self.q])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, HoloVectorField):
            return NotImplemented
        return HoloVectorField([x * c for x in self.q])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HoloVectorField):
            return NotImplemented
        a, b = self._align(other)
        return a.q == b.q

    def __hash__(self):
        return hash(tuple(hash(x) for x in self.q))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.q)

    def __bool__(self):
        return not self.is_zero()

    def __call__(self, f: MixedPoly) -> MixedPoly:
        return apply(self, f)

    def terms(self) -> list[tuple[int, Monomial, GaussQ]]:
        return [(k, m, c) for k, comp in enumerate(self.q) for m, c in comp.terms()]

    def value_at_origin(self) -> list[GaussQ]:
        zero = Monomial(0, 0, 0, (0,) * self.n, (0,) * self.n)
        return [c.coeff(zero) for c in self.q]

    def __str__(self):
        from .dsl import format_field
        return format_field(self)

    def __repr__(self):
        return f"HoloVectorField({str(self)!r})"


def _term_weight(k: int, m: Monomial, ws: WeightSystem) -> Fraction:
    return monomial_weight(m, ws) - ws.delta(k)


def field_weight(H: HoloVectorField, ws: WeightSystem):
    """Smallest weight of a nonzero term; ``math.inf`` for the zero field."""
    H = H.lift(ws.n)
    weights = [_term_weight(k, m, ws) for k, m, _ in H.terms()]
    return min(weights) if weights else math.inf


def field_graded_parts(H: HoloVectorField, ws: WeightSystem) -> dict[Fraction, HoloVectorField]:
    H = H.lift(ws.n)
    buckets: dict[Fraction, list[dict]] = {}
    for k, m, c in H.terms():
        mu = _term_weight(k, m, ws)
        comps = buckets.setdefault(mu, [dict() for _ in range(H.n + 1)])
        comps[k][m] = c
    return {mu: HoloVectorField([MixedPoly(c, H.n) for c in buckets[mu]]) for mu in sorted(buckets)}


def is_homogeneous_field(H: HoloVectorField, ws: WeightSystem, weight=None) -> bool:
    parts = field_graded_parts(H, ws)
    if len(parts) > 1:
        return False
    return weight is None or not parts or next(iter(parts)) == as_fraction(weight)


def apply(H: HoloVectorField, f: MixedPoly) -> MixedPoly:
    """``H f`` as a holomorphic derivation; ``wb`` and ``zb`` are constants."""
    if any(m.c for m in f.support):
        raise ValueError("apply() expects an ambient polynomial (no u)")
    n = max(H.n, f.n)
    H = H.lift(n)
    f = f.lift(n)
    out = MixedPoly.zero(n)
    for k, qk in enumerate(H.q):
        if qk:
            d = f.diff(k)
            if d:
                out = out + qk * d
    return out


def commutator(X: HoloVectorField, Y: HoloVectorField) -> HoloVectorField:
    X, Y = X._align(Y)
    return HoloVectorField([apply(X, yk) - apply(Y, xk) for xk, yk in zip(X.q, Y.q)])


def dilation_field(ws: WeightSystem) -> HoloVectorField:
    """``w d/dw + sum delta_j z_j d/dz_j``."""
    n = ws.n
    comps = [MixedPoly.monomial(a=1, n=n)] + [z(j, n) * ws.delta(j) for j in range(1, n + 1)]
    return HoloVectorField(comps)


# ---------------------------------------------------------------------------
# tangency


@dataclass(frozen=True)
class TangencyReport:
    residual: MixedPoly
    is_tangent: bool
    witness: tuple | None  # (Monomial, GaussQ) of the first nonzero term


def _check_defining(p: MixedPoly, ws: WeightSystem) -> MixedPoly:
    if not p.is_z_only():
        raise ValueError("defining polynomial must depend on z and zb only")
    if not check_reality(p):
        raise ValueError("defining polynomial must be real")
    return p.lift(max(p.n, ws.n))


def tangency_expression(p: MixedPoly, H: HoloVectorField) -> MixedPoly:
    """``-(i/2) q_0 + sum_j q_j dp/dz_j``; its real part must vanish on the boundary."""
    n = max(p.n, H.n)
    H = H.lift(n)
    p = p.lift(n)
    out = H.q[0] * GaussQ(0, Fraction(-1, 2))
    for j in range(1, n + 1):
        if H.q[j]:
            out = out + H.q[j] * p.diff_z(j)
    return out


def tangency_residual(p: MixedPoly, H: HoloVectorField, ws: WeightSystem) -> TangencyReport:
    p = _check_defining(p, ws)
    H = H.lift(p.n)
    res = substitute_boundary(re_part(tangency_expression(p, H)), p, ws)
    terms = res.terms()
    return TangencyReport(res, not terms, terms[0] if terms else None)


def is_tangent(p: MixedPoly, H: HoloVectorField, ws: WeightSystem) -> bool:
    return tangency_residual(p, H, ws).is_tangent


# ---------------------------------------------------------------------------
# solution spaces


@dataclass(frozen=True)
class FieldBasis:
    """Basis of a space of homogeneous fields of one weight.

    ``over`` is ``"R"`` for tangent-field spaces (real span) and ``"C"`` for
    annihilator spaces (complex span).
    """

    weight: Fraction
    basis: tuple
    real_dimension: int
    over: str = "R"

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def contains(self, H: HoloVectorField) -> bool:
        """Whether ``H`` lies in the span of the basis."""
        fields = list(self.basis) + [H]
        n = max(f.n for f in fields)
        fields = [f.lift(n) for f in fields]
        keys = sorted({(k, m) for f in fields for k, m, _ in f.terms()},
                      key=lambda t: (t[0], t[1].sort_key()))
        if not keys:
            return True
        vecs = []
        for f in fields:
            coeffs = [f.q[k].coeff(m) for k, m in keys]
            if self.over == "R":
                vecs.append([x for c in coeffs for x in (c.re, c.im)])
            else:
                vecs.append(coeffs)
        mode = "real" if self.over == "R" else "complex"
        ncols = len(vecs[0])
        with_h = ExactMatrix.from_rows(vecs, ncols, mode).rank()
        without = ExactMatrix.from_rows(vecs[:-1], ncols, mode).rank() if vecs[:-1] else 0
        return with_h == without


def monomial_fields(ws: WeightSystem, mu, include_w: bool = True) -> list[tuple[int, Monomial]]:
    """All ``(k, w^a z^J)`` with ``a + wt(J) - delta_k == mu``, in canonical order."""
    mu = as_fraction(mu)
    n = ws.n
    zeros = (0,) * n
    out = []
    for k in range(0 if include_w else 1, n + 1):
        target = mu + ws.delta(k)
        if include_w:
            for e in exponents_of_weight((Fraction(1),) + ws.deltas, target):
                out.append((k, Monomial(e[0], 0, 0, tuple(e[1:]), zeros)))
        else:
            for e in exponents_of_weight(ws.deltas, target):
                out.append((k, Monomial(0, 0, 0, tuple(e), zeros)))
    return out


def _assemble(fields: list[tuple[int, Monomial]], coeffs: Sequence[GaussQ], n: int) -> HoloVectorField:
    comps: list[dict] = [dict() for _ in range(n + 1)]
    for (k, m), c in zip(fields, coeffs):
        if c:
            comps[k][m] = c
    return HoloVectorField([MixedPoly(c, n) for c in comps])


def tangent_field_space(p: MixedPoly, ws: WeightSystem, mu) -> FieldBasis:
    """Basis of the real space of weight-``mu`` fields tangent to ``{v + p < 0}``.

    The basis is the reduced echelon basis of the solution space in the
    coordinates ``(re c_0, im c_0, re c_1, ...)`` of the coefficients of
    :func:`monomial_fields`, so it is reproducible.
    """
    mu = as_fraction(mu)
    p = _check_defining(p, ws)
    if not is_weighted_homogeneous(p, ws, 1):
        raise ValueError("tangent_field_space needs p weighted homogeneous of weight 1")
    n = ws.n
    p = p.lift(n)
    fields = monomial_fields(ws, mu)
    if not fields:
        return FieldBasis(mu, (), 0)
    boundary_exprs = []
    for k, m in fields:
        F = HoloVectorField.basis_field(k, MixedPoly({m: 1}, n), n)
        E = substitute_boundary(tangency_expression(p, F), p, ws)
        boundary_exprs.append((E, E.conj()))
    keys = set()
    for E, Ec in boundary_exprs:
        keys |= E.support | Ec.support
    constraints = []
    half = Fraction(1, 2)
    for key in sorted(keys, key=Monomial.sort_key):
        coeffs = {i: E.coeff(key) * half for i, (E, _) in enumerate(boundary_exprs) if E.coeff(key)}
        conj = {i: Ec.coeff(key) * half for i, (_, Ec) in enumerate(boundary_exprs) if Ec.coeff(key)}
        constraints.append(LinearConstraint(coeffs, conj, "zero"))
    M = real_linearize(constraints, len(fields))
    kernel = row_reduce(nullspace(M), 2 * len(fields), "real")
    basis = []
    for vec in kernel:
        H = _assemble(fields, complexify(vec), n)
        if not tangency_residual(p, H, ws).is_tangent:
            raise AssertionError(f"solver returned a non-tangent field {H}")
        basis.append(H)
    return FieldBasis(mu, tuple(basis), len(basis))


def _exponents_up_to(weights: Sequence[Fraction], bound: Fraction) -> list[tuple]:
    out: list[tuple] = []

    def rec(i: int, remaining: Fraction, acc: list):
        if i == len(weights):
            out.append(tuple(acc))
            return
        e = 0
        while e * weights[i] <= remaining:
            acc.append(e)
            rec(i + 1, remaining - e * weights[i], acc)
            acc.pop()
            e += 1

    if bound >= 0:
        rec(0, bound, [])
    return out


def annihilator_space(phi: MixedPoly, ws: WeightSystem, weight_bound=1) -> list[FieldBasis]:
    """Nonzero spaces of fields ``R = sum r_j d/dz_j`` with ``R phi = 0``.

    Every field weight ``mu <= weight_bound`` is searched; an empty result
    means no such field exists up to that bound.  Nothing is claimed above it.
    """
    bound = as_fraction(weight_bound)
    if not (phi.is_z_only() and phi.is_holomorphic()):
        raise ValueError("annihilator check needs a holomorphic polynomial in z only")
    n = ws.n
    phi = phi.lift(max(phi.n, n))
    if phi.n > n:
        raise ValueError("polynomial uses more variables than the weight system")
    zeros = (0,) * n
    by_weight: dict[Fraction, list[tuple[int, Monomial]]] = {}
    for k in range(1, n + 1):
        for e in _exponents_up_to(ws.deltas, bound + ws.delta(k)):
            m = Monomial(0, 0, 0, e, zeros)
            by_weight.setdefault(monomial_weight(m, ws) - ws.delta(k), []).append((k, m))
    out = []
    for mu in sorted(by_weight):
        fields = sorted(by_weight[mu], key=lambda t: (t[0], t[1].sort_key()))
        images = [phi.diff_z(k) * MixedPoly({m: 1}, n) for k, m in fields]
        keys = sorted(set().union(*(im.support for im in images)), key=Monomial.sort_key)
        if not keys:
            kernel = [[ONE if i == j else ZERO for i in range(len(fields))] for j in range(len(fields))]
        else:
            rows = [[im.coeff(key) for im in images] for key in keys]
            kernel = row_reduce(nullspace(ExactMatrix.from_rows(rows, len(fields), "complex")),
                                len(fields), "complex")
        if not kernel:
            continue
        basis = []
        for vec in kernel:
            R = _assemble(fields, vec, n)
            if not apply(R, phi).is_zero():
                raise AssertionError(f"solver returned a non-annihilating field {R}")
            basis.append(R)
        out.append(FieldBasis(mu, tuple(basis), 2 * len(basis), "C"))
    return out


# ---------------------------------------------------------------------------
# canonical positive-weight fields


def _real_lambda(lam) -> Fraction:
    if isinstance(lam, GaussQ):
        if lam.im:
            raise ValueError("the field parameter must be real")
        lam = lam.re
    return as_fraction(lam)


def model_field_half(ws: WeightSystem, lam=1, index: int = 1, printed: bool = False) -> HoloVectorField:
    """Weight-1/2 field ``lam(-2i w z_1 d/dw + w d/dz_1 - sum_j 4i delta_j z_1 z_j d/dz_j)``.

    ``printed=True`` uses the coefficient ``2i delta_j`` instead of
    ``4i delta_j``; that variant is not tangent to the ball and is only kept
    for comparison.  The default variant is checked against
    ``p = sum_{delta_j = 1/2} |z_j|^2`` before it is returned.
    """
    lam = _real_lambda(lam)
    if ws.delta(index) != Fraction(1, 2):
        raise ValueError(f"z_{index} must have weight 1/2")
    n = ws.n
    wz = MixedPoly.monomial(a=1, n=n) * z(index, n)
    factor = GaussQ(0, 2 if printed else 4)
    comps = [wz * GaussQ(0, -2)] + [MixedPoly.zero(n)] * n
    comps[index] = MixedPoly.monomial(a=1, n=n)
    for j in range(1, n + 1):
        comps[j] = comps[j] - z(index, n) * z(j, n) * (factor * ws.delta(j))
    H = HoloVectorField(comps)
    if not printed:
        ball = sum((z(j, n) * zb(j, n) for j in range(1, n + 1) if ws.delta(j) == Fraction(1, 2)),
                   MixedPoly.zero(n))
        if not tangency_residual(ball, H, ws).is_tangent:
            raise AssertionError("weight-1/2 model field failed its tangency check")
    return H * lam


def model_field_one(ws: WeightSystem, lam=1) -> HoloVectorField:
    """Weight-1 field ``lam(w^2 d/dw + sum_j 2 delta_j w z_j d/dz_j)``."""
    lam = _real_lambda(lam)
    n = ws.n
    ww = MixedPoly.monomial(a=1, n=n)
    comps = [ww * ww] + [ww * z(j, n) * (2 * ws.delta(j)) for j in range(1, n + 1)]
    return HoloVectorField(comps) * lam


# ---------------------------------------------------------------------------
# straightening negative-weight fields


def _permute_poly(p: MixedPoly, perm: Sequence[int]) -> MixedPoly:
    """Variable ``i`` of the result is variable ``perm[i-1]`` of ``p``."""
    out = {}
    for m, c in p.terms():
        J = tuple(m.J[perm[i] - 1] for i in range(len(perm)))
        K = tuple(m.K[perm[i] - 1] for i in range(len(perm)))
        out[m._replace(J=J, K=K)] = c
    return MixedPoly(out, len(perm))


def _permute_field(H: HoloVectorField, perm: Sequence[int]) -> HoloVectorField:
    comps = [_permute_poly(H.q[0], perm)] + [_permute_poly(H.q[perm[i]], perm) for i in range(len(perm))]
    return HoloVectorField(comps)


@dataclass(frozen=True)
class StraighteningResult:
    """Outcome of straightening a negative-weight tangent field to ``d/dz_1``.

    Coordinates are relabelled so the distinguished variable is ``z_1``
    (``permutation[i-1]`` is the original index of new variable ``i``).  The
    change of coordinates is ``z_j = change[j](zh)`` and ``w = wh + S(zh)``.
    ``p_tilde`` is ``p`` pulled back by the z-change alone and ``p_hat``
    the new defining function ``p_tilde + Im S``.
    """

    weight: Fraction
    permutation: tuple
    ws: WeightSystem
    field_scale: Fraction
    coordinate_scale: GaussQ
    change: dict
    S: MixedPoly
    s0: MixedPoly
    p_tilde: MixedPoly
    p_hat: MixedPoly
    field: HoloVectorField
    c: Fraction
    m: int
    alphas: dict
    m_k: dict
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _y1_power(e: int, n: int) -> MixedPoly:
    # ((z1 - zb1) / 2i)^e
    return ((z(1, n) - zb(1, n)) / GaussQ(0, 2)) ** e


def _z1_over_2i(e: int, n: int) -> MixedPoly:
    return (z(1, n) / GaussQ(0, 2)) ** e


def _axis_profile(g: MixedPoly, n: int):
    """Write ``g(z_1, zb_1)`` as ``a * y_1^e``; returns ``(a, e)`` or None."""
    if g.is_zero():
        return ZERO, None
    degrees = {m.degree for m in g.support}
    if len(degrees) != 1:
        return None
    e = degrees.pop()
    lead = g.coeff(Monomial(0, 0, 0, (e,) + (0,) * (n - 1), (0,) * n))
    a = lead * GaussQ(0, 2) ** e
    if g != _y1_power(e, n) * a:
        return None
    return a, e


def straighten_negative_field(p: MixedPoly, Q: HoloVectorField, ws: WeightSystem) -> StraighteningResult:
    """Bring a tangent field of weight ``-delta_j`` to the form ``d/dz_1``.

    The z-change is the flow of ``Q`` started on ``{z_j = 0}``; because the
    field has negative weight its components are triangular in weight and the
    flow is an exact polynomial map.  When ``Q`` only depends on ``z_1`` this
    is the antiderivative ``h_j`` with ``dh_j/dz_1 = q_j``.  Then
    ``w = wh + S`` with ``dS/dz_1 = s_0`` removes the ``d/dw`` part.  Terms
    ``z_k y_1^(m-1)`` for variables of the same weight as ``z_1`` are removed
    by a linear change ``z_1 -> z_1 + i beta z_k``.
    """
    p = _check_defining(p, ws)
    n = ws.n
    p = p.lift(n)
    Q = Q.lift(n)
    if not is_weighted_homogeneous(p, ws, 1):
        raise ValueError("p must be weighted homogeneous of weight 1")
    if Q.is_zero() or not is_homogeneous_field(Q, ws):
        raise ValueError("Q must be a nonzero homogeneous field")
    mu = field_weight(Q, ws)
    if mu >= 0:
        raise ValueError(f"Q has weight {mu}; only negative weights are straightened")
    if mu == -1:
        raise ValueError("weight -1 fields are translations in w; nothing to straighten")
    if -mu not in ws.deltas:
        raise ValueError(f"weight {mu} is not -delta_j for any j")
    if not tangency_residual(p, Q, ws).is_tangent:
        raise ValueError("Q is not tangent to {v + p < 0}")

    at0 = Q.value_at_origin()
    j0 = next((j for j in range(1, n + 1) if at0[j]), None)
    if j0 is None:
        raise ValueError("no z-component of Q has a nonzero constant coefficient")

    # relabel so the distinguished variable is z_1
    perm = list(range(1, n + 1))
    perm[0], perm[j0 - 1] = perm[j0 - 1], perm[0]
    perm = tuple(perm)
    p = _permute_poly(p, perm)
    Q = _permute_field(Q, perm)
    ws = WeightSystem.from_orders([ws.orders[i - 1] for i in perm])

    c0 = Q.value_at_origin()[1]
    field_scale = Fraction(1)
    coord_scale = ONE
    if c0.is_real:
        field_scale = 1 / c0.re
        Q = Q * field_scale
    else:
        # z_1 = c0 * z_1' makes the d/dz_1' coefficient equal to 1
        coord_scale = c0
        sub = {1: z(1, n) * c0}
        comps = [q.substitute(z=sub, n=n) for q in Q.q]
        comps[1] = comps[1] / c0
        Q = HoloVectorField(comps)
        p = weighted_substitution(p, sub, ws)

    # flow of Q from {z_1 = 0}, in increasing weight
    flow: dict[int, MixedPoly] = {1: z(1, n)}
    for j in sorted(range(2, n + 1), key=lambda j: (ws.delta(j), j)):
        integrand = Q.q[j].substitute(z=flow, n=n)
        flow[j] = z(j, n) + integrand.integrate_z(1)
    s0 = Q.q[0].substitute(z=flow, n=n)
    S = s0.integrate_z(1)

    checks: dict[str, bool] = {}
    checks["flow_pushforward"] = all(
        Q.q[j].substitute(z=flow, n=n) == flow[j].diff_z(1) for j in range(1, n + 1))

    change = dict(flow)
    p_tilde = weighted_substitution(p, {j: h for j, h in flow.items() if j != 1}, ws)
    p_hat = p_tilde + im_part(S)

    m_int = ws.orders[0]
    p1 = p_hat.restrict([1])
    c_prof = _axis_profile(p1, n)

    def linear_profiles(ph: MixedPoly):
        alphas, mks = {}, {}
        for k in range(2, n + 1):
            prof = _axis_profile(ph.diff_z(k).restrict([1]), n)
            if prof is None:
                alphas[k], mks[k] = None, None
            else:
                alphas[k], mks[k] = prof
        return alphas, mks

    alphas, mks = linear_profiles(p_hat)

    # remove z_k y_1^(m-1) terms for variables of the same weight as z_1
    c_val = c_prof[0] if c_prof else ZERO
    eliminate = {k: a for k, a in alphas.items()
                 if a and mks[k] == m_int - 1 and ws.delta(k) == ws.delta(1)}
    if eliminate and c_val:
        shift = z(1, n)
        for k, a in eliminate.items():
            beta = -2 * a / (c_val * m_int)
            shift = shift + z(k, n) * (I * beta)
        lin = {1: shift}
        change = {j: h.substitute(z=lin, n=n) for j, h in change.items()}
        S = S.substitute(z=lin, n=n)
        p_tilde = weighted_substitution(p_tilde, lin, ws)
        p_hat = p_tilde + im_part(S)
        p1 = p_hat.restrict([1])
        c_prof = _axis_profile(p1, n)
        alphas, mks = linear_profiles(p_hat)
    s0 = S.diff_z(1)

    field_new = HoloVectorField.d_dz(1, n)
    checks["independent_of_re_z1"] = (p_hat.diff_z(1) + p_hat.diff_zb(1)).is_zero()
    checks["field_tangent"] = tangency_residual(p_hat, field_new, ws).is_tangent
    checks["axis_profile"] = c_prof is not None and c_prof[1] in (m_int, None) and c_prof[0].is_real
    c = c_prof[0].re if c_prof and c_prof[0].is_real else Fraction(0)
    # p_tilde on the z_1-axis is c[(y_1)^m - 2 Re (z_1/2i)^m]
    expected_axis = (_y1_power(m_int, n) - re_part(_z1_over_2i(m_int, n)) * 2) * c
    checks["pulled_back_axis"] = p_tilde.restrict([1]) == expected_axis
    lin_ok = True
    bounds_ok = True
    for k in range(2, n + 1):
        a, mk = alphas[k], mks[k]
        if a is None:
            lin_ok = False
            continue
        if not a:
            continue
        expected = (_y1_power(mk, n) - _z1_over_2i(mk, n)) * a
        lin_ok &= p_tilde.diff_z(k).restrict([1]) == expected
        bounds_ok &= Fraction(m_int, 2) <= mk <= m_int - 2
    checks["linear_terms"] = lin_ok
    checks["m_k_bounds"] = bounds_ok
    checks["S_on_axis"] = S.restrict([1]) / GaussQ(0, 2) == _z1_over_2i(m_int, n) * c
    checks["s0_on_axis"] = s0.restrict([1]) == _z1_over_2i(m_int - 1, n) * (m_int * c)

    return StraighteningResult(
        weight=mu,
        permutation=perm,
        ws=ws,
        field_scale=field_scale,
        coordinate_scale=coord_scale,
        change=change,
        S=S,
        s0=s0,
        p_tilde=p_tilde,
        p_hat=p_hat,
        field=field_new,
        c=c,
        m=m_int,
        alphas={k: a for k, a in alphas.items()},
        m_k={k: mk for k, mk in mks.items()},
        checks=checks,
    )
