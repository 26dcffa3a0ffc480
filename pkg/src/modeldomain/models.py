"""Model domains, the Cayley-type transform and weight assignment.

Numeric work uses a private mpmath context at 50 significant digits; exact
work stays in :mod:`modeldomain.wpoly`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .exactalg import GaussQ, as_fraction
from .wpoly import (
    MixedPoly,
    Monomial,
    WeightSystem,
    check_reality,
    monomial_weight,
    signature_decompose,
    weight_graded_parts,
)

MP = mpmath.MPContext()
MP.dps = 50


class SingularPointError(ValueError):
    """The transform is undefined at ``1 + i w*/4 = 0``."""


def mpq(x):
    x = as_fraction(x)
    return MP.mpf(x.numerator) / x.denominator


def to_mp(c: GaussQ):
    return MP.mpc(mpq(c.re), mpq(c.im))


def mp_complex(x):
    if isinstance(x, GaussQ):
        return to_mp(x)
    if isinstance(x, Fraction):
        return MP.mpc(mpq(x))
    return MP.mpc(x)


def evaluate(p: MixedPoly, z: Sequence, w=0):
    """High-precision value of ``p`` at ``(w, z)``."""
    return p.evaluate([mp_complex(x) for x in z], w=mp_complex(w), convert=to_mp)


@dataclass(frozen=True)
class NumericPoint:
    w: object
    z: tuple

    def __post_init__(self):
        object.__setattr__(self, "w", mp_complex(self.w))
        object.__setattr__(self, "z", tuple(mp_complex(x) for x in self.z))
        if not all(MP.isfinite(x) for x in (self.w, *self.z)):
            raise ValueError("point has a non-finite component")


@dataclass(frozen=True)
class DomainModel:
    """``kind`` is ``"bounded"`` (``|w|^2 + p < bound``), ``"unbounded"``
    (``Im w + p < bound``) or ``"homogeneous"`` (``Im w + p < 0``)."""

    kind: str
    p: MixedPoly
    ws: WeightSystem
    bound: Fraction | None = None

    def __post_init__(self):
        if self.kind not in ("bounded", "unbounded", "homogeneous"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if not (self.p.is_z_only() and check_reality(self.p)):
            raise ValueError("domain polynomial must be real in z, zb")
        if self.kind == "homogeneous":
            parts = weight_graded_parts(self.p, self.ws)
            if parts and list(parts) != [Fraction(1)]:
                raise ValueError("homogeneous model needs p of weight 1")
        if self.bound is None:
            object.__setattr__(self, "bound", Fraction(1) if self.kind == "bounded" else Fraction(0))
        else:
            object.__setattr__(self, "bound", as_fraction(self.bound))
        if self.kind == "homogeneous" and self.bound != 0:
            raise ValueError("the homogeneous model has bound 0")

    def defining_value(self, pt: NumericPoint):
        """Defining function minus the bound; negative inside the domain."""
        pv = MP.re(evaluate(self.p, pt.z))
        if self.kind == "bounded":
            head = abs(pt.w) ** 2
        else:
            head = MP.im(pt.w)
        return head + pv - mpq(self.bound)

    def contains(self, pt: NumericPoint) -> bool:
        return self.defining_value(pt) < 0


# ---------------------------------------------------------------------------
# Cayley-type transform


def _cayley_base(wstar):
    base = 1 + 1j * wstar / 4
    if base == 0:
        raise SingularPointError("1 + i w*/4 vanishes")
    return base


def cayley_forward(q: NumericPoint, ws: WeightSystem) -> NumericPoint:
    """Unbounded coordinates ``(w*, z*)`` to bounded coordinates ``(w, z)``.

    Fractional powers use the principal branch.
    """
    base = _cayley_base(q.w)
    w = (1 - 1j * q.w / 4) / base
    zs = tuple(zj * MP.power(base, -2 * mpq(ws.delta(j + 1))) for j, zj in enumerate(q.z))
    return NumericPoint(w, zs)


def cayley_inverse(pt: NumericPoint, ws: WeightSystem) -> NumericPoint:
    if 1 + pt.w == 0:
        raise SingularPointError("w = -1 has no preimage")
    a = (1 - pt.w) / (1 + pt.w)  # i w*/4
    wstar = -4j * a
    base = 1 + a
    zs = tuple(zj * MP.power(base, 2 * mpq(ws.delta(j + 1))) for j, zj in enumerate(pt.z))
    return NumericPoint(wstar, zs)


def cayley_identity_residual(q: NumericPoint, p: MixedPoly, ws: WeightSystem):
    """``|w|^2 + p(z) - 1 - (Im w* + p(z*)) |1 + i w*/4|^-2`` at the image of ``q``."""
    base = _cayley_base(q.w)
    img = cayley_forward(q, ws)
    lhs = abs(img.w) ** 2 + MP.re(evaluate(p, img.z)) - 1
    rhs = (MP.im(q.w) + MP.re(evaluate(p, q.z))) / abs(base) ** 2
    return lhs - rhs


def t2_invariance_check(dm: DomainModel) -> bool:
    """Invariance of ``|w|^2 + p`` under ``(e^{i phi} w, e^{i delta_j theta} z_j)``."""
    if dm.kind != "bounded":
        raise ValueError("torus invariance is checked on the bounded model")
    return signature_decompose(dm.p, dm.ws).is_balanced


# ---------------------------------------------------------------------------
# scaling and weight assignment


def _check_exact_r(r) -> Fraction:
    if isinstance(r, float):
        raise TypeError("scaling parameter must be exact (int or Fraction)")
    r = as_fraction(r)
    if r <= 0:
        raise ValueError("scaling parameter must be positive")
    return r


def rescale_exponents(f: MixedPoly, mu, ws: WeightSystem) -> dict[Monomial, Fraction]:
    """Power of ``t`` multiplying each term of ``t^-mu f(t^delta z)``."""
    mu = as_fraction(mu)
    if not f.is_z_only():
        raise ValueError("rescaling acts on polynomials in z and zb")
    return {m: monomial_weight(m, ws) - mu for m, _ in f.lift(ws.n)}


def chi_t_rescale(f: MixedPoly, r, mu, ws: WeightSystem) -> MixedPoly:
    """``t^-mu f(t^delta_1 z_1, ..., t^delta_n z_n)`` with ``t = r^(2M)``."""
    r = _check_exact_r(r)
    s = ws.scale
    out = {}
    for m, e in rescale_exponents(f, mu, ws).items():
        k = e * s
        if k.denominator != 1:
            raise ValueError(f"t^{e} is not an exact power of r for this weight system")
        out[m] = f.lift(ws.n).coeff(m) * r ** int(k)
    return MixedPoly(out, ws.n)


@dataclass(frozen=True)
class WeightAssignmentReport:
    m: tuple | None
    deltas: tuple | None
    p: MixedPoly
    admissible: bool
    witness: Monomial | None = None
    witness_weight: Fraction | None = None
    axis_orders: tuple = ()
    message: str = ""
    warnings: tuple = ()


def _check_defining_f(f: MixedPoly):
    if not f.is_z_only():
        raise ValueError("expected a polynomial in z and zb only")
    if not check_reality(f):
        raise ValueError("f must be real")
    zero = Monomial(0, 0, 0, (0,) * f.n, (0,) * f.n)
    if f.coeff(zero):
        raise ValueError("f must vanish at the origin")
    if any(m.degree == 1 for m in f.support):
        raise ValueError("f must have no linear terms")


def homogeneous_model_extract(f: MixedPoly, ws: WeightSystem) -> WeightAssignmentReport:
    _check_defining_f(f)
    parts = weight_graded_parts(f, ws)
    p = parts.get(Fraction(1), MixedPoly.zero(ws.n))
    low = [(wt, part) for wt, part in parts.items() if wt < 1]
    common = dict(m=ws.m, deltas=ws.deltas, p=p)
    if low:
        wt, part = low[0]
        mono = part.terms()[0][0]
        return WeightAssignmentReport(**common, admissible=False, witness=mono, witness_weight=wt,
                                      message=f"term of weight {wt} < 1")
    if p.is_zero():
        return WeightAssignmentReport(**common, admissible=False,
                                      message="no admissible weight-1 part")
    return WeightAssignmentReport(**common, admissible=True, message="admissible")


def order_along_direction(f: MixedPoly, T: Sequence):
    """Lowest total degree of ``zeta -> f(zeta T)``; ``math.inf`` if it vanishes."""
    T = [GaussQ.coerce(t) for t in T]
    if not any(T):
        raise ValueError("direction must be nonzero")
    if not f.is_z_only():
        raise ValueError("expected a polynomial in z and zb only")
    n = max(f.n, len(T))
    T = T + [GaussQ(0)] * (n - len(T))
    Tb = [t.conj() for t in T]
    acc: dict[tuple, GaussQ] = {}
    for m, c in f.lift(n):
        v = c
        for t, e in zip(T, m.J):
            if e:
                v = v * t ** e
        for t, e in zip(Tb, m.K):
            if e:
                v = v * t ** e
        key = (sum(m.J), sum(m.K))
        acc[key] = acc.get(key, GaussQ(0)) + v
    degrees = [a + b for (a, b), v in acc.items() if v]
    return min(degrees) if degrees else math.inf


def assign_weights_adapted(f: MixedPoly) -> WeightAssignmentReport:
    """Give ``z_s`` weight ``1/(order of f along the s-th axis)``.

    Coordinates are assumed adapted: the caller asserts the subspaces of
    equal contact order are spanned by coordinate axes.
    """
    _check_defining_f(f)
    n = f.n
    orders = []
    for s in range(n):
        e = [0] * n
        e[s] = 1
        orders.append(order_along_direction(f, e))
    if any(o == math.inf for o in orders):
        bad = [s + 1 for s, o in enumerate(orders) if o == math.inf]
        return WeightAssignmentReport(None, None, MixedPoly.zero(n), False,
                                      axis_orders=tuple(orders),
                                      message=f"infinite order along axis {bad}")
    warnings = tuple(f"odd order {o} along axis {s + 1}: f is not convex" for s, o in enumerate(orders) if o % 2)
    ws = WeightSystem.from_orders(orders)
    rep = homogeneous_model_extract(f, ws)
    return WeightAssignmentReport(rep.m, rep.deltas, rep.p, rep.admissible, rep.witness,
                                  rep.witness_weight, tuple(orders), rep.message, warnings)


# ---------------------------------------------------------------------------
# zero-set diagnostics


@dataclass(frozen=True)
class ZeroSetReport:
    positivity: str  # "supported" | "refuted" | "inconclusive"
    min_value: object
    witness: tuple | None
    axis: str  # "supported" | "refuted"
    vanishing_axes: tuple = ()
    samples: int = 0
    tolerance: float = 1e-8


def weighted_sphere_point(rng: random.Random, ws: WeightSystem) -> tuple:
    """Random point with ``sum |z_j|^(2 m_j) = 1``."""
    v = [MP.mpc(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(ws.n)]
    rho = sum(abs(x) ** o for x, o in zip(v, ws.orders))
    return tuple(x * rho ** (-mpq(d)) for x, d in zip(v, ws.deltas))


def zero_set_checks(p: MixedPoly, ws: WeightSystem, samples: int = 2000, seed: int = 0,
                    tolerance: float = 1e-8) -> ZeroSetReport:
    """Sampled positivity off the origin, and exact coordinate-axis vanishing.

    Neither check decides whether ``{p = 0}`` contains a complex curve; the
    first supports that it does not, the second can refute it.
    """
    if not (p.is_z_only() and check_reality(p)):
        raise ValueError("p must be real in z, zb")
    parts = weight_graded_parts(p, ws)
    if parts and list(parts) != [Fraction(1)]:
        raise ValueError("p must be weighted homogeneous of weight 1")
    rng = random.Random(seed)
    lowest = None
    witness = None
    for _ in range(samples):
        pt = weighted_sphere_point(rng, ws)
        v = MP.re(evaluate(p, pt))
        if lowest is None or v < lowest:
            lowest, witness = v, pt
    if lowest is None:
        positivity = "inconclusive"
    elif lowest > tolerance:
        positivity = "supported"
    elif lowest < -tolerance:
        positivity = "refuted"
    else:
        positivity = "inconclusive"
    vanishing = tuple(j for j in range(1, ws.n + 1) if p.lift(ws.n).restrict([j]).is_zero())
    return ZeroSetReport(positivity, lowest, witness, "refuted" if vanishing else "supported",
                         vanishing, samples, tolerance)
