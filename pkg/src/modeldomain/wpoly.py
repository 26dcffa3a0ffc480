"""Weighted polynomials in ``(w, wb, u, z, zb)``.

A :class:`MixedPoly` is a finitely supported map from :class:`Monomial` to
:class:`~modeldomain.exactalg.GaussQ`.  Variable ``z_j`` carries weight
``1/(2 m_j)``; ``w``, ``wb`` and ``u`` carry weight 1.  Indices of ``z``
variables are 1-based throughout the public API.

Two variable contexts exist.  Ambient polynomials use ``w`` and ``wb``;
boundary polynomials use the real variable ``u`` instead (``w = u - i p`` on
the boundary graph), which turns "vanishes on the boundary" into "is the zero
polynomial".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .exactalg import ONE, ZERO, ExactMatrix, GaussQ, I, as_fraction, nullspace


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class WeightSystem:
    """Weights ``delta_j = 1/(2 m_j)`` for ``z_1..z_n``; ``w`` has weight 1.

    ``orders`` holds ``2 m_j``.  The ordinary constructor takes the integers
    ``m_j``; :meth:`from_orders` also accepts odd orders (``m_j`` a
    half-integer), which only arise from non-convex input.
    """

    orders: tuple

    def __init__(self, m: Sequence[int]):
        m = tuple(m)
        for x in m:
            if isinstance(x, bool) or not isinstance(x, int) or x <= 0:
                raise ValueError(f"weights need positive integers m_j, got {x!r}")
        object.__setattr__(self, "orders", tuple(2 * x for x in m))

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> WeightSystem:
        orders = tuple(orders)
        for x in orders:
            if isinstance(x, bool) or not isinstance(x, int) or x <= 0:
                raise ValueError(f"axis orders must be positive integers, got {x!r}")
        ws = cls.__new__(cls)
        object.__setattr__(ws, "orders", orders)
        return ws

    @property
    def n(self) -> int:
        return len(self.orders)

    @property
    def m(self) -> tuple:
        return tuple(o // 2 if o % 2 == 0 else Fraction(o, 2) for o in self.orders)

    @property
    def deltas(self) -> tuple:
        return tuple(Fraction(1, o) for o in self.orders)

    def delta(self, j: int) -> Fraction:
        """Weight of ``z_j``; ``j = 0`` is ``w``."""
        if j == 0:
            return Fraction(1)
        return Fraction(1, self.orders[j - 1])

    @property
    def scale(self) -> int:
        """Smallest ``s`` with ``s * delta_j`` integral for all j (``2M``)."""
        return reduce(_lcm, self.orders, 2)

    @property
    def M(self):
        s = self.scale
        return s // 2 if s % 2 == 0 else Fraction(s, 2)

    def __repr__(self):
        return f"WeightSystem(m={list(self.m)})"


class Monomial(NamedTuple):
    """Exponents of ``w^a wb^b u^c z^J zb^K``."""

    a: int = 0
    b: int = 0
    c: int = 0
    J: tuple = ()
    K: tuple = ()

    @property
    def degree(self) -> int:
        return self.a + self.b + self.c + sum(self.J) + sum(self.K)

    def conj(self) -> Monomial:
        return Monomial(self.b, self.a, self.c, self.K, self.J)

    def padded(self, n: int) -> Monomial:
        if len(self.J) == n and len(self.K) == n:
            return self
        return self._replace(J=_pad(self.J, n), K=_pad(self.K, n))

    def sort_key(self):
        # graded, then lexicographic with larger exponents first
        return (self.degree, tuple(-e for e in (self.a, self.b, self.c, *self.J, *self.K)))


def _pad(t: tuple, n: int) -> tuple:
    if len(t) > n:
        if any(t[n:]):
            raise ValueError("cannot shrink variable count below a used index")
        return t[:n]
    return t + (0,) * (n - len(t))


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return Monomial(m1.a + m2.a, m1.b + m2.b, m1.c + m2.c,
                    tuple(x + y for x, y in zip(m1.J, m2.J)),
                    tuple(x + y for x, y in zip(m1.K, m2.K)))


class MixedPoly:
    """Exact polynomial in ``w, wb, u, z_1..z_n, zb_1..zb_n``."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, n: int | None = None):
        terms = terms or {}
        if n is None:
            n = max((max(len(m.J), len(m.K)) for m in terms), default=0)
        clean: dict[Monomial, GaussQ] = {}
        for m, c in terms.items():
            c = GaussQ.coerce(c)
            if not c:
                continue
            m = Monomial(*m).padded(n)
            if min(m.a, m.b, m.c, *m.J, *m.K, 0) < 0:
                raise ValueError("negative exponent")
            if m.c and (m.a or m.b):
                raise ValueError("u cannot be mixed with w or wb in one monomial")
            clean[m] = clean.get(m, ZERO) + c
            if not clean[m]:
                del clean[m]
        self.n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, n: int) -> MixedPoly:
        p = cls.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, n: int = 0) -> MixedPoly:
        return cls._raw({}, n)

    @classmethod
    def const(cls, c, n: int = 0) -> MixedPoly:
        c = GaussQ.coerce(c)
        return cls._raw({Monomial(0, 0, 0, (0,) * n, (0,) * n): c} if c else {}, n)

    @classmethod
    def monomial(cls, a=0, b=0, c=0, J=(), K=(), coef=1, n: int | None = None) -> MixedPoly:
        return cls({Monomial(a, b, c, tuple(J), tuple(K)): coef}, n)

    # basic access ---------------------------------------------------------
    def terms(self) -> list[tuple[Monomial, GaussQ]]:
        """Terms in canonical graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: t[0].sort_key())

    def __iter__(self) -> Iterator[tuple[Monomial, GaussQ]]:
        return iter(self.terms())

    def __len__(self):
        return len(self._terms)

    def coeff(self, m: Monomial) -> GaussQ:
        return self._terms.get(Monomial(*m).padded(self.n), ZERO)

    @property
    def support(self) -> set:
        return set(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def context(self) -> str:
        return "boundary" if any(m.c for m in self._terms) else "ambient"

    def is_holomorphic(self) -> bool:
        """Only ``w`` and ``z`` appear."""
        return all(not m.b and not m.c and not any(m.K) for m in self._terms)

    def is_z_only(self) -> bool:
        """Only ``z`` and ``zb`` appear."""
        return all(not (m.a or m.b or m.c) for m in self._terms)

    def lift(self, n: int) -> MixedPoly:
        if n == self.n:
            return self
        return MixedPoly._raw({m.padded(n): c for m, c in self._terms.items()}, n)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> MixedPoly | None:
        if isinstance(other, MixedPoly):
            return other
        try:
            return MixedPoly.const(other, self.n)
        except TypeError:
            return None

    def _align(self, other: MixedPoly):
        n = max(self.n, other.n)
        return self.lift(n), other.lift(n), n

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, n = self._align(other)
        out = dict(a._terms)
        for m, c in b._terms.items():
            s = out.get(m, ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MixedPoly._raw(out, n)

    __radd__ = __add__

    def __neg__(self):
        return MixedPoly._raw({m: -c for m, c in self._terms.items()}, self.n)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> MixedPoly:
        c = GaussQ.coerce(c)
        if not c:
            return MixedPoly.zero(self.n)
        return MixedPoly._raw({m: v * c for m, v in self._terms.items()}, self.n)

    def __mul__(self, other):
        if not isinstance(other, MixedPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        a, b, n = self._align(other)
        out: dict[Monomial, GaussQ] = {}
        for m1, c1 in a._terms.items():
            for m2, c2 in b._terms.items():
                m = _mono_mul(m1, m2)
                if m.c and (m.a or m.b):
                    raise ValueError("product mixes ambient and boundary variables")
                s = out.get(m, ZERO) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MixedPoly._raw(out, n)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(ONE / GaussQ.coerce(c))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = MixedPoly.const(1, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self) -> MixedPoly:
        """Complex conjugate, treating ``u`` as real."""
        return MixedPoly._raw({m.conj(): c.conj() for m, c in self._terms.items()}, self.n)

    def __eq__(self, other):
        if not isinstance(other, MixedPoly):
            other = self._coerce(other)
            if other is None:
                return NotImplemented
        if self.n != other.n:
            a, b, _ = self._align(other)
            return a._terms == b._terms
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            # strip trailing unused variables so equal polys hash equally
            k = max((i + 1 for m in self._terms for i in range(self.n) if m.J[i] or m.K[i]), default=0)
            self._hash = hash(frozenset((m.padded(k), c) for m, c in self._terms.items()))
        return self._hash

    # calculus -------------------------------------------------------------
    def _diff(self, getter: Callable[[Monomial], int], setter: Callable[[Monomial], Monomial]) -> MixedPoly:
        out: dict[Monomial, GaussQ] = {}
        for m, c in self._terms.items():
            e = getter(m)
            if e:
                nm = setter(m)
                out[nm] = out.get(nm, ZERO) + c * e
        return MixedPoly._raw({m: c for m, c in out.items() if c}, self.n)

    def diff_z(self, j: int) -> MixedPoly:
        k = j - 1
        if not 0 <= k < self.n:
            return MixedPoly.zero(self.n)
        return self._diff(lambda m: m.J[k], lambda m: m._replace(J=m.J[:k] + (m.J[k] - 1,) + m.J[k + 1:]))

    def diff_zb(self, j: int) -> MixedPoly:
        k = j - 1
        if not 0 <= k < self.n:
            return MixedPoly.zero(self.n)
        return self._diff(lambda m: m.K[k], lambda m: m._replace(K=m.K[:k] + (m.K[k] - 1,) + m.K[k + 1:]))

    def diff_w(self) -> MixedPoly:
        return self._diff(lambda m: m.a, lambda m: m._replace(a=m.a - 1))

    def diff_wb(self) -> MixedPoly:
        return self._diff(lambda m: m.b, lambda m: m._replace(b=m.b - 1))

    def diff_u(self) -> MixedPoly:
        return self._diff(lambda m: m.c, lambda m: m._replace(c=m.c - 1))

    def diff(self, j: int) -> MixedPoly:
        """Holomorphic derivative in ``z_j``; ``j = 0`` means ``w``."""
        return self.diff_w() if j == 0 else self.diff_z(j)

    def integrate_z(self, j: int) -> MixedPoly:
        """Antiderivative in ``z_j`` vanishing on ``{z_j = 0}``."""
        k = j - 1
        out = {}
        for m, c in self._terms.items():
            e = m.J[k]
            out[m._replace(J=m.J[:k] + (e + 1,) + m.J[k + 1:])] = c * Fraction(1, e + 1)
        return MixedPoly._raw(out, self.n)

    # substitution ---------------------------------------------------------
    def substitute(self, *, z: Mapping[int, MixedPoly] | None = None,
                   zb: Mapping[int, MixedPoly] | None = None,
                   w: MixedPoly | None = None, wb: MixedPoly | None = None,
                   u: MixedPoly | None = None, n: int | None = None) -> MixedPoly:
        """Replace variables by polynomials; unlisted variables stay put.

        ``z`` and ``zb`` are keyed by 1-based index.  ``n`` is the variable
        count of the result (defaults to the largest among inputs).
        """
        z = dict(z or {})
        zb = dict(zb or {})
        subs = [x for x in (w, wb, u, *z.values(), *zb.values()) if x is not None]
        if n is None:
            n = max([self.n] + [s.n for s in subs])
        unit = MixedPoly.const(1, n)

        def var_poly(kind: str, j: int = 0) -> MixedPoly:
            if kind == "w":
                return w.lift(n) if w is not None else MixedPoly.monomial(a=1, n=n)
            if kind == "wb":
                return wb.lift(n) if wb is not None else MixedPoly.monomial(b=1, n=n)
            if kind == "u":
                return u.lift(n) if u is not None else MixedPoly.monomial(c=1, n=n)
            e = tuple(1 if i == j - 1 else 0 for i in range(n))
            if kind == "z":
                return z[j].lift(n) if j in z else MixedPoly.monomial(J=e, n=n)
            return zb[j].lift(n) if j in zb else MixedPoly.monomial(K=e, n=n)

        cache: dict[tuple, MixedPoly] = {}

        def power(kind: str, j: int, e: int) -> MixedPoly:
            if e == 0:
                return unit
            key = (kind, j, e)
            if key not in cache:
                if e == 1:
                    cache[key] = var_poly(kind, j)
                else:
                    cache[key] = power(kind, j, e - 1) * var_poly(kind, j)
            return cache[key]

        total: dict[Monomial, GaussQ] = {}
        for m, c in self._terms.items():
            factors = [power("w", 0, m.a), power("wb", 0, m.b), power("u", 0, m.c)]
            factors += [power("z", i + 1, e) for i, e in enumerate(m.J) if e]
            factors += [power("zb", i + 1, e) for i, e in enumerate(m.K) if e]
            prod = MixedPoly.const(c, n)
            for f in factors:
                if f is not unit:
                    prod = prod * f
            for mm, cc in prod._terms.items():
                s = total.get(mm, ZERO) + cc
                if s:
                    total[mm] = s
                else:
                    total.pop(mm, None)
        return MixedPoly._raw(total, n)

    def restrict(self, keep: Iterable[int]) -> MixedPoly:
        """Set every ``z_j`` (and ``zb_j``) with ``j`` not in ``keep`` to 0."""
        keep = {j - 1 for j in keep}
        out = {m: c for m, c in self._terms.items()
               if all(i in keep or (not m.J[i] and not m.K[i]) for i in range(self.n))}
        return MixedPoly._raw(out, self.n)

    def evaluate(self, z: Sequence = (), w=0, u=0, convert: Callable[[GaussQ], object] = complex):
        """Numeric value; ``convert`` maps coefficients into the number type."""
        zb = [x.conjugate() for x in z]
        wb = w.conjugate() if hasattr(w, "conjugate") else w
        total = 0
        for m, c in self._terms.items():
            v = convert(c)
            if m.a:
                v = v * w ** m.a
            if m.b:
                v = v * wb ** m.b
            if m.c:
                v = v * u ** m.c
            for i, e in enumerate(m.J):
                if e:
                    v = v * z[i] ** e
            for i, e in enumerate(m.K):
                if e:
                    v = v * zb[i] ** e
            total = total + v
        return total

    # display --------------------------------------------------------------
    def __str__(self):
        from .dsl import format_poly
        return format_poly(self)

    def __repr__(self):
        return f"MixedPoly({str(self)!r})"


# ---------------------------------------------------------------------------
# handy variable constructors (1-based z indices)


def z(j: int, n: int | None = None) -> MixedPoly:
    n = j if n is None else n
    return MixedPoly.monomial(J=tuple(1 if i == j - 1 else 0 for i in range(n)), n=n)


def zb(j: int, n: int | None = None) -> MixedPoly:
    n = j if n is None else n
    return MixedPoly.monomial(K=tuple(1 if i == j - 1 else 0 for i in range(n)), n=n)


def w(n: int = 0) -> MixedPoly:
    return MixedPoly.monomial(a=1, n=n)


def wb(n: int = 0) -> MixedPoly:
    return MixedPoly.monomial(b=1, n=n)


def u(n: int = 0) -> MixedPoly:
    return MixedPoly.monomial(c=1, n=n)


def re_part(p: MixedPoly) -> MixedPoly:
    return (p + p.conj()) * Fraction(1, 2)


def im_part(p: MixedPoly) -> MixedPoly:
    return (p - p.conj()) * GaussQ(0, Fraction(-1, 2))


# ---------------------------------------------------------------------------
# grading


def monomial_weight(mono: Monomial, ws: WeightSystem) -> Fraction:
    mono = Monomial(*mono).padded(ws.n)
    d = ws.deltas
    return (mono.a + mono.b + mono.c
            + sum((j * dj for j, dj in zip(mono.J, d)), Fraction(0))
            + sum((k * dk for k, dk in zip(mono.K, d)), Fraction(0)))


def signature_of(mono: Monomial, ws: WeightSystem) -> Fraction:
    """``wt(J) - wt(K)`` for a monomial in ``z, zb`` only."""
    mono = Monomial(*mono).padded(ws.n)
    if mono.a or mono.b or mono.c:
        raise ValueError("signature is defined for monomials in z and zb only")
    d = ws.deltas
    return sum(((j - k) * dj for j, k, dj in zip(mono.J, mono.K, d)), Fraction(0))


def _check_n(p: MixedPoly, ws: WeightSystem) -> MixedPoly:
    if p.n > ws.n:
        k = max((i + 1 for m, _ in p for i in range(p.n) if m.J[i] or m.K[i]), default=0)
        if k > ws.n:
            raise ValueError(f"polynomial uses z_{k} but the weight system has {ws.n} variables")
    return p.lift(ws.n)


def weight_graded_parts(f: MixedPoly, ws: WeightSystem) -> dict[Fraction, MixedPoly]:
    f = _check_n(f, ws)
    parts: dict[Fraction, dict] = {}
    for m, c in f._terms.items():
        parts.setdefault(monomial_weight(m, ws), {})[m] = c
    return {k: MixedPoly._raw(parts[k], ws.n) for k in sorted(parts)}


def is_weighted_homogeneous(f: MixedPoly, ws: WeightSystem, weight=None) -> bool:
    parts = weight_graded_parts(f, ws)
    if not parts:
        return True
    if len(parts) > 1:
        return False
    return weight is None or next(iter(parts)) == as_fraction(weight)


def check_reality(p: MixedPoly) -> bool:
    return p == p.conj()


def check_no_pure_terms(p: MixedPoly) -> bool:
    """No holomorphic (``K = 0``) or antiholomorphic (``J = 0``) monomials.

    A constant term counts as pure.
    """
    if not p.is_z_only():
        raise ValueError("expected a polynomial in z and zb only")
    return all(any(m.J) and any(m.K) for m in p.support)


@dataclass(frozen=True)
class SignatureDecomposition:
    parts: dict  # signature -> MixedPoly, ascending

    @property
    def signatures(self) -> list[Fraction]:
        return list(self.parts)

    def part(self, nu) -> MixedPoly:
        nu = as_fraction(nu)
        if nu in self.parts:
            return self.parts[nu]
        n = next(iter(self.parts.values())).n if self.parts else 0
        return MixedPoly.zero(n)

    def reconstruct(self) -> MixedPoly:
        return sum(self.parts.values(), MixedPoly.zero())

    @property
    def is_balanced(self) -> bool:
        return all(nu == 0 for nu in self.parts)


def _split_by_signature(p: MixedPoly, ws: WeightSystem) -> dict[Fraction, MixedPoly]:
    p = _check_n(p, ws)
    parts: dict[Fraction, dict] = {}
    for m, c in p._terms.items():
        parts.setdefault(signature_of(m, ws), {})[m] = c
    return {k: MixedPoly._raw(parts[k], ws.n) for k in sorted(parts)}


def signature_decompose(p: MixedPoly, ws: WeightSystem) -> SignatureDecomposition:
    if not p.is_z_only():
        raise ValueError("signature decomposition needs a polynomial in z and zb only")
    if not check_reality(p):
        raise ValueError("signature decomposition needs a real polynomial")
    return SignatureDecomposition(_split_by_signature(p, ws))


def balanced_part(p: MixedPoly, ws: WeightSystem) -> MixedPoly:
    return signature_decompose(p, ws).part(0).lift(ws.n)


def extract_coefficient_functions(part: MixedPoly, ws: WeightSystem | None = None) -> dict[tuple, MixedPoly]:
    """Group ``sum_B f_B(z) zb^B``; returns ``{B: f_B}`` with ``B`` ascending."""
    if not part.is_z_only():
        raise ValueError("expected a polynomial in z and zb only")
    n = part.n if ws is None else max(part.n, ws.n)
    part = part.lift(n)
    groups: dict[tuple, dict] = {}
    zero = (0,) * n
    for m, c in part._terms.items():
        groups.setdefault(m.K, {})[Monomial(0, 0, 0, m.J, zero)] = c
    return {B: MixedPoly._raw(groups[B], n) for B in sorted(groups)}


# ---------------------------------------------------------------------------
# substitutions


def substitute_boundary(q: MixedPoly, p: MixedPoly, ws: WeightSystem | None = None) -> MixedPoly:
    """Restrict ``q(w, wb, z, zb)`` to the graph ``w = u - i p(z, zb)``."""
    if not p.is_z_only():
        raise ValueError("the defining polynomial must depend on z and zb only")
    n = max(q.n, p.n, ws.n if ws else 0)
    p = p.lift(n)
    uu = u(n)
    return q.lift(n).substitute(w=uu - p.scale(I), wb=uu + p.scale(I), n=n)


def _holomorphic_z(h: MixedPoly) -> bool:
    return h.is_z_only() and h.is_holomorphic()


def check_weighted_change(subs: Mapping[int, MixedPoly], ws: WeightSystem) -> None:
    """Raise unless ``z_j -> subs[j]`` is an invertible weighted change.

    Each substitute must be holomorphic in ``z`` and homogeneous of weight
    ``delta_j``.  Such a map is triangular with respect to weight: linear
    terms only involve variables of equal weight, nonlinear terms only
    variables of strictly smaller weight.  It is invertible exactly when
    every equal-weight linear block is nonsingular.
    """
    n = ws.n
    full = {j: subs.get(j, z(j, n)).lift(n) for j in range(1, n + 1)}
    extra = set(subs) - set(full)
    if extra:
        raise ValueError(f"substitution for unknown variables {sorted(extra)}")
    for j, h in full.items():
        if not _holomorphic_z(h):
            raise ValueError(f"substitute for z_{j} must be holomorphic in z")
        if h.is_zero() or not is_weighted_homogeneous(h, ws, ws.delta(j)):
            raise ValueError(f"substitute for z_{j} must be weighted homogeneous of weight {ws.delta(j)}")
    classes: dict[Fraction, list[int]] = {}
    for j in range(1, n + 1):
        classes.setdefault(ws.delta(j), []).append(j)
    for members in classes.values():
        rows = []
        for j in members:
            h = full[j]
            rows.append([h.coeff(Monomial(J=tuple(1 if i == k - 1 else 0 for i in range(n)), K=(0,) * n))
                         for k in members])
        if nullspace(ExactMatrix.from_rows(rows, len(members), "complex")):
            raise ValueError(f"substitution is not invertible on variables {members}")


def weighted_substitution(p: MixedPoly, subs: Mapping[int, MixedPoly], ws: WeightSystem) -> MixedPoly:
    """``r(zt) = p(z(zt))`` where ``z_j = subs[j](zt)`` (identity if absent)."""
    check_weighted_change(subs, ws)
    n = ws.n
    zs = {j: h.lift(n) for j, h in subs.items()}
    zbs = {j: h.conj() for j, h in zs.items()}
    return _check_n(p, ws).substitute(z=zs, zb=zbs, n=n)


def _exact_positive(r) -> Fraction:
    if isinstance(r, float):
        raise TypeError("dilation parameter must be exact (int or Fraction), not float")
    r = as_fraction(r)
    if r <= 0:
        raise ValueError("dilation parameter must be positive")
    return r


def dilate(p: MixedPoly, r, ws: WeightSystem) -> MixedPoly:
    """Apply ``z_j -> t^delta_j z_j``, ``w -> t w`` with ``t = r^(2M)``.

    ``r`` is a positive rational, so every ``t^delta_j`` is the exact power
    ``r^(2M delta_j)``.
    """
    r = _exact_positive(r)
    s = ws.scale
    p = _check_n(p, ws)
    out = {}
    for m, c in p._terms.items():
        e = monomial_weight(m, ws) * s
        assert e.denominator == 1
        out[m] = c * r ** int(e)
    return MixedPoly._raw(out, p.n)


def exponents_of_weight(weights: Sequence[Fraction], target: Fraction) -> list[tuple]:
    """All exponent vectors ``e >= 0`` with ``sum e_i weights_i == target``."""
    target = as_fraction(target)
    out: list[tuple] = []
    if target < 0:
        return out

    def rec(i: int, remaining: Fraction, acc: list):
        if i == len(weights):
            if remaining == 0:
                out.append(tuple(acc))
            return
        wi = weights[i]
        e = 0
        while e * wi <= remaining:
            acc.append(e)
            rec(i + 1, remaining - e * wi, acc)
            acc.pop()
            e += 1

    rec(0, target, [])
    return sorted(out, key=lambda t: (sum(t), tuple(-x for x in t)))
