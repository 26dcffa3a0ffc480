"""Exact Gaussian-rational scalars and dense exact linear algebra.

Rationals are plain :class:`fractions.Fraction`; :class:`GaussQ` pairs two of
them into an element of Q(i).  The only linear-algebra primitive the rest of
the package needs is an exact kernel computation, plus a helper that turns
real-linear constraints on complex unknowns into a real matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction, "GaussQ"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussQ:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussQ):
            if im:
                raise TypeError("GaussQ real part must be rational")
            re, im = re.re, re.im
        object.__setattr__(self, "re", as_fraction(re))
        object.__setattr__(self, "im", as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussQ is immutable")

    @classmethod
    def coerce(cls, x) -> GaussQ:
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(x)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ(self.re + other.re, self.im + other.im)
        try:
            o = as_fraction(other)
        except TypeError:
            return NotImplemented
        return GaussQ(self.re + o, self.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, GaussQ):
            return GaussQ(self.re - other.re, self.im - other.im)
        try:
            o = as_fraction(other)
        except TypeError:
            return NotImplemented
        return GaussQ(self.re - o, self.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussQ):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussQ(a * c, 0)
            return GaussQ(a * c - b * d, a * d + b * c)
        try:
            o = as_fraction(other)
        except TypeError:
            return NotImplemented
        return GaussQ(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussQ.coerce(other)
        n = other.abs2()
        if not n:
            raise ZeroDivisionError("division by zero GaussQ")
        return self * GaussQ(other.re / n, -other.im / n)

    def __rtruediv__(self, other):
        return GaussQ.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
        if k < 0:
            return GaussQ(1) / (self ** -k)
        result = GaussQ(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> GaussQ:
        return GaussQ(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussQ({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        return format_gaussq(self)


I = GaussQ(0, 1)
ZERO = GaussQ(0)
ONE = GaussQ(1)


def format_gaussq(x: GaussQ) -> str:
    """Render as ``3/4``, ``-2i``, ``1/3i`` or ``(1/2-1/3i)``."""
    if not x.im:
        return str(x.re)
    if not x.re:
        if x.im == 1:
            return "i"
        if x.im == -1:
            return "-i"
        return f"{x.im}i"
    sign = "+" if x.im > 0 else "-"
    mag = abs(x.im)
    im = "i" if mag == 1 else f"{mag}i"
    return f"({x.re}{sign}{im})"


# ---------------------------------------------------------------------------
# matrices and kernels


@dataclass(frozen=True)
class ExactMatrix:
    """Dense exact matrix; ``mode`` is ``"real"`` (Fraction) or ``"complex"`` (GaussQ)."""

    rows: tuple
    cols: int
    mode: str = "real"

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], cols: int | None = None, mode: str | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count needed for an empty matrix")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        if mode is None:
            mode = "real"
            for r in rows:
                for x in r:
                    if isinstance(x, GaussQ) and x.im:
                        mode = "complex"
                        break
        if mode == "real":
            conv = []
            for r in rows:
                out = []
                for x in r:
                    if isinstance(x, GaussQ):
                        if x.im:
                            raise ValueError("complex entry in a real-mode matrix")
                        x = x.re
                    out.append(as_fraction(x))
                conv.append(tuple(out))
        elif mode == "complex":
            conv = [tuple(GaussQ.coerce(x) for x in r) for r in rows]
        else:
            raise ValueError(f"unknown matrix mode {mode!r}")
        return cls(tuple(conv), cols, mode)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def apply(self, v: Sequence) -> list:
        return [sum((a * x for a, x in zip(r, v)), start=Fraction(0) if self.mode == "real" else ZERO)
                for r in self.rows]

    def rank(self) -> int:
        return len(_echelon(self)[1])


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = reduce(_lcm, (x.denominator for x in row), 1)
    return [int(x * den) for x in row]


def _primitive(row: list[int]) -> list[int]:
    g = reduce(gcd, row, 0)
    if g > 1:
        return [x // g for x in row]
    return row


def _echelon(M: ExactMatrix):
    """Reduced echelon form; returns (rows, pivot columns).

    Real mode is fraction-free: rows are cleared to integers and each
    elimination step is ``row <- p*row - a*pivot_row`` followed by division by
    the row content.  Complex mode divides in Q(i).  Pivots are always the
    first nonzero entry in column order, top to bottom, so the output is
    reproducible.
    """
    if M.mode == "real":
        A = [_primitive(_integer_row(r)) for r in M.rows]
    else:
        A = [list(r) for r in M.rows]
    pivots: list[int] = []
    prow = 0
    for col in range(M.cols):
        if prow >= len(A):
            break
        sel = next((r for r in range(prow, len(A)) if A[r][col]), None)
        if sel is None:
            continue
        A[prow], A[sel] = A[sel], A[prow]
        P = A[prow]
        if M.mode == "real":
            p = P[col]
            for r in range(len(A)):
                if r != prow and A[r][col]:
                    a = A[r][col]
                    A[r] = _primitive([p * x - a * y for x, y in zip(A[r], P)])
        else:
            inv = ONE / P[col]
            P = [x * inv for x in P]
            A[prow] = P
            for r in range(len(A)):
                if r != prow and A[r][col]:
                    a = A[r][col]
                    A[r] = [x - a * y for x, y in zip(A[r], P)]
        pivots.append(col)
        prow += 1
    return A[:prow], pivots


def nullspace(M: ExactMatrix | Sequence[Sequence], cols: int | None = None) -> list[list]:
    """Exact kernel basis of ``M``.

    Each vector has a 1 in one free column and 0 in the others, so the basis
    is the canonical one attached to the reduced echelon form.
    """
    if not isinstance(M, ExactMatrix):
        M = ExactMatrix.from_rows(M, cols)
    rows, pivots = _echelon(M)
    zero = Fraction(0) if M.mode == "real" else ZERO
    one = Fraction(1) if M.mode == "real" else ONE
    pivset = set(pivots)
    free = [c for c in range(M.cols) if c not in pivset]
    basis = []
    for f in free:
        v = [zero] * M.cols
        v[f] = one
        for row, pc in zip(rows, pivots):
            if row[f]:
                if M.mode == "real":
                    v[pc] = Fraction(-row[f], row[pc])
                else:
                    v[pc] = -row[f] / row[pc]
        basis.append(v)
    assert len(pivots) + len(basis) == M.cols
    return basis


def row_reduce(vectors: Sequence[Sequence], cols: int | None = None, mode: str | None = None) -> list[list]:
    """Canonical basis (reduced echelon rows, leading entry 1) of a span."""
    if not vectors:
        return []
    M = ExactMatrix.from_rows(vectors, cols, mode)
    rows, pivots = _echelon(M)
    out = []
    for row, pc in zip(rows, pivots):
        if M.mode == "real":
            lead = row[pc]
            out.append([Fraction(x, lead) for x in row])
        else:
            out.append(list(row))
    return out


# ---------------------------------------------------------------------------
# real linearization of constraints on complex unknowns


@dataclass(frozen=True)
class LinearConstraint:
    """``sum a_k x_k + sum b_k conj(x_k)`` required to vanish.

    ``kind`` selects what must vanish: ``"zero"`` (the complex value),
    ``"re"`` (its real part) or ``"im"`` (its imaginary part).
    """

    coeffs: Mapping[int, GaussQ] = field(default_factory=dict)
    conj_coeffs: Mapping[int, GaussQ] = field(default_factory=dict)
    kind: str = "zero"

    @classmethod
    def from_terms(cls, terms: Mapping[tuple, Scalar], kind: str = "zero") -> LinearConstraint:
        """Build from ``{factors: coefficient}`` where ``factors`` is a tuple of
        ``(unknown_index, conjugated)`` pairs.  Anything but single-factor keys
        is rejected."""
        coeffs: dict[int, GaussQ] = {}
        conj: dict[int, GaussQ] = {}
        for key, c in terms.items():
            c = GaussQ.coerce(c)
            if not c:
                continue
            if len(key) == 0:
                raise ValueError("constant term: constraint is affine, not linear")
            if len(key) > 1:
                raise ValueError(f"nonlinear term {key!r} in constraint")
            (k, conjugated), = key
            target = conj if conjugated else coeffs
            target[k] = target.get(k, ZERO) + c
        return cls(coeffs, conj, kind)


def real_linearize(constraints: Iterable[LinearConstraint], n_unknowns: int) -> ExactMatrix:
    """Real matrix whose kernel, read as ``(re x_0, im x_0, re x_1, ...)``, is
    the solution set of ``constraints``."""
    rows = []
    for con in constraints:
        if con.kind not in ("zero", "re", "im"):
            raise ValueError(f"unknown constraint kind {con.kind!r}")
        re_row = [Fraction(0)] * (2 * n_unknowns)
        im_row = [Fraction(0)] * (2 * n_unknowns)
        for k in set(con.coeffs) | set(con.conj_coeffs):
            if not 0 <= k < n_unknowns:
                raise IndexError(f"unknown index {k} out of range")
            a = con.coeffs.get(k, ZERO)
            b = con.conj_coeffs.get(k, ZERO)
            # x = s + i t:  a x + b conj(x)
            re_row[2 * k] += a.re + b.re
            re_row[2 * k + 1] += -a.im + b.im
            im_row[2 * k] += a.im + b.im
            im_row[2 * k + 1] += a.re - b.re
        if con.kind in ("zero", "re") and any(re_row):
            rows.append(re_row)
        if con.kind in ("zero", "im") and any(im_row):
            rows.append(im_row)
    return ExactMatrix.from_rows(rows, 2 * n_unknowns, "real")


def complexify(vec: Sequence[Fraction]) -> list[GaussQ]:
    """Inverse of the ``(re, im)`` column layout used by :func:`real_linearize`."""
    return [GaussQ(vec[2 * k], vec[2 * k + 1]) for k in range(len(vec) // 2)]
