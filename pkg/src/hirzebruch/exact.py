"""Exact arithmetic in simple number fields and the projective plane over them.

A field is ``Q[x]/(f)`` for a monic irreducible ``f`` together with a chosen
complex root of ``f`` (the embedding) and an involution of the field that
models complex conjugation.  Elements are coefficient vectors in the power
basis; equality and zero tests are exact.  Signs of real embedded values are
decided by interval refinement with rational endpoints.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_BIT_BUDGET = 1024


class PrecisionError(ArithmeticError):
    """Raised when interval refinement exceeds the configured bit budget."""


class FieldMismatchError(TypeError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction, int or string")
    return Fraction(x)


# -- dense polynomials over Q, low degree first ------------------------------

def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[i + shift] -= c * bi
        _trim(a)
    return _trim(q), a


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def _poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_inverse_mod(a: Sequence[Fraction], m: Sequence[Fraction]) -> list[Fraction]:
    # extended Euclid: s*a + t*m = g, g a nonzero constant when gcd(a, m) = 1
    r0, r1 = _trim(list(m)), _trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible (min_poly not irreducible?)")
    g = r0[0]
    return [c / g for c in s0]


@dataclass(frozen=True)
class CertifiedReal:
    """Closed rational interval ``[lo, hi]`` known to contain a real number."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def sign(self) -> int | None:
        """Sign if the interval excludes zero, else ``None``."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)


def _imul(a: CertifiedReal, b: CertifiedReal) -> CertifiedReal:
    ps = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return CertifiedReal(min(ps), max(ps))


class NumberField:
    """``Q[x]/(min_poly)`` with a designated complex embedding of ``x``.

    ``min_poly`` is given low degree first and must be monic.  ``embedding``
    is an approximate complex value of the generator; it must sit much closer
    to one root than to any other.  ``involution`` is the image of the
    generator under the field involution, as a coefficient vector; omitted
    means the identity, which is correct whenever the embedding is real.
    """

    def __init__(
        self,
        min_poly: Iterable,
        embedding: complex | tuple[float, float] = 0.0,
        involution: Iterable | None = None,
        *,
        name: str | None = None,
        check_irreducible: bool = True,
        bit_budget: int = DEFAULT_BIT_BUDGET,
    ):
        poly = [_frac(c) for c in min_poly]
        if len(poly) < 2 or poly[-1] != 1:
            raise ValueError("min_poly must be monic of degree >= 1")
        self.min_poly: tuple[Fraction, ...] = tuple(poly)
        self.degree = len(poly) - 1
        self.name = name or f"Q[x]/({self._poly_str()})"
        self.bit_budget = bit_budget
        if isinstance(embedding, tuple):
            embedding = complex(*embedding)
        self.embedding_hint = complex(embedding)

        self.irreducible_checked = False
        if check_irreducible and self.degree > 1:
            import sympy

            x = sympy.Symbol("x")
            p = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in poly])), x, domain="QQ")
            if not p.is_irreducible:
                raise ValueError(f"min_poly {self._poly_str()} is reducible over Q")
            self.irreducible_checked = True
        elif self.degree == 1:
            self.irreducible_checked = True

        self.root = self._isolate_root()
        self._theta_lock = threading.Lock()
        self._theta: CertifiedReal | None = self._real_isolating_interval()

        # x^k mod f for k in [d, 2d-2], used by multiplication
        d = self.degree
        self._reductions = []
        lower = [-c for c in poly[:-1]]  # x^d = -(f - x^d)
        cur = list(lower)
        for _ in range(max(d - 1, 0)):
            self._reductions.append(tuple(cur))
            # multiply cur by x and reduce
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [c + top * l for c, l in zip(cur, lower)]

        if involution is None:
            inv = [Fraction(0)] * d
            if d > 1:
                inv[1] = Fraction(1)
            else:
                inv[0] = -poly[0]
            self.involution = tuple(inv)
        else:
            inv = [_frac(c) for c in involution]
            if len(inv) != d:
                raise ValueError("involution vector must have length = degree")
            self.involution = tuple(inv)
        self._check_involution()

    # -- construction helpers -------------------------------------------------

    def _poly_str(self) -> str:
        terms = []
        for i, c in enumerate(self.min_poly):
            if c:
                terms.append(f"{c}*x^{i}" if i else f"{c}")
        return " + ".join(reversed(terms))

    def _isolate_root(self) -> complex:
        coeffs = [float(c) for c in reversed(self.min_poly)]
        roots = np.roots(coeffs) if self.degree > 0 else np.array([])
        dist = np.abs(roots - self.embedding_hint)
        i = int(np.argmin(dist))
        radius = float(dist[i])
        others = np.delete(dist, i)
        if others.size and float(others.min()) <= 2 * radius:
            raise ValueError("embedding hint does not isolate a unique root")
        return complex(roots[i])

    def _real_isolating_interval(self) -> CertifiedReal | None:
        r = self.root
        if self.degree == 1:
            v = -self.min_poly[0]
            return CertifiedReal(v, v)
        coeffs = [float(c) for c in reversed(self.min_poly)]
        roots = np.roots(coeffs)
        sep = min(abs(r - s) for s in roots if abs(r - s) > 0)
        if abs(r.imag) > sep / 8:
            return None
        delta = sep / 4
        lo, hi = Fraction(r.real - delta), Fraction(r.real + delta)
        flo, fhi = _poly_eval(self.min_poly, lo), _poly_eval(self.min_poly, hi)
        if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
            return None
        return CertifiedReal(lo, hi)

    def _check_involution(self):
        g = self.gen()
        s = self.apply_involution(g)
        # sigma must map the generator to a root of min_poly
        acc = self.zero()
        for c in reversed(self.min_poly):
            acc = acc * s + self(c)
        if not acc.is_zero():
            raise ValueError("involution does not map the generator to a root of min_poly")
        if self.apply_involution(s) != g:
            raise ValueError("involution is not an involution")

    # -- element constructors -------------------------------------------------

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            c = [_frac(v) for v in value]
            if len(c) != self.degree:
                raise ValueError("coefficient vector has wrong length")
            return FieldElement(self, tuple(c))
        c = [Fraction(0)] * self.degree
        c[0] = _frac(value)
        return FieldElement(self, tuple(c))

    def zero(self) -> FieldElement:
        return self(0)

    def one(self) -> FieldElement:
        return self(1)

    def gen(self) -> FieldElement:
        if self.degree == 1:
            return self(-self.min_poly[0])
        c = [Fraction(0)] * self.degree
        c[1] = Fraction(1)
        return FieldElement(self, tuple(c))

    # -- embedding --------------------------------------------------------------

    @property
    def is_real(self) -> bool:
        """Whether the chosen embedding is real (certified by a sign change)."""
        return self._theta is not None

    def theta_interval(self, bits: int) -> CertifiedReal:
        """Isolating interval of the real generator of width at most ``2**-bits``."""
        if self._theta is None:
            raise ValueError(f"{self.name}: embedding is not real")
        if bits > self.bit_budget:
            raise PrecisionError(f"requested {bits} bits exceeds budget {self.bit_budget}")
        target = Fraction(1, 2**bits)
        with self._theta_lock:
            iv = self._theta
            f = self.min_poly
            while iv.width > target:
                mid = (iv.lo + iv.hi) / 2
                fm = _poly_eval(f, mid)
                if fm == 0:
                    iv = CertifiedReal(mid, mid)
                    break
                if (fm > 0) == (_poly_eval(f, iv.lo) > 0):
                    iv = CertifiedReal(mid, iv.hi)
                else:
                    iv = CertifiedReal(iv.lo, mid)
            self._theta = iv
        return iv

    def apply_involution(self, a: FieldElement) -> FieldElement:
        s = FieldElement(self, self.involution)
        acc = self.zero()
        for c in reversed(a.coeffs):
            acc = acc * s + self(c)
        return acc

    # -- identity -----------------------------------------------------------------

    def _key(self):
        return (self.min_poly, round(self.root.real, 7), round(self.root.imag, 7), self.involution)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, NumberField) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"NumberField({self.name})"



class FieldElement:
    """An element of a :class:`NumberField` in reduced power-basis form."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.field.degree
        if d == 1:
            return FieldElement(self.field, (self.coeffs[0] * o.coeffs[0],))
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        out = prod[:d]
        for k, c in enumerate(prod[d:]):
            if c:
                red = self.field._reductions[k]
                for i in range(d):
                    out[i] += c * red[i]
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coeffs[0],))
        inv = _poly_inverse_mod(list(self.coeffs), list(self.field.min_poly))
        inv = inv + [Fraction(0)] * (self.field.degree - len(inv))
        return FieldElement(self.field, tuple(inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatchError("comparing elements of different fields")
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def conj(self) -> FieldElement:
        return self.field.apply_involution(self)

    def to_complex(self) -> complex:
        r = self.field.root
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * r + float(c)
        return acc

    def enclosure(self, bits: int) -> CertifiedReal:
        """Rational interval containing the real embedded value."""
        theta = self.field.theta_interval(bits)
        acc = CertifiedReal(self.coeffs[-1], self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = _imul(acc, theta)
            acc = CertifiedReal(acc.lo + c, acc.hi + c)
        return acc

    def __repr__(self):
        if self.field.degree == 1:
            return f"{self.coeffs[0]}"
        parts = [f"{c}" if i == 0 else f"{c}*a^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) or "0"


QQ = NumberField([0, 1], 0.0, name="Q")


def real_sign(x: FieldElement) -> int:
    """Sign of the real embedding of ``x``; exactly 0 only for the zero element."""
    if x.is_zero():
        return 0
    f = x.field
    if not f.is_real:
        raise ValueError(f"{f.name}: embedding is not real, sign undefined")
    if f.degree == 1:
        return 1 if x.coeffs[0] > 0 else -1
    bits = 32
    while True:
        s = x.enclosure(bits).sign()
        if s is not None:
            return s
        bits *= 2
        if bits > f.bit_budget:
            # one last try at the full budget before giving up
            s = x.enclosure(f.bit_budget).sign()
            if s is not None:
                return s
            raise PrecisionError(f"sign of {x!r} undecided at {f.bit_budget} bits")


# -- projective plane ------------------------------------------------------------

Vec3 = tuple[FieldElement, FieldElement, FieldElement]


def cross(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def dot(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> FieldElement:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def det3(a, b, c) -> FieldElement:
    return dot(a, cross(b, c))


class _ProjObject:
    """Homogeneous triple up to scale, stored with first nonzero coordinate 1."""

    __slots__ = ("field", "coords")

    def __init__(self, coords: Sequence, field: NumberField | None = None):
        if len(coords) != 3:
            raise ValueError("need exactly three homogeneous coordinates")
        if field is None:
            field = next((c.field for c in coords if isinstance(c, FieldElement)), QQ)
        vals = [field(c) for c in coords]
        pivot = next((v for v in vals if not v.is_zero()), None)
        if pivot is None:
            raise ValueError("all coordinates are zero")
        inv = pivot.inverse()
        self.field = field
        self.coords: Vec3 = tuple(v * inv for v in vals)  # type: ignore[assignment]

    def key(self):
        return tuple(c.coeffs for c in self.coords)

    def __eq__(self, other):
        return type(other) is type(self) and self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash((type(self).__name__, self.key()))

    def conj(self):
        return type(self)([c.conj() for c in self.coords], self.field)

    @property
    def is_real(self) -> bool:
        return self.conj() == self

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self.coords))})"


class ProjPoint(_ProjObject):
    __slots__ = ()


class ProjLine(_ProjObject):
    __slots__ = ()


def incident(p: ProjPoint, l: ProjLine) -> bool:
    return dot(p.coords, l.coords).is_zero()


def meet(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    """Intersection point of two distinct lines."""
    if l1.field != l2.field:
        raise FieldMismatchError("lines over different fields")
    v = cross(l1.coords, l2.coords)
    if all(c.is_zero() for c in v):
        raise ValueError("meet of identical lines")
    p = ProjPoint(v, l1.field)
    assert incident(p, l1) and incident(p, l2)
    return p


def join(p1: ProjPoint, p2: ProjPoint) -> ProjLine:
    """Line through two distinct points."""
    if p1.field != p2.field:
        raise FieldMismatchError("points over different fields")
    v = cross(p1.coords, p2.coords)
    if all(c.is_zero() for c in v):
        raise ValueError("join of identical points")
    l = ProjLine(v, p1.field)
    assert incident(p1, l) and incident(p2, l)
    return l
