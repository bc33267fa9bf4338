"""Exact coordinates for the known arrangements with the Hirzebruch property.

Real entries are the reflection arrangements of the rank-3 Coxeter groups
A1^3, A3, B3 and H3, given in projectively normalized coordinates over Q or
Q(sqrt 5).  Complex entries are the Ceva and extended Ceva series and the
Hesse configurations over cyclotomic fields.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .arrangement import Arrangement
from .exact import QQ, FieldElement, NumberField, ProjLine


@lru_cache(maxsize=None)
def cyclotomic_field(m: int) -> NumberField:
    """Q(zeta_m) with zeta_m embedded as exp(2 pi i / m), involution zeta -> zeta^-1."""
    if m <= 2:
        return QQ
    import sympy

    x = sympy.Symbol("x")
    coeffs = [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs())]
    hint = cmath.exp(2j * cmath.pi / m)
    tmp = NumberField(coeffs, hint, name=f"Q(zeta{m})")
    inv = tmp.gen() ** (m - 1)
    K = NumberField(coeffs, hint, inv.coeffs, name=f"Q(zeta{m})", check_irreducible=False)
    K.irreducible_checked = tmp.irreducible_checked
    return K


def zeta(m: int) -> FieldElement:
    if m == 1:
        return QQ(1)
    if m == 2:
        return QQ(-1)
    return cyclotomic_field(m).gen()


@lru_cache(maxsize=None)
def sqrt5_field() -> NumberField:
    return NumberField([-5, 0, 1], 2.2360679775, name="Q(sqrt5)")


def coxeter_real(d: int) -> Arrangement:
    """Reflection arrangement of the spherical triangle group (pi/2, pi/3, pi/d).

    ``d = 2`` is the degenerate case of three generic lines (angles all pi/2).
    """
    if d == 2:
        lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        return Arrangement(QQ, [ProjLine(c, QQ) for c in lines], "coxeter2")
    if d == 3:
        # triangle x=0, y=0, z=0 with its three cevians through (1:1:1)
        lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (0, 1, -1), (1, 0, -1)]
        return Arrangement(QQ, [ProjLine(c, QQ) for c in lines], "coxeter3")
    if d == 4:
        # square with corners (+-1, +-1): sides x=+-1, y=+-1, diagonals, mid-lines, line at infinity
        lines = [(1, 0, -1), (1, 0, 1), (0, 1, -1), (0, 1, 1), (1, -1, 0), (1, 1, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        return Arrangement(QQ, [ProjLine(c, QQ) for c in lines], "coxeter4")
    if d == 5:
        K = sqrt5_field()
        r5 = K.gen()
        a, b = 1 + r5, r5 - 1  # 2*phi and 2/phi
        lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        for s1 in (1, -1):
            for s2 in (1, -1):
                v = (a, 2 * s1, s2 * b)
                lines += [v, (v[2], v[0], v[1]), (v[1], v[2], v[0])]
        return Arrangement(K, [ProjLine(c, K) for c in lines], "coxeter5")
    raise ValueError(f"no real Coxeter arrangement for d={d}; expected 2, 3, 4 or 5")


def _ceva_lines(m: int) -> list[ProjLine]:
    K = cyclotomic_field(m)
    z = zeta(m)
    lines = []
    for i, j in ((0, 1), (1, 2), (2, 0)):
        for k in range(m):
            c = [K(0), K(0), K(0)]
            c[i] = K(1)
            c[j] = -(z ** k)
            lines.append(ProjLine(c, K))
    return lines


def ceva(m: int) -> Arrangement:
    """(z0^m - z1^m)(z1^m - z2^m)(z2^m - z0^m) = 0."""
    if m < 3:
        raise ValueError("Ceva arrangement needs m >= 3")
    return Arrangement(cyclotomic_field(m), _ceva_lines(m), f"ceva{m}")


def extended_ceva(m: int) -> Arrangement:
    """z0 z1 z2 (z0^m - z1^m)(z1^m - z2^m)(z2^m - z0^m) = 0."""
    if m < 2:
        raise ValueError("extended Ceva arrangement needs m >= 2")
    K = cyclotomic_field(m)
    axes = [ProjLine(c, K) for c in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    return Arrangement(K, _ceva_lines(m) + axes, f"extended_ceva{m}")


def _hesse_lines() -> list[ProjLine]:
    K = cyclotomic_field(3)
    w = zeta(3)
    lines = [ProjLine(c, K) for c in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    for a in range(3):
        for b in range(3):
            lines.append(ProjLine((K(1), w ** a, w ** b), K))
    return lines


def hesse() -> Arrangement:
    """The 12 lines through the 9 inflection points of the Hesse pencil."""
    return Arrangement(cyclotomic_field(3), _hesse_lines(), "hesse")


def extended_hesse() -> Arrangement:
    """Hesse's 12 lines together with the 9 lines of the dual Hesse arrangement."""
    return Arrangement(cyclotomic_field(3), _hesse_lines() + _ceva_lines(3), "extended_hesse")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    expected_n: int
    expected_t_profile: dict[int, int]
    field: str
    real: bool
    builder: Callable[[], Arrangement]
    stretch: bool = False

    def build(self) -> Arrangement:
        return self.builder()


def _entries() -> list[CatalogEntry]:
    e = [
        CatalogEntry("coxeter2", 1, {2: 3}, "Q", True, lambda: coxeter_real(2)),
        CatalogEntry("coxeter3", 2, {2: 3, 3: 4}, "Q", True, lambda: coxeter_real(3)),
        CatalogEntry("coxeter4", 3, {2: 6, 3: 4, 4: 3}, "Q", True, lambda: coxeter_real(4)),
        CatalogEntry("coxeter5", 5, {2: 15, 3: 10, 5: 6}, "Q(sqrt5)", True, lambda: coxeter_real(5)),
    ]
    for m in (3, 4, 5):
        t = {3: 12} if m == 3 else {3: m * m, m: 3}
        e.append(CatalogEntry(f"ceva{m}", m, t, f"Q(zeta{m})", False, lambda m=m: ceva(m)))
    for m in (2, 3, 4):
        t: dict[int, int] = {2: 3 * m, 3: m * m}
        t[m + 2] = t.get(m + 2, 0) + 3
        fld = "Q" if m == 2 else f"Q(zeta{m})"
        e.append(CatalogEntry(f"extended_ceva{m}", m + 1, dict(sorted(t.items())), fld, m == 2, lambda m=m: extended_ceva(m)))
    e.append(CatalogEntry("hesse", 4, {2: 12, 4: 9}, "Q(zeta3)", False, hesse))
    e.append(CatalogEntry("extended_hesse", 7, {2: 36, 4: 9, 5: 12}, "Q(zeta3)", False, extended_hesse, stretch=True))
    return e


CATALOG: dict[str, CatalogEntry] = {x.name: x for x in _entries()}


def catalog_names(include_stretch: bool = False) -> list[str]:
    return [k for k, v in CATALOG.items() if include_stretch or not v.stretch]


def build(name: str) -> Arrangement:
    """Build a catalog arrangement by name; ``cevaM`` / ``extended_cevaM`` accept any M."""
    if name in CATALOG:
        return CATALOG[name].build()
    m = re.fullmatch(r"(extended_)?ceva(\d+)", name)
    if m:
        k = int(m.group(2))
        return extended_ceva(k) if m.group(1) else ceva(k)
    raise KeyError(f"unknown catalog entry {name!r}")


def real_entries() -> list[CatalogEntry]:
    """The real arrangements with the Hirzebruch property (one per Coxeter triangle)."""
    return [CATALOG[f"coxeter{d}"] for d in (2, 3, 4, 5)]
