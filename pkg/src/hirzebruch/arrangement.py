"""Line arrangements, their intersection lattices and the Hirzebruch predicate."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence

from .exact import NumberField, ProjLine, ProjPoint, meet


class Arrangement:
    """A finite set of pairwise distinct projective lines over one field."""

    def __init__(self, field: NumberField, lines: Sequence[ProjLine], name: str | None = None):
        self.field = field
        self.lines: tuple[ProjLine, ...] = tuple(lines)
        self.name = name
        seen = set()
        for i, l in enumerate(self.lines):
            if l.field != field:
                raise ValueError(f"line {i} is defined over {l.field!r}, not {field!r}")
            k = l.key()
            if k in seen:
                raise ValueError(f"duplicate line at index {i}")
            seen.add(k)

    def __len__(self):
        return len(self.lines)

    @property
    def is_real(self) -> bool:
        return all(l.is_real for l in self.lines)

    def conj(self) -> Arrangement:
        """The arrangement obtained by applying the field involution to every line."""
        return Arrangement(self.field, [l.conj() for l in self.lines], self.name)

    def __repr__(self):
        return f"Arrangement({self.name or '?'}, {len(self.lines)} lines over {self.field.name})"


@dataclass(frozen=True)
class MultiplePoint:
    point: ProjPoint
    lines: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class IntersectionLattice:
    points: tuple[MultiplePoint, ...]
    per_line: tuple[tuple[int, ...], ...]
    t_profile: Mapping[int, int]

    @property
    def n_lines(self) -> int:
        return len(self.per_line)

    def multiplicity(self, j: int) -> int:
        return self.points[j].multiplicity


def intersection_lattice(arr: Arrangement) -> IntersectionLattice:
    """All multiple points of ``arr`` with multiplicities and per-line incidences."""
    nl = len(arr.lines)
    if nl < 2:
        raise ValueError("need at least two lines")
    through: dict[tuple, set[int]] = {}
    pts: dict[tuple, ProjPoint] = {}
    for i in range(nl):
        for j in range(i + 1, nl):
            p = meet(arr.lines[i], arr.lines[j])
            k = p.key()
            pts.setdefault(k, p)
            s = through.setdefault(k, set())
            s.add(i)
            s.add(j)
    records = sorted(
        (MultiplePoint(pts[k], tuple(sorted(s))) for k, s in through.items()),
        key=lambda r: r.lines,
    )
    per_line: list[list[int]] = [[] for _ in range(nl)]
    for idx, r in enumerate(records):
        for i in r.lines:
            per_line[i].append(idx)
    t: dict[int, int] = {}
    for r in records:
        t[r.multiplicity] = t.get(r.multiplicity, 0) + 1
    lat = IntersectionLattice(tuple(records), tuple(tuple(x) for x in per_line), dict(sorted(t.items())))
    assert sum(comb(k, 2) * c for k, c in lat.t_profile.items()) == comb(nl, 2)
    return lat


@dataclass(frozen=True)
class HirzebruchResult:
    passed: bool
    n: int | None
    per_line_counts: tuple[int, ...]
    reason: str = ""
    degenerate: bool = False  # n == 1, three generic lines

    def as_dict(self) -> dict:
        return {
            "pass": self.passed,
            "n": self.n,
            "per_line_counts": list(self.per_line_counts),
            "reason": self.reason,
            "degenerate_n1": self.degenerate,
        }


def hirzebruch_check(arr_or_lattice: Arrangement | IntersectionLattice) -> HirzebruchResult:
    """Does every one of the 3n lines meet the others in exactly n+1 points?"""
    lat = (
        arr_or_lattice
        if isinstance(arr_or_lattice, IntersectionLattice)
        else intersection_lattice(arr_or_lattice)
    )
    counts = tuple(len(p) for p in lat.per_line)
    nl = len(counts)
    if nl % 3:
        return HirzebruchResult(False, None, counts, "line count not 3n")
    n = nl // 3
    bad = [i for i, c in enumerate(counts) if c != n + 1]
    if bad:
        return HirzebruchResult(False, None, counts, f"lines {bad} do not meet the others in {n + 1} points")
    return HirzebruchResult(True, n, counts, "", degenerate=(n == 1))


def counting_identities(t_profile: Mapping[int, int], n: int) -> dict[str, bool]:
    """Double counting: sum k*t_k = 3n(n+1) and sum C(k,2)*t_k = C(3n,2)."""
    s1 = sum(k * t for k, t in t_profile.items())
    s2 = sum(comb(k, 2) * t for k, t in t_profile.items())
    return {
        "sum_k_tk_ok": s1 == 3 * n * (n + 1),
        "pairs_ok": s2 == comb(3 * n, 2),
        "sum_k_tk": s1,
        "pairs": s2,
    }
