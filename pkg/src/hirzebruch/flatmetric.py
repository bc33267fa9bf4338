"""Flat cone metric on RP^2 determined by a real Hirzebruch arrangement.

At a point of multiplicity ``k`` all ``2k`` sectors share one angle,
``alpha(k, n)``, equal to half the edge of the regular spherical ``k``-gon
whose angles are ``pi (n-1)/n``; double points have right-angled sectors.
Every face of the cell complex then carries a Euclidean triangle, and
the checks below confirm that these triangles are flat, mutually isometric
and glue with the predicted cone angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arrangement import Arrangement, hirzebruch_check, intersection_lattice
from .cells import cell_complex
from .spherical import TOL, regular_edge

PI = math.pi


def line_cone_angle(n: int) -> float:
    return 2 * PI * (n - 1) / n


def sector_angle(k: int, n: int) -> float:
    """Common sector angle at a point of multiplicity ``k`` when there are ``3n`` lines."""
    if k < 2:
        raise ValueError("multiplicity must be at least 2")
    if n < 1:
        raise ValueError("n must be positive")
    if k == 2:
        return PI / 2
    if n == 1:
        raise ValueError("n = 1 only has double points")
    beta = PI * (n - 1) / n
    if k >= 2 * n:
        raise ValueError(f"no regular spherical {k}-gon with angle {beta}: (k, n) = ({k}, {n}) is inadmissible")
    return 0.5 * regular_edge(k, beta)


def sector_angle_closed_form(k: int, n: int) -> float:
    """cos alpha = cos(pi/k) / sin(pi(n-1)/(2n)); used only to cross-check the bisection."""
    if k == 2:
        return PI / 2
    return math.acos(math.cos(PI / k) / math.sin(PI * (n - 1) / (2 * n)))


@dataclass(frozen=True)
class SectorModel:
    n: int
    alpha: dict[int, float]

    @property
    def cone_angle_per_line(self) -> float:
        return line_cone_angle(self.n)

    @classmethod
    def build(cls, n: int, kmax: int = 5) -> SectorModel:
        table = {}
        for k in range(2, kmax + 1):
            try:
                table[k] = sector_angle(k, n)
            except ValueError:
                pass
        return cls(n, table)


@dataclass(frozen=True)
class TriangleShape:
    n: int
    d: int
    angles: tuple[float, float, float]
    residual: float  # angle sum minus pi
    flat: bool


def triangle_shape(n: int, d: int, tol: float = TOL) -> TriangleShape:
    """The face triangle with vertex multiplicities (2, 3, d)."""
    if d not in (3, 4, 5):
        raise ValueError("d must be 3, 4 or 5")
    angles = (PI / 2, sector_angle(3, n), sector_angle(d, n))
    res = sum(angles) - PI
    return TriangleShape(n, d, angles, res, abs(res) < tol)


def consistency_identity_residual(d: int, n: int) -> float:
    """cos^2(pi/2n) - 1/4 - cos^2(pi/d); vanishes exactly at flat (2, 3, d) triangles."""
    return math.cos(PI / (2 * n)) ** 2 - 0.25 - math.cos(PI / d) ** 2


@dataclass
class Consistency:
    solutions: list[tuple[int, int]]
    residuals: dict[tuple[int, int], float]
    identity_residuals: dict[tuple[int, int], float]
    skipped: list[tuple[int, int]]  # inadmissible pairs

    @property
    def max_solution_residual(self) -> float:
        return max(abs(self.residuals[s]) for s in self.solutions) if self.solutions else 0.0

    @property
    def min_nonsolution_residual(self) -> float:
        return min(abs(r) for s, r in self.residuals.items() if s not in self.solutions)

    @property
    def identity_agrees(self) -> bool:
        """The closed-form identity vanishes exactly at the numerically flat pairs."""
        zero = {s for s, r in self.identity_residuals.items() if abs(r) < 1e-12}
        return zero == set(self.solutions)

    def as_dict(self) -> dict:
        return {
            "solutions": [list(s) for s in self.solutions],
            "max_solution_residual": self.max_solution_residual,
            "min_nonsolution_residual": self.min_nonsolution_residual,
            "identity_agrees": self.identity_agrees,
            "identity_at_solutions": {f"{d},{n}": self.identity_residuals[(d, n)] for d, n in self.solutions},
            "pairs_scanned": len(self.residuals),
            "pairs_skipped_inadmissible": len(self.skipped),
        }


def solve_consistency(d_range=(3, 4, 5), n_max: int = 100, tol: float = TOL) -> Consistency:
    """All (d, n) for which the (2, 3, d) triangle is flat, 2 <= n <= n_max."""
    if n_max < 5:
        raise ValueError("n_max must be at least 5")
    sols, res, ident, skipped = [], {}, {}, []
    for d in d_range:
        for n in range(2, n_max + 1):
            if d >= 2 * n:
                skipped.append((d, n))
                continue
            t = triangle_shape(n, d, tol)
            res[(d, n)] = t.residual
            ident[(d, n)] = consistency_identity_residual(d, n)
            if t.flat:
                sols.append((d, n))
    return Consistency(sols, res, ident, skipped)


@dataclass
class MetricReport:
    n: int
    face_angles: list[tuple[float, float, float]]
    isometry_classes: int
    cone_angles: dict[int, float]  # per multiplicity
    total_curvature: float
    checks: dict[str, bool]
    diagnostics: list[str] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def angle_classes(self) -> list[tuple[float, float, float]]:
        """One representative per class of face angle triples (largest angle first)."""
        reps = {}
        for t in self.face_angles:
            st = tuple(sorted(t, reverse=True))
            reps.setdefault(tuple(round(a, 12) for a in st), st)
        return [reps[k] for k in sorted(reps, reverse=True)]

    def face_types_deg(self) -> list[list[float]]:
        return [[round(math.degrees(a), 6) for a in t] for t in self.angle_classes()]

    def as_dict(self) -> dict:
        return {
            "pass": self.passed,
            "n": self.n,
            "counts": self.counts,
            "face_angle_classes": [[angle_record(a) for a in t] for t in self.angle_classes()],
            "isometry_classes": self.isometry_classes,
            "cone_angles": {str(k): angle_record(v) for k, v in self.cone_angles.items()},
            "total_curvature": angle_record(self.total_curvature),
            "checks": self.checks,
            "diagnostics": self.diagnostics,
        }


def angle_record(x: float) -> dict:
    """Radians to 17 significant digits and degrees to 6 decimals."""
    if math.isnan(x):
        return {"rad": None, "deg": None}
    return {"rad": float(f"{x:.17g}"), "deg": float(f"{math.degrees(x):.6f}")}


def verify_metric(arr: Arrangement, n_override: int | None = None, tol: float = TOL) -> MetricReport:
    """Assign sector angles from multiplicities and check the flat triangulation.

    ``n_override`` replaces the parameter read off the arrangement; with any
    wrong value the faces stop being flat and the report fails.
    """
    lat = intersection_lattice(arr)
    hz = hirzebruch_check(lat)
    if not hz.passed:
        raise ValueError(f"not a Hirzebruch arrangement ({hz.reason})")
    n = n_override if n_override is not None else hz.n
    if n < 2:
        raise ValueError("the flat metric needs n >= 2 (n = 1 has only right-angled sectors)")
    cc = cell_complex(arr, lat)
    if not cc.is_simplicial:
        raise ValueError("cell complex is not simplicial")
    mu = cc.multiplicities
    diag: list[str] = []
    alpha: dict[int, float] = {}
    for k in sorted(set(mu)):
        try:
            alpha[k] = sector_angle(k, n)
        except ValueError as e:
            diag.append(str(e))
    if len(alpha) < len(set(mu)):
        checks = {"sector_angles_defined": False}
        return MetricReport(n, [], 0, {}, float("nan"), checks, diag, cc.counts())

    face_angles = [tuple(alpha[mu[v]] for v in f.vertices) for f in cc.faces]
    flat_ok = True
    for i, t in enumerate(face_angles):
        r = sum(t) - PI
        if abs(r) >= tol:
            flat_ok = False
            if len(diag) < 20:
                diag.append(f"face {i}: angle sum - pi = {r:.3e}")

    types = {tuple(sorted(mu[v] for v in f.vertices)) for f in cc.faces}
    # law of sines with the circumdiameter fixed to 1: side = sin(opposite angle)
    iso_ok = len(types) == 1
    lengths: dict[int, list[float]] = {}
    for f, t in zip(cc.faces, face_angles):
        for j, e in enumerate(f.edges):
            lengths.setdefault(e, []).append(math.sin(t[(j + 2) % 3]))
    for e, ls in lengths.items():
        if max(ls) - min(ls) >= tol:
            iso_ok = False
            if len(diag) < 20:
                diag.append(f"edge {e}: lengths from its two faces differ by {max(ls) - min(ls):.3e}")

    cone: dict[int, float] = {}
    cone_ok = True
    corner_sum = [0.0] * cc.n_vertices
    for f, t in zip(cc.faces, face_angles):
        for v, a in zip(f.vertices, t):
            corner_sum[v] += a
    for v, m in enumerate(mu):
        expected = 2 * m * alpha[m]
        if abs(corner_sum[v] - expected) >= tol or len(cc.sectors[v]) != 2 * m:
            cone_ok = False
            diag.append(f"vertex {v}: corner sum {corner_sum[v]!r} != 2*mu*alpha = {expected!r}")
        cone[m] = expected
    shape_ok = all(abs(c - 2 * PI) < tol if m == 2 else c < 2 * PI - tol for m, c in cone.items())
    predicted = [2 * m * alpha[m] for m in mu]
    curvature = sum(2 * PI - c for c in predicted)
    face_total = sum(sum(t) for t in face_angles)
    checks = {
        "sector_angles_defined": True,
        "faces_flat": flat_ok,
        "faces_isometric": iso_ok,
        "cone_angles_match": cone_ok,
        "cone_angles_below_2pi": shape_ok,
        "total_curvature_2pi": abs(curvature - 2 * PI) < tol,
        "face_angles_equal_cone_total": abs(face_total - sum(predicted)) < tol,
    }
    return MetricReport(n, face_angles, len(types), dict(sorted(cone.items())), curvature, checks, diag, cc.counts())
