"""Convex spherical and Euclidean polygons.

Polygons on the unit sphere are stored as unit vectors in counterclockwise
order seen from outside, i.e. ``det(A_i, A_{i+1}, A_{i+2}) > 0``.  Edge ``i``
joins ``A_i`` to ``A_{i+1}``; angle ``i`` sits at ``A_i``.

The module covers measuring, polar duality, doubling into cone spheres,
regular polygons (by colatitude bisection), the fan flattening into the
plane, random equilateral/convex samplers, and numerical checks for the
inequalities satisfied by equiangular and equilateral polygons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TOL = 1e-9
PI = math.pi


class DegeneratePolygonError(ValueError):
    pass


def _cross(a, b) -> np.ndarray:
    # np.cross is slow on single 3-vectors
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0:
        raise DegeneratePolygonError("zero vector")
    return v / n


def arc(a: np.ndarray, b: np.ndarray) -> float:
    """Great-circle distance between unit vectors (stable near 0 and pi)."""
    return math.atan2(float(np.linalg.norm(_cross(a, b))), float(np.dot(a, b)))


def _sphere_angle(prev: np.ndarray, at: np.ndarray, nxt: np.ndarray) -> float:
    tp = prev - np.dot(prev, at) * at
    tn = nxt - np.dot(nxt, at) * at
    return math.atan2(float(np.linalg.norm(_cross(tp, tn))), float(np.dot(tp, tn)))


def _plane_angle(prev: np.ndarray, at: np.ndarray, nxt: np.ndarray) -> float:
    a, b = prev - at, nxt - at
    return math.atan2(abs(a[0] * b[1] - a[1] * b[0]), float(np.dot(a, b)))


@dataclass(frozen=True, eq=False)
class SphericalPolygon:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError("vertices must be an (k, 3) array")
        v = v / np.linalg.norm(v, axis=1)[:, None]
        object.__setattr__(self, "vertices", v)
        _check_spherical_convex(v)

    @classmethod
    def from_points(cls, pts) -> SphericalPolygon:
        """Build from vertices in either cyclic orientation."""
        v = np.asarray(pts, dtype=float)
        v = v / np.linalg.norm(v, axis=1)[:, None]
        if np.dot(_cross(v[0], v[1]), v[2]) < 0:
            v = v[::-1].copy()
        return cls(v)

    def __len__(self):
        return len(self.vertices)


def _hemisphere_witness(v: np.ndarray, tol: float) -> np.ndarray | None:
    """A unit vector with positive dot product against every vertex, if one exists."""
    w = v.sum(axis=0)
    if np.linalg.norm(w) > tol and np.min(v @ _unit(w)) > tol:
        return _unit(w)
    # the vertex centroid can fail for near-hemispherical polygons: maximise the
    # smallest dot product over the cube instead
    from scipy.optimize import linprog

    k = len(v)
    res = linprog(
        c=[0, 0, 0, -1],
        A_ub=np.column_stack([-v, np.ones(k)]),
        b_ub=np.zeros(k),
        bounds=[(-1, 1)] * 3 + [(None, 1)],
    )
    if res.status != 0 or -res.fun <= tol:
        return None
    c = _unit(res.x[:3])
    return c if np.min(v @ c) > tol else None


def _check_spherical_convex(v: np.ndarray, tol: float = 1e-12) -> None:
    k = len(v)
    if k < 3:
        raise DegeneratePolygonError("a spherical polygon needs at least 3 vertices (use Lune for bigons)")
    if _hemisphere_witness(v, tol) is None:
        raise DegeneratePolygonError("polygon is not contained in an open hemisphere")
    # side[j, i] = det(A_i, A_{i+1}, A_j): every other vertex strictly left of edge i;
    # j = i + 2 is the turn test, so collinear adjacent edges are refused too
    side = v @ np.cross(v, np.roll(v, -1, axis=0)).T
    idx = np.arange(k)
    side[idx, idx] = side[(idx + 1) % k, idx] = np.inf
    if np.min(side[(idx + 2) % k, idx]) <= tol:
        raise DegeneratePolygonError("a turn is not strictly left (or adjacent edges are collinear)")
    if np.min(side) <= tol:
        raise DegeneratePolygonError("polygon is not convex")


@dataclass(frozen=True)
class Lune:
    """Spherical bigon with two antipodal vertices and interior angle ``angle``."""

    angle: float

    def __post_init__(self):
        if not 0 < self.angle < 2 * PI:
            raise DegeneratePolygonError("lune angle must lie in (0, 2pi)")

    @property
    def edge_lengths(self) -> tuple[float, float]:
        return (PI, PI)

    @property
    def angles(self) -> tuple[float, float]:
        return (self.angle, self.angle)

    @property
    def area(self) -> float:
        return 2 * self.angle


@dataclass(frozen=True)
class Measurement:
    edge_lengths: np.ndarray
    angles: np.ndarray
    area: float | None

    def as_dict(self) -> dict:
        return {
            "edge_lengths": [float(x) for x in self.edge_lengths],
            "angles": [float(x) for x in self.angles],
            "area": None if self.area is None else float(self.area),
        }


def measure(P) -> Measurement:
    """Edge lengths, angles and area (spherical excess) of a convex polygon.

    Accepts :class:`SphericalPolygon` and :class:`EuclideanPolygon`; a bigon
    has no vertex set from which an area could be measured and is refused.
    """
    if isinstance(P, Lune):
        raise DegeneratePolygonError("bigons are not measured; use Lune.edge_lengths / Lune.area")
    v = P.vertices
    k = len(v)
    if isinstance(P, EuclideanPolygon):
        edges = np.array([np.linalg.norm(v[(i + 1) % k] - v[i]) for i in range(k)])
        angles = np.array([_plane_angle(v[i - 1], v[i], v[(i + 1) % k]) for i in range(k)])
        x, y = v[:, 0], v[:, 1]
        area = 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
        return Measurement(edges, angles, area)
    edges = np.array([arc(v[i], v[(i + 1) % k]) for i in range(k)])
    angles = np.array([_sphere_angle(v[i - 1], v[i], v[(i + 1) % k]) for i in range(k)])
    area = float(angles.sum() - (k - 2) * PI)
    return Measurement(edges, angles, area)


def dual(P: SphericalPolygon) -> SphericalPolygon:
    """Polar polygon.  Vertex ``i`` of the dual is the inward normal of edge ``i``.

    With this indexing ``angles(dual)[i] == pi - edges(P)[i]`` and
    ``edges(dual)[i] == pi - angles(P)[i + 1]`` (the polar-triangle rule), so
    equiangular and equilateral polygons are exchanged.
    """
    v = P.vertices
    k = len(v)
    return SphericalPolygon(np.array([_unit(_cross(v[i], v[(i + 1) % k])) for i in range(k)]))


@dataclass(frozen=True)
class ConeSphere:
    cone_angles: tuple[float, ...]
    area: float
    curvature: float = 1.0

    @property
    def gauss_bonnet_residual(self) -> float:
        # sum of angle defects + K * area = 2pi * chi(S^2)
        return sum(2 * PI - a for a in self.cone_angles) + self.curvature * self.area - 4 * PI


def double(P) -> ConeSphere:
    """Glue two copies of a convex polygon along the boundary."""
    if isinstance(P, Lune):
        return ConeSphere((2 * P.angle, 2 * P.angle), 2 * P.area)
    m = measure(P)
    return ConeSphere(tuple(float(2 * a) for a in m.angles), 2 * m.area)


# -- regular polygons -----------------------------------------------------------------


def _regular_vertices(k: int, colat: float) -> np.ndarray:
    phi = 2 * PI * np.arange(k) / k
    s = math.sin(colat)
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), np.full(k, math.cos(colat))])


def _regular_angle(k: int, colat: float) -> float:
    v = _regular_vertices(k, colat)
    return _sphere_angle(v[-1], v[0], v[1])


def regular_polygon(k: int, beta: float):
    """Equilateral and equiangular spherical ``k``-gon with angle ``beta``.

    Vertices lie on the circle of colatitude ``t`` around the north pole; the
    angle grows monotonically from the Euclidean value ``(k-2)pi/k`` at
    ``t -> 0`` to ``pi`` at the equator, and ``t`` is found by bisection.
    ``k == 2`` returns the :class:`Lune` with that angle.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if k == 2:
        return Lune(beta)
    lo_beta = (k - 2) * PI / k
    if not lo_beta < beta < PI:
        raise ValueError(f"no convex regular spherical {k}-gon with angle {beta} (need {lo_beta} < beta < pi)")
    lo, hi = 0.0, PI / 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _regular_angle(k, mid) < beta:
            lo = mid
        else:
            hi = mid
    return SphericalPolygon(_regular_vertices(k, 0.5 * (lo + hi)))


def regular_edge(k: int, beta: float) -> float:
    """Edge length of the regular spherical ``k``-gon with angle ``beta``."""
    P = regular_polygon(k, beta)
    if isinstance(P, Lune):
        return PI
    v = P.vertices
    return arc(v[0], v[1])


# -- Euclidean polygons ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EuclideanPolygon:
    vertices: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError("vertices must be an (k, 2) array")
        object.__setattr__(self, "vertices", v)
        if self.validate and not is_convex_plane(v):
            raise DegeneratePolygonError("Euclidean polygon is not strictly convex and counterclockwise")

    def __len__(self):
        return len(self.vertices)


def is_convex_plane(v: np.ndarray, tol: float = 1e-12) -> bool:
    k = len(v)
    if k < 3:
        return False
    turn = 0.0
    for i in range(k):
        a = v[(i + 1) % k] - v[i]
        b = v[(i + 2) % k] - v[(i + 1) % k]
        c = a[0] * b[1] - a[1] * b[0]
        if c <= tol * np.linalg.norm(a) * np.linalg.norm(b):
            return False
        turn += math.atan2(c, float(np.dot(a, b)))
    return abs(turn - 2 * PI) < 1e-6


@dataclass(frozen=True)
class FlattenResult:
    polygon: EuclideanPolygon
    convex: bool
    edge_error: float
    angle_margins: np.ndarray  # spherical angle minus Euclidean angle, per vertex

    @property
    def min_margin(self) -> float:
        return float(np.min(self.angle_margins))


def flatten(P: SphericalPolygon) -> FlattenResult:
    """Replace the fan triangles ``A_0 A_i A_{i+1}`` by flat ones and reglue.

    The output has the same edge lengths; every angle shrinks.
    """
    m = measure(P)
    if m.edge_lengths.sum() >= 2 * PI:
        raise ValueError("flatten needs perimeter < 2pi")
    v = P.vertices
    k = len(v)
    diag = [0.0] + [arc(v[0], v[i]) for i in range(1, k)]
    pts = [np.zeros(2), np.array([diag[1], 0.0])]
    phi = 0.0
    for i in range(1, k - 1):
        a, b, c = diag[i], diag[i + 1], m.edge_lengths[i]
        cos_g = (a * a + b * b - c * c) / (2 * a * b)
        phi += math.acos(max(-1.0, min(1.0, cos_g)))
        pts.append(b * np.array([math.cos(phi), math.sin(phi)]))
    E = EuclideanPolygon(np.array(pts), validate=False)
    em = measure(E)
    return FlattenResult(
        polygon=E,
        convex=is_convex_plane(E.vertices),
        edge_error=float(np.max(np.abs(em.edge_lengths - m.edge_lengths))),
        angle_margins=m.angles - em.angles,
    )


# -- inequality checks ----------------------------------------------------------------


def parity_bound(v: int) -> float:
    """pi for even ``v``, 2 arccos(1/(v-1)) for odd ``v``."""
    return PI if v % 2 == 0 else 2 * math.acos(1.0 / (v - 1))


@dataclass
class BoundReport:
    statement: str
    sums: list[float]
    bound: float
    margins: list[float]  # positive means the inequality holds
    strict: bool
    tol: float

    @property
    def violations(self) -> int:
        return sum(m < -self.tol for m in self.margins)

    @property
    def inconclusive(self) -> int:
        # strict statements whose margin is lost in the tolerance band
        return sum(abs(m) <= self.tol for m in self.margins) if self.strict else 0

    @property
    def worst_margin(self) -> float:
        return min(self.margins)

    def as_dict(self) -> dict:
        return {
            "statement": self.statement,
            "bound": self.bound,
            "sums": self.sums,
            "worst_margin": self.worst_margin,
            "violations": self.violations,
            "inconclusive": self.inconclusive,
        }


def _spread(x: np.ndarray) -> float:
    return float(np.max(x) - np.min(x))


def check_consecutive_edges(P: SphericalPolygon, tol: float = TOL, eq_tol: float = 1e-8) -> BoundReport:
    """Consecutive edge sums of an equiangular spherical polygon.

    Each sum must stay below ``pi`` (even vertex count) or
    ``2pi - 2 arccos(1/(v-1))`` (odd vertex count).
    """
    m = measure(P)
    if _spread(m.angles) > eq_tol:
        raise ValueError("polygon is not equiangular")
    v = len(P)
    bound = 2 * PI - parity_bound(v) if v % 2 else PI
    sums = [float(m.edge_lengths[i - 1] + m.edge_lengths[i]) for i in range(v)]
    return BoundReport("equiangular_edge_sums", sums, bound, [bound - s for s in sums], True, tol)


def check_consecutive_angles(P, tol: float = TOL, eq_tol: float = 1e-8) -> BoundReport:
    """Consecutive angle sums of an equilateral polygon against the parity bound.

    Strictly above the bound on the sphere; at least the bound in the plane.
    """
    m = measure(P)
    if _spread(m.edge_lengths) > eq_tol * max(1.0, float(np.max(m.edge_lengths))):
        raise ValueError("polygon is not equilateral")
    v = len(P)
    bound = parity_bound(v)
    sums = [float(m.angles[i] + m.angles[(i + 1) % v]) for i in range(v)]
    spherical = isinstance(P, SphericalPolygon)
    name = "equilateral_angle_sums_sphere" if spherical else "equilateral_angle_sums_plane"
    return BoundReport(name, sums, bound, [s - bound for s in sums], spherical, tol)


def pentagon_refinement(P: SphericalPolygon, tol: float = TOL, eq_tol: float = 1e-8) -> dict:
    """Pentagon refinement of the consecutive-sum bounds.

    Equiangular form: consecutive edge sums all > 2pi/3 forces them all < pi.
    Equilateral form: consecutive angle sums all < 4pi/3 forces them all > pi.
    Returns status ``holds``, ``violated`` or ``vacuous`` (hypothesis fails).
    """
    if len(P) != 5:
        raise ValueError("pentagon_refinement needs exactly 5 vertices")
    m = measure(P)
    if _spread(m.angles) <= eq_tol:
        form = "equiangular"
        sums = [float(m.edge_lengths[i - 1] + m.edge_lengths[i]) for i in range(5)]
        hyp = min(sums) - 2 * PI / 3
        margin = PI - max(sums)
    elif _spread(m.edge_lengths) <= eq_tol:
        form = "equilateral"
        sums = [float(m.angles[i] + m.angles[(i + 1) % 5]) for i in range(5)]
        hyp = 4 * PI / 3 - max(sums)
        margin = min(sums) - PI
    else:
        raise ValueError("pentagon is neither equiangular nor equilateral")
    if hyp <= 0:
        status = "vacuous"
    else:
        status = "holds" if margin > -tol else "violated"
    return {"form": form, "status": status, "sums": sums, "hypothesis_margin": hyp, "margin": margin}


# -- Euclidean quadrilaterals ---------------------------------------------------------


def _quad_from_angle(alpha: float, b: float, c: float, d: float):
    """Quadrilateral ABCD with |AB|=1, |BC|=b, |CD|=c, |DA|=d and angle A = alpha, or None."""
    A = np.zeros(2)
    B = np.array([1.0, 0.0])
    D = d * np.array([math.cos(alpha), math.sin(alpha)])
    bd = np.linalg.norm(D - B)
    if bd > b + c or bd < abs(b - c) or bd == 0:
        return None
    # circle-circle intersection, C on the far side of BD from A
    x = (b * b - c * c + bd * bd) / (2 * bd)
    h = math.sqrt(max(b * b - x * x, 0.0))
    u = (D - B) / bd
    n = np.array([-u[1], u[0]])
    side_a = np.dot(A - B, n)
    C = B + x * u + (h if side_a < 0 else -h) * n
    return np.array([A, B, C, D])


def _quad_angle_sum(alpha: float, b: float, c: float, d: float, slack: float = 1e-12):
    q = _quad_from_angle(alpha, b, c, d)
    if q is None:
        return None
    angs = [_plane_angle(q[i - 1], q[i], q[(i + 1) % 4]) for i in range(4)]
    # closure of the convex ones: reflex corners are rejected, straight ones kept
    for i in range(4):
        a = q[(i + 1) % 4] - q[i]
        e = q[(i + 2) % 4] - q[(i + 1) % 4]
        if a[0] * e[1] - a[1] * e[0] < -slack:
            return None
    return angs[0] + angs[1]


@dataclass(frozen=True)
class QuadrilateralMin:
    sides: tuple[int, int, int, int]
    perimeter: int
    min_sum: float
    argmin_angle_a: float
    bound: float

    @property
    def margin(self) -> float:
        return self.min_sum - self.bound


def quadrilateral_min(sides, grid: int = 20001) -> QuadrilateralMin:
    """Minimum of angle A + angle B over convex quadrilaterals ABCD with the given sides.

    ``sides = (|AB|, |BC|, |CD|, |DA|)`` with ``|AB| = 1``.  A quadrilateral
    with prescribed sides has one degree of freedom; we sweep the angle at
    ``A`` on a grid, including degenerate convex limits, and polish the best
    grid point with a bounded scalar minimisation.
    """
    from scipy.optimize import minimize_scalar

    s = tuple(int(x) for x in sides)
    if len(s) != 4 or s[0] != 1 or min(s) < 1:
        raise ValueError("sides must be four positive integers with |AB| = 1")
    if any(2 * x >= sum(s) for x in s):
        raise ValueError(f"no convex quadrilateral with sides {s}")
    _, b, c, d = s
    alphas = np.linspace(0.0, PI, grid)[1:-1]
    vals = np.array([_quad_angle_sum(a, b, c, d) if _quad_angle_sum(a, b, c, d) is not None else np.inf for a in alphas])
    i = int(np.argmin(vals))
    if not np.isfinite(vals[i]):
        raise ValueError(f"no convex quadrilateral with sides {s}")
    best_a, best = float(alphas[i]), float(vals[i])
    lo, hi = alphas[max(i - 1, 0)], alphas[min(i + 1, len(alphas) - 1)]

    def f(a):
        r = _quad_angle_sum(a, b, c, d)
        return np.inf if r is None else r

    res = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
    if np.isfinite(res.fun) and res.fun < best:
        best_a, best = float(res.x), float(res.fun)
    per = sum(s)
    return QuadrilateralMin(s, per, best, best_a, parity_bound(per))


# -- rigidity of regular polygons -----------------------------------------------------


def regular_rigidity_scan(betas, k_max: int = 12, k_min: int = 2) -> dict:
    """Edge length ``s(k, beta)`` on a grid; ``s`` must strictly decrease in ``k``.

    Only admissible pairs, ``(k-2)pi/k < beta``, enter the table.
    """
    table = {}
    violations = []
    for beta in betas:
        row = {}
        for k in range(k_min, k_max + 1):
            if k == 2 or (k - 2) * PI / k < beta:
                row[k] = regular_edge(k, beta)
        ks = sorted(row)
        for a, b in zip(ks, ks[1:]):
            if not row[a] > row[b]:
                violations.append((float(beta), a, b))
        table[float(beta)] = row
    return {"table": table, "violations": violations}


# -- deformation of Euclidean polygons -----------------------------------------------


def _angle_sum_grad(X: np.ndarray, idx=(0, 1)) -> tuple[float, np.ndarray]:
    """Interior angles at ``idx`` of a ccw polygon, summed, with gradient."""
    k = len(X)
    total = 0.0
    g = np.zeros_like(X)
    for i in idx:
        p, q = (i - 1) % k, (i + 1) % k
        a = X[p] - X[i]
        b = X[q] - X[i]
        # interior angle = polar(a) - polar(b) for counterclockwise order
        total += _plane_angle(X[p], X[i], X[q])
        da = np.array([-a[1], a[0]]) / np.dot(a, a)
        db = -np.array([-b[1], b[0]]) / np.dot(b, b)
        g[p] += da
        g[q] += db
        g[i] -= da + db
    return total, g


@dataclass(frozen=True)
class Descent:
    direction: np.ndarray  # (k, 2) velocity field on the vertices
    magnitude: float  # norm of the projected gradient
    directional_derivative: float
    flex_dim: int  # dimension of edge-preserving motions modulo rigid ones


def deformation_descent(E: EuclideanPolygon) -> Descent:
    """First-order edge-preserving motion decreasing angle A_1 + angle A_2.

    Projects the gradient of the angle sum onto the kernel of the
    edge-length Jacobian.
    """
    X = E.vertices
    k = len(X)
    if k < 5:
        raise ValueError("deformation_descent needs at least 5 vertices")
    J = np.zeros((k, 2 * k))
    for i in range(k):
        j = (i + 1) % k
        u = (X[j] - X[i]) / np.linalg.norm(X[j] - X[i])
        J[i, 2 * j : 2 * j + 2] += u
        J[i, 2 * i : 2 * i + 2] -= u
    _, sv, vt = np.linalg.svd(J)
    rank = int(np.sum(sv > 1e-10 * sv[0]))
    null = vt[rank:].T
    _, g = _angle_sum_grad(X)
    gp = null @ (null.T @ g.ravel())
    mag = float(np.linalg.norm(gp))
    return Descent(-gp.reshape(k, 2), mag, -mag * mag, null.shape[1] - 3)


# -- samplers -------------------------------------------------------------------------


class SamplerExhausted(RuntimeError):
    pass


def _plane_walk(turns: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    heads = np.concatenate([[0.0], np.cumsum(turns)])
    steps = np.column_stack([np.cos(heads), np.sin(heads)])
    return steps, steps.sum(axis=0)


def _sphere_walk(s: float, turns):
    """Walk geodesic steps of length ``s`` from the north pole, turning left by ``turns``."""
    px, py, pz = 0.0, 0.0, 1.0
    tx, ty, tz = 1.0, 0.0, 0.0
    pts = [(px, py, pz)]
    cs, ss = math.cos(s), math.sin(s)
    n = len(turns)
    for j in range(n + 1):
        px, py, pz, tx, ty, tz = (
            cs * px + ss * tx, cs * py + ss * ty, cs * pz + ss * tz,
            -ss * px + cs * tx, -ss * py + cs * ty, -ss * pz + cs * tz,
        )
        if j < n:
            pts.append((px, py, pz))
            c, sn = math.cos(turns[j]), math.sin(turns[j])
            nx, ny, nz = py * tz - pz * ty, pz * tx - px * tz, px * ty - py * tx
            tx, ty, tz = c * tx + sn * nx, c * ty + sn * ny, c * tz + sn * nz
    return np.array(pts), np.array([px, py, pz]), np.array([tx, ty, tz])


def _repair(residual, x0: np.ndarray, iters: int = 100, h: float = 1e-7) -> np.ndarray | None:
    """Gauss-Newton with minimal-norm steps onto ``residual(x) = 0``."""
    x = x0.copy()
    for _ in range(iters):
        r = residual(x)
        if np.linalg.norm(r) < 1e-14:
            return x
        J = np.empty((len(r), len(x)))
        for i in range(len(x)):
            e = np.zeros_like(x)
            e[i] = h
            J[:, i] = (residual(x + e) - residual(x - e)) / (2 * h)
        x = x - np.linalg.pinv(J) @ r
    return x if np.linalg.norm(residual(x)) < 1e-12 else None


def sample_equilateral(
    v: int, geometry: str = "plane", seed=None, *, rng=None, max_tries: int = 1000, noise=None, edge_range=None
):
    """Random convex equilateral polygon with ``v`` vertices.

    Turning angles are drawn around the regular value, then repaired so the
    polygon closes up; non-convex results are rejected.  Planar polygons have
    unit edges; spherical ones a random edge below ``2pi/v`` (or drawn from
    ``edge_range``).
    """
    if v < 3:
        raise ValueError("v must be at least 3")
    if geometry not in ("plane", "sphere"):
        raise ValueError("geometry must be 'plane' or 'sphere'")
    rng = rng if rng is not None else np.random.default_rng(seed)
    for _ in range(max_tries):
        amp = rng.uniform(0.0, 0.6) if noise is None else noise
        if geometry == "plane":
            tau0 = 2 * PI / v
            x0 = tau0 * (1 + amp * rng.standard_normal(v - 1))
            x = _repair(lambda x: _plane_walk(x)[1], x0)
            if x is None:
                continue
            last = 2 * PI - x.sum()
            turns = np.concatenate([x, [last]])
            if np.min(turns) <= 1e-6 or np.max(turns) >= PI - 1e-6:
                continue
            steps, _ = _plane_walk(x)
            pts = np.vstack([np.zeros(2), np.cumsum(steps, axis=0)[:-1]])
            if not is_convex_plane(pts):
                continue
            return EuclideanPolygon(pts)
        s = rng.uniform(*edge_range) if edge_range else rng.uniform(0.05, 0.97 * 2 * PI / v)
        sb = math.cos(PI / v) / math.cos(s / 2)
        if sb >= 1:
            continue
        tau0 = PI - 2 * math.asin(sb)
        x0 = tau0 * (1 + amp * rng.standard_normal(v - 1))
        # the end point must return to the north pole: two tangent coordinates
        x = _repair(lambda x: _sphere_walk(s, x)[1][:2], x0)
        if x is None:
            continue
        if np.min(x) <= 1e-6 or np.max(x) >= PI - 1e-6:
            continue
        pts, _, _ = _sphere_walk(s, x)
        try:
            return SphericalPolygon(pts)
        except DegeneratePolygonError:
            continue
    raise SamplerExhausted(f"no convex equilateral {v}-gon after {max_tries} tries")


def sample_convex(v: int, seed=None, *, rng=None, max_tries: int = 1000) -> SphericalPolygon:
    """Random convex spherical ``v``-gon inside a cap around the north pole."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    for _ in range(max_tries):
        cap = rng.uniform(0.1, 1.1)
        ang = np.sort(rng.uniform(0, 2 * PI, v))
        rad = math.tan(cap) * rng.uniform(0.55, 1.0, v)
        # gnomonic coordinates: straight lines are great circles
        g = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        if not is_convex_plane(g, tol=1e-6):
            continue
        pts = np.column_stack([g, np.ones(v)])
        try:
            P = SphericalPolygon(pts)
        except DegeneratePolygonError:
            continue
        if measure(P).edge_lengths.sum() < 2 * PI:
            return P
    raise SamplerExhausted(f"no convex spherical {v}-gon after {max_tries} tries")
