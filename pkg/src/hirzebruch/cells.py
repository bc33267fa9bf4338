"""The cell decomposition of RP^2 cut out by a real line arrangement.

Construction happens on the double cover S^2: every multiple point lifts to
an antipodal pair, every line to a great circle.  Points are ordered along
each circle and darts around each lifted vertex by exact sign tests in the
real embedding, faces are traced on the (orientable) sphere, and the result
is quotiented by the antipodal map.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Callable

from .arrangement import Arrangement, IntersectionLattice, hirzebruch_check, intersection_lattice
from .exact import FieldElement, cross, dot, real_sign

Dart = tuple[int, int, int]  # (line, arc index on the lifted circle, +1 forward / -1 backward)


@dataclass(frozen=True)
class Face:
    vertices: tuple[int, ...]  # cyclic, multiple-point indices
    edges: tuple[int, ...]  # cyclic, edge indices


@dataclass(frozen=True)
class Edge:
    line: int
    index: int  # position along the line, 0..m-1
    ends: tuple[int, int]


@dataclass(frozen=True)
class CellComplex:
    multiplicities: tuple[int, ...]
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...]
    line_order: tuple[tuple[int, ...], ...]  # cyclic order of points along each line
    vertex_edges: tuple[tuple[int, ...], ...]
    edge_faces: tuple[tuple[int, int], ...]
    vertex_faces: tuple[tuple[int, ...], ...]
    sectors: tuple[tuple[tuple[int, int], ...], ...]  # per vertex: (face, far end of ray) in rotation order

    @property
    def n_vertices(self) -> int:
        return len(self.multiplicities)

    @property
    def euler_char(self) -> int:
        return self.n_vertices - len(self.edges) + len(self.faces)

    @property
    def is_simplicial(self) -> bool:
        return all(len(f.vertices) == 3 for f in self.faces)

    def counts(self) -> dict[str, int]:
        return {"V": self.n_vertices, "E": len(self.edges), "F": len(self.faces), "euler_char": self.euler_char}


def _angle_cmp(sign: Callable[[FieldElement], int]):
    """Comparator on planar vectors (a, b) by polar angle in [0, 2pi)."""

    def half(v):
        a, b = v
        sb = sign(b)
        return 0 if sb > 0 or (sb == 0 and sign(a) > 0) else 1

    def cmp(v, w):
        hv, hw = half(v), half(w)
        if hv != hw:
            return hv - hw
        s = sign(v[0] * w[1] - v[1] * w[0])
        return -s

    return cmp


def cell_complex(arr: Arrangement, lattice: IntersectionLattice | None = None) -> CellComplex:
    if not arr.is_real:
        raise ValueError("cell complex requires a real arrangement")
    if not arr.field.is_real:
        raise ValueError(f"{arr.field.name}: embedding is not real")
    lat = lattice or intersection_lattice(arr)
    P = [mp.point.coords for mp in lat.points]
    N = [l.coords for l in arr.lines]
    nl = len(N)
    by_angle = cmp_to_key(_angle_cmp(real_sign))

    # ordered lifted vertices (point, sign) around each great circle
    circles: list[list[tuple[int, int]]] = []
    pos: list[dict[tuple[int, int], int]] = []
    for i in range(nl):
        on = lat.per_line[i]
        u = P[on[0]]
        v = cross(N[i], u)
        lifted = [(j, s) for j in on for s in (1, -1)]
        coords = {}
        for j, s in lifted:
            a, b = dot(P[j], u), dot(P[j], v)
            coords[(j, s)] = (a, b) if s > 0 else (-a, -b)
        order = sorted(lifted, key=lambda js: by_angle(coords[js]))
        m = len(on)
        for k in range(m):
            j, s = order[k]
            assert order[k + m] == (j, -s), "antipodal structure violated"
        circles.append(order)
        pos.append({js: k for k, js in enumerate(order)})

    def head(d: Dart) -> tuple[int, int]:
        i, k, e = d
        c = circles[i]
        return c[(k + 1) % len(c)] if e > 0 else c[k]

    # rotation system at each lifted vertex, counterclockwise seen from outside
    rotation: dict[tuple[int, int], list[Dart]] = {}
    for j, mp in enumerate(lat.points):
        for s in (1, -1):
            w = tuple(x * s for x in P[j])
            darts = []
            for i in mp.lines:
                k = pos[i][(j, s)]
                t = cross(N[i], w)
                darts.append(((i, k, 1), t))
                darts.append(((i, (k - 1) % len(circles[i]), -1), tuple(-x for x in t)))
            r = darts[0][1]
            keyed = {d: (dot(t, r), dot(w, cross(r, t))) for d, t in darts}
            rotation[(j, s)] = sorted(keyed, key=lambda d: by_angle(keyed[d]))
    rot_index = {d: (vtx, idx) for vtx, ds in rotation.items() for idx, d in enumerate(ds)}

    def next_left(d: Dart) -> Dart:
        i, k, e = d
        vtx, idx = rot_index[(i, k, -e)]
        ds = rotation[vtx]
        return ds[(idx - 1) % len(ds)]

    all_darts = sorted(rot_index)
    face_of: dict[Dart, int] = {}
    sphere_faces: list[list[Dart]] = []
    for d0 in all_darts:
        if d0 in face_of:
            continue
        cyc, d = [], d0
        while d not in face_of:
            face_of[d] = len(sphere_faces)
            cyc.append(d)
            d = next_left(d)
        assert d == d0
        sphere_faces.append(cyc)
    v_s, e_s, f_s = 2 * len(lat.points), len(all_darts) // 2, len(sphere_faces)
    assert v_s - e_s + f_s == 2, (v_s, e_s, f_s)

    # antipodal quotient
    mlen = [len(lat.per_line[i]) for i in range(nl)]
    edge_id: dict[tuple[int, int], int] = {}
    edges: list[Edge] = []
    line_order = []
    for i in range(nl):
        m = mlen[i]
        line_order.append(tuple(circles[i][k][0] for k in range(m)))
        for k in range(m):
            edge_id[(i, k)] = len(edges)
            edges.append(Edge(i, k, (circles[i][k][0], circles[i][(k + 1) % (2 * m)][0])))

    def rp_edge(d: Dart) -> int:
        i, k, _ = d
        return edge_id[(i, k % mlen[i])]

    def anti_rev(d: Dart) -> Dart:
        i, k, e = d
        return (i, (k + mlen[i]) % (2 * mlen[i]), -e)

    rp_face_of_sphere: dict[int, int] = {}
    faces: list[Face] = []
    for f, cyc in enumerate(sphere_faces):
        if f in rp_face_of_sphere:
            continue
        g = face_of[anti_rev(cyc[0])]
        assert g != f and all(face_of[anti_rev(d)] == g for d in cyc)
        rp_face_of_sphere[f] = rp_face_of_sphere[g] = len(faces)
        # the tail of a dart is the head of its predecessor in the cycle
        verts = tuple(head(cyc[t - 1])[0] for t in range(len(cyc)))
        faces.append(Face(verts, tuple(rp_edge(d) for d in cyc)))

    edge_faces: list[list[int]] = [[] for _ in edges]
    for fi, face in enumerate(faces):
        for e in face.edges:
            edge_faces[e].append(fi)
    for e, fs in enumerate(edge_faces):
        assert len(fs) == 2, f"edge {e} borders {len(fs)} faces"

    nv = len(lat.points)
    vertex_edges: list[list[int]] = [[] for _ in range(nv)]
    for ei, e in enumerate(edges):
        for x in set(e.ends):
            vertex_edges[x].append(ei)
    vertex_faces: list[list[int]] = [[] for _ in range(nv)]
    sectors = []
    for j in range(nv):
        ds = rotation[(j, 1)]
        sec = tuple((rp_face_of_sphere[face_of[d]], head(d)[0]) for d in ds)
        sectors.append(sec)
        vertex_faces[j] = sorted({f for f, _ in sec})

    cc = CellComplex(
        multiplicities=tuple(mp.multiplicity for mp in lat.points),
        edges=tuple(edges),
        faces=tuple(faces),
        line_order=tuple(line_order),
        vertex_edges=tuple(tuple(x) for x in vertex_edges),
        edge_faces=tuple((a, b) for a, b in edge_faces),
        vertex_faces=tuple(tuple(x) for x in vertex_faces),
        sectors=tuple(sectors),
    )
    assert cc.euler_char == 1
    return cc


@dataclass(frozen=True)
class Star:
    center: int
    multiplicity: int
    sectors: tuple[int, ...]  # face ids in cyclic order
    boundary: tuple[int, ...]  # P_1..P_{2mu}: far ends of the 2mu rays, cyclic


def star(cc: CellComplex, vertex: int) -> Star:
    if not 0 <= vertex < cc.n_vertices:
        raise KeyError(f"unknown vertex {vertex}")
    sec = cc.sectors[vertex]
    mu = cc.multiplicities[vertex]
    assert len(sec) == 2 * mu
    return Star(vertex, mu, tuple(f for f, _ in sec), tuple(p for _, p in sec))


def _alternates(mults: list[int]) -> bool:
    """Cyclic sequence alternating 2,3,2,3,... (either phase)."""
    if len(mults) % 2:
        return False
    for phase in (0, 1):
        if all(m == (2 if (i + phase) % 2 == 0 else 3) for i, m in enumerate(mults)):
            return True
    return False


ALLOWED_FACE_TYPES = {(2, 3, 3), (2, 3, 4), (2, 3, 5)}


def structural_predicates(arr: Arrangement, lattice: IntersectionLattice | None = None, cc: CellComplex | None = None) -> dict:
    """Combinatorial consequences of the flat cone metric on a real Hirzebruch arrangement.

    Raises ``ValueError`` if ``arr`` does not have the Hirzebruch property.
    For ``n == 1`` the predicates that need ``n >= 2`` are listed under
    ``exempt`` and do not count towards ``all_pass``.
    """
    lat = lattice or intersection_lattice(arr)
    hz = hirzebruch_check(lat)
    if not hz.passed:
        raise ValueError(f"structural predicates need a Hirzebruch arrangement ({hz.reason})")
    cc = cc or cell_complex(arr, lat)
    mu = cc.multiplicities

    face_types = sorted({tuple(sorted(mu[v] for v in f.vertices)) for f in cc.faces})
    adjacent = {tuple(sorted(e.ends)) for e in cc.edges if e.ends[0] != e.ends[1]}
    alternation = {}
    for v in range(cc.n_vertices):
        if mu[v] in (4, 5):
            st = star(cc, v)
            alternation[v] = _alternates([mu[p] for p in st.boundary])

    preds = {
        "simplicial": cc.is_simplicial,
        "no_adjacent_double_points": all(not (mu[a] == 2 and mu[b] == 2) for a, b in adjacent),
        "max_multiplicity_le_5": max(mu) <= 5,
        "star_alternation_mu45": all(alternation.values()),
        "face_types_allowed": all(t in ALLOWED_FACE_TYPES for t in face_types),
        "no_edge_between_mu_ge_4": all(not (mu[a] >= 4 and mu[b] >= 4) for a, b in adjacent),
    }
    exempt = ["no_adjacent_double_points", "face_types_allowed"] if hz.n == 1 else []
    return {
        "n": hz.n,
        "predicates": preds,
        "exempt": exempt,
        "face_types": [list(t) for t in face_types],
        "all_pass": all(v for k, v in preds.items() if k not in exempt),
    }
