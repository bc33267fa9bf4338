"""Exhaustive search for combinatorial types with the Hirzebruch counting property.

A type is swept as a wiring diagram: the line at infinity is a generic
pseudoline, the ``3n`` wires enter bottom-to-top in label order and leave in
reverse order, and each multiple point of multiplicity ``k`` reverses a
block of ``k`` consecutive wires that have not crossed yet.  Every wire must
pass through exactly ``n + 1`` points.

Moves on disjoint blocks commute; of two consecutive disjoint moves only the
one with the lower block first is explored.  Remaining duplicates (other
sweep orders, other lines at infinity, relabelings) are removed by a nauty
canonical form of the resulting cell complex.

``paper_pruned`` mode adds the restrictions that a flat cone metric forces on
straight-line arrangements (multiplicities at most 5, no two adjacent double
points, no edge between points of multiplicity >= 4, alternating stars at
points of multiplicity 4 and 5, triangular faces of type (2, 3, d)).  These
are only valid for straight lines, so that mode classifies
straight-realizable types only.
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

from .arrangement import Arrangement, intersection_lattice
from .canon import complex_canonical, incidence_canonical

MODES = ("counting_only", "paper_pruned")
ALLOWED_FACES = ((2, 3, 3), (2, 3, 4), (2, 3, 5))
SOUNDNESS = {
    "counting_only": "complete for pseudoline types with the counting property",
    "paper_pruned": "complete for straight-line realizable types only; pruning rules do not hold for pseudolines",
}


class BudgetExhausted(Exception):
    pass


def t_profile_solver(n: int, kmax: int = 5) -> list[dict[int, int]]:
    """Nonnegative (t_2..t_kmax) with sum k t_k = 3n(n+1) and sum C(k,2) t_k = C(3n,2)."""
    if n < 1:
        raise ValueError("n must be positive")
    A, B = 3 * n * (n + 1), comb(3 * n, 2)
    ks = list(range(3, kmax + 1))
    out = []

    def rec(i, a, b, acc):
        if i == len(ks):
            if a % 2 == 0 and b == a // 2:  # the rest are double points: 2 t_2 = a, t_2 = b
                t = {2: a // 2} if a else {}
                t.update({k: v for k, v in acc.items() if v})
                out.append(dict(sorted(t.items())))
            return
        k = ks[i]
        for t in range(min(a // k, b // comb(k, 2)) + 1):
            acc[k] = t
            rec(i + 1, a - k * t, b - comb(k, 2) * t, acc)
        acc.pop(k, None)

    rec(0, A, B, {})
    return sorted(out, key=lambda t: sorted(t.items()))


def _sub_multisets(t):
    out = set()
    for mask in range(1 << len(t)):
        out.add(tuple(x for b, x in enumerate(t) if mask >> b & 1))
    return out


# vertex multiplicities (sorted) that can still be completed to an allowed face type
_PARTIAL_FACES = frozenset().union(*(_sub_multisets(t) for t in ALLOWED_FACES))


def _fits_allowed(mults) -> bool:
    return tuple(sorted(mults)) in _PARTIAL_FACES


@dataclass(frozen=True)
class CombinatorialType:
    n: int
    points: tuple[tuple[int, ...], ...]  # incident lines per point
    wires: tuple[tuple[int, ...], ...]  # cyclic point sequence along each line
    faces: tuple[tuple[int, ...], ...]  # vertex sets
    t_profile: dict[int, int]
    canonical: str
    incidence_canonical: str

    @property
    def n_lines(self) -> int:
        return len(self.wires)

    def hirzebruch_counts_ok(self) -> bool:
        nl = self.n_lines
        pairs = Counter((a, b) for ls in self.points for i, a in enumerate(ls) for b in ls[i + 1 :])
        return (
            nl == 3 * self.n
            and all(len(w) == self.n + 1 for w in self.wires)
            and len(pairs) == comb(nl, 2)
            and all(v == 1 for v in pairs.values())
        )

    def summary(self) -> dict:
        return {
            "canonical": self.canonical,
            "incidence_canonical": self.incidence_canonical,
            "t_profile": {str(k): v for k, v in self.t_profile.items()},
            "points": [list(p) for p in self.points],
            "wires": [list(w) for w in self.wires],
            "faces": len(self.faces),
        }


def _build_type(n: int, N: int, moves: list[tuple[int, int]]) -> tuple[CombinatorialType, dict]:
    """Replay a complete sweep and assemble the RP^2 cell complex."""
    perm = list(range(N))
    points: list[tuple[int, ...]] = []
    wires: list[list[int]] = [[] for _ in range(N)]
    rays: list[list[tuple[int, int]]] = []  # per point: (wire, side) counterclockwise, side +1 right / -1 left
    seg_now = [0] * N
    face_verts: list[set[int]] = []
    face_segs: list[set[tuple[int, int]]] = []

    def new_face():
        face_verts.append(set())
        face_segs.append(set())
        return len(face_verts) - 1

    tb = new_face()
    gap = {-1: tb, N - 1: tb}
    left_of = {}
    for p in range(N - 1):
        gap[p] = new_face()
        left_of[p] = gap[p]

    def record(p):
        f = gap[p]
        if p >= 0:
            face_segs[f].add((perm[p], seg_now[perm[p]]))
        if p + 1 <= N - 1:
            face_segs[f].add((perm[p + 1], seg_now[perm[p + 1]]))

    for p in range(-1, N):
        record(p)
    for v, (i, j) in enumerate(moves):
        block = perm[i : j + 1]
        points.append(tuple(sorted(block)))
        for p in range(i - 1, j + 1):
            face_verts[gap[p]].add(v)
        # counterclockwise from the lower right: right rays upward, then left rays downward
        rays.append([(w, 1) for w in reversed(block)] + [(w, -1) for w in reversed(block)])
        perm[i : j + 1] = block[::-1]
        for w in block:
            wires[w].append(v)
            seg_now[w] += 1
        for p in range(i, j):
            gap[p] = new_face()
            face_verts[gap[p]].add(v)
        for p in range(i - 1, j + 1):
            record(p)
    assert perm == list(range(N))[::-1]
    # glue the two ends of each face crossed by the line at infinity
    alias = {}
    for q in range(N - 1):
        f, g = gap[q], left_of[N - 2 - q]
        face_verts[g] |= face_verts[f]
        face_segs[g] |= face_segs[f]
        alias[f] = g
    faces = [k for k in range(len(face_verts)) if k not in alias]

    m = n + 1
    seg_index = {}
    segments = []
    for w in range(N):
        assert len(wires[w]) == m
        for k in range(m):
            seg_index[(w, k)] = len(segments)
            segments.append((w, wires[w][k - 1], wires[w][k]))
    # a wire's segment number m is the wrap-around segment 0 seen from the right end
    fsegs = [[seg_index[(w, k % m)] for w, k in sorted(face_segs[f])] for f in faces]
    fverts = [tuple(sorted(face_verts[f])) for f in faces]
    V, E, F = len(points), len(segments), len(faces)
    assert V - E + F == 1, (V, E, F)

    t = Counter(len(p) for p in points)
    ct = CombinatorialType(
        n=n,
        points=tuple(points),
        wires=tuple(tuple(w) for w in wires),
        faces=tuple(fverts),
        t_profile=dict(sorted(t.items())),
        canonical=complex_canonical(N, points, segments, fsegs),
        incidence_canonical=incidence_canonical(N, points),
    )
    return ct, {"rays": rays}


def combinatorial_predicates(ct: CombinatorialType, rays) -> dict[str, bool]:
    """Structural predicates evaluated on a swept type (same meaning as for real arrangements)."""
    mu = [len(p) for p in ct.points]
    pos_on = [{v: k for k, v in enumerate(w)} for w in ct.wires]
    adjacent = set()
    for w in ct.wires:
        for k in range(len(w)):
            adjacent.add(tuple(sorted((w[k - 1], w[k]))))

    def neighbour(v, wire, side):
        seq = ct.wires[wire]
        k = pos_on[wire][v]
        return seq[(k + side) % len(seq)]

    alternation = True
    for v, m in enumerate(mu):
        if m in (4, 5):
            ms = [mu[neighbour(v, w, s)] for w, s in rays[v]]
            alternation &= all({ms[i], ms[i - 1]} == {2, 3} for i in range(len(ms)))
    face_types = {tuple(sorted(mu[v] for v in f)) for f in ct.faces}
    return {
        "simplicial": all(len(f) == 3 for f in ct.faces),
        "no_adjacent_double_points": all(not (mu[a] == 2 and mu[b] == 2) for a, b in adjacent),
        "max_multiplicity_le_5": max(mu) <= 5,
        "star_alternation_mu45": alternation,
        "face_types_allowed": face_types <= set(ALLOWED_FACES),
        "no_edge_between_mu_ge_4": all(not (mu[a] >= 4 and mu[b] >= 4) for a, b in adjacent),
    }


class _Sweep:
    def __init__(self, n: int, mode: str, budget: int | None):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.n, self.N, self.mode = n, 3 * n, mode
        self.pruned = mode == "paper_pruned" and n >= 2
        # each point on a wire uses up at least one of its 3n - 1 partners
        self.kmax = 5 if self.pruned else min(2 * n, 3 * n)
        self.budget = budget
        self.nodes = 0
        self.completed = 0
        self.found: dict[str, CombinatorialType] = {}
        self.rejected_final = 0
        N = self.N
        self.perm = list(range(N))
        self.cnt = [0] * N
        self.rem = [N - 1] * N
        self.first_mu = [0] * N
        self.last_mu = [0] * N
        self.moves: list[tuple[int, int]] = []
        # per gap: [kind, mults]; kind 'L' left piece, 'B' born inside, 'T' top/bottom (shared list)
        self.tb: list[int] = []
        self.gaps: dict[int, list] = {-1: ["T", self.tb], N - 1: ["T", self.tb]}
        for p in range(N - 1):
            self.gaps[p] = ["L", []]
        self.left_pieces: dict[int, list[int]] = {}
        profiles = t_profile_solver(n, self.kmax)
        self.t_cap = {k: max(t.get(k, 0) for t in profiles) for k in range(2, self.kmax + 1)}
        self.t_now = Counter()

    # -- move generation ----------------------------------------------------------
    def candidate_moves(self):
        perm, N = self.perm, self.N
        prev = self.moves[-1] if self.moves else None
        out = []
        for i in range(N - 1):
            j = i
            while j + 1 < N and perm[j + 1] > perm[j] and j + 1 - i + 1 <= self.kmax:
                j += 1
                if prev is not None and j < prev[0]:
                    continue  # disjoint and below the previous block: explored in the other order
                out.append((i, j))
        return out

    def _wire_ok(self, w: int, k: int) -> bool:
        c = self.cnt[w] + 1
        r = self.rem[w] - (k - 1)
        s = self.n + 1 - c
        if s < 0:
            return False
        if r == 0:
            return s == 0
        return 1 <= s <= r and s * (self.kmax - 1) >= r

    def _faces_ok(self, i: int, j: int, k: int) -> bool:
        N = self.N
        for p in range(i, j):
            kind, ms = self.gaps[p]
            ms2 = ms + [k]
            if kind == "B":
                if len(ms2) != 3 or tuple(sorted(ms2)) not in ALLOWED_FACES:
                    return False
            elif len(ms2) > 2 or not _fits_allowed(ms2):  # left piece; its right half adds >= 1
                return False
        for p in (i - 1, j):
            kind, ms = self.gaps[p]
            ms2 = ms + [k]
            if len(ms2) > (3 if kind == "T" else 2) or not _fits_allowed(ms2):
                return False
        return True

    def _local_ok(self, block: list[int], k: int) -> bool:
        for w in block:
            if self.cnt[w]:
                m = self.last_mu[w]
                if (m == 2 and k == 2) or (m >= 4 and k >= 4):
                    return False
            if self.cnt[w] + 1 == self.n + 1 and self.cnt[w]:
                # last point on the wire also neighbours the first one through infinity
                m = self.first_mu[w]
                if (m == 2 and k == 2) or (m >= 4 and k >= 4):
                    return False
        if k >= 4:
            ms = [self.last_mu[w] for w in block if self.cnt[w]]
            if len(ms) == k and any(ms[a] == ms[a + 1] or ms[a] not in (2, 3) for a in range(k - 1)):
                return False
        return True

    def apply(self, i: int, j: int) -> bool:
        """Apply a move if it survives pruning; returns False (state untouched) otherwise."""
        block = self.perm[i : j + 1]
        k = len(block)
        if self.t_now[k] + 1 > self.t_cap.get(k, 0):
            return False
        for w in block:
            if not self._wire_ok(w, k):
                return False
        if self.pruned and not (self._local_ok(block, k) and self._faces_ok(i, j, k)):
            return False
        old_gaps = [self.gaps[p] for p in range(i - 1, j + 1)]
        old_first = [self.first_mu[w] for w in block]
        old_last = [self.last_mu[w] for w in block]
        self.t_now[k] += 1
        for w in block:
            self.cnt[w] += 1
            self.rem[w] -= k - 1
            if self.cnt[w] == 1:
                self.first_mu[w] = k
            self.last_mu[w] = k
        t_added = False
        for p in (i - 1, j):
            kind, ms = self.gaps[p]
            if kind == "T":
                if not t_added:  # top and bottom are one face; count the vertex once
                    ms.append(k)
                    t_added = True
            else:
                self.gaps[p] = [kind, ms + [k]]
        for p in range(i, j):
            kind, ms = self.gaps[p]
            if kind == "L":
                self.left_pieces[p] = ms + [k]
            self.gaps[p] = ["B", [k]]
        self.perm[i : j + 1] = block[::-1]
        self.moves.append((i, j))
        self._undo.append((i, j, block, old_gaps, old_first, old_last, t_added))
        return True

    def revert(self):
        i, j, block, old_gaps, old_first, old_last, t_added = self._undo.pop()
        k = len(block)
        self.moves.pop()
        self.perm[i : j + 1] = block
        self.t_now[k] -= 1
        for w, f, l in zip(block, old_first, old_last):
            self.cnt[w] -= 1
            self.rem[w] += k - 1
            self.first_mu[w] = f
            self.last_mu[w] = l
        if t_added:
            self.tb.pop()
        for p, g in zip(range(i - 1, j + 1), old_gaps):
            self.gaps[p] = g
        for p in range(i, j):
            if old_gaps[p - i + 1][0] == "L":
                self.left_pieces.pop(p, None)

    # -- driver -------------------------------------------------------------------
    def _finish(self):
        self.completed += 1
        N = self.N
        if self.pruned:
            if len(self.tb) != 3 or tuple(sorted(self.tb)) not in ALLOWED_FACES:
                self.rejected_final += 1
                return
            for q in range(N - 1):
                ms = self.left_pieces[N - 2 - q] + self.gaps[q][1]
                if len(ms) != 3 or tuple(sorted(ms)) not in ALLOWED_FACES:
                    self.rejected_final += 1
                    return
        ct, extra = _build_type(self.n, N, list(self.moves))
        assert ct.hirzebruch_counts_ok()
        if self.pruned:
            preds = combinatorial_predicates(ct, extra["rays"])
            if not all(preds.values()):
                self.rejected_final += 1
                return
        self.found.setdefault(ct.canonical, ct)

    def _rec(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExhausted
        if all(c == self.n + 1 for c in self.cnt):
            if self.perm == list(range(self.N))[::-1]:
                self._finish()
            return
        for i, j in self.candidate_moves():
            if self.apply(i, j):
                self._rec()
                self.revert()

    def run(self, first: tuple[int, int] | None = None) -> bool:
        """Explore everything (or the subtree under ``first``); True if finished within budget."""
        self._undo: list = []
        try:
            if first is None:
                self._rec()
            elif self.apply(*first):
                self._rec()
        except BudgetExhausted:
            return False
        return True


def _subtree(args):
    n, mode, budget, first = args
    s = _Sweep(n, mode, budget)
    done = s.run(first)
    return done, s.nodes, s.completed, s.rejected_final, list(s.found.values())


@dataclass
class SearchResult:
    n: int
    mode: str
    types: list[CombinatorialType]
    nodes: int
    completed_diagrams: int
    rejected_final: int
    exhausted: bool
    jobs: int
    wall_time: float
    profiles: list[dict[int, int]] = field(default_factory=list)

    def _status(self, found: bool) -> str:
        if found:
            return "found"
        if self.exhausted:
            return "not reached"
        return "excluded by pruning" if self.mode == "paper_pruned" and self.n >= 2 else "no wiring diagram"

    @staticmethod
    def _realizability(names: list[str] | None) -> str:
        if names:
            return "realized by " + ", ".join(names)
        return "combinatorial, realizability unknown"

    def certificate(self, matches: dict[str, list[str]] | None = None, timings: bool = True) -> dict:
        found_profiles = {tuple(sorted(t.t_profile.items())) for t in self.types}
        prof = []
        for p in self.profiles:
            key = tuple(sorted(p.items()))
            prof.append(
                {
                    "t_profile": {str(k): v for k, v in p.items()},
                    "status": self._status(key in found_profiles),
                }
            )
        cert = {
            "schema": "hirzebruch.search-certificate/1",
            "n": self.n,
            "mode": self.mode,
            "soundness": SOUNDNESS[self.mode] if not (self.mode == "paper_pruned" and self.n == 1) else "pruning not applied for n = 1",
            "nodes": self.nodes,
            "completed_diagrams": self.completed_diagrams,
            "rejected_at_completion": self.rejected_final,
            "types_found": len(self.types),
            "exhausted_budget": self.exhausted,
            "profiles": prof,
            "types": [
                t.summary() | {"realizability": self._realizability((matches or {}).get(t.canonical))}
                for t in self.types
            ],
            "catalog_matches": matches or {},
            "seed_independent": True,
        }
        if timings:
            cert["wall_time_s"] = round(self.wall_time, 3)
            cert["jobs"] = self.jobs
        return cert


def enumerate_types(n: int, mode: str = "counting_only", *, jobs: int = 1, budget: int | None = None) -> SearchResult:
    """All combinatorial types with 3n lines and n+1 points per line, up to isomorphism."""
    if n < 1:
        raise ValueError("n must be positive")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    t0 = time.perf_counter()
    root = _Sweep(n, mode, budget)
    profiles = t_profile_solver(n, root.kmax)
    if jobs <= 1:
        done = root.run()
        nodes, completed, rej, found = root.nodes, root.completed, root.rejected_final, root.found
    else:
        firsts = root.candidate_moves()
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_subtree, [(n, mode, budget, f) for f in firsts]))
        done = all(p[0] for p in parts)
        nodes = 1 + sum(p[1] for p in parts)
        completed = sum(p[2] for p in parts)
        rej = sum(p[3] for p in parts)
        found = {}
        for p in parts:
            for t in p[4]:
                found.setdefault(t.canonical, t)
        if budget is not None and nodes > budget:
            done = False
    types = [found[k] for k in sorted(found)]
    return SearchResult(n, mode, types, nodes, completed, rej, not done, jobs, time.perf_counter() - t0, profiles)


def arrangement_incidence_canonical(arr: Arrangement) -> str:
    lat = intersection_lattice(arr)
    return incidence_canonical(len(arr.lines), [p.lines for p in lat.points])


def iso_match(ct: CombinatorialType, arr: Arrangement) -> bool:
    """Do the type and the arrangement have isomorphic point/line incidences?"""
    if len(arr.lines) != ct.n_lines:
        return False
    return arrangement_incidence_canonical(arr) == ct.incidence_canonical
