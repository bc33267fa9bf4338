"""Seeded property campaign for the polygon inequalities.

Each statement gets its own child generator spawned from the master seed, so
results do not depend on the order statements run in.
"""

from __future__ import annotations

import numpy as np

from .spherical import (
    PI,
    TOL,
    SphericalPolygon,
    check_consecutive_angles,
    check_consecutive_edges,
    deformation_descent,
    double,
    dual,
    flatten,
    measure,
    pentagon_refinement,
    sample_convex,
    sample_equilateral,
)

STATEMENTS = (
    "equiangular_edge_sums",
    "equilateral_angle_sums_sphere",
    "equilateral_angle_sums_plane",
    "pentagon_refinement",
    "flatten_comparison",
    "deformation_descent",
)


class _Tally:
    def __init__(self):
        self.samples = 0
        self.violations = 0
        self.inconclusive = 0
        self.worst = np.inf
        self.extra: dict = {}

    def add(self, margin: float, tol: float, strict: bool = True):
        self.samples += 1
        self.worst = min(self.worst, margin)
        if margin < -tol:
            self.violations += 1
        elif strict and margin <= tol:
            self.inconclusive += 1

    def as_dict(self) -> dict:
        d = {
            "samples": self.samples,
            "violations": self.violations,
            "inconclusive": self.inconclusive,
            "worst_margin": float(self.worst),
        }
        d.update(self.extra)
        return d


def _dual_error(P: SphericalPolygon) -> float:
    """Mismatch of dual(dual(P)) with P (vertex set, cyclically aligned) and of the exchange rule."""
    Q = dual(dual(P))
    k = len(P)
    vs = min(np.max(np.linalg.norm(np.roll(Q.vertices, s, axis=0) - P.vertices, axis=1)) for s in range(k))
    mp, md = measure(P), measure(dual(P))
    ex = max(
        np.max(np.abs(md.angles - (PI - mp.edge_lengths))),
        np.max(np.abs(md.edge_lengths - (PI - np.roll(mp.angles, -1)))),
    )
    return float(max(vs, ex))


def run_campaign(samples: int = 1000, seed: int = 42, tol: float = TOL, v_range=(3, 8)) -> dict:
    ss = np.random.SeedSequence(seed)
    rngs = dict(zip(STATEMENTS, (np.random.default_rng(c) for c in ss.spawn(len(STATEMENTS)))))
    tallies = {s: _Tally() for s in STATEMENTS}
    worst_dual = 0.0
    worst_gb = 0.0

    def sphere_bookkeeping(P: SphericalPolygon):
        nonlocal worst_dual, worst_gb
        worst_dual = max(worst_dual, _dual_error(P))
        worst_gb = max(worst_gb, abs(double(P).gauss_bonnet_residual))

    lo, hi = v_range

    # equiangular polygons arise as duals of equilateral ones
    r = rngs["equiangular_edge_sums"]
    for _ in range(samples):
        P = dual(sample_equilateral(int(r.integers(lo, hi + 1)), "sphere", rng=r))
        sphere_bookkeeping(P)
        tallies["equiangular_edge_sums"].add(check_consecutive_edges(P, tol).worst_margin, tol)

    r = rngs["equilateral_angle_sums_sphere"]
    for _ in range(samples):
        P = sample_equilateral(int(r.integers(lo, hi + 1)), "sphere", rng=r)
        sphere_bookkeeping(P)
        tallies["equilateral_angle_sums_sphere"].add(check_consecutive_angles(P, tol).worst_margin, tol)

    r = rngs["equilateral_angle_sums_plane"]
    for _ in range(samples):
        E = sample_equilateral(int(r.integers(lo, hi + 1)), "plane", rng=r)
        tallies["equilateral_angle_sums_plane"].add(check_consecutive_angles(E, tol).worst_margin, tol, strict=False)

    # pentagons: keep drawing until `samples` of them satisfy the hypothesis,
    # alternating the equiangular and the equilateral form
    r = rngs["pentagon_refinement"]
    t = tallies["pentagon_refinement"]
    vacuous = 0
    forms = {"equiangular": 0, "equilateral": 0}
    while t.samples < samples:
        Q = sample_equilateral(5, "sphere", rng=r, edge_range=(0.05, 0.75))
        P = dual(Q) if t.samples % 2 == 0 else Q
        sphere_bookkeeping(P)
        rep = pentagon_refinement(P, tol)
        if rep["status"] == "vacuous":
            vacuous += 1
            if vacuous > 100 * samples:
                raise RuntimeError("pentagon hypothesis almost never met")
            continue
        forms[rep["form"]] += 1
        t.add(rep["margin"], tol)
    t.extra = {"vacuous_draws": vacuous, "forms": forms}

    r = rngs["flatten_comparison"]
    t = tallies["flatten_comparison"]
    worst_edge = 0.0
    nonconvex = 0
    for _ in range(samples):
        P = sample_convex(int(r.integers(lo, hi + 1)), rng=r)
        sphere_bookkeeping(P)
        f = flatten(P)
        worst_edge = max(worst_edge, f.edge_error)
        # both halves of the comparison: edges kept and every angle strictly smaller
        t.add(f.min_margin if f.edge_error <= tol else -f.edge_error, tol)
        nonconvex += not f.convex
    t.extra = {"worst_edge_error": worst_edge, "nonconvex_outputs": nonconvex}

    r = rngs["deformation_descent"]
    t = tallies["deformation_descent"]
    for _ in range(samples):
        E = sample_equilateral(int(r.integers(max(lo, 5), max(hi, 5) + 1)), "plane", rng=r)
        d = deformation_descent(E)
        t.add(d.magnitude, tol)

    stmts = {k: v.as_dict() for k, v in tallies.items()}
    ok = all(v["violations"] == 0 and v["inconclusive"] == 0 for v in stmts.values())
    ok = ok and worst_dual < tol and worst_gb < tol
    return {
        "samples_per_statement": samples,
        "seed": seed,
        "tol": tol,
        "statements": stmts,
        "worst_dual_involution_error": worst_dual,
        "worst_gauss_bonnet_residual": worst_gb,
        "pass": bool(ok),
    }

