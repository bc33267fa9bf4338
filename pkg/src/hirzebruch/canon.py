"""Canonical forms of incidence structures via nauty.

Structures are encoded as vertex-coloured graphs (one colour class per node
kind); two structures are isomorphic iff their certificates agree.
"""

from __future__ import annotations

import hashlib
from typing import Sequence

import pynauty


def _certificate(classes: Sequence[int], edges: list[tuple[int, int]]) -> str:
    total = sum(classes)
    adj: dict[int, list[int]] = {v: [] for v in range(total)}
    for a, b in edges:
        adj[a].append(b)
    coloring, start = [], 0
    for size in classes:
        coloring.append(set(range(start, start + size)))
        start += size
    g = pynauty.Graph(total, directed=False, adjacency_dict=adj, vertex_coloring=coloring)
    cert = pynauty.certificate(g)
    h = hashlib.sha256()
    h.update(repr(tuple(classes)).encode())
    h.update(cert)
    return h.hexdigest()


def incidence_canonical(n_lines: int, points: Sequence[Sequence[int]]) -> str:
    """Canonical hash of a point/line incidence structure (lines 0..n_lines-1)."""
    edges = [(n_lines + p, l) for p, ls in enumerate(points) for l in ls]
    return _certificate((n_lines, len(points)), edges)


def complex_canonical(
    n_lines: int,
    points: Sequence[Sequence[int]],
    segments: Sequence[tuple[int, int, int]],
    faces: Sequence[Sequence[int]],
) -> str:
    """Canonical hash of a cell complex cut out by lines.

    ``segments`` holds ``(line, point_a, point_b)``; ``faces`` lists segment
    indices on each face boundary.
    """
    P, S = len(points), len(segments)
    off_p, off_s, off_f = n_lines, n_lines + P, n_lines + P + len(segments)
    edges = [(off_p + p, l) for p, ls in enumerate(points) for l in ls]
    for s, (l, a, b) in enumerate(segments):
        edges += [(off_s + s, l), (off_s + s, off_p + a), (off_s + s, off_p + b)]
    for f, segs in enumerate(faces):
        edges += [(off_f + f, off_s + s) for s in set(segs)]
    return _certificate((n_lines, P, S, len(faces)), edges)
