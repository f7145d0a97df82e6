"""Newton polygons and the parity criteria for L^2 boundedness."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .poly import Polynomial2, extract_Pp0

Pair = tuple[int, int]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[Pair, ...]

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)


def _cross(o: Pair, a: Pair, b: Pair) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def undominated(points: Iterable[Pair]) -> list[Pair]:
    """Points not coordinatewise dominated by another point, sorted by p."""
    best: dict[int, int] = {}
    for p, q in points:
        if p in best:
            best[p] = min(best[p], q)
        else:
            best[p] = q
    out: list[Pair] = []
    qmin = None
    for p in sorted(best):
        q = best[p]
        if qmin is None or q < qmin:
            out.append((p, q))
            qmin = q
    return out


def newton_polygon(delta: Iterable[Pair]) -> NewtonPolygon:
    """Vertices of the convex hull of the union of quadrants (p, q) + R_+^2.

    Integer cross products only; collinear interior points are dropped.
    """
    pts = []
    for pt in delta:
        p, q = pt
        if int(p) != p or int(q) != q or p < 0 or q < 0:
            raise ValueError(f"exponent pair {pt!r} is not a nonnegative integer pair")
        pts.append((int(p), int(q)))
    if not pts:
        raise ValueError("empty support has no Newton polygon")
    chain: list[Pair] = []
    for pt in undominated(pts):
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], pt) <= 0:
            chain.pop()
        chain.append(pt)
    return NewtonPolygon(tuple(chain))


def _good_euclidean(alpha: tuple[int, ...], n: int) -> bool:
    return sum(1 for a in alpha if a % 2 == 0) >= n - 2


def euclidean_witness(delta: Iterable[tuple[int, ...]], n: int = 3):
    """First exponent (in sorted order) with fewer than n - 2 even entries."""
    if n < 2:
        raise ValueError("n must be at least 2")
    for alpha in sorted(tuple(a) for a in delta):
        if len(alpha) != n - 1:
            raise ValueError(f"exponent {alpha!r} should have {n - 1} entries")
        if not _good_euclidean(alpha, n):
            return alpha
    return None


def classify_uniform_euclidean(delta: Iterable[tuple[int, ...]], n: int = 3) -> bool:
    return euclidean_witness(delta, n) is None


def heisenberg_witness(delta: Iterable[Pair]):
    for p, q in sorted(delta):
        if p % 2 and q % 2:
            return (p, q)
    return None


def classify_uniform_heisenberg(delta: Iterable[Pair]) -> bool:
    return heisenberg_witness(delta) is None


class Verdict(str, enum.Enum):
    BOUNDED = "BOUNDED"
    UNBOUNDED = "UNBOUNDED"


@dataclass(frozen=True)
class GraphReport:
    verdict: Verdict
    p_p0: Polynomial2
    vertices: tuple[Pair, ...]
    witness: Pair | None
    reason: str


def graph_report(P: Polynomial2, p0: int) -> GraphReport:
    pp0 = extract_Pp0(P, p0)
    if pp0.is_zero():
        return GraphReport(Verdict.BOUNDED, pp0, (), None, "P_p0 = 0")
    verts = newton_polygon(pp0.support()).vertices
    for v in verts:
        if (v[0] * v[1]) % 2:
            return GraphReport(Verdict.UNBOUNDED, pp0, verts, v, "vertex with odd pq")
    return GraphReport(Verdict.BOUNDED, pp0, verts, None, "every vertex has pq even")


def classify_graph_heisenberg(P: Polynomial2, p0: int) -> Verdict:
    return graph_report(P, p0).verdict
