"""Exact convex polygon kernel: canonical form, shoelace area, Minkowski sum
by edge-angle merging, and half-plane containment.

Vertices are pairs of exact scalars (Fraction or QuadExt); all predicates are
sign computations, so everything stays exact.  Degenerate polygons (a single
point, a segment) are legal inputs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exact import ExtRat, ext_sign

Point = tuple[ExtRat, ExtRat]


def cross(o: Point, a: Point, b: Point):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _dir_cross(u: Point, v: Point):
    return u[0] * v[1] - u[1] * v[0]


def convex_hull(points: Sequence[Point]) -> tuple[Point, ...]:
    """Monotone-chain hull, counter-clockwise, collinear points dropped."""
    pts = sorted(set((p[0], p[1]) for p in points))
    if len(pts) <= 1:
        return tuple(pts)
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and ext_sign(cross(lower[-2], lower[-1], p)) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and ext_sign(cross(upper[-2], upper[-1], p)) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return (hull[0],)
    return tuple(hull)


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    if ext_sign(cross(a, b, p)) != 0:
        return False
    d = (b[0] - a[0], b[1] - a[1])
    t = (p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]
    return ext_sign(t) >= 0 and t <= d[0] * d[0] + d[1] * d[1]


def normalize_convex(points: Sequence[Point]) -> tuple[Point, ...]:
    """Canonical CCW form of a convex polygon; raises on non-convex input.

    Input is accepted when every given vertex lies on the hull boundary
    (collinear edge subdivisions are fine, strictly interior points are not).
    """
    if not points:
        raise ValueError("polygon needs at least one vertex")
    hull = convex_hull(points)
    for p in points:
        p = (p[0], p[1])
        if p in hull:
            continue
        m = len(hull)
        if m == 1:
            ok = p == hull[0]
        else:
            ok = any(_on_segment(p, hull[i], hull[(i + 1) % m]) for i in range(m))
        if not ok:
            raise ValueError("non-convex polygon input")
    return hull


def signed_area_twice(vertices: Sequence[Point]):
    total = Fraction(0)
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        total = total + (x0 * y1 - x1 * y0)
    return total


def shoelace_area(vertices: Sequence[Point]) -> ExtRat:
    """Exact area of a CCW simple polygon."""
    return signed_area_twice(vertices) / 2


def _bottommost(vertices: Sequence[Point]) -> int:
    best = 0
    for i in range(1, len(vertices)):
        if vertices[i][1] < vertices[best][1] or (
            vertices[i][1] == vertices[best][1] and vertices[i][0] < vertices[best][0]
        ):
            best = i
    return best


def _edge_angle_key(v: Point) -> tuple[int, Point]:
    """Orders edge vectors by CCW angle from the positive x-axis, exactly."""
    x, y = v
    sy, sx = ext_sign(y), ext_sign(x)
    if sy > 0 or (sy == 0 and sx > 0):
        half = 0
    else:
        half = 1
    return half, v


def _angle_less(u: Point, v: Point) -> bool:
    hu, _ = _edge_angle_key(u)
    hv, _ = _edge_angle_key(v)
    if hu != hv:
        return hu < hv
    return ext_sign(_dir_cross(u, v)) > 0


def minkowski_sum(p: Sequence[Point], q: Sequence[Point]) -> tuple[Point, ...]:
    """Exact Minkowski sum of two convex polygons.

    Both edge cycles are rotated to start at the bottommost vertex, where the
    CCW edge sequences are sorted by angle; a single merge of the two sorted
    sequences walks the sum's boundary.  Degenerate inputs fall out naturally
    (a point contributes no edges, i.e. a translation).
    """
    pv = normalize_convex(p)
    qv = normalize_convex(q)

    def edges(vs):
        n = len(vs)
        start = _bottommost(vs)
        return [
            (
                vs[(start + i + 1) % n][0] - vs[(start + i) % n][0],
                vs[(start + i + 1) % n][1] - vs[(start + i) % n][1],
            )
            for i in range(n)
        ] if n > 1 else []

    ep, eq = edges(pv), edges(qv)
    start = (
        pv[_bottommost(pv)][0] + qv[_bottommost(qv)][0],
        pv[_bottommost(pv)][1] + qv[_bottommost(qv)][1],
    )
    merged: list[Point] = []
    i = j = 0
    while i < len(ep) and j < len(eq):
        if _angle_less(ep[i], eq[j]):
            merged.append(ep[i])
            i += 1
        elif _angle_less(eq[j], ep[i]):
            merged.append(eq[j])
            j += 1
        else:
            merged.append((ep[i][0] + eq[j][0], ep[i][1] + eq[j][1]))
            i += 1
            j += 1
    merged.extend(ep[i:])
    merged.extend(eq[j:])
    out = [start]
    for e in merged[:-1] if merged else []:
        last = out[-1]
        out.append((last[0] + e[0], last[1] + e[1]))
    return normalize_convex(out)


def polygon_contains(p: Sequence[Point], q: Sequence[Point]) -> bool:
    """True when every vertex of q lies in the convex polygon p (edges included)."""
    pv = normalize_convex(p)
    qv = normalize_convex(q)
    if len(pv) == 1:
        return all(v == pv[0] for v in qv)
    if len(pv) == 2:
        return all(_on_segment(v, pv[0], pv[1]) for v in qv)
    n = len(pv)
    for v in qv:
        for i in range(n):
            if ext_sign(cross(pv[i], pv[(i + 1) % n], v)) < 0:
                return False
    return True
