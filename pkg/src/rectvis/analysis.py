"""Closed-form size bounds and the disjoint-union composition calculus.

Box conventions: a box (h, w) is reported with h <= w.  Feasibility is
"fits within": if a graph has a representation inside an h x w box it also
fits every larger box, so the set of feasible boxes is upward closed and is
summarized by its antichain of minimal elements (the frontier).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "ParamBounds",
    "FrontierBox",
    "BoxFrontier",
    "ComposedValue",
    "ComposedParams",
    "lower_bounds",
    "perimeter_equality_boxes",
    "equality_characterizations",
    "compose_disjoint",
    "union_upper_bounds",
    "k8_union_parameters",
    "k8_union_frontier",
    "same_box_shortcut",
    "rounded_sqrt",
    "ceil_sqrt",
    "InconsistencyError",
]

PARAMETERS = ("height", "width", "area", "perimeter")


class InconsistencyError(Exception):
    """A proven search result contradicts a closed-form characterization."""


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def rounded_sqrt(n: int) -> int:
    """floor(sqrt(n) + 1/2), computed exactly in integers."""
    r = math.isqrt(n)
    return r if n <= r * r + r else r + 1


@dataclass(frozen=True)
class ParamBounds:
    """Universal lower bounds for any n-vertex representable graph."""

    n: int
    height_lb: int
    width_lb: int
    area_lb: int
    perimeter_lb: int

    def of(self, parameter: str) -> int:
        return getattr(self, f"{parameter}_lb")


def lower_bounds(n: int) -> ParamBounds:
    """height >= 1, width >= ceil(sqrt n), area >= n,
    perimeter >= 2*[[sqrt n]] + 2*ceil(sqrt n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return ParamBounds(
        n=n,
        height_lb=1,
        width_lb=ceil_sqrt(n),
        area_lb=n,
        perimeter_lb=2 * rounded_sqrt(n) + 2 * ceil_sqrt(n),
    )


def perimeter_equality_boxes(n: int) -> set[tuple[int, int]]:
    """Boxes (h, w), h <= w, attaining the perimeter lower bound for n rects.

    These are exactly the boxes with h + w = [[sqrt n]] + ceil(sqrt n) and
    h*w >= n; the sum pins the box to be very nearly square.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s = rounded_sqrt(n) + ceil_sqrt(n)
    return {
        (h, s - h)
        for h in range(1, s // 2 + 1)
        if h <= s - h and h * (s - h) >= n
    }


# ---------------------------------------------------------------------------
# Frontiers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrontierBox:
    h: int
    w: int
    proven_minimal: bool = True


@dataclass(frozen=True)
class BoxFrontier:
    """Antichain of minimal feasible boxes for one graph, with provenance.

    `exhausted` means every box not dominated by the antichain was searched
    to completion within the recorded caps, so the frontier is the whole
    truth; otherwise composed results are upper bounds only.
    """

    graph_key: str
    boxes: tuple[FrontierBox, ...]
    max_width_cap: int
    exhausted: bool = True
    capped_regions: tuple[str, ...] = ()

    def oriented_boxes(self) -> list[tuple[int, int]]:
        """Each unoriented box in both orientations (h, w) and (w, h)."""
        out = []
        for b in self.boxes:
            out.append((b.h, b.w))
            if b.h != b.w:
                out.append((b.w, b.h))
        return sorted(set(out))

    def value(self, parameter: str) -> int | None:
        if not self.boxes:
            return None
        if parameter == "height":
            return min(b.h for b in self.boxes)
        if parameter == "width":
            return min(b.w for b in self.boxes)
        if parameter == "area":
            return min(b.h * b.w for b in self.boxes)
        if parameter == "perimeter":
            return min(2 * (b.h + b.w) for b in self.boxes)
        raise ValueError(f"unknown parameter {parameter!r}")


@dataclass(frozen=True)
class ComposedValue:
    value: int
    box_pair: tuple[tuple[int, int], tuple[int, int]]
    proven: bool


@dataclass(frozen=True)
class ComposedParams:
    height: ComposedValue
    width: ComposedValue
    area: ComposedValue
    perimeter: ComposedValue

    def value(self, parameter: str) -> int:
        return getattr(self, parameter).value


def compose_disjoint(fh: BoxFrontier, fj: BoxFrontier) -> ComposedParams:
    """Exact size parameters of a disjoint union from component frontiers.

    Representations of the two parts stack corner to corner, so heights and
    perimeters add, while width and area need a minimization over all
    oriented box pairs: gluing an (x, y) box to an (a, b) box yields an
    (x+a) x (y+b) box.  Orientation matters because either part may be
    transposed, which is why each frontier box contributes both ways.
    """
    if not fh.boxes or not fj.boxes:
        raise ValueError("cannot compose an empty frontier")
    proven = fh.exhausted and fj.exhausted
    best: dict[str, ComposedValue] = {}
    for bx in fh.oriented_boxes():
        for bj in fj.oriented_boxes():
            x, y = bx
            a, b = bj
            glued_h, glued_w = x + a, y + b
            vals = {
                "height": min(glued_h, glued_w),
                "width": max(glued_h, glued_w),
                "area": glued_h * glued_w,
                "perimeter": 2 * (glued_h + glued_w),
            }
            for p, v in vals.items():
                if p not in best or v < best[p].value:
                    best[p] = ComposedValue(v, (bx, bj), proven)
    return ComposedParams(**best)


def union_upper_bounds(fh: BoxFrontier, fj: BoxFrontier) -> tuple[int, int]:
    """(width_ub, area_ub) for a disjoint union: widths add, and the glued
    box is at worst that square."""
    wh = fh.value("width")
    wj = fj.value("width")
    if wh is None or wj is None:
        raise ValueError("width unknown for a component")
    return wh + wj, (wh + wj) ** 2


# ---------------------------------------------------------------------------
# Largest-known construction from K8 blocks
# ---------------------------------------------------------------------------

K8_BOX = (10, 10)


@dataclass(frozen=True)
class K8UnionParameters:
    n: int
    q: int
    r: int
    height: int
    width: int
    area: int
    perimeter: int


def k8_union_parameters(n: int) -> K8UnionParameters:
    """Size of q*K8 + E_r where n = 8q + r: a graph on n vertices beating
    the empty graph for n >= 8.

    Every block sits in a square box (K8 in 10x10, each isolated vertex in
    1x1), so height = width = n + 2q and the area/perimeter follow.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    q, r = divmod(n, 8)
    side = n + 2 * q
    return K8UnionParameters(
        n=n, q=q, r=r, height=side, width=side, area=side * side, perimeter=4 * side
    )


def k8_union_frontier(n: int) -> BoxFrontier:
    """The same construction, expressed by composing block frontiers."""
    q, r = divmod(n, 8)
    blocks: list[BoxFrontier] = []
    blocks += [
        BoxFrontier("K8", (FrontierBox(*K8_BOX),), max_width_cap=K8_BOX[1])
    ] * q
    if r:
        blocks.append(
            BoxFrontier(f"E{r}", (FrontierBox(r, r),), max_width_cap=r)
        )
    if not blocks:
        raise ValueError("n must be >= 1")
    acc = blocks[0]
    for nxt in blocks[1:]:
        composed = compose_disjoint(acc, nxt)
        side_h = composed.value("height")
        side_w = composed.value("width")
        acc = BoxFrontier(
            "qK8+Er", (FrontierBox(side_h, side_w),), max_width_cap=side_w
        )
    return acc


# ---------------------------------------------------------------------------
# Equality characterizations and the same-box shortcut
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EqualityCheck:
    parameter: str
    value: int
    equality_holds: bool
    characterization_holds: bool

    @property
    def consistent(self) -> bool:
        return self.equality_holds == self.characterization_holds


def equality_characterizations(graph, found: dict[str, int],
                               fits_square) -> list[EqualityCheck]:
    """Check proven optima against the structural equality conditions.

    height = 1 iff the graph is a path; area = n iff it is a grid graph;
    width meets its bound iff the graph fits the ceil(sqrt n) square;
    perimeter meets its bound iff some equality box admits the graph.
    `fits_square(h, w)` must answer feasibility (from the search module or
    a frontier).  Raises InconsistencyError on any mismatch, since the
    characterizations are theorems: a violation means a solver bug.
    """
    from . import graphs as G

    n = graph.n
    lb = lower_bounds(n)
    checks: list[EqualityCheck] = []

    is_path = G.is_isomorphic(graph, G.path_graph(n))
    checks.append(
        EqualityCheck("height", found["height"], found["height"] == 1, is_path)
    )

    is_grid = any(
        n == h * w and G.is_isomorphic(graph, G.grid_graph(h, w))
        for h in range(1, math.isqrt(n) + 1)
        if n % h == 0
        for w in (n // h,)
    )
    checks.append(EqualityCheck("area", found["area"], found["area"] == n, is_grid))

    s = lb.width_lb
    checks.append(
        EqualityCheck(
            "width", found["width"], found["width"] == s, bool(fits_square(s, s))
        )
    )

    per_ok = any(fits_square(h, w) for h, w in sorted(perimeter_equality_boxes(n)))
    checks.append(
        EqualityCheck(
            "perimeter",
            found["perimeter"],
            found["perimeter"] == lb.perimeter_lb,
            per_ok,
        )
    )

    for c in checks:
        if not c.consistent:
            raise InconsistencyError(
                f"{c.parameter}={c.value}: equality={c.equality_holds} but "
                f"characterization={c.characterization_holds}"
            )
    return checks


@dataclass(frozen=True)
class SameBoxCertificate:
    area: int
    perimeter: int
    box: tuple[int, int]


def same_box_shortcut(rep, proven_height: int, proven_width: int) -> SameBoxCertificate | None:
    """Area and perimeter certificates when one box realizes both height
    and width: nothing smaller in either derived parameter can exist."""
    h, w = sorted((rep.height, rep.width))
    if (h, w) != (proven_height, proven_width):
        return None
    return SameBoxCertificate(area=h * w, perimeter=2 * (h + w), box=(h, w))
