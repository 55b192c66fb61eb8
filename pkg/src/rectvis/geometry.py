"""Integer rectangles, representations, and the bit-exact visibility relation.

All coordinates are integers.  A rectangle is the closed box [x1,x2] x [y1,y2]
with x1 < x2 and y1 < y2; the origin sits at the lower left and y grows
upward.  Two rectangles see each other when an axis-parallel sight strip of
positive width connects their interiors without touching any other closed
rectangle.  Because every coordinate is an integer, such a strip exists if
and only if a full open unit lane (one grid row or column) is free, which is
what `sees` tests.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .graphs import Graph

__all__ = [
    "Rect",
    "Representation",
    "SightEdge",
    "DirectionalSets",
    "ValidationProblem",
    "RVGError",
    "UnknownRectError",
    "InvalidRepresentationError",
    "validate",
    "check_valid",
    "sees",
    "sight_edges",
    "visibility_graph",
    "raster_oracle",
    "directional_sets",
    "transform",
    "compact_coordinates",
    "random_representation",
    "TRANSFORM_OPS",
]


class RVGError(Exception):
    """Base error for this package."""


class UnknownRectError(RVGError):
    """A rectangle name is not present in the representation."""


class InvalidRepresentationError(RVGError):
    """An operation received a representation that fails validation."""


@dataclass(frozen=True, order=True)
class Rect:
    """Closed axis-aligned integer rectangle [x1,x2] x [y1,y2]."""

    x1: int
    y1: int
    x2: int
    y2: int

    @property
    def width(self) -> int:
        return self.x2 - self.x1

    @property
    def height(self) -> int:
        return self.y2 - self.y1

    @property
    def area(self) -> int:
        return self.width * self.height

    def translated(self, dx: int, dy: int) -> "Rect":
        return Rect(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)

    def open_x_overlap(self, other: "Rect") -> bool:
        return self.x1 < other.x2 and other.x1 < self.x2

    def open_y_overlap(self, other: "Rect") -> bool:
        return self.y1 < other.y2 and other.y1 < self.y2

    def interior_intersects(self, other: "Rect") -> bool:
        return self.open_x_overlap(other) and self.open_y_overlap(other)


@dataclass(frozen=True)
class SightEdge:
    """One line of sight: rect names, orientation, and a witness lane.

    For a horizontal edge the witness lane is the grid row [k, k+1); for a
    vertical edge it is the grid column [k, k+1).  The lane is the least
    unobstructed one.
    """

    a: str
    b: str
    orientation: str  # "h" or "v"
    witness_lane: int


@dataclass(frozen=True)
class DirectionalSets:
    north: frozenset[str]
    south: frozenset[str]
    east: frozenset[str]
    west: frozenset[str]


@dataclass(frozen=True)
class ValidationProblem:
    kind: str  # "malformed" | "duplicate-name" | "interior-overlap"
    names: tuple[str, ...]
    detail: str


class Representation:
    """Named rectangles with pairwise-disjoint interiors, plus bounding box.

    Ingest normalizes coordinates by translating the bounding box's lower
    left corner to the origin, so equal layouts serialize identically.
    """

    __slots__ = ("rects", "box")

    def __init__(self, rects, normalize: bool = True):
        items = tuple((str(name), rect) for name, rect in rects)
        if normalize and items:
            dx = min(r.x1 for _, r in items)
            dy = min(r.y1 for _, r in items)
            if dx or dy:
                items = tuple((n, r.translated(-dx, -dy)) for n, r in items)
        self.rects = items
        if items:
            self.box = Rect(
                min(r.x1 for _, r in items),
                min(r.y1 for _, r in items),
                max(r.x2 for _, r in items),
                max(r.y2 for _, r in items),
            )
        else:
            self.box = None

    # -- basic accessors ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.rects)

    def __eq__(self, other) -> bool:
        return isinstance(other, Representation) and self.rects == other.rects

    def __hash__(self) -> int:
        return hash(self.rects)

    def __repr__(self) -> str:
        return f"Representation({len(self.rects)} rects, box={self.box})"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.rects)

    @property
    def width(self) -> int:
        return self.box.width if self.box else 0

    @property
    def height(self) -> int:
        return self.box.height if self.box else 0

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def perimeter(self) -> int:
        return 2 * (self.width + self.height)

    def rect(self, name: str) -> Rect:
        for n, r in self.rects:
            if n == name:
                return r
        raise UnknownRectError(f"no rectangle named {name!r}")

    def as_dict(self) -> dict[str, Rect]:
        return dict(self.rects)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "rects": [
                {"name": n, "x1": r.x1, "y1": r.y1, "x2": r.x2, "y2": r.y2}
                for n, r in self.rects
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "Representation":
        rects = [
            (d["name"], Rect(int(d["x1"]), int(d["y1"]), int(d["x2"]), int(d["y2"])))
            for d in data["rects"]
        ]
        return cls(rects)

    @classmethod
    def loads(cls, text: str) -> "Representation":
        return cls.from_json_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate(rep: Representation) -> list[ValidationProblem]:
    """Check all representation invariants; return problems (empty if valid).

    Reported distinctly: malformed rects (x1 >= x2 or y1 >= y2), duplicate
    names, and interior overlaps.  Shared edges and corners are allowed.
    """
    problems: list[ValidationProblem] = []
    seen: set[str] = set()
    for name, r in rep.rects:
        if name in seen:
            problems.append(
                ValidationProblem("duplicate-name", (name,), f"name {name!r} appears twice")
            )
        seen.add(name)
        if r.x1 >= r.x2 or r.y1 >= r.y2:
            problems.append(
                ValidationProblem(
                    "malformed", (name,), f"{name!r} has empty extent: {r}"
                )
            )
    items = [(n, r) for n, r in rep.rects if r.x1 < r.x2 and r.y1 < r.y2]
    for i in range(len(items)):
        ni, ri = items[i]
        for j in range(i + 1, len(items)):
            nj, rj = items[j]
            if ri.interior_intersects(rj):
                problems.append(
                    ValidationProblem(
                        "interior-overlap",
                        (ni, nj),
                        f"interiors of {ni!r} and {nj!r} intersect",
                    )
                )
    return problems


def check_valid(rep: Representation) -> None:
    problems = validate(rep)
    if problems:
        raise InvalidRepresentationError(problems[0].detail)


# ---------------------------------------------------------------------------
# The sight predicate
# ---------------------------------------------------------------------------


def _horizontal_lane(rep: Representation, left: Rect, right: Rect,
                     skip: tuple[str, str]) -> int | None:
    """Least free unit row lane between two x-ordered rects, or None.

    Lane k is free when no third rectangle spans rows [k, k+1] while
    reaching strictly past the left rect's right edge and strictly before
    the right rect's left edge.  Strict inequalities mean edge-touching
    rectangles never block, which is forced anyway: a blocker flush with
    the gap would overlap one of the pair.
    """
    lo = max(left.y1, right.y1)
    hi = min(left.y2, right.y2)
    if hi - lo < 1:
        return None
    for k in range(lo, hi):
        blocked = False
        for name, c in rep.rects:
            if name in skip:
                continue
            if c.y1 <= k and c.y2 >= k + 1 and c.x2 > left.x2 and c.x1 < right.x1:
                blocked = True
                break
        if not blocked:
            return k
    return None


def _vertical_lane(rep: Representation, lower: Rect, upper: Rect,
                   skip: tuple[str, str]) -> int | None:
    lo = max(lower.x1, upper.x1)
    hi = min(lower.x2, upper.x2)
    if hi - lo < 1:
        return None
    for k in range(lo, hi):
        blocked = False
        for name, c in rep.rects:
            if name in skip:
                continue
            if c.x1 <= k and c.x2 >= k + 1 and c.y2 > lower.y2 and c.y1 < upper.y1:
                blocked = True
                break
        if not blocked:
            return k
    return None


def sees(rep: Representation, a: str, b: str) -> SightEdge | None:
    """Sight edge between rects a and b, or None.

    Precondition: `rep` is valid and a != b.  An edge carries exactly one
    orientation: disjoint interiors rule out simultaneous open overlap in
    both axes.
    """
    if a == b:
        raise RVGError("sees() needs two distinct names")
    ra = rep.rect(a)
    rb = rep.rect(b)
    skip = (a, b)
    if ra.x2 <= rb.x1:
        lane = _horizontal_lane(rep, ra, rb, skip)
        if lane is not None:
            return SightEdge(a, b, "h", lane)
    elif rb.x2 <= ra.x1:
        lane = _horizontal_lane(rep, rb, ra, skip)
        if lane is not None:
            return SightEdge(a, b, "h", lane)
    if ra.y2 <= rb.y1:
        lane = _vertical_lane(rep, ra, rb, skip)
        if lane is not None:
            return SightEdge(a, b, "v", lane)
    elif rb.y2 <= ra.y1:
        lane = _vertical_lane(rep, rb, ra, skip)
        if lane is not None:
            return SightEdge(a, b, "v", lane)
    return None


def sight_edges(rep: Representation) -> list[SightEdge]:
    """All sight edges of a valid representation, in name-pair order."""
    check_valid(rep)
    names = rep.names
    out: list[SightEdge] = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            edge = sees(rep, names[i], names[j])
            if edge is not None:
                out.append(edge)
    return out


def visibility_graph(rep: Representation) -> Graph:
    """The visibility graph on rect names (vertex order = rect order)."""
    names = rep.names
    index = {n: i for i, n in enumerate(names)}
    rows = [0] * len(names)
    for e in sight_edges(rep):
        i, j = index[e.a], index[e.b]
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return Graph(len(names), tuple(rows), labels=names)


# ---------------------------------------------------------------------------
# Raster oracle (independent of the lane predicate above)
# ---------------------------------------------------------------------------


def raster_oracle(rep: Representation) -> Graph:
    """Visibility graph computed by rasterizing the box into unit cells.

    Declares a horizontal sight between two rects when some cell row
    contains cells of both with only empty cells strictly between them;
    vertical is the transpose.  Shares no logic with `sees`; used to
    cross-check it.
    """
    import numpy as np

    check_valid(rep)
    names = rep.names
    n = len(names)
    rows_adj = [0] * n
    if rep.box is None:
        return Graph(0, (), labels=())
    h, w = rep.box.height, rep.box.width
    grid = np.full((h, w), -1, dtype=np.int32)
    for idx, (_, r) in enumerate(rep.rects):
        grid[r.y1:r.y2, r.x1:r.x2] = idx

    def scan(lines) -> None:
        for line in lines:
            prev = -1
            for owner in line:
                if owner < 0:
                    continue
                if prev >= 0 and owner != prev:
                    rows_adj[prev] |= 1 << owner
                    rows_adj[owner] |= 1 << prev
                prev = owner

    scan(grid)      # each row: horizontal sights
    scan(grid.T)    # each column: vertical sights
    return Graph(n, tuple(rows_adj), labels=names)


# ---------------------------------------------------------------------------
# Directional sets
# ---------------------------------------------------------------------------


def directional_sets(rep: Representation, a: str) -> DirectionalSets:
    """Rects north/south/east/west of `a` (membership does not imply sight)."""
    ra = rep.rect(a)
    north, south, east, west = set(), set(), set(), set()
    for name, r in rep.rects:
        if name == a:
            continue
        if r.y1 >= ra.y2 and r.open_x_overlap(ra):
            north.add(name)
        if r.y2 <= ra.y1 and r.open_x_overlap(ra):
            south.add(name)
        if r.x1 >= ra.x2 and r.open_y_overlap(ra):
            east.add(name)
        if r.x2 <= ra.x1 and r.open_y_overlap(ra):
            west.add(name)
    return DirectionalSets(
        frozenset(north), frozenset(south), frozenset(east), frozenset(west)
    )


# ---------------------------------------------------------------------------
# Dihedral transforms
# ---------------------------------------------------------------------------

TRANSFORM_OPS = ("flip_h", "flip_v", "rot180", "transpose", "rot90", "rot270")


def transform(rep: Representation, op: str) -> Representation:
    """Remap coordinates within the box; the visibility graph is unchanged.

    `flip_h` mirrors x, `flip_v` mirrors y, `transpose` swaps the axes;
    `rot90`/`rot180`/`rot270` are counterclockwise rotations composed from
    those.
    """
    if rep.box is None:
        return rep
    u, v = rep.box.x2, rep.box.y2

    def remap(r: Rect) -> Rect:
        if op == "flip_h":
            return Rect(u - r.x2, r.y1, u - r.x1, r.y2)
        if op == "flip_v":
            return Rect(r.x1, v - r.y2, r.x2, v - r.y1)
        if op == "rot180":
            return Rect(u - r.x2, v - r.y2, u - r.x1, v - r.y1)
        if op == "transpose":
            return Rect(r.y1, r.x1, r.y2, r.x2)
        if op == "rot90":
            return Rect(v - r.y2, r.x1, v - r.y1, r.x2)
        if op == "rot270":
            return Rect(r.y1, u - r.x2, r.y2, u - r.x1)
        raise RVGError(f"unknown transform {op!r}")

    return Representation([(n, remap(r)) for n, r in rep.rects])


def compact_coordinates(rep: Representation) -> Representation:
    """Collapse coordinate gaps so consecutive boundary values differ by 1.

    Visibility depends only on the order of the boundary coordinates in
    each axis, so this never changes the graph.  It bounds the useful box:
    n rects have at most 2n distinct values per axis, hence any
    representation compacts to at most (2n-1) x (2n-1).
    """
    if rep.box is None:
        return rep
    xs = sorted({v for _, r in rep.rects for v in (r.x1, r.x2)})
    ys = sorted({v for _, r in rep.rects for v in (r.y1, r.y2)})
    xmap = {v: i for i, v in enumerate(xs)}
    ymap = {v: i for i, v in enumerate(ys)}
    return Representation(
        [
            (n, Rect(xmap[r.x1], ymap[r.y1], xmap[r.x2], ymap[r.y2]))
            for n, r in rep.rects
        ]
    )


# ---------------------------------------------------------------------------
# Random valid representations (for the randomized cross-check suites)
# ---------------------------------------------------------------------------


def random_representation(
    rng: random.Random,
    max_rects: int = 8,
    max_height: int = 8,
    max_width: int = 8,
) -> Representation:
    """A random valid representation, built by non-overlapping placement."""
    h = rng.randint(1, max_height)
    w = rng.randint(1, max_width)
    want = rng.randint(1, max_rects)
    occupied = [[False] * w for _ in range(h)]
    rects: list[tuple[str, Rect]] = []
    for _ in range(4 * want):
        if len(rects) >= want:
            break
        x = rng.randrange(w)
        y = rng.randrange(h)
        if occupied[y][x]:
            continue
        max_w = 0
        while x + max_w < w and not occupied[y][x + max_w]:
            max_w += 1
        rw = rng.randint(1, max_w)
        max_h = 1
        while y + max_h < h and all(
            not occupied[y + max_h][cx] for cx in range(x, x + rw)
        ):
            max_h += 1
        rh = rng.randint(1, max_h)
        for cy in range(y, y + rh):
            for cx in range(x, x + rw):
                occupied[cy][cx] = True
        rects.append((f"R{len(rects) + 1}", Rect(x, y, x + rw, y + rh)))
    return Representation(rects)
