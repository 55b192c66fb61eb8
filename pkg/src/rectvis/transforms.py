"""Representation surgery for complete-graph layouts, plus compression.

The extraction move lifts the unique top rectangle to a full-width strip in
the top row while clipping everything else below it; for complete graphs
this preserves the graph and the bounding box.  Applying it in all four
directions drives the boundary into the four-strip pinwheel gauge that the
specialized complete-graph search fixes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import (
    Rect,
    Representation,
    RVGError,
    check_valid,
    transform,
    visibility_graph,
)

__all__ = [
    "TopSet",
    "SingletonViolation",
    "top_set",
    "extract_up",
    "extract_toward",
    "normalize_boundary",
    "boundary_strips",
    "compress",
]


class SingletonViolation(RVGError):
    """The extraction needed a unique extremal rectangle but found several."""


@dataclass(frozen=True)
class TopSet:
    """Rect names attaining the maximal lower edge y1."""

    names: frozenset[str]
    y1: int

    def __len__(self) -> int:
        return len(self.names)

    @property
    def unique(self) -> str:
        if len(self.names) != 1:
            raise SingletonViolation(f"top set is {sorted(self.names)}, not a singleton")
        return next(iter(self.names))


def top_set(rep: Representation) -> TopSet:
    if not rep.rects:
        raise RVGError("top set of an empty representation")
    best = max(r.y1 for _, r in rep.rects)
    return TopSet(frozenset(n for n, r in rep.rects if r.y1 == best), best)


def _is_complete(rep: Representation) -> bool:
    g = visibility_graph(rep)
    return g.edge_count == g.n * (g.n - 1) // 2


def extract_up(rep: Representation, a: str | None = None,
               require_complete: bool = True) -> Representation:
    """Lift the unique top rect to the full top row, clipping the others.

    Preserves the bounding box for n >= 2.  The graph is preserved only
    for complete inputs, which is why non-complete ones are rejected by
    default; `require_complete=False` downgrades the guarantee to validity
    of the output.
    """
    check_valid(rep)
    if len(rep.rects) < 2:
        raise RVGError("extraction needs at least two rectangles")
    ts = top_set(rep)
    if a is None:
        a = ts.unique
    elif ts.names != {a}:
        raise SingletonViolation(
            f"top set is {sorted(ts.names)}, expected exactly {{{a!r}}}"
        )
    if require_complete and not _is_complete(rep):
        raise RVGError("extraction preserves only complete graphs; "
                       "pass require_complete=False to force")
    u = rep.box.x2
    v = rep.box.y2
    out = []
    for name, r in rep.rects:
        if name == a:
            out.append((name, Rect(0, v - 1, u, v)))
        else:
            out.append((name, Rect(r.x1, r.y1, r.x2, min(r.y2, v - 1))))
    lifted = Representation(out)
    check_valid(lifted)
    assert lifted.box == rep.box, "extraction must not change the bounding box"
    return lifted


_CONJUGATION = {
    "up": (None, None),
    "right": ("rot90", "rot270"),
    "down": ("rot180", "rot180"),
    "left": ("rot270", "rot90"),
}


def extract_toward(rep: Representation, direction: str,
                   require_complete: bool = True) -> Representation:
    """Extraction toward any side, by conjugating the single audited
    upward implementation with a rotation."""
    if direction not in _CONJUGATION:
        raise RVGError(f"unknown direction {direction!r}")
    pre, post = _CONJUGATION[direction]
    work = transform(rep, pre) if pre else rep
    work = extract_up(work, require_complete=require_complete)
    return transform(work, post) if post else work


def normalize_boundary(rep: Representation) -> Representation:
    """Drive a complete-graph representation into the pinwheel gauge.

    Extracts up, right, down, left in that order; each step needs the
    directional extremal rect to be unique, which is guaranteed for
    complete graphs on six or more vertices.  Box and graph class are
    unchanged.
    """
    check_valid(rep)
    if not _is_complete(rep):
        raise RVGError("boundary normalization applies to complete-graph inputs")
    out = rep
    for direction in ("up", "right", "down", "left"):
        out = extract_toward(out, direction, require_complete=False)
    assert out.box == rep.box
    return out


def boundary_strips(rep: Representation) -> dict[str, str] | None:
    """Identify the four pinwheel strips by name, or None if absent."""
    if rep.box is None:
        return None
    u, v = rep.box.x2, rep.box.y2
    wanted = {
        "left": Rect(0, 0, 1, v),
        "top": Rect(1, v - 1, u - 1, v),
        "right": Rect(u - 1, 1, u, v),
        "bottom": Rect(1, 0, u, 1),
    }
    found: dict[str, str] = {}
    lookup = {r: n for n, r in rep.rects}
    for side, rect in wanted.items():
        if rect not in lookup:
            return None
        found[side] = lookup[rect]
    return found


# ---------------------------------------------------------------------------
# Compression
# ---------------------------------------------------------------------------


def _delete_row(rep: Representation, r: int) -> Representation | None:
    out = []
    for name, rect in rep.rects:
        y1, y2 = rect.y1, rect.y2
        if y1 >= r + 1:
            y1 -= 1
            y2 -= 1
        elif y2 >= r + 1:
            y2 -= 1
        if y1 >= y2:
            return None  # rect would collapse
        out.append((name, Rect(rect.x1, y1, rect.x2, y2)))
    return Representation(out)


def _delete_col(rep: Representation, c: int) -> Representation | None:
    out = []
    for name, rect in rep.rects:
        x1, x2 = rect.x1, rect.x2
        if x1 >= c + 1:
            x1 -= 1
            x2 -= 1
        elif x2 >= c + 1:
            x2 -= 1
        if x1 >= x2:
            return None
        out.append((name, Rect(x1, rect.y1, x2, rect.y2)))
    return Representation(out)


def compress(rep: Representation) -> tuple[Representation, list[tuple[str, int]]]:
    """Greedily delete grid rows/columns that keep the named graph equal.

    Scan order is deterministic: rows bottom-up, then columns left-right,
    repeated to a fixed point.  The result never has a larger box in any
    parameter.  Deleted lanes are reported with their index at deletion
    time.
    """
    check_valid(rep)
    if rep.box is None:
        return rep, []
    current = rep
    reference = visibility_graph(current).rows
    removed: list[tuple[str, int]] = []
    while True:
        changed = False
        r = 0
        while r < current.height:
            cand = _delete_row(current, r)
            if cand is not None and not validate_quick(cand) \
                    and visibility_graph(cand).rows == reference:
                current = cand
                removed.append(("row", r))
                changed = True
            else:
                r += 1
        c = 0
        while c < current.width:
            cand = _delete_col(current, c)
            if cand is not None and not validate_quick(cand) \
                    and visibility_graph(cand).rows == reference:
                current = cand
                removed.append(("col", c))
                changed = True
            else:
                c += 1
        if not changed:
            return current, removed


def validate_quick(rep: Representation) -> bool:
    """True when the representation is invalid (used as a rejection test)."""
    from .geometry import validate

    return bool(validate(rep))
