"""Exact feasibility and minimization engine for visibility representations.

The kernel backtracks over occupancy patterns of an h x w frame: the first
undecided cell (row-major from the lower left) either becomes the lower-left
corner of a new rectangle or is marked permanently empty, so every pattern
of interior-disjoint rectangles is generated exactly once.  Visibility is
maintained incrementally on bitboards; a leaf with the right number of
rectangles is accepted when its visibility graph is isomorphic to the
target.

Visibility depends only on the order of the coordinates in each axis: any
grid line interior to the box that carries no rectangle boundary can be
collapsed, and any empty row or column deleted, without changing the graph.
Three consequences shape the engine.  First, the kernel only enumerates
"compact" patterns, where every internal line carries a boundary and no
line is empty; everything else is a padded copy of a smaller frame's
pattern, and the drivers iterate over sub-frames.  Second, cells are
scanned column-major, so once the scan passes an internal vertical line no
future rectangle can put a boundary on it and boundary-less prefixes die
immediately.  Third, n rectangles have at most 2n boundary values per
axis, so frames beyond (2n-1) x (2n-1) never need searching: exhausting up
to that bound proves a graph has no representation at all.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

from .analysis import BoxFrontier, FrontierBox, lower_bounds
from .geometry import Rect, Representation
from .graphs import Graph, complete_graph, isomorphic

__all__ = [
    "SearchConfig",
    "SearchStatus",
    "SearchReport",
    "CapExceededError",
    "decide_feasible",
    "minimize",
    "frontier",
    "solve_complete",
    "catalog",
    "max_useful_width",
    "PARAMETERS",
]

PARAMETERS = ("height", "width", "area", "perimeter")


class CapExceededError(Exception):
    """A search hit a configured cap before reaching an exhaustive verdict."""

    def __init__(self, kind: str):
        super().__init__(f"search budget exceeded: {kind}")
        self.kind = kind


def max_useful_width(n: int) -> int:
    """Sound exhaustion bound: every representation compacts to 2n-1."""
    return max(1, 2 * n - 1)


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the exact search.

    Results must be identical for any worker count.  `max_nodes` gives a
    deterministic cap; `time_budget_s` is wall-clock and therefore only for
    interactive use.  `seed` is reserved for tie-free orderings and does
    not affect published results.
    """

    max_width: int | None = None
    max_area: int | None = None
    max_nodes: int | None = None
    time_budget_s: float | None = None
    workers: int = 1
    prune_degree: bool = True
    prune_monotone: bool = True
    prune_planarity: bool = False
    symmetry: bool = True
    seed: int = 0

    def effective_width(self, n: int) -> int:
        bound = max_useful_width(n)
        return min(self.max_width, bound) if self.max_width else bound

    def exhaustive_width(self, n: int) -> bool:
        return self.effective_width(n) >= max_useful_width(n)

    def fingerprint(self) -> str:
        payload = json.dumps(
            [
                self.max_width,
                self.max_area,
                self.max_nodes,
                self.time_budget_s,
                self.prune_degree,
                self.prune_monotone,
                self.prune_planarity,
                self.symmetry,
            ]
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


class SearchStatus(str, Enum):
    PROVEN = "proven"
    UPPER_BOUND_ONLY = "upper-bound-only"
    INFEASIBLE_UP_TO = "infeasible-up-to-caps"


@dataclass
class SearchReport:
    """Result of one minimization with its certificate and provenance.

    The stable view (everything except wall time and node/prune counters,
    which depend on scheduling) is byte-identical across reruns and worker
    counts.
    """

    graph_key: str
    parameter: str
    status: SearchStatus
    value: int | None
    witness: Representation | None
    boxes_examined: list[tuple[int, int, str]]
    caps: dict
    config_fp: str
    nodes: int = 0
    prunes: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    def to_stable_dict(self) -> dict:
        return {
            "graph": self.graph_key,
            "parameter": self.parameter,
            "status": self.status.value,
            "value": self.value,
            "witness": self.witness.to_json_dict() if self.witness else None,
            "boxes": [list(b) for b in self.boxes_examined],
            "caps": self.caps,
            "config": self.config_fp,
        }

    def stable_bytes(self) -> bytes:
        return json.dumps(self.to_stable_dict(), sort_keys=True).encode()

    def to_dict(self) -> dict:
        d = self.to_stable_dict()
        d["nodes"] = self.nodes
        d["prunes"] = dict(self.prunes)
        d["wall_time_s"] = round(self.wall_time_s, 3)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SearchReport":
        return cls(
            graph_key=d["graph"],
            parameter=d["parameter"],
            status=SearchStatus(d["status"]),
            value=d["value"],
            witness=Representation.from_json_dict(d["witness"]) if d["witness"] else None,
            boxes_examined=[tuple(b) for b in d["boxes"]],
            caps=d["caps"],
            config_fp=d["config"],
            nodes=d.get("nodes", 0),
            prunes=d.get("prunes", {}),
            wall_time_s=d.get("wall_time_s", 0.0),
        )


# ---------------------------------------------------------------------------
# Kernel
# ---------------------------------------------------------------------------


class _Budget(Exception):
    def __init__(self, kind):
        self.kind = kind


def _frame_ops(h: int, w: int):
    """Nontrivial symmetries of the frame as rect maps (x1,y1,x2,y2)."""
    ops = [
        lambda r: (w - r[2], r[1], w - r[0], r[3]),              # flip_h
        lambda r: (r[0], h - r[3], r[2], h - r[1]),              # flip_v
        lambda r: (w - r[2], h - r[3], w - r[0], h - r[1]),      # rot180
    ]
    if h == w:
        ops += [
            lambda r: (r[1], r[0], r[3], r[2]),                  # transpose
            lambda r: (h - r[3], r[0], h - r[1], r[2]),          # rot90
            lambda r: (r[1], w - r[2], r[3], w - r[0]),          # rot270
            lambda r: (w - r[3], h - r[2], w - r[1], h - r[0]),  # anti-transpose
        ]
    return ops


class _Kernel:
    def __init__(self, h: int, w: int, target: Graph, cfg: SearchConfig,
                 fixed_rects: tuple[tuple[int, int, int, int], ...] = (),
                 collector: list | None = None, collector_cap: int = 0,
                 open_right: bool = False):
        self.h, self.w = h, w
        self.open_right = open_right
        self.cfg = cfg
        self.target = target
        self.n = target.n
        self.target_edges = target.edge_count
        self.complete_mode = self.target_edges == self.n * (self.n - 1) // 2
        self.target_degs = target.degree_sequence()
        self.collector = collector
        self.collector_cap = collector_cap
        self.counting = True
        self.nodes = 0
        self.prunes: dict[str, int] = {}
        self.deadline = None
        self.first_witness: Representation | None = None

        # cells are numbered column-major: bit x*h + y
        ncells = h * w
        self.full = (1 << ncells) - 1
        self.rowmask = [
            sum(1 << (x * h + k) for x in range(w)) for k in range(h)
        ]
        colband = [[0] * (w + 1) for _ in range(w + 1)]
        for a in range(w + 1):
            for b in range(a, w + 1):
                colband[a][b] = (1 << (b * h)) - (1 << (a * h))
        self.colband = colband
        rowband = [[0] * (h + 1) for _ in range(h + 1)]
        for a in range(h + 1):
            for b in range(a, h + 1):
                base = (1 << b) - (1 << a)
                rowband[a][b] = sum(base << (x * h) for x in range(w))
        self.rowband = rowband

        # boundary-line accounting for the compactness prunes
        self.vline_count = [0] * (w + 1)
        self.hline_count = [0] * (h + 1)
        self.vline_zero = ((1 << w) - 2) if w >= 2 else 0  # bits 1..w-1
        self.hline_zero = ((1 << h) - 2) if h >= 2 else 0
        self.internal_vlines = self.vline_zero
        self.internal_hlines = self.hline_zero

        # pattern symmetry (only without a fixed gauge or an open frame,
        # whose dihedral group would depend on the final extent)
        self.symmetry = cfg.symmetry and not fixed_rects and not open_right
        self.ops = _frame_ops(h, w) if self.symmetry else []
        if self.symmetry:
            fd = set()
            for c in range(ncells):
                x, y = divmod(c, h)
                cell = (x, y, x + 1, y + 1)
                if all(
                    (op(cell)[0] * h + op(cell)[1]) >= c for op in self.ops
                ):
                    fd.add(c)
            self.fd_cells = fd
        else:
            self.fd_cells = None

        # capacity tables: per-threshold counting makes the sorted-dominance
        # test O(#distinct degrees) with no allocation
        self.future_cap = 0
        self.thresholds: list[int] = []
        self.need: list[int] = []
        self.cap_counts: list[int] = []
        if cfg.prune_degree:
            best = 0
            for rh in range(1, h + 1):
                for rw in range(1, w + 1):
                    for y in (0, 1, max(0, h - rh - 1), h - rh):
                        if y < 0 or y + rh > h:
                            continue
                        for x in (0, 1, max(0, w - rw - 1), w - rw):
                            if x < 0 or x + rw > w:
                                continue
                            best = max(best, self._capacity(x, y, rw, rh))
            self.future_cap = best
            self.thresholds = sorted(set(self.target_degs), reverse=True)
            self.need = [
                sum(1 for d in self.target_degs if d >= t) for t in self.thresholds
            ]
            self.cap_counts = [0] * len(self.thresholds)

        # induced-subgraph edge-count envelopes for the monotone prune
        if not self.complete_mode and cfg.prune_monotone and self.n <= 16:
            size = 1 << self.n
            esub = [0] * size
            for s in range(1, size):
                v = (s & -s).bit_length() - 1
                rest = s ^ (1 << v)
                esub[s] = esub[rest] + (target.rows[v] & rest).bit_count()
            self.m_min = [10 ** 9] * (self.n + 1)
            self.m_max = [-1] * (self.n + 1)
            for s in range(size):
                p = s.bit_count()
                e = esub[s]
                if e < self.m_min[p]:
                    self.m_min[p] = e
                if e > self.m_max[p]:
                    self.m_max[p] = e
        else:
            self.m_min = self.m_max = None

        # a locked edge survives into the final graph, so the rect's final
        # vertex needs at least that degree; count placed rects per
        # locked-degree threshold against the target's degree tallies
        self.deg_ge = [0] * (self.n + 2)
        for d in self.target_degs:
            for t in range(1, d + 1):
                self.deg_ge[t] += 1

        # locked components must pack into the target's components: the k
        # largest locked components cannot outsize the k largest target ones
        comp_sizes = self._component_sizes(target)
        self.comp_prefix = None
        if len(comp_sizes) > 1:
            acc, pref = 0, []
            for s in comp_sizes:
                acc += s
                pref.append(acc)
            pref += [acc] * self.n
            self.comp_prefix = pref
        self.lparent = list(range(self.n))
        self.lsize = [1] * self.n
        self.lcomp_cnt = [0] * (self.n + 1)  # locked comps by size (>= 2)
        self.lmerges: list = []
        self.max_x2 = 0  # rightmost boundary so far (a lower bound on extent)

        # mutable search state; edges are records [i, j, orient, band,
        # locked, alive] kept on one list with trail-based undo
        self.rects: list[tuple[int, int, int, int]] = []
        self.rect_masks: list[int] = []
        self.caps: list[int] = []
        self.adj_rows: list[int] = []
        self.edges: list[list] = []
        self.ld: list[int] = []
        self.ld_ge = [0] * (self.n + 2)
        self.edge_count = 0
        self.locked_count = 0
        self.fixed_count = len(fixed_rects)

        decided = 0
        occupied = 0
        self.dead = False  # a prune rejected the fixed gauge: box infeasible
        for fr in fixed_rects:
            m = self._mask(*fr)
            assert not (m & occupied), "fixed rects overlap"
            occupied |= m
            decided |= m
            if self._register_rect(fr, m, occupied, decided) is False:
                self.dead = True
                break
        self.decided0 = decided
        self.occupied0 = occupied

    # -- primitive helpers --------------------------------------------------

    def _mask(self, x1, y1, x2, y2) -> int:
        return self.colband[x1][x2] & self.rowband[y1][y2]

    def _capacity(self, x, y, rw, rh) -> int:
        cap = 0
        if y + rh < self.h:
            cap += rw
        if y > 0:
            cap += rw
        if x > 0:
            cap += rh
        if x + rw < self.w:
            cap += rh
        return cap

    def _sight(self, A, B, occupied):
        """(orientation, recheck-band) if A and B see each other, else None."""
        ax1, ay1, ax2, ay2 = A
        bx1, by1, bx2, by2 = B
        if ax2 <= bx1 or bx2 <= ax1:
            ga, gb = (ax2, bx1) if ax2 <= bx1 else (bx2, ax1)
            lo = ay1 if ay1 > by1 else by1
            hi = ay2 if ay2 < by2 else by2
            if hi - lo >= 1:
                gap = self.colband[ga][gb]
                if not gap:
                    return ("h", 0)
                rm = self.rowmask
                for k in range(lo, hi):
                    if not (occupied & gap & rm[k]):
                        return ("h", gap & self.rowband[lo][hi])
        if ay2 <= by1 or by2 <= ay1:
            ga, gb = (ay2, by1) if ay2 <= by1 else (by2, ay1)
            lo = ax1 if ax1 > bx1 else bx1
            hi = ax2 if ax2 < bx2 else bx2
            if hi - lo >= 1:
                gap = self.rowband[ga][gb]
                if not gap:
                    return ("v", 0)
                cb = self.colband
                for k in range(lo, hi):
                    if not (occupied & gap & cb[k][k + 1]):
                        return ("v", gap & cb[lo][hi])
        return None

    def _edge_locked(self, e, occupied, decided) -> bool:
        """An edge is locked when some sight lane can never be blocked:
        either the gap has zero width or a full lane is decided empty."""
        band = e[3]
        if not band:
            return True
        free = band & ~(decided & ~occupied)
        if not free:
            return True
        A, B = self.rects[e[0]], self.rects[e[1]]
        if e[2] == "h":
            lo = A[1] if A[1] > B[1] else B[1]
            hi = A[3] if A[3] < B[3] else B[3]
            for k in range(lo, hi):
                lane = band & self.rowmask[k]
                if lane and not (lane & free):
                    return True
        else:
            lo = A[0] if A[0] > B[0] else B[0]
            hi = A[2] if A[2] < B[2] else B[2]
            for k in range(lo, hi):
                lane = band & self.colband[k][k + 1]
                if lane and not (lane & free):
                    return True
        return False

    # -- incremental state updates ------------------------------------------
    #
    # Undo records: ("r", n_edges_added, [revived edge indices]) for a rect,
    # ("e", [locked edge indices]) for an empty-cell mark.

    def _register_rect(self, rect, m, occupied, decided):
        """Add a rect: new sights, broken old sights, prune checks.

        Returns an undo record, or False if a prune rejects the placement
        (state already rolled back in that case).
        """
        rects = self.rects
        edges = self.edges
        q = len(rects)
        x1, y1, x2, y2 = rect
        cap = 0
        if y2 < self.h:
            cap += x2 - x1
        if y1 > 0:
            cap += x2 - x1
        if x1 > 0:
            cap += y2 - y1
        if x2 < self.w:
            cap += y2 - y1

        # degree dominance first: it needs no state updates
        if self.thresholds:
            futures = self.n - q - 1
            fut = self.future_cap
            counts = self.cap_counts
            for ti, t in enumerate(self.thresholds):
                have = counts[ti] + (1 if cap >= t else 0)
                if fut >= t:
                    have += futures
                if have < self.need[ti]:
                    self._bump("degree")
                    return False
            for ti, t in enumerate(self.thresholds):
                if cap >= t:
                    counts[ti] += 1

        # monotone envelopes, still before any mutation: the new rect adds
        # at most q edges and never unlocks anything
        if self.m_min is not None and (
            self.edge_count + q < self.m_min[q + 1]
            or self.locked_count > self.m_max[q + 1]
        ):
            if self.thresholds:
                counts = self.cap_counts
                for ti, t in enumerate(self.thresholds):
                    if cap >= t:
                        counts[ti] -= 1
            self._bump("edges")
            return False

        rects.append(rect)
        self.rect_masks.append(m)
        self.caps.append(cap)
        self.adj_rows.append(0)
        self.ld.append(0)
        vc = self.vline_count
        for k in (x1, x2):
            vc[k] += 1
            if vc[k] == 1:
                self.vline_zero &= ~(1 << k)
        hc = self.hline_count
        for k in (y1, y2):
            hc[k] += 1
            if hc[k] == 1:
                self.hline_zero &= ~(1 << k)
        removed: list[int] = []
        added = 0
        complete = self.complete_mode
        sight = self._sight
        old_max_x2 = self.max_x2
        if x2 > old_max_x2:
            self.max_x2 = x2

        # placing can only break existing sights, never create ones
        ok = True
        for idx, e in enumerate(edges):
            if e[5] and not e[4] and (e[3] & m):
                if sight(rects[e[0]], rects[e[1]], occupied) is None:
                    e[5] = False
                    self.edge_count -= 1
                    self.adj_rows[e[0]] &= ~(1 << e[1])
                    self.adj_rows[e[1]] &= ~(1 << e[0])
                    removed.append(idx)
                    if complete:
                        ok = False
                        break
        if ok:
            for i in range(q):
                s = sight(rects[i], rect, occupied)
                if s is not None:
                    e = [i, q, s[0], s[1], False, True]
                    edges.append(e)
                    self.edge_count += 1
                    self.adj_rows[i] |= 1 << q
                    self.adj_rows[q] |= 1 << i
                    added += 1
                    if not complete and self._edge_locked(e, occupied, decided):
                        e[4] = True
                        self.locked_count += 1
                        if not self._lock_degrees(i, q):
                            ok = False
                            break
                elif complete:
                    ok = False
                    break
        if ok and not self._prune_ok(q + 1):
            ok = False
        if not ok:
            self._undo(("r", added, removed, old_max_x2))
            return False
        return ("r", added, removed, old_max_x2)

    @staticmethod
    def _component_sizes(g: Graph) -> list[int]:
        seen = 0
        sizes = []
        for v in range(g.n):
            if (seen >> v) & 1:
                continue
            frontier = 1 << v
            comp = 0
            while frontier:
                comp |= frontier
                nxt = 0
                f = frontier
                while f:
                    u = (f & -f).bit_length() - 1
                    nxt |= g.rows[u]
                    f &= f - 1
                frontier = nxt & ~comp
            seen |= comp
            sizes.append(comp.bit_count())
        return sorted(sizes, reverse=True)

    def _lfind(self, v: int) -> int:
        parent = self.lparent
        while parent[v] != v:
            v = parent[v]
        return v

    def _lock_degrees(self, i: int, j: int) -> bool:
        """Account a newly locked edge; False when the locked-degree tally
        or the locked-component packing can no longer fit the target."""
        ld = self.ld
        ld_ge = self.ld_ge
        ok = True
        for v in (i, j):
            ld[v] += 1
            t = ld[v]
            ld_ge[t] += 1
            if ld_ge[t] > self.deg_ge[t]:
                ok = False
        if self.comp_prefix is None:
            return ok
        ri, rj = self._lfind(i), self._lfind(j)
        if ri == rj:
            self.lmerges.append(None)
        else:
            if self.lsize[ri] > self.lsize[rj]:
                ri, rj = rj, ri
            cnt = self.lcomp_cnt
            si, sj = self.lsize[ri], self.lsize[rj]
            if si > 1:
                cnt[si] -= 1
            if sj > 1:
                cnt[sj] -= 1
            cnt[si + sj] += 1
            self.lparent[ri] = rj
            self.lsize[rj] += si
            self.lmerges.append((ri, rj))
            if ok:
                # k largest locked components vs k largest target components
                pref = self.comp_prefix
                acc = 0
                k = 0
                for s in range(self.n, 1, -1):
                    c = cnt[s]
                    while c:
                        acc += s
                        if acc > pref[k]:
                            return False
                        k += 1
                        c -= 1
        return ok

    def _unlock_degrees(self, i: int, j: int) -> None:
        for v in (i, j):
            self.ld_ge[self.ld[v]] -= 1
            self.ld[v] -= 1
        if self.comp_prefix is not None:
            rec = self.lmerges.pop()
            if rec is not None:
                ri, rj = rec
                self.lparent[ri] = ri
                si = self.lsize[ri]
                sj = self.lsize[rj] - si
                self.lsize[rj] = sj
                cnt = self.lcomp_cnt
                cnt[si + sj] -= 1
                if si > 1:
                    cnt[si] += 1
                if sj > 1:
                    cnt[sj] += 1

    def _undo(self, record) -> None:
        if record[0] == "r":
            _, added, removed, old_max_x2 = record
            self.max_x2 = old_max_x2
            edges = self.edges
            for _ in range(added):
                e = edges.pop()
                self.edge_count -= 1
                if e[4]:
                    self.locked_count -= 1
                    self._unlock_degrees(e[0], e[1])
                self.adj_rows[e[0]] &= ~(1 << e[1])
                self.adj_rows[e[1]] &= ~(1 << e[0])
            for idx in removed:
                e = edges[idx]
                e[5] = True
                self.edge_count += 1
                self.adj_rows[e[0]] |= 1 << e[1]
                self.adj_rows[e[1]] |= 1 << e[0]
            x1, y1, x2, y2 = self.rects.pop()
            self.rect_masks.pop()
            cap = self.caps.pop()
            self.adj_rows.pop()
            self.ld.pop()
            vc = self.vline_count
            for k in (x1, x2):
                vc[k] -= 1
                if vc[k] == 0:
                    self.vline_zero |= 1 << k
            hc = self.hline_count
            for k in (y1, y2):
                hc[k] -= 1
                if hc[k] == 0:
                    self.hline_zero |= 1 << k
            if self.thresholds:
                counts = self.cap_counts
                for ti, t in enumerate(self.thresholds):
                    if cap >= t:
                        counts[ti] -= 1
        else:
            for idx in reversed(record[1]):
                e = self.edges[idx]
                e[4] = False
                self.locked_count -= 1
                self._unlock_degrees(e[0], e[1])

    def _mark_empty(self, bit, occupied, decided):
        """Deciding a cell empty can lock edges; returns (undo record, ok).

        ok is False when the new locks overflow the locked-degree or
        locked-count envelopes, which dooms every completion."""
        locked_now: list[int] = []
        ok = True
        if not self.complete_mode:
            for idx, e in enumerate(self.edges):
                if e[5] and not e[4] and (e[3] & bit) and self._edge_locked(
                    e, occupied, decided
                ):
                    e[4] = True
                    self.locked_count += 1
                    locked_now.append(idx)
                    if not self._lock_degrees(e[0], e[1]):
                        ok = False
                        break
            if ok and self.m_max is not None \
                    and self.locked_count > self.m_max[len(self.rects)]:
                ok = False
        return ("e", locked_now), ok

    def _prune_ok(self, p: int) -> bool:
        if self.cfg.prune_monotone and self.m_min is not None:
            # later rects only remove sights, so the final induced subgraph
            # on the placed rects is a spanning subgraph of the current one
            if self.edge_count < self.m_min[p]:
                self._bump("edges")
                return False
            if self.locked_count > self.m_max[p]:
                self._bump("locked")
                return False
        if self.cfg.prune_planarity and not self.complete_mode and self.locked_count:
            if not self._locked_split_planar():
                self._bump("planarity")
                return False
        return True

    def _locked_split_planar(self) -> bool:
        from .graphs import graph_from_edges, is_planar

        p = len(self.rects)
        ev = [(e[0], e[1]) for e in self.edges if e[5] and e[4] and e[2] == "v"]
        eh = [(e[0], e[1]) for e in self.edges if e[5] and e[4] and e[2] == "h"]
        return is_planar(graph_from_edges(p, ev)) and is_planar(graph_from_edges(p, eh))

    def _bump(self, key: str) -> None:
        self.prunes[key] = self.prunes.get(key, 0) + 1

    # -- symmetry -----------------------------------------------------------

    def _owner_string(self, rects) -> bytes:
        order = sorted(range(len(rects)), key=lambda i: (rects[i][0], rects[i][1]))
        cells = bytearray(self.h * self.w)
        for rank, i in enumerate(order, 1):
            x1, y1, x2, y2 = rects[i]
            for xx in range(x1, x2):
                base = xx * self.h
                for yy in range(y1, y2):
                    cells[base + yy] = rank
        return bytes(cells)

    def _is_canonical(self) -> bool:
        base = self._owner_string(self.rects)
        for op in self.ops:
            if self._owner_string([op(r) for r in self.rects]) > base:
                return False
        return True

    # -- search -------------------------------------------------------------

    def run(self, exhaustive: bool = False) -> Representation | None:
        if self.dead:
            return None
        if self.cfg.time_budget_s is not None:
            self.deadline = time.monotonic() + self.cfg.time_budget_s
        self.exhaustive = exhaustive
        witness = self._dfs(self.decided0, self.occupied0)
        return witness if witness is not None else self.first_witness

    def _dfs(self, decided: int, occupied: int) -> Representation | None:
        if self.counting:
            self.nodes += 1
            if self.cfg.max_nodes is not None and self.nodes > self.cfg.max_nodes:
                raise _Budget("nodes")
            if self.deadline is not None and not (self.nodes & 0xFFF):
                if time.monotonic() > self.deadline:
                    raise _Budget("time")
        p = len(self.rects)
        if p == self.n:
            return self._leaf(occupied)
        undecided = self.full & ~decided
        if undecided.bit_count() < self.n - p:
            self._bump("cells")
            return None
        c = (undecided & -undecided).bit_length() - 1
        x, y = divmod(c, self.h)
        # the scan has passed every vertical line left of column x; if one
        # carries no boundary the pattern is a padded copy of a narrower one
        if x > 1 and self.vline_zero & ((1 << x) - 2):
            self._bump("compact")
            return None
        # each future rect contributes at most two boundary values per axis;
        # with an open right edge only lines up to the current rightmost
        # boundary are certainly internal to the final frame
        budget = 2 * (self.n - p)
        if self.open_right:
            pending = self.vline_zero & ((1 << self.max_x2) - 1)
        else:
            pending = self.vline_zero
        if (pending >> x).bit_count() > budget \
                or (self.hline_zero & self.internal_hlines).bit_count() > budget:
            self._bump("boundary-budget")
            return None

        # placements with lower-left corner at the first undecided cell
        if self.fd_cells is None or p > 0 or c in self.fd_cells:
            colband_x = self.colband[x]
            rowband_y = self.rowband[y]
            for rh in range(1, self.h - y + 1):
                band = rowband_y[y + rh]
                if colband_x[x + 1] & band & decided:
                    break
                for rw in range(1, self.w - x + 1):
                    m = colband_x[x + rw] & band
                    if m & decided:
                        break
                    rec = self._register_rect((x, y, x + rw, y + rh), m,
                                              occupied | m, decided | m)
                    if rec is False:
                        continue
                    res = self._dfs(decided | m, occupied | m)
                    self._undo(rec)
                    if res is not None:
                        return res
        else:
            self._bump("fundamental-domain")

        # or leave the cell permanently empty, unless that empties a whole
        # frame line (such patterns are padded copies of smaller frames)
        bit = 1 << c
        nonempty = occupied | (self.full & ~(decided | bit))
        if not (self.colband[x][x + 1] & nonempty) or not (self.rowmask[y] & nonempty):
            self._bump("empty-line")
            return None
        rec, ok = self._mark_empty(bit, occupied, decided | bit)
        if not ok:
            self._undo(rec)
            self._bump("locked")
            return None
        res = self._dfs(decided | bit, occupied)
        self._undo(rec)
        return res

    def _leaf(self, occupied: int) -> Representation | None:
        # compactness of the finished frame: every internal line carries a
        # boundary and no line is empty (cells undecided at this point are
        # implicitly empty); an open frame ends at the rightmost rect
        extent = max(r[2] for r in self.rects) if self.open_right else self.w
        if extent >= 2 and self.vline_zero & ((1 << extent) - 2):
            return None
        hc = self.hline_count
        for k in range(1, self.h):
            if hc[k] == 0:
                return None
        for x in range(extent):
            if not (self.colband[x][x + 1] & occupied):
                return None
        for y in range(self.h):
            if not (self.rowmask[y] & occupied):
                return None
        if self.edge_count != self.target_edges:
            return None
        if self.complete_mode:
            mapping: tuple[int, ...] | None = tuple(range(self.n))
        else:
            leaf_graph = Graph(self.n, tuple(self.adj_rows))
            if leaf_graph.degree_sequence() != self.target_degs:
                return None
            mapping = isomorphic(leaf_graph, self.target)
            if mapping is None:
                return None
        witness = self._build_witness(mapping)
        if self.collector is not None and len(self.collector) < self.collector_cap:
            self.collector.append(witness)
        if self.symmetry and not self._is_canonical():
            self._bump("non-canonical-leaf")
            return None
        if self.exhaustive:
            if self.first_witness is None:
                self.first_witness = witness
            if self.collector is not None and len(self.collector) >= self.collector_cap:
                return witness  # sampling quota reached; unwind
            return None
        return witness

    def _build_witness(self, mapping) -> Representation:
        names = [
            self.target.labels[mapping[i]] if self.target.labels else f"v{mapping[i]}"
            for i in range(self.n)
        ]
        rects = [
            (names[i], Rect(r[0], r[1], r[2], r[3]))
            for i, r in enumerate(self.rects)
        ]
        rects.sort(key=lambda item: item[0])
        return Representation(rects)

    # -- parallel support ---------------------------------------------------

    def expand(self, want: int) -> list[list]:
        """Top-of-tree decision prefixes for distribution to workers."""
        if self.dead:
            return []
        self.counting = False
        frontier: list[list] = [[]]
        while len(frontier) < want:
            grown: list[list] = []
            advanced = False
            for prefix in frontier:
                children = self._children_of(prefix)
                if children is None:
                    grown.append(prefix)  # leaf-ish; keep as is
                else:
                    advanced = True
                    grown.extend(prefix + [ch] for ch in children)
            frontier = grown
            if not advanced:
                break
        self.counting = True
        return frontier

    def _children_of(self, prefix: list) -> list | None:
        """Surviving child decisions under a prefix, in DFS order."""
        decided, occupied, undos = self._replay(prefix)
        try:
            p = len(self.rects)
            if p == self.n:
                return None
            undecided = self.full & ~decided
            if undecided.bit_count() < self.n - p:
                return None
            c = (undecided & -undecided).bit_length() - 1
            x, y = divmod(c, self.h)
            if x > 1 and self.vline_zero & ((1 << x) - 2):
                return None
            budget = 2 * (self.n - p)
            if (self.vline_zero >> x).bit_count() > budget \
                    or (self.hline_zero & self.internal_hlines).bit_count() > budget:
                return None
            out: list[tuple] = []
            if self.fd_cells is None or p > 0 or c in self.fd_cells:
                for rh in range(1, self.h - y + 1):
                    if self._mask(x, y, x + 1, y + rh) & decided:
                        break
                    for rw in range(1, self.w - x + 1):
                        m = self._mask(x, y, x + rw, y + rh)
                        if m & decided:
                            break
                        rec = self._register_rect((x, y, x + rw, y + rh), m,
                                                  occupied | m, decided | m)
                        if rec is False:
                            continue
                        self._undo(rec)
                        out.append(("p", x, y, rw, rh))
            bit = 1 << c
            nonempty = occupied | (self.full & ~(decided | bit))
            if (self.colband[x][x + 1] & nonempty) and (self.rowmask[y] & nonempty):
                rec, ok = self._mark_empty(bit, occupied, decided | bit)
                self._undo(rec)
                if ok:
                    out.append(("e", c))
            return out
        finally:
            for rec in reversed(undos):
                self._undo(rec)

    def _replay(self, prefix: list):
        decided, occupied = self.decided0, self.occupied0
        undos = []
        for step in prefix:
            if step[0] == "p":
                _, x, y, rw, rh = step
                m = self._mask(x, y, x + rw, y + rh)
                rec = self._register_rect((x, y, x + rw, y + rh), m,
                                          occupied | m, decided | m)
                if rec is False:
                    raise AssertionError("prefix replay hit a prune")
                undos.append(rec)
                decided |= m
                occupied |= m
            else:
                bit = 1 << step[1]
                rec, ok = self._mark_empty(bit, occupied, decided | bit)
                if not ok:
                    raise AssertionError("prefix replay hit a prune")
                undos.append(rec)
                decided |= bit
        return decided, occupied, undos

    def run_prefix(self, prefix: list, exhaustive: bool) -> Representation | None:
        if self.dead:
            return None
        if self.cfg.time_budget_s is not None:
            self.deadline = time.monotonic() + self.cfg.time_budget_s
        self.exhaustive = exhaustive
        decided, occupied, undos = self._replay(prefix)
        try:
            witness = self._dfs(decided, occupied)
        finally:
            for rec in reversed(undos):
                self._undo(rec)
        return witness if witness is not None else self.first_witness


# ---------------------------------------------------------------------------
# Parallel driver
# ---------------------------------------------------------------------------


def _worker_decide(args):
    h, w, target_rows, labels, n, cfg, fixed, prefix, exhaustive, cap, open_right = args
    target = Graph(n, tuple(target_rows), tuple(labels) if labels else None)
    collector: list | None = [] if cap else None
    k = _Kernel(h, w, target, cfg, fixed_rects=fixed,
                collector=collector, collector_cap=cap, open_right=open_right)
    try:
        witness = k.run_prefix(list(prefix), exhaustive)
        budg = None
    except _Budget as b:
        witness, budg = None, b.kind
    wd = witness.to_json_dict() if witness else None
    samples = [s.to_json_dict() for s in collector] if collector else []
    return wd, budg, k.nodes, k.prunes, samples


def _run_kernel(h, w, target, cfg, fixed=(), exhaustive=False,
                collector=None, collector_cap=0, open_right=False):
    """Run the kernel, in parallel over top-level branches if configured.

    Returns (witness | None, stats dict).  Budget hits surface as
    stats["capped"].  Parallel runs merge in branch order, so the witness
    matches the sequential one exactly.
    """
    workers = cfg.workers if cfg.max_nodes is None and cfg.time_budget_s is None else 1
    kernel = _Kernel(h, w, target, cfg, fixed_rects=fixed,
                     collector=collector, collector_cap=collector_cap,
                     open_right=open_right)
    stats = {"nodes": 0, "prunes": {}, "capped": None}

    def account(nodes, prunes):
        stats["nodes"] += nodes
        for k2, v in prunes.items():
            stats["prunes"][k2] = stats["prunes"].get(k2, 0) + v

    if workers <= 1:
        try:
            witness = kernel.run(exhaustive=exhaustive)
        except _Budget as b:
            witness = None
            stats["capped"] = b.kind
        account(kernel.nodes, kernel.prunes)
        return witness, stats

    prefixes = kernel.expand(4 * workers)
    args = [
        (h, w, list(target.rows), list(target.labels) if target.labels else None,
         target.n, cfg, fixed, prefix, exhaustive, collector_cap, open_right)
        for prefix in prefixes
    ]
    witness = None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_worker_decide, args))
    for wd, budg, nodes, prunes, samples in results:
        account(nodes, prunes)
        if budg and stats["capped"] is None:
            stats["capped"] = budg
        if collector is not None:
            for s in samples:
                if len(collector) < collector_cap:
                    collector.append(Representation.from_json_dict(s))
        if witness is None and wd is not None:
            witness = Representation.from_json_dict(wd)
            if not exhaustive and collector is None:
                break
    return witness, stats


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def _empty_target_witness(n: int, h: int, w: int) -> Representation | None:
    # isolated vertices need a diagonal: an n x n box is necessary and enough
    if h >= n and w >= n:
        return Representation(
            [(f"v{i}", Rect(i, i, i + 1, i + 1)) for i in range(n)]
        )
    return None


def _normalize_box(h: int, w: int) -> tuple[int, int]:
    return (h, w) if h <= w else (w, h)


def _essential_run(target, h, w, cfg):
    """One kernel run at the exact frame (compact patterns only)."""
    if h * w < target.n:
        return None, {"nodes": 0, "prunes": {}, "capped": None}
    return _run_kernel(h, w, target, cfg)


def _row_run(target, h, wcap, cfg, exhaustive=False):
    """One open-right kernel run: compact patterns of height exactly h and
    any width up to wcap, sharing prefixes across widths."""
    if h * wcap < target.n:
        return None, {"nodes": 0, "prunes": {}, "capped": None}
    return _run_kernel(h, wcap, target, cfg, open_right=True,
                       exhaustive=exhaustive)


def decide_feasible(target: Graph, h: int, w: int,
                    cfg: SearchConfig | None = None) -> Representation | None:
    """Witness representation of `target` fitting inside h x w, or None.

    None means proven infeasible: the search is exhaustive (one open-right
    row run per height).  If a node or time budget interrupts it,
    CapExceededError is raised instead, never a silent "infeasible".
    """
    cfg = cfg or SearchConfig()
    if target.n < 1:
        raise ValueError("target graph needs at least one vertex")
    h, w = _normalize_box(h, w)
    if h < 1:
        raise ValueError("box sides must be positive")
    if target.edge_count == 0:
        return _empty_target_witness(target.n, h, w)
    capped = None
    for h2 in range(1, h + 1):
        witness, stats = _row_run(target, h2, w, cfg)
        if witness is not None:
            return witness
        if stats["capped"]:
            capped = stats["capped"]
    if capped:
        raise CapExceededError(capped)
    return None


def _box_candidates(parameter: str, n: int, wmax: int, amax: int):
    """Candidate frames in increasing parameter order, ties by (h, w).

    Frames are searched in essential-exact mode, so every frame whose
    parameter could beat a later one must be listed; for width that means
    all heights h <= w, not just the square."""
    lb = lower_bounds(n)
    if parameter == "height":
        for h in range(1, wmax + 1):
            for w in range(max(h, -(-n // h)), wmax + 1):
                yield h, w
    elif parameter == "width":
        for w in range(lb.width_lb, wmax + 1):
            for h in range(1, w + 1):
                if h * w >= n:
                    yield h, w
    elif parameter == "area":
        boxes = [
            (h, w)
            for h in range(1, wmax + 1)
            for w in range(h, wmax + 1)
            if n <= h * w <= amax
        ]
        boxes.sort(key=lambda b: (b[0] * b[1], b[0], b[1]))
        yield from boxes
    elif parameter == "perimeter":
        boxes = [
            (h, w)
            for h in range(1, wmax + 1)
            for w in range(h, wmax + 1)
            if h * w >= n
        ]
        boxes.sort(key=lambda b: (b[0] + b[1], b[0], b[1]))
        yield from boxes
    else:
        raise ValueError(f"unknown parameter {parameter!r}")


def _param_value(parameter: str, h: int, w: int) -> int:
    if parameter == "height":
        return h
    if parameter == "width":
        return w
    if parameter == "area":
        return h * w
    return 2 * (h + w)


def _better_beyond_width_cap(parameter: str, value: int, wmax: int,
                             width_exhaustive: bool) -> bool:
    """Could an unexplored box wider than the cap beat the found value?

    Never when the cap reaches the compaction bound 2n-1.  With a narrower
    user cap, only width results stay proven (smaller squares were all
    inside the cap)."""
    if width_exhaustive or parameter == "width":
        return False
    if parameter == "height":
        return value > 1
    if parameter == "area":
        return value > wmax + 1
    return value > 2 * (wmax + 2)


def minimize(target: Graph, parameter: str,
             cfg: SearchConfig | None = None) -> SearchReport:
    """Minimize one box parameter by exhausting boxes in increasing order.

    The first feasible box proves the value, provided every strictly
    better box was exhausted; budget interruptions downgrade the status
    honestly rather than guessing.
    """
    from .graphs import canonical

    cfg = cfg or SearchConfig()
    if parameter not in PARAMETERS:
        raise ValueError(f"unknown parameter {parameter!r}")
    if target.n > 16:
        raise ValueError("search capped at 16 vertices")
    if target.n < 1:
        raise ValueError("target graph needs at least one vertex")
    t0 = time.monotonic()
    n = target.n
    if target.edge_count == 0:
        # edgeless targets have exact closed forms (heights and widths of
        # isolated vertices add); search would be pointless
        value = {"height": n, "width": n, "area": n * n, "perimeter": 4 * n}[parameter]
        return SearchReport(
            graph_key=canonical(target).key(),
            parameter=parameter,
            status=SearchStatus.PROVEN,
            value=value,
            witness=_empty_target_witness(n, n, n),
            boxes_examined=[(n, n, "feasible")],
            caps={"bypass": "edgeless"},
            config_fp=cfg.fingerprint(),
            wall_time_s=time.monotonic() - t0,
        )
    wmax = cfg.effective_width(n)
    amax = min(cfg.max_area or wmax * wmax, wmax * wmax)
    caps = {
        "max_width": wmax,
        "max_area": amax,
        "max_nodes": cfg.max_nodes,
        "time_budget_s": cfg.time_budget_s,
        "width_exhaustive": cfg.exhaustive_width(n),
    }
    boxes_examined: list[tuple[int, int, str]] = []
    total_nodes = 0
    prunes: dict[str, int] = {}
    capped_below = False
    witness = None
    value = None

    def account(stats):
        nonlocal total_nodes
        total_nodes += stats["nodes"]
        for k2, v in stats["prunes"].items():
            prunes[k2] = prunes.get(k2, 0) + v

    if parameter == "height":
        # one open-right run exhausts each whole row; a hit is then refined
        # to the minimal width at that height for a tight witness box
        for h in range(1, wmax + 1):
            wit, stats = _row_run(target, h, wmax, cfg)
            account(stats)
            if wit is None:
                if stats["capped"]:
                    boxes_examined.append((h, wmax, f"row-capped:{stats['capped']}"))
                    capped_below = True
                else:
                    boxes_examined.append((h, wmax, "row-exhausted"))
                continue
            value = h
            for w in range(max(h, -(-n // h)), wmax + 1):
                wit2, stats2 = _essential_run(target, h, w, cfg)
                account(stats2)
                if wit2 is not None:
                    boxes_examined.append((h, w, "feasible"))
                    witness = wit2
                    break
                boxes_examined.append((h, w, "exhausted"))
            assert witness is not None
            break
    else:
        for h, w in _box_candidates(parameter, n, wmax, amax):
            wit, stats = _essential_run(target, h, w, cfg)
            account(stats)
            if wit is not None:
                boxes_examined.append((h, w, "feasible"))
                witness = wit
                value = _param_value(parameter, h, w)
                break
            if stats["capped"]:
                boxes_examined.append((h, w, f"capped:{stats['capped']}"))
                capped_below = True
            else:
                boxes_examined.append((h, w, "exhausted"))

    if witness is not None:
        if capped_below or _better_beyond_width_cap(
            parameter, value, wmax, caps["width_exhaustive"]
        ):
            status = SearchStatus.UPPER_BOUND_ONLY
        else:
            status = SearchStatus.PROVEN
    else:
        status = SearchStatus.INFEASIBLE_UP_TO
    report = SearchReport(
        graph_key=canonical(target).key(),
        parameter=parameter,
        status=status,
        value=value,
        witness=witness,
        boxes_examined=boxes_examined,
        caps=caps,
        config_fp=cfg.fingerprint(),
        nodes=total_nodes,
        prunes=prunes,
        wall_time_s=time.monotonic() - t0,
    )
    return report


def frontier(target: Graph, cfg: SearchConfig | None = None) -> BoxFrontier:
    """Antichain of minimal feasible boxes with h <= w <= the width cap."""
    from .graphs import canonical

    cfg = cfg or SearchConfig()
    n = target.n
    key = canonical(target).key()
    if target.edge_count == 0:
        return BoxFrontier(key, (FrontierBox(n, n),), max_width_cap=n, exhausted=True)
    wmax = cfg.effective_width(n)
    boxes: list[FrontierBox] = []
    capped_regions: list[str] = []
    best_w = wmax + 1
    any_capped = False
    for h in range(1, wmax + 1):
        if h >= best_w:
            break
        found_w = None
        for w in range(max(h, -(-n // h)), min(best_w - 1, wmax) + 1):
            wit, stats = _essential_run(target, h, w, cfg)
            if stats["capped"]:
                any_capped = True
                capped_regions.append(f"h={h},w={w}:{stats['capped']}")
                break
            if wit is not None:
                found_w = w
                break
        if found_w is not None and found_w < best_w:
            boxes.append(FrontierBox(h, found_w, proven_minimal=not any_capped))
            best_w = found_w
    return BoxFrontier(
        key,
        tuple(boxes),
        max_width_cap=wmax,
        exhausted=not any_capped and cfg.exhaustive_width(n),
        capped_regions=tuple(capped_regions),
    )


# ---------------------------------------------------------------------------
# Specialized complete-graph solver
# ---------------------------------------------------------------------------


def _pinwheel_strips(h: int, w: int):
    """Boundary cover by four thickness-1 strips, the normal form every
    complete-graph representation can be driven to without changing its
    box (extract toward up, right, down, left in that order)."""
    return (
        (0, 0, 1, h),          # left, full height
        (1, h - 1, w - 1, h),  # top
        (w - 1, 1, w, h),      # right
        (1, 0, w, 1),          # bottom
    )


def solve_complete(n: int, h: int, w: int, cfg: SearchConfig | None = None,
                   collector: list | None = None,
                   collector_cap: int = 0) -> Representation | None:
    """Feasibility of K_n inside h x w via the four-strip boundary gauge.

    For n >= 6 every representation normalizes to the gauge inside its own
    bounding box, so searching each exact sub-box with the boundary fixed
    is exhaustive and equivalent in outcome to decide_feasible(K_n, h, w).
    """
    cfg = cfg or SearchConfig()
    if not (6 <= n <= 8):
        raise ValueError("specialized solver covers K6..K8 (K9+ are not representable)")
    h, w = _normalize_box(h, w)
    target = complete_graph(n)
    capped = None
    for bh in range(3, h + 1):
        for bw in range(bh, w + 1):
            if (bh - 2) * (bw - 2) < n - 4:
                continue
            strips = _pinwheel_strips(bh, bw)
            witness, stats = _run_kernel(
                bh, bw, target, cfg, fixed=strips,
                exhaustive=collector is not None,
                collector=collector, collector_cap=collector_cap,
            )
            if witness is not None:
                return witness
            if stats["capped"]:
                capped = stats["capped"]
    if capped:
        raise CapExceededError(capped)
    return None


# ---------------------------------------------------------------------------
# Catalog runs
# ---------------------------------------------------------------------------


def catalog(graph6_lines, cfg: SearchConfig | None = None, cache=None):
    """Per-graph reports for all four parameters, cached by canonical form.

    `cache` needs get(key) -> dict | None and put(key, dict); re-runs with
    the same config reuse earlier results.
    """
    from .graphs import canonical, from_graph6

    cfg = cfg or SearchConfig()
    fp = cfg.fingerprint()
    for line in graph6_lines:
        line = line.strip()
        if not line:
            continue
        g = from_graph6(line)
        key = canonical(g).key()
        reports = {}
        for parameter in PARAMETERS:
            cache_key = f"{key}:{parameter}:{fp}"
            hit = cache.get(cache_key) if cache is not None else None
            if hit is not None:
                reports[parameter] = SearchReport.from_dict(hit)
                continue
            rep = minimize(g, parameter, cfg)
            if cache is not None:
                cache.put(cache_key, rep.to_dict())
            reports[parameter] = rep
        yield line, g, reports
