"""Small simple graphs: families, graph6, isomorphism, planarity.

Graphs are immutable bitset adjacency matrices.  Canonical labeling is an
individualization-refinement search with a hard n <= 16 cap, which is exact
at this scale and keeps certificates reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

__all__ = [
    "Graph",
    "CanonicalForm",
    "Graph6Error",
    "empty_graph",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "complete_bipartite",
    "grid_graph",
    "disjoint_union",
    "family",
    "graph_from_edges",
    "from_graph6",
    "to_graph6",
    "from_edge_list_text",
    "to_edge_list_text",
    "canonical",
    "isomorphic",
    "is_isomorphic",
    "is_planar",
    "split_by_direction",
    "enumerate_graphs",
    "connected_graphs_up_to_iso",
]

ISO_CAP = 16


class Graph6Error(Exception):
    """Malformed graph6 input."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 as bitset rows."""

    n: int
    rows: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        assert len(self.rows) == self.n
        for i, row in enumerate(self.rows):
            assert not (row >> self.n), "adjacency bits out of range"
            assert not (row >> i) & 1, "self-loop"

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def degree(self, i: int) -> int:
        return self.rows[i].bit_count()

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)
                if self.has_edge(i, j)]

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted((self.degree(i) for i in range(self.n)), reverse=True))

    def permuted(self, perm) -> "Graph":
        """Relabel: vertex i becomes perm[i]."""
        rows = [0] * self.n
        for i in range(self.n):
            for j in range(self.n):
                if (self.rows[i] >> j) & 1:
                    rows[perm[i]] |= 1 << perm[j]
        return Graph(self.n, tuple(rows))

    def with_labels(self, labels) -> "Graph":
        labels = tuple(labels)
        assert len(labels) == self.n
        return Graph(self.n, self.rows, labels)

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple((full ^ r ^ (1 << i)) for i, r in enumerate(self.rows)))

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            i = 0
            f = frontier
            while f:
                if f & 1:
                    nxt |= self.rows[i]
                f >>= 1
                i += 1
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1

    def label_of(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def graph_from_edges(n: int, edges) -> Graph:
    rows = [0] * n
    for u, v in edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"bad edge ({u},{v}) for n={n}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


def empty_graph(n: int) -> Graph:
    if n < 0:
        raise ValueError("n must be >= 0")
    return Graph(n, (0,) * n)


def path_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, combinations(range(n), 2))


def complete_bipartite(p: int, q: int) -> Graph:
    if p < 1 or q < 1:
        raise ValueError("parts must be >= 1")
    return graph_from_edges(p + q, [(i, p + j) for i in range(p) for j in range(q)])


def grid_graph(h: int, w: int) -> Graph:
    if h < 1 or w < 1:
        raise ValueError("grid needs positive sides")
    edges = []
    for y in range(h):
        for x in range(w):
            v = y * w + x
            if x + 1 < w:
                edges.append((v, v + 1))
            if y + 1 < h:
                edges.append((v, v + w))
    return graph_from_edges(h * w, edges)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    rows = list(g1.rows) + [r << g1.n for r in g2.rows]
    return Graph(g1.n + g2.n, tuple(rows))


def family(kind: str, *params: int) -> Graph:
    table = {
        "empty": empty_graph,
        "path": path_graph,
        "cycle": cycle_graph,
        "complete": complete_graph,
        "complete_bipartite": complete_bipartite,
        "grid": grid_graph,
    }
    if kind not in table:
        raise ValueError(f"unknown family {kind!r}")
    return table[kind](*params)


# ---------------------------------------------------------------------------
# graph6 (standard short form, n <= 62, no header)
# ---------------------------------------------------------------------------


def to_graph6(g: Graph) -> str:
    if g.n > 62:
        raise Graph6Error("short-form graph6 supports n <= 62")
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = [chr(63 + g.n)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(63 + val))
    return "".join(chars)


def from_graph6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[10:]
    if not text:
        raise Graph6Error("empty graph6 string")
    n = ord(text[0]) - 63
    if not (0 <= n <= 62):
        raise Graph6Error(f"bad size byte {text[0]!r}")
    body = text[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise Graph6Error(f"expected {need} body chars for n={n}, got {len(body)}")
    bits = []
    for ch in body:
        val = ord(ch) - 63
        if not (0 <= val < 64):
            raise Graph6Error(f"bad body char {ch!r}")
        bits.extend((val >> k) & 1 for k in range(5, -1, -1))
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    if any(bits[idx:]):
        raise Graph6Error("non-zero padding bits")
    return graph_from_edges(n, edges)


# ---------------------------------------------------------------------------
# Edge-list text form: "n; u-v, u-v, ..."
# ---------------------------------------------------------------------------


def to_edge_list_text(g: Graph) -> str:
    return f"{g.n}; " + ", ".join(f"{u}-{v}" for u, v in g.edges())


def from_edge_list_text(text: str) -> Graph:
    head, _, tail = text.partition(";")
    n = int(head.strip())
    edges = []
    tail = tail.strip()
    if tail:
        for part in tail.split(","):
            u, _, v = part.strip().partition("-")
            edges.append((int(u), int(v)))
    return graph_from_edges(n, edges)


# ---------------------------------------------------------------------------
# Canonical labeling (individualization-refinement, n <= 16)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical adjacency encoding plus one certifying permutation.

    `permutation[v]` is the canonical position of vertex v.  Two graphs are
    isomorphic iff their encodings are equal.
    """

    encoding: bytes
    permutation: tuple[int, ...]

    def key(self) -> str:
        return self.encoding.hex()


def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """1-dimensional refinement to an equitable ordered partition.

    New sub-cells are ordered by signature, so the result depends only on
    the isomorphism type, never on vertex names.
    """
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        masks = [sum(1 << v for v in c) for c in cells]
        for ci, cell in enumerate(cells):
            if len(cell) <= 1:
                continue
            sigs = {}
            for v in cell:
                sig = tuple((g.rows[v] & m).bit_count() for m in masks)
                sigs.setdefault(sig, []).append(v)
            if len(sigs) > 1:
                parts = [sigs[s] for s in sorted(sigs)]
                cells[ci:ci + 1] = parts
                changed = True
                break
    return cells


def _is_homogeneous(g: Graph, cell: list[int]) -> bool:
    """All cell members interchangeable by an automorphism swapping any two.

    Holds when the induced subgraph is complete or empty and every member
    has the same neighbourhood outside the cell; then only one branch is
    needed.
    """
    mask = sum(1 << v for v in cell)
    outside = {g.rows[v] & ~mask for v in cell}
    if len(outside) > 1:
        return False
    inside = [(g.rows[v] & mask).bit_count() for v in cell]
    k = len(cell) - 1
    return all(d == 0 for d in inside) or all(d == k for d in inside)


def _encode(g: Graph, order: list[int]) -> bytes:
    """Adjacency of g with vertices relabeled by position in `order`."""
    n = g.n
    bits = []
    for i in range(n):
        ri = g.rows[order[i]]
        for j in range(i + 1, n):
            bits.append((ri >> order[j]) & 1)
    out = bytearray([n])
    for k in range(0, len(bits), 8):
        val = 0
        for b in bits[k:k + 8]:
            val = (val << 1) | b
        val <<= (8 - len(bits[k:k + 8])) % 8
        out.append(val)
    return bytes(out)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def canonical(g: Graph) -> CanonicalForm:
    """Canonical form by exhaustive refinement/backtracking search.

    Minimizes the packed adjacency encoding over the invariant leaf set of
    the individualization-refinement tree.  Automorphisms discovered from
    equal leaves prune equivalent branches (only ones fixing the current
    individualization path, which keeps the pruning sound); homogeneous
    cells collapse to a single branch, which keeps K_n and E_n linear.
    """
    if g.n > ISO_CAP:
        raise ValueError(f"canonical labeling capped at n <= {ISO_CAP}")
    if g.n == 0:
        return CanonicalForm(b"\x00", ())

    best: list = [None, None]  # encoding, order
    uf = _UnionFind(g.n)
    autos: list[tuple[int, ...]] = []

    def record_auto(order: list[int]) -> None:
        pos = {v: i for i, v in enumerate(order)}
        gamma = tuple(best[1][pos[v]] for v in range(g.n))
        for v in range(g.n):
            uf.union(v, gamma[v])
        if len(autos) < 64:
            inv = [0] * g.n
            for v, w in enumerate(gamma):
                inv[w] = v
            autos.append(gamma)
            autos.append(tuple(inv))

    def search(cells: list[list[int]], path: tuple[int, ...]) -> None:
        cells = _refine(g, cells)
        target = next((c for c in cells if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            enc = _encode(g, order)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, order
            elif enc == best[0]:
                record_auto(order)
            return
        idx = cells.index(target)
        if _is_homogeneous(g, target):
            candidates = [min(target)]
        else:
            candidates = sorted(target)
        tried: list[int] = []
        for v in candidates:
            if not path and any(uf.find(v) == uf.find(u) for u in tried):
                continue
            if path and any(
                all(ga[p] == p for p in path) and any(ga[u] == v for u in tried)
                for ga in autos
            ):
                continue
            tried.append(v)
            rest = [u for u in target if u != v]
            search(cells[:idx] + [[v], rest] + cells[idx + 1:], path + (v,))

    search([list(range(g.n))], ())
    order = best[1]
    perm = [0] * g.n
    for pos, v in enumerate(order):
        perm[v] = pos
    return CanonicalForm(best[0], tuple(perm))


def isomorphic(g1: Graph, g2: Graph) -> tuple[int, ...] | None:
    """A vertex map g1 -> g2 certifying isomorphism, or None."""
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return None
    if g1.degree_sequence() != g2.degree_sequence():
        return None
    c1 = canonical(g1)
    c2 = canonical(g2)
    if c1.encoding != c2.encoding:
        return None
    inv2 = [0] * g2.n
    for v, pos in enumerate(c2.permutation):
        inv2[pos] = v
    return tuple(inv2[c1.permutation[v]] for v in range(g1.n))


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    return isomorphic(g1, g2) is not None


# ---------------------------------------------------------------------------
# Planarity
# ---------------------------------------------------------------------------


def is_planar(g: Graph) -> bool:
    if g.n > ISO_CAP:
        raise ValueError(f"planarity check capped at n <= {ISO_CAP}")
    if g.edge_count <= 8:
        return True  # too few edges for any Kuratowski subdivision
    import networkx as nx

    ng = nx.Graph()
    ng.add_nodes_from(range(g.n))
    ng.add_edges_from(g.edges())
    ok, _ = nx.check_planarity(ng)
    return ok


def split_by_direction(rep) -> tuple[Graph, Graph]:
    """Partition a representation's edges into (vertical, horizontal) graphs.

    Both parts are bar visibility graphs, hence planar; the test suite
    leans on that as a consistency check of the sight semantics.
    """
    from . import geometry

    names = rep.names
    index = {n: i for i, n in enumerate(names)}
    rows_v = [0] * len(names)
    rows_h = [0] * len(names)
    for e in geometry.sight_edges(rep):
        i, j = index[e.a], index[e.b]
        rows = rows_v if e.orientation == "v" else rows_h
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return (
        Graph(len(names), tuple(rows_v), labels=names),
        Graph(len(names), tuple(rows_h), labels=names),
    )


# ---------------------------------------------------------------------------
# Enumeration helpers
# ---------------------------------------------------------------------------


def enumerate_graphs(n: int):
    """All labeled graphs on n vertices (2^(n choose 2) of them)."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[k] for k in range(len(pairs)) if (mask >> k) & 1]
        yield graph_from_edges(n, edges)


def connected_graphs_up_to_iso(n: int) -> list[Graph]:
    """Connected graphs on exactly n vertices, one per isomorphism class."""
    seen: set[bytes] = set()
    out: list[Graph] = []
    for g in enumerate_graphs(n):
        if not g.is_connected():
            continue
        enc = canonical(g).encoding
        if enc not in seen:
            seen.add(enc)
            out.append(g)
    return out
