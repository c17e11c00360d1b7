"""Simple immutable graphs, boundaried graphs, gluing, and minor operations.

Vertices are always the dense range 0..n-1.  Every operation that changes the
vertex set returns a new graph whose vertices have been reassigned canonically
(order-preserving), so equal inputs always produce equal outputs.  All values
are immutable and safe to share across threads.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping

Edge = tuple[int, int]


class BudgetError(ValueError):
    """Raised when an operation is asked to exceed its instance-size budget."""


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph on vertices 0..n-1 (no loops, no parallels)."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) leaves vertex range 0..{n - 1}")
            norm.add(_norm_edge(u, v))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))
        adj = [set() for _ in range(n)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in adj))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def open_neighborhood(self, s: Iterable[int]) -> frozenset[int]:
        """N_G(S): vertices outside S adjacent to S."""
        sset = set(s)
        out = set()
        for v in sset:
            out |= self._adj[v]
        return frozenset(out - sset)

    def closed_neighborhood(self, s: Iterable[int]) -> frozenset[int]:
        sset = set(s)
        return frozenset(sset | self.open_neighborhood(sset))

    def boundary(self, s: Iterable[int]) -> frozenset[int]:
        """∂_G(S): vertices of S with at least one neighbor outside S."""
        sset = set(s)
        return frozenset(v for v in sset if self._adj[v] - sset)

    def induced_subgraph(self, keep: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Subgraph induced by `keep`, relabeled densely in sorted order.

        Returns (graph, old_ids) where old_ids[new] = old vertex id.
        """
        old_ids = tuple(sorted(set(keep)))
        if old_ids and not (0 <= old_ids[0] and old_ids[-1] < self.n):
            raise ValueError("induced set leaves vertex range")
        new_of = {old: new for new, old in enumerate(old_ids)}
        keep_set = set(old_ids)
        edges = [
            (new_of[u], new_of[v]) for u, v in self.edges if u in keep_set and v in keep_set
        ]
        return Graph(len(old_ids), edges), old_ids

    def delete_vertices(self, drop: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        keep = set(self.vertices) - set(drop)
        return self.induced_subgraph(keep)

    def connected_components(self) -> list[frozenset[int]]:
        """Components as vertex sets, ordered by smallest contained vertex."""
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self._adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.connected_components()) == 1

    def is_acyclic(self) -> bool:
        """True iff the graph is a forest."""
        # union-find; a cycle closes when an edge joins an existing component
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


# ---------------------------------------------------------------------------
# generators


def make_grid(t: int) -> Graph:
    """The t x t grid: vertices (x,y), 1 <= x,y <= t, edges at L1-distance 1.

    Vertex (x,y) gets id (x-1)*t + (y-1).
    """
    if t < 1:
        raise ValueError("grid dimension must be at least 1")
    edges = []
    for x in range(t):
        for y in range(t):
            v = x * t + y
            if x + 1 < t:
                edges.append((v, (x + 1) * t + y))
            if y + 1 < t:
                edges.append((v, x * t + y + 1))
    return Graph(t * t, edges)


def grid_vertex(t: int, x: int, y: int) -> int:
    """Id of grid vertex (x,y) with 1-based coordinates."""
    if not (1 <= x <= t and 1 <= y <= t):
        raise ValueError(f"({x},{y}) outside {t}x{t} grid")
    return (x - 1) * t + (y - 1)


def make_gamma(t: int) -> Graph:
    """Triangulated grid: the t x t grid plus, for 1 <= x,y <= t-1, the
    diagonal (x+1,y)-(x,y+1), plus edges from (t,t) to every border vertex.
    """
    if t < 2:
        raise ValueError("triangulated grid needs dimension at least 2")
    base = make_grid(t)
    edges = set(base.edges)
    for x in range(1, t):
        for y in range(1, t):
            edges.add(_norm_edge(grid_vertex(t, x + 1, y), grid_vertex(t, x, y + 1)))
    corner = grid_vertex(t, t, t)
    for x in range(1, t + 1):
        for y in range(1, t + 1):
            if x in (1, t) or y in (1, t):
                v = grid_vertex(t, x, y)
                if v != corner:
                    edges.add(_norm_edge(corner, v))
    return Graph(t * t, edges)


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    edges = list(g1.edges) + [(u + g1.n, v + g1.n) for u, v in g2.edges]
    return Graph(g1.n + g2.n, edges)


# ---------------------------------------------------------------------------
# minor operations


def contract_edge(g: Graph, u: int, v: int) -> Graph:
    """Contract edge uv; the merged vertex takes min(u,v)'s slot and ids are
    reassigned densely.  Loops and parallels arising are dropped.
    """
    if not g.has_edge(u, v):
        raise ValueError(f"edge ({u},{v}) not in graph")
    lo, hi = _norm_edge(u, v)
    relabel = {}
    for w in range(g.n):
        if w == hi:
            relabel[w] = lo
        else:
            relabel[w] = w if w < hi else w - 1
    edges = set()
    for a, b in g.edges:
        na, nb = relabel[a], relabel[b]
        if na != nb:
            edges.add(_norm_edge(na, nb))
    return Graph(g.n - 1, edges)


def delete_edge(g: Graph, u: int, v: int) -> Graph:
    if not g.has_edge(u, v):
        raise ValueError(f"edge ({u},{v}) not in graph")
    return Graph(g.n, g.edges - {_norm_edge(u, v)})


def delete_vertex(g: Graph, v: int) -> Graph:
    if not (0 <= v < g.n):
        raise ValueError(f"vertex {v} not in graph")
    return g.delete_vertices([v])[0]


def minor_op(g: Graph, op: str, *args: int) -> Graph:
    """Dispatch a single minor operation: 'contract', 'delete_edge', 'delete_vertex'."""
    if op == "contract":
        return contract_edge(g, *args)
    if op == "delete_edge":
        return delete_edge(g, *args)
    if op == "delete_vertex":
        return delete_vertex(g, *args)
    raise ValueError(f"unknown minor operation {op!r}")


# ---------------------------------------------------------------------------
# boundaried graphs and gluing


class BoundariedGraph:
    """A graph with an injectively labeled boundary.

    Labels are positive integers; a t-boundaried graph has all labels in 1..t.
    """

    __slots__ = ("graph", "label_of")

    def __init__(self, graph: Graph, labels: Mapping[int, int]):
        label_of = dict(labels)
        for v, lab in label_of.items():
            if not (0 <= v < graph.n):
                raise ValueError(f"boundary vertex {v} not in graph")
            if lab < 1:
                raise ValueError(f"label {lab} must be a positive integer")
        if len(set(label_of.values())) != len(label_of):
            raise ValueError("boundary labeling must be injective")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(
            self, "label_of", tuple(sorted(label_of.items()))
        )

    def __setattr__(self, name, value):
        raise AttributeError("BoundariedGraph is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, BoundariedGraph)
            and self.graph == other.graph
            and self.label_of == other.label_of
        )

    def __hash__(self):
        return hash((self.graph, self.label_of))

    def __repr__(self):
        return f"BoundariedGraph(n={self.graph.n}, labels={dict(self.label_of)})"

    @property
    def boundary(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.label_of)

    @property
    def labels(self) -> dict[int, int]:
        return dict(self.label_of)

    @property
    def label_set(self) -> frozenset[int]:
        """Λ(G), the set of labels in use."""
        return frozenset(lab for _, lab in self.label_of)

    def vertex_of_label(self, lab: int) -> int:
        for v, l in self.label_of:
            if l == lab:
                return v
        raise KeyError(lab)

    def is_t_boundaried(self, t: int) -> bool:
        return all(lab <= t for lab in self.label_set)


class AnnotatedBoundariedGraph:
    """A boundaried graph together with an annotated vertex subset."""

    __slots__ = ("base", "annotated")

    def __init__(self, base: BoundariedGraph, annotated: Iterable[int]):
        ann = frozenset(annotated)
        for v in ann:
            if not (0 <= v < base.graph.n):
                raise ValueError(f"annotated vertex {v} not in graph")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "annotated", ann)

    def __setattr__(self, name, value):
        raise AttributeError("AnnotatedBoundariedGraph is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, AnnotatedBoundariedGraph)
            and self.base == other.base
            and self.annotated == other.annotated
        )

    def __hash__(self):
        return hash((self.base, self.annotated))


def glue(
    g1: BoundariedGraph, g2: BoundariedGraph
) -> tuple[Graph, dict[int, int], dict[int, int]]:
    """Glue two boundaried graphs by identifying equally-labeled vertices.

    Returns (graph, heir1, heir2) where heir_i maps each vertex of input i to
    its vertex in the result.  Parallel edges arising from both sides collapse
    to a single edge (simple-graph semantics).
    """
    lab1 = g1.labels
    lab2 = g2.labels
    vert_of_label1 = {lab: v for v, lab in lab1.items()}
    shared = set(vert_of_label1) & set(lab2.values())

    heir1 = {v: v for v in g1.graph.vertices}
    heir2: dict[int, int] = {}
    nxt = g1.graph.n
    for v in g2.graph.vertices:
        lab = lab2.get(v)
        if lab is not None and lab in shared:
            heir2[v] = vert_of_label1[lab]
        else:
            heir2[v] = nxt
            nxt += 1
    edges = set(g1.graph.edges)
    for u, v in g2.graph.edges:
        edges.add(_norm_edge(heir2[u], heir2[v]))
    return Graph(nxt, edges), heir1, heir2


def glue_annotated(
    a1: AnnotatedBoundariedGraph, a2: AnnotatedBoundariedGraph
) -> tuple[Graph, frozenset[int]]:
    """Glue annotated boundaried graphs; annotations map through the heirs."""
    glued, heir1, heir2 = glue(a1.base, a2.base)
    ann = {heir1[v] for v in a1.annotated} | {heir2[v] for v in a2.annotated}
    return glued, frozenset(ann)


# ---------------------------------------------------------------------------
# separations


class Separation:
    """A separation (A1, A2): A1 ∪ A2 = V, no edge between the strict sides."""

    __slots__ = ("a1", "a2")

    def __init__(self, a1: Iterable[int], a2: Iterable[int]):
        object.__setattr__(self, "a1", frozenset(a1))
        object.__setattr__(self, "a2", frozenset(a2))

    def __setattr__(self, name, value):
        raise AttributeError("Separation is immutable")

    def __repr__(self):
        return f"Separation(|A1|={len(self.a1)}, |A2|={len(self.a2)}, order={self.order})"

    @property
    def separator(self) -> frozenset[int]:
        return self.a1 & self.a2

    @property
    def order(self) -> int:
        return len(self.a1 & self.a2)

    def is_separation_of(self, g: Graph) -> bool:
        if self.a1 | self.a2 != frozenset(g.vertices):
            return False
        left = self.a1 - self.a2
        right = self.a2 - self.a1
        return not any((u in left and v in right) or (u in right and v in left) for u, v in g.edges)

    def is_balanced_for(self, q: Iterable[int]) -> bool:
        """2/3-balance: each strict side holds at most ceil(2|Q|/3) of Q."""
        qs = set(q)
        cap = -(-2 * len(qs) // 3)
        return (
            len(qs & (self.a1 - self.a2)) <= cap and len(qs & (self.a2 - self.a1)) <= cap
        )


# ---------------------------------------------------------------------------
# canonical forms (small graphs only) and minor containment oracle


def canonical_form(g: Graph, max_vertices: int = 8) -> Graph:
    """Canonical relabeling by exhaustive permutation search; small graphs only.

    Two graphs on at most `max_vertices` vertices are isomorphic iff their
    canonical forms compare equal.
    """
    if g.n > max_vertices:
        raise BudgetError(f"canonical_form limited to {max_vertices} vertices, got {g.n}")
    if g.n <= 1:
        return g
    best = None
    verts = range(g.n)
    for perm in itertools.permutations(verts):
        key = tuple(sorted(_norm_edge(perm[u], perm[v]) for u, v in g.edges))
        if best is None or key < best:
            best = key
    return Graph(g.n, best)


def graphs_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Isomorphism check: canonical forms up to 8 vertices, refinement search above."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if g1.n <= 8:
        return canonical_form(g1) == canonical_form(g2)
    from .enumeration import canonical_key

    return canonical_key(g1) == canonical_key(g2)


def _subgraph_embeds(pattern: Graph, host: Graph) -> bool:
    """Backtracking test: does `host` contain `pattern` as a subgraph?"""
    if pattern.n > host.n or pattern.m > host.m:
        return False
    # order pattern vertices to keep partial assignments connected when possible
    order = sorted(pattern.vertices, key=lambda v: -pattern.degree(v))
    assigned: dict[int, int] = {}
    used = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        p = order[i]
        need = [assigned[q] for q in pattern.neighbors(p) if q in assigned]
        if need:
            candidates = set(host.neighbors(need[0]))
            for h in need[1:]:
                candidates &= host.neighbors(h)
            candidates -= used
        else:
            candidates = set(host.vertices) - used
        for h in sorted(candidates):
            if host.degree(h) < pattern.degree(p):
                continue
            assigned[p] = h
            used.add(h)
            if extend(i + 1):
                return True
            del assigned[p]
            used.discard(h)
        return False

    return extend(0)


def contains_grid_minor(g: Graph, t: int, max_vertices: int = 14) -> bool:
    """Test-only oracle: does g contain the t x t grid as a minor?

    Exhaustive search over edge-contraction sequences with a subgraph-embedding
    base case at every level.  Hard budget on instance size; production code
    never calls this.
    """
    if t < 1 or t > 3:
        raise ValueError("grid minor oracle supports 1 <= t <= 3")
    if g.n > max_vertices:
        raise BudgetError(f"instance too large for grid-minor oracle (n={g.n} > {max_vertices})")
    if t == 1:
        return g.n >= 1
    target = make_grid(t)
    level = {g}
    seen = set()
    while level:
        nxt = set()
        for h in level:
            if h.n < target.n or h.m < target.m:
                continue
            if _subgraph_embeds(target, h):
                return True
            for u, v in h.edges:
                c = contract_edge(h, u, v)
                key = (c.n, c.edges)
                if key not in seen:
                    seen.add(key)
                    nxt.add(c)
        level = nxt
    return False
