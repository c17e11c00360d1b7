"""Exhaustive enumeration of small graphs up to isomorphism.

Canonical keys are computed by color refinement plus individualization, which
is fast enough to enumerate every connected graph on up to 8 vertices and
every boundaried gadget universe used by the replacement tables.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Iterator

from .graphs import BoundariedGraph, Graph


def _adj_masks(g: Graph) -> list[int]:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _refine(n: int, masks: list[int], colors: list[int]) -> list[int]:
    """Stable color refinement: split classes by neighbor color multisets."""
    while True:
        sigs = []
        for v in range(n):
            nb = masks[v]
            counts = []
            w = nb
            while w:
                b = w & -w
                counts.append(colors[b.bit_length() - 1])
                w ^= b
            counts.sort()
            sigs.append((colors[v], tuple(counts)))
        order = sorted(set(sigs))
        remap = {s: i for i, s in enumerate(order)}
        new = [remap[s] for s in sigs]
        if new == colors:
            return new
        colors = new


def _leaf_key(n: int, masks: list[int], colors: list[int]) -> tuple:
    perm = [0] * n
    for rank, v in enumerate(sorted(range(n), key=lambda v: (colors[v], v))):
        perm[v] = rank
    bits = 0
    for v in range(n):
        w = masks[v]
        while w:
            b = w & -w
            u = b.bit_length() - 1
            w ^= b
            if u > v:
                p, q = sorted((perm[v], perm[u]))
                bits |= 1 << (p * n + q)
    color_by_rank = tuple(c for c, _ in sorted(zip(colors, range(n)), key=lambda t: (t[0], t[1])))
    return (bits, color_by_rank)


def _canon_search(n: int, masks: list[int], colors: list[int], best: list) -> None:
    colors = _refine(n, masks, colors)
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(colors[v], []).append(v)
    target = None
    for c in sorted(cells):
        if len(cells[c]) > 1:
            target = cells[c]
            break
    if target is None:
        key = _leaf_key(n, masks, colors)
        if best[0] is None or key < best[0]:
            best[0] = key
        return
    for v in target:
        child = list(colors)
        child[v] = -1  # individualize; refinement renumbers compactly
        _canon_search(n, masks, child, best)


def canonical_key(g: Graph, boundary: tuple[int, ...] = ()) -> tuple:
    """Canonical key of a graph, optionally with an ordered boundary.

    Keys are equal exactly for isomorphic graphs; with a boundary, the
    isomorphism must map the i-th boundary vertex to the i-th boundary vertex
    (label-preserving).
    """
    n = g.n
    if n == 0:
        return (0, (), ())
    masks = _adj_masks(g)
    colors = [0] * n
    for i, v in enumerate(boundary):
        colors[v] = -(i + 1)  # negative: fixed seats, refined into stable ids
    best: list = [None]
    _canon_search(n, masks, colors, best)
    return (n,) + best[0]


def canonical_key_bg(bg: BoundariedGraph) -> tuple:
    """Canonical key of a boundaried graph (labels must be preserved)."""
    ordered = tuple(v for _, v in sorted((lab, v) for v, lab in bg.label_of))
    labels = tuple(sorted(bg.label_set))
    return (labels, canonical_key(bg.graph, ordered))


def connected_graphs_where(
    max_n: int, keep: Callable[[Graph], bool] | None = None
) -> dict[int, list[Graph]]:
    """All connected graphs with 1..max_n vertices satisfying `keep`, one per
    isomorphism class.

    Built by vertex augmentation: every connected graph on n+1 vertices arises
    from a connected graph on n vertices (delete a non-cut vertex, which always
    exists) by attaching a new vertex to a nonempty neighborhood.  `keep` must
    be closed under vertex deletion (e.g. a treewidth bound), which makes
    filtering at every level complete.
    """
    if max_n < 1:
        return {}
    base = [Graph(1)]
    if keep is not None:
        base = [g for g in base if keep(g)]
    out: dict[int, list[Graph]] = {1: base}
    for n in range(1, max_n):
        seen: dict[tuple, Graph] = {}
        for g in out[n]:
            base_edges = list(g.edges)
            for nb in range(1, 1 << n):
                edges = base_edges + [
                    (v, n) for v in range(n) if nb >> v & 1
                ]
                h = Graph(n + 1, edges)
                if keep is not None and not keep(h):
                    continue
                key = canonical_key(h)
                if key not in seen:
                    seen[key] = h
        out[n + 1] = [seen[k] for k in sorted(seen)]
    return out


@lru_cache(maxsize=8)
def connected_graphs(max_n: int) -> dict[int, list[Graph]]:
    """All connected graphs with 1..max_n vertices, one per isomorphism class."""
    return connected_graphs_where(max_n)


def all_graphs(max_n: int) -> Iterator[Graph]:
    """All graphs (connected or not) with 1..max_n vertices up to isomorphism.

    A graph is the disjoint union of its components, and components are drawn
    from the canonical connected pool, so multisets of pieces enumerated in
    non-decreasing (size, index) order cover every class exactly once.
    """
    from .graphs import disjoint_union

    conn = connected_graphs(max_n)

    def unions(budget: int, min_size: int, min_index: int) -> Iterator[Graph]:
        for size in range(min_size, budget + 1):
            start = min_index if size == min_size else 0
            for i in range(start, len(conn[size])):
                piece = conn[size][i]
                yield piece
                for rest in unions(budget - size, size, i):
                    yield disjoint_union(piece, rest)

    yield from unions(max_n, 1, 0)


def boundaried_universe(
    max_n: int,
    b: int,
    graph_filter: Callable[[Graph], bool] | None = None,
    graphs: Iterable[Graph] | None = None,
) -> list[BoundariedGraph]:
    """Connected boundaried graphs with labels exactly 1..b, up to b vertices
    designated in every non-equivalent way, ordered by size then canonically.

    `graph_filter` prunes base graphs (e.g. by treewidth) before boundary
    placement.
    """
    if graphs is None:
        pool: list[Graph] = []
        for n in range(1, max_n + 1):
            pool.extend(connected_graphs(max_n)[n])
    else:
        pool = [g for g in graphs if g.n <= max_n]
    out: list[BoundariedGraph] = []
    seen = set()
    for g in sorted(pool, key=lambda g: (g.n, g.m)):
        if g.n < b:
            continue
        if graph_filter is not None and not graph_filter(g):
            continue
        if b == 0:
            out.append(BoundariedGraph(g, {}))
            continue
        for combo in _ordered_tuples(g.n, b):
            bg = BoundariedGraph(g, {v: i + 1 for i, v in enumerate(combo)})
            key = canonical_key_bg(bg)
            if key not in seen:
                seen.add(key)
                out.append(bg)
    return out


def _ordered_tuples(n: int, b: int) -> Iterator[tuple[int, ...]]:
    def rec(prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == b:
            yield prefix
            return
        for v in range(n):
            if v not in prefix:
                yield from rec(prefix + (v,))

    yield from rec(())
