"""Boundary signatures, gadget equivalence, replacement tables, kernelization.

A signature is the normalized table of cheapest interior completions per
boundary state.  Equal signatures witness gadget equivalence up to an integer
transposition constant (the difference of the normalization offsets): gluing
any context onto two gadgets with equal signatures yields optima differing by
exactly that constant.  Signature equality may split true equivalence classes
but never merges distinct ones; soundness is certified mechanically by probing
glued contexts against the exact oracles during table construction.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import problems as problems_mod
from .dp import DP_WIDTH_BUDGET, interface_cost_table, machine_for
from .enumeration import boundaried_universe
from .graphs import BoundariedGraph, BudgetError, Graph, glue
from .problems import ProblemDefinition, opt_fast
from .protrusions import Protrusion, iter_protrusions, validate_protrusion
from .treedec import exact_treewidth, heuristic_decomposition

logger = logging.getLogger(__name__)

BRUTE_SIGNATURE_BUDGET = 16

IN, DOM, NEED = 0, 1, 2


class TableConstructionError(RuntimeError):
    """A context-probing certificate failed; the table must not be used."""


# ---------------------------------------------------------------------------
# canonical boundary state spaces


def _rgs_strings(k: int) -> list[tuple[int, ...]]:
    """Restricted growth strings of length k: canonical set partitions."""
    if k == 0:
        return [()]
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], mx: int) -> None:
        if len(prefix) == k:
            out.append(prefix)
            return
        for c in range(mx + 2):
            rec(prefix + (c,), max(mx, c))

    rec((), -1)
    return out


@lru_cache(maxsize=64)
def state_space(problem_name: str, b: int) -> tuple:
    """Canonically ordered boundary states for a problem at boundary size b."""
    kind = machine_for(problem_name).name
    if kind in ("vertex-cover", "independent-set"):
        return tuple(range(1 << b))
    if kind == "dominating-set":
        states = []

        def rec(prefix: tuple[int, ...]) -> None:
            if len(prefix) == b:
                states.append(prefix)
                return
            for st in (IN, DOM, NEED):
                rec(prefix + (st,))

        rec(())
        return tuple(states)
    if kind == "feedback-vertex-set":
        states = []
        for mask in range(1 << b):
            kept = [i for i in range(b) if not mask >> i & 1]
            for rgs in _rgs_strings(len(kept)):
                states.append((mask, rgs))
        return tuple(states)
    raise ValueError(f"no signature state space for {problem_name!r}")


def _blocks_to_rgs(kept_order: list[int], blocks) -> tuple[int, ...]:
    """Translate a partition into the canonical restricted growth string."""
    block_id: dict = {}
    labels = []
    nxt = 0
    member_of = {}
    for blk in blocks:
        for v in blk:
            member_of[v] = blk
    for v in kept_order:
        blk = member_of[v]
        if blk not in block_id:
            block_id[blk] = nxt
            nxt += 1
        labels.append(block_id[blk])
    return tuple(labels)


# ---------------------------------------------------------------------------
# raw cost tables: DP route and brute route


def _raw_table_dp(p: ProblemDefinition, bg: BoundariedGraph) -> dict:
    boundary = tuple(v for _, v in sorted((lab, v) for v, lab in bg.label_of))
    pos = {v: i for i, v in enumerate(boundary)}
    table = interface_cost_table(p.name, bg.graph, boundary)
    kind = machine_for(p.name).name
    out = {}
    if kind in ("vertex-cover", "independent-set"):
        for state, cost in table.items():
            mask = sum(1 << pos[v] for v in state)
            out[mask] = cost
    elif kind == "dominating-set":
        for state, cost in table.items():
            status = dict(state)
            out[tuple(status[v] for v in boundary)] = cost
    else:  # feedback-vertex-set
        for (dele, blocks), cost in table.items():
            mask = sum(1 << pos[v] for v in dele)
            kept = [v for v in boundary if v not in dele]
            out[(mask, _blocks_to_rgs(kept, blocks))] = cost
    return out


def _raw_table_brute(p: ProblemDefinition, bg: BoundariedGraph) -> dict:
    """Independent reference route: enumerate all interior solution sets."""
    g = bg.graph
    if g.n > BRUTE_SIGNATURE_BUDGET:
        raise BudgetError(f"brute signature budget is {BRUTE_SIGNATURE_BUDGET} (got {g.n})")
    boundary = tuple(v for _, v in sorted((lab, v) for v, lab in bg.label_of))
    pos = {v: i for i, v in enumerate(boundary)}
    bset = frozenset(boundary)
    kind = machine_for(p.name).name
    edge_masks = [(1 << u) | (1 << v) for u, v in sorted(g.edges)]
    closed = [0] * g.n
    for v in g.vertices:
        closed[v] = 1 << v
        for u in g.neighbors(v):
            closed[v] |= 1 << u
    better = max if p.maximize else min
    out: dict = {}

    def record(state, cost: int) -> None:
        if state not in out or better(cost, out[state]) == cost:
            out[state] = cost

    for smask in range(1 << g.n):
        size = bin(smask).count("1")
        if kind == "vertex-cover":
            if any(em & smask == 0 for em in edge_masks):
                continue
            record(sum(1 << pos[v] for v in bset if smask >> v & 1), size)
        elif kind == "independent-set":
            if any(em & smask == em for em in edge_masks):
                continue
            record(sum(1 << pos[v] for v in bset if smask >> v & 1), size)
        elif kind == "dominating-set":
            dominated = 0
            for v in g.vertices:
                if smask >> v & 1:
                    dominated |= closed[v]
            ok = True
            status = []
            for v in g.vertices:
                if v in bset:
                    continue
                if not dominated >> v & 1:
                    ok = False
                    break
            if not ok:
                continue
            for v in boundary:
                if smask >> v & 1:
                    status.append(IN)
                elif dominated >> v & 1:
                    status.append(DOM)
                else:
                    status.append(NEED)
            record(tuple(status), size)
        else:  # feedback-vertex-set
            parent = {v: v for v in g.vertices if not smask >> v & 1}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            acyclic = True
            for u, v in g.edges:
                if smask >> u & 1 or smask >> v & 1:
                    continue
                ru, rv = find(u), find(v)
                if ru == rv:
                    acyclic = False
                    break
                parent[ru] = rv
            if not acyclic:
                continue
            mask = sum(1 << pos[v] for v in bset if smask >> v & 1)
            kept = [v for v in boundary if not smask >> v & 1]
            roots: dict[int, list[int]] = {}
            for v in kept:
                roots.setdefault(find(v), []).append(v)
            blocks = [frozenset(vs) for vs in roots.values()]
            record((mask, _blocks_to_rgs(kept, blocks)), size)
    return out


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    """Normalized boundary cost table.

    entries follow the canonical state order of state_space(problem, b); None
    marks infeasible states.  Defined entries live in [0, 2*f(b)]: costs
    farther than twice the separability allowance from the anchor never occur
    in an optimal composition, so they are truncated to the infeasible marker.
    """

    problem: str
    b: int
    entries: tuple
    offset: int

    @property
    def key(self) -> tuple:
        return (self.b, self.entries)


def _normalize(p: ProblemDefinition, raw: dict, b: int) -> Signature:
    states = state_space(p.name, b)
    if not raw:
        return Signature(p.name, b, (None,) * len(states), 0)
    window = 2 * p.separability_f(b)
    if p.maximize:
        anchor = max(raw.values())
        kept = {s: v for s, v in raw.items() if anchor - v <= window}
    else:
        anchor = min(raw.values())
        kept = {s: v for s, v in raw.items() if v - anchor <= window}
    offset = min(kept.values())
    entries = tuple(kept[s] - offset if s in kept else None for s in states)
    return Signature(p.name, b, entries, offset)


def compute_signature(p: ProblemDefinition, bg: BoundariedGraph, method: str = "auto") -> Signature:
    """Signature of a boundaried gadget.

    The dynamic program over a heuristic decomposition is the primary route;
    plain interior enumeration is the reference route for small gadgets and
    the fallback when the decomposition is too wide.
    """
    b = len(bg.label_of)
    if method == "brute":
        return _normalize(p, _raw_table_brute(p, bg), b)
    if method == "dp":
        return _normalize(p, _raw_table_dp(p, bg), b)
    td = heuristic_decomposition(bg.graph)
    if td.width + b <= DP_WIDTH_BUDGET:
        return _normalize(p, _raw_table_dp(p, bg), b)
    if bg.graph.n <= BRUTE_SIGNATURE_BUDGET:
        return _normalize(p, _raw_table_brute(p, bg), b)
    raise BudgetError(
        f"gadget too large for signature computation (n={bg.graph.n}, width {td.width})"
    )


def test_equivalence(
    p: ProblemDefinition, g1: BoundariedGraph, g2: BoundariedGraph
) -> int | None:
    """Transposition constant c with OPT(g2 ⊕ F) = OPT(g1 ⊕ F) + c for every
    context F, decided by signature equality; None when signatures differ.
    """
    if g1.label_set != g2.label_set:
        raise ValueError("label sets differ; gadgets are incomparable")
    s1 = compute_signature(p, g1)
    s2 = compute_signature(p, g2)
    if s1.entries != s2.entries:
        return None
    return s2.offset - s1.offset


# ---------------------------------------------------------------------------
# replacement tables


@dataclass(frozen=True)
class TableRow:
    signature: Signature
    representative: BoundariedGraph
    rep_offset: int


class ReplacementTable:
    """Map from signatures to minimum-size representatives."""

    def __init__(self, problem: str, t: int, rows: dict[tuple, TableRow]):
        self.problem = problem
        self.t = t
        self.rows = rows

    @property
    def max_rep_size(self) -> int:
        return max((row.representative.graph.n for row in self.rows.values()), default=0)

    def __len__(self) -> int:
        return len(self.rows)

    def lookup(self, sig: Signature) -> TableRow | None:
        return self.rows.get(sig.key)


def _tw_at_most_small(g: Graph, t: int) -> bool:
    return exact_treewidth(g, max_vertices=12)[0] <= t


@lru_cache(maxsize=32)
def _gadget_pool(size_bound: int, t: int) -> tuple[Graph, ...]:
    """Connected graphs of treewidth <= t up to size_bound vertices.

    Treewidth bounds are closed under vertex deletion, so the level-filtered
    augmentation enumerates the whole pool.
    """
    from .enumeration import connected_graphs_where

    if t == 0:
        keep = lambda g: g.m == 0
    elif t == 1:
        keep = Graph.is_acyclic
    else:
        keep = lambda g: _tw_at_most_small(g, t)
    pools = connected_graphs_where(size_bound, keep)
    out: list[Graph] = []
    for n in sorted(pools):
        out.extend(pools[n])
    return tuple(out)


@lru_cache(maxsize=16)
def certificate_contexts(b: int, max_n: int) -> tuple[BoundariedGraph, ...]:
    """Every connected boundaried context with labels 1..b up to max_n vertices."""
    return tuple(boundaried_universe(max_n, b))


def _random_context(rng: random.Random, b: int, max_n: int) -> BoundariedGraph:
    n = rng.randint(max(b, 1), max_n)
    edges = set()
    # random spanning structure first, then extra edges
    verts = list(range(n))
    rng.shuffle(verts)
    for i in range(1, n):
        edges.add((verts[i], verts[rng.randrange(i)]))
    extra = rng.randint(0, n)
    all_pairs = list(combinations(range(n), 2))
    rng.shuffle(all_pairs)
    for u, v in all_pairs[:extra]:
        edges.add((u, v))
    labels = {v: i + 1 for i, v in enumerate(rng.sample(range(n), b))}
    return BoundariedGraph(Graph(n, edges), labels)


def _glued_opt(p: ProblemDefinition, bg1: BoundariedGraph, bg2: BoundariedGraph):
    glued, _, _ = glue(bg1, bg2)
    return opt_fast(p, glued)[0]


def certify_pair(
    p: ProblemDefinition,
    member: BoundariedGraph,
    rep: BoundariedGraph,
    c: int,
    contexts,
    rep_cache: dict | None = None,
) -> None:
    """Probe: OPT(rep ⊕ F) must equal OPT(member ⊕ F) + c for every context F.

    Raises TableConstructionError on the first violating context.
    """
    for idx, ctx in enumerate(contexts):
        if rep_cache is not None and idx in rep_cache:
            opt_rep = rep_cache[idx]
        else:
            opt_rep = _glued_opt(p, rep, ctx)
            if rep_cache is not None:
                rep_cache[idx] = opt_rep
        opt_mem = _glued_opt(p, member, ctx)
        if isinstance(opt_mem, float) or isinstance(opt_rep, float):
            if opt_mem == opt_rep:
                continue
            raise TableConstructionError(
                f"certificate violation (infeasibility mismatch) on context {idx}"
            )
        if opt_rep != opt_mem + c:
            raise TableConstructionError(
                f"certificate violation: OPT(rep+F)={opt_rep}, OPT(member+F)={opt_mem}, "
                f"c={c} on context {idx} with {ctx.graph.n} vertices"
            )


def build_replacement_table(
    p: ProblemDefinition,
    t: int,
    size_bound: int,
    certify: str = "light",
    rng_seed: int = 0,
) -> ReplacementTable:
    """Enumerate the gadget universe and keep one minimum-size representative
    per realized signature.

    The universe is every connected boundaried graph with labels 1..b (b <= t),
    treewidth at most t, and at most size_bound vertices: exactly the boundaried
    forms that protrusion search can feed back (a t-protrusion induces
    treewidth at most t).  Every later member declared equivalent to a stored
    representative is certified by context probing per the `certify` level:
    'exhaustive' probes all connected contexts with up to 8 vertices,
    'thorough' all contexts up to 7 plus 1000 random ones up to 8, 'light' all
    contexts up to 5 plus 200 random ones up to 8, 'off' skips probing.  A
    failed probe aborts construction.
    """
    if t > 3:
        raise BudgetError("replacement tables support boundary size at most 3")
    if size_bound > 9:
        raise BudgetError("replacement table size bound is at most 9")
    machine_for(p.name)  # unsupported problems fail fast
    rng = random.Random(rng_seed)
    rows: dict[tuple, TableRow] = {}
    rep_caches: dict[tuple, dict] = {}
    for b in range(t + 1):
        members = boundaried_universe(size_bound, b, graphs=_gadget_pool(size_bound, t))
        if certify == "exhaustive":
            contexts: tuple = certificate_contexts(b, 8)
            extra: tuple = ()
        elif certify == "thorough":
            contexts = certificate_contexts(b, 7)
            extra = tuple(_random_context(rng, b, 8) for _ in range(1000))
        elif certify == "light":
            contexts = certificate_contexts(b, 5)
            extra = tuple(_random_context(rng, b, 8) for _ in range(200))
        elif certify == "off":
            contexts = ()
            extra = ()
        else:
            raise ValueError(f"unknown certification level {certify!r}")
        for bg in members:
            sig = compute_signature(p, bg)
            key = sig.key
            if key not in rows:
                rows[key] = TableRow(sig, bg, sig.offset)
                rep_caches[key] = {}
                continue
            row = rows[key]
            if certify != "off":
                c = row.rep_offset - sig.offset
                certify_pair(p, bg, row.representative, c, contexts, rep_caches[key])
                if extra:
                    certify_pair(p, bg, row.representative, c, extra)
    return ReplacementTable(p.name, t, rows)


def count_signature_classes(p: ProblemDefinition, t: int, size_bound: int) -> dict[int, int]:
    """Realized signature classes per boundary size (no certification)."""
    counts: dict[int, int] = {}
    for b in range(t + 1):
        seen = set()
        for bg in boundaried_universe(size_bound, b, graphs=_gadget_pool(size_bound, t)):
            seen.add(compute_signature(p, bg).key)
        counts[b] = len(seen)
    return counts


# ---------------------------------------------------------------------------
# kernel instances and the replacement rule


@dataclass(frozen=True)
class ReplacementStep:
    protrusion_size: int
    boundary_size: int
    rep_size: int
    constant: int


@dataclass(frozen=True)
class KernelInstance:
    """An instance (graph, k) plus the trace of applied replacements.

    Membership is invariant along the trace: (graph, k) belongs to the problem
    iff the original instance does.
    """

    graph: Graph
    k: int
    problem: str
    trace: tuple[ReplacementStep, ...] = ()


def _boundaried_form(g: Graph, x: frozenset[int]) -> tuple[BoundariedGraph, tuple[int, ...]]:
    """The protrusion as a boundaried gadget: boundary sorted by vertex id,
    labeled 1..b."""
    bnd = sorted(g.boundary(x))
    sub, old = g.induced_subgraph(x)
    new_of = {o: i for i, o in enumerate(old)}
    labels = {new_of[v]: i + 1 for i, v in enumerate(bnd)}
    return BoundariedGraph(sub, labels), tuple(bnd)


def replace_protrusion(
    inst: KernelInstance, x: Protrusion, table: ReplacementTable
) -> KernelInstance:
    """Swap the protrusion interior for its table representative.

    Skip semantics: an unknown signature, a representative at least as large as
    the protrusion, or a positive transposition constant (which would raise k)
    leave the instance unchanged.
    """
    g = inst.graph
    p = problems_mod.get_problem(inst.problem)
    if table.problem != p.name:
        raise ValueError(
            f"table was built for {table.problem!r}, instance is {p.name!r}"
        )
    check = validate_protrusion(g, x.vertices, table.t)
    if not check:
        raise ValueError(f"invalid protrusion: {check.message}")
    prot_bg, bnd = _boundaried_form(g, x.vertices)
    sig = compute_signature(p, prot_bg)
    row = table.lookup(sig)
    if row is None:
        return inst
    rep = row.representative
    if rep.graph.n >= len(x.vertices):
        return inst
    c = row.rep_offset - sig.offset
    if c > 0:
        logger.warning(
            "refusing replacement with positive constant c=%d (parameter must not grow)", c
        )
        return inst
    host_keep = (frozenset(g.vertices) - x.vertices) | frozenset(bnd)
    host_sub, host_old = g.induced_subgraph(host_keep)
    host_new_of = {o: i for i, o in enumerate(host_old)}
    host_labels = {host_new_of[v]: i + 1 for i, v in enumerate(bnd)}
    host_bg = BoundariedGraph(host_sub, host_labels)
    glued, _, _ = glue(host_bg, rep)
    step = ReplacementStep(len(x.vertices), len(bnd), rep.graph.n, c)
    return KernelInstance(glued, inst.k + c, inst.problem, inst.trace + (step,))


def kernelize(
    p: ProblemDefinition,
    g: Graph,
    k: int,
    table: ReplacementTable,
    eta: int | None = None,
    check_each_step: bool = False,
    shuffle_seed: int | None = None,
) -> KernelInstance:
    """Reduce the instance by repeated protrusion replacement until no
    replaceable protrusion larger than the table's representatives is found.

    When eta is given, protrusion search is seeded with the parts of a
    protrusion decomposition built from a recursive treewidth-eta-modulator.
    Each replacement strictly shrinks the graph, so this terminates.
    `check_each_step` re-derives the optimum before and after every step
    against the exact oracle (test builds only).
    """
    if table.problem != p.name:
        raise ValueError(f"table was built for {table.problem!r}, not {p.name!r}")
    inst = KernelInstance(g, k, p.name, ())
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    while True:
        cur = inst.graph
        seeds: tuple[frozenset[int], ...] = ()
        if eta is not None:
            seeds = _modulator_seeds(cur, eta)
        min_size = table.max_rep_size + 1
        candidates = iter_protrusions(cur, table.t, min_size, seeds)
        if rng is not None:
            pool = list(candidates)
            rng.shuffle(pool)
            candidates = iter(pool)
        applied = False
        for x in candidates:
            new_inst = replace_protrusion(inst, x, table)
            if new_inst.graph.n < inst.graph.n:
                if check_each_step and cur.n <= problems_mod.brute_budget():
                    _check_step(p, inst, new_inst)
                inst = new_inst
                applied = True
                break
        if not applied:
            return inst


def _modulator_seeds(g: Graph, eta: int) -> tuple[frozenset[int], ...]:
    from .modulators import recursive_modulator
    from .protrusions import build_pd

    try:
        mod = recursive_modulator(g, eta)
        if not mod.vertices:
            return ()
        pd = build_pd(g, mod)
        return pd.parts
    except (BudgetError, RuntimeError):
        return ()


def _check_step(p: ProblemDefinition, before: KernelInstance, after: KernelInstance) -> None:
    c = after.k - before.k
    opt_before = opt_fast(p, before.graph)[0]
    opt_after = opt_fast(p, after.graph)[0]
    if isinstance(opt_before, float) or isinstance(opt_after, float):
        ok = opt_before == opt_after
    else:
        ok = opt_after == opt_before + c
    if not ok:
        raise AssertionError(
            f"replacement changed the optimum: before={opt_before}, after={opt_after}, c={c}"
        )


# ---------------------------------------------------------------------------
# table serialization (bit-exact round trip)


def _entry_str(e) -> str:
    return "inf" if e is None else str(e)


def format_table(table: ReplacementTable) -> str:
    lines = [f"table {table.problem} {table.t} {table.max_rep_size} {len(table.rows)}"]
    sort_key = lambda kv: (kv[0][0], tuple(-1 if e is None else e for e in kv[0][1]))
    for (b, _entries), row in sorted(table.rows.items(), key=sort_key):
        lines.append(f"row {b} {row.rep_offset}")
        lines.append("sig " + " ".join(_entry_str(e) for e in row.signature.entries))
        rep = row.representative
        lines.append(f"{rep.graph.n} {rep.graph.m}")
        for u, v in sorted(rep.graph.edges):
            lines.append(f"{u + 1} {v + 1}")
        for v, lab in sorted(rep.label_of):
            lines.append(f"b {v + 1} {lab}")
        lines.append("endrow")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> ReplacementTable:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("table "):
        raise ValueError("missing table header")
    _, problem, t_s, _max_rep, nrows_s = lines[0].split()
    t, nrows = int(t_s), int(nrows_s)
    p = problems_mod.get_problem(problem)
    rows: dict[tuple, TableRow] = {}
    i = 1
    for _ in range(nrows):
        if not lines[i].startswith("row "):
            raise ValueError(f"expected row header at line {i + 1}")
        _, b_s, off_s = lines[i].split()
        b, rep_offset = int(b_s), int(off_s)
        i += 1
        if not lines[i].startswith("sig "):
            raise ValueError(f"expected signature at line {i + 1}")
        entries = tuple(None if tok == "inf" else int(tok) for tok in lines[i].split()[1:])
        i += 1
        n, m = (int(tok) for tok in lines[i].split())
        i += 1
        edges = []
        for _ in range(m):
            u, v = (int(tok) for tok in lines[i].split())
            edges.append((u - 1, v - 1))
            i += 1
        labels = {}
        while lines[i] != "endrow":
            _, v_s, lab_s = lines[i].split()
            labels[int(v_s) - 1] = int(lab_s)
            i += 1
        i += 1
        rep = BoundariedGraph(Graph(n, edges), labels)
        sig = Signature(problem, b, entries, rep_offset)
        rows[sig.key] = TableRow(sig, rep, rep_offset)
    return ReplacementTable(problem, t, rows)
