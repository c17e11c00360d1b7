"""Batch harness: corpus generation, kernel soundness checks, CSV reports.

Corpora are deterministic per seed.  Soundness verification decides membership
on both sides of a kernelization with the reference oracles (tree-decomposition
DP where supported and narrow enough, subset enumeration otherwise) and reports
any disagreement verbatim.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .dp import MACHINE_ALIASES, MACHINES, solve_via_dp
from .graphs import Graph, disjoint_union, make_grid
from .problems import ProblemDefinition, brute_budget, opt_brute, opt_fast
from .replacement import KernelInstance, ReplacementTable, kernelize
from .treedec import heuristic_decomposition

# widths beyond which the reference oracle falls back to subset enumeration
_DP_WIDTH_CAP = {
    "vertex-cover": 10,
    "independent-set": 10,
    "dominating-set": 7,
    "feedback-vertex-set": 5,
}


# ---------------------------------------------------------------------------
# corpus generation


def _random_tree_edges(rng: random.Random, n: int, offset: int = 0) -> list[tuple[int, int]]:
    return [(offset + rng.randrange(i), offset + i) for i in range(1, n)]


def _random_maximal_planar(rng: random.Random, n: int) -> Graph:
    """Random planar triangulation: insert each new vertex into a random face."""
    if n < 3:
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    edges = {(0, 1), (0, 2), (1, 2)}
    faces = [(0, 1, 2), (0, 1, 2)]  # both sides of the starting triangle
    for v in range(3, n):
        idx = rng.randrange(len(faces))
        a, b, c = faces.pop(idx)
        for x, y in ((a, v), (b, v), (c, v)):
            edges.add((x, y) if x < y else (y, x))
        faces.extend([(a, b, v), (a, c, v), (b, c, v)])
    return Graph(n, edges)


def _random_planar(rng: random.Random, n: int, keep_prob: float = 0.75) -> Graph:
    """Random maximal planar construction, then random edge deletion; the
    result is re-verified planar (a certifying check, not an assumption)."""
    import networkx as nx

    g = _random_maximal_planar(rng, n)
    edges = [e for e in sorted(g.edges) if rng.random() < keep_prob]
    out = Graph(n, edges)
    ok, _ = nx.check_planarity(nx.Graph(list(out.edges)) if out.edges else nx.empty_graph(n))
    if not ok:
        raise AssertionError("planarity verification failed on a generated instance")
    return out


def _grid_with_pendants(
    rng: random.Random, t: int, tree_size: int, n_trees: int
) -> Graph:
    g = make_grid(t)
    edges = set(g.edges)
    n = g.n
    anchors = rng.sample(range(g.n), min(n_trees, g.n))
    for anchor in anchors:
        edges.add((anchor, n) if anchor < n else (n, anchor))
        edges.update(_random_tree_edges(rng, tree_size, offset=n))
        n += tree_size
    return Graph(n, edges)


def gen_corpus(family: str, params: dict, seed: int) -> list[Graph]:
    """Deterministic instance corpus.

    Families: 'grid' (params: t or t_values), 'grid+pendants' (t, tree_size,
    pendants, count), 'random-planar' (n_min, n_max, count, keep_prob),
    'union' (piece grids: t_values, count).
    """
    rng = random.Random(seed)
    if family == "grid":
        ts = params.get("t_values", [params.get("t", 3)])
        return [make_grid(t) for t in ts]
    if family == "grid+pendants":
        count = params.get("count", 1)
        t = params.get("t", 4)
        tree_size = params.get("tree_size", 15)
        pendants = params.get("pendants", 3)
        return [_grid_with_pendants(rng, t, tree_size, pendants) for _ in range(count)]
    if family == "random-planar":
        count = params.get("count", 10)
        n_min = params.get("n_min", 8)
        n_max = params.get("n_max", 22)
        keep = params.get("keep_prob", 0.75)
        return [_random_planar(rng, rng.randint(n_min, n_max), keep) for _ in range(count)]
    if family == "union":
        count = params.get("count", 5)
        ts = params.get("t_values", [2, 3])
        out = []
        for _ in range(count):
            g = make_grid(rng.choice(ts))
            for _ in range(rng.randint(1, 2)):
                g = disjoint_union(g, make_grid(rng.choice(ts)))
            out.append(g)
        return out
    raise ValueError(f"unknown corpus family {family!r}")


# ---------------------------------------------------------------------------
# membership oracle


def reference_oracle(p: ProblemDefinition, g: Graph):
    """Reference optimum: tree-decomposition DP when the problem is supported
    and the decomposition is narrow enough, plain subset enumeration otherwise.
    """
    name = MACHINE_ALIASES.get(p.name, p.name)
    if name in MACHINES:
        td = heuristic_decomposition(g)
        if td.width <= _DP_WIDTH_CAP[name]:
            return solve_via_dp(p.name, g, td)[0]
    return opt_brute(p, g)[0]


def is_member(p: ProblemDefinition, opt, k: int) -> bool:
    """(G, k) membership from the optimum, honoring the negative-k convention
    (minimization: no-instance for k < 0; maximization: yes-instance)."""
    if p.maximize:
        return bool(opt >= k)
    return bool(opt <= k)


# ---------------------------------------------------------------------------
# soundness verification


@dataclass(frozen=True)
class SoundnessRow:
    instance_id: int
    n: int
    k: int
    member_before: bool
    member_after: bool
    kernel_n: int
    k_prime: int

    @property
    def ok(self) -> bool:
        return (
            self.member_before == self.member_after
            and self.kernel_n <= self.n
            and self.k_prime <= self.k
        )


@dataclass
class SoundnessReport:
    rows: list[SoundnessRow] = field(default_factory=list)

    @property
    def violations(self) -> list[SoundnessRow]:
        return [r for r in self.rows if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_kernel_soundness(
    p: ProblemDefinition,
    corpus: list[Graph],
    table: ReplacementTable,
    k_window: int = 1,
    eta: int | None = None,
    oracle=reference_oracle,
) -> SoundnessReport:
    """Is (G, k) in the problem iff the kernelized instance is, for k around
    the optimum?  Membership on both sides comes from the reference oracles.
    """
    report = SoundnessReport()
    for idx, g in enumerate(corpus):
        if g.n > brute_budget():
            raise ValueError(f"instance {idx} exceeds the oracle budget")
        opt = oracle(p, g)
        base_k = 0 if isinstance(opt, float) else int(opt)
        for k in range(base_k - k_window, base_k + k_window + 1):
            kern = kernelize(p, g, k, table, eta=eta)
            opt_after = oracle(p, kern.graph)
            row = SoundnessRow(
                idx,
                g.n,
                k,
                is_member(p, opt, k),
                is_member(p, opt_after, kern.k),
                kern.graph.n,
                kern.k,
            )
            report.rows.append(row)
    return report


# ---------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class ExperimentRow:
    instance_id: int
    n: int
    m: int
    k: int
    kernel_n: int
    kernel_m: int
    k_prime: int
    replacements: int
    wall_time: float


@dataclass
class ExperimentReport:
    family: str
    seed: int
    rows: list[ExperimentRow] = field(default_factory=list)

    @property
    def max_ratio(self) -> float:
        ratios = [r.kernel_n / r.k for r in self.rows if r.k > 0]
        return max(ratios, default=float("nan"))

    def to_csv(self) -> str:
        lines = [
            f"# family={self.family} seed={self.seed}",
            "instance_id,n,m,k,kernel_n,kernel_m,k_prime,replacements,wall_time",
        ]
        for r in self.rows:
            lines.append(
                f"{r.instance_id},{r.n},{r.m},{r.k},{r.kernel_n},{r.kernel_m},"
                f"{r.k_prime},{r.replacements},{r.wall_time:.3f}"
            )
        return "\n".join(lines) + "\n"


def experiment_k(p: ProblemDefinition, g: Graph) -> int:
    """The parameter an experiment plants: the optimum via the cheapest oracle
    able to handle the instance (branch and bound within the oracle budget,
    the width-capped DP beyond it), else 0.
    """
    if g.n <= brute_budget():
        opt = opt_fast(p, g)[0]
        return 0 if isinstance(opt, float) else int(opt)
    name = MACHINE_ALIASES.get(p.name, p.name)
    if name in MACHINES:
        td = heuristic_decomposition(g)
        if td.width <= _DP_WIDTH_CAP[name]:
            opt = solve_via_dp(p.name, g, td)[0]
            return 0 if isinstance(opt, float) else int(opt)
    return 0


def run_experiment(
    p: ProblemDefinition,
    corpus: list[Graph],
    table: ReplacementTable,
    eta: int | None = None,
    family: str = "custom",
    seed: int = 0,
    deterministic_timing: bool = False,
) -> ExperimentReport:
    """Kernelize every instance at k = OPT and record the shrinkage.

    deterministic_timing zeroes the wall_time column so reports are
    byte-identical across runs (timings are inherently noisy).
    """
    report = ExperimentReport(family, seed)
    for idx, g in enumerate(corpus):
        k = experiment_k(p, g)
        t0 = time.perf_counter()
        kern: KernelInstance = kernelize(p, g, k, table, eta=eta)
        dt = 0.0 if deterministic_timing else time.perf_counter() - t0
        row = ExperimentRow(
            idx, g.n, g.m, k, kern.graph.n, kern.graph.m, kern.k, len(kern.trace), dt
        )
        if row.kernel_n > row.n or row.k_prime > row.k:
            raise AssertionError(f"report invariant violated on instance {idx}")
        report.rows.append(row)
    return report


def problem_report_rows(
    p: ProblemDefinition, corpus: list[Graph], tw_budget: int = 20
) -> list[str]:
    """Per-instance `instance,n,m,opt,tw,slack` rows.

    The slack column probes separability on a deterministic part: the ball
    around vertex 0 holding half the vertices.
    """
    from .problems import check_separability, format_opt
    from .treedec import exact_treewidth

    out = []
    for idx, g in enumerate(corpus):
        opt = opt_fast(p, g)[0] if g.n <= brute_budget() else float("inf")
        tw = exact_treewidth(g, max_vertices=tw_budget)[0] if g.n <= tw_budget else -1
        part = _half_ball(g)
        rep = check_separability(p, g, part, oracle=lambda pp, gg: (opt_fast(pp, gg)))
        out.append(f"{idx},{g.n},{g.m},{format_opt(opt)},{tw},{rep.slack}")
    return out


def _half_ball(g: Graph) -> frozenset[int]:
    if g.n == 0:
        return frozenset()
    want = max(1, g.n // 2)
    seen = [0]
    seen_set = {0}
    qi = 0
    while len(seen) < want and qi < len(seen):
        v = seen[qi]
        qi += 1
        for u in sorted(g.neighbors(v)):
            if u not in seen_set and len(seen) < want:
                seen_set.add(u)
                seen.append(u)
    extra = iter(sorted(set(g.vertices) - seen_set))
    while len(seen) < want:
        v = next(extra)
        seen_set.add(v)
        seen.append(v)
    return frozenset(seen)
