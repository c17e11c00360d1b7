"""Catalog of vertex subset problems with feasibility predicates and oracles.

`opt_brute` is the reference oracle: plain subset enumeration ordered by size,
driven only by the feasibility predicate.  `opt_fast` dispatches to the
branch-and-bound solvers and is validated against `opt_brute` in the tests.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

from . import solvers
from .graphs import BudgetError, Graph
from .treedec import treewidth_at_most

BRUTE_BUDGET_DEFAULT = 22


def brute_budget() -> int:
    """Oracle size budget; the KERNEL_BUDGET_N environment variable overrides it."""
    return int(os.environ.get("KERNEL_BUDGET_N", BRUTE_BUDGET_DEFAULT))


@dataclass(frozen=True)
class ProblemDefinition:
    """A vertex subset problem: optimize |S| subject to feasibility(G, S)."""

    name: str
    kind: str  # "min" or "max"
    subset_kind: str  # only "vertex" problems are cataloged
    feasibility: Callable[[Graph, frozenset[int]], bool]
    separability_f: Callable[[int], int]
    minor_closed: bool
    contraction_closed: bool

    @property
    def maximize(self) -> bool:
        return self.kind == "max"

    @property
    def infeasible_value(self) -> float:
        return -math.inf if self.maximize else math.inf


def phi_vertex_cover(g: Graph, s: frozenset[int]) -> bool:
    return all(u in s or v in s for u, v in g.edges)


def phi_independent_set(g: Graph, s: frozenset[int]) -> bool:
    return not any(u in s and v in s for u, v in g.edges)


def phi_dominating_set(g: Graph, s: frozenset[int]) -> bool:
    return g.closed_neighborhood(s) == frozenset(g.vertices)


def phi_feedback_vertex_set(g: Graph, s: frozenset[int]) -> bool:
    return g.delete_vertices(s)[0].is_acyclic()


def phi_cycle_packing(g: Graph, s: frozenset[int]) -> bool:
    """Is there a family of vertex-disjoint cycles, one through each vertex of
    S and containing no other S-vertex?

    Feasible S certify packings of |S| disjoint cycles.  The check itself is a
    small exact search, so it is guarded by the cycle oracle budget.
    """
    if not s:
        return True
    cycles = solvers.enumerate_cycles(g)
    usable: dict[int, list[frozenset[int]]] = {v: [] for v in s}
    for c in cycles:
        hit = c & s
        if len(hit) == 1:
            usable[next(iter(hit))].append(c)
    order = sorted(s, key=lambda v: len(usable[v]))

    def assign(i: int, used: frozenset[int]) -> bool:
        if i == len(order):
            return True
        for c in usable[order[i]]:
            if not (c & used):
                if assign(i + 1, used | c):
                    return True
        return False

    return assign(0, frozenset())


def _phi_tw_modulator(eta: int) -> Callable[[Graph, frozenset[int]], bool]:
    def phi(g: Graph, s: frozenset[int]) -> bool:
        return treewidth_at_most(g.delete_vertices(s)[0], eta) is not None

    return phi


def _linear(t: int) -> int:
    return t


CATALOG: dict[str, ProblemDefinition] = {
    p.name: p
    for p in (
        ProblemDefinition("vertex-cover", "min", "vertex", phi_vertex_cover, _linear, True, True),
        ProblemDefinition(
            "independent-set", "max", "vertex", phi_independent_set, _linear, False, True
        ),
        ProblemDefinition(
            "dominating-set", "min", "vertex", phi_dominating_set, lambda t: 2 * t, False, True
        ),
        ProblemDefinition(
            "feedback-vertex-set", "min", "vertex", phi_feedback_vertex_set, _linear, True, True
        ),
        ProblemDefinition(
            "cycle-packing", "max", "vertex", phi_cycle_packing, _linear, True, True
        ),
        ProblemDefinition(
            "treewidth-0-modulator", "min", "vertex", _phi_tw_modulator(0), _linear, True, True
        ),
        ProblemDefinition(
            "treewidth-1-modulator", "min", "vertex", _phi_tw_modulator(1), _linear, True, True
        ),
    )
}


def get_problem(name: str) -> ProblemDefinition:
    if name not in CATALOG:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(CATALOG)}")
    return CATALOG[name]


# ---------------------------------------------------------------------------
# oracles


def opt_brute(
    p: ProblemDefinition, g: Graph, max_vertices: int | None = None
) -> tuple[int | float, frozenset[int] | None]:
    """Reference oracle: subset enumeration ordered by size.

    Minimization stops at the first feasible size; maximization walks sizes
    upward and stops at the first size with no feasible set (all cataloged
    maximization problems are closed under taking subsets).  Returns the
    +/- infinity sentinel and a None witness when nothing is feasible.
    """
    budget = max_vertices if max_vertices is not None else brute_budget()
    if g.n > budget:
        raise BudgetError(f"opt_brute budget is {budget} vertices (got {g.n})")
    verts = list(g.vertices)
    if p.maximize:
        best: tuple[int | float, frozenset[int] | None] = (p.infeasible_value, None)
        for k in range(g.n + 1):
            found = None
            for combo in combinations(verts, k):
                s = frozenset(combo)
                if p.feasibility(g, s):
                    found = s
                    break
            if found is None:
                break
            best = (k, found)
        return best
    for k in range(g.n + 1):
        for combo in combinations(verts, k):
            s = frozenset(combo)
            if p.feasibility(g, s):
                return k, s
    return p.infeasible_value, None


_FAST = {
    "vertex-cover": solvers.vertex_cover_opt,
    "independent-set": solvers.independent_set_opt,
    "dominating-set": solvers.dominating_set_opt,
    "feedback-vertex-set": solvers.feedback_vertex_set_opt,
    "cycle-packing": solvers.cycle_packing_opt,
    "treewidth-0-modulator": solvers.vertex_cover_opt,
    "treewidth-1-modulator": solvers.feedback_vertex_set_opt,
}


def opt_fast(p: ProblemDefinition, g: Graph) -> tuple[int | float, frozenset[int] | None]:
    """Branch-and-bound oracle; exact, validated against opt_brute in tests."""
    return _FAST[p.name](g)


# ---------------------------------------------------------------------------
# empirical checkers


@dataclass(frozen=True)
class SeparabilityReport:
    ok: bool
    boundary_size: int
    sol_in_part: int
    opt_induced: int | float
    allowed: int
    deviation: int | float

    @property
    def slack(self) -> int | float:
        return self.allowed - self.deviation


def check_separability(
    p: ProblemDefinition, g: Graph, part: frozenset[int], oracle=opt_brute
) -> SeparabilityReport:
    """Does OPT on G[part] stay within f(|∂(part)|) of the global optimum's
    restriction to the part?
    """
    t = len(g.boundary(part))
    allowed = p.separability_f(t)
    _, witness = oracle(p, g)
    sub, _ = g.induced_subgraph(part)
    opt_l, _ = oracle(p, sub)
    if witness is None or isinstance(opt_l, float):
        return SeparabilityReport(True, t, 0, opt_l, allowed, 0)
    sol_in = len(witness & part)
    deviation = abs(sol_in - opt_l)
    return SeparabilityReport(deviation <= allowed, t, sol_in, opt_l, allowed, deviation)


@dataclass(frozen=True)
class BidimensionalityRow:
    k: int
    opt: int | float
    ratio: float


def check_bidimensionality(
    p: ProblemDefinition, kmax: int, oracle=opt_fast
) -> list[BidimensionalityRow]:
    """OPT on the grid family (triangulated grids for contraction-closed-only
    problems), with the OPT / k^2 ratio per row.

    The optimum must grow with the grid: a non-positive ratio anywhere in the
    table is a contract violation and raises.
    """
    from .graphs import make_gamma, make_grid

    family = make_grid if p.minor_closed else make_gamma
    rows = []
    for k in range(2, kmax + 1):
        opt, _ = oracle(p, family(k))
        rows.append(BidimensionalityRow(k, opt, opt / (k * k)))
    if rows and min(r.ratio for r in rows) <= 0:
        raise AssertionError(f"optimum fails to grow quadratically for {p.name}")
    return rows


@dataclass(frozen=True)
class ParameterTreewidthReport:
    pairs: list[tuple[int, int | float]]  # (treewidth, opt) per instance
    fitted_exponent: float


def check_parameter_treewidth(
    p: ProblemDefinition, corpus: list[Graph], oracle=opt_fast, tw_budget: int = 20
) -> ParameterTreewidthReport:
    """Collect (treewidth, OPT) pairs over a corpus and fit tw ~ OPT^eps."""
    import numpy as np

    from .treedec import exact_treewidth

    pairs = []
    for g in corpus:
        w, _ = exact_treewidth(g, max_vertices=tw_budget)
        opt, _ = oracle(p, g)
        pairs.append((w, opt))
    usable = [(w, o) for w, o in pairs if w >= 1 and not isinstance(o, float) and o >= 2]
    if len(usable) >= 2:
        xs = np.log([o for _, o in usable])
        ys = np.log([w for w, _ in usable])
        exponent = float(np.polyfit(xs, ys, 1)[0])
    else:
        exponent = 0.0
    return ParameterTreewidthReport(pairs, exponent)


def format_opt(value: int | float) -> str:
    """Serialize an optimum; infinities become the explicit infeasible token."""
    if isinstance(value, float) and math.isinf(value):
        return "infeasible"
    return str(value)
