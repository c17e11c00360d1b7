"""Grids, triangulated grids, and exact treewidth.

The square grid is the canonical hard instance for width parameters: the t x t
grid has treewidth exactly t, which this demo verifies with the exact solver
and certifies with validating decompositions.
"""

from twkern import (
    exact_treewidth,
    heuristic_decomposition,
    make_gamma,
    make_grid,
    validate_decomposition,
)

print("square grids")
for t in range(1, 5):
    g = make_grid(t)
    w, td = exact_treewidth(g)
    res = validate_decomposition(g, td)
    print(
        f"  {t}x{t}: n={g.n:2d} m={g.m:2d}  treewidth={w}  "
        f"decomposition: {len(td.bags)} bags, valid={bool(res)}"
    )

print("\ntriangulated grids (anti-diagonals + a corner wired to the border)")
for t in (2, 3, 4):
    g = make_gamma(t)
    print(f"  Gamma_{t}: n={g.n:2d} m={g.m:2d}  max degree={max(g.degree(v) for v in g.vertices)}")

print("\nheuristic (min-fill) versus exact width")
for t in (2, 3, 4):
    g = make_grid(t)
    exact_w, _ = exact_treewidth(g)
    heur = heuristic_decomposition(g)
    print(f"  {t}x{t}: exact={exact_w}  min-fill={heur.width}")

print("\na validating decomposition of the 3x3 grid")
g = make_grid(3)
_, td = exact_treewidth(g)
for i, bag in enumerate(td.bags):
    print(f"  bag {i}: {sorted(bag)}")
print(f"  tree edges: {sorted(td.tree_edges)}")
