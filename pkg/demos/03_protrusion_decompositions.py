"""Protrusion decompositions: a small core plus low-treewidth flaps.

A part's closed neighborhood must have a small boundary and small induced
treewidth, and parts may touch the rest of the graph only through the core.
The builder recurses along balanced separations of the modulator; achieved
bounds (alpha, r) are measured per instance, not promised in advance.
"""

from twkern import build_pd, make_grid, recursive_modulator, validate_pd
from twkern.harness import gen_corpus
from twkern.modulators import exact_modulator

g = make_grid(4)
mod = exact_modulator(g, 1)
pd = build_pd(g, mod)
print("4x4 grid with an exact eta=1 modulator")
print(f"  core ({len(pd.core)}): {sorted(pd.core)}")
for i, part in enumerate(pd.parts):
    print(f"  part {i} ({len(part)}): {sorted(part)}")
print(f"  measured alpha={pd.alpha}, r={pd.r}; valid={bool(validate_pd(g, pd))}")

print("\nplanar corpus: measured bounds per instance")
corpus = gen_corpus("random-planar", {"count": 8, "n_min": 25, "n_max": 55}, seed=11)
print(f"  {'n':>3} {'|S|':>4} {'alpha':>6} {'r':>3} {'parts':>6} {'alpha/|S|':>10}")
for g in corpus:
    mod = recursive_modulator(g, 1)
    if not mod.vertices:
        print(f"  {g.n:3d}    already treewidth <= 1")
        continue
    pd = build_pd(g, mod)
    assert validate_pd(g, pd)
    ratio = pd.alpha / len(mod.vertices)
    print(
        f"  {g.n:3d} {len(mod.vertices):4d} {pd.alpha:6d} {pd.r:3d} "
        f"{len(pd.parts):6d} {ratio:10.2f}"
    )
