# Building a k2-tree and walking it by hand.
# Run: python3 demos/02_k2tree_walkthrough.py

import numpy as np

from k2triples import K2Config, K2Tree

# %% an 11x11 adjacency matrix, decomposed with k=2 everywhere
cells = [(0, 1), (1, 2), (1, 3), (1, 4), (7, 6), (8, 6), (8, 9), (9, 6),
         (9, 8), (9, 10), (10, 6), (10, 9)]
cfg = K2Config(k_upper=2, upper_levels=0, k_lower=2, leaf_size=2)
tree = K2Tree(cells, 11, 11, cfg)
print(tree)
print("T =", tree.T.to_string())
print("levels:", tree.level_k, "sides:", tree.level_sides)

# %% descending: children of a 1 at position p start right after the
# groups of all earlier 1s, which rank counts for us
node = tree.root()
for step in (2, 1, 3):
    kids = tree.descend(node)
    print(f"children at {kids[0].pos}..{kids[-1].pos}: "
          + "".join(str(c.bit) for c in kids))
    node = kids[step]
leaf = tree.descend(node)
print("leaf cells:", [(c.row, c.col) for c in leaf if c.bit])

# %% queries
print("row 10 ->", tree.direct_neighbors(10))
print("col 6 <-", tree.reverse_neighbors(6))
print("cell (9,10)?", tree.cell_check(9, 10))
print("rectangle rows 7-9, cols 6-8:", tree.range_query(7, 9, 6, 8))

# %% the default hybrid schedule on a sparse random matrix
rng = np.random.default_rng(1)
n = 4096
flat = rng.choice(n * n, size=20_000, replace=False)
big = K2Tree.from_arrays(flat // n, flat % n, n, n)
sizes = big.component_sizes()
print(big)
print(f"{(sizes['T'] + sizes['L']) * 8 / big.n_cells:.1f} bits per cell; "
      f"bitmap would need {n * n // 8} bytes")
