#!/usr/bin/env python3
# coding: utf-8

# # Bias bounds at small n
#
# Each game has a "below" bound (the player helped by a small bias wins up to
# it) and an "above" bound (the other player wins from there on).  The gap
# between them grows with k.

from wcgames import gap_factor, reference_constants, theorem_bound
from wcgames.bounds import all_bounds, intuition_bias

# In[1]:

for n, k in [(10, 2), (20, 3), (60, 4)]:
    print(f"n={n} k={k}")
    for b in all_bounds(n, k):
        rel = "<" if b.strict else ("<=" if b.side == "below" else ">=")
        print(f"  {b.formula:18s} {b.winner:6s} wins for q {rel} {b.value:.4g}")

# The k-SAT Client-Waiter gap is an exact integer:

# In[2]:

for k in range(2, 6):
    print(k, gap_factor("ksat", "CW", k), round(gap_factor("non2col", "CW", k), 1))

# Random-structure thresholds give the "probabilistic intuition" bias |X|/m_F.

# In[3]:

ref = reference_constants(3)
print(ref)
print("heuristic bias, n=40 k=3:", round(intuition_bias("ksat", 40, 3), 2),
      "between", round(theorem_bound("ksat", "CW", "below", 40, 3).value, 1),
      "and", round(theorem_bound("ksat", "CW", "above", 40, 3).value, 1))
