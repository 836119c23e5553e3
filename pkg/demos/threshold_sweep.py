#!/usr/bin/env python3
# coding: utf-8

# # Win rates against the bias
#
# A seeded sweep over q, then a bisection for the empirical threshold of a
# fixed strategy pair.  This is not the optimal-play threshold.

from wcgames import ExperimentConfig, bisect_threshold, sweep

# In[1]:

cfg = ExperimentConfig(game="ksat", version="cw", n=5, k=2, q_min=1, q_max=8,
                       waiter="cw-waiter-batch", client="random", reps=40, seed=7)
res = sweep(cfg)
print(res.to_text())

# Waiter profits from a large bias in the Client-Waiter game, so its win
# rate should climb with q.

# In[2]:

b = bisect_threshold(cfg)
print("q* =", b.q_star, "rate", b.rate, "95% CI", b.ci)
print(b.label)
