#!/usr/bin/env python3
# coding: utf-8

# # One game, start to finish
#
# Waiter-Client on the edges of K_7: Waiter offers q+1 free edges, Client
# keeps one.  Waiter wins if Client's graph ends up not 2-colourable, i.e.
# contains an odd cycle.

from wcgames import GameRules, HypergraphBoard, Kind, Hypergraph, greedy_two_coloring, play
from wcgames.experiments import property_objective
from wcgames.strategies import RandomWaiter, WCClientPotential
from wcgames.families import local_density_family

# In[1]:

board = HypergraphBoard(7, 2)
family = local_density_family(board)
print(board.describe(), len(family), "local-density sets")

# The potential Client avoids fully claiming any dense local configuration.

# In[2]:

objective = property_objective("non2col", board)
t = play(board, family, GameRules(Kind.WC, 3), RandomWaiter(), WCClientPotential(family),
         seed=1, objective=objective)
print(t.to_text())

# Replaying the transcript reproduces the final position and outcome.

# In[3]:

owned, outcome = t.replay(objective=objective)
print(outcome == t.outcome, sorted(t.client_final) == sorted(owned.client_elements()))

# Client's graph is sparse enough to colour greedily.

# In[4]:

H = Hypergraph.from_board(board, sorted(t.client_final))
print(greedy_two_coloring(H))
