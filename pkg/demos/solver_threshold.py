#!/usr/bin/env python3
# coding: utf-8

# # Exact play on tiny boards
#
# The minimax solver settles the winner for every q, and hence the true
# threshold bias, when the board is small enough.

from wcgames import GameRules, Kind, PlainBoard, explicit_family, exact_threshold_bias, solve
from wcgames.boards import HypergraphBoard
from wcgames.families import clique_family

# In[1]:

# four singletons: Waiter wins while a single round is played
F = explicit_family([[0], [1], [2], [3]])
print(exact_threshold_bias(PlainBoard(4), F, Kind.WC, 5))

# In[2]:

board = HypergraphBoard(4, 2)
triangles = clique_family(board, 3)
for kind in (Kind.WC, Kind.CW):
    res = solve(board, triangles, GameRules(kind, 1))
    print(kind.value, res.winner, "nodes", res.nodes)

# The principal variation is a legal line of play.

# In[3]:

print(solve(board, triangles, GameRules(Kind.CW, 1)).to_text())
