"""Exact min-cost flow on integer data (successive shortest paths).

Costs and capacities are Python ints, so arbitrarily large perturbation
weights stay exact.  Graphs here have a handful of nodes; Bellman-Ford on
the residual network is plenty.
"""
from __future__ import annotations

from typing import List, Tuple


class MinCostFlow:
    def __init__(self, n_nodes: int):
        self.n = n_nodes
        self.graph: List[List[int]] = [[] for _ in range(n_nodes)]
        # arc arrays: head, residual capacity, cost
        self.to: List[int] = []
        self.cap: List[int] = []
        self.cost: List[int] = []

    def add_arc(self, u: int, v: int, cap: int, cost: int) -> int:
        """Add ``u -> v`` and its reverse; returns the forward arc id."""
        arc = len(self.to)
        self.graph[u].append(arc)
        self.to.append(v)
        self.cap.append(cap)
        self.cost.append(cost)
        self.graph[v].append(arc + 1)
        self.to.append(u)
        self.cap.append(0)
        self.cost.append(-cost)
        return arc

    def flow_on(self, arc: int) -> int:
        return self.cap[arc ^ 1]

    def _shortest_path(self, s: int) -> Tuple[list, list]:
        dist = [None] * self.n
        via = [-1] * self.n
        dist[s] = 0
        for _ in range(self.n - 1):
            changed = False
            for u in range(self.n):
                du = dist[u]
                if du is None:
                    continue
                for arc in self.graph[u]:
                    if self.cap[arc] <= 0:
                        continue
                    v = self.to[arc]
                    nd = du + self.cost[arc]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        via[v] = arc
                        changed = True
            if not changed:
                break
        return dist, via

    def solve(self, s: int, t: int, amount: int) -> Tuple[int, int]:
        """Send up to ``amount`` units from s to t at minimum cost.

        Returns ``(flow, cost)``; flow < amount means the network is saturated.
        """
        flow = cost = 0
        while flow < amount:
            dist, via = self._shortest_path(s)
            if dist[t] is None:
                break
            push = amount - flow
            v = t
            while v != s:
                arc = via[v]
                push = min(push, self.cap[arc])
                v = self.to[arc ^ 1]
            v = t
            while v != s:
                arc = via[v]
                self.cap[arc] -= push
                self.cap[arc ^ 1] += push
                v = self.to[arc ^ 1]
            flow += push
            cost += push * dist[t]
        return flow, cost
