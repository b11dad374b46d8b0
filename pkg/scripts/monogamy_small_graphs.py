#!/usr/bin/env python3
"""Exact non-signaling compound values for every connected graph on at most n vertices.

For each isomorphism class the script prints alpha, the receiver count l* = theta'_e
and the exact LP value of ns_compound_alpha for l = 1..l*.
"""
import argparse
import itertools
import time

import networkx as nx

from zeroerror.graphs import Graph
from zeroerror.nonsignaling import ns_compound_alpha
from zeroerror.params import clique_cover_numbers, independence_number


def connected_graphs(max_n: int):
    for n in range(1, max_n + 1):
        for g in nx.graph_atlas_g():
            if g.number_of_nodes() == n and nx.is_connected(g):
                yield Graph.from_edges(n, list(g.edges()))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=4, choices=range(1, 6))
    args = parser.parse_args()
    print(f"{'n':>2} {'edges':<30} {'alpha':>5} {'l*':>3}  values for l = 1..l*   seconds")
    for g in connected_graphs(args.max_n):
        start = time.perf_counter()
        alpha, _ = independence_number(g)
        _, ell_star, cover = clique_cover_numbers(g)
        values = [str(ns_compound_alpha(g, ell, cover=cover)) for ell in range(1, ell_star + 1)]
        edges = " ".join(f"{u}{v}" for u, v in g.edges())
        print(f"{g.n:>2} {edges:<30} {alpha:>5} {ell_star:>3}  {' '.join(values):<20} {time.perf_counter() - start:7.2f}")


if __name__ == "__main__":
    main()
