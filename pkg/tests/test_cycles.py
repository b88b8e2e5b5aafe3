from __future__ import annotations

import random

from argugraph.cycles import elementary_cycles

from oracles import brute_support_cycles
from randgraphs import random_graph


def test_empty_and_single_node():
    assert elementary_cycles({}) == []
    assert elementary_cycles({"a": []}) == []


def test_self_loop_reported_once():
    assert elementary_cycles({"a": ["a"]}) == [["a"]]


def test_two_cycle():
    assert elementary_cycles({"a": ["b"], "b": ["a"]}) == [["a", "b"]]


def test_triangle_reported_once_smallest_first():
    cycles = elementary_cycles({"b": ["c"], "c": ["a"], "a": ["b"]})
    assert cycles == [["a", "b", "c"]]


def test_two_overlapping_cycles():
    # a->b->a and a->b->c->a share node a
    adjacency = {"a": ["b"], "b": ["a", "c"], "c": ["a"]}
    cycles = elementary_cycles(adjacency)
    assert sorted(map(tuple, cycles)) == [("a", "b"), ("a", "b", "c")]


def test_duplicate_edges_do_not_duplicate_cycles():
    assert elementary_cycles({"a": ["b", "b"], "b": ["a"]}) == [["a", "b"]]


def test_matches_bruteforce_on_random_graphs():
    for seed in range(400):
        graph = random_graph(random.Random(seed), max_nodes=7, edge_prob=0.3)
        adjacency = {nid: [] for nid in graph.nodes}
        for edge in graph.edges.values():
            if edge.relation.value == "support":
                adjacency[edge.source_id].append(edge.target_id)
        got = {tuple(c) for c in elementary_cycles(adjacency)}
        assert got == brute_support_cycles(graph)
