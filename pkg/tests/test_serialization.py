from __future__ import annotations

import json

import pytest

from outerspine.folds import fold_to_rose
from outerspine.graphs import Graph
from outerspine.marked_graphs import Rose
from outerspine.serialization import (SCHEMAS, dumps, graph_from_json, graph_to_dot, graph_to_json,
                                      kn_path_to_dot, kn_path_to_json, marked_graph_from_json,
                                      marked_graph_to_json, rose_from_json, rose_to_json,
                                      star_graph_to_dot)
from outerspine.whitehead import blowup, ideal_trees, star_graph

RHO = Rose.from_text("ab,b")


def test_rose_round_trip():
    d = rose_to_json(RHO)
    assert d == {"n": 2, "phi": ["ab", "b"]}
    assert rose_from_json(json.dumps(d)) == RHO
    assert rose_from_json(d) == RHO


@pytest.mark.parametrize("bad", [{"n": 2}, {"n": 2, "phi": ["a"]}, {"n": 2, "phi": ["a", "c"]},
                                 {"n": 2, "phi": ["aa", "b"]}])
def test_rose_json_errors(bad):
    with pytest.raises(ValueError):
        rose_from_json(bad)


def test_graph_round_trip():
    g = Graph.from_edges([(0, 1), (0, 1), (0, 1)])
    d = graph_to_json(g)
    assert set(d) == set(SCHEMAS["graph"]["required"])
    assert graph_from_json(json.loads(dumps(d))) == g
    with pytest.raises(ValueError):
        graph_from_json({"halfEdges": [0, 1], "pairs": [[0, 1]], "vertexOf": {"0": 0}})


def test_marked_graph_round_trip_with_tuple_vertices():
    m = blowup(RHO, ideal_trees(2)[0])
    back = marked_graph_from_json(json.loads(dumps(marked_graph_to_json(m))))
    assert back == m


def test_kn_path_json_and_dot():
    p = fold_to_rose(RHO)
    d = json.loads(dumps(kn_path_to_json(p)))
    assert len(d["points"]) == 3 and [s["direction"] for s in d["steps"]] == ["blowup", "collapse"]
    assert d["moves"][0]["kind"] == "Fold"
    dot = kn_path_to_dot(p)
    assert dot.startswith("digraph") and dot.count("subgraph cluster_") == 3
    assert "color=red" in dot


def test_dumps_is_stable():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})
    assert dumps({}).endswith("\n")


def test_dot_outputs():
    assert graph_to_dot(Graph.rose(2)).count("->") == 2
    dot = star_graph_to_dot(star_graph(RHO, (1, -2)))
    assert dot.startswith("graph StarGraph") and "--" in dot
