import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qcidgen.bundle import load_bundle, medical_pack_path
from qcidgen.graph import LabeledGraph, Symbol
from qcidgen.taxonomy import Taxonomy


@pytest.fixture(scope="session")
def bundle():
    return load_bundle(medical_pack_path())


@pytest.fixture(scope="session")
def grammar(bundle):
    return bundle.grammar


@pytest.fixture(scope="session")
def taxonomy(bundle):
    return bundle.taxonomy


@pytest.fixture
def empty_taxonomy():
    return Taxonomy()


def make_graph(labels, edges=()):
    """Shorthand graph builder: labels {id: text}, edges [(s, t, label)]."""
    return LabeledGraph({v: Symbol(text) for v, text in labels.items()}, edges)


def random_production(rng: random.Random, labels=("A", "B", "C"),
                      edge_labels=("x", "y"), edge_prob=0.4,
                      require_left=False):
    """Random terminal-labeled production respecting the region constraints
    (no left-right or above-below edges)."""
    from qcidgen.grammar import Production, ProductionVertex

    while True:
        n_l = rng.randint(1 if require_left else 0, 2)
        n_b = rng.randint(0, 2)
        n_a = rng.randint(0, 1)
        n_r = rng.randint(0, 2)
        if n_l + n_b + n_a + n_r >= 1 and n_l + n_b + n_a <= 5:
            break
    vertices = []
    for region, count in (("left", n_l), ("below", n_b),
                          ("above", n_a), ("right", n_r)):
        for i in range(count):
            vertices.append(ProductionVertex(
                f"p{region[0]}{i}", Symbol(rng.choice(labels)), region))
    forbidden = ({"left", "right"}, {"above", "below"})
    edges = set()
    by_id = {v.id: v for v in vertices}
    for s in by_id:
        for t in by_id:
            if s == t:
                continue
            if {by_id[s].region, by_id[t].region} in forbidden:
                continue
            for m in edge_labels:
                if rng.random() < edge_prob:
                    edges.add((s, t, m))
    return Production("rand", vertices, edges)


def random_graph(rng: random.Random, max_vertices=8, labels=("A", "B", "C"),
                 edge_labels=("x", "y"), edge_prob=0.3):
    n = rng.randint(0, max_vertices)
    g = LabeledGraph()
    for i in range(n):
        g.add_vertex(f"v{i}", Symbol(rng.choice(labels)))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for m in edge_labels:
                if rng.random() < edge_prob:
                    g.add_edge(f"v{i}", f"v{j}", m)
    return g
