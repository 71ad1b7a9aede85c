"""Random hypergraph generators shared by the test modules."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from hyperlap import Hypergraph, OrientedHypergraph
from hyperlap.hypergraph import _clique_neighbours, _components

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"


def random_hypergraph(rng: np.random.Generator, n_max: int = 10, extra_max: int = 4, size_max: int = 5) -> Hypergraph:
    """Connected hypergraph on 2..n_max vertices.

    Vertices are attached one hyperedge at a time to what is already built,
    then a few extra (possibly repeated) hyperedges are thrown in.
    """
    n = int(rng.integers(2, n_max + 1))
    order = [int(v) for v in rng.permutation(n)]
    edges: list[tuple[int, ...]] = []
    placed = [order[0]]
    rest = order[1:]
    while rest:
        k_new = int(rng.integers(1, min(len(rest), size_max - 1) + 1))
        new, rest = rest[:k_new], rest[k_new:]
        k_old = int(rng.integers(1, min(len(placed), size_max - k_new) + 1))
        old = [int(v) for v in rng.choice(placed, size=k_old, replace=False)]
        edges.append(tuple(old + new))
        placed += new
    for _ in range(int(rng.integers(0, extra_max + 1))):
        size = int(rng.integers(2, min(n, size_max) + 1))
        edges.append(tuple(int(v) for v in rng.choice(n, size=size, replace=False)))
    vertices = tuple(f"v{i + 1}" for i in range(n))
    return Hypergraph(vertices, tuple(edges))


def orient(H: Hypergraph, rng: np.random.Generator, both_sides: bool = False, p_in: float = 0.5) -> OrientedHypergraph:
    """Random input/output split of every hyperedge.

    With ``both_sides`` each hyperedge gets at least one input and one output.
    """
    ins, outs = [], []
    for e in H.edges:
        mask = rng.random(len(e)) < p_in
        if both_sides:
            if mask.all():
                mask[int(rng.integers(len(e)))] = False
            if not mask.any():
                mask[int(rng.integers(len(e)))] = True
        ins.append(tuple(v for v, m in zip(e, mask) if m))
        outs.append(tuple(v for v, m in zip(e, mask) if not m))
    return OrientedHypergraph(H.vertices, tuple(ins), tuple(outs), H.edge_names)


def corpus(n: int, seed: int, oriented: bool = False, both_sides: bool = False):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        H = random_hypergraph(rng)
        out.append(orient(H, rng, both_sides) if oriented else H)
    return out


def cycle(n: int) -> Hypergraph:
    return Hypergraph.from_edges([(f"v{i + 1}", f"v{(i + 1) % n + 1}") for i in range(n)])


def random_problem(hg: Hypergraph, rng: np.random.Generator):
    """Boundary chosen so that the interior stays connected."""
    n = hg.n
    nb = _clique_neighbours(hg)
    for _ in range(100):
        k = int(rng.integers(1, n))
        V0 = sorted(int(x) for x in rng.choice(n, k, replace=False))
        interior = [i for i in range(n) if i not in V0]
        pos = {v: j for j, v in enumerate(interior)}
        sub = [[pos[w] for w in nb[v] if w in pos] for v in interior]
        if max(_components(len(interior), sub)) == 0:
            return V0
    return None


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def hypergraphs(draw, n_max: int = 8):
    return random_hypergraph(np.random.default_rng(draw(seeds)), n_max=n_max)


@st.composite
def oriented_hypergraphs(draw, n_max: int = 8, both_sides: bool = False):
    rng = np.random.default_rng(draw(seeds))
    return orient(random_hypergraph(rng, n_max=n_max), rng, both_sides)
