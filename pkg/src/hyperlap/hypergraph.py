"""Combinatorial hypergraph types, structural queries and the text format.

Vertices are stored once, in declaration order, and every other structure in
the package refers to them by position.  Names only matter at I/O boundaries.

The text format is line oriented::

    # comment
    hypergraph undirected            (or: hypergraph oriented)
    vertices v1 v2 v3                (optional, fixes the vertex order)
    edge e1 v1 v2 v3                 (undirected)
    edge e1 in:v1,v2 out:v3          (oriented; one side may be omitted)
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ParseError, ValidationError

__all__ = [
    "Hypergraph",
    "OrientedHypergraph",
    "WeightedGraph",
    "AnyHypergraph",
    "parse_hypergraph",
    "read_hypergraph",
    "serialize",
    "is_connected",
    "degree_t",
    "degrees_t",
    "max_cardinality",
    "is_bipartite_graph",
]


def _check_common(vertices: tuple[str, ...], members: Sequence[Sequence[int]], names: tuple[str, ...]) -> None:
    if len(set(vertices)) != len(vertices):
        raise ValidationError("duplicate vertex identifiers")
    if len(names) != len(members):
        raise ValidationError("one name per hyperedge is required")
    if len(set(names)) != len(names):
        raise ValidationError("duplicate hyperedge names")
    n = len(vertices)
    covered = set()
    for name, e in zip(names, members):
        if len(e) < 2:
            raise ValidationError(f"hyperedge {name!r} has fewer than 2 vertices")
        if len(set(e)) != len(e):
            raise ValidationError(f"hyperedge {name!r} lists a vertex twice")
        for i in e:
            if not 0 <= i < n:
                raise ValidationError(f"hyperedge {name!r} refers to unknown vertex index {i}")
        covered.update(e)
    isolated = [vertices[i] for i in range(n) if i not in covered]
    if isolated:
        raise ValidationError(f"isolated vertices: {', '.join(isolated)}")


def _default_names(k: int) -> tuple[str, ...]:
    return tuple(f"e{i + 1}" for i in range(k))


@dataclass(frozen=True)
class Hypergraph:
    """Undirected hypergraph with possibly repeated hyperedges."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, ...], ...]
    edge_names: tuple[str, ...] = ()

    oriented = False

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(int(i) for i in e) for e in self.edges))
        if not self.edge_names:
            object.__setattr__(self, "edge_names", _default_names(len(self.edges)))
        object.__setattr__(self, "edge_names", tuple(self.edge_names))
        _check_common(self.vertices, self.edges, self.edge_names)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Sequence[str]],
        vertices: Sequence[str] | None = None,
        names: Sequence[str] | None = None,
    ) -> "Hypergraph":
        """Build from hyperedges given as vertex-name lists.

        Without ``vertices`` the order is first appearance.
        """
        edges = [list(e) for e in edges]
        order = list(vertices) if vertices is not None else _first_appearance(edges)
        index = {v: i for i, v in enumerate(order)}
        try:
            members = [tuple(index[v] for v in e) for e in edges]
        except KeyError as exc:
            raise ValidationError(f"unknown vertex {exc.args[0]!r}") from None
        return cls(tuple(order), tuple(members), tuple(names or ()))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: str | int) -> int:
        if isinstance(v, (int, np.integer)):
            if not 0 <= v < self.n:
                raise ValidationError(f"vertex index {v} out of range")
            return int(v)
        try:
            return self.vertices.index(v)
        except ValueError:
            raise ValidationError(f"unknown vertex {v!r}") from None


@dataclass(frozen=True)
class OrientedHypergraph:
    """Hypergraph whose hyperedges split into disjoint input and output sets."""

    vertices: tuple[str, ...]
    inputs: tuple[tuple[int, ...], ...]
    outputs: tuple[tuple[int, ...], ...]
    edge_names: tuple[str, ...] = ()
    edges: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    oriented = True

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "inputs", tuple(tuple(int(i) for i in e) for e in self.inputs))
        object.__setattr__(self, "outputs", tuple(tuple(int(i) for i in e) for e in self.outputs))
        if len(self.inputs) != len(self.outputs):
            raise ValidationError("inputs and outputs must have one entry per hyperedge")
        if not self.edge_names:
            object.__setattr__(self, "edge_names", _default_names(len(self.inputs)))
        object.__setattr__(self, "edge_names", tuple(self.edge_names))
        for name, ins, outs in zip(self.edge_names, self.inputs, self.outputs):
            if set(ins) & set(outs):
                raise ValidationError(f"hyperedge {name!r} has a vertex that is both input and output")
        object.__setattr__(self, "edges", tuple(i + o for i, o in zip(self.inputs, self.outputs)))
        _check_common(self.vertices, self.edges, self.edge_names)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[Sequence[str], Sequence[str]]],
        vertices: Sequence[str] | None = None,
        names: Sequence[str] | None = None,
    ) -> "OrientedHypergraph":
        """Build from ``(inputs, outputs)`` pairs of vertex names."""
        edges = [(list(i), list(o)) for i, o in edges]
        order = list(vertices) if vertices is not None else _first_appearance(i + o for i, o in edges)
        index = {v: k for k, v in enumerate(order)}
        try:
            ins = [tuple(index[v] for v in i) for i, _ in edges]
            outs = [tuple(index[v] for v in o) for _, o in edges]
        except KeyError as exc:
            raise ValidationError(f"unknown vertex {exc.args[0]!r}") from None
        return cls(tuple(order), tuple(ins), tuple(outs), tuple(names or ()))

    @property
    def n(self) -> int:
        return len(self.vertices)

    index = Hypergraph.index

    def reversed(self) -> "OrientedHypergraph":
        """Swap inputs and outputs of every hyperedge."""
        return OrientedHypergraph(self.vertices, self.outputs, self.inputs, self.edge_names)

    def underlying(self) -> Hypergraph:
        """Forget the orientation."""
        return Hypergraph(self.vertices, self.edges, self.edge_names)


AnyHypergraph = Union[Hypergraph, OrientedHypergraph]


def _first_appearance(edges: Iterable[Sequence[str]]) -> list[str]:
    seen: dict[str, None] = {}
    for e in edges:
        for v in e:
            seen.setdefault(v, None)
    return list(seen)


# --------------------------------------------------------------------------
# text format


def _tokens(line: str) -> list[tuple[str, int]]:
    """Whitespace tokens with their 1-based column."""
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def parse_hypergraph(text: str) -> AnyHypergraph:
    """Parse the line-oriented hypergraph format."""
    kind = None
    header_order: list[str] | None = None
    header_line = 0
    names: list[str] = []
    plain: list[list[str]] = []
    oriented: list[tuple[list[str], list[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        word, col = toks[0]
        if kind is None:
            if word != "hypergraph" or len(toks) != 2 or toks[1][0] not in ("undirected", "oriented"):
                raise ParseError("expected 'hypergraph undirected' or 'hypergraph oriented'", lineno, col)
            kind = toks[1][0]
            continue
        if word == "vertices":
            if header_order is not None:
                raise ParseError("duplicate 'vertices' line", lineno, col)
            if names:
                raise ParseError("'vertices' must precede all edges", lineno, col)
            header_order = [t for t, _ in toks[1:]]
            header_line = lineno
            seen = set()
            for t, c in toks[1:]:
                if t in seen:
                    raise ParseError(f"duplicate vertex {t!r}", lineno, c)
                seen.add(t)
            continue
        if word != "edge":
            raise ParseError(f"unknown directive {word!r}", lineno, col)
        if len(toks) < 2:
            raise ParseError("edge without a name", lineno, col)
        name, ncol = toks[1]
        if name in names:
            raise ParseError(f"duplicate edge name {name!r}", lineno, ncol)
        body = toks[2:]
        known = set(header_order) if header_order is not None else None

        def check_vertex(v: str, c: int) -> None:
            if not v:
                raise ParseError("empty vertex name", lineno, c)
            if known is not None and v not in known:
                raise ParseError(f"vertex {v!r} not declared in 'vertices'", lineno, c)

        if kind == "undirected":
            members = []
            for t, c in body:
                if ":" in t or "," in t:
                    raise ParseError(f"unexpected token {t!r} in undirected edge", lineno, c)
                check_vertex(t, c)
                if t in members:
                    raise ParseError(f"vertex {t!r} repeated in edge {name!r}", lineno, c)
                members.append(t)
            if len(members) < 2:
                raise ParseError(f"singleton hyperedge {name!r}: at least 2 vertices required", lineno, ncol)
            plain.append(members)
        else:
            sides: dict[str, list[str]] = {}
            for t, c in body:
                side, sep, rest = t.partition(":")
                if not sep or side not in ("in", "out"):
                    raise ParseError(f"expected in:<v,...> or out:<v,...>, got {t!r}", lineno, c)
                if side in sides:
                    raise ParseError(f"'{side}:' given twice", lineno, c)
                vs = rest.split(",") if rest else []
                for v in vs:
                    check_vertex(v, c)
                if len(set(vs)) != len(vs):
                    raise ParseError(f"vertex repeated in '{side}:' of edge {name!r}", lineno, c)
                sides[side] = vs
            ins, outs = sides.get("in", []), sides.get("out", [])
            if not sides:
                raise ParseError(f"edge {name!r} has neither inputs nor outputs", lineno, ncol)
            both = set(ins) & set(outs)
            if both:
                raise ParseError(f"vertex {sorted(both)[0]!r} is both input and output of {name!r}", lineno, ncol)
            if len(ins) + len(outs) < 2:
                raise ParseError(f"singleton hyperedge {name!r}: at least 2 vertices required", lineno, ncol)
            oriented.append((ins, outs))
        names.append(name)

    if kind is None:
        raise ParseError("empty document", 1)
    try:
        if kind == "undirected":
            return Hypergraph.from_edges(plain, header_order, names)
        return OrientedHypergraph.from_edges(oriented, header_order, names)
    except ValidationError as exc:
        raise ParseError(str(exc), header_line or 1) from None


def read_hypergraph(path) -> AnyHypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())


def serialize(H: AnyHypergraph) -> str:
    """Canonical text form; ``parse_hypergraph(serialize(H)) == H``."""
    lines = [f"hypergraph {'oriented' if H.oriented else 'undirected'}", "vertices " + " ".join(H.vertices)]
    if H.oriented:
        for name, ins, outs in zip(H.edge_names, H.inputs, H.outputs):
            parts = [f"edge {name}"]
            if ins:
                parts.append("in:" + ",".join(H.vertices[i] for i in ins))
            if outs:
                parts.append("out:" + ",".join(H.vertices[i] for i in outs))
            lines.append(" ".join(parts))
    else:
        for name, e in zip(H.edge_names, H.edges):
            lines.append(f"edge {name} " + " ".join(H.vertices[i] for i in e))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# structural queries


def _components(n: int, neighbours: Sequence[Iterable[int]]) -> list[int]:
    label = [-1] * n
    comp = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = comp
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in neighbours[u]:
                if label[w] < 0:
                    label[w] = comp
                    queue.append(w)
        comp += 1
    return label


def _clique_neighbours(H: AnyHypergraph) -> list[set[int]]:
    nb: list[set[int]] = [set() for _ in range(H.n)]
    for e in H.edges:
        for i in e:
            nb[i].update(e)
    for i in range(H.n):
        nb[i].discard(i)
    return nb


def is_connected(H: AnyHypergraph) -> bool:
    """Connectivity of the co-membership graph; orientation is ignored."""
    return max(_components(H.n, _clique_neighbours(H))) == 0


def degrees_t(H: AnyHypergraph) -> np.ndarray:
    """Number of hyperedges containing each vertex."""
    t = np.zeros(H.n, dtype=np.int64)
    for e in H.edges:
        t[list(e)] += 1
    return t


def degree_t(H: AnyHypergraph, v: str | int) -> int:
    return int(degrees_t(H)[H.index(v)])


def max_cardinality(H: AnyHypergraph) -> tuple[int, bool]:
    """Largest hyperedge size and whether every hyperedge has that size."""
    sizes = [len(e) for e in H.edges]
    psi = max(sizes)
    return psi, all(s == psi for s in sizes)


# --------------------------------------------------------------------------
# weighted graphs


@dataclass(frozen=True)
class WeightedGraph:
    """Directed weighted graph without self loops.

    ``weights[i, j]`` is the weight of the edge from vertex ``i`` to ``j``.
    The array may hold :class:`fractions.Fraction` objects for exact work.
    """

    vertices: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, copy=True)
        if w.ndim != 2 or w.shape != (len(self.vertices), len(self.vertices)):
            raise ValidationError("weight matrix shape does not match the vertex list")
        if any(x < 0 for x in w.flat):
            raise ValidationError("edge weights must be non-negative")
        if any(w[i, i] != 0 for i in range(w.shape[0])):
            raise ValidationError("self loops are not supported")
        w.flags.writeable = False
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def symmetric(self) -> bool:
        return bool(np.all(self.weights == self.weights.T))

    @property
    def out_degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    @property
    def in_degrees(self) -> np.ndarray:
        return self.weights.sum(axis=0)

    def edge_list(self) -> list[tuple[int, int, object]]:
        return [(i, j, self.weights[i, j]) for i in range(self.n) for j in range(self.n) if self.weights[i, j] != 0]


def is_bipartite_graph(G: WeightedGraph) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Two-colour a symmetric graph by breadth-first search.

    Returns ``(True, (V1, V2))`` with vertex positions when a proper colouring
    exists (one per connected component, seeded at its lowest vertex), else
    ``(False, None)``.
    """
    if not G.symmetric:
        raise ValidationError("bipartiteness check needs a symmetric graph")
    n = G.n
    nb = [[j for j in range(n) if G.weights[i, j] > 0] for i in range(n)]
    colour = [-1] * n
    for s in range(n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in nb[u]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return False, None
    return True, (
        tuple(i for i in range(n) if colour[i] == 0),
        tuple(i for i in range(n) if colour[i] == 1),
    )
