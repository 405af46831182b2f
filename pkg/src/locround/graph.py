"""Multigraphs, d2-multigraphs, set cover instances, and file ingestion.

Nodes are identified by arbitrary non-negative 64-bit integers preserved
from the input.  Edges are physical (endpoints adjacent in the underlying
communication graph) or virtual (simulated by a manager node adjacent to
both endpoints).  Instances are immutable after construction and safe to
share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

MAX_ID = (1 << 63) - 1

PHYSICAL = "physical"
VIRTUAL = "virtual"


class GraphFormatError(ValueError):
    """Raised on malformed instance files or invariant violations."""


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    kind: str = PHYSICAL
    manager: Optional[int] = None
    index: int = 0

    def endpoints(self):
        return (self.u, self.v)

    def other(self, x):
        return self.v if x == self.u else self.u


class Multigraph:
    """Undirected multigraph with no self-loops over integer node ids.

    ``comm_adjacency`` is the neighbor relation of the underlying
    communication graph; physical edges run between comm-neighbors and each
    virtual edge carries a manager comm-adjacent to both endpoints.
    """

    def __init__(self, nodes: Iterable[int], edges: Iterable[Edge],
                 comm_adjacency: Optional[dict] = None):
        self.nodes = sorted(set(nodes))
        if self.nodes and (self.nodes[0] < 0 or self.nodes[-1] > MAX_ID):
            raise GraphFormatError("node ids must be in [0, 2^63)")
        node_set = set(self.nodes)
        self.edges = []
        for i, e in enumerate(edges):
            if e.u == e.v:
                raise GraphFormatError(f"self-loop at node {e.u}")
            if e.u not in node_set or e.v not in node_set:
                raise GraphFormatError(f"edge {e.u}-{e.v} uses unknown node")
            if e.kind == VIRTUAL and e.manager is None:
                raise GraphFormatError("virtual edge without manager")
            self.edges.append(Edge(e.u, e.v, e.kind, e.manager, i))
        if comm_adjacency is None:
            comm_adjacency = {v: set() for v in self.nodes}
            for e in self.edges:
                if e.kind == PHYSICAL:
                    comm_adjacency[e.u].add(e.v)
                    comm_adjacency[e.v].add(e.u)
                elif e.manager is not None:
                    comm_adjacency.setdefault(e.manager, set()).update((e.u, e.v))
                    comm_adjacency[e.u].add(e.manager)
                    comm_adjacency[e.v].add(e.manager)
        # comm_adjacency may mention manager vertices outside the node set
        # (the d2-multigraph nodes are a subset of the communication graph)
        self.comm_adjacency = {v: frozenset(adj)
                               for v, adj in comm_adjacency.items()}
        for v in self.nodes:
            self.comm_adjacency.setdefault(v, frozenset())
        for e in self.edges:
            if e.kind == PHYSICAL:
                if e.v not in self.comm_adjacency[e.u]:
                    raise GraphFormatError(
                        f"physical edge {e.u}-{e.v} not comm-adjacent")
            else:
                if (e.u not in self.comm_adjacency[e.manager]
                        or e.v not in self.comm_adjacency[e.manager]):
                    raise GraphFormatError(
                        f"manager {e.manager} not adjacent to both endpoints "
                        f"of virtual edge {e.u}-{e.v}")
        self._index = {v: i for i, v in enumerate(self.nodes)}
        self._incident = {v: [] for v in self.nodes}
        for e in self.edges:
            self._incident[e.u].append(e)
            self._incident[e.v].append(e)

    # -- simple accessors ---------------------------------------------------

    def __len__(self):
        return len(self.nodes)

    def n_edges(self):
        return len(self.edges)

    def index_of(self, v):
        return self._index[v]

    def incident(self, v):
        return self._incident[v]

    def degree(self, v):
        return len(self._incident[v])

    def max_degree(self):
        return max((len(es) for es in self._incident.values()), default=0)

    def is_simple_physical(self):
        seen = set()
        for e in self.edges:
            if e.kind != PHYSICAL:
                return False
            key = (min(e.u, e.v), max(e.u, e.v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def neighbors(self, v):
        """Neighbor multiset as a sorted list (simple graphs: the neighbor set)."""
        return sorted(e.other(v) for e in self._incident[v])


def simple_graph(nodes, pairs):
    """Simple physical graph from an iterable of unordered id pairs."""
    seen = set()
    edges = []
    for u, v in pairs:
        if u == v:
            raise GraphFormatError(f"self-loop at node {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        edges.append(Edge(key[0], key[1]))
    return Multigraph(nodes, edges)


@dataclass
class WeightedGraph:
    """Simple physical graph with positive integer node weights."""

    graph: Multigraph
    weights: dict

    def __post_init__(self):
        if not self.graph.is_simple_physical():
            raise GraphFormatError("weighted graph must be simple and physical")
        for v in self.graph.nodes:
            w = self.weights.get(v, 1)
            if w < 1 or w != int(w):
                raise GraphFormatError(f"weight of node {v} must be a positive integer")
            self.weights[v] = int(w)
        self.W = max(self.weights.values(), default=1)

    def weight(self, v):
        return self.weights[v]

    def total_weight(self, nodes=None):
        it = self.graph.nodes if nodes is None else nodes
        return sum(self.weights[v] for v in it)


@dataclass
class SetCoverInstance:
    """Bipartite set cover instance: elements U, sets V, incidence edges."""

    elements: list
    sets: list
    incidence: list          # (element id, set id)
    costs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.elements = sorted(set(self.elements))
        self.sets = sorted(set(self.sets))
        eset = set(self.elements)
        vset = set(self.sets)
        if eset & vset:
            raise GraphFormatError("element and set ids must be disjoint")
        self.element_sets = {u: [] for u in self.elements}
        self.set_elements = {v: [] for v in self.sets}
        seen = set()
        for (u, v) in self.incidence:
            if u not in eset or v not in vset:
                raise GraphFormatError(f"containment {u} in {v} uses unknown id")
            if (u, v) in seen:
                continue
            seen.add((u, v))
            self.element_sets[u].append(v)
            self.set_elements[v].append(u)
        self.incidence = sorted(seen)
        for u in self.elements:
            self.element_sets[u].sort()
            if not self.element_sets[u]:
                raise GraphFormatError(f"element {u} has degree 0: uncoverable")
        for v in self.sets:
            self.set_elements[v].sort()
        for v in self.sets:
            c = self.costs.get(v, 1)
            if c < 1 or c != int(c):
                raise GraphFormatError(f"cost of set {v} must be a positive integer")
            self.costs[v] = int(c)
        self.s = max((len(self.set_elements[v]) for v in self.sets), default=0)
        self.t = max(len(self.element_sets[u]) for u in self.elements) if self.elements else 0
        self.W = max(self.costs.values(), default=1)


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------


def load_graph(path, fmt="edge-list"):
    """Parse an instance file.

    Edge-list format: lines ``u v [w]`` (the optional third token is
    ignored here), ``n <id> <weight>`` node declarations, ``#`` comments.
    Set cover format: ``e <id>``, ``s <id> [cost]``, ``c <element> <set>``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    if fmt == "edge-list":
        return parse_edge_list(lines, path)
    if fmt == "setcover":
        return parse_setcover(lines, path)
    raise GraphFormatError(f"unknown format {fmt!r}")


def _fail(path, lineno, msg):
    raise GraphFormatError(f"{path}:{lineno}: {msg}")


def parse_edge_list(lines, path="<edge-list>"):
    nodes = set()
    weights = {}
    pairs = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if toks[0] == "n":
            if len(toks) != 3:
                _fail(path, lineno, "node line needs 'n <id> <weight>'")
            try:
                vid, w = int(toks[1]), int(toks[2])
            except ValueError:
                _fail(path, lineno, "non-integer token")
            if vid in weights and weights[vid] != w:
                _fail(path, lineno, f"duplicate NodeId {vid} with conflicting weight")
            nodes.add(vid)
            weights[vid] = w
            continue
        if len(toks) not in (2, 3):
            _fail(path, lineno, "edge line needs 'u v [w]'")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            _fail(path, lineno, "non-integer endpoint")
        if u == v:
            _fail(path, lineno, f"self-loop at node {u}")
        nodes.update((u, v))
        pairs.append((u, v))
    g = simple_graph(nodes, pairs)
    if weights:
        for v in g.nodes:
            weights.setdefault(v, 1)
        return WeightedGraph(g, weights)
    return g


def parse_setcover(lines, path="<setcover>"):
    elements = []
    sets_ = []
    costs = {}
    inc = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        try:
            if toks[0] == "e" and len(toks) == 2:
                elements.append(int(toks[1]))
            elif toks[0] == "s" and len(toks) in (2, 3):
                vid = int(toks[1])
                sets_.append(vid)
                if len(toks) == 3:
                    costs[vid] = int(toks[2])
            elif toks[0] == "c" and len(toks) == 3:
                inc.append((int(toks[1]), int(toks[2])))
            else:
                _fail(path, lineno, f"unrecognized line {line!r}")
        except ValueError:
            _fail(path, lineno, "non-integer token")
    if len(elements) != len(set(elements)):
        _fail(path, 0, "duplicate element id")
    if len(sets_) != len(set(sets_)):
        _fail(path, 0, "duplicate set id")
    try:
        return SetCoverInstance(elements, sets_, inc, costs)
    except GraphFormatError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# derived structures
# ---------------------------------------------------------------------------


def build_d2_multigraph(g: Multigraph, virtual_edge_spec):
    """Extend ``g``'s physical edges with one virtual edge per (manager, pair).

    ``virtual_edge_spec(manager) -> iterable of (u, v)`` must yield only
    pairs of the manager's comm-neighbors.  Pairs repeated for the same
    manager are aggregated (kept once).
    """
    edges = [e for e in g.edges if e.kind == PHYSICAL]
    seen = set()
    for w in g.nodes:
        nbrs = g.comm_adjacency[w]
        for (u, v) in virtual_edge_spec(w):
            if u not in nbrs or v not in nbrs:
                raise GraphFormatError(
                    f"virtual pair ({u},{v}) not both adjacent to manager {w}")
            if u == v:
                raise GraphFormatError("virtual self-loop")
            key = (w, min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            edges.append(Edge(min(u, v), max(u, v), VIRTUAL, w))
    return Multigraph(g.nodes, edges, dict(g.comm_adjacency))


def orient_by_degree_id(g: Multigraph):
    """Orientation u->v iff (deg(u), id(u)) < (deg(v), id(v)); simple graphs."""
    if not g.is_simple_physical():
        raise GraphFormatError("orientation requires a simple graph")
    orient = {}
    for e in g.edges:
        ku = (g.degree(e.u), e.u)
        kv = (g.degree(e.v), e.v)
        orient[e.index] = (e.u, e.v) if ku < kv else (e.v, e.u)
    return orient


def line_graph_view(g: Multigraph):
    """Multigraph over the edges of ``g``: edge-nodes sharing an endpoint w
    are joined by a virtual edge managed by w.

    Edge-node ids are ``base + edge index`` with ``base`` past the largest
    original id, so managers (original nodes) and edge-nodes never collide.
    The returned graph carries ``edge_node_base`` for mapping back.
    """
    if not g.is_simple_physical():
        raise GraphFormatError("line graph view requires a simple graph")
    base = (g.nodes[-1] + 1) if g.nodes else 0
    nodes = [base + e.index for e in g.edges]
    comm = {i: set() for i in nodes}
    for v in g.nodes:
        comm[v] = set()
    for e in g.edges:
        en = base + e.index
        for end in (e.u, e.v):
            comm[en].add(end)
            comm[end].add(en)
    edges = []
    for v in g.nodes:
        inc = sorted(base + e.index for e in g.incident(v))
        for i in range(len(inc)):
            for j in range(i + 1, len(inc)):
                edges.append(Edge(inc[i], inc[j], VIRTUAL, v))
    h = Multigraph(nodes, edges, comm)
    h.edge_node_base = base
    return h
