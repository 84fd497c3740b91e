"""phi^3 Feynman graphs: validation, 1PI/divergence tests, admissible subgraphs,
contraction and canonical forms.

Graphs are stored as plain multigraphs on string vertex ids.  Internal edges are
unordered pairs (repeats allowed for multi-edges); external legs are a multiset of
vertex ids.  Subgraphs are vertex-induced: the boundary edges of a vertex subset
become the external legs of the subgraph, which keeps every vertex trivalent.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import (
    DomainError,
    GraphValidationError,
    IncompleteCatalogError,
    ParseError,
    ResourceLimitError,
)

VALENCE = 3
DEFAULT_VERTEX_CAP = 10
DIVERGENT_LEG_COUNTS = (2, 3)

Edge = tuple[str, str]


def _edge(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


def _connected(vertices: Iterable[str], edges: Iterable[Edge]) -> bool:
    verts = list(vertices)
    if not verts:
        return True
    adj: dict[str, set[str]] = {v: set() for v in verts}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


@dataclass(frozen=True)
class FeynmanGraph:
    """A trivalent multigraph with external legs.

    The constructor normalizes edge and leg order and enforces the invariants:
    every vertex has valence 3, no self-loops, internal edges form a connected
    graph.  ``FeynmanGraph.empty()`` is the distinguished empty graph.
    """

    vertices: tuple[str, ...]
    internal_edges: tuple[Edge, ...]
    external_legs: tuple[str, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            dup = [v for v, k in Counter(verts).items() if k > 1]
            raise GraphValidationError(f"duplicate vertex id(s): {dup}")
        vset = set(verts)
        edges = []
        for pair in self.internal_edges:
            u, v = (str(x) for x in pair)
            for x in (u, v):
                if x not in vset:
                    raise GraphValidationError(f"internal edge ({u}, {v}) references unknown vertex {x!r}")
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u!r} is not allowed")
            edges.append(_edge(u, v))
        legs = tuple(sorted(str(x) for x in self.external_legs))
        for x in legs:
            if x not in vset:
                raise GraphValidationError(f"external leg references unknown vertex {x!r}")
        object.__setattr__(self, "vertices", tuple(sorted(verts)))
        object.__setattr__(self, "internal_edges", tuple(sorted(edges)))
        object.__setattr__(self, "external_legs", legs)

        val = self.valences()
        for v in self.vertices:
            if val[v] != VALENCE:
                raise GraphValidationError(f"vertex {v!r} has valence {val[v]}, expected {VALENCE}")
        if not _connected(self.vertices, self.internal_edges):
            raise GraphValidationError("internal edges do not form a connected graph")

    @classmethod
    def empty(cls) -> FeynmanGraph:
        return cls((), (), (), name="empty")

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def valences(self) -> Counter[str]:
        val: Counter[str] = Counter({v: 0 for v in self.vertices})
        for u, v in self.internal_edges:
            val[u] += 1
            val[v] += 1
        val.update(self.external_legs)
        return val

    def leg_counts(self) -> Counter[str]:
        return Counter(self.external_legs)

    def renamed(self, mapping: Mapping[str, str], name: str | None = None) -> FeynmanGraph:
        """Relabel vertices (unmapped ids are kept); the result must stay injective."""
        f = {v: mapping.get(v, v) for v in self.vertices}
        if len(set(f.values())) != len(f):
            raise GraphValidationError("relabelling merges vertices")
        return FeynmanGraph(
            tuple(f[v] for v in self.vertices),
            tuple((f[u], f[v]) for u, v in self.internal_edges),
            tuple(f[v] for v in self.external_legs),
            name=self.name if name is None else name,
        )

    def induced(self, vertex_set: Iterable[str]) -> FeynmanGraph:
        """Vertex-induced subgraph; boundary edges become external legs.

        Raises GraphValidationError if the induced internal edges are disconnected.
        """
        vs = set(vertex_set)
        unknown = vs - set(self.vertices)
        if unknown:
            raise DomainError(f"vertices {sorted(unknown)} not in graph")
        edges = []
        legs = [v for v in self.external_legs if v in vs]
        for u, v in self.internal_edges:
            if u in vs and v in vs:
                edges.append((u, v))
            elif u in vs:
                legs.append(u)
            elif v in vs:
                legs.append(v)
        return FeynmanGraph(tuple(vs), tuple(edges), tuple(legs))

    def __str__(self) -> str:
        label = self.name or "graph"
        return f"{label}(V={len(self.vertices)}, I={len(self.internal_edges)}, E={len(self.external_legs)})"


def loop_number(g: FeynmanGraph) -> int:
    """First Betti number |I| - |V| + 1 of a connected graph."""
    if g.is_empty:
        raise DomainError("loop number of the empty graph is undefined")
    return len(g.internal_edges) - len(g.vertices) + 1


def is_one_particle_irreducible(g: FeynmanGraph) -> bool:
    if g.is_empty:
        raise DomainError("1PI test needs a nonempty graph")
    edges = list(g.internal_edges)
    for i in range(len(edges)):
        # removing one copy of a repeated edge never disconnects
        if edges[i] in edges[:i]:
            continue
        rest = edges[:i] + edges[i + 1:]
        if not _connected(g.vertices, rest):
            return False
    return True


def is_divergent(g: FeynmanGraph) -> bool:
    """1PI, at least one loop, and 2 or 3 external legs."""
    if g.is_empty:
        return False
    return (
        len(g.external_legs) in DIVERGENT_LEG_COUNTS
        and loop_number(g) >= 1
        and is_one_particle_irreducible(g)
    )


@dataclass(frozen=True)
class SubgraphEmbedding:
    """A family of pairwise disjoint vertex sets of ``host``, each inducing a
    divergent 1PI subgraph.  The empty family is the empty subgraph."""

    host: FeynmanGraph
    components: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        comps = tuple(sorted((frozenset(c) for c in self.components), key=lambda c: sorted(c)))
        object.__setattr__(self, "components", comps)

    def subgraphs(self) -> list[FeynmanGraph]:
        return [self.host.induced(c) for c in self.components]

    @property
    def vertex_count(self) -> int:
        return sum(len(c) for c in self.components)

    def check(self) -> None:
        """Raise DomainError unless this is an admissible embedding in ``host``."""
        seen: set[str] = set()
        hv = set(self.host.vertices)
        for comp in self.components:
            if not comp:
                raise DomainError("empty component in subgraph embedding")
            if not comp <= hv:
                raise DomainError(f"component {sorted(comp)} has vertices outside the host")
            if comp & seen:
                raise DomainError("subgraph components are not vertex-disjoint")
            seen |= comp
            if len(self.components) == 1 and comp == hv:
                raise DomainError("the full graph is not a proper subgraph")
            try:
                sub = self.host.induced(comp)
            except GraphValidationError as exc:
                raise DomainError(f"component {sorted(comp)} is not connected") from exc
            if not is_divergent(sub):
                raise DomainError(f"component {sorted(comp)} is not a divergent 1PI subgraph")


def _divergent_components(g: FeynmanGraph) -> list[frozenset[str]]:
    verts = g.vertices
    n = len(verts)
    found = []
    for r in range(1, n + 1):
        for combo in itertools.combinations(verts, r):
            if r == n:
                continue
            vs = set(combo)
            inner = [e for e in g.internal_edges if e[0] in vs and e[1] in vs]
            if not _connected(combo, inner):
                continue
            if is_divergent(g.induced(vs)):
                found.append(frozenset(combo))
    return found


def admissible_subgraphs(g: FeynmanGraph) -> list[SubgraphEmbedding]:
    """All proper admissible subgraphs of a 1PI graph, including disjoint unions.

    The full graph and the empty subgraph are excluded.  Isomorphic subgraphs at
    different positions are separate embeddings.
    """
    if g.is_empty or not is_one_particle_irreducible(g):
        raise DomainError(f"admissible subgraphs need a 1PI graph, got {g}")
    comps = _divergent_components(g)
    families: list[tuple[frozenset[str], ...]] = []

    def extend(start: int, chosen: list[frozenset[str]], used: frozenset[str]) -> None:
        for i in range(start, len(comps)):
            c = comps[i]
            if c & used:
                continue
            chosen.append(c)
            families.append(tuple(chosen))
            extend(i + 1, chosen, used | c)
            chosen.pop()

    extend(0, [], frozenset())
    out = [SubgraphEmbedding(g, fam) for fam in families]
    out.sort(key=lambda s: (len(s.components), [sorted(c) for c in s.components]))
    return out


def _fresh_id(taken: set[str], comp: frozenset[str]) -> str:
    base = "[" + ",".join(sorted(comp)) + "]"
    vid = base
    while vid in taken:
        vid += "'"
    return vid


def contract(g: FeynmanGraph, s: SubgraphEmbedding) -> FeynmanGraph:
    """Collapse each component of ``s`` to a point.

    A 3-leg component becomes a single trivalent vertex.  A 2-leg component sits
    on a propagator: it is removed and its two boundary half-edges are joined.
    """
    if s.host != g:
        raise DomainError("embedding belongs to a different host graph")
    s.check()
    if not s.components:
        return g
    vertices = set(g.vertices)
    edges = list(g.internal_edges)
    legs = list(g.external_legs)
    for comp in s.components:
        outside: list[str | None] = []  # None marks an external leg
        kept_edges = []
        for u, v in edges:
            if u in comp and v in comp:
                continue
            if u in comp:
                outside.append(v)
            elif v in comp:
                outside.append(u)
            else:
                kept_edges.append((u, v))
        outside.extend(None for x in legs if x in comp)
        legs = [x for x in legs if x not in comp]
        vertices -= comp
        edges = kept_edges
        if len(outside) == 3:
            vid = _fresh_id(vertices, comp)
            vertices.add(vid)
            for o in outside:
                if o is None:
                    legs.append(vid)
                else:
                    edges.append((vid, o))
        elif len(outside) == 2:
            a, b = outside
            if a is not None and b is not None:
                if a == b:
                    raise DomainError(f"contracting {sorted(comp)} would create a self-loop at {a!r}")
                edges.append((a, b))
            elif a is not None:
                legs.append(a)
            elif b is not None:
                legs.append(b)
        else:
            raise DomainError(f"component {sorted(comp)} has {len(outside)} boundary legs")
    if not vertices:
        return FeynmanGraph.empty()
    return FeynmanGraph(tuple(vertices), tuple(edges), tuple(legs))


def _refine_colors(g: FeynmanGraph) -> dict[str, int]:
    legs = g.leg_counts()
    mult: Counter[Edge] = Counter(g.internal_edges)
    nbrs: dict[str, list[tuple[str, int]]] = {v: [] for v in g.vertices}
    for (u, v), k in mult.items():
        nbrs[u].append((v, k))
        nbrs[v].append((u, k))
    colors = {v: legs[v] for v in g.vertices}
    while True:
        sigs = {
            v: (colors[v], tuple(sorted((colors[w], k) for w, k in nbrs[v])))
            for v in g.vertices
        }
        ranking = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
        new = {v: ranking[sigs[v]] for v in g.vertices}
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def canonical_form(g: FeynmanGraph, vertex_cap: int = DEFAULT_VERTEX_CAP) -> bytes:
    """Isomorphism-invariant key.

    Vertices are first split into color-refinement cells (an isomorphism
    invariant); the key is the lexicographic minimum of the leg/adjacency encoding
    over every ordering that respects the cell order.
    """
    if g.is_empty:
        return b"empty"
    n = len(g.vertices)
    if n > vertex_cap:
        raise ResourceLimitError(f"graph has {n} vertices, canonical form cap is {vertex_cap}")
    colors = _refine_colors(g)
    cells: dict[int, list[str]] = {}
    for v in g.vertices:
        cells.setdefault(colors[v], []).append(v)
    ordered_cells = [cells[c] for c in sorted(cells)]
    legs = g.leg_counts()
    mult: Counter[Edge] = Counter(g.internal_edges)
    best: tuple | None = None
    for perms in itertools.product(*(itertools.permutations(c) for c in ordered_cells)):
        order = [v for p in perms for v in p]
        code = (
            tuple(legs[v] for v in order),
            tuple(mult[_edge(order[i], order[j])] for i in range(n) for j in range(i + 1, n)),
        )
        if best is None or code < best:
            best = code
    assert best is not None
    leg_part = ",".join(map(str, best[0]))
    adj_part = ",".join(map(str, best[1]))
    return f"n={n};legs={leg_part};adj={adj_part}".encode("ascii")


# -- documents ---------------------------------------------------------------

def parse_graph(document: str | bytes | Mapping) -> FeynmanGraph:
    """Build a validated graph from a JSON document (string or decoded mapping)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"graph document is not valid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise ParseError("graph document must be a JSON object")
    missing = [k for k in ("vertices", "internal_edges", "external_legs") if k not in document]
    if missing:
        raise ParseError(f"graph document missing field(s): {missing}")
    name = document.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("graph 'name' must be a string")
    verts = document["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise ParseError(f"graph {name!r}: 'vertices' must be a list of strings")
    edges = document["internal_edges"]
    if not isinstance(edges, list):
        raise ParseError(f"graph {name!r}: 'internal_edges' must be a list")
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise ParseError(f"graph {name!r}: malformed internal edge {e!r}")
    legs = document["external_legs"]
    if not isinstance(legs, list) or not all(isinstance(v, str) for v in legs):
        raise ParseError(f"graph {name!r}: 'external_legs' must be a list of vertex ids")
    try:
        return FeynmanGraph(tuple(verts), tuple(tuple(e) for e in edges), tuple(legs), name=name)
    except GraphValidationError as exc:
        raise GraphValidationError(f"graph {name!r}: {exc}") from exc


def graph_document(g: FeynmanGraph) -> dict:
    return {
        "name": g.name,
        "vertices": list(g.vertices),
        "internal_edges": [list(e) for e in g.internal_edges],
        "external_legs": list(g.external_legs),
    }


# -- catalog -----------------------------------------------------------------

class GraphCatalog:
    """Named divergent 1PI graphs, one per isomorphism class.

    ``degree_bound`` is the loop order up to which the catalog is declared
    closed; operations that need generators above it fail instead of
    truncating.
    """

    def __init__(
        self,
        graphs: Iterable[FeynmanGraph],
        degree_bound: int | None = None,
        vertex_cap: int = DEFAULT_VERTEX_CAP,
    ) -> None:
        self.vertex_cap = vertex_cap
        self._by_key: dict[bytes, FeynmanGraph] = {}
        self._by_name: dict[str, FeynmanGraph] = {}
        self._key_of: dict[str, bytes] = {}
        for g in graphs:
            self._add(g)
        top = max((loop_number(g) for g in self._by_name.values()), default=0)
        self.degree_bound = top if degree_bound is None else degree_bound
        if top > self.degree_bound:
            raise ParseError(f"catalog holds {top}-loop graphs but declares degree bound {self.degree_bound}")

    def _add(self, g: FeynmanGraph) -> None:
        if not g.name:
            raise ParseError("catalog graphs need a name")
        if g.name in self._by_name:
            raise ParseError(f"duplicate catalog name {g.name!r}")
        if not is_divergent(g):
            raise ParseError(f"catalog graph {g.name!r} is not a divergent 1PI graph")
        key = canonical_form(g, self.vertex_cap)
        if key in self._by_key:
            raise ParseError(f"catalog graphs {self._by_key[key].name!r} and {g.name!r} are isomorphic")
        self._by_key[key] = g
        self._by_name[g.name] = g
        self._key_of[g.name] = key

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def __iter__(self) -> Iterator[str]:
        return iter(self.names())

    def __len__(self) -> int:
        return len(self._by_name)

    def graph(self, name: str) -> FeynmanGraph:
        try:
            return self._by_name[name]
        except KeyError:
            raise IncompleteCatalogError(f"no catalog graph named {name!r}") from None

    def key(self, name: str) -> bytes:
        return self._key_of[self.graph(name).name]

    def degree(self, name: str) -> int:
        return loop_number(self.graph(name))

    def names(self) -> list[str]:
        """Names ordered by (loop number, name)."""
        return sorted(self._by_name, key=lambda n: (loop_number(self._by_name[n]), n))

    def names_of_degree(self, degree: int) -> list[str]:
        return [n for n in self.names() if self.degree(n) == degree]

    def lookup(self, g: FeynmanGraph) -> str | None:
        found = self._by_key.get(canonical_form(g, self.vertex_cap))
        return found.name if found is not None else None

    def resolve(self, g: FeynmanGraph) -> str:
        name = self.lookup(g)
        if name is None:
            key = canonical_form(g, self.vertex_cap).decode()
            raise IncompleteCatalogError(f"graph with canonical key {key!r} is not in the catalog")
        return name

    def merged(self, other: GraphCatalog) -> GraphCatalog:
        graphs = list(self._by_name.values())
        for name in other.names():
            g = other.graph(name)
            mine = self.lookup(g)
            if mine is None:
                graphs.append(g)
            elif mine != name:
                raise ParseError(f"catalogs disagree: {mine!r} and {name!r} are isomorphic")
        return GraphCatalog(graphs, max(self.degree_bound, other.degree_bound),
                            min(self.vertex_cap, other.vertex_cap))

    def to_document(self) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "graphs": [graph_document(self.graph(n)) for n in self.names()],
        }

    @classmethod
    def from_document(cls, document: str | bytes | Mapping, vertex_cap: int = DEFAULT_VERTEX_CAP) -> GraphCatalog:
        if isinstance(document, (str, bytes)):
            try:
                document = json.loads(document)
            except json.JSONDecodeError as exc:
                raise ParseError(f"catalog is not valid JSON: {exc}") from exc
        if not isinstance(document, Mapping) or not isinstance(document.get("graphs"), list):
            raise ParseError("catalog document needs a 'graphs' list")
        bound = document.get("degree_bound")
        if bound is not None and not isinstance(bound, int):
            raise ParseError("'degree_bound' must be an integer")
        return cls((parse_graph(d) for d in document["graphs"]), bound, vertex_cap)
