"""Simple graphs, local complementation, and graph6 / edge-list codecs.

Vertices are the integers ``0..n-1``. Graphs are undirected and loop-free,
capped at 16 vertices so each vertex's neighborhood fits in an int bitmask.
All operations return new ``Graph`` values; nothing mutates in place.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass

from .errors import CapacityError, Graph6Error

MAX_VERTICES = 16

_GRAPH6_HEADER = ">>graph6<<"


def _mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with per-vertex neighbor bitmasks.

    Attributes
    ----------
    n : int
        Number of vertices, between 1 and 16.
    adj : tuple of int
        ``adj[a]`` has bit ``b`` set iff the edge ``{a, b}`` is present.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        if self.n > MAX_VERTICES:
            raise CapacityError(f"graph capacity is {MAX_VERTICES} vertices, got {self.n}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match vertex count")
        full = (1 << self.n) - 1
        for a, mask in enumerate(self.adj):
            if mask & ~full:
                raise ValueError(f"vertex {a} has neighbors outside 0..{self.n - 1}")
            if (mask >> a) & 1:
                raise ValueError(f"vertex {a} has a self-loop")
            for b in _mask_to_set(mask):
                if not (self.adj[b] >> a) & 1:
                    raise ValueError(f"adjacency is not symmetric at {{{a}, {b}}}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph on ``n`` vertices from an iterable of (a, b) pairs."""
        masks = [0] * n
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) outside 0..{n - 1}")
            masks[a] |= 1 << b
            masks[b] |= 1 << a
        return cls(n, tuple(masks))

    def edges(self) -> list[tuple[int, int]]:
        """Edge list with a < b, lexicographically sorted."""
        out = []
        for a in range(self.n):
            mask = self.adj[a] >> (a + 1)
            b = a + 1
            while mask:
                if mask & 1:
                    out.append((a, b))
                mask >>= 1
                b += 1
        return out

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def has_edge(self, a: int, b: int) -> bool:
        return bool((self.adj[a] >> b) & 1)

    def degree(self, a: int) -> int:
        return self.adj[a].bit_count()

    def neighborhood(self, a: int) -> frozenset[int]:
        """The set of vertices adjacent to ``a``."""
        return _mask_to_set(self.adj[a])


def as_vertex_set(vertices, n: int) -> frozenset[int]:
    """Normalize an iterable of vertex indices, checking the 0..n-1 range."""
    s = frozenset(int(v) for v in vertices)
    for v in s:
        if not 0 <= v < n:
            raise ValueError(f"vertex {v} outside 0..{n - 1}")
    return s


# ---------------------------------------------------------------------------
# codecs

def parse_graph6(text: str) -> Graph:
    """Decode a graph6 string (optionally prefixed with '>>graph6<<').

    Only the short form (n <= 62) is accepted, and the package capacity of
    16 vertices applies on top of that.
    """
    s = text.strip()
    if s.startswith(_GRAPH6_HEADER):
        s = s[len(_GRAPH6_HEADER):]
    if not s:
        raise Graph6Error("empty graph6 string")
    data = []
    for pos, ch in enumerate(s):
        v = ord(ch) - 63
        if not 0 <= v <= 63:
            raise Graph6Error(f"byte {pos} ({ch!r}) outside the graph6 alphabet")
        data.append(v)
    n = data[0]
    if n == 63:
        # long-form length marker; anything it could encode exceeds capacity
        raise CapacityError("graph6 long form implies more than 62 vertices")
    if n > MAX_VERTICES:
        raise CapacityError(f"graph6 encodes {n} vertices, capacity is {MAX_VERTICES}")
    if n < 1:
        raise Graph6Error("graph6 encodes an empty vertex set")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - 1 < need:
        raise Graph6Error(f"payload truncated: need {need} bytes, got {len(data) - 1}")
    if len(data) - 1 > need:
        raise Graph6Error(f"trailing bytes after payload: need {need}, got {len(data) - 1}")
    masks = [0] * n
    k = 0
    # upper triangle in column-major order: (0,1), (0,2), (1,2), (0,3), ...
    for b in range(1, n):
        for a in range(b):
            group = data[1 + k // 6]
            bit = (group >> (5 - k % 6)) & 1
            if bit:
                masks[a] |= 1 << b
                masks[b] |= 1 << a
            k += 1
    return Graph(n, tuple(masks))


def to_graph6(g: Graph) -> str:
    """Encode a graph as a canonical short-form graph6 string."""
    bits = []
    for b in range(1, g.n):
        for a in range(b):
            bits.append(1 if g.has_edge(a, b) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(g.n + 63)]
    for i in range(0, len(bits), 6):
        group = 0
        for bit in bits[i:i + 6]:
            group = (group << 1) | bit
        out.append(chr(group + 63))
    return "".join(out)


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse an edge-list document: one ``a b`` pair per line.

    Blank lines and ``#`` comments are skipped. The vertex count is inferred
    as max index + 1 unless ``n`` is given explicitly.
    """
    edges = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two vertex indices, got {raw!r}")
        a, b = int(parts[0]), int(parts[1])
        if a < 0 or b < 0:
            raise ValueError(f"line {lineno}: negative vertex index")
        edges.append((a, b))
        top = max(top, a, b)
    if n is None:
        if top < 0:
            raise ValueError("edge list has no edges and no explicit vertex count")
        n = top + 1
    if top >= n:
        raise ValueError(f"edge references vertex {top} but n={n}")
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    return "\n".join(f"{a} {b}" for a, b in g.edges())


# ---------------------------------------------------------------------------
# structure

def is_connected(g: Graph) -> bool:
    return len(_component_masks(g)) == 1


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Vertex sets of the connected components, ordered by smallest member."""
    return [_mask_to_set(m) for m in _component_masks(g)]


def _component_masks(g: Graph) -> list[int]:
    seen = 0
    comps = []
    for start in range(g.n):
        if (seen >> start) & 1:
            continue
        frontier = 1 << start
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            m = frontier
            while m:
                v = (m & -m).bit_length() - 1
                nxt |= g.adj[v]
                m &= m - 1
            frontier = nxt & ~comp
        comps.append(comp)
        seen |= comp
    return comps


def induced_subgraph(g: Graph, vertices) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on a vertex subset, relabeled densely.

    Returns the subgraph and the old->new label map. Labels are assigned in
    ascending vertex order, so the map is order-preserving.
    """
    s = as_vertex_set(vertices, g.n)
    if not s:
        raise ValueError("induced subgraph needs a nonempty vertex set")
    order = sorted(s)
    relabel = {v: i for i, v in enumerate(order)}
    masks = [0] * len(order)
    for v in order:
        for w in g.neighborhood(v):
            if w in s:
                masks[relabel[v]] |= 1 << relabel[w]
    return Graph(len(order), tuple(masks)), relabel


# ---------------------------------------------------------------------------
# local complementation

def local_complement(g: Graph, a: int) -> Graph:
    """Toggle every edge between two neighbors of ``a``."""
    if not 0 <= a < g.n:
        raise ValueError(f"vertex {a} outside 0..{g.n - 1}")
    nb = g.adj[a]
    masks = list(g.adj)
    rest = nb
    while rest:
        b = (rest & -rest).bit_length() - 1
        masks[b] ^= nb & ~(1 << b)
        rest &= rest - 1
    return Graph(g.n, tuple(masks))


def _orbit_moves(g: Graph) -> dict[Graph, tuple[int, ...]]:
    """BFS closure under single local complementations.

    Maps each orbit member to a shortest move sequence reaching it from ``g``;
    BFS visits vertices in ascending order, so the result is deterministic.
    """
    if g.n > 10:
        raise CapacityError("orbit enumeration is capped at 10 vertices")
    found: dict[Graph, tuple[int, ...]] = {g: ()}
    queue = deque([g])
    while queue:
        cur = queue.popleft()
        moves = found[cur]
        for a in range(g.n):
            nxt = local_complement(cur, a)
            if nxt not in found:
                found[nxt] = moves + (a,)
                queue.append(nxt)
    return found


def lc_orbit(g: Graph) -> list[Graph]:
    """All graphs reachable from ``g`` by local complementations, in BFS order."""
    return list(_orbit_moves(g))


@dataclass(frozen=True)
class LcWitness:
    """A move sequence whose endpoint disconnects an induced subgraph.

    ``moves`` are vertices to locally complement, in order, starting from the
    source graph; ``resulting_graph`` is the endpoint for validation.
    """

    moves: tuple[int, ...]
    resulting_graph: Graph

    def replay(self, source: Graph) -> Graph:
        cur = source
        for a in self.moves:
            cur = local_complement(cur, a)
        return cur

    def is_valid_for(self, source: Graph) -> bool:
        return self.replay(source) == self.resulting_graph


def can_disconnect_by_lc(g: Graph, vertices) -> LcWitness | None:
    """Search the LC orbit for a member whose induced subgraph disconnects.

    Returns a shortest-move witness, or None when no orbit member works.
    The subset must be a proper subset with at least two vertices.
    """
    s = as_vertex_set(vertices, g.n)
    if not 2 <= len(s) <= g.n - 1:
        raise ValueError("subset must be proper with at least two vertices")
    if g.n > 10:
        raise CapacityError("orbit search is capped at 10 vertices")
    for member, moves in _orbit_moves(g).items():
        sub, _ = induced_subgraph(member, s)
        if not is_connected(sub):
            return LcWitness(moves, member)
    return None


# ---------------------------------------------------------------------------
# isomorphism

def find_isomorphism(g1: Graph, g2: Graph) -> tuple[int, ...] | None:
    """Exhaustive isomorphism search, returning a vertex map or None.

    The returned tuple ``p`` maps ``a`` in ``g1`` to ``p[a]`` in ``g2``.
    Permutations are enumerated within degree classes only, which prunes
    without giving up exhaustiveness. Capped at 8 vertices.
    """
    if g1.n > 8 or g2.n > 8:
        raise CapacityError("isomorphism search is capped at 8 vertices")
    if g1.n != g2.n or g1.edge_count() != g2.edge_count():
        return None
    degs1 = [g1.degree(a) for a in range(g1.n)]
    degs2 = [g2.degree(a) for a in range(g2.n)]
    if sorted(degs1) != sorted(degs2):
        return None
    by_deg1: dict[int, list[int]] = {}
    by_deg2: dict[int, list[int]] = {}
    for a, d in enumerate(degs1):
        by_deg1.setdefault(d, []).append(a)
    for a, d in enumerate(degs2):
        by_deg2.setdefault(d, []).append(a)
    classes = sorted(by_deg1)
    pools = [itertools.permutations(by_deg2[d]) for d in classes]
    for assignment in itertools.product(*pools):
        perm = [0] * g1.n
        for d, images in zip(classes, assignment):
            for a, b in zip(by_deg1[d], images):
                perm[a] = b
        ok = True
        for a in range(g1.n):
            mapped = 0
            m = g1.adj[a]
            while m:
                v = (m & -m).bit_length() - 1
                mapped |= 1 << perm[v]
                m &= m - 1
            if mapped != g2.adj[perm[a]]:
                ok = False
                break
        if ok:
            return tuple(perm)
    return None


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    return find_isomorphism(g1, g2) is not None


# ---------------------------------------------------------------------------
# populations and families

_ATLAS_CACHE: dict[int, list[Graph]] = {}


def enumerate_connected_graphs(n: int) -> list[Graph]:
    """One representative per connected isomorphism class on ``n`` vertices.

    Backed by the networkx graph atlas, which tabulates all graphs up to 7
    vertices; order is the atlas order and therefore stable.
    """
    if not 1 <= n <= 7:
        raise CapacityError("class enumeration covers 1..7 vertices")
    if n not in _ATLAS_CACHE:
        from networkx.generators.atlas import graph_atlas_g

        reps = []
        for nxg in graph_atlas_g():
            if nxg.number_of_nodes() != n:
                continue
            g = Graph.from_edges(n, [(int(a), int(b)) for a, b in nxg.edges()])
            if is_connected(g):
                reps.append(g)
        _ATLAS_CACHE[n] = reps
    return list(_ATLAS_CACHE[n])


def family(kind: str, n: int, seed: int = 0) -> Graph:
    """Named graph families: path, cycle, star (center 0), complete, tree(seed).

    Trees are sampled from a seed-determined random Pruefer sequence, so equal
    (kind, n, seed) always yields the same tree.
    """
    if n < 1:
        raise ValueError("family needs at least one vertex")
    if n > MAX_VERTICES:
        raise CapacityError(f"family capacity is {MAX_VERTICES} vertices")
    if kind == "path":
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "cycle":
        if n < 3:
            raise ValueError("cycle needs at least three vertices")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "star":
        return Graph.from_edges(n, [(0, i) for i in range(1, n)])
    if kind == "complete":
        return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)])
    if kind == "tree":
        if n < 2:
            return Graph(1, (0,))
        rng = random.Random(seed)
        seq = [rng.randrange(n) for _ in range(n - 2)]
        return Graph.from_edges(n, _pruefer_to_edges(n, seq))
    raise ValueError(f"unknown family {kind!r}")


def _pruefer_to_edges(n: int, seq: list[int]) -> list[tuple[int, int]]:
    # standard decode: repeatedly join the smallest leaf to the next code entry
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    last = [i for i in range(n) if degree[i] == 1]
    edges.append((last[0], last[1]))
    return edges
