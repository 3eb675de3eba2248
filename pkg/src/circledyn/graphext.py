"""Combinatorial extension of the circle families to graphs with a circuit.

The excised subgraph X (the ambient graph minus the open arc carrying the
circle dynamics) is traversed by an edge walk from one cut endpoint to the
other; the walk induces the partition 0 = s_0 < ... < s_m = 1 with m odd and
the parity property (vertex images at even indices, edge midpoints at odd
ones).  The circle Markov graph is then modified exactly as in the figures:
the detour class is replaced by m intervals L_i, the excised class by the
distinct walk-edge halves U_j, each L_i covering one U_j and each U_j covering
the return class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .arith import IntPolynomial
from .errors import BadParameter, NotExtendable
from .families import FamilyInstance
from .markov import transitivity_certificate


@dataclass(frozen=True)
class CombGraph:
    """Multigraph: vertex names plus edges as (u, v) pairs; self-loops and
    parallel edges allowed."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        vs = tuple(self.vertices)
        es = tuple((u, v) for (u, v) in self.edges)
        names = set(vs)
        for (u, v) in es:
            if u not in names or v not in names:
                raise ValueError(f"edge ({u},{v}) uses unknown vertex")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)

    def degree(self, v) -> int:
        d = 0
        for (a, b) in self.edges:
            if a == v:
                d += 1
            if b == v:
                d += 1
        return d

    def incident(self, v) -> list[int]:
        return [i for i, (a, b) in enumerate(self.edges) if a == v or b == v]

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for (a, b) in self.edges:
                for u, w in ((a, b), (b, a)):
                    if u == v and w not in seen:
                        seen.add(w)
                        stack.append(w)
        return len(seen) == len(self.vertices)

    def is_interval(self) -> bool:
        """Is the graph homeomorphic to a closed interval (a path)?"""
        if not self.is_connected():
            return False
        if any(u == v for (u, v) in self.edges):
            return False
        if len(self.edges) != len(self.vertices) - 1:
            return False  # a connected graph with a cycle (or multi-edge)
        degs = [self.degree(v) for v in self.vertices]
        return all(d <= 2 for d in degs) and sum(1 for d in degs if d == 1) == 2

    def bridges(self) -> set[int]:
        """Edge indices whose removal disconnects the graph (self-loops and
        parallel copies are never bridges)."""
        out = set()
        for i in range(len(self.edges)):
            u, v = self.edges[i]
            if u == v:
                continue
            rest = CombGraph(self.vertices, self.edges[:i] + self.edges[i + 1 :])
            if not rest.is_connected():
                out.add(i)
        return out

    def has_circuit(self) -> bool:
        return len(self.bridges()) < len(self.edges)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @staticmethod
    def from_json(d: dict) -> "CombGraph":
        return CombGraph(tuple(d["vertices"]), tuple(tuple(e) for e in d["edges"]))

    @staticmethod
    def excise_hint_from_json(d: dict):
        """Optional {"excise": {"circuit_edge_hint": i}} companion of the
        graph file: which circuit edge carries the circle dynamics."""
        return d.get("excise", {}).get("circuit_edge_hint")


@dataclass(frozen=True)
class Traversal:
    """Edge walk a -> ... -> v -> b covering every edge of the excised
    subgraph, with the induced partition data."""

    m: int
    steps: tuple  # (edge_key, from_vertex, to_vertex) per step, J last
    segment_halves: tuple  # per segment 0..m-1: the U-id it maps onto
    s_images: tuple  # per s_i, 0..m: ("vertex", name) or ("alpha", edge_key)
    u_ids: tuple  # distinct U-ids in order of first appearance

    @property
    def u_count(self) -> int:
        return len(self.u_ids)

    def parity_property_holds(self) -> bool:
        """Equal phi-images only at indices of equal parity."""
        by_image: dict = {}
        for i, img in enumerate(self.s_images):
            by_image.setdefault(img, []).append(i)
        for idxs in by_image.values():
            if len({i % 2 for i in idxs}) > 1:
                return False
        return True


def _subdivide_self_loops(graph: CombGraph) -> CombGraph:
    verts = list(graph.vertices)
    edges = []
    for i, (u, v) in enumerate(graph.edges):
        if u == v:
            mid = f"__loop{i}"
            verts.append(mid)
            edges.append((u, mid))
            edges.append((mid, v))
        else:
            edges.append((u, v))
    return CombGraph(tuple(verts), tuple(edges))


def traversal(X: CombGraph, a, b) -> Traversal:
    """Surjective edge walk from a to b of the excised subgraph.

    Requires a, b to be distinct degree-one vertices and X not an interval.
    The walk doubles a DFS over all non-J edges (so each is crossed down and
    up), then descends to J's inner endpoint and finishes through J; m is
    2 * (number of steps) - 1, always odd and at least 5.
    """
    if a == b or a not in X.vertices or b not in X.vertices:
        raise NotExtendable("endpoints must be two distinct vertices of X")
    if X.degree(a) != 1 or X.degree(b) != 1:
        raise NotExtendable("endpoints must have degree 1 in X")
    if not X.is_connected():
        raise NotExtendable("excised subgraph is disconnected")
    if X.is_interval():
        raise NotExtendable("excised subgraph is an interval")

    G = _subdivide_self_loops(X)
    j_edge = G.incident(b)[0]
    v_inner = G.edges[j_edge][0] if G.edges[j_edge][1] == b else G.edges[j_edge][1]

    adj: dict = {u: [] for u in G.vertices}
    for i, (u, w) in enumerate(G.edges):
        if i == j_edge:
            continue
        adj[u].append((i, w))
        adj[w].append((i, u))

    # doubled DFS walk from a over all non-J edges
    steps: list = []
    visited_edges: set = set()
    parent_path: dict = {a: None}

    def dfs(u):
        for (i, w) in adj[u]:
            if i in visited_edges:
                continue
            visited_edges.add(i)
            steps.append((i, u, w))
            if w not in parent_path:
                parent_path[w] = (i, u)
                dfs(w)
            steps.append((i, w, u))

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * len(G.edges) + 100))
    try:
        dfs(a)
    finally:
        sys.setrecursionlimit(old_limit)
    if len(visited_edges) != len(G.edges) - 1:
        raise NotExtendable("excised subgraph is disconnected")

    # descend from a to the inner endpoint of J along tree-parent links
    chain = []
    u = v_inner
    while u != a:
        i, p = parent_path[u]
        chain.append((i, p, u))
        u = p
    steps.extend(chain[::-1])
    steps.append((j_edge, v_inner, b))

    n_steps = len(steps)
    m = 2 * n_steps - 1

    def half_id(edge_idx, vertex):
        u, w = G.edges[edge_idx]
        return (edge_idx, 0 if vertex == u else 1)

    seg_halves: list = []
    u_ids: list = []

    def register(h):
        if h not in u_ids:
            u_ids.append(h)
        return h

    s_images: list = []
    for t, (ei, fr, to) in enumerate(steps):
        s_images.append(("vertex", fr))
        if t < n_steps - 1:
            seg_halves.append(register(half_id(ei, fr)))
            seg_halves.append(register(half_id(ei, to)))
            s_images.append(("alpha", ei))
    seg_halves.append(register(("J",)))
    s_images.append(("vertex", b))

    assert len(seg_halves) == m and len(s_images) == m + 1
    if m < 5:
        raise NotExtendable("traversal shorter than the construction permits")
    return Traversal(
        m=m,
        steps=tuple(steps),
        segment_halves=tuple(seg_halves),
        s_images=tuple(s_images),
        u_ids=tuple(u_ids),
    )


# ---------------------------------------------------------------------------
# Excision of an arc from a circuit edge
# ---------------------------------------------------------------------------


def excise(G: CombGraph, edge_index: Optional[int] = None):
    """Cut the open interior of a circuit edge of G: returns (X, a, b) where
    a, b are the fresh degree-one endpoints left by the cut."""
    if not G.is_connected():
        raise BadParameter("ambient graph must be connected")
    non_bridges = [i for i in range(len(G.edges)) if i not in G.bridges()]
    if edge_index is None:
        if not non_bridges:
            raise NotExtendable("ambient graph has no circuit")
        edge_index = non_bridges[0]
    elif edge_index not in non_bridges:
        raise NotExtendable("chosen edge is not on a circuit")
    u, v = G.edges[edge_index]
    a, b = "__cut_a", "__cut_b"
    edges = list(G.edges[:edge_index] + G.edges[edge_index + 1 :])
    edges += [(u, a), (v, b)] if u != v else [(u, a), (u, b)]
    X = CombGraph(tuple(G.vertices) + (a, b), tuple(edges))
    return X, a, b


# ---------------------------------------------------------------------------
# The extended Markov graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedMarkov:
    base: object  # the circle family MarkovSystem
    name: str = ""
    n: int = 0
    m: int = 0
    u_count: int = 0
    class_names: tuple = ()
    matrix: tuple = ()
    orientation: tuple = ()
    projection: tuple = ()  # extended vertex -> base vertex index
    base_index: dict = field(default_factory=dict)  # surviving base idx -> ext idx
    detour: int = -1
    excised: int = -1
    ret: int = -1
    expected_poly: Optional[IntPolynomial] = None
    cofactor: Optional[IntPolynomial] = None

    @property
    def size(self) -> int:
        return len(self.matrix)


def extend(inst: FamilyInstance, G: CombGraph, edge_index: Optional[int] = None) -> ExtendedMarkov:
    """Extended Markov graph of the family instance over the ambient graph G.

    The base graph keeps every class except the detour and excised ones; the
    detour's predecessors fan out to all m L-classes, each L covers the U it
    maps onto under the traversal, and every U covers the return class.
    """
    ext = inst.extension
    if ext is None:
        raise BadParameter(
            f"{inst.name} family instance n={inst.n} below the extension range"
        )
    X, a, b = excise(G, edge_index)
    trav = traversal(X, a, b)
    m = trav.m
    base = inst.markov
    nb = base.size
    removed = {ext.detour, ext.excised}

    preds = [i for i in range(nb) if base.matrix[i][ext.detour]]
    if any(p in removed for p in preds):
        raise BadParameter("detour class fed from inside the replaced pair")
    assert base.matrix[ext.detour][ext.excised] and base.matrix[ext.excised][ext.ret]

    keep = [i for i in range(nb) if i not in removed]
    base_index = {i: j for j, i in enumerate(keep)}
    names = [base.class_names[i] for i in keep]
    projection = list(keep)
    l_ids = []
    for i in range(m):
        l_ids.append(len(names))
        names.append(f"L{i}")
        projection.append(ext.detour)
    u_index = {}
    for uid in trav.u_ids:
        u_index[uid] = len(names)
        names.append(f"U{len(u_index) - 1}")
        projection.append(ext.excised)

    size = len(names)
    matrix = [[0] * size for _ in range(size)]
    for i in keep:
        for j in keep:
            if base.matrix[i][j]:
                matrix[base_index[i]][base_index[j]] = 1
    for p in preds:
        for li in l_ids:
            matrix[base_index[p]][li] = 1
    for i in range(m):
        matrix[l_ids[i]][u_index[trav.segment_halves[i]]] = 1
    for uid in trav.u_ids:
        matrix[u_index[uid]][base_index[ext.ret]] = 1

    orientation = [base.orientation[i] for i in keep] + [0] * (m + len(u_index))
    return ExtendedMarkov(
        base=base,
        name=inst.name,
        n=inst.n,
        m=m,
        u_count=len(u_index),
        class_names=tuple(names),
        matrix=tuple(tuple(r) for r in matrix),
        orientation=tuple(orientation),
        projection=tuple(projection),
        base_index=base_index,
        detour=ext.detour,
        excised=ext.excised,
        ret=ext.ret,
        expected_poly=ext.ext_poly(m),
        cofactor=ext.cofactor,
    )


def projection_preserves_arrows(E: ExtendedMarkov) -> bool:
    """Every extended arrow must project onto an arrow of the base graph."""
    base = E.base
    for i in range(E.size):
        for j in range(E.size):
            if E.matrix[i][j] and not base.matrix[E.projection[i]][E.projection[j]]:
                return False
    return True


def verify_extension(E: ExtendedMarkov, tol=None) -> dict:
    """Report on the extension: transitivity certificate, exact closed-form
    polynomial identity char * cofactor == x^pow * expected, root bracket
    agreement, entropy strictly above the circle instance, and the projection
    and loop facts the period-preservation argument uses."""
    from fractions import Fraction

    from .markov import entropy as markov_entropy, enumerate_loops, markov_char_poly

    if tol is None:
        tol = Fraction(1, 10**12)
    cert = transitivity_certificate(E)
    char = markov_char_poly(E)
    lhs = char * E.cofactor
    power = lhs.degree - E.expected_poly.degree
    ident = power >= 0 and lhs == E.expected_poly.shift(power)

    ext_root = markov_entropy(E, tol)
    base_root = markov_entropy(E.base, tol)
    entropy_strict = ext_root.lower > base_root.upper

    try:
        expected_root = largest_root_above_safe(E.expected_poly, tol)
        root_ok = expected_root is not None and ext_root.overlaps(expected_root, slack=tol)
    except Exception:
        root_ok = False

    proj_ok = projection_preserves_arrows(E)

    counts_ok = E.size == E.base.size - 2 + E.m + E.u_count

    result = {
        "irreducible": cert["irreducible"],
        "permutation": cert["permutation"],
        "transitive": cert["transitive"],
        "poly_exact": ident,
        "poly_power": power,
        "poly_root_ok": root_ok,
        "entropy_above_base": entropy_strict,
        "projection_ok": proj_ok,
        "counts_ok": counts_ok,
        "ext_entropy": ext_root,
        "base_entropy": base_root,
    }
    if E.name == "persistent":
        # the only loop among {J0~, J2~} is the length-2 positive loop
        j0 = E.base_index.get(_persistent_class(E, "J0"))
        j2 = E.base_index.get(_persistent_class(E, "J2"))
        sub = _loops_within(E, {j0, j2})
        result["j0_j2_unique_2loop"] = sub == {2}
        sign = E.orientation[j0] * E.orientation[j2]
        result["j0_j2_loop_positive"] = sign == 1
    return result


def largest_root_above_safe(p: IntPolynomial, tol):
    from fractions import Fraction

    from .arith import largest_root_above
    from .errors import NoRootAbove

    try:
        return largest_root_above(p, Fraction(1), tol)
    except NoRootAbove:
        return None


def _persistent_class(E: ExtendedMarkov, which: str) -> int:
    """Base indices of J0 = [x0, y0] and J2 = [x1, y_(n-2)] for the persistent
    family, recovered from the base system's class list."""
    base = E.base
    n = E.n
    # x-orbit has period 2: x0 is partition[0] = 0
    from fractions import Fraction

    if which == "J0":
        a = Fraction(0)
        for i, (ca, cb) in enumerate(base.classes):
            if ca == a:
                return i
    if which == "J2":
        # J2 starts at x1 = partition position index n-1 (after x0, y0..y_(n-3))
        a = base.partition[n - 1]
        for i, (ca, cb) in enumerate(base.classes):
            if ca == a:
                return i
    raise KeyError(which)


def _loops_within(E: ExtendedMarkov, allowed: set) -> set:
    """Lengths of simple loops staying inside `allowed` (tiny vertex sets)."""
    from .markov import enumerate_loops

    class _Sub:
        pass

    idx = sorted(allowed)
    remap = {v: i for i, v in enumerate(idx)}
    sub = _Sub()
    sub.matrix = tuple(
        tuple(E.matrix[v][w] for w in idx) for v in idx
    )
    sub.orientation = tuple(E.orientation[v] for v in idx)
    loops = enumerate_loops(sub, max_len=8)
    return {l.length for l in loops if l.simple}
