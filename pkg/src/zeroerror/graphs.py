"""Graphs, channels and the graph constructions used throughout the package.

Graphs are immutable and store one adjacency bitset (a Python ``int``) per
vertex. Every product-like construction uses a row-major canonical vertex
order, so identities such as ``(G^{+l})^{⊠n} = (G^{⊠n})^{+l^n}`` become
literal labeled-graph equalities after a fixed index permutation.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, SizeError, ValidationError

DEFAULT_VERTEX_CAP = 65536
VERTEX_CAP_ENV = "ZEROERROR_VERTEX_CAP"
POSITIVITY_THRESHOLD = 1e-12
ROW_SUM_TOL = 1e-9


def vertex_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(VERTEX_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ArgumentError(f"{VERTEX_CAP_ENV} must be an integer, got {env!r}")
    return DEFAULT_VERTEX_CAP


def _check_size(n: int, cap: int | None, what: str) -> None:
    limit = vertex_cap(cap)
    if n > limit:
        raise SizeError(f"{what} would have {n} vertices, above the cap of {limit}")


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with canonical string labels."""

    labels: tuple[str, ...]
    rows: tuple[int, ...]

    def __post_init__(self):
        n = len(self.rows)
        if len(self.labels) != n:
            raise ValidationError(f"{len(self.labels)} labels for {n} vertices")
        if len(set(self.labels)) != n:
            raise ValidationError("vertex labels must be unique")
        full = (1 << n) - 1
        for u, row in enumerate(self.rows):
            if row < 0 or row & ~full:
                raise ValidationError(f"row {u} references vertices outside 0..{n - 1}")
            if row >> u & 1:
                raise ValidationError(f"self-loop at vertex {u}")
            for v in _bits(row):
                if not self.rows[v] >> u & 1:
                    raise ValidationError(f"adjacency not symmetric at ({u}, {v})")

    @classmethod
    def _trusted(cls, labels, rows) -> "Graph":
        # internal constructions are symmetric by design; skip the O(E) check
        g = object.__new__(cls)
        object.__setattr__(g, "labels", tuple(labels))
        object.__setattr__(g, "rows", tuple(rows))
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        if labels is None:
            labels = [str(i) for i in range(n)]
        return cls(tuple(labels), tuple(rows))

    @classmethod
    def from_matrix(cls, adjacency, labels: Sequence[str] | None = None) -> "Graph":
        a = np.asarray(adjacency)
        n = a.shape[0]
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if a[u, v]]
        g = cls.from_edges(n, edges, labels)
        if not np.array_equal(a != 0, g.adjacency_matrix().astype(bool)):
            raise ValidationError("adjacency matrix must be symmetric with zero diagonal")
        return g

    @property
    def n(self) -> int:
        return len(self.rows)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.rows[v]))

    def closed(self, v: int) -> int:
        return self.rows[v] | (1 << v)

    def degree(self, v: int) -> int:
        return bin(self.rows[v]).count("1")

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, row in enumerate(self.rows) for v in _bits(row >> (u + 1) << (u + 1))]

    @property
    def num_edges(self) -> int:
        return sum(bin(r).count("1") for r in self.rows) // 2

    def isolated(self) -> list[int]:
        return [v for v, row in enumerate(self.rows) if row == 0]

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        mask = 0
        for v in vs:
            mask |= 1 << v
        return len(set(vs)) == len(vs) and all(not (self.rows[v] & mask) for v in vs)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.adjacent(u, v) for u, v in itertools.combinations(vs, 2))

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def without_edge(self, u: int, v: int) -> "Graph":
        rows = list(self.rows)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph._trusted(self.labels, rows)

    def relabeled(self, labels: Sequence[str]) -> "Graph":
        return Graph(tuple(labels), self.rows)

    def permuted(self, order: Sequence[int]) -> "Graph":
        """Graph whose vertex ``i`` is vertex ``order[i]`` of ``self``."""
        pos = {old: new for new, old in enumerate(order)}
        if sorted(pos) != list(range(self.n)):
            raise ArgumentError("order must be a permutation of the vertices")
        rows = [0] * self.n
        for new, old in enumerate(order):
            for w in _bits(self.rows[old]):
                rows[new] |= 1 << pos[w]
        return Graph._trusted([self.labels[o] for o in order], rows)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True, eq=False)
class Channel:
    """Finite channel given by a row-stochastic matrix ``matrix[v, w] = N(w|v)``."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (len(self.inputs), len(self.outputs)):
            raise ValidationError(f"matrix shape {m.shape} does not match {len(self.inputs)} inputs x {len(self.outputs)} outputs")
        if np.any(m < 0) or np.any(m > 1):
            raise ValidationError("channel probabilities must lie in [0, 1]")
        sums = m.sum(axis=1)
        for v, s in enumerate(sums):
            if abs(s - 1.0) > ROW_SUM_TOL:
                raise ValidationError(f"row {v} sums to {s!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix) -> "Channel":
        m = np.asarray(matrix, dtype=float)
        return cls(tuple(str(i) for i in range(m.shape[0])), tuple(str(j) for j in range(m.shape[1])), m)


@dataclass(frozen=True)
class CliqueCover:
    graph_n: int
    parts: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, graph_n: int, parts: Iterable[Iterable[int]]) -> "CliqueCover":
        return cls(graph_n, tuple(tuple(sorted(p)) for p in parts))

    def __len__(self) -> int:
        return len(self.parts)

    def containing(self, v: int) -> list[int]:
        return [j for j, p in enumerate(self.parts) if v in p]


def validate_cover(g: Graph, cover: CliqueCover) -> None:
    """Raise ``ValidationError`` naming the first offending part or uncovered edge."""
    if cover.graph_n != g.n:
        raise ValidationError(f"cover is for {cover.graph_n} vertices, graph has {g.n}")
    covered = set()
    for j, part in enumerate(cover.parts):
        if not part:
            raise ValidationError(f"part {j} is empty")
        if any(not 0 <= v < g.n for v in part):
            raise ValidationError(f"part {j} {list(part)} has out-of-range vertices")
        if len(set(part)) != len(part):
            raise ValidationError(f"part {j} {list(part)} repeats a vertex")
        if not g.is_clique(part):
            raise ValidationError(f"part {j} {list(part)} is not a clique")
        covered.update(itertools.combinations(sorted(part), 2))
    for e in g.edges():
        if e not in covered:
            raise ValidationError(f"edge {e} is not covered")
    singletons = {p[0] for p in cover.parts if len(p) == 1}
    for v in g.isolated():
        if v not in singletons:
            raise ValidationError(f"isolated vertex {v} has no singleton part")


# ---------------------------------------------------------------- constructions

def basic_graph(kind: str, t: int) -> Graph:
    if not isinstance(t, int) or t < 1:
        raise ArgumentError(f"t must be a positive integer, got {t!r}")
    if kind == "complete":
        full = (1 << t) - 1
        rows = [full & ~(1 << v) for v in range(t)]
    elif kind == "empty":
        rows = [0] * t
    elif kind == "cycle":
        if t < 3:
            raise ArgumentError("a cycle needs at least 3 vertices")
        rows = [(1 << ((v - 1) % t)) | (1 << ((v + 1) % t)) for v in range(t)]
    else:
        raise ArgumentError(f"unknown graph kind {kind!r}")
    _check_size(t, None, kind)
    return Graph._trusted([str(i) for i in range(t)], rows)


def complete_graph(t: int) -> Graph:
    return basic_graph("complete", t)


def empty_graph(t: int) -> Graph:
    return basic_graph("empty", t)


def cycle_graph(t: int) -> Graph:
    return basic_graph("cycle", t)


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph._trusted(g.labels, [full & ~row & ~(1 << v) for v, row in enumerate(g.rows)])


def strong_product(g: Graph, h: Graph, cap: int | None = None) -> Graph:
    nh = h.n
    _check_size(g.n * nh, cap, "strong product")
    hclosed = [h.closed(x) for x in range(nh)]
    rows = []
    for u in range(g.n):
        gclosed = list(_bits(g.closed(u)))
        for x in range(nh):
            row = 0
            for v in gclosed:
                row |= hclosed[x] << (v * nh)
            rows.append(row & ~(1 << (u * nh + x)))
    labels = [f"{a},{b}" for a in g.labels for b in h.labels]
    return Graph._trusted(labels, rows)


def strong_power(g: Graph, n: int, cap: int | None = None) -> Graph:
    if not isinstance(n, int) or n < 1:
        raise ArgumentError(f"power must be a positive integer, got {n!r}")
    _check_size(g.n ** n, cap, "strong power")
    result = g
    for _ in range(n - 1):
        result = strong_product(result, g, cap)
    return result


def disjoint_union_power(g: Graph, t: int, cap: int | None = None) -> Graph:
    """``t`` disjoint copies; vertex ``(u, i)`` has index ``u * t + i``."""
    if not isinstance(t, int) or t < 1:
        raise ArgumentError(f"t must be a positive integer, got {t!r}")
    _check_size(g.n * t, cap, "disjoint union power")
    rows = []
    for u in range(g.n):
        for i in range(t):
            rows.append(sum(1 << (v * t + i) for v in _bits(g.rows[u])))
    labels = [f"{a}#{i}" for a in g.labels for i in range(t)]
    return Graph._trusted(labels, rows)


def disjoint_union(*graphs: Graph, cap: int | None = None) -> Graph:
    """Disjoint union with graph-major vertex order; labels ``label#j`` for graph ``j``."""
    _check_size(sum(g.n for g in graphs), cap, "disjoint union")
    rows, labels, offset = [], [], 0
    for j, g in enumerate(graphs):
        rows.extend(r << offset for r in g.rows)
        labels.extend(f"{a}#{j}" for a in g.labels)
        offset += g.n
    return Graph._trusted(labels, rows)


def cartesian_with_complete(g: Graph, t: int, cap: int | None = None) -> Graph:
    """``G □ K_t`` on the same vertex order and labels as ``disjoint_union_power``."""
    if not isinstance(t, int) or t < 1:
        raise ArgumentError(f"t must be a positive integer, got {t!r}")
    _check_size(g.n * t, cap, "cartesian product")
    block = (1 << t) - 1
    rows = []
    for u in range(g.n):
        same = sum(1 << (v * t) for v in _bits(g.rows[u]))
        for i in range(t):
            rows.append((same << i) | ((block & ~(1 << i)) << (u * t)))
    labels = [f"{a}#{i}" for a in g.labels for i in range(t)]
    return Graph._trusted(labels, rows)


def _sign_label(bits: int, length: int) -> str:
    return "".join("-" if bits >> (length - 1 - j) & 1 else "+" for j in range(length))


def sign_vector(label: str) -> np.ndarray:
    return np.array([-1 if c == "-" else 1 for c in label], dtype=float)


def _orthogonality_on(codes: list[int], length: int) -> Graph:
    half = length // 2
    index = {c: i for i, c in enumerate(codes)}
    rows = [0] * len(codes)
    if length % 2 == 0:
        # ±1 vectors are orthogonal iff they disagree in exactly half the coordinates
        flips = [sum(1 << j for j in comb) for comb in itertools.combinations(range(length), half)]
        for i, c in enumerate(codes):
            row = 0
            for f in flips:
                j = index.get(c ^ f)
                if j is not None:
                    row |= 1 << j
            rows[i] = row
    return Graph._trusted([_sign_label(c, length) for c in codes], rows)


def orthogonality_graph(k: int, cap: int | None = None) -> Graph:
    """``Ω_k`` on all of ``{±1}^k``, ordered lexicographically with ``+1 < -1``."""
    if not isinstance(k, int) or k < 1:
        raise ArgumentError(f"k must be a positive integer, got {k!r}")
    if k > 16:
        raise SizeError(f"orthogonality graph for k={k} is above the k <= 16 guard")
    _check_size(2 ** k, cap, "orthogonality graph")
    return _orthogonality_on(list(range(2 ** k)), k)


def quarter_orthogonality_graph(k: int, cap: int | None = None) -> Graph:
    """``Γ_k``: vectors of ``{±1}^{k+1}`` with first entry +1 and an even number of -1."""
    if not isinstance(k, int) or k < 5 or k % 2 == 0:
        raise ArgumentError(f"k must be an odd integer >= 5, got {k!r}")
    _check_size(2 ** (k - 1), cap, "quarter orthogonality graph")
    length = k + 1
    codes = [c for c in range(2 ** k) if bin(c).count("1") % 2 == 0]
    return _orthogonality_on(codes, length)


def confusability_graph(channel: Channel) -> Graph:
    support = channel.matrix > POSITIVITY_THRESHOLD
    shared = (support.astype(np.int64) @ support.T.astype(np.int64)) > 0
    n = len(channel.inputs)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if shared[u, v]]
    return Graph.from_edges(n, edges, channel.inputs)


def minimal_channel_from_cover(g: Graph, cover: CliqueCover) -> Channel:
    validate_cover(g, cover)
    m = np.zeros((g.n, len(cover)))
    for j, part in enumerate(cover.parts):
        for v in part:
            m[v, j] = 1.0
    m /= m.sum(axis=1, keepdims=True)
    outputs = tuple("{" + ",".join(g.labels[v] for v in part) + "}" for part in cover.parts)
    # duplicate parts would give duplicate output labels; disambiguate by index
    if len(set(outputs)) != len(outputs):
        outputs = tuple(f"{o}@{j}" for j, o in enumerate(outputs))
    return Channel(g.labels, outputs, m)


def union_power_exchange_order(n_vertices: int, ell: int, power: int) -> list[int]:
    """Vertex order mapping ``(G^{+ell})^{⊠power}`` onto ``(G^{⊠power})^{+ell^power}``.

    Entry ``i`` is the index in ``strong_power(disjoint_union_power(G, ell), power)``
    of vertex ``i`` of ``disjoint_union_power(strong_power(G, power), ell ** power)``.
    """
    order = []
    for us in itertools.product(range(n_vertices), repeat=power):
        for copies in itertools.product(range(ell), repeat=power):
            idx = 0
            for u, i in zip(us, copies):
                idx = idx * (n_vertices * ell) + u * ell + i
            order.append(idx)
    return order
