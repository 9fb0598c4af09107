"""Simple-graph catalogue: graph6 I/O, canonical labeling, exhaustive
enumeration of isomorphism classes, and automorphism groups.

Graphs are stored as tuples of adjacency bitmask rows, so everything is
hashable and comparisons are cheap.  Canonical labeling picks the vertex
order whose column-major upper-triangle bitstring is lexicographically
minimal, found by branch-and-bound; two graphs are isomorphic exactly when
their canonical graph6 strings match.  Enumeration extends each (n-1)-vertex
class by one new vertex attached to every possible neighbor subset and
dedupes canonically, which reproduces the known class counts
1, 2, 4, 11, 34, 156, 1044 for n = 1..7.
"""

from __future__ import annotations

import dataclasses
import functools
import os
from typing import Iterable, Sequence

from .errors import BudgetError, Graph6ParseError
from .permgroup import PermGroupSpec, Permutation, reduce_generators

__all__ = [
    "Graph",
    "parse_graph6",
    "write_graph6",
    "read_graph6_file",
    "write_graph6_file",
    "canonical_relabeling",
    "canonical_form",
    "canonical_graph6",
    "enumerate_graphs",
    "automorphism_group",
    "automorphism_generators",
    "selftest",
]

_MAX_ENUM_N = 8
_KNOWN_CLASS_COUNTS = {0: 1, 1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044}


@dataclasses.dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1.

    ``rows[i]`` is the bitmask of neighbors of vertex i; the matrix must be
    symmetric with an empty diagonal.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"vertex count must be a nonnegative integer, got {self.n!r}")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows):
            if not isinstance(row, int) or row < 0 or row >> self.n:
                raise ValueError(f"row {i} is not an {self.n}-bit mask: {row!r}")
            if row >> i & 1:
                raise ValueError(f"self-loop at vertex {i}")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if (self.rows[i] >> j & 1) != (self.rows[j] >> i & 1):
                    raise ValueError(f"adjacency not symmetric at pair ({i}, {j})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValueError(f"invalid edge ({i}, {j}) for n={n}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, tuple(rows))

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if self.rows[i] >> j & 1
        ]

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.rows)

    def relabel(self, perm: Permutation) -> "Graph":
        """The isomorphic graph with each edge (i, j) moved to
        (perm(i), perm(j))."""
        if len(perm.image) != self.n:
            raise ValueError(f"permutation on {len(perm.image)} points for n={self.n}")
        rows = [0] * self.n
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.rows[i] >> j & 1:
                    a, b = perm.image[i], perm.image[j]
                    rows[a] |= 1 << b
                    rows[b] |= 1 << a
        return Graph(self.n, tuple(rows))


# ------------------------------------------------------------------- graph6


def parse_graph6(text: str) -> Graph:
    """Decode a short-form graph6 string (n <= 62)."""
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<") :]
    data = [ord(c) for c in text]
    if not data:
        raise Graph6ParseError("empty graph6 string", offset=0)
    if data[0] == 126:
        raise Graph6ParseError(
            "long-form vertex counts (n > 62) are not supported", offset=0
        )
    n = data[0] - 63
    if not 0 <= n <= 62:
        raise Graph6ParseError(f"invalid header byte {data[0]}", offset=0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - 1 < nbytes:
        raise Graph6ParseError(
            f"need {nbytes} data bytes for n={n}, found {len(data) - 1}",
            offset=len(data),
        )
    if len(data) - 1 > nbytes:
        raise Graph6ParseError(
            f"trailing bytes after {nbytes} data bytes for n={n}",
            offset=1 + nbytes,
        )
    bits = []
    for pos, byte in enumerate(data[1:], start=1):
        if not 63 <= byte <= 126:
            raise Graph6ParseError(f"data byte {byte} out of range 63..126", offset=pos)
        val = byte - 63
        bits.extend((val >> shift) & 1 for shift in range(5, -1, -1))
    if any(bits[nbits:]):
        raise Graph6ParseError("nonzero padding bits", offset=len(data) - 1)
    rows = [0] * n
    pos = 0
    for j in range(n):
        for i in range(j):
            if bits[pos]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            pos += 1
    return Graph(n, tuple(rows))


def write_graph6(g: Graph) -> str:
    """Encode as short-form graph6 (header n+63, column-major upper-triangle
    bits six per byte, most significant first)."""
    if g.n > 62:
        raise ValueError(f"short-form graph6 supports n <= 62, got {g.n}")
    out = [chr(g.n + 63)]
    acc = 0
    nacc = 0
    for j in range(g.n):
        for i in range(j):
            acc = (acc << 1) | (g.rows[i] >> j & 1)
            nacc += 1
            if nacc == 6:
                out.append(chr(acc + 63))
                acc = nacc = 0
    if nacc:
        out.append(chr((acc << (6 - nacc)) + 63))
    return "".join(out)


def read_graph6_file(path) -> list[Graph]:
    graphs = []
    with open(os.fspath(path), encoding="ascii") as fp:
        for line in fp:
            line = line.strip()
            if line:
                graphs.append(parse_graph6(line))
    return graphs


def write_graph6_file(path, graphs: Iterable[Graph]) -> None:
    with open(os.fspath(path), "w", encoding="ascii") as fp:
        for g in graphs:
            fp.write(write_graph6(g) + "\n")


# -------------------------------------------------------- canonical labeling


def canonical_relabeling(g: Graph) -> Permutation:
    """A permutation sending g to its canonical labeling: the vertex order
    minimizing the column-major upper-triangle bitstring, by depth-first
    branch and bound over partial orders with prefix pruning."""
    n = g.n
    if n == 0:
        return Permutation(())
    rows = g.rows
    best_cols: list[int] | None = None
    best_order: list[int] | None = None

    def column_value(placed: list[int], v: int) -> int:
        # bits of adjacency between v and the placed prefix, earliest
        # placed vertex most significant
        val = 0
        row = rows[v]
        for u in placed:
            val = (val << 1) | (row >> u & 1)
        return val

    def search(placed: list[int], cols: list[int], remaining: set[int]) -> None:
        nonlocal best_cols, best_order
        if not remaining:
            if best_cols is None or cols < best_cols:
                best_cols = list(cols)
                best_order = list(placed)
            return
        depth = len(cols)
        scored = sorted((column_value(placed, v), v) for v in remaining)
        for val, v in scored:
            if best_cols is not None:
                if cols + [val] > best_cols[: depth + 1]:
                    break  # sorted ascending: all later candidates worse
            placed.append(v)
            cols.append(val)
            remaining.remove(v)
            search(placed, cols, remaining)
            remaining.add(v)
            cols.pop()
            placed.pop()

    for start in range(n):
        placed = [start]
        remaining = set(range(n)) - {start}
        search(placed, [], remaining)
    assert best_order is not None
    # best_order[p] = original vertex at canonical position p; the
    # relabeling permutation maps original vertex -> its position
    image = [0] * n
    for position, vertex in enumerate(best_order):
        image[vertex] = position
    return Permutation(tuple(image))


def canonical_form(g: Graph) -> Graph:
    return g.relabel(canonical_relabeling(g))


def canonical_graph6(g: Graph) -> str:
    return write_graph6(canonical_form(g))


# -------------------------------------------------------------- enumeration


def enumerate_graphs(n: int) -> list[Graph]:
    """All isomorphism classes of simple graphs on n vertices, canonically
    labeled and sorted by graph6 string.

    Built by extending every (n-1)-vertex class with a new vertex attached
    to each neighbor subset, then deduping by canonical string; deleting the
    last vertex of any n-vertex graph shows the construction is complete.
    """
    return list(_enumerate_cached(n))


@functools.lru_cache(maxsize=None)
def _enumerate_cached(n: int) -> tuple[Graph, ...]:
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    if n > _MAX_ENUM_N:
        raise BudgetError(
            f"graph enumeration is supported up to n = {_MAX_ENUM_N}, got {n}"
        )
    if n == 0:
        return (Graph(0, ()),)
    seen: dict[str, Graph] = {}
    for parent in _enumerate_cached(n - 1):
        for subset in range(1 << (n - 1)):
            rows = [
                row | ((subset >> i & 1) << (n - 1))
                for i, row in enumerate(parent.rows)
            ]
            rows.append(subset)
            child = canonical_form(Graph(n, tuple(rows)))
            seen.setdefault(write_graph6(child), child)
    result = tuple(seen[key] for key in sorted(seen))
    if n in _KNOWN_CLASS_COUNTS and len(result) != _KNOWN_CLASS_COUNTS[n]:
        raise AssertionError(
            f"enumeration produced {len(result)} classes for n={n}, "
            f"expected {_KNOWN_CLASS_COUNTS[n]}"
        )
    return result


# ------------------------------------------------------------ automorphisms


def _refine_colors(g: Graph) -> list[int]:
    """Iterated neighborhood color refinement starting from degrees;
    automorphisms preserve the resulting colors."""
    colors = list(g.degree_sequence())
    while True:
        signatures = [
            (colors[v], tuple(sorted(colors[u] for u in range(g.n) if g.rows[v] >> u & 1)))
            for v in range(g.n)
        ]
        palette = {sig: idx for idx, sig in enumerate(sorted(set(signatures)))}
        new_colors = [palette[sig] for sig in signatures]
        if new_colors == colors:
            return colors
        colors = new_colors


def automorphism_group(g: Graph) -> PermGroupSpec:
    """Every adjacency-preserving permutation, listed exhaustively.

    The returned spec's ``generators`` field holds the *full* element list
    (identity included), so callers may sum over it directly; use
    :func:`automorphism_generators` for a small generating set.
    """
    n = g.n
    colors = _refine_colors(g)
    elements: list[Permutation] = []
    image: list[int] = []
    used = [False] * n

    def extend(v: int) -> None:
        if v == n:
            elements.append(Permutation(tuple(image)))
            return
        for w in range(n):
            if used[w] or colors[w] != colors[v]:
                continue
            if any(g.has_edge(v, u) != g.has_edge(w, image[u]) for u in range(v)):
                continue
            used[w] = True
            image.append(w)
            extend(v + 1)
            image.pop()
            used[w] = False

    extend(0)
    elements.sort(key=lambda p: p.image)
    return PermGroupSpec(n=n, generators=tuple(elements))


def automorphism_generators(g: Graph) -> PermGroupSpec:
    """A reduced generating set for the automorphism group."""
    spec = automorphism_group(g)
    return PermGroupSpec(n=g.n, generators=tuple(reduce_generators(spec.generators)))


# ----------------------------------------------------------------- selftest


def selftest() -> None:
    """Fast internal consistency checks; raises AssertionError on failure."""
    assert [len(enumerate_graphs(n)) for n in range(5)] == [1, 1, 2, 4, 11]
    square = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert parse_graph6(write_graph6(square)) == square
    assert len(automorphism_group(square).generators) == 8
    star = Graph.from_edges(4, [(0, 3), (1, 3), (2, 3)])
    assert len(automorphism_group(star).generators) == 6
    assert canonical_graph6(star) == canonical_graph6(
        star.relabel(Permutation((2, 0, 1, 3)))
    )


if __name__ == "__main__":  # pragma: no cover
    selftest()
    print("graphs selftest ok")
