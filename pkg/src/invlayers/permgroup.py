"""Permutations, generator sets for the groups used in the package, and
exact orbit machinery.

Three group families appear throughout: typed symmetric groups (direct
products of symmetric groups on contiguous node blocks), the cyclic
shift on n points, and the two-dimensional translation group acting on a
d x d pixel grid.  Orbits are computed by flood fill over the generator
action; element listings go through breadth-first closure with an
explicit cap that raises instead of truncating.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .budgets import DEFAULT as DEFAULT_BUDGETS
from .errors import BudgetError


@dataclass(frozen=True)
class Permutation:
    """A permutation of ``0..n-1`` stored as its image tuple."""

    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(self.image))
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"not a permutation of 0..{len(self.image) - 1}: {self.image}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        image = list(range(n))
        for cycle in cycles:
            rotated = list(cycle[1:]) + [cycle[0]]
            for a, b in zip(cycle, rotated):
                image[a] = b
        return cls(tuple(image))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self`` after ``other``: (self * other)(i) = self(other(i))."""
        if other.n != self.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.image[j] for j in other.image))

    __mul__ = compose

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def apply_tuple(self, t: Sequence[int]) -> tuple[int, ...]:
        """Diagonal action on an index tuple: (i_1..i_k) -> (p(i_1)..p(i_k))."""
        return tuple(self.image[i] for i in t)

    def fixed_point_count(self) -> int:
        return sum(1 for i, j in enumerate(self.image) if i == j)

    def cycle_lengths(self) -> tuple[int, ...]:
        seen = [False] * self.n
        lengths = []
        for start in range(self.n):
            if seen[start]:
                continue
            length = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = self.image[i]
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths))

    def to_one_based(self) -> list[int]:
        return [i + 1 for i in self.image]


@dataclass(frozen=True)
class PermGroupSpec:
    """A permutation group given by degree and a generating set."""

    n: int
    generators: tuple[Permutation, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.n != self.n:
                raise ValueError(f"generator degree {g.n} != {self.n}")


@dataclass(frozen=True)
class TypedNodeSet:
    """Nodes ``0..n-1`` split into m contiguous type blocks of given sizes."""

    type_sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "type_sizes", tuple(self.type_sizes))
        if len(self.type_sizes) < 1:
            raise ValueError("need at least one type")
        for s in self.type_sizes:
            if not isinstance(s, int) or s < 1:
                raise ValueError(f"type sizes must be positive ints, got {s!r}")

    @property
    def n(self) -> int:
        return sum(self.type_sizes)

    @property
    def m(self) -> int:
        return len(self.type_sizes)

    def block(self, j: int) -> range:
        start = sum(self.type_sizes[:j])
        return range(start, start + self.type_sizes[j])

    def blocks(self) -> list[range]:
        return [self.block(j) for j in range(self.m)]

    def type_of(self, node: int) -> int:
        if not 0 <= node < self.n:
            raise ValueError(f"node {node} out of range")
        for j, block in enumerate(self.blocks()):
            if node in block:
                return j
        raise AssertionError


def young_generators(t: TypedNodeSet) -> PermGroupSpec:
    """Adjacent transpositions within each type block.

    These generate the direct product of symmetric groups that permutes
    nodes freely within a type and never across types.  Blocks of size 1
    contribute no generators; the trivial group has an empty list.
    """
    gens = []
    for block in t.blocks():
        for a in range(block.start, block.stop - 1):
            gens.append(Permutation.from_cycles(t.n, [(a, a + 1)]))
    return PermGroupSpec(t.n, tuple(gens))


def cyclic_generators(n: int) -> PermGroupSpec:
    """The single shift ``i -> i+1 (mod n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    shift = Permutation(tuple((i + 1) % n for i in range(n)))
    return PermGroupSpec(n, (shift,))


def translation_generators(d: int) -> PermGroupSpec:
    """Row and column shifts on a d x d grid, point (i, j) stored as i*d + j."""
    if d < 1:
        raise ValueError("d must be positive")
    row = Permutation(tuple(((i + 1) % d) * d + j for i in range(d) for j in range(d)))
    col = Permutation(tuple(i * d + (j + 1) % d for i in range(d) for j in range(d)))
    return PermGroupSpec(d * d, (row, col))


def group_closure(spec: PermGroupSpec, cap: int | None = None) -> list[Permutation]:
    """All group elements by breadth-first multiplication.

    Always contains the identity.  Raises ``BudgetError`` as soon as more
    than ``cap`` elements have been found; the listing is never silently
    truncated.
    """
    cap = DEFAULT_BUDGETS.closure_cap if cap is None else cap
    identity = Permutation.identity(spec.n)
    elements = {identity}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for g in frontier:
            for h in spec.generators:
                prod = h * g
                if prod not in elements:
                    elements.add(prod)
                    new_frontier.append(prod)
                    if len(elements) > cap:
                        raise BudgetError(
                            f"group order exceeds closure cap {cap}"
                        )
        frontier = new_frontier
    return sorted(elements, key=lambda g: g.image)


def reduce_generators(elements: Sequence[Permutation]) -> list[Permutation]:
    """A small generating subset of a listed group (greedy closure growth)."""
    if not elements:
        raise ValueError("empty element list")
    n = elements[0].n
    gens: list[Permutation] = []
    generated = {Permutation.identity(n)}
    for g in sorted(set(elements), key=lambda p: p.image):
        if g not in generated:
            gens.append(g)
            generated = set(
                group_closure(PermGroupSpec(n, tuple(gens)), cap=len(elements))
            )
    return gens


def _tuple_action_maps(spec: PermGroupSpec, k: int) -> tuple[int, list[list[int]]]:
    # Encode k-tuples over 0..n-1 in base n, most significant digit first.
    n = spec.n
    total = n**k
    powers = [n ** (k - 1 - pos) for pos in range(k)]
    maps = []
    for g in spec.generators:
        img = g.image
        table = [0] * total
        for idx in range(total):
            rem = idx
            enc = 0
            for p in powers:
                digit, rem = divmod(rem, p)
                enc += img[digit] * p
            table[idx] = enc
        maps.append(table)
    return total, maps


def orbit_count_on_tuples(
    spec: PermGroupSpec, k: int, budget: int | None = None
) -> int:
    """Number of orbits of the diagonal action on k-tuples of points.

    Walks all ``n**k`` tuples, so the state count must fit the budget;
    for larger instances ``burnside_count`` gives the same number from
    the element listing without enumerating tuples.
    """
    budget = DEFAULT_BUDGETS.tuple_enumeration if budget is None else budget
    if k < 0:
        raise ValueError("k must be nonnegative")
    if spec.n**k > budget:
        raise BudgetError(
            f"{spec.n}**{k} tuples exceed budget {budget}; "
            "consider burnside_count instead"
        )
    total, maps = _tuple_action_maps(spec, k)
    seen = bytearray(total)
    count = 0
    for start in range(total):
        if seen[start]:
            continue
        count += 1
        seen[start] = 1
        stack = [start]
        while stack:
            idx = stack.pop()
            for table in maps:
                nxt = table[idx]
                if not seen[nxt]:
                    seen[nxt] = 1
                    stack.append(nxt)
    return count


def burnside_count(spec: PermGroupSpec, k: int, cap: int | None = None) -> int:
    """Orbit count on k-tuples via the averaged fixed-point formula.

    A tuple is fixed by g exactly when every entry is a fixed point of g,
    so each element contributes ``fix(g)**k``.  The sum is always
    divisible by the group order; the division is checked exactly.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    elements = group_closure(spec, cap)
    total = sum(g.fixed_point_count() ** k for g in elements)
    assert total % len(elements) == 0, "fixed-point sum not divisible by group order"
    return total // len(elements)


def vertex_orbits(spec: PermGroupSpec) -> list[list[int]]:
    """Orbits of the group on points, sorted by smallest member."""
    n = spec.n
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = []
        seen[start] = True
        stack = [start]
        while stack:
            i = stack.pop()
            orbit.append(i)
            for g in spec.generators:
                j = g(i)
                if not seen[j]:
                    seen[j] = True
                    stack.append(j)
        orbits.append(sorted(orbit))
    return orbits


def max_orbit_size(spec: PermGroupSpec) -> int:
    return max(len(o) for o in vertex_orbits(spec))


def selftest() -> None:
    """Fast internal consistency checks (used by the CLI --selftest flag)."""
    from .combinat import gen_bell

    for sizes in [(2,), (3,), (2, 1), (2, 2), (3, 2)]:
        t = TypedNodeSet(sizes)
        spec = young_generators(t)
        for k in range(3):
            assert orbit_count_on_tuples(spec, k) == burnside_count(spec, k)
    t = TypedNodeSet((3, 3))
    spec = young_generators(t)
    assert orbit_count_on_tuples(spec, 2) == gen_bell(2, 2)
    for n in range(1, 5):
        assert burnside_count(cyclic_generators(n), 3) == n**2
    for d in (2, 3):
        assert burnside_count(translation_generators(d), 2) == d**2
