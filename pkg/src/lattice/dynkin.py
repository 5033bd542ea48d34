"""Dynkin types: parsing, canonical labels, diagrams, and identification of root systems."""

import re
from collections import Counter
from dataclasses import dataclass
from functools import total_ordering
from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Tuple

from src.lattice.core import LatticeVector, QuadraticSpace, gram_matrix
from src.services.base_service import ServiceValidationError

FAMILY_ORDER = {"E": 0, "D": 1, "A": 2}
EMPTY_LABEL = "0"

_COMPONENT_RE = re.compile(r"^\s*(\d*)\s*([ADE])_?\{?(\d+)\}?\s*$")


class DynkinTypeError(ServiceValidationError):
    """Raised for malformed or impossible Dynkin types."""
    pass


@total_ordering
@dataclass(frozen=True)
class DynkinComponent:
    """One connected ADE diagram."""

    family: str
    rank: int

    def __post_init__(self) -> None:
        if self.family not in FAMILY_ORDER:
            raise DynkinTypeError(f"unknown family {self.family!r}")
        if self.family == "A" and self.rank < 1:
            raise DynkinTypeError("A_n needs n >= 1")
        if self.family == "D" and self.rank < 4:
            raise DynkinTypeError("D_n needs n >= 4")
        if self.family == "E" and self.rank not in (6, 7, 8):
            raise DynkinTypeError("E_n needs n in {6, 7, 8}")

    def sort_key(self) -> Tuple[int, int]:
        return (FAMILY_ORDER[self.family], -self.rank)

    def __lt__(self, other: "DynkinComponent") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    def edges(self) -> List[Tuple[int, int]]:
        """
        Edges of the diagram with nodes numbered so that every node after
        the first is adjacent to an earlier one.
        """
        n = self.rank
        if self.family == "A":
            return [(i, i + 1) for i in range(n - 1)]
        if self.family == "D":
            return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        return [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]

    def root_count(self) -> int:
        n = self.rank
        if self.family == "A":
            return n * (n + 1)
        if self.family == "D":
            return 2 * n * (n - 1)
        return {6: 72, 7: 126, 8: 240}[n]


@dataclass(frozen=True)
class DynkinType:
    """Multiset of ADE components, stored in canonical order."""

    components: Tuple[DynkinComponent, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(sorted(self.components)))

    @classmethod
    def parse(cls, text: str) -> "DynkinType":
        """Parse labels such as ``A4+A1``, ``A_4+A_1``, ``2A1`` or ``E6+A2``."""
        stripped = text.strip()
        if stripped in ("", EMPTY_LABEL):
            return cls(())
        components: List[DynkinComponent] = []
        for part in stripped.split("+"):
            match = _COMPONENT_RE.match(part)
            if not match:
                raise DynkinTypeError(f"cannot parse Dynkin component {part!r} in {text!r}")
            multiplicity = int(match.group(1)) if match.group(1) else 1
            if multiplicity < 1:
                raise DynkinTypeError(f"multiplicity must be positive in {text!r}")
            component = DynkinComponent(match.group(2), int(match.group(3)))
            components.extend([component] * multiplicity)
        return cls(tuple(components))

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __str__(self) -> str:
        if not self.components:
            return EMPTY_LABEL
        counts = Counter(self.components)
        parts = []
        for component in sorted(counts):
            m = counts[component]
            parts.append(f"{m}{component}" if m > 1 else str(component))
        return "+".join(parts)

    def __add__(self, other: "DynkinType") -> "DynkinType":
        return DynkinType(self.components + other.components)

    def diagram(self) -> Tuple[int, List[Tuple[int, int]]]:
        """Total node count and edge list, components laid out largest first."""
        edges: List[Tuple[int, int]] = []
        offset = 0
        for component in self.components:
            edges.extend((a + offset, b + offset) for a, b in component.edges())
            offset += component.rank
        return offset, edges

    def root_count(self) -> int:
        return sum(c.root_count() for c in self.components)


COMPONENTS_UP_TO_RANK_8: Tuple[DynkinComponent, ...] = tuple(
    sorted(
        [DynkinComponent("A", n) for n in range(1, 9)]
        + [DynkinComponent("D", n) for n in range(4, 9)]
        + [DynkinComponent("E", n) for n in (6, 7, 8)]
    )
)


def all_types_up_to_rank(max_rank: int) -> List[DynkinType]:
    """Every nonempty ADE type of total rank <= max_rank, in canonical order."""
    result = set()
    components = [c for c in COMPONENTS_UP_TO_RANK_8 if c.rank <= max_rank]
    for size in range(1, max_rank + 1):
        for combo in combinations_with_replacement(components, size):
            if sum(c.rank for c in combo) <= max_rank:
                result.add(DynkinType(combo))
    return sorted(result, key=lambda t: (t.rank, str(t)))


def _arms(node: int, adjacency: Dict[int, List[int]]) -> List[int]:
    lengths = []
    for start in adjacency[node]:
        length, previous, current = 1, node, start
        while True:
            following = [x for x in adjacency[current] if x != previous]
            if not following:
                break
            if len(following) > 1:
                raise DynkinTypeError("diagram has two branch points")
            previous, current = current, following[0]
            length += 1
        lengths.append(length)
    return sorted(lengths)


def _identify_component(nodes: Sequence[int], adjacency: Dict[int, List[int]]) -> DynkinComponent:
    edge_count = sum(len(adjacency[v]) for v in nodes) // 2
    if edge_count != len(nodes) - 1:
        raise DynkinTypeError("simple roots do not form a tree")
    branch = [v for v in nodes if len(adjacency[v]) >= 3]
    if not branch:
        if any(len(adjacency[v]) > 2 for v in nodes):
            raise DynkinTypeError("invalid path component")
        return DynkinComponent("A", len(nodes))
    if len(branch) > 1 or len(adjacency[branch[0]]) != 3:
        raise DynkinTypeError("component is not simply laced of finite type")
    arms = tuple(_arms(branch[0], adjacency))
    if arms[0] == 1 and arms[1] == 1:
        return DynkinComponent("D", arms[2] + 3)
    shapes = {(1, 2, 2): 6, (1, 2, 3): 7, (1, 2, 4): 8}
    if arms in shapes:
        return DynkinComponent("E", shapes[arms])
    raise DynkinTypeError(f"branch arms {arms} are not of finite type")


def simple_roots(space: QuadraticSpace, roots: Sequence[LatticeVector]) -> List[LatticeVector]:
    """
    Simple roots of a root system with respect to a generic linear functional.

    The functional sum(v_i 10^i) never vanishes on nonzero vectors whose
    coordinates are bounded by 9 in absolute value.
    """
    def height(v: LatticeVector) -> int:
        return sum(c * 10 ** i for i, c in enumerate(v.coords))

    positive = [r for r in roots if height(r) > 0]
    positive_set = set(positive)
    return sorted(
        alpha for alpha in positive
        if not any((alpha - beta) in positive_set for beta in positive if beta != alpha)
    )


def dynkin_type_of(space: QuadraticSpace, roots: Sequence[LatticeVector]) -> DynkinType:
    """Dynkin type of the root system formed by the given (negation-closed) roots."""
    if not roots:
        return DynkinType(())
    simple = simple_roots(space, roots)
    gram = gram_matrix(space, simple)
    adjacency: Dict[int, List[int]] = {i: [] for i in range(len(simple))}
    for i in range(len(simple)):
        for j in range(i + 1, len(simple)):
            if gram[i, j] != 0:
                adjacency[i].append(j)
                adjacency[j].append(i)
    seen: set = set()
    components = []
    for start in range(len(simple)):
        if start in seen:
            continue
        stack, nodes = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            nodes.append(v)
            for w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        components.append(_identify_component(nodes, adjacency))
    result = DynkinType(tuple(components))
    if result.root_count() != len(roots):
        raise DynkinTypeError(
            f"root count {len(roots)} does not match identified type {result}"
        )
    return result


__all__ = [
    "DynkinTypeError",
    "DynkinComponent",
    "DynkinType",
    "all_types_up_to_rank",
    "simple_roots",
    "dynkin_type_of",
    "COMPONENTS_UP_TO_RANK_8",
]
