"""
Reflections, orbits and fundamental chambers in I^{1,n}.

Only vector orbits are ever computed; Weyl group elements are never
enumerated (|W(E_8)| is about 7*10^8).
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from src.config.settings import get_settings
from src.lattice.core import (
    LatticeVector,
    QuadraticSpace,
    as_matrix,
    enumerate_exceptional,
    inner_product,
)
from src.services.base_service import ServiceResourceError, ServiceValidationError

logger = logging.getLogger(__name__)


class InvalidRootError(ServiceValidationError):
    """Raised when a reflection is requested along a vector with v.v != -2."""
    pass


class OrbitLimitError(ServiceResourceError):
    """Raised when an orbit grows beyond the configured cap."""
    pass


class ContainmentError(ServiceValidationError):
    """Raised when a sub-configuration is not part of the full configuration."""
    pass


@dataclass(frozen=True)
class ReflectionGroupSpec:
    """The group W generated by reflections along a list of roots."""

    space: QuadraticSpace
    generators: Tuple[LatticeVector, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        k = self.space.canonical()
        for r in self.generators:
            if inner_product(self.space, r, r) != -2 or inner_product(self.space, r, k) != 0:
                raise InvalidRootError(f"{r} is not a root of E_{self.space.n}")


@dataclass(frozen=True)
class Chamber:
    """C = {v | v.w >= 0 for every defining root w}."""

    space: QuadraticSpace
    roots: Tuple[LatticeVector, ...]

    def contains(self, v: LatticeVector) -> bool:
        return all(inner_product(self.space, v, w) >= 0 for w in self.roots)


def chamber_contains(chamber: Chamber, v: LatticeVector) -> bool:
    return chamber.contains(v)


def reflect(space: QuadraticSpace, root: LatticeVector, v: LatticeVector) -> LatticeVector:
    """s_r(v) = v + (v.r) r."""
    if inner_product(space, root, root) != -2:
        raise InvalidRootError(f"{root} has square {inner_product(space, root, root)}, expected -2")
    return v + inner_product(space, v, root) * root


def orbit(
    group: ReflectionGroupSpec,
    seed: LatticeVector,
    cap: Optional[int] = None,
) -> Tuple[LatticeVector, ...]:
    """Closure of seed under the generator reflections, lexicographically sorted."""
    group.space.check(seed)
    limit = cap if cap is not None else get_settings().compute.DPK_ORBIT_CAP
    seen = {seed}
    queue = deque([seed])
    while queue:
        current = queue.popleft()
        for r in group.generators:
            image = reflect(group.space, r, current)
            if image not in seen:
                seen.add(image)
                if len(seen) > limit:
                    raise OrbitLimitError(f"orbit of {seed} exceeds cap {limit}")
                queue.append(image)
    return tuple(sorted(seen))


def minus_one_curves(all_curves: ReflectionGroupSpec) -> Tuple[LatticeVector, ...]:
    """Exc_{9-d} intersected with the fundamental chamber of the (-2)-curves."""
    chamber = Chamber(all_curves.space, all_curves.generators)
    return tuple(
        v for v in enumerate_exceptional(all_curves.space) if chamber.contains(v)
    )


def curves_disjoint_from(
    all_curves: ReflectionGroupSpec,
    subconfig: ReflectionGroupSpec,
) -> Tuple[LatticeVector, ...]:
    """(-1)-classes in the chamber that are orthogonal to every root of the sub-configuration."""
    if subconfig.space != all_curves.space:
        raise ContainmentError("sub-configuration lives in a different lattice")
    available = set(all_curves.generators)
    missing = [r for r in subconfig.generators if r not in available]
    if missing:
        raise ContainmentError(f"{len(missing)} roots of the sub-configuration are not curves, e.g. {missing[0]}")
    space = all_curves.space
    return tuple(
        v
        for v in minus_one_curves(all_curves)
        if all(inner_product(space, v, r) == 0 for r in subconfig.generators)
    )


def reflection_table(
    space: QuadraticSpace,
    roots: Sequence[LatticeVector],
    vectors: Sequence[LatticeVector],
) -> np.ndarray:
    """
    Index table T with vectors[T[i, j]] = s_{roots[i]}(vectors[j]).

    The vector list must be stable under all given reflections.
    """
    position: Dict[Tuple[int, ...], int] = {v.coords: j for j, v in enumerate(vectors)}
    root_matrix = as_matrix(space, roots)
    vector_matrix = as_matrix(space, vectors)
    products = root_matrix @ space.metric @ vector_matrix.T
    table = np.empty((len(roots), len(vectors)), dtype=np.int64)
    for i in range(len(roots)):
        images = vector_matrix + products[i][:, None] * root_matrix[i][None, :]
        try:
            table[i] = [position[tuple(int(c) for c in row)] for row in images]
        except KeyError as exc:
            raise ServiceValidationError("vector list is not stable under the reflections") from exc
    return table


def weyl_orbit_labels(table: np.ndarray, generators: Iterable[int], size: int) -> np.ndarray:
    """
    Label each index by the smallest index in its orbit.

    Reflections are involutions, so the orbit graph is undirected and
    min-label propagation converges to the orbit minimum.
    """
    labels = np.arange(size, dtype=np.int64)
    gens = np.fromiter(generators, dtype=np.int64)
    if gens.size == 0:
        return labels
    moves = table[gens]
    while True:
        updated = np.minimum(labels, labels[moves].min(axis=0))
        if np.array_equal(updated, labels):
            return labels
        labels = updated


__all__ = [
    "InvalidRootError",
    "OrbitLimitError",
    "ContainmentError",
    "ReflectionGroupSpec",
    "Chamber",
    "chamber_contains",
    "reflect",
    "orbit",
    "minus_one_curves",
    "curves_disjoint_from",
    "reflection_table",
    "weyl_orbit_labels",
]
