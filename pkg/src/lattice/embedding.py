"""
Root sublattice embeddings into E_{9-d} and the blow-down reduction criterion.

Embeddings are searched as ordered simple systems. Placing simple roots one
at a time, only one candidate per orbit of the pointwise stabiliser of the
roots already placed is kept. That stabiliser is the reflection group of the
roots orthogonal to the prefix, so every leaf represents a distinct
W(E_{9-d})-orbit of ordered simple systems. Leaves are then grouped into
classes by an invariant tuple that ignores signs and relabelling.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config.logging import format_log_context, log_timing
from src.lattice.core import (
    LatticeVector,
    QuadraticSpace,
    as_matrix,
    enumerate_exceptional,
    enumerate_roots,
    inner_product,
    is_root,
)
from src.lattice.dynkin import DynkinType, all_types_up_to_rank, dynkin_type_of
from src.lattice.weyl import reflect, reflection_table, weyl_orbit_labels
from src.services.base_service import ServiceValidationError

logger = logging.getLogger(__name__)


class SimpleSystemError(ServiceValidationError):
    """Raised when a root list does not realise its declared Dynkin diagram."""
    pass


@dataclass(frozen=True, eq=False)
class RootIndex:
    """Indexed roots and exceptional vectors of one lattice with bulk tables."""

    space: QuadraticSpace
    roots: Tuple[LatticeVector, ...]
    exceptional: Tuple[LatticeVector, ...]
    gram: np.ndarray
    exceptional_gram: np.ndarray
    reflections: np.ndarray


@lru_cache(maxsize=None)
def root_index(n: int) -> RootIndex:
    space = QuadraticSpace(n)
    roots = enumerate_roots(space).roots
    exceptional = enumerate_exceptional(space)
    root_matrix = as_matrix(space, roots)
    gram = root_matrix @ space.metric @ root_matrix.T
    exceptional_gram = as_matrix(space, exceptional) @ space.metric @ root_matrix.T
    reflections = reflection_table(space, roots, roots) if roots else np.zeros((0, 0), dtype=np.int64)
    return RootIndex(space, roots, exceptional, gram, exceptional_gram, reflections)


@dataclass(frozen=True)
class SimpleSystem:
    """Ordered simple roots realising a Dynkin diagram inside E_{9-d}."""

    space: QuadraticSpace
    roots: Tuple[LatticeVector, ...]
    dynkin: DynkinType

    def canonical_key(self) -> Tuple[Tuple[int, ...], ...]:
        """Sorted coordinates after making the first nonzero coordinate positive."""
        normalized = []
        for r in self.roots:
            first = next(c for c in r.coords if c != 0)
            normalized.append((r if first > 0 else -r).coords)
        return tuple(sorted(normalized))


def validate_simple_system(system: SimpleSystem) -> None:
    """Check roots, adjacency pattern and linear independence."""
    space = system.space
    count, edges = system.dynkin.diagram()
    if len(system.roots) != count:
        raise SimpleSystemError(f"{system.dynkin} needs {count} roots, got {len(system.roots)}")
    for r in system.roots:
        if not is_root(space, r):
            raise SimpleSystemError(f"{r} is not a root")
    adjacent = {frozenset(e) for e in edges}
    for i in range(count):
        for j in range(i + 1, count):
            expected = 1 if frozenset((i, j)) in adjacent else 0
            if inner_product(space, system.roots[i], system.roots[j]) != expected:
                raise SimpleSystemError(f"roots {i},{j} do not match the diagram of {system.dynkin}")
    if count and np.linalg.matrix_rank(as_matrix(space, system.roots).astype(float)) != count:
        raise SimpleSystemError("roots are linearly dependent")


def _adjacency(dynkin: DynkinType) -> np.ndarray:
    count, edges = dynkin.diagram()
    matrix = np.zeros((count, count), dtype=np.int64)
    for a, b in edges:
        matrix[a, b] = matrix[b, a] = 1
    return matrix


def _search(index: RootIndex, dynkin: DynkinType) -> List[Tuple[int, ...]]:
    """Leaves of the stabiliser-chain search as tuples of root indices."""
    count, _ = dynkin.diagram()
    if count == 0:
        return [()]
    total = len(index.roots)
    if total == 0 or count > index.space.n:
        return []
    adjacency = _adjacency(dynkin)
    leaves: List[Tuple[int, ...]] = []
    all_indices = np.arange(total)

    def extend(prefix: List[int]) -> None:
        step = len(prefix)
        if step == count:
            leaves.append(tuple(prefix))
            return
        if prefix:
            placed = np.asarray(prefix)
            target = adjacency[step, :step]
            mask = (index.gram[:, placed] == target[None, :]).all(axis=1)
            candidates = all_indices[mask]
            stabiliser = all_indices[~index.gram[:, placed].any(axis=1)]
        else:
            candidates = all_indices
            stabiliser = all_indices
        if candidates.size == 0:
            return
        labels = weyl_orbit_labels(index.reflections, stabiliser, total)
        for c in candidates:
            if labels[c] == c:
                prefix.append(int(c))
                extend(prefix)
                prefix.pop()

    extend([])
    return leaves


def enumerate_embeddings(dynkin: DynkinType, space: QuadraticSpace) -> List[SimpleSystem]:
    """
    Simple systems of the given type in E_{9-d}, one per W(E_{9-d})-orbit of
    ordered simple systems, deduplicated by canonical key.
    """
    if dynkin.rank > space.n:
        return []
    with log_timing(logger, "Embedding search finished", type=str(dynkin), degree=space.degree) as context:
        index = root_index(space.n)
        systems: Dict[Tuple[Tuple[int, ...], ...], SimpleSystem] = {}
        for leaf in _search(index, dynkin):
            system = SimpleSystem(space, tuple(index.roots[i] for i in leaf), dynkin)
            systems.setdefault(system.canonical_key(), system)
        result = [systems[key] for key in sorted(systems)]
        for system in result:
            validate_simple_system(system)
        context["leaves"] = len(result)
    return result


@dataclass(frozen=True)
class EmbeddingInvariant:
    """W-invariant data separating embedding classes."""

    orthogonal_type: str
    orthogonal_exceptional: int
    exceptional_pattern: Tuple[Tuple[int, ...], ...]


def embedding_invariant(system: SimpleSystem) -> EmbeddingInvariant:
    space = system.space
    index = root_index(space.n)
    if system.roots:
        positions = {r: i for i, r in enumerate(index.roots)}
        columns = np.asarray([positions[r] for r in system.roots])
        perp_mask = ~index.gram[:, columns].any(axis=1)
        exc_products = np.abs(index.exceptional_gram[:, columns])
    else:
        perp_mask = np.ones(len(index.roots), dtype=bool)
        exc_products = np.zeros((len(index.exceptional), 0), dtype=np.int64)
    perp_roots = [r for r, keep in zip(index.roots, perp_mask) if keep]
    pattern = tuple(sorted(tuple(sorted(int(x) for x in row)) for row in exc_products))
    return EmbeddingInvariant(
        orthogonal_type=str(dynkin_type_of(space, perp_roots)),
        orthogonal_exceptional=int((~exc_products.any(axis=1)).sum()),
        exceptional_pattern=pattern,
    )


def reduction_criterion(embedding: SimpleSystem) -> bool:
    """True iff some exceptional vector is orthogonal to every root of the embedding."""
    space = embedding.space
    return any(
        all(inner_product(space, e, r) == 0 for r in embedding.roots)
        for e in enumerate_exceptional(space)
    )


@lru_cache(maxsize=None)
def _straightening_words(n: int) -> Dict[LatticeVector, Tuple[LatticeVector, Tuple[LatticeVector, ...]]]:
    """
    For each exceptional e its orbit representative and a word of roots whose
    reflections carry e there.

    Exc is a single W(E_n)-orbit with representative e_n for n != 2. For n = 2
    the class e_0 - e_1 - e_2 is fixed by W and represents its own orbit.
    """
    space = QuadraticSpace(n)
    standard = space.basis(n)
    roots = enumerate_roots(space).roots
    words: Dict[LatticeVector, Tuple[LatticeVector, Tuple[LatticeVector, ...]]] = {}
    for seed in sorted(enumerate_exceptional(space), key=lambda v: v != standard):
        if seed in words:
            continue
        words[seed] = (seed, ())
        queue = deque([seed])
        while queue:
            current = queue.popleft()
            for r in roots:
                image = reflect(space, r, current)
                if image not in words:
                    # s_r is an involution: image -> current -> ... -> seed
                    words[image] = (seed, (r,) + words[current][1])
                    queue.append(image)
    return words


def reduction_criterion_by_factorization(embedding: SimpleSystem) -> bool:
    """
    True iff the embedding factors through <k, e>^perp for some exceptional e.

    The Weyl element sending e to its orbit representative is applied to the
    roots. For the representative e_n the embedding factors through the
    standard copy of I^{1,n-1} exactly when every image lies in the span of
    e_0..e_{n-1}. The degree 7 class e_0 - e_1 - e_2 blows down to P^1 x P^1,
    whose complement is no coordinate subspace, so images are tested against
    it directly.
    """
    space = embedding.space
    standard = space.basis(space.n)
    words = _straightening_words(space.n)
    for e in enumerate_exceptional(space):
        target, word = words[e]
        images = list(embedding.roots)
        for r in word:
            images = [reflect(space, r, v) for v in images]
        if target == standard:
            factors = all(v.coords[space.n] == 0 for v in images)
        else:
            factors = all(inner_product(space, v, target) == 0 for v in images)
        if factors:
            return True
    return False


@dataclass(frozen=True)
class EmbeddingClass:
    """One class of embeddings sharing an invariant tuple."""

    dynkin: DynkinType
    space: QuadraticSpace
    invariant: EmbeddingInvariant
    representative: SimpleSystem
    members: int
    reducible: bool
    reducible_by_factorization: bool

    @property
    def criteria_agree(self) -> bool:
        return self.reducible == self.reducible_by_factorization


@lru_cache(maxsize=None)
def _classes_cached(label: str, n: int) -> Tuple[EmbeddingClass, ...]:
    dynkin = DynkinType.parse(label)
    space = QuadraticSpace(n)
    grouped: Dict[EmbeddingInvariant, List[SimpleSystem]] = {}
    for system in enumerate_embeddings(dynkin, space):
        grouped.setdefault(embedding_invariant(system), []).append(system)
    classes = []
    for invariant in sorted(grouped, key=lambda inv: (inv.orthogonal_exceptional, inv.orthogonal_type, inv.exceptional_pattern)):
        members = grouped[invariant]
        verdicts = {reduction_criterion(m) for m in members}
        factor_verdicts = {reduction_criterion_by_factorization(m) for m in members}
        if len(verdicts) != 1 or len(factor_verdicts) != 1:
            raise SimpleSystemError(f"members of one {dynkin} class disagree on the reduction criterion")
        if verdicts != factor_verdicts:
            logger.error(
                "Reduction criteria disagree %s",
                format_log_context(type=label, degree=space.degree, orthogonal=verdicts, factorization=factor_verdicts),
            )
        classes.append(
            EmbeddingClass(
                dynkin=dynkin,
                space=space,
                invariant=invariant,
                representative=members[0],
                members=len(members),
                reducible=verdicts.pop(),
                reducible_by_factorization=factor_verdicts.pop(),
            )
        )
    return tuple(classes)


def embedding_classes(dynkin: DynkinType, space: QuadraticSpace) -> List[EmbeddingClass]:
    """Embedding classes of a type, ordered by invariant."""
    return list(_classes_cached(str(dynkin), space.n))


def embeds(dynkin: DynkinType, space: QuadraticSpace) -> bool:
    return bool(embedding_classes(dynkin, space))


def uniqueness_exceptions(space: QuadraticSpace, candidates: Optional[Sequence[DynkinType]] = None) -> List[DynkinType]:
    """Types admitting at least two embedding classes in E_{9-d}."""
    types = candidates if candidates is not None else all_types_up_to_rank(space.n)
    result = [t for t in types if len(embedding_classes(t, space)) >= 2]
    logger.info(
        "Uniqueness exceptions computed %s",
        format_log_context(degree=space.degree, checked=len(types), exceptions=len(result)),
    )
    return result


def maximal_rank_types(space: QuadraticSpace) -> List[DynkinType]:
    """Every ADE type of total rank <= n that embeds in E_{9-d}."""
    return [t for t in all_types_up_to_rank(space.n) if embeds(t, space)]


def class_counts(space: QuadraticSpace) -> Dict[str, int]:
    """Number of embedding classes for every embeddable type."""
    return {str(t): len(embedding_classes(t, space)) for t in maximal_rank_types(space)}


# Types listed in the literature as having several embedding classes, by degree.
# The computed uniqueness_exceptions may be larger; reports show both.
LISTED_NONUNIQUE: Dict[int, Tuple[str, ...]] = {
    4: ("A3",),
    2: ("3A1", "4A1", "A3+A1", "A3+2A1", "A5", "A5+A1"),
    1: ("A7", "2A3", "A5+A1", "A3+2A1", "4A1"),
}


def is_listed_nonunique(dynkin: DynkinType, degree: int) -> bool:
    return str(dynkin) in LISTED_NONUNIQUE.get(degree, ())


__all__ = [
    "SimpleSystemError",
    "RootIndex",
    "root_index",
    "SimpleSystem",
    "validate_simple_system",
    "enumerate_embeddings",
    "EmbeddingInvariant",
    "embedding_invariant",
    "reduction_criterion",
    "reduction_criterion_by_factorization",
    "EmbeddingClass",
    "embedding_classes",
    "embeds",
    "uniqueness_exceptions",
    "maximal_rank_types",
    "class_counts",
    "LISTED_NONUNIQUE",
    "is_listed_nonunique",
]
