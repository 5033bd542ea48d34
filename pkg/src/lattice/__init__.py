"""Lattice machinery for I^{1,n}: vectors, reflections, Dynkin types and root embeddings."""

from src.lattice.core import (
    DimensionError,
    LatticeVector,
    QuadraticSpace,
    RootSet,
    UnsupportedRankError,
    enumerate_exceptional,
    enumerate_roots,
    inner_product,
)
from src.lattice.dynkin import DynkinType, DynkinTypeError, dynkin_type_of
from src.lattice.embedding import (
    EmbeddingClass,
    SimpleSystem,
    embedding_classes,
    enumerate_embeddings,
    reduction_criterion,
    reduction_criterion_by_factorization,
    uniqueness_exceptions,
)
from src.lattice.weyl import (
    Chamber,
    ContainmentError,
    InvalidRootError,
    OrbitLimitError,
    ReflectionGroupSpec,
    curves_disjoint_from,
    minus_one_curves,
    orbit,
    reflect,
)

__all__ = [
    "DimensionError",
    "UnsupportedRankError",
    "LatticeVector",
    "QuadraticSpace",
    "RootSet",
    "inner_product",
    "enumerate_exceptional",
    "enumerate_roots",
    "DynkinType",
    "DynkinTypeError",
    "dynkin_type_of",
    "SimpleSystem",
    "EmbeddingClass",
    "enumerate_embeddings",
    "embedding_classes",
    "reduction_criterion",
    "reduction_criterion_by_factorization",
    "uniqueness_exceptions",
    "ReflectionGroupSpec",
    "Chamber",
    "InvalidRootError",
    "OrbitLimitError",
    "ContainmentError",
    "reflect",
    "orbit",
    "minus_one_curves",
    "curves_disjoint_from",
]
