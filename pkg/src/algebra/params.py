"""
Parameters of group-scheme actions and their exponent rules.

A parameter is one of
    nilpotent      eps with eps^m = 0 (alpha_{p^n} when m = p^n)
    root_of_unity  lam with lam^n = 1 (mu_n)
    unit           an invertible free parameter (G_m), Laurent exponents allowed
    additive       a free parameter (G_a)
"""

from dataclasses import dataclass
from typing import Dict, Literal, Optional

from src.services.base_service import ServiceValidationError

ParamKind = Literal["nilpotent", "root_of_unity", "unit", "additive"]
PARAM_KINDS = ("nilpotent", "root_of_unity", "unit", "additive")


class NilpotentOrderError(ServiceValidationError):
    """Raised for an invalid parameter order or an exponent the parameter does not allow."""
    pass


def is_power_of(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: ParamKind
    order: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in PARAM_KINDS:
            raise NilpotentOrderError(f"unknown parameter kind {self.kind!r} for {self.name}")
        if self.kind in ("nilpotent", "root_of_unity"):
            if self.order is None or self.order < 1:
                raise NilpotentOrderError(f"{self.kind} parameter {self.name} needs a positive order")
        elif self.order is not None:
            raise NilpotentOrderError(f"{self.kind} parameter {self.name} takes no order")

    def check_characteristic(self, p: int) -> None:
        """Nilpotent orders must be powers of p."""
        if self.kind == "nilpotent" and not is_power_of(self.order or 0, p):
            raise NilpotentOrderError(
                f"nilpotent {self.name} has order {self.order}, expected a power of {p}"
            )

    def normalize_exponent(self, exponent: int) -> Optional[int]:
        """
        Reduced exponent, or None when the monomial vanishes.

        Raises NilpotentOrderError for negative exponents on parameters that
        are not units.
        """
        if self.kind == "unit":
            return exponent
        if self.kind == "root_of_unity":
            return exponent % self.order
        if exponent < 0:
            raise NilpotentOrderError(f"negative power of {self.kind} parameter {self.name}")
        if self.kind == "nilpotent" and exponent >= self.order:
            return None
        return exponent

    def is_infinitesimal(self, p: int) -> bool:
        """True when the parameter specialises to its identity value in every unit test."""
        if self.kind == "nilpotent":
            return True
        return self.kind == "root_of_unity" and is_power_of(self.order or 0, p)

    def identity_value(self) -> int:
        """Value at the identity of the group scheme: 0 additively, 1 multiplicatively."""
        return 0 if self.kind in ("nilpotent", "additive") else 1

    def inverse_exponent(self) -> int:
        """Exponent giving the group inverse of a multiplicative parameter."""
        if self.kind == "root_of_unity":
            return (self.order or 1) - 1
        return -1


def params_by_name(params) -> Dict[str, ParamSpec]:
    return {param.name: param for param in params}


__all__ = [
    "ParamKind",
    "PARAM_KINDS",
    "ParamSpec",
    "NilpotentOrderError",
    "is_power_of",
    "params_by_name",
]
