"""
Group-scheme actions on the ambient coordinates and their verification.

A generator is a substitution x_i -> image_i over the ring of the ambient
variables and the action parameters. Equality of actions and of points is
always projective: two coordinate tuples agree when they differ by a unit mu
of the parameter ring acting with the coordinate weights.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.algebra.field import FieldSpec
from src.algebra.linalg import quadric_ideal_membership
from src.algebra.params import ParamSpec
from src.algebra.polynomial import PolyRing, Polynomial, SubstitutionMap, compose
from src.config.logging import format_log_context
from src.config.settings import ComputeSettings
from src.services.base_service import BaseService, ServiceValidationError
from src.services.singularity_service import AmbientSpace, Surface

logger = logging.getLogger(__name__)

_POWER_RE = re.compile(r"^\s*power\s+(\d+)\s*=\s*id\s*$")
_COMMUTES_RE = re.compile(r"^\s*commutes\s*$")
_CONJUGATE_RE = re.compile(r"^\s*conjugate\s+([A-Za-z][A-Za-z0-9_]*)\s*->\s*(.+?)\s*$")


class PointNotOnSurfaceError(ServiceValidationError):
    """Raised when a motion claim names a point off the surface."""
    pass


class RelationParseError(ServiceValidationError):
    """Raised for relation strings outside the supported forms."""
    pass


@dataclass(frozen=True, eq=False)
class GroupSchemeGenerator:
    """One listed generator: a substitution of the ambient variables over the parameter ring."""

    label: str
    ring: PolyRing
    substitution: Mapping[str, Polynomial]

    def __post_init__(self) -> None:
        missing = [v for v in self.ring.variables if v not in self.substitution]
        if missing:
            raise ServiceValidationError(f"generator {self.label} gives no image for {', '.join(missing)}")
        for image in self.substitution.values():
            if image.ring != self.ring:
                raise ServiceValidationError(f"images of {self.label} must live in the generator ring")

    @property
    def params(self) -> Tuple[ParamSpec, ...]:
        return self.ring.params

    @classmethod
    def from_images(
        cls,
        label: str,
        variables: Sequence[str],
        params: Sequence[ParamSpec],
        images: Sequence[str],
        spec: FieldSpec,
        values: Optional[Mapping[str, int]] = None,
    ) -> "GroupSchemeGenerator":
        if len(images) != len(variables):
            raise ServiceValidationError(f"generator {label} needs {len(variables)} images, got {len(images)}")
        ring = PolyRing(tuple(variables), spec, tuple(params))
        return cls(label, ring, {v: ring.parse_with(src, values or {}) for v, src in zip(variables, images)})

    @classmethod
    def from_matrix(
        cls,
        label: str,
        variables: Sequence[str],
        params: Sequence[ParamSpec],
        matrix: Sequence[Sequence[str]],
        spec: FieldSpec,
        values: Optional[Mapping[str, int]] = None,
    ) -> "GroupSchemeGenerator":
        """Linear action x_i -> sum_j M[i][j] x_j."""
        n = len(variables)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ServiceValidationError(f"generator {label} needs a {n}x{n} matrix")
        ring = PolyRing(tuple(variables), spec, tuple(params))
        substitution = {}
        for v, row in zip(variables, matrix):
            image = ring.zero()
            for w, entry in zip(variables, row):
                image = image + ring.parse_with(entry, values or {}) * ring.symbol(w)
            substitution[v] = image
        return cls(label, ring, substitution)

    def specialise(self, values: Mapping[str, int]) -> "GroupSchemeGenerator":
        """Fix some parameters to field values."""
        return GroupSchemeGenerator(
            self.label,
            self.ring,
            {v: image.specialise(values) for v, image in self.substitution.items()},
        )

    def identity_specialisation(self) -> "GroupSchemeGenerator":
        return self.specialise({p.name: p.identity_value() for p in self.params})

    def specialises_to_identity(self) -> bool:
        identity = self.identity_specialisation()
        return all(identity.substitution[v] == self.ring.symbol(v) for v in self.ring.variables)

    def respects_weights(self, weights: Mapping[str, int]) -> bool:
        return all(
            image.weighted_homogeneous_check(weights) == weights[v]
            for v, image in self.substitution.items()
        )

    def inverse_parameters(self) -> "GroupSchemeGenerator":
        """Each parameter replaced by its group inverse (units and roots inverted, additive ones negated)."""
        mapping: Dict[str, Polynomial] = {}
        for p in self.params:
            symbol = self.ring.symbol(p.name)
            mapping[p.name] = -symbol if p.kind in ("additive", "nilpotent") else symbol ** p.inverse_exponent()
        return GroupSchemeGenerator(
            self.label + "^-1",
            self.ring,
            {v: image.substitute(mapping, ring=self.ring) for v, image in self.substitution.items()},
        )

    def format_images(self) -> List[str]:
        return [str(self.substitution[v]) for v in self.ring.variables]


@dataclass(frozen=True)
class InvarianceReport:
    """Verdict of verify_invariance with its certificate."""

    label: str
    preserved: bool
    scaling: Optional[Polynomial] = None
    certificate: Tuple[Tuple[Polynomial, ...], ...] = ()
    weights_ok: bool = True
    reason: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {
            "generator": self.label,
            "preserved": self.preserved,
            "scaling": str(self.scaling) if self.scaling is not None else None,
            "certificate": [[str(c) for c in row] for row in self.certificate],
            "weights_ok": self.weights_ok,
            "reason": self.reason,
        }


def _transformed(surface: Surface, generator: GroupSchemeGenerator) -> Tuple[List[Polynomial], List[Polynomial]]:
    if generator.ring.variables != surface.ambient.variables or generator.ring.field != surface.field:
        raise ServiceValidationError(f"generator {generator.label} does not act on this ambient")
    lifted = [generator.ring.lift(eq) for eq in surface.equations]
    images = [eq.substitute(generator.substitution, ring=generator.ring) for eq in lifted]
    return lifted, images


def _projective_ratio(
    first: Mapping[str, Polynomial],
    second: Mapping[str, Polynomial],
    ambient: AmbientSpace,
) -> Optional[Polynomial]:
    """Unit mu with first[x] = mu^w(x) * second[x] for every coordinate, if one exists."""
    weights = ambient.weight_map()
    variables = ambient.variables
    mu = None
    for v in ambient.variables:
        if weights[v] != 1 or second[v].is_zero():
            continue
        split_first = first[v].coefficients_in(variables)
        for monomial, target in second[v].coefficients_in(variables).items():
            if target.is_invertible_monomial():
                mu = split_first.get(monomial, target.ring.zero()) * target ** -1
                break
        if mu is not None:
            break
    if mu is None or not mu.is_unit():
        return None
    for v in variables:
        if first[v] != (mu ** weights[v]) * second[v]:
            return None
    return mu


class ActionService(BaseService):
    """Invariance, point-motion and relation checks for group-scheme generators."""

    def __init__(self, compute: Optional[ComputeSettings] = None):
        super().__init__(compute)

    def verify_invariance(self, surface: Surface, generator: GroupSchemeGenerator) -> InvarianceReport:
        """The generator maps the surface to itself: a unit multiple or an ideal certificate."""
        weights_ok = True
        if surface.ambient.kind == "weighted":
            weights_ok = generator.respects_weights(surface.ambient.weight_map())
        lifted, images = _transformed(surface, generator)
        if surface.is_hypersurface:
            report = self._hypersurface_verdict(generator.label, lifted[0], images[0], weights_ok)
        else:
            report = self._ideal_verdict(generator.label, lifted, images, weights_ok)
        self.logger.debug(
            "Invariance checked %s",
            format_log_context(generator=generator.label, preserved=report.preserved),
        )
        return report

    def _hypersurface_verdict(self, label: str, f: Polynomial, g: Polynomial, weights_ok: bool) -> InvarianceReport:
        ring = f.ring
        variables = ring.variables
        if f.is_zero():
            return InvarianceReport(label, False, reason="equation is zero")
        (key, coeff) = next(iter(f.terms.items()))
        monomial = key[: ring.nvars]
        unit = g.coefficients_in(variables).get(monomial, ring.zero()).scale(ring.ops.inverse(coeff))
        if g != unit * f:
            return InvarianceReport(label, False, weights_ok=weights_ok, reason="transformed equation is not a multiple")
        if not unit.is_unit():
            return InvarianceReport(label, False, unit, weights_ok=weights_ok, reason=f"scaling factor {unit} is not a unit")
        return InvarianceReport(label, weights_ok, unit, weights_ok=weights_ok, reason="" if weights_ok else "images break the weights")

    def _ideal_verdict(
        self, label: str, generators: List[Polynomial], images: List[Polynomial], weights_ok: bool
    ) -> InvarianceReport:
        certificate = []
        for index, image in enumerate(images):
            coefficients = quadric_ideal_membership(image, generators)
            if coefficients is None:
                return InvarianceReport(label, False, weights_ok=weights_ok, reason=f"image of equation {index} leaves the ideal")
            certificate.append(tuple(coefficients))
        return InvarianceReport(label, weights_ok, certificate=tuple(certificate), weights_ok=weights_ok)

    def recheck(self, surface: Surface, generator: GroupSchemeGenerator, report: InvarianceReport) -> bool:
        """Substitute the certificate back and compare with the transformed equations."""
        lifted, images = _transformed(surface, generator)
        if report.scaling is not None:
            return images[0] == report.scaling * lifted[0]
        for image, row in zip(images, report.certificate):
            total = generator.ring.zero()
            for c, eq in zip(row, lifted):
                total = total + c * eq
            if total != image:
                return False
        return bool(report.certificate)

    def point_images(self, surface: Surface, generator: GroupSchemeGenerator, point: Sequence[int]) -> Dict[str, Polynomial]:
        values = dict(zip(surface.ambient.variables, point))
        return {v: generator.substitution[v].specialise(values) for v in surface.ambient.variables}

    def point_is_fixed(self, surface: Surface, generator: GroupSchemeGenerator, point: Sequence[int]) -> bool:
        if not surface.contains(point):
            raise PointNotOnSurfaceError(f"point {tuple(point)} does not lie on the surface")
        images = self.point_images(surface, generator, point)
        ring = generator.ring
        constant = {v: ring.constant(c) for v, c in zip(surface.ambient.variables, point)}
        return _projective_ratio(images, constant, surface.ambient) is not None

    def verify_point_motion(
        self,
        surface: Surface,
        generator: GroupSchemeGenerator,
        point: Sequence[int],
        claim: str,
    ) -> bool:
        """Whether the observed behaviour (fixes or moves) matches the claim."""
        if claim not in ("fixes", "moves"):
            raise ServiceValidationError(f"motion claim must be 'fixes' or 'moves', got {claim!r}")
        fixed = self.point_is_fixed(surface, generator, point)
        return fixed == (claim == "fixes")

    def maps_agree(self, first: SubstitutionMap, second: SubstitutionMap, ambient: AmbientSpace) -> bool:
        ring = None
        for image in list(first.values()) + list(second.values()):
            ring = image.ring if ring is None else ring.join(image.ring)
        lift_first = {v: ring.lift(first[v]) for v in ambient.variables}
        lift_second = {v: ring.lift(second[v]) for v in ambient.variables}
        return _projective_ratio(lift_first, lift_second, ambient) is not None

    def verify_relations(
        self,
        generator: GroupSchemeGenerator,
        companion: Optional[GroupSchemeGenerator],
        relation: str,
        ambient: AmbientSpace,
    ) -> bool:
        """
        Check one relation between generators as parameter-ring maps:

            power N = id                  the N-fold composite is the identity
            commutes                      generator and companion commute
            conjugate <param> -> <expr>   companion * generator * companion^-1
                                          equals generator with param replaced
        """
        identity = {v: generator.ring.symbol(v) for v in ambient.variables}
        match = _POWER_RE.match(relation)
        if match:
            count = int(match.group(1))
            if count < 1:
                raise RelationParseError("power must be positive")
            composite: SubstitutionMap = dict(generator.substitution)
            for _ in range(count - 1):
                composite = compose(composite, generator.substitution)
            return self.maps_agree(composite, identity, ambient)
        if companion is None:
            raise RelationParseError(f"relation {relation!r} needs a companion generator")
        if _COMMUTES_RE.match(relation):
            return self.maps_agree(
                compose(generator.substitution, companion.substitution),
                compose(companion.substitution, generator.substitution),
                ambient,
            )
        match = _CONJUGATE_RE.match(relation)
        if match:
            name, source = match.group(1), match.group(2)
            joint = generator.ring.join(companion.ring)
            if name not in {p.name for p in generator.params}:
                raise RelationParseError(f"{name} is not a parameter of {generator.label}")
            replacement = joint.parse(source)
            reparametrised = {v: generator.substitution[v].substitute({name: replacement}, ring=joint) for v in ambient.variables}
            inverse = companion.inverse_parameters()
            conjugated = compose(compose(companion.substitution, generator.substitution), inverse.substitution)
            return self.maps_agree(conjugated, reparametrised, ambient)
        raise RelationParseError(f"cannot parse relation {relation!r}")


def verify_invariance(surface: Surface, generator: GroupSchemeGenerator) -> InvarianceReport:
    return ActionService().verify_invariance(surface, generator)


def verify_point_motion(surface: Surface, generator: GroupSchemeGenerator, point: Sequence[int], claim: str) -> bool:
    return ActionService().verify_point_motion(surface, generator, point, claim)


def verify_relations(
    generator: GroupSchemeGenerator,
    companion: Optional[GroupSchemeGenerator],
    relation: str,
    ambient: AmbientSpace,
) -> bool:
    return ActionService().verify_relations(generator, companion, relation, ambient)


__all__ = [
    "PointNotOnSurfaceError",
    "RelationParseError",
    "GroupSchemeGenerator",
    "InvarianceReport",
    "ActionService",
    "verify_invariance",
    "verify_point_motion",
    "verify_relations",
]
