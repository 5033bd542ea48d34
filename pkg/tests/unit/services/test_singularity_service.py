"""
Unit tests for the singularity analyzer.

Covers ambient validation, point normalisation, the rational point sweep,
germ extraction and the ADE classification with Artin coindices.
"""

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.algebra.field import FieldSpec
from src.algebra.polynomial import PolyRing
from src.config.settings import ComputeSettings
from src.services.base_service import ServiceValidationError
from src.services.catalog_service import SUPPORTED_CHARACTERISTICS, catalog_types, normal_form, tjurina_reference
from src.services.singularity_service import (
    LOCAL_VARIABLES,
    AmbientSpace,
    LocalSingularity,
    NotAnRdpError,
    PointSweepLimitError,
    SingularityService,
    Surface,
    UnsupportedChartError,
    classify_rdp,
    local_germ,
    singular_points,
    tjurina_number,
)

F3 = FieldSpec(3)
F5 = FieldSpec(5)

P3 = AmbientSpace("projective", ("x", "y", "z", "w"))
AFFINE = AmbientSpace("affine", ("x", "y", "z"))


@pytest.fixture
def service():
    return SingularityService()


def _classify(source, p):
    return SingularityService().classify_rdp(local_germ(source, p))


# ---------------------------------------------------------------------------
# Ambient spaces
# ---------------------------------------------------------------------------


def test_projective_ambient_defaults_to_unit_weights():
    """Projective ambients fill in unit weights and have dimension n."""
    assert P3.weights == (1, 1, 1, 1)
    assert P3.dimension == 3
    assert AFFINE.dimension == 3


@pytest.mark.parametrize("kind, variables, weights, message", [
    ("projective", ("x", "y", "z"), (), "P\\^3 .. P\\^6"),
    ("projective", ("x", "y", "z", "w"), (1, 1, 1, 2), "unit weights"),
    ("weighted", ("x", "y", "z", "w"), (1, 1, 2, 2), "weighted ambient"),
    ("affine", ("x", "y"), (), "three variables"),
    ("conic", ("x", "y", "z"), (), "unknown ambient kind"),
    ("weighted", ("x", "y", "z", "w"), (1, 1, 2), "one weight per variable"),
])
def test_ambient_validation(kind, variables, weights, message):
    """Only the supported ambients can be built."""
    with pytest.raises(ServiceValidationError, match=message):
        AmbientSpace(kind, variables, weights)


def test_weighted_ambient_weight_one_coordinates():
    """P(1,1,2,3) charts on its first two coordinates only."""
    ambient = AmbientSpace("weighted", ("s", "t", "x", "y"), (1, 1, 2, 3))

    assert ambient.weight_one == [0, 1]
    assert ambient.weight_map() == {"s": 1, "t": 1, "x": 2, "y": 3}


def test_chart_of_rejects_points_outside_weight_one_charts():
    """A point with all weight-1 coordinates zero is unsupported."""
    ambient = AmbientSpace("weighted", ("x", "y", "z", "w"), (1, 1, 1, 2))

    with pytest.raises(UnsupportedChartError, match="outside the weight-1 charts"):
        ambient.chart_of((0, 0, 0, 1))


def test_normalize_scales_by_weights():
    """Scaling by lambda multiplies a weight-w coordinate by lambda^w."""
    ambient = AmbientSpace("weighted", ("x", "y", "z", "w"), (1, 1, 1, 2))

    # lambda = 1/2 = 3 in F_5; 4 * 3^2 = 36 = 1
    assert ambient.normalize((2, 4, 0, 4), F5) == (1, 2, 0, 1)
    assert P3.normalize((0, 3, 1, 0), F5) == (0, 1, 2, 0)


def test_surface_rejects_mismatched_ring():
    """Equations must use exactly the ambient variables."""
    ring = PolyRing(("x", "y", "z"), F5)

    with pytest.raises(ServiceValidationError, match="parameter-free ring"):
        Surface(P3, (ring.parse("x*y - z^2"),))


def test_surface_requires_an_equation():
    """An empty equation list is rejected."""
    with pytest.raises(ServiceValidationError, match="at least one equation"):
        Surface(P3, ())


def test_surface_from_strings_binds_family_parameters():
    """Family parameters are replaced by their field values."""
    surface = Surface.from_strings(P3, ["x*y - c*z^2"], F5, {"c": 2})

    assert surface.is_hypersurface
    assert surface.contains((2, 1, 1, 0))
    assert not surface.contains((1, 1, 1, 0))


# ---------------------------------------------------------------------------
# Point sweep
# ---------------------------------------------------------------------------


def test_affine_sweep_finds_the_origin(service):
    """x*y + z^2 over F_3 is singular only at the origin."""
    surface = Surface.from_strings(AFFINE, ["x*y + z^2"], F3)

    found = service.singular_points(surface)

    assert [s.point for s in found] == [(0, 0, 0)]
    assert found[0].chart is None


def test_quadric_cone_has_one_vertex(service):
    """The rank-3 quadric in P^3 is singular at its vertex, an A1 point."""
    surface = Surface.from_strings(P3, ["x*y - z^2"], F5)

    found = service.singular_points(surface)

    assert [s.point for s in found] == [(0, 0, 0, 1)]
    assert found[0].chart == "w"
    assert found[0].format_point() == "[0:0:0:1]"
    assert str(service.classify_rdp(found[0]).rdp) == "A1"


def test_cayley_cubic_has_four_nodes():
    """The Cayley cubic has A1 points at the four coordinate points."""
    surface = Surface.from_strings(P3, ["x*y*z + x*y*w + x*z*w + y*z*w"], F5)

    found = singular_points(surface)

    assert sorted(s.point for s in found) == [(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0)]
    assert {str(classify_rdp(s).rdp) for s in found} == {"A1"}


def test_smooth_quadric_has_no_singular_points(service):
    """x*y - z*w is smooth."""
    surface = Surface.from_strings(P3, ["x*y - z*w"], F5)

    assert service.singular_points(surface) == []


def test_sweep_respects_point_cap():
    """A sweep larger than DPK_POINT_SWEEP_CAP is refused before evaluation."""
    service = SingularityService(compute=ComputeSettings(DPK_POINT_SWEEP_CAP=10))
    surface = Surface.from_strings(P3, ["x*y - z^2"], F5)

    with pytest.raises(PointSweepLimitError, match="cap is 10"):
        service.singular_points(surface)


def test_local_singularity_rejects_points_off_the_surface(service):
    """Germs are only taken at points of the surface."""
    surface = Surface.from_strings(P3, ["x*y - z^2"], F5)

    with pytest.raises(NotAnRdpError, match="does not lie on the surface"):
        service.local_singularity(surface, (1, 1, 0, 0))


def test_local_singularity_translates_to_origin(service):
    """The germ at the vertex is the affine cone in the chart w = 1."""
    surface = Surface.from_strings(P3, ["x*y - z^2"], F5)

    germ = service.local_singularity(surface, (0, 0, 0, 3))

    assert germ.point == (0, 0, 0, 1)
    assert germ.local_equation.ring.variables == ("x", "y", "z")
    assert germ.local_equation == germ.local_equation.ring.parse("x*y - z^2")


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("source, expected, tau", [
    ("x*y + z^2", "A1", 1),
    ("x*y + z^4", "A3", 3),
    ("x*y + z^5", "A4", 5),
    ("x^2 + y^2*z + z^3", "D4", 4),
    ("x^2 + y^2*z + z^4", "D5", 5),
    ("z^2 + x^3 + y^4", "E6", 6),
    ("z^2 + x^3 + x*y^3", "E7", 7),
    ("z^2 + x^3 + y^5", "E8^0", 10),
    ("z^2 + x^3 + y^5 + x*y^4", "E8^1", 8),
])
def test_classification_in_characteristic_five(source, expected, tau):
    """Artin normal forms over F_5 classify to their own type."""
    result = _classify(source, 5)

    assert str(result.rdp) == expected
    assert result.tjurina == tau


@pytest.mark.parametrize("source, expected, tau", [
    ("x*y + z^3", "A2", 3),
    ("z^2 + x^3 + y^4", "E6^0", 9),
    ("z^2 + x^3 + y^4 + x^2*y^2", "E6^1", 7),
])
def test_classification_in_characteristic_three(source, expected, tau):
    """Characteristic 3 separates the E6 coindices by Tjurina number."""
    result = _classify(source, 3)

    assert str(result.rdp) == expected
    assert result.tjurina == tau


CATALOG_TYPES = [(p, t) for p in SUPPORTED_CHARACTERISTICS for t in catalog_types(p)]


@pytest.mark.parametrize("p, rdp", CATALOG_TYPES, ids=str)
def test_every_normal_form_classifies_to_its_own_type(p, rdp):
    """Each catalog normal form gives back its type, coindex and reference Tjurina number."""
    result = _classify(normal_form(rdp, p), p)

    assert result.rdp == rdp
    assert result.tjurina == tjurina_reference(rdp, p)


@st.composite
def coordinate_changes(draw, p):
    """Invertible linear part plus quadratic terms, fixing the origin."""
    matrix = [[draw(st.integers(0, p - 1)) for _ in range(3)] for _ in range(3)]
    (a, b, c), (d, e, f), (g, h, i) = matrix
    assume((a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % p)
    quadratic = [draw(st.integers(0, p - 1)) for _ in range(3)]
    return matrix, quadratic


@st.composite
def transformed_germs(draw):
    p = draw(st.sampled_from(SUPPORTED_CHARACTERISTICS))
    rdp = draw(st.sampled_from(catalog_types(p, max_rank=6)))
    matrix, quadratic = draw(coordinate_changes(p))
    germ = local_germ(normal_form(rdp, p), p)
    ring = germ.local_equation.ring
    names = LOCAL_VARIABLES
    images = {
        name: sum(
            (ring.variable(other) * int(m) for other, m in zip(names, row)),
            ring.variable(names[(k + 1) % 3]) ** 2 * int(q),
        )
        for k, (name, row, q) in enumerate(zip(names, matrix, quadratic))
    }
    moved = LocalSingularity(None, (0, 0, 0), germ.field, germ.local_equation.substitute(images))
    return p, rdp, moved


@pytest.mark.property
@settings(max_examples=30, deadline=None)
@given(transformed_germs())
def test_classification_survives_coordinate_changes(case):
    """Random linear and unipotent coordinate changes keep type and coindex."""
    p, rdp, moved = case

    assert SingularityService().classify_rdp(moved).rdp == rdp, f"p={p}"


def test_classification_is_coordinate_free():
    """A linear change of coordinates does not change the type."""
    assert str(_classify("(x + y)*(x - y) + z^5", 5).rdp) == "A4"
    assert str(_classify("x*z + y^2 + x*y", 5).rdp) == "A1"


def test_classification_records_corank_and_trace():
    """The result carries the quadratic corank and a readable trace."""
    result = _classify("x^2 + y^2*z + z^3", 5)

    assert result.corank == 2
    assert result.trace[0] == "quadratic rank 1"
    assert result.trace[-1] == "tjurina 4"
    assert str(result) == "D4"


@pytest.mark.parametrize("source, message", [
    ("x^3 + y^3 + z^3", "not a double point"),
    ("x + y^2", "smooth"),
    ("1 + x*y + z^2", "does not lie on the germ"),
    ("z^2 + x^4 + y^4", "vanishing cubic"),
])
def test_non_rdp_germs_are_rejected(source, message):
    """Triple points, smooth points and non-simple double points are not RDPs."""
    with pytest.raises(NotAnRdpError, match=message):
        _classify(source, 5)


def test_classify_germ_requires_three_variables(service):
    """Local equations live in three parameter-free variables."""
    ring = PolyRing(("x", "y"), F5)

    with pytest.raises(ServiceValidationError, match="three variables"):
        service.classify_germ(ring.parse("x*y"))


def test_tjurina_number_of_germs(service):
    """Tjurina numbers of a few normal forms."""
    assert tjurina_number(local_germ("x*y + z^5", 5)) == 5
    assert tjurina_number(local_germ("x*y + z^4", 5)) == 3
    assert service.tjurina_number(local_germ("x^2 + y^2*z + z^3", 5).local_equation) == 4
