"""
Singular points of del Pezzo models over finite fields and their ADE types.

Points are found by an exhaustive Jacobian sweep over the weight-1 charts.
At each singular point the surface germ is brought to a hypersurface in three
variables (by power-series elimination for surfaces cut out by several
equations) and classified:

* the quadratic part is diagonalised; corank 0 gives A_1,
* corank 1 reduces by the splitting lemma to a curve germ g(w) and
  A_n with n + 1 = ord g,
* corank 2 reduces to g(v, w) whose cubic part separates D_4, D_n and the
  E types,
* the Tjurina number fixes D_n and Artin's coindex and must agree with the
  reference value of the normal form.
"""

import itertools
import logging
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from typing import Callable, Dict, List, Literal, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.algebra.field import FieldSpec, finite_field
from src.algebra.linalg import inverse, rank, row_reduce
from src.algebra.polynomial import PolyRing, Polynomial
from src.config.logging import format_log_context, log_timing
from src.config.settings import ComputeSettings
from src.lattice.dynkin import DynkinComponent
from src.services.base_service import BaseService, ServiceResourceError, ServiceValidationError
from src.services.catalog_service import RdpCatalog, RdpType, get_catalog, tjurina_reference

logger = logging.getLogger(__name__)

AmbientKind = Literal["projective", "weighted", "affine"]
WEIGHTED_AMBIENTS = ((1, 1, 1, 2), (1, 1, 2, 3))
LOCAL_VARIABLES = ("x", "y", "z")
INITIAL_PRECISION = 12


class NotAnRdpError(ServiceValidationError):
    """Raised when a germ is smooth, not a double point, or not a simple singularity."""
    pass


class ClassificationConflictError(ServiceValidationError):
    """Raised when the normal-form reduction and the Tjurina number disagree."""
    pass


class UnsupportedChartError(ServiceValidationError):
    """Raised for points outside the weight-1 charts of a weighted ambient."""
    pass


class TjurinaStabilizationError(ServiceResourceError):
    """Raised when the Tjurina algebra does not stabilise below the configured degree."""
    pass


class PrecisionExhaustedError(TjurinaStabilizationError):
    """Raised when a truncated germ is not known to the degree a computation needs."""
    pass


class PointSweepLimitError(ServiceResourceError):
    """Raised when a point sweep would exceed the configured number of evaluations."""
    pass


@dataclass(frozen=True)
class AmbientSpace:
    """Projective space P^n, one of the weighted planes' covers, or affine 3-space."""

    kind: AmbientKind
    variables: Tuple[str, ...]
    weights: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        weights = tuple(self.weights) or (1,) * len(self.variables)
        object.__setattr__(self, "weights", weights)
        if len(weights) != len(self.variables):
            raise ServiceValidationError("one weight per variable is required")
        if self.kind == "projective":
            if not 4 <= len(self.variables) <= 7 or any(w != 1 for w in weights):
                raise ServiceValidationError("projective ambients are P^3 .. P^6 with unit weights")
        elif self.kind == "weighted":
            if weights not in WEIGHTED_AMBIENTS:
                raise ServiceValidationError(f"weighted ambient must be P{WEIGHTED_AMBIENTS[0]} or P{WEIGHTED_AMBIENTS[1]}")
        elif self.kind == "affine":
            if len(self.variables) != 3:
                raise ServiceValidationError("affine ambients have three variables")
        else:
            raise ServiceValidationError(f"unknown ambient kind {self.kind!r}")

    @property
    def dimension(self) -> int:
        return len(self.variables) - (0 if self.kind == "affine" else 1)

    @property
    def weight_one(self) -> List[int]:
        return [i for i, w in enumerate(self.weights) if w == 1]

    def weight_map(self) -> Dict[str, int]:
        return dict(zip(self.variables, self.weights))

    def chart_of(self, point: Sequence[int]) -> Optional[int]:
        """Index of the first nonzero weight-1 coordinate."""
        if self.kind == "affine":
            return None
        for i in self.weight_one:
            if point[i]:
                return i
        raise UnsupportedChartError(f"point {tuple(point)} lies outside the weight-1 charts")

    def normalize(self, point: Sequence[int], spec: FieldSpec) -> Tuple[int, ...]:
        """Representative with the chart coordinate equal to 1."""
        if self.kind == "affine":
            return tuple(point)
        ops = finite_field(spec)
        chart = self.chart_of(point)
        scale = ops.inverse(point[chart])
        return tuple(ops.mul(c, ops.power(scale, w)) for c, w in zip(point, self.weights))


@dataclass(frozen=True)
class Surface:
    """Equations of a surface in its ambient, all in one parameter-free ring."""

    ambient: AmbientSpace
    equations: Tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "equations", tuple(self.equations))
        if not self.equations:
            raise ServiceValidationError("a surface needs at least one equation")
        ring = self.equations[0].ring
        if ring.variables != self.ambient.variables or ring.params:
            raise ServiceValidationError("equations must live in the parameter-free ring of the ambient variables")

    @classmethod
    def from_strings(
        cls,
        ambient: AmbientSpace,
        equations: Sequence[str],
        spec: FieldSpec,
        values: Optional[Mapping[str, int]] = None,
    ) -> "Surface":
        """Parse equations, binding family parameters to the given field values."""
        ring = PolyRing(ambient.variables, spec)
        return cls(ambient, tuple(ring.parse_with(e, values or {}) for e in equations))

    @property
    def ring(self) -> PolyRing:
        return self.equations[0].ring

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    @property
    def is_hypersurface(self) -> bool:
        return len(self.equations) == 1

    def contains(self, point: Sequence[int]) -> bool:
        return all(eq.evaluate(point) == 0 for eq in self.equations)


@dataclass(frozen=True)
class LocalSingularity:
    """A singular point with its surface germ translated to the origin of three variables."""

    chart: Optional[str]
    point: Tuple[int, ...]
    field: FieldSpec
    local_equation: Polynomial
    precision: Optional[int] = None
    refine: Optional[Callable[[int], "LocalSingularity"]] = dataclass_field(default=None, compare=False, repr=False)

    def format_point(self) -> str:
        ops = finite_field(self.field)
        return "[" + ":".join(ops.format_element(c) for c in self.point) + "]"


@dataclass(frozen=True)
class ClassificationResult:
    """Outcome of classify_rdp with the reduction trace."""

    rdp: RdpType
    corank: int
    tjurina: int
    trace: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return str(self.rdp)


def _chart_points(ambient: AmbientSpace, q: int) -> List[Tuple[Optional[int], np.ndarray]]:
    n = len(ambient.variables)
    if ambient.kind == "affine":
        return [(None, np.indices((q,) * n).reshape(n, -1).T.astype(np.int64))]
    charts = []
    ones = ambient.weight_one
    for position, chart in enumerate(ones):
        fixed_zero = set(ones[:position])
        free = [i for i in range(n) if i != chart and i not in fixed_zero]
        grid = np.indices((q,) * len(free)).reshape(len(free), -1).T if free else np.zeros((1, 0), dtype=np.int64)
        points = np.zeros((grid.shape[0], n), dtype=np.int64)
        points[:, chart] = 1
        points[:, free] = grid
        charts.append((chart, points))
    return charts


def _diagonalize(S: List[List[int]], ops) -> Tuple[List[int], List[List[int]]]:
    """Congruence diagonalisation: returns diag and T with T^t S T diagonal (columns of T are the new basis)."""
    n = len(S)
    A = [row[:] for row in S]
    T = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def add_multiple(j: int, k: int, c: int) -> None:
        for r in range(n):
            A[r][j] = ops.add(A[r][j], ops.mul(c, A[r][k]))
        for col in range(n):
            A[j][col] = ops.add(A[j][col], ops.mul(c, A[k][col]))
        for r in range(n):
            T[r][j] = ops.add(T[r][j], ops.mul(c, T[r][k]))

    def swap(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in T:
            row[i], row[j] = row[j], row[i]

    for i in range(n):
        if A[i][i] == 0:
            j = next((j for j in range(i + 1, n) if A[j][j]), None)
            if j is not None:
                swap(i, j)
            else:
                j = next((j for j in range(i + 1, n) if A[i][j]), None)
                if j is None:
                    continue
                add_multiple(i, j, 1)
        for j in range(i + 1, n):
            if A[i][j]:
                add_multiple(j, i, ops.neg(ops.div(A[i][j], A[i][i])))
    return [A[i][i] for i in range(n)], T


def _monomials(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    result = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            exps = [0] * nvars
            for i in combo:
                exps[i] += 1
            result.append(tuple(exps))
    return result


def _quotient_dimension(generators: Sequence[Polynomial], degree: int) -> int:
    """dim k[x]/(I + m^{degree+1}) for the ideal I spanned by the generators."""
    ring = generators[0].ring
    nv = ring.nvars
    monomials = _monomials(nv, degree)
    index = {m: i for i, m in enumerate(monomials)}
    rows: List[Dict[int, int]] = []
    for g in generators:
        order = g.order()
        if order is None or order > degree:
            continue
        terms = [(k[:nv], c, sum(k[:nv])) for k, c in g.terms.items() if sum(k[:nv]) <= degree]
        for m in monomials:
            dm = sum(m)
            if dm + order > degree:
                break
            row = {}
            for key, c, dk in terms:
                if dk + dm <= degree:
                    row[index[tuple(a + b for a, b in zip(key, m))]] = c
            rows.append(row)
    if not rows:
        return len(monomials)
    matrix = np.zeros((len(rows), len(monomials)), dtype=np.int64)
    for r, row in enumerate(rows):
        for col, c in row.items():
            matrix[r, col] = c
    return len(monomials) - rank(matrix, ring.ops)


class SingularityService(BaseService):
    """Point sweeps, germ reduction and RDP classification."""

    def __init__(self, catalog: Optional[RdpCatalog] = None, compute: Optional[ComputeSettings] = None):
        super().__init__(compute)
        self.catalog = catalog or get_catalog(self.compute.resolve_data_dir())

    # -- point sweep -----------------------------------------------------

    def singular_points(self, surface: Surface) -> List[LocalSingularity]:
        """Every F_q-rational point of the surface where the chart Jacobian drops rank."""
        ambient = surface.ambient
        ops = surface.ring.ops
        charts = _chart_points(ambient, ops.q)
        total = sum(points.shape[0] for _, points in charts) * len(surface.equations)
        if total > self.compute.DPK_POINT_SWEEP_CAP:
            raise PointSweepLimitError(
                f"sweep needs {total} evaluations, cap is {self.compute.DPK_POINT_SWEEP_CAP}"
            )
        codim = ambient.dimension - 2
        found: List[LocalSingularity] = []
        with log_timing(self.logger, "Point sweep finished", field=str(surface.field), evaluations=total) as context:
            for chart, points in charts:
                mask = np.ones(points.shape[0], dtype=bool)
                for eq in surface.equations:
                    mask &= eq.evaluate_many(points) == 0
                on_surface = points[mask]
                if on_surface.shape[0] == 0:
                    continue
                chart_vars = [v for i, v in enumerate(ambient.variables) if i != chart]
                jac = np.stack([
                    np.stack([eq.partial_derivative(v).evaluate_many(on_surface) for v in chart_vars])
                    for eq in surface.equations
                ])
                for idx in range(on_surface.shape[0]):
                    if rank(jac[:, :, idx], ops) < codim:
                        point = tuple(int(c) for c in on_surface[idx])
                        found.append(self.local_singularity(surface, point))
            context["singular"] = len(found)
        return found

    # -- local germs -----------------------------------------------------

    def local_singularity(self, surface: Surface, point: Sequence[int], precision: Optional[int] = None) -> LocalSingularity:
        """Surface germ at a point, translated to the origin of the chart."""
        ambient = surface.ambient
        spec = surface.field
        point = ambient.normalize(point, spec)
        if not surface.contains(point):
            raise NotAnRdpError(f"point {point} does not lie on the surface")
        chart = ambient.chart_of(point)
        chart_vars = [v for i, v in enumerate(ambient.variables) if i != chart]
        chart_point = [c for i, c in enumerate(point) if i != chart]
        chart_name = ambient.variables[chart] if chart is not None else None

        if surface.is_hypersurface:
            local_ring = PolyRing(tuple(chart_vars), spec)
            mapping: Dict[str, Polynomial] = {v: local_ring.symbol(v) + local_ring.constant(c) for v, c in zip(chart_vars, chart_point)}
            if chart_name is not None:
                mapping[chart_name] = local_ring.one()
            germ = surface.equations[0].substitute(mapping, ring=local_ring)
            return LocalSingularity(chart_name, tuple(point), spec, germ)

        precision = precision or INITIAL_PRECISION
        translated_ring = PolyRing(tuple(chart_vars), spec)
        mapping = {v: translated_ring.symbol(v) + translated_ring.constant(c) for v, c in zip(chart_vars, chart_point)}
        if chart_name is not None:
            mapping[chart_name] = translated_ring.one()
        translated = [eq.substitute(mapping, ring=translated_ring) for eq in surface.equations]
        germ = self._eliminate(translated, precision)

        def refine(new_precision: int) -> LocalSingularity:
            return self.local_singularity(surface, point, new_precision)

        return LocalSingularity(chart_name, tuple(point), spec, germ, precision, refine)

    def _eliminate(self, equations: List[Polynomial], precision: int) -> Polynomial:
        """Solve n - 3 equations for n - 3 variables as power series; return the remaining germ."""
        ring = equations[0].ring
        ops = ring.ops
        n = ring.nvars
        linear = np.zeros((len(equations), n), dtype=np.int64)
        for i, eq in enumerate(equations):
            for key, c in eq.terms.items():
                if sum(key) == 1:
                    linear[i, key.index(1)] = c
        r = rank(linear, ops)
        if r < n - 3:
            raise NotAnRdpError(f"embedding dimension {n - r} exceeds 3")
        if r > n - 3:
            raise NotAnRdpError("point is smooth")
        _, columns = row_reduce(linear, ops)
        _, rows = row_reduce(linear.T, ops)
        eliminated = [ring.variables[c] for c in columns]
        free = tuple(v for v in ring.variables if v not in eliminated)
        block = linear[np.ix_(rows, columns)]
        block_inv = inverse(block, ops)
        local = PolyRing(free, ring.field)
        series = [local.zero() for _ in columns]
        chosen = [equations[i] for i in rows]
        for _ in range(precision + 2):
            mapping = {name: s for name, s in zip(eliminated, series)}
            mapping.update({v: local.symbol(v) for v in free})
            residuals = [eq.substitute(mapping, ring=local, truncate=precision) for eq in chosen]
            if all(res.is_zero() for res in residuals):
                break
            updated = []
            for k, s in enumerate(series):
                correction = local.zero()
                for j, res in enumerate(residuals):
                    if block_inv[k, j]:
                        correction = correction + res.scale(int(block_inv[k, j]))
                updated.append(s - correction)
            series = updated
        else:
            raise PrecisionExhaustedError("power-series elimination did not converge")
        mapping = {name: s for name, s in zip(eliminated, series)}
        mapping.update({v: local.symbol(v) for v in free})
        restricted = [
            eq.substitute(mapping, ring=local, truncate=precision)
            for i, eq in enumerate(equations)
            if i not in rows
        ]
        quadratic = [g for g in restricted if g.order() == 2]
        if not quadratic:
            orders = sorted(o for o in (g.order() for g in restricted) if o is not None)
            if orders and orders[0] == 1:
                raise NotAnRdpError("point is smooth")
            raise NotAnRdpError("surface germ is not a double point")
        return min(quadratic, key=len)

    # -- Tjurina number --------------------------------------------------

    def tjurina_number(self, f: Polynomial, precision: Optional[int] = None) -> int:
        """
        dim k[[x,y,z]]/(f, df), read off at the first degree D where the
        truncated quotient has the same dimension at D and D + 1.
        """
        max_degree = self.compute.DPK_TJURINA_MAX_DEGREE
        generators = [f] + f.gradient()
        previous = _quotient_dimension(generators, 0)
        for degree in range(1, max_degree + 1):
            if precision is not None and degree + 1 > precision:
                raise PrecisionExhaustedError(f"germ known to degree {precision}, Tjurina needs {degree + 1}")
            current = _quotient_dimension(generators, degree)
            if current == previous:
                self.logger.debug("Tjurina number stabilised %s", format_log_context(degree=degree, tau=current))
                return current
            previous = current
        raise TjurinaStabilizationError(f"Tjurina algebra did not stabilise by degree {max_degree}")

    # -- classification --------------------------------------------------

    def classify_rdp(self, singularity: LocalSingularity) -> ClassificationResult:
        """ADE type and Artin coindex of a surface double point."""
        current = singularity
        ladder = sorted({INITIAL_PRECISION, self.compute.DPK_TRUNCATION_DEGREE, self.compute.DPK_TJURINA_MAX_DEGREE + 2})
        while True:
            try:
                return self.classify_germ(current.local_equation, current.precision)
            except PrecisionExhaustedError:
                if current.refine is None or current.precision is None:
                    raise
                higher = [p for p in ladder if p > current.precision]
                if not higher:
                    raise
                self.logger.debug(
                    "Raising germ precision %s",
                    format_log_context(point=singularity.format_point(), precision=higher[0]),
                )
                current = current.refine(higher[0])

    def classify_germ(self, f: Polynomial, precision: Optional[int] = None) -> ClassificationResult:
        ring = f.ring
        if ring.nvars != 3 or ring.params:
            raise ServiceValidationError("local equations must be parameter-free in three variables")
        p = ring.field.p
        ops = ring.ops
        order = f.order()
        if order is None or order >= 3:
            raise NotAnRdpError("germ is not a double point")
        if order == 0:
            raise NotAnRdpError("origin does not lie on the germ")
        if order == 1:
            raise NotAnRdpError("germ is smooth")
        cap = self.compute.DPK_TRUNCATION_DEGREE
        if precision is not None:
            cap = min(cap, precision)
        trace: List[str] = []

        names = ring.variables
        quad = f.homogeneous_part(2)
        half = ops.inverse(ops.from_int(2))
        S = [[0] * 3 for _ in range(3)]
        for key, c in quad.terms.items():
            idx = [i for i in range(3) for _ in range(key[i])]
            if idx[0] == idx[1]:
                S[idx[0]][idx[0]] = c
            else:
                S[idx[0]][idx[1]] = S[idx[1]][idx[0]] = ops.mul(c, half)
        diag, T = _diagonalize(S, ops)
        order_idx = [i for i in range(3) if diag[i]] + [i for i in range(3) if not diag[i]]
        quad_rank = sum(1 for d in diag if d)
        corank = 3 - quad_rank
        trace.append(f"quadratic rank {quad_rank}")
        change = {}
        for r, name in enumerate(names):
            image = ring.zero()
            for m, j in enumerate(order_idx):
                if T[r][j]:
                    image = image + ring.symbol(names[m]).scale(T[r][j])
            change[name] = image
        g = f.substitute(change, truncate=cap)
        d = [diag[j] for j in order_idx]

        if corank == 0:
            base = DynkinComponent("A", 1)
        elif corank == 1:
            base = self._corank_one(g, d, names, cap, trace)
        else:
            base = self._corank_two(g, d, names, cap, trace)

        tau = self.tjurina_number(f, precision)
        trace.append(f"tjurina {tau}")
        rdp = self._resolve_coindex(base, tau, p)
        return ClassificationResult(rdp=rdp, corank=corank, tjurina=tau, trace=tuple(trace))

    def _split(self, f: Polynomial, solved: Sequence[str], diag: Sequence[int], cap: int) -> Polynomial:
        """Eliminate the nondegenerate variables by the splitting lemma (simplified Newton)."""
        ring = f.ring
        ops = ring.ops
        partials = [f.partial_derivative(v) for v in solved]
        scales = [ops.inverse(ops.add(d, d)) for d in diag]
        values = [ring.zero() for _ in solved]
        for _ in range(cap + 2):
            mapping = dict(zip(solved, values))
            residuals = [part.substitute(mapping, truncate=cap) for part in partials]
            if all(r.is_zero() for r in residuals):
                break
            values = [(v - r.scale(s)).truncate(cap) for v, r, s in zip(values, residuals, scales)]
        else:
            raise PrecisionExhaustedError("splitting lemma did not converge")
        return f.substitute(dict(zip(solved, values)), truncate=cap)

    def _corank_one(self, f: Polynomial, diag: Sequence[int], names: Sequence[str], cap: int, trace: List[str]) -> DynkinComponent:
        g = self._split(f, names[:2], diag[:2], cap)
        order = g.order()
        if order is None:
            raise PrecisionExhaustedError(f"residual curve germ vanishes to degree {cap}")
        trace.append(f"residual order {order}")
        return DynkinComponent("A", order - 1)

    def _corank_two(
        self, f: Polynomial, diag: Sequence[int], names: Sequence[str], cap: int, trace: List[str]
    ) -> Optional[DynkinComponent]:
        """Base type from the cubic term; None stands for D_n with n read off the Tjurina number."""
        ring = f.ring
        ops = ring.ops
        g = self._split(f, names[:1], diag[:1], cap)
        v, w = names[1], names[2]
        a = g.coefficient({v: 3})
        b = g.coefficient({v: 2, w: 1})
        c = g.coefficient({v: 1, w: 2})
        d = g.coefficient({w: 3})
        if not any((a, b, c, d)):
            raise NotAnRdpError("corank-2 germ with vanishing cubic term is not simple")
        k = ops.from_int
        mul, add, sub = ops.mul, ops.add, ops.sub

        def prod(*xs: int) -> int:
            out = 1
            for x in xs:
                out = mul(out, x)
            return out

        disc = prod(b, b, c, c)
        disc = sub(disc, prod(k(4), a, c, c, c))
        disc = sub(disc, prod(k(4), b, b, b, d))
        disc = sub(disc, prod(k(27), a, a, d, d))
        disc = add(disc, prod(k(18), a, b, c, d))
        hessian = (
            sub(prod(b, b), prod(k(3), a, c)),
            sub(prod(b, c), prod(k(9), a, d)),
            sub(prod(c, c), prod(k(3), b, d)),
        )
        if disc:
            trace.append("cubic with three distinct roots")
            return DynkinComponent("D", 4)
        if any(hessian):
            trace.append("cubic with a double root")
            return None

        trace.append("cubic is a cube")
        def cubic(x: int, y: int) -> int:
            return add(add(prod(a, x, x, x), prod(b, x, x, y)), add(prod(c, x, y, y), prod(d, y, y, y)))

        candidates = [(1, t) for t in range(ops.q)] + [(0, 1)]
        roots = [(x, y) for x, y in candidates if cubic(x, y) == 0]
        if len(roots) != 1:
            raise ClassificationConflictError(f"expected one triple root of the cubic, found {len(roots)}")
        alpha, beta = roots[0]
        if beta:
            inv_beta = ops.inverse(beta)
            new_v = (ring.symbol(v) + ring.symbol(w).scale(alpha)).scale(inv_beta)
            new_w = ring.symbol(w)
        else:
            new_v = ring.symbol(w)
            new_w = -ring.symbol(v)
        h = g.substitute({v: new_v, w: new_w}, truncate=cap)
        if h.coefficient({w: 4}):
            return DynkinComponent("E", 6)
        if h.coefficient({v: 1, w: 3}):
            return DynkinComponent("E", 7)
        if h.coefficient({w: 5}):
            return DynkinComponent("E", 8)
        raise NotAnRdpError("cubic-cone germ is not of type E_6, E_7 or E_8")

    def _resolve_coindex(self, base: Optional[DynkinComponent], tau: int, p: int) -> RdpType:
        if base is None:
            if tau < 5:
                raise ClassificationConflictError(f"double-root cubic needs D_n with n >= 5, Tjurina number is {tau}")
            base = DynkinComponent("D", tau)
        options = self.catalog.coindices(base, p)
        if options:
            matches = [r for r in options if tjurina_reference(RdpType(base, r), p, self.catalog) == tau]
            if len(matches) != 1:
                raise ClassificationConflictError(
                    f"Tjurina number {tau} matches {len(matches)} coindices of {base} in characteristic {p}"
                )
            return RdpType(base, matches[0])
        expected = tjurina_reference(RdpType(base), p, self.catalog)
        if expected != tau:
            raise ClassificationConflictError(
                f"{base} in characteristic {p} has Tjurina number {expected}, germ has {tau}"
            )
        return RdpType(base)


def singular_points(surface: Surface) -> List[LocalSingularity]:
    return SingularityService().singular_points(surface)


def classify_rdp(singularity: LocalSingularity) -> ClassificationResult:
    return SingularityService().classify_rdp(singularity)


def tjurina_number(singularity: LocalSingularity) -> int:
    service = SingularityService()
    current = singularity
    while True:
        try:
            return service.tjurina_number(current.local_equation, current.precision)
        except PrecisionExhaustedError:
            if current.refine is None or current.precision is None or current.precision > service.compute.DPK_TJURINA_MAX_DEGREE:
                raise
            current = current.refine(service.compute.DPK_TJURINA_MAX_DEGREE + 2)


def local_germ(source: str, p: int) -> LocalSingularity:
    """Germ at the origin of a local equation in x, y, z over F_p."""
    ring = PolyRing(LOCAL_VARIABLES, FieldSpec(p))
    return LocalSingularity(None, (0, 0, 0), ring.field, ring.parse(source))


__all__ = [
    "NotAnRdpError",
    "ClassificationConflictError",
    "UnsupportedChartError",
    "TjurinaStabilizationError",
    "PrecisionExhaustedError",
    "PointSweepLimitError",
    "AmbientSpace",
    "Surface",
    "LocalSingularity",
    "ClassificationResult",
    "SingularityService",
    "singular_points",
    "classify_rdp",
    "tjurina_number",
    "local_germ",
]
