"""Linear-system assembly for the three space-time DG schemes.

All three schemes seek, per space-time element, output weights of the local
random basis.  Rows are Galerkin equations (one per test feature) plus, for
the collocation schemes, pointwise constraint rows.  The assembled operator
is kept in block form: one dense (test-width x trial-width) block per coupled
element pair, which both materializes to the documented dense layout and
feeds the structured least-squares path without ever forming the full matrix.

Bilinear forms.  With jumps/averages as in :mod:`dvwave.mesh` and data moved
to the right-hand side, the penalty scheme reads

    B(u, v) = -(u_t, v_t) + (gamma u_t, v) + (eta grad u_t, grad v)
              + (xi^2 grad u, grad v)
              - sum_K [ u(0) v_t(0) + beta1 u(0) v(0) ]                (t = 0)
              - sum_int ( [u]{v_t} + [v]{u_t} - beta1 [u][v] )         (0 < t_k < T)
              + sum_K u_t(T) v(T)                                     (t = T)
              - <eta [[v]], {grad u_t}>_{all faces}
              - <xi^2 [[u]], {grad v}>_{int+D} - <xi^2 [[v]], {grad u}>_{int+D}
              + <xi^2 kappa u, v>_{R} + <beta2 xi^2 [[u]], [[v]]>_{int+D}

    l(v)    = (f, v) - sum_K [ u0 v_t(0) - w0 v(0) + beta1 u0 v(0) ]
              - <xi^2 g_D n, grad v>_D + <beta2 xi^2 g_D, v>_D
              + <xi^2 g_N, v>_N + <xi^2 g_R, v>_R

The C0 variant keeps the volume terms, the upwind-style temporal trace
(-sum_int [v]{u_t} + sum_K u_t(T) v(T) with w0 data at t = 0), the eta face
term, -<xi^2 [[v]], {grad u}> on interior+Dirichlet faces and the Robin mass
term, and enforces continuity/initial/Dirichlet conditions at collocation
points.  The C1 variant keeps each element's own weak form (one-sided traces
everywhere) and adds first-order continuity constraint points.

Neumann/Robin data substitute into boundary flux terms; for the per-element
scheme this needs time derivatives of g_N/g_R, obtained by differentiating
the boundary conditions in time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .basis import EvalTable, LocalRnnBasis
from .mesh import FaceKind, SpaceTimeMesh, TimeNodeKind
from .problem import DvweProblem, ProblemError
from .quadrature import QuadratureRule, face_rule, gauss_1d, tensor_rule


class AssemblyError(ValueError):
    pass


class Scheme(Enum):
    LRNN_DG = "lrnn_dg"
    LRNN_C0DG = "lrnn_c0dg"
    LRNN_C1DG = "lrnn_c1dg"


class RowTag(Enum):
    GALERKIN = "galerkin"
    CONSTRAINT_SPATIAL_C0 = "constraint_spatial_c0"
    CONSTRAINT_TEMPORAL_C0 = "constraint_temporal_c0"
    CONSTRAINT_SPATIAL_C1 = "constraint_spatial_c1"
    CONSTRAINT_TEMPORAL_C1 = "constraint_temporal_c1"
    CONSTRAINT_INITIAL = "constraint_initial"
    CONSTRAINT_DIRICHLET = "constraint_dirichlet"


CONSTRAINT_TAG_ORDER = (
    RowTag.CONSTRAINT_SPATIAL_C0,
    RowTag.CONSTRAINT_TEMPORAL_C0,
    RowTag.CONSTRAINT_SPATIAL_C1,
    RowTag.CONSTRAINT_TEMPORAL_C1,
    RowTag.CONSTRAINT_INITIAL,
    RowTag.CONSTRAINT_DIRICHLET,
)


@dataclass(frozen=True)
class MethodConfig:
    """Scheme selection plus the per-scheme tuning knobs."""

    scheme: Scheme
    beta1: float = 0.0
    beta2: float = 0.0
    quad_points: int = 9
    colloc_spatial: int = 13     # per face axis, collocation schemes only
    colloc_temporal: int = 13
    colloc_initial: int = 13
    colloc_dirichlet: int = 13
    constraint_weight: float = 1.0

    def __post_init__(self):
        if self.beta1 < 0 or self.beta2 < 0:
            raise AssemblyError("penalty parameters must be nonnegative")
        if self.scheme is not Scheme.LRNN_DG:
            for name in ("colloc_spatial", "colloc_temporal",
                         "colloc_initial", "colloc_dirichlet"):
                if getattr(self, name) < 1:
                    raise AssemblyError(f"{name} must be >= 1 for {self.scheme.value}")
        if self.quad_points < 1:
            raise AssemblyError("quadrature order must be >= 1")


@dataclass
class ConstraintRow:
    """One collocation equation; entries couple at most two elements."""

    tag: RowTag
    entries: tuple[tuple[int, np.ndarray], ...]
    rhs: float


@dataclass
class AssembledSystem:
    """Block-stored rectangular system (Galerkin rows + constraint rows).

    Column j of element e maps to global index offsets[e] + j; Galerkin rows
    use the same layout, followed by constraint rows grouped in the order of
    ``CONSTRAINT_TAG_ORDER``.
    """

    scheme: Scheme
    widths: list[int]
    blocks: dict[tuple[int, int], np.ndarray]
    galerkin_rhs: list[np.ndarray]
    constraints: list[ConstraintRow] = field(default_factory=list)

    def __post_init__(self):
        self.offsets = np.concatenate([[0], np.cumsum(self.widths)]).astype(int)

    @property
    def n_elements(self) -> int:
        return len(self.widths)

    @property
    def n_columns(self) -> int:
        return int(self.offsets[-1])

    @property
    def n_galerkin_rows(self) -> int:
        return int(self.offsets[-1])

    @property
    def n_rows(self) -> int:
        return self.n_galerkin_rows + len(self.constraints)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_columns)

    def sorted_constraints(self) -> list[ConstraintRow]:
        order = {tag: i for i, tag in enumerate(CONSTRAINT_TAG_ORDER)}
        return sorted(self.constraints, key=lambda row: order[row.tag])

    def row_tags(self):
        """Provenance tag per dense row, in dense row order."""
        tags = []
        for e, width in enumerate(self.widths):
            tags.extend((RowTag.GALERKIN, e, i) for i in range(width))
        tags.extend((row.tag,) for row in self.sorted_constraints())
        return tags

    def to_dense(self, max_entries: int = 400_000_000):
        """Materialize (matrix, rhs) in the documented dense layout."""
        rows, cols = self.shape
        if rows * cols > max_entries:
            raise MemoryError(
                f"dense system would hold {rows * cols} entries; "
                "use the block interface instead")
        A = np.zeros((rows, cols))
        b = np.zeros(rows)
        off = self.offsets
        for (et, eu), block in self.blocks.items():
            A[off[et]:off[et + 1], off[eu]:off[eu + 1]] = block
        for e, vec in enumerate(self.galerkin_rhs):
            b[off[e]:off[e + 1]] = vec
        r = self.n_galerkin_rows
        for row in self.sorted_constraints():
            for e, vec in row.entries:
                A[r, off[e]:off[e + 1]] = vec
            b[r] = row.rhs
            r += 1
        return A, b

    def matvec(self, u: np.ndarray) -> np.ndarray:
        """A @ u without materializing A."""
        u = np.asarray(u, dtype=float)
        out = np.zeros(self.n_rows)
        off = self.offsets
        for (et, eu), block in self.blocks.items():
            out[off[et]:off[et + 1]] += block @ u[off[eu]:off[eu + 1]]
        r = self.n_galerkin_rows
        for row in self.sorted_constraints():
            out[r] = sum(vec @ u[off[e]:off[e + 1]] for e, vec in row.entries)
            r += 1
        return out

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        """A.T @ y without materializing A."""
        y = np.asarray(y, dtype=float)
        out = np.zeros(self.n_columns)
        off = self.offsets
        for (et, eu), block in self.blocks.items():
            out[off[eu]:off[eu + 1]] += block.T @ y[off[et]:off[et + 1]]
        r = self.n_galerkin_rows
        for row in self.sorted_constraints():
            for e, vec in row.entries:
                out[off[e]:off[e + 1]] += vec * y[r]
            r += 1
        return out

    def rhs_vector(self) -> np.ndarray:
        b = np.zeros(self.n_rows)
        off = self.offsets
        for e, vec in enumerate(self.galerkin_rhs):
            b[off[e]:off[e + 1]] = vec
        r = self.n_galerkin_rows
        for row in self.sorted_constraints():
            b[r] = row.rhs
            r += 1
        return b

    def constraint_residual(self, u: np.ndarray) -> float:
        """|A2 u - L2| / |L2| over the constraint rows (0 if none)."""
        if not self.constraints:
            return 0.0
        off = self.offsets
        res = []
        rhs = []
        for row in self.sorted_constraints():
            val = sum(vec @ u[off[e]:off[e + 1]] for e, vec in row.entries)
            res.append(val - row.rhs)
            rhs.append(row.rhs)
        res = np.asarray(res)
        rhs = np.asarray(rhs)
        denom = max(float(np.linalg.norm(rhs)), np.finfo(float).tiny)
        return float(np.linalg.norm(res) / denom)

    def split_solution(self, u: np.ndarray) -> list[np.ndarray]:
        off = self.offsets
        return [u[off[e]:off[e + 1]].copy() for e in range(self.n_elements)]

    def dump_text(self, path, include_rhs: bool = False):
        """Debug dump: header 'rows cols', then whitespace-separated rows.

        The rhs is appended as a final column when ``include_rhs`` is set.
        """
        A, b = self.to_dense()
        data = np.concatenate([A, b[:, None]], axis=1) if include_rhs else A
        with open(path, "w") as fh:
            fh.write(f"{A.shape[0]} {A.shape[1]}\n")
            np.savetxt(fh, data, fmt="%.17g")


# -- assembly helpers ----------------------------------------------------------


def _inner(test: np.ndarray, trial: np.ndarray, scal: np.ndarray) -> np.ndarray:
    """sum_p scal_p test_p,i trial_p,j -> (M_test, M_trial) or (M_test,)."""
    if trial.ndim == 1:
        return test.T @ (scal * trial)
    return test.T @ (scal[:, None] * trial)


class _BasisTrial:
    """Trial side = the same local bases as the test side."""

    def __init__(self, bases):
        self.bases = bases

    def tables(self, element_id: int, points, test_table: EvalTable | None = None):
        if test_table is not None:
            return test_table
        return self.bases[element_id].eval(points)


class _ExactTrial:
    """Trial side = an exact solution injected analytically."""

    def __init__(self, exact):
        self.exact = exact

    def tables(self, element_id: int, points, test_table=None):
        pts = np.atleast_2d(points)
        grad = self.exact.grad(pts)
        grad_dt = self.exact.grad_dt(pts)
        d = grad.shape[1]
        return EvalTable(
            value=self.exact.value(pts),
            dt=self.exact.dt(pts),
            grad=tuple(grad[:, k] for k in range(d)),
            dt_grad=tuple(grad_dt[:, k] for k in range(d)),
        )


class _Accumulator:
    """Collects block contributions; vector mode serves exact injection."""

    def __init__(self, widths, vector_mode: bool):
        self.vector_mode = vector_mode
        self.blocks: dict[tuple[int, int], np.ndarray] = {}
        self.rhs = [np.zeros(w) for w in widths]
        self.widths = widths

    def add(self, test_e: int, trial_e: int, value: np.ndarray):
        if self.vector_mode:
            # B(u*, phi) lands next to the rhs of the same test element
            key = (test_e, 0)
        else:
            key = (test_e, trial_e)
        if key in self.blocks:
            self.blocks[key] += value
        else:
            self.blocks[key] = np.array(value, dtype=float)

    def add_rhs(self, test_e: int, vec: np.ndarray):
        self.rhs[test_e] += vec


def _spatial_coords(points: np.ndarray) -> np.ndarray:
    return np.atleast_2d(points)[:, 1:]


def _check_boundary_data(mesh: SpaceTimeMesh, problem: DvweProblem,
                         need_dt: bool):
    kinds = {f.kind for f in mesh.spatial_faces if f.kind is not FaceKind.INTERIOR}
    for kind in kinds:
        problem.require_boundary_data(kind, need_dt=need_dt)


def _volume_terms(mesh, bases, problem, config, trial, acc):
    """Shared volume block: -(u_t, v_t) + (gamma u_t, v) + (eta grad u_t, grad v)
    + (xi^2 grad u, grad v), and the (f, v) load."""
    n = config.quad_points
    for element in mesh.elements:
        e = element.index
        rule = tensor_rule(n, element.bounds)
        w = rule.weights
        test = bases[e].eval(rule.points)
        tr = trial.tables(e, rule.points, test if isinstance(trial, _BasisTrial) else None)
        x = _spatial_coords(rule.points)
        gam = problem.gamma(x)
        eta = problem.eta(x)
        xi2 = problem.xi(x) ** 2
        block = -_inner(test.dt, tr.dt, w)
        block += _inner(test.value, tr.dt, gam * w)
        for k in range(mesh.dim):
            block += _inner(test.grad[k], tr.dt_grad[k], eta * w)
            block += _inner(test.grad[k], tr.grad[k], xi2 * w)
        acc.add(e, e, block)
        acc.add_rhs(e, test.value.T @ (w * problem.f(rule.points)))


def _temporal_terms(mesh, bases, problem, config, trial, acc, scheme: Scheme):
    """Temporal interface coupling for the summed (DG / C0) forms."""
    n = config.quad_points
    beta1 = config.beta1
    include_u_terms = scheme is Scheme.LRNN_DG
    for iface in mesh.temporal_interfaces:
        rule = face_rule(iface, n)
        w = rule.weights
        x = _spatial_coords(rule.points)

        if iface.kind is TimeNodeKind.INITIAL:
            e = iface.upper_element
            test = bases[e].eval(rule.points)
            tr = trial.tables(e, rule.points,
                              test if isinstance(trial, _BasisTrial) else None)
            u0 = problem.u0(x)
            w0 = problem.w0(x)
            if include_u_terms:
                # -u(0) v_t(0) - beta1 u(0) v(0);  data: -u0 v_t + w0 v - beta1 u0 v
                acc.add(e, e, -_inner(test.dt, tr.value, w)
                        - beta1 * _inner(test.value, tr.value, w))
                acc.add_rhs(e, test.dt.T @ (w * (-u0))
                            + test.value.T @ (w * (w0 - beta1 * u0)))
            else:
                acc.add_rhs(e, test.value.T @ (w * w0))
            continue

        if iface.kind is TimeNodeKind.FINAL:
            e = iface.lower_element
            test = bases[e].eval(rule.points)
            tr = trial.tables(e, rule.points,
                              test if isinstance(trial, _BasisTrial) else None)
            acc.add(e, e, _inner(test.value, tr.dt, w))   # + u_t(T) v(T)
            continue

        eu, el = iface.upper_element, iface.lower_element
        test_u = bases[eu].eval(rule.points)
        test_l = bases[el].eval(rule.points)
        tr_u = trial.tables(eu, rule.points,
                            test_u if isinstance(trial, _BasisTrial) else None)
        tr_l = trial.tables(el, rule.points,
                            test_l if isinstance(trial, _BasisTrial) else None)
        # -[v]{u_t}: jump of the test trace against the mean time derivative
        for t_tab, t_sign, t_e in ((test_u, 1.0, eu), (test_l, -1.0, el)):
            for u_tab, u_e in ((tr_u, eu), (tr_l, el)):
                acc.add(t_e, u_e, -0.5 * t_sign * _inner(t_tab.value, u_tab.dt, w))
        if include_u_terms:
            # -[u]{v_t} and + beta1 [u][v]
            for t_tab, t_sign, t_e in ((test_u, 1.0, eu), (test_l, -1.0, el)):
                for u_tab, u_sign, u_e in ((tr_u, 1.0, eu), (tr_l, -1.0, el)):
                    acc.add(t_e, u_e,
                            -0.5 * u_sign * _inner(t_tab.dt, u_tab.value, w)
                            + beta1 * t_sign * u_sign
                            * _inner(t_tab.value, u_tab.value, w))


def _spatial_face_terms(mesh, bases, problem, config, trial, acc, scheme: Scheme):
    """Spatial face coupling for the summed (DG / C0) forms."""
    n = config.quad_points
    beta2 = config.beta2
    symmetrize = scheme is Scheme.LRNN_DG
    for face in mesh.spatial_faces:
        rule = face_rule(face, n)
        w = rule.weights
        x = _spatial_coords(rule.points)
        eta = problem.eta(x)
        xi2 = problem.xi(x) ** 2
        a = face.axis
        s = face.normal_sign

        if face.kind is FaceKind.INTERIOR:
            ep, em = face.plus_element, face.minus_element
            test_p = bases[ep].eval(rule.points)
            test_m = bases[em].eval(rule.points)
            tr_p = trial.tables(ep, rule.points,
                                test_p if isinstance(trial, _BasisTrial) else None)
            tr_m = trial.tables(em, rule.points,
                                test_m if isinstance(trial, _BasisTrial) else None)
            sides = ((test_p, tr_p, 1.0, ep), (test_m, tr_m, -1.0, em))
            for t_tab, _, t_sign, t_e in sides:
                for _, u_tab, u_sign, u_e in sides:
                    # -eta [[v]].{grad u_t}
                    block = -0.5 * s * t_sign * _inner(
                        t_tab.value, u_tab.dt_grad[a], eta * w)
                    # -xi^2 [[v]].{grad u}
                    block += -0.5 * s * t_sign * _inner(
                        t_tab.value, u_tab.grad[a], xi2 * w)
                    if symmetrize:
                        # -xi^2 [[u]].{grad v} and + beta2 xi^2 [[u]].[[v]]
                        block += -0.5 * s * u_sign * _inner(
                            t_tab.grad[a], u_tab.value, xi2 * w)
                        block += beta2 * t_sign * u_sign * _inner(
                            t_tab.value, u_tab.value, xi2 * w)
                    acc.add(t_e, u_e, block)
            continue

        e = face.plus_element
        test = bases[e].eval(rule.points)
        tr = trial.tables(e, rule.points,
                          test if isinstance(trial, _BasisTrial) else None)
        # -eta [[v]].{grad u_t} with one-sided traces, all boundary kinds
        block = -s * _inner(test.value, tr.dt_grad[a], eta * w)

        if face.kind is FaceKind.DIRICHLET:
            block += -s * _inner(test.value, tr.grad[a], xi2 * w)
            if symmetrize:
                block += -s * _inner(test.grad[a], tr.value, xi2 * w)
                block += beta2 * _inner(test.value, tr.value, xi2 * w)
                g_d = problem.g_dirichlet(rule.points)
                acc.add_rhs(e, test.grad[a].T @ (xi2 * w * (-s) * g_d)
                            + test.value.T @ (xi2 * w * beta2 * g_d))
        elif face.kind is FaceKind.NEUMANN:
            g_n = problem.g_neumann(rule.points, face.normal)
            acc.add_rhs(e, test.value.T @ (xi2 * w * g_n))
        elif face.kind is FaceKind.ROBIN:
            kap = problem.kappa(x)
            block += _inner(test.value, tr.value, xi2 * kap * w)
            g_r = problem.g_robin(rule.points, face.normal)
            acc.add_rhs(e, test.value.T @ (xi2 * w * g_r))
        acc.add(e, e, block)


def _elementwise_terms(mesh, bases, problem, config, trial, acc):
    """Per-element weak form of the C1 scheme (own traces, data substitution)."""
    n = config.quad_points
    # own temporal traces
    for iface in mesh.temporal_interfaces:
        rule = face_rule(iface, n)
        w = rule.weights
        if iface.upper_element is not None:
            e = iface.upper_element
            test = bases[e].eval(rule.points)
            if iface.kind is TimeNodeKind.INITIAL:
                w0 = problem.w0(_spatial_coords(rule.points))
                acc.add_rhs(e, test.value.T @ (w * w0))
            else:
                tr = trial.tables(e, rule.points,
                                  test if isinstance(trial, _BasisTrial) else None)
                acc.add(e, e, -_inner(test.value, tr.dt, w))
        if iface.lower_element is not None:
            e = iface.lower_element
            test = bases[e].eval(rule.points)
            tr = trial.tables(e, rule.points,
                              test if isinstance(trial, _BasisTrial) else None)
            acc.add(e, e, _inner(test.value, tr.dt, w))
    # own spatial flux traces
    for face in mesh.spatial_faces:
        rule = face_rule(face, n)
        w = rule.weights
        x = _spatial_coords(rule.points)
        eta = problem.eta(x)
        xi2 = problem.xi(x) ** 2
        a = face.axis
        adjacent = [(face.plus_element, face.normal_sign)]
        if face.minus_element is not None:
            adjacent.append((face.minus_element, -face.normal_sign))
        for e, s in adjacent:
            test = bases[e].eval(rule.points)
            if face.kind is FaceKind.NEUMANN:
                g_n = problem.g_neumann(rule.points, face.normal)
                dt_g_n = problem.dt_g_neumann(rule.points, face.normal)
                acc.add_rhs(e, test.value.T @ (w * (eta * dt_g_n + xi2 * g_n)))
            elif face.kind is FaceKind.ROBIN:
                kap = problem.kappa(x)
                tr = trial.tables(e, rule.points,
                                  test if isinstance(trial, _BasisTrial) else None)
                acc.add(e, e, _inner(test.value, tr.dt, eta * kap * w)
                        + _inner(test.value, tr.value, xi2 * kap * w))
                g_r = problem.g_robin(rule.points, face.normal)
                dt_g_r = problem.dt_g_robin(rule.points, face.normal)
                acc.add_rhs(e, test.value.T @ (w * (eta * dt_g_r + xi2 * g_r)))
            else:
                # interior and Dirichlet facets keep the element's own trace
                tr = trial.tables(e, rule.points,
                                  test if isinstance(trial, _BasisTrial) else None)
                acc.add(e, e, -s * (_inner(test.value, tr.dt_grad[a], eta * w)
                                    + _inner(test.value, tr.grad[a], xi2 * w)))


# -- collocation constraints ----------------------------------------------------


def _colloc_points(face_like, n_per_axis: int) -> np.ndarray:
    return face_rule(face_like, n_per_axis).points


def _constraint_rows(mesh, bases, problem, config, scheme) -> list[ConstraintRow]:
    rows: list[ConstraintRow] = []
    weight = config.constraint_weight
    want_c1 = scheme is Scheme.LRNN_C1DG

    for face in mesh.interior_spatial_faces():
        pts = _colloc_points(face, config.colloc_spatial)
        tp = bases[face.plus_element].eval(pts)
        tm = bases[face.minus_element].eval(pts)
        for p in range(pts.shape[0]):
            rows.append(ConstraintRow(
                tag=RowTag.CONSTRAINT_SPATIAL_C0,
                entries=((face.plus_element, weight * tp.value[p]),
                         (face.minus_element, -weight * tm.value[p])),
                rhs=0.0))
        if want_c1:
            for p in range(pts.shape[0]):
                for k in range(mesh.dim):
                    rows.append(ConstraintRow(
                        tag=RowTag.CONSTRAINT_SPATIAL_C1,
                        entries=((face.plus_element, weight * tp.grad[k][p]),
                                 (face.minus_element, -weight * tm.grad[k][p])),
                        rhs=0.0))

    for iface in mesh.temporal_interfaces:
        if iface.kind is TimeNodeKind.INTERIOR:
            pts = _colloc_points(iface, config.colloc_temporal)
            tu = bases[iface.upper_element].eval(pts)
            tl = bases[iface.lower_element].eval(pts)
            for p in range(pts.shape[0]):
                rows.append(ConstraintRow(
                    tag=RowTag.CONSTRAINT_TEMPORAL_C0,
                    entries=((iface.upper_element, weight * tu.value[p]),
                             (iface.lower_element, -weight * tl.value[p])),
                    rhs=0.0))
            if want_c1:
                for p in range(pts.shape[0]):
                    rows.append(ConstraintRow(
                        tag=RowTag.CONSTRAINT_TEMPORAL_C1,
                        entries=((iface.upper_element, weight * tu.dt[p]),
                                 (iface.lower_element, -weight * tl.dt[p])),
                        rhs=0.0))
        elif iface.kind is TimeNodeKind.INITIAL:
            pts = _colloc_points(iface, config.colloc_initial)
            tu = bases[iface.upper_element].eval(pts)
            u0 = problem.u0(_spatial_coords(pts))
            for p in range(pts.shape[0]):
                rows.append(ConstraintRow(
                    tag=RowTag.CONSTRAINT_INITIAL,
                    entries=((iface.upper_element, weight * tu.value[p]),),
                    rhs=weight * float(u0[p])))

    for face in mesh.boundary_faces(FaceKind.DIRICHLET):
        pts = _colloc_points(face, config.colloc_dirichlet)
        tp = bases[face.plus_element].eval(pts)
        g_d = problem.g_dirichlet(pts)
        for p in range(pts.shape[0]):
            rows.append(ConstraintRow(
                tag=RowTag.CONSTRAINT_DIRICHLET,
                entries=((face.plus_element, weight * tp.value[p]),),
                rhs=weight * float(g_d[p])))

    return rows


# -- public entry points ---------------------------------------------------------


def _widths(bases) -> list[int]:
    return [b.n_features for b in bases]


def assemble_lrnn_dg(mesh: SpaceTimeMesh, bases, problem: DvweProblem,
                     config: MethodConfig) -> AssembledSystem:
    """Square Galerkin system of the penalty scheme."""
    if config.scheme is not Scheme.LRNN_DG:
        raise AssemblyError(f"config selects {config.scheme}, not LRNN_DG")
    _check_boundary_data(mesh, problem, need_dt=False)
    trial = _BasisTrial(bases)
    acc = _Accumulator(_widths(bases), vector_mode=False)
    _volume_terms(mesh, bases, problem, config, trial, acc)
    _temporal_terms(mesh, bases, problem, config, trial, acc, Scheme.LRNN_DG)
    _spatial_face_terms(mesh, bases, problem, config, trial, acc, Scheme.LRNN_DG)
    return AssembledSystem(scheme=Scheme.LRNN_DG, widths=_widths(bases),
                           blocks=acc.blocks, galerkin_rhs=acc.rhs)


def assemble_lrnn_c0dg(mesh: SpaceTimeMesh, bases, problem: DvweProblem,
                       config: MethodConfig) -> AssembledSystem:
    """Reduced Galerkin block plus C0/initial/Dirichlet collocation rows."""
    if config.scheme is not Scheme.LRNN_C0DG:
        raise AssemblyError(f"config selects {config.scheme}, not LRNN_C0DG")
    _check_boundary_data(mesh, problem, need_dt=False)
    if any(f.kind is FaceKind.DIRICHLET for f in mesh.spatial_faces) \
            and problem.g_dirichlet is None:
        raise ProblemError("Dirichlet collocation requires g_dirichlet")
    trial = _BasisTrial(bases)
    acc = _Accumulator(_widths(bases), vector_mode=False)
    _volume_terms(mesh, bases, problem, config, trial, acc)
    _temporal_terms(mesh, bases, problem, config, trial, acc, Scheme.LRNN_C0DG)
    _spatial_face_terms(mesh, bases, problem, config, trial, acc, Scheme.LRNN_C0DG)
    rows = _constraint_rows(mesh, bases, problem, config, Scheme.LRNN_C0DG)
    return AssembledSystem(scheme=Scheme.LRNN_C0DG, widths=_widths(bases),
                           blocks=acc.blocks, galerkin_rhs=acc.rhs,
                           constraints=rows)


def assemble_lrnn_c1dg(mesh: SpaceTimeMesh, bases, problem: DvweProblem,
                       config: MethodConfig) -> AssembledSystem:
    """Per-element weak forms plus C1 continuity collocation rows."""
    if config.scheme is not Scheme.LRNN_C1DG:
        raise AssemblyError(f"config selects {config.scheme}, not LRNN_C1DG")
    _check_boundary_data(mesh, problem, need_dt=True)
    trial = _BasisTrial(bases)
    acc = _Accumulator(_widths(bases), vector_mode=False)
    _volume_terms(mesh, bases, problem, config, trial, acc)
    _elementwise_terms(mesh, bases, problem, config, trial, acc)
    rows = _constraint_rows(mesh, bases, problem, config, Scheme.LRNN_C1DG)
    return AssembledSystem(scheme=Scheme.LRNN_C1DG, widths=_widths(bases),
                           blocks=acc.blocks, galerkin_rhs=acc.rhs,
                           constraints=rows)


ASSEMBLERS = {
    Scheme.LRNN_DG: assemble_lrnn_dg,
    Scheme.LRNN_C0DG: assemble_lrnn_c0dg,
    Scheme.LRNN_C1DG: assemble_lrnn_c1dg,
}


def assemble(mesh, bases, problem, config) -> AssembledSystem:
    return ASSEMBLERS[config.scheme](mesh, bases, problem, config)


def consistency_residual(problem: DvweProblem, mesh: SpaceTimeMesh, bases,
                         config: MethodConfig) -> float:
    """max_i |B(u*, phi_i) - l(phi_i)| / max(|B_i|, |l_i|, 1).

    The exact solution enters analytically at the quadrature points, so for a
    consistent scheme the residual is pure quadrature error.
    """
    if problem.exact is None:
        raise ProblemError("consistency residual needs an exact solution")
    _check_boundary_data(mesh, problem,
                         need_dt=config.scheme is Scheme.LRNN_C1DG)
    trial = _ExactTrial(problem.exact)
    acc = _Accumulator(_widths(bases), vector_mode=True)
    _volume_terms(mesh, bases, problem, config, trial, acc)
    if config.scheme is Scheme.LRNN_C1DG:
        _elementwise_terms(mesh, bases, problem, config, trial, acc)
    else:
        _temporal_terms(mesh, bases, problem, config, trial, acc, config.scheme)
        _spatial_face_terms(mesh, bases, problem, config, trial, acc, config.scheme)
    worst = 0.0
    for e, width in enumerate(_widths(bases)):
        bu = acc.blocks.get((e, 0), np.zeros(width))
        lv = acc.rhs[e]
        scale = np.maximum(np.maximum(np.abs(bu), np.abs(lv)), 1.0)
        worst = max(worst, float(np.max(np.abs(bu - lv) / scale)))
    return worst
