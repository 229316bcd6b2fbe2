"""Space-time tensor meshes on box domains.

The space-time domain (0,T) x Omega is decomposed into a uniform partition of
the time interval crossed with a uniform Cartesian grid of axis-aligned box
cells.  The mesh enumerates the resulting elements, the spatial faces of each
time slab (interior and boundary, tagged Dirichlet/Neumann/Robin), and the
temporal interfaces between slabs.

Space-time points are arrays with d+1 columns in (t, x_1, ..., x_d) order.

Jump and average conventions across faces:

* spatial, interior:  {v} = (v+ + v-)/2,  [[v]] = v+ n+ + v- n-,
  [q] = q+ . n+ + q- . n-   (n+ is the outward normal of the plus side);
* spatial, boundary:  [[v]] = v n,  {q} = q;
* temporal, interior node t_k:  the plus trace is the later slab,
  [w] = w(t_k+) - w(t_k-),  {w} = (w(t_k+) + w(t_k-))/2;
* temporal, initial node:  [w] = -w,  {w} = w;  final node:  [w] = +w, {w} = w.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class MeshError(ValueError):
    pass


class FaceKind(Enum):
    INTERIOR = "interior"
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    ROBIN = "robin"


class TimeNodeKind(Enum):
    INITIAL = "initial"
    INTERIOR = "interior"
    FINAL = "final"


@dataclass(frozen=True)
class TimePartition:
    """Strictly increasing time nodes t_0 = 0 < ... < t_{N_t} = T."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise MeshError("time partition needs at least two nodes")
        if nodes[0] != 0.0:
            raise MeshError("time partition must start at t = 0")
        if not np.all(np.diff(nodes) > 0):
            raise MeshError("time nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @staticmethod
    def uniform(final_time: float, n_slabs: int) -> "TimePartition":
        if n_slabs < 1:
            raise MeshError(f"slab count must be >= 1, got {n_slabs}")
        if not final_time > 0:
            raise MeshError(f"final time must be positive, got {final_time}")
        return TimePartition(np.linspace(0.0, final_time, n_slabs + 1))

    @property
    def n_slabs(self) -> int:
        return self.nodes.size - 1

    @property
    def tau(self) -> float:
        return float(np.max(np.diff(self.nodes)))

    @property
    def final_time(self) -> float:
        return float(self.nodes[-1])

    def slab_bounds(self, i: int) -> tuple[float, float]:
        return float(self.nodes[i]), float(self.nodes[i + 1])


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform Cartesian grid of box cells over an axis-aligned box domain."""

    lower: np.ndarray
    upper: np.ndarray
    cells_per_axis: tuple[int, ...]

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        cells = tuple(int(c) for c in np.atleast_1d(self.cells_per_axis))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise MeshError("lower/upper bounds must be 1-D and congruent")
        if not 1 <= lower.size <= 3:
            raise MeshError(f"spatial dimension must be 1, 2, or 3, got {lower.size}")
        if np.any(upper <= lower):
            raise MeshError("domain extent must be positive on every axis")
        if len(cells) != lower.size or any(c < 1 for c in cells):
            raise MeshError("cell counts must be >= 1 on every axis")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "cells_per_axis", cells)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def steps(self) -> np.ndarray:
        return (self.upper - self.lower) / np.asarray(self.cells_per_axis)

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.cells_per_axis))

    @property
    def h(self) -> float:
        """Maximum cell diameter."""
        return float(np.linalg.norm(self.steps))

    def cell_bounds(self, cell_index: tuple[int, ...]) -> list[tuple[float, float]]:
        steps = self.steps
        return [
            (self.lower[a] + cell_index[a] * steps[a],
             self.lower[a] + (cell_index[a] + 1) * steps[a])
            for a in range(self.dim)
        ]

    def flat_index(self, cell_index: tuple[int, ...]) -> int:
        return int(np.ravel_multi_index(cell_index, self.cells_per_axis))

    def multi_index(self, flat: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(flat, self.cells_per_axis))


@dataclass(frozen=True)
class BoundaryPartitionSpec:
    """Boundary condition kind for each of the 2*d facets of the box domain.

    ``kinds[axis][side]`` with side 0 = lower facet, side 1 = upper facet.
    """

    kinds: tuple[tuple[FaceKind, FaceKind], ...]

    def __post_init__(self):
        for pair in self.kinds:
            for kind in pair:
                if kind is FaceKind.INTERIOR:
                    raise MeshError("boundary facets cannot be tagged interior")

    @staticmethod
    def all_dirichlet(dim: int) -> "BoundaryPartitionSpec":
        return BoundaryPartitionSpec(
            tuple((FaceKind.DIRICHLET, FaceKind.DIRICHLET) for _ in range(dim))
        )

    def kind(self, axis: int, side: int) -> FaceKind:
        return self.kinds[axis][side]


@dataclass(frozen=True)
class SpaceTimeElement:
    """One slab x cell box of the space-time decomposition."""

    index: int
    time_index: int
    cell_index: tuple[int, ...]
    t_bounds: tuple[float, float]
    x_bounds: tuple[tuple[float, float], ...]

    @property
    def bounds(self) -> list[tuple[float, float]]:
        """(d+1) box bounds in (t, x...) axis order."""
        return [self.t_bounds, *self.x_bounds]

    def quadrature_geometry(self):
        return ({i: b for i, b in enumerate(self.bounds)}, {}, len(self.bounds))


@dataclass(frozen=True)
class SpatialFace:
    """Cross-section of a spatial cell facet with a time slab.

    ``axis`` is the spatial axis normal to the face (0-based in x-space);
    ``normal_sign`` is the outward normal direction of the plus element.  The
    plus element is the lower-index adjacent cell for interior faces and the
    unique adjacent cell for boundary faces (normal pointing out of Omega).
    """

    time_index: int
    axis: int
    kind: FaceKind
    plus_element: int
    minus_element: int | None
    normal_sign: float
    coordinate: float
    t_bounds: tuple[float, float]
    cross_bounds: tuple[tuple[float, float], ...]

    @property
    def normal(self) -> np.ndarray:
        n = np.zeros(len(self.cross_bounds) + 1)
        n[self.axis] = self.normal_sign
        return n

    @property
    def measure(self) -> float:
        extents = [hi - lo for lo, hi in self.cross_bounds]
        return float((self.t_bounds[1] - self.t_bounds[0]) * np.prod(extents or [1.0]))

    def quadrature_geometry(self):
        dim = len(self.cross_bounds) + 1
        bounds = {0: self.t_bounds}
        cross_axes = [a for a in range(dim) if a != self.axis]
        for col, axis in enumerate(cross_axes):
            bounds[1 + axis] = self.cross_bounds[col]
        return bounds, {1 + self.axis: self.coordinate}, dim + 1


@dataclass(frozen=True)
class TemporalInterface:
    """A spatial cell at a fixed time node.

    ``upper_element``/``lower_element`` are the adjacent slab elements above
    and below the node (absent outside initial/final nodes respectively).
    """

    time_node_index: int
    cell_index: tuple[int, ...]
    kind: TimeNodeKind
    time: float
    upper_element: int | None
    lower_element: int | None
    x_bounds: tuple[tuple[float, float], ...]

    @property
    def measure(self) -> float:
        return float(np.prod([hi - lo for lo, hi in self.x_bounds]))

    def quadrature_geometry(self):
        bounds = {1 + a: b for a, b in enumerate(self.x_bounds)}
        return bounds, {0: self.time}, len(self.x_bounds) + 1


@dataclass
class SpaceTimeMesh:
    """Immutable container for the full space-time decomposition."""

    time: TimePartition
    grid: SpatialGrid
    boundary: BoundaryPartitionSpec
    elements: list[SpaceTimeElement] = field(default_factory=list)
    spatial_faces: list[SpatialFace] = field(default_factory=list)
    temporal_interfaces: list[TemporalInterface] = field(default_factory=list)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.grid.dim

    def element_id(self, time_index: int, cell_index: tuple[int, ...]) -> int:
        return time_index * self.grid.n_cells + self.grid.flat_index(cell_index)

    def boundary_faces(self, kind: FaceKind) -> list[SpatialFace]:
        return [f for f in self.spatial_faces if f.kind is kind]

    def interior_spatial_faces(self) -> list[SpatialFace]:
        return self.boundary_faces(FaceKind.INTERIOR)

    def locate(self, point) -> SpaceTimeElement:
        """Containing element; interface points resolve to the lower slab/cell."""
        point = np.asarray(point, dtype=float)
        t = point[0]
        x = point[1:]
        if not 0.0 <= t <= self.time.final_time:
            raise MeshError(f"time {t} outside [0, {self.time.final_time}]")
        if np.any(x < self.grid.lower) or np.any(x > self.grid.upper):
            raise MeshError(f"point {x} outside spatial domain")
        slab = int(np.searchsorted(self.time.nodes, t, side="left")) - 1
        slab = min(max(slab, 0), self.time.n_slabs - 1)
        cell = []
        steps = self.grid.steps
        for a in range(self.dim):
            # searchsorted-left puts points lying on a grid plane in the lower cell
            edges = self.grid.lower[a] + steps[a] * np.arange(self.grid.cells_per_axis[a] + 1)
            idx = int(np.searchsorted(edges, x[a], side="left")) - 1
            cell.append(min(max(idx, 0), self.grid.cells_per_axis[a] - 1))
        return self.elements[self.element_id(slab, tuple(cell))]


def build_mesh(lower, upper, final_time: float, n_slabs: int, cells_per_axis,
               boundary: BoundaryPartitionSpec | None = None) -> SpaceTimeMesh:
    """Build the uniform space-time mesh with full face connectivity."""
    grid = SpatialGrid(np.atleast_1d(lower), np.atleast_1d(upper),
                       tuple(np.atleast_1d(cells_per_axis)))
    time = TimePartition.uniform(final_time, n_slabs)
    if boundary is None:
        boundary = BoundaryPartitionSpec.all_dirichlet(grid.dim)
    if len(boundary.kinds) != grid.dim:
        raise MeshError("boundary spec dimension does not match the grid")

    mesh = SpaceTimeMesh(time=time, grid=grid, boundary=boundary)

    for i in range(time.n_slabs):
        t_bounds = time.slab_bounds(i)
        for flat in range(grid.n_cells):
            cidx = grid.multi_index(flat)
            mesh.elements.append(SpaceTimeElement(
                index=i * grid.n_cells + flat,
                time_index=i,
                cell_index=cidx,
                t_bounds=t_bounds,
                x_bounds=tuple(grid.cell_bounds(cidx)),
            ))

    steps = grid.steps
    for i in range(time.n_slabs):
        t_bounds = time.slab_bounds(i)
        for axis in range(grid.dim):
            cross_shape = tuple(grid.cells_per_axis[a]
                                for a in range(grid.dim) if a != axis)
            for plane in range(grid.cells_per_axis[axis] + 1):
                coord = float(grid.lower[axis] + plane * steps[axis])
                on_lower = plane == 0
                on_upper = plane == grid.cells_per_axis[axis]
                for cross_flat in range(int(np.prod(cross_shape or (1,)))):
                    cross_idx = (np.unravel_index(cross_flat, cross_shape)
                                 if cross_shape else ())
                    cross_bounds = []
                    pos = 0
                    for a in range(grid.dim):
                        if a == axis:
                            continue
                        lo = grid.lower[a] + cross_idx[pos] * steps[a]
                        cross_bounds.append((float(lo), float(lo + steps[a])))
                        pos += 1

                    def cell_at(plane_idx):
                        full = []
                        pos = 0
                        for a in range(grid.dim):
                            if a == axis:
                                full.append(plane_idx)
                            else:
                                full.append(int(cross_idx[pos]))
                                pos += 1
                        return tuple(full)

                    if on_lower or on_upper:
                        side = 1 if on_upper else 0
                        cell = cell_at(grid.cells_per_axis[axis] - 1 if on_upper else 0)
                        mesh.spatial_faces.append(SpatialFace(
                            time_index=i, axis=axis,
                            kind=boundary.kind(axis, side),
                            plus_element=mesh.element_id(i, cell),
                            minus_element=None,
                            normal_sign=1.0 if on_upper else -1.0,
                            coordinate=coord, t_bounds=t_bounds,
                            cross_bounds=tuple(cross_bounds),
                        ))
                    else:
                        lower_cell = cell_at(plane - 1)
                        upper_cell = cell_at(plane)
                        mesh.spatial_faces.append(SpatialFace(
                            time_index=i, axis=axis, kind=FaceKind.INTERIOR,
                            plus_element=mesh.element_id(i, lower_cell),
                            minus_element=mesh.element_id(i, upper_cell),
                            normal_sign=1.0,  # outward from the lower-index cell
                            coordinate=coord, t_bounds=t_bounds,
                            cross_bounds=tuple(cross_bounds),
                        ))

    for k in range(time.n_slabs + 1):
        if k == 0:
            kind = TimeNodeKind.INITIAL
        elif k == time.n_slabs:
            kind = TimeNodeKind.FINAL
        else:
            kind = TimeNodeKind.INTERIOR
        for flat in range(grid.n_cells):
            cidx = grid.multi_index(flat)
            mesh.temporal_interfaces.append(TemporalInterface(
                time_node_index=k,
                cell_index=cidx,
                kind=kind,
                time=float(time.nodes[k]),
                upper_element=mesh.element_id(k, cidx) if k < time.n_slabs else None,
                lower_element=mesh.element_id(k - 1, cidx) if k > 0 else None,
                x_bounds=tuple(grid.cell_bounds(cidx)),
            ))

    return mesh


def jump_average_spatial(v_plus, v_minus, normal):
    """Scalar trace pair -> (vector jump [[v]], scalar average {v}).

    Pass ``v_minus=None`` for boundary faces: [[v]] = v n and {v} = v.
    """
    normal = np.asarray(normal, dtype=float)
    if v_minus is None:
        return np.multiply.outer(np.asarray(v_plus), normal), np.asarray(v_plus)
    jump = (np.multiply.outer(np.asarray(v_plus), normal)
            + np.multiply.outer(np.asarray(v_minus), -normal))
    avg = 0.5 * (np.asarray(v_plus) + np.asarray(v_minus))
    return jump, avg


def jump_average_spatial_vector(q_plus, q_minus, normal):
    """Vector trace pair -> (scalar normal jump [q], vector average {q}).

    Pass ``q_minus=None`` for boundary faces: [q] = q . n and {q} = q.
    """
    normal = np.asarray(normal, dtype=float)
    if q_minus is None:
        return np.asarray(q_plus) @ normal, np.asarray(q_plus)
    jump = np.asarray(q_plus) @ normal - np.asarray(q_minus) @ normal
    avg = 0.5 * (np.asarray(q_plus) + np.asarray(q_minus))
    return jump, avg


def jump_average_temporal(w_upper, w_lower, node_kind: TimeNodeKind):
    """Temporal trace pair -> (jump [w], average {w}) under the node conventions.

    ``w_upper`` is the trace from the later slab, ``w_lower`` from the earlier
    one; pass only the existing trace at initial/final nodes.
    """
    if node_kind is TimeNodeKind.INTERIOR:
        return np.asarray(w_upper) - np.asarray(w_lower), \
            0.5 * (np.asarray(w_upper) + np.asarray(w_lower))
    if node_kind is TimeNodeKind.INITIAL:
        w = np.asarray(w_upper)
        return -w, w
    if node_kind is TimeNodeKind.FINAL:
        w = np.asarray(w_lower)
        return w, w
    raise MeshError(f"unknown node kind {node_kind}")
