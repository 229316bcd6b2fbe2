"""Problem definitions for the diffusive-viscous wave equation.

The strong form on the space-time domain (0,T) x Omega is

    u_tt + gamma u_t - div(eta grad u_t) - div(xi^2 grad u) = f,

with Dirichlet data g_D, Neumann data g_N = du/dn, Robin data
g_R = du/dn + kappa u on the respective boundary parts, and initial data
u(0) = u0, u_t(0) = w0.

Three manufactured cases ship with closed-form exact solutions, from which
all data functions are produced by substitution.  Every derivative is coded
in closed form; the test suite cross-checks them against finite differences.

Conventions: space-time points are (n, d+1) arrays in (t, x...) order;
coefficient fields take (n, d) spatial points; boundary fields that involve
the normal receive the outward unit normal as a second argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .mesh import BoundaryPartitionSpec, FaceKind


class ProblemError(ValueError):
    pass


def constant_field(value: float) -> Callable[[np.ndarray], np.ndarray]:
    value = float(value)

    def field(x: np.ndarray) -> np.ndarray:
        return np.full(np.atleast_2d(x).shape[0], value)

    return field


@dataclass(frozen=True)
class ExactSolution:
    """Closed-form solution with every derivative the schemes and norms need."""

    value: Callable          # u(t, x)
    dt: Callable             # u_t
    dtt: Callable            # u_tt
    grad: Callable           # (n, d) spatial gradient
    grad_dt: Callable        # (n, d) gradient of u_t
    lap: Callable            # laplacian of u
    lap_dt: Callable         # laplacian of u_t


@dataclass(frozen=True)
class DvweProblem:
    """Coefficients and data of one initial-boundary value problem."""

    dim: int
    lower: np.ndarray
    upper: np.ndarray
    final_time: float
    boundary: BoundaryPartitionSpec
    gamma: Callable
    eta: Callable
    xi: Callable
    kappa: Callable
    f: Callable                        # f(points) over the space-time domain
    u0: Callable                       # u0(x)
    w0: Callable                       # w0(x)
    g_dirichlet: Callable | None = None        # g_D(points)
    g_neumann: Callable | None = None          # g_N(points, normal)
    g_robin: Callable | None = None            # g_R(points, normal)
    dt_g_neumann: Callable | None = None       # time derivative of g_N
    dt_g_robin: Callable | None = None         # time derivative of g_R
    exact: ExactSolution | None = None

    def require_boundary_data(self, kind: FaceKind, need_dt: bool = False):
        table = {
            FaceKind.DIRICHLET: [("g_dirichlet", self.g_dirichlet)],
            FaceKind.NEUMANN: [("g_neumann", self.g_neumann)],
            FaceKind.ROBIN: [("g_robin", self.g_robin)],
        }
        needed = table[kind]
        if need_dt and kind is FaceKind.NEUMANN:
            needed.append(("dt_g_neumann", self.dt_g_neumann))
        if need_dt and kind is FaceKind.ROBIN:
            needed.append(("dt_g_robin", self.dt_g_robin))
        for name, fn in needed:
            if fn is None:
                raise ProblemError(
                    f"boundary kind {kind.value} declared but {name} is missing")


@dataclass(frozen=True)
class ManufacturedCase:
    """A DVWE instance whose data derive from a known exact solution."""

    case_id: str
    problem: DvweProblem
    # paper-tuned runner defaults keyed by scheme name
    defaults: dict


def _split(points) -> tuple[np.ndarray, np.ndarray]:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return pts[:, 0], pts[:, 1:]


def _manufacture(case_id: str, dim: int, lower, upper, final_time: float,
                 boundary: BoundaryPartitionSpec, gamma: float, eta: float,
                 xi: float, kappa: float, exact: ExactSolution,
                 defaults: dict) -> ManufacturedCase:
    """Assemble data functions from an exact solution and constant coefficients."""
    xi2 = xi * xi

    def f(points):
        return (exact.dtt(points) + gamma * exact.dt(points)
                - eta * exact.lap_dt(points) - xi2 * exact.lap(points))

    def u0(x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        pts = np.concatenate([np.zeros((x.shape[0], 1)), x], axis=1)
        return exact.value(pts)

    def w0(x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        pts = np.concatenate([np.zeros((x.shape[0], 1)), x], axis=1)
        return exact.dt(pts)

    def g_dirichlet(points):
        return exact.value(points)

    def g_neumann(points, normal):
        return exact.grad(points) @ np.asarray(normal, dtype=float)

    def g_robin(points, normal):
        return (exact.grad(points) @ np.asarray(normal, dtype=float)
                + kappa * exact.value(points))

    def dt_g_neumann(points, normal):
        return exact.grad_dt(points) @ np.asarray(normal, dtype=float)

    def dt_g_robin(points, normal):
        return (exact.grad_dt(points) @ np.asarray(normal, dtype=float)
                + kappa * exact.dt(points))

    problem = DvweProblem(
        dim=dim,
        lower=np.asarray(lower, dtype=float),
        upper=np.asarray(upper, dtype=float),
        final_time=final_time,
        boundary=boundary,
        gamma=constant_field(gamma),
        eta=constant_field(eta),
        xi=constant_field(xi),
        kappa=constant_field(kappa),
        f=f, u0=u0, w0=w0,
        g_dirichlet=g_dirichlet,
        g_neumann=g_neumann, g_robin=g_robin,
        dt_g_neumann=dt_g_neumann, dt_g_robin=dt_g_robin,
        exact=exact,
    )
    return ManufacturedCase(case_id=case_id, problem=problem, defaults=defaults)


# -- 1-D case: water-saturated rock coefficients, oscillatory solution --------
#
#    u(t, x) = exp(cos(27 x^2 + 27 t^2 + 8 pi - 24)) (x^2+1)/2 (t^2+1)/2
#
# Derivatives are written through the shared factors E = exp(cos g),
# s = sin g, c = cos g with polynomial prefactors.

_PHASE_SHIFT = 8.0 * np.pi - 24.0
_K = 54.0 ** 2


def _ex1_parts(points):
    t, x = _split(points)
    x = x[:, 0]
    g = 27.0 * x * x + 27.0 * t * t + _PHASE_SHIFT
    s, c = np.sin(g), np.cos(g)
    return t, x, s, c, np.exp(c)


def _ex1_value(points):
    t, x, s, c, E = _ex1_parts(points)
    return E * (x * x + 1.0) * (t * t + 1.0) / 4.0


def _ex1_dt(points):
    t, x, s, c, E = _ex1_parts(points)
    X = (x * x + 1.0) / 2.0
    T, Tt = (t * t + 1.0) / 2.0, t
    return E * X * (Tt - 54.0 * t * s * T)


def _ex1_dtt(points):
    t, x, s, c, E = _ex1_parts(points)
    X = (x * x + 1.0) / 2.0
    T, Tt, Ttt = (t * t + 1.0) / 2.0, t, 1.0
    return E * X * (Ttt - 108.0 * t * s * Tt
                    + (_K * t * t * s * s - 54.0 * s - _K * t * t * c) * T)


def _ex1_grad(points):
    t, x, s, c, E = _ex1_parts(points)
    X, Xx = (x * x + 1.0) / 2.0, x
    T = (t * t + 1.0) / 2.0
    return (E * T * (Xx - 54.0 * x * s * X))[:, None]


def _ex1_lap(points):
    t, x, s, c, E = _ex1_parts(points)
    X, Xx, Xxx = (x * x + 1.0) / 2.0, x, 1.0
    T = (t * t + 1.0) / 2.0
    return E * T * (Xxx - 108.0 * x * s * Xx
                    + (_K * x * x * s * s - 54.0 * s - _K * x * x * c) * X)


def _ex1_grad_dt(points):
    t, x, s, c, E = _ex1_parts(points)
    X, Xx = (x * x + 1.0) / 2.0, x
    T, Tt = (t * t + 1.0) / 2.0, t
    A = Xx - 54.0 * x * s * X
    B = Tt - 54.0 * t * s * T
    return (E * (A * B - _K * t * x * c * X * T))[:, None]


def _ex1_lap_dt(points):
    t, x, s, c, E = _ex1_parts(points)
    X, Xx, Xxx = (x * x + 1.0) / 2.0, x, 1.0
    T, Tt = (t * t + 1.0) / 2.0, t
    B = Tt - 54.0 * t * s * T
    W = Xxx - 108.0 * x * s * Xx + (_K * x * x * s * s - 54.0 * s - _K * x * x * c) * X
    return E * (B * W + 54.0 * t * T * (_K * x * x * s * X * (1.0 + 2.0 * c)
                                        - 54.0 * c * X - 108.0 * x * c * Xx))


def example_1d() -> ManufacturedCase:
    """1-D case on Omega = (0,1), I = (0,1), all-Dirichlet boundary."""
    exact = ExactSolution(
        value=_ex1_value, dt=_ex1_dt, dtt=_ex1_dtt,
        grad=_ex1_grad, grad_dt=_ex1_grad_dt,
        lap=_ex1_lap, lap_dt=_ex1_lap_dt,
    )
    defaults = {
        "lrnn_dg": dict(weight_range=1.38, beta1=7.0, beta2=7.0, quad_points=15),
        "lrnn_c0dg": dict(weight_range=1.34, quad_points=15, colloc=13),
        "lrnn_c1dg": dict(weight_range=1.34, quad_points=15, colloc=13),
    }
    return _manufacture(
        "example1", dim=1, lower=[0.0], upper=[1.0], final_time=1.0,
        boundary=BoundaryPartitionSpec.all_dirichlet(1),
        gamma=90.0, eta=2.0e-7, xi=1.47, kappa=1.0,
        exact=exact, defaults=defaults)


# -- 2-D case: damped double sine ---------------------------------------------

_TWO_PI = 2.0 * np.pi


def _ex2_factors(points):
    t, x = _split(points)
    sx, cx = np.sin(_TWO_PI * x[:, 0]), np.cos(_TWO_PI * x[:, 0])
    sy, cy = np.sin(_TWO_PI * x[:, 1]), np.cos(_TWO_PI * x[:, 1])
    return np.exp(-t), sx, cx, sy, cy


def _ex2_value(points):
    e, sx, cx, sy, cy = _ex2_factors(points)
    return e * sx * sy


def _ex2_grad(points):
    e, sx, cx, sy, cy = _ex2_factors(points)
    return np.stack([_TWO_PI * e * cx * sy, _TWO_PI * e * sx * cy], axis=1)


def example_2d() -> ManufacturedCase:
    """2-D case on Omega = (0,1)^2, I = (0,0.5), all-Dirichlet boundary."""
    lap_coeff = -2.0 * _TWO_PI ** 2
    exact = ExactSolution(
        value=_ex2_value,
        dt=lambda p: -_ex2_value(p),
        dtt=_ex2_value,
        grad=_ex2_grad,
        grad_dt=lambda p: -_ex2_grad(p),
        lap=lambda p: lap_coeff * _ex2_value(p),
        lap_dt=lambda p: -lap_coeff * _ex2_value(p),
    )
    defaults = {
        "lrnn_dg": dict(weight_range=0.6, beta1=5.0, beta2=5.0, quad_points=9),
        "lrnn_c0dg": dict(weight_range=0.57, quad_points=9, colloc=6),
        "lrnn_c1dg": dict(weight_range=0.44, quad_points=9, colloc=6),
    }
    return _manufacture(
        "example2", dim=2, lower=[0.0, 0.0], upper=[1.0, 1.0], final_time=0.5,
        boundary=BoundaryPartitionSpec.all_dirichlet(2),
        gamma=1.0, eta=0.01, xi=0.1, kappa=1.0,
        exact=exact, defaults=defaults)


# -- 3-D case: dry-sandstone coefficients, mixed boundary ----------------------

_PI = np.pi


def _ex3_sines(points):
    t, x = _split(points)
    s = np.sin(_PI * x)
    c = np.cos(_PI * x)
    return t, s, c


def _ex3_value(points):
    t, s, _ = _ex3_sines(points)
    return t * t * s[:, 0] * s[:, 1] * s[:, 2]


def _ex3_grad_shape(points):
    _, s, c = _ex3_sines(points)
    return _PI * np.stack([
        c[:, 0] * s[:, 1] * s[:, 2],
        s[:, 0] * c[:, 1] * s[:, 2],
        s[:, 0] * s[:, 1] * c[:, 2],
    ], axis=1)


def example_3d() -> ManufacturedCase:
    """3-D case on Omega = (0,1)^3, I = (0,5), mixed boundary.

    Lateral facets (x and y) are Dirichlet, the bottom facet (z = 0) is
    Neumann, the top facet (z = 1) is Robin.
    """
    boundary = BoundaryPartitionSpec((
        (FaceKind.DIRICHLET, FaceKind.DIRICHLET),
        (FaceKind.DIRICHLET, FaceKind.DIRICHLET),
        (FaceKind.NEUMANN, FaceKind.ROBIN),
    ))

    def shape(points):
        _, s, _ = _ex3_sines(points)
        return s[:, 0] * s[:, 1] * s[:, 2]

    exact = ExactSolution(
        value=_ex3_value,
        dt=lambda p: 2.0 * _split(p)[0] * shape(p),
        dtt=lambda p: 2.0 * shape(p),
        grad=lambda p: (_split(p)[0] ** 2)[:, None] * _ex3_grad_shape(p),
        grad_dt=lambda p: (2.0 * _split(p)[0])[:, None] * _ex3_grad_shape(p),
        lap=lambda p: -3.0 * _PI ** 2 * _ex3_value(p),
        lap_dt=lambda p: -3.0 * _PI ** 2 * 2.0 * _split(p)[0] * shape(p),
    )
    defaults = {
        "lrnn_dg": dict(weight_range=0.25, beta1=42.0, beta2=42.0, quad_points=9),
        "lrnn_c0dg": dict(weight_range=0.16, quad_points=9, colloc=4),
        "lrnn_c1dg": dict(weight_range=0.17, quad_points=9, colloc=4),
    }
    return _manufacture(
        "example3", dim=3, lower=[0.0] * 3, upper=[1.0] * 3, final_time=5.0,
        boundary=boundary,
        gamma=56.0, eta=5.6e-8, xi=1.19, kappa=1.0,
        exact=exact, defaults=defaults)


CASES = {
    "example1": example_1d,
    "example2": example_2d,
    "example3": example_3d,
}
