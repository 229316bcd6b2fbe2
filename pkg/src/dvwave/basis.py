"""Per-element randomized single-hidden-layer bases.

Each space-time element carries M features phi_j(t, x) = act(w_j . z + b_j)
where z = (t, x) (or the element-local affine image of it), and w_j, b_j are
drawn once from U(-r, r) and never updated.  Only first and mixed first/first
derivatives are needed by the schemes, so any C^2 activation works; tanh is
the default.

Evaluation returns the value table together with the time derivative, the
spatial gradient, and the mixed time-space derivative of every feature:

    a      = w . z + b
    phi    = act(a)
    dt     = w_t act'(a)
    dx_k   = w_k act'(a)
    dtdx_k = w_t w_k act''(a)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mesh import SpaceTimeMesh


class BasisError(ValueError):
    pass


def _tanh_triplet(a):
    s = np.tanh(a)
    ds = 1.0 - s * s
    return s, ds, -2.0 * s * ds


def _sin_triplet(a):
    return np.sin(a), np.cos(a), -np.sin(a)


def _gaussian_triplet(a):
    g = np.exp(-a * a)
    return g, -2.0 * a * g, (4.0 * a * a - 2.0) * g


ACTIVATIONS = {
    "tanh": _tanh_triplet,
    "sin": _sin_triplet,
    "gaussian": _gaussian_triplet,
}


@dataclass(frozen=True)
class RnnConfig:
    """Hidden-layer setup shared by all elements."""

    neurons: int
    weight_range: float
    activation: str = "tanh"
    seed: int = 1
    input_scaling: str = "global"  # or "element": affine map of the element to [0,1]^{d+1}

    def __post_init__(self):
        if self.neurons < 1:
            raise BasisError(f"neuron count must be >= 1, got {self.neurons}")
        if not self.weight_range > 0:
            raise BasisError(f"init range must be positive, got {self.weight_range}")
        if self.activation not in ACTIVATIONS:
            raise BasisError(f"unknown activation {self.activation!r}")
        if self.input_scaling not in ("global", "element"):
            raise BasisError(f"unknown input scaling {self.input_scaling!r}")


@dataclass(frozen=True)
class EvalTable:
    """Feature tables at a batch of points; every array is (npoints, M)."""

    value: np.ndarray
    dt: np.ndarray
    grad: tuple[np.ndarray, ...]       # one table per spatial axis
    dt_grad: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class LocalRnnBasis:
    """Frozen hidden layer of one element."""

    element_id: int
    weights: np.ndarray           # (M, d+1) in (t, x...) input order
    biases: np.ndarray            # (M,)
    activation: str
    shift: np.ndarray | None = None   # element-local input map z -> (z - shift) * scale
    scale: np.ndarray | None = None

    @property
    def n_features(self) -> int:
        return self.weights.shape[0]

    def eval(self, points) -> EvalTable:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.weights.shape[1]:
            raise BasisError(
                f"points have {points.shape[1]} coordinates, basis expects "
                f"{self.weights.shape[1]}")
        if self.shift is not None:
            z = (points - self.shift) * self.scale
            chain = self.scale          # d/dz_k of the mapped input
        else:
            z = points
            chain = np.ones(points.shape[1])
        a = z @ self.weights.T + self.biases
        val, d1, d2 = ACTIVATIONS[self.activation](a)
        wt = self.weights[:, 0] * chain[0]
        dt = d1 * wt
        grad = []
        dt_grad = []
        for k in range(1, self.weights.shape[1]):
            wk = self.weights[:, k] * chain[k]
            grad.append(d1 * wk)
            dt_grad.append(d2 * (wt * wk))
        return EvalTable(value=val, dt=dt, grad=tuple(grad), dt_grad=tuple(dt_grad))


def build_local_bases(mesh: SpaceTimeMesh, config: RnnConfig) -> list[LocalRnnBasis]:
    """One independent random basis per element.

    The stream for element e is seeded by (seed, e), so the result does not
    depend on construction order and is bit-reproducible for a fixed seed.
    """
    dim_in = mesh.dim + 1
    bases = []
    for element in mesh.elements:
        rng = np.random.default_rng((config.seed, element.index))
        r = config.weight_range
        weights = rng.uniform(-r, r, size=(config.neurons, dim_in))
        biases = rng.uniform(-r, r, size=config.neurons)
        shift = scale = None
        if config.input_scaling == "element":
            lo = np.array([b[0] for b in element.bounds])
            hi = np.array([b[1] for b in element.bounds])
            shift, scale = lo, 1.0 / (hi - lo)
        bases.append(LocalRnnBasis(
            element_id=element.index, weights=weights, biases=biases,
            activation=config.activation, shift=shift, scale=scale))
    return bases


def eval_linear_combination(basis: LocalRnnBasis, alpha, points):
    """Value, time derivative, and spatial gradient of u = sum_j alpha_j phi_j.

    Returns (u, du/dt, grad u) with grad of shape (npoints, d).
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (basis.n_features,):
        raise BasisError(
            f"alpha has shape {alpha.shape}, expected ({basis.n_features},)")
    table = basis.eval(points)
    value = table.value @ alpha
    dt = table.dt @ alpha
    grad = np.stack([g @ alpha for g in table.grad], axis=-1)
    return value, dt, grad
