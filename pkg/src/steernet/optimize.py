"""Deterministic multi-start maximization used by the steering criteria.

Every search is seeded: restart k draws its start point from a stream keyed
by (seed, k), so results are reproducible and adding restarts can only raise
the returned maximum (the first k starts are identical regardless of how
many run in total).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import ArgumentError, EvaluationError, InternalError

_GOLDEN = (1 + 5**0.5) / 2
_LATTICE = 256  # fixed base grid so start points do not depend on restart count


@dataclass(frozen=True)
class OptConfig:
    """Multi-start search budget and determinism knobs."""

    restarts: int = 64
    max_iter: int = 2000
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iter < 1 or self.tol <= 0 or self.seed < 0:
            raise ArgumentError("OptConfig fields must be positive")


@dataclass(frozen=True, eq=False)
class OptResult:
    """Best value over all restarts plus the point achieving it."""

    value: float
    argmax: object
    converged_restarts: int


def _nm(neg, x0, cfg):
    return minimize(
        neg,
        x0,
        method="Nelder-Mead",
        options={
            "xatol": cfg.tol,
            "fatol": cfg.tol,
            "maxiter": cfg.max_iter,
            "maxfev": 4 * cfg.max_iter,
        },
    )


def _finite(val, where):
    v = float(val)
    if not math.isfinite(v):
        raise EvaluationError(f"objective returned {val!r} at {where}")
    return v


def unit_vector(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    )


def rotation_from_angles(a: float, b: float, c: float) -> np.ndarray:
    """Proper rotation Rz(a) Ry(b) Rz(c); its rows form an orthonormal triad."""
    ca, sa = math.cos(a), math.sin(a)
    cb, sb = math.cos(b), math.sin(b)
    cc, sc = math.cos(c), math.sin(c)
    rz1 = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]])
    rz2 = np.array([[cc, -sc, 0.0], [sc, cc, 0.0], [0.0, 0.0, 1.0]])
    return rz1 @ ry @ rz2


def _sphere_start(i: int, seed: int):
    """Fibonacci-lattice point number i with a small seeded jitter."""
    z = 1 - 2 * ((i + 0.5) % _LATTICE) / _LATTICE
    theta = math.acos(z)
    phi = (2 * math.pi * i / _GOLDEN) % (2 * math.pi)
    jitter = np.random.default_rng([seed, i]).uniform(-0.05, 0.05, 2)
    return np.array([theta + jitter[0], phi + jitter[1]])


_AXES = [np.array(v, dtype=float) for s in (1.0, -1.0) for v in ((s, 0, 0), (0, s, 0), (0, 0, s))]


def max_unit_sphere(f, cfg: OptConfig = OptConfig()) -> OptResult:
    """Maximize a function of a unit 3-vector.

    Runs Nelder-Mead on the polar parametrization from cfg.restarts seeded
    Fibonacci-lattice starts, and also evaluates the six coordinate axes
    (closed-form optima in this package sit on axes; this keeps the
    agreement with them exact).
    """

    def neg(angles):
        return -_finite(f(unit_vector(angles[0], angles[1])), f"angles {angles}")

    best_val = -math.inf
    best_x = None
    converged = 0
    for i in range(cfg.restarts):
        res = _nm(neg, _sphere_start(i, cfg.seed), cfg)
        converged += bool(res.success)
        if -res.fun > best_val:
            best_val = -res.fun
            best_x = unit_vector(res.x[0], res.x[1])
    for ax in _AXES:
        v = _finite(f(ax), f"axis {ax}")
        if v > best_val:
            best_val = v
            best_x = ax
    return OptResult(best_val, best_x, converged)


def max_orthonormal_triads(f, cfg: OptConfig = OptConfig()) -> OptResult:
    """Maximize a function of two orthonormal triads (rows of two rotations).

    Six angles in total, three per rotation; start angles are drawn from the
    per-restart seeded streams.
    """

    def neg(x):
        ta = rotation_from_angles(x[0], x[1], x[2])
        tb = rotation_from_angles(x[3], x[4], x[5])
        return -_finite(f(ta, tb), f"angles {x}")

    best_val = -math.inf
    best_x = None
    converged = 0
    for i in range(cfg.restarts):
        x0 = np.random.default_rng([cfg.seed, i]).uniform(0.0, 2 * math.pi, 6)
        res = _nm(neg, x0, cfg)
        converged += bool(res.success)
        if -res.fun > best_val:
            best_val = -res.fun
            best_x = res.x
    ta = rotation_from_angles(best_x[0], best_x[1], best_x[2])
    tb = rotation_from_angles(best_x[3], best_x[4], best_x[5])
    return OptResult(best_val, (ta, tb), converged)


def swap_criterion_value(x, u2, w1, w2) -> float:
    """Unsteerability-criterion value of the first swap branch of two
    canonical inputs, as a function of the free problem data.

    x is the measured direction, u2 the second input's local Bloch vector,
    w1 and w2 the diagonal correlation triples of the two inputs.
    """
    t1 = (x[0] * u2[0] * w1[0] - x[1] * u2[1] * w1[1] + x[2] * u2[2] * w1[2]) ** 2
    t2 = math.sqrt(sum((x[j] * w1[j] * w2[j]) ** 2 for j in range(3)))
    return t1 + t2


def swap_criterion_ceiling(cfg: OptConfig = OptConfig()) -> OptResult:
    """Worst-case criterion value over all admissible unsteerable input pairs.

    Maximizes swap_criterion_value over unit x, |u2| <= 1, |w1_j| <= 1/2 and
    |w2| <= 1. The constraint set is mapped to free parameters (sine and
    squared-sine envelopes), which keeps the surface smooth at the optimum;
    a penalty formulation stalls below the true maximum because the optimum
    sits on a constraint corner.
    """

    def unpack(x):
        xh = unit_vector(x[0], x[1])
        u2 = math.sin(x[2]) ** 2 * unit_vector(x[3], x[4])
        w1 = 0.5 * np.sin(x[5:8])
        w2 = math.sin(x[8]) ** 2 * unit_vector(x[9], x[10])
        return xh, u2, w1, w2

    def neg(x):
        return -_finite(swap_criterion_value(*unpack(x)), "ceiling params")

    best_val = -math.inf
    best_x = None
    converged = 0
    for i in range(cfg.restarts):
        x0 = np.random.default_rng([cfg.seed, i]).uniform(-math.pi, math.pi, 11)
        res = _nm(neg, x0, cfg)
        converged += bool(res.success)
        if -res.fun > best_val:
            best_val = -res.fun
            best_x = res.x
    xh, u2, w1, w2 = unpack(best_x)
    if (
        abs(np.linalg.norm(xh) - 1) > 1e-9
        or np.linalg.norm(u2) > 1 + 1e-9
        or np.max(np.abs(w1)) > 0.5 + 1e-9
        or np.linalg.norm(w2) > 1 + 1e-9
    ):
        raise InternalError("maximizer left the constraint set")
    return OptResult(
        best_val,
        {"params": best_x, "x": xh, "u2": u2, "w1": np.asarray(w1), "w2": w2},
        converged,
    )
