"""Steering and Bell-locality verdicts for two-qubit and reduced states.

Every check returns a CriterionReport whose verdict is mechanical: the
criterion inequality `value <= threshold` is satisfied, violated, or on the
boundary within the shared decision margin DELTA. What a verdict certifies
differs per criterion and is documented on each function; in particular the
canonical-form criterion is sufficient only, so `violated` there means
undecided, never steerable.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bloch import BlochForm, decompose, diagonalize_correlation, reconstruct
from .errors import ArgumentError, InternalError, PreconditionError, SingularMarginalError
from .netswap import reduced_pairs
from .optimize import OptConfig, _nm, max_unit_sphere, unit_vector
from .qmat import DensityMatrix, eig_hermitian, kron, partial_trace

DELTA = 1e-6


@dataclass(frozen=True, eq=False)
class CriterionReport:
    """Numeric outcome of one criterion with its mechanical verdict."""

    criterion: str
    value: float
    threshold: float
    verdict: str
    witness: object
    margin: float


def _report(criterion: str, value: float, threshold: float, witness) -> CriterionReport:
    margin = value - threshold
    if abs(margin) <= DELTA:
        verdict = "boundary"
    elif margin > 0:
        verdict = "violated"
    else:
        verdict = "satisfied"
    return CriterionReport(criterion, float(value), float(threshold), verdict, witness, margin)


@dataclass(frozen=True, eq=False)
class MeasurementTriad:
    """Three mutually orthogonal unit vectors, stored as rows."""

    vectors: np.ndarray

    def __init__(self, vectors):
        vs = np.asarray(vectors, dtype=float)
        if vs.shape != (3, 3):
            raise ArgumentError("a triad is three 3-vectors")
        norms = np.linalg.norm(vs, axis=1)
        if np.max(np.abs(norms - 1)) > 1e-12:
            raise ArgumentError("triad vectors must be unit length")
        dots = vs @ vs.T - np.eye(3)
        if np.max(np.abs(dots)) > 1e-10:
            raise ArgumentError("triad vectors must be pairwise orthogonal")
        vs.flags.writeable = False
        object.__setattr__(self, "vectors", vs)


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """First-party Bloch vector and diagonal correlation triple after the
    marginal-flattening map plus local rotations; the second party's
    marginal is I/2 by construction."""

    a: np.ndarray
    w: np.ndarray

    def __init__(self, a, w):
        a = np.asarray(a, dtype=float)
        w = np.asarray(w, dtype=float)
        if a.shape != (3,) or w.shape != (3,):
            raise ArgumentError("CanonicalForm needs two 3-vectors")
        a.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "w", w)

    def state(self) -> DensityMatrix:
        """Reconstruct the density matrix (null second-party Bloch vector)."""
        return DensityMatrix.normalized(
            reconstruct(BlochForm(self.a, np.zeros(3), np.diag(self.w)))
        )


def f3_value(b: BlochForm) -> float:
    """Three-settings steering weight Tr(W^T W); above 1 certifies steering."""
    return float(np.sum(b.W * b.W))


def cjwr_value(rho: DensityMatrix, ta: MeasurementTriad, tc: MeasurementTriad) -> float:
    """Three-settings correlator sum |sum_i a_i.W.c_i| / sqrt(3)."""
    W = decompose(rho).W
    total = sum(float(ta.vectors[i] @ W @ tc.vectors[i]) for i in range(3))
    return abs(total) / math.sqrt(3)


def _balanced_rotation(M: np.ndarray) -> np.ndarray:
    """Rotation R equalizing the diagonal of R M R^T (M symmetric PSD).

    Pairwise Givens steps on the current extreme diagonal entries; the
    diagonal spread contracts to zero, which is where the correlator sum
    over an orthonormal triad is maximal.
    """
    R = np.eye(3)
    for _ in range(80):
        Mp = R @ M @ R.T
        d = np.diag(Mp)
        if d.max() - d.min() < 1e-13:
            break
        i, j = int(np.argmax(d)), int(np.argmin(d))

        def gap(th):
            G = np.eye(3)
            G[i, i] = G[j, j] = math.cos(th)
            G[i, j] = -math.sin(th)
            G[j, i] = math.sin(th)
            Mq = G @ Mp @ G.T
            return Mq[i, i] - Mq[j, j]

        th = brentq(gap, 0.0, math.pi / 2)
        G = np.eye(3)
        G[i, i] = G[j, j] = math.cos(th)
        G[i, j] = -math.sin(th)
        G[j, i] = math.sin(th)
        R = G @ R
    return R


def cjwr_max(rho: DensityMatrix) -> CriterionReport:
    """Maximum of the three-settings correlator sum, equal to sqrt(f3).

    The first party's directions must form an orthonormal triad; the second
    party's are free unit vectors. Under that constraint the maximum has a
    closed form: balance diag(R W W^T R^T) to pick the triad, then point
    each second-party direction along W^T a_i. The returned witness carries
    both direction sets (the second party's need not be orthogonal).
    """
    W = decompose(rho).W
    R = _balanced_rotation(W @ W.T)
    norms = np.linalg.norm(W.T @ R.T, axis=0)
    charlie = []
    for i in range(3):
        wa = W.T @ R[i]
        charlie.append(wa / norms[i] if norms[i] > 1e-15 else np.array([0.0, 0.0, 1.0]))
    value = float(np.sum(norms)) / math.sqrt(3)
    closed = math.sqrt(float(np.sum(W * W)))
    if abs(value - closed) > 1e-6:
        raise InternalError(f"triad balancing missed the closed form: {value} vs {closed}")
    witness = {"alice": R, "charlie": np.array(charlie)}
    return _report("cjwr", value, 1.0, witness)


def _bell_objective_terms(rho: DensityMatrix):
    b = decompose(rho)
    return b.u, b.v, b.W


def _joint_prob(u, v, W, a, b) -> float:
    return (1.0 + a @ u + b @ v + a @ W @ b) / 4.0


def chsh_max(rho: DensityMatrix, cfg: OptConfig = OptConfig()) -> CriterionReport:
    """Maximum of the probability-form CHSH expression over four directions.

    Local states satisfy value <= 0. The local Bloch vectors cancel exactly
    in this combination, so the maximum equals (2 sqrt(M) - 2)/4 with M the
    sum of the two largest eigenvalues of W^T W; that closed form seeds the
    first restart and is carried in the witness as a cross-check.
    """
    u, v, W = _bell_objective_terms(rho)

    def value_at(a1, a2, b1, b2):
        pa1 = (1.0 + a1 @ u) / 2.0
        pb1 = (1.0 + b1 @ v) / 2.0
        return (
            -pa1
            - pb1
            - _joint_prob(u, v, W, a2, b2)
            + _joint_prob(u, v, W, a1, b1)
            + _joint_prob(u, v, W, a1, b2)
            + _joint_prob(u, v, W, a2, b1)
        )

    def neg(x):
        return -value_at(
            unit_vector(x[0], x[1]),
            unit_vector(x[2], x[3]),
            unit_vector(x[4], x[5]),
            unit_vector(x[6], x[7]),
        )

    def angles_of(n):
        return [math.acos(max(-1.0, min(1.0, n[2]))), math.atan2(n[1], n[0])]

    # analytic optimum from the top singular pair of W
    U, sv, Vt = np.linalg.svd(W)
    chi = math.atan2(sv[1], sv[0])
    b1v = math.cos(chi) * Vt[0] + math.sin(chi) * Vt[1]
    b2v = math.cos(chi) * Vt[0] - math.sin(chi) * Vt[1]
    starts = [np.array(angles_of(U[:, 0]) + angles_of(U[:, 1]) + angles_of(b1v) + angles_of(b2v))]
    for i in range(cfg.restarts - 1):
        rng = np.random.default_rng([cfg.seed, i])
        starts.append(rng.uniform(0.0, math.pi, 8) * np.array([1, 2, 1, 2, 1, 2, 1, 2]))

    best, best_x, converged = -math.inf, None, 0
    for x0 in starts:
        res = _nm(neg, x0, cfg)
        converged += bool(res.success)
        if -res.fun > best:
            best, best_x = -res.fun, res.x
    horodecki = (2 * math.sqrt(sv[0] ** 2 + sv[1] ** 2) - 2) / 4
    witness = {
        "directions": [unit_vector(best_x[2 * k], best_x[2 * k + 1]) for k in range(4)],
        "horodecki": horodecki,
        "converged_restarts": converged,
    }
    return _report("chsh", best, 0.0, witness)


def i3322_max(rho: DensityMatrix, cfg: OptConfig = OptConfig()) -> CriterionReport:
    """Maximum of the three-settings facet Bell expression over six directions.

    Local states satisfy value <= 0; the maximally entangled value is 0.25.
    """
    u, v, W = _bell_objective_terms(rho)

    def neg(x):
        a = [unit_vector(x[0], x[1]), unit_vector(x[2], x[3]), unit_vector(x[4], x[5])]
        b = [unit_vector(x[6], x[7]), unit_vector(x[8], x[9]), unit_vector(x[10], x[11])]

        def P(i, j):
            return _joint_prob(u, v, W, a[i], b[j])

        val = (
            -2 * (1.0 + b[0] @ v) / 2.0
            - (1.0 + b[1] @ v) / 2.0
            - (1.0 + a[0] @ u) / 2.0
            + P(0, 0) + P(0, 1) + P(0, 2)
            + P(1, 0) + P(1, 1) - P(1, 2)
            + P(2, 0) - P(2, 1)
        )
        return -val

    best, best_x, converged = -math.inf, None, 0
    for i in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, i])
        x0 = rng.uniform(0.0, math.pi, 12) * np.tile([1, 2], 6)
        res = _nm(neg, x0, cfg)
        converged += bool(res.success)
        if -res.fun > best:
            best, best_x = -res.fun, res.x
    dirs = [unit_vector(best_x[2 * k], best_x[2 * k + 1]) for k in range(6)]
    witness = {"directions": dirs, "converged_restarts": converged}
    return _report("i3322", best, 0.0, witness)


def bell_local_3322(rho: DensityMatrix, cfg: OptConfig = OptConfig()) -> CriterionReport:
    """Bell-locality in the (3,3,2,2) scenario: local iff both maxima <= 0."""
    chsh = chsh_max(rho, cfg)
    i3322 = i3322_max(rho, cfg)
    value = max(chsh.value, i3322.value)
    witness = {"chsh": chsh, "i3322": i3322}
    return _report("bell_local_3322", value, 0.0, witness)


def canonical_map(rho: DensityMatrix, exponent: float = -0.5) -> DensityMatrix:
    """Flatten the second-party marginal by a sandwich map and renormalize.

    The default exponent -1/2 nulls the second party's Bloch vector exactly.
    exponent=-1.0 is kept for comparison; it does NOT null that vector and
    is not used by any pipeline here.
    """
    if rho.qubits != 2:
        raise ArgumentError("canonical map is defined for two-qubit states")
    rb = partial_trace(rho, (1,)).mat
    vals, vecs = eig_hermitian(rb)
    if vals.min() < 1e-12:
        raise SingularMarginalError(
            f"second-party marginal has eigenvalue {vals.min():.3e}"
        )
    X = (vecs * vals**exponent) @ vecs.conj().T
    sx = kron(np.eye(2), X)
    m = sx @ rho.mat @ sx
    return DensityMatrix.normalized(m)


def canonical_form(rho: DensityMatrix) -> CanonicalForm:
    """Canonical form (a, w) of a two-qubit state.

    Applies the marginal-flattening map, then local rotations diagonalizing
    the correlation tensor. Raises SingularMarginalError when the
    second-party marginal is not invertible.
    """
    flat = canonical_map(rho)
    diag = diagonalize_correlation(decompose(flat))
    if np.linalg.norm(diag.base.v) > 1e-9:
        raise InternalError("canonical map left a non-null second-party Bloch vector")
    return CanonicalForm(diag.base.u, np.diag(diag.base.W))


def bowles_criterion_value(c: CanonicalForm, x: np.ndarray) -> float:
    """Criterion integrand (a.x)^2 + 2|diag(w) x| at direction x."""
    return float((c.a @ x) ** 2 + 2 * np.linalg.norm(c.w * x))


def bowles_unsteerable(c: CanonicalForm, cfg: OptConfig = OptConfig()) -> CriterionReport:
    """Sufficient unsteerability check on a canonical form.

    Maximizes (a.x)^2 + 2|diag(w) x| over unit x. A satisfied verdict
    certifies unsteerability (one way, first party steering); violated means
    undecided, since the criterion is sufficient only.
    """
    res = max_unit_sphere(lambda x: bowles_criterion_value(c, x), cfg)
    witness = {"x": res.argmax, "converged_restarts": res.converged_restarts}
    return _report("bowles", res.value, 1.0, witness)


def closed_form_unsteerable(c: CanonicalForm) -> CriterionReport:
    """Closed form of the criterion maximum for a null local Bloch vector.

    With a = 0 the maximum over directions sits on a coordinate axis and
    equals 2 max_j |w_j|.
    """
    if np.linalg.norm(c.a) > 1e-10:
        raise PreconditionError("closed form needs a null local Bloch vector")
    j = int(np.argmax(np.abs(c.w)))
    value = 2 * abs(float(c.w[j]))
    return _report("closed_form", value, 1.0, {"axis": j})


_PAIR_NAMES = ("(1,2)", "(1,3)", "(2,3)")


def reduced_steering(rho3: DensityMatrix) -> CriterionReport:
    """Steering of a tripartite state via its bipartite reductions.

    Value is the largest f3 over the three pairs; violated means at least
    one reduced pair is three-settings steerable, and the witness names it.
    """
    vals = [f3_value(decompose(pair)) for pair in reduced_pairs(rho3)]
    k = int(np.argmax(vals))
    witness = {"pair": _PAIR_NAMES[k], "values": tuple(float(t) for t in vals)}
    return _report("reduced_steering", vals[k], 1.0, witness)
