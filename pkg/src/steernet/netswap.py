"""Entanglement-swapping engine for the linear and star networks.

Linear chain: rho_AB x rho_BC with the middle party measuring its two qubits
(joint order A, B1, B2, C) in the Bell basis. Star: three edge parties each
share a pair with the centre, which measures its three qubits in a fixed
8-element orthonormal basis. In every input pair the EDGE party holds the
first qubit and the centre the second; the alternative ordering reproduces
none of the reference activation ranges, so this one is load-bearing.

Outcomes with probability below 1e-12 carry a degenerate flag and a
maximally mixed placeholder; conditioning on null events is undefined.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, InternalError
from .qmat import DensityMatrix, basis_ket, partial_trace

DEGENERATE_PROB = 1e-12


@dataclass(frozen=True, eq=False)
class SwapOutcome:
    """One branch of a joint measurement: label, probability, conditional state."""

    label: str
    probability: float
    conditional: DensityMatrix
    degenerate: bool = False


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Orthonormal, complete set of state vectors defining a joint measurement."""

    vectors: tuple

    def __post_init__(self):
        vs = np.stack(self.vectors)
        gram = vs.conj() @ vs.T
        if np.max(np.abs(gram - np.eye(len(vs)))) > 1e-12:
            raise InternalError("basis vectors are not orthonormal")
        comp = vs.T @ vs.conj()
        if vs.shape[0] == vs.shape[1] and np.max(np.abs(comp - np.eye(vs.shape[1]))) > 1e-12:
            raise InternalError("basis is not complete")


def bell_basis() -> MeasurementBasis:
    """The four Bell vectors, ordered phi+, phi-, psi+, psi- (labels 00,01,10,11)."""
    r = 1 / math.sqrt(2)
    return MeasurementBasis(
        (
            r * (basis_ket((0, 0)) + basis_ket((1, 1))),
            r * (basis_ket((0, 0)) - basis_ket((1, 1))),
            r * (basis_ket((0, 1)) + basis_ket((1, 0))),
            r * (basis_ket((0, 1)) - basis_ket((1, 0))),
        )
    )


def star_basis() -> MeasurementBasis:
    """The eight three-qubit vectors measured by the star centre."""
    r = 1 / math.sqrt(3)
    k = basis_ket
    return MeasurementBasis(
        (
            r * (k((0, 0, 1)) + k((1, 0, 0)) + k((0, 1, 0))),
            r * (k((0, 1, 0)) - k((1, 0, 0)) + k((0, 0, 0))),
            r * (-k((0, 1, 0)) + k((0, 0, 1)) + k((0, 0, 0))),
            r * (k((1, 0, 0)) + k((0, 0, 0)) - k((0, 0, 1))),
            r * (k((1, 0, 1)) + k((1, 1, 0)) + k((0, 1, 1))),
            r * (k((1, 1, 0)) - k((1, 0, 1)) + k((1, 1, 1))),
            r * (-k((1, 1, 0)) + k((1, 1, 1)) + k((0, 1, 1))),
            r * (k((1, 1, 1)) + k((1, 0, 1)) - k((0, 1, 1))),
        )
    )


_BELL = bell_basis()
_STAR = star_basis()
_BELL_LABELS = ("00", "01", "10", "11")

# projectors I x |bell><bell| x I on the joint order (A, B1, B2, C)
_BELL_PROJ = tuple(
    np.kron(np.kron(np.eye(2), np.outer(b, b.conj())), np.eye(2)) for b in _BELL.vectors
)


def _require_two_qubit(rho: DensityMatrix, name: str):
    if not isinstance(rho, DensityMatrix) or rho.qubits != 2:
        raise ArgumentError(f"{name} must be a two-qubit DensityMatrix")


def bsm_swap(rho_ab: DensityMatrix, rho_bc: DensityMatrix) -> list:
    """Bell-basis measurement on the middle party of a two-link chain.

    Parameters
    ----------
    rho_ab, rho_bc : DensityMatrix
        The two shared pairs; in each the outer party holds the first qubit.

    Returns
    -------
    list of SwapOutcome
        Four outcomes labelled 00, 01, 10, 11 with conditionals on (A, C).
        Probabilities sum to 1.
    """
    _require_two_qubit(rho_ab, "rho_ab")
    _require_two_qubit(rho_bc, "rho_bc")
    joint = np.kron(rho_ab.mat, rho_bc.mat)
    out = []
    for label, proj in zip(_BELL_LABELS, _BELL_PROJ):
        m = proj @ joint @ proj
        p = float(np.trace(m).real)
        if p < DEGENERATE_PROB:
            out.append(SwapOutcome(label, max(p, 0.0), DensityMatrix(np.eye(4) / 4), True))
            continue
        cond4 = DensityMatrix.normalized(m / p)
        out.append(SwapOutcome(label, p, partial_trace(cond4, (0, 3))))
    return out


def star_swap(rho1: DensityMatrix, rho2: DensityMatrix, rho3: DensityMatrix) -> list:
    """Three-qubit joint measurement at the centre of a three-pair star.

    The 64-dimensional joint state is never materialized; each outcome's
    8x8 conditional on the edge parties is contracted directly from the
    three input pairs.

    Returns
    -------
    list of SwapOutcome
        Eight outcomes labelled "1".."8".
    """
    for i, r in enumerate((rho1, rho2, rho3)):
        _require_two_qubit(r, f"rho{i + 1}")
    # axes (edge, centre, edge', centre') per input pair
    t1 = rho1.mat.reshape(2, 2, 2, 2)
    t2 = rho2.mat.reshape(2, 2, 2, 2)
    t3 = rho3.mat.reshape(2, 2, 2, 2)
    out = []
    for j, vec in enumerate(_STAR.vectors):
        d = vec.reshape(2, 2, 2)
        m = np.einsum(
            "ibjq,kcls,mdnt,bcd,qst->ikmjln",
            t1, t2, t3, d.conj(), d, optimize=True,
        ).reshape(8, 8)
        p = float(np.trace(m).real)
        if p < DEGENERATE_PROB:
            out.append(SwapOutcome(str(j + 1), max(p, 0.0), DensityMatrix(np.eye(8) / 8), True))
            continue
        out.append(SwapOutcome(str(j + 1), p, DensityMatrix.normalized(m / p)))
    return out


def reduced_pairs(rho3: DensityMatrix) -> tuple:
    """The three bipartite reductions of a three-qubit state.

    Returns the pairs in the order (1,2), (1,3), (2,3).
    """
    if rho3.qubits != 3:
        raise ArgumentError("expected a three-qubit state")
    return (
        partial_trace(rho3, (0, 1)),
        partial_trace(rho3, (0, 2)),
        partial_trace(rho3, (1, 2)),
    )
