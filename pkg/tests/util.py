"""Shared samplers and dense-matrix oracles used across the test modules.

The oracles here deliberately avoid the package's own contraction code:
swaps are cross-checked against explicit projector algebra built with plain
numpy kron and index loops.
"""

import numpy as np

from steernet import DensityMatrix

I2 = np.eye(2)


def rand_state(rng, qubits=2) -> DensityMatrix:
    n = 2**qubits
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = g @ g.conj().T
    return DensityMatrix(h / np.trace(h).real)


def bell_diagonal(w) -> DensityMatrix:
    """(I + sum_j w_j s_j x s_j)/4; caller must supply a PSD-compatible w."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    m = np.eye(4, dtype=complex)
    for wj, s in zip(w, (sx, sy, sz)):
        m = m + wj * np.kron(s, s)
    return DensityMatrix(m / 4)


def sample_bell_diagonal(rng, wmax=1.0, ball=True):
    """Rejection-sample Bell-diagonal correlation triples giving valid states."""
    while True:
        w = rng.uniform(-wmax, wmax, 3)
        if ball and np.sum(w * w) > 1.0:
            continue
        # all four Bell-basis eigenvalues must stay positive
        e = (
            1 + w[0] - w[1] + w[2],
            1 - w[0] + w[1] + w[2],
            1 + w[0] + w[1] - w[2],
            1 - w[0] - w[1] - w[2],
        )
        if min(e) < 1e-9:
            continue
        return w, bell_diagonal(w)


def chain_swap_oracle(rho_ab, rho_bc, bell_vec):
    """Probability and conditional of one BSM branch by dense projection.

    Qubit order (A, B1, B2, C); the Bell projector acts on the adjacent
    middle pair, the conditional keeps the outer pair.
    """
    joint = np.kron(rho_ab.mat, rho_bc.mat)
    proj = np.outer(bell_vec, bell_vec.conj())
    op = np.kron(I2, np.kron(proj, I2))
    m = op @ joint @ op
    p = np.trace(m).real
    if p < 1e-14:
        return p, None
    m = m / p
    cond = np.zeros((4, 4), dtype=complex)
    t = m.reshape(2, 2, 2, 2, 2, 2, 2, 2)
    for a in range(2):
        for c in range(2):
            for a2 in range(2):
                for c2 in range(2):
                    for b1 in range(2):
                        for b2 in range(2):
                            cond[2 * a + c, 2 * a2 + c2] += t[a, b1, b2, c, a2, b1, b2, c2]
    return p, cond


def _perm_matrix_star():
    """64x64 permutation from order (A1,B1,A2,B2,A3,B3) to (A1,A2,A3,B1,B2,B3)."""
    P = np.zeros((64, 64))
    for a1 in range(2):
        for b1 in range(2):
            for a2 in range(2):
                for b2 in range(2):
                    for a3 in range(2):
                        for b3 in range(2):
                            src = a1 * 32 + b1 * 16 + a2 * 8 + b2 * 4 + a3 * 2 + b3
                            dst = a1 * 32 + a2 * 16 + a3 * 8 + b1 * 4 + b2 * 2 + b3
                            P[dst, src] = 1.0
    return P


def star_swap_oracle(rho1, rho2, rho3, delta_vec):
    """Probability and 8x8 conditional for one star branch, dense route."""
    joint = np.kron(np.kron(rho1.mat, rho2.mat), rho3.mat)
    P = _perm_matrix_star()
    joint = P @ joint @ P.T
    proj = np.outer(delta_vec, delta_vec.conj())
    op = np.kron(np.eye(8), proj)
    m = op @ joint @ op
    p = np.trace(m).real
    if p < 1e-14:
        return p, None
    t = (m / p).reshape(8, 8, 8, 8)
    cond = np.einsum("aibi->ab", t)
    return p, cond
