"""Parametric input-state families and their closed-form steering conditions.

Two asymmetric noisy-singlet families (gamma1, gamma2) drive the linear and
star networks; the omega family drives the genuine-activation pipeline; the
werner family is kept for calibration. Family names double as the text
serialization used by the CLI.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, DegenerateDenominatorError
from .qmat import DensityMatrix, basis_ket, validate_density

FAMILIES = ("gamma1", "gamma2", "omega", "werner", "raw")


@dataclass(frozen=True)
class FamilySpec:
    """A family name plus its parameters; `raw` carries a full matrix."""

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ArgumentError(f"unknown family {self.family!r}, expected one of {FAMILIES}")

    @staticmethod
    def from_dict(d: dict) -> "FamilySpec":
        """Parse the CLI JSON object form, e.g. {"family": "gamma1", "p": .., "alpha": ..}."""
        if not isinstance(d, dict) or "family" not in d:
            raise ArgumentError("state spec must be an object with a 'family' key")
        fam = d["family"]
        params = {k: v for k, v in d.items() if k != "family"}
        if fam == "raw":
            if "matrix" not in params:
                raise ArgumentError("raw state spec needs a 'matrix' key")
            rows = params["matrix"]
            try:
                m = np.array(
                    [[complex(c[0], c[1]) for c in row] for row in rows], dtype=complex
                )
            except (TypeError, IndexError) as exc:
                raise ArgumentError("raw matrix must be rows of [re, im] pairs") from exc
            if m.shape != (4, 4):
                raise ArgumentError(f"raw matrix must be 4x4, got {m.shape}")
            params = {"matrix": m}
        return FamilySpec(fam, params)

    def to_dict(self) -> dict:
        d = {"family": self.family}
        for k, v in self.params.items():
            if k == "matrix":
                d[k] = [[[float(c.real), float(c.imag)] for c in row] for row in v]
            else:
                d[k] = float(v)
        return d


def _require(params: dict, names) -> list:
    missing = [n for n in names if n not in params]
    if missing:
        raise ArgumentError(f"missing parameter(s) {missing}")
    extra = sorted(set(params) - set(names))
    if extra:
        raise ArgumentError(f"unexpected parameter(s) {extra}")
    return [params[n] for n in names]


def _check_range(name: str, x: float, lo: float, hi: float, open_ends: bool = False):
    x = float(x)
    bad = not (lo < x < hi) if open_ends else not (lo <= x <= hi)
    if bad:
        kind = "open" if open_ends else "closed"
        raise ArgumentError(f"{name}={x} outside the {kind} range [{lo}, {hi}]")
    return x


def gamma1(p: float, alpha: float) -> DensityMatrix:
    """(1-p)|phi><phi| + p|00><00| with |phi> = sin(alpha)|01> + cos(alpha)|10>."""
    p = _check_range("p", p, 0.0, 1.0)
    alpha = _check_range("alpha", alpha, 0.0, math.pi / 4)
    phi = math.sin(alpha) * basis_ket((0, 1)) + math.cos(alpha) * basis_ket((1, 0))
    k00 = basis_ket((0, 0))
    return DensityMatrix((1 - p) * np.outer(phi, phi.conj()) + p * np.outer(k00, k00.conj()))


def gamma2(p: float, alpha: float) -> DensityMatrix:
    """(1-p)|phi><phi| + p|11><11| with the same |phi> as gamma1."""
    p = _check_range("p", p, 0.0, 1.0)
    alpha = _check_range("alpha", alpha, 0.0, math.pi / 4)
    phi = math.sin(alpha) * basis_ket((0, 1)) + math.cos(alpha) * basis_ket((1, 0))
    k11 = basis_ket((1, 1))
    return DensityMatrix((1 - p) * np.outer(phi, phi.conj()) + p * np.outer(k11, k11.conj()))


def omega(beta: float, s: float) -> DensityMatrix:
    """s|chi><chi| + (1-s) omega1 x I/2, |chi> = cos(beta)|00> + sin(beta)|11>.

    beta is restricted to the open interval (0, pi/2): at the endpoints the
    second-party marginal is singular and the canonical map is undefined.
    """
    beta = _check_range("beta", beta, 0.0, math.pi / 2, open_ends=True)
    s = _check_range("s", s, 0.0, 1.0)
    chi = math.cos(beta) * basis_ket((0, 0)) + math.sin(beta) * basis_ket((1, 1))
    om1 = np.diag([math.cos(beta) ** 2, math.sin(beta) ** 2]).astype(complex)
    return DensityMatrix(s * np.outer(chi, chi.conj()) + (1 - s) * np.kron(om1, np.eye(2) / 2))


def werner(p: float) -> DensityMatrix:
    """p|phi+><phi+| + (1-p) I/4."""
    p = _check_range("p", p, 0.0, 1.0)
    phip = (basis_ket((0, 0)) + basis_ket((1, 1))) / math.sqrt(2)
    return DensityMatrix(p * np.outer(phip, phip.conj()) + (1 - p) * np.eye(4) / 4)


def make_state(spec: FamilySpec) -> DensityMatrix:
    """Construct the density matrix described by a FamilySpec."""
    if spec.family == "gamma1":
        return gamma1(*_require(spec.params, ("p", "alpha")))
    if spec.family == "gamma2":
        return gamma2(*_require(spec.params, ("p", "alpha")))
    if spec.family == "omega":
        return omega(*_require(spec.params, ("beta", "s")))
    if spec.family == "werner":
        return werner(*_require(spec.params, ("p",)))
    (m,) = _require(spec.params, ("matrix",))
    rep = validate_density(m)
    if not rep.ok:
        raise ArgumentError(
            f"raw matrix failed validation: hermitian={rep.hermitian} "
            f"trace_dev={rep.trace_dev:.3e} min_eig={rep.min_eig:.3e}"
        )
    return DensityMatrix(m)


def gamma_f3(p: float, alpha: float) -> float:
    """Correlation-tensor weight 2((1-p)sin2a)^2 + (2p-1)^2 shared by both gamma families."""
    return 2 * ((1 - p) * math.sin(2 * alpha)) ** 2 + (2 * p - 1) ** 2


def gamma_f3_unsteerable(p: float, alpha: float) -> bool:
    """True when the gamma families fail the three-settings steering test."""
    p = _check_range("p", p, 0.0, 1.0)
    alpha = _check_range("alpha", alpha, 0.0, math.pi / 4)
    return gamma_f3(p, alpha) <= 1.0


def phi_branch_f3(p: float, alpha: float) -> float:
    """Closed-form conditional correlation weight for the two phi-branch outcomes.

    Equals f3 of the 00/01 swap conditionals of (gamma1, gamma2) at equal
    (p, alpha); the pair is steerable there iff the value exceeds 1.
    """
    p = _check_range("p", p, 0.0, 1.0)
    alpha = _check_range("alpha", alpha, 0.0, math.pi / 4)
    c2, c4 = math.cos(2 * alpha), math.cos(4 * alpha)
    num = 9 - 26 * p + 25 * p * p + 4 * (3 - 8 * p + 5 * p * p) * c2 + 3 * (1 - p) ** 2 * c4
    den = 2 * (-1 - p + (-1 + p) * c2) ** 2
    if den < 1e-12:
        raise DegenerateDenominatorError(f"denominator {den:.3e} at p={p}, alpha={alpha}")
    return num / den


def psi_branch_f3(p: float, alpha: float) -> float:
    """Closed-form conditional correlation weight for the two psi-branch outcomes (10/11)."""
    p = _check_range("p", p, 0.0, 1.0)
    alpha = _check_range("alpha", alpha, 0.0, math.pi / 4)
    c2, c4 = math.cos(2 * alpha), math.cos(4 * alpha)
    n2 = (3 - 2 * p + 3 * p * p - 4 * (-1 + p) * p * c2 + (-1 + p) ** 2 * c4) ** 2
    n3 = (3 - 10 * p + 11 * p * p + 4 * (-1 + p) * p * c2 + (-1 + p) ** 2 * c4) ** 2
    if n2 < 1e-12:
        raise DegenerateDenominatorError(f"denominator {n2:.3e} at p={p}, alpha={alpha}")
    return (8 * (1 - p) ** 4 * math.sin(2 * alpha) ** 4 + n3) / n2


def omega_unsteerable(beta: float, s: float) -> bool:
    """Closed-form sufficient unsteerability gate for the omega family.

    s = 0 is vacuously true (the state is then a product with I/2).
    """
    beta = _check_range("beta", beta, 0.0, math.pi / 2, open_ends=True)
    s = _check_range("s", s, 0.0, 1.0)
    if s == 0:
        return True
    return math.cos(2 * beta) ** 2 >= (2 * s - 1) / ((2 - s) * s**3)
