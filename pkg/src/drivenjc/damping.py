"""Damping bases: the right eigenoperators of the dissipative generator.

In the dressed computational basis (index order E0, E-, E+) the generator of
the master equation is diagonalized by nine operators

    rho_00 = |E0><E0|
    rho_ab = |E_a><E_b| - delta_ab |E0><E0|     for (a, b) != (0, 0)

with eigenvalues lambda_ab = -i(E_a - E_b) + decay(a, b), where the decay
part is 0 for (0,0), -gamma_a/2 on the excited diagonals, -gamma_a/4 for
pairs involving the ground state, and -(gamma_+ + gamma_-)/4 for the (-,+)
coherences. Density-matrix evolution is then a sum of nine exponentials:
expand once, multiply by exp(lambda t), resum.

Vectorization is column-stacking throughout (Fortran order), matching the
superoperator layout in the liouvillian companion module.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .model import DressedSpectrum

# row-major over the dressed index characters ('0', '-', '+')
PAIR_LABELS = ("00", "0-", "0+", "-0", "--", "-+", "+0", "+-", "++")

_CHAR_INDEX = {"0": 0, "-": 1, "+": 2}

# spanning is parameter-independent; cond(B) = 2 + sqrt(3)
_COND_LIMIT = 1e3


class DegenerateRatesWarning(UserWarning):
    """gamma_+ == gamma_- collapses eigenvalue distinctions between pairs."""


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(matrix).reshape(-1, order="F")


def unvec(vector: np.ndarray) -> np.ndarray:
    """Inverse of vec for 3x3 matrices."""
    return np.asarray(vector).reshape((3, 3), order="F")


@dataclass(frozen=True)
class RatePair:
    """Decay rates gamma(E- - E0), gamma(E+ - E0) in units of omega_z."""

    gamma_minus: float
    gamma_plus: float

    def __post_init__(self):
        if self.gamma_minus < 0.0 or self.gamma_plus < 0.0:
            raise ValueError(
                f"rates must be nonnegative, got ({self.gamma_minus}, {self.gamma_plus})"
            )
        if self.gamma_minus == self.gamma_plus:
            warnings.warn(
                f"gamma_+ == gamma_- == {self.gamma_plus}: the excited-diagonal "
                "eigenvalues become degenerate",
                DegenerateRatesWarning,
                stacklevel=2,
            )


def _decay_part(a: str, b: str, rates: RatePair) -> float:
    if a == b == "0":
        return 0.0
    gm, gp = rates.gamma_minus, rates.gamma_plus
    rate_of = {"-": gm, "+": gp}
    if a == b:
        return -rate_of[a] / 2.0
    if a == "0" or b == "0":
        return -rate_of[a if b == "0" else b] / 4.0
    return -(gm + gp) / 4.0


@dataclass(frozen=True)
class DampingBasisSet:
    """The nine eigen-operators, their eigenvalues, and the solve matrix.

    matrices has shape (9, 3, 3) in PAIR_LABELS order; lambdas the matching
    eigenvalues; basis_matrix the 9x9 array whose columns are the vectorized
    bases, used to expand arbitrary states by linear solve.
    """

    spectrum: DressedSpectrum
    rates: RatePair
    matrices: np.ndarray
    lambdas: np.ndarray
    basis_matrix: np.ndarray

    def index(self, label: str) -> int:
        try:
            return PAIR_LABELS.index(label)
        except ValueError:
            raise ValueError(f"unknown pair label {label!r}; expected one of {PAIR_LABELS}") from None

    def matrix(self, label: str) -> np.ndarray:
        return self.matrices[self.index(label)]

    def eigenvalue(self, label: str) -> complex:
        return self.lambdas[self.index(label)]


def build_damping_bases(spectrum: DressedSpectrum, rates: RatePair) -> DampingBasisSet:
    """Construct bases and eigenvalues for the given spectrum and rates.

    The eigenvalues use the energy differences of the perturbed spectrum
    directly; the unitary part of the generator is diagonal in the dressed
    basis, so these are exact there (not merely perturbative).
    """
    energy = {"0": spectrum.E0, "-": spectrum.Eminus, "+": spectrum.Eplus}
    mats = np.zeros((9, 3, 3), dtype=complex)
    lams = np.zeros(9, dtype=complex)
    for k, label in enumerate(PAIR_LABELS):
        a, b = label[0], label[1]
        mats[k, _CHAR_INDEX[a], _CHAR_INDEX[b]] = 1.0
        if a == b and a != "0":
            mats[k, 0, 0] -= 1.0
        lams[k] = -1j * (energy[a] - energy[b]) + _decay_part(a, b, rates)

    basis_matrix = np.column_stack([vec(m) for m in mats])
    cond = np.linalg.cond(basis_matrix)
    # cannot trip for any valid spectrum; guards accidental basis edits
    assert cond < _COND_LIMIT, f"damping bases ill-conditioned: cond={cond:.3g}"
    return DampingBasisSet(
        spectrum=spectrum,
        rates=rates,
        matrices=mats,
        lambdas=lams,
        basis_matrix=basis_matrix,
    )


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Nine complex weights M_ab in PAIR_LABELS order."""

    values: np.ndarray

    def get(self, label: str) -> complex:
        return self.values[PAIR_LABELS.index(label)]

    def hermiticity_residual(self) -> float:
        """Max |M_ba - conj(M_ab)|; zero for expansions of Hermitian inputs."""
        worst = 0.0
        for k, label in enumerate(PAIR_LABELS):
            swapped = PAIR_LABELS.index(label[1] + label[0])
            worst = max(worst, abs(self.values[swapped] - np.conj(self.values[k])))
        return worst


def _check_physical(rho0: np.ndarray, tol: float) -> None:
    if rho0.shape != (3, 3):
        raise ValueError(f"expected a 3x3 density matrix, got shape {rho0.shape}")
    if np.max(np.abs(rho0 - rho0.conj().T)) > tol:
        raise ValueError("input density matrix is not Hermitian")
    if abs(np.trace(rho0) - 1.0) > tol:
        raise ValueError(f"input density matrix has trace {np.trace(rho0)}, expected 1")
    if np.min(np.linalg.eigvalsh(rho0)) < -tol:
        raise ValueError("input density matrix is not positive semidefinite")


def expand_state(
    rho0: np.ndarray,
    bases: DampingBasisSet,
    tol: float = 1e-9,
) -> ExpansionCoefficients:
    """Exact expansion of a physical state over the nine bases.

    Solves the 9x9 linear system built from the vectorized bases; the bases
    span the full operator space, so the solution is exact to solver
    roundoff for any input. The trace forces M_00 = 1 for normalized states
    (rho_00 is the only trace-carrying basis element).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    _check_physical(rho0, tol)
    values = np.linalg.solve(bases.basis_matrix, vec(rho0))
    return ExpansionCoefficients(values=values)


def evolve_analytic(
    coeffs: ExpansionCoefficients,
    bases: DampingBasisSet,
    t: float | np.ndarray,
):
    """Resum the nine-exponential formal solution at time(s) t.

    Scalar t gives a 3x3 matrix; an array of times gives shape (nt, 3, 3).
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0.0):
        raise ValueError("evolution times must be nonnegative")
    phases = np.exp(np.outer(t_arr, bases.lambdas))
    out = np.einsum("k,tk,kij->tij", coeffs.values, phases, bases.matrices)
    if np.isscalar(t) or np.ndim(t) == 0:
        return out[0]
    return out
