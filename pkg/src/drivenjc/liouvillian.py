"""Exact 9x9 superoperator: the brute-force check on the analytic solution.

The master equation in the dressed computational basis has the generator

    L rho = -i [H, rho] + sum_(s=+-) (gamma_s / 2) (2 J_s rho J_s^dag
                                     - J_s^dag J_s rho - rho J_s^dag J_s) / 2

written here with H = diag(E0, E-, E+) and downward jumps J_s = |E0><E_s|
only (zero-temperature bath; upward channels are absent from the generator
by construction). Column-stacked vectorization turns this into a dense 9x9
matrix whose full eigendecomposition, RK4 integration, and steady state are
all cheap, giving an independent path against which the damping-basis
results are validated.

Rates come either as direct numbers or from an Ohmic bath evaluated at the
perturbed transition frequencies, gamma(omega) = kappa omega exp(-omega /
omega_C), with detailed balance gamma(-omega) = exp(-omega/T) gamma(omega)
available at finite temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .damping import RatePair, _check_physical, unvec, vec
from .model import DressedSpectrum
from ._kernels import rk4_propagate


@dataclass(frozen=True)
class DirectRates:
    """Fixed numeric rates for the two transitions.

    omega_minus/omega_plus optionally register the transition frequencies the
    rates belong to, which lets gamma_of answer frequency queries; without
    registration only transition_rates may consume this bath.
    """

    gamma_minus: float
    gamma_plus: float
    omega_minus: float | None = None
    omega_plus: float | None = None

    def __post_init__(self):
        if self.gamma_minus < 0.0 or self.gamma_plus < 0.0:
            raise ValueError("direct rates must be nonnegative")


@dataclass(frozen=True)
class OhmicBath:
    """Linear spectral density with exponential cutoff, k_B = 1."""

    kappa: float
    omega_cutoff: float
    temperature: float = 0.0

    def __post_init__(self):
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be nonnegative, got {self.kappa}")
        if self.omega_cutoff <= 0.0:
            raise ValueError(f"omega_cutoff must be positive, got {self.omega_cutoff}")
        if self.temperature < 0.0:
            raise ValueError(f"temperature must be nonnegative, got {self.temperature}")


BathSpec = DirectRates | OhmicBath


def gamma_of(omega: float, bath: BathSpec) -> float:
    """Bath rate at a signed frequency; detailed balance below zero.

    Positive frequencies emit: kappa omega exp(-omega/omega_C) for the Ohmic
    bath, or the registered direct rate. Negative frequencies absorb, scaled
    by the Boltzmann factor exp(omega/T); at T = 0 absorption vanishes.
    gamma(0) = 0 in all cases.
    """
    if omega == 0.0:
        return 0.0
    if isinstance(bath, DirectRates):
        if omega < 0.0:
            return 0.0
        if omega == bath.omega_minus:
            return bath.gamma_minus
        if omega == bath.omega_plus:
            return bath.gamma_plus
        raise ValueError(
            f"direct-rates bath queried at unregistered frequency {omega}; "
            f"registered: ({bath.omega_minus}, {bath.omega_plus})"
        )
    magnitude = abs(omega)
    rate = bath.kappa * magnitude * math.exp(-magnitude / bath.omega_cutoff)
    if omega > 0.0:
        return rate
    if bath.temperature == 0.0:
        return 0.0
    return math.exp(-magnitude / bath.temperature) * rate


def transition_rates(spectrum: DressedSpectrum, bath: BathSpec) -> RatePair:
    """Rates at the two perturbed transition frequencies out of the ground state."""
    if isinstance(bath, DirectRates):
        return RatePair(bath.gamma_minus, bath.gamma_plus)
    return RatePair(
        gamma_of(spectrum.omega_minus, bath),
        gamma_of(spectrum.omega_plus, bath),
    )


@dataclass(frozen=True)
class LiouvillianMatrix:
    """Dense superoperator with its eigendecomposition precomputed.

    Acts on column-stacked 3x3 matrices. eigenvalues/right_vectors come from
    the dense eigensolve; inverse_vectors caches the inverse for the exact
    propagator exp(L t) = V diag(exp(lambda t)) V^-1.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    inverse_vectors: np.ndarray = field(repr=False)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """L acting on a 3x3 matrix."""
        return unvec(self.matrix @ vec(np.asarray(rho, dtype=complex)))

    def propagate(self, rho0: np.ndarray, times: np.ndarray) -> np.ndarray:
        """Exact evolution exp(L t) rho0 via the eigendecomposition.

        Returns shape (nt, 3, 3). Independent of the RK4 path; the two are
        cross-checked in the test suite.
        """
        times = np.atleast_1d(np.asarray(times, dtype=float))
        weights = self.inverse_vectors @ vec(np.asarray(rho0, dtype=complex))
        phases = np.exp(np.outer(times, self.eigenvalues))
        samples = (phases * weights) @ self.right_vectors.T
        return samples.reshape(-1, 3, 3).transpose(0, 2, 1)

    def steady_state(self) -> np.ndarray:
        """Kernel element, hermitized and normalized to unit trace."""
        k = int(np.argmin(np.abs(self.eigenvalues)))
        rho = unvec(self.right_vectors[:, k])
        rho = 0.5 * (rho + rho.conj().T)
        return rho / np.trace(rho).real


def build_liouvillian(spectrum: DressedSpectrum, rates: RatePair) -> LiouvillianMatrix:
    """Assemble the generator in the dressed computational basis."""
    H = np.diag([spectrum.E0, spectrum.Eminus, spectrum.Eplus]).astype(complex)
    eye = np.eye(3, dtype=complex)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for column, rate in ((1, rates.gamma_minus), (2, rates.gamma_plus)):
        jump = np.zeros((3, 3), dtype=complex)
        jump[0, column] = 1.0
        number = jump.conj().T @ jump
        L += 0.5 * rate * (
            np.kron(jump.conj(), jump)
            - 0.5 * (np.kron(eye, number) + np.kron(number.T, eye))
        )
    eigenvalues, right = scipy.linalg.eig(L)
    return LiouvillianMatrix(
        matrix=L,
        eigenvalues=eigenvalues,
        right_vectors=right,
        inverse_vectors=np.linalg.inv(right),
    )


@dataclass(frozen=True)
class Trajectory:
    """Sampled density-matrix evolution on a strictly increasing grid."""

    times: np.ndarray
    states: np.ndarray
    observables: dict = field(default_factory=dict)

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("time grid must be strictly increasing")
        if self.states.shape != (len(self.times), 3, 3):
            raise ValueError(f"states shape {self.states.shape} does not match grid")
        herm = np.max(np.abs(self.states - self.states.conj().transpose(0, 2, 1)))
        traces = np.einsum("tii->t", self.states)
        trace_err = np.max(np.abs(traces - 1.0))
        if herm > 1e-8 or trace_err > 1e-8:
            raise ValueError(
                f"unphysical trajectory: hermiticity residual {herm:.3e}, "
                f"trace residual {trace_err:.3e}"
            )

    def expect(self, operator: np.ndarray) -> np.ndarray:
        """tr(rho(t) A) along the trajectory."""
        return np.einsum("tij,ji->t", self.states, np.asarray(operator, dtype=complex))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue over all samples; bounds positivity drift."""
        return float(np.min(np.linalg.eigvalsh(self.states)))


def integrate(
    L: LiouvillianMatrix,
    rho0: np.ndarray,
    t_grid: np.ndarray,
    max_step_factor: float = 0.01,
) -> Trajectory:
    """Fixed-step RK4 on the vectorized equation dv/dt = L v.

    The substep inside each grid interval is capped at max_step_factor over
    the spectral radius of L, so accuracy is uniform across parameter sets;
    determinism is exact (no adaptive control).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    _check_physical(rho0, 1e-9)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2:
        raise ValueError("t_grid must be a 1d grid with at least two points")
    spacings = np.diff(t_grid)
    if np.any(spacings <= 0.0):
        raise ValueError("t_grid must be strictly increasing")

    radius = float(np.max(np.abs(L.eigenvalues)))
    h_cap = max_step_factor / radius if radius > 0.0 else np.inf
    counts = np.maximum(1, np.ceil(spacings / h_cap)).astype(np.int64)
    steps = spacings / counts
    if np.any(steps < 1e-13):
        raise ValueError(f"substep underflow: min step {steps.min():.3e}")

    samples = rk4_propagate(L.matrix, vec(rho0), counts, steps)
    if not np.all(np.isfinite(samples)):
        bad = int(np.argmax(~np.all(np.isfinite(samples), axis=1)))
        raise RuntimeError(
            f"integration diverged at t={t_grid[bad]} "
            f"(radius {radius:.3g}, min step {steps.min():.3g})"
        )
    states = samples.reshape(-1, 3, 3).transpose(0, 2, 1)
    return Trajectory(times=t_grid, states=states)


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    """Random full-rank physical state for randomized suites."""
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
