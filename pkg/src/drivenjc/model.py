"""Physical parameters and first-order dressed spectrum of the driven system.

The model is a two-level system (splitting omega_z) coupled to a single
cavity mode (coupling Omega) at exact resonance omega_c = omega_z, with a
weak classical drive of strength xi on the cavity. Only the lowest three
bare levels take part at weak excitation, in the fixed order

    |g,0>, |e,0>, |g,1>

and everything is expressed in units of omega_z. The drive mixes the ground
state into the one-excitation doublet; treating xi as a perturbation gives
the dressed triplet

    E0  = -omega_z/2 - omega_z xi^2 / (omega_z^2 - Omega^2)
    E+- = +omega_z/2 +- Omega + xi^2 / (2 (omega_z +- Omega))

with eigenvectors correct to first order in xi. The perturbed vectors are
deliberately not renormalized: they serve as an orthonormal computational
basis with O(xi^2) bookkeeping error, which keeps every downstream spectral
construction exact in that basis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

BARE_LABELS = ("g0", "e0", "g1")

# xi / (omega_z - Omega) must stay below this for the expansion to make sense
WEAK_DRIVE_RATIO_MAX = 0.5


class StrongDriveWarning(UserWarning):
    """Drive strength is outside the validated perturbative window."""


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless system parameters, omega_z = 1 internally.

    omega_z_ghz is display metadata only (the physical scale the ratios were
    derived from); it never enters a computation.
    """

    Omega: float
    xi: float
    omega_z: float = 1.0
    omega_c: float = 1.0
    omega_z_ghz: float | None = None
    allow_strong_drive: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.omega_c == self.omega_z:
            raise ValueError(
                f"off-resonant operation not supported: omega_c={self.omega_c} "
                f"!= omega_z={self.omega_z}"
            )
        if not 0.0 < self.Omega < self.omega_z:
            raise ValueError(f"Omega must lie in (0, omega_z), got {self.Omega}")
        if self.xi < 0.0:
            raise ValueError(f"xi must be nonnegative, got {self.xi}")
        ratio = self.xi / (self.omega_z - self.Omega)
        if ratio >= WEAK_DRIVE_RATIO_MAX:
            if not self.allow_strong_drive:
                raise ValueError(
                    f"weak-drive guard: xi/(omega_z-Omega)={ratio:.3g} >= "
                    f"{WEAK_DRIVE_RATIO_MAX}; pass allow_strong_drive=True to override"
                )
            warnings.warn(
                f"xi/(omega_z-Omega)={ratio:.3g} exceeds the perturbative "
                "window; first-order results are unreliable",
                StrongDriveWarning,
                stacklevel=2,
            )


def build_params(
    omega_z_ghz: float,
    Omega_ratio: float,
    xi_ratio: float,
    allow_strong_drive: bool = False,
) -> ModelParams:
    """Normalize physical inputs to internal units (omega_z = 1).

    Omega_ratio and xi_ratio are Omega/omega_z and xi/omega_z; the GHz value
    is kept for reporting only.
    """
    if omega_z_ghz <= 0.0:
        raise ValueError(f"omega_z_ghz must be positive, got {omega_z_ghz}")
    return ModelParams(
        Omega=Omega_ratio,
        xi=xi_ratio,
        omega_z_ghz=omega_z_ghz,
        allow_strong_drive=allow_strong_drive,
    )


def bare_hamiltonian(params: ModelParams) -> np.ndarray:
    """Exact Hamiltonian on the truncated bare basis (validation oracle).

    The drive couples |g,0> to |g,1> with amplitude xi; the cavity couples
    |e,0> to |g,1> with amplitude Omega. Used to validate the perturbative
    spectrum, never in production paths.
    """
    wz, Om, xi = params.omega_z, params.Omega, params.xi
    return np.array(
        [
            [-wz / 2.0, 0.0, xi],
            [0.0, wz / 2.0, Om],
            [xi, Om, wz / 2.0],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class DressedSpectrum:
    """Perturbed energies and eigenvectors, plus derived frequencies.

    Vectors are length-3 amplitudes in BARE_LABELS order, first order in xi,
    not renormalized. omega_plus/omega_minus are the transition frequencies
    out of the ground dressed state; Delta is the corrected oscillation
    frequency E+ - E-; eta = xi omega_z / (omega_z^2 - Omega^2) is the
    dimensionless drive admixture of the cavity quadrature.
    """

    params: ModelParams
    E0: float
    Eminus: float
    Eplus: float
    omega_minus: float
    omega_plus: float
    Delta: float
    eta: float
    v0: np.ndarray
    vminus: np.ndarray
    vplus: np.ndarray

    def dressed_matrix(self) -> np.ndarray:
        """Columns (v0, v-, v+) in bare coordinates; orthogonal to O(xi^2)."""
        return np.column_stack([self.v0, self.vminus, self.vplus])

    def bare_in_dressed(self, label: str) -> np.ndarray:
        """Dressed coordinates of a bare basis state.

        Uses the transpose of the dressed matrix: at first order the
        perturbation is an orthogonal rotation, so the transpose is the
        inverse up to O(xi^2), consistent with the rest of the bookkeeping.
        """
        try:
            i = BARE_LABELS.index(label)
        except ValueError:
            raise ValueError(f"unknown bare label {label!r}; expected one of {BARE_LABELS}") from None
        return self.dressed_matrix().T[:, i].copy()

    def annihilation_dressed(self) -> np.ndarray:
        """Cavity annihilation operator in the dressed basis, first order.

        Matrix elements <v_a| a |v_b> of a (which maps |g,1> to |g,0> and
        kills the others in the truncated space), evaluated with the
        first-order vectors and truncated at O(xi).
        """
        wz, Om, xi = self.params.omega_z, self.params.Omega, self.params.xi
        bm = xi / (2.0 * (wz - Om))
        bp = xi / (2.0 * (wz + Om))
        s2 = np.sqrt(2.0)
        return np.array(
            [
                [-self.eta, 1.0 / s2, 1.0 / s2],
                [0.0, bm, bm],
                [0.0, bp, bp],
            ],
            dtype=complex,
        )


def dressed_spectrum(params: ModelParams) -> DressedSpectrum:
    """First-order eigenvectors and second-order energies of the drive mixing."""
    wz, Om, xi = params.omega_z, params.Omega, params.xi
    E0 = -wz / 2.0 - wz * xi**2 / (wz**2 - Om**2)
    Em = wz / 2.0 - Om + xi**2 / (2.0 * (wz - Om))
    Ep = wz / 2.0 + Om + xi**2 / (2.0 * (wz + Om))

    s2 = np.sqrt(2.0)
    u0 = np.array([1.0, 0.0, 0.0])
    um = np.array([0.0, -1.0, 1.0]) / s2
    up = np.array([0.0, 1.0, 1.0]) / s2
    am = xi / (s2 * (wz - Om))
    ap = xi / (s2 * (wz + Om))

    return DressedSpectrum(
        params=params,
        E0=E0,
        Eminus=Em,
        Eplus=Ep,
        omega_minus=Em - E0,
        omega_plus=Ep - E0,
        # closed product form, not Ep - Em: reduces bitwise to 2 Omega at xi = 0
        Delta=2.0 * Om * (1.0 - xi**2 / (2.0 * (wz**2 - Om**2))),
        eta=xi * wz / (wz**2 - Om**2),
        v0=u0 - am * um - ap * up,
        vminus=um + am * u0,
        vplus=up + ap * u0,
    )
