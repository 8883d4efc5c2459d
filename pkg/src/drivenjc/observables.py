"""Reported physical quantities built on the damping-basis solution.

Covers the population dynamics of the initially inverted system, the
steady-state field correlations and their noise spectrum (two Lorentzians
whose separation is the driving-corrected vacuum Rabi splitting), and the
qubit decoherence factor family D, D0, deltaD for superposition initial
states. Closed forms are first order in the drive xi; every one of them is
cross-checked against the exact linear-solve/superoperator pipeline in the
test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.signal

from .damping import (
    PAIR_LABELS,
    DampingBasisSet,
    ExpansionCoefficients,
    RatePair,
    build_damping_bases,
)
from .liouvillian import LiouvillianMatrix
from .model import DressedSpectrum

CORRELATION_KINDS = ("adag_a", "a_a", "adag_adag", "a_adag", "x_x")


@dataclass(frozen=True)
class InitialQubitState:
    """Real-amplitude qubit superposition c_g e^{i phi}|g,0> + c_e|e,0>."""

    c_g: float
    c_e: float
    phi: float = 0.0

    def __post_init__(self):
        if self.c_g < 0.0 or self.c_e < 0.0:
            raise ValueError("amplitudes must be nonnegative")
        norm = np.hypot(self.c_g, self.c_e)
        if norm == 0.0:
            raise ValueError("state amplitudes cannot both vanish")
        object.__setattr__(self, "c_g", float(self.c_g / norm))
        object.__setattr__(self, "c_e", float(self.c_e / norm))

    @classmethod
    def from_ratio(cls, ce_over_cg: float, phi: float = 0.0) -> "InitialQubitState":
        if ce_over_cg < 0.0:
            raise ValueError("amplitude ratio must be nonnegative")
        return cls(c_g=1.0, c_e=ce_over_cg, phi=phi)

    def dressed_vector(self, spectrum: DressedSpectrum) -> np.ndarray:
        """First-order dressed coordinates of the initial state."""
        g = spectrum.bare_in_dressed("g0").astype(complex)
        e = spectrum.bare_in_dressed("e0").astype(complex)
        return self.c_g * np.exp(1j * self.phi) * g + self.c_e * e

    def density_matrix(self, spectrum: DressedSpectrum) -> np.ndarray:
        """Normalized projector onto the dressed coordinates."""
        psi = self.dressed_vector(spectrum)
        rho = np.outer(psi, psi.conj())
        return rho / np.trace(rho).real


def _minute_amplitude(spectrum: DressedSpectrum) -> float:
    # zeta^2 with zeta = xi Omega / (omega_z^2 - Omega^2)
    wz, Om, xi = spectrum.params.omega_z, spectrum.params.Omega, spectrum.params.xi
    return (xi * Om / (wz**2 - Om**2)) ** 2


def excited_population_analytic(
    spectrum: DressedSpectrum,
    rates: RatePair,
    t: float | np.ndarray,
):
    """Closed-form excited population from full initial inversion.

    Quarter-sum of the two excited-diagonal decays, the main oscillation at
    the corrected frequency Delta under the mean decay, and two minute
    oscillations of amplitude zeta^2 at the transition frequencies. The
    closed form drops an O(xi^2) cross term, so it may legitimately exceed 1
    by up to 2 zeta^2; the sanity window accounts for that.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    gm, gp = rates.gamma_minus, rates.gamma_plus
    z2 = _minute_amplitude(spectrum)
    values = (
        0.25 * (np.exp(-gm * t_arr / 2.0) + np.exp(-gp * t_arr / 2.0))
        + 0.5 * np.exp(-(gm + gp) * t_arr / 4.0) * np.cos(spectrum.Delta * t_arr)
        + z2 * (
            np.exp(-gm * t_arr / 4.0) * np.cos(spectrum.omega_minus * t_arr)
            + np.exp(-gp * t_arr / 4.0) * np.cos(spectrum.omega_plus * t_arr)
        )
    )
    slack = 1e-6 + 2.0 * z2
    if values.min() < -slack or values.max() > 1.0 + slack:
        raise ValueError(
            f"population left [0, 1] beyond the first-order allowance: "
            f"range [{values.min():.6g}, {values.max():.6g}]"
        )
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(values[0])
    return values


def excited_population_numeric(states: np.ndarray, spectrum: DressedSpectrum) -> np.ndarray:
    """<e,0| rho |e,0> along a dressed-basis trajectory array (nt, 3, 3)."""
    e = spectrum.bare_in_dressed("e0").astype(complex)
    return np.einsum("i,tij,j->t", e.conj(), states, e).real


@dataclass(frozen=True)
class CorrelationResult:
    """Two-time steady-state correlation split into decaying and flat parts."""

    kind: str
    tau: np.ndarray
    values: np.ndarray
    exponential_part: np.ndarray
    constant: float


def correlation(
    kind: str,
    spectrum: DressedSpectrum,
    rates: RatePair,
    tau: np.ndarray,
) -> CorrelationResult:
    """Closed-form field correlations out of the dressed ground state.

    Only <a(tau) a^dag(0)> (and therefore the quadrature correlation) has
    decaying content: the two ground-coherence exponentials with weights
    one-half. The normally ordered pairs are frozen at the drive admixture
    eta^2 because the steady state is an eigenstate of the shifted mode.
    """
    if kind not in CORRELATION_KINDS:
        raise ValueError(f"unknown correlation kind {kind!r}; expected one of {CORRELATION_KINDS}")
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(tau_arr < 0.0):
        raise ValueError("correlation delays must be nonnegative")
    eta2 = spectrum.eta**2
    lam_0m = -rates.gamma_minus / 4.0 + 1j * spectrum.omega_minus
    lam_0p = -rates.gamma_plus / 4.0 + 1j * spectrum.omega_plus
    decaying = 0.5 * (np.exp(lam_0p * tau_arr) + np.exp(lam_0m * tau_arr))
    if kind in ("adag_a", "a_a", "adag_adag"):
        exponential = np.zeros_like(tau_arr, dtype=complex)
        constant = eta2
    elif kind == "a_adag":
        exponential = decaying
        constant = eta2
    else:  # x_x: all four pairs summed
        exponential = decaying
        constant = 4.0 * eta2
    return CorrelationResult(
        kind=kind,
        tau=tau_arr,
        values=exponential + constant,
        exponential_part=exponential,
        constant=constant,
    )


def regression_correlation(
    kind: str,
    liouv: LiouvillianMatrix,
    spectrum: DressedSpectrum,
    tau: np.ndarray,
) -> np.ndarray:
    """Quantum-regression evaluation tr{exp(L tau)(rho_ss A) B}.

    The steady state is the dressed ground projector; A, B are the
    first-order mode operators picked by kind. Serves as the independent
    check on the closed forms in correlation().
    """
    if kind not in CORRELATION_KINDS:
        raise ValueError(f"unknown correlation kind {kind!r}; expected one of {CORRELATION_KINDS}")
    a = spectrum.annihilation_dressed()
    adag = a.conj().T
    first, second = {
        "adag_a": (adag, a),
        "a_a": (a, a),
        "adag_adag": (adag, adag),
        "a_adag": (a, adag),
        "x_x": (a + adag, a + adag),
    }[kind]
    rho_ss = np.zeros((3, 3), dtype=complex)
    rho_ss[0, 0] = 1.0
    weighted = liouv.propagate(rho_ss @ first, np.atleast_1d(np.asarray(tau, dtype=float)))
    return np.einsum("tij,ji->t", weighted, second)


@dataclass(frozen=True)
class SpectrumCurve:
    """Noise-spectrum samples plus the zero-frequency point mass.

    The elastic drive response 4 eta^2 delta(omega) is kept as a separate
    weight; smearing it onto the grid would be resolution-dependent.
    """

    omega: np.ndarray
    values: np.ndarray
    delta_weight: float

    def find_peaks(self) -> list[dict]:
        """Local maxima sorted by height, with interpolated full widths."""
        idx, _ = scipy.signal.find_peaks(self.values)
        peaks = []
        for i in sorted(idx, key=lambda k: self.values[k], reverse=True):
            peaks.append(
                {
                    "omega": float(self.omega[i]),
                    "height": float(self.values[i]),
                    "fwhm": self._fwhm(i),
                }
            )
        return peaks

    def _fwhm(self, i: int) -> float:
        half = self.values[i] / 2.0
        left = right = np.nan
        for j in range(i, 0, -1):
            if self.values[j - 1] <= half:
                frac = (self.values[j] - half) / (self.values[j] - self.values[j - 1])
                left = self.omega[j] - frac * (self.omega[j] - self.omega[j - 1])
                break
        for j in range(i, len(self.values) - 1):
            if self.values[j + 1] <= half:
                frac = (self.values[j] - half) / (self.values[j] - self.values[j + 1])
                right = self.omega[j] + frac * (self.omega[j + 1] - self.omega[j])
                break
        return float(right - left)

    def splitting(self) -> float:
        """Distance between the two tallest peaks."""
        peaks = self.find_peaks()
        if len(peaks) < 2:
            raise ValueError("fewer than two peaks on the grid")
        return abs(peaks[0]["omega"] - peaks[1]["omega"])


def spectrum_xx(
    spectrum: DressedSpectrum,
    rates: RatePair,
    omega_grid: np.ndarray,
) -> SpectrumCurve:
    """Quadrature noise spectrum: two Lorentzians at the transition lines.

    Each ground coherence contributes weight one-half with half-width
    gamma/4 at its positive transition frequency; total integrated weight 1
    plus the separate elastic point mass.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    if rates.gamma_minus <= 0.0 or rates.gamma_plus <= 0.0:
        raise ValueError("emission lines need strictly positive rates")
    values = np.zeros_like(omega_grid)
    for center, rate in (
        (spectrum.omega_minus, rates.gamma_minus),
        (spectrum.omega_plus, rates.gamma_plus),
    ):
        hw = rate / 4.0
        values += (1.0 / (2.0 * np.pi)) * hw / ((omega_grid - center) ** 2 + hw**2)
    return SpectrumCurve(
        omega=omega_grid,
        values=values,
        delta_weight=4.0 * spectrum.eta**2,
    )


def vacuum_splitting(spectrum: DressedSpectrum) -> float:
    """Separation of the two emission lines; contracts quadratically with drive."""
    return spectrum.Delta


def _qubit_coefficient_table(
    c_g: float,
    c_e: float,
    phi: float,
    spectrum: DressedSpectrum,
    xi_sign: float,
) -> dict[str, complex]:
    """Closed-form expansion coefficients, first order in the drive.

    xi_sign = -1 evaluates the same formulas with the drive sign flipped,
    which isolates the drive-odd part of derived quantities; energies and
    decay rates are even in xi and unaffected.
    """
    wz, Om = spectrum.params.omega_z, spectrum.params.Omega
    xi = xi_sign * spectrum.params.xi
    den = wz**2 - Om**2
    eip = np.exp(1j * phi)
    s2 = np.sqrt(2.0)
    table = {
        "00": 1.0 + 0.0j,
        "--": 0.5 * (c_e**2 - 2.0 * xi * np.cos(phi) / (wz - Om) * c_e * c_g),
        "++": 0.5 * (c_e**2 + 2.0 * xi * np.cos(phi) / (wz + Om) * c_e * c_g),
        "0-": (1.0 / s2) * (-eip * c_e * c_g + xi * c_g**2 / (wz - Om) - Om * xi * c_e**2 / den),
        "0+": (1.0 / s2) * (+eip * c_e * c_g + xi * c_g**2 / (wz + Om) + Om * xi * c_e**2 / den),
        "+-": 0.5 * (-(c_e**2) + 2.0 * xi * (Om * np.cos(phi) - 1j * wz * np.sin(phi)) / den * c_g * c_e),
    }
    table["-0"] = np.conj(table["0-"])
    table["+0"] = np.conj(table["0+"])
    table["-+"] = np.conj(table["+-"])
    return table


def expansion_coefficients_qubit(
    state: InitialQubitState,
    spectrum: DressedSpectrum,
) -> ExpansionCoefficients:
    """First-order closed forms for the qubit-state expansion weights.

    Agrees with the exact linear solve to O(xi^2); the trace weight is
    exactly 1 for any normalized state.
    """
    table = _qubit_coefficient_table(state.c_g, state.c_e, state.phi, spectrum, +1.0)
    return ExpansionCoefficients(values=np.array([table[k] for k in PAIR_LABELS]))


def _rho_eg_signed(
    state: InitialQubitState,
    bases: DampingBasisSet,
    t: np.ndarray,
    xi_sign: float,
) -> np.ndarray:
    spectrum = bases.spectrum
    wz, Om = spectrum.params.omega_z, spectrum.params.Omega
    xi = xi_sign * spectrum.params.xi
    zeta = xi * Om / (wz**2 - Om**2)
    M = _qubit_coefficient_table(state.c_g, state.c_e, state.phi, spectrum, xi_sign)
    ex = {
        label: np.exp(bases.eigenvalue(label) * t)
        for label in ("00", "--", "++", "-0", "+0", "-+", "+-")
    }
    s2 = np.sqrt(2.0)
    return (
        (1.0 / s2) * (M["+0"] * ex["+0"] - M["-0"] * ex["-0"])
        + zeta * (M["00"] * ex["00"] - M["++"] * ex["++"] - M["--"] * ex["--"])
        + xi / (2.0 * (wz - Om)) * (M["+-"] * ex["+-"] - M["--"] * ex["--"])
        + xi / (2.0 * (wz + Om)) * (M["++"] * ex["++"] - M["-+"] * ex["-+"])
    )


def rho_eg(
    state: InitialQubitState,
    spectrum: DressedSpectrum,
    rates: RatePair,
    t: float | np.ndarray,
):
    """Closed-form qubit coherence <e,0| rho(t) |g,0>, first order in drive.

    Seven of the nine damping modes contribute: the two rotating ground
    coherences carry the main signal, the drive admixes the populations and
    the excited coherences with O(xi) weights.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    bases = build_damping_bases(spectrum, rates)
    values = _rho_eg_signed(state, bases, t_arr, +1.0)
    if np.isscalar(t) or np.ndim(t) == 0:
        return complex(values[0])
    return values


def decoherence_factor(
    state: InitialQubitState,
    spectrum: DressedSpectrum,
    rates: RatePair,
    t: np.ndarray,
) -> np.ndarray:
    """Normalized coherence magnitude |rho_eg| / (c_e c_g)."""
    if state.c_e == 0.0 or state.c_g == 0.0:
        raise ValueError("decoherence factor undefined for basis states (c_e c_g = 0)")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    return np.abs(rho_eg(state, spectrum, rates, t_arr)) / (state.c_e * state.c_g)


def d0_factor(
    spectrum: DressedSpectrum,
    rates: RatePair,
    t: np.ndarray,
) -> np.ndarray:
    """Driveless reference decoherence factor.

    Exactly the xi = 0 limit of decoherence_factor: beat of the two ground
    coherences at the bare coupling frequency under their unequal decays.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    gm, gp = rates.gamma_minus, rates.gamma_plus
    Om = spectrum.params.Omega
    return np.sqrt(
        0.25 * (np.exp(-gp * t_arr / 4.0) - np.exp(-gm * t_arr / 4.0)) ** 2
        + np.exp(-(gp + gm) * t_arr / 4.0) * np.cos(Om * t_arr) ** 2
    )


def delta_decoherence(
    state: InitialQubitState,
    spectrum: DressedSpectrum,
    rates: RatePair,
    t: np.ndarray,
    mode: str = "odd",
) -> np.ndarray:
    """Drive-induced change of the decoherence factor.

    mode "odd" (default) isolates the part antisymmetric in the drive sign,
    [D(+xi) - D(-xi)] / 2, which is the first-order effect and carries the
    exact phase antisymmetry deltaD(phi) = -deltaD(phi + pi). mode "raw"
    returns the literal difference D - D0, which additionally contains a
    phase-even O(xi^2) offset.
    """
    if state.c_e == 0.0 or state.c_g == 0.0:
        raise ValueError("decoherence factor undefined for basis states (c_e c_g = 0)")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if mode == "odd":
        bases = build_damping_bases(spectrum, rates)
        plus = np.abs(_rho_eg_signed(state, bases, t_arr, +1.0))
        minus = np.abs(_rho_eg_signed(state, bases, t_arr, -1.0))
        return (plus - minus) / (2.0 * state.c_e * state.c_g)
    if mode == "raw":
        return decoherence_factor(state, spectrum, rates, t_arr) - d0_factor(
            spectrum, rates, t_arr
        )
    raise ValueError(f"unknown mode {mode!r}; expected 'odd' or 'raw'")


def dominant_angular_frequency(times: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    """Largest nonzero FFT line of a detrended real series.

    Returns (angular frequency, bin width). The grid must be uniform.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    dt = np.diff(times)
    if len(times) < 4 or np.max(np.abs(dt - dt[0])) > 1e-9 * dt[0]:
        raise ValueError("need a uniform time grid with at least four samples")
    amps = np.abs(np.fft.rfft(values - values.mean()))
    freqs = 2.0 * np.pi * np.fft.rfftfreq(len(values), dt[0])
    k = int(np.argmax(amps[1:])) + 1
    return float(freqs[k]), float(freqs[1])


def spectral_lines(
    times: np.ndarray,
    values: np.ndarray,
    height_rel: float = 0.03,
    prominence_rel: float = 0.01,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Tapered FFT line survey of a real series.

    A cosine taper suppresses leakage sidelobes so that minor lines near a
    strong one survive as local maxima. Returns (line frequencies, heights
    relative to the strongest line, bin width).
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    dt = np.diff(times)
    if len(times) < 8 or np.max(np.abs(dt - dt[0])) > 1e-9 * dt[0]:
        raise ValueError("need a uniform time grid with at least eight samples")
    tapered = (values - values.mean()) * np.hanning(len(values))
    amps = np.abs(np.fft.rfft(tapered))
    freqs = 2.0 * np.pi * np.fft.rfftfreq(len(values), dt[0])
    top = amps.max()
    idx, _ = scipy.signal.find_peaks(
        amps, height=height_rel * top, prominence=prominence_rel * top
    )
    return freqs[idx], amps[idx] / top, float(freqs[1])


def fit_population_components(
    spectrum: DressedSpectrum,
    rates: RatePair,
    times: np.ndarray,
    series: np.ndarray,
) -> dict[str, float]:
    """Least-squares split of a population series onto its analytic modes.

    The basis is the constant, the two excited-diagonal decays, and the three
    damped oscillations (main line at Delta, minute lines at the transition
    frequencies), each with cosine and sine quadratures. Returns the cosine
    amplitudes keyed by line name plus the rms residual; the minute-line
    amplitudes recover zeta^2.
    """
    times = np.asarray(times, dtype=float)
    series = np.asarray(series, dtype=float)
    gm, gp = rates.gamma_minus, rates.gamma_plus
    envelopes = {
        "minute_minus": (np.exp(-gm * times / 4.0), spectrum.omega_minus),
        "minute_plus": (np.exp(-gp * times / 4.0), spectrum.omega_plus),
        "main": (np.exp(-(gm + gp) * times / 4.0), spectrum.Delta),
    }
    columns = [np.ones_like(times), np.exp(-gm * times / 2.0), np.exp(-gp * times / 2.0)]
    names = []
    for name, (envelope, freq) in envelopes.items():
        columns.append(envelope * np.cos(freq * times))
        columns.append(envelope * np.sin(freq * times))
        names.append(name)
    design = np.column_stack(columns)
    coef, *_ = np.linalg.lstsq(design, series, rcond=None)
    out = {name: float(coef[3 + 2 * i]) for i, name in enumerate(names)}
    out["residual_rms"] = float(np.sqrt(np.mean((design @ coef - series) ** 2)))
    return out
