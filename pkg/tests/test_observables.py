"""Populations, correlations, the emission spectrum, and decoherence factors."""

import warnings

import numpy as np
import pytest

from drivenjc import (
    CORRELATION_KINDS,
    DegenerateRatesWarning,
    InitialQubitState,
    ModelParams,
    RatePair,
    build_damping_bases,
    build_liouvillian,
    correlation,
    d0_factor,
    decoherence_factor,
    delta_decoherence,
    dominant_angular_frequency,
    dressed_spectrum,
    evolve_analytic,
    excited_population_analytic,
    excited_population_numeric,
    expand_state,
    expansion_coefficients_qubit,
    fit_population_components,
    integrate,
    regression_correlation,
    rho_eg,
    spectral_lines,
    spectrum_xx,
    vacuum_splitting,
)


@pytest.fixture(scope="module")
def spectrum():
    return dressed_spectrum(ModelParams(Omega=0.2, xi=0.1))


@pytest.fixture(scope="module")
def rates():
    return RatePair(0.002, 0.006)


@pytest.fixture(scope="module")
def damped_rates():
    return RatePair(0.05, 0.055)


def zeta_of(spectrum):
    p = spectrum.params
    return p.xi * p.Omega / (p.omega_z**2 - p.Omega**2)


class TestInitialQubitState:
    def test_normalization(self):
        state = InitialQubitState(c_g=3.0, c_e=4.0, phi=0.1)
        assert state.c_g**2 + state.c_e**2 == pytest.approx(1.0, abs=1e-15)
        assert state.c_e / state.c_g == pytest.approx(4.0 / 3.0, abs=1e-14)

    def test_from_ratio(self):
        state = InitialQubitState.from_ratio(1.0, phi=0.3)
        assert state.c_e == pytest.approx(state.c_g, abs=1e-15)
        assert state.phi == 0.3
        basis = InitialQubitState.from_ratio(0.0)
        assert basis.c_e == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            InitialQubitState(c_g=-0.5, c_e=0.5)
        with pytest.raises(ValueError):
            InitialQubitState(c_g=0.0, c_e=0.0)
        with pytest.raises(ValueError):
            InitialQubitState.from_ratio(-2.0)

    def test_dressed_vector_combination(self, spectrum):
        state = InitialQubitState(c_g=0.6, c_e=0.8, phi=0.7)
        expected = (
            state.c_g * np.exp(1j * state.phi) * spectrum.bare_in_dressed("g0")
            + state.c_e * spectrum.bare_in_dressed("e0")
        )
        assert np.max(np.abs(state.dressed_vector(spectrum) - expected)) <= 1e-15

    def test_density_matrix_physical(self, spectrum):
        rho = InitialQubitState(c_g=0.6, c_e=0.8, phi=0.7).density_matrix(spectrum)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)
        assert np.max(np.abs(rho - rho.conj().T)) <= 1e-15
        assert np.min(np.linalg.eigvalsh(rho)) >= -1e-15


class TestExcitedPopulation:
    def test_initial_value(self, spectrum, rates):
        zeta = zeta_of(spectrum)
        assert excited_population_analytic(spectrum, rates, 0.0) == pytest.approx(
            1.0 + 2.0 * zeta**2, abs=1e-14
        )

    def test_decays_to_ground(self, spectrum):
        late = excited_population_analytic(spectrum, RatePair(0.01, 0.012), 2500.0)
        assert 0.0 <= late <= 1e-3

    def test_range_stays_physical(self, spectrum, rates):
        zeta = zeta_of(spectrum)
        values = excited_population_analytic(spectrum, rates, np.linspace(0, 400, 2001))
        assert np.all(values >= -(1e-6 + 2 * zeta**2))
        assert np.all(values <= 1.0 + 1e-6 + 2 * zeta**2)

    @pytest.mark.parametrize("xi", [0.02, 0.1])
    def test_matches_dense_integration(self, xi, rates):
        spectrum = dressed_spectrum(ModelParams(Omega=0.2, xi=xi))
        grid = np.linspace(0.0, 100.0, 501)
        analytic = excited_population_analytic(spectrum, rates, grid)
        coords = spectrum.bare_in_dressed("e0").astype(complex)
        rho0 = np.outer(coords, coords.conj())
        rho0 /= np.trace(rho0).real
        trajectory = integrate(build_liouvillian(spectrum, rates), rho0, grid)
        numeric = excited_population_numeric(trajectory.states, spectrum)
        assert np.max(np.abs(analytic - numeric)) <= 20.0 * xi**3

    def test_numeric_projects_bare_excited_state(self, spectrum, rates):
        coords = spectrum.bare_in_dressed("e0").astype(complex)
        rho0 = np.outer(coords, coords.conj())
        rho0 /= np.trace(rho0).real
        values = excited_population_numeric(rho0[np.newaxis], spectrum)
        norm2 = (coords.conj() @ coords).real
        assert values[0] == pytest.approx(norm2, abs=1e-14)


class TestCorrelations:
    @pytest.mark.parametrize("kind", CORRELATION_KINDS)
    def test_closed_form_matches_regression(self, kind, spectrum, rates):
        tau = np.linspace(0.0, 50.0, 101)
        closed = correlation(kind, spectrum, rates, tau)
        liouv = build_liouvillian(spectrum, rates)
        exact = regression_correlation(kind, liouv, spectrum, tau)
        assert np.max(np.abs(closed.values - exact)) <= 1e-12

    def test_constant_kinds(self, spectrum, rates):
        tau = np.linspace(0.0, 30.0, 7)
        eta2 = spectrum.eta**2
        for kind in ("adag_a", "a_a", "adag_adag"):
            result = correlation(kind, spectrum, rates, tau)
            assert np.max(np.abs(result.values - eta2)) <= 1e-15

    def test_field_fluctuations_offset(self, spectrum, rates):
        tau = np.linspace(0.0, 30.0, 61)
        xx = correlation("x_x", spectrum, rates, tau)
        aad = correlation("a_adag", spectrum, rates, tau)
        assert np.max(np.abs(xx.values - aad.values - 3.0 * spectrum.eta**2)) <= 1e-15

    def test_parts_sum_to_values(self, spectrum, rates):
        result = correlation("a_adag", spectrum, rates, np.linspace(0, 5, 11))
        assert np.max(
            np.abs(result.exponential_part + result.constant - result.values)
        ) <= 1e-15

    def test_validation(self, spectrum, rates):
        with pytest.raises(ValueError, match="unknown correlation kind"):
            correlation("x_p", spectrum, rates, np.array([0.0]))
        with pytest.raises(ValueError, match="nonnegative"):
            correlation("x_x", spectrum, rates, np.array([-1.0]))


class TestEmissionSpectrum:
    def test_delta_weight(self, spectrum, rates):
        grid = np.linspace(0.5, 1.6, 201)
        curve = spectrum_xx(spectrum, rates, grid)
        assert curve.delta_weight == pytest.approx(4.0 * spectrum.eta**2, abs=1e-15)

    def test_lorentzians_normalized(self, spectrum, rates):
        grid = np.linspace(0.2, 2.4, 220001)
        curve = spectrum_xx(spectrum, rates, grid)
        assert np.trapezoid(curve.values, grid) == pytest.approx(1.0, abs=2e-3)

    def test_peaks_at_transition_frequencies(self, spectrum, rates):
        grid = np.linspace(0.5, 1.6, 44001)
        spacing = grid[1] - grid[0]
        curve = spectrum_xx(spectrum, rates, grid)
        peaks = curve.find_peaks()
        assert len(peaks) == 2
        located = sorted(p["omega"] for p in peaks)
        assert abs(located[0] - spectrum.omega_minus) <= spacing
        assert abs(located[1] - spectrum.omega_plus) <= spacing

    def test_linewidths_are_half_rates(self, spectrum, rates):
        grid = np.linspace(0.5, 1.6, 44001)
        curve = spectrum_xx(spectrum, rates, grid)
        by_omega = sorted(curve.find_peaks(), key=lambda p: p["omega"])
        assert by_omega[0]["fwhm"] == pytest.approx(rates.gamma_minus / 2.0, rel=0.02)
        assert by_omega[1]["fwhm"] == pytest.approx(rates.gamma_plus / 2.0, rel=0.02)

    def test_taller_peak_has_smaller_rate(self, spectrum, rates):
        grid = np.linspace(0.5, 1.6, 44001)
        curve = spectrum_xx(spectrum, rates, grid)
        by_height = sorted(curve.find_peaks(), key=lambda p: p["height"], reverse=True)
        assert by_height[0]["omega"] == pytest.approx(spectrum.omega_minus, abs=1e-3)

    def test_splitting_against_formula(self, spectrum, rates):
        grid = np.linspace(0.5, 1.6, 44001)
        curve = spectrum_xx(spectrum, rates, grid)
        assert abs(curve.splitting() - spectrum.Delta) <= grid[1] - grid[0]

    def test_splitting_needs_two_peaks(self, spectrum, rates):
        narrow = np.linspace(0.7, 0.9, 2001)
        with pytest.raises(ValueError, match="fewer than two peaks"):
            spectrum_xx(spectrum, rates, narrow).splitting()

    def test_rates_must_be_positive(self, spectrum):
        with pytest.raises(ValueError, match="positive rates"):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DegenerateRatesWarning)
                spectrum_xx(spectrum, RatePair(0.0, 0.0), np.linspace(0.5, 1.6, 11))

    def test_vacuum_splitting_value(self):
        spectrum = dressed_spectrum(ModelParams(Omega=0.2, xi=0.2))
        assert abs(vacuum_splitting(spectrum) - 0.39166666666666666) <= 1e-12
        assert vacuum_splitting(spectrum) == spectrum.Delta


class TestQubitCoefficients:
    def test_ground_weight_is_unity(self, spectrum):
        for ratio in (0.1, 1.0, 10.0):
            state = InitialQubitState.from_ratio(ratio, phi=0.4)
            coeffs = expansion_coefficients_qubit(state, spectrum)
            assert coeffs.get("00") == 1.0

    def test_hermitian_closure(self, spectrum):
        state = InitialQubitState(c_g=0.5, c_e=0.9, phi=1.1)
        coeffs = expansion_coefficients_qubit(state, spectrum)
        assert coeffs.hermiticity_residual() <= 1e-15

    @pytest.mark.parametrize("xi", [0.02, 0.1])
    def test_against_dense_expansion(self, xi, damped_rates, rng):
        spectrum = dressed_spectrum(ModelParams(Omega=0.2, xi=xi))
        bases = build_damping_bases(spectrum, damped_rates)
        worst = 0.0
        for _ in range(5):
            c_g, c_e = rng.uniform(0.2, 1.0, size=2)
            phi = rng.uniform(0.0, 2.0 * np.pi)
            state = InitialQubitState(c_g=c_g, c_e=c_e, phi=phi)
            closed = expansion_coefficients_qubit(state, spectrum)
            solved = expand_state(state.density_matrix(spectrum), bases)
            worst = max(worst, float(np.max(np.abs(closed.values - solved.values))))
        assert worst <= 2.5 * xi**2

    def test_driveless_reduction(self, damped_rates):
        spectrum = dressed_spectrum(ModelParams(Omega=0.2, xi=0.0))
        state = InitialQubitState(c_g=0.6, c_e=0.8, phi=0.5)
        coeffs = expansion_coefficients_qubit(state, spectrum)
        s2 = np.sqrt(2.0)
        phase = np.exp(1j * state.phi)
        assert coeffs.get("--") == pytest.approx(state.c_e**2 / 2.0, abs=1e-15)
        assert coeffs.get("++") == pytest.approx(state.c_e**2 / 2.0, abs=1e-15)
        assert coeffs.get("0-") == pytest.approx(
            -phase * state.c_e * state.c_g / s2, abs=1e-15
        )
        assert coeffs.get("0+") == pytest.approx(
            phase * state.c_e * state.c_g / s2, abs=1e-15
        )
        assert coeffs.get("+-") == pytest.approx(-state.c_e**2 / 2.0, abs=1e-15)


class TestRhoEg:
    @pytest.mark.parametrize("xi", [0.01, 0.1])
    def test_against_dense_pipeline(self, xi, damped_rates, rng):
        spectrum = dressed_spectrum(ModelParams(Omega=0.2, xi=xi))
        bases = build_damping_bases(spectrum, damped_rates)
        grid = np.linspace(0.0, 4.0 * np.pi / 0.2, 401)
        coords_e = spectrum.bare_in_dressed("e0")
        coords_g = spectrum.bare_in_dressed("g0")
        worst = 0.0
        for _ in range(4):
            c_g, c_e = rng.uniform(0.2, 1.0, size=2)
            phi = rng.uniform(0.0, 2.0 * np.pi)
            state = InitialQubitState(c_g=c_g, c_e=c_e, phi=phi)
            closed = rho_eg(state, spectrum, damped_rates, grid)
            states = evolve_analytic(
                expand_state(state.density_matrix(spectrum), bases), bases, grid
            )
            dense = np.einsum("i,tij,j->t", coords_e, states, coords_g)
            worst = max(worst, float(np.max(np.abs(closed - dense))))
        assert worst <= 0.6 * xi**2

    def test_scalar_shape(self, spectrum, damped_rates):
        state = InitialQubitState.from_ratio(1.0)
        value = rho_eg(state, spectrum, damped_rates, 1.0)
        assert np.ndim(value) == 0
        array = rho_eg(state, spectrum, damped_rates, np.linspace(0, 1, 5))
        assert array.shape == (5,)


class TestDecoherence:
    def test_factor_is_scaled_coherence(self, spectrum, damped_rates):
        state = InitialQubitState(c_g=0.7, c_e=0.55, phi=0.9)
        grid = np.linspace(0.0, 30.0, 301)
        factor = decoherence_factor(state, spectrum, damped_rates, grid)
        coherence = np.abs(rho_eg(state, spectrum, damped_rates, grid))
        assert np.max(np.abs(factor * state.c_e * state.c_g - coherence)) <= 1e-14

    def test_reference_formula(self, spectrum, damped_rates):
        grid = np.linspace(0.0, 40.0, 401)
        gm, gp = damped_rates.gamma_minus, damped_rates.gamma_plus
        Om = spectrum.params.Omega
        expected = np.sqrt(
            0.25 * (np.exp(-gp * grid / 4.0) - np.exp(-gm * grid / 4.0)) ** 2
            + np.exp(-(gp + gm) * grid / 4.0) * np.cos(Om * grid) ** 2
        )
        assert np.max(np.abs(d0_factor(spectrum, damped_rates, grid) - expected)) <= 1e-15

    def test_reference_bounded_by_one(self, damped_rates):
        grid = np.linspace(0.0, 200.0, 2001)
        for Om in (0.1, 0.3, 0.5):
            spectrum = dressed_spectrum(ModelParams(Omega=Om, xi=0.05))
            assert np.max(d0_factor(spectrum, damped_rates, grid)) <= 1.0

    def test_driveless_factor_equals_reference(self, damped_rates, rng):
        spectrum = dressed_spectrum(ModelParams(Omega=0.2, xi=0.0))
        grid = np.linspace(0.0, 4.0 * np.pi / 0.2, 501)
        reference = d0_factor(spectrum, damped_rates, grid)
        for _ in range(20):
            c_g, c_e = rng.uniform(0.1, 1.0, size=2)
            phi = rng.uniform(0.0, 2.0 * np.pi)
            state = InitialQubitState(c_g=c_g, c_e=c_e, phi=phi)
            factor = decoherence_factor(state, spectrum, damped_rates, grid)
            assert np.max(np.abs(factor - reference)) <= 1e-12

    def test_driven_factor_near_reference(self, spectrum, damped_rates):
        xi = spectrum.params.xi
        grid = np.linspace(0.0, 4.0 * np.pi / 0.2, 501)
        state = InitialQubitState.from_ratio(1.0)
        factor = decoherence_factor(state, spectrum, damped_rates, grid)
        reference = d0_factor(spectrum, damped_rates, grid)
        assert np.max(np.abs(factor - reference)) <= 10.0 * xi

    def test_basis_state_rejected(self, spectrum, damped_rates):
        basis = InitialQubitState.from_ratio(0.0)
        with pytest.raises(ValueError, match="basis states"):
            decoherence_factor(basis, spectrum, damped_rates, 1.0)
        with pytest.raises(ValueError, match="basis states"):
            delta_decoherence(basis, spectrum, damped_rates, 1.0)

    def test_odd_part_antisymmetric_in_phase(self, spectrum, damped_rates):
        grid = np.linspace(0.0, 4.0 * np.pi / 0.2, 1001)
        forward = delta_decoherence(
            InitialQubitState.from_ratio(1.0, phi=0.0), spectrum, damped_rates, grid
        )
        backward = delta_decoherence(
            InitialQubitState.from_ratio(1.0, phi=np.pi), spectrum, damped_rates, grid
        )
        assert np.max(np.abs(forward + backward)) <= 1e-12

    def test_raw_mode_is_difference_to_reference(self, spectrum, damped_rates):
        grid = np.linspace(0.0, 30.0, 301)
        state = InitialQubitState.from_ratio(1.0, phi=0.6)
        raw = delta_decoherence(state, spectrum, damped_rates, grid, mode="raw")
        direct = decoherence_factor(state, spectrum, damped_rates, grid) - d0_factor(
            spectrum, damped_rates, grid
        )
        assert np.max(np.abs(raw - direct)) <= 1e-14

    def test_unknown_mode_rejected(self, spectrum, damped_rates):
        with pytest.raises(ValueError, match="unknown mode"):
            delta_decoherence(
                InitialQubitState.from_ratio(1.0), spectrum, damped_rates, 1.0, mode="even"
            )

    def test_undamped_periodicity_in_weak_drive_limit(self):
        # holds only for commensurate omega_z/Omega and vanishing drive; at
        # finite xi the phase-dependent part drifts at second order
        spectrum = dressed_spectrum(ModelParams(Omega=0.2, xi=1e-6))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateRatesWarning)
            no_damping = RatePair(0.0, 0.0)
        period = 2.0 * np.pi / 0.2
        grid = np.linspace(0.0, 4.0 * period, 4001)
        state = InitialQubitState.from_ratio(1.0, phi=0.0)
        change = delta_decoherence(state, spectrum, no_damping, grid)
        shift = 1000  # one period on this grid
        residual = np.max(np.abs(change[shift:] - change[:-shift]))
        assert residual <= 1e-9 * np.max(np.abs(change))


class TestFrequencyTools:
    def test_dominant_line_of_cosine(self):
        grid = np.linspace(0.0, 200.0, 4001)
        freq, bin_width = dominant_angular_frequency(grid, np.cos(1.3 * grid))
        assert abs(freq - 1.3) <= bin_width
        assert bin_width == pytest.approx(2.0 * np.pi / (grid[1] - grid[0]) / 4001, rel=1e-9)

    def test_grid_validation(self):
        with pytest.raises(ValueError, match="uniform"):
            dominant_angular_frequency(np.array([0.0, 1.0, 3.0, 6.0]), np.zeros(4))
        with pytest.raises(ValueError, match="at least four"):
            dominant_angular_frequency(np.array([0.0, 1.0]), np.zeros(2))
        with pytest.raises(ValueError, match="at least eight"):
            spectral_lines(np.linspace(0, 1, 5), np.zeros(5))

    def test_two_tone_lines(self):
        grid = np.arange(0.0, 400.0, 0.05)
        series = 1.0 * np.cos(0.8 * grid) + 0.3 * np.cos(1.2 * grid)
        freqs, heights, bin_width = spectral_lines(grid, series)
        assert len(freqs) == 2
        assert abs(freqs[0] - 0.8) <= 2.0 * bin_width
        assert abs(freqs[1] - 1.2) <= 2.0 * bin_width
        assert heights[0] == 1.0
        assert 0.2 <= heights[1] <= 0.4

    def test_population_component_fit(self, spectrum, rates):
        grid = np.linspace(0.0, 100.0, 2001)
        series = excited_population_analytic(spectrum, rates, grid)
        fit = fit_population_components(spectrum, rates, grid, series)
        zeta2 = zeta_of(spectrum) ** 2
        assert fit["minute_minus"] == pytest.approx(zeta2, rel=0.05)
        assert fit["minute_plus"] == pytest.approx(zeta2, rel=0.05)
        assert fit["main"] == pytest.approx(0.5, rel=0.01)
        assert fit["residual_rms"] <= 1e-6
