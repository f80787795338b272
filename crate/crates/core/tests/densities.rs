use num_complex::Complex64;

use salpeter::densities;
use salpeter::kinematics::{dispersion_energy, mode_velocity};
use salpeter::operators;
use salpeter::{Event, GridSpec, GridState, SuperpositionState, UnitSystem};

fn units() -> UnitSystem {
    UnitSystem::NATURAL
}

/// Grid state and matching superposition for modes on grid momenta.
fn grid_modes(grid: GridSpec, modes: &[(Complex64, i64)]) -> (GridState, SuperpositionState) {
    let u = units();
    let dp = grid.dp(u.hbar());
    let sup = SuperpositionState::new(modes.iter().map(|&(a, k)| (a, k as f64 * dp)), u).unwrap();
    let psi = GridState::from_fn(grid, u, |x| {
        modes
            .iter()
            .map(|&(a, k)| a * Complex64::from_polar(1.0, k as f64 * dp * x / u.hbar()))
            .sum()
    });
    (psi, sup)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// `sum |phi(p)|^2 w(p) dp` over the grid momenta.
fn spectral_mean(psi: &GridState, w: impl Fn(f64) -> f64) -> f64 {
    let phi = psi.to_momentum();
    let dp = psi.grid().dp(psi.units().hbar());
    phi.momenta()
        .into_iter()
        .zip(phi.amplitudes())
        .map(|(p, a)| w(p) * a.norm_sqr() * dp)
        .sum()
}

#[test]
fn grid_pair_matches_closed_forms() {
    let grid = GridSpec::new(128, 40.0).unwrap();
    let modes = [
        (Complex64::from_polar(1.0, 0.3), 7),
        (Complex64::from_polar(0.6, -1.1), -12),
    ];
    let (psi, sup) = grid_modes(grid, &modes);
    let events: Vec<Event> = grid
        .positions()
        .into_iter()
        .map(|x| Event::new(x, 0.0))
        .collect();

    let rho = densities::born_density(&psi);
    let j = densities::born_current_bilinear(&psi);
    assert!(max_diff(&rho, &densities::born_density_closed_form(&sup, &events)) < 1e-12);
    assert!(max_diff(&j, &densities::born_current_closed_form(&sup, &events)) < 1e-12);
    assert!(max_diff(&j, &densities::born_current_bilinear_at(&sup, &events)) < 1e-12);

    let dirac = densities::dirac_pair(&psi).unwrap();
    let (rho_d, j_d) = densities::dirac_density_current_at(&sup, &events);
    assert!(max_diff(&dirac.rho, &rho_d) < 1e-11);
    assert!(max_diff(&dirac.current, &j_d) < 1e-11);
}

#[test]
fn closed_forms_follow_time_evolution() {
    let grid = GridSpec::new(128, 40.0).unwrap();
    let (psi, sup) = grid_modes(
        grid,
        &[
            (Complex64::new(1.0, 0.0), 3),
            (Complex64::new(0.0, 0.8), 20),
        ],
    );
    let t = 2.75;
    let evolved = operators::propagate(&psi, t);
    let events: Vec<Event> = grid
        .positions()
        .into_iter()
        .map(|x| Event::new(x, t))
        .collect();
    let rho = densities::born_density(&evolved);
    assert!(max_diff(&rho, &densities::born_density_at(&sup, &events)) < 1e-12);
    let j = densities::born_current_bilinear(&evolved);
    assert!(max_diff(&j, &densities::born_current_closed_form(&sup, &events)) < 1e-12);
}

#[test]
fn integrated_born_current_is_mean_velocity() {
    let grid = GridSpec::new(256, 200.0).unwrap();
    let psi = GridState::gaussian_packet(grid, units(), 3.0, 0.3, 0.05).unwrap();
    let pair = densities::born_pair(&psi);
    let mean_u = spectral_mean(&psi, |p| mode_velocity(p, &units()));
    assert!((pair.total_current() - mean_u).abs() < 1e-12);
    assert!((pair.total_probability() - 1.0).abs() < 1e-12);
}

#[test]
fn integrated_dirac_density_is_twice_mean_energy() {
    let grid = GridSpec::new(256, 100.0).unwrap();
    let psi = GridState::gaussian_packet(grid, units(), -4.0, -0.8, 0.2).unwrap();
    let pair = densities::dirac_pair(&psi).unwrap();
    let expected = spectral_mean(&psi, |p| 2.0 * dispersion_energy(p, &units()));
    assert!((pair.total_probability() / expected - 1.0).abs() < 1e-12);
    // The Dirac current integrates to 2 sum p c^2 |phi|^2 dp.
    let expected_j = spectral_mean(&psi, |p| 2.0 * p);
    assert!((pair.total_current() - expected_j).abs() < 1e-12);
}

#[test]
fn unit_density_normalisation_matches_born_norm() {
    let grid = GridSpec::new(256, 100.0).unwrap();
    let psi = GridState::gaussian_packet(grid, units(), 0.0, 1.2, 0.1).unwrap();
    let spinor =
        densities::dirac_spinor_from_scalar_with(&psi, densities::DiracNormalization::UnitDensity)
            .unwrap();
    let pair = densities::dirac_density_current(&spinor);
    assert!((pair.total_probability() - 1.0).abs() < 1e-12);
}

#[test]
fn series_current_needs_nonrelativistic_support() {
    let grid = GridSpec::new(256, 200.0).unwrap();
    let psi = GridState::gaussian_packet(grid, units(), 0.0, 1.5, 0.05).unwrap();
    let err = densities::born_current_series(&psi, operators::SeriesTruncation::new(5));
    assert!(matches!(err, Err(salpeter::Error::SeriesSupport { .. })));
}

#[test]
fn series_current_error_shrinks_with_order() {
    let grid = GridSpec::new(256, 200.0).unwrap();
    let psi = GridState::gaussian_packet(grid, units(), 0.0, 0.3, 0.05).unwrap();
    let exact = densities::born_current_bilinear(&psi);
    let errors: Vec<f64> = [1, 3, 6, 12]
        .iter()
        .map(|&k| {
            let j =
                densities::born_current_series(&psi, operators::SeriesTruncation::new(k)).unwrap();
            max_diff(&j, &exact)
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}
