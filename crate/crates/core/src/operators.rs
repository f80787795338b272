//! Functions of the momentum operator applied spectrally: transform, multiply
//! by the symbol `f(p_k)`, transform back.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridState;
use crate::kinematics::dispersion_energy;
use crate::units::UnitSystem;

/// Tail-to-peak spectral amplitude ratio above which a state counts as not
/// band-limited.
pub const BAND_LIMIT_THRESHOLD: f64 = 1e-10;

/// Environment variable that upgrades band-limit warnings to errors.
pub const STRICT_ENV: &str = "SALPETER_STRICT";

/// What to do when a non-polynomial symbol meets a state with spectral
/// content near the Nyquist momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandLimitPolicy {
    Ignore,
    Warn,
    Strict,
}

impl BandLimitPolicy {
    /// `Strict` when `SALPETER_STRICT=1`, otherwise `Warn`.
    pub fn from_env() -> Self {
        match std::env::var(STRICT_ENV) {
            Ok(v) if v.trim() == "1" => BandLimitPolicy::Strict,
            _ => BandLimitPolicy::Warn,
        }
    }

    pub fn check(self, state: &GridState) -> Result<()> {
        if self == BandLimitPolicy::Ignore {
            return Ok(());
        }
        let ratio = state.band_limit_ratio();
        if ratio <= BAND_LIMIT_THRESHOLD {
            return Ok(());
        }
        match self {
            BandLimitPolicy::Strict => Err(Error::BandLimit {
                ratio,
                threshold: BAND_LIMIT_THRESHOLD,
            }),
            _ => {
                log::warn!(
                    "state is not band-limited (tail ratio {ratio:.3e} > {BAND_LIMIT_THRESHOLD:.0e})"
                );
                Ok(())
            }
        }
    }
}

/// A named momentum-space multiplier `p -> f(p)`.
pub struct Symbol<'a> {
    name: &'static str,
    f: Box<dyn Fn(f64) -> Complex64 + Send + Sync + 'a>,
}

impl<'a> Symbol<'a> {
    pub fn new(name: &'static str, f: impl Fn(f64) -> Complex64 + Send + Sync + 'a) -> Self {
        Self {
            name,
            f: Box::new(f),
        }
    }

    pub fn real(name: &'static str, f: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self::new(name, move |p| Complex64::new(f(p), 0.0))
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn eval(&self, p: f64) -> Complex64 {
        (self.f)(p)
    }

    /// Square-root Hamiltonian `E(p)`.
    pub fn energy(units: UnitSystem) -> Symbol<'static> {
        Symbol::real("sqrt_hamiltonian", move |p| dispersion_energy(p, &units))
    }

    /// `sqrt(E(p) + m c^2)`.
    pub fn a_operator(units: UnitSystem) -> Symbol<'static> {
        Symbol::real("A", move |p| symbol_a(p, &units))
    }

    /// `c p / sqrt(E(p) + m c^2)`.
    pub fn b_operator(units: UnitSystem) -> Symbol<'static> {
        Symbol::real("B", move |p| symbol_b(p, &units))
    }
}

impl fmt::Debug for Symbol<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol").field("name", &self.name).finish()
    }
}

pub fn symbol_a(p: f64, units: &UnitSystem) -> f64 {
    (dispersion_energy(p, units) + units.rest_energy()).sqrt()
}

pub fn symbol_b(p: f64, units: &UnitSystem) -> f64 {
    units.c() * p / symbol_a(p, units)
}

/// Applies `symbol` under the band-limit policy taken from the environment.
pub fn apply_symbol(state: &GridState, symbol: &Symbol<'_>) -> Result<GridState> {
    apply_symbol_with(state, symbol, BandLimitPolicy::from_env())
}

pub fn apply_symbol_with(
    state: &GridState,
    symbol: &Symbol<'_>,
    policy: BandLimitPolicy,
) -> Result<GridState> {
    policy.check(state)?;
    Ok(multiply_spectrum(state, |p| symbol.eval(p)))
}

fn multiply_spectrum(state: &GridState, f: impl Fn(f64) -> Complex64) -> GridState {
    let hbar = state.units().hbar();
    let grid = *state.grid();
    let mut spec = state.spectrum();
    for (j, z) in spec.iter_mut().enumerate() {
        *z *= f(grid.momentum(j, hbar));
    }
    state.with_spectrum(spec)
}

pub fn apply_sqrt_hamiltonian(state: &GridState) -> Result<GridState> {
    apply_symbol(state, &Symbol::energy(*state.units()))
}

pub fn apply_a(state: &GridState) -> Result<GridState> {
    apply_symbol(state, &Symbol::a_operator(*state.units()))
}

pub fn apply_b(state: &GridState) -> Result<GridState> {
    apply_symbol(state, &Symbol::b_operator(*state.units()))
}

/// Generalised binomial coefficient `C(1/2, k)`.
pub fn series_coefficient(k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (0.5 - j as f64) / (j as f64 + 1.0))
}

/// Number of retained orders in the expansion of `E(p)` in powers of
/// `(p / m c)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SeriesTruncation {
    pub k_max: u32,
}

impl SeriesTruncation {
    pub fn new(k_max: u32) -> Self {
        Self { k_max }
    }
}

/// Partial sum `m c^2 sum_{k <= k_max} C(1/2, k) (p / m c)^{2k}`.
///
/// Converges to `E(p)` for `|p| < m c` and diverges beyond.
pub fn series_partial_sum(p: f64, trunc: SeriesTruncation, units: &UnitSystem) -> f64 {
    let x2 = (p / units.momentum_scale()).powi(2);
    let mut power = 1.0;
    let mut coeff = 1.0;
    let mut sum = 0.0;
    for k in 0..=trunc.k_max {
        if k > 0 {
            let j = (k - 1) as f64;
            coeff *= (0.5 - j) / (j + 1.0);
            power *= x2;
        }
        sum += coeff * power;
    }
    units.rest_energy() * sum
}

/// Applies the truncated gradient series as a momentum-space partial sum.
pub fn apply_truncated_series(state: &GridState, trunc: SeriesTruncation) -> Result<GridState> {
    let units = *state.units();
    apply_symbol(
        state,
        &Symbol::real("truncated_series", move |p| {
            series_partial_sum(p, trunc, &units)
        }),
    )
}

/// Exact Salpeter evolution, `phi(p) -> exp(-i E(p) t / hbar) phi(p)`.
pub fn propagate(state: &GridState, t: f64) -> GridState {
    let units = *state.units();
    multiply_spectrum(state, |p| {
        Complex64::from_polar(1.0, -dispersion_energy(p, &units) * t / units.hbar())
    })
}

/// Free Schrödinger evolution with kinetic energy `p^2 / 2m`, optionally
/// including the rest-energy phase `exp(-i m c^2 t / hbar)`.
pub fn schrodinger_propagate(state: &GridState, t: f64, include_rest_phase: bool) -> GridState {
    let units = *state.units();
    let rest = if include_rest_phase {
        units.rest_energy()
    } else {
        0.0
    };
    multiply_spectrum(state, |p| {
        let e = rest + p * p / (2.0 * units.m());
        Complex64::from_polar(1.0, -e * t / units.hbar())
    })
}

/// Removes the rest-energy phase, `psi -> exp(+i m c^2 t / hbar) psi`.
pub fn remove_rest_phase(state: &GridState, t: f64) -> GridState {
    let u = state.units();
    state.scale(Complex64::from_polar(1.0, u.rest_energy() * t / u.hbar()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn mode(k: i64) -> GridState {
        let g = GridSpec::new(64, 8.0 * std::f64::consts::PI).unwrap();
        GridState::plane_wave(g, UnitSystem::NATURAL, k).unwrap()
    }

    fn eigenvalue(before: &GridState, after: &GridState) -> Complex64 {
        let num: Complex64 = before
            .samples()
            .iter()
            .zip(after.samples())
            .map(|(a, b)| a.conj() * b)
            .sum();
        num / before.samples().iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    #[test]
    fn coefficients() {
        assert_eq!(series_coefficient(0), 1.0);
        assert_eq!(series_coefficient(1), 0.5);
        assert_eq!(series_coefficient(2), -0.125);
        assert_eq!(series_coefficient(3), 0.0625);
        let s: f64 = (0..=30)
            .map(|k| series_coefficient(k) * 0.25f64.powi(k as i32))
            .sum();
        assert!((s - 1.25f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn identity_symbol() {
        let s = GridState::gaussian_packet(
            GridSpec::new(128, 40.0).unwrap(),
            UnitSystem::NATURAL,
            0.0,
            0.5,
            0.4,
        )
        .unwrap();
        let out = apply_symbol(&s, &Symbol::real("one", |_| 1.0)).unwrap();
        assert!(out.distance(&s).unwrap() < 1e-13);
    }

    #[test]
    fn momentum_and_hamiltonian_eigenvalues() {
        // dp = 1/4 on this grid, so k = 3 is p = 0.75.
        let s = mode(3);
        let p = apply_symbol(&s, &Symbol::real("p", |p| p)).unwrap();
        assert!((eigenvalue(&s, &p) - 0.75).norm() < 1e-13);
        let h = apply_sqrt_hamiltonian(&s).unwrap();
        assert!((eigenvalue(&s, &h) - 1.25).norm() < 1e-13);
        let rest = apply_sqrt_hamiltonian(&mode(0)).unwrap();
        assert!(rest.distance(&mode(0)).unwrap() < 1e-12);
    }

    #[test]
    fn a_and_b_on_modes() {
        let a0 = apply_a(&mode(0)).unwrap();
        assert!((eigenvalue(&mode(0), &a0) - 2f64.sqrt()).norm() < 1e-13);
        let b0 = apply_b(&mode(0)).unwrap();
        assert!(eigenvalue(&mode(0), &b0).norm() < 1e-13);
        let a = apply_a(&mode(3)).unwrap();
        let b = apply_b(&mode(3)).unwrap();
        assert!((eigenvalue(&mode(3), &a) - 1.5).norm() < 1e-13);
        assert!((eigenvalue(&mode(3), &b) - 0.5).norm() < 1e-13);
    }

    #[test]
    fn a_squared_minus_b_squared() {
        let u = UnitSystem::new(1.7, 2.3, 0.6).unwrap();
        for i in -50..=50 {
            let p = i as f64 * 0.37;
            let d = symbol_a(p, &u).powi(2) - symbol_b(p, &u).powi(2);
            assert!((d / (2.0 * u.rest_energy()) - 1.0).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn series_on_grid_modes() {
        // Nyquist at 1 mc keeps the spurious tail of a pure mode convergent.
        let g = GridSpec::new(32, 32.0 * std::f64::consts::PI).unwrap();
        let u = UnitSystem::NATURAL;
        let s = GridState::plane_wave(g, u, 8).unwrap(); // p = 0.5
        let out = apply_truncated_series(&s, SeriesTruncation::new(30)).unwrap();
        assert!((eigenvalue(&s, &out).re - 1.25f64.sqrt()).abs() < 1e-8);
        let rest = GridState::plane_wave(g, u, 0).unwrap();
        for k in [0, 3, 17] {
            let out = apply_truncated_series(&rest, SeriesTruncation::new(k)).unwrap();
            assert!((eigenvalue(&rest, &out) - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn series_diverges_outside_radius() {
        let u = UnitSystem::NATURAL;
        let exact = dispersion_energy(1.5, &u);
        let s20 = series_partial_sum(1.5, SeriesTruncation::new(20), &u);
        let s40 = series_partial_sum(1.5, SeriesTruncation::new(40), &u);
        assert!(s40.abs() > s20.abs());
        assert!((s20 - exact).abs() > 0.1 * exact);
        assert!((s40 - exact).abs() > 0.1 * exact);
    }

    #[test]
    fn propagation_basics() {
        let s = mode(0);
        assert_eq!(propagate(&s, 0.0).distance(&s).unwrap(), 0.0);
        let back = propagate(&s, 2.0 * std::f64::consts::PI);
        assert!(back.distance(&s).unwrap() < 1e-12 * s.norm_sqr().sqrt());
        assert!(schrodinger_propagate(&s, 0.0, true).distance(&s).unwrap() < 1e-15);
    }

    #[test]
    fn strict_policy_rejects_nyquist_mode() {
        let s = mode(-32);
        let sym = Symbol::energy(UnitSystem::NATURAL);
        assert!(matches!(
            apply_symbol_with(&s, &sym, BandLimitPolicy::Strict),
            Err(Error::BandLimit { .. })
        ));
        assert!(apply_symbol_with(&s, &sym, BandLimitPolicy::Warn).is_ok());
        assert!(apply_symbol_with(&mode(3), &sym, BandLimitPolicy::Strict).is_ok());
    }
}
