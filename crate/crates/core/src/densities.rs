//! Probability densities and currents.
//!
//! Two pairs are provided. The Born pair `(|psi|^2, J_B)` with the current in
//! its resummed bilinear form, `J_B = sum phi*(p') phi(p) U(p, p') e^{..}`,
//! plus the truncated gradient series it resums. The Dirac pair
//! `rho_D = |A psi|^2 + |B psi|^2`, `J_D = c (A psi)^* (B psi) + c.c.` is
//! built from the positive-energy spinor `[A psi, B psi]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{dft_unitary, idft_unitary, GridSpec, GridState};
use crate::kinematics::{dispersion_energy, pair_velocity, Event, SuperpositionState};
use crate::operators::{self, symbol_a, symbol_b, SeriesTruncation, Symbol};
use crate::units::UnitSystem;

/// Momentum support limit (units of `m c`) for the series current.
pub const SERIES_SUPPORT_LIMIT: f64 = 0.9;
/// Largest tolerated amplitude above the support limit, relative to the peak.
pub const SERIES_SUPPORT_TOLERANCE: f64 = 1e-10;

/// Sampled density and current on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurrentPair {
    pub rho: Vec<f64>,
    pub current: Vec<f64>,
    pub grid: GridSpec,
}

impl DensityCurrentPair {
    /// `sum rho dx`.
    pub fn total_probability(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.grid.dx()
    }

    /// `sum J dx`.
    pub fn total_current(&self) -> f64 {
        self.current.iter().sum::<f64>() * self.grid.dx()
    }
}

/// Two-component positive-energy spinor `[A psi, B psi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    upper: Vec<Complex64>,
    lower: Vec<Complex64>,
    grid: GridSpec,
    units: UnitSystem,
}

impl SpinorField {
    pub fn upper(&self) -> &[Complex64] {
        &self.upper
    }

    pub fn lower(&self) -> &[Complex64] {
        &self.lower
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }
}

/// Normalisation of the spinor built from a scalar state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiracNormalization {
    /// `u(p) = [sqrt(E + mc^2), cp / sqrt(E + mc^2)]`, so `rho_D` integrates
    /// to `sum 2E |phi|^2 dp`.
    #[default]
    Unnormalized,
    /// `phi(p)` rescaled by `1/sqrt(2E)`, so a unit-norm `psi` gives
    /// `sum rho_D dx = 1`.
    UnitDensity,
}

/// `|psi(x_n)|^2` on the grid.
pub fn born_density(state: &GridState) -> Vec<f64> {
    state.samples().iter().map(|z| z.norm_sqr()).collect()
}

/// `|psi(x, t)|^2` at each event.
pub fn born_density_at(state: &SuperpositionState, events: &[Event]) -> Vec<f64> {
    events
        .iter()
        .map(|&e| crate::kinematics::sample_superposition(state, e).norm_sqr())
        .collect()
}

/// Double cosine sum `sum_ij |A_i||A_j| cos(phase_i - phase_j + delta_ij)`.
pub fn born_density_closed_form(state: &SuperpositionState, events: &[Event]) -> Vec<f64> {
    cosine_sum(state, events, |_, _| 1.0)
}

/// Double cosine sum weighted by the pair velocity `U_ij`.
pub fn born_current_closed_form(state: &SuperpositionState, events: &[Event]) -> Vec<f64> {
    let units = *state.units();
    cosine_sum(state, events, |pi, pj| pair_velocity(pi, pj, &units))
}

fn cosine_sum(
    state: &SuperpositionState,
    events: &[Event],
    weight: impl Fn(f64, f64) -> f64,
) -> Vec<f64> {
    let hbar = state.units().hbar();
    let modes = state.modes();
    events
        .iter()
        .map(|&e| {
            let mut acc = 0.0;
            for mi in modes {
                for mj in modes {
                    let delta = mi.amplitude().arg() - mj.amplitude().arg();
                    let phase = mi.phase_at(e, hbar) - mj.phase_at(e, hbar) + delta;
                    acc += mi.amplitude().norm()
                        * mj.amplitude().norm()
                        * weight(mi.momentum(), mj.momentum())
                        * phase.cos();
                }
            }
            acc
        })
        .collect()
}

/// Bilinear Born current of a plane-wave superposition at each event,
/// evaluated with complex exponentials.
pub fn born_current_bilinear_at(state: &SuperpositionState, events: &[Event]) -> Vec<f64> {
    let units = *state.units();
    let hbar = units.hbar();
    let modes = state.modes();
    events
        .iter()
        .map(|&e| {
            let waves: Vec<Complex64> = modes
                .iter()
                .map(|m| m.amplitude() * m.plane_wave_at(e, hbar))
                .collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, mi) in modes.iter().enumerate() {
                for (j, mj) in modes.iter().enumerate() {
                    acc += waves[j].conj()
                        * waves[i]
                        * pair_velocity(mi.momentum(), mj.momentum(), &units);
                }
            }
            acc.re
        })
        .collect()
}

/// Bilinear Born current on the grid.
///
/// The mode double sum is collapsed onto wavenumber differences in `O(N^2)`
/// and brought back to position space with one inverse transform.
pub fn born_current_bilinear(state: &GridState) -> Vec<f64> {
    let units = *state.units();
    let grid = *state.grid();
    let n = grid.n_points();
    let spec = state.spectrum();
    let momenta = grid.momenta(units.hbar());
    let mut diff = vec![Complex64::new(0.0, 0.0); n];
    for (j, cj) in spec.iter().enumerate() {
        if *cj == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (jp, cjp) in spec.iter().enumerate() {
            let d = (grid.wavenumber(j) - grid.wavenumber(jp)).rem_euclid(n as i64) as usize;
            diff[d] += cjp.conj() * cj * pair_velocity(momenta[j], momenta[jp], &units);
        }
    }
    idft_unitary(&mut diff);
    let s = 1.0 / (n as f64).sqrt();
    diff.into_iter().map(|z| z.re * s).collect()
}

/// `(|psi|^2, J_B)` on the grid.
pub fn born_pair(state: &GridState) -> DensityCurrentPair {
    DensityCurrentPair {
        rho: born_density(state),
        current: born_current_bilinear(state),
        grid: *state.grid(),
    }
}

/// `(2k - 3)!! / (2k)!!` with `(-1)!! = 1`.
pub fn series_current_coefficient(k: u32) -> f64 {
    assert!(k >= 1, "series current starts at k = 1");
    (1..k).fold(0.5, |c, j| c * (2 * j - 1) as f64 / (2 * j + 2) as f64)
}

/// Truncated gradient series for the Born current,
///
/// `J = -(i m c^2 / hbar) sum_{k=1}^{K} (2k-3)!!/(2k)!! (hbar/mc)^{2k}
///       sum_{l=0}^{2k-1} (-1)^l d^l psi^* d^{2k-l-1} psi`,
///
/// with derivatives taken spectrally. The state must have negligible
/// momentum content above `0.9 m c`; that residual tail is dropped before
/// the derivatives are formed.
pub fn born_current_series(state: &GridState, trunc: SeriesTruncation) -> Result<Vec<f64>> {
    let units = *state.units();
    let grid = *state.grid();
    let n = grid.n_points();
    let limit = SERIES_SUPPORT_LIMIT * units.momentum_scale();
    let momenta = grid.momenta(units.hbar());
    let spec = state.spectrum();
    let peak = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let outside = spec
        .iter()
        .zip(&momenta)
        .filter(|(_, p)| p.abs() > limit)
        .map(|(z, _)| z.norm())
        .fold(0.0, f64::max);
    let ratio = if peak > 0.0 { outside / peak } else { 0.0 };
    if ratio > SERIES_SUPPORT_TOLERANCE {
        return Err(Error::SeriesSupport {
            limit: SERIES_SUPPORT_LIMIT,
            ratio,
        });
    }
    let k_max = trunc.k_max as usize;
    if k_max == 0 {
        return Ok(vec![0.0; n]);
    }

    // derivs[d] = ((hbar/mc) d/dx)^d psi, symbol (i p / mc)^d.
    let orders = 2 * k_max;
    let mut derivs = Vec::with_capacity(orders);
    for d in 0..orders {
        let mut buf: Vec<Complex64> = spec
            .iter()
            .zip(&momenta)
            .map(|(z, &p)| {
                if p.abs() > limit {
                    Complex64::new(0.0, 0.0)
                } else {
                    z * Complex64::new(0.0, p / units.momentum_scale()).powu(d as u32)
                }
            })
            .collect();
        idft_unitary(&mut buf);
        derivs.push(buf);
    }

    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..=k_max {
        let ck = series_current_coefficient(k as u32);
        for l in 0..2 * k {
            let sign = if l % 2 == 0 { ck } else { -ck };
            let (dl, dr) = (&derivs[l], &derivs[2 * k - l - 1]);
            for ((a, x), y) in acc.iter_mut().zip(dl).zip(dr) {
                *a += x.conj() * y * sign;
            }
        }
    }
    // -(i m c^2 / hbar) (hbar / m c) = -i c
    let pref = Complex64::new(0.0, -units.c());
    Ok(acc.into_iter().map(|z| (pref * z).re).collect())
}

/// `[A psi, B psi]` with the unnormalised spinor.
pub fn dirac_spinor_from_scalar(state: &GridState) -> Result<SpinorField> {
    dirac_spinor_from_scalar_with(state, DiracNormalization::Unnormalized)
}

pub fn dirac_spinor_from_scalar_with(
    state: &GridState,
    normalization: DiracNormalization,
) -> Result<SpinorField> {
    let units = *state.units();
    let (upper, lower) = match normalization {
        DiracNormalization::Unnormalized => {
            (operators::apply_a(state)?, operators::apply_b(state)?)
        }
        DiracNormalization::UnitDensity => {
            let w = move |p: f64| 1.0 / (2.0 * dispersion_energy(p, &units)).sqrt();
            let a = Symbol::real("A/sqrt(2E)", move |p| symbol_a(p, &units) * w(p));
            let b = Symbol::real("B/sqrt(2E)", move |p| symbol_b(p, &units) * w(p));
            (
                operators::apply_symbol(state, &a)?,
                operators::apply_symbol(state, &b)?,
            )
        }
    };
    Ok(SpinorField {
        upper: upper.into_samples(),
        lower: lower.into_samples(),
        grid: *state.grid(),
        units,
    })
}

/// `rho_D = |A psi|^2 + |B psi|^2`, `J_D = c ((A psi)^* B psi + A psi (B psi)^*)`.
pub fn dirac_density_current(spinor: &SpinorField) -> DensityCurrentPair {
    let c = spinor.units.c();
    let (rho, current) = spinor
        .upper
        .iter()
        .zip(&spinor.lower)
        .map(|(a, b)| dirac_point(*a, *b, c))
        .unzip();
    DensityCurrentPair {
        rho,
        current,
        grid: spinor.grid,
    }
}

/// `(rho_D, J_D)` on the grid, straight from the scalar state.
pub fn dirac_pair(state: &GridState) -> Result<DensityCurrentPair> {
    Ok(dirac_density_current(&dirac_spinor_from_scalar(state)?))
}

fn dirac_point(a: Complex64, b: Complex64, c: f64) -> (f64, f64) {
    (a.norm_sqr() + b.norm_sqr(), 2.0 * c * (a.conj() * b).re)
}

/// `(rho_D, J_D)` of a plane-wave superposition at each event, with
/// `A psi = sum_i A_i sqrt(E_i + mc^2) e^{..}` and likewise for `B`.
pub fn dirac_density_current_at(
    state: &SuperpositionState,
    events: &[Event],
) -> (Vec<f64>, Vec<f64>) {
    let units = *state.units();
    let hbar = units.hbar();
    events
        .iter()
        .map(|&e| {
            let (mut a, mut b) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for m in state.modes() {
                let w = m.amplitude() * m.plane_wave_at(e, hbar);
                a += w * symbol_a(m.momentum(), &units);
                b += w * symbol_b(m.momentum(), &units);
            }
            dirac_point(a, b, units.c())
        })
        .unzip()
}

/// Spectral derivative of a real periodic field; the Nyquist slot is zeroed.
pub fn spectral_derivative(values: &[f64], grid: &GridSpec) -> Vec<f64> {
    let n = grid.n_points();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft_unitary(&mut buf);
    let dk = 2.0 * std::f64::consts::PI / grid.length();
    for (j, z) in buf.iter_mut().enumerate() {
        let k = grid.wavenumber(j);
        *z = if k == -(n as i64) / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            *z * Complex64::new(0.0, k as f64 * dk)
        };
    }
    idft_unitary(&mut buf);
    buf.into_iter().map(|z| z.re).collect()
}

/// Below this `max|d rho/dt| dt / max|rho|` the snapshots count as static and
/// the residual is normalised by `max|rho| / dt` instead.
const STATIC_THRESHOLD: f64 = 1e-10;

/// Continuity-equation residual from three snapshots a step `dt` apart:
/// `max |(rho_+ - rho_-)/(2 dt) + dJ/dx| / max |(rho_+ - rho_-)/(2 dt)|`.
pub fn continuity_residual(
    before: &DensityCurrentPair,
    now: &DensityCurrentPair,
    after: &DensityCurrentPair,
    dt: f64,
) -> Result<f64> {
    now.grid.check_same(&before.grid)?;
    now.grid.check_same(&after.grid)?;
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "time step must be positive",
        });
    }
    let dj = spectral_derivative(&now.current, &now.grid);
    let drho: Vec<f64> = after
        .rho
        .iter()
        .zip(&before.rho)
        .map(|(a, b)| (a - b) / (2.0 * dt))
        .collect();
    let worst = drho
        .iter()
        .zip(&dj)
        .map(|(a, b)| (a + b).abs())
        .fold(0.0, f64::max);
    let scale = drho.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let rho_max = now.rho.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let denom = if scale * dt <= STATIC_THRESHOLD * rho_max {
        rho_max / dt
    } else {
        scale
    };
    Ok(if denom > 0.0 { worst / denom } else { 0.0 })
}

/// Which density/current pair a continuity check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Born,
    Dirac,
}

impl PairKind {
    pub fn name(self) -> &'static str {
        match self {
            PairKind::Born => "born",
            PairKind::Dirac => "dirac",
        }
    }

    pub fn evaluate(self, state: &GridState) -> Result<DensityCurrentPair> {
        match self {
            PairKind::Born => Ok(born_pair(state)),
            PairKind::Dirac => dirac_pair(state),
        }
    }
}

/// Largest `E(p_k)` over grid momenta whose amplitude exceeds
/// `1e-10` of the peak.
pub fn max_significant_energy(state: &GridState) -> f64 {
    let units = *state.units();
    let spec = state.spectrum();
    let peak = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    state
        .grid()
        .momenta(units.hbar())
        .into_iter()
        .zip(&spec)
        .filter(|(_, z)| z.norm() > 1e-10 * peak)
        .map(|(p, _)| dispersion_energy(p, &units))
        .fold(0.0, f64::max)
}

/// Time step with `E_max dt / hbar = phase_step`.
pub fn time_step_for(state: &GridState, phase_step: f64) -> f64 {
    phase_step * state.units().hbar() / max_significant_energy(state)
}

/// Continuity residual of `kind` around time `t`, snapshots produced by
/// exact propagation of `state` (taken at time zero).
pub fn continuity_residual_at(state: &GridState, kind: PairKind, t: f64, dt: f64) -> Result<f64> {
    let before = kind.evaluate(&operators::propagate(state, t - dt))?;
    let now = kind.evaluate(&operators::propagate(state, t))?;
    let after = kind.evaluate(&operators::propagate(state, t + dt))?;
    continuity_residual(&before, &now, &after, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn nat() -> UnitSystem {
        UnitSystem::NATURAL
    }

    #[test]
    fn double_factorial_coefficients() {
        assert_eq!(series_current_coefficient(1), 0.5);
        assert_eq!(series_current_coefficient(2), 1.0 / 8.0);
        assert_eq!(series_current_coefficient(3), 3.0 / 48.0);
        assert_eq!(series_current_coefficient(4), 15.0 / 384.0);
    }

    #[test]
    fn single_plane_wave_born_pair() {
        let s = SuperpositionState::new([(Complex64::new(1.0, 0.0), 0.75)], nat()).unwrap();
        let ev = [Event::new(0.3, -2.0), Event::new(5.0, 1.0)];
        for (r, j) in born_density_at(&s, &ev)
            .iter()
            .zip(born_current_bilinear_at(&s, &ev))
        {
            assert!((r - 1.0).abs() < 1e-15);
            assert!((j - 0.6).abs() < 1e-15);
        }
    }

    #[test]
    fn fringe_of_counter_propagating_pair() {
        let p = 0.75;
        let s = SuperpositionState::new(
            [
                (Complex64::new(1.0, 0.0), p),
                (Complex64::new(1.0, 0.0), -p),
            ],
            nat(),
        )
        .unwrap();
        let ev: Vec<Event> = (0..20).map(|i| Event::new(0.37 * i as f64, 0.0)).collect();
        let rho = born_density_at(&s, &ev);
        for (r, e) in rho.iter().zip(&ev) {
            assert!((r - (2.0 + 2.0 * (2.0 * p * e.x).cos())).abs() < 1e-13);
        }
        // u1 + u2 = 0 and U_12 = 0: no current anywhere.
        for j in born_current_bilinear_at(&s, &ev) {
            assert!(j.abs() < 1e-14);
        }
    }

    #[test]
    fn dirac_single_mode_values() {
        let s = SuperpositionState::new([(Complex64::from_polar(1.3, 0.4), 0.75)], nat()).unwrap();
        let (rho, j) = dirac_density_current_at(&s, &[Event::new(1.0, 2.0)]);
        let a2 = 1.3f64 * 1.3;
        assert!((rho[0] - a2 * 2.0 * 1.25).abs() < 1e-13);
        assert!((j[0] - a2 * 2.0 * 0.75).abs() < 1e-13);
        let rest = SuperpositionState::new([(Complex64::new(1.0, 0.0), 0.0)], nat()).unwrap();
        let (rho, j) = dirac_density_current_at(&rest, &[Event::default()]);
        assert!((rho[0] - 2.0).abs() < 1e-15 && j[0] == 0.0);
    }

    #[test]
    fn spinor_of_grid_modes() {
        let g = GridSpec::new(64, 8.0 * PI).unwrap();
        let s = GridState::plane_wave(g, nat(), 3).unwrap(); // p = 0.75
        let sp = dirac_spinor_from_scalar(&s).unwrap();
        for ((a, b), z) in sp.upper().iter().zip(sp.lower()).zip(s.samples()) {
            assert!((a - z * 1.5).norm() < 1e-13);
            assert!((b - z * 0.5).norm() < 1e-13);
        }
        let rest = GridState::plane_wave(g, nat(), 0).unwrap();
        let sp = dirac_spinor_from_scalar(&rest).unwrap();
        for (a, b) in sp.upper().iter().zip(sp.lower()) {
            assert!((a - 2f64.sqrt()).norm() < 1e-13 && b.norm() < 1e-13);
        }
    }

    #[test]
    fn unit_density_normalisation() {
        let g = GridSpec::new(256, 60.0).unwrap();
        let s = GridState::gaussian_packet(g, nat(), 0.0, 1.2, 0.4).unwrap();
        let sp = dirac_spinor_from_scalar_with(&s, DiracNormalization::UnitDensity).unwrap();
        let pair = dirac_density_current(&sp);
        assert!((pair.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn series_current_leading_order() {
        let g = GridSpec::new(64, 64.0 * PI).unwrap(); // dp = 1/32
        let s = GridState::plane_wave(g, nat(), 8).unwrap(); // p = 0.25
        let j = born_current_series(&s, SeriesTruncation::new(1)).unwrap();
        for v in j {
            assert!((v - 0.25).abs() < 1e-13);
        }
    }

    #[test]
    fn series_current_rejects_relativistic_support() {
        let g = GridSpec::new(128, 40.0 * PI).unwrap(); // dp = 0.05
        let s = GridState::plane_wave(g, nat(), 24).unwrap(); // p = 1.2
        assert!(matches!(
            born_current_series(&s, SeriesTruncation::new(3)),
            Err(Error::SeriesSupport { .. })
        ));
    }

    #[test]
    fn static_plane_wave_has_zero_residual() {
        let g = GridSpec::new(64, 8.0 * PI).unwrap();
        let s = GridState::plane_wave(g, nat(), 3).unwrap();
        let dt = 1e-3;
        let pairs: Vec<_> = [-dt, 0.0, dt]
            .iter()
            .map(|&t| born_pair(&operators::propagate(&s, t)))
            .collect();
        let r = continuity_residual(&pairs[0], &pairs[1], &pairs[2], dt).unwrap();
        assert!(r < 1e-12, "{r}");
    }

    #[test]
    fn residual_rejects_mismatched_grids() {
        let a = born_pair(&GridState::zeros(GridSpec::new(8, 1.0).unwrap(), nat()));
        let b = born_pair(&GridState::zeros(GridSpec::new(16, 1.0).unwrap(), nat()));
        assert!(continuity_residual(&a, &b, &a, 0.1).is_err());
    }
}
