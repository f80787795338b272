//! Free-particle kinematics: the relativistic dispersion relation, plane-wave
//! modes and finite superpositions of them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::UnitSystem;

/// `E(p) = sqrt(c^2 p^2 + m^2 c^4)`.
pub fn dispersion_energy(p: f64, units: &UnitSystem) -> f64 {
    (units.c() * p).hypot(units.rest_energy())
}

/// Group velocity `dE/dp = p c^2 / E`.
pub fn mode_velocity(p: f64, units: &UnitSystem) -> f64 {
    p * units.c() * units.c() / dispersion_energy(p, units)
}

/// Mode-pair velocity `U_ij = (p_i + p_j) c^2 / (E_i + E_j)`.
///
/// This is the weight the bilinear Born current assigns to the `(i, j)`
/// interference term; on the diagonal it reduces to the group velocity.
pub fn pair_velocity(p_i: f64, p_j: f64, units: &UnitSystem) -> f64 {
    let e_sum = dispersion_energy(p_i, units) + dispersion_energy(p_j, units);
    (p_i + p_j) * units.c() * units.c() / e_sum
}

/// A spacetime point in 1+1 dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Event {
    pub x: f64,
    pub t: f64,
}

impl Event {
    pub fn new(x: f64, t: f64) -> Self {
        Self { x, t }
    }
}

/// One on-shell plane wave `A exp(i(p x - E t)/hbar)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveMode {
    amplitude: Complex64,
    momentum: f64,
    energy: f64,
    velocity: f64,
}

impl PlaneWaveMode {
    pub fn new(amplitude: Complex64, momentum: f64, units: &UnitSystem) -> Self {
        let energy = dispersion_energy(momentum, units);
        Self {
            amplitude,
            momentum,
            energy,
            velocity: momentum * units.c() * units.c() / energy,
        }
    }

    /// Mode from modulus and phase of its amplitude.
    pub fn from_polar(modulus: f64, phase: f64, momentum: f64, units: &UnitSystem) -> Self {
        Self::new(Complex64::from_polar(modulus, phase), momentum, units)
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn velocity(&self) -> f64 {
        self.velocity
    }

    /// Phase `(p x - E t) / hbar` at `event`.
    pub fn phase_at(&self, event: Event, hbar: f64) -> f64 {
        (self.momentum * event.x - self.energy * event.t) / hbar
    }

    /// `exp(i(p x - E t)/hbar)` without the amplitude.
    pub fn plane_wave_at(&self, event: Event, hbar: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.phase_at(event, hbar))
    }
}

/// Finite superposition of plane waves with pairwise distinct momenta.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    modes: Vec<PlaneWaveMode>,
    units: UnitSystem,
}

impl SuperpositionState {
    /// Builds a state from `(amplitude, momentum)` pairs. Entries sharing a
    /// momentum are merged by adding their amplitudes; order of first
    /// appearance is kept.
    pub fn new(
        components: impl IntoIterator<Item = (Complex64, f64)>,
        units: UnitSystem,
    ) -> Result<Self> {
        let mut merged: Vec<(Complex64, f64)> = Vec::new();
        for (amp, p) in components {
            if !p.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "p",
                    value: p,
                    reason: "momentum must be finite",
                });
            }
            match merged.iter_mut().find(|(_, q)| *q == p) {
                Some(slot) => slot.0 += amp,
                None => merged.push((amp, p)),
            }
        }
        if merged.is_empty() {
            return Err(Error::ModeCount {
                expected: 1,
                found: 0,
            });
        }
        let modes = merged
            .into_iter()
            .map(|(a, p)| PlaneWaveMode::new(a, p, &units))
            .collect();
        Ok(Self { modes, units })
    }

    pub fn modes(&self) -> &[PlaneWaveMode] {
        &self.modes
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// `psi(x, t) = sum_i A_i exp(i(p_i x - E_i t)/hbar)`.
pub fn sample_superposition(state: &SuperpositionState, event: Event) -> Complex64 {
    let hbar = state.units.hbar();
    state
        .modes
        .iter()
        .map(|m| m.amplitude * m.plane_wave_at(event, hbar))
        .sum()
}
