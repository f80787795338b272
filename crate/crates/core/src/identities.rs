//! Seeded randomized sweeps over the kinematic identities.
//!
//! Draw order is fixed, so a `(seed, samples)` pair always reproduces the
//! same parameter sets.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::kinematics::{
    dispersion_energy, mode_velocity, pair_velocity, Event, SuperpositionState,
};
use crate::lorentz::{
    alpha_coefficient, beta_coefficient, boost_event, boost_momentum, dirac_fourvector_residual,
    dirac_spinor_u, matmul2, spinor_boost_matrix, Boost,
};
use crate::rng::SweepRng;
use crate::units::UnitSystem;

/// Momentum range of the kinematic sweeps, units of `m c`.
pub const SWEEP_MOMENTUM: f64 = 3.0;
/// Boost range of every sweep, units of `c`.
pub const SWEEP_VELOCITY: f64 = 0.9;
/// Draws with `|U_12 - v| < BETA_REJECT_GAP c` are rejected from the
/// `beta = alpha` sweep; `beta` divides by `U'_12`, which vanishes there.
pub const BETA_REJECT_GAP: f64 = 1e-3;
/// Draws with a mode speed at or above this fraction of `c` are rejected.
pub const SPEED_REJECT: f64 = 0.999;
/// Event coordinates are drawn from `[-EVENT_RANGE, EVENT_RANGE]`.
pub const EVENT_RANGE: f64 = 10.0;

/// Largest residual seen by one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub name: &'static str,
    pub max_residual: f64,
    pub accepted: usize,
    pub rejected: usize,
}

impl SweepReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            max_residual: 0.0,
            accepted: 0,
            rejected: 0,
        }
    }

    fn record(&mut self, r: f64) {
        self.accepted += 1;
        if r > self.max_residual || r.is_nan() {
            self.max_residual = r;
        }
    }
}

fn draw_boost(rng: &mut SweepRng, units: &UnitSystem) -> Boost {
    let v = rng.uniform(-SWEEP_VELOCITY, SWEEP_VELOCITY) * units.c();
    Boost::new(v, units).expect("sweep velocity is below c")
}

/// `|beta_12 / alpha_12 - 1|` over random `(p_1, p_2, v)`.
pub fn beta_alpha_sweep(seed: u64, samples: usize, units: &UnitSystem) -> SweepReport {
    let mut rng = SweepRng::new(seed);
    let mut rep = SweepReport::new("beta_equals_alpha");
    let pm = SWEEP_MOMENTUM * units.momentum_scale();
    while rep.accepted < samples {
        let p1 = rng.uniform(-pm, pm);
        let p2 = rng.uniform(-pm, pm);
        let b = draw_boost(&mut rng, units);
        let u12 = pair_velocity(p1, p2, units);
        let too_fast = mode_velocity(p1, units)
            .abs()
            .max(mode_velocity(p2, units).abs())
            >= SPEED_REJECT * units.c();
        if too_fast || (u12 - b.v()).abs() < BETA_REJECT_GAP * units.c() {
            rep.rejected += 1;
            continue;
        }
        let alpha = alpha_coefficient(p1, p2, &b, units);
        let r = match beta_coefficient(p1, p2, &b, units) {
            Ok(beta) => (beta / alpha - 1.0).abs(),
            Err(_) => f64::INFINITY,
        };
        rep.record(r);
    }
    rep
}

/// `|E'^2 - c^2 p'^2 - m^2 c^4| / (m^2 c^4)` over random boosts.
pub fn mass_shell_sweep(seed: u64, samples: usize, units: &UnitSystem) -> SweepReport {
    let mut rng = SweepRng::new(seed);
    let mut rep = SweepReport::new("mass_shell");
    let pm = SWEEP_MOMENTUM * units.momentum_scale();
    let rest2 = units.rest_energy().powi(2);
    for _ in 0..samples {
        let p = rng.uniform(-pm, pm);
        let b = draw_boost(&mut rng, units);
        let (pb, eb) = boost_momentum(p, &b, units);
        let cp = units.c() * pb;
        rep.record(((eb - cp) * (eb + cp) - rest2).abs() / rest2);
    }
    rep
}

/// `|c^2 t'^2 - x'^2 - (c^2 t^2 - x^2)|` relative to `c^2 t^2 + x^2`.
pub fn interval_sweep(seed: u64, samples: usize, units: &UnitSystem) -> SweepReport {
    let mut rng = SweepRng::new(seed);
    let mut rep = SweepReport::new("interval");
    let c = units.c();
    for _ in 0..samples {
        let e = Event::new(
            rng.uniform(-EVENT_RANGE, EVENT_RANGE),
            rng.uniform(-EVENT_RANGE, EVENT_RANGE) / c,
        );
        let b = draw_boost(&mut rng, units);
        let eb = boost_event(e, &b);
        let s = (c * e.t).powi(2) - e.x.powi(2);
        let sb = (c * eb.t).powi(2) - eb.x.powi(2);
        rep.record((s - sb).abs() / ((c * e.t).powi(2) + e.x.powi(2)));
    }
    rep
}

/// Componentwise `|S u(p) - u(p')|` relative to the largest component of
/// `u(p')`.
pub fn spinor_boost_sweep(seed: u64, samples: usize, units: &UnitSystem) -> SweepReport {
    let mut rng = SweepRng::new(seed);
    let mut rep = SweepReport::new("spinor_boost");
    let pm = SWEEP_MOMENTUM * units.momentum_scale();
    for _ in 0..samples {
        let p = rng.uniform(-pm, pm);
        let b = draw_boost(&mut rng, units);
        let s = spinor_boost_matrix(&b);
        let u = dirac_spinor_u(p, units);
        let su = [
            s[0][0] * u[0] + s[0][1] * u[1],
            s[1][0] * u[0] + s[1][1] * u[1],
        ];
        let (pb, _) = boost_momentum(p, &b, units);
        let ub = dirac_spinor_u(pb, units);
        let scale = ub[0].abs().max(ub[1].abs());
        rep.record((su[0] - ub[0]).abs().max((su[1] - ub[1]).abs()) / scale);
    }
    rep
}

/// `S(v_1) S(v_2)` against `S(v_1 (+) v_2)`, largest entry difference
/// relative to the largest entry.
pub fn spinor_composition_sweep(seed: u64, samples: usize, units: &UnitSystem) -> SweepReport {
    let mut rng = SweepRng::new(seed);
    let mut rep = SweepReport::new("spinor_composition");
    for _ in 0..samples {
        let b1 = draw_boost(&mut rng, units);
        let b2 = draw_boost(&mut rng, units);
        let composed = Boost::new(b1.then(&b2).v(), units).expect("composed velocity below c");
        let lhs = matmul2(&spinor_boost_matrix(&b1), &spinor_boost_matrix(&b2));
        let rhs = spinor_boost_matrix(&composed);
        let scale = rhs.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
        let diff = lhs
            .iter()
            .flatten()
            .zip(rhs.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        rep.record(diff / scale);
    }
    rep
}

/// Dispersion relation residual `|E^2 - c^2 p^2 - m^2 c^4| / E^2` for
/// `|p| <= 10^3 m c`.
pub fn dispersion_sweep(seed: u64, samples: usize, units: &UnitSystem) -> SweepReport {
    let mut rng = SweepRng::new(seed);
    let mut rep = SweepReport::new("dispersion");
    let pm = 1e3 * units.momentum_scale();
    for _ in 0..samples {
        let p = rng.uniform(-pm, pm);
        let e = dispersion_energy(p, units);
        let cp = units.c() * p;
        rep.record(((e - cp) * (e + cp) - units.rest_energy().powi(2)).abs() / (e * e));
    }
    rep
}

/// Parameters of one random two-mode Dirac check.
#[derive(Debug, Clone)]
pub struct DiracDraw {
    pub state: SuperpositionState,
    pub boost: Boost,
    pub events: Vec<Event>,
}

/// Random two-mode states with `|p| <= p_max`, amplitudes of modulus in
/// `[0.1, 2)` with uniform phases, boosts `|v| <= 0.9 c`, and events drawn
/// from `[-10, 10]^2`.
pub fn draw_dirac_cases(
    seed: u64,
    states: usize,
    events_per_state: usize,
    p_max: f64,
    units: &UnitSystem,
) -> Result<Vec<DiracDraw>> {
    let mut rng = SweepRng::new(seed);
    let pm = p_max * units.momentum_scale();
    let mut out = Vec::with_capacity(states);
    for _ in 0..states {
        let mut modes = Vec::with_capacity(2);
        for _ in 0..2 {
            let a = Complex64::from_polar(rng.uniform(0.1, 2.0), rng.uniform(0.0, 2.0 * PI));
            modes.push((a, rng.uniform(-pm, pm)));
        }
        let state = SuperpositionState::new(modes, *units)?;
        let boost = draw_boost(&mut rng, units);
        let events = (0..events_per_state)
            .map(|_| {
                Event::new(
                    rng.uniform(-EVENT_RANGE, EVENT_RANGE),
                    rng.uniform(-EVENT_RANGE, EVENT_RANGE) / units.c(),
                )
            })
            .collect();
        out.push(DiracDraw {
            state,
            boost,
            events,
        });
    }
    Ok(out)
}

pub fn dirac_fourvector_sweep(
    seed: u64,
    states: usize,
    events_per_state: usize,
    units: &UnitSystem,
) -> Result<SweepReport> {
    let mut rep = SweepReport::new("dirac_fourvector");
    for case in draw_dirac_cases(seed, states, events_per_state, 2.0, units)? {
        rep.record(dirac_fourvector_residual(
            &case.state,
            &case.boost,
            &case.events,
        )?);
    }
    Ok(rep)
}

/// Every kinematic identity sweep with a shared seed.
pub fn all_identity_sweeps(seed: u64, samples: usize, units: &UnitSystem) -> Vec<SweepReport> {
    vec![
        beta_alpha_sweep(seed, samples, units),
        mass_shell_sweep(seed.wrapping_add(1), samples, units),
        interval_sweep(seed.wrapping_add(2), samples, units),
        spinor_boost_sweep(seed.wrapping_add(3), samples, units),
        spinor_composition_sweep(seed.wrapping_add(4), samples, units),
        dispersion_sweep(seed.wrapping_add(5), samples, units),
    ]
}
