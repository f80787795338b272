//! Boost kinematics, the two-plane-wave Born-rule counterexample and the
//! Dirac-side four-vector check.
//!
//! The Born pair of a two-mode state transforms as a four-vector only if the
//! boosted moduli satisfy both the interference-term condition
//! `|A1'||A2'| = alpha_12 |A1||A2|` and the diagonal conditions, whose unique
//! solution is `|Ai'|^2 = alpha_ii |Ai|^2`. Substituting one into the other
//! requires `alpha_11 alpha_22 / alpha_12^2 = 1`, which fails whenever the
//! mode velocities differ.

use num_complex::Complex64;

use crate::densities::dirac_density_current_at;
use crate::error::{Error, Result};
use crate::kinematics::{
    dispersion_energy, mode_velocity, pair_velocity, Event, PlaneWaveMode, SuperpositionState,
};
use crate::operators::{symbol_a, symbol_b};
use crate::units::UnitSystem;

/// Pure boost along x with velocity `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost {
    v: f64,
    c: f64,
    gamma: f64,
    rapidity: f64,
}

impl Boost {
    pub fn new(v: f64, units: &UnitSystem) -> Result<Self> {
        let c = units.c();
        if !v.is_finite() || v.abs() >= c {
            return Err(Error::InvalidParameter {
                name: "v",
                value: v,
                reason: "boost velocity must satisfy |v| < c",
            });
        }
        let beta = v / c;
        Ok(Self {
            v,
            c,
            gamma: 1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt(),
            rapidity: beta.atanh(),
        })
    }

    pub fn from_rapidity(rapidity: f64, units: &UnitSystem) -> Result<Self> {
        Self::new(units.c() * rapidity.tanh(), units)
    }

    pub fn identity(units: &UnitSystem) -> Self {
        Self {
            v: 0.0,
            c: units.c(),
            gamma: 1.0,
            rapidity: 0.0,
        }
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rapidity(&self) -> f64 {
        self.rapidity
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Boost by `self` followed by `other`: rapidities add, velocities
    /// compose as `(v1 + v2) / (1 + v1 v2 / c^2)`.
    pub fn then(&self, other: &Boost) -> Boost {
        let v = (self.v + other.v) / (1.0 + self.v * other.v / (self.c * self.c));
        let beta = v / self.c;
        Boost {
            v,
            c: self.c,
            gamma: 1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt(),
            rapidity: self.rapidity + other.rapidity,
        }
    }

    pub fn inverse(&self) -> Boost {
        Boost {
            v: -self.v,
            rapidity: -self.rapidity,
            ..*self
        }
    }
}

/// `p' = gamma (p - v E / c^2)`, `E' = gamma (E - v p)`.
pub fn boost_momentum(p: f64, boost: &Boost, units: &UnitSystem) -> (f64, f64) {
    let e = dispersion_energy(p, units);
    let c2 = units.c() * units.c();
    (
        boost.gamma * (p - boost.v * e / c2),
        boost.gamma * (e - boost.v * p),
    )
}

/// `x' = gamma (x - v t)`, `t' = gamma (t - v x / c^2)`.
pub fn boost_event(e: Event, boost: &Boost) -> Event {
    Event {
        x: boost.gamma * (e.x - boost.v * e.t),
        t: boost.gamma * (e.t - boost.v * e.x / (boost.c * boost.c)),
    }
}

/// `alpha_ij = gamma (1 - v U_ij / c^2)`.
pub fn alpha_coefficient(p_i: f64, p_j: f64, boost: &Boost, units: &UnitSystem) -> f64 {
    let c2 = units.c() * units.c();
    boost.gamma * (1.0 - boost.v * pair_velocity(p_i, p_j, units) / c2)
}

/// `beta_12 = gamma (U_12 - v) / U'_12`, with `U'_12` computed from the
/// boosted momenta and energies.
pub fn beta_coefficient(p_1: f64, p_2: f64, boost: &Boost, units: &UnitSystem) -> Result<f64> {
    let u = pair_velocity(p_1, p_2, units);
    let (p1b, e1b) = boost_momentum(p_1, boost, units);
    let (p2b, e2b) = boost_momentum(p_2, boost, units);
    let u_boosted = (p1b + p2b) * units.c() * units.c() / (e1b + e2b);
    if u - boost.v == 0.0 || u_boosted == 0.0 {
        return Err(Error::DegenerateBeta(u_boosted));
    }
    Ok(boost.gamma * (u - boost.v) / u_boosted)
}

/// `alpha_11 alpha_22 / alpha_12^2`, written with `gamma` cancelled.
pub fn consistency_ratio(p_1: f64, p_2: f64, boost: &Boost, units: &UnitSystem) -> f64 {
    let c2 = units.c() * units.c();
    let f = |u: f64| 1.0 - boost.v * u / c2;
    let cross = f(pair_velocity(p_1, p_2, units));
    f(mode_velocity(p_1, units)) * f(mode_velocity(p_2, units)) / (cross * cross)
}

/// Momentum of a particle moving at velocity `u`: `p = m u / sqrt(1 - u^2/c^2)`.
pub fn momentum_from_velocity(u: f64, units: &UnitSystem) -> Result<f64> {
    let beta = u / units.c();
    if !beta.is_finite() || beta.abs() >= 1.0 {
        return Err(Error::InvalidParameter {
            name: "u",
            value: u,
            reason: "velocity must satisfy |u| < c",
        });
    }
    Ok(units.m() * u / ((1.0 - beta) * (1.0 + beta)).sqrt())
}

/// Consistency ratio sampled on a square `(u_1, u_2)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSurface {
    pub velocities: Vec<f64>,
    /// `values[i][j]` is the ratio at `(u_1, u_2) = (velocities[i], velocities[j])`.
    pub values: Vec<Vec<f64>>,
}

impl RatioSurface {
    pub fn min(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `|ratio - 1|` on the surface.
    pub fn max_deviation(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .map(|r| (r - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn ratio_surface(
    u_min: f64,
    u_max: f64,
    steps: usize,
    boost: &Boost,
    units: &UnitSystem,
) -> Result<RatioSurface> {
    if steps < 2 {
        return Err(Error::InvalidParameter {
            name: "steps",
            value: steps as f64,
            reason: "need at least two samples per axis",
        });
    }
    if !(u_min < u_max) {
        return Err(Error::InvalidParameter {
            name: "u_min",
            value: u_min,
            reason: "u_min must be below u_max",
        });
    }
    for (name, u) in [("u_min", u_min), ("u_max", u_max)] {
        if !(u.abs() < units.c()) {
            return Err(Error::InvalidParameter {
                name,
                value: u,
                reason: "velocity bounds must satisfy |u| < c",
            });
        }
    }
    let velocities: Vec<f64> = (0..steps)
        .map(|i| u_min + i as f64 * (u_max - u_min) / (steps - 1) as f64)
        .collect();
    let momenta = velocities
        .iter()
        .map(|&u| momentum_from_velocity(u, units))
        .collect::<Result<Vec<_>>>()?;
    let values = momenta
        .iter()
        .map(|&p1| {
            momenta
                .iter()
                .map(|&p2| consistency_ratio(p1, p2, boost, units))
                .collect()
        })
        .collect();
    Ok(RatioSurface { velocities, values })
}

/// Outcome of forcing the Born pair of a two-mode state to transform as a
/// four-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BornTransformReport {
    pub alpha_11: f64,
    pub alpha_22: f64,
    pub alpha_12: f64,
    /// `None` when `U_12 = v`, where `beta_12` is undefined.
    pub beta_12: Option<f64>,
    pub ratio: f64,
    /// Boosted moduli `|A_i'|^2 = alpha_ii |A_i|^2` solving the diagonal
    /// conditions.
    pub boosted_modulus_sq: [f64; 2],
    /// `|A1'||A2'|` from the diagonal solution.
    pub cross_lhs: f64,
    /// `alpha_12 |A1||A2|` demanded by the interference term.
    pub cross_rhs: f64,
    /// `sqrt(alpha_11 alpha_22) / alpha_12 - 1`.
    pub r: f64,
    pub tolerance: f64,
    pub inconsistent: bool,
}

pub fn born_transform_residual(
    state: &SuperpositionState,
    boost: &Boost,
    tolerance: f64,
) -> Result<BornTransformReport> {
    match state.modes() {
        [m1, m2] => Ok(born_transform_residual_modes(
            m1,
            m2,
            boost,
            state.units(),
            tolerance,
        )),
        other => Err(Error::ModeCount {
            expected: 2,
            found: other.len(),
        }),
    }
}

/// Same as [`born_transform_residual`] for two explicit modes, which may share
/// a momentum.
pub fn born_transform_residual_modes(
    m1: &PlaneWaveMode,
    m2: &PlaneWaveMode,
    boost: &Boost,
    units: &UnitSystem,
    tolerance: f64,
) -> BornTransformReport {
    let (p1, p2) = (m1.momentum(), m2.momentum());
    let alpha_11 = alpha_coefficient(p1, p1, boost, units);
    let alpha_22 = alpha_coefficient(p2, p2, boost, units);
    let alpha_12 = alpha_coefficient(p1, p2, boost, units);
    let (a1, a2) = (m1.amplitude().norm(), m2.amplitude().norm());
    let boosted_modulus_sq = [alpha_11 * a1 * a1, alpha_22 * a2 * a2];
    let cross_lhs = (boosted_modulus_sq[0] * boosted_modulus_sq[1]).sqrt();
    let cross_rhs = alpha_12 * a1 * a2;
    let r = (alpha_11 * alpha_22).sqrt() / alpha_12 - 1.0;
    BornTransformReport {
        alpha_11,
        alpha_22,
        alpha_12,
        beta_12: beta_coefficient(p1, p2, boost, units).ok(),
        ratio: consistency_ratio(p1, p2, boost, units),
        boosted_modulus_sq,
        cross_lhs,
        cross_rhs,
        r,
        tolerance,
        inconsistent: r.abs() > tolerance,
    }
}

/// Real 2x2 matrix, row major.
pub type Matrix2 = [[f64; 2]; 2];

/// `S = cosh(eta/2) I - sinh(eta/2) sigma_x`, mapping `u(p)` to `u(p')` in
/// the representation `alpha = sigma_x`, `beta = sigma_z`.
pub fn spinor_boost_matrix(boost: &Boost) -> Matrix2 {
    let h = 0.5 * boost.rapidity;
    let (ch, sh) = (h.cosh(), h.sinh());
    [[ch, -sh], [-sh, ch]]
}

pub fn matmul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn det2(a: &Matrix2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Positive-energy plane-wave spinor `u(p) = [sqrt(E + mc^2), cp / sqrt(E + mc^2)]`.
pub fn dirac_spinor_u(p: f64, units: &UnitSystem) -> [f64; 2] {
    [symbol_a(p, units), symbol_b(p, units)]
}

pub fn apply_matrix(s: &Matrix2, w: [Complex64; 2]) -> [Complex64; 2] {
    [
        w[0] * s[0][0] + w[1] * s[0][1],
        w[0] * s[1][0] + w[1] * s[1][1],
    ]
}

/// Boosted superposition: each mode's spinor `A_i u(p_i)` is mapped by
/// [`spinor_boost_matrix`], its momentum by [`boost_momentum`], and the new
/// amplitude is the projection of the boosted spinor onto `u(p_i')`.
pub fn boost_superposition(
    state: &SuperpositionState,
    boost: &Boost,
) -> Result<SuperpositionState> {
    let units = *state.units();
    let s = spinor_boost_matrix(boost);
    let modes = state.modes().iter().map(|m| {
        let u = dirac_spinor_u(m.momentum(), &units);
        let w = apply_matrix(&s, [m.amplitude() * u[0], m.amplitude() * u[1]]);
        let (pb, _) = boost_momentum(m.momentum(), boost, &units);
        let ub = dirac_spinor_u(pb, &units);
        let amp = (w[0] * ub[0] + w[1] * ub[1]) / (ub[0] * ub[0] + ub[1] * ub[1]);
        (amp, pb)
    });
    SuperpositionState::new(modes.collect::<Vec<_>>(), units)
}

/// Largest deviation, over `events`, of the boosted state's `(rho_D, J_D)`
/// at the boosted events from the four-vector transform of the original
/// frame's pair, normalised by `max rho_D` (current residuals by
/// `c max rho_D`).
pub fn dirac_fourvector_residual(
    state: &SuperpositionState,
    boost: &Boost,
    events: &[Event],
) -> Result<f64> {
    let c = state.units().c();
    let boosted = boost_superposition(state, boost)?;
    let boosted_events: Vec<Event> = events.iter().map(|&e| boost_event(e, boost)).collect();
    let (rho, j) = dirac_density_current_at(state, events);
    let (rho_b, j_b) = dirac_density_current_at(&boosted, &boosted_events);
    let scale = rho.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let (g, v) = (boost.gamma, boost.v);
    let worst = (0..events.len())
        .map(|n| {
            let rho_expected = g * (rho[n] - v * j[n] / (c * c));
            let j_expected = g * (j[n] - v * rho[n]);
            ((rho_b[n] - rho_expected).abs() / scale).max((j_b[n] - j_expected).abs() / (c * scale))
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAT: UnitSystem = UnitSystem::NATURAL;

    fn boost(v: f64) -> Boost {
        Boost::new(v, &NAT).unwrap()
    }

    #[test]
    fn boost_invariants() {
        for v in [-0.99, -0.5, 0.0, 0.3, 0.9] {
            let b = boost(v);
            assert!(b.gamma() >= 1.0);
            assert!((b.gamma().powi(2) * (1.0 - v * v) - 1.0).abs() < 1e-14);
        }
        assert!(Boost::new(1.0, &NAT).is_err());
        assert!(Boost::new(-1.5, &NAT).is_err());
    }

    #[test]
    fn boost_momentum_examples() {
        let (p, e) = boost_momentum(0.0, &boost(0.5), &NAT);
        assert!((p + 0.5773502691896258).abs() < 1e-15);
        assert!((e - 1.1547005383792517).abs() < 1e-15);
        assert_eq!(boost_momentum(0.4, &boost(0.0), &NAT).0, 0.4);
        let b = boost(0.7);
        let (p1, _) = boost_momentum(1.3, &b, &NAT);
        let (p0, _) = boost_momentum(p1, &b.inverse(), &NAT);
        assert!((p0 - 1.3).abs() < 1e-13);
    }

    #[test]
    fn boost_event_examples() {
        let b = boost(0.5);
        assert_eq!(boost_event(Event::default(), &b), Event::default());
        let e = boost_event(Event::new(1.0, 0.0), &b);
        let g = b.gamma();
        assert!((e.x - g).abs() < 1e-15 && (e.t + g / 2.0).abs() < 1e-15);
        let (b1, b2) = (boost(0.3), boost(-0.6));
        let ev = Event::new(2.0, -1.5);
        let two = boost_event(boost_event(ev, &b1), &b2);
        let one = boost_event(ev, &b1.then(&b2));
        assert!((two.x - one.x).abs() < 1e-12 && (two.t - one.t).abs() < 1e-12);
    }

    #[test]
    fn alpha_examples() {
        let b = boost(0.5);
        assert!((alpha_coefficient(0.0, 0.0, &b, &NAT) - b.gamma()).abs() < 1e-15);
        assert!((alpha_coefficient(0.75, -0.75, &b, &NAT) - 1.1547005383792517).abs() < 1e-12);
        assert!((alpha_coefficient(0.75, 0.75, &b, &NAT) - 0.8082903768654761).abs() < 1e-12);
    }

    #[test]
    fn beta_examples() {
        let b = boost(0.5);
        let beta = beta_coefficient(0.75, -0.75, &b, &NAT).unwrap();
        assert!((beta - b.gamma()).abs() < 1e-12);
        // U_12 = 0.6 = v exactly.
        assert!(matches!(
            beta_coefficient(0.75, 0.75, &boost(0.6), &NAT),
            Err(Error::DegenerateBeta(_))
        ));
    }

    #[test]
    fn ratio_examples() {
        let b = boost(0.5);
        assert_eq!(consistency_ratio(0.75, 0.75, &b, &NAT), 1.0);
        assert!((consistency_ratio(0.75, -0.75, &b, &NAT) - 0.91).abs() < 1e-12);
        let p1 = momentum_from_velocity(0.8, &NAT).unwrap();
        let p2 = momentum_from_velocity(0.81, &NAT).unwrap();
        assert!((consistency_ratio(p1, p2, &b, &NAT) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn small_surface() {
        let s = ratio_surface(-0.6, 0.6, 3, &boost(0.5), &NAT).unwrap();
        for i in 0..3 {
            assert_eq!(s.values[i][i], 1.0);
            for j in 0..3 {
                assert_eq!(s.values[i][j], s.values[j][i]);
            }
        }
        assert!((s.values[2][0] - 0.91).abs() < 1e-12);
        let flat = ratio_surface(-0.9, 0.9, 7, &Boost::identity(&NAT), &NAT).unwrap();
        assert!(flat.values.iter().flatten().all(|&r| r == 1.0));
        assert!(ratio_surface(-0.9, 1.0, 7, &boost(0.5), &NAT).is_err());
        assert!(ratio_surface(-0.9, 0.9, 1, &boost(0.5), &NAT).is_err());
    }

    #[test]
    fn canonical_born_report() {
        let s = SuperpositionState::new(
            [
                (Complex64::new(1.0, 0.0), 0.75),
                (Complex64::new(1.0, 0.0), -0.75),
            ],
            NAT,
        )
        .unwrap();
        let rep = born_transform_residual(&s, &boost(0.5), 1e-12).unwrap();
        assert!((rep.boosted_modulus_sq[0] - 0.8082903768654761).abs() < 1e-12);
        assert!((rep.boosted_modulus_sq[1] - 1.5011106998930273).abs() < 1e-12);
        assert!((rep.r - (0.91f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!((rep.cross_lhs / rep.cross_rhs - 1.0 - rep.r).abs() < 1e-12);
        assert!(rep.inconsistent);
        assert!((rep.beta_12.unwrap() / rep.alpha_12 - 1.0).abs() < 1e-12);

        let one = SuperpositionState::new([(Complex64::new(1.0, 0.0), 0.75)], NAT).unwrap();
        assert!(born_transform_residual(&one, &boost(0.5), 1e-12).is_err());
    }

    #[test]
    fn spinor_matrix_examples() {
        let id = spinor_boost_matrix(&Boost::identity(&NAT));
        assert_eq!(id, [[1.0, 0.0], [0.0, 1.0]]);
        let b = boost(0.5);
        let s = spinor_boost_matrix(&b);
        assert!((det2(&s) - 1.0).abs() < 1e-14);
        let u0 = dirac_spinor_u(0.0, &NAT);
        let (pb, _) = boost_momentum(0.0, &b, &NAT);
        let ub = dirac_spinor_u(pb, &NAT);
        let su = [
            s[0][0] * u0[0] + s[0][1] * u0[1],
            s[1][0] * u0[0] + s[1][1] * u0[1],
        ];
        assert!((su[0] - ub[0]).abs() < 1e-12 && (su[1] - ub[1]).abs() < 1e-12);
        let eta = 0.5f64.atanh();
        assert!((su[0] - 2f64.sqrt() * (eta / 2.0).cosh()).abs() < 1e-12);
        assert!((su[1] + 2f64.sqrt() * (eta / 2.0).sinh()).abs() < 1e-12);
    }

    #[test]
    fn dirac_single_mode_transforms_exactly() {
        let events: Vec<Event> = (0..16)
            .map(|i| Event::new(i as f64 - 8.0, 0.5 * i as f64))
            .collect();
        for (p, v) in [(0.0, 0.5), (1.7, -0.9), (-2.0, 0.9), (0.3, 0.0)] {
            let s = SuperpositionState::new([(Complex64::from_polar(0.8, 1.1), p)], NAT).unwrap();
            let r = dirac_fourvector_residual(&s, &boost(v), &events).unwrap();
            assert!(r < 1e-12, "p={p} v={v} r={r}");
        }
    }

    #[test]
    fn dirac_canonical_pair_passes() {
        let s = SuperpositionState::new(
            [
                (Complex64::new(1.0, 0.0), 0.75),
                (Complex64::new(1.0, 0.0), -0.75),
            ],
            NAT,
        )
        .unwrap();
        let events: Vec<Event> = (0..64)
            .map(|i| Event::new(0.31 * i as f64 - 10.0, 0.17 * i as f64 - 5.0))
            .collect();
        let r = dirac_fourvector_residual(&s, &boost(0.5), &events).unwrap();
        assert!(r < 1e-10, "{r}");
        let r0 = dirac_fourvector_residual(&s, &Boost::identity(&NAT), &events).unwrap();
        assert!(r0 < 1e-14);
    }

    #[test]
    fn phase_is_boost_invariant() {
        let b = boost(0.6);
        let ev = Event::new(3.0, -2.0);
        let evb = boost_event(ev, &b);
        for p in [-2.5, -0.3, 0.0, 1.9] {
            let (pb, eb) = boost_momentum(p, &b, &NAT);
            let e = dispersion_energy(p, &NAT);
            let phase = p * ev.x - e * ev.t;
            let phase_b = pb * evb.x - eb * evb.t;
            assert!((phase - phase_b).abs() <= 1e-12 * phase.abs().max(1.0));
        }
    }
}
