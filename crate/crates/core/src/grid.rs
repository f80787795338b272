//! Periodic position grids and the position/momentum transform pair.
//!
//! Positions are `x_n = -L/2 + n dx` for `n = 0..N`. Momenta are
//! `p_k = 2 pi hbar k / L` with `k` in `[-N/2, N/2)`, stored in FFT order
//! (`k = 0, 1, .., N/2 - 1, -N/2, .., -1`).
//!
//! The transform is the unitary DFT (symmetric `1/sqrt(N)` factors) with the
//! physicist's kernel `exp(-i p x / hbar)`. Momentum samples are rescaled to
//! the continuum amplitude `phi(p)` so that
//! `sum |psi|^2 dx == sum |phi|^2 dp` with `dp = 2 pi hbar / L`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::units::UnitSystem;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unitary DFT, `X_k = N^{-1/2} sum_n x_n exp(-2 pi i k n / N)`.
pub(crate) fn dft_unitary(buf: &mut [Complex64]) {
    let n = buf.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    fft.process(buf);
    let s = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|z| *z *= s);
}

/// Inverse of [`dft_unitary`].
pub(crate) fn idft_unitary(buf: &mut [Complex64]) {
    let n = buf.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    fft.process(buf);
    let s = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|z| *z *= s);
}

/// Uniform periodic grid of `n_points` samples over a box of `length`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n_points: usize,
    length: f64,
}

impl GridSpec {
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < 2 || !n_points.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "n_points",
                value: n_points as f64,
                reason: "must be a positive even integer",
            });
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter {
                name: "length",
                value: length,
                reason: "must be finite and positive",
            });
        }
        Ok(Self { n_points, length })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n_points as f64
    }

    pub fn position(&self, n: usize) -> f64 {
        -0.5 * self.length + n as f64 * self.dx()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|n| self.position(n)).collect()
    }

    /// Signed integer wavenumber of FFT slot `j`.
    pub fn wavenumber(&self, j: usize) -> i64 {
        let n = self.n_points as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }

    /// FFT slot holding wavenumber `k`, if it lies on the grid.
    pub fn slot_of(&self, k: i64) -> Option<usize> {
        let n = self.n_points as i64;
        if k < -n / 2 || k >= n / 2 {
            None
        } else {
            Some(k.rem_euclid(n) as usize)
        }
    }

    /// Momentum spacing `2 pi hbar / L`.
    pub fn dp(&self, hbar: f64) -> f64 {
        2.0 * PI * hbar / self.length
    }

    pub fn momentum(&self, j: usize, hbar: f64) -> f64 {
        self.wavenumber(j) as f64 * self.dp(hbar)
    }

    /// All grid momenta in FFT order.
    pub fn momenta(&self, hbar: f64) -> Vec<f64> {
        (0..self.n_points).map(|j| self.momentum(j, hbar)).collect()
    }

    pub(crate) fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "N={} L={} vs N={} L={}",
                self.n_points, self.length, other.n_points, other.length
            )))
        }
    }

    /// Continuum normalisation factor between unitary DFT coefficients and
    /// `phi(p_k)`, excluding the `(-1)^k` origin shift.
    fn momentum_scale(&self, hbar: f64) -> f64 {
        self.length / (2.0 * PI * hbar * self.n_points as f64).sqrt()
    }
}

/// Wave function sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    grid: GridSpec,
    samples: Vec<Complex64>,
    units: UnitSystem,
}

/// Momentum-space amplitudes `phi(p_k)` in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumState {
    grid: GridSpec,
    amplitudes: Vec<Complex64>,
    units: UnitSystem,
}

impl GridState {
    pub fn new(grid: GridSpec, samples: Vec<Complex64>, units: UnitSystem) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.n_points()
            )));
        }
        Ok(Self {
            grid,
            samples,
            units,
        })
    }

    pub fn zeros(grid: GridSpec, units: UnitSystem) -> Self {
        Self {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.n_points()],
            units,
        }
    }

    pub fn from_fn(grid: GridSpec, units: UnitSystem, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = grid.positions().into_iter().map(f).collect();
        Self {
            grid,
            samples,
            units,
        }
    }

    /// The pure grid mode `exp(i p_k x / hbar)` for integer wavenumber `k`.
    pub fn plane_wave(grid: GridSpec, units: UnitSystem, k: i64) -> Result<Self> {
        if grid.slot_of(k).is_none() {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k as f64,
                reason: "wavenumber outside [-N/2, N/2)",
            });
        }
        let p = k as f64 * grid.dp(units.hbar());
        Ok(Self::from_fn(grid, units, |x| {
            Complex64::from_polar(1.0, p * x / units.hbar())
        }))
    }

    /// Gaussian packet with unit L2 norm, defined by its momentum amplitude
    /// `phi(p) ~ exp(-(p - p0)^2 / (4 sigma_p^2) - i p x0 / hbar)` sampled on
    /// the grid momenta.
    pub fn gaussian_packet(
        grid: GridSpec,
        units: UnitSystem,
        x0: f64,
        p0: f64,
        sigma_p: f64,
    ) -> Result<Self> {
        if !(sigma_p.is_finite() && sigma_p > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma_p",
                value: sigma_p,
                reason: "must be finite and positive",
            });
        }
        let hbar = units.hbar();
        let amplitudes = grid
            .momenta(hbar)
            .into_iter()
            .map(|p| {
                let d = p - p0;
                Complex64::from_polar((-d * d / (4.0 * sigma_p * sigma_p)).exp(), -p * x0 / hbar)
            })
            .collect();
        let mut state = MomentumState::new(grid, amplitudes, units)?.to_position();
        state.normalize();
        Ok(state)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// `sum |psi|^2 dx`.
    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.samples.iter_mut().for_each(|z| *z /= n);
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map_samples(|z| a * z)
    }

    pub fn map_samples(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|&z| f(z)).collect(),
            units: self.units,
        }
    }

    /// Pointwise sum; both states must share a grid.
    pub fn add(&self, other: &GridState) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
            units: self.units,
        })
    }

    /// L2 distance `(sum |a - b|^2 dx)^{1/2}`.
    pub fn distance(&self, other: &GridState) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        let s: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.grid.dx()).sqrt())
    }

    /// Discrete-to-continuum transform `phi(p_k)`.
    pub fn to_momentum(&self) -> MomentumState {
        let mut buf = self.samples.clone();
        dft_unitary(&mut buf);
        let scale = self.grid.momentum_scale(self.units.hbar());
        for (j, z) in buf.iter_mut().enumerate() {
            *z *= origin_sign(self.grid.wavenumber(j)) * scale;
        }
        MomentumState {
            grid: self.grid,
            amplitudes: buf,
            units: self.units,
        }
    }

    /// Unitary DFT coefficients without the continuum rescaling.
    pub(crate) fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = self.samples.clone();
        dft_unitary(&mut buf);
        buf
    }

    pub(crate) fn with_spectrum(&self, mut spectrum: Vec<Complex64>) -> Self {
        idft_unitary(&mut spectrum);
        Self {
            grid: self.grid,
            samples: spectrum,
            units: self.units,
        }
    }

    /// Largest `|phi|` among the top 5 % of `|p_k|`, divided by the global
    /// largest `|phi|`. Zero for the zero state.
    pub fn band_limit_ratio(&self) -> f64 {
        let spec = self.spectrum();
        let global = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if global == 0.0 {
            return 0.0;
        }
        let n = self.grid.n_points();
        let tail = ((n as f64 * 0.05).ceil() as usize).max(1);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| std::cmp::Reverse(self.grid.wavenumber(j).abs()));
        order[..tail]
            .iter()
            .map(|&j| spec[j].norm())
            .fold(0.0, f64::max)
            / global
    }
}

impl MomentumState {
    pub fn new(grid: GridSpec, amplitudes: Vec<Complex64>, units: UnitSystem) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::GridMismatch(format!(
                "{} amplitudes for a grid of {} points",
                amplitudes.len(),
                grid.n_points()
            )));
        }
        Ok(Self {
            grid,
            amplitudes,
            units,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Grid momenta matching [`Self::amplitudes`].
    pub fn momenta(&self) -> Vec<f64> {
        self.grid.momenta(self.units.hbar())
    }

    /// `sum |phi|^2 dp`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dp(self.units.hbar())
    }

    pub fn to_position(&self) -> GridState {
        let scale = self.grid.momentum_scale(self.units.hbar());
        let mut buf: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(j, z)| z * origin_sign(self.grid.wavenumber(j)) / scale)
            .collect();
        idft_unitary(&mut buf);
        GridState {
            grid: self.grid,
            samples: buf,
            units: self.units,
        }
    }
}

/// `exp(i p_k L / (2 hbar)) = (-1)^k`, the phase from placing the origin at
/// the box centre.
fn origin_sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}
