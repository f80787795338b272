//! Macdonald functions `K_0`, `K_1`, `K_2` and the square-root Hamiltonian
//! kernels.
//!
//! For `x <= 2` the functions are summed from their ascending series (the
//! logarithmic form); above that `K_0` and `K_1` come from Steed's continued
//! fraction (Temme's CF2), and `K_2` from the upward recurrence, which is
//! stable for `K`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{dft_unitary, idft_unitary, GridSpec, GridState};
use crate::kinematics::dispersion_energy;
use crate::units::UnitSystem;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;
const MAX_TERMS: usize = 500;

/// Modified Bessel function of the second kind `K_nu(x)` for `nu` in `{0, 1, 2}`.
pub fn macdonald(nu: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            name: "macdonald",
            arg: x,
            requirement: "finite x > 0",
        });
    }
    if nu > 2 {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu as f64,
            reason: "only orders 0, 1 and 2 are supported",
        });
    }
    if x <= SERIES_LIMIT {
        Ok(ascending_series(nu, x))
    } else {
        let (k0, k1) = steed_k0_k1(x);
        Ok(match nu {
            0 => k0,
            1 => k1,
            _ => k0 + 2.0 / x * k1,
        })
    }
}

/// Ascending series, Abramowitz & Stegun 9.6.11:
///
/// `K_n(x) = 1/2 (x/2)^{-n} sum_{k<n} (n-k-1)!/k! (-x^2/4)^k
///          + (-1)^{n+1} ln(x/2) I_n(x)
///          + (-1)^n 1/2 (x/2)^n sum_k [psi(k+1) + psi(n+k+1)] (x^2/4)^k / (k! (n+k)!)`
fn ascending_series(nu: u32, x: f64) -> f64 {
    let n = nu as usize;
    let half = 0.5 * x;
    let q = half * half;

    let mut finite = 0.0;
    if n > 0 {
        let mut term = factorial(n - 1); // k = 0
        for k in 0..n {
            finite += term;
            if k + 1 < n {
                // (n-k-2)!/(k+1)! relative to (n-k-1)!/k!
                term *= -q / ((n - k - 1) as f64 * (k + 1) as f64);
            }
        }
        finite *= 0.5 * half.powi(-(n as i32));
    }

    // I_n and the digamma-weighted sum share the same power terms.
    let mut term = half.powi(n as i32) / factorial(n);
    let mut psi_a = -EULER_GAMMA; // psi(k + 1)
    let mut psi_b = -EULER_GAMMA + harmonic(n); // psi(n + k + 1)
    let mut bessel_i = 0.0;
    let mut weighted = 0.0;
    for k in 0..MAX_TERMS {
        bessel_i += term;
        weighted += (psi_a + psi_b) * term;
        if term.abs() < 1e-18 * bessel_i.abs() && k > 2 {
            break;
        }
        let k1 = (k + 1) as f64;
        psi_a += 1.0 / k1;
        psi_b += 1.0 / (n as f64 + k1);
        term *= q / (k1 * (n as f64 + k1));
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    finite - sign * half.ln() * bessel_i + sign * 0.5 * weighted
}

/// Steed's continued fraction for `(K_0(x), K_1(x))`, valid for `x >~ 2`.
fn steed_k0_k1(x: f64) -> (f64, f64) {
    let a1 = 0.25; // 1/4 - nu^2 with nu = 0
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Radial 3D kernel `K(z) = -(m c^2 / 2 pi^2) K_2(z/l_c) / (z/l_c)`.
///
/// Pointwise evaluation only; the 1D dynamics use [`discrete_kernel_1d`].
pub fn kernel_3d(z: f64, units: &UnitSystem) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            name: "kernel_3d",
            arg: z,
            requirement: "finite separation z > 0",
        });
    }
    let s = z / units.compton_length();
    Ok(-units.rest_energy() / (2.0 * PI * PI) * macdonald(2, s)? / s)
}

/// Exact discrete convolution kernel of a momentum-space symbol on a
/// periodic grid, indexed by separation `r dx` with `r = 0..N` (periodic).
///
/// With this table, `(H psi)(x_n) = sum_m K(x_n - x_m) psi(x_m) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    grid: GridSpec,
    values: Vec<f64>,
    units: UnitSystem,
    imag_residue: f64,
}

impl KernelTable {
    /// Inverse transform of `symbol(p_k)`. The symbol must be even in `p`
    /// for the table to be real.
    pub fn from_symbol(grid: GridSpec, units: UnitSystem, symbol: impl Fn(f64) -> f64) -> Self {
        let n = grid.n_points();
        let mut buf: Vec<Complex64> = grid
            .momenta(units.hbar())
            .into_iter()
            .map(|p| Complex64::new(symbol(p), 0.0))
            .collect();
        idft_unitary(&mut buf);
        let norm = 1.0 / ((n as f64).sqrt() * grid.dx());
        let max_mod = buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let max_im = buf.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let imag_residue = if max_mod > 0.0 { max_im / max_mod } else { 0.0 };
        let values = buf.into_iter().map(|z| z.re * norm).collect();
        Self {
            grid,
            values,
            units,
            imag_residue,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    /// Kernel value at separation index `r` (taken modulo `N`).
    pub fn value(&self, r: i64) -> f64 {
        self.values[r.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest imaginary part of the defining inverse transform relative to
    /// its largest modulus; discarded when the table is built.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    /// Symbol recovered from the table, `sqrt(N) dx * DFT(K)` (FFT order).
    pub fn symbol_samples(&self) -> Vec<f64> {
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        dft_unitary(&mut buf);
        let s = (self.values.len() as f64).sqrt() * self.grid.dx();
        buf.into_iter().map(|z| z.re * s).collect()
    }
}

/// Exact discrete 1D kernel of `sqrt(-c^2 hbar^2 d^2/dx^2 + m^2 c^4)`.
pub fn discrete_kernel_1d(grid: GridSpec, units: UnitSystem) -> KernelTable {
    KernelTable::from_symbol(grid, units, |p| dispersion_energy(p, &units))
}

/// Periodic convolution with `kernel`, summed directly in `O(N^2)`.
pub fn convolve_hamiltonian(state: &GridState, kernel: &KernelTable) -> Result<GridState> {
    state.grid().check_same(kernel.grid())?;
    let n = state.grid().n_points();
    let dx = state.grid().dx();
    let psi = state.samples();
    let out = (0..n)
        .map(|i| {
            let acc: Complex64 = (0..n)
                .map(|j| psi[j] * kernel.values[(i + n - j) % n])
                .sum();
            acc * dx
        })
        .collect();
    GridState::new(*state.grid(), out, *state.units())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from 40-digit arbitrary-precision evaluation.
    #[allow(clippy::excessive_precision)]
    pub(crate) const REFERENCE: [(f64, [f64; 3]); 6] = [
        (
            0.1,
            [
                2.4270690247020165578,
                9.8538447808706055744,
                199.50396464211411711,
            ],
        ),
        (
            0.5,
            [
                0.92441907122766586178,
                1.6564411200033008937,
                7.5501835512408694366,
            ],
        ),
        (
            1.0,
            [
                0.42102443824070833334,
                0.60190723019723457474,
                1.6248388986351774828,
            ],
        ),
        (
            2.0,
            [
                0.11389387274953343565,
                0.13986588181652242728,
                0.25375975456605586294,
            ],
        ),
        (
            5.0,
            [
                0.0036910983340425942747,
                0.0040446134454521642084,
                0.0053089437122234599581,
            ],
        ),
        (
            10.0,
            [
                1.7780062316167651811e-5,
                1.8648773453825584597e-5,
                2.1509817006932768731e-5,
            ],
        ),
    ];

    #[test]
    fn matches_reference_values() {
        for (x, ks) in REFERENCE {
            for (nu, want) in ks.iter().enumerate() {
                let got = macdonald(nu as u32, x).unwrap();
                assert!(
                    ((got - want) / want).abs() < 1e-12,
                    "K{nu}({x}) = {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn continuity_across_series_limit() {
        for nu in 0..3 {
            let below = macdonald(nu, 2.0).unwrap();
            let above = macdonald(nu, 2.0 + 1e-12).unwrap();
            assert!(((below - above) / below).abs() < 1e-10);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(macdonald(0, 0.0).is_err());
        assert!(macdonald(2, -1.0).is_err());
        assert!(macdonald(3, 1.0).is_err());
        assert!(kernel_3d(0.0, &UnitSystem::NATURAL).is_err());
    }

    #[test]
    fn kernel_3d_examples() {
        let u = UnitSystem::NATURAL;
        let k5 = kernel_3d(5.0, &u).unwrap();
        assert!(((k5 + 5.379e-5) / 5.379e-5).abs() < 1e-2);
        let k1 = kernel_3d(1.0, &u).unwrap();
        assert!((k1 + 1.624_838_898_635_177_5 / (2.0 * PI * PI)).abs() < 1e-14);
        let z = 1e-3;
        let lead = kernel_3d(z, &u).unwrap() * z.powi(3);
        assert!(((lead + 1.0 / (PI * PI)) * PI * PI).abs() < 5e-3);
    }

    #[test]
    fn kernel_table_is_real_and_even() {
        let g = GridSpec::new(64, 20.0).unwrap();
        let k = discrete_kernel_1d(g, UnitSystem::NATURAL);
        assert!(k.imag_residue() < 1e-12);
        for r in 1..32 {
            assert!((k.value(r) - k.value(-r)).abs() <= 1e-14 * k.value(0).abs());
        }
    }
}
