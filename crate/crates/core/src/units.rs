use crate::error::{Error, Result};

/// Mass, light speed and action quantum shared by every formula.
///
/// Every routine carries `m`, `c` and `hbar` explicitly, so dimensionful runs
/// work the same way as the natural-unit default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    m: f64,
    c: f64,
    hbar: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::NATURAL
    }
}

impl UnitSystem {
    pub const NATURAL: UnitSystem = UnitSystem {
        m: 1.0,
        c: 1.0,
        hbar: 1.0,
    };

    pub fn new(m: f64, c: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("m", m), ("c", c), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and positive",
                });
            }
        }
        Ok(Self { m, c, hbar })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Compton length `hbar / (m c)`.
    pub fn compton_length(&self) -> f64 {
        self.hbar / (self.m * self.c)
    }

    /// Rest energy `m c^2`.
    pub fn rest_energy(&self) -> f64 {
        self.m * self.c * self.c
    }

    /// Momentum scale `m c`; CLI output reports momenta in this unit.
    pub fn momentum_scale(&self) -> f64 {
        self.m * self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_default() {
        let u = UnitSystem::default();
        assert_eq!((u.m(), u.c(), u.hbar()), (1.0, 1.0, 1.0));
        assert_eq!(u.compton_length(), 1.0);
    }

    #[test]
    fn compton_length_product() {
        let u = UnitSystem::new(0.511, 2.5, 0.75).unwrap();
        let l = u.compton_length();
        assert!((l * u.m() * u.c() - u.hbar()).abs() <= 1e-15 * u.hbar());
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(UnitSystem::new(0.0, 1.0, 1.0).is_err());
        assert!(UnitSystem::new(1.0, -1.0, 1.0).is_err());
        assert!(UnitSystem::new(1.0, 1.0, f64::NAN).is_err());
    }
}
