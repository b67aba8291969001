//! Physical parameters of the step well and the maps between energy, action
//! and the step's reflection/transmission coefficients.
//!
//! The well occupies `-a < x < a` with `V = 0` on the left half and `V = V0`
//! on the right half. Units are whatever the caller chooses, as long as they
//! are consistent.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Physical parameters of the well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellConfig {
    a: f64,
    v0: f64,
    mass: f64,
    hbar: f64,
}

fn require(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}

impl WellConfig {
    /// `a` is the half-width of the well, `v0` the step height.
    pub fn new(a: f64, v0: f64, mass: f64, hbar: f64) -> Result<Self> {
        require("a", a, a > 0.0, "must be positive")?;
        require("V0", v0, v0 >= 0.0, "must be non-negative")?;
        require("m", mass, mass > 0.0, "must be positive")?;
        require("hbar", hbar, hbar > 0.0, "must be positive")?;
        let config = Self { a, v0, mass, hbar };
        let alpha = config.alpha();
        require(
            "alpha",
            alpha,
            alpha >= 0.0,
            "derived step strength must be finite",
        )?;
        Ok(config)
    }

    /// Dimensionless configuration with `a = m = hbar = 1` and `V0 = alpha`.
    pub fn dimensionless(alpha: f64) -> Result<Self> {
        Self::new(1.0, alpha, 1.0, 1.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Dimensionless step strength `m a² V0 / ħ²`.
    pub fn alpha(&self) -> f64 {
        self.mass * self.a * self.a * self.v0 / (self.hbar * self.hbar)
    }

    /// Ground energy of the well without the step, `π²ħ²/(8ma²)`.
    pub fn ground_energy(&self) -> f64 {
        PI * PI * self.hbar * self.hbar / (8.0 * self.mass * self.a * self.a)
    }

    /// Unperturbed level `n² E₁⁽⁰⁾`.
    pub fn unperturbed_energy(&self, n: LevelIndex) -> f64 {
        let n = n.get() as f64;
        n * n * self.ground_energy()
    }

    /// `2 m a² V0`, the squared action at the bottom of `E(S)`.
    pub(crate) fn threshold_action_sq(&self) -> f64 {
        2.0 * self.mass * self.a * self.a * self.v0
    }

    /// Classical action length across the whole well at energy `e >= V0`.
    pub fn action_of_energy(&self, e: f64) -> Result<f64> {
        if !(e >= self.v0) || !e.is_finite() {
            return Err(Error::Domain {
                what: "action_of_energy",
                value: e,
                reason: "energy must be at least V0",
            });
        }
        let two_m = 2.0 * self.mass;
        Ok(self.a * (two_m * e).sqrt() + self.a * (two_m * (e - self.v0)).sqrt())
    }

    /// Inverse of [`action_of_energy`](Self::action_of_energy).
    ///
    /// `E(S)` is defined for every `S > 0` but only inverts the action map on
    /// `S >= sqrt(2 m a² V0)`; smaller actions are evaluated anyway and
    /// reported as [`ActionBranch::Decreasing`].
    pub fn energy_of_action(&self, s: f64) -> Result<ActionEnergy> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Domain {
                what: "energy_of_action",
                value: s,
                reason: "action must be positive",
            });
        }
        let c = self.threshold_action_sq();
        let num = s * s + c;
        let energy = num * num / (8.0 * self.mass * self.a * self.a * s * s);
        let branch = if s * s >= c {
            ActionBranch::Increasing
        } else {
            ActionBranch::Decreasing
        };
        Ok(ActionEnergy { energy, branch })
    }

    /// Step reflection amplitude for a plane wave at energy `e > V0`.
    pub fn reflection_coeff_energy(&self, e: f64) -> Result<f64> {
        if !(e > self.v0) || !e.is_finite() {
            return Err(Error::Domain {
                what: "reflection_coeff_energy",
                value: e,
                reason: "energy must exceed V0",
            });
        }
        let root = (1.0 - self.v0 / e).sqrt();
        Ok((1.0 - root) / (1.0 + root))
    }
}

/// Which side of the minimum of `E(S)` an action sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionBranch {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionEnergy {
    pub energy: f64,
    pub branch: ActionBranch,
}

impl ActionEnergy {
    pub fn is_increasing(&self) -> bool {
        self.branch == ActionBranch::Increasing
    }
}

/// Positive (1-based) quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelIndex(usize);

impl LevelIndex {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "level index is 1-based",
            });
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `(-1)^n` as a float.
    pub fn parity_sign(self) -> f64 {
        if self.is_even() {
            1.0
        } else {
            -1.0
        }
    }
}

impl TryFrom<usize> for LevelIndex {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl std::fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Reduced action `S / ħ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ReducedAction(f64);

impl ReducedAction {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Domain {
                what: "reduced action",
                value: s,
                reason: "must be positive and finite",
            });
        }
        Ok(Self(s))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

fn check_above_threshold(what: &'static str, alpha: f64, s: ReducedAction) -> Result<()> {
    let s = s.get();
    if s * s > 2.0 * alpha {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: s,
            reason: "reduced action must exceed sqrt(2 alpha)",
        })
    }
}

/// Reflection amplitude `r = 2α/s²` expressed through the reduced action.
pub fn reflection_coeff_action(alpha: f64, s: ReducedAction) -> Result<f64> {
    check_above_threshold("reflection_coeff_action", alpha, s)?;
    Ok(reflection_unchecked(alpha, s.get()))
}

/// Transmission amplitude `t = sqrt(1 - 4α²/s⁴)`.
pub fn transmission_coeff(alpha: f64, s: ReducedAction) -> Result<f64> {
    check_above_threshold("transmission_coeff", alpha, s)?;
    Ok(transmission_sq_unchecked(alpha, s.get()).sqrt())
}

#[inline]
pub(crate) fn reflection_unchecked(alpha: f64, s: f64) -> f64 {
    2.0 * alpha / (s * s)
}

/// `t² = 1 - r²`, written as `(1 - r)(1 + r)` to keep precision when `r` is small.
#[inline]
pub(crate) fn transmission_sq_unchecked(alpha: f64, s: f64) -> f64 {
    let r = reflection_unchecked(alpha, s);
    (1.0 - r) * (1.0 + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> WellConfig {
        WellConfig::new(3.0, 100.0, 0.5, 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn alpha_values() {
        assert_eq!(reference().alpha(), 450.0);
        assert_eq!(WellConfig::new(1.0, 0.0, 1.0, 1.0).unwrap().alpha(), 0.0);
        assert_eq!(WellConfig::new(2.0, 3.0, 1.0, 1.0).unwrap().alpha(), 12.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WellConfig::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(WellConfig::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(WellConfig::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(WellConfig::new(1.0, 1.0, 1.0, -2.0).is_err());
        assert!(WellConfig::new(1.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(WellConfig::new(1e200, 1e200, 1e200, 1e-200).is_err());
        assert!(LevelIndex::new(0).is_err());
        assert!(ReducedAction::new(0.0).is_err());
    }

    #[test]
    fn ground_energy_values() {
        assert!(rel(reference().ground_energy(), PI * PI / 36.0) < 1e-15);
        assert!((reference().ground_energy() - 0.274156).abs() < 1e-6);
        let unit = WellConfig::new(1.0, 0.0, 1.0, 1.0).unwrap();
        assert!(rel(unit.ground_energy(), PI * PI / 8.0) < 1e-15);
        for c in [reference(), WellConfig::new(0.7, 3.3, 2.1, 0.4).unwrap()] {
            let lhs = c.v0() / c.ground_energy();
            assert!(rel(lhs, 8.0 * c.alpha() / (PI * PI)) < 1e-14);
        }
    }

    #[test]
    fn action_special_points() {
        let sym = WellConfig::new(1.5, 0.0, 2.0, 1.0).unwrap();
        let e = 7.0;
        assert!(
            rel(
                sym.action_of_energy(e).unwrap(),
                2.0 * 1.5 * (2.0 * 2.0 * e).sqrt()
            ) < 1e-15
        );
        let c = reference();
        assert!(
            rel(
                c.action_of_energy(100.0).unwrap(),
                3.0 * (2.0 * 0.5 * 100.0f64).sqrt()
            ) < 1e-15
        );
        assert!(c.action_of_energy(99.0).is_err());
    }

    #[test]
    fn energy_of_action_minimum() {
        let c = reference();
        let s_min = c.threshold_action_sq().sqrt();
        let at = c.energy_of_action(s_min).unwrap();
        assert!(rel(at.energy, c.v0()) < 1e-15);
        assert!(at.is_increasing());
        // stationary: neighbours are higher on both sides
        for d in [1e-4, -1e-4] {
            assert!(c.energy_of_action(s_min * (1.0 + d)).unwrap().energy > c.v0());
        }
        assert_eq!(
            c.energy_of_action(0.5 * s_min).unwrap().branch,
            ActionBranch::Decreasing
        );
        let free = WellConfig::new(2.0, 0.0, 0.5, 1.0).unwrap();
        assert!(
            rel(
                free.energy_of_action(3.0).unwrap().energy,
                9.0 / (8.0 * 0.5 * 4.0)
            ) < 1e-15
        );
        assert!(c.energy_of_action(0.0).is_err());
        assert!(c.energy_of_action(-1.0).is_err());
    }

    #[test]
    fn reflection_values() {
        let c = reference();
        let r = c.reflection_coeff_energy(200.0).unwrap();
        let h = 0.5f64.sqrt();
        assert!(rel(r, (1.0 - h) / (1.0 + h)) < 1e-15);
        assert!((r - 0.171573).abs() < 1e-6);
        let free = WellConfig::new(1.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(free.reflection_coeff_energy(3.0).unwrap(), 0.0);
        assert!(c.reflection_coeff_energy(100.0).is_err());
        let mut last = 1.0;
        for k in 1..40 {
            let r = c.reflection_coeff_energy(100.0 * 1.5f64.powi(k)).unwrap();
            assert!(r < last);
            last = r;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn reflection_independent_of_hbar() {
        let e = 321.0;
        let r1 = WellConfig::new(3.0, 100.0, 0.5, 1.0)
            .unwrap()
            .reflection_coeff_energy(e)
            .unwrap();
        let r2 = WellConfig::new(3.0, 100.0, 0.5, 0.01)
            .unwrap()
            .reflection_coeff_energy(e)
            .unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn action_coefficients() {
        let s = ReducedAction::new(20.0 * PI).unwrap();
        let r = reflection_coeff_action(450.0, s).unwrap();
        assert!(rel(r, 900.0 / (400.0 * PI * PI)) < 1e-15);
        assert!((r - 0.2280).abs() < 1e-4);
        let t = transmission_coeff(450.0, s).unwrap();
        assert!(rel(t, (1.0 - r * r).sqrt()) < 1e-15);
        assert!((t - 0.97367).abs() < 1e-5);
        assert_eq!(reflection_coeff_action(0.0, s).unwrap(), 0.0);
        assert_eq!(transmission_coeff(0.0, s).unwrap(), 1.0);
        let at = ReducedAction::new(30.0).unwrap();
        assert!(reflection_coeff_action(450.0, at).is_err());
        assert!(transmission_coeff(450.0, at).is_err());
    }
}
