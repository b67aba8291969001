//! Periodic-orbit approximation to the spectrum.
//!
//! Quantized reduced actions are `s_n = π(n - ω_n)`, where the oscillatory
//! correction
//!
//! ```text
//! ω_n = (1/π²) Im Σ_{p,ν} ∫_{π(n-1/2)}^{π(n+1/2)} (A_p^ν / ν) e^{iν s_p(s)} ds
//! ```
//!
//! runs over primitive orbits `p` and their repetitions `ν`. This module has
//! the large-`n` closed forms of the Newtonian and single-reflection parts, the
//! resulting energies, and a direct quadrature of the sum over any finite
//! orbit set.

use std::f64::consts::{LN_2, PI};
use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{LevelIndex, ReducedAction, WellConfig};
use crate::orbits::{
    amplitude_unchecked, enumerate_necklaces, orbit_action_unchecked, single_reflection_family,
    FamilySide, OrbitNecklace,
};
use crate::quadrature::GaussLegendre;
use crate::series::CATALAN;

/// Smooth part of the level staircase, `N̄(s) = s/π - 1/2`.
pub fn weyl_count(s: ReducedAction) -> f64 {
    s.get() / PI - 0.5
}

/// `∫ N̄(s) ds` over the window `[π(n - 1/2), π(n + 1/2)]`, i.e. `πn - π/2`.
pub fn weyl_window_integral(n: LevelIndex) -> f64 {
    let (lo, hi) = window(n);
    (hi * hi - lo * lo) / (2.0 * PI) - 0.5 * (hi - lo)
}

/// Integration window of level `n` in reduced action.
pub fn window(n: LevelIndex) -> (f64, f64) {
    let nf = n.get() as f64;
    (PI * (nf - 0.5), PI * (nf + 0.5))
}

/// Newtonian orbit and its repetitions, `8 ln2 α²/(π⁶ n⁵)`.
pub fn omega_newtonian_asymptotic(alpha: f64, n: LevelIndex) -> f64 {
    let nf = n.get() as f64;
    8.0 * LN_2 * alpha * alpha / (PI.powi(6) * nf.powi(5))
}

/// Single-reflection orbits reflecting from the left, `(LR)^(j-1) L`.
pub fn omega_single_l(alpha: f64, n: LevelIndex) -> f64 {
    let nf = n.get() as f64;
    let phase = 2.0 * alpha / (nf * PI);
    let prefactor = -n.parity_sign() * 2.0 * alpha / (nf * nf * PI.powi(4));
    prefactor * (0.5 * PI * phase.sin() + 4.0 * CATALAN / (nf * PI) * phase.cos())
}

/// Single-reflection orbits reflecting from the right: the left form with
/// `α → -α`.
pub fn omega_single_r(alpha: f64, n: LevelIndex) -> f64 {
    omega_single_l(-alpha, n)
}

/// All single-reflection orbits, `(-1)^(n+1) (2α/(n²π³)) sin(2α/(nπ))`.
pub fn omega_single(alpha: f64, n: LevelIndex) -> f64 {
    let nf = n.get() as f64;
    -n.parity_sign() * 2.0 * alpha / (nf * nf * PI.powi(3)) * (2.0 * alpha / (nf * PI)).sin()
}

/// Asymptotic pieces of `ω_n` and the value fed to the energy formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaBreakdown {
    pub n: LevelIndex,
    pub omega_newtonian: f64,
    pub omega_1l: f64,
    pub omega_1r: f64,
    pub omega_1: f64,
    /// Only the single-reflection part is kept.
    pub omega_used: f64,
}

impl OmegaBreakdown {
    pub fn compute(alpha: f64, n: LevelIndex) -> Self {
        let omega_1 = omega_single(alpha, n);
        Self {
            n,
            omega_newtonian: omega_newtonian_asymptotic(alpha, n),
            omega_1l: omega_single_l(alpha, n),
            omega_1r: omega_single_r(alpha, n),
            omega_1,
            omega_used: omega_1,
        }
    }
}

/// `E(ħπ(n - ω))` with nothing expanded.
pub fn po_energy_general(config: &WellConfig, n: LevelIndex, omega: f64) -> Result<f64> {
    if !(omega.abs() < 0.5) {
        return Err(Error::Domain {
            what: "po_energy_general",
            value: omega,
            reason: "|omega| must be below 1/2",
        });
    }
    let s = PI * (n.get() as f64 - omega);
    Ok(config.energy_of_action(config.hbar() * s)?.energy)
}

/// Large-`n` periodic-orbit energy with the single-reflection correction:
/// `E₁⁽⁰⁾ [n² + 4α/π² + (-1)^n (4α/(nπ³)) sin(2α/(nπ)) + 4α²/(n²π⁴)]`.
pub fn po_energy(config: &WellConfig, n: LevelIndex) -> f64 {
    let nf = n.get() as f64;
    let alpha = config.alpha();
    let pi2 = PI * PI;
    let oscillatory =
        n.parity_sign() * 4.0 * alpha / (nf * PI.powi(3)) * (2.0 * alpha / (nf * PI)).sin();
    config.ground_energy()
        * (nf * nf + 4.0 * alpha / pi2 + oscillatory + 4.0 * alpha * alpha / (nf * nf * pi2 * pi2))
}

/// The first `j_max` members of one single-reflection group.
pub fn family_orbits(side: FamilySide, j_max: usize) -> Vec<OrbitNecklace> {
    (1..=j_max)
        .map(|j| single_reflection_family(side, j).expect("j >= 1"))
        .collect()
}

/// Both single-reflection groups, left group first.
pub fn single_reflection_orbits(j_max: usize) -> Vec<OrbitNecklace> {
    let mut orbits = family_orbits(FamilySide::LeftGroup, j_max);
    orbits.extend(family_orbits(FamilySide::RightGroup, j_max));
    orbits
}

/// Primitive orbits with exactly `reflections` step reflections, up to `max_len`.
pub fn reflection_class(reflections: u32, max_len: usize) -> Result<Vec<OrbitNecklace>> {
    Ok(enumerate_necklaces(max_len, true)?
        .into_iter()
        .filter(|o| o.sigma == reflections)
        .collect())
}

/// Orbit set and resolution for [`omega_quadrature_oracle`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub orbits: Vec<OrbitNecklace>,
    /// Repetitions `ν = 1..=nu_max` of every orbit.
    pub nu_max: u32,
    pub panels_per_oscillation: usize,
    pub rel_tol: f64,
}

impl QuadratureSpec {
    pub const DEFAULT_NU_MAX: u32 = 40;
    pub const DEFAULT_PANELS_PER_OSCILLATION: usize = 8;
    pub const DEFAULT_REL_TOL: f64 = 1e-9;
    const MAX_DOUBLINGS: usize = 12;

    pub fn new(orbits: Vec<OrbitNecklace>) -> Self {
        Self {
            orbits,
            nu_max: Self::DEFAULT_NU_MAX,
            panels_per_oscillation: Self::DEFAULT_PANELS_PER_OSCILLATION,
            rel_tol: Self::DEFAULT_REL_TOL,
        }
    }

    pub fn with_nu_max(mut self, nu_max: u32) -> Self {
        self.nu_max = nu_max;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.nu_max < 1 {
            return Err(Error::InvalidParameter {
                name: "nu_max",
                value: f64::from(self.nu_max),
                reason: "must be at least one",
            });
        }
        if self.panels_per_oscillation < 8 {
            return Err(Error::InvalidParameter {
                name: "panels_per_oscillation",
                value: self.panels_per_oscillation as f64,
                reason: "must be at least 8",
            });
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: self.rel_tol,
                reason: "must be positive",
            });
        }
        Ok(())
    }
}

/// One `(orbit, ν)` term of the oracle sum, already divided by `π²`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitContribution {
    pub word: String,
    pub nu: u32,
    pub value: Complex64,
    pub panels: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub n: LevelIndex,
    /// `Im` of the summed contributions.
    pub omega: f64,
    pub contributions: Vec<OrbitContribution>,
    /// Bound on the omitted repetitions `ν > nu_max`, from `Σ |A|^ν/ν`.
    pub repetition_tail_bound: f64,
}

impl OracleResult {
    /// Per-orbit lines `word,nu,contribution_real,contribution_imag`.
    pub fn write_breakdown<W: Write>(&self, mut out: W) -> io::Result<()> {
        for c in &self.contributions {
            writeln!(
                out,
                "{},{},{:.16e},{:.16e}",
                c.word, c.nu, c.value.re, c.value.im
            )?;
        }
        Ok(())
    }
}

/// Direct quadrature of the periodic-orbit sum for `ω_n` over a finite orbit set.
pub fn omega_quadrature_oracle(
    config: &WellConfig,
    n: LevelIndex,
    spec: &QuadratureSpec,
) -> Result<OracleResult> {
    spec.validate()?;
    let alpha = config.alpha();
    let (lo, hi) = window(n);
    if lo * lo <= 2.0 * alpha {
        return Err(Error::Domain {
            what: "omega_quadrature_oracle",
            value: lo,
            reason: "window must lie above sqrt(2 alpha)",
        });
    }
    let rule = GaussLegendre::ten_point();
    let width = hi - lo;

    let mut contributions = Vec::with_capacity(spec.orbits.len() * spec.nu_max as usize);
    let mut total = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for orbit in &spec.orbits {
        let word = orbit.word_string();
        // |ds_p/ds| is largest at the low end of the window
        let len = f64::from(orbit.n_l + orbit.n_r);
        let imbalance = f64::from(orbit.n_l) - f64::from(orbit.n_r);
        let max_rate = (len - 2.0 * alpha * imbalance / (lo * lo))
            .abs()
            .max((len - 2.0 * alpha * imbalance / (hi * hi)).abs());

        for nu in 1..=spec.nu_max {
            let nuf = f64::from(nu);
            let integrand = |s: f64| {
                let amp = amplitude_unchecked(alpha, orbit, s).powi(nu as i32) / nuf;
                Complex64::from_polar(1.0, nuf * orbit_action_unchecked(alpha, orbit, s)) * amp
            };
            let oscillations = nuf * max_rate * width / (2.0 * PI);
            let mut panels = spec.panels_per_oscillation * (oscillations.ceil() as usize).max(1);
            let mut estimate = rule.integrate_complex(integrand, lo, hi, panels);
            let magnitude = rule
                .integrate(
                    |s| amplitude_unchecked(alpha, orbit, s).abs().powi(nu as i32) / nuf,
                    lo,
                    hi,
                    4,
                )
                .max(f64::MIN_POSITIVE);
            let mut converged = false;
            let mut delta = f64::INFINITY;
            for _ in 0..QuadratureSpec::MAX_DOUBLINGS {
                panels *= 2;
                let refined = rule.integrate_complex(integrand, lo, hi, panels);
                delta = (refined - estimate).norm();
                estimate = refined;
                if delta <= spec.rel_tol * estimate.norm().max(magnitude) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Quadrature {
                    orbit: word,
                    nu,
                    panels,
                    delta,
                    tol: spec.rel_tol,
                });
            }
            let value = estimate / (PI * PI);
            total += value;
            contributions.push(OrbitContribution {
                word: word.clone(),
                nu,
                value,
                panels,
            });
        }

        let peak = (0..=32)
            .map(|i| amplitude_unchecked(alpha, orbit, lo + width * f64::from(i) / 32.0).abs())
            .fold(0.0, f64::max);
        let next = f64::from(spec.nu_max + 1);
        tail += if peak < 1.0 {
            width / (PI * PI) * peak.powf(next) / (next * (1.0 - peak))
        } else {
            f64::INFINITY
        };
    }

    Ok(OracleResult {
        n,
        omega: total.im,
        contributions,
        repetition_tail_bound: tail,
    })
}
