//! Rayleigh–Schrödinger perturbation theory to second order, treating the
//! step as a perturbation of the symmetric well.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{LevelIndex, WellConfig};
use crate::series::CompensatedSum;

/// Default relative tolerance for the truncated second-order sum.
pub const DEFAULT_SUM_TOLERANCE: f64 = 1e-12;

/// Default cut on `4α/(π³n)` below which the expansion is called convergent.
pub const DEFAULT_CONVERGENCE_THRESHOLD: f64 = 0.1;

/// Parity constant of the second-order correction: 3 for even `n`, -1 for odd.
pub fn gamma(n: LevelIndex) -> f64 {
    if n.is_even() {
        3.0
    } else {
        -1.0
    }
}

/// `|⟨k|V|n⟩|²` between unperturbed states.
pub fn pt_matrix_element_sq(config: &WellConfig, k: LevelIndex, n: LevelIndex) -> Result<f64> {
    if k == n {
        return Err(Error::Domain {
            what: "pt_matrix_element_sq",
            value: k.get() as f64,
            reason: "diagonal element is excluded from the second-order sum",
        });
    }
    Ok(matrix_element_sq(config.v0(), k.get(), n.get()))
}

fn matrix_element_sq(v0: f64, k: usize, n: usize) -> f64 {
    if (k + n).is_multiple_of(2) {
        return 0.0;
    }
    let kf = k as f64;
    let nf = n as f64;
    let odd_index = if n % 2 == 1 { kf } else { nf };
    let d = (kf - nf) * (kf + nf);
    4.0 * v0 * v0 * odd_index * odd_index / (PI * PI * d * d)
}

/// Truncated second-order sum and its error bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderSum {
    pub value: f64,
    pub terms_used: usize,
    /// Upper bound on the omitted terms.
    pub tail_estimate: f64,
    /// True when the window cap was hit before `tail_estimate` met the tolerance.
    pub capped: bool,
}

/// Second-order energy shift summed over a window of `k` around `n`.
///
/// The window half-width `K` doubles until the bound on the omitted terms is
/// below `rel_tol · |sum|`, up to `K = max(10⁴, 100 n)`.
pub fn pt_second_order_sum(
    config: &WellConfig,
    n: LevelIndex,
    rel_tol: f64,
) -> Result<SecondOrderSum> {
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rel_tol",
            value: rel_tol,
            reason: "must be positive",
        });
    }
    let v0 = config.v0();
    let e1 = config.ground_energy();
    let nn = n.get();
    let nf = nn as f64;
    if v0 == 0.0 {
        return Ok(SecondOrderSum {
            value: 0.0,
            terms_used: 0,
            tail_estimate: 0.0,
            capped: false,
        });
    }

    let term = |k: usize| {
        let kf = k as f64;
        matrix_element_sq(v0, k, nn) / (e1 * (nf - kf) * (nf + kf))
    };
    // |term| <= c / k⁴ / (1 - n²/k²)³ for k > n
    let c = 4.0 * v0 * v0 / (PI * PI * e1);
    let cap = 10_000usize.max(100 * nn);

    let mut acc = CompensatedSum::new();
    let mut terms_used = 0usize;
    // parity-matching terms vanish, so step by two from the first odd offset
    let mut next_up = nn + 1;
    let mut next_down = nn.checked_sub(1).filter(|&k| k >= 1);
    let mut half_width = 16usize;
    loop {
        let half_width_now = half_width.min(cap);
        while next_up <= nn + half_width_now {
            acc.add(term(next_up));
            terms_used += 1;
            next_up += 2;
        }
        while let Some(k) = next_down {
            if k + half_width_now < nn || k == 0 {
                break;
            }
            acc.add(term(k));
            terms_used += 1;
            next_down = k.checked_sub(2).filter(|&k| k >= 1);
        }

        let value = acc.value();
        let k0 = next_up as f64;
        let upper_tail = c / (3.0 * (k0 - 1.0).powi(3)) / (1.0 - nf * nf / (k0 * k0)).powi(3);
        let lower_tail = match next_down {
            Some(k) => {
                let kf = k as f64;
                let gap = (nf - kf) * (nf + kf);
                (k as f64 / 2.0 + 1.0) * 4.0 * v0 * v0 * nf * nf / (PI * PI * e1 * gap.powi(3))
            }
            None => 0.0,
        };
        let tail_estimate = upper_tail + lower_tail;
        let done = tail_estimate < rel_tol * value.abs();
        if done || half_width_now >= cap {
            return Ok(SecondOrderSum {
                value,
                terms_used,
                tail_estimate,
                capped: !done,
            });
        }
        half_width *= 2;
    }
}

/// Closed second-order shift `γ_n m a² V0² / (2π² ħ² n²)`.
pub fn pt_second_order_asymptotic(config: &WellConfig, n: LevelIndex) -> f64 {
    let nf = n.get() as f64;
    let hbar = config.hbar();
    gamma(n) * config.mass() * config.a().powi(2) * config.v0().powi(2)
        / (2.0 * PI * PI * hbar * hbar * nf * nf)
}

/// Energy through second order: `E₁⁽⁰⁾ (n² + 4α/π² + 4γ_n α²/(π⁴ n²))`.
pub fn pt_energy(config: &WellConfig, n: LevelIndex) -> f64 {
    let nf = n.get() as f64;
    let alpha = config.alpha();
    let pi2 = PI * PI;
    config.ground_energy()
        * (nf * nf + 4.0 * alpha / pi2 + 4.0 * gamma(n) * alpha * alpha / (pi2 * pi2 * nf * nf))
}

/// All corrections for one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtCorrection {
    pub n: LevelIndex,
    pub e0: f64,
    pub e1: f64,
    pub e2_exact_sum: f64,
    pub e2_asymptotic: f64,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub capped: bool,
}

impl PtCorrection {
    pub fn compute(config: &WellConfig, n: LevelIndex, rel_tol: f64) -> Result<Self> {
        let sum = pt_second_order_sum(config, n, rel_tol)?;
        Ok(Self {
            n,
            e0: config.unperturbed_energy(n),
            e1: 0.5 * config.v0(),
            e2_exact_sum: sum.value,
            e2_asymptotic: pt_second_order_asymptotic(config, n),
            terms_used: sum.terms_used,
            tail_estimate: sum.tail_estimate,
            capped: sum.capped,
        })
    }

    /// `e0 + e1 + e2_asymptotic`.
    pub fn total_asymptotic(&self) -> f64 {
        self.e0 + self.e1 + self.e2_asymptotic
    }

    pub fn total_exact_sum(&self) -> f64 {
        self.e0 + self.e1 + self.e2_exact_sum
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceDiag {
    pub n: LevelIndex,
    /// Leading size of the largest first-order mixing coefficient, `4α/(π³n)`.
    pub ratio: f64,
    pub threshold: f64,
    pub convergent: bool,
}

pub fn pt_convergence(config: &WellConfig, n: LevelIndex) -> ConvergenceDiag {
    pt_convergence_with(config, n, DEFAULT_CONVERGENCE_THRESHOLD)
}

pub fn pt_convergence_with(config: &WellConfig, n: LevelIndex, threshold: f64) -> ConvergenceDiag {
    let ratio = 4.0 * config.alpha() / (PI.powi(3) * n.get() as f64);
    ConvergenceDiag {
        n,
        ratio,
        threshold,
        convergent: ratio < threshold,
    }
}
