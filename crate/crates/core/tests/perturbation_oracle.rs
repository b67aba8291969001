//! Perturbation theory against direct numerical integration and the closed
//! large-`n` form.

use std::f64::consts::PI;

use aisw::perturbation::{
    gamma, pt_matrix_element_sq, pt_second_order_asymptotic, pt_second_order_sum,
    DEFAULT_SUM_TOLERANCE,
};
use aisw::quadrature::GaussLegendre;
use aisw::{LevelIndex, WellConfig};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn lvl(n: usize) -> LevelIndex {
    LevelIndex::new(n).unwrap()
}

/// `(V0/a) ∫₀ᵃ sin(kπ(x+a)/2a) sin(nπ(x+a)/2a) dx`, integrated numerically.
fn matrix_element_by_quadrature(config: &WellConfig, k: usize, n: usize) -> f64 {
    let a = config.a();
    let f = |x: f64| {
        let u = PI * (x + a) / (2.0 * a);
        ((k as f64) * u).sin() * ((n as f64) * u).sin()
    };
    // resolve the fastest oscillation with plenty of panels per period
    let panels = 4 * (k + n) + 16;
    config.v0() / a * GaussLegendre::ten_point().integrate(f, 0.0, a, panels)
}

#[test]
fn closed_matrix_element_matches_integral() {
    let config = WellConfig::new(1.7, 3.2, 0.9, 1.0).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checked = 0;
    while checked < 20 {
        let k: usize = rng.gen_range(1..=60);
        let n: usize = rng.gen_range(1..=60);
        if k == n {
            continue;
        }
        let closed = pt_matrix_element_sq(&config, lvl(k), lvl(n)).unwrap();
        let numeric = matrix_element_by_quadrature(&config, k, n).powi(2);
        if closed == 0.0 {
            // same parity: the integral vanishes, compare on the V0² scale
            assert!(
                numeric < 1e-20 * config.v0().powi(2),
                "k={k} n={n}: {numeric:e}"
            );
        } else {
            let rel = (closed - numeric).abs() / closed;
            assert!(
                rel < 1e-10,
                "k={k} n={n}: closed {closed} numeric {numeric} rel {rel:e}"
            );
        }
        checked += 1;
    }
}

#[test]
fn matrix_element_two_one() {
    let config = WellConfig::new(1.0, 2.5, 1.0, 1.0).unwrap();
    let expected = 16.0 * 2.5f64.powi(2) / (9.0 * PI * PI);
    let numeric = matrix_element_by_quadrature(&config, 2, 1).powi(2);
    assert!((numeric - expected).abs() < 1e-13 * expected);
    let closed = pt_matrix_element_sq(&config, lvl(2), lvl(1)).unwrap();
    assert!((closed - expected).abs() < 1e-13 * expected);
}

#[test]
fn second_order_sum_ratio_near_one() {
    let config = WellConfig::dimensionless(10.0).unwrap();
    for n in [50, 100, 200] {
        let sum = pt_second_order_sum(&config, lvl(n), DEFAULT_SUM_TOLERANCE).unwrap();
        let ratio = sum.value / pt_second_order_asymptotic(&config, lvl(n));
        assert!((0.9..=1.1).contains(&ratio), "n={n}: ratio {ratio}");
    }
}

/// `n² E⁽²⁾` should approach `γ_n m a² V0²/(2π²ħ²)` with shrinking error.
#[test]
fn scaled_second_order_sum_approaches_limit() {
    let config = WellConfig::new(1.2, 4.0, 0.7, 0.9).unwrap();
    let mut previous = f64::INFINITY;
    for n in [50, 100, 200, 400] {
        let limit = gamma(lvl(n)) * config.mass() * config.a().powi(2) * config.v0().powi(2)
            / (2.0 * PI * PI * config.hbar().powi(2));
        let scaled = (n * n) as f64
            * pt_second_order_sum(&config, lvl(n), DEFAULT_SUM_TOLERANCE)
                .unwrap()
                .value;
        let err = (scaled - limit).abs();
        assert!(
            err < previous,
            "n={n}: |n²e2 - limit| = {err:e} did not shrink from {previous:e}"
        );
        previous = err;
    }
}

/// Exact rational arithmetic on the partial fractions shows the sum equals the
/// closed form for every `n`; check that independently with a brute-force sum.
#[test]
fn second_order_sum_brute_force() {
    let config = WellConfig::dimensionless(3.0).unwrap();
    let e1 = config.ground_energy();
    for n in [1usize, 2, 7, 12] {
        let mut total = 0.0;
        // hundreds of thousands of terms; the tail beyond is < 1e-15 relative
        for k in (1..400_000usize).rev() {
            if k == n {
                continue;
            }
            let m = pt_matrix_element_sq(&config, lvl(k), lvl(n)).unwrap();
            total += m / (e1 * ((n * n) as f64 - (k * k) as f64));
        }
        let sum = pt_second_order_sum(&config, lvl(n), DEFAULT_SUM_TOLERANCE).unwrap();
        assert!(
            (sum.value - total).abs() < 1e-10 * total.abs(),
            "n={n}: {} vs {total}",
            sum.value
        );
    }
}
