//! Closed periodic-orbit corrections against direct quadrature of the orbit sum.

use aisw::exact::exact_eigenvalue;
use aisw::orbits::{classify, FamilySide};
use aisw::perturbation::pt_energy;
use aisw::trace::{
    family_orbits, omega_newtonian_asymptotic, omega_quadrature_oracle, omega_single,
    omega_single_l, omega_single_r, po_energy, po_energy_general, reflection_class,
    single_reflection_orbits, QuadratureSpec,
};
use aisw::{LevelIndex, WellConfig};

fn lvl(n: usize) -> LevelIndex {
    LevelIndex::new(n).unwrap()
}

fn group_oracle(alpha: f64, n: usize, side: FamilySide, j_max: usize) -> f64 {
    let config = WellConfig::dimensionless(alpha).unwrap();
    // each member has one reflection; its repetitions belong to other classes
    let spec = QuadratureSpec::new(family_orbits(side, j_max)).with_nu_max(1);
    omega_quadrature_oracle(&config, lvl(n), &spec)
        .unwrap()
        .omega
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn newtonian_error(n: usize) -> f64 {
    let config = WellConfig::dimensionless(2.0).unwrap();
    let spec = QuadratureSpec::new(vec![classify("LR").unwrap()]);
    let oracle = omega_quadrature_oracle(&config, lvl(n), &spec).unwrap();
    rel(oracle.omega, omega_newtonian_asymptotic(2.0, lvl(n)))
}

#[test]
fn newtonian_orbit_matches_asymptotic() {
    let err = newtonian_error(50);
    assert!(err < 0.2, "rel {err}");
}

#[test]
fn newtonian_agreement_improves_with_n() {
    let (coarse, fine) = (newtonian_error(50), newtonian_error(100));
    assert!(fine < coarse, "n=50: {coarse}, n=100: {fine}");
}

#[test]
fn newtonian_terms_are_small() {
    // the leading term of each repetition integrates to zero over the window
    let config = WellConfig::dimensionless(2.0).unwrap();
    let spec = QuadratureSpec::new(vec![classify("LR").unwrap()]).with_nu_max(10);
    let oracle = omega_quadrature_oracle(&config, lvl(50), &spec).unwrap();
    for c in &oracle.contributions {
        assert!(c.value.norm() < 1e-6, "{c:?}");
    }
}

#[test]
fn left_group_matches_closed_form_at_alpha_450() {
    let oracle = group_oracle(450.0, 20, FamilySide::LeftGroup, 40);
    let closed = omega_single_l(450.0, lvl(20));
    assert!(
        rel(oracle, closed) < 0.05,
        "oracle {oracle} closed {closed}"
    );
}

#[test]
fn right_group_matches_closed_form_at_alpha_450() {
    let oracle = group_oracle(450.0, 20, FamilySide::RightGroup, 40);
    let closed = omega_single_r(450.0, lvl(20));
    assert!(
        rel(oracle, closed) < 0.05,
        "oracle {oracle} closed {closed}"
    );
}

/// Where the expansion is trustworthy, each group's quadrature follows the
/// closed form with the `1/n` Catalan term of the opposite sign: the left
/// group tracks `omega_single_r` and the right group `omega_single_l`. The
/// sum is unaffected.
#[test]
fn group_catalan_terms_carry_opposite_sign() {
    let (alpha, n) = (20.0, 200);
    let left = group_oracle(alpha, n, FamilySide::LeftGroup, 160);
    let right = group_oracle(alpha, n, FamilySide::RightGroup, 160);
    assert!(
        rel(left, omega_single_r(alpha, lvl(n))) < 0.01,
        "left {left}"
    );
    assert!(
        rel(right, omega_single_l(alpha, lvl(n))) < 0.01,
        "right {right}"
    );
    assert!(rel(left, omega_single_l(alpha, lvl(n))) > 0.05);
    assert!(rel(left + right, omega_single(alpha, lvl(n))) < 0.01);
}

#[test]
fn single_reflection_families_match_sum() {
    let config = WellConfig::dimensionless(450.0).unwrap();
    let spec = QuadratureSpec::new(single_reflection_orbits(40)).with_nu_max(1);
    for (n, tol) in [(20, 0.05), (60, 0.01)] {
        let oracle = omega_quadrature_oracle(&config, lvl(n), &spec).unwrap();
        let closed = omega_single(450.0, lvl(n));
        assert!(
            rel(oracle.omega, closed) < tol,
            "n={n}: oracle {} closed {closed}",
            oracle.omega
        );
    }
    assert!((omega_single(450.0, lvl(20)) + 0.0713).abs() < 5e-5);
}

#[test]
fn two_reflection_class_decays_fast() {
    let config = WellConfig::dimensionless(10.0).unwrap();
    let spec = QuadratureSpec::new(reflection_class(2, 16).unwrap()).with_nu_max(1);
    let ns = [20.0f64, 40.0, 80.0];
    let mags: Vec<f64> = ns
        .iter()
        .map(|&n| {
            omega_quadrature_oracle(&config, lvl(n as usize), &spec)
                .unwrap()
                .omega
                .abs()
        })
        .collect();
    // least-squares slope of log|ω| against log n
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = mags.iter().map(|m| m.ln()).collect();
    let mx = xs.iter().sum::<f64>() / 3.0;
    let my = ys.iter().sum::<f64>() / 3.0;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!(slope <= -3.5, "slope {slope}, magnitudes {mags:?}");
}

#[test]
fn po_and_pt_agree_at_weak_step() {
    let config = WellConfig::dimensionless(0.5).unwrap();
    let e1 = config.ground_energy();
    let scaled: Vec<f64> = [50usize, 100, 200, 400]
        .iter()
        .map(|&n| {
            (n as f64).powi(3) * (po_energy(&config, lvl(n)) - pt_energy(&config, lvl(n))).abs()
                / e1
        })
        .collect();
    let first = scaled[0].max(1e-6);
    for v in &scaled {
        assert!(v.is_finite() && *v <= 1.5 * first, "{scaled:?}");
    }
}

#[test]
fn expansion_constant_does_not_grow() {
    let config = WellConfig::new(3.0, 100.0, 0.5, 1.0).unwrap();
    let alpha = config.alpha();
    let e1 = config.ground_energy();
    let c_of = |n: usize| {
        let general = po_energy_general(&config, lvl(n), omega_single(alpha, lvl(n))).unwrap();
        (n as f64).powi(3) * (general - po_energy(&config, lvl(n))).abs() / e1
    };
    let early = (20..=100).step_by(10).map(c_of).fold(0.0, f64::max);
    let late = (110..=200).step_by(10).map(c_of).fold(0.0, f64::max);
    assert!(late <= early, "early {early} late {late}");
    assert!(c_of(15).is_finite());
}

#[test]
fn po_beats_pt_above_step() {
    let config = WellConfig::new(3.0, 100.0, 0.5, 1.0).unwrap();
    let exact = exact_eigenvalue(&config, lvl(15)).unwrap().energy;
    let po = (po_energy(&config, lvl(15)) - exact).abs();
    let pt = (pt_energy(&config, lvl(15)) - exact).abs();
    assert!(po < pt, "po {po} pt {pt}");
}

#[test]
fn catalan_terms_cancel_for_random_parameters() {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(37);
    for _ in 0..100 {
        let n: usize = rng.gen_range(1..=500);
        let alpha = rng.gen_range(0.0..=5.0) * n as f64;
        let residual = omega_single_l(alpha, lvl(n)) + omega_single_r(alpha, lvl(n))
            - omega_single(alpha, lvl(n));
        assert!(residual.abs() < 1e-13, "alpha={alpha} n={n}: {residual:e}");
    }
}
