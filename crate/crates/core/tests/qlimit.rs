mod common;

use bannai_ito::bivariate::reduce_def2_to_def1;
use bannai_ito::exact::rat;
use bannai_ito::qlimit::*;
use bannai_ito::Error;

fn show(reps: &[ConvergenceReport]) {
    for r in reps {
        println!("{:<32} err {:?} order {:?} imag {:.1e} pass {}", r.check, r.error, r.order, r.max_imag, r.pass);
    }
}

#[test]
fn askey_wilson_polynomial_limits() {
    let cfg = LimitConfig::default();
    let (z1, z2) = (rat(3, 7), rat(-2, 9));
    for p in common::free_sets() {
        for (n1, n2) in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 2), (2, 2)] {
            let reps = check_poly_limit_def2(&cfg, &p, n1, n2, &z1, &z2).unwrap();
            show(&reps);
            assert!(reps.iter().all(|r| r.pass));
        }
    }
}

#[test]
fn q_racah_polynomial_limits() {
    let cfg = LimitConfig::default();
    let (z1, z2) = (rat(3, 7), rat(-2, 9));
    for p in common::biv_sets(4) {
        for (n1, n2) in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3)] {
            let reps = check_poly_limit_def1(&cfg, &p, n1, n2, &z1, &z2).unwrap();
            show(&reps);
            assert!(reps.iter().all(|r| r.pass));
        }
    }
}

#[test]
fn operator_limits() {
    let cfg = LimitConfig::default();
    for p in common::free_sets() {
        let reps = check_operator_limit(&cfg, &p, &rat(3, 7), &rat(-2, 9), &[(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        show(&reps);
        assert!(reps.iter().all(|r| r.pass));
    }
}

#[test]
fn recurrence_limits() {
    let cfg = LimitConfig::default();
    let p = common::free_sample();
    for (n1, n2) in [(0, 0), (1, 1), (2, 3), (3, 2), (2, 0)] {
        let reps = check_recurrence_limit(&cfg, &p, n1, n2, &rat(1, 7), &rat(-2, 9)).unwrap();
        show(&reps);
        assert!(reps.iter().all(|r| r.pass));
    }
}

#[test]
fn low_precision_is_detected() {
    let cfg = LimitConfig { t_values: vec![rat(1, 10000), rat(1, 100000)], precision: 32 };
    let p = common::free_sample();
    let r = check_operator_limit(&cfg, &p, &rat(3, 7), &rat(-2, 9), &[]);
    assert!(matches!(r, Err(Error::Precision { .. })), "{r:?}");
}

#[test]
fn bridge_factors_agree() {
    let p = &common::biv_sets(4)[0];
    let q = reduce_def2_to_def1(p);
    let ctx = QContext::new(&rat(1, 100000), 256).unwrap();
    let (z1, z2) = (rat(3, 7), rat(-2, 9));
    let (r1, r2) = q_racah_pair(&ctx, &QRacahParams::new(&ctx, p, &z1, &z2), 2, 1).unwrap();
    let (a1, a2) = aw_pair(&ctx, &QAWParams::new(&ctx, &q, &z1, &z2), 2, 1).unwrap();
    assert!((&r1 - &a1).abs_f64() < 1e-3);
    assert!((&r2 - &a2).abs_f64() < 1e-3);
}

fn ratios(reps: &[ConvergenceReport]) -> Vec<(String, f64)> {
    let floor = 2f64.powi(-128);
    reps.iter().filter(|r| r.error[0] > floor).map(|r| (r.check.clone(), r.error[1] / r.error[0])).collect()
}

#[test]
fn halving_t_scales_errors() {
    let cfg = LimitConfig { t_values: vec![rat(1, 1000), rat(1, 2000)], precision: 256 };
    let p = common::free_sample();
    let (z1, z2) = (rat(3, 7), rat(-2, 9));
    let mut first = check_operator_limit(&cfg, &p, &z1, &z2, &[(1, 0), (2, 1)]).unwrap();
    first.extend(check_recurrence_limit(&cfg, &p, 2, 1, &rat(1, 7), &z2).unwrap());
    for (check, r) in ratios(&first) {
        assert!((0.3..=0.8).contains(&r), "{check}: {r}");
    }
    // The polynomial limits are second order, so halving t quarters the error.
    let mut poly = check_poly_limit_def2(&cfg, &p, 2, 1, &z1, &z2).unwrap();
    poly.extend(check_poly_limit_def1(&cfg, &common::biv_sets(4)[1], 2, 1, &z1, &z2).unwrap());
    for (check, r) in ratios(&poly) {
        assert!((0.2..=0.3).contains(&r), "{check}: {r}");
    }
}

#[test]
fn doubling_precision_leaves_errors_unchanged() {
    let p = common::free_sample();
    let (z1, z2) = (rat(3, 7), rat(-2, 9));
    let run = |precision| {
        let cfg = LimitConfig { precision, ..LimitConfig::default() };
        let mut reps = check_operator_limit(&cfg, &p, &z1, &z2, &[(2, 1)]).unwrap();
        reps.extend(check_poly_limit_def2(&cfg, &p, 1, 2, &z1, &z2).unwrap());
        reps.extend(check_recurrence_limit(&cfg, &p, 1, 1, &rat(1, 7), &z2).unwrap());
        reps
    };
    let (lo, hi) = (run(256), run(512));
    for (a, b) in lo.iter().zip(&hi) {
        for (ea, eb) in a.error.iter().zip(&b.error) {
            if *ea > 2f64.powi(-128) {
                assert!((ea - eb).abs() <= 5e-4 * ea, "{}: {ea} vs {eb}", a.check);
            }
        }
    }
}
