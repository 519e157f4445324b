mod common;

use bannai_ito::bivariate::{def2_params, eval_def2};
use bannai_ito::exact::{int, quarter, rat, Scalar};
use bannai_ito::multispectral::*;
use bannai_ito::univariate::{dunkl_apply, eval_recurrence};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn eigen_equations_on_tensor_grids() {
    for p in common::free_sets() {
        for n1 in 0..=5usize {
            for n2 in 0..=(5 - n1) {
                let f = |a: &Scalar, b: &Scalar| eval_def2(&p, n1, n2, a, b);
                for (z1, z2) in common::tensor_points(n1 + n2 + 2) {
                    let b = f(&z1, &z2).unwrap();
                    assert_eq!(apply_l1(&p, f, &z1, &z2).unwrap(), eigenvalue_l1(&p, n1) * &b, "L1 ({n1},{n2})");
                    assert_eq!(apply_l2(&p, f, &z1, &z2).unwrap(), eigenvalue_l2(&p, n1, n2) * &b, "L2 ({n1},{n2})");
                }
            }
        }
    }
}

#[test]
fn recurrences_vanish() {
    let pts = common::tensor_points(3);
    for p in common::free_sets() {
        for op in [ResidualOp::ThreeTerm, ResidualOp::NineTerm] {
            let rep = residual_sweep(op, &p, 5, &pts[..5]).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.cases, 21 * 5);
        }
    }
}

#[test]
fn odd_sum_eigenvalue() {
    let p = common::free_sample();
    let expect = &p.alpha - &p.beta - &p.gamma - &p.delta - int(2) * &p.epsilon - int(1);
    assert_eq!(eigenvalue_l2(&p, 0, 1), expect);
    let (z1, z2) = (rat(5, 3), rat(-4, 7));
    let f = |a: &Scalar, b: &Scalar| eval_def2(&p, 0, 1, a, b);
    assert_eq!(apply_l2(&p, f, &z1, &z2).unwrap(), expect * f(&z1, &z2).unwrap());
    let f = |a: &Scalar, b: &Scalar| eval_def2(&p, 1, 1, a, b);
    assert_eq!(apply_l2(&p, f, &z1, &z2).unwrap(), f(&z1, &z2).unwrap());
}

#[test]
fn constant_is_annihilated() {
    let p = common::free_sets().remove(1);
    let one = |_: &Scalar, _: &Scalar| Ok(int(1));
    let (z1, z2) = (rat(2, 3), rat(1, 5));
    assert!(apply_l1(&p, one, &z1, &z2).unwrap().is_zero());
    assert!(apply_l2(&p, one, &z1, &z2).unwrap().is_zero());
}

#[test]
fn coefficients_sum_to_zero() {
    // L2 kills constants, so the nine c_ij add up to zero pointwise
    for p in common::free_sets() {
        for (z1, z2) in common::tensor_points(3) {
            let total: Scalar = ShiftReflectTerm::all()
                .iter()
                .map(|t| t.coefficient(&p, &z1, &z2).unwrap())
                .sum();
            assert!(total.is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// On functions of z1 alone, L1 is the univariate Dunkl operator of the
    /// first factor, evaluated at x = z1 - 1/4.
    #[test]
    fn first_operator_restricts_to_dunkl(
        z1 in common::small_rat(), z2 in common::small_rat(), n in 0usize..7, set in 0usize..3,
    ) {
        let p = common::free_sets().swap_remove(set);
        prop_assume!(z1 != quarter() && z1 != -quarter());
        let (first, _) = def2_params(&p, 0, &z2);
        let g = |x: &Scalar| eval_recurrence(&first, n, x);
        let f = |a: &Scalar, _: &Scalar| g(&(a - quarter()));
        let lhs = apply_l1(&p, f, &z1, &z2);
        prop_assume!(lhs.is_ok());
        prop_assert_eq!(lhs.unwrap(), dunkl_apply(&first, g, &(&z1 - quarter())).unwrap());
    }

    #[test]
    fn random_parameter_recurrences(
        al in common::small_rat(), be in common::small_rat(), ga in common::small_rat(),
        de in common::small_rat(), ep in common::small_rat(),
        z1 in common::small_rat(), z2 in common::small_rat(), split in 0usize..21,
    ) {
        let p = bannai_ito::bivariate::BivFreeParams::new(al, be, ga, de, ep);
        let (n1, n2) = (0..=5usize).flat_map(|a| (0..=5 - a).map(move |b| (a, b))).nth(split).unwrap();
        for op in [ResidualOp::ThreeTerm, ResidualOp::NineTerm, ResidualOp::L1, ResidualOp::L2] {
            match residual(op, &p, n1, n2, &z1, &z2) {
                Ok(r) => prop_assert!(r.is_zero(), "{:?} ({},{})", op, n1, n2),
                Err(bannai_ito::Error::Pole(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
