mod common;

use bannai_ito::exact::{int, rat, Scalar};
use bannai_ito::univariate::*;
use bannai_ito::Error;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn assert_orthogonal(p: &UniParams, n: usize, expect: TruncationType) {
    let t = detect_truncation(p, n);
    assert_eq!(t, expect, "{p:?}");
    let data = orthogonality_data(p, &t).unwrap();
    let g = gram_matrix(p, &data).unwrap();
    for i in 0..=n {
        for j in 0..=n {
            let want = if i == j { data.norms[i].clone() } else { Scalar::zero() };
            assert_eq!(g[i][j], want, "{p:?} N={n} ({i},{j})");
        }
        assert!(data.weights[i].is_positive(), "weight {i} of {p:?}");
        assert!(data.norms[i].is_positive(), "norm {i} of {p:?}");
    }
}

#[test]
fn positive_type_i_families() {
    for n in [2, 4, 6] {
        for p in common::positive_type_i(n) {
            assert_orthogonal(&p, n, TruncationType::TypeI { j: 1, l: 1, n });
        }
    }
}

#[test]
fn positive_type_ii_families() {
    for n in [1, 3, 5] {
        for p in common::positive_type_ii(n) {
            assert_orthogonal(&p, n, TruncationType::TypeII { n });
        }
    }
}

#[test]
fn positive_type_iii_families() {
    for n in [1, 3, 5] {
        for p in common::positive_type_iii(n) {
            assert_orthogonal(&p, n, TruncationType::TypeIII { n });
        }
    }
}

#[test]
fn swapped_type_i_is_canonicalized() {
    let base = &common::positive_type_i(4)[0];
    let p = base.swap_r().swap_rho();
    assert_eq!(detect_truncation(&p, 4), TruncationType::TypeI { j: 2, l: 2, n: 4 });
    let data = orthogonality_data(&p, &detect_truncation(&p, 4)).unwrap();
    let g = gram_matrix(&p, &data).unwrap();
    assert_eq!(g[3][3], data.norms[3]);
    assert_eq!(g[1][4], Scalar::zero());
}

#[test]
fn type_iv_is_refused() {
    // g = -(N+1)/2 with N = 3, no type ii) or iii) coincidence
    let (rho1, rho2, r1) = (rat(1, 3), rat(1, 5), rat(1, 7));
    let r2 = &rho1 + &rho2 - &r1 + int(2);
    let p = UniParams::new(rho1, rho2, r1, r2);
    let t = detect_truncation(&p, 3);
    assert_eq!(t, TruncationType::TypeIVInadmissible { n: 3 });
    assert!(matches!(orthogonality_data(&p, &t), Err(Error::Inadmissible(_))));
}

#[test]
fn wrong_declared_type_is_refused() {
    let p = common::positive_type_ii(3)[0].clone();
    assert!(matches!(
        orthogonality_data(&p, &TruncationType::TypeIII { n: 3 }),
        Err(Error::Inadmissible(_))
    ));
}

#[test]
fn low_degrees_by_hand() {
    // B_1 = x - rho1 + A_0, A_0 = (2rho1-2r1+1)(2rho1-2r2+1) / (4(g+1))
    let p = UniParams::new(rat(1, 3), rat(-2, 7), rat(1, 5), rat(3, 11));
    let x = rat(5, 13);
    let a0 = (int(2) * &p.rho1 - int(2) * &p.r1 + int(1)) * (int(2) * &p.rho1 - int(2) * &p.r2 + int(1))
        / (int(4) * (p.g() + int(1)));
    assert_eq!(eval_recurrence(&p, 1, &x).unwrap(), &x - &p.rho1 + a0);
    assert_eq!(eval_recurrence(&p, 0, &x).unwrap(), int(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrence_matches_two_series(p in common::uni_params(), x in common::small_rat(), n in 0usize..9) {
        let hyp = eval_hypergeometric(&p, n, &x);
        prop_assume!(hyp.is_ok());
        let rec = eval_recurrence(&p, n, &x);
        prop_assume!(rec.is_ok());
        prop_assert_eq!(rec.unwrap(), hyp.unwrap());
    }

    #[test]
    fn symmetric_in_rho_and_r(p in common::uni_params(), x in common::small_rat(), n in 0usize..9) {
        let base = eval_recurrence(&p, n, &x);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        prop_assert_eq!(eval_recurrence(&p.swap_rho(), n, &x).unwrap(), base.clone());
        prop_assert_eq!(eval_recurrence(&p.swap_r(), n, &x).unwrap(), base);
    }

    #[test]
    fn dunkl_eigenvalue_equation(p in common::uni_params(), x in common::small_rat(), n in 0usize..9) {
        prop_assume!(!x.is_zero() && x != rat(-1, 2));
        let f = |y: &Scalar| eval_recurrence(&p, n, y);
        let lhs = dunkl_apply(&p, f, &x);
        prop_assume!(lhs.is_ok());
        prop_assert_eq!(lhs.unwrap(), dunkl_eigenvalue(&p, n) * eval_recurrence(&p, n, &x).unwrap());
    }

    #[test]
    fn monic_leading_term(p in common::uni_params(), n in 1usize..8) {
        // n-th finite difference of a monic degree-n polynomial on unit steps is n!
        let vals: Result<Vec<_>, _> = (0..=n).map(|k| eval_recurrence(&p, n, &int(k as i64))).collect();
        prop_assume!(vals.is_ok());
        let mut d = vals.unwrap();
        for level in 0..n {
            d = (0..n - level).map(|k| &d[k + 1] - &d[k]).collect();
        }
        prop_assert_eq!(d[0].clone(), bannai_ito::exact::factorial(n));
    }
}
