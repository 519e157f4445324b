#![allow(dead_code)]

use bannai_ito::bivariate::{BivFreeParams, BivTruncParams};
use bannai_ito::exact::{rat, Scalar};
use bannai_ito::univariate::UniParams;
use proptest::prelude::*;

/// Parameter triples known to give a positive weight and positive norms.
pub fn positive_type_i(n: usize) -> Vec<UniParams> {
    [(rat(3, 7), rat(-7, 2), rat(-4, 5)), (rat(-7, 2), rat(1, 5), rat(4, 1)), (rat(5, 7), rat(-4, 1), rat(1, 5))]
        .into_iter()
        .map(|(a, b, c)| UniParams::new(a.clone(), b, a + rat(n as i64 + 1, 2), c))
        .collect()
}

pub fn positive_type_ii(n: usize) -> Vec<UniParams> {
    [(rat(1, 3), rat(-2, 5), rat(4, 1)), (rat(3, 7), rat(4, 5), rat(3, 1)), (rat(6, 7), rat(1, 5), rat(7, 2))]
        .into_iter()
        .map(|(a, b, c)| UniParams::new(a.clone(), -rat(n as i64 + 1, 2) - a, b, c))
        .collect()
}

pub fn positive_type_iii(n: usize) -> Vec<UniParams> {
    [(rat(-4, 5), rat(-4, 1), rat(-1, 1)), (rat(4, 1), rat(0, 1), rat(-3, 7)), (rat(-2, 3), rat(7, 2), rat(-3, 7))]
        .into_iter()
        .map(|(a, b, c)| UniParams::new(a, b, rat(n as i64 + 1, 2) - c.clone(), c))
        .collect()
}

pub fn biv_sets(n: usize) -> Vec<BivTruncParams> {
    vec![
        BivTruncParams::new(rat(1, 5), rat(1, 7), rat(1, 11), rat(1, 3), n),
        BivTruncParams::new(rat(2, 9), rat(3, 13), rat(-1, 7), rat(2, 5), n),
        BivTruncParams::new(rat(3, 17), rat(-2, 19), rat(5, 23), rat(-1, 3), n),
    ]
}

pub fn free_sample() -> BivFreeParams {
    BivFreeParams::new(rat(1, 2), rat(1, 3), rat(1, 5), rat(1, 7), rat(1, 11))
}

/// Small rationals with denominators coprime to the parity structure, so
/// random parameters rarely land on a pole.
pub fn small_rat() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, prop::sample::select(vec![3i64, 7, 11, 13, 17, 19])).prop_map(|(n, d)| rat(n, d))
}

pub fn uni_params() -> impl Strategy<Value = UniParams> {
    (small_rat(), small_rat(), small_rat(), small_rat()).prop_map(|(a, b, c, d)| UniParams::new(a, b, c, d))
}

pub fn free_sets() -> Vec<BivFreeParams> {
    vec![
        free_sample(),
        BivFreeParams::new(rat(2, 3), rat(-1, 5), rat(3, 7), rat(-2, 11), rat(1, 13)),
        BivFreeParams::new(rat(-3, 7), rat(5, 9), rat(-1, 13), rat(2, 3), rat(-1, 5)),
    ]
}

/// `count x count` tensor grid of points clear of the `+-1/4` poles.
pub fn tensor_points(count: usize) -> Vec<(Scalar, Scalar)> {
    let xs: Vec<Scalar> = (0..count).map(|k| rat(2 * k as i64 - count as i64, 3) + rat(1, 7)).collect();
    let ys: Vec<Scalar> = (0..count).map(|k| rat(count as i64 - 3 * k as i64, 5) - rat(1, 9)).collect();
    xs.iter().flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone()))).collect()
}
