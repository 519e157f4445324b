//! The polynomials are eigenfunctions of a first order Dunkl shift operator.

use bannai_ito::exact::{format_scalar, rat};
use bannai_ito::univariate::{dunkl_apply, dunkl_eigenvalue, eval_recurrence, UniParams};

fn main() -> bannai_ito::Result<()> {
    let p = UniParams::new(rat(1, 3), rat(-2, 5), rat(4, 7), rat(1, 11));
    let points = [rat(2, 13), rat(-9, 17), rat(5, 3)];
    for n in 0..=6 {
        let lambda = dunkl_eigenvalue(&p, n);
        let f = |x: &bannai_ito::Scalar| eval_recurrence(&p, n, x);
        let mut exact = true;
        for x in &points {
            exact &= dunkl_apply(&p, f, x)? == &lambda * f(x)?;
        }
        println!("n = {n}: eigenvalue {:>10}  residual zero: {exact}", format_scalar(&lambda));
    }
    Ok(())
}
