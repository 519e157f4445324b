//! The two commuting shift-reflection operators and their eigenvalues.

use bannai_ito::bivariate::{eval_def2, BivFreeParams};
use bannai_ito::exact::{format_scalar, rat};
use bannai_ito::multispectral::{apply_l1, apply_l2, c_ij, eigenvalue_l1, eigenvalue_l2};

fn main() -> bannai_ito::Result<()> {
    let p = BivFreeParams::new(rat(1, 2), rat(1, 3), rat(1, 5), rat(1, 7), rat(1, 11));
    let (z1, z2) = (rat(3, 7), rat(-2, 9));

    println!("coefficients of L2 at ({z1}, {z2}):");
    for i in -1..=1 {
        for j in -1..=1 {
            println!("  c({i:>2},{j:>2}) = {}", format_scalar(&c_ij(&p, i, j, &z1, &z2)?));
        }
    }

    for (n1, n2) in [(0, 0), (1, 0), (0, 2), (2, 1), (3, 2)] {
        let f = |a: &bannai_ito::Scalar, b: &bannai_ito::Scalar| eval_def2(&p, n1, n2, a, b);
        let v = f(&z1, &z2)?;
        let (m1, m2) = (eigenvalue_l1(&p, n1), eigenvalue_l2(&p, n1, n2));
        let ok1 = apply_l1(&p, f, &z1, &z2)? == &m1 * &v;
        let ok2 = apply_l2(&p, f, &z1, &z2)? == &m2 * &v;
        println!("({n1},{n2}) mu = {m1}, lambda = {m2}, L1 ok: {ok1}, L2 ok: {ok2}");
    }
    Ok(())
}
