//! Monomial coefficients of a bivariate polynomial recovered by exact
//! interpolation.

use bannai_ito::bivariate::{eval_def2, expand_polynomial, BivFreeParams};
use bannai_ito::exact::{format_scalar, int, rat};

fn main() -> bannai_ito::Result<()> {
    let p = BivFreeParams::new(rat(1, 2), rat(1, 3), rat(1, 5), rat(1, 7), rat(1, 11));
    let (n1, n2) = (2, 1);
    let e = expand_polynomial(|a, b| eval_def2(&p, n1, n2, a, b), n1, n2)?;
    println!(
        "B({n1},{n2}): total degree {:?}, degree in z1 {:?}, degree in z2 {:?}",
        e.total_degree(),
        e.degree_z1(),
        e.degree_z2()
    );
    for i in 0..=n1 + n2 {
        for j in 0..=(n1 + n2 - i) {
            let c = e.coefficient(i, j);
            if c != int(0) {
                println!("  z1^{i} z2^{j}: {}", format_scalar(&c));
            }
        }
    }
    Ok(())
}
