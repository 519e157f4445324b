//! The truncated family is the free family at reduced parameters.

use bannai_ito::bivariate::{eval_def1, eval_def2, reduce_def2_to_def1, BivTruncParams};
use bannai_ito::exact::{format_scalar, rat};

fn main() -> bannai_ito::Result<()> {
    let p = BivTruncParams::new(rat(2, 9), rat(3, 13), rat(-1, 7), rat(2, 5), 4);
    let q = reduce_def2_to_def1(&p);
    println!(
        "alpha = {}, beta = {}, gamma = {}, delta = {}, epsilon = {}",
        q.alpha, q.beta, q.gamma, q.delta, q.epsilon
    );
    let (z1, z2) = (rat(3, 11), rat(-5, 7));
    for n1 in 0..=p.n {
        for n2 in 0..=(p.n - n1) {
            let a = eval_def1(&p, n1, n2, &z1, &z2)?;
            let b = eval_def2(&q, n1, n2, &z1, &z2)?;
            println!("({n1},{n2}) {:>40}  equal: {}", format_scalar(&a), a == b);
        }
    }
    Ok(())
}
