//! The recurrence evaluator against the two-series closed form.

use bannai_ito::exact::{format_scalar, rat};
use bannai_ito::univariate::{eval_hypergeometric, eval_recurrence, UniParams};

fn main() -> bannai_ito::Result<()> {
    let p = UniParams::new(rat(2, 7), rat(-5, 11), rat(3, 13), rat(7, 17));
    let x = rat(5, 19);
    for n in 0..=8 {
        let a = eval_recurrence(&p, n, &x)?;
        let b = eval_hypergeometric(&p, n, &x)?;
        println!("B_{n}({}) = {}  agree: {}", format_scalar(&x), format_scalar(&a), a == b);
    }
    Ok(())
}
