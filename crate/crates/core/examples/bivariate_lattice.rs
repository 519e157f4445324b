//! Orthogonality lattice of the truncated bivariate family and the exact
//! Gram check on it.

use bannai_ito::bivariate::{build_lattice, orthogonality_check, BivTruncParams};
use bannai_ito::exact::rat;

fn main() -> bannai_ito::Result<()> {
    let p = BivTruncParams::new(rat(1, 5), rat(1, 7), rat(1, 11), rat(1, 3), 2);
    let lattice = build_lattice(&p)?;
    println!("{}", serde_json::to_string_pretty(&lattice.to_json()).unwrap());

    for n in 2..=4 {
        let rep = orthogonality_check(&BivTruncParams { n, ..p.clone() })?;
        println!(
            "N = {n}: {} pairs, max residual {}, triangle = square: {}",
            rep.cases, rep.max_residual, rep.range_extension_holds
        );
    }
    Ok(())
}
