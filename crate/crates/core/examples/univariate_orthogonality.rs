//! Grid, weights and norms of a finite Bannai-Ito family, and its exact
//! Gram matrix.

use bannai_ito::exact::{format_scalar, int, rat};
use bannai_ito::univariate::{detect_truncation, gram_matrix, orthogonality_data, UniParams};

fn main() -> bannai_ito::Result<()> {
    let n = 4;
    let p = UniParams::new(rat(3, 7), rat(-7, 2), rat(3, 7) + rat(5, 2), rat(-4, 5));
    let trunc = detect_truncation(&p, n);
    println!("truncation: {trunc:?}");

    let data = orthogonality_data(&p, &trunc)?;
    println!("{:>3} {:>12} {:>24} {:>24}", "k", "x_k", "w_k", "h_k");
    for k in 0..=n {
        println!(
            "{k:>3} {:>12} {:>24} {:>24}",
            format_scalar(&data.grid[k]),
            format_scalar(&data.weights[k]),
            format_scalar(&data.norms[k])
        );
    }

    let g = gram_matrix(&p, &data)?;
    let diagonal = (0..=n).all(|i| (0..=n).all(|j| if i == j { g[i][j] == data.norms[i] } else { g[i][j] == int(0) }));
    println!("Gram matrix diagonal with entries h_n: {diagonal}");
    Ok(())
}
