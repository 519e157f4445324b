//! Recurrence coefficients in the degree indices and the exact residuals of
//! the three- and nine-term relations.

use bannai_ito::bivariate::BivFreeParams;
use bannai_ito::exact::{format_scalar, rat};
use bannai_ito::multispectral::{nine_term_coeffs, residual_sweep, ResidualOp, NINE_TERM_OFFSETS};

fn main() -> bannai_ito::Result<()> {
    let p = BivFreeParams::new(rat(2, 3), rat(-1, 5), rat(3, 7), rat(-2, 11), rat(1, 13));
    let theta = nine_term_coeffs(&p, 2, 1)?;
    for (k, (d1, d2)) in NINE_TERM_OFFSETS.iter().enumerate() {
        println!("theta{} -> B({}, {}): {}", k + 1, 2 + d1, 1 + d2, format_scalar(theta.get(k + 1)));
    }

    let points = [(rat(1, 7), rat(-2, 9)), (rat(5, 3), rat(4, 11)), (rat(-8, 13), rat(1, 17))];
    for op in [ResidualOp::ThreeTerm, ResidualOp::NineTerm] {
        let rep = residual_sweep(op, &p, 5, &points)?;
        println!("{}: {} cases, max residual {}", rep.op, rep.cases, rep.max_residual);
    }
    Ok(())
}
