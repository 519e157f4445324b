//! Empirical convergence of the q -> -1 limits with q = -exp(t).

use bannai_ito::bivariate::{BivFreeParams, BivTruncParams};
use bannai_ito::exact::rat;
use bannai_ito::qlimit::{
    check_operator_limit, check_poly_limit_def1, check_poly_limit_def2, check_recurrence_limit, LimitConfig,
};

fn main() -> bannai_ito::Result<()> {
    let cfg = LimitConfig::default();
    let p = BivFreeParams::new(rat(1, 2), rat(1, 3), rat(1, 5), rat(1, 7), rat(1, 11));
    let tp = BivTruncParams::new(rat(1, 5), rat(1, 7), rat(1, 11), rat(1, 3), 4);
    let (z1, z2) = (rat(3, 7), rat(-2, 9));

    let mut reports = check_poly_limit_def2(&cfg, &p, 2, 1, &z1, &z2)?;
    reports.extend(check_poly_limit_def1(&cfg, &tp, 1, 2, &z1, &z2)?);
    reports.extend(check_operator_limit(&cfg, &p, &z1, &z2, &[(1, 1)])?);
    reports.extend(check_recurrence_limit(&cfg, &p, 1, 1, &rat(1, 7), &z2)?);

    println!("{:<28} {:>10} {:>10} {:>7} {:>5}", "check", "err(1e-3)", "err(1e-4)", "order", "pass");
    for r in &reports {
        let order = r.order.map_or("-".to_string(), |o| format!("{o:.3}"));
        println!("{:<28} {:>10.2e} {:>10.2e} {:>7} {:>5}", r.check, r.error[0], r.error[1], order, r.pass);
    }
    Ok(())
}
