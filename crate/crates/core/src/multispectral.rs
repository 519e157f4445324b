//! Difference operators diagonalized by the free bivariate family, and the
//! 3-term and 9-term recurrences in the degree indices.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bivariate::{def2_params, eval_def2, BivFreeParams};
use crate::error::{Error, Result};
use crate::exact::{div, half, int, quarter, rat, sign, Scalar};
use crate::univariate::recurrence_coeffs;

/// `B_{n1,n2}` of the free family, zero when either index is negative.
pub fn eval_def2_ext(p: &BivFreeParams, n1: i64, n2: i64, z1: &Scalar, z2: &Scalar) -> Result<Scalar> {
    if n1 < 0 || n2 < 0 {
        return Ok(Scalar::zero());
    }
    eval_def2(p, n1 as usize, n2 as usize, z1, z2)
}

/// One term of the second operator: `c_{i,j}(z1,z2) f(arg_i(z1), arg_j(z2))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftReflectTerm {
    pub i: i8,
    pub j: i8,
}

/// `z` for index 0, otherwise the reflection `-z + i/2`.
pub fn arg_map(i: i8, z: &Scalar) -> Scalar {
    if i == 0 {
        z.clone()
    } else {
        -z + rat(i as i64, 2)
    }
}

impl ShiftReflectTerm {
    pub fn all() -> [ShiftReflectTerm; 9] {
        let mut out = [ShiftReflectTerm { i: 0, j: 0 }; 9];
        let mut k = 0;
        for i in -1..=1 {
            for j in -1..=1 {
                out[k] = ShiftReflectTerm { i, j };
                k += 1;
            }
        }
        out
    }

    pub fn args(&self, z1: &Scalar, z2: &Scalar) -> (Scalar, Scalar) {
        (arg_map(self.i, z1), arg_map(self.j, z2))
    }

    pub fn coefficient(&self, p: &BivFreeParams, z1: &Scalar, z2: &Scalar) -> Result<Scalar> {
        c_ij(p, self.i, self.j, z1, z2)
    }
}

fn check_coordinate(z: &Scalar, name: &str) -> Result<()> {
    let q = quarter();
    if z == &q || z == &-&q {
        return Err(Error::Pole(format!("{name} = {z}")));
    }
    Ok(())
}

/// Coefficient `c_{i,j}` of the second operator.
pub fn c_ij(p: &BivFreeParams, i: i8, j: i8, z1: &Scalar, z2: &Scalar) -> Result<Scalar> {
    check_coordinate(z1, "z1")?;
    check_coordinate(z2, "z2")?;
    let (al, be, ga, de, ep) = (&p.alpha, &p.beta, &p.gamma, &p.delta, &p.epsilon);
    let q = quarter();
    let h = half();
    let four = int(4);
    let x = al * (z1 - &q) + be * (z1 + &q);
    let y = de * (z2 + &q) - ga * (z2 - &q);
    let v = match (i, j) {
        (-1, -1) => {
            (z1 - al + &q) * (z2 + ga + &q) * (ep + z1 + z2 + &h)
                / (&four * (z1 + &q) * (z2 + &q))
        }
        (-1, 0) => {
            (z1 - al + &q) * (ep + z1 - z2) * &y
                / (&four * (z1 + &q) * (z2 - &q) * (z2 + &q))
        }
        (-1, 1) => {
            (z1 - al + &q) * (z2 - de - &q) * (ep + z1 - z2) / (&four * (z1 + &q) * (z2 - &q))
        }
        (0, -1) => {
            (z2 + ga + &q) * (ep - z1 + z2) * &x
                / (&four * (z1 - &q) * (z1 + &q) * (z2 + &q))
        }
        (0, 0) => {
            al * (ga - de + &h) + be * (ga - de - &h) - &h * (ga + de + &h) - ep
                + (ep + &four * z1 * z2 - &q) * &x * &y
                    / (&four * (z1 - &q) * (z1 + &q) * (z2 - &q) * (z2 + &q))
        }
        (0, 1) => {
            (z2 - de - &q) * (ep + z1 - z2) * &x
                / (&four * (z1 - &q) * (z1 + &q) * (z2 - &q))
        }
        (1, -1) => {
            (z1 - be - &q) * (z2 + ga + &q) * (ep - z1 + z2) / (&four * (z1 - &q) * (z2 + &q))
        }
        (1, 0) => {
            (z1 - be - &q) * (ep - z1 + z2) * &y
                / (&four * (z1 - &q) * (z2 - &q) * (z2 + &q))
        }
        (1, 1) => {
            (z1 - be - &q) * (z2 - de - &q) * (ep - z1 - z2 + &h)
                / (&four * (z1 - &q) * (z2 - &q))
        }
        _ => panic!("c_ij index ({i},{j}) outside -1..=1"),
    };
    Ok(v)
}

/// `L1 f = k1 (f(1/2 - z1, z2) - f) + k2 (f(-1/2 - z1, z2) - f)`.
pub fn apply_l1<F>(p: &BivFreeParams, f: F, z1: &Scalar, z2: &Scalar) -> Result<Scalar>
where
    F: Fn(&Scalar, &Scalar) -> Result<Scalar>,
{
    let q = quarter();
    let (al, be, ep) = (&p.alpha, &p.beta, &p.epsilon);
    let k1 = div(
        &((ep - z1 + z2) * (z1 - be - &q)),
        &(int(2) * (z1 - &q)),
        "z1 - 1/4",
    )?;
    let k2 = div(
        &((ep + z1 - z2) * (z1 - al + &q)),
        &(int(2) * (z1 + &q)),
        "z1 + 1/4",
    )?;
    let f0 = f(z1, z2)?;
    let h = half();
    Ok(k1 * (f(&(&h - z1), z2)? - &f0) + k2 * (f(&(-&h - z1), z2)? - &f0))
}

pub fn apply_l2<F>(p: &BivFreeParams, f: F, z1: &Scalar, z2: &Scalar) -> Result<Scalar>
where
    F: Fn(&Scalar, &Scalar) -> Result<Scalar>,
{
    let mut acc = Scalar::zero();
    for term in ShiftReflectTerm::all() {
        let c = term.coefficient(p, z1, z2)?;
        let (a, b) = term.args(z1, z2);
        acc += c * f(&a, &b)?;
    }
    Ok(acc)
}

pub fn eigenvalue_l1(p: &BivFreeParams, n1: usize) -> Scalar {
    if n1 % 2 == 0 {
        rat(n1 as i64, 2)
    } else {
        -rat(n1 as i64, 2) + &p.alpha - &p.beta - int(2) * &p.epsilon
    }
}

pub fn eigenvalue_l2(p: &BivFreeParams, n1: usize, n2: usize) -> Scalar {
    let n = (n1 + n2) as i64;
    if n % 2 == 0 {
        rat(n, 2)
    } else {
        &p.alpha - &p.beta - &p.gamma - &p.delta - int(2) * &p.epsilon - rat(n + 1, 2)
    }
}

/// Residual of the recurrence in `n2` at fixed `n1`.
pub fn three_term_residual(
    p: &BivFreeParams,
    n1: usize,
    n2: usize,
    z1: &Scalar,
    z2: &Scalar,
) -> Result<Scalar> {
    let (_, second) = def2_params(p, n1, z2);
    let (a, c) = recurrence_coeffs(&second, n2)?;
    let u = if n2 > 0 { recurrence_coeffs(&second, n2 - 1)?.0 * &c } else { Scalar::zero() };
    let (m, k) = (n1 as i64, n2 as i64);
    let b = eval_def2(p, n1, n2, z1, z2)?;
    let x = sign(m) * z2 - quarter();
    let rho1 = &p.beta + &p.epsilon + rat(m, 2);
    let rhs = eval_def2_ext(p, m, k + 1, z1, z2)?
        + (rho1 - a - c) * &b
        + u * eval_def2_ext(p, m, k - 1, z1, z2)?;
    Ok(x * b - rhs)
}

/// Index offsets of the nine neighbours, in `theta` order.
pub const NINE_TERM_OFFSETS: [(i64, i64); 9] =
    [(1, 0), (1, -1), (1, -2), (0, 1), (0, 0), (0, -1), (-1, 2), (-1, 1), (-1, 0)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NineTermCoeffs {
    #[serde(with = "crate::exact::serde_scalars")]
    pub theta: Vec<Scalar>,
}

impl NineTermCoeffs {
    /// `theta^(k)` for `k` in `1..=9`.
    pub fn get(&self, k: usize) -> &Scalar {
        &self.theta[k - 1]
    }
}

fn recip(x: &Scalar, name: &str) -> Result<Scalar> {
    if x.is_zero() {
        return Err(Error::Pole(name.to_string()));
    }
    Ok(x.recip())
}

pub fn nine_term_coeffs(p: &BivFreeParams, n1: usize, n2: usize) -> Result<NineTermCoeffs> {
    let (al, be, ga, de, ep) = (&p.alpha, &p.beta, &p.gamma, &p.delta, &p.epsilon);
    let one = int(1);
    let two = int(2);
    let h = half();
    let (a, b) = (n1 as i64, n2 as i64);
    let (m1, m2) = (int(a), int(b));
    let nn = int(a + b);

    let s = -al + be + ga + de + &two * ep + &nn;
    let w = -&two * al + &two * be + int(4) * ep + &two * &m1;
    let v = -al + be + &two * ep + &m1;
    let x = -&two * al + &two * be + int(4) * ep;
    let ab = &two * al + &two * be;
    let ab2 = -&two * al + &two * be;
    let amb = &two * al - &two * be;
    let ga_ = -&two * al + &two * ga + &two * ep + &nn;
    let da_ = -&two * al + &two * de + &two * ep + &nn;
    let bg = &two * be + &two * ga + &two * ep + &nn;
    let bd = &two * be + &two * de + &two * ep + &nn;
    let gd = &two * ga + &two * de + &m2;
    let k = &s - rat(b, 2);
    let kp = &v + rat(b, 2);
    let e2 = &two * ep + rat(a - 1, 2);

    let is = recip(&s, "-alpha+beta+gamma+delta+2epsilon+n1+n2")?;
    let is1 = recip(&(&s + &one), "-alpha+beta+gamma+delta+2epsilon+n1+n2+1")?;
    let iwm = recip(&(&w - &one), "-2alpha+2beta+4epsilon+2n1-1")?;
    let iwp = recip(&(&w + &one), "-2alpha+2beta+4epsilon+2n1+1")?;
    let ivm = recip(&(&v - &h), "-alpha+beta+2epsilon+n1-1/2")?;
    let ivp = recip(&(&v + &h), "-alpha+beta+2epsilon+n1+1/2")?;
    let is_sq = &is * &is;
    let iwm_sq = &iwm * &iwm;
    let q16 = rat(1, 16);
    let ev = (a % 2, b % 2);

    let t1 = sign(b);
    let t2 = match ev {
        (0, 0) => &m2 / int(4) * ((&bg + &one) * &is1 - &ga_ * &is),
        (0, _) => quarter() * &gd * ((&ga_ + &one) * &is1 - &bg * &is),
        (_, 0) => &m2 / int(4) * (&bg * &is - (&ga_ + &one) * &is1),
        _ => quarter() * &gd * (&ga_ * &is - (&bg + &one) * &is1),
    };
    let t3 = match ev {
        (0, 0) => -&m2 * (&gd - &one) * &ga_ * &bd * &q16 * &is_sq,
        (0, _) => (&m2 - &one) * &gd * &da_ * &bg * &q16 * &is_sq,
        (_, 0) => -&m2 * (&gd - &one) * &da_ * &bg * &q16 * &is_sq,
        _ => (&m2 - &one) * &gd * &ga_ * &bd * &q16 * &is_sq,
    };
    let t4 = if a % 2 == 0 {
        &one - (&two * ep + rat(a, 2)) * &ivp - rat(a, 2) * &ivm
    } else {
        &one - &e2 * &ivm - rat(a + 1, 2) * &ivp
    };
    let pre = if a % 2 == 0 {
        -quarter() * (&m1 * &iwm + (int(4) * ep + &m1) * &iwp - &one)
    } else {
        -quarter() * (int(a + 1) * &iwp + (int(4) * ep + &m1 - &one) * &iwm - &one)
    };
    let lo = &w - &m2 * &is + &one;
    let hi = &w + (&m2 + &one) * &is1 - &one;
    let t5 = match ev {
        (0, 0) => &pre * (&ab - (&bg + &one) * &is1 + &one) * &lo,
        (0, _) => &pre * (&ab + &bg * &is - &one) * &hi,
        (_, 0) => &pre * (&ab + (&ga_ + &one) * &is1 - &one) * &lo,
        _ => &pre * (&ab - &ga_ * &is + &one) * &hi,
    };
    let f6 = if a % 2 == 0 {
        &amb + &two * &m1 * &iwm - &one
    } else {
        &amb + (int(8) * ep + &two * &m1 - &two) * &iwm - &one
    };
    let quad_gb = &ga_ * &bd / int(4);
    let quad_db = &da_ * &bg / int(4);
    let t6 = match ev {
        (0, 0) => &m2 * &f6 * &quad_gb * &k * &iwp * &is_sq / &two,
        (0, _) => &gd / &two * &f6 * &kp * &quad_db * &iwp * &is_sq,
        (_, 0) => &m2 * &f6 * &quad_db * &k * &iwp * &is_sq / &two,
        _ => &gd / &two * &f6 * &kp * &quad_gb * &iwp * &is_sq,
    };
    let t7 = if a % 2 == 0 {
        sign(b) * &m1 * (&x + &m1 - &one) * &iwm_sq
    } else {
        sign(b) * (int(4) * ep + &m1 - &one) * (&ab2 + &m1) * &iwm_sq
    };
    let t8 = match ev {
        (0, 0) => {
            -(rat(a, 2) * (&x + &m1 - &one) * &k * (&ab - &ga_ * &is + &one)) * &iwm_sq * &is1
        }
        (0, _) => {
            rat(a, 2) * (&x + &m1 - &one) * &kp * (&ab + (&ga_ + &one) * &is1 - &one)
                * &iwm_sq
                * &is
        }
        (_, 0) => {
            &e2 * (&amb - &m1) * &k * (&ab + (&ga_ + &one) * &is1 - &one) * &iwm_sq * &is
        }
        _ => -(&e2 * (&amb - &m1) * &kp * (&ab - &ga_ * &is + &one)) * &iwm_sq * &is1,
    };
    let sg = sign(b + 1);
    let tail = &iwm_sq * &is_sq * &sg;
    let t9 = match ev {
        (0, 0) => {
            rat(a, 2) * (&x + &m1 - &one) * (&x + int(2 * a + b - 1)) * &quad_gb * &k * &tail
        }
        (0, _) => {
            rat(a, 2) * (&x + &m1 - &one) * (&x + int(2 * a + b)) * &quad_db * (&k - &h) * &tail
        }
        (_, 0) => &e2 * (&ab2 + &m1) * (&x + int(2 * a + b - 1)) * &quad_db * &k * &tail,
        _ => &e2 * (&ab2 + &m1) * (&x + int(2 * a + b)) * &quad_gb * (&k - &h) * &tail,
    };
    Ok(NineTermCoeffs { theta: vec![t1, t2, t3, t4, t5, t6, t7, t8, t9] })
}

/// Residual of `(z1 - alpha^2 + beta^2) B_{n1,n2} = sum_k theta^(k) B_{neighbour k}`.
pub fn nine_term_residual(
    p: &BivFreeParams,
    n1: usize,
    n2: usize,
    z1: &Scalar,
    z2: &Scalar,
) -> Result<Scalar> {
    let th = nine_term_coeffs(p, n1, n2)?;
    let (a, b) = (n1 as i64, n2 as i64);
    let mut rhs = Scalar::zero();
    for (t, (da, db)) in th.theta.iter().zip(NINE_TERM_OFFSETS) {
        if t.is_zero() {
            continue;
        }
        rhs += t * eval_def2_ext(p, a + da, b + db, z1, z2)?;
    }
    let lhs = (z1 - &p.alpha * &p.alpha + &p.beta * &p.beta) * eval_def2(p, n1, n2, z1, z2)?;
    Ok(lhs - rhs)
}

/// Which identity a residual sweep checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidualOp {
    L1,
    L2,
    ThreeTerm,
    NineTerm,
}

impl ResidualOp {
    pub fn name(&self) -> &'static str {
        match self {
            ResidualOp::L1 => "L1",
            ResidualOp::L2 => "L2",
            ResidualOp::ThreeTerm => "threerec",
            ResidualOp::NineTerm => "ninerec",
        }
    }
}

/// Exact residual of one identity for one degree pair at one point.
pub fn residual(
    op: ResidualOp,
    p: &BivFreeParams,
    n1: usize,
    n2: usize,
    z1: &Scalar,
    z2: &Scalar,
) -> Result<Scalar> {
    let f = |a: &Scalar, b: &Scalar| eval_def2(p, n1, n2, a, b);
    match op {
        ResidualOp::L1 => Ok(apply_l1(p, f, z1, z2)? - eigenvalue_l1(p, n1) * f(z1, z2)?),
        ResidualOp::L2 => Ok(apply_l2(p, f, z1, z2)? - eigenvalue_l2(p, n1, n2) * f(z1, z2)?),
        ResidualOp::ThreeTerm => three_term_residual(p, n1, n2, z1, z2),
        ResidualOp::NineTerm => nine_term_residual(p, n1, n2, z1, z2),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub op: &'static str,
    pub cases: usize,
    #[serde(serialize_with = "crate::exact::serde_scalar::serialize")]
    pub max_residual: Scalar,
    /// `(n1, n2)` and point of the largest residual, when nonzero.
    pub worst: Option<(usize, usize, String, String)>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.max_residual.is_zero()
    }
}

/// Residuals for every `n1 + n2 <= max_deg` at every given point.
pub fn residual_sweep(
    op: ResidualOp,
    p: &BivFreeParams,
    max_deg: usize,
    points: &[(Scalar, Scalar)],
) -> Result<ResidualReport> {
    let mut rep = ResidualReport { op: op.name(), cases: 0, max_residual: Scalar::zero(), worst: None };
    for n1 in 0..=max_deg {
        for n2 in 0..=(max_deg - n1) {
            for (z1, z2) in points {
                let r = residual(op, p, n1, n2, z1, z2)?.abs();
                rep.cases += 1;
                if r > rep.max_residual {
                    rep.max_residual = r;
                    rep.worst = Some((n1, n2, z1.to_string(), z2.to_string()));
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> BivFreeParams {
        BivFreeParams::new(rat(1, 2), rat(1, 3), rat(1, 5), rat(1, 7), rat(1, 11))
    }

    #[test]
    fn argument_maps() {
        assert_eq!(arg_map(0, &rat(2, 3)), rat(2, 3));
        assert_eq!(arg_map(1, &rat(2, 3)), rat(-1, 6));
        assert_eq!(arg_map(-1, &rat(2, 3)), rat(-7, 6));
    }

    #[test]
    fn eigenvalue_examples() {
        let p = q();
        assert_eq!(eigenvalue_l1(&p, 4), int(2));
        assert_eq!(eigenvalue_l2(&p, 2, 2), int(2));
        assert_eq!(eigenvalue_l1(&p, 1), rat(-1, 2) + &p.alpha - &p.beta - int(2) * &p.epsilon);
    }

    #[test]
    fn theta_edges() {
        let p = q();
        for n1 in 0..4 {
            for n2 in 0..4 {
                let t = nine_term_coeffs(&p, n1, n2).unwrap();
                assert_eq!(t.get(1), &sign(n2 as i64));
            }
        }
        assert!(nine_term_coeffs(&p, 2, 0).unwrap().get(3).is_zero());
        assert!(nine_term_coeffs(&p, 0, 3).unwrap().get(7).is_zero());
    }

    #[test]
    fn poles_are_named() {
        let p = q();
        assert!(matches!(apply_l1(&p, |_, _| Ok(int(1)), &quarter(), &int(1)), Err(Error::Pole(_))));
        assert!(matches!(c_ij(&p, 0, 0, &int(1), &-quarter()), Err(Error::Pole(_))));
        // S = 0 at (0,0): gamma chosen to cancel
        let bad = BivFreeParams::new(int(1), int(0), int(1), int(0), int(0));
        match nine_term_coeffs(&bad, 0, 0) {
            Err(Error::Pole(msg)) => assert!(msg.contains("n1+n2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn low_degree_residuals() {
        let p = q();
        let (z1, z2) = (rat(3, 7), rat(-2, 9));
        for op in [ResidualOp::L1, ResidualOp::L2, ResidualOp::ThreeTerm, ResidualOp::NineTerm] {
            let rep = residual_sweep(op, &p, 3, &[(z1.clone(), z2.clone())]).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }
}
