//! Bivariate Bannai-Ito polynomials as Tratnik-type products of two
//! univariate families, in the truncated (`p1, p2, p3, c, N`) and free
//! (`alpha, beta, gamma, delta, epsilon`) parametrizations, with the finite
//! orthogonality lattice of the truncated family.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    binomial, div, even_indicator, factorial, format_scalar, half, int, pochhammer,
    pochhammer_signed, quarter, rat, sign, Scalar,
};
use crate::univariate::{eval_recurrence, eval_sequence, UniParams};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BivTruncParams {
    pub p1: Scalar,
    pub p2: Scalar,
    pub p3: Scalar,
    pub c: Scalar,
    pub n: usize,
}

impl BivTruncParams {
    pub fn new(p1: Scalar, p2: Scalar, p3: Scalar, c: Scalar, n: usize) -> Self {
        BivTruncParams { p1, p2, p3, c, n }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BivFreeParams {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
    pub epsilon: Scalar,
}

impl BivFreeParams {
    pub fn new(alpha: Scalar, beta: Scalar, gamma: Scalar, delta: Scalar, epsilon: Scalar) -> Self {
        BivFreeParams { alpha, beta, gamma, delta, epsilon }
    }
}

/// Parameters of the two univariate factors of the truncated family.
/// The first depends on `z2`, the second on `n1`.
pub fn def1_params(p: &BivTruncParams, n1: usize, z2: &Scalar) -> (UniParams, UniParams) {
    let h = half();
    let q = quarter();
    let first = UniParams::new(
        &p.c - &p.p1 + &h,
        z2 + &p.p2 - &q,
        &h - &p.p1,
        z2 - &p.p2 + &q,
    );
    let sg = sign((n1 + p.n) as i64);
    let shift = &sg * (rat(p.n as i64, 2) + &p.p1 + &p.p2 + &p.p3);
    let second = UniParams::new(
        rat(n1 as i64 + 1, 2) + &p.c + &p.p2 - &p.p1,
        &p.p3 - &shift,
        rat(1 - n1 as i64, 2) - &p.p1 - &p.p2,
        -&p.p3 - &shift,
    );
    (first, second)
}

pub fn eval_def1(
    p: &BivTruncParams,
    n1: usize,
    n2: usize,
    z1: &Scalar,
    z2: &Scalar,
) -> Result<Scalar> {
    if n1 + n2 > p.n {
        return Err(Error::Degree { n1, n2, max: p.n });
    }
    let (first, second) = def1_params(p, n1, z2);
    let q = quarter();
    let b1 = eval_recurrence(&first, n1, &(z1 - &q))?;
    let b2 = eval_recurrence(&second, n2, &(sign(n1 as i64) * z2 - &q))?;
    Ok(b1 * b2)
}

/// Parameters of the two univariate factors of the free family.
pub fn def2_params(p: &BivFreeParams, n1: usize, z2: &Scalar) -> (UniParams, UniParams) {
    let q = quarter();
    let first = UniParams::new(
        p.beta.clone(),
        z2 + &p.epsilon - &q,
        p.alpha.clone(),
        z2 - &p.epsilon + &q,
    );
    let pi = even_indicator(n1 as i64);
    let one = Scalar::one();
    let half_n1 = rat(n1 as i64, 2);
    let second = UniParams::new(
        &p.beta + &p.epsilon + &half_n1,
        (&one - &pi) * &p.gamma + &pi * &p.delta,
        &p.alpha - &p.epsilon - &half_n1,
        (&pi - &one) * &p.delta - &pi * &p.gamma,
    );
    (first, second)
}

pub fn eval_def2(
    p: &BivFreeParams,
    n1: usize,
    n2: usize,
    z1: &Scalar,
    z2: &Scalar,
) -> Result<Scalar> {
    let (first, second) = def2_params(p, n1, z2);
    let q = quarter();
    let b1 = eval_recurrence(&first, n1, &(z1 - &q))?;
    let b2 = eval_recurrence(&second, n2, &(sign(n1 as i64) * z2 - &q))?;
    Ok(b1 * b2)
}

/// Free parameters reproducing the truncated family.
pub fn reduce_def2_to_def1(p: &BivTruncParams) -> BivFreeParams {
    let h = half();
    let n_half = rat(p.n as i64, 2);
    let low = -&n_half - &p.p1 - &p.p2;
    let high = &n_half + &p.p1 + &p.p2 + int(2) * &p.p3;
    let (gamma, delta) = if p.n % 2 == 0 { (high, low) } else { (low, high) };
    BivFreeParams::new(&h - &p.p1, &h + &p.c - &p.p1, gamma, delta, p.p2.clone())
}

pub fn z1_grid(p: &BivTruncParams, r: usize, s: usize) -> Scalar {
    let n = p.n as i64;
    half() * sign(r as i64 + s as i64 + n) * (int(r as i64 + s as i64 - n) - int(2) * &p.p1 + half())
}

pub fn z2_grid(p: &BivTruncParams, s: usize) -> Scalar {
    let n = p.n as i64;
    half()
        * sign(s as i64 + n)
        * (int(s as i64 - n) - int(2) * &p.p1 - int(2) * &p.p2 + half())
}

/// Inner weight `w1_{r,m}`; the lattice uses `m = N - s`.
pub fn weight_inner(p: &BivTruncParams, r: usize, m: usize) -> Result<Scalar> {
    let st = int((m / 2) as i64);
    let rr = r / 2;
    let (p1, p2, c) = (&p.p1, &p.p2, &p.c);
    let two = int(2);
    let h = half();
    let three_h = rat(3, 2);
    let one = int(1);
    let (num, den) = match (m % 2, r % 2) {
        (0, 0) => (
            pochhammer(&(&two * p2), rr)
                * pochhammer(&-&st, rr)
                * pochhammer(&(&one - &two * p1 - &two * &st), rr)
                * pochhammer(&(&three_h + c - &two * p1 - &st), rr),
            factorial(rr)
                * pochhammer(&(&h - c - &st), rr)
                * pochhammer(&(&one - &two * p1 - &st), rr)
                * pochhammer(&(&one - &two * p1 - &two * p2 - &two * &st), rr),
        ),
        (0, _) => (
            -pochhammer(&(&two * p2), rr + 1)
                * pochhammer(&-&st, rr + 1)
                * pochhammer(&(&one - &two * p1 - &two * &st), rr)
                * pochhammer(&(&three_h + c - &two * p1 - &st), rr),
            factorial(rr)
                * pochhammer(&(&h - c - &st), rr)
                * pochhammer(&(&one - &two * p1 - &st), rr + 1)
                * pochhammer(&(&one - &two * p1 - &two * p2 - &two * &st), rr + 1),
        ),
        (_, 0) => (
            pochhammer(&(&two * p2), rr)
                * pochhammer(&-&st, rr)
                * pochhammer(&(-&two * p1 - &two * &st), rr)
                * pochhammer(&(&h + c - &two * p1 - &st), rr),
            factorial(rr)
                * pochhammer(&(-&h - c - &st), rr)
                * pochhammer(&(&one - &two * p1 - &st), rr)
                * pochhammer(&(-&two * p1 - &two * p2 - &two * &st), rr),
        ),
        _ => (
            -pochhammer(&(&two * p2), rr + 1)
                * pochhammer(&-&st, rr)
                * pochhammer(&(-&two * p1 - &two * &st), rr)
                * pochhammer(&(&h + c - &two * p1 - &st), rr + 1),
            factorial(rr)
                * pochhammer(&(-&h - c - &st), rr + 1)
                * pochhammer(&(&one - &two * p1 - &st), rr)
                * pochhammer(&(-&two * p1 - &two * p2 - &two * &st), rr + 1),
        ),
    };
    div(&num, &den, &format!("w1 denominator at r={r}, m={m}"))
}

/// Outer weight `w2_{s,N}`.
pub fn weight_outer(p: &BivTruncParams, s_idx: usize) -> Result<Scalar> {
    let big = (p.n / 2) as i64;
    let s = (s_idx / 2) as i64;
    let (p1, p2, p3, c) = (&p.p1, &p.p2, &p.p3, &p.c);
    let two = int(2);
    let h = half();
    let one = int(1);
    let bn = int(big);
    let u = |n: i64| n.max(0) as usize;
    let (num, den) = match (p.n % 2, s_idx % 2) {
        (0, 0) => (
            sign(s) * binomial(big, s)
                * pochhammer(&(rat(3, 2) + c - &two * p1 - &bn), u(s))
                * pochhammer(&(&one - &two * p1 - &two * p2 - &two * &bn), u(s))
                * pochhammer(&(&h + &two * p3), u(s)),
            factorial(u(big))
                * pochhammer(&(&h - c - &bn), u(s))
                * pochhammer(&(&one - &two * p1 - &two * p2 - &two * &bn), u(2 * s))
                * pochhammer(&(&h - &two * p1 - &two * p2 - &two * p3 - &two * &bn), u(s))
                * pochhammer(&(&one - &two * p1 - &two * &bn + int(2 * s)), u(big - s)),
        ),
        (0, _) => {
            if big == 0 {
                return Ok(Scalar::zero());
            }
            (
                sign(s) * binomial(big - 1, s)
                    * pochhammer(&(rat(3, 2) + c - &two * p1 - &bn), u(s))
                    * pochhammer(&(&one - &two * p1 - &two * p2 - &two * &bn), u(s))
                    * pochhammer(&(&h + &two * p3), u(s + 1)),
                factorial(u(big - 1))
                    * pochhammer(&(&h - c - &bn), u(s))
                    * pochhammer(&(&one - &two * p1 - &two * p2 - &two * &bn), u(2 * s + 1))
                    * pochhammer(&(&h - &two * p1 - &two * p2 - &two * p3 - &two * &bn), u(s + 1))
                    * pochhammer(&(int(2) - &two * p1 - &two * &bn + int(2 * s)), u(big - s)),
            )
        }
        (_, 0) => (
            sign(s) * binomial(big, s)
                * pochhammer(&(&h + c - &two * p1 - &bn), u(s))
                * pochhammer(&(-&two * p1 - &two * p2 - &two * &bn), u(s))
                * pochhammer(&(&h + &two * p3), u(s)),
            factorial(u(big))
                * pochhammer(&(-&h - c - &bn), u(s))
                * pochhammer(&(-&two * p1 - &two * p2 - &two * &bn), u(2 * s))
                * pochhammer(&(-&h - &two * p1 - &two * p2 - &two * p3 - &two * &bn), u(s))
                * pochhammer(&(-&two * p1 - &two * &bn + int(2 * s)), u(big + 1 - s)),
        ),
        _ => (
            sign(s + 1) * binomial(big, s)
                * pochhammer(&(&h + c - &two * p1 - &bn), u(s + 1))
                * pochhammer(&(-&two * p1 - &two * p2 - &two * &bn), u(s))
                * pochhammer(&(&h + &two * p3), u(s + 1)),
            factorial(u(big))
                * pochhammer(&(-&h - c - &bn), u(s + 1))
                * pochhammer(&(-&two * p1 - &two * p2 - &two * &bn), u(2 * s + 1))
                * pochhammer(&(-&h - &two * p1 - &two * p2 - &two * p3 - &two * &bn), u(s + 1))
                * pochhammer(&(&one - &two * p1 - &two * &bn + int(2 * s)), u(big - s)),
        ),
    };
    div(&num, &den, &format!("w2 denominator at s={s_idx}"))
}

fn nonneg_factorial(n: i64, what: &str) -> Result<Scalar> {
    if n < 0 {
        return Err(Error::Pole(format!("({what})! with negative argument")));
    }
    Ok(factorial(n as usize))
}

/// Squared norm `H_{n1,n2,N}` of the truncated family.
pub fn norm_h(p: &BivTruncParams, deg1: usize, deg2: usize) -> Result<Scalar> {
    if deg1 + deg2 > p.n {
        return Err(Error::Degree { n1: deg1, n2: deg2, max: p.n });
    }
    let (n1, a) = ((deg1 / 2) as i64, deg1 % 2);
    let (n2, b) = ((deg2 / 2) as i64, deg2 % 2);
    let (nn, e) = ((p.n / 2) as i64, p.n % 2);
    let (p1, p2, p3, c) = (&p.p1, &p.p2, &p.p3, &p.c);
    let h = half();
    let two = int(2);
    let pp2 = &two * p2;
    let pp3 = &two * p3 + &h;
    let ps = |x: Scalar, k: i64| pochhammer_signed(&x, k);
    let i = |k: i64| int(k);
    let f = |k: i64| factorial(k as usize);
    let base = c + &pp2 + &h;
    let tail = -&two * i(nn) - &two * p1 - &two * p2 - &two * p3;
    let m = nn - n1 - n2;
    let (num, den, num2, den2) = match (e, a, b) {
        (0, 0, 0) => (
            f(n1) * f(n2) * ps(pp2.clone(), n1)? * ps(pp3.clone(), n2)?
                * ps(&base + i(n1), nn)? * ps(c - i(nn) - &two * p1 + rat(3, 2), n1 + n2)?,
            nonneg_factorial(m, "N-n1-n2")? * ps(c + i(n1) + &h, nn - n1)?
                * ps(&base + i(n1), n1)?.pow(2) * ps(&base + i(2 * n1 + n2), m)?,
            ps(c + i(nn + n1) + &pp2 + &two * p3 + i(1), n2)?
                * ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(1), m)?,
            ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(1), n2)?.pow(2) * ps(&tail + &h, m)?,
        ),
        (0, 1, 0) => (
            f(n1) * f(n2) * ps(pp2.clone(), n1 + 1)? * ps(pp3.clone(), n2)?
                * ps(&base + i(n1), nn)? * ps(c - i(nn) - &two * p1 + rat(3, 2), n1 + n2)?,
            nonneg_factorial(m - 1, "N-n1-n2-1")? * ps(c + i(n1) + rat(3, 2), nn - n1 - 1)?
                * ps(&base + i(n1), n1 + 1)?.pow(2)
                * ps(c + i(2 * n1 + n2) + &pp2 + rat(3, 2), m - 1)?,
            ps(c + i(nn + n1) + &pp2 + &two * p3 + i(2), n2)?
                * ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(2), m)?,
            ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(2), n2)?.pow(2) * ps(&tail + &h, m)?,
        ),
        (0, 0, 1) => (
            f(n1) * f(n2) * ps(pp2.clone(), n1)? * ps(pp3.clone(), n2 + 1)?
                * ps(&base + i(n1), nn)? * ps(c - i(nn) - &two * p1 + rat(3, 2), n1 + n2)?,
            nonneg_factorial(m - 1, "N-n1-n2-1")? * ps(c + i(n1) + &h, nn - n1)?
                * ps(&base + i(n1), n1)?.pow(2)
                * ps(c + i(2 * n1 + n2) + &pp2 + rat(3, 2), m - 1)?,
            ps(c + i(nn + n1) + &pp2 + &two * p3 + i(1), n2 + 1)?
                * ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(1), m)?,
            ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(1), n2 + 1)?.pow(2)
                * ps(&tail + &h, m)?,
        ),
        (0, 1, 1) => (
            f(n1) * f(n2) * ps(pp2.clone(), n1 + 1)? * ps(pp3.clone(), n2 + 1)?
                * ps(&base + i(n1), nn)? * ps(c - i(nn) - &two * p1 + rat(3, 2), n1 + n2 + 1)?,
            nonneg_factorial(m - 1, "N-n1-n2-1")? * ps(c + i(n1) + rat(3, 2), nn - n1 - 1)?
                * ps(&base + i(n1), n1 + 1)?.pow(2)
                * ps(c + i(2 * n1 + n2) + &pp2 + rat(5, 2), m - 2)?,
            ps(c + i(nn + n1) + &pp2 + &two * p3 + i(2), n2)?
                * ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(2), m)?,
            ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(2), n2 + 1)?.pow(2)
                * ps(&tail + &h, m - 1)?,
        ),
        (_, 0, 0) => (
            f(n1) * f(n2) * ps(pp2.clone(), n1)? * ps(pp3.clone(), n2)?
                * ps(&base + i(n1), nn)? * ps(c - i(nn) - &two * p1 + &h, n1 + n2)?,
            nonneg_factorial(m, "N-n1-n2")? * ps(c + i(n1) + &h, nn - n1 + 1)?
                * ps(&base + i(n1), n1)?.pow(2) * ps(&base + i(2 * n1 + n2), m)?,
            ps(c + i(nn + n1) + &pp2 + &two * p3 + i(2), n2)?
                * ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(1), m + 1)?,
            ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(1), n2)?.pow(2)
                * ps(&tail - &h, m + 1)?,
        ),
        (_, 1, 0) => (
            f(n1) * f(n2) * ps(pp2.clone(), n1 + 1)? * ps(pp3.clone(), n2)?
                * ps(&base + i(n1), nn)? * ps(c - i(nn) - &two * p1 + &h, n1 + n2 + 1)?,
            nonneg_factorial(m, "N-n1-n2")? * ps(c + i(n1) + rat(3, 2), nn - n1)?
                * ps(&base + i(n1), n1 + 1)?.pow(2)
                * ps(c + i(2 * n1 + n2) + &pp2 + rat(3, 2), m - 1)?,
            ps(c + i(nn + n1) + &pp2 + &two * p3 + i(2), n2)?
                * ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(2), m)?,
            ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(2), n2)?.pow(2) * ps(&tail - &h, m)?,
        ),
        (_, 0, 1) => (
            f(n1) * f(n2) * ps(pp2.clone(), n1)? * ps(pp3.clone(), n2 + 1)?
                * ps(&base + i(n1), nn)? * ps(c - i(nn) - &two * p1 + &h, n1 + n2 + 1)?,
            nonneg_factorial(m, "N-n1-n2")? * ps(c + i(n1) + &h, nn - n1 + 1)?
                * ps(&base + i(n1), n1)?.pow(2)
                * ps(c + i(2 * n1 + n2) + &pp2 + rat(3, 2), m - 1)?,
            ps(c + i(nn + n1) + &pp2 + &two * p3 + i(1), n2 + 1)?
                * ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(1), m)?,
            ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(1), n2 + 1)?.pow(2)
                * ps(&tail - &h, m)?,
        ),
        _ => (
            f(n1) * f(n2) * ps(pp2.clone(), n1 + 1)? * ps(pp3.clone(), n2 + 1)?
                * ps(&base + i(n1), nn)? * ps(c - i(nn) - &two * p1 + &h, n1 + n2 + 1)?,
            nonneg_factorial(m - 1, "N-n1-n2-1")? * ps(c + i(n1) + rat(3, 2), nn - n1)?
                * ps(&base + i(n1), n1 + 1)?.pow(2)
                * ps(c + i(2 * n1 + n2) + &pp2 + rat(5, 2), m - 2)?,
            ps(c + i(nn + n1) + &pp2 + &two * p3 + i(2), n2 + 1)?
                * ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(2), m)?,
            ps(c + i(2 * n1 + n2) + &pp2 + &two * p3 + i(2), n2 + 1)?.pow(2)
                * ps(&tail - &h, m)?,
        ),
    };
    let what = format!("H denominator at ({deg1},{deg2})");
    Ok(div(&num, &den, &what)? * div(&num2, &den2, &what)?)
}

/// Norm of the first factor after summing over `r` at fixed `m = N - s`:
/// `sum_r w1_{r,m} B_{n1}(z1(r,s))^2`.
pub fn intermediate_norm(p: &BivTruncParams, deg1: usize, m: usize) -> Result<Scalar> {
    let (n1, a) = ((deg1 / 2) as i64, deg1 % 2);
    let (st, e) = ((m / 2) as i64, m % 2);
    let (p1, p2, c) = (&p.p1, &p.p2, &p.c);
    let h = half();
    let two = int(2);
    let pp2 = &two * p2;
    let ps = |x: Scalar, k: i64| pochhammer_signed(&x, k);
    let i = |k: i64| int(k);
    let fst = factorial(st as usize) * factorial(n1 as usize);
    let base = c + i(n1) + &pp2 + &h;
    let (num, den) = match (e, a) {
        (0, 0) => (
            fst * ps(pp2.clone(), n1)? * ps(base.clone(), st - n1)?
                * ps(&h + c + &pp2 + i(st), n1)?
                * ps(rat(3, 2) + c - &two * p1 - i(st), n1)?
                * ps(i(1) - &two * p1 - i(2 * st), st)?,
            nonneg_factorial(st - n1, "s-n1")? * ps(&h + c + i(n1), st - n1)?
                * ps(base.clone(), n1)?.pow(2)
                * ps(i(1) - &two * p1 - &two * p2 - i(2 * st), st - n1)?,
        ),
        (0, _) => (
            fst * ps(pp2.clone(), n1 + 1)? * ps(base.clone(), st - n1)?
                * ps(&h + c + &pp2 + i(st), n1 + 1)?
                * ps(rat(3, 2) + c - &two * p1 - i(st), n1)?
                * ps(i(1) - &two * p1 - i(2 * st), st)?,
            nonneg_factorial(st - n1 - 1, "s-n1-1")? * ps(&h + c + i(n1 + 1), st - n1 - 1)?
                * ps(base.clone(), n1 + 1)?.pow(2)
                * ps(i(1) - &two * p1 - &two * p2 - i(2 * st), st - n1)?,
        ),
        (_, 0) => (
            fst * ps(pp2.clone(), n1)? * ps(base.clone(), st + 1 - n1)?
                * ps(rat(3, 2) + c + &pp2 + i(st), n1)?
                * ps(&h + c - &two * p1 - i(st), n1)?
                * ps(-&two * p1 - i(2 * st), st + 1)?,
            nonneg_factorial(st - n1, "s-n1")? * ps(&h + c + i(n1), st + 1 - n1)?
                * ps(base.clone(), n1)?.pow(2)
                * ps(-&two * p1 - &two * p2 - i(2 * st), st + 1 - n1)?,
        ),
        _ => (
            fst * ps(pp2.clone(), n1 + 1)? * ps(base.clone(), st + 1 - n1)?
                * ps(rat(3, 2) + c + &pp2 + i(st), n1)?
                * ps(&h + c - &two * p1 - i(st), n1 + 1)?
                * ps(-&two * p1 - i(2 * st), st + 1)?,
            nonneg_factorial(st - n1, "s-n1")? * ps(rat(3, 2) + c + i(n1), st - n1)?
                * ps(base.clone(), n1 + 1)?.pow(2)
                * ps(-&two * p1 - &two * p2 - i(2 * st), st - n1)?,
        ),
    };
    div(&num, &den, &format!("h1 denominator at n1={deg1}, m={m}"))
}

/// Fully materialized orthogonality lattice. `z1[r][s]`, `w1[r][s]` holds
/// `w1_{r,N-s}`, and `h` is keyed by `(n1, n2)` with `n1 + n2 <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivLattice {
    pub n: usize,
    pub z1: Vec<Vec<Scalar>>,
    pub z2: Vec<Scalar>,
    pub w1: Vec<Vec<Scalar>>,
    pub w2: Vec<Scalar>,
    pub h: BTreeMap<(usize, usize), Scalar>,
}

impl BivLattice {
    pub fn weight(&self, r: usize, s: usize) -> Scalar {
        &self.w1[r][s] * &self.w2[s]
    }

    pub fn norm(&self, n1: usize, n2: usize) -> Result<&Scalar> {
        self.h.get(&(n1, n2)).ok_or(Error::Degree { n1, n2, max: self.n })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let grid = |v: &Vec<Vec<Scalar>>| -> Vec<Vec<String>> {
            v.iter().map(|row| row.iter().map(format_scalar).collect()).collect()
        };
        let flat = |v: &Vec<Scalar>| -> Vec<String> { v.iter().map(format_scalar).collect() };
        let h: BTreeMap<String, String> = self
            .h
            .iter()
            .map(|((a, b), v)| (format!("({a},{b})"), format_scalar(v)))
            .collect();
        serde_json::json!({
            "z1": grid(&self.z1),
            "z2": flat(&self.z2),
            "w1": grid(&self.w1),
            "w2": flat(&self.w2),
            "H": h,
        })
    }
}

pub fn build_lattice(p: &BivTruncParams) -> Result<BivLattice> {
    let n = p.n;
    let mut z1 = vec![Vec::with_capacity(n + 1); n + 1];
    let mut w1 = vec![Vec::with_capacity(n + 1); n + 1];
    for r in 0..=n {
        for s in 0..=n {
            z1[r].push(z1_grid(p, r, s));
            w1[r].push(weight_inner(p, r, n - s)?);
        }
    }
    let z2 = (0..=n).map(|s| z2_grid(p, s)).collect();
    let w2 = (0..=n).map(|s| weight_outer(p, s)).collect::<Result<_>>()?;
    let mut h = BTreeMap::new();
    for n1 in 0..=n {
        for n2 in 0..=(n - n1) {
            h.insert((n1, n2), norm_h(p, n1, n2)?);
        }
    }
    Ok(BivLattice { n, z1, z2, w1, w2, h })
}

/// Values of every `B_{n1,n2}` with `n1 + n2 <= N` at one lattice point,
/// indexed `[n1][n2]`.
fn simplex_values(p: &BivTruncParams, z1: &Scalar, z2: &Scalar) -> Result<Vec<Vec<Scalar>>> {
    let q = quarter();
    let (first, _) = def1_params(p, 0, z2);
    let b1 = eval_sequence(&first, p.n, &(z1 - &q))?;
    (0..=p.n)
        .map(|n1| {
            let (_, second) = def1_params(p, n1, z2);
            let b2 = eval_sequence(&second, p.n - n1, &(sign(n1 as i64) * z2 - &q))?;
            Ok(b2.into_iter().map(|v| &b1[n1] * v).collect())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub n: usize,
    /// Number of `((n1,n2),(m1,m2))` pairs checked.
    pub cases: usize,
    #[serde(serialize_with = "crate::exact::serde_scalar::serialize")]
    pub max_residual: Scalar,
    /// Worst off-diagonal or diagonal-vs-H offender, if any.
    pub worst: Option<[usize; 4]>,
    /// Triangular and full-square summation ranges agree.
    pub range_extension_holds: bool,
    /// Every weight outside the triangle `r <= N - s` is exactly zero.
    pub outside_weights_vanish: bool,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.max_residual.is_zero() && self.range_extension_holds && self.outside_weights_vanish
    }
}

/// Exact Gram matrix of the truncated family on its lattice, compared
/// against the closed-form norms.
pub fn orthogonality_check(p: &BivTruncParams) -> Result<OrthogonalityReport> {
    let lat = build_lattice(p)?;
    let n = p.n;
    let idx: Vec<(usize, usize)> =
        (0..=n).flat_map(|a| (0..=(n - a)).map(move |b| (a, b))).collect();
    let dim = idx.len();
    let mut full = vec![vec![Scalar::zero(); dim]; dim];
    let mut tri = vec![vec![Scalar::zero(); dim]; dim];
    let mut outside_zero = true;
    for s in 0..=n {
        for r in 0..=n {
            let w = lat.weight(r, s);
            let inside = r + s <= n;
            if !inside && !w.is_zero() {
                outside_zero = false;
            }
            if w.is_zero() {
                continue;
            }
            let vals = simplex_values(p, &lat.z1[r][s], &lat.z2[s])?;
            for (i, &(a, b)) in idx.iter().enumerate() {
                let wa = &w * &vals[a][b];
                for (j, &(c, d)) in idx.iter().enumerate().skip(i) {
                    let t = &wa * &vals[c][d];
                    if inside {
                        tri[i][j] += &t;
                    }
                    full[i][j] += t;
                }
            }
        }
    }
    let mut max_residual = Scalar::zero();
    let mut worst = None;
    let mut range_ok = true;
    for i in 0..dim {
        for j in i..dim {
            if full[i][j] != tri[i][j] {
                range_ok = false;
            }
            let expected = if i == j { lat.h[&idx[i]].clone() } else { Scalar::zero() };
            let res = (&full[i][j] - &expected).abs();
            if res > max_residual {
                max_residual = res;
                worst = Some([idx[i].0, idx[i].1, idx[j].0, idx[j].1]);
            }
        }
    }
    Ok(OrthogonalityReport {
        n,
        cases: dim * (dim + 1) / 2,
        max_residual,
        worst,
        range_extension_holds: range_ok,
        outside_weights_vanish: outside_zero,
    })
}

/// Monomial coefficients `(i, j) -> c` of `sum c z1^i z2^j`, zeros omitted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BivExpansion {
    pub coeffs: BTreeMap<(usize, usize), Scalar>,
}

impl BivExpansion {
    pub fn coefficient(&self, i: usize, j: usize) -> Scalar {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|(i, j)| i + j).max()
    }

    pub fn degree_z1(&self) -> Option<usize> {
        self.coeffs.keys().map(|(i, _)| *i).max()
    }

    pub fn degree_z2(&self) -> Option<usize> {
        self.coeffs.keys().map(|(_, j)| *j).max()
    }

    pub fn eval(&self, z1: &Scalar, z2: &Scalar) -> Scalar {
        self.coeffs.iter().fold(Scalar::zero(), |acc, ((i, j), c)| {
            acc + c * z1.pow(*i as i32) * z2.pow(*j as i32)
        })
    }
}

/// Monomial coefficients of the interpolating polynomial through
/// `(xs[k], ys[k])`, via Newton divided differences.
pub fn interpolate_1d(xs: &[Scalar], ys: &[Scalar]) -> Vec<Scalar> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            dd[k] = (&dd[k] - &dd[k - 1]) / (&xs[k] - &xs[k - level]);
        }
    }
    let mut coeffs = vec![Scalar::zero(); n];
    for k in (0..n).rev() {
        // coeffs <- coeffs * (x - xs[k]) + dd[k]
        let mut next = vec![Scalar::zero(); n];
        for i in 0..n {
            if coeffs[i].is_zero() {
                continue;
            }
            if i + 1 < n {
                next[i + 1] += &coeffs[i];
            }
            next[i] -= &coeffs[i] * &xs[k];
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    coeffs
}

/// Interpolation nodes `k + 3/8`, clear of the `+-1/4` poles.
pub fn interpolation_nodes(count: usize) -> Vec<Scalar> {
    (1..=count).map(|k| int(k as i64) + rat(3, 8)).collect()
}

/// Recovers the monomial expansion of `B_{n1,n2}` by exact tensor-grid
/// interpolation and certifies it is a polynomial of total degree
/// `n1 + n2`: every higher coefficient must vanish and the expansion must
/// reproduce the evaluator at an off-grid point.
pub fn expand_polynomial<F>(eval: F, n1: usize, n2: usize) -> Result<BivExpansion>
where
    F: Fn(&Scalar, &Scalar) -> Result<Scalar>,
{
    let d = n1 + n2;
    let nodes = interpolation_nodes(d + 1);
    // columns[j][i]: coefficient of z1^i at z2 = nodes[j]
    let mut columns = Vec::with_capacity(d + 1);
    for z2 in &nodes {
        let ys = nodes.iter().map(|z1| eval(z1, z2)).collect::<Result<Vec<_>>>()?;
        columns.push(interpolate_1d(&nodes, &ys));
    }
    let mut out = BivExpansion::default();
    for i in 0..=d {
        let ys: Vec<Scalar> = columns.iter().map(|col| col[i].clone()).collect();
        for (j, c) in interpolate_1d(&nodes, &ys).into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i + j > d {
                return Err(Error::Interpolation(format!(
                    "nonzero coefficient of z1^{i} z2^{j} beyond total degree {d}"
                )));
            }
            out.coeffs.insert((i, j), c);
        }
    }
    let probe = (rat(-7, 5), rat(11, 13));
    if out.eval(&probe.0, &probe.1) != eval(&probe.0, &probe.1)? {
        return Err(Error::Interpolation("expansion disagrees off the grid".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> BivTruncParams {
        BivTruncParams::new(rat(1, 5), rat(1, 7), rat(1, 11), rat(1, 3), n)
    }

    #[test]
    fn degree_zero_is_one() {
        let p = sample(3);
        assert_eq!(eval_def1(&p, 0, 0, &rat(2, 3), &rat(-5, 7)).unwrap(), int(1));
        let q = reduce_def2_to_def1(&p);
        assert_eq!(eval_def2(&q, 0, 0, &rat(2, 3), &rat(-5, 7)).unwrap(), int(1));
    }

    #[test]
    fn simplex_is_enforced() {
        let p = sample(2);
        assert!(matches!(eval_def1(&p, 2, 1, &int(0), &int(0)), Err(Error::Degree { .. })));
        assert!(matches!(norm_h(&p, 3, 0), Err(Error::Degree { .. })));
    }

    #[test]
    fn lattice_origin() {
        let p = sample(4);
        assert_eq!(z1_grid(&p, 0, 0), half() * (int(-4) - int(2) * &p.p1 + half()));
        assert_eq!(weight_inner(&p, 0, 3).unwrap(), int(1));
        let lat = build_lattice(&p).unwrap();
        assert_eq!(lat.z1.len(), 5);
        assert_eq!(lat.h.len(), 15);
    }

    #[test]
    fn first_norm_is_total_mass() {
        let p = sample(2);
        let lat = build_lattice(&p).unwrap();
        let mut mass = Scalar::zero();
        for r in 0..=2 {
            for s in 0..=2 {
                mass += lat.weight(r, s);
            }
        }
        assert_eq!(&mass, lat.norm(0, 0).unwrap());
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let xs = interpolation_nodes(4);
        let f = |x: &Scalar| x.pow(3) - int(2) * x + rat(1, 3);
        let ys: Vec<_> = xs.iter().map(f).collect();
        assert_eq!(interpolate_1d(&xs, &ys), vec![rat(1, 3), int(-2), int(0), int(1)]);
    }

    #[test]
    fn non_polynomial_is_rejected() {
        let f = |a: &Scalar, b: &Scalar| Ok(a / (b + int(10)));
        assert!(matches!(expand_polynomial(f, 1, 0), Err(Error::Interpolation(_))));
    }
}
