//! Numerical `q -> -1` limits. The bivariate q-Racah and Askey-Wilson
//! families, the Askey-Wilson operator and its 9-term recurrence are
//! evaluated at `q = -e^t` in complex arithmetic of fixed binary precision,
//! and compared with the exact Bannai-Ito objects as `t -> 0`.

use serde::Serialize;

use crate::bigfloat::{BigFloat, CancellationMonitor, Complex};
use crate::bivariate::{def1_params, def2_params, BivFreeParams, BivTruncParams};
use crate::error::{Error, Result};
use crate::exact::{half, int, quarter, rat, sign, Scalar};
use crate::multispectral::{c_ij, eigenvalue_l2, nine_term_coeffs, NINE_TERM_OFFSETS};
use crate::univariate::{eta, eval_recurrence, UniParams};

#[derive(Debug, Clone)]
pub struct QContext {
    pub t: Scalar,
    pub precision: usize,
    pub q: Complex,
}

impl QContext {
    /// `q = -e^t`. Requires `0 < t < 1/2` so that `|q + 1| < 1`.
    pub fn new(t: &Scalar, precision: usize) -> Result<Self> {
        if t <= &int(0) || t >= &half() {
            return Err(Error::Config(format!("t = {t} outside (0, 1/2)")));
        }
        if precision < 16 {
            return Err(Error::Config(format!("precision {precision} below 16 bits")));
        }
        let q = -Complex::real(BigFloat::from_scalar(t, precision).exp());
        Ok(QContext { t: t.clone(), precision, q })
    }

    /// `e^{k t}` for exact `k`.
    pub fn exp_t(&self, k: &Scalar) -> BigFloat {
        BigFloat::from_scalar(&(k * &self.t), self.precision).exp()
    }

    pub fn one(&self) -> Complex {
        Complex::one(self.precision)
    }

    pub fn qpow(&self, n: i64) -> Complex {
        self.q.powi(n)
    }

    pub fn exact(&self, x: &Scalar) -> Complex {
        Complex::from_scalar(x, self.precision)
    }
}

/// `(a; q)_n`.
pub fn qpoch(a: &Complex, q: &Complex, n: usize) -> Complex {
    let one = Complex::one(a.precision());
    let mut acc = one.clone();
    let mut x = a.clone();
    for _ in 0..n {
        acc = acc * (&one - &x);
        x = &x * q;
    }
    acc
}

/// Terminating `4phi3(upper; lower; q, q)`, summed for `k = 0..=n`.
pub fn phi43(upper: &[Complex; 4], lower: &[Complex; 3], q: &Complex, n: usize) -> Result<Complex> {
    let p = q.precision();
    let one = Complex::one(p);
    let mut sum = one.clone();
    let mut term = one.clone();
    let mut qk = one.clone();
    for k in 0..n {
        let mut num = q.clone();
        for u in upper {
            num = num * (&one - u * &qk);
        }
        let mut den = &one - &qk * q;
        for l in lower {
            den = den * (&one - l * &qk);
        }
        if den.is_zero() {
            return Err(Error::Pole(format!("lower q-Pochhammer factor at k = {k}")));
        }
        term = term * num / den;
        sum = &sum + &term;
        qk = &qk * q;
    }
    Ok(sum)
}

/// Askey-Wilson parameters with the fixed phase pattern: `a, c` carry `+i`,
/// `b, d` carry `-i`, `a2` is real and the variables are `i e^{-2 t z}`.
#[derive(Debug, Clone)]
pub struct QAWParams {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
    pub a2: Complex,
    pub z1: Complex,
    pub z2: Complex,
}

impl QAWParams {
    pub fn new(ctx: &QContext, p: &BivFreeParams, z1: &Scalar, z2: &Scalar) -> Self {
        let h = half();
        let two = int(2);
        let i = |x: BigFloat| Complex::imag(x);
        QAWParams {
            a: i(ctx.exp_t(&(-&two * &p.alpha + &h))),
            b: -i(ctx.exp_t(&(&two * &p.beta + &h))),
            c: i(ctx.exp_t(&(&two * &p.gamma + &h))),
            d: -i(ctx.exp_t(&(&two * &p.delta + &h))),
            a2: Complex::real(ctx.exp_t(&(&two * &p.epsilon))),
            z1: i(ctx.exp_t(&(-&two * z1))),
            z2: i(ctx.exp_t(&(-&two * z2))),
        }
    }
}

/// `4phi3(q^-n, abcd q^{n-1}, a z, a/z; ab, ac, ad; q, q)`.
pub fn aw_poly(
    ctx: &QContext,
    n: usize,
    z: &Complex,
    a: &Complex,
    b: &Complex,
    c: &Complex,
    d: &Complex,
) -> Result<Complex> {
    let n_ = n as i64;
    phi43(
        &[ctx.qpow(-n_), a * b * c * d * ctx.qpow(n_ - 1), a * z, a / z],
        &[a * b, a * c, a * d],
        &ctx.q,
        n,
    )
}

/// The two Askey-Wilson factors of the bivariate family.
pub fn aw_pair(ctx: &QContext, w: &QAWParams, n1: usize, n2: usize) -> Result<(Complex, Complex)> {
    let (c1, d1) = first_aw_cd(w);
    let p1 = aw_poly(ctx, n1, &w.z1, &w.a, &w.b, &c1, &d1)?;
    let (a2, b2) = second_aw_ab(ctx, w, n1);
    let p2 = aw_poly(ctx, n2, &w.z2, &a2, &b2, &w.c, &w.d)?;
    Ok((p1, p2))
}

fn first_aw_cd(w: &QAWParams) -> (Complex, Complex) {
    (&w.a2 * &w.z2, &w.a2 / &w.z2)
}

fn second_aw_ab(ctx: &QContext, w: &QAWParams, n1: usize) -> (Complex, Complex) {
    let s = &w.a2 * ctx.qpow(n1 as i64);
    (&w.a * &s, &w.b * &s)
}

/// `xi_n = (ab;q)_n (ac;q)_n (ad;q)_n / a^n`.
pub fn xi(ctx: &QContext, n: usize, a: &Complex, b: &Complex, c: &Complex, d: &Complex) -> Complex {
    let q = &ctx.q;
    qpoch(&(a * b), q, n) * qpoch(&(a * c), q, n) * qpoch(&(a * d), q, n) / a.powi(n as i64)
}

pub fn zeta(ctx: &QContext, w: &QAWParams, n1: usize, n2: usize) -> Complex {
    let q = &ctx.q;
    let num = w.c.powi((n1 + n2) as i64) * w.a2.powi(n1 as i64);
    let den = qpoch(&(&w.a2 * &w.a2), q, n1)
        * qpoch(&(&w.a * &w.c * &w.a2), q, n1 + n2)
        * qpoch(&(&w.b * &w.c * &w.a2), q, n1 + n2)
        * qpoch(&(&w.c * &w.d), q, n2);
    num / den
}

/// Full normalization turning the product of the two factors into the
/// renormalized family `P_{n1,n2}`.
pub fn aw_normalization(ctx: &QContext, w: &QAWParams, n1: usize, n2: usize) -> Complex {
    let (c1, d1) = first_aw_cd(w);
    let (a2, b2) = second_aw_ab(ctx, w, n1);
    zeta(ctx, w, n1, n2) * xi(ctx, n1, &w.a, &w.b, &c1, &d1) * xi(ctx, n2, &a2, &b2, &w.c, &w.d)
}

/// Bivariate q-Racah parameters: `a1, b` carry `-1`, `a2, a3` are real,
/// `qx_k = e^{t y_k}`.
#[derive(Debug, Clone)]
pub struct QRacahParams {
    pub a1: Complex,
    pub a2: Complex,
    pub a3: Complex,
    pub b: Complex,
    pub n: usize,
    pub qx1: Complex,
    pub qx2: Complex,
}

impl QRacahParams {
    pub fn new(ctx: &QContext, p: &BivTruncParams, z1: &Scalar, z2: &Scalar) -> Self {
        let two = int(2);
        let four = int(4);
        let h = half();
        let y1 = &h - &two * z1 - &two * &p.p1;
        let y2 = &h - &two * z2 - &two * &p.p1 - &two * &p.p2;
        let r = |x: BigFloat| Complex::real(x);
        QRacahParams {
            a1: -r(ctx.exp_t(&(&four * &p.p1 - int(1)))),
            a2: r(ctx.exp_t(&(&four * &p.p2))),
            a3: r(ctx.exp_t(&(&four * &p.p3 + int(1)))),
            b: -r(ctx.exp_t(&(&two * &p.c))),
            n: p.n,
            qx1: r(ctx.exp_t(&y1)),
            qx2: r(ctx.exp_t(&y2)),
        }
    }
}

pub fn q_racah_pair(ctx: &QContext, r: &QRacahParams, n1: usize, n2: usize) -> Result<(Complex, Complex)> {
    if n1 + n2 > r.n {
        return Err(Error::Degree { n1, n2, max: r.n });
    }
    let q = &ctx.q;
    let (m1, m2, nn) = (n1 as i64, n2 as i64, r.n as i64);
    let one = ctx.one();
    let r1 = phi43(
        &[
            ctx.qpow(-m1),
            &r.b * &r.a2 * ctx.qpow(m1),
            &one / &r.qx1,
            &r.a1 * &r.qx1,
        ],
        &[&r.b * q, &r.a1 * &r.a2 * &r.qx2, &one / &r.qx2],
        q,
        n1,
    )?;
    let r2 = phi43(
        &[
            ctx.qpow(-m2),
            &r.b * &r.a2 * &r.a3 * ctx.qpow(2 * m1 + m2),
            ctx.qpow(m1) / &r.qx2,
            &r.a1 * &r.a2 * ctx.qpow(m1) * &r.qx2,
        ],
        &[
            &r.b * &r.a2 * ctx.qpow(2 * m1 + 1),
            &r.a1 * &r.a2 * &r.a3 * ctx.qpow(nn + m1),
            ctx.qpow(m1 - nn),
        ],
        q,
        n2,
    )?;
    Ok((r1, r2))
}

/// Coefficient `C_{i,j}` of the bivariate Askey-Wilson operator.
pub fn c_table(ctx: &QContext, w: &QAWParams, i: i8, j: i8) -> Complex {
    let q = &ctx.q;
    let one = ctx.one();
    let (a, b, c, d, a2) = (&w.a, &w.b, &w.c, &w.d, &w.a2);
    let (z1, z2) = (&w.z1, &w.z2);
    let z1s = z1 * z1;
    let z2s = z2 * z2;
    let qp1 = q + &one;
    let s1 = &one + a * b / q - (&z1s + &one) * (a + b) / (z1 * &qp1);
    let s2 = &one + c * d / q - (&z2s + &one) * (c + d) / (z2 * &qp1);
    match (i, j) {
        (-1, -1) => {
            -((z1 - a) * (z1 - b) * (z2 - c) * (z2 - d) * (z1 * z2 - a2) * (z1 * z2 - a2 * q))
                / ((&z1s - &one) * (&z2s - &one) * (&z1s - q) * (q - &z2s))
        }
        (-1, 0) => {
            z2 * q * &qp1 * (z1 - a) * (z1 - b) * (z1 * z2 - a2) * (z1 - a2 * z2) * &s2
                / ((&z1s - &one) * (&z1s - q) * (q - &z2s) * (q * &z2s - &one))
        }
        (-1, 1) => {
            (a - z1) * (z1 - b) * (c * z2 - &one) * (&one - d * z2) * (z1 - a2 * z2)
                * (z1 - a2 * q * z2)
                / ((&z1s - &one) * (&z2s - &one) * (&z1s - q) * (q * &z2s - &one))
        }
        (0, -1) => {
            z1 * q * &qp1 * (z2 - c) * (z2 - d) * (z1 * z2 - a2) * (z2 - a2 * z1) * &s1
                / ((&z2s - &one) * (&z1s - q) * (&one - q * &z1s) * (&z2s - q))
        }
        (0, 0) => {
            let mid = &one + a2 * a2 / q - a2 * (&z1s + &one) * (&z2s + &one) / (z1 * z2 * &qp1);
            -&one + a2 * (a + b) * (c + d) / &qp1 - a * a2 * a2 * b * c * d / q
                + &z1s * &z2s * q * q * &qp1 * &qp1 * &s1 * mid * &s2
                    / ((&z1s - q) * (&one - q * &z1s) * (&z2s - q) * (&one - q * &z2s))
        }
        (0, 1) => {
            z1 * q * &qp1 * (&one - c * z2) * (&one - d * z2) * (z1 - a2 * z2)
                * (&one - a2 * z1 * z2)
                * &s1
                / ((&one - &z2s) * (&z1s - q) * (&one - q * &z1s) * (&one - q * &z2s))
        }
        (1, -1) => {
            (a * z1 - &one) * (b * z1 - &one) * (c - z2) * (z2 - d) * (a2 * z1 - z2)
                * (a2 * q * z1 - z2)
                / ((&z1s - &one) * (&z2s - &one) * (q * &z1s - &one) * (q - &z2s))
        }
        (1, 0) => {
            z2 * q * &qp1 * (&one - a * z1) * (&one - b * z1) * (z2 - a2 * z1)
                * (&one - a2 * z1 * z2)
                * &s2
                / ((&z1s - &one) * (q * &z1s - &one) * (q - &z2s) * (q * &z2s - &one))
        }
        (1, 1) => {
            -((a * z1 - &one) * (b * z1 - &one) * (c * z2 - &one) * (&one - d * z2)
                * (a2 * z1 * z2 - &one)
                * (a2 * q * z1 * z2 - &one))
                / ((&z1s - &one) * (&z2s - &one) * (q * &z1s - &one) * (q * &z2s - &one))
        }
        _ => panic!("C_ij index ({i},{j}) outside -1..=1"),
    }
}

/// Eigenvalue `(q^-n - 1)(1 - a a2^2 b c d q^{n-1})` of the operator.
pub fn big_lambda(ctx: &QContext, w: &QAWParams, n1: usize, n2: usize) -> Complex {
    let n = (n1 + n2) as i64;
    let one = ctx.one();
    (ctx.qpow(-n) - &one) * (&one - &w.a * &w.a2 * &w.a2 * &w.b * &w.c * &w.d * ctx.qpow(n - 1))
}

/// Multiplier of `P_{n1,n2}` on the left of the 9-term relation, already
/// divided by `4(1+q)`.
pub fn recurrence_multiplier(ctx: &QContext, w: &QAWParams) -> Complex {
    let q = &ctx.q;
    let one = ctx.one();
    let (a, b) = (&w.a, &w.b);
    let qp1 = q + &one;
    let bracket = (a + b) * (a * b + q) / (a * b * &qp1) - &w.z1 - &one / &w.z1;
    &w.c * &w.a2 * bracket / (Complex::from_i64(4, ctx.precision) * qp1)
}

/// Coefficient `tau^(k)_{n1,n2}` of the 9-term relation for `P_{n1,n2}`.
pub fn tau(ctx: &QContext, w: &QAWParams, k: usize, n1: usize, n2: usize) -> Complex {
    let q = &ctx.q;
    let one = ctx.one();
    let qp = |e: i64| ctx.qpow(e);
    let (a, b, c, d, a2) = (&w.a, &w.b, &w.c, &w.d, &w.a2);
    let (m1, m2) = (n1 as i64, n2 as i64);
    let s = m1 + m2;
    let aa = a * a2 * a2 * b;
    let dd = &aa * c * d;
    let a2s = a2 * a2;
    let ab = a * b;
    let cd = c * d;
    let q2 = q * q;
    let qp1 = q + &one;
    let a2n = &aa * qp(2 * m1);
    let d2s = &dd * qp(2 * s);
    let mixed = (a + b) * (q + &d2s) - a * a2 * b * &qp1 * (c + d) * qp(s);
    match k {
        1 => {
            -((&a2s * qp(m1) - &one)
                * (&aa * qp(m1) - q)
                * (a * a2 * c * qp(s) - &one)
                * (a2 * b * c * qp(s) - &one)
                * (&dd * qp(2 * m1 + m2) - &one)
                * (&dd * qp(2 * m1 + m2) - q))
                / ((&a2n - &one) * (&a2n - q) * (&d2s - &one) * (&d2s - q))
        }
        2 => {
            a2 * c * qp(m1) * (qp(m2) - &one) * (&a2s * qp(m1) - &one) * (&aa * qp(m1) - q)
                * (&dd * qp(2 * m1 + m2) - q)
                * &mixed
                / ((q - &a2n) * (&a2n - &one) * (&q2 - &d2s) * (&d2s - &one))
        }
        3 => {
            -(&aa * c * c * qp(2 * m1) * (qp(m2) - &one) * (qp(m2) - q) * (&a2s * qp(m1) - &one)
                * (&aa * qp(m1) - q)
                * (a * a2 * d * qp(s) - q)
                * (a2 * b * d * qp(s) - q))
                / ((&a2n - &one) * (&a2n - q) * (&d2s - q) * (&d2s - &q2))
        }
        4 => {
            let inner = &one + &a2s / q
                - (a * a * b + a * q) * (a * a * &a2s * b * qp(2 * m1) + a * q)
                    / (a * a * a * b * qp(m1 + 1) * &qp1);
            -(q * &qp1 * (&one - &cd * qp(m2)) * (&one - a * a2 * c * qp(s))
                * (&one - a2 * b * c * qp(s))
                * (&one - &dd * qp(2 * m1 + m2 - 1))
                * inner)
                / ((&one - qp(2 - 2 * m1) / &aa)
                    * (&one - &a2n)
                    * (&one - &d2s)
                    * (&one - &dd * qp(2 * s - 1)))
        }
        5 => {
            let f1 = &one + &a2s / q - (&ab + q) * (q + &a2n) / (&ab * qp(m1 + 1) * &qp1);
            let f2 = &one + c / d - (a + b) * (q + &d2s) / (a * a2 * b * d * qp(s) * &qp1);
            let f3 = &one + &cd / q - (q + &a2n) * (q + &d2s) / (&aa * qp(1 + 2 * m1 + m2) * &qp1);
            -(&q2 * &qp1 * &qp1 * f1 * f2 * f3)
                / ((&one - qp(2 - 2 * m1) / &aa)
                    * (&one - &a2n)
                    * (&one - qp(-2 * (s - 1)) / &dd)
                    * (&one - &d2s))
        }
        6 => {
            &a2s * c * c * qp(m1) * (qp(m2) - &one) * (q - &aa * qp(2 * m1 + m2))
                * (q - a * a2 * d * qp(s))
                * (q - a2 * b * d * qp(s))
                * (&ab * qp(m1) * &qp1 * (&a2s + q) - (&ab + q) * (q + &a2n))
                / ((&q2 - &a2n) * (&a2n - &one) * (q - &d2s) * (&q2 - &d2s))
        }
        7 => {
            a * &a2s * &a2s * b * qp(2 * m1 + 1) * (&one - qp(m1)) * (q - &ab * qp(m1))
                * (&one - &cd * qp(m2))
                * (&one - &cd * qp(m2 + 1))
                * (&one - a * a2 * c * qp(s))
                * (&one - a2 * b * c * qp(s))
                / ((q - &a2n) * (&q2 - &a2n) * (q - &d2s) * (&d2s - &one))
        }
        8 => {
            &a2s * a2 * c * qp(m1 + 1) * (qp(m1) - &one) * (q - &ab * qp(m1))
                * (&cd * qp(m2) - &one)
                * (q - &aa * qp(2 * m1 + m2))
                * &mixed
                / ((q - &a2n) * (&q2 - &a2n) * (&q2 - &d2s) * (&one - &d2s))
        }
        9 => {
            -(&a2s * c * c * (qp(m1) - &one) * (&ab * qp(m1) - q) * (&aa * qp(2 * m1 + m2) - q)
                * (&aa * qp(2 * m1 + m2) - &q2)
                * (a * a2 * d * qp(s) - q)
                * (a2 * b * d * qp(s) - q))
                / ((q - &a2n) * (&q2 - &a2n) * (q - &d2s) * (&q2 - &d2s))
        }
        _ => panic!("tau index {k} outside 1..=9"),
    }
}

/// `eta` of both factors of the free family at `z2`.
pub fn exact_normalization(p: &BivFreeParams, n1: usize, n2: usize, z2: &Scalar) -> Result<Scalar> {
    let (first, second) = def2_params(p, n1, z2);
    Ok(eta(&first, n1)? * eta(&second, n2)?)
}

fn factor_over_eta(p: &UniParams, n: usize, x: &Scalar) -> Result<Scalar> {
    Ok(eval_recurrence(p, n, x)? / eta(p, n)?)
}

/// Result of one limit study: errors at each `t` and the empirical order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub check: String,
    pub t: Vec<f64>,
    pub error: Vec<f64>,
    /// Smallest order over consecutive `t` pairs; `None` when every error is
    /// already at the precision floor.
    pub order: Option<f64>,
    /// Largest `|Im|` of the compared quantity over all `t`.
    pub max_imag: f64,
    pub pass: bool,
}

/// Order gate applied to every limit check.
pub const MIN_ORDER: f64 = 0.9;

#[derive(Debug, Clone)]
pub struct LimitConfig {
    pub t_values: Vec<Scalar>,
    pub precision: usize,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            t_values: vec![rat(1, 1000), rat(1, 10000)],
            precision: crate::bigfloat::DEFAULT_PRECISION,
        }
    }
}

impl LimitConfig {
    fn validate(&self) -> Result<()> {
        if self.t_values.len() < 2 {
            return Err(Error::Config("an order estimate needs at least two t values".into()));
        }
        if self.t_values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("t values must be strictly decreasing".into()));
        }
        Ok(())
    }

    fn floor(&self) -> f64 {
        2f64.powi(-(self.precision as i32) / 2)
    }
}

/// Evaluates `value` at every `t` and compares with the exact `target`.
/// Fails with a precision error if any addition inside `value` cancels more
/// than half the working bits.
fn converge<F>(cfg: &LimitConfig, check: String, target: &Scalar, value: F) -> Result<ConvergenceReport>
where
    F: Fn(&QContext) -> Result<Complex>,
{
    cfg.validate()?;
    let limit = cfg.precision / 2;
    let mut ts = Vec::new();
    let mut errors = Vec::new();
    let mut max_imag = 0f64;
    for t in &cfg.t_values {
        let ctx = QContext::new(t, cfg.precision)?;
        CancellationMonitor::reset();
        let v = value(&ctx)?;
        let lost = CancellationMonitor::worst();
        if lost > limit as f64 {
            return Err(Error::Precision { lost, precision: cfg.precision, limit });
        }
        max_imag = max_imag.max(v.im.abs().to_f64().abs());
        let diff = &v - &ctx.exact(target);
        ts.push(num_traits::ToPrimitive::to_f64(t).unwrap_or(f64::NAN));
        errors.push(diff.abs_f64());
    }
    let floor = cfg.floor();
    let mut order: Option<f64> = None;
    let mut ok = true;
    for k in 1..errors.len() {
        let (e0, e1) = (errors[k - 1], errors[k]);
        if e1 <= floor {
            continue;
        }
        if e0 <= floor {
            ok = false;
            continue;
        }
        let o = (e0 / e1).ln() / (ts[k - 1] / ts[k]).ln();
        order = Some(order.map_or(o, |m: f64| m.min(o)));
    }
    let pass = ok && order.is_none_or(|o| o >= MIN_ORDER) && max_imag < floor;
    Ok(ConvergenceReport { check, t: ts, error: errors, order, max_imag, pass })
}

/// q-Racah factors against the truncated family's factors divided by `eta`.
pub fn check_poly_limit_def1(
    cfg: &LimitConfig,
    p: &BivTruncParams,
    n1: usize,
    n2: usize,
    z1: &Scalar,
    z2: &Scalar,
) -> Result<Vec<ConvergenceReport>> {
    if n1 + n2 > p.n {
        return Err(Error::Degree { n1, n2, max: p.n });
    }
    let (first, second) = def1_params(p, n1, z2);
    let q = quarter();
    let t1 = factor_over_eta(&first, n1, &(z1 - &q))?;
    let t2 = factor_over_eta(&second, n2, &(sign(n1 as i64) * z2 - &q))?;
    let pair = |ctx: &QContext| q_racah_pair(ctx, &QRacahParams::new(ctx, p, z1, z2), n1, n2);
    Ok(vec![
        converge(cfg, format!("qracah-def1({n1},{n2})/R1"), &t1, |ctx| Ok(pair(ctx)?.0))?,
        converge(cfg, format!("qracah-def1({n1},{n2})/R2"), &t2, |ctx| Ok(pair(ctx)?.1))?,
    ])
}

/// Askey-Wilson factors against the free family's factors divided by `eta`.
pub fn check_poly_limit_def2(
    cfg: &LimitConfig,
    p: &BivFreeParams,
    n1: usize,
    n2: usize,
    z1: &Scalar,
    z2: &Scalar,
) -> Result<Vec<ConvergenceReport>> {
    let (first, second) = def2_params(p, n1, z2);
    let q = quarter();
    let t1 = factor_over_eta(&first, n1, &(z1 - &q))?;
    let t2 = factor_over_eta(&second, n2, &(sign(n1 as i64) * z2 - &q))?;
    let pair = |ctx: &QContext| aw_pair(ctx, &QAWParams::new(ctx, p, z1, z2), n1, n2);
    Ok(vec![
        converge(cfg, format!("aw-def2({n1},{n2})/P1"), &t1, |ctx| Ok(pair(ctx)?.0))?,
        converge(cfg, format!("aw-def2({n1},{n2})/P2"), &t2, |ctx| Ok(pair(ctx)?.1))?,
    ])
}

/// All nine `C_{i,j}/(4(1+q))` at `(z1, z2)` and the eigenvalues
/// `Lambda/(4(1+q))` for the given degree pairs.
pub fn check_operator_limit(
    cfg: &LimitConfig,
    p: &BivFreeParams,
    z1: &Scalar,
    z2: &Scalar,
    degrees: &[(usize, usize)],
) -> Result<Vec<ConvergenceReport>> {
    let mut out = Vec::new();
    let four = |ctx: &QContext| Complex::from_i64(4, ctx.precision) * (&ctx.q + &ctx.one());
    for i in -1..=1i8 {
        for j in -1..=1i8 {
            let target = c_ij(p, i, j, z1, z2)?;
            out.push(converge(cfg, format!("operator/c({i},{j})"), &target, |ctx| {
                let w = QAWParams::new(ctx, p, z1, z2);
                Ok(c_table(ctx, &w, i, j) / four(ctx))
            })?);
        }
    }
    for &(n1, n2) in degrees {
        let target = eigenvalue_l2(p, n1, n2);
        out.push(converge(cfg, format!("operator/lambda({n1},{n2})"), &target, |ctx| {
            let w = QAWParams::new(ctx, p, z1, z2);
            Ok(big_lambda(ctx, &w, n1, n2) / four(ctx))
        })?);
    }
    Ok(out)
}

/// The nine rescaled `tau` coefficients against `theta`, plus the left-hand
/// multiplier against `z1 - alpha^2 + beta^2`.
pub fn check_recurrence_limit(
    cfg: &LimitConfig,
    p: &BivFreeParams,
    n1: usize,
    n2: usize,
    z1: &Scalar,
    z2: &Scalar,
) -> Result<Vec<ConvergenceReport>> {
    let theta = nine_term_coeffs(p, n1, n2)?;
    let (a, b) = (n1 as i64, n2 as i64);
    let m_self = exact_normalization(p, n1, n2, z2)?;
    let mut out = Vec::new();
    for k in 1..=9 {
        let (da, db) = NINE_TERM_OFFSETS[k - 1];
        let (na, nb) = (a + da, b + db);
        let target = theta.get(k).clone();
        let name = format!("recurrence({n1},{n2})/theta{k}");
        let rep = if na < 0 || nb < 0 || k == 5 {
            converge(cfg, name, &target, |ctx| {
                let w = QAWParams::new(ctx, p, z1, z2);
                Ok(tau(ctx, &w, k, n1, n2) / (Complex::from_i64(4, ctx.precision) * (&ctx.q + &ctx.one())))
            })?
        } else {
            let (na, nb) = (na as usize, nb as usize);
            let m_ratio = m_self.clone() / exact_normalization(p, na, nb, z2)?;
            converge(cfg, name, &target, |ctx| {
                let w = QAWParams::new(ctx, p, z1, z2);
                let n_ratio = aw_normalization(ctx, &w, na, nb) / aw_normalization(ctx, &w, n1, n2);
                let t = tau(ctx, &w, k, n1, n2)
                    / (Complex::from_i64(4, ctx.precision) * (&ctx.q + &ctx.one()));
                Ok(ctx.exact(&m_ratio) * n_ratio * t)
            })?
        };
        out.push(rep);
    }
    let lhs = z1 - &p.alpha * &p.alpha + &p.beta * &p.beta;
    out.push(converge(cfg, format!("recurrence({n1},{n2})/multiplier"), &lhs, |ctx| {
        let w = QAWParams::new(ctx, p, z1, z2);
        Ok(recurrence_multiplier(ctx, &w))
    })?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> QContext {
        QContext::new(&rat(1, 1000), 128).unwrap()
    }

    #[test]
    fn context_bounds() {
        assert!(QContext::new(&int(0), 128).is_err());
        assert!(QContext::new(&int(1), 128).is_err());
        let c = ctx();
        assert!((c.q.re.to_f64() + (0.001f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn empty_products_and_sums() {
        let c = ctx();
        let a = Complex::from_scalar(&rat(3, 7), 128);
        assert_eq!(qpoch(&a, &c.q, 0).re.to_f64(), 1.0);
        let one = c.one();
        let s = phi43(&[a.clone(), a.clone(), a.clone(), a.clone()], &[one.clone(), one.clone(), one], &c.q, 0)
            .unwrap();
        assert_eq!(s.re.to_f64(), 1.0);
        let p = BivFreeParams::new(rat(1, 2), rat(1, 3), rat(1, 5), rat(1, 7), rat(1, 11));
        let w = QAWParams::new(&c, &p, &rat(3, 7), &rat(-2, 9));
        let (p1, p2) = aw_pair(&c, &w, 0, 0).unwrap();
        assert_eq!((p1.re.to_f64(), p2.re.to_f64()), (1.0, 1.0));
        assert_eq!(zeta(&c, &w, 0, 0).re.to_f64(), 1.0);
        assert_eq!(xi(&c, 0, &w.a, &w.b, &w.c, &w.d).re.to_f64(), 1.0);
    }

    #[test]
    fn single_t_is_rejected() {
        let cfg = LimitConfig { t_values: vec![rat(1, 1000)], precision: 128 };
        let p = BivFreeParams::new(rat(1, 2), rat(1, 3), rat(1, 5), rat(1, 7), rat(1, 11));
        let r = check_poly_limit_def2(&cfg, &p, 1, 0, &rat(3, 7), &rat(-2, 9));
        assert!(matches!(r, Err(Error::Config(_))));
    }
}
