//! Univariate Bannai-Ito polynomials `B_n(x; rho1, rho2, r1, r2)`.
//!
//! The forward recurrence is the canonical evaluator. The two-series
//! representation is kept as an independent cross-check and fails with
//! [`Error::Normalization`] on the parameter sets where it is undefined.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    self, div, factorial, half, int, parity_split, pochhammer, quarter, rat, sign, Scalar,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniParams {
    pub rho1: Scalar,
    pub rho2: Scalar,
    pub r1: Scalar,
    pub r2: Scalar,
}

impl UniParams {
    pub fn new(rho1: Scalar, rho2: Scalar, r1: Scalar, r2: Scalar) -> Self {
        UniParams { rho1, rho2, r1, r2 }
    }

    /// `g = rho1 + rho2 - r1 - r2`.
    pub fn g(&self) -> Scalar {
        &self.rho1 + &self.rho2 - &self.r1 - &self.r2
    }

    pub fn swap_rho(&self) -> Self {
        UniParams::new(self.rho2.clone(), self.rho1.clone(), self.r1.clone(), self.r2.clone())
    }

    pub fn swap_r(&self) -> Self {
        UniParams::new(self.rho1.clone(), self.rho2.clone(), self.r2.clone(), self.r1.clone())
    }
}

/// `(A_n, C_n)`. `C_0 = 0` regardless of `g`.
pub fn recurrence_coeffs(p: &UniParams, n: usize) -> Result<(Scalar, Scalar)> {
    let g = p.g();
    let nn = int(n as i64);
    let two = int(2);
    let a_den = int(4) * (&nn + &g + int(1));
    let c_den = int(4) * (&nn + &g);
    let (a_num, c_num) = if n % 2 == 0 {
        (
            (&nn + &two * &p.rho1 - &two * &p.r1 + int(1))
                * (&nn + &two * &p.rho1 - &two * &p.r2 + int(1)),
            -(&nn * (&nn - &two * &p.r1 - &two * &p.r2)),
        )
    } else {
        (
            (&nn + &two * &g + int(1)) * (&nn + &two * &p.rho1 + &two * &p.rho2 + int(1)),
            -((&nn + &two * &p.rho2 - &two * &p.r2) * (&nn + &two * &p.rho2 - &two * &p.r1)),
        )
    };
    let a = div(&a_num, &a_den, &format!("n+g+1 at n={n}"))?;
    let c = if n == 0 {
        Scalar::zero()
    } else {
        div(&c_num, &c_den, &format!("n+g at n={n}"))?
    };
    Ok((a, c))
}

/// `u_n = A_{n-1} C_n`, the coefficient of `B_{n-1}` in the recurrence.
pub fn u_coeff(p: &UniParams, n: usize) -> Result<Scalar> {
    if n == 0 {
        return Ok(Scalar::zero());
    }
    let (a_prev, _) = recurrence_coeffs(p, n - 1)?;
    let (_, c) = recurrence_coeffs(p, n)?;
    Ok(a_prev * c)
}

/// `B_0(x), ..., B_nmax(x)` by the forward recurrence.
pub fn eval_sequence(p: &UniParams, nmax: usize, x: &Scalar) -> Result<Vec<Scalar>> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(Scalar::one());
    let mut prev_a = Scalar::zero();
    for k in 0..nmax {
        let (a, c) = recurrence_coeffs(p, k)?;
        let mut next = (x - &p.rho1 + &a + &c) * &out[k];
        if k > 0 {
            next -= &prev_a * &c * &out[k - 1];
        }
        out.push(next);
        prev_a = a;
    }
    Ok(out)
}

pub fn eval_recurrence(p: &UniParams, n: usize, x: &Scalar) -> Result<Scalar> {
    Ok(eval_sequence(p, n, x)?.pop().expect("nonempty"))
}

/// `eta_n`, the factor turning the two-series expression monic.
pub fn eta(p: &UniParams, n: usize) -> Result<Scalar> {
    let s = parity_split(n);
    let h = half();
    let num = sign(n as i64)
        * pochhammer(&(&p.rho1 - &p.r1 + &h), s.n_e + s.n_p)
        * pochhammer(&(&p.rho2 - &p.r1 + &h), s.n_e + s.n_p)
        * pochhammer(&(int(1) - &p.r1 - &p.r2), s.n_e);
    let den = pochhammer(&(int(s.n_e as i64) + p.g() + int(1)), s.n_e + s.n_p);
    if den.is_zero() {
        return Err(Error::Normalization(format!("(n_e+g+1)_(n_e+n_p) vanishes at n={n}")));
    }
    if num.is_zero() {
        return Err(Error::Normalization(format!("eta_{n} vanishes")));
    }
    Ok(num / den)
}

/// Terminating `4F3(upper; lower; 1)` summed over `k < terms`.
fn hyper_4f3(upper: &[Scalar; 4], lower: &[Scalar; 3], terms: usize) -> Result<Scalar> {
    let mut sum = Scalar::zero();
    let mut term = Scalar::one();
    for k in 0..terms {
        sum += &term;
        let kk = int(k as i64);
        let mut ratio = Scalar::one();
        for a in upper {
            ratio *= a + &kk;
        }
        for b in lower {
            let d = b + &kk;
            if d.is_zero() && k + 1 < terms {
                return Err(Error::Normalization(format!("lower parameter {b} hits zero")));
            }
            if !d.is_zero() {
                ratio /= d;
            }
        }
        term *= ratio / (&kk + int(1));
    }
    Ok(sum)
}

/// `B_n(x)` as `eta_n` times the two terminating series.
pub fn eval_hypergeometric(p: &UniParams, n: usize, x: &Scalar) -> Result<Scalar> {
    let s = parity_split(n);
    let h = half();
    let three_h = rat(3, 2);
    let g = p.g();
    let e = eta(p, n)?;
    let ne = int(s.n_e as i64);
    let np = int(s.n_p as i64);
    let l0 = int(1) - &p.r1 - &p.r2;
    let l1 = &p.rho1 - &p.r1 + &h;
    let l2 = &p.rho2 - &p.r1 + &h;
    for (b, name) in [(&l1, "rho1-r1+1/2"), (&l2, "rho2-r1+1/2")] {
        if b.is_zero() {
            return Err(Error::Normalization(format!("{name} = 0")));
        }
    }
    let f1 = hyper_4f3(
        &[-&ne, &ne + &g + int(1), x - &p.r1 + &h, -x - &p.r1 + &h],
        &[l0.clone(), l1.clone(), l2.clone()],
        s.n_e + 1,
    )?;
    let m = s.n_e + s.n_p;
    let f2 = if m == 0 {
        Scalar::zero()
    } else {
        hyper_4f3(
            &[
                -&ne - &np + int(1),
                &ne + &np + &g + int(1),
                x - &p.r1 + &three_h,
                -x - &p.r1 + &h,
            ],
            &[l0, &p.rho1 - &p.r1 + &three_h, &p.rho2 - &p.r1 + &three_h],
            m,
        )?
    };
    let pre = sign(n as i64) * (&ne + &np + &g * &np) * (x - &p.r1 + &h) / (&l1 * &l2);
    Ok(e * (f1 + pre * f2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TruncationType {
    TypeI { j: u8, l: u8, n: usize },
    TypeII { n: usize },
    TypeIII { n: usize },
    TypeIVInadmissible { n: usize },
    None,
}

impl TruncationType {
    pub fn size(&self) -> Option<usize> {
        match *self {
            TruncationType::TypeI { n, .. }
            | TruncationType::TypeII { n }
            | TruncationType::TypeIII { n }
            | TruncationType::TypeIVInadmissible { n } => Some(n),
            TruncationType::None => None,
        }
    }
}

/// Which finite-orthogonality condition holds for an `N+1` point family.
pub fn detect_truncation(p: &UniParams, n: usize) -> TruncationType {
    let target = rat(n as i64 + 1, 2);
    if n % 2 == 0 {
        for (j, rj) in [(1u8, &p.r1), (2, &p.r2)] {
            for (l, rl) in [(1u8, &p.rho1), (2, &p.rho2)] {
                if rj - rl == target {
                    return TruncationType::TypeI { j, l, n };
                }
            }
        }
        TruncationType::None
    } else if &p.rho1 + &p.rho2 == -&target {
        TruncationType::TypeII { n }
    } else if &p.r1 + &p.r2 == target {
        TruncationType::TypeIII { n }
    } else if p.g() == -&target {
        TruncationType::TypeIVInadmissible { n }
    } else {
        TruncationType::None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityData {
    #[serde(with = "exact::serde_scalars")]
    pub grid: Vec<Scalar>,
    #[serde(with = "exact::serde_scalars")]
    pub weights: Vec<Scalar>,
    #[serde(with = "exact::serde_scalars")]
    pub norms: Vec<Scalar>,
}

fn fact(n: i64, what: &str) -> Result<Scalar> {
    if n < 0 {
        return Err(Error::Pole(format!("negative factorial {what}")));
    }
    Ok(factorial(n as usize))
}

fn len(n: i64) -> usize {
    debug_assert!(n >= 0, "negative Pochhammer length");
    n.max(0) as usize
}

/// Weight at grid index `k` for the grids of types i) and ii).
fn weight(p: &UniParams, k: usize) -> Result<Scalar> {
    let s = parity_split(k);
    let h = half();
    let kk = s.n_e + s.n_p;
    let num = sign(k as i64)
        * pochhammer(&(&p.rho1 - &p.r1 + &h), kk)
        * pochhammer(&(&p.rho1 - &p.r2 + &h), kk)
        * pochhammer(&(&p.rho1 + &p.rho2 + int(1)), s.n_e)
        * pochhammer(&(int(2) * &p.rho1 + int(1)), s.n_e);
    let den = factorial(s.n_e)
        * pochhammer(&(&p.rho1 + &p.r1 + &h), kk)
        * pochhammer(&(&p.rho1 + &p.r2 + &h), kk)
        * pochhammer(&(&p.rho1 - &p.rho2 + int(1)), s.n_e);
    div(&num, &den, &format!("weight denominator at k={k}"))
}

fn norm_type_i(p: &UniParams, n: usize, big_n: usize) -> Result<Scalar> {
    let s = parity_split(n);
    let (ne, np) = (s.n_e as i64, s.n_p as i64);
    let big_ne = (big_n / 2) as i64;
    let g = p.g();
    let h = half();
    let one = int(1);
    let num = factorial(s.n_e)
        * factorial(big_ne as usize)
        * pochhammer(&(&one + int(2) * &p.rho1), len(big_ne))
        * pochhammer(&(&one + &p.rho1 + &p.rho2), s.n_e)
        * pochhammer(&(&one + int(ne) + &g), len(big_ne - ne))
        * pochhammer(&(&h + &p.rho1 - &p.r2), len(ne + np))
        * pochhammer(&(&h + &p.rho2 - &p.r2), len(ne + np));
    let sq = pochhammer(&(&one + int(ne) + &g), len(ne + np));
    let den = fact(big_ne - ne - np, "(N_e-n_e-n_p)!")?
        * pochhammer(&(&h + &p.rho1 + &p.r2), len(big_ne - ne))
        * pochhammer(&(&h + int(ne + np) + &p.rho2 - &p.r1), len(big_ne - ne - np))
        * &sq
        * &sq;
    div(&num, &den, &format!("type i norm denominator at n={n}"))
}

fn norm_type_ii(p: &UniParams, n: usize, big_n: usize) -> Result<Scalar> {
    let s = parity_split(n);
    let (ne, np) = (s.n_e as i64, s.n_p as i64);
    let big_ne = (big_n / 2) as i64;
    let g = p.g();
    let h = half();
    let one = int(1);
    let num = factorial(s.n_e)
        * factorial(big_ne as usize)
        * pochhammer(&(&one + int(2) * &p.rho1), len(big_ne + 1))
        * pochhammer(&(&one - &p.r1 - &p.r2), s.n_e)
        * pochhammer(&(&one + int(ne) + &g), len(big_ne + 1 - ne))
        * pochhammer(&(&h + &p.rho1 - &p.r1), len(ne + np))
        * pochhammer(&(&h + &p.rho1 - &p.r2), len(ne + np));
    let sq = pochhammer(&(&one + int(ne) + &g), len(ne + np));
    let den = fact(big_ne - ne, "(N_e-n_e)!")?
        * pochhammer(&(&h + &p.rho1 + &p.r1), len(big_ne + 1 - ne - np))
        * pochhammer(&(&h + int(ne + np) + &p.rho2 - &p.r2), len(big_ne + 1 - ne - np))
        * &sq
        * &sq;
    div(&num, &den, &format!("type ii norm denominator at n={n}"))
}

fn norm_type_iii(p: &UniParams, n: usize, big_n: usize) -> Result<Scalar> {
    let s = parity_split(n);
    let (ne, np) = (s.n_e as i64, s.n_p as i64);
    let big_ne = (big_n / 2) as i64;
    let h = half();
    let bn = int(big_ne);
    let sum = &p.rho1 + &p.rho2 - &bn;
    let num = factorial(s.n_e)
        * factorial(big_ne as usize)
        * pochhammer(&(int(2) * &p.r2 - int(big_n as i64)), len(big_ne + 1))
        * pochhammer(&sum, len(big_ne + 1 + ne))
        * pochhammer(&sum, s.n_e)
        * pochhammer(&(&p.r2 + &p.rho1 - &h - &bn), len(ne + np))
        * pochhammer(&(&p.r2 + &p.rho2 - &h - &bn), len(ne + np));
    let sq = pochhammer(&sum, n);
    let den = fact(big_ne - ne, "(N_e-n_e)!")?
        * &sq
        * &sq
        * pochhammer(&(&p.r2 - &p.rho1 - &h - &bn), len(big_ne + 1 - ne - np))
        * pochhammer(&(&p.rho2 - &p.r2 + &h + int(ne + np)), len(big_ne + 1 - ne - np));
    div(&num, &den, &format!("type iii norm denominator at n={n}"))
}

/// Puts a type i) family into the `j = l = 1` form using the
/// `rho1 <-> rho2`, `r1 <-> r2` symmetry of the polynomials.
pub fn canonical_type_i(p: &UniParams, j: u8, l: u8) -> UniParams {
    let mut q = p.clone();
    if j == 2 {
        q = q.swap_r();
    }
    if l == 2 {
        q = q.swap_rho();
    }
    q
}

/// Grid, weights and norms of the finite orthogonality relation.
pub fn orthogonality_data(p: &UniParams, trunc: &TruncationType) -> Result<OrthogonalityData> {
    let big_n = match trunc.size() {
        Some(n) => n,
        None => return Err(Error::Inadmissible("no truncation condition holds".into())),
    };
    let target = rat(big_n as i64 + 1, 2);
    let consistent = match trunc {
        TruncationType::TypeI { j, l, .. } => {
            let c = canonical_type_i(p, *j, *l);
            &c.r1 - &c.rho1 == target
        }
        TruncationType::TypeII { .. } => &p.rho1 + &p.rho2 == -&target,
        TruncationType::TypeIII { .. } => &p.r1 + &p.r2 == target,
        TruncationType::TypeIVInadmissible { .. } => {
            return Err(Error::Inadmissible("type iv) makes u_n singular".into()))
        }
        TruncationType::None => false,
    };
    if !consistent {
        return Err(Error::Inadmissible(format!("parameters do not satisfy {trunc:?}")));
    }
    let q = quarter();
    let ks = 0..=big_n;
    match trunc {
        TruncationType::TypeI { j, l, .. } => {
            let c = canonical_type_i(p, *j, *l);
            let grid = ks
                .clone()
                .map(|k| sign(k as i64) * (rat(k as i64, 2) + &c.rho1 + &q) - &q)
                .collect();
            let weights = ks.clone().map(|k| weight(&c, k)).collect::<Result<_>>()?;
            let norms = ks.map(|n| norm_type_i(&c, n, big_n)).collect::<Result<_>>()?;
            Ok(OrthogonalityData { grid, weights, norms })
        }
        TruncationType::TypeII { .. } => {
            let grid = ks
                .clone()
                .map(|k| sign(k as i64) * (rat(k as i64, 2) + &p.rho1 + &q) - &q)
                .collect();
            let weights = ks.clone().map(|k| weight(p, k)).collect::<Result<_>>()?;
            let norms = ks.map(|n| norm_type_ii(p, n, big_n)).collect::<Result<_>>()?;
            Ok(OrthogonalityData { grid, weights, norms })
        }
        TruncationType::TypeIII { .. } => {
            let grid = ks
                .clone()
                .map(|k| sign(k as i64) * (&p.r1 - rat(k as i64, 2) - &q) - &q)
                .collect();
            let dual = UniParams::new(-&p.r1, -&p.r2, -&p.rho1, -&p.rho2);
            let weights = ks.clone().map(|k| weight(&dual, k)).collect::<Result<_>>()?;
            let norms = ks.map(|n| norm_type_iii(p, n, big_n)).collect::<Result<_>>()?;
            Ok(OrthogonalityData { grid, weights, norms })
        }
        _ => unreachable!(),
    }
}

/// `G[n][m] = sum_k w_k B_n(x_k) B_m(x_k)`.
pub fn gram_matrix(p: &UniParams, data: &OrthogonalityData) -> Result<Vec<Vec<Scalar>>> {
    let big_n = data.grid.len() - 1;
    let values = data
        .grid
        .iter()
        .map(|x| eval_sequence(p, big_n, x))
        .collect::<Result<Vec<_>>>()?;
    let mut g = vec![vec![Scalar::zero(); big_n + 1]; big_n + 1];
    for (k, w) in data.weights.iter().enumerate() {
        for n in 0..=big_n {
            let wn = w * &values[k][n];
            for m in n..=big_n {
                g[n][m] += &wn * &values[k][m];
            }
        }
    }
    for n in 0..=big_n {
        for m in 0..n {
            g[n][m] = g[m][n].clone();
        }
    }
    Ok(g)
}

/// Applies the first order Dunkl operator
/// `(x-rho1)(x-rho2)/(2x) (1-R) + (x-r1+1/2)(x-r2+1/2)/(2x+1) (T R - 1)`
/// where `R f(x) = f(-x)` and `T R f(x) = f(-x-1)`.
pub fn dunkl_apply<F>(p: &UniParams, f: F, x: &Scalar) -> Result<Scalar>
where
    F: Fn(&Scalar) -> Result<Scalar>,
{
    let h = half();
    let k1 = div(
        &((x - &p.rho1) * (x - &p.rho2)),
        &(int(2) * x),
        "2x",
    )?;
    let k2 = div(
        &((x - &p.r1 + &h) * (x - &p.r2 + &h)),
        &(int(2) * x + int(1)),
        "2x+1",
    )?;
    let fx = f(x)?;
    Ok(k1 * (&fx - f(&-x)?) + k2 * (f(&(-x - int(1)))? - &fx))
}

pub fn dunkl_eigenvalue(p: &UniParams, n: usize) -> Scalar {
    if n % 2 == 0 {
        rat(n as i64, 2)
    } else {
        &p.r1 + &p.r2 - &p.rho1 - &p.rho2 - rat(n as i64 + 1, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros() -> UniParams {
        UniParams::new(int(0), int(0), int(0), int(0))
    }

    #[test]
    fn coefficients_at_origin() {
        let (a0, c0) = recurrence_coeffs(&zeros(), 0).unwrap();
        assert_eq!(a0, rat(1, 4));
        assert_eq!(c0, int(0));
        let (_, c1) = recurrence_coeffs(&zeros(), 1).unwrap();
        assert_eq!(c1, rat(-1, 4));
    }

    #[test]
    fn pole_in_a() {
        // g = -1 puts n+g+1 = 0 at n = 0
        let p = UniParams::new(int(0), int(0), int(1), int(0));
        assert!(matches!(recurrence_coeffs(&p, 0), Err(Error::Pole(_))));
    }

    #[test]
    fn first_degree() {
        let p = UniParams::new(rat(1, 3), rat(2, 7), rat(-1, 5), rat(3, 4));
        let x = rat(5, 11);
        let (a0, _) = recurrence_coeffs(&p, 0).unwrap();
        assert_eq!(eval_recurrence(&p, 1, &x).unwrap(), &x - &p.rho1 + a0);
        assert_eq!(eval_recurrence(&p, 0, &x).unwrap(), int(1));
    }

    #[test]
    fn series_matches_recurrence_at_spec_point() {
        let p = UniParams::new(int(1), rat(1, 2), rat(1, 4), rat(1, 8));
        for (n, x) in [(4, int(2)), (3, rat(7, 3))] {
            assert_eq!(
                eval_hypergeometric(&p, n, &x).unwrap(),
                eval_recurrence(&p, n, &x).unwrap()
            );
        }
        assert_eq!(eval_hypergeometric(&p, 0, &rat(9, 2)).unwrap(), int(1));
    }

    #[test]
    fn series_rejects_zero_lower_parameter() {
        let p = UniParams::new(int(0), rat(1, 3), rat(1, 2), rat(1, 5));
        assert!(matches!(
            eval_hypergeometric(&p, 2, &rat(1, 3)),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn truncation_detection() {
        let p = UniParams::new(int(0), rat(1, 3), rat(3, 2), rat(1, 5));
        assert_eq!(detect_truncation(&p, 2), TruncationType::TypeI { j: 1, l: 1, n: 2 });
        let p = UniParams::new(rat(1, 3), rat(1, 7), int(1), int(1));
        assert_eq!(detect_truncation(&p, 3), TruncationType::TypeIII { n: 3 });
        // g = -2 with N = 3
        let p = UniParams::new(rat(1, 3), rat(1, 7), rat(1, 3), rat(15, 7));
        assert_eq!(detect_truncation(&p, 3), TruncationType::TypeIVInadmissible { n: 3 });
        let p = UniParams::new(rat(1, 3), rat(-7, 3), rat(1, 5), rat(1, 7));
        assert_eq!(detect_truncation(&p, 3), TruncationType::TypeII { n: 3 });
        assert_eq!(detect_truncation(&zeros(), 2), TruncationType::None);
    }

    #[test]
    fn type_i_edge_values() {
        let p = UniParams::new(int(0), rat(1, 3), rat(3, 2), rat(1, 5));
        let data = orthogonality_data(&p, &detect_truncation(&p, 2)).unwrap();
        assert_eq!(data.grid[0], p.rho1);
        assert_eq!(data.weights[0], int(1));
        assert_eq!(data.grid.len(), 3);
    }

    #[test]
    fn type_iv_is_rejected() {
        let p = UniParams::new(rat(1, 3), rat(1, 7), rat(1, 3), rat(15, 7));
        let t = detect_truncation(&p, 3);
        assert!(matches!(orthogonality_data(&p, &t), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn dunkl_low_degrees() {
        let p = UniParams::new(rat(1, 3), rat(2, 7), rat(-1, 5), rat(3, 4));
        let x = rat(5, 11);
        let b0 = |_: &Scalar| Ok(int(1));
        assert_eq!(dunkl_apply(&p, b0, &x).unwrap(), int(0));
        let b1 = |y: &Scalar| eval_recurrence(&p, 1, y);
        let expected = (&p.r1 + &p.r2 - &p.rho1 - &p.rho2 - int(1)) * b1(&x).unwrap();
        assert_eq!(dunkl_apply(&p, b1, &x).unwrap(), expected);
        let b2 = |y: &Scalar| eval_recurrence(&p, 2, y);
        assert_eq!(dunkl_apply(&p, b2, &x).unwrap(), b2(&x).unwrap());
        assert!(matches!(dunkl_apply(&p, b0, &int(0)), Err(Error::Pole(_))));
        assert!(matches!(dunkl_apply(&p, b0, &rat(-1, 2)), Err(Error::Pole(_))));
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(dunkl_eigenvalue(&zeros(), 0), int(0));
        assert_eq!(dunkl_eigenvalue(&zeros(), 4), int(2));
        assert_eq!(dunkl_eigenvalue(&zeros(), 1), int(-1));
    }
}
