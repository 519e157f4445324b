//! Exact rational scalars and the combinatorial primitives built on them.
//!
//! [`Scalar`] is `num_rational::BigRational`, which is kept in lowest terms
//! with a positive denominator after every operation, so `==` is structural.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `n/d` for small literals. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Scalar {
    rat(1, 2)
}

pub fn quarter() -> Scalar {
    rat(1, 4)
}

/// `(-1)^n`.
pub fn sign(n: i64) -> Scalar {
    if n.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Division that reports a vanishing denominator by name.
pub fn div(num: &Scalar, den: &Scalar, what: &str) -> Result<Scalar> {
    if den.is_zero() {
        return Err(Error::Pole(what.to_string()));
    }
    Ok(num / den)
}

/// Rising factorial `a (a+1) ... (a+n-1)`; `1` for `n = 0`.
pub fn pochhammer(a: &Scalar, n: usize) -> Scalar {
    let mut acc = Scalar::one();
    let mut x = a.clone();
    for _ in 0..n {
        if x.is_zero() {
            return Scalar::zero();
        }
        acc *= &x;
        x += Scalar::one();
    }
    acc
}

/// Pochhammer symbol extended to negative lengths:
/// `(a)_{-m} = 1 / ((a-1)(a-2)...(a-m))`.
pub fn pochhammer_signed(a: &Scalar, n: i64) -> Result<Scalar> {
    if n >= 0 {
        return Ok(pochhammer(a, n as usize));
    }
    let mut den = Scalar::one();
    for k in 1..=(-n) {
        den *= a - int(k);
    }
    div(&Scalar::one(), &den, &format!("({a})_{{{n}}}"))
}

pub fn factorial(n: usize) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Scalar::from_integer(acc)
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Scalar {
    if n < 0 || k < 0 || k > n {
        return Scalar::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Scalar::from_integer(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParitySplit {
    pub n_e: usize,
    pub n_p: usize,
}

impl ParitySplit {
    pub fn whole(self) -> usize {
        2 * self.n_e + self.n_p
    }
}

pub fn parity_split(n: usize) -> ParitySplit {
    ParitySplit {
        n_e: n / 2,
        n_p: n % 2,
    }
}

/// `1` for even `n`, `0` for odd.
pub fn even_indicator(n: i64) -> Scalar {
    if n.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

/// Parses `"p/q"`, `"p"`, a plain decimal such as `"-0.25"`, or scientific
/// notation such as `"1e-4"`. Every form is read exactly.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if !s.contains('/') {
        if let Some((m, e)) = s.split_once(['e', 'E']) {
            let m = parse_scalar(m)?;
            let e: i32 = e.parse().map_err(|_| bad())?;
            let p = Scalar::from_integer(BigInt::from(10u32).pow(e.unsigned_abs()));
            return Ok(if e < 0 { m / p } else { m * p });
        }
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Scalar::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let digits: BigInt = format!("{}{}", ip.trim_start_matches(['-', '+']), fp)
            .parse()
            .map_err(|_| bad())?;
        let v = Scalar::new(digits, BigInt::from(10u32).pow(fp.len() as u32));
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Scalar::from_integer(n))
}

/// `"num/den"`, with the denominator omitted when it is 1.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

/// Rough `log2 |x|` for diagnostics; `-inf` at zero.
pub fn log2_abs(x: &Scalar) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n = x.numer().abs();
    let d = x.denom();
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 {
        (n.clone(), d << shift as usize)
    } else {
        (n << (-shift) as usize, d.clone())
    };
    let ratio = Scalar::new(n2, d2);
    let f = num_traits::ToPrimitive::to_f64(&ratio).unwrap_or(1.0);
    shift as f64 + f.log2()
}

/// Serde adapter writing a scalar as its `"num/den"` string.
pub mod serde_scalar {
    use super::{format_scalar, parse_scalar, Scalar};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_scalar(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for a list of scalars.
pub mod serde_scalars {
    use super::{format_scalar, parse_scalar, Scalar};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_scalar))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Scalar>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_scalar(s).map_err(D::Error::custom)).collect()
    }
}
