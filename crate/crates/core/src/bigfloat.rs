//! Binary floating point at a configurable mantissa width, plus a minimal
//! complex type on top of it, for the q -> -1 limit experiments.
//!
//! Every complex addition records how many leading bits cancelled
//! (`log2 max(|a|,|b|) - log2 |a+b|`). The running maximum lives in a
//! thread-local monitor; see [`CancellationMonitor`].

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

use crate::exact::Scalar;

pub const DEFAULT_PRECISION: usize = 256;

type Repr = FBig<HalfEven, 2>;

#[derive(Clone, Debug)]
pub struct BigFloat {
    v: Repr,
}

fn to_ibig(n: &num_bigint::BigInt) -> IBig {
    n.to_string().parse().expect("decimal integer")
}

impl BigFloat {
    pub fn zero(precision: usize) -> Self {
        BigFloat { v: Repr::ZERO.with_precision(precision).value() }
    }

    pub fn from_i64(n: i64, precision: usize) -> Self {
        BigFloat { v: Repr::from(n).with_precision(precision).value() }
    }

    /// Nearest float to an exact rational.
    pub fn from_scalar(x: &Scalar, precision: usize) -> Self {
        let n = Repr::from(to_ibig(x.numer())).with_precision(precision + 8).value();
        let d = Repr::from(to_ibig(x.denom())).with_precision(precision + 8).value();
        BigFloat { v: (n / d).with_precision(precision).value() }
    }

    pub fn precision(&self) -> usize {
        self.v.precision()
    }

    pub fn is_zero(&self) -> bool {
        self.v.repr().significand() == &IBig::ZERO
    }

    pub fn exp(&self) -> Self {
        BigFloat { v: self.v.exp() }
    }

    pub fn abs(&self) -> Self {
        if self.v.repr().significand() < &IBig::ZERO {
            -self
        } else {
            self.clone()
        }
    }

    /// `log2 |x|` to within a fraction of a bit; `-inf` at zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let r = self.v.repr();
        let digits = r.digits() as i64;
        let lead = if digits > 52 {
            let shifted: IBig = r.significand() >> (digits - 52) as usize;
            let s: i64 = shifted.try_into().unwrap_or(1);
            (s.unsigned_abs() as f64).log2() + (digits - 52) as f64
        } else {
            let s: i64 = r.significand().clone().try_into().unwrap_or(1);
            (s.unsigned_abs() as f64).log2()
        };
        lead + r.exponent() as f64
    }

    pub fn to_f64(&self) -> f64 {
        self.v.to_f64().value()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.v.clone().with_base_and_precision::<10>(digits).value().to_string()
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.v < other.v
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision() as f64) * std::f64::consts::LOG10_2).floor() as usize;
        write!(f, "{}", self.to_decimal(digits.max(1)))
    }
}

macro_rules! real_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<'a> $tr<&'a BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &'a BigFloat) -> BigFloat {
                BigFloat { v: &self.v $op &rhs.v }
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                BigFloat { v: self.v $op rhs.v }
            }
        }
    };
}
real_op!(Add, add, +);
real_op!(Sub, sub, -);
real_op!(Mul, mul, *);
real_op!(Div, div, /);

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { v: -self.v.clone() }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { v: -self.v }
    }
}

thread_local! {
    static WORST: Cell<f64> = const { Cell::new(0.0) };
}

/// Tracks the worst cancellation seen by complex additions on this thread.
pub struct CancellationMonitor;

impl CancellationMonitor {
    pub fn reset() {
        WORST.with(|w| w.set(0.0));
    }

    pub fn worst() -> f64 {
        WORST.with(|w| w.get())
    }

    fn record(bits: f64) {
        WORST.with(|w| {
            if bits > w.get() {
                w.set(bits)
            }
        });
    }
}

#[derive(Clone, Debug)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Complex { re, im }
    }

    pub fn real(re: BigFloat) -> Self {
        let p = re.precision();
        Complex { re, im: BigFloat::zero(p) }
    }

    pub fn imag(im: BigFloat) -> Self {
        let p = im.precision();
        Complex { re: BigFloat::zero(p), im }
    }

    pub fn from_i64(n: i64, precision: usize) -> Self {
        Complex::real(BigFloat::from_i64(n, precision))
    }

    pub fn from_scalar(x: &Scalar, precision: usize) -> Self {
        Complex::real(BigFloat::from_scalar(x, precision))
    }

    pub fn one(precision: usize) -> Self {
        Complex::from_i64(1, precision)
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `log2 |z|`, accurate to half a bit.
    pub fn log2_abs(&self) -> f64 {
        self.re.log2_abs().max(self.im.log2_abs())
    }

    /// `|z|` as an f64 (enough for error reporting).
    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    /// `|z|` at working precision, via the squared modulus.
    pub fn norm_sqr(&self) -> BigFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }

    /// Integer power, negative exponents allowed.
    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one(self.precision());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn tracked_sum(a: &Complex, b: &Complex, negate_b: bool) -> Complex {
        let (re, im) = if negate_b {
            (&a.re - &b.re, &a.im - &b.im)
        } else {
            (&a.re + &b.re, &a.im + &b.im)
        };
        let out = Complex { re, im };
        if !out.is_zero() {
            let big = a.log2_abs().max(b.log2_abs());
            let lost = big - out.log2_abs();
            if lost > 0.0 {
                CancellationMonitor::record(lost);
            }
        }
        out
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &'a Complex) -> Complex {
        Complex::tracked_sum(self, rhs, false)
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &'a Complex) -> Complex {
        Complex::tracked_sum(self, rhs, true)
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &'a Complex) -> Complex {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        Complex { re, im }
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &'a Complex) -> Complex {
        let d = rhs.norm_sqr();
        let re = &(&self.re * &rhs.re) + &(&self.im * &rhs.im);
        let im = &(&self.im * &rhs.re) - &(&self.re * &rhs.im);
        Complex { re: &re / &d, im: &im / &d }
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -&self.re, im: -&self.im }
    }
}

macro_rules! owned_complex_op {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &'a Complex) -> Complex {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Complex> for &'a Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                self.$m(&rhs)
            }
        }
    };
}
owned_complex_op!(Add, add);
owned_complex_op!(Sub, sub);
owned_complex_op!(Mul, mul);
owned_complex_op!(Div, div);

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -&self
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}
