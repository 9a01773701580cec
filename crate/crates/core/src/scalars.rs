//! Arbitrary-precision scalars and the q-number primitives.
//!
//! Every value in the crate is derived from a [`ParamContext`], which fixes
//! the deformation parameter `q`, the weight parameter `a`, the derived
//! twist `t = q^a - q^-a` and the working precision. Reals are MPFR floats
//! carrying the context precision; [`Complex`] is a thin pair of them.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Assign;

use crate::error::{Error, Result};

/// Real scalar at context precision.
pub type Real = rug::Float;

/// Extra binary digits carried beyond the requested decimal precision.
pub const GUARD_BITS: u32 = 64;

/// Smallest accepted working precision, in decimal digits.
pub const MIN_DIGITS: u32 = 30;

/// Global parameters `(q, a, t, digits)`.
#[derive(Clone)]
pub struct ParamContext {
    q: Real,
    a: Real,
    t: Real,
    digits: u32,
    prec: u32,
    source: Option<(String, String)>,
}

impl fmt::Debug for ParamContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamContext")
            .field("q", &self.q.to_string_radix(10, Some(20)))
            .field("a", &self.a.to_string_radix(10, Some(20)))
            .field("digits", &self.digits)
            .finish()
    }
}

/// Binary precision used for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

impl ParamContext {
    /// Builds a context from decimal strings, so that inputs like `"1.3"` are
    /// read at full working precision rather than through `f64`.
    pub fn parse(q: &str, a: &str, digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidParameter(format!("digits must be at least {MIN_DIGITS}, got {digits}")));
        }
        let prec = bits_for_digits(digits);
        let qv = parse_real(prec, q)?;
        let av = parse_real(prec, a)?;
        let mut ctx = Self::from_reals(qv, av, digits)?;
        ctx.source = Some((q.trim().to_owned(), a.trim().to_owned()));
        Ok(ctx)
    }

    /// Builds a context from already-rounded values.
    pub fn from_reals(q: Real, a: Real, digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidParameter(format!("digits must be at least {MIN_DIGITS}, got {digits}")));
        }
        let prec = bits_for_digits(digits);
        let q = Real::with_val(prec, q);
        let a = Real::with_val(prec, a);
        if !(q.is_finite() && a.is_finite()) {
            return Err(Error::InvalidParameter("q and a must be finite".into()));
        }
        if q <= 0 || q >= 1 {
            return Err(Error::InvalidParameter(format!(
                "q must lie in (0, 1), got {}",
                q.to_string_radix(10, Some(12))
            )));
        }
        let qa = q.clone().pow(&a);
        let qma = q.clone().pow(-a.clone());
        let t = qa - qma;
        Ok(Self { q, a, t, digits, prec, source: None })
    }

    /// The same parameters at a different working precision. Decimal inputs
    /// are re-read from their source strings when available.
    pub fn with_digits(&self, digits: u32) -> Result<Self> {
        match &self.source {
            Some((q, a)) => Self::parse(q, a, digits),
            None => Self::from_reals(self.q.clone(), self.a.clone(), digits),
        }
    }

    pub fn q(&self) -> &Real {
        &self.q
    }

    pub fn a(&self) -> &Real {
        &self.a
    }

    /// `t = [[a]] = q^a - q^-a`.
    pub fn t(&self) -> &Real {
        &self.t
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision of every value created by this context.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Converts anything MPFR can assign from into a context real.
    pub fn real<T>(&self, v: T) -> Real
    where
        Real: Assign<T>,
    {
        Real::with_val(self.prec, v)
    }

    pub fn parse_real(&self, s: &str) -> Result<Real> {
        parse_real(self.prec, s)
    }

    pub fn zero(&self) -> Real {
        Real::new(self.prec)
    }

    pub fn one(&self) -> Real {
        self.real(1)
    }

    /// `10^-(digits - loss)`: the tolerance used by checks that may lose
    /// `loss` digits to cancellation.
    pub fn tol(&self, loss: u32) -> Real {
        let exp = i64::from(self.digits) - i64::from(loss);
        self.ten_pow(-exp)
    }

    pub fn ten_pow(&self, exp: i64) -> Real {
        self.real(10).pow(exp as i32)
    }

    /// `q^x`.
    pub fn qpow(&self, x: &Real) -> Real {
        self.q.clone().pow(x)
    }

    /// `q^k` for an integer exponent.
    pub fn qpow_i(&self, k: i64) -> Real {
        self.q.clone().pow(k as i32)
    }

    /// `[x] = (q^x - q^-x) / (q - q^-1)`.
    pub fn qbracket(&self, x: &Real) -> Real {
        let num = self.qdouble(x);
        let den = self.qdouble(&self.one());
        num / den
    }

    /// `[[x]] = q^x - q^-x`.
    pub fn qdouble(&self, x: &Real) -> Real {
        let plus = self.qpow(x);
        let minus = self.qpow(&Real::with_val(self.prec, -x));
        plus - minus
    }

    /// `{x} = q^x + q^-x`.
    pub fn qbrace(&self, x: &Real) -> Real {
        let plus = self.qpow(x);
        let minus = self.qpow(&Real::with_val(self.prec, -x));
        plus + minus
    }

    /// `{k}` for an integer argument.
    pub fn qbrace_i(&self, k: i64) -> Real {
        self.qbrace(&self.real(k))
    }

    /// `{m·a + k}`, the argument assembled without rounding the integer part
    /// into `a` twice.
    pub fn qbrace_lin(&self, a_coeff: i64, k: i64) -> Real {
        self.qbrace(&self.lin(a_coeff, k))
    }

    pub fn qbracket_lin(&self, a_coeff: i64, k: i64) -> Real {
        self.qbracket(&self.lin(a_coeff, k))
    }

    pub fn qdouble_lin(&self, a_coeff: i64, k: i64) -> Real {
        self.qdouble(&self.lin(a_coeff, k))
    }

    /// `m·a + k`; exactly `k` when `m = 0`.
    pub fn lin(&self, a_coeff: i64, k: i64) -> Real {
        if a_coeff == 0 {
            return self.real(k);
        }
        let scaled = Real::with_val(self.prec, &self.a * a_coeff);
        scaled + k
    }

    /// `q + q^-1`, i.e. `{1}`; the eigenvalue of `A_a` on the trivial
    /// representation.
    pub fn brace_one(&self) -> Real {
        self.qbrace_i(1)
    }

    /// `(b; base)_n` or `(b; base)_∞`.
    pub fn qpochhammer<T: QNumber>(&self, b: &T, base: &T, len: PochhammerLength) -> Result<T> {
        let one = b.one_like();
        match len {
            PochhammerLength::Finite(n) => {
                let mut acc = one.clone();
                let mut power = one.clone();
                for _ in 0..n {
                    acc = acc * (one.clone() - b.clone() * power.clone());
                    power = power * base.clone();
                }
                Ok(acc)
            }
            PochhammerLength::Infinite => {
                if base.modulus() >= 1 {
                    return Err(Error::Domain("infinite q-Pochhammer symbol needs |base| < 1".into()));
                }
                let threshold = self.ten_pow(-i64::from(self.digits));
                let mut acc = one.clone();
                let mut shifted = b.clone();
                loop {
                    if shifted.modulus() < threshold {
                        return Ok(acc);
                    }
                    acc = acc * (one.clone() - shifted.clone());
                    shifted = shifted * base.clone();
                }
            }
        }
    }

    /// Basic hypergeometric series `_{s+1}φ_s(upper; lower; base, z)`.
    ///
    /// The sum stops exactly when an upper parameter equals `base^-n` (the
    /// Pochhammer factor `1 - base^-n base^n` is detected as a zero rather
    /// than summed as round-off), when a term drops below `10^-digits`, or
    /// after `max_terms` terms.
    pub fn qhyp<T: QNumber>(&self, upper: &[T], lower: &[T], base: &T, z: &T, max_terms: usize) -> Result<T> {
        if upper.len() != lower.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} upper parameters for {} lower ones, got {}",
                lower.len() + 1,
                lower.len(),
                upper.len()
            )));
        }
        let zero_tol = self.ten_pow(-i64::from(self.digits));
        let one = z.one_like();
        let mut term = one.clone();
        let mut sum = one.clone();
        let mut power = one.clone();
        for i in 0..max_terms {
            let mut ratio = z.clone();
            let mut terminated = false;
            for u in upper {
                let factor = one.clone() - u.clone() * power.clone();
                if factor.modulus() < zero_tol {
                    terminated = true;
                    break;
                }
                ratio = ratio * factor;
            }
            if terminated {
                return Ok(sum);
            }
            for l in lower {
                let factor = one.clone() - l.clone() * power.clone();
                if factor.modulus() < zero_tol {
                    return Err(Error::Domain(format!("lower parameter hits a pole at term {}", i + 1)));
                }
                ratio = ratio / factor;
            }
            power = power * base.clone();
            let qq = one.clone() - power.clone();
            if qq.modulus() < zero_tol {
                return Err(Error::Domain(format!("(base; base)_{} vanishes", i + 1)));
            }
            ratio = ratio / qq;
            term = term * ratio;
            sum = sum + term.clone();
            if term.modulus() < zero_tol {
                break;
            }
        }
        Ok(sum)
    }
}

fn parse_real(prec: u32, s: &str) -> Result<Real> {
    let parsed =
        Real::parse(s.trim()).map_err(|e| Error::InvalidParameter(format!("cannot parse {s:?} as a real: {e}")))?;
    Ok(Real::with_val(prec, parsed))
}

/// Length argument of [`ParamContext::qpochhammer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochhammerLength {
    Finite(usize),
    Infinite,
}

/// Field operations shared by [`Real`] and [`Complex`] for the q-series
/// routines.
pub trait QNumber:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn one_like(&self) -> Self;
    fn modulus(&self) -> Real;
}

impl QNumber for Real {
    fn one_like(&self) -> Self {
        Real::with_val(self.prec(), 1)
    }

    fn modulus(&self) -> Real {
        self.clone().abs()
    }
}

impl QNumber for Complex {
    fn one_like(&self) -> Self {
        Complex::one(self.re.prec())
    }

    fn modulus(&self) -> Real {
        self.abs()
    }
}

/// Complex number over [`Real`].
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Real::new(re.prec());
        Self { re, im }
    }

    /// Purely imaginary `i·im`.
    pub fn from_imag(im: Real) -> Self {
        let re = Real::new(im.prec());
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self { re: Real::new(prec), im: Real::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self { re: Real::with_val(prec, 1), im: Real::new(prec) }
    }

    pub fn i(prec: u32) -> Self {
        Self { re: Real::new(prec), im: Real::with_val(prec, 1) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Real {
        let p = self.prec();
        Real::with_val(p, self.re.square_ref()) + Real::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: &Real) -> Self {
        let p = self.prec();
        Self { re: Real::with_val(p, &self.re * s), im: Real::with_val(p, &self.im * s) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Self { re: -self.im.clone(), im: self.re.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        write!(
            f,
            "{} {} {}i",
            self.re.to_string_radix(10, Some(12)),
            sign,
            self.im.clone().abs().to_string_radix(10, Some(12))
        )
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex { re: Real::with_val(p, &self.re + &rhs.re), im: Real::with_val(p, &self.im + &rhs.im) }
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex { re: Real::with_val(p, &self.re - &rhs.re), im: Real::with_val(p, &self.im - &rhs.im) }
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        let re = Real::with_val(p, &self.re * &rhs.re) - Real::with_val(p, &self.im * &rhs.im);
        let im = Real::with_val(p, &self.re * &rhs.im) + Real::with_val(p, &self.im * &rhs.re);
        Complex { re, im }
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let den = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Complex { re: num.re / &den, im: num.im / &den }
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: &Complex) -> Complex {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -self.re, im: -self.im }
    }
}

/// `|x - y| / max(|y|, floor)`, the relative error used throughout the
/// checks. `floor` keeps comparisons against zero meaningful.
pub fn rel_err(x: &Real, y: &Real, floor: &Real) -> Real {
    let diff = Real::with_val(x.prec(), x - y).abs();
    let scale = y.clone().abs().max(floor);
    diff / scale
}

/// Full-precision decimal rendering (`digits` significant digits).
pub fn to_decimal(x: &Real, digits: u32) -> String {
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits as usize))
}
