//! Independent q-number arithmetic for the integration tests, written
//! directly against MPFR so that library formulas are checked against a
//! separate evaluation.
#![allow(dead_code)]

use rand::Rng;
use rug::ops::Pow;
use rug::Float;

use qcocycle::ladder::{LadderWord, Letter};
use qcocycle::poly::QPolynomial;
use qcocycle::ParamContext;

pub struct Oracle {
    pub prec: u32,
    pub q: Float,
    pub a: Float,
}

impl Oracle {
    pub fn new(ctx: &ParamContext) -> Self {
        Oracle { prec: ctx.prec(), q: ctx.q().clone(), a: ctx.a().clone() }
    }

    pub fn f(&self, x: f64) -> Float {
        Float::with_val(self.prec, x)
    }

    fn pow(&self, x: &Float) -> Float {
        Float::with_val(self.prec, (&self.q).pow(x))
    }

    /// `{x}`.
    pub fn brace(&self, x: &Float) -> Float {
        let neg = Float::with_val(self.prec, -x);
        self.pow(x) + self.pow(&neg)
    }

    /// `⟦x⟧`.
    pub fn double(&self, x: &Float) -> Float {
        let neg = Float::with_val(self.prec, -x);
        self.pow(x) - self.pow(&neg)
    }

    /// `[x]`.
    pub fn bracket(&self, x: &Float) -> Float {
        let one = self.f(1.0);
        self.double(x) / self.double(&one)
    }

    /// `m·a + k`.
    pub fn lin(&self, m: i32, k: i32) -> Float {
        Float::with_val(self.prec, &self.a * m) + k
    }

    pub fn brace_lin(&self, m: i32, k: i32) -> Float {
        self.brace(&self.lin(m, k))
    }

    pub fn brace_one(&self) -> Float {
        self.brace(&self.f(1.0))
    }

    /// `{a+2}/({a}²{a+1})`.
    pub fn growth_prefactor(&self) -> Float {
        let a = self.brace_lin(1, 0);
        Float::with_val(self.prec, 2u32) * self.brace_lin(1, 2) / (a.clone() * a * self.brace_lin(1, 1))
    }

    /// `c = ⟦a⟧²/{1}` and `D = {1} + c`.
    pub fn shift_and_scale(&self) -> (Float, Float) {
        let da = self.double(&self.a);
        let c = da.clone() * da / self.brace_one();
        let d = self.brace_one() + &c;
        (c, d)
    }

    /// Discrete-series norm `({a+2}/{a+2n}) ∏_{k<n} ({2k+1} - {1})({2k+1+2a} + {1})`.
    pub fn discrete_plus(&self, n: i32) -> Float {
        let lam = self.brace_one();
        let mut g = self.brace_lin(1, 2) / self.brace_lin(1, 2 * n);
        for k in 1..n {
            g *= (self.brace(&self.f(f64::from(2 * k + 1))) - &lam) * (self.brace_lin(2, 2 * k + 1) + &lam);
        }
        g
    }
}

pub fn rel(x: &Float, y: &Float) -> Float {
    let scale = y.clone().abs().max(&Float::with_val(y.prec(), 1));
    Float::with_val(x.prec(), x - y).abs() / scale
}

/// `10^{-(digits - loss)}`.
pub fn tol(ctx: &ParamContext, loss: u32) -> Float {
    Float::with_val(ctx.prec(), 10).pow(-((ctx.digits() - loss) as i32))
}

/// Horner evaluation of the derivative, independent of the library.
pub fn derivative_at(p: &QPolynomial, x: &Float) -> Float {
    let mut acc = Float::new(x.prec());
    for (i, c) in p.coeffs().iter().enumerate().skip(1).rev() {
        acc = acc * x + Float::with_val(x.prec(), c * i as u32);
    }
    acc
}

pub fn eval_at(p: &QPolynomial, x: &Float) -> Float {
    let mut acc = Float::new(x.prec());
    for c in p.coeffs().iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Random word with up to `max_len` letters, a fifth of them polynomials of
/// degree ≤ 2 in `A`.
pub fn word(ctx: &ParamContext, rng: &mut impl Rng, max_len: usize, start: i64) -> LadderWord {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| match rng.gen_range(0..5) {
            0 | 1 => Letter::Plus,
            2 | 3 => Letter::Minus,
            _ => {
                let deg = rng.gen_range(0..=2);
                let coeffs = (0..=deg).map(|_| ctx.real(rng.gen_range(-3.0..3.0))).collect();
                Letter::Apoly(QPolynomial::new(coeffs, ctx.prec()))
            }
        })
        .collect();
    LadderWord::new(letters, start)
}
