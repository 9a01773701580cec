//! Askey–Wilson polynomials `p_n(x; -q^{1-2a}, -q^{1+2a}, q, q | q²)`, their
//! normalization `Q_n` at `x0 = (q + q⁻¹)/2` and the affine rescaling `P_n`
//! with `P_n(1) = 1`.
//!
//! The terminating ₄φ₃ is expanded in `x = cos θ` directly: each factor
//! `(α e^{iθ}; Q)_i (α e^{-iθ}; Q)_i` equals `∏_{j<i} (1 - 2αQ^j x + α²Q^{2j})`,
//! so no complex arithmetic or branch choice enters. The sum has heavy
//! cancellation for large `n`; it is carried out at a raised precision and the
//! number of bits lost is measured and fed back until the result is clean.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::poly::{largest_zero, poly_zeros, QPolynomial, ZeroSet};
use crate::scalars::{ParamContext, Real};

/// Which rendering of the ₄φ₃ to expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Base `Q = q²`, upper parameters `Q^{-n}`, `q^{2n+2}`, argument `Q`.
    Standard,
    /// Base `q`, upper parameters `q^{-n}`, `q^{n+3}`, argument `q`.
    Literal,
}

/// Series data for one `n` at a given working precision.
struct Series {
    base: Real,
    top: Real,
    second: Real,
    alpha: Real,
    lower: [Real; 3],
    z: Real,
    prefactor: Real,
}

/// The expanded polynomials for one degree, rounded to context precision.
#[derive(Clone, Debug)]
pub struct AwPolys {
    pub n: usize,
    /// The bare ₄φ₃ (the monic-free `p̃_n` of the three-term recurrence).
    pub series: QPolynomial,
    pub p: QPolynomial,
    pub q: QPolynomial,
    pub p_sub: QPolynomial,
    /// `Q_n` and `P_n` kept at the working precision, for evaluation near
    /// the normalization point where the monomial form is ill-conditioned.
    pub q_wide: QPolynomial,
    pub p_sub_wide: QPolynomial,
    /// Bits lost to cancellation in the expansion.
    pub cancellation_bits: u32,
    pub working_prec: u32,
}

#[derive(Clone, Debug)]
pub struct AskeyWilson {
    ctx: ParamContext,
}

impl AskeyWilson {
    pub fn new(ctx: &ParamContext) -> Self {
        AskeyWilson { ctx: ctx.clone() }
    }

    pub fn ctx(&self) -> &ParamContext {
        &self.ctx
    }

    /// `x0 = (q + q⁻¹)/2`.
    pub fn norm_point(&self) -> Real {
        self.ctx.brace_one() / 2u32
    }

    /// `c = (q + q⁻¹)⁻¹ ⟦a⟧²`.
    pub fn shift_c(&self) -> Real {
        self.ctx.t().clone().square() / self.ctx.brace_one()
    }

    /// `D = q + q⁻¹ + c`.
    pub fn scale_d(&self) -> Real {
        self.ctx.brace_one() + self.shift_c()
    }

    fn series(&self, n: usize, conv: Convention, wp: u32) -> Series {
        let q = Float::with_val(wp, self.ctx.q());
        let a = Float::with_val(wp, self.ctx.a());
        let qpow = |e: &Real| q.clone().pow(e);
        let n_i = n as i32;
        let one_m_2a = Float::with_val(wp, 1) - Float::with_val(wp, &a * 2u32);
        let two_m_2a = Float::with_val(wp, 2) - Float::with_val(wp, &a * 2u32);
        let alpha = -qpow(&one_m_2a);
        let l1 = -qpow(&two_m_2a);
        let q2 = Float::with_val(wp, q.square_ref());
        let lower = [q2.clone(), l1.clone(), l1];
        let (base, top, second, z) = match conv {
            Convention::Standard => {
                let base = q2.clone();
                let top = base.clone().pow(-n_i);
                let second = q.clone().pow(2 * n_i + 2);
                (base.clone(), top, second, base)
            }
            Convention::Literal => {
                let top = q.clone().pow(-n_i);
                let second = q.clone().pow(n_i + 3);
                (q.clone(), top, second, q.clone())
            }
        };
        // prefactor (ab, ac, ad; base)_n scaled by α^{∓n}
        let mut pre = Float::with_val(wp, 1);
        let mut bi = Float::with_val(wp, 1);
        for _ in 0..n {
            for l in &lower {
                pre *= Float::with_val(wp, 1) - Float::with_val(wp, l * &bi);
            }
            bi *= &base;
        }
        let alpha_pow = match conv {
            Convention::Standard => alpha.clone().pow(-n_i),
            Convention::Literal => alpha.clone().pow(n_i),
        };
        let prefactor = pre * alpha_pow;
        Series { base, top, second, alpha, lower, z, prefactor }
    }

    /// Expands the series at working precision `wp`; returns the bare sum and
    /// the number of bits lost to cancellation.
    fn expand(&self, n: usize, s: &Series, wp: u32) -> Result<(QPolynomial, u32)> {
        let one = Float::with_val(wp, 1);
        let mut pi = QPolynomial::constant(one.clone());
        let mut coef = one.clone();
        let mut sum = pi.clone();
        let mut abs_sum: Vec<Real> = vec![one.clone()];
        let mut bi = one.clone();
        let alpha_sq = Float::with_val(wp, s.alpha.square_ref());
        for _ in 0..n {
            let fac = |p: &Real| Float::with_val(wp, &one - Float::with_val(wp, p * &bi));
            let num = fac(&s.top) * fac(&s.second);
            let mut den = fac(&s.base);
            for l in &s.lower {
                den *= fac(l);
            }
            if den.is_zero() {
                return Err(Error::Domain("lower parameter pole in the 4phi3 expansion".into()));
            }
            coef = coef * num / den * &s.z;
            let lin = Float::with_val(wp, &s.alpha * &bi) * -2i32;
            let quad = Float::with_val(wp, &alpha_sq * Float::with_val(wp, bi.square_ref()));
            let factor = QPolynomial::new(vec![one.clone() + quad, lin], wp);
            pi = pi.mul(&factor);
            let term = pi.scale(&coef);
            abs_sum.resize(term.coeffs().len(), Float::new(wp));
            for (acc, c) in abs_sum.iter_mut().zip(term.coeffs()) {
                *acc += c.clone().abs();
            }
            sum = sum.add(&term);
            bi *= &s.base;
        }
        let mut lost = 0u32;
        for (acc, c) in abs_sum.iter().zip(sum.coeffs()) {
            if c.is_zero() {
                continue;
            }
            let ratio = Float::with_val(wp, acc / c).abs().log2();
            let bits = ratio.to_f64().max(0.0).ceil() as u32;
            lost = lost.max(bits);
        }
        Ok((sum, lost))
    }

    /// Builds `p_n`, `Q_n` and `P_n` in the given convention.
    pub fn build_with(&self, n: usize, conv: Convention) -> Result<AwPolys> {
        let prec = self.ctx.prec();
        let n32 = n as u32;
        let mut extra = 64 + n32 * n32;
        for _ in 0..8 {
            let wp = prec + extra;
            let s = self.series(n, conv, wp);
            let (series, lost) = self.expand(n, &s, wp)?;
            if lost + 32 > extra {
                extra = (lost + 96).max(2 * extra);
                continue;
            }
            let p = series.scale(&s.prefactor);
            let x0 = Float::with_val(wp, self.norm_point());
            let norm = p.eval(&x0);
            if norm.is_zero() {
                return Err(Error::Domain(format!("p_{n} vanishes at the normalization point")));
            }
            let q = p.scale(&Float::with_val(wp, norm.recip_ref()));
            let d_half = Float::with_val(wp, self.scale_d()) / 2u32;
            let c_half = -(Float::with_val(wp, self.shift_c()) / 2u32);
            let p_sub = q.compose_affine(&d_half, &c_half);
            return Ok(AwPolys {
                n,
                series: series.with_prec(prec),
                p: p.with_prec(prec),
                q: q.with_prec(prec),
                p_sub: p_sub.with_prec(prec),
                q_wide: q,
                p_sub_wide: p_sub,
                cancellation_bits: lost,
                working_prec: wp,
            });
        }
        let digits_lost = (f64::from(extra) * std::f64::consts::LOG10_2).ceil() as u32;
        Err(Error::PrecisionExhausted { digits: self.ctx.digits(), recommended: self.ctx.digits() + digits_lost })
    }

    pub fn build(&self, n: usize) -> Result<AwPolys> {
        self.build_with(n, Convention::Standard)
    }

    pub fn aw_poly(&self, n: usize) -> Result<QPolynomial> {
        Ok(self.build(n)?.p)
    }

    pub fn normalize_q(&self, n: usize) -> Result<QPolynomial> {
        Ok(self.build(n)?.q)
    }

    pub fn substitute_p(&self, n: usize) -> Result<QPolynomial> {
        Ok(self.build(n)?.p_sub)
    }

    /// Coefficients `(A_n, C_n)` of `2x p̃_n = A_n p̃_{n+1} + (α + α⁻¹ - A_n - C_n) p̃_n + C_n p̃_{n-1}`
    /// for the bare series `p̃_n`.
    pub fn recurrence_coefficients(&self, n: usize) -> (Real, Real) {
        let prec = self.ctx.prec();
        let s = self.series(n, Convention::Standard, prec);
        let qb = &s.base;
        let one = Float::with_val(prec, 1);
        let qn = qb.clone().pow(n as i32);
        let abcd = Float::with_val(prec, self.ctx.q().clone().pow(4));
        let ab = s.lower[0].clone();
        let ac = s.lower[1].clone();
        let gamma = Float::with_val(prec, self.ctx.q());
        let beta = Float::with_val(prec, &ab / &s.alpha);
        let f = |x: Real| Float::with_val(prec, &one - x);
        let at = |k: i32| qb.clone().pow(k);
        let nn = n as i32;
        let a_num = f(Float::with_val(prec, &ab * &qn))
            * f(Float::with_val(prec, &ac * &qn))
            * f(Float::with_val(prec, &ac * &qn))
            * f(Float::with_val(prec, &abcd * at(nn - 1)));
        let a_den = Float::with_val(prec, &s.alpha)
            * f(Float::with_val(prec, &abcd * at(2 * nn - 1)))
            * f(Float::with_val(prec, &abcd * at(2 * nn)));
        let bg = Float::with_val(prec, &beta * &gamma);
        let gg = Float::with_val(prec, gamma.square_ref());
        let c_num = Float::with_val(prec, &s.alpha)
            * f(qn.clone())
            * f(Float::with_val(prec, &bg * at(nn - 1)))
            * f(Float::with_val(prec, &bg * at(nn - 1)))
            * f(Float::with_val(prec, &gg * at(nn - 1)));
        let c_den = f(Float::with_val(prec, &abcd * at(2 * nn - 2))) * f(Float::with_val(prec, &abcd * at(2 * nn - 1)));
        (a_num / a_den, c_num / c_den)
    }

    /// Largest coefficient of the three-term-recurrence defect at degree
    /// `n ≥ 1`, relative to the largest coefficient among its terms.
    pub fn recurrence_residual(&self, n: usize, prev: &QPolynomial, cur: &QPolynomial, next: &QPolynomial) -> Real {
        let prec = self.ctx.prec();
        let s = self.series(n, Convention::Standard, prec);
        let (an, cn) = self.recurrence_coefficients(n);
        let mid = Float::with_val(prec, &s.alpha + Float::with_val(prec, s.alpha.recip_ref())) - &an - &cn;
        let two_x = QPolynomial::linear(Float::new(prec), Float::with_val(prec, 2));
        let lhs = two_x.mul(cur);
        let terms = [next.scale(&an), cur.scale(&mid), prev.scale(&cn)];
        let rhs = terms.iter().fold(QPolynomial::zero(prec), |acc, t| acc.add(t));
        let scale = [lhs.max_abs_coeff(), terms[0].max_abs_coeff(), terms[1].max_abs_coeff(), terms[2].max_abs_coeff()]
            .into_iter()
            .fold(Float::new(prec), |m, x| if x > m { x } else { m });
        lhs.sub(&rhs).max_abs_coeff() / scale
    }

    /// Largest zero of `P_n` by Newton from the Cauchy bound.
    pub fn largest_zero_p(&self, p_sub: &QPolynomial) -> Result<Real> {
        largest_zero(p_sub, None)
    }

    pub fn zeros_p(&self, p_sub: &QPolynomial) -> Result<ZeroSet> {
        poly_zeros(p_sub, &self.ctx.tol(12))
    }
}
