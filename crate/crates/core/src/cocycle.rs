//! The counit on ladder words, the 1-cocycle `C(b) = π(b)e_a - ε(b)e_a` on the
//! module `M_{{1},a}`, its extension to the double, and the growth
//! `C^{n*}C^n` through the Askey–Wilson polynomials `P_n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::askey_wilson::{AskeyWilson, AwPolys};
use crate::error::{Error, Result};
use crate::ladder::{
    gram_lambda, make_module, project_sign, Generator, LadderModule, LadderVector, LadderWord, Lambda, Letter,
    SesquiForm,
};
use crate::linalg::inner;
use crate::parallel::Exec;
use crate::scalars::{to_decimal, Complex, ParamContext, Real};
use crate::uq_irreps::xi_vectors;

/// `ε(T⁺_c)`, `ε(T⁻_c)` or `ε(A_c)` from the ξ-vector inner products against
/// `ξ^{(t;1)}`.
pub fn epsilon_generator(ctx: &ParamContext, g: Generator, c: &Real) -> Complex {
    let xi = xi_vectors(ctx, c);
    let reference = xi_vectors(ctx, ctx.a()).center;
    match g {
        Generator::Plus => inner(&xi.plus, &reference),
        Generator::Minus => inner(&xi.minus, &reference),
        Generator::A => {
            let shift = ctx.qdouble(c) * ctx.t() / ctx.brace_one();
            inner(&xi.center, &reference) - Complex::from_real(shift)
        }
    }
}

/// Finitely supported element `Σ ω_n Φ_n` of `⊕_n B(ℂ_n)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IcElement {
    coeffs: BTreeMap<i64, Complex>,
}

impl IcElement {
    /// The projection `Φ_n`.
    pub fn phi(n: i64, prec: u32) -> Self {
        IcElement { coeffs: BTreeMap::from([(n, Complex::one(prec))]) }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, Complex)>) -> Self {
        IcElement { coeffs: pairs.into_iter().collect() }
    }

    pub fn coefficient(&self, n: i64) -> Option<&Complex> {
        self.coeffs.get(&n)
    }

    /// `ε(ω)`, the coefficient of the weight-zero projection.
    pub fn epsilon(&self, prec: u32) -> Complex {
        self.coeffs.get(&0).cloned().unwrap_or_else(|| Complex::zero(prec))
    }
}

/// The module `M_{{1},a}` with its limit form, on which the cocycle lives.
#[derive(Clone, Debug)]
pub struct CocycleContext {
    module: LadderModule,
    form: SesquiForm,
}

impl CocycleContext {
    pub fn new(ctx: &ParamContext, radius: i64) -> Result<Self> {
        let module = make_module(ctx, Lambda::Discrete, ctx.a(), radius)?;
        let form = gram_lambda(&module)?;
        Ok(CocycleContext { module, form })
    }

    pub fn ctx(&self) -> &ParamContext {
        self.module.ctx()
    }

    pub fn module(&self) -> &LadderModule {
        &self.module
    }

    pub fn form(&self) -> &SesquiForm {
        &self.form
    }

    pub fn generating_vector(&self) -> LadderVector {
        self.module.basis(0).expect("index 0 is always in the window")
    }

    /// Counit of a word: the product of the generator values along it, with
    /// `P(A_c)` contributing `P(ε(A_c))`.
    pub fn epsilon_word(&self, w: &LadderWord) -> Complex {
        let ctx = self.ctx();
        let mut acc = Complex::one(ctx.prec());
        for (letter, m) in w.letters() {
            let c = self.module.weight(*m);
            let value = match letter {
                Letter::Plus => epsilon_generator(ctx, Generator::Plus, &c),
                Letter::Minus => epsilon_generator(ctx, Generator::Minus, &c),
                Letter::Apoly(p) => {
                    let e = epsilon_generator(ctx, Generator::A, &c);
                    p.coeffs()
                        .iter()
                        .rev()
                        .fold(Complex::zero(ctx.prec()), |s, k| &(&s * &e) + &Complex::from_real(k.clone()))
                }
            };
            acc = &acc * &value;
        }
        acc
    }

    /// `π(w)v`.
    pub fn act(&self, w: &LadderWord, v: &LadderVector) -> Result<LadderVector> {
        self.module.apply_word(w, v)
    }

    /// `C(w) = π(w)e_a - ε(w)e_a`.
    pub fn cocycle_eval(&self, w: &LadderWord) -> Result<LadderVector> {
        let e = self.generating_vector();
        let moved = self.module.apply_word(w, &e)?;
        Ok(moved.sub(&e.scale(&self.epsilon_word(w))))
    }

    /// `C̃(wω) = C(w)ε(ω)`.
    pub fn cocycle_extend(&self, w: &LadderWord, omega: &IcElement) -> Result<LadderVector> {
        Ok(self.cocycle_eval(w)?.scale(&omega.epsilon(self.ctx().prec())))
    }

    /// True when `C(w)` is supported on the single index `shift(w)`.
    pub fn yd_weight_check(&self, w: &LadderWord) -> Result<bool> {
        let v = self.cocycle_eval(w)?;
        let tol = self.ctx().tol(8);
        let ok = v.iter().all(|(n, x)| n == w.shift() || x.abs() < tol);
        Ok(ok)
    }

    /// `(P₊C(w), P₋C(w))`.
    pub fn decompose_pm(&self, w: &LadderWord) -> Result<(LadderVector, LadderVector)> {
        let (plus, _, minus) = project_sign(&self.cocycle_eval(w)?);
        Ok((plus, minus))
    }

    /// Squared norm of a cocycle value in `D₂⁺ ⊕ D₂⁻`; the `e_a` coordinate,
    /// on which the limit form is infinite, is left out.
    pub fn value_norm_sq(&self, v: &LadderVector) -> Result<Real> {
        let (plus, _, minus) = project_sign(v);
        Ok(self.form.norm_sq(&plus)? + self.form.norm_sq(&minus)?)
    }

    /// `⟨C(T⁺…T⁺), C(T⁺…T⁺)⟩` with `n` letters.
    pub fn plus_power_norm(&self, n: usize) -> Result<Real> {
        let w = LadderWord::new(vec![Letter::Plus; n], 0);
        self.value_norm_sq(&self.cocycle_eval(&w)?)
    }
}

/// `u(λ) = (λ + c)/D`.
pub fn u1_eigenvalue(aw: &AskeyWilson, lambda: &Real) -> Real {
    (lambda.clone() + aw.shift_c()) / aw.scale_d()
}

/// Candidate normalizations of the growth, all proportional to `P_n'(1)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GrowthConstants {
    /// `2{a+2}/({a}²{a+1}) / D`, the one used for `G_n`.
    pub adopted: String,
    /// `2{a+2}/({a}²{a+1})` without the Jacobian `1/D`.
    pub without_jacobian: String,
    /// `(q + q⁻¹ + (q + q⁻¹)⁻¹⟦a⟧²{a+2})/({a}²{a+1})`.
    pub summary_reading: String,
}

/// `2{a+2}/({a}²{a+1})`.
pub fn growth_prefactor(ctx: &ParamContext) -> Real {
    let brace_a = ctx.qbrace(ctx.a());
    ctx.qbrace_lin(1, 2) * 2u32 / (brace_a.square() * ctx.qbrace_lin(1, 1))
}

pub fn growth_constants(aw: &AskeyWilson) -> GrowthConstants {
    let ctx = aw.ctx();
    let pre = growth_prefactor(ctx);
    let brace_a = ctx.qbrace(ctx.a());
    let den = brace_a.square() * ctx.qbrace_lin(1, 1);
    let summary = (ctx.brace_one() + aw.shift_c() * ctx.qbrace_lin(1, 2)) / den;
    let d = ctx.digits();
    GrowthConstants {
        adopted: to_decimal(&(pre.clone() / aw.scale_d()), d),
        without_jacobian: to_decimal(&pre, d),
        summary_reading: to_decimal(&summary, d),
    }
}

/// `G_n = (2{a+2}/({a}²{a+1})) P_n'(1) / D`; `G_0 = 0`.
pub fn growth_closed(aw: &AskeyWilson, n: usize) -> Result<Real> {
    Ok(growth_closed_from(aw, &aw.build(n)?))
}

fn growth_closed_from(aw: &AskeyWilson, polys: &AwPolys) -> Real {
    let ctx = aw.ctx();
    let wp = polys.working_prec;
    let dp = polys.p_sub_wide.derivative().eval(&Real::with_val(wp, 1));
    let g = Real::with_val(wp, growth_prefactor(ctx)) * dp / Real::with_val(wp, aw.scale_d());
    Real::with_val(ctx.prec(), g)
}

fn growth_numeric_from(aw: &AskeyWilson, polys: &AwPolys, eps: &Real) -> Result<Real> {
    let ctx = aw.ctx();
    let p = &polys.p_sub_wide;
    if p.degree() == Some(0) {
        return Ok(ctx.zero());
    }
    let wp = polys.working_prec;
    let lambda = Real::with_val(wp, ctx.brace_one()) - eps;
    let d = Real::with_val(wp, aw.scale_d());
    let u = (lambda + Real::with_val(wp, aw.shift_c())) / &d;
    let diff = Real::with_val(wp, 1) - p.eval(&u);

    // rounding budget: evaluation noise at the working precision plus the
    // context rounding of the inputs, against the expected size P'(1)ε/D
    let dp1 = p.derivative().eval(&Real::with_val(wp, 1)).abs();
    let expected = (dp1.clone() * eps / &d).to_f64();
    let deg = p.degree().unwrap_or(1) as f64;
    let eval_noise = p.eval_abs(&u).to_f64() * deg * 2f64.powi(-(wp as i32));
    let input_noise = 4.0 * dp1.to_f64() * 2f64.powi(-(ctx.prec() as i32));
    let rel_err = (eval_noise + input_noise) / expected;
    let target = 10f64.powi(-(ctx.digits() as i32 - 10));
    if rel_err.is_nan() || rel_err > target {
        let excess = (rel_err / target).log10().ceil().max(1.0) as u32;
        let need = ctx.digits() + excess + 10;
        return Err(Error::PrecisionExhausted { digits: ctx.digits(), recommended: need.div_ceil(10) * 10 });
    }
    let g = Real::with_val(wp, growth_prefactor(ctx)) * diff / eps;
    Ok(Real::with_val(ctx.prec(), g))
}

/// `(2{a+2}/({a}²{a+1})) (1 - P_n(u({1} - ε))) / ε`.
pub fn growth_numeric(aw: &AskeyWilson, n: usize, eps: &Real) -> Result<Real> {
    let ctx = aw.ctx();
    if *eps <= 0 || *eps >= ctx.brace_one() {
        return Err(Error::InvalidParameter("epsilon must lie in (0, q + 1/q)".into()));
    }
    growth_numeric_from(aw, &aw.build(n)?, eps)
}

/// One row of a growth scan; numbers are decimal strings at context digits.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub g_closed: String,
    pub g_numeric: String,
    pub rel_gap: String,
    /// `|P_n''(1)| / (2 D P_n'(1))`: the relative gap is about this times ε.
    pub envelope_k: String,
    pub dp1: String,
    pub x_max: Option<String>,
    pub bound: Option<String>,
}

/// The three divergence checks.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProperFlags {
    pub n0: usize,
    /// `min_{[2n₀, n_max]} G_n > max_{[0, n₀]} G_n`.
    pub divergence: bool,
    /// `P_n'(1) > 1/(1 - x_max)` for every `n ≥ 2` scanned.
    pub lemma_inequality: bool,
    /// `x_max(P_n)` strictly increasing in `n ≥ 1`.
    pub zeros_increasing: bool,
}

impl ProperFlags {
    pub fn all(&self) -> bool {
        self.divergence && self.lemma_inequality && self.zeros_increasing
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GrowthReport {
    pub q: String,
    pub a: String,
    pub digits: u32,
    pub n_max: usize,
    pub eps: String,
    pub constants: GrowthConstants,
    pub rows: Vec<GrowthRow>,
    pub flags: ProperFlags,
}

/// Numeric values behind a [`GrowthRow`].
#[derive(Clone, Debug)]
pub struct GrowthSample {
    pub n: usize,
    pub g_closed: Real,
    pub g_numeric: Real,
    pub rel_gap: Real,
    pub envelope_k: Real,
    pub dp1: Real,
    pub x_max: Option<Real>,
}

impl GrowthSample {
    /// `1/(1 - x_max)`.
    pub fn bound(&self) -> Option<Real> {
        self.x_max.as_ref().map(|x| (Real::with_val(x.prec(), 1) - x).recip())
    }
}

/// Closed and numeric growth plus zero diagnostics for one `n`.
pub fn growth_sample(aw: &AskeyWilson, n: usize, eps: &Real) -> Result<GrowthSample> {
    let ctx = aw.ctx();
    if *eps <= 0 || *eps >= ctx.brace_one() {
        return Err(Error::InvalidParameter("epsilon must lie in (0, q + 1/q)".into()));
    }
    let polys = aw.build(n)?;
    let g_closed = growth_closed_from(aw, &polys);
    let g_numeric = growth_numeric_from(aw, &polys, eps)?;
    let p = &polys.p_sub_wide;
    let wp = polys.working_prec;
    let narrow = |x: Real| Real::with_val(ctx.prec(), x);
    let one = Real::with_val(wp, 1);
    let dp = p.derivative();
    let dp1 = narrow(dp.eval(&one));
    let (rel_gap, envelope_k) = if n == 0 {
        (ctx.zero(), ctx.zero())
    } else {
        let gap = Real::with_val(ctx.prec(), &g_numeric - &g_closed).abs() / &g_closed;
        let d2 = narrow(dp.derivative().eval(&one).abs());
        let k = d2 / (aw.scale_d() * 2u32 * &dp1);
        (gap, k)
    };
    let x_max = if n == 0 { None } else { Some(narrow(aw.largest_zero_p(p)?)) };
    Ok(GrowthSample { n, g_closed, g_numeric, rel_gap, envelope_k, dp1, x_max })
}

/// Evaluates the flags on samples ordered by `n = 0, 1, …`.
pub fn proper_flags(samples: &[GrowthSample]) -> ProperFlags {
    let n_max = samples.len().saturating_sub(1);
    let n0 = n_max / 4;
    let early = samples[..=n0].iter().map(|s| &s.g_closed).fold(None::<&Real>, |m, g| match m {
        Some(m) if m >= g => Some(m),
        _ => Some(g),
    });
    let late = samples[(2 * n0).min(n_max)..].iter().map(|s| &s.g_closed).fold(None::<&Real>, |m, g| match m {
        Some(m) if m <= g => Some(m),
        _ => Some(g),
    });
    let divergence = n_max >= 4 && matches!((late, early), (Some(l), Some(e)) if l > e);
    let lemma_inequality = samples.iter().filter(|s| s.n >= 2).all(|s| matches!(s.bound(), Some(b) if s.dp1 > b));
    let zeros: Vec<&Real> = samples.iter().filter_map(|s| s.x_max.as_ref()).collect();
    let zeros_increasing = zeros.windows(2).all(|w| w[1] > w[0]);
    ProperFlags { n0, divergence, lemma_inequality, zeros_increasing }
}

/// Scans `n = 0..=n_max` and certifies divergence of the growth.
pub fn properness_scan(ctx: &ParamContext, n_max: usize, eps: &Real, exec: Exec) -> Result<GrowthReport> {
    if n_max > 200 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} exceeds the supported 200")));
    }
    let aw = AskeyWilson::new(ctx);
    let ns: Vec<usize> = (0..=n_max).collect();
    let samples = exec.map(&ns, |&n| growth_sample(&aw, n, eps)).into_iter().collect::<Result<Vec<_>>>()?;
    let flags = proper_flags(&samples);
    let d = ctx.digits();
    let rows = samples
        .iter()
        .map(|s| GrowthRow {
            n: s.n,
            g_closed: to_decimal(&s.g_closed, d),
            g_numeric: to_decimal(&s.g_numeric, d),
            rel_gap: to_decimal(&s.rel_gap, d),
            envelope_k: to_decimal(&s.envelope_k, d),
            dp1: to_decimal(&s.dp1, d),
            x_max: s.x_max.as_ref().map(|x| to_decimal(x, d)),
            bound: s.bound().map(|b| to_decimal(&b, d)),
        })
        .collect();
    Ok(GrowthReport {
        q: to_decimal(ctx.q(), d),
        a: to_decimal(ctx.a(), d),
        digits: d,
        n_max,
        eps: to_decimal(eps, d),
        constants: growth_constants(&aw),
        rows,
        flags,
    })
}
