//! Basic modules `M_{λ,b}` as ℤ-graded ladder models on a finite window,
//! words in the generators `T⁺_c`, `T⁻_c`, `A_c`, and the invariant form
//! `⟨·,·⟩_λ`.
//!
//! Index `n` stands for the basis vector `e_{b+2n}`. `T⁺` is a pure shift on
//! `n ≥ 0` and `T⁻` a pure shift on `n ≤ 0`; on the other side the ladder
//! relations
//! `T⁻_{c+2}T⁺_c = ({c-a+1} - A_c)({c+a+1} + A_c)` and
//! `T⁺_{c-2}T⁻_c = ({c-a-1} - A_c)({c+a-1} + A_c)`
//! fix the coefficient, written `φ(c) = ({c-a+1} - λ)({c+a+1} + λ)`.
//!
//! A generator whose subscript differs from the weight it acts on is
//! expanded through the ξ-vectors of that weight: writing its defining
//! vector as `α ξ₊ + β ξ + γ ξ₋` it acts as
//! `ᾱ T⁺ + β̄ (A + ⟦c'⟧t/{1}) + γ̄ T⁻` (minus `⟦c⟧t/{1}` for `A_c`).

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{solve, CMatrix};
use crate::poly::QPolynomial;
use crate::scalars::{Complex, ParamContext, Real};
use crate::uq_irreps::xi_vectors;

/// Eigenvalue of `A` on the generating vector.
#[derive(Clone, Debug, PartialEq)]
pub enum Lambda {
    /// `λ = q + q⁻¹ = {1}`, kept symbolic so kernel coefficients vanish exactly.
    Discrete,
    Value(Real),
}

impl Lambda {
    pub fn value(&self, ctx: &ParamContext) -> Real {
        match self {
            Lambda::Discrete => ctx.brace_one(),
            Lambda::Value(v) => v.clone(),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Lambda::Discrete)
    }
}

/// `({x} - λ)({y} + λ)` with the first factor flagged when it is an exact
/// symbolic zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderFactor {
    pub minus_part: Real,
    pub plus_part: Real,
    exact_zero: bool,
}

impl LadderFactor {
    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    pub fn value(&self) -> Real {
        if self.exact_zero {
            return Real::new(self.plus_part.prec());
        }
        Real::with_val(self.plus_part.prec(), &self.minus_part * &self.plus_part)
    }
}

/// Coordinates on the window `[-N, N]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderVector {
    radius: i64,
    coords: Vec<Complex>,
}

impl LadderVector {
    pub fn zero(radius: i64, prec: u32) -> Self {
        LadderVector { radius, coords: vec![Complex::zero(prec); (2 * radius + 1) as usize] }
    }

    pub fn basis(radius: i64, n: i64, prec: u32) -> Result<Self> {
        let mut v = LadderVector::zero(radius, prec);
        *v.slot(n)? = Complex::one(prec);
        Ok(v)
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    fn slot(&mut self, n: i64) -> Result<&mut Complex> {
        if n.abs() > self.radius {
            return Err(Error::WindowOverflow { index: n, radius: self.radius });
        }
        Ok(&mut self.coords[(n + self.radius) as usize])
    }

    pub fn get(&self, n: i64) -> Option<&Complex> {
        if n.abs() > self.radius {
            return None;
        }
        self.coords.get((n + self.radius) as usize)
    }

    pub fn set(&mut self, n: i64, value: Complex) -> Result<()> {
        *self.slot(n)? = value;
        Ok(())
    }

    /// Adds `value` at index `n`, failing if `n` leaves the window.
    pub fn accumulate(&mut self, n: i64, value: &Complex) -> Result<()> {
        let s = self.slot(n)?;
        *s = &*s + value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Complex)> {
        let r = self.radius;
        self.coords.iter().enumerate().map(move |(i, c)| (i as i64 - r, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(x, y)| x + y).collect();
        LadderVector { radius: self.radius, coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(x, y)| x - y).collect();
        LadderVector { radius: self.radius, coords }
    }

    pub fn scale(&self, s: &Complex) -> Self {
        let coords = self.coords.iter().map(|x| x * s).collect();
        LadderVector { radius: self.radius, coords }
    }

    pub fn max_abs(&self) -> Real {
        let prec = self.coords[0].prec();
        self.coords.iter().map(Complex::abs).fold(Real::new(prec), |m, x| if x > m { x } else { m })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Real {
        self.sub(other).max_abs()
    }

    /// Indices whose coordinate exceeds `tol` in modulus.
    pub fn support(&self, tol: &Real) -> Vec<i64> {
        self.iter().filter(|(_, c)| c.abs() > *tol).map(|(n, _)| n).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Complex::is_zero)
    }
}

/// A single generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Plus,
    Minus,
    A,
}

/// A letter of a word; `Apoly(P)` stands for `P(A_c)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Letter {
    Plus,
    Minus,
    Apoly(QPolynomial),
}

impl Letter {
    pub fn shift(&self) -> i64 {
        match self {
            Letter::Plus => 1,
            Letter::Minus => -1,
            Letter::Apoly(_) => 0,
        }
    }
}

/// Letters in application order, each with its subscript `c = b + 2m`
/// stored as the lattice index `m`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LadderWord {
    letters: Vec<(Letter, i64)>,
}

impl LadderWord {
    /// Subscripts follow the running weight from `start`.
    pub fn new(letters: Vec<Letter>, start: i64) -> Self {
        let mut m = start;
        let letters = letters
            .into_iter()
            .map(|l| {
                let sub = m;
                m += l.shift();
                (l, sub)
            })
            .collect();
        LadderWord { letters }
    }

    pub fn empty() -> Self {
        LadderWord::default()
    }

    pub fn letters(&self) -> &[(Letter, i64)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `#Plus - #Minus`.
    pub fn shift(&self) -> i64 {
        self.letters.iter().map(|(l, _)| l.shift()).sum()
    }

    /// The product `xy`: `y` acts first. Subscripts are kept as they are.
    pub fn compose(x: &Self, y: &Self) -> Self {
        let mut letters = y.letters.clone();
        letters.extend(x.letters.iter().cloned());
        LadderWord { letters }
    }
}

impl fmt::Display for LadderWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(l, m)| match l {
                Letter::Plus => format!("T+[{m}]"),
                Letter::Minus => format!("T-[{m}]"),
                Letter::Apoly(p) => format!("P{}(A[{m}])", p.degree().map_or(-1, |d| d as i64)),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The module `M_{λ,b}` on the window `[-N, N]`.
#[derive(Clone, Debug)]
pub struct LadderModule {
    ctx: ParamContext,
    lambda: Lambda,
    lambda_value: Real,
    b: Real,
    delta: Real,
    radius: i64,
    up: Vec<Option<LadderFactor>>,
    down: Vec<Option<LadderFactor>>,
}

/// Builds `M_{λ,b}` with ladder coefficients precomputed on `[-N, N]`.
pub fn make_module(ctx: &ParamContext, lambda: Lambda, b: &Real, radius: i64) -> Result<LadderModule> {
    if radius < 1 {
        return Err(Error::InvalidParameter(format!("window radius must be at least 1, got {radius}")));
    }
    let delta = Real::with_val(ctx.prec(), b - ctx.a());
    let mut m = LadderModule {
        ctx: ctx.clone(),
        lambda_value: lambda.value(ctx),
        lambda,
        b: b.clone(),
        delta,
        radius,
        up: Vec::new(),
        down: Vec::new(),
    };
    m.up = (-radius..=radius).map(|n| (n < 0).then(|| m.phi(n))).collect();
    m.down = (-radius..=radius).map(|n| (n > 0).then(|| m.phi(n - 1))).collect();
    Ok(m)
}

impl LadderModule {
    pub fn ctx(&self) -> &ParamContext {
        &self.ctx
    }

    pub fn lambda(&self) -> &Lambda {
        &self.lambda
    }

    pub fn lambda_value(&self) -> &Real {
        &self.lambda_value
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn b(&self) -> &Real {
        &self.b
    }

    fn based_at_a(&self) -> bool {
        self.delta.is_zero()
    }

    /// `b + 2m - a + k`, exact when `b = a`.
    fn offset_arg(&self, m: i64, k: i64) -> Real {
        let base = self.ctx.real(2 * m + k);
        if self.based_at_a() {
            base
        } else {
            base + &self.delta
        }
    }

    /// The weight `b + 2m`.
    pub fn weight(&self, m: i64) -> Real {
        if self.based_at_a() {
            self.ctx.lin(1, 2 * m)
        } else {
            Real::with_val(self.ctx.prec(), &self.b + 2 * m)
        }
    }

    /// `φ(c)` at `c = b + 2m`.
    pub fn phi(&self, m: i64) -> LadderFactor {
        let ctx = &self.ctx;
        let arg_minus = self.offset_arg(m, 1);
        let arg_plus = Real::with_val(ctx.prec(), ctx.a() * 2u32) + self.offset_arg(m, 1);
        let exact_zero = self.lambda.is_discrete() && arg_minus.clone().abs() == 1;
        let minus_part = if exact_zero { ctx.zero() } else { ctx.qbrace(&arg_minus) - &self.lambda_value };
        let plus_part = ctx.qbrace(&arg_plus) + &self.lambda_value;
        LadderFactor { minus_part, plus_part, exact_zero }
    }

    /// Factor multiplying `e_{n+1}` in `T⁺ e_n`; `None` for a pure shift.
    pub fn up_factor(&self, n: i64) -> Option<&LadderFactor> {
        self.up.get((n + self.radius) as usize).and_then(Option::as_ref)
    }

    /// Factor multiplying `e_{n-1}` in `T⁻ e_n`; `None` for a pure shift.
    pub fn down_factor(&self, n: i64) -> Option<&LadderFactor> {
        self.down.get((n + self.radius) as usize).and_then(Option::as_ref)
    }

    fn coefficient(&self, f: Option<&LadderFactor>) -> Real {
        f.map_or_else(|| self.ctx.one(), LadderFactor::value)
    }

    /// `⟦c⟧t / {1}` at `c = b + 2m`.
    fn shift_term(&self, m: i64) -> Real {
        self.ctx.qdouble(&self.weight(m)) * self.ctx.t() / self.ctx.brace_one()
    }

    /// Coordinates of the defining vector of a generator with subscript `m`
    /// in the ξ-basis of weight `n`.
    fn expansion(&self, g: Generator, m: i64, n: i64) -> Result<[Complex; 3]> {
        let target = xi_vectors(&self.ctx, &self.weight(m));
        let target = match g {
            Generator::Plus => target.plus,
            Generator::Minus => target.minus,
            Generator::A => target.center,
        };
        let local = xi_vectors(&self.ctx, &self.weight(n));
        let mut basis = CMatrix::zeros(3, self.ctx.prec());
        for (j, col) in [&local.plus, &local.center, &local.minus].into_iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                basis[(i, j)] = x.clone();
            }
        }
        let sol = solve(&basis, &target)?;
        Ok([sol[0].conj(), sol[1].conj(), sol[2].conj()])
    }

    fn push_up(&self, out: &mut LadderVector, n: i64, x: &Complex) -> Result<()> {
        let coeff = self.coefficient(self.up_factor(n));
        if coeff.is_zero() {
            return Ok(());
        }
        out.accumulate(n + 1, &x.scale(&coeff))
    }

    fn push_down(&self, out: &mut LadderVector, n: i64, x: &Complex) -> Result<()> {
        let coeff = self.coefficient(self.down_factor(n));
        if coeff.is_zero() {
            return Ok(());
        }
        out.accumulate(n - 1, &x.scale(&coeff))
    }

    /// Applies one generator with subscript index `m` (weight `b + 2m`).
    pub fn apply_generator(&self, g: Generator, m: i64, v: &LadderVector) -> Result<LadderVector> {
        let mut out = LadderVector::zero(self.radius, self.ctx.prec());
        for (n, x) in v.iter() {
            if x.is_zero() {
                continue;
            }
            if n == m {
                match g {
                    Generator::Plus => self.push_up(&mut out, n, x)?,
                    Generator::Minus => self.push_down(&mut out, n, x)?,
                    Generator::A => out.accumulate(n, &x.scale(&self.lambda_value))?,
                }
                continue;
            }
            let [alpha, beta, gamma] = self.expansion(g, m, n)?;
            self.push_up(&mut out, n, &(x * &alpha))?;
            let mut diag = Real::with_val(self.ctx.prec(), &self.lambda_value + self.shift_term(n));
            if g == Generator::A {
                diag -= self.shift_term(m);
            }
            out.accumulate(n, &(x * &beta).scale(&diag))?;
            self.push_down(&mut out, n, &(x * &gamma))?;
        }
        Ok(out)
    }

    fn apply_letter(&self, letter: &Letter, m: i64, v: &LadderVector) -> Result<LadderVector> {
        match letter {
            Letter::Plus => self.apply_generator(Generator::Plus, m, v),
            Letter::Minus => self.apply_generator(Generator::Minus, m, v),
            Letter::Apoly(p) => {
                let prec = self.ctx.prec();
                let mut acc = LadderVector::zero(self.radius, prec);
                for c in p.coeffs().iter().rev() {
                    acc = self.apply_generator(Generator::A, m, &acc)?;
                    acc = acc.add(&v.scale(&Complex::from_real(c.clone())));
                }
                Ok(acc)
            }
        }
    }

    /// Applies the letters of `w` in order.
    pub fn apply_word(&self, w: &LadderWord, v: &LadderVector) -> Result<LadderVector> {
        w.letters().iter().try_fold(v.clone(), |acc, (l, m)| self.apply_letter(l, *m, &acc))
    }

    pub fn basis(&self, n: i64) -> Result<LadderVector> {
        LadderVector::basis(self.radius, n, self.ctx.prec())
    }
}

/// Diagonal invariant form `⟨e_n, e_n⟩_λ = g_n` on the window.
#[derive(Clone, Debug)]
pub struct SesquiForm {
    radius: i64,
    z: Real,
    g: Vec<Real>,
}

impl SesquiForm {
    /// `z_λ = {a+2}{a}⁻¹({1} - λ)⁻¹({2a+1} + λ)⁻¹`; infinite at `λ = {1}`.
    pub fn z(&self) -> &Real {
        &self.z
    }

    pub fn value(&self, n: i64) -> Option<&Real> {
        if n.abs() > self.radius {
            return None;
        }
        self.g.get((n + self.radius) as usize)
    }

    pub fn values(&self) -> impl Iterator<Item = (i64, &Real)> {
        let r = self.radius;
        self.g.iter().enumerate().map(move |(i, g)| (i as i64 - r, g))
    }

    /// `Σ conj(u_n) v_n g_n`; an infinite weight met by a nonzero pair of
    /// coordinates is a domain error.
    pub fn inner(&self, u: &LadderVector, v: &LadderVector) -> Result<Complex> {
        let prec = self.z.prec();
        let mut acc = Complex::zero(prec);
        for ((n, x), (_, y)) in u.iter().zip(v.iter()) {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let g = self.value(n).expect("vectors share the window");
            if !g.is_finite() {
                return Err(Error::Domain(format!("form is infinite on index {n}")));
            }
            acc = acc + (&x.conj() * y).scale(g);
        }
        Ok(acc)
    }

    pub fn norm_sq(&self, v: &LadderVector) -> Result<Real> {
        Ok(self.inner(v, v)?.re)
    }
}

/// Closed-form `g_n` at eigenvalue `λ` for the module based at `b = a`.
///
/// `g_n = ({a+2}/{a+2n}) ∏_{k=1}^{n-1} ({2k+1} - λ)({2k+1+2a} + λ)` for `n ≥ 1`,
/// `g_0 = z_λ`, and for `n ≥ 1`
/// `g_{-n} = ({a+2}/{a-2n}) (({2a-1}+λ)/({2a+1}+λ)) ∏_{k=1}^{n-1} ({2k+1} - λ)({2a-2k-1} + λ)`.
pub fn gram_closed_form(ctx: &ParamContext, lambda: &Lambda, n: i64) -> Real {
    let lam = lambda.value(ctx);
    let prec = ctx.prec();
    let brace_a2 = ctx.qbrace_lin(1, 2);
    let minus_k = |k: i64| -> Real {
        if lambda.is_discrete() && k == 0 {
            ctx.zero()
        } else {
            ctx.qbrace_i(2 * k + 1) - &lam
        }
    };
    match n {
        0 => {
            let den = minus_k(0) * ctx.qbrace(ctx.a()) * (ctx.qbrace_lin(2, 1) + &lam);
            if den.is_zero() {
                Real::with_val(prec, rug::float::Special::Infinity)
            } else {
                brace_a2 / den
            }
        }
        n if n > 0 => {
            let mut g = brace_a2 / ctx.qbrace_lin(1, 2 * n);
            for k in 1..n {
                g *= minus_k(k) * (ctx.qbrace_lin(2, 2 * k + 1) + &lam);
            }
            g
        }
        n => {
            let p = -n;
            let mut g = brace_a2 / ctx.qbrace_lin(1, -2 * p);
            g *= (ctx.qbrace_lin(2, -1) + &lam) / (ctx.qbrace_lin(2, 1) + &lam);
            for k in 1..p {
                g *= minus_k(k) * (ctx.qbrace_lin(2, -2 * k - 1) + &lam);
            }
            g
        }
    }
}

/// The same product for `n ≥ 1` with `-λ` in the second factor, as printed in
/// one summary line of the derivation; kept for comparison only.
pub fn gram_minus_reading(ctx: &ParamContext, lambda: &Lambda, n: i64) -> Real {
    let lam = lambda.value(ctx);
    let mut g = ctx.qbrace_lin(1, 2) / ctx.qbrace_lin(1, 2 * n);
    for k in 1..n {
        g *= (ctx.qbrace_i(2 * k + 1) - &lam) * (ctx.qbrace_lin(2, 2 * k + 1) - &lam);
    }
    g
}

/// Invariant form of a module based at `a` with `0 < λ ≤ {1}`.
pub fn gram_lambda(m: &LadderModule) -> Result<SesquiForm> {
    let ctx = m.ctx();
    if !m.based_at_a() {
        return Err(Error::InvalidParameter("the closed-form Gram matrix needs b = a".into()));
    }
    let lam = m.lambda_value();
    if !m.lambda().is_discrete() && (*lam <= 0 || *lam > ctx.brace_one()) {
        return Err(Error::Domain(format!("lambda = {} outside (0, q + 1/q]", lam.to_string_radix(10, Some(12)))));
    }
    let g: Vec<Real> = (-m.radius()..=m.radius()).map(|n| gram_closed_form(ctx, m.lambda(), n)).collect();
    Ok(SesquiForm { radius: m.radius(), z: g[m.radius() as usize].clone(), g })
}

/// `lim_{λ→{1}} g_n` for `n ≥ 1`: the squared norm of `e_{a+2n}` in `D₂⁺`.
pub fn discrete_norm_plus(ctx: &ParamContext, n: i64) -> Result<Real> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("discrete series index must be positive, got {n}")));
    }
    Ok(gram_closed_form(ctx, &Lambda::Discrete, n))
}

/// `lim_{λ→{1}} g_{-n}` for `n ≥ 1`; this is the `D₂⁻` norm of `e_{a-2n}`
/// times [`d2_minus_factor`].
pub fn discrete_norm_minus(ctx: &ParamContext, n: i64) -> Result<Real> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("discrete series index must be positive, got {n}")));
    }
    Ok(gram_closed_form(ctx, &Lambda::Discrete, -n))
}

/// `{a+2}{a-1} / ({a-2}{a+1})`. Every brace is positive, so the factor is too.
pub fn d2_minus_factor(ctx: &ParamContext) -> Real {
    ctx.qbrace_lin(1, 2) * ctx.qbrace_lin(1, -1) / (ctx.qbrace_lin(1, -2) * ctx.qbrace_lin(1, 1))
}

/// Largest relative defect of `⟨T⁺_c x, y⟩_λ = ({c}/{c+2})⟨x, T⁻_{c+2} y⟩_λ`
/// over neighbouring basis pairs in the window. Pairs touching an infinite
/// Gram entry are skipped, which leaves the `n ≥ 1` and `n ≤ -1` sectors at
/// `λ = {1}`.
pub fn adjoint_defect(m: &LadderModule, form: &SesquiForm) -> Result<Real> {
    let ctx = m.ctx();
    let mut worst = ctx.zero();
    for k in -m.radius()..m.radius() {
        let finite = |n: i64| form.value(n).is_some_and(|g| g.is_finite());
        if !finite(k) || !finite(k + 1) {
            continue;
        }
        let x = m.basis(k)?;
        let y = m.basis(k + 1)?;
        let lhs = form.inner(&m.apply_generator(Generator::Plus, k, &x)?, &y)?;
        let inner = form.inner(&x, &m.apply_generator(Generator::Minus, k + 1, &y)?)?;
        let ratio = ctx.qbrace(&m.weight(k)) / ctx.qbrace(&m.weight(k + 1));
        let rhs = inner.scale(&ratio);
        let scale = lhs.abs().max(&rhs.abs());
        if scale.is_zero() {
            continue;
        }
        let d = (&lhs - &rhs).abs() / scale;
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

/// Splits `v` into its `n > 0`, `n = 0` and `n < 0` parts.
pub fn project_sign(v: &LadderVector) -> (LadderVector, LadderVector, LadderVector) {
    let prec = v.get(0).map_or(64, Complex::prec);
    let mut parts = [
        LadderVector::zero(v.radius(), prec),
        LadderVector::zero(v.radius(), prec),
        LadderVector::zero(v.radius(), prec),
    ];
    for (n, x) in v.iter() {
        let slot = match n.signum() {
            1 => 0,
            0 => 1,
            _ => 2,
        };
        parts[slot].set(n, x.clone()).expect("same window");
    }
    let [plus, zero, minus] = parts;
    (plus, zero, minus)
}
