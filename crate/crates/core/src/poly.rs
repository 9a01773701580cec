//! Real polynomials at arbitrary precision and a real-zero finder for
//! polynomials whose zeros are all real and simple.

use rug::Float;

use crate::error::{Error, Result};
use crate::scalars::Real;

/// Polynomial with real coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq)]
pub struct QPolynomial {
    coeffs: Vec<Real>,
    prec: u32,
}

impl QPolynomial {
    /// Builds a polynomial, dropping exact trailing zeros.
    pub fn new(coeffs: Vec<Real>, prec: u32) -> Self {
        let mut p = QPolynomial { coeffs, prec };
        p.trim_exact();
        p
    }

    pub fn zero(prec: u32) -> Self {
        QPolynomial { coeffs: Vec::new(), prec }
    }

    pub fn constant(c: Real) -> Self {
        let prec = c.prec();
        QPolynomial::new(vec![c], prec)
    }

    /// The monomial `x`.
    pub fn x(prec: u32) -> Self {
        QPolynomial::new(vec![Float::new(prec), Float::with_val(prec, 1)], prec)
    }

    /// `c0 + c1·x`.
    pub fn linear(c0: Real, c1: Real) -> Self {
        let prec = c0.prec().max(c1.prec());
        QPolynomial::new(vec![c0, c1], prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Real> {
        self.coeffs.last()
    }

    fn trim_exact(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Drops leading coefficients whose magnitude is below `rel_tol` times
    /// the largest coefficient.
    pub fn strip(mut self, rel_tol: &Real) -> Self {
        let scale = self.max_abs_coeff();
        let floor = Real::with_val(self.prec, &scale * rel_tol);
        while self.coeffs.last().is_some_and(|c| c.clone().abs() <= floor) {
            self.coeffs.pop();
        }
        self
    }

    pub fn max_abs_coeff(&self) -> Real {
        self.coeffs.iter().map(|c| c.clone().abs()).fold(Float::new(self.prec), |m, c| if c > m { c } else { m })
    }

    /// Rounds every coefficient to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        QPolynomial::new(self.coeffs.iter().map(|c| Float::with_val(prec, c)).collect(), prec)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Real) -> Real {
        let mut acc = Float::new(self.prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Evaluation by summing `c_i x^i` term by term.
    pub fn eval_terms(&self, x: &Real) -> Real {
        let mut acc = Float::new(self.prec);
        let mut pow = Float::with_val(self.prec, 1);
        for c in &self.coeffs {
            acc += Float::with_val(self.prec, c * &pow);
            pow *= x;
        }
        acc
    }

    /// `Σ |c_i| max(1, |x|)^i`, the scale against which evaluation error is
    /// measured.
    pub fn eval_abs(&self, x: &Real) -> Real {
        let ax = x.clone().abs().max(&Float::with_val(self.prec, 1));
        let mut acc = Float::new(self.prec);
        for c in self.coeffs.iter().rev() {
            acc *= &ax;
            acc += c.clone().abs();
        }
        acc
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, x: &Real) -> (Real, Real) {
        let mut p = Float::new(self.prec);
        let mut dp = Float::new(self.prec);
        for c in self.coeffs.iter().rev() {
            dp *= x;
            dp += &p;
            p *= x;
            p += c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        let coeffs =
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| Float::with_val(self.prec, c * i as u64)).collect();
        QPolynomial::new(coeffs, self.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let mut c = Float::new(prec);
                if let Some(x) = self.coeffs.get(i) {
                    c += x;
                }
                if let Some(y) = other.coeffs.get(i) {
                    c += y;
                }
                c
            })
            .collect();
        QPolynomial::new(coeffs, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Float::with_val(other.prec, -1)))
    }

    pub fn scale(&self, s: &Real) -> Self {
        let coeffs = self.coeffs.iter().map(|c| Float::with_val(self.prec, c * s)).collect();
        QPolynomial::new(coeffs, self.prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() || other.is_zero() {
            return QPolynomial::zero(prec);
        }
        let mut coeffs = vec![Float::new(prec); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += Float::with_val(prec, x * y);
            }
        }
        QPolynomial::new(coeffs, prec)
    }

    /// `p(alpha·X + beta)` as a polynomial in `X`.
    pub fn compose_affine(&self, alpha: &Real, beta: &Real) -> Self {
        let inner = QPolynomial::linear(beta.clone(), alpha.clone());
        let mut acc = QPolynomial::zero(self.prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner).add(&QPolynomial::constant(c.clone()));
        }
        acc
    }

    /// Normalized residual `|p(x)| / Σ|c_i| max(1, |x|)^i`.
    pub fn relative_residual(&self, x: &Real) -> Real {
        let scale = self.eval_abs(x);
        if scale.is_zero() {
            return scale;
        }
        self.eval(x).abs() / scale
    }
}

/// Sorted real zeros with their relative residuals.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub zeros: Vec<Real>,
    pub residuals: Vec<Real>,
}

impl ZeroSet {
    pub fn largest(&self) -> Option<&Real> {
        self.zeros.last()
    }

    /// True when every gap between neighbours exceeds ten times the larger
    /// neighbouring residual.
    pub fn simple(&self) -> bool {
        self.zeros.windows(2).zip(self.residuals.windows(2)).all(|(z, r)| {
            let gap = Float::with_val(z[0].prec(), &z[1] - &z[0]);
            let r = if r[0] > r[1] { &r[0] } else { &r[1] };
            gap > Float::with_val(z[0].prec(), r * 10u32)
        })
    }
}

/// Fujiwara bound: every zero has modulus at most
/// `2 max_k |c_{n-k} / c_n|^{1/k}`.
pub fn zero_bound(p: &QPolynomial) -> Result<Real> {
    let lead = p.leading().ok_or_else(|| Error::Domain("zero polynomial has no zero bound".into()))?.clone();
    let prec = p.prec();
    let c = p.coeffs();
    let n = c.len() - 1;
    let mut m = Float::new(prec);
    for k in 1..=n {
        let mut r = Float::with_val(prec, &c[n - k] / &lead).abs();
        if k == n {
            r /= 2u32;
        }
        let r = r.root(k as u32);
        if r > m {
            m = r;
        }
    }
    // nudge past the bound so Newton never starts on a zero
    Ok(m * 2u32 + 1u32)
}

fn step_floor(prec: u32, x: &Real) -> Real {
    let scale = x.clone().abs().max(&Float::with_val(prec, 1));
    scale * Float::with_val(prec, Float::i_exp(1, -(prec as i32 - 12)))
}

/// Newton iteration on `p` with the zeros in `found` implicitly divided out
/// (Maehly's correction). Started to the right of every remaining zero of a
/// real-rooted polynomial the iterates decrease monotonically, so a step that
/// does not move left means rounding noise has been reached.
fn maehly_newton(p: &QPolynomial, found: &[Real], start: Real, max_iter: usize) -> Option<Real> {
    let prec = p.prec();
    let mut x = start;
    for it in 0..max_iter {
        let (v, dv) = p.eval_with_derivative(&x);
        if v.is_zero() {
            return Some(x);
        }
        let mut corr = Float::new(prec);
        for z in found {
            corr += Float::with_val(prec, &x - z).recip();
        }
        let denom = dv - Float::with_val(prec, &v * &corr);
        if denom.is_zero() || !denom.is_finite() {
            return None;
        }
        let step = v / denom;
        if !step.is_finite() {
            return None;
        }
        // a backwards step from a converged iterate is rounding noise; from
        // anywhere else it is an overshoot to correct
        if step <= 0 && it > 0 && p.relative_residual(&x) < Float::with_val(prec, Float::i_exp(1, -((prec / 2) as i32)))
        {
            return Some(x);
        }
        x -= &step;
        if step.abs() <= step_floor(prec, &x) {
            return Some(x);
        }
    }
    None
}

/// Largest real zero by Newton from the right, starting at `start` (which
/// must exceed every real zero) or at [`zero_bound`].
pub fn largest_zero(p: &QPolynomial, start: Option<Real>) -> Result<Real> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::Domain("constant polynomial has no zeros".into()));
    }
    let start = match start {
        Some(s) => s,
        None => zero_bound(p)?,
    };
    maehly_newton(p, &[], start, 200 + 40 * deg).ok_or(Error::ComplexZeros { found: 0, degree: deg })
}

/// All zeros of a polynomial expected to have only real simple zeros.
///
/// Zeros are peeled off from the right. Failure to converge, a zero that
/// does not move left, or a residual above `residual_tol` is reported as
/// [`Error::ComplexZeros`] with the number of zeros found so far.
pub fn poly_zeros(p: &QPolynomial, residual_tol: &Real) -> Result<ZeroSet> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::Domain("zeros of a constant polynomial".into()));
    }
    let prec = p.prec();
    if deg == 1 {
        let c = p.coeffs();
        let z = -Float::with_val(prec, &c[0] / &c[1]);
        let r = p.relative_residual(&z);
        return Ok(ZeroSet { zeros: vec![z], residuals: vec![r] });
    }
    let mut found: Vec<Real> = Vec::with_capacity(deg);
    let mut start = zero_bound(p)?;
    let fail = |k: usize| Error::ComplexZeros { found: k, degree: deg };
    for k in 0..deg {
        let z = maehly_newton(p, &found, start.clone(), 200 + 40 * deg).ok_or_else(|| fail(k))?;
        if let Some(prev) = found.last() {
            if &z >= prev {
                return Err(fail(k));
            }
        }
        if p.relative_residual(&z) > *residual_tol {
            return Err(fail(k));
        }
        // restart just left of the new zero; the deflated polynomial has no
        // zeros between here and z
        let offset = step_floor(prec, &z) * Float::with_val(prec, Float::i_exp(1, (prec / 2) as i32));
        start = Float::with_val(prec, &z - &offset);
        found.push(z);
    }
    found.reverse();
    let residuals = found.iter().map(|z| p.relative_residual(z)).collect();
    Ok(ZeroSet { zeros: found, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn r(v: f64) -> Real {
        Float::with_val(P, v)
    }

    fn from_roots(roots: &[f64]) -> QPolynomial {
        roots.iter().fold(QPolynomial::constant(r(1.0)), |acc, &z| acc.mul(&QPolynomial::linear(r(-z), r(1.0))))
    }

    #[test]
    fn horner_matches_term_sum() {
        let p = QPolynomial::new(vec![r(1.5), r(-2.0), r(0.25), r(3.0)], P);
        let x = r(0.7);
        let d = Float::with_val(P, p.eval(&x) - p.eval_terms(&x)).abs();
        assert!(d < Float::with_val(P, 1e-60));
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        assert!(QPolynomial::constant(r(4.0)).derivative().is_zero());
    }

    #[test]
    fn leibniz_rule() {
        let p = QPolynomial::new(vec![r(1.0), r(2.0), r(-1.0)], P);
        let q = QPolynomial::new(vec![r(0.5), r(0.0), r(3.0), r(1.0)], P);
        let lhs = p.mul(&q).derivative();
        let rhs = p.derivative().mul(&q).add(&p.mul(&q.derivative()));
        assert_eq!(lhs.degree(), rhs.degree());
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            assert!(Float::with_val(P, a - b).abs() < Float::with_val(P, 1e-60));
        }
    }

    #[test]
    fn affine_composition() {
        let p = QPolynomial::new(vec![r(1.0), r(-3.0), r(2.0)], P);
        let comp = p.compose_affine(&r(0.5), &r(-1.0));
        for x in [-2.0, 0.0, 1.3] {
            let inner = r(0.5 * x - 1.0);
            let d = Float::with_val(P, comp.eval(&r(x)) - p.eval(&inner)).abs();
            assert!(d < Float::with_val(P, 1e-60));
        }
    }

    #[test]
    fn strip_drops_negligible_leading_terms() {
        let p = QPolynomial::new(vec![r(1.0), r(2.0), r(1e-90)], P);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.strip(&r(1e-70)).degree(), Some(1));
    }

    #[test]
    fn linear_zero_is_exact() {
        let p = QPolynomial::linear(r(-3.0), r(4.0));
        let zs = poly_zeros(&p, &r(1e-60)).unwrap();
        assert_eq!(zs.zeros[0], 0.75);
    }

    #[test]
    fn finds_all_real_zeros() {
        let roots = [-0.9, -0.31, 0.0, 0.2, 0.21, 0.95];
        let p = from_roots(&roots);
        let zs = poly_zeros(&p, &r(1e-60)).unwrap();
        assert!(zs.simple());
        for (z, want) in zs.zeros.iter().zip(roots) {
            assert!(Float::with_val(P, z - want).abs() < Float::with_val(P, 1e-50));
        }
        let top = largest_zero(&p, None).unwrap();
        assert!(Float::with_val(P, &top - 0.95).abs() < Float::with_val(P, 1e-50));
    }

    #[test]
    fn complex_pair_is_reported() {
        // (x^2 + 1)(x - 0.5)
        let p = QPolynomial::new(vec![r(1.0), r(0.0), r(1.0)], P).mul(&QPolynomial::linear(r(-0.5), r(1.0)));
        match poly_zeros(&p, &r(1e-60)) {
            Err(Error::ComplexZeros { found, degree }) => {
                assert_eq!(degree, 3);
                assert!(found <= 1);
            }
            other => panic!("expected complex-zero report, got {other:?}"),
        }
    }
}
