//! Spin-s irreducible *-representations of U_q(su(2)), the twisted element
//! `B_t` and its spectrum.
//!
//! Basis vectors `ξ^s_i` are ordered by descending weight, so row 0 carries
//! `i = s`. With this ordering the spin-1/2 matrices of `k, e, f` are the
//! pairing matrices `diag(q, q^-1)`, `[[0, q^1/2], [0, 0]]` and
//! `[[0, 0], [q^-1/2, 0]]`.
//!
//! Matrix entries:
//! `k ξ_i = q^{2i} ξ_i`,
//! `e ξ_i = q^{i+1} √([s-i][s+i+1]) ξ_{i+1}`,
//! `f ξ_i = q^{-i} √([s-i+1][s+i]) ξ_{i-1}`.
//! The `f` entries are the closed form of `e† k^-1`, which the *-structure
//! `e* = f k` forces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::parallel::Exec;
use crate::scalars::{Complex, ParamContext, Real};

/// Half-integer spin stored as `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Spin(u32);

impl Spin {
    pub fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    /// Spin from a decimal value such as `1.5`; fails unless `2s` is a
    /// non-negative integer.
    pub fn from_f64(s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if twice < 0.0 || twice.fract() != 0.0 || twice > f64::from(u32::MAX) {
            return Err(Error::InvalidParameter(format!("{s} is not a non-negative half-integer")));
        }
        Ok(Spin(twice as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Doubled weights `2i` in basis order: `2s, 2s-2, …, -2s`.
    pub fn doubled_weights(self) -> impl Iterator<Item = i64> {
        let t = i64::from(self.0);
        (0..=t).map(move |r| t - 2 * r)
    }
}

impl std::fmt::Display for Spin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Matrices of `k`, `e`, `f` in the spin-s irrep.
#[derive(Clone, Debug)]
pub struct SpinRep {
    pub spin: Spin,
    pub k: CMatrix,
    pub e: CMatrix,
    pub f: CMatrix,
}

fn half(ctx: &ParamContext, doubled: i64) -> Real {
    ctx.real(doubled) / 2u32
}

pub fn build_spin_rep(ctx: &ParamContext, spin: Spin) -> SpinRep {
    let prec = ctx.prec();
    let dim = spin.dim();
    let t = i64::from(spin.twice());
    let mut k = CMatrix::zeros(dim, prec);
    let mut e = CMatrix::zeros(dim, prec);
    let mut f = CMatrix::zeros(dim, prec);
    for (r, m) in spin.doubled_weights().enumerate() {
        k[(r, r)] = Complex::from_real(ctx.qpow_i(m));
        if r > 0 {
            // raise ξ_i to ξ_{i+1}
            let lo = ctx.qbracket(&half(ctx, t - m));
            let hi = ctx.qbracket(&half(ctx, t + m + 2));
            let entry = ctx.qpow(&half(ctx, m + 2)) * (lo * hi).sqrt();
            e[(r - 1, r)] = Complex::from_real(entry);
        }
        if r + 1 < dim {
            // lower ξ_i to ξ_{i-1}
            let lo = ctx.qbracket(&half(ctx, t - m + 2));
            let hi = ctx.qbracket(&half(ctx, t + m));
            let entry = ctx.qpow(&half(ctx, -m)) * (lo * hi).sqrt();
            f[(r + 1, r)] = Complex::from_real(entry);
        }
    }
    SpinRep { spin, k, e, f }
}

impl SpinRep {
    /// `k^-1`, inverted entrywise on the diagonal.
    pub fn k_inv(&self) -> CMatrix {
        let dim = self.k.dim();
        let prec = self.k[(0, 0)].prec();
        let mut out = CMatrix::zeros(dim, prec);
        for r in 0..dim {
            out[(r, r)] = Complex::from_real(Real::with_val(prec, 1) / &self.k[(r, r)].re);
        }
        out
    }

    /// Largest entrywise defect among the defining relations and the
    /// *-structure: `ke = q²ek`, `kf = q⁻²fk`, `[e,f] = (k-k⁻¹)/(q-q⁻¹)`,
    /// `e† = fk`, `f† = k⁻¹e`.
    pub fn relation_defects(&self, ctx: &ParamContext) -> Vec<(&'static str, Real)> {
        let q2 = Complex::from_real(ctx.qpow_i(2));
        let qm2 = Complex::from_real(ctx.qpow_i(-2));
        let kinv = self.k_inv();
        let ke = self.k.matmul(&self.e);
        let ek = self.e.matmul(&self.k).scale(&q2);
        let kf = self.k.matmul(&self.f);
        let fk = self.f.matmul(&self.k);
        let comm = self.e.matmul(&self.f).sub(&self.f.matmul(&self.e));
        let denom = Complex::from_real(ctx.real(1) / ctx.qdouble(&ctx.one()));
        let rhs = self.k.sub(&kinv).scale(&denom);
        vec![
            ("ke = q^2 ek", ke.max_abs_diff(&ek)),
            ("kf = q^-2 fk", kf.max_abs_diff(&fk.scale(&qm2))),
            ("[e,f] = (k - k^-1)/(q - q^-1)", comm.max_abs_diff(&rhs)),
            ("e^dagger = fk", self.e.adjoint().max_abs_diff(&fk)),
            ("f^dagger = k^-1 e", self.f.adjoint().max_abs_diff(&kinv.matmul(&self.e))),
        ]
    }
}

/// `B_t` and `√-1·B_t` in one irrep.
#[derive(Clone, Debug)]
pub struct BtMatrix {
    pub spin: Spin,
    pub m: CMatrix,
    pub im: CMatrix,
}

/// `B_t = -q^{1/2} k⁻¹e + q^{1/2} f - √-1 (q - q⁻¹)⁻¹ t k⁻¹`.
pub fn build_bt(ctx: &ParamContext, rep: &SpinRep) -> BtMatrix {
    let sqrt_q = Complex::from_real(ctx.qpow(&ctx.real(0.5)));
    let kinv = rep.k_inv();
    let first = kinv.matmul(&rep.e).scale(&-sqrt_q.clone());
    let second = rep.f.scale(&sqrt_q);
    let coeff = Complex::from_imag(-(ctx.t().clone() / ctx.qdouble(&ctx.one())));
    let third = kinv.scale(&coeff);
    let m = first.add(&second).add(&third);
    let im = m.scale(&Complex::i(ctx.prec()));
    BtMatrix { spin: rep.spin, m, im }
}

/// `[a + 2i]` for `i = -s, …, s`, ascending.
pub fn expected_spectrum(ctx: &ParamContext, spin: Spin) -> Vec<Real> {
    let mut out: Vec<Real> = spin.doubled_weights().map(|m| ctx.qbracket(&ctx.lin(1, m))).collect();
    out.reverse();
    out
}

/// Real spectrum of `√-1·B_t`, ascending.
pub fn ibt_spectrum(ctx: &ParamContext, bt: &BtMatrix) -> Result<Vec<Real>> {
    Ok(hermitian_eigen(&bt.im, &ctx.tol(8), 200)?.values)
}

/// Orthonormal eigenbasis `η^s_{[a+2i]}` of `√-1·B_t`, ordered like the
/// ascending spectrum.
#[derive(Clone, Debug)]
pub struct IbtEigenbasis {
    pub values: Vec<Real>,
    pub vectors: Vec<Vec<Complex>>,
}

/// Eigenvectors with the phase fixed by making the first non-negligible
/// coordinate positive real. Fails when two eigenvalues are closer than
/// `10^-(digits/2)`.
pub fn ibt_eigenbasis(ctx: &ParamContext, bt: &BtMatrix) -> Result<IbtEigenbasis> {
    let eig = hermitian_eigen(&bt.im, &ctx.tol(8), 200)?;
    let gap_floor = ctx.ten_pow(-i64::from(ctx.digits() / 2));
    for w in eig.values.windows(2) {
        let gap = Real::with_val(ctx.prec(), &w[1] - &w[0]);
        if gap < gap_floor {
            return Err(Error::DegenerateSpectrum { gap: gap.to_string_radix(10, Some(6)) });
        }
    }
    let negligible = ctx.ten_pow(-i64::from(ctx.digits() / 2));
    let vectors = (0..eig.vectors.dim())
        .map(|k| {
            let mut v = eig.vectors.column(k);
            if let Some(pivot) = v.iter().find(|x| x.abs() > negligible) {
                let mag = pivot.abs();
                let phase = Complex::new(
                    Real::with_val(ctx.prec(), &pivot.re / &mag),
                    -Real::with_val(ctx.prec(), &pivot.im / &mag),
                );
                v = v.iter().map(|x| x * &phase).collect();
            }
            v
        })
        .collect();
    Ok(IbtEigenbasis { values: eig.values, vectors })
}

/// One eigenvalue of `√-1·B_t` next to its predicted value `[a + 2i]`.
#[derive(Clone, Debug)]
pub struct SpectrumSample {
    pub spin: Spin,
    /// `2i`.
    pub twice_i: i64,
    pub computed: Real,
    pub expected: Real,
}

impl SpectrumSample {
    pub fn abs_err(&self) -> Real {
        Real::with_val(self.computed.prec(), &self.computed - &self.expected).abs()
    }

    /// Error relative to `max(1, |[a + 2i]|)`.
    pub fn rel_err(&self) -> Real {
        let scale = self.expected.clone().abs().max(&Real::with_val(self.expected.prec(), 1));
        self.abs_err() / scale
    }
}

/// Sorted spectrum of one irrep paired with `[a + 2i]`, `i = -s, …, s`.
pub fn spectrum_for(ctx: &ParamContext, spin: Spin) -> Result<Vec<SpectrumSample>> {
    let bt = build_bt(ctx, &build_spin_rep(ctx, spin));
    let computed = ibt_spectrum(ctx, &bt)?;
    let t = i64::from(spin.twice());
    Ok(computed
        .into_iter()
        .zip(expected_spectrum(ctx, spin))
        .enumerate()
        .map(|(k, (computed, expected))| SpectrumSample { spin, twice_i: -t + 2 * k as i64, computed, expected })
        .collect())
}

/// [`spectrum_for`] over several spins, one work item per spin.
pub fn spectrum_sweep(ctx: &ParamContext, spins: &[Spin], exec: Exec) -> Result<Vec<SpectrumSample>> {
    let per_spin = exec.map(spins, |&s| spectrum_for(ctx, s));
    let mut out = Vec::new();
    for rows in per_spin {
        out.extend(rows?);
    }
    Ok(out)
}

/// Spins `0, 1/2, …, twice_max/2`.
pub fn spins_up_to(twice_max: u32) -> Vec<Spin> {
    (0..=twice_max).map(Spin::from_twice).collect()
}

/// The three spin-1 vectors `ξ^{([[c]];1)}`, `ξ₊^{([[c]];1)}`,
/// `ξ₋^{([[c]];1)}` in the basis `(ξ¹₁, ξ¹₀, ξ¹₋₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct XiVectors {
    pub center: Vec<Complex>,
    pub plus: Vec<Complex>,
    pub minus: Vec<Complex>,
}

pub fn xi_vectors(ctx: &ParamContext, c: &Real) -> XiVectors {
    let prec = ctx.prec();
    let half = ctx.real(0.5);
    let root_brace = ctx.brace_one().sqrt();
    let dc = ctx.qdouble(c);
    let qpow = |x: Real| ctx.qpow(&x);
    let re = |x: Real| Complex::from_real(x);
    let im = |x: Real| Complex::from_imag(x);

    let center = vec![re(qpow(half.clone())), im(-(dc / &root_brace)), re(qpow(-half.clone()))];
    let c_plus_half = Real::with_val(prec, c + &half);
    let c_minus_half = Real::with_val(prec, c - &half);
    let plus = vec![re(-qpow(-c_plus_half.clone())), im(root_brace.clone()), re(qpow(c_plus_half))];
    let minus = vec![re(qpow(c_minus_half.clone())), im(root_brace), re(-qpow(-c_minus_half))];
    XiVectors { center, plus, minus }
}
