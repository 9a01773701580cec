//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

use common::{derivative_at, eval_at, rel, tol, word, Oracle};
use qcocycle::askey_wilson::AskeyWilson;
use qcocycle::cocycle::{epsilon_generator, growth_closed, growth_numeric, properness_scan, CocycleContext};
use qcocycle::ladder::{
    d2_minus_factor, discrete_norm_minus, discrete_norm_plus, gram_closed_form, make_module, Generator, LadderVector,
    LadderWord, Lambda, Letter,
};
use qcocycle::poly::QPolynomial;
use qcocycle::uq_irreps::{build_bt, build_spin_rep, ibt_spectrum, spins_up_to};
use qcocycle::{Complex, Exec, ParamContext, Result};

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn ctx(q: &str, a: &str, digits: u32) -> ParamContext {
    ParamContext::parse(q, a, digits).expect("valid parameters")
}

fn sci(x: &Float) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        x.to_string_radix(10, Some(3))
    }
}

fn max_into(acc: &mut Float, x: Float) {
    if x > *acc || x.is_nan() {
        *acc = x;
    }
}

fn spectrum_theorem() -> Outcome {
    let start = Instant::now();
    let mut worst = Float::new(64);
    let mut count = 0;
    for q in ["0.3", "0.5", "0.9"] {
        for a in ["0.7", "1.3"] {
            let c = ctx(q, a, 50);
            let o = Oracle::new(&c);
            for spin in spins_up_to(6) {
                let got = ibt_spectrum(&c, &build_bt(&c, &build_spin_rep(&c, spin)))?;
                let t = spin.twice() as i32;
                let want: Vec<Float> = (0..=t).map(|k| o.bracket(&o.lin(1, 2 * k - t))).collect();
                for (g, w) in got.iter().zip(&want) {
                    max_into(&mut worst, Float::with_val(64, rel(g, w)));
                    count += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let limit = Float::with_val(64, 10).pow(-42);
    Ok((
        worst < limit && elapsed < Duration::from_secs(10),
        format!("{count} eigenvalues, max rel err {} (< 1e-42), {:.2?} (< 10s)", sci(&worst), elapsed),
    ))
}

fn pairing_ground_truth() -> Outcome {
    let c = ctx("0.5", "1.3", 50);
    let rep = build_spin_rep(&c, qcocycle::uq_irreps::Spin::from_twice(1));
    let q = c.q().clone();
    let p = |e: f64| Complex::from_real(Float::with_val(c.prec(), (&q).pow(Float::with_val(c.prec(), e))));
    let z = Complex::zero(c.prec());
    let k = [[p(1.0), z.clone()], [z.clone(), p(-1.0)]];
    let e = [[z.clone(), p(0.5)], [z.clone(), z.clone()]];
    let f = [[z.clone(), z.clone()], [p(-0.5), z.clone()]];
    let mut ok = true;
    for (m, want) in [(&rep.k, &k), (&rep.e, &e), (&rep.f, &f)] {
        for i in 0..2 {
            for j in 0..2 {
                ok &= m[(i, j)] == want[i][j];
            }
        }
    }
    Ok((ok, "k, e, f at s=1/2 bitwise equal to powers of q".into()))
}

fn ladder_recursion() -> Outcome {
    let c = ctx("0.5", "1.3", 50);
    let o = Oracle::new(&c);
    let mut worst = c.zero();
    let mut cases = 0;
    let b_shifted = c.lin(1, 0) + c.real(0.5);
    let setups = [
        (Lambda::Value(c.real(1)), c.a().clone()),
        (Lambda::Value(c.brace_one() * c.real(0.37)), c.a().clone()),
        (Lambda::Discrete, c.a().clone()),
        (Lambda::Value(c.real(1)), b_shifted),
    ];
    for (lambda, b) in setups {
        let m = make_module(&c, lambda, &b, 10)?;
        let lam = m.lambda_value().clone();
        for n in -9..=9i64 {
            let weight = Float::with_val(c.prec(), &b + 2 * n);
            let ca = Float::with_val(c.prec(), &weight - &o.a);
            let cpa = Float::with_val(c.prec(), &weight + &o.a);
            let up_down = (o.brace(&(ca.clone() + 1u32)) - &lam) * (o.brace(&(cpa.clone() + 1u32)) + &lam);
            let down_up = (o.brace(&(ca - 1u32)) - &lam) * (o.brace(&(cpa - 1u32)) + &lam);
            for (letters, want) in
                [(vec![Letter::Plus, Letter::Minus], up_down), (vec![Letter::Minus, Letter::Plus], down_up)]
            {
                let v = m.apply_word(&LadderWord::new(letters, n), &m.basis(n)?)?;
                let expect = m.basis(n)?.scale(&Complex::from_real(want.clone()));
                let scale = want.abs().max(&c.one());
                max_into(&mut worst, v.max_abs_diff(&expect) / scale);
                cases += 1;
            }
        }
    }
    let t = tol(&c, 8);
    Ok((worst < t, format!("{cases} compositions, max rel err {} (< {})", sci(&worst), sci(&t))))
}

fn gram_recursion() -> Outcome {
    let c = ctx("0.5", "1.3", 50);
    let o = Oracle::new(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = c.zero();
    let mut g1_exact = true;
    let phi = |m: i32, lam: &Float| (o.brace(&o.f(f64::from(2 * m + 1))) - lam) * (o.brace_lin(2, 2 * m + 1) + lam);
    let weight_brace = |m: i32| o.brace_lin(1, 2 * m);
    for _ in 0..10 {
        let lam = c.brace_one() * c.real(rng.gen_range(0.01..0.99));
        let lambda = Lambda::Value(lam.clone());
        g1_exact &= gram_closed_form(&c, &lambda, 1) == 1;
        let mut g = c.one();
        for n in 1..10 {
            g = g * weight_brace(n) / weight_brace(n + 1) * phi(n, &lam);
            max_into(&mut worst, rel(&gram_closed_form(&c, &lambda, i64::from(n + 1)), &g));
        }
        // g_1 = ({c_0}/{c_1}) φ(0) g_0, then the n ≤ 0 side runs the other way
        let mut g = weight_brace(1) / (weight_brace(0) * phi(0, &lam));
        max_into(&mut worst, rel(&gram_closed_form(&c, &lambda, 0), &g));
        for n in (-10..0).rev() {
            g = g * phi(n, &lam) * weight_brace(n + 1) / weight_brace(n);
            max_into(&mut worst, rel(&gram_closed_form(&c, &lambda, i64::from(n)), &g));
        }
    }
    let t = tol(&c, 8);
    Ok((
        worst < t && g1_exact,
        format!("10 λ, |n| ≤ 10: max rel err {} (< {}); g_1 == 1 exactly: {g1_exact}", sci(&worst), sci(&t)),
    ))
}

fn kernel_exact() -> Outcome {
    let c = ctx("0.5", "1.3", 50);
    let m = make_module(&c, Lambda::Discrete, c.a(), 4)?;
    let factor = m.down_factor(1).expect("n = 1 has a ladder factor");
    let out = m.apply_generator(Generator::Minus, 1, &m.basis(1)?)?;
    let exact = factor.is_exact_zero() && factor.minus_part.is_zero() && out.iter().all(|(_, x)| x.is_zero());
    Ok((exact, format!("factor ({{1}} - λ) flagged as an exact zero and T⁻e_(a+2) == 0: {exact}")))
}

fn discrete_limits() -> Outcome {
    let c = ctx("0.5", "1.3", 50);
    let o = Oracle::new(&c);
    let lambda = Lambda::Value(c.brace_one() - c.ten_pow(-20));
    let mut worst = c.zero();
    for n in 1..=10 {
        max_into(&mut worst, rel(&gram_closed_form(&c, &lambda, n), &discrete_norm_plus(&c, n)?));
        max_into(&mut worst, rel(&gram_closed_form(&c, &lambda, -n), &discrete_norm_minus(&c, n)?));
    }
    let factor = o.brace_lin(1, 2) * o.brace_lin(1, -1) / (o.brace_lin(1, -2) * o.brace_lin(1, 1));
    let ferr = rel(&d2_minus_factor(&c), &factor);
    let limit = c.ten_pow(-15);
    Ok((
        worst < limit && ferr < tol(&c, 8),
        format!("limit rel err {} (< 1e-15); D₂⁻ factor rel err {}", sci(&worst), sci(&ferr)),
    ))
}

/// Removes `x·p_n` against `p_{n+1}, p_n, p_{n-1}` by leading coefficients and
/// returns what is left relative to the largest coefficient involved.
fn three_term_remainder(prev: &QPolynomial, cur: &QPolynomial, next: &QPolynomial) -> Float {
    let prec = cur.prec();
    let x = QPolynomial::x(prec);
    let xp = x.mul(cur);
    let scale = xp.max_abs_coeff();
    let mut r = xp;
    for basis in [next, cur, prev] {
        let d = basis.degree().expect("nonzero");
        let coeff = r.coeffs().get(d).cloned().unwrap_or_else(|| Float::new(prec));
        r = r.sub(&basis.scale(&(coeff / basis.leading().expect("nonzero"))));
    }
    r.max_abs_coeff() / scale
}

fn askey_wilson_engine() -> Outcome {
    let c = ctx("0.5", "1.3", 50);
    let aw = AskeyWilson::new(&c);
    let mut bad_degree = Vec::new();
    let mut norm_err = c.zero();
    let mut series = Vec::new();
    for n in 0..=60usize {
        let b = aw.build(n)?;
        if b.p.degree() != Some(n) || b.p_sub.degree() != Some(n) {
            bad_degree.push(n);
        }
        let one = Float::with_val(b.working_prec, 1);
        let v = eval_at(&b.p_sub_wide, &one) - 1u32;
        max_into(&mut norm_err, Float::with_val(c.prec(), v.abs()));
        if n <= 41 {
            series.push(b.series);
        }
    }
    let mut lib = c.zero();
    let mut fit = c.zero();
    for n in 1..=40 {
        max_into(&mut lib, aw.recurrence_residual(n, &series[n - 1], &series[n], &series[n + 1]));
        max_into(&mut fit, three_term_remainder(&series[n - 1], &series[n], &series[n + 1]));
    }
    let t = tol(&c, 10);
    Ok((
        bad_degree.is_empty() && norm_err < t && lib < t && fit < t,
        format!(
            "degrees ok: {}; max |P_n(1)-1| {}; recurrence residual {} (literature coefficients), {} (fitted); tol {}",
            bad_degree.is_empty(),
            sci(&norm_err),
            sci(&lib),
            sci(&fit),
            sci(&t)
        ),
    ))
}

fn counit_character() -> Outcome {
    let c = ctx("0.5", "1.3", 50);
    let o = Oracle::new(&c);
    let mut worst = c.zero();
    let da = o.double(&o.a);
    for k in [0, -2, 2, 4] {
        let cc = o.lin(1, k);
        let target = o.double(&cc) - &da;
        for g in [Generator::Plus, Generator::Minus] {
            let e = epsilon_generator(&c, g, &cc);
            max_into(&mut worst, rel(&e.re, &target));
            max_into(&mut worst, e.im.abs());
        }
        let ea = epsilon_generator(&c, Generator::A, &cc);
        if k <= 2 {
            max_into(&mut worst, rel(&ea.re, &o.brace_one()));
        }
        let lhs =
            &epsilon_generator(&c, Generator::Minus, &o.lin(1, k + 2)) * &epsilon_generator(&c, Generator::Plus, &cc);
        let rhs = (o.brace(&o.f(f64::from(k + 1))) - &ea.re) * (o.brace_lin(2, k + 1) + &ea.re);
        max_into(&mut worst, rel(&lhs.re, &rhs));
    }
    let at_a = epsilon_generator(&c, Generator::Plus, c.a()).abs();
    let t = tol(&c, 8);
    Ok((worst < t, format!("|ε(T⁺_a)| = {}; max err over 4 values of c {} (< {})", sci(&at_a), sci(&worst), sci(&t))))
}

fn cocycle_identity() -> Outcome {
    let c = ctx("0.5", "1.3", 50);
    let cc = CocycleContext::new(&c, 10)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = c.zero();
    for _ in 0..50 {
        let y = word(&c, &mut rng, 4, 0);
        let x = word(&c, &mut rng, 4, y.shift());
        let lhs = cc.cocycle_eval(&LadderWord::compose(&x, &y))?;
        let rhs = cc.act(&x, &cc.cocycle_eval(&y)?)?.add(&cc.cocycle_eval(&x)?.scale(&cc.epsilon_word(&y)));
        max_into(&mut worst, lhs.max_abs_diff(&rhs) / lhs.max_abs().max(&c.one()));
    }
    let t = tol(&c, 8);
    let mut yd_bad = 0;
    for _ in 0..50 {
        let w = word(&c, &mut rng, 8, 0);
        let v: LadderVector = cc.cocycle_eval(&w)?;
        let stray = v.iter().any(|(n, x)| n != w.shift() && x.abs() >= t);
        if stray || !cc.yd_weight_check(&w)? {
            yd_bad += 1;
        }
    }
    Ok((
        worst < t && yd_bad == 0,
        format!("50 pairs: max err {} (< {}); 50 words off their weight space: {yd_bad}", sci(&worst), sci(&t)),
    ))
}

fn growth_cross_validation() -> Outcome {
    let c = ctx("0.5", "1.3", 80);
    let o = Oracle::new(&c);
    let aw = AskeyWilson::new(&c);
    let eps = c.ten_pow(-8);
    let (_, d) = o.shift_and_scale();
    let mut gap = c.zero();
    let mut chain = c.zero();
    let mut closed = c.zero();
    for n in 1..=40usize {
        let gc = growth_closed(&aw, n)?;
        let gn = growth_numeric(&aw, n, &eps)?;
        max_into(&mut gap, Float::with_val(c.prec(), &gn - &gc).abs() / &gc);
        let b = aw.build(n)?;
        let wp = b.working_prec;
        let dp1 = derivative_at(&b.p_sub_wide, &Float::with_val(wp, 1));
        let x0 = Float::with_val(wp, o.brace_one()) / 2u32;
        let dq = derivative_at(&b.q_wide, &x0) * Float::with_val(wp, &d) / 2u32;
        max_into(&mut chain, Float::with_val(c.prec(), rel(&dp1, &dq)));
        let expect = o.growth_prefactor() * Float::with_val(c.prec(), &dp1) / &d;
        max_into(&mut closed, rel(&gc, &expect));
    }
    let t = tol(&c, 10);
    let limit = c.ten_pow(-4);
    Ok((
        gap < limit && chain < t && closed < t,
        format!(
            "max relative gap {} (< 1e-4); chain rule err {}; closed form vs P'(1) err {} (< {})",
            sci(&gap),
            sci(&chain),
            sci(&closed),
            sci(&t)
        ),
    ))
}

fn properness() -> Outcome {
    let c = ctx("0.5", "1.3", 80);
    let start = Instant::now();
    let report = properness_scan(&c, 60, &c.ten_pow(-8), Exec::default())?;
    let elapsed = start.elapsed();
    let parse = |s: &str| c.parse_real(s).expect("decimal string");
    let g: Vec<Float> = report.rows.iter().map(|r| parse(&r.g_closed)).collect();
    let early = g[..=15].iter().fold(c.zero(), |m, x| if *x > m { x.clone() } else { m });
    let late = g[30..].iter().skip(1).fold(g[30].clone(), |m, x| if *x < m { x.clone() } else { m });
    let divergence = late > early;
    let row = |n: usize| &report.rows[n];
    let lemma = [10, 20, 40].iter().all(|&n| {
        let x = parse(row(n).x_max.as_deref().expect("x_max for n ≥ 1"));
        parse(&row(n).dp1) > (c.one() - x).recip()
    });
    let xs: Vec<Float> = [5, 10, 20, 40].iter().map(|&n| parse(row(n).x_max.as_deref().expect("x_max"))).collect();
    let increasing = xs.windows(2).all(|w| w[1] > w[0]);
    Ok((
        divergence && lemma && increasing && report.flags.all() && elapsed < Duration::from_secs(300),
        format!(
            "min G[30..60] {} > max G[0..15] {}: {divergence}; lemma at 10,20,40: {lemma}; x_max increasing: {increasing}; {:.2?} (< 300s)",
            sci(&late),
            sci(&early),
            elapsed
        ),
    ))
}

fn coboundary_witness() -> Outcome {
    let c = ctx("0.5", "1.3", 50);
    let o = Oracle::new(&c);
    let cc = CocycleContext::new(&c, 31)?;
    let mut worst = c.zero();
    let mut first = None;
    for n in 1..=30 {
        let norm = cc.plus_power_norm(n)?;
        max_into(&mut worst, rel(&norm, &o.discrete_plus(n as i32)));
        max_into(&mut worst, rel(&norm, &discrete_norm_plus(&c, n as i64)?));
        if first.is_none() && norm > 1000 {
            first = Some((n, norm));
        }
    }
    let t = tol(&c, 8);
    Ok(match first {
        Some((n, norm)) => (
            worst < t,
            format!("norm {} > 1e3 first at n = {n}; agreement with discrete norms {}", sci(&norm), sci(&worst)),
        ),
        None => (false, "norm never exceeds 1e3 for n ≤ 30".into()),
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("spectrum of √-1·B_t", spectrum_theorem),
        ("pairing matrices at s=1/2", pairing_ground_truth),
        ("ladder recursion identities", ladder_recursion),
        ("Gram closed form vs recursion", gram_recursion),
        ("exact kernel at λ = q+1/q", kernel_exact),
        ("discrete-series limits", discrete_limits),
        ("Askey-Wilson engine", askey_wilson_engine),
        ("counit character", counit_character),
        ("cocycle identity and weight support", cocycle_identity),
        ("growth cross-validation", growth_cross_validation),
        ("properness scan", properness),
        ("non-coboundary witness", coboundary_witness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} [{:.2?}]: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
