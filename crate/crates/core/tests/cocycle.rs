mod common;

use common::{derivative_at, rel, tol, word, Oracle};
use qcocycle::askey_wilson::AskeyWilson;
use qcocycle::cocycle::{
    growth_closed, growth_numeric, properness_scan, u1_eigenvalue, CocycleContext, GrowthReport, IcElement,
};
use qcocycle::ladder::{LadderWord, Letter};
use qcocycle::poly::QPolynomial;
use qcocycle::{Complex, Exec, ParamContext, Real};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx() -> ParamContext {
    ParamContext::parse("0.5", "1.3", 50).unwrap()
}

fn cc() -> CocycleContext {
    CocycleContext::new(&ctx(), 8).unwrap()
}

fn w(letters: Vec<Letter>) -> LadderWord {
    LadderWord::new(letters, 0)
}

#[test]
fn counit_on_words() {
    let c = ctx();
    let cc = cc();
    let e = cc.epsilon_word(&LadderWord::empty());
    assert!(e.re == 1 && e.im.is_zero());
    assert!(cc.epsilon_word(&w(vec![Letter::Plus])).abs() < tol(&c, 8));
    assert!(cc.epsilon_word(&w(vec![Letter::Plus, Letter::Minus])).abs() < tol(&c, 8));
}

#[test]
fn cocycle_on_generators() {
    let c = ctx();
    let cc = cc();
    let x = QPolynomial::x(c.prec());
    assert!(cc.cocycle_eval(&w(vec![Letter::Apoly(x)])).unwrap().max_abs() < tol(&c, 8));

    let plus = cc.cocycle_eval(&w(vec![Letter::Plus])).unwrap();
    let e1 = cc.module().basis(1).unwrap();
    assert!(plus.max_abs_diff(&e1) < tol(&c, 8));

    let (p, m) = cc.decompose_pm(&w(vec![Letter::Plus])).unwrap();
    assert!(p.max_abs_diff(&e1) < tol(&c, 8) && m.max_abs() < tol(&c, 8));
    let (p, m) = cc.decompose_pm(&w(vec![Letter::Minus])).unwrap();
    assert!(p.max_abs() < tol(&c, 8));
    assert!(m.max_abs_diff(&cc.module().basis(-1).unwrap()) < tol(&c, 8));
}

#[test]
fn weight_support_examples() {
    let c = ctx();
    let cc = cc();
    for letters in [vec![Letter::Plus], vec![Letter::Plus, Letter::Plus, Letter::Minus]] {
        let word = w(letters);
        assert!(cc.yd_weight_check(&word).unwrap());
        assert_eq!(cc.cocycle_eval(&word).unwrap().support(&tol(&c, 8)), vec![1]);
    }
}

#[test]
fn extension_examples() {
    let c = ctx();
    let cc = cc();
    let word = w(vec![Letter::Plus, Letter::Plus]);
    let base = cc.cocycle_eval(&word).unwrap();
    assert_eq!(cc.cocycle_extend(&word, &IcElement::phi(0, c.prec())).unwrap(), base);
    assert!(cc.cocycle_extend(&word, &IcElement::phi(3, c.prec())).unwrap().is_zero());
    let omega = IcElement::from_pairs([(0, Complex::from_real(c.real(2))), (1, Complex::from_real(c.real(5)))]);
    assert_eq!(omega.epsilon(c.prec()).re, 2);
    let two = Complex::from_real(c.real(2));
    assert!(cc.cocycle_extend(&word, &omega).unwrap().max_abs_diff(&base.scale(&two)) < tol(&c, 8));
}

#[test]
fn sector_cocycles() {
    let c = ctx();
    let cc = CocycleContext::new(&c, 10).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let y = word(&c, &mut rng, 4, 0);
        let x = word(&c, &mut rng, 4, y.shift());
        let (xy_p, xy_m) = cc.decompose_pm(&LadderWord::compose(&x, &y)).unwrap();
        let (y_p, y_m) = cc.decompose_pm(&y).unwrap();
        let (x_p, x_m) = cc.decompose_pm(&x).unwrap();
        let ey = cc.epsilon_word(&y);
        for (lhs, cy, cx) in [(xy_p, y_p, x_p), (xy_m, y_m, x_m)] {
            let rhs = cc.act(&x, &cy).unwrap().add(&cx.scale(&ey));
            assert!(lhs.max_abs_diff(&rhs) / lhs.max_abs().max(&c.one()) < tol(&c, 8));
        }
    }
}

#[test]
fn u1_values() {
    let c = ctx();
    let o = Oracle::new(&c);
    let aw = AskeyWilson::new(&c);
    assert!(rel(&u1_eigenvalue(&aw, &c.brace_one()), &c.one()) < tol(&c, 8));
    let (shift, d) = o.shift_and_scale();
    assert!(rel(&u1_eigenvalue(&aw, &c.zero()), &(shift / d)) < tol(&c, 8));
    assert!(u1_eigenvalue(&aw, &c.real(0.5)) < u1_eigenvalue(&aw, &c.real(0.6)));
}

#[test]
fn growth_closed_low_degrees() {
    let c = ctx();
    let o = Oracle::new(&c);
    let aw = AskeyWilson::new(&c);
    assert!(growth_closed(&aw, 0).unwrap().is_zero());
    let b = aw.build(1).unwrap();
    let (_, d) = o.shift_and_scale();
    let dp1 = derivative_at(&b.p_sub_wide, &Real::with_val(b.working_prec, 1));
    let want = o.growth_prefactor() * Real::with_val(c.prec(), dp1) / d;
    assert!(rel(&growth_closed(&aw, 1).unwrap(), &want) < tol(&c, 10));
}

#[test]
fn growth_numeric_convergence() {
    let c = ctx();
    let aw = AskeyWilson::new(&c);
    for eps in [c.ten_pow(-3), c.ten_pow(-8)] {
        assert!(growth_numeric(&aw, 0, &eps).unwrap().is_zero());
    }
    let eps = c.ten_pow(-8);
    let closed = growth_closed(&aw, 3).unwrap();
    let gap = |e: &Real| growth_numeric(&aw, 3, e).unwrap() - &closed;
    assert!(gap(&eps).abs() / &closed < c.ten_pow(-4));
    let ratio = gap(&eps) / gap(&(eps.clone() / 2u32));
    assert!(ratio > 1.9 && ratio < 2.1, "ratio {ratio}");
    assert!(growth_numeric(&aw, 3, &c.real(3)).is_err());
}

#[test]
fn scan_report_round_trips() {
    let c = ParamContext::parse("0.5", "1.3", 40).unwrap();
    let report = properness_scan(&c, 16, &c.ten_pow(-8), Exec::default()).unwrap();
    assert_eq!(report.rows.len(), 17);
    assert_eq!(report.rows[0].g_closed, "0");
    assert!(report.rows[0].x_max.is_none());
    let json = serde_json::to_string(&report).unwrap();
    let back: GrowthReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    let seq = properness_scan(&c, 16, &c.ten_pow(-8), Exec::Sequential).unwrap();
    assert_eq!(seq, report);
    assert!(properness_scan(&c, 201, &c.ten_pow(-8), Exec::Sequential).is_err());
}

#[test]
fn growth_trend_is_increasing() {
    let c = ParamContext::parse("0.5", "1.3", 40).unwrap();
    let aw = AskeyWilson::new(&c);
    let g: Vec<Real> = (10..=30).step_by(5).map(|n| growth_closed(&aw, n).unwrap()).collect();
    assert!(g.windows(2).all(|w| w[1] > w[0]));
}
