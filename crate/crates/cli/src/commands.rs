use serde::Serialize;
use serde_json::json;

use qcocycle::cocycle::properness_scan;
use qcocycle::ladder::{adjoint_defect, d2_minus_factor, gram_lambda, make_module, Lambda};
use qcocycle::scalars::to_decimal;
use qcocycle::uq_irreps::{spectrum_sweep, spins_up_to, Spin};
use qcocycle::verify::{run_verify, VerifyOptions};
use qcocycle::{Error, Exec, ParamContext, Real};

use crate::output::emit;
use crate::{CliError, Command, Opts, RunConfig};

/// Largest spin `spectrum` accepts; the dense solver is cubic in `2s + 1`.
const MAX_TWICE_SPIN: u32 = 40;

/// Runs one command, writes its output and reports whether every gated
/// check passed.
pub fn run(command: Command, o: &Opts) -> Result<bool, CliError> {
    let ctx = ParamContext::parse(&o.q, &o.a, o.digits)?;
    if o.nmax > 200 {
        return Err(Error::InvalidParameter(format!("--nmax {} exceeds 200", o.nmax)).into());
    }
    if o.window < 1 {
        return Err(Error::InvalidParameter(format!("--window must be at least 1, got {}", o.window)).into());
    }
    let eps = ctx.parse_real(&o.eps)?;
    let config = RunConfig::new(command, o);
    match command {
        Command::Spectrum => spectrum(&ctx, o, &config),
        Command::Gram => gram(&ctx, o, &config),
        Command::Growth | Command::Scan => growth(&ctx, o, &config, &eps, command == Command::Scan),
        Command::Verify => verify(&ctx, o, &config, eps),
    }
}

fn dec(ctx: &ParamContext, x: &Real) -> String {
    to_decimal(x, ctx.digits())
}

fn short(x: &Real) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        x.to_string_radix(10, Some(3))
    }
}

/// `k/2` written as an integer or a fraction.
fn half(twice: i64) -> String {
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        format!("{twice}/2")
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    s: String,
    i: String,
    computed: String,
    expected: String,
    abs_err: String,
    rel_err: String,
}

fn spectrum(ctx: &ParamContext, o: &Opts, config: &RunConfig) -> Result<bool, CliError> {
    let smax: f64 =
        o.smax.parse().map_err(|_| Error::InvalidParameter(format!("--smax {:?} is not a number", o.smax)))?;
    let smax = Spin::from_f64(smax)?;
    if smax.twice() > MAX_TWICE_SPIN {
        return Err(Error::InvalidParameter(format!("--smax above {} is not supported", MAX_TWICE_SPIN / 2)).into());
    }
    let samples = spectrum_sweep(ctx, &spins_up_to(smax.twice()), Exec::default())?;
    let tol = ctx.tol(8);
    let worst = samples.iter().map(|s| s.rel_err()).fold(ctx.zero(), |m, e| if e > m { e } else { m });
    let pass = worst < tol;
    let rows: Vec<SpectrumRow> = samples
        .iter()
        .map(|s| SpectrumRow {
            s: s.spin.to_string(),
            i: half(s.twice_i),
            computed: dec(ctx, &s.computed),
            expected: dec(ctx, &s.expected),
            abs_err: dec(ctx, &s.abs_err()),
            rel_err: dec(ctx, &s.rel_err()),
        })
        .collect();
    let summary = json!({
        "eigenvalues": rows.len(),
        "max_rel_err": dec(ctx, &worst),
        "tolerance": dec(ctx, &tol),
        "pass": pass,
    });
    emit(o, config, &rows, &summary)?;
    eprintln!("spectrum: {} eigenvalues, max relative error {}: {}", rows.len(), short(&worst), verdict(pass));
    Ok(pass)
}

#[derive(Serialize)]
struct GramRow {
    n: i64,
    weight: String,
    g: String,
}

fn gram(ctx: &ParamContext, o: &Opts, config: &RunConfig) -> Result<bool, CliError> {
    let lambda = match o.lambda.as_deref() {
        None | Some("discrete") => Lambda::Discrete,
        Some(s) => Lambda::Value(ctx.parse_real(s)?),
    };
    let discrete = lambda.is_discrete();
    let m = make_module(ctx, lambda, ctx.a(), o.window)?;
    let form = gram_lambda(&m)?;
    let rows: Vec<GramRow> =
        form.values().map(|(n, g)| GramRow { n, weight: dec(ctx, &m.weight(n)), g: dec(ctx, g) }).collect();
    let positive = form.values().all(|(_, g)| *g > 0);
    let defect = adjoint_defect(&m, &form)?;
    let tol = ctx.tol(8);
    let pass = positive && defect < tol;
    let mut summary = json!({
        "lambda": dec(ctx, m.lambda_value()),
        "discrete": discrete,
        "all_positive": positive,
        "adjoint_defect": dec(ctx, &defect),
        "tolerance": dec(ctx, &tol),
        "pass": pass,
    });
    if discrete {
        summary["d2_minus_factor"] = json!(dec(ctx, &d2_minus_factor(ctx)));
    }
    emit(o, config, &rows, &summary)?;
    eprintln!("gram: {} entries, adjoint defect {}: {}", rows.len(), short(&defect), verdict(pass));
    Ok(pass)
}

fn growth(ctx: &ParamContext, o: &Opts, config: &RunConfig, eps: &Real, gate_flags: bool) -> Result<bool, CliError> {
    let report = properness_scan(ctx, o.nmax, eps, Exec::default())?;
    let parse = |s: &str| ctx.parse_real(s);
    let mut worst_gap = ctx.zero();
    let mut within_envelope = true;
    for row in report.rows.iter().filter(|r| r.n > 0) {
        let gap = parse(&row.rel_gap)?;
        let k = parse(&row.envelope_k)?;
        within_envelope &= gap <= Real::with_val(ctx.prec(), &k * eps) * 2u32 + ctx.tol(10);
        if gap > worst_gap {
            worst_gap = gap;
        }
    }
    let flags_ok = report.flags.all();
    let pass = within_envelope && (flags_ok || !gate_flags);
    let summary = json!({
        "constants": report.constants,
        "flags": report.flags,
        "max_rel_gap": dec(ctx, &worst_gap),
        "within_envelope": within_envelope,
        "pass": pass,
    });
    emit(o, config, &report.rows, &summary)?;
    eprintln!(
        "{}: n = 0..={}, max relative gap {}, divergence flags {}: {}",
        if gate_flags { "scan" } else { "growth" },
        o.nmax,
        short(&worst_gap),
        if flags_ok { "all hold" } else { "not all hold" },
        verdict(pass)
    );
    Ok(pass)
}

fn verify(ctx: &ParamContext, o: &Opts, config: &RunConfig, eps: Real) -> Result<bool, CliError> {
    let mut opts = VerifyOptions::new(ctx);
    opts.seed = o.seed;
    opts.n_max = o.nmax;
    opts.eps = eps;
    opts.fault = o.inject_fault;
    let report = run_verify(ctx, &opts)?;
    let failures: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    let pass = report.passed();
    let summary = json!({ "checks": report.checks.len(), "failures": failures, "pass": pass });
    emit(o, config, &report.checks, &summary)?;
    for c in report.failures() {
        eprintln!("FAIL {}: {}", c.name, c.detail);
    }
    eprintln!("verify: {} checks, {} failed: {}", report.checks.len(), failures.len(), verdict(pass));
    Ok(pass)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}
