//! Command-line front end: analytic continuation, direct summation,
//! asymptotic expansions, binomial differences, Γ(s) = −1 roots, holonomy
//! classification, and the four-row asymptotics table.
//!
//! Results go to stdout (JSON with --json, aligned text otherwise); logs and
//! timings go to stderr. Exit codes: 0 success, 2 domain/sector error,
//! 3 convergence failure, 4 bad arguments.

use clap::{Args, Parser, Subcommand};
use lindelof_core::coeff_functions::{
    catalog_to_json, gamma_plus_one_eq_minus_one_roots, make_builtin, BuiltinKind,
    CoefficientFunction,
};
use lindelof_core::differences::{
    differences_asymptotic, differences_exact, DifferenceRequest, SequenceKind,
};
use lindelof_core::expansions::{
    algebraic_expansion, polar_expansion, ExpFactor, Expansion, ExpansionTerm, ExpansionVariable,
};
use lindelof_core::holonomy::{classify, summarize_catalog, ClassifyInput};
use lindelof_core::lindelof::{auto_config, continue_gf, direct_sum_with_cap};
use lindelof_core::numerics::cabs;
use lindelof_core::saddle_boundary::{
    abel_taylor_coeff, approx_infinity, approx_minus_one, laplace_constants, polylog_sum,
};
use lindelof_core::{Complex, Error, Float, PrecisionContext};
use serde_json::json;
use std::time::Instant;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "lindelof",
    about = "Analytic continuation of power series and asymptotics of generalized exponentials",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Working precision in bits (>= 53); env LINDELOF_PREC overrides the default 128
    #[arg(long)]
    prec: Option<u32>,
    /// Target relative tolerance
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Reproducibility alias: fixes the working precision (same as --prec)
    #[arg(long)]
    seed_precision: Option<u32>,
    /// Emit machine-readable JSON on stdout
    #[arg(long)]
    json: bool,
    /// Log wall time to stderr
    #[arg(long)]
    timing: bool,
}

impl Common {
    fn ctx(&self) -> Result<PrecisionContext, Error> {
        let default = std::env::var("LINDELOF_PREC")
            .ok()
            .and_then(|v| v.parse::<u32>().ok())
            .unwrap_or(128);
        let bits = self.seed_precision.or(self.prec).unwrap_or(default);
        PrecisionContext::new(bits, self.tol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analytically continue F(z) = Σ φ(n)(−z)ⁿ by the contour integral
    Continue {
        #[command(flatten)]
        common: Common,
        /// Coefficient function: const:A, identity, power:LAMBDA, exp:C,THETA,
        /// recip-gamma-plus-one, recip-two-pow, gamma-ratio, gamma-sqrt2, recip-zeta-shift
        #[arg(long)]
        phi: String,
        /// Evaluation point as RE or RE,IM (scientific notation accepted)
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Contour abscissa in (0,1); default: saddle-informed automatic choice
        #[arg(long)]
        shift: Option<f64>,
        /// Sweep specification log:LMIN:LMAX:N (points z = e^L, L geometric)
        #[arg(long)]
        z_grid: Option<String>,
        /// CSV output for sweeps
        #[arg(long)]
        csv: bool,
    },
    /// Direct summation of F(z) inside the convergence disc (the oracle)
    Sum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Term cap (default 10^7)
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
    /// Asymptotic expansion of F(z) at infinity or at z = −1
    Expand {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: String,
        /// infinity | minus-one
        #[arg(long, default_value = "infinity")]
        at: String,
        /// Expansion order (the K scale at infinity, term count at −1)
        #[arg(long, default_value_t = 3.5)]
        order: f64,
    },
    /// Exact and asymptotic binomial differences
    Diff {
        #[command(flatten)]
        common: Common,
        /// expinv+ | expinv- | expsqrt+ | expsqrt-
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: u32,
        /// Also report the asymptotic formula and the exact/asymptotic ratio
        #[arg(long)]
        asymptotic: bool,
    },
    /// Real roots of Γ(s) = −1
    Roots {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        count: u32,
    },
    /// Classify against the holonomic structure criterion
    Classify {
        #[command(flatten)]
        common: Common,
        /// Builtin coefficient function to classify via its catalog/expansion
        #[arg(long)]
        phi: Option<String>,
        /// JSON expansion file (as produced by `expand --json`)
        #[arg(long)]
        expansion: Option<String>,
    },
    /// Reproduce the four-row asymptotics table for E(z;c,θ)
    Table {
        #[command(flatten)]
        common: Common,
        /// Only "asympt" is available
        #[arg(long, default_value = "asympt")]
        figure: String,
        /// log z used for the z → ∞ ratio checks of the non-oscillatory rows
        #[arg(long, default_value_t = 1e4)]
        log_z: f64,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap would exit 2; the contract reserves 4 for bad arguments
            let is_error = e.use_stderr();
            let _ = e.print();
            std::process::exit(if is_error { 4 } else { 0 });
        }
    };
    let started = Instant::now();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    if code == 0 {
        eprintln!("done in {} ms", started.elapsed().as_millis());
    }
    std::process::exit(code);
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergence(_)
        | Error::SlowConvergence(_)
        | Error::QuadratureNonConvergence(_)
        | Error::NonConvergence(_)
        | Error::CapExceeded { .. } => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Continue {
            common,
            phi,
            z,
            shift,
            z_grid,
            csv,
        } => cmd_continue(&common, &phi, z.as_deref(), shift, z_grid.as_deref(), csv),
        Command::Sum { common, phi, z, cap } => cmd_sum(&common, &phi, &z, cap),
        Command::Expand {
            common,
            phi,
            at,
            order,
        } => cmd_expand(&common, &phi, &at, order),
        Command::Diff {
            common,
            kind,
            n,
            asymptotic,
        } => cmd_diff(&common, &kind, n, asymptotic),
        Command::Roots { common, count } => cmd_roots(&common, count),
        Command::Classify {
            common,
            phi,
            expansion,
        } => cmd_classify(&common, phi.as_deref(), expansion.as_deref()),
        Command::Table {
            common,
            figure,
            log_z,
        } => cmd_table(&common, &figure, log_z),
    }
}

fn parse_phi(spec: &str, ctx: &PrecisionContext) -> Result<CoefficientFunction, Error> {
    let (head, args) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let need = |args: Option<&str>, n: usize| -> Result<Vec<f64>, Error> {
        let raw = args.ok_or_else(|| {
            Error::UnsupportedParameter(format!("{head} needs {n} parameter(s)"))
        })?;
        let vals: Result<Vec<f64>, _> = raw.split(',').map(|x| x.trim().parse::<f64>()).collect();
        let vals =
            vals.map_err(|_| Error::UnsupportedParameter(format!("bad numbers in '{raw}'")))?;
        if vals.len() != n {
            return Err(Error::UnsupportedParameter(format!(
                "{head} needs {n} parameter(s), got {}",
                vals.len()
            )));
        }
        Ok(vals)
    };
    let kind = match head {
        "const" | "constant" => BuiltinKind::Constant { a: need(args, 1)?[0] },
        "identity" | "id" => BuiltinKind::Identity,
        "power" | "powerlaw" => BuiltinKind::PowerLaw {
            lambda: need(args, 1)?[0],
        },
        "exp" | "exppower" => {
            let v = need(args, 2)?;
            BuiltinKind::ExpPower { c: v[0], theta: v[1] }
        }
        "recip-gamma-plus-one" | "recip-gamma" => BuiltinKind::RecipGammaPlusOne,
        "recip-two-pow" | "recip-2pow" => BuiltinKind::RecipTwoPow,
        "gamma-ratio" => BuiltinKind::GammaRatioNormalized,
        "gamma-sqrt2" => BuiltinKind::GammaSqrtTwoPlain,
        "recip-zeta-shift" | "recip-zeta" => BuiltinKind::RecipZetaShift,
        other => {
            return Err(Error::UnsupportedKind(format!(
                "unknown coefficient function '{other}'"
            )))
        }
    };
    make_builtin(kind, ctx)
}

fn parse_z(spec: &str, bits: u32) -> Result<Complex, Error> {
    let wp = bits.max(64) + 16;
    let parts: Vec<&str> = spec.split(',').collect();
    let parse_one = |s: &str| -> Result<Float, Error> {
        Float::parse(s.trim())
            .map(|p| Float::with_val(wp, p))
            .map_err(|_| Error::Domain(format!("cannot parse number '{s}'")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex::with_val(
            wp,
            (parse_one(re)?, Float::with_val(wp, 0)),
        )),
        [re, im] => Ok(Complex::with_val(wp, (parse_one(re)?, parse_one(im)?))),
        _ => Err(Error::Domain(format!("z must be RE or RE,IM, got '{spec}'"))),
    }
}

fn ln_abs(v: &Complex) -> f64 {
    let a = cabs(v);
    if a.is_zero() {
        f64::NEG_INFINITY
    } else {
        a.ln().to_f64()
    }
}

fn value_json(v: &Complex) -> serde_json::Value {
    json!({ "re": v.real().to_f64(), "im": v.imag().to_f64(), "ln_abs": ln_abs(v) })
}

fn emit(common: &Common, command: &str, inputs: serde_json::Value, outputs: serde_json::Value) {
    if common.json {
        let record = json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "inputs": inputs,
            "outputs": outputs,
        });
        println!("{record}");
    }
}

fn cmd_continue(
    common: &Common,
    phi: &str,
    z: Option<&str>,
    shift: Option<f64>,
    z_grid: Option<&str>,
    csv: bool,
) -> Result<(), Error> {
    let ctx = common.ctx()?;
    let f = parse_phi(phi, &ctx)?;
    if let Some(grid) = z_grid {
        return sweep_grid(common, &f, grid, shift, csv, phi);
    }
    let z_spec = z.ok_or_else(|| Error::Domain("--z or --z-grid required".into()))?;
    let zval = parse_z(z_spec, ctx.bits())?;
    let t0 = Instant::now();
    let mut cfg = auto_config(&f, &zval, &ctx);
    if let Some(s) = shift {
        cfg = cfg.with_shift(s)?;
    }
    let cont = continue_gf(&f, &zval, &cfg)?;
    if common.timing {
        eprintln!("continuation took {} ms", t0.elapsed().as_millis());
    }
    if common.json {
        emit(
            common,
            "continue",
            json!({ "phi": phi, "z": z_spec, "prec": ctx.bits(), "tol": ctx.tol(), "shift": cfg.shift }),
            json!({ "value": value_json(&cont.value), "error_estimate": cont.error_estimate }),
        );
    } else {
        println!(
            "F({z_spec}) = {:.15e} + {:.15e} i   (error estimate {:.2e})",
            cont.value.real().to_f64(),
            cont.value.imag().to_f64(),
            cont.error_estimate
        );
    }
    Ok(())
}

/// Grid fan-out across worker threads; output ordered by input index.
fn sweep_grid(
    common: &Common,
    f: &CoefficientFunction,
    grid: &str,
    shift: Option<f64>,
    csv: bool,
    phi: &str,
) -> Result<(), Error> {
    let parts: Vec<&str> = grid.split(':').collect();
    let ["log", lmin, lmax, n] = parts.as_slice() else {
        return Err(Error::Domain(format!(
            "grid must be log:LMIN:LMAX:N, got '{grid}'"
        )));
    };
    let lmin: f64 = lmin.parse().map_err(|_| Error::Domain("bad LMIN".into()))?;
    let lmax: f64 = lmax.parse().map_err(|_| Error::Domain("bad LMAX".into()))?;
    let n: usize = n.parse().map_err(|_| Error::Domain("bad N".into()))?;
    if !(lmin > 0.0 && lmax > lmin && n >= 2) {
        return Err(Error::Domain("need 0 < LMIN < LMAX and N >= 2".into()));
    }
    let ctx = common.ctx()?;
    let ls: Vec<f64> = (0..n)
        .map(|i| (lmin.ln() + (lmax.ln() - lmin.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect();
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(2)
        .min(ls.len());
    let mut results: Vec<Option<Result<(Complex, f64), Error>>> = vec![None; ls.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<Vec<usize>> = (0..workers)
            .map(|w| (w..ls.len()).step_by(workers).collect())
            .collect();
        let mut handles = Vec::new();
        for chunk in chunks {
            let ls = &ls;
            let ctx = ctx.clone();
            handles.push(scope.spawn(move || {
                let mut out = Vec::new();
                for idx in chunk {
                    let z = Complex::with_val(256, Float::with_val(256, ls[idx]).exp());
                    let mut cfg = auto_config(f, &z, &ctx);
                    if let Some(s) = shift {
                        match cfg.with_shift(s) {
                            Ok(c) => cfg = c,
                            Err(e) => {
                                out.push((idx, Err(e)));
                                continue;
                            }
                        }
                    }
                    let r = continue_gf(f, &z, &cfg).map(|c| (c.value, c.error_estimate));
                    out.push((idx, r));
                }
                out
            }));
        }
        for h in handles {
            for (idx, r) in h.join().expect("worker panicked") {
                results[idx] = Some(r);
            }
        }
    });
    if csv {
        println!("log_z,value_re,value_im,value_ln_abs,error_estimate");
    }
    let mut rows = Vec::new();
    for (l, r) in ls.iter().zip(results.into_iter()) {
        let (v, err) = r.expect("worker filled")?;
        let la = ln_abs(&v);
        if csv {
            println!(
                "{l},{:e},{:e},{la:e},{err:e}",
                v.real().to_f64(),
                v.imag().to_f64(),
            );
        } else if !common.json {
            println!(
                "log z = {l:10.3}: F = {:.10e} + {:.10e} i (ln|F| = {la:.4}, est {err:.1e})",
                v.real().to_f64(),
                v.imag().to_f64()
            );
        }
        rows.push(json!({
            "log_z": l,
            "value": { "re": v.real().to_f64(), "im": v.imag().to_f64(), "ln_abs": la },
            "error_estimate": err,
        }));
    }
    emit(
        common,
        "continue",
        json!({ "phi": phi, "z_grid": grid, "prec": ctx.bits(), "tol": ctx.tol() }),
        json!({ "points": rows }),
    );
    Ok(())
}

fn cmd_sum(common: &Common, phi: &str, z: &str, cap: u64) -> Result<(), Error> {
    let ctx = common.ctx()?;
    let f = parse_phi(phi, &ctx)?;
    let zval = parse_z(z, ctx.bits())?;
    let v = direct_sum_with_cap(&f, &zval, &ctx, cap)?;
    if common.json {
        emit(
            common,
            "sum",
            json!({ "phi": phi, "z": z, "prec": ctx.bits(), "tol": ctx.tol(), "cap": cap }),
            json!({ "value": value_json(&v) }),
        );
    } else {
        println!(
            "F({z}) = {:.15e} + {:.15e} i",
            v.real().to_f64(),
            v.imag().to_f64()
        );
    }
    Ok(())
}

fn cmd_expand(common: &Common, phi: &str, at: &str, order: f64) -> Result<(), Error> {
    let ctx = common.ctx()?;
    let f = parse_phi(phi, &ctx)?;
    let expansion = match at {
        "infinity" | "inf" => expansion_at_infinity(&f, order, &ctx)?,
        "minus-one" | "-1" => expansion_at_minus_one(&f, order, &ctx)?,
        other => {
            return Err(Error::Domain(format!(
                "--at must be infinity or minus-one, got '{other}'"
            )))
        }
    };
    let rendered = format!("{expansion}");
    if common.json {
        let mut out = expansion.to_json();
        out["rendered"] = json!(rendered);
        emit(
            common,
            "expand",
            json!({ "phi": phi, "at": at, "order": order, "prec": ctx.bits() }),
            out,
        );
    } else {
        println!("{rendered}");
    }
    Ok(())
}

/// Dispatch on the catalog: essential point → saddle closed forms; algebraic
/// singularities → Hankel expansion; poles/lattices (or entire φ, which has
/// only the sin poles) → residue expansion.
fn expansion_at_infinity(
    f: &CoefficientFunction,
    order: f64,
    ctx: &PrecisionContext,
) -> Result<Expansion, Error> {
    use lindelof_core::coeff_functions::Singularity;
    let has_essential = f
        .catalog()
        .iter()
        .any(|s| matches!(s, Singularity::Essential { .. }));
    let has_algebraic = f
        .catalog()
        .iter()
        .any(|s| matches!(s, Singularity::Algebraic { .. }));
    if has_essential {
        if let Some(BuiltinKind::ExpPower { c, theta }) = f.kind() {
            // closed-form saddle term; the z below only sets precision
            let z = Complex::with_val(192, Float::with_val(192, 100).exp());
            return Ok(approx_infinity(*c, *theta, &z, 0.05)?.expansion);
        }
        return Err(Error::CatalogIncomplete(
            "essential singularity without a saddle closed form".into(),
        ));
    }
    if has_algebraic {
        return algebraic_expansion(f, order, ctx);
    }
    let b = if (order - order.round()).abs() < 1e-9 {
        order + 0.5
    } else {
        order
    };
    polar_expansion(f, b, ctx)
}

fn expansion_at_minus_one(
    f: &CoefficientFunction,
    order: f64,
    ctx: &PrecisionContext,
) -> Result<Expansion, Error> {
    let Some(BuiltinKind::ExpPower { c, theta }) = f.kind() else {
        return Err(Error::Domain(
            "minus-one expansions are available for the exp(c n^theta) family".into(),
        ));
    };
    let (c, theta) = (*c, *theta);
    let wp = ctx.bits() + 32;
    let mut e = Expansion::new(format!("boundary_expansion({}, z -> -1)", f.label()));
    if theta > 0.0 && theta < 1.0 && c > 0.0 {
        let lc = laplace_constants(c, theta, 0.05)?;
        let beta = theta / (theta - 1.0);
        e.terms.push(ExpansionTerm {
            coeff: Complex::with_val(wp, lc.c1),
            z_exp: Complex::with_val(wp, (2.0 - theta) / (2.0 * (theta - 1.0))),
            log_pow: Complex::with_val(wp, 0),
            exp_factor: Some(ExpFactor {
                q: Complex::with_val(wp, lc.c2),
                beta,
            }),
            osc: None,
            variable: ExpansionVariable::NegLogAbsZAtMinusOne,
        });
        e.notes.push(
            "v-form of the Laplace boundary law; the (1+z)-substituted form carries exp(-C2/2) at theta = 1/2"
                .into(),
        );
        return Ok(e);
    }
    if theta > 0.0 && theta < 1.0 {
        // convergent boundary: Abel–Taylor series in (1+z)
        let kmax = (order.max(0.0).floor() as u32).min(12);
        for k in 0..=kmax {
            let u_k = abel_taylor_coeff(c, theta, k, ctx)?;
            e.terms.push(ExpansionTerm {
                coeff: Complex::with_val(wp, u_k),
                z_exp: Complex::with_val(wp, k),
                log_pow: Complex::with_val(wp, 0),
                exp_factor: None,
                osc: None,
                variable: ExpansionVariable::OnePlusZAtMinusOne,
            });
        }
        e.notes
            .push("Abel–Taylor coefficients u_k; the series is asymptotic, not convergent".into());
        return Ok(e);
    }
    if theta < 0.0 {
        // polylogarithm ladder: the k = 0 term carries the 1/(1+z) pole
        e.terms.push(ExpansionTerm {
            coeff: Complex::with_val(wp, 1),
            z_exp: Complex::with_val(wp, -1),
            log_pow: Complex::with_val(wp, 0),
            exp_factor: None,
            osc: None,
            variable: ExpansionVariable::OnePlusZAtMinusOne,
        });
        if (theta + 1.0).abs() < 1e-12 && (c - 1.0).abs() < 1e-12 {
            e.terms.push(ExpansionTerm {
                coeff: Complex::with_val(wp, 1),
                z_exp: Complex::with_val(wp, 0),
                log_pow: Complex::with_val(wp, 1),
                exp_factor: None,
                osc: None,
                variable: ExpansionVariable::OnePlusZAtMinusOne,
            });
            e.terms.push(ExpansionTerm {
                coeff: Complex::with_val(wp, 0.0781887291931),
                z_exp: Complex::with_val(wp, 0),
                log_pow: Complex::with_val(wp, 0),
                exp_factor: None,
                osc: None,
                variable: ExpansionVariable::OnePlusZAtMinusOne,
            });
            e.notes
                .push("1/(1+z) + log 1/(1+z) + C with C = -1 + sum zeta(k)/k!".into());
        } else {
            e.notes.push(
                "leading polylogarithm term; higher corrections come from the Li ladder of the boundary sum"
                    .into(),
            );
        }
        return Ok(e);
    }
    Err(Error::Domain(format!(
        "no boundary expansion for theta = {theta}"
    )))
}

fn cmd_diff(common: &Common, kind: &str, n: u32, asymptotic: bool) -> Result<(), Error> {
    let ctx = common.ctx()?;
    let seq = match kind {
        "expinv+" => SequenceKind::ExpInvPlus,
        "expinv-" => SequenceKind::ExpInvMinus,
        "expsqrt+" => SequenceKind::ExpSqrtPlus,
        "expsqrt-" => SequenceKind::ExpSqrtMinus,
        other => {
            return Err(Error::UnsupportedKind(format!(
                "difference kind '{other}' (use expinv+/expinv-/expsqrt+/expsqrt-)"
            )))
        }
    };
    let exact = differences_exact(&DifferenceRequest {
        kind: seq.clone(),
        n,
        ctx: ctx.clone(),
    })?;
    let mut outputs = json!({ "exact": exact.to_f64() });
    let mut text = format!("D_{n}[{}] = {:.10}", seq.label(), exact.to_f64());
    if asymptotic {
        let asym = differences_asymptotic(&seq, n)?;
        let ratio = exact.to_f64() / asym;
        outputs["asymptotic"] = json!(asym);
        outputs["ratio"] = json!(ratio);
        text.push_str(&format!("   asymptotic {asym:.10}   ratio {ratio:.6}"));
    }
    if common.json {
        emit(
            common,
            "diff",
            json!({ "kind": kind, "n": n, "prec": ctx.bits() }),
            outputs,
        );
    } else {
        println!("{text}");
    }
    Ok(())
}

fn cmd_roots(common: &Common, count: u32) -> Result<(), Error> {
    let ctx = common.ctx()?;
    let roots = gamma_plus_one_eq_minus_one_roots(count, &ctx)?;
    if common.json {
        emit(
            common,
            "roots",
            json!({ "count": count, "prec": ctx.bits(), "tol": ctx.tol() }),
            json!({ "roots": roots.iter().map(|r| r.to_f64()).collect::<Vec<_>>() }),
        );
    } else {
        for (i, r) in roots.iter().enumerate() {
            println!("root {:2}: {:.10}", i + 1, r.to_f64());
        }
    }
    Ok(())
}

fn cmd_classify(
    common: &Common,
    phi: Option<&str>,
    expansion_file: Option<&str>,
) -> Result<(), Error> {
    let ctx = common.ctx()?;
    let verdict = if let Some(spec) = phi {
        let f = parse_phi(spec, &ctx)?;
        use lindelof_core::coeff_functions::Singularity;
        let has_algebraic = f
            .catalog()
            .iter()
            .any(|s| matches!(s, Singularity::Algebraic { .. }));
        let has_essential = f
            .catalog()
            .iter()
            .any(|s| matches!(s, Singularity::Essential { .. }));
        if has_algebraic {
            let e = algebraic_expansion(&f, 2.0, &ctx)?;
            classify(&ClassifyInput::Expansion(e))?
        } else if has_essential {
            if let Some(BuiltinKind::ExpPower { c, theta }) = f.kind() {
                let z = Complex::with_val(192, Float::with_val(192, 100).exp());
                let ap = approx_infinity(*c, *theta, &z, 0.05)?;
                classify(&ClassifyInput::Expansion(ap.expansion))?
            } else {
                classify(&ClassifyInput::Catalog(summarize_catalog(&f)))?
            }
        } else if f.catalog().is_empty() {
            let e = polar_expansion(&f, 3.5, &ctx)?;
            classify(&ClassifyInput::Expansion(e))?
        } else {
            classify(&ClassifyInput::Catalog(summarize_catalog(&f)))?
        }
    } else if let Some(path) = expansion_file {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read {path}: {e}")))?;
        let parsed: serde_json::Value = serde_json::from_str(&raw)
            .map_err(|e| Error::Domain(format!("bad JSON in {path}: {e}")))?;
        let expansion = expansion_from_json(&parsed)?;
        classify(&ClassifyInput::Expansion(expansion))?
    } else {
        return Err(Error::Domain("--phi or --expansion required".into()));
    };
    if common.json {
        let catalog = phi
            .map(|spec| parse_phi(spec, &ctx).map(|f| catalog_to_json(&f)))
            .transpose()?;
        emit(
            common,
            "classify",
            json!({ "phi": phi, "expansion": expansion_file, "catalog": catalog }),
            verdict.to_json(),
        );
    } else {
        println!("{}", verdict.to_json());
    }
    Ok(())
}

/// Rebuild an Expansion from the JSON schema emitted by `expand --json`.
fn expansion_from_json(v: &serde_json::Value) -> Result<Expansion, Error> {
    let root = if v.get("outputs").is_some() {
        &v["outputs"]
    } else {
        v
    };
    let terms = root["terms"]
        .as_array()
        .ok_or_else(|| Error::Domain("expansion JSON needs a terms array".into()))?;
    let wp = 128;
    let mut e = Expansion::new("from-json");
    let cnum = |x: &serde_json::Value| -> Complex {
        Complex::with_val(
            wp,
            (
                x["re"].as_f64().unwrap_or(0.0),
                x["im"].as_f64().unwrap_or(0.0),
            ),
        )
    };
    for t in terms {
        let variable = match t["variable"].as_str().unwrap_or("log_z_at_infinity") {
            "one_plus_z_at_minus_one" => ExpansionVariable::OnePlusZAtMinusOne,
            "neg_log_abs_z_at_minus_one" => ExpansionVariable::NegLogAbsZAtMinusOne,
            _ => ExpansionVariable::LogZAtInfinity,
        };
        e.terms.push(ExpansionTerm {
            coeff: Complex::with_val(
                wp,
                (
                    t["coeff_re"].as_f64().unwrap_or(0.0),
                    t["coeff_im"].as_f64().unwrap_or(0.0),
                ),
            ),
            z_exp: cnum(&t["s0"]),
            log_pow: cnum(&t["log_pow"]),
            exp_factor: t.get("exp").filter(|x| !x.is_null()).map(|x| ExpFactor {
                q: cnum(&x["q"]),
                beta: x["beta"].as_f64().unwrap_or(0.5),
            }),
            osc: t.get("osc").filter(|x| !x.is_null()).map(|x| {
                lindelof_core::expansions::OscFactor {
                    r: cnum(&x["r"]),
                    phase0: x["phase0"].as_f64().unwrap_or(0.0),
                    beta: x["beta"].as_f64().unwrap_or(0.5),
                }
            }),
            variable,
        });
    }
    Ok(e)
}

fn cmd_table(common: &Common, figure: &str, log_z: f64) -> Result<(), Error> {
    if figure != "asympt" {
        return Err(Error::Domain(format!("unknown figure '{figure}'")));
    }
    let ctx = common.ctx()?;
    let mut rows = Vec::new();
    let mut text = String::new();
    text.push_str(&format!(
        "{:<12} | {:<46} | {:<9} | {:<42} | {}\n",
        "coefficients", "z -> infinity", "ratio", "z -> -1", "ratio"
    ));

    // row 1: e^{1/n}
    {
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: -1.0 }, &ctx)?;
        let z = Complex::with_val(256, Float::with_val(256, log_z).exp());
        let cont = continue_gf(&f, &z, &auto_config(&f, &z, &ctx))?;
        let ap = approx_infinity(1.0, -1.0, &z, 0.05)?;
        let ratio_inf = Float::with_val(256, cont.value.real() / ap.value.real()).to_f64();
        let zb = Complex::with_val(128, (-0.99, 0.0));
        let boundary = polylog_sum(1.0, -1.0, &zb, &ctx)?;
        let ratio_b = boundary.real().to_f64() * 0.01; // × (1+z), against 1/(1+z)
        push_row(
            &mut rows,
            &mut text,
            "e^{1/n}",
            "-exp(2 sqrt(log z))/(2 sqrt(pi) (log z)^{1/4})",
            ratio_inf,
            "1/(1+z)",
            ratio_b,
        );
    }
    // row 2: e^{−1/n} (oscillatory; checked at a moderate log z for speed)
    {
        let l2 = log_z.min(2500.0);
        let f = make_builtin(BuiltinKind::ExpPower { c: -1.0, theta: -1.0 }, &ctx)?;
        let z = Complex::with_val(256, Float::with_val(256, l2).exp());
        let cont = continue_gf(&f, &z, &auto_config(&f, &z, &ctx))?;
        let ap = approx_infinity(-1.0, -1.0, &z, 0.05)?;
        let ratio_inf = Float::with_val(256, cont.value.real() / ap.value.real()).to_f64();
        let zb = Complex::with_val(128, (-0.99, 0.0));
        let boundary = polylog_sum(-1.0, -1.0, &zb, &ctx)?;
        let ratio_b = boundary.real().to_f64() * 0.01;
        push_row(
            &mut rows,
            &mut text,
            "e^{-1/n}",
            "-(log z)^{-1/4} cos(2 sqrt(log z) - pi/4)/sqrt(pi)",
            ratio_inf,
            "1/(1+z)",
            ratio_b,
        );
    }
    // row 3: e^{√n}
    {
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: 0.5 }, &ctx)?;
        let z = Complex::with_val(256, Float::with_val(256, log_z).exp());
        let cont = continue_gf(&f, &z, &auto_config(&f, &z, &ctx))?;
        let two_term = -1.0 - 1.0 / (std::f64::consts::PI * log_z).sqrt();
        let ratio_inf = cont.value.real().to_f64() / two_term;
        let sum = direct_sum_with_cap(&f, &Complex::with_val(96, (-0.99, 0.0)), &ctx, 50_000_000)?;
        let ap = approx_minus_one(1.0, 0.5, -0.99, 0.05, &ctx)?;
        let ratio_b = Float::with_val(192, sum.real() / &ap.u_form).to_f64();
        push_row(
            &mut rows,
            &mut text,
            "e^{sqrt n}",
            "-1 - 1/sqrt(pi log z)",
            ratio_inf,
            "sqrt(pi) e^{-1/8} (1+z)^{-3/2} exp(1/(4(1+z)))",
            ratio_b,
        );
    }
    // row 4: e^{−√n}
    {
        let f = make_builtin(BuiltinKind::ExpPower { c: -1.0, theta: 0.5 }, &ctx)?;
        let z = Complex::with_val(256, Float::with_val(256, log_z).exp());
        let cont = continue_gf(&f, &z, &auto_config(&f, &z, &ctx))?;
        let two_term = -1.0 + 1.0 / (std::f64::consts::PI * log_z).sqrt();
        let ratio_inf = cont.value.real().to_f64() / two_term;
        let sum = direct_sum_with_cap(&f, &Complex::with_val(96, (-0.99, 0.0)), &ctx, 10_000_000)?;
        let u0 = abel_taylor_coeff(-1.0, 0.5, 0, &ctx)?;
        let u1 = abel_taylor_coeff(-1.0, 0.5, 1, &ctx)?;
        let lin = u0.to_f64() + u1.to_f64() * 0.01;
        let ratio_b = sum.real().to_f64() / lin;
        push_row(
            &mut rows,
            &mut text,
            "e^{-sqrt n}",
            "-1 + 1/sqrt(pi log z)",
            ratio_inf,
            "E(1) + E'(1)(1+z)",
            ratio_b,
        );
    }
    if common.json {
        emit(
            common,
            "table",
            json!({ "figure": figure, "log_z": log_z, "boundary_z": -0.99 }),
            json!({ "rows": rows }),
        );
    } else {
        print!("{text}");
    }
    Ok(())
}

fn push_row(
    rows: &mut Vec<serde_json::Value>,
    text: &mut String,
    name: &str,
    inf_formula: &str,
    inf_ratio: f64,
    boundary_formula: &str,
    boundary_ratio: f64,
) {
    rows.push(json!({
        "coefficients": name,
        "z_infinity": { "formula": inf_formula, "ratio_to_continuation": inf_ratio },
        "z_minus_one": { "formula": boundary_formula, "ratio": boundary_ratio },
    }));
    text.push_str(&format!(
        "{name:<12} | {inf_formula:<46} | {inf_ratio:<9.5} | {boundary_formula:<42} | {boundary_ratio:.5}\n"
    ));
}
