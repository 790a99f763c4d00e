//! The catalog of coefficient functions φ(s): analytic liftings of sequences
//! with growth metadata and singularity data, plus the Γ(s) = −1 root finder.

use crate::error::{Error, Result};
use crate::numerics::{cx, fl, gamma, pi, prec_of, zeta_complex, PrecisionContext};
use rug::{Complex, Float};
use std::fmt;
use std::sync::Arc;

/// How many members a pole lattice has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeCount {
    Unbounded,
    Finite(u32),
}

/// Structural exactness declaration for quantities whose rationality matters.
/// Rationality is never inferred from floating-point values.
#[derive(Debug, Clone, PartialEq)]
pub enum Exactness {
    ExactRational { num: i64, den: u64 },
    ExactIrrational(String),
    FloatOnly,
}

/// One cataloged singularity of φ(s).
#[derive(Clone)]
pub enum Singularity {
    Pole {
        location: Complex,
        order: u32,
    },
    /// Local form (s−s0)^{−λ} ψ((s−s0)^θ) with ψ(u) = Σ p_k u^k analytic at 0,
    /// branch cut at angle `cut_angle` ∈ (−π/2,0)∪(0,π/2) to the negative real axis.
    /// `psi_truncated` distinguishes a stored prefix of an infinite ψ series
    /// (asking past the end is an error) from a finite polynomial ψ (zeros).
    Algebraic {
        location: Complex,
        lambda: Complex,
        theta: Complex,
        psi_coeffs: Vec<Complex>,
        psi_truncated: bool,
        cut_angle: f64,
    },
    Essential {
        location: Complex,
        descriptor: String,
    },
    PoleLattice {
        base: Complex,
        step: Complex,
        count: LatticeCount,
        step_exactness: Exactness,
    },
}

impl Singularity {
    pub fn validate(&self) -> Result<()> {
        match self {
            Singularity::Algebraic {
                theta, cut_angle, ..
            } => {
                if !(theta.real().to_f64() > 0.0) {
                    return Err(Error::UnsupportedParameter(
                        "algebraic type needs Re θ > 0".into(),
                    ));
                }
                let w = *cut_angle;
                if !(w.abs() > 0.0 && w.abs() < std::f64::consts::FRAC_PI_2) {
                    return Err(Error::HypothesisViolation(format!(
                        "cut angle {w} outside (-pi/2,0)∪(0,pi/2)"
                    )));
                }
                Ok(())
            }
            Singularity::PoleLattice { step, .. } => {
                if step.is_zero() {
                    return Err(Error::UnsupportedParameter("lattice step must be nonzero".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn location(&self) -> Option<&Complex> {
        match self {
            Singularity::Pole { location, .. }
            | Singularity::Algebraic { location, .. }
            | Singularity::Essential { location, .. } => Some(location),
            Singularity::PoleLattice { .. } => None,
        }
    }
}

impl fmt::Debug for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Singularity::Pole { location, order } => {
                write!(f, "Pole(order {order} at {})", fmt_c(location))
            }
            Singularity::Algebraic {
                location,
                lambda,
                theta,
                ..
            } => write!(
                f,
                "Algebraic(at {}, lambda={}, theta={})",
                fmt_c(location),
                fmt_c(lambda),
                fmt_c(theta)
            ),
            Singularity::Essential {
                location,
                descriptor,
            } => write!(f, "Essential(at {}, {descriptor})", fmt_c(location)),
            Singularity::PoleLattice { base, step, count, .. } => write!(
                f,
                "PoleLattice(base {}, step {}, {count:?})",
                fmt_c(base),
                fmt_c(step)
            ),
        }
    }
}

fn fmt_c(z: &Complex) -> String {
    format!("{:.6}+{:.6}i", z.real().to_f64(), z.imag().to_f64())
}

/// Declared asymptotic pattern of an unbounded pole family that is not a
/// lattice, e.g. the Γ(s+1) = −1 roots clustering factorially near the
/// negative integers (distinct offsets, so no finite union of rational-step
/// progressions can contain them).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleFamily {
    FactorialApproachToIntegers,
}

/// Builtin coefficient-function kinds exposed by `make_builtin` and the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinKind {
    /// φ(s) = exp(c s^θ), the lifting of E(z;c,θ).
    ExpPower { c: f64, theta: f64 },
    /// φ(s) = 1/(1 + Γ(s+1)), lifting 1/(1+n!).
    RecipGammaPlusOne,
    /// φ(s) = 1/(2^s − 1).
    RecipTwoPow,
    /// φ(s) = Γ(s√2)/Γ(s)^2 (normalized to meet the growth condition).
    GammaRatioNormalized,
    /// φ(s) = Γ(s√2), exposed without a continuation guarantee.
    GammaSqrtTwoPlain,
    /// φ(s) = 1/ζ(s+2).
    RecipZetaShift,
    /// φ(s) = s^{−λ}.
    PowerLaw { lambda: f64 },
    Constant { a: f64 },
    Identity,
}

impl BuiltinKind {
    pub fn label(&self) -> String {
        match self {
            BuiltinKind::ExpPower { c, theta } => format!("exp({c}*s^{theta})"),
            BuiltinKind::RecipGammaPlusOne => "1/(1+Gamma(s+1))".into(),
            BuiltinKind::RecipTwoPow => "1/(2^s-1)".into(),
            BuiltinKind::GammaRatioNormalized => "Gamma(s*sqrt2)/Gamma(s)^2".into(),
            BuiltinKind::GammaSqrtTwoPlain => "Gamma(s*sqrt2)".into(),
            BuiltinKind::RecipZetaShift => "1/zeta(s+2)".into(),
            BuiltinKind::PowerLaw { lambda } => format!("s^(-{lambda})"),
            BuiltinKind::Constant { a } => format!("{a}"),
            BuiltinKind::Identity => "s".into(),
        }
    }
}

type Evaluator = Arc<dyn Fn(&Complex) -> Result<Complex> + Send + Sync>;
type RealLnAbs = Arc<dyn Fn(f64) -> (f64, i8) + Send + Sync>;

/// An analytic lifting φ(s) of a sequence, with growth metadata and a
/// singularity catalog. Immutable after construction; safe to share.
#[derive(Clone)]
pub struct CoefficientFunction {
    label: String,
    kind: Option<BuiltinKind>,
    evaluator: Evaluator,
    /// (ln|φ(x)|, sign) for real x ≥ 1; powers the f64 block fast path of
    /// direct summation near z = −1.
    real_ln_abs: Option<RealLnAbs>,
    growth_a: f64,
    growth_c: f64,
    analytic_halfplane: f64,
    catalog: Vec<Singularity>,
    real_symmetric: bool,
    lindelof_ok: bool,
    pole_family: Option<PoleFamily>,
}

impl fmt::Debug for CoefficientFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientFunction")
            .field("label", &self.label)
            .field("growth_a", &self.growth_a)
            .field("catalog", &self.catalog)
            .finish()
    }
}

impl CoefficientFunction {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> Option<&BuiltinKind> {
        self.kind.as_ref()
    }

    /// The constant A of the growth bound |φ(s)| < C e^{A|s|}.
    pub fn growth_a(&self) -> f64 {
        self.growth_a
    }

    pub fn growth_c(&self) -> f64 {
        self.growth_c
    }

    pub fn analytic_halfplane(&self) -> f64 {
        self.analytic_halfplane
    }

    pub fn catalog(&self) -> &[Singularity] {
        &self.catalog
    }

    pub fn real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    pub fn lindelof_ok(&self) -> bool {
        self.lindelof_ok
    }

    pub fn pole_family(&self) -> Option<PoleFamily> {
        self.pole_family
    }

    pub(crate) fn real_ln_abs(&self) -> Option<&RealLnAbs> {
        self.real_ln_abs.as_ref()
    }

    /// Raw evaluator call without the singular-support guard.
    pub(crate) fn eval_raw(&self, s: &Complex) -> Result<Complex> {
        (self.evaluator)(s)
    }

    /// A user-supplied coefficient function.
    #[allow(clippy::too_many_arguments)]
    pub fn custom(
        label: impl Into<String>,
        evaluator: impl Fn(&Complex) -> Result<Complex> + Send + Sync + 'static,
        growth_a: f64,
        growth_c: f64,
        analytic_halfplane: f64,
        catalog: Vec<Singularity>,
        real_symmetric: bool,
    ) -> Result<Self> {
        if !(0.0..std::f64::consts::PI).contains(&growth_a) {
            return Err(Error::UnsupportedParameter(format!(
                "growth constant A = {growth_a} outside [0, pi)"
            )));
        }
        for s in &catalog {
            s.validate()?;
        }
        Ok(Self {
            label: label.into(),
            kind: None,
            evaluator: Arc::new(evaluator),
            real_ln_abs: None,
            growth_a,
            growth_c,
            analytic_halfplane,
            catalog,
            real_symmetric,
            lindelof_ok: true,
            pole_family: None,
        })
    }

    /// Distance from `s` to the cataloged singular support (f64 estimate).
    pub fn singular_distance(&self, s: &Complex) -> f64 {
        let sre = s.real().to_f64();
        let sim = s.imag().to_f64();
        let mut best = f64::INFINITY;
        for sing in &self.catalog {
            match sing {
                Singularity::Pole { location, .. }
                | Singularity::Algebraic { location, .. }
                | Singularity::Essential { location, .. } => {
                    let d = ((sre - location.real().to_f64()).powi(2)
                        + (sim - location.imag().to_f64()).powi(2))
                    .sqrt();
                    best = best.min(d);
                }
                Singularity::PoleLattice {
                    base, step, count, ..
                } => {
                    let bre = base.real().to_f64();
                    let bim = base.imag().to_f64();
                    let tre = step.real().to_f64();
                    let tim = step.imag().to_f64();
                    let norm2 = tre * tre + tim * tim;
                    // projection of s-base on the step direction
                    let t = ((sre - bre) * tre + (sim - bim) * tim) / norm2;
                    let mut ks: Vec<f64> = vec![t.round(), t.floor(), t.ceil()];
                    ks.dedup();
                    for k in ks {
                        let k = match count {
                            LatticeCount::Unbounded => k,
                            LatticeCount::Finite(n) => k.clamp(0.0, *n as f64 - 1.0),
                        };
                        let d = ((sre - bre - k * tre).powi(2) + (sim - bim - k * tim).powi(2))
                            .sqrt();
                        best = best.min(d);
                    }
                }
            }
        }
        best
    }
}

/// Evaluate φ(s) to the context tolerance.
pub fn evaluate(f: &CoefficientFunction, s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if f.singular_distance(s) <= 1e-12 {
        return Err(Error::SingularityHit(fmt_c(s)));
    }
    let wp = ctx.working(16).max(prec_of(s));
    let s_w = cx(wp, s);
    f.eval_raw(&s_w)
}

fn ctx_for(wp: u32) -> PrecisionContext {
    let bits = wp.max(53);
    let tol = 1e-300_f64.max(2f64.powi(-(bits.min(900) as i32) + 8));
    PrecisionContext::new(bits, tol).expect("internal context")
}

/// Construct a builtin coefficient function.
///
/// Stored catalog constants (lattice steps, root locations, ψ coefficients)
/// are computed at max(640, ctx.bits + 64) bits so downstream expansions stay
/// accurate well past the construction context.
pub fn make_builtin(kind: BuiltinKind, ctx: &PrecisionContext) -> Result<CoefficientFunction> {
    let store = (ctx.bits() + 64).max(640);
    match kind {
        BuiltinKind::ExpPower { c, theta } => make_exp_power(c, theta, store),
        BuiltinKind::RecipGammaPlusOne => make_recip_gamma_plus_one(store, ctx),
        BuiltinKind::RecipTwoPow => Ok(make_recip_two_pow(store)),
        BuiltinKind::GammaRatioNormalized => Ok(make_gamma_ratio(store, true)),
        BuiltinKind::GammaSqrtTwoPlain => Ok(make_gamma_ratio(store, false)),
        BuiltinKind::RecipZetaShift => Ok(make_recip_zeta_shift()),
        BuiltinKind::PowerLaw { lambda } => Ok(make_power_law(lambda, store)),
        BuiltinKind::Constant { a } => Ok(make_constant(a)),
        BuiltinKind::Identity => Ok(make_identity()),
    }
}

fn make_exp_power(c: f64, theta: f64, store: u32) -> Result<CoefficientFunction> {
    if !c.is_finite() || !theta.is_finite() {
        return Err(Error::UnsupportedParameter("ExpPower needs finite real c, theta".into()));
    }
    if theta > 1.0 {
        return Err(Error::UnsupportedParameter(format!(
            "ExpPower with theta = {theta} > 1 violates the growth condition"
        )));
    }
    if (theta - 1.0).abs() < 1e-12 && c.abs() >= std::f64::consts::PI - 0.01 {
        return Err(Error::UnsupportedParameter(format!(
            "ExpPower with theta = 1 needs |c| < pi, got {c}"
        )));
    }
    let evaluator: Evaluator = Arc::new(move |s: &Complex| {
        let wp = prec_of(s);
        if s.is_zero() && theta < 0.0 {
            return Err(Error::SingularityHit("0".into()));
        }
        if s.imag().is_zero() && s.real().is_sign_positive() && !s.real().is_zero() {
            // real axis fast path
            use rug::ops::Pow;
            let x = Float::with_val(wp, s.real());
            let p = Float::with_val(wp, x.pow(theta));
            return Ok(cx(wp, (p * c).exp()));
        }
        let ln_s = cx(wp, s).ln();
        let pow = cx(wp, &ln_s * fl(wp, theta)).exp();
        Ok(cx(wp, pow * fl(wp, c)).exp())
    });
    let (growth_a, growth_c) = if (theta - 1.0).abs() < 1e-12 {
        (c.abs() + 1e-9, 1.1)
    } else if theta > 0.0 {
        // max of |c| R^θ − A R over R ≥ 1/2 for the declared A
        let a = 0.01;
        let r_star = (c.abs() * theta / a).powf(1.0 / (1.0 - theta)).max(0.5);
        let m = (c.abs() * r_star.powf(theta) - a * r_star).max(0.0);
        (a, m.exp() * 1.1)
    } else {
        // θ ≤ 0: bounded on |s| ≥ 1/2 by e^{|c| 2^{|θ|}}
        (0.01, (c.abs() * 2f64.powf(-theta)).exp() * 1.1)
    };
    let zero = Complex::with_val(store, 0);
    let catalog = if theta > 0.0 && theta < 1.0 && c != 0.0 {
        // φ(s) = s^{-0} ψ(s^θ) with ψ(u) = e^{cu}: p_k = c^k/k!
        let mut psi = Vec::with_capacity(160);
        let mut p = Float::with_val(store, 1);
        psi.push(cx(store, &p));
        for k in 1..160u32 {
            p *= fl(store, c);
            p /= k;
            psi.push(cx(store, &p));
        }
        vec![Singularity::Algebraic {
            location: zero,
            lambda: Complex::with_val(store, 0),
            theta: Complex::with_val(store, theta),
            psi_coeffs: psi,
            psi_truncated: true,
            cut_angle: std::f64::consts::FRAC_PI_4,
        }]
    } else if theta < 0.0 && c != 0.0 {
        vec![Singularity::Essential {
            location: zero,
            descriptor: format!("exp({c} s^{theta}) essential point"),
        }]
    } else {
        Vec::new()
    };
    Ok(CoefficientFunction {
        label: BuiltinKind::ExpPower { c, theta }.label(),
        kind: Some(BuiltinKind::ExpPower { c, theta }),
        evaluator,
        real_ln_abs: Some(Arc::new(move |x: f64| (c * x.powf(theta), 1))),
        growth_a,
        growth_c,
        analytic_halfplane: 0.0,
        catalog,
        real_symmetric: true,
        lindelof_ok: true,
        pole_family: None,
    })
}

fn make_recip_gamma_plus_one(store: u32, ctx: &PrecisionContext) -> Result<CoefficientFunction> {
    let evaluator: Evaluator = Arc::new(move |s: &Complex| {
        let wp = prec_of(s);
        let arg = cx(wp, s + 1u32);
        let g = gamma(&arg, &ctx_for(wp))?;
        let denom = cx(wp, g + 1u32);
        if denom.is_zero() {
            return Err(Error::SingularityHit(fmt_c(s)));
        }
        Ok(cx(wp, Complex::with_val(wp, 1u32) / denom))
    });
    // poles of φ at (roots of Γ = −1) − 1, stored to high precision; the
    // complex root pairs lie right of the contour and drive the remark-(ii)
    // correction applied by the continuation
    let root_ctx = ctx.with_bits(store)?;
    let roots = gamma_plus_one_eq_minus_one_roots(12, &root_ctx)?;
    let mut catalog: Vec<Singularity> = roots
        .into_iter()
        .map(|r| Singularity::Pole {
            location: cx(store, r - 1u32),
            order: 1,
        })
        .collect();
    for u in gamma_minus_one_complex_roots(&root_ctx)? {
        let loc = cx(store, &u - 1u32);
        let conj = Complex::with_val(store, loc.conj_ref());
        catalog.push(Singularity::Pole {
            location: loc,
            order: 1,
        });
        catalog.push(Singularity::Pole {
            location: conj,
            order: 1,
        });
    }
    Ok(CoefficientFunction {
        label: BuiltinKind::RecipGammaPlusOne.label(),
        kind: Some(BuiltinKind::RecipGammaPlusOne),
        evaluator,
        real_ln_abs: None,
        growth_a: 0.01,
        growth_c: 10.0,
        analytic_halfplane: 0.0,
        catalog,
        real_symmetric: true,
        lindelof_ok: true,
        pole_family: Some(PoleFamily::FactorialApproachToIntegers),
    })
}

fn make_recip_two_pow(store: u32) -> CoefficientFunction {
    let evaluator: Evaluator = Arc::new(move |s: &Complex| {
        let wp = prec_of(s);
        let ln2 = fl(wp, 2).ln();
        let denom = cx(wp, s * &ln2).exp() - 1u32;
        if denom.is_zero() {
            return Err(Error::SingularityHit(fmt_c(s)));
        }
        Ok(cx(wp, Complex::with_val(wp, 1u32) / denom))
    });
    let ln2 = fl(store, 2).ln();
    let step_im = fl(store, pi(store) * 2u32) / &ln2;
    let step = Complex::with_val(store, (Float::with_val(store, 0), step_im));
    CoefficientFunction {
        label: BuiltinKind::RecipTwoPow.label(),
        kind: Some(BuiltinKind::RecipTwoPow),
        evaluator,
        real_ln_abs: Some(Arc::new(|x: f64| {
            // ln 1/(2^x - 1) = -(x ln2 + ln(1 - 2^{-x}))
            let tiny = (-(x * std::f64::consts::LN_2)).exp();
            (-(x * std::f64::consts::LN_2 + (-tiny).ln_1p()), 1)
        })),
        growth_a: 0.01,
        growth_c: 3.0,
        analytic_halfplane: 0.0,
        catalog: vec![Singularity::PoleLattice {
            base: Complex::with_val(store, 0),
            step,
            count: LatticeCount::Unbounded,
            step_exactness: Exactness::ExactIrrational("2*pi*i/log(2)".into()),
        }],
        real_symmetric: true,
        lindelof_ok: true,
        pole_family: None,
    }
}

fn make_gamma_ratio(store: u32, normalized: bool) -> CoefficientFunction {
    let evaluator: Evaluator = Arc::new(move |s: &Complex| {
        let wp = prec_of(s) + 16;
        let sqrt2 = fl(wp, 2).sqrt();
        let num = gamma(&cx(wp, s * &sqrt2), &ctx_for(wp))?;
        if !normalized {
            return Ok(num);
        }
        let den = gamma(&cx(wp, s), &ctx_for(wp))?;
        Ok(cx(wp, num / cx(wp, &den * &den)))
    });
    let sqrt2_inv = fl(store, 0.5).sqrt(); // 1/√2
    let step = Complex::with_val(store, (-sqrt2_inv.clone(), Float::with_val(store, 0)));
    let base = if normalized {
        // φ analytic at 0 (double zero of 1/Γ² cancels the m=0 pole); first pole at −1/√2
        Complex::with_val(store, (-sqrt2_inv, Float::with_val(store, 0)))
    } else {
        Complex::with_val(store, 0)
    };
    let a = if normalized {
        (2.0 - 2f64.sqrt()) * std::f64::consts::FRAC_PI_2 + 0.02
    } else {
        2f64.sqrt() * std::f64::consts::FRAC_PI_2 + 0.02
    };
    let kind = if normalized {
        BuiltinKind::GammaRatioNormalized
    } else {
        BuiltinKind::GammaSqrtTwoPlain
    };
    CoefficientFunction {
        label: kind.label(),
        kind: Some(kind),
        evaluator,
        real_ln_abs: None,
        growth_a: a,
        growth_c: 5.0,
        analytic_halfplane: 0.0,
        catalog: vec![Singularity::PoleLattice {
            base,
            step,
            count: LatticeCount::Unbounded,
            step_exactness: Exactness::ExactIrrational("-1/sqrt(2)".into()),
        }],
        real_symmetric: true,
        // Γ(s√2) alone violates (Growth) along the positive real axis.
        lindelof_ok: normalized,
        pole_family: None,
    }
}

fn make_recip_zeta_shift() -> CoefficientFunction {
    let evaluator: Evaluator = Arc::new(move |s: &Complex| {
        let wp = prec_of(s);
        let z = zeta_complex(&cx(wp, s + 2u32), wp)?;
        if z.is_zero() {
            return Err(Error::SingularityHit(fmt_c(s)));
        }
        Ok(cx(wp, Complex::with_val(wp, 1u32) / z))
    });
    CoefficientFunction {
        label: BuiltinKind::RecipZetaShift.label(),
        kind: Some(BuiltinKind::RecipZetaShift),
        evaluator,
        real_ln_abs: None,
        growth_a: 0.01,
        growth_c: 3.0,
        analytic_halfplane: 0.0,
        catalog: vec![Singularity::Essential {
            location: Complex::with_val(64, (-1.5, 0.0)),
            descriptor: "nontrivial zeta zeros (critical strip of zeta(s+2); locations not computed)"
                .into(),
        }],
        real_symmetric: true,
        lindelof_ok: true,
        pole_family: None,
    }
}

fn make_power_law(lambda: f64, store: u32) -> CoefficientFunction {
    let evaluator: Evaluator = Arc::new(move |s: &Complex| {
        let wp = prec_of(s);
        if s.is_zero() {
            return Err(Error::SingularityHit("0".into()));
        }
        if lambda == 0.0 {
            return Ok(cx(wp, 1u32));
        }
        if s.imag().is_zero() && s.real().is_sign_positive() {
            use rug::ops::Pow;
            let x = Float::with_val(wp, s.real());
            return Ok(cx(wp, x.pow(-lambda)));
        }
        let ln_s = cx(wp, s).ln();
        Ok(cx(wp, ln_s * fl(wp, -lambda)).exp())
    });
    let is_int = lambda.fract() == 0.0 && lambda.abs() < 1e15;
    let catalog = if lambda == 0.0 || (is_int && lambda < 0.0) {
        Vec::new() // polynomial
    } else if is_int && lambda > 0.0 {
        vec![Singularity::Pole {
            location: Complex::with_val(store, 0),
            order: lambda as u32,
        }]
    } else {
        vec![Singularity::Algebraic {
            location: Complex::with_val(store, 0),
            lambda: Complex::with_val(store, lambda),
            theta: Complex::with_val(store, 1),
            psi_coeffs: vec![Complex::with_val(store, 1)],
            psi_truncated: false,
            cut_angle: std::f64::consts::FRAC_PI_4,
        }]
    };
    CoefficientFunction {
        label: BuiltinKind::PowerLaw { lambda }.label(),
        kind: Some(BuiltinKind::PowerLaw { lambda }),
        evaluator,
        real_ln_abs: Some(Arc::new(move |x: f64| (-lambda * x.ln(), 1))),
        growth_a: 0.01,
        growth_c: 2f64.powf(lambda.abs()) * 1.1,
        analytic_halfplane: 0.0,
        catalog,
        real_symmetric: true,
        lindelof_ok: true,
        pole_family: None,
    }
}

fn make_constant(a: f64) -> CoefficientFunction {
    let evaluator: Evaluator = Arc::new(move |s: &Complex| Ok(cx(prec_of(s), a)));
    CoefficientFunction {
        label: BuiltinKind::Constant { a }.label(),
        kind: Some(BuiltinKind::Constant { a }),
        evaluator,
        real_ln_abs: Some(Arc::new(move |_x: f64| {
            (a.abs().ln(), if a >= 0.0 { 1 } else { -1 })
        })),
        growth_a: 0.005,
        growth_c: a.abs() * 1.1 + 0.1,
        analytic_halfplane: f64::NEG_INFINITY,
        catalog: Vec::new(),
        real_symmetric: true,
        lindelof_ok: true,
        pole_family: None,
    }
}

fn make_identity() -> CoefficientFunction {
    let evaluator: Evaluator = Arc::new(move |s: &Complex| Ok(cx(prec_of(s), s)));
    CoefficientFunction {
        label: BuiltinKind::Identity.label(),
        kind: Some(BuiltinKind::Identity),
        evaluator,
        real_ln_abs: Some(Arc::new(|x: f64| (x.ln(), 1))),
        growth_a: 0.01,
        growth_c: 40.0,
        analytic_halfplane: f64::NEG_INFINITY,
        catalog: Vec::new(),
        real_symmetric: true,
        lindelof_ok: true,
        pole_family: None,
    }
}

/// Real roots of Γ(s) = −1, sorted descending, accurate to ctx.tol.
///
/// Two roots lie in (−3,−2) and are found by a 1e−3 scan plus Newton; for
/// k ≥ 4 the root near −k is seeded at −k + (−1)^{k−1}/k! (the factorial
/// offset of the cluster) and polished the same way. Newton runs on the
/// entire function u(s) = 1/Γ(s) + 1, which is linear with slope ±k! near −k.
pub fn gamma_plus_one_eq_minus_one_roots(
    count: u32,
    ctx: &PrecisionContext,
) -> Result<Vec<Float>> {
    if count < 1 {
        return Err(Error::Domain("count must be >= 1".into()));
    }
    let wp = ctx.working(32);
    let u = |s: &Float| -> Float {
        let g = Float::with_val(wp, s).gamma();
        fl(wp, 1) / g + 1u32
    };
    let mut out: Vec<Float> = Vec::with_capacity(count as usize);

    // the (−3,−2) pair via sign-change scan
    let mut brackets = Vec::new();
    let scan_n = 1000;
    let mut prev_s = fl(wp, -3) + fl(wp, 5e-4);
    let mut prev_u = u(&prev_s);
    for i in 1..scan_n {
        let s = fl(wp, -3) + fl(wp, 5e-4) + fl(wp, i as f64 * 1e-3);
        if s.to_f64() >= -2.0005 {
            break;
        }
        let val = u(&s);
        if (prev_u.is_sign_negative() && val.is_sign_positive())
            || (prev_u.is_sign_positive() && val.is_sign_negative())
        {
            brackets.push((prev_s.clone(), s.clone()));
        }
        prev_s = s;
        prev_u = val;
    }
    if brackets.len() != 2 {
        return Err(Error::NonConvergence(format!(
            "expected 2 sign changes in (-3,-2), found {}",
            brackets.len()
        )));
    }
    let mut seeds: Vec<Float> = brackets
        .iter()
        .map(|(a, b)| fl(wp, a + b) / 2u32)
        .collect();
    // factorial-offset seeds near −k for k ≥ 4
    let mut fact = fl(wp, 6); // 3!
    for k in 4..(count + 2) {
        if seeds.len() as u32 >= count {
            break;
        }
        fact *= k;
        let sign = if k % 2 == 1 { 1i32 } else { -1 };
        let offset = fl(wp, sign) / &fact;
        seeds.push(fl(wp, -(k as f64)) + offset);
    }
    seeds.truncate(count as usize);

    let tol = ctx.tol();
    for seed in seeds {
        let mut s = seed;
        let mut converged = false;
        for _ in 0..80 {
            let g = Float::with_val(wp, &s).gamma();
            let psi = Float::with_val(wp, &s).digamma();
            let uval = fl(wp, 1) / &g + 1u32;
            let uder = fl(wp, -&psi) / &g;
            if uder.is_zero() {
                break;
            }
            let step = fl(wp, uval / uder);
            let step_abs = step.clone().abs().to_f64();
            s -= step;
            if step_abs <= tol * s.to_f64().abs() + 2f64.powi(-(wp as i32) + 8) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(format!(
                "Newton on 1/Gamma(s)+1 stalled near {}",
                s.to_f64()
            )));
        }
        out.push(fl(ctx.bits(), s));
    }
    // descending: the scan pair comes out ascending in |s| already; sort to be sure
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(out)
}

/// The known eight leading roots of Γ(s) = −1, for tests and docs.
pub const GAMMA_MINUS_ONE_ROOTS_REFERENCE: [f64; 8] = [
    -2.457024, -2.747682, -4.039361, -4.991544, -6.001385, -6.999801, -8.000024, -8.999997,
];

/// Upper-half-plane complex roots of Γ(u) = −1 with Re u > 1/2, ascending in
/// imaginary part. These sit right of the Lindelöf contour, so the
/// representation of Σ(−z)ⁿ/(1+n!) needs their residues as corrections.
///
/// Along the level curve |Γ(x+iy)| = 1 (y decreasing in x is monotone here),
/// arg Γ passes ±π once per revolution; each crossing is Newtonʼs seed.
pub fn gamma_minus_one_complex_roots(ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    use std::sync::OnceLock;
    static CACHE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let wp = ctx.working(32).max(320);
    if let Some(cached) = CACHE.get() {
        return polish_complex_roots(cached, wp, ctx);
    }
    let scan_ctx = ctx_for(64);
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    let mut prev: Option<(f64, f64, f64)> = None; // (x, y, arg)
    let mut x = 2.05f64;
    while x <= 11.0 {
        // bisect |Γ(x+iy)| = 1 in y (monotone decreasing in y for x > 0)
        let ln_abs = |y: f64| -> f64 {
            match gamma(&Complex::with_val(96, (x, y)), &scan_ctx) {
                Ok(g) => {
                    let a = crate::numerics::cabs(&g);
                    if a.is_zero() {
                        -1e9
                    } else {
                        a.ln().to_f64()
                    }
                }
                Err(_) => 1e9,
            }
        };
        if ln_abs(0.0) > 0.0 {
            let (mut lo, mut hi) = (0.0f64, 26.0f64);
            for _ in 0..54 {
                let mid = 0.5 * (lo + hi);
                if ln_abs(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let y = 0.5 * (lo + hi);
            let g = gamma(&Complex::with_val(96, (x, y)), &scan_ctx)?;
            let arg = g.imag().to_f64().atan2(g.real().to_f64());
            if let Some((px, py, parg)) = prev {
                // a ±π crossing shows as a sign flip near |arg| ≈ π
                if parg.signum() != arg.signum() && parg.abs() > 2.0 && arg.abs() > 2.0 {
                    seeds.push(((px + x) / 2.0, (py + y) / 2.0));
                }
            }
            prev = Some((x, y, arg));
        }
        x += 0.05;
    }
    let _ = CACHE.set(seeds.clone());
    polish_complex_roots(&seeds, wp, ctx)
}

fn polish_complex_roots(
    seeds: &[(f64, f64)],
    wp: u32,
    ctx: &PrecisionContext,
) -> Result<Vec<Complex>> {
    let eval_ctx = ctx_for(wp);
    let recip = move |u: &Complex| -> Result<Complex> {
        let p = prec_of(u);
        let g = gamma(u, &eval_ctx)?;
        let denom = cx(p, g + 1u32);
        if denom.is_zero() {
            return Err(Error::SingularityHit("root hit exactly".into()));
        }
        Ok(cx(p, Complex::with_val(p, 1u32) / denom))
    };
    let mut out = Vec::with_capacity(seeds.len());
    for (sx, sy) in seeds {
        let seed = Complex::with_val(wp, (*sx, *sy));
        let root = crate::numerics::refine_simple_pole(&recip, &seed, ctx.bits().max(256))?;
        out.push(root);
    }
    Ok(out)
}

/// Serialize the builtin's catalog to JSON (kind, params, singularities).
pub fn catalog_to_json(f: &CoefficientFunction) -> serde_json::Value {
    use serde_json::json;
    let sing: Vec<serde_json::Value> = f
        .catalog()
        .iter()
        .map(|s| match s {
            Singularity::Pole { location, order } => json!({
                "type": "pole",
                "location": { "re": location.real().to_f64(), "im": location.imag().to_f64() },
                "order": order,
            }),
            Singularity::Algebraic {
                location,
                lambda,
                theta,
                cut_angle,
                psi_coeffs,
                psi_truncated: _,
            } => json!({
                "type": "algebraic",
                "location": { "re": location.real().to_f64(), "im": location.imag().to_f64() },
                "lambda": { "re": lambda.real().to_f64(), "im": lambda.imag().to_f64() },
                "theta": { "re": theta.real().to_f64(), "im": theta.imag().to_f64() },
                "cut_angle": cut_angle,
                "psi_leading": psi_coeffs.iter().take(6).map(|p| p.real().to_f64()).collect::<Vec<_>>(),
            }),
            Singularity::Essential {
                location,
                descriptor,
            } => json!({
                "type": "essential",
                "location": { "re": location.real().to_f64(), "im": location.imag().to_f64() },
                "descriptor": descriptor,
            }),
            Singularity::PoleLattice {
                base,
                step,
                count,
                step_exactness,
            } => json!({
                "type": "pole_lattice",
                "base": { "re": base.real().to_f64(), "im": base.imag().to_f64() },
                "step": { "re": step.real().to_f64(), "im": step.imag().to_f64() },
                "count": match count { LatticeCount::Unbounded => json!("unbounded"), LatticeCount::Finite(n) => json!(n) },
                "step_exactness": match step_exactness {
                    Exactness::ExactRational { num, den } => json!({ "rational": [num, den] }),
                    Exactness::ExactIrrational(d) => json!({ "irrational": d }),
                    Exactness::FloatOnly => json!("float_only"),
                },
            }),
        })
        .collect();
    json!({
        "label": f.label(),
        "kind": f.kind().map(|k| k.label()),
        "growth_A": f.growth_a(),
        "growth_C": f.growth_c(),
        "analytic_halfplane": if f.analytic_halfplane().is_finite() { json!(f.analytic_halfplane()) } else { json!("entire") },
        "lindelof_ok": f.lindelof_ok(),
        "singularities": sing,
    })
}
