//! Asymptotic expansion engines at z → ∞: the polar case via numeric residues
//! and the algebraic case via the b_j/ψ coefficient convolution, sharing one
//! product-form term model coeff · z^{s0} · (log z)^p · exp(q (log z)^β) ·
//! cos(r (log z)^β + φ₀).

use crate::coeff_functions::{CoefficientFunction, Exactness, LatticeCount, Singularity};
use crate::error::{Error, Result};
use crate::numerics::{
    cabs, cx, fl, gamma, prec_of, refine_simple_pole, sin_expansion_coeffs, taylor_coeffs_numeric,
    CoeffMode, PrecisionContext,
};
use rug::Complex;
#[cfg(test)]
use rug::Float;
use std::fmt;

/// Which local variable an expansion lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionVariable {
    /// z → ∞, powers of z and log z.
    LogZAtInfinity,
    /// z → −1, powers of u = 1+z (and log 1/u).
    OnePlusZAtMinusOne,
    /// z → −1, powers of v = −log|z| inside exp/osc factors, with a (1+z)
    /// prefactor exponent, matching the Laplace boundary form.
    NegLogAbsZAtMinusOne,
}

impl ExpansionVariable {
    pub fn name(&self) -> &'static str {
        match self {
            ExpansionVariable::LogZAtInfinity => "log_z_at_infinity",
            ExpansionVariable::OnePlusZAtMinusOne => "one_plus_z_at_minus_one",
            ExpansionVariable::NegLogAbsZAtMinusOne => "neg_log_abs_z_at_minus_one",
        }
    }
}

/// exp(q · X^β) factor.
#[derive(Debug, Clone)]
pub struct ExpFactor {
    pub q: Complex,
    pub beta: f64,
}

/// cos(r · X^β + phase0) factor.
#[derive(Debug, Clone)]
pub struct OscFactor {
    pub r: Complex,
    pub phase0: f64,
    pub beta: f64,
}

/// One product-form term. In the infinity variable the β exponents must lie
/// in (0,1); the minus-one Laplace forms carry β = θ/(θ−1) < 0 instead.
#[derive(Debug, Clone)]
pub struct ExpansionTerm {
    pub coeff: Complex,
    /// Exponent of z (infinity variable) or of (1+z) (minus-one variables).
    pub z_exp: Complex,
    /// Power of log z (resp. log 1/(1+z), resp. v = −log|z|).
    pub log_pow: Complex,
    pub exp_factor: Option<ExpFactor>,
    pub osc: Option<OscFactor>,
    pub variable: ExpansionVariable,
}

impl ExpansionTerm {
    pub fn validate(&self) -> Result<()> {
        if !self.log_pow.real().is_finite() {
            return Err(Error::Domain("log power must be finite".into()));
        }
        if self.variable == ExpansionVariable::LogZAtInfinity {
            for beta in self
                .exp_factor
                .iter()
                .map(|e| e.beta)
                .chain(self.osc.iter().map(|o| o.beta))
            {
                if !(beta > 0.0 && beta < 1.0) {
                    return Err(Error::Domain(format!(
                        "infinity-variable exponent beta = {beta} outside (0,1)"
                    )));
                }
            }
        }
        Ok(())
    }

    fn shape_key(&self) -> (i64, i64, i64, i64, i64, i64) {
        let q = |x: f64| (x * 1e9).round() as i64;
        let exp_key = self
            .exp_factor
            .as_ref()
            .map(|e| q(e.q.real().to_f64()) ^ q(e.beta).rotate_left(17))
            .unwrap_or(i64::MIN);
        let osc_key = self
            .osc
            .as_ref()
            .map(|o| q(o.r.real().to_f64()) ^ q(o.beta).rotate_left(9))
            .unwrap_or(i64::MIN);
        (
            q(self.z_exp.real().to_f64()),
            q(self.z_exp.imag().to_f64()),
            q(self.log_pow.real().to_f64()),
            q(self.log_pow.imag().to_f64()),
            exp_key,
            osc_key,
        )
    }

    /// Dominance key at the expansion's limit: bigger sorts first.
    fn dominance_key(&self) -> (f64, f64, f64, f64) {
        let q_re = self
            .exp_factor
            .as_ref()
            .map(|e| e.q.real().to_f64())
            .unwrap_or(0.0);
        (
            self.z_exp.real().to_f64(),
            q_re,
            self.log_pow.real().to_f64(),
            -self.z_exp.imag().to_f64().abs(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let mut v = json!({
            "coeff_re": self.coeff.real().to_f64(),
            "coeff_im": self.coeff.imag().to_f64(),
            "s0": { "re": self.z_exp.real().to_f64(), "im": self.z_exp.imag().to_f64() },
            "log_pow": { "re": self.log_pow.real().to_f64(), "im": self.log_pow.imag().to_f64() },
            "variable": self.variable.name(),
        });
        if let Some(e) = &self.exp_factor {
            v["exp"] = json!({
                "q": { "re": e.q.real().to_f64(), "im": e.q.imag().to_f64() },
                "beta": e.beta,
            });
        }
        if let Some(o) = &self.osc {
            v["osc"] = json!({
                "r": { "re": o.r.real().to_f64(), "im": o.r.imag().to_f64() },
                "phase0": o.phase0,
                "beta": o.beta,
            });
        }
        v
    }
}

/// Symbolic record of a pole lattice whose members were truncated.
#[derive(Debug, Clone)]
pub struct LatticeNote {
    pub base: Complex,
    pub step: Complex,
    pub unbounded: bool,
    pub step_exactness: Exactness,
    pub truncated_at_imag: f64,
}

/// A dominance-ordered asymptotic expansion plus its error order.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub terms: Vec<ExpansionTerm>,
    /// O(·) descriptor: an ExpansionTerm whose coefficient is ignored.
    pub error_order: Option<ExpansionTerm>,
    pub source: String,
    /// Present when a pole lattice was truncated; the expansion then stands
    /// for an infinite family recorded here symbolically.
    pub lattice: Option<LatticeNote>,
    pub notes: Vec<String>,
}

impl Expansion {
    pub fn new(source: impl Into<String>) -> Self {
        Self {
            terms: Vec::new(),
            error_order: None,
            source: source.into(),
            lattice: None,
            notes: Vec::new(),
        }
    }

    /// Sort by dominance (descending) and merge terms of equal shape.
    pub fn normalize(&mut self) {
        let wp = self
            .terms
            .first()
            .map(|t| prec_of(&t.coeff))
            .unwrap_or(64);
        let mut merged: Vec<ExpansionTerm> = Vec::with_capacity(self.terms.len());
        'outer: for t in self.terms.drain(..) {
            for m in merged.iter_mut() {
                if m.shape_key() == t.shape_key() {
                    m.coeff = cx(wp.max(prec_of(&t.coeff)), &m.coeff + &t.coeff);
                    continue 'outer;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| {
            let a = cabs(&t.coeff);
            !a.is_zero() && a.to_f64().abs() > 1e-280
        });
        merged.sort_by(|a, b| {
            b.dominance_key()
                .partial_cmp(&a.dominance_key())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        self.terms = merged;
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        json!({
            "terms": self.terms.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            "error_order": self.error_order.as_ref().map(|t| {
                let mut j = t.to_json();
                if let Some(o) = j.as_object_mut() {
                    o.remove("coeff_re");
                    o.remove("coeff_im");
                }
                j
            }),
            "source": self.source,
            "lattice": self.lattice.as_ref().map(|l| json!({
                "base": { "re": l.base.real().to_f64(), "im": l.base.imag().to_f64() },
                "step": { "re": l.step.real().to_f64(), "im": l.step.imag().to_f64() },
                "unbounded": l.unbounded,
                "truncated_at_imag": l.truncated_at_imag,
            })),
            "notes": self.notes,
        })
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, t) in self.terms.iter().enumerate() {
            let c_re = t.coeff.real().to_f64();
            let c_im = t.coeff.imag().to_f64();
            let (sign, mag) = if c_im.abs() <= 1e-12 * c_re.abs().max(1e-300) {
                if c_re < 0.0 {
                    ("-", trim_num(-c_re))
                } else {
                    ("+", trim_num(c_re))
                }
            } else {
                ("+", format!("({:.6}{:+.6}i)", c_re, c_im))
            };
            if i == 0 && sign == "+" {
                write!(f, "{mag}")?;
            } else if i == 0 {
                write!(f, "-{mag}")?;
            } else {
                write!(f, " {sign} {mag}")?;
            }
            write!(f, "{}", render_powers(t))?;
        }
        if let Some(e) = &self.error_order {
            write!(f, " + O({})", render_powers_bare(e))?;
        }
        Ok(())
    }
}

fn trim_num(x: f64) -> String {
    let s = format!("{x:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn var_symbols(v: ExpansionVariable) -> (&'static str, &'static str) {
    match v {
        ExpansionVariable::LogZAtInfinity => ("z", "log z"),
        ExpansionVariable::OnePlusZAtMinusOne => ("(1+z)", "log 1/(1+z)"),
        ExpansionVariable::NegLogAbsZAtMinusOne => ("(1+z)", "v"),
    }
}

fn render_powers(t: &ExpansionTerm) -> String {
    let (zs, ls) = var_symbols(t.variable);
    let mut out = String::new();
    let fmt_pow = |x: &Complex| -> String {
        if x.imag().to_f64().abs() < 1e-12 {
            trim_num(x.real().to_f64())
        } else {
            format!("({:.4}{:+.4}i)", x.real().to_f64(), x.imag().to_f64())
        }
    };
    if !t.z_exp.is_zero() {
        out.push_str(&format!("*{zs}^({})", fmt_pow(&t.z_exp)));
    }
    if !t.log_pow.is_zero() {
        out.push_str(&format!("*({ls})^({})", fmt_pow(&t.log_pow)));
    }
    if let Some(e) = &t.exp_factor {
        out.push_str(&format!("*exp({}*({ls})^({}))", fmt_pow(&e.q), e.beta));
    }
    if let Some(o) = &t.osc {
        out.push_str(&format!(
            "*cos({}*({ls})^({}){:+.6})",
            fmt_pow(&o.r),
            o.beta,
            o.phase0
        ));
    }
    out
}

fn render_powers_bare(t: &ExpansionTerm) -> String {
    let s = render_powers(t);
    if s.is_empty() {
        "1".to_string()
    } else {
        s.strip_prefix('*').unwrap_or(&s).to_string()
    }
}

/// 1/Γ(x) for complex x, zero at the non-positive integers.
fn recip_gamma_c(x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let wp = ctx.working(24).max(prec_of(x));
    if x.imag().to_f64().abs() < 1e-12 {
        let re = x.real().to_f64();
        if re <= 0.5 && (re - re.round()).abs() < 1e-10 {
            return Ok(cx(wp, 0));
        }
    }
    let g = gamma(x, ctx)?;
    Ok(cx(wp, Complex::with_val(wp, 1u32) / g))
}

/// Distance from s0 to the nearest other singular point (catalog entries,
/// lattice members, and the integer lattice of sin poles).
fn min_other_singular_dist(f: &CoefficientFunction, s0: &Complex) -> f64 {
    let re = s0.real().to_f64();
    let im = s0.imag().to_f64();
    let mut best = f64::INFINITY;
    let mut consider = |x: f64, y: f64| {
        let d = ((re - x).powi(2) + (im - y).powi(2)).sqrt();
        if d > 1e-9 {
            best = best.min(d);
        }
    };
    let n0 = re.round();
    for dn in [-1.0, 0.0, 1.0] {
        consider(n0 + dn, 0.0);
    }
    for sing in f.catalog() {
        match sing {
            Singularity::Pole { location, .. }
            | Singularity::Algebraic { location, .. }
            | Singularity::Essential { location, .. } => {
                consider(location.real().to_f64(), location.imag().to_f64());
            }
            Singularity::PoleLattice {
                base, step, count, ..
            } => {
                let bre = base.real().to_f64();
                let bim = base.imag().to_f64();
                let tre = step.real().to_f64();
                let tim = step.imag().to_f64();
                let norm2 = tre * tre + tim * tim;
                let t = ((re - bre) * tre + (im - bim) * tim) / norm2;
                for k in [t.floor() - 1.0, t.floor(), t.ceil(), t.ceil() + 1.0] {
                    let k = match count {
                        LatticeCount::Unbounded => k,
                        LatticeCount::Finite(n) => k.clamp(0.0, *n as f64 - 1.0),
                    };
                    consider(bre + k * tre, bim + k * tim);
                }
            }
        }
    }
    best
}

fn is_integer_point(s: &Complex) -> bool {
    let re = s.real().to_f64();
    s.imag().to_f64().abs() < 1e-10 && (re - re.round()).abs() < 1e-10
}

/// Residue terms −Res(π/sin(πs) · φ(s) · z^s; s0) for a pole of φ of order
/// `phi_order` at `location` (0 when φ is regular there and only π/sin πs has
/// the pole). The result is z^{s0} times a log-polynomial of degree μ−1 with
/// μ = phi_order + [s0 ∈ ℤ], built from numeric Laurent data.
pub fn residue_terms(
    f: &CoefficientFunction,
    location: &Complex,
    phi_order: u32,
    ctx: &PrecisionContext,
) -> Result<Vec<ExpansionTerm>> {
    let wp = ctx.working(32);
    let mut s0 = cx(wp, location);
    let integer_here = is_integer_point(&s0);
    if integer_here {
        s0 = cx(wp, location.real().to_f64().round());
    } else if phi_order == 1 {
        s0 = refine_simple_pole(|s| f.eval_raw(s), &s0, ctx.bits())?;
    }
    let mu = phi_order + u32::from(integer_here);
    if mu == 0 {
        return Ok(Vec::new());
    }
    let o = phi_order as i64;
    let radius_f = (0.5 * min_other_singular_dist(f, &s0)).clamp(1e-3, 2.0);
    let radius = fl(wp, radius_f);
    let phi_coeffs = taylor_coeffs_numeric(
        |s| f.eval_raw(s),
        &s0,
        &radius,
        (o + 2) as usize,
        if o > 0 {
            CoeffMode::Laurent { order: phi_order }
        } else {
            CoeffMode::Taylor
        },
        ctx,
    )?;
    let b = sin_expansion_coeffs(&s0, o + 1, ctx)?;
    // h = φ · π/sin(πs); h_{−1−m} = Σ_{i+j=−1−m} φ_i b_j with i ≥ −o, j ≥ −1
    let phi_at = |i: i64| -> Complex {
        let idx = i + o;
        if idx < 0 || idx as usize >= phi_coeffs.len() {
            cx(wp, 0)
        } else {
            phi_coeffs[idx as usize].clone()
        }
    };
    let b_at = |j: i64| -> Complex {
        let idx = j + 1;
        if idx < 0 || idx as usize >= b.len() {
            cx(wp, 0)
        } else {
            b[idx as usize].clone()
        }
    };
    let mut terms = Vec::new();
    let mut m_fact = fl(wp, 1);
    for m in 0..mu as i64 {
        if m > 0 {
            m_fact *= m as u32;
        }
        let mut h = cx(wp, 0);
        let mut i = -o;
        while i <= -m {
            let j = -1 - m - i;
            h += cx(wp, phi_at(i) * b_at(j));
            i += 1;
        }
        let coeff = cx(wp, h / &m_fact) * -1i32;
        terms.push(ExpansionTerm {
            coeff,
            z_exp: s0.clone(),
            log_pow: cx(wp, m),
            exp_factor: None,
            osc: None,
            variable: ExpansionVariable::LogZAtInfinity,
        });
    }
    // noise floor: products of the Laurent/b magnitudes that cancelled to
    // ~quadrature accuracy are numerical zeros (e.g. φ(−n) = 0 exactly when a
    // Γ pole kills the value)
    let phi_scale = phi_coeffs
        .iter()
        .map(|c| cabs(c).to_f64())
        .fold(0.0f64, f64::max);
    let b_scale = b.iter().map(|c| cabs(c).to_f64()).fold(0.0f64, f64::max);
    let floor = (phi_scale * b_scale).max(1e-300) * 1e-25;
    terms.retain(|t| cabs(&t.coeff).to_f64() > floor);
    Ok(terms)
}

const DEFAULT_LATTICE_CAP: f64 = 40.0;

/// Polar expansion at z → ∞: residues of φ(s)π/sin(πs)z^s over all poles in
/// the strip −B < Re s < 1/2, with pole lattices truncated at |Im s| ≤ 40 and
/// recorded symbolically. Error order z^{−B}.
pub fn polar_expansion(
    f: &CoefficientFunction,
    b_strip: f64,
    ctx: &PrecisionContext,
) -> Result<Expansion> {
    polar_expansion_capped(f, b_strip, DEFAULT_LATTICE_CAP, ctx)
}

pub fn polar_expansion_capped(
    f: &CoefficientFunction,
    b_strip: f64,
    lattice_cap: f64,
    ctx: &PrecisionContext,
) -> Result<Expansion> {
    if !(b_strip > 0.0) {
        return Err(Error::Domain("strip width B must be positive".into()));
    }
    if (b_strip - b_strip.round()).abs() < 1e-9 {
        return Err(Error::Domain(format!(
            "B = {b_strip} puts the boundary on a sin pole; shift it off the integers"
        )));
    }
    let wp = ctx.working(32);
    let in_strip = |re: f64, im: f64| re > -b_strip && re < 0.5 && im.abs() <= lattice_cap;

    let mut poles: Vec<(Complex, u32)> = Vec::new();
    let mut lattice_note: Option<LatticeNote> = None;
    let mut notes: Vec<String> = Vec::new();
    for sing in f.catalog() {
        match sing {
            Singularity::Pole { location, order } => {
                let re = location.real().to_f64();
                let im = location.imag().to_f64();
                if re > -b_strip && re < 0.5 {
                    if im.abs() > lattice_cap {
                        notes.push(format!(
                            "pole at {} beyond the imaginary cap",
                            fmt_c(location)
                        ));
                        continue;
                    }
                    poles.push((cx(wp, location), *order));
                }
            }
            Singularity::Algebraic { location, .. } => {
                let re = location.real().to_f64();
                if re > -b_strip && re < 0.5 {
                    return Err(Error::HypothesisViolation(format!(
                        "algebraic singularity at {} in the strip; polar expansion does not apply",
                        fmt_c(location)
                    )));
                }
            }
            Singularity::Essential {
                location,
                descriptor,
            } => {
                let re = location.real().to_f64();
                if re > -b_strip && re < 0.5 {
                    return Err(Error::CatalogIncomplete(format!(
                        "essential entry in the strip at {}: {descriptor}",
                        fmt_c(location)
                    )));
                }
            }
            Singularity::PoleLattice {
                base,
                step,
                count,
                step_exactness,
            } => {
                let scan = match count {
                    LatticeCount::Finite(n) => *n as i64,
                    LatticeCount::Unbounded => {
                        let sl = cabs(step).to_f64().max(1e-9);
                        ((b_strip + lattice_cap) / sl).ceil() as i64 + 4
                    }
                };
                let range: Vec<i64> = match count {
                    LatticeCount::Finite(_) => (0..scan).collect(),
                    LatticeCount::Unbounded => (-scan..=scan).collect(),
                };
                let mut truncated = false;
                for k in range {
                    let member = cx(wp, base + cx(wp, step * fl(wp, k as f64)));
                    let re = member.real().to_f64();
                    let im = member.imag().to_f64();
                    if re > -b_strip && re < 0.5 && im.abs() > lattice_cap {
                        truncated = true;
                    }
                    if in_strip(re, im) {
                        poles.push((member, 1));
                    }
                }
                if truncated || *count == LatticeCount::Unbounded {
                    lattice_note = Some(LatticeNote {
                        base: cx(wp, base),
                        step: cx(wp, step),
                        unbounded: *count == LatticeCount::Unbounded,
                        step_exactness: step_exactness.clone(),
                        truncated_at_imag: lattice_cap,
                    });
                    notes.push(format!(
                        "pole lattice truncated at |Im s| <= {lattice_cap}; the full family is recorded symbolically"
                    ));
                }
            }
        }
    }
    // sin poles at the integers −n, 0 ≤ n < B, merged with coincident φ-poles
    let n_top = (b_strip - 1e-12).floor() as i64;
    for n in 0..=n_top {
        let loc = cx(wp, -n);
        if !poles
            .iter()
            .any(|(p, _)| cabs(&cx(wp, p - &loc)).to_f64() < 1e-9)
        {
            poles.push((loc, 0));
        }
    }
    let mut merged: Vec<(Complex, u32)> = Vec::new();
    'outer: for (loc, ord) in poles {
        for (mloc, mord) in merged.iter_mut() {
            if cabs(&cx(wp, &loc - &*mloc)).to_f64() < 1e-9 {
                *mord += ord;
                continue 'outer;
            }
        }
        merged.push((loc, ord));
    }

    let mut exp = Expansion::new(format!("polar_expansion({}, B={b_strip})", f.label()));
    for (loc, ord) in merged {
        exp.terms.extend(residue_terms(f, &loc, ord, ctx)?);
    }
    exp.error_order = Some(ExpansionTerm {
        coeff: cx(wp, 1),
        z_exp: cx(wp, -b_strip),
        log_pow: cx(wp, 0),
        exp_factor: None,
        osc: None,
        variable: ExpansionVariable::LogZAtInfinity,
    });
    exp.lattice = lattice_note;
    exp.notes = notes;
    exp.normalize();
    Ok(exp)
}

fn fmt_c(z: &Complex) -> String {
    format!("{:.6}+{:.6}i", z.real().to_f64(), z.imag().to_f64())
}

struct AlgebraicData {
    location: Complex,
    lambda: Complex,
    theta: Complex,
    psi: Vec<Complex>,
    psi_truncated: bool,
}

/// Algebraic (Hankel) expansion at z → ∞ to scale K:
///
/// F(z) ∼ Σ_{0≤n≤n_max} (−1)^{n+1} φ(−n) z^{−n}
///        − Σ_m z^{s_m} Σ_{k,j: Re(θ_m k+j)<K} p_{m,k} b_j(s_m)/Γ(−θ_m k−j+λ_m)
///          · (log z)^{−θ_m k−j+λ_m−1}.
///
/// n_max is −Re s₁ when Re s₁ ∈ ℤ and no dominant singularity is itself an
/// integer, else ⌈−Re s₁⌉−1. The second sum runs over the dominant group: the
/// rightmost algebraic singularities plus any poles at or right of them.
/// Terms whose 1/Γ factor lands on a non-positive integer vanish.
pub fn algebraic_expansion(
    f: &CoefficientFunction,
    k_scale: f64,
    ctx: &PrecisionContext,
) -> Result<Expansion> {
    if !(k_scale > 0.0) {
        return Err(Error::Domain("expansion order K must be positive".into()));
    }
    let wp = ctx.working(32);
    let mut algebraics: Vec<AlgebraicData> = Vec::new();
    let mut poles: Vec<(Complex, u32)> = Vec::new();
    let mut min_sin = 1.0f64;
    for sing in f.catalog() {
        match sing {
            Singularity::Algebraic {
                location,
                lambda,
                theta,
                psi_coeffs,
                psi_truncated,
                cut_angle,
            } => {
                min_sin = min_sin.min(cut_angle.sin().abs());
                algebraics.push(AlgebraicData {
                    location: cx(wp, location),
                    lambda: cx(wp, lambda),
                    theta: cx(wp, theta),
                    psi: psi_coeffs.clone(),
                    psi_truncated: *psi_truncated,
                });
            }
            Singularity::Pole { location, order } => poles.push((cx(wp, location), *order)),
            Singularity::Essential {
                location,
                descriptor,
            } => {
                return Err(Error::CatalogIncomplete(format!(
                    "essential singularity at {}: {descriptor}",
                    fmt_c(location)
                )));
            }
            Singularity::PoleLattice { .. } => {
                return Err(Error::HypothesisViolation(
                    "pole lattices are outside the algebraic-case hypotheses; use polar_expansion"
                        .into(),
                ));
            }
        }
    }
    if algebraics.is_empty() && poles.is_empty() {
        return Err(Error::Domain(
            "entire coefficient function: no singularities to expand around".into(),
        ));
    }
    if f.growth_a() >= std::f64::consts::PI * min_sin {
        return Err(Error::HypothesisViolation(format!(
            "growth constant A = {} not below pi*min|sin cut_angle| = {}",
            f.growth_a(),
            std::f64::consts::PI * min_sin
        )));
    }

    let re_alg_max = algebraics
        .iter()
        .map(|a| a.location.real().to_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    let re_pole_max = poles
        .iter()
        .map(|(l, _)| l.real().to_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    let threshold = if re_alg_max.is_finite() {
        re_alg_max
    } else {
        re_pole_max
    };
    let mut dominant: Vec<AlgebraicData> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    for a in &algebraics {
        if a.location.real().to_f64() >= threshold - 1e-9 {
            dominant.push(AlgebraicData {
                location: a.location.clone(),
                lambda: a.lambda.clone(),
                theta: a.theta.clone(),
                psi: a.psi.clone(),
                psi_truncated: a.psi_truncated,
            });
        } else {
            skipped.push(fmt_c(&a.location));
        }
    }
    for (loc, ord) in &poles {
        if loc.real().to_f64() >= threshold - 1e-9 {
            // pole of order μ as algebraic data: λ = μ, θ = 1, ψ = the Laurent
            // series reindexed from its lowest coefficient
            let mut loc_r = loc.clone();
            if !is_integer_point(&loc_r) && *ord == 1 {
                loc_r = refine_simple_pole(|s| f.eval_raw(s), &loc_r, ctx.bits())?;
            }
            let radius_f = (0.5 * min_other_singular_dist(f, &loc_r)).clamp(1e-3, 2.0);
            let count = (*ord as usize) + k_scale.ceil() as usize + 2;
            let psi = taylor_coeffs_numeric(
                |s| f.eval_raw(s),
                &loc_r,
                &fl(wp, radius_f),
                count,
                CoeffMode::Laurent { order: *ord },
                ctx,
            )?;
            dominant.push(AlgebraicData {
                location: loc_r,
                lambda: cx(wp, *ord),
                theta: cx(wp, 1),
                psi,
                psi_truncated: true,
            });
        } else {
            skipped.push(fmt_c(loc));
        }
    }

    let s1_re = dominant
        .iter()
        .map(|a| a.location.real().to_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    let s1_re_is_int = (s1_re - s1_re.round()).abs() < 1e-9;
    let any_dominant_integer = dominant.iter().any(|a| is_integer_point(&a.location));
    let n_max: i64 = if s1_re_is_int && !any_dominant_integer {
        (-s1_re).round() as i64
    } else {
        (-s1_re).ceil() as i64 - 1
    };

    let mut exp = Expansion::new(format!("algebraic_expansion({}, K={k_scale})", f.label()));
    if n_max >= 0 {
        for n in 0..=n_max {
            let s = cx(wp, -n);
            let phi = crate::coeff_functions::evaluate(f, &s, ctx)?;
            let sign = if n % 2 == 0 { -1i32 } else { 1 };
            exp.terms.push(ExpansionTerm {
                coeff: cx(wp, phi * sign),
                z_exp: cx(wp, -n),
                log_pow: cx(wp, 0),
                exp_factor: None,
                osc: None,
                variable: ExpansionVariable::LogZAtInfinity,
            });
        }
    }
    for a in &dominant {
        let theta_re = a.theta.real().to_f64();
        let j_max = k_scale.ceil() as i64 + 2;
        let b = sin_expansion_coeffs(&a.location, j_max, ctx)?;
        let k_limit = (((k_scale + 1.5) / theta_re).ceil() as i64).max(0);
        for k in 0..=k_limit {
            for j in -1..=j_max {
                if theta_re * k as f64 + j as f64 >= k_scale {
                    continue;
                }
                if k as usize >= a.psi.len() {
                    if a.psi_truncated {
                        return Err(Error::CatalogIncomplete(format!(
                            "psi coefficients exhausted at k = {k} for {}",
                            f.label()
                        )));
                    }
                    continue; // finite polynomial ψ: the missing p_k are zero
                }
                let p_k = &a.psi[k as usize];
                if p_k.is_zero() {
                    continue;
                }
                let b_j = &b[(j + 1) as usize];
                if b_j.is_zero() {
                    continue;
                }
                // argument −θk − j + λ of the reciprocal Γ
                let arg = cx(wp, &a.lambda - cx(wp, &a.theta * fl(wp, k as f64))) - j;
                let rg = recip_gamma_c(&arg, ctx)?;
                if rg.is_zero() {
                    continue;
                }
                let coeff = cx(wp, cx(wp, p_k * b_j) * rg) * -1i32;
                if cabs(&coeff).to_f64() < 1e-290 {
                    continue;
                }
                let log_pow = cx(wp, &arg - 1u32);
                exp.terms.push(ExpansionTerm {
                    coeff,
                    z_exp: a.location.clone(),
                    log_pow,
                    exp_factor: None,
                    osc: None,
                    variable: ExpansionVariable::LogZAtInfinity,
                });
            }
        }
    }
    let lambda_max = dominant
        .iter()
        .map(|a| a.lambda.real().to_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    exp.error_order = Some(ExpansionTerm {
        coeff: cx(wp, 1),
        z_exp: cx(wp, s1_re),
        log_pow: cx(wp, -k_scale + lambda_max - 1.0),
        exp_factor: None,
        osc: None,
        variable: ExpansionVariable::LogZAtInfinity,
    });
    if !skipped.is_empty() {
        exp.notes.push(format!(
            "subdominant singularities not expanded: {}",
            skipped.join(", ")
        ));
    }
    exp.normalize();
    Ok(exp)
}

/// Evaluate the first `n_terms` terms of an expansion at z, per the term
/// model of the declared variable.
pub fn evaluate_expansion(e: &Expansion, z: &Complex, n_terms: usize) -> Result<Complex> {
    let variable = match e.terms.first() {
        Some(t) => t.variable,
        None => return Ok(cx(prec_of(z).max(64), 0)),
    };
    if e.terms.iter().any(|t| t.variable != variable) {
        return Err(Error::VariableMismatch(
            "expansion mixes variables; evaluate the pieces separately".into(),
        ));
    }
    let wp = prec_of(z).max(96) + 32;
    match variable {
        ExpansionVariable::LogZAtInfinity => {
            let ln_abs = cabs(z).ln().to_f64();
            if !(ln_abs > 1.0) {
                return Err(Error::ValidityRegion(format!(
                    "infinity-variable expansion needs |z| > e, got ln|z| = {ln_abs}"
                )));
            }
        }
        _ => {
            let u = cx(wp, z + 1u32);
            if !(cabs(&u).to_f64() < 0.5) {
                return Err(Error::ValidityRegion(
                    "minus-one-variable expansion needs |1+z| < 1/2".into(),
                ));
            }
        }
    }
    let mut acc = cx(wp, 0);
    for t in e.terms.iter().take(n_terms) {
        acc += term_value(t, z, wp)?;
    }
    Ok(acc)
}

fn term_value(t: &ExpansionTerm, z: &Complex, wp: u32) -> Result<Complex> {
    let (big_x, prefactor) = match t.variable {
        ExpansionVariable::LogZAtInfinity => {
            let x = cx(wp, z).ln();
            let pre = cx(wp, &t.z_exp * &x).exp(); // z^{s0}
            (x, pre)
        }
        ExpansionVariable::OnePlusZAtMinusOne => {
            let u = cx(wp, z + 1u32);
            let ln_u = u.ln();
            let pre = cx(wp, &t.z_exp * &ln_u).exp(); // (1+z)^{s0}
            let x = cx(wp, ln_u * -1i32); // log 1/(1+z)
            (x, pre)
        }
        ExpansionVariable::NegLogAbsZAtMinusOne => {
            let u = cx(wp, z + 1u32);
            let ln_u = u.ln();
            let pre = cx(wp, &t.z_exp * &ln_u).exp();
            let v = cx(wp, cabs(z).ln() * -1i32); // v = −log|z|
            (v, pre)
        }
    };
    let mut val = cx(wp, &t.coeff * &prefactor);
    if !t.log_pow.is_zero() {
        let lx = big_x.clone().ln();
        val *= cx(wp, &t.log_pow * &lx).exp();
    }
    if let Some(efac) = &t.exp_factor {
        let xb = cx(wp, big_x.clone().ln() * fl(wp, efac.beta)).exp();
        val *= cx(wp, &efac.q * &xb).exp();
    }
    if let Some(osc) = &t.osc {
        let xb = cx(wp, big_x.clone().ln() * fl(wp, osc.beta)).exp();
        let arg = cx(wp, &osc.r * &xb) + fl(wp, osc.phase0);
        val *= arg.cos();
    }
    Ok(val)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_functions::{make_builtin, BuiltinKind};
    use crate::lindelof::continue_gf;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(128, (re, im))
    }

    #[test]
    fn residue_of_constant_at_minus_one() {
        // Constant(1), sin pole at −1: term +z^{−1}
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        let terms = residue_terms(&f, &c(-1.0, 0.0), 0, &ctx()).unwrap();
        assert_eq!(terms.len(), 1);
        assert!((terms[0].coeff.real().to_f64() - 1.0).abs() < 1e-12);
        assert!((terms[0].z_exp.real().to_f64() + 1.0).abs() < 1e-12);
        assert!(terms[0].log_pow.is_zero());
    }

    #[test]
    fn residue_of_recip_gamma_matches_closed_form() {
        // pole s_k ≈ −3.457: coeff = −(π/sin πs_k)·(1/Γ'(s_k+1)), and
        // Γ'(u) = Γ(u)ψ(u) = −ψ(u) at the root where Γ(u) = −1
        let f = make_builtin(BuiltinKind::RecipGammaPlusOne, &ctx()).unwrap();
        let loc = f.catalog()[0].location().unwrap().clone();
        let terms = residue_terms(&f, &loc, 1, &ctx()).unwrap();
        assert_eq!(terms.len(), 1);
        let s_k = Float::with_val(256, loc.real());
        let u = Float::with_val(256, &s_k + 1u32);
        let psi = u.digamma();
        let sin = Float::with_val(256, crate::numerics::pi(256) * &s_k).sin();
        let expect = -(crate::numerics::pi(256) / sin) * (Float::with_val(256, -1) / psi);
        let got = terms[0].coeff.real().to_f64();
        assert!(
            (got - expect.to_f64()).abs() < 1e-10 * expect.to_f64().abs(),
            "got {got}, expect {}",
            expect.to_f64()
        );
    }

    #[test]
    fn residue_two_radius_agreement() {
        // the residue from the engine equals the raw contour integral of
        // φ·π/sin·(unit) recomputed at two different radii
        let f = make_builtin(BuiltinKind::RecipGammaPlusOne, &ctx()).unwrap();
        let loc = f.catalog()[1].location().unwrap().clone();
        let t1 = residue_terms(&f, &loc, 1, &ctx()).unwrap();
        let s0 = refine_simple_pole(|s| f.eval_raw(s), &cx(160, &loc), 128).unwrap();
        for r in [0.1, 0.05] {
            let h = |s: &Complex| -> Result<Complex> {
                let phi = f.eval_raw(s)?;
                let sf = crate::numerics::recip_sin_pi(s)?;
                Ok(cx(prec_of(s), phi * sf))
            };
            let co = taylor_coeffs_numeric(
                h,
                &s0,
                &fl(160, r),
                1,
                CoeffMode::Laurent { order: 1 },
                &ctx(),
            )
            .unwrap();
            let res_neg = cx(160, &co[0]) * -1i32;
            let d = cx(160, &t1[0].coeff - &res_neg);
            assert!(
                cabs(&d).to_f64() <= 1e-11 * cabs(&res_neg).to_f64(),
                "radius {r}: {:.3e}",
                cabs(&d).to_f64()
            );
        }
    }

    #[test]
    fn power_law_double_pole_gives_log() {
        // PowerLaw(1): φ-pole and sin pole at 0 → −log z (constant term zero)
        let f = make_builtin(BuiltinKind::PowerLaw { lambda: 1.0 }, &ctx()).unwrap();
        let terms = residue_terms(&f, &c(0.0, 0.0), 1, &ctx()).unwrap();
        let log_term = terms
            .iter()
            .find(|t| (t.log_pow.real().to_f64() - 1.0).abs() < 1e-9)
            .expect("log term present");
        assert!((log_term.coeff.real().to_f64() + 1.0).abs() < 1e-11);
        assert!(terms.iter().all(|t| !t.log_pow.is_zero()));
    }

    #[test]
    fn polar_expansion_geometric() {
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        let e = polar_expansion(&f, 2.5, &ctx()).unwrap();
        assert_eq!(e.terms.len(), 3);
        let coeffs: Vec<f64> = e.terms.iter().map(|t| t.coeff.real().to_f64()).collect();
        let exps: Vec<f64> = e.terms.iter().map(|t| t.z_exp.real().to_f64()).collect();
        assert!((coeffs[0] + 1.0).abs() < 1e-12 && exps[0].abs() < 1e-12);
        assert!((coeffs[1] - 1.0).abs() < 1e-12 && (exps[1] + 1.0).abs() < 1e-12);
        assert!((coeffs[2] + 1.0).abs() < 1e-12 && (exps[2] + 2.0).abs() < 1e-12);
        // evaluate at z=10: −1 + 0.1 − 0.01 = −0.91 ≈ −10/11
        let v = evaluate_expansion(&e, &c(10.0, 0.0), 3).unwrap();
        assert!((v.real().to_f64() + 0.91).abs() < 1e-10);
        assert!((v.real().to_f64() + 10.0 / 11.0).abs() < 1e-3);
    }

    #[test]
    fn polar_expansion_lattice_members() {
        let f = make_builtin(BuiltinKind::RecipTwoPow, &ctx()).unwrap();
        let e = polar_expansion(&f, 0.4, &ctx()).unwrap();
        // members at 2πik/log2, k ∈ [−4,4] within |Im| ≤ 40 (step ≈ 9.06);
        // the k = 0 member rides the sin pole at 0 → order 2 → extra log term
        assert!(e.lattice.is_some());
        assert!(e.lattice.as_ref().unwrap().unbounded);
        let step = 2.0 * std::f64::consts::PI / std::f64::consts::LN_2;
        let mut ims: Vec<f64> = e.terms.iter().map(|t| t.z_exp.imag().to_f64()).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ims.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(ims.len(), 9, "members: {ims:?}");
        for (i, im) in ims.iter().enumerate() {
            let expect = (i as f64 - 4.0) * step;
            assert!((im - expect).abs() < 1e-9, "member {i}: {im} vs {expect}");
        }
    }

    #[test]
    fn polar_expansion_shifted_roots() {
        // strip B = 5.5 ∋ {−3.457, −3.748, −5.039} plus the sin poles 0..−5
        let f = make_builtin(BuiltinKind::RecipGammaPlusOne, &ctx()).unwrap();
        let e = polar_expansion(&f, 5.5, &ctx()).unwrap();
        let root_exps: Vec<f64> = e
            .terms
            .iter()
            .map(|t| t.z_exp.real().to_f64())
            .filter(|x| (x - x.round()).abs() > 1e-6)
            .collect();
        assert_eq!(root_exps.len(), 3, "exps: {root_exps:?}");
        assert!((root_exps[0] + 3.457024).abs() < 1e-4);
        assert!((root_exps[1] + 3.747682).abs() < 1e-4);
        assert!((root_exps[2] + 5.039361).abs() < 1e-4);
        // φ(−n) = 0 for n ≥ 1 (the Γ pole kills those coefficients); only the
        // constant −φ(0) = −1/2 survives among the integer terms
        let int_terms: Vec<_> = e
            .terms
            .iter()
            .filter(|t| {
                let x = t.z_exp.real().to_f64();
                (x - x.round()).abs() < 1e-6
            })
            .collect();
        assert_eq!(int_terms.len(), 1, "integer terms: {}", int_terms.len());
        assert!((int_terms[0].coeff.real().to_f64() + 0.5).abs() < 1e-11);
    }

    #[test]
    fn polar_rejects_bad_strips() {
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        assert!(polar_expansion(&f, 3.0, &ctx()).is_err()); // boundary on sin pole
        let g = make_builtin(BuiltinKind::RecipZetaShift, &ctx()).unwrap();
        assert!(matches!(
            polar_expansion(&g, 2.5, &ctx()),
            Err(Error::CatalogIncomplete(_))
        ));
        let h = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: 0.5 }, &ctx()).unwrap();
        assert!(matches!(
            polar_expansion(&h, 1.5, &ctx()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn algebraic_exp_power_two_terms() {
        // E(z;1,1/2) ~ −1 − 1/√(π log z) − ...
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: 0.5 }, &ctx()).unwrap();
        let e = algebraic_expansion(&f, 2.0, &ctx()).unwrap();
        assert!((e.terms[0].coeff.real().to_f64() + 1.0).abs() < 1e-12);
        assert!(e.terms[0].z_exp.is_zero() && e.terms[0].log_pow.is_zero());
        let second = &e.terms[1];
        assert!((second.log_pow.real().to_f64() + 0.5).abs() < 1e-12);
        let expect = -1.0 / std::f64::consts::PI.sqrt();
        assert!(
            (second.coeff.real().to_f64() - expect).abs() < 1e-12,
            "got {}",
            second.coeff.real().to_f64()
        );
    }

    #[test]
    fn algebraic_matches_hankel_term_set() {
        // general (c,θ): coefficients −c^k b_j(0)/(k! Γ(−kθ−j))
        let cpar = 0.7;
        let theta = 0.3;
        let f = make_builtin(BuiltinKind::ExpPower { c: cpar, theta }, &ctx()).unwrap();
        let e = algebraic_expansion(&f, 1.2, &ctx()).unwrap();
        // the (k=2, j=−1) term: log-exponent −2θ+1−1 = −0.6, coefficient
        // −c² b_{−1}(0)/(2! Γ(−2θ+1))
        let target = -2.0 * theta;
        let term = e
            .terms
            .iter()
            .find(|t| (t.log_pow.real().to_f64() - target).abs() < 1e-9)
            .expect("k=2, j=-1 term");
        let g = Float::with_val(160, 1.0 - 2.0 * theta).gamma();
        let expect = -cpar * cpar / 2.0 / g.to_f64();
        assert!(
            (term.coeff.real().to_f64() - expect).abs() < 1e-12 * expect.abs(),
            "got {} expect {expect}",
            term.coeff.real().to_f64()
        );
    }

    #[test]
    fn algebraic_evaluates_against_continuation() {
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: 0.5 }, &ctx()).unwrap();
        let e = algebraic_expansion(&f, 2.0, &ctx()).unwrap();
        let z = Complex::with_val(160, Float::with_val(160, 100).exp());
        let two = evaluate_expansion(&e, &z, 2).unwrap();
        let expect = -1.0 - 1.0 / (100.0 * std::f64::consts::PI).sqrt();
        assert!((two.real().to_f64() - expect).abs() < 1e-12);
        let cfg = crate::lindelof::auto_config(&f, &z, &ctx());
        let cont = continue_gf(&f, &z, &cfg).unwrap();
        let gap = (cont.value.real().to_f64() - two.real().to_f64()).abs();
        assert!(gap < 3.0 * 100f64.powf(-1.5), "gap {gap:.3e}");
    }

    #[test]
    fn polylog_classical_expansion() {
        // PowerLaw(λ), λ = 0.5: leading term −(log z)^{λ}/Γ(λ+1) via j = −1
        let f = make_builtin(BuiltinKind::PowerLaw { lambda: 0.5 }, &ctx()).unwrap();
        let e = algebraic_expansion(&f, 3.2, &ctx()).unwrap();
        let lead = &e.terms[0];
        assert!((lead.log_pow.real().to_f64() - 0.5).abs() < 1e-9);
        let expect = -1.0 / Float::with_val(96, 1.5).gamma().to_f64();
        assert!((lead.coeff.real().to_f64() - expect).abs() < 1e-12);
        // numerical cross-check against continuation at z = e^40
        let z = Complex::with_val(160, Float::with_val(160, 40).exp());
        let appr = evaluate_expansion(&e, &z, e.terms.len()).unwrap();
        let cfg = crate::lindelof::auto_config(&f, &z, &ctx());
        let cont = continue_gf(&f, &z, &cfg).unwrap();
        let rel = (appr.real().to_f64() - cont.value.real().to_f64()).abs()
            / cont.value.real().to_f64().abs();
        assert!(rel < 2e-4, "rel {rel:.3e}");
    }

    #[test]
    fn evaluate_validity_and_mismatch() {
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        let e = polar_expansion(&f, 2.5, &ctx()).unwrap();
        assert!(matches!(
            evaluate_expansion(&e, &c(2.0, 0.0), 3),
            Err(Error::ValidityRegion(_))
        ));
        let single = Expansion {
            terms: vec![ExpansionTerm {
                coeff: c(-1.0, 0.0),
                z_exp: c(0.0, 0.0),
                log_pow: c(0.0, 0.0),
                exp_factor: None,
                osc: None,
                variable: ExpansionVariable::LogZAtInfinity,
            }],
            error_order: None,
            source: "test".into(),
            lattice: None,
            notes: vec![],
        };
        let v = evaluate_expansion(&single, &c(100.0, 0.0), 1).unwrap();
        assert!((v.real().to_f64() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn merge_idempotence() {
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: 0.5 }, &ctx()).unwrap();
        let mut e = algebraic_expansion(&f, 2.5, &ctx()).unwrap();
        let z = Complex::with_val(128, Float::with_val(128, 60).exp());
        let before = evaluate_expansion(&e, &z, e.terms.len()).unwrap();
        e.normalize();
        let after = evaluate_expansion(&e, &z, e.terms.len()).unwrap();
        let d = cx(160, &before - &after);
        assert!(cabs(&d).is_zero() || cabs(&d).to_f64() < 1e-25);
    }

    #[test]
    fn display_renders_leading_terms() {
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: 0.5 }, &ctx()).unwrap();
        let e = algebraic_expansion(&f, 2.0, &ctx()).unwrap();
        let s = format!("{e}");
        assert!(s.starts_with("-1"), "render: {s}");
        assert!(s.contains("(log z)^(-0.5)"), "render: {s}");
        assert!(s.contains("O("), "render: {s}");
    }

    #[test]
    fn n_max_rule_branches() {
        // synthetic catalog: algebraic at −2±i (Re ∈ ℤ, s_m ∉ ℤ) → n_max = 2
        let mk = |locs: Vec<(f64, f64)>| {
            let catalog = locs
                .into_iter()
                .map(|(re, im)| Singularity::Algebraic {
                    location: Complex::with_val(192, (re, im)),
                    lambda: Complex::with_val(192, 0.5),
                    theta: Complex::with_val(192, 1),
                    psi_coeffs: vec![Complex::with_val(192, 1)],
                    psi_truncated: false,
                    cut_angle: std::f64::consts::FRAC_PI_4,
                })
                .collect();
            CoefficientFunction::custom(
                "synthetic",
                |s| {
                    let wp = prec_of(s);
                    // (s+2−i)^{−1/2}(s+2+i)^{−1/2}, entire enough elsewhere
                    let a = cx(wp, s + cx(wp, (2.0, -1.0))).ln() * fl(wp, -0.5);
                    let b = cx(wp, s + cx(wp, (2.0, 1.0))).ln() * fl(wp, -0.5);
                    Ok(cx(wp, a.exp() * b.exp()))
                },
                0.01,
                4.0,
                0.0,
                catalog,
                true,
            )
            .unwrap()
        };
        let f = mk(vec![(-2.0, 1.0), (-2.0, -1.0)]);
        let e = algebraic_expansion(&f, 1.2, &ctx()).unwrap();
        let first_sum_terms = e
            .terms
            .iter()
            .filter(|t| t.log_pow.is_zero() && t.z_exp.imag().to_f64().abs() < 1e-9)
            .count();
        assert_eq!(first_sum_terms, 3, "n = 0,1,2 expected");
        // integer-located singularity → second branch: n_max = ⌈2⌉−1 = 1
        let g = mk(vec![(-2.0, 0.0)]);
        let e2 = algebraic_expansion(&g, 1.2, &ctx()).unwrap();
        let first_sum_terms2 = e2
            .terms
            .iter()
            .filter(|t| {
                t.log_pow.is_zero()
                    && t.z_exp.imag().to_f64().abs() < 1e-9
                    && t.z_exp.real().to_f64() > -1.5
            })
            .count();
        assert_eq!(first_sum_terms2, 2, "n = 0,1 expected");
    }
}
