//! Analytic continuation of F(z) = Σ φ(n)(−z)ⁿ by numerical evaluation of
//! −(1/2πi)∫ φ(s) z^s π/sin(πs) ds along Re s = shift, plus the
//! direct-summation oracle.

use crate::coeff_functions::{BuiltinKind, CoefficientFunction, Singularity};
use crate::expansions::residue_terms;
use crate::error::{Error, Result};
use crate::numerics::{cabs, cx, fl, pi, recip_sin_pi_eps, PrecisionContext};
use rug::{Complex, Float};

/// Quadrature scheme for the contour integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    /// Outward-marching panels, each refined by adaptive Simpson (default).
    AdaptiveSegment,
    /// Uniform trapezoid steps with Richardson extrapolation.
    FixedStepRichardson,
}

/// Contour and tolerance configuration for [`continue_gf`].
#[derive(Debug, Clone)]
pub struct QuadratureConfig {
    pub ctx: PrecisionContext,
    /// Cap on the truncation height T.
    pub max_height: f64,
    pub rule: QuadratureRule,
    /// Contour abscissa Re s. The classical line is 1/2; values in (0,1)
    /// toward a saddle improve conditioning for large z. For shift ≠ 1/2 the
    /// evaluator is assumed analytic in Re s ≥ min(shift, 1/2), which holds
    /// for every builtin.
    pub shift: f64,
}

impl QuadratureConfig {
    pub fn new(ctx: PrecisionContext) -> Self {
        Self {
            ctx,
            max_height: 1e4,
            rule: QuadratureRule::AdaptiveSegment,
            shift: 0.5,
        }
    }

    pub fn with_shift(mut self, shift: f64) -> Result<Self> {
        if !(shift > 0.0 && shift < 1.0) {
            return Err(Error::Domain(format!("shift {shift} outside (0,1)")));
        }
        self.shift = shift;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.shift > 0.0 && self.shift < 1.0) {
            return Err(Error::Domain(format!("shift {} outside (0,1)", self.shift)));
        }
        if !(self.max_height > 0.0) {
            return Err(Error::Domain("max_height must be positive".into()));
        }
        Ok(())
    }
}

/// Continuation value with the quadrature's own error estimate.
#[derive(Debug, Clone)]
pub struct Continuation {
    pub value: Complex,
    pub error_estimate: f64,
}

/// Direct summation of F(z) = Σ_{n≥1} φ(n)(−z)ⁿ inside the disc of
/// convergence, with the tail bounded by a geometric majorant. Default term
/// cap 10⁷.
pub fn direct_sum(f: &CoefficientFunction, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    direct_sum_with_cap(f, z, ctx, 10_000_000)
}

pub fn direct_sum_with_cap(
    f: &CoefficientFunction,
    z: &Complex,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<Complex> {
    let abs_z = cabs(z).to_f64();
    if !(abs_z < 1.0) && !(abs_z < (-f.growth_a()).exp()) {
        return Err(Error::Divergence(format!(
            "direct sum needs |z| < 1 (or < e^-A), got {abs_z}"
        )));
    }
    if abs_z == 0.0 {
        return Ok(cx(ctx.working(8), 0));
    }
    // f64 block fast path for real z ∈ (−1,0) with single-signed terms:
    // summation at base precision with a running exponent offset, which is
    // what the huge-n regime near the boundary needs.
    if z.imag().is_zero() && z.real().is_sign_negative() && ctx.tol() >= 1e-13 {
        if let Some(lnabs) = f.real_ln_abs() {
            let sgn = lnabs(2.0).1;
            if sgn != 0 && lnabs(17.0).1 == sgn {
                return fast_real_sum(f, z, ctx, cap);
            }
        }
    }

    let wp = ctx.working(24);
    let tol = ctx.tol();
    let neg_z = cx(wp, -z.clone());
    let mut zpow = cx(wp, 1);
    let mut acc = cx(wp, 0);
    let mut prev_abs = f64::INFINITY;
    let mut first_abs = 0.0f64;
    let mut ratios: Vec<f64> = Vec::new();
    let mut n: u64 = 0;
    loop {
        n += 1;
        if n > cap {
            return Err(Error::SlowConvergence(cap));
        }
        zpow *= &neg_z;
        let s = cx(wp, (fl(wp, n as f64), fl(wp, 0)));
        let phi = f.eval_raw(&s)?;
        let term = cx(wp, &phi * &zpow);
        acc += &term;
        let t_abs = cabs(&term).to_f64();
        if n == 1 {
            first_abs = t_abs.max(1e-300);
        }
        if t_abs > 1e250 * first_abs {
            return Err(Error::Divergence(format!(
                "terms exploding after {n} steps at |z| = {abs_z}"
            )));
        }
        if prev_abs > 0.0 && prev_abs.is_finite() {
            ratios.push(t_abs / prev_abs);
            if ratios.len() > 6 {
                ratios.remove(0);
            }
        }
        prev_abs = t_abs;
        if n >= 8 {
            let q = ratios.iter().cloned().fold(0.0f64, f64::max);
            if q < 1.0 {
                let scale = cabs(&acc).to_f64().max(1e-300);
                if t_abs * q / (1.0 - q) <= tol * scale {
                    break;
                }
            }
        }
    }
    Ok(acc)
}

/// Positive-term summation Σ sign·e^{lnφ(n) + n ln|z|} in f64 blocks with an
/// exponent offset, accumulated into an MPFR total. Valid for real z < 0 and
/// single-signed φ on the integers; relative error ~1e-13.
fn fast_real_sum(
    f: &CoefficientFunction,
    z: &Complex,
    ctx: &PrecisionContext,
    cap: u64,
) -> Result<Complex> {
    let lnabs = f.real_ln_abs().expect("checked by caller");
    let wp = ctx.working(24);
    let ln_abs_z = cabs(z).to_f64().ln(); // < 0
    let tol = ctx.tol();
    const BLOCK: u64 = 8192;
    let mut total = Float::with_val(wp, 0);
    let mut n: u64 = 0;
    let mut w_prev = f64::NEG_INFINITY;
    loop {
        let start = n + 1;
        let end = (n + BLOCK).min(cap);
        // block max exponent first, then accumulate relative to it
        let mut wmax = f64::NEG_INFINITY;
        for k in start..=end {
            let w = lnabs(k as f64).0 + k as f64 * ln_abs_z;
            if w > wmax {
                wmax = w;
            }
        }
        let mut block_sum = 0.0f64;
        let mut w_last = 0.0;
        for k in start..=end {
            let w = lnabs(k as f64).0 + k as f64 * ln_abs_z;
            block_sum += (w - wmax).exp();
            w_last = w;
        }
        total += Float::with_val(wp, wmax).exp() * Float::with_val(wp, block_sum);
        n = end;

        // tail bound once the terms decay: with per-term ratio q < 1 over the
        // last block, Σ_{k>n} t_k ≤ t_n q/(1−q)
        let mut tail_ok = false;
        if w_last < w_prev {
            let per_term = (w_last - w_prev) / BLOCK as f64;
            if per_term < -1e-12 {
                let q = per_term.exp();
                let tail_ln = w_last + (q / (1.0 - q)).ln().max(0.0);
                let total_ln = total.clone().ln().to_f64();
                tail_ok = tail_ln - total_ln < (tol / 10.0).ln();
            }
        }
        if tail_ok {
            break;
        }
        if n >= cap {
            return Err(Error::SlowConvergence(cap));
        }
        w_prev = w_last;
    }
    let sign = lnabs(2.0).1;
    if sign < 0 {
        total = -total;
    }
    Ok(cx(wp, total))
}

/// Truncation height for the Lindelöf contour: the smallest T with
/// C e^{AT} e^{−(π−|arg z|)T} · 10² < tol, capped at cfg.max_height.
pub fn truncation_height(
    f: &CoefficientFunction,
    z: &Complex,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let arg_z = arg_f64(z);
    let gap = std::f64::consts::PI - f.growth_a() - arg_z.abs();
    if gap <= 0.02 {
        return Err(Error::CapExceeded {
            needed: f64::INFINITY,
            cap: cfg.max_height,
        });
    }
    let t = (f.growth_c().max(1e-12).ln()
        + 100f64.ln()
        + (1.0 / cfg.ctx.tol()).ln()
        + (cfg.shift * ln_abs_f64(z)).max(0.0))
        / gap;
    let t = t.max(1.0);
    if t > cfg.max_height {
        return Err(Error::CapExceeded {
            needed: t,
            cap: cfg.max_height,
        });
    }
    Ok(t)
}

fn arg_f64(z: &Complex) -> f64 {
    let p = crate::numerics::prec_of(z).max(64);
    Float::with_val(p, z.imag())
        .atan2(&Float::with_val(p, z.real()))
        .to_f64()
}

/// ln|z| as f64, safe for |z| far beyond the f64 exponent range.
fn ln_abs_f64(z: &Complex) -> f64 {
    cabs(z).ln().to_f64()
}

/// Recommended contour configuration for `f` at `z`: for ExpPower catalogs at
/// large |log z| the abscissa moves to the real part of the integrand's
/// saddle, which removes the e^{shift·log z} cancellation; otherwise the
/// classical shift 1/2 is kept.
pub fn auto_config(f: &CoefficientFunction, z: &Complex, ctx: &PrecisionContext) -> QuadratureConfig {
    let mut cfg = QuadratureConfig::new(ctx.clone());
    let l = ln_abs_f64(z);
    if l > 5.0 {
        match f.kind() {
            Some(BuiltinKind::ExpPower { c, theta }) if *c != 0.0 && *theta < 1.0 && *theta != 0.0 => {
                // saddle of c s^θ + s log z at |s*| = (|cθ|/L)^{1/(1−θ)}
                let modulus = ((c.abs() * theta.abs()) / l).powf(1.0 / (1.0 - theta));
                let x0 = if *theta > 0.0 {
                    // Laplace-type: the saddle sits inside 1/L; the abscissa
                    // 1/L already kills the e^{shift log z} range
                    modulus.max(1.0 / l)
                } else if *c > 0.0 {
                    modulus
                } else {
                    // conjugate saddle pair at angle ±π/(1−θ); stay right of 0
                    modulus * (std::f64::consts::PI / (1.0 - theta)).cos().max(0.35)
                };
                cfg.shift = x0.clamp(1e-8, 0.499);
            }
            Some(BuiltinKind::PowerLaw { lambda }) => {
                // saddle of −λ log s + s log z at s* = λ/L; keep the abscissa
                // at the scale where the z^s growth stops mattering
                let x0 = (lambda.abs().max(1.0)) / l;
                cfg.shift = x0.clamp(1e-8, 0.499);
            }
            _ => {}
        }
    }
    cfg
}

/// Analytic continuation of F(z) by the contour integral along Re s = shift.
///
/// Requires z ≠ 0 and |arg z| < π − A. The returned error estimate combines
/// the per-panel Simpson defects and the truncation-tail bound.
pub fn continue_gf(
    f: &CoefficientFunction,
    z: &Complex,
    cfg: &QuadratureConfig,
) -> Result<Continuation> {
    cfg.validate()?;
    if z.is_zero() {
        return Err(Error::Domain("z = 0 has no continuation contour".into()));
    }
    let arg_z = arg_f64(z);
    let half_angle = std::f64::consts::PI - f.growth_a();
    if arg_z.abs() >= half_angle {
        return Err(Error::SectorViolation {
            arg_z,
            half_angle,
        });
    }
    let t_max = truncation_height(f, z, cfg)?;

    // working precision: criterion tolerance plus the contour's dynamic range
    // e^{shift ln|z|} and the probed magnitude of φ along the line
    let ln_abs_z = ln_abs_f64(z);
    let mut guard = 64.0 + 1.443 * (cfg.shift * ln_abs_z).max(0.0);
    let probe = probe_ln_phi_max(f, cfg.shift, t_max);
    guard += 1.443 * probe.max(0.0);
    let wp = cfg.ctx.working(guard.ceil() as u32);

    let log_z = cx(wp, z).ln();
    let shift = fl(wp, cfg.shift);
    let integrand = |t: &Float| -> Result<Complex> {
        let s = Complex::with_val(wp, (shift.clone(), t.clone()));
        let phi = f.eval_raw(&s)?;
        let zs = cx(wp, &s * &log_z).exp();
        let sin_factor = recip_sin_pi_eps(&s, 1e-15)?;
        Ok(cx(wp, phi * zs) * sin_factor)
    };

    let mut result = match cfg.rule {
        QuadratureRule::AdaptiveSegment => adaptive_contour(f, z, cfg, t_max, wp, &integrand)?,
        QuadratureRule::FixedStepRichardson => richardson_contour(cfg, t_max, wp, &integrand)?,
    };
    apply_right_pole_correction(f, z, cfg, wp, &mut result)?;
    Ok(result)
}

/// Cataloged poles of φ right of the contour make the line integral differ
/// from F(z) by their residues (the "easy extension" covering right-half-plane
/// poles). Adding the Ford-normalized residue terms restores F.
fn apply_right_pole_correction(
    f: &CoefficientFunction,
    z: &Complex,
    cfg: &QuadratureConfig,
    wp: u32,
    result: &mut Continuation,
) -> Result<()> {
    let ln_abs_z = ln_abs_f64(z);
    let arg_z = arg_f64(z);
    let tol = cfg.ctx.tol();
    let log_z = cx(wp, z).ln();
    for sing in f.catalog() {
        let Singularity::Pole { location, order } = sing else {
            continue;
        };
        let re = location.real().to_f64();
        let im = location.imag().to_f64();
        if re <= cfg.shift + 1e-9 {
            continue;
        }
        // crude magnitude bound of the correction: skip negligible poles
        let ln_bound = re * ln_abs_z + im.abs() * arg_z.abs() - std::f64::consts::PI * im.abs() + 4.0;
        if ln_bound < (tol * 1e-3).ln() {
            continue;
        }
        for t in residue_terms(f, location, *order, &cfg.ctx)? {
            // coeff · z^{s0} · (log z)^m, evaluated literally
            let mut v = cx(wp, &t.z_exp * &log_z).exp();
            v *= cx(wp, &t.coeff);
            if !t.log_pow.is_zero() {
                let lx = log_z.clone().ln();
                v *= cx(wp, &t.log_pow * &lx).exp();
            }
            result.value += v;
        }
    }
    Ok(())
}

/// Sample ln|φ| along the contour to size the precision guard.
fn probe_ln_phi_max(f: &CoefficientFunction, shift: f64, t_max: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for t in [0.0, shift, 0.5, 1.0, 3.0, t_max.min(10.0)] {
        let s = Complex::with_val(64, (shift, t));
        if let Ok(v) = f.eval_raw(&s) {
            let a = cabs(&v);
            if a.is_finite() && !a.is_zero() {
                best = best.max(a.ln().to_f64());
            }
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

fn adaptive_contour(
    f: &CoefficientFunction,
    z: &Complex,
    cfg: &QuadratureConfig,
    t_max: f64,
    wp: u32,
    g: &dyn Fn(&Float) -> Result<Complex>,
) -> Result<Continuation> {
    let ln_abs_z = ln_abs_f64(z);
    let arg_z = arg_f64(z);
    // oscillation frequency along t: |log z| plus the phase gradient of φ
    // near the origin singularity at the contour scale
    let mut omega = (ln_abs_z.powi(2) + arg_z.powi(2)).sqrt();
    let mut s_scale = 1.0f64;
    match f.kind() {
        Some(BuiltinKind::ExpPower { c, theta }) if *theta < 1.0 && *theta != 0.0 && *c != 0.0 => {
            omega += c.abs() * theta.abs() * cfg.shift.powf(theta - 1.0);
            s_scale = ((c.abs() * theta.abs()) / ln_abs_z.abs().max(1.0))
                .powf(1.0 / (1.0 - theta))
                .max(cfg.shift)
                .min(1.0);
        }
        Some(BuiltinKind::PowerLaw { lambda }) => {
            omega += lambda.abs() / cfg.shift;
            s_scale = cfg.shift.max(4.0 / ln_abs_z.abs().max(1.0)).min(1.0);
        }
        _ => {}
    }
    let h0 = (0.5 / omega.max(1.0)).min(0.2);
    let coverage = (8.0 * s_scale).max(16.0 * h0).min(t_max);
    let rate_plus = (std::f64::consts::PI - f.growth_a() + arg_z).max(0.05);
    let rate_minus = (std::f64::consts::PI - f.growth_a() - arg_z).max(0.05);

    // pass 1 sizes the tolerance from the integrand near t = 0; pass 2 (when
    // cancellation made the result much smaller) reruns at the measured scale.
    // `scale_guess` estimates (1 + |result|).
    let mut scale_guess = {
        let g0 = g(&fl(wp, 0))?;
        let a = cabs(&g0);
        let ln_g0 = if a.is_zero() { -700.0 } else { a.ln().to_f64() };
        (ln_g0 + h0.ln().min(0.0) - (2.0 * std::f64::consts::PI).ln())
            .min(644.0)
            .exp()
            .max(1.0)
    };
    let mut attempt = 0;
    loop {
        attempt += 1;
        let tol_abs = cfg.ctx.tol() * scale_guess * 2.0 * std::f64::consts::PI / 8.0;
        let (raw, mut err) = trapezoid_ladder(
            g, h0, coverage, t_max, tol_abs, wp, rate_plus, rate_minus,
        )?;
        let two_pi = fl(wp, pi(wp) * 2u32);
        let value = cx(wp, raw / &two_pi) * -1i32;
        err /= 2.0 * std::f64::consts::PI;
        let v_abs = cabs(&value).to_f64();
        let target_scale = (1.0 + v_abs).min(1e280);
        // contract: error ≤ tol · (1 + |result|)
        if err <= cfg.ctx.tol() * target_scale || attempt >= 3 {
            if err > cfg.ctx.tol() * target_scale * 16.0 {
                return Err(Error::QuadratureNonConvergence(format!(
                    "achieved {err:.3e}, needed {:.3e}",
                    cfg.ctx.tol() * target_scale
                )));
            }
            return Ok(Continuation {
                value,
                error_estimate: err,
            });
        }
        scale_guess = target_scale;
    }
}

/// Uniform trapezoid over the contour line with step halving: for integrands
/// analytic in a strip around the line and decaying at the ends, the rule
/// converges geometrically in 1/h, and |I_h − I_{h/2}| is a faithful error
/// estimate. The truncation points come from the sin-decay tail bound,
/// determined on the coarse pass.
#[allow(clippy::too_many_arguments)]
fn trapezoid_ladder(
    g: &dyn Fn(&Float) -> Result<Complex>,
    h0: f64,
    coverage: f64,
    t_max: f64,
    tol_abs: f64,
    wp: u32,
    rate_plus: f64,
    rate_minus: f64,
) -> Result<(Complex, f64)> {
    // coarse pass: find T± while accumulating the h0 trapezoid sum
    let g0 = g(&fl(wp, 0))?;
    let mut sum = cx(wp, &g0);
    let mut t_plus = 0.0f64;
    let mut t_minus = 0.0f64;
    let mut tail_err = 0.0f64;
    for (dir, rate, t_end) in [
        (1.0f64, rate_plus, &mut t_plus),
        (-1.0, rate_minus, &mut t_minus),
    ] {
        let mut k: u64 = 0;
        // judge the tail by the max over the last few samples
        let mut ring = [f64::INFINITY; 3];
        loop {
            k += 1;
            let t = k as f64 * h0;
            if t > t_max {
                // hard truncation at the configured cap: account for the tail
                let recent = ring.iter().cloned().fold(0.0f64, f64::max);
                *t_end = t - h0;
                tail_err += (recent / rate).min(1e300);
                break;
            }
            let v = g(&fl(wp, dir * t))?;
            let mag = cabs(&v);
            sum += &v;
            ring[(k % 3) as usize] = if mag.is_finite() {
                mag.to_f64()
            } else {
                f64::INFINITY
            };
            if t >= coverage && k >= 3 {
                let recent = ring.iter().cloned().fold(0.0f64, f64::max) / rate;
                if recent <= tol_abs / 8.0 {
                    tail_err += recent;
                    *t_end = t;
                    break;
                }
            }
        }
    }
    let mut h = h0;
    let mut value = cx(wp, &sum * fl(wp, h));
    // halve the step until two successive trapezoid values agree
    for _ in 0..14 {
        h /= 2.0;
        // new nodes at odd multiples of h in [−t_minus, t_plus]
        let mut odd = cx(wp, 0);
        let mut k: u64 = 1;
        loop {
            let t = k as f64 * h;
            if t > t_plus {
                break;
            }
            odd += g(&fl(wp, t))?;
            k += 2;
        }
        k = 1;
        loop {
            let t = k as f64 * h;
            if t > t_minus {
                break;
            }
            odd += g(&fl(wp, -t))?;
            k += 2;
        }
        let refined = cx(wp, &value / 2u32) + cx(wp, odd * fl(wp, h));
        let delta = cx(wp, &refined - &value);
        let delta_abs = cabs(&delta).to_f64();
        value = refined;
        if delta_abs <= tol_abs {
            return Ok((value, delta_abs + tail_err));
        }
    }
    Err(Error::QuadratureNonConvergence(
        "trapezoid halving did not reach tolerance".into(),
    ))
}

fn richardson_contour(
    cfg: &QuadratureConfig,
    t_max: f64,
    wp: u32,
    g: &dyn Fn(&Float) -> Result<Complex>,
) -> Result<Continuation> {
    // trapezoid over [−T, T] with doubling and one Richardson column
    let mut n: u64 = 64;
    let mut prev: Option<Complex> = None;
    let mut prev_rich: Option<Complex> = None;
    let mut trap_prev: Option<Complex> = None;
    let tol = cfg.ctx.tol();
    for _ in 0..16 {
        let h = 2.0 * t_max / n as f64;
        let trap = if let Some(tp) = &trap_prev {
            // reuse: new nodes are the midpoints
            let mut sum = cx(wp, 0);
            let mut k: i64 = 0;
            while k < n as i64 {
                if k % 2 == 1 {
                    let t = fl(wp, -t_max + k as f64 * h);
                    sum += g(&t)?;
                }
                k += 1;
            }
            cx(wp, tp / 2u32) + cx(wp, sum * fl(wp, h))
        } else {
            let mut sum = cx(wp, g(&fl(wp, -t_max))? / 2u32);
            sum += cx(wp, g(&fl(wp, t_max))? / 2u32);
            for k in 1..n {
                let t = fl(wp, -t_max + k as f64 * h);
                sum += g(&t)?;
            }
            cx(wp, sum * fl(wp, h))
        };
        if let Some(p) = &prev {
            // Richardson: R = (4 T_{2n} − T_n)/3
            let rich = (cx(wp, &trap * 4u32) - p) / 3u32;
            if let Some(pr) = &prev_rich {
                let d = cx(wp, &rich - pr);
                let err = cabs(&d).to_f64();
                let two_pi = 2.0 * std::f64::consts::PI;
                let value = cx(wp, &rich / &fl(wp, pi(wp) * 2u32)) * -1i32;
                let scale = 1.0 + cabs(&value).to_f64();
                if err / two_pi <= tol * scale {
                    return Ok(Continuation {
                        value,
                        error_estimate: err / two_pi,
                    });
                }
            }
            prev_rich = Some(rich);
        }
        trap_prev = Some(trap.clone());
        prev = Some(trap);
        n *= 2;
    }
    Err(Error::QuadratureNonConvergence(
        "Richardson trapezoid did not reach tolerance".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_functions::make_builtin;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(96, 1e-11).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(96, (re, im))
    }

    fn rel_close(v: &Complex, re: f64, im: f64, tol: f64) -> bool {
        let expect = Complex::with_val(96, (re, im));
        let d = Complex::with_val(96, v - &expect);
        cabs(&d).to_f64() <= tol * (1.0 + cabs(&expect).to_f64())
    }

    #[test]
    fn direct_sum_closed_forms() {
        // Constant(1) at z=1/2: −z/(1+z) = −1/3
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        let v = direct_sum(&f, &c(0.5, 0.0), &ctx()).unwrap();
        assert!(rel_close(&v, -1.0 / 3.0, 0.0, 1e-11), "got {v}");
        // Identity at z=1/2: −z/(1+z)² = −2/9
        let f = make_builtin(BuiltinKind::Identity, &ctx()).unwrap();
        let v = direct_sum(&f, &c(0.5, 0.0), &ctx()).unwrap();
        assert!(rel_close(&v, -2.0 / 9.0, 0.0, 1e-11), "got {v}");
    }

    #[test]
    fn direct_sum_exp_power_reference() {
        // E(1/2; 1, −1): brute 320-bit summation oracle in-line, plus the
        // frozen leading digits from a 320-bit run.
        let wp = 320;
        let mut brute = Float::with_val(wp, 0);
        let mut zp = Float::with_val(wp, 1);
        for n in 1..400u32 {
            zp *= -0.5f64;
            brute += (Float::with_val(wp, 1) / Float::with_val(wp, n)).exp() * &zp;
        }
        assert!((brute.to_f64() - (-1.0669173411937704958)).abs() < 1e-15);
        let hi = PrecisionContext::new(200, 1e-45).unwrap();
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: -1.0 }, &hi).unwrap();
        let v = direct_sum(&f, &Complex::with_val(200, (0.5, 0.0)), &hi).unwrap();
        let d = (Float::with_val(wp, v.real()) - &brute).abs();
        assert!(d.to_f64() < 1e-40, "gap {:e}", d.to_f64());
    }

    #[test]
    fn direct_sum_divergence() {
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        assert!(direct_sum(&f, &c(1.5, 0.0), &ctx()).is_err());
    }

    #[test]
    fn fast_path_matches_mpfr_path() {
        // e^{√n} at z = −0.9: fast path (tol 1e-11) vs MPFR path (tol 1e-14)
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: 0.5 }, &ctx()).unwrap();
        let fast = direct_sum(&f, &c(-0.9, 0.0), &ctx()).unwrap();
        let slow_ctx = PrecisionContext::new(128, 1e-14).unwrap();
        let slow = direct_sum(&f, &c(-0.9, 0.0), &slow_ctx).unwrap();
        let d = Complex::with_val(128, &fast - &slow);
        let rel = cabs(&d).to_f64() / cabs(&slow).to_f64();
        assert!(rel < 1e-11, "rel = {rel:e}");
    }

    #[test]
    fn truncation_height_analytic_solve() {
        // A=0(ish), arg z=0, tol=1e−12, C=1: T = (ln 100 + 12 ln 10)/π ≈ 10.3,
        // in the window around the quoted ≈9.5
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        let mut cfg = QuadratureConfig::new(PrecisionContext::new(64, 1e-12).unwrap());
        let t = truncation_height(&f, &c(1.0, 0.0), &cfg).unwrap();
        let gap = std::f64::consts::PI - f.growth_a();
        let expect = (f.growth_c().ln() + 100f64.ln() + 12.0 * 10f64.ln()) / gap;
        assert!((t - expect).abs() < 1e-9);
        assert!((8.5..11.5).contains(&t), "T = {t}");
        // arg z = π/2 roughly doubles it
        let t2 = truncation_height(&f, &c(0.0, 1.0), &cfg).unwrap();
        assert!(t2 / t > 1.8 && t2 / t < 2.3, "ratio {}", t2 / t);
        // degenerate sector
        cfg.max_height = 50.0;
        let tight = CoefficientFunction::custom(
            "tight",
            |s| Ok(Complex::with_val(crate::numerics::prec_of(s), 1)),
            3.13,
            1.0,
            0.0,
            vec![],
            true,
        )
        .unwrap();
        assert!(matches!(
            truncation_height(&tight, &c(1.0, 0.0), &cfg),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn continuation_closed_form_constant() {
        // Constant(1) at z=2 (outside |z|<1): −z/(1+z) = −2/3
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        let cfg = QuadratureConfig::new(ctx());
        let v = continue_gf(&f, &c(2.0, 0.0), &cfg).unwrap();
        assert!(
            rel_close(&v.value, -2.0 / 3.0, 0.0, 1e-10),
            "got {} err {:.2e}",
            v.value,
            v.error_estimate
        );
    }

    #[test]
    fn continuation_log_series() {
        // PowerLaw(1): F(z) = −log(1+z); at z = 1/2 → −log 1.5
        let f = make_builtin(BuiltinKind::PowerLaw { lambda: 1.0 }, &ctx()).unwrap();
        let cfg = QuadratureConfig::new(ctx());
        let v = continue_gf(&f, &c(0.5, 0.0), &cfg).unwrap();
        assert!(
            rel_close(&v.value, -(1.5f64.ln()), 0.0, 1e-10),
            "got {}",
            v.value
        );
    }

    #[test]
    fn continuation_overlaps_direct_sum() {
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: -1.0 }, &ctx()).unwrap();
        let z = c(0.3, 0.0);
        let cfg = QuadratureConfig::new(ctx());
        let cont = continue_gf(&f, &z, &cfg).unwrap();
        let sum = direct_sum(&f, &z, &ctx()).unwrap();
        let d = Complex::with_val(96, &cont.value - &sum);
        assert!(
            cabs(&d).to_f64() <= 1e-9 * (1.0 + cabs(&sum).to_f64()),
            "gap {:.3e}",
            cabs(&d).to_f64()
        );
    }

    #[test]
    fn continuation_sector_violation() {
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        let cfg = QuadratureConfig::new(ctx());
        assert!(matches!(
            continue_gf(&f, &c(-2.0, 0.0), &cfg),
            Err(Error::SectorViolation { .. })
        ));
    }

    #[test]
    fn richardson_rule_agrees() {
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        let mut cfg = QuadratureConfig::new(ctx());
        cfg.rule = QuadratureRule::FixedStepRichardson;
        let v = continue_gf(&f, &c(2.0, 0.0), &cfg).unwrap();
        assert!(rel_close(&v.value, -2.0 / 3.0, 0.0, 1e-9), "got {}", v.value);
    }

    #[test]
    fn auto_config_moves_shift_for_saddle() {
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: -1.0 }, &ctx()).unwrap();
        let z = Complex::with_val(96, Float::with_val(96, 1e4).exp());
        let cfg = auto_config(&f, &z, &ctx());
        assert!((cfg.shift - 0.01).abs() < 1e-6, "shift {}", cfg.shift);
        let g = make_builtin(BuiltinKind::Constant { a: 1.0 }, &ctx()).unwrap();
        let cfg = auto_config(&g, &z, &ctx());
        assert!((cfg.shift - 0.5).abs() < 1e-12);
    }
}
