//! Closed-form saddle-point asymptotics of E(z;c,θ) = Σ e^{cnᶿ}(−z)ⁿ at
//! z → ∞ for θ < 0, and the complete z → −1 analysis: polylogarithm sums,
//! Laplace constants, and Abel coefficients.

use crate::coeff_functions::{make_builtin, BuiltinKind};
use crate::error::{Error, Result};
use crate::expansions::{ExpFactor, Expansion, ExpansionTerm, ExpansionVariable, OscFactor};
use crate::lindelof::direct_sum;
use crate::numerics::{cabs, cx, fl, polylog, prec_of, PrecisionContext};
use rug::{Complex, Float, Integer};

/// Constants of the one-saddle regime (c > 0, θ < 0):
/// E(z;c,θ) = −K1 (log z)^{θ/(2(1−θ))} exp(K2 (log z)^{θ/(θ−1)}) (1 + O((log z)^{−μ})).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleConstants {
    pub k1: f64,
    pub k2: f64,
    pub mu: f64,
    pub eps: f64,
}

/// Constants of the oscillatory two-saddle regime (c < 0, θ < 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSaddleConstants {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub mu: f64,
}

/// Constants of the z → −1 Laplace regime (c > 0, 0 < θ < 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub mu: f64,
}

fn err_exponent(theta: f64, eps: f64) -> f64 {
    if theta >= -2.0 {
        theta / (2.0 * (theta - 1.0)) - eps
    } else {
        1.0 / (1.0 - theta)
    }
}

/// K1 = (2π(1−θ))^{−1/2} (−cθ)^{1/(2(θ−1))}, K2 = (1 − 1/(cθ)) (−cθ)^{1/(1−θ)},
/// μ = θ/(2(θ−1)) − ε for θ ≥ −2, else 1/(1−θ).
pub fn saddle_constants(c: f64, theta: f64, eps: f64) -> Result<SaddleConstants> {
    if !(c > 0.0) || !(theta < 0.0) {
        return Err(Error::Domain(format!(
            "one-saddle regime needs c > 0, theta < 0; got ({c}, {theta})"
        )));
    }
    let m = -c * theta; // > 0
    let k1 = (2.0 * std::f64::consts::PI * (1.0 - theta)).powf(-0.5)
        * m.powf(1.0 / (2.0 * (theta - 1.0)));
    let k2 = (1.0 - 1.0 / (c * theta)) * m.powf(1.0 / (1.0 - theta));
    Ok(SaddleConstants {
        k1,
        k2,
        mu: err_exponent(theta, eps),
        eps,
    })
}

/// A1 = −(cθ)^{1/(2(θ−1))} √(2/(π(1−θ))),
/// A2 = (1−θ^{−1})(cθ)^{1/(1−θ)} cos(π/(1−θ)),
/// A3 = (1−θ^{−1})(cθ)^{1/(1−θ)} sin(π/(1−θ)), A4 = π/(2(θ−1)).
/// A2 < 0 for −1 < θ < 0, = 0 at θ = −1, > 0 for θ < −1.
pub fn two_saddle_constants(c: f64, theta: f64, eps: f64) -> Result<TwoSaddleConstants> {
    if !(c < 0.0) || !(theta < 0.0) {
        return Err(Error::Domain(format!(
            "two-saddle regime needs c < 0, theta < 0; got ({c}, {theta})"
        )));
    }
    let ct = c * theta; // > 0
    let a1 = -ct.powf(1.0 / (2.0 * (theta - 1.0)))
        * (2.0 / (std::f64::consts::PI * (1.0 - theta))).sqrt();
    let amp = (1.0 - 1.0 / theta) * ct.powf(1.0 / (1.0 - theta));
    let phase = std::f64::consts::PI / (1.0 - theta);
    let a2 = amp * phase.cos();
    let a3 = amp * phase.sin();
    let a4 = std::f64::consts::PI / (2.0 * (theta - 1.0));
    Ok(TwoSaddleConstants {
        a1,
        a2,
        a3,
        a4,
        mu: err_exponent(theta, eps),
    })
}

/// The closed-form approximant together with its one-term [`Expansion`].
#[derive(Debug, Clone)]
pub struct SaddleApprox {
    pub value: Complex,
    pub expansion: Expansion,
}

/// Closed-form approximation of E(z;c,θ) at large |z| for θ < 0, per the
/// one- or two-saddle formulas depending on the sign of c.
pub fn approx_infinity(c: f64, theta: f64, z: &Complex, eps: f64) -> Result<SaddleApprox> {
    if !(theta < 0.0) || c == 0.0 {
        return Err(Error::Domain(format!(
            "saddle approximation needs theta < 0, c ≠ 0; got ({c}, {theta})"
        )));
    }
    let wp = prec_of(z).max(128) + 32;
    let log_z = cx(wp, z).ln();
    if !(log_z.real().to_f64() > 1.0) {
        return Err(Error::ValidityRegion("needs |z| > e".into()));
    }
    let beta = theta / (theta - 1.0); // ∈ (0,1)
    let pow_log = theta / (2.0 * (1.0 - theta));
    // (log z)^x = exp(x ln log z)
    let ln_log = log_z.ln();
    let lpow = cx(wp, &ln_log * fl(wp, pow_log)).exp();
    let lbeta = cx(wp, &ln_log * fl(wp, beta)).exp();
    let mut expansion = Expansion::new(format!("approx_infinity(c={c}, theta={theta})"));
    let value;
    if c > 0.0 {
        let k = saddle_constants(c, theta, eps)?;
        value = cx(wp, cx(wp, &lpow * fl(wp, -k.k1)) * cx(wp, &lbeta * fl(wp, k.k2)).exp());
        expansion.terms.push(ExpansionTerm {
            coeff: cx(wp, -k.k1),
            z_exp: cx(wp, 0),
            log_pow: cx(wp, pow_log),
            exp_factor: Some(ExpFactor {
                q: cx(wp, k.k2),
                beta,
            }),
            osc: None,
            variable: ExpansionVariable::LogZAtInfinity,
        });
        expansion.error_order = Some(ExpansionTerm {
            coeff: cx(wp, 1),
            z_exp: cx(wp, 0),
            log_pow: cx(wp, pow_log - k.mu),
            exp_factor: Some(ExpFactor {
                q: cx(wp, k.k2),
                beta,
            }),
            osc: None,
            variable: ExpansionVariable::LogZAtInfinity,
        });
    } else {
        let a = two_saddle_constants(c, theta, eps)?;
        let osc_arg = cx(wp, &lbeta * fl(wp, a.a3)) + fl(wp, a.a4);
        let mut v = cx(wp, &lpow * fl(wp, a.a1));
        if a.a2.abs() > 1e-15 {
            v *= cx(wp, &lbeta * fl(wp, a.a2)).exp();
        }
        v *= osc_arg.cos();
        value = v;
        expansion.terms.push(ExpansionTerm {
            coeff: cx(wp, a.a1),
            z_exp: cx(wp, 0),
            log_pow: cx(wp, pow_log),
            exp_factor: if a.a2.abs() > 1e-15 {
                Some(ExpFactor {
                    q: cx(wp, a.a2),
                    beta,
                })
            } else {
                None
            },
            osc: Some(OscFactor {
                r: cx(wp, a.a3),
                phase0: a.a4,
                beta,
            }),
            variable: ExpansionVariable::LogZAtInfinity,
        });
        expansion.error_order = Some(ExpansionTerm {
            coeff: cx(wp, 1),
            z_exp: cx(wp, 0),
            log_pow: cx(wp, pow_log - a.mu),
            exp_factor: expansion.terms[0].exp_factor.clone(),
            osc: None,
            variable: ExpansionVariable::LogZAtInfinity,
        });
    }
    Ok(SaddleApprox { value, expansion })
}

/// E(z;c,θ) = Σ_{k≥0} (c^k/k!) Li_{−kθ}(−z) for θ < 0, |z| < 1, truncated
/// when the k-tail bound (|Li| ≤ |z|/(1−|z|) uniformly for the orders in
/// play) falls below tolerance.
pub fn polylog_sum(c: f64, theta: f64, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if !(theta < 0.0) {
        return Err(Error::Domain(format!("polylog_sum needs theta < 0, got {theta}")));
    }
    let abs_z = cabs(z).to_f64();
    if !(abs_z < 1.0) {
        return Err(Error::Divergence(format!("polylog_sum needs |z| < 1, got {abs_z}")));
    }
    let wp = ctx.working(24);
    let minus_z = cx(wp, z) * -1i32;
    let li_bound = abs_z / (1.0 - abs_z);
    let tol = ctx.tol();
    let mut acc = cx(wp, 0);
    let mut c_pow_over_fact = fl(wp, 1);
    for k in 0..400u32 {
        if k > 0 {
            c_pow_over_fact *= fl(wp, c);
            c_pow_over_fact /= k;
        }
        let alpha = -(k as f64) * theta; // ≥ 0: convergent polylog order
        let li = polylog(alpha, &minus_z, ctx)?;
        acc += cx(wp, &li * &c_pow_over_fact);
        // tail over k: Σ_{m>k} |c|^m/m! ≤ |c|^{k+1}/(k+1)! e^{|c|}
        let next = c_pow_over_fact.clone().abs().to_f64() * c.abs() / (k as f64 + 1.0);
        let tail = next * c.abs().exp() * li_bound;
        if tail <= tol * cabs(&acc).to_f64().max(1e-300) && k >= 2 {
            return Ok(acc);
        }
    }
    Err(Error::SlowConvergence(400))
}

/// C1 = √(2π)(1−θ)^{−1/2}(cθ)^{1/(2(1−θ))}, C2 = ((1−θ)/θ)(cθ)^{1/(1−θ)},
/// C3 = (cθ)^{1/(1−θ)}, μ = min(θ/(2(1−θ)) − ε, 1).
pub fn laplace_constants(c: f64, theta: f64, eps: f64) -> Result<LaplaceConstants> {
    if !(c > 0.0) || !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!(
            "Laplace regime needs c > 0, 0 < theta < 1; got ({c}, {theta})"
        )));
    }
    let ct = c * theta;
    let c1 = (2.0 * std::f64::consts::PI).sqrt()
        * (1.0 - theta).powf(-0.5)
        * ct.powf(1.0 / (2.0 * (1.0 - theta)));
    let c2 = (1.0 - theta) / theta * ct.powf(1.0 / (1.0 - theta));
    let c3 = ct.powf(1.0 / (1.0 - theta));
    let mu = (theta / (2.0 * (1.0 - theta)) - eps).min(1.0);
    Ok(LaplaceConstants { c1, c2, c3, mu })
}

/// Both boundary approximants at z → −1.
#[derive(Debug, Clone)]
pub struct MinusOneApprox {
    /// The literal proposition: C1 (1+z)^{(2−θ)/(2(θ−1))} exp(C2 v^{θ/(θ−1)}),
    /// v = −log|z| (c > 0); the truncated Abel–Taylor series for c < 0.
    pub v_form: Float,
    /// The (1+z)-substituted form, which at θ = 1/2 carries the e^{−C2/2}
    /// conversion constant (e^{−1/8} for c = 1).
    pub u_form: Float,
}

/// Boundary approximation of E(z;c,θ) as z → −1⁺ on the real axis, for
/// 0 < θ < 1. For c > 0 both the v-form and the (1+z)-form are produced; for
/// c < 0 the truncated Taylor series Σ u_k (1+z)^k is used (both fields then
/// agree).
pub fn approx_minus_one(
    c: f64,
    theta: f64,
    z: f64,
    eps: f64,
    ctx: &PrecisionContext,
) -> Result<MinusOneApprox> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("needs 0 < theta < 1, got {theta}")));
    }
    if !(z > -1.0 && z < 0.0) {
        return Err(Error::Domain(format!("needs z in (-1, 0), got {z}")));
    }
    let wp = ctx.working(32);
    let u = fl(wp, 1.0 + z);
    if c > 0.0 {
        let lc = laplace_constants(c, theta, eps)?;
        let beta = theta / (theta - 1.0); // < 0
        let u_pow = (2.0 - theta) / (2.0 * (theta - 1.0));
        let v = -fl(wp, -z).ln(); // −log|z| > 0
        let pre = fl(wp, lc.c1) * (u.clone().ln() * u_pow).exp();
        let v_form = pre.clone() * (v.ln() * beta).exp().exp_by(lc.c2);
        // substitute v = u + u²/2 + ⋯ : exp(C2 u^β + (C2 β/2) u^{β+1})
        let u_beta = (u.clone().ln() * beta).exp();
        let u_beta1 = (u.clone().ln() * (beta + 1.0)).exp();
        let expo = fl(wp, lc.c2) * &u_beta + fl(wp, lc.c2 * beta / 2.0) * &u_beta1;
        let u_form = pre * expo.exp();
        return Ok(MinusOneApprox { v_form, u_form });
    }
    if c == 0.0 {
        // Σ(−z)^n = −z/(1+z)
        let val = fl(wp, -z) / &u;
        return Ok(MinusOneApprox {
            v_form: val.clone(),
            u_form: val,
        });
    }
    // c < 0: truncated Abel–Taylor series, stopped at the smallest term
    let mut acc = fl(wp, 0);
    let mut prev_mag = f64::INFINITY;
    for k in 0..16u32 {
        let u_k = abel_taylor_coeff(c, theta, k, ctx)?;
        let term = fl(wp, &u_k * &(u.clone().ln() * k).exp());
        let mag = term.clone().abs().to_f64();
        if mag > prev_mag {
            break;
        }
        acc += term;
        prev_mag = mag;
    }
    Ok(MinusOneApprox {
        v_form: acc.clone(),
        u_form: acc,
    })
}

trait ExpBy {
    fn exp_by(self, c: f64) -> Float;
}

impl ExpBy for Float {
    /// exp(c · self)
    fn exp_by(self, c: f64) -> Float {
        (self * c).exp()
    }
}

/// Abel–Taylor coefficient u_k = (−1)^k Σ_{n≥1} C(n,k) e^{cn^θ} for c < 0,
/// 0 < θ < 1 (convergent; tail bounded by comparison with
/// ∫ x^k e^{−|c|x^θ} dx = a^{−(k+1)/θ} Γ((k+1)/θ, a n^θ)/θ).
pub fn abel_taylor_coeff(c: f64, theta: f64, k: u32, ctx: &PrecisionContext) -> Result<Float> {
    if !(c < 0.0) || !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!(
            "Abel coefficients need c < 0, 0 < theta < 1; got ({c}, {theta})"
        )));
    }
    let a = -c;
    let wp = ctx.working(24);
    let tol = ctx.tol();
    let peak = (k as f64 / (a * theta)).powf(1.0 / theta).max(4.0);
    let mut k_fact = fl(wp, 1);
    for i in 2..=k.max(1) {
        k_fact *= i;
    }
    // C(n,k) incrementally from C(max(k,1), k) = 1
    let mut n: u64 = k.max(1) as u64;
    let mut binom = Integer::from(1u32);
    let mut acc = fl(wp, 0);
    loop {
        use rug::ops::Pow;
        let npow = Float::with_val(wp, fl(wp, n as f64).pow(theta));
        acc += fl(wp, &binom * &(npow * c).exp());
        if n as f64 > 1.5 * peak + 8.0 {
            // tail ≤ (1/k!) a^{−(k+1)/θ} Γ_upper((k+1)/θ, a n^θ)/θ
            let s_arg = fl(wp, (k as f64 + 1.0) / theta);
            let x_arg = Float::with_val(wp, fl(wp, n as f64).pow(theta)) * a;
            let upper = Float::with_val(wp, s_arg.gamma_inc_ref(&x_arg));
            let tail = upper * fl(wp, a.powf(-(k as f64 + 1.0) / theta) / theta) / &k_fact;
            if tail.to_f64() <= tol * acc.clone().abs().to_f64().max(1e-300) {
                break;
            }
        }
        n += 1;
        if n > 100_000_000 {
            return Err(Error::SlowConvergence(n));
        }
        binom *= n;
        binom /= n - k as u64;
    }
    if k % 2 == 1 {
        acc = -acc;
    }
    Ok(acc)
}

/// Convenience: the alternating generating-function value of E(z;c,θ) by
/// direct summation, used as the boundary oracle in tests.
pub fn e_direct(c: f64, theta: f64, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let f = make_builtin(BuiltinKind::ExpPower { c, theta }, ctx)?;
    direct_sum(&f, z, ctx)
}
