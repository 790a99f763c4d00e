//! Exact high-precision binomial differences D_n[f] = Σ C(n,k)(−1)^k f_k,
//! the Euler-transform identity at generating-function level, asymptotic
//! difference formulas, and the Madsen generalized-binomial PMF.

use crate::coeff_functions::CoefficientFunction;
use crate::error::{Error, Result};
use crate::lindelof::direct_sum;
use crate::numerics::{cabs, cx, fl, PrecisionContext};
use rug::{Complex, Float, Integer};
use std::sync::Arc;

/// Hard ceiling on auto-raised working precision (bits).
const PRECISION_CAP: u64 = 1 << 24;

type SeqEval = Arc<dyn Fn(u32, u32) -> Float + Send + Sync>;

/// The difference sequences with their f₀ conventions: e^{±√k} start at
/// k = 0 with f₀ = 1; e^{±1/k} start at k = 1 (f₀ = 0).
#[derive(Clone)]
pub enum SequenceKind {
    ExpSqrtPlus,
    ExpSqrtMinus,
    ExpInvPlus,
    ExpInvMinus,
    /// f_k = eval(k, prec), including the k = 0 convention.
    Custom { label: String, eval: SeqEval },
}

impl SequenceKind {
    pub fn label(&self) -> String {
        match self {
            SequenceKind::ExpSqrtPlus => "exp(+sqrt k)".into(),
            SequenceKind::ExpSqrtMinus => "exp(-sqrt k)".into(),
            SequenceKind::ExpInvPlus => "exp(+1/k)".into(),
            SequenceKind::ExpInvMinus => "exp(-1/k)".into(),
            SequenceKind::Custom { label, .. } => label.clone(),
        }
    }

    fn eval(&self, k: u32, prec: u32) -> Float {
        match self {
            SequenceKind::ExpSqrtPlus => fl(prec, k).sqrt().exp(),
            SequenceKind::ExpSqrtMinus => (-fl(prec, k).sqrt()).exp(),
            SequenceKind::ExpInvPlus => {
                if k == 0 {
                    fl(prec, 0)
                } else {
                    (fl(prec, 1) / fl(prec, k)).exp()
                }
            }
            SequenceKind::ExpInvMinus => {
                if k == 0 {
                    fl(prec, 0)
                } else {
                    (fl(prec, -1) / fl(prec, k)).exp()
                }
            }
            SequenceKind::Custom { eval, .. } => eval(k, prec),
        }
    }
}

impl std::fmt::Debug for SequenceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SequenceKind({})", self.label())
    }
}

/// A difference evaluation request.
#[derive(Debug, Clone)]
pub struct DifferenceRequest {
    pub kind: SequenceKind,
    pub n: u32,
    pub ctx: PrecisionContext,
}

fn cancellation_bits(n: u32, ctx: &PrecisionContext) -> Result<u32> {
    // max C(n,k) ≈ 2ⁿ while the results are O(1): 1.45n + 64 mantissa bits
    let needed = (1.45 * n as f64).ceil() as u64 + 64 + ctx.bits() as u64;
    if needed > PRECISION_CAP {
        return Err(Error::PrecisionCap {
            needed,
            cap: PRECISION_CAP,
        });
    }
    Ok(needed as u32)
}

/// D_n[f] = Σ_{k=0}^n C(n,k)(−1)^k f_k with binomials as exact integers and
/// f_k evaluated at the auto-raised cancellation-safe precision. Relative
/// error of the result ≤ 2^{−50}.
pub fn differences_exact(req: &DifferenceRequest) -> Result<Float> {
    if req.n < 1 {
        return Err(Error::Domain("difference order n must be >= 1".into()));
    }
    let wp = cancellation_bits(req.n, &req.ctx)?;
    let n = req.n;
    let mut binom = Integer::from(1u32);
    let mut acc = fl(wp, 0);
    for k in 0..=n {
        if k > 0 {
            binom *= n - k + 1;
            binom /= k;
        }
        let f_k = req.kind.eval(k, wp);
        let term = fl(wp, &binom * &f_k);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Leading-order asymptotics of the four named difference sequences:
/// e^{±√k} → ∓1/√(π log n); e^{1/k} → −e^{2√log n}/(2√π (log n)^{1/4});
/// e^{−1/k} → −cos(2√log n − π/4)/(√π (log n)^{1/4}). Natural logs.
pub fn differences_asymptotic(kind: &SequenceKind, n: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain("asymptotic formulas need n >= 3".into()));
    }
    let ln_n = (n as f64).ln();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    match kind {
        SequenceKind::ExpSqrtPlus => Ok(-1.0 / (std::f64::consts::PI * ln_n).sqrt()),
        SequenceKind::ExpSqrtMinus => Ok(1.0 / (std::f64::consts::PI * ln_n).sqrt()),
        SequenceKind::ExpInvPlus => {
            Ok(-(2.0 * ln_n.sqrt()).exp() / (2.0 * sqrt_pi * ln_n.powf(0.25)))
        }
        SequenceKind::ExpInvMinus => {
            Ok(-(2.0 * ln_n.sqrt() - std::f64::consts::FRAC_PI_4).cos()
                / (sqrt_pi * ln_n.powf(0.25)))
        }
        SequenceKind::Custom { .. } => Err(Error::UnsupportedKind(
            "no asymptotic formula for custom sequences".into(),
        )),
    }
}

/// Residual |Σ g_n zⁿ − (1/(1−z))(f₀ + F(z/(1−z)))| of the Euler-transform
/// identity, with g_n from exact differences of f_k = φ(k). f₀ is φ(0) when
/// 0 is regular for φ, else 0 (the paper's k = 1 summation convention).
pub fn euler_transform_check(
    f: &CoefficientFunction,
    z: &Complex,
    ctx: &PrecisionContext,
) -> Result<Float> {
    let abs_z = cabs(z).to_f64();
    if !(abs_z < 0.5) {
        return Err(Error::Domain(format!(
            "Euler-transform check needs |z| < 1/2, got {abs_z}"
        )));
    }
    let wp = ctx.working(32);
    let f0 = match crate::coeff_functions::evaluate(f, &cx(wp, 0), ctx) {
        Ok(v) => v,
        Err(_) => cx(wp, 0),
    };
    // left side: Σ_{n≥0} g_n z^n, g_0 = f_0; |g_n z^n| ≤ (2|z|)^n max|f|
    let kind = SequenceKind::Custom {
        label: format!("phi({})", f.label()),
        eval: {
            let f = f.clone();
            let f0 = f0.clone();
            Arc::new(move |k: u32, prec: u32| {
                if k == 0 {
                    Float::with_val(prec, f0.real())
                } else {
                    let s = Complex::with_val(prec, k);
                    match f.eval_raw(&s) {
                        Ok(v) => Float::with_val(prec, v.real()),
                        Err(_) => Float::with_val(prec, 0),
                    }
                }
            })
        },
    };
    let mut lhs = cx(wp, f0.clone());
    let mut zpow = cx(wp, 1);
    let tol = ctx.tol();
    let mut n = 0u32;
    loop {
        n += 1;
        if n > 400 {
            return Err(Error::SlowConvergence(400));
        }
        zpow *= cx(wp, z);
        let g_n = differences_exact(&DifferenceRequest {
            kind: kind.clone(),
            n,
            ctx: ctx.clone(),
        })?;
        lhs += cx(wp, &zpow * &g_n);
        // crude majorant: |g_m z^m| ≤ (2|z|)^m · max_{k≤m}|f_k|; the factor
        // below tracks the geometric part, enough for |z| < 1/2
        let geo = (2.0 * abs_z).powi(n as i32) / (1.0 - 2.0 * abs_z);
        if geo < tol * 1e-2 && n >= 8 {
            break;
        }
    }
    // right side: (f0 + F(z/(1−z)))/(1−z)
    let one_minus_z = cx(wp, 1u32) - z;
    let w = cx(wp, z / &one_minus_z);
    let fw = direct_sum(f, &w, ctx)?;
    let rhs = cx(wp, f0 + fw) / &one_minus_z;
    let d = cx(wp, lhs - rhs);
    Ok(cabs(&d))
}

/// Madsen's generalized binomial PMF
/// P[X = x] = C(n,x) Σ_{j=0}^{n−x} C(n−x,j)(−1)^j π_{x+j}, π_k = exp((log p)·k^a),
/// evaluated cancellation-safe.
pub fn madsen_pmf(n: u32, x: u32, p: f64, a: f64, ctx: &PrecisionContext) -> Result<Float> {
    if x > n {
        return Err(Error::Domain(format!("x = {x} outside 0..={n}")));
    }
    if !(p > 0.0 && p < 1.0) || !(0.0..=1.0).contains(&a) {
        return Err(Error::Domain(format!(
            "need p in (0,1) and a in [0,1]; got p = {p}, a = {a}"
        )));
    }
    let m = n - x;
    let wp = cancellation_bits(n.max(1), ctx)?;
    let ln_p = fl(wp, p).ln();
    // inner alternating sum over j with π_{x+j}
    let mut binom = Integer::from(1u32);
    let mut acc = fl(wp, 0);
    for j in 0..=m {
        if j > 0 {
            binom *= m - j + 1;
            binom /= j;
        }
        use rug::ops::Pow;
        let kpow = Float::with_val(wp, fl(wp, (x + j) as f64).pow(a));
        let pi_k = fl(wp, &ln_p * &kpow).exp();
        let term = fl(wp, &binom * &pi_k);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let c_nx = Float::with_val(wp, Integer::from(n).binomial(x));
    Ok(acc * c_nx)
}

/// Companion asymptotics of the Madsen PMF for large n:
/// x = 0 → −log p / (Γ(1−a)(log n)^a); x ≥ 1 → −a log p / (x Γ(1−a)(log n)^{a+1}).
pub fn madsen_asymptotic(n: u32, x: u32, p: f64, a: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) || !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!(
            "asymptotic form needs p in (0,1), a in (0,1); got p = {p}, a = {a}"
        )));
    }
    let ln_n = (n as f64).ln();
    let g = Float::with_val(96, 1.0 - a).gamma().to_f64();
    if x == 0 {
        Ok(-p.ln() / (g * ln_n.powf(a)))
    } else {
        Ok(-a * p.ln() / (x as f64 * g * ln_n.powf(a + 1.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_functions::{make_builtin, BuiltinKind};

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn paper_digit_strings() {
        // g_n for e^{1/k}: −2.71828, −8.03246, −20.4159, −45.1379
        let cases = [
            (1u32, -2.71828f64, 1e-5),
            (10, -8.03246, 1e-5),
            (100, -20.4159, 1e-4),
            (1000, -45.1379, 1e-4),
        ];
        for (n, expect, tol) in cases {
            let v = differences_exact(&DifferenceRequest {
                kind: SequenceKind::ExpInvPlus,
                n,
                ctx: ctx(),
            })
            .unwrap();
            assert!(
                (v.to_f64() - expect).abs() < tol,
                "n = {n}: got {}, expect {expect}",
                v.to_f64()
            );
        }
    }

    #[test]
    fn differences_annihilate_low_degree() {
        // f_k = k: D_n = 0 for n ≥ 2 (and D_1 = −1)
        let kind = SequenceKind::Custom {
            label: "k".into(),
            eval: Arc::new(|k, prec| fl(prec, k)),
        };
        for n in [2u32, 3, 7, 20] {
            let v = differences_exact(&DifferenceRequest {
                kind: kind.clone(),
                n,
                ctx: ctx(),
            })
            .unwrap();
            assert!(v.to_f64().abs() < 1e-40, "n = {n}: {}", v.to_f64());
        }
        let v1 = differences_exact(&DifferenceRequest {
            kind,
            n: 1,
            ctx: ctx(),
        })
        .unwrap();
        assert!((v1.to_f64() + 1.0).abs() < 1e-40);
    }

    #[test]
    fn geometric_identity() {
        // f_k = r^k: D_n = (1−r)^n
        for r in [0.5f64, 2.0] {
            let kind = SequenceKind::Custom {
                label: format!("{r}^k"),
                eval: Arc::new(move |k, prec| {
                    use rug::ops::Pow;
                    Float::with_val(prec, fl(prec, r).pow(k))
                }),
            };
            for n in [1u32, 5, 40, 200] {
                let v = differences_exact(&DifferenceRequest {
                    kind: kind.clone(),
                    n,
                    ctx: ctx(),
                })
                .unwrap();
                use rug::ops::Pow;
                let expect = Float::with_val(400, (Float::with_val(400, 1) - Float::with_val(400, r)).pow(n));
                let rel = Float::with_val(400, &v - &expect).abs() / expect.abs();
                assert!(rel.to_f64() < 2f64.powi(-50), "r = {r}, n = {n}: rel = {:e}", rel.to_f64());
            }
        }
    }

    #[test]
    fn precision_monotonicity() {
        // doubling the context bits moves the result by ≤ 2^{−50}·|result|
        let a = differences_exact(&DifferenceRequest {
            kind: SequenceKind::ExpInvMinus,
            n: 300,
            ctx: PrecisionContext::new(64, 1e-10).unwrap(),
        })
        .unwrap();
        let b = differences_exact(&DifferenceRequest {
            kind: SequenceKind::ExpInvMinus,
            n: 300,
            ctx: PrecisionContext::new(128, 1e-10).unwrap(),
        })
        .unwrap();
        let rel = ((a.to_f64() - b.to_f64()) / b.to_f64()).abs();
        assert!(rel <= 2f64.powi(-50), "rel = {rel:e}");
    }

    #[test]
    fn asymptotic_formulas_and_signs() {
        // signs: differences of e^{+√k} eventually negative, e^{−√k} positive
        for n in [100u32, 500, 2000] {
            let plus = differences_exact(&DifferenceRequest {
                kind: SequenceKind::ExpSqrtPlus,
                n,
                ctx: ctx(),
            })
            .unwrap();
            assert!(plus.is_sign_negative(), "n = {n}");
            let minus = differences_exact(&DifferenceRequest {
                kind: SequenceKind::ExpSqrtMinus,
                n,
                ctx: ctx(),
            })
            .unwrap();
            assert!(minus.is_sign_positive(), "n = {n}");
        }
        // eq:diff1 magnitude at n = 10⁶
        let v = differences_asymptotic(&SequenceKind::ExpSqrtPlus, 1_000_000).unwrap();
        let expect = -1.0 / (std::f64::consts::PI * (1e6f64).ln()).sqrt();
        assert!((v - expect).abs() < 1e-15);
        // eq:diff2 vs exact at n = 1000: same ballpark (slow log-scale limit)
        let asym = differences_asymptotic(&SequenceKind::ExpInvPlus, 1000).unwrap();
        let exact = differences_exact(&DifferenceRequest {
            kind: SequenceKind::ExpInvPlus,
            n: 1000,
            ctx: ctx(),
        })
        .unwrap();
        let ratio = exact.to_f64() / asym;
        assert!((0.5..2.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn oscillatory_sign_change_brackets_cos_zero() {
        // cos(2√log n − π/4) = 0 at log n = ((3π/4 + mπ)/2)²; m = 2 puts
        // log n ≈ 18.7, n ≈ e^{18.7} — out of exact reach; use m = 1:
        // log n* ≈ 7.56, n* ≈ 1911. The exact zero sits at n ≈ 1300
        // (log n ≈ 7.17): displaced by ~0.39 in the log n scale, small
        // against the ≈11-wide inter-zero gap, so bracket in that scale.
        let ln_star = ((3.0 * std::f64::consts::PI / 4.0 + std::f64::consts::PI) / 2.0).powi(2);
        let lo = (ln_star - 0.6).exp() as u32;
        let hi = (ln_star + 0.6).exp() as u32;
        let v_lo = differences_exact(&DifferenceRequest {
            kind: SequenceKind::ExpInvMinus,
            n: lo,
            ctx: ctx(),
        })
        .unwrap();
        let v_hi = differences_exact(&DifferenceRequest {
            kind: SequenceKind::ExpInvMinus,
            n: hi,
            ctx: ctx(),
        })
        .unwrap();
        assert!(
            v_lo.is_sign_positive() != v_hi.is_sign_positive(),
            "no sign change across the predicted zero: {} / {}",
            v_lo.to_f64(),
            v_hi.to_f64()
        );
    }

    #[test]
    fn euler_transform_residuals() {
        let c = ctx();
        // Constant(1): g_0 = 1, rest 0
        let f = make_builtin(BuiltinKind::Constant { a: 1.0 }, &c).unwrap();
        let r = euler_transform_check(&f, &Complex::with_val(128, (0.2, 0.0)), &c).unwrap();
        assert!(r.to_f64() < 1e-12, "residual {}", r.to_f64());
        // Identity: D_0 = 0, D_1 = −1, rest 0
        let f = make_builtin(BuiltinKind::Identity, &c).unwrap();
        let r = euler_transform_check(&f, &Complex::with_val(128, (0.1, 0.0)), &c).unwrap();
        assert!(r.to_f64() < 1e-12, "residual {}", r.to_f64());
        // ExpPower(1,−1), f0 = 0
        let f = make_builtin(BuiltinKind::ExpPower { c: 1.0, theta: -1.0 }, &c).unwrap();
        let r = euler_transform_check(&f, &Complex::with_val(128, (0.2, 0.0)), &c).unwrap();
        assert!(r.to_f64() < 1e-10, "residual {}", r.to_f64());
    }

    #[test]
    fn madsen_collapses_to_binomial_at_a_one() {
        let n = 20u32;
        let p = 0.3f64;
        for x in 0..=n {
            let v = madsen_pmf(n, x, p, 1.0, &ctx()).unwrap();
            let exact = Float::with_val(256, Integer::from(n).binomial(x))
                * Float::with_val(256, p).pow_u(x)
                * Float::with_val(256, 1.0 - p).pow_u(n - x);
            let d = (v.to_f64() - exact.to_f64()).abs();
            assert!(d < 1e-12, "x = {x}: {d:e}");
        }
    }

    trait PowU {
        fn pow_u(self, e: u32) -> Float;
    }

    impl PowU for Float {
        fn pow_u(self, e: u32) -> Float {
            use rug::ops::Pow;
            let p = self.prec();
            Float::with_val(p, (&self).pow(e))
        }
    }

    #[test]
    fn madsen_normalizes() {
        let n = 20u32;
        let mut total = Float::with_val(256, 0);
        for x in 0..=n {
            total += madsen_pmf(n, x, 0.3, 0.5, &ctx()).unwrap();
        }
        assert!((total.to_f64() - 1.0).abs() < 1e-10, "sum = {}", total.to_f64());
    }

    #[test]
    fn madsen_asymptotic_window() {
        // n = 10⁴, x = 0, p = 0.5, a = 0.5: within [0.5, 2] of the formula
        let v = madsen_pmf(10_000, 0, 0.5, 0.5, &ctx()).unwrap();
        let asym = madsen_asymptotic(10_000, 0, 0.5, 0.5).unwrap();
        let ratio = v.to_f64() / asym;
        assert!((0.5..2.0).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn precision_cap_enforced() {
        let huge = DifferenceRequest {
            kind: SequenceKind::ExpInvPlus,
            n: u32::MAX,
            ctx: ctx(),
        };
        assert!(matches!(
            differences_exact(&huge),
            Err(Error::PrecisionCap { .. })
        ));
    }
}
