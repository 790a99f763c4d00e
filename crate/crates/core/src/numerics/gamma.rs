//! Complex Γ at configurable precision: Euler reflection for Re s < 1/2,
//! shifted Stirling series with Bernoulli-number tail elsewhere.
//!
//! MPFR's correctly-rounded real Γ serves the real axis directly and acts as
//! the cross-check oracle for the complex path.

use super::{cx, dist_to_integer, fl, pi, prec_of, PrecisionContext};
use crate::error::{Error, Result};
use rug::{Complex, Float};
use std::cell::RefCell;

thread_local! {
    // Stirling coefficients B_{2k}/(2k(2k-1)) keyed by precision bucket.
    static STIRLING: RefCell<(u32, Vec<Float>)> = const { RefCell::new((0, Vec::new())) };
}

/// B_{2k}/(2k(2k−1)) for k = 1..=kmax at precision `wp`, via
/// B_{2k} = (−1)^{k+1} 2 (2k)! ζ(2k) / (2π)^{2k}.
fn stirling_coeffs(kmax: usize, wp: u32) -> Vec<Float> {
    STIRLING.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (cached_wp, ref mut coeffs) = *guard;
        if cached_wp < wp {
            coeffs.clear();
        }
        if coeffs.len() < kmax {
            let start = coeffs.len();
            let two_pi = fl(wp, pi(wp) * 2u32);
            let mut fact = fl(wp, 1); // (2k)!
            for i in 1..=(2 * start) {
                fact *= i as u32;
            }
            let mut tp_pow = Float::with_val(wp, two_pi.pow_u(2 * start as u32));
            for k in (start + 1)..=kmax {
                fact *= (2 * k - 1) as u32;
                fact *= (2 * k) as u32;
                tp_pow *= two_pi.clone().square();
                let zeta = fl(wp, 2 * k as u32).zeta();
                let sign = if k % 2 == 1 { 1i32 } else { -1 };
                let b2k = fl(wp, 2) * &fact * zeta / &tp_pow * sign;
                let c = b2k / ((2 * k) as u32 * (2 * k - 1) as u32);
                coeffs.push(c);
            }
        }
        guard.0 = guard.0.max(wp);
        guard.1[..kmax].to_vec()
    })
}

trait PowU {
    fn pow_u(&self, e: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(&self, e: u32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(e))
    }
}

/// log Γ(w) for Re w ≥ 1/2 by Stirling with an upward shift that puts the
/// argument far enough out for the asymptotic series to reach `wp` bits.
fn ln_gamma_stirling(w: &Complex, wp: u32) -> Result<Complex> {
    let re = w.real().to_f64();
    let im = w.imag().to_f64();
    let r0 = 0.18 * wp as f64 + 10.0;
    let shift = if re * re + im * im < r0 * r0 {
        ((r0 * r0 - im * im).max(0.0).sqrt() + 1.0 - re).ceil().max(0.0) as u32
    } else {
        0
    };
    let big = cx(wp, w + shift);
    // (W − 1/2) ln W − W + ln(2π)/2
    let ln_big = big.clone().ln();
    let half = fl(wp, 0.5);
    let mut acc = cx(wp, &big - &half) * &ln_big;
    acc -= &big;
    acc += fl(wp, pi(wp) * 2u32).ln() / 2u32;
    // Bernoulli tail Σ c_k / W^{2k-1}
    let kmax = (wp as usize / 6).max(12);
    let coeffs = stirling_coeffs(kmax, wp);
    let inv2 = cx(wp, Complex::with_val(wp, 1u32) / &big).square();
    let mut pow = cx(wp, Complex::with_val(wp, 1u32) / &big); // W^{-(2k-1)}
    let cutoff = Float::with_val(wp, Float::i_exp(1, -(wp as i32) - 4));
    let mut converged = false;
    for c in coeffs {
        let term = cx(wp, &pow * &c);
        acc += &term;
        let t_abs = Float::with_val(wp, term.abs_ref());
        if t_abs < cutoff {
            converged = true;
            break;
        }
        pow *= &inv2;
    }
    if !converged {
        return Err(Error::NonConvergence(
            "Stirling series stalled; argument too close to the pole line".into(),
        ));
    }
    // Downward recurrence: Γ(w) = Γ(w + N) / Π_{j=0}^{N-1} (w + j)
    if shift > 0 {
        let mut prod = cx(wp, w);
        for j in 1..shift {
            prod *= cx(wp, w + j);
        }
        acc -= prod.ln();
    }
    Ok(acc)
}

/// Γ(s) at the context precision.
///
/// Relative error ≤ max(tol, 1e−13) on |Re s|, |Im s| ≤ 100; the reflection
/// formula covers Re s < 1/2. Non-positive integer arguments are poles.
pub fn gamma(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let wp = ctx.working(48).max(prec_of(s));
    let (d, n) = dist_to_integer(s);
    if d <= 1e-12 && n <= 0 {
        return Err(Error::GammaPole(format!("{:.6e}", s.real().to_f64())));
    }
    if s.imag().is_zero() {
        // MPFR real Γ is exact to wp here.
        let x = Float::with_val(wp, s.real());
        let g = x.gamma();
        if !g.is_finite() {
            return Err(Error::GammaPole(format!("{:.6e}", s.real().to_f64())));
        }
        return Ok(cx(wp, g));
    }
    let re = s.real().to_f64();
    if re < 0.5 {
        // Γ(s) = π / (sin(πs) Γ(1−s))
        let pi_ = pi(wp);
        let one_minus = cx(wp, 1u32 - s);
        let g = cx(wp, ln_gamma_stirling(&one_minus, wp)?.exp());
        let sin = cx(wp, &pi_ * s).sin();
        let denom = cx(wp, &sin * &g);
        return Ok(cx(wp, Complex::with_val(wp, &pi_) / denom));
    }
    Ok(ln_gamma_stirling(&cx(wp, s), wp)?.exp())
}

/// 1/Γ(x) for real x: zero at the non-positive integers, else the reciprocal.
pub fn recip_gamma_real(x: &Float) -> Float {
    let wp = x.prec() + 16;
    if x.is_integer() && !(x.is_sign_positive() && !x.is_zero()) {
        return fl(wp, 0);
    }
    let g = Float::with_val(wp, x).gamma();
    fl(wp, 1) / g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::cabs;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(128, (re, im))
    }

    fn rel_err(v: &Complex, expect: &Complex) -> f64 {
        let d = Complex::with_val(256, v - expect);
        cabs(&d).to_f64() / cabs(expect).to_f64()
    }

    #[test]
    fn classic_values() {
        let g1 = gamma(&c(1.0, 0.0), &ctx()).unwrap();
        assert!((g1.real().to_f64() - 1.0).abs() < 1e-15);
        let gh = gamma(&c(0.5, 0.0), &ctx()).unwrap();
        assert!((gh.real().to_f64() - 1.7724538509055160).abs() < 1e-12);
        let g5 = gamma(&c(5.0, 0.0), &ctx()).unwrap();
        assert!((g5.real().to_f64() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn root_of_gamma_equals_minus_one() {
        // Γ(−2.457024) ≈ −1 to the accuracy of the quoted root.
        let g = gamma(&c(-2.457024, 0.0), &ctx()).unwrap();
        assert!(
            (g.real().to_f64() + 1.0).abs() < 1e-4,
            "got {}",
            g.real().to_f64()
        );
    }

    #[test]
    fn poles_rejected() {
        assert!(matches!(gamma(&c(0.0, 0.0), &ctx()), Err(Error::GammaPole(_))));
        assert!(matches!(gamma(&c(-3.0, 0.0), &ctx()), Err(Error::GammaPole(_))));
        assert!(gamma(&c(3.0, 0.0), &ctx()).is_ok());
    }

    #[test]
    fn complex_path_matches_real_axis() {
        // Force the Stirling path with a tiny imaginary part and compare
        // against MPFR's real Γ.
        for x in [0.75, 2.3, 7.7, 31.2] {
            let via_complex = ln_gamma_stirling(&c(x, 0.0), 160).unwrap().exp();
            let direct = Float::with_val(160, x).gamma();
            let expect = Complex::with_val(160, (direct, Float::with_val(160, 0)));
            assert!(rel_err(&via_complex, &expect) < 1e-35, "x = {x}");
        }
    }

    #[test]
    fn known_complex_value() {
        // Γ(1+i) = 0.49801566811835604 − 0.15494982830181069 i
        let g = gamma(&c(1.0, 1.0), &ctx()).unwrap();
        let expect = c(0.49801566811835604, -0.15494982830181069);
        assert!(rel_err(&g, &expect) < 1e-14);
    }

    #[test]
    fn recurrence_bridges_reflection_and_stirling() {
        // Γ(s+4) = (s+3)(s+2)(s+1)s·Γ(s): the left side runs through Stirling,
        // the right side through the reflection branch.
        let s = c(-1.5, 0.5);
        let left = gamma(&c(2.5, 0.5), &ctx()).unwrap();
        let g = gamma(&s, &ctx()).unwrap();
        let mut prod = Complex::with_val(160, &g);
        for j in 0..4u32 {
            prod *= Complex::with_val(160, &s + j);
        }
        assert!(rel_err(&left, &prod) < 1e-13, "left {left}, prod {prod}");
    }

    #[test]
    fn reflection_identity_spot() {
        // Γ(s)Γ(1−s) sin(πs)/π = 1 (full random-grid version in tests/)
        for (re, im) in [(0.3, 1.2), (2.6, -0.8), (-1.7, 2.5)] {
            let s = c(re, im);
            let one_minus = c(1.0 - re, -im);
            let g1 = gamma(&s, &ctx()).unwrap();
            let g2 = gamma(&one_minus, &ctx()).unwrap();
            let pi_ = pi(160);
            let sin = Complex::with_val(160, (&pi_ * &s)).sin();
            let prod = Complex::with_val(160, &g1 * &g2) * sin / pi_;
            let one = Complex::with_val(160, 1);
            assert!(rel_err(&prod, &one) < 1e-13, "s = {re}+{im}i");
        }
    }

    #[test]
    fn high_precision_consistency() {
        // 1000-bit run agrees with a 1060-bit run to ~2^-990.
        let hi = PrecisionContext::new(1000, 1e-290).unwrap();
        let hi2 = PrecisionContext::new(1060, 1e-290).unwrap();
        let s = Complex::with_val(1100, (3.25, 4.5));
        let a = gamma(&s, &hi).unwrap();
        let b = gamma(&s, &hi2).unwrap();
        let d = Complex::with_val(1100, &a - &b);
        let rel = cabs(&d).to_f64().abs() / cabs(&b).to_f64();
        assert!(rel < 1e-295, "rel = {rel:e}");
    }
}
