//! ζ at integer arguments (MPFR) and an Euler–Maclaurin continuation for
//! complex arguments with Re s > −1, used by the 1/ζ(s+2) coefficient function.

use super::{cx, fl, pi, prec_of};
use crate::error::{Error, Result};
use rug::{Complex, Float};

/// ζ(k) for integer k ≥ 2 at `prec` bits (correctly rounded by MPFR).
pub fn zeta_int(k: u32, prec: u32) -> Result<Float> {
    if k < 2 {
        return Err(Error::Domain(format!("zeta_int needs k >= 2, got {k}")));
    }
    Ok(fl(prec, k).zeta())
}

/// ζ(s) for complex s with Re s > −1 by Euler–Maclaurin:
///
/// ζ(s) = Σ_{n<N} n^{−s} + N^{1−s}/(s−1) + N^{−s}/2
///        + Σ_{k=1}^{M} B_{2k}/(2k)! · (s)_{2k−1} · N^{−s−2k+1} + R_M.
pub fn zeta_complex(s: &Complex, prec: u32) -> Result<Complex> {
    let re = s.real().to_f64();
    let im = s.imag().to_f64();
    if !(re > -1.0) {
        return Err(Error::Domain(format!(
            "Euler-Maclaurin zeta restricted to Re s > -1, got {re}"
        )));
    }
    if (re - 1.0).abs() < 1e-12 && im.abs() < 1e-12 {
        return Err(Error::Domain("zeta pole at s = 1".into()));
    }
    let wp = prec + 24;
    const M: usize = 24;
    // Remainder ~ ((|s| + 2M)/(2πN))^{2M+1}: solve for N at 2^{-wp}.
    let smod = (re * re + im * im).sqrt();
    let n_f = (smod + 2.0 * M as f64 + 1.0) / (2.0 * std::f64::consts::PI)
        * 2f64.powf(wp as f64 / (2.0 * M as f64 + 1.0));
    let n = (n_f.ceil() as u32).max(10);

    let minus_s = cx(wp, -s.clone());
    let mut acc = cx(wp, 0);
    for j in 1..n {
        acc += cx(wp, fl(wp, j).ln() * &minus_s).exp();
    }
    let n_pow_minus_s = cx(wp, fl(wp, n).ln() * &minus_s).exp(); // N^{-s}
    let s_minus_1 = cx(wp, s - 1u32);
    acc += cx(wp, &n_pow_minus_s * fl(wp, n)) / &s_minus_1; // N^{1-s}/(s-1)
    acc += cx(wp, &n_pow_minus_s / 2u32);

    // Bernoulli tail
    let n_big = fl(wp, n);
    let mut rising = cx(wp, s); // (s)(s+1)...(s+2k-2)
    let mut n_pow = cx(wp, &n_pow_minus_s / &n_big); // N^{-s-2k+1} at k=1
    let mut fact = fl(wp, 2); // (2k)!
    let two_pi = fl(wp, pi(wp) * 2u32);
    let mut tp_pow = two_pi.clone().square(); // (2π)^{2k}
    let mut zeta_even = fl(wp, 2).zeta();
    for k in 1..=M {
        // B_{2k} = (−1)^{k+1} 2 (2k)! ζ(2k)/(2π)^{2k}
        let sign = if k % 2 == 1 { 1i32 } else { -1 };
        let b_over_fact = fl(wp, 2) * &zeta_even / &tp_pow * sign; // B_{2k}/(2k)!
        acc += cx(wp, &rising * &n_pow) * b_over_fact;
        if k < M {
            rising *= cx(wp, s + (2 * k - 1) as u32);
            rising *= cx(wp, s + (2 * k) as u32);
            n_pow /= n_big.clone().square();
            fact *= (2 * k + 1) as u32;
            fact *= (2 * k + 2) as u32;
            tp_pow *= two_pi.clone().square();
            zeta_even = fl(wp, (2 * k + 2) as u32).zeta();
        }
    }
    Ok(cx(prec_of(s).max(prec), acc))
}
