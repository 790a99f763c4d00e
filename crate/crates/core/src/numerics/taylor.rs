//! Numeric Taylor/Laurent coefficients by trapezoidal quadrature on a circle,
//! with node doubling until two successive estimates agree.

use super::{cabs, cx, fl, pi, prec_of, PrecisionContext};
use crate::error::{Error, Result};
use rug::{Complex, Float};

/// Indexing mode for [`taylor_coeffs_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffMode {
    /// Coefficients a_0, a_1, ... (f analytic at s0).
    Taylor,
    /// Coefficients a_{-order}, a_{-order+1}, ... (pole of at most `order` at s0).
    Laurent { order: u32 },
}

/// `count` local coefficients of `f` at `s0` from contour quadrature on the
/// circle of the given radius: a_j = (1/2πi) ∮ f(s)/(s−s0)^{j+1} ds.
///
/// The trapezoid rule on M nodes is exponentially accurate for f analytic on
/// the closed disc (minus the centre in Laurent mode); M doubles until the
/// coefficient set is stable to ctx.tol in circle-function units, which fails
/// (and reports non-convergence) when the radius crosses a singularity.
pub fn taylor_coeffs_numeric<F>(
    f: F,
    s0: &Complex,
    radius: &Float,
    count: usize,
    mode: CoeffMode,
    ctx: &PrecisionContext,
) -> Result<Vec<Complex>>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    if count == 0 {
        return Ok(Vec::new());
    }
    if !(radius.to_f64() > 0.0) {
        return Err(Error::Domain("taylor radius must be positive".into()));
    }
    let order = match mode {
        CoeffMode::Taylor => 0i64,
        CoeffMode::Laurent { order } => order as i64,
    };
    let wp = ctx.working(32).max(prec_of(s0));
    let tol = ctx.tol();

    let mut m = 32usize.max((4 * (count + order as usize)).next_power_of_two());
    let m_cap = 1usize << 16;
    let mut prev: Option<Vec<Complex>> = None;
    loop {
        let (coeffs, scale) = coeffs_at(&f, s0, radius, count, order, m, wp)?;
        if let Some(p) = &prev {
            // compare in circle-function units: |Δa_j| r^j ≤ tol · mean|f|
            let mut worst = 0.0f64;
            let r64 = radius.to_f64();
            for (j, (a, b)) in coeffs.iter().zip(p.iter()).enumerate() {
                let d = Complex::with_val(wp, a - b);
                let idx = j as i64 - order;
                let weight = r64.powi(idx as i32);
                worst = worst.max(cabs(&d).to_f64() * weight);
            }
            if worst <= tol * (scale + 1e-300) {
                return Ok(coeffs);
            }
        }
        prev = Some(coeffs);
        m *= 2;
        if m > m_cap {
            return Err(Error::NonConvergence(
                "coefficient extraction did not stabilize; radius likely crosses a singularity"
                    .into(),
            ));
        }
    }
}

fn coeffs_at<F>(
    f: &F,
    s0: &Complex,
    radius: &Float,
    count: usize,
    order: i64,
    m: usize,
    wp: u32,
) -> Result<(Vec<Complex>, f64)>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    let two_pi = fl(wp, pi(wp) * 2u32);
    let mut values = Vec::with_capacity(m);
    let mut nodes_conj = Vec::with_capacity(m);
    let mut scale = 0.0f64;
    for k in 0..m {
        let theta = fl(wp, &two_pi * fl(wp, k as f64)) / fl(wp, m as f64);
        let (sin, cos) = theta.sin_cos(fl(wp, 0));
        let node = cx(wp, (cos, sin));
        let s = cx(wp, &node * radius) + s0;
        let v = f(&s)?;
        scale += cabs(&v).to_f64().abs();
        values.push(cx(wp, v));
        nodes_conj.push(Complex::with_val(wp, node.conj_ref()));
    }
    scale /= m as f64;

    // rot_k := e^{-i j θ_k}, advanced by one conjugate-node multiply per j
    let j0 = -order;
    let mut rot: Vec<Complex> = (0..m)
        .map(|k| {
            let mut r = cx(wp, 1);
            let mut e = j0;
            // initialize to node_k^{-j0} = conj(node_k)^{j0}
            if e > 0 {
                for _ in 0..e {
                    r *= &nodes_conj[k];
                }
            } else {
                while e < 0 {
                    r *= Complex::with_val(wp, nodes_conj[k].conj_ref());
                    e += 1;
                }
            }
            r
        })
        .collect();

    let mut r_pow = Float::with_val(wp, rug::ops::Pow::pow(radius, -j0 as i32));
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut acc = cx(wp, 0);
        for k in 0..m {
            acc += cx(wp, &values[k] * &rot[k]);
        }
        acc /= fl(wp, m as f64);
        acc *= &r_pow;
        out.push(acc);
        for k in 0..m {
            rot[k] *= &nodes_conj[k];
        }
        r_pow /= radius;
    }
    Ok((out, scale))
}

/// Polish a simple-pole location of `f` by Newton iteration on g = 1/f
/// (g has a simple zero there), with a central-difference derivative.
pub fn refine_simple_pole<F>(f: F, approx: &Complex, prec: u32) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    let wp = prec + 32;
    let mut s = cx(wp, approx);
    let g = |s: &Complex| -> Result<Complex> {
        let v = f(s)?;
        Ok(cx(wp, Complex::with_val(wp, 1u32) / v))
    };
    let mut h_exp = 20i32; // relative step 2^-20, squared each round as Newton converges
    for _ in 0..64 {
        let scale = cabs(&s).to_f64().max(1.0);
        let mut h = fl(wp, scale);
        h >>= h_exp as u32;
        let hplus = cx(wp, &s + &h);
        let hminus = cx(wp, &s - &h);
        let gp = g(&hplus)?;
        let gm = g(&hminus)?;
        let g0 = g(&s)?;
        let deriv = cx(wp, &gp - &gm) / (fl(wp, &h * 2u32));
        if deriv.is_zero() {
            return Err(Error::NonConvergence("pole refinement: zero derivative".into()));
        }
        let step = cx(wp, &g0 / &deriv);
        let step_abs = cabs(&step).to_f64();
        s -= &step;
        if step_abs <= 2f64.powi(-(prec as i32)) * scale {
            return Ok(s);
        }
        // derivative accuracy: keep h ~ sqrt of remaining error
        h_exp = (h_exp + 12).min(wp as i32 / 2);
    }
    Err(Error::NonConvergence("pole refinement: Newton did not settle".into()))
}
