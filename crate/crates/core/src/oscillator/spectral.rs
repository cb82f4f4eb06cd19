//! Spectral-sum oracle for the reduced-radial Green's function.
//!
//! G_l(r, r', ε) = Σ_n c_n / (ε_n − ε) with c_n = u_{nl}(r) u_{nl}(r'). The
//! first [`SPECTRAL_TERMS`] + 1 terms are summed explicitly; the slowly
//! convergent remainder is obtained from the Laplace-type representation
//!
//! 1/(ε_n − ε) = (1/2ħω) ∫_0^1 t^{n+a−1} dt,  a = (l − ε/ħω)/2,
//!
//! where Σ_n c_n t^n is the closed-form Hille-Hardy kernel. Terms with
//! n + a <= 0 are kept exact. Nothing here touches Kummer or Whittaker
//! functions, so it is an independent check of the closed form.

use crate::error::{KgoError, Result};
use crate::quadrature::composite_gauss_legendre;
use crate::specfun::bessel_i_half_scaled;

use super::{radial_u, OscillatorParams};

/// Number of explicit spectral terms (n = 0..=SPECTRAL_TERMS).
pub const SPECTRAL_TERMS: u32 = 60;
const SPLIT: f64 = 0.5;

/// Result of the spectral-sum oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSum {
    pub value: f64,
    /// Plain truncated sum over n <= SPECTRAL_TERMS.
    pub partial_sum: f64,
    /// value − partial_sum.
    pub tail: f64,
}

/// Σ_n u_n(r) u_n(r') t^n in closed form.
fn kernel(l: u32, p: &OscillatorParams, r: f64, rp: f64, t: f64) -> f64 {
    let beta = p.beta();
    let (x, y) = (beta * r * r, beta * rp * rp);
    let alpha = l as f64 + 0.5;
    let omt = 1.0 - t;
    let sx = x.sqrt();
    let sy = y.sqrt();
    let st = t.sqrt();
    let z = 2.0 * sx * sy * st / omt;
    let log_pref =
        std::f64::consts::LN_2 + (alpha + 1.0) * beta.ln() + (l as f64 + 1.0) * (r * rp).ln()
            - 0.5 * (x + y)
            - 0.5 * alpha * (x * y * t).ln()
            - omt.ln();
    let expo = -(sx - sy).powi(2) * t / omt + 2.0 * sx * sy * st / (1.0 + st);
    (log_pref + expo).exp() * bessel_i_half_scaled(l, z)
}

/// Spectral-sum evaluation of G_l(r, r', ε).
pub fn spectral_sum_greens(
    l: u32,
    p: &OscillatorParams,
    eps: f64,
    r: f64,
    rp: f64,
) -> Result<SpectralSum> {
    if !(r > 0.0 && rp > 0.0) {
        return Err(KgoError::Domain {
            function: "spectral_sum_greens",
            detail: format!("radii must be positive (r = {r}, r' = {rp})"),
        });
    }
    let hw = p.hbar_omega();
    let a = 0.5 * (l as f64 - eps / hw);
    if a <= 0.0 && a == a.floor() {
        return Err(KgoError::Pole {
            function: "spectral_sum_greens",
            arg: eps,
        });
    }
    let n_terms = SPECTRAL_TERMS as usize;
    let coeff: Vec<f64> = (0..=SPECTRAL_TERMS)
        .map(|n| radial_u(n, l, p, r) * radial_u(n, l, p, rp))
        .collect();
    let partial_sum: f64 = coeff
        .iter()
        .enumerate()
        .map(|(n, c)| c / (n as f64 + a))
        .sum::<f64>()
        / (2.0 * hw);

    // terms with n + a <= 0 cannot use the integral representation
    let n0 = if a > 0.0 {
        0
    } else {
        (-a).floor() as usize + 1
    };
    if n0 > n_terms {
        return Err(KgoError::Domain {
            function: "spectral_sum_greens",
            detail: format!("energy {eps} lies above the explicit spectral window"),
        });
    }
    let mut total: f64 = coeff[..n0]
        .iter()
        .enumerate()
        .map(|(n, c)| c / (n as f64 + a))
        .sum();
    // [0, SPLIT]: term by term
    total += coeff[n0..]
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let e = (n0 + k) as f64 + a;
            c * SPLIT.powf(e) / e
        })
        .sum::<f64>();
    // [SPLIT, 1]: closed-form kernel minus the exact head, t = 1 − s²
    let (ss, ws) = composite_gauss_legendre(0.0, (1.0 - SPLIT).sqrt(), 12, 30);
    let integral: f64 = ss
        .iter()
        .zip(&ws)
        .map(|(&s, &w)| {
            let t = 1.0 - s * s;
            let head: f64 = coeff[..n0]
                .iter()
                .enumerate()
                .map(|(n, c)| c * t.powi(n as i32))
                .sum();
            w * 2.0 * s * t.powf(a - 1.0) * (kernel(l, p, r, rp, t) - head)
        })
        .sum();
    total += integral;
    let value = total / (2.0 * hw);
    Ok(SpectralSum {
        value,
        partial_sum,
        tail: value - partial_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_matches_its_series_at_small_t() {
        let p = OscillatorParams::natural(1.0).unwrap();
        let t: f64 = 0.3;
        for l in 0..3 {
            let series: f64 = (0..=SPECTRAL_TERMS)
                .map(|n| radial_u(n, l, &p, 0.9) * radial_u(n, l, &p, 1.6) * t.powi(n as i32))
                .sum();
            let closed = kernel(l, &p, 0.9, 1.6, t);
            assert!(
                ((closed - series) / series).abs() < 1e-12,
                "l={l}: {closed} vs {series}"
            );
        }
    }

    #[test]
    fn tail_is_significant() {
        // the plain 61-term sum is far from converged on the diagonal
        let p = OscillatorParams::natural(1.0).unwrap();
        let s = spectral_sum_greens(2, &p, 2.7, 1.0, 1.0).unwrap();
        assert!((s.tail / s.value).abs() > 1e-2);
    }
}
