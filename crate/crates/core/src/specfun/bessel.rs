use super::gamma::ln_gamma;

/// Exponentially scaled modified Bessel function e^{-z} I_{l+1/2}(z), z >= 0.
///
/// Power series for small z, the terminating half-integer expansion above.
pub fn bessel_i_half_scaled(l: u32, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let nu = l as f64 + 0.5;
    if z < 25.0 + 2.0 * l as f64 {
        // Σ (z/2)^{2k+ν} / (k! Γ(k+ν+1)), all terms positive
        let lead = (nu * (0.5 * z).ln() - ln_gamma(nu + 1.0).unwrap_or(0.0) - z).exp();
        let q = 0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        while term > 1e-17 * sum {
            k += 1.0;
            term *= q / (k * (k + nu));
            sum += term;
        }
        return lead * sum;
    }
    // I_{n+1/2}(z) = (2πz)^{-1/2} [e^z Σ_k (-1)^k a_k (2z)^{-k} - (-1)^n e^{-z} Σ_k a_k (2z)^{-k}],
    // a_k = (n+k)! / (k! (n-k)!)
    let n = l as usize;
    let mut a = 1.0;
    let mut plus = 0.0;
    let mut minus = 0.0;
    let mut p = 1.0;
    for k in 0..=n {
        if k > 0 {
            let kf = k as f64;
            a *= (n as f64 + kf) * (n as f64 - kf + 1.0) / kf;
            p /= 2.0 * z;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        plus += sign * a * p;
        minus += a * p;
    }
    let sign_n = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    (plus - sign_n * (-2.0 * z).exp() * minus) / (2.0 * std::f64::consts::PI * z).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn elementary_orders() {
        for &z in &[0.01_f64, 0.7, 3.0, 24.0, 26.0, 80.0] {
            let pre = (2.0 / (PI * z)).sqrt() * (-z).exp();
            let i12 = pre * z.sinh();
            let i32 = pre * (z.cosh() - z.sinh() / z);
            let i52 = pre * ((1.0 + 3.0 / (z * z)) * z.sinh() - 3.0 * z.cosh() / z);
            assert_relative_eq!(bessel_i_half_scaled(0, z), i12, max_relative = 1e-13);
            assert_relative_eq!(bessel_i_half_scaled(1, z), i32, max_relative = 1e-11);
            if z > 0.5 {
                assert_relative_eq!(bessel_i_half_scaled(2, z), i52, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn branches_meet() {
        for l in 0..6 {
            let z = 25.0 + 2.0 * l as f64;
            let below = bessel_i_half_scaled(l, z - 1e-9);
            let above = bessel_i_half_scaled(l, z);
            assert_relative_eq!(below, above, max_relative = 1e-10);
        }
    }
}
