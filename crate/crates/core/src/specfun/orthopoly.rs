use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{KgoError, Result};

/// Generalised Laguerre polynomial L_n^α(x) by the three-term recurrence in n.
pub fn assoc_laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Legendre polynomial P_l(x).
pub fn legendre_p(l: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if l == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..l {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalised associated Legendre function
/// sqrt((2l+1)/4π (l-m)!/(l+m)!) P_l^m(x), Condon-Shortley phase included, m >= 0.
fn normalized_assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    // start from the normalised sectoral value and recur upward in l; this
    // avoids the factorial ratio overflowing
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=m {
        let k = k as f64;
        pmm *= -((2.0 * k + 1.0) / (2.0 * k)).sqrt() * s;
    }
    if l == m {
        return pmm;
    }
    let mf = m as f64;
    let mut pm1 = (2.0 * mf + 3.0).sqrt() * x * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm2 = pmm;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b =
            (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
        let next = a * (x * pm1 - b * pm2);
        pm2 = pm1;
        pm1 = next;
    }
    pm1
}

/// Orthonormal spherical harmonic Y_{lμ}(θ, φ) with the Condon-Shortley phase.
pub fn spherical_harmonic(l: u32, mu: i32, theta: f64, phi: f64) -> Result<Complex64> {
    if mu.unsigned_abs() > l {
        return Err(KgoError::Domain {
            function: "spherical_harmonic",
            detail: format!("|mu| = {} exceeds l = {}", mu.unsigned_abs(), l),
        });
    }
    let m = mu.unsigned_abs();
    let p = normalized_assoc_legendre(l, m, theta.cos());
    let y = Complex64::from_polar(p, m as f64 * phi);
    if mu >= 0 {
        Ok(y)
    } else if m.is_multiple_of(2) {
        Ok(y.conj())
    } else {
        Ok(-y.conj())
    }
}

/// Polar and azimuthal angles of a Cartesian vector; the origin maps to (0, 0).
pub fn polar_angles(v: [f64; 3]) -> (f64, f64) {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if r == 0.0 {
        return (0.0, 0.0);
    }
    ((v[2] / r).clamp(-1.0, 1.0).acos(), v[1].atan2(v[0]))
}
