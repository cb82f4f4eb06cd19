//! Gauss-Legendre rules and a spherical product rule for 3D integrals.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on P_n
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            return (vec![0.0], vec![2.0]);
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels.
pub fn composite_gauss_legendre(
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in xs.iter().zip(&ws) {
            nodes.push(lo + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    (nodes, weights)
}

/// Product rule over a ball of radius `r_max`: composite Gauss-Legendre in r
/// (with the r² Jacobian folded in), Gauss-Legendre in cos θ and the
/// trapezoid rule in φ.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalQuadrature {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphericalQuadrature {
    pub fn new(
        r_max: f64,
        radial_panels: usize,
        radial_order: usize,
        polar: usize,
        azimuthal: usize,
    ) -> Self {
        let (rs, wr) = composite_gauss_legendre(0.0, r_max, radial_panels, radial_order);
        let (cs, wc) = gauss_legendre(polar);
        let dphi = 2.0 * PI / azimuthal as f64;
        let cap = rs.len() * cs.len() * azimuthal;
        let mut points = Vec::with_capacity(cap);
        let mut weights = Vec::with_capacity(cap);
        for (r, w_r) in rs.iter().zip(&wr) {
            for (c, w_c) in cs.iter().zip(&wc) {
                let s = (1.0 - c * c).sqrt();
                for k in 0..azimuthal {
                    let phi = k as f64 * dphi;
                    points.push([r * s * phi.cos(), r * s * phi.sin(), r * c]);
                    weights.push(w_r * r * r * w_c * dphi);
                }
            }
        }
        Self { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 40] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert_relative_eq!(s, 2.0, max_relative = 1e-14);
            // degree 2n-1 monomial integrates exactly
            let deg = 2 * n - 2;
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert_relative_eq!(q, 2.0 / (deg as f64 + 1.0), max_relative = 1e-13);
        }
    }

    #[test]
    fn ball_volume() {
        let q = SphericalQuadrature::new(2.0, 2, 8, 6, 8);
        let v: f64 = q.weights.iter().sum();
        assert_relative_eq!(v, 4.0 / 3.0 * PI * 8.0, max_relative = 1e-13);
    }
}
