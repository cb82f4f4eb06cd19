use crate::error::{KgoError, Result};
use crate::linalg::SymTridiagonal;

use super::OscillatorParams;

/// Uniform radial grid r_i = r_min + i·h, i = 0..n_points, with Dirichlet
/// zeros one step outside each end. The default construction puts the first
/// node at r_min = h, so the inner boundary sits at r = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
    pub spacing: f64,
}

impl RadialGrid {
    /// `n_points` interior nodes on (0, r_max).
    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 || r_max.is_nan() || r_max <= 0.0 {
            return Err(KgoError::InvalidParameter(format!(
                "radial grid needs r_max > 0 and at least 3 points (got {r_max}, {n_points})"
            )));
        }
        let spacing = r_max / (n_points + 1) as f64;
        Ok(Self {
            r_min: spacing,
            r_max,
            n_points,
            spacing,
        })
    }

    pub fn r(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.spacing
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.r(i)).collect()
    }
}

/// Centered second-difference discretisation of
/// −(ħ²/2m) u″ + [ħ² l(l+1)/2mr² + mω²r²/2 − 3ħω/2 + shift] u.
pub fn radial_operator(
    l: u32,
    p: &OscillatorParams,
    grid: &RadialGrid,
    shift: f64,
) -> SymTridiagonal {
    let h = grid.spacing;
    let kin = p.hbar * p.hbar / (2.0 * p.mass * h * h);
    let cent = p.hbar * p.hbar * (l * (l + 1)) as f64 / (2.0 * p.mass);
    let trap = 0.5 * p.mass * p.omega * p.omega;
    let offset = -1.5 * p.hbar_omega() + shift;
    let diag = (0..grid.n_points)
        .map(|i| {
            let r = grid.r(i);
            2.0 * kin + cent / (r * r) + trap * r * r + offset
        })
        .collect();
    let off = vec![-kin; grid.n_points - 1];
    SymTridiagonal { diag, off }
}

/// Lowest `k` eigenvalues of the finite-difference radial operator.
pub fn fd_channel_eigenvalues(
    l: u32,
    p: &OscillatorParams,
    grid: &RadialGrid,
    k: usize,
) -> Result<Vec<f64>> {
    radial_operator(l, p, grid, 0.0).lowest_eigenvalues(k)
}

/// Applies the finite-difference radial operator to samples `u` on `grid`.
pub fn fd_apply(l: u32, p: &OscillatorParams, grid: &RadialGrid, u: &[f64]) -> Result<Vec<f64>> {
    if u.len() != grid.n_points {
        return Err(KgoError::InvalidParameter(format!(
            "{} samples on a {}-point grid",
            u.len(),
            grid.n_points
        )));
    }
    Ok(radial_operator(l, p, grid, 0.0).apply(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::radial_u;

    fn nat() -> OscillatorParams {
        OscillatorParams::natural(1.0).unwrap()
    }

    #[test]
    fn low_eigenvalues() {
        let p = nat();
        let g = RadialGrid::new(12.0, 4000).unwrap();
        let e0 = fd_channel_eigenvalues(0, &p, &g, 3).unwrap();
        for (e, exact) in e0.iter().zip([0.0, 2.0, 4.0]) {
            assert!((e - exact).abs() < 1e-4, "{e}");
        }
        let e1 = fd_channel_eigenvalues(1, &p, &g, 2).unwrap();
        for (e, exact) in e1.iter().zip([1.0, 3.0]) {
            assert!((e - exact).abs() < 1e-4, "{e}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let p = nat();
        let err = |n| {
            let g = RadialGrid::new(12.0, n).unwrap();
            (fd_channel_eigenvalues(1, &p, &g, 3).unwrap()[2] - 5.0).abs()
        };
        let ratio = err(399) / err(799);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    fn relative_residual(n: u32, l: u32, points: usize) -> f64 {
        let p = nat();
        let g = RadialGrid::new(12.0, points).unwrap();
        let u: Vec<f64> = g.nodes().iter().map(|&r| radial_u(n, l, &p, r)).collect();
        let hu = fd_apply(l, &p, &g, &u).unwrap();
        let e = (2 * n + l) as f64;
        let res: f64 = hu
            .iter()
            .zip(&u)
            .map(|(a, b)| (a - e * b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        res / norm
    }

    #[test]
    fn analytic_states_are_near_eigenvectors() {
        for l in 0..=8u32 {
            for n in 0..=4u32 {
                let res = relative_residual(n, l, 4000);
                assert!(res < 1e-4, "({n},{l}) residual {res}");
            }
        }
    }

    #[test]
    fn high_states_residual_is_stencil_limited() {
        // for n >= 5 the three-point stencil error h²u''''/12 alone exceeds 1e-4
        // at 4000 points; check the bound that holds and its h² origin
        for l in [0u32, 4, 8] {
            for n in 5..=10u32 {
                let coarse = relative_residual(n, l, 2000);
                let fine = relative_residual(n, l, 4000);
                assert!(fine < 4e-4, "({n},{l}) residual {fine}");
                assert!(
                    (coarse / fine - 4.0).abs() < 0.3,
                    "({n},{l}) ratio {}",
                    coarse / fine
                );
            }
        }
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(10.0, 2).is_err());
        assert!(RadialGrid::new(-1.0, 10).is_err());
        let g = RadialGrid::new(1.0, 9).unwrap();
        assert!((g.r_min - 0.1).abs() < 1e-15 && (g.r(8) - 0.9).abs() < 1e-15);
    }
}
