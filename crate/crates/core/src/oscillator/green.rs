use crate::error::{KgoError, Result};
use crate::par::{self, Exec};
use crate::specfun::{gamma, legendre_p, whittaker_m, whittaker_w, WhittakerParams};

use super::fd::{radial_operator, RadialGrid};
use super::OscillatorParams;

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn check_radii(r: f64, rp: f64) -> Result<()> {
    if r > 0.0 && rp > 0.0 {
        Ok(())
    } else {
        Err(KgoError::Domain {
            function: "greens_radial",
            detail: format!("radii must be positive (r = {r}, r' = {rp})"),
        })
    }
}

/// Whittaker data shared by the two prefactor conventions.
fn whittaker_product(
    l: u32,
    p: &OscillatorParams,
    eps: f64,
    r: f64,
    rp: f64,
) -> Result<(f64, f64)> {
    check_radii(r, rp)?;
    let hw = p.hbar_omega();
    let g_arg = 0.5 * l as f64 - 0.5 * eps / hw;
    if g_arg <= 0.0 && g_arg == g_arg.floor() {
        return Err(KgoError::Pole {
            function: "greens_radial",
            arg: eps,
        });
    }
    let wp = WhittakerParams::new(0.5 * eps / hw + 0.75, 0.5 * l as f64 + 0.25)?;
    let beta = p.beta();
    let (r_gt, r_lt) = if r >= rp { (r, rp) } else { (rp, r) };
    let prod = whittaker_w(wp, beta * r_gt * r_gt)? * whittaker_m(wp, beta * r_lt * r_lt)?;
    Ok((gamma(g_arg)?, prod / (r * rp).sqrt()))
}

/// Reduced-radial Green's function G_l(r, r', ε) of (H_NR − ε) in channel l,
/// normalised so that G_l = Σ_n u_{nl}(r) u_{nl}(r') / (ε_{nl} − ε):
///
/// G_l = Γ(l/2 − ε/2ħω) / (ħω Γ(l+3/2) sqrt(rr')) · W_{λ,ν}(mω r_>²/ħ) M_{λ,ν}(mω r_<²/ħ)
///
/// with λ = ε/2ħω + 3/4 and ν = l/2 + 1/4.
pub fn greens_radial(l: u32, p: &OscillatorParams, eps: f64, r: f64, rp: f64) -> Result<f64> {
    let (g, wm) = whittaker_product(l, p, eps, r, rp)?;
    Ok(g / (p.hbar_omega() * gamma(l as f64 + 1.5)?) * wm)
}

/// The same kernel with the prefactor −Γ(l/2 − ε/2ħω)/(sqrt(rr') ħω) as it is
/// usually printed for the unnormalised Whittaker M. It differs from
/// [`greens_radial`] by [`printed_prefactor_ratio`].
pub fn greens_radial_printed(
    l: u32,
    p: &OscillatorParams,
    eps: f64,
    r: f64,
    rp: f64,
) -> Result<f64> {
    let (g, wm) = whittaker_product(l, p, eps, r, rp)?;
    Ok(-g / p.hbar_omega() * wm)
}

/// greens_radial_printed / greens_radial = −Γ(l + 3/2).
pub fn printed_prefactor_ratio(l: u32) -> f64 {
    -gamma(l as f64 + 1.5).expect("positive argument")
}

/// Truncated partial-wave sum and its remainder estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialWaveSum {
    pub value: f64,
    /// Magnitude of the last retained term.
    pub remainder: f64,
    /// Per-l contributions, l = 0..=l_max.
    pub terms: Vec<f64>,
    /// Set when the remainder exceeds 1e-6 of the sum.
    pub warning: bool,
}

impl PartialWaveSum {
    fn from_terms(terms: Vec<f64>) -> Self {
        let value: f64 = terms.iter().sum();
        let remainder = terms.last().copied().unwrap_or(0.0).abs();
        Self {
            value,
            remainder,
            warning: remainder > 1e-6 * value.abs(),
            terms,
        }
    }
}

fn pair_geometry(r_vec: [f64; 3], rp_vec: [f64; 3]) -> Result<(f64, f64, f64)> {
    let (r, rp) = (norm3(r_vec), norm3(rp_vec));
    if r_vec == rp_vec {
        return Err(KgoError::Domain {
            function: "greens_full",
            detail: "coincident points: the kernel diverges on the diagonal".into(),
        });
    }
    check_radii(r, rp)?;
    let cosg = ((r_vec[0] * rp_vec[0] + r_vec[1] * rp_vec[1] + r_vec[2] * rp_vec[2]) / (r * rp))
        .clamp(-1.0, 1.0);
    Ok((r, rp, cosg))
}

/// G_NR(r, r', ε) = (1/rr') Σ_{l<=l_max} G_l(r, r', ε) (2l+1)/4π P_l(cos γ).
pub fn greens_full(
    p: &OscillatorParams,
    eps: f64,
    r_vec: [f64; 3],
    rp_vec: [f64; 3],
    l_max: u32,
) -> Result<PartialWaveSum> {
    greens_full_with(Exec::default(), p, eps, r_vec, rp_vec, l_max)
}

/// [`greens_full`] with an explicit execution strategy over channels.
pub fn greens_full_with(
    exec: Exec,
    p: &OscillatorParams,
    eps: f64,
    r_vec: [f64; 3],
    rp_vec: [f64; 3],
    l_max: u32,
) -> Result<PartialWaveSum> {
    let (r, rp, cosg) = pair_geometry(r_vec, rp_vec)?;
    let ls: Vec<u32> = (0..=l_max).collect();
    let terms = par::try_map(exec, &ls, |&l| {
        let g = greens_radial(l, p, eps, r, rp)?;
        Ok::<_, KgoError>(
            g * (2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) * legendre_p(l, cosg) / (r * rp),
        )
    })?;
    Ok(PartialWaveSum::from_terms(terms))
}

/// Finite-difference oracle for [`greens_full`]: per channel, solves
/// (H_l − ε) g = δ_{r'} on `grid` with the delta spread linearly over the two
/// nodes bracketing r', interpolates g at r, and resums the partial waves.
pub fn fd_greens_full(
    exec: Exec,
    p: &OscillatorParams,
    eps: f64,
    r_vec: [f64; 3],
    rp_vec: [f64; 3],
    l_max: u32,
    grid: &RadialGrid,
) -> Result<f64> {
    let (r, rp, cosg) = pair_geometry(r_vec, rp_vec)?;
    let locate = |x: f64| -> Result<(usize, f64)> {
        let s = (x - grid.r_min) / grid.spacing;
        if s < 0.0 || s >= (grid.n_points - 1) as f64 {
            return Err(KgoError::Domain {
                function: "fd_greens_full",
                detail: format!("radius {x} outside the grid"),
            });
        }
        let j = s.floor() as usize;
        Ok((j, s - j as f64))
    };
    let (js, fs) = locate(rp)?;
    let (jr, fr) = locate(r)?;
    let ls: Vec<u32> = (0..=l_max).collect();
    let terms = par::try_map(exec, &ls, |&l| {
        let op = radial_operator(l, p, grid, 0.0);
        let mut rhs = vec![0.0; grid.n_points];
        rhs[js] = (1.0 - fs) / grid.spacing;
        rhs[js + 1] = fs / grid.spacing;
        let g = op.solve_shifted(eps, &rhs)?;
        let gl = (1.0 - fr) * g[jr] + fr * g[jr + 1];
        Ok::<_, KgoError>(
            gl * (2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) * legendre_p(l, cosg) / (r * rp),
        )
    })?;
    Ok(terms.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{radial_u, spectral_sum_greens};
    use approx::assert_relative_eq;

    fn nat() -> OscillatorParams {
        OscillatorParams::natural(1.0).unwrap()
    }

    #[test]
    fn matches_spectral_sum() {
        let p = nat();
        let g = greens_radial(0, &p, -1.0, 1.0, 2.0).unwrap();
        let s = spectral_sum_greens(0, &p, -1.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(g, s.value, max_relative = 1e-6);
        // arbitrary-precision reference
        assert_relative_eq!(g, 0.240_123_533_100_068_34, max_relative = 1e-12);
    }

    #[test]
    fn non_natural_units() {
        let p = OscillatorParams::new(1.7, 0.6, 2.0, 0.9).unwrap();
        for &(l, eps, r, rp) in &[(0u32, -0.3, 0.8, 1.5), (2, 1.1, 1.2, 0.7)] {
            let g = greens_radial(l, &p, eps, r, rp).unwrap();
            let s = spectral_sum_greens(l, &p, eps, r, rp).unwrap();
            assert_relative_eq!(g, s.value, max_relative = 1e-8);
        }
    }

    #[test]
    fn symmetric_in_radii() {
        let p = nat();
        let a = greens_radial(1, &p, 0.5, 0.5, 1.7).unwrap();
        let b = greens_radial(1, &p, 0.5, 1.7, 0.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn poles_on_spectrum() {
        let p = nat();
        for l in 0..4u32 {
            for n in 0..4u32 {
                let e = (2 * n + l) as f64;
                assert!(matches!(
                    greens_radial(l, &p, e, 1.0, 2.0),
                    Err(KgoError::Pole { .. })
                ));
            }
            // opposite-parity shells are regular in this channel
            assert!(greens_radial(l, &p, l as f64 + 1.0, 1.0, 2.0).is_ok());
        }
    }

    #[test]
    fn residue_at_ground_state() {
        let p = nat();
        let d = 1e-6;
        for &(r, rp) in &[(0.5, 1.0), (1.0, 2.0), (2.0, 2.0)] {
            let res = d * greens_radial(0, &p, -d, r, rp).unwrap();
            let expect = radial_u(0, 0, &p, r) * radial_u(0, 0, &p, rp);
            assert_relative_eq!(res, expect, max_relative = 1e-4);
        }
    }

    #[test]
    fn printed_prefactor_ratio_is_measured() {
        let p = nat();
        for l in 0..3 {
            let a = greens_radial_printed(l, &p, -1.0, 0.5, 2.0).unwrap();
            let b = greens_radial(l, &p, -1.0, 0.5, 2.0).unwrap();
            assert_relative_eq!(a / b, printed_prefactor_ratio(l), max_relative = 1e-14);
        }
    }

    #[test]
    fn defining_relation_on_grid() {
        // (H_l − ε) G_l(·, r', ε) vanishes away from r' up to O(h²)
        let p = nat();
        let (l, eps) = (1u32, 0.5);
        let residual = |n: usize| {
            let grid = RadialGrid::new(8.0, n).unwrap();
            let j = (n + 1) / 4 - 1; // node at r' = 2
            let rp = grid.r(j);
            let g: Vec<f64> = grid
                .nodes()
                .iter()
                .map(|&r| greens_radial(l, &p, eps, r, rp).unwrap())
                .collect();
            let op = radial_operator(l, &p, &grid, 0.0);
            let hg = op.apply(&g);
            let mut worst = 0.0_f64;
            let mut scale = 0.0_f64;
            for i in 1..n - 1 {
                let v = (op.diag[i] - 2.0 * op.off[0].abs() - eps) * g[i];
                scale = scale.max(v.abs());
                if i + 1 < j || i > j + 1 {
                    worst = worst.max((hg[i] - eps * g[i]).abs());
                }
            }
            // the discrete delta carries unit weight
            let jump = grid.spacing * (hg[j] - eps * g[j]);
            (worst / scale, jump)
        };
        let (coarse, j1) = residual(399);
        let (fine, j2) = residual(799);
        assert!(coarse < 1e-3 && fine < 1e-3, "{coarse} {fine}");
        assert!(
            (coarse / fine - 4.0).abs() < 0.5,
            "order ratio {}",
            coarse / fine
        );
        assert!((j1 - 1.0).abs() < 1e-2 && (j2 - 1.0).abs() < 1e-2);
    }

    #[test]
    fn full_kernel_symmetry_and_fd_oracle() {
        let p = nat();
        let a = [0.3, 0.9, -0.2];
        let b = [-0.7, 0.4, 0.8];
        let g1 = greens_full(&p, -0.8, a, b, 24).unwrap();
        let g2 = greens_full(&p, -0.8, b, a, 24).unwrap();
        assert_relative_eq!(g1.value, g2.value, max_relative = 1e-14);
        // close radii converge slowly in l; well-separated radii do not
        assert!(g1.warning);
        let far = greens_full(&p, -0.8, [0.2, 0.1, 0.0], [0.0, 1.9, 1.2], 24).unwrap();
        assert!(!far.warning, "remainder {}", far.remainder);
        let grid = RadialGrid::new(10.0, 999).unwrap();
        let fd = fd_greens_full(Exec::Parallel, &p, -0.8, a, b, 24, &grid).unwrap();
        assert!(
            ((fd - g1.value) / g1.value).abs() < 0.02,
            "{fd} vs {}",
            g1.value
        );
        // rotating both points together leaves the value unchanged
        let rot = |v: [f64; 3]| [v[1], -v[0], v[2]];
        let g3 = greens_full(&p, -0.8, rot(a), rot(b), 24).unwrap();
        assert_relative_eq!(g1.value, g3.value, max_relative = 1e-13);
        assert!(greens_full(&p, -0.8, a, a, 4).is_err());
    }
}
