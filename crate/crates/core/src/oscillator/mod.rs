//! Non-relativistic isotropic oscillator H_NR = p²/2m + mω²r²/2 − 3ħω/2.
//!
//! The −3ħω/2 shift puts the ground state at zero, so ε_{nl} = ħω(2n + l).

mod fd;
mod green;
mod spectral;

pub use fd::{fd_apply, fd_channel_eigenvalues, radial_operator, RadialGrid};
pub use green::{
    fd_greens_full, greens_full, greens_full_with, greens_radial, greens_radial_printed,
    printed_prefactor_ratio, PartialWaveSum,
};
pub use spectral::{spectral_sum_greens, SpectralSum, SPECTRAL_TERMS};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{KgoError, Result};
use crate::specfun::{assoc_laguerre, ln_gamma, polar_angles, spherical_harmonic};

/// Physical constants of the oscillator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega: f64,
    pub c: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, c: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("c", c), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(KgoError::InvalidParameter(format!(
                    "{name} = {v} must be positive and finite"
                )));
            }
        }
        Ok(Self {
            mass,
            omega,
            c,
            hbar,
        })
    }

    /// ħ = m = ω = 1 with the given speed of light.
    pub fn natural(c: f64) -> Result<Self> {
        Self::new(1.0, 1.0, c, 1.0)
    }

    pub fn hbar_omega(&self) -> f64 {
        self.hbar * self.omega
    }

    /// Rest energy mc².
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c * self.c
    }

    /// Inverse squared oscillator length mω/ħ.
    pub fn beta(&self) -> f64 {
        self.mass * self.omega / self.hbar
    }

    /// Oscillator length a₀ = sqrt(ħ/mω).
    pub fn length_scale(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }

    /// Relativistic coupling ρ = ħω/mc².
    pub fn rho(&self) -> f64 {
        self.hbar_omega() / self.rest_energy()
    }
}

/// Radial, orbital and magnetic labels (n, l, μ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
    pub mu: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, mu: i32) -> Result<Self> {
        if mu.unsigned_abs() > l {
            return Err(KgoError::InvalidParameter(format!(
                "|mu| = {} exceeds l = {l}",
                mu.unsigned_abs()
            )));
        }
        Ok(Self { n, l, mu })
    }

    /// Shell index N = 2n + l.
    pub fn shell(&self) -> u32 {
        2 * self.n + self.l
    }
}

/// All (n, l, μ) with 2n + l <= `max_shell`, ordered by shell, then l, n, μ.
pub fn modes_up_to_shell(max_shell: u32) -> Vec<QuantumNumbers> {
    let mut out = Vec::new();
    for shell in 0..=max_shell {
        for l in (shell % 2..=shell).step_by(2) {
            let n = (shell - l) / 2;
            for mu in -(l as i32)..=(l as i32) {
                out.push(QuantumNumbers { n, l, mu });
            }
        }
    }
    out
}

/// ε_{nl} = ħω(2n + l).
pub fn epsilon(q: QuantumNumbers, p: &OscillatorParams) -> f64 {
    p.hbar_omega() * q.shell() as f64
}

/// Number of states (n, l, μ) with 2n + l = N.
pub fn degeneracy(shell: u32) -> u64 {
    let n = shell as u64;
    (n + 1) * (n + 2) / 2
}

/// Radial normalisation (mω/ħ)^{l/2+3/4} sqrt(2 n! / Γ(n+l+3/2)).
fn radial_norm(n: u32, l: u32, beta: f64) -> f64 {
    let lf = l as f64;
    let log = 0.5
        * (std::f64::consts::LN_2 + ln_gamma(n as f64 + 1.0).unwrap_or(0.0)
            - ln_gamma(n as f64 + lf + 1.5).unwrap_or(0.0));
    beta.powf(0.5 * lf + 0.75) * log.exp()
}

/// Radial part R_{nl}(r) of ψ_{nlμ}, normalised as ∫ R² r² dr = 1.
///
/// Uses the Gaussian e^{−mωr²/2ħ}; this is the exponent the normalisation
/// constant belongs to (see the crate README).
pub fn radial_r(n: u32, l: u32, p: &OscillatorParams, r: f64) -> f64 {
    let beta = p.beta();
    let x = beta * r * r;
    radial_norm(n, l, beta)
        * r.powi(l as i32)
        * (-0.5 * x).exp()
        * assoc_laguerre(n, l as f64 + 0.5, x)
}

/// Reduced radial function u_{nl}(r) = r R_{nl}(r), normalised ∫ u² dr = 1.
pub fn radial_u(n: u32, l: u32, p: &OscillatorParams, r: f64) -> f64 {
    r * radial_r(n, l, p, r)
}

/// Eigenfunction ψ_{nlμ}(r) of H_NR.
pub fn psi(q: QuantumNumbers, p: &OscillatorParams, r_vec: [f64; 3]) -> Complex64 {
    let r = (r_vec[0] * r_vec[0] + r_vec[1] * r_vec[1] + r_vec[2] * r_vec[2]).sqrt();
    let (theta, phi) = polar_angles(r_vec);
    let y = spherical_harmonic(q.l, q.mu, theta, phi).expect("QuantumNumbers enforces |mu| <= l");
    y * radial_r(q.n, q.l, p, r)
}

/// H_NR restricted to one l channel, in its own eigenbasis (diagonal).
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedChannel {
    pub l: u32,
    pub n_max: u32,
    pub params: OscillatorParams,
    /// Diagonal entries ħω(2n + l), n = 0..=n_max.
    pub h_nr: Vec<f64>,
}

impl TruncatedChannel {
    pub fn new(l: u32, n_max: u32, params: OscillatorParams) -> Self {
        Self::shifted(l, n_max, params, 0.0)
    }

    /// Channel of H_NR + shift.
    pub fn shifted(l: u32, n_max: u32, params: OscillatorParams, shift: f64) -> Self {
        let h_nr = (0..=n_max)
            .map(|n| params.hbar_omega() * (2 * n + l) as f64 + shift)
            .collect();
        Self {
            l,
            n_max,
            params,
            h_nr,
        }
    }

    pub fn dim(&self) -> usize {
        self.h_nr.len()
    }

    pub fn matrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.h_nr))
    }
}
