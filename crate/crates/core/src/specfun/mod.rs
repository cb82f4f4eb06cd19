//! Real-argument special functions used by the oscillator and Green's
//! function layers.
//!
//! | function | notes |
//! |---|---|
//! | [`gamma`], [`ln_gamma`], [`recip_gamma`] | Lanczos (g = 7, 9 terms) + reflection |
//! | [`assoc_laguerre`] | three-term recurrence in n |
//! | [`legendre_p`], [`spherical_harmonic`] | recurrences, Condon-Shortley phase |
//! | [`kummer_m`], [`kummer_u`] | series / connection formula / asymptotics |
//! | [`whittaker_m`], [`whittaker_w`] | via Kummer |
//! | [`bessel_i_half_scaled`] | e^{-z} I_{l+1/2}(z) |
//!
//! Everything here is a pure function and safe to call from any thread.

mod bessel;
mod gamma;
mod hypergeometric;
mod orthopoly;
mod whittaker;

pub use bessel::bessel_i_half_scaled;
pub use gamma::{gamma, ln_gamma, pochhammer, recip_gamma};
pub use hypergeometric::{
    kummer_m, kummer_u, kummer_u_asymptotic, kummer_u_connection, kummer_u_continued,
    kummer_u_with_branch, u_crossover_check, CrossoverReport, UBranch, SERIES_MAX_TERMS,
    SERIES_TOL, U_CROSSOVER,
};
pub use orthopoly::{assoc_laguerre, legendre_p, polar_angles, spherical_harmonic};
pub use whittaker::{whittaker_m, whittaker_w, WhittakerParams};
