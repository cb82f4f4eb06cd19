use crate::error::{KgoError, Result};

use super::hypergeometric::{kummer_m, kummer_u};

/// Indices (λ, ν) of the Whittaker functions M_{λ,ν} and W_{λ,ν}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WhittakerParams {
    pub lambda: f64,
    pub nu: f64,
}

impl WhittakerParams {
    pub fn new(lambda: f64, nu: f64) -> Result<Self> {
        let b = 1.0 + 2.0 * nu;
        if b <= 0.0 && b == b.floor() {
            return Err(KgoError::Domain {
                function: "whittaker",
                detail: format!("1 + 2nu = {b} is a non-positive integer"),
            });
        }
        Ok(Self { lambda, nu })
    }

    /// First Kummer parameter a = ν − λ + 1/2.
    pub fn kummer_a(&self) -> f64 {
        self.nu - self.lambda + 0.5
    }

    /// Second Kummer parameter b = 1 + 2ν.
    pub fn kummer_b(&self) -> f64 {
        1.0 + 2.0 * self.nu
    }

    fn prefactor(&self, x: f64) -> f64 {
        (-0.5 * x).exp() * x.powf(self.nu + 0.5)
    }
}

fn check_x(function: &'static str, x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(KgoError::Domain {
            function,
            detail: format!("x = {x} must be positive"),
        })
    }
}

/// M_{λ,ν}(x) = e^{-x/2} x^{ν+1/2} M(ν−λ+1/2, 1+2ν, x).
pub fn whittaker_m(p: WhittakerParams, x: f64) -> Result<f64> {
    check_x("whittaker_m", x)?;
    Ok(p.prefactor(x) * kummer_m(p.kummer_a(), p.kummer_b(), x)?)
}

/// W_{λ,ν}(x) = e^{-x/2} x^{ν+1/2} U(ν−λ+1/2, 1+2ν, x).
pub fn whittaker_w(p: WhittakerParams, x: f64) -> Result<f64> {
    check_x("whittaker_w", x)?;
    Ok(p.prefactor(x) * kummer_u(p.kummer_a(), p.kummer_b(), x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;
    use approx::assert_relative_eq;

    #[test]
    fn first_term_only_when_a_vanishes() {
        let p = WhittakerParams::new(0.25 + 0.5, 0.25).unwrap();
        for &x in &[0.3_f64, 2.0, 9.0] {
            let expect = (-0.5 * x).exp() * x.powf(0.75);
            assert_relative_eq!(whittaker_m(p, x).unwrap(), expect, max_relative = 1e-15);
            assert_relative_eq!(whittaker_w(p, x).unwrap(), expect, max_relative = 1e-15);
        }
    }

    #[test]
    fn small_x_behaviour_of_m() {
        let p = WhittakerParams::new(1.25, 0.75).unwrap();
        let x: f64 = 1e-8;
        assert_relative_eq!(
            whittaker_m(p, x).unwrap() / x.powf(1.25),
            1.0,
            max_relative = 1e-7
        );
    }

    #[test]
    fn large_x_behaviour_of_w() {
        let p = WhittakerParams::new(0.9, 0.25).unwrap();
        let x: f64 = 400.0;
        let r = whittaker_w(p, x).unwrap() * (0.5 * x).exp() * x.powf(-p.lambda);
        assert!((r - 1.0).abs() < 5.0 / x);
    }

    #[test]
    fn reference_values() {
        // independent arbitrary-precision evaluation
        let p = WhittakerParams::new(1.25, 0.25).unwrap();
        assert_relative_eq!(
            whittaker_m(p, 1.0).unwrap(),
            0.380_789_071_162_605_1,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            whittaker_w(p, 1.0).unwrap(),
            0.303_265_329_856_316_7,
            max_relative = 1e-13
        );
    }

    #[test]
    fn wronskian() {
        let h = 1e-5;
        let x = 2.0;
        for &(lambda, nu) in &[(1.25, 0.25), (0.1, 0.75), (-0.6, 1.25), (2.1, 0.25)] {
            let p = WhittakerParams::new(lambda, nu).unwrap();
            let m = whittaker_m(p, x).unwrap();
            let w = whittaker_w(p, x).unwrap();
            let dm = (whittaker_m(p, x + h).unwrap() - whittaker_m(p, x - h).unwrap()) / (2.0 * h);
            let dw = (whittaker_w(p, x + h).unwrap() - whittaker_w(p, x - h).unwrap()) / (2.0 * h);
            let lhs = w * dm - m * dw;
            let rhs = gamma(1.0 + 2.0 * nu).unwrap() / gamma(nu - lambda + 0.5).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-6);
        }
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(WhittakerParams::new(0.0, -1.0).is_err());
        let p = WhittakerParams::new(0.0, 0.25).unwrap();
        assert!(whittaker_m(p, 0.0).is_err());
    }
}
