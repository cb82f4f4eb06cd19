use std::f64::consts::PI;

use crate::error::{KgoError, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// sin(πx) with the argument reduced exactly first.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let s = (PI * (x - n)).sin();
    if n % 2.0 == 0.0 {
        s
    } else {
        -s
    }
}

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (Γ(x+1) form)
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Gamma function Γ(x).
///
/// Lanczos approximation for `x >= 0.5`, reflection formula below.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(KgoError::Domain {
            function: "gamma",
            detail: "NaN argument".into(),
        });
    }
    if is_nonpositive_integer(x) {
        return Err(KgoError::Pole {
            function: "gamma",
            arg: x,
        });
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_unchecked(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    // split the power to delay overflow
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * lanczos_sum(x)
}

/// Natural log of |Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(KgoError::Pole {
            function: "ln_gamma",
            arg: x,
        });
    }
    if x < 0.5 {
        let s = sin_pi(x).abs();
        return Ok((PI / s).ln() - ln_gamma(1.0 - x)?);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln())
}

/// Reciprocal gamma 1/Γ(x); entire, zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    // 1/Γ underflows to zero past x = 171
    if is_nonpositive_integer(x) || x > 171.0 {
        0.0
    } else {
        1.0 / gamma_unchecked(x)
    }
}

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1).
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}
