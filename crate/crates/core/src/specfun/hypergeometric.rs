//! Confluent hypergeometric functions M(a, b, x) and U(a, b, x) for real
//! arguments with x >= 0.

use crate::error::{KgoError, Result};

use super::gamma::{gamma, recip_gamma};

/// Relative size of the last retained term in the M series.
pub const SERIES_TOL: f64 = 1e-16;
/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 10_000;
/// Above this argument U is taken from its asymptotic expansion.
pub const U_CROSSOVER: f64 = 30.0;
/// Cancellation factor beyond which the connection formula is abandoned.
const MAX_CANCELLATION: f64 = 1e4;
/// Relative size of the smallest asymptotic term accepted as converged.
const ASYMPTOTIC_TOL: f64 = 1e-15;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Kummer's function M(a, b, x) = Σ (a)_k x^k / ((b)_k k!).
pub fn kummer_m(a: f64, b: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(KgoError::Pole {
            function: "kummer_m",
            arg: b,
        });
    }
    if x < 0.0 {
        return Err(KgoError::Domain {
            function: "kummer_m",
            detail: format!("x = {x} must be non-negative"),
        });
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) / (b + kf) * x / (kf + 1.0);
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        // only stop once the terms are past their maximum
        if term.abs() <= SERIES_TOL * sum.abs() && ratio.abs() < 1.0 && kf + a >= 0.0 {
            return Ok(sum);
        }
    }
    Err(KgoError::NonConvergence {
        function: "kummer_m",
        iterations: SERIES_MAX_TERMS,
    })
}

/// Which evaluation route produced a value of U.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UBranch {
    /// U(0, b, x) = 1.
    Trivial,
    /// Connection formula in terms of two M series.
    Connection,
    /// Large-x asymptotic series.
    Asymptotic,
    /// Asymptotic start further out, continued inward along Kummer's equation.
    Continued,
}

fn check_u_args(b: f64, x: f64) -> Result<()> {
    if b == b.floor() {
        return Err(KgoError::Domain {
            function: "kummer_u",
            detail: format!("integer b = {b} is not supported"),
        });
    }
    if x <= 0.0 {
        return Err(KgoError::Domain {
            function: "kummer_u",
            detail: format!("x = {x} must be positive"),
        });
    }
    Ok(())
}

/// Connection formula; returns the value and the cancellation factor
/// (|t1| + |t2|) / |t1 + t2|.
pub fn kummer_u_connection(a: f64, b: f64, x: f64) -> Result<(f64, f64)> {
    check_u_args(b, x)?;
    let t1 = gamma(1.0 - b)? * recip_gamma(a + 1.0 - b) * kummer_m(a, b, x)?;
    let t2 = if recip_gamma(a) == 0.0 {
        0.0
    } else {
        gamma(b - 1.0)? * recip_gamma(a) * x.powf(1.0 - b) * kummer_m(a - b + 1.0, 2.0 - b, x)?
    };
    let sum = t1 + t2;
    let cancel = if sum == 0.0 {
        f64::INFINITY
    } else {
        (t1.abs() + t2.abs()) / sum.abs()
    };
    Ok((sum, cancel))
}

/// Asymptotic series x^{-a} Σ (a)_k (a-b+1)_k (-x)^{-k} / k!, truncated at
/// the smallest term. Returns the value and the relative size of that term.
pub fn kummer_u_asymptotic(a: f64, b: f64, x: f64) -> Result<(f64, f64)> {
    check_u_args(b, x)?;
    let c = a - b + 1.0;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut last = 1.0_f64;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let next = term * (a + kf) * (c + kf) / (-x * (kf + 1.0));
        if next == 0.0 {
            // terminating (polynomial) case: exact
            return Ok((sum * x.powf(-a), 0.0));
        }
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        last = term.abs();
    }
    Ok((sum * x.powf(-a), last / sum.abs()))
}

/// U(a, b, x) and U'(a, b, x) at a point far enough out for the asymptotic
/// series to be accurate. Returns (x0, U, U').
fn asymptotic_start(a: f64, b: f64, x: f64) -> Result<(f64, f64, f64)> {
    let mut x0 = x.max(U_CROSSOVER + 5.0);
    for _ in 0..64 {
        let (u, eu) = kummer_u_asymptotic(a, b, x0)?;
        // U' = -a U(a+1, b+1, x)
        let (up, eup) = kummer_u_asymptotic(a + 1.0, b + 1.0, x0)?;
        if eu <= ASYMPTOTIC_TOL && eup <= ASYMPTOTIC_TOL {
            return Ok((x0, u, -a * up));
        }
        x0 *= 1.5;
    }
    Err(KgoError::NonConvergence {
        function: "kummer_u (asymptotic start)",
        iterations: 64,
    })
}

/// Taylor step of x y'' + (b - x) y' - a y = 0 from c to c + t.
fn kummer_taylor_step(a: f64, b: f64, c: f64, y: f64, yp: f64, t: f64) -> Result<(f64, f64)> {
    let mut c0 = y;
    let mut c1 = yp;
    let mut val = y + yp * t;
    let mut der = yp;
    let mut tk = t; // t^k for the coefficient c_{k+1}
    let scale = y.abs().max(yp.abs() * t.abs());
    let mut small = 0;
    for k in 0..400 {
        let kf = k as f64;
        let c2 = ((a + kf) * c0 - (kf + 1.0) * (kf + b - c) * c1) / (c * (kf + 1.0) * (kf + 2.0));
        der += (kf + 2.0) * c2 * tk;
        tk *= t;
        let contrib = c2 * tk;
        val += contrib;
        if contrib.abs() <= 1e-18 * scale.max(val.abs()) {
            small += 1;
            if small >= 2 {
                return Ok((val, der));
            }
        } else {
            small = 0;
        }
        c0 = c1;
        c1 = c2;
    }
    Err(KgoError::NonConvergence {
        function: "kummer_u (Taylor continuation)",
        iterations: 400,
    })
}

/// U(a, b, x) obtained by starting from the asymptotic series at large x and
/// continuing inward along Kummer's equation. U is the recessive solution at
/// infinity, so inward integration is stable.
pub fn kummer_u_continued(a: f64, b: f64, x: f64) -> Result<f64> {
    check_u_args(b, x)?;
    let (mut c, mut y, mut yp) = asymptotic_start(a, b, x)?;
    while c > x {
        let h = (0.25 * c).min(2.0).min(c - x);
        let (ny, nyp) = kummer_taylor_step(a, b, c, y, yp, -h)?;
        c -= h;
        y = ny;
        yp = nyp;
    }
    Ok(y)
}

/// Tricomi's function U(a, b, x) for non-integer b and x > 0, together with
/// the route used.
pub fn kummer_u_with_branch(a: f64, b: f64, x: f64) -> Result<(f64, UBranch)> {
    check_u_args(b, x)?;
    if a == 0.0 {
        return Ok((1.0, UBranch::Trivial));
    }
    if x > U_CROSSOVER {
        let (v, err) = kummer_u_asymptotic(a, b, x)?;
        if err <= ASYMPTOTIC_TOL {
            return Ok((v, UBranch::Asymptotic));
        }
        return Ok((kummer_u_continued(a, b, x)?, UBranch::Continued));
    }
    let (v, cancel) = kummer_u_connection(a, b, x)?;
    if cancel <= MAX_CANCELLATION {
        return Ok((v, UBranch::Connection));
    }
    Ok((kummer_u_continued(a, b, x)?, UBranch::Continued))
}

/// Tricomi's confluent hypergeometric function U(a, b, x).
pub fn kummer_u(a: f64, b: f64, x: f64) -> Result<f64> {
    kummer_u_with_branch(a, b, x).map(|(v, _)| v)
}

/// Agreement of the two sides of the crossover for one (a, b).
#[derive(Clone, Debug, PartialEq)]
pub struct CrossoverReport {
    /// Largest relative disagreement over the sampled band.
    pub max_relative_gap: f64,
    /// Argument at which it occurred.
    pub at: f64,
    /// Band points skipped because the asymptotic series itself had not
    /// converged to 1e-12 there.
    pub skipped: usize,
    /// Set when the gap exceeds 1e-8.
    pub warning: bool,
}

/// Compares the small-x route (connection formula with continuation
/// fallback) against the asymptotic series on [25, 35].
pub fn u_crossover_check(a: f64, b: f64) -> Result<CrossoverReport> {
    let mut worst = (0.0_f64, U_CROSSOVER);
    let mut skipped = 0;
    for i in 0..=20 {
        let x = 25.0 + 0.5 * i as f64;
        let (outer, outer_err) = kummer_u_asymptotic(a, b, x)?;
        if outer_err > 1e-12 {
            skipped += 1;
            continue;
        }
        let inner = {
            let (v, cancel) = kummer_u_connection(a, b, x)?;
            if cancel <= MAX_CANCELLATION {
                v
            } else {
                kummer_u_continued(a, b, x)?
            }
        };
        let gap = ((inner - outer) / outer).abs();
        if gap > worst.0 {
            worst = (gap, x);
        }
    }
    Ok(CrossoverReport {
        max_relative_gap: worst.0,
        at: worst.1,
        skipped,
        warning: worst.0 > 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn m_trivial_cases() {
        assert_eq!(kummer_m(0.7, 1.3, 0.0).unwrap(), 1.0);
        for &x in &[0.1, 1.0, 5.0, 20.0] {
            assert_relative_eq!(
                kummer_m(1.7, 1.7, x).unwrap(),
                f64::exp(x),
                max_relative = 1e-14
            );
        }
        assert_relative_eq!(
            kummer_m(-1.0, 1.5, 2.0).unwrap(),
            -1.0 / 3.0,
            max_relative = 1e-15
        );
        assert!(kummer_m(1.0, -2.0, 1.0).is_err());
    }

    #[test]
    fn u_with_zero_a_is_one() {
        assert_eq!(kummer_u(0.0, 1.5, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn u_large_x_leading_term() {
        let v = kummer_u(1.0, 1.5, 50.0).unwrap();
        // reference from an independent arbitrary-precision evaluation
        assert_relative_eq!(v * 50.0, 0.990_285_964_717_319_2, max_relative = 1e-13);
        assert!((v * 50.0 - 1.0).abs() < 2.0 / 50.0);
    }

    #[test]
    fn continuation_agrees_with_connection_where_both_are_good() {
        for &(a, b, x) in &[
            (0.3, 1.5, 2.0),
            (-0.35, 2.5, 4.0),
            (1.2, 3.5, 8.0),
            (-1.85, 1.5, 1.0),
        ] {
            let (conn, cancel) = kummer_u_connection(a, b, x).unwrap();
            assert!(cancel < 1e3);
            let cont = kummer_u_continued(a, b, x).unwrap();
            assert_relative_eq!(conn, cont, max_relative = 1e-11);
        }
    }

    #[test]
    fn crossover_band_is_consistent() {
        for &(a, b) in &[(0.5, 1.5), (-1.1, 2.5), (2.3, 5.5), (-6.35, 11.5)] {
            let rep = u_crossover_check(a, b).unwrap();
            assert!(!rep.warning, "{a} {b}: {rep:?}");
        }
        // large indices: asymptotic series not yet usable in the band, so
        // check the continuation against both neighbours instead
        let (a, b) = (-6.35, 11.5);
        assert_eq!(u_crossover_check(a, b).unwrap().skipped, 21);
        let (conn, cancel) = kummer_u_connection(a, b, 3.0).unwrap();
        assert!(cancel < 1e3, "cancellation {cancel}");
        assert_relative_eq!(
            kummer_u_continued(a, b, 3.0).unwrap(),
            conn,
            max_relative = 1e-11
        );
        // arbitrary-precision reference
        assert_relative_eq!(
            kummer_u(a, b, 3.0).unwrap(),
            -109_303.569_507_363,
            max_relative = 1e-11
        );
        let (asym, err) = kummer_u_asymptotic(a, b, 200.0).unwrap();
        assert!(err < 1e-15);
        assert_relative_eq!(
            kummer_u_continued(a, b, 200.0).unwrap(),
            asym,
            max_relative = 1e-14
        );
    }

    #[test]
    fn u_matches_integral_representation() {
        // U(a, b, x) = (1/Γ(a)) ∫_0^∞ e^{−xt} t^{a−1} (1+t)^{b−a−1} dt
        let (a, b, x) = (1.0, 1.5, 2.0);
        let (ts, ws) = crate::quadrature::composite_gauss_legendre(0.0, 40.0, 80, 20);
        let integral: f64 = ts
            .iter()
            .zip(&ws)
            .map(|(t, w)| w * (-x * t).exp() * t.powf(a - 1.0) * (1.0 + t).powf(b - a - 1.0))
            .sum();
        let (conn, _) = kummer_u_connection(a, b, x).unwrap();
        assert_relative_eq!(
            conn,
            integral / crate::specfun::gamma(a).unwrap(),
            max_relative = 1e-12
        );
        assert_relative_eq!(kummer_u(a, b, x).unwrap(), conn, max_relative = 1e-14);
    }

    #[test]
    fn polynomial_u() {
        // U(-2, b, x) = x^2 - 2(b+1)x + b(b+1)
        let (b, x) = (1.5, 3.0);
        let exact = x * x - 2.0 * (b + 1.0) * x + b * (b + 1.0);
        assert_relative_eq!(kummer_u(-2.0, b, x).unwrap(), exact, max_relative = 1e-13);
        assert_relative_eq!(
            kummer_u(-2.0, b, 40.0).unwrap(),
            1600.0 - 200.0 + 3.75,
            max_relative = 1e-13
        );
    }

    proptest! {
        #[test]
        fn contiguous_relation(a in -4.0f64..4.0, b in 0.6f64..6.0, x in 0.0f64..15.0) {
            prop_assume!((b - b.round()).abs() > 1e-3);
            let m0 = kummer_m(a, b, x).unwrap();
            let mm = kummer_m(a - 1.0, b, x).unwrap();
            let mp = kummer_m(a + 1.0, b, x).unwrap();
            let lhs = (b - a) * mm + (2.0 * a - b + x) * m0 - a * mp;
            let scale = ((b - a) * mm).abs() + ((2.0 * a - b + x) * m0).abs() + (a * mp).abs();
            prop_assert!(lhs.abs() <= 1e-9 * scale.max(1e-300), "residual {lhs} scale {scale}");
        }
    }
}
