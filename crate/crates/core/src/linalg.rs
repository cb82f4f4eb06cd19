//! Small dense and tridiagonal helpers.

use crate::error::{KgoError, Result};

/// Real symmetric tridiagonal matrix: `diag` of length n, `off` of length n-1.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(KgoError::InvalidParameter(format!(
                "tridiagonal shape: diag {} off {}",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let denom = if q == 0.0 {
                f64::EPSILON * (self.off[i - 1].abs() + 1.0)
            } else {
                q
            };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k` smallest eigenvalues, ascending, by bisection.
    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.len() {
            return Err(KgoError::InvalidParameter(format!(
                "requested {k} eigenvalues of a {}x{} matrix",
                self.len(),
                self.len()
            )));
        }
        let (glo, ghi) = self.gershgorin();
        let mut out = Vec::with_capacity(k);
        for idx in 0..k {
            // find x with count_below(x) == idx at lo and > idx at hi
            let (mut lo, mut hi) = (glo, ghi);
            let mut iter = 0;
            while hi - lo > 2.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if self.count_below(mid) > idx {
                    hi = mid;
                } else {
                    lo = mid;
                }
                iter += 1;
                if iter > 2000 {
                    return Err(KgoError::NonConvergence {
                        function: "tridiagonal bisection",
                        iterations: iter,
                    });
                }
            }
            out.push(0.5 * (lo + hi));
        }
        Ok(out)
    }

    /// y = T x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Solves (T - shift) x = rhs by the Thomas algorithm.
    pub fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut b = self.diag[0] - shift;
        if b == 0.0 {
            return Err(KgoError::Domain {
                function: "tridiagonal solve",
                detail: "zero pivot".into(),
            });
        }
        if n > 1 {
            c[0] = self.off[0] / b;
        }
        d[0] = rhs[0] / b;
        for i in 1..n {
            b = self.diag[i] - shift - self.off[i - 1] * c[i - 1];
            if b == 0.0 {
                return Err(KgoError::Domain {
                    function: "tridiagonal solve",
                    detail: format!("zero pivot at row {i}"),
                });
            }
            if i + 1 < n {
                c[i] = self.off[i] / b;
            }
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / b;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }
}
