//! Supersymmetric structure and Foldy-Wouthuysen diagonalisation of a channel.
//!
//! Q = (2mc²)^{-1/2} [[0, A], [0, 0]], W = τ₃ and
//! H_SUSY = (M² − h²)/2mc² = A²/2mc² ⊗ 1 satisfy the N = 2 algebra.
//! All operator functions are taken mode by mode in the oscillator
//! eigenbasis, where every block is diagonal.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{KgoError, Result};
use crate::fv::{branch_energy, build_channel, channel_from, KgoChannelMatrix};
use crate::oscillator::{epsilon, OscillatorParams, QuantumNumbers, TruncatedChannel};
use crate::par::{self, Exec};

/// Relative singular-value threshold for kernel counting.
pub const KERNEL_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SusyOperators {
    pub q: DMatrix<f64>,
    pub q_dag: DMatrix<f64>,
    pub h_susy: DMatrix<f64>,
    pub w: DMatrix<f64>,
}

pub fn build_susy(channel: &KgoChannelMatrix) -> SusyOperators {
    let d = channel.dim();
    let mc2 = channel.params.rest_energy();
    let mut q = DMatrix::zeros(2 * d, 2 * d);
    q.view_mut((0, d), (d, d))
        .copy_from(&(&channel.a_block / (2.0 * mc2).sqrt()));
    let mut m2 = DMatrix::zeros(2 * d, 2 * d);
    let msq = &channel.m_block * &channel.m_block;
    m2.view_mut((0, 0), (d, d)).copy_from(&msq);
    m2.view_mut((d, d), (d, d)).copy_from(&msq);
    let h_susy = (m2 - &channel.h * &channel.h) / (2.0 * mc2);
    SusyOperators {
        q_dag: q.transpose(),
        q,
        h_susy,
        w: channel.tau3(),
    }
}

/// One algebra relation and its measured defect.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraDefect {
    pub relation: &'static str,
    /// Frobenius norm of the defect.
    pub defect: f64,
    /// Frobenius norm of the operators involved, for relative comparison.
    pub scale: f64,
}

impl SusyOperators {
    /// {Q,Q†} = H_SUSY, Q² = 0, Q†² = 0, [W, H_SUSY] = 0, {Q, W} = 0.
    pub fn algebra_defects(&self) -> Vec<AlgebraDefect> {
        let (q, qd, h, w) = (&self.q, &self.q_dag, &self.h_susy, &self.w);
        let qn = q.norm();
        let entry = |relation, m: DMatrix<f64>, scale: f64| AlgebraDefect {
            relation,
            defect: m.norm(),
            scale: scale.max(f64::MIN_POSITIVE),
        };
        vec![
            entry("{Q,Q+} = H_SUSY", q * qd + qd * q - h, h.norm()),
            entry("Q^2 = 0", q * q, qn * qn),
            entry("(Q+)^2 = 0", qd * qd, qn * qn),
            entry("[W,H_SUSY] = 0", w * h - h * w, h.norm()),
            entry("{Q,W} = 0", q * w + w * q, qn),
        ]
    }

    /// Eigenvalues of H_SUSY, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.h_susy.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Kernel dimensions of the supercharges and the Witten index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WittenIndexReport {
    /// dim ker Q on the W = −1 sector.
    pub dim_ker_q: u64,
    /// dim ker Q† on the W = +1 sector.
    pub dim_ker_q_dag: u64,
    pub index: i64,
    pub susy_broken: bool,
    /// Modes spanning ker Q (each carries its 2l+1 multiplicity).
    pub zero_modes: Vec<QuantumNumbers>,
    pub largest_singular_value: f64,
    /// Smallest singular value above the threshold.
    pub smallest_nonzero: f64,
    pub threshold: f64,
}

/// Witten report for channels l = 0..=l_max truncated at n_max.
pub fn witten_report(p: &OscillatorParams, n_max: u32, l_max: u32) -> Result<WittenIndexReport> {
    witten_report_with(Exec::default(), p, n_max, l_max, 0.0)
}

/// [`witten_report`] with an execution strategy and an artificial shift of
/// H_NR (shift = ħω removes the zero modes).
pub fn witten_report_with(
    exec: Exec,
    p: &OscillatorParams,
    n_max: u32,
    l_max: u32,
    shift: f64,
) -> Result<WittenIndexReport> {
    let ls: Vec<u32> = (0..=l_max).collect();
    // per channel: singular values and right-singular vectors of both sector maps
    let per = par::map(exec, &ls, |&l| {
        let ch = channel_from(&TruncatedChannel::shifted(l, n_max, *p, shift));
        let ops = build_susy(&ch);
        let d = ch.dim();
        let q_minus = ops.q.view((0, d), (d, d)).clone_owned();
        let qd_plus = ops.q_dag.view((d, 0), (d, d)).clone_owned();
        (l, sector_svd(q_minus), sector_svd(qd_plus))
    });
    let largest = per
        .iter()
        .flat_map(|(_, a, b)| a.0.iter().chain(&b.0))
        .fold(0.0_f64, |m, &s| m.max(s));
    let threshold = KERNEL_THRESHOLD * largest;
    let mut dim_ker_q = 0;
    let mut dim_ker_q_dag = 0;
    let mut zero_modes = Vec::new();
    let mut smallest_nonzero = f64::INFINITY;
    for (l, (sq, vq), (sd, _)) in &per {
        let mult = (2 * l + 1) as u64;
        for (k, &s) in sq.iter().enumerate() {
            check_ambiguity(s, threshold)?;
            if s <= threshold {
                dim_ker_q += mult;
                // the kernel vector is a unit vector in the diagonal basis
                let n = vq.row(k).transpose().iamax();
                for mu in -(*l as i32)..=(*l as i32) {
                    zero_modes.push(QuantumNumbers::new(n as u32, *l, mu)?);
                }
            } else {
                smallest_nonzero = smallest_nonzero.min(s);
            }
        }
        for &s in sd {
            check_ambiguity(s, threshold)?;
            if s <= threshold {
                dim_ker_q_dag += mult;
            } else {
                smallest_nonzero = smallest_nonzero.min(s);
            }
        }
    }
    Ok(WittenIndexReport {
        dim_ker_q,
        dim_ker_q_dag,
        index: dim_ker_q as i64 - dim_ker_q_dag as i64,
        susy_broken: dim_ker_q + dim_ker_q_dag == 0,
        zero_modes,
        largest_singular_value: largest,
        smallest_nonzero,
        threshold,
    })
}

fn sector_svd(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    (svd.singular_values.iter().copied().collect(), v_t)
}

fn check_ambiguity(s: f64, threshold: f64) -> Result<()> {
    if s > threshold / 10.0 && s < threshold * 10.0 {
        Err(KgoError::ThresholdAmbiguity {
            value: s,
            threshold,
        })
    } else {
        Ok(())
    }
}

/// Pseudo-unitary Foldy-Wouthuysen transform of one channel.
#[derive(Clone, Debug, PartialEq)]
pub struct FwTransform {
    /// U from the surd form (1/√2)[[√(M/H+1), √(M/H−1)], [√(M/H−1), √(M/H+1)]].
    pub u: DMatrix<f64>,
    /// τ₃ U† τ₃.
    pub u_inv: DMatrix<f64>,
    /// U h U⁻¹.
    pub h_fw: DMatrix<f64>,
    /// U from the hyperbolic form [[cosh Θ/2, sinh Θ/2], [sinh Θ/2, cosh Θ/2]],
    /// tanh Θ = A/M.
    pub u_hyperbolic: DMatrix<f64>,
    /// H_FW = √(M² − A²) per mode.
    pub h_fw_diag: Vec<f64>,
    tau3: DMatrix<f64>,
    h: DMatrix<f64>,
}

pub fn fw_transform(channel: &KgoChannelMatrix) -> FwTransform {
    let d = channel.dim();
    let mut u = DMatrix::zeros(2 * d, 2 * d);
    let mut u_hyp = DMatrix::zeros(2 * d, 2 * d);
    let mut h_fw_diag = Vec::with_capacity(d);
    for k in 0..d {
        let (m, a) = (channel.m_block[(k, k)], channel.a_block[(k, k)]);
        let hfw = ((m - a) * (m + a)).sqrt();
        h_fw_diag.push(hfw);
        let ratio = m / hfw;
        let c = ((ratio + 1.0) / 2.0).sqrt();
        let s = ((ratio - 1.0).max(0.0) / 2.0).sqrt();
        let theta = (a / m).atanh();
        let (ch, sh) = ((theta / 2.0).cosh(), (theta / 2.0).sinh());
        for (mat, c, s) in [(&mut u, c, s), (&mut u_hyp, ch, sh)] {
            mat[(k, k)] = c;
            mat[(d + k, d + k)] = c;
            mat[(k, d + k)] = s;
            mat[(d + k, k)] = s;
        }
    }
    let tau3 = channel.tau3();
    let u_inv = &tau3 * u.transpose() * &tau3;
    let h_fw = &u * &channel.h * &u_inv;
    FwTransform {
        u,
        u_inv,
        h_fw,
        u_hyperbolic: u_hyp,
        h_fw_diag,
        tau3,
        h: channel.h.clone(),
    }
}

impl FwTransform {
    /// ‖U h U⁻¹ − diag(H_FW, −H_FW)‖_F.
    pub fn block_diagonal_defect(&self) -> f64 {
        let d = self.h_fw_diag.len();
        let target = DMatrix::from_fn(2 * d, 2 * d, |i, j| match (i == j, i < d) {
            (true, true) => self.h_fw_diag[i],
            (true, false) => -self.h_fw_diag[i - d],
            _ => 0.0,
        });
        (&self.h_fw - target).norm()
    }

    /// ‖U τ₃ U† τ₃ − 1‖_F.
    pub fn pseudo_unitarity_defect(&self) -> f64 {
        let n = self.u.nrows();
        (&self.u * &self.tau3 * self.u.transpose() * &self.tau3 - DMatrix::identity(n, n)).norm()
    }

    /// ‖U_surd − U_hyperbolic‖_F.
    pub fn form_gap(&self) -> f64 {
        (&self.u - &self.u_hyperbolic).norm()
    }

    /// ‖U⁻¹ h_FW U − h‖_F: the transform can be undone.
    pub fn round_trip_defect(&self) -> f64 {
        (&self.u_inv * &self.h_fw * &self.u - &self.h).norm()
    }
}

/// H_FW eigenvalue mc² sqrt(1 + 2ε_{nl}/mc²) for a mode.
pub fn h_fw_values(q: QuantumNumbers, p: &OscillatorParams) -> f64 {
    branch_energy(epsilon(q, p), p)
}

/// Convenience: operators for channel l of the unshifted oscillator.
pub fn susy_channel(l: u32, n_max: u32, p: &OscillatorParams) -> SusyOperators {
    build_susy(&build_channel(l, n_max, p))
}
