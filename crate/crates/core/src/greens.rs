//! Energy-dependent Green's function G(z) = (h − z)⁻¹ of the Klein-Gordon
//! oscillator.
//!
//! With ε(z) = z²/2mc² − mc²/2 and z̃ = z/2mc², each oscillator mode gives
//! (h − z)⁻¹ = (h + z)/(2mc²(ε_n − ε)), hence
//!
//! G(z) = C(z̃)·G_NR(ε) + (1/2mc²)[[1, 1], [−1, −1]]
//!
//! with C = (½+z̃, ½−z̃)ᵀ(½+z̃, z̃−½). The identity-proportional second term
//! (a contact term, δ³(r − r') in coordinates) is what H_NR G_NR = 1 + εG_NR
//! leaves behind; `bare_form` drops it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{KgoError, Result};
use crate::fv::{branch_energy, FvSpinor, KgoChannelMatrix, Representation};
use crate::oscillator::{greens_full, OscillatorParams, PartialWaveSum};
use crate::par::{self, Exec};

pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative distance below which z counts as sitting on a level.
pub const COLLISION_TOL: f64 = 1e-12;
/// Condition number above which a dense resolvent solve is flagged.
pub const CONDITION_LIMIT: f64 = 1e12;

/// z ↦ ε(z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyMap {
    pub z: Complex64,
    pub eps: Complex64,
    pub z_tilde: Complex64,
}

pub fn energy_map(z: Complex64, p: &OscillatorParams) -> Result<EnergyMap> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(KgoError::InvalidParameter(format!("z = {z} is not finite")));
    }
    let mc2 = p.rest_energy();
    let eps = z * z / (2.0 * mc2) - mc2 / 2.0;
    let shell = (eps.re / p.hbar_omega()).round();
    if shell >= 0.0 {
        let level = branch_energy(shell * p.hbar_omega(), p);
        for e in [level, -level] {
            if (z - e).norm() <= COLLISION_TOL * e.abs().max(1.0) {
                return Err(KgoError::SpectrumCollision {
                    z: z.to_string(),
                    energy: e,
                    shell: shell as u32,
                });
            }
        }
    }
    Ok(EnergyMap {
        z,
        eps,
        z_tilde: z / (2.0 * mc2),
    })
}

/// 2×2 structure of G(z) in Feshbach-Villars space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KgoResolvent {
    pub map: EnergyMap,
    /// Multiplies G_NR(ε).
    pub coeff_matrix: Mat2,
    /// Multiplies the identity; (1/2mc²)[[1, 1], [−1, −1]] = (τ₃ + iτ₂)/2mc².
    pub contact_matrix: [[f64; 2]; 2],
}

pub fn resolvent_matrix(z: Complex64, p: &OscillatorParams) -> Result<KgoResolvent> {
    let map = energy_map(z, p)?;
    let t = map.z_tilde;
    let (a, b) = (0.5 + t, 0.5 - t);
    let k = 1.0 / (2.0 * p.rest_energy());
    Ok(KgoResolvent {
        map,
        coeff_matrix: [[a * a, a * -b], [a * b, b * -b]],
        contact_matrix: [[k, k], [-k, -k]],
    })
}

impl KgoResolvent {
    /// The matrix multiplying G_NR(ε) without any contact term.
    pub fn bare_form(&self) -> Mat2 {
        self.coeff_matrix
    }

    fn contact(&self) -> Mat2 {
        self.contact_matrix.map(|row| row.map(Complex64::from))
    }
}

/// Which expression for G(z) to assemble on a channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// Coefficient matrix times G_NR plus the contact term: the exact resolvent.
    Closed,
    /// Coefficient matrix times G_NR only.
    Bare,
}

/// G(z) on a truncated channel from the closed 2×2 structure, with
/// G_NR(ε) = (H_NR − ε)⁻¹ taken from the diagonal channel.
pub fn channel_greens(
    z: Complex64,
    channel: &KgoChannelMatrix,
    form: Form,
) -> Result<DMatrix<Complex64>> {
    let res = resolvent_matrix(z, &channel.params)?;
    let d = channel.dim();
    let contact = match form {
        Form::Closed => res.contact(),
        Form::Bare => [[ZERO; 2]; 2],
    };
    let mut g = DMatrix::zeros(2 * d, 2 * d);
    for k in 0..d {
        let g_nr = 1.0 / (channel.a_block[(k, k)] - res.map.eps);
        for i in 0..2 {
            for j in 0..2 {
                g[(i * d + k, j * d + k)] = res.coeff_matrix[i][j] * g_nr + contact[i][j];
            }
        }
    }
    Ok(g)
}

/// (h − z)⁻¹ by dense LU: the oracle for [`channel_greens`].
pub fn channel_oracle(z: Complex64, channel: &KgoChannelMatrix) -> Result<DMatrix<Complex64>> {
    let n = 2 * channel.dim();
    let shifted = channel.h_complex() - DMatrix::identity(n, n) * z;
    shifted.try_inverse().ok_or_else(|| KgoError::Domain {
        function: "channel_oracle",
        detail: format!("h − z is singular at z = {z}"),
    })
}

/// Defects of G(z) on one channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolventDefects {
    /// ‖(h − z)G_closed − 1‖_F.
    pub closed_identity: f64,
    /// ‖(h − z)G_bare − 1‖_F.
    pub bare_identity: f64,
    /// ‖(G_oracle − G_bare) − contact ⊗ 1‖_F: zero when the missing piece
    /// is exactly the contact term.
    pub bare_gap_vs_contact: f64,
    /// ‖G_oracle − G_closed‖_F / ‖G_oracle‖_F.
    pub closed_vs_oracle: f64,
    /// ‖(h − z)(contact ⊗ 1)‖_F: what `bare_identity` must equal.
    pub contact_predicted: f64,
    /// ‖h G − z G‖_F for the exact G: equals ‖1‖_F = sqrt(dim), so the
    /// literal identity hG = zG never holds.
    pub literal_identity: f64,
}

pub fn resolvent_defects(z: Complex64, channel: &KgoChannelMatrix) -> Result<ResolventDefects> {
    let n = 2 * channel.dim();
    let id = DMatrix::<Complex64>::identity(n, n);
    let hz = channel.h_complex() - &id * z;
    let closed = channel_greens(z, channel, Form::Closed)?;
    let bare = channel_greens(z, channel, Form::Bare)?;
    let oracle = channel_oracle(z, channel)?;
    let contact = resolvent_matrix(z, &channel.params)?.contact();
    let d = channel.dim();
    let contact_full = DMatrix::from_fn(n, n, |i, j| {
        if i % d == j % d {
            contact[i / d][j / d]
        } else {
            ZERO
        }
    });
    Ok(ResolventDefects {
        closed_identity: (&hz * &closed - &id).norm(),
        bare_identity: (&hz * &bare - &id).norm(),
        contact_predicted: (&hz * &contact_full).norm(),
        bare_gap_vs_contact: (&oracle - &bare - contact_full).norm(),
        closed_vs_oracle: (&oracle - &closed).norm() / oracle.norm(),
        literal_identity: (channel.h_complex() * &closed - &closed * z).norm(),
    })
}

/// G(z)·source computed three ways on one channel.
#[derive(Clone, Debug)]
pub struct ResolventApplication {
    pub oracle: FvSpinor,
    pub closed: FvSpinor,
    pub bare: FvSpinor,
    /// 2-norm condition number of h − z.
    pub condition: f64,
    pub warning: bool,
}

/// Applies G(z) to a basis spinor supported on the modes of `channel`.
pub fn resolvent_apply(
    z: Complex64,
    channel: &KgoChannelMatrix,
    source: &FvSpinor,
) -> Result<ResolventApplication> {
    let Representation::Basis(modes) = &source.repr else {
        return Err(KgoError::RepresentationMismatch(
            "resolvent_apply needs a basis spinor".into(),
        ));
    };
    let d = channel.dim();
    let mu = modes.first().map_or(0, |q| q.mu);
    let mut v = nalgebra::DVector::<Complex64>::zeros(2 * d);
    let mut slots = Vec::with_capacity(modes.len());
    for (k, q) in modes.iter().enumerate() {
        if q.l != channel.l || q.n > channel.n_max || q.mu != mu {
            return Err(KgoError::RepresentationMismatch(format!(
                "mode (n={}, l={}, mu={}) is not in channel l={} n_max={}",
                q.n, q.l, q.mu, channel.l, channel.n_max
            )));
        }
        let n = q.n as usize;
        v[n] += source.upper[k];
        v[d + n] += source.lower[k];
        slots.push(n);
    }
    let n = 2 * d;
    let hz = channel.h_complex() - DMatrix::identity(n, n) * z;
    let sv = hz.clone().svd(false, false).singular_values;
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    let oracle = hz.lu().solve(&v).ok_or_else(|| KgoError::Domain {
        function: "resolvent_apply",
        detail: format!("h − z is singular at z = {z}"),
    })?;
    let closed = channel_greens(z, channel, Form::Closed)? * &v;
    let bare = channel_greens(z, channel, Form::Bare)? * &v;
    // back onto the source's own mode list
    let pack = |w: &nalgebra::DVector<Complex64>| FvSpinor {
        repr: source.repr.clone(),
        upper: slots.iter().map(|&s| w[s]).collect(),
        lower: slots.iter().map(|&s| w[d + s]).collect(),
    };
    Ok(ResolventApplication {
        oracle: pack(&oracle),
        closed: pack(&closed),
        bare: pack(&bare),
        condition,
        warning: condition > CONDITION_LIMIT,
    })
}

/// The hyperbolic parametrisation of the coefficient matrix,
/// tanh ϑ = ε/(ε + mc²), for real z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperbolicForm {
    pub z: f64,
    pub eps: f64,
    pub theta: f64,
    /// e^ϑ [[ch², ch·sh], [−ch·sh, −sh²]] with ch = cosh ϑ/2, sh = sinh ϑ/2.
    pub corrected: [[f64; 2]; 2],
    /// The same matrix with prefactor 1/(ch − sh) = e^{ϑ/2}.
    pub printed: [[f64; 2]; 2],
    /// Coefficient matrix of [`resolvent_matrix`] (real for real z).
    pub coeff: [[f64; 2]; 2],
    /// max |corrected − coeff| / max |coeff|.
    pub corrected_gap: f64,
    /// max |printed − coeff| / max |coeff|.
    pub printed_gap: f64,
}

impl HyperbolicForm {
    /// Both forms agree to `tol` (relative).
    pub fn agrees(&self, tol: f64) -> bool {
        self.corrected_gap <= tol
    }
}

pub fn hyperbolic_form(z: f64, p: &OscillatorParams) -> Result<HyperbolicForm> {
    let res = resolvent_matrix(Complex64::from(z), p)?;
    let mc2 = p.rest_energy();
    let eps = res.map.eps.re;
    if eps.is_nan() || eps <= -mc2 / 2.0 {
        return Err(KgoError::Domain {
            function: "hyperbolic_form",
            detail: format!("ε = {eps} must exceed −mc²/2 for tanh ϑ = ε/(ε + mc²)"),
        });
    }
    // atanh(ε/(ε + mc²)) without the cancellation near ε → ∞
    let theta = 0.5 * (2.0 * eps / mc2).ln_1p();
    let (ch, sh) = ((theta / 2.0).cosh(), (theta / 2.0).sinh());
    let base = [[ch * ch, ch * sh], [-ch * sh, -sh * sh]];
    let scale = |f: f64| base.map(|row| row.map(|x| f * x));
    let corrected = scale(theta.exp());
    let printed = scale(1.0 / (ch - sh));
    let coeff = res.coeff_matrix.map(|row| row.map(|c| c.re));
    let norm = coeff.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
    let gap = |m: &[[f64; 2]; 2]| {
        m.iter()
            .flatten()
            .zip(coeff.iter().flatten())
            .fold(0.0_f64, |g, (a, b)| g.max((a - b).abs()))
            / norm
    };
    Ok(HyperbolicForm {
        z,
        eps,
        theta,
        corrected_gap: gap(&corrected),
        printed_gap: gap(&printed),
        corrected,
        printed,
        coeff,
    })
}

/// A maximal run of scanned real z on which the two forms agree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgreementInterval {
    pub from: f64,
    pub to: f64,
    pub samples: usize,
}

/// Scans `samples` points of [z_min, z_max] (skipping spectrum collisions and
/// points outside the parametrisation) and groups agreeing points into runs.
pub fn hyperbolic_agreement(
    p: &OscillatorParams,
    z_min: f64,
    z_max: f64,
    samples: usize,
    tol: f64,
) -> Vec<AgreementInterval> {
    let mut out: Vec<AgreementInterval> = Vec::new();
    let mut open = false;
    for k in 0..samples {
        let z = z_min + (z_max - z_min) * k as f64 / (samples - 1).max(1) as f64;
        let ok = hyperbolic_form(z, p).map(|h| h.agrees(tol));
        match ok {
            Ok(true) => {
                if open {
                    let last = out.last_mut().expect("open run");
                    last.to = z;
                    last.samples += 1;
                } else {
                    out.push(AgreementInterval {
                        from: z,
                        to: z,
                        samples: 1,
                    });
                    open = true;
                }
            }
            Ok(false) | Err(KgoError::Domain { .. }) => open = false,
            // collisions do not interrupt a run
            Err(_) => {}
        }
    }
    out
}

/// G(z; r, r') as a 2×2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateGreens {
    pub map: EnergyMap,
    pub g_nr: PartialWaveSum,
    /// C(z̃)·G_NR(r, r', ε); the contact term vanishes for r ≠ r', so this is
    /// both the exact kernel and the coefficient form.
    pub matrix: Mat2,
}

/// Coordinate representation for r ≠ r'. Needs real ε, i.e. z real or purely
/// imaginary.
pub fn greens_coordinate(
    z: Complex64,
    p: &OscillatorParams,
    r_vec: [f64; 3],
    rp_vec: [f64; 3],
    l_max: u32,
) -> Result<CoordinateGreens> {
    let res = resolvent_matrix(z, p)?;
    if res.map.eps.im.abs() > 1e-14 * res.map.eps.norm().max(1.0) {
        return Err(KgoError::Unsupported(format!(
            "coordinate kernel needs real ε; z = {z} maps to ε = {}",
            res.map.eps
        )));
    }
    let g_nr = greens_full(p, res.map.eps.re, r_vec, rp_vec, l_max)?;
    let matrix = res.coeff_matrix.map(|row| row.map(|c| c * g_nr.value));
    Ok(CoordinateGreens {
        map: res.map,
        g_nr,
        matrix,
    })
}

/// Real-axis pole scan of the closed form on a set of channels.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleScan {
    /// Located singularities, ascending.
    pub poles: Vec<f64>,
    /// Predicted levels inside the window, ascending.
    pub predicted: Vec<f64>,
    /// Largest distance from a located pole to its nearest predicted level.
    pub max_offset: f64,
    /// Predicted levels with no located pole.
    pub missed: Vec<f64>,
    /// Located poles further than 1e-8 from every level.
    pub spurious: Vec<f64>,
}

/// Brackets sign changes of φ(z) = vᵀG_closed(z)v (generic positive v) on a
/// uniform grid, bisects each, and keeps those where |φ| blows up.
pub fn pole_scan(
    exec: Exec,
    channels: &[KgoChannelMatrix],
    z_min: f64,
    z_max: f64,
    grid_points: usize,
) -> Result<PoleScan> {
    let per = par::try_map(exec, channels, |ch| {
        scan_channel(ch, z_min, z_max, grid_points)
    })?;
    let mut poles: Vec<f64> = per.iter().flat_map(|(p, _)| p.iter().copied()).collect();
    let mut predicted: Vec<f64> = per.iter().flat_map(|(_, q)| q.iter().copied()).collect();
    poles.sort_by(f64::total_cmp);
    predicted.sort_by(f64::total_cmp);
    let nearest = |x: f64, set: &[f64]| {
        set.iter()
            .map(|y| (x - y).abs())
            .fold(f64::INFINITY, f64::min)
    };
    let max_offset = poles
        .iter()
        .map(|&x| nearest(x, &predicted))
        .fold(0.0, f64::max);
    Ok(PoleScan {
        missed: predicted
            .iter()
            .copied()
            .filter(|&e| nearest(e, &poles) > 1e-8)
            .collect(),
        spurious: poles
            .iter()
            .copied()
            .filter(|&x| nearest(x, &predicted) > 1e-8)
            .collect(),
        max_offset,
        poles,
        predicted,
    })
}

fn scan_channel(
    ch: &KgoChannelMatrix,
    z_min: f64,
    z_max: f64,
    grid_points: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = ch.dim();
    // fixed, generic weights
    let v: Vec<f64> = (0..2 * d)
        .map(|k| 1.0 + 0.37 * ((k * 7919) % 13) as f64 / 13.0)
        .collect();
    let mc2 = ch.params.rest_energy();
    let phi = |z: f64| -> Option<f64> {
        let res = resolvent_matrix(Complex64::from(z), &ch.params).ok()?;
        let eps = res.map.eps.re;
        let c = res.coeff_matrix.map(|row| row.map(|x| x.re));
        // vᵀGv mode by mode: G is block-diagonal over modes
        let s = (0..d)
            .map(|k| {
                let (a, b) = (v[k], v[d + k]);
                let quad = c[0][0] * a * a + (c[0][1] + c[1][0]) * a * b + c[1][1] * b * b;
                quad / (ch.a_block[(k, k)] - eps) + (a * a - b * b) / (2.0 * mc2)
            })
            .sum();
        Some(s)
    };
    let zs: Vec<f64> = (0..grid_points)
        .map(|k| z_min + (z_max - z_min) * k as f64 / (grid_points - 1) as f64)
        .collect();
    let vals: Vec<Option<f64>> = zs.iter().map(|&z| phi(z)).collect();
    let mut poles = Vec::new();
    for k in 0..grid_points - 1 {
        let (Some(fa), Some(fb)) = (vals[k], vals[k + 1]) else {
            // a grid point sits on a level; it is the pole
            if vals[k].is_none() {
                poles.push(zs[k]);
            }
            continue;
        };
        if fa.signum() == fb.signum() {
            continue;
        }
        let (mut a, mut b, mut sa) = (zs[k], zs[k + 1], fa.signum());
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            match phi(m) {
                Some(fm) if fm.signum() == sa => {
                    a = m;
                    sa = fm.signum();
                }
                Some(_) => b = m,
                None => {
                    a = m;
                    b = m;
                    break;
                }
            }
        }
        let m = 0.5 * (a + b);
        // near a pole |φ| ~ |residue|/|z − E| is huge; near a zero it is tiny
        let size = [a, b]
            .iter()
            .filter_map(|&x| phi(x))
            .fold(0.0_f64, |s, f| s.max(f.abs()));
        if phi(m).is_none() || size > 1e8 {
            poles.push(m);
        }
    }
    let predicted = ch
        .predicted_levels()
        .into_iter()
        .filter(|&e| e >= z_min && e <= z_max)
        .collect();
    Ok((poles, predicted))
}
