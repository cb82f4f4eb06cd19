//! The four subcommands. Each returns its JSON payload, a CSV table and the
//! checks that decide the exit code.

use num_complex::Complex64;
use serde::Serialize;

use kgo_core::fv::{branch_energy, internal_vector, Sign};
use kgo_core::greens::greens_coordinate;
use kgo_core::oscillator::{epsilon, psi, OscillatorParams, QuantumNumbers};
use kgo_core::verify::{self, Check, Finding, Suite, VerifyConfig};
use kgo_core::Result;

use crate::output::{checks_table, float, Table};

pub struct Outcome {
    pub results: serde_json::Value,
    pub table: Table,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
struct SpectrumRow {
    n: u32,
    l: u32,
    /// Magnetic multiplicity 2l+1 of the (n, l) row.
    degeneracy: u32,
    epsilon: f64,
    e_plus: f64,
    e_minus: f64,
}

pub fn spectrum(p: &OscillatorParams, max_shell: u32) -> Result<Outcome> {
    let mut rows = Vec::new();
    for shell in 0..=max_shell {
        for n in 0..=shell / 2 {
            let l = shell - 2 * n;
            let eps = epsilon(QuantumNumbers::new(n, l, 0)?, p);
            let e = branch_energy(eps, p);
            rows.push(SpectrumRow {
                n,
                l,
                degeneracy: 2 * l + 1,
                epsilon: eps,
                e_plus: e,
                e_minus: -e,
            });
        }
    }
    rows.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon).then(a.l.cmp(&b.l)));

    let expected_rows: u64 = (0..=max_shell as u64).map(|s| s / 2 + 1).sum();
    let states: u64 = rows.iter().map(|r| r.degeneracy as u64).sum();
    let expected_states: u64 = (0..=max_shell as u64).map(|s| (s + 1) * (s + 2) / 2).sum();
    let ground = &rows[0];
    let mc2 = p.rest_energy();
    let checks = vec![
        Check::at_most(
            "row count",
            rows.len().abs_diff(expected_rows as usize) as f64,
            0.0,
        ),
        Check::at_most("state count", states.abs_diff(expected_states) as f64, 0.0),
        Check::at_most(
            "ground level equals ±mc²",
            (ground.e_plus - mc2)
                .abs()
                .max((ground.e_minus + mc2).abs()),
            0.0,
        ),
    ];

    let table = Table {
        header: vec!["n", "l", "degeneracy", "epsilon", "e_plus", "e_minus"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.l.to_string(),
                    r.degeneracy.to_string(),
                    float(r.epsilon),
                    float(r.e_plus),
                    float(r.e_minus),
                ]
            })
            .collect(),
    };
    Ok(Outcome {
        results: serde_json::json!({ "max_shell": max_shell, "rows": rows }),
        table,
        checks,
    })
}

#[derive(Serialize)]
struct ComplexValue {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct StateResult {
    n: u32,
    l: u32,
    mu: i32,
    sign: Sign,
    r: f64,
    theta: f64,
    phi: f64,
    epsilon: f64,
    energy: f64,
    /// (cosh ϑ/2, −sinh ϑ/2) or (−sinh ϑ/2, cosh ϑ/2).
    internal: [f64; 2],
    psi: ComplexValue,
    upper: ComplexValue,
    lower: ComplexValue,
}

pub struct StateArgs {
    pub n: u32,
    pub l: u32,
    pub mu: i32,
    pub sign: Sign,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

pub fn state(p: &OscillatorParams, a: &StateArgs) -> Result<Outcome> {
    if !(a.r >= 0.0 && a.r.is_finite() && a.theta.is_finite() && a.phi.is_finite()) {
        return Err(kgo_core::KgoError::InvalidParameter(format!(
            "point (r, θ, φ) = ({}, {}, {}) needs finite angles and r >= 0",
            a.r, a.theta, a.phi
        )));
    }
    let q = QuantumNumbers::new(a.n, a.l, a.mu)?;
    let eps = epsilon(q, p);
    let iv = internal_vector(eps, a.sign, p);
    let (st, ct) = a.theta.sin_cos();
    let (sp, cp) = a.phi.sin_cos();
    let value = psi(q, p, [a.r * st * cp, a.r * st * sp, a.r * ct]);
    let res = StateResult {
        n: a.n,
        l: a.l,
        mu: a.mu,
        sign: a.sign,
        r: a.r,
        theta: a.theta,
        phi: a.phi,
        epsilon: eps,
        energy: a.sign.value() * branch_energy(eps, p),
        internal: iv,
        psi: value.into(),
        upper: (value * iv[0]).into(),
        lower: (value * iv[1]).into(),
    };
    let checks = vec![Check::at_most(
        "internal indefinite norm",
        (iv[0] * iv[0] - iv[1] * iv[1] - a.sign.value()).abs(),
        1e-12,
    )];
    let table = Table {
        header: vec![
            "n",
            "l",
            "mu",
            "sign",
            "epsilon",
            "energy",
            "internal_upper",
            "internal_lower",
            "upper_re",
            "upper_im",
            "lower_re",
            "lower_im",
        ],
        rows: vec![vec![
            a.n.to_string(),
            a.l.to_string(),
            a.mu.to_string(),
            match a.sign {
                Sign::Plus => "plus".into(),
                Sign::Minus => "minus".into(),
            },
            float(res.epsilon),
            float(res.energy),
            float(iv[0]),
            float(iv[1]),
            float(res.upper.re),
            float(res.upper.im),
            float(res.lower.re),
            float(res.lower.im),
        ]],
    };
    Ok(Outcome {
        results: serde_json::to_value(&res).expect("plain data"),
        table,
        checks,
    })
}

pub struct GreensArgs {
    pub z: Complex64,
    pub r: f64,
    pub rp: f64,
    /// Angle between r and r' in radians.
    pub angle: f64,
    pub l_max: u32,
}

#[derive(Serialize)]
struct GreensResult {
    z: ComplexValue,
    epsilon: ComplexValue,
    z_tilde: ComplexValue,
    r: f64,
    rp: f64,
    angle: f64,
    l_max: u32,
    g_nr: f64,
    remainder: f64,
    truncation_warning: bool,
    matrix: [[ComplexValue; 2]; 2],
}

pub fn greens(p: &OscillatorParams, a: &GreensArgs) -> Result<Outcome> {
    let r_vec = [0.0, 0.0, a.r];
    let rp_vec = [a.rp * a.angle.sin(), 0.0, a.rp * a.angle.cos()];
    let g = greens_coordinate(a.z, p, r_vec, rp_vec, a.l_max)?;
    if g.g_nr.warning {
        eprintln!(
            "warning: partial-wave remainder {:e} exceeds 1e-6 of |G_NR| = {:e}; raise --l-max",
            g.g_nr.remainder,
            g.g_nr.value.abs()
        );
    }
    let m = g.matrix;
    let res = GreensResult {
        z: a.z.into(),
        epsilon: g.map.eps.into(),
        z_tilde: g.map.z_tilde.into(),
        r: a.r,
        rp: a.rp,
        angle: a.angle,
        l_max: a.l_max,
        g_nr: g.g_nr.value,
        remainder: g.g_nr.remainder,
        truncation_warning: g.g_nr.warning,
        matrix: m.map(|row| row.map(ComplexValue::from)),
    };
    // the coefficient matrix C(z̃) is a dyad, so the kernel is rank one
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>();
    let checks = vec![Check::at_most(
        "rank-one kernel",
        if scale > 0.0 { det.norm() / scale } else { 0.0 },
        1e-12,
    )];
    let mut rows = Vec::new();
    for (i, row) in m.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            rows.push(vec![
                (i + 1).to_string(),
                (j + 1).to_string(),
                float(c.re),
                float(c.im),
            ]);
        }
    }
    Ok(Outcome {
        results: serde_json::to_value(&res).expect("plain data"),
        table: Table {
            header: vec!["row", "col", "re", "im"],
            rows,
        },
        checks,
    })
}

#[derive(Serialize)]
struct SuiteResult {
    suite: &'static str,
    passed: bool,
    checks: usize,
    findings: Vec<Finding>,
}

pub fn verify(cfg: &VerifyConfig, suite: Suite) -> Result<Outcome> {
    let reports = verify::run(suite, cfg)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut suites = Vec::new();
    for rep in reports {
        let name = rep.suite.name();
        for c in &rep.checks {
            let mut prefixed = c.clone();
            prefixed.name = format!("{name}: {}", c.name);
            checks.push(prefixed);
        }
        rows.extend(checks_table(&rep.checks).rows.into_iter().map(|mut r| {
            r.insert(0, name.to_string());
            r
        }));
        suites.push(SuiteResult {
            suite: name,
            passed: rep.passed(),
            checks: rep.checks.len(),
            findings: rep.findings,
        });
    }
    Ok(Outcome {
        results: serde_json::json!({ "suites": suites }),
        table: Table {
            header: vec!["suite", "name", "measured", "tolerance", "pass"],
            rows,
        },
        checks,
    })
}
