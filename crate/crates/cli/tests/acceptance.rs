//! Acceptance criteria, one PASS/FAIL line each. Criteria 1-10 read the
//! checks of `kgo verify all`; 11 reruns it and compares bytes.
//!
//! Each criterion selects checks by name prefix and also requires the check's
//! own tolerance to be no looser than the bound stated for the criterion.

use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn kgo(args: &[&str]) -> (Output, Duration) {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_kgo"))
        .args(args)
        .env_remove("KGO_TOLERANCE_PROFILE")
        .output()
        .expect("kgo runs");
    (out, t.elapsed())
}

struct Checks(Vec<(String, f64, f64, bool)>);

impl Checks {
    fn parse(report: &Value) -> Self {
        Self(
            report["checks"]
                .as_array()
                .expect("checks array")
                .iter()
                .map(|c| {
                    (
                        c["name"].as_str().unwrap().to_string(),
                        c["measured"].as_f64().unwrap_or(f64::NAN),
                        c["tolerance"].as_f64().unwrap(),
                        c["pass"].as_bool().unwrap(),
                    )
                })
                .collect(),
        )
    }

    /// All checks whose name starts with `prefix` pass with tolerance <= `bound`.
    /// Returns (ok, worst measured, count).
    fn require(&self, prefix: &str, bound: f64) -> (bool, f64, usize) {
        let hits: Vec<_> = self.0.iter().filter(|c| c.0.starts_with(prefix)).collect();
        let ok = !hits.is_empty() && hits.iter().all(|c| c.3 && c.2 <= bound && c.1 <= bound);
        let worst = hits.iter().map(|c| c.1).fold(0.0, f64::max);
        (ok, worst, hits.len())
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    parts: Vec<(String, bool, String)>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Self {
            id,
            title,
            parts: Vec::new(),
        }
    }

    fn check(&mut self, checks: &Checks, prefix: &str, bound: f64) -> &mut Self {
        let (ok, worst, n) = checks.require(prefix, bound);
        self.parts.push((
            prefix.to_string(),
            ok,
            format!("{n} check(s), worst {worst:.3e} <= {bound:.0e}"),
        ));
        self
    }

    fn fact(&mut self, label: &str, ok: bool, detail: String) -> &mut Self {
        self.parts.push((label.to_string(), ok, detail));
        self
    }

    fn passed(&self) -> bool {
        !self.parts.is_empty() && self.parts.iter().all(|p| p.1)
    }

    fn print(&self) {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {:>2}: {}", self.id, self.title);
        for (label, ok, detail) in &self.parts {
            let mark = if *ok { "ok  " } else { "FAIL" };
            println!("         {mark} {label}: {detail}");
        }
    }
}

fn main() -> ExitCode {
    let (first, _) = kgo(&["verify", "all"]);
    let report: Value = serde_json::from_slice(&first.stdout).expect("verify all emits JSON");
    let checks = Checks::parse(&report);
    let (spec_run, spec_time) = kgo(&["verify", "spectrum"]);

    let mut out = Vec::new();

    let mut c = Criterion::new(1, "spectrum reproduction");
    c.check(&checks, "spectrum: dense eigenvalues vs E", 1e-12)
        .check(&checks, "spectrum: E±(0,0) = ±mc² exactly", 0.0)
        .fact(
            "runtime of `verify spectrum`",
            spec_run.status.success() && spec_time < Duration::from_secs(5),
            format!("{:.2} s < 5 s", spec_time.as_secs_f64()),
        );
    out.push(c);

    let mut c = Criterion::new(2, "non-relativistic finite-difference oracle");
    c.check(&checks, "spectrum: FD radial eigenvalues", 1e-4)
        .check(&checks, "spectrum: FD observed convergence order", 0.05)
        .fact(
            "runtime",
            spec_time < Duration::from_secs(30),
            format!("{:.2} s < 30 s", spec_time.as_secs_f64()),
        );
    out.push(c);

    let mut c = Criterion::new(3, "SUSY algebra");
    for rel in [
        "{Q,Q+} = H_SUSY",
        "Q^2 = 0",
        "(Q+)^2 = 0",
        "[W,H_SUSY] = 0",
        "{Q,W} = 0",
    ] {
        c.check(&checks, &format!("algebra: SUSY relation {rel}"), 1e-14);
    }
    c.check(&checks, "algebra: H_SUSY eigenvalues vs ε²/2mc²", 1e-12);
    out.push(c);

    let mut c = Criterion::new(4, "Witten report (1, 1, 0, false)");
    for n_max in [10, 20, 40] {
        c.check(
            &checks,
            &format!(
                "witten: (dim ker Q, dim ker Q+, index, broken) = (1, 1, 0, false) vs (1, 1, 0, false), n_max = {n_max},"
            ),
            0.0,
        );
    }
    out.push(c);

    let mut c = Criterion::new(5, "Foldy-Wouthuysen transform");
    c.check(&checks, "fw: ‖U h U⁻¹ − diag(H_FW, −H_FW)‖", 1e-12)
        .check(&checks, "fw: ‖U τ₃ U† τ₃ − 1‖", 1e-13)
        .check(&checks, "fw: surd vs hyperbolic form of U", 1e-13);
    out.push(c);

    let mut c = Criterion::new(6, "indefinite orthonormality");
    c.check(
        &checks,
        "orthonormality: indefinite Gram matrix vs ±δ",
        1e-8,
    );
    out.push(c);

    let mut c = Criterion::new(7, "radial Green's function");
    c.check(
        &checks,
        "resolvent: G_l Whittaker form vs spectral sum, 81 cases",
        1e-6,
    )
    .check(&checks, "resolvent: residue of G_0 at ε_00", 1e-4);
    out.push(c);

    let mut c = Criterion::new(8, "KGO resolvent identity and contact ledger");
    c.check(
        &checks,
        "resolvent: ‖(h − z)G_closed(z) − 1‖, 20 z values",
        1e-10,
    )
    .check(
        &checks,
        "resolvent: G_oracle − G_bare − (τ₃ + iτ₂)/2mc² ⊗ 1",
        1e-10,
    )
    .check(&checks, "resolvent: ‖(h − z)G_bare − 1‖ vs", 1e-10);
    let ledger = report["results"]["suites"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|s| s["suite"] == "resolvent")
        .flat_map(|s| s["findings"].as_array().cloned().unwrap_or_default())
        .any(|f| {
            f["name"]
                .as_str()
                .is_some_and(|n| n.contains("contact term"))
        });
    c.fact(
        "contact-term ledger entry in `verify resolvent`",
        ledger,
        if ledger {
            "present".into()
        } else {
            "missing".into()
        },
    );
    out.push(c);

    let mut c = Criterion::new(9, "Green's-function forms agree");
    c.check(
        &checks,
        "resolvent: coefficient matrix vs e^ϑ-prefactor hyperbolic form, 50",
        1e-12,
    );
    out.push(c);

    let mut c = Criterion::new(10, "spectral symmetry");
    c.check(&checks, "spectrum: spectral symmetry E -> −E", 1e-12);
    out.push(c);

    let (second, _) = kgo(&["verify", "all"]);
    let mut c = Criterion::new(11, "determinism");
    c.fact(
        "byte-identical JSON",
        first.stdout == second.stdout && !first.stdout.is_empty(),
        format!("{} bytes", first.stdout.len()),
    )
    .fact(
        "exit code 0",
        first.status.code() == Some(0) && second.status.code() == Some(0),
        format!("{:?} / {:?}", first.status.code(), second.status.code()),
    );
    out.push(c);

    for c in &out {
        c.print();
    }
    let failed = out.iter().filter(|c| !c.passed()).count();
    println!(
        "acceptance: {} of {} criteria pass",
        out.len() - failed,
        out.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
