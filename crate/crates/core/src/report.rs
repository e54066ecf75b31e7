//! Verdicts, gap reports, and deterministic serialization.
//!
//! Every inequality check in the crate produces a [`GapReport`] with the
//! same semantics: `gap = lhs - rhs`, and the check holds when the gap is
//! not below `-tolerance`. Reports serialize to JSON lines and to CSV with
//! a fixed column set; identical inputs produce byte-identical files.

use crate::{CMatrix, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

/// Outcome of a single inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `gap > tolerance`: strict inequality.
    Holds,
    /// `|gap| <= tolerance`: equality within tolerance.
    Equality,
    /// `gap < -tolerance`: the inequality fails.
    Violated,
}

impl Verdict {
    /// Classify a gap against a tolerance.
    pub fn assess(gap: f64, tolerance: f64) -> Self {
        if gap.abs() <= tolerance {
            Verdict::Equality
        } else if gap >= -tolerance {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }

    /// True unless the check is violated.
    pub fn passed(self) -> bool {
        !matches!(self, Verdict::Violated)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::Equality => "equality",
            Verdict::Violated => "violated",
        };
        f.write_str(s)
    }
}

/// One checked inequality: `lhs >= rhs` up to `tolerance`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapReport {
    /// Which check produced this report.
    pub name: String,
    /// Label of the catalog function involved ("-" when none).
    pub f_label: String,
    /// Hilbert space dimension ("0" for scalar-only checks).
    pub dim: usize,
    /// Seed of the trial that produced the inputs, when sampled.
    pub seed: Option<u64>,
    /// Left-hand side.
    pub lhs: f64,
    /// Right-hand side.
    pub rhs: f64,
    /// `lhs - rhs`.
    pub gap: f64,
    /// Slack used to classify the gap.
    pub tolerance: f64,
    /// Classification of the gap.
    pub verdict: Verdict,
    /// Short content hash of the state the check ran on (empty when none).
    pub state_fingerprint: String,
}

impl GapReport {
    /// Build a report; the gap and verdict are derived.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        f_label: impl Into<String>,
        dim: usize,
        seed: Option<u64>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        state_fingerprint: impl Into<String>,
    ) -> Self {
        let gap = lhs - rhs;
        GapReport {
            name: name.into(),
            f_label: f_label.into(),
            dim,
            seed,
            lhs,
            rhs,
            gap,
            tolerance,
            verdict: Verdict::assess(gap, tolerance),
            state_fingerprint: state_fingerprint.into(),
        }
    }

    /// True unless the verdict is `Violated`.
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Default slack for products of variances: `1e-9 * max(1, |scale|)`.
pub fn default_tol(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}

/// Render a float with 17 significant digits, round-trip exact.
pub fn fmt_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Short fingerprint of a complex matrix: SHA-256 over its canonical
/// 17-digit text form, truncated to 16 hex characters.
pub fn fingerprint(m: &CMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update(m.nrows().to_le_bytes());
    for e in m.iter() {
        hasher.update(fmt_sig17(e.re).as_bytes());
        hasher.update(b",");
        hasher.update(fmt_sig17(e.im).as_bytes());
        hasher.update(b";");
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Write reports as CSV (CRLF records, fixed column set, 17 digits).
pub fn write_csv<W: Write>(out: W, reports: &[GapReport]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    w.write_record([
        "name", "f_label", "dim", "seed", "lhs", "rhs", "gap", "tol", "verdict",
    ])?;
    for r in reports {
        w.write_record([
            r.name.as_str(),
            r.f_label.as_str(),
            &r.dim.to_string(),
            &r.seed.map(|s| s.to_string()).unwrap_or_default(),
            &fmt_sig17(r.lhs),
            &fmt_sig17(r.rhs),
            &fmt_sig17(r.gap),
            &fmt_sig17(r.tolerance),
            &r.verdict.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Write reports as JSON lines, one object per report.
pub fn write_jsonl<W: Write>(mut out: W, reports: &[GapReport]) -> Result<()> {
    for r in reports {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Write both report files under `dir` with the given stem.
pub fn write_report_files(dir: &Path, stem: &str, reports: &[GapReport]) -> Result<()> {
    let csv_path = dir.join(format!("{stem}.csv"));
    let jsonl_path = dir.join(format!("{stem}.jsonl"));
    write_csv(std::fs::File::create(csv_path)?, reports)?;
    write_jsonl(std::fs::File::create(jsonl_path)?, reports)?;
    Ok(())
}
