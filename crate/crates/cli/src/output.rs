use std::fmt::Write as _;

use hyperci::decomp::DecompositionReport;
use hyperci::indexcomb::Shape;

use crate::commands::{EnumerateResult, Failure, VerifyResult};
use crate::Cli;

pub const CSV_HEADER: &str = "shape,t,minimal_primes,radical_verdict,witness_degree,runtime_ms";

/// One CSV line; missing values stay empty.
pub struct Row {
    shape: String,
    t: usize,
    minimal_primes: Option<usize>,
    radical_verdict: Option<&'static str>,
    witness_degree: Option<u32>,
    runtime_ms: Option<u64>,
}

impl Row {
    pub fn counts(shape: &Shape, count: usize, runtime_ms: Option<u64>) -> Self {
        Row {
            shape: shape.to_string(),
            t: shape.t(),
            minimal_primes: Some(count),
            radical_verdict: None,
            witness_degree: None,
            runtime_ms,
        }
    }

    pub fn verify(r: &VerifyResult) -> Self {
        Row {
            shape: r.shape.to_string(),
            t: r.t,
            minimal_primes: r.minimal_prime_count,
            radical_verdict: r.radical_verdict.map(|v| v.as_str()),
            witness_degree: r.witness.as_ref().map(|w| w.degree),
            runtime_ms: r.runtime_ms,
        }
    }

    pub fn report(r: &DecompositionReport) -> Self {
        Row {
            shape: r.shape.to_string(),
            t: r.t,
            minimal_primes: Some(r.minimal_prime_count),
            radical_verdict: Some(r.radical_verdict.as_str()),
            witness_degree: r.witness.as_ref().map(|w| w.degree),
            runtime_ms: r.runtime_ms,
        }
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn csv(rows: &[Row]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.shape,
            r.t,
            opt(&r.minimal_primes),
            r.radical_verdict.unwrap_or(""),
            opt(&r.witness_degree),
            opt(&r.runtime_ms)
        );
    }
    out
}

fn cells(cs: &[hyperci::indexcomb::IndexTuple]) -> String {
    cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn text_enumerate(r: &EnumerateResult) -> String {
    let mut out = format!("shape {} t={}: {} maximal switchable sets\n", r.shape, r.t, r.minimal_prime_count);
    for (k, s) in r.sets.iter().enumerate() {
        let _ = writeln!(out, "{:>4}  {}", k + 1, cells(s));
    }
    out
}

pub fn text_verify(r: &VerifyResult) -> String {
    let mut out = format!("shape {} t={} verify: {}\n", r.shape, r.t, if r.passed { "pass" } else { "FAIL" });
    for c in &r.checks {
        let _ = write!(out, "  {:<36} {:<4} cases={}", c.name, if c.passed { "pass" } else { "FAIL" }, c.cases);
        if let Some(d) = &c.detail {
            let _ = write!(out, "  ({d})");
        }
        if let Some(ms) = c.runtime_ms {
            let _ = write!(out, "  {ms} ms");
        }
        out.push('\n');
    }
    if let Some(v) = r.radical_verdict {
        let _ = writeln!(out, "  verdict: {}", v.as_str());
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "  witness (degree {}): {}", w.degree, w.polynomial);
    }
    out
}

fn flag(c: &Option<hyperci::decomp::CheckRecord>) -> &'static str {
    match c {
        None => "-",
        Some(c) if c.passed => "pass",
        Some(_) => "FAIL",
    }
}

pub fn text_report(reports: &[DecompositionReport]) -> String {
    let mut out = format!(
        "{:<10} {:>2} {:>14} {:>10} {:>4} {:>8} {:<22} {:>14}\n",
        "shape", "t", "minimal primes", "saturation", "gb", "quotient", "radical", "witness degree"
    );
    for r in reports {
        let v = &r.verifications;
        let _ = write!(
            out,
            "{:<10} {:>2} {:>14} {:>10} {:>4} {:>8} {:<22} {:>14}",
            r.shape.to_string(),
            r.t,
            r.minimal_prime_count,
            flag(&v.saturation),
            flag(&v.gb),
            flag(&v.quotient),
            r.radical_verdict.as_str(),
            r.witness.as_ref().map(|w| w.degree.to_string()).unwrap_or_else(|| "-".into())
        );
        if let Some(ms) = r.runtime_ms {
            let _ = write!(out, " {ms} ms");
        }
        out.push('\n');
    }
    out
}

pub fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.global.output {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Usage(format!("writing {path}: {e}"))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
