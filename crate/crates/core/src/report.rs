//! Report envelopes: one classification run with its input echo, optional
//! numerical traces and timing, serialized as key-sorted JSON or text.

use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Value as Json};

use crate::classifier::{classify_report, ClassificationReport, Verdict};
use crate::error::{Error, Result};
use crate::finite_section::{verify, ResidualTrace};
use crate::mapspec::MapSpec;
use crate::mobius::Point;
use crate::scalar::{format_cplx, Backend, Rat, Real};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub backend: Backend,
    /// Ladder of section sizes; `None` skips numerical verification.
    pub ladder: Option<Vec<usize>>,
}

impl Default for Options {
    fn default() -> Self {
        Options { backend: Backend::Exact, ladder: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyReport {
    Exact(Box<ClassificationReport<Rat>>),
    Float(Box<ClassificationReport<f64>>),
}

impl AnyReport {
    pub fn to_json(&self) -> Json {
        match self {
            AnyReport::Exact(r) => r.to_json(),
            AnyReport::Float(r) => r.to_json(),
        }
    }

    pub fn posinormal(&self) -> bool {
        match self {
            AnyReport::Exact(r) => r.posinormal.value,
            AnyReport::Float(r) => r.posinormal.value,
        }
    }

    pub fn coposinormal(&self) -> bool {
        match self {
            AnyReport::Exact(r) => r.coposinormal.value,
            AnyReport::Float(r) => r.coposinormal.value,
        }
    }

    pub fn hyponormal(&self) -> bool {
        match self {
            AnyReport::Exact(r) => r.hyponormal.value,
            AnyReport::Float(r) => r.hyponormal.value,
        }
    }

    pub fn notes(&self) -> &[String] {
        match self {
            AnyReport::Exact(r) => &r.notes,
            AnyReport::Float(r) => &r.notes,
        }
    }

    fn text(&self, out: &mut String) {
        match self {
            AnyReport::Exact(r) => report_text(r, out),
            AnyReport::Float(r) => report_text(r, out),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportEnvelope {
    pub input: MapSpec,
    /// Backend actually used; rotations by a nonzero angle always run in float.
    pub backend: Backend,
    pub report: AnyReport,
    pub numerics: Option<Vec<ResidualTrace>>,
    pub timing_ms: f64,
}

impl ReportEnvelope {
    /// JSON with sorted keys. `canonical` drops the timing field so identical
    /// inputs serialize to identical bytes.
    pub fn to_json(&self, canonical: bool) -> Json {
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "input": {"family": self.input.family(), "descriptor": self.input.to_string()},
            "backend": self.backend.name(),
            "report": self.report.to_json(),
            "numerics": self.numerics.as_ref().map(|ts| ts.iter().map(ResidualTrace::to_json).collect::<Vec<_>>()),
        });
        if !canonical {
            v["timing_ms"] = json!(self.timing_ms);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "input: {}", self.input);
        let _ = writeln!(out, "backend: {}", self.backend.name());
        self.report.text(&mut out);
        if let Some(traces) = &self.numerics {
            out.push_str("numerics:\n");
            for t in traces {
                let last = t.last().map_or("-".to_string(), |r| format!("{r:.3e}"));
                let _ = writeln!(out, "  {:<24} {:<9} slope {:>7.2}  last {last}", t.name, t.verdict.name(), t.slope);
            }
        }
        out
    }

    /// Whether every numerical trace decays. `true` without numerics.
    pub fn numerics_decaying(&self) -> bool {
        self.numerics.as_ref().is_none_or(|ts| ts.iter().all(ResidualTrace::is_decaying))
    }
}

fn point_text<R: Real>(p: &Point<R>) -> String {
    match &p.exact {
        Some(e) => match e.finite() {
            Some(z) => format_cplx(z),
            None => "inf".into(),
        },
        None => match p.approx_finite() {
            Some(z) => format!("{z:.6}"),
            None => "inf".into(),
        },
    }
}

fn verdict_text<R: Real>(name: &str, v: &Verdict<R>, out: &mut String) {
    let _ = write!(out, "{name}: {} ({})", v.value, v.branch.name());
    if v.marginal {
        out.push_str(" [marginal]");
    }
    out.push('\n');
}

fn report_text<R: Real>(r: &ClassificationReport<R>, out: &mut String) {
    let _ = writeln!(out, "map: {}", r.map);
    let _ = write!(out, "class: {}", r.map_class.kind.name());
    if let Some(p) = &r.map_class.denjoy_wolff {
        let _ = write!(out, ", Denjoy-Wolff point {}", point_text(p));
    }
    if let Some(p) = &r.map_class.second_fixed_point {
        let _ = write!(out, ", second fixed point {}", point_text(p));
    }
    out.push('\n');
    verdict_text("posinormal", &r.posinormal, out);
    verdict_text("coposinormal", &r.coposinormal, out);
    verdict_text("hyponormal", &r.hyponormal, out);
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
}

fn classify_in<R: Real>(
    spec: &MapSpec,
    ladder: Option<&[usize]>,
) -> Result<(ClassificationReport<R>, Option<Vec<ResidualTrace>>)> {
    let phi = spec.to_map::<R>()?;
    let report = classify_report(&phi)?;
    let numerics = match ladder {
        Some(l) => Some(verify(&phi, &report, l)?),
        None => None,
    };
    Ok((report, numerics))
}

/// Classifies `spec`, and runs the finite-section checks when a ladder is set.
pub fn run(spec: &MapSpec, options: &Options) -> Result<ReportEnvelope> {
    let start = Instant::now();
    let ladder = options.ladder.as_deref();
    if let Some(l) = ladder {
        if l.is_empty() || l.iter().any(|&n| n < 2) {
            return Err(Error::InvalidParameter("ladder sizes must be at least 2".into()));
        }
    }
    let backend = if spec.requires_float() { Backend::Float } else { options.backend };
    let (report, numerics) = match backend {
        Backend::Exact => {
            let (r, n) = classify_in::<Rat>(spec, ladder)?;
            (AnyReport::Exact(Box::new(r)), n)
        }
        Backend::Float => {
            let (r, n) = classify_in::<f64>(spec, ladder)?;
            (AnyReport::Float(Box::new(r)), n)
        }
    };
    Ok(ReportEnvelope {
        input: spec.clone(),
        backend,
        report,
        numerics,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Process exit code for a failed run: 2 for a map that is not a selfmap,
/// 3 for a criterion/case disagreement, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotASelfmap => 2,
        Error::CrossCheckMismatch(_) => 3,
        _ => 1,
    }
}

/// Structured form of an error.
pub fn error_json(e: &Error) -> Json {
    let mut v = json!({"kind": e.kind(), "message": e.to_string()});
    if let Error::Parse { pos, .. } = e {
        v["pos"] = json!(pos);
    }
    json!({ "error": v })
}
