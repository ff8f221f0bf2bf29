//! Machine-readable certification reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Stage;
use crate::certify::{verify_certificate, verify_disproof, Disproof, Kind, VerificationReport};
use crate::error::Result;
use crate::graphcore::Graph;
use crate::sdpfeas::SdpStatus;
use crate::symmetry::EdgeOrbitPartition;

pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance used when re-verifying a stored certificate.
const REVERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    CertifiedExact,
    CertifiedNumeric,
    Disproved,
    InconclusiveNoRank1,
    InconclusiveMultiplicity,
    InconclusiveSolver,
}

impl Status {
    pub const ALL: [Status; 6] = [
        Status::CertifiedExact,
        Status::CertifiedNumeric,
        Status::Disproved,
        Status::InconclusiveNoRank1,
        Status::InconclusiveMultiplicity,
        Status::InconclusiveSolver,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Status::CertifiedExact => "CERTIFIED_EXACT",
            Status::CertifiedNumeric => "CERTIFIED_NUMERIC",
            Status::Disproved => "DISPROVED",
            Status::InconclusiveNoRank1 => "INCONCLUSIVE_NO_RANK1",
            Status::InconclusiveMultiplicity => "INCONCLUSIVE_MULTIPLICITY",
            Status::InconclusiveSolver => "INCONCLUSIVE_SOLVER",
        }
    }

    pub fn is_certified(self) -> bool {
        matches!(self, Status::CertifiedExact | Status::CertifiedNumeric)
    }

    pub fn is_inconclusive(self) -> bool {
        matches!(
            self,
            Status::InconclusiveNoRank1
                | Status::InconclusiveMultiplicity
                | Status::InconclusiveSolver
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotypicSummary {
    pub d: usize,
    pub m: usize,
    pub endo_dim: usize,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpSummary {
    pub mode: String,
    pub constraints: usize,
    pub dim: usize,
    pub status: SdpStatus,
    pub max_residual: f64,
    pub iterations: usize,
    pub rank_estimate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedVector {
    pub coef: f64,
    pub phi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificatePayload {
    /// `alternating`, `cone`, `sub_cone` or `sdp`.
    pub method: String,
    pub exact: bool,
    /// Exact cone coefficients as reduced fractions.
    pub a: Option<Vec<String>>,
    pub a_float: Vec<f64>,
    pub lambda: f64,
    /// Orbit label of every edge.
    pub partition: Vec<usize>,
    pub vectors: Vec<WeightedVector>,
    pub verification: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub schema: u32,
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub target: Kind,
    pub seed: u64,
    pub status: Status,
    pub route: Vec<Stage>,
    pub lambda: f64,
    pub multiplicity: usize,
    pub group_order: Option<usize>,
    pub group_source: Option<String>,
    pub orbit_sizes: Option<Vec<usize>>,
    pub isotypics: Option<Vec<IsotypicSummary>>,
    pub cone_generators: Option<Vec<Vec<f64>>>,
    pub flags: Vec<String>,
    pub sdp: Option<SdpSummary>,
    pub certificate: Option<CertificatePayload>,
    pub disproof: Option<Disproof>,
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<(String, f64)>>,
}

impl CertificationReport {
    pub fn new(graph_id: &str, g: &Graph, target: Kind, seed: u64) -> Self {
        CertificationReport {
            schema: SCHEMA_VERSION,
            graph_id: graph_id.into(),
            n: g.n(),
            m: g.m(),
            target,
            seed,
            status: Status::InconclusiveSolver,
            route: Vec::new(),
            lambda: 0.0,
            multiplicity: 0,
            group_order: None,
            group_source: None,
            orbit_sizes: None,
            isotypics: None,
            cone_generators: None,
            flags: Vec::new(),
            sdp: None,
            certificate: None,
            disproof: None,
            error: None,
            timings: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Renders a report. JSON output is pretty-printed and deterministic for a
/// fixed seed when timings are disabled.
pub fn emit_report(report: &CertificationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(report)?),
        ReportFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{} [{}]: {}",
                report.graph_id,
                report.target.label(),
                report.status.label()
            );
            let _ = writeln!(s, "  n = {}, m = {}", report.n, report.m);
            let _ = writeln!(
                s,
                "  lambda = {:.10}, multiplicity = {}",
                report.lambda, report.multiplicity
            );
            if let Some(order) = report.group_order {
                let src = report.group_source.as_deref().unwrap_or("?");
                let _ = writeln!(s, "  group order = {order} ({src})");
            }
            if let Some(sizes) = &report.orbit_sizes {
                let _ = writeln!(s, "  orbit sizes = [{}]", join(sizes));
            }
            if let Some(sdp) = &report.sdp {
                let _ = writeln!(
                    s,
                    "  sdp: {:?} after {} iterations, residual {:.3e}, rank {}",
                    sdp.status, sdp.iterations, sdp.max_residual, sdp.rank_estimate
                );
            }
            if let Some(iso) = &report.isotypics {
                let parts: Vec<String> = iso
                    .iter()
                    .map(|c| format!("(d={}, m={}, {})", c.d, c.m, c.kind))
                    .collect();
                let _ = writeln!(s, "  isotypics = {}", parts.join(" "));
            }
            if let Some(cert) = &report.certificate {
                match &cert.a {
                    Some(a) => {
                        let _ =
                            writeln!(s, "  certificate ({}): a = [{}]", cert.method, a.join(", "));
                    }
                    None => {
                        let a: Vec<String> =
                            cert.a_float.iter().map(|x| format!("{x:.6e}")).collect();
                        let _ =
                            writeln!(s, "  certificate ({}): a = [{}]", cert.method, a.join(", "));
                    }
                }
                let v = &cert.verification;
                let _ = writeln!(
                    s,
                    "  verification: {} (c = {:.10}, eigen residual {:.3e})",
                    if v.passed { "passed" } else { "failed" },
                    v.c_normalized,
                    v.max_eigen_residual
                );
            }
            if let Some(d) = &report.disproof {
                let _ = writeln!(
                    s,
                    "  disproof: {:.10} vs uniform {:.10} (margin {:.3e})",
                    d.achieved, d.baseline, d.margin
                );
            }
            if !report.flags.is_empty() {
                let _ = writeln!(s, "  flags: {}", report.flags.join(", "));
            }
            if let Some(e) = &report.error {
                let _ = writeln!(s, "  error: {e}");
            }
            Ok(s)
        }
    }
}

/// Re-checks the evidence stored in a report against the graph, without
/// trusting any intermediate quantity of the run.
pub fn verify_report(g: &Graph, report: &CertificationReport) -> bool {
    if report.n != g.n() || report.m != g.m() {
        return false;
    }
    match report.status {
        Status::Disproved => report
            .disproof
            .as_ref()
            .is_some_and(|d| verify_disproof(g, d, report.target)),
        s if s.is_certified() || report.certificate.is_some() => {
            let Some(cert) = &report.certificate else {
                return false;
            };
            if cert.partition.len() != g.m() {
                return false;
            }
            let part = EdgeOrbitPartition::from_labels(cert.partition.clone());
            let vectors: Vec<(f64, Vec<f64>)> = cert
                .vectors
                .iter()
                .map(|v| (v.coef, v.phi.clone()))
                .collect();
            verify_certificate(g, &part, &vectors, cert.lambda, report.target, REVERIFY_TOL)
                .is_ok_and(|v| v.passed)
        }
        _ => false,
    }
}
