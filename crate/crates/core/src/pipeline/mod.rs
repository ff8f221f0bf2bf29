//! End-to-end certification flow: spectrum, symmetry, SDP screening,
//! isotypic analysis, cone certificates and disproofs.

pub mod cli;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{
    assemble_certificate, build_cone, build_sub_cone, find_disproof, regular_bipartite_certificate,
    solve_cone_membership, verify_certificate, verify_disproof, Coefficients, ConeMode, ConeModel,
    ConeSolution, DisproofOutcome, DisproofParams, Kind,
};
use crate::error::{Error, Result};
use crate::graphcore::{parse_edge_list, parse_graph6, unit_laplacian, Graph};
use crate::repr::{
    all_multiplicity_one, isotypic_decompose, multiplicity_bound_ok, IsotypicDecomposition,
};
use crate::sdpfeas::{compress_operators, solve_feasibility, SdpResult, SdpStatus};
use crate::spectra::{cluster_eigenspace, eig_sym, EigenspaceCluster};
use crate::symmetry::{
    automorphism_generators, close_group, edge_orbits, EdgeOrbitPartition, GroupClosure,
    GroupGenerators, Permutation, DEFAULT_GROUP_CAP, DEFAULT_NODE_BUDGET,
};

pub use report::{
    emit_report, verify_report, CertificatePayload, CertificationReport, IsotypicSummary,
    ReportFormat, SdpSummary, Status, WeightedVector, SCHEMA_VERSION,
};

/// Where the automorphism group comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSource {
    /// Full automorphism search.
    Auto,
    /// Explicit generators, checked against the graph.
    Generators(Vec<Permutation>),
    /// A JSON file of permutation images.
    File(PathBuf),
    /// Search for the stabilizer of the listed vertices.
    Fix(Vec<usize>),
}

impl GroupSource {
    /// Parses `auto`, `file:<path>` or `fix:<v1,v2,...>`.
    pub fn parse(text: &str) -> Result<Self> {
        if text == "auto" {
            return Ok(GroupSource::Auto);
        }
        if let Some(path) = text.strip_prefix("file:") {
            if path.is_empty() {
                return Err(Error::InvalidGroupSpec("empty file path".into()));
            }
            return Ok(GroupSource::File(PathBuf::from(path)));
        }
        if let Some(list) = text.strip_prefix("fix:") {
            let vs = list
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidGroupSpec(format!("bad vertex {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(GroupSource::Fix(vs));
        }
        Err(Error::InvalidGroupSpec(format!(
            "expected auto, file:<path> or fix:<v,...>, got {text:?}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PipelineMode {
    ExactFirst,
    NumericOnly,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub cluster_tol: f64,
    pub sdp_tol: f64,
    pub sdp_max_iter: usize,
    pub verify_tol: f64,
    pub disproof: DisproofParams,
    pub group: GroupSource,
    pub group_cap: usize,
    pub node_budget: usize,
    pub seed: u64,
    pub mode: PipelineMode,
    /// Report CERTIFIED_NUMERIC from the SDP solution when the multiplicity bound fails.
    pub allow_numeric_downgrade: bool,
    pub include_timings: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            cluster_tol: crate::spectra::DEFAULT_CLUSTER_TOL,
            sdp_tol: crate::sdpfeas::DEFAULT_SDP_TOL,
            sdp_max_iter: crate::sdpfeas::DEFAULT_MAX_ITER,
            verify_tol: 1e-8,
            disproof: DisproofParams::default(),
            group: GroupSource::Auto,
            group_cap: DEFAULT_GROUP_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
            seed: 0,
            mode: PipelineMode::ExactFirst,
            allow_numeric_downgrade: false,
            include_timings: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let tols = [
            self.cluster_tol,
            self.sdp_tol,
            self.verify_tol,
            self.disproof.margin,
            self.disproof.t_eps,
        ];
        if tols.iter().any(|&t| !t.is_finite() || t <= 0.0) {
            return Err(Error::InvalidParameter(
                "all tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A step of the certification flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Stage {
    Spectra,
    RegularBipartite,
    Group,
    Sdp,
    Disproof,
    Isotypic,
    MultiplicityBound,
    Cone,
    SubCone,
}

/// Edges of the flow graph.
pub const TRANSITIONS: &[(Stage, &[Stage])] = &[
    (Stage::Spectra, &[Stage::RegularBipartite, Stage::Group]),
    (Stage::RegularBipartite, &[]),
    (Stage::Group, &[Stage::Sdp]),
    (Stage::Sdp, &[Stage::Disproof, Stage::Isotypic]),
    (Stage::Isotypic, &[Stage::MultiplicityBound]),
    (Stage::MultiplicityBound, &[Stage::Cone, Stage::SubCone]),
    (Stage::Cone, &[Stage::Disproof]),
    (Stage::SubCone, &[]),
    (Stage::Disproof, &[]),
];

/// Statuses each stage may end a run with, besides INCONCLUSIVE_SOLVER on errors.
pub const TERMINALS: &[(Stage, &[Status])] = &[
    (Stage::Spectra, &[]),
    (Stage::RegularBipartite, &[Status::CertifiedExact]),
    (Stage::Group, &[]),
    (Stage::Sdp, &[]),
    (Stage::Isotypic, &[]),
    (
        Stage::MultiplicityBound,
        &[Status::InconclusiveNoRank1, Status::CertifiedNumeric],
    ),
    (
        Stage::Cone,
        &[Status::CertifiedExact, Status::CertifiedNumeric],
    ),
    (
        Stage::SubCone,
        &[
            Status::CertifiedExact,
            Status::CertifiedNumeric,
            Status::InconclusiveMultiplicity,
        ],
    ),
    (
        Stage::Disproof,
        &[Status::Disproved, Status::InconclusiveSolver],
    ),
];

fn successors(s: Stage) -> &'static [Stage] {
    TRANSITIONS
        .iter()
        .find(|(a, _)| *a == s)
        .map_or(&[], |(_, b)| b)
}

fn terminal_statuses(s: Stage) -> &'static [Status] {
    TERMINALS
        .iter()
        .find(|(a, _)| *a == s)
        .map_or(&[], |(_, b)| b)
}

/// True when `route` starts at the spectrum stage, follows flow edges and
/// ends at a stage that may produce `status`.
pub fn is_valid_route(route: &[Stage], status: Status) -> bool {
    if route.first() != Some(&Stage::Spectra) {
        return false;
    }
    if !route.windows(2).all(|w| successors(w[0]).contains(&w[1])) {
        return false;
    }
    let last = *route.last().expect("nonempty");
    status == Status::InconclusiveSolver || terminal_statuses(last).contains(&status)
}

/// Group generators with their closure and a label of how they were obtained.
#[derive(Debug, Clone)]
pub struct AcquiredGroup {
    pub gens: GroupGenerators,
    pub closure: GroupClosure,
    pub label: String,
    pub fell_back: bool,
}

fn fix_label(vs: &[usize]) -> String {
    let list: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("fix:{}", list.join(","))
}

/// Generators and closure for `source`. When the search budget or the closure
/// cap is exceeded, more vertices are fixed (`0`, then `0,1`, ...) until the
/// group fits, ending with the trivial group.
pub fn acquire_group(
    g: &Graph,
    source: &GroupSource,
    cap: usize,
    budget: usize,
) -> Result<AcquiredGroup> {
    let attempt = |fixed: &[usize]| -> Result<(GroupGenerators, GroupClosure)> {
        let gens = automorphism_generators(g, fixed, budget)?;
        let closure = close_group(&gens, cap)?;
        Ok((gens, closure))
    };
    let mut fixed = match source {
        GroupSource::Generators(gens) => {
            let gens = GroupGenerators::new(g, gens.clone())?;
            let closure = close_group(&gens, cap)?;
            return Ok(AcquiredGroup {
                gens,
                closure,
                label: "generators".into(),
                fell_back: false,
            });
        }
        GroupSource::File(path) => {
            let text = std::fs::read_to_string(path)?;
            let gens = GroupGenerators::from_json(g, &text)?;
            let closure = close_group(&gens, cap)?;
            return Ok(AcquiredGroup {
                gens,
                closure,
                label: format!("file:{}", path.display()),
                fell_back: false,
            });
        }
        GroupSource::Auto => Vec::new(),
        GroupSource::Fix(vs) => vs.clone(),
    };
    let first_label = if fixed.is_empty() {
        "auto".to_string()
    } else {
        fix_label(&fixed)
    };
    match attempt(&fixed) {
        Ok((gens, closure)) => {
            return Ok(AcquiredGroup {
                gens,
                closure,
                label: first_label,
                fell_back: false,
            })
        }
        Err(Error::SearchBudgetExceeded { .. } | Error::CapExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    for v in 0..g.n() {
        if fixed.contains(&v) {
            continue;
        }
        fixed.push(v);
        match attempt(&fixed) {
            Ok((gens, closure)) => {
                return Ok(AcquiredGroup {
                    gens,
                    closure,
                    label: fix_label(&fixed),
                    fell_back: true,
                });
            }
            Err(Error::SearchBudgetExceeded { .. } | Error::CapExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let gens = GroupGenerators::trivial(g);
    let closure = close_group(&gens, cap.max(1))?;
    Ok(AcquiredGroup {
        gens,
        closure,
        label: "trivial".into(),
        fell_back: true,
    })
}

/// Reads a graph file, detecting graph6 (first non-comment line is a single
/// token) or the edge-list format.
pub fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_graph_text(&text)
}

pub fn parse_graph_text(text: &str) -> Result<Graph> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        None => Err(Error::MalformedEdgeList("no edges".into())),
        Some(line) if line.split_whitespace().count() == 1 => parse_graph6(line),
        Some(_) => parse_edge_list(text),
    }
}

struct Timer {
    enabled: bool,
    start: Instant,
    entries: Vec<(String, f64)>,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Timer {
            enabled,
            start: Instant::now(),
            entries: Vec::new(),
        }
    }

    fn lap(&mut self, stage: Stage) {
        if self.enabled {
            let now = Instant::now();
            let label = serde_json::to_value(stage)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            self.entries.push((label, (now - self.start).as_secs_f64()));
            self.start = now;
        }
    }
}

fn summarize_isotypics(dec: &IsotypicDecomposition) -> Vec<IsotypicSummary> {
    dec.components
        .iter()
        .map(|c| IsotypicSummary {
            d: c.irr_dim,
            m: c.mult,
            endo_dim: c.endo_dim,
            kind: c.type_label().into(),
        })
        .collect()
}

fn sdp_summary(r: &SdpResult, constraints: usize, dim: usize) -> SdpSummary {
    SdpSummary {
        mode: if constraints == 0 {
            "none".into()
        } else {
            "orbit".into()
        },
        constraints,
        dim,
        status: r.status,
        max_residual: r.max_residual,
        iterations: r.iterations,
        rank_estimate: r.rank_estimate,
    }
}

/// Vectors `sqrt(mu_k) B v_k` from the spectral decomposition of `Z`, whose
/// weighted orbit energies reproduce the SDP constraints.
fn sdp_vectors(basis: &DMatrix<f64>, z: &DMatrix<f64>) -> Vec<WeightedVector> {
    let Ok(dec) = eig_sym(&((z + z.transpose()) * 0.5)) else {
        return Vec::new();
    };
    let top = dec.lambda_max().max(f64::MIN_POSITIVE);
    dec.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > 1e-12 * top)
        .map(|(k, &mu)| {
            let v = basis * dec.eigenvectors.column(k) * mu.sqrt();
            WeightedVector {
                coef: 1.0,
                phi: v.iter().copied().collect(),
            }
        })
        .collect()
}

struct Run<'a> {
    g: &'a Graph,
    kind: Kind,
    cfg: &'a PipelineConfig,
    report: CertificationReport,
    timer: Timer,
}

impl Run<'_> {
    fn enter(&mut self, stage: Stage) {
        self.report.route.push(stage);
    }

    fn finish(mut self, status: Status) -> CertificationReport {
        if let Some(last) = self.report.route.last().copied() {
            self.timer.lap(last);
        }
        self.report.status = status;
        if self.cfg.include_timings {
            self.report.timings = Some(self.timer.entries);
        }
        self.report
    }

    fn fail(mut self, e: Error) -> CertificationReport {
        self.report.error = Some(e.to_string());
        self.finish(Status::InconclusiveSolver)
    }

    fn certificate(
        &self,
        method: &str,
        part: &EdgeOrbitPartition,
        coeffs: Option<&Coefficients>,
        vectors: Vec<WeightedVector>,
        lambda: f64,
    ) -> Result<CertificatePayload> {
        let pairs: Vec<(f64, Vec<f64>)> = vectors.iter().map(|v| (v.coef, v.phi.clone())).collect();
        let verification =
            verify_certificate(self.g, part, &pairs, lambda, self.kind, self.cfg.verify_tol)?;
        Ok(CertificatePayload {
            method: method.into(),
            exact: coeffs.is_some_and(Coefficients::is_exact),
            a: coeffs.filter(|c| c.is_exact()).map(Coefficients::strings),
            a_float: coeffs.map(Coefficients::to_f64).unwrap_or_default(),
            lambda,
            partition: part.orbit_of.clone(),
            vectors,
            verification,
        })
    }

    fn disprove(
        mut self,
        cluster: &EigenspaceCluster,
        part: &EdgeOrbitPartition,
    ) -> CertificationReport {
        self.timer.lap(*self.report.route.last().expect("nonempty"));
        self.enter(Stage::Disproof);
        match find_disproof(self.g, cluster, part, self.kind, &self.cfg.disproof) {
            Ok(DisproofOutcome::Found(d)) => {
                let ok = verify_disproof(self.g, &d, self.kind);
                self.report.disproof = Some(d);
                if ok {
                    self.finish(Status::Disproved)
                } else {
                    self.report.error = Some("disproof failed independent verification".into());
                    self.finish(Status::InconclusiveSolver)
                }
            }
            Ok(DisproofOutcome::NumericallyRigid { t }) => {
                self.report.error = Some(format!(
                    "no improving direction found (first-order gain {t:e})"
                ));
                self.finish(Status::InconclusiveSolver)
            }
            Err(e) => self.fail(e),
        }
    }

    fn cone_certificate(
        &self,
        part: &EdgeOrbitPartition,
        cone: &ConeModel,
        coeffs: Coefficients,
        cluster: &EigenspaceCluster,
        method: &str,
    ) -> Result<(CertificatePayload, Status)> {
        let exact = coeffs.is_exact();
        let cert = assemble_certificate(self.g, part, cone, coeffs.clone(), cluster, self.kind)?;
        let payload = self.certificate(
            method,
            part,
            Some(&coeffs),
            vec![WeightedVector {
                coef: 1.0,
                phi: cert.phi,
            }],
            cluster.lambda,
        )?;
        let status = if exact {
            Status::CertifiedExact
        } else {
            Status::CertifiedNumeric
        };
        Ok((payload, status))
    }
}

/// Runs the whole flow for one target. Module errors become an
/// INCONCLUSIVE_SOLVER report carrying the error message.
pub fn run_pipeline(
    g: &Graph,
    graph_id: &str,
    kind: Kind,
    cfg: &PipelineConfig,
) -> CertificationReport {
    let mut run = Run {
        g,
        kind,
        cfg,
        report: CertificationReport::new(graph_id, g, kind, cfg.seed),
        timer: Timer::new(cfg.include_timings),
    };
    if let Err(e) = cfg.validate() {
        run.enter(Stage::Spectra);
        return run.fail(e);
    }

    run.enter(Stage::Spectra);
    let cluster = match eig_sym(&unit_laplacian(g))
        .and_then(|dec| cluster_eigenspace(&dec, kind.side(), cfg.cluster_tol))
    {
        Ok(c) => c,
        Err(e) => return run.fail(e),
    };
    run.report.lambda = cluster.lambda;
    run.report.multiplicity = cluster.dim();
    run.timer.lap(Stage::Spectra);

    if kind == Kind::Upper {
        if let Some(phi) = regular_bipartite_certificate(g) {
            run.enter(Stage::RegularBipartite);
            let part = EdgeOrbitPartition::per_edge(g);
            let coeffs =
                Coefficients::Exact(vec![num_rational::BigRational::from_integer(1.into())]);
            let lambda = 2.0 * g.regular_degree().expect("regular") as f64;
            return match run.certificate(
                "alternating",
                &part,
                Some(&coeffs),
                vec![WeightedVector { coef: 1.0, phi }],
                lambda,
            ) {
                Ok(payload) if payload.verification.passed => {
                    run.report.certificate = Some(payload);
                    run.finish(Status::CertifiedExact)
                }
                Ok(payload) => {
                    run.report.certificate = Some(payload);
                    run.report.error = Some("alternating vector failed verification".into());
                    run.finish(Status::InconclusiveSolver)
                }
                Err(e) => run.fail(e),
            };
        }
    }

    run.enter(Stage::Group);
    let group = match acquire_group(g, &cfg.group, cfg.group_cap, cfg.node_budget) {
        Ok(gr) => gr,
        Err(e) => return run.fail(e),
    };
    let part = edge_orbits(g, &group.gens);
    run.report.group_order = Some(group.closure.size());
    run.report.group_source = Some(group.label.clone());
    run.report.orbit_sizes = Some(part.sizes.clone());
    if group.fell_back {
        run.report.flags.push("GROUP_FALLBACK".into());
    }
    run.timer.lap(Stage::Group);

    run.enter(Stage::Sdp);
    let sdp = match compress_operators(g, &cluster, Some(&part)).and_then(|co| {
        let r = solve_feasibility(&co, cfg.sdp_tol, cfg.sdp_max_iter)?;
        Ok((co.count(), r))
    }) {
        Ok(x) => x,
        Err(e) => return run.fail(e),
    };
    let (constraints, sdp) = sdp;
    run.report.sdp = Some(sdp_summary(&sdp, constraints, cluster.dim()));
    if sdp.status != SdpStatus::Feasible {
        return run.disprove(&cluster, &part);
    }
    run.timer.lap(Stage::Sdp);

    run.enter(Stage::Isotypic);
    let dec = match isotypic_decompose(&cluster, &group.closure, cfg.seed) {
        Ok(d) => d,
        Err(e) => return run.fail(e),
    };
    run.report.isotypics = Some(summarize_isotypics(&dec));
    if dec.components.iter().any(|c| c.endo_dim == 4) {
        run.report.flags.push("QUATERNIONIC".into());
    }
    run.timer.lap(Stage::Isotypic);

    run.enter(Stage::MultiplicityBound);
    if !multiplicity_bound_ok(&dec) {
        let z = sdp.z.as_ref().expect("feasible SDP carries a solution");
        let vectors = sdp_vectors(&cluster.basis, z);
        return match run.certificate("sdp", &part, None, vectors, cluster.lambda) {
            Ok(payload) => {
                let passed = payload.verification.passed;
                run.report.certificate = Some(payload);
                if cfg.allow_numeric_downgrade && passed {
                    run.finish(Status::CertifiedNumeric)
                } else {
                    run.finish(Status::InconclusiveNoRank1)
                }
            }
            Err(e) => run.fail(e),
        };
    }
    run.timer.lap(Stage::MultiplicityBound);

    let mode = match cfg.mode {
        PipelineMode::ExactFirst => ConeMode::ExactRational,
        PipelineMode::NumericOnly => ConeMode::Numeric,
    };
    let (stage, cone) = if all_multiplicity_one(&dec) {
        (Stage::Cone, build_cone(g, &dec, &part, cfg.seed))
    } else {
        (Stage::SubCone, build_sub_cone(g, &dec, &part))
    };
    run.enter(stage);
    let cone = match cone {
        Ok(c) => c,
        Err(e) => return run.fail(e),
    };
    run.report.cone_generators = Some(cone.generators.clone());
    match solve_cone_membership(&cone, mode) {
        ConeSolution::Found(coeffs) => {
            if matches!(
                coeffs,
                Coefficients::Numeric {
                    exact_unavailable: true,
                    ..
                }
            ) {
                run.report.flags.push("EXACT_UNAVAILABLE".into());
            }
            let method = if stage == Stage::Cone {
                "cone"
            } else {
                "sub_cone"
            };
            match run.cone_certificate(&part, &cone, coeffs, &cluster, method) {
                Ok((payload, status)) if payload.verification.passed => {
                    run.report.certificate = Some(payload);
                    run.finish(status)
                }
                Ok((payload, _)) => {
                    run.report.certificate = Some(payload);
                    run.report.error = Some("assembled certificate failed verification".into());
                    run.finish(Status::InconclusiveSolver)
                }
                Err(e) => run.fail(e),
            }
        }
        ConeSolution::Infeasible { .. } if stage == Stage::Cone => run.disprove(&cluster, &part),
        ConeSolution::Infeasible { .. } => run.finish(Status::InconclusiveMultiplicity),
    }
}

/// Reads the graph at `path` and runs every requested target.
pub fn check_file(
    path: &Path,
    kinds: &[Kind],
    cfg: &PipelineConfig,
) -> Result<Vec<CertificationReport>> {
    let g = load_graph(path)?;
    let id = path.file_name().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    Ok(kinds
        .iter()
        .map(|&k| run_pipeline(&g, &id, k, cfg))
        .collect())
}

/// A file that could not be processed in a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchFailure {
    pub path: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub reports: Vec<CertificationReport>,
    pub failures: Vec<BatchFailure>,
    /// Count of reports per status, in status order.
    pub summary: Vec<(Status, usize)>,
}

/// Runs every file in parallel; output order follows `paths`.
pub fn run_batch(paths: &[PathBuf], kinds: &[Kind], cfg: &PipelineConfig) -> BatchResult {
    let results: Vec<std::result::Result<Vec<CertificationReport>, BatchFailure>> = paths
        .par_iter()
        .map(|p| {
            check_file(p, kinds, cfg).map_err(|e| BatchFailure {
                path: p.display().to_string(),
                error: e.to_string(),
            })
        })
        .collect();
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rs) => reports.extend(rs),
            Err(f) => failures.push(f),
        }
    }
    let summary = Status::ALL
        .iter()
        .map(|&s| (s, reports.iter().filter(|r| r.status == s).count()))
        .filter(|(_, c)| *c > 0)
        .collect();
    BatchResult {
        reports,
        failures,
        summary,
    }
}
