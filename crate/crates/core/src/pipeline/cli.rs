//! Command implementations behind the `rigidity` binary. Each command
//! returns its standard output and process exit code.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{acquire_group, check_file, load_graph, run_batch, PipelineConfig};
use super::{emit_report, CertificationReport, ReportFormat, Status};
use crate::certify::{find_disproof, verify_disproof, DisproofOutcome, Kind};
use crate::error::{Error, Result};
use crate::graphcore::unit_laplacian;
use crate::spectra::{cluster_eigenspace, eig_sym};
use crate::symmetry::{edge_orbits, vertex_orbits, EdgeOrbitPartition};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_DISPROVED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub stdout: String,
    pub code: i32,
}

/// Parses `lower`, `upper` or `both`.
pub fn parse_targets(s: &str) -> Result<Vec<Kind>> {
    match s {
        "lower" => Ok(vec![Kind::Lower]),
        "upper" => Ok(vec![Kind::Upper]),
        "both" => Ok(vec![Kind::Lower, Kind::Upper]),
        _ => Err(Error::InvalidParameter(format!(
            "target must be lower, upper or both, got {s:?}"
        ))),
    }
}

/// Resolves the seed: explicit flag, then `RIGIDITY_SEED`, then 0.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("RIGIDITY_SEED={v:?} is not an integer"))),
        None => Ok(0),
    }
}

/// 2 if any report is inconclusive, otherwise 1 if any is disproved, otherwise 0.
pub fn exit_code(reports: &[CertificationReport]) -> i32 {
    if reports.is_empty() || reports.iter().any(|r| r.status.is_inconclusive()) {
        EXIT_INCONCLUSIVE
    } else if reports.iter().any(|r| r.status == Status::Disproved) {
        EXIT_DISPROVED
    } else {
        EXIT_CERTIFIED
    }
}

fn render_reports(reports: &[CertificationReport], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json if reports.len() == 1 => emit_report(&reports[0], format),
        ReportFormat::Json => Ok(serde_json::to_string_pretty(reports)?),
        ReportFormat::Text => reports.iter().map(|r| emit_report(r, format)).collect(),
    }
}

pub fn check(
    path: &Path,
    kinds: &[Kind],
    cfg: &PipelineConfig,
    format: ReportFormat,
    report_path: Option<&Path>,
) -> Result<CommandOutput> {
    cfg.validate()?;
    let reports = check_file(path, kinds, cfg)?;
    if let Some(out) = report_path {
        std::fs::write(out, render_reports(&reports, ReportFormat::Json)? + "\n")?;
    }
    Ok(CommandOutput {
        stdout: render_reports(&reports, format)?,
        code: exit_code(&reports),
    })
}

#[derive(Serialize)]
struct OrbitsOutput {
    n: usize,
    m: usize,
    group_order: usize,
    group_source: String,
    generators: Vec<Vec<usize>>,
    vertex_orbits: Vec<usize>,
    edge_orbits: Vec<usize>,
    orbit_sizes: Vec<usize>,
}

pub fn orbits(path: &Path, cfg: &PipelineConfig, format: ReportFormat) -> Result<CommandOutput> {
    let g = load_graph(path)?;
    let group = acquire_group(&g, &cfg.group, cfg.group_cap, cfg.node_budget)?;
    let part = edge_orbits(&g, &group.gens);
    let out = OrbitsOutput {
        n: g.n(),
        m: g.m(),
        group_order: group.closure.size(),
        group_source: group.label,
        generators: group
            .gens
            .gens()
            .iter()
            .map(|p| p.image().to_vec())
            .collect(),
        vertex_orbits: vertex_orbits(&g, &group.gens),
        edge_orbits: part.orbit_of.clone(),
        orbit_sizes: part.sizes.clone(),
    };
    let stdout = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&out)?,
        ReportFormat::Text => {
            let sizes: Vec<String> = out.orbit_sizes.iter().map(ToString::to_string).collect();
            format!(
                "group order {} ({}), {} generators\nedge orbits: {} with sizes [{}]\n",
                out.group_order,
                out.group_source,
                out.generators.len(),
                sizes.len(),
                sizes.join(", ")
            )
        }
    };
    Ok(CommandOutput {
        stdout,
        code: EXIT_CERTIFIED,
    })
}

#[derive(Serialize)]
struct SpectrumOutput {
    n: usize,
    m: usize,
    eigenvalues: Vec<f64>,
    lambda2: f64,
    lambda2_multiplicity: usize,
    lambda_max: f64,
    lambda_max_multiplicity: usize,
}

pub fn spectrum(path: &Path, cfg: &PipelineConfig, format: ReportFormat) -> Result<CommandOutput> {
    let g = load_graph(path)?;
    let dec = eig_sym(&unit_laplacian(&g))?;
    let lo = cluster_eigenspace(&dec, Kind::Lower.side(), cfg.cluster_tol)?;
    let hi = cluster_eigenspace(&dec, Kind::Upper.side(), cfg.cluster_tol)?;
    let out = SpectrumOutput {
        n: g.n(),
        m: g.m(),
        eigenvalues: dec.eigenvalues.clone(),
        lambda2: lo.lambda,
        lambda2_multiplicity: lo.dim(),
        lambda_max: hi.lambda,
        lambda_max_multiplicity: hi.dim(),
    };
    let stdout = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&out)?,
        ReportFormat::Text => format!(
            "lambda_2 = {:.12} (multiplicity {})\nlambda_n = {:.12} (multiplicity {})\n",
            out.lambda2, out.lambda2_multiplicity, out.lambda_max, out.lambda_max_multiplicity
        ),
    };
    Ok(CommandOutput {
        stdout,
        code: EXIT_CERTIFIED,
    })
}

#[derive(Serialize)]
struct DisproveOutput {
    target: Kind,
    found: bool,
    verified: bool,
    disproof: Option<crate::certify::Disproof>,
    first_order_gain: Option<f64>,
}

/// Searches for improving weights on the per-edge partition. Exits 1 when a
/// verified disproof is found and 2 otherwise.
pub fn disprove(
    path: &Path,
    kinds: &[Kind],
    cfg: &PipelineConfig,
    format: ReportFormat,
) -> Result<CommandOutput> {
    cfg.validate()?;
    let g = load_graph(path)?;
    let dec = eig_sym(&unit_laplacian(&g))?;
    let part = EdgeOrbitPartition::per_edge(&g);
    let mut outputs = Vec::new();
    for &kind in kinds {
        let cluster = cluster_eigenspace(&dec, kind.side(), cfg.cluster_tol)?;
        let out = match find_disproof(&g, &cluster, &part, kind, &cfg.disproof) {
            Ok(DisproofOutcome::Found(d)) => {
                let verified = verify_disproof(&g, &d, kind);
                DisproveOutput {
                    target: kind,
                    found: true,
                    verified,
                    disproof: Some(d),
                    first_order_gain: None,
                }
            }
            Ok(DisproofOutcome::NumericallyRigid { t }) => DisproveOutput {
                target: kind,
                found: false,
                verified: false,
                disproof: None,
                first_order_gain: Some(t),
            },
            Err(Error::LineSearchFailed { t }) => DisproveOutput {
                target: kind,
                found: false,
                verified: false,
                disproof: None,
                first_order_gain: Some(t),
            },
            Err(e) => return Err(e),
        };
        outputs.push(out);
    }
    let code = if outputs.iter().any(|o| o.verified) {
        EXIT_DISPROVED
    } else {
        EXIT_INCONCLUSIVE
    };
    let stdout = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&outputs)?,
        ReportFormat::Text => outputs
            .iter()
            .map(|o| match &o.disproof {
                Some(d) if o.verified => {
                    format!(
                        "{}: disproved, {:.10} vs uniform {:.10}\n",
                        o.target.label(),
                        d.achieved,
                        d.baseline
                    )
                }
                _ => format!("{}: no improving weights found\n", o.target.label()),
            })
            .collect(),
    };
    Ok(CommandOutput { stdout, code })
}

/// Graph files in `dir`, sorted by name. Hidden files are skipped.
pub fn graph_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.is_file()
                && !p
                    .file_name()
                    .is_some_and(|n| n.to_string_lossy().starts_with('.'))
        })
        .collect();
    paths.sort();
    Ok(paths)
}

/// Runs `check` on every file of a directory. Exits 3 if any file could not
/// be read, otherwise as `check` over all reports.
pub fn batch(
    dir: &Path,
    kinds: &[Kind],
    cfg: &PipelineConfig,
    format: ReportFormat,
) -> Result<CommandOutput> {
    cfg.validate()?;
    let paths = graph_files(dir)?;
    let res = run_batch(&paths, kinds, cfg);
    let code = if !res.failures.is_empty() {
        EXIT_INPUT_ERROR
    } else {
        exit_code(&res.reports)
    };
    let stdout = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&res)?,
        ReportFormat::Text => {
            let mut s: String = res
                .reports
                .iter()
                .map(|r| {
                    format!(
                        "{} [{}]: {}\n",
                        r.graph_id,
                        r.target.label(),
                        r.status.label()
                    )
                })
                .collect();
            for f in &res.failures {
                s.push_str(&format!("{}: error: {}\n", f.path, f.error));
            }
            for (status, count) in &res.summary {
                s.push_str(&format!("{}: {count}\n", status.label()));
            }
            s
        }
    };
    Ok(CommandOutput { stdout, code })
}
