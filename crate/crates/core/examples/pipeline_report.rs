//! The full certification flow with its JSON report.
//!
//! Run with `cargo run --example pipeline_report`.

use rigidity::certify::Kind;
use rigidity::graphcore::{circulant, named};
use rigidity::pipeline::{emit_report, run_pipeline, verify_report, PipelineConfig, ReportFormat};

fn main() -> rigidity::Result<()> {
    let cfg = PipelineConfig::default();
    let cases = [
        ("C5", named::cycle(5), Kind::Lower),
        ("Petersen", named::petersen(), Kind::Upper),
        ("Desargues", named::desargues(), Kind::Upper),
        ("Cay(Z21,{1,6})", circulant(21, &[1, 6])?, Kind::Lower),
        ("barbell", named::barbell(), Kind::Lower),
        ("friendship F3", named::friendship(3), Kind::Upper),
        (
            "crossing number 6B",
            named::crossing_number_6b(),
            Kind::Lower,
        ),
    ];
    for (name, g, kind) in &cases {
        let report = run_pipeline(g, name, *kind, &cfg);
        print!("{}", emit_report(&report, ReportFormat::Text)?);
        println!("  independent re-check: {}", verify_report(g, &report));
    }

    let report = run_pipeline(&named::petersen(), "petersen", Kind::Lower, &cfg);
    println!("{}", emit_report(&report, ReportFormat::Json)?);
    Ok(())
}
