//! Driving the harness from code: run the bundled tree-exactness scenario,
//! print its CSV, and write the JSON sidecar next to it.

use hyperlab::harness::report::{emit_report, to_csv, ReportFormat};
use hyperlab::harness::scenario::{run_scenario, Scenario};

fn main() -> hyperlab::Result<()> {
    let sc = Scenario::bundled_tree_exactness();
    let report = run_scenario(&sc)?;
    print!("{}", to_csv(&report));
    println!("# {} rows, {} failed", report.rows.len(), report.failed());

    let dir = std::env::temp_dir().join("hyperlab-example");
    emit_report(&report, ReportFormat::Csv, &dir.join("report.csv"))?;
    emit_report(&report, ReportFormat::Json, &dir.join("report.json"))?;
    println!("# wrote {}", dir.display());
    Ok(())
}
