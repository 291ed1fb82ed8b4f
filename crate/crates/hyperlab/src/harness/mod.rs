//! Scenario ingestion, deterministic experiment orchestration, and report
//! emission. Reports are flat tables: every verdict is re-checkable from
//! the recorded numbers alone.

pub mod report;
pub mod scenario;
pub mod verify;

pub use report::{emit_report, Report, ReportFormat, ReportRow};
pub use scenario::{run_scenario, Scenario};
pub use verify::{verify, Profile};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Per-experiment PRNG stream derived from (seed, experiment name), so
/// reordering experiments does not change any experiment's samples.
pub fn stream(seed: u64, name: &str) -> ChaCha20Rng {
    // FNV-1a over the name, folded into the scenario seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha20Rng::seed_from_u64(seed ^ h)
}
