//! Robustness under random local rotations: each test state is conjugated
//! by U(theta1) (x) U(theta2) before feature extraction. Entanglement is
//! invariant under local unitaries, so labels stay put; the question is
//! whether the classifier's geometry does too.
//!
//! ```bash
//! cargo run --release --example robustness_rotations
//! ```

use qclassify::harness::{run_preset, Preset, PresetReport};

fn main() -> qclassify::Result<()> {
    let report = run_preset(Preset::Robustness, qclassify::harness::DEFAULT_PRESET_SEED)?;
    let PresetReport::Robustness { cells } = &report else {
        unreachable!("robustness preset");
    };
    println!("model trained on Werner psi- states, tested on the other kinds:\n");
    println!(
        "{:>10} {:>12} {:>12} {:>8}",
        "test kind", "unrotated", "rotated", "delta"
    );
    for cell in cells {
        println!(
            "{:>10} {:>11.1}% {:>11.1}% {:>+7.1}",
            cell.test_bell.to_string(),
            cell.unrotated.metrics.accuracy * 100.0,
            cell.rotated.metrics.accuracy * 100.0,
            cell.accuracy_delta_points
        );
    }
    println!("\nevery rotated state passed the embedded concurrence-invariance");
    println!("check (1e-9) before being classified.");
    Ok(())
}
