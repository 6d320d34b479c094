//! Classical baselines on the same cross-domain data as the quantum
//! kernel: an RBF-kernel SVM and a small sigmoid network. Cross-domain,
//! both tend to collapse to a single predicted class; the comparison
//! report records the accuracy gap.
//!
//! ```bash
//! cargo run --release --example classical_baselines
//! ```

use qclassify::harness::{run_preset, Preset, PresetReport};

fn main() -> qclassify::Result<()> {
    for preset in [Preset::BaselineCsvm, Preset::BaselineNn] {
        let report = run_preset(preset, qclassify::harness::DEFAULT_PRESET_SEED)?;
        let PresetReport::BaselineComparison { comparison } = &report else {
            unreachable!("baseline presets");
        };
        let q = &comparison.qsvm.metrics;
        let b = &comparison.baseline.metrics;
        println!("{} (train Werner psi-, test Werner psi+):", preset.name());
        println!(
            "  qsvm     accuracy {:.2}%  precision {:.2}%  recall {:.2}%",
            q.accuracy * 100.0,
            q.precision * 100.0,
            q.recall * 100.0
        );
        println!(
            "  baseline accuracy {:.2}%  precision {:.2}%  recall {:.2}%{}",
            b.accuracy * 100.0,
            b.precision * 100.0,
            b.recall * 100.0,
            match b.degenerate_all_one_class {
                Some(class) => format!(
                    "  [degenerate: predicts every state as {}]",
                    if class == 1 { "entangled" } else { "separable" }
                ),
                None => String::new(),
            }
        );
        println!(
            "  gap {:+.1} points -> claim {} (seed {})\n",
            comparison.accuracy_gap_points, comparison.claim, comparison.seed
        );
    }
    Ok(())
}
