//! Cross-domain classification between Werner types: train on one Bell
//! kind, test on the others. Prints the full 4x3 accuracy table.
//!
//! ```bash
//! cargo run --release --example cross_domain_werner
//! ```

use qclassify::harness::{run_preset, Preset, PresetReport};
use qclassify::states::BellKind;

fn main() -> qclassify::Result<()> {
    println!("training 4 models (one per Bell kind), testing each on the other kinds;");
    println!("this takes a minute or two.\n");
    let report = run_preset(
        Preset::XdomainWerner,
        qclassify::harness::DEFAULT_PRESET_SEED,
    )?;
    let PresetReport::WernerTable { cells } = &report else {
        unreachable!("xdomain_werner is the table preset");
    };

    print!("{:>12} |", "train \\ test");
    for kind in BellKind::ALL {
        print!(" {:>10}", kind.to_string());
    }
    println!();
    println!("{}", "-".repeat(12 + 2 + 4 * 11));
    for train in BellKind::ALL {
        print!("{:>12} |", train.to_string());
        for test in BellKind::ALL {
            if train == test {
                print!(" {:>10}", "-");
            } else {
                let cell = cells
                    .iter()
                    .find(|c| c.train_bell == train && c.test_bell == test)
                    .expect("every off-diagonal cell is present");
                print!(" {:>9.1}%", cell.report.metrics.accuracy * 100.0);
            }
        }
        println!();
    }

    let mean: f64 =
        cells.iter().map(|c| c.report.metrics.accuracy).sum::<f64>() / cells.len() as f64;
    println!(
        "\nmean cross-domain accuracy over 12 cells: {:.1}%",
        mean * 100.0
    );
    Ok(())
}
