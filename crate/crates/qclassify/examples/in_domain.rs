//! The in-domain benchmark: a combined Werner + Horodecki + MEMS pool of
//! 176 states, stratified 75/25 split, quantum-kernel SVM.
//!
//! ```bash
//! cargo run --release --example in_domain
//! ```

use qclassify::harness::{emit_plot_data, emit_report, run_preset, Preset, PresetReport};

fn main() -> qclassify::Result<()> {
    let report = run_preset(Preset::InDomain, qclassify::harness::DEFAULT_PRESET_SEED)?;
    let PresetReport::Experiment { report } = &report else {
        unreachable!("in_domain is a single experiment");
    };
    let m = &report.metrics;
    println!("in-domain 75/25 split, {} test states", m.per_state.len());
    println!("  selected hyperparameters: {:?}", report.selected);
    println!("  accuracy  {:.4}", m.accuracy);
    println!("  precision {:.4}", m.precision);
    println!("  recall    {:.4}", m.recall);
    println!("  f1        {:.4}", m.f1);
    println!(
        "  confusion tp={} fp={} tn={} fn={}",
        m.confusion.tp, m.confusion.fp, m.confusion.tn, m.confusion.fneg
    );

    std::fs::create_dir_all("out").ok();
    emit_report(report, "out/in_domain.json")?;
    emit_plot_data(report, "out/in_domain.csv")?;
    println!("\nreport: out/in_domain.json, plot data: out/in_domain.csv");
    Ok(())
}
