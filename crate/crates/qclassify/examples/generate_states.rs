//! Sample every state family, validate the states, and write a labeled
//! dataset to JSONL.
//!
//! ```bash
//! cargo run --release --example generate_states
//! ```

use qclassify::measures::{concurrence, geometric_discord};
use qclassify::states::{sample_family, sample_zero_discord_bd, BellKind, FamilySpec, StateRecord};

fn summarize(name: &str, records: &[StateRecord]) {
    let n = records.len();
    let entangled = records
        .iter()
        .filter(|r| concurrence(&r.dm).unwrap() > 1e-9)
        .count();
    let discordant = records
        .iter()
        .filter(|r| geometric_discord(&r.dm).unwrap() > 1e-9)
        .count();
    println!("{name:>14}: {n} states, {entangled} entangled, {discordant} with non-zero discord");
}

fn main() -> qclassify::Result<()> {
    let specs = [
        (
            "werner",
            FamilySpec::Werner {
                bell: BellKind::PsiMinus,
                p_min: 0.0,
                p_max: 1.0,
            },
        ),
        (
            "horodecki",
            FamilySpec::Horodecki {
                bell: BellKind::PsiMinus,
                p_min: 0.0,
                p_max: 1.0,
            },
        ),
        ("mems", FamilySpec::Mems),
        (
            "bell-diagonal",
            FamilySpec::BellDiagonal {
                t_min: -1.0,
                t_max: 1.0,
            },
        ),
    ];

    let mut all = vec![];
    for (name, spec) in &specs {
        let records = sample_family(spec, 100, 42)?;
        for rec in &records {
            rec.dm.validate()?;
        }
        summarize(name, &records);
        all.extend(records);
    }

    let zero_discord = sample_zero_discord_bd(-1.0, 1.0, 50, 43)?;
    summarize("zero-discord", &zero_discord);
    all.extend(zero_discord);

    for (i, rec) in all.iter_mut().enumerate() {
        rec.id = i as u64;
    }
    std::fs::create_dir_all("out").ok();
    qclassify::io::write_records("out/states.jsonl", &all)?;
    println!("\nwrote {} validated states to out/states.jsonl", all.len());
    println!("label them with: qclassify label --task entanglement -i out/states.jsonl -o out/labeled.jsonl");
    Ok(())
}
