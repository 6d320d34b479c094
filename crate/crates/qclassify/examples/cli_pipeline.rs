//! The same pipeline the `qclassify` binary exposes, driven through the
//! file formats: generate -> label -> kernel -> train -> predict.
//!
//! ```bash
//! cargo run --release --example cli_pipeline
//! ```

use qclassify::harness::Task;
use qclassify::io::{read_records, write_gram_csv, write_records};
use qclassify::measures::entanglement_label;
use qclassify::qkernel::{gram_matrix, FeatureMapConfig};
use qclassify::states::{features, sample_family, BellKind, FamilySpec, FeatureScheme};
use qclassify::svm::{platt_fit, train_smo, SmoParams};

fn main() -> qclassify::Result<()> {
    std::fs::create_dir_all("out").ok();
    let scheme = FeatureScheme::Dm16;
    let _task = Task::Entanglement;

    // gen
    let train = sample_family(
        &FamilySpec::Werner {
            bell: BellKind::PsiMinus,
            p_min: 0.0,
            p_max: 1.0,
        },
        40,
        21,
    )?;
    let test = sample_family(
        &FamilySpec::Horodecki {
            bell: BellKind::PsiMinus,
            p_min: 0.0,
            p_max: 1.0,
        },
        15,
        22,
    )?;
    write_records("out/train.jsonl", &train)?;
    write_records("out/test.jsonl", &test)?;

    // label
    let mut train = read_records("out/train.jsonl")?;
    for rec in &mut train {
        let label = entanglement_label(&rec.dm)?;
        rec.label_ent = Some(label.value);
        rec.measure = Some(label.concurrence);
    }
    write_records("out/train.labeled.jsonl", &train)?;

    // kernel (train Gram and test x train cross-kernel)
    let cfg = FeatureMapConfig::for_scheme(scheme).with_alpha(std::f64::consts::PI);
    let x_train: Vec<Vec<f64>> = train.iter().map(|r| features(&r.dm, scheme)).collect();
    let x_test: Vec<Vec<f64>> = test.iter().map(|r| features(&r.dm, scheme)).collect();
    let gram = gram_matrix(&x_train, None, &cfg)?;
    let cross = gram_matrix(&x_train, Some(&x_test), &cfg)?;
    write_gram_csv("out/K.csv", &gram)?;
    write_gram_csv("out/K_cross.csv", &cross)?;

    // train
    let y: Vec<i8> = train.iter().map(|r| r.label_ent.unwrap()).collect();
    let mut model = train_smo(&gram, &y, &SmoParams::default())?;
    platt_fit(&mut model, &gram, &y)?;
    qclassify::io::write_json("out/model.json", &model)?;

    // predict
    let preds = model.predict(&cross)?;
    let mut correct = 0;
    for (rec, &p) in test.iter().zip(&preds) {
        if entanglement_label(&rec.dm)?.value == p {
            correct += 1;
        }
    }
    println!(
        "pipeline files in out/: train.jsonl, train.labeled.jsonl, K.csv, K_cross.csv, model.json"
    );
    println!(
        "Horodecki transfer accuracy: {}/{} = {:.0}%",
        correct,
        test.len(),
        100.0 * correct as f64 / test.len() as f64
    );
    println!("\nthe equivalent shell session:");
    println!("  qclassify gen --family werner --bell psi-minus --n 40 --seed 21 -o train.jsonl");
    println!("  qclassify label --task entanglement -i train.jsonl -o train.labeled.jsonl");
    println!(
        "  qclassify kernel --type quantum --alpha 3.14159265 -i train.labeled.jsonl -o K.csv"
    );
    println!("  qclassify train --kernel K.csv --data train.labeled.jsonl --task entanglement -o model.json");
    println!("  qclassify kernel --type quantum --alpha 3.14159265 -i train.labeled.jsonl -j test.jsonl -o K_cross.csv");
    println!("  qclassify predict --model model.json --kernel K_cross.csv --data test.jsonl -o preds.json");
    Ok(())
}
