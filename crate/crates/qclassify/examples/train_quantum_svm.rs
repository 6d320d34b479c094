//! Train a quantum-kernel SVM by hand with the library API: sample
//! states, label them, build the fidelity Gram, run SMO, calibrate
//! probabilities and evaluate on a fresh pool.
//!
//! ```bash
//! cargo run --release --example train_quantum_svm
//! ```

use qclassify::measures::entanglement_label;
use qclassify::qkernel::{gram_matrix, FeatureMapConfig};
use qclassify::states::{features, sample_family, BellKind, FamilySpec, FeatureScheme};
use qclassify::svm::{platt_fit, train_smo, SmoParams};

fn main() -> qclassify::Result<()> {
    let scheme = FeatureScheme::Dm16;
    let cfg = FeatureMapConfig::for_scheme(scheme).with_alpha(std::f64::consts::PI);

    let train = sample_family(
        &FamilySpec::Werner {
            bell: BellKind::PsiMinus,
            p_min: 0.0,
            p_max: 1.0,
        },
        60,
        11,
    )?;
    let x_train: Vec<Vec<f64>> = train.iter().map(|r| features(&r.dm, scheme)).collect();
    let y_train: Vec<i8> = train
        .iter()
        .map(|r| entanglement_label(&r.dm).map(|l| l.value))
        .collect::<qclassify::Result<_>>()?;

    let gram = gram_matrix(&x_train, None, &cfg)?;
    let mut model = train_smo(&gram, &y_train, &SmoParams::default())?;
    platt_fit(&mut model, &gram, &y_train)?;
    println!(
        "trained on 60 Werner psi- states: {} support vectors, b = {:.4}",
        model.support_idx.len(),
        model.b
    );

    // evaluate on a different Bell kind: cross-domain by construction
    let test = sample_family(
        &FamilySpec::Werner {
            bell: BellKind::PhiPlus,
            p_min: 0.0,
            p_max: 1.0,
        },
        30,
        12,
    )?;
    let x_test: Vec<Vec<f64>> = test.iter().map(|r| features(&r.dm, scheme)).collect();
    let cross = gram_matrix(&x_train, Some(&x_test), &cfg)?;
    let preds = model.predict(&cross)?;
    let probs = model.predict_proba(&cross)?;

    let mut correct = 0;
    println!(
        "\n{:>6} {:>12} {:>6} {:>6} {:>8}",
        "p", "concurrence", "true", "pred", "P(ent)"
    );
    for ((rec, &pred), &prob) in test.iter().zip(&preds).zip(&probs) {
        let label = entanglement_label(&rec.dm)?;
        if label.value == pred {
            correct += 1;
        }
        let p = rec.family.plot_parameter();
        println!(
            "{p:>6.3} {:>12.4} {:>6} {pred:>6} {prob:>8.3}{}",
            label.concurrence,
            label.value,
            if label.value != pred { "  <- miss" } else { "" }
        );
    }
    println!(
        "\ncross-domain accuracy (psi- model on phi+ states): {}/{} = {:.1}%",
        correct,
        test.len(),
        100.0 * correct as f64 / test.len() as f64
    );
    Ok(())
}
