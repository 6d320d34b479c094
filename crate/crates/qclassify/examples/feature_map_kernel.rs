//! Encode feature vectors through the ZZ+UC circuit and inspect the
//! fidelity kernel: symmetry, unit diagonal and positive semidefiniteness
//! of the Gram matrix.
//!
//! ```bash
//! cargo run --release --example feature_map_kernel
//! ```

use qclassify::qkernel::{encode, fidelity_kernel, gram_matrix, FeatureMapConfig};
use qclassify::states::{features, make_werner, BellKind, FeatureScheme};

fn main() -> qclassify::Result<()> {
    // single-qubit closed form: x = pi/2 against x = 0 gives exactly 1/2
    let tiny = FeatureMapConfig::new(1, 1.0, 1)?;
    let k = fidelity_kernel(&[std::f64::consts::FRAC_PI_2], &[0.0], &tiny)?;
    println!("1-qubit closed-form check: k(pi/2, 0) = {k:.12} (exact 0.5)\n");

    // full-size encoding of real states
    let cfg = FeatureMapConfig::for_scheme(FeatureScheme::Dm16).with_alpha(std::f64::consts::PI);
    let xs: Vec<Vec<f64>> = (0..12)
        .map(|i| {
            let p = i as f64 / 11.0;
            features(
                &make_werner(BellKind::PsiMinus, p).unwrap(),
                FeatureScheme::Dm16,
            )
        })
        .collect();

    let sv = encode(&xs[3], &cfg)?;
    println!(
        "encoded state: {} amplitudes, norm^2 = {:.12}",
        sv.amplitudes.len(),
        sv.norm_sqr()
    );

    let gram = gram_matrix(&xs, None, &cfg)?;
    gram.validate()?;
    let min_eig = gram.min_eigenvalue()?;
    println!(
        "gram: {}x{}, min eigenvalue {min_eig:.3e} (PSD)",
        gram.rows, gram.cols
    );

    println!("\nkernel row against the p = 0 state (fully mixed):");
    for (i, x) in xs.iter().enumerate() {
        let k = fidelity_kernel(&xs[0], x, &cfg)?;
        let p = i as f64 / 11.0;
        let bar = "#".repeat((k * 40.0) as usize);
        println!("  p = {p:.2}: k = {k:.4} {bar}");
    }
    Ok(())
}
