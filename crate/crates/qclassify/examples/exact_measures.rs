//! Exact entanglement and discord measures along the Werner line, checked
//! against their closed forms.
//!
//! ```bash
//! cargo run --release --example exact_measures
//! ```

use qclassify::measures::{concurrence, geometric_discord, geometric_discord_bd};
use qclassify::states::{make_bell_diagonal, make_werner, to_bloch, BellKind};

fn main() -> qclassify::Result<()> {
    println!("Werner states p |psi-><psi-| + (1-p)/4 I\n");
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12}",
        "p", "concurrence", "(3p-1)/2+", "discord", "p^2/2"
    );
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let rho = make_werner(BellKind::PsiMinus, p)?;
        let c = concurrence(&rho)?;
        let d = geometric_discord(&rho)?;
        println!(
            "{p:>6.2} {c:>12.6} {:>12.6} {d:>12.6} {:>12.6}",
            ((3.0 * p - 1.0) / 2.0).max(0.0),
            p * p / 2.0
        );
    }

    println!("\nBell-diagonal geometric discord vs the closed form:\n");
    let cases = [(-0.5, -0.5, -0.5), (0.3, -0.2, 0.1), (0.0, 0.7, 0.0)];
    for (t11, t22, t33) in cases {
        let rho = make_bell_diagonal(t11, t22, t33)?;
        let general = geometric_discord(&rho)?;
        let closed = geometric_discord_bd(t11, t22, t33);
        println!(
            "t = ({t11:>5.2}, {t22:>5.2}, {t33:>5.2}): general {general:.9}, closed form {closed:.9}, diff {:.1e}",
            (general - closed).abs()
        );
    }

    println!("\nBloch correlation of the four Bell states (text convention):");
    for kind in BellKind::ALL {
        let bf = to_bloch(&qclassify::make_bell(kind));
        println!(
            "  {kind:<10} T = diag({:+.0}, {:+.0}, {:+.0})",
            bf.t[0][0], bf.t[1][1], bf.t[2][2]
        );
    }
    Ok(())
}
