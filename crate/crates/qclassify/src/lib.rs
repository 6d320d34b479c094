//! Quantum-kernel classification of two-qubit mixed states.
//!
//! The crate generates Werner, Horodecki, MEMS and Bell-diagonal states,
//! labels them exactly (concurrence for entanglement, geometric discord
//! for quantumness of correlations), encodes them through a ZZ+UC feature
//! map simulated as a statevector, and classifies them with a kernel SVM
//! trained by sequential minimal optimization. Classical SVM kernels and a
//! small neural network serve as baselines, and a harness reproduces the
//! in-domain, cross-domain, robustness and discord experiments from
//! seeded configs.
//!
//! Start with the runnable examples (`cargo run --release --example
//! cross_domain_werner`) or the `qclassify` binary, which exposes the
//! dataset/kernel/train/predict/experiment pipeline as subcommands.

pub mod baselines;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod qkernel;
pub mod rng;
pub mod states;
pub mod svm;

pub use error::{Error, Result};
pub use harness::{
    compute_metrics, run_experiment, ExperimentConfig, ExperimentReport, MetricsReport, Preset,
};
pub use measures::{
    concurrence, discord_label, entanglement_label, geometric_discord, geometric_discord_bd,
};
pub use qkernel::{
    encode, fidelity_kernel, gram_matrix, FeatureMapConfig, KernelMatrix, StateVector,
};
pub use states::{
    apply_local_unitary, features, from_bloch, make_bell, make_bell_diagonal, make_horodecki,
    make_mems, make_werner, sample_family, sample_zero_discord_bd, to_bloch, BellKind, BlochForm,
    DensityMatrix, FamilyParams, FamilySpec, FeatureScheme, LocalUnitary, StateRecord,
};
pub use svm::{platt_fit, train_smo, SmoParams, SvmModel};
