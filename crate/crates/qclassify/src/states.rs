//! Two-qubit state families: construction, validation, Bloch-form
//! conversion, feature extraction and seeded dataset sampling.
//!
//! Basis order is |00>, |01>, |10>, |11>. Bell-state naming follows the
//! convention psi_pm = (|00> +- |11>)/sqrt(2), phi_pm = (|01> +- |10>)/sqrt(2);
//! with it the singlet (|01> - |10>)/sqrt(2) is `PhiMinus` and sits at
//! correlation diag(-1,-1,-1). Much of the literature swaps the psi/phi
//! letters between the two pairs; when comparing coordinates, trust the
//! correlation signatures (`to_bloch` on `make_bell`, also printed by the
//! exact_measures example) rather than the names: psi- at (-1,+1,+1),
//! psi+ at (+1,-1,+1), phi- at (-1,-1,-1), phi+ at (+1,+1,-1).

use rand::Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::rng::stream_rng;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = -1e-10;

/// Draw budget for the Bell-diagonal rejection sampler, per record.
pub const REJECTION_BUDGET: u64 = 1_000_000;

/// 2x2 identity.
pub fn identity2() -> CMatrix {
    CMatrix::identity(2)
}

/// Pauli matrix sigma_i for i in 1..=3.
pub fn pauli(i: usize) -> CMatrix {
    let i1 = C64::new(0.0, 1.0);
    match i {
        1 => CMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        2 => CMatrix::from_rows(&[&[ZERO, -i1], &[i1, ZERO]]),
        3 => CMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]]),
        _ => panic!("pauli index must be 1, 2 or 3"),
    }
}

/// The four maximally entangled basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellKind {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiMinus,
        BellKind::PsiPlus,
        BellKind::PhiMinus,
        BellKind::PhiPlus,
    ];

    /// Amplitudes over |00>,|01>,|10>,|11>.
    pub fn amplitudes(self) -> [C64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = C64::new(h, 0.0);
        match self {
            BellKind::PsiPlus => [a, ZERO, ZERO, a],
            BellKind::PsiMinus => [a, ZERO, ZERO, -a],
            BellKind::PhiPlus => [ZERO, a, a, ZERO],
            BellKind::PhiMinus => [ZERO, a, -a, ZERO],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PsiMinus => "psi-minus",
            BellKind::PsiPlus => "psi-plus",
            BellKind::PhiMinus => "phi-minus",
            BellKind::PhiPlus => "phi-plus",
        }
    }
}

impl std::fmt::Display for BellKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A two-qubit density matrix: 4x4 complex, Hermitian, unit trace, PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Wrap a raw matrix after checking all invariants.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.rows != 4 || m.cols != 4 {
            return Err(Error::Contract(format!(
                "density matrix must be 4x4, got {}x{}",
                m.rows, m.cols
            )));
        }
        let dm = DensityMatrix { m };
        dm.validate()?;
        Ok(dm)
    }

    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        DensityMatrix { m }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    /// Check Hermiticity, unit trace and positivity at the module tolerances.
    pub fn validate(&self) -> Result<()> {
        let defect = self.m.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::Contract(format!(
                "not Hermitian: defect {defect:.3e}"
            )));
        }
        let tr = self.m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Contract(format!("trace is {tr}, expected 1")));
        }
        let min_eig = crate::linalg::min_eigenvalue(&self.m, 1e-10)?;
        if min_eig < PSD_TOL {
            return Err(Error::Contract(format!(
                "not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// Row-major flat encoding: [re00, im00, re01, im01, ...], 32 reals.
    pub fn to_flat(&self) -> [f64; 32] {
        let mut out = [0.0; 32];
        for (k, z) in self.m.data.iter().enumerate() {
            out[2 * k] = z.re;
            out[2 * k + 1] = z.im;
        }
        out
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.len() != 32 {
            return Err(Error::Contract(format!(
                "flat density matrix needs 32 reals, got {}",
                flat.len()
            )));
        }
        let data: Vec<C64> = flat.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
        DensityMatrix::new(CMatrix {
            rows: 4,
            cols: 4,
            data,
        })
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_flat().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let flat = Vec::<f64>::deserialize(deserializer)?;
        DensityMatrix::from_flat(&flat).map_err(D::Error::custom)
    }
}

/// Bloch decomposition: local polarization vectors and 3x3 correlation matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochForm {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

/// One local rotation angle per qubit; the joint operator is
/// U(theta1) (x) U(theta2) with U the real 2x2 rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalUnitary {
    pub theta1: f64,
    pub theta2: f64,
}

impl LocalUnitary {
    pub fn random(rng: &mut impl Rng) -> Self {
        LocalUnitary {
            theta1: rng.gen_range(0.0..std::f64::consts::TAU),
            theta2: rng.gen_range(0.0..std::f64::consts::TAU),
        }
    }

    /// The 4x4 operator U(theta1) (x) U(theta2).
    pub fn operator(&self) -> CMatrix {
        rotation2(self.theta1).kron(&rotation2(self.theta2))
    }
}

fn rotation2(theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    CMatrix::from_real(2, 2, &[c, -s, s, c])
}

/// Parameters identifying a sampled state within its family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyParams {
    Werner {
        bell: BellKind,
        p: f64,
    },
    Horodecki {
        bell: BellKind,
        p: f64,
    },
    Mems {
        q: f64,
        r: f64,
        s: f64,
        t: f64,
        lambda: f64,
    },
    BellDiagonal {
        t11: f64,
        t22: f64,
        t33: f64,
    },
}

impl FamilyParams {
    /// Rebuild the density matrix these parameters describe.
    pub fn build(&self) -> Result<DensityMatrix> {
        match *self {
            FamilyParams::Werner { bell, p } => make_werner(bell, p),
            FamilyParams::Horodecki { bell, p } => make_horodecki(bell, p),
            FamilyParams::Mems { q, r, s, t, lambda } => make_mems(q, r, s, t, lambda),
            FamilyParams::BellDiagonal { t11, t22, t33 } => make_bell_diagonal(t11, t22, t33),
        }
    }

    /// Scalar parameter used as the x-axis in plot data: p for Werner and
    /// Horodecki, lambda for MEMS, max |t_ii| for Bell-diagonal states.
    pub fn plot_parameter(&self) -> f64 {
        match *self {
            FamilyParams::Werner { p, .. } | FamilyParams::Horodecki { p, .. } => p,
            FamilyParams::Mems { lambda, .. } => lambda,
            FamilyParams::BellDiagonal { t11, t22, t33 } => t11.abs().max(t22.abs()).max(t33.abs()),
        }
    }
}

/// One dataset entry: provenance parameters, the state itself and labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub id: u64,
    pub family: FamilyParams,
    pub dm: DensityMatrix,
    pub label_ent: Option<i8>,
    pub label_discord: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub measure: Option<f64>,
}

/// Pure Bell-state projector |B><B|.
pub fn make_bell(kind: BellKind) -> DensityMatrix {
    let v = kind.amplitudes();
    DensityMatrix::new_unchecked(CMatrix::outer(&v))
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::Parameter(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Werner state p |B><B| + (1-p)/4 I.
pub fn make_werner(kind: BellKind, p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    let bell = make_bell(kind);
    let mixed = CMatrix::identity(4).scale(C64::new((1.0 - p) / 4.0, 0.0));
    Ok(DensityMatrix::new_unchecked(
        bell.matrix().scale(C64::new(p, 0.0)).add(&mixed),
    ))
}

/// Horodecki state p |B><B| + (1-p) |00><00|.
pub fn make_horodecki(kind: BellKind, p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    let bell = make_bell(kind);
    let mut ground = CMatrix::zeros(4, 4);
    ground[(0, 0)] = ONE;
    Ok(DensityMatrix::new_unchecked(
        bell.matrix()
            .scale(C64::new(p, 0.0))
            .add(&ground.scale(C64::new(1.0 - p, 0.0))),
    ))
}

const MEMS_SUM_TOL: f64 = 1e-12;

/// Five-parameter X-form mixed state; the parts must be non-negative and
/// sum to one.
pub fn make_mems(q: f64, r: f64, s: f64, t: f64, lambda: f64) -> Result<DensityMatrix> {
    for (name, v) in [("q", q), ("r", r), ("s", s), ("t", t), ("lambda", lambda)] {
        if v < 0.0 || !v.is_finite() {
            return Err(Error::Parameter(format!(
                "MEMS part {name} must be non-negative, got {v}"
            )));
        }
    }
    let sum = q + r + s + t + lambda;
    if (sum - 1.0).abs() > MEMS_SUM_TOL {
        return Err(Error::Parameter(format!(
            "MEMS parts must sum to 1, got {sum}"
        )));
    }
    let half = lambda / 2.0;
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = C64::new(q + half, 0.0);
    m[(0, 3)] = C64::new(half, 0.0);
    m[(1, 1)] = C64::new(s, 0.0);
    m[(2, 2)] = C64::new(t, 0.0);
    m[(3, 0)] = C64::new(half, 0.0);
    m[(3, 3)] = C64::new(r + half, 0.0);
    Ok(DensityMatrix::new_unchecked(m))
}

/// The four positivity constraints on Bell-diagonal correlation values,
/// each scaled so that the state eigenvalues are constraint/4.
pub fn bell_diagonal_constraints(t11: f64, t22: f64, t33: f64) -> [(&'static str, f64); 4] {
    [
        ("1 - t11 + t22 + t33 >= 0", 1.0 - t11 + t22 + t33),
        ("1 + t11 - t22 + t33 >= 0", 1.0 + t11 - t22 + t33),
        ("1 + t11 + t22 - t33 >= 0", 1.0 + t11 + t22 - t33),
        ("1 - t11 - t22 - t33 >= 0", 1.0 - t11 - t22 - t33),
    ]
}

const BD_CONSTRAINT_SLACK: f64 = -1e-12;

/// Bell-diagonal state (I + sum_i t_ii sigma_i (x) sigma_i)/4.
pub fn make_bell_diagonal(t11: f64, t22: f64, t33: f64) -> Result<DensityMatrix> {
    for (label, value) in bell_diagonal_constraints(t11, t22, t33) {
        if value < BD_CONSTRAINT_SLACK {
            return Err(Error::Infeasible(format!(
                "Bell-diagonal constraint violated: {label} (value {value:.3e})"
            )));
        }
    }
    let mut m = CMatrix::identity(4);
    for (i, t) in [t11, t22, t33].iter().enumerate() {
        let sig = pauli(i + 1);
        m = m.add(&sig.kron(&sig).scale(C64::new(*t, 0.0)));
    }
    Ok(DensityMatrix::new_unchecked(m.scale(C64::new(0.25, 0.0))))
}

/// Conjugate rho by the local rotation pair.
pub fn apply_local_unitary(rho: &DensityMatrix, u: &LocalUnitary) -> DensityMatrix {
    let op = u.operator();
    DensityMatrix::new_unchecked(op.matmul(rho.matrix()).matmul(&op.adjoint()))
}

/// Pauli expectation values of rho.
pub fn to_bloch(rho: &DensityMatrix) -> BlochForm {
    let eye = identity2();
    let mut a = [0.0; 3];
    let mut b = [0.0; 3];
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        a[i] = pauli(i + 1).kron(&eye).matmul(rho.matrix()).trace().re;
        b[i] = eye.kron(&pauli(i + 1)).matmul(rho.matrix()).trace().re;
        for j in 0..3 {
            t[i][j] = pauli(i + 1)
                .kron(&pauli(j + 1))
                .matmul(rho.matrix())
                .trace()
                .re;
        }
    }
    BlochForm { a, b, t }
}

/// Reassemble a density matrix from its Bloch form; fails when the
/// parameters do not describe a positive operator.
pub fn from_bloch(bf: &BlochForm) -> Result<DensityMatrix> {
    let eye = identity2();
    let mut m = CMatrix::identity(4);
    for i in 0..3 {
        m = m.add(&pauli(i + 1).kron(&eye).scale(C64::new(bf.a[i], 0.0)));
        m = m.add(&eye.kron(&pauli(i + 1)).scale(C64::new(bf.b[i], 0.0)));
        for j in 0..3 {
            m = m.add(
                &pauli(i + 1)
                    .kron(&pauli(j + 1))
                    .scale(C64::new(bf.t[i][j], 0.0)),
            );
        }
    }
    let m = m.scale(C64::new(0.25, 0.0));
    let min_eig = crate::linalg::min_eigenvalue(&m, 1e-10)?;
    if min_eig < PSD_TOL {
        return Err(Error::Infeasible(format!(
            "Bloch parameters give a non-positive matrix: min eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(DensityMatrix::new_unchecked(m))
}

/// Feature layouts understood by the classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureScheme {
    /// 16 reals: the four diagonal entries, then (re, im) of each upper
    /// off-diagonal pair in order (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
    #[default]
    Dm16,
    /// 15 reals: a, b, then the correlation matrix row-major.
    Bloch15,
}

impl FeatureScheme {
    pub fn len(self) -> usize {
        match self {
            FeatureScheme::Dm16 => 16,
            FeatureScheme::Bloch15 => 15,
        }
    }

    pub fn is_empty(self) -> bool {
        false
    }
}

const UPPER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Flatten a state into the classifier feature vector.
pub fn features(rho: &DensityMatrix, scheme: FeatureScheme) -> Vec<f64> {
    match scheme {
        FeatureScheme::Dm16 => {
            let mut out = Vec::with_capacity(16);
            for i in 0..4 {
                out.push(rho.get(i, i).re);
            }
            for (i, j) in UPPER_PAIRS {
                let z = rho.get(i, j);
                out.push(z.re);
                out.push(z.im);
            }
            out
        }
        FeatureScheme::Bloch15 => {
            let bf = to_bloch(rho);
            let mut out = Vec::with_capacity(15);
            out.extend_from_slice(&bf.a);
            out.extend_from_slice(&bf.b);
            for row in &bf.t {
                out.extend_from_slice(row);
            }
            out
        }
    }
}

/// Sampling description for one state family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    Werner {
        bell: BellKind,
        #[serde(default)]
        p_min: f64,
        #[serde(default = "one")]
        p_max: f64,
    },
    Horodecki {
        bell: BellKind,
        #[serde(default)]
        p_min: f64,
        #[serde(default = "one")]
        p_max: f64,
    },
    Mems,
    BellDiagonal {
        t_min: f64,
        t_max: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl FamilySpec {
    fn validate(&self) -> Result<()> {
        match *self {
            FamilySpec::Werner { p_min, p_max, .. }
            | FamilySpec::Horodecki { p_min, p_max, .. } => {
                if !(0.0..=1.0).contains(&p_min) || !(0.0..=1.0).contains(&p_max) || p_min > p_max {
                    return Err(Error::Parameter(format!(
                        "p range [{p_min}, {p_max}] must be an interval inside [0, 1]"
                    )));
                }
            }
            FamilySpec::Mems => {}
            FamilySpec::BellDiagonal { t_min, t_max } => {
                if !(-1.0..=1.0).contains(&t_min) || !(-1.0..=1.0).contains(&t_max) || t_min > t_max
                {
                    return Err(Error::Parameter(format!(
                        "t range [{t_min}, {t_max}] must be an interval inside [-1, 1]"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn sample_one(spec: &FamilySpec, index: u64, seed: u64) -> Result<StateRecord> {
    let mut rng = stream_rng(seed, index);
    let (family, dm) = match *spec {
        FamilySpec::Werner { bell, p_min, p_max } => {
            let p = sample_range(&mut rng, p_min, p_max);
            (FamilyParams::Werner { bell, p }, make_werner(bell, p)?)
        }
        FamilySpec::Horodecki { bell, p_min, p_max } => {
            let p = sample_range(&mut rng, p_min, p_max);
            (
                FamilyParams::Horodecki { bell, p },
                make_horodecki(bell, p)?,
            )
        }
        FamilySpec::Mems => {
            let [q, r, s, t, lambda] = sample_simplex5(&mut rng);
            (
                FamilyParams::Mems { q, r, s, t, lambda },
                make_mems(q, r, s, t, lambda)?,
            )
        }
        FamilySpec::BellDiagonal { t_min, t_max } => {
            let mut accepted = None;
            for _ in 0..REJECTION_BUDGET {
                let t11 = sample_range(&mut rng, t_min, t_max);
                let t22 = sample_range(&mut rng, t_min, t_max);
                let t33 = sample_range(&mut rng, t_min, t_max);
                if bell_diagonal_constraints(t11, t22, t33)
                    .iter()
                    .all(|&(_, v)| v >= 0.0)
                {
                    accepted = Some((t11, t22, t33));
                    break;
                }
            }
            let (t11, t22, t33) = accepted.ok_or(Error::SamplingExhausted {
                draws: REJECTION_BUDGET,
                context: format!("no Bell-diagonal point found in t range [{t_min}, {t_max}]^3"),
            })?;
            let dm = make_bell_diagonal(t11, t22, t33)?;
            // The sampler must never hand out a constraint-violating point.
            assert!(
                bell_diagonal_constraints(t11, t22, t33)
                    .iter()
                    .all(|&(_, v)| v >= 0.0),
                "rejection sampler accepted an infeasible point"
            );
            (FamilyParams::BellDiagonal { t11, t22, t33 }, dm)
        }
    };
    Ok(StateRecord {
        id: index,
        family,
        dm,
        label_ent: None,
        label_discord: None,
        measure: None,
    })
}

fn sample_range(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// Uniform point on the 4-simplex via sorted uniform gaps.
fn sample_simplex5(rng: &mut impl Rng) -> [f64; 5] {
    let mut cuts = [0.0f64; 4];
    for c in &mut cuts {
        *c = rng.gen_range(0.0..1.0);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    [
        cuts[0],
        cuts[1] - cuts[0],
        cuts[2] - cuts[1],
        cuts[3] - cuts[2],
        1.0 - cuts[3],
    ]
}

/// Draw `n` records from a family, deterministically in (spec, seed).
pub fn sample_family(spec: &FamilySpec, n: usize, seed: u64) -> Result<Vec<StateRecord>> {
    if n == 0 {
        return Err(Error::Parameter("sample count must be >= 1".into()));
    }
    spec.validate()?;
    (0..n as u64)
        .into_par_iter()
        .map(|i| sample_one(spec, i, seed))
        .collect()
}

/// Draw `n` zero-discord Bell-diagonal states: a single correlation axis,
/// chosen uniformly, carries a magnitude uniform over the given range.
pub fn sample_zero_discord_bd(
    t_min: f64,
    t_max: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<StateRecord>> {
    if n == 0 {
        return Err(Error::Parameter("sample count must be >= 1".into()));
    }
    if !(-1.0..=1.0).contains(&t_min) || !(-1.0..=1.0).contains(&t_max) || t_min > t_max {
        return Err(Error::Parameter(format!(
            "t range [{t_min}, {t_max}] must be an interval inside [-1, 1]"
        )));
    }
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let axis = rng.gen_range(0..3usize);
            let value = sample_range(&mut rng, t_min, t_max);
            let mut t = [0.0f64; 3];
            t[axis] = value;
            let dm = make_bell_diagonal(t[0], t[1], t[2])?;
            Ok(StateRecord {
                id: i,
                family: FamilyParams::BellDiagonal {
                    t11: t[0],
                    t22: t[1],
                    t33: t[2],
                },
                dm,
                label_ent: None,
                label_discord: None,
                measure: None,
            })
        })
        .collect()
}

/// Apply a fresh random local rotation to every record, stream-seeded so
/// the output is a pure function of (input, seed).
pub fn rotate_records(records: &[StateRecord], seed: u64) -> Vec<StateRecord> {
    records
        .par_iter()
        .enumerate()
        .map(|(i, rec)| {
            let mut rng = stream_rng(seed, i as u64);
            let u = LocalUnitary::random(&mut rng);
            let mut out = rec.clone();
            out.dm = apply_local_unitary(&rec.dm, &u);
            out
        })
        .collect()
}
