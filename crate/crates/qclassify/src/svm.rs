//! Kernel SVM trained by sequential minimal optimization on a precomputed
//! Gram matrix, with Platt-scaled probabilities.
//!
//! The solver is the simplified SMO scheme: sweep samples, pick the worst
//! KKT violator's partner by maximum |E_i - E_j| with a seeded random
//! fallback, and take the analytic two-variable step. It stops once a full
//! sweep finds no violation beyond `tol`, `max_passes` times in a row, so
//! the returned multipliers satisfy the KKT conditions within `tol`.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qkernel::KernelMatrix;

/// Multipliers below this are not counted as support vectors.
pub const SUPPORT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoParams {
    /// Box constraint.
    pub c: f64,
    /// KKT violation tolerance.
    pub tol: f64,
    /// Consecutive clean sweeps before stopping.
    pub max_passes: usize,
    /// Seed for the random partner fallback.
    pub seed: u64,
    /// Record the dual objective after every successful pair step.
    pub record_objective: bool,
}

impl Default for SmoParams {
    fn default() -> Self {
        SmoParams {
            c: 1.0,
            tol: 1e-3,
            max_passes: 50,
            seed: 0,
            record_objective: false,
        }
    }
}

impl SmoParams {
    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Provenance stamped into saved model files.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelMetadata {
    /// Human-readable digest of the kernel configuration the Gram came from.
    pub kernel_digest: String,
    pub seed: u64,
}

/// Trained dual model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub alphas: Vec<f64>,
    pub b: f64,
    pub support_idx: Vec<usize>,
    pub train_labels: Vec<i8>,
    pub c: f64,
    pub platt_a: f64,
    pub platt_b: f64,
    #[serde(default)]
    pub metadata: ModelMetadata,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objective_trace: Vec<f64>,
}

fn check_labels(y: &[i8]) -> Result<()> {
    for &label in y {
        if label != 1 && label != -1 {
            return Err(Error::Contract(format!("labels must be +-1, got {label}")));
        }
    }
    Ok(())
}

fn dual_objective(k: &KernelMatrix, y: &[f64], alphas: &[f64]) -> f64 {
    let n = alphas.len();
    let mut obj: f64 = alphas.iter().sum();
    for i in 0..n {
        if alphas[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            obj -= 0.5 * alphas[i] * alphas[j] * y[i] * y[j] * k.get(i, j);
        }
    }
    obj
}

/// Train on a symmetric Gram matrix with +-1 labels.
///
/// Single-class input yields a constant predictor with decision value
/// equal to that class and a logged warning.
pub fn train_smo(k: &KernelMatrix, y: &[i8], params: &SmoParams) -> Result<SvmModel> {
    let n = y.len();
    if k.rows != n || k.cols != n {
        return Err(Error::Contract(format!(
            "gram is {}x{} but there are {n} labels",
            k.rows, k.cols
        )));
    }
    if !k.symmetric {
        return Err(Error::Contract("training gram must be symmetric".into()));
    }
    if n < 2 {
        return Err(Error::Contract("need at least two training samples".into()));
    }
    if params.c <= 0.0 {
        return Err(Error::Parameter(format!(
            "C must be positive, got {}",
            params.c
        )));
    }
    k.validate()?;
    check_labels(y)?;

    let yf: Vec<f64> = y.iter().map(|&v| v as f64).collect();

    if y.iter().all(|&v| v == y[0]) {
        log::warn!(
            "single-class training set; returning constant predictor for {}",
            y[0]
        );
        return Ok(SvmModel {
            alphas: vec![0.0; n],
            b: y[0] as f64,
            support_idx: vec![],
            train_labels: y.to_vec(),
            c: params.c,
            platt_a: -1.0,
            platt_b: 0.0,
            metadata: ModelMetadata::default(),
            objective_trace: vec![],
        });
    }

    let c = params.c;
    let mut alphas = vec![0.0f64; n];
    let mut b = 0.0f64;
    // E_i = f(x_i) - y_i; with all alphas zero, f = 0.
    let mut errors: Vec<f64> = yf.iter().map(|&v| -v).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut trace = vec![];
    if params.record_objective {
        trace.push(dual_objective(k, &yf, &alphas));
    }

    let take_step = |i: usize,
                     j: usize,
                     alphas: &mut Vec<f64>,
                     errors: &mut Vec<f64>,
                     b: &mut f64,
                     trace: &mut Vec<f64>|
     -> bool {
        if i == j {
            return false;
        }
        let (ai_old, aj_old) = (alphas[i], alphas[j]);
        let (yi, yj) = (yf[i], yf[j]);
        let (ei, ej) = (errors[i], errors[j]);
        let (lo, hi) = if yi != yj {
            ((aj_old - ai_old).max(0.0), (c + aj_old - ai_old).min(c))
        } else {
            ((ai_old + aj_old - c).max(0.0), (ai_old + aj_old).min(c))
        };
        if lo >= hi {
            return false;
        }
        let eta = k.get(i, i) + k.get(j, j) - 2.0 * k.get(i, j);
        let aj_new = if eta > 0.0 {
            (aj_old + yj * (ei - ej) / eta).clamp(lo, hi)
        } else {
            // Flat or concave direction: evaluate the objective at both ends.
            // Following Platt: psi(L) vs psi(H) via the first-order terms.
            let f1 = yi * (ei + *b) - ai_old * k.get(i, i) - yi * yj * aj_old * k.get(i, j);
            let f2 = yj * (ej + *b) - yi * yj * ai_old * k.get(i, j) - aj_old * k.get(j, j);
            let l1 = ai_old + yi * yj * (aj_old - lo);
            let h1 = ai_old + yi * yj * (aj_old - hi);
            let psi_lo = l1 * f1
                + lo * f2
                + 0.5 * l1 * l1 * k.get(i, i)
                + 0.5 * lo * lo * k.get(j, j)
                + yi * yj * lo * l1 * k.get(i, j);
            let psi_hi = h1 * f1
                + hi * f2
                + 0.5 * h1 * h1 * k.get(i, i)
                + 0.5 * hi * hi * k.get(j, j)
                + yi * yj * hi * h1 * k.get(i, j);
            if psi_lo < psi_hi - 1e-12 {
                lo
            } else if psi_hi < psi_lo - 1e-12 {
                hi
            } else {
                return false;
            }
        };
        if (aj_new - aj_old).abs() < 1e-12 * (aj_new + aj_old + 1e-12) {
            return false;
        }
        let ai_new = ai_old + yi * yj * (aj_old - aj_new);

        let b1 =
            *b - ei - yi * (ai_new - ai_old) * k.get(i, i) - yj * (aj_new - aj_old) * k.get(i, j);
        let b2 =
            *b - ej - yi * (ai_new - ai_old) * k.get(i, j) - yj * (aj_new - aj_old) * k.get(j, j);
        let b_new = if ai_new > 0.0 && ai_new < c {
            b1
        } else if aj_new > 0.0 && aj_new < c {
            b2
        } else {
            (b1 + b2) / 2.0
        };

        let (di, dj, db) = (yi * (ai_new - ai_old), yj * (aj_new - aj_old), b_new - *b);
        for (kk, e) in errors.iter_mut().enumerate() {
            *e += di * k.get(i, kk) + dj * k.get(j, kk) + db;
        }
        alphas[i] = ai_new;
        alphas[j] = aj_new;
        *b = b_new;
        if params.record_objective {
            trace.push(dual_objective(k, &yf, alphas));
        }
        true
    };

    let mut passes = 0usize;
    // Hard cap so pathological inputs cannot spin forever.
    let max_total_sweeps = params.max_passes.saturating_mul(200).max(2000);
    let mut sweeps = 0usize;
    while passes < params.max_passes && sweeps < max_total_sweeps {
        sweeps += 1;
        let mut num_changed = 0usize;
        for i in 0..n {
            let ei = errors[i];
            let r = yf[i] * ei;
            if (r < -params.tol && alphas[i] < c) || (r > params.tol && alphas[i] > 0.0) {
                // Partner with the largest error gap first.
                let mut best_j = usize::MAX;
                let mut best_gap = -1.0;
                for (jj, &ejj) in errors.iter().enumerate() {
                    if jj == i {
                        continue;
                    }
                    let gap = (ei - ejj).abs();
                    if gap > best_gap {
                        best_gap = gap;
                        best_j = jj;
                    }
                }
                let mut stepped = best_j != usize::MAX
                    && take_step(i, best_j, &mut alphas, &mut errors, &mut b, &mut trace);
                if !stepped {
                    let mut order: Vec<usize> = (0..n).filter(|&jj| jj != i).collect();
                    order.shuffle(&mut rng);
                    for jj in order {
                        if jj == best_j {
                            continue;
                        }
                        if take_step(i, jj, &mut alphas, &mut errors, &mut b, &mut trace) {
                            stepped = true;
                            break;
                        }
                    }
                }
                if stepped {
                    num_changed += 1;
                }
            }
        }
        if num_changed == 0 {
            passes += 1;
        } else {
            passes = 0;
        }
    }

    // Final offset: the incremental b drifts within the tolerance window
    // and is not even unique when every multiplier ends on a bound. Use
    // the mean over free support vectors, or the midpoint of the feasible
    // interval when there are none.
    let margins: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| alphas[j] * yf[j] * k.get(i, j)).sum::<f64>())
        .collect();
    let free: Vec<usize> = (0..n)
        .filter(|&i| alphas[i] > SUPPORT_TOL && alphas[i] < c - SUPPORT_TOL)
        .collect();
    b = if !free.is_empty() {
        free.iter().map(|&i| yf[i] - margins[i]).sum::<f64>() / free.len() as f64
    } else {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..n {
            let at_upper = alphas[i] >= c - SUPPORT_TOL;
            match (at_upper, y[i] > 0) {
                (false, true) => lo = lo.max(1.0 - margins[i]),
                (false, false) => hi = hi.min(-1.0 - margins[i]),
                (true, true) => hi = hi.min(1.0 - margins[i]),
                (true, false) => lo = lo.max(-1.0 - margins[i]),
            }
        }
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo + hi) / 2.0,
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => 0.0,
        }
    };

    let support_idx: Vec<usize> = alphas
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > SUPPORT_TOL)
        .map(|(i, _)| i)
        .collect();
    Ok(SvmModel {
        alphas,
        b,
        support_idx,
        train_labels: y.to_vec(),
        c,
        platt_a: -1.0,
        platt_b: 0.0,
        metadata: ModelMetadata::default(),
        objective_trace: trace,
    })
}

impl SvmModel {
    /// Dual objective at the trained multipliers.
    pub fn objective(&self, k: &KernelMatrix) -> f64 {
        let yf: Vec<f64> = self.train_labels.iter().map(|&v| v as f64).collect();
        dual_objective(k, &yf, &self.alphas)
    }

    /// Worst KKT violation of the trained multipliers on the training Gram.
    pub fn kkt_violation(&self, k: &KernelMatrix) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.alphas.len() {
            let fi = self.decision(k.row(i)).expect("gram row length");
            let margin = self.train_labels[i] as f64 * fi;
            let a = self.alphas[i];
            let v = if a <= SUPPORT_TOL {
                (1.0 - margin).max(0.0)
            } else if a >= self.c - SUPPORT_TOL {
                (margin - 1.0).max(0.0)
            } else {
                (margin - 1.0).abs()
            };
            worst = worst.max(v);
        }
        worst
    }
}

impl SvmModel {
    /// Decision value for one kernel row aligned with the training order.
    pub fn decision(&self, k_row: &[f64]) -> Result<f64> {
        if k_row.len() != self.alphas.len() {
            return Err(Error::Contract(format!(
                "kernel row has {} columns, model expects {}",
                k_row.len(),
                self.alphas.len()
            )));
        }
        let mut f = self.b;
        for (i, &a) in self.alphas.iter().enumerate() {
            if a != 0.0 {
                f += a * self.train_labels[i] as f64 * k_row[i];
            }
        }
        Ok(f)
    }

    pub fn decision_values(&self, k_cross: &KernelMatrix) -> Result<Vec<f64>> {
        (0..k_cross.rows)
            .map(|i| self.decision(k_cross.row(i)))
            .collect()
    }

    /// Class predictions; sign(0) maps to -1.
    pub fn predict(&self, k_cross: &KernelMatrix) -> Result<Vec<i8>> {
        Ok(self
            .decision_values(k_cross)?
            .into_iter()
            .map(|f| if f > 0.0 { 1 } else { -1 })
            .collect())
    }

    /// Platt probability of the positive class.
    pub fn predict_proba(&self, k_cross: &KernelMatrix) -> Result<Vec<f64>> {
        Ok(self
            .decision_values(k_cross)?
            .into_iter()
            .map(|f| sigmoid_predict(f, self.platt_a, self.platt_b))
            .collect())
    }
}

/// Numerically stable 1 / (1 + exp(a f + b)).
pub fn sigmoid_predict(decision: f64, a: f64, b: f64) -> f64 {
    let f_apb = decision * a + b;
    if f_apb >= 0.0 {
        (-f_apb).exp() / (1.0 + (-f_apb).exp())
    } else {
        1.0 / (1.0 + f_apb.exp())
    }
}

const PLATT_MAX_ITER: usize = 100;

/// Fit the Platt sigmoid on training decision values by Newton descent
/// with the standard smoothed targets, storing (A, B) on the model.
///
/// Falls back to A = -1, B = 0 with a warning when Newton does not
/// converge within 100 iterations.
pub fn platt_fit(model: &mut SvmModel, k_train: &KernelMatrix, y: &[i8]) -> Result<(f64, f64)> {
    if k_train.rows != model.alphas.len() {
        return Err(Error::Contract(format!(
            "gram has {} rows, model expects {}",
            k_train.rows,
            model.alphas.len()
        )));
    }
    if y.len() != k_train.rows {
        return Err(Error::Contract("label count mismatch".into()));
    }
    check_labels(y)?;
    let decisions = model.decision_values(k_train)?;
    let (a, b) = sigmoid_train(&decisions, y);
    model.platt_a = a;
    model.platt_b = b;
    Ok((a, b))
}

/// Newton fit of P(+1 | f) = 1 / (1 + exp(A f + B)).
fn sigmoid_train(dec_values: &[f64], labels: &[i8]) -> (f64, f64) {
    let l = dec_values.len();
    let prior1 = labels.iter().filter(|&&v| v > 0).count() as f64;
    let prior0 = l as f64 - prior1;

    let min_step = 1e-10;
    let sigma = 1e-12;
    let eps = 1e-5;

    let hi_target = (prior1 + 1.0) / (prior1 + 2.0);
    let lo_target = 1.0 / (prior0 + 2.0);
    let t: Vec<f64> = labels
        .iter()
        .map(|&v| if v > 0 { hi_target } else { lo_target })
        .collect();

    let mut a = 0.0f64;
    let mut b = ((prior0 + 1.0) / (prior1 + 1.0)).ln();

    let objective = |a: f64, b: f64| -> f64 {
        let mut fval = 0.0;
        for i in 0..l {
            let f_apb = dec_values[i] * a + b;
            if f_apb >= 0.0 {
                fval += t[i] * f_apb + (1.0 + (-f_apb).exp()).ln();
            } else {
                fval += (t[i] - 1.0) * f_apb + (1.0 + f_apb.exp()).ln();
            }
        }
        fval
    };
    let mut fval = objective(a, b);
    let mut converged = false;

    for _ in 0..PLATT_MAX_ITER {
        let (mut h11, mut h22) = (sigma, sigma);
        let (mut h21, mut g1, mut g2) = (0.0, 0.0, 0.0);
        for i in 0..l {
            let f_apb = dec_values[i] * a + b;
            let (p, q) = if f_apb >= 0.0 {
                let e = (-f_apb).exp();
                (e / (1.0 + e), 1.0 / (1.0 + e))
            } else {
                let e = f_apb.exp();
                (1.0 / (1.0 + e), e / (1.0 + e))
            };
            let d2 = p * q;
            h11 += dec_values[i] * dec_values[i] * d2;
            h22 += d2;
            h21 += dec_values[i] * d2;
            let d1 = t[i] - p;
            g1 += dec_values[i] * d1;
            g2 += d1;
        }
        if g1.abs() < eps && g2.abs() < eps {
            converged = true;
            break;
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;

        let mut stepsize = 1.0;
        while stepsize >= min_step {
            let (na, nb) = (a + stepsize * da, b + stepsize * db);
            let newf = objective(na, nb);
            if newf < fval + 1e-4 * stepsize * gd {
                a = na;
                b = nb;
                fval = newf;
                break;
            }
            stepsize /= 2.0;
        }
        if stepsize < min_step {
            // Line search stalled at the optimum; gradients are already tiny.
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!(
            "Platt scaling did not converge in {PLATT_MAX_ITER} iterations; using A=-1, B=0"
        );
        return (-1.0, 0.0);
    }
    (a, b)
}
