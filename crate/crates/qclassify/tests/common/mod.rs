//! Shared oracles for the integration suites. These deliberately avoid
//! the library's solver and simulator code paths: the QP oracle
//! enumerates active sets exactly, and the circuit oracle multiplies
//! explicit gate matrices.
#![allow(dead_code)] // each test binary uses a different subset

use qclassify::qkernel::KernelMatrix;

/// Exact dual SVM solution by active-set enumeration, workable up to
/// n ~ 10. Every sample is assigned one of {alpha = 0, alpha = C, free};
/// free multipliers and the offset come from the KKT equality system;
/// infeasible assignments are discarded and the best feasible objective
/// wins.
pub fn qp_oracle(k: &KernelMatrix, y: &[i8], c: f64) -> (Vec<f64>, f64, f64) {
    let n = y.len();
    assert!(n <= 10, "oracle is exponential in n");
    let yf: Vec<f64> = y.iter().map(|&v| v as f64).collect();
    let tol = 1e-7;

    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let mut assignment = vec![0u8; n]; // 0 -> zero, 1 -> C, 2 -> free
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut rem = code;
        for slot in assignment.iter_mut() {
            *slot = (rem % 3) as u8;
            rem /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| assignment[i] == 2).collect();
        let upper: Vec<usize> = (0..n).filter(|&i| assignment[i] == 1).collect();

        let mut alphas = vec![0.0f64; n];
        for &i in &upper {
            alphas[i] = c;
        }

        let b;
        if free.is_empty() {
            // equality constraint must already hold
            let balance: f64 = alphas.iter().zip(&yf).map(|(a, y)| a * y).sum();
            if balance.abs() > tol {
                continue;
            }
            // pick b inside the interval allowed by the inequality KKT
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for i in 0..n {
                let g: f64 = (0..n).map(|j| alphas[j] * yf[j] * k.get(i, j)).sum();
                match (assignment[i], y[i] > 0) {
                    (0, true) => lo = lo.max(1.0 - g),
                    (0, false) => hi = hi.min(-1.0 - g),
                    (1, true) => hi = hi.min(1.0 - g),
                    (1, false) => lo = lo.max(-1.0 - g),
                    _ => unreachable!(),
                }
            }
            if lo > hi + tol {
                continue;
            }
            b = if lo.is_infinite() && hi.is_infinite() {
                0.0
            } else if lo.is_infinite() {
                hi
            } else if hi.is_infinite() {
                lo
            } else {
                (lo + hi) / 2.0
            };
        } else {
            // solve for the free multipliers and b:
            //   sum_F K_ij y_j a_j + b = y_i - sum_U C y_j K_ij   (i in F)
            //   sum_F y_j a_j = -sum_U C y_j
            let m = free.len() + 1;
            let mut mat = vec![vec![0.0f64; m + 1]; m];
            for (row, &i) in free.iter().enumerate() {
                for (col, &j) in free.iter().enumerate() {
                    mat[row][col] = k.get(i, j) * yf[j];
                }
                mat[row][free.len()] = 1.0;
                let fixed: f64 = upper.iter().map(|&j| c * yf[j] * k.get(i, j)).sum();
                mat[row][m] = yf[i] - fixed;
            }
            for (col, &j) in free.iter().enumerate() {
                mat[free.len()][col] = yf[j];
            }
            let fixed: f64 = upper.iter().map(|&j| c * yf[j]).sum();
            mat[free.len()][m] = -fixed;

            let Some(solution) = gaussian_solve(mat) else {
                continue;
            };
            let mut feasible = true;
            for (idx, &i) in free.iter().enumerate() {
                let a = solution[idx];
                if !(-tol..=c + tol).contains(&a) {
                    feasible = false;
                    break;
                }
                alphas[i] = a.clamp(0.0, c);
            }
            if !feasible {
                continue;
            }
            b = solution[free.len()];
            // inequality KKT for the bound sets
            for i in 0..n {
                if assignment[i] == 2 {
                    continue;
                }
                let f: f64 = (0..n).map(|j| alphas[j] * yf[j] * k.get(i, j)).sum::<f64>() + b;
                let margin = yf[i] * f;
                let ok = match assignment[i] {
                    0 => margin >= 1.0 - tol,
                    1 => margin <= 1.0 + tol,
                    _ => unreachable!(),
                };
                if !ok {
                    feasible = false;
                    break;
                }
            }
            if !feasible {
                continue;
            }
        }

        let mut objective: f64 = alphas.iter().sum();
        for i in 0..n {
            if alphas[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                objective -= 0.5 * alphas[i] * alphas[j] * yf[i] * yf[j] * k.get(i, j);
            }
        }
        let better = match &best {
            None => true,
            Some((obj, ..)) => objective > *obj + 1e-12,
        };
        if better {
            best = Some((objective, alphas, b));
        }
    }
    let (objective, alphas, b) = best.expect("at least the all-zero assignment is feasible");
    (alphas, b, objective)
}

fn gaussian_solve(mut mat: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = mat.len();
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&a, &b| mat[a][col].abs().partial_cmp(&mat[b][col].abs()).unwrap())?;
        if mat[pivot][col].abs() < 1e-10 {
            return None;
        }
        mat.swap(col, pivot);
        let div = mat[col][col];
        for entry in mat[col].iter_mut() {
            *entry /= div;
        }
        for row in 0..n {
            if row != col && mat[row][col] != 0.0 {
                let factor = mat[row][col];
                for k in 0..=n {
                    let sub = factor * mat[col][k];
                    mat[row][k] -= sub;
                }
            }
        }
    }
    Some((0..n).map(|i| mat[i][n]).collect())
}

/// Oracle decision values for a solved (alphas, b).
pub fn oracle_decisions(k: &KernelMatrix, y: &[i8], alphas: &[f64], b: f64) -> Vec<f64> {
    (0..k.rows)
        .map(|i| {
            (0..k.cols)
                .map(|j| alphas[j] * y[j] as f64 * k.get(i, j))
                .sum::<f64>()
                + b
        })
        .collect()
}

pub mod circuit_oracle {
    //! Single- and two-qubit statevector by explicit matrix products.

    #[derive(Clone, Copy)]
    pub struct C(pub f64, pub f64);

    impl C {
        pub fn mul(self, o: C) -> C {
            C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
        }
        pub fn add(self, o: C) -> C {
            C(self.0 + o.0, self.1 + o.1)
        }
        pub fn norm_sqr(self) -> f64 {
            self.0 * self.0 + self.1 * self.1
        }
        pub fn conj(self) -> C {
            C(self.0, -self.1)
        }
    }

    fn mat_vec2(m: [[C; 2]; 2], v: [C; 2]) -> [C; 2] {
        [
            m[0][0].mul(v[0]).add(m[0][1].mul(v[1])),
            m[1][0].mul(v[0]).add(m[1][1].mul(v[1])),
        ]
    }

    fn rx(theta: f64) -> [[C; 2]; 2] {
        let (s, c) = (theta / 2.0).sin_cos();
        [[C(c, 0.0), C(0.0, -s)], [C(0.0, -s), C(c, 0.0)]]
    }

    fn ry(theta: f64) -> [[C; 2]; 2] {
        let (s, c) = (theta / 2.0).sin_cos();
        [[C(c, 0.0), C(-s, 0.0)], [C(s, 0.0), C(c, 0.0)]]
    }

    /// One-qubit encoding: reps repetitions of Rx(alpha x) then Ry(alpha x)
    /// applied to |0>.
    pub fn encode_1q(x: f64, alpha: f64, reps: usize) -> [C; 2] {
        let mut v = [C(1.0, 0.0), C(0.0, 0.0)];
        for _ in 0..reps {
            v = mat_vec2(rx(alpha * x), v);
            v = mat_vec2(ry(alpha * x), v);
        }
        v
    }

    /// |<a|b>|^2 for one-qubit states.
    pub fn fidelity_1q(a: [C; 2], b: [C; 2]) -> f64 {
        let inner = a[0].conj().mul(b[0]).add(a[1].conj().mul(b[1]));
        inner.norm_sqr()
    }
}
