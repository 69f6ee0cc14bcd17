//! Levenberg-Marquardt for small dense least-squares problems with a
//! central-difference Jacobian.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub(crate) struct LmSettings {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub step_tolerance: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct LmOutcome {
    pub x: Vec<f64>,
    pub converged: bool,
}

const MAX_DAMPING_TRIES: usize = 40;

fn norm2(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Minimizes `sum r_k(x)^2`, stopping when the largest cosine between the
/// residual vector and a Jacobian column, or the relative step, falls below
/// its tolerance. `residuals` writes into its buffer and returns false when
/// the point cannot be evaluated. Returns `None` if `x0` itself cannot be
/// evaluated.
pub(crate) fn levenberg_marquardt<F>(residuals: F, x0: &[f64], settings: LmSettings) -> Option<LmOutcome>
where
    F: Fn(&[f64], &mut Vec<f64>) -> bool,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = Vec::new();
    if !residuals(&x, &mut r) {
        return None;
    }
    let m = r.len();
    let mut cost = norm2(&r);
    let mut lambda = 1e-3;
    let mut nu = 2.0;
    let mut scratch = Vec::with_capacity(m);
    let mut trial = Vec::with_capacity(m);

    for _ in 0..settings.max_iterations {
        if cost == 0.0 {
            return Some(LmOutcome { x, converged: true });
        }
        let Some(jac) = jacobian(&residuals, &x, m, &mut scratch) else {
            return Some(LmOutcome { x, converged: false });
        };
        let rv = DVector::from_column_slice(&r);
        let g = jac.tr_mul(&rv);
        // cosine between r and each Jacobian column, independent of residual scale
        let r_norm = cost.sqrt();
        let cosine = (0..n)
            .map(|k| {
                let c = jac.column(k).norm();
                if c > 0.0 { g[k].abs() / (c * r_norm) } else { 0.0 }
            })
            .fold(0.0, f64::max);
        if cosine <= settings.gradient_tolerance {
            return Some(LmOutcome { x, converged: true });
        }
        let a = jac.tr_mul(&jac);
        let scale: Vec<f64> = (0..n)
            .map(|k| {
                let d = a[(k, k)].sqrt();
                if d > 0.0 { d } else { 1.0 }
            })
            .collect();

        let mut accepted = false;
        for _ in 0..MAX_DAMPING_TRIES {
            let mut scaled = a.clone();
            for i in 0..n {
                for j in 0..n {
                    scaled[(i, j)] /= scale[i] * scale[j];
                }
                scaled[(i, i)] += lambda;
            }
            let rhs = DVector::from_iterator(n, (0..n).map(|k| -g[k] / scale[k]));
            let Some(chol) = scaled.cholesky() else {
                lambda *= nu;
                nu *= 2.0;
                continue;
            };
            let s = chol.solve(&rhs);
            let delta: Vec<f64> = (0..n).map(|k| s[k] / scale[k]).collect();

            let x_norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let step_norm = delta.iter().map(|v| v * v).sum::<f64>().sqrt();
            if step_norm <= settings.step_tolerance * (x_norm + settings.step_tolerance) {
                return Some(LmOutcome { x, converged: true });
            }

            let x_new: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a + b).collect();
            if !residuals(&x_new, &mut trial) {
                lambda *= nu;
                nu *= 2.0;
                continue;
            }
            let cost_new = norm2(&trial);
            if cost_new < cost {
                let dv = DVector::from_column_slice(&delta);
                let predicted = cost - (&rv + &jac * &dv).norm_squared();
                let rho = if predicted > 0.0 { (cost - cost_new) / predicted } else { 1.0 };
                lambda *= (1.0 - (2.0 * rho - 1.0).powi(3)).max(1.0 / 3.0);
                nu = 2.0;
                x = x_new;
                std::mem::swap(&mut r, &mut trial);
                cost = cost_new;
                accepted = true;
                break;
            }
            lambda *= nu;
            nu *= 2.0;
        }
        if !accepted {
            // no downhill step at any damping: a numerical minimum
            return Some(LmOutcome { x, converged: true });
        }
    }
    Some(LmOutcome { x, converged: false })
}

fn jacobian<F>(residuals: &F, x: &[f64], m: usize, scratch: &mut Vec<f64>) -> Option<DMatrix<f64>>
where
    F: Fn(&[f64], &mut Vec<f64>) -> bool,
{
    let n = x.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut probe = x.to_vec();
    let mut plus = Vec::with_capacity(m);
    for k in 0..n {
        let h = f64::EPSILON.cbrt() * x[k].abs().max(1.0);
        probe[k] = x[k] + h;
        if !residuals(&probe, &mut plus) {
            return None;
        }
        probe[k] = x[k] - h;
        if !residuals(&probe, scratch) {
            return None;
        }
        probe[k] = x[k];
        let width = 2.0 * h;
        for i in 0..m {
            jac[(i, k)] = (plus[i] - scratch[i]) / width;
        }
    }
    Some(jac)
}
