//! Snapshot reduction: POD bases for low-dimensional pressure
//! parameterization and the data-driven snapshot prior.
//!
//! Both build on the centered snapshot matrix. The thin SVD goes through
//! the N x N Gram matrix, which is exact and cheap for snapshot counts in
//! the hundreds, and mode signs are fixed (largest-magnitude entry
//! positive) so fixtures do not depend on eigensolver sign conventions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::pressure::{PressureField, SnapshotSet};

/// POD of a snapshot set: mean, r retained orthonormal modes, and the
/// full nonincreasing singular value list (length min(n_p, N)).
#[derive(Debug, Clone)]
pub struct PodBasis {
    pub mean: DVector<f64>,
    pub modes: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub r: usize,
}

impl PodBasis {
    pub fn n_p(&self) -> usize {
        self.mean.len()
    }

    /// Cumulative energy fraction captured by the first r singular values.
    pub fn energy_at(&self, r: usize) -> f64 {
        let total: f64 = self.singular_values.iter().map(|s| s * s).sum();
        if total == 0.0 {
            return 1.0;
        }
        self.singular_values.iter().take(r).map(|s| s * s).sum::<f64>() / total
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PodSelector {
    FixedRank(usize),
    /// Smallest r with cumulative energy >= threshold.
    EnergyThreshold(f64),
}

/// Centered snapshot matrix and mean.
fn center(snaps: &SnapshotSet) -> (DVector<f64>, DMatrix<f64>) {
    let p = snaps.matrix();
    let n = snaps.len();
    let mean = DVector::from_fn(snaps.n_p, |i, _| p.row(i).sum() / n as f64);
    let mut centered = p;
    for j in 0..n {
        let mut col = centered.column_mut(j);
        col -= &mean;
    }
    (mean, centered)
}

/// Thin SVD of the centered snapshots via the Gram matrix; retains r
/// modes per the selector.
pub fn compute_pod(snaps: &SnapshotSet, selector: PodSelector) -> Result<PodBasis> {
    if snaps.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "POD needs at least 2 snapshots, got {}",
            snaps.len()
        )));
    }
    let n = snaps.len();
    let max_rank = snaps.n_p.min(n);
    let (mean, centered) = center(snaps);
    let gram = centered.transpose() * &centered;
    let eig = nalgebra::SymmetricEigen::new(gram);
    // sort eigenpairs by descending eigenvalue
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let singular_values: Vec<f64> = order
        .iter()
        .take(max_rank)
        .map(|&i| eig.eigenvalues[i].max(0.0).sqrt())
        .collect();
    let sigma1 = singular_values.first().copied().unwrap_or(0.0);
    let numerical_rank = singular_values
        .iter()
        .filter(|&&s| s > 1e-12 * sigma1 && s > 0.0)
        .count();

    let r = match selector {
        PodSelector::FixedRank(r) => {
            if r > max_rank {
                return Err(Error::InvalidParameter(format!(
                    "rank {r} exceeds min(n_p, N) = {max_rank}"
                )));
            }
            if r > numerical_rank {
                return Err(Error::Numerical(format!(
                    "rank {r} exceeds the numerical rank {numerical_rank} of the snapshots"
                )));
            }
            r
        }
        PodSelector::EnergyThreshold(t) => {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidParameter(format!("energy threshold {t} outside [0, 1]")));
            }
            let total: f64 = singular_values.iter().map(|s| s * s).sum();
            if total == 0.0 {
                0
            } else {
                let mut acc = 0.0;
                let mut r = numerical_rank;
                for (i, s) in singular_values.iter().enumerate() {
                    acc += s * s;
                    if acc / total >= t {
                        r = i + 1;
                        break;
                    }
                }
                r.min(numerical_rank)
            }
        }
    };

    let mut modes = DMatrix::zeros(snaps.n_p, r);
    for (k, &i) in order.iter().take(r).enumerate() {
        let sigma = singular_values[k];
        let w = eig.eigenvectors.column(i);
        let mut v = &centered * w / sigma;
        // sign convention: largest-magnitude entry positive
        let mut arg = 0;
        let mut best = 0.0f64;
        for (idx, &x) in v.iter().enumerate() {
            if x.abs() > best {
                best = x.abs();
                arg = idx;
            }
        }
        if v[arg] < 0.0 {
            v.neg_mut();
        }
        modes.set_column(k, &v);
    }
    Ok(PodBasis {
        mean,
        modes,
        singular_values,
        r,
    })
}

/// p = mean + sum c_i v_i.
pub fn reconstruct_pressure(basis: &PodBasis, coeffs: &DVector<f64>) -> Result<PressureField> {
    if coeffs.len() != basis.r {
        return Err(Error::DimensionMismatch {
            expected: basis.r,
            got: coeffs.len(),
            context: "POD coefficients".into(),
        });
    }
    Ok(PressureField {
        values: &basis.mean + &basis.modes * coeffs,
        condition: None,
    })
}

/// c = V_r^T (p - mean); inverse of `reconstruct_pressure` for in-span fields.
pub fn project_coeffs(basis: &PodBasis, field: &DVector<f64>) -> Result<DVector<f64>> {
    if field.len() != basis.n_p() {
        return Err(Error::DimensionMismatch {
            expected: basis.n_p(),
            got: field.len(),
            context: "pressure field".into(),
        });
    }
    Ok(basis.modes.transpose() * (field - &basis.mean))
}

/// Snapshot prior: mean and low-rank factor S with Gamma_pr = S S^T.
/// The dense covariance is never formed.
#[derive(Debug, Clone)]
pub struct PriorModel {
    pub mean: DVector<f64>,
    /// n_q x N factor, centered snapshots divided by sqrt(N - 1).
    pub factor: DMatrix<f64>,
}

impl PriorModel {
    pub fn n_q(&self) -> usize {
        self.mean.len()
    }

    pub fn rank_bound(&self) -> usize {
        (self.factor.ncols().max(1) - 1).min(self.n_q())
    }

    /// Gamma_pr v through the factor.
    pub fn apply_cov(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.factor * (self.factor.transpose() * v)
    }
}

/// Empirical mean and covariance factor over the snapshots.
pub fn compute_prior(snaps: &SnapshotSet) -> Result<PriorModel> {
    if snaps.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "prior needs at least 2 snapshots, got {}",
            snaps.len()
        )));
    }
    let (mean, centered) = center(snaps);
    let factor = centered / ((snaps.len() - 1) as f64).sqrt();
    Ok(PriorModel { mean, factor })
}
