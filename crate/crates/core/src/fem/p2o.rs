//! Parameter-to-observable Jacobian Z = B A^-1 C.
//!
//! Two algebraically equivalent construction routes: forward (one solve
//! per parameter column) and adjoint (one solve per sensor, using the
//! symmetry of A). The adjoint route wins whenever there are fewer
//! sensors than parameters, which is always the case for full-field
//! estimation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

use super::{solve_forward, StructuralOperators};

/// Dense Jacobian of the parameter-to-observable map, n_d x n_q.
#[derive(Debug, Clone, PartialEq)]
pub struct P2OMap {
    pub z: DMatrix<f64>,
}

impl P2OMap {
    pub fn n_d(&self) -> usize {
        self.z.nrows()
    }

    pub fn n_q(&self) -> usize {
        self.z.ncols()
    }
}

/// The force map C in Z = B A^-1 C: either the sparse nodal map C_map
/// itself (full-field parameters) or its composition with a dense column
/// basis, C_map V_r (reduced parameters).
pub enum ForceMap<'a> {
    Sparse(&'a CsrMatrix),
    Composed {
        c_map: &'a CsrMatrix,
        basis: &'a DMatrix<f64>,
    },
}

impl ForceMap<'_> {
    pub fn n_cols(&self) -> usize {
        match self {
            ForceMap::Sparse(c) => c.ncols(),
            ForceMap::Composed { basis, .. } => basis.ncols(),
        }
    }

    pub fn n_rows(&self) -> usize {
        match self {
            ForceMap::Sparse(c) => c.nrows(),
            ForceMap::Composed { c_map, .. } => c_map.nrows(),
        }
    }

    /// f = C e_j as a dense force vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        match self {
            ForceMap::Sparse(c) => {
                let mut e = vec![0.0; c.ncols()];
                e[j] = 1.0;
                c.mul_vec(&e)
            }
            ForceMap::Composed { c_map, basis } => {
                let col: Vec<f64> = basis.column(j).iter().copied().collect();
                c_map.mul_vec(&col)
            }
        }
    }

    /// w = C^T v.
    pub fn tr_apply(&self, v: &[f64]) -> Vec<f64> {
        match self {
            ForceMap::Sparse(c) => c.tr_mul_vec(v),
            ForceMap::Composed { c_map, basis } => {
                let w = c_map.tr_mul_vec(v);
                let w = DMatrix::from_vec(w.len(), 1, w);
                (basis.transpose() * w).column(0).iter().copied().collect()
            }
        }
    }

    /// f = C q.
    pub fn apply(&self, q: &[f64]) -> Vec<f64> {
        match self {
            ForceMap::Sparse(c) => c.mul_vec(q),
            ForceMap::Composed { c_map, basis } => {
                let qv = DMatrix::from_vec(q.len(), 1, q.to_vec());
                let pq: Vec<f64> = (*basis * qv).column(0).iter().copied().collect();
                c_map.mul_vec(&pq)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZRoute {
    /// Adjoint when n_d < n_q, forward otherwise.
    Auto,
    Forward,
    Adjoint,
}

/// Assembles Z = B A^-1 C through the requested route.
pub fn assemble_p2o(ops: &StructuralOperators, c: &ForceMap, route: ZRoute) -> Result<P2OMap> {
    if c.n_rows() != ops.n_s() {
        return Err(Error::DimensionMismatch {
            expected: ops.n_s(),
            got: c.n_rows(),
            context: "force map rows".into(),
        });
    }
    let n_d = ops.n_d();
    let n_q = c.n_cols();
    let use_adjoint = match route {
        ZRoute::Auto => n_d < n_q,
        ZRoute::Forward => false,
        ZRoute::Adjoint => true,
    };
    let mut z = DMatrix::<f64>::zeros(n_d, n_q);
    if use_adjoint {
        for i in 0..n_d {
            let (cols, vals) = ops.b.row(i);
            let mut rhs = vec![0.0; ops.n_s()];
            for (&cidx, &v) in cols.iter().zip(vals) {
                if !ops.dirichlet[cidx] {
                    rhs[cidx] = v;
                }
            }
            let v = solve_forward(ops, &rhs)?;
            let row = c.tr_apply(&v);
            for j in 0..n_q {
                z[(i, j)] = row[j];
            }
        }
    } else {
        for j in 0..n_q {
            let f = c.column(j);
            let u = solve_forward(ops, &f)?;
            let y = ops.b.mul_vec(&u);
            for i in 0..n_d {
                z[(i, j)] = y[i];
            }
        }
    }
    Ok(P2OMap { z })
}
