//! P1 tetrahedral elasticity stiffness assembly into profile storage.

use nalgebra::{Matrix3, SMatrix};

use crate::error::{Error, Result};
use crate::mesh::{Mesh, SurfaceTag};
use crate::sparse::SkylineMatrix;

use super::Material;

/// Constant shape-function gradients of a P1 tet and six times its volume.
/// Rows of the returned matrix are the gradients of nodes 1..3; node 0's
/// gradient is minus their sum.
pub(crate) fn tet_gradients(p: &[[f64; 3]; 4]) -> Result<(Matrix3<f64>, f64)> {
    let m = Matrix3::from_columns(&[
        nalgebra::Vector3::new(p[1][0] - p[0][0], p[1][1] - p[0][1], p[1][2] - p[0][2]),
        nalgebra::Vector3::new(p[2][0] - p[0][0], p[2][1] - p[0][1], p[2][2] - p[0][2]),
        nalgebra::Vector3::new(p[3][0] - p[0][0], p[3][1] - p[0][1], p[3][2] - p[0][2]),
    ]);
    let det = m.determinant();
    if det <= 0.0 || !det.is_finite() {
        return Err(Error::Assembly(format!("singular element with 6V = {det:e}")));
    }
    let inv = m
        .try_inverse()
        .ok_or_else(|| Error::Assembly("element Jacobian not invertible".into()))?;
    // grad(phi_i) = row i-1 of inv (i = 1..3)
    Ok((inv, det))
}

/// 12x12 element stiffness, V * B^T D B in Voigt order
/// [exx eyy ezz gxy gyz gzx].
fn element_stiffness(p: &[[f64; 3]; 4], lambda: f64, mu: f64) -> Result<SMatrix<f64, 12, 12>> {
    let (inv, det) = tet_gradients(p)?;
    let vol = det / 6.0;
    let mut grads = [[0.0f64; 3]; 4];
    for i in 0..3 {
        for c in 0..3 {
            grads[i + 1][c] = inv[(i, c)];
        }
    }
    for c in 0..3 {
        grads[0][c] = -(grads[1][c] + grads[2][c] + grads[3][c]);
    }
    let mut b = SMatrix::<f64, 6, 12>::zeros();
    for a in 0..4 {
        let g = grads[a];
        let col = 3 * a;
        b[(0, col)] = g[0];
        b[(1, col + 1)] = g[1];
        b[(2, col + 2)] = g[2];
        b[(3, col)] = g[1];
        b[(3, col + 1)] = g[0];
        b[(4, col + 1)] = g[2];
        b[(4, col + 2)] = g[1];
        b[(5, col)] = g[2];
        b[(5, col + 2)] = g[0];
    }
    let mut d = SMatrix::<f64, 6, 6>::zeros();
    for i in 0..3 {
        for j in 0..3 {
            d[(i, j)] = lambda;
        }
        d[(i, i)] = lambda + 2.0 * mu;
        d[(i + 3, i + 3)] = mu;
    }
    Ok(b.transpose() * d * b * vol)
}

/// Row profile of the stiffness: `first[dof] = 3 * min node` connected to
/// the dof's node through any element.
fn stiffness_profile(mesh: &Mesh) -> Vec<usize> {
    let n = mesh.nodes.len();
    let mut min_nb: Vec<usize> = (0..n).collect();
    for t in &mesh.tets {
        let lo = *t.iter().min().unwrap();
        for &v in t {
            if lo < min_nb[v] {
                min_nb[v] = lo;
            }
        }
    }
    let mut first = Vec::with_capacity(3 * n);
    for node in 0..n {
        for _ in 0..3 {
            first.push(3 * min_nb[node]);
        }
    }
    // clip to the diagonal for the first dofs of each node
    for (i, f) in first.iter_mut().enumerate() {
        if *f > i {
            *f = i;
        }
    }
    first
}

/// Raw (unconstrained) stiffness in profile storage.
pub fn assemble_stiffness_raw(mesh: &Mesh, material: &Material) -> Result<SkylineMatrix> {
    material.validate()?;
    let lambda = material.lame_lambda();
    let mu = material.shear_modulus;
    let mut a = SkylineMatrix::from_profile(stiffness_profile(mesh));
    for t in &mesh.tets {
        let p = [
            mesh.nodes[t[0]],
            mesh.nodes[t[1]],
            mesh.nodes[t[2]],
            mesh.nodes[t[3]],
        ];
        let ke = element_stiffness(&p, lambda, mu)?;
        for ai in 0..4 {
            for ci in 0..3 {
                let gi = 3 * t[ai] + ci;
                for aj in 0..4 {
                    for cj in 0..3 {
                        let gj = 3 * t[aj] + cj;
                        if gj <= gi {
                            a.add(gi, gj, ke[(3 * ai + ci, 3 * aj + cj)]);
                        }
                    }
                }
            }
        }
    }
    Ok(a)
}

/// Per-dof mask of the aft (clamped) nodes.
pub fn dirichlet_mask(mesh: &Mesh) -> Vec<bool> {
    let mut mask = vec![false; 3 * mesh.nodes.len()];
    for tri in &mesh.surface_tris {
        if tri.tag == SurfaceTag::Aft {
            for &n in &tri.nodes {
                mask[3 * n] = true;
                mask[3 * n + 1] = true;
                mask[3 * n + 2] = true;
            }
        }
    }
    mask
}

/// Stiffness with homogeneous Dirichlet conditions on the aft nodes,
/// imposed by symmetric elimination with unit diagonal.
pub fn assemble_stiffness(mesh: &Mesh, material: &Material) -> Result<SkylineMatrix> {
    let mut a = assemble_stiffness_raw(mesh, material)?;
    let mask = dirichlet_mask(mesh);
    let prescribed: Vec<Option<f64>> = mask.iter().map(|&m| if m { Some(0.0) } else { None }).collect();
    let mut rhs = vec![0.0; a.n()];
    a.reduce_dirichlet(&prescribed, &mut rhs);
    Ok(a)
}
