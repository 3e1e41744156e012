//! Consistent surface loads: the pressure-to-force map and quadrature
//! helpers for traction and pressure integrals over tagged surfaces.
//!
//! Sign convention: positive pressure acts along the inward normal
//! (compressive on the vehicle), so a triangle with outward area normal
//! `A n` and linear nodal pressures contributes `-A n (2 p_a + p_b + p_c)/12`
//! to vertex `a`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, SurfaceTag, SurfaceTri};
use crate::sparse::CsrMatrix;

fn area_normal(mesh: &Mesh, tri: &SurfaceTri) -> [f64; 3] {
    mesh.tri_area_normal(&tri.nodes)
}

/// Pressure-to-force map over the exterior surface, n_s x n_p. Rows on
/// Dirichlet dofs are dropped so `C p` is admissible for the reduced
/// forward solve; column j acts only on dofs of triangles touching
/// exterior node j.
pub fn assemble_pressure_to_force(mesh: &Mesh, dirichlet: &[bool]) -> Result<CsrMatrix> {
    if dirichlet.len() != mesh.n_struct_dofs() {
        return Err(Error::DimensionMismatch {
            expected: mesh.n_struct_dofs(),
            got: dirichlet.len(),
            context: "dirichlet mask".into(),
        });
    }
    let col_of: HashMap<usize, usize> = mesh
        .exterior_nodes
        .iter()
        .enumerate()
        .map(|(c, &n)| (n, c))
        .collect();
    let mut triplets = Vec::new();
    for tri in mesh.surface_tris.iter().filter(|t| t.tag == SurfaceTag::Exterior) {
        let an = area_normal(mesh, tri);
        for (ai, &va) in tri.nodes.iter().enumerate() {
            for (bi, &vb) in tri.nodes.iter().enumerate() {
                let w = if ai == bi { 2.0 } else { 1.0 } / 12.0;
                let col = *col_of
                    .get(&vb)
                    .ok_or_else(|| Error::Assembly(format!("exterior node {vb} missing from pressure dofs")))?;
                for k in 0..3 {
                    let row = 3 * va + k;
                    if !dirichlet[row] {
                        triplets.push((row, col, -an[k] * w));
                    }
                }
            }
        }
    }
    Ok(CsrMatrix::from_triplets(mesh.n_struct_dofs(), mesh.exterior_nodes.len(), &mut triplets))
}

/// Consistent nodal forces of a nodal pressure field integrated over the
/// triangles with the given tags, without any Dirichlet masking. `p` is
/// indexed by mesh node id. Used as an independent quadrature route in
/// verification.
pub fn surface_pressure_forces<F>(mesh: &Mesh, tags: &[SurfaceTag], p: F) -> Vec<f64>
where
    F: Fn(usize) -> f64,
{
    let mut f = vec![0.0; mesh.n_struct_dofs()];
    for tri in mesh.surface_tris.iter().filter(|t| tags.contains(&t.tag)) {
        let an = area_normal(mesh, tri);
        let pv = [p(tri.nodes[0]), p(tri.nodes[1]), p(tri.nodes[2])];
        let total: f64 = pv.iter().sum();
        for (ai, &va) in tri.nodes.iter().enumerate() {
            let w = (pv[ai] + total) / 12.0;
            for k in 0..3 {
                f[3 * va + k] -= an[k] * w;
            }
        }
    }
    f
}

/// Consistent nodal forces of a uniform traction vector applied over the
/// triangles selected by `filter`: each vertex receives t A / 3.
pub fn surface_traction_forces<F>(mesh: &Mesh, filter: F, traction: [f64; 3]) -> Vec<f64>
where
    F: Fn(&SurfaceTri) -> bool,
{
    let mut f = vec![0.0; mesh.n_struct_dofs()];
    for tri in mesh.surface_tris.iter().filter(|t| filter(t)) {
        let an = area_normal(mesh, tri);
        let area = (an[0] * an[0] + an[1] * an[1] + an[2] * an[2]).sqrt();
        for &va in &tri.nodes {
            for k in 0..3 {
                f[3 * va + k] += traction[k] * area / 3.0;
            }
        }
    }
    f
}
