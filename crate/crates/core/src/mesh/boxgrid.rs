//! Rectangular box meshes for verification problems (bars, patch tests).

use super::prism::prism_to_tets;
use super::{extract_boundary, signed_tet_volume, Mesh, SurfaceTag};
use crate::error::{Error, Result};

/// Structured tet mesh of the box `[0,lx] x [0,ly] x [0,lz]` with
/// `nx x ny x nz` cells. The `x = 0` face is tagged `Aft` (support face);
/// all other boundary faces are `Exterior`. No interior surface.
pub fn build_box_mesh(nx: usize, ny: usize, nz: usize, lx: f64, ly: f64, lz: f64) -> Result<Mesh> {
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::InvalidParameter("box cell counts must be positive".into()));
    }
    if !(lx > 0.0 && ly > 0.0 && lz > 0.0) {
        return Err(Error::InvalidParameter("box extents must be positive".into()));
    }
    let node = |i: usize, j: usize, k: usize| -> usize { (i * (ny + 1) + j) * (nz + 1) + k };
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for i in 0..=nx {
        for j in 0..=ny {
            for k in 0..=nz {
                nodes.push([
                    lx * i as f64 / nx as f64,
                    ly * j as f64 / ny as f64,
                    lz * k as f64 / nz as f64,
                ]);
            }
        }
    }
    // 2D triangles in the (y, z) cross-section, extruded along x
    let mut tris2d = Vec::with_capacity(ny * nz * 2);
    for j in 0..ny {
        for k in 0..nz {
            tris2d.push([(j, k), (j + 1, k), (j + 1, k + 1)]);
            tris2d.push([(j, k), (j + 1, k + 1), (j, k + 1)]);
        }
    }
    let mut tets = Vec::with_capacity(nx * ny * nz * 6);
    for i in 0..nx {
        for tri in &tris2d {
            let a = [
                node(i, tri[0].0, tri[0].1),
                node(i, tri[1].0, tri[1].1),
                node(i, tri[2].0, tri[2].1),
            ];
            let b = [
                node(i + 1, tri[0].0, tri[0].1),
                node(i + 1, tri[1].0, tri[1].1),
                node(i + 1, tri[2].0, tri[2].1),
            ];
            for mut t in prism_to_tets(a, b) {
                let v = signed_tet_volume(nodes[t[0]], nodes[t[1]], nodes[t[2]], nodes[t[3]]);
                if v < 0.0 {
                    t.swap(2, 3);
                }
                debug_assert!(v.abs() > 0.0);
                tets.push(t);
            }
        }
    }
    let mut surface_tris = extract_boundary(nodes.len(), &tets);
    for tri in surface_tris.iter_mut() {
        let on_x0 = tri.nodes.iter().all(|&n| nodes[n][0] == 0.0);
        tri.tag = if on_x0 { SurfaceTag::Aft } else { SurfaceTag::Exterior };
    }
    let mut mesh = Mesh {
        nodes,
        tets,
        surface_tris,
        exterior_nodes: Vec::new(),
    };
    mesh.rebuild_exterior_nodes();
    Ok(mesh)
}
