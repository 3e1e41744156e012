//! Desk-scale hollow shell geometry: tetrahedral volume mesh of a
//! cylinder body with a conical nose, tagged boundary surfaces, and
//! strain sensor placement on the interior surface.
//!
//! The solid is a thin-walled tube sealed by a bulkhead disk at each end,
//! so the outer hull (`exterior` plus `aft`) and the cavity wall
//! (`interior`) are each closed surfaces. The aft face carries the
//! homogeneous Dirichlet support.

mod boxgrid;
mod prism;
mod sensors;
mod shell;

#[cfg(test)]
pub(crate) mod tests;

pub mod io;

pub use boxgrid::build_box_mesh;
pub use sensors::{place_sensors, SensorConfig, SensorKind, SensorSpec};
pub use shell::build_shell_mesh;

use crate::error::{Error, Result};

/// Default lower bound on the minimum tet dihedral angle, degrees.
pub const DEFAULT_DIHEDRAL_FLOOR_DEG: f64 = 10.0;

/// Shell geometry parameters, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    pub body_length: f64,
    pub nose_length: f64,
    pub outer_radius: f64,
    pub wall_thickness: f64,
    pub target_edge_length: f64,
}

impl GeometryParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("body_length", self.body_length),
            ("nose_length", self.nose_length),
            ("outer_radius", self.outer_radius),
            ("wall_thickness", self.wall_thickness),
            ("target_edge_length", self.target_edge_length),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.wall_thickness >= self.outer_radius {
            return Err(Error::InvalidParameter(format!(
                "wall_thickness {} must be below outer_radius {}",
                self.wall_thickness, self.outer_radius
            )));
        }
        Ok(())
    }

    pub fn total_length(&self) -> f64 {
        self.body_length + self.nose_length
    }

    /// Outer radius of the blunted nose tip. The tip is kept blunt so the
    /// thin-wall cells near it stay above the dihedral floor.
    pub fn tip_radius(&self) -> f64 {
        (self.outer_radius / 2.0).max(3.0 * self.wall_thickness)
    }

    /// Outer surface radius at axial position `x` (nose frustum, then body).
    pub fn outer_r(&self, x: f64) -> f64 {
        if x < self.nose_length {
            let slope = (self.outer_radius - self.tip_radius()) / self.nose_length;
            self.tip_radius() + slope * x
        } else {
            self.outer_radius
        }
    }

    /// Inner (cavity) surface radius at axial position `x`.
    pub fn inner_r(&self, x: f64) -> f64 {
        self.outer_r(x) - self.wall_thickness
    }

    /// Nose half-angle, radians.
    pub fn nose_half_angle(&self) -> f64 {
        ((self.outer_radius - self.tip_radius()) / self.nose_length).atan()
    }
}

/// Boundary surface tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceTag {
    Exterior,
    Interior,
    Aft,
}

impl SurfaceTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            SurfaceTag::Exterior => "exterior",
            SurfaceTag::Interior => "interior",
            SurfaceTag::Aft => "aft",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exterior" => Some(SurfaceTag::Exterior),
            "interior" => Some(SurfaceTag::Interior),
            "aft" => Some(SurfaceTag::Aft),
            _ => None,
        }
    }
}

/// Boundary triangle, oriented so its normal points out of the solid.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceTri {
    pub nodes: [usize; 3],
    pub tag: SurfaceTag,
    /// Owning tetrahedron.
    pub tet: usize,
}

/// Conforming tetrahedral mesh with tagged boundary surfaces.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub nodes: Vec<[f64; 3]>,
    pub tets: Vec<[usize; 4]>,
    pub surface_tris: Vec<SurfaceTri>,
    /// Sorted node indices on the exterior surface: the pressure dofs.
    pub exterior_nodes: Vec<usize>,
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_pressure_dofs(&self) -> usize {
        self.exterior_nodes.len()
    }

    /// Structural dof count (3 displacement components per node).
    pub fn n_struct_dofs(&self) -> usize {
        3 * self.nodes.len()
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        let [a, b, c, d] = self.tets[t];
        signed_tet_volume(self.nodes[a], self.nodes[b], self.nodes[c], self.nodes[d])
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.tets.len()).map(|t| self.tet_volume(t)).sum()
    }

    pub fn tri_area_normal(&self, tri: &[usize; 3]) -> [f64; 3] {
        let a = self.nodes[tri[0]];
        let b = self.nodes[tri[1]];
        let c = self.nodes[tri[2]];
        scale(cross(sub(b, a), sub(c, a)), 0.5)
    }

    pub fn tri_centroid(&self, tri: &[usize; 3]) -> [f64; 3] {
        let a = self.nodes[tri[0]];
        let b = self.nodes[tri[1]];
        let c = self.nodes[tri[2]];
        [
            (a[0] + b[0] + c[0]) / 3.0,
            (a[1] + b[1] + c[1]) / 3.0,
            (a[2] + b[2] + c[2]) / 3.0,
        ]
    }

    /// Minimum dihedral angle over all tets, degrees.
    pub fn min_dihedral_deg(&self) -> f64 {
        self.worst_dihedral().0
    }

    /// Minimum dihedral angle (degrees) and the index of the tet attaining it.
    pub fn worst_dihedral(&self) -> (f64, usize) {
        let mut min = f64::INFINITY;
        let mut arg = 0;
        for (i, t) in self.tets.iter().enumerate() {
            let p = [self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]], self.nodes[t[3]]];
            let d = tet_min_dihedral_rad(&p);
            if d < min {
                min = d;
                arg = i;
            }
        }
        (min.to_degrees(), arg)
    }

    pub fn tet_centroid(&self, t: usize) -> [f64; 3] {
        let [a, b, c, d] = self.tets[t];
        let mut out = [0.0; 3];
        for p in [self.nodes[a], self.nodes[b], self.nodes[c], self.nodes[d]] {
            out[0] += p[0] / 4.0;
            out[1] += p[1] / 4.0;
            out[2] += p[2] / 4.0;
        }
        out
    }

    /// Recomputes `exterior_nodes` from the current tags.
    pub fn rebuild_exterior_nodes(&mut self) {
        let mut nodes: Vec<usize> = self
            .surface_tris
            .iter()
            .filter(|t| t.tag == SurfaceTag::Exterior)
            .flat_map(|t| t.nodes)
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        self.exterior_nodes = nodes;
    }

    pub fn tag_counts(&self) -> (usize, usize, usize) {
        let mut e = 0;
        let mut i = 0;
        let mut a = 0;
        for t in &self.surface_tris {
            match t.tag {
                SurfaceTag::Exterior => e += 1,
                SurfaceTag::Interior => i += 1,
                SurfaceTag::Aft => a += 1,
            }
        }
        (e, i, a)
    }
}

/// Retags every boundary triangle of `mesh` from the analytic surfaces of
/// `params`: the aft plane, the nose face plane, the outer lateral surface,
/// and the cavity walls. Idempotent. Fails hard on a triangle that matches
/// no surface.
pub fn tag_boundaries(mesh: &mut Mesh, params: &GeometryParams) -> Result<()> {
    params.validate()?;
    let total = params.total_length();
    // Tolerances: boundary faces sit either exactly on an end plane or on a
    // lateral surface one wall thickness away from the other candidates.
    let tol_x = 1e-6 * total;
    let tol_r = 0.35 * params.wall_thickness;
    for tri in mesh.surface_tris.iter_mut() {
        let c = {
            let a = mesh.nodes[tri.nodes[0]];
            let b = mesh.nodes[tri.nodes[1]];
            let d = mesh.nodes[tri.nodes[2]];
            [
                (a[0] + b[0] + d[0]) / 3.0,
                (a[1] + b[1] + d[1]) / 3.0,
                (a[2] + b[2] + d[2]) / 3.0,
            ]
        };
        let planar_x = mesh.nodes[tri.nodes[0]][0] == mesh.nodes[tri.nodes[1]][0]
            && mesh.nodes[tri.nodes[1]][0] == mesh.nodes[tri.nodes[2]][0];
        let r = (c[1] * c[1] + c[2] * c[2]).sqrt();
        let tag = if planar_x && (c[0] - total).abs() <= tol_x {
            SurfaceTag::Aft
        } else if planar_x && c[0].abs() <= tol_x {
            SurfaceTag::Exterior // blunt nose face, washed by the flow
        } else if (r - params.outer_r(c[0])).abs() <= tol_r {
            SurfaceTag::Exterior
        } else if (r - params.inner_r(c[0])).abs() <= tol_r
            || (planar_x && r <= params.inner_r(c[0]) + tol_r)
        {
            SurfaceTag::Interior
        } else {
            return Err(Error::UntaggableTriangle(c[0], c[1], c[2]));
        };
        tri.tag = tag;
    }
    mesh.rebuild_exterior_nodes();
    if !mesh.surface_tris.iter().any(|t| t.tag == SurfaceTag::Aft) {
        return Err(Error::Mesh("aft surface is empty; no Dirichlet support".into()));
    }
    Ok(())
}

// -- small 3-vector helpers shared by the mesh code --

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn signed_tet_volume(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> f64 {
    dot(sub(b, a), cross(sub(c, a), sub(d, a))) / 6.0
}

/// Minimum dihedral angle of one tet, radians.
fn tet_min_dihedral_rad(p: &[[f64; 3]; 4]) -> f64 {
    // outward face normals, face i opposite vertex i
    let faces = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
    let mut normals = [[0.0; 3]; 4];
    for (i, f) in faces.iter().enumerate() {
        normals[i] = cross(sub(p[f[1]], p[f[0]]), sub(p[f[2]], p[f[0]]));
    }
    let mut min = f64::INFINITY;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let c = -dot(normals[i], normals[j]) / (norm(normals[i]) * norm(normals[j]));
            let ang = c.clamp(-1.0, 1.0).acos();
            min = min.min(ang);
        }
    }
    min
}

/// Extracts boundary faces (faces owned by exactly one tet), oriented
/// outward, with their owning tet. Tags are set to `Exterior` and must be
/// fixed up by [`tag_boundaries`].
pub(crate) fn extract_boundary(nodes_len: usize, tets: &[[usize; 4]]) -> Vec<SurfaceTri> {
    use std::collections::HashMap;
    let _ = nodes_len;
    // face opposite vertex i, oriented outward for a positive-volume tet
    const FACE: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
    let mut seen: HashMap<[usize; 3], (usize, [usize; 3], u32)> = HashMap::new();
    for (ti, t) in tets.iter().enumerate() {
        for f in &FACE {
            let tri = [t[f[0]], t[f[1]], t[f[2]]];
            let mut key = tri;
            key.sort_unstable();
            seen.entry(key)
                .and_modify(|e| e.2 += 1)
                .or_insert((ti, tri, 1));
        }
    }
    let mut out: Vec<SurfaceTri> = seen
        .into_values()
        .filter(|(_, _, n)| *n == 1)
        .map(|(tet, nodes, _)| SurfaceTri {
            nodes,
            tag: SurfaceTag::Exterior,
            tet,
        })
        .collect();
    // deterministic order
    out.sort_unstable_by_key(|t| t.nodes);
    out
}
