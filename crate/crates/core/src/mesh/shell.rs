//! Structured extrusion mesher for the hollow shell.
//!
//! Cross-sections at each axial station hold `n_c` azimuthal by `n_r`
//! radial wall nodes; bulkhead stations additionally carry a polar disk
//! that seals the cavity. Every 2D cell is a triangle, extruded to a
//! prism between adjacent stations and split into tets by the min-vertex
//! rule, so the mesh is conforming by construction and node ordering is
//! fully deterministic.
//!
//! Within a station, azimuths are laid out in a zig-zag order (0, 1,
//! n_c-1, 2, n_c-2, ...) so the wrap-around seam connects nearby indices
//! and the stiffness profile stays narrow.

use std::f64::consts::PI;

use super::prism::prism_to_tets;
use super::{extract_boundary, signed_tet_volume, tag_boundaries, GeometryParams, Mesh};
use crate::error::{Error, Result};
use crate::mesh::DEFAULT_DIHEDRAL_FLOOR_DEG;

/// Azimuth node count for the given parameters (multiple of 4, at least 20).
pub(crate) fn azimuth_count(params: &GeometryParams) -> usize {
    let raw = 2.0 * PI * params.outer_radius / params.target_edge_length;
    let m4 = ((raw / 4.0).round() as usize).max(5) * 4;
    m4.max(20)
}

/// Radial node layers across the wall (2 to 4).
pub(crate) fn radial_layers(params: &GeometryParams) -> usize {
    let ratio = params.wall_thickness / (0.35 * params.target_edge_length);
    (ratio.round() as usize).clamp(1, 3) + 1
}

/// Axial station coordinates. The nose/body junction lands exactly on a
/// station so the surface kink is represented in the mesh, and each end
/// gets one thin extra layer matched to its bulkhead disk's in-plane
/// scale so the disk tets stay well shaped.
pub(crate) fn stations(params: &GeometryParams) -> Vec<f64> {
    let h = params.target_edge_length;
    let n_c = azimuth_count(params) as f64;
    let total = params.total_length();
    let t_front = (0.8 * 2.0 * PI * params.inner_r(0.0) / n_c).clamp(0.25 * h, h);
    let t_aft = (0.8 * 2.0 * PI * params.inner_r(total) / n_c).clamp(0.25 * h, h);
    let n_nose = (((params.nose_length - t_front) / h).round() as usize).max(1);
    let n_body = (((params.body_length - t_aft) / h).round() as usize).max(3);
    let mut xs = Vec::with_capacity(n_nose + n_body + 3);
    xs.push(0.0);
    xs.push(t_front);
    for i in 1..=n_nose {
        xs.push(t_front + (params.nose_length - t_front) * i as f64 / n_nose as f64);
    }
    let body_end = total - t_aft;
    for i in 1..=n_body {
        xs.push(params.nose_length + (body_end - params.nose_length) * i as f64 / n_body as f64);
    }
    xs.push(total);
    xs
}

/// Zig-zag azimuth order: position -> azimuth index.
#[inline]
fn az_of_pos(m: usize, n_c: usize) -> usize {
    if m == 0 {
        0
    } else if m % 2 == 1 {
        (m + 1) / 2
    } else {
        n_c - m / 2
    }
}

/// Polar disk template sealing the cavity: rings of (azimuth count,
/// radius as a fraction of the rim radius), outermost first. The rim ring
/// itself is the innermost wall layer and is not part of the template.
#[derive(Debug, Clone)]
struct DiskTemplate {
    rings: Vec<(usize, f64)>,
}

fn disk_template(n_c: usize, rim_r: f64) -> DiskTemplate {
    let s0 = 2.0 * PI * rim_r / n_c as f64;
    let mut rings = Vec::new();
    let mut c = n_c;
    let mut r = rim_r;
    loop {
        let local = 2.0 * PI * r / c as f64;
        let step = local.clamp(0.6 * s0, 1.3 * s0);
        let rn = r - step;
        if rn <= 1.3 * step {
            break;
        }
        if c % 2 == 0 && c / 2 >= 8 && 2.0 * PI * rn / (c as f64) < 0.6 * s0 {
            c /= 2;
        }
        rings.push((c, rn / rim_r));
        r = rn;
    }
    DiskTemplate { rings }
}

/// 2D node reference within a station cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeRef {
    /// Wall lattice node: geometric azimuth index and radial layer
    /// (0 = inner surface).
    Wall { az: usize, layer: usize },
    /// Disk ring node (ring 0 adjoins the rim).
    Disk { ring: usize, t: usize },
    Center,
}

struct Layout {
    n_c: usize,
    n_r: usize,
    xs: Vec<f64>,
    front: DiskTemplate,
    aft: DiskTemplate,
    station_offset: Vec<usize>,
    n_nodes: usize,
}

impl Layout {
    fn has_disk(&self, station: usize) -> Option<&DiskTemplate> {
        let ns = self.xs.len();
        if station <= 1 {
            Some(&self.front)
        } else if station >= ns - 2 {
            Some(&self.aft)
        } else {
            None
        }
    }

    fn wall_count(&self) -> usize {
        self.n_c * self.n_r
    }

    fn disk_count(t: &DiskTemplate) -> usize {
        t.rings.iter().map(|&(c, _)| c).sum::<usize>() + 1
    }

    fn station_count(&self, station: usize) -> usize {
        self.wall_count() + self.has_disk(station).map_or(0, Self::disk_count)
    }

    fn resolve(&self, station: usize, r: NodeRef) -> usize {
        let base = self.station_offset[station];
        match r {
            NodeRef::Wall { az, layer } => {
                let pos = pos_of_az(az, self.n_c);
                base + pos * self.n_r + layer
            }
            NodeRef::Disk { ring, t } => {
                let tpl = self.has_disk(station).expect("disk ref at non-bulkhead station");
                let mut off = self.wall_count();
                for &(c, _) in tpl.rings.iter().take(ring) {
                    off += c;
                }
                base + off + t
            }
            NodeRef::Center => base + self.station_count(station) - 1,
        }
    }
}

#[inline]
fn pos_of_az(j: usize, n_c: usize) -> usize {
    if j == 0 {
        0
    } else if j <= n_c / 2 {
        2 * j - 1
    } else {
        2 * (n_c - j)
    }
}

/// 2D triangles of the wall annulus cross-section.
fn wall_triangles(n_c: usize, n_r: usize) -> Vec<[NodeRef; 3]> {
    let mut tris = Vec::with_capacity(n_c * (n_r - 1) * 2);
    for j in 0..n_c {
        let j1 = (j + 1) % n_c;
        for k in 0..(n_r - 1) {
            let q = [
                NodeRef::Wall { az: j, layer: k },
                NodeRef::Wall { az: j1, layer: k },
                NodeRef::Wall { az: j1, layer: k + 1 },
                NodeRef::Wall { az: j, layer: k + 1 },
            ];
            tris.push([q[0], q[1], q[2]]);
            tris.push([q[0], q[2], q[3]]);
        }
    }
    tris
}

/// 2D triangles of a polar disk (rim ring = wall layer 0).
fn disk_triangles(n_c: usize, tpl: &DiskTemplate) -> Vec<[NodeRef; 3]> {
    let ring_ref = |l: isize, t: usize| -> NodeRef {
        if l < 0 {
            NodeRef::Wall { az: t, layer: 0 }
        } else {
            NodeRef::Disk { ring: l as usize, t }
        }
    };
    let mut tris = Vec::new();
    let mut outer_count = n_c;
    for (l, &(c, _)) in tpl.rings.iter().enumerate() {
        let lo = l as isize - 1; // outer ring index
        let li = l as isize;
        if c == outer_count {
            for t in 0..c {
                let t1 = (t + 1) % c;
                let q = [ring_ref(lo, t), ring_ref(lo, t1), ring_ref(li, t1), ring_ref(li, t)];
                tris.push([q[0], q[1], q[2]]);
                tris.push([q[0], q[2], q[3]]);
            }
        } else {
            assert_eq!(outer_count, 2 * c, "ring counts may only halve");
            for t in 0..c {
                let o0 = 2 * t;
                let o1 = 2 * t + 1;
                let o2 = (2 * t + 2) % outer_count;
                let t1 = (t + 1) % c;
                tris.push([ring_ref(lo, o0), ring_ref(lo, o1), ring_ref(li, t)]);
                tris.push([ring_ref(lo, o1), ring_ref(lo, o2), ring_ref(li, t1)]);
                tris.push([ring_ref(lo, o1), ring_ref(li, t1), ring_ref(li, t)]);
            }
        }
        outer_count = c;
    }
    // fan from the innermost ring (or the rim if no rings) to the center
    let last = tpl.rings.len() as isize - 1;
    let fan_count = tpl.rings.last().map_or(n_c, |&(c, _)| c);
    for t in 0..fan_count {
        let t1 = (t + 1) % fan_count;
        tris.push([ring_ref(last, t), ring_ref(last, t1), NodeRef::Center]);
    }
    tris
}

/// Builds the tagged tetrahedral shell mesh.
///
/// Node count scales like `(size / target_edge_length)^3` through the
/// station, azimuth and radial counts. Errors on invalid parameters, on a
/// degenerate cell, and when the minimum dihedral angle falls below the
/// configured floor.
pub fn build_shell_mesh(params: &GeometryParams) -> Result<Mesh> {
    params.validate()?;
    let n_c = azimuth_count(params);
    let n_r = radial_layers(params);
    let xs = stations(params);
    let ns = xs.len();

    let front = disk_template(n_c, params.inner_r(xs[0]));
    let aft = disk_template(n_c, params.inner_r(xs[ns - 1]));
    let mut layout = Layout {
        n_c,
        n_r,
        xs,
        front,
        aft,
        station_offset: Vec::new(),
        n_nodes: 0,
    };
    let mut off = 0usize;
    for i in 0..ns {
        layout.station_offset.push(off);
        off += layout.station_count(i);
    }
    layout.n_nodes = off;

    // node coordinates
    let mut nodes = vec![[0.0f64; 3]; layout.n_nodes];
    for i in 0..ns {
        let x = layout.xs[i];
        let r_in = params.inner_r(x);
        let dr = params.wall_thickness / (n_r - 1) as f64;
        for pos in 0..n_c {
            let az = az_of_pos(pos, n_c);
            let phi = 2.0 * PI * az as f64 / n_c as f64;
            for k in 0..n_r {
                let r = r_in + k as f64 * dr;
                let idx = layout.resolve(i, NodeRef::Wall { az, layer: k });
                nodes[idx] = [x, r * phi.cos(), r * phi.sin()];
            }
        }
        if let Some(tpl) = layout.has_disk(i) {
            let rings = tpl.rings.clone();
            for (l, (c, frac)) in rings.iter().enumerate() {
                let r = frac * r_in;
                for t in 0..*c {
                    let phi = 2.0 * PI * t as f64 / *c as f64;
                    let idx = layout.resolve(i, NodeRef::Disk { ring: l, t });
                    nodes[idx] = [x, r * phi.cos(), r * phi.sin()];
                }
            }
            let idx = layout.resolve(i, NodeRef::Center);
            nodes[idx] = [x, 0.0, 0.0];
        }
    }

    // 2D cross-section triangles per region
    let wall_tris = wall_triangles(n_c, n_r);
    let front_tris = disk_triangles(n_c, &layout.front);
    let aft_tris = disk_triangles(n_c, &layout.aft);

    // extrude to prisms, split to tets
    let mut tets: Vec<[usize; 4]> = Vec::new();
    let emit = |layout: &Layout, i: usize, tris: &[[NodeRef; 3]], tets: &mut Vec<[usize; 4]>| -> Result<()> {
        for tri in tris {
            let a = [
                layout.resolve(i, tri[0]),
                layout.resolve(i, tri[1]),
                layout.resolve(i, tri[2]),
            ];
            let b = [
                layout.resolve(i + 1, tri[0]),
                layout.resolve(i + 1, tri[1]),
                layout.resolve(i + 1, tri[2]),
            ];
            for mut t in prism_to_tets(a, b) {
                let v = signed_tet_volume(nodes[t[0]], nodes[t[1]], nodes[t[2]], nodes[t[3]]);
                if v < 0.0 {
                    t.swap(2, 3);
                }
                let v = v.abs();
                if !(v > 0.0) {
                    return Err(Error::Mesh(format!(
                        "degenerate tet {t:?} with volume {v:e} near x = {}",
                        layout.xs[i]
                    )));
                }
                tets.push(t);
            }
        }
        Ok(())
    };
    for i in 0..(ns - 1) {
        emit(&layout, i, &wall_tris, &mut tets)?;
        if i == 0 {
            emit(&layout, i, &front_tris, &mut tets)?;
        }
        if i == ns - 2 {
            emit(&layout, i, &aft_tris, &mut tets)?;
        }
    }

    let surface_tris = extract_boundary(nodes.len(), &tets);
    let mut mesh = Mesh {
        nodes,
        tets,
        surface_tris,
        exterior_nodes: Vec::new(),
    };
    tag_boundaries(&mut mesh, params)?;

    let (min_dihedral, worst) = mesh.worst_dihedral();
    if min_dihedral < DEFAULT_DIHEDRAL_FLOOR_DEG {
        let c = mesh.tet_centroid(worst);
        return Err(Error::Mesh(format!(
            "minimum dihedral angle {min_dihedral:.2} deg below floor {DEFAULT_DIHEDRAL_FLOOR_DEG} deg \
             (tet near x={:.4}, r={:.4})",
            c[0],
            (c[1] * c[1] + c[2] * c[2]).sqrt()
        )));
    }
    Ok(mesh)
}
