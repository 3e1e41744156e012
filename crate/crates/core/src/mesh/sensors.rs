//! Strain gauge placement on the interior surface.
//!
//! Gauges sit in rows of nine along the body. Configuration 1 carries an
//! axial row and a combined axial+circumferential row; Configuration 2
//! adds the mirror image of each row through the x-axis. Sites are the
//! diagonal midpoints of interior-surface quads, so mirrored rows land on
//! exactly mirrored positions.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::shell::azimuth_count;
use super::{dot, norm, sub, GeometryParams, Mesh, SurfaceTag};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensorKind {
    Axial,
    Circumferential,
}

impl SensorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SensorKind::Axial => "axial",
            SensorKind::Circumferential => "circumferential",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "axial" => Some(SensorKind::Axial),
            "circumferential" => Some(SensorKind::Circumferential),
            _ => None,
        }
    }
}

/// One strain gauge: position on the interior surface, unit measurement
/// direction, and the tet whose (constant) strain it samples.
#[derive(Debug, Clone)]
pub struct SensorSpec {
    pub id: usize,
    pub position: [f64; 3],
    pub direction: [f64; 3],
    pub kind: SensorKind,
    pub element: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensorConfig {
    Config1,
    Config2,
}

impl SensorConfig {
    pub fn as_str(&self) -> &'static str {
        match self {
            SensorConfig::Config1 => "config1",
            SensorConfig::Config2 => "config2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "config1" => Some(SensorConfig::Config1),
            "config2" => Some(SensorConfig::Config2),
            _ => None,
        }
    }

    pub fn sensor_count(&self) -> usize {
        match self {
            SensorConfig::Config1 => 27,
            SensorConfig::Config2 => 54,
        }
    }
}

/// Candidate gauge site: the diagonal midpoint of one interior-surface
/// quad, which lies exactly on a face of the owning tet.
struct Site {
    pos: [f64; 3],
    phi: f64,
    x: f64,
    tet: usize,
}

fn interior_lateral_sites(mesh: &Mesh) -> Vec<Site> {
    // lateral = interior faces whose normal is not along the axis
    let lateral: Vec<usize> = mesh
        .surface_tris
        .iter()
        .enumerate()
        .filter(|(_, t)| t.tag == SurfaceTag::Interior)
        .filter(|(_, t)| {
            let n = mesh.tri_area_normal(&t.nodes);
            n[0].abs() < 0.8 * norm(n)
        })
        .map(|(i, _)| i)
        .collect();
    // pair triangles across their longest edge: that edge is the quad
    // diagonal for the near-rectangular lateral quads
    let longest_edge = |tri: &[usize; 3]| -> (usize, usize) {
        let mut best = (tri[0].min(tri[1]), tri[0].max(tri[1]));
        let mut best_len = -1.0f64;
        for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
            let l = norm(sub(mesh.nodes[a], mesh.nodes[b]));
            if l > best_len {
                best_len = l;
                best = (a.min(b), a.max(b));
            }
        }
        best
    };
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for &ti in &lateral {
        by_edge.entry(longest_edge(&mesh.surface_tris[ti].nodes)).or_default().push(ti);
    }
    let mut sites = Vec::new();
    for ((a, b), tris) in by_edge {
        if tris.len() != 2 {
            continue;
        }
        let pa = mesh.nodes[a];
        let pb = mesh.nodes[b];
        let pos = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0, (pa[2] + pb[2]) / 2.0];
        let tet = mesh.surface_tris[tris[0]].tet.min(mesh.surface_tris[tris[1]].tet);
        sites.push(Site {
            pos,
            phi: pos[2].atan2(pos[1]),
            x: pos[0],
            tet,
        });
    }
    sites.sort_by(|p, q| (p.x, p.phi).partial_cmp(&(q.x, q.phi)).unwrap());
    sites
}

fn ang_dist(a: f64, b: f64) -> f64 {
    let mut d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d = 2.0 * PI - d;
    }
    d
}

/// Places the gauges of `config`. Nine sites per row, evenly spread over
/// the cavity length. Errors when the interior surface offers no site
/// column at a row azimuth.
pub fn place_sensors(mesh: &Mesh, params: &GeometryParams, config: SensorConfig) -> Result<Vec<SensorSpec>> {
    params.validate()?;
    let n_c = azimuth_count(params);
    let s = 2.0 * PI / n_c as f64;
    // row azimuths sit on quad-center meridians next to the xz / xy planes
    let phi_a = PI / 2.0 - s / 2.0; // +z side
    let phi_b = -s / 2.0; // +y side
    let mut rows: Vec<(f64, SensorKind)> = vec![
        (phi_a, SensorKind::Axial),
        (phi_a, SensorKind::Circumferential),
        (phi_b, SensorKind::Axial),
    ];
    if config == SensorConfig::Config2 {
        rows.push((-phi_a, SensorKind::Axial)); // xz row reflected across xy
        rows.push((-phi_a, SensorKind::Circumferential));
        rows.push((PI - phi_b, SensorKind::Axial)); // xy row reflected across xz
    }

    let sites = interior_lateral_sites(mesh);
    let mut sensors = Vec::with_capacity(rows.len() * 9);
    for (phi_row, kind) in rows {
        let mut col: Vec<&Site> = sites.iter().filter(|p| ang_dist(p.phi, phi_row) <= 0.3 * s).collect();
        col.sort_by(|p, q| p.x.partial_cmp(&q.x).unwrap());
        if col.len() < 9 {
            return Err(Error::SensorPlacement(0.0, phi_row.cos(), phi_row.sin()));
        }
        for k in 0..9usize {
            let idx = ((k as f64 + 0.5) * col.len() as f64 / 9.0).floor() as usize;
            let site = col[idx.min(col.len() - 1)];
            let direction = match kind {
                SensorKind::Axial => [1.0, 0.0, 0.0],
                SensorKind::Circumferential => {
                    let phi = site.phi;
                    [0.0, -phi.sin(), phi.cos()]
                }
            };
            debug_assert!((norm(direction) - 1.0).abs() < 1e-12);
            if kind == SensorKind::Circumferential {
                let radial = [0.0, site.phi.cos(), site.phi.sin()];
                debug_assert!(dot(direction, radial).abs() < 1e-10);
                debug_assert!(direction[0].abs() < 1e-10);
            }
            sensors.push(SensorSpec {
                id: sensors.len(),
                position: site.pos,
                direction,
                kind,
                element: site.tet,
            });
        }
    }
    debug_assert_eq!(sensors.len(), config.sensor_count());
    Ok(sensors)
}
