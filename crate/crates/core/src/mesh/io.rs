//! Plain-text mesh persistence and sensor CSV lists.
//!
//! Mesh format, version 1:
//!
//! ```text
//! strainmap-mesh 1
//! <n_nodes> <n_tets> <n_tris>
//! <index> <x> <y> <z>              (node block)
//! <index> <a> <b> <c> <d>          (tet block)
//! <a> <b> <c> <tag>                (tagged triangle block)
//! ```
//!
//! Floats print in Rust's shortest round-trip form, so save/load is
//! bit-exact and re-saving reproduces the file byte for byte.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{Mesh, SensorKind, SensorSpec, SurfaceTag, SurfaceTri};
use crate::error::{Error, Result};

const MESH_MAGIC: &str = "strainmap-mesh";
const MESH_VERSION: u32 = 1;

pub fn mesh_to_string(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MESH_MAGIC} {MESH_VERSION}");
    let _ = writeln!(s, "{} {} {}", mesh.nodes.len(), mesh.tets.len(), mesh.surface_tris.len());
    for (i, n) in mesh.nodes.iter().enumerate() {
        let _ = writeln!(s, "{i} {} {} {}", n[0], n[1], n[2]);
    }
    for (i, t) in mesh.tets.iter().enumerate() {
        let _ = writeln!(s, "{i} {} {} {} {}", t[0], t[1], t[2], t[3]);
    }
    for t in &mesh.surface_tris {
        let _ = writeln!(s, "{} {} {} {}", t.nodes[0], t.nodes[1], t.nodes[2], t.tag.as_str());
    }
    s
}

pub fn mesh_from_str(text: &str) -> Result<Mesh> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty mesh file".into()))?;
    let mut hp = header.split_whitespace();
    if hp.next() != Some(MESH_MAGIC) {
        return Err(Error::Format("missing mesh magic".into()));
    }
    let version: u32 = hp
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Format("missing mesh version".into()))?;
    if version != MESH_VERSION {
        return Err(Error::Format(format!("unsupported mesh version {version}")));
    }
    let counts = lines.next().ok_or_else(|| Error::Format("missing count line".into()))?;
    let mut cp = counts.split_whitespace().map(|v| v.parse::<usize>());
    let n_nodes = cp.next().and_then(|r| r.ok()).ok_or_else(|| Error::Format("bad counts".into()))?;
    let n_tets = cp.next().and_then(|r| r.ok()).ok_or_else(|| Error::Format("bad counts".into()))?;
    let n_tris = cp.next().and_then(|r| r.ok()).ok_or_else(|| Error::Format("bad counts".into()))?;

    let mut nodes = vec![[0.0f64; 3]; n_nodes];
    for _ in 0..n_nodes {
        let line = lines.next().ok_or_else(|| Error::Format("truncated node block".into()))?;
        let mut p = line.split_whitespace();
        let i: usize = parse_tok(p.next(), "node index")?;
        if i >= n_nodes {
            return Err(Error::Format(format!("node index {i} out of range")));
        }
        nodes[i] = [
            parse_tok(p.next(), "node x")?,
            parse_tok(p.next(), "node y")?,
            parse_tok(p.next(), "node z")?,
        ];
    }
    let mut tets = vec![[0usize; 4]; n_tets];
    for _ in 0..n_tets {
        let line = lines.next().ok_or_else(|| Error::Format("truncated tet block".into()))?;
        let mut p = line.split_whitespace();
        let i: usize = parse_tok(p.next(), "tet index")?;
        if i >= n_tets {
            return Err(Error::Format(format!("tet index {i} out of range")));
        }
        for k in 0..4 {
            tets[i][k] = parse_tok(p.next(), "tet node")?;
        }
    }
    // face -> owning tet, for boundary triangle owners
    let mut owner: HashMap<[usize; 3], usize> = HashMap::new();
    const FACE: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
    for (ti, t) in tets.iter().enumerate() {
        for f in &FACE {
            let mut key = [t[f[0]], t[f[1]], t[f[2]]];
            key.sort_unstable();
            owner.insert(key, ti); // boundary faces have a unique owner
        }
    }
    let mut surface_tris = Vec::with_capacity(n_tris);
    for _ in 0..n_tris {
        let line = lines.next().ok_or_else(|| Error::Format("truncated triangle block".into()))?;
        let mut p = line.split_whitespace();
        let a: usize = parse_tok(p.next(), "tri node")?;
        let b: usize = parse_tok(p.next(), "tri node")?;
        let c: usize = parse_tok(p.next(), "tri node")?;
        let tag = p
            .next()
            .and_then(SurfaceTag::parse)
            .ok_or_else(|| Error::Format("bad triangle tag".into()))?;
        let mut key = [a, b, c];
        key.sort_unstable();
        let tet = *owner
            .get(&key)
            .ok_or_else(|| Error::Format(format!("triangle ({a},{b},{c}) not a tet face")))?;
        surface_tris.push(SurfaceTri {
            nodes: [a, b, c],
            tag,
            tet,
        });
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

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Format(format!("missing or invalid {what}")))
}

pub fn save_mesh(mesh: &Mesh, path: &Path) -> Result<()> {
    crate::artifacts::write_atomic(path, mesh_to_string(mesh).as_bytes())
}

pub fn load_mesh(path: &Path) -> Result<Mesh> {
    let text = std::fs::read_to_string(path)?;
    mesh_from_str(&text)
}

pub fn sensors_to_csv(sensors: &[SensorSpec]) -> String {
    let mut s = String::from("id,x,y,z,dx,dy,dz,kind,element\n");
    for sp in sensors {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            sp.id,
            sp.position[0],
            sp.position[1],
            sp.position[2],
            sp.direction[0],
            sp.direction[1],
            sp.direction[2],
            sp.kind.as_str(),
            sp.element
        );
    }
    s
}

pub fn sensors_from_csv(text: &str) -> Result<Vec<SensorSpec>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty sensor csv".into()))?;
    if header.trim() != "id,x,y,z,dx,dy,dz,kind,element" {
        return Err(Error::Format("bad sensor csv header".into()));
    }
    let mut out = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::Format(format!("bad sensor row: {line}")));
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Format(format!("bad float {s}")))
        };
        out.push(SensorSpec {
            id: f[0].parse().map_err(|_| Error::Format("bad sensor id".into()))?,
            position: [parse_f(f[1])?, parse_f(f[2])?, parse_f(f[3])?],
            direction: [parse_f(f[4])?, parse_f(f[5])?, parse_f(f[6])?],
            kind: SensorKind::parse(f[7]).ok_or_else(|| Error::Format("bad sensor kind".into()))?,
            element: f[8].parse().map_err(|_| Error::Format("bad sensor element".into()))?,
        });
    }
    Ok(out)
}

pub fn save_sensors(sensors: &[SensorSpec], path: &Path) -> Result<()> {
    crate::artifacts::write_atomic(path, sensors_to_csv(sensors).as_bytes())
}

pub fn load_sensors(path: &Path) -> Result<Vec<SensorSpec>> {
    let text = std::fs::read_to_string(path)?;
    sensors_from_csv(&text)
}
