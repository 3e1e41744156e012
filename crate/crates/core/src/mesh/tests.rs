use std::f64::consts::PI;

use super::io::{mesh_from_str, mesh_to_string, sensors_from_csv, sensors_to_csv};
use super::*;

pub(crate) fn coarse_params() -> GeometryParams {
    GeometryParams {
        body_length: 1.5,
        nose_length: 0.5,
        outer_radius: 0.25,
        wall_thickness: 0.05,
        target_edge_length: 0.1,
    }
}

/// Analytic solid volume given the cavity end planes (the mesher places
/// the cavity walls one station in from each end).
fn analytic_volume(p: &GeometryParams, x_c0: f64, x_c1: f64) -> f64 {
    let tip = p.tip_radius();
    let nose = p.nose_length;
    let frustum = PI * nose / 3.0 * (tip * tip + tip * p.outer_radius + p.outer_radius * p.outer_radius);
    let outer = frustum + PI * p.outer_radius * p.outer_radius * p.body_length;
    // cavity: solid of revolution of inner_r(x) over [x_c0, x_c1]
    let int_nose = |x: f64| -> f64 {
        // ∫ π r_in(x)^2 dx on the nose, r_in = a + s x
        let s = (p.outer_radius - tip) / nose;
        let a = tip - p.wall_thickness;
        PI * (a + s * x).powi(3) / (3.0 * s)
    };
    let nose_hi = x_c1.min(nose);
    let mut cavity = 0.0;
    if x_c0 < nose {
        cavity += int_nose(nose_hi) - int_nose(x_c0);
    }
    if x_c1 > nose {
        let lo = x_c0.max(nose);
        let r = p.outer_radius - p.wall_thickness;
        cavity += PI * r * r * (x_c1 - lo);
    }
    outer - cavity
}

fn cavity_x_range(mesh: &Mesh) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for t in &mesh.surface_tris {
        if t.tag == SurfaceTag::Interior {
            for &n in &t.nodes {
                lo = lo.min(mesh.nodes[n][0]);
                hi = hi.max(mesh.nodes[n][0]);
            }
        }
    }
    (lo, hi)
}

#[test]
fn rejects_degenerate_params() {
    let mut p = coarse_params();
    p.wall_thickness = p.outer_radius;
    assert!(matches!(build_shell_mesh(&p), Err(crate::Error::InvalidParameter(_))));
    let mut p = coarse_params();
    p.target_edge_length = -1.0;
    assert!(build_shell_mesh(&p).is_err());
}

#[test]
fn volumes_positive_and_match_analytic() {
    let p = coarse_params();
    let m = build_shell_mesh(&p).unwrap();
    for t in 0..m.tets.len() {
        assert!(m.tet_volume(t) > 0.0, "tet {t} non-positive");
    }
    let (x_c0, x_c1) = cavity_x_range(&m);
    let exact = analytic_volume(&p, x_c0, x_c1);
    let got = m.total_volume();
    let rel = (got - exact).abs() / exact;
    assert!(rel < 0.02, "volume {got} vs analytic {exact} (rel {rel:.4})");
}

#[test]
fn refinement_grows_exterior_nodes_by_3_to_5() {
    let p = coarse_params();
    let mut fine = p;
    fine.target_edge_length = p.target_edge_length / 2.0;
    let coarse_n = build_shell_mesh(&p).unwrap().exterior_nodes.len();
    let fine_n = build_shell_mesh(&fine).unwrap().exterior_nodes.len();
    let ratio = fine_n as f64 / coarse_n as f64;
    assert!((3.0..=5.0).contains(&ratio), "growth ratio {ratio} (coarse {coarse_n}, fine {fine_n})");
    // frozen regression counts for the fixed coarse geometry
    assert_eq!(coarse_n, 491, "coarse exterior node count changed");
    assert_eq!(fine_n, 1545, "fine exterior node count changed");
}

#[test]
fn closed_exterior_aft_surface() {
    let m = build_shell_mesh(&coarse_params()).unwrap();
    let mut s = [0.0f64; 3];
    let mut total_area = 0.0;
    for t in &m.surface_tris {
        if matches!(t.tag, SurfaceTag::Exterior | SurfaceTag::Aft) {
            let an = m.tri_area_normal(&t.nodes);
            s[0] += an[0];
            s[1] += an[1];
            s[2] += an[2];
            total_area += norm(an);
        }
    }
    assert!(norm(s) <= 1e-8 * total_area, "net normal {:?} area {total_area}", s);
    // interior surface is closed as well (sealed cavity)
    let mut si = [0.0f64; 3];
    for t in &m.surface_tris {
        if t.tag == SurfaceTag::Interior {
            let an = m.tri_area_normal(&t.nodes);
            si[0] += an[0];
            si[1] += an[1];
            si[2] += an[2];
        }
    }
    assert!(norm(si) <= 1e-8 * total_area);
}

#[test]
fn tag_examples_and_idempotence() {
    let p = coarse_params();
    let mut m = build_shell_mesh(&p).unwrap();
    // triangle centroid at outer radius -> exterior; inner body radius -> interior
    for t in &m.surface_tris {
        let c = m.tri_centroid(&t.nodes);
        let r = (c[1] * c[1] + c[2] * c[2]).sqrt();
        if c[0] > p.nose_length && c[0] < p.total_length() - 2.0 * p.target_edge_length {
            if (r - p.outer_radius).abs() < 0.3 * p.wall_thickness {
                assert_eq!(t.tag, SurfaceTag::Exterior);
            }
            if (r - (p.outer_radius - p.wall_thickness)).abs() < 0.3 * p.wall_thickness {
                assert_eq!(t.tag, SurfaceTag::Interior);
            }
        }
    }
    let before = m.tag_counts();
    let ext_before = m.exterior_nodes.clone();
    tag_boundaries(&mut m, &p).unwrap();
    assert_eq!(before, m.tag_counts(), "retagging must be idempotent");
    assert_eq!(ext_before, m.exterior_nodes);
    // every boundary triangle has exactly one tag by construction; check the
    // partition covers all boundary faces of the tet mesh
    let boundary = extract_boundary(m.nodes.len(), &m.tets);
    assert_eq!(boundary.len(), m.surface_tris.len());
}

#[test]
fn exterior_interior_disjoint() {
    let m = build_shell_mesh(&coarse_params()).unwrap();
    let mut interior: Vec<usize> = m
        .surface_tris
        .iter()
        .filter(|t| t.tag == SurfaceTag::Interior)
        .flat_map(|t| t.nodes)
        .collect();
    interior.sort_unstable();
    interior.dedup();
    let shared: Vec<usize> = m
        .exterior_nodes
        .iter()
        .copied()
        .filter(|n| interior.binary_search(n).is_ok())
        .collect();
    assert!(shared.is_empty(), "exterior/interior share {} nodes", shared.len());
}

#[test]
fn dihedral_floor_holds() {
    let m = build_shell_mesh(&coarse_params()).unwrap();
    let d = m.min_dihedral_deg();
    assert!(d >= DEFAULT_DIHEDRAL_FLOOR_DEG, "min dihedral {d}");
}

#[test]
fn aft_nodes_nonempty_and_on_plane() {
    let p = coarse_params();
    let m = build_shell_mesh(&p).unwrap();
    let aft: Vec<&SurfaceTri> = m.surface_tris.iter().filter(|t| t.tag == SurfaceTag::Aft).collect();
    assert!(!aft.is_empty());
    for t in aft {
        for &n in &t.nodes {
            assert!((m.nodes[n][0] - p.total_length()).abs() < 1e-12);
        }
    }
}

#[test]
fn sensor_counts_and_kinds() {
    let p = coarse_params();
    let m = build_shell_mesh(&p).unwrap();
    let s1 = place_sensors(&m, &p, SensorConfig::Config1).unwrap();
    assert_eq!(s1.len(), 27);
    let axial = s1.iter().filter(|s| s.kind == SensorKind::Axial).count();
    let circ = s1.iter().filter(|s| s.kind == SensorKind::Circumferential).count();
    assert_eq!((axial, circ), (18, 9));
    let s2 = place_sensors(&m, &p, SensorConfig::Config2).unwrap();
    assert_eq!(s2.len(), 54);
    // config2 = config1 followed by the mirrored rows
    for (a, b) in s1.iter().zip(&s2) {
        assert_eq!(a.position, b.position);
        assert_eq!(a.kind, b.kind);
    }
}

#[test]
fn sensor_directions_and_interior_position() {
    let p = coarse_params();
    let m = build_shell_mesh(&p).unwrap();
    for s in place_sensors(&m, &p, SensorConfig::Config2).unwrap() {
        assert!((norm(s.direction) - 1.0).abs() < 1e-12);
        match s.kind {
            SensorKind::Axial => assert_eq!(s.direction, [1.0, 0.0, 0.0]),
            SensorKind::Circumferential => {
                assert!(s.direction[0].abs() < 1e-10);
                let phi = s.position[2].atan2(s.position[1]);
                let radial = [0.0, phi.cos(), phi.sin()];
                assert!(dot(s.direction, radial).abs() < 1e-10);
            }
        }
        // position on the interior surface: radius within the cavity wall
        let r = (s.position[1] * s.position[1] + s.position[2] * s.position[2]).sqrt();
        let rel = (r - p.inner_r(s.position[0])).abs();
        assert!(rel < 0.01 * p.outer_radius, "sensor off the interior surface by {rel}");
        assert!(s.element < m.tets.len());
        // position lies on a face of the referenced element: barycentric check
        let t = m.tets[s.element];
        let v_tot = m.tet_volume(s.element);
        let mut bary_min: f64 = f64::INFINITY;
        for i in 0..4 {
            let mut q = [m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]], m.nodes[t[3]]];
            q[i] = s.position;
            bary_min = bary_min.min(signed_tet_volume(q[0], q[1], q[2], q[3]) / v_tot);
        }
        assert!(bary_min > -1e-9, "sensor outside its element (min bary {bary_min})");
    }
}

#[test]
fn config2_mirror_partners() {
    let p = coarse_params();
    let m = build_shell_mesh(&p).unwrap();
    let s2 = place_sensors(&m, &p, SensorConfig::Config2).unwrap();
    let tol = 0.5 * p.target_edge_length;
    for i in 0..27 {
        let a = &s2[i];
        let b = &s2[i + 27];
        // rows near the xz plane reflect across xy (z -> -z); rows near the
        // xy plane reflect across xz (y -> -y)
        let refl_z = [a.position[0], a.position[1], -a.position[2]];
        let refl_y = [a.position[0], -a.position[1], a.position[2]];
        let d = norm(sub(refl_z, b.position)).min(norm(sub(refl_y, b.position)));
        assert!(d <= tol, "sensor {i} mirror distance {d}");
    }
}

#[test]
fn sensors_error_without_interior_surface() {
    let p = coarse_params();
    let m = build_box_mesh(3, 3, 3, 1.0, 1.0, 1.0).unwrap();
    assert!(matches!(
        place_sensors(&m, &p, SensorConfig::Config1),
        Err(crate::Error::SensorPlacement(..))
    ));
}

#[test]
fn mesh_text_roundtrip_byte_identical() {
    let m = build_shell_mesh(&coarse_params()).unwrap();
    let text = mesh_to_string(&m);
    let m2 = mesh_from_str(&text).unwrap();
    assert_eq!(mesh_to_string(&m2), text);
    assert_eq!(m.exterior_nodes, m2.exterior_nodes);
    assert_eq!(m.tets, m2.tets);
    // owner tets recomputed on load must agree
    for (a, b) in m.surface_tris.iter().zip(&m2.surface_tris) {
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.tag, b.tag);
        assert_eq!(a.tet, b.tet);
    }
}

#[test]
fn sensors_csv_roundtrip() {
    let p = coarse_params();
    let m = build_shell_mesh(&p).unwrap();
    let s = place_sensors(&m, &p, SensorConfig::Config1).unwrap();
    let csv = sensors_to_csv(&s);
    let s2 = sensors_from_csv(&csv).unwrap();
    assert_eq!(sensors_to_csv(&s2), csv);
    assert_eq!(s.len(), s2.len());
}
