use strainmap::mesh::*;

fn main() {
    let p = GeometryParams {
        body_length: 3.0,
        nose_length: 1.0,
        outer_radius: 0.25,
        wall_thickness: 0.02,
        target_edge_length: 0.032,
    };
    let t0 = std::time::Instant::now();
    let m = build_shell_mesh(&p).unwrap();
    println!(
        "nodes {}  dofs {}  tets {}  tris {}  n_p {}  min_dihedral {:.2} deg  built in {:?}",
        m.n_nodes(),
        m.n_struct_dofs(),
        m.tets.len(),
        m.surface_tris.len(),
        m.n_pressure_dofs(),
        m.min_dihedral_deg(),
        t0.elapsed()
    );
    let s1 = place_sensors(&m, &p, SensorConfig::Config1).unwrap();
    let s2 = place_sensors(&m, &p, SensorConfig::Config2).unwrap();
    println!("sensors: config1 {} config2 {}", s1.len(), s2.len());
}
