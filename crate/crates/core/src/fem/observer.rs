//! Strain observation operator: maps nodal displacements to the
//! directional strain t' eps(u) t sampled in each sensor's element.

use crate::error::{Error, Result};
use crate::mesh::{Mesh, SensorSpec};
use crate::sparse::CsrMatrix;

use super::assemble::tet_gradients;

/// One row per sensor. With constant P1 strain, t' eps(u) t in element e
/// equals sum_a (t . grad phi_a)(t . u_a), so row entries are
/// (t . grad phi_a) t_k on the element's twelve dofs.
pub fn assemble_strain_observer(mesh: &Mesh, sensors: &[SensorSpec]) -> Result<CsrMatrix> {
    let n_s = mesh.n_struct_dofs();
    let mut triplets = Vec::with_capacity(sensors.len() * 12);
    for (row, s) in sensors.iter().enumerate() {
        if s.element >= mesh.tets.len() {
            return Err(Error::Assembly(format!(
                "sensor {} references element {} of {}",
                s.id,
                s.element,
                mesh.tets.len()
            )));
        }
        let t = mesh.tets[s.element];
        let p = [
            mesh.nodes[t[0]],
            mesh.nodes[t[1]],
            mesh.nodes[t[2]],
            mesh.nodes[t[3]],
        ];
        let (inv, _) = tet_gradients(&p)?;
        let mut grads = [[0.0f64; 3]; 4];
        for i in 0..3 {
            for c in 0..3 {
                grads[i + 1][c] = inv[(i, c)];
            }
        }
        for c in 0..3 {
            grads[0][c] = -(grads[1][c] + grads[2][c] + grads[3][c]);
        }
        let dir = s.direction;
        for a in 0..4 {
            let tg = dir[0] * grads[a][0] + dir[1] * grads[a][1] + dir[2] * grads[a][2];
            for k in 0..3 {
                triplets.push((row, 3 * t[a] + k, tg * dir[k]));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(sensors.len(), n_s, &mut triplets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_box_mesh, SensorKind};

    fn sensor(kind: SensorKind, direction: [f64; 3], element: usize) -> SensorSpec {
        SensorSpec {
            id: 0,
            position: [0.0; 3],
            direction,
            kind,
            element,
        }
    }

    #[test]
    fn linear_axial_field_reads_gradient() {
        let mesh = build_box_mesh(2, 2, 2, 1.0, 1.0, 1.0).unwrap();
        let sensors = vec![
            sensor(SensorKind::Axial, [1.0, 0.0, 0.0], 3),
            sensor(SensorKind::Circumferential, [0.0, 1.0, 0.0], 3),
        ];
        let b = assemble_strain_observer(&mesh, &sensors).unwrap();
        // u = (a x, 0, 0): axial sensor reads a, transverse reads 0
        let a = 3.5e-4;
        let mut u = vec![0.0; mesh.n_struct_dofs()];
        for (n, p) in mesh.nodes.iter().enumerate() {
            u[3 * n] = a * p[0];
        }
        let y = b.mul_vec(&u);
        assert!((y[0] - a).abs() < 1e-10 * a.abs());
        assert!(y[1].abs() < 1e-14);
    }

    #[test]
    fn rigid_rotation_reads_zero() {
        let mesh = build_box_mesh(2, 2, 2, 1.0, 1.0, 1.0).unwrap();
        let sensors = vec![
            sensor(SensorKind::Axial, [1.0, 0.0, 0.0], 0),
            sensor(SensorKind::Circumferential, [0.0, 0.6, 0.8], 5),
        ];
        let b = assemble_strain_observer(&mesh, &sensors).unwrap();
        // infinitesimal rotation about (1,2,0.5): u = w x r, skew gradient
        let w = [1e-4, 2e-4, 0.5e-4];
        let mut u = vec![0.0; mesh.n_struct_dofs()];
        for (n, p) in mesh.nodes.iter().enumerate() {
            u[3 * n] = w[1] * p[2] - w[2] * p[1];
            u[3 * n + 1] = w[2] * p[0] - w[0] * p[2];
            u[3 * n + 2] = w[0] * p[1] - w[1] * p[0];
        }
        for y in b.mul_vec(&u) {
            assert!(y.abs() < 1e-9 * 1e-4, "rotation strain {y}");
        }
    }

    #[test]
    fn zero_displacement_zero_strain() {
        let mesh = build_box_mesh(1, 1, 1, 1.0, 1.0, 1.0).unwrap();
        let sensors = vec![sensor(SensorKind::Axial, [1.0, 0.0, 0.0], 0)];
        let b = assemble_strain_observer(&mesh, &sensors).unwrap();
        let y = b.mul_vec(&vec![0.0; mesh.n_struct_dofs()]);
        assert_eq!(y, vec![0.0]);
    }

    #[test]
    fn element_out_of_range_rejected() {
        let mesh = build_box_mesh(1, 1, 1, 1.0, 1.0, 1.0).unwrap();
        let sensors = vec![sensor(SensorKind::Axial, [1.0, 0.0, 0.0], 999)];
        assert!(assemble_strain_observer(&mesh, &sensors).is_err());
    }
}
