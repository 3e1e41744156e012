//! Analytic surface-pressure generator over flight conditions.
//!
//! Modified-Newtonian impact law on the exterior surface plus a leeward
//! high-pressure band with hard azimuthal edges. The band and the
//! nose/body junction give the field the two discontinuity features the
//! estimator has to contend with: a sharp azimuthal edge that moves with
//! the flow direction, and a fixed kink at the geometry break.
//!
//! Body-frame convention: the freestream direction tilts toward +z with
//! angle of attack and toward +y with sideslip,
//! `v = (cos a cos b, sin b, sin a cos b)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::atmosphere::{ambient_pressure, dynamic_pressure};
use crate::error::{Error, Result};
use crate::mesh::{GeometryParams, Mesh};

/// Classical Newtonian stagnation coefficient.
pub const CP_MAX: f64 = 2.0;
/// Leeward band amplitude as a fraction of q_inf * sin^2(alpha_total).
pub const LEEWARD_AMPLITUDE: f64 = 0.3;
/// Leeward band azimuthal half-width, radians.
pub const LEEWARD_HALF_WIDTH: f64 = 30.0 * PI / 180.0;

/// Flight condition mu = [M, alpha, beta, H]; angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightCondition {
    pub mach: f64,
    pub alpha_deg: f64,
    pub beta_deg: f64,
    pub altitude: f64,
}

impl FlightCondition {
    pub fn validate(&self) -> Result<()> {
        if !(self.mach > 1.0) {
            return Err(Error::InvalidParameter(format!("mach {} must exceed 1", self.mach)));
        }
        if self.alpha_deg.abs() > 15.0 || self.beta_deg.abs() > 15.0 {
            return Err(Error::InvalidParameter(format!(
                "angles (alpha {}, beta {}) outside +-15 deg",
                self.alpha_deg, self.beta_deg
            )));
        }
        if self.altitude < 0.0 {
            return Err(Error::InvalidParameter("altitude below zero".into()));
        }
        Ok(())
    }

    /// Unit freestream direction in the body frame.
    pub fn freestream(&self) -> [f64; 3] {
        let a = self.alpha_deg.to_radians();
        let b = self.beta_deg.to_radians();
        [a.cos() * b.cos(), b.sin(), a.sin() * b.cos()]
    }

    /// Total angle of attack: angle between the freestream and the body axis.
    pub fn total_alpha(&self) -> f64 {
        self.freestream()[0].clamp(-1.0, 1.0).acos()
    }
}

/// Nodal pressure values on the exterior nodes, in exterior-node order.
#[derive(Debug, Clone)]
pub struct PressureField {
    pub values: DVector<f64>,
    pub condition: Option<FlightCondition>,
}

impl PressureField {
    pub fn n_p(&self) -> usize {
        self.values.len()
    }
}

/// A databank of pressure snapshots sharing one exterior-node layout.
#[derive(Debug, Clone)]
pub struct SnapshotSet {
    pub fields: Vec<PressureField>,
    pub n_p: usize,
}

impl SnapshotSet {
    pub fn new(fields: Vec<PressureField>) -> Result<Self> {
        let n_p = fields.first().map(|f| f.n_p()).unwrap_or(0);
        if fields.iter().any(|f| f.n_p() != n_p) {
            return Err(Error::DimensionMismatch {
                expected: n_p,
                got: 0,
                context: "snapshot lengths differ".into(),
            });
        }
        Ok(SnapshotSet { fields, n_p })
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Column j is snapshot j (n_p x N).
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(self.n_p, n, |i, j| self.fields[j].values[i])
    }

    pub fn conditions(&self) -> Vec<FlightCondition> {
        self.fields.iter().filter_map(|f| f.condition).collect()
    }
}

/// Exterior-node surface classification for the analytic pressure law.
enum NodeSurface {
    /// Blunt nose face, outward normal -x.
    NoseFace,
    /// Nose cone (includes the kink ring, which takes the cone value).
    Cone { phi: f64 },
    /// Cylinder body.
    Cylinder { phi: f64 },
}

fn classify(node: [f64; 3], params: &GeometryParams) -> NodeSurface {
    let x = node[0];
    let r = (node[1] * node[1] + node[2] * node[2]).sqrt();
    let phi = node[2].atan2(node[1]);
    let tol_x = 1e-9 * params.total_length();
    if x <= tol_x && r < params.outer_r(0.0) - 0.5 * params.wall_thickness {
        NodeSurface::NoseFace
    } else if x <= params.nose_length + tol_x {
        NodeSurface::Cone { phi }
    } else {
        NodeSurface::Cylinder { phi }
    }
}

fn wrap_angle_dist(a: f64, b: f64) -> f64 {
    let mut d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d = 2.0 * PI - d;
    }
    d
}

/// Evaluates the analytic pressure at the mesh's exterior nodes:
/// `p = p_inf(H) + q_inf Cp_newton + leeward band`. Deterministic:
/// identical inputs give bit-identical fields.
pub fn synth_pressure(mesh: &Mesh, params: &GeometryParams, cond: &FlightCondition) -> Result<PressureField> {
    cond.validate()?;
    if mesh.exterior_nodes.is_empty() {
        return Err(Error::Mesh("mesh has no exterior surface; tag boundaries first".into()));
    }
    let p_inf = ambient_pressure(cond.altitude);
    let q_inf = dynamic_pressure(cond.mach, cond.altitude);
    let v = cond.freestream();
    let theta_c = params.nose_half_angle();
    let (sin_tc, cos_tc) = (theta_c.sin(), theta_c.cos());
    let alpha_t = cond.total_alpha();
    let crossflow_mag = (v[1] * v[1] + v[2] * v[2]).sqrt();
    let phi_lee = if crossflow_mag > 1e-14 {
        Some(v[2].atan2(v[1]))
    } else {
        None
    };
    let band_amp = LEEWARD_AMPLITUDE * q_inf * alpha_t.sin().powi(2);

    let mut values = DVector::zeros(mesh.exterior_nodes.len());
    for (i, &node_id) in mesh.exterior_nodes.iter().enumerate() {
        let node = mesh.nodes[node_id];
        let surf = classify(node, params);
        let (normal, lateral_phi) = match surf {
            NodeSurface::NoseFace => ([-1.0, 0.0, 0.0], None),
            NodeSurface::Cone { phi } => (
                [-sin_tc, cos_tc * phi.cos(), cos_tc * phi.sin()],
                Some(phi),
            ),
            NodeSurface::Cylinder { phi } => ([0.0, phi.cos(), phi.sin()], Some(phi)),
        };
        let impinge = -(v[0] * normal[0] + v[1] * normal[1] + v[2] * normal[2]);
        let cp = CP_MAX * impinge.max(0.0).powi(2);
        let mut p = p_inf + q_inf * cp;
        if let (Some(phi), Some(lee)) = (lateral_phi, phi_lee) {
            if wrap_angle_dist(phi, lee) <= LEEWARD_HALF_WIDTH {
                p += band_amp;
            }
        }
        values[i] = p;
    }
    Ok(PressureField {
        values,
        condition: Some(*cond),
    })
}

/// Cartesian product of the condition grids in lexicographic (M, alpha,
/// beta) order, one snapshot per condition.
pub fn database_snapshots(
    mesh: &Mesh,
    params: &GeometryParams,
    machs: &[f64],
    alphas_deg: &[f64],
    betas_deg: &[f64],
    altitude: f64,
) -> Result<SnapshotSet> {
    if machs.is_empty() || alphas_deg.is_empty() || betas_deg.is_empty() {
        return Err(Error::InvalidParameter("empty condition grid".into()));
    }
    let mut fields = Vec::with_capacity(machs.len() * alphas_deg.len() * betas_deg.len());
    for &m in machs {
        for &a in alphas_deg {
            for &b in betas_deg {
                let cond = FlightCondition {
                    mach: m,
                    alpha_deg: a,
                    beta_deg: b,
                    altitude,
                };
                fields.push(synth_pressure(mesh, params, &cond)?);
            }
        }
    }
    SnapshotSet::new(fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atmosphere;
    use crate::mesh::tests::coarse_params;
    use crate::mesh::build_shell_mesh;

    fn cond(mach: f64, alpha: f64, beta: f64) -> FlightCondition {
        FlightCondition {
            mach,
            alpha_deg: alpha,
            beta_deg: beta,
            altitude: 20_000.0,
        }
    }

    #[test]
    fn validates_conditions() {
        assert!(cond(0.8, 0.0, 0.0).validate().is_err());
        assert!(cond(5.0, 20.0, 0.0).validate().is_err());
        assert!(FlightCondition { altitude: -1.0, ..cond(5.0, 0.0, 0.0) }.validate().is_err());
        assert!(cond(5.0, 10.0, -10.0).validate().is_ok());
    }

    #[test]
    fn cylinder_at_zero_incidence_reads_ambient() {
        let p = coarse_params();
        let mesh = build_shell_mesh(&p).unwrap();
        let field = synth_pressure(&mesh, &p, &cond(5.0, 0.0, 0.0)).unwrap();
        let p_inf = atmosphere::ambient_pressure(20_000.0);
        for (i, &n) in mesh.exterior_nodes.iter().enumerate() {
            let x = mesh.nodes[n][0];
            if x > p.nose_length + 1e-9 && field.values[i].is_finite() {
                assert!(
                    (field.values[i] - p_inf).abs() < 1e-9 * p_inf,
                    "cylinder node pressure {} vs p_inf {p_inf}",
                    field.values[i]
                );
            }
            assert!(field.values[i] >= 0.0);
        }
    }

    #[test]
    fn cone_at_zero_incidence_newtonian_value() {
        let p = coarse_params();
        let mesh = build_shell_mesh(&p).unwrap();
        let c = cond(6.0, 0.0, 0.0);
        let field = synth_pressure(&mesh, &p, &c).unwrap();
        let expect = atmosphere::ambient_pressure(20_000.0)
            + atmosphere::dynamic_pressure(6.0, 20_000.0) * CP_MAX * p.nose_half_angle().sin().powi(2);
        for (i, &n) in mesh.exterior_nodes.iter().enumerate() {
            let node = mesh.nodes[n];
            let r = (node[1] * node[1] + node[2] * node[2]).sqrt();
            let on_cone_lateral = node[0] > 1e-9
                && node[0] < p.nose_length - 1e-9
                && (r - p.outer_r(node[0])).abs() < 0.3 * p.wall_thickness;
            if on_cone_lateral {
                assert!(
                    (field.values[i] - expect).abs() < 1e-9 * expect,
                    "cone node {} vs {expect}",
                    field.values[i]
                );
            }
        }
    }

    #[test]
    fn axisymmetric_field_invariant_under_rotation() {
        let p = coarse_params();
        let mesh = build_shell_mesh(&p).unwrap();
        let c = cond(5.5, 0.0, 0.0);
        let f1 = synth_pressure(&mesh, &p, &c).unwrap();
        // rotate every node about x by one azimuthal spacing and re-evaluate
        let mut rot = mesh.clone();
        let dphi = 2.0 * PI / 20.0;
        for n in rot.nodes.iter_mut() {
            let (y, z) = (n[1], n[2]);
            n[1] = y * dphi.cos() - z * dphi.sin();
            n[2] = y * dphi.sin() + z * dphi.cos();
        }
        let f2 = synth_pressure(&rot, &p, &c).unwrap();
        for i in 0..f1.values.len() {
            let rel = (f1.values[i] - f2.values[i]).abs() / f1.values[i].abs();
            assert!(rel < 1e-6, "rotation changed node {i}: {} vs {}", f1.values[i], f2.values[i]);
        }
    }

    #[test]
    fn determinism_bit_identical() {
        let p = coarse_params();
        let mesh = build_shell_mesh(&p).unwrap();
        let c = cond(6.5, 8.0, 5.0);
        let f1 = synth_pressure(&mesh, &p, &c).unwrap();
        let f2 = synth_pressure(&mesh, &p, &c).unwrap();
        assert_eq!(f1.values.as_slice(), f2.values.as_slice());
    }

    #[test]
    fn stagnation_pressure_monotone_in_mach() {
        let p = coarse_params();
        let mesh = build_shell_mesh(&p).unwrap();
        // nose-face node: strongest windward response
        let idx = mesh
            .exterior_nodes
            .iter()
            .position(|&n| mesh.nodes[n][0].abs() < 1e-12 && mesh.nodes[n][1].hypot(mesh.nodes[n][2]) < 0.5 * p.tip_radius())
            .expect("front face node");
        let mut last = 0.0;
        for m in [5.0, 5.5, 6.0, 6.5, 7.0] {
            let f = synth_pressure(&mesh, &p, &cond(m, 4.0, 2.0)).unwrap();
            assert!(f.values[idx] > last, "stagnation pressure not increasing at M {m}");
            last = f.values[idx];
        }
    }

    #[test]
    fn leeward_band_jump_present_at_incidence() {
        let p = coarse_params();
        let mesh = build_shell_mesh(&p).unwrap();
        let c = cond(7.0, 6.0, 0.0);
        let field = synth_pressure(&mesh, &p, &c).unwrap();
        // azimuthal profile at a mid-body station: nodes on the outer surface
        // near x = 2/3 of total length
        let x_star = 0.66 * p.total_length();
        let mut ring: Vec<(f64, f64)> = Vec::new();
        for (i, &n) in mesh.exterior_nodes.iter().enumerate() {
            let node = mesh.nodes[n];
            let r = node[1].hypot(node[2]);
            if (node[0] - x_star).abs() < 0.6 * p.target_edge_length
                && (r - p.outer_radius).abs() < 0.3 * p.wall_thickness
            {
                ring.push((node[2].atan2(node[1]), field.values[i]));
            }
        }
        assert!(ring.len() >= 10, "ring sample too small: {}", ring.len());
        ring.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mean = ring.iter().map(|r| r.1).sum::<f64>() / ring.len() as f64;
        let mut max_jump = 0.0f64;
        for w in ring.windows(2) {
            max_jump = max_jump.max((w[1].1 - w[0].1).abs());
        }
        assert!(
            max_jump >= 0.05 * mean,
            "leeward edge jump {max_jump} below 5% of mean {mean}"
        );
    }

    #[test]
    fn grid_counts_match_paper_shapes() {
        let p = coarse_params();
        let mesh = build_shell_mesh(&p).unwrap();
        let s90 = database_snapshots(
            &mesh,
            &p,
            &[5.0, 5.5, 6.0, 6.5, 7.0],
            &[0.0, 2.0, 4.0, 6.0, 8.0, 10.0],
            &[0.0, 5.0, 10.0],
            20_000.0,
        )
        .unwrap();
        assert_eq!(s90.len(), 90);
        let s243 = database_snapshots(
            &mesh,
            &p,
            &[5.0, 6.0, 7.0],
            &[-8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0],
            &[-8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0],
            20_000.0,
        )
        .unwrap();
        assert_eq!(s243.len(), 243);
        let s1 = database_snapshots(&mesh, &p, &[5.0], &[2.0], &[0.0], 20_000.0).unwrap();
        assert_eq!(s1.len(), 1);
        // lexicographic order over (M, alpha, beta)
        let conds = s90.conditions();
        assert_eq!(conds[0].mach, 5.0);
        assert_eq!(conds[1].beta_deg, 5.0);
        assert_eq!(conds[3].alpha_deg, 2.0);
        assert_eq!(conds[18].mach, 5.5);
    }
}
