//! Discrete linear-elastic forward model: stiffness `A` with the aft face
//! clamped, strain observer `B`, pressure-to-force map `C`, forward
//! solves, and the parameter-to-observable Jacobian `Z = B A^-1 C`.

mod assemble;
mod loads;
mod observer;
mod p2o;

pub use assemble::{assemble_stiffness, assemble_stiffness_raw, dirichlet_mask};
pub use loads::{assemble_pressure_to_force, surface_pressure_forces, surface_traction_forces};
pub use observer::assemble_strain_observer;
pub use p2o::{assemble_p2o, ForceMap, P2OMap, ZRoute};

use std::sync::OnceLock;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, SensorSpec};
use crate::sparse::{CsrMatrix, SkylineFactor, SkylineMatrix};

/// Isotropic material, parameterized by Young's and shear moduli as in the
/// constitutive law sigma = 2 S eps + S(E-2S)/(3S-E) tr(eps) I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub young_modulus: f64,
    pub shear_modulus: f64,
}

impl Material {
    pub fn new(young_modulus: f64, shear_modulus: f64) -> Result<Self> {
        let m = Material {
            young_modulus,
            shear_modulus,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_young_poisson(young_modulus: f64, poisson: f64) -> Result<Self> {
        Material::new(young_modulus, young_modulus / (2.0 * (1.0 + poisson)))
    }

    pub fn validate(&self) -> Result<()> {
        let (e, s) = (self.young_modulus, self.shear_modulus);
        if !(e > 0.0) || !(s > 0.0) {
            return Err(Error::InvalidParameter(format!("moduli must be positive: E={e}, S={s}")));
        }
        if (3.0 * s - e).abs() < 1e-12 * e {
            return Err(Error::InvalidParameter("3S - E vanishes; constitutive law undefined".into()));
        }
        let nu = self.poisson();
        if !(nu > 0.0 && nu < 0.5) {
            return Err(Error::InvalidParameter(format!("derived Poisson ratio {nu} outside (0, 0.5)")));
        }
        Ok(())
    }

    pub fn poisson(&self) -> f64 {
        self.young_modulus / (2.0 * self.shear_modulus) - 1.0
    }

    /// First Lame parameter, S(E-2S)/(3S-E).
    pub fn lame_lambda(&self) -> f64 {
        let (e, s) = (self.young_modulus, self.shear_modulus);
        s * (e - 2.0 * s) / (3.0 * s - e)
    }
}

/// Assembled forward-model operators for one mesh / sensor configuration.
/// Immutable after construction; the stiffness factorization is computed
/// on first use and cached.
pub struct StructuralOperators {
    /// Stiffness with aft Dirichlet rows/columns eliminated (unit diagonal).
    pub a: SkylineMatrix,
    /// Strain observer, n_d x n_s.
    pub b: CsrMatrix,
    /// Pressure-to-force map, n_s x n_p; Dirichlet rows are zeroed so
    /// `C p` is directly admissible for the reduced solve.
    pub c_map: CsrMatrix,
    /// Per-dof Dirichlet mask.
    pub dirichlet: Vec<bool>,
    /// Exterior node ids owning the pressure dofs, sorted.
    pub exterior_nodes: Vec<usize>,
    factor: OnceLock<SkylineFactor>,
}

impl StructuralOperators {
    pub fn build(mesh: &Mesh, material: &Material, sensors: &[SensorSpec]) -> Result<Self> {
        material.validate()?;
        let a = assemble_stiffness(mesh, material)?;
        let b = assemble_strain_observer(mesh, sensors)?;
        let dirichlet = dirichlet_mask(mesh);
        let c_map = assemble_pressure_to_force(mesh, &dirichlet)?;
        Ok(StructuralOperators {
            a,
            b,
            c_map,
            dirichlet,
            exterior_nodes: mesh.exterior_nodes.clone(),
            factor: OnceLock::new(),
        })
    }

    /// Assembles from parts; used by the artifact loader.
    pub fn from_parts(
        a: SkylineMatrix,
        b: CsrMatrix,
        c_map: CsrMatrix,
        dirichlet: Vec<bool>,
        exterior_nodes: Vec<usize>,
    ) -> Self {
        StructuralOperators {
            a,
            b,
            c_map,
            dirichlet,
            exterior_nodes,
            factor: OnceLock::new(),
        }
    }

    pub fn n_s(&self) -> usize {
        self.a.n()
    }

    pub fn n_d(&self) -> usize {
        self.b.nrows()
    }

    pub fn n_p(&self) -> usize {
        self.c_map.ncols()
    }

    pub fn factorization(&self) -> Result<&SkylineFactor> {
        if let Some(f) = self.factor.get() {
            return Ok(f);
        }
        let f = self.a.factor()?;
        Ok(self.factor.get_or_init(|| f))
    }
}

/// Solves `A u = f` through the cached factorization, with one step of
/// iterative refinement when the first residual misses the tolerance.
pub fn solve_forward(ops: &StructuralOperators, f: &[f64]) -> Result<Vec<f64>> {
    let n = ops.n_s();
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.len(),
            context: "solve_forward rhs".into(),
        });
    }
    for (i, &fi) in f.iter().enumerate() {
        if ops.dirichlet[i] && fi != 0.0 {
            return Err(Error::Assembly(format!("rhs nonzero at Dirichlet dof {i}")));
        }
    }
    let factor = ops.factorization()?;
    let mut u = factor.solve(f);
    let norm_f = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm_f == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let tol = 1e-10 * norm_f;
    let residual = |u: &[f64]| -> Vec<f64> {
        let au = ops.a.mul_vec(u);
        au.iter().zip(f).map(|(a, b)| b - a).collect::<Vec<f64>>()
    };
    let mut r = residual(&u);
    let mut nr = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nr > tol {
        let du = factor.solve(&r);
        for (ui, di) in u.iter_mut().zip(&du) {
            *ui += di;
        }
        r = residual(&u);
        nr = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    if nr > tol {
        return Err(Error::Numerical(format!(
            "forward solve residual {nr:.3e} above {tol:.3e} after refinement"
        )));
    }
    Ok(u)
}

/// y = B u, the modeled strain at the sensors.
pub fn compute_strain_response(ops: &StructuralOperators, u: &[f64]) -> Result<DVector<f64>> {
    if u.len() != ops.n_s() {
        return Err(Error::DimensionMismatch {
            expected: ops.n_s(),
            got: u.len(),
            context: "compute_strain_response displacement".into(),
        });
    }
    Ok(DVector::from_vec(ops.b.mul_vec(u)))
}

/// Modeled strain for a nodal pressure field: y = B A^-1 C p.
pub fn strain_from_pressure(ops: &StructuralOperators, p: &[f64]) -> Result<DVector<f64>> {
    if p.len() != ops.n_p() {
        return Err(Error::DimensionMismatch {
            expected: ops.n_p(),
            got: p.len(),
            context: "strain_from_pressure field".into(),
        });
    }
    let f = ops.c_map.mul_vec(p);
    let u = solve_forward(ops, &f)?;
    compute_strain_response(ops, &u)
}
