//! Model Hamiltonians on the lattice and their factorized counterparts.
//!
//! Every potential is diagonal in the occupation basis, so it is assembled from
//! occupations: a pair term sum_{x,y} dx^2 V(x,y) :rho_x rho_y: has diagonal
//! sum V(x,y) n_x (n_y - delta_xy), and a triple term likewise.

use std::f64::consts::PI;

use fock_lattice::{build_sector, FieldSet, FockSector, LatticeGrid, ProbeSet, SparseOperator, Stencil, C64};

use crate::error::{FactorError, Result};
use crate::factor::FactorSpec;
use crate::kernel::KernelSpec;

pub const COULOMB_PARTICLE_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// -1/2 sum d^2 + omega^2/2 sum (x - l/2)^2, unit mass.
    Oscillatory { omega: f64 },
    /// -1/2 sum d^2 + (N/4) omega_bar^2 sum_{j,k} (x_j - x_k)^2.
    GeneralizedOscillatory { omega_bar: f64 },
    /// -sum d^2 + sum_{j != k} (pi/l)^2 beta(beta-1) / sin^2(pi (x_j - x_k) / l).
    Cms { beta: f64, length: f64 },
    /// -sum d^2 + beta sum_{j != k} delta(x_j - x_k).
    DeltaGas { beta: f64 },
    /// -sum d^2 + alpha sum_{j != k} 1/|x_j - x_k| + logarithmic three-body term.
    Coulomb { alpha: f64, epsilon: f64 },
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Oscillatory { .. } => "oscillatory",
            ModelKind::GeneralizedOscillatory { .. } => "generalized-oscillatory",
            ModelKind::Cms { .. } => "cms",
            ModelKind::DeltaGas { .. } => "delta-gas",
            ModelKind::Coulomb { .. } => "coulomb",
        }
    }

    /// Prefactor of -d^2 in the first-quantized Hamiltonian.
    pub fn kinetic_coefficient(&self) -> f64 {
        match self {
            ModelKind::Oscillatory { .. } | ModelKind::GeneralizedOscillatory { .. } => 0.5,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub grid: LatticeGrid,
    pub n_particles: usize,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, grid: LatticeGrid, n_particles: usize) -> Result<Self> {
        let m = Self { kind, grid, n_particles };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(FactorError::Invalid(format!("{what} = {v}")));
        match self.kind {
            ModelKind::Oscillatory { omega } if !omega.is_finite() => return bad("omega", omega),
            ModelKind::GeneralizedOscillatory { omega_bar } if !omega_bar.is_finite() => return bad("omega_bar", omega_bar),
            ModelKind::Cms { beta, length } => {
                if !beta.is_finite() {
                    return bad("beta", beta);
                }
                if (length - self.grid.length()).abs() > 1e-12 * length.abs().max(1.0) {
                    return Err(FactorError::Invalid(format!(
                        "cms length {length} differs from grid length {}",
                        self.grid.length()
                    )));
                }
            }
            ModelKind::DeltaGas { beta } if !beta.is_finite() => return bad("beta", beta),
            ModelKind::Coulomb { alpha, epsilon } => {
                if !alpha.is_finite() {
                    return bad("alpha", alpha);
                }
                if !(epsilon > 0.0 && epsilon.is_finite()) {
                    return bad("epsilon", epsilon);
                }
                if self.n_particles > COULOMB_PARTICLE_CAP {
                    return Err(FactorError::Capacity {
                        what: "coulomb particle number",
                        size: self.n_particles,
                        cap: COULOMB_PARTICLE_CAP,
                    });
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn sector(&self) -> Result<FockSector> {
        Ok(build_sector(self.grid, self.n_particles)?)
    }

    /// Same model on a grid of `n_sites` with the same length.
    pub fn refined(&self, n_sites: usize) -> Result<Self> {
        Self::new(self.kind, self.grid.refined(n_sites)?, self.n_particles)
    }
}

/// Diagonal of sum_{x,y} V(x,y) n_x (n_y - delta_xy) over the basis.
pub fn pair_potential_diagonal(sector: &FockSector, v: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let n = sector.n_sites();
    let table: Vec<f64> = (0..n * n).map(|k| v(k / n, k % n)).collect();
    sector
        .basis()
        .map(|occ| {
            let mut acc = 0.0;
            for (x, &nx) in occ.iter().enumerate() {
                if nx == 0 {
                    continue;
                }
                for (y, &ny) in occ.iter().enumerate() {
                    let ny = ny as f64 - if x == y { 1.0 } else { 0.0 };
                    if ny > 0.0 {
                        acc += table[x * n + y] * nx as f64 * ny;
                    }
                }
            }
            acc
        })
        .collect()
}

/// Diagonal of sum_{x,y,z} W(x,y,z) n_x (n_y - d_xy) (n_z - d_xz - d_yz).
pub fn triple_potential_diagonal(sector: &FockSector, w: impl Fn(usize, usize, usize) -> f64) -> Vec<f64> {
    sector
        .basis()
        .map(|occ| {
            let occupied: Vec<usize> = (0..occ.len()).filter(|&i| occ[i] > 0).collect();
            let mut acc = 0.0;
            for &x in &occupied {
                for &y in &occupied {
                    let ny = occ[y] as f64 - (x == y) as u8 as f64;
                    if ny <= 0.0 {
                        continue;
                    }
                    for &z in &occupied {
                        let nz = occ[z] as f64 - (x == z) as u8 as f64 - (y == z) as u8 as f64;
                        if nz > 0.0 {
                            acc += w(x, y, z) * occ[x] as f64 * ny * nz;
                        }
                    }
                }
            }
            acc
        })
        .collect()
}

fn sgn0(d: f64) -> f64 {
    if d == 0.0 {
        0.0
    } else {
        d.signum()
    }
}

/// ln|a-b| sgn(a-b) sgn(a-c) ln|a-c| summed cyclically, with sgn(0) = 0.
pub fn coulomb_ternary_weight(dab: f64, dac: f64, dbc: f64) -> f64 {
    let term = |u: f64, v: f64| {
        let s = sgn0(u) * sgn0(v);
        if s == 0.0 {
            0.0
        } else {
            s * u.abs().ln() * v.abs().ln()
        }
    };
    term(dab, dac) + term(-dab, dbc) + term(-dac, -dbc)
}

/// The model potential as a diagonal over the sector basis.
pub fn model_potential(model: &ModelSpec, sector: &FockSector) -> Vec<f64> {
    let g = model.grid;
    let n_p = model.n_particles as f64;
    match model.kind {
        ModelKind::Oscillatory { omega } => sector
            .basis()
            .map(|occ| {
                occ.iter()
                    .enumerate()
                    .map(|(i, &k)| 0.5 * omega * omega * g.centered_coordinate(i).powi(2) * k as f64)
                    .sum()
            })
            .collect(),
        ModelKind::GeneralizedOscillatory { omega_bar } => {
            pair_potential_diagonal(sector, |x, y| 0.25 * n_p * omega_bar * omega_bar * g.minimum_image(x, y).powi(2))
        }
        ModelKind::Cms { beta, length } => pair_potential_diagonal(sector, |x, y| {
            if x == y {
                0.0
            } else {
                (PI / length).powi(2) * beta * (beta - 1.0) / (PI * g.displacement(x, y) / length).sin().powi(2)
            }
        }),
        ModelKind::DeltaGas { beta } => {
            let dx = g.spacing();
            pair_potential_diagonal(sector, |x, y| if x == y { beta / dx } else { 0.0 })
        }
        ModelKind::Coulomb { alpha, .. } => {
            let pair = pair_potential_diagonal(sector, |x, y| if x == y { 0.0 } else { alpha / g.minimum_image(x, y).abs() });
            let triple = triple_potential_diagonal(sector, |x, y, z| {
                alpha * alpha / 3.0
                    * coulomb_ternary_weight(g.minimum_image(x, y), g.minimum_image(x, z), g.minimum_image(y, z))
            });
            pair.iter().zip(&triple).map(|(a, b)| a + b).collect()
        }
    }
}

/// Model Hamiltonian with the kinetic term coefficient * sum dx (D psi)^+ (D psi) for `stencil`.
pub fn model_hamiltonian_with(model: &ModelSpec, stencil: Stencil) -> Result<SparseOperator> {
    model.validate()?;
    let sector = model.sector()?;
    let kinetic = FieldSet::new(&sector)?.gram_kinetic(stencil, model.kind.kinetic_coefficient(), sector.dim());
    let potential = SparseOperator::from_real_diagonal(&model_potential(model, &sector));
    Ok(&kinetic + &potential)
}

/// Model Hamiltonian with the forward-difference kinetic term.
pub fn model_hamiltonian(model: &ModelSpec) -> Result<SparseOperator> {
    model_hamiltonian_with(model, Stencil::Forward)
}

/// How a model is written as coefficient * sum_x dx D^+ rho^+ D + shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    pub spec: FactorSpec,
    pub coefficient: f64,
    /// Closed-form counterterm c with H^ = H + c on the N-sector.
    pub shift: f64,
}

pub fn model_factorization(model: &ModelSpec) -> Result<Factorization> {
    model.validate()?;
    let n = model.n_particles as f64;
    let (spec, coefficient, shift) = match model.kind {
        ModelKind::Oscillatory { omega } => (FactorSpec::oscillator(omega), 0.5, -0.5 * omega * n),
        ModelKind::GeneralizedOscillatory { omega_bar } => (
            FactorSpec::from_kernel(KernelSpec::LinearOmega { omega_bar }),
            0.5,
            -0.5 * omega_bar * n * (n - 1.0),
        ),
        ModelKind::Cms { beta, length } => (
            FactorSpec::from_kernel(KernelSpec::Cotangent { beta, length }),
            1.0,
            -cms_ground_energy(model.n_particles, beta, length),
        ),
        ModelKind::DeltaGas { beta } => (
            FactorSpec::from_kernel(KernelSpec::heaviside_on(&model.grid, beta)),
            1.0,
            beta * beta * n.powi(3) / 3.0,
        ),
        ModelKind::Coulomb { alpha, epsilon } => (
            FactorSpec::from_kernel(KernelSpec::CoulombS { alpha, epsilon }),
            1.0,
            alpha * alpha / (3.0 * epsilon * epsilon) * n * (n * n - 1.0),
        ),
    };
    Ok(Factorization { spec, coefficient, shift })
}

/// E_N = (pi beta / l)^2 N (N^2 - 1) / 3.
pub fn cms_ground_energy(n_particles: usize, beta: f64, length: f64) -> f64 {
    let n = n_particles as f64;
    (PI * beta / length).powi(2) * n * (n * n - 1.0) / 3.0
}

/// (pi beta / l)^2 (:N^3:/3 + :N^2:) with :N^k: = N (N-1) ... (N-k+1) on the sector.
pub fn cms_e_operator(sector: &FockSector, beta: f64, length: f64) -> SparseOperator {
    let n = sector.particle_count() as f64;
    let n2 = n * (n - 1.0);
    let n3 = n2 * (n - 2.0);
    let e = (PI * beta / length).powi(2) * (n3 / 3.0 + n2);
    SparseOperator::scaled_identity(sector.dim(), C64::new(e, 0.0))
}

/// beta^2 sum_{j=1..N} (j-1)^2, the value of the squared Heaviside sum for ordered points.
pub fn delta_gas_ordered_constant(n_particles: usize, beta: f64) -> f64 {
    let n = n_particles as f64;
    beta * beta * (n - 1.0) * n * (2.0 * n - 1.0) / 6.0
}

type Probe = Box<dyn Fn(&[f64]) -> C64>;

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// Smooth symmetric test states for the weak-norm comparison of a model.
pub fn equivalence_probes(model: &ModelSpec, sector: &FockSector) -> ProbeSet {
    let l = model.grid.length();
    let functions: Vec<Probe> = match model.kind {
        ModelKind::Cms { .. } => {
            let k = 2.0 * PI / l;
            let jastrow = move |xs: &[f64]| pair_product(xs, |a, b| (PI * (a - b) / l).sin().powi(2));
            vec![
                Box::new(move |xs: &[f64]| real(jastrow(xs))),
                Box::new(move |xs: &[f64]| real(jastrow(xs) * (k * xs.iter().sum::<f64>()).cos())),
                Box::new(move |xs: &[f64]| real(jastrow(xs) * pair_product(xs, |a, b| (k * (a - b)).cos().powi(2)))),
                Box::new(move |xs: &[f64]| real(jastrow(xs) * xs.iter().map(|x| (k * x).sin()).sum::<f64>())),
            ]
        }
        ModelKind::Coulomb { .. } => localized_probes(l, true),
        _ => localized_probes(l, false),
    };
    ProbeSet::from_functions(sector, &functions)
}

fn pair_product(xs: &[f64], f: impl Fn(f64, f64) -> f64) -> f64 {
    let mut p = 1.0;
    for j in 0..xs.len() {
        for k in j + 1..xs.len() {
            p *= f(xs[j], xs[k]);
        }
    }
    p
}

/// Gaussians centred at l/2 with width l/10, times low symmetric polynomials,
/// optionally vanishing quadratically at contact.
fn localized_probes(l: f64, contact: bool) -> Vec<Probe> {
    let c = 0.5 * l;
    let s = 0.1 * l;
    let envelope = move |xs: &[f64]| {
        let g: f64 = xs.iter().map(|x| (-0.5 * ((x - c) / s).powi(2)).exp()).product();
        if contact {
            g * pair_product(xs, |a, b| (a - b).powi(2))
        } else {
            g
        }
    };
    let polys: Vec<fn(&[f64], f64) -> f64> = vec![
        |_, _| 1.0,
        |xs, c| xs.iter().map(|x| x - c).sum(),
        |xs, c| pair_product(xs, |a, b| (a - c) * (b - c)),
        |xs, c| xs.iter().map(|x| (x - c).powi(2)).sum(),
    ];
    polys
        .into_iter()
        .map(|p| Box::new(move |xs: &[f64]| real(envelope(xs) * p(xs, c))) as Probe)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use fock_lattice::kinetic_matrix;

    fn spec(kind: ModelKind, n: usize, l: f64, np: usize) -> ModelSpec {
        ModelSpec::new(kind, LatticeGrid::with_length(n, l).unwrap(), np).unwrap()
    }

    #[test]
    fn free_delta_gas_is_twice_kinetic() {
        let m = spec(ModelKind::DeltaGas { beta: 0.0 }, 7, 3.0, 2);
        let h = model_hamiltonian(&m).unwrap();
        let k = kinetic_matrix(&m.sector().unwrap()).unwrap().scale_real(2.0);
        assert!((&h - &k).max_abs() <= 1e-12 * k.max_abs());
    }

    #[test]
    fn coulomb_particle_cap() {
        let g = LatticeGrid::with_length(6, 1.0).unwrap();
        let r = ModelSpec::new(ModelKind::Coulomb { alpha: 1.0, epsilon: 0.1 }, g, 4);
        assert!(matches!(r, Err(FactorError::Capacity { .. })));
    }

    #[test]
    fn cms_length_must_match_grid() {
        let g = LatticeGrid::with_length(6, 1.0).unwrap();
        assert!(ModelSpec::new(ModelKind::Cms { beta: 1.0, length: 2.0 }, g, 2).is_err());
    }

    #[test]
    fn cms_interaction_is_positive_for_repulsive_beta() {
        let m = spec(ModelKind::Cms { beta: 2.0, length: PI }, 8, PI, 2);
        let s = m.sector().unwrap();
        for (v, occ) in model_potential(&m, &s).iter().zip(s.basis()) {
            if occ.iter().all(|&k| k < 2) {
                assert!(*v > 0.0);
            }
        }
    }

    #[test]
    fn e_operator_value() {
        let s = build_sector(LatticeGrid::with_length(6, PI).unwrap(), 2).unwrap();
        let e = cms_e_operator(&s, 1.0, PI);
        assert!((e.get(0, 0).re - 2.0).abs() < 1e-12);
        assert!((cms_ground_energy(2, 1.0, PI) - 2.0).abs() < 1e-12);
        let s3 = build_sector(LatticeGrid::with_length(6, 1.0).unwrap(), 3).unwrap();
        assert!((cms_e_operator(&s3, 0.7, 1.0).get(0, 0).re - cms_ground_energy(3, 0.7, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn ternary_weight_limits() {
        assert_eq!(coulomb_ternary_weight(0.0, 0.0, 0.0), 0.0);
        let w = coulomb_ternary_weight(0.5, 0.5, 0.0);
        assert!((w - 0.5f64.ln().powi(2)).abs() < 1e-14);
        let (a, b) = (0.3f64, 0.3 + 1e-7);
        let near = coulomb_ternary_weight(a, b, a - b);
        assert!((near - a.abs().ln().powi(2)).abs() < 1e-4);
    }

    #[test]
    fn pair_diagonal_counts_distinct_pairs() {
        let s = build_sector(LatticeGrid::new(3, 1.0).unwrap(), 3).unwrap();
        let d = pair_potential_diagonal(&s, |_, _| 1.0);
        assert!(d.iter().all(|&v| v == 6.0));
        let t = triple_potential_diagonal(&s, |_, _, _| 1.0);
        assert!(t.iter().all(|&v| v == 6.0));
    }
}
