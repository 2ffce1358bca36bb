//! Brute-force reference implementations.
//!
//! Nothing here uses conserved-excitation sectors or the X-state structure:
//! the Hamiltonian is assembled from Kronecker products on a Fock space
//! truncated at `n_max` photons per mode, diagonalized with nalgebra, and the
//! cavities are traced out index by index. Discord is found by a dense grid
//! over measurement bases and concurrence by the spin-flip construction.
//! These are slow and exist to cross-check the main path.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, SymmetricEigen, SVD};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use thiserror::Error;

use crate::correlations::CorrelationPoint;
use crate::dynamics::{BellFamily, Scenario, Topology};
use crate::linalg::ComplexMatrix;

pub const DEFAULT_N_MAX: usize = 4;

/// Population allowed in the highest retained Fock level.
pub const LEAKAGE_TOL: f64 = 1e-12;

pub const GRID_THETA: usize = 1024;
pub const GRID_PHI: usize = 512;

/// Tolerance for accepting a matrix as a density matrix.
pub const DENSITY_TOL: f64 = 1e-10;

/// Eigenvalues of ρ below this are treated as zero when forming `√ρ`.
const SQRT_CUTOFF: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("population {leakage:e} reached the Fock cutoff n_max = {n_max}; raise n_max")]
    Leakage { leakage: f64, n_max: usize },
    #[error("n_max must be at least 1")]
    CutoffTooSmall,
    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),
}

type CMat = DMatrix<C64>;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

fn kron_all(factors: &[&CMat]) -> CMat {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| kron(&acc, f))
}

fn sigma_plus() -> CMat {
    // |↑⟩⟨↓| with ↓ = 0, ↑ = 1
    let mut m = CMat::zeros(2, 2);
    m[(1, 0)] = c(1.0);
    m
}

fn sigma_z() -> CMat {
    CMat::from_diagonal(&DVector::from_vec(vec![c(-1.0), c(1.0)]))
}

fn annihilation(levels: usize) -> CMat {
    let mut m = CMat::zeros(levels, levels);
    for n in 1..levels {
        m[(n - 1, n)] = c((n as f64).sqrt());
    }
    m
}

/// Full tensor-product space `A ⊗ B ⊗ modes`, each mode truncated at `n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedHilbert {
    pub topology: Topology,
    pub n_max: usize,
}

impl TruncatedHilbert {
    pub fn new(topology: Topology, n_max: usize) -> Result<Self, OracleError> {
        if n_max < 1 {
            return Err(OracleError::CutoffTooSmall);
        }
        Ok(Self { topology, n_max })
    }

    pub fn fock_levels(&self) -> usize {
        self.n_max + 1
    }

    /// Dimension of the cavity part.
    pub fn field_dim(&self) -> usize {
        self.fock_levels().pow(self.topology.modes() as u32)
    }

    pub fn dim(&self) -> usize {
        4 * self.field_dim()
    }

    /// Photon numbers of field index `f`.
    fn occupations(&self, f: usize) -> Vec<usize> {
        let levels = self.fock_levels();
        match self.topology {
            Topology::CommonCavity => vec![f],
            Topology::IndependentCavities => vec![f / levels, f % levels],
        }
    }

    /// `H` on the whole truncated space.
    pub fn hamiltonian(&self, scenario: &Scenario) -> CMat {
        let p = &scenario.params;
        let q = CMat::identity(2, 2);
        let f = CMat::identity(self.fock_levels(), self.fock_levels());
        let a = annihilation(self.fock_levels());
        let ad = a.adjoint();
        let n = &ad * &a;
        let sp = sigma_plus();
        let sm = sp.adjoint();
        let sz = sigma_z();
        let g = c(p.g());

        match self.topology {
            Topology::IndependentCavities => {
                let atoms = kron_all(&[&sz, &q, &f, &f]) + kron_all(&[&q, &sz, &f, &f]);
                let field = kron_all(&[&q, &q, &n, &f]) + kron_all(&[&q, &q, &f, &n]);
                let couple_a = kron_all(&[&sm, &q, &ad, &f]) + kron_all(&[&sp, &q, &a, &f]);
                let couple_b = kron_all(&[&q, &sm, &f, &ad]) + kron_all(&[&q, &sp, &f, &a]);
                atoms * c(0.5 * p.delta_atom()) + field * c(p.omega()) + (couple_a + couple_b) * g
            }
            Topology::CommonCavity => {
                let atoms = kron_all(&[&sz, &q, &f]) + kron_all(&[&q, &sz, &f]);
                let field = kron_all(&[&q, &q, &n]) + kron_all(&[&q, &q, &f]) * c(0.5);
                let couple = kron_all(&[&sp, &q, &a])
                    + kron_all(&[&sm, &q, &ad])
                    + kron_all(&[&q, &sp, &a])
                    + kron_all(&[&q, &sm, &ad]);
                atoms * c(0.5 * p.delta_atom()) + field * c(p.omega()) + couple * g
            }
        }
    }

    /// Initial Bell state times the cavity vacuum.
    pub fn initial_state(&self, scenario: &Scenario) -> DVector<C64> {
        let (s, co) = scenario.alpha.sin_cos();
        let fd = self.field_dim();
        let mut psi = DVector::zeros(self.dim());
        // qubit index 2a + b, vacuum is field index 0
        match scenario.bell {
            BellFamily::AntiCorrelated => {
                psi[2 * fd] = c(co); // |↑↓⟩
                psi[fd] = c(s); // |↓↑⟩
            }
            BellFamily::Correlated => {
                psi[3 * fd] = c(co); // |↑↑⟩
                psi[0] = c(s); // |↓↓⟩
            }
        }
        psi
    }

    /// Population with any mode at the cutoff.
    pub fn leakage(&self, psi: &DVector<C64>) -> f64 {
        let fd = self.field_dim();
        (0..self.dim())
            .filter(|&i| self.occupations(i % fd).contains(&self.n_max))
            .map(|i| psi[i].norm_sqr())
            .sum()
    }

    /// `Tr_cavities |ψ⟩⟨ψ|`.
    pub fn trace_out_field(&self, psi: &DVector<C64>) -> ComplexMatrix {
        let fd = self.field_dim();
        ComplexMatrix::from_fn(4, |i, j| {
            (0..fd)
                .map(|f| psi[i * fd + f] * psi[j * fd + f].conj())
                .sum()
        })
    }
}

/// A scenario diagonalized on the truncated space.
#[derive(Debug, Clone)]
pub struct OracleSystem {
    hilbert: TruncatedHilbert,
    energies: Vec<f64>,
    vectors: CMat,
    initial_overlaps: DVector<C64>,
}

impl OracleSystem {
    pub fn new(scenario: &Scenario, n_max: usize) -> Result<Self, OracleError> {
        let hilbert = TruncatedHilbert::new(scenario.topology, n_max)?;
        let h = hilbert.hamiltonian(scenario);
        let eigen = SymmetricEigen::new(h);
        let psi0 = hilbert.initial_state(scenario);
        let initial_overlaps = eigen.eigenvectors.adjoint() * psi0;
        Ok(Self {
            hilbert,
            energies: eigen.eigenvalues.iter().copied().collect(),
            vectors: eigen.eigenvectors,
            initial_overlaps,
        })
    }

    pub fn hilbert(&self) -> &TruncatedHilbert {
        &self.hilbert
    }

    pub fn state(&self, t: f64) -> DVector<C64> {
        let phased = DVector::from_iterator(
            self.energies.len(),
            self.energies
                .iter()
                .zip(self.initial_overlaps.iter())
                .map(|(&e, &o)| o * C64::from_polar(1.0, -e * t)),
        );
        &self.vectors * phased
    }

    /// Reduced two-qubit density matrix at time `t`.
    pub fn density_matrix(&self, t: f64) -> Result<ComplexMatrix, OracleError> {
        let psi = self.state(t);
        let leakage = self.hilbert.leakage(&psi);
        if leakage > LEAKAGE_TOL {
            return Err(OracleError::Leakage {
                leakage,
                n_max: self.hilbert.n_max,
            });
        }
        Ok(self.hilbert.trace_out_field(&psi))
    }
}

/// Reduced two-qubit density matrix from full-space evolution with the
/// default cutoff.
pub fn oracle_evolve(scenario: &Scenario, t: f64) -> Result<ComplexMatrix, OracleError> {
    OracleSystem::new(scenario, DEFAULT_N_MAX)?.density_matrix(t)
}

fn to_matrix4(rho: &ComplexMatrix) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| rho[(i, j)])
}

fn hermitian_eigenvalues4(m: &Matrix4<C64>) -> Vec<f64> {
    SymmetricEigen::new(*m)
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

fn entropy_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .filter(|&p| p > 1e-15)
        .map(|p| -p * p.log2())
        .sum()
}

fn check_density(rho: &ComplexMatrix) -> Result<Matrix4<C64>, OracleError> {
    if rho.dim() != 4 {
        return Err(OracleError::InvalidDensity(format!(
            "dimension {}",
            rho.dim()
        )));
    }
    let dev = rho.hermitian_deviation();
    if dev > DENSITY_TOL {
        return Err(OracleError::InvalidDensity(format!(
            "not Hermitian ({dev:e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(OracleError::InvalidDensity(format!("trace {tr}")));
    }
    let m = to_matrix4(rho);
    let min = hermitian_eigenvalues4(&m)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if min < -DENSITY_TOL {
        return Err(OracleError::InvalidDensity(format!(
            "negative eigenvalue {min:e}"
        )));
    }
    Ok(m)
}

/// Reduced states of qubit A and qubit B.
fn marginals(m: &Matrix4<C64>) -> (Matrix2<C64>, Matrix2<C64>) {
    let rho_a = Matrix2::from_fn(|a, a2| (0..2).map(|b| m[(2 * a + b, 2 * a2 + b)]).sum());
    let rho_b = Matrix2::from_fn(|b, b2| (0..2).map(|a| m[(2 * a + b, 2 * a + b2)]).sum());
    (rho_a, rho_b)
}

fn eigenvalues2(m: &Matrix2<C64>) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + m[(1, 0)].norm_sqr()).sqrt();
    [mean + r, mean - r]
}

/// Conditional entropy of A after measuring B in the `(θ, φ)` basis, for an
/// arbitrary two-qubit state.
pub fn oracle_conditional_entropy(m: &Matrix4<C64>, theta: f64, phi: f64) -> f64 {
    let (s, co) = theta.sin_cos();
    let e = C64::from_polar(1.0, phi);
    let bases = [[c(co), e * s], [e.conj() * s, c(-co)]];
    let mut total = 0.0;
    for v in &bases {
        let sigma = Matrix2::from_fn(|a, a2| {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..2 {
                for b2 in 0..2 {
                    acc += v[b].conj() * m[(2 * a + b, 2 * a2 + b2)] * v[b2];
                }
            }
            acc
        });
        let p = sigma[(0, 0)].re + sigma[(1, 1)].re;
        if p <= 1e-15 {
            continue;
        }
        // p·S(σ/p) = -Σ λ log(λ/p)
        total += eigenvalues2(&sigma)
            .into_iter()
            .filter(|&l| l > 1e-15)
            .map(|l| -l * (l / p).log2())
            .sum::<f64>();
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleDiscord {
    pub discord: f64,
    pub classical: f64,
    pub conditional_min: f64,
    pub theta: f64,
    pub phi: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
}

/// Discord by exhaustive evaluation on a `GRID_THETA × GRID_PHI` grid with
/// θ ∈ [0, π/2] (endpoints included) and φ ∈ [0, 2π).
///
/// The grid minimum bounds the true conditional-entropy minimum from above,
/// so the result can overestimate discord by the grid resolution.
pub fn oracle_discord(rho: &ComplexMatrix) -> Result<OracleDiscord, OracleError> {
    oracle_discord_with_grid(rho, GRID_THETA, GRID_PHI)
}

pub fn oracle_discord_with_grid(
    rho: &ComplexMatrix,
    n_theta: usize,
    n_phi: usize,
) -> Result<OracleDiscord, OracleError> {
    let m = check_density(rho)?;
    let s_ab = entropy_of(hermitian_eigenvalues4(&m));
    let (rho_a, rho_b) = marginals(&m);
    let s_a = entropy_of(eigenvalues2(&rho_a));
    let s_b = entropy_of(eigenvalues2(&rho_b));

    let d_theta = FRAC_PI_2 / (n_theta - 1) as f64;
    let d_phi = TAU / n_phi as f64;
    let (entropy, i, j) = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * d_theta;
            (0..n_phi)
                .map(|j| {
                    (
                        oracle_conditional_entropy(&m, theta, j as f64 * d_phi),
                        i,
                        j,
                    )
                })
                .fold((f64::INFINITY, 0, 0), |a, b| if b.0 < a.0 { b } else { a })
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }
            },
        );

    Ok(OracleDiscord {
        discord: s_b - s_ab + entropy,
        classical: s_a - entropy,
        conditional_min: entropy,
        theta: i as f64 * d_theta,
        phi: j as f64 * d_phi,
        s_a,
        s_b,
        s_ab,
    })
}

fn sqrt_psd(m: &Matrix4<C64>) -> Matrix4<C64> {
    let eig = SymmetricEigen::new(*m);
    let v = eig.eigenvectors;
    let d = Matrix4::from_diagonal(&eig.eigenvalues.map(|l| {
        if l > SQRT_CUTOFF {
            c(l.sqrt())
        } else {
            c(0.0)
        }
    }));
    v * d * v.adjoint()
}

/// Wootters concurrence `max{0, λ₁ - λ₂ - λ₃ - λ₄}`, with `λᵢ` the decreasing
/// square roots of the eigenvalues of `ρ (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`.
///
/// The `λᵢ` are computed as the singular values of `√ρ √ρ̃`.
pub fn oracle_concurrence(rho: &ComplexMatrix) -> Result<f64, OracleError> {
    let m = check_density(rho)?;
    let sy = nalgebra::Matrix2::new(c(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c(0.0));
    let yy = sy.kronecker(&sy);
    let root = sqrt_psd(&m);
    let root_flipped = yy * root.map(|z| z.conj()) * yy;
    let svd = SVD::new(root * root_flipped, false, false);
    let mut lambdas: Vec<f64> = svd.singular_values.iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// One sweep row computed entirely by the oracle.
pub fn oracle_correlation_point(
    t: f64,
    rho: &ComplexMatrix,
) -> Result<CorrelationPoint, OracleError> {
    let d = oracle_discord(rho)?;
    Ok(CorrelationPoint {
        t,
        discord: d.discord,
        classical: d.classical,
        concurrence: oracle_concurrence(rho)?,
        s_a: d.s_a,
        s_b: d.s_b,
        s_ab: d.s_ab,
        theta_min: d.theta,
        phi_min: d.phi,
        purity: rho.purity(),
    })
}
