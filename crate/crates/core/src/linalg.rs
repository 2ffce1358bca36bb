//! Small dense complex linear algebra.
//!
//! Everything here works on matrices of dimension at most a few dozen: the
//! Hermitian eigensolver is a cyclic complex Jacobi iteration, unitary
//! evolution is done spectrally, and the partial trace removes the cavity
//! degrees of freedom from a labelled state vector.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Largest matrix accepted by [`hermitian_eigendecomposition`].
pub const MAX_EIGEN_DIM: usize = 16;

/// Tolerance on `max|M - M†|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerance on `|Σ|ψᵢ|² - 1|` for a state to count as normalized.
pub const NORM_TOL: f64 = 1e-10;

/// Eigenvalues of a density matrix above `-EIGEN_CLAMP` are snapped to zero
/// when negative.
pub const EIGEN_CLAMP: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: max |M - M^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix dimension {dim} exceeds the eigensolver limit of {max}")]
    TooLarge { dim: usize, max: usize },
    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("basis labels are inconsistent: {0}")]
    BadLabels(String),
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from nested rows. Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == dim),
            "rows must form a square matrix"
        );
        Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if other.dim != self.dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>, LinalgError> {
        if v.len() != self.dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    /// `max |M - M†|` over all entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `tr(M²)`, the purity when `M` is a density matrix.
    pub fn purity(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] * self[(j, i)]).re;
            }
        }
        acc
    }

    fn off_diagonal_norm_sqr(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Two-level atom state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Down,
    Up,
}

impl Level {
    pub fn index(self) -> usize {
        match self {
            Level::Down => 0,
            Level::Up => 1,
        }
    }

    pub fn excitation(self) -> u32 {
        self.index() as u32
    }

    pub fn symbol(self) -> char {
        match self {
            Level::Down => '↓',
            Level::Up => '↑',
        }
    }
}

/// A product basis ket `|a b; n₁ n₂ …⟩`: qubit A level, qubit B level and the
/// photon occupation of each cavity mode (one entry for a common cavity, two
/// for independent cavities).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub a: Level,
    pub b: Level,
    pub photons: Vec<u32>,
}

impl BasisLabel {
    pub fn new(a: Level, b: Level, photons: &[u32]) -> Self {
        Self {
            a,
            b,
            photons: photons.to_vec(),
        }
    }

    /// Index of the qubit pair in `{|↓↓⟩, |↓↑⟩, |↑↓⟩, |↑↑⟩}`.
    pub fn qubit_index(&self) -> usize {
        2 * self.a.index() + self.b.index()
    }

    pub fn excitations(&self) -> u32 {
        self.a.excitation() + self.b.excitation() + self.photons.iter().sum::<u32>()
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}{}", self.a.symbol(), self.b.symbol())?;
        for n in &self.photons {
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Amplitudes over an explicitly labelled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    labels: Vec<BasisLabel>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, labels: Vec<BasisLabel>) -> Result<Self, LinalgError> {
        if amplitudes.len() != labels.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: labels.len(),
                found: amplitudes.len(),
            });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { amplitudes, labels })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn amplitude_of(&self, label: &BasisLabel) -> Option<C64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.amplitudes[i])
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    let n = m.dim();
    if n > MAX_EIGEN_DIM {
        return Err(LinalgError::TooLarge {
            dim: n,
            max: MAX_EIGEN_DIM,
        });
    }
    if m.data
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(LinalgError::NonFinite);
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(LinalgError::NotHermitian { deviation });
    }

    // symmetrize so the rotations act on an exactly Hermitian matrix
    let mut a = ComplexMatrix::from_fn(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut v = ComplexMatrix::identity(n);

    let scale: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let threshold = (8.0 * f64::EPSILON).powi(2) * scale.max(f64::MIN_POSITIVE);

    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm_sqr() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off = a.off_diagonal_norm_sqr();
        if off > threshold {
            return Err(LinalgError::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_norm: off.sqrt(),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi step annihilating `a[p][q]`.
///
/// The rotation is `J = D·R` where `D` removes the phase of `a[p][q]` and `R`
/// is the real symmetric Jacobi rotation; `a ← J† a J`, `v ← v J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = -s * phase.conj();
    let j_qq = c * phase.conj();

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Precomputed eigensystem of a time-independent Hamiltonian, for evaluating
/// `e^{-iHt}ψ₀` at many times.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    eigen: HermitianEigen,
}

impl SpectralPropagator {
    pub fn new(h: &ComplexMatrix) -> Result<Self, LinalgError> {
        Ok(Self {
            eigen: hermitian_eigendecomposition(h)?,
        })
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    pub fn dim(&self) -> usize {
        self.eigen.values.len()
    }

    /// `Σᵢ e^{-iλᵢt} ⟨vᵢ|ψ₀⟩ vᵢ` on bare amplitudes.
    pub fn apply(&self, psi0: &[C64], t: f64) -> Result<Vec<C64>, LinalgError> {
        let n = self.dim();
        if psi0.len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: psi0.len(),
            });
        }
        let vecs = &self.eigen.vectors;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (k, &lambda) in self.eigen.values.iter().enumerate() {
            let overlap: C64 = (0..n).map(|i| vecs[(i, k)].conj() * psi0[i]).sum();
            let coeff = overlap * C64::from_polar(1.0, -lambda * t);
            for (i, o) in out.iter_mut().enumerate() {
                *o += coeff * vecs[(i, k)];
            }
        }
        Ok(out)
    }

    pub fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector, LinalgError> {
        let amps = self.apply(psi0.amplitudes(), t)?;
        StateVector::new(amps, psi0.labels().to_vec())
    }
}

/// `e^{-iHt}|ψ₀⟩` by spectral decomposition of `H`.
pub fn evolve_spectral(
    h: &ComplexMatrix,
    psi0: &StateVector,
    t: f64,
) -> Result<StateVector, LinalgError> {
    if h.dim() != psi0.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    check_normalized(psi0)?;
    SpectralPropagator::new(h)?.evolve(psi0, t)
}

fn check_normalized(psi: &StateVector) -> Result<(), LinalgError> {
    let norm_sqr = psi.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(LinalgError::NotNormalized { norm_sqr });
    }
    Ok(())
}

/// Traces out every cavity mode, returning the two-qubit density matrix in the
/// basis `{|↓↓⟩, |↓↑⟩, |↑↓⟩, |↑↑⟩}`.
///
/// Two amplitudes contribute a coherence only when their photon occupations
/// coincide.
pub fn partial_trace_cavities(psi: &StateVector) -> Result<ComplexMatrix, LinalgError> {
    check_normalized(psi)?;
    let labels = psi.labels();
    if let Some(first) = labels.first() {
        let modes = first.photons.len();
        if labels.iter().any(|l| l.photons.len() != modes) {
            return Err(LinalgError::BadLabels(
                "labels disagree on the number of cavity modes".into(),
            ));
        }
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(LinalgError::BadLabels(format!("duplicate basis ket {l}")));
        }
    }

    let amps = psi.amplitudes();
    let mut rho = ComplexMatrix::zeros(4);
    for (i, li) in labels.iter().enumerate() {
        for (j, lj) in labels.iter().enumerate() {
            if li.photons == lj.photons {
                rho[(li.qubit_index(), lj.qubit_index())] += amps[i] * amps[j].conj();
            }
        }
    }
    Ok(rho)
}
