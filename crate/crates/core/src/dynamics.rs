//! Hamiltonians, conserved-excitation sectors and time-dependent amplitudes
//! for two qubits in two independent cavities (double Jaynes–Cummings) or in
//! one common cavity (two-atom Dicke model).
//!
//! Amplitudes are produced either from the exact closed forms or by spectral
//! evolution inside the relevant excitation sector. The closed forms for the
//! common cavity only exist at resonance.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg::{
    BasisLabel, ComplexMatrix, Level, LinalgError, SpectralPropagator, StateVector, NORM_TOL,
};

use Level::{Down, Up};

/// Detunings with `|δ| <= RESONANCE_TOL` count as resonant.
pub const RESONANCE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("alpha = {0} is outside the open interval (0, pi/2)")]
    AlphaOutOfRange(f64),
    #[error("negative or non-finite time t = {0}")]
    InvalidTime(f64),
    #[error("closed form for the common cavity requires resonance, got detuning {0}; use the numeric engine")]
    NotResonant(f64),
    #[error("basis ket {0} does not belong to the {1} topology")]
    ForeignLabel(String, Topology),
    #[error("sector is not invariant under H: {from} couples to {to} outside the basis")]
    SectorNotClosed { from: String, to: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    IndependentCavities,
    CommonCavity,
}

impl Topology {
    pub fn modes(self) -> usize {
        match self {
            Topology::IndependentCavities => 2,
            Topology::CommonCavity => 1,
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::IndependentCavities => "independent",
            Topology::CommonCavity => "common",
        })
    }
}

impl std::str::FromStr for Topology {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "independent" => Ok(Topology::IndependentCavities),
            "common" => Ok(Topology::CommonCavity),
            other => Err(format!(
                "unknown topology '{other}' (expected independent or common)"
            )),
        }
    }
}

/// Initial atomic Bell state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellFamily {
    /// `sin α|↓↑⟩ + cos α|↑↓⟩`
    AntiCorrelated,
    /// `sin α|↓↓⟩ + cos α|↑↑⟩`
    Correlated,
}

impl fmt::Display for BellFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellFamily::AntiCorrelated => "anti",
            BellFamily::Correlated => "corr",
        })
    }
}

impl std::str::FromStr for BellFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "anti" => Ok(BellFamily::AntiCorrelated),
            "corr" => Ok(BellFamily::Correlated),
            other => Err(format!(
                "unknown Bell family '{other}' (expected anti or corr)"
            )),
        }
    }
}

/// Atom frequency `Δ`, cavity frequency `ω`, coupling `g`, and the derived
/// detuning `δ = Δ - ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    delta_atom: f64,
    omega: f64,
    g: f64,
    detuning: f64,
}

impl ModelParams {
    pub fn new(delta_atom: f64, omega: f64, g: f64) -> Result<Self, DynamicsError> {
        Self::checked(delta_atom, omega, g, delta_atom - omega)
    }

    /// Parameters specified by the detuning instead of the atom frequency.
    pub fn with_detuning(omega: f64, g: f64, detuning: f64) -> Result<Self, DynamicsError> {
        Self::checked(omega + detuning, omega, g, detuning)
    }

    pub fn resonant(omega: f64, g: f64) -> Result<Self, DynamicsError> {
        Self::with_detuning(omega, g, 0.0)
    }

    fn checked(delta_atom: f64, omega: f64, g: f64, detuning: f64) -> Result<Self, DynamicsError> {
        if !(delta_atom.is_finite() && omega.is_finite() && g.is_finite()) {
            return Err(DynamicsError::InvalidParams("non-finite frequency".into()));
        }
        if g <= 0.0 {
            return Err(DynamicsError::InvalidParams(format!(
                "coupling g = {g} must be positive"
            )));
        }
        Ok(Self {
            delta_atom,
            omega,
            g,
            detuning,
        })
    }

    pub fn delta_atom(&self) -> f64 {
        self.delta_atom
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// `δ = Δ - ω`.
    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    /// `G = 2g`.
    pub fn big_g(&self) -> f64 {
        2.0 * self.g
    }

    pub fn is_resonant(&self) -> bool {
        self.detuning.abs() <= RESONANCE_TOL
    }
}

/// One run of the model: cavity topology, initial Bell family, mixing angle
/// and physical parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub topology: Topology,
    pub bell: BellFamily,
    pub alpha: f64,
    pub params: ModelParams,
}

impl Scenario {
    pub fn new(
        topology: Topology,
        bell: BellFamily,
        alpha: f64,
        params: ModelParams,
    ) -> Result<Self, DynamicsError> {
        if !(alpha > 0.0 && alpha < FRAC_PI_2) {
            return Err(DynamicsError::AlphaOutOfRange(alpha));
        }
        Ok(Self {
            topology,
            bell,
            alpha,
            params,
        })
    }

    pub fn basis(&self) -> Vec<BasisLabel> {
        amplitude_basis(self.topology, self.bell)
    }
}

/// Eigenfrequencies `λ±` and mixing weights `A`, `B`, `C` of a single
/// resonator-atom pair in its one-excitation sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcEigenData {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn jc_eigendata(params: &ModelParams) -> JcEigenData {
    let d = params.detuning();
    let big_g = params.big_g();
    let r = d.hypot(big_g);
    // R ± δ without cancellation: (R + |δ|)(R - |δ|) = G²
    let (r_plus_d, r_minus_d) = if d >= 0.0 {
        (r + d, big_g * big_g / (r + d))
    } else {
        (big_g * big_g / (r - d), r - d)
    };
    let centre = params.omega() + 0.5 * d;
    JcEigenData {
        lambda_plus: centre + 0.5 * r,
        lambda_minus: centre - 0.5 * r,
        a: r_plus_d / (2.0 * r),
        b: r_minus_d / (2.0 * r),
        c: big_g / (2.0 * r),
    }
}

/// Time-dependent wavefunction coefficients `x₁ … xₙ` in the fixed basis of a
/// (topology, Bell family) pair; see [`amplitude_basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct Amplitudes {
    pub topology: Topology,
    pub bell: BellFamily,
    pub values: Vec<C64>,
}

impl Amplitudes {
    pub fn labels(&self) -> Vec<BasisLabel> {
        amplitude_basis(self.topology, self.bell)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `xᵢ` with the one-based index used for the coefficients.
    pub fn x(&self, i: usize) -> C64 {
        self.values[i - 1]
    }

    pub fn to_state(&self) -> Result<StateVector, LinalgError> {
        StateVector::new(self.values.clone(), self.labels())
    }
}

/// Basis kets carrying the amplitudes of each scenario, in coefficient order.
///
/// | topology    | Bell  | kets                                      |
/// |-------------|-------|-------------------------------------------|
/// | independent | anti  | ↑↓00, ↓↑00, ↓↓10, ↓↓01                    |
/// | independent | corr  | ↑↑00, ↓↓11, ↑↓01, ↓↑10, ↓↓00              |
/// | common      | anti  | ↑↓0, ↓↑0, ↓↓1                             |
/// | common      | corr  | ↑↑0, ↓↓2, ↑↓1, ↓↑1, ↓↓0                   |
pub fn amplitude_basis(topology: Topology, bell: BellFamily) -> Vec<BasisLabel> {
    let l = BasisLabel::new;
    match (topology, bell) {
        (Topology::IndependentCavities, BellFamily::AntiCorrelated) => vec![
            l(Up, Down, &[0, 0]),
            l(Down, Up, &[0, 0]),
            l(Down, Down, &[1, 0]),
            l(Down, Down, &[0, 1]),
        ],
        (Topology::IndependentCavities, BellFamily::Correlated) => vec![
            l(Up, Up, &[0, 0]),
            l(Down, Down, &[1, 1]),
            l(Up, Down, &[0, 1]),
            l(Down, Up, &[1, 0]),
            l(Down, Down, &[0, 0]),
        ],
        (Topology::CommonCavity, BellFamily::AntiCorrelated) => {
            vec![l(Up, Down, &[0]), l(Down, Up, &[0]), l(Down, Down, &[1])]
        }
        (Topology::CommonCavity, BellFamily::Correlated) => vec![
            l(Up, Up, &[0]),
            l(Down, Down, &[2]),
            l(Up, Down, &[1]),
            l(Down, Up, &[1]),
            l(Down, Down, &[0]),
        ],
    }
}

/// Conserved-excitation sectors reachable from the Bell initial states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// Everything the initial state feeds except the decoupled ground ket.
    Excited(Topology, BellFamily),
    /// `|↓↓, vacuum⟩`, one-dimensional.
    Ground(Topology),
}

impl Sector {
    pub fn topology(self) -> Topology {
        match self {
            Sector::Excited(t, _) | Sector::Ground(t) => t,
        }
    }

    pub fn basis(self) -> Vec<BasisLabel> {
        match self {
            Sector::Excited(topology, bell) => {
                let mut kets = amplitude_basis(topology, bell);
                if bell == BellFamily::Correlated {
                    kets.pop();
                }
                kets
            }
            Sector::Ground(topology) => {
                vec![BasisLabel::new(Down, Down, &vec![0; topology.modes()])]
            }
        }
    }
}

fn sigma_z(level: Level) -> f64 {
    match level {
        Up => 1.0,
        Down => -1.0,
    }
}

fn flip(level: Level) -> Level {
    match level {
        Up => Down,
        Down => Up,
    }
}

/// `H|label⟩` as a list of (ket, coefficient).
///
/// Independent cavities:
/// `Δ/2 (σᶻ_A + σᶻ_B) + ω(a†a + b†b) + g(a†σ⁻_A + σ⁺_A a) + g(b†σ⁻_B + σ⁺_B b)`.
///
/// Common cavity: `Δ/2 (σᶻ_A + σᶻ_B) + ω(a†a + 1/2) + g Σₖ (a σ⁺ₖ + σ⁻ₖ a†)`.
pub fn apply_hamiltonian(
    topology: Topology,
    params: &ModelParams,
    label: &BasisLabel,
) -> Result<Vec<(BasisLabel, f64)>, DynamicsError> {
    if label.photons.len() != topology.modes() {
        return Err(DynamicsError::ForeignLabel(label.to_string(), topology));
    }
    let g = params.g();
    let mut out = Vec::with_capacity(5);

    let photons: u32 = label.photons.iter().sum();
    let zero_point = match topology {
        Topology::IndependentCavities => 0.0,
        Topology::CommonCavity => 0.5,
    };
    let diag = 0.5 * params.delta_atom() * (sigma_z(label.a) + sigma_z(label.b))
        + params.omega() * (photons as f64 + zero_point);
    out.push((label.clone(), diag));

    // (atom index, mode index) pairs that are coupled
    let couplings: &[(usize, usize)] = match topology {
        Topology::IndependentCavities => &[(0, 0), (1, 1)],
        Topology::CommonCavity => &[(0, 0), (1, 0)],
    };
    for &(atom, mode) in couplings {
        let level = if atom == 0 { label.a } else { label.b };
        let n = label.photons[mode];
        let mut next = label.clone();
        if atom == 0 {
            next.a = flip(level);
        } else {
            next.b = flip(level);
        }
        match level {
            // σ⁻ a†
            Up => {
                next.photons[mode] = n + 1;
                out.push((next, g * ((n + 1) as f64).sqrt()));
            }
            // σ⁺ a
            Down if n > 0 => {
                next.photons[mode] = n - 1;
                out.push((next, g * (n as f64).sqrt()));
            }
            Down => {}
        }
    }
    Ok(out)
}

/// Matrix of `H` restricted to the span of `basis`. Fails if `H` maps any
/// basis ket outside the span.
pub fn build_hamiltonian_on(
    topology: Topology,
    params: &ModelParams,
    basis: &[BasisLabel],
) -> Result<ComplexMatrix, DynamicsError> {
    let mut h = ComplexMatrix::zeros(basis.len());
    for (j, ket) in basis.iter().enumerate() {
        for (image, coeff) in apply_hamiltonian(topology, params, ket)? {
            let i = basis.iter().position(|b| *b == image).ok_or_else(|| {
                DynamicsError::SectorNotClosed {
                    from: ket.to_string(),
                    to: image.to_string(),
                }
            })?;
            h[(i, j)] += C64::new(coeff, 0.0);
        }
    }
    Ok(h)
}

/// `H` restricted to a conserved sector, in the ordering of the matching
/// [`Amplitudes`] kets.
pub fn build_hamiltonian(
    topology: Topology,
    params: &ModelParams,
    sector: Sector,
) -> Result<ComplexMatrix, DynamicsError> {
    if sector.topology() != topology {
        return Err(DynamicsError::ForeignLabel(format!("{sector:?}"), topology));
    }
    build_hamiltonian_on(topology, params, &sector.basis())
}

fn check_time(t: f64) -> Result<(), DynamicsError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(DynamicsError::InvalidTime(t));
    }
    Ok(())
}

/// `(A e^{-iλ₊t} + B e^{-iλ₋t}, C (e^{-iλ₊t} - e^{-iλ₋t}))`.
fn jc_factors(params: &ModelParams, t: f64) -> (C64, C64, JcEigenData) {
    let e = jc_eigendata(params);
    let ep = C64::from_polar(1.0, -e.lambda_plus * t);
    let em = C64::from_polar(1.0, -e.lambda_minus * t);
    (e.a * ep + e.b * em, e.c * (ep - em), e)
}

/// Independent cavities, anti-correlated Bell input; valid at any detuning.
pub fn jc_amplitudes_anti(
    params: &ModelParams,
    alpha: f64,
    t: f64,
) -> Result<Amplitudes, DynamicsError> {
    check_time(t)?;
    let (stay, hop, _) = jc_factors(params, t);
    let (s, c) = alpha.sin_cos();
    Ok(Amplitudes {
        topology: Topology::IndependentCavities,
        bell: BellFamily::AntiCorrelated,
        values: vec![stay * c, stay * s, hop * c, hop * s],
    })
}

/// Independent cavities, correlated Bell input; valid at any detuning.
pub fn jc_amplitudes_corr(
    params: &ModelParams,
    alpha: f64,
    t: f64,
) -> Result<Amplitudes, DynamicsError> {
    check_time(t)?;
    let (stay, hop, e) = jc_factors(params, t);
    let (s, c) = alpha.sin_cos();
    let ep = C64::from_polar(1.0, -e.lambda_plus * t);
    let em = C64::from_polar(1.0, -e.lambda_minus * t);
    let diff = ep - em;
    let x1 = stay * stay * c;
    let x2 = e.a * e.b * diff * diff * c;
    let x3 = hop * stay * c;
    Ok(Amplitudes {
        topology: Topology::IndependentCavities,
        bell: BellFamily::Correlated,
        values: vec![x1, x2, x3, x3, C64::new(s, 0.0)],
    })
}

fn require_resonance(params: &ModelParams) -> Result<(), DynamicsError> {
    if !params.is_resonant() {
        return Err(DynamicsError::NotResonant(params.detuning()));
    }
    Ok(())
}

/// Common cavity, anti-correlated Bell input, resonance only. The collective
/// Rabi frequency is `√2 g`.
pub fn dicke_amplitudes_anti(
    params: &ModelParams,
    alpha: f64,
    t: f64,
) -> Result<Amplitudes, DynamicsError> {
    require_resonance(params)?;
    check_time(t)?;
    let (s, c) = alpha.sin_cos();
    let (sin_r, cos_r) = (2f64.sqrt() * params.g() * t).sin_cos();
    let x1 = 0.5 * c * (cos_r + 1.0) + 0.5 * s * (cos_r - 1.0);
    let x2 = 0.5 * c * (cos_r - 1.0) + 0.5 * s * (cos_r + 1.0);
    let x3 = C64::new(0.0, -(c + s) * sin_r / 2f64.sqrt());
    Ok(Amplitudes {
        topology: Topology::CommonCavity,
        bell: BellFamily::AntiCorrelated,
        values: vec![C64::new(x1, 0.0), C64::new(x2, 0.0), x3],
    })
}

/// Common cavity, correlated Bell input, resonance only. The two-excitation
/// Rabi frequency is `√6 g`.
pub fn dicke_amplitudes_corr(
    params: &ModelParams,
    alpha: f64,
    t: f64,
) -> Result<Amplitudes, DynamicsError> {
    require_resonance(params)?;
    check_time(t)?;
    let (s, c) = alpha.sin_cos();
    let (sin_r, cos_r) = (6f64.sqrt() * params.g() * t).sin_cos();
    let phase = C64::from_polar(1.0, -params.omega() * t);
    let minus_i = C64::new(0.0, -1.0);
    let x1 = phase * (c / 3.0 * (2.0 + cos_r));
    let x2 = phase * (2f64.sqrt() * c / 3.0 * (cos_r - 1.0));
    let x3 = minus_i * phase * (c / 6f64.sqrt() * sin_r);
    Ok(Amplitudes {
        topology: Topology::CommonCavity,
        bell: BellFamily::Correlated,
        values: vec![x1, x2, x3, x3, C64::new(s, 0.0)],
    })
}

/// Closed-form amplitudes for any scenario that has one.
pub fn closed_form_amplitudes(scenario: &Scenario, t: f64) -> Result<Amplitudes, DynamicsError> {
    let p = &scenario.params;
    let a = scenario.alpha;
    match (scenario.topology, scenario.bell) {
        (Topology::IndependentCavities, BellFamily::AntiCorrelated) => jc_amplitudes_anti(p, a, t),
        (Topology::IndependentCavities, BellFamily::Correlated) => jc_amplitudes_corr(p, a, t),
        (Topology::CommonCavity, BellFamily::AntiCorrelated) => dicke_amplitudes_anti(p, a, t),
        (Topology::CommonCavity, BellFamily::Correlated) => dicke_amplitudes_corr(p, a, t),
    }
}

/// Spectral evolution inside the conserved sectors of a scenario. The
/// eigensystem is computed once; [`NumericPropagator::amplitudes`] is then
/// cheap for every time point.
#[derive(Debug, Clone)]
pub struct NumericPropagator {
    scenario: Scenario,
    excited: SpectralPropagator,
    initial_excited: Vec<C64>,
    ground_energy: f64,
}

impl NumericPropagator {
    pub fn new(scenario: &Scenario) -> Result<Self, DynamicsError> {
        let topology = scenario.topology;
        let h = build_hamiltonian(
            topology,
            &scenario.params,
            Sector::Excited(topology, scenario.bell),
        )?;
        let ground = build_hamiltonian(topology, &scenario.params, Sector::Ground(topology))?;
        let (s, c) = scenario.alpha.sin_cos();
        let mut initial_excited = vec![C64::new(0.0, 0.0); h.dim()];
        match scenario.bell {
            BellFamily::AntiCorrelated => {
                initial_excited[0] = C64::new(c, 0.0);
                initial_excited[1] = C64::new(s, 0.0);
            }
            BellFamily::Correlated => initial_excited[0] = C64::new(c, 0.0),
        }
        Ok(Self {
            scenario: *scenario,
            excited: SpectralPropagator::new(&h)?,
            initial_excited,
            ground_energy: ground[(0, 0)].re,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn amplitudes(&self, t: f64) -> Result<Amplitudes, DynamicsError> {
        check_time(t)?;
        let mut values = self.excited.apply(&self.initial_excited, t)?;
        if self.scenario.bell == BellFamily::Correlated {
            let s = self.scenario.alpha.sin();
            values.push(s * C64::from_polar(1.0, -self.ground_energy * t));
        }
        let amps = Amplitudes {
            topology: self.scenario.topology,
            bell: self.scenario.bell,
            values,
        };
        debug_assert!((amps.norm_sqr() - 1.0).abs() < NORM_TOL);
        Ok(amps)
    }
}

/// Amplitudes by spectral evolution; works at any detuning.
pub fn evolve_numeric(scenario: &Scenario, t: f64) -> Result<Amplitudes, DynamicsError> {
    NumericPropagator::new(scenario)?.amplitudes(t)
}

/// Mean total excitation number `Σ|xᵢ|² nᵢ`.
pub fn mean_excitations(amps: &Amplitudes) -> f64 {
    amps.labels()
        .iter()
        .zip(&amps.values)
        .map(|(l, x)| x.norm_sqr() * l.excitations() as f64)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigendecomposition;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

    fn resonant() -> ModelParams {
        ModelParams::resonant(1.0, 0.5).unwrap()
    }

    #[test]
    fn eigendata_resonance() {
        let e = jc_eigendata(&resonant());
        assert_eq!((e.a, e.b, e.c), (0.5, 0.5, 0.5));
        assert!((e.lambda_plus - 1.5).abs() < 1e-15);
        assert!((e.lambda_minus - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eigendata_far_detuned() {
        let p = ModelParams::with_detuning(1.0, 0.1, 1e6 * 0.1).unwrap();
        let e = jc_eigendata(&p);
        assert!((e.a - 1.0).abs() < 1e-5);
        assert!(e.b.abs() < 1e-5 && e.b > 0.0);
        assert!(e.c.abs() < 1e-5);
        assert!((e.a * e.b - e.c * e.c).abs() < 1e-20);
    }

    #[test]
    fn eigendata_delta_equals_big_g() {
        // δ = G = 1: A = (1 + 1/√2)/2, C = 1/(2√2)
        let p = ModelParams::with_detuning(1.0, 0.5, 1.0).unwrap();
        let e = jc_eigendata(&p);
        assert!((e.a - 0.853_553_390_593_273_8).abs() < 1e-15);
        assert!((e.b - 0.146_446_609_406_726_24).abs() < 1e-15);
        assert!((e.c - 0.353_553_390_593_273_8).abs() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(1.0, 1.0, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 0.1).is_err());
        let p = ModelParams::new(1.3, 1.0, 0.1).unwrap();
        assert_eq!(p.detuning(), 1.3 - 1.0);
        assert_eq!(p.big_g(), 0.2);
    }

    #[test]
    fn scenario_alpha_range() {
        let p = resonant();
        let bad = [0.0, FRAC_PI_2, -0.1, 2.0, f64::NAN];
        for a in bad {
            assert!(Scenario::new(Topology::CommonCavity, BellFamily::Correlated, a, p).is_err());
        }
    }

    #[test]
    fn jc_anti_initial_and_transfer() {
        let p = resonant();
        let a = 0.3;
        let x = jc_amplitudes_anti(&p, a, 0.0).unwrap();
        assert!((x.x(1) - C64::new(a.cos(), 0.0)).norm() < 1e-15);
        assert!((x.x(2) - C64::new(a.sin(), 0.0)).norm() < 1e-15);
        assert!(x.x(3).norm() < 1e-15 && x.x(4).norm() < 1e-15);

        let x = jc_amplitudes_anti(&p, a, PI / p.big_g()).unwrap();
        assert!(x.x(1).norm() < 1e-15 && x.x(2).norm() < 1e-15);
        assert!((x.x(3).norm_sqr() + x.x(4).norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jc_corr_initial_and_half_period() {
        let p = resonant();
        let a = FRAC_PI_6;
        let x = jc_amplitudes_corr(&p, a, 0.0).unwrap();
        assert!((x.x(1).norm() - a.cos()).abs() < 1e-15);
        assert_eq!(x.x(5), C64::new(a.sin(), 0.0));

        // gt = π/2: both photons emitted
        let x = jc_amplitudes_corr(&p, a, PI / p.big_g()).unwrap();
        assert!(x.x(1).norm() < 1e-15);
        assert!(x.x(3).norm() < 1e-15);
        assert!((x.x(2).norm() - a.cos()).abs() < 1e-15);
        assert!((x.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dicke_anti_examples() {
        let p = resonant();
        let a = FRAC_PI_4;
        let x = dicke_amplitudes_anti(&p, a, 0.0).unwrap();
        assert!((x.x(1).re - a.cos()).abs() < 1e-15 && (x.x(2).re - a.sin()).abs() < 1e-15);

        // √2 g t = π/2 → (0, 0, -i)
        let t = FRAC_PI_2 / (2f64.sqrt() * p.g());
        let x = dicke_amplitudes_anti(&p, a, t).unwrap();
        assert!(x.x(1).norm() < 1e-15 && x.x(2).norm() < 1e-15);
        assert!((x.x(3) - C64::new(0.0, -1.0)).norm() < 1e-15);

        // √2 g t = π → (-sin α, -cos α, 0)
        let x = dicke_amplitudes_anti(&p, a, 2.0 * t).unwrap();
        assert!((x.x(1).re + a.sin()).abs() < 1e-15);
        assert!((x.x(2).re + a.cos()).abs() < 1e-15);
        assert!(x.x(3).norm() < 1e-15);
    }

    #[test]
    fn dicke_corr_examples() {
        let p = resonant();
        let a = 0.4;
        let t = PI / (6f64.sqrt() * p.g());
        let x = dicke_amplitudes_corr(&p, a, t).unwrap();
        let phase = C64::from_polar(1.0, -p.omega() * t);
        assert!((x.x(1) - phase * (a.cos() / 3.0)).norm() < 1e-15);
        assert!((x.x(2) + phase * (2.0 * 2f64.sqrt() / 3.0 * a.cos())).norm() < 1e-15);
        assert!(x.x(3).norm() < 1e-15 && x.x(4).norm() < 1e-15);
        assert!((x.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dicke_closed_forms_reject_detuning() {
        let p = ModelParams::with_detuning(1.0, 0.1, 0.1).unwrap();
        assert!(matches!(
            dicke_amplitudes_anti(&p, 0.3, 1.0),
            Err(DynamicsError::NotResonant(_))
        ));
        assert!(matches!(
            dicke_amplitudes_corr(&p, 0.3, 1.0),
            Err(DynamicsError::NotResonant(_))
        ));
    }

    #[test]
    fn jc_anti_sector_contains_lambda_pm() {
        let p = resonant();
        let h = build_hamiltonian(
            Topology::IndependentCavities,
            &p,
            Sector::Excited(Topology::IndependentCavities, BellFamily::AntiCorrelated),
        )
        .unwrap();
        assert_eq!(h.dim(), 4);
        let e = hermitian_eigendecomposition(&h).unwrap();
        // energies are shifted by -Δ relative to λ± (Δ σᶻ/2 vs. excitation counting)
        let jc = jc_eigendata(&p);
        let shift = p.delta_atom();
        for target in [jc.lambda_minus - shift, jc.lambda_plus - shift] {
            assert!(e.values.iter().any(|v| (v - target).abs() < 1e-14));
        }
    }

    #[test]
    fn dicke_two_excitation_splitting() {
        let p = resonant();
        let h = build_hamiltonian(
            Topology::CommonCavity,
            &p,
            Sector::Excited(Topology::CommonCavity, BellFamily::Correlated),
        )
        .unwrap();
        let e = hermitian_eigendecomposition(&h).unwrap();
        let centre = h[(0, 0)].re;
        let gaps: Vec<f64> = e.values.iter().map(|v| v - centre).collect();
        let root6 = 6f64.sqrt() * p.g();
        // the antisymmetric ket (|↑↓1⟩ - |↓↑1⟩)/√2 is dark, adding a second 0
        let expected = [-root6, 0.0, 0.0, root6];
        for (g, x) in gaps.iter().zip(expected) {
            assert!((g - x).abs() < 1e-14, "{gaps:?}");
        }
    }

    #[test]
    fn hamiltonians_are_hermitian() {
        let p = ModelParams::with_detuning(1.0, 0.1, 0.37).unwrap();
        for topology in [Topology::IndependentCavities, Topology::CommonCavity] {
            for bell in [BellFamily::AntiCorrelated, BellFamily::Correlated] {
                let h = build_hamiltonian(topology, &p, Sector::Excited(topology, bell)).unwrap();
                assert!(h.hermitian_deviation() < 1e-14);
            }
        }
    }

    #[test]
    fn open_sector_rejected() {
        let p = resonant();
        let basis = vec![BasisLabel::new(Up, Down, &[0, 0])];
        assert!(matches!(
            build_hamiltonian_on(Topology::IndependentCavities, &p, &basis),
            Err(DynamicsError::SectorNotClosed { .. })
        ));
        assert!(matches!(
            build_hamiltonian(
                Topology::CommonCavity,
                &p,
                Sector::Ground(Topology::IndependentCavities)
            ),
            Err(DynamicsError::ForeignLabel(..))
        ));
        let wrong_modes = vec![BasisLabel::new(Down, Down, &[0])];
        assert!(matches!(
            build_hamiltonian_on(Topology::IndependentCavities, &p, &wrong_modes),
            Err(DynamicsError::ForeignLabel(..))
        ));
    }

    #[test]
    fn numeric_initial_amplitudes() {
        let p = ModelParams::with_detuning(1.0, 0.1, 0.2).unwrap();
        for topology in [Topology::IndependentCavities, Topology::CommonCavity] {
            let s = Scenario::new(topology, BellFamily::Correlated, 0.5, p).unwrap();
            let x = evolve_numeric(&s, 0.0).unwrap();
            assert!((x.x(1).re - 0.5f64.cos()).abs() < 1e-14);
            assert!((x.values.last().unwrap().re - 0.5f64.sin()).abs() < 1e-14);
            assert!(x.values[1..4].iter().all(|z| z.norm() < 1e-14));
        }
    }

    #[test]
    fn jc_numeric_matches_closed_form_at_resonance() {
        let p = resonant();
        let s = Scenario::new(
            Topology::IndependentCavities,
            BellFamily::AntiCorrelated,
            0.7,
            p,
        )
        .unwrap();
        let prop = NumericPropagator::new(&s).unwrap();
        for k in 0..20 {
            let t = 0.37 * k as f64;
            let a = prop.amplitudes(t).unwrap();
            let b = jc_amplitudes_anti(&p, 0.7, t).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x.norm() - y.norm()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn negative_time_rejected() {
        assert!(jc_amplitudes_anti(&resonant(), 0.3, -1.0).is_err());
    }
}
