//! Entropies, quantum discord, classical correlation and concurrence of
//! two-qubit X-states.
//!
//! All entropies are in bits. Discord is defined with the projective
//! measurement performed on qubit B:
//!
//! ```text
//! D = min_{θ,φ} [ S(B) - S(A,B) + S(A|Π^B(θ,φ)) ]
//! C = max_{θ,φ} [ S(A) - S(A|Π^B(θ,φ)) ]
//! ```
//!
//! with the measurement basis `|Φ₁⟩ = cos θ|↓⟩ + e^{iφ} sin θ|↑⟩`,
//! `|Φ₂⟩ = e^{-iφ} sin θ|↓⟩ - cos θ|↑⟩`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64 as C64;

use crate::dynamics::{
    closed_form_amplitudes, jc_eigendata, BellFamily, DynamicsError, ModelParams, Scenario,
    Topology,
};
use crate::reduced::{reduce, ReduceError, XState};

/// Probabilities at or below this contribute nothing to an entropy.
pub const ZERO_LOG_CUTOFF: f64 = 1e-15;

/// Negative discord, classical correlation or concurrence within this of zero
/// is clamped to zero.
pub const CLAMP_TOL: f64 = 1e-9;

/// Coarse grid resolution in θ and φ before refinement.
pub const COARSE_GRID: usize = 64;

/// Angular resolution of the golden-section refinement.
pub const ANGLE_TOL: f64 = 1e-10;

const MAX_REFINE_PASSES: usize = 60;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `-Σ p log₂ p`, treating `p <= ZERO_LOG_CUTOFF` as zero.
pub fn entropy_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > ZERO_LOG_CUTOFF)
        .map(|p| -p * p.log2())
        .sum()
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits([p, 1.0 - p])
}

/// Eigenvalues (larger, smaller) of the Hermitian block `[[a, z*], [z, b]]`
/// given `|z|²`.
fn block_eigenvalues(a: f64, b: f64, off_sqr: f64) -> (f64, f64) {
    let mean = 0.5 * (a + b);
    let radius = (0.25 * (a - b) * (a - b) + off_sqr).sqrt();
    let hi = mean + radius;
    if hi <= 0.0 {
        return (hi, mean - radius);
    }
    // small eigenvalue from the determinant to avoid cancellation
    let lo = (a * b - off_sqr) / hi;
    (hi, lo)
}

/// The four eigenvalues `Ω₁,± Ω₂,±` of an X-state.
pub fn x_state_eigenvalues(s: &XState) -> [f64; 4] {
    let (o1p, o1m) = block_eigenvalues(s.v_plus, s.v_minus, s.u.norm_sqr());
    let (o2p, o2m) = block_eigenvalues(s.w, s.x, s.y.norm_sqr());
    [o1p, o1m, o2p, o2m]
}

/// `S(A,B)`.
pub fn entropy_joint(s: &XState) -> f64 {
    entropy_bits(x_state_eigenvalues(s))
}

/// `(S(A), S(B))`.
pub fn entropy_marginals(s: &XState) -> (f64, f64) {
    let (a0, a1) = s.marginal_a();
    let (b0, b1) = s.marginal_b();
    (entropy_bits([a0, a1]), entropy_bits([b0, b1]))
}

/// Projective measurement basis on qubit B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// `[|Φ₁⟩, |Φ₂⟩]` as `(↓, ↑)` component pairs.
    pub fn states(&self) -> [[C64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), e * s], [e.conj() * s, C64::new(-c, 0.0)]]
    }

    /// `max |Π₁ + Π₂ - I|` over the 2×2 entries.
    pub fn completeness_deviation(&self) -> f64 {
        let st = self.states();
        let mut dev = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                let sum: C64 = st.iter().map(|v| v[i] * v[j].conj()).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((sum - id).norm());
            }
        }
        dev
    }
}

/// Post-measurement quantities for both outcomes `k = 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalSpectrum {
    pub p: [f64; 2],
    /// `η_{k,±}` as `[η₊, η₋]` per outcome.
    pub eta: [[f64; 2]; 2],
    pub x_plus: [f64; 2],
    pub x_minus: [f64; 2],
    pub y: [C64; 2],
}

impl ConditionalSpectrum {
    pub fn entropy(&self) -> f64 {
        (0..2)
            .filter(|&k| self.p[k] > ZERO_LOG_CUTOFF)
            .map(|k| self.p[k] * entropy_bits(self.eta[k]))
            .sum()
    }
}

pub fn conditional_spectrum(s: &XState, basis: &MeasurementBasis) -> ConditionalSpectrum {
    let (sin, cos) = basis.theta.sin_cos();
    let (s2, c2) = (sin * sin, cos * cos);
    let phase = C64::from_polar(1.0, basis.phi);
    let y1 = (s.y.conj() * phase.conj() + s.u.conj() * phase) * (sin * cos);

    let x_plus = [s.v_plus * c2 + s.w * s2, s.v_plus * s2 + s.w * c2];
    let x_minus = [s.x * c2 + s.v_minus * s2, s.x * s2 + s.v_minus * c2];
    let y = [y1, -y1];

    let mut p = [0.0; 2];
    let mut eta = [[0.0; 2]; 2];
    for k in 0..2 {
        p[k] = x_plus[k] + x_minus[k];
        if p[k] > ZERO_LOG_CUTOFF {
            let (hi, lo) = block_eigenvalues(x_plus[k], x_minus[k], y[k].norm_sqr());
            eta[k] = [hi / p[k], lo / p[k]];
        }
    }
    ConditionalSpectrum {
        p,
        eta,
        x_plus,
        x_minus,
        y,
    }
}

/// `S(A|Π^B)` for one measurement basis.
pub fn conditional_entropy(s: &XState, basis: &MeasurementBasis) -> f64 {
    conditional_spectrum(s, basis).entropy()
}

/// Result of minimizing the conditional entropy over measurement bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalMinimum {
    pub entropy: f64,
    pub theta: f64,
    pub phi: f64,
}

fn objective(s: &XState, theta: f64, phi: f64) -> f64 {
    conditional_entropy(s, &MeasurementBasis::new(theta, phi))
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`.
fn golden_section(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > ANGLE_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    // include the endpoints so boundary minima are reached exactly
    [(lo, f(lo)), (x1, f1), (x2, f2), (hi, f(hi))]
        .into_iter()
        .fold((f64::NAN, f64::INFINITY), |best, cand| {
            if cand.1 < best.1 {
                cand
            } else {
                best
            }
        })
}

/// Global minimum of `S(A|Π^B)` over θ ∈ [0, π/2], φ ∈ [0, 2π).
///
/// A 64×64 grid scan locates the basin; coordinate-wise golden-section
/// passes then refine θ and φ to `ANGLE_TOL`. Ties keep the smallest θ, then
/// the smallest φ. When the optimum sits at θ = 0 or π/2 the basis does not
/// depend on φ and φ is reported as 0.
pub fn minimize_conditional_entropy(s: &XState) -> ConditionalMinimum {
    let d_theta = FRAC_PI_2 / (COARSE_GRID - 1) as f64;
    let d_phi = TAU / COARSE_GRID as f64;

    let mut best = ConditionalMinimum {
        entropy: f64::INFINITY,
        theta: 0.0,
        phi: 0.0,
    };
    for i in 0..COARSE_GRID {
        let theta = i as f64 * d_theta;
        for j in 0..COARSE_GRID {
            let phi = j as f64 * d_phi;
            let e = objective(s, theta, phi);
            if e < best.entropy {
                best = ConditionalMinimum {
                    entropy: e,
                    theta,
                    phi,
                };
            }
        }
    }

    for _ in 0..MAX_REFINE_PASSES {
        let previous = best.entropy;

        let lo = (best.theta - d_theta).max(0.0);
        let hi = (best.theta + d_theta).min(FRAC_PI_2);
        let (theta, e) = golden_section(lo, hi, |th| objective(s, th, best.phi));
        if e < best.entropy {
            best.theta = theta;
            best.entropy = e;
        }

        let (phi, e) = golden_section(best.phi - d_phi, best.phi + d_phi, |ph| {
            objective(s, best.theta, ph)
        });
        if e < best.entropy {
            best.phi = phi.rem_euclid(TAU);
            best.entropy = e;
        }

        if previous - best.entropy <= 1e-15 {
            break;
        }
    }

    if best.theta < ANGLE_TOL {
        best.theta = 0.0;
        best.phi = 0.0;
    } else if FRAC_PI_2 - best.theta < ANGLE_TOL {
        best.theta = FRAC_PI_2;
        best.phi = 0.0;
    }
    best.entropy = objective(s, best.theta, best.phi);
    best
}

fn clamp_nonnegative(name: &str, value: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&value) {
        log::debug!("clamping {name} = {value:e} to 0");
        0.0
    } else {
        value
    }
}

/// All correlation measures of one state, sharing a single minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlations {
    pub discord: f64,
    pub classical: f64,
    pub concurrence: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub minimum: ConditionalMinimum,
    pub purity: f64,
}

impl Correlations {
    pub fn mutual_information(&self) -> f64 {
        self.s_a + self.s_b - self.s_ab
    }
}

pub fn correlations(s: &XState) -> Correlations {
    let s_ab = entropy_joint(s);
    let (s_a, s_b) = entropy_marginals(s);
    let minimum = minimize_conditional_entropy(s);
    let discord = clamp_nonnegative("discord", s_b - s_ab + minimum.entropy);
    let classical = clamp_nonnegative("classical correlation", s_a - minimum.entropy);
    let mi = s_a + s_b - s_ab;
    if (discord + classical - mi).abs() > CLAMP_TOL {
        log::debug!(
            "discord + classical = {} differs from mutual information {mi}",
            discord + classical
        );
    }
    Correlations {
        discord,
        classical,
        concurrence: concurrence(s),
        s_a,
        s_b,
        s_ab,
        minimum,
        purity: s.purity(),
    }
}

pub fn quantum_discord(s: &XState) -> f64 {
    correlations(s).discord
}

pub fn classical_correlation(s: &XState) -> f64 {
    correlations(s).classical
}

/// `max(|y| - √(v₊v₋), |u| - √(wx))`, the signed quantity whose positive
/// part is half the concurrence. Negative values mean the state is
/// separable with margin.
pub fn concurrence_witness(s: &XState) -> f64 {
    let a = s.y.norm() - (s.v_plus * s.v_minus).max(0.0).sqrt();
    let b = s.u.norm() - (s.w * s.x).max(0.0).sqrt();
    a.max(b)
}

/// Wootters concurrence of an X-state.
pub fn concurrence(s: &XState) -> f64 {
    let raw = 2.0 * concurrence_witness(s);
    if raw <= 0.0 {
        return 0.0;
    }
    raw.min(1.0)
}

/// `|sin 2α| [1 - 4C² sin²(√(δ²+G²) t/2)]` for independent cavities and the
/// anti-correlated input.
pub fn jc_anti_concurrence(params: &ModelParams, alpha: f64, t: f64) -> f64 {
    let e = jc_eigendata(params);
    let r = params.detuning().hypot(params.big_g());
    let s = (0.5 * r * t).sin();
    (2.0 * alpha).sin().abs() * (1.0 - 4.0 * e.c * e.c * s * s)
}

/// `max{0, f(t)}` with
/// `f = [1 - 4C² sin²(Rt/2)] [|sin 2α| - 8C² sin²(Rt/2) cos² α]`
/// for independent cavities and the correlated input.
pub fn jc_corr_concurrence(params: &ModelParams, alpha: f64, t: f64) -> f64 {
    let e = jc_eigendata(params);
    let r = params.detuning().hypot(params.big_g());
    let s2 = (0.5 * r * t).sin().powi(2);
    let c2 = e.c * e.c;
    let f =
        (1.0 - 4.0 * c2 * s2) * ((2.0 * alpha).sin().abs() - 8.0 * c2 * s2 * alpha.cos().powi(2));
    f.max(0.0)
}

/// `2 max{0, |x₁x₅| - |x₃|², |x₃|² - |x₁|√(|x₂|² + |x₅|²)}` for the common
/// cavity and the correlated input, evaluated from the resonant amplitudes.
pub fn dicke_corr_concurrence(
    params: &ModelParams,
    alpha: f64,
    t: f64,
) -> Result<f64, DynamicsError> {
    let a = crate::dynamics::dicke_amplitudes_corr(params, alpha, t)?;
    let x3 = a.x(3).norm_sqr();
    let first = a.x(1).norm() * a.x(5).norm() - x3;
    let second = x3 - a.x(1).norm() * (a.x(2).norm_sqr() + a.x(5).norm_sqr()).sqrt();
    Ok(2.0 * first.max(second).max(0.0))
}

/// Mixing angle below which the correlated Bell input shows sudden death of
/// entanglement at resonance: π/4 for independent cavities, π/12 (the root
/// `arctan(2 - √3)` of `tan²α - 4 tan α + 1 = 0`) for a common cavity.
pub fn esd_critical_angle(topology: Topology) -> f64 {
    match topology {
        Topology::IndependentCavities => FRAC_PI_4,
        Topology::CommonCavity => PI / 12.0,
    }
}

/// Period in `t` of the resonant correlated-input dynamics.
pub fn resonant_period(topology: Topology, g: f64) -> f64 {
    match topology {
        Topology::IndependentCavities => PI / g,
        Topology::CommonCavity => TAU / (6f64.sqrt() * g),
    }
}

/// Minimum of [`concurrence_witness`] over one period of the resonant
/// correlated-input dynamics, sampled at `samples` evenly spaced times.
pub fn min_witness_over_period(
    topology: Topology,
    alpha: f64,
    params: &ModelParams,
    samples: usize,
) -> Result<f64, CorrelationError> {
    let scenario = Scenario::new(topology, BellFamily::Correlated, alpha, *params)?;
    let period = resonant_period(topology, params.g());
    let mut min = f64::INFINITY;
    for k in 0..samples {
        let t = period * k as f64 / samples as f64;
        let s = reduce(&closed_form_amplitudes(&scenario, t)?)?;
        min = min.min(concurrence_witness(&s));
    }
    Ok(min)
}

/// Witness values above `-ESD_MARGIN` count as "entangled" when scanning for
/// sudden death; instantaneous zeros are not a death interval.
pub const ESD_MARGIN: f64 = 1e-13;

/// Locates the critical angle by bisection on whether the correlated-input
/// dynamics has a finite interval of zero concurrence.
pub fn scan_critical_angle(
    topology: Topology,
    params: &ModelParams,
    samples: usize,
    resolution: f64,
) -> Result<f64, CorrelationError> {
    let has_esd = |alpha: f64| -> Result<bool, CorrelationError> {
        Ok(min_witness_over_period(topology, alpha, params, samples)? < -ESD_MARGIN)
    };
    let (mut lo, mut hi) = (1e-6, FRAC_PI_2 - 1e-6);
    if !has_esd(lo)? || has_esd(hi)? {
        return Err(CorrelationError::NoCrossing);
    }
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if has_esd(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CorrelationError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("no sign change of the minimum concurrence witness on (0, pi/2)")]
    NoCrossing,
}

/// One row of a time sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationPoint {
    pub t: f64,
    pub discord: f64,
    pub classical: f64,
    pub concurrence: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub theta_min: f64,
    pub phi_min: f64,
    pub purity: f64,
}

impl CorrelationPoint {
    pub fn from_state(t: f64, s: &XState) -> Self {
        let c = correlations(s);
        Self {
            t,
            discord: c.discord,
            classical: c.classical,
            concurrence: c.concurrence,
            s_a: c.s_a,
            s_b: c.s_b,
            s_ab: c.s_ab,
            theta_min: c.minimum.theta,
            phi_min: c.minimum.phi,
            purity: c.purity,
        }
    }
}
