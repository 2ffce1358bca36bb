//! Two-qubit X-state density matrices.
//!
//! In the basis `{|↓↓⟩, |↓↑⟩, |↑↓⟩, |↑↑⟩}` every reduced state produced by the
//! dynamics has the form
//!
//! ```text
//! ⎛ v₊  0   0   u* ⎞
//! ⎜ 0   w   y*  0  ⎟
//! ⎜ 0   y   x   0  ⎟
//! ⎝ u   0   0   v₋ ⎠
//! ```

use std::fmt;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::dynamics::{Amplitudes, BellFamily, Topology};
use crate::linalg::ComplexMatrix;

/// Slack allowed on trace, positivity and block-positivity checks.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReduceError {
    #[error("amplitude count {found} does not match the {expected}-ket basis")]
    WrongLength { expected: usize, found: usize },
    #[error("reduced state violates X-state invariants: {0}")]
    Invalid(ValidationReport),
    #[error("matrix is not of X form: |entry ({row},{col})| = {magnitude:e}")]
    NotXForm {
        row: usize,
        col: usize,
        magnitude: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub v_plus: f64,
    pub v_minus: f64,
    pub w: f64,
    pub x: f64,
    pub y: C64,
    pub u: C64,
}

impl XState {
    pub fn diagonal(v_plus: f64, w: f64, x: f64, v_minus: f64) -> Self {
        Self {
            v_plus,
            v_minus,
            w,
            x,
            y: C64::new(0.0, 0.0),
            u: C64::new(0.0, 0.0),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self::diagonal(0.25, 0.25, 0.25, 0.25)
    }

    pub fn trace(&self) -> f64 {
        self.v_plus + self.v_minus + self.w + self.x
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4);
        m[(0, 0)] = C64::new(self.v_plus, 0.0);
        m[(1, 1)] = C64::new(self.w, 0.0);
        m[(2, 2)] = C64::new(self.x, 0.0);
        m[(3, 3)] = C64::new(self.v_minus, 0.0);
        m[(2, 1)] = self.y;
        m[(1, 2)] = self.y.conj();
        m[(3, 0)] = self.u;
        m[(0, 3)] = self.u.conj();
        m
    }

    /// Reads an X-state out of a 4×4 matrix, rejecting entries outside the X
    /// pattern larger than `tol`.
    pub fn from_matrix(m: &ComplexMatrix, tol: f64) -> Result<Self, ReduceError> {
        assert_eq!(m.dim(), 4, "two-qubit density matrix expected");
        let x_pattern = |i: usize, j: usize| i == j || i + j == 3;
        for i in 0..4 {
            for j in 0..4 {
                let magnitude = m[(i, j)].norm();
                if !x_pattern(i, j) && magnitude > tol {
                    return Err(ReduceError::NotXForm {
                        row: i,
                        col: j,
                        magnitude,
                    });
                }
            }
        }
        Ok(Self {
            v_plus: m[(0, 0)].re,
            v_minus: m[(3, 3)].re,
            w: m[(1, 1)].re,
            x: m[(2, 2)].re,
            y: 0.5 * (m[(2, 1)] + m[(1, 2)].conj()),
            u: 0.5 * (m[(3, 0)] + m[(0, 3)].conj()),
        })
    }

    /// Populations of qubit A: `(↓, ↑)`.
    pub fn marginal_a(&self) -> (f64, f64) {
        (self.v_plus + self.w, self.x + self.v_minus)
    }

    /// Populations of qubit B: `(↓, ↑)`.
    pub fn marginal_b(&self) -> (f64, f64) {
        (self.v_plus + self.x, self.w + self.v_minus)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.v_plus.powi(2)
            + self.v_minus.powi(2)
            + self.w.powi(2)
            + self.x.powi(2)
            + 2.0 * (self.y.norm_sqr() + self.u.norm_sqr())
    }
}

/// Maps scenario amplitudes onto the reduced two-qubit X-state.
pub fn reduce(amps: &Amplitudes) -> Result<XState, ReduceError> {
    let expected = amps.labels().len();
    if amps.values.len() != expected {
        return Err(ReduceError::WrongLength {
            expected,
            found: amps.values.len(),
        });
    }
    let p = |i: usize| amps.x(i).norm_sqr();
    let zero = C64::new(0.0, 0.0);
    let state = match (amps.topology, amps.bell) {
        (Topology::IndependentCavities, BellFamily::AntiCorrelated) => XState {
            v_plus: p(3) + p(4),
            v_minus: 0.0,
            w: p(2),
            x: p(1),
            y: amps.x(1) * amps.x(2).conj(),
            u: zero,
        },
        (Topology::IndependentCavities, BellFamily::Correlated) => XState {
            v_plus: p(2) + p(5),
            v_minus: p(1),
            w: p(4),
            x: p(3),
            y: zero,
            u: amps.x(1) * amps.x(5).conj(),
        },
        (Topology::CommonCavity, BellFamily::AntiCorrelated) => XState {
            v_plus: p(3),
            v_minus: 0.0,
            w: p(2),
            x: p(1),
            y: amps.x(1) * amps.x(2).conj(),
            u: zero,
        },
        (Topology::CommonCavity, BellFamily::Correlated) => XState {
            v_plus: p(2) + p(5),
            v_minus: p(1),
            w: p(4),
            x: p(3),
            y: amps.x(3) * amps.x(4).conj(),
            u: amps.x(1) * amps.x(5).conj(),
        },
    };
    let report = validate(&state);
    if !report.passed() {
        return Err(ReduceError::Invalid(report));
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Trace { trace: f64 },
    NegativePopulation { name: &'static str, value: f64 },
    CoherenceY { y_sqr: f64, bound: f64 },
    CoherenceU { u_sqr: f64, bound: f64 },
    NonFinite,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Trace { trace } => write!(
                f,
                "trace = {trace} (|trace - 1| = {:e})",
                (trace - 1.0).abs()
            ),
            Violation::NegativePopulation { name, value } => write!(f, "{name} = {value:e} < 0"),
            Violation::CoherenceY { y_sqr, bound } => {
                write!(f, "|y|^2 = {y_sqr} exceeds w*x = {bound}")
            }
            Violation::CoherenceU { u_sqr, bound } => {
                write!(f, "|u|^2 = {u_sqr} exceeds v+*v- = {bound}")
            }
            Violation::NonFinite => f.write_str("non-finite entry"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks unit trace, non-negative populations and positivity of both 2×2
/// blocks.
pub fn validate(s: &XState) -> ValidationReport {
    let mut violations = Vec::new();
    let finite = [
        s.v_plus, s.v_minus, s.w, s.x, s.y.re, s.y.im, s.u.re, s.u.im,
    ]
    .iter()
    .all(|v| v.is_finite());
    if !finite {
        violations.push(Violation::NonFinite);
        return ValidationReport { violations };
    }
    let trace = s.trace();
    if (trace - 1.0).abs() > STATE_TOL {
        violations.push(Violation::Trace { trace });
    }
    for (name, value) in [("v+", s.v_plus), ("v-", s.v_minus), ("w", s.w), ("x", s.x)] {
        if value < -STATE_TOL {
            violations.push(Violation::NegativePopulation { name, value });
        }
    }
    let bound = s.w * s.x;
    if s.y.norm_sqr() > bound + STATE_TOL {
        violations.push(Violation::CoherenceY {
            y_sqr: s.y.norm_sqr(),
            bound,
        });
    }
    let bound = s.v_plus * s.v_minus;
    if s.u.norm_sqr() > bound + STATE_TOL {
        violations.push(Violation::CoherenceU {
            u_sqr: s.u.norm_sqr(),
            bound,
        });
    }
    ValidationReport { violations }
}
