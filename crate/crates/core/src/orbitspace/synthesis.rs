//! Builds a standard-form state realizing a given invariant vector.

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::{delta_beta, require_member, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::invariants::{invariants_j, j_of_standard, Beta, StandardState};
use crate::qstate::PureState3;

/// Self-check threshold on `‖J(χ) − β‖∞`.
const SELF_CHECK_TOL: f64 = 1e-6;
const RENORM_TOL: f64 = 1e-12;

/// Which branch of the construction produced the state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SynthesisCase {
    C1a,
    C1b,
    C2a,
    C2b1,
    C2b2,
    C2b3,
    C2b4,
    C2b5,
}

impl SynthesisCase {
    pub const ALL: [SynthesisCase; 8] = [
        SynthesisCase::C1a,
        SynthesisCase::C1b,
        SynthesisCase::C2a,
        SynthesisCase::C2b1,
        SynthesisCase::C2b2,
        SynthesisCase::C2b3,
        SynthesisCase::C2b4,
        SynthesisCase::C2b5,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SynthesisCase::C1a => "1a",
            SynthesisCase::C1b => "1b",
            SynthesisCase::C2a => "2a",
            SynthesisCase::C2b1 => "2b1",
            SynthesisCase::C2b2 => "2b2",
            SynthesisCase::C2b3 => "2b3",
            SynthesisCase::C2b4 => "2b4",
            SynthesisCase::C2b5 => "2b5",
        }
    }
}

impl fmt::Display for SynthesisCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for SynthesisCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SynthesisResult {
    pub state: StandardState,
    pub case_label: SynthesisCase,
}

fn sqrt0(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Pair of amplitudes `√(1/2 ± √(1/4 − b))`.
fn schmidt_pair(b: f64) -> (f64, f64) {
    let r = sqrt0(0.25 - b);
    (sqrt0(0.5 + r), sqrt0(0.5 - r))
}

/// Produces a standard state `χ` with `J(χ) = β` for any `β ∈ X`.
///
/// Zero tests use `tol`; negative radicands admitted by the tolerance are
/// clamped to zero. The output is re-evaluated and rejected if it misses
/// `β` by more than `1e-6`.
pub fn synthesize(b: &Beta, tol: f64) -> Result<SynthesisResult> {
    require_member(b, tol)?;
    let [b1, b2, b3, b4, b5, b6] = b.0;
    let zero = StandardState {
        lam0: 0.0,
        c1: Complex64::ZERO,
        lam2: 0.0,
        lam3: 0.0,
        lam4: 0.0,
    };

    let (state, case_label) = if b1 + b4 <= tol {
        if b2 <= tol {
            let (hi, lo) = schmidt_pair(b3);
            (
                StandardState {
                    lam0: hi,
                    lam3: lo,
                    ..zero
                },
                SynthesisCase::C1a,
            )
        } else {
            let (hi, lo) = schmidt_pair(b2);
            (
                StandardState {
                    lam0: hi,
                    lam2: lo,
                    ..zero
                },
                SynthesisCase::C1b,
            )
        }
    } else {
        let delta = delta_beta(b);
        let lam0 = sqrt0((b4 + b5 + sqrt0(delta)) / (2.0 * (b1 + b4)));
        if lam0 <= tol.sqrt() {
            let (hi, lo) = schmidt_pair(b1);
            (
                StandardState {
                    c1: real(hi),
                    lam4: lo,
                    ..zero
                },
                SynthesisCase::C2a,
            )
        } else if b4 <= tol {
            let l0sq = b5 / (2.0 * b1);
            let l2sq = 2.0 * b1 * b2 / b5;
            let l3sq = 2.0 * b1 * b3 / b5;
            let state = StandardState {
                lam0: sqrt0(l0sq),
                c1: real(sqrt0(1.0 - l0sq - l2sq - l3sq)),
                lam2: sqrt0(l2sq),
                lam3: sqrt0(l3sq),
                lam4: 0.0,
            };
            (state, SynthesisCase::C2b1)
        } else if b2 <= tol {
            let state = StandardState {
                lam0,
                c1: real(lam0 * sqrt0(b1 / b4)),
                lam2: 0.0,
                lam3: sqrt0(b3) / lam0,
                lam4: sqrt0(b4) / lam0,
            };
            (state, SynthesisCase::C2b2)
        } else if b3 <= tol {
            let state = StandardState {
                lam0,
                c1: real(lam0 * sqrt0(b1 / b4)),
                lam2: sqrt0(b2) / lam0,
                lam3: 0.0,
                lam4: sqrt0(b4) / lam0,
            };
            (state, SynthesisCase::C2b3)
        } else {
            let root234 = (b2 * b3 * b4).sqrt();
            let re = (2.0 * b2 * b3 - lam0 * lam0 * b5) / (2.0 * lam0 * root234);
            // On X, |Im c1| = λ0 √(β1β2β3 − β5²/4) / √(β2β3β4)
            //              = λ0 |β6| / (√(β2β3β4) √Δβ).
            // The quotient form is used only when Δβ is the larger factor of β6².
            let bottom = b1 * b2 * b3 - b5 * b5 / 4.0;
            let from_bottom = (lam0 * sqrt0(bottom) / root234).copysign(b6);
            let case = if sqrt0(delta) <= tol {
                SynthesisCase::C2b4
            } else {
                SynthesisCase::C2b5
            };
            let im = if case == SynthesisCase::C2b5 && delta >= bottom {
                lam0 * b6 / (root234 * delta.sqrt())
            } else {
                from_bottom
            };
            let state = StandardState {
                lam0,
                c1: Complex64::new(re, im),
                lam2: sqrt0(b2) / lam0,
                lam3: sqrt0(b3) / lam0,
                lam4: sqrt0(b4) / lam0,
            };
            (state, case)
        }
    };

    let state = if (state.norm_sqr() - 1.0).abs() > RENORM_TOL {
        state.normalized()
    } else {
        state
    };
    let miss = j_of_standard(&state)?.max_abs_diff(b);
    if miss.is_nan() || miss > SELF_CHECK_TOL {
        return Err(Error::SynthesisMismatch(miss));
    }
    Ok(SynthesisResult { state, case_label })
}

/// Standard-form representative of the orbit of `psi`.
pub fn canonical_representative(psi: &PureState3) -> Result<SynthesisResult> {
    synthesize(&invariants_j(psi), DEFAULT_TOL)
}
