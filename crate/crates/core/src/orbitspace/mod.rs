//! The region `X ⊂ R^6` of attainable invariant vectors: membership tests,
//! the auxiliary polynomials `Δβ` and `F`, cell classification, and
//! synthesis of standard states from invariant vectors.

mod cells;
mod synthesis;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::invariants::Beta;

pub use cells::{Cell2, Cell3, CellInfo};
pub use synthesis::{canonical_representative, synthesize, SynthesisCase, SynthesisResult};

/// Default absolute tolerance for zero and equality tests on `β`.
pub const DEFAULT_TOL: f64 = 1e-9;

const NEG_PRODUCT_TOL: f64 = 1e-12;

/// `Δβ = (β5 + β4)² − 4(β1 + β4)(β2 + β4)(β3 + β4)`.
pub fn delta_beta(b: &Beta) -> f64 {
    let [b1, b2, b3, b4, b5, _] = b.0;
    (b5 + b4).powi(2) - 4.0 * (b1 + b4) * (b2 + b4) * (b3 + b4)
}

/// The function `F` bounding the fixed-`β4` tetrahedron:
/// `β4(1/4 − β4) + √(β1β2β3) − β1β2 − β1β3 − β2β3 − (β1+β2+β3)β4`.
pub fn f_value(b: &Beta) -> Result<f64> {
    let [b1, b2, b3, b4, _, _] = b.0;
    let prod = b1 * b2 * b3;
    if prod < -NEG_PRODUCT_TOL {
        return Err(Error::NegativeProduct(prod));
    }
    Ok(b4 * (0.25 - b4) + prod.max(0.0).sqrt() - b1 * b2 - b1 * b3 - b2 * b3 - (b1 + b2 + b3) * b4)
}

/// The defining conditions of `X` (the first six) and the three conditions
/// they imply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Beta1Range,
    Beta2Range,
    Beta3Range,
    Beta4Range,
    LastFound,
    Beta6,
    Bffgez,
    BottomSurface,
    DeltaBetaCond,
}

impl Condition {
    pub const ALL: [Condition; 9] = [
        Condition::Beta1Range,
        Condition::Beta2Range,
        Condition::Beta3Range,
        Condition::Beta4Range,
        Condition::LastFound,
        Condition::Beta6,
        Condition::Bffgez,
        Condition::BottomSurface,
        Condition::DeltaBetaCond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::Beta1Range => "beta1range",
            Condition::Beta2Range => "beta2range",
            Condition::Beta3Range => "beta3range",
            Condition::Beta4Range => "beta4range",
            Condition::LastFound => "lastfound",
            Condition::Beta6 => "beta6",
            Condition::Bffgez => "bffgez",
            Condition::BottomSurface => "bottomsurface",
            Condition::DeltaBetaCond => "deltabetacond",
        }
    }

    /// True for the single equality condition.
    pub fn is_equality(self) -> bool {
        self == Condition::Beta6
    }

    /// Signed violation: positive means the condition fails by that much.
    /// Inequalities report the negated slack, the equality its absolute
    /// residual.
    pub fn violation(self, residual: f64) -> f64 {
        if self.is_equality() {
            residual
        } else {
            -residual
        }
    }
}

/// Residuals of every condition for one invariant vector.
///
/// Inequality entries hold the slack (nonnegative when satisfied); the
/// `beta6` entry holds the absolute value of the equality residual.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipReport {
    pub in_x: bool,
    pub tol: f64,
    pub residuals: [(Condition, f64); 9],
}

impl MembershipReport {
    pub fn residual(&self, c: Condition) -> f64 {
        self.residuals[c as usize].1
    }

    /// Conditions failing at the report's tolerance.
    pub fn violated(&self) -> Vec<Condition> {
        self.residuals
            .iter()
            .filter(|(c, r)| c.violation(*r) > self.tol)
            .map(|(c, _)| *c)
            .collect()
    }
}

impl Serialize for MembershipReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.residuals.len()))?;
        for (c, r) in &self.residuals {
            m.serialize_entry(c.name(), r)?;
        }
        m.end()
    }
}

/// Evaluates every membership condition for `b`.
pub fn membership(b: &Beta, tol: f64) -> MembershipReport {
    let [b1, b2, b3, b4, b5, b6] = b.0;
    let range = |x: f64| x.min(0.25 - x);
    let lhs = b1 * b2 + b1 * b3 + b2 * b3 + (b1 + b2 + b3) * b4 + b4 * b4;
    let delta = delta_beta(b);
    let bottom = b5 * b5 - 4.0 * b1 * b2 * b3;
    let residuals = [
        (Condition::Beta1Range, range(b1)),
        (Condition::Beta2Range, range(b2)),
        (Condition::Beta3Range, range(b3)),
        (Condition::Beta4Range, range(b4)),
        (Condition::LastFound, 0.25 * b4 + 0.5 * b5 - lhs),
        (Condition::Beta6, (delta * bottom + 4.0 * b6 * b6).abs()),
        (Condition::Bffgez, b4 + b5),
        (Condition::BottomSurface, -bottom),
        (Condition::DeltaBetaCond, delta),
    ];
    let in_x = b.is_finite() && residuals.iter().all(|(c, r)| c.violation(*r) <= tol);
    MembershipReport {
        in_x,
        tol,
        residuals,
    }
}

fn require_member(b: &Beta, tol: f64) -> Result<MembershipReport> {
    let report = membership(b, tol);
    if report.in_x {
        Ok(report)
    } else {
        let violated = if b.is_finite() {
            report
                .violated()
                .iter()
                .map(|c| c.name().to_string())
                .collect()
        } else {
            vec!["finite".to_string()]
        };
        Err(Error::NotInOrbitSpace { violated })
    }
}

/// Assigns a member of `X` to its cell.
///
/// Equality-defined (lower-dimensional) cells are tested first, so a vector
/// within `tol` of a boundary lands on the boundary cell.
pub fn classify(b: &Beta, tol: f64) -> Result<Cell3> {
    require_member(b, tol)?;
    let [b1, b2, b3, b4, b5, _] = b.0;
    let bs = [b1, b2, b3];
    let nonzero: Vec<usize> = (0..3).filter(|&i| bs[i] > tol).collect();
    let prod = (b1 * b2 * b3).max(0.0);

    if (b4 - 0.25).abs() <= tol {
        return Ok(Cell3::Ghz0);
    }

    if b4 <= tol {
        const AXES: [(Cell3, Cell3); 3] = [
            (Cell3::ABc0, Cell3::ABc1),
            (Cell3::BAc0, Cell3::BAc1),
            (Cell3::CAb0, Cell3::CAb1),
        ];
        let axis = |i: usize| {
            let (end, open) = AXES[i];
            if (bs[i] - 0.25).abs() <= tol {
                end
            } else {
                open
            }
        };
        return match nonzero.as_slice() {
            [] => Ok(Cell3::ABC0),
            [i] => Ok(axis(*i)),
            [i, j] => {
                // Off-axis points in this slice have a product bounded by the
                // tolerance; they belong to the axis of the dominant coordinate.
                if bs[*i] * bs[*j] <= 4.0 * tol {
                    Ok(axis(if bs[*i] >= bs[*j] { *i } else { *j }))
                } else {
                    Err(Error::Unclassifiable(b.0))
                }
            }
            _ => {
                let s2 = b1 * b2 + b1 * b3 + b2 * b3;
                if (s2 - prod.sqrt()).abs() <= tol {
                    Ok(Cell3::W2)
                } else {
                    Ok(Cell3::W3)
                }
            }
        };
    }

    let clamped = Beta([b1.max(0.0), b2.max(0.0), b3.max(0.0), b4, b5, b.b6()]);
    let f = f_value(&clamped)?;
    let on_f = f.abs() <= tol;
    match nonzero.as_slice() {
        [] => Ok(Cell3::Ghz1),
        [i] => {
            const GHZ: [(Cell3, Cell3); 3] = [
                (Cell3::AGhz1, Cell3::AGhz2),
                (Cell3::BGhz1, Cell3::BGhz2),
                (Cell3::CGhz1, Cell3::CGhz2),
            ];
            let (edge, face) = GHZ[*i];
            if (bs[*i] - (0.25 - b4)).abs() <= tol {
                Ok(edge)
            } else {
                Ok(face)
            }
        }
        [i, j] => {
            let zero = 3 - i - j;
            let (boundary, open) = match zero {
                0 => (Cell3::BC2, Cell3::BC3),
                1 => (Cell3::AC2, Cell3::AC3),
                _ => (Cell3::AB2, Cell3::AB3),
            };
            Ok(if on_f { boundary } else { open })
        }
        _ => {
            if on_f {
                Ok(Cell3::ABC3)
            } else if (b5 - 2.0 * prod.sqrt()).abs() <= tol {
                Ok(Cell3::Four)
            } else {
                Ok(Cell3::Five)
            }
        }
    }
}

/// Assigns a two-qubit concurrence value to its cell.
pub fn classify_two_qubit(concurrence: f64, tol: f64) -> Result<Cell2> {
    if !(concurrence >= -tol && concurrence <= 1.0 + tol) {
        return Err(Error::OutOfRange {
            what: "concurrence must lie in [0, 1]",
            value: concurrence,
        });
    }
    Ok(if concurrence <= tol {
        Cell2::Sep
    } else if concurrence >= 1.0 - tol {
        Cell2::Epr
    } else {
        Cell2::Partial
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_beta_examples() {
        assert_eq!(delta_beta(&Beta([0.0; 6])), 0.0);
        assert!(delta_beta(&Beta::new(0.0, 0.0, 0.0, 0.25, 0.0, 0.0)).abs() < 1e-17);
        assert_eq!(delta_beta(&Beta::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.0)), 1.0);
    }

    #[test]
    fn f_examples() {
        let f = f_value(&Beta::new(0.03, 0.03, 0.03, 0.125, 0.0, 0.0)).unwrap();
        // 1/64 + 0.03^1.5 - 3(0.03)^2 - 3(0.03)(1/8)
        assert!((f - 0.006_871_152_422_706_632).abs() < 1e-15);
        assert_eq!(
            f_value(&Beta::new(0.0, 0.0, 0.0, 0.125, 0.0, 0.0)).unwrap(),
            1.0 / 64.0
        );
        assert_eq!(
            f_value(&Beta::new(0.0, 0.0, 0.0, 0.25, 0.0, 0.0)).unwrap(),
            0.0
        );
        assert!(matches!(
            f_value(&Beta::new(-0.1, 0.1, 0.1, 0.1, 0.0, 0.0)),
            Err(Error::NegativeProduct(_))
        ));
    }

    #[test]
    fn membership_examples() {
        let ghz = membership(&Beta::new(0.0, 0.0, 0.0, 0.25, 0.0, 0.0), DEFAULT_TOL);
        assert!(ghz.in_x);
        let bad = membership(&Beta::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.0), DEFAULT_TOL);
        assert!(!bad.in_x);
        assert!(bad.violated().contains(&Condition::BottomSurface));
        let n = 1.0 / 9.0;
        let w = membership(&Beta::new(n, n, n, 0.0, 2.0 / 27.0, 0.0), DEFAULT_TOL);
        assert!(w.in_x);
        assert!(w.residual(Condition::Beta6) < 1e-17);
    }

    #[test]
    fn nan_is_not_a_member() {
        let r = membership(&Beta::new(f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0), DEFAULT_TOL);
        assert!(!r.in_x);
    }

    #[test]
    fn report_serializes_as_named_map() {
        let r = membership(&Beta([0.0; 6]), DEFAULT_TOL);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v.as_object().unwrap().len(), 9);
        assert!(v.get("deltabetacond").is_some());
    }

    #[test]
    fn classify_examples() {
        let tol = DEFAULT_TOL;
        let ghz = classify(&Beta::new(0.0, 0.0, 0.0, 0.25, 0.0, 0.0), tol).unwrap();
        assert_eq!(ghz, Cell3::Ghz0);
        assert_eq!(ghz.info().acin_type, Some("2b"));
        assert_eq!(ghz.info().orbit_dimension, 7);
        let n = 1.0 / 9.0;
        let w = classify(&Beta::new(n, n, n, 0.0, 2.0 / 27.0, 0.0), tol).unwrap();
        assert_eq!(w, Cell3::W2);
        assert_eq!(
            (w.info().acin_type, w.info().orbit_dimension),
            (Some("3a"), 8)
        );
        let abc = classify(&Beta::new(0.25, 0.0, 0.0, 0.0, 0.0, 0.0), tol).unwrap();
        assert_eq!(abc, Cell3::ABc0);
        assert_eq!(abc.info().orbit_dimension, 5);
    }

    #[test]
    fn classify_rejects_non_members() {
        assert!(matches!(
            classify(&Beta::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.0), DEFAULT_TOL),
            Err(Error::NotInOrbitSpace { .. })
        ));
    }

    #[test]
    fn classify_axis_within_tolerance_of_origin_plane() {
        // β3 is a rounding artifact; the point sits on the β1 axis.
        let b = Beta::new(0.2, 2e-9, 0.0, 0.0, 0.0, 0.0);
        assert!(membership(&b, DEFAULT_TOL).in_x);
        assert_eq!(classify(&b, DEFAULT_TOL).unwrap(), Cell3::ABc1);
    }

    #[test]
    fn two_qubit_cells() {
        assert_eq!(classify_two_qubit(0.0, DEFAULT_TOL).unwrap(), Cell2::Sep);
        assert_eq!(classify_two_qubit(1.0, DEFAULT_TOL).unwrap(), Cell2::Epr);
        assert_eq!(
            classify_two_qubit(0.5, DEFAULT_TOL).unwrap(),
            Cell2::Partial
        );
        assert!(classify_two_qubit(1.1, DEFAULT_TOL).is_err());
        assert!(classify_two_qubit(f64::NAN, DEFAULT_TOL).is_err());
    }
}
