//! Numerical verification: orbit dimensions from the tangent-space rank, and
//! seeded Monte Carlo checks of invariance, membership, the synthesis
//! round-trip and the qubit-permutation law.
//!
//! Every batch check derives the seed of sample `m` from `(seed, m)`, runs
//! samples in parallel, and folds results in sample order, so a report is
//! bit-identical for a fixed `(parameters, seed)` whatever the worker count.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{invariants_j, Beta};
use crate::orbitspace::{membership, synthesize, SynthesisCase};
use crate::qstate::{
    apply_local_unitary, apply_qubit_permutation, derive_seed, haar_random_state3,
    random_local_unitary, Mat2, Permutation, PureState2, PureState3,
};

/// Minimum ratio between the smallest retained and largest discarded
/// singular value for a rank decision to count as determinate.
pub const RANK_GAP: f64 = 1e3;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Failure entries kept per report; `failure_count` has the full tally.
const MAX_RECORDED_FAILURES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentRankResult {
    pub dimension: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Smallest retained singular value over the larger of the largest
    /// discarded one and the threshold.
    pub gap: f64,
    /// False when `gap < RANK_GAP`; the dimension should not be trusted.
    pub determinate: bool,
}

fn generators() -> [Mat2; 3] {
    let z = Complex64::ZERO;
    let i = Complex64::I;
    let one = Complex64::ONE;
    [
        [[z, i], [i, z]],      // iσx
        [[z, one], [-one, z]], // iσy
        [[i, z], [z, -i]],     // iσz
    ]
}

fn tangent_rank(
    columns: Vec<Vec<Complex64>>,
    psi: &[Complex64],
    rank_tol: f64,
) -> TangentRankResult {
    let dim = psi.len();
    let mut m = DMatrix::<f64>::zeros(2 * dim, columns.len());
    for (col, v) in columns.iter().enumerate() {
        // Remove the components along ψ and iψ.
        let overlap: Complex64 = psi.iter().zip(v).map(|(p, x)| p.conj() * x).sum();
        for (r, (x, p)) in v.iter().zip(psi).enumerate() {
            let w = x - overlap * p;
            m[(r, col)] = w.re;
            m[(dim + r, col)] = w.im;
        }
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let threshold = rank_tol * sv.first().copied().unwrap_or(0.0).max(1.0);
    let dimension = sv.iter().filter(|&&s| s > threshold).count();
    let gap = if dimension == 0 {
        0.0
    } else {
        let discarded = sv.get(dimension).copied().unwrap_or(0.0);
        sv[dimension - 1] / discarded.max(threshold)
    };
    TangentRankResult {
        dimension,
        singular_values: sv,
        gap,
        determinate: gap >= RANK_GAP,
    }
}

/// Dimension of the local-unitary orbit through `psi` in projective space:
/// the rank of the nine tangent vectors `(iσ_a on qubit k) ψ` after
/// projecting out the complex line through `ψ`.
pub fn orbit_dimension3(psi: &PureState3, rank_tol: f64) -> TangentRankResult {
    let cols = (0..3)
        .flat_map(|q| {
            generators()
                .into_iter()
                .map(move |g| PureState3::apply_single_raw(psi.amplitudes(), &g, q).to_vec())
        })
        .collect();
    tangent_rank(cols, psi.amplitudes(), rank_tol)
}

/// Two-qubit analogue of [`orbit_dimension3`] with six generators.
pub fn orbit_dimension2(psi: &PureState2, rank_tol: f64) -> TangentRankResult {
    let cols = (0..2)
        .flat_map(|q| {
            generators()
                .into_iter()
                .map(move |g| PureState2::apply_single_raw(psi.amplitudes(), &g, q).to_vec())
        })
        .collect();
    tangent_rank(cols, psi.amplitudes(), rank_tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub sample: u64,
    pub seed: u64,
    pub condition: String,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub samples: u64,
    pub tol: f64,
    /// Worst residual per checked condition. A failure is any residual
    /// above `tol`.
    pub worst: BTreeMap<String, f64>,
    pub failures: Vec<Failure>,
    pub failure_count: u64,
}

impl VerificationReport {
    fn new(tol: f64) -> Self {
        Self {
            samples: 0,
            tol,
            worst: BTreeMap::new(),
            failures: Vec::new(),
            failure_count: 0,
        }
    }

    fn record(&mut self, sample: u64, seed: u64, condition: &str, residual: f64) {
        let w = self
            .worst
            .entry(condition.to_string())
            .or_insert(f64::NEG_INFINITY);
        // NaN counts as the worst possible outcome.
        if residual.is_nan() || residual > *w {
            *w = if residual.is_nan() {
                f64::INFINITY
            } else {
                residual
            };
        }
        if residual.is_nan() || residual > self.tol {
            self.failure_count += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(Failure {
                    sample,
                    seed,
                    condition: condition.to_string(),
                    residual,
                });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

type Row = (u64, Vec<(String, f64)>);

fn fold_rows(rows: Vec<Row>, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::new(tol);
    for (m, (seed, entries)) in rows.into_iter().enumerate() {
        report.samples += 1;
        for (cond, r) in entries {
            report.record(m as u64, seed, &cond, r);
        }
    }
    report
}

fn membership_rows(b: &Beta, tol: f64) -> Vec<(String, f64)> {
    let rep = membership(b, tol);
    rep.residuals
        .iter()
        .map(|(c, r)| (c.name().to_string(), c.violation(*r)))
        .collect()
}

/// Checks `J(Uψ) = J(ψ)` componentwise on `trials` random pairs.
pub fn check_lu_invariance(trials: u64, seed: u64, tol: f64) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let rows = (0..trials)
        .into_par_iter()
        .map(|m| {
            let s = derive_seed(seed, m);
            let psi = haar_random_state3(derive_seed(s, 0));
            let u = random_local_unitary(derive_seed(s, 1));
            let a = invariants_j(&psi);
            let b = invariants_j(&apply_local_unitary(&u, &psi));
            let entries = (0..6)
                .map(|k| (format!("J{}", k + 1), (a.0[k] - b.0[k]).abs()))
                .collect();
            (s, entries)
        })
        .collect();
    Ok(fold_rows(rows, tol))
}

/// Draws Haar states and checks that their invariants satisfy every
/// membership condition. Worst residuals are signed violations: negative
/// values are margins.
pub fn monte_carlo_membership(samples: u64, seed: u64, tol: f64) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(Error::ZeroTrials);
    }
    let rows = (0..samples)
        .into_par_iter()
        .map(|m| {
            let s = derive_seed(seed, m);
            (
                s,
                membership_rows(&invariants_j(&haar_random_state3(s)), tol),
            )
        })
        .collect();
    Ok(fold_rows(rows, tol))
}

/// Membership check over explicit vectors; the `seed` column holds the index.
pub fn check_membership_of(betas: &[Beta], tol: f64) -> VerificationReport {
    let rows = betas
        .iter()
        .enumerate()
        .map(|(m, b)| (m as u64, membership_rows(b, tol)))
        .collect();
    fold_rows(rows, tol)
}

/// Induced action on `(J1, J2, J3)`: `J_{p(q)}(pψ) = J_q(ψ)`.
fn permutation_entries(psi: &PureState3, base: &Beta, p: &Permutation) -> Vec<(String, f64)> {
    let moved = invariants_j(&apply_qubit_permutation(p, psi));
    let mut out = Vec::with_capacity(6);
    for q in 0..3 {
        out.push((
            format!("J{}", q + 1),
            (moved.0[p.apply(q)] - base.0[q]).abs(),
        ));
    }
    for k in 3..6 {
        out.push((format!("J{}", k + 1), (moved.0[k] - base.0[k]).abs()));
    }
    out
}

/// Checks the permutation law on a single state over all six relabelings.
/// Sample `m` is the `m`-th permutation of [`Permutation::all`].
pub fn permutation_symmetry_check(psi: &PureState3, tol: f64) -> VerificationReport {
    let base = invariants_j(psi);
    let rows = Permutation::all(3)
        .iter()
        .enumerate()
        .map(|(m, p)| (m as u64, permutation_entries(psi, &base, p)))
        .collect();
    fold_rows(rows, tol)
}

/// Permutation law on `trials` Haar states (six relabelings each).
pub fn check_permutation_law(trials: u64, seed: u64, tol: f64) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let perms = Permutation::all(3);
    let rows = (0..trials)
        .into_par_iter()
        .map(|m| {
            let s = derive_seed(seed, m);
            let psi = haar_random_state3(s);
            let base = invariants_j(&psi);
            let mut worst: Vec<(String, f64)> = Vec::new();
            for p in &perms {
                for (k, (name, r)) in permutation_entries(&psi, &base, p).into_iter().enumerate() {
                    match worst.get_mut(k) {
                        Some(w) => w.1 = w.1.max(r),
                        None => worst.push((name, r)),
                    }
                }
            }
            (s, worst)
        })
        .collect();
    Ok(fold_rows(rows, tol))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTripReport {
    pub report: VerificationReport,
    /// Number of samples handled by each synthesis case.
    pub cases: BTreeMap<String, u64>,
}

/// For Haar states, checks `‖J(synthesize(J(ψ))) − J(ψ)‖∞ ≤ tol`.
pub fn check_synthesis_round_trip(samples: u64, seed: u64, tol: f64) -> Result<RoundTripReport> {
    if samples == 0 {
        return Err(Error::ZeroTrials);
    }
    let rows: Vec<(u64, f64, Option<SynthesisCase>)> = (0..samples)
        .into_par_iter()
        .map(|m| {
            let s = derive_seed(seed, m);
            let b = invariants_j(&haar_random_state3(s));
            match synthesize(&b, crate::orbitspace::DEFAULT_TOL) {
                Ok(r) => (
                    s,
                    invariants_j(&r.state.to_state()).max_abs_diff(&b),
                    Some(r.case_label),
                ),
                Err(_) => (s, f64::INFINITY, None),
            }
        })
        .collect();
    let mut cases = BTreeMap::new();
    let mut table = Vec::with_capacity(rows.len());
    for (s, miss, case) in rows {
        let label = case.map_or("error", |c| c.label());
        *cases.entry(label.to_string()).or_insert(0) += 1;
        table.push((s, vec![("roundtrip".to_string(), miss)]));
    }
    Ok(RoundTripReport {
        report: fold_rows(table, tol),
        cases,
    })
}
