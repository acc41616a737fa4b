//! Polynomial local-unitary invariants of three-qubit states, the derived
//! coordinates `J1..J6`, closed forms on standard states, and the two-qubit
//! concurrence.

mod contraction;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{Permutation, PureState2, PureState3};
use contraction::Factor;

/// Largest supported degree of `P^n_{σ,τ}` (2^18 literal terms).
pub const MAX_DEGREE: usize = 6;

const IMAG_RESIDUE_TOL: f64 = 1e-12;
const NEG_I5_TOL: f64 = 1e-12;

/// Which evaluation route to use for `P^n_{σ,τ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalPath {
    /// The literal `2^{3n}`-term nested sum.
    Literal,
    /// Pairwise contraction of the tensor network.
    Contraction,
}

fn check_degree(n: usize, sigma: &Permutation, tau: &Permutation) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n));
    }
    for p in [sigma, tau] {
        if p.len() != n {
            return Err(Error::PermutationSize {
                expected: n,
                found: p.len(),
            });
        }
    }
    Ok(())
}

/// Evaluates
/// `P^n_{σ,τ}(ψ) = Σ Π_m ψ_{i_m j_m k_m} conj(ψ_{i_m j_σ(m) k_τ(m)})`
/// by tensor contraction.
pub fn eval_p(
    n: usize,
    sigma: &Permutation,
    tau: &Permutation,
    psi: &PureState3,
) -> Result<Complex64> {
    eval_p_with(EvalPath::Contraction, n, sigma, tau, psi)
}

pub fn eval_p_with(
    path: EvalPath,
    n: usize,
    sigma: &Permutation,
    tau: &Permutation,
    psi: &PureState3,
) -> Result<Complex64> {
    check_degree(n, sigma, tau)?;
    Ok(match path {
        EvalPath::Literal => literal_sum(n, sigma, tau, psi),
        EvalPath::Contraction => contracted(n, sigma, tau, psi),
    })
}

fn literal_sum(n: usize, sigma: &Permutation, tau: &Permutation, psi: &PureState3) -> Complex64 {
    let a = psi.amplitudes();
    let conj: Vec<Complex64> = a.iter().map(|z| z.conj()).collect();
    let mut total = Complex64::ZERO;
    for idx in 0..1usize << (3 * n) {
        let slot = |m: usize| (idx >> (3 * m)) & 7;
        let mut prod = Complex64::ONE;
        for m in 0..n {
            let s = slot(m);
            let i = s >> 2;
            let j = (slot(sigma.apply(m)) >> 1) & 1;
            let k = slot(tau.apply(m)) & 1;
            prod *= a[s] * conj[(i << 2) | (j << 1) | k];
        }
        total += prod;
    }
    total
}

fn contracted(n: usize, sigma: &Permutation, tau: &Permutation, psi: &PureState3) -> Complex64 {
    // Labels: j_m = m, k_m = n + m. The i_m sums pair each ψ with its own
    // conjugate factor and are done first.
    let factors = (0..n)
        .map(|m| {
            let mut labels = vec![m, n + m];
            for l in [sigma.apply(m), n + tau.apply(m)] {
                if !labels.contains(&l) {
                    labels.push(l);
                }
            }
            let (jl, kl) = (sigma.apply(m), n + tau.apply(m));
            let pos = |l: usize| labels.iter().position(|&x| x == l).unwrap();
            let (pj, pk, pjs, pkt) = (pos(m), pos(n + m), pos(jl), pos(kl));
            Factor::from_fn(labels.clone(), |v| {
                (0..2)
                    .map(|i| psi.get(i, v[pj], v[pk]) * psi.get(i, v[pjs], v[pkt]).conj())
                    .sum()
            })
        })
        .collect();
    contraction::contract_all(factors)
}

/// Cayley's 2×2×2 hyperdeterminant of the amplitude tensor.
///
/// With `a = ψ`:
///
/// ```text
///   a000²a111² + a001²a110² + a010²a101² + a100²a011²
/// - 2 (a000a111a001a110 + a000a111a010a101 + a000a111a100a011
///    + a001a110a010a101 + a001a110a100a011 + a010a101a100a011)
/// + 4 (a000a011a101a110 + a111a100a010a001)
/// ```
///
/// `|hdet(GHZ)| = 1/4` and `hdet(W) = 0`; four times the modulus is the
/// three-tangle.
pub fn hyperdeterminant(psi: &PureState3) -> Complex64 {
    let a = psi.amplitudes();
    let (a000, a001, a010, a011) = (a[0], a[1], a[2], a[3]);
    let (a100, a101, a110, a111) = (a[4], a[5], a[6], a[7]);
    // The four antipodal pairs.
    let p0 = a000 * a111;
    let p1 = a001 * a110;
    let p2 = a010 * a101;
    let p3 = a100 * a011;
    p0 * p0 + p1 * p1 + p2 * p2 + p3 * p3
        - 2.0 * (p0 * p1 + p0 * p2 + p0 * p3 + p1 * p2 + p1 * p3 + p2 * p3)
        + 4.0 * (a000 * a011 * a101 * a110 + a111 * a100 * a010 * a001)
}

/// The invariants `I1..I6`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IVector {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: f64,
    pub i6: f64,
}

impl IVector {
    pub fn to_array(&self) -> [f64; 6] {
        [self.i1, self.i2, self.i3, self.i4, self.i5, self.i6]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self {
            i1: a[0],
            i2: a[1],
            i3: a[2],
            i4: a[3],
            i5: a[4],
            i6: a[5],
        }
    }
}

/// `(n, σ, τ)` for the polynomial invariants `I1, I2, I3, I4, I6`.
pub fn invariant_polynomials() -> [(usize, Permutation, Permutation); 5] {
    let p = |s: &str, n| Permutation::parse(s, n).expect("valid cycle");
    [
        (2, p("e", 2), p("(12)", 2)),
        (2, p("(12)", 2), p("e", 2)),
        (2, p("(12)", 2), p("(12)", 2)),
        (3, p("(123)", 3), p("(132)", 3)),
        (6, p("(34)(56)", 6), p("(13524)", 6)),
    ]
}

fn real_part(z: Complex64, which: &str) -> f64 {
    assert!(
        z.im.abs() <= IMAG_RESIDUE_TOL,
        "{which} has imaginary residue {:e}",
        z.im
    );
    z.re
}

/// Evaluates `I1..I6` along the given route.
pub fn invariants_i_with(path: EvalPath, psi: &PureState3) -> IVector {
    let polys = invariant_polynomials();
    let vals: Vec<Complex64> = polys
        .iter()
        .map(|(n, s, t)| eval_p_with(path, *n, s, t, psi).expect("degree within range"))
        .collect();
    IVector {
        i1: real_part(vals[0], "I1"),
        i2: real_part(vals[1], "I2"),
        i3: real_part(vals[2], "I3"),
        i4: real_part(vals[3], "I4"),
        i5: hyperdeterminant(psi).norm_sqr(),
        i6: vals[4].im,
    }
}

/// Evaluates `I1..I6` by contraction.
pub fn invariants_i(psi: &PureState3) -> IVector {
    invariants_i_with(EvalPath::Contraction, psi)
}

/// A point `(β1, ..., β6)` of R^6.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Beta(pub [f64; 6]);

impl Beta {
    pub fn new(b1: f64, b2: f64, b3: f64, b4: f64, b5: f64, b6: f64) -> Self {
        Self([b1, b2, b3, b4, b5, b6])
    }

    pub fn b1(&self) -> f64 {
        self.0[0]
    }
    pub fn b2(&self) -> f64 {
        self.0[1]
    }
    pub fn b3(&self) -> f64 {
        self.0[2]
    }
    pub fn b4(&self) -> f64 {
        self.0[3]
    }
    pub fn b5(&self) -> f64 {
        self.0[4]
    }
    pub fn b6(&self) -> f64 {
        self.0[5]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Componentwise sup-norm distance.
    pub fn max_abs_diff(&self, other: &Beta) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Maps `I1..I6` to the coordinates `J1..J6`.
pub fn invariants_j_from_i(i: &IVector) -> Result<Beta> {
    if i.i5 < -NEG_I5_TOL {
        return Err(Error::NegativeI5(i.i5));
    }
    let r = i.i5.max(0.0).sqrt();
    Ok(Beta([
        (1.0 - i.i1 - i.i2 + i.i3 - 2.0 * r) / 4.0,
        (1.0 - i.i1 + i.i2 - i.i3 - 2.0 * r) / 4.0,
        (1.0 + i.i1 - i.i2 - i.i3 - 2.0 * r) / 4.0,
        r,
        5.0 / 12.0 - (i.i1 + i.i2 + i.i3) / 4.0 + i.i4 / 3.0 - r / 2.0,
        i.i6,
    ]))
}

/// The invariant map `J: S^15 → R^6`.
pub fn invariants_j(psi: &PureState3) -> Beta {
    invariants_j_from_i(&invariants_i(psi)).expect("I5 is a squared modulus")
}

/// A state in the five-term standard form
/// `λ0|000> + c1|100> + λ2|101> + λ3|110> + λ4|111>` with `c1 = λ1 e^{iφ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardState {
    pub lam0: f64,
    pub c1: Complex64,
    pub lam2: f64,
    pub lam3: f64,
    pub lam4: f64,
}

impl StandardState {
    pub fn norm_sqr(&self) -> f64 {
        self.lam0 * self.lam0
            + self.c1.norm_sqr()
            + self.lam2 * self.lam2
            + self.lam3 * self.lam3
            + self.lam4 * self.lam4
    }

    /// Rescales to unit norm.
    pub fn normalized(&self) -> Self {
        let s = self.norm_sqr().sqrt();
        Self {
            lam0: self.lam0 / s,
            c1: self.c1 / s,
            lam2: self.lam2 / s,
            lam3: self.lam3 / s,
            lam4: self.lam4 / s,
        }
    }

    /// The eight-amplitude state vector.
    pub fn to_state(&self) -> PureState3 {
        let r = |x: f64| Complex64::new(x, 0.0);
        let mut a = [Complex64::ZERO; 8];
        a[0] = r(self.lam0);
        a[4] = self.c1;
        a[5] = r(self.lam2);
        a[6] = r(self.lam3);
        a[7] = r(self.lam4);
        PureState3::new(a).expect("standard state is nonzero")
    }
}

/// Closed-form `J1..J6` on a standard state.
pub fn j_of_standard(chi: &StandardState) -> Result<Beta> {
    let nrm = chi.norm_sqr();
    if (nrm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(nrm));
    }
    let StandardState {
        lam0,
        c1,
        lam2,
        lam3,
        lam4,
    } = *chi;
    let l0s = lam0 * lam0;
    // λ1 cos φ and λ1 sin φ
    let (lc, ls) = (c1.re, c1.im);
    let j1 = (c1 * lam4 - lam2 * lam3).norm_sqr();
    let j2 = l0s * lam2 * lam2;
    let j3 = l0s * lam3 * lam3;
    let j4 = l0s * lam4 * lam4;
    let j5 = 2.0 * l0s * lam2 * lam2 * lam3 * lam3 - 2.0 * l0s * lam2 * lam3 * lam4 * lc;
    let bracket = 2.0 * l0s * lam4 * lam4 + 2.0 * c1.norm_sqr() * lam4 * lam4
        - lam4 * lam4
        - 2.0 * lam2 * lam3 * lam4 * lc;
    let j6 = l0s * l0s * lam2 * lam3 * lam4 * ls * bracket;
    Ok(Beta([j1, j2, j3, j4, j5, j6]))
}

/// Two-qubit concurrence `2|ψ00 ψ11 − ψ01 ψ10|`.
pub fn concurrence(psi: &PureState2) -> f64 {
    2.0 * (psi.get(0, 0) * psi.get(1, 1) - psi.get(0, 1) * psi.get(1, 0)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::haar_random_state3;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn assert_beta(b: Beta, expect: [f64; 6], tol: f64) {
        for (k, (got, want)) in b.0.iter().zip(expect).enumerate() {
            assert!(
                (got - want).abs() <= tol,
                "component {} = {got} expected {want}",
                k + 1
            );
        }
    }

    fn e(n: usize) -> Permutation {
        Permutation::identity(n)
    }

    #[test]
    fn p_degree_one_and_two_are_one() {
        for seed in 0..5 {
            let psi = haar_random_state3(seed);
            for n in [1, 2] {
                let v = eval_p(n, &e(n), &e(n), &psi).unwrap();
                assert!((v - 1.0).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn p_on_basis_state() {
        let t = Permutation::parse("(12)", 2).unwrap();
        let psi = PureState3::basis(0, 0, 0);
        for path in [EvalPath::Literal, EvalPath::Contraction] {
            let v = eval_p_with(path, 2, &e(2), &t, &psi).unwrap();
            assert!((v - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn degree_guard() {
        let psi = PureState3::ghz();
        assert_eq!(eval_p(7, &e(7), &e(7), &psi), Err(Error::DegreeTooLarge(7)));
        assert_eq!(eval_p(0, &e(0), &e(0), &psi), Err(Error::DegreeTooLarge(0)));
        assert!(matches!(
            eval_p(2, &e(3), &e(2), &psi),
            Err(Error::PermutationSize { .. })
        ));
    }

    #[test]
    fn paths_agree_on_random_permutations() {
        let psi = haar_random_state3(42);
        for n in 1..=4 {
            let perms = Permutation::all(n);
            for s in perms.iter().step_by(3) {
                for t in perms.iter().step_by(2) {
                    let a = eval_p_with(EvalPath::Literal, n, s, t, &psi).unwrap();
                    let b = eval_p_with(EvalPath::Contraction, n, s, t, &psi).unwrap();
                    assert!(
                        (a - b).norm() <= 1e-12 * a.norm().max(1e-3),
                        "n={n} {s} {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn hyperdeterminant_named_states() {
        assert_eq!(
            hyperdeterminant(&PureState3::basis(0, 0, 0)),
            Complex64::ZERO
        );
        assert!((hyperdeterminant(&PureState3::ghz()).norm() - 0.25).abs() < 1e-15);
        assert!(hyperdeterminant(&PureState3::w()).norm() < 1e-15);
    }

    #[test]
    fn i_vector_basis_and_ghz() {
        let i = invariants_i(&PureState3::basis(0, 0, 0));
        for (got, want) in i.to_array().iter().zip([1.0, 1.0, 1.0, 1.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let g = invariants_i(&PureState3::ghz());
        for v in [g.i1, g.i2, g.i3] {
            assert!((v - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn real_state_has_zero_i6() {
        let psi = PureState3::from_real([0.3, -0.1, 0.5, 0.2, -0.4, 0.1, 0.6, 0.2]).unwrap();
        assert!(invariants_i(&psi).i6.abs() < 1e-14);
    }

    #[test]
    fn j_from_i_examples() {
        let prod = IVector::from_array([1.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        assert_beta(invariants_j_from_i(&prod).unwrap(), [0.0; 6], 1e-15);
        let ghz = invariants_i(&PureState3::ghz());
        assert_beta(
            invariants_j_from_i(&ghz).unwrap(),
            [0.0, 0.0, 0.0, 0.25, 0.0, 0.0],
            1e-12,
        );
        let w = invariants_i(&PureState3::w());
        let ninth = 1.0 / 9.0;
        assert_beta(
            invariants_j_from_i(&w).unwrap(),
            [ninth, ninth, ninth, 0.0, 2.0 / 27.0, 0.0],
            1e-12,
        );
    }

    #[test]
    fn negative_i5_rejected_and_tiny_clamped() {
        let bad = IVector::from_array([1.0, 1.0, 1.0, 1.0, -1e-6, 0.0]);
        assert_eq!(invariants_j_from_i(&bad), Err(Error::NegativeI5(-1e-6)));
        let tiny = IVector::from_array([1.0, 1.0, 1.0, 1.0, -1e-14, 0.0]);
        assert_eq!(invariants_j_from_i(&tiny).unwrap().b4(), 0.0);
    }

    #[test]
    fn j_named_states() {
        assert_beta(invariants_j(&PureState3::basis(0, 0, 0)), [0.0; 6], 1e-14);
        assert_beta(
            invariants_j(&PureState3::one_epr()),
            [0.25, 0.0, 0.0, 0.0, 0.0, 0.0],
            1e-14,
        );
        assert_beta(
            invariants_j(&PureState3::ghz()),
            [0.0, 0.0, 0.0, 0.25, 0.0, 0.0],
            1e-14,
        );
    }

    #[test]
    fn standard_form_examples() {
        let ghz = StandardState {
            lam0: H,
            c1: Complex64::ZERO,
            lam2: 0.0,
            lam3: 0.0,
            lam4: H,
        };
        assert_beta(
            j_of_standard(&ghz).unwrap(),
            [0.0, 0.0, 0.0, 0.25, 0.0, 0.0],
            1e-15,
        );
        let s3 = StandardState {
            lam0: H,
            c1: Complex64::ZERO,
            lam2: 0.0,
            lam3: H,
            lam4: 0.0,
        };
        assert_beta(
            j_of_standard(&s3).unwrap(),
            [0.0, 0.0, 0.25, 0.0, 0.0, 0.0],
            1e-15,
        );
        let prod = StandardState {
            lam0: 1.0,
            c1: Complex64::ZERO,
            lam2: 0.0,
            lam3: 0.0,
            lam4: 0.0,
        };
        assert_beta(j_of_standard(&prod).unwrap(), [0.0; 6], 0.0);
    }

    #[test]
    fn standard_form_rejects_unnormalized() {
        let s = StandardState {
            lam0: 1.0,
            c1: Complex64::ONE,
            lam2: 0.0,
            lam3: 0.0,
            lam4: 0.0,
        };
        assert!(matches!(j_of_standard(&s), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn closed_form_matches_full_evaluation() {
        let chi = StandardState {
            lam0: 0.5,
            c1: Complex64::from_polar(0.4, 0.7),
            lam2: 0.3,
            lam3: 0.45,
            lam4: 0.35,
        }
        .normalized();
        let a = j_of_standard(&chi).unwrap();
        let b = invariants_j(&chi.to_state());
        assert!(a.max_abs_diff(&b) < 1e-14, "{a} vs {b}");
    }

    #[test]
    fn concurrence_examples() {
        let s00 = PureState2::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(concurrence(&s00), 0.0);
        assert!((concurrence(&PureState2::epr()) - 1.0).abs() < 1e-15);
        let part = PureState2::from_real([3.0_f64.sqrt() / 2.0, 0.0, 0.0, 0.5]).unwrap();
        assert!((concurrence(&part) - 3.0_f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
