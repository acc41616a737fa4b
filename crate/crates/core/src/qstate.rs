//! Pure two- and three-qubit states, local unitaries, qubit relabelings and
//! seeded Haar sampling.
//!
//! Amplitudes are stored in flat order: for three qubits the basis state
//! `|ijk>` lives at index `4i + 2j + k`, with qubit 1 the most significant bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// A complex amplitude.
pub type ComplexAmp = Complex64;

/// A 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO_CUTOFF: f64 = 1e-300;
const UNITARY_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn normalize<const N: usize>(mut amp: [Complex64; N]) -> Result<[Complex64; N]> {
    if let Some(idx) = amp
        .iter()
        .position(|a| !a.re.is_finite() || !a.im.is_finite())
    {
        return Err(Error::NonFinite(idx));
    }
    if amp.iter().all(|a| a.norm() < ZERO_CUTOFF) {
        return Err(Error::ZeroVector);
    }
    // Scale by the largest modulus first so tiny (but nonzero) vectors
    // survive squaring.
    let scale = amp.iter().map(|a| a.norm()).fold(0.0_f64, f64::max);
    for a in amp.iter_mut() {
        *a /= scale;
    }
    let norm = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amp.iter_mut() {
        *a /= norm;
    }
    Ok(amp)
}

/// A normalized three-qubit state vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState3 {
    amp: [Complex64; 8],
}

impl PureState3 {
    /// Builds a state from eight amplitudes, rescaling to unit norm.
    pub fn new(amps: [Complex64; 8]) -> Result<Self> {
        Ok(Self {
            amp: normalize(amps)?,
        })
    }

    pub fn from_slice(amps: &[Complex64]) -> Result<Self> {
        let arr: [Complex64; 8] = amps.try_into().map_err(|_| Error::WrongLength {
            expected: 8,
            found: amps.len(),
        })?;
        Self::new(arr)
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(amps: [f64; 8]) -> Result<Self> {
        Self::new(amps.map(|a| c(a, 0.0)))
    }

    /// The computational basis state `|ijk>`.
    pub fn basis(i: usize, j: usize, k: usize) -> Self {
        assert!(i < 2 && j < 2 && k < 2, "basis labels must be 0 or 1");
        let mut amp = [Complex64::ZERO; 8];
        amp[4 * i + 2 * j + k] = Complex64::ONE;
        Self { amp }
    }

    /// `(|000> + |111>)/√2`.
    pub fn ghz() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h]).expect("nonzero")
    }

    /// `(|100> + |010> + |001>)/√3`.
    pub fn w() -> Self {
        let t = 1.0 / 3.0_f64.sqrt();
        Self::from_real([0.0, t, t, 0.0, t, 0.0, 0.0, 0.0]).expect("nonzero")
    }

    /// `|1> ⊗ (|01> - |10>)/√2`: qubit 1 is unentangled from the Bell pair on 2 and 3.
    pub fn one_epr() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([0.0, 0.0, 0.0, 0.0, 0.0, h, -h, 0.0]).expect("nonzero")
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amp
    }

    /// Amplitude `ψ_ijk`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.amp[4 * i + 2 * j + k]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies a single-qubit matrix to `qubit` (0-based, 0 = qubit 1).
    /// The result is not renormalized.
    pub(crate) fn apply_single_raw(amp: &[Complex64; 8], m: &Mat2, qubit: usize) -> [Complex64; 8] {
        let shift = 2 - qubit;
        let mut out = [Complex64::ZERO; 8];
        for (idx, o) in out.iter_mut().enumerate() {
            let bit = (idx >> shift) & 1;
            let base = idx & !(1 << shift);
            *o = m[bit][0] * amp[base] + m[bit][1] * amp[base | (1 << shift)];
        }
        out
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// A normalized two-qubit state vector, amplitude `ψ_ij` at index `2i + j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState2 {
    amp: [Complex64; 4],
}

impl PureState2 {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        Ok(Self {
            amp: normalize(amps)?,
        })
    }

    pub fn from_slice(amps: &[Complex64]) -> Result<Self> {
        let arr: [Complex64; 4] = amps.try_into().map_err(|_| Error::WrongLength {
            expected: 4,
            found: amps.len(),
        })?;
        Self::new(arr)
    }

    pub fn from_real(amps: [f64; 4]) -> Result<Self> {
        Self::new(amps.map(|a| c(a, 0.0)))
    }

    /// `(|01> - |10>)/√2`.
    pub fn epr() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([0.0, h, -h, 0.0]).expect("nonzero")
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amp
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.amp[2 * i + j]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn apply_single_raw(amp: &[Complex64; 4], m: &Mat2, qubit: usize) -> [Complex64; 4] {
        let shift = 1 - qubit;
        let mut out = [Complex64::ZERO; 4];
        for (idx, o) in out.iter_mut().enumerate() {
            let bit = (idx >> shift) & 1;
            let base = idx & !(1 << shift);
            *o = m[bit][0] * amp[base] + m[bit][1] * amp[base | (1 << shift)];
        }
        out
    }
}

pub fn identity2() -> Mat2 {
    [
        [Complex64::ONE, Complex64::ZERO],
        [Complex64::ZERO, Complex64::ONE],
    ]
}

fn unitarity_defect(m: &Mat2) -> f64 {
    let mut worst = 0.0_f64;
    for r in 0..2 {
        for s in 0..2 {
            // (U†U)_{rs} = Σ_t conj(U_{tr}) U_{ts}
            let v = m[0][r].conj() * m[0][s] + m[1][r].conj() * m[1][s];
            let target = if r == s { 1.0 } else { 0.0 };
            worst = worst.max((v - target).norm());
        }
    }
    worst
}

/// An element `u1 ⊗ u2 ⊗ u3` of U(2)×U(2)×U(2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalUnitary {
    factors: [Mat2; 3],
}

impl LocalUnitary {
    pub fn new(u1: Mat2, u2: Mat2, u3: Mat2) -> Result<Self> {
        let factors = [u1, u2, u3];
        for (q, m) in factors.iter().enumerate() {
            if m.iter()
                .flatten()
                .any(|z| !z.re.is_finite() || !z.im.is_finite())
                || unitarity_defect(m) > UNITARY_TOL
            {
                return Err(Error::NotUnitary(q));
            }
        }
        Ok(Self { factors })
    }

    pub fn identity() -> Self {
        Self {
            factors: [identity2(); 3],
        }
    }

    pub fn factors(&self) -> &[Mat2; 3] {
        &self.factors
    }

    pub fn factor(&self, qubit: usize) -> &Mat2 {
        &self.factors[qubit]
    }

    /// Largest deviation of any `U†U` entry from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        self.factors
            .iter()
            .map(unitarity_defect)
            .fold(0.0, f64::max)
    }
}

/// Returns `(u1 ⊗ u2 ⊗ u3) ψ`.
pub fn apply_local_unitary(u: &LocalUnitary, psi: &PureState3) -> PureState3 {
    let mut amp = psi.amp;
    for (q, m) in u.factors.iter().enumerate() {
        amp = PureState3::apply_single_raw(&amp, m, q);
    }
    PureState3 { amp }
}

/// A permutation of `{1, ..., n}`, stored 0-based.
///
/// Cycle notation follows the usual convention: `(a b c)` sends `a → b`,
/// `b → c`, `c → a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

/// A relabeling of the three qubits.
pub type QubitPermutation = Permutation;

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Parses cycle notation such as `"(13524)"`, `"(34)(56)"` or `"e"` as a
    /// permutation on `n` elements.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        if n > 9 {
            return Err(Error::InvalidPermutation(format!("n = {n} exceeds 9")));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let t = text.trim();
        if t == "e" || t.is_empty() {
            return Ok(Self { images });
        }
        let bad = |why: &str| Error::InvalidPermutation(format!("{text:?}: {why}"));
        let mut rest = t;
        while !rest.is_empty() {
            rest = rest.trim_start();
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = body.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            let cycle = body[..close]
                .chars()
                .filter(|ch| !ch.is_whitespace() && *ch != ',')
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as usize)
                        .filter(|&d| d >= 1 && d <= n)
                        .map(|d| d - 1)
                        .ok_or_else(|| bad("element out of range"))
                })
                .collect::<Result<Vec<_>>>()?;
            for &x in &cycle {
                if used[x] {
                    return Err(bad("repeated element"));
                }
                used[x] = true;
            }
            for (pos, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(pos + 1) % cycle.len()];
            }
            rest = &body[close + 1..];
        }
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of the 0-based element `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "permutation size mismatch");
        Self {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Self { images: inv }
    }

    /// All permutations of `{1, ..., n}` in lexicographic image order.
    pub fn all(n: usize) -> Vec<Self> {
        fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Permutation>) {
            if prefix.len() == n {
                out.push(Permutation {
                    images: prefix.clone(),
                });
                return;
            }
            for x in 0..n {
                if !prefix.contains(&x) {
                    prefix.push(x);
                    rec(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::with_capacity(n), n, &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let mut seen = vec![false; self.len()];
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                write!(f, "{}", x + 1)?;
                x = self.images[x];
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses a qubit permutation (three elements).
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 3)
    }
}

/// Relabels qubits: the bit carried by qubit `q` of the input is carried by
/// qubit `p(q)` of the output.
pub fn apply_qubit_permutation(p: &QubitPermutation, psi: &PureState3) -> PureState3 {
    assert_eq!(p.len(), 3, "qubit permutation must act on three elements");
    let mut amp = [Complex64::ZERO; 8];
    for (idx, a) in psi.amp.iter().enumerate() {
        let mut out = 0;
        for q in 0..3 {
            let bit = (idx >> (2 - q)) & 1;
            out |= bit << (2 - p.apply(q));
        }
        amp[out] = *a;
    }
    PureState3 { amp }
}

/// Mixes a master seed with a sample index (splitmix64 finalizer), so that
/// sample `index` is reproducible regardless of how a batch is split.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

fn gaussian_vector<const N: usize>(rng: &mut ChaCha8Rng) -> [Complex64; N] {
    std::array::from_fn(|_| gaussian_complex(rng))
}

/// Haar-random three-qubit state: 16 standard normals, normalized.
pub fn haar_random_state3(seed: u64) -> PureState3 {
    let mut rng = rng_for(seed);
    loop {
        if let Ok(s) = PureState3::new(gaussian_vector(&mut rng)) {
            return s;
        }
    }
}

/// Haar-random two-qubit state.
pub fn haar_random_state2(seed: u64) -> PureState2 {
    let mut rng = rng_for(seed);
    loop {
        if let Ok(s) = PureState2::new(gaussian_vector(&mut rng)) {
            return s;
        }
    }
}

/// Haar-random element of U(2).
///
/// Gram–Schmidt on the columns of a complex Ginibre matrix. Each column is
/// then rescaled by the phase of the matching triangular diagonal entry;
/// Gram–Schmidt already yields a positive real diagonal, so this is the
/// identity up to rounding, but it pins the QR convention that makes the
/// distribution Haar.
fn haar_unitary2(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let a: [Complex64; 4] = gaussian_vector(rng);
        let col0 = [a[0], a[2]];
        let col1 = [a[1], a[3]];
        let r00 = (col0[0].norm_sqr() + col0[1].norm_sqr()).sqrt();
        if r00 < 1e-12 {
            continue;
        }
        let q0 = [col0[0] / r00, col0[1] / r00];
        let r01 = q0[0].conj() * col1[0] + q0[1].conj() * col1[1];
        let v = [col1[0] - r01 * q0[0], col1[1] - r01 * q0[1]];
        let r11 = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if r11 < 1e-12 {
            continue;
        }
        let q1 = [v[0] / r11, v[1] / r11];
        let diag = [c(r00, 0.0), c(r11, 0.0)];
        let ph = diag.map(|d| d / d.norm());
        return [
            [q0[0] * ph[0], q1[0] * ph[1]],
            [q0[1] * ph[0], q1[1] * ph[1]],
        ];
    }
}

/// Haar-random element of U(2)×U(2)×U(2).
pub fn random_local_unitary(seed: u64) -> LocalUnitary {
    let mut rng = rng_for(seed);
    let u1 = haar_unitary2(&mut rng);
    let u2 = haar_unitary2(&mut rng);
    let u3 = haar_unitary2(&mut rng);
    LocalUnitary {
        factors: [u1, u2, u3],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn pauli_x() -> Mat2 {
        [
            [Complex64::ZERO, Complex64::ONE],
            [Complex64::ONE, Complex64::ZERO],
        ]
    }

    #[test]
    fn basis_state_is_kept() {
        let s = PureState3::from_real([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(s, PureState3::basis(0, 0, 0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_rescale() {
        let mut a = [Complex64::ZERO; 8];
        a[0] = c(2.0, 0.0);
        a[7] = c(0.0, 2.0);
        let s = PureState3::new(a).unwrap();
        assert!((s.get(0, 0, 0) - c(H, 0.0)).norm() < 1e-15);
        assert!((s.get(1, 1, 1) - c(0.0, H)).norm() < 1e-15);
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(
            PureState3::new([Complex64::ZERO; 8]),
            Err(Error::ZeroVector)
        );
        assert_eq!(
            PureState2::new([Complex64::ZERO; 4]),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn tiny_but_nonzero_vector_normalizes() {
        let s = PureState3::from_real([1e-200, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1e-200]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nan_rejected() {
        let mut a = [Complex64::ONE; 8];
        a[3] = c(f64::NAN, 0.0);
        assert_eq!(PureState3::new(a), Err(Error::NonFinite(3)));
    }

    #[test]
    fn wrong_length_rejected() {
        let v = vec![Complex64::ONE; 7];
        assert_eq!(
            PureState3::from_slice(&v),
            Err(Error::WrongLength {
                expected: 8,
                found: 7
            })
        );
    }

    #[test]
    fn haar_is_deterministic_and_normalized() {
        assert_eq!(haar_random_state3(7), haar_random_state3(7));
        assert_ne!(haar_random_state3(7), haar_random_state3(8));
        for seed in 0..50 {
            assert!((haar_random_state3(seed).norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn local_unitary_is_unitary_and_deterministic() {
        for seed in 0..200 {
            let u = random_local_unitary(seed);
            assert!(u.unitarity_defect() < 1e-12, "seed {seed}");
        }
        assert_eq!(random_local_unitary(3), random_local_unitary(3));
    }

    #[test]
    fn identity_action() {
        let psi = haar_random_state3(11);
        assert_eq!(apply_local_unitary(&LocalUnitary::identity(), &psi), psi);
    }

    #[test]
    fn bit_flip_on_first_qubit() {
        let x = pauli_x();
        let u = LocalUnitary::new(x, identity2(), identity2()).unwrap();
        let out = apply_local_unitary(&u, &PureState3::basis(0, 0, 0));
        assert_eq!(out, PureState3::basis(1, 0, 0));
    }

    #[test]
    fn non_unitary_rejected() {
        let mut m = identity2();
        m[0][0] = c(2.0, 0.0);
        assert_eq!(
            LocalUnitary::new(identity2(), m, identity2()),
            Err(Error::NotUnitary(1))
        );
    }

    #[test]
    fn permutation_parse_and_print() {
        let p = Permutation::parse("(13524)", 6).unwrap();
        assert_eq!(p.images(), &[2, 3, 4, 0, 1, 5]);
        assert_eq!(p.to_string(), "(13524)");
        let q = Permutation::parse("(34)(56)", 6).unwrap();
        assert_eq!(q.to_string(), "(34)(56)");
        assert!(Permutation::parse("e", 3).unwrap().is_identity());
        assert!(Permutation::parse("(14)", 3).is_err());
        assert!(Permutation::parse("(12)(23)", 3).is_err());
        assert!(Permutation::parse("(12", 3).is_err());
    }

    #[test]
    fn qubit_swap_relabels() {
        let p: Permutation = "(12)".parse().unwrap();
        let out = apply_qubit_permutation(&p, &PureState3::basis(1, 0, 0));
        assert_eq!(out, PureState3::basis(0, 1, 0));
        let e: Permutation = "e".parse().unwrap();
        let psi = haar_random_state3(5);
        assert_eq!(apply_qubit_permutation(&e, &psi), psi);
    }

    #[test]
    fn three_cycle_has_order_three() {
        let p: Permutation = "(123)".parse().unwrap();
        let psi = haar_random_state3(9);
        let mut out = psi;
        for _ in 0..3 {
            out = apply_qubit_permutation(&p, &out);
        }
        assert_eq!(out, psi);
    }

    #[test]
    fn all_permutations() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        assert!(all[0].is_identity());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(5, 17), derive_seed(5, 17));
    }
}
