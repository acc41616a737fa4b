//! Variable-elimination contraction over networks of small tensors whose
//! indices are all binary.

use num_complex::Complex64;

/// A dense tensor over distinct binary labels. The label at position `p` is
/// bit `len - 1 - p` of the flat index.
#[derive(Clone, Debug)]
pub(crate) struct Factor {
    pub labels: Vec<usize>,
    pub data: Vec<Complex64>,
}

impl Factor {
    /// Tabulates `f` over every assignment of `labels`. `f` receives the
    /// label values in the same order as `labels`.
    pub fn from_fn(labels: Vec<usize>, mut f: impl FnMut(&[usize]) -> Complex64) -> Self {
        let len = labels.len();
        let mut vals = vec![0usize; len];
        let data = (0..1usize << len)
            .map(|idx| {
                for (p, v) in vals.iter_mut().enumerate() {
                    *v = (idx >> (len - 1 - p)) & 1;
                }
                f(&vals)
            })
            .collect();
        Self { labels, data }
    }

    fn scalar(&self) -> Option<Complex64> {
        self.labels.is_empty().then(|| self.data[0])
    }
}

/// Multiplies all `factors` together and sums out `label`.
fn eliminate(factors: &[Factor], label: usize) -> Factor {
    let mut union: Vec<usize> = Vec::new();
    for f in factors {
        for &l in &f.labels {
            if !union.contains(&l) {
                union.push(l);
            }
        }
    }
    union.sort_unstable();
    let u = union.len();
    let sum_pos = union
        .iter()
        .position(|&l| l == label)
        .expect("label present");
    let out_labels: Vec<usize> = union.iter().copied().filter(|&l| l != label).collect();

    // For each factor: the union bit shift feeding each of its positions.
    let shifts: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| {
            f.labels
                .iter()
                .map(|l| u - 1 - union.iter().position(|x| x == l).unwrap())
                .collect()
        })
        .collect();

    let mut out = vec![Complex64::ZERO; 1 << (u - 1)];
    let sum_shift = u - 1 - sum_pos;
    for idx in 0..1usize << u {
        let mut prod = Complex64::ONE;
        for (f, sh) in factors.iter().zip(&shifts) {
            let len = sh.len();
            let mut fi = 0;
            for (p, &s) in sh.iter().enumerate() {
                fi |= ((idx >> s) & 1) << (len - 1 - p);
            }
            prod *= f.data[fi];
        }
        // Drop the summed bit from the index.
        let hi = (idx >> (sum_shift + 1)) << sum_shift;
        let lo = idx & ((1 << sum_shift) - 1);
        out[hi | lo] += prod;
    }
    Factor {
        labels: out_labels,
        data: out,
    }
}

/// Contracts the whole network down to a scalar, eliminating labels greedily
/// by the size of the intermediate they create (ties broken by label).
pub(crate) fn contract_all(mut factors: Vec<Factor>) -> Complex64 {
    loop {
        let mut best: Option<(usize, usize)> = None;
        for f in &factors {
            for &l in &f.labels {
                let mut union: Vec<usize> = Vec::new();
                for g in factors.iter().filter(|g| g.labels.contains(&l)) {
                    for &m in &g.labels {
                        if !union.contains(&m) {
                            union.push(m);
                        }
                    }
                }
                let cost = union.len();
                if best.is_none_or(|(bc, bl)| (cost, l) < (bc, bl)) {
                    best = Some((cost, l));
                }
            }
        }
        let Some((_, label)) = best else { break };
        let (hit, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.labels.contains(&label));
        factors = rest;
        factors.push(eliminate(&hit, label));
    }
    factors
        .iter()
        .map(|f| f.scalar().expect("all labels eliminated"))
        .product()
}
