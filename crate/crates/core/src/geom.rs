//! Sampling of the orbit-space boundary: the `β4 = 0` bubble surface, the
//! fixed-`β4` deformed tetrahedron, and the `(β5, β6)` fiber over a point
//! inside the tetrahedron.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::Beta;
use crate::orbitspace::{delta_beta, f_value, membership, Condition};

/// Intervals shorter than this are treated as a single point.
pub const DEGENERATE_FIBER: f64 = 1e-12;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GeomMeta {
    pub axes: Vec<String>,
    pub params: BTreeMap<String, f64>,
    /// Largest residual of the defining equation over all emitted points.
    pub max_residual: f64,
    /// For fibers, which constraint sets the lower end of the `β5` range.
    pub binding_constraint: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointCloud3 {
    pub points: Vec<[f64; 3]>,
    /// Quads over the sampling grid, 0-based indices into `points`.
    pub faces: Vec<[usize; 4]>,
    pub meta: GeomMeta,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curve2 {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
    pub meta: GeomMeta,
}

fn axes(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Bisects `f` on `[lo, hi]` until the midpoint is no longer representable
/// strictly between the endpoints. `f(lo)` and `f(hi)` must differ in sign.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let neg_lo = f(lo) < 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return if f(lo).abs() <= f(hi).abs() { lo } else { hi };
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Nonnegative roots of `q(s) = a s² + b s + c` with `a ≠ 0`, found by
/// bisection on each side of the vertex. Returns `[left, right]`; a
/// missing root is `None`.
fn quadratic_roots(a: f64, b: f64, c: f64, s_max: f64) -> [Option<f64>; 2] {
    let q = |s: f64| (a * s + b) * s + c;
    let vertex = (-b / (2.0 * a)).clamp(0.0, s_max);
    let qv = q(vertex);
    let mut out = [None, None];
    let sign = |x: f64| x.partial_cmp(&0.0);
    if qv == 0.0 {
        out[0] = Some(vertex);
        return out;
    }
    if sign(q(0.0)) != sign(qv) && q(0.0) != 0.0 {
        out[0] = Some(bisect(q, 0.0, vertex));
    } else if q(0.0) == 0.0 {
        out[0] = Some(0.0);
    }
    if sign(q(s_max)) != sign(qv) {
        out[1] = Some(if q(s_max) == 0.0 {
            s_max
        } else {
            bisect(q, vertex, s_max)
        });
    }
    out
}

/// Left-hand side minus right-hand side of the bubble equation
/// `β1β2 + β1β3 + β2β3 = √(β1β2β3)`.
pub fn bubble_residual(p: [f64; 3]) -> f64 {
    let [x, y, z] = p;
    x * y + x * z + y * z - (x * y * z).max(0.0).sqrt()
}

/// Values of `β3 > 0` on the bubble surface above `(β1, β2)`, lower sheet
/// first. Either entry may be absent.
pub fn bubble_roots(b1: f64, b2: f64) -> [Option<f64>; 2] {
    if b1 <= 0.0 || b2 <= 0.0 {
        return [None, None];
    }
    // In s = √β3 the equation is (β1+β2)s² − √(β1β2)s + β1β2 = 0.
    let a = b1 + b2;
    let r = (b1 * b2).sqrt();
    let vertex = r / (2.0 * a);
    let roots = quadratic_roots(a, -r, b1 * b2, 1.0);
    let mut out = roots.map(|s| s.map(|s| s * s).filter(|&z| z > 0.0));
    if out == [None, None] {
        // Tangent case: rounding can lift the vertex value above zero.
        let z = vertex * vertex;
        if bubble_residual([b1, b2, z]).abs() <= 1e-15 {
            out[0] = Some(z);
        }
    }
    out
}

/// Grid-samples both sheets of the `β4 = 0` bubble surface.
pub fn sample_bubble_surface(resolution: usize) -> Result<PointCloud3> {
    if resolution < 2 {
        return Err(Error::OutOfRange {
            what: "resolution",
            value: resolution as f64,
        });
    }
    let n = resolution;
    let grid = |i: usize| 0.25 * (i + 1) as f64 / n as f64;
    let rows: Vec<Vec<[Option<f64>; 2]>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| bubble_roots(grid(i), grid(j))).collect())
        .collect();
    let mut cloud = grid_cloud(&rows, |i, j, z| [grid(i), grid(j), z], bubble_residual);
    cloud.meta.axes = axes(&["beta1", "beta2", "beta3"]);
    cloud.meta.params.insert("beta4".into(), 0.0);
    cloud.meta.params.insert("resolution".into(), n as f64);
    Ok(cloud)
}

/// Assembles points from a grid of per-node roots (two sheets) and joins
/// each sheet into quads wherever all four corners have a root.
fn grid_cloud(
    rows: &[Vec<[Option<f64>; 2]>],
    point: impl Fn(usize, usize, f64) -> [f64; 3],
    residual: impl Fn([f64; 3]) -> f64,
) -> PointCloud3 {
    let mut points = Vec::new();
    let mut index = BTreeMap::new();
    let mut max_residual = 0.0_f64;
    for sheet in 0..2 {
        for (i, row) in rows.iter().enumerate() {
            for (j, node) in row.iter().enumerate() {
                if let Some(z) = node[sheet] {
                    let p = point(i, j, z);
                    max_residual = max_residual.max(residual(p).abs());
                    index.insert((sheet, i, j), points.len());
                    points.push(p);
                }
            }
        }
    }
    let mut faces = Vec::new();
    for sheet in 0..2 {
        for (i, pair) in rows.windows(2).enumerate() {
            for j in 0..pair[0].len().min(pair[1].len()).saturating_sub(1) {
                let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
                    .map(|(a, b)| index.get(&(sheet, a, b)).copied());
                if let [Some(a), Some(b), Some(c), Some(d)] = corners {
                    faces.push([a, b, c, d]);
                }
            }
        }
    }
    let meta = GeomMeta {
        max_residual,
        ..GeomMeta::default()
    };
    PointCloud3 {
        points,
        faces,
        meta,
    }
}

fn f_at(p: [f64; 3], b4: f64) -> f64 {
    f_value(&Beta([p[0], p[1], p[2], b4, 0.0, 0.0])).unwrap_or(f64::NAN)
}

/// Samples the boundary of the deformed tetrahedron `F ≥ 0, βi ≥ 0` at
/// fixed `β4`: the curved face `F = 0` and the three coordinate faces.
pub fn sample_tetrahedron(b4: f64, resolution: usize) -> Result<PointCloud3> {
    if !(b4 > 0.0 && b4 < 0.25) {
        return Err(Error::OutOfRange {
            what: "beta4",
            value: b4,
        });
    }
    if resolution < 2 {
        return Err(Error::OutOfRange {
            what: "resolution",
            value: resolution as f64,
        });
    }
    let n = resolution;
    let edge = 0.25 - b4;
    let grid = |i: usize| edge * i as f64 / n as f64;

    // F = A + √(β1β2)s − (β1+β2+β4)s² with s = √β3.
    let rows: Vec<Vec<[Option<f64>; 2]>> = (0..=n)
        .into_par_iter()
        .map(|i| {
            (0..=n)
                .map(|j| {
                    let (x, y) = (grid(i), grid(j));
                    let a = b4 * (0.25 - b4) - x * y - (x + y) * b4;
                    let roots = quadratic_roots(-(x + y + b4), (x * y).sqrt(), a, 1.0);
                    roots.map(|s| s.map(|s| s * s))
                })
                .collect()
        })
        .collect();
    let mut cloud = grid_cloud(&rows, |i, j, z| [grid(i), grid(j), z], |p| f_at(p, b4));

    for axis in 0..3 {
        let mut index = BTreeMap::new();
        for i in 0..=n {
            for j in 0..=n {
                let mut p = [0.0; 3];
                let free: Vec<usize> = (0..3).filter(|&k| k != axis).collect();
                p[free[0]] = grid(i);
                p[free[1]] = grid(j);
                if f_at(p, b4) >= 0.0 {
                    index.insert((i, j), cloud.points.len());
                    cloud.points.push(p);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
                    .map(|k| index.get(&k).copied());
                if let [Some(a), Some(b), Some(c), Some(d)] = corners {
                    cloud.faces.push([a, b, c, d]);
                }
            }
        }
    }
    cloud.meta.axes = axes(&["beta1", "beta2", "beta3"]);
    cloud.meta.params.insert("beta4".into(), b4);
    cloud.meta.params.insert("resolution".into(), n as f64);
    Ok(cloud)
}

/// Feasible `β5` range over `(β1, β2, β3, β4)`, with the name of the
/// constraint that fixes the lower end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiberRange {
    pub min: f64,
    pub max: f64,
    pub binding: &'static str,
}

pub fn fiber_range(b1: f64, b2: f64, b3: f64, b4: f64) -> Result<FiberRange> {
    if !(b4 > 0.0 && b4 < 0.25) {
        return Err(Error::OutOfRange {
            what: "beta4",
            value: b4,
        });
    }
    for (what, v) in [("beta1", b1), ("beta2", b2), ("beta3", b3)] {
        if !(0.0..=0.25).contains(&v) {
            return Err(Error::OutOfRange { what, value: v });
        }
    }
    let p3 = b1 * b2 * b3;
    let max = 2.0 * p3.sqrt();
    let delta = |b5: f64| delta_beta(&Beta([b1, b2, b3, b4, b5, 0.0]));
    if delta(max) < 0.0 {
        return Err(Error::DegenerateFiber(f64::NAN));
    }
    // Δβ is increasing on [−β4, ∞) and negative at −β4.
    let root = if delta(-b4) >= 0.0 {
        -b4
    } else {
        bisect(delta, -b4, max)
    };
    let lastfound = 2.0 * (b1 * b2 + b1 * b3 + b2 * b3 + (b1 + b2 + b3) * b4 + b4 * b4 - b4 / 4.0);
    let candidates = [
        (root, "deltabetacond"),
        (lastfound, "lastfound"),
        (-max, "bottomsurface"),
    ];
    let (min, binding) =
        candidates.into_iter().fold(
            (f64::NEG_INFINITY, ""),
            |acc, c| if c.0 > acc.0 { c } else { acc },
        );
    Ok(FiberRange { min, max, binding })
}

/// `β6 ≥ 0` on the fiber at `β5`, from `4β6² = Δβ·(4β1β2β3 − β5²)`.
fn beta6_upper(b1: f64, b2: f64, b3: f64, b4: f64, b5: f64) -> f64 {
    let d = delta_beta(&Beta([b1, b2, b3, b4, b5, 0.0]));
    0.5 * (d * (4.0 * b1 * b2 * b3 - b5 * b5)).max(0.0).sqrt()
}

/// Samples the closed fiber curve in the `(β5, β6)` plane. The curve has
/// `2·⌈resolution/2⌉` points, running along the upper branch from `β5min`
/// to `β5max` and back along the lower branch; both turning points have
/// `β6 = 0` exactly.
pub fn sample_fiber_circle(
    b1: f64,
    b2: f64,
    b3: f64,
    b4: f64,
    resolution: usize,
) -> Result<Curve2> {
    if resolution < 4 {
        return Err(Error::OutOfRange {
            what: "resolution",
            value: resolution as f64,
        });
    }
    let range = fiber_range(b1, b2, b3, b4)?;
    let len = range.max - range.min;
    if len.is_nan() || len <= DEGENERATE_FIBER {
        return Err(Error::DegenerateFiber(len));
    }
    let half_n = resolution.div_ceil(2);
    let mid = 0.5 * (range.min + range.max);
    let half = 0.5 * len;
    let b5_at = |k: usize| match k {
        0 => range.min,
        k if k == half_n => range.max,
        k => mid - half * (std::f64::consts::PI * k as f64 / half_n as f64).cos(),
    };
    let mut points = Vec::with_capacity(2 * half_n);
    for k in 0..=half_n {
        let b5 = b5_at(k);
        let b6 = if k == 0 || k == half_n {
            0.0
        } else {
            beta6_upper(b1, b2, b3, b4, b5)
        };
        points.push([b5, b6]);
    }
    for k in (1..half_n).rev() {
        let b5 = b5_at(k);
        points.push([b5, -beta6_upper(b1, b2, b3, b4, b5)]);
    }

    let mut max_residual = 0.0_f64;
    for &[b5, b6] in &points {
        let rep = membership(&Beta([b1, b2, b3, b4, b5, b6]), 0.0);
        max_residual = max_residual
            .max(rep.residual(Condition::Beta6))
            .max(-rep.residual(Condition::LastFound));
    }
    let mut params = BTreeMap::new();
    for (k, v) in [("beta1", b1), ("beta2", b2), ("beta3", b3), ("beta4", b4)] {
        params.insert(k.to_string(), v);
    }
    params.insert("beta5_min".into(), range.min);
    params.insert("beta5_max".into(), range.max);
    let meta = GeomMeta {
        axes: axes(&["beta5", "beta6"]),
        params,
        max_residual,
        binding_constraint: Some(range.binding.to_string()),
    };
    Ok(Curve2 {
        points,
        closed: true,
        meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bubble_center() {
        let t = 1.0 / 9.0;
        assert!(bubble_residual([t, t, t]).abs() < 1e-16);
        let roots = bubble_roots(t, t);
        assert!(
            roots.iter().flatten().any(|z| (z - t).abs() < 1e-14),
            "{roots:?}"
        );
        let cloud = sample_bubble_surface(9).unwrap();
        assert!(cloud
            .points
            .iter()
            .any(|p| p.iter().all(|x| (x - t).abs() < 1e-14)));
    }

    #[test]
    fn bubble_axis_limit() {
        for b2 in [1e-3, 1e-6, 1e-9] {
            let roots = bubble_roots(0.1, b2);
            let lo = roots[0].unwrap();
            assert!(lo < 10.0 * b2, "{b2} {lo}");
        }
    }

    #[test]
    fn bubble_small_resolution() {
        let c = sample_bubble_surface(2).unwrap();
        assert!(!c.points.is_empty());
        assert!(c.meta.max_residual <= 1e-12);
        assert!(sample_bubble_surface(1).is_err());
    }

    #[test]
    fn bubble_residuals() {
        let c = sample_bubble_surface(40).unwrap();
        assert!(c.meta.max_residual <= 1e-12);
        for p in &c.points {
            assert!(bubble_residual(*p).abs() <= 1e-12);
        }
        assert!(!c.faces.is_empty());
    }

    #[test]
    fn tetrahedron_faces() {
        let c = sample_tetrahedron(0.125, 24).unwrap();
        assert!(c.meta.max_residual <= 1e-12);
        let inside = [0.03, 0.03, 0.03];
        assert!((f_at(inside, 0.125) - 0.006871152422706632).abs() < 1e-15);
        assert!(!c.points.contains(&inside));
        // Origin lies on all three coordinate faces.
        assert_eq!(c.points.iter().filter(|p| **p == [0.0; 3]).count(), 3);
        for b4 in [0.0, 0.25, -0.1, f64::NAN] {
            assert!(matches!(
                sample_tetrahedron(b4, 4),
                Err(Error::OutOfRange { .. })
            ));
        }
    }

    #[test]
    fn fiber_figure_parameters() {
        let c = sample_fiber_circle(0.03, 0.03, 0.03, 0.125, 200).unwrap();
        let min = c.meta.params["beta5_min"];
        let max = c.meta.params["beta5_max"];
        assert!((min + 0.002952877952816929).abs() < 1e-15, "{min}");
        assert!((min + 0.00290).abs() < 1e-4);
        assert!((max - 2.0 * 2.7e-5_f64.sqrt()).abs() < 1e-16);
        assert_eq!(c.meta.binding_constraint.as_deref(), Some("deltabetacond"));
        assert!(c.closed && c.points.len() == 200);
        assert_eq!(c.points[0], [min, 0.0]);
        assert_eq!(c.points[100], [max, 0.0]);
        assert!(c.meta.max_residual <= 1e-12);
        for w in c.points.windows(2) {
            assert_ne!(w[0], w[1]);
        }
        for p in &c.points {
            let b = Beta([0.03, 0.03, 0.03, 0.125, p[0], p[1]]);
            assert!(membership(&b, 1e-9).in_x, "{b}");
        }
    }

    #[test]
    fn fiber_degenerates_at_boundary() {
        let f = |x: f64| f_at([x, x, x], 0.125);
        let edge = bisect(f, 0.03, 0.125);
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let r = fiber_range(edge - eps, edge - eps, edge - eps, 0.125).unwrap();
            last = r.max - r.min;
        }
        assert!(last < 1e-6, "{last}");
        assert!(matches!(
            sample_fiber_circle(edge + 1e-3, edge + 1e-3, edge + 1e-3, 0.125, 10),
            Err(Error::DegenerateFiber(_))
        ));
    }
}
