//! Globally adaptive 7/15-point Gauss–Kronrod quadrature with caller-seeded
//! breakpoints.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error meets `max(abs_tol, rel_tol·|I|)`, or until it reaches the roundoff
//! floor of the rule, a small multiple of `ε·∫|f|`. Seeding matters for the narrow
//! peaks of the statistical-function kernels: an adaptive rule that never
//! samples a spike cannot discover it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Summed error below this multiple of `ε·∫|f|` is treated as converged.
const ROUNDOFF_FLOOR: f64 = 200.0 * f64::EPSILON;

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err_est: f64,
    /// Number of intervals in the final partition.
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on the number of intervals in the partition.
    pub max_subdivisions: usize,
    pub deadline: Option<Instant>,
}

impl Integrator {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Self {
        Integrator {
            rel_tol,
            abs_tol,
            max_subdivisions,
            deadline: None,
        }
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    /// Integrates `f` over `[points[0], points[last]]`, starting from the
    /// partition given by `points` (sorted and deduplicated here).
    pub fn integrate<F>(&self, f: F, points: &[f64]) -> Result<Estimate>
    where
        F: Fn(f64) -> f64,
    {
        let mut pts: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        pts.dedup();
        if pts.len() < 2 {
            return Ok(Estimate {
                value: 0.0,
                err_est: 0.0,
                intervals: 0,
            });
        }

        let mut heap = BinaryHeap::with_capacity(pts.len() * 2);
        for w in pts.windows(2) {
            heap.push(Segment::evaluate(&f, w[0], w[1])?);
        }
        let (mut value, mut err, mut mass) = totals(&heap);

        loop {
            let tol = self.abs_tol.max(self.rel_tol * value.abs()).max(ROUNDOFF_FLOOR * mass);
            if err <= tol {
                let (value, err, _) = totals(&heap);
                return Ok(Estimate {
                    value,
                    err_est: err,
                    intervals: heap.len(),
                });
            }
            if heap.len() >= self.max_subdivisions {
                return Err(Error::Accuracy {
                    estimate: value,
                    err_est: err,
                    subdivisions: heap.len(),
                });
            }
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::DeadlineExceeded);
                }
            }

            let worst = heap.pop().expect("partition is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b || worst.exhausted {
                // Interval can no longer be split in floating point.
                let mut seg = worst;
                seg.exhausted = true;
                heap.push(seg);
                if heap.iter().all(|s| s.exhausted || s.err == 0.0) {
                    let (value, err, _) = totals(&heap);
                    return Err(Error::Accuracy {
                        estimate: value,
                        err_est: err,
                        subdivisions: heap.len(),
                    });
                }
                continue;
            }
            let left = Segment::evaluate(&f, worst.a, mid)?;
            let right = Segment::evaluate(&f, mid, worst.b)?;
            let width = worst.b - worst.a;
            let tiny = width < 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
            let stalled = tiny && left.err + right.err >= worst.err;
            value += left.value + right.value - worst.value;
            err += left.err + right.err - worst.err;
            mass += left.mass + right.mass - worst.mass;
            if heap.len() % 64 == 0 {
                (value, err, mass) = totals(&heap);
                value += left.value + right.value;
                err += left.err + right.err;
                mass += left.mass + right.mass;
            }
            for mut seg in [left, right] {
                seg.exhausted = stalled;
                heap.push(seg);
            }
        }
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (f64, f64, f64) {
    // Summed in interval order so the result does not depend on heap layout.
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let mut value = 0.0;
    let mut err = 0.0;
    let mut mass = 0.0;
    for s in segs {
        value += s.value;
        err += s.err;
        mass += s.mass;
    }
    (value, err, mass)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    /// `∫|f|` over the segment.
    mass: f64,
    exhausted: bool,
}

impl Segment {
    fn evaluate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Self> {
        let (value, err, mass) = gauss_kronrod_15(f, a, b)?;
        Ok(Segment {
            a,
            b,
            value,
            err,
            mass,
            exhausted: false,
        })
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Exhausted segments sink; otherwise largest error first, ties by position.
        (!self.exhausted)
            .cmp(&!other.exhausted)
            .then(self.err.total_cmp(&other.err))
            .then(other.a.total_cmp(&self.a))
    }
}

/// Single 15-point Kronrod panel with the QUADPACK error heuristic.
fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite { at: x })
        }
    };

    let fc = eval(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = eval(center - x)?;
        let f2 = eval(center + x)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((value, err, res_abs))
}
