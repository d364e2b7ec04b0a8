//! Special functions and adaptive quadrature used to build the fading chain.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Exponentially scaled modified Bessel function of the first kind, order
/// zero: `exp(-z) * I0(z)` for `z >= 0`.
///
/// The power series is summed directly below `z = 30`; above it the
/// Hankel asymptotic expansion is accurate to machine precision.
pub fn bessel_i0e(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z <= 30.0 {
        let quarter = 0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= quarter / (k * k);
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
            k += 1.0;
        }
        sum * (-z).exp()
    } else {
        // sum_k ((2k-1)!!)^2 / (k! (8z)^k)
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            let odd = 2.0 * kf - 1.0;
            let next = term * odd * odd / (kf * 8.0 * z);
            if next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
        }
        sum / (2.0 * std::f64::consts::PI * z).sqrt()
    }
}

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
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// 7-point Gauss weights for the odd Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoConvergence {
    pub best: Estimate,
}

fn gauss_kronrod<F, E>(f: &mut F, a: f64, b: f64) -> Result<Estimate, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

struct Interval {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Globally adaptive 7/15-point Gauss-Kronrod integration of `f` over
/// `[a, b]` to absolute accuracy `abs_tol`.
///
/// The integrand may fail with its own error type, which is propagated
/// unchanged. Exhausting `max_intervals` yields `Ok(Err(NoConvergence))`.
pub fn integrate<F, E>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<Result<Estimate, NoConvergence>, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if a == b {
        return Ok(Ok(Estimate {
            value: 0.0,
            error: 0.0,
        }));
    }
    let first = gauss_kronrod(&mut f, a, b)?;
    let mut total = first;
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, est: first });
    while !(total.error <= abs_tol) {
        if heap.len() >= max_intervals {
            return Ok(Err(NoConvergence { best: total }));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&mut f, worst.a, mid)?;
        let right = gauss_kronrod(&mut f, mid, worst.b)?;
        total.value += left.value + right.value - worst.est.value;
        total.error += left.error + right.error - worst.est.error;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            est: right,
        });
    }
    // Re-sum to shed the drift of the incremental updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), i| (v + i.est.value, e + i.est.error));
    Ok(Ok(Estimate { value, error }))
}
