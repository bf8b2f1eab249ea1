//! Shared numeric kernels: adaptive Gauss–Kronrod quadrature and a
//! fixed-tree pairwise summation used wherever results must be reproducible
//! independent of thread scheduling.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use num_complex::Complex64;

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule
// (QUADPACK qk15). Index 7 is the centre node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of |Kronrod − Gauss| over the final partition.
    pub error: f64,
    pub intervals: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over the partition
/// given by consecutive `breaks`, bisecting the worst interval until the
/// summed error estimate falls below `tol`.
///
/// The estimate floor is a few ulps of the running total, so a tolerance
/// below what f64 can represent terminates instead of spinning.
pub fn integrate<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> Quadrature {
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk15(&f, w[0], w[1]);
            heap.push(Piece { a: w[0], b: w[1], value, error });
        }
    }
    loop {
        let total_err: f64 = heap.iter().map(|p| p.error).sum();
        let total: f64 = heap.iter().map(|p| p.value).sum();
        let floor = 8.0 * f64::EPSILON * total.abs();
        if total_err <= tol.max(floor) || heap.len() >= MAX_INTERVALS {
            break;
        }
        let worst = heap.pop().expect("non-empty partition");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, a, b);
            heap.push(Piece { a, b, value, error });
        }
    }
    // Sum in left-to-right order so the result does not depend on heap layout.
    let mut pieces = heap.into_vec();
    pieces.sort_by(|l, r| l.a.total_cmp(&r.a));
    let values: Vec<f64> = pieces.iter().map(|p| p.value).collect();
    Quadrature {
        value: pairwise_sum(&values),
        error: pieces.iter().map(|p| p.error).sum(),
        intervals: pieces.len(),
    }
}

/// Fixed-tree pairwise summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum_complex(l) + pairwise_sum_complex(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x * x * x - 2.0 * x, &[0.0, 3.0], 1e-12);
        assert!((q.value - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn oscillatory_integrand_refines() {
        // ∫_0^1 e^x sin(20x) dx in closed form.
        let exact = (1f64.exp() * (20f64.sin() - 20.0 * 20f64.cos()) + 20.0) / 401.0;
        let q = integrate(|x: f64| x.exp() * (20.0 * x).sin(), &[0.0, 1.0], 1e-12);
        assert!((q.value - exact).abs() < 1e-11, "{} vs {exact}", q.value);
        assert!(q.intervals > 1);
    }

    #[test]
    fn empty_partition_is_zero() {
        assert_eq!(integrate(|x| x, &[2.0, 2.0], 1e-9).value, 0.0);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
    }
}
