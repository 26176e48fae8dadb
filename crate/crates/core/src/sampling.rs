//! Deterministic low-discrepancy sequences for domain sampling.
//!
//! The partition and region predicates mix strict and non-strict
//! inequalities, so samplers must avoid landing exactly on boundary
//! hyperplanes. Additive Kronecker sequences with irrational increments
//! (golden ratio in 1-d, the plastic constant in 2-d) never hit the printed
//! rational boundaries and are reproducible without carrying RNG state.

/// Inverse golden ratio, increment of the 1-d sequence.
const PHI_INV: f64 = 0.618_033_988_749_894_9;
/// 1/g and 1/g^2 for the plastic constant g, increments of the 2-d sequence.
const PLASTIC_INV: f64 = 0.754_877_666_246_692_8;
const PLASTIC_INV2: f64 = 0.569_840_290_998_053_2;

/// n-th point of the 1-d golden-ratio sequence in (0, 1).
pub fn unit_point(seed: u64, n: u64) -> f64 {
    frac(0.5 + PHI_INV * (seed.wrapping_add(n).wrapping_add(1)) as f64)
}

/// n-th point of the 2-d additive sequence in (0, 1)^2.
pub fn unit_square_point(seed: u64, n: u64) -> (f64, f64) {
    let i = seed.wrapping_add(n).wrapping_add(1) as f64;
    (frac(0.5 + PLASTIC_INV * i), frac(0.5 + PLASTIC_INV2 * i))
}

/// Iterator over the 2-d sequence, scaled to `[0, x_max] x [0, y_max]`.
pub fn scaled_square(seed: u64, x_max: f64, y_max: f64) -> impl Iterator<Item = (f64, f64)> {
    (0u64..).map(move |n| {
        let (x, y) = unit_square_point(seed, n);
        (x * x_max, y * y_max)
    })
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_stay_strictly_inside() {
        for n in 0..10_000 {
            let (x, y) = unit_square_point(7, n);
            assert!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0);
            let t = unit_point(7, n);
            assert!(t > 0.0 && t < 1.0);
        }
    }

    #[test]
    fn sequence_is_deterministic_and_seed_shifted() {
        assert_eq!(unit_square_point(0, 5), unit_square_point(0, 5));
        assert_eq!(unit_square_point(3, 5), unit_square_point(0, 8));
    }

    #[test]
    fn rough_equidistribution() {
        let n = 40_000;
        let mut hits = 0usize;
        for i in 0..n {
            let (x, y) = unit_square_point(1, i);
            if x < 0.5 && y < 0.5 {
                hits += 1;
            }
        }
        let frac = hits as f64 / n as f64;
        assert!((frac - 0.25).abs() < 0.01, "quadrant fraction {frac}");
    }
}
