//! Deterministic sampling: a Weyl (Kronecker) low-discrepancy sequence for
//! hypothesis spot-checks and seeded ChaCha8 uniform sampling for the larger
//! randomized sweeps. Both are fully reproducible from a `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::point::Point;

/// First 64 primes; `frac(sqrt(p))` gives independent irrational strides.
const PRIMES: [u32; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
    307, 311,
];

/// Additive-recurrence low-discrepancy sequence in `[0, 1)^dim`:
/// `u_k = frac(offset_i + k * frac(sqrt(p_i)))` per axis, with seed-derived
/// offsets.
pub struct WeylSequence {
    strides: Vec<f64>,
    state: Vec<f64>,
}

impl WeylSequence {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1 && dim <= PRIMES.len(), "dimension out of range");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strides: Vec<f64> =
            PRIMES[..dim].iter().map(|&p| (p as f64).sqrt().fract()).collect();
        let state: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        WeylSequence { strides, state }
    }

    /// Next point of the sequence, coordinates in `[0, 1)`.
    pub fn next_unit(&mut self) -> Vec<f64> {
        let out = self.state.clone();
        for (s, a) in self.state.iter_mut().zip(self.strides.iter()) {
            *s = (*s + a).fract();
        }
        out
    }
}

/// `count` low-discrepancy tuples of `arity` points in `[-half_width, half_width]^d`.
pub fn weyl_tuples(
    count: usize,
    arity: usize,
    d: usize,
    half_width: f64,
    seed: u64,
) -> Vec<Vec<Point>> {
    let mut seq = WeylSequence::new(arity * d, seed);
    (0..count)
        .map(|_| {
            let unit = seq.next_unit();
            unit.chunks(d)
                .map(|c| {
                    Point::new(c.iter().map(|u| (2.0 * u - 1.0) * half_width).collect())
                        .expect("unit samples are finite")
                })
                .collect()
        })
        .collect()
}

/// Seeded uniform sampler over tuples; ChaCha8 keeps runs reproducible and
/// is reported in harness output headers.
pub struct TupleSampler {
    rng: ChaCha8Rng,
    arity: usize,
    d: usize,
    lo: f64,
    hi: f64,
}

impl TupleSampler {
    pub fn new(arity: usize, d: usize, lo: f64, hi: f64, seed: u64) -> Self {
        assert!(lo < hi, "empty sampling box");
        TupleSampler { rng: ChaCha8Rng::seed_from_u64(seed), arity, d, lo, hi }
    }

    pub fn next_tuple(&mut self) -> Vec<Point> {
        (0..self.arity)
            .map(|_| {
                Point::new((0..self.d).map(|_| self.rng.gen_range(self.lo..self.hi)).collect())
                    .expect("uniform samples are finite")
            })
            .collect()
    }

    /// A tuple with every coordinate bounded away from zero (|x| >= floor),
    /// for invariants stated on nonzero arguments.
    pub fn next_nonzero_tuple(&mut self, floor: f64) -> Vec<Point> {
        loop {
            let t = self.next_tuple();
            if t.iter().all(|p| p.coords().iter().all(|c| c.abs() >= floor)) {
                return t;
            }
        }
    }

    pub fn next_scalar(&mut self) -> f64 {
        self.rng.gen_range(self.lo..self.hi)
    }
}

/// The name of the generator backing [`TupleSampler`], for report headers.
pub const RNG_NAME: &str = "chacha8";

/// Default seed for every deterministic run.
pub const DEFAULT_SEED: u64 = 0x5EED;
