//! Seeded stream of small rationals for generic combinations and sample points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

pub const DEFAULT_SEED: u64 = 20240601;
pub const HEIGHT: i64 = 97;

pub struct RationalStream {
    rng: ChaCha8Rng,
}

impl RationalStream {
    pub fn new(seed: u64) -> RationalStream {
        RationalStream { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent stream for a labelled sub-computation.
    pub fn derived(seed: u64, label: &str) -> RationalStream {
        let mut h: u64 = seed ^ 0x9e37_79b9_7f4a_7c15;
        for b in label.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        RationalStream::new(h)
    }

    /// Nonzero `p/q` with `|p| <= 97`, `1 <= q <= 97`.
    pub fn next(&mut self) -> Scalar {
        let mut p = 0;
        while p == 0 {
            p = self.rng.gen_range(-HEIGHT..=HEIGHT);
        }
        let q = self.rng.gen_range(1..=HEIGHT);
        Scalar::from_ratio(p, q)
    }

    /// Nonzero integer in `[-97, 97]`.
    pub fn next_int(&mut self) -> Scalar {
        let mut p = 0;
        while p == 0 {
            p = self.rng.gen_range(-HEIGHT..=HEIGHT);
        }
        Scalar::from_int(p)
    }

    pub fn vec(&mut self, n: usize) -> Vec<Scalar> {
        (0..n).map(|_| self.next()).collect()
    }
}
