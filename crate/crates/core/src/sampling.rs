//! Deterministic low-discrepancy sampling.
//!
//! Points come from the Halton sequence in bases (2, 3, 5) with a
//! Cranley-Patterson rotation drawn from a seeded ChaCha stream, so a given
//! `(seed, case id)` always yields the same point set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::Vec3;

const BASES: [u64; 3] = [2, 3, 5];

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    acc
}

/// FNV-1a, used to derive stable per-case seeds.
pub fn case_seed(base_seed: u64, case_id: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325 ^ base_seed;
    for byte in case_id.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Shifted Halton points in the unit cube.
#[derive(Debug, Clone)]
pub struct LowDiscrepancy {
    shift: [f64; 3],
    index: u64,
}

impl LowDiscrepancy {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
        // index 0 is the origin for every base; skip it
        Self { shift, index: 1 }
    }

    pub fn next_unit(&mut self) -> [f64; 3] {
        let i = self.index;
        self.index += 1;
        let mut u = [0.0; 3];
        for (k, base) in BASES.iter().enumerate() {
            let v = radical_inverse(i, *base) + self.shift[k];
            u[k] = v - v.floor();
        }
        u
    }

    pub fn take_units(&mut self, n: usize) -> Vec<[f64; 3]> {
        (0..n).map(|_| self.next_unit()).collect()
    }
}

/// Axis-aligned box in some coordinate triple (Cartesian or chart coordinates).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl CoordBox {
    pub const fn new(lo: [f64; 3], hi: [f64; 3]) -> Self {
        Self { lo, hi }
    }

    pub fn at_unit(&self, u: [f64; 3]) -> [f64; 3] {
        let mut q = [0.0; 3];
        for k in 0..3 {
            q[k] = self.lo[k] + u[k] * (self.hi[k] - self.lo[k]);
        }
        q
    }

    pub fn contains(&self, q: [f64; 3]) -> bool {
        (0..3).all(|k| q[k] >= self.lo[k] && q[k] <= self.hi[k])
    }

    pub fn center(&self) -> [f64; 3] {
        self.at_unit([0.5; 3])
    }

    pub fn contains_point(&self, p: Vec3) -> bool {
        self.contains([p.x, p.y, p.z])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(1, 3) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn same_seed_same_points() {
        let a = LowDiscrepancy::new(7).take_units(50);
        let b = LowDiscrepancy::new(7).take_units(50);
        assert_eq!(a, b);
        let c = LowDiscrepancy::new(8).take_units(50);
        assert_ne!(a, c);
    }

    #[test]
    fn units_stay_in_cube() {
        for u in LowDiscrepancy::new(3).take_units(1000) {
            assert!(u.iter().all(|v| (0.0..1.0).contains(v)));
        }
    }

    #[test]
    fn case_seed_depends_on_id() {
        assert_ne!(case_seed(1, "mhd-xy"), case_seed(1, "mhd-exp"));
        assert_eq!(case_seed(1, "mhd-xy"), case_seed(1, "mhd-xy"));
    }
}
