//! Counter-based pseudo-random draws.
//!
//! Every draw is a pure function of `(seed, stream path, index)`, so streams
//! can be created in any order, on any thread, and still produce the same
//! values. The algorithm is fixed here rather than delegated to a library so
//! that generated data is reproducible across implementations:
//!
//! ```text
//! mix(z)   = splitmix64 finalizer:
//!            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!            z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!            z ^ (z >> 31)
//! key      = mix(seed + G);  for each path element p: key = mix(key ^ mix(p + G))
//! draw(i)  = mix(key + (i + 1) * G)          (i = 0, 1, 2, ...)
//! uniform  = (draw >> 11) * 2^-53            in [0, 1)
//! normal   = sqrt(-2 ln(1 - u1)) * cos(2π u2)  (two consecutive uniforms)
//! below(n) = (draw * n) >> 64                (128-bit product)
//! ```
//!
//! with `G = 0x9E3779B97F4A7C15` and all arithmetic wrapping modulo 2^64.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream domains, used as the first path element.
pub mod domain {
    pub const JITTER: u64 = 1;
    pub const DISTRACTOR: u64 = 2;
    pub const SCORE: u64 = 3;
    pub const SWITCH: u64 = 4;
    pub const SLOT: u64 = 5;
    pub const SCENE: u64 = 6;
    pub const SEED: u64 = 7;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrawStream {
    key: u64,
    counter: u64,
}

impl DrawStream {
    pub fn new(seed: u64, path: &[u64]) -> Self {
        let mut key = mix64(seed.wrapping_add(GOLDEN));
        for &p in path {
            key = mix64(key ^ mix64(p.wrapping_add(GOLDEN)));
        }
        Self { key, counter: 0 }
    }

    /// Draw at an explicit index without touching the counter.
    pub fn peek(&self, index: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)),
        )
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = self.peek(self.counter);
        self.counter += 1;
        v
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box–Muller (consumes two draws).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}

/// Derives an independent child seed, e.g. one per scene.
pub fn child_seed(seed: u64, path: &[u64]) -> u64 {
    DrawStream::new(seed, &[&[domain::SEED], path].concat()).peek(0)
}
