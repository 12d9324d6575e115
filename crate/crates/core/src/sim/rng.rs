use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Named consumers of randomness. Each consumer draws from its own ChaCha8
/// stream keyed by the master seed, so adding draws in one consumer never
/// shifts the sequence seen by another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamId {
    LinkLoss = 1,
    LinkLatency = 2,
    BusyForwarding = 3,
    Mobility = 4,
    Gsm = 5,
    /// Free for tests and tooling (graph generation and the like).
    Auxiliary = 15,
}

/// Seeded ChaCha8 generator. The algorithm is fixed so a seed reproduces the
/// same draws on every platform.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream: StreamId) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream as u64);
        RandomStream { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn uniform_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        if lo >= hi {
            return lo;
        }
        self.rng.random_range(lo..=hi)
    }

    /// Uniform float in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random()
    }

    /// True with probability `p`; `p` is clamped into `[0, 1]`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.rng.random_bool(p)
        }
    }
}
