//! Seeded random generators and brute-force reference implementations used
//! by the test suites and benchmarks. Enabled with the `testkit` feature.

pub mod gen;
pub mod oracle;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
