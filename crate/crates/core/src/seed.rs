//! Seed derivation for reproducible, schedule-independent random streams.
//!
//! Every unit of work (replicate, permutation, column) gets its own seed
//! derived from the master seed and a path of integer ids, so results do
//! not depend on execution order or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name of the generator, recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9), SplitMix64 seed derivation";

/// Domain tags that keep sibling streams of one replicate apart.
pub mod tag {
    pub const GENOTYPE: u64 = 1;
    pub const SIGNAL: u64 = 2;
    pub const PHENOTYPE: u64 = 3;
    pub const PERMUTATION: u64 = 4;
    pub const GENE: u64 = 5;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `path` into `master` one component at a time.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &id| splitmix64(acc ^ splitmix64(id)))
}

pub fn rng(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}

/// Generator for substream `stream` of `seed`; substreams of one seed are
/// independent ChaCha streams sharing a key.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
