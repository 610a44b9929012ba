//! Seeded random streams and vertex-subset samplers.
//!
//! Every stream is a ChaCha8 generator. Trial `i` of a run with master seed
//! `m` uses the generator seeded (via `seed_from_u64`) with
//! `splitmix64(m ^ splitmix64(i + GOLDEN))`, where `GOLDEN` is
//! `0x9E37_79B9_7F4A_7C15`. Substreams are therefore fixed by `(m, i)` alone
//! and do not depend on scheduling.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::VertexSet;

pub type TrialRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(GOLDEN)))
}

pub fn seeded(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn substream(master: u64, index: u64) -> TrialRng {
    seeded(derive_seed(master, index))
}

/// `X_p` over `{0, .., ground_size - 1}`.
///
/// Panics unless `0 <= p <= 1`.
pub fn sample_bernoulli<R: Rng + ?Sized>(ground_size: usize, p: f64, rng: &mut R) -> VertexSet {
    sample_bernoulli_from(0..ground_size, p, rng)
}

/// Each of `vertices` independently with probability `p`.
pub fn sample_bernoulli_from<R, I>(vertices: I, p: f64, rng: &mut R) -> VertexSet
where
    R: Rng + ?Sized,
    I: IntoIterator<Item = usize>,
{
    assert!((0.0..=1.0).contains(&p), "probability {p} outside [0, 1]");
    vertices
        .into_iter()
        .filter(|_| rng.random::<f64>() < p)
        .collect()
}

/// Uniform `m`-subset of `{0, .., ground_size - 1}`.
pub fn sample_uniform_of_size<R: Rng + ?Sized>(
    ground_size: usize,
    m: usize,
    rng: &mut R,
) -> Result<VertexSet> {
    let all: Vec<usize> = (0..ground_size).collect();
    sample_uniform_from(&all, m, rng)
}

/// Uniform `m`-subset of `vertices`.
pub fn sample_uniform_from<R: Rng + ?Sized>(
    vertices: &[usize],
    m: usize,
    rng: &mut R,
) -> Result<VertexSet> {
    if m > vertices.len() {
        return Err(Error::InvalidParameter(format!(
            "cannot draw {m} of {} vertices",
            vertices.len()
        )));
    }
    Ok(index::sample(rng, vertices.len(), m)
        .into_iter()
        .map(|i| vertices[i])
        .collect())
}
