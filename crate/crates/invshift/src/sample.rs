//! Seeded Monte Carlo sampling of exact laws.
//!
//! Generator: ChaCha20 from `rand_chacha` 0.9, seeded with a 64-bit stream seed
//! via `SeedableRng::seed_from_u64`. Each draw takes one `u64` and inverts the
//! CDF over canonical element order; CDF thresholds are `floor(F(x) · 2^64)`
//! computed exactly from the rational probabilities, so no floating point is
//! involved in selecting an element. Stream seeds are derived from the master
//! seed by [`derive_seed`]. Changing any of this bumps [`GENERATOR_VERSION`].

use invshift_core::{Distribution, GroupSpec, ProbTable, Rational};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub const GENERATOR_VERSION: &str = "chacha20-icdf64/splitmix64-v1";

/// Stream index for draws of `X`.
pub const STREAM_X: u64 = 1;
/// Stream index for draws of `Y`.
pub const STREAM_Y: u64 = 2;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(master ^ splitmix64(stream))`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ splitmix64(stream))
}

/// Inverse-CDF sampler for one law.
#[derive(Clone, Debug)]
pub struct Sampler {
    thresholds: Vec<u128>,
}

impl Sampler {
    pub fn new(mu: &Distribution) -> Self {
        let scale = BigInt::from(1u128 << 64);
        let mut acc = Rational::zero();
        let thresholds = mu
            .probs()
            .iter()
            .map(|p| {
                acc += p;
                (&acc * &scale).floor().to_integer().to_u128().expect("cdf ≤ 1")
            })
            .collect();
        Sampler { thresholds }
    }

    /// Canonical index of the drawn element.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let r = rng.random::<u64>() as u128;
        self.thresholds.partition_point(|&t| t <= r)
    }
}

/// Counts per element from a finite sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalTable {
    spec: GroupSpec,
    counts: Vec<u64>,
    total: u64,
}

impl EmpiricalTable {
    pub fn new(spec: GroupSpec) -> Self {
        let counts = vec![0; spec.len()];
        EmpiricalTable { spec, counts, total: 0 }
    }

    pub fn record(&mut self, index: usize) {
        self.counts[index] += 1;
        self.total += 1;
    }

    /// Counts in canonical element order.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Adds another table over the same group, for sharded sampling.
    pub fn merge(&mut self, other: &EmpiricalTable) {
        assert_eq!(self.spec, other.spec, "merging tables over different groups");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    /// The empirical law as an exact distribution.
    pub fn to_distribution(&self) -> Distribution {
        let total = BigInt::from(self.total);
        let probs = self.counts.iter().map(|&c| Rational::new(BigInt::from(c), total.clone())).collect();
        Distribution::from_dense(self.spec.clone(), probs).expect("counts sum to total")
    }

    /// Exact total variation distance to `mu`.
    pub fn tv_exact(&self, mu: &Distribution) -> invshift_core::Result<Rational> {
        self.to_distribution().tv_distance_exact(mu)
    }
}

impl ProbTable for EmpiricalTable {
    fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn prob_f64(&self, i: usize) -> f64 {
        self.counts[i] as f64 / self.total as f64
    }
}

/// `n` independent draws from `mu`.
pub fn sample(mu: &Distribution, n: u64, seed: u64) -> EmpiricalTable {
    let sampler = Sampler::new(mu);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut table = EmpiricalTable::new(mu.spec().clone());
    for _ in 0..n {
        table.record(sampler.draw(&mut rng));
    }
    table
}

/// Empirical law of `X_i + Y_i` over `n` independent pairs.
///
/// `X` and `Y` draw from separate streams seeded with
/// `derive_seed(seed, STREAM_X)` and `derive_seed(seed, STREAM_Y)`.
pub fn sample_sum(
    mu_x: &Distribution,
    mu_y: &Distribution,
    n: u64,
    seed: u64,
) -> invshift_core::Result<EmpiricalTable> {
    if mu_x.spec() != mu_y.spec() {
        return Err(invshift_core::Error::SpecMismatch);
    }
    let spec = mu_x.spec();
    let (sx, sy) = (Sampler::new(mu_x), Sampler::new(mu_y));
    let mut rx = ChaCha20Rng::seed_from_u64(derive_seed(seed, STREAM_X));
    let mut ry = ChaCha20Rng::seed_from_u64(derive_seed(seed, STREAM_Y));
    let mut table = EmpiricalTable::new(spec.clone());
    for _ in 0..n {
        let x = spec.element_at(sx.draw(&mut rx));
        let y = spec.element_at(sy.draw(&mut ry));
        let z = spec.add(&x, &y)?;
        table.record(spec.index_of(&z)?);
    }
    Ok(table)
}

/// `tv(empirical law of X + Y, μ_X)`.
pub fn empirical_shift_check(
    mu_x: &Distribution,
    mu_y: &Distribution,
    n: u64,
    seed: u64,
) -> invshift_core::Result<f64> {
    let table = sample_sum(mu_x, mu_y, n, seed)?;
    invshift_core::measure::tv_distance(&table, mu_x)
}
