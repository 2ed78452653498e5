//! Seeded random instances for tests and benchmarks.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::election::{Candidate, Election};
use crate::error::{Error, Result};
use crate::pricing::{Instance, PriceFunction};
use crate::scalar::{int, Extended};
use crate::{Price, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RandomFamily {
    Unit,
    UniformAon,
    /// All-or-nothing with `c_v = ∞` with probability 1/3, else 1.
    OneInfAon,
    /// Nondecreasing with integer steps in `0..=5`.
    General,
}

impl RandomFamily {
    pub const ALL: [RandomFamily; 4] =
        [RandomFamily::Unit, RandomFamily::UniformAon, RandomFamily::OneInfAon, RandomFamily::General];

    pub fn name(self) -> &'static str {
        match self {
            RandomFamily::Unit => "unit",
            RandomFamily::UniformAon => "uniform-aon",
            RandomFamily::OneInfAon => "one-inf-aon",
            RandomFamily::General => "general",
        }
    }
}

impl fmt::Display for RandomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RandomFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RandomFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Syntax(format!("unknown price family {s:?}")))
    }
}

fn random_orders(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<Vec<Candidate>> {
    (0..n)
        .map(|_| {
            let mut order: Vec<Candidate> = (0..m).collect();
            order.shuffle(rng);
            order
        })
        .collect()
}

fn random_prices(rng: &mut ChaCha8Rng, family: RandomFamily, max_shift: usize) -> PriceFunction {
    match family {
        RandomFamily::Unit => PriceFunction::unit(max_shift),
        RandomFamily::UniformAon => PriceFunction::all_or_nothing(max_shift, Price::from(1)),
        RandomFamily::OneInfAon => {
            let price = if rng.gen_range(0..3) == 0 { Extended::Infinite } else { Price::from(1) };
            PriceFunction::all_or_nothing(max_shift, price)
        }
        RandomFamily::General => {
            let mut total = 0i64;
            let values = (0..max_shift)
                .map(|_| {
                    total += rng.gen_range(0..=5);
                    Price::from(total)
                })
                .collect();
            PriceFunction::new(values).expect("nondecreasing by construction")
        }
    }
}

fn assemble(rng: &mut ChaCha8Rng, election: Election, family: RandomFamily) -> Instance {
    let prices = (0..election.num_voters())
        .map(|v| random_prices(rng, family, election.rank(v, 0) - 1))
        .collect();
    Instance::new(election, 0, prices).expect("consistent by construction")
}

/// A uniformly random profile with preferred candidate `0` and prices from
/// `family`. Deterministic per seed.
pub fn random_instance(seed: u64, m: usize, n: usize, family: RandomFamily) -> Instance {
    assert!(m >= 1 && n >= 1, "need at least one candidate and one voter");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let election = Election::new(m, random_orders(&mut rng, m, n)).expect("valid permutations");
    assemble(&mut rng, election, family)
}

/// Like [`random_instance`] but every voter gets its own scoring vector:
/// Borda, plurality-like, or random nonincreasing integers in `0..=5`.
pub fn random_scoring_instance(seed: u64, m: usize, n: usize, family: RandomFamily) -> Instance {
    assert!(m >= 1 && n >= 1, "need at least one candidate and one voter");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orders = random_orders(&mut rng, m, n);
    let vectors: Vec<Vec<Rational>> = (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => (0..m).rev().map(|i| int(i as i64)).collect(),
            1 => (0..m).map(|i| int(i64::from(i == 0))).collect(),
            _ => {
                let mut w: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=5)).collect();
                w.sort_unstable_by(|a, b| b.cmp(a));
                w.into_iter().map(int).collect()
            }
        })
        .collect();
    let election = Election::new(m, orders)
        .and_then(|e| e.with_scoring_vectors(vectors))
        .expect("valid permutations and vectors");
    assemble(&mut rng, election, family)
}
