//! Algorithm dispatch, run reports and benchmark rows.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::borda::{fpt_exact, greedy_uniform_aon, ptas_unit};
use crate::election::{Rule, ShiftAction};
use crate::error::{Error, Result};
use crate::oracle::brute_force_opt;
use crate::pricing::{cost, psi_max, Instance};
use crate::random::{random_instance, random_scoring_instance, RandomFamily};
use crate::scalar::{floor_usize, int, Extended};
use crate::scoring_ptas::{eptas_unit, lp_additive_general, lp_additive_unit, ptas_general};
use crate::{Price, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    PtasUnit,
    Fpt,
    EptasUnit,
    LpAdditive,
    PtasGeneral,
    GreedyAon,
    LpAdditiveGeneral,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::PtasUnit,
        Algorithm::Fpt,
        Algorithm::EptasUnit,
        Algorithm::LpAdditive,
        Algorithm::PtasGeneral,
        Algorithm::GreedyAon,
        Algorithm::LpAdditiveGeneral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PtasUnit => "ptas-unit",
            Algorithm::Fpt => "fpt",
            Algorithm::EptasUnit => "eptas-unit",
            Algorithm::LpAdditive => "lp-additive",
            Algorithm::PtasGeneral => "ptas-general",
            Algorithm::GreedyAon => "greedy-aon",
            Algorithm::LpAdditiveGeneral => "lp-additive-general",
        }
    }

    pub fn uses_eps(self) -> bool {
        matches!(
            self,
            Algorithm::PtasUnit | Algorithm::EptasUnit | Algorithm::PtasGeneral | Algorithm::LpAdditiveGeneral
        )
    }

    /// Price families the algorithm accepts on Borda instances.
    pub fn families(self) -> &'static [RandomFamily] {
        match self {
            Algorithm::PtasUnit | Algorithm::EptasUnit | Algorithm::LpAdditive => &[RandomFamily::Unit],
            Algorithm::GreedyAon => &[RandomFamily::UniformAon],
            Algorithm::Fpt | Algorithm::PtasGeneral | Algorithm::LpAdditiveGeneral => &RandomFamily::ALL,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Syntax(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// `None` when the algorithm proves that no finite-cost action exists.
    pub action: Option<ShiftAction>,
    /// Extra detail such as the EPTAS branch taken.
    pub note: Option<String>,
}

pub fn run_algorithm(instance: &Instance, algorithm: Algorithm, eps: &Rational) -> Result<Solution> {
    let plain = |action: ShiftAction| Solution { action: Some(action), note: None };
    Ok(match algorithm {
        Algorithm::PtasUnit => plain(ptas_unit(instance, eps)?),
        Algorithm::Fpt => Solution { action: fpt_exact(instance)?.action, note: None },
        Algorithm::EptasUnit => {
            let (action, branch) = eptas_unit(instance, eps)?;
            Solution { action: Some(action), note: Some(branch.name().to_string()) }
        }
        Algorithm::LpAdditive => plain(lp_additive_unit(instance)?),
        Algorithm::PtasGeneral => match ptas_general(instance, eps) {
            Err(Error::NoFiniteSolution) => Solution { action: None, note: None },
            other => plain(other?),
        },
        Algorithm::GreedyAon => plain(greedy_uniform_aon(instance)?),
        Algorithm::LpAdditiveGeneral => match lp_additive_general(instance, eps) {
            Err(Error::NoFiniteSolution) => Solution { action: None, note: None },
            other => plain(other?),
        },
    })
}

/// One solver run, serialized as a JSON object. Numbers are exact rationals
/// written as strings; `"inf"` marks an infinite cost.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub eps: Option<String>,
    pub cost: String,
    pub unit_shifts: Option<usize>,
    pub success: bool,
    pub oracle_cost: Option<String>,
    /// `cost / oracle_cost` when both are finite; `1` when both are zero.
    pub ratio: Option<String>,
    pub note: Option<String>,
    pub wall_ms: f64,
}

pub fn price_ratio(cost: &Price, opt: &Price) -> Option<Rational> {
    match (cost, opt) {
        (Extended::Finite(c), Extended::Finite(o)) if !o.is_zero() => Some(c / o),
        (Extended::Finite(c), Extended::Finite(_)) if c.is_zero() => Some(Rational::one()),
        _ => None,
    }
}

/// Runs `algorithm` and, when `with_oracle`, the brute-force solver for
/// comparison.
pub fn solve_report(
    instance: &Instance,
    algorithm: Algorithm,
    eps: &Rational,
    with_oracle: bool,
) -> Result<(RunReport, Option<ShiftAction>)> {
    let start = Instant::now();
    let solution = run_algorithm(instance, algorithm, eps)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let (price, success) = match &solution.action {
        Some(a) => (cost(instance, a)?, instance.is_successful(a, &Rule::Positional)?),
        None => (Extended::Infinite, false),
    };
    let oracle = if with_oracle { Some(brute_force_opt(instance, &Rule::Positional)?.opt_cost) } else { None };
    let ratio = oracle.as_ref().and_then(|o| price_ratio(&price, o));
    let report = RunReport {
        algorithm: algorithm.name().to_string(),
        eps: algorithm.uses_eps().then(|| eps.to_string()),
        cost: price.to_string(),
        unit_shifts: solution.action.as_ref().map(ShiftAction::unit_shifts),
        success,
        oracle_cost: oracle.map(|o| o.to_string()),
        ratio: ratio.map(|r| r.to_string()),
        note: solution.note,
        wall_ms,
    };
    Ok((report, solution.action))
}

/// Whether a run meets its algorithm's guarantee against the optimum `opt`.
pub fn within_bound(instance: &Instance, algorithm: Algorithm, eps: &Rational, action: &ShiftAction, opt: &Rational) -> Result<bool> {
    let Extended::Finite(c) = cost(instance, action)? else { return Ok(false) };
    let shifts = action.unit_shifts();
    let one_plus = Rational::one() + eps;
    Ok(match algorithm {
        Algorithm::Fpt => c == *opt,
        Algorithm::PtasUnit => shifts <= floor_usize(&(one_plus * opt)).expect("nonnegative"),
        Algorithm::LpAdditive => {
            let o = floor_usize(opt).expect("nonnegative");
            shifts <= o + o.isqrt()
        }
        Algorithm::EptasUnit | Algorithm::PtasGeneral => c <= one_plus * opt,
        Algorithm::GreedyAon => c <= int(3) / int(2) * opt + int(1),
        Algorithm::LpAdditiveGeneral => {
            c <= one_plus * opt + (Rational::one() + Rational::one() / eps) * psi_max(instance)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub seed: u64,
    pub family: String,
    pub algorithm: String,
    pub eps: String,
    pub cost: String,
    pub oracle: String,
    pub ratio: String,
    pub success: bool,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub seeds: std::ops::Range<u64>,
    pub candidates: usize,
    pub voters: usize,
    pub eps: Rational,
    pub algorithms: Vec<Algorithm>,
}

/// Runs every algorithm on the random instances it accepts, one per seed
/// and price family, skipping instances without a finite optimum. General
/// price families use mixed per-voter scoring vectors for the algorithms
/// that support them.
pub fn bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for seed in config.seeds.clone() {
        for &algorithm in &config.algorithms {
            for &family in algorithm.families() {
                let scoring = family == RandomFamily::General
                    && matches!(algorithm, Algorithm::PtasGeneral | Algorithm::LpAdditiveGeneral);
                let instance = if scoring {
                    random_scoring_instance(seed, config.candidates, config.voters, family)
                } else {
                    random_instance(seed, config.candidates, config.voters, family)
                };
                let Extended::Finite(opt) = brute_force_opt(&instance, &Rule::Positional)?.opt_cost else { continue };
                let solution = run_algorithm(&instance, algorithm, &config.eps)?;
                let (price, success, ok) = match &solution.action {
                    Some(a) => (
                        cost(&instance, a)?,
                        instance.is_successful(a, &Rule::Positional)?,
                        within_bound(&instance, algorithm, &config.eps, a, &opt)?,
                    ),
                    None => (Extended::Infinite, false, false),
                };
                let ratio = price_ratio(&price, &Extended::Finite(opt.clone()));
                rows.push(BenchRow {
                    seed,
                    family: family.name().to_string(),
                    algorithm: algorithm.name().to_string(),
                    eps: if algorithm.uses_eps() { config.eps.to_string() } else { String::new() },
                    cost: price.to_string(),
                    oracle: opt.to_string(),
                    ratio: ratio.map(|r| r.to_string()).unwrap_or_default(),
                    success,
                    within_bound: ok,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::Election;
    use crate::scalar::ratio;

    fn two_voter() -> Instance {
        let e = Election::new(3, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        Instance::with_unit_prices(e, 2).unwrap()
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("simplex".parse::<Algorithm>().is_err());
    }

    #[test]
    fn fpt_report_on_the_fixture() {
        let (report, action) = solve_report(&two_voter(), Algorithm::Fpt, &ratio(1, 2), true).unwrap();
        assert_eq!(report.cost, "2");
        assert!(report.success);
        assert_eq!(report.oracle_cost.as_deref(), Some("2"));
        assert_eq!(report.ratio.as_deref(), Some("1"));
        assert_eq!(report.eps, None);
        assert_eq!(action.unwrap().unit_shifts(), 2);
    }

    #[test]
    fn ratios() {
        assert_eq!(price_ratio(&Price::from(3), &Price::from(2)), Some(ratio(3, 2)));
        assert_eq!(price_ratio(&Price::from(0), &Price::from(0)), Some(int(1)));
        assert_eq!(price_ratio(&Price::from(1), &Price::from(0)), None);
        assert_eq!(price_ratio(&Price::Infinite, &Price::from(1)), None);
    }

    #[test]
    fn small_bench_meets_every_bound() {
        let config = BenchConfig {
            seeds: 0..3,
            candidates: 3,
            voters: 3,
            eps: ratio(1, 2),
            algorithms: Algorithm::ALL.to_vec(),
        };
        let rows = bench(&config).unwrap();
        assert!(!rows.is_empty());
        for row in &rows {
            assert!(row.success && row.within_bound, "{row:?}");
        }
    }
}
