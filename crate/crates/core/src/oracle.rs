//! Exhaustive reference solver for small instances.

use num_traits::Zero;

use crate::election::{copeland_record, pairwise_margins, positional_scores, Rule, ShiftAction};
use crate::error::{Error, Result};
use crate::pricing::Instance;
use crate::scalar::{int, Extended};
use crate::{Price, Rational};

pub const DEFAULT_BUDGET: u128 = 10_000_000;
pub const BUDGET_ENV: &str = "SHIFTBRIBE_BUDGET";

/// The enumeration budget: `SHIFTBRIBE_BUDGET` if set and valid, else 10^7.
pub fn default_budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub opt_cost: Price,
    pub witness: Option<ShiftAction>,
    /// Complete shift actions evaluated.
    pub explored: u64,
}

/// Number of shift actions of finite cost: `Π_v (1 + largest finite shift)`.
pub fn search_space_size(instance: &Instance) -> u128 {
    instance
        .prices()
        .iter()
        .fold(1u128, |acc, psi| acc.saturating_mul(psi.max_finite_shift() as u128 + 1))
}

/// Minimum-cost successful action; ties go to the lexicographically
/// smallest action.
pub fn brute_force_opt(instance: &Instance, rule: &Rule) -> Result<OracleResult> {
    brute_force_opt_with_budget(instance, rule, default_budget())
}

pub fn brute_force_opt_with_budget(instance: &Instance, rule: &Rule, budget: u128) -> Result<OracleResult> {
    Search::new(instance, rule, budget, false)?.run()
}

/// Fewest unit shifts among the optimal actions; `None` when no successful
/// action has finite cost.
pub fn brute_force_min_unit_shifts(instance: &Instance, rule: &Rule) -> Result<Option<usize>> {
    brute_force_min_unit_shifts_with_budget(instance, rule, default_budget())
}

pub fn brute_force_min_unit_shifts_with_budget(
    instance: &Instance,
    rule: &Rule,
    budget: u128,
) -> Result<Option<usize>> {
    let result = Search::new(instance, rule, budget, true)?.run()?;
    Ok(result.witness.map(|w| w.unit_shifts()))
}

/// Effect of shifting the preferred candidate in one vote.
enum Effect {
    /// Score changes `(candidate, delta)`.
    Scores(Vec<(usize, Rational)>),
    /// Candidates the preferred one overtakes.
    Passed(Vec<usize>),
}

enum State {
    Positional(Vec<Rational>),
    /// `N(p, c) − N(c, p)` per candidate plus the unaffected part of every
    /// candidate's Copeland score.
    Copeland { margins: Vec<i64>, base: Vec<Rational>, alpha: Rational },
}

struct Search<'a> {
    instance: &'a Instance,
    count_shifts: bool,
    /// `effects[v][s]` for every finite-priced shift `s`.
    effects: Vec<Vec<Effect>>,
    state: State,
    current: Vec<usize>,
    best: Option<(Rational, usize, Vec<usize>)>,
    explored: u64,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, rule: &Rule, budget: u128, count_shifts: bool) -> Result<Self> {
        let size = search_space_size(instance);
        if size > budget {
            return Err(Error::BudgetExceeded { size, budget });
        }
        let election = instance.election();
        let p = instance.preferred();
        let m = instance.num_candidates();
        let mut effects = Vec::with_capacity(instance.num_voters());
        for v in 0..instance.num_voters() {
            let from = election.rank(v, p);
            let limit = instance.price_function(v).max_finite_shift();
            let per_shift = (0..=limit)
                .map(|s| {
                    let passed: Vec<usize> = (from - s..from).map(|r| election.candidate_at(v, r)).collect();
                    match rule {
                        Rule::Positional => {
                            let mut deltas: Vec<(usize, Rational)> = (from - s..from)
                                .map(|r| (election.candidate_at(v, r), -election.weight_drop(v, r)))
                                .collect();
                            deltas.push((p, election.weight(v, from - s) - election.weight(v, from)));
                            Effect::Scores(deltas)
                        }
                        Rule::Copeland(_) => Effect::Passed(passed),
                    }
                })
                .collect();
            effects.push(per_shift);
        }
        let state = match rule {
            Rule::Positional => State::Positional(positional_scores(election).as_slice().to_vec()),
            Rule::Copeland(alpha) => {
                let matrix = pairwise_margins(election);
                let record = copeland_record(election);
                let margins: Vec<i64> = (0..m).map(|c| if c == p { 0 } else { matrix.margin(p, c) }).collect();
                let base = (0..m)
                    .map(|c| {
                        if c == p {
                            return Rational::zero();
                        }
                        let (wins, ties) = record[c];
                        let (w, t) = match matrix.margin(c, p) {
                            x if x > 0 => (wins - 1, ties),
                            0 => (wins, ties - 1),
                            _ => (wins, ties),
                        };
                        int(w as i64) + alpha * int(t as i64)
                    })
                    .collect();
                State::Copeland { margins, base, alpha: alpha.clone() }
            }
        };
        Ok(Search {
            instance,
            count_shifts,
            effects,
            state,
            current: vec![0; instance.num_voters()],
            best: None,
            explored: 0,
        })
    }

    fn run(mut self) -> Result<OracleResult> {
        self.descend(0, Rational::zero(), 0);
        let (opt_cost, witness) = match self.best {
            Some((cost, _, action)) => (Extended::Finite(cost), Some(ShiftAction::new(action))),
            None => (Extended::Infinite, None),
        };
        Ok(OracleResult { opt_cost, witness, explored: self.explored })
    }

    /// True if `(cost, shifts)` can no longer beat the incumbent.
    fn dominated(&self, cost: &Rational, shifts: usize) -> bool {
        match &self.best {
            None => false,
            Some((bc, bs, _)) => {
                if self.count_shifts {
                    (cost, shifts) >= (bc, *bs)
                } else {
                    cost >= bc
                }
            }
        }
    }

    fn descend(&mut self, voter: usize, cost: Rational, shifts: usize) {
        if voter == self.effects.len() {
            self.explored += 1;
            if self.p_wins() {
                self.best = Some((cost, shifts, self.current.clone()));
            }
            return;
        }
        for s in 0..self.effects[voter].len() {
            let price = self.instance.price_function(voter).price(s);
            let Extended::Finite(price) = price else { break };
            let total = cost.clone() + price;
            if self.dominated(&total, shifts + s) {
                if self.count_shifts {
                    continue;
                }
                break;
            }
            self.apply(voter, s, true);
            self.current[voter] = s;
            self.descend(voter + 1, total, shifts + s);
            self.current[voter] = 0;
            self.apply(voter, s, false);
        }
    }

    fn apply(&mut self, voter: usize, shift: usize, forward: bool) {
        match (&mut self.state, &self.effects[voter][shift]) {
            (State::Positional(scores), Effect::Scores(deltas)) => {
                for (c, d) in deltas {
                    if forward {
                        scores[*c] += d;
                    } else {
                        scores[*c] -= d;
                    }
                }
            }
            (State::Copeland { margins, .. }, Effect::Passed(passed)) => {
                for &c in passed {
                    margins[c] += if forward { 2 } else { -2 };
                }
            }
            _ => unreachable!("effect kind matches rule"),
        }
    }

    fn p_wins(&self) -> bool {
        let p = self.instance.preferred();
        match &self.state {
            State::Positional(scores) => scores.iter().all(|s| *s <= scores[p]),
            State::Copeland { margins, base, alpha } => {
                let mut p_score = Rational::zero();
                let mut others = base.clone();
                for (c, &margin) in margins.iter().enumerate() {
                    if c == p {
                        continue;
                    }
                    match margin {
                        x if x > 0 => p_score += int(1),
                        0 => {
                            p_score += alpha;
                            others[c] += alpha;
                        }
                        _ => others[c] += int(1),
                    }
                }
                others.iter().enumerate().all(|(c, s)| c == p || *s <= p_score)
            }
        }
    }
}
