//! Algorithms specific to the Borda rule: score-gap bounds, the loss
//! dynamic program, the combinatorial PTAS, the exact FPT search and the
//! greedy for uniform all-or-nothing prices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::election::{borda_scores, Candidate, ShiftAction};
use crate::error::{Error, Result};
use crate::pricing::{is_uniform_aon, is_unit, Instance};
use crate::scalar::{floor_usize, int, Extended};
use crate::{Price, Rational};

/// Largest number of DP states per voter layer before giving up.
pub const DEFAULT_DP_BUDGET: u128 = 10_000_000;

/// Borda score gaps between every candidate and the preferred one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapProfile {
    preferred: Candidate,
    /// `scr(c) − scr(p)` per candidate.
    gaps: Vec<i64>,
}

impl GapProfile {
    pub fn new(instance: &Instance) -> Result<Self> {
        let scores = borda_scores(instance.election())?;
        let p = instance.preferred();
        let gaps = scores.iter().map(|s| s - scores[p]).collect();
        Ok(GapProfile { preferred: p, gaps })
    }

    pub fn gap(&self, c: Candidate) -> i64 {
        self.gaps[c]
    }

    pub fn gaps(&self) -> &[i64] {
        &self.gaps
    }

    /// `max_c (scr(c) − scr(p))`.
    pub fn diffmax(&self) -> i64 {
        self.gaps.iter().copied().max().unwrap_or(0)
    }

    /// `Σ_c max(0, scr(c) − scr(p) − k)`.
    pub fn scrdiff(&self, k: i64) -> i64 {
        self.gaps.iter().map(|g| (g - k).max(0)).sum()
    }

    /// Integers `k` in `⌈diffmax/2⌉ ..= diffmax` with `scrdiff(k) ≤ k`,
    /// ascending.
    pub fn candidate_ks(&self) -> Vec<i64> {
        let d = self.diffmax();
        if d <= 0 {
            return Vec::new();
        }
        ((d + 1) / 2..=d).filter(|&k| self.scrdiff(k) <= k).collect()
    }

    /// Candidates with `scr(c) > scr(p) + threshold`.
    pub fn bad_set(&self, threshold: &Rational) -> Vec<Candidate> {
        (0..self.gaps.len()).filter(|&c| int(self.gaps[c]) > *threshold).collect()
    }

    /// Loss targets `(c, scr(c) − scr(p) − k)` for the given candidates.
    pub fn loss_targets(&self, bad: &[Candidate], k: i64) -> Vec<(Candidate, usize)> {
        bad.iter()
            .map(|&c| {
                debug_assert_ne!(c, self.preferred);
                (c, (self.gaps[c] - k).max(0) as usize)
            })
            .collect()
    }
}

pub fn gap_profile(instance: &Instance) -> Result<GapProfile> {
    GapProfile::new(instance)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpSolution {
    pub cost: Rational,
    pub action: ShiftAction,
}

/// Cheapest action under which every target candidate `c_i` loses at least
/// `s_i` Borda points; `None` if no finite-cost action does.
pub fn dp_min_cost(instance: &Instance, targets: &[(Candidate, usize)]) -> Result<Option<DpSolution>> {
    LossDp::new(instance, targets, None, DEFAULT_DP_BUDGET)?.solve()
}

/// As [`dp_min_cost`], restricted to actions with exactly `shifts` unit
/// shifts.
pub fn dp_min_cost_with_shifts(
    instance: &Instance,
    targets: &[(Candidate, usize)],
    shifts: usize,
) -> Result<Option<DpSolution>> {
    LossDp::new(instance, targets, Some(shifts), DEFAULT_DP_BUDGET)?.solve()
}

pub fn dp_min_cost_with_budget(
    instance: &Instance,
    targets: &[(Candidate, usize)],
    shifts: Option<usize>,
    budget: u128,
) -> Result<Option<DpSolution>> {
    LossDp::new(instance, targets, shifts, budget)?.solve()
}

struct LossDp<'a> {
    instance: &'a Instance,
    targets: Vec<(Candidate, usize)>,
    shifts: Option<usize>,
}

/// Layer entry: cost, predecessor key and the shift used in this vote.
type Layer = BTreeMap<Vec<usize>, (Rational, Vec<usize>, usize)>;

impl<'a> LossDp<'a> {
    fn new(
        instance: &'a Instance,
        targets: &[(Candidate, usize)],
        shifts: Option<usize>,
        budget: u128,
    ) -> Result<Self> {
        if !instance.election().is_borda() {
            return Err(Error::Unsupported("the loss dynamic program requires the Borda rule".into()));
        }
        let mut seen = vec![false; instance.num_candidates()];
        for &(c, _) in targets {
            if c >= instance.num_candidates() || c == instance.preferred() || seen[c] {
                return Err(Error::InvalidInstance(format!("invalid or repeated target candidate {c}")));
            }
            seen[c] = true;
        }
        let mut size = targets.iter().fold(1u128, |acc, &(_, s)| acc.saturating_mul(s as u128 + 1));
        if let Some(j) = shifts {
            size = size.saturating_mul(j as u128 + 1);
        }
        if size > budget {
            return Err(Error::BudgetExceeded { size, budget });
        }
        Ok(LossDp { instance, targets: targets.to_vec(), shifts })
    }

    /// Keys are `(r_1, …, r_t)` with an extra trailing `j` when the shift
    /// count is pinned. Losses are capped at their targets.
    fn solve(&self) -> Result<Option<DpSolution>> {
        let election = self.instance.election();
        let p = self.instance.preferred();
        let t = self.targets.len();
        let start = vec![0usize; t + usize::from(self.shifts.is_some())];
        let mut layers: Vec<Layer> = Vec::with_capacity(self.instance.num_voters());
        let mut frontier: BTreeMap<Vec<usize>, Rational> = BTreeMap::from([(start, Rational::zero())]);
        for v in 0..self.instance.num_voters() {
            let psi = self.instance.price_function(v);
            let from = election.rank(v, p);
            let target_ranks: Vec<usize> = self.targets.iter().map(|&(c, _)| election.rank(v, c)).collect();
            let mut layer: Layer = BTreeMap::new();
            for (key, cost) in &frontier {
                for l in 0..=psi.max_shift() {
                    let Extended::Finite(price) = psi.price(l) else { break };
                    let mut next = key.clone();
                    if let Some(limit) = self.shifts {
                        if key[t] + l > limit {
                            break;
                        }
                        next[t] += l;
                    }
                    for (z, &(_, need)) in self.targets.iter().enumerate() {
                        let r = target_ranks[z];
                        if r < from && from - r <= l {
                            next[z] = (next[z] + 1).min(need);
                        }
                    }
                    let total = cost.clone() + price;
                    let better = layer.get(&next).map_or(true, |(c, _, _)| total < *c);
                    if better {
                        layer.insert(next, (total, key.clone(), l));
                    }
                }
            }
            frontier = layer.iter().map(|(k, (c, _, _))| (k.clone(), c.clone())).collect();
            layers.push(layer);
        }
        let mut goal: Vec<usize> = self.targets.iter().map(|&(_, s)| s).collect();
        if let Some(j) = self.shifts {
            goal.push(j);
        }
        let Some(cost) = frontier.get(&goal).cloned() else { return Ok(None) };
        let mut shifts = vec![0usize; self.instance.num_voters()];
        let mut key = goal;
        for v in (0..layers.len()).rev() {
            let (_, prev, l) = &layers[v][&key];
            shifts[v] = *l;
            key = prev.clone();
        }
        Ok(Some(DpSolution { cost, action: ShiftAction::new(shifts) }))
    }
}

fn require_borda_unit(instance: &Instance) -> Result<()> {
    if !instance.election().is_borda() {
        return Err(Error::Unsupported("this algorithm requires the Borda rule".into()));
    }
    if !is_unit(instance) {
        return Err(Error::Unsupported("this algorithm requires unit prices".into()));
    }
    Ok(())
}

/// Adds unit shifts to `action`, voters in index order and each as far as
/// allowed, until it has `target` unit shifts or `p` tops every vote.
pub fn pad_shifts(instance: &Instance, action: &mut ShiftAction, target: usize) {
    let mut total = action.unit_shifts();
    for v in 0..instance.num_voters() {
        if total >= target {
            break;
        }
        let room = instance.max_shift(v) - action.get(v);
        let add = room.min(target - total);
        action.set(v, action.get(v) + add);
        total += add;
    }
}

/// Details of a [`ptas_unit`] run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtasRun {
    pub action: ShiftAction,
    /// The `k` at which the search stopped; `None` when `p` already won.
    pub k: Option<i64>,
    pub bad: Vec<Candidate>,
}

/// `(1+ε)`-approximation for Borda with unit prices.
pub fn ptas_unit(instance: &Instance, eps: &Rational) -> Result<ShiftAction> {
    ptas_unit_run(instance, eps).map(|run| run.action)
}

pub fn ptas_unit_run(instance: &Instance, eps: &Rational) -> Result<PtasRun> {
    require_borda_unit(instance)?;
    require_positive(eps)?;
    let profile = GapProfile::new(instance)?;
    if profile.diffmax() <= 0 {
        return Ok(PtasRun { action: instance.zero_action(), k: None, bad: Vec::new() });
    }
    let one_plus_eps = Rational::one() + eps;
    for k in profile.candidate_ks() {
        let threshold = one_plus_eps.clone() * int(k);
        let bad = profile.bad_set(&threshold);
        let targets = profile.loss_targets(&bad, k);
        let Some(found) = dp_min_cost(instance, &targets)? else { continue };
        if found.cost > int(k) {
            continue;
        }
        let mut action = found.action;
        let target = floor_usize(&threshold).expect("nonnegative threshold");
        pad_shifts(instance, &mut action, target);
        return Ok(PtasRun { action, k: Some(k), bad });
    }
    Err(Error::Invariant("no k in the search range produced an action".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSolution {
    pub cost: Price,
    /// `None` exactly when `cost` is infinite.
    pub action: Option<ShiftAction>,
}

/// Optimal action for Borda with arbitrary prices, in time exponential
/// only in the number of unit shifts of an optimal action.
pub fn fpt_exact(instance: &Instance) -> Result<ExactSolution> {
    if !instance.election().is_borda() {
        return Err(Error::Unsupported("this algorithm requires the Borda rule".into()));
    }
    let profile = GapProfile::new(instance)?;
    if profile.diffmax() <= 0 {
        return Ok(ExactSolution { cost: Price::zero(), action: Some(instance.zero_action()) });
    }
    let mut best: Option<DpSolution> = None;
    for k in profile.candidate_ks() {
        let bad = profile.bad_set(&int(k));
        let targets = profile.loss_targets(&bad, k);
        let Some(found) = dp_min_cost_with_shifts(instance, &targets, k as usize)? else { continue };
        if best.as_ref().map_or(true, |b| found.cost < b.cost) {
            best = Some(found);
        }
    }
    Ok(match best {
        Some(b) => ExactSolution { cost: Extended::Finite(b.cost), action: Some(b.action) },
        None => ExactSolution { cost: Extended::Infinite, action: None },
    })
}

/// Greedy for Borda with uniform all-or-nothing prices: repeatedly moves
/// `p` to the top of a vote where it is ranked lowest.
pub fn greedy_uniform_aon(instance: &Instance) -> Result<ShiftAction> {
    if !instance.election().is_borda() {
        return Err(Error::Unsupported("this algorithm requires the Borda rule".into()));
    }
    if !is_uniform_aon(instance) {
        return Err(Error::Unsupported("this algorithm requires uniform all-or-nothing prices".into()));
    }
    let election = instance.election();
    let p = instance.preferred();
    let mut scores = borda_scores(election)?;
    let mut action = instance.zero_action();
    let mut bribed = vec![false; instance.num_voters()];
    loop {
        if scores.iter().all(|&s| s <= scores[p]) {
            return Ok(action);
        }
        let lowest = (0..instance.num_voters())
            .filter(|&v| !bribed[v])
            .map(|v| election.rank(v, p))
            .max()
            .filter(|&r| r >= 2)
            .ok_or_else(|| Error::Invariant("greedy ran out of voters".into()))?;
        let choice = (0..instance.num_voters())
            .filter(|&v| !bribed[v] && election.rank(v, p) == lowest)
            .min_by_key(|&v| if lowest == 2 { -scores[election.candidate_at(v, 1)] } else { 0 })
            .expect("some voter has the lowest rank");
        for r in 1..lowest {
            scores[election.candidate_at(choice, r)] -= 1;
        }
        scores[p] += lowest as i64 - 1;
        bribed[choice] = true;
        action.set(choice, lowest - 1);
    }
}

pub(crate) fn require_positive(eps: &Rational) -> Result<()> {
    if *eps <= Rational::zero() {
        return Err(Error::Unsupported(format!("epsilon must be positive, got {eps}")));
    }
    Ok(())
}
