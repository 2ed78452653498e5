//! LP-based algorithms for positional scoring rules: the additive
//! `opt + √opt` algorithm and the EPTAS for Borda with unit prices, and the
//! LP1/LP2 rounding scheme with its guessing wrapper for arbitrary prices and
//! per-voter scoring vectors.

use num_traits::{One, Signed, Zero};

use crate::borda::{pad_shifts, ptas_unit, require_positive, GapProfile};
use crate::election::{is_winner, positional_scores, Candidate, Rule, ShiftAction};
use crate::error::{Error, Result};
use crate::lp::{LpOutcome, RowKind};
use crate::pricing::{cost, is_unit, Instance, PriceFunction};
use crate::scalar::{ceil_usize, int, Extended};
use crate::{LinearProgram, Price, Rational};

/// Upper bound on the number of guesses [`ptas_general`] may enumerate.
pub const DEFAULT_BRANCH_BUDGET: u128 = 1_000_000;

/// `x_(v,j)` for every voter and every rank `j ∈ [m]`: the extent to which
/// `p` reaches rank `j` or better in vote `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftMatrix {
    entries: Vec<Vec<Rational>>,
}

impl ShiftMatrix {
    /// The integral matrix `x_(v,j) = [π_v^{-1}(p) − s_v ≤ j]`.
    pub fn from_action(instance: &Instance, action: &ShiftAction) -> Self {
        let m = instance.num_candidates();
        let entries = (0..instance.num_voters())
            .map(|v| {
                let reached = instance.preferred_rank(v) - action.get(v);
                (1..=m).map(|j| if j >= reached { Rational::one() } else { Rational::zero() }).collect()
            })
            .collect();
        ShiftMatrix { entries }
    }

    pub fn get(&self, voter: usize, rank: usize) -> &Rational {
        &self.entries[voter][rank - 1]
    }

    pub fn voter(&self, voter: usize) -> &[Rational] {
        &self.entries[voter]
    }

    /// `0 ≤ x_(v,1) ≤ … ≤ x_(v,m) ≤ 1` for every voter.
    pub fn is_monotone(&self) -> bool {
        self.entries.iter().all(|row| {
            row.first().map_or(true, |x| !x.is_negative())
                && row.last().map_or(true, |x| *x <= Rational::one())
                && row.windows(2).all(|w| w[0] <= w[1])
        })
    }

    pub fn is_integral_voter(&self, voter: usize) -> bool {
        self.entries[voter].iter().all(|x| x.is_zero() || x.is_one())
    }

    pub fn nonintegral_voters(&self) -> usize {
        (0..self.entries.len()).filter(|&v| !self.is_integral_voter(v)).count()
    }

    /// Action of `⌊x⌋`: `p` moves to the best rank with `x = 1`.
    pub fn floor_action(&self, instance: &Instance) -> ShiftAction {
        self.action_where(instance, |x| x.is_one())
    }

    /// Action of `⌈x⌉`: `p` moves to the best rank with `x > 0`.
    pub fn ceil_action(&self, instance: &Instance) -> ShiftAction {
        self.action_where(instance, |x| !x.is_zero())
    }

    fn action_where(&self, instance: &Instance, reached: impl Fn(&Rational) -> bool) -> ShiftAction {
        ShiftAction::new(
            (0..self.entries.len())
                .map(|v| {
                    let r = instance.preferred_rank(v);
                    let best = (1..=r).find(|&j| reached(self.get(v, j))).unwrap_or(r);
                    r - best
                })
                .collect(),
        )
    }
}

/// LP variable indices for `x_(v,j)`; `None` for entries fixed to a
/// constant.
struct Variables {
    index: Vec<Vec<Option<usize>>>,
    count: usize,
}

impl Variables {
    /// One variable per voter `v` and rank `j ∈ [lo_v, hi_v)`.
    fn new(m: usize, ranges: &[(usize, usize)]) -> Self {
        let mut count = 0;
        let index = ranges
            .iter()
            .map(|&(lo, hi)| {
                (1..=m)
                    .map(|j| {
                        (lo <= j && j < hi).then(|| {
                            count += 1;
                            count - 1
                        })
                    })
                    .collect()
            })
            .collect();
        Variables { index, count }
    }

    fn get(&self, voter: usize, rank: usize) -> Option<usize> {
        self.index[voter][rank - 1]
    }

    /// Adds `x_(v,lo) ≥ 0`, `x_(v,j+1) ≥ x_(v,j)` and `x_(v,hi−1) ≤ 1`.
    fn add_chain_rows(&self, lp: &mut LinearProgram, ranges: &[(usize, usize)]) {
        for (v, &(lo, hi)) in ranges.iter().enumerate() {
            if lo >= hi {
                continue;
            }
            lp.add_sparse(&[(self.index[v][lo - 1].unwrap(), int(1))], RowKind::AtLeast, int(0));
            for j in lo..hi - 1 {
                let a = self.get(v, j).unwrap();
                let b = self.get(v, j + 1).unwrap();
                lp.add_sparse(&[(b, int(1)), (a, int(-1))], RowKind::AtLeast, int(0));
            }
            lp.add_sparse(&[(self.get(v, hi - 1).unwrap(), int(-1))], RowKind::AtLeast, int(-1));
        }
    }

    /// Fills a shift matrix: variables from `x`, `0` below each range and
    /// `1` from its upper end on.
    fn matrix(&self, ranges: &[(usize, usize)], x: &[Rational]) -> ShiftMatrix {
        let entries = self
            .index
            .iter()
            .zip(ranges)
            .map(|(row, &(_, hi))| {
                row.iter()
                    .enumerate()
                    .map(|(pos, var)| match var {
                        Some(i) => x[*i].clone(),
                        None if pos + 1 >= hi => Rational::one(),
                        None => Rational::zero(),
                    })
                    .collect()
            })
            .collect();
        ShiftMatrix { entries }
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

/// Details of an [`lp_additive_unit`] run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpuRun {
    pub action: ShiftAction,
    /// The `k` at which the search stopped; `None` when `p` already won.
    pub k: Option<i64>,
    pub bad: Vec<Candidate>,
    pub lp_objective: Option<Rational>,
    pub solution: Option<ShiftMatrix>,
    pub nonintegral_voters: usize,
}

/// `k < d²` with `d > 0`, i.e. `d > √k`.
fn exceeds_sqrt(d: i64, k: i64) -> bool {
    d > 0 && (d as i128) * (d as i128) > k as i128
}

/// Borda with unit prices: a successful action with at most
/// `opt + ⌊√opt⌋` unit shifts.
pub fn lp_additive_unit(instance: &Instance) -> Result<ShiftAction> {
    lp_additive_unit_run(instance).map(|run| run.action)
}

pub fn lp_additive_unit_run(instance: &Instance) -> Result<LpuRun> {
    require_borda_unit(instance)?;
    let profile = GapProfile::new(instance)?;
    if profile.diffmax() <= 0 {
        return Ok(LpuRun {
            action: instance.zero_action(),
            k: None,
            bad: Vec::new(),
            lp_objective: None,
            solution: None,
            nonintegral_voters: 0,
        });
    }
    let election = instance.election();
    let p = instance.preferred();
    let m = instance.num_candidates();
    let ranges: Vec<(usize, usize)> = (0..instance.num_voters()).map(|v| (1, instance.preferred_rank(v))).collect();
    let vars = Variables::new(m, &ranges);
    for k in profile.candidate_ks() {
        let bad: Vec<Candidate> = (0..m).filter(|&c| exceeds_sqrt(profile.gap(c) - k, k)).collect();
        let mut lp = LinearProgram::new(vars.count);
        lp.set_objective(vec![int(1); vars.count]);
        vars.add_chain_rows(&mut lp, &ranges);
        for &c in &bad {
            let terms: Vec<(usize, Rational)> = election
                .voters_preferring(c, p)
                .into_iter()
                .map(|v| (vars.get(v, election.rank(v, c)).unwrap(), int(1)))
                .collect();
            lp.add_sparse(&terms, RowKind::AtLeast, int(profile.gap(c) - k));
        }
        let LpOutcome::Optimal(solution) = lp.solve() else { continue };
        if solution.objective > int(k) {
            continue;
        }
        let matrix = vars.matrix(&ranges, &solution.x);
        let mut action = matrix.floor_action(instance);
        pad_shifts(instance, &mut action, (k + k.isqrt()) as usize);
        return Ok(LpuRun {
            action,
            k: Some(k),
            bad,
            lp_objective: Some(solution.objective),
            nonintegral_voters: matrix.nonintegral_voters(),
            solution: Some(matrix),
        });
    }
    Err(Error::Invariant("no k in the search range produced an action".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EptasBranch {
    Combinatorial,
    LinearProgram,
}

impl EptasBranch {
    pub fn name(self) -> &'static str {
        match self {
            EptasBranch::Combinatorial => "combinatorial",
            EptasBranch::LinearProgram => "lp",
        }
    }
}

/// The branch [`eptas_unit`] takes: combinatorial iff `diffmax < 2/ε²`.
pub fn eptas_branch(instance: &Instance, eps: &Rational) -> Result<EptasBranch> {
    require_positive(eps)?;
    let d = GapProfile::new(instance)?.diffmax();
    Ok(if int(d) * eps * eps < int(2) { EptasBranch::Combinatorial } else { EptasBranch::LinearProgram })
}

/// `(1+ε)`-approximation for Borda with unit prices whose exponential part
/// depends on `ε` alone.
pub fn eptas_unit(instance: &Instance, eps: &Rational) -> Result<(ShiftAction, EptasBranch)> {
    require_borda_unit(instance)?;
    let branch = eptas_branch(instance, eps)?;
    let action = match branch {
        EptasBranch::Combinatorial => ptas_unit(instance, eps)?,
        EptasBranch::LinearProgram => lp_additive_unit(instance)?,
    };
    Ok((action, branch))
}

/// The first-order approximation `y*` and the candidates it leaves ahead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelaxationPlan {
    pub lp1_objective: Rational,
    pub y_star: ShiftMatrix,
    /// `j_v`: smallest rank with `y*_(v,j) = 1`.
    pub j_v: Vec<usize>,
    pub c_bad: Vec<Candidate>,
}

/// Details of an [`lp_additive_general`] run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveRun {
    pub action: ShiftAction,
    /// `None` when `p` already won and no LP was solved.
    pub plan: Option<RelaxationPlan>,
    pub lp2_solution: Option<ShiftMatrix>,
    pub nonintegral_voters: usize,
}

/// Additive-error algorithm for positional scoring rules with arbitrary
/// prices: cost at most `(1+ε)·opt + (1 + 1/ε)·ψ^max`.
pub fn lp_additive_general(instance: &Instance, eps: &Rational) -> Result<ShiftAction> {
    lp_additive_general_run(instance, eps).map(|run| run.action)
}

pub fn lp_additive_general_run(instance: &Instance, eps: &Rational) -> Result<AdditiveRun> {
    require_positive(eps)?;
    let election = instance.election();
    let p = instance.preferred();
    let m = instance.num_candidates();
    let n = instance.num_voters();
    let rule = Rule::Positional;
    if is_winner(election, &rule, p) {
        return Ok(AdditiveRun { action: instance.zero_action(), plan: None, lp2_solution: None, nonintegral_voters: 0 });
    }
    let scores = positional_scores(election);
    let score = |c: Candidate| scores.get(c).clone();
    let rank_p: Vec<usize> = (0..n).map(|v| instance.preferred_rank(v)).collect();

    // LP1: variables for ranks reachable at finite price.
    let ranges1: Vec<(usize, usize)> = (0..n)
        .map(|v| (rank_p[v] - instance.price_function(v).max_finite_shift(), rank_p[v]))
        .collect();
    let vars1 = Variables::new(m, &ranges1);
    let mut lp1 = LinearProgram::new(vars1.count);
    set_price_objective(&mut lp1, instance, &vars1, &ranges1);
    vars1.add_chain_rows(&mut lp1, &ranges1);
    for c in (0..m).filter(|&c| c != p) {
        let (terms, constant) = score_row(instance, c, &vars1, &ranges1);
        lp1.add_sparse(&terms, RowKind::AtLeast, score(c) - score(p) - constant);
    }
    let x = match lp1.solve() {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible => return Err(Error::NoFiniteSolution),
        other => return Err(Error::Invariant(format!("first relaxation is not bounded: {other:?}"))),
    };
    let x_matrix = vars1.matrix(&ranges1, &x.x);

    // y* = min(1, (1+ε)x) and j_v.
    let scale = Rational::one() + eps;
    let y_star = ShiftMatrix {
        entries: x_matrix
            .entries
            .iter()
            .map(|row| row.iter().map(|x| (x.clone() * &scale).min(Rational::one())).collect())
            .collect(),
    };
    let j_v: Vec<usize> = (0..n)
        .map(|v| (1..=m).find(|&j| y_star.get(v, j).is_one()).expect("y* reaches 1 at p's rank"))
        .collect();
    let p_gain_star: Rational = (0..n)
        .flat_map(|v| (1..rank_p[v]).map(move |j| (v, j)))
        .map(|(v, j)| election.weight_drop(v, j) * y_star.get(v, j))
        .sum();
    let c_bad: Vec<Candidate> = (0..m)
        .filter(|&c| c != p)
        .filter(|&c| {
            let loss: Rational = election
                .voters_preferring(c, p)
                .into_iter()
                .filter(|&v| election.rank(v, c) >= j_v[v])
                .map(|v| election.weight_drop(v, election.rank(v, c)))
                .sum();
            score(c) - loss > score(p) + &p_gain_star
        })
        .collect();
    if int(c_bad.len() as i64) * eps >= int(1) {
        return Err(Error::Invariant(format!("{} candidates left ahead, expected fewer than 1/eps", c_bad.len())));
    }

    // LP2: free variables below j_v, fixed to 1 from j_v on.
    let ranges2: Vec<(usize, usize)> = (0..n).map(|v| (ranges1[v].0.min(j_v[v]), j_v[v])).collect();
    let vars2 = Variables::new(m, &ranges2);
    let mut lp2 = LinearProgram::new(vars2.count);
    set_price_objective(&mut lp2, instance, &vars2, &ranges2);
    vars2.add_chain_rows(&mut lp2, &ranges2);
    for &c in &c_bad {
        let (terms, constant) = score_row(instance, c, &vars2, &ranges2);
        lp2.add_sparse(&terms, RowKind::AtLeast, score(c) - score(p) - constant);
    }
    let (gain_terms, gain_constant) = gain_terms(instance, &vars2, &ranges2);
    lp2.add_sparse(&gain_terms, RowKind::AtLeast, p_gain_star - gain_constant);
    let y = match lp2.solve() {
        LpOutcome::Optimal(s) => s,
        other => return Err(Error::Invariant(format!("second relaxation has no optimum: {other:?}"))),
    };
    let y_matrix = vars2.matrix(&ranges2, &y.x);
    let nonintegral = y_matrix.nonintegral_voters();
    if nonintegral > 0 && int(nonintegral as i64 - 1) * eps >= int(1) {
        return Err(Error::Invariant(format!("{nonintegral} non-integral voters, expected fewer than 1 + 1/eps")));
    }
    let action = y_matrix.ceil_action(instance);
    if !is_winner(&instance.shifted_election(&action)?, &rule, p) {
        return Err(Error::Invariant("rounded action is not successful".into()));
    }
    Ok(AdditiveRun {
        action,
        plan: Some(RelaxationPlan { lp1_objective: x.objective, y_star, j_v, c_bad }),
        lp2_solution: Some(y_matrix),
        nonintegral_voters: nonintegral,
    })
}

/// Objective `Σ Δψ_v(π_v^{-1}(p) − j) · x_(v,j)` over the variables.
fn set_price_objective(lp: &mut LinearProgram, instance: &Instance, vars: &Variables, ranges: &[(usize, usize)]) {
    for (v, &(lo, hi)) in ranges.iter().enumerate() {
        let r = instance.preferred_rank(v);
        let psi = instance.price_function(v);
        for j in lo..hi {
            let delta = psi.marginal(r - j).into_finite().expect("variables only cover finite prices");
            lp.set_cost(vars.get(v, j).unwrap(), delta);
        }
    }
}

/// `Σ_v Σ_{j < π_v^{-1}(p)} Δw^v_j x_(v,j)` split into variable terms and
/// the contribution of entries fixed to 1.
fn gain_terms(instance: &Instance, vars: &Variables, ranges: &[(usize, usize)]) -> (Vec<(usize, Rational)>, Rational) {
    let election = instance.election();
    let mut terms = Vec::new();
    let mut constant = Rational::zero();
    for (v, &(_, hi)) in ranges.iter().enumerate() {
        for j in 1..instance.preferred_rank(v) {
            let dw = election.weight_drop(v, j);
            match vars.get(v, j) {
                Some(i) => terms.push((i, dw)),
                None if j >= hi => constant += dw,
                None => {}
            }
        }
    }
    (terms, constant)
}

/// Left-hand side of "`c` ends no higher than `p`":
/// `Σ_{v ∈ V_{c≻p}} Δw_{π_v^{-1}(c)} x_(v,π_v^{-1}(c)) + Σ Δw_j x_(v,j)`.
fn score_row(
    instance: &Instance,
    c: Candidate,
    vars: &Variables,
    ranges: &[(usize, usize)],
) -> (Vec<(usize, Rational)>, Rational) {
    let election = instance.election();
    let (mut terms, mut constant) = gain_terms(instance, vars, ranges);
    for v in election.voters_preferring(c, instance.preferred()) {
        let rc = election.rank(v, c);
        let dw = election.weight_drop(v, rc);
        match vars.get(v, rc) {
            Some(i) => terms.push((i, dw)),
            None if rc >= ranges[v].1 => constant += dw,
            None => {}
        }
    }
    (terms, constant)
}

/// Details of a [`ptas_general`] run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralRun {
    pub action: ShiftAction,
    pub cost: Rational,
    pub branches: usize,
    pub successful_branches: usize,
    pub max_bad: usize,
    pub max_nonintegral: usize,
}

/// `(1+ε)`-approximation for positional scoring rules with arbitrary
/// prices.
pub fn ptas_general(instance: &Instance, eps: &Rational) -> Result<ShiftAction> {
    ptas_general_run(instance, eps).map(|run| run.action)
}

/// `q = ⌈8/ε²⌉`, the number of voters whose shifts are guessed.
pub fn guess_size(eps: &Rational) -> Result<usize> {
    require_positive(eps)?;
    let delta = eps.clone() * eps / int(8);
    ceil_usize(&(Rational::one() / delta)).ok_or_else(|| Error::Unsupported("epsilon too small".into()))
}

pub fn ptas_general_run(instance: &Instance, eps: &Rational) -> Result<GeneralRun> {
    ptas_general_with_budget(instance, eps, DEFAULT_BRANCH_BUDGET)
}

pub fn ptas_general_with_budget(instance: &Instance, eps: &Rational, budget: u128) -> Result<GeneralRun> {
    let q = guess_size(eps)?;
    let n = instance.num_voters();
    let rule = Rule::Positional;
    if is_winner(instance.election(), &rule, instance.preferred()) {
        return Ok(GeneralRun {
            action: instance.zero_action(),
            cost: Rational::zero(),
            branches: 0,
            successful_branches: 0,
            max_bad: 0,
            max_nonintegral: 0,
        });
    }
    let size = q.min(n);
    let subsets = combinations(n, size);
    let total = subsets.iter().fold(0u128, |acc, s| {
        acc.saturating_add(s.iter().fold(1u128, |a, &v| a.saturating_mul(instance.max_shift(v) as u128 + 1)))
    });
    if total > budget {
        return Err(Error::BudgetExceeded { size: total, budget });
    }
    let half = eps.clone() / int(2);
    let mut best: Option<(Rational, ShiftAction)> = None;
    let mut run = GeneralRun {
        action: instance.zero_action(),
        cost: Rational::zero(),
        branches: 0,
        successful_branches: 0,
        max_bad: 0,
        max_nonintegral: 0,
    };
    for subset in &subsets {
        let mut guess = vec![0usize; subset.len()];
        loop {
            run.branches += 1;
            let guessed = restricted_instance(instance, subset, &guess)?;
            match lp_additive_general_run(&guessed, &half) {
                Ok(result) => {
                    if let Some(plan) = &result.plan {
                        run.max_bad = run.max_bad.max(plan.c_bad.len());
                    }
                    run.max_nonintegral = run.max_nonintegral.max(result.nonintegral_voters);
                    if let Extended::Finite(c) = cost(instance, &result.action)? {
                        if instance.is_successful(&result.action, &rule)? {
                            run.successful_branches += 1;
                            if best.as_ref().map_or(true, |(b, _)| c < *b) {
                                best = Some((c, result.action));
                            }
                        }
                    }
                }
                Err(Error::NoFiniteSolution) => {}
                Err(e) => return Err(e),
            }
            if !next_vector(&mut guess, |i| instance.max_shift(subset[i])) {
                break;
            }
        }
    }
    let (c, action) = best.ok_or(Error::NoFiniteSolution)?;
    run.cost = c;
    run.action = action;
    Ok(run)
}

/// Prices after guessing `s_v` for the voters in `subset`: those voters
/// shift for free up to `s_v` and not beyond; every other price above
/// `b = min_{v ∈ S} ψ_v(s_v)` becomes infinite.
pub fn restricted_instance(instance: &Instance, subset: &[usize], guess: &[usize]) -> Result<Instance> {
    let b: Price = subset
        .iter()
        .zip(guess)
        .map(|(&v, &s)| instance.price_function(v).price(s).clone())
        .min()
        .unwrap_or(Extended::Infinite);
    let mut prices = Vec::with_capacity(instance.num_voters());
    for v in 0..instance.num_voters() {
        let psi = instance.price_function(v);
        let values: Vec<Price> = match subset.iter().position(|&u| u == v) {
            Some(i) => (1..=psi.max_shift())
                .map(|t| if t <= guess[i] { Price::zero() } else { Extended::Infinite })
                .collect(),
            None => (1..=psi.max_shift())
                .map(|t| if *psi.price(t) <= b { psi.price(t).clone() } else { Extended::Infinite })
                .collect(),
        };
        prices.push(PriceFunction::new(values)?);
    }
    instance.with_prices(prices)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i) else { return out };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Advances a mixed-radix counter in lexicographic order.
fn next_vector(digits: &mut [usize], max: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        if digits[i] < max(i) {
            digits[i] += 1;
            for d in digits[i + 1..].iter_mut() {
                *d = 0;
            }
            return true;
        }
    }
    false
}
